use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::blocking::count_raw;
use crate::error::{Error, Result};
use crate::instances::{AgentId, Matching, Profile};

/// A perfect matching drawn uniformly at random.
///
/// SR: a shuffled permutation paired consecutively. SM: a shuffled
/// bijection from men to women.
pub fn random_perfect_matching<R: Rng + ?Sized>(p: &Profile, rng: &mut R) -> Result<Matching> {
    Ok(Matching::from_partner(random_partner(p, rng)?))
}

fn random_partner<R: Rng + ?Sized>(p: &Profile, rng: &mut R) -> Result<Vec<Option<AgentId>>> {
    let m = p.num_agents();
    let mut partner = vec![None; m];
    match p.men() {
        Some(n) => {
            if 2 * n != m {
                return Err(Error::InvalidInstance("sides differ in size".into()));
            }
            let mut women: Vec<AgentId> = (n..m).collect();
            women.shuffle(rng);
            for (man, &w) in women.iter().enumerate() {
                partner[man] = Some(w);
                partner[w] = Some(man);
            }
        }
        None => {
            if m % 2 != 0 {
                return Err(Error::InvalidInstance(format!(
                    "{m} agents admit no perfect matching"
                )));
            }
            let mut perm: Vec<AgentId> = (0..m).collect();
            perm.shuffle(rng);
            for pair in perm.chunks(2) {
                partner[pair[0]] = Some(pair[1]);
                partner[pair[1]] = Some(pair[0]);
            }
        }
    }
    Ok(partner)
}

/// Mean number of blocking pairs over `samples` uniform perfect matchings.
pub fn avg_blocking_pairs_random(p: &Profile, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParam("samples must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0u64;
    for _ in 0..samples {
        total += count_raw(p, &random_partner(p, &mut rng)?) as u64;
    }
    Ok(total as f64 / samples as f64)
}
