use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::blocking::{blocks, count_raw};
use super::{irving_stable_matching, min_weight_perfect_matching, random_perfect_matching};
use super::{Objective, Outcome, SolveResult};
use crate::error::{Error, Result};
use crate::instances::{AgentId, Matching, Profile};

pub const DEFAULT_LIMIT_K: u64 = 5;
pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;

// Random matchings tried when only an upper bound can be reported.
const UPPER_SAMPLES: usize = 200;

struct Dfs<'a> {
    p: &'a Profile,
    partner: Vec<Option<AgentId>>,
    order: Vec<AgentId>,
    k: usize,
    nodes: u64,
    node_limit: u64,
    hit_limit: bool,
}

impl Dfs<'_> {
    fn new_pairs(&self, a: AgentId, b: AgentId) -> usize {
        let mut c = 0;
        for &x in &self.order {
            if x != a && x != b {
                c += blocks(self.p, &self.partner, a, x) as usize;
                c += blocks(self.p, &self.partner, b, x) as usize;
            }
        }
        c
    }

    // Completes the current partial matching with at most `k - used`
    // further blocking pairs.
    fn run(&mut self, used: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.hit_limit = true;
            return false;
        }
        let Some(a) = (0..self.partner.len()).find(|&a| self.partner[a].is_none()) else {
            return true;
        };
        for &b in self.p.list(a) {
            if self.partner[b].is_some() {
                continue;
            }
            self.partner[a] = Some(b);
            self.partner[b] = Some(a);
            let used = used + self.new_pairs(a, b);
            if used <= self.k {
                self.order.push(a);
                self.order.push(b);
                if self.run(used) {
                    return true;
                }
                self.order.truncate(self.order.len() - 2);
            }
            self.partner[a] = None;
            self.partner[b] = None;
            if self.hit_limit {
                return false;
            }
        }
        false
    }
}

/// [`min_blocking_pairs_with`] under the default node limit.
pub fn min_blocking_pairs_matching(p: &Profile, limit_k: u64) -> Result<SolveResult> {
    min_blocking_pairs_with(p, limit_k, DEFAULT_NODE_LIMIT)
}

/// Perfect matching with the fewest blocking pairs.
///
/// `k = 0` is settled by Irving's algorithm. Larger budgets `k = 1..=limit_k`
/// run a depth-first search over perfect matchings that pairs the lowest
/// free agent with each free candidate in its preference order and drops a
/// branch once pairs among decided agents exceed `k`. The first budget that
/// succeeds is the optimum. When the budget runs past `limit_k` or the node
/// limit is hit the result is `Outcome::Bounds`, with the upper end taken from
/// the min-weight matching and a batch of random matchings.
pub fn min_blocking_pairs_with(p: &Profile, limit_k: u64, node_limit: u64) -> Result<SolveResult> {
    let start = Instant::now();
    let m = p.num_agents();
    if m % 2 != 0 {
        return Err(Error::InvalidInstance(format!(
            "{m} agents admit no perfect matching"
        )));
    }
    let done = |outcome, matching, nodes| SolveResult {
        objective: Objective::MinBlockingPairs,
        outcome,
        matching,
        nodes,
        elapsed: start.elapsed(),
    };
    if let Some(s) = irving_stable_matching(p) {
        if s.is_perfect() {
            return Ok(done(Outcome::Optimal(0), Some(s), 1));
        }
    }
    let mut dfs = Dfs {
        p,
        partner: vec![None; m],
        order: Vec::with_capacity(m),
        k: 0,
        nodes: 1,
        node_limit,
        hit_limit: false,
    };
    let mut lower = 1;
    for k in 1..=limit_k {
        dfs.k = k as usize;
        if dfs.run(0) {
            let found = Matching::from_partner(dfs.partner.clone());
            debug_assert_eq!(count_raw(p, &dfs.partner) as u64, k);
            return Ok(done(Outcome::Optimal(k), Some(found), dfs.nodes));
        }
        if dfs.hit_limit {
            break;
        }
        lower = k + 1;
    }
    let (upper, witness) = upper_bound(p)?;
    let lower = lower.min(upper);
    let outcome = if lower == upper {
        Outcome::Optimal(upper)
    } else {
        Outcome::Bounds { lower, upper }
    };
    Ok(done(outcome, Some(witness), dfs.nodes))
}

fn upper_bound(p: &Profile) -> Result<(u64, Matching)> {
    let mut best: Option<(u64, Matching)> = None;
    let mut consider = |m: Matching| {
        let partner: Vec<Option<AgentId>> = (0..m.num_agents()).map(|a| m.partner(a)).collect();
        let c = count_raw(p, &partner) as u64;
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, m));
        }
    };
    if let Ok((m, _)) = min_weight_perfect_matching(p) {
        consider(m);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..UPPER_SAMPLES {
        consider(random_perfect_matching(p, &mut rng)?);
    }
    Ok(best.expect("at least one sample"))
}
