use super::{AgentId, SrInstance};
use crate::error::{Error, Result};

pub(crate) fn check_permutation(sigma: &[usize], m: usize) -> Result<()> {
    if sigma.len() != m {
        return Err(Error::NotPermutation(format!(
            "length {} for {m} agents",
            sigma.len()
        )));
    }
    let mut hit = vec![false; m];
    for &s in sigma {
        if s >= m || hit[s] {
            return Err(Error::NotPermutation(format!("image {s} repeated or out of range")));
        }
        hit[s] = true;
    }
    Ok(())
}

pub fn invert_permutation(sigma: &[usize]) -> Result<Vec<usize>> {
    check_permutation(sigma, sigma.len())?;
    let mut inv = vec![0; sigma.len()];
    for (a, &s) in sigma.iter().enumerate() {
        inv[s] = a;
    }
    Ok(inv)
}

/// Renames every agent `a` to `sigma[a]`: agent `sigma[a]` of the result
/// holds `a`'s ranking with each entry renamed.
pub fn relabel(inst: &SrInstance, sigma: &[AgentId]) -> Result<SrInstance> {
    let m = inst.num_agents();
    check_permutation(sigma, m)?;
    let mut prefs = vec![Vec::new(); m];
    for a in 0..m {
        prefs[sigma[a]] = inst.prefs(a).iter().map(|&b| sigma[b]).collect();
    }
    SrInstance::new_any_size(prefs)
}

/// Decides whether some renaming maps `i` onto `j` and returns the first
/// witness found, trying images of agent 0 in ascending order.
///
/// Fixing the image of agent 0 determines the whole renaming: the agent
/// `i` ranks at position `k` must go to the agent `j`'s image ranks there.
pub fn check_isomorphic(i: &SrInstance, j: &SrInstance) -> Result<Option<Vec<AgentId>>> {
    let m = i.num_agents();
    if j.num_agents() != m {
        return Err(Error::SizeMismatch(m, j.num_agents()));
    }
    if m == 1 {
        return Ok(Some(vec![0]));
    }
    let mut sigma = vec![0usize; m];
    'anchor: for t in 0..m {
        sigma[0] = t;
        for (k, &b) in i.prefs(0).iter().enumerate() {
            sigma[b] = j.prefs(t)[k];
        }
        for a in 0..m {
            let target = j.prefs(sigma[a]);
            for (k, &b) in i.prefs(a).iter().enumerate() {
                if sigma[b] != target[k] {
                    continue 'anchor;
                }
            }
        }
        return Ok(Some(sigma));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sr(p: &[&[usize]]) -> SrInstance {
        SrInstance::new(p.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn isomorphic_pair_with_witness() {
        // a: b c d; b: c a d; c: b d a; d: a c b
        let i = sr(&[&[1, 2, 3], &[2, 0, 3], &[1, 3, 0], &[0, 2, 1]]);
        // x: y w z; y: z w x; z: w y x; w: z x y
        let j = sr(&[&[1, 3, 2], &[2, 3, 0], &[3, 1, 0], &[2, 0, 1]]);
        let w = check_isomorphic(&i, &j).unwrap().unwrap();
        assert_eq!(w, vec![1, 2, 3, 0]);
        assert_eq!(relabel(&i, &w).unwrap(), j);
    }

    #[test]
    fn equal_mutual_attraction_but_not_isomorphic() {
        let i = sr(&[&[1, 2, 3], &[0, 2, 3], &[0, 3, 1], &[0, 1, 2]]);
        let j = sr(&[&[1, 2, 3], &[0, 3, 2], &[0, 1, 3], &[0, 2, 1]]);
        assert_eq!(check_isomorphic(&i, &j).unwrap(), None);
    }

    #[test]
    fn reflexive_and_identity() {
        let i = sr(&[&[1, 2, 3], &[2, 0, 3], &[1, 3, 0], &[0, 2, 1]]);
        assert_eq!(check_isomorphic(&i, &i).unwrap(), Some(vec![0, 1, 2, 3]));
        assert_eq!(relabel(&i, &[0, 1, 2, 3]).unwrap(), i);
    }

    #[test]
    fn rejects_bad_permutations() {
        let i = sr(&[&[1, 2, 3], &[2, 0, 3], &[1, 3, 0], &[0, 2, 1]]);
        assert!(relabel(&i, &[0, 0, 2, 3]).is_err());
        assert!(relabel(&i, &[0, 1, 2]).is_err());
        assert!(relabel(&i, &[0, 1, 2, 4]).is_err());
        let big = sr(&[&[1], &[0]]);
        assert!(check_isomorphic(&i, &big).is_err());
    }
}
