use crate::error::{Error, Result};
use crate::instances::{AgentId, Matching, Profile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockingReport {
    pub matching: Matching,
    /// Pairs `(a, b)` with `a < b`, in ascending order.
    pub pairs: Vec<(AgentId, AgentId)>,
    pub count: usize,
}

#[inline]
pub(crate) fn blocks(p: &Profile, partner: &[Option<AgentId>], a: AgentId, b: AgentId) -> bool {
    p.prefers(a, b, partner[a]) && p.prefers(b, a, partner[b])
}

fn check(p: &Profile, m: &Matching) -> Result<()> {
    if m.num_agents() != p.num_agents() {
        return Err(Error::InvalidMatching(format!(
            "matching over {} agents for an instance with {}",
            m.num_agents(),
            p.num_agents()
        )));
    }
    Ok(())
}

/// Every pair `{a, b}` where each is unmatched or prefers the other to its
/// partner.
pub fn blocking_pairs(p: &Profile, m: &Matching) -> Result<BlockingReport> {
    check(p, m)?;
    let partner: Vec<Option<AgentId>> = (0..m.num_agents()).map(|a| m.partner(a)).collect();
    let mut pairs = Vec::new();
    for a in 0..p.num_agents() {
        for &b in p.list(a) {
            if a < b && blocks(p, &partner, a, b) {
                pairs.push((a, b));
            }
        }
    }
    pairs.sort_unstable();
    Ok(BlockingReport {
        matching: m.clone(),
        count: pairs.len(),
        pairs,
    })
}

pub fn count_blocking_pairs(p: &Profile, m: &Matching) -> Result<usize> {
    check(p, m)?;
    Ok(count_raw(p, &(0..m.num_agents()).map(|a| m.partner(a)).collect::<Vec<_>>()))
}

pub(crate) fn count_raw(p: &Profile, partner: &[Option<AgentId>]) -> usize {
    let mut c = 0;
    for a in 0..p.num_agents() {
        for &b in p.list(a) {
            if a < b && blocks(p, partner, a, b) {
                c += 1;
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremes::{realize_extreme, ExtremeKind};

    #[test]
    fn master_list_pairs_adjacent_agents() {
        let id = realize_extreme(ExtremeKind::Id, 4).unwrap();
        let m = Matching::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(blocking_pairs(id.profile(), &m).unwrap().count, 0);
    }

    #[test]
    fn cyclic_instance_blocked_once() {
        let md = realize_extreme(ExtremeKind::Md, 4).unwrap();
        let m = Matching::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        let r = blocking_pairs(md.profile(), &m).unwrap();
        assert_eq!(r.pairs, vec![(1, 3)]);
        assert_eq!(r.count, 1);
    }

    #[test]
    fn empty_matching_is_blocked_by_everyone() {
        for two_n in [2usize, 4, 6, 8] {
            let inst = realize_extreme(ExtremeKind::Ma, two_n.max(4)).unwrap();
            let m = Matching::empty(inst.num_agents());
            let n = inst.num_agents() / 2;
            assert_eq!(count_blocking_pairs(inst.profile(), &m).unwrap(), n * (2 * n - 1));
        }
    }

    #[test]
    fn size_mismatch() {
        let id = realize_extreme(ExtremeKind::Id, 4).unwrap();
        assert!(blocking_pairs(id.profile(), &Matching::empty(6)).is_err());
    }
}
