use std::fmt;

use super::AgentId;
use crate::error::{Error, Result};

/// A set of disjoint agent pairs over `num_agents` agents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    partner: Vec<Option<AgentId>>,
}

impl Matching {
    pub fn empty(num_agents: usize) -> Self {
        Matching {
            partner: vec![None; num_agents],
        }
    }

    pub fn from_pairs(num_agents: usize, pairs: &[(AgentId, AgentId)]) -> Result<Self> {
        let mut m = Matching::empty(num_agents);
        for &(a, b) in pairs {
            if a >= num_agents || b >= num_agents {
                return Err(Error::InvalidMatching(format!(
                    "pair {a}-{b} references an unknown agent"
                )));
            }
            if a == b {
                return Err(Error::InvalidMatching(format!("agent {a} matched to itself")));
            }
            if m.partner[a].is_some() || m.partner[b].is_some() {
                return Err(Error::InvalidMatching(format!(
                    "pair {a}-{b} overlaps another pair"
                )));
            }
            m.partner[a] = Some(b);
            m.partner[b] = Some(a);
        }
        Ok(m)
    }

    /// Caller guarantees the partner function is an involution without
    /// fixed points.
    pub(crate) fn from_partner(partner: Vec<Option<AgentId>>) -> Self {
        debug_assert!(partner
            .iter()
            .enumerate()
            .all(|(a, p)| p.map_or(true, |b| b != a && partner[b] == Some(a))));
        Matching { partner }
    }

    pub fn num_agents(&self) -> usize {
        self.partner.len()
    }

    #[inline]
    pub fn partner(&self, a: AgentId) -> Option<AgentId> {
        self.partner[a]
    }

    /// Pairs `(a, b)` with `a < b`, sorted by `a`.
    pub fn pairs(&self) -> Vec<(AgentId, AgentId)> {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(a, p)| p.filter(|&b| a < b).map(|b| (a, b)))
            .collect()
    }

    pub fn size(&self) -> usize {
        self.partner.iter().filter(|p| p.is_some()).count() / 2
    }

    pub fn is_perfect(&self) -> bool {
        self.partner.iter().all(|p| p.is_some())
    }
}

/// Space-separated `a-b` pairs, e.g. `0-1 2-3`.
impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, b) in self.pairs() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{a}-{b}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_normalized() {
        let m = Matching::from_pairs(4, &[(3, 2), (1, 0)]).unwrap();
        assert_eq!(m.pairs(), vec![(0, 1), (2, 3)]);
        assert!(m.is_perfect());
        assert_eq!(m.to_string(), "0-1 2-3");
        assert_eq!(m.size(), 2);
    }

    #[test]
    fn rejects_overlap_self_and_range() {
        assert!(Matching::from_pairs(4, &[(0, 1), (1, 2)]).is_err());
        assert!(Matching::from_pairs(4, &[(2, 2)]).is_err());
        assert!(Matching::from_pairs(4, &[(0, 4)]).is_err());
    }

    #[test]
    fn partial_matching() {
        let m = Matching::from_pairs(4, &[(0, 2)]).unwrap();
        assert!(!m.is_perfect());
        assert_eq!(m.partner(1), None);
        assert_eq!(m.partner(2), Some(0));
    }
}
