//! Stable Roommates and Stable Marriage instances, matchings, the text file
//! format, relabeling and isomorphism.
//!
//! Both instance kinds share one id space. SR agents are `0..2n`; in an SM
//! instance men are `0..n` and women are `n..2n`.

mod format;
mod matching;
mod relabel;

pub use format::{parse_instance, serialize_instance};
pub use matching::Matching;
pub use relabel::{check_isomorphic, invert_permutation, relabel};

use crate::error::{Error, Result};

pub type AgentId = usize;

/// Preference lists over a common id space together with an O(1) rank table.
///
/// Lists may be incomplete but acceptability is symmetric: `b` appears in
/// `a`'s list exactly when `a` appears in `b`'s. This is what the solvers
/// work on, so SR and SM instances go through the same code.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    lists: Vec<Vec<AgentId>>,
    // rank[a * m + b] is the 1-based position of b in a's list, 0 if absent.
    rank: Vec<u32>,
    men: Option<usize>,
}

impl Profile {
    /// Validates and builds a profile. `men = Some(n)` marks a bipartite
    /// profile whose first `n` agents form one side.
    pub fn new(lists: Vec<Vec<AgentId>>, men: Option<usize>) -> Result<Self> {
        let m = lists.len();
        let mut rank = vec![0u32; m * m];
        for (a, list) in lists.iter().enumerate() {
            for (i, &b) in list.iter().enumerate() {
                if b >= m {
                    return Err(Error::InvalidInstance(format!(
                        "agent {a} ranks unknown agent {b}"
                    )));
                }
                if b == a {
                    return Err(Error::InvalidInstance(format!("agent {a} ranks itself")));
                }
                if let Some(n) = men {
                    if (a < n) == (b < n) {
                        return Err(Error::InvalidInstance(format!(
                            "agent {a} ranks agent {b} from its own side"
                        )));
                    }
                }
                if rank[a * m + b] != 0 {
                    return Err(Error::InvalidInstance(format!(
                        "agent {a} ranks agent {b} twice"
                    )));
                }
                rank[a * m + b] = i as u32 + 1;
            }
        }
        for a in 0..m {
            for b in 0..m {
                if (rank[a * m + b] == 0) != (rank[b * m + a] == 0) {
                    return Err(Error::InvalidInstance(format!(
                        "acceptability of {a} and {b} is not mutual"
                    )));
                }
            }
        }
        Ok(Profile { lists, rank, men })
    }

    pub fn num_agents(&self) -> usize {
        self.lists.len()
    }

    /// Preference list of `a`, most preferred first.
    pub fn list(&self, a: AgentId) -> &[AgentId] {
        &self.lists[a]
    }

    /// 1-based position of `b` in `a`'s list.
    pub fn rank(&self, a: AgentId, b: AgentId) -> Option<u32> {
        match self.rank[a * self.lists.len() + b] {
            0 => None,
            r => Some(r),
        }
    }

    /// Raw rank with 0 for "not ranked". Hot loops use this.
    #[inline]
    pub(crate) fn r(&self, a: AgentId, b: AgentId) -> u32 {
        self.rank[a * self.lists.len() + b]
    }

    /// Whether `a` strictly prefers `b` to its situation `current`
    /// (`None` = unmatched). Unacceptable `b` is never preferred; an
    /// unacceptable current partner is no better than being unmatched.
    #[inline]
    pub fn prefers(&self, a: AgentId, b: AgentId, current: Option<AgentId>) -> bool {
        let rb = self.r(a, b);
        if rb == 0 {
            return false;
        }
        match current {
            None => true,
            Some(c) => {
                let rc = self.r(a, c);
                rc == 0 || rb < rc
            }
        }
    }

    /// Number of agents on the first side if the profile is bipartite.
    pub fn men(&self) -> Option<usize> {
        self.men
    }
}

/// A Stable Roommates instance: every agent strictly ranks all others.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SrInstance {
    profile: Profile,
}

impl SrInstance {
    /// Builds an instance with an even, positive number of agents.
    pub fn new(prefs: Vec<Vec<AgentId>>) -> Result<Self> {
        if prefs.is_empty() || prefs.len() % 2 != 0 {
            return Err(Error::InvalidInstance(format!(
                "number of agents must be even and positive, got {}",
                prefs.len()
            )));
        }
        Self::new_any_size(prefs)
    }

    /// Like [`SrInstance::new`] but accepts an odd number of agents. Distances
    /// are well defined for odd sizes even though the file format rejects them.
    pub fn new_any_size(prefs: Vec<Vec<AgentId>>) -> Result<Self> {
        let m = prefs.len();
        if m == 0 {
            return Err(Error::InvalidInstance("no agents".into()));
        }
        for (a, list) in prefs.iter().enumerate() {
            if list.len() != m - 1 {
                return Err(Error::InvalidInstance(format!(
                    "agent {a} ranks {} agents, expected {}",
                    list.len(),
                    m - 1
                )));
            }
        }
        // Length m-1 plus the profile checks (no self, no duplicate, in range)
        // make every list a permutation of the other agents.
        Ok(SrInstance {
            profile: Profile::new(prefs, None)?,
        })
    }

    pub fn num_agents(&self) -> usize {
        self.profile.num_agents()
    }

    pub fn prefs(&self, a: AgentId) -> &[AgentId] {
        self.profile.list(a)
    }

    /// 1-based position of `b` in `a`'s ranking; 0 when `a == b`.
    #[inline]
    pub fn pos(&self, a: AgentId, b: AgentId) -> u32 {
        self.profile.r(a, b)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn all_prefs(&self) -> Vec<Vec<AgentId>> {
        (0..self.num_agents()).map(|a| self.prefs(a).to_vec()).collect()
    }
}

/// A Stable Marriage instance with `n` men (ids `0..n`) and `n` women
/// (ids `n..2n`), each ranking the whole other side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmInstance {
    n: usize,
    profile: Profile,
}

impl SmInstance {
    /// Builds an instance from side-local indices: `men[i]` ranks women
    /// `0..n` and `women[k]` ranks men `0..n`.
    pub fn new(men: Vec<Vec<usize>>, women: Vec<Vec<usize>>) -> Result<Self> {
        let n = men.len();
        if n == 0 || women.len() != n {
            return Err(Error::InvalidInstance(format!(
                "sides must be equal and non-empty, got {} men and {} women",
                n,
                women.len()
            )));
        }
        let mut lists = Vec::with_capacity(2 * n);
        for (i, list) in men.iter().enumerate() {
            check_side_list(list, n, i)?;
            lists.push(list.iter().map(|&w| w + n).collect());
        }
        for (k, list) in women.iter().enumerate() {
            check_side_list(list, n, n + k)?;
            lists.push(list.clone());
        }
        Ok(SmInstance {
            n,
            profile: Profile::new(lists, Some(n))?,
        })
    }

    /// Builds an instance from lists over global ids.
    pub fn from_global(lists: Vec<Vec<AgentId>>) -> Result<Self> {
        let m = lists.len();
        if m == 0 || m % 2 != 0 {
            return Err(Error::InvalidInstance(format!(
                "an SM instance needs 2n agents, got {m}"
            )));
        }
        let n = m / 2;
        let mut men = Vec::with_capacity(n);
        let mut women = Vec::with_capacity(n);
        for (a, list) in lists.into_iter().enumerate() {
            if a < n {
                let mut local = Vec::with_capacity(list.len());
                for w in list {
                    if w < n || w >= m {
                        return Err(Error::InvalidInstance(format!(
                            "man {a} ranks {w}, which is not a woman"
                        )));
                    }
                    local.push(w - n);
                }
                men.push(local);
            } else {
                if let Some(&x) = list.iter().find(|&&x| x >= n) {
                    return Err(Error::InvalidInstance(format!(
                        "woman {a} ranks {x}, which is not a man"
                    )));
                }
                women.push(list);
            }
        }
        Self::new(men, women)
    }

    /// Agents per side.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_agents(&self) -> usize {
        2 * self.n
    }

    /// Ranking of agent `a` (global ids).
    pub fn prefs(&self, a: AgentId) -> &[AgentId] {
        self.profile.list(a)
    }

    /// 1-based position of `b` in `a`'s ranking (global ids); 0 if same side.
    #[inline]
    pub fn pos(&self, a: AgentId, b: AgentId) -> u32 {
        self.profile.r(a, b)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }
}

fn check_side_list(list: &[usize], n: usize, owner: AgentId) -> Result<()> {
    if list.len() != n {
        return Err(Error::InvalidInstance(format!(
            "agent {owner} ranks {} agents, expected {n}",
            list.len()
        )));
    }
    if let Some(&x) = list.iter().find(|&&x| x >= n) {
        return Err(Error::InvalidInstance(format!(
            "agent {owner} ranks out-of-range index {x}"
        )));
    }
    Ok(())
}

/// Either kind of instance, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Instance {
    Sr(SrInstance),
    Sm(SmInstance),
}

impl Instance {
    pub fn profile(&self) -> &Profile {
        match self {
            Instance::Sr(i) => i.profile(),
            Instance::Sm(i) => i.profile(),
        }
    }

    pub fn num_agents(&self) -> usize {
        self.profile().num_agents()
    }
}

impl From<SrInstance> for Instance {
    fn from(i: SrInstance) -> Self {
        Instance::Sr(i)
    }
}

impl From<SmInstance> for Instance {
    fn from(i: SmInstance) -> Self {
        Instance::Sm(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sr_rejects_odd_and_bad_lists() {
        assert!(SrInstance::new(vec![vec![1, 2], vec![0, 2], vec![0, 1]]).is_err());
        assert!(SrInstance::new_any_size(vec![vec![1, 2], vec![0, 2], vec![0, 1]]).is_ok());
        assert!(SrInstance::new(vec![vec![1], vec![1]]).is_err());
        assert!(SrInstance::new(vec![vec![1, 1, 2], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn positions_are_one_based() {
        let i = SrInstance::new(vec![vec![1, 2, 3], vec![2, 0, 3], vec![1, 3, 0], vec![0, 2, 1]]).unwrap();
        assert_eq!(i.pos(0, 1), 1);
        assert_eq!(i.pos(0, 3), 3);
        assert_eq!(i.pos(2, 0), 3);
        assert_eq!(i.pos(1, 1), 0);
        assert!(i.profile().prefers(0, 1, Some(2)));
        assert!(!i.profile().prefers(0, 3, Some(2)));
        assert!(i.profile().prefers(0, 3, None));
    }

    #[test]
    fn sm_global_ids() {
        let s = SmInstance::new(vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(s.prefs(0), &[3, 2]);
        assert_eq!(s.prefs(3), &[1, 0]);
        assert_eq!(s.pos(0, 3), 1);
        assert_eq!(s.pos(0, 1), 0);
        let back = SmInstance::from_global(s.profile().lists.clone()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn profile_requires_mutual_acceptability() {
        assert!(Profile::new(vec![vec![1], vec![]], None).is_err());
        assert!(Profile::new(vec![vec![1], vec![0], vec![]], None).is_ok());
    }
}
