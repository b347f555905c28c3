//! Irving's two-phase algorithm for stable roommates.
//!
//! Phase 1 is a round of proposals that leaves a reduced table in which
//! `first(x) = y` exactly when `last(y) = x`. Phase 2 repeatedly finds and
//! eliminates a rotation until every list has one entry (a stable matching)
//! or some list runs empty (none exists).

use super::blocking::count_raw;
use crate::instances::{AgentId, Matching, Profile};

/// A preference table with symmetric deletions.
pub(crate) struct Table<'a> {
    p: &'a Profile,
    m: usize,
    alive: Vec<bool>,
}

impl<'a> Table<'a> {
    fn new(p: &'a Profile) -> Self {
        let m = p.num_agents();
        let mut alive = vec![false; m * m];
        for a in 0..m {
            for &b in p.list(a) {
                alive[a * m + b] = true;
            }
        }
        Table { p, m, alive }
    }

    fn delete(&mut self, a: AgentId, b: AgentId) {
        self.alive[a * self.m + b] = false;
        self.alive[b * self.m + a] = false;
    }

    pub(crate) fn entries(&self, a: AgentId) -> impl Iterator<Item = AgentId> + '_ {
        self.p.list(a).iter().copied().filter(move |&b| self.alive[a * self.m + b])
    }

    fn first(&self, a: AgentId) -> Option<AgentId> {
        self.entries(a).next()
    }

    fn second(&self, a: AgentId) -> Option<AgentId> {
        self.entries(a).nth(1)
    }

    fn last(&self, a: AgentId) -> Option<AgentId> {
        self.entries(a).last()
    }

    fn len(&self, a: AgentId) -> usize {
        self.entries(a).count()
    }

    /// Removes every entry `a` ranks below `x`.
    fn cut_after(&mut self, a: AgentId, x: AgentId) -> Vec<AgentId> {
        let succ: Vec<AgentId> = self.entries(a).skip_while(|&b| b != x).skip(1).collect();
        for &w in &succ {
            self.delete(a, w);
        }
        succ
    }
}

/// Runs the proposal phase. Pairs removed here belong to no stable matching.
pub(crate) fn phase_one(p: &Profile) -> Table<'_> {
    let m = p.num_agents();
    let mut t = Table::new(p);
    let mut proposed: Vec<Option<AgentId>> = vec![None; m];
    let mut free: Vec<AgentId> = (0..m).rev().collect();
    while let Some(x) = free.pop() {
        if proposed[x].is_some() {
            continue;
        }
        let Some(y) = t.first(x) else { continue };
        proposed[x] = Some(y);
        // y accepts x and rejects everyone it ranks below x, including any
        // proposer it held before.
        for w in t.cut_after(y, x) {
            if proposed[w] == Some(y) {
                proposed[w] = None;
                free.push(w);
            }
            if proposed[y] == Some(w) {
                proposed[y] = None;
                free.push(y);
            }
        }
    }
    t
}

/// Lists left after phase 1, in preference order.
pub(crate) fn reduced_lists(p: &Profile) -> Vec<Vec<AgentId>> {
    let t = phase_one(p);
    (0..p.num_agents()).map(|a| t.entries(a).collect()).collect()
}

/// A stable matching if one exists.
///
/// Agents whose lists run empty in phase 1 are left unmatched, which covers
/// incomplete bipartite profiles. The result is checked for blocking pairs
/// before it is returned, so `Some` is always stable.
pub fn irving_stable_matching(p: &Profile) -> Option<Matching> {
    let m = p.num_agents();
    let mut t = phase_one(p);
    let originally_empty: Vec<bool> = (0..m).map(|a| t.len(a) == 0).collect();

    while let Some(start) = (0..m).find(|&a| t.len(a) >= 2) {
        // Walk x -> last(second(x)) until an agent repeats; the cycle is
        // the rotation.
        let mut seen = vec![usize::MAX; m];
        let mut seq = Vec::new();
        let mut x = start;
        while seen[x] == usize::MAX {
            seen[x] = seq.len();
            seq.push(x);
            let q = t.second(x)?;
            x = t.last(q)?;
        }
        let rotation = &seq[seen[x]..];
        let seconds: Vec<AgentId> = rotation.iter().map(|&x| t.second(x)).collect::<Option<_>>()?;
        for (&xi, &yi) in rotation.iter().zip(&seconds) {
            t.cut_after(yi, xi);
        }
        if (0..m).any(|a| !originally_empty[a] && t.len(a) == 0) {
            return None;
        }
    }

    let mut partner = vec![None; m];
    for a in 0..m {
        if let Some(b) = t.first(a) {
            partner[a] = Some(b);
        }
    }
    if (0..m).any(|a| partner[a].is_some_and(|b| partner[b] != Some(a))) {
        return None;
    }
    if count_raw(p, &partner) != 0 {
        return None;
    }
    Some(Matching::from_partner(partner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremes::{realize_extreme, ExtremeKind};
    use crate::instances::SrInstance;

    fn sr(p: &[&[usize]]) -> SrInstance {
        SrInstance::new(p.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn constant_row_fixtures() {
        let left = sr(&[&[1, 2, 3, 4, 5], &[2, 0, 5, 3, 4], &[0, 1, 4, 5, 3], &[4, 5, 1, 0, 2], &[5, 3, 0, 2, 1], &[3, 4, 2, 1, 0]]);
        assert_eq!(irving_stable_matching(left.profile()), None);
        let right = sr(&[&[1, 5, 3, 4, 2], &[2, 0, 5, 3, 4], &[3, 1, 4, 5, 0], &[4, 2, 1, 0, 5], &[5, 3, 0, 2, 1], &[0, 4, 2, 1, 3]]);
        let m = irving_stable_matching(right.profile()).unwrap();
        let pairs = m.pairs();
        assert!(pairs == vec![(0, 1), (2, 3), (4, 5)] || pairs == vec![(0, 5), (1, 2), (3, 4)]);
    }

    #[test]
    fn cyclic_four() {
        let md = realize_extreme(ExtremeKind::Md, 4).unwrap();
        assert_eq!(irving_stable_matching(md.profile()).unwrap().pairs(), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn classic_unsolvable_triangle_with_outsider() {
        // 0, 1, 2 cycle over each other and everyone ranks 3 last.
        let i = sr(&[&[1, 2, 3], &[2, 0, 3], &[0, 1, 3], &[0, 1, 2]]);
        assert_eq!(irving_stable_matching(i.profile()), None);
    }

    #[test]
    fn extremes_are_solvable() {
        for two_n in (4..=16).step_by(2) {
            for kind in [ExtremeKind::Id, ExtremeKind::Ma, ExtremeKind::Md] {
                let inst = realize_extreme(kind, two_n).unwrap();
                let m = irving_stable_matching(inst.profile()).expect("stable matching");
                assert!(m.is_perfect());
            }
        }
    }

    #[test]
    fn complete_against_exhaustive_search() {
        use crate::cultures::{generate, Culture, CultureSpec};
        use crate::solvers::{all_perfect, count_blocking_pairs};
        for two_n in [4, 6, 8] {
            let all = all_perfect(two_n);
            for seed in 0..200 {
                let i = generate(&CultureSpec::new(Culture::Ic, seed), two_n).unwrap();
                let p = i.profile();
                let exists = all
                    .iter()
                    .any(|ps| count_blocking_pairs(p, &Matching::from_pairs(two_n, ps).unwrap()).unwrap() == 0);
                let got = irving_stable_matching(p);
                assert_eq!(got.is_some(), exists, "2n={two_n} seed={seed}");
                if let Some(m) = got {
                    assert_eq!(count_blocking_pairs(p, &m).unwrap(), 0);
                }
            }
        }
    }
}
