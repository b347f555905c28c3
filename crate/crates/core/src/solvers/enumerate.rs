use std::time::Instant;

use super::blocking::blocks;
use super::irving::reduced_lists;
use super::{min_blocking_pairs_matching, regret, summed_rank, Objective, Outcome, SolveResult, DEFAULT_LIMIT_K};
use crate::error::{Error, Result};
use crate::instances::{AgentId, Matching, Profile};

/// Largest instance [`enumerate_stable_matchings`] accepts.
pub const STABLE_ENUM_LIMIT: usize = 20;
pub const DEFAULT_STABLE_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableSet {
    /// In discovery order.
    pub matchings: Vec<Matching>,
    /// Set when the cap stopped the search early.
    pub truncated: bool,
    pub nodes: u64,
}

struct Search<'a> {
    p: &'a Profile,
    lists: Vec<Vec<AgentId>>,
    partner: Vec<Option<AgentId>>,
    decided: Vec<bool>,
    order: Vec<AgentId>,
    cap: usize,
    out: Vec<Matching>,
    truncated: bool,
    nodes: u64,
}

impl Search<'_> {
    // Whether fixing `a` (and its partner, if any) creates a blocking pair
    // with an agent already decided.
    fn clean(&self, a: AgentId) -> bool {
        let ends = [Some(a), self.partner[a]];
        for x in ends.into_iter().flatten() {
            for &c in &self.order {
                if c != x && blocks(self.p, &self.partner, x, c) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self) {
        if self.truncated {
            return;
        }
        self.nodes += 1;
        let Some(a) = (0..self.partner.len()).find(|&a| !self.decided[a]) else {
            if self.out.len() == self.cap {
                self.truncated = true;
            } else {
                self.out.push(Matching::from_partner(self.partner.clone()));
            }
            return;
        };
        let cands: Vec<Option<AgentId>> = self.lists[a]
            .iter()
            .filter(|&&b| !self.decided[b])
            .map(|&b| Some(b))
            .chain(std::iter::once(None))
            .collect();
        for c in cands {
            self.decided[a] = true;
            self.order.push(a);
            if let Some(b) = c {
                self.partner[a] = Some(b);
                self.partner[b] = Some(a);
                self.decided[b] = true;
                self.order.push(b);
            }
            if self.clean(a) {
                self.run();
            }
            if let Some(b) = c {
                self.partner[a] = None;
                self.partner[b] = None;
                self.decided[b] = false;
                self.order.pop();
            }
            self.decided[a] = false;
            self.order.pop();
            if self.truncated {
                return;
            }
        }
    }
}

/// Every stable matching, found by backtracking over agents in id order.
///
/// Candidates come from the phase-1 reduced lists, which already exclude
/// every pair that occurs in no stable matching. Partial assignments are cut
/// as soon as two decided agents block. At most `cap` matchings are kept;
/// finding another sets `truncated`.
pub fn enumerate_stable_matchings(p: &Profile, cap: usize) -> Result<StableSet> {
    let m = p.num_agents();
    if m > STABLE_ENUM_LIMIT {
        return Err(Error::OverCap {
            what: "stable matching enumeration",
            got: m,
            limit: STABLE_ENUM_LIMIT,
        });
    }
    let mut s = Search {
        p,
        lists: reduced_lists(p),
        partner: vec![None; m],
        decided: vec![false; m],
        order: Vec::with_capacity(m),
        cap,
        out: Vec::new(),
        truncated: false,
        nodes: 0,
    };
    s.run();
    Ok(StableSet {
        matchings: s.out,
        truncated: s.truncated,
        nodes: s.nodes,
    })
}

/// Best stable matching under `objective`, the first one found on ties.
///
/// `MinBlockingPairs` ranges over all perfect matchings instead and is
/// delegated to [`min_blocking_pairs_matching`].
pub fn optimal_stable_matching(p: &Profile, objective: Objective) -> Result<SolveResult> {
    let start = Instant::now();
    let value: fn(&Profile, &Matching) -> u64 = match objective {
        Objective::MinSummedRank | Objective::MaxSummedRank => summed_rank,
        Objective::MinRegret => regret,
        Objective::MinBlockingPairs => return min_blocking_pairs_matching(p, DEFAULT_LIMIT_K),
    };
    let set = enumerate_stable_matchings(p, DEFAULT_STABLE_CAP)?;
    if set.truncated {
        return Err(Error::SearchLimit(format!(
            "more than {DEFAULT_STABLE_CAP} stable matchings"
        )));
    }
    let mut best: Option<(u64, &Matching)> = None;
    for m in &set.matchings {
        let v = value(p, m);
        let better = match best {
            None => true,
            Some((b, _)) if objective == Objective::MaxSummedRank => v > b,
            Some((b, _)) => v < b,
        };
        if better {
            best = Some((v, m));
        }
    }
    let (outcome, matching) = match best {
        Some((v, m)) => (Outcome::Optimal(v), Some(m.clone())),
        None => (Outcome::Infeasible, None),
    };
    Ok(SolveResult {
        objective,
        outcome,
        matching,
        nodes: set.nodes,
        elapsed: start.elapsed(),
    })
}
