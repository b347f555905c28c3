//! Stability algorithms and exact optimization over matchings.
//!
//! Everything here works on a [`Profile`], so SR and SM instances share the
//! same solvers. Exactness is bought with size caps rather than heuristics.

mod blocking;
mod enumerate;
mod gale_shapley;
mod irving;
mod min_bp;
mod random;
mod weight;

pub use blocking::{blocking_pairs, count_blocking_pairs, BlockingReport};
pub use enumerate::{enumerate_stable_matchings, optimal_stable_matching, StableSet, DEFAULT_STABLE_CAP, STABLE_ENUM_LIMIT};
pub use gale_shapley::{gale_shapley, Side};
pub use irving::irving_stable_matching;
pub use min_bp::{min_blocking_pairs_matching, min_blocking_pairs_with, DEFAULT_LIMIT_K, DEFAULT_NODE_LIMIT};
pub use random::{avg_blocking_pairs_random, random_perfect_matching};
pub use weight::{min_weight_perfect_matching, MIN_WEIGHT_SR_LIMIT};

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::error::Error;
use crate::instances::{Matching, Profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    MinSummedRank,
    MaxSummedRank,
    MinRegret,
    MinBlockingPairs,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::MinSummedRank => "min_summed_rank",
            Objective::MaxSummedRank => "max_summed_rank",
            Objective::MinRegret => "min_regret",
            Objective::MinBlockingPairs => "min_blocking_pairs",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "min_summed_rank" => Ok(Objective::MinSummedRank),
            "max_summed_rank" => Ok(Objective::MaxSummedRank),
            "min_regret" => Ok(Objective::MinRegret),
            "min_blocking_pairs" => Ok(Objective::MinBlockingPairs),
            _ => Err(Error::InvalidParam(format!("unknown objective `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Optimal(u64),
    /// No stable matching exists, so a stability objective has no value.
    Infeasible,
    /// The search hit its limit; the optimum lies in `lower..=upper`.
    Bounds { lower: u64, upper: u64 },
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub objective: Objective,
    pub outcome: Outcome,
    pub matching: Option<Matching>,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SolveResult {
    /// The optimum, if it was established.
    pub fn value(&self) -> Option<u64> {
        match self.outcome {
            Outcome::Optimal(v) => Some(v),
            _ => None,
        }
    }
}

/// Σ over matched agents of the rank they give their partner.
pub fn summed_rank(p: &Profile, m: &Matching) -> u64 {
    (0..p.num_agents())
        .filter_map(|a| m.partner(a).map(|b| p.r(a, b) as u64))
        .sum()
}

/// Worst rank any matched agent gives its partner.
pub fn regret(p: &Profile, m: &Matching) -> u64 {
    (0..p.num_agents())
        .filter_map(|a| m.partner(a).map(|b| p.r(a, b) as u64))
        .max()
        .unwrap_or(0)
}

// Every perfect matching on agents 0..m, by recursion on the lowest agent.
#[cfg(test)]
pub(crate) fn all_perfect(m: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(left: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if left.is_empty() {
            out.push(acc.clone());
            return;
        }
        let a = left[0];
        for i in 1..left.len() {
            let b = left[i];
            let rest: Vec<usize> = left[1..].iter().copied().filter(|&x| x != b).collect();
            acc.push((a, b));
            rec(&rest, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(&(0..m).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    out
}
