//! Exact lifted order distances between SR instances.
//!
//! The distance is the minimum over agent renamings σ of
//! Σ_a p(σ(≻_a), ≻'_σ(a)) for an order distance p. Computing it is as hard
//! as graph isomorphism, so this is a depth-first branch and bound over
//! renamings and is only offered for small instances.

use crate::error::{Error, Result};
use crate::instances::SrInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderMetric {
    Spearman,
    Swap,
}

pub const DEFAULT_LIFTED_LIMIT: usize = 8;
pub const HARD_LIFTED_LIMIT: usize = 12;

pub fn lifted_distance_exact(i: &SrInstance, j: &SrInstance, metric: OrderMetric, agent_limit: usize) -> Result<u64> {
    lifted_distance_with_witness(i, j, metric, agent_limit).map(|(d, _)| d)
}

/// The distance and one optimal renaming (`sigma[a]` is the image of `a`).
pub fn lifted_distance_with_witness(
    i: &SrInstance,
    j: &SrInstance,
    metric: OrderMetric,
    agent_limit: usize,
) -> Result<(u64, Vec<usize>)> {
    let m = i.num_agents();
    if j.num_agents() != m {
        return Err(Error::SizeMismatch(m, j.num_agents()));
    }
    let limit = agent_limit.min(HARD_LIFTED_LIMIT);
    if m > limit {
        return Err(Error::OverCap {
            what: "exact lifted distance",
            got: m,
            limit,
        });
    }
    let table = |inst: &SrInstance| -> Vec<i32> {
        let mut t = vec![0i32; m * m];
        for a in 0..m {
            for b in 0..m {
                t[a * m + b] = inst.pos(a, b) as i32;
            }
        }
        t
    };
    let mut s = Search {
        m,
        pi: table(i),
        pj: table(j),
        metric,
        sigma: vec![usize::MAX; m],
        used: vec![false; m],
        best: u64::MAX,
        best_sigma: Vec::new(),
    };
    s.dfs(0, 0);
    Ok((s.best, s.best_sigma))
}

struct Search {
    m: usize,
    pi: Vec<i32>,
    pj: Vec<i32>,
    metric: OrderMetric,
    sigma: Vec<usize>,
    used: Vec<bool>,
    best: u64,
    best_sigma: Vec<usize>,
}

impl Search {
    /// Cost of terms that become fully determined when agent `x` (all
    /// agents below `x` already placed) is mapped to `y`.
    fn added_cost(&self, x: usize, y: usize) -> u64 {
        let m = self.m;
        let (pi, pj, s) = (&self.pi, &self.pj, &self.sigma);
        match self.metric {
            OrderMetric::Spearman => (0..x)
                .map(|a| {
                    (pi[a * m + x] - pj[s[a] * m + y]).unsigned_abs() as u64
                        + (pi[x * m + a] - pj[y * m + s[a]]).unsigned_abs() as u64
                })
                .sum(),
            OrderMetric::Swap => {
                let mut c = 0u64;
                for b in 0..x {
                    for d in b + 1..x {
                        // x's own order on {b, d}
                        if (pi[x * m + b] < pi[x * m + d]) != (pj[y * m + s[b]] < pj[y * m + s[d]]) {
                            c += 1;
                        }
                    }
                }
                for o in 0..x {
                    for d in 0..x {
                        if d == o {
                            continue;
                        }
                        // o's order on {x, d}
                        if (pi[o * m + x] < pi[o * m + d]) != (pj[s[o] * m + y] < pj[s[o] * m + s[d]]) {
                            c += 1;
                        }
                    }
                }
                c
            }
        }
    }

    /// Lower bound on Spearman terms between placed and unplaced agents:
    /// each unplaced agent takes some free image, so charge it its cheapest.
    fn remaining_bound(&self, k: usize) -> u64 {
        if self.metric != OrderMetric::Spearman {
            return 0;
        }
        let m = self.m;
        let (pi, pj, s) = (&self.pi, &self.pj, &self.sigma);
        let mut lb = 0u64;
        for b in k..m {
            let mut cheapest = u64::MAX;
            for y in (0..m).filter(|&y| !self.used[y]) {
                let c: u64 = (0..k)
                    .map(|a| {
                        (pi[a * m + b] - pj[s[a] * m + y]).unsigned_abs() as u64
                            + (pi[b * m + a] - pj[y * m + s[a]]).unsigned_abs() as u64
                    })
                    .sum();
                cheapest = cheapest.min(c);
            }
            lb += cheapest;
        }
        lb
    }

    fn dfs(&mut self, k: usize, cost: u64) {
        if k == self.m {
            if cost < self.best {
                self.best = cost;
                self.best_sigma = self.sigma.clone();
            }
            return;
        }
        for y in 0..self.m {
            if self.best == 0 {
                return;
            }
            if self.used[y] {
                continue;
            }
            let c = cost + self.added_cost(k, y);
            if c >= self.best {
                continue;
            }
            self.sigma[k] = y;
            self.used[y] = true;
            if k + 1 == self.m || c + self.remaining_bound(k + 1) < self.best {
                self.dfs(k + 1, c);
            }
            self.used[y] = false;
            self.sigma[k] = usize::MAX;
        }
    }
}
