use crate::assignment;
use crate::error::{Error, Result};
use crate::instances::{AgentId, Matching, Profile};

/// Largest non-bipartite instance the subset dynamic program accepts.
pub const MIN_WEIGHT_SR_LIMIT: usize = 24;

const INF: u32 = u32::MAX;

/// Perfect matching minimizing Σ_a rank_a(M(a)), where each pair `{a, b}`
/// costs `rank_a(b) + rank_b(a)`.
///
/// Bipartite profiles go through the Hungarian method. Otherwise a dynamic
/// program over agent subsets always pairs the lowest remaining agent, which
/// is exact but capped at [`MIN_WEIGHT_SR_LIMIT`] agents.
pub fn min_weight_perfect_matching(p: &Profile) -> Result<(Matching, u64)> {
    match p.men() {
        Some(n) => bipartite(p, n),
        None => subsets(p),
    }
}

fn weight(p: &Profile, a: AgentId, b: AgentId) -> Option<u32> {
    match (p.r(a, b), p.r(b, a)) {
        (0, _) | (_, 0) => None,
        (x, y) => Some(x + y),
    }
}

fn no_perfect() -> Error {
    Error::InvalidInstance("no perfect matching over acceptable pairs".into())
}

fn bipartite(p: &Profile, n: usize) -> Result<(Matching, u64)> {
    let m = p.num_agents();
    if 2 * n != m {
        return Err(no_perfect());
    }
    let big = (4 * m * m) as i64;
    let mut cost = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            cost[i * n + j] = weight(p, i, n + j).map_or(big, |w| w as i64);
        }
    }
    let (total, assign) = assignment::solve(n, &cost);
    if total >= big {
        return Err(no_perfect());
    }
    let mut partner = vec![None; m];
    for (i, &j) in assign.iter().enumerate() {
        partner[i] = Some(n + j);
        partner[n + j] = Some(i);
    }
    Ok((Matching::from_partner(partner), total as u64))
}

fn subsets(p: &Profile) -> Result<(Matching, u64)> {
    let m = p.num_agents();
    if m > MIN_WEIGHT_SR_LIMIT {
        return Err(Error::OverCap {
            what: "minimum-weight perfect matching",
            got: m,
            limit: MIN_WEIGHT_SR_LIMIT,
        });
    }
    if m % 2 != 0 {
        return Err(no_perfect());
    }
    // best[mask] = cheapest perfect matching of the agents in `mask`.
    let full = (1usize << m) - 1;
    let mut best = vec![INF; 1 << m];
    best[0] = 0;
    let step = |best: &[u32], mask: usize| -> Option<(u32, usize)> {
        let a = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << a);
        let mut out: Option<(u32, usize)> = None;
        let mut bits = rest;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let sub = best[rest & !(1 << b)];
            if sub == INF {
                continue;
            }
            if let Some(w) = weight(p, a, b) {
                let c = sub + w;
                if out.is_none_or(|(v, _)| c < v) {
                    out = Some((c, b));
                }
            }
        }
        out
    };
    for mask in 1..=full {
        if mask.count_ones() % 2 == 0 {
            if let Some((v, _)) = step(&best, mask) {
                best[mask] = v;
            }
        }
    }
    if best[full] == INF {
        return Err(no_perfect());
    }
    let mut partner = vec![None; m];
    let mut mask = full;
    while mask != 0 {
        let a = mask.trailing_zeros() as usize;
        let (_, b) = step(&best, mask).expect("reachable state");
        partner[a] = Some(b);
        partner[b] = Some(a);
        mask &= !((1 << a) | (1 << b));
    }
    Ok((Matching::from_partner(partner), best[full] as u64))
}
