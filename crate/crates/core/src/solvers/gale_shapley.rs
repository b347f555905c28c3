use crate::instances::{Matching, SmInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Men,
    Women,
}

/// Deferred acceptance with the given side proposing. The result is stable
/// and every proposer weakly prefers it to any other stable matching.
pub fn gale_shapley(inst: &SmInstance, proposing: Side) -> Matching {
    let n = inst.n();
    let m = 2 * n;
    let proposers: Vec<usize> = match proposing {
        Side::Men => (0..n).collect(),
        Side::Women => (n..m).collect(),
    };
    let mut next = vec![0usize; m];
    let mut partner: Vec<Option<usize>> = vec![None; m];
    let mut free: Vec<usize> = proposers.into_iter().rev().collect();
    while let Some(x) = free.pop() {
        let list = inst.prefs(x);
        if next[x] == list.len() {
            continue;
        }
        let y = list[next[x]];
        next[x] += 1;
        match partner[y] {
            None => {
                partner[y] = Some(x);
                partner[x] = Some(y);
            }
            Some(z) if inst.pos(y, x) < inst.pos(y, z) => {
                partner[z] = None;
                free.push(z);
                partner[y] = Some(x);
                partner[x] = Some(y);
            }
            Some(_) => free.push(x),
        }
    }
    Matching::from_partner(partner)
}
