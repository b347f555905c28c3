//! Distances between two orders over the same elements.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// For each position of `o1`, the position of the same element in `o2`.
fn alignment(o1: &[usize], o2: &[usize]) -> Result<Vec<usize>> {
    if o1.len() != o2.len() {
        return Err(Error::SizeMismatch(o1.len(), o2.len()));
    }
    let at: HashMap<usize, usize> = o2.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    if at.len() != o2.len() {
        return Err(Error::InvalidParam("order contains duplicates".into()));
    }
    let mut seen = vec![false; o1.len()];
    o1.iter()
        .map(|x| match at.get(x) {
            Some(&p) if !seen[p] => {
                seen[p] = true;
                Ok(p)
            }
            _ => Err(Error::InvalidParam(format!("element {x} is not shared by both orders"))),
        })
        .collect()
}

/// Number of element pairs ordered differently (Kendall tau distance).
pub fn swap_distance(o1: &[usize], o2: &[usize]) -> Result<u64> {
    let p = alignment(o1, o2)?;
    let mut inv = 0u64;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    Ok(inv)
}

/// Σ |pos₁(x) − pos₂(x)| over all elements (Spearman footrule).
pub fn spearman_distance(o1: &[usize], o2: &[usize]) -> Result<u64> {
    let p = alignment(o1, o2)?;
    Ok(p.iter().enumerate().map(|(i, &q)| i.abs_diff(q) as u64).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(swap_distance(&[0, 1, 2], &[0, 1, 2]).unwrap(), 0);
        assert_eq!(swap_distance(&[0, 1], &[1, 0]).unwrap(), 1);
        assert_eq!(spearman_distance(&[0, 1, 2], &[2, 1, 0]).unwrap(), 4);
        assert_eq!(spearman_distance(&[5, 7, 9], &[5, 7, 9]).unwrap(), 0);
        let fwd: Vec<usize> = (0..9).collect();
        let rev: Vec<usize> = (0..9).rev().collect();
        assert_eq!(swap_distance(&fwd, &rev).unwrap(), 36);
    }

    #[test]
    fn element_mismatch() {
        assert!(swap_distance(&[0, 1], &[0, 2]).is_err());
        assert!(spearman_distance(&[0, 1, 2], &[0, 1]).is_err());
        assert!(swap_distance(&[0, 0], &[0, 1]).is_err());
    }

    proptest! {
        #[test]
        fn sandwich(perm in Just((0..12usize).collect::<Vec<_>>()).prop_shuffle(),
                    other in Just((0..12usize).collect::<Vec<_>>()).prop_shuffle()) {
            let sw = swap_distance(&perm, &other).unwrap();
            let sp = spearman_distance(&perm, &other).unwrap();
            prop_assert!(sw <= sp && sp <= 2 * sw);
            prop_assert_eq!(sw, swap_distance(&other, &perm).unwrap());
        }
    }
}
