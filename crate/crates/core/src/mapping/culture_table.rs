use super::{format_sig9, DistanceMatrix, MapItem};
use crate::error::{Error, Result};

/// Mean distance between every pair of groups, groups in order of first
/// appearance. The diagonal holds the mean over distinct pairs inside a
/// group and is `None` for groups of one, such as the anchors.
#[derive(Clone, Debug, PartialEq)]
pub struct CulturePairTable {
    pub groups: Vec<String>,
    pub sizes: Vec<usize>,
    pub means: Vec<Vec<Option<f64>>>,
    /// Mean over all pairs of non-anchor items.
    pub global_mean: f64,
}

impl CulturePairTable {
    /// Groups with at least two members whose internal mean lies below the
    /// global mean, and the number of such groups considered.
    pub fn intra_below_global(&self) -> (usize, usize) {
        let diag: Vec<f64> = (0..self.groups.len()).filter_map(|g| self.means[g][g]).collect();
        (diag.iter().filter(|&&m| m < self.global_mean).count(), diag.len())
    }

    pub fn to_csv(&self) -> String {
        let q = |s: &str| if s.contains(',') { format!("\"{s}\"") } else { s.to_string() };
        let mut out = String::from("culture");
        for g in &self.groups {
            out.push(',');
            out.push_str(&q(g));
        }
        out.push('\n');
        for (g, row) in self.groups.iter().zip(&self.means) {
            out.push_str(&q(g));
            for v in row {
                out.push(',');
                if let Some(v) = v {
                    out.push_str(&format_sig9(*v));
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn culture_pair_means(d: &DistanceMatrix, items: &[MapItem]) -> Result<CulturePairTable> {
    let k = d.len();
    if items.len() != k || items.iter().zip(d.ids()).any(|(x, id)| &x.id != id) {
        return Err(Error::InvalidParam("items differ from the distance matrix ids".into()));
    }
    let mut groups: Vec<String> = Vec::new();
    let mut of = Vec::with_capacity(k);
    for x in items {
        let g = match groups.iter().position(|g| g == &x.group) {
            Some(g) => g,
            None => {
                groups.push(x.group.clone());
                groups.len() - 1
            }
        };
        of.push(g);
    }
    let ng = groups.len();
    let mut sums = vec![vec![(0u128, 0u64); ng]; ng];
    let (mut gs, mut gc) = (0u128, 0u64);
    for i in 0..k {
        for j in 0..i {
            let v = d.get(i, j) as u128;
            let (a, b) = (of[i], of[j]);
            sums[a][b].0 += v;
            sums[a][b].1 += 1;
            if a != b {
                sums[b][a].0 += v;
                sums[b][a].1 += 1;
            }
            if !items[i].is_anchor() && !items[j].is_anchor() {
                gs += v;
                gc += 1;
            }
        }
    }
    let mut sizes = vec![0; ng];
    for &g in &of {
        sizes[g] += 1;
    }
    Ok(CulturePairTable {
        groups,
        sizes,
        means: sums
            .iter()
            .map(|row| row.iter().map(|&(s, c)| (c > 0).then(|| s as f64 / c as f64)).collect())
            .collect(),
        global_mean: if gc > 0 { gs as f64 / gc as f64 } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cultures::{generate, Culture, CultureSpec};
    use crate::extremes::{extreme_matrix, ExtremeKind};
    use crate::mapping::{distance_matrix, Metric};

    #[test]
    fn hand_computed_means() {
        let mut items: Vec<MapItem> = Vec::new();
        for (g, c) in [("a", Culture::Ic), ("b", Culture::Euclidean { d: 1 })] {
            for s in 0..3 {
                items.push(MapItem::sr(format!("{g}{s}"), g, generate(&CultureSpec::new(c, s), 6).unwrap()));
            }
        }
        items.push(MapItem::anchor(ExtremeKind::Id, extreme_matrix(ExtremeKind::Id, 6).unwrap()));
        let d = distance_matrix(&items, Metric::Mad).unwrap();
        let t = culture_pair_means(&d, &items).unwrap();
        assert_eq!(t.groups, ["a", "b", "ID"]);
        assert_eq!(t.sizes, [3, 3, 1]);
        let aa = (d.get(0, 1) + d.get(0, 2) + d.get(1, 2)) as f64 / 3.0;
        assert_eq!(t.means[0][0], Some(aa));
        let ab: u64 = (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).map(|(i, j)| d.get(i, j)).sum();
        assert_eq!(t.means[0][1], Some(ab as f64 / 9.0));
        assert_eq!(t.means[1][0], t.means[0][1]);
        assert_eq!(t.means[2][2], None);
        let all: u64 = (0..6).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| d.get(i, j)).sum();
        assert_eq!(t.global_mean, all as f64 / 15.0);
        assert_eq!(t.intra_below_global().1, 2);
        assert!(t.to_csv().starts_with("culture,a,b,ID\na,"));
    }
}
