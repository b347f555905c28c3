use super::{format_sig9, DistanceMatrix, Embedding};
use crate::error::{Error, Result};
use crate::mutual_attraction::max_mad;

/// Histogram bin width for map-to-distance ratios.
pub const HISTOGRAM_WIDTH: f64 = 0.1;
/// Thirty bins covering [0, 3) plus one for everything above.
pub const HISTOGRAM_BINS: usize = 31;

#[derive(Clone, Debug, PartialEq)]
pub struct DistortionReport {
    pub ids: Vec<String>,
    /// Mean over the pairs used of max(ê/d̂, d̂/ê).
    pub average: f64,
    /// Mean distortion of the pairs each point takes part in; `None` if it
    /// has none.
    pub per_instance: Vec<Option<f64>>,
    /// Counts of ê/d̂ per [`HISTOGRAM_WIDTH`] bin, the last bin open-ended.
    pub histogram: Vec<usize>,
    /// Factor applied to map distances so their mean equals the mean
    /// normalized distance.
    pub scale: f64,
    pub pairs: usize,
    /// Excluded: the two instances are at distance zero.
    pub zero_distance_pairs: usize,
    /// Excluded: the two points coincide on the map but not in distance.
    pub collapsed_pairs: usize,
}

/// Compares map distances with distances normalized by the largest possible
/// distance for `two_n` agents.
pub fn distortion_report(d: &DistanceMatrix, e: &Embedding, two_n: usize) -> Result<DistortionReport> {
    let k = d.len();
    if e.coords.len() != k || e.ids.as_slice() != d.ids() {
        return Err(Error::InvalidParam("embedding ids differ from the distance matrix".into()));
    }
    let norm = max_mad(two_n)? as f64;
    let mut used = Vec::new();
    let (mut zero, mut collapsed) = (0, 0);
    for i in 0..k {
        for j in 0..i {
            let dh = d.get(i, j) as f64 / norm;
            let eh = e.dist(i, j);
            if dh == 0.0 {
                zero += 1;
            } else if eh == 0.0 {
                collapsed += 1;
            } else {
                used.push((i, j, dh, eh));
            }
        }
    }
    if used.is_empty() {
        return Err(Error::Numeric("no pair with positive distances on both sides".into()));
    }
    let n = used.len() as f64;
    let scale = (used.iter().map(|u| u.2).sum::<f64>() / n) / (used.iter().map(|u| u.3).sum::<f64>() / n);

    let mut histogram = vec![0usize; HISTOGRAM_BINS];
    let mut sums = vec![(0.0, 0usize); k];
    let mut total = 0.0;
    for &(i, j, dh, eh) in &used {
        let r = scale * eh / dh;
        let bin = ((r / HISTOGRAM_WIDTH) as usize).min(HISTOGRAM_BINS - 1);
        histogram[bin] += 1;
        let dist = r.max(1.0 / r);
        total += dist;
        for x in [i, j] {
            sums[x].0 += dist;
            sums[x].1 += 1;
        }
    }
    Ok(DistortionReport {
        ids: d.ids().to_vec(),
        average: total / n,
        per_instance: sums.iter().map(|&(s, c)| (c > 0).then(|| s / c as f64)).collect(),
        histogram,
        scale,
        pairs: used.len(),
        zero_distance_pairs: zero,
        collapsed_pairs: collapsed,
    })
}

impl DistortionReport {
    /// `id,mean_distortion`; points without pairs get an empty cell.
    pub fn per_instance_csv(&self) -> String {
        let mut out = String::from("id,mean_distortion\n");
        for (id, v) in self.ids.iter().zip(&self.per_instance) {
            out.push_str(id);
            out.push(',');
            if let Some(v) = v {
                out.push_str(&format_sig9(*v));
            }
            out.push('\n');
        }
        out
    }

    /// `lo,hi,count`, with an empty `hi` for the open last bin.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("lo,hi,count\n");
        for (b, c) in self.histogram.iter().enumerate() {
            let lo = format_sig9(b as f64 * HISTOGRAM_WIDTH);
            let hi = if b + 1 < HISTOGRAM_BINS {
                format_sig9((b + 1) as f64 * HISTOGRAM_WIDTH)
            } else {
                String::new()
            };
            out.push_str(&format!("{lo},{hi},{c}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremes::{extreme_matrix, ExtremeKind};
    use crate::mapping::{distance_matrix, kamada_kawai_embed, MapItem, Metric};

    fn dm(k: usize, v: &[u64]) -> DistanceMatrix {
        DistanceMatrix::new((0..k).map(|i| format!("p{i}")).collect(), v.to_vec(), None).unwrap()
    }

    fn emb(coords: Vec<[f64; 2]>) -> Embedding {
        Embedding {
            ids: (0..coords.len()).map(|i| format!("p{i}")).collect(),
            coords,
            seed: 0,
            iterations: 0,
        }
    }

    #[test]
    fn perfect_embedding() {
        let d = dm(3, &[0, 3, 4, 3, 0, 5, 4, 5, 0]);
        let e = emb(vec![[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]);
        let r = distortion_report(&d, &e, 4).unwrap();
        assert!((r.average - 1.0).abs() < 1e-12);
        assert_eq!(r.histogram[10], 3);
    }

    #[test]
    fn scale_invariant() {
        let d = dm(3, &[0, 3, 4, 3, 0, 6, 4, 6, 0]);
        let e = emb(vec![[0.0, 0.0], [3.0, 0.5], [0.2, 4.0]]);
        let e2 = emb(e.coords.iter().map(|p| [2.0 * p[0], 2.0 * p[1]]).collect());
        let (a, b) = (distortion_report(&d, &e, 6).unwrap(), distortion_report(&d, &e2, 6).unwrap());
        assert!((a.average - b.average).abs() < 1e-12);
        assert_eq!(a.histogram, b.histogram);
        assert!((a.scale - 2.0 * b.scale).abs() < 1e-12);
    }

    #[test]
    fn zero_pairs_excluded() {
        let d = dm(3, &[0, 0, 4, 0, 0, 4, 4, 4, 0]);
        let e = emb(vec![[0.0, 0.0], [0.0, 0.0], [0.0, 4.0]]);
        let r = distortion_report(&d, &e, 4).unwrap();
        assert_eq!(r.zero_distance_pairs, 1);
        assert_eq!(r.pairs, 2);
        assert!((r.average - 1.0).abs() < 1e-12);
    }

    #[test]
    fn anchors_match_direct_recomputation() {
        let items: Vec<MapItem> = ExtremeKind::ALL
            .iter()
            .map(|&k| MapItem::anchor(k, extreme_matrix(k, 10).unwrap()))
            .collect();
        let d = distance_matrix(&items, Metric::Mad).unwrap();
        let e = kamada_kawai_embed(&d, 1, 2000).unwrap();
        let r = distortion_report(&d, &e, 10).unwrap();
        let norm = 4.0 * 4.0 * 25.0;
        let mut dh = Vec::new();
        let mut eh = Vec::new();
        for i in 0..4 {
            for j in 0..i {
                dh.push(d.get(i, j) as f64 / norm);
                let (p, q) = (e.coords[i], e.coords[j]);
                eh.push(((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt());
            }
        }
        let s = dh.iter().sum::<f64>() / eh.iter().sum::<f64>();
        let want = dh.iter().zip(&eh).map(|(a, b)| (s * b / a).max(a / (s * b))).sum::<f64>() / 6.0;
        assert!((r.average - want).abs() < 1e-12);
        assert!(r.average >= 1.0);
        assert!(r.per_instance.iter().all(|v| v.unwrap() >= 1.0));
    }
}
