use std::f64::consts::TAU;
use std::io::Read;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{format_sig9, DistanceMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITERS: usize = 2000;
const TOLERANCE: f64 = 1e-9;
const JITTER: f64 = 0.05;

/// Planar coordinates, one point per id.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub ids: Vec<String>,
    pub coords: Vec<[f64; 2]>,
    pub seed: u64,
    /// Sweeps performed.
    pub iterations: usize,
}

impl Embedding {
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.coords[i], self.coords[j]);
        (a[0] - b[0]).hypot(a[1] - b[1])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,x,y\n");
        for (id, c) in self.ids.iter().zip(&self.coords) {
            out.push_str(&format!("{id},{},{}\n", format_sig9(c[0]), format_sig9(c[1])));
        }
        out
    }

    /// Reads `id,x,y` rows. The seed and iteration count are not stored in
    /// the file and come back as zero.
    pub fn from_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut ids = Vec::new();
        let mut coords = Vec::new();
        for (i, rec) in rd.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            let num = |k: usize| -> Result<f64> {
                let f = rec.get(k).unwrap_or("");
                f.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Parse {
                        line,
                        msg: format!("bad coordinate `{f}`"),
                    })
            };
            ids.push(rec.get(0).unwrap_or("").to_string());
            coords.push([num(1)?, num(2)?]);
        }
        Ok(Embedding {
            ids,
            coords,
            seed: 0,
            iterations: 0,
        })
    }
}

fn weights(d: &DistanceMatrix) -> Result<Vec<f64>> {
    let k = d.len();
    let mean = d.mean();
    if mean == 0.0 {
        return Err(Error::Numeric("all distances are zero; nothing to embed".into()));
    }
    let floor = (0.01 * mean).powi(-2);
    let mut w = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let dij = d.get(i, j) as f64;
                w[i * k + j] = if dij > 0.0 { dij.powi(-2) } else { floor };
            }
        }
    }
    Ok(w)
}

fn flat(d: &DistanceMatrix) -> Vec<f64> {
    let k = d.len();
    (0..k * k).map(|t| d.get(t / k, t % k) as f64).collect()
}

fn stress_with(df: &[f64], w: &[f64], x: &[[f64; 2]]) -> f64 {
    let k = x.len();
    let mut s = 0.0;
    for i in 0..k {
        for j in 0..i {
            let (dx, dy) = (x[i][0] - x[j][0], x[i][1] - x[j][1]);
            let e = (dx * dx + dy * dy).sqrt();
            s += w[i * k + j] * (e - df[i * k + j]).powi(2);
        }
    }
    s
}

/// Σ_{i<j} w_ij (‖x_i − x_j‖ − d_ij)² with the embedding's weights.
pub fn stress(d: &DistanceMatrix, e: &Embedding) -> Result<f64> {
    if e.coords.len() != d.len() {
        return Err(Error::SizeMismatch(e.coords.len(), d.len()));
    }
    Ok(stress_with(&flat(d), &weights(d)?, &e.coords))
}

/// [`kamada_kawai_embed_traced`] without the stress trace.
pub fn kamada_kawai_embed(d: &DistanceMatrix, seed: u64, max_iters: usize) -> Result<Embedding> {
    Ok(kamada_kawai_embed_traced(d, seed, max_iters)?.0)
}

/// Stress-minimizing layout with weights `d_ij^-2`.
///
/// Points start on a jittered circle of radius equal to the mean distance.
/// Each sweep moves every point in turn to the minimizer of its local
/// majorizer, so stress never increases. Stops when a sweep changes stress
/// by less than a relative 1e-9, or after `max_iters` sweeps. The result is
/// centered, rotated so point 0 lies on the positive x axis, and reflected
/// so point 1 has y ≥ 0.
///
/// Also returns the stress before the first sweep and after each one.
pub fn kamada_kawai_embed_traced(d: &DistanceMatrix, seed: u64, max_iters: usize) -> Result<(Embedding, Vec<f64>)> {
    let k = d.len();
    if k < 2 {
        return Err(Error::InvalidParam(format!("need at least 2 points, got {k}")));
    }
    let w = weights(d)?;
    let df = flat(d);
    let radius = d.mean();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<[f64; 2]> = (0..k)
        .map(|i| {
            let t = TAU * i as f64 / k as f64;
            let jx = rng.random_range(-JITTER..JITTER) * radius;
            let jy = rng.random_range(-JITTER..JITTER) * radius;
            [radius * t.cos() + jx, radius * t.sin() + jy]
        })
        .collect();

    let mut trace = vec![stress_with(&df, &w, &x)];
    let mut iterations = 0;
    while iterations < max_iters {
        for i in 0..k {
            let (mut nx, mut ny, mut sw) = (0.0, 0.0, 0.0);
            let (wr, dr) = (&w[i * k..(i + 1) * k], &df[i * k..(i + 1) * k]);
            for j in 0..k {
                if j == i {
                    continue;
                }
                let (wij, dij) = (wr[j], dr[j]);
                let (dx, dy) = (x[i][0] - x[j][0], x[i][1] - x[j][1]);
                let e = (dx * dx + dy * dy).sqrt();
                let (ux, uy) = if e > 0.0 { (dx / e, dy / e) } else { (0.0, 0.0) };
                nx += wij * (x[j][0] + dij * ux);
                ny += wij * (x[j][1] + dij * uy);
                sw += wij;
            }
            x[i] = [nx / sw, ny / sw];
        }
        iterations += 1;
        let s = stress_with(&df, &w, &x);
        let prev = *trace.last().expect("initial stress");
        trace.push(s);
        if prev == 0.0 || (prev - s).abs() <= TOLERANCE * prev {
            break;
        }
    }
    normalize(&mut x);
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("embedding diverged".into()));
    }
    Ok((
        Embedding {
            ids: d.ids().to_vec(),
            coords: x,
            seed,
            iterations,
        },
        trace,
    ))
}

fn normalize(x: &mut [[f64; 2]]) {
    let k = x.len() as f64;
    let cx = x.iter().map(|p| p[0]).sum::<f64>() / k;
    let cy = x.iter().map(|p| p[1]).sum::<f64>() / k;
    for p in x.iter_mut() {
        p[0] -= cx;
        p[1] -= cy;
    }
    let r = x[0][0].hypot(x[0][1]);
    if r > 0.0 {
        let (c, s) = (x[0][0] / r, x[0][1] / r);
        for p in x.iter_mut() {
            *p = [c * p[0] + s * p[1], -s * p[0] + c * p[1]];
        }
        x[0][1] = 0.0;
    }
    if x.len() > 1 && x[1][1] < 0.0 {
        for p in x.iter_mut() {
            p[1] = -p[1];
        }
    }
}
