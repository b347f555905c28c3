//! Mutual attraction matrices and the distances and features built on them.
//!
//! Row `a` of the matrix lists, for each position `j`, where `a` sits in the
//! ranking of the agent that `a` ranks at position `j`.

mod lifted;
mod orders;
mod stats;

pub use lifted::{lifted_distance_exact, lifted_distance_with_witness, OrderMetric, DEFAULT_LIFTED_LIMIT, HARD_LIFTED_LIMIT};
pub use orders::{spearman_distance, swap_distance};
pub use stats::pearson_correlation;

use crate::assignment;
use crate::error::{parse_err, Error, Result};
use crate::instances::{SmInstance, SrInstance};

/// A matrix of positive integer entries in `1..=cols`, one row per agent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl MaMatrix {
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::InvalidInstance("empty matrix".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::InvalidInstance(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            if let Some(&v) = row.iter().find(|&&v| v == 0 || v as usize > c) {
                return Err(Error::InvalidInstance(format!(
                    "row {i} has entry {v} outside 1..={c}"
                )));
            }
            data.extend(row);
        }
        Ok(MaMatrix { rows: r, cols: c, data })
    }

    pub(crate) fn from_flat(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        MaMatrix { rows, cols, data }
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.data[a * self.cols..(a + 1) * self.cols]
    }

    /// Entry at row `a`, 0-based column `j`.
    pub fn get(&self, a: usize, j: usize) -> u32 {
        self.data[a * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|a| self.row(a).to_vec()).collect()
    }

    /// One line per row, comma-separated, no header.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for a in 0..self.rows {
            let line: Vec<String> = self.row(a).iter().map(u32::to_string).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| parse_err(i + 1, format!("bad matrix entry: {e}")))?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }
}

/// The pair of matrices of an SM instance: one for the men, one for the women.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaPair {
    pub men: MaMatrix,
    pub women: MaMatrix,
}

pub fn mutual_attraction_matrix(inst: &SrInstance) -> MaMatrix {
    let m = inst.num_agents();
    let c = m - 1;
    let mut data = Vec::with_capacity(m * c);
    for a in 0..m {
        data.extend(inst.prefs(a).iter().map(|&b| inst.pos(b, a)));
    }
    MaMatrix::from_flat(m, c, data)
}

pub fn mutual_attraction_pair(inst: &SmInstance) -> MaPair {
    let n = inst.n();
    let side = |offset: usize| {
        let mut data = Vec::with_capacity(n * n);
        for a in offset..offset + n {
            data.extend(inst.prefs(a).iter().map(|&b| inst.pos(b, a)));
        }
        MaMatrix::from_flat(n, n, data)
    };
    MaPair {
        men: side(0),
        women: side(n),
    }
}

fn check_dims(a: &MaMatrix, b: &MaMatrix) -> Result<()> {
    if a.rows != b.rows {
        return Err(Error::SizeMismatch(a.rows, b.rows));
    }
    if a.cols != b.cols {
        return Err(Error::SizeMismatch(a.cols, b.cols));
    }
    Ok(())
}

fn l1(x: &[u32], y: &[u32]) -> u64 {
    x.iter().zip(y).map(|(&p, &q)| p.abs_diff(q) as u64).sum()
}

/// Minimum over row bijections of the summed ℓ1 row distances.
fn min_row_bijection(rows: usize, cols: usize, a: &[u32], b: &[u32]) -> u64 {
    let mut cost = Vec::with_capacity(rows * rows);
    for i in 0..rows {
        let ra = &a[i * cols..(i + 1) * cols];
        for j in 0..rows {
            cost.push(l1(ra, &b[j * cols..(j + 1) * cols]) as i64);
        }
    }
    assignment::solve(rows, &cost).0 as u64
}

/// Mutual attraction distance between two matrices of equal shape.
pub fn mad_distance(m1: &MaMatrix, m2: &MaMatrix) -> Result<u64> {
    check_dims(m1, m2)?;
    Ok(min_row_bijection(m1.rows, m1.cols, &m1.data, &m2.data))
}

/// SM distance: the better of matching men to men or men to women.
pub fn mad_distance_sm(p1: &MaPair, p2: &MaPair) -> Result<u64> {
    check_dims(&p1.men, &p2.men)?;
    let straight = mad_distance(&p1.men, &p2.men)? + mad_distance(&p1.women, &p2.women)?;
    let crossed = mad_distance(&p1.men, &p2.women)? + mad_distance(&p1.women, &p2.men)?;
    Ok(straight.min(crossed))
}

/// Largest possible distance between two SR instances with `two_n` agents,
/// `4(n-1)n²`.
pub fn max_mad(two_n: usize) -> Result<u64> {
    if two_n < 4 || two_n % 2 != 0 {
        return Err(Error::InvalidParam(format!(
            "agent count must be even and at least 4, got {two_n}"
        )));
    }
    let n = (two_n / 2) as u64;
    Ok(4 * (n - 1) * n * n)
}

pub fn normalized_mad(d: u64, two_n: usize) -> Result<f64> {
    Ok(d as f64 / max_mad(two_n)? as f64)
}

/// Per agent, how many agents rank it at each position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl PositionMatrix {
    /// The agents `a` ranks are exactly the agents ranking `a`, so a row of
    /// position counts is the histogram of the corresponding matrix row.
    pub fn from_ma(m: &MaMatrix) -> Self {
        let mut data = vec![0u32; m.rows * m.cols];
        for a in 0..m.rows {
            for &v in m.row(a) {
                data[a * m.cols + v as usize - 1] += 1;
            }
        }
        PositionMatrix {
            rows: m.rows,
            cols: m.cols,
            data,
        }
    }

    pub fn from_instance(inst: &SrInstance) -> Self {
        Self::from_ma(&mutual_attraction_matrix(inst))
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.data[a * self.cols..(a + 1) * self.cols]
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }
}

pub fn positionwise_distance_matrices(p1: &PositionMatrix, p2: &PositionMatrix) -> Result<u64> {
    if p1.rows != p2.rows || p1.cols != p2.cols {
        return Err(Error::SizeMismatch(p1.rows, p2.rows));
    }
    Ok(min_row_bijection(p1.rows, p1.cols, &p1.data, &p2.data))
}

pub fn positionwise_distance(i: &SrInstance, j: &SrInstance) -> Result<u64> {
    if i.num_agents() != j.num_agents() {
        return Err(Error::SizeMismatch(i.num_agents(), j.num_agents()));
    }
    positionwise_distance_matrices(&PositionMatrix::from_instance(i), &PositionMatrix::from_instance(j))
}

/// SM positionwise distance with the same side pairing rule as the MAD.
pub fn positionwise_distance_sm(p1: &MaPair, p2: &MaPair) -> Result<u64> {
    let f = PositionMatrix::from_ma;
    let (u1, w1, u2, w2) = (f(&p1.men), f(&p1.women), f(&p2.men), f(&p2.women));
    let straight = positionwise_distance_matrices(&u1, &u2)? + positionwise_distance_matrices(&w1, &w2)?;
    let crossed = positionwise_distance_matrices(&u1, &w2)? + positionwise_distance_matrices(&w1, &u2)?;
    Ok(straight.min(crossed))
}

/// Σ_a Σ_i |MA(a,i) − i|: zero exactly when every pair ranks each other
/// at the same position.
pub fn mutuality(m: &MaMatrix) -> u64 {
    (0..m.rows)
        .map(|a| {
            m.row(a)
                .iter()
                .enumerate()
                .map(|(i, &v)| v.abs_diff(i as u32 + 1) as u64)
                .sum::<u64>()
        })
        .sum()
}

/// Σ_a Σ_{i,j} |MA(a,i) − MA(a,j)| over ordered index pairs.
pub fn rank_distortion(m: &MaMatrix) -> u64 {
    let mut total = 0u64;
    let mut sorted = vec![0u32; m.cols];
    for a in 0..m.rows {
        sorted.copy_from_slice(m.row(a));
        sorted.sort_unstable();
        // With sorted values, entry k is larger than k entries and smaller
        // than the remaining ones.
        let c = m.cols as i64;
        let s: i64 = sorted
            .iter()
            .enumerate()
            .map(|(k, &v)| v as i64 * (2 * k as i64 - (c - 1)))
            .sum();
        total += 2 * s as u64;
    }
    total
}
