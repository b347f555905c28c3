//! The four extreme matrices (identity, mutual agreement, mutual
//! disagreement, chaos), instances realizing them, and their pairwise
//! distances in closed form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instances::{SmInstance, SrInstance};
use crate::mutual_attraction::{MaMatrix, MaPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtremeKind {
    Id,
    Ma,
    Md,
    Ch,
}

impl ExtremeKind {
    pub const ALL: [ExtremeKind; 4] = [ExtremeKind::Id, ExtremeKind::Ma, ExtremeKind::Md, ExtremeKind::Ch];

    pub fn name(self) -> &'static str {
        match self {
            ExtremeKind::Id => "ID",
            ExtremeKind::Ma => "MA",
            ExtremeKind::Md => "MD",
            ExtremeKind::Ch => "CH",
        }
    }
}

impl fmt::Display for ExtremeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExtremeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "id" => Ok(ExtremeKind::Id),
            "ma" => Ok(ExtremeKind::Ma),
            "md" => Ok(ExtremeKind::Md),
            "ch" => Ok(ExtremeKind::Ch),
            _ => Err(Error::InvalidParam(format!("unknown extreme `{s}`, expected id, ma, md or ch"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SmExtremeKind {
    IdPair,
    MaPair,
    MdPair,
}

fn check_size(two_n: usize) -> Result<usize> {
    if two_n < 4 || two_n % 2 != 0 {
        return Err(Error::InvalidParam(format!(
            "extreme matrices need an even agent count of at least 4, got {two_n}"
        )));
    }
    Ok(two_n / 2)
}

/// Whether an SR instance with this matrix exists for `two_n` agents.
/// Only chaos has excluded sizes: those with `2n - 1` divisible by 3.
pub fn is_realizable(kind: ExtremeKind, two_n: usize) -> bool {
    two_n >= 4 && two_n % 2 == 0 && (kind != ExtremeKind::Ch || (two_n - 1) % 3 != 0)
}

/// The defining matrix. For chaos the formula is evaluated at every size,
/// including the ones with no realization, so it can still serve as a map
/// anchor there.
pub fn extreme_matrix(kind: ExtremeKind, two_n: usize) -> Result<MaMatrix> {
    let n = check_size(two_n)?;
    let c = two_n - 1;
    let mut data = Vec::with_capacity(two_n * c);
    // 1-based i, j as in the definitions.
    for i in 1..=two_n {
        for j in 1..=c {
            let v = match kind {
                ExtremeKind::Id => {
                    if j >= i {
                        i
                    } else {
                        i - 1
                    }
                }
                ExtremeKind::Ma => j,
                ExtremeKind::Md => two_n - j,
                ExtremeKind::Ch => {
                    if i == 1 {
                        j
                    } else {
                        match (i + n * j - n - 1) % c {
                            0 => c,
                            r => r,
                        }
                    }
                }
            };
            data.push(v as u32);
        }
    }
    Ok(MaMatrix::from_flat(two_n, c, data))
}

/// An SR instance whose mutual attraction matrix is the extreme matrix.
pub fn realize_extreme(kind: ExtremeKind, two_n: usize) -> Result<SrInstance> {
    let n = check_size(two_n)?;
    let m = two_n;
    let prefs: Vec<Vec<usize>> = match kind {
        // Master list 0 > 1 > ... > 2n-1.
        ExtremeKind::Id => (0..m).map(|a| (0..m).filter(|&b| b != a).collect()).collect(),
        // Circle method: on day d agent 0 meets d+1 and the others pair up
        // symmetrically around d. Everyone ranks their day-d partner at d+1.
        ExtremeKind::Ma => {
            let r = m - 1;
            let mut prefs = vec![vec![0usize; r]; m];
            for d in 0..r {
                prefs[0][d] = d + 1;
                prefs[d + 1][d] = 0;
                for k in 1..n {
                    let a = (d + k) % r + 1;
                    let b = (d + r - k) % r + 1;
                    prefs[a][d] = b;
                    prefs[b][d] = a;
                }
            }
            prefs
        }
        // Agent a ranks a+1, a+2, ... cyclically.
        ExtremeKind::Md => (0..m).map(|a| (1..m).map(|k| (a + k) % m).collect()).collect(),
        ExtremeKind::Ch => {
            if !is_realizable(kind, two_n) {
                return Err(Error::NotRealizable(format!(
                    "chaos with {two_n} agents: {} is divisible by 3",
                    two_n - 1
                )));
            }
            // Agent i ranks at position j the unique other agent i* whose
            // row holds j at the column given by i's row entry j.
            let ch = extreme_matrix(kind, two_n)?;
            let c = m - 1;
            let mut prefs = vec![vec![0usize; c]; m];
            for i in 0..m {
                for j in 0..c {
                    let col = ch.get(i, j) as usize - 1;
                    let partner = (0..m).find(|&s| s != i && ch.get(s, col) as usize == j + 1);
                    prefs[i][j] = partner.ok_or_else(|| {
                        Error::NotRealizable(format!("chaos construction failed at agent {i}, position {}", j + 1))
                    })?;
                }
            }
            prefs
        }
    };
    SrInstance::new(prefs)
}

/// Exact `dist(x, y)` for the pairs with a known closed form.
pub fn closed_form_extreme_distance(x: ExtremeKind, y: ExtremeKind, n: u64) -> Result<u64> {
    use ExtremeKind::*;
    if x == y {
        return Ok(0);
    }
    let (a, b) = if x <= y { (x, y) } else { (y, x) };
    let n = n as i128;
    let thirds = match (a, b) {
        (Id, Ma) | (Ma, Ch) => 8 * n * n * n - 12 * n * n + 4 * n,
        (Ma, Md) => 12 * (n - 1) * n * n,
        (Id, Md) | (Md, Ch) => 8 * n * n * n - 6 * n * n - 2 * n,
        (Id, Ch) => return Err(Error::AsymptoticOnly(format!("{a}-{b}"))),
        _ => unreachable!(),
    };
    debug_assert_eq!(thirds % 3, 0);
    Ok((thirds / 3) as u64)
}

/// Leading-order value: `8/3 n³` for every distinct pair except MA–MD,
/// which is `4 n³`. The only estimate available for ID–CH.
pub fn leading_order_extreme_distance(x: ExtremeKind, y: ExtremeKind, n: u64) -> f64 {
    let r = normalized_extreme_distance(x, y);
    let n = n as f64;
    4.0 * n * n * n * r.to_f64()
}

/// An exact non-negative fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Limit of `dist(x, y) / 4(n-1)n²` as n grows.
pub fn normalized_extreme_distance(x: ExtremeKind, y: ExtremeKind) -> Ratio {
    use ExtremeKind::*;
    match (x, y) {
        _ if x == y => Ratio { num: 0, den: 1 },
        (Ma, Md) | (Md, Ma) => Ratio { num: 1, den: 1 },
        _ => Ratio { num: 2, den: 3 },
    }
}

pub fn sm_extreme_pair(kind: SmExtremeKind, n: usize) -> Result<MaPair> {
    if n == 0 {
        return Err(Error::InvalidParam("n must be positive".into()));
    }
    let build = |f: &dyn Fn(usize, usize) -> usize| {
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j) as u32).collect()).collect();
        MaMatrix::from_rows(rows).expect("entries within 1..=n")
    };
    let m = match kind {
        SmExtremeKind::IdPair => build(&|i, _| i + 1),
        SmExtremeKind::MaPair => build(&|_, j| j + 1),
        SmExtremeKind::MdPair => build(&|_, j| n - j),
    };
    Ok(MaPair {
        men: m.clone(),
        women: m,
    })
}

pub fn realize_sm_extreme(kind: SmExtremeKind, n: usize) -> Result<SmInstance> {
    if n == 0 {
        return Err(Error::InvalidParam("n must be positive".into()));
    }
    let (men, women): (Vec<Vec<usize>>, Vec<Vec<usize>>) = match kind {
        SmExtremeKind::IdPair => {
            let master: Vec<usize> = (0..n).collect();
            (vec![master.clone(); n], vec![master; n])
        }
        // Round j pairs man i with woman i+j; both rank each other j-th.
        SmExtremeKind::MaPair => (
            (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect(),
            (0..n).map(|k| (0..n).map(|j| (k + n - j) % n).collect()).collect(),
        ),
        // Man i ranks woman i first; woman k ranks man k last.
        SmExtremeKind::MdPair => (
            (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect(),
            (0..n).map(|k| (0..n).map(|t| (k + 1 + t) % n).collect()).collect(),
        ),
    };
    SmInstance::new(men, women)
}
