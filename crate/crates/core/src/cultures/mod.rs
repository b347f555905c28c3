//! Statistical cultures: seeded random models of SR and SM instances.

mod dataset;
mod mallows;
mod seed;

pub use dataset::{build_dataset, build_dataset_with, standard_configs, AnchorEntry, DatasetManifest, ManifestEntry, INSTANCES_PER_CONFIG, MANIFEST_FILE};
pub use mallows::{expected_swap_distance, mallows_sample, mallows_sample_phi, norm_phi_to_phi};
pub use seed::derive_seed;

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::instances::{SmInstance, SrInstance};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Culture {
    Ic,
    TwoIc { p: f64 },
    Mallows { norm_phi: f64 },
    Euclidean { d: usize },
    ReverseEuclidean { p: f64, d: usize },
    MallowsEuclidean { norm_phi: f64, d: usize },
    ExpectationsEuclidean { sigma: f64, d: usize },
    FameEuclidean { f: f64, d: usize },
    Attributes { d: usize },
    MallowsMd { norm_phi: f64 },
}

pub const CULTURE_NAMES: [&str; 10] = [
    "ic",
    "2ic",
    "mallows",
    "euclidean",
    "reverse_euclidean",
    "mallows_euclidean",
    "expectations_euclidean",
    "fame_euclidean",
    "attributes",
    "mallows_md",
];

impl Culture {
    pub fn name(&self) -> &'static str {
        match self {
            Culture::Ic => "ic",
            Culture::TwoIc { .. } => "2ic",
            Culture::Mallows { .. } => "mallows",
            Culture::Euclidean { .. } => "euclidean",
            Culture::ReverseEuclidean { .. } => "reverse_euclidean",
            Culture::MallowsEuclidean { .. } => "mallows_euclidean",
            Culture::ExpectationsEuclidean { .. } => "expectations_euclidean",
            Culture::FameEuclidean { .. } => "fame_euclidean",
            Culture::Attributes { .. } => "attributes",
            Culture::MallowsMd { .. } => "mallows_md",
        }
    }

    /// Parameters in canonical order, as `key=value` strings.
    pub fn params(&self) -> Vec<(&'static str, String)> {
        match *self {
            Culture::Ic => vec![],
            Culture::TwoIc { p } => vec![("p", p.to_string())],
            Culture::Mallows { norm_phi } | Culture::MallowsMd { norm_phi } => {
                vec![("norm_phi", norm_phi.to_string())]
            }
            Culture::Euclidean { d } | Culture::Attributes { d } => vec![("d", d.to_string())],
            Culture::ReverseEuclidean { p, d } => vec![("p", p.to_string()), ("d", d.to_string())],
            Culture::MallowsEuclidean { norm_phi, d } => {
                vec![("norm_phi", norm_phi.to_string()), ("d", d.to_string())]
            }
            Culture::ExpectationsEuclidean { sigma, d } => {
                vec![("sigma", sigma.to_string()), ("d", d.to_string())]
            }
            Culture::FameEuclidean { f, d } => vec![("f", f.to_string()), ("d", d.to_string())],
        }
    }

    /// `key=value;key=value`, empty for parameterless cultures.
    pub fn params_string(&self) -> String {
        self.params()
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Short label naming culture and parameters, e.g. `mallows(norm_phi=0.2)`.
    pub fn label(&self) -> String {
        let p = self.params_string();
        if p.is_empty() {
            self.name().to_string()
        } else {
            format!("{}({p})", self.name())
        }
    }

    /// Builds a culture from its name and `key=value` pairs. `d` defaults
    /// to 2; every other parameter is required.
    pub fn from_parts(name: &str, params: &[(String, String)]) -> Result<Culture> {
        let get = |key: &str| -> Result<Option<f64>> {
            match params.iter().find(|(k, _)| k == key) {
                None => Ok(None),
                Some((_, v)) => v
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|_| Error::InvalidParam(format!("{key}={v} is not a number"))),
            }
        };
        let need = |key: &str| -> Result<f64> {
            get(key)?.ok_or_else(|| Error::InvalidParam(format!("culture {name} needs parameter {key}")))
        };
        let dim = || -> Result<usize> {
            match get("d")? {
                None => Ok(2),
                Some(d) if d >= 1.0 && d.fract() == 0.0 && d <= 1e6 => Ok(d as usize),
                Some(d) => Err(Error::InvalidParam(format!("d={d} must be a positive integer"))),
            }
        };
        let allowed: &[&str] = match name {
            "ic" => &[],
            "2ic" => &["p"],
            "mallows" | "mallows_md" => &["norm_phi"],
            "euclidean" | "attributes" => &["d"],
            "reverse_euclidean" => &["p", "d"],
            "mallows_euclidean" => &["norm_phi", "d"],
            "expectations_euclidean" => &["sigma", "d"],
            "fame_euclidean" => &["f", "d"],
            _ => {
                return Err(Error::InvalidParam(format!(
                    "unknown culture `{name}`, expected one of {}",
                    CULTURE_NAMES.join(", ")
                )))
            }
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidParam(format!("culture {name} has no parameter {k}")));
        }
        let c = match name {
            "ic" => Culture::Ic,
            "2ic" => Culture::TwoIc { p: need("p")? },
            "mallows" => Culture::Mallows { norm_phi: need("norm_phi")? },
            "euclidean" => Culture::Euclidean { d: dim()? },
            "reverse_euclidean" => Culture::ReverseEuclidean { p: need("p")?, d: dim()? },
            "mallows_euclidean" => Culture::MallowsEuclidean { norm_phi: need("norm_phi")?, d: dim()? },
            "expectations_euclidean" => Culture::ExpectationsEuclidean { sigma: need("sigma")?, d: dim()? },
            "fame_euclidean" => Culture::FameEuclidean { f: need("f")?, d: dim()? },
            "attributes" => Culture::Attributes { d: dim()? },
            "mallows_md" => Culture::MallowsMd { norm_phi: need("norm_phi")? },
            _ => unreachable!(),
        };
        c.validate()?;
        Ok(c)
    }

    /// Parses a name and a `key=value;key=value` string.
    pub fn parse(name: &str, params: &str) -> Result<Culture> {
        let mut kv = Vec::new();
        for part in params.split(';').filter(|s| !s.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidParam(format!("expected key=value, got `{part}`")))?;
            kv.push((k.trim().to_string(), v.trim().to_string()));
        }
        Culture::from_parts(name, &kv)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |key: &str, v: f64, hi: f64| {
            if (0.0..=hi).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidParam(format!("{key}={v} must lie in [0, {hi}]")))
            }
        };
        let dim = |d: usize| {
            if d >= 1 {
                Ok(())
            } else {
                Err(Error::InvalidParam("d must be at least 1".into()))
            }
        };
        match *self {
            Culture::Ic => Ok(()),
            Culture::TwoIc { p } => unit("p", p, 0.5),
            Culture::Mallows { norm_phi } | Culture::MallowsMd { norm_phi } => unit("norm_phi", norm_phi, 1.0),
            Culture::Euclidean { d } | Culture::Attributes { d } => dim(d),
            Culture::ReverseEuclidean { p, d } => unit("p", p, 1.0).and(dim(d)),
            Culture::MallowsEuclidean { norm_phi, d } => unit("norm_phi", norm_phi, 1.0).and(dim(d)),
            Culture::ExpectationsEuclidean { sigma, d } => {
                if sigma > 0.0 && sigma.is_finite() {
                    dim(d)
                } else {
                    Err(Error::InvalidParam(format!("sigma={sigma} must be positive")))
                }
            }
            Culture::FameEuclidean { f, d } => unit("f", f, 1.0).and(dim(d)),
        }
    }
}

impl fmt::Display for Culture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A culture together with the seed of the instance drawn from it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CultureSpec {
    pub culture: Culture,
    pub seed: u64,
}

impl CultureSpec {
    pub fn new(culture: Culture, seed: u64) -> Self {
        CultureSpec { culture, seed }
    }
}

/// Who ranks whom. SR agents rank everyone else; in SM the first `n` agents
/// rank the last `n` and vice versa.
#[derive(Clone, Copy)]
struct Layout {
    m: usize,
    men: Option<usize>,
}

impl Layout {
    fn candidates(&self, a: usize) -> Vec<usize> {
        match self.men {
            None => (0..self.m).filter(|&b| b != a).collect(),
            Some(n) if a < n => (n..self.m).collect(),
            Some(n) => (0..n).collect(),
        }
    }

    /// The first `floor(p * side)` agents of each side.
    fn first_group(&self, p: f64) -> Vec<bool> {
        let mut g = vec![false; self.m];
        match self.men {
            None => {
                let k = (p * self.m as f64).floor() as usize;
                g[..k].iter_mut().for_each(|x| *x = true);
            }
            Some(n) => {
                let k = (p * n as f64).floor() as usize;
                g[..k].iter_mut().for_each(|x| *x = true);
                g[n..n + k].iter_mut().for_each(|x| *x = true);
            }
        }
        g
    }

    /// Base preferences of the mutual disagreement realization.
    fn disagreement(&self) -> Vec<Vec<usize>> {
        match self.men {
            None => (0..self.m).map(|a| (1..self.m).map(|k| (a + k) % self.m).collect()).collect(),
            Some(n) => {
                let mut p: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| n + (i + j) % n).collect()).collect();
                p.extend((0..n).map(|k| (0..n).map(|t| (k + 1 + t) % n).collect()));
                p
            }
        }
    }
}

fn uniform_points(rng: &mut ChaCha8Rng, m: usize, d: usize) -> Vec<Vec<f64>> {
    (0..m).map(|_| (0..d).map(|_| rng.random::<f64>()).collect()).collect()
}

fn l2(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Sorts candidates by ascending key; exact ties go to the smaller id.
fn rank_by_key(mut cands: Vec<usize>, key: impl Fn(usize) -> f64) -> Vec<usize> {
    cands.sort_by(|&b, &c| key(b).partial_cmp(&key(c)).unwrap_or(Ordering::Equal).then(b.cmp(&c)));
    cands
}

/// Preference lists (global ids) drawn from `culture` for the given layout.
/// The draw order of the random stream is fixed, so the output depends only
/// on the culture, the layout and the seed.
fn sample_lists(culture: &Culture, layout: Layout, seed: u64) -> Result<Vec<Vec<usize>>> {
    culture.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = layout.m;
    let lists = match *culture {
        Culture::Ic => (0..m)
            .map(|a| {
                let mut c = layout.candidates(a);
                c.shuffle(&mut rng);
                c
            })
            .collect(),
        Culture::TwoIc { p } => {
            let g = layout.first_group(p);
            (0..m)
                .map(|a| {
                    let (mut own, mut other): (Vec<usize>, Vec<usize>) =
                        layout.candidates(a).into_iter().partition(|&b| g[b]);
                    own.shuffle(&mut rng);
                    other.shuffle(&mut rng);
                    if g[a] {
                        own.extend(other);
                        own
                    } else {
                        other.extend(own);
                        other
                    }
                })
                .collect()
        }
        Culture::Mallows { norm_phi } => match layout.men {
            None => {
                let mut center: Vec<usize> = (0..m).collect();
                center.shuffle(&mut rng);
                let phi = norm_phi_to_phi(norm_phi, m);
                (0..m)
                    .map(|a| {
                        let mut o = mallows_sample_phi(&center, phi, &mut rng);
                        o.retain(|&b| b != a);
                        o
                    })
                    .collect()
            }
            Some(n) => {
                // One center per side, shared by everyone ranking that side.
                let mut women: Vec<usize> = (n..m).collect();
                let mut men: Vec<usize> = (0..n).collect();
                women.shuffle(&mut rng);
                men.shuffle(&mut rng);
                let phi = norm_phi_to_phi(norm_phi, n);
                (0..m)
                    .map(|a| mallows_sample_phi(if a < n { &women } else { &men }, phi, &mut rng))
                    .collect()
            }
        },
        Culture::Euclidean { d } => {
            let pts = uniform_points(&mut rng, m, d);
            (0..m)
                .map(|a| rank_by_key(layout.candidates(a), |b| l2(&pts[a], &pts[b])))
                .collect()
        }
        Culture::ReverseEuclidean { p, d } => {
            let pts = uniform_points(&mut rng, m, d);
            let g = layout.first_group(p);
            (0..m)
                .map(|a| {
                    if g[a] {
                        rank_by_key(layout.candidates(a), |b| -l2(&pts[a], &pts[b]))
                    } else {
                        rank_by_key(layout.candidates(a), |b| l2(&pts[a], &pts[b]))
                    }
                })
                .collect()
        }
        Culture::MallowsEuclidean { norm_phi, d } => {
            let pts = uniform_points(&mut rng, m, d);
            let base: Vec<Vec<usize>> = (0..m)
                .map(|a| rank_by_key(layout.candidates(a), |b| l2(&pts[a], &pts[b])))
                .collect();
            let phi = norm_phi_to_phi(norm_phi, base[0].len());
            base.iter().map(|c| mallows_sample_phi(c, phi, &mut rng)).collect()
        }
        Culture::ExpectationsEuclidean { sigma, d } => {
            let pts = uniform_points(&mut rng, m, d);
            let noise = Normal::new(0.0, sigma).map_err(|e| Error::InvalidParam(e.to_string()))?;
            let expect: Vec<Vec<f64>> = pts
                .iter()
                .map(|p| p.iter().map(|&x| x + noise.sample(&mut rng)).collect())
                .collect();
            (0..m)
                .map(|a| rank_by_key(layout.candidates(a), |b| l2(&pts[a], &expect[b])))
                .collect()
        }
        Culture::FameEuclidean { f, d } => {
            let pts = uniform_points(&mut rng, m, d);
            let fame: Vec<f64> = (0..m).map(|_| rng.random::<f64>() * f).collect();
            (0..m)
                .map(|a| rank_by_key(layout.candidates(a), |b| l2(&pts[a], &pts[b]) - fame[b]))
                .collect()
        }
        Culture::Attributes { d } => {
            let pts = uniform_points(&mut rng, m, d);
            let weights = uniform_points(&mut rng, m, d);
            (0..m)
                .map(|a| {
                    rank_by_key(layout.candidates(a), |b| {
                        -weights[a].iter().zip(&pts[b]).map(|(w, x)| w * x).sum::<f64>()
                    })
                })
                .collect()
        }
        Culture::MallowsMd { norm_phi } => {
            let base = layout.disagreement();
            let phi = norm_phi_to_phi(norm_phi, base[0].len());
            base.iter().map(|c| mallows_sample_phi(c, phi, &mut rng)).collect()
        }
    };
    Ok(lists)
}

/// Draws an SR instance with `two_n` agents.
pub fn generate(spec: &CultureSpec, two_n: usize) -> Result<SrInstance> {
    if two_n < 2 || two_n % 2 != 0 {
        return Err(Error::InvalidParam(format!("agent count must be even and positive, got {two_n}")));
    }
    let lists = sample_lists(&spec.culture, Layout { m: two_n, men: None }, spec.seed)?;
    SrInstance::new(lists)
}

/// Draws an SM instance with `n` men and `n` women, both sides from the
/// same culture.
pub fn generate_sm(spec: &CultureSpec, n: usize) -> Result<SmInstance> {
    if n == 0 {
        return Err(Error::InvalidParam("n must be positive".into()));
    }
    let lists = sample_lists(&spec.culture, Layout { m: 2 * n, men: Some(n) }, spec.seed)?;
    SmInstance::from_global(lists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremes::{extreme_matrix, realize_extreme, realize_sm_extreme, ExtremeKind, SmExtremeKind};
    use crate::instances::check_isomorphic;
    use crate::mutual_attraction::{mad_distance, mutual_attraction_matrix};

    fn all_cultures() -> Vec<Culture> {
        vec![
            Culture::Ic,
            Culture::TwoIc { p: 0.25 },
            Culture::Mallows { norm_phi: 0.4 },
            Culture::Euclidean { d: 1 },
            Culture::ReverseEuclidean { p: 0.25, d: 2 },
            Culture::MallowsEuclidean { norm_phi: 0.2, d: 2 },
            Culture::ExpectationsEuclidean { sigma: 0.2, d: 2 },
            Culture::FameEuclidean { f: 0.4, d: 2 },
            Culture::Attributes { d: 5 },
            Culture::MallowsMd { norm_phi: 0.6 },
        ]
    }

    #[test]
    fn deterministic_and_valid() {
        for c in all_cultures() {
            for seed in 0..5 {
                let s = CultureSpec::new(c, seed);
                let a = generate(&s, 10).unwrap();
                assert_eq!(a.to_text(), generate(&s, 10).unwrap().to_text());
                let b = generate_sm(&s, 5).unwrap();
                assert_eq!(b, generate_sm(&s, 5).unwrap());
            }
        }
    }

    #[test]
    fn seeds_matter() {
        for c in all_cultures() {
            let a = generate(&CultureSpec::new(c, 1), 10).unwrap();
            let b = generate(&CultureSpec::new(c, 2), 10).unwrap();
            assert_ne!(a, b, "{c}");
        }
    }

    #[test]
    fn zero_dispersion_mallows_is_a_master_list() {
        for seed in 0..10 {
            let inst = generate(&CultureSpec::new(Culture::Mallows { norm_phi: 0.0 }, seed), 6).unwrap();
            let ma = mutual_attraction_matrix(&inst);
            assert_eq!(mad_distance(&ma, &extreme_matrix(ExtremeKind::Id, 6).unwrap()).unwrap(), 0);
            let id = realize_extreme(ExtremeKind::Id, 6).unwrap();
            assert!(check_isomorphic(&inst, &id).unwrap().is_some());
        }
    }

    #[test]
    fn zero_dispersion_mallows_md_is_cyclic() {
        let md = realize_extreme(ExtremeKind::Md, 6).unwrap();
        let smd = realize_sm_extreme(SmExtremeKind::MdPair, 3).unwrap();
        for seed in 0..10 {
            let spec = CultureSpec::new(Culture::MallowsMd { norm_phi: 0.0 }, seed);
            assert_eq!(generate(&spec, 6).unwrap(), md);
            assert_eq!(generate_sm(&spec, 3).unwrap(), smd);
        }
    }

    #[test]
    fn two_groups_rank_own_group_first() {
        for seed in 0..20 {
            let inst = generate(&CultureSpec::new(Culture::TwoIc { p: 0.3 }, seed), 10).unwrap();
            let k = 3;
            for a in 0..10 {
                let own_first = a < k;
                let prefs = inst.prefs(a);
                let split = if own_first { k - 1 } else { 10 - k - 1 };
                assert!(prefs[..split].iter().all(|&b| (b < k) == own_first));
                assert!(prefs[split..].iter().all(|&b| (b < k) != own_first));
            }
        }
    }

    #[test]
    fn geometric_rankings_sort_their_keys() {
        for seed in 0..10 {
            let layout = Layout { m: 12, men: None };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts = uniform_points(&mut rng, 12, 2);
            let w = uniform_points(&mut rng, 12, 2);
            let lists = sample_lists(&Culture::Attributes { d: 2 }, layout, seed).unwrap();
            for a in 0..12 {
                let score = |b: usize| w[a][0] * pts[b][0] + w[a][1] * pts[b][1];
                assert!(lists[a].windows(2).all(|p| score(p[0]) >= score(p[1])));
            }
            let lists = sample_lists(&Culture::Euclidean { d: 2 }, layout, seed).unwrap();
            for a in 0..12 {
                assert!(lists[a].windows(2).all(|p| l2(&pts[a], &pts[p[0]]) <= l2(&pts[a], &pts[p[1]])));
            }
        }
    }

    #[test]
    fn ties_break_by_id() {
        assert_eq!(rank_by_key(vec![4, 1, 3, 0], |_| 1.0), vec![0, 1, 3, 4]);
        assert_eq!(rank_by_key(vec![3, 1, 2], |b| if b == 3 { 0.0 } else { 1.0 }), vec![3, 1, 2]);
    }

    #[test]
    fn sm_two_groups_partition_both_sides() {
        let inst = generate_sm(&CultureSpec::new(Culture::TwoIc { p: 0.5 }, 4), 4).unwrap();
        // men 0,1 and women 4,5 form the first group
        for a in [0usize, 1] {
            assert!(inst.prefs(a)[..2].iter().all(|&w| w == 4 || w == 5));
        }
        for a in [6usize, 7] {
            assert!(inst.prefs(a)[..2].iter().all(|&u| u == 2 || u == 3));
        }
    }

    #[test]
    fn parameters_parse_and_validate() {
        let c = Culture::parse("reverse_euclidean", "p=0.15;d=2").unwrap();
        assert_eq!(c, Culture::ReverseEuclidean { p: 0.15, d: 2 });
        assert_eq!(c.params_string(), "p=0.15;d=2");
        assert_eq!(Culture::parse(c.name(), &c.params_string()).unwrap(), c);
        assert_eq!(Culture::parse("euclidean", "").unwrap(), Culture::Euclidean { d: 2 });
        assert_eq!(Culture::Ic.label(), "ic");
        assert_eq!(Culture::Mallows { norm_phi: 0.2 }.label(), "mallows(norm_phi=0.2)");
        assert!(Culture::parse("mallows", "norm_phi=1.5").is_err());
        assert!(Culture::parse("mallows", "").is_err());
        assert!(Culture::parse("2ic", "p=0.6").is_err());
        assert!(Culture::parse("euclidean", "d=0").is_err());
        assert!(Culture::parse("euclidean", "d=1.5").is_err());
        assert!(Culture::parse("expectations_euclidean", "sigma=0").is_err());
        assert!(Culture::parse("ic", "p=0.1").is_err());
        assert!(Culture::parse("nope", "").is_err());
        assert!(Culture::parse("2ic", "p").is_err());
    }

    #[test]
    fn bad_sizes() {
        let s = CultureSpec::new(Culture::Ic, 0);
        assert!(generate(&s, 7).is_err());
        assert!(generate(&s, 0).is_err());
        assert!(generate_sm(&s, 0).is_err());
        let one = generate_sm(&s, 1).unwrap();
        assert_eq!(one.prefs(0), &[1]);
    }
}
