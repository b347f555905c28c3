use std::fmt;
use std::io::Read;
use std::str::FromStr;

use rayon::prelude::*;

use super::{format_sig9, MapItem, Source};
use crate::cultures::derive_seed;
use crate::error::{Error, Result};
use crate::extremes::{is_realizable, realize_extreme};
use crate::instances::{Profile, SrInstance};
use crate::mutual_attraction::{mutuality, rank_distortion, MaMatrix};
use crate::solvers::{
    avg_blocking_pairs_random, count_blocking_pairs, enumerate_stable_matchings, irving_stable_matching,
    min_blocking_pairs_matching, min_weight_perfect_matching, optimal_stable_matching, regret, summed_rank,
    Objective, Outcome, DEFAULT_LIMIT_K, DEFAULT_STABLE_CAP, STABLE_ENUM_LIMIT,
};

/// Perfect matchings sampled per instance for `avg_bp_random`.
pub const RANDOM_MATCHING_SAMPLES: usize = 100;

// Keeps the matching-sampling seeds apart from the generation seeds.
const FEATURE_STREAM: u64 = 0xFEA7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Feature {
    Mutuality,
    RankDistortion,
    HasStable,
    MinBp,
    AvgBpRandom,
    MinWeightBp,
    EgalRank,
    MaxRank,
    RankDiff,
    MinRegret,
    /// Wall time of the egalitarian stable matching search; not reproducible.
    SolveMs,
}

impl Feature {
    pub const ALL: [Feature; 11] = [
        Feature::Mutuality,
        Feature::RankDistortion,
        Feature::HasStable,
        Feature::MinBp,
        Feature::AvgBpRandom,
        Feature::MinWeightBp,
        Feature::EgalRank,
        Feature::MaxRank,
        Feature::RankDiff,
        Feature::MinRegret,
        Feature::SolveMs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Feature::Mutuality => "mutuality",
            Feature::RankDistortion => "rank_distortion",
            Feature::HasStable => "has_stable",
            Feature::MinBp => "min_bp",
            Feature::AvgBpRandom => "avg_bp_random",
            Feature::MinWeightBp => "min_weight_bp",
            Feature::EgalRank => "egal_rank",
            Feature::MaxRank => "max_rank",
            Feature::RankDiff => "rank_diff",
            Feature::MinRegret => "min_regret",
            Feature::SolveMs => "solve_ms",
        }
    }

    fn needs_stable_set(self) -> bool {
        matches!(self, Feature::EgalRank | Feature::MaxRank | Feature::RankDiff | Feature::MinRegret)
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Feature::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParam(format!("unknown feature `{s}`")))
    }
}

/// One row per map point. Cells a solver could not settle within its caps
/// are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureTable {
    pub ids: Vec<String>,
    pub groups: Vec<String>,
    pub columns: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl FeatureTable {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let c = self.columns.iter().position(|x| x == name)?;
        Some(self.values.iter().map(|row| row[c]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,culture");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for ((id, g), row) in self.ids.iter().zip(&self.groups).zip(&self.values) {
            out.push_str(id);
            out.push(',');
            out.push_str(&csv_field(g));
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

    pub fn from_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let header = rd.headers()?.clone();
        if header.get(0) != Some("id") || header.get(1) != Some("culture") {
            return Err(Error::Parse {
                line: 1,
                msg: "feature header must start with `id,culture`".into(),
            });
        }
        let columns: Vec<String> = header.iter().skip(2).map(str::to_string).collect();
        let mut t = FeatureTable {
            ids: Vec::new(),
            groups: Vec::new(),
            columns,
            values: Vec::new(),
        };
        for (i, rec) in rd.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            if rec.len() != t.columns.len() + 2 {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {} fields, found {}", t.columns.len() + 2, rec.len()),
                });
            }
            t.ids.push(rec[0].to_string());
            t.groups.push(rec[1].to_string());
            let row = rec
                .iter()
                .skip(2)
                .map(|f| match f.trim() {
                    "" => Ok(None),
                    s => s.parse().map(Some).map_err(|_| Error::Parse {
                        line,
                        msg: format!("bad value `{s}`"),
                    }),
                })
                .collect::<Result<_>>()?;
            t.values.push(row);
        }
        Ok(t)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn ma_value(src: &Source, f: fn(&MaMatrix) -> u64) -> f64 {
    match src {
        Source::Sr(_, m) | Source::Anchor(_, m) => f(m) as f64,
        Source::Sm(_, p) => (f(&p.men) + f(&p.women)) as f64,
    }
}

fn solver_row(p: &Profile, features: &[Feature], seed: u64) -> Result<Vec<Option<f64>>> {
    let m = p.num_agents();
    let stable = if features.iter().any(|f| f.needs_stable_set()) && m <= STABLE_ENUM_LIMIT {
        let set = enumerate_stable_matchings(p, DEFAULT_STABLE_CAP)?;
        (!set.truncated && !set.matchings.is_empty()).then_some(set.matchings)
    } else {
        None
    };
    let over = |ms: &Option<Vec<_>>, f: &dyn Fn(&crate::instances::Matching) -> u64, max: bool| {
        ms.as_ref().map(|ms: &Vec<_>| {
            let it = ms.iter().map(f);
            (if max { it.max() } else { it.min() }).unwrap() as f64
        })
    };
    features
        .iter()
        .map(|&f| {
            Ok(match f {
                Feature::Mutuality | Feature::RankDistortion => unreachable!(),
                Feature::HasStable => Some(irving_stable_matching(p).is_some() as u8 as f64),
                Feature::MinBp => match min_blocking_pairs_matching(p, DEFAULT_LIMIT_K)?.outcome {
                    Outcome::Optimal(v) => Some(v as f64),
                    _ => None,
                },
                Feature::AvgBpRandom => Some(avg_blocking_pairs_random(p, RANDOM_MATCHING_SAMPLES, seed)?),
                Feature::MinWeightBp => match min_weight_perfect_matching(p) {
                    Ok((mw, _)) => Some(count_blocking_pairs(p, &mw)? as f64),
                    Err(Error::OverCap { .. }) => None,
                    Err(e) => return Err(e),
                },
                Feature::EgalRank => over(&stable, &|x| summed_rank(p, x), false),
                Feature::MaxRank => over(&stable, &|x| summed_rank(p, x), true),
                Feature::RankDiff => over(&stable, &|x| summed_rank(p, x), true)
                    .zip(over(&stable, &|x| summed_rank(p, x), false))
                    .map(|(a, b)| a - b),
                Feature::MinRegret => over(&stable, &|x| regret(p, x), false),
                Feature::SolveMs => {
                    if m <= STABLE_ENUM_LIMIT {
                        match optimal_stable_matching(p, Objective::MinSummedRank) {
                            Ok(r) => Some(r.elapsed.as_secs_f64() * 1e3),
                            Err(Error::SearchLimit(_)) => None,
                            Err(e) => return Err(e),
                        }
                    } else {
                        None
                    }
                }
            })
        })
        .collect()
}

fn row(item: &MapItem, features: &[Feature], seed: u64) -> Result<Vec<Option<f64>>> {
    let realized: Option<SrInstance> = match &item.source {
        Source::Anchor(kind, ma) if is_realizable(*kind, ma.num_rows()) => Some(realize_extreme(*kind, ma.num_rows())?),
        _ => None,
    };
    let profile = match &item.source {
        Source::Sr(i, _) => Some(i.profile()),
        Source::Sm(i, _) => Some(i.profile()),
        Source::Anchor(..) => realized.as_ref().map(SrInstance::profile),
    };
    let solver: Vec<Feature> = features
        .iter()
        .copied()
        .filter(|f| !matches!(f, Feature::Mutuality | Feature::RankDistortion))
        .collect();
    let mut solved = match profile {
        Some(p) if !solver.is_empty() => solver_row(p, &solver, seed)?,
        _ => vec![None; solver.len()],
    }
    .into_iter();
    Ok(features
        .iter()
        .map(|f| match f {
            Feature::Mutuality => Some(ma_value(&item.source, mutuality)),
            Feature::RankDistortion => Some(ma_value(&item.source, rank_distortion)),
            _ => solved.next().expect("one value per solver feature"),
        })
        .collect())
}

/// Computes `features` for every item in parallel. `seed` drives the random
/// matchings behind `avg_bp_random`; item `i` uses its own derived stream.
/// Anchors get solver features through their realization when one exists.
pub fn feature_table(items: &[MapItem], features: &[Feature], seed: u64) -> Result<FeatureTable> {
    let values = items
        .par_iter()
        .enumerate()
        .map(|(i, item)| row(item, features, derive_seed(seed, FEATURE_STREAM, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureTable {
        ids: items.iter().map(|x| x.id.clone()).collect(),
        groups: items.iter().map(|x| x.group.clone()).collect(),
        columns: features.iter().map(|f| f.name().to_string()).collect(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cultures::{generate, Culture, CultureSpec};
    use crate::extremes::{extreme_matrix, ExtremeKind};

    fn anchors(two_n: usize) -> Vec<MapItem> {
        ExtremeKind::ALL
            .iter()
            .map(|&k| MapItem::anchor(k, extreme_matrix(k, two_n).unwrap()))
            .collect()
    }

    #[test]
    fn anchor_features() {
        let t = feature_table(&anchors(4), &[Feature::Mutuality, Feature::EgalRank, Feature::HasStable], 0).unwrap();
        assert_eq!(t.ids, ["ID", "MA", "MD", "CH"]);
        assert_eq!(t.values[1][0], Some(0.0));
        assert_eq!(t.values[0][1], Some(8.0));
        assert_eq!(t.values[0][2], Some(1.0));
        // CH at four agents has no realization.
        assert_eq!(t.values[3][1], None);
        assert!(t.to_csv().contains("\nCH,CH,"));
    }

    #[test]
    fn euclidean_line_is_always_stable() {
        let items: Vec<MapItem> = (0..20)
            .map(|s| {
                let i = generate(&CultureSpec::new(Culture::Euclidean { d: 1 }, s), 10).unwrap();
                MapItem::sr(format!("i{s}"), "euclidean", i)
            })
            .collect();
        let t = feature_table(&items, &[Feature::HasStable, Feature::MinBp], 0).unwrap();
        for row in &t.values {
            assert_eq!(row, &vec![Some(1.0), Some(0.0)]);
        }
    }

    #[test]
    fn stable_set_features_are_consistent() {
        let items: Vec<MapItem> = (0..30)
            .map(|s| MapItem::sr(format!("i{s}"), "ic", generate(&CultureSpec::new(Culture::Ic, s), 8).unwrap()))
            .collect();
        let fs = [Feature::HasStable, Feature::EgalRank, Feature::MaxRank, Feature::RankDiff, Feature::MinRegret, Feature::MinWeightBp];
        let t = feature_table(&items, &fs, 0).unwrap();
        for row in &t.values {
            assert_eq!(row[0] == Some(1.0), row[1].is_some());
            if let (Some(lo), Some(hi), Some(diff)) = (row[1], row[2], row[3]) {
                assert_eq!(hi - lo, diff);
                assert!(row[4].unwrap() <= lo);
            }
            assert!(row[5].is_some());
        }
    }

    #[test]
    fn csv_round_trip_and_determinism() {
        let items: Vec<MapItem> = (0..5)
            .map(|s| MapItem::sr(format!("i{s}"), "mallows(norm_phi=0.2)", generate(&CultureSpec::new(Culture::Ic, s), 6).unwrap()))
            .collect();
        let fs = [Feature::Mutuality, Feature::AvgBpRandom, Feature::HasStable];
        let a = feature_table(&items, &fs, 4).unwrap();
        assert_eq!(a, feature_table(&items, &fs, 4).unwrap());
        let text = a.to_csv();
        assert!(text.starts_with("id,culture,mutuality,avg_bp_random,has_stable\ni0,mallows(norm_phi=0.2),"));
        let back = FeatureTable::from_csv(text.as_bytes()).unwrap();
        assert_eq!(back.column("mutuality"), a.column("mutuality"));
        assert_eq!(back.groups, a.groups);
    }
}
