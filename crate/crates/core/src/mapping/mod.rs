//! Distance matrices over a dataset, the planar embedding, embedding
//! distortion and per-instance feature tables.

mod culture_table;
mod distortion;
mod embed;
mod features;

pub use culture_table::{culture_pair_means, CulturePairTable};
pub use distortion::{distortion_report, DistortionReport, HISTOGRAM_BINS, HISTOGRAM_WIDTH};
pub use embed::{kamada_kawai_embed, kamada_kawai_embed_traced, stress, Embedding, DEFAULT_MAX_ITERS};
pub use features::{feature_table, Feature, FeatureTable, RANDOM_MATCHING_SAMPLES};

use std::fmt;
use std::fs;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::cultures::DatasetManifest;
use crate::error::{Error, Result};
use crate::extremes::ExtremeKind;
use crate::instances::{parse_instance, Instance, SmInstance, SrInstance};
use crate::mutual_attraction::{
    lifted_distance_exact, mad_distance, mad_distance_sm, mutual_attraction_matrix, mutual_attraction_pair,
    positionwise_distance_matrices, positionwise_distance_sm, MaMatrix, MaPair, OrderMetric, PositionMatrix,
    DEFAULT_LIFTED_LIMIT,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    Mad,
    Positionwise,
    /// Exact lifted Spearman distance; only for small SR instances.
    SpearExact,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Mad => "mad",
            Metric::Positionwise => "positionwise",
            Metric::SpearExact => "spear_exact",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mad" => Ok(Metric::Mad),
            "positionwise" => Ok(Metric::Positionwise),
            "spear_exact" => Ok(Metric::SpearExact),
            _ => Err(Error::InvalidParam(format!("unknown metric `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Source {
    Sr(SrInstance, MaMatrix),
    Sm(SmInstance, MaPair),
    /// An extreme matrix; it has no instance unless it is realizable.
    Anchor(ExtremeKind, MaMatrix),
}

/// One point of the map.
#[derive(Clone, Debug)]
pub struct MapItem {
    pub id: String,
    /// Culture label, or the anchor's name.
    pub group: String,
    pub source: Source,
}

impl MapItem {
    pub fn sr(id: impl Into<String>, group: impl Into<String>, inst: SrInstance) -> Self {
        let ma = mutual_attraction_matrix(&inst);
        MapItem {
            id: id.into(),
            group: group.into(),
            source: Source::Sr(inst, ma),
        }
    }

    pub fn sm(id: impl Into<String>, group: impl Into<String>, inst: SmInstance) -> Self {
        let ma = mutual_attraction_pair(&inst);
        MapItem {
            id: id.into(),
            group: group.into(),
            source: Source::Sm(inst, ma),
        }
    }

    pub fn anchor(kind: ExtremeKind, ma: MaMatrix) -> Self {
        MapItem {
            id: kind.name().to_string(),
            group: kind.name().to_string(),
            source: Source::Anchor(kind, ma),
        }
    }

    pub fn from_instance(id: impl Into<String>, group: impl Into<String>, inst: Instance) -> Self {
        match inst {
            Instance::Sr(i) => Self::sr(id, group, i),
            Instance::Sm(i) => Self::sm(id, group, i),
        }
    }

    pub fn is_anchor(&self) -> bool {
        matches!(self.source, Source::Anchor(..))
    }

    pub fn num_agents(&self) -> usize {
        match &self.source {
            Source::Sr(i, _) => i.num_agents(),
            Source::Sm(i, _) => i.num_agents(),
            Source::Anchor(_, m) => m.num_rows(),
        }
    }
}

/// Instances in manifest order followed by the anchors.
pub fn load_items(dir: &Path, manifest: &DatasetManifest) -> Result<Vec<MapItem>> {
    let mut items: Vec<MapItem> = manifest
        .entries
        .par_iter()
        .map(|e| {
            let text = fs::read_to_string(dir.join(&e.path))?;
            let inst = parse_instance(&text).map_err(|err| match err {
                Error::Parse { line, msg } => Error::Parse {
                    line,
                    msg: format!("{}: {msg}", e.path.display()),
                },
                other => other,
            })?;
            Ok(MapItem::from_instance(e.id.clone(), e.spec.culture.label(), inst))
        })
        .collect::<Result<_>>()?;
    for a in &manifest.anchors {
        let ma = MaMatrix::from_csv(&fs::read_to_string(dir.join(&a.path))?)?;
        items.push(MapItem::anchor(a.kind, ma));
    }
    Ok(items)
}

/// Symmetric matrix of integer distances with a zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    ids: Vec<String>,
    values: Vec<u64>,
    /// Unknown when the matrix was read back from CSV.
    metric: Option<Metric>,
}

impl DistanceMatrix {
    pub fn new(ids: Vec<String>, values: Vec<u64>, metric: Option<Metric>) -> Result<Self> {
        let k = ids.len();
        if values.len() != k * k {
            return Err(Error::SizeMismatch(values.len(), k * k));
        }
        for i in 0..k {
            if values[i * k + i] != 0 {
                return Err(Error::InvalidParam(format!("nonzero diagonal entry for {}", ids[i])));
            }
            for j in 0..i {
                if values[i * k + j] != values[j * k + i] {
                    return Err(Error::InvalidParam(format!(
                        "distance between {} and {} is not symmetric",
                        ids[i], ids[j]
                    )));
                }
            }
        }
        Ok(DistanceMatrix { ids, values, metric })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn metric(&self) -> Option<Metric> {
        self.metric
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.values[i * self.ids.len() + j]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// Mean over unordered pairs of distinct points.
    pub fn mean(&self) -> f64 {
        let k = self.len();
        if k < 2 {
            return 0.0;
        }
        let mut s = 0u128;
        for i in 0..k {
            for j in 0..i {
                s += self.get(i, j) as u128;
            }
        }
        s as f64 / (k * (k - 1) / 2) as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id");
        for id in &self.ids {
            out.push(',');
            out.push_str(id);
        }
        out.push('\n');
        let k = self.len();
        for i in 0..k {
            out.push_str(&self.ids[i]);
            for j in 0..k {
                out.push(',');
                out.push_str(&self.get(i, j).to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let header = rd.headers()?.clone();
        if header.get(0) != Some("id") {
            return Err(Error::Parse {
                line: 1,
                msg: "distance header must start with `id`".into(),
            });
        }
        let ids: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let k = ids.len();
        let mut values = Vec::with_capacity(k * k);
        let mut rows = 0;
        for (i, rec) in rd.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            if i >= k || rec.get(0) != Some(ids[i].as_str()) {
                return Err(Error::Parse {
                    line,
                    msg: "row ids must follow the header order".into(),
                });
            }
            if rec.len() != k + 1 {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {} fields, found {}", k + 1, rec.len()),
                });
            }
            for f in rec.iter().skip(1) {
                values.push(f.trim().parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad distance `{f}`"),
                })?);
            }
            rows += 1;
        }
        if rows != k {
            return Err(Error::Parse {
                line: rows + 2,
                msg: format!("expected {k} rows, found {rows}"),
            });
        }
        Self::new(ids, values, None)
    }
}

fn pair_distance(a: &MapItem, b: &MapItem, metric: Metric) -> Result<u64> {
    use Source::*;
    match metric {
        Metric::Mad => match (&a.source, &b.source) {
            (Sm(_, x), Sm(_, y)) => mad_distance_sm(x, y),
            (Sr(_, x) | Anchor(_, x), Sr(_, y) | Anchor(_, y)) => mad_distance(x, y),
            _ => Err(mixed()),
        },
        Metric::Positionwise => match (&a.source, &b.source) {
            (Sm(_, x), Sm(_, y)) => positionwise_distance_sm(x, y),
            (Sr(_, x) | Anchor(_, x), Sr(_, y) | Anchor(_, y)) => {
                positionwise_distance_matrices(&PositionMatrix::from_ma(x), &PositionMatrix::from_ma(y))
            }
            _ => Err(mixed()),
        },
        Metric::SpearExact => match (&a.source, &b.source) {
            (Sr(x, _), Sr(y, _)) => lifted_distance_exact(x, y, OrderMetric::Spearman, DEFAULT_LIFTED_LIMIT),
            _ => Err(Error::InvalidParam(
                "spear_exact needs SR instances on both sides; anchors and SM instances are not supported".into(),
            )),
        },
    }
}

fn mixed() -> Error {
    Error::InvalidParam("cannot compare an SR instance with an SM instance".into())
}

/// All pairwise distances, computed in parallel. The result does not depend
/// on the number of threads.
pub fn distance_matrix(items: &[MapItem], metric: Metric) -> Result<DistanceMatrix> {
    let k = items.len();
    if let Some(first) = items.first() {
        let m = first.num_agents();
        if let Some(other) = items.iter().find(|x| x.num_agents() != m) {
            return Err(Error::SizeMismatch(m, other.num_agents()));
        }
        if metric == Metric::SpearExact && m > DEFAULT_LIFTED_LIMIT {
            return Err(Error::OverCap {
                what: "spear_exact distance",
                got: m,
                limit: DEFAULT_LIFTED_LIMIT,
            });
        }
    }
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
    let dists: Vec<u64> = pairs
        .par_iter()
        .map(|&(i, j)| pair_distance(&items[i], &items[j], metric))
        .collect::<Result<_>>()?;
    let mut values = vec![0u64; k * k];
    for (&(i, j), &d) in pairs.iter().zip(&dists) {
        values[i * k + j] = d;
        values[j * k + i] = d;
    }
    DistanceMatrix::new(items.iter().map(|x| x.id.clone()).collect(), values, Some(metric))
}

/// Rounds to nine significant digits and prints without an exponent.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let r: f64 = format!("{x:.8e}").parse().expect("formatted float");
    format!("{r}")
}
