use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use stabmap_core::cultures::{build_dataset, build_dataset_with, standard_configs, DatasetManifest, INSTANCES_PER_CONFIG};
use stabmap_core::instances::{parse_instance, Instance};
use stabmap_core::mapping::{
    culture_pair_means, distance_matrix, distortion_report, feature_table, format_sig9, kamada_kawai_embed,
    load_items, DistanceMatrix, Embedding, Feature, FeatureTable, Metric,
};
use stabmap_core::solvers::{
    avg_blocking_pairs_random, gale_shapley, irving_stable_matching, min_blocking_pairs_matching,
    min_weight_perfect_matching, optimal_stable_matching, Objective, Outcome, Side, SolveResult,
};
use stabmap_core::{Culture, Matching};

use crate::atomic::{build_dir, write_file};
use crate::render::{render_svg, RenderConfig};

/// Features computed by `stats` and `pipeline` unless told otherwise. Solve
/// times are left out so the output is reproducible.
pub const DEFAULT_FEATURES: [Feature; 10] = [
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
];

/// What to generate: the standard composition or one culture.
#[derive(Clone, Debug)]
pub enum DatasetSpec {
    Standard,
    Single { culture: Culture, count: usize },
}

impl DatasetSpec {
    pub fn from_args(standard: bool, culture: Option<&str>, params: &[String], count: Option<usize>) -> Result<Self> {
        match (standard, culture) {
            (true, Some(_)) => bail!("--standard and --culture are mutually exclusive"),
            (true, None) => {
                if !params.is_empty() || count.is_some() {
                    bail!("--param and --count only apply to --culture");
                }
                Ok(DatasetSpec::Standard)
            }
            (false, Some(name)) => {
                let kv = params
                    .iter()
                    .map(|p| {
                        p.split_once('=')
                            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                            .with_context(|| format!("--param expects key=value, got `{p}`"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let culture = Culture::from_parts(name, &kv)?;
                Ok(DatasetSpec::Single {
                    culture,
                    count: count.unwrap_or(INSTANCES_PER_CONFIG),
                })
            }
            (false, None) => bail!("pass --standard or --culture <name>"),
        }
    }
}

fn build(spec: &DatasetSpec, agents: usize, seed: u64, sm: bool, dir: &Path) -> Result<DatasetManifest> {
    Ok(match spec {
        DatasetSpec::Standard if !sm => build_dataset(agents, seed, dir)?,
        DatasetSpec::Standard => build_dataset_with(&standard_configs(), INSTANCES_PER_CONFIG, agents, seed, dir, true)?,
        DatasetSpec::Single { culture, count } => build_dataset_with(&[*culture], *count, agents, seed, dir, sm)?,
    })
}

pub fn generate(spec: &DatasetSpec, agents: usize, seed: u64, sm: bool, out: &Path) -> Result<DatasetManifest> {
    build_dir(out, |dir| build(spec, agents, seed, sm, dir))
}

fn load_dataset(dir: &Path) -> Result<(DatasetManifest, Vec<stabmap_core::mapping::MapItem>)> {
    let m = DatasetManifest::load(dir).with_context(|| format!("cannot read dataset {}", dir.display()))?;
    let items = load_items(dir, &m)?;
    if items.is_empty() {
        bail!("dataset {} is empty", dir.display());
    }
    Ok((m, items))
}

pub fn dist(dataset: &Path, metric: Metric, out: &Path) -> Result<DistanceMatrix> {
    let (_, items) = load_dataset(dataset)?;
    let d = distance_matrix(&items, metric)?;
    write_file(out, &d.to_csv())?;
    Ok(d)
}

fn read_dist(path: &Path) -> Result<DistanceMatrix> {
    let f = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(DistanceMatrix::from_csv(f).with_context(|| format!("in {}", path.display()))?)
}

fn read_features(path: &Path) -> Result<FeatureTable> {
    let f = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(FeatureTable::from_csv(f).with_context(|| format!("in {}", path.display()))?)
}

fn read_embedding(path: &Path) -> Result<Embedding> {
    let f = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(Embedding::from_csv(f).with_context(|| format!("in {}", path.display()))?)
}

pub fn embed(dist_csv: &Path, seed: u64, iters: usize, out: &Path) -> Result<Embedding> {
    let e = kamada_kawai_embed(&read_dist(dist_csv)?, seed, iters)?;
    write_file(out, &e.to_csv())?;
    Ok(e)
}

pub fn stats(dataset: &Path, features: &[Feature], seed: u64, out: &Path) -> Result<FeatureTable> {
    let (_, items) = load_dataset(dataset)?;
    let t = feature_table(&items, features, seed)?;
    write_file(out, &t.to_csv())?;
    Ok(t)
}

pub fn render(emb: &Path, stats_csv: Option<&Path>, cfg: &RenderConfig, out: &Path) -> Result<()> {
    let e = read_embedding(emb)?;
    let t = stats_csv.map(read_features).transpose()?;
    write_file(out, &render_svg(&e, t.as_ref(), cfg)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Irving,
    Gs,
    MinBp,
    MinWeight,
    Egal,
    MaxRank,
    MinRegret,
    AvgBp,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Irving => "irving",
            Task::Gs => "gs",
            Task::MinBp => "min-bp",
            Task::MinWeight => "min-weight",
            Task::Egal => "egal",
            Task::MaxRank => "max-rank",
            Task::MinRegret => "min-regret",
            Task::AvgBp => "avg-bp",
        }
    }
}

pub struct SolveOptions {
    pub task: Task,
    pub side: Side,
    pub samples: usize,
    pub limit_k: u64,
    pub seed: u64,
}

fn ms(t: Instant) -> String {
    format!("{:.3}", t.elapsed().as_secs_f64() * 1e3)
}

fn record(out: &mut String, task: Task, objective: &str, outcome: &str, value: Option<String>, m: Option<&Matching>) {
    let _ = writeln!(out, "task: {}", task.name());
    let _ = writeln!(out, "objective: {objective}");
    let _ = writeln!(out, "outcome: {outcome}");
    if let Some(v) = value {
        let _ = writeln!(out, "value: {v}");
    }
    if let Some(m) = m {
        let _ = writeln!(out, "matching: {m}");
    }
}

fn from_result(out: &mut String, task: Task, r: &SolveResult) {
    let (outcome, value) = match r.outcome {
        Outcome::Optimal(v) => ("optimal".to_string(), Some(v.to_string())),
        Outcome::Infeasible => ("infeasible".to_string(), None),
        Outcome::Bounds { lower, upper } => (format!("bounds {lower}..={upper}"), None),
    };
    record(out, task, r.objective.name(), &outcome, value, r.matching.as_ref());
    if r.outcome == Outcome::Infeasible {
        out.push_str("message: no stable matching\n");
    }
    let _ = writeln!(out, "nodes: {}", r.nodes);
    let _ = writeln!(out, "ms: {:.3}", r.elapsed.as_secs_f64() * 1e3);
}

/// Solves one instance file and returns the result record, one
/// `key: value` line per field. A missing stable matching is a result, not
/// an error. `avg-bp` is an estimate rather than a search and prints no
/// timing so that it is reproducible.
pub fn solve(instance: &Path, opts: &SolveOptions) -> Result<String> {
    let text = fs::read_to_string(instance).with_context(|| format!("cannot read {}", instance.display()))?;
    let inst = parse_instance(&text).with_context(|| format!("in {}", instance.display()))?;
    let p = inst.profile();
    let mut out = String::new();
    let start = Instant::now();
    match opts.task {
        Task::Irving => {
            let m = irving_stable_matching(p);
            let outcome = if m.is_some() { "stable" } else { "infeasible" };
            record(&mut out, opts.task, "stability", outcome, None, m.as_ref());
            if m.is_none() {
                out.push_str("message: no stable matching\n");
            }
            let _ = writeln!(out, "ms: {}", ms(start));
        }
        Task::Gs => {
            let Instance::Sm(sm) = &inst else {
                bail!("gs needs a stable marriage instance");
            };
            let m = gale_shapley(sm, opts.side);
            let side = match opts.side {
                Side::Men => "men-proposing",
                Side::Women => "women-proposing",
            };
            record(&mut out, opts.task, side, "stable", None, Some(&m));
            let _ = writeln!(out, "ms: {}", ms(start));
        }
        Task::MinWeight => {
            let (m, w) = min_weight_perfect_matching(p)?;
            record(&mut out, opts.task, "min_weight", "optimal", Some(w.to_string()), Some(&m));
            let _ = writeln!(out, "ms: {}", ms(start));
        }
        Task::AvgBp => {
            let v = avg_blocking_pairs_random(p, opts.samples, opts.seed)?;
            record(&mut out, opts.task, "avg_blocking_pairs_random", "estimate", Some(format_sig9(v)), None);
            let _ = writeln!(out, "samples: {}", opts.samples);
            let _ = writeln!(out, "seed: {}", opts.seed);
        }
        Task::MinBp => from_result(&mut out, opts.task, &min_blocking_pairs_matching(p, opts.limit_k)?),
        Task::Egal | Task::MaxRank | Task::MinRegret => {
            let obj = match opts.task {
                Task::Egal => Objective::MinSummedRank,
                Task::MaxRank => Objective::MaxSummedRank,
                _ => Objective::MinRegret,
            };
            from_result(&mut out, opts.task, &optimal_stable_matching(p, obj)?);
        }
    }
    Ok(out)
}

pub struct PipelineConfig {
    pub dataset: DatasetSpec,
    pub agents: usize,
    pub seed: u64,
    pub metric: Metric,
    pub features: Vec<Feature>,
    pub iters: usize,
    pub render: RenderConfig,
    pub out: PathBuf,
}

/// Stage names with wall times, for the console only.
pub type Timings = Vec<(&'static str, f64)>;

/// generate → dist → embed → stats → render, all inside a temporary
/// directory that replaces `out` only when every stage succeeded.
pub fn pipeline(cfg: &PipelineConfig) -> Result<Timings> {
    if cfg.metric == Metric::SpearExact && cfg.agents > stabmap_core::mutual_attraction::DEFAULT_LIFTED_LIMIT {
        bail!(
            "spear_exact is limited to {} agents; {} requested",
            stabmap_core::mutual_attraction::DEFAULT_LIFTED_LIMIT,
            cfg.agents
        );
    }
    build_dir(&cfg.out, |dir| {
        let mut times = Vec::new();
        let mut t = Instant::now();
        let mut lap = |name, times: &mut Timings| {
            times.push((name, t.elapsed().as_secs_f64()));
            t = Instant::now();
        };
        let ds = dir.join("ds");
        let manifest = build(&cfg.dataset, cfg.agents, cfg.seed, false, &ds)?;
        let items = load_items(&ds, &manifest)?;
        lap("generate", &mut times);
        let d = distance_matrix(&items, cfg.metric)?;
        write_file(&dir.join("dist.csv"), &d.to_csv())?;
        lap("dist", &mut times);
        let e = kamada_kawai_embed(&d, cfg.seed, cfg.iters)?;
        write_file(&dir.join("emb.csv"), &e.to_csv())?;
        lap("embed", &mut times);
        let f = feature_table(&items, &cfg.features, cfg.seed)?;
        write_file(&dir.join("stats.csv"), &f.to_csv())?;
        lap("stats", &mut times);
        let cultures = culture_pair_means(&d, &items)?;
        write_file(&dir.join("cultures.csv"), &cultures.to_csv())?;
        let report = distortion_report(&d, &e, cfg.agents)?;
        write_file(&dir.join("distortion.csv"), &report.per_instance_csv())?;
        write_file(&dir.join("distortion_hist.csv"), &report.histogram_csv())?;
        write_file(&dir.join("map.svg"), &render_svg(&e, Some(&f), &cfg.render)?)?;
        lap("render", &mut times);

        let mut s = String::new();
        let (below, groups) = cultures.intra_below_global();
        writeln!(s, "agents: {}", cfg.agents)?;
        writeln!(s, "seed: {}", cfg.seed)?;
        writeln!(s, "metric: {}", cfg.metric)?;
        writeln!(s, "instances: {}", manifest.entries.len())?;
        writeln!(s, "anchors: {}", manifest.anchors.len())?;
        writeln!(s, "mean_distance: {}", format_sig9(d.mean()))?;
        writeln!(s, "global_mean_distance: {}", format_sig9(cultures.global_mean))?;
        writeln!(s, "cultures_intra_below_global: {below}/{groups}")?;
        writeln!(s, "embedding_iterations: {}", e.iterations)?;
        writeln!(s, "average_distortion: {}", format_sig9(report.average))?;
        writeln!(s, "distortion_pairs: {}", report.pairs)?;
        writeln!(s, "zero_distance_pairs: {}", report.zero_distance_pairs)?;
        writeln!(s, "collapsed_pairs: {}", report.collapsed_pairs)?;
        for (c, name) in f.columns.iter().enumerate() {
            let have = f.values.iter().filter(|r| r[c].is_some()).count();
            writeln!(s, "feature_{name}: {have}/{}", f.ids.len())?;
        }
        write_file(&dir.join("summary.txt"), &s)?;
        Ok(times)
    })
}
