use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use stabmap_core::mapping::{Feature, Metric, DEFAULT_MAX_ITERS};
use stabmap_core::solvers::{Side, DEFAULT_LIMIT_K};
use stabmap_cli::commands::{self, DatasetSpec, PipelineConfig, SolveOptions, Task, DEFAULT_FEATURES};
use stabmap_cli::render::{Coloring, RenderConfig};

#[derive(Parser)]
#[command(name = "stabmap", version, about = "Maps of stable roommates and stable marriage instances")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file or directory; each command has its own default.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct DatasetArgs {
    /// The standard 23-configuration, 460-instance composition.
    #[arg(long)]
    standard: bool,
    /// A single culture instead, e.g. `mallows`.
    #[arg(long)]
    culture: Option<String>,
    /// Culture parameter `key=value`; repeatable.
    #[arg(long = "param")]
    params: Vec<String>,
    /// Instances for --culture.
    #[arg(long)]
    count: Option<usize>,
    /// Number of agents (2n).
    #[arg(long, default_value_t = 10)]
    agents: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Mad,
    Positionwise,
    #[value(name = "spear_exact", alias = "spear-exact")]
    SpearExact,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::Mad => Metric::Mad,
            MetricArg::Positionwise => Metric::Positionwise,
            MetricArg::SpearExact => Metric::SpearExact,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Irving,
    Gs,
    MinBp,
    MinWeight,
    Egal,
    MaxRank,
    MinRegret,
    AvgBp,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Men,
    Women,
}

#[derive(Args)]
struct RenderArgs {
    /// `culture` or the name of a feature column.
    #[arg(long, default_value = "culture")]
    color: String,
    /// Log-scale the color ramp.
    #[arg(long)]
    log: bool,
    #[arg(long, default_value_t = 800)]
    width: u32,
    #[arg(long, default_value_t = 800)]
    height: u32,
    #[arg(long)]
    no_legend: bool,
}

impl RenderArgs {
    fn config(&self) -> RenderConfig {
        RenderConfig {
            coloring: if self.color == "culture" {
                Coloring::Culture
            } else {
                Coloring::Feature(self.color.clone())
            },
            log: self.log,
            width: self.width,
            height: self.height,
            legend: !self.no_legend,
        }
    }
}

fn parse_features(s: &Option<String>) -> Result<Vec<Feature>> {
    match s {
        None => Ok(DEFAULT_FEATURES.to_vec()),
        Some(s) => s.split(',').map(|f| Ok(f.trim().parse::<Feature>()?)).collect(),
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a dataset directory with a manifest.
    Generate {
        #[command(flatten)]
        data: DatasetArgs,
        /// Stable marriage instances instead of roommates.
        #[arg(long)]
        sm: bool,
    },
    /// Pairwise distance matrix of a dataset.
    Dist {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, value_enum, default_value = "mad")]
        metric: MetricArg,
    },
    /// Embed a distance matrix in the plane.
    Embed {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        iters: usize,
    },
    /// Per-instance feature table.
    Stats {
        #[arg(long)]
        dataset: PathBuf,
        /// Comma-separated feature names.
        #[arg(long)]
        features: Option<String>,
    },
    /// Solve one instance file and print a result record.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        task: TaskArg,
        /// Proposing side for `gs`.
        #[arg(long, value_enum, default_value = "men")]
        side: SideArg,
        /// Random matchings for `avg-bp`.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Largest blocking-pair count `min-bp` searches exactly.
        #[arg(long, default_value_t = DEFAULT_LIMIT_K)]
        limit_k: u64,
    },
    /// Draw an embedding as an SVG map.
    Render {
        #[arg(long)]
        emb: PathBuf,
        /// Feature table with the culture column.
        #[arg(long)]
        stats: Option<PathBuf>,
        #[command(flatten)]
        style: RenderArgs,
    },
    /// Run every stage into one output directory.
    Pipeline {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long, value_enum, default_value = "mad")]
        metric: MetricArg,
        #[arg(long)]
        features: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        iters: usize,
        #[command(flatten)]
        style: RenderArgs,
    },
}

fn run(cli: Cli) -> Result<()> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("cannot start thread pool")?;
    }
    let out = |default: &str| cli.out.clone().unwrap_or_else(|| PathBuf::from(default));
    match cli.cmd {
        Cmd::Generate { data, sm } => {
            let spec = DatasetSpec::from_args(data.standard, data.culture.as_deref(), &data.params, data.count)?;
            let dir = out("ds");
            let m = commands::generate(&spec, data.agents, cli.seed, sm, &dir)?;
            println!("{} instances, {} anchors in {}", m.entries.len(), m.anchors.len(), dir.display());
        }
        Cmd::Dist { dataset, metric } => {
            let path = out("dist.csv");
            let d = commands::dist(&dataset, metric.into(), &path)?;
            println!("{}x{} distances in {}", d.len(), d.len(), path.display());
        }
        Cmd::Embed { dist, iters } => {
            let path = out("emb.csv");
            let e = commands::embed(&dist, cli.seed, iters, &path)?;
            println!("{} points after {} iterations in {}", e.ids.len(), e.iterations, path.display());
        }
        Cmd::Stats { dataset, features } => {
            let path = out("stats.csv");
            let t = commands::stats(&dataset, &parse_features(&features)?, cli.seed, &path)?;
            println!("{} rows in {}", t.ids.len(), path.display());
        }
        Cmd::Solve {
            instance,
            task,
            side,
            samples,
            limit_k,
        } => {
            let task = match task {
                TaskArg::Irving => Task::Irving,
                TaskArg::Gs => Task::Gs,
                TaskArg::MinBp => Task::MinBp,
                TaskArg::MinWeight => Task::MinWeight,
                TaskArg::Egal => Task::Egal,
                TaskArg::MaxRank => Task::MaxRank,
                TaskArg::MinRegret => Task::MinRegret,
                TaskArg::AvgBp => Task::AvgBp,
            };
            let side = match side {
                SideArg::Men => Side::Men,
                SideArg::Women => Side::Women,
            };
            let opts = SolveOptions {
                task,
                side,
                samples,
                limit_k,
                seed: cli.seed,
            };
            let rec = commands::solve(&instance, &opts)?;
            match &cli.out {
                Some(p) => stabmap_cli::atomic::write_file(p, &rec)?,
                None => print!("{rec}"),
            }
        }
        Cmd::Render { emb, stats, style } => {
            let path = out("map.svg");
            commands::render(&emb, stats.as_deref(), &style.config(), &path)?;
            println!("map in {}", path.display());
        }
        Cmd::Pipeline {
            data,
            metric,
            features,
            iters,
            style,
        } => {
            let cfg = PipelineConfig {
                dataset: DatasetSpec::from_args(data.standard, data.culture.as_deref(), &data.params, data.count)?,
                agents: data.agents,
                seed: cli.seed,
                metric: metric.into(),
                features: parse_features(&features)?,
                iters,
                render: style.config(),
                out: out("out"),
            };
            let times = commands::pipeline(&cfg)?;
            for (stage, secs) in times {
                println!("{stage}: {secs:.3}s");
            }
            println!("output in {}", cfg.out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg: Vec<String> = e.chain().map(|c| c.to_string()).collect();
            eprintln!("error: {}", msg.join(": "));
            ExitCode::FAILURE
        }
    }
}
