mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vgraph_core::config::PipelineConfig;
use vgraph_core::gat::OptimizerKind;

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "vgraph", version, about = "Vector drawings to graphs, and hierarchical line segmentation on them")]
struct Cli {
    /// TOML pipeline config; flags override its values, VG_SEED its seeds.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (defaults to all cores). Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Repeat for more log output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Flatten SVG files into transform-free path-only SVGs.
    Normalize {
        /// SVG files or directories of them.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Keep going past unreadable files instead of failing.
        #[arg(long)]
        skip_bad: bool,
    },
    /// Build graph JSON files and a manifest from SVGs.
    Graph {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Where node labels come from.
        #[arg(long, value_enum, default_value_t = LabelSource::None)]
        label_source: LabelSource,
        /// Label unknown layers with the map's Others leaf instead of failing.
        #[arg(long)]
        unknown_as_others: bool,
        /// Merge layers present in fewer than this share of drawings into Others.
        #[arg(long)]
        rare_threshold: Option<f64>,
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Train the network on a graph dataset.
    Train {
        dataset: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        train: TrainArgs,
    },
    /// Classification report of a checkpoint on a dataset.
    Eval {
        #[arg(long)]
        checkpoint: PathBuf,
        dataset: PathBuf,
        /// Hierarchy level 1-3.
        #[arg(long, default_value_t = 3)]
        level: usize,
        /// split.json written by `train`; restricts to one part.
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Part::Test)]
        part: Part,
        /// Directory for report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Label the lines of one SVG and write a recoloured copy.
    Predict {
        #[arg(long)]
        checkpoint: PathBuf,
        svg: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Keep only the edges satisfying a predicate over edge features.
    Filter {
        graph: PathBuf,
        /// e.g. "contiguous==1 && intersection_count>=1"
        #[arg(long)]
        expr: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic rule-labelled corpus.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        min_paths: usize,
        #[arg(long, default_value_t = 200)]
        max_paths: usize,
        #[arg(long, default_value_t = 1.0)]
        imbalance: f64,
        /// Emit FloorplanCAD-style semantic-id markup.
        #[arg(long)]
        floorplancad: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LabelSource {
    None,
    /// Layer names (data-layer, semantic-id or group id) looked up in the map.
    Layer,
    /// FloorplanCAD semantic-id numbers.
    Floorplancad,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Part {
    Train,
    Val,
    Test,
    All,
}

#[derive(Args)]
struct GraphArgs {
    /// Label map: builtin:tum, builtin:floorplancad, builtin:synthetic or a TSV.
    #[arg(long)]
    labels: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    random_fraction: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    contiguity_tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    labels: Option<String>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long, value_enum)]
    optimizer: Option<Optimizer>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    hidden: Option<usize>,
    /// Loss weights of the three heads, e.g. 1,1,1.
    #[arg(long, value_parser = triple)]
    head_weights: Option<[f64; 3]>,
    /// Train, validation and test shares, e.g. 0.8,0.1,0.1.
    #[arg(long, value_parser = triple)]
    split: Option<[f64; 3]>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    target_accuracy: Option<f64>,
    #[arg(long)]
    patience: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Optimizer {
    Sgd,
    Adam,
}

fn triple(text: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    <[f64; 3]>::try_from(parts).map_err(|p| format!("expected 3 comma-separated numbers, got {}", p.len()))
}

impl GraphArgs {
    fn apply(&self, cfg: &mut PipelineConfig) {
        if let Some(v) = &self.labels {
            cfg.labels = v.clone();
        }
        let g = &mut cfg.graph;
        g.k = self.k.unwrap_or(g.k);
        g.random_fraction = self.random_fraction.unwrap_or(g.random_fraction);
        g.n_max = self.n_max.unwrap_or(g.n_max);
        g.contiguity_tol = self.contiguity_tol.unwrap_or(g.contiguity_tol);
        if let Some(seed) = self.seed {
            cfg.set_seed(seed);
        }
    }
}

impl TrainArgs {
    fn apply(&self, cfg: &mut PipelineConfig) {
        if let Some(v) = &self.labels {
            cfg.labels = v.clone();
        }
        let t = &mut cfg.train;
        t.epochs = self.epochs.unwrap_or(t.epochs);
        t.lr = self.lr.unwrap_or(t.lr);
        t.batch_size = self.batch_size.unwrap_or(t.batch_size);
        if let Some(o) = self.optimizer {
            t.optimizer = match o {
                Optimizer::Sgd => OptimizerKind::Sgd,
                Optimizer::Adam => OptimizerKind::Adam,
            };
        }
        t.head_weights = self.head_weights.unwrap_or(t.head_weights);
        if self.target_accuracy.is_some() {
            t.target_accuracy = self.target_accuracy;
        }
        if self.patience.is_some() {
            t.patience = self.patience;
        }
        cfg.split = self.split.unwrap_or(cfg.split);
        cfg.model.hidden = self.hidden.unwrap_or(cfg.model.hidden);
        if let Some(seed) = self.seed {
            cfg.set_seed(seed);
        }
    }
}

fn load_config(cli: &Cli) -> Result<PipelineConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    cfg.apply_env()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| CliError::input("--jobs", e))?;
    }
    let mut cfg = load_config(&cli)?;
    match cli.command {
        Command::Normalize { inputs, out, skip_bad } => commands::normalize(&inputs, &out, skip_bad, &cfg),
        Command::Graph { inputs, out, label_source, unknown_as_others, rare_threshold, graph } => {
            graph.apply(&mut cfg);
            let labels = match label_source {
                LabelSource::None => commands::Labeling::None,
                LabelSource::Layer => commands::Labeling::Layer { unknown_as_others, rare_threshold },
                LabelSource::Floorplancad => commands::Labeling::Floorplancad,
            };
            commands::graph(&inputs, &out, labels, &cfg)
        }
        Command::Train { dataset, out, train } => {
            train.apply(&mut cfg);
            commands::train(&dataset, &out, &cfg)
        }
        Command::Eval { checkpoint, dataset, level, split, part, out } => {
            let part = match part {
                Part::Train => Some(0),
                Part::Val => Some(1),
                Part::Test => Some(2),
                Part::All => None,
            };
            commands::eval(&checkpoint, &dataset, level, split.as_deref().zip(part), out.as_deref(), &cfg)
        }
        Command::Predict { checkpoint, svg, out } => commands::predict(&checkpoint, &svg, &out, &cfg),
        Command::Filter { graph, expr, out } => commands::filter(&graph, &expr, &out),
        Command::Synth { out, count, seed, min_paths, max_paths, imbalance, floorplancad } => {
            let synth = vgraph_core::synth::SynthConfig { min_paths, max_paths, imbalance };
            commands::synth(&out, count, seed, &synth, floorplancad)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
