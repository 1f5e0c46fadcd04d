use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vgraph_core::config::PipelineConfig;
use vgraph_core::eval::{
    evaluate, format_report, recolor_svg, split_dataset, weighted_f1, weighted_f1_excluding, ClassificationReport,
};
use vgraph_core::gat::{train as fit, Checkpoint, EpochMetrics, GatError, GatModel, Normalizer, PreparedGraph};
use vgraph_core::graph::{
    build_graph, filter_edges, read_dataset, read_graph, write_dataset, write_graph, DrawingGraph, Predicate,
};
use vgraph_core::labels::{aggregate_rare, floorplancad_leaf, LabelMap, OTHERS};
use vgraph_core::svg::{load_paths, write_flat_svg, NormalizedPath};
use vgraph_core::synth;

use crate::error::CliError;

pub const METRICS_NAME: &str = "metrics.jsonl";
pub const CHECKPOINT_NAME: &str = "checkpoint.json";
pub const SPLIT_NAME: &str = "split.json";

/// SVG files named on the command line or found (non-recursively) in
/// directories, keyed by file stem.
fn collect_svgs(inputs: &[PathBuf]) -> Result<Vec<(String, PathBuf)>, CliError> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(input)
                .map_err(|e| CliError::input(input.display(), e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case("svg")))
                .collect();
            found.sort();
            files.extend(found);
        } else if input.is_file() {
            files.push(input.clone());
        } else {
            return Err(CliError::Input(format!("{}: no such file or directory", input.display())));
        }
    }
    let mut seen = BTreeSet::new();
    files
        .into_iter()
        .map(|f| {
            let stem = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            if !seen.insert(stem.clone()) {
                return Err(CliError::Input(format!("two inputs share the drawing id `{stem}`")));
            }
            Ok((stem, f))
        })
        .collect()
}

fn read_svg(path: &Path, id: &str) -> Result<Vec<NormalizedPath>, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::input(path.display(), e))?;
    load_paths(id, &bytes).map_err(|e| CliError::input(path.display(), e))
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::input(dir.display(), e))
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::input(path.display(), e))
}

pub fn normalize(inputs: &[PathBuf], out: &Path, skip_bad: bool, cfg: &PipelineConfig) -> Result<(), CliError> {
    let files = collect_svgs(inputs)?;
    create_dir(out)?;
    let results: Vec<Result<usize, CliError>> = files
        .par_iter()
        .map(|(id, path)| {
            let paths = read_svg(path, id)?;
            write_file(&out.join(format!("{id}.svg")), write_flat_svg(&paths, None))?;
            Ok(paths.len())
        })
        .collect();
    let mut log = String::new();
    let mut failures = Vec::new();
    for ((id, _), r) in files.iter().zip(&results) {
        match r {
            Ok(n) => log.push_str(&format!("ok\t{id}\t{n} paths\n")),
            Err(e) => {
                log.push_str(&format!("failed\t{id}\t{e}\n"));
                failures.push(e.to_string());
            }
        }
    }
    write_file(&out.join("normalize.log"), &log)?;
    cfg.write_effective(out)?;
    println!("{} processed, {} failed", files.len() - failures.len(), failures.len());
    for f in &failures {
        println!("  {f}");
    }
    if !failures.is_empty() && !skip_bad {
        return Err(CliError::Input(format!("{} input(s) could not be normalized", failures.len())));
    }
    Ok(())
}

pub enum Labeling {
    None,
    Layer { unknown_as_others: bool, rare_threshold: Option<f64> },
    Floorplancad,
}

/// Label triples keyed by path id, one map per drawing.
fn label_drawings(
    drawings: &[(String, Vec<NormalizedPath>)],
    labeling: &Labeling,
    map: &LabelMap,
) -> Result<Vec<BTreeMap<usize, [usize; 3]>>, CliError> {
    match labeling {
        Labeling::None => Ok(vec![BTreeMap::new(); drawings.len()]),
        Labeling::Floorplancad => drawings
            .iter()
            .map(|(id, paths)| {
                paths
                    .iter()
                    .map(|p| {
                        let leaf = floorplancad_leaf(p.source_layer.as_deref())
                            .map_err(|e| CliError::input(format!("{id}, path {}", p.path_id), e))?;
                        Ok((p.path_id, map.map_id(leaf)?))
                    })
                    .collect()
            })
            .collect(),
        Labeling::Layer { unknown_as_others, rare_threshold } => {
            let mut occurrence: BTreeMap<String, usize> = BTreeMap::new();
            for (_, paths) in drawings {
                let layers: BTreeSet<&str> = paths.iter().filter_map(|p| p.source_layer.as_deref()).collect();
                for layer in layers {
                    *occurrence.entry(layer.to_string()).or_default() += 1;
                }
            }
            let renamed = rare_threshold.map(|t| aggregate_rare(&occurrence, drawings.len(), t));
            let others = map.others_leaf().map(|l| l.triple());
            drawings
                .iter()
                .map(|(id, paths)| {
                    paths
                        .iter()
                        .map(|p| {
                            let layer = p.source_layer.as_deref().unwrap_or("");
                            let name = renamed.as_ref().and_then(|r| r.get(layer)).map_or(layer, String::as_str);
                            let triple = match (map.map_name(name), others) {
                                (Ok(t), _) => t,
                                (Err(_), Some(o)) if *unknown_as_others || name == OTHERS => o,
                                (Err(e), _) => return Err(CliError::input(format!("{id}, path {}", p.path_id), e)),
                            };
                            Ok((p.path_id, triple))
                        })
                        .collect()
                })
                .collect()
        }
    }
}

pub fn graph(inputs: &[PathBuf], out: &Path, labeling: Labeling, cfg: &PipelineConfig) -> Result<(), CliError> {
    let files = collect_svgs(inputs)?;
    let drawings: Vec<(String, Vec<NormalizedPath>)> = files
        .par_iter()
        .map(|(id, path)| Ok((id.clone(), read_svg(path, id)?)))
        .collect::<Result<_, CliError>>()?;
    let map = match labeling {
        Labeling::None => None,
        _ => Some(LabelMap::resolve(&cfg.labels)?),
    };
    let labels = match &map {
        Some(m) => label_drawings(&drawings, &labeling, m)?,
        None => vec![BTreeMap::new(); drawings.len()],
    };
    let graphs: Vec<DrawingGraph> = drawings
        .par_iter()
        .zip(labels.par_iter())
        .map(|((id, paths), labels)| {
            let mut g = build_graph(id, paths, &cfg.graph).map_err(|e| CliError::input(id, e))?;
            for node in &mut g.nodes {
                node.y = labels.get(&node.id).copied();
            }
            g.validate()?;
            Ok(g)
        })
        .collect::<Result<_, CliError>>()?;
    create_dir(out)?;
    write_dataset(out, &graphs, cfg.graph.n_max)?;
    cfg.write_effective(out)?;
    let nodes: usize = graphs.iter().map(|g| g.nodes.len()).sum();
    let edges: usize = graphs.iter().map(|g| g.edges.len()).sum();
    println!("{} graphs, {nodes} nodes, {edges} edges written to {}", graphs.len(), out.display());
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<String>,
    pub val: Vec<String>,
    pub test: Vec<String>,
}

fn prepare(graphs: &[DrawingGraph], norm: &Normalizer) -> Result<Vec<PreparedGraph>, CliError> {
    graphs.par_iter().map(|g| PreparedGraph::new(g, norm).map_err(CliError::from)).collect()
}

/// Metrics of the untrained model, logged as epoch 0.
fn baseline(model: &GatModel, train: &[PreparedGraph], monitor: &[PreparedGraph], cfg: &PipelineConfig) -> Result<EpochMetrics, CliError> {
    let losses: Vec<f64> = train
        .par_iter()
        .map(|g| model.loss_and_gradients(g, cfg.train.head_weights).map(|(l, _)| l))
        .collect::<Result<_, GatError>>()?;
    Ok(EpochMetrics {
        epoch: 0,
        loss: losses.iter().sum::<f64>() / train.len().max(1) as f64,
        train_accuracy: evaluate(model, train, 3)?.accuracy,
        val_wf1: weighted_f1(&evaluate(model, monitor, 3)?).unwrap_or(0.0),
    })
}

pub fn train(dataset: &Path, out: &Path, cfg: &PipelineConfig) -> Result<(), CliError> {
    let (manifest, graphs) = read_dataset(dataset)?;
    let map = LabelMap::resolve(&cfg.labels)?;
    let [tr, va, te] = split_dataset(&graphs, cfg.split, cfg.train.seed)?;
    // Early stopping without a validation share holds out a tenth of train.
    let (tr, va) = if va.is_empty() && cfg.train.patience.is_some() {
        let [tr, va, _] = split_dataset(&tr, [0.9, 0.1, 0.0], cfg.train.seed)?;
        (tr, va)
    } else {
        (tr, va)
    };
    if tr.is_empty() {
        return Err(CliError::Input("training split is empty".into()));
    }
    let ids = |v: &[DrawingGraph]| v.iter().map(|g| g.drawing_id.clone()).collect::<Vec<_>>();
    let split = Split { train: ids(&tr), val: ids(&va), test: ids(&te) };

    let norm = Normalizer::fit(&tr);
    let train_set = prepare(&tr, &norm)?;
    let val_set = prepare(&va, &norm)?;
    let d_in = tr[0].feature_dim();
    let model = GatModel::init(d_in, cfg.model.hidden, map.level_sizes, cfg.train.seed);
    println!("parameter_count: {}", model.parameter_count());
    println!(
        "drawings: {} train, {} val, {} test; d_in {d_in}, hidden {}, heads {:?}",
        split.train.len(),
        split.val.len(),
        split.test.len(),
        cfg.model.hidden,
        map.level_sizes
    );

    create_dir(out)?;
    let mut cfg = cfg.clone();
    cfg.graph.n_max = manifest.n_max;
    if let Some(g) = tr.first() {
        cfg.graph.k = g.meta.k;
    }
    cfg.write_effective(out)?;
    write_file(&out.join(SPLIT_NAME), serde_json::to_string_pretty(&split).expect("split serializes"))?;

    let metrics_path = out.join(METRICS_NAME);
    let mut log = fs::File::create(&metrics_path).map_err(|e| CliError::input(metrics_path.display(), e))?;
    let monitor = if val_set.is_empty() { &train_set } else { &val_set };
    let mut emit = |m: &EpochMetrics| {
        println!("epoch {:>4}  loss {:.5}  train acc {:.4}  val wF1 {:.4}", m.epoch, m.loss, m.train_accuracy, m.val_wf1);
        let _ = writeln!(log, "{}", serde_json::to_string(m).expect("metrics serialize"));
    };
    emit(&baseline(&model, &train_set, monitor, &cfg)?);

    let checkpoint = |model: GatModel| {
        Checkpoint::new(model, norm.clone(), Some(map.clone())).with_graph_config(cfg.graph)
    };
    match fit(&model, &train_set, &val_set, &cfg.train, &mut emit) {
        Ok(outcome) => {
            checkpoint(outcome.model).save(&out.join(CHECKPOINT_NAME))?;
            println!("checkpoint written to {}", out.join(CHECKPOINT_NAME).display());
            Ok(())
        }
        Err(GatError::DivergedLoss { epoch, last_good }) => {
            let path = out.join("checkpoint_last_good.json");
            checkpoint(*last_good).save(&path)?;
            Err(CliError::Invariant(format!(
                "loss diverged at epoch {epoch}; last finite model saved to {}",
                path.display()
            )))
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct ReportFile<'a> {
    level: usize,
    drawings: usize,
    weighted_f1: f64,
    weighted_f1_excluding_other: Option<f64>,
    categories: Vec<String>,
    report: &'a ClassificationReport,
}

pub fn eval(
    checkpoint: &Path,
    dataset: &Path,
    level: usize,
    split: Option<(&Path, usize)>,
    out: Option<&Path>,
    cfg: &PipelineConfig,
) -> Result<(), CliError> {
    let ck = Checkpoint::load(checkpoint)?;
    let (_, mut graphs) = read_dataset(dataset)?;
    if let Some((file, part)) = split {
        let text = fs::read_to_string(file).map_err(|e| CliError::input(file.display(), e))?;
        let split: Split = serde_json::from_str(&text).map_err(|e| CliError::input(file.display(), e))?;
        let keep: BTreeSet<String> = [split.train, split.val, split.test]
            .into_iter().nth(part)
            .unwrap_or_default()
            .into_iter()
            .collect();
        graphs.retain(|g| keep.contains(&g.drawing_id));
    }
    if graphs.is_empty() {
        return Err(CliError::Input("no drawings to evaluate".into()));
    }
    let prepared = prepare(&graphs, &ck.normalizer)?;
    let report = evaluate(&ck.model, &prepared, level)?;
    let names = match &ck.label_map {
        Some(map) => map.category_names(level),
        None => (0..ck.model.level_sizes[level - 1]).map(|c| c.to_string()).collect(),
    };
    let wf1 = weighted_f1(&report)?;
    let other = ck.label_map.as_ref().and_then(|m| m.others_leaf()).map(|l| l.triple()[level - 1]);
    let wf1_ex = other.and_then(|c| weighted_f1_excluding(&report, c).ok());
    print!("{}", format_report(&report, &names));
    println!("weighted F1: {wf1:.4}");
    if let Some(x) = wf1_ex {
        println!("weighted F1 excluding other: {x:.4}");
    }
    if let Some(dir) = out {
        create_dir(dir)?;
        let file = ReportFile {
            level,
            drawings: graphs.len(),
            weighted_f1: wf1,
            weighted_f1_excluding_other: wf1_ex,
            categories: names,
            report: &report,
        };
        write_file(&dir.join("report.json"), serde_json::to_string_pretty(&file).expect("report serializes"))?;
        cfg.write_effective(dir)?;
    }
    Ok(())
}

pub fn predict(checkpoint: &Path, svg: &Path, out: &Path, cfg: &PipelineConfig) -> Result<(), CliError> {
    let ck = Checkpoint::load(checkpoint)?;
    let id = svg.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "drawing".into());
    let paths = read_svg(svg, &id)?;
    let graph_cfg = ck.graph.unwrap_or(cfg.graph);
    let graph = build_graph(&id, &paths, &graph_cfg).map_err(|e| CliError::input(svg.display(), e))?;
    let prepared = PreparedGraph::new(&graph, &ck.normalizer)?;
    let trace = ck.model.forward(&prepared)?;
    let levels: Vec<Vec<usize>> = (1..=3).map(|l| trace.predictions(l)).collect();
    let names = ck.label_map.as_ref().map(|m| m.category_names(3));

    let mut table = String::from("path_id\tl1\tl2\tl3\tname\n");
    let mut fine = BTreeMap::new();
    for (row, &path_id) in prepared.node_ids.iter().enumerate() {
        let l3 = levels[2][row];
        let name = names.as_ref().map_or_else(|| l3.to_string(), |n| n[l3].clone());
        table.push_str(&format!("{path_id}\t{}\t{}\t{l3}\t{name}\n", levels[0][row], levels[1][row]));
        fine.insert(path_id, l3);
    }
    create_dir(out)?;
    write_file(&out.join(format!("{id}.pred.svg")), recolor_svg(&paths, &fine))?;
    write_file(&out.join(format!("{id}.labels.tsv")), table)?;
    let mut cfg = cfg.clone();
    cfg.graph = graph_cfg;
    cfg.write_effective(out)?;
    println!("{} paths labelled; outputs in {}", paths.len(), out.display());
    Ok(())
}

pub fn filter(graph: &Path, expr: &str, out: &Path) -> Result<(), CliError> {
    let predicate = Predicate::parse(expr)?;
    let g = read_graph(graph)?;
    let kept = filter_edges(&g, |f| predicate.eval(f));
    kept.validate()?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    write_graph(out, &kept)?;
    println!("kept {} of {} edges", kept.edges.len(), g.edges.len());
    Ok(())
}

pub fn synth(out: &Path, count: usize, seed: u64, cfg: &synth::SynthConfig, floorplancad: bool) -> Result<(), CliError> {
    if cfg.min_paths == 0 || cfg.min_paths > cfg.max_paths {
        return Err(CliError::Input("need 1 <= --min-paths <= --max-paths".into()));
    }
    if cfg.imbalance.is_nan() || cfg.imbalance <= 0.0 {
        return Err(CliError::Input("--imbalance must be positive".into()));
    }
    create_dir(out)?;
    let drawings = synth::corpus(count, seed, cfg);
    drawings.par_iter().try_for_each(|d| {
        let svg = if floorplancad { d.to_floorplancad_svg() } else { d.to_svg() };
        write_file(&out.join(format!("{}.svg", d.drawing_id)), svg)
    })?;
    println!("{count} drawings written to {}", out.display());
    Ok(())
}
