#![allow(clippy::needless_range_loop)]
//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when
//! any criterion fails. Runs with `cargo test --test acceptance`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::{PI, SQRT_2, TAU};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vgraph_core::eval::{classification_report, evaluate, format_report, split_dataset, weighted_f1};
use vgraph_core::gat::{
    closed_form_parameter_count, train, EpochMetrics, GatModel, Normalizer, PreparedGraph, TrainConfig,
};
use vgraph_core::geometry::{
    count_intersections, curvature_profile, path_area, path_length, sample_equal_arclength, three_point_curvature,
    PAIR_SAMPLES,
};
use vgraph_core::graph::{build_graph, graph_to_json, node_dim, DrawingGraph, GraphConfig, GraphEdge, GraphMeta, GraphNode};
use vgraph_core::labels::LabelMap;
use vgraph_core::svg::{load_paths, AffineTransform2D, NormalizedPath};
use vgraph_core::synth::{corpus, synthetic_label_map, SynthConfig};
use vgraph_core::Point;

use common::{moved, same_features, structural, Motion};

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn path(d: &str) -> NormalizedPath {
    NormalizedPath::from_path_data(0, d).expect("valid path data")
}

// --- geometry -------------------------------------------------------------

fn segment_crossings(p1: Point, q1: Point, p2: Point, q2: Point) -> usize {
    let orient = |a: Point, b: Point, c: Point| (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    let crosses = orient(p1, q1, p2) * orient(p1, q1, q2) < 0.0 && orient(p2, q2, p1) * orient(p2, q2, q1) < 0.0;
    usize::from(crosses)
}

/// Crossings of segment `p→q` with the circular arc of `center`, `r`
/// starting at angle `a0` and sweeping `sweep` radians (positive angles).
fn segment_arc_crossings(p: Point, q: Point, center: Point, r: f64, a0: f64, sweep: f64) -> usize {
    let (dx, dy) = (q.x - p.x, q.y - p.y);
    let (fx, fy) = (p.x - center.x, p.y - center.y);
    let a = dx * dx + dy * dy;
    let b = 2.0 * (fx * dx + fy * dy);
    let c = fx * fx + fy * fy - r * r;
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return 0;
    }
    let root = disc.sqrt();
    [(-b - root) / (2.0 * a), (-b + root) / (2.0 * a)]
        .into_iter()
        .filter(|t| (0.0..=1.0).contains(t))
        .filter(|t| {
            let angle = (fy + t * dy).atan2(fx + t * dx);
            (angle - a0).rem_euclid(TAU) <= sweep
        })
        .count()
}

fn geometry_oracles() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trials = 10_000;
    let mut agree = 0;
    for i in 0..trials {
        let mut pt = || Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (p, q) = (pt(), pt());
        let a = sample_equal_arclength(&path(&format!("M{},{} L{},{}", p.x, p.y, q.x, q.y)), PAIR_SAMPLES);
        let (other, exact) = if i % 2 == 0 {
            let (s, t) = (pt(), pt());
            (path(&format!("M{},{} L{},{}", s.x, s.y, t.x, t.y)), segment_crossings(p, q, s, t))
        } else {
            let center = pt();
            let r = rng.gen_range(0.1..1.0);
            let a0 = rng.gen_range(0.0..TAU);
            let sweep = rng.gen_range(0.1..TAU - 0.1);
            let at = |t: f64| Point::new(center.x + r * t.cos(), center.y + r * t.sin());
            let (s, e) = (at(a0), at(a0 + sweep));
            let large = u8::from(sweep > PI);
            let d = format!("M{},{} A{r},{r} 0 {large} 1 {},{}", s.x, s.y, e.x, e.y);
            (path(&d), segment_arc_crossings(p, q, center, r, a0, sweep))
        };
        let b = sample_equal_arclength(&other, PAIR_SAMPLES);
        if count_intersections(&a, &b) == exact {
            agree += 1;
        }
    }
    let rate = agree as f64 / trials as f64;
    ensure(rate >= 0.995, || format!("intersection agreement {rate:.4} < 0.995"))?;

    let circle = load_paths("c", br#"<svg><circle cx="3" cy="-2" r="1"/></svg>"#).map_err(|e| e.to_string())?;
    let len_err = (path_length(&circle[0]) - TAU).abs();
    ensure(len_err <= 1e-4, || format!("circle length error {len_err:e}"))?;
    let area_err = (path_area(&circle[0]).unwrap_or(0.0) - PI).abs();
    ensure(area_err <= 1e-3, || format!("circle area error {area_err:e}"))?;

    for _ in 0..1000 {
        let (x, y) = (rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
        let (dx, dy) = (rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
        let k = rng.gen_range(0.1..3.0);
        let line = path(&format!("M{x},{y} l{dx},{dy} l{},{}", k * dx, k * dy));
        let profile = curvature_profile(&line, 16);
        ensure(profile.samples.iter().all(|&c| c == 0.0), || format!("non-zero curvature on {line:?}"))?;
    }
    let hand = three_point_curvature(Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(2.0, 0.0));
    ensure((hand - SQRT_2).abs() <= 1e-9, || format!("hand curvature {hand}"))?;
    Ok(format!(
        "agreement {:.2}% on {trials} pairs, length err {len_err:.1e}, area err {area_err:.1e}, hand kappa {hand:.12}",
        100.0 * rate
    ))
}

// --- graphs ---------------------------------------------------------------

fn graph_invariants() -> Result<String, String> {
    let cfg = GraphConfig::default();
    let drawings = corpus(100, 77, &SynthConfig::default());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut paths = 0;
    for (i, d) in drawings.iter().enumerate() {
        paths += d.paths.len();
        let a = build_graph(&d.drawing_id, &d.paths, &cfg).map_err(|e| e.to_string())?;
        structural(&a)?;
        let b = build_graph(&d.drawing_id, &d.paths, &cfg).map_err(|e| e.to_string())?;
        let (ja, jb) = (graph_to_json(&a).map_err(|e| e.to_string())?, graph_to_json(&b).map_err(|e| e.to_string())?);
        ensure(ja == jb, || format!("{}: output differs between runs", d.drawing_id))?;

        let s = 10f64.powf(rng.gen_range(-2.0..2.0));
        let t = AffineTransform2D::translate(rng.gen_range(-1e4..1e4), rng.gen_range(-1e4..1e4))
            .compose(&AffineTransform2D::scale(s, s));
        let similar = build_graph(&d.drawing_id, &moved(&d.paths, &t), &cfg).map_err(|e| e.to_string())?;
        same_features(&a, &similar, Motion::Similar, 1e-6)?;

        let angle = 90.0 * (1 + i % 3) as f64;
        let turned = build_graph(&d.drawing_id, &moved(&d.paths, &AffineTransform2D::rotate_degrees(angle)), &cfg)
            .map_err(|e| e.to_string())?;
        same_features(&a, &turned, Motion::QuarterTurn(angle / 360.0), 1e-6)?;
    }
    Ok(format!("100 drawings, {paths} paths: degree, order, determinism, translation/scale/quarter-turn within 1e-6"))
}

// --- network --------------------------------------------------------------

fn random_graph(n: usize, d: usize, p: f64, levels: [usize; 3], rng: &mut ChaCha8Rng) -> DrawingGraph {
    let nodes = (0..n)
        .map(|id| GraphNode {
            id,
            x: (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            y: Some(levels.map(|l| rng.gen_range(0..l))),
        })
        .collect();
    let mut edges = Vec::new();
    for s in 0..n {
        for t in s + 1..n {
            if rng.gen_bool(p) {
                edges.push(GraphEdge { s, d: t, f: std::array::from_fn(|_| rng.gen_range(-1.0..1.0)) });
            }
        }
    }
    DrawingGraph {
        drawing_id: format!("random-{n}"),
        meta: GraphMeta { k: 0, random_edges: 0, n_max: 0, seed: 0, bbox: [0.0, 0.0, 1.0, 1.0] },
        nodes,
        edges,
    }
}

fn permuted(g: &DrawingGraph, perm: &[usize]) -> DrawingGraph {
    let mut nodes: Vec<GraphNode> = g.nodes.iter().map(|n| GraphNode { id: perm[n.id], ..n.clone() }).collect();
    nodes.sort_by_key(|n| n.id);
    let mut edges: Vec<GraphEdge> = g
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (perm[e.s], perm[e.d]);
            GraphEdge { s: a.min(b), d: a.max(b), f: e.f }
        })
        .collect();
    edges.sort_by_key(|e| (e.s, e.d));
    DrawingGraph { nodes, edges, ..g.clone() }
}

fn max_gradient_error(model: &GatModel, g: &PreparedGraph, weights: [f64; 3]) -> f64 {
    let eps = 1e-5;
    let (_, grads) = model.loss_and_gradients(g, weights).expect("labelled graph");
    let analytic: Vec<Vec<f64>> = grads.tensors().iter().map(|t| t.to_vec()).collect();
    let mut probe = model.clone();
    let mut worst: f64 = 0.0;
    for (k, tensor) in analytic.iter().enumerate() {
        for (i, &a) in tensor.iter().enumerate() {
            let orig = probe.tensors()[k][i];
            probe.tensors_mut()[k][i] = orig + eps;
            let plus = probe.loss_and_gradients(g, weights).expect("labelled graph").0;
            probe.tensors_mut()[k][i] = orig - eps;
            let minus = probe.loss_and_gradients(g, weights).expect("labelled graph").0;
            probe.tensors_mut()[k][i] = orig;
            let numeric = (plus - minus) / (2.0 * eps);
            worst = worst.max((a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-6));
        }
    }
    worst
}

fn gat_correctness() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let levels = [3, 4, 5];
    let mut graphs: Vec<DrawingGraph> =
        (0..20).map(|i| random_graph(2 + i * 3, 6, rng.gen_range(0.05..0.9), levels, &mut rng)).collect();
    graphs.push(random_graph(1, 6, 0.0, levels, &mut rng));
    let model = GatModel::init(6, 12, levels, 9);
    let mut worst_row: f64 = 0.0;
    for g in &graphs {
        let p = PreparedGraph::new(g, &Normalizer::identity(6)).map_err(|e| e.to_string())?;
        let trace = model.forward(&p).map_err(|e| e.to_string())?;
        for alpha in [&trace.cache1.alpha, &trace.cache2.alpha] {
            for i in 0..p.node_count() {
                let sum: f64 = alpha[p.offsets[i]..p.offsets[i + 1]].iter().sum();
                worst_row = worst_row.max((sum - 1.0).abs());
            }
        }
    }
    let synthetic: Vec<DrawingGraph> = corpus(5, 3, &SynthConfig::default())
        .iter()
        .map(|d| d.labeled_graph(&GraphConfig::default()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let norm = Normalizer::fit(&synthetic);
    let big = GatModel::init(node_dim(32), 16, [3, 5, 6], 4);
    for g in &synthetic {
        let p = PreparedGraph::new(g, &norm).map_err(|e| e.to_string())?;
        let trace = big.forward(&p).map_err(|e| e.to_string())?;
        for alpha in [&trace.cache1.alpha, &trace.cache2.alpha] {
            for i in 0..p.node_count() {
                let sum: f64 = alpha[p.offsets[i]..p.offsets[i + 1]].iter().sum();
                worst_row = worst_row.max((sum - 1.0).abs());
            }
        }
    }
    ensure(worst_row <= 1e-9, || format!("attention row sum off by {worst_row:e}"))?;

    let mut worst_grad: f64 = 0.0;
    for seed in 0..4u64 {
        let n = 5 + (seed as usize) % 6;
        let g = random_graph(n, 5, 0.5, levels, &mut rng);
        let p = PreparedGraph::new(&g, &Normalizer::identity(5)).map_err(|e| e.to_string())?;
        let m = GatModel::init(5, 7, levels, 50 + seed);
        worst_grad = worst_grad.max(max_gradient_error(&m, &p, [1.0, 0.5, 2.0]));
    }
    ensure(worst_grad < 1e-4, || format!("finite-difference relative error {worst_grad:e}"))?;

    let mut worst_perm: f64 = 0.0;
    for g in graphs.iter().filter(|g| g.nodes.len() > 1) {
        let n = g.nodes.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let id = Normalizer::identity(6);
        let p = PreparedGraph::new(g, &id).map_err(|e| e.to_string())?;
        let q = PreparedGraph::new(&permuted(g, &perm), &id).map_err(|e| e.to_string())?;
        let (tp, tq) = (model.forward(&p).map_err(|e| e.to_string())?, model.forward(&q).map_err(|e| e.to_string())?);
        for level in 0..3 {
            for i in 0..n {
                let (a, b) = (tp.probs[level].row(i), tq.probs[level].row(perm[i]));
                for (x, y) in a.iter().zip(b.iter()) {
                    worst_perm = worst_perm.max((x - y).abs());
                }
            }
            let (pa, pb) = (tp.predictions(level + 1), tq.predictions(level + 1));
            ensure((0..n).all(|i| pa[i] == pb[perm[i]]), || format!("argmax changed under relabelling of {}", g.drawing_id))?;
        }
    }
    ensure(worst_perm <= 1e-12, || format!("permutation changed outputs by {worst_perm:e}"))?;
    Ok(format!(
        "row-sum err {worst_row:.1e}, FD rel err {worst_grad:.1e} on 4 graphs of 5-10 nodes, permutation diff {worst_perm:.1e} with equal argmax"
    ))
}

fn prepared_corpus(n: usize, seed: u64, synth: &SynthConfig) -> Result<Vec<DrawingGraph>, String> {
    corpus(n, seed, synth)
        .iter()
        .map(|d| d.labeled_graph(&GraphConfig::default()).map_err(|e| e.to_string()))
        .collect()
}

fn prepare_all(graphs: &[DrawingGraph], norm: &Normalizer) -> Result<Vec<PreparedGraph>, String> {
    graphs.iter().map(|g| PreparedGraph::new(g, norm).map_err(|e| e.to_string())).collect()
}

fn overfit() -> Result<String, String> {
    let graphs = prepared_corpus(50, 1, &SynthConfig::default())?;
    let norm = Normalizer::fit(&graphs);
    let set = prepare_all(&graphs, &norm)?;
    let levels = synthetic_label_map().level_sizes;
    let model = GatModel::init(set[0].x.ncols(), 32, levels, 0);
    let cfg = TrainConfig { epochs: 300, lr: 5e-3, target_accuracy: Some(0.95), ..TrainConfig::default() };
    let out = train(&model, &set, &[], &cfg, |_: &EpochMetrics| {}).map_err(|e| e.to_string())?;
    let acc = evaluate(&out.model, &set, 3).map_err(|e| e.to_string())?.accuracy;
    let nodes: usize = set.iter().map(|g| g.node_count()).sum();
    ensure(acc >= 0.95, || format!("level-3 accuracy {acc:.4} after {} epochs", out.history.len()))?;
    Ok(format!("50 drawings / {nodes} nodes: level-3 accuracy {acc:.4} after {} epochs (hidden 32)", out.history.len()))
}

fn hierarchy_benefit() -> Result<String, String> {
    let synth = SynthConfig { imbalance: 20.0, ..SynthConfig::default() };
    let levels = synthetic_label_map().level_sizes;
    let mut wins = 0;
    let mut detail = Vec::new();
    for seed in 0..3u64 {
        let graphs = prepared_corpus(50, 100 + seed, &synth)?;
        let [tr, _, te] = split_dataset(&graphs, [0.8, 0.0, 0.2], seed).map_err(|e| e.to_string())?;
        let norm = Normalizer::fit(&tr);
        let (tr, te) = (prepare_all(&tr, &norm)?, prepare_all(&te, &norm)?);
        let mut macro_f1 = [0.0; 2];
        for (slot, weights) in [[1.0, 1.0, 1.0], [0.0, 0.0, 1.0]].into_iter().enumerate() {
            let model = GatModel::init(tr[0].x.ncols(), 32, levels, seed);
            let cfg = TrainConfig { epochs: 20, lr: 1e-3, head_weights: weights, seed, ..TrainConfig::default() };
            let out = train(&model, &tr, &[], &cfg, |_: &EpochMetrics| {}).map_err(|e| e.to_string())?;
            macro_f1[slot] = evaluate(&out.model, &te, 3).map_err(|e| e.to_string())?.macro_avg.f1;
        }
        if macro_f1[0] >= macro_f1[1] {
            wins += 1;
        }
        detail.push(format!("seed {seed}: {:.3} vs {:.3}", macro_f1[0], macro_f1[1]));
    }
    let summary = format!("three-head vs level-3-only test macro-F1 (20:1): {}", detail.join(", "));
    ensure(wins >= 2, || format!("three-head won {wins}/3; {summary}"))?;
    Ok(format!("{wins}/3 seeds; {summary}"))
}

fn metrics_exactness() -> Result<String, String> {
    let r = classification_report(&[0, 0, 1], &[0, 1, 1], 2).map_err(|e| e.to_string())?;
    let two_thirds = 2.0 / 3.0;
    let rows: Vec<(f64, f64, f64, u64)> = r.rows.iter().map(|x| (x.precision, x.recall, x.f1, x.support)).collect();
    ensure(rows == vec![(1.0, 0.5, two_thirds, 2), (0.5, 1.0, two_thirds, 1)], || format!("rows {rows:?}"))?;
    ensure(r.accuracy == two_thirds, || format!("accuracy {}", r.accuracy))?;
    ensure(r.macro_avg.f1 == two_thirds, || format!("macro F1 {}", r.macro_avg.f1))?;
    ensure(r.weighted_avg.f1 == two_thirds, || format!("weighted F1 {}", r.weighted_avg.f1))?;
    ensure(weighted_f1(&r).ok() == Some(two_thirds), || "weighted_f1".into())?;
    ensure(r.macro_avg.precision == 0.75 && r.macro_avg.recall == 0.75, || format!("{r:?}"))?;

    let z = classification_report(&[0, 1], &[0, 1], 3).map_err(|e| e.to_string())?;
    let row = &z.rows[2];
    ensure((row.precision, row.recall, row.f1, row.support) == (0.0, 0.0, 0.0, 0), || format!("{row:?}"))?;
    let names = ["a".to_string(), "b".to_string(), "Roof Construction".to_string()];
    let table = format_report(&z, &names);
    let line = table.lines().find(|l| l.contains("Roof Construction")).unwrap_or_default();
    let cells: Vec<&str> = line.split_whitespace().skip(2).collect();
    ensure(cells == ["0.00", "0.00", "0.00", "0"], || format!("zero-support row `{line}`"))?;
    Ok("hand example exact (P/R/F1/support/accuracy/macro/weighted), zero-support row 0.00/0.00/0.00/0".into())
}

// --- CLI driven -----------------------------------------------------------

fn vgraph() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vgraph"))
}

fn run(cmd: &mut Command) -> Result<String, String> {
    let out = cmd.output().map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    if !out.status.success() {
        return Err(format!("{cmd:?} failed: {}{}", stdout, String::from_utf8_lossy(&out.stderr)));
    }
    Ok(stdout)
}

fn model_capacity() -> Result<String, String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let t = tmp.path();
    run(vgraph().args(["synth", "--count", "3", "--max-paths", "20", "--out"]).arg(t.join("svg")))?;
    run(vgraph()
        .args(["graph", "--label-source", "layer", "--labels", "builtin:tum", "--unknown-as-others", "--out"])
        .arg(t.join("ds"))
        .arg(t.join("svg")))?;
    let stdout = run(vgraph().arg("train").arg(t.join("ds")).arg("--out").arg(t.join("run")).args(["--epochs", "0"]))?;
    let first = stdout.lines().next().unwrap_or_default();
    let count: usize = first
        .strip_prefix("parameter_count: ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| format!("first line of train output is `{first}`"))?;
    let tum = LabelMap::tum().level_sizes;
    let expected = closed_form_parameter_count(node_dim(32), 672, tum);
    ensure(count == expected, || format!("reported {count}, closed form {expected}"))?;
    ensure((1_000_000..=1_600_000).contains(&count), || format!("parameter count {count} outside [1.0e6, 1.6e6]"))?;
    Ok(format!("train reports parameter_count {count} at startup (d_in 271, hidden 672, heads 3/12/43)"))
}

fn floorplancad_script() -> Result<String, String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let t = tmp.path();
    run(vgraph().args(["synth", "--floorplancad", "--count", "100", "--seed", "3", "--out"]).arg(t.join("svg")))?;
    let script: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "scripts", "floorplancad.sh"].iter().collect();
    run(Command::new("sh")
        .arg(&script)
        .arg(t.join("svg"))
        .arg(t.join("work"))
        .args(["--epochs", "2"])
        .env("VGRAPH", env!("CARGO_BIN_EXE_vgraph"))
        .env("LIMIT", "100"))?;
    let log = std::fs::read_to_string(t.join("work/run/metrics.jsonl")).map_err(|e| e.to_string())?;
    let history: Vec<EpochMetrics> =
        log.lines().map(|l| serde_json::from_str(l).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    ensure(history.len() == 3, || format!("expected baseline + 2 epochs, got {}", history.len()))?;
    let wf1: Vec<f64> = history.iter().map(|m| m.val_wf1).collect();
    let loss: Vec<f64> = history.iter().map(|m| m.loss).collect();
    ensure(wf1.windows(2).all(|w| w[1] >= w[0]) && wf1[2] > wf1[0], || format!("val wF1 {wf1:?}"))?;
    ensure(loss.windows(2).all(|w| w[1] <= w[0]), || format!("loss {loss:?}"))?;
    ensure(t.join("work/eval/report.json").is_file(), || "no eval report".into())?;
    Ok(format!(
        "100 drawings, 2 epochs: val wF1 {:.3} -> {:.3} -> {:.3}, loss {:.3} -> {:.3} -> {:.3}",
        wf1[0], wf1[1], wf1[2], loss[0], loss[1], loss[2]
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, Duration); 8] = [
        ("geometry oracles", geometry_oracles, Duration::from_secs(30)),
        ("graph invariants", graph_invariants, Duration::from_secs(120)),
        ("GAT correctness", gat_correctness, Duration::from_secs(60)),
        ("overfit sanity", overfit, Duration::from_secs(300)),
        ("hierarchy benefit", hierarchy_benefit, Duration::from_secs(600)),
        ("metrics exactness", metrics_exactness, Duration::from_secs(10)),
        ("model capacity", model_capacity, Duration::from_secs(120)),
        ("FloorplanCAD script", floorplancad_script, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = match result {
            Ok(msg) if took > budget => Err(format!("{msg}; took {took:.1?}, budget {budget:?}")),
            other => other,
        };
        match result {
            Ok(msg) => println!("PASS  {name:<20} {msg} [{took:.1?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name:<20} {msg} [{took:.1?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
