#![allow(clippy::needless_range_loop)]
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::graph::{DrawingGraph, GraphEdge, GraphMeta, GraphNode, EDGE_DIM};

/// Random graph with `n` nodes, `d` features, edge probability `p`.
pub(crate) fn random_graph(n: usize, d: usize, p: f64, levels: [usize; 3], seed: u64) -> DrawingGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
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
        drawing_id: format!("random-{seed}"),
        meta: GraphMeta { k: 0, random_edges: 0, n_max: 0, seed, bbox: [0.0, 0.0, 1.0, 1.0] },
        nodes,
        edges,
    }
}

fn prepare(g: &DrawingGraph) -> PreparedGraph {
    PreparedGraph::new(g, &Normalizer::identity(g.feature_dim())).unwrap()
}

fn random_layer(d_in: usize, d_out: usize, seed: u64) -> GatLayerParams {
    GatModel::init(d_in, d_out, [1, 1, 1], seed).layer1
}

#[test]
fn isolated_node_attends_to_itself() {
    let g = prepare(&random_graph(3, 4, 0.0, [2, 2, 2], 1));
    let layer = random_layer(4, 5, 2);
    let (y, cache) = layer.forward(&g, &g.x);
    assert!(cache.alpha.iter().all(|&a| a == 1.0));
    let expected = g.x.dot(&layer.phi_s.t());
    assert_eq!(y, expected);
}

#[test]
fn symmetric_neighbourhood_has_uniform_attention() {
    let mut graph = random_graph(3, 4, 0.0, [2, 2, 2], 1);
    for n in &mut graph.nodes {
        n.x = vec![0.3, -0.2, 0.5, 0.1];
    }
    let f = [0.0; EDGE_DIM];
    graph.edges = vec![GraphEdge { s: 0, d: 1, f }, GraphEdge { s: 0, d: 2, f }];
    let g = prepare(&graph);
    let alpha = random_layer(4, 6, 3).attention(&g, &g.x);
    for a in &alpha[g.offsets[0]..g.offsets[1]] {
        assert!((a - 1.0 / 3.0).abs() < 1e-15);
    }
}

#[test]
fn softmax_is_shift_invariant() {
    let scores = [0.3, -1.2, 4.0, 2.5];
    let shifted = scores.map(|s| s + 1234.5);
    let (mut a, mut b) = ([0.0; 4], [0.0; 4]);
    softmax_into(&scores, &mut a);
    softmax_into(&shifted, &mut b);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
    let mut huge = [0.0; 2];
    softmax_into(&[1e308, 1e308], &mut huge);
    assert_eq!(huge, [0.5, 0.5]);
}

#[test]
fn zero_projections_give_zero_output() {
    let g = prepare(&random_graph(5, 4, 0.5, [2, 2, 2], 4));
    let mut layer = random_layer(4, 3, 5);
    layer.phi_s.fill(0.0);
    layer.phi_t.fill(0.0);
    let (y, _) = layer.forward(&g, &g.x);
    assert!(y.iter().all(|&v| v == 0.0));
}

/// Dense reimplementation: scores over the full adjacency matrix.
fn dense_layer(layer: &GatLayerParams, graph: &DrawingGraph) -> Array2<f64> {
    let n = graph.nodes.len();
    let x = Array2::from_shape_fn((n, graph.feature_dim()), |(i, c)| graph.nodes[i].x[c]);
    let mut adj = vec![vec![None; n]; n];
    for i in 0..n {
        adj[i][i] = Some([0.0; EDGE_DIM]);
    }
    for e in &graph.edges {
        adj[e.s][e.d] = Some(e.f);
        adj[e.d][e.s] = Some(e.f);
    }
    let mut out = Array2::zeros((n, layer.d_out()));
    for i in 0..n {
        let xi = x.row(i);
        let mut weights = vec![0.0; n];
        for j in 0..n {
            if let Some(f) = adj[i][j] {
                let u = layer.phi_s.dot(&xi) + layer.phi_t.dot(&x.row(j)) + layer.phi_e.dot(&Array1::from(f.to_vec()));
                weights[j] = layer.a.dot(&u.mapv(|v| if v > 0.0 { v } else { layer.leaky_slope * v })).exp();
            }
        }
        let total: f64 = weights.iter().sum();
        for j in 0..n {
            if weights[j] == 0.0 {
                continue;
            }
            let msg = if i == j { layer.phi_s.dot(&xi) } else { layer.phi_t.dot(&x.row(j)) };
            out.row_mut(i).scaled_add(weights[j] / total, &msg);
        }
    }
    out
}

#[test]
fn layer_matches_dense_oracle() {
    for seed in 0..3 {
        let graph = random_graph(5, 6, 0.5, [2, 2, 2], 10 + seed);
        let layer = random_layer(6, 4, 20 + seed);
        let g = prepare(&graph);
        let (y, _) = layer.forward(&g, &g.x);
        let oracle = dense_layer(&layer, &graph);
        for (a, b) in y.iter().zip(oracle.iter()) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }
}

#[test]
fn zero_model_is_uniform() {
    let g = prepare(&random_graph(6, 5, 0.4, [3, 12, 43], 6));
    let model = GatModel::zeros(5, 8, [3, 12, 43]);
    let trace = model.forward(&g).unwrap();
    for (k, probs) in trace.probs.iter().enumerate() {
        let expected = 1.0 / model.level_sizes[k] as f64;
        assert!(probs.iter().all(|p| (p - expected).abs() < 1e-15));
    }
}

#[test]
fn probabilities_and_attention_sum_to_one() {
    for seed in 0..4 {
        let g = prepare(&random_graph(9, 5, 0.3, [3, 4, 6], seed));
        let model = GatModel::init(5, 8, [3, 4, 6], seed);
        let trace = model.forward(&g).unwrap();
        for probs in &trace.probs {
            for row in probs.rows() {
                assert!((row.sum() - 1.0).abs() < 1e-9);
            }
        }
        for cache in [&trace.cache1, &trace.cache2] {
            for i in 0..g.node_count() {
                let s: f64 = cache.alpha[g.offsets[i]..g.offsets[i + 1]].iter().sum();
                assert!((s - 1.0).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn relabeling_nodes_permutes_outputs() {
    let graph = random_graph(6, 5, 0.5, [2, 3, 4], 7);
    let perm = [3, 0, 5, 1, 4, 2];
    let mut relabeled = graph.clone();
    for node in &mut relabeled.nodes {
        node.id = perm[node.id];
    }
    relabeled.nodes.sort_by_key(|n| n.id);
    for e in &mut relabeled.edges {
        let (s, d) = (perm[e.s], perm[e.d]);
        (e.s, e.d) = (s.min(d), s.max(d));
    }
    relabeled.edges.sort_by_key(|e| (e.s, e.d));
    let model = GatModel::init(5, 8, [2, 3, 4], 8);
    let a = model.forward(&prepare(&graph)).unwrap();
    let b = model.forward(&prepare(&relabeled)).unwrap();
    for k in 0..3 {
        for i in 0..6 {
            for c in 0..model.level_sizes[k] {
                assert!((a.probs[k][[i, c]] - b.probs[k][[perm[i], c]]).abs() < 1e-12);
            }
        }
        let (pa, pb) = (a.predictions(k + 1), b.predictions(k + 1));
        assert!((0..6).all(|i| pa[i] == pb[perm[i]]));
    }
}

#[test]
fn loss_extremes() {
    let mut graph = random_graph(4, 3, 0.5, [2, 3, 4], 9);
    for n in &mut graph.nodes {
        n.y = Some([1, 2, 3]);
    }
    let g = prepare(&graph);
    let uniform = GatModel::zeros(3, 4, [2, 3, 4]);
    let (loss, _) = uniform.loss_and_gradients(&g, [1.0, 0.5, 2.0]).unwrap();
    let expected = 2f64.ln() + 0.5 * 3f64.ln() + 2.0 * 4f64.ln();
    assert!((loss - expected).abs() < 1e-12);

    let mut confident = uniform.clone();
    for (k, b) in confident.biases.iter_mut().enumerate() {
        b[[1, 2, 3][k]] = 40.0;
    }
    let (loss, _) = confident.loss_and_gradients(&g, [1.0, 1.0, 1.0]).unwrap();
    assert!(loss <= 1e-6);

    graph.nodes[2].y = None;
    let g = prepare(&graph);
    assert!(matches!(uniform.loss_and_gradients(&g, [1.0; 3]), Err(GatError::UnlabeledNode { node: 2, .. })));
}

/// Largest relative gap between analytic and central-difference gradients.
pub(crate) fn gradient_check(model: &GatModel, g: &PreparedGraph, weights: [f64; 3]) -> f64 {
    let eps = 1e-5;
    let (_, grads) = model.loss_and_gradients(g, weights).unwrap();
    let analytic: Vec<Vec<f64>> = grads.tensors().iter().map(|t| t.to_vec()).collect();
    let mut worst: f64 = 0.0;
    let mut probe = model.clone();
    for (k, tensor) in analytic.iter().enumerate() {
        for i in 0..tensor.len() {
            let orig = probe.tensors()[k][i];
            probe.tensors_mut()[k][i] = orig + eps;
            let plus = probe.loss_and_gradients(g, weights).unwrap().0;
            probe.tensors_mut()[k][i] = orig - eps;
            let minus = probe.loss_and_gradients(g, weights).unwrap().0;
            probe.tensors_mut()[k][i] = orig;
            let numeric = (plus - minus) / (2.0 * eps);
            let scale = tensor[i].abs().max(numeric.abs()).max(1e-6);
            worst = worst.max((tensor[i] - numeric).abs() / scale);
        }
    }
    worst
}

#[test]
fn gradients_match_finite_differences() {
    for seed in 0..3 {
        let graph = random_graph(5 + seed as usize, 6, 0.5, [3, 4, 5], 100 + seed);
        let model = GatModel::init(6, 8, [3, 4, 5], 200 + seed);
        let err = gradient_check(&model, &prepare(&graph), [1.0, 0.7, 1.3]);
        assert!(err < 1e-4, "seed {seed}: max relative error {err}");
    }
}

#[test]
fn parameter_counts() {
    let m = GatModel::zeros(269, 8, [3, 12, 43]);
    // Layers: 2·8·269 + 8·10 + 8 and 2·8·8 + 8·10 + 8; heads: 58·8 + 58.
    assert_eq!(m.parameter_count(), 4392 + 216 + 522);
    assert_eq!(m.parameter_count(), closed_form_parameter_count(269, 8, [3, 12, 43]));
    assert_eq!(m.parameter_count(), m.tensors().iter().map(|t| t.len()).sum::<usize>());
    let mut last = 0;
    for d_h in [4, 8, 16, 32] {
        let c = closed_form_parameter_count(269, d_h, [3, 12, 43]);
        assert!(c > last);
        last = c;
    }
    let shipped = closed_form_parameter_count(crate::graph::node_dim(32), DEFAULT_HIDDEN, [3, 12, 43]);
    assert!((1_000_000..=1_600_000).contains(&shipped), "{shipped}");
}

#[test]
fn training_contracts() {
    let graphs: Vec<PreparedGraph> = (0..3).map(|s| prepare(&random_graph(6, 4, 0.4, [2, 2, 3], s))).collect();
    let model = GatModel::init(4, 6, [2, 2, 3], 1);
    let frozen = TrainConfig { epochs: 3, lr: 0.0, ..TrainConfig::default() };
    let out = train(&model, &graphs, &[], &frozen, |_| {}).unwrap();
    assert_eq!(out.model, model);
    let sgd = TrainConfig { optimizer: OptimizerKind::Sgd, ..frozen.clone() };
    assert_eq!(train(&model, &graphs, &[], &sgd, |_| {}).unwrap().model, model);

    let cfg = TrainConfig { epochs: 5, lr: 1e-2, batch_size: 2, seed: 4, ..TrainConfig::default() };
    let a = train(&model, &graphs, &graphs[..1], &cfg, |_| {}).unwrap();
    let b = train(&model, &graphs, &graphs[..1], &cfg, |_| {}).unwrap();
    assert_eq!(a.model, b.model);
    assert_eq!(a.history, b.history);
    assert_eq!(a.history.len(), 5);
    assert!(a.history.last().unwrap().loss < a.history[0].loss);
    assert!(matches!(train(&model, &[], &[], &cfg, |_| {}), Err(GatError::EmptyDataset)));
}

#[test]
fn divergence_returns_last_good_model() {
    let graphs = vec![prepare(&random_graph(5, 4, 0.5, [2, 2, 2], 3))];
    let mut model = GatModel::init(4, 4, [2, 2, 2], 3);
    model.heads[0][[0, 0]] = f64::MAX;
    model.heads[0][[1, 0]] = -f64::MAX;
    let cfg = TrainConfig { epochs: 2, optimizer: OptimizerKind::Sgd, lr: 1e300, ..TrainConfig::default() };
    match train(&model, &graphs, &[], &cfg, |_| {}) {
        Err(GatError::DivergedLoss { last_good, .. }) => assert!(last_good.is_finite()),
        other => panic!("{:?}", other.map(|o| o.history)),
    }
}

#[test]
fn checkpoint_round_trip() {
    let dir = std::env::temp_dir().join(format!("vgraph-ck-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("model.json");
    let ck = Checkpoint::new(GatModel::init(4, 3, [2, 2, 3], 9), Normalizer::identity(4), None);
    ck.save(&path).unwrap();
    assert_eq!(Checkpoint::load(&path).unwrap(), ck);
    std::fs::remove_dir_all(&dir).unwrap();
}
