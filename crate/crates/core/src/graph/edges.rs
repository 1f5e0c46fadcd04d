use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::point::Point;

/// Directed arcs from every node to its `k` nearest others (clamped to the
/// node count). Equal distances go to the lower index.
pub fn knn_edges(points: &[Point], k: usize) -> Vec<(usize, usize)> {
    let n = points.len();
    let k = k.min(n.saturating_sub(1));
    let mut arcs = Vec::with_capacity(n * k);
    if k == 0 {
        return arcs;
    }
    let mut candidates: Vec<(f64, usize)> = Vec::with_capacity(n);
    for (i, p) in points.iter().enumerate() {
        candidates.clear();
        candidates.extend(points.iter().enumerate().filter(|&(j, _)| j != i).map(|(j, q)| {
            let (dx, dy) = (p.x - q.x, p.y - q.y);
            (dx * dx + dy * dy, j)
        }));
        let by_distance = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < candidates.len() {
            candidates.select_nth_unstable_by(k - 1, by_distance);
            candidates.truncate(k);
        }
        candidates.sort_by(by_distance);
        arcs.extend(candidates.iter().map(|&(_, j)| (i, j)));
    }
    arcs
}

/// Each unordered pair once as `(min, max)`, sorted; self-arcs are dropped.
pub fn dedup_undirected(arcs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    arcs.iter()
        .filter(|(a, b)| a != b)
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Up to `count` uniformly drawn undirected pairs over `n` nodes that are
/// neither self-pairs nor in `existing`. Sorted, deterministic in `seed`.
pub fn random_edges(n: usize, count: usize, seed: u64, existing: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let taken: BTreeSet<(usize, usize)> = existing.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let total = n * n.saturating_sub(1) / 2;
    let available = total.saturating_sub(taken.iter().filter(|(a, b)| a != b && *b < n).count());
    if count == 0 || available == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if count >= available || available <= 4 * count {
        // Small pool: enumerate it and take a seeded partial shuffle.
        let mut pool: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|p| !taken.contains(p)).collect();
        let take = count.min(pool.len());
        for i in 0..take {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        pool.truncate(take);
        pool.sort_unstable();
        return pool;
    }
    let mut chosen = BTreeSet::new();
    while chosen.len() < count {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let pair = (a.min(b), a.max(b));
        if !taken.contains(&pair) {
            chosen.insert(pair);
        }
    }
    chosen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(xs: &[(f64, f64)]) -> Vec<Point> {
        xs.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn knn_tie_goes_to_lower_id() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(knn_edges(&p, 1), vec![(0, 1), (1, 0), (2, 1)]);
    }

    #[test]
    fn knn_large_k_is_complete() {
        let p = pts(&[(0.0, 0.0), (1.0, 3.0), (2.0, 0.5), (-1.0, 2.0)]);
        let arcs = knn_edges(&p, 3);
        assert_eq!(arcs.len(), 12);
        assert_eq!(dedup_undirected(&arcs).len(), 6);
        assert_eq!(knn_edges(&p, 10), arcs);
    }

    #[test]
    fn knn_clamps_k() {
        let p = pts(&[(0.0, 0.0), (5.0, 5.0)]);
        assert_eq!(knn_edges(&p, 5), vec![(0, 1), (1, 0)]);
        assert!(knn_edges(&p[..1], 3).is_empty());
    }

    #[test]
    fn dedup_examples() {
        assert_eq!(dedup_undirected(&[(0, 1), (1, 0)]), vec![(0, 1)]);
        assert_eq!(dedup_undirected(&[(0, 1), (2, 1)]), vec![(0, 1), (1, 2)]);
        let both: Vec<_> = (0..5).flat_map(|i| [(i, i + 1), (i + 1, i)]).collect();
        assert_eq!(dedup_undirected(&both).len(), 5);
    }

    #[test]
    fn random_edge_contract() {
        assert!(random_edges(10, 0, 1, &[]).is_empty());
        let a = random_edges(50, 20, 7, &[(0, 1)]);
        assert_eq!(a, random_edges(50, 20, 7, &[(0, 1)]));
        assert_eq!(a.len(), 20);
        assert!(a.iter().all(|&(x, y)| x < y && (x, y) != (0, 1)));
        let complete: Vec<_> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
        assert!(random_edges(6, 10, 3, &complete).is_empty());
        // Pool smaller than the request: everything left is returned.
        assert_eq!(random_edges(6, 10, 3, &complete[1..]), vec![(0, 1)]);
    }
}
