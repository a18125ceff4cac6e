//! Properties of the embedding machinery: the contraction map never
//! lengthens trees, partitions and covers translate both ways, and the
//! star embedding wins the small scans.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use simplex_steiner::embed::{
    conjecture3_scan, contract_pair, cover_to_partition, embed_graph, make_reduction_instance,
    partition_to_cover, Graph, PartitionCheck, PartitionViolation, Scale,
};
use simplex_steiner::geometry::{dist_s, Point};
use std::collections::BTreeSet;

fn random_simple_graph(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Graph {
    let mut edges = BTreeSet::new();
    let mut guard = 0;
    while edges.len() < m && guard < 10_000 {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
        guard += 1;
    }
    Graph::new(n, edges.into_iter().collect()).unwrap()
}

/// Random graph guaranteed to contain two non-isolated vertices with
/// disjoint closed neighborhoods.
fn random_graph_with_disjoint_pair(rng: &mut ChaCha8Rng) -> (Graph, (usize, usize)) {
    loop {
        let n = rng.random_range(6..=10);
        let m = rng.random_range(3..=9);
        let g = random_simple_graph(rng, n, m);
        if let Some((i, j)) = g.disjoint_closed_neighborhood_pair() {
            let deg = |v: usize| g.edges().iter().filter(|&&(a, b)| a == v || b == v).count();
            if deg(i) > 0 && deg(j) > 0 {
                return (g, (i, j));
            }
        }
    }
}

/// Random bipartite graph: triangle-free by construction. Returns the graph
/// and the left side of the bipartition (a vertex cover).
fn random_triangle_free(rng: &mut ChaCha8Rng, n_max: usize) -> (Graph, BTreeSet<usize>) {
    loop {
        let n = rng.random_range(4..=n_max);
        let left: BTreeSet<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if left.is_empty() || left.len() == n {
            continue;
        }
        let right: Vec<usize> = (0..n).filter(|v| !left.contains(v)).collect();
        let left_vec: Vec<usize> = left.iter().copied().collect();
        let mut edges = BTreeSet::new();
        let m = rng.random_range(3..=(2 * n).min(left.len() * right.len()));
        let mut guard = 0;
        while edges.len() < m && guard < 1000 {
            let u = left_vec[rng.random_range(0..left_vec.len())];
            let v = right[rng.random_range(0..right.len())];
            edges.insert((u.min(v), u.max(v)));
            guard += 1;
        }
        if edges.len() < 3 {
            continue;
        }
        let g = Graph::new(n, edges.into_iter().collect()).unwrap();
        assert!(g.is_triangle_free());
        return (g, left);
    }
}

fn total_length(points: &[Point], edges: &[(usize, usize)]) -> f64 {
    edges
        .iter()
        .map(|&(a, b)| dist_s(points[a].coords(), points[b].coords()))
        .sum()
}

#[test]
fn contraction_never_lengthens_random_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut strict_checked = 0usize;
    for case in 0..300 {
        let (g, (i, j)) = random_graph_with_disjoint_pair(&mut rng);
        let scale = if case % 2 == 0 {
            Scale::Raw
        } else {
            Scale::Unit
        };
        let config = embed_graph(&g, scale);
        let m = config.points.len();

        // A strictly interior extra point: positive mix of all embedded
        // points plus a positive bump on every non-isolated coordinate.
        let mut interior = vec![0.0; g.n_vertices()];
        for p in &config.points {
            let w = rng.random_range(0.2..1.0);
            for (acc, &x) in interior.iter_mut().zip(p.coords()) {
                *acc += w * x;
            }
        }
        let norm: f64 = 2.0 * interior.iter().sum::<f64>();
        for x in interior.iter_mut() {
            *x /= norm;
        }
        let extras = vec![Point::new(interior)];

        // Random spanning structure over embedded points + the extra point;
        // force one edge from the extra point to an embedded point whose
        // i/j coordinates have min 0 (any point does: no edge touches both
        // i and j since their closed neighborhoods are disjoint).
        let n_nodes = m + extras.len();
        let forced_target = rng.random_range(0..m);
        let mut edges = vec![(m, forced_target)];
        let mut connected: Vec<usize> = vec![m, forced_target];
        for node in (0..m).filter(|&p| p != forced_target) {
            let anchor = connected[rng.random_range(0..connected.len())];
            edges.push((node, anchor));
            connected.push(node);
        }
        assert_eq!(edges.len(), n_nodes - 1);

        let all_points: Vec<Point> = config.points.iter().chain(extras.iter()).cloned().collect();
        let before = total_length(&all_points, &edges);

        let out = contract_pair(&config, &extras, i, j).unwrap();
        let mapped: Vec<Point> = out
            .embedded
            .iter()
            .chain(out.tree_points.iter())
            .cloned()
            .collect();
        let after = total_length(&mapped, &edges);
        assert!(
            after <= before + 1e-12,
            "contraction lengthened a tree: {before} -> {after}"
        );

        // Strictness: the forced edge joins a strictly interior point to a
        // point with min(p_i, p_j) = 0.
        let s = &all_points[m];
        if s[i] > 1e-12 && s[j] > 1e-12 {
            strict_checked += 1;
            assert!(
                after < before - 1e-12,
                "expected strict decrease: {before} -> {after}"
            );
        }
    }
    assert!(strict_checked > 200, "strict case undersampled");
}

#[test]
fn contraction_preserves_edge_embeddings() {
    // After contracting (i, j), the embedded points are exactly the
    // embedding of the contracted graph, in edge order.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let (g, (i, j)) = random_graph_with_disjoint_pair(&mut rng);
        let config = embed_graph(&g, Scale::Raw);
        let out = contract_pair(&config, &[], i, j).unwrap();
        let expected = embed_graph(&out.contracted_graph, Scale::Raw);
        let mut got: Vec<Vec<f64>> = out.embedded.iter().map(|p| p.coords().to_vec()).collect();
        let mut want: Vec<Vec<f64>> = expected
            .points
            .iter()
            .map(|p| p.coords().to_vec())
            .collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, want);
    }
}

#[test]
fn unit_embeddings_have_two_distances() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..40 {
        let (g, _) = random_triangle_free(&mut rng, 9);
        let config = embed_graph(&g, Scale::Unit);
        for a in 0..config.points.len() {
            for b in a + 1..config.points.len() {
                let d = dist_s(config.points[a].coords(), config.points[b].coords());
                let near_one = (d - 1.0).abs() < 1e-12;
                let near_sqrt2 = (d - 2.0_f64.sqrt()).abs() < 1e-12;
                assert!(near_one || near_sqrt2, "distance {d}");
            }
        }
    }
}

#[test]
fn cover_partition_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let (g, left_cover) = random_triangle_free(&mut rng, 10);
        let inst = make_reduction_instance(&g).unwrap();
        let parts = cover_to_partition(&inst, &left_cover).unwrap();
        assert!(parts.len() <= left_cover.len());
        match partition_to_cover(&inst, &parts).unwrap() {
            PartitionCheck::Cover(cover) => {
                assert!(cover.len() <= parts.len());
                // And the returned set really is a cover.
                assert!(cover_to_partition(&inst, &cover).is_ok());
            }
            PartitionCheck::Violation(v) => panic!("round trip violation: {v:?}"),
        }
    }
}

#[test]
fn injected_disjoint_edges_are_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut injected = 0usize;
    while injected < 30 {
        let (g, _) = random_triangle_free(&mut rng, 10);
        let inst = make_reduction_instance(&g).unwrap();
        let edges = g.edges();
        // Find a vertex-disjoint pair of edges to stuff into one part.
        let mut bad_pair = None;
        'search: for a in 0..edges.len() {
            for b in a + 1..edges.len() {
                let (u1, v1) = edges[a];
                let (u2, v2) = edges[b];
                if u1 != u2 && u1 != v2 && v1 != u2 && v1 != v2 {
                    bad_pair = Some((a, b));
                    break 'search;
                }
            }
        }
        let Some((a, b)) = bad_pair else { continue };
        injected += 1;
        let mut partition = vec![vec![a, b]];
        for e in 0..edges.len() {
            if e != a && e != b {
                partition.push(vec![e]);
            }
        }
        match partition_to_cover(&inst, &partition).unwrap() {
            PartitionCheck::Violation(PartitionViolation::DisjointEdges {
                part,
                first,
                second,
            }) => {
                assert_eq!(part, 0);
                assert_eq!((first, second), (a, b));
            }
            other => panic!("expected disjoint-edge violation, got {other:?}"),
        }
    }
}

#[test]
fn embedded_star_spanning_cost() {
    // All pairwise distances of a raw star embedding are sqrt 2, so the
    // spanning cost is (m - 1) sqrt 2.
    for m in 3..=6usize {
        let config = embed_graph(&Graph::star(m), Scale::Raw);
        let mst = simplex_steiner::solver::mst_cost(&config.points).unwrap();
        assert!((mst - (m as f64 - 1.0) * 2.0_f64.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn scan_m4_star_is_unique_minimum() {
    let report = conjecture3_scan(4).unwrap();
    assert!(report.star_is_min);
    assert_eq!(report.entries.len(), 11);
    // The 4-simplex of side sqrt 2 is strictly best among survivors.
    assert_eq!(report.entries.iter().filter(|e| e.ties_star).count(), 0);
    for e in &report.entries {
        if let Some(c) = e.cost {
            let star = (c - report.star_cost).abs() < 1e-12;
            assert!(star || c > report.star_cost + 1e-6);
        }
        // Survivors have pairwise overlapping closed neighborhoods, which
        // forces diameter <= 2.
        if e.pruned_by.is_none() {
            assert!(e.diameter_le_2);
        }
    }
}
