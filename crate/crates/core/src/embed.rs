//! Graph-to-point-configuration embeddings and the vertex-cover reduction
//! harness.
//!
//! An edge `(i, j)` embeds as `scale * (e_i + e_j)`. At scale 1 the edges
//! incident to one vertex embed as a regular simplex of side sqrt(2); at
//! scale 1/sqrt(2) the whole configuration is the vertex set of a regular
//! unit simplicial complex, the instance family of the reduction.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::solver::{self, SolveOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Default cap on the edge count for the exhaustive graph scan.
pub const DEFAULT_SCAN_CAP: usize = 6;

/// A simple undirected graph by edge list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n_vertices: usize,
    /// Normalized: each pair ordered, list sorted, no duplicates or loops.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Graph> {
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(Error::NotSimple(format!("loop at vertex {u}")));
            }
            if u >= n_vertices || v >= n_vertices {
                return Err(Error::NotSimple(format!(
                    "edge ({u}, {v}) out of range for {n_vertices} vertices"
                )));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if norm.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotSimple("duplicate edge".into()));
        }
        Ok(Graph {
            n_vertices,
            edges: norm,
        })
    }

    /// The star with `m` edges: vertex 0 joined to 1..m.
    pub fn star(m: usize) -> Graph {
        Graph::new(m + 1, (1..=m).map(|v| (0, v)).collect()).unwrap()
    }

    /// The cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)).collect()).unwrap()
    }

    /// The path on `n >= 2` vertices (n - 1 edges).
    pub fn path(n: usize) -> Graph {
        Graph::new(n, (0..n - 1).map(|v| (v, v + 1)).collect()).unwrap()
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn closed_neighborhood(&self, v: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::from([v]);
        for &(a, b) in &self.edges {
            if a == v {
                out.insert(b);
            }
            if b == v {
                out.insert(a);
            }
        }
        out
    }

    /// Some pair of vertices with disjoint closed neighborhoods, if any.
    pub fn disjoint_closed_neighborhood_pair(&self) -> Option<(usize, usize)> {
        let hoods: Vec<BTreeSet<usize>> = (0..self.n_vertices)
            .map(|v| self.closed_neighborhood(v))
            .collect();
        for i in 0..self.n_vertices {
            for j in i + 1..self.n_vertices {
                if hoods[i].is_disjoint(&hoods[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn find_triangle(&self) -> Option<(usize, usize, usize)> {
        let adj = self.adjacency();
        for &(u, v) in &self.edges {
            for &w in &adj[u] {
                if w != v && adj[v].contains(&w) {
                    let mut t = [u, v, w];
                    t.sort_unstable();
                    return Some((t[0], t[1], t[2]));
                }
            }
        }
        None
    }

    pub fn is_triangle_free(&self) -> bool {
        self.find_triangle().is_none()
    }

    /// True iff the graph is connected with all pairwise hop distances <= 2.
    /// Vacuously true on fewer than 2 vertices.
    pub fn diameter_le_2(&self) -> bool {
        let adj = self.adjacency();
        for s in 0..self.n_vertices {
            let mut dist = vec![usize::MAX; self.n_vertices];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if dist.iter().any(|&d| d > 2) {
                return false;
            }
        }
        true
    }

    /// Contraction of `j` into `i` for a pair with disjoint closed
    /// neighborhoods: every edge `(j, k)` becomes `(i, k)`; `j` ends up
    /// isolated. No edges are lost or duplicated.
    pub fn contract(&self, i: usize, j: usize) -> Result<Graph> {
        self.require_disjoint_closed_neighborhoods(i, j)?;
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let m = |x: usize| if x == j { i } else { x };
                (m(u), m(v))
            })
            .collect();
        Graph::new(self.n_vertices, edges)
    }

    fn require_disjoint_closed_neighborhoods(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.n_vertices || j >= self.n_vertices {
            return Err(Error::InvalidInput(format!(
                "vertex pair ({i}, {j}) out of range"
            )));
        }
        if i == j
            || !self
                .closed_neighborhood(i)
                .is_disjoint(&self.closed_neighborhood(j))
        {
            return Err(Error::OverlappingNeighborhoods(i, j));
        }
        Ok(())
    }

    /// One `u v` pair per line, 0-indexed; `#` starts a comment. The vertex
    /// count is one past the largest index seen.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut max_v = 0usize;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let u: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line `{line}`")))?;
            let v: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line `{line}`")))?;
            max_v = max_v.max(u).max(v);
            edges.push((u, v));
        }
        if edges.is_empty() {
            return Err(Error::Parse("empty edge list".into()));
        }
        Graph::new(max_v + 1, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Canonical isomorphism key: per connected component, the minimum
    /// adjacency bitstring over all vertex orderings; the graph key is the
    /// sorted multiset of component keys plus the isolated-vertex count.
    ///
    /// Brute force over component orderings: meant for the small graphs of
    /// the scans (components of an m-edge graph have at most m + 1
    /// vertices). Panics past 11 vertices per component.
    pub fn canonical_key(&self) -> String {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n_vertices];
        let mut component_keys = Vec::new();
        let mut isolated = 0usize;
        for s in 0..self.n_vertices {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            if comp.len() == 1 {
                isolated += 1;
                continue;
            }
            component_keys.push(component_canonical(&comp, &adj));
        }
        component_keys.sort();
        format!(
            "i{isolated}|{}",
            component_keys
                .iter()
                .map(|(n, bits)| format!("{n}:{bits:x}"))
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Minimum upper-triangle adjacency bitstring of one component over all
/// orderings of its vertices. Component sizes here stay small (at most
/// edges + 1), so brute force over permutations is fine.
fn component_canonical(comp: &[usize], adj: &[Vec<usize>]) -> (usize, u64) {
    let n = comp.len();
    assert!(n * (n - 1) / 2 <= 64, "component too large to canonicalize");
    let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut local_adj = vec![vec![false; n]; n];
    for (&v, &lv) in &local {
        for &w in &adj[v] {
            if let Some(&lw) = local.get(&w) {
                local_adj[lv][lw] = true;
            }
        }
    }
    let mut best = u64::MAX;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut bits = 0u64;
        let mut bit = 0;
        for a in 0..n {
            for b in a + 1..n {
                if local_adj[p[a]][p[b]] {
                    bits |= 1 << bit;
                }
                bit += 1;
            }
        }
        if bits < best {
            best = bits;
        }
    });
    (n, best)
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Embedding scale: raw characteristic vectors, or 1/sqrt(2) for unit
/// simplicial complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Raw,
    Unit,
}

impl Scale {
    pub fn factor(self) -> f64 {
        match self {
            Scale::Raw => 1.0,
            Scale::Unit => 1.0 / 2.0_f64.sqrt(),
        }
    }
}

/// One embedded point per edge, in edge order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddedConfig {
    pub points: Vec<Point>,
    pub scale: Scale,
    pub source: Graph,
}

/// Embeds every edge `(i, j)` as `scale * (e_i + e_j)` in `R^(n_vertices)`.
pub fn embed_graph(g: &Graph, scale: Scale) -> EmbeddedConfig {
    let f = scale.factor();
    let points = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let mut coords = vec![0.0; g.n_vertices()];
            coords[u] = f;
            coords[v] = f;
            Point::new(coords)
        })
        .collect();
    EmbeddedConfig {
        points,
        scale,
        source: g.clone(),
    }
}

/// Result of the max/zero contraction map applied to an embedded
/// configuration plus any further tree points.
#[derive(Clone, Debug)]
pub struct ContractOutcome {
    pub embedded: Vec<Point>,
    pub tree_points: Vec<Point>,
    pub contracted_graph: Graph,
}

/// For vertices `i`, `j` with disjoint closed neighborhoods: sets every
/// point's `i`-th coordinate to `max(x_i, x_j)` and its `j`-th coordinate to
/// 0. Embedded edges incident to `j` become the (distinct) embeddings of the
/// corresponding edges incident to `i`; all other embedded edges are fixed.
pub fn contract_pair(
    config: &EmbeddedConfig,
    tree_points: &[Point],
    i: usize,
    j: usize,
) -> Result<ContractOutcome> {
    let contracted_graph = config.source.contract(i, j)?;
    let map = |p: &Point| -> Point {
        let mut coords = p.coords().to_vec();
        coords[i] = coords[i].max(coords[j]);
        coords[j] = 0.0;
        Point::new(coords)
    };
    Ok(ContractOutcome {
        embedded: config.points.iter().map(map).collect(),
        tree_points: tree_points.iter().map(map).collect(),
        contracted_graph,
    })
}

/// Per-graph outcome in a [`conjecture3_scan`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanEntry {
    pub graph: Graph,
    /// Connected with all hop distances at most 2 (reported filter only).
    pub diameter_le_2: bool,
    /// Pair witnessing the disjoint-closed-neighborhood prune, if pruned.
    pub pruned_by: Option<(usize, usize)>,
    /// Exact optimal Steiner cost of the embedding (survivors only).
    pub cost: Option<f64>,
    /// Cost ties the star embedding within 1e-9.
    pub ties_star: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub m: usize,
    /// Exact optimal cost of the star embedding (the regular m-simplex of
    /// side sqrt 2).
    pub star_cost: f64,
    /// True iff no surviving graph beat the star.
    pub star_is_min: bool,
    pub entries: Vec<ScanEntry>,
}

/// Every graph with exactly `m` edges and no isolated vertices, up to
/// isomorphism, grown edge by edge with canonical-key deduplication.
pub fn enumerate_graphs_with_edges(m: usize) -> Vec<Graph> {
    assert!(m >= 1);
    let mut level: BTreeMap<String, Graph> = BTreeMap::new();
    let single = Graph::new(2, vec![(0, 1)]).unwrap();
    level.insert(single.canonical_key(), single);
    for _ in 1..m {
        let mut next: BTreeMap<String, Graph> = BTreeMap::new();
        for g in level.values() {
            let n = g.n_vertices();
            let mut candidates: Vec<(usize, (usize, usize))> = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if !g.edges().contains(&(u, v)) {
                        candidates.push((n, (u, v)));
                    }
                }
                candidates.push((n + 1, (u, n)));
            }
            candidates.push((n + 2, (n, n + 1)));
            for (nv, e) in candidates {
                let mut edges = g.edges().to_vec();
                edges.push(e);
                let h = Graph::new(nv, edges).unwrap();
                next.entry(h.canonical_key()).or_insert(h);
            }
        }
        level = next;
    }
    level.into_values().collect()
}

/// Exhaustive check of the star-minimality statement at edge count `m`:
/// enumerates all m-edge graphs without isolated vertices up to isomorphism,
/// prunes those with a disjoint-closed-neighborhood pair (such a graph is
/// strictly beaten by some overlapping-neighborhood graph), solves the
/// survivors exactly, and compares everything against the star embedding.
pub fn conjecture3_scan(m: usize) -> Result<ScanReport> {
    conjecture3_scan_capped(m, DEFAULT_SCAN_CAP, &SolveOptions::default())
}

pub fn conjecture3_scan_capped(m: usize, cap: usize, opts: &SolveOptions) -> Result<ScanReport> {
    if m < 3 {
        return Err(Error::InvalidInput(format!(
            "scan needs at least 3 edges, got {m}"
        )));
    }
    if m > cap {
        return Err(Error::SizeCap { n: m, cap });
    }
    let graphs = enumerate_graphs_with_edges(m);
    let star_key = Graph::star(m).canonical_key();
    let entries: Vec<ScanEntry> = graphs
        .par_iter()
        .map(|g| {
            let pruned_by = g.disjoint_closed_neighborhood_pair();
            let cost = if pruned_by.is_none() {
                let config = embed_graph(g, Scale::Raw);
                let report = solver::optimal_steiner_tree_with(&config.points, m.max(3), opts)?;
                Some(report.best.cost)
            } else {
                None
            };
            Ok(ScanEntry {
                diameter_le_2: g.diameter_le_2(),
                pruned_by,
                cost,
                ties_star: false,
                graph: g.clone(),
            })
        })
        .collect::<Result<_>>()?;
    let mut entries = entries;
    let star_cost = entries
        .iter()
        .find(|e| e.graph.canonical_key() == star_key)
        .and_then(|e| e.cost)
        .ok_or_else(|| Error::InvalidInput("star graph missing from enumeration".into()))?;
    let mut star_is_min = true;
    for e in entries.iter_mut() {
        if let Some(c) = e.cost {
            if c < star_cost - solver::TIE_EPS {
                star_is_min = false;
            }
            e.ties_star =
                (c - star_cost).abs() <= solver::TIE_EPS && e.graph.canonical_key() != star_key;
        }
    }
    Ok(ScanReport {
        m,
        star_cost,
        star_is_min,
        entries,
    })
}

/// A scale-1/sqrt(2) embedding of a triangle-free graph: the vertex set of a
/// regular unit simplicial complex, the terminal set of the reduction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReductionInstance {
    pub config: EmbeddedConfig,
    pub m: usize,
}

/// Builds the reduction instance for a simple triangle-free graph; rejects
/// with the violating triple otherwise.
pub fn make_reduction_instance(g: &Graph) -> Result<ReductionInstance> {
    if let Some((a, b, c)) = g.find_triangle() {
        return Err(Error::TriangleFound(a, b, c));
    }
    Ok(ReductionInstance {
        config: embed_graph(g, Scale::Unit),
        m: g.n_edges(),
    })
}

/// Why a part of a partition fails to be the vertex set of one unit simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartitionViolation {
    /// Two edges in the part are vertex-disjoint: their embeddings are at
    /// distance sqrt(2), not 1.
    DisjointEdges {
        part: usize,
        first: usize,
        second: usize,
    },
    /// Pairwise intersecting but no common vertex: a triangle, impossible
    /// for a triangle-free source.
    NoCommonVertex {
        part: usize,
        triple: (usize, usize, usize),
    },
}

/// Outcome of validating a partition of the instance's points.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum PartitionCheck {
    /// Every part is a unit simplex; the common vertices form a vertex
    /// cover of the source graph.
    Cover(BTreeSet<usize>),
    Violation(PartitionViolation),
}

/// Validates that every part's edges pairwise intersect and share a common
/// vertex, returning the induced vertex cover, or the offending part and
/// edge pair/triple.
pub fn partition_to_cover(
    instance: &ReductionInstance,
    partition: &[Vec<usize>],
) -> Result<PartitionCheck> {
    let m = instance.m;
    let mut seen = vec![false; m];
    for (pi, part) in partition.iter().enumerate() {
        if part.is_empty() {
            return Err(Error::MalformedPartition(format!("part {pi} is empty")));
        }
        for &e in part {
            if e >= m {
                return Err(Error::MalformedPartition(format!(
                    "point index {e} out of range"
                )));
            }
            if seen[e] {
                return Err(Error::MalformedPartition(format!(
                    "point index {e} appears twice"
                )));
            }
            seen[e] = true;
        }
    }
    if !seen.iter().all(|&s| s) {
        let missing = seen.iter().position(|&s| !s).unwrap();
        return Err(Error::MalformedPartition(format!(
            "point index {missing} is not covered"
        )));
    }

    let edges = instance.config.source.edges();
    let as_set = |e: usize| -> BTreeSet<usize> {
        let (u, v) = edges[e];
        BTreeSet::from([u, v])
    };
    let mut cover = BTreeSet::new();
    for (pi, part) in partition.iter().enumerate() {
        // Pairwise intersection first: vertex-disjoint edges embed at
        // distance sqrt(2), never 1, so they cannot share a unit simplex.
        for a in 0..part.len() {
            for b in a + 1..part.len() {
                if as_set(part[a]).is_disjoint(&as_set(part[b])) {
                    return Ok(PartitionCheck::Violation(
                        PartitionViolation::DisjointEdges {
                            part: pi,
                            first: part[a],
                            second: part[b],
                        },
                    ));
                }
            }
        }
        let mut common = as_set(part[0]);
        for &e in &part[1..] {
            common = common.intersection(&as_set(e)).copied().collect();
        }
        match common.iter().next() {
            Some(&v) => {
                cover.insert(v);
            }
            None => {
                // Pairwise intersecting without a common vertex needs three
                // mutually touching edges: a triangle witness.
                let triple = find_no_common_triple(part, edges);
                return Ok(PartitionCheck::Violation(
                    PartitionViolation::NoCommonVertex { part: pi, triple },
                ));
            }
        }
    }
    Ok(PartitionCheck::Cover(cover))
}

fn find_no_common_triple(part: &[usize], edges: &[(usize, usize)]) -> (usize, usize, usize) {
    let as_set = |e: usize| -> BTreeSet<usize> {
        let (u, v) = edges[e];
        BTreeSet::from([u, v])
    };
    for a in 0..part.len() {
        for b in a + 1..part.len() {
            for c in b + 1..part.len() {
                let common: BTreeSet<usize> = as_set(part[a])
                    .intersection(&as_set(part[b]))
                    .copied()
                    .collect::<BTreeSet<_>>()
                    .intersection(&as_set(part[c]))
                    .copied()
                    .collect();
                if common.is_empty() {
                    return (part[a], part[b], part[c]);
                }
            }
        }
    }
    unreachable!("empty total intersection implies an empty triple intersection")
}

/// Assigns every edge to its lowest-index covering vertex; the parts are
/// unit simplices and there are at most `|cover|` of them.
pub fn cover_to_partition(
    instance: &ReductionInstance,
    cover: &BTreeSet<usize>,
) -> Result<Vec<Vec<usize>>> {
    let edges = instance.config.source.edges();
    let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (idx, &(u, v)) in edges.iter().enumerate() {
        let owner = if cover.contains(&u) {
            u
        } else if cover.contains(&v) {
            v
        } else {
            return Err(Error::NotACover(u, v));
        };
        parts.entry(owner).or_default().push(idx);
    }
    Ok(parts.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist_s;
    use approx::assert_relative_eq;

    fn d(config: &EmbeddedConfig, a: usize, b: usize) -> f64 {
        dist_s(config.points[a].coords(), config.points[b].coords())
    }

    #[test]
    fn embedding_distances() {
        let star = embed_graph(&Graph::star(3), Scale::Raw);
        for a in 0..3 {
            for b in a + 1..3 {
                assert_relative_eq!(d(&star, a, b), 2.0_f64.sqrt(), max_relative = 1e-15);
            }
        }
        let triangle = embed_graph(&Graph::cycle(3), Scale::Raw);
        for a in 0..3 {
            for b in a + 1..3 {
                assert_relative_eq!(d(&triangle, a, b), 2.0_f64.sqrt(), max_relative = 1e-15);
            }
        }
        let path = embed_graph(&Graph::path(4), Scale::Raw);
        assert_relative_eq!(d(&path, 0, 1), 2.0_f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(d(&path, 1, 2), 2.0_f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(d(&path, 0, 2), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn unit_scale_distances_are_one_or_sqrt2() {
        let c5 = embed_graph(&Graph::cycle(5), Scale::Unit);
        for a in 0..5 {
            for b in a + 1..5 {
                let share = {
                    let (u1, v1) = c5.source.edges()[a];
                    let (u2, v2) = c5.source.edges()[b];
                    u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2
                };
                let expected = if share { 1.0 } else { 2.0_f64.sqrt() };
                assert_relative_eq!(d(&c5, a, b), expected, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn graph_validation() {
        assert!(matches!(
            Graph::new(3, vec![(0, 0)]),
            Err(Error::NotSimple(_))
        ));
        assert!(matches!(
            Graph::new(3, vec![(0, 1), (1, 0)]),
            Err(Error::NotSimple(_))
        ));
    }

    #[test]
    fn contraction_rules() {
        // P4: ends 0 and 3 have disjoint closed neighborhoods.
        let g = Graph::path(4);
        let config = embed_graph(&g, Scale::Raw);
        let extra = vec![Point::new(vec![0.3, 0.1, 0.2, 0.5])];
        let out = contract_pair(&config, &extra, 0, 3).unwrap();
        // max/zero rule on the extra point: x_0 = max(0.3, 0.5), x_3 = 0.
        assert_eq!(out.tree_points[0].coords(), &[0.5, 0.1, 0.2, 0.0]);
        // Edge (2,3) maps to the embedding of (0,2).
        let mapped = &out.embedded[2];
        assert_eq!(mapped.coords(), &[1.0, 0.0, 1.0, 0.0]);
        // Edge (0,1) is fixed.
        assert_eq!(out.embedded[0].coords(), &[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(out.contracted_graph.n_edges(), 3);

        // Adjacent or near vertices are rejected.
        assert!(matches!(
            contract_pair(&config, &[], 0, 1),
            Err(Error::OverlappingNeighborhoods(0, 1))
        ));
        assert!(matches!(
            contract_pair(&config, &[], 0, 2),
            Err(Error::OverlappingNeighborhoods(0, 2))
        ));
    }

    #[test]
    fn graph_enumeration_counts() {
        // Hand-checkable: the 3-edge graphs without isolated vertices are
        // the triangle, the 3-star, the 3-path, the path-plus-edge and the
        // perfect matching.
        let got = enumerate_graphs_with_edges(3);
        assert_eq!(got.len(), 5);
        let keys: BTreeSet<String> = got.iter().map(Graph::canonical_key).collect();
        let expected = [
            Graph::cycle(3),
            Graph::star(3),
            Graph::path(4),
            Graph::new(5, vec![(0, 1), (1, 2), (3, 4)]).unwrap(),
            Graph::new(6, vec![(0, 1), (2, 3), (4, 5)]).unwrap(),
        ];
        let expected_keys: BTreeSet<String> = expected.iter().map(Graph::canonical_key).collect();
        assert_eq!(keys, expected_keys);
        assert_eq!(enumerate_graphs_with_edges(1).len(), 1);
        assert_eq!(enumerate_graphs_with_edges(2).len(), 2);
    }

    /// Independent oracle: enumerate every edge subset of size m on up to
    /// 2m vertices directly and deduplicate.
    #[test]
    fn graph_enumeration_matches_subset_oracle() {
        for m in 1..=4usize {
            let nmax = 2 * m;
            let mut pairs = Vec::new();
            for u in 0..nmax {
                for v in u + 1..nmax {
                    pairs.push((u, v));
                }
            }
            let mut keys = BTreeSet::new();
            let mut chosen = Vec::new();
            fn rec(
                pairs: &[(usize, usize)],
                start: usize,
                left: usize,
                chosen: &mut Vec<(usize, usize)>,
                keys: &mut BTreeSet<String>,
                nmax: usize,
            ) {
                if left == 0 {
                    // Skip graphs with isolated vertices after compaction:
                    // compact so every vertex is incident to an edge.
                    let used: BTreeSet<usize> = chosen.iter().flat_map(|&(u, v)| [u, v]).collect();
                    let relabel: HashMap<usize, usize> =
                        used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                    let edges: Vec<(usize, usize)> = chosen
                        .iter()
                        .map(|&(u, v)| (relabel[&u], relabel[&v]))
                        .collect();
                    let g = Graph::new(used.len(), edges).unwrap();
                    keys.insert(g.canonical_key());
                    return;
                }
                if start >= pairs.len() {
                    return;
                }
                let _ = nmax;
                for i in start..pairs.len() {
                    chosen.push(pairs[i]);
                    rec(pairs, i + 1, left - 1, chosen, keys, nmax);
                    chosen.pop();
                }
            }
            rec(&pairs, 0, m, &mut chosen, &mut keys, nmax);
            let grown: BTreeSet<String> = enumerate_graphs_with_edges(m)
                .iter()
                .map(Graph::canonical_key)
                .collect();
            assert_eq!(grown, keys, "m = {m}");
        }
    }

    #[test]
    fn canonical_key_invariance() {
        let a = Graph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = Graph::new(4, vec![(3, 2), (2, 1), (1, 0)]).unwrap();
        let c = Graph::new(4, vec![(2, 0), (0, 3), (3, 1)]).unwrap(); // relabeled path
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert_eq!(a.canonical_key(), c.canonical_key());
        assert_ne!(a.canonical_key(), Graph::star(3).canonical_key());
    }

    #[test]
    fn scan_m3_star_ties_triangle() {
        let report = conjecture3_scan(3).unwrap();
        assert!(report.star_is_min);
        assert_relative_eq!(report.star_cost, 6.0_f64.sqrt(), epsilon = 1e-9);
        assert_eq!(report.entries.len(), 5);
        let solved: Vec<&ScanEntry> = report.entries.iter().filter(|e| e.cost.is_some()).collect();
        // Only the star and the triangle survive the prune, and they tie.
        assert_eq!(solved.len(), 2);
        assert_eq!(report.entries.iter().filter(|e| e.ties_star).count(), 1);
        for e in &report.entries {
            if e.cost.is_none() {
                assert!(e.pruned_by.is_some());
            }
        }
    }

    #[test]
    fn reduction_instance_examples() {
        // K_{1,4}: all edges share the center; 4 points at pairwise unit
        // distance.
        let inst = make_reduction_instance(&Graph::star(4)).unwrap();
        for a in 0..4 {
            for b in a + 1..4 {
                assert_relative_eq!(d(&inst.config, a, b), 1.0, max_relative = 1e-15);
            }
        }
        // C5 is triangle-free; C3 is rejected with the violating triple.
        assert!(make_reduction_instance(&Graph::cycle(5)).is_ok());
        assert!(matches!(
            make_reduction_instance(&Graph::cycle(3)),
            Err(Error::TriangleFound(0, 1, 2))
        ));
    }

    #[test]
    fn partition_validation_and_cover() {
        let star = make_reduction_instance(&Graph::star(4)).unwrap();
        let check = partition_to_cover(&star, &[vec![0, 1, 2, 3]]).unwrap();
        match check {
            PartitionCheck::Cover(cover) => assert_eq!(cover, BTreeSet::from([0])),
            PartitionCheck::Violation(v) => panic!("unexpected violation {v:?}"),
        }

        let c5 = make_reduction_instance(&Graph::cycle(5)).unwrap();
        // Edges of C5 in normalized order: (0,1), (0,4), (1,2), (2,3), (3,4).
        let check = partition_to_cover(&c5, &[vec![0, 2], vec![3, 4], vec![1]]).unwrap();
        match check {
            PartitionCheck::Cover(cover) => assert_eq!(cover.len(), 3),
            PartitionCheck::Violation(v) => panic!("unexpected violation {v:?}"),
        }

        // A part with two disjoint edges is a unit-distance violation.
        let check = partition_to_cover(&c5, &[vec![0, 3], vec![1, 2], vec![4]]).unwrap();
        assert_eq!(
            check_violation(check),
            PartitionViolation::DisjointEdges {
                part: 0,
                first: 0,
                second: 3
            }
        );

        // Malformed partitions are rejected outright.
        assert!(partition_to_cover(&c5, &[vec![0, 1]]).is_err());
        assert!(partition_to_cover(&c5, &[vec![0, 0, 1, 2, 3, 4]]).is_err());
    }

    fn check_violation(check: PartitionCheck) -> PartitionViolation {
        match check {
            PartitionCheck::Violation(v) => v,
            PartitionCheck::Cover(c) => panic!("expected violation, got cover {c:?}"),
        }
    }

    #[test]
    fn cover_round_trip() {
        let star = make_reduction_instance(&Graph::star(4)).unwrap();
        let parts = cover_to_partition(&star, &BTreeSet::from([0])).unwrap();
        assert_eq!(parts, vec![vec![0, 1, 2, 3]]);

        let c5 = make_reduction_instance(&Graph::cycle(5)).unwrap();
        let parts = cover_to_partition(&c5, &BTreeSet::from([0, 2, 4])).unwrap();
        assert_eq!(parts.len(), 3);
        match partition_to_cover(&c5, &parts).unwrap() {
            PartitionCheck::Cover(cover) => assert!(cover.len() <= 3),
            PartitionCheck::Violation(v) => panic!("round trip broke: {v:?}"),
        }

        // Missing coverage is rejected with the uncovered edge.
        assert!(matches!(
            cover_to_partition(&c5, &BTreeSet::from([0, 2])),
            Err(Error::NotACover(3, 4))
        ));
    }
}
