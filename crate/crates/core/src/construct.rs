//! Explicit Steiner-tree constructions for regular simplices: doubling,
//! repeated doubling, closed-form trees on 2^k terminals, and the Steiner
//! ratio recursion with its limit.
//!
//! Doubling takes a full candidate-optimal tree of the regular d-simplex (in
//! basis-vector coordinates) to one of the regular 2d-simplex in four steps:
//! split every Steiner point, keep Steiner-Steiner edges, add one new
//! Steiner point per old terminal as the Fermat point of the two new
//! terminals and the split of the old neighbor, and wire those three edges.

use crate::error::{Error, Result};
use crate::geometry::{self, dist_s, Point};
use crate::solver::SteinerTree;
use crate::topology::{Node, Topology};
use crate::verify;
use serde::{Deserialize, Serialize};

/// Limit of the doubling ratio recursion: sqrt(3) / (sqrt(2) (2 sqrt(2) - 1)).
pub const RATIO_LIMIT: f64 = 0.669_835_212_361_334_6;

/// Margin below which the doubling step has no Fermat point:
/// 1/sqrt(2) * cot(60 deg) = 1/sqrt(6).
pub const FERMAT_MARGIN: f64 = 0.408_248_290_463_863_1;

/// The sequence of Steiner ratios produced by the doubling recursion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatioSequence {
    /// Starting simplex size d (the k-th entry refers to d * 2^k terminals).
    pub d0: usize,
    /// Ratios l_0 .. l_K.
    pub values: Vec<f64>,
    /// The limit constant [`RATIO_LIMIT`].
    pub limit: f64,
    /// Set when l_0 <= limit: the monotone-decrease guarantee does not apply.
    pub starts_at_or_below_limit: bool,
}

/// Validity record of a constructed tree: candidate-optimality data plus the
/// Fermat-existence margins of the construction steps.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidateValidity {
    /// Minimum included angle (degrees) over all pairs of edges at a node,
    /// per node in flat-index order.
    pub min_angle_deg: Vec<f64>,
    /// Steiner degrees in slot order (all 3 for a full tree).
    pub steiner_degrees: Vec<usize>,
    /// For each doubling step performed to build this tree, the distances
    /// `|c_i - s'_i|` per old terminal; every entry must exceed
    /// [`FERMAT_MARGIN`].
    pub fermat_margins: Vec<Vec<f64>>,
}

/// A Steiner tree meeting the necessary optimality conditions (degree-3
/// Steiner points, all included angles at least 120 degrees), together with
/// the measured validity record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidateTree {
    pub tree: SteinerTree,
    pub validity: CandidateValidity,
}

fn measure_validity(tree: &SteinerTree, margins: Vec<Vec<f64>>) -> CandidateValidity {
    let t = &tree.topology;
    let adj = t.adjacency();
    let min_angle_deg = (0..t.n_nodes())
        .map(|v| {
            let nbrs = &adj[v];
            let mut min_angle = 180.0f64;
            for i in 0..nbrs.len() {
                for j in i + 1..nbrs.len() {
                    let ang = geometry::angle_at(
                        &tree.positions[v],
                        &tree.positions[nbrs[i]],
                        &tree.positions[nbrs[j]],
                    )
                    .unwrap_or(0.0);
                    min_angle = min_angle.min(ang);
                }
            }
            min_angle
        })
        .collect();
    let steiner_degrees = (0..t.n_steiner())
        .map(|j| adj[t.index(Node::Steiner(j))].len())
        .collect();
    CandidateValidity {
        min_angle_deg,
        steiner_degrees,
        fermat_margins: margins,
    }
}

/// Checks that `t` is a full tree on the basis-vector terminals of `R^d`.
fn require_simplex_tree(t: &SteinerTree) -> Result<usize> {
    let d = t.topology.n_terminals();
    if !t.topology.is_full() {
        return Err(Error::InvalidInput("doubling needs a full topology".into()));
    }
    if t.dim() != d {
        return Err(Error::InvalidInput(format!(
            "terminals of the regular {d}-simplex must live in R^{d}, got R^{}",
            t.dim()
        )));
    }
    for i in 0..d {
        let p = t.position(Node::Terminal(i));
        let e = Point::basis(i, d);
        if dist_s(p.coords(), e.coords()) > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "terminal T{i} is not the basis vector e{i}"
            )));
        }
    }
    Ok(d)
}

fn require_candidate(t: &SteinerTree) -> Result<()> {
    let report = verify::check_candidate(t);
    if !report.all_passed() {
        return Err(Error::InvalidInput(format!(
            "input tree is not candidate-optimal: {}",
            report.first_failure().unwrap_or_default()
        )));
    }
    Ok(())
}

/// One doubling step: from a full candidate-optimal tree of the regular
/// d-simplex to a full candidate tree of the regular 2d-simplex. Old terminal
/// `e_i` (0-based `t`) pairs with new terminals `2t` and `2t+1`.
pub fn double(t: &SteinerTree) -> Result<CandidateTree> {
    let d = require_simplex_tree(t)?;
    if d < 3 {
        return Err(Error::InvalidInput("doubling needs d >= 3".into()));
    }
    require_candidate(t)?;
    let k_old = t.topology.n_steiner();
    let adj = t.topology.adjacency();

    // Step 1: split all Steiner points. Slot j keeps index j.
    let mut positions: Vec<Point> = Vec::with_capacity(4 * d - 2);
    for i in 0..2 * d {
        positions.push(Point::basis(i, 2 * d));
    }
    for j in 0..k_old {
        positions.push(geometry::split(t.position(Node::Steiner(j))));
    }

    // Step 2: Steiner-Steiner edges survive the split.
    let mut edges: Vec<(Node, Node)> = t
        .topology
        .edges()
        .iter()
        .filter(|(u, v)| matches!(u, Node::Steiner(_)) && matches!(v, Node::Steiner(_)))
        .copied()
        .collect();

    // Steps 3 and 4: one new Steiner point per old terminal, placed at the
    // Fermat point of (e_{2t}, e_{2t+1}, split of the old neighbor).
    let mut margins = Vec::with_capacity(d);
    for (old_t, nbrs) in adj.iter().enumerate().take(d) {
        let s_old = t.topology.node_at(nbrs[0]);
        let j_old = match s_old {
            Node::Steiner(j) => j,
            Node::Terminal(_) => {
                return Err(Error::InvalidTopology(
                    "terminal adjacent to a terminal in a full tree".into(),
                ))
            }
        };
        let split_nbr = positions[2 * d + j_old].clone();
        let e_a = Point::basis(2 * old_t, 2 * d);
        let e_b = Point::basis(2 * old_t + 1, 2 * d);
        let mid = geometry::split(t.position(Node::Terminal(old_t)));
        let margin = dist_s(mid.coords(), split_nbr.coords());
        margins.push(margin);
        if margin <= FERMAT_MARGIN {
            return Err(Error::ConstructionFailure {
                terminal: old_t,
                margin,
            });
        }
        let fermat = geometry::fermat_point(&e_a, &e_b, &split_nbr)?;
        debug_assert!(fermat.is_interior);
        let new_slot = k_old + old_t;
        positions.push(fermat.point);
        edges.push((Node::Terminal(2 * old_t), Node::Steiner(new_slot)));
        edges.push((Node::Terminal(2 * old_t + 1), Node::Steiner(new_slot)));
        edges.push((Node::Steiner(new_slot), Node::Steiner(j_old)));
    }

    let topology = Topology::new(2 * d, k_old + d, edges)?;
    let cost = topology
        .edges()
        .iter()
        .map(|&(u, v)| {
            dist_s(
                positions[topology.index(u)].coords(),
                positions[topology.index(v)].coords(),
            )
        })
        .sum();
    let tree = SteinerTree {
        topology,
        positions,
        cost,
        converged: true,
        residual: 0.0,
        collapsed_edges: Vec::new(),
    };
    let validity = measure_validity(&tree, vec![margins]);
    Ok(CandidateTree { tree, validity })
}

/// Applies [`double`] k times; `k = 0` validates and returns the input.
pub fn iterate_double(t: &SteinerTree, k: usize) -> Result<CandidateTree> {
    require_simplex_tree(t)?;
    require_candidate(t)?;
    let mut current = CandidateTree {
        validity: measure_validity(t, Vec::new()),
        tree: t.clone(),
    };
    for _ in 0..k {
        let mut all_margins = current.validity.fermat_margins.clone();
        let mut next = double(&current.tree)?;
        all_margins.append(&mut next.validity.fermat_margins);
        next.validity.fermat_margins = all_margins;
        current = next;
    }
    Ok(current)
}

/// Binary labels of Steiner slots on `2^k` terminals, in (length, value)
/// order: "0", "1", "00", "01", "10", "11", "000", ...
fn steiner_labels(k: usize) -> Vec<(usize, usize)> {
    let mut labels = Vec::new();
    for len in 1..k {
        for value in 0..(1usize << len) {
            labels.push((len, value));
        }
    }
    labels
}

/// Coordinate permutation sending the all-zeros Steiner label to `label`:
/// the composition of child swaps along the label's set bits. Returns the
/// permuted image of coordinate index `m` (as a k-bit value).
fn label_permutation(label: (usize, usize), k: usize, m: usize) -> usize {
    let (len, value) = label;
    let mut out = m;
    for i in 0..len {
        let bit = (value >> (len - 1 - i)) & 1;
        if bit == 1 {
            // Swap the children under prefix value[0..i]: flip bit i of
            // every coordinate label sharing that prefix.
            let prefix = value >> (len - i);
            if i == 0 || (out >> (k - i)) == prefix {
                out ^= 1 << (k - 1 - i);
            }
        }
    }
    out
}

/// The closed-form candidate tree of the regular 2^k-simplex: two full
/// binary trees joined at the roots, spine coordinates from the explicit
/// formulas, all other Steiner points by label-swap coordinate permutations.
pub fn pow2_simplex_tree(k: usize) -> Result<CandidateTree> {
    if k < 2 {
        return Err(Error::InvalidInput("pow2 construction needs k >= 2".into()));
    }
    let d = 1usize << k;
    let labels = steiner_labels(k);
    let slot_of = |len: usize, value: usize| -> usize {
        // Labels of length l start at 2^l - 2.
        (1usize << len) - 2 + value
    };

    // Spine points s_{0^j}, j = 1..k-1.
    let a = 0.5 - 0.5 / 6.0_f64.sqrt();
    let b = 0.5 / 6.0_f64.sqrt();
    let mut spine: Vec<Vec<f64>> = Vec::with_capacity(k - 1);
    let scale0 = 1.0 / (1u64 << (k - 2)) as f64;
    let mut s0 = vec![0.0; d];
    for (i, slot) in s0.iter_mut().enumerate() {
        *slot = if i < d / 2 { scale0 * a } else { scale0 * b };
    }
    spine.push(s0);
    let c = 0.5 - 0.5 / 2.0_f64.sqrt();
    for j in 2..k {
        let prev = &spine[j - 2];
        let block = 1usize << (k - j);
        let corr = 1.0 / (1u64 << (k - j - 1)) as f64;
        let mut next: Vec<f64> = prev.iter().map(|x| x / 2.0_f64.sqrt()).collect();
        for slot in next.iter_mut().take(block) {
            *slot += corr * c;
        }
        spine.push(next);
    }

    // Positions: terminals are basis vectors indexed by their binary labels;
    // Steiner slot (len, value) is the label permutation applied to the
    // spine point of the same length.
    let mut positions: Vec<Point> = (0..d).map(|i| Point::basis(i, d)).collect();
    for &(len, value) in &labels {
        let base = &spine[len - 1];
        let mut coords = vec![0.0; d];
        for (m, &x) in base.iter().enumerate() {
            coords[label_permutation((len, value), k, m)] = x;
        }
        positions.push(Point::new(coords));
    }

    // Topology: s_b - s_b0 / s_b1 (or terminals at depth k-1), plus the root
    // edge s_0 - s_1.
    let mut edges = Vec::new();
    edges.push((Node::Steiner(0), Node::Steiner(1)));
    for &(len, value) in &labels {
        let parent = Node::Steiner(slot_of(len, value));
        for bit in 0..2usize {
            let child_value = (value << 1) | bit;
            if len + 1 < k {
                edges.push((parent, Node::Steiner(slot_of(len + 1, child_value))));
            } else {
                edges.push((parent, Node::Terminal(child_value)));
            }
        }
    }
    let topology = Topology::new(d, d - 2, edges)?;
    let cost = topology
        .edges()
        .iter()
        .map(|&(u, v)| {
            dist_s(
                positions[topology.index(u)].coords(),
                positions[topology.index(v)].coords(),
            )
        })
        .sum();
    let tree = SteinerTree {
        topology,
        positions,
        cost,
        converged: true,
        residual: 0.0,
        collapsed_edges: Vec::new(),
    };
    let validity = measure_validity(&tree, Vec::new());
    Ok(CandidateTree { tree, validity })
}

/// The ratio recursion: from l_0 for the regular d-simplex, the ratio after
/// each doubling is
/// `l_{k+1} = (l_k (d 2^k - 1) - d 2^k / sqrt(6) + d 2^(k+1) sqrt(2/3))
///            / ((d 2^(k+1) - 1) sqrt(2))`.
pub fn ratio_sequence(l0: f64, d: usize, steps: usize) -> Result<RatioSequence> {
    if d < 3 {
        return Err(Error::InvalidInput("ratio recursion needs d >= 3".into()));
    }
    if !(l0 > 0.0 && l0 <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "l0 must lie in (0, 1], got {l0}"
        )));
    }
    if steps < 1 {
        return Err(Error::InvalidInput("need at least one step".into()));
    }
    let mut values = Vec::with_capacity(steps + 1);
    values.push(l0);
    for k in 0..steps {
        let m = d as f64 * (1u64 << k) as f64;
        let l = values[k];
        let next = (l * (m - 1.0) - m / 6.0_f64.sqrt() + 2.0 * m * (2.0_f64 / 3.0).sqrt())
            / ((2.0 * m - 1.0) * 2.0_f64.sqrt());
        values.push(next);
    }
    Ok(RatioSequence {
        d0: d,
        values,
        limit: RATIO_LIMIT,
        starts_at_or_below_limit: l0 <= RATIO_LIMIT,
    })
}
