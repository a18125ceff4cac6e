//! The relatively minimal tree for a fixed topology and exact optimal
//! Steiner trees for small terminal sets.
//!
//! The fixed-topology objective (sum of edge lengths with terminals pinned)
//! is convex; the solver runs cyclic "Fermat sweeps", replacing each Steiner
//! node by the exact minimizer over its own position given its three
//! neighbors. If a sweep stalls short of the first-order condition, the
//! objective is temporarily smoothed (`len -> sqrt(len^2 + eps^2)`, eps
//! decreasing from 1e-3 to 1e-12) and attacked with reweighted averaging
//! sweeps before the exact sweeps resume.

use crate::error::{Error, Result};
use crate::geometry::{self, dist_s, Point};
use crate::topology::{enumerate_full_topologies_capped, Node, Topology};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default relative cost-change threshold per sweep.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default sweep cap.
pub const DEFAULT_MAX_SWEEPS: usize = 100_000;
/// Default terminal-count cap for exhaustive search.
pub const DEFAULT_SOLVER_CAP: usize = 9;
/// Steiner-Steiner edges shorter than this are flagged as collapsed.
pub const COLLAPSE_EPS: f64 = 1e-9;
/// Costs within this of the best are reported as ties.
pub const TIE_EPS: f64 = 1e-9;

/// A topology with concrete coordinates for every node.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SteinerTree {
    pub topology: Topology,
    /// Node positions in flat-index order: terminals first, then Steiner.
    pub positions: Vec<Point>,
    /// Sum of edge lengths.
    pub cost: f64,
    /// True when the relative cost improvement per sweep dropped below the
    /// requested tolerance within the sweep cap.
    pub converged: bool,
    /// Last observed relative cost change.
    pub residual: f64,
    /// Steiner-Steiner edges of length below [`COLLAPSE_EPS`] (degenerate
    /// optimum for this topology); the reported cost is still correct.
    pub collapsed_edges: Vec<(Node, Node)>,
}

impl SteinerTree {
    pub fn position(&self, node: Node) -> &Point {
        &self.positions[self.topology.index(node)]
    }

    /// Recomputes the sum of edge lengths from the stored positions.
    pub fn recompute_cost(&self) -> f64 {
        self.topology
            .edges()
            .iter()
            .map(|&(u, v)| {
                dist_s(
                    self.positions[self.topology.index(u)].coords(),
                    self.positions[self.topology.index(v)].coords(),
                )
            })
            .sum()
    }

    pub fn dim(&self) -> usize {
        self.positions[0].dim()
    }
}

/// Result of an exhaustive search over full topologies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub best: SteinerTree,
    /// Cost per topology id (the id is the index into the deterministic
    /// order of [`enumerate_full_topologies_capped`]).
    pub all_costs: Vec<f64>,
    /// Topology ids whose cost is within [`TIE_EPS`] of the minimum.
    pub ties: Vec<usize>,
}

/// How Steiner nodes are initialized.
#[derive(Clone, Debug)]
pub enum Init {
    /// Centroid of the terminals plus a deterministic jitter of magnitude
    /// 1e-6 indexed by the Steiner slot.
    CentroidJitter,
    /// Explicit starting positions (one per Steiner slot).
    Explicit(Vec<Point>),
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_sweeps: usize,
    pub init: Init,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: DEFAULT_TOL,
            max_sweeps: DEFAULT_MAX_SWEEPS,
            init: Init::CentroidJitter,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Deterministic jitter component in [-1, 1).
fn jitter(slot: u64, coord: u64) -> f64 {
    let h = splitmix64(slot.wrapping_mul(0x1000_0000_0001).wrapping_add(coord));
    (h >> 11) as f64 / (1u64 << 52) as f64 * 2.0 - 1.0
}

/// The unique minimum-cost Steiner tree with topology `t` and the given
/// terminal positions. Steiner-Steiner edges may collapse to zero length;
/// they are flagged, not forbidden.
pub fn relatively_minimal(terminals: &[Point], t: &Topology, tol: f64) -> Result<SteinerTree> {
    relatively_minimal_with(
        terminals,
        t,
        &SolveOptions {
            tol,
            ..SolveOptions::default()
        },
    )
}

pub fn relatively_minimal_with(
    terminals: &[Point],
    t: &Topology,
    opts: &SolveOptions,
) -> Result<SteinerTree> {
    let (tree, _) = solve_fixed_topology(terminals, t, opts, false)?;
    Ok(tree)
}

/// As [`relatively_minimal_with`], also returning the per-sweep cost history.
pub fn relatively_minimal_traced(
    terminals: &[Point],
    t: &Topology,
    opts: &SolveOptions,
) -> Result<(SteinerTree, Vec<f64>)> {
    solve_fixed_topology(terminals, t, opts, true)
}

fn solve_fixed_topology(
    terminals: &[Point],
    t: &Topology,
    opts: &SolveOptions,
    trace: bool,
) -> Result<(SteinerTree, Vec<f64>)> {
    if terminals.len() != t.n_terminals() {
        return Err(Error::InvalidInput(format!(
            "{} terminal positions for a topology on {} terminals",
            terminals.len(),
            t.n_terminals()
        )));
    }
    if !opts.tol.is_finite() || opts.tol <= 0.0 {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let dim = terminals[0].dim();
    for p in terminals {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch(dim, p.dim()));
        }
    }
    let n = t.n_terminals();
    let k = t.n_steiner();
    let adj = t.adjacency();
    // Every Steiner slot must have exactly three neighbors for the sweep.
    for (i, nbrs) in adj.iter().enumerate().skip(n) {
        if nbrs.len() != 3 {
            return Err(Error::InvalidTopology(format!(
                "Steiner slot S{} has degree {}, expected 3",
                i - n,
                nbrs.len()
            )));
        }
    }
    let steiner_nbrs: Vec<[usize; 3]> = (n..n + k)
        .map(|i| [adj[i][0], adj[i][1], adj[i][2]])
        .collect();
    let edge_idx: Vec<(usize, usize)> = t
        .edges()
        .iter()
        .map(|&(u, v)| (t.index(u), t.index(v)))
        .collect();

    // Flat positions, terminals pinned.
    let mut pos = vec![0.0f64; (n + k) * dim];
    for (i, p) in terminals.iter().enumerate() {
        pos[i * dim..(i + 1) * dim].copy_from_slice(p.coords());
    }
    match &opts.init {
        Init::CentroidJitter => {
            let c = geometry::centroid(terminals);
            for j in 0..k {
                let base = (n + j) * dim;
                let mut v: Vec<f64> = (0..dim).map(|ci| jitter(j as u64, ci as u64)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                for x in v.iter_mut() {
                    *x *= 1e-6 / norm.max(1e-300);
                }
                for ci in 0..dim {
                    pos[base + ci] = c[ci] + v[ci];
                }
            }
        }
        Init::Explicit(points) => {
            if points.len() != k {
                return Err(Error::InvalidInput(format!(
                    "{} initial Steiner positions for {} slots",
                    points.len(),
                    k
                )));
            }
            for (j, p) in points.iter().enumerate() {
                if p.dim() != dim {
                    return Err(Error::DimensionMismatch(dim, p.dim()));
                }
                pos[(n + j) * dim..(n + j + 1) * dim].copy_from_slice(p.coords());
            }
        }
    }

    let cost_of = |pos: &[f64]| -> f64 {
        edge_idx
            .iter()
            .map(|&(u, v)| dist_s(&pos[u * dim..(u + 1) * dim], &pos[v * dim..(v + 1) * dim]))
            .sum()
    };

    let mut history = Vec::new();
    let mut cost = cost_of(&pos);
    if trace {
        history.push(cost);
    }
    let scale = 1.0 + pos[..n * dim].iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    // Position movement per sweep must die out too: the cost is quadratic
    // around the optimum, so a cost stall alone leaves positions ~sqrt(tol)
    // off the first-order condition.
    let move_tol = 1e-10 * scale;
    let mut residual = f64::INFINITY;
    let mut sweeps = 0usize;
    let mut converged = false;
    // Smoothing stages are a last resort for sweeps that stop moving short
    // of stationarity.
    let eps_schedule = [
        1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12,
    ];
    let mut next_eps = 0usize;
    let mut prev_movement = f64::INFINITY;
    let mut stagnant = 0usize;

    while sweeps < opts.max_sweeps {
        let movement = sweep_exact(&mut pos, dim, n, &steiner_nbrs);
        sweeps += 1;
        let new_cost = cost_of(&pos);
        if trace {
            history.push(new_cost);
        }
        residual = (cost - new_cost) / new_cost.abs().max(f64::MIN_POSITIVE);
        cost = new_cost;
        if residual < opts.tol && movement <= move_tol {
            converged = true;
            break;
        }
        // Stagnation: cost stalled and movement no longer shrinking.
        if residual < opts.tol && movement >= 0.999 * prev_movement {
            stagnant += 1;
        } else {
            stagnant = 0;
        }
        prev_movement = movement;
        if stagnant >= 100 {
            if next_eps == eps_schedule.len() {
                // Smoothing exhausted; the cost has long stalled. Accept.
                converged = true;
                break;
            }
            // Smooth at (or just below) the current movement scale so the
            // detour does not spoil coordinates already settled.
            while next_eps + 1 < eps_schedule.len() && eps_schedule[next_eps] > movement * 10.0 {
                next_eps += 1;
            }
            let eps = eps_schedule[next_eps];
            next_eps += 1;
            let mut smooth_prev = f64::INFINITY;
            while sweeps < opts.max_sweeps {
                sweep_smoothed(&mut pos, dim, n, &steiner_nbrs, eps);
                sweeps += 1;
                let c = cost_of(&pos);
                if trace {
                    history.push(c);
                }
                let change = (smooth_prev - c).abs() / c.abs().max(f64::MIN_POSITIVE);
                smooth_prev = c;
                if change < opts.tol.max(eps * 1e-3) {
                    break;
                }
            }
            cost = cost_of(&pos);
            stagnant = 0;
            prev_movement = f64::INFINITY;
        }
    }

    let positions: Vec<Point> = (0..n + k)
        .map(|i| Point::new(pos[i * dim..(i + 1) * dim].to_vec()))
        .collect();
    let collapsed_edges: Vec<(Node, Node)> = t
        .edges()
        .iter()
        .filter(|&&(u, v)| {
            matches!(u, Node::Steiner(_))
                && matches!(v, Node::Steiner(_))
                && dist_s(
                    positions[t.index(u)].coords(),
                    positions[t.index(v)].coords(),
                ) < COLLAPSE_EPS
        })
        .copied()
        .collect();
    let tree = SteinerTree {
        topology: t.clone(),
        positions,
        cost,
        converged,
        residual,
        collapsed_edges,
    };
    Ok((tree, history))
}

/// One exact cyclic sweep: each Steiner node moves to the minimizer of its
/// own block (the Fermat point of its three neighbors, or the coincident
/// neighbor when the triangle degenerates). Returns the largest single-node
/// displacement.
fn sweep_exact(pos: &mut [f64], dim: usize, n: usize, steiner_nbrs: &[[usize; 3]]) -> f64 {
    let mut movement = 0.0f64;
    for (j, nbrs) in steiner_nbrs.iter().enumerate() {
        let target = (n + j) * dim;
        let [a, b, c] = *nbrs;
        let pa = pos[a * dim..(a + 1) * dim].to_vec();
        let pb = pos[b * dim..(b + 1) * dim].to_vec();
        let pc = pos[c * dim..(c + 1) * dim].to_vec();
        let new = match geometry::fermat_s(&pa, &pb, &pc) {
            Some((f, _, _)) => f,
            None => {
                // A coincident pair dominates: |s - x| + 2 |s - q| is
                // minimized at the doubled point q. The pair (a, .) wins
                // unless (b, c) is strictly the closest.
                let (dab, dac, dbc) = (dist_s(&pa, &pb), dist_s(&pa, &pc), dist_s(&pb, &pc));
                if dbc < dab && dbc < dac {
                    pb.clone()
                } else {
                    pa.clone()
                }
            }
        };
        movement = movement.max(dist_s(&pos[target..target + dim], &new));
        pos[target..target + dim].copy_from_slice(&new);
    }
    movement
}

/// One reweighted-averaging sweep on the eps-smoothed objective.
fn sweep_smoothed(pos: &mut [f64], dim: usize, n: usize, steiner_nbrs: &[[usize; 3]], eps: f64) {
    for (j, nbrs) in steiner_nbrs.iter().enumerate() {
        let target = (n + j) * dim;
        let s = pos[target..target + dim].to_vec();
        let mut num = vec![0.0; dim];
        let mut den = 0.0;
        for &nb in nbrs {
            let p = &pos[nb * dim..(nb + 1) * dim];
            let w = 1.0 / (dist_s(&s, p).powi(2) + eps * eps).sqrt();
            for (acc, &x) in num.iter_mut().zip(p) {
                *acc += w * x;
            }
            den += w;
        }
        for (slot, acc) in pos[target..target + dim].iter_mut().zip(num) {
            *slot = acc / den;
        }
    }
}

/// Exhaustive exact search: solves every full topology on the terminal set
/// and reports the global minimum with deterministic tie-breaking (smallest
/// canonical encoding among ties). Topology solves are distributed across
/// the current rayon pool; the reduction is order-independent.
pub fn optimal_steiner_tree(terminals: &[Point]) -> Result<SolveReport> {
    optimal_steiner_tree_with(terminals, DEFAULT_SOLVER_CAP, &SolveOptions::default())
}

pub fn optimal_steiner_tree_with(
    terminals: &[Point],
    cap: usize,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let n = terminals.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "exact search needs at least 3 terminals, got {n}"
        )));
    }
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    let topologies = enumerate_full_topologies_capped(n, cap)?;
    let solved: Vec<SteinerTree> = topologies
        .par_iter()
        .map(|t| relatively_minimal_with(terminals, t, opts))
        .collect::<Result<_>>()?;
    let all_costs: Vec<f64> = solved.iter().map(|s| s.cost).collect();
    let best_cost = all_costs.iter().cloned().fold(f64::INFINITY, f64::min);
    let ties: Vec<usize> = all_costs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c <= best_cost + TIE_EPS)
        .map(|(i, _)| i)
        .collect();
    let best_id = ties
        .iter()
        .copied()
        .min_by_key(|&i| topologies[i].canonical_labeled())
        .expect("at least one topology");
    Ok(SolveReport {
        best: solved[best_id].clone(),
        all_costs,
        ties,
    })
}

/// Cost of a Euclidean minimum spanning tree of the points (Prim).
pub fn mst_cost(points: &[Point]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidInput(
            "minimum spanning tree needs at least 2 points".into(),
        ));
    }
    let dim = points[0].dim();
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch(dim, p.dim()));
        }
    }
    let n = points.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    best[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .unwrap();
        in_tree[u] = true;
        total += best[u];
        for v in 0..n {
            if !in_tree[v] {
                let d = dist_s(points[u].coords(), points[v].coords());
                if d < best[v] {
                    best[v] = d;
                }
            }
        }
    }
    Ok(total)
}

/// Optimal Steiner tree cost divided by minimum spanning tree cost.
pub fn steiner_ratio(points: &[Point]) -> Result<f64> {
    let report = optimal_steiner_tree(points)?;
    Ok(report.best.cost / mst_cost(points)?)
}

/// The vertices of the regular `d`-simplex in basis-vector coordinates
/// (side length sqrt 2).
pub fn simplex_terminals(d: usize) -> Vec<Point> {
    (0..d).map(|i| Point::basis(i, d)).collect()
}
