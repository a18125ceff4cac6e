//! Executable checkers for the structural necessary conditions of optimal
//! Steiner trees. Given a tree of any provenance, each checker reports
//! pass/fail/not-applicable with concrete witnesses and the tolerance used;
//! no checker uses a hidden epsilon.

use crate::geometry::{self, dist_s};
use crate::solver::SteinerTree;
use crate::topology::Node;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Default angle slack in degrees.
pub const DEFAULT_ANGLE_TOL_DEG: f64 = 1e-7;
/// Default length slack.
pub const DEFAULT_LENGTH_TOL: f64 = 1e-9;
/// Default singular-value tolerance for the coplanarity test.
pub const DEFAULT_COPLANAR_TOL: f64 = 1e-8;
/// Default tolerance for the face-intersection diagnostic.
pub const DEFAULT_FACE_TOL: f64 = 1e-7;
/// Edge-length factor of the Steiner-Steiner bound: sqrt(6)/2 - 1.
pub const EDGE_BOUND_FACTOR: f64 = 0.224_744_871_391_589_05;
/// Lower bound on terminal-Steiner edges of simplex optima: 1/sqrt(3).
pub const ORPHAN_BOUND: f64 = 0.577_350_269_189_625_8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// Concrete evidence attached to a failing check.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Witness {
    pub node: Option<Node>,
    pub edge: Option<(Node, Node)>,
    pub coordinate: Option<usize>,
    pub measured: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub witness: Option<Witness>,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &str, tolerance: f64, detail: String) -> Self {
        CheckResult {
            name: name.into(),
            status: CheckStatus::Pass,
            witness: None,
            tolerance,
            detail,
        }
    }

    fn fail(name: &str, tolerance: f64, witness: Witness, detail: String) -> Self {
        CheckResult {
            name: name.into(),
            status: CheckStatus::Fail,
            witness: Some(witness),
            tolerance,
            detail,
        }
    }

    fn not_applicable(name: &str, detail: String) -> Self {
        CheckResult {
            name: name.into(),
            status: CheckStatus::NotApplicable,
            witness: None,
            tolerance: 0.0,
            detail,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::NotApplicable => "N/A ",
        };
        write!(f, "{tag} {:<24} {}", self.name, self.detail)
    }
}

/// Aggregated per-check statuses with witnesses.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn first_failure(&self) -> Option<String> {
        self.checks
            .iter()
            .find(|c| !c.passed())
            .map(|c| format!("{c}"))
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        Ok(())
    }
}

/// Every pair of edges at every node must include an angle of at least
/// `120 - tol_deg` degrees.
pub fn check_angles(t: &SteinerTree, tol_deg: f64) -> CheckResult {
    let adj = t.topology.adjacency();
    let mut min_seen = 180.0f64;
    for (v, nbrs) in adj.iter().enumerate() {
        for i in 0..nbrs.len() {
            for j in i + 1..nbrs.len() {
                // Zero-length edges count as a violated angle.
                let ang = geometry::angle_at(
                    &t.positions[v],
                    &t.positions[nbrs[i]],
                    &t.positions[nbrs[j]],
                )
                .unwrap_or(0.0);
                min_seen = min_seen.min(ang);
                if ang < 120.0 - tol_deg {
                    return CheckResult::fail(
                        "angles",
                        tol_deg,
                        Witness {
                            node: Some(t.topology.node_at(v)),
                            edge: Some((t.topology.node_at(nbrs[i]), t.topology.node_at(nbrs[j]))),
                            measured: ang,
                            bound: 120.0,
                            ..Witness::default()
                        },
                        format!(
                            "angle {ang:.9} deg at {} between edges to {} and {}",
                            t.topology.node_at(v),
                            t.topology.node_at(nbrs[i]),
                            t.topology.node_at(nbrs[j])
                        ),
                    );
                }
            }
        }
    }
    CheckResult::pass(
        "angles",
        tol_deg,
        format!("minimum included angle {min_seen:.9} deg"),
    )
}

/// Out-of-plane component of three unit directions: the norm of the third
/// direction's residual after projecting onto the span of the best-
/// conditioned pair. Zero iff the directions span at most 2 dimensions.
/// (Computed by direct orthogonal projection: the squared-Gram eigenvalue
/// route loses half the mantissa and drowns a 1e-8 tolerance in noise.)
fn coplanarity_residual(dirs: &[Vec<f64>; 3]) -> f64 {
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    // Pick the pair with the largest spanned area.
    let mut best = (0usize, 1usize, 2usize);
    let mut best_area = -1.0f64;
    for (i, j, k) in [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)] {
        let (u, v) = (&dirs[i], &dirs[j]);
        let area2 = dot(u, u) * dot(v, v) - dot(u, v) * dot(u, v);
        if area2 > best_area {
            best_area = area2;
            best = (i, j, k);
        }
    }
    if best_area < 1e-20 {
        // All three directions (near-)collinear: rank <= 1.
        return 0.0;
    }
    let (i, j, k) = best;
    let nu = dot(&dirs[i], &dirs[i]).sqrt();
    let q1: Vec<f64> = dirs[i].iter().map(|x| x / nu).collect();
    let proj = dot(&q1, &dirs[j]);
    let mut w: Vec<f64> = dirs[j].iter().zip(&q1).map(|(x, q)| x - proj * q).collect();
    let nw = dot(&w, &w).sqrt();
    for x in w.iter_mut() {
        *x /= nw;
    }
    let (c1, c2) = (dot(&q1, &dirs[k]), dot(&w, &dirs[k]));
    dirs[k]
        .iter()
        .zip(q1.iter().zip(&w))
        .map(|(x, (a, b))| {
            let r = x - c1 * a - c2 * b;
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

/// Every Steiner node must have degree exactly 3 with coplanar incident
/// edge directions (third singular value of the unit directions below
/// `sv_tol`).
pub fn check_steiner_structure(t: &SteinerTree, sv_tol: f64) -> CheckResult {
    let adj = t.topology.adjacency();
    let n = t.topology.n_terminals();
    let mut max_sv = 0.0f64;
    for j in 0..t.topology.n_steiner() {
        let v = n + j;
        if adj[v].len() != 3 {
            return CheckResult::fail(
                "steiner_structure",
                sv_tol,
                Witness {
                    node: Some(Node::Steiner(j)),
                    measured: adj[v].len() as f64,
                    bound: 3.0,
                    ..Witness::default()
                },
                format!("S{j} has degree {}", adj[v].len()),
            );
        }
        let s = t.positions[v].coords();
        let mut dirs: [Vec<f64>; 3] = [vec![], vec![], vec![]];
        for (slot, &u) in dirs.iter_mut().zip(&adj[v]) {
            let p = t.positions[u].coords();
            let norm = dist_s(s, p);
            if norm < 1e-15 {
                // Collapsed edge: direction degenerate, spans nothing.
                *slot = vec![0.0; s.len()];
                continue;
            }
            *slot = p.iter().zip(s).map(|(a, b)| (a - b) / norm).collect();
        }
        let sv = coplanarity_residual(&dirs);
        max_sv = max_sv.max(sv);
        if sv > sv_tol {
            return CheckResult::fail(
                "steiner_structure",
                sv_tol,
                Witness {
                    node: Some(Node::Steiner(j)),
                    measured: sv,
                    bound: sv_tol,
                    ..Witness::default()
                },
                format!("edge directions at S{j} span 3 dimensions (sigma_3 = {sv:.3e})"),
            );
        }
    }
    CheckResult::pass(
        "steiner_structure",
        sv_tol,
        format!(
            "all {} Steiner nodes have degree 3, max sigma_3 = {max_sv:.3e}",
            t.topology.n_steiner()
        ),
    )
}

/// Every Steiner coordinate must lie strictly inside the terminal range in
/// that coordinate, with the given margin. Coordinates on which the
/// terminals do not vary are skipped and noted.
pub fn check_coordinate_bounds(t: &SteinerTree, margin: f64) -> CheckResult {
    let n = t.topology.n_terminals();
    let dim = t.dim();
    let mut skipped = Vec::new();
    for c in 0..dim {
        let lo = (0..n)
            .map(|i| t.positions[i][c])
            .fold(f64::INFINITY, f64::min);
        let hi = (0..n)
            .map(|i| t.positions[i][c])
            .fold(f64::NEG_INFINITY, f64::max);
        if hi - lo <= 1e-12 * (1.0 + hi.abs()) {
            skipped.push(c);
            continue;
        }
        for j in 0..t.topology.n_steiner() {
            let s = t.positions[n + j][c];
            if !(s - lo > margin && hi - s > margin) {
                return CheckResult::fail(
                    "coordinate_bounds",
                    margin,
                    Witness {
                        node: Some(Node::Steiner(j)),
                        coordinate: Some(c),
                        measured: s,
                        bound: if s - lo <= margin { lo } else { hi },
                        ..Witness::default()
                    },
                    format!("S{j} coordinate {c} = {s:.9} not strictly inside ({lo:.9}, {hi:.9})"),
                );
            }
        }
    }
    let note = if skipped.is_empty() {
        "all Steiner coordinates strictly inside terminal ranges".to_string()
    } else {
        format!(
            "strictly inside terminal ranges; coordinates {skipped:?} skipped (terminals constant)"
        )
    };
    CheckResult::pass("coordinate_bounds", margin, note)
}

/// Every Steiner-Steiner edge must satisfy
/// `len >= (sqrt(6)/2 - 1) L0 - tol`, with `L0` the shortest of the four
/// outward edges at its endpoints. Needs dimension >= 3 and at least one
/// Steiner-Steiner edge.
pub fn check_edge_bound(t: &SteinerTree, tol: f64) -> CheckResult {
    if t.dim() < 3 {
        return CheckResult::not_applicable("edge_bound", "dimension below 3".into());
    }
    let adj = t.topology.adjacency();
    let mut seen = 0usize;
    let mut worst_slack = f64::INFINITY;
    for &(u, v) in t.topology.edges() {
        if !matches!(u, Node::Steiner(_)) || !matches!(v, Node::Steiner(_)) {
            continue;
        }
        seen += 1;
        let (iu, iv) = (t.topology.index(u), t.topology.index(v));
        let len = dist_s(t.positions[iu].coords(), t.positions[iv].coords());
        let mut l0 = f64::INFINITY;
        for (end, other) in [(iu, iv), (iv, iu)] {
            for &w in &adj[end] {
                if w != other {
                    l0 = l0.min(dist_s(t.positions[end].coords(), t.positions[w].coords()));
                }
            }
        }
        let bound = EDGE_BOUND_FACTOR * l0;
        worst_slack = worst_slack.min(len - bound);
        if len < bound - tol {
            return CheckResult::fail(
                "edge_bound",
                tol,
                Witness {
                    edge: Some((u, v)),
                    measured: len,
                    bound,
                    ..Witness::default()
                },
                format!("edge {u}-{v} length {len:.9} below (sqrt6/2 - 1) L0 = {bound:.9}"),
            );
        }
    }
    if seen == 0 {
        return CheckResult::not_applicable("edge_bound", "no Steiner-Steiner edges".into());
    }
    CheckResult::pass(
        "edge_bound",
        tol,
        format!("{seen} Steiner-Steiner edges, worst slack {worst_slack:.3e}"),
    )
}

/// Every coordinatewise-extremal terminal (each coordinate at the max or min
/// of the point set) must be a leaf.
pub fn check_leaf_condition(points: &[crate::geometry::Point], t: &SteinerTree) -> CheckResult {
    let dim = t.dim();
    let lo: Vec<f64> = (0..dim)
        .map(|c| points.iter().map(|p| p[c]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..dim)
        .map(|c| {
            points
                .iter()
                .map(|p| p[c])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let mut extremal = 0usize;
    for i in 0..t.topology.n_terminals() {
        let p = &t.positions[i];
        let is_extremal = (0..dim).all(|c| {
            let scale = 1.0 + hi[c].abs().max(lo[c].abs());
            p[c] >= hi[c] - 1e-12 * scale || p[c] <= lo[c] + 1e-12 * scale
        });
        if !is_extremal {
            continue;
        }
        extremal += 1;
        let deg = t.topology.degree(Node::Terminal(i));
        if deg != 1 {
            return CheckResult::fail(
                "leaf_condition",
                0.0,
                Witness {
                    node: Some(Node::Terminal(i)),
                    measured: deg as f64,
                    bound: 1.0,
                    ..Witness::default()
                },
                format!("extremal terminal T{i} has degree {deg}"),
            );
        }
    }
    CheckResult::pass(
        "leaf_condition",
        0.0,
        format!("{extremal} extremal terminals, all leaves"),
    )
}

fn terminals_are_basis_vectors(t: &SteinerTree) -> bool {
    let d = t.topology.n_terminals();
    t.dim() == d
        && (0..d).all(|i| {
            dist_s(
                t.positions[i].coords(),
                crate::geometry::Point::basis(i, d).coords(),
            ) < 1e-9
        })
}

/// On regular-simplex instances, every terminal-Steiner edge must be longer
/// than `1/sqrt(3) - tol`.
pub fn check_orphan_bound(t: &SteinerTree, tol: f64) -> CheckResult {
    if !terminals_are_basis_vectors(t) {
        return CheckResult::not_applicable(
            "orphan_bound",
            "terminals are not the basis vectors of a regular simplex".into(),
        );
    }
    let mut shortest = f64::INFINITY;
    for &(u, v) in t.topology.edges() {
        let terminal_edge = matches!(
            (u, v),
            (Node::Terminal(_), Node::Steiner(_)) | (Node::Steiner(_), Node::Terminal(_))
        );
        if !terminal_edge {
            continue;
        }
        let len = dist_s(
            t.positions[t.topology.index(u)].coords(),
            t.positions[t.topology.index(v)].coords(),
        );
        shortest = shortest.min(len);
        if len <= ORPHAN_BOUND - tol {
            return CheckResult::fail(
                "orphan_bound",
                tol,
                Witness {
                    edge: Some((u, v)),
                    measured: len,
                    bound: ORPHAN_BOUND,
                    ..Witness::default()
                },
                format!("terminal edge {u}-{v} length {len:.9} <= 1/sqrt(3)"),
            );
        }
    }
    CheckResult::pass(
        "orphan_bound",
        tol,
        format!("shortest terminal edge {shortest:.9} > 1/sqrt(3)"),
    )
}

/// Diagnostic for simplex instances: at a Steiner point adjacent to terminal
/// `e_i`, the rays extending its other two edges must leave the simplex hull
/// through the face `x_i = 0`.
pub fn check_face_intersections(t: &SteinerTree, tol: f64) -> CheckResult {
    if !terminals_are_basis_vectors(t) {
        return CheckResult::not_applicable(
            "face_intersections",
            "terminals are not the basis vectors of a regular simplex".into(),
        );
    }
    let adj = t.topology.adjacency();
    let n = t.topology.n_terminals();
    let mut rays = 0usize;
    let mut worst = 0.0f64;
    for j in 0..t.topology.n_steiner() {
        let v = n + j;
        let terminal_nbrs: Vec<usize> = adj[v].iter().copied().filter(|&u| u < n).collect();
        for &term in &terminal_nbrs {
            let s = t.positions[v].coords();
            for &other in &adj[v] {
                if other == term {
                    continue;
                }
                // Ray from s through the neighbor, to the hull boundary
                // {x >= 0, sum x = 1}.
                let p = t.positions[other].coords();
                let dir: Vec<f64> = p.iter().zip(s).map(|(a, b)| a - b).collect();
                let mut t_exit = f64::INFINITY;
                for (sc, dc) in s.iter().zip(&dir) {
                    if *dc < -1e-15 {
                        t_exit = t_exit.min(sc / -dc);
                    }
                }
                if !t_exit.is_finite() {
                    continue;
                }
                let xi = s[term] + t_exit * dir[term];
                rays += 1;
                worst = worst.max(xi.abs());
                if xi.abs() > tol {
                    return CheckResult::fail(
                        "face_intersections",
                        tol,
                        Witness {
                            node: Some(Node::Steiner(j)),
                            coordinate: Some(term),
                            measured: xi,
                            bound: 0.0,
                            ..Witness::default()
                        },
                        format!(
                            "ray from S{j} exits the hull with coordinate {term} = {xi:.3e}, not on face x_{term} = 0"
                        ),
                    );
                }
            }
        }
    }
    if rays == 0 {
        return CheckResult::not_applicable(
            "face_intersections",
            "no Steiner point adjacent to a terminal".into(),
        );
    }
    CheckResult::pass(
        "face_intersections",
        tol,
        format!("{rays} rays exit on the opposite face, worst |x_i| = {worst:.3e}"),
    )
}

/// Candidate-optimality: the angle condition and the Steiner structure
/// condition together.
pub fn check_candidate(t: &SteinerTree) -> VerificationReport {
    VerificationReport {
        checks: vec![
            check_angles(t, DEFAULT_ANGLE_TOL_DEG),
            check_steiner_structure(t, DEFAULT_COPLANAR_TOL),
        ],
    }
}

/// Runs every checker with default tolerances.
pub fn full_report(points: &[crate::geometry::Point], t: &SteinerTree) -> VerificationReport {
    VerificationReport {
        checks: vec![
            check_angles(t, DEFAULT_ANGLE_TOL_DEG),
            check_steiner_structure(t, DEFAULT_COPLANAR_TOL),
            check_coordinate_bounds(t, DEFAULT_LENGTH_TOL),
            check_edge_bound(t, DEFAULT_LENGTH_TOL),
            check_leaf_condition(points, t),
            check_orphan_bound(t, DEFAULT_LENGTH_TOL),
            check_face_intersections(t, DEFAULT_FACE_TOL),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::solver::{relatively_minimal, simplex_terminals};
    use crate::topology::{conjectured_topology, Topology};
    use approx::assert_relative_eq;

    fn solved(d: usize) -> SteinerTree {
        relatively_minimal(
            &simplex_terminals(d),
            &conjectured_topology(d).unwrap(),
            1e-12,
        )
        .unwrap()
    }

    #[test]
    fn solved_star_passes_everything() {
        let tree = solved(3);
        let report = full_report(&simplex_terminals(3), &tree);
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn perturbed_steiner_point_fails_angles() {
        let mut tree = solved(3);
        let idx = tree.topology.index(Node::Steiner(0));
        let mut coords = tree.positions[idx].coords().to_vec();
        coords[0] += 0.1;
        tree.positions[idx] = Point::new(coords);
        let result = check_angles(&tree, DEFAULT_ANGLE_TOL_DEG);
        assert_eq!(result.status, CheckStatus::Fail);
        let w = result.witness.unwrap();
        assert!(w.measured < 120.0);
    }

    #[test]
    fn degree_and_coplanarity_failures_are_caught() {
        // A non-full "topology": T3 joined directly onto S0 gives it degree 4.
        let t = Topology::new(
            4,
            1,
            vec![
                (Node::Terminal(0), Node::Steiner(0)),
                (Node::Terminal(1), Node::Steiner(0)),
                (Node::Terminal(2), Node::Steiner(0)),
                (Node::Terminal(3), Node::Steiner(0)),
            ],
        )
        .unwrap();
        let tree = SteinerTree {
            positions: vec![
                Point::basis(0, 4),
                Point::basis(1, 4),
                Point::basis(2, 4),
                Point::basis(3, 4),
                Point::new(vec![0.25; 4]),
            ],
            cost: 0.0,
            converged: true,
            residual: 0.0,
            collapsed_edges: vec![],
            topology: t,
        };
        let r = check_steiner_structure(&tree, DEFAULT_COPLANAR_TOL);
        assert_eq!(r.status, CheckStatus::Fail);

        // Degree 3 but genuinely non-coplanar directions: e1, e2, e3 from
        // the origin.
        let t = Topology::new(
            3,
            1,
            vec![
                (Node::Terminal(0), Node::Steiner(0)),
                (Node::Terminal(1), Node::Steiner(0)),
                (Node::Terminal(2), Node::Steiner(0)),
            ],
        )
        .unwrap();
        let tree = SteinerTree {
            positions: vec![
                Point::basis(0, 3),
                Point::basis(1, 3),
                Point::basis(2, 3),
                Point::origin(3),
            ],
            cost: 3.0,
            converged: true,
            residual: 0.0,
            collapsed_edges: vec![],
            topology: t,
        };
        let r = check_steiner_structure(&tree, DEFAULT_COPLANAR_TOL);
        assert_eq!(r.status, CheckStatus::Fail);
        // sigma_3 of three orthonormal directions is 1.
        assert_relative_eq!(r.witness.unwrap().measured, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn coordinate_bounds_on_solved_4_simplex() {
        let tree = solved(4);
        let r = check_coordinate_bounds(&tree, DEFAULT_LENGTH_TOL);
        assert_eq!(r.status, CheckStatus::Pass);

        // Force a zero coordinate: fail.
        let mut bad = tree.clone();
        let idx = bad.topology.index(Node::Steiner(0));
        let mut coords = bad.positions[idx].coords().to_vec();
        coords[3] = 0.0;
        bad.positions[idx] = Point::new(coords);
        assert_eq!(
            check_coordinate_bounds(&bad, DEFAULT_LENGTH_TOL).status,
            CheckStatus::Fail
        );
    }

    #[test]
    fn coordinate_bounds_skips_constant_coordinates() {
        // Planar terminals embedded in R^3 with constant third coordinate.
        let pts = vec![
            Point::new(vec![0.0, 0.0, 0.5]),
            Point::new(vec![1.0, 0.0, 0.5]),
            Point::new(vec![0.5, 1.0, 0.5]),
        ];
        let tree = relatively_minimal(&pts, &conjectured_topology(3).unwrap(), 1e-12).unwrap();
        let r = check_coordinate_bounds(&tree, DEFAULT_LENGTH_TOL);
        assert_eq!(r.status, CheckStatus::Pass);
        assert!(r.detail.contains("skipped"));
    }

    #[test]
    fn edge_bound_solved_4_simplex_is_tight() {
        let tree = solved(4);
        let r = check_edge_bound(&tree, DEFAULT_LENGTH_TOL);
        assert_eq!(r.status, CheckStatus::Pass);
        // The bound holds with near equality: edge 2(1/2 - 1/sqrt6) vs
        // factor * sqrt(2/3).
        let edge = 2.0 * (0.5 - 1.0 / 6.0_f64.sqrt());
        let bound = EDGE_BOUND_FACTOR * (2.0_f64 / 3.0).sqrt();
        assert!((edge - bound).abs() < 1e-7);
    }

    #[test]
    fn edge_bound_artificial_failure_and_na() {
        let star = solved(3);
        assert_eq!(
            check_edge_bound(&star, DEFAULT_LENGTH_TOL).status,
            CheckStatus::NotApplicable
        );

        let mut bad = solved(4);
        // Pull the two Steiner points to within 0.01 of each other without
        // touching the terminal edges' scale.
        let i0 = bad.topology.index(Node::Steiner(0));
        let i1 = bad.topology.index(Node::Steiner(1));
        let mid: Vec<f64> = bad.positions[i0]
            .coords()
            .iter()
            .zip(bad.positions[i1].coords())
            .map(|(a, b)| (a + b) / 2.0)
            .collect();
        let mut p0 = mid.clone();
        let mut p1 = mid;
        p0[0] += 0.005;
        p1[0] -= 0.005;
        bad.positions[i0] = Point::new(p0);
        bad.positions[i1] = Point::new(p1);
        assert_eq!(
            check_edge_bound(&bad, DEFAULT_LENGTH_TOL).status,
            CheckStatus::Fail
        );
    }

    #[test]
    fn leaf_condition_simplex_and_violations() {
        let tree = solved(5);
        let r = check_leaf_condition(&simplex_terminals(5), &tree);
        assert_eq!(r.status, CheckStatus::Pass);

        // A path through a simplex terminal: T0 - T1 direct edge plus T1 - S0
        // gives T1 degree 2; every basis vector is extremal, so this fails.
        let t = Topology::new(
            3,
            0,
            vec![
                (Node::Terminal(0), Node::Terminal(1)),
                (Node::Terminal(1), Node::Terminal(2)),
            ],
        )
        .unwrap();
        let tree = SteinerTree {
            positions: simplex_terminals(3),
            cost: 0.0,
            converged: true,
            residual: 0.0,
            collapsed_edges: vec![],
            topology: t,
        };
        let r = check_leaf_condition(&simplex_terminals(3), &tree);
        assert_eq!(r.status, CheckStatus::Fail);
        assert_eq!(r.witness.unwrap().node, Some(Node::Terminal(1)));
    }

    #[test]
    fn orphan_bound_checks() {
        let tree = solved(4);
        let r = check_orphan_bound(&tree, DEFAULT_LENGTH_TOL);
        assert_eq!(r.status, CheckStatus::Pass);

        let mut bad = tree.clone();
        let idx = bad.topology.index(Node::Steiner(0));
        // Move S0 to within 0.5 of T0 (basis vector).
        let e0 = Point::basis(0, 4);
        let coords: Vec<f64> = e0
            .coords()
            .iter()
            .zip(bad.positions[idx].coords())
            .map(|(a, b)| a + 0.4 * (b - a))
            .collect();
        bad.positions[idx] = Point::new(coords);
        assert_eq!(
            check_orphan_bound(&bad, DEFAULT_LENGTH_TOL).status,
            CheckStatus::Fail
        );

        // Non-simplex instances are out of the theorem's scope.
        let pts = vec![
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![1.0, 0.0]),
            Point::new(vec![0.0, 1.0]),
        ];
        let planar = relatively_minimal(&pts, &conjectured_topology(3).unwrap(), 1e-12).unwrap();
        assert_eq!(
            check_orphan_bound(&planar, DEFAULT_LENGTH_TOL).status,
            CheckStatus::NotApplicable
        );
    }

    #[test]
    fn face_intersection_diagnostic() {
        for d in [3usize, 4, 5] {
            let tree = solved(d);
            let r = check_face_intersections(&tree, DEFAULT_FACE_TOL);
            assert_eq!(r.status, CheckStatus::Pass, "{r}");
        }
    }

    #[test]
    fn report_text_has_one_line_per_check() {
        let tree = solved(4);
        let report = full_report(&simplex_terminals(4), &tree);
        let text = format!("{report}");
        assert_eq!(text.lines().count(), report.checks.len());
    }
}
