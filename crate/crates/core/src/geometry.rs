//! Dimension-generic vector primitives: distances, angles, Fermat points and
//! the split map.
//!
//! Everything here is a pure function on immutable values. The Fermat point
//! of three points is computed in closed form (isogonic-center weights in the
//! affine frame of the triangle), never iteratively.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_3, PI};

/// Angle slack (radians) for the `>= 120 degrees` test in [`fermat_point`].
/// At the boundary, exactly 120 degrees counts as "not interior".
pub const FERMAT_ANGLE_TOL: f64 = 1e-9;

/// A coordinate vector in `R^d` with explicit dimension (`dim == coords.len()`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Wraps a coordinate vector. Panics on an empty vector or non-finite
    /// coordinates; file loaders validate before constructing.
    pub fn new(coords: Vec<f64>) -> Self {
        assert!(!coords.is_empty(), "Point must have dimension >= 1");
        assert!(
            coords.iter().all(|c| c.is_finite()),
            "Point coordinates must be finite"
        );
        Point { coords }
    }

    /// Standard basis vector `e_i` (0-based) in `R^dim`.
    pub fn basis(i: usize, dim: usize) -> Self {
        assert!(i < dim);
        let mut coords = vec![0.0; dim];
        coords[i] = 1.0;
        Point { coords }
    }

    pub fn origin(dim: usize) -> Self {
        Point::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        norm_s(&self.coords)
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

/// Result of a three-point Fermat (Torricelli) problem.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FermatResult {
    /// The minimizer of total distance to the three vertices.
    pub point: Point,
    /// True iff the minimizer is distinct from all three vertices
    /// (equivalently: all interior angles are strictly below 120 degrees).
    pub is_interior: bool,
    /// Sum of distances from `point` to the three vertices.
    pub total_length: f64,
}

pub(crate) fn dot_s(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_s(a: &[f64]) -> f64 {
    dot_s(a, a).sqrt()
}

/// Euclidean distance between raw coordinate slices of equal length.
pub fn dist_s(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn check_dims(p: &Point, q: &Point) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(())
}

/// Euclidean distance between two points of equal dimension.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    check_dims(p, q)?;
    Ok(dist_s(p.coords(), q.coords()))
}

/// Included angle in radians between rays `u` and `v` from a common origin,
/// via the numerically stable `2 atan2(|u|v| - v|u||, |u|v| + v|u||)` form.
pub(crate) fn angle_between_rad(u: &[f64], v: &[f64]) -> f64 {
    let nu = norm_s(u);
    let nv = norm_s(v);
    let mut diff = 0.0;
    let mut sum = 0.0;
    for (x, y) in u.iter().zip(v) {
        let a = x * nv - y * nu;
        let b = x * nv + y * nu;
        diff += a * a;
        sum += b * b;
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

/// Included angle of the rays `vertex -> a` and `vertex -> b`, in degrees,
/// in `[0, 180]`.
pub fn angle_at(vertex: &Point, a: &Point, b: &Point) -> Result<f64> {
    check_dims(vertex, a)?;
    check_dims(vertex, b)?;
    let u: Vec<f64> = a
        .coords()
        .iter()
        .zip(vertex.coords())
        .map(|(x, y)| x - y)
        .collect();
    let v: Vec<f64> = b
        .coords()
        .iter()
        .zip(vertex.coords())
        .map(|(x, y)| x - y)
        .collect();
    if norm_s(&u) == 0.0 || norm_s(&v) == 0.0 {
        return Err(Error::DegenerateAngle);
    }
    Ok(angle_between_rad(&u, &v).to_degrees())
}

/// Interior angles (radians) at each vertex of the triangle `a, b, c`.
fn triangle_angles(a: &[f64], b: &[f64], c: &[f64]) -> [f64; 3] {
    let sub = |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(p, q)| p - q).collect() };
    let ab = sub(b, a);
    let ac = sub(c, a);
    let ba = sub(a, b);
    let bc = sub(c, b);
    let ca = sub(a, c);
    let cb = sub(b, c);
    [
        angle_between_rad(&ab, &ac),
        angle_between_rad(&ba, &bc),
        angle_between_rad(&ca, &cb),
    ]
}

/// Closed-form Fermat point of the (possibly degenerate, non-coincident)
/// triangle `a, b, c` in any dimension.
///
/// If all interior angles are strictly below 120 degrees (slack
/// [`FERMAT_ANGLE_TOL`]), the interior isogonic point is returned; otherwise
/// the vertex with the wide angle is the minimizer. Collinear inputs fall out
/// of the angle test (the middle point sees 180 degrees).
pub fn fermat_point(a: &Point, b: &Point, c: &Point) -> Result<FermatResult> {
    check_dims(a, b)?;
    check_dims(a, c)?;
    match fermat_s(a.coords(), b.coords(), c.coords()) {
        Some((coords, is_interior, total_length)) => Ok(FermatResult {
            point: Point::new(coords),
            is_interior,
            total_length,
        }),
        None => Err(Error::CoincidentPoints),
    }
}

/// Slice-level Fermat point; `None` on coincident vertices.
pub(crate) fn fermat_s(a: &[f64], b: &[f64], c: &[f64]) -> Option<(Vec<f64>, bool, f64)> {
    let la = dist_s(b, c); // side opposite a
    let lb = dist_s(a, c);
    let lc = dist_s(a, b);
    let scale = la.max(lb).max(lc);
    if la.min(lb).min(lc) <= 1e-14 * scale.max(1.0) {
        return None;
    }
    let angles = triangle_angles(a, b, c);
    let verts = [a, b, c];
    let wide = 2.0 * PI / 3.0 - FERMAT_ANGLE_TOL;
    for (i, &ang) in angles.iter().enumerate() {
        if ang >= wide {
            let v = verts[i];
            let total = dist_s(v, verts[(i + 1) % 3]) + dist_s(v, verts[(i + 2) % 3]);
            return Some((v.to_vec(), false, total));
        }
    }
    // Isogonic-center weights: normalized barycentric coordinates
    // (side / sin(angle + 60 deg)) per vertex. All angles are < 120 degrees
    // here, so every sine is strictly positive.
    let w = [
        la / (angles[0] + FRAC_PI_3).sin(),
        lb / (angles[1] + FRAC_PI_3).sin(),
        lc / (angles[2] + FRAC_PI_3).sin(),
    ];
    let wsum = w[0] + w[1] + w[2];
    let dim = a.len();
    let mut f = vec![0.0; dim];
    for (i, v) in verts.iter().enumerate() {
        for (fc, vc) in f.iter_mut().zip(v.iter()) {
            *fc += w[i] / wsum * vc;
        }
    }
    let total = dist_s(&f, a) + dist_s(&f, b) + dist_s(&f, c);
    Some((f, true, total))
}

/// The split of a point: `(x_1, .., x_d)` maps to
/// `(x_1/2, x_1/2, .., x_d/2, x_d/2)` in dimension `2d`. Norms shrink by
/// `sqrt(2)`, included angles are preserved.
pub fn split(p: &Point) -> Point {
    Point::new(split_s(p.coords()))
}

pub(crate) fn split_s(p: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * p.len());
    for &x in p {
        out.push(x / 2.0);
        out.push(x / 2.0);
    }
    out
}

/// Centroid of a non-empty set of equal-dimension points.
pub fn centroid(points: &[Point]) -> Point {
    assert!(!points.is_empty());
    let dim = points[0].dim();
    let mut c = vec![0.0; dim];
    for p in points {
        for (cc, pc) in c.iter_mut().zip(p.coords()) {
            *cc += pc;
        }
    }
    for cc in c.iter_mut() {
        *cc /= points.len() as f64;
    }
    Point::new(c)
}
