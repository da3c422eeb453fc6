//! Exact rational convex polytopes in H-representation.
//!
//! Vertices are found by solving every `n`-subset of facet equations and
//! keeping the feasible solutions. Polytopes handled here are small (a few
//! dozen facets in dimension at most five), which keeps this exhaustive
//! approach cheap and makes correctness easy to audit.

mod fan;
mod involution;
mod lattice;
mod slice;

pub use fan::normal_fan;
pub use involution::{detect_central_symmetry, AffineInvolution, SubtorusSpec};
pub(crate) use lattice::require_simple;
pub use lattice::{build_face_lattice, f_vector, h_vector, is_simple, Face, FaceLattice};
pub use slice::{check_regular_value, slice_reduce, RegularityReport, SliceReduction};

use std::fmt;

use num::Zero;
use thiserror::Error;

use crate::arith::{format_rational, Rational};
use crate::exec::{combinations, Exec};
use crate::linalg::{affine_rank, dot, mat_vec, nullspace, rank, solve, Matrix, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate polytope: {0}")]
    Degenerate(String),
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("polyhedron is empty")]
    Empty,
    #[error("facet {0} is redundant")]
    RedundantFacet(usize),
    #[error("polytope is not simple (vertex {vertex} lies on {facets} facets)")]
    NotSimple { vertex: usize, facets: usize },
    #[error("polytope is not centrally symmetric")]
    NotCentrallySymmetric,
    #[error("map is not an affine involution: {0}")]
    NotInvolution(String),
    #[error("involution is incompatible: {0}")]
    IncompatibleInvolution(String),
    #[error("invalid subtorus: {0}")]
    InvalidSubtorus(String),
    #[error("zero is not a regular value: face of dimension {dim} with vertices {vertices:?} meets the level set but its directions have rank {rank} < {expected} under the projection")]
    RegularValueViolation {
        dim: usize,
        vertices: Vec<usize>,
        rank: usize,
        expected: usize,
    },
    #[error("the reduced polytope is not simple")]
    SliceNotSimple,
    #[error("the level set does not meet the polytope")]
    EmptySlice,
    #[error("integer overflow converting {0}")]
    Overflow(String),
}

/// The closed halfspace `{y : <normal, y> <= offset}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    pub fn slack(&self, y: &[Rational]) -> Rational {
        &self.offset - dot(&self.normal, y)
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.normal.iter().map(format_rational).collect();
        write!(f, "{} | {}", parts.join(" "), format_rational(&self.offset))
    }
}

/// A vertex with the sorted indices of the facets tight at it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub point: Vector,
    pub tight: Vec<usize>,
}

/// A bounded, full-dimensional polytope given by irredundant facet
/// inequalities. Construction validates these invariants and caches the
/// vertex list in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    facets: Vec<Halfspace>,
    vertices: Vec<Vertex>,
}

impl HPolytope {
    pub fn new(dim: usize, facets: Vec<Halfspace>) -> Result<Self, PolytopeError> {
        Self::new_with(dim, facets, Exec::default())
    }

    pub fn new_with(dim: usize, facets: Vec<Halfspace>, exec: Exec) -> Result<Self, PolytopeError> {
        let vertices = enumerate_raw(dim, &facets, exec)?;
        for i in 0..facets.len() {
            if !is_facet_defining(&vertices, i, dim) {
                return Err(PolytopeError::RedundantFacet(i));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for i in 0..facets.len() {
            if !seen.insert(facet_vertex_set(&vertices, i)) {
                return Err(PolytopeError::RedundantFacet(i));
            }
        }
        Ok(HPolytope { dim, facets, vertices })
    }

    /// Builds a polytope from a possibly redundant system, dropping
    /// inequalities that do not define facets (and duplicates).
    pub fn from_inequalities(dim: usize, ineqs: Vec<Halfspace>, exec: Exec) -> Result<Self, PolytopeError> {
        let raw = enumerate_raw(dim, &ineqs, exec)?;
        let mut seen = std::collections::HashSet::new();
        let kept: Vec<Halfspace> = ineqs
            .iter()
            .enumerate()
            .filter(|(i, _)| is_facet_defining(&raw, *i, dim) && seen.insert(facet_vertex_set(&raw, *i)))
            .map(|(_, h)| h.clone())
            .collect();
        Self::new_with(dim, kept, exec)
    }

    /// Axis-aligned box `prod [lo_i, hi_i]`.
    pub fn cuboid(bounds: &[(Rational, Rational)]) -> Result<Self, PolytopeError> {
        let n = bounds.len();
        let mut facets = Vec::with_capacity(2 * n);
        for (i, (lo, hi)) in bounds.iter().enumerate() {
            let mut e = vec![Rational::zero(); n];
            e[i] = crate::linalg::qi(1);
            facets.push(Halfspace::new(e.clone(), hi.clone()));
            facets.push(Halfspace::new(e.iter().map(|x| -x).collect(), -lo));
        }
        Self::new(n, facets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn contains(&self, y: &[Rational]) -> bool {
        self.facets.iter().all(|h| h.slack(y) >= Rational::zero())
    }

    /// Image under `y -> m y + c` (requires `m` invertible); facet order is kept.
    pub fn transform(&self, m: &Matrix, c: &[Rational]) -> Result<Self, PolytopeError> {
        let inv =
            crate::linalg::inverse(m).ok_or_else(|| PolytopeError::Degenerate("singular transformation".into()))?;
        // <a, y> <= b with y = M^{-1}(z - c)  <=>  <M^{-T} a, z> <= b + <M^{-T} a, c>
        let inv_t = crate::linalg::transpose(&inv);
        let facets = self
            .facets
            .iter()
            .map(|h| {
                let a = mat_vec(&inv_t, &h.normal);
                let b = &h.offset + dot(&a, c);
                Halfspace::new(a, b)
            })
            .collect();
        Self::new(self.dim, facets)
    }
}

/// Vertex coordinates of `p` in lexicographic order.
pub fn enumerate_vertices(p: &HPolytope) -> Vec<Vector> {
    p.vertices.iter().map(|v| v.point.clone()).collect()
}

fn facet_vertex_set(vertices: &[Vertex], facet: usize) -> Vec<usize> {
    vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| v.tight.binary_search(&facet).is_ok())
        .map(|(i, _)| i)
        .collect()
}

fn is_facet_defining(vertices: &[Vertex], facet: usize, dim: usize) -> bool {
    let pts: Vec<&Vector> = vertices
        .iter()
        .filter(|v| v.tight.binary_search(&facet).is_ok())
        .map(|v| &v.point)
        .collect();
    dim == 0 || affine_rank(&pts) == Some(dim - 1)
}

/// Vertices of `{y : <a_i, y> <= b_i}` with their tight sets, after checking
/// that the system describes a bounded full-dimensional polytope.
pub(crate) fn enumerate_raw(dim: usize, ineqs: &[Halfspace], exec: Exec) -> Result<Vec<Vertex>, PolytopeError> {
    if dim == 0 {
        return Err(PolytopeError::Degenerate("ambient dimension 0".into()));
    }
    if let Some(h) = ineqs.iter().find(|h| h.normal.len() != dim) {
        return Err(PolytopeError::DimensionMismatch(format!(
            "normal of length {} in dimension {dim}",
            h.normal.len()
        )));
    }
    if let Some(i) = ineqs.iter().position(|h| h.normal.iter().all(Zero::is_zero)) {
        return Err(PolytopeError::Degenerate(format!("inequality {i} has zero normal")));
    }
    if ineqs.len() < dim + 1 {
        return Err(PolytopeError::Degenerate(format!(
            "{} inequalities cannot bound a polytope in dimension {dim}",
            ineqs.len()
        )));
    }
    check_bounded(dim, ineqs)?;

    let subsets = combinations(ineqs.len(), dim);
    let mut points: Vec<Vector> = exec.filter_map(&subsets, |s| {
        let a: Matrix = s.iter().map(|&i| ineqs[i].normal.clone()).collect();
        let b: Vector = s.iter().map(|&i| ineqs[i].offset.clone()).collect();
        let y = solve(&a, &b)?;
        ineqs.iter().all(|h| h.slack(&y) >= Rational::zero()).then_some(y)
    });
    points.sort();
    points.dedup();
    if points.is_empty() {
        return Err(PolytopeError::Empty);
    }
    let refs: Vec<&Vector> = points.iter().collect();
    if affine_rank(&refs) != Some(dim) {
        return Err(PolytopeError::Degenerate("polytope is not full-dimensional".into()));
    }
    Ok(points
        .into_iter()
        .map(|point| {
            let tight = ineqs
                .iter()
                .enumerate()
                .filter(|(_, h)| h.slack(&point).is_zero())
                .map(|(i, _)| i)
                .collect();
            Vertex { point, tight }
        })
        .collect())
}

/// Bounded iff the recession cone `{d : A d <= 0}` is `{0}`: the normals
/// must span and no extreme ray (cut out by `n-1` tight rows) may exist.
fn check_bounded(dim: usize, ineqs: &[Halfspace]) -> Result<(), PolytopeError> {
    let a: Matrix = ineqs.iter().map(|h| h.normal.clone()).collect();
    if rank(&a) < dim {
        return Err(PolytopeError::Unbounded);
    }
    for s in combinations(ineqs.len(), dim - 1) {
        let sub: Matrix = s.iter().map(|&i| a[i].clone()).collect();
        let ker = nullspace(&sub, dim);
        if ker.len() != 1 {
            continue;
        }
        let d = &ker[0];
        let dots: Vec<Rational> = a.iter().map(|row| dot(row, d)).collect();
        if dots.iter().all(|x| *x <= Rational::zero()) || dots.iter().all(|x| *x >= Rational::zero()) {
            return Err(PolytopeError::Unbounded);
        }
    }
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::linalg::qi;

    fn pt(c: &[i64]) -> Vector {
        c.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn cube_vertices() {
        let v = enumerate_vertices(&cube(3));
        assert_eq!(v.len(), 8);
        assert_eq!(v[0], pt(&[-1, -1, -1]));
        assert_eq!(v[7], pt(&[1, 1, 1]));
        assert!(cube(3).vertices().iter().all(|v| v.tight.len() == 3));
    }

    #[test]
    fn simplex_vertices() {
        let v = enumerate_vertices(&simplex3());
        assert_eq!(v, vec![pt(&[0, 0, 0]), pt(&[0, 0, 1]), pt(&[0, 1, 0]), pt(&[1, 0, 0])]);
    }

    #[test]
    fn hexagon_vertices_match_brute_force() {
        let h = hexagon();
        // Oracle: intersect every pair of boundary lines by Cramer's rule and
        // keep the feasible points.
        let f = h.facets();
        let mut expected = Vec::new();
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                let (a, b) = (&f[i], &f[j]);
                let det = &a.normal[0] * &b.normal[1] - &a.normal[1] * &b.normal[0];
                if det.is_zero() {
                    continue;
                }
                let x = (&a.offset * &b.normal[1] - &b.offset * &a.normal[1]) / &det;
                let y = (&a.normal[0] * &b.offset - &b.normal[0] * &a.offset) / &det;
                let p = vec![x, y];
                if f.iter().all(|g| g.slack(&p) >= Rational::zero()) && !expected.contains(&p) {
                    expected.push(p);
                }
            }
        }
        expected.sort();
        assert_eq!(expected.len(), 6);
        assert_eq!(enumerate_vertices(&h), expected);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let facets = cube(4).facets().to_vec();
        let a = HPolytope::new_with(4, facets.clone(), Exec::Sequential).unwrap();
        let b = HPolytope::new_with(4, facets, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_unbounded() {
        let r = HPolytope::new(2, vec![hs(&[-1, 0], 0), hs(&[0, -1], 0), hs(&[1, -1], 1)]);
        assert_eq!(r.unwrap_err(), PolytopeError::Unbounded);
        let strip = HPolytope::new(2, vec![hs(&[1, 0], 1), hs(&[-1, 0], 1), hs(&[1, 0], 2)]);
        assert_eq!(strip.unwrap_err(), PolytopeError::Unbounded);
    }

    #[test]
    fn rejects_degenerate_and_empty() {
        assert!(matches!(
            HPolytope::new(2, vec![hs(&[1, 0], 1), hs(&[0, 1], 1)]),
            Err(PolytopeError::Degenerate(_))
        ));
        let flat = HPolytope::new(
            2,
            vec![hs(&[1, 0], 1), hs(&[-1, 0], 1), hs(&[0, 1], 0), hs(&[0, -1], 0)],
        );
        assert!(matches!(flat, Err(PolytopeError::Degenerate(_))));
        let empty = HPolytope::new(1, vec![hs(&[1], -1), hs(&[-1], -1)]);
        assert_eq!(empty.unwrap_err(), PolytopeError::Empty);
    }

    #[test]
    fn redundancy() {
        let mut f = cube(2).facets().to_vec();
        f.push(hs(&[1, 1], 5));
        assert_eq!(
            HPolytope::new(2, f.clone()).unwrap_err(),
            PolytopeError::RedundantFacet(4)
        );
        let pruned = HPolytope::from_inequalities(2, f, Exec::default()).unwrap();
        assert_eq!(pruned.facets().len(), 4);
        // a duplicated facet is redundant too
        let mut g = cube(2).facets().to_vec();
        g.push(hs(&[2, 0], 2));
        assert_eq!(HPolytope::new(2, g).unwrap_err(), PolytopeError::RedundantFacet(4));
    }

    #[test]
    fn transform_moves_vertices() {
        let m = vec![pt(&[1, 1]), pt(&[0, 1])];
        let moved = cube(2).transform(&m, &pt(&[2, 0])).unwrap();
        let mut expected: Vec<Vector> = enumerate_vertices(&cube(2))
            .iter()
            .map(|v| {
                crate::linalg::mat_vec(&m, v)
                    .iter()
                    .zip(pt(&[2, 0]))
                    .map(|(a, b)| a + b)
                    .collect()
            })
            .collect();
        expected.sort();
        assert_eq!(enumerate_vertices(&moved), expected);
    }
}
