//! Toric reduction by a subtorus, realized on the moment polytope as a slice
//! through the fixed locus of the involution.

use num::bigint::BigInt;
use num::Zero;

use super::involution::{AffineInvolution, SubtorusSpec};
use super::lattice::{build_face_lattice, is_simple};
use super::{HPolytope, Halfspace, PolytopeError};
use crate::arith::Rational;
use crate::exec::{combinations, Exec};
use crate::linalg::{affine_rank, dot, integer_kernel_basis, mat_vec, primitive, rank, rref, sub_vec, Matrix, Vector};

/// Outcome of the regular-value test for the reduction level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub regular: bool,
    /// `pi` applied to the involution's fixed locus.
    pub level: Vector,
    /// First face (in lattice order) that meets the level set with
    /// projected direction space of rank below `k'`.
    pub offending: Option<OffendingFace>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffendingFace {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub projected_rank: usize,
}

/// Reduced polytope with its involution and the lattice basis used for slice
/// coordinates: a point `z` of `polytope` sits at `base_point + basis^T z`.
#[derive(Clone, Debug)]
pub struct SliceReduction {
    pub polytope: HPolytope,
    pub involution: AffineInvolution,
    pub basis: Matrix,
    pub base_point: Vector,
    pub level: Vector,
}

impl SliceReduction {
    pub fn lift(&self, z: &[Rational]) -> Vector {
        let mut y = self.base_point.clone();
        for (zi, b) in z.iter().zip(&self.basis) {
            for (yj, bj) in y.iter_mut().zip(b) {
                *yj += zi * bj;
            }
        }
        y
    }
}

fn check_inputs(p: &HPolytope, inv: &AffineInvolution, sub: &SubtorusSpec) -> Result<(), PolytopeError> {
    if inv.dim() != p.dim() || sub.ambient_dim() != p.dim() {
        return Err(PolytopeError::DimensionMismatch(
            "polytope, involution and subtorus must share the ambient dimension".into(),
        ));
    }
    if !inv.preserves(p) {
        return Err(PolytopeError::IncompatibleInvolution(
            "the involution does not preserve the polytope".into(),
        ));
    }
    sub.check_anti_invariant(inv)
}

/// Zero is a regular value of the subtorus moment map iff no face whose
/// directions project to rank `< k'` meets the level set. A face meeting the
/// level set on its boundary implies a smaller offending face meeting it in
/// its relative interior, so plain intersection is tested.
pub fn check_regular_value(
    p: &HPolytope,
    inv: &AffineInvolution,
    sub: &SubtorusSpec,
) -> Result<RegularityReport, PolytopeError> {
    check_inputs(p, inv, sub)?;
    let level = sub.project(&inv.fixed_point());
    let k = sub.rank();
    let lattice = build_face_lattice(p);
    let verts = p.vertices();
    for face in &lattice.faces {
        let pts: Vec<Vector> = face.vertices.iter().map(|&i| sub.project(&verts[i].point)).collect();
        let dirs: Matrix = face
            .vertices
            .iter()
            .skip(1)
            .map(|&i| sub.project(&sub_vec(&verts[i].point, &verts[face.vertices[0]].point)))
            .collect();
        let projected_rank = if dirs.is_empty() { 0 } else { rank(&dirs) };
        if projected_rank < k && in_convex_hull(&pts, &level) {
            return Ok(RegularityReport {
                regular: false,
                level,
                offending: Some(OffendingFace {
                    dim: face.dim,
                    vertices: face.vertices.clone(),
                    projected_rank,
                }),
            });
        }
    }
    Ok(RegularityReport {
        regular: true,
        level,
        offending: None,
    })
}

/// Exact hull membership via Carathéodory: `x` is in the hull iff it is a
/// convex combination of some affinely independent subset.
fn in_convex_hull(points: &[Vector], x: &[Rational]) -> bool {
    let d = x.len();
    for size in 1..=points.len().min(d + 1) {
        for subset in combinations(points.len(), size) {
            let chosen: Vec<&Vector> = subset.iter().map(|&i| &points[i]).collect();
            if affine_rank(&chosen) != Some(size - 1) {
                continue;
            }
            // rows: coordinates then the affine constraint; columns: weights | rhs
            let mut aug: Matrix = (0..=d)
                .map(|r| {
                    let mut row: Vector = chosen
                        .iter()
                        .map(|p| {
                            if r < d {
                                p[r].clone()
                            } else {
                                Rational::from_integer(1.into())
                            }
                        })
                        .collect();
                    row.push(if r < d {
                        x[r].clone()
                    } else {
                        Rational::from_integer(1.into())
                    });
                    row
                })
                .collect();
            let pivots = rref(&mut aug);
            if pivots.contains(&size) {
                continue;
            }
            let weights_nonneg = pivots
                .iter()
                .enumerate()
                .all(|(row, _)| aug[row][size] >= Rational::zero());
            if weights_nonneg {
                return true;
            }
        }
    }
    false
}

/// Slices `p` by the level set of the subtorus moment map through the fixed
/// locus of `inv` and expresses the result in integral slice coordinates.
pub fn slice_reduce(
    p: &HPolytope,
    inv: &AffineInvolution,
    sub: &SubtorusSpec,
) -> Result<SliceReduction, PolytopeError> {
    let report = check_regular_value(p, inv, sub)?;
    if let Some(face) = report.offending {
        return Err(PolytopeError::RegularValueViolation {
            dim: face.dim,
            vertices: face.vertices,
            rank: face.projected_rank,
            expected: sub.rank(),
        });
    }
    let n = p.dim();
    let k = sub.rank();
    if k == n {
        return Err(PolytopeError::InvalidSubtorus(
            "full-rank subtorus reduces to a point; use the Stanley check instead".into(),
        ));
    }
    let int_rows: Vec<Vec<BigInt>> = sub.projection().iter().map(|r| primitive(r)).collect();
    let basis: Matrix = integer_kernel_basis(&int_rows, n)
        .into_iter()
        .map(|v| v.into_iter().map(Rational::from_integer).collect())
        .collect();
    debug_assert_eq!(basis.len(), n - k);
    let base_point = inv.fixed_point();

    let mut ineqs: Vec<Halfspace> = Vec::new();
    for h in p.facets() {
        let normal: Vector = basis.iter().map(|b| dot(b, &h.normal)).collect();
        let offset = h.slack(&base_point);
        if !normal.iter().all(Zero::is_zero) {
            ineqs.push(Halfspace::new(normal, offset));
        } else if offset < Rational::zero() {
            // parallel facet with the whole slice outside it
            return Err(PolytopeError::EmptySlice);
        }
    }
    let q = HPolytope::from_inequalities(n - k, ineqs, Exec::default()).map_err(|e| match e {
        PolytopeError::Empty => PolytopeError::EmptySlice,
        other => other,
    })?;
    if !is_simple(&q) {
        return Err(PolytopeError::SliceNotSimple);
    }

    // L B^T = B^T M: column r of M holds the slice coordinates of L b_r.
    let columns: Vec<Vector> = basis
        .iter()
        .map(|b| {
            coordinates_in(&basis, &mat_vec(inv.linear(), b)).ok_or_else(|| {
                PolytopeError::IncompatibleInvolution("involution does not preserve the slice directions".into())
            })
        })
        .collect::<Result<_, _>>()?;
    let m: Matrix = (0..n - k)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let involution = AffineInvolution::new(m, vec![Rational::zero(); n - k])?;
    Ok(SliceReduction {
        polytope: q,
        involution,
        basis,
        base_point,
        level: report.level,
    })
}

/// Solves `sum_r x_r basis[r] = v`.
fn coordinates_in(basis: &Matrix, v: &[Rational]) -> Option<Vector> {
    let n = v.len();
    let k = basis.len();
    let mut aug: Matrix = (0..n)
        .map(|i| {
            let mut row: Vector = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != k || pivots.contains(&k) {
        return None;
    }
    Some((0..k).map(|r| aug[r][k].clone()).collect())
}
