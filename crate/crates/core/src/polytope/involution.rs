use num::Zero;

use super::{HPolytope, PolytopeError};
use crate::arith::Rational;
use crate::linalg::{identity, mat_mul, mat_vec, qi, rank, Matrix, Vector};

/// The affine map `y -> linear * y + translation`, validated to square to
/// the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineInvolution {
    linear: Matrix,
    translation: Vector,
}

impl AffineInvolution {
    pub fn new(linear: Matrix, translation: Vector) -> Result<Self, PolytopeError> {
        let n = linear.len();
        if linear.iter().any(|r| r.len() != n) || translation.len() != n {
            return Err(PolytopeError::DimensionMismatch(format!(
                "involution needs an {n}x{n} matrix and a length-{n} translation"
            )));
        }
        if mat_mul(&linear, &linear) != identity(n) {
            return Err(PolytopeError::NotInvolution("L^2 != I".into()));
        }
        let lc = mat_vec(&linear, &translation);
        if lc.iter().zip(&translation).any(|(a, b)| !(a + b).is_zero()) {
            return Err(PolytopeError::NotInvolution("L c + c != 0".into()));
        }
        Ok(AffineInvolution { linear, translation })
    }

    /// `y -> -y`.
    pub fn negation(n: usize) -> Self {
        let linear = identity(n)
            .into_iter()
            .map(|r| r.into_iter().map(|x| -x).collect())
            .collect();
        AffineInvolution {
            linear,
            translation: vec![Rational::zero(); n],
        }
    }

    /// `y -> 2c - y`.
    pub fn point_reflection(center: &[Rational]) -> Self {
        let mut inv = Self::negation(center.len());
        inv.translation = center.iter().map(|c| c * qi(2)).collect();
        inv
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn linear(&self) -> &Matrix {
        &self.linear
    }

    pub fn translation(&self) -> &Vector {
        &self.translation
    }

    pub fn apply(&self, y: &[Rational]) -> Vector {
        mat_vec(&self.linear, y)
            .into_iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// A fixed point; `c / 2` always works since `L c = -c`.
    pub fn fixed_point(&self) -> Vector {
        self.translation.iter().map(|c| c / qi(2)).collect()
    }

    /// True iff the vertex set (hence the polytope) is mapped onto itself.
    pub fn preserves(&self, p: &HPolytope) -> bool {
        if p.dim() != self.dim() {
            return false;
        }
        let mut image: Vec<Vector> = p.vertices().iter().map(|v| self.apply(&v.point)).collect();
        image.sort();
        image.iter().eq(p.vertices().iter().map(|v| &v.point))
    }
}

/// A subtorus given by the rows of its weight matrix `pi` (`k' x n`, full
/// row rank). Its moment map is `pi` composed with the ambient one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtorusSpec {
    projection: Matrix,
}

impl SubtorusSpec {
    pub fn new(projection: Matrix) -> Result<Self, PolytopeError> {
        let k = projection.len();
        let n = projection.first().map_or(0, Vec::len);
        if k == 0 || n == 0 || projection.iter().any(|r| r.len() != n) {
            return Err(PolytopeError::InvalidSubtorus(
                "projection must be a nonempty rectangular matrix".into(),
            ));
        }
        if k > n || rank(&projection) != k {
            return Err(PolytopeError::InvalidSubtorus(format!("projection has rank below {k}")));
        }
        Ok(SubtorusSpec { projection })
    }

    pub fn rank(&self) -> usize {
        self.projection.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.projection[0].len()
    }

    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    pub fn project(&self, y: &[Rational]) -> Vector {
        mat_vec(&self.projection, y)
    }

    /// The dual involution must act by `-1` on the subtorus: `pi L = -pi`.
    pub fn check_anti_invariant(&self, inv: &AffineInvolution) -> Result<(), PolytopeError> {
        if inv.dim() != self.ambient_dim() {
            return Err(PolytopeError::DimensionMismatch(
                "subtorus and involution dimensions differ".into(),
            ));
        }
        let pl = mat_mul(&self.projection, inv.linear());
        let ok = pl
            .iter()
            .zip(&self.projection)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x + y).is_zero()));
        if ok {
            Ok(())
        } else {
            Err(PolytopeError::IncompatibleInvolution(
                "the dual involution does not act by -1 on the subtorus (pi L != -pi)".into(),
            ))
        }
    }
}

/// Center `c` with `2c - V = V`, if the vertex set is centrally symmetric.
pub fn detect_central_symmetry(p: &HPolytope) -> Option<Vector> {
    let verts = p.vertices();
    let count = qi(verts.len() as i64);
    let center: Vector = (0..p.dim())
        .map(|i| verts.iter().map(|v| &v.point[i]).sum::<Rational>() / &count)
        .collect();
    AffineInvolution::point_reflection(&center)
        .preserves(p)
        .then_some(center)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
    }

    fn vecq(c: &[i64]) -> Vector {
        c.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn central_symmetry() {
        let shifted = HPolytope::cuboid(&vec![(qi(0), qi(2)); 3]).unwrap();
        assert_eq!(detect_central_symmetry(&shifted), Some(vecq(&[1, 1, 1])));
        assert_eq!(detect_central_symmetry(&simplex3()), None);
        assert_eq!(detect_central_symmetry(&hexagon()), Some(vecq(&[0, 0])));
    }

    #[test]
    fn recentering_gives_negation() {
        let shifted = HPolytope::cuboid(&[(qi(0), qi(2)), (qi(1), qi(5))]).unwrap();
        let c = detect_central_symmetry(&shifted).unwrap();
        let neg_c: Vector = c.iter().map(|x| -x).collect();
        let centered = shifted.transform(&identity(2), &neg_c).unwrap();
        assert!(AffineInvolution::negation(2).preserves(&centered));
    }

    #[test]
    fn validates_involution() {
        let l = mat(&[&[0, 0, 1], &[-1, -1, -1], &[1, 0, 0]]);
        let inv = AffineInvolution::new(l.clone(), vecq(&[0, 1, 0])).unwrap();
        assert!(inv.preserves(&simplex3()));
        assert_eq!(inv.apply(&vecq(&[1, 0, 0])), vecq(&[0, 0, 1]));
        assert!(matches!(
            AffineInvolution::new(l, vecq(&[1, 0, 0])),
            Err(PolytopeError::NotInvolution(_))
        ));
        assert!(matches!(
            AffineInvolution::new(mat(&[&[1, 1], &[0, 1]]), vecq(&[0, 0])),
            Err(PolytopeError::NotInvolution(_))
        ));
    }

    #[test]
    fn subtorus_anti_invariance() {
        let l = mat(&[&[0, 0, 1], &[-1, -1, -1], &[1, 0, 0]]);
        let inv = AffineInvolution::new(l, vecq(&[0, 1, 0])).unwrap();
        assert!(SubtorusSpec::new(mat(&[&[1, 1, 0]]))
            .unwrap()
            .check_anti_invariant(&inv)
            .is_ok());
        assert!(SubtorusSpec::new(mat(&[&[1, 0, 0]]))
            .unwrap()
            .check_anti_invariant(&inv)
            .is_err());
        assert!(SubtorusSpec::new(mat(&[&[1, 1], &[2, 2]])).is_err());
    }
}
