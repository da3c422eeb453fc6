//! Complete simplicial fans, their involutive automorphisms, and the graded
//! trace of an automorphism on rational cohomology computed from the
//! Stanley–Reisner ring modulo the linear system of parameters.

mod betti;
mod trace;

pub use betti::{signed_betti, SignedBettiTable};
pub use trace::{graded_trace, graded_trace_with, sr_cohomology_dims, GradedTrace};

use std::collections::{HashMap, HashSet};

use num::integer::Integer;
use num::ToPrimitive;
use thiserror::Error;

use crate::arith::Rational;
use crate::exec::combinations;
use crate::linalg::{inverse, rank, Matrix};
use crate::polytope::AffineInvolution;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("fan is not complete: {0}")]
    IncompleteFan(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("trace {trace} in degree {degree} does not split a {dim}-dimensional space into +1/-1 eigenspaces")]
    NonIntegralSplit { degree: usize, trace: String, dim: usize },
    #[error("invalid signed Betti table: {0}")]
    InvalidTable(String),
}

/// A complete simplicial fan: primitive integral rays and maximal cones
/// given as sorted `n`-element sets of ray indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialFan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

impl SimplicialFan {
    /// Validates ray shapes and primitivity, that every maximal cone is
    /// simplicial of full rank, and the pseudomanifold condition (every
    /// codimension-one cone lies in exactly two maximal cones) that a
    /// complete fan satisfies. Degree bounds are re-checked by the trace.
    pub fn new(rank_n: usize, rays: Vec<Vec<i64>>, mut max_cones: Vec<Vec<usize>>) -> Result<Self, ToricError> {
        if rank_n == 0 {
            return Err(ToricError::InvalidFan("rank must be positive".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank_n {
                return Err(ToricError::InvalidFan(format!("ray {i} has length {}", r.len())));
            }
            let g = r.iter().fold(0i64, |acc, x| acc.gcd(x));
            if g != 1 {
                return Err(ToricError::InvalidFan(format!("ray {i} is not primitive")));
            }
        }
        for cone in max_cones.iter_mut() {
            cone.sort_unstable();
            let before = cone.len();
            cone.dedup();
            if cone.len() != rank_n || before != rank_n {
                return Err(ToricError::InvalidFan(format!(
                    "cone {cone:?} does not have {rank_n} distinct rays"
                )));
            }
            if let Some(&bad) = cone.iter().find(|&&i| i >= rays.len()) {
                return Err(ToricError::InvalidFan(format!("cone refers to missing ray {bad}")));
            }
            let m: Matrix = cone.iter().map(|&i| to_q(&rays[i])).collect();
            if rank(&m) != rank_n {
                return Err(ToricError::InvalidFan(format!("cone {cone:?} is not full-dimensional")));
            }
        }
        max_cones.sort();
        if max_cones.windows(2).any(|w| w[0] == w[1]) {
            return Err(ToricError::InvalidFan("duplicate maximal cone".into()));
        }
        let mut used = vec![false; rays.len()];
        max_cones.iter().flatten().for_each(|&i| used[i] = true);
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(ToricError::InvalidFan(format!("ray {i} lies in no cone")));
        }
        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        for cone in &max_cones {
            for drop in 0..rank_n {
                let ridge: Vec<usize> = cone
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != drop)
                    .map(|(_, &v)| v)
                    .collect();
                *ridge_count.entry(ridge).or_default() += 1;
            }
        }
        if let Some((ridge, c)) = ridge_count.iter().find(|(_, &c)| c != 2) {
            return Err(ToricError::IncompleteFan(format!(
                "cone {ridge:?} lies in {c} maximal cones"
            )));
        }
        Ok(SimplicialFan {
            rank: rank_n,
            rays,
            max_cones,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Every cone of the fan (faces of maximal cones, including `{}`).
    pub fn cones(&self) -> HashSet<Vec<usize>> {
        let mut out = HashSet::new();
        for cone in &self.max_cones {
            for k in 0..=cone.len() {
                for sub in combinations(cone.len(), k) {
                    out.insert(sub.iter().map(|&i| cone[i]).collect());
                }
            }
        }
        out
    }

    /// Image under a lattice automorphism `g` (rays `u -> g u`).
    pub fn transform(&self, g: &[Vec<i64>]) -> Result<Self, ToricError> {
        let rays = self.rays.iter().map(|r| int_mat_vec(g, r)).collect();
        SimplicialFan::new(self.rank, rays, self.max_cones.clone())
    }
}

/// An involutive lattice automorphism `psi` of a fan together with the ray
/// permutation it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanAutomorphism {
    matrix: Vec<Vec<i64>>,
    ray_permutation: Vec<usize>,
}

impl FanAutomorphism {
    pub fn new(fan: &SimplicialFan, matrix: Vec<Vec<i64>>) -> Result<Self, ToricError> {
        let n = fan.rank();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(ToricError::InvalidAutomorphism(format!("expected an {n}x{n} matrix")));
        }
        if int_mat_mul(&matrix, &matrix) != int_identity(n) {
            return Err(ToricError::InvalidAutomorphism(
                "matrix does not square to the identity".into(),
            ));
        }
        let index: HashMap<&Vec<i64>, usize> = fan.rays().iter().enumerate().map(|(i, r)| (r, i)).collect();
        let ray_permutation = fan
            .rays()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                index
                    .get(&int_mat_vec(&matrix, r))
                    .copied()
                    .ok_or_else(|| ToricError::InvalidAutomorphism(format!("image of ray {i} is not a ray")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let cones: HashSet<&Vec<usize>> = fan.max_cones().iter().collect();
        for cone in fan.max_cones() {
            let mut image: Vec<usize> = cone.iter().map(|&i| ray_permutation[i]).collect();
            image.sort_unstable();
            if !cones.contains(&image) {
                return Err(ToricError::InvalidAutomorphism(format!(
                    "image of cone {cone:?} is not a cone"
                )));
            }
        }
        Ok(FanAutomorphism {
            matrix,
            ray_permutation,
        })
    }

    pub fn identity(fan: &SimplicialFan) -> Self {
        Self::new(fan, int_identity(fan.rank())).expect("identity preserves every fan")
    }

    /// `u -> -u`; valid exactly when the fan is centrally symmetric.
    pub fn negation(fan: &SimplicialFan) -> Result<Self, ToricError> {
        let m = int_identity(fan.rank())
            .into_iter()
            .map(|r| r.into_iter().map(|x| -x).collect())
            .collect();
        Self::new(fan, m)
    }

    /// The automorphism induced on the normal fan by an involution of the
    /// moment polytope: rays transform by the transpose of its linear part.
    pub fn from_involution(fan: &SimplicialFan, inv: &AffineInvolution) -> Result<Self, ToricError> {
        let l = inv.linear();
        let n = l.len();
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let x = &l[j][i];
                        if x.is_integer() {
                            x.to_integer()
                                .to_i64()
                                .ok_or_else(|| ToricError::InvalidAutomorphism("entry overflow".into()))
                        } else {
                            Err(ToricError::InvalidAutomorphism(
                                "involution does not preserve the lattice (non-integral linear part)".into(),
                            ))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(fan, m)
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn ray_permutation(&self) -> &[usize] {
        &self.ray_permutation
    }

    /// `g psi g^{-1}` as an automorphism of `g . fan`.
    pub fn conjugate(&self, g: &[Vec<i64>], transformed: &SimplicialFan) -> Result<Self, ToricError> {
        let ginv = int_inverse(g).ok_or_else(|| ToricError::InvalidAutomorphism("g is not unimodular".into()))?;
        Self::new(transformed, int_mat_mul(&int_mat_mul(g, &self.matrix), &ginv))
    }
}

pub(crate) fn to_q(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

pub(crate) fn int_identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

pub(crate) fn int_mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub(crate) fn int_mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, br)| x * br[j]).sum())
                .collect()
        })
        .collect()
}

/// Inverse of an integer matrix when it is again integral.
pub(crate) fn int_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let q: Matrix = m.iter().map(|r| to_q(r)).collect();
    inverse(&q)?
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
                .collect::<Option<Vec<_>>>()
        })
        .collect()
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn rejects_bad_fans() {
        assert!(matches!(
            SimplicialFan::new(1, vec![vec![2], vec![-1]], vec![vec![0], vec![1]]),
            Err(ToricError::InvalidFan(_))
        ));
        // half of P^1 x P^1 is not complete
        assert!(matches!(
            SimplicialFan::new(
                2,
                vec![vec![1, 0], vec![0, 1], vec![-1, 0]],
                vec![vec![0, 1], vec![1, 2]]
            ),
            Err(ToricError::IncompleteFan(_))
        ));
        assert!(matches!(
            SimplicialFan::new(2, vec![vec![1, 0], vec![-1, 0]], vec![vec![0, 1]]),
            Err(ToricError::InvalidFan(_))
        ));
    }

    #[test]
    fn automorphism_permutes_rays() {
        let fan = p3();
        let psi = FanAutomorphism::new(&fan, vec![vec![0, -1, 1], vec![0, -1, 0], vec![1, -1, 0]]).unwrap();
        assert_eq!(psi.ray_permutation(), &[2, 3, 0, 1]);
        assert!(FanAutomorphism::negation(&fan).is_err());
        let swap = FanAutomorphism::new(&p1xp1(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(swap.ray_permutation(), &[1, 0, 3, 2]);
    }

    #[test]
    fn rejects_non_involutions() {
        let rot = vec![vec![0, -1], vec![1, 0]];
        assert!(matches!(
            FanAutomorphism::new(&p1xp1(), rot),
            Err(ToricError::InvalidAutomorphism(_))
        ));
    }

    #[test]
    fn conjugation_moves_rays() {
        let fan = p1xp1();
        let g = vec![vec![1, 1], vec![0, 1]];
        let moved = fan.transform(&g).unwrap();
        let swap = FanAutomorphism::new(&fan, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let conj = swap.conjugate(&g, &moved).unwrap();
        assert_eq!(conj.ray_permutation(), swap.ray_permutation());
        assert_eq!(fan.cones().len(), 9);
    }
}
