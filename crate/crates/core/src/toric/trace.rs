use std::collections::HashMap;

use num::{One, Signed, Zero};

use super::{FanAutomorphism, SimplicialFan, ToricError};
use crate::arith::Rational;
use crate::exec::Exec;
use crate::linalg::{Echelon, SparseVec};

/// Per complex degree `i = 0..=n`: the trace of the induced map on
/// `H^{2i}` and the dimension of `H^{2i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedTrace {
    pub traces: Vec<Rational>,
    pub dims: Vec<usize>,
}

impl GradedTrace {
    /// Checks `|trace_i| <= dim_i`, `trace_0 = trace_n = 1` and
    /// palindromicity, returning a description of the first failure.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.traces.len().saturating_sub(1);
        for (i, (t, &d)) in self.traces.iter().zip(&self.dims).enumerate() {
            if t.abs() > Rational::from_integer(d.into()) {
                return Err(format!("|trace| exceeds dimension in degree {}", 2 * i));
            }
        }
        if !self.traces[0].is_one() || !self.traces[n].is_one() {
            return Err("bottom or top trace differs from 1".into());
        }
        if (0..=n).any(|i| self.traces[i] != self.traces[n - i]) {
            return Err("traces are not palindromic".into());
        }
        Ok(())
    }

    /// Per-degree traces of the identity of a graded space.
    pub fn identity(dims: Vec<usize>) -> Self {
        GradedTrace {
            traces: dims.iter().map(|&d| Rational::from_integer(d.into())).collect(),
            dims,
        }
    }
}

type Monomial = Vec<u32>;

/// The quotient `Q[x]/(I_SR + lsop)` in one degree: a normal-form engine
/// plus the monomials that survive as a basis.
struct DegreePiece {
    index: HashMap<Monomial, usize>,
    monomials: Vec<Monomial>,
    relations: Echelon,
}

impl DegreePiece {
    fn basis(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.monomials.len()).filter(|&c| !self.relations.is_pivot(c))
    }

    fn dim(&self) -> usize {
        self.monomials.len() - self.relations.rank()
    }
}

/// Monomials of degree `d` whose support is a cone, in lexicographic order.
fn admissible_monomials(cones: &[Vec<usize>], rays: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for cone in cones {
        if d == 0 {
            if cone.is_empty() {
                out.push(vec![0; rays]);
            }
            continue;
        }
        if cone.is_empty() || (cone.len() as u32) > d {
            continue;
        }
        // exponents >= 1 on exactly the cone's rays
        let mut parts = vec![1u32; cone.len()];
        let extra = d - cone.len() as u32;
        fill(&mut parts, 0, extra, &mut |p| {
            let mut m = vec![0; rays];
            for (&v, &e) in cone.iter().zip(p) {
                m[v] = e;
            }
            out.push(m);
        });
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn fill(parts: &mut [u32], pos: usize, left: u32, emit: &mut impl FnMut(&[u32])) {
    if pos + 1 == parts.len() {
        parts[pos] += left;
        emit(parts);
        parts[pos] -= left;
        return;
    }
    for add in 0..=left {
        parts[pos] += add;
        fill(parts, pos + 1, left - add, emit);
        parts[pos] -= add;
    }
}

fn lsop_coefficients(fan: &SimplicialFan, lsop: Option<&[Vec<i64>]>) -> Vec<Vec<Rational>> {
    let n = fan.rank();
    (0..n)
        .map(|j| {
            fan.rays()
                .iter()
                .map(|u| {
                    let c: i64 = match lsop {
                        Some(g) => g[j].iter().zip(u).map(|(a, b)| a * b).sum(),
                        None => u[j],
                    };
                    Rational::from_integer(c.into())
                })
                .collect()
        })
        .collect()
}

fn degree_piece(fan: &SimplicialFan, cones: &[Vec<usize>], theta: &[Vec<Rational>], d: usize) -> DegreePiece {
    let rays = fan.rays().len();
    let monomials = admissible_monomials(cones, rays, d as u32);
    let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut relations = Echelon::new();
    if d > 0 {
        for m in admissible_monomials(cones, rays, d as u32 - 1) {
            for form in theta {
                let mut row = SparseVec::new();
                for (v, c) in form.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut prod = m.clone();
                    prod[v] += 1;
                    // products leaving every cone vanish in the SR ring
                    if let Some(&col) = index.get(&prod) {
                        row.insert(col, c.clone());
                    }
                }
                relations.insert(row);
            }
        }
    }
    DegreePiece {
        index,
        monomials,
        relations,
    }
}

fn pieces(fan: &SimplicialFan, lsop: Option<&[Vec<i64>]>, exec: Exec) -> Result<Vec<DegreePiece>, ToricError> {
    let n = fan.rank();
    if let Some(g) = lsop {
        if g.len() != n || g.iter().any(|r| r.len() != n) || super::int_inverse(g).is_none() {
            return Err(ToricError::InvalidFan("lsop change of basis must be unimodular".into()));
        }
    }
    let mut cones: Vec<Vec<usize>> = fan.cones().into_iter().collect();
    cones.sort();
    let theta = lsop_coefficients(fan, lsop);
    let mut pieces = exec.map_range(n + 2, |d| degree_piece(fan, &cones, &theta, d));
    let top = pieces.pop().expect("n + 2 pieces");
    if top.dim() != 0 || pieces[n].dim() != 1 {
        return Err(ToricError::IncompleteFan(format!(
            "quotient has dimension {} in degree {} and {} above it",
            pieces[n].dim(),
            2 * n,
            top.dim()
        )));
    }
    Ok(pieces)
}

/// Dimensions of `H^{2i}` for `i = 0..=n` from the Stanley–Reisner
/// presentation.
pub fn sr_cohomology_dims(fan: &SimplicialFan) -> Result<Vec<usize>, ToricError> {
    Ok(pieces(fan, None, Exec::default())?
        .iter()
        .map(DegreePiece::dim)
        .collect())
}

pub fn graded_trace(fan: &SimplicialFan, psi: &FanAutomorphism) -> Result<GradedTrace, ToricError> {
    graded_trace_with(fan, psi, None, Exec::default())
}

/// Graded trace of `x_v -> x_{psi(v)}`. The linear forms are
/// `sum_v (g u_v)_j x_v`, with `g` the identity when `lsop` is `None`.
pub fn graded_trace_with(
    fan: &SimplicialFan,
    psi: &FanAutomorphism,
    lsop: Option<&[Vec<i64>]>,
    exec: Exec,
) -> Result<GradedTrace, ToricError> {
    if psi.ray_permutation().len() != fan.rays().len() {
        return Err(ToricError::InvalidAutomorphism(
            "automorphism belongs to a different fan".into(),
        ));
    }
    let sigma = psi.ray_permutation();
    let pieces = pieces(fan, lsop, exec)?;
    let traces = exec.map(&pieces, |piece| {
        piece
            .basis()
            .map(|b| {
                let src = &piece.monomials[b];
                let mut image = vec![0; src.len()];
                for (v, &e) in src.iter().enumerate() {
                    image[sigma[v]] = e;
                }
                let col = piece.index[&image];
                let nf = piece.relations.reduce(SparseVec::from([(col, Rational::one())]));
                nf.get(&b).cloned().unwrap_or_else(Rational::zero)
            })
            .sum::<Rational>()
    });
    Ok(GradedTrace {
        traces,
        dims: pieces.iter().map(DegreePiece::dim).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::polytope::fixtures::{cube, hexagon, simplex3};
    use crate::polytope::normal_fan;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn dims_match_h_vectors() {
        assert_eq!(sr_cohomology_dims(&p3()).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(sr_cohomology_dims(&p1xp1()).unwrap(), vec![1, 2, 1]);
        assert_eq!(
            sr_cohomology_dims(&normal_fan(&hexagon()).unwrap()).unwrap(),
            vec![1, 4, 1]
        );
        assert_eq!(
            sr_cohomology_dims(&normal_fan(&cube(3)).unwrap()).unwrap(),
            vec![1, 3, 3, 1]
        );
    }

    #[test]
    fn p1_negation() {
        let fan = p1();
        let t = graded_trace(&fan, &FanAutomorphism::negation(&fan).unwrap()).unwrap();
        assert_eq!(t.traces, qs(&[1, 1]));
    }

    #[test]
    fn p3_with_reflection() {
        let fan = p3();
        let psi = FanAutomorphism::new(&fan, vec![vec![0, -1, 1], vec![0, -1, 0], vec![1, -1, 0]]).unwrap();
        let t = graded_trace(&fan, &psi).unwrap();
        assert_eq!(t.traces, qs(&[1, 1, 1, 1]));
        t.check_invariants().unwrap();
    }

    #[test]
    fn p1xp1_swap() {
        let fan = p1xp1();
        let psi = FanAutomorphism::new(&fan, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let t = graded_trace(&fan, &psi).unwrap();
        assert_eq!(t.traces, qs(&[1, 0, 1]));
        assert_eq!(t.dims, vec![1, 2, 1]);
    }

    #[test]
    fn identity_gives_dims() {
        for fan in [p3(), p1xp1(), normal_fan(&hexagon()).unwrap()] {
            let t = graded_trace(&fan, &FanAutomorphism::identity(&fan)).unwrap();
            assert_eq!(t, GradedTrace::identity(t.dims.clone()));
        }
    }

    #[test]
    fn negation_on_hexagon_and_cube() {
        let fan = normal_fan(&hexagon()).unwrap();
        let t = graded_trace(&fan, &FanAutomorphism::negation(&fan).unwrap()).unwrap();
        assert_eq!(t.traces, qs(&[1, 2, 1]));
        let fan = normal_fan(&cube(3)).unwrap();
        let t = graded_trace(&fan, &FanAutomorphism::negation(&fan).unwrap()).unwrap();
        // H^2 = span of three independent divisor classes, each negated pair identified
        assert_eq!(t.traces, qs(&[1, 3, 3, 1]));
    }

    #[test]
    fn lsop_choice_and_exec_mode_do_not_matter() {
        let fan = normal_fan(&simplex3()).unwrap();
        let psi = FanAutomorphism::new(&fan, vec![vec![0, -1, 1], vec![0, -1, 0], vec![1, -1, 0]]).unwrap();
        let g = vec![vec![1, 2, 0], vec![0, 1, 0], vec![3, 1, 1]];
        let a = graded_trace_with(&fan, &psi, None, Exec::Sequential).unwrap();
        let b = graded_trace_with(&fan, &psi, Some(&g), Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let bad = vec![vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert!(graded_trace_with(&fan, &psi, Some(&bad), Exec::Sequential).is_err());
    }

    #[test]
    fn monomial_enumeration() {
        let cones: Vec<Vec<usize>> = vec![vec![], vec![0], vec![1], vec![0, 1]];
        let m = admissible_monomials(&cones, 2, 2);
        assert_eq!(m, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(admissible_monomials(&cones, 2, 0), vec![vec![0, 0]]);
    }
}
