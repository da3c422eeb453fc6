//! Graded characters of the involution: the manifold side (equivariant
//! cohomology divided out by the torus), the reduction side, the identity
//! linking them, and the eigenspace splitting of equivariant Poincaré series.

use std::fmt;

use num::{BigInt, ToPrimitive};
use thiserror::Error;

use crate::arith::{binomial, exact_divide, ArithError, Poly, Rational, RationalFunction};
use crate::toric::SignedBettiTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("torus rank must be positive")]
    InvalidRank,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("identity violated in degree {degree}: {lhs} != {rhs}")]
    IdentityViolated { degree: usize, lhs: String, rhs: String },
}

/// Rank `k >= 1` of the acting torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusRank(u32);

impl TorusRank {
    pub fn new(k: u32) -> Result<Self, CharacterError> {
        if k == 0 {
            Err(CharacterError::InvalidRank)
        } else {
            Ok(TorusRank(k))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// `chi_theta(t)` as an exact rational function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub value: RationalFunction,
}

impl Character {
    pub fn as_poly(&self) -> Option<&Poly> {
        self.value.as_poly()
    }

    pub fn at_zero(&self) -> Option<Rational> {
        self.value.value_at_zero()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_poly() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "{}", self.value),
        }
    }
}

fn one_plus_t2_pow(k: u32) -> Poly {
    Poly::binomial_factor(1, 2).pow(k)
}

fn one_minus_t2_pow(k: u32) -> Poly {
    Poly::binomial_factor(-1, 2).pow(k)
}

/// Character of the involution on `H*(BT)`, where it negates every
/// degree-two generator: `1 / (1 + t^2)^k`.
pub fn bt_theta_character(k: TorusRank) -> Character {
    Character {
        value: RationalFunction::recip_of(&one_plus_t2_pow(k.get())).expect("nonzero"),
    }
}

/// `sum_i (h^{i,+} - h^{i,-}) t^i / (1 + t^2)^k`.
pub fn chi_from_manifold(table: &SignedBettiTable, k: TorusRank) -> Character {
    Character {
        value: RationalFunction::new(table.signed_poly(), one_plus_t2_pow(k.get())).expect("nonzero"),
    }
}

/// `sum_i (h_0^{i,+} - h_0^{i,-}) t^i`.
pub fn chi_from_reduction(table0: &SignedBettiTable) -> Character {
    Character {
        value: RationalFunction::from_poly(table0.signed_poly()),
    }
}

/// One degree of a coefficientwise comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRow {
    pub degree: usize,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl IdentityRow {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Degree-by-degree comparison of two integer sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub rows: Vec<IdentityRow>,
}

impl IdentityReport {
    fn from_sides(lhs: &Poly, rhs: &Poly, top: usize) -> Self {
        let rows = (0..=top)
            .map(|degree| IdentityRow {
                degree,
                lhs: lhs.coeff(degree).to_integer(),
                rhs: rhs.coeff(degree).to_integer(),
            })
            .collect();
        IdentityReport { rows }
    }

    pub fn first_violation(&self) -> Option<&IdentityRow> {
        self.rows.iter().find(|r| !r.holds())
    }

    pub fn holds(&self) -> bool {
        self.first_violation().is_none()
    }

    pub fn lhs(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r.lhs.to_i64().unwrap_or(i64::MAX)).collect()
    }

    pub fn rhs(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r.rhs.to_i64().unwrap_or(i64::MAX)).collect()
    }

    pub fn into_result(self) -> Result<Self, CharacterError> {
        match self.first_violation() {
            None => Ok(self),
            Some(r) => Err(CharacterError::IdentityViolated {
                degree: r.degree,
                lhs: r.lhs.to_string(),
                rhs: r.rhs.to_string(),
            }),
        }
    }
}

/// Compares `h^{i,+} - h^{i,-}` with
/// `sum_{j <= min(k, i/2)} C(k, j) (h_0^{i-2j,+} - h_0^{i-2j,-})` in every
/// degree. Equivalent to `chi_from_manifold = chi_from_reduction`.
pub fn verify_main_identity(table: &SignedBettiTable, table0: &SignedBettiTable, k: TorusRank) -> IdentityReport {
    let lhs = table.signed_poly();
    let rhs = &table0.signed_poly() * &one_plus_t2_pow(k.get());
    let top = table.top_degree().max(table0.top_degree() + 2 * k.get() as usize);
    IdentityReport::from_sides(&lhs, &rhs, top)
}

/// The signed-difference polynomial of the reduction, obtained by dividing
/// the manifold's by `(1 + t^2)^k`.
pub fn solve_reduction_signature(table: &SignedBettiTable, k: TorusRank) -> Result<Poly, CharacterError> {
    Ok(exact_divide(&table.signed_poly(), &one_plus_t2_pow(k.get()))?)
}

/// `h^{2i,+} - h^{2i,-} = C(n, i)` and vanishing odd differences.
pub fn stanley_check(table: &SignedBettiTable, n: usize) -> IdentityReport {
    let expected = Poly::from_coeffs(
        (0..=2 * n)
            .map(|i| {
                if i % 2 == 0 {
                    Rational::from_integer(binomial(n as u64, (i / 2) as u64))
                } else {
                    Rational::from_integer(0.into())
                }
            })
            .collect(),
    );
    IdentityReport::from_sides(&table.signed_poly(), &expected, table.top_degree().max(2 * n))
}

/// `(sum_i t^i dim H_T^i(M)^+, sum_i t^i dim H_T^i(M)^-)`, using that
/// `H_T = H (x) H(BT)` with the involution acting by `(-1)^d` on
/// `H^{2d}(BT)`.
pub fn equivariant_split(table: &SignedBettiTable, k: TorusRank) -> (RationalFunction, RationalFunction) {
    let k = k.get();
    let b = RationalFunction::recip_of(&one_minus_t2_pow(k)).expect("nonzero");
    let b_alt = RationalFunction::recip_of(&one_plus_t2_pow(k)).expect("nonzero");
    let half = Rational::new(1.into(), 2.into());
    let b_plus = (&b + &b_alt).scale(&half);
    let b_minus = (&b - &b_alt).scale(&half);
    let p_plus = RationalFunction::from_poly(table.plus_poly());
    let p_minus = RationalFunction::from_poly(table.minus_poly());
    let plus = &(&p_plus * &b_plus) + &(&p_minus * &b_minus);
    let minus = &(&p_plus * &b_minus) + &(&p_minus * &b_plus);
    (plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(v: u32) -> TorusRank {
        TorusRank::new(v).unwrap()
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(p(num), p(den)).unwrap()
    }

    fn cp3() -> SignedBettiTable {
        SignedBettiTable::new(vec![(1, 0), (0, 0), (1, 0), (0, 0), (1, 0), (0, 0), (1, 0)]).unwrap()
    }

    fn swap() -> SignedBettiTable {
        SignedBettiTable::new(vec![(1, 0), (0, 0), (1, 1), (0, 0), (1, 0)]).unwrap()
    }

    /// Coefficients of the BT character by direct monomial counting:
    /// `(-1)^d C(d + k - 1, k - 1)` in degree `2d`.
    fn bt_oracle(k: u32, d_max: usize) -> Poly {
        let mut c = vec![0i64; 2 * d_max + 1];
        for d in 0..=d_max {
            let count = binomial((d as u64) + k as u64 - 1, k as u64 - 1).to_i64().unwrap();
            c[2 * d] = if d % 2 == 0 { count } else { -count };
        }
        p(&c)
    }

    #[test]
    fn bt_character() {
        assert_eq!(bt_theta_character(k(1)).value, rf(&[1], &[1, 0, 1]));
        for r in 1..=4 {
            let s = bt_theta_character(k(r)).value.series(12).unwrap();
            assert_eq!(s, bt_oracle(r, 6));
            assert_eq!(
                bt_theta_character(k(r)).at_zero(),
                Some(Rational::from_integer(1.into()))
            );
        }
        assert_eq!(bt_theta_character(k(2)).value.series(4).unwrap(), p(&[1, 0, -2, 0, 3]));
        assert!(TorusRank::new(0).is_err());
    }

    #[test]
    fn manifold_side() {
        assert_eq!(chi_from_manifold(&cp3(), k(1)).as_poly(), Some(&p(&[1, 0, 0, 0, 1])));
        let cube = SignedBettiTable::new(vec![(1, 0), (0, 0), (3, 0), (0, 0), (3, 0), (0, 0), (1, 0)]).unwrap();
        assert_eq!(chi_from_manifold(&cube, k(3)).as_poly(), Some(&Poly::one()));
        assert_eq!(
            chi_from_manifold(&SignedBettiTable::point(), k(2)),
            bt_theta_character(k(2))
        );
        // multiplying back recovers the signed polynomial
        let back = &chi_from_manifold(&swap(), k(2)).value * &RationalFunction::from_poly(one_plus_t2_pow(2));
        assert_eq!(back.as_poly(), Some(&swap().signed_poly()));
    }

    #[test]
    fn reduction_side() {
        assert_eq!(
            chi_from_reduction(&SignedBettiTable::point()).as_poly(),
            Some(&Poly::one())
        );
        assert_eq!(chi_from_reduction(&swap()).as_poly(), Some(&p(&[1, 0, 0, 0, 1])));
    }

    #[test]
    fn main_identity_cp3() {
        let r = verify_main_identity(&cp3(), &swap(), k(1));
        assert!(r.holds());
        assert_eq!(r.lhs(), vec![1, 0, 1, 0, 1, 0, 1]);
        let reversed = verify_main_identity(&cp3().reversed(), &swap().reversed(), k(1));
        assert!(reversed.holds());
    }

    #[test]
    fn main_identity_fault() {
        let mut e = swap().entries().to_vec();
        e[2].0 += 1;
        let bad = SignedBettiTable::new(e).unwrap();
        let r = verify_main_identity(&cp3(), &bad, k(1));
        assert_eq!(r.first_violation().unwrap().degree, 2);
        assert!(matches!(
            r.into_result(),
            Err(CharacterError::IdentityViolated { degree: 2, .. })
        ));
    }

    #[test]
    fn stanley_as_main_identity() {
        let cube = SignedBettiTable::new(vec![(1, 0), (0, 0), (3, 0), (0, 0), (3, 0), (0, 0), (1, 0)]).unwrap();
        assert!(verify_main_identity(&cube, &SignedBettiTable::point(), k(3)).holds());
        assert!(stanley_check(&cube, 3).holds());
        let hex = SignedBettiTable::new(vec![(1, 0), (0, 0), (3, 1), (0, 0), (1, 0)]).unwrap();
        assert!(stanley_check(&hex, 2).holds());
        assert!(!stanley_check(&hex, 3).holds());
        assert!(stanley_check(&SignedBettiTable::new(vec![(1, 0), (0, 0), (1, 0)]).unwrap(), 1).holds());
    }

    #[test]
    fn reduction_signatures() {
        let flag3 = SignedBettiTable::new(vec![(1, 0), (0, 0), (1, 1), (0, 0), (1, 1), (0, 0), (1, 0)]).unwrap();
        assert_eq!(solve_reduction_signature(&flag3, k(1)).unwrap(), p(&[1, 0, -1, 0, 1]));
        assert_eq!(solve_reduction_signature(&cp3(), k(1)).unwrap(), p(&[1, 0, 0, 0, 1]));
        let bad = SignedBettiTable::new(vec![(1, 0), (0, 0), (0, 0), (0, 0), (1, 0)]).unwrap();
        assert!(matches!(
            solve_reduction_signature(&bad, k(1)),
            Err(CharacterError::Arith(ArithError::NotDivisible { .. }))
        ));
    }

    #[test]
    fn split_cp3_and_point() {
        let (plus, minus) = equivariant_split(&cp3(), k(1));
        assert_eq!(plus, rf(&[1, 0, 0, 0, 1], &[1, 0, -1]));
        assert_eq!(minus, rf(&[0, 0, 1, 0, 0, 0, 1], &[1, 0, -1]));
        let (plus, minus) = equivariant_split(&SignedBettiTable::point(), k(1));
        assert_eq!(plus, rf(&[1], &[1, 0, 0, 0, -1]));
        assert_eq!(minus, rf(&[0, 0, 1], &[1, 0, 0, 0, -1]));
    }

    #[test]
    fn split_sums_to_equivariant_poincare_series() {
        for (t, r) in [(cp3(), 1), (swap(), 2), (SignedBettiTable::point(), 3)] {
            let (plus, minus) = equivariant_split(&t, k(r));
            let total = RationalFunction::new(t.betti_poly(), one_minus_t2_pow(r)).unwrap();
            assert_eq!(&plus + &minus, total);
            // the difference is the manifold-side character
            let diff = RationalFunction::new(t.signed_poly(), one_plus_t2_pow(r)).unwrap();
            assert_eq!(&plus - &minus, diff);
        }
    }
}
