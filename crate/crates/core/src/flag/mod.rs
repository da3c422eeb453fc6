//! Complete flags in `C^n` as the coinvariant algebra
//! `Q[x_1..x_n]/(e_1..e_n)`, the involution `A -> -A^t` acting by the signed
//! reversal `x_i -> -x_{n+1-i}`, and the reduction signature it predicts.

mod moment;

pub use moment::check_moment_compat;

use std::collections::BTreeMap;

use num::{One, Zero};
use thiserror::Error;

use crate::arith::{Poly, Rational, RationalFunction};
use crate::characters::{solve_reduction_signature, CharacterError, TorusRank};
use crate::exec::Exec;
use crate::toric::{signed_betti, GradedTrace, SignedBettiTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlagError {
    #[error("invalid flag specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("trace does not split into eigenspaces: {0}")]
    Split(String),
}

/// Coadjoint orbit data: a spectrum symmetric under negation with distinct
/// entries, and distinct circle weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagSpec {
    n: usize,
    spectrum: Vec<Rational>,
    weights: Vec<Rational>,
}

impl FlagSpec {
    pub fn new(spectrum: Vec<Rational>, weights: Vec<Rational>) -> Result<Self, FlagError> {
        let n = spectrum.len();
        if n < 2 {
            return Err(FlagError::InvalidSpec(format!("n must be at least 2, got {n}")));
        }
        if weights.len() != n {
            return Err(FlagError::InvalidSpec(format!(
                "{n} eigenvalues but {} weights",
                weights.len()
            )));
        }
        let mut sorted = spectrum.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(FlagError::InvalidSpec("eigenvalues must be mutually distinct".into()));
        }
        let mut negated: Vec<Rational> = spectrum.iter().map(|x| -x).collect();
        negated.sort();
        if negated != sorted {
            return Err(FlagError::InvalidSpec(
                "spectrum is not symmetric under negation".into(),
            ));
        }
        let mut w = weights.clone();
        w.sort();
        if w.windows(2).any(|p| p[0] == p[1]) {
            return Err(FlagError::InvalidSpec("weights must be pairwise distinct".into()));
        }
        Ok(FlagSpec { n, spectrum, weights })
    }

    /// Spectrum `n-1, n-3, ..., 1-n` and weights `1..n`.
    pub fn standard(n: usize) -> Result<Self, FlagError> {
        let spectrum = (0..n)
            .map(|i| Rational::from_integer((n as i64 - 1 - 2 * i as i64).into()))
            .collect();
        let weights = (1..=n).map(|i| Rational::from_integer((i as i64).into())).collect();
        Self::new(spectrum, weights)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spectrum(&self) -> &[Rational] {
        &self.spectrum
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }
}

fn require_n(n: usize) -> Result<(), FlagError> {
    if n < 2 {
        Err(FlagError::InvalidSpec(format!("n must be at least 2, got {n}")))
    } else {
        Ok(())
    }
}

/// Dimensions of the coinvariant algebra in polynomial degrees
/// `0..=n(n-1)/2`: coefficients of `prod_j (1 + q + ... + q^{j-1})`.
pub fn coinvariant_dims(n: usize) -> Vec<usize> {
    let mut dims = vec![1usize];
    for j in 1..=n {
        let mut next = vec![0; dims.len() + j - 1];
        for (i, &d) in dims.iter().enumerate() {
            for s in 0..j {
                next[i + s] += d;
            }
        }
        dims = next;
    }
    dims
}

/// The linear substitution `x_i -> signs[i] x_{perm[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self, FlagError> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(FlagError::InvalidSpec("not a permutation".into()));
            }
        }
        if signs.len() != perm.len() || signs.iter().any(|s| s.abs() != 1) {
            return Err(FlagError::InvalidSpec("signs must be +1 or -1".into()));
        }
        Ok(SignedPermutation { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// `x_i -> -x_{n+1-i}`.
    pub fn theta(n: usize) -> Self {
        SignedPermutation {
            perm: (0..n).rev().collect(),
            signs: vec![-1; n],
        }
    }

    fn apply(&self, m: &[u8]) -> (Vec<u8>, bool) {
        let mut out = vec![0; m.len()];
        let mut negative = false;
        for (i, &e) in m.iter().enumerate() {
            out[self.perm[i]] = e;
            negative ^= self.signs[i] < 0 && e % 2 == 1;
        }
        (out, negative)
    }

    /// `det(1 - s phi)` with `s = t^2`: a factor `1 - eps s^l` per cycle of
    /// length `l` whose signs multiply to `eps`.
    fn char_poly_in_t2(&self) -> Poly {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut out = Poly::one();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let (mut len, mut eps, mut i) = (0, 1i64, start);
            while !seen[i] {
                seen[i] = true;
                eps *= self.signs[i] as i64;
                len += 1;
                i = self.perm[i];
            }
            out = &out * &Poly::binomial_factor(-eps, 2 * len);
        }
        out
    }
}

/// Sparse polynomial keyed by exponent vectors reversed, so the map's order
/// is lex with `x_n` largest.
type SparsePoly = BTreeMap<Vec<u8>, Rational>;

fn key(m: &[u8]) -> Vec<u8> {
    m.iter().rev().copied().collect()
}

fn unkey(k: &[u8]) -> Vec<u8> {
    k.iter().rev().copied().collect()
}

/// Gröbner basis of the symmetric ideal in lex order `x_n > ... > x_1`:
/// `g_i = h_{n-i+1}(x_1..x_i)` with leading term `x_i^{n-i+1}`. Stored as
/// the tail `g_i - x_i^{n-i+1}`.
struct Reducer {
    n: usize,
    tails: Vec<Vec<Vec<u8>>>,
}

impl Reducer {
    fn new(n: usize) -> Self {
        let tails = (0..n)
            .map(|i| {
                let d = (n - i) as u8;
                let mut out = Vec::new();
                let mut m = vec![0u8; n];
                monomials_in(&mut m, 0, i + 1, d, &mut out);
                out.retain(|m| m[i] != d);
                out
            })
            .collect();
        Reducer { n, tails }
    }

    fn bound(&self, i: usize) -> u8 {
        (self.n - i) as u8
    }

    fn normal_form(&self, start: &[u8], coef: Rational) -> SparsePoly {
        let mut work: SparsePoly = BTreeMap::from([(key(start), coef)]);
        let mut done = SparsePoly::new();
        while let Some((k, c)) = work.pop_last() {
            let m = unkey(&k);
            match (0..self.n).rev().find(|&i| m[i] >= self.bound(i)) {
                None => {
                    done.insert(k, c);
                }
                Some(i) => {
                    let mut base = m.clone();
                    base[i] -= self.bound(i);
                    for t in &self.tails[i] {
                        let prod: Vec<u8> = base.iter().zip(t).map(|(a, b)| a + b).collect();
                        let e = work.entry(key(&prod)).or_insert_with(Rational::zero);
                        *e -= &c;
                        if e.is_zero() {
                            work.remove(&key(&prod));
                        }
                    }
                }
            }
        }
        done
    }
}

/// All monomials of degree `d` in the first `vars` variables.
fn monomials_in(m: &mut Vec<u8>, pos: usize, vars: usize, d: u8, out: &mut Vec<Vec<u8>>) {
    if pos + 1 == vars {
        m[pos] = d;
        out.push(m.clone());
        m[pos] = 0;
        return;
    }
    for e in 0..=d {
        m[pos] = e;
        monomials_in(m, pos + 1, vars, d - e, out);
    }
    m[pos] = 0;
}

/// Staircase monomials `a_i <= n - i` (1-indexed) of polynomial degree `d`.
fn staircase(n: usize, d: usize) -> Vec<Vec<u8>> {
    fn go(n: usize, pos: usize, left: usize, m: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if pos == n {
            if left == 0 {
                out.push(m.clone());
            }
            return;
        }
        for e in 0..=left.min(n - 1 - pos) {
            m[pos] = e as u8;
            go(n, pos + 1, left - e, m, out);
        }
        m[pos] = 0;
    }
    let mut out = Vec::new();
    go(n, 0, d, &mut vec![0; n], &mut out);
    out
}

/// Graded trace of a signed permutation of the variables on the
/// coinvariant algebra, one entry per polynomial degree.
pub fn coinvariant_trace(n: usize, phi: &SignedPermutation, exec: Exec) -> Result<GradedTrace, FlagError> {
    require_n(n)?;
    if phi.perm.len() != n {
        return Err(FlagError::InvalidSpec(
            "substitution has the wrong number of variables".into(),
        ));
    }
    let reducer = Reducer::new(n);
    let top = n * (n - 1) / 2;
    let per_degree = exec.map_range(top + 1, |d| {
        let basis = staircase(n, d);
        let trace: Rational = basis
            .iter()
            .map(|b| {
                let (image, negative) = phi.apply(b);
                let coef = if negative { -Rational::one() } else { Rational::one() };
                reducer
                    .normal_form(&image, coef)
                    .remove(&key(b))
                    .unwrap_or_else(Rational::zero)
            })
            .sum();
        (trace, basis.len())
    });
    Ok(GradedTrace {
        traces: per_degree.iter().map(|p| p.0.clone()).collect(),
        dims: per_degree.iter().map(|p| p.1).collect(),
    })
}

/// Graded trace of the involution induced by `A -> -A^t`.
pub fn theta_trace(n: usize) -> Result<GradedTrace, FlagError> {
    coinvariant_trace(n, &SignedPermutation::theta(n), Exec::default())
}

/// `sum_m trace_m t^{2m}`.
pub fn trace_poly(trace: &GradedTrace) -> Poly {
    let mut c = vec![Rational::zero(); 2 * trace.traces.len()];
    for (m, t) in trace.traces.iter().enumerate() {
        c[2 * m] = t.clone();
    }
    Poly::from_coeffs(c)
}

/// Molien quotient: the trace series of `phi` on the polynomial ring,
/// `1 / det(1 - t^2 phi)`, divided by its trace series on the invariants,
/// `prod_j 1 / (1 - (-1)^j t^{2j})` when `phi(e_j) = (-1)^j e_j`.
pub fn molien_oracle(n: usize, phi: &SignedPermutation, invariant_signs: &[i64]) -> RationalFunction {
    let invariants = (1..=n).fold(Poly::one(), |acc, j| {
        &acc * &Poly::binomial_factor(-invariant_signs[j - 1], 2 * j)
    });
    RationalFunction::new(invariants, phi.char_poly_in_t2()).expect("nonzero")
}

/// Molien oracle for the reversal involution, where `e_j -> (-1)^j e_j`.
pub fn theta_molien(n: usize) -> RationalFunction {
    let signs: Vec<i64> = (1..=n).map(|j| if j % 2 == 0 { 1 } else { -1 }).collect();
    molien_oracle(n, &SignedPermutation::theta(n), &signs)
}

/// Signed Betti table of the flag manifold under the involution.
pub fn theta_table(n: usize) -> Result<SignedBettiTable, FlagError> {
    signed_betti(&theta_trace(n)?).map_err(|e| FlagError::Split(e.to_string()))
}

/// Predicted signed-difference polynomial of the circle reduction.
pub fn predict_reduction_signature(n: usize) -> Result<Poly, FlagError> {
    let table = theta_table(n)?;
    Ok(solve_reduction_signature(&table, TorusRank::new(1).expect("positive"))?)
}
