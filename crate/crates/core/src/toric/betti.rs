use std::fmt;

use num::{Integer, Signed, ToPrimitive};

use super::{GradedTrace, ToricError};
use crate::arith::{Poly, Rational};

/// `(h^{i,+}, h^{i,-})` for every cohomological degree `i = 0..=2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedBettiTable {
    entries: Vec<(u64, u64)>,
}

impl SignedBettiTable {
    pub fn new(entries: Vec<(u64, u64)>) -> Result<Self, ToricError> {
        if entries.is_empty() {
            return Err(ToricError::InvalidTable("table has no degrees".into()));
        }
        Ok(SignedBettiTable { entries })
    }

    /// The table of a point: `h^{0,+} = 1`.
    pub fn point() -> Self {
        SignedBettiTable { entries: vec![(1, 0)] }
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    pub fn top_degree(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn get(&self, i: usize) -> (u64, u64) {
        self.entries.get(i).copied().unwrap_or((0, 0))
    }

    pub fn signed_diffs(&self) -> Vec<i64> {
        self.entries.iter().map(|&(p, m)| p as i64 - m as i64).collect()
    }

    /// `sum_i (h^{i,+} - h^{i,-}) t^i`.
    pub fn signed_poly(&self) -> Poly {
        Poly::from_ints(&self.signed_diffs())
    }

    pub fn plus_poly(&self) -> Poly {
        Poly::from_ints(&self.entries.iter().map(|e| e.0 as i64).collect::<Vec<_>>())
    }

    pub fn minus_poly(&self) -> Poly {
        Poly::from_ints(&self.entries.iter().map(|e| e.1 as i64).collect::<Vec<_>>())
    }

    /// Ordinary Poincaré polynomial.
    pub fn betti_poly(&self) -> Poly {
        &self.plus_poly() + &self.minus_poly()
    }

    pub fn is_palindromic(&self) -> bool {
        let d = self.signed_diffs();
        d.iter().eq(d.iter().rev())
    }

    /// Reverses the degrees (`i -> top - i`).
    pub fn reversed(&self) -> Self {
        SignedBettiTable {
            entries: self.entries.iter().rev().copied().collect(),
        }
    }
}

impl fmt::Display for SignedBettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, m)) in self.entries.iter().enumerate() {
            writeln!(f, "{i} {p} {m}")?;
        }
        Ok(())
    }
}

/// Splits each `H^{2i}` into `+1` and `-1` eigenspaces:
/// `h^{2i,+-} = (dim_i +- trace_i) / 2`, odd degrees zero.
pub fn signed_betti(trace: &GradedTrace) -> Result<SignedBettiTable, ToricError> {
    let mut entries = Vec::with_capacity(2 * trace.dims.len());
    for (i, (t, &d)) in trace.traces.iter().zip(&trace.dims).enumerate() {
        let split = |s: &Rational| -> Option<u64> {
            let v = s / Rational::from_integer(2.into());
            if !v.is_integer() || v.is_negative() {
                return None;
            }
            v.to_integer().to_u64()
        };
        let dim = Rational::from_integer(d.into());
        let err = || ToricError::NonIntegralSplit {
            degree: 2 * i,
            trace: t.to_string(),
            dim: d,
        };
        let plus = split(&(&dim + t)).ok_or_else(err)?;
        let minus = split(&(&dim - t)).ok_or_else(err)?;
        if i > 0 {
            entries.push((0, 0));
        }
        entries.push((plus, minus));
    }
    debug_assert!(entries.len().is_odd());
    SignedBettiTable::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gt(traces: &[i64], dims: &[usize]) -> GradedTrace {
        GradedTrace {
            traces: traces.iter().map(|&t| Rational::from_integer(t.into())).collect(),
            dims: dims.to_vec(),
        }
    }

    #[test]
    fn splits_swap() {
        let t = signed_betti(&gt(&[1, 0, 1], &[1, 2, 1])).unwrap();
        assert_eq!(t.entries(), &[(1, 0), (0, 0), (1, 1), (0, 0), (1, 0)]);
        assert_eq!(t.signed_diffs(), vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn identity_has_no_minus_part() {
        let t = signed_betti(&GradedTrace::identity(vec![1, 3, 3, 1])).unwrap();
        assert!(t.entries().iter().all(|e| e.1 == 0));
        assert_eq!(t.betti_poly(), Poly::from_ints(&[1, 0, 3, 0, 3, 0, 1]));
    }

    #[test]
    fn cp3_table() {
        let t = signed_betti(&gt(&[1, 1, 1, 1], &[1, 1, 1, 1])).unwrap();
        assert_eq!(t.signed_poly(), Poly::from_ints(&[1, 0, 1, 0, 1, 0, 1]));
        assert!(t.is_palindromic());
    }

    #[test]
    fn rejects_bad_traces() {
        assert!(matches!(
            signed_betti(&gt(&[1, 1, 1], &[1, 2, 1])),
            Err(ToricError::NonIntegralSplit { degree: 2, .. })
        ));
        assert!(signed_betti(&gt(&[1, 3, 1], &[1, 2, 1])).is_err());
    }
}
