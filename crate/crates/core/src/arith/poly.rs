use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use super::rational::{format_rational, int, parse_rational};
use super::{ArithError, ArithOp, Rational};

/// Univariate polynomial in `t` with rational coefficients.
///
/// Coefficients are indexed by degree and never carry a trailing zero, so
/// the zero polynomial is the empty list and structural equality is
/// mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * t^deg`.
    pub fn monomial(c: Rational, deg: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); deg + 1];
        coeffs[deg] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// `1 + s t^deg` for an integer sign/scale `s`.
    pub fn binomial_factor(s: i64, deg: usize) -> Self {
        &Self::one() + &Self::monomial(int(s), deg)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn shift(&self, by: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); by];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Keeps the terms of degree `<= order`.
    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(order + 1).cloned().collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => Self::zero(),
        }
    }

    /// Euclidean division; `None` when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> Option<(Poly, Poly)> {
        let dd = divisor.degree()?;
        let lc = divisor.leading()?.clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Some((Poly::zero(), Poly::zero()));
        };
        if nd < dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for shift in (0..=nd - dd).rev() {
            let c = &rem[shift + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &c * d;
            }
            quot[shift] = c;
        }
        rem.truncate(dd);
        Some((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// True when the list of coefficients reads the same in both directions.
    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    pub fn has_nonneg_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Coefficient-list serialization, e.g. `[1,0,-1/2]`.
    pub fn to_list_string(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        format!("[{}]", parts.join(","))
    }

    /// Inverse of [`Poly::to_list_string`]; `[]` is the zero polynomial.
    pub fn parse_list(input: &str) -> Result<Self, ArithError> {
        let s = input.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| ArithError::Parse {
                what: "polynomial coefficient list",
                input: input.to_string(),
            })?;
        if inner.trim().is_empty() {
            return Ok(Self::zero());
        }
        let coeffs = inner.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_coeffs(coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{}", format_rational(&abs))?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// `a op b` for `op` in {add, sub, mul}; division goes through
/// [`exact_divide`] or [`crate::arith::RationalFunction`].
pub fn poly_arith(a: &Poly, b: &Poly, op: ArithOp) -> Result<Poly, ArithError> {
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => Err(ArithError::UnsupportedOp),
    }
}

/// Returns `q` with `num = q * den`, or `NotDivisible` when the remainder
/// is nonzero.
pub fn exact_divide(num: &Poly, den: &Poly) -> Result<Poly, ArithError> {
    let (q, r) = num.div_rem(den).ok_or(ArithError::DivisionByZero)?;
    if r.is_zero() {
        Ok(q)
    } else {
        Err(ArithError::NotDivisible {
            num: num.to_string(),
            den: den.to_string(),
            rem: r.to_string(),
        })
    }
}
