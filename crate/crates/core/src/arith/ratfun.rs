use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{Signed, Zero};

use super::{exact_divide, ArithError, ArithOp, Poly, Rational};

/// Quotient of two polynomials in `t`, kept in canonical form: the
/// denominator is monic and coprime to the numerator, and zero is `0/1`.
/// Two rational functions are equal iff their canonical forms coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let num = exact_divide(&num, &g)?;
        let den = exact_divide(&den, &g)?;
        let lc = den.leading().expect("nonzero").recip();
        Ok(RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    /// `1 / p`.
    pub fn recip_of(p: &Poly) -> Result<Self, ArithError> {
        Self::new(Poly::one(), p.clone())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The numerator when the denominator is 1.
    pub fn as_poly(&self) -> Option<&Poly> {
        (self.den == Poly::one()).then_some(&self.num)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow(&self, e: u32) -> Self {
        // Powers of coprime polynomials stay coprime and the monic
        // denominator stays monic, so no renormalization is needed.
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Value at `t = 0`, `None` at a pole.
    pub fn value_at_zero(&self) -> Option<Rational> {
        let d = self.den.coeff(0);
        (!d.is_zero()).then(|| self.num.coeff(0) / d)
    }

    /// Taylor expansion at `t = 0` through degree `order` inclusive.
    pub fn series(&self, order: usize) -> Result<Poly, ArithError> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(ArithError::PoleAtZero {
                den: self.den.to_string(),
            });
        }
        let inv_d0 = d0.recip();
        let dens = self.den.coeffs();
        let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
        for i in 0..=order {
            let mut acc = self.num.coeff(i);
            for (j, dj) in dens.iter().enumerate().skip(1).take(i) {
                acc -= dj * &out[i - j];
            }
            out.push(acc * &inv_d0);
        }
        Ok(Poly::from_coeffs(out))
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl RationalFunction {
    /// Numerator and denominator rescaled so that the denominator's lowest
    /// nonzero coefficient is positive, the way series are usually written.
    pub fn low_normalized(&self) -> (Poly, Poly) {
        match self.den.coeffs().iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => (-&self.num, -&self.den),
            _ => (self.num.clone(), self.den.clone()),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            return write!(f, "{}", self.num);
        }
        let (num, den) = self.low_normalized();
        if den == Poly::one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/({den})")
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: RationalFunction) -> RationalFunction {
        &self + &rhs
    }
}

impl Sub for RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: RationalFunction) -> RationalFunction {
        &self - &rhs
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: RationalFunction) -> RationalFunction {
        &self * &rhs
    }
}

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| &a + &b)
    }
}

pub fn ratfun_arith(a: &RationalFunction, b: &RationalFunction, op: ArithOp) -> Result<RationalFunction, ArithError> {
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => a.checked_div(b),
    }
}

pub fn series_expand(f: &RationalFunction, order: usize) -> Result<Poly, ArithError> {
    f.series(order)
}
