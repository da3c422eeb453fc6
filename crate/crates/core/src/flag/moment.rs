use num::{Complex, One, Zero};

use super::FlagSpec;
use crate::arith::Rational;

type C = Complex<Rational>;
type CMatrix = Vec<Vec<C>>;

fn c(re: i64, im: i64) -> C {
    Complex::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
}

fn real(x: &Rational) -> C {
    Complex::new(x.clone(), Rational::zero())
}

fn mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(C::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn adjoint(a: &CMatrix) -> CMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

fn transpose(a: &CMatrix) -> CMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

fn neg(a: &CMatrix) -> CMatrix {
    a.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
}

fn identity(n: usize) -> CMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { C::one() } else { C::zero() }).collect())
        .collect()
}

fn inverse(a: &CMatrix) -> Option<CMatrix> {
    let n = a.len();
    let mut m: Vec<Vec<C>> = a
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = C::one() / &m[col][col];
        m[col].iter_mut().for_each(|x| *x = &*x * &inv);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                m[r].iter_mut().zip(&pivot_row).for_each(|(x, p)| *x = &*x - &f * p);
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn trace(a: &CMatrix) -> C {
    (0..a.len()).fold(C::zero(), |acc, i| acc + &a[i][i])
}

/// `mu(A) = sum_i r_i a_ii` (real part; `A` is Hermitian).
fn moment(weights: &[Rational], a: &CMatrix) -> Rational {
    weights.iter().enumerate().map(|(i, r)| r * &a[i][i].re).sum()
}

/// A rational unitary from the Cayley transform `(I + iS)(I - iS)^{-1}` of
/// a Hermitian `S`.
fn cayley_unitary(n: usize) -> CMatrix {
    let s: CMatrix = (0..n)
        .map(|i| (0..n).map(|j| c((i + j + 1) as i64, i as i64 - j as i64)).collect())
        .collect();
    let is: CMatrix = s.iter().map(|r| r.iter().map(|x| x * c(0, 1)).collect()).collect();
    let plus: CMatrix = identity(n)
        .iter()
        .zip(&is)
        .map(|(e, r)| e.iter().zip(r).map(|(a, b)| a + b).collect())
        .collect();
    let minus: CMatrix = identity(n)
        .iter()
        .zip(&is)
        .map(|(e, r)| e.iter().zip(r).map(|(a, b)| a - b).collect())
        .collect();
    mul(&plus, &inverse(&minus).expect("I - iS is invertible for Hermitian S"))
}

/// Verifies on a generic point `A = U diag(spectrum) U*` of the orbit that
/// `theta(A) = -A^t` is Hermitian with the same spectrum, that
/// `mu(theta(A)) = -mu(A)`, that `mu` is invariant under a diagonal unitary
/// `D`, and that `theta(D A D*) = D* theta(A) D`.
pub fn check_moment_compat(spec: &FlagSpec) -> bool {
    let n = spec.n();
    let u = cayley_unitary(n);
    if mul(&u, &adjoint(&u)) != identity(n) {
        return false;
    }
    let diag: CMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { real(&spec.spectrum()[i]) } else { C::zero() })
                .collect()
        })
        .collect();
    let a = mul(&mul(&u, &diag), &adjoint(&u));
    let theta = |m: &CMatrix| neg(&transpose(m));
    let ta = theta(&a);

    let hermitian = adjoint(&ta) == ta;
    let antisymmetric_moment = moment(spec.weights(), &ta) == -moment(spec.weights(), &a);
    let same_spectrum = {
        let (mut pa, mut pt) = (identity(n), identity(n));
        (1..=n).all(|_| {
            pa = mul(&pa, &a);
            pt = mul(&pt, &ta);
            trace(&pa) == trace(&pt)
        })
    };
    // Pythagorean phases keep D unitary over the rationals.
    let phase = Complex::new(Rational::new(3.into(), 5.into()), Rational::new(4.into(), 5.into()));
    let mut z = C::one();
    let d: CMatrix = (0..n)
        .map(|i| {
            z = &z * &phase;
            (0..n).map(|j| if i == j { z.clone() } else { C::zero() }).collect()
        })
        .collect();
    let dad = mul(&mul(&d, &a), &adjoint(&d));
    let invariant = moment(spec.weights(), &dad) == moment(spec.weights(), &a);
    let anti_compatible = theta(&dad) == mul(&mul(&adjoint(&d), &ta), &d);
    hermitian && antisymmetric_moment && same_spectrum && invariant && anti_compatible
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compat_holds_for_standard_specs() {
        for n in 2..=4 {
            assert!(check_moment_compat(&FlagSpec::standard(n).unwrap()));
        }
    }

    #[test]
    fn cayley_is_unitary() {
        let u = cayley_unitary(3);
        assert_eq!(mul(&adjoint(&u), &u), identity(3));
    }

    #[test]
    fn asymmetric_spectrum_would_fail_the_spectrum_test() {
        let spec = FlagSpec {
            n: 2,
            spectrum: vec![Rational::from_integer(2.into()), Rational::from_integer((-1).into())],
            weights: vec![Rational::one(), Rational::from_integer(2.into())],
        };
        assert!(!check_moment_compat(&spec));
    }
}
