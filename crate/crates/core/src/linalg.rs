//! Exact dense and sparse linear algebra over the rationals, plus the few
//! integer-lattice routines the toric code needs.

use std::collections::{BTreeMap, HashMap};

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};

use crate::arith::Rational;

pub type Vector = Vec<Rational>;
pub type Matrix = Vec<Vec<Rational>>;

pub fn qi(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { qi(1) } else { qi(0) }).collect())
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mat_vec(m: &Matrix, v: &[Rational]) -> Vector {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (top, rest) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&mut a[i], &b[0])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&mut b[0], &a[r])
                };
                for (x, y) in top.iter_mut().zip(rest) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Unique solution of the square system `a x = b`, `None` if singular.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vector> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().expect("augmented")).collect())
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Dimension of the affine hull of `points` (`-1` reported as `None`).
pub fn affine_rank(points: &[&Vector]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Matrix = rest.iter().map(|p| sub_vec(p, first)).collect();
    Some(if diffs.is_empty() { 0 } else { rank(&diffs) })
}

/// A basis of the rational null space `{x : m x = 0}`.
pub fn nullspace(m: &Matrix, cols: usize) -> Matrix {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![qi(0); cols];
            v[f] = qi(1);
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

/// Clears denominators and divides by the content, keeping the direction.
pub fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|q| (q * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Basis of the lattice `ker(a) ∩ Z^n` for an integer matrix `a` of full
/// row rank, obtained from unimodular column operations `a U = [H | 0]`.
/// Each basis vector is normalized to have a positive leading entry.
pub fn integer_kernel_basis(a: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    // Column operations act on columns of `m` and `u` simultaneously.
    let col_op = |m: &mut Vec<Vec<BigInt>>,
                  u: &mut Vec<Vec<BigInt>>,
                  p: usize,
                  c: usize,
                  x: &BigInt,
                  y: &BigInt,
                  z: &BigInt,
                  w: &BigInt| {
        // (col_p, col_c) <- (x col_p + y col_c, z col_p + w col_c)
        for rows in [m, u] {
            for row in rows.iter_mut() {
                let (a, b) = (row[p].clone(), row[c].clone());
                row[p] = x * &a + y * &b;
                row[c] = z * &a + w * &b;
            }
        }
    };
    let mut pivot = 0;
    for r in 0..m.len() {
        if pivot == n {
            break;
        }
        for c in pivot + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let (a, b) = (m[r][pivot].clone(), m[r][c].clone());
            let eg = a.extended_gcd(&b);
            let g = eg.gcd;
            // [x -b/g; y a/g] has determinant 1 and kills entry c.
            let (x, y) = (eg.x, eg.y);
            let (z, w) = (-(&b / &g), &a / &g);
            col_op(&mut m, &mut u, pivot, c, &x, &y, &z, &w);
        }
        if !m[r][pivot].is_zero() {
            pivot += 1;
        }
    }
    (pivot..n)
        .map(|c| {
            let mut v: Vec<BigInt> = u.iter().map(|row| row[c].clone()).collect();
            if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                v.iter_mut().for_each(|x| *x = -x.clone());
            }
            v
        })
        .collect()
}

/// Sparse row vector keyed by column.
pub type SparseVec = BTreeMap<usize, Rational>;

pub fn sparse_axpy(target: &mut SparseVec, coef: &Rational, row: &SparseVec) {
    for (&j, a) in row {
        let e = target.entry(j).or_insert_with(Rational::zero);
        *e -= coef * a;
        if e.is_zero() {
            target.remove(&j);
        }
    }
}

/// Incrementally built row echelon form over sparse rows. The leading
/// column of every stored row is its pivot and no two rows share a pivot,
/// so [`Echelon::reduce`] yields a unique normal form modulo the row space.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: HashMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Normal form of `v`: no entry in a pivot column.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut cursor = 0;
        loop {
            let next = v
                .range(cursor..)
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, a)| (*c, a.clone()));
            let Some((c, coef)) = next else {
                return v;
            };
            sparse_axpy(&mut v, &coef, &self.rows[&c]);
            cursor = c + 1;
        }
    }

    /// Adds a row; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = self.reduce(v);
        let Some((&lead, lc)) = v.iter().next() else {
            return false;
        };
        let inv = lc.recip();
        v.values_mut().for_each(|x| *x *= &inv);
        self.rows.insert(lead, v);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[qi(3), qi(5)]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![qi(3), qi(5)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &[qi(1), qi(2)]).is_none());
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]])), 2);
        let pts = [vec![qi(0), qi(0)], vec![qi(1), qi(1)], vec![qi(2), qi(2)]];
        let refs: Vec<&Vector> = pts.iter().collect();
        assert_eq!(affine_rank(&refs), Some(1));
    }

    #[test]
    fn kernel_basis_is_integral_and_spans() {
        let a = vec![vec![BigInt::from(1), BigInt::from(1), BigInt::from(0)]];
        let k = integer_kernel_basis(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: BigInt = v.iter().zip(&a[0]).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
        assert_eq!(k[0], vec![BigInt::from(1), BigInt::from(-1), BigInt::from(0)]);
        // saturated: (2, 3) has gcd 1 so the kernel generator is (3, -2)
        let k = integer_kernel_basis(&[vec![BigInt::from(2), BigInt::from(3)]], 2);
        assert_eq!(k, vec![vec![BigInt::from(3), BigInt::from(-2)]]);
    }

    #[test]
    fn primitive_vectors() {
        let v = [Rational::new(1.into(), 2.into()), Rational::new((-3).into(), 4.into())];
        assert_eq!(primitive(&v), vec![BigInt::from(2), BigInt::from(-3)]);
    }

    #[test]
    fn echelon_normal_form() {
        let mut e = Echelon::new();
        let row = |entries: &[(usize, i64)]| -> SparseVec { entries.iter().map(|&(c, v)| (c, qi(v))).collect() };
        assert!(e.insert(row(&[(0, 1), (1, 1)])));
        assert!(e.insert(row(&[(1, 1), (2, -1)])));
        assert!(!e.insert(row(&[(0, 1), (2, 1)])));
        assert_eq!(e.rank(), 2);
        // x0 = -x1 = -x2 modulo the relations
        assert_eq!(e.reduce(row(&[(0, 1)])), row(&[(2, -1)]));
        assert!(e.reduce(row(&[(0, 2), (1, 2)])).is_empty());
    }
}
