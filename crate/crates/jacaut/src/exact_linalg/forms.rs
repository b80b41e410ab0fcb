//! Pfaffians and rational LDLᵗ factorizations.

use super::matrix::{IMatrix, Matrix, QMatrix};
use crate::error::{Error, Result};
use rug::{Integer, Rational};

pub fn is_skew<T: PartialEq + Clone + std::ops::Neg<Output = T>>(m: &Matrix<T>) -> bool {
    m.is_square() && (0..m.rows()).all(|i| (0..=i).all(|j| m[(i, j)] == -m[(j, i)].clone()))
}

fn is_skew_int(m: &IMatrix) -> bool {
    m.is_square() && (0..m.rows()).all(|i| (0..=i).all(|j| m[(i, j)] == Integer::from(-&m[(j, i)])))
}

fn pf_expand(m: &IMatrix, idx: &[usize]) -> Integer {
    if idx.is_empty() {
        return Integer::from(1);
    }
    let i = idx[0];
    let mut total = Integer::new();
    let mut rest: Vec<usize> = Vec::with_capacity(idx.len() - 2);
    for p in 1..idx.len() {
        let j = idx[p];
        if m[(i, j)] == 0 {
            continue;
        }
        rest.clear();
        rest.extend(idx[1..].iter().copied().filter(|&x| x != j));
        let term = Integer::from(&m[(i, j)] * &pf_expand(m, &rest));
        if p % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Skew-symmetric elimination over Q.
fn pf_eliminate(m: &IMatrix) -> Integer {
    let mut a: QMatrix = m.to_rational();
    let mut n = a.rows();
    let mut result = Rational::from(1);
    let mut sign = 1i32;
    let mut off = 0;
    while n > 0 {
        // bring a nonzero entry into position (off, off+1)
        let Some(j) = (off + 1..off + n).find(|&j| a[(off, j)] != 0) else {
            return Integer::new();
        };
        if j != off + 1 {
            a.swap_rows(j, off + 1);
            a.swap_cols(j, off + 1);
            sign = -sign;
        }
        let p = a[(off, off + 1)].clone();
        result *= &p;
        // eliminate rows/cols off, off+1 from the trailing block
        for r in off + 2..off + n {
            for c in off + 2..off + n {
                let t = (Rational::from(&a[(r, off)] * &a[(off + 1, c)]) - Rational::from(&a[(r, off + 1)] * &a[(off, c)])) / &p;
                a[(r, c)] += t;
            }
        }
        off += 2;
        n -= 2;
    }
    if sign < 0 {
        result = -result;
    }
    debug_assert_eq!(*result.denom(), 1);
    result.numer().clone()
}

/// Pfaffian of an integral skew-symmetric matrix of even dimension.
pub fn pfaffian(e: &IMatrix) -> Result<Integer> {
    if !is_skew_int(e) {
        return Err(Error::InvalidInput("pfaffian needs a skew-symmetric matrix".into()));
    }
    if e.rows() % 2 == 1 {
        return Err(Error::InvalidInput("pfaffian needs even dimension".into()));
    }
    if e.rows() <= 8 {
        let idx: Vec<usize> = (0..e.rows()).collect();
        Ok(pf_expand(e, &idx))
    } else {
        Ok(pf_eliminate(e))
    }
}

/// Pfaffian by expansion on small machine integers; caller guarantees skewness.
pub fn pfaffian_i64(e: &Matrix<i64>) -> i128 {
    fn go(m: &Matrix<i64>, idx: &mut Vec<usize>) -> i128 {
        if idx.is_empty() {
            return 1;
        }
        let i = idx[0];
        let mut total = 0i128;
        for p in 1..idx.len() {
            let j = idx[p];
            let a = m[(i, j)];
            if a == 0 {
                continue;
            }
            let mut rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != j).collect();
            let sub = go(m, &mut rest);
            let term = i128::from(a) * sub;
            if p % 2 == 1 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }
    let mut idx: Vec<usize> = (0..e.rows()).collect();
    go(e, &mut idx)
}

/// `Q = L·diag(D)·Lᵗ` with `L` unit lower triangular.
#[derive(Clone, Debug)]
pub struct Ldl {
    pub l: QMatrix,
    pub d: Vec<Rational>,
}

/// Square-root-free Cholesky. `None` unless `Q` is positive definite.
pub fn cholesky(q: &QMatrix) -> Option<Ldl> {
    assert!(q.is_square());
    let n = q.rows();
    let mut l = QMatrix::identity(n);
    let mut d: Vec<Rational> = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = q[(j, j)].clone();
        for k in 0..j {
            dj -= Rational::from(l[(j, k)].square_ref()) * &d[k];
        }
        if dj <= 0 {
            return None;
        }
        for i in j + 1..n {
            let mut s = q[(i, j)].clone();
            for k in 0..j {
                s -= Rational::from(&l[(i, k)] * &l[(j, k)]) * &d[k];
            }
            l[(i, j)] = s / &dj;
        }
        d.push(dj);
    }
    Some(Ldl { l, d })
}

impl Ldl {
    /// Reassembles `L·diag(D)·Lᵗ`.
    pub fn product(&self) -> QMatrix {
        let n = self.d.len();
        QMatrix::from_fn(n, n, |i, j| {
            let mut s = Rational::new();
            for k in 0..=i.min(j) {
                s += Rational::from(&self.l[(i, k)] * &self.l[(j, k)]) * &self.d[k];
            }
            s
        })
    }
}
