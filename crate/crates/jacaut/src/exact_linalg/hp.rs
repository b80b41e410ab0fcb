//! High-precision real and complex arithmetic on top of MPFR floats.

use super::matrix::Matrix;
use crate::error::{Error, Result};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float, Integer};
use std::ops::{Add, Mul, Neg, Sub};

pub type RMatrix = Matrix<Float>;
pub type CMatrix = Matrix<HPComplex>;

/// Minimum supported working precision, in decimal digits.
pub const MIN_DIGITS: u32 = 30;

/// Binary precision carrying `digits` decimal digits plus guard bits.
pub fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

/// 10^(-e) at the given binary precision.
pub fn ten_pow_neg(e: i32, bits: u32) -> Float {
    Float::with_val(bits, Float::with_val(bits, 10).pow(-e))
}

pub fn parse_float(s: &str, bits: u32) -> Result<Float> {
    let p = Float::parse(s.trim()).map_err(|e| Error::InvalidInput(format!("bad decimal '{s}': {e}")))?;
    Ok(Float::with_val(bits, p))
}

/// Decimal string with `digits` significant digits, parseable by [`parse_float`].
pub fn format_float(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits as usize))
}

/// Nearest integer.
pub fn round_to_integer(x: &Float) -> Integer {
    let r = Float::with_val(x.prec(), x.round_ref());
    r.to_integer().expect("finite value")
}

#[derive(Clone, Debug, PartialEq)]
pub struct HPComplex {
    pub re: Float,
    pub im: Float,
}

impl HPComplex {
    pub fn new(re: Float, im: Float) -> Self {
        HPComplex { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        HPComplex { re: Float::new(bits), im: Float::new(bits) }
    }

    pub fn from_i64(re: i64, im: i64, bits: u32) -> Self {
        HPComplex { re: Float::with_val(bits, re), im: Float::with_val(bits, im) }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        HPComplex { re, im }
    }

    pub fn i(bits: u32) -> Self {
        Self::from_i64(0, 1, bits)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// exp(pi * i * num / den).
    pub fn exp_pi_i(num: i64, den: i64, bits: u32) -> Self {
        let mut theta = Float::with_val(bits + 32, Constant::Pi);
        theta *= num;
        theta /= den;
        let (s, c) = theta.sin_cos(Float::new(bits + 32));
        HPComplex { re: Float::with_val(bits, c), im: Float::with_val(bits, s) }
    }

    /// zeta_d^k = exp(2 pi i k / d).
    pub fn root_of_unity(d: i64, k: i64, bits: u32) -> Self {
        let k = k.rem_euclid(d);
        Self::exp_pi_i(2 * k, d, bits)
    }

    pub fn conj(&self) -> Self {
        HPComplex { re: self.re.clone(), im: Float::with_val(self.prec(), -&self.im) }
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec();
        HPComplex { re: Float::with_val(p, &self.re * s), im: Float::with_val(p, &self.im * s) }
    }

    pub fn mul_i(&self) -> Self {
        let p = self.prec();
        HPComplex { re: Float::with_val(p, -&self.im), im: self.re.clone() }
    }

    pub fn norm_sq(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        self.norm_sq().sqrt()
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        let p = self.prec();
        HPComplex { re: Float::with_val(p, &self.re / &n), im: -Float::with_val(p, &self.im / &n) }
    }

    pub fn div(&self, o: &Self) -> Self {
        self * &o.inv()
    }

    pub fn add_assign_mul(&mut self, a: &Self, b: &Self) {
        let t = a * b;
        self.re += &t.re;
        self.im += &t.im;
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for &HPComplex {
    type Output = HPComplex;
    fn add(self, o: &HPComplex) -> HPComplex {
        let p = self.prec();
        HPComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl Sub for &HPComplex {
    type Output = HPComplex;
    fn sub(self, o: &HPComplex) -> HPComplex {
        let p = self.prec();
        HPComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl Mul for &HPComplex {
    type Output = HPComplex;
    fn mul(self, o: &HPComplex) -> HPComplex {
        let p = self.prec();
        let mut re = Float::with_val(p, &self.re * &o.re);
        re -= Float::with_val(p, &self.im * &o.im);
        let mut im = Float::with_val(p, &self.re * &o.im);
        im += Float::with_val(p, &self.im * &o.re);
        HPComplex { re, im }
    }
}

impl Neg for &HPComplex {
    type Output = HPComplex;
    fn neg(self) -> HPComplex {
        let p = self.prec();
        HPComplex { re: Float::with_val(p, -&self.re), im: Float::with_val(p, -&self.im) }
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize, bits: u32) -> Self {
        Matrix::from_fn(rows, cols, |_, _| HPComplex::zero(bits))
    }

    pub fn identity_c(n: usize, bits: u32) -> Self {
        Matrix::from_fn(n, n, |i, j| HPComplex::from_i64(i64::from(i == j), 0, bits))
    }

    pub fn prec(&self) -> u32 {
        self.data().first().map_or(64, HPComplex::prec)
    }

    pub fn cmul(&self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.cols(), o.rows());
        let bits = self.prec();
        Matrix::from_fn(self.rows(), o.cols(), |i, j| {
            let mut acc = HPComplex::zero(bits);
            for k in 0..self.cols() {
                acc.add_assign_mul(&self[(i, k)], &o[(k, j)]);
            }
            acc
        })
    }

    /// Product with an integer matrix on the right.
    pub fn mul_int(&self, o: &Matrix<i64>) -> CMatrix {
        assert_eq!(self.cols(), o.rows());
        let bits = self.prec();
        Matrix::from_fn(self.rows(), o.cols(), |i, j| {
            let mut acc = HPComplex::zero(bits);
            for k in 0..self.cols() {
                let c = o[(k, j)];
                if c != 0 {
                    acc.re += Float::with_val(bits, &self[(i, k)].re * c);
                    acc.im += Float::with_val(bits, &self[(i, k)].im * c);
                }
            }
            acc
        })
    }

    pub fn conj(&self) -> CMatrix {
        self.map(HPComplex::conj)
    }

    pub fn csub(&self, o: &CMatrix) -> CMatrix {
        Matrix::from_fn(self.rows(), self.cols(), |i, j| &self[(i, j)] - &o[(i, j)])
    }

    /// Entrywise max of |re| and |im|.
    pub fn max_abs(&self) -> Float {
        let mut m = Float::new(self.prec());
        for z in self.data() {
            let a = Float::with_val(m.prec(), z.re.abs_ref());
            if a > m {
                m = a;
            }
            let b = Float::with_val(m.prec(), z.im.abs_ref());
            if b > m {
                m = b;
            }
        }
        m
    }

    /// Gauss–Jordan with partial pivoting; `None` if numerically singular.
    pub fn inverse(&self) -> Option<CMatrix> {
        assert!(self.is_square());
        let n = self.rows();
        let bits = self.prec();
        let tiny = ten_pow_neg((f64::from(bits) / std::f64::consts::LOG2_10 * 0.75) as i32, bits);
        let mut a = self.clone();
        let mut inv = CMatrix::identity_c(n, bits);
        for c in 0..n {
            let (p, best) = (c..n)
                .map(|r| (r, a[(r, c)].norm_sq()))
                .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite"))?;
            if best.sqrt() < tiny {
                return None;
            }
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            let pinv = a[(c, c)].inv();
            for j in 0..n {
                a[(c, j)] = &a[(c, j)] * &pinv;
                inv[(c, j)] = &inv[(c, j)] * &pinv;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    let t = &f * &a[(c, j)];
                    a[(r, j)] = &a[(r, j)] - &t;
                    let t = &f * &inv[(c, j)];
                    inv[(r, j)] = &inv[(r, j)] - &t;
                }
            }
        }
        Some(inv)
    }
}

impl RMatrix {
    pub fn prec(&self) -> u32 {
        self.data().first().map_or(64, Float::prec)
    }

    pub fn rmul(&self, o: &RMatrix) -> RMatrix {
        assert_eq!(self.cols(), o.rows());
        let bits = self.prec();
        Matrix::from_fn(self.rows(), o.cols(), |i, j| {
            let mut acc = Float::new(bits);
            for k in 0..self.cols() {
                acc += Float::with_val(bits, &self[(i, k)] * &o[(k, j)]);
            }
            acc
        })
    }

    pub fn from_int(m: &Matrix<i64>, bits: u32) -> RMatrix {
        m.map(|&x| Float::with_val(bits, x))
    }

    pub fn max_abs(&self) -> Float {
        let mut m = Float::new(self.prec());
        for x in self.data() {
            let a = Float::with_val(m.prec(), x.abs_ref());
            if a > m {
                m.assign(&a);
            }
        }
        m
    }

    /// Symmetric positive-definiteness by LDL pivots, treating pivots
    /// below `tol` as degenerate.
    pub fn is_positive_definite(&self, tol: &Float) -> bool {
        assert!(self.is_square());
        let n = self.rows();
        let bits = self.prec();
        let mut a = self.clone();
        for k in 0..n {
            let piv = a[(k, k)].clone();
            if piv <= *tol {
                return false;
            }
            for i in k + 1..n {
                let f = Float::with_val(bits, &a[(i, k)] / &piv);
                for j in k + 1..n {
                    let t = Float::with_val(bits, &f * &a[(k, j)]);
                    a[(i, j)] -= t;
                }
            }
        }
        true
    }
}
