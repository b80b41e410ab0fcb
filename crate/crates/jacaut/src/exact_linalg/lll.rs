//! Exact integral LLL (de Weger / Cohen), driven by a Gram matrix so the
//! same code reduces explicit bases and abstract quadratic forms.

use super::matrix::{IMatrix, QMatrix};
use super::normal_form::hnf;
use rug::{Integer, Rational};

pub fn default_delta() -> Rational {
    Rational::from((99, 100))
}

/// Reduction state. `gram` always equals `T·G₀·Tᵗ` for the current transform `T`.
struct Lll {
    gram: IMatrix,
    t: IMatrix,
    lam: Vec<Vec<Integer>>,
    d: Vec<Integer>,
    kmax: usize,
}

impl Lll {
    fn red(&mut self, k: usize, l: usize) {
        let twice = Integer::from(self.lam[k][l].abs_ref()) << 1u32;
        if twice <= self.d[l + 1] {
            return;
        }
        // nearest integer to lam/d
        let num = Integer::from(&self.lam[k][l] << 1u32) + &self.d[l + 1];
        let den = Integer::from(&self.d[l + 1] << 1u32);
        let q = super::normal_form::floor_div(&num, &den);
        let n = self.gram.rows();
        for j in 0..n {
            let v = Integer::from(&q * &self.t[(l, j)]);
            self.t[(k, j)] -= v;
        }
        for j in 0..n {
            let v = Integer::from(&q * &self.gram[(l, j)]);
            self.gram[(k, j)] -= v;
        }
        for i in 0..n {
            let v = Integer::from(&q * &self.gram[(i, l)]);
            self.gram[(i, k)] -= v;
        }
        let v = Integer::from(&q * &self.d[l + 1]);
        self.lam[k][l] -= v;
        for i in 0..l {
            let v = Integer::from(&q * &self.lam[l][i]);
            self.lam[k][i] -= v;
        }
    }

    fn swap(&mut self, k: usize) {
        self.t.swap_rows(k, k - 1);
        self.gram.swap_rows(k, k - 1);
        self.gram.swap_cols(k, k - 1);
        for j in 0..k - 1 {
            let (a, b) = self.lam.split_at_mut(k);
            std::mem::swap(&mut a[k - 1][j], &mut b[0][j]);
        }
        let lambda = self.lam[k][k - 1].clone();
        let b = (Integer::from(&self.d[k - 1] * &self.d[k + 1]) + Integer::from(lambda.square_ref())) / &self.d[k];
        for i in k + 1..=self.kmax {
            let t = self.lam[i][k].clone();
            let nk = (Integer::from(&self.d[k + 1] * &self.lam[i][k - 1]) - Integer::from(&lambda * &t)) / &self.d[k];
            let nk1 = (Integer::from(&b * &t) + Integer::from(&lambda * &nk)) / &self.d[k + 1];
            self.lam[i][k] = nk;
            self.lam[i][k - 1] = nk1;
        }
        self.d[k] = b;
    }

    fn extend(&mut self, k: usize) {
        for j in 0..=k {
            let mut u = self.gram[(k, j)].clone();
            for i in 0..j {
                u = (Integer::from(&self.d[i + 1] * &u) - Integer::from(&self.lam[k][i] * &self.lam[j][i])) / &self.d[i];
            }
            if j < k {
                self.lam[k][j] = u;
            } else {
                assert!(u > 0, "LLL input vectors are linearly dependent");
                self.d[k + 1] = u;
            }
        }
    }
}

/// Reduces the basis whose Gram matrix is `gram` (symmetric positive
/// definite). Returns `(T, T·gram·Tᵗ)`; row `i` of `T` expresses the
/// i-th reduced vector in the input basis.
pub fn lll_gram(gram: &IMatrix, delta: &Rational) -> (IMatrix, IMatrix) {
    let n = gram.rows();
    assert!(gram.is_square());
    assert!(*delta > Rational::from((1, 4)) && *delta < 1, "delta must lie in (1/4, 1)");
    let mut s = Lll {
        gram: gram.clone(),
        t: IMatrix::identity(n),
        lam: vec![vec![Integer::new(); n]; n],
        d: vec![Integer::from(1); n + 1],
        kmax: 0,
    };
    if n == 0 {
        return (s.t, s.gram);
    }
    s.d[1] = s.gram[(0, 0)].clone();
    assert!(s.d[1] > 0, "LLL input vectors are linearly dependent");
    let (p, q) = (delta.numer().clone(), delta.denom().clone());
    let mut k = 1;
    while k < n {
        if k > s.kmax {
            s.kmax = k;
            s.extend(k);
        }
        s.red(k, k - 1);
        let lhs = Integer::from(&q * &s.d[k + 1]) * &s.d[k - 1];
        let rhs = Integer::from(&p * Integer::from(s.d[k].square_ref())) - Integer::from(&q * Integer::from(s.lam[k][k - 1].square_ref()));
        if lhs < rhs {
            s.swap(k);
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                s.red(k, l);
            }
            k += 1;
        }
    }
    (s.t, s.gram)
}

/// LLL on the rows of an integer matrix of full row rank.
pub fn lll_full_rank(b: &IMatrix, delta: &Rational) -> IMatrix {
    let gram = b.mul(&b.transpose());
    let (t, _) = lll_gram(&gram, delta);
    t.mul(b)
}

/// LLL-reduced basis of the lattice spanned by the rows of `b`.
/// Dependent rows are removed first, so the result may have fewer rows.
pub fn lll_integer(b: &IMatrix, delta: &Rational) -> IMatrix {
    let (h, _) = hnf(b);
    let nz: Vec<usize> = (0..h.rows()).filter(|&i| h.row(i).iter().any(|x| *x != 0)).collect();
    let cols: Vec<usize> = (0..h.cols()).collect();
    let basis = if nz.len() == b.rows() { b.clone() } else { h.submatrix(&nz, &cols) };
    lll_full_rank(&basis, delta)
}

/// LLL-reduced basis of the lattice spanned by the rational rows of `b`.
pub fn lll(b: &QMatrix, delta: &Rational) -> QMatrix {
    let den = b.common_denominator();
    let scaled = b.map(|x| (Rational::from(x * &den)).numer().clone());
    let red = lll_integer(&scaled, delta);
    red.map(|x| Rational::from((x.clone(), den.clone())))
}

/// Squared Gram–Schmidt norms and coefficients, exact.
pub fn gram_schmidt(b: &QMatrix) -> (Vec<Rational>, Vec<Vec<Rational>>) {
    let n = b.rows();
    let dot = |x: &[Rational], y: &[Rational]| {
        let mut s = Rational::new();
        for (a, c) in x.iter().zip(y) {
            s += Rational::from(a * c);
        }
        s
    };
    let mut star: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    let mut mu = vec![vec![Rational::new(); n]; n];
    for i in 0..n {
        let mut v = b.row(i).to_vec();
        for j in 0..i {
            let m = dot(b.row(i), &star[j]) / &norms[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= Rational::from(&m * s);
            }
            mu[i][j] = m;
        }
        let nn = dot(&v, &v);
        norms.push(nn);
        star.push(v);
    }
    (norms, mu)
}

/// Checks size reduction and the Lovász condition.
pub fn is_lll_reduced(b: &QMatrix, delta: &Rational) -> bool {
    let (norms, mu) = gram_schmidt(b);
    let half = Rational::from((1, 2));
    for i in 0..b.rows() {
        for j in 0..i {
            if Rational::from(mu[i][j].abs_ref()) > half {
                return false;
            }
        }
        if i > 0 {
            let m2 = Rational::from(mu[i][i - 1].square_ref());
            let rhs = (Rational::from(delta - &m2)) * &norms[i - 1];
            if norms[i] < rhs {
                return false;
            }
        }
    }
    true
}
