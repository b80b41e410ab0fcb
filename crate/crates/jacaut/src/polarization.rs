//! Integral alternating forms compatible with the complex structure,
//! principal polarizations among small combinations of them, and the
//! symplectic normal form.
//!
//! Sign convention: E is positive when S = E·J is positive definite, i.e.
//! E(v, iv) > 0. This makes the standard form [[0,1],[−1,0]] positive on
//! the torus with period matrix (1, i).

use crate::error::{Error, Result};
use crate::exact_linalg::hp::ten_pow_neg;
use crate::exact_linalg::kernel::integer_kernel;
use crate::exact_linalg::lll::{default_delta, lll_integer};
use crate::exact_linalg::{cholesky, left_kernel, pfaffian, CMatrix, HPComplex, IMatrix, Matrix, QMatrix, RMatrix};
use crate::torus::{ComplexStructure, PeriodMatrix};
use rug::{Float, Integer, Rational};
use serde::Serialize;

pub type AltForm = Matrix<i64>;

fn skew_from_upper(n: usize, vals: &[i64]) -> AltForm {
    let mut e = Matrix::from_fn(n, n, |_, _| 0i64);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            e[(i, j)] = vals[k];
            e[(j, i)] = -vals[k];
            k += 1;
        }
    }
    e
}

/// [[0, D], [−D, 0]].
pub fn standard_form(d: &[i64]) -> AltForm {
    let g = d.len();
    Matrix::from_fn(2 * g, 2 * g, |i, j| {
        if j == i + g {
            d[i]
        } else if i == j + g {
            -d[j]
        } else {
            0
        }
    })
}

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Z-basis of the integral alternating forms E with JᵗEJ = E.
pub fn compat_basis(pm: &PeriodMatrix, cs: &ComplexStructure) -> Result<Vec<AltForm>> {
    let n = 2 * pm.g;
    let pairs = upper_pairs(n);
    if pm.g == 1 {
        return Ok(vec![standard_form(&[1])]);
    }
    let kernel = match &cs.exact {
        Some(j) => {
            // columns: upper entries of JᵗEJ − E for each unit skew E
            let den = j.common_denominator();
            let den2 = Integer::from(den.square_ref());
            let jt = j.transpose();
            let m = IMatrix::from_fn(pairs.len(), pairs.len(), |_, _| Integer::new());
            let mut m = m;
            for (u, &(a, b)) in pairs.iter().enumerate() {
                let mut unit = vec![0i64; pairs.len()];
                unit[u] = 1;
                let e = skew_from_upper(n, &unit).to_big().to_rational();
                let f = jt.mul(&e).mul(j);
                for (c, &(x, y)) in pairs.iter().enumerate() {
                    let mut v = Rational::from(&f[(x, y)] - &e[(x, y)]);
                    v *= &den2;
                    debug_assert_eq!(*v.denom(), 1);
                    m[(u, c)] = v.numer().clone();
                }
                let _ = (a, b);
            }
            left_kernel(&m)
        }
        None => {
            // (QᵗEQ)_{mn} = Σ_{i<j} E_ij (Q_im Q_jn − Q_jm Q_in) must vanish
            let q = pm.coordinate_map();
            let g = pm.g;
            let cons = upper_pairs(g);
            let a = CMatrix::from_fn(pairs.len(), cons.len(), |u, c| {
                let (i, j) = pairs[u];
                let (m, l) = cons[c];
                &(&q[(i, m)] * &q[(j, l)]) - &(&q[(j, m)] * &q[(i, l)])
            });
            integer_kernel(&a, pm.precision_digits, crate::torus::default_scale(pm.precision_digits))
        }
    };
    if kernel.rows() == 0 {
        return Ok(vec![]);
    }
    let reduced = lll_integer(&kernel, &default_delta());
    let mut out = Vec::with_capacity(reduced.rows());
    for r in 0..reduced.rows() {
        let vals: Option<Vec<i64>> = reduced.row(r).iter().map(Integer::to_i64).collect();
        let vals = vals.ok_or_else(|| Error::Verification("alternating form entries overflow".into()))?;
        let e = skew_from_upper(n, &vals);
        if !is_compatible(&e, pm, cs) {
            return Err(Error::Verification("compatible form fails the compatibility check".into()));
        }
        out.push(e);
    }
    Ok(out)
}

/// JᵗEJ = E, exactly when J is rational and to working tolerance otherwise.
pub fn is_compatible(e: &AltForm, pm: &PeriodMatrix, cs: &ComplexStructure) -> bool {
    match &cs.exact {
        Some(j) => {
            let eq = e.to_big().to_rational();
            j.transpose().mul(&eq).mul(j) == eq
        }
        None => {
            let bits = pm.bits();
            let ef = RMatrix::from_int(e, bits);
            let jt = cs.numeric.transpose();
            let lhs = jt.rmul(&ef).rmul(&cs.numeric);
            let diff = Matrix::from_fn(lhs.rows(), lhs.cols(), |i, k| Float::with_val(bits, &lhs[(i, k)] - &ef[(i, k)]));
            diff.max_abs() < ten_pow_neg((pm.precision_digits / 2) as i32, bits)
        }
    }
}

/// Positivity of compatible forms, with a cheap double-precision screen.
pub struct PositivityTest {
    exact: Option<QMatrix>,
    numeric: RMatrix,
    quick: Vec<f64>,
    n: usize,
    tol: Float,
}

impl PositivityTest {
    pub fn new(pm: &PeriodMatrix, cs: &ComplexStructure) -> Self {
        let n = 2 * pm.g;
        let quick = cs.numeric.data().iter().map(Float::to_f64).collect();
        let tol = ten_pow_neg((pm.precision_digits / 2) as i32, pm.bits());
        PositivityTest { exact: cs.exact.clone(), numeric: cs.numeric.clone(), quick, n, tol }
    }

    /// Some(answer) when double precision decides with a wide margin.
    fn screen(&self, e: &AltForm) -> Option<bool> {
        let n = self.n;
        let mut s = vec![0f64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = e[(i, k)] as f64;
                if a != 0.0 {
                    for j in 0..n {
                        s[i * n + j] += a * self.quick[k * n + j];
                    }
                }
            }
        }
        let scale = s.iter().fold(1f64, |m, x| m.max(x.abs()));
        let margin = 1e-9 * scale;
        for k in 0..n {
            let p = s[k * n + k];
            if p < -margin {
                return Some(false);
            }
            if p <= margin {
                return None;
            }
            for i in k + 1..n {
                let f = s[i * n + k] / p;
                for j in k + 1..n {
                    s[i * n + j] -= f * s[k * n + j];
                }
            }
        }
        Some(true)
    }

    /// Necessary sign condition on diag(E·J): Some(true) if E may be
    /// positive, Some(false) if −E may be, None if neither.
    pub fn diagonal_sign(&self, e: &AltForm) -> Option<bool> {
        let n = self.n;
        let (mut pos, mut neg) = (true, true);
        for i in 0..n {
            let mut s = 0f64;
            let mut scale = 0f64;
            for k in 0..n {
                let t = e[(i, k)] as f64 * self.quick[k * n + i];
                s += t;
                scale += t.abs();
            }
            let m = 1e-9 * (scale + 1.0);
            pos &= s > -m;
            neg &= s < m;
            if !pos && !neg {
                return None;
            }
        }
        if pos {
            Some(true)
        } else {
            Some(false)
        }
    }

    /// S = E·J symmetric positive definite, decided exactly or at working precision.
    pub fn full(&self, e: &AltForm) -> bool {
        match &self.exact {
            Some(j) => {
                let s = e.to_big().to_rational().mul(j);
                s == s.transpose() && cholesky(&s).is_some()
            }
            None => {
                let bits = self.numeric.prec();
                let s = RMatrix::from_int(e, bits).rmul(&self.numeric);
                let asym = Matrix::from_fn(self.n, self.n, |i, j| Float::with_val(bits, &s[(i, j)] - &s[(j, i)]));
                asym.max_abs() < self.tol && s.is_positive_definite(&self.tol)
            }
        }
    }

    pub fn is_positive(&self, e: &AltForm) -> bool {
        match self.screen(e) {
            Some(false) => false,
            _ => self.full(e),
        }
    }
}

pub fn is_positive(e: &AltForm, pm: &PeriodMatrix, cs: &ComplexStructure) -> bool {
    PositivityTest::new(pm, cs).full(e)
}

#[derive(Clone, Debug, Serialize)]
pub struct Polarization {
    pub form: AltForm,
    pub elementary_divisors: Vec<i64>,
    /// Unimodular C with CᵗEC = [[0,D],[−D,0]].
    pub frobenius: AltForm,
}

impl Polarization {
    pub fn is_principal(&self) -> bool {
        self.elementary_divisors.iter().all(|&d| d == 1)
    }
}

fn pf_mask(e: &AltForm, mask: u32) -> i128 {
    if mask == 0 {
        return 1;
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << i);
    let mut total = 0i128;
    let mut sign = 1i128;
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let a = e[(i, j)];
        if a != 0 {
            total += sign * i128::from(a) * pf_mask(e, rest & !(1 << j));
        }
        sign = -sign;
    }
    total
}

/// Pfaffian of a small skew matrix, allocation free.
pub fn small_pfaffian(e: &AltForm) -> i128 {
    assert!(e.rows() <= 32);
    pf_mask(e, (1u64 << e.rows()).wrapping_sub(1) as u32)
}

/// Principal polarizations Σcᵢ·basisᵢ with ‖c‖∞ ≤ budget.
///
/// Only coefficient vectors whose first nonzero entry is positive are
/// visited; of each pair ±E the positive member (if any) is kept. The
/// sign of Pf is constant on the positive cone ((−1)^(g(g−1)/2) in the
/// standard normal form), so it is not used to choose between ±E.
pub fn cull_pb(basis: &[AltForm], test: &PositivityTest, budget: i64) -> Result<Vec<Polarization>> {
    if basis.is_empty() {
        return Err(Error::InvalidInput("empty compatible-form basis".into()));
    }
    let r = basis.len();
    let n = basis[0].rows();
    let mut c = vec![-budget; r];
    let mut e = Matrix::from_fn(n, n, |i, j| basis.iter().map(|b| -budget * b[(i, j)]).sum::<i64>());
    let mut found: Vec<AltForm> = Vec::new();
    loop {
        let canonical = c.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0);
        if canonical {
            if let Some(sign) = test.diagonal_sign(&e) {
                if small_pfaffian(&e).abs() == 1 {
                    let cand = if sign { e.clone() } else { e.neg() };
                    if test.is_positive(&cand) {
                        found.push(cand);
                    }
                }
            }
        }
        // odometer step with incremental update of E
        let mut k = 0;
        loop {
            if k == r {
                found.sort();
                found.dedup();
                return found.iter().map(principal_from_form).collect();
            }
            if c[k] < budget {
                c[k] += 1;
                add_scaled(&mut e, &basis[k], 1);
                break;
            }
            c[k] = -budget;
            add_scaled(&mut e, &basis[k], -2 * budget);
            k += 1;
        }
    }
}

fn add_scaled(e: &mut AltForm, b: &AltForm, s: i64) {
    let n = e.rows();
    for i in 0..n {
        for j in 0..n {
            e[(i, j)] += s * b[(i, j)];
        }
    }
}

fn principal_from_form(e: &AltForm) -> Result<Polarization> {
    let (c, d) = frobenius_form(e)?;
    Ok(Polarization { form: e.clone(), elementary_divisors: d, frobenius: c })
}

/// Basis change C (unimodular) with CᵗEC = [[0,D],[−D,0]], d₁ | d₂ | ….
pub fn frobenius_form(e: &AltForm) -> Result<(AltForm, Vec<i64>)> {
    let n = e.rows();
    if !e.is_square() || n % 2 == 1 || (0..n).any(|i| (0..=i).any(|j| e[(i, j)] != -e[(j, i)])) {
        return Err(Error::InvalidInput("frobenius_form needs an even-dimensional skew matrix".into()));
    }
    let g = n / 2;
    let mut a = e.clone();
    let mut c = Matrix::<i64>::identity(n);
    // basis operations: b_dst += s·b_src, applied as A ← TᵗAT, C ← CT
    let add = |a: &mut AltForm, c: &mut AltForm, dst: usize, src: usize, s: i64| {
        for i in 0..n {
            c[(i, dst)] += s * c[(i, src)];
            a[(i, dst)] += s * a[(i, src)];
        }
        for j in 0..n {
            a[(dst, j)] += s * a[(src, j)];
        }
    };
    let swap = |a: &mut AltForm, c: &mut AltForm, x: usize, y: usize| {
        a.swap_rows(x, y);
        a.swap_cols(x, y);
        c.swap_cols(x, y);
    };
    let mut divisors = Vec::with_capacity(g);
    for k in 0..g {
        let (p0, p1) = (2 * k, 2 * k + 1);
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in p0..n {
                for j in i + 1..n {
                    if a[(i, j)] != 0 && best.map_or(true, |(x, y)| a[(i, j)].abs() < a[(x, y)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((i, j)) = best else {
                return Err(Error::InvalidInput("alternating form is degenerate".into()));
            };
            swap(&mut a, &mut c, p0, i);
            swap(&mut a, &mut c, p1, if j == p0 { i } else { j });
            if a[(p0, p1)] < 0 {
                for r in 0..n {
                    c[(r, p1)] = -c[(r, p1)];
                    a[(r, p1)] = -a[(r, p1)];
                }
                for s in 0..n {
                    a[(p1, s)] = -a[(p1, s)];
                }
            }
            let p = a[(p0, p1)];
            let mut clean = true;
            for l in p1 + 1..n {
                // E(b0, b_l − q·b1) = a0l − q·p
                let q = a[(p0, l)].div_euclid(p);
                if q != 0 {
                    add(&mut a, &mut c, l, p1, -q);
                }
                // E(b1, b_l + q·b0) = a1l − q·p
                let q = a[(p1, l)].div_euclid(p);
                if q != 0 {
                    add(&mut a, &mut c, l, p0, q);
                }
                clean &= a[(p0, l)] == 0 && a[(p1, l)] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (p1 + 1..n).find(|&x| (x + 1..n).any(|y| a[(x, y)] % p != 0));
            match bad {
                Some(x) => add(&mut a, &mut c, p0, x, 1),
                None => {
                    divisors.push(p);
                    break;
                }
            }
        }
    }
    let order: Vec<usize> = (0..g).map(|k| 2 * k).chain((0..g).map(|k| 2 * k + 1)).collect();
    let rows: Vec<usize> = (0..n).collect();
    let c = c.submatrix(&rows, &order);
    let check = c.transpose().mul(e).mul(&c);
    if check != standard_form(&divisors) {
        return Err(Error::Verification("symplectic normal form check failed".into()));
    }
    Ok((c, divisors))
}

/// Canonical polarization from a unimodular intersection matrix.
pub fn from_intersection(m: &AltForm, pm: &PeriodMatrix, cs: &ComplexStructure) -> Result<Polarization> {
    let pf = pfaffian(&m.to_big())?;
    if pf.clone().abs() != 1 {
        return Err(Error::InvalidInput(format!("intersection matrix has Pfaffian {pf}, not ±1")));
    }
    if !is_compatible(m, pm, cs) {
        return Err(Error::InvalidInput("intersection matrix is not compatible with the complex structure".into()));
    }
    let test = PositivityTest::new(pm, cs);
    let e = if test.full(m) {
        m.clone()
    } else if test.full(&m.neg()) {
        m.neg()
    } else {
        return Err(Error::InvalidInput("intersection matrix is indefinite".into()));
    };
    principal_from_form(&e)
}

#[derive(Clone, Debug, Serialize)]
pub struct RiemannCheck {
    /// ‖Q₁Q₂ᵗ − Q₂Q₁ᵗ‖∞ for ΠC = (Q₁ | Q₂).
    pub symmetric_residual: f64,
    pub positive: bool,
}

/// Riemann relations for Π in the symplectic basis of a principal form.
pub fn riemann_check(pm: &PeriodMatrix, pol: &Polarization) -> Result<RiemannCheck> {
    let g = pm.g;
    let q = pm.transform(&pol.frobenius)?.entries;
    let bits = pm.bits();
    let rows: Vec<usize> = (0..g).collect();
    let q1 = q.submatrix(&rows, &(0..g).collect::<Vec<_>>());
    let q2 = q.submatrix(&rows, &(g..2 * g).collect::<Vec<_>>());
    let sym = q1.cmul(&q2.transpose()).csub(&q2.cmul(&q1.transpose()));
    // H = i(Q₁Q̄₂ᵗ − Q₂Q̄₁ᵗ), Hermitian
    let h = q1.cmul(&q2.conj().transpose()).csub(&q2.cmul(&q1.conj().transpose())).map(HPComplex::mul_i);
    let real = RMatrix::from_fn(2 * g, 2 * g, |i, j| {
        let z = &h[(i % g, j % g)];
        match (i < g, j < g) {
            (true, true) | (false, false) => z.re.clone(),
            (true, false) => Float::with_val(bits, -&z.im),
            (false, true) => z.im.clone(),
        }
    });
    let tol = ten_pow_neg((pm.precision_digits / 2) as i32, bits);
    Ok(RiemannCheck { symmetric_residual: sym.max_abs().to_f64(), positive: real.is_positive_definite(&tol) })
}
