//! Complex tori C^g/ΠZ^{2g}: complex structure on the lattice and the
//! integral homomorphism lattice between two tori.

use crate::error::{Error, Result};
use crate::exact_linalg::hp::{ten_pow_neg, MIN_DIGITS};
use crate::exact_linalg::kernel::integer_kernel;
use crate::exact_linalg::lll::{default_delta, lll_integer};
use crate::exact_linalg::{digits_to_bits, CMatrix, HPComplex, IMatrix, Matrix, QMatrix, RMatrix};
use rug::{Float, Integer, Rational};

/// Largest denominator accepted when reading J back as a rational matrix.
pub const DENOMINATOR_CAP: u64 = 1_000_000_000_000;

#[derive(Clone, Debug)]
pub struct PeriodMatrix {
    pub g: usize,
    /// g × 2g.
    pub entries: CMatrix,
    pub precision_digits: u32,
    pub label: Option<String>,
    pub hyperelliptic: Option<bool>,
}

impl PeriodMatrix {
    /// Checks the shape and that the columns are R-linearly independent.
    pub fn new(entries: CMatrix, precision_digits: u32, label: Option<String>, hyperelliptic: Option<bool>) -> Result<Self> {
        let g = entries.rows();
        if g == 0 || entries.cols() != 2 * g {
            return Err(Error::InvalidInput(format!("period matrix must be g x 2g, got {} x {}", g, entries.cols())));
        }
        if precision_digits < MIN_DIGITS {
            return Err(Error::InvalidInput(format!("precision {precision_digits} below {MIN_DIGITS} digits")));
        }
        let pm = PeriodMatrix { g, entries, precision_digits, label, hyperelliptic };
        if pm.stacked().inverse().is_none() {
            return Err(Error::InvalidInput("period matrix columns are not R-linearly independent".into()));
        }
        Ok(pm)
    }

    pub fn bits(&self) -> u32 {
        self.entries.prec()
    }

    /// `[Π; conj Π]`, 2g × 2g.
    pub fn stacked(&self) -> CMatrix {
        let g = self.g;
        CMatrix::from_fn(2 * g, 2 * g, |i, j| if i < g { self.entries[(i, j)].clone() } else { self.entries[(i - g, j)].conj() })
    }

    /// First g columns of `[Π; conj Π]⁻¹`; the remaining columns are their conjugates.
    pub fn coordinate_map(&self) -> CMatrix {
        let inv = self.stacked().inverse().expect("checked at construction");
        let rows: Vec<usize> = (0..2 * self.g).collect();
        let cols: Vec<usize> = (0..self.g).collect();
        inv.submatrix(&rows, &cols)
    }

    /// Π·C for an integer change of lattice basis C.
    pub fn transform(&self, c: &Matrix<i64>) -> Result<PeriodMatrix> {
        PeriodMatrix::new(self.entries.mul_int(c), self.precision_digits, self.label.clone(), self.hyperelliptic)
    }

    /// Same matrix at lower working precision.
    pub fn with_precision(&self, digits: u32) -> Result<PeriodMatrix> {
        let bits = digits_to_bits(digits);
        let entries = self.entries.map(|z| HPComplex::new(Float::with_val(bits, &z.re), Float::with_val(bits, &z.im)));
        PeriodMatrix::new(entries, digits.min(self.precision_digits), self.label.clone(), self.hyperelliptic)
    }

    /// Block-diagonal period matrix of a product of tori.
    pub fn product(&self, other: &PeriodMatrix) -> Result<PeriodMatrix> {
        let (g1, g2) = (self.g, other.g);
        let bits = self.bits().min(other.bits());
        let entries = CMatrix::from_fn(g1 + g2, 2 * (g1 + g2), |i, j| match (i < g1, j < 2 * g1) {
            (true, true) => self.entries[(i, j)].clone(),
            (false, false) => other.entries[(i - g1, j - 2 * g1)].clone(),
            _ => HPComplex::zero(bits),
        });
        PeriodMatrix::new(entries, self.precision_digits.min(other.precision_digits), None, None)
    }
}

/// Multiplication by i on Λ⊗R in the lattice basis: ΠJ = iΠ.
#[derive(Clone, Debug)]
pub struct ComplexStructure {
    pub numeric: RMatrix,
    /// Present when every entry is recognised as a rational of bounded height.
    pub exact: Option<QMatrix>,
    pub residual: Float,
}

/// Best rational with denominator ≤ `cap` within `tol` of `x`, via continued fractions.
pub fn rational_reconstruct(x: &Float, tol: &Float, cap: &Integer) -> Option<Rational> {
    let target = x.to_rational()?;
    let (mut p0, mut q0) = (Integer::from(0), Integer::from(1));
    let (mut p1, mut q1) = (Integer::from(1), Integer::from(0));
    let mut rest = target.clone();
    loop {
        let a = rest.clone().floor().numer().clone();
        let p2 = Integer::from(&a * &p1) + &p0;
        let q2 = Integer::from(&a * &q1) + &q0;
        if q2 > *cap {
            return None;
        }
        let cand = Rational::from((p2.clone(), q2.clone()));
        let err = Float::with_val(x.prec(), Rational::from(&cand - &target).abs());
        if err < *tol {
            return Some(cand);
        }
        let frac = Rational::from(&rest - &a);
        if frac == 0 {
            return Some(cand);
        }
        rest = frac.recip();
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
}

pub fn complex_structure(pm: &PeriodMatrix) -> Result<ComplexStructure> {
    let bits = pm.bits();
    let q = pm.coordinate_map();
    let qp = q.cmul(&pm.entries);
    let numeric: RMatrix = qp.map(|z| Float::with_val(bits, &z.im * -2i32));
    let j_c = numeric.map(|x| HPComplex::from_real(x.clone()));
    let lhs = pm.entries.cmul(&j_c);
    let rhs = pm.entries.map(HPComplex::mul_i);
    let residual = lhs.csub(&rhs).max_abs();
    let tol = ten_pow_neg((pm.precision_digits / 2) as i32, bits);
    if residual >= tol {
        return Err(Error::Verification(format!("complex structure residual {residual:.3e} too large; raise precision")));
    }
    let cap = Integer::from(DENOMINATOR_CAP);
    let entries: Option<Vec<Rational>> = numeric.data().iter().map(|x| rational_reconstruct(x, &tol, &cap)).collect();
    let exact = entries.map(|e| QMatrix::from_vec(numeric.rows(), numeric.cols(), e)).filter(|j| {
        let sq = j.mul(j);
        let n = j.rows();
        (0..n).all(|a| (0..n).all(|b| sq[(a, b)] == if a == b { -1 } else { 0 }))
    });
    Ok(ComplexStructure { numeric, exact, residual })
}

/// Integral basis of Hom between two tori in rational representation.
#[derive(Clone, Debug)]
pub struct HomBasis {
    /// 2g × 2g integer matrices R with MΠ₁ = Π₂R.
    pub reps: Vec<Matrix<i64>>,
    /// The matching g × g analytic representations M.
    pub tangents: Vec<CMatrix>,
    pub residuals: Vec<Float>,
    pub scale: u32,
}

impl HomBasis {
    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    /// Σ cᵢ Rᵢ.
    pub fn combine(&self, coeffs: &[i64]) -> Matrix<i64> {
        let n = self.reps.first().map_or(0, Matrix::rows);
        let mut out = Matrix::from_fn(n, n, |_, _| 0i64);
        for (c, r) in coeffs.iter().zip(&self.reps) {
            if *c == 0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += c * r[(i, j)];
                }
            }
        }
        out
    }
}

/// Tangent representation M = Π₂RQ₁ and the residual ‖MΠ₁ − Π₂R‖∞.
pub fn tangent_of(pm1: &PeriodMatrix, pm2: &PeriodMatrix, q1: &CMatrix, r: &Matrix<i64>) -> (CMatrix, Float) {
    let p2r = pm2.entries.mul_int(r);
    let m = p2r.cmul(q1);
    let res = m.cmul(&pm1.entries).csub(&p2r).max_abs();
    (m, res)
}

/// Default relation-search scale for a working precision.
pub fn default_scale(digits: u32) -> u32 {
    digits.saturating_sub(10)
}

pub fn hom_basis(pm1: &PeriodMatrix, pm2: &PeriodMatrix, scale: u32) -> Result<HomBasis> {
    if pm1.g != pm2.g {
        return Ok(HomBasis { reps: vec![], tangents: vec![], residuals: vec![], scale });
    }
    let g = pm1.g;
    let n = 2 * g;
    let prec = pm1.precision_digits.min(pm2.precision_digits);
    let bits = pm1.bits().min(pm2.bits());
    let q1 = pm1.coordinate_map();
    let q1bar = q1.conj();
    // R is holomorphic iff Π₂·R·conj(Q₁) = 0
    let a = CMatrix::from_fn(n * n, g * g, |row, col| {
        let (j, k) = (row / n, row % n);
        let (m, l) = (col / g, col % g);
        &pm2.entries[(m, j)] * &q1bar[(k, l)]
    });
    let kernel = integer_kernel(&a, prec, scale);
    let reduced = if kernel.rows() > 0 { lll_integer(&kernel, &default_delta()) } else { kernel };
    let tol = ten_pow_neg((scale / 2) as i32, bits);
    let mut hb = HomBasis { reps: vec![], tangents: vec![], residuals: vec![], scale };
    for i in 0..reduced.rows() {
        let flat: Option<Vec<i64>> = reduced.row(i).iter().map(Integer::to_i64).collect();
        let flat = flat.ok_or_else(|| Error::Verification("homomorphism entries overflow i64".into()))?;
        let r = Matrix::from_vec(n, n, flat);
        let (m, res) = tangent_of(pm1, pm2, &q1, &r);
        if res >= tol {
            return Err(Error::Verification(format!("homomorphism residual {res:.3e} exceeds tolerance")));
        }
        hb.reps.push(r);
        hb.tangents.push(m);
        hb.residuals.push(res);
    }
    Ok(hb)
}

/// Exact coordinates of integer matrices in the Z-span of a basis.
pub struct SpanSolver {
    basis: IMatrix,
    pivots: Vec<usize>,
    inverse: QMatrix,
}

impl SpanSolver {
    pub fn new(reps: &[Matrix<i64>]) -> Self {
        let r = reps.len();
        let width = reps.first().map_or(0, |m| m.rows() * m.cols());
        let basis = IMatrix::from_fn(r, width, |i, j| Integer::from(reps[i].data()[j]));
        // greedy column choice by elimination on the transpose
        let mut work = basis.to_rational();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..width {
            if row == r {
                break;
            }
            let Some(p) = (row..r).find(|&i| work[(i, c)] != 0) else { continue };
            work.swap_rows(row, p);
            for i in row + 1..r {
                if work[(i, c)] == 0 {
                    continue;
                }
                let f = Rational::from(&work[(i, c)] / &work[(row, c)]);
                for j in c..width {
                    let t = Rational::from(&f * &work[(row, j)]);
                    work[(i, j)] -= t;
                }
            }
            pivots.push(c);
            row += 1;
        }
        assert_eq!(pivots.len(), r, "basis is not linearly independent");
        let rows: Vec<usize> = (0..r).collect();
        let square = basis.submatrix(&rows, &pivots).to_rational();
        let inverse = square.inverse().expect("pivot block is invertible");
        SpanSolver { basis, pivots, inverse }
    }

    /// Integer coefficients c with Σ cᵢ Rᵢ = target, if they exist.
    pub fn solve(&self, target: &Matrix<i64>) -> Option<Vec<i64>> {
        let r = self.pivots.len();
        let t: Vec<Rational> = self.pivots.iter().map(|&c| Rational::from(target.data()[c])).collect();
        let mut coeffs = Vec::with_capacity(r);
        for j in 0..r {
            let mut s = Rational::new();
            for (i, ti) in t.iter().enumerate() {
                s += Rational::from(ti * &self.inverse[(i, j)]);
            }
            if *s.denom() != 1 {
                return None;
            }
            coeffs.push(s.numer().to_i64()?);
        }
        for (k, want) in target.data().iter().enumerate() {
            let mut acc = Integer::new();
            for (i, c) in coeffs.iter().enumerate() {
                acc += Integer::from(&self.basis[(i, k)] * *c);
            }
            if acc != *want {
                return None;
            }
        }
        Some(coeffs)
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct EndReport {
    pub rank: usize,
    pub identity: Vec<i64>,
    /// table[i][j] = coordinates of RᵢRⱼ.
    pub table: Vec<Vec<Vec<i64>>>,
}

/// Checks that the Z-span of an endomorphism basis is a ring with unit.
pub fn end_ring_check(pm: &PeriodMatrix, hb: &HomBasis) -> Result<EndReport> {
    let r = hb.rank();
    if r == 0 {
        return Err(Error::Verification("empty endomorphism basis; raise precision".into()));
    }
    let n = hb.reps[0].rows();
    let solver = SpanSolver::new(&hb.reps);
    let identity = solver
        .solve(&Matrix::<i64>::identity(n))
        .ok_or_else(|| Error::Verification("identity not in the span; raise precision".into()))?;
    let bits = pm.bits();
    let tol = ten_pow_neg((hb.scale / 2) as i32, bits);
    let mut table = vec![vec![vec![]; r]; r];
    for i in 0..r {
        for j in 0..r {
            let prod = hb.reps[i].mul(&hb.reps[j]);
            let c = solver
                .solve(&prod)
                .ok_or_else(|| Error::Verification(format!("product R{i}·R{j} leaves the span; raise precision")))?;
            let lhs = hb.tangents[i].cmul(&hb.tangents[j]);
            let mut rhs = CMatrix::zeros(pm.g, pm.g, bits);
            for (k, ck) in c.iter().enumerate() {
                if *ck != 0 {
                    let s = Float::with_val(bits, *ck);
                    rhs = Matrix::from_fn(pm.g, pm.g, |a, b| &rhs[(a, b)] + &hb.tangents[k][(a, b)].scale(&s));
                }
            }
            if lhs.csub(&rhs).max_abs() >= tol {
                return Err(Error::Verification(format!("tangent product M{i}·M{j} mismatch")));
            }
            table[i][j] = c;
        }
    }
    Ok(EndReport { rank: r, identity, table })
}
