//! Builtin curves with their expected automorphism data.

use crate::cyclic_cover::{period_matrix, validate};
use crate::error::{Error, Result};
use crate::exact_linalg::hp::parse_float;
use crate::exact_linalg::{digits_to_bits, CMatrix, HPComplex};
use crate::torus::PeriodMatrix;
use rug::Float;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub enum Source {
    /// Cyclic cover of the sphere branched over three points.
    Cover { d: u64, indices: &'static [u64] },
    /// 4(1,3,3,1): literal matrix with trapezoid parameters b, c > 0.
    Trapezoid,
    /// Period matrix must be supplied as a file.
    External,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub label: &'static str,
    pub source: Source,
    /// Branching data (d, indices) even where no period matrix is synthesized.
    pub branching: Option<(u64, &'static [u64])>,
    pub hyperelliptic: bool,
    pub genus: u64,
    pub curve_aut_order: u64,
    /// Group of the curve in reference-grammar form.
    pub curve_aut_name: &'static str,
    /// Orders of Aut(Jac, a) over the listed principal polarizations.
    pub jacobian_orders: &'static [u64],
    pub jacobian_names: &'static [&'static str],
    /// False when the expected list comes from a partial search.
    pub orders_exhaustive: bool,
    /// The canonical class cannot be singled out by matching orders.
    pub canonical_undetermined: bool,
    pub budget: i64,
    pub note: &'static str,
}

impl CatalogEntry {
    /// Period matrix at `digits`; for the trapezoid family b = c = 1.
    pub fn period_matrix(&self, digits: u32) -> Result<PeriodMatrix> {
        let mut pm = match &self.source {
            Source::Cover { d, indices } => period_matrix(&validate(*d, indices)?, digits)?,
            Source::Trapezoid => trapezoid_matrix("1", "1", digits)?,
            Source::External => {
                return Err(Error::Unsupported(format!("{}: no builtin period matrix; supply one as a file ({})", self.label, self.note)))
            }
        };
        pm.label = Some(self.label.to_string());
        pm.hyperelliptic = Some(self.hyperelliptic);
        Ok(pm)
    }

    pub fn has_period_matrix(&self) -> bool {
        !matches!(self.source, Source::External)
    }
}

/// Period matrix of 4(1,3,3,1) for trapezoid side lengths b, c > 0.
pub fn trapezoid_matrix(b: &str, c: &str, digits: u32) -> Result<PeriodMatrix> {
    let bits = digits_to_bits(digits);
    let b = parse_float(b, bits)?;
    let c = parse_float(c, bits)?;
    if b <= 0 || c <= 0 {
        return Err(Error::InvalidInput("trapezoid parameters must be positive".into()));
    }
    // e^{iπk/4}
    let e8 = |k: i64| HPComplex::exp_pi_i(k, 4, bits);
    let one = HPComplex::from_i64(1, 0, bits);
    let s = Float::with_val(bits, Float::with_val(bits, 2).sqrt() + &b);
    let ci = HPComplex::new(Float::new(bits), c.clone());
    let rows = vec![
        vec![one.clone(), e8(2), e8(4), e8(1).scale(&s), e8(3).scale(&s), e8(-3).scale(&s)],
        vec![one.clone(), e8(4), one.clone(), ci.clone(), -&ci, ci],
        vec![one, e8(-2), e8(4), e8(3).scale(&b), e8(9).scale(&b), e8(15).scale(&b)],
    ];
    let data = rows.into_iter().flatten().collect();
    PeriodMatrix::new(CMatrix::from_vec(3, 6, data), digits, Some("4(1,3,3,1)".into()), Some(true))
}

pub fn builtin() -> Vec<CatalogEntry> {
    let e = |key, label, source: Source, branching, hyperelliptic, genus, order, name| CatalogEntry {
        key,
        label,
        source,
        branching,
        hyperelliptic,
        genus,
        curve_aut_order: order,
        curve_aut_name: name,
        jacobian_orders: &[],
        jacobian_names: &[],
        orders_exhaustive: true,
        canonical_undetermined: false,
        budget: 2,
        note: "",
    };
    vec![
        e("8-134", "8(1,3,4)", Source::Cover { d: 8, indices: &[1, 3, 4] }, Some((8, &[1u64, 3, 4][..])), true, 2, 48, "GL(2,3)"),
        e("6-114", "6(1,1,4)", Source::Cover { d: 6, indices: &[1, 1, 4] }, Some((6, &[1, 1, 4][..])), true, 2, 24, "S3:D4"),
        CatalogEntry {
            jacobian_orders: &[48, 336],
            jacobian_names: &["S4xC2", "GL(3,2)xC2"],
            ..e("klein", "7(1,2,4)", Source::Cover { d: 7, indices: &[1, 2, 4] }, Some((7, &[1, 2, 4][..])), false, 3, 168, "GL(3,2)")
        },
        CatalogEntry {
            jacobian_orders: &[64, 192],
            jacobian_names: &["C4wrC2xC2", "C4^2:S3xC2"],
            ..e("fermat", "8(1,2,5)", Source::Cover { d: 8, indices: &[1, 2, 5] }, Some((8, &[1, 2, 5][..])), false, 3, 96, "C4^2:S3")
        },
        e("12-138", "12(1,3,8)", Source::Cover { d: 12, indices: &[1, 3, 8] }, Some((12, &[1, 3, 8][..])), false, 3, 48, "C4.A4"),
        e("8-116", "8(1,1,6)", Source::Cover { d: 8, indices: &[1, 1, 6] }, Some((8, &[1, 1, 6][..])), true, 3, 32, "D4:C4"),
        CatalogEntry {
            jacobian_orders: &[12, 24, 32],
            jacobian_names: &["D6", "C4xS3", "C4xD4"],
            ..e("12-156", "12(1,5,6)", Source::Cover { d: 12, indices: &[1, 5, 6] }, Some((12, &[1, 5, 6][..])), true, 3, 24, "C4xS3")
        },
        CatalogEntry {
            note: "literal period matrix with b = c = 1",
            ..e("4-1331", "4(1,3,3,1)", Source::Trapezoid, Some((4, &[1, 3, 3, 1][..])), true, 3, 16, "C2xD4")
        },
        CatalogEntry {
            jacobian_orders: &[32, 240],
            jacobian_names: &["C2^2xD4", "C2xS5"],
            note: "the period matrix in its pure form is not available; file input only",
            ..e("bring", "5(1,2,4,3)", Source::External, Some((5, &[1, 2, 4, 3][..])), false, 4, 120, "S5")
        },
        CatalogEntry {
            jacobian_orders: &[16, 24, 32, 48, 96, 144, 288, 576, 864],
            jacobian_names: &[
                "C2^4",
                "C2^2xC6",
                "C2^2xD4",
                "C2^3xC6",
                "C2^2xS4",
                "C6xS4",
                "C2xC6xC3:D4",
                "C3xC3:D4xD4",
                "C6xS3xC3:D4",
            ],
            orders_exhaustive: false,
            canonical_undetermined: true,
            budget: 1,
            note: "search budget 1: the compatible-form lattice has rank 16",
            ..e("iwp", "12(1,4,7)", Source::Cover { d: 12, indices: &[1, 4, 7] }, Some((12, &[1, 4, 7][..])), false, 4, 72, "C3xS4")
        },
        CatalogEntry {
            jacobian_orders: &[32, 96],
            jacobian_names: &["C2^5", "C2^2xS4"],
            note: "modular curve; period matrix must be computed externally",
            ..e("x0-63", "X0(63)", Source::External, None, false, 5, 48, "C2xS4")
        },
    ]
}

pub fn lookup(key: &str) -> Option<CatalogEntry> {
    let k = key.to_ascii_lowercase();
    builtin().into_iter().find(|e| e.key == k || e.label.eq_ignore_ascii_case(&k))
}
