//! End-to-end runs: period matrix → Hom lattice → principal polarizations
//! → automorphism groups → identification → Torelli correction.

use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::group_id::{match_names, reference, GroupFingerprint, RefGroup, TABLE_NAMES};
use crate::polarization::{compat_basis, cull_pb, riemann_check, AltForm, PositivityTest};
use crate::symplectic_aut::{auto_equivalence, isomorphism_classes, torelli_adjust};
use crate::torus::{complex_structure, default_scale, end_ring_check, hom_basis, PeriodMatrix};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

pub const DEFAULT_PRECISION: u32 = 100;
pub const DEFAULT_BUDGET: i64 = 2;

/// Reference groups for every table name, built once.
pub fn table_references() -> &'static [RefGroup] {
    static REFS: OnceLock<Vec<RefGroup>> = OnceLock::new();
    REFS.get_or_init(|| {
        let mut names: Vec<&str> = TABLE_NAMES.to_vec();
        for extra in ["C2", "C4", "C2xC2", "S4", "C4^2:S3", "C3xS4"] {
            if !names.contains(&extra) {
                names.push(extra);
            }
        }
        names.iter().map(|n| reference(n).expect("table names are in the grammar")).collect()
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EndoReport {
    pub genera: (usize, usize),
    pub precision_digits: u32,
    pub rank: usize,
    /// Worst tangent residual over the basis.
    pub max_residual: f64,
    /// Closure under composition; only for a torus against itself.
    pub closed: Option<bool>,
    pub structure_exact: Option<bool>,
}

pub fn endo(pm1: &PeriodMatrix, pm2: Option<&PeriodMatrix>) -> Result<EndoReport> {
    let digits = pm2.map_or(pm1.precision_digits, |p| p.precision_digits.min(pm1.precision_digits));
    let a = pm1.with_precision(digits)?;
    let b = match pm2 {
        Some(p) => p.with_precision(digits)?,
        None => a.clone(),
    };
    let hb = hom_basis(&a, &b, default_scale(digits))?;
    let max_residual = hb.residuals.iter().map(|r| r.to_f64()).fold(0.0, f64::max);
    let (closed, exact) = if pm2.is_none() {
        (Some(end_ring_check(&a, &hb).is_ok()), Some(complex_structure(&a)?.exact.is_some()))
    } else {
        (None, None)
    };
    Ok(EndoReport { genera: (a.g, b.g), precision_digits: digits, rank: hb.rank(), max_residual, closed, structure_exact: exact })
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarizationReport {
    pub form: AltForm,
    pub frobenius: AltForm,
    pub riemann_residual: f64,
    pub riemann_positive: bool,
    /// Index into the isomorphism classes, once classified.
    pub iso_class: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarizeReport {
    pub precision_digits: u32,
    pub ns_rank: usize,
    pub budget: i64,
    pub polarizations: Vec<PolarizationReport>,
    pub warnings: Vec<String>,
}

pub fn polarize(pm: &PeriodMatrix, budget: i64) -> Result<PolarizeReport> {
    let cs = complex_structure(pm)?;
    let ns = compat_basis(pm, &cs)?;
    let mut warnings = Vec::new();
    let pols = if ns.is_empty() {
        warnings.push("no compatible alternating forms".to_string());
        vec![]
    } else {
        cull_pb(&ns, &PositivityTest::new(pm, &cs), budget)?
    };
    if pols.is_empty() {
        warnings.push(format!("no principal polarization found at budget {budget}"));
    }
    let mut out = Vec::with_capacity(pols.len());
    for p in &pols {
        let rc = riemann_check(pm, p)?;
        out.push(PolarizationReport {
            form: p.form.clone(),
            frobenius: p.frobenius.clone(),
            riemann_residual: rc.symmetric_residual,
            riemann_positive: rc.positive,
            iso_class: None,
        });
    }
    Ok(PolarizeReport { precision_digits: pm.precision_digits, ns_rank: ns.len(), budget, polarizations: out, warnings })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub representative: usize,
    pub size: usize,
    pub order: usize,
    pub generators: Vec<AltForm>,
    pub auto_class: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Canonical {
    /// Torelli-adjusted order equals the expected Aut(C) order, uniquely.
    Matched,
    Undetermined,
    No,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorelliReport {
    pub curve_aut_order: usize,
    pub fingerprint: GroupFingerprint,
    pub names: Vec<String>,
    pub canonical: Canonical,
}

#[derive(Clone, Debug, Serialize)]
pub struct AutoClassReport {
    pub order: usize,
    pub fingerprint: GroupFingerprint,
    pub names: Vec<String>,
    pub iso_classes: Vec<usize>,
    pub polarizations: usize,
    pub torelli: Option<TorelliReport>,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub budget: Option<i64>,
    pub hyperelliptic: Option<bool>,
    pub expected_curve_order: Option<u64>,
    /// Breaks ties between classes of the expected order.
    pub expected_curve_name: Option<String>,
    pub canonical_undetermined: bool,
}

impl RunOptions {
    pub fn for_entry(e: &CatalogEntry) -> Self {
        RunOptions {
            budget: Some(e.budget),
            hyperelliptic: Some(e.hyperelliptic),
            expected_curve_order: Some(e.curve_aut_order),
            expected_curve_name: Some(e.curve_aut_name.to_string()),
            canonical_undetermined: e.canonical_undetermined,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub input: String,
    pub precision_digits: u32,
    pub genus: usize,
    pub hyperelliptic: Option<bool>,
    pub hom_rank: usize,
    pub end_closed: bool,
    pub structure_exact: bool,
    pub ns_rank: usize,
    pub budget: i64,
    pub polarizations: Vec<PolarizationReport>,
    pub iso_classes: Vec<ClassReport>,
    pub auto_classes: Vec<AutoClassReport>,
    /// Index into `auto_classes` of the class designated canonical.
    pub canonical_class: Option<usize>,
    pub timings: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn orders(&self) -> Vec<usize> {
        self.auto_classes.iter().map(|a| a.order).collect()
    }
}

/// The full algorithm on one period matrix.
pub fn run(pm: &PeriodMatrix, opts: &RunOptions) -> Result<RunReport> {
    let budget = opts.budget.unwrap_or(DEFAULT_BUDGET);
    if budget < 1 {
        return Err(Error::InvalidInput("budget must be at least 1".into()));
    }
    let hyperelliptic = opts.hyperelliptic.or(pm.hyperelliptic);
    let mut timings = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timings: &mut BTreeMap<String, f64>| {
        timings.insert(name.to_string(), clock.elapsed().as_secs_f64());
        clock = Instant::now();
    };

    let cs = complex_structure(pm)?;
    let hb = hom_basis(pm, pm, default_scale(pm.precision_digits))?;
    let end_closed = end_ring_check(pm, &hb).is_ok();
    if !end_closed {
        warnings.push("End lattice is not closed under composition".into());
    }
    lap("hom_lattice", &mut timings);

    let ns = compat_basis(pm, &cs)?;
    let pols = if ns.is_empty() { vec![] } else { cull_pb(&ns, &PositivityTest::new(pm, &cs), budget)? };
    if pols.is_empty() {
        warnings.push(format!("no principal polarization found at budget {budget}"));
    }
    let mut pol_reports = Vec::with_capacity(pols.len());
    for p in &pols {
        let rc = riemann_check(pm, p)?;
        if !rc.positive {
            return Err(Error::Verification("accepted polarization fails the Riemann positivity check".into()));
        }
        pol_reports.push(PolarizationReport {
            form: p.form.clone(),
            frobenius: p.frobenius.clone(),
            riemann_residual: rc.symmetric_residual,
            riemann_positive: rc.positive,
            iso_class: None,
        });
    }
    lap("polarizations", &mut timings);

    let classes = isomorphism_classes(&hb.reps, &pols)?;
    for (k, c) in classes.iter().enumerate() {
        for &m in &c.members {
            pol_reports[m].iso_class = Some(k);
        }
    }
    lap("isomorphism_classes", &mut timings);

    let refs = table_references();
    let autos = auto_equivalence(&classes)?;
    let mut iso_reports: Vec<ClassReport> = classes
        .iter()
        .map(|c| ClassReport {
            representative: c.representative,
            size: c.members.len(),
            order: c.group.order,
            generators: c.group.generators.clone(),
            auto_class: 0,
        })
        .collect();
    let mut auto_reports = Vec::with_capacity(autos.len());
    for (a_idx, a) in autos.iter().enumerate() {
        for &k in &a.iso_classes {
            iso_reports[k].auto_class = a_idx;
        }
        let group = &classes[a.iso_classes[0]].group;
        let torelli = match hyperelliptic {
            Some(h) => {
                let t = torelli_adjust(group, h)?;
                let fp = t.group.fingerprint();
                Some(TorelliReport { curve_aut_order: t.curve_aut_order, names: match_names(&fp, refs), fingerprint: fp, canonical: Canonical::No })
            }
            None => None,
        };
        auto_reports.push(AutoClassReport {
            order: a.order,
            names: match_names(&a.fingerprint, refs),
            fingerprint: a.fingerprint.clone(),
            polarizations: a.iso_classes.iter().map(|&k| classes[k].members.len()).sum(),
            iso_classes: a.iso_classes.clone(),
            torelli,
        });
    }
    if hyperelliptic.is_none() {
        warnings.push("hyperelliptic status unknown; Torelli correction skipped".into());
    }
    let mut canonical_class = None;
    if let Some(expected) = opts.expected_curve_order {
        let mut hits: Vec<usize> = auto_reports
            .iter()
            .enumerate()
            .filter(|(_, a)| a.torelli.as_ref().is_some_and(|t| t.curve_aut_order as u64 == expected))
            .map(|(i, _)| i)
            .collect();
        if let (Some(name), true) = (&opts.expected_curve_name, hits.len() > 1) {
            let named: Vec<usize> =
                hits.iter().copied().filter(|&i| auto_reports[i].torelli.as_ref().is_some_and(|t| t.names.contains(name))).collect();
            if !named.is_empty() {
                hits = named;
            }
        }
        let mark = if hits.len() == 1 && !opts.canonical_undetermined { Canonical::Matched } else { Canonical::Undetermined };
        for &i in &hits {
            if let Some(t) = auto_reports[i].torelli.as_mut() {
                t.canonical = mark.clone();
            }
        }
        if mark == Canonical::Matched {
            canonical_class = Some(hits[0]);
        }
    }
    lap("groups", &mut timings);

    Ok(RunReport {
        input: pm.label.clone().unwrap_or_else(|| "period matrix".into()),
        precision_digits: pm.precision_digits,
        genus: pm.g,
        hyperelliptic,
        hom_rank: hb.rank(),
        end_closed,
        structure_exact: cs.exact.is_some(),
        ns_rank: ns.len(),
        budget,
        polarizations: pol_reports,
        iso_classes: iso_reports,
        auto_classes: auto_reports,
        canonical_class,
        timings,
        warnings,
    })
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "UPPERCASE")]
pub enum RowStatus {
    Pass,
    Fail,
    /// No builtin period matrix.
    Skip,
}

impl std::fmt::Display for RowStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RowStatus::Pass => "PASS",
            RowStatus::Fail => "FAIL",
            RowStatus::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub key: String,
    pub label: String,
    pub genus: u64,
    pub expected_curve_order: u64,
    pub expected_orders: Vec<u64>,
    pub found_orders: Vec<usize>,
    pub curve_order: Option<usize>,
    /// Names matching the canonical class's Torelli-adjusted group.
    pub curve_group: Vec<String>,
    pub status: RowStatus,
    pub details: Vec<String>,
}

/// Reproduce one catalog row and compare with its annotations.
pub fn table_row(e: &CatalogEntry, digits: u32) -> TableRow {
    let mut row = TableRow {
        key: e.key.into(),
        label: e.label.into(),
        genus: e.genus,
        expected_curve_order: e.curve_aut_order,
        expected_orders: e.jacobian_orders.to_vec(),
        found_orders: vec![],
        curve_order: None,
        curve_group: vec![],
        status: RowStatus::Fail,
        details: vec![],
    };
    if !e.has_period_matrix() {
        row.status = RowStatus::Skip;
        row.details.push(e.note.into());
        return row;
    }
    let report = e.period_matrix(digits).and_then(|pm| run(&pm, &RunOptions::for_entry(e)));
    let r = match report {
        Ok(r) => r,
        Err(err) => {
            row.details.push(err.to_string());
            return row;
        }
    };
    row.found_orders = r.orders();
    let curve_orders: Vec<usize> = r.auto_classes.iter().filter_map(|a| a.torelli.as_ref()).map(|t| t.curve_aut_order).collect();
    row.curve_order = r.canonical_class.and_then(|i| r.auto_classes[i].torelli.as_ref()).map(|t| t.curve_aut_order);
    let mut ok = r.genus as u64 == e.genus;
    if !ok {
        row.details.push(format!("genus {} != {}", r.genus, e.genus));
    }
    if !curve_orders.contains(&(e.curve_aut_order as usize)) {
        ok = false;
        row.details.push(format!("no class has curve automorphism order {}", e.curve_aut_order));
    }
    if let Some(t) = r.canonical_class.and_then(|i| r.auto_classes[i].torelli.as_ref()) {
        row.curve_group = t.names.clone();
        if !t.names.iter().any(|n| n == e.curve_aut_name) {
            ok = false;
            row.details.push(format!("canonical class is {:?}, not {}", t.names, e.curve_aut_name));
        }
    }
    let found: Vec<u64> = row.found_orders.iter().map(|&o| o as u64).collect();
    if e.orders_exhaustive {
        let missing: Vec<u64> = e.jacobian_orders.iter().copied().filter(|o| !found.contains(o)).collect();
        if !missing.is_empty() {
            ok = false;
            row.details.push(format!("missing orders {missing:?}"));
        }
    } else {
        let hits = found.iter().filter(|o| e.jacobian_orders.contains(o)).count();
        let extra: Vec<u64> = found.iter().copied().filter(|o| !e.jacobian_orders.contains(o)).collect();
        if !extra.is_empty() {
            row.details.push(format!("orders outside the expected list: {extra:?}"));
        }
        if hits < 3 {
            ok = false;
            row.details.push(format!("only {hits} classes with expected orders"));
        }
    }
    row.status = if ok { RowStatus::Pass } else { RowStatus::Fail };
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{digits_to_bits, CMatrix, HPComplex};

    fn gaussian() -> PeriodMatrix {
        let bits = digits_to_bits(40);
        let e = CMatrix::from_vec(1, 2, vec![HPComplex::from_i64(1, 0, bits), HPComplex::i(bits)]);
        PeriodMatrix::new(e, 40, Some("(1,i)".into()), None).unwrap()
    }

    #[test]
    fn gaussian_run() {
        let r = run(&gaussian(), &RunOptions { hyperelliptic: Some(true), ..Default::default() }).unwrap();
        assert_eq!((r.hom_rank, r.ns_rank, r.polarizations.len()), (2, 1, 1));
        assert_eq!(r.orders(), vec![4]);
        assert_eq!(r.auto_classes[0].names, vec!["C4".to_string()]);
    }

    #[test]
    fn unknown_hyperelliptic_status_skips_torelli() {
        let r = run(&gaussian(), &RunOptions::default()).unwrap();
        assert!(r.auto_classes[0].torelli.is_none());
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn endo_of_mismatched_genera_is_empty() {
        let pm2 = crate::catalog::lookup("8-134").unwrap().period_matrix(40).unwrap();
        let rep = endo(&gaussian(), Some(&pm2)).unwrap();
        assert_eq!(rep.rank, 0);
        assert_eq!(endo(&gaussian(), None).unwrap().rank, 2);
    }
}
