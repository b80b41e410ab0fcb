//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the heavy end-to-end runs
//! are computed once and shared. `ACCEPTANCE_ONLY=6,7` restricts the set;
//! `JACAUT_X063=<file>` supplies a genuine X0(63) period matrix.

use jacaut::catalog::lookup;
use jacaut::cyclic_cover::{form_divisor, genus, multipliers, period_matrix, validate, BranchingData};
use jacaut::exact_linalg::{digits_to_bits, CMatrix, HPComplex, Matrix};
use jacaut::group_id::{reference, FiniteGroup, GroupFingerprint};
use jacaut::io::{read_file, write_file};
use jacaut::pipeline::{endo, run, RunOptions, RunReport};
use jacaut::polarization::{frobenius_form, standard_form};
use jacaut::symplectic_aut::fincke_pohst;
use jacaut::torus::PeriodMatrix;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rug::float::Constant;
use rug::Float;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

const DIGITS: u32 = 100;

/// Criteria that cannot hold as stated; they are run and reported, but do
/// not fail the target.
const KNOWN_UNATTAINABLE: &[(u8, &str)] =
    &[(5, "τ = 0.3+1.7i satisfies 50τ²−30τ+149 = 0, so End(1,τ) has rank 2, not 1")];

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Check {
    Check { pass, detail: detail.into() }
}

#[derive(Default)]
struct Runs {
    reports: BTreeMap<&'static str, RunReport>,
    seconds: BTreeMap<&'static str, f64>,
}

impl Runs {
    fn get(&mut self, key: &'static str) -> &RunReport {
        if !self.reports.contains_key(key) {
            let e = lookup(key).expect("catalog key");
            let t = Instant::now();
            let pm = e.period_matrix(DIGITS).expect("builtin period matrix");
            let r = run(&pm, &RunOptions::for_entry(&e)).expect("pipeline run");
            self.seconds.insert(key, t.elapsed().as_secs_f64());
            self.reports.insert(key, r);
        }
        &self.reports[key]
    }
}

fn fp(name: &str) -> GroupFingerprint {
    reference(name).expect("reference group").fingerprint
}

// ---------------------------------------------------------------- 1–3

fn c1() -> Check {
    let t = Instant::now();
    let rows: [(u64, &[u64], u64); 10] = [
        (8, &[1, 3, 4], 2),
        (6, &[1, 1, 4], 2),
        (7, &[1, 2, 4], 3),
        (8, &[1, 2, 5], 3),
        (12, &[1, 3, 8], 3),
        (8, &[1, 1, 6], 3),
        (12, &[1, 5, 6], 3),
        (4, &[1, 3, 3, 1], 3),
        (5, &[1, 2, 4, 3], 4),
        (12, &[1, 4, 7], 4),
    ];
    let bad: Vec<String> = rows
        .iter()
        .filter_map(|&(d, idx, g)| {
            let got = genus(&validate(d, idx).ok()?);
            (got != g).then(|| format!("{d}{idx:?}: {got} ≠ {g}"))
        })
        .collect();
    let secs = t.elapsed().as_secs_f64();
    check(bad.is_empty() && secs < 1.0, format!("10 rows, mismatches {bad:?}, {secs:.3}s"))
}

fn c2() -> Check {
    let t = Instant::now();
    let klein = multipliers(&validate(7, &[1, 2, 4]).unwrap()).unwrap();
    let mut covers = 0;
    let mut bad = Vec::new();
    for d in 2..=50u64 {
        for a in 1..d {
            for b in a..d {
                let c = (2 * d - a - b) % d;
                if c < b || c == 0 {
                    continue;
                }
                let Ok(bd) = validate(d, &[a, b, c]) else { continue };
                covers += 1;
                if multipliers(&bd).unwrap().len() as u64 != genus(&bd) {
                    bad.push(bd.label());
                }
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    check(
        klein == vec![1, 2, 4] && bad.is_empty() && secs < 5.0,
        format!("7(1,2,4) → {klein:?}; {covers} covers scanned, {} with |multipliers| ≠ g, {secs:.2}s", bad.len()),
    )
}

/// A divisor as sorted (branch, preimages, order) with zero orders dropped.
type Divisor = Vec<(usize, u64, u64)>;

fn computed_divisors(d: u64, idx: &[u64]) -> Vec<Divisor> {
    let bd = BranchingData { d, indices: idx.to_vec() };
    let admissible: Vec<u64> = (1..d).filter(|&a| form_divisor(&bd, a).is_ok()).collect();
    let mut out: Vec<Divisor> = admissible
        .iter()
        .map(|&a| form_divisor(&bd, a).unwrap().into_iter().filter(|t| t.order > 0).map(|t| (t.branch, t.preimages, t.order)).collect())
        .collect();
    out.sort();
    out
}

fn c3() -> Check {
    // branch points are 0-based; (branch, number of preimages, order at each)
    let cases: Vec<(&str, u64, &[u64], Vec<Divisor>)> = vec![
        ("Klein", 7, &[1, 2, 4], vec![vec![(1, 1, 1), (2, 1, 3)], vec![(0, 1, 1), (1, 1, 3)], vec![(0, 1, 3), (2, 1, 1)]]),
        ("12(1,3,8)", 12, &[1, 3, 8], vec![vec![(2, 4, 1)], vec![(0, 1, 1), (1, 3, 1)], vec![(0, 1, 4)]]),
        // 4g(1,2g−1,2g), g = 2: (2i−2)p1 + (2g−2i)p2
        ("8(1,3,4)", 8, &[1, 3, 4], vec![vec![(1, 1, 2)], vec![(0, 1, 2)]]),
        // 2g+2(1,1,2g), g = 2: (i−1)(p1 + p2) + (g−i)·p3 over both preimages
        ("6(1,1,4)", 6, &[1, 1, 4], vec![vec![(2, 2, 1)], vec![(0, 1, 1), (1, 1, 1)]]),
        (
            "4(1,3,3,1)",
            4,
            &[1, 3, 3, 1],
            vec![vec![(1, 1, 2), (2, 1, 2)], vec![(0, 1, 1), (1, 1, 1), (2, 1, 1), (3, 1, 1)], vec![(0, 1, 2), (3, 1, 2)]],
        ),
    ];
    let mut bad = Vec::new();
    for (name, d, idx, mut expected) in cases {
        expected.sort();
        let got = computed_divisors(d, idx);
        if got != expected {
            bad.push(format!("{name}: {got:?}"));
        }
    }
    check(bad.is_empty(), format!("5 divisor sets; mismatches {bad:?}"))
}

// ---------------------------------------------------------------- 4

/// Displayed entries as angles in units of π: e^{πi·p/q}.
fn oracle(rows: &[&[&str]], bits: u32) -> Vec<Vec<(Float, Float)>> {
    let pi = Float::with_val(bits, Constant::Pi);
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|s| {
                    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
                    let theta = Float::with_val(bits, &pi * p.parse::<i64>().unwrap()) / q.parse::<i64>().unwrap();
                    (Float::with_val(bits, theta.cos_ref()), Float::with_val(bits, theta.sin_ref()))
                })
                .collect()
        })
        .collect()
}

fn max_deviation(pm: &PeriodMatrix, want: &[Vec<(Float, Float)>]) -> f64 {
    let mut worst = 0f64;
    for (i, row) in want.iter().enumerate() {
        for (j, (re, im)) in row.iter().enumerate() {
            let z = &pm.entries[(i, j)];
            let d = Float::with_val(400, &z.re - re).abs().max(&Float::with_val(400, &z.im - im).abs());
            worst = worst.max(d.to_f64());
        }
    }
    worst
}

fn c4() -> Check {
    let bits = 400;
    let klein: Vec<Vec<String>> =
        [1, 2, 4].iter().map(|a| (0..6).map(|k| format!("{}/7", 2 * a * k)).collect()).collect();
    let klein_rows: Vec<Vec<&str>> = klein.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
    let cases: Vec<(&str, u64, &[u64], Vec<Vec<&str>>)> = vec![
        ("7(1,2,4)", 7, &[1, 2, 4], klein_rows),
        ("8(1,3,4)", 8, &[1, 3, 4], vec![vec!["0", "1/4", "1/2", "3/4"], vec!["0", "3/4", "-1/2", "1/4"]]),
        ("6(1,1,4)", 6, &[1, 1, 4], vec![vec!["0", "1/3", "2/3", "1"], vec!["0", "2/3", "-2/3", "0"]]),
        (
            "12(1,5,6)",
            12,
            &[1, 5, 6],
            vec![
                vec!["0", "1/6", "2/6", "3/6", "4/6", "5/6"],
                vec!["0", "1/2", "2/2", "3/2", "4/2", "5/2"],
                vec!["0", "5/6", "10/6", "15/6", "20/6", "25/6"],
            ],
        ),
        (
            "8(1,1,6)",
            8,
            &[1, 1, 6],
            vec![
                vec!["0", "1/4", "1/2", "3/4", "1", "-3/4"],
                vec!["0", "1/2", "1", "-1/2", "0", "1/2"],
                vec!["0", "3/4", "-1/2", "1/4", "1", "-1/4"],
            ],
        ),
        (
            "12(1,3,8)",
            12,
            &[1, 3, 8],
            vec![
                vec!["0", "1/6", "1/3", "1/2", "2/3", "5/6"],
                vec!["0", "1/3", "2/3", "1", "-2/3", "-1/3"],
                vec!["0", "5/6", "-1/3", "1/2", "-2/3", "1/6"],
            ],
        ),
        (
            "12(1,4,7)",
            12,
            &[1, 4, 7],
            vec![
                vec!["0", "1/6", "1/3", "1/2", "2/3", "5/6", "1", "-5/6"],
                vec!["0", "1/3", "2/3", "1", "-2/3", "-1/3", "0", "1/3"],
                vec!["0", "2/3", "-2/3", "0", "2/3", "-2/3", "0", "2/3"],
                vec!["0", "-5/6", "1/3", "-1/2", "2/3", "-1/6", "1", "1/6"],
            ],
        ),
    ];
    let mut bad = Vec::new();
    let mut worst = 0f64;
    for (name, d, idx, rows) in cases {
        let pm = period_matrix(&validate(d, idx).unwrap(), DIGITS).unwrap();
        let rows: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
        let want = oracle(&rows, bits);
        if pm.g != want.len() || pm.entries.cols() != want[0].len() {
            bad.push(format!("{name}: shape"));
            continue;
        }
        let dev = max_deviation(&pm, &want);
        worst = worst.max(dev);
        if !(dev < 1e-50) {
            bad.push(format!("{name}: {dev:e}"));
        }
    }
    check(bad.is_empty(), format!("7 displayed matrices, worst deviation {worst:e}; failures {bad:?}"))
}

// ---------------------------------------------------------------- 5

fn elliptic(tau: HPComplex) -> PeriodMatrix {
    let bits = digits_to_bits(DIGITS);
    PeriodMatrix::new(CMatrix::from_vec(1, 2, vec![HPComplex::from_i64(1, 0, bits), tau]), DIGITS, None, Some(true)).unwrap()
}

fn c5() -> Check {
    let t = Instant::now();
    let bits = digits_to_bits(DIGITS);
    let gauss = elliptic(HPComplex::i(bits));
    let tau = HPComplex::new(Float::with_val(bits, 3) / 10, Float::with_val(bits, 17) / 10);
    let generic = elliptic(tau);
    let opts = RunOptions { hyperelliptic: Some(true), ..Default::default() };
    let (g_rank, t_rank) = (endo(&gauss, None).unwrap().rank, endo(&generic, None).unwrap().rank);
    let g_run = run(&gauss, &opts).unwrap();
    let t_run = run(&generic, &opts).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let ok_gauss = g_rank == 2 && g_run.iso_classes.len() == 1 && g_run.orders() == vec![4];
    let ok_tau = t_rank == 1 && t_run.orders() == vec![2];
    check(
        ok_gauss && ok_tau && secs < 5.0,
        format!(
            "(1,i): End rank {g_rank}, {} class(es), orders {:?}; (1,0.3+1.7i): End rank {t_rank}, orders {:?}; {secs:.2}s",
            g_run.iso_classes.len(),
            g_run.orders(),
            t_run.orders()
        ),
    )
}

// ---------------------------------------------------------------- 6–9

fn c6(runs: &mut Runs) -> Check {
    let r = runs.get("klein").clone();
    let secs = runs.seconds["klein"];
    let orders = r.orders();
    let big = r.auto_classes.iter().find(|a| a.order == 336);
    let big_ok = big.is_some_and(|a| a.fingerprint == fp("GL(3,2)xC2"));
    let canon = r.canonical_class.and_then(|i| r.auto_classes[i].torelli.as_ref());
    let canon_ok = canon.is_some_and(|t| t.curve_aut_order == 168 && t.fingerprint == fp("GL(3,2)"));
    check(
        orders.len() >= 2 && orders.contains(&48) && orders.contains(&336) && big_ok && canon_ok && secs < 900.0,
        format!(
            "{} polarizations, auto classes {orders:?}, 336 ≅ GL(3,2)xC2: {big_ok}, canonical Torelli {:?}: {canon_ok}, {secs:.1}s",
            r.polarizations.len(),
            canon.map(|t| t.curve_aut_order)
        ),
    )
}

fn c7(runs: &mut Runs) -> Check {
    let r = runs.get("fermat").clone();
    let secs = runs.seconds["fermat"];
    let orders = r.orders();
    let t192 = r.auto_classes.iter().find(|a| a.order == 192).and_then(|a| a.torelli.as_ref()).map(|t| t.curve_aut_order);
    check(
        orders.contains(&64) && orders.contains(&192) && t192 == Some(96) && secs < 900.0,
        format!("{} polarizations, auto classes {orders:?}, 192 → Torelli {t192:?}, {secs:.1}s", r.polarizations.len()),
    )
}

fn c8(runs: &mut Runs) -> Check {
    let r = runs.get("12-156").clone();
    let orders = r.orders();
    let target = fp("C4xS3");
    let canon = r.auto_classes.iter().position(|a| a.order == 24 && a.fingerprint == target);
    let other = orders.iter().any(|o| *o == 12 || *o == 32);
    check(
        canon.is_some() && other && r.budget <= 3,
        format!(
            "budget {}, auto classes {orders:?}, C4xS3 class {:?} (designated {:?}), extra class from {{12, 32}}: {other}",
            r.budget, canon, r.canonical_class
        ),
    )
}

fn c9(runs: &mut Runs) -> Check {
    let r = runs.get("iwp").clone();
    let secs = runs.seconds["iwp"];
    let expected = [16, 24, 32, 48, 96, 144, 288, 576, 864];
    let orders = r.orders();
    let inside: Vec<usize> = orders.iter().copied().filter(|o| expected.contains(o)).collect();
    let extra: Vec<usize> = orders.iter().copied().filter(|o| !expected.contains(o)).collect();
    let exceeds = orders.iter().any(|&o| o > 144);
    check(
        inside.len() >= 3 && exceeds && r.budget <= 3 && secs < 3600.0,
        format!(
            "budget {}, {} polarizations, {} auto classes with expected orders {inside:?}; order > 2·72: {exceeds}; \
             unexpected orders {extra:?}; {secs:.0}s",
            r.budget,
            r.polarizations.len(),
            inside.len()
        ),
    )
}

// ---------------------------------------------------------------- 10

fn pos_def() -> impl Strategy<Value = Matrix<i64>> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(-2i64..=2, n * n).prop_map(move |a| {
            let a = Matrix::from_vec(n, n, a);
            let mut g = a.transpose().mul(&a);
            for i in 0..n {
                g[(i, i)] += 1;
            }
            g
        })
    })
}

/// Independent count: every vector in the box implied by the diagonal bound.
fn box_enumeration(g: &Matrix<i64>, target: i64) -> Vec<Vec<i64>> {
    let n = g.rows();
    // G = AᵗA + I has λ_min ≥ 1, so |x_i|² ≤ target
    let bound = (target as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    let mut x = vec![-bound; n];
    loop {
        let mut q = 0;
        for i in 0..n {
            for j in 0..n {
                q += x[i] * g[(i, j)] * x[j];
            }
        }
        if q == target {
            out.push(x.clone());
        }
        let mut k = 0;
        while k < n && x[k] == bound {
            x[k] = -bound;
            k += 1;
        }
        if k == n {
            break;
        }
        x[k] += 1;
    }
    out.sort();
    out
}

fn unimodular(n: usize) -> impl Strategy<Value = Matrix<i64>> {
    proptest::collection::vec((0..n, 0..n, -2i64..=2), 0..12).prop_map(move |ops| {
        let mut u = Matrix::<i64>::identity(n);
        for (dst, src, s) in ops {
            if dst != src {
                for i in 0..n {
                    u[(i, dst)] += s * u[(i, src)];
                }
            }
        }
        u
    })
}

fn inverse_unimodular(u: &Matrix<i64>) -> Matrix<i64> {
    u.to_big().to_rational().inverse().unwrap().to_integer().unwrap().to_i64().unwrap()
}

fn c10(runs: &mut Runs) -> Check {
    let mut notes = Vec::new();
    let mut ok = true;
    let mut runner = |cases: u32, name: &str, f: &mut dyn FnMut(&mut TestRunner) -> Result<(), String>| {
        let mut r = TestRunner::new(Config { cases, ..Config::default() });
        match f(&mut r) {
            Ok(()) => notes.push(format!("{name}: {cases} ok")),
            Err(e) => {
                ok = false;
                notes.push(format!("{name}: {e}"));
            }
        }
    };
    // box enumeration is cubic in the target, so the Gram is small
    runner(100, "Fincke–Pohst vs box", &mut |r| {
        r.run(&(pos_def(), 0i64..=20), |(g, t)| {
            prop_assert_eq!(fincke_pohst(&g, t), box_enumeration(&g, t));
            Ok(())
        })
        .map_err(|e| e.to_string())
    });
    runner(100, "Frobenius round trip", &mut |r| {
        r.run(&(1usize..=4).prop_flat_map(|g| (Just(g), unimodular(2 * g))), |(g, u)| {
            let e = u.transpose().mul(&standard_form(&vec![1; g])).mul(&u);
            let (c, d) = frobenius_form(&e).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(&d, &vec![1; g]);
            prop_assert_eq!(c.transpose().mul(&e).mul(&c), standard_form(&d));
            Ok(())
        })
        .map_err(|e| e.to_string())
    });

    let mut worst = 0f64;
    let mut count = 0;
    let mut groups: Vec<(String, Vec<Matrix<i64>>)> = Vec::new();
    for key in ["klein", "fermat", "12-156", "iwp"] {
        let r = runs.get(key);
        for p in &r.polarizations {
            count += 1;
            worst = worst.max(p.riemann_residual);
            ok &= p.riemann_positive;
        }
        if key != "iwp" {
            for c in &r.iso_classes {
                groups.push((format!("{key}/{}", c.order), c.generators.clone()));
            }
        }
    }
    ok &= worst < 1e-40;
    notes.push(format!("Riemann residual max {worst:e} over {count} polarizations"));

    let mut conj_bad = Vec::new();
    for (name, gens) in &groups {
        let n = gens[0].rows();
        let id = Matrix::<i64>::identity(n);
        let base = FiniteGroup::from_generators(id.clone(), gens).unwrap().0.fingerprint();
        let mut r = TestRunner::new(Config { cases: 10, ..Config::default() });
        let res = r.run(&unimodular(n), |u| {
            let uinv = inverse_unimodular(&u);
            let conj: Vec<Matrix<i64>> = gens.iter().map(|g| uinv.mul(g).mul(&u)).collect();
            let fp = FiniteGroup::from_generators(id.clone(), &conj).map_err(|e| TestCaseError::fail(e.to_string()))?.0.fingerprint();
            prop_assert_eq!(fp, base.clone());
            Ok(())
        });
        if let Err(e) = res {
            conj_bad.push(format!("{name}: {e}"));
        }
    }
    ok &= conj_bad.is_empty();
    notes.push(format!("fingerprint conjugation invariance on {} groups × 10, failures {conj_bad:?}", groups.len()));
    check(ok, notes.join("; "))
}

// ---------------------------------------------------------------- 11

fn synthetic_genus_five() -> PeriodMatrix {
    let bits = digits_to_bits(DIGITS);
    let sqrt = |n: u32| Float::with_val(bits, n).sqrt();
    // generic, mutually non-isogenous elliptic factors
    let t1 = HPComplex::new(sqrt(2) / 3, sqrt(3));
    let t2 = HPComplex::new(sqrt(5) / 7, sqrt(7));
    let base = lookup("12-156").unwrap().period_matrix(DIGITS).unwrap();
    let mut pm = base.product(&elliptic(t1)).unwrap().product(&elliptic(t2)).unwrap();
    pm.label = Some("12(1,5,6) x E x E'".into());
    pm
}

fn c11() -> Check {
    let dir = std::env::temp_dir().join(format!("jacaut-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("genus5.json");
    write_file(&synthetic_genus_five(), &path).unwrap();
    let pm = read_file(&path, Some(DIGITS)).unwrap();
    let _ = std::fs::remove_dir_all(&dir);
    let r = run(&pm, &RunOptions { budget: Some(2), ..Default::default() }).unwrap();
    let mut detail = format!("synthetic g = {} file: {} polarizations, auto classes {:?}", pm.g, r.polarizations.len(), r.orders());
    let mut ok = pm.g == 5 && r.auto_classes.len() >= 2;
    match std::env::var("JACAUT_X063") {
        Ok(file) => {
            let e = lookup("x0-63").unwrap();
            let x = read_file(std::path::Path::new(&file), Some(DIGITS)).unwrap();
            let rx = run(&x, &RunOptions::for_entry(&e)).unwrap();
            let orders = rx.orders();
            ok &= x.g == 5 && orders.contains(&32) && orders.contains(&96);
            detail += &format!("; X0(63) file: auto classes {orders:?}");
        }
        Err(_) => detail += "; genuine X0(63) matrix not supplied, order check skipped",
    }
    check(ok, detail)
}

// ----------------------------------------------------------------

fn main() {
    let only: Option<Vec<u8>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut runs = Runs::default();
    let criteria: Vec<(u8, &str, Box<dyn FnMut(&mut Runs) -> Check>)> = vec![
        (1, "genus table", Box::new(|_| c1())),
        (2, "multipliers", Box::new(|_| c2())),
        (3, "divisors", Box::new(|_| c3())),
        (4, "period matrices", Box::new(|_| c4())),
        (5, "elliptic sanity", Box::new(|_| c5())),
        (6, "Klein end-to-end", Box::new(c6)),
        (7, "Fermat end-to-end", Box::new(c7)),
        (8, "12(1,5,6)", Box::new(c8)),
        (9, "I-WP", Box::new(c9)),
        (10, "property suites", Box::new(c10)),
        (11, "genus-5 file input", Box::new(|_| c11())),
    ];
    let mut unexpected = Vec::new();
    for (id, name, mut f) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let t = Instant::now();
        let c = catch_unwind(AssertUnwindSafe(|| f(&mut runs))).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            check(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let known = KNOWN_UNATTAINABLE.iter().find(|(k, _)| *k == id);
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {id:>2} {verdict} [{name}] {} ({:.1}s)", c.detail, t.elapsed().as_secs_f64());
        if let (false, Some((_, why))) = (c.pass, known) {
            line += &format!(" — known unattainable: {why}");
        }
        println!("{line}");
        if !c.pass && known.is_none() {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
