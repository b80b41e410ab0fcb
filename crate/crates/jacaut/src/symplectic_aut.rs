//! Isomorphisms between principally polarized tori as short vectors of
//! the trace form on the Hom lattice, the groups they form, and the
//! Torelli correction from Jacobian to curve.

use crate::error::{Error, Result};
use crate::exact_linalg::lll::{default_delta, lll_gram};
use crate::exact_linalg::{cholesky, Matrix};
use crate::group_id::{FiniteGroup, GroupElem, GroupFingerprint};
use crate::polarization::{AltForm, Polarization};
use serde::Serialize;
use std::collections::HashSet;

/// Gram matrix of R ↦ tr(E₁⁻¹RᵗE₂R) on the Hom lattice basis.
///
/// The entries tr(E₁⁻¹BᵢᵗE₂Bⱼ) are already symmetric in i, j and integral
/// for unimodular E₁, so no doubling is needed; isomorphisms have value
/// `target` = 2g.
#[derive(Clone, Debug, Serialize)]
pub struct TraceGram {
    pub gram: Matrix<i64>,
    pub target: i64,
}

fn unimodular_inverse(e: &AltForm) -> Result<AltForm> {
    let inv = e.to_big().to_rational().inverse().ok_or_else(|| Error::InvalidInput("form is singular".into()))?;
    inv.to_integer()
        .and_then(|m| m.to_i64())
        .ok_or_else(|| Error::InvalidInput("form is not principal".into()))
}

pub fn trace_gram(reps: &[Matrix<i64>], e1: &AltForm, e2: &AltForm) -> Result<TraceGram> {
    let n = e1.rows();
    let e1inv = unimodular_inverse(e1)?;
    // Mᵢ = E₁⁻¹BᵢᵗE₂, Q_ij = tr(MᵢBⱼ)
    let ms: Vec<Matrix<i64>> = reps.iter().map(|b| e1inv.mul(&b.transpose()).mul(e2)).collect();
    let r = reps.len();
    let mut gram = Matrix::from_fn(r, r, |_, _| 0i64);
    for i in 0..r {
        for j in i..r {
            let mut t = 0i128;
            for a in 0..n {
                for b in 0..n {
                    t += i128::from(ms[i][(a, b)]) * i128::from(reps[j][(b, a)]);
                }
            }
            let t = i64::try_from(t).map_err(|_| Error::Verification("trace form overflow".into()))?;
            gram[(i, j)] = t;
            gram[(j, i)] = t;
        }
    }
    if r > 0 && cholesky(&gram.to_big().to_rational()).is_none() {
        return Err(Error::Verification("trace form is not positive definite".into()));
    }
    Ok(TraceGram { gram, target: n as i64 })
}

struct Enumerator {
    r: usize,
    d: Vec<f64>,
    /// u[k][j] for j > k: q(y) = Σ d_k (y_k + Σ_j u_kj y_j)²
    u: Vec<Vec<f64>>,
    gram: Matrix<i64>,
    target: i64,
    bound: f64,
    y: Vec<i64>,
}

impl Enumerator {
    fn new(gram: Matrix<i64>, target: i64) -> Self {
        let r = gram.rows();
        let mut d = vec![0f64; r];
        let mut u = vec![vec![0f64; r]; r];
        for k in 0..r {
            let mut dk = gram[(k, k)] as f64;
            for i in 0..k {
                dk -= u[i][k] * u[i][k] * d[i];
            }
            d[k] = dk;
            for j in k + 1..r {
                let mut s = gram[(k, j)] as f64;
                for i in 0..k {
                    s -= u[i][k] * u[i][j] * d[i];
                }
                u[k][j] = s / dk;
            }
        }
        // exact check at the leaves; the slack only has to cover roundoff
        let bound = target as f64 * (1.0 + 1e-9) + 1e-9;
        Enumerator { r, d, u, gram, target, bound, y: vec![0; r] }
    }

    fn exact_value(&self) -> i128 {
        let mut t = 0i128;
        for i in 0..self.r {
            if self.y[i] == 0 {
                continue;
            }
            let mut s = 0i128;
            for j in 0..self.r {
                s += i128::from(self.gram[(i, j)]) * i128::from(self.y[j]);
            }
            t += i128::from(self.y[i]) * s;
        }
        t
    }

    /// Returns false once `visit` asks to stop.
    fn run(&mut self, k: usize, used: f64, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        let mut c = 0f64;
        for j in k + 1..self.r {
            c -= self.u[k][j] * self.y[j] as f64;
        }
        let rem = self.bound - used;
        if rem < 0.0 {
            return true;
        }
        let w = (rem / self.d[k]).sqrt();
        let (lo, hi) = ((c - w).ceil() as i64, (c + w).floor() as i64);
        for v in lo..=hi {
            self.y[k] = v;
            let t = v as f64 - c;
            let next = used + self.d[k] * t * t;
            if next > self.bound {
                continue;
            }
            if k == 0 {
                if self.exact_value() == i128::from(self.target) && !visit(&self.y) {
                    self.y[k] = 0;
                    return false;
                }
            } else if !self.run(k - 1, next, visit) {
                self.y[k] = 0;
                return false;
            }
        }
        self.y[k] = 0;
        true
    }
}

/// Calls `visit` on every λ with λᵗQλ = target until it returns false.
///
/// The form is LLL-reduced first; the enumeration runs in double
/// precision with a small slack and every leaf is confirmed exactly.
pub fn fincke_pohst_each(gram: &Matrix<i64>, target: i64, visit: &mut dyn FnMut(&[i64]) -> bool) {
    let r = gram.rows();
    if r == 0 || target < 0 {
        if target == 0 {
            visit(&[]);
        }
        return;
    }
    let (t, reduced) = lll_gram(&gram.to_big(), &default_delta());
    let t = t.to_i64().expect("LLL transform fits in i64");
    let reduced = reduced.to_i64().expect("reduced Gram fits in i64");
    let mut en = Enumerator::new(reduced, target);
    let mut lam = vec![0i64; r];
    en.run(r - 1, 0.0, &mut |y: &[i64]| {
        // λ = y·T
        for (j, l) in lam.iter_mut().enumerate() {
            *l = (0..r).map(|i| y[i] * t[(i, j)]).sum();
        }
        visit(&lam)
    });
}

/// All λ ∈ Zʳ with λᵗQλ = target, in lexicographic order.
pub fn fincke_pohst(gram: &Matrix<i64>, target: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    fincke_pohst_each(gram, target, &mut |v| {
        out.push(v.to_vec());
        true
    });
    out.sort();
    out
}

fn combine(reps: &[Matrix<i64>], lam: &[i64]) -> Matrix<i64> {
    let n = reps[0].rows();
    let mut r = Matrix::from_fn(n, reps[0].cols(), |_, _| 0i64);
    for (b, &c) in reps.iter().zip(lam) {
        if c != 0 {
            for (x, y) in r.data_mut().iter_mut().zip(b.data()) {
                *x += c * y;
            }
        }
    }
    r
}

fn is_isomorphism(r: &Matrix<i64>, e1: &AltForm, e2: &AltForm) -> bool {
    r.transpose().mul(e2).mul(r) == *e1 && r.to_big().det().clone().abs() == 1
}

/// Every R in the Hom lattice with RᵗE₂R = E₁ and det R = ±1, sorted.
pub fn isomorphisms(reps: &[Matrix<i64>], e1: &AltForm, e2: &AltForm) -> Result<Vec<Matrix<i64>>> {
    if reps.is_empty() {
        return Ok(vec![]);
    }
    let tg = trace_gram(reps, e1, e2)?;
    let mut out = Vec::new();
    fincke_pohst_each(&tg.gram, tg.target, &mut |lam| {
        let r = combine(reps, lam);
        if is_isomorphism(&r, e1, e2) {
            out.push(r);
        }
        true
    });
    out.sort();
    Ok(out)
}

/// First isomorphism found, if any.
pub fn find_isomorphism(reps: &[Matrix<i64>], e1: &AltForm, e2: &AltForm) -> Result<Option<Matrix<i64>>> {
    if reps.is_empty() {
        return Ok(None);
    }
    let tg = trace_gram(reps, e1, e2)?;
    let mut found = None;
    fincke_pohst_each(&tg.gram, tg.target, &mut |lam| {
        let r = combine(reps, lam);
        if is_isomorphism(&r, e1, e2) {
            found = Some(r);
            false
        } else {
            true
        }
    });
    Ok(found)
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixGroup {
    #[serde(skip)]
    pub elements: Vec<Matrix<i64>>,
    pub generators: Vec<Matrix<i64>>,
    pub order: usize,
}

impl MatrixGroup {
    pub fn abstract_group(&self) -> Result<FiniteGroup> {
        let n = self.elements[0].rows();
        Ok(FiniteGroup::from_generators(Matrix::<i64>::identity(n), &self.generators)?.0)
    }

    pub fn fingerprint(&self) -> Result<GroupFingerprint> {
        Ok(self.abstract_group()?.fingerprint())
    }
}

/// Maximum number of generator pairs tried when shortening the generating set.
const PAIR_ATTEMPTS: usize = 400;

/// Checks that `elements` is a group and finds a small generating set.
pub fn group_closure(mut elements: Vec<Matrix<i64>>) -> Result<MatrixGroup> {
    let Some(first) = elements.first() else {
        return Err(Error::InvalidInput("empty element set".into()));
    };
    let n = first.rows();
    let id = Matrix::<i64>::identity(n);
    elements.sort_by(|a, b| (a.norm_sq(), a).cmp(&(b.norm_sq(), b)));
    elements.dedup();
    let set: HashSet<&Matrix<i64>> = elements.iter().collect();
    if !set.contains(&id) {
        return Err(Error::Verification("element set lacks the identity".into()));
    }
    let target = elements.len();
    // greedy over elements of small norm
    let mut gens: Vec<Matrix<i64>> = Vec::new();
    let mut have: HashSet<Matrix<i64>> = HashSet::from([id.clone()]);
    for c in &elements {
        if have.len() == target {
            break;
        }
        if have.contains(c) {
            continue;
        }
        gens.push(c.clone());
        let (_, elems) = FiniteGroup::from_generators(id.clone(), &gens)?;
        if elems.len() > target || elems.iter().any(|e| !set.contains(e)) {
            return Err(Error::Verification("element set is not closed under multiplication".into()));
        }
        have = elems.into_iter().collect();
    }
    if have.len() != target {
        return Err(Error::Verification("element set is not a group".into()));
    }
    let (full, elems) = FiniteGroup::from_generators(id.clone(), &gens)?;
    let gen_ids: Vec<u32> = full.generators().to_vec();
    let mut keep: Vec<u32> = gen_ids.clone();
    for i in (0..gen_ids.len()).rev() {
        if keep.len() <= 1 {
            break;
        }
        let trial: Vec<u32> = keep.iter().copied().filter(|&g| g != gen_ids[i]).collect();
        if full.subgroup(&trial).iter().all(|&b| b) {
            keep = trial;
        }
    }
    if keep.len() > 2 {
        // elements of largest order first
        let mut by_order: Vec<u32> = (1..target as u32).collect();
        by_order.sort_by_key(|&x| std::cmp::Reverse(full.element_order(x)));
        let mut attempts = 0;
        'outer: for &a in by_order.iter().take(15) {
            for &b in &by_order {
                if b == a {
                    continue;
                }
                attempts += 1;
                if attempts > PAIR_ATTEMPTS {
                    break 'outer;
                }
                if full.subgroup(&[a, b]).iter().all(|&x| x) {
                    keep = vec![a, b];
                    break 'outer;
                }
            }
        }
    }
    let generators = keep.iter().map(|&g| elems[g as usize].clone()).collect();
    Ok(MatrixGroup { elements, generators, order: target })
}

/// Integer matrix up to sign, normalized so the first nonzero entry is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignClass(pub Matrix<i64>);

impl SignClass {
    pub fn new(m: Matrix<i64>) -> Self {
        if m.data().iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            SignClass(m.neg())
        } else {
            SignClass(m)
        }
    }
}

impl GroupElem for SignClass {
    fn op(&self, o: &Self) -> Self {
        SignClass::new(self.0.mul(&o.0))
    }
}

#[derive(Clone, Debug)]
pub struct TorelliResult {
    pub curve_aut_order: usize,
    pub group: FiniteGroup,
}

/// Aut(C) from Aut(Jac C, θ): the group itself for hyperelliptic C, the
/// quotient by ±I otherwise.
pub fn torelli_adjust(g: &MatrixGroup, hyperelliptic: bool) -> Result<TorelliResult> {
    let n = g.elements[0].rows();
    let minus = Matrix::<i64>::identity(n).neg();
    if !g.elements.contains(&minus) {
        return Err(Error::Verification("−I is not in the group; not a principal polarization group".into()));
    }
    if hyperelliptic {
        return Ok(TorelliResult { curve_aut_order: g.order, group: g.abstract_group()? });
    }
    let gens: Vec<SignClass> = g.generators.iter().cloned().map(SignClass::new).collect();
    let (group, _) = FiniteGroup::from_generators(SignClass::new(Matrix::<i64>::identity(n)), &gens)?;
    if 2 * group.order() != g.order {
        return Err(Error::Verification("quotient by ±I has the wrong order".into()));
    }
    Ok(TorelliResult { curve_aut_order: group.order(), group })
}

/// Polarizations identified up to isomorphism, with the group of one
/// representative.
#[derive(Clone, Debug, Serialize)]
pub struct IsoClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub group: MatrixGroup,
}

/// Partition by isomorphism of polarized tori (R in the End lattice with
/// RᵗE₂R = E₁); isomorphic polarizations have isomorphic groups.
///
/// An isomorphism conjugates one self trace form into the other, so only
/// polarizations with equal trace-form determinant are compared.
pub fn isomorphism_classes(reps: &[Matrix<i64>], pols: &[Polarization]) -> Result<Vec<IsoClass>> {
    let mut classes: Vec<IsoClass> = Vec::new();
    let mut keys: Vec<rug::Integer> = Vec::new();
    for (i, p) in pols.iter().enumerate() {
        let key = trace_gram(reps, &p.form, &p.form)?.gram.to_big().det();
        let mut placed = false;
        for (c, k) in classes.iter_mut().zip(&keys) {
            if *k == key && find_isomorphism(reps, &p.form, &pols[c.representative].form)?.is_some() {
                c.members.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            let group = group_closure(isomorphisms(reps, &p.form, &p.form)?)?;
            classes.push(IsoClass { representative: i, members: vec![i], group });
            keys.push(key);
        }
    }
    Ok(classes)
}

/// Auto-equivalence: polarizations whose groups share one fingerprint.
#[derive(Clone, Debug, Serialize)]
pub struct AutoClass {
    pub order: usize,
    pub fingerprint: GroupFingerprint,
    /// indices into the isomorphism classes
    pub iso_classes: Vec<usize>,
}

pub fn auto_equivalence(classes: &[IsoClass]) -> Result<Vec<AutoClass>> {
    let mut out: Vec<AutoClass> = Vec::new();
    for (k, c) in classes.iter().enumerate() {
        let fp = c.group.fingerprint()?;
        match out.iter_mut().find(|a| a.fingerprint == fp) {
            Some(a) => a.iso_classes.push(k),
            None => out.push(AutoClass { order: c.group.order, fingerprint: fp, iso_classes: vec![k] }),
        }
    }
    out.sort_by(|a, b| (a.order, &a.iso_classes).cmp(&(b.order, &b.iso_classes)));
    Ok(out)
}
