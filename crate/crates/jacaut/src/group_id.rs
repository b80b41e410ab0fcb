//! Finite groups given by generators, isomorphism-invariant fingerprints,
//! and a small library of named reference groups to match against.
//!
//! A fingerprint match means "not distinguished by these invariants",
//! which is weaker than isomorphism.

use crate::error::{Error, Result};
use crate::exact_linalg::Matrix;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::hash::Hash;

/// Largest group order handled.
pub const ORDER_CAP: usize = 10_000;

pub trait GroupElem: Clone + Eq + Hash {
    fn op(&self, other: &Self) -> Self;
}

impl GroupElem for Matrix<i64> {
    fn op(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

/// Elements are indices 0..n (0 is the identity); products are evaluated
/// along shortest generator words, so only right multiplication by
/// generators is stored.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    gens: Vec<u32>,
    right: Vec<Vec<u32>>,
    words: Vec<Vec<u8>>,
    orders: Vec<u32>,
}

impl FiniteGroup {
    /// Breadth-first closure; also returns the elements in index order.
    pub fn from_generators<E: GroupElem>(identity: E, gens: &[E]) -> Result<(FiniteGroup, Vec<E>)> {
        if gens.len() > 255 {
            return Err(Error::InvalidInput("too many generators".into()));
        }
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<E, u32> = HashMap::from([(identity, 0)]);
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut right: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
        let mut x = 0;
        while x < elems.len() {
            for (s, g) in gens.iter().enumerate() {
                let y = elems[x].op(g);
                let id = match index.get(&y) {
                    Some(&id) => id,
                    None => {
                        if elems.len() >= ORDER_CAP {
                            return Err(Error::Unsupported(format!("group order exceeds {ORDER_CAP}")));
                        }
                        let id = elems.len() as u32;
                        let mut w = words[x].clone();
                        w.push(s as u8);
                        words.push(w);
                        index.insert(y.clone(), id);
                        elems.push(y);
                        id
                    }
                };
                right[s].push(id);
            }
            x += 1;
        }
        let gen_ids = gens.iter().map(|g| index[g]).collect();
        let mut grp = FiniteGroup { gens: gen_ids, right, words, orders: vec![] };
        grp.orders = (0..grp.order() as u32).map(|x| grp.compute_order(x)).collect();
        Ok((grp, elems))
    }

    pub fn order(&self) -> usize {
        self.words.len()
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.words[b as usize].iter().fold(a, |x, &s| self.right[s as usize][x as usize])
    }

    fn compute_order(&self, a: u32) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn element_order(&self, a: u32) -> u32 {
        self.orders[a as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let e = e % u64::from(self.orders[a as usize]);
        let (mut acc, mut base, mut e) = (0u32, a, e);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.pow(a, u64::from(self.orders[a as usize]) - 1)
    }

    /// Membership mask of the subgroup generated by `s`.
    pub fn subgroup(&self, s: &[u32]) -> Vec<bool> {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for &g in s {
                let y = self.mul(x, g);
                if !mask[y as usize] {
                    mask[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
        mask
    }

    /// Smallest normal subgroup containing `s`.
    pub fn normal_closure(&self, s: &[u32]) -> Vec<bool> {
        let mut gens: Vec<u32> = s.to_vec();
        let mut mask = self.subgroup(&gens);
        let mut i = 0;
        while i < gens.len() {
            for &g in &self.gens {
                let c = self.mul(self.mul(self.inverse(g), gens[i]), g);
                if !mask[c as usize] {
                    gens.push(c);
                    mask = self.subgroup(&gens);
                }
            }
            i += 1;
        }
        mask
    }

    pub fn derived_subgroup(&self) -> Vec<bool> {
        let mut comms = Vec::new();
        for &a in &self.gens {
            for &b in &self.gens {
                let ab = self.mul(a, b);
                let ba = self.mul(b, a);
                comms.push(self.mul(self.inverse(ba), ab));
            }
        }
        self.normal_closure(&comms)
    }

    pub fn center_order(&self) -> usize {
        (0..self.order() as u32)
            .filter(|&x| self.gens.iter().all(|&g| self.mul(x, g) == self.mul(g, x)))
            .count()
    }

    pub fn class_count(&self) -> usize {
        let n = self.order();
        let inv: Vec<u32> = self.gens.iter().map(|&g| self.inverse(g)).collect();
        let mut seen = vec![false; n];
        let mut classes = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            classes += 1;
            seen[start] = true;
            let mut stack = vec![start as u32];
            while let Some(x) = stack.pop() {
                for (k, &g) in self.gens.iter().enumerate() {
                    let y = self.mul(self.mul(inv[k], x), g);
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        stack.push(y);
                    }
                }
            }
        }
        classes
    }

    /// Invariant factors d₁ | d₂ | … of G/[G,G] (empty when perfect).
    pub fn abelianization(&self, derived: &[bool]) -> Vec<u64> {
        let dsize = derived.iter().filter(|&&b| b).count() as u64;
        let m = self.order() as u64 / dsize;
        // exponents of each prime in the elementary-divisor decomposition
        let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for (p, total) in factorize(m) {
            let mut at_least = Vec::new();
            let mut prev = 0u32;
            let mut k = 1u32;
            loop {
                let pk = p.pow(k);
                let cnt = (0..self.order() as u32).filter(|&x| derived[self.pow(x, pk) as usize]).count() as u64;
                let t = ilog(cnt / dsize, p);
                at_least.push(t - prev);
                prev = t;
                if t == total {
                    break;
                }
                k += 1;
            }
            // at_least[k-1] = #{i : e_i ≥ k}
            let mut exps = Vec::new();
            for k in 0..at_least.len() {
                let next = at_least.get(k + 1).copied().unwrap_or(0);
                for _ in 0..at_least[k] - next {
                    exps.push(k as u32 + 1);
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            per_prime.push((p, exps));
        }
        let len = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut out: Vec<u64> = (0..len)
            .map(|i| per_prime.iter().map(|(p, e)| e.get(i).map_or(1, |&x| p.pow(x))).product())
            .collect();
        out.reverse();
        out
    }

    pub fn fingerprint(&self) -> GroupFingerprint {
        let mut hist = BTreeMap::new();
        for &o in &self.orders {
            *hist.entry(u64::from(o)).or_insert(0u64) += 1;
        }
        let derived = self.derived_subgroup();
        GroupFingerprint {
            order: self.order() as u64,
            exponent: hist.keys().fold(1, |a, &b| lcm(a, b)),
            histogram: hist,
            abelianization: self.abelianization(&derived),
            center: self.center_order() as u64,
            derived: derived.iter().filter(|&&b| b).count() as u64,
            classes: self.class_count() as u64,
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

fn ilog(mut x: u64, p: u64) -> u32 {
    let mut k = 0;
    while x > 1 {
        x /= p;
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupFingerprint {
    pub order: u64,
    /// element order → count
    pub histogram: BTreeMap<u64, u64>,
    pub abelianization: Vec<u64>,
    pub center: u64,
    pub derived: u64,
    pub classes: u64,
    pub exponent: u64,
}

/// Elements of the reference constructions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RefElem {
    /// Image of i is `p[i]`; composition applies the left factor first.
    Perm(Vec<u16>),
    /// n×n matrix over F_p, row-major.
    Mat { p: u16, n: u8, data: Vec<u16> },
    Prod(Vec<RefElem>),
}

impl GroupElem for RefElem {
    fn op(&self, o: &Self) -> Self {
        match (self, o) {
            (RefElem::Perm(a), RefElem::Perm(b)) => RefElem::Perm(a.iter().map(|&i| b[i as usize]).collect()),
            (RefElem::Mat { p, n, data: a }, RefElem::Mat { data: b, .. }) => {
                let (n, p32) = (*n as usize, u32::from(*p));
                let data = (0..n * n)
                    .map(|ij| {
                        let (i, j) = (ij / n, ij % n);
                        ((0..n).map(|k| u32::from(a[i * n + k]) * u32::from(b[k * n + j])).sum::<u32>() % p32) as u16
                    })
                    .collect();
                RefElem::Mat { p: *p, n: n as u8, data }
            }
            (RefElem::Prod(a), RefElem::Prod(b)) => RefElem::Prod(a.iter().zip(b).map(|(x, y)| x.op(y)).collect()),
            _ => panic!("mismatched reference elements"),
        }
    }
}

/// Generators plus identity of one factor.
#[derive(Clone, Debug)]
struct Gens {
    identity: RefElem,
    gens: Vec<RefElem>,
}

fn perm_from_cycles(n: usize, cycles: &[&[u16]]) -> RefElem {
    let mut p: Vec<u16> = (0..n as u16).collect();
    for c in cycles {
        for k in 0..c.len() {
            p[c[k] as usize] = c[(k + 1) % c.len()];
        }
    }
    RefElem::Perm(p)
}

fn perm_gens(n: usize, gens: Vec<RefElem>) -> Gens {
    Gens { identity: perm_from_cycles(n, &[]), gens }
}

fn mat(p: u16, n: usize, rows: &[&[i64]]) -> RefElem {
    let data = rows.iter().flat_map(|r| r.iter().map(|&x| x.rem_euclid(i64::from(p)) as u16)).collect();
    RefElem::Mat { p, n: n as u8, data }
}

fn mat_gens(p: u16, n: usize, gens: Vec<RefElem>) -> Gens {
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let rows: Vec<&[i64]> = id.iter().map(Vec::as_slice).collect();
    Gens { identity: mat(p, n, &rows), gens }
}

fn cyclic(n: usize) -> Gens {
    let c: Vec<u16> = (0..n as u16).collect();
    perm_gens(n, vec![perm_from_cycles(n, &[&c])])
}

fn dihedral(n: usize) -> Gens {
    // symmetries of an n-gon; order 2n
    match n {
        1 => cyclic(2),
        2 => perm_gens(4, vec![perm_from_cycles(4, &[&[0, 1], &[2, 3]]), perm_from_cycles(4, &[&[0, 2], &[1, 3]])]),
        _ => {
            let c: Vec<u16> = (0..n as u16).collect();
            let refl: Vec<Vec<u16>> = (1..n as u16).filter(|&i| i < n as u16 - i).map(|i| vec![i, n as u16 - i]).collect();
            let rs: Vec<&[u16]> = refl.iter().map(Vec::as_slice).collect();
            perm_gens(n, vec![perm_from_cycles(n, &[&c]), perm_from_cycles(n, &rs)])
        }
    }
}

fn symmetric(n: usize) -> Gens {
    if n < 2 {
        return perm_gens(1, vec![]);
    }
    let c: Vec<u16> = (0..n as u16).collect();
    perm_gens(n, vec![perm_from_cycles(n, &[&[0, 1]]), perm_from_cycles(n, &[&c])])
}

fn alternating(n: usize) -> Gens {
    let gens = (2..n as u16).map(|k| perm_from_cycles(n, &[&[0, 1, k]])).collect();
    perm_gens(n.max(1), gens)
}

fn general_linear(n: usize, p: u16) -> Result<Gens> {
    if !(2..=251).contains(&p) || (2..p).any(|q| p % q == 0) || n == 0 || n > 4 {
        return Err(Error::InvalidInput(format!("GL({n},{p}) needs a prime p and 1 ≤ n ≤ 4")));
    }
    let prim = (1..p).find(|&w| (1..p - 1).all(|k| (0..k).fold(1u32, |a, _| a * u32::from(w) % u32::from(p)) != 1)).unwrap_or(1);
    let mut gens = Vec::new();
    let ident = |i: usize, j: usize| i64::from(i == j);
    let mut d: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| ident(i, j)).collect()).collect();
    d[0][0] = i64::from(prim);
    let rows: Vec<&[i64]> = d.iter().map(Vec::as_slice).collect();
    gens.push(mat(p, n, &rows));
    for a in 0..n {
        for b in 0..n {
            if a != b {
                let mut t: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| ident(i, j)).collect()).collect();
                t[a][b] = 1;
                let rows: Vec<&[i64]> = t.iter().map(Vec::as_slice).collect();
                gens.push(mat(p, n, &rows));
            }
        }
    }
    Ok(mat_gens(p, n, gens))
}

fn wreath_c2(n: usize) -> Gens {
    let c: Vec<u16> = (0..n as u16).collect();
    let swaps: Vec<Vec<u16>> = (0..n as u16).map(|i| vec![i, i + n as u16]).collect();
    let ss: Vec<&[u16]> = swaps.iter().map(Vec::as_slice).collect();
    perm_gens(2 * n, vec![perm_from_cycles(2 * n, &[&c]), perm_from_cycles(2 * n, &ss)])
}

/// Groups with no unambiguous name in the product grammar.
fn named(name: &str) -> Option<Gens> {
    Some(match name {
        // (C6×C2)⋊C2: C3 ⋊ D4 with kernel of the action ≅ C2²; Aut of y² = x⁶ − 1
        "C3:D4" | "S3:D4" => perm_gens(
            7,
            vec![
                perm_from_cycles(7, &[&[0, 1, 2]]),
                perm_from_cycles(7, &[&[0, 1], &[3, 4, 5, 6]]),
                perm_from_cycles(7, &[&[4, 6]]),
            ],
        ),
        // monomial 3×3 matrices over F₅ with diagonal product 1; Aut of the Fermat quartic
        "C4^2:S3" => mat_gens(
            5,
            3,
            vec![
                mat(5, 3, &[&[2, 0, 0], &[0, 3, 0], &[0, 0, 1]]),
                mat(5, 3, &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]),
                mat(5, 3, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]),
                mat(5, 3, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]),
            ],
        ),
        // quaternion units i, j and (−1+i+j+k)/2 split over F₅ (binary
        // tetrahedral group), with the scalar 2 of order 4
        "C4.A4" => mat_gens(
            5,
            2,
            vec![
                mat(5, 2, &[&[2, 0], &[0, 3]]),
                mat(5, 2, &[&[0, 1], &[-1, 0]]),
                mat(5, 2, &[&[3, 4], &[3, 1]]),
                mat(5, 2, &[&[2, 0], &[0, 2]]),
            ],
        ),
        // action on differentials of y² = x⁸ − 1 over F₁₇
        "D4:C4" => mat_gens(
            17,
            3,
            vec![
                mat(17, 3, &[&[2, 0, 0], &[0, 4, 0], &[0, 0, 8]]),
                mat(17, 3, &[&[0, 0, 4], &[0, 4, 0], &[4, 0, 0]]),
                mat(17, 3, &[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]]),
            ],
        ),
        _ => return None,
    })
}

/// Closed-form orders used to verify the constructions.
fn expected_named_order(name: &str) -> Option<usize> {
    match name {
        "C3:D4" | "S3:D4" => Some(24),
        "C4^2:S3" => Some(96),
        "C4.A4" => Some(48),
        "D4:C4" => Some(32),
        _ => None,
    }
}

pub const GRAMMAR: &str = "Cn, Dn (order 2n), Sn, An, GL(n,p), Cn^k, CnwrC2, C3:D4 (= S3:D4), C4^2:S3, C4.A4, D4:C4, \
direct products joined by 'x', parentheses for grouping";

fn split_top(name: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    let bytes = name.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'x' if depth == 0 => {
                parts.push(&name[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    parts.push(&name[start..]);
    parts
}

fn unsupported(name: &str) -> Error {
    Error::InvalidInput(format!("unsupported group name '{name}'; grammar: {GRAMMAR}"))
}

fn parse_factor(f: &str) -> Result<(Vec<Gens>, usize)> {
    let num = |s: &str| s.parse::<usize>().map_err(|_| unsupported(f));
    if let Some(g) = named(f) {
        return Ok((vec![g], expected_named_order(f).expect("named order")));
    }
    if let Some(inner) = f.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        return parse_product(inner);
    }
    if let Some(rest) = f.strip_prefix("GL(").and_then(|s| s.strip_suffix(')')) {
        let (n, p) = rest.split_once(',').ok_or_else(|| unsupported(f))?;
        let (n, p) = (num(n.trim())?, num(p.trim())?);
        let order = (0..n).map(|i| p.pow(n as u32) - p.pow(i as u32)).product();
        return Ok((vec![general_linear(n, p as u16)?], order));
    }
    if let Some((base, k)) = f.split_once('^') {
        let k = num(k)?;
        let (g, o) = parse_factor(base)?;
        if g.len() != 1 {
            return Err(unsupported(f));
        }
        return Ok((vec![g[0].clone(); k], o.pow(k as u32)));
    }
    if let Some((a, b)) = f.split_once("wr") {
        let n = num(a.strip_prefix('C').ok_or_else(|| unsupported(f))?)?;
        if b != "C2" {
            return Err(unsupported(f));
        }
        return Ok((vec![wreath_c2(n)], 2 * n * n));
    }
    let (head, n) = f.split_at(1.min(f.len()));
    let n = num(n)?;
    if n == 0 || n > 12 {
        return Err(unsupported(f));
    }
    match head {
        "C" => Ok((vec![cyclic(n)], n)),
        "D" => Ok((vec![dihedral(n)], 2 * n)),
        "S" => Ok((vec![symmetric(n)], (1..=n).product())),
        "A" => Ok((vec![alternating(n)], ((1..=n).product::<usize>() / 2).max(1))),
        _ => Err(unsupported(f)),
    }
}

fn parse_product(name: &str) -> Result<(Vec<Gens>, usize)> {
    let mut factors = Vec::new();
    let mut order = 1usize;
    for part in split_top(name) {
        if part.is_empty() {
            return Err(unsupported(name));
        }
        let (g, o) = parse_factor(part)?;
        factors.extend(g);
        order = order.checked_mul(o).ok_or_else(|| unsupported(name))?;
    }
    Ok((factors, order))
}

#[derive(Clone, Debug)]
pub struct RefGroup {
    pub name: String,
    pub group: FiniteGroup,
    pub fingerprint: GroupFingerprint,
}

/// Build a named group from the grammar in [`GRAMMAR`].
pub fn reference(name: &str) -> Result<RefGroup> {
    let name = name.trim();
    let (factors, expected) = parse_product(name)?;
    if expected > ORDER_CAP {
        return Err(Error::Unsupported(format!("group order {expected} exceeds {ORDER_CAP}")));
    }
    let k = factors.len();
    let identity = RefElem::Prod(factors.iter().map(|f| f.identity.clone()).collect());
    let mut gens = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        for g in &f.gens {
            let mut parts: Vec<RefElem> = factors.iter().map(|f| f.identity.clone()).collect();
            parts[i] = g.clone();
            gens.push(RefElem::Prod(parts));
        }
    }
    debug_assert_eq!(k, factors.len());
    let (group, _) = FiniteGroup::from_generators(identity, &gens)?;
    if group.order() != expected {
        return Err(Error::Verification(format!("construction of {name} has order {}, expected {expected}", group.order())));
    }
    let fingerprint = group.fingerprint();
    Ok(RefGroup { name: name.to_string(), group, fingerprint })
}

/// Names whose fingerprint equals `fp`.
pub fn match_names(fp: &GroupFingerprint, candidates: &[RefGroup]) -> Vec<String> {
    candidates.iter().filter(|r| r.fingerprint == *fp).map(|r| r.name.clone()).collect()
}

/// Every group named in the reference tables, in grammar form.
pub const TABLE_NAMES: &[&str] = &[
    "GL(2,3)",
    "S3:D4",
    "GL(3,2)",
    "C4^2:S3",
    "C4.A4",
    "D4:C4",
    "C4xS3",
    "C2xD4",
    "S5",
    "C3xS4",
    "C2xS4",
    "GL(3,2)xC2",
    "C4wrC2xC2",
    "C4^2:S3xC2",
    "D6",
    "C4xD4",
    "C2^2xD4",
    "C2xS5",
    "C2^4",
    "C2^2xC6",
    "C2^3xC6",
    "C2^2xS4",
    "C6xS4",
    "C2xC6xC3:D4",
    "C3xC3:D4xD4",
    "C6xS3xC3:D4",
    "C2^5",
];

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(name: &str) -> GroupFingerprint {
        reference(name).unwrap().fingerprint
    }

    #[test]
    fn elementary_abelian() {
        let f = fp("C2^5");
        assert_eq!(f.order, 32);
        assert_eq!(f.histogram, BTreeMap::from([(1, 1), (2, 31)]));
        assert_eq!(f.abelianization, vec![2, 2, 2, 2, 2]);
        assert_eq!(f.center, 32);
    }

    #[test]
    fn symmetric_group_s3() {
        let f = fp("S3");
        assert_eq!(f.order, 6);
        assert_eq!(f.histogram, BTreeMap::from([(1, 1), (2, 3), (3, 2)]));
        assert_eq!((f.center, f.derived, f.classes), (1, 3, 3));
        assert_eq!(f.abelianization, vec![2]);
    }

    #[test]
    fn orders_of_named_groups() {
        for (name, order) in [("GL(3,2)", 168), ("S5", 120), ("GL(3,2)xC2", 336), ("C4wrC2xC2", 64), ("A5", 60), ("D6", 12)] {
            assert_eq!(reference(name).unwrap().group.order(), order, "{name}");
        }
        for n in 1..=7 {
            assert_eq!(reference(&format!("S{n}")).unwrap().group.order(), (1..=n).product::<usize>());
        }
        for (n, p) in [(2u32, 2usize), (2, 3), (3, 2), (2, 5), (2, 7)] {
            let o: usize = (0..n).map(|i| p.pow(n) - p.pow(i)).product();
            assert_eq!(reference(&format!("GL({n},{p})")).unwrap().group.order(), o);
        }
    }

    #[test]
    fn simple_and_perfect() {
        let f = fp("GL(3,2)");
        assert_eq!((f.center, f.derived, f.classes), (1, 168, 6));
        assert!(f.abelianization.is_empty());
        let f = fp("A5");
        assert_eq!((f.classes, f.exponent), (5, 30));
    }

    #[test]
    fn abelianization_invariant_factors() {
        assert_eq!(fp("C4xC6").abelianization, vec![2, 12]);
        assert_eq!(fp("C2xD4").abelianization, vec![2, 2, 2]);
        assert_eq!(fp("C4.A4").abelianization, vec![6]);
        assert_eq!(fp("C4.A4").derived, 8);
        assert_eq!(fp("C4.A4").center, 4);
        assert_eq!(fp("GL(2,3)").abelianization, vec![2]);
    }

    #[test]
    fn cyclic_versus_klein_four() {
        let r = [reference("C4").unwrap(), reference("C2xC2").unwrap()];
        let (g, _) = FiniteGroup::from_generators(Matrix::<i64>::identity(2), &[Matrix::from_vec(2, 2, vec![0, -1, 1, 0])]).unwrap();
        assert_eq!(match_names(&g.fingerprint(), &r), vec!["C4".to_string()]);
        assert!(match_names(&fp("S3"), &r).is_empty());
    }

    #[test]
    fn unsupported_names_are_rejected() {
        for bad in ["Q8", "C4:C4", "", "GL(2,4)", "Cx"] {
            let err = reference(bad).unwrap_err();
            assert!(err.to_string().contains("grammar") || err.to_string().contains("prime"), "{bad}: {err}");
        }
    }

    /// Pairs of table names not separated by the fingerprint.
    #[test]
    fn table_names_are_separated() {
        let refs: Vec<RefGroup> = TABLE_NAMES.iter().map(|n| reference(n).unwrap()).collect();
        let mut collisions = Vec::new();
        for i in 0..refs.len() {
            for j in i + 1..refs.len() {
                if refs[i].fingerprint == refs[j].fingerprint {
                    collisions.push((refs[i].name.clone(), refs[j].name.clone()));
                }
            }
        }
        assert!(collisions.is_empty(), "{collisions:?}");
    }

    fn conjugate_group(gens: &[Matrix<i64>], u: &Matrix<i64>, uinv: &Matrix<i64>) -> GroupFingerprint {
        let conj: Vec<Matrix<i64>> = gens.iter().map(|g| uinv.mul(g).mul(u)).collect();
        FiniteGroup::from_generators(Matrix::<i64>::identity(u.rows()), &conj).unwrap().0.fingerprint()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]
        #[test]
        fn fingerprint_is_conjugation_invariant(ops in proptest::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6)) {
            // signed permutation matrices of size 3: C2 ≀ S3, order 48
            let gens = vec![
                Matrix::from_vec(3, 3, vec![0, 1, 0, 1, 0, 0, 0, 0, 1]),
                Matrix::from_vec(3, 3, vec![0, 0, 1, 1, 0, 0, 0, 1, 0]),
                Matrix::from_vec(3, 3, vec![-1, 0, 0, 0, 1, 0, 0, 0, 1]),
            ];
            let mut u = Matrix::<i64>::identity(3);
            let mut uinv = Matrix::<i64>::identity(3);
            for (a, b, s) in ops {
                if a == b { continue; }
                let mut e = Matrix::<i64>::identity(3);
                e[(a, b)] = s;
                let mut einv = Matrix::<i64>::identity(3);
                einv[(a, b)] = -s;
                u = u.mul(&e);
                uinv = einv.mul(&uinv);
            }
            prop_assert!(u.mul(&uinv).is_identity());
            let base = FiniteGroup::from_generators(Matrix::<i64>::identity(3), &gens).unwrap().0.fingerprint();
            prop_assert_eq!(base.order, 48);
            prop_assert_eq!(conjugate_group(&gens, &u, &uinv), base);
        }
    }
}
