//! Cyclic branched covers of the sphere: closedness, genus, multipliers,
//! divisors of the eigen-differentials, branch-point weights and the
//! period matrix in the cyclic homology basis.

use crate::error::{Error, Result};
use crate::exact_linalg::{digits_to_bits, CMatrix, HPComplex};
use crate::torus::PeriodMatrix;
use serde::Serialize;
use std::collections::BTreeSet;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A d-fold cyclic cover of the sphere branched over n points with
/// indices d₁,…,dₙ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchingData {
    pub d: u64,
    pub indices: Vec<u64>,
}

impl BranchingData {
    pub fn n(&self) -> usize {
        self.indices.len()
    }

    /// Number of preimages of the i-th branch point.
    pub fn preimages(&self, i: usize) -> u64 {
        gcd(self.d, self.indices[i])
    }

    /// Order of the stabilizer of a preimage of the i-th branch point.
    pub fn stabilizer(&self, i: usize) -> u64 {
        self.d / self.preimages(i)
    }

    pub fn label(&self) -> String {
        let idx: Vec<String> = self.indices.iter().map(u64::to_string).collect();
        format!("{}({})", self.d, idx.join(","))
    }
}

pub fn validate(d: u64, indices: &[u64]) -> Result<BranchingData> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("degree {d} must be at least 2")));
    }
    if indices.len() < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 branch points, got {}", indices.len())));
    }
    if let Some(bad) = indices.iter().find(|&&x| x == 0 || x >= d) {
        return Err(Error::InvalidInput(format!("branching index {bad} outside [1, {}]", d - 1)));
    }
    let common = indices.iter().fold(d, |acc, &x| gcd(acc, x));
    if common != 1 {
        return Err(Error::InvalidInput(format!("cover is disconnected: gcd of degree and indices is {common}")));
    }
    let residue = indices.iter().sum::<u64>() % d;
    if residue != 0 {
        return Err(Error::InvalidInput(format!(
            "branching data not closed: sum of indices is {residue} mod {d}, expected 0"
        )));
    }
    Ok(BranchingData { d, indices: indices.to_vec() })
}

pub fn genus(b: &BranchingData) -> u64 {
    let gsum: u64 = (0..b.n()).map(|i| b.preimages(i)).sum();
    let twice = b.d * (b.n() as u64 - 2) + 2;
    debug_assert!(twice >= gsum && (twice - gsum) % 2 == 0);
    (twice - gsum) / 2
}

/// Scaled cone data a·dᵢ mod d.
fn scaled(b: &BranchingData, a: u64) -> Vec<u64> {
    b.indices.iter().map(|&x| (a * x) % b.d).collect()
}

/// Whether every a·dᵢ mod d is positive and they sum to d(n−2).
pub fn is_admissible(b: &BranchingData, a: u64) -> bool {
    if a == 0 || a >= b.d {
        return false;
    }
    let s = scaled(b, a);
    s.iter().all(|&x| x > 0) && s.iter().sum::<u64>() == b.d * (b.n() as u64 - 2)
}

/// All admissible a ∈ [1, d−1], ascending.
pub fn admissible_multipliers(b: &BranchingData) -> Vec<u64> {
    (1..b.d).filter(|&a| is_admissible(b, a)).collect()
}

/// Multipliers of a three-point cover; exactly `genus(b)` of them.
pub fn multipliers(b: &BranchingData) -> Result<Vec<u64>> {
    if b.n() != 3 {
        return Err(Error::Unsupported(format!("multipliers need 3 branch points, got {}", b.n())));
    }
    Ok(admissible_multipliers(b))
}

/// Multipliers used for divisors and weights: the three-point theory,
/// or for more branch points the admissible values when they number g.
fn working_multipliers(b: &BranchingData) -> Result<Vec<u64>> {
    let m = admissible_multipliers(b);
    if b.n() == 3 || m.len() as u64 == genus(b) {
        Ok(m)
    } else {
        Err(Error::Unsupported(format!(
            "{} admissible multipliers for genus {}; no eigenform basis",
            m.len(),
            genus(b)
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorTerm {
    /// Branch point, 0-based.
    pub branch: usize,
    pub preimages: u64,
    /// Vanishing order at each preimage.
    pub order: u64,
}

/// Divisor of the eigen-differential attached to multiplier `a`.
pub fn form_divisor(b: &BranchingData, a: u64) -> Result<Vec<DivisorTerm>> {
    if !is_admissible(b, a) {
        return Err(Error::InvalidInput(format!("{a} is not a multiplier of {}", b.label())));
    }
    let terms: Vec<DivisorTerm> = (0..b.n())
        .map(|i| {
            let c = b.preimages(i);
            let ai = (a * b.indices[i]) % b.d;
            DivisorTerm { branch: i, preimages: c, order: ai / c - 1 }
        })
        .collect();
    let degree: u64 = terms.iter().map(|t| t.preimages * t.order).sum();
    let g = genus(b);
    if degree + 2 != 2 * g {
        return Err(Error::Verification(format!("divisor degree {degree} differs from 2g-2 = {}", 2 * g as i64 - 2)));
    }
    Ok(terms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchPointWeight {
    pub branch: usize,
    pub preimages: u64,
    /// Vanishing-order sequence at one preimage, ascending.
    pub orders: Vec<u64>,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchWeights {
    pub points: Vec<BranchPointWeight>,
    /// (g−1)g(g+1) minus the weight carried by all branch preimages.
    pub residual: u64,
}

/// Weierstrass weights at the branch preimages.
///
/// Eigenforms whose leading orders coincide at a preimage transform by the
/// same character of its stabilizer (order m), so their expansions live in
/// one residue class mod m; a suitable combination then vanishes to order
/// at least m more. Duplicates are resolved this way, giving the order
/// sequence of the full space of differentials for generic expansions.
pub fn branch_weights(b: &BranchingData) -> Result<BranchWeights> {
    let g = genus(b);
    if g == 0 {
        return Ok(BranchWeights { points: vec![], residual: 0 });
    }
    let mults = working_multipliers(b)?;
    let divisors: Vec<Vec<DivisorTerm>> = mults.iter().map(|&a| form_divisor(b, a)).collect::<Result<_>>()?;
    let mut points = Vec::new();
    let mut total = 0u64;
    for i in 0..b.n() {
        let m = b.stabilizer(i);
        let mut raw: Vec<u64> = divisors.iter().map(|d| d[i].order).collect();
        raw.sort_unstable();
        let mut seen = BTreeSet::new();
        for mut o in raw {
            while seen.contains(&o) {
                o += m;
            }
            seen.insert(o);
        }
        let orders: Vec<u64> = seen.into_iter().collect();
        let weight: u64 = orders.iter().enumerate().map(|(k, &o)| o - k as u64).sum();
        total += weight * b.preimages(i);
        points.push(BranchPointWeight { branch: i, preimages: b.preimages(i), orders, weight });
    }
    let full = (g - 1) * g * (g + 1);
    if total > full {
        return Err(Error::Verification(format!("branch weights {total} exceed (g-1)g(g+1) = {full}")));
    }
    Ok(BranchWeights { points, residual: full - total })
}

/// Π[m][k] = ζ_d^(a_m·k) for the ascending multipliers a_m, k = 0..2g−1.
pub fn period_matrix(b: &BranchingData, digits: u32) -> Result<PeriodMatrix> {
    let mults = multipliers(b)?;
    let g = mults.len();
    if g == 0 {
        return Err(Error::InvalidInput(format!("{} has genus 0", b.label())));
    }
    let bits = digits_to_bits(digits);
    let d = b.d as i64;
    let entries = CMatrix::from_fn(g, 2 * g, |m, k| HPComplex::root_of_unity(d, mults[m] as i64 * k as i64, bits));
    PeriodMatrix::new(entries, digits, Some(b.label()), None)
}

/// Number of base triangles N in −2π(2−2g) = N((n−2)π − 2πn/d).
pub fn base_tile_count(b: &BranchingData) -> Result<u64> {
    let g = genus(b);
    let n = b.n() as i64;
    let d = b.d as i64;
    let den = (n - 2) * d - 2 * n;
    if g <= 1 || den <= 0 {
        return Err(Error::InvalidInput(format!("no hyperbolic base tessellation for {}", b.label())));
    }
    let num = 4 * (g as i64 - 1) * d;
    if num % den != 0 {
        return Err(Error::InvalidInput(format!("tile count {num}/{den} for {} is not an integer", b.label())));
    }
    Ok((num / den) as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverAnalysis {
    pub label: String,
    pub genus: u64,
    pub multipliers: Option<Vec<u64>>,
    pub divisors: Vec<(u64, Vec<DivisorTerm>)>,
    pub weights: Option<BranchWeights>,
    pub base_tiles: Option<u64>,
    pub notes: Vec<String>,
}

pub fn analyze(b: &BranchingData) -> CoverAnalysis {
    let g = genus(b);
    let mut notes = Vec::new();
    let mults = match working_multipliers(b) {
        Ok(m) => Some(m),
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    let mut divisors = Vec::new();
    for &a in mults.iter().flatten() {
        match form_divisor(b, a) {
            Ok(t) => divisors.push((a, t)),
            Err(e) => notes.push(e.to_string()),
        }
    }
    let weights = if mults.is_some() {
        branch_weights(b).map_err(|e| notes.push(e.to_string())).ok()
    } else {
        None
    };
    let base_tiles = base_tile_count(b).map_err(|e| notes.push(e.to_string())).ok();
    CoverAnalysis { label: b.label(), genus: g, multipliers: mults, divisors, weights, base_tiles, notes }
}
