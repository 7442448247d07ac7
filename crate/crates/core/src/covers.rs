//! Numerics of cyclic covers of the line: genus by Riemann-Hurwitz, the
//! admissible-cover limit over a boundary divisor, and the rank bookkeeping
//! of the Hodge bundle pulled back along the attaching map.

use num_integer::Integer;

use crate::weights::{cut_sides, phi_rule, psi_rule, WeightVector};
use crate::{Error, Result};

/// A degree `r` cyclic cover of the line branched over `Σ c_i p_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSpec {
    weights: WeightVector,
}

impl CoverSpec {
    pub fn new(weights: WeightVector) -> Result<Self> {
        if weights.r() < 2 {
            return Err(Error::Precondition(format!(
                "cover degree must be at least 2, got {}",
                weights.r()
            )));
        }
        if !weights.is_admissible() {
            return Err(Error::NotDivisible {
                sum: weights.sum(),
                r: weights.r(),
            });
        }
        Ok(CoverSpec { weights })
    }

    pub fn r(&self) -> u32 {
        self.weights.r()
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// `gcd(c_1, ..., c_n, r) = 1`, i.e. the cover is irreducible.
    pub fn is_connected(&self) -> bool {
        self.weights
            .entries()
            .iter()
            .fold(self.r(), |acc, &c| acc.gcd(&c))
            == 1
    }
}

/// `gcd(c, r)` with `gcd(0, r) = r`: an unbranched point contributes nothing.
fn ramification(c: u64, r: u64) -> u64 {
    r - c.gcd(&r)
}

/// The Riemann-Hurwitz value `1 - r + ½ Σ (r - gcd(c_i, r))` taken verbatim.
///
/// For a disconnected cover this is the arithmetic genus and may be negative.
pub fn riemann_hurwitz(r: u32, weights: &[u64]) -> Result<i64> {
    let r = r as u64;
    let total: u64 = weights.iter().map(|&c| ramification(c, r)).sum();
    if total % 2 != 0 {
        return Err(Error::InvalidGenus(format!("1 - {r} + {total}/2")));
    }
    Ok(1 - r as i64 + (total / 2) as i64)
}

/// Genus of the cover together with the irreducibility flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverGenus {
    pub genus: i64,
    /// `false` flags a possibly disconnected cover, for which the value is
    /// only the arithmetic genus.
    pub connected: bool,
}

pub fn genus(spec: &CoverSpec) -> Result<CoverGenus> {
    let weights: Vec<u64> = spec.weights.entries().iter().map(|&c| c as u64).collect();
    let g = riemann_hurwitz(spec.r(), &weights)?;
    if g < 0 {
        return Err(Error::InvalidGenus(g.to_string()));
    }
    Ok(CoverGenus {
        genus: g,
        connected: spec.is_connected(),
    })
}

/// The admissible-cover limit of the family over the boundary divisor that
/// separates the first `n1` branch points from the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerationData {
    /// Weights on the component carrying `p_1..p_{n1}` and the node.
    pub c_prime: WeightVector,
    /// Weights on the component carrying the remaining points and the node.
    pub c_double_prime: WeightVector,
    /// Number of points of the limit curve over the node.
    pub s: u32,
    pub g: i64,
    pub g1: i64,
    pub g2: i64,
}

pub fn degenerate(spec: &CoverSpec, n1: usize) -> Result<DegenerationData> {
    let n = spec.n();
    if n1 < 2 || n1 + 2 > n {
        return Err(Error::InvalidSplit(format!(
            "need 2 <= n1 <= n - 2, got n1 = {n1}, n = {n}"
        )));
    }
    let r = spec.r() as u64;
    let c: Vec<u64> = spec.weights.entries().iter().map(|&x| x as u64).collect();
    let head: u64 = c[..n1].iter().sum();
    let tail: u64 = c[n1..].iter().sum();

    let s_tail = tail.gcd(&r);
    let s_head = head.gcd(&r);
    if s_tail != s_head {
        return Err(Error::Precondition(format!(
            "node fibre sizes disagree: gcd({tail}, {r}) = {s_tail}, gcd({head}, {r}) = {s_head}"
        )));
    }
    let s = s_tail as u32;

    let mut prime = c[..n1].to_vec();
    prime.push(tail % r);
    let mut double_prime = c[n1..].to_vec();
    double_prime.push(head % r);

    let g = riemann_hurwitz(spec.r(), &c)?;
    let g1 = riemann_hurwitz(spec.r(), &prime)?;
    let g2 = riemann_hurwitz(spec.r(), &double_prime)?;
    if g != g1 + g2 + s as i64 - 1 {
        return Err(Error::GenusAdditivity { g, g1, g2, s });
    }
    Ok(DegenerationData {
        c_prime: WeightVector::reduced(spec.r(), &prime)?,
        c_double_prime: WeightVector::reduced(spec.r(), &double_prime)?,
        s,
        g,
        g1,
        g2,
    })
}

/// `true` when the node labels produced by [`degenerate`] agree modulo `r`
/// with the factorization rule applied to `I = {1..n1}`.
pub fn labels_match_rule(spec: &CoverSpec, n1: usize) -> Result<bool> {
    let subset: Vec<usize> = (1..=n1).collect();
    cut_labels_match_rule(spec, &subset)
}

/// [`labels_match_rule`] for an arbitrary cut `I | I^c`: the points of `I`
/// are moved to the front before degenerating.
pub fn cut_labels_match_rule(spec: &CoverSpec, subset: &[usize]) -> Result<bool> {
    let (inside, outside) = cut_sides(spec.n(), subset)?;
    let reordered: Vec<u32> = inside
        .iter()
        .chain(&outside)
        .map(|&i| spec.weights.weight(i))
        .collect();
    let moved = CoverSpec::new(WeightVector::new(spec.r(), reordered)?)?;
    let data = degenerate(&moved, inside.len())?;
    let phi = phi_rule(&spec.weights, subset)?;
    let psi = psi_rule(&spec.weights, subset)?;
    let r = spec.r();
    let agree = |a: &WeightVector, b: &WeightVector| {
        a.len() == b.len()
            && a.entries()
                .iter()
                .zip(b.entries())
                .all(|(x, y)| x % r == y % r)
    };
    Ok(agree(&data.c_prime, &phi) && agree(&data.c_double_prime, &psi))
}

/// Ranks of the pulled-back Hodge bundle under attaching curves of genus
/// `g1` and `g2` at `s` points: `E_{g1} ⊕ E_{g2} ⊕ O^{s-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HodgeSplit {
    pub first: u32,
    pub second: u32,
    pub trivial: u32,
}

impl HodgeSplit {
    pub fn total(&self) -> u32 {
        self.first + self.second + self.trivial
    }
}

pub fn hodge_rank_split(g1: u32, g2: u32, s: u32) -> Result<HodgeSplit> {
    if s == 0 {
        return Err(Error::Precondition("attaching needs at least one point".into()));
    }
    Ok(HodgeSplit {
        first: g1,
        second: g2,
        trivial: s - 1,
    })
}
