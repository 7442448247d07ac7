//! Weight data attached to marked points: integer weights modulo `r` and
//! rational GIT linearizations, together with the maps that transport them
//! to the two sides of a boundary divisor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Bound, SplitSide};
use crate::{Error, Result};

/// Integer weights `c_i` attached to marked points, read modulo `r`.
///
/// Canonical entries lie in `0..r`. The value `r` itself is accepted because
/// [`phi_rule`] produces it as the representative of `0` on the attaching
/// point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector {
    r: u32,
    entries: Vec<u32>,
}

impl WeightVector {
    pub fn new(r: u32, entries: Vec<u32>) -> Result<Self> {
        if r == 0 {
            return Err(Error::ZeroOrder);
        }
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, &v)| v > r) {
            return Err(Error::WeightOutOfRange { index, value, r });
        }
        Ok(WeightVector { r, entries })
    }

    /// Reduces arbitrary nonnegative integers into `0..r`.
    pub fn reduced(r: u32, entries: &[u64]) -> Result<Self> {
        if r == 0 {
            return Err(Error::ZeroOrder);
        }
        let entries = entries.iter().map(|&e| (e % r as u64) as u32).collect();
        Ok(WeightVector { r, entries })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Weight of the point labelled `label` (1-based).
    pub fn weight(&self, label: usize) -> u32 {
        self.entries[label - 1]
    }

    pub fn sum(&self) -> u64 {
        self.entries.iter().map(|&e| e as u64).sum()
    }

    /// `r | Σ c_i`, the condition for the bundles to be nontrivial.
    pub fn is_admissible(&self) -> bool {
        self.sum() % self.r as u64 == 0
    }

    pub fn is_canonical(&self) -> bool {
        self.entries.iter().all(|&e| e < self.r)
    }

    /// The same weights with every entry reduced into `0..r`.
    pub fn canonical(&self) -> WeightVector {
        WeightVector {
            r: self.r,
            entries: self.entries.iter().map(|&e| e % self.r).collect(),
        }
    }

    /// Sum of the weights over `labels`.
    pub fn sum_over(&self, labels: &[usize]) -> u64 {
        labels.iter().map(|&i| self.weight(i) as u64).sum()
    }

    /// The rational linearization `c / r` together with `d = |c|/r - 1`, or
    /// `None` when `r` does not divide the sum or `d < 1`.
    pub fn to_linearization(&self) -> Option<Linearization> {
        if !self.is_admissible() {
            return None;
        }
        let d = self.sum() / self.r as u64;
        if d < 2 {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .map(|&e| BigRational::new(BigInt::from(e), BigInt::from(self.r)))
            .collect();
        Linearization::new(entries, (d - 1) as u32).ok()
    }
}

/// A GIT linearization `c ∈ Δ(d+1, n)` with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Linearization {
    d: u32,
    entries: Vec<BigRational>,
}

impl Linearization {
    pub fn new(entries: Vec<BigRational>, d: u32) -> Result<Self> {
        if d == 0 || !in_hypersimplex(&entries, d) {
            return Err(Error::NotInHypersimplex {
                d,
                n: entries.len(),
            });
        }
        Ok(Linearization { d, entries })
    }

    /// Builds a linearization from `(numerator, denominator)` pairs.
    pub fn from_ratios(ratios: &[(i64, i64)], d: u32) -> Result<Self> {
        if ratios.iter().any(|&(_, den)| den == 0) {
            return Err(Error::Precondition("zero denominator".into()));
        }
        let entries = ratios
            .iter()
            .map(|&(num, den)| BigRational::new(num.into(), den.into()))
            .collect();
        Self::new(entries, d)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Least `k ≥ 1` making every `k c_i` an integer.
    pub fn integral_scale(&self) -> u64 {
        let lcm = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        lcm.to_u64().expect("denominator fits in u64")
    }

    /// `k c_i` for each entry, or `None` if some entry is not integral.
    pub fn scaled_content(&self, k: u64) -> Option<Vec<usize>> {
        let k = BigRational::from_integer(BigInt::from(k));
        self.entries
            .iter()
            .map(|q| {
                let v = q * &k;
                if v.is_integer() {
                    v.to_integer().to_usize()
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Membership in `Δ(d+1, n)`: every entry in `[0, 1]` and sum `d + 1`.
pub fn in_hypersimplex(entries: &[BigRational], d: u32) -> bool {
    if entries.is_empty() || d == 0 {
        return false;
    }
    let one = BigRational::one();
    if entries.iter().any(|q| q.is_negative() || *q > one) {
        return false;
    }
    let sum: BigRational = entries.iter().sum();
    sum == BigRational::from_integer(BigInt::from(d + 1))
}

fn int(v: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `(c_1..c_{n1}, Σ_{i>n1} c_i - shift2)` and `(c_{n1+1}..c_n, Σ_{i≤n1} c_i - shift1)`.
pub(crate) fn split_raw(
    entries: &[BigRational],
    n1: usize,
    shift1: &BigRational,
    shift2: &BigRational,
) -> (Vec<BigRational>, Vec<BigRational>) {
    let (head, tail) = entries.split_at(n1);
    let head_sum: BigRational = head.iter().sum();
    let tail_sum: BigRational = tail.iter().sum();
    let mut first = head.to_vec();
    first.push(tail_sum - shift2);
    let mut second = tail.to_vec();
    second.push(head_sum - shift1);
    (first, second)
}

fn check_range(sum: &BigRational, low: u32, side: SplitSide) -> Result<()> {
    if *sum < int(low) {
        return Err(Error::RangeCondition {
            side,
            bound: Bound::Lower,
            sum: sum.clone(),
            limit: low,
        });
    }
    if *sum > int(low + 1) {
        return Err(Error::RangeCondition {
            side,
            bound: Bound::Upper,
            sum: sum.clone(),
            limit: low + 1,
        });
    }
    Ok(())
}

/// Splits a linearization of `n` points in `P^d` into linearizations of the
/// first `n1` points plus an attaching point in `P^{d1}` and the remaining
/// points plus an attaching point in `P^{d - d1}`.
pub fn split_linearization(
    c: &Linearization,
    n1: usize,
    d1: u32,
) -> Result<(Linearization, Linearization)> {
    let n = c.len();
    let d = c.d;
    if n1 < 2 || n1 + 2 > n {
        return Err(Error::InvalidSplit(format!(
            "need 2 <= n1 <= n - 2, got n1 = {n1}, n = {n}"
        )));
    }
    if d1 < 1 || d1 + 1 > d {
        return Err(Error::InvalidSplit(format!(
            "need 1 <= d1 <= d - 1, got d1 = {d1}, d = {d}"
        )));
    }
    let d2 = d - d1;
    let head_sum: BigRational = c.entries[..n1].iter().sum();
    let tail_sum: BigRational = c.entries[n1..].iter().sum();
    check_range(&head_sum, d1, SplitSide::First)?;
    check_range(&tail_sum, d2, SplitSide::Second)?;

    let (first, second) = split_raw(&c.entries, n1, &int(d1), &int(d2));
    let first = Linearization::new(first, d1).expect("range conditions imply membership");
    let second = Linearization::new(second, d2).expect("range conditions imply membership");
    Ok((first, second))
}

/// Validates a 1-based index subset of `{1..n}` with `2 <= |I| <= n - 2` and
/// returns `(I in increasing order, complement in increasing order)`.
pub(crate) fn cut_sides(n: usize, subset: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut inside = subset.to_vec();
    inside.sort_unstable();
    inside.dedup();
    if inside.len() != subset.len() {
        return Err(Error::InvalidSubset("repeated index".into()));
    }
    if let Some(&bad) = inside.iter().find(|&&i| i == 0 || i > n) {
        return Err(Error::InvalidSubset(format!("index {bad} outside 1..={n}")));
    }
    if inside.len() < 2 || inside.len() + 2 > n {
        return Err(Error::InvalidSubset(format!(
            "need 2 <= |I| <= n - 2, got |I| = {}, n = {n}",
            inside.len()
        )));
    }
    let outside = (1..=n).filter(|i| inside.binary_search(i).is_err()).collect();
    Ok((inside, outside))
}

fn attach(c: &WeightVector, keep: &[usize], tag: u32) -> WeightVector {
    let mut entries: Vec<u32> = keep.iter().map(|&i| c.weight(i)).collect();
    entries.push(tag);
    WeightVector { r: c.r, entries }
}

/// Weights on the `I` side of the boundary divisor: the weights of `I` in
/// their original order, then the attaching weight `Σ_{i∉I} c_i mod r`
/// represented in `1..=r`.
pub fn phi_rule(c: &WeightVector, subset: &[usize]) -> Result<WeightVector> {
    let (inside, outside) = cut_sides(c.len(), subset)?;
    let r = c.r as u64;
    let rho = match c.sum_over(&outside) % r {
        0 => r,
        v => v,
    };
    Ok(attach(c, &inside, rho as u32))
}

/// Weights on the complementary side: the weights outside `I`, then
/// `Σ_{i∈I} c_i mod r` represented in `0..r`.
pub fn psi_rule(c: &WeightVector, subset: &[usize]) -> Result<WeightVector> {
    let (inside, outside) = cut_sides(c.len(), subset)?;
    let sigma = c.sum_over(&inside) % c.r as u64;
    Ok(attach(c, &outside, sigma as u32))
}

/// Restriction of a (possibly degenerate) GIT linearization to a boundary
/// divisor. The dimension splits as `d1 = ⌊Σ_{i∈I} b_i⌋`, `d2 = d - d1`, and
/// either side may end up with dimension `0` (a trivial factor).
#[derive(Debug, Clone, PartialEq)]
pub struct CutRestriction {
    pub d: i64,
    pub d1: i64,
    pub d2: i64,
    /// Weights of `I` followed by the attaching weight.
    pub first: Vec<BigRational>,
    /// Weights of the complement followed by the attaching weight.
    pub second: Vec<BigRational>,
}

pub fn restrict_linearization(entries: &[BigRational], subset: &[usize]) -> Result<CutRestriction> {
    let (inside, outside) = cut_sides(entries.len(), subset)?;
    let total: BigRational = entries.iter().sum();
    if !total.is_integer() || total < BigRational::one() {
        return Err(Error::Precondition(format!(
            "linearization sum {total} is not a positive integer"
        )));
    }
    let d = total.to_integer() - BigInt::one();
    let reordered: Vec<BigRational> = inside
        .iter()
        .chain(outside.iter())
        .map(|&i| entries[i - 1].clone())
        .collect();
    let head_sum: BigRational = reordered[..inside.len()].iter().sum();
    let d1 = head_sum.floor().to_integer();
    let d2 = &d - &d1;
    let (first, second) = split_raw(
        &reordered,
        inside.len(),
        &BigRational::from_integer(d1.clone()),
        &BigRational::from_integer(d2.clone()),
    );
    let as_i64 = |v: &BigInt| v.to_i64().expect("dimension fits in i64");
    Ok(CutRestriction {
        d: as_i64(&d),
        d1: as_i64(&d1),
        d2: as_i64(&d2),
        first,
        second,
    })
}

impl CutRestriction {
    /// Both sides have positive dimension, so the strict splitting applies.
    pub fn is_proper(&self) -> bool {
        self.d1 >= 1 && self.d2 >= 1
    }
}
