//! The three weighted factorization systems as degree functions on F-curves.
//!
//! Each family reaches the four-point base case through its own restriction
//! mechanism:
//!
//! * conformal blocks: block sums of the weights modulo `r` (the fusion rule
//!   at level one has a single nonzero channel);
//! * GIT: the rational linearization `c / r` is split along boundary
//!   divisors one block at a time, with the convention that the bundle is
//!   trivial whenever `d ∉ {1, ..., n - 3}`;
//! * cyclic covers: the admissible-cover limit is taken one block at a time.
//!
//! Degrees of the GIT family are stored multiplied by `r`, so all three
//! families take integer values on the same scale.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::covers::{degenerate, CoverSpec};
use crate::strata::{enumerate_fcurves, induce_four_weights, lift_fcurve, locate_fcurve, CutSide, SetPartition4};
use crate::weights::{cut_sides, phi_rule, psi_rule, restrict_linearization, split_linearization, Linearization, WeightVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BundleFamily {
    /// `V(sl_r, 1, (ω_{c_1}, ..., ω_{c_n}))`
    #[serde(rename = "cb")]
    ConformalBlocks,
    /// `G_{|c|/r - 1, c}`
    #[serde(rename = "git")]
    Git,
    /// `Σ_{r,c}^{⊗r}`
    #[serde(rename = "cyc")]
    Cyclic,
}

impl BundleFamily {
    pub const ALL: [BundleFamily; 3] = [BundleFamily::ConformalBlocks, BundleFamily::Git, BundleFamily::Cyclic];

    pub fn name(&self) -> &'static str {
        match self {
            BundleFamily::ConformalBlocks => "cb",
            BundleFamily::Git => "git",
            BundleFamily::Cyclic => "cyc",
        }
    }
}

impl fmt::Display for BundleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BundleFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cb" => Ok(BundleFamily::ConformalBlocks),
            "git" => Ok(BundleFamily::Git),
            "cyc" => Ok(BundleFamily::Cyclic),
            other => Err(Error::Precondition(format!(
                "unknown bundle family {other:?}, expected cb, git or cyc"
            ))),
        }
    }
}

fn sorted4(r: u32, c: [u32; 4]) -> [u32; 4] {
    assert!(c.iter().all(|&x| x <= r), "four-point weights must lie in 0..=r");
    let mut c = c;
    c.sort_unstable();
    c
}

/// Degree of the level-one conformal block bundle on `M_{0,4}`.
pub fn deg4_cb(r: u32, c: [u32; 4]) -> u32 {
    let [c1, c2, c3, c4] = sorted4(r, c);
    if c1 + c2 + c3 + c4 != 2 * r {
        return 0;
    }
    if c2 + c3 >= c1 + c4 {
        c1
    } else {
        r - c4
    }
}

/// `r` times the degree of the GIT bundle on `M_{0,4}`.
pub fn deg4_git(r: u32, c: [u32; 4]) -> u32 {
    let [c1, _, _, c4] = sorted4(r, c);
    if c.iter().sum::<u32>() != 2 * r {
        return 0;
    }
    // min{c1/r, 1 - c4/r} scaled by r
    c1.min(r - c4)
}

/// Degree of the `r`-th power of the cyclic eigenbundle determinant on `M_{0,4}`.
pub fn deg4_cyc(r: u32, c: [u32; 4]) -> u32 {
    let [c1, _, _, c4] = sorted4(r, c);
    if c.iter().sum::<u32>() == 2 * r {
        c1.min(r - c4)
    } else {
        0
    }
}

pub fn deg4(fam: BundleFamily, r: u32, c: [u32; 4]) -> u32 {
    match fam {
        BundleFamily::ConformalBlocks => deg4_cb(r, c),
        BundleFamily::Git => deg4_git(r, c),
        BundleFamily::Cyclic => deg4_cyc(r, c),
    }
}

fn four(entries: &[u32]) -> [u32; 4] {
    entries.try_into().expect("four weights")
}

/// Order in which the GIT route peels blocks off an F-curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GitChain {
    /// Restrict along `I = B` for a block `B`; the curve stays on the
    /// complement side, whose attaching weight is represented in `[0, 1)`.
    CollapseBlock,
    /// Restrict along `I = B^c`; the curve stays on the `I` side, whose
    /// attaching weight is represented in `(0, 1]`.
    KeepBlock,
}

/// Linearization restricted to `D_I`, for weights `x_i / r` held as
/// numerators over the fixed denominator `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ScaledCut {
    d: i64,
    d1: i64,
    d2: i64,
    first: Vec<u64>,
    second: Vec<u64>,
}

fn restrict_scaled(numerators: &[u64], r: u64, subset: &[usize]) -> Result<ScaledCut> {
    let (inside, outside) = cut_sides(numerators.len(), subset)?;
    let total: u64 = numerators.iter().sum();
    let head: u64 = inside.iter().map(|&i| numerators[i - 1]).sum();
    let tail = total - head;
    let d = (total / r) as i64 - 1;
    let d1 = (head / r) as i64;
    let d2 = d - d1;
    let attach = |sum: u64, shift: i64| -> Result<u64> {
        u64::try_from(sum as i64 - shift * r as i64)
            .map_err(|_| Error::Precondition(format!("negative attaching weight {sum}/{r} - {shift}")))
    };
    let mut first: Vec<u64> = inside.iter().map(|&i| numerators[i - 1]).collect();
    first.push(attach(tail, d2)?);
    let mut second: Vec<u64> = outside.iter().map(|&i| numerators[i - 1]).collect();
    second.push(attach(head, d1)?);
    Ok(ScaledCut { d, d1, d2, first, second })
}

/// `r` times the degree of `G_{|c|/r - 1, c}` on the F-curve `p`, computed by
/// splitting the linearization `c / r` until four points remain.
///
/// Every weight met along the way has denominator dividing `r`, so the
/// linearization is carried as integer numerators over `r`.
pub fn git_fcurve_degree(c: &WeightVector, p: &SetPartition4, chain: GitChain) -> Result<u32> {
    check_inputs(c, p)?;
    if !c.is_admissible() {
        return Ok(0);
    }
    let r = c.r();
    let mut weights: Vec<u64> = c.entries().iter().map(|&x| x as u64).collect();
    let mut curve = p.clone();
    loop {
        let n = weights.len();
        let total: u64 = weights.iter().sum();
        let d = (total / r as u64) as i64 - 1;
        if d < 1 || d > n as i64 - 3 {
            return Ok(0);
        }
        if n == 4 {
            let scaled: Vec<u32> = weights.iter().map(|&x| x as u32).collect();
            return Ok(deg4_git(r, four(&scaled)));
        }
        let block = curve
            .blocks()
            .iter()
            .find(|b| b.len() >= 2)
            .expect("an F-curve with more than four points has a block of size at least two")
            .clone();
        let subset = match chain {
            GitChain::CollapseBlock => block,
            GitChain::KeepBlock => (1..=n).filter(|i| block.binary_search(i).is_err()).collect(),
        };
        let cut = restrict_scaled(&weights, r as u64, &subset)?;
        let (side, next) = locate_fcurve(&curve, &subset)?.expect("the curve lies in this boundary divisor");
        weights = match side {
            CutSide::Phi => cut.first,
            CutSide::Psi => cut.second,
        };
        curve = next;
    }
}

/// Degree of the cyclic family on `p`, through successive admissible-cover
/// limits that peel one block at a time.
pub fn cyc_fcurve_degree(c: &WeightVector, p: &SetPartition4) -> Result<u32> {
    check_inputs(c, p)?;
    if !c.is_admissible() {
        return Ok(0);
    }
    let r = c.r();
    let mut weights = c.clone();
    let mut curve = p.clone();
    while weights.len() > 4 {
        let block = curve
            .blocks()
            .iter()
            .find(|b| b.len() >= 2)
            .expect("a block of size at least two")
            .clone();
        let rest: Vec<usize> = (1..=weights.len()).filter(|i| block.binary_search(i).is_err()).collect();
        // branch points of the block first, so they land on the first component
        let reordered: Vec<u32> = block.iter().chain(&rest).map(|&i| weights.weight(i)).collect();
        let spec = CoverSpec::new(WeightVector::new(r, reordered)?)?;
        let limit = degenerate(&spec, block.len())?;
        let (_, next) = locate_fcurve(&curve, &block)?.expect("a block always contains its own curve");
        weights = limit.c_double_prime;
        curve = next;
    }
    Ok(deg4_cyc(r, four(weights.entries())))
}

fn check_inputs(c: &WeightVector, p: &SetPartition4) -> Result<()> {
    if c.r() < 2 {
        return Err(Error::Precondition(format!("need r >= 2, got {}", c.r())));
    }
    if c.len() != p.n() {
        return Err(Error::LengthMismatch {
            expected: p.n(),
            actual: c.len(),
        });
    }
    Ok(())
}

/// Degree of the bundle of family `fam` with weights `c` on the F-curve `p`.
/// Weights whose sum is not divisible by `r` give the trivial bundle.
pub fn fcurve_degree(fam: BundleFamily, c: &WeightVector, p: &SetPartition4) -> Result<u32> {
    check_inputs(c, p)?;
    if !c.is_admissible() {
        return Ok(0);
    }
    match fam {
        BundleFamily::ConformalBlocks => {
            let u = induce_four_weights(c, p)?;
            Ok(deg4_cb(c.r(), four(u.entries())))
        }
        BundleFamily::Git => git_fcurve_degree(c, p, GitChain::CollapseBlock),
        BundleFamily::Cyclic => cyc_fcurve_degree(c, p),
    }
}

/// The degrees of a line bundle on every F-curve, keyed canonically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVector {
    n: usize,
    r: u32,
    degrees: BTreeMap<SetPartition4, u32>,
}

impl DegreeVector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn get(&self, p: &SetPartition4) -> Option<u32> {
        self.degrees.get(p).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SetPartition4, u32)> {
        self.degrees.iter().map(|(p, &d)| (p, d))
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.values().all(|&d| d == 0)
    }
}

pub fn degree_vector(fam: BundleFamily, c: &WeightVector) -> Result<DegreeVector> {
    if c.len() < 4 {
        return Err(Error::Precondition(format!("need n >= 4, got {}", c.len())));
    }
    degree_vector_over(fam, c, &enumerate_fcurves(c.len()))
}

fn degree_vector_over(fam: BundleFamily, c: &WeightVector, curves: &[SetPartition4]) -> Result<DegreeVector> {
    let degrees = curves
        .iter()
        .map(|p| Ok((p.clone(), fcurve_degree(fam, c, p)?)))
        .collect::<Result<_>>()?;
    Ok(DegreeVector {
        n: c.len(),
        r: c.r(),
        degrees,
    })
}

/// An F-curve on which the three families disagree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Mismatch {
    pub weights: Vec<u32>,
    pub partition: String,
    pub cb: u32,
    pub git: u32,
    pub cyc: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainTheoremReport {
    pub r: u32,
    pub n: usize,
    pub vectors_checked: u64,
    pub fcurves_per_vector: usize,
    /// Sorted lexicographically by weights, then partition.
    pub mismatches: Vec<Mismatch>,
}

impl MainTheoremReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// All `c ∈ {0..r-1}^n` with `r | Σ c_i`, in lexicographic order.
pub fn admissible_weights(r: u32, n: usize) -> Vec<WeightVector> {
    let total = (r as u64).pow(n as u32);
    (0..total)
        .filter_map(|index| {
            let mut entries = vec![0u32; n];
            let mut rest = index;
            for slot in entries.iter_mut().rev() {
                *slot = (rest % r as u64) as u32;
                rest /= r as u64;
            }
            let w = WeightVector::new(r, entries).expect("entries below r");
            w.is_admissible().then_some(w)
        })
        .collect()
}

/// Compares the CB, GIT and cyclic degree vectors for every admissible weight
/// vector with entries in `0..r`. Runs on the current rayon pool; the report
/// does not depend on the number of workers.
pub fn verify_main_theorem(r: u32, n: usize) -> Result<MainTheoremReport> {
    if r < 2 {
        return Err(Error::Precondition(format!("need r >= 2, got {r}")));
    }
    if n < 4 {
        return Err(Error::Precondition(format!("need n >= 4, got {n}")));
    }
    let curves = enumerate_fcurves(n);
    let vectors = admissible_weights(r, n);
    let per_vector: Vec<Vec<Mismatch>> = vectors
        .par_iter()
        .map(|c| -> Result<Vec<Mismatch>> {
            let mut found = Vec::new();
            for p in &curves {
                let cb = fcurve_degree(BundleFamily::ConformalBlocks, c, p)?;
                let git = fcurve_degree(BundleFamily::Git, c, p)?;
                let cyc = fcurve_degree(BundleFamily::Cyclic, c, p)?;
                if cb != git || git != cyc {
                    found.push(Mismatch {
                        weights: c.entries().to_vec(),
                        partition: p.to_string(),
                        cb,
                        git,
                        cyc,
                    });
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    let mut mismatches: Vec<Mismatch> = per_vector.into_iter().flatten().collect();
    mismatches.sort();
    Ok(MainTheoremReport {
        r,
        n,
        vectors_checked: vectors.len() as u64,
        fcurves_per_vector: curves.len(),
        mismatches,
    })
}

/// Compares the degree of the ambient bundle on every F-curve lying in `D_I`
/// with the degree of the factor bundle given by the factorization rule on
/// the side that contains it. Returns the first disagreement, if any.
pub fn factorization_mismatch(
    fam: BundleFamily,
    c: &WeightVector,
    subset: &[usize],
) -> Result<Option<(SetPartition4, u32, u32)>> {
    let n = c.len();
    cut_sides(n, subset)?;
    let sides = [
        (CutSide::Phi, phi_rule(c, subset)?),
        (CutSide::Psi, psi_rule(c, subset)?),
    ];
    for (side, w) in &sides {
        for q in enumerate_fcurves(w.len()) {
            let p = lift_fcurve(n, subset, *side, &q)?;
            let ambient = fcurve_degree(fam, c, &p)?;
            let factor = fcurve_degree(fam, w, &q)?;
            if ambient != factor {
                return Ok(Some((p, ambient, factor)));
            }
        }
    }
    Ok(None)
}

/// Numerical check of `∂_I^* G_{d,c} ≅ G_{d1,c'} ⊠ G_{d2,c''}`.
///
/// Two things are compared: the rational linearizations produced by the GIT
/// restriction against `phi_rule(c) / r` and `psi_rule(c) / r`, and the GIT
/// degrees of the ambient bundle and of the factor bundles on every F-curve
/// inside the boundary divisor.
pub fn check_git_factorization(c: &WeightVector, subset: &[usize]) -> Result<bool> {
    let n = c.len();
    let (inside, outside) = cut_sides(n, subset)?;
    if !c.is_admissible() {
        return Ok(true);
    }
    let r = c.r();
    let phi = phi_rule(c, subset)?;
    let psi = psi_rule(c, subset)?;

    if c.sum() > 0 {
        let denom = BigInt::from(r);
        let scale = |w: &WeightVector| -> Vec<BigRational> {
            w.entries()
                .iter()
                .map(|&x| BigRational::new(BigInt::from(x), denom.clone()))
                .collect()
        };
        let b = scale(c);
        let cut = restrict_linearization(&b, subset)?;
        if cut.first != scale(&phi) || cut.second != scale(&psi) {
            return Ok(false);
        }
        if cut.is_proper() {
            let reordered: Vec<BigRational> = inside.iter().chain(&outside).map(|&i| b[i - 1].clone()).collect();
            let lin = Linearization::new(reordered, cut.d as u32)?;
            let (first, second) = split_linearization(&lin, inside.len(), cut.d1 as u32)?;
            if first.entries() != cut.first.as_slice() || second.entries() != cut.second.as_slice() {
                return Ok(false);
            }
            let d1_from_rule = (phi.sum() / r as u64) as i64 - 1;
            let d2_from_rule = (psi.sum() / r as u64) as i64 - 1;
            if d1_from_rule != cut.d1 || d2_from_rule != cut.d2 {
                return Ok(false);
            }
        }
    }

    Ok(factorization_mismatch(BundleFamily::Git, c, subset)?.is_none())
}

/// `true` if every degree lies in `0..=r/2`, the range of the base formulas.
pub fn degrees_in_base_range(v: &DegreeVector) -> bool {
    v.iter().all(|(_, d)| d <= v.r / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wv(r: u32, e: &[u32]) -> WeightVector {
        WeightVector::new(r, e.to_vec()).unwrap()
    }

    fn part(s: &str) -> SetPartition4 {
        s.parse().unwrap()
    }

    #[test]
    fn scaled_cut_matches_rational_restriction() {
        for r in 2..=5u32 {
            for c in admissible_weights(r, 6) {
                if c.sum() == 0 {
                    continue;
                }
                let nums: Vec<u64> = c.entries().iter().map(|&x| x as u64).collect();
                let rational: Vec<BigRational> = nums
                    .iter()
                    .map(|&x| BigRational::new(BigInt::from(x), BigInt::from(r)))
                    .collect();
                for cut in crate::strata::enumerate_boundary_cuts(6) {
                    let exact = restrict_linearization(&rational, cut.subset()).unwrap();
                    let Ok(fast) = restrict_scaled(&nums, r as u64, cut.subset()) else {
                        // a negative attaching weight only arises outside the proper range
                        assert!(!exact.is_proper());
                        continue;
                    };
                    let lift = |v: &[u64]| -> Vec<BigRational> {
                        v.iter().map(|&x| BigRational::new(BigInt::from(x), BigInt::from(r))).collect()
                    };
                    assert_eq!((fast.d, fast.d1, fast.d2), (exact.d, exact.d1, exact.d2));
                    assert_eq!(lift(&fast.first), exact.first);
                    assert_eq!(lift(&fast.second), exact.second);
                }
            }
        }
    }

    #[test]
    fn base_formula_examples() {
        assert_eq!(deg4_cb(2, [1, 1, 1, 1]), 1);
        assert_eq!(deg4_cb(3, [1, 1, 1, 3]), 0);
        assert_eq!(deg4_cb(3, [0, 0, 1, 2]), 0);
        assert_eq!(deg4_git(2, [1, 1, 1, 1]), 1);
        assert_eq!(deg4_git(4, [1, 2, 2, 3]), 1);
        assert_eq!(deg4_git(4, [0, 1, 3, 4]), 0);
        assert_eq!(deg4_cyc(2, [1, 1, 1, 1]), 1);
        assert_eq!(deg4_cyc(5, [2, 2, 3, 3]), 2);
        assert_eq!(deg4_cyc(2, [0, 0, 0, 0]), 0);
    }

    #[test]
    fn base_formulas_sort_their_input() {
        assert_eq!(deg4_cb(5, [3, 2, 3, 2]), 2);
        assert_eq!(deg4_git(5, [3, 3, 2, 2]), 2);
        assert_eq!(deg4_cyc(4, [3, 1, 2, 2]), 1);
    }

    #[test]
    #[should_panic]
    fn base_formula_rejects_large_weight() {
        deg4_cb(2, [3, 1, 0, 0]);
    }

    #[test]
    fn fcurve_examples() {
        let c = wv(2, &[1, 1, 1, 1, 0]);
        assert_eq!(fcurve_degree(BundleFamily::ConformalBlocks, &c, &part("1/2/3/4,5")).unwrap(), 1);
        assert_eq!(fcurve_degree(BundleFamily::Git, &c, &part("1,2/3/4/5")).unwrap(), 0);
        let odd = wv(2, &[1, 1, 1, 0, 0]);
        for fam in BundleFamily::ALL {
            assert_eq!(fcurve_degree(fam, &odd, &part("1/2/3/4,5")).unwrap(), 0);
        }
    }

    #[test]
    fn fcurve_input_errors() {
        let c = wv(2, &[1, 1, 1, 1]);
        assert!(fcurve_degree(BundleFamily::Cyclic, &c, &part("1/2/3/4,5")).is_err());
        let c = wv(1, &[1, 1, 0, 0]);
        assert!(fcurve_degree(BundleFamily::Git, &c, &part("1/2/3/4")).is_err());
    }

    #[test]
    fn degree_vector_examples() {
        let v = degree_vector(BundleFamily::ConformalBlocks, &wv(2, &[1, 1, 1, 1])).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.get(&part("1/2/3/4")), Some(1));
        assert!(degree_vector(BundleFamily::Git, &wv(3, &[0; 5])).unwrap().is_zero());
        assert!(degree_vector(BundleFamily::Git, &wv(3, &[0; 3])).is_err());
    }

    #[test]
    fn git_trivial_outside_dimension_range() {
        // |c|/r - 1 = 2 > n - 3 = 1
        let c = wv(4, &[3, 3, 3, 3]);
        assert!(degree_vector(BundleFamily::Git, &c).unwrap().is_zero());
        // |c| = r gives d = 0
        let c = wv(5, &[1, 2, 2, 0, 0]);
        assert!(degree_vector(BundleFamily::Git, &c).unwrap().is_zero());
    }

    #[test]
    fn git_chains_agree_on_figure_weights() {
        let c = wv(4, &[2, 1, 3, 3, 1, 2]);
        for p in enumerate_fcurves(6) {
            let a = git_fcurve_degree(&c, &p, GitChain::CollapseBlock).unwrap();
            let b = git_fcurve_degree(&c, &p, GitChain::KeepBlock).unwrap();
            assert_eq!(a, b, "{p}");
        }
    }

    #[test]
    fn main_theorem_small_counts() {
        let report = verify_main_theorem(2, 4).unwrap();
        assert_eq!((report.vectors_checked, report.fcurves_per_vector), (8, 1));
        assert!(report.is_ok());
        let report = verify_main_theorem(2, 5).unwrap();
        assert_eq!((report.vectors_checked, report.fcurves_per_vector), (16, 10));
        assert!(report.is_ok());
        let report = verify_main_theorem(5, 4).unwrap();
        assert_eq!(report.vectors_checked, 125);
        assert!(report.is_ok());
        assert!(verify_main_theorem(1, 4).is_err());
        assert!(verify_main_theorem(2, 3).is_err());
    }

    #[test]
    fn git_factorization_examples() {
        assert!(check_git_factorization(&wv(2, &[1, 1, 1, 1]), &[1, 2]).unwrap());
        assert!(check_git_factorization(&wv(4, &[2, 1, 3, 3, 1, 2]), &[1, 2, 3]).unwrap());
        assert!(check_git_factorization(&wv(3, &[1, 1, 0, 0, 0]), &[1, 2]).unwrap());
        assert!(check_git_factorization(&wv(3, &[0, 0, 0, 0, 0]), &[2, 4]).unwrap());
        assert!(check_git_factorization(&wv(2, &[1, 1, 1, 1]), &[1]).is_err());
    }
}
