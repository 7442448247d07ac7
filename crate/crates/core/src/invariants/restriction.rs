//! Restriction of tableau functions to the image of the attaching map, and
//! the split `μ` of a tableau into a pair of tableaux on the two factors.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::poly::{rank_over_rationals, Poly, PolyMatrix, Var};
use super::tableau::{enumerate_tableaux, evaluate_on, Tableau};
use crate::weights::{split_linearization, Linearization};
use crate::{Error, Result};

const FIRST: u8 = 1;
const SECOND: u8 = 2;

/// Block sizes of the attaching map `P^{d1} × P^{d2} ⇢ P^{d1+d2}` with `n1`
/// and `n2` moving points on the two factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BlockShape {
    pub d1: usize,
    pub d2: usize,
    pub n1: usize,
    pub n2: usize,
}

impl BlockShape {
    pub fn new(d1: usize, d2: usize, n1: usize, n2: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::InvalidSplit(format!("need d1, d2 >= 1, got {d1}, {d2}")));
        }
        if n1 < 2 || n2 < 2 {
            return Err(Error::InvalidSplit(format!("need n1, n2 >= 2, got {n1}, {n2}")));
        }
        Ok(BlockShape { d1, d2, n1, n2 })
    }

    pub fn d(&self) -> usize {
        self.d1 + self.d2
    }

    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }
}

/// The ambient coordinate matrix on the image of the attaching map: the first
/// `n1` columns carry variables `y` in rows `0..=d1`, the last `n2` columns
/// carry variables `z` in rows `d1..=d`, everything else is zero.
pub fn block_matrix(shape: BlockShape) -> PolyMatrix {
    let (d1, d) = (shape.d1, shape.d());
    (0..=d)
        .map(|row| {
            let mut entries = Vec::with_capacity(shape.n());
            for col in 1..=shape.n1 {
                entries.push(if row <= d1 {
                    Poly::var(Var::new(FIRST, row, col))
                } else {
                    Poly::zero()
                });
            }
            for col in 1..=shape.n2 {
                entries.push(if row >= d1 {
                    Poly::var(Var::new(SECOND, row - d1, col))
                } else {
                    Poly::zero()
                });
            }
            entries
        })
        .collect()
}

/// Coordinates on the first factor: `n1` generic columns then `e_{d1}`.
pub fn first_factor_matrix(shape: BlockShape) -> PolyMatrix {
    factor_matrix(FIRST, shape.d1, shape.n1, shape.d1)
}

/// Coordinates on the second factor: `n2` generic columns then `e_0`.
pub fn second_factor_matrix(shape: BlockShape) -> PolyMatrix {
    factor_matrix(SECOND, shape.d2, shape.n2, 0)
}

fn factor_matrix(tag: u8, d: usize, n: usize, axis: usize) -> PolyMatrix {
    (0..=d)
        .map(|row| {
            let mut entries: Vec<Poly> = (1..=n).map(|col| Poly::var(Var::new(tag, row, col))).collect();
            entries.push(Poly::constant(i64::from(row == axis)));
            entries
        })
        .collect()
}

/// How a column of an ambient tableau meets the two blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColumnKind {
    /// `d1 + 1` first-block entries and `d2` second-block entries.
    FirstHeavy,
    /// `d1` first-block entries and `d2 + 1` second-block entries.
    SecondHeavy,
}

/// `sign · f_{first} · f_{second}` is the restriction of the ambient tableau.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub sign: i32,
    pub first: Tableau,
    pub second: Tableau,
}

impl Decomposition {
    /// Both halves with columns sorted, so equal tableau functions compare equal.
    pub fn canonical(&self) -> (Tableau, Tableau) {
        (self.first.with_sorted_columns(), self.second.with_sorted_columns())
    }
}

/// Splits tableaux for a fixed shape; the sign of each column kind is found
/// once by evaluating a representative column on the block matrix.
#[derive(Debug, Clone)]
pub struct Restrictor {
    shape: BlockShape,
    first_heavy_sign: Option<i32>,
    second_heavy_sign: Option<i32>,
}

impl Restrictor {
    pub fn new(shape: BlockShape) -> Self {
        let (d1, d2, n1, n2) = (shape.d1, shape.d2, shape.n1, shape.n2);
        let first_heavy = (n1 > d1 && n2 >= d2).then(|| {
            let col: Vec<usize> = (1..=d1 + 1).chain(n1 + 1..=n1 + d2).collect();
            column_sign(shape, &col)
        });
        let second_heavy = (n1 >= d1 && n2 > d2).then(|| {
            let col: Vec<usize> = (1..=d1).chain(n1 + 1..=n1 + d2 + 1).collect();
            column_sign(shape, &col)
        });
        Restrictor {
            shape,
            first_heavy_sign: first_heavy,
            second_heavy_sign: second_heavy,
        }
    }

    pub fn shape(&self) -> BlockShape {
        self.shape
    }

    pub fn sign(&self, kind: ColumnKind) -> Option<i32> {
        match kind {
            ColumnKind::FirstHeavy => self.first_heavy_sign,
            ColumnKind::SecondHeavy => self.second_heavy_sign,
        }
    }

    /// `None` when some column meets the blocks in any other proportion, in
    /// which case the restriction vanishes.
    pub fn decompose(&self, t: &Tableau) -> Option<Decomposition> {
        let BlockShape { d1, d2, .. } = self.shape;
        if t.height() != d1 + d2 + 1 {
            return None;
        }
        let mut sign = 1;
        let mut first_cols = Vec::with_capacity(t.k());
        let mut second_cols = Vec::with_capacity(t.k());
        for col in t.columns() {
            let (kind, first, second) = split_column(self.shape, col)?;
            sign *= self.sign(kind)?;
            first_cols.push(first);
            second_cols.push(second);
        }
        Some(Decomposition {
            sign,
            first: Tableau::new(d1 + 1, first_cols).ok()?,
            second: Tableau::new(d2 + 1, second_cols).ok()?,
        })
    }
}

fn column_sign(shape: BlockShape, col: &[usize]) -> i32 {
    let t = Tableau::new(shape.d() + 1, vec![col.to_vec()]).expect("representative column");
    let restricted = evaluate_on(&t, &block_matrix(shape)).expect("shape fits");
    let (_, first, second) = split_column(shape, col).expect("representative column splits");
    let first = Tableau::new(shape.d1 + 1, vec![first]).expect("first column");
    let second = Tableau::new(shape.d2 + 1, vec![second]).expect("second column");
    let product = factor_product(shape, &first, &second);
    if restricted == product {
        1
    } else if restricted == -product {
        -1
    } else {
        panic!("column {col:?} restricts to neither ± the split product")
    }
}

/// First-block entries and relabelled second-block entries of one column,
/// each completed by the attaching point where the column is short.
fn split_column(shape: BlockShape, col: &[usize]) -> Option<(ColumnKind, Vec<usize>, Vec<usize>)> {
    let BlockShape { d1, d2, n1, n2 } = shape;
    let mut first: Vec<usize> = col.iter().copied().filter(|&e| e <= n1).collect();
    let mut second: Vec<usize> = col.iter().filter(|&&e| e > n1).map(|&e| e - n1).collect();
    let kind = if first.len() == d1 + 1 && second.len() == d2 {
        second.push(n2 + 1);
        ColumnKind::FirstHeavy
    } else if first.len() == d1 && second.len() == d2 + 1 {
        first.push(n1 + 1);
        ColumnKind::SecondHeavy
    } else {
        return None;
    };
    Some((kind, first, second))
}

fn factor_product(shape: BlockShape, first: &Tableau, second: &Tableau) -> Poly {
    let a = evaluate_on(first, &first_factor_matrix(shape)).expect("first factor fits");
    let b = evaluate_on(second, &second_factor_matrix(shape)).expect("second factor fits");
    &a * &b
}

/// One-shot version of [`Restrictor::decompose`].
pub fn mu_decompose(t: &Tableau, shape: BlockShape) -> Option<Decomposition> {
    Restrictor::new(shape).decompose(t)
}

/// A tableau on which the block restriction disagrees with the split product
/// or the multiplicity claims.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionFailure {
    pub tableau: String,
    pub reason: String,
    pub restricted: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionReport {
    pub shape: BlockShape,
    pub k: u64,
    /// `k c_i` on the ambient points.
    pub content: Vec<usize>,
    pub basis_size: usize,
    pub first_basis_size: usize,
    pub second_basis_size: usize,
    /// Basis tableaux whose restriction is nonzero.
    pub decomposable: usize,
    pub vanishing: usize,
    /// Expected number of columns of each kind.
    pub alpha: i64,
    pub beta: i64,
    pub first_heavy_sign: Option<i32>,
    pub second_heavy_sign: Option<i32>,
    pub multiplicities_ok: bool,
    /// Images whose halves are semistandard once columns are sorted.
    pub semistandard_images: usize,
    /// Product-basis pairs that occur verbatim as an image.
    pub literal_basis_hits: usize,
    pub image_rank: usize,
    pub product_rank: usize,
    /// The restricted functions span exactly the product basis.
    pub surjective: bool,
    /// Distinct basis tableaux have distinct images.
    pub injective: bool,
    pub failure: Option<RestrictionFailure>,
}

impl RestrictionReport {
    pub fn is_ok(&self) -> bool {
        self.failure.is_none() && self.multiplicities_ok && self.surjective
    }
}

enum Outcome {
    Vanishes,
    Splits {
        image: (Tableau, Tableau),
        product: Poly,
        multiplicities_ok: bool,
    },
    Fails(RestrictionFailure),
}

/// Checks the restriction theorem for one shape and linearization at scale
/// `k`: polynomial identity per basis tableau, the column-kind counts, and
/// that the images span the product of the factor bases.
pub fn verify_restriction_theorem(
    shape: BlockShape,
    c: &Linearization,
    k: u64,
) -> Result<RestrictionReport> {
    let (n, d, n1, n2) = (shape.n(), shape.d(), shape.n1, shape.n2);
    if c.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: c.len(),
        });
    }
    if c.d() as usize != d {
        return Err(Error::Precondition(format!(
            "linearization is for P^{}, shape needs P^{d}",
            c.d()
        )));
    }
    let content = c
        .scaled_content(k)
        .ok_or_else(|| Error::Precondition(format!("k = {k} does not clear denominators")))?;
    let (first, second) = split_linearization(c, n1, shape.d1 as u32)?;
    let content1 = first.scaled_content(k).expect("split of integral content is integral");
    let content2 = second.scaled_content(k).expect("split of integral content is integral");

    let k_us = k as usize;
    let head: usize = content[..n1].iter().sum();
    let tail: usize = content[n1..].iter().sum();
    let alpha = head as i64 - (k_us * shape.d1) as i64;
    let beta = tail as i64 - (k_us * shape.d2) as i64;

    let basis = enumerate_tableaux(d, k_us, &content)?;
    let basis1 = enumerate_tableaux(shape.d1, k_us, &content1)?;
    let basis2 = enumerate_tableaux(shape.d2, k_us, &content2)?;

    let ambient = block_matrix(shape);
    let a1 = first_factor_matrix(shape);
    let a2 = second_factor_matrix(shape);
    let restrictor = Restrictor::new(shape);

    let outcomes: Vec<Outcome> = basis
        .par_iter()
        .map(|t| {
            let restricted = evaluate_on(t, &ambient).expect("basis fits block matrix");
            let fail = |reason: &str, expected: &Poly| {
                Outcome::Fails(RestrictionFailure {
                    tableau: t.to_string(),
                    reason: reason.to_string(),
                    restricted: restricted.to_string(),
                    expected: expected.to_string(),
                })
            };
            let Some(dec) = restrictor.decompose(t) else {
                return if restricted.is_zero() {
                    Outcome::Vanishes
                } else {
                    fail("nonzero restriction of a non-splitting tableau", &Poly::zero())
                };
            };
            let f1 = evaluate_on(&dec.first, &a1).expect("first half fits");
            let f2 = evaluate_on(&dec.second, &a2).expect("second half fits");
            let product = (&f1 * &f2).scale(&BigInt::from(dec.sign));
            if restricted != product {
                return fail("restriction differs from signed product", &product);
            }
            let c1 = dec.first.content(n1 + 1);
            let c2 = dec.second.content(n2 + 1);
            let alpha_seen = c2[n2] as i64;
            let beta_seen = c1[n1] as i64;
            let multiplicities_ok = c1 == content1
                && c2 == content2
                && alpha_seen == alpha
                && beta_seen == beta
                && alpha_seen + beta_seen == k as i64;
            Outcome::Splits {
                image: dec.canonical(),
                product,
                multiplicities_ok,
            }
        })
        .collect();

    let mut failure = None;
    let mut multiplicities_ok = alpha >= 0 && beta >= 0 && alpha + beta == k as i64;
    let mut images = Vec::new();
    let mut image_pairs = Vec::new();
    let mut vanishing = 0;
    for outcome in outcomes {
        match outcome {
            Outcome::Vanishes => vanishing += 1,
            Outcome::Fails(f) => {
                failure.get_or_insert(f);
            }
            Outcome::Splits {
                image,
                product,
                multiplicities_ok: ok,
            } => {
                multiplicities_ok &= ok;
                images.push(product);
                image_pairs.push(image);
            }
        }
    }

    let semistandard_images = image_pairs
        .iter()
        .filter(|(a, b)| a.is_semistandard() && b.is_semistandard())
        .count();
    let distinct: BTreeSet<&(Tableau, Tableau)> = image_pairs.iter().collect();
    let literal_basis_hits = basis1
        .iter()
        .flat_map(|t1| basis2.iter().map(move |t2| (t1.clone(), t2.clone())))
        .filter(|pair| distinct.contains(pair))
        .count();

    let products: Vec<Poly> = basis1
        .par_iter()
        .flat_map_iter(|t1| {
            let f1 = evaluate_on(t1, &a1).expect("first basis fits");
            let a2 = &a2;
            basis2
                .iter()
                .map(move |t2| &f1 * &evaluate_on(t2, a2).expect("second basis fits"))
        })
        .collect();
    let image_rank = rank_over_rationals(&images);
    let product_rank = rank_over_rationals(&products);
    let mut union = images.clone();
    union.extend(products.iter().cloned());
    let union_rank = rank_over_rationals(&union);
    let expected_dim = basis1.len() * basis2.len();
    let surjective =
        image_rank == expected_dim && product_rank == expected_dim && union_rank == expected_dim;

    Ok(RestrictionReport {
        shape,
        k,
        content,
        basis_size: basis.len(),
        first_basis_size: basis1.len(),
        second_basis_size: basis2.len(),
        decomposable: image_pairs.len(),
        vanishing,
        alpha,
        beta,
        first_heavy_sign: restrictor.first_heavy_sign,
        second_heavy_sign: restrictor.second_heavy_sign,
        multiplicities_ok,
        semistandard_images,
        literal_basis_hits,
        image_rank,
        product_rank,
        surjective,
        injective: distinct.len() == image_pairs.len(),
        failure,
    })
}

/// Uniform linearization `c_i = (d+1)/n` on `n` points of `P^d`.
pub fn uniform_linearization(d: u32, n: usize) -> Result<Linearization> {
    let q = BigRational::new(BigInt::from(d + 1), BigInt::from(n));
    Linearization::new(vec![q; n], d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::tableau::evaluate_tableau;

    fn tab(height: usize, cols: &[&[usize]]) -> Tableau {
        Tableau::new(height, cols.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn displayed_column_splits() {
        // (1..=d1+1, n1+1..=n1+d2) goes to (1..=d1+1) and (1..=d2, n2+1)
        let shape = BlockShape::new(2, 2, 4, 3).unwrap();
        let dec = mu_decompose(&tab(5, &[&[1, 2, 3, 5, 6]]), shape).unwrap();
        assert_eq!(dec.first, tab(3, &[&[1, 2, 3]]));
        assert_eq!(dec.second, tab(3, &[&[1, 2, 4]]));
    }

    #[test]
    fn small_column_splits() {
        let shape = BlockShape::new(1, 1, 2, 2).unwrap();
        let dec = mu_decompose(&tab(3, &[&[1, 2, 3]]), shape).unwrap();
        assert_eq!(dec.first, tab(2, &[&[1, 2]]));
        assert_eq!(dec.second, tab(2, &[&[1, 3]]));
        // the restriction is z_{1,1} times the first minor, and the second
        // factor's minor against e_0 is -z_{1,1}
        assert_eq!(dec.sign, -1);
    }

    #[test]
    fn overfull_block_vanishes() {
        let shape = BlockShape::new(1, 1, 3, 2).unwrap();
        let t = tab(3, &[&[1, 2, 3]]);
        assert!(mu_decompose(&t, shape).is_none());
        assert!(evaluate_on(&t, &block_matrix(shape)).unwrap().is_zero());
    }

    #[test]
    fn signs_match_hand_rule() {
        // first-heavy columns pick up (-1)^{d2}, second-heavy columns +1
        for (d1, d2) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
            let shape = BlockShape::new(d1, d2, d1 + 2, d2 + 2).unwrap();
            let r = Restrictor::new(shape);
            let expected = if d2 % 2 == 0 { 1 } else { -1 };
            assert_eq!(r.sign(ColumnKind::FirstHeavy), Some(expected), "{shape:?}");
            assert_eq!(r.sign(ColumnKind::SecondHeavy), Some(1), "{shape:?}");
        }
    }

    #[test]
    fn substitution_agrees_with_direct_evaluation() {
        let shape = BlockShape::new(1, 1, 2, 2).unwrap();
        let ambient = block_matrix(shape);
        let t = tab(3, &[&[1, 2, 3], &[1, 3, 4]]);
        let generic = evaluate_tableau(&t, shape.n()).unwrap();
        let substituted = generic.substitute(&|v: Var| {
            (v.matrix == 0).then(|| ambient[v.row as usize][v.col as usize - 1].clone())
        });
        assert_eq!(substituted, evaluate_on(&t, &ambient).unwrap());
    }

    #[test]
    fn verification_small_case() {
        let shape = BlockShape::new(1, 1, 2, 2).unwrap();
        let c = uniform_linearization(2, 4).unwrap();
        let report = verify_restriction_theorem(shape, &c, 4).unwrap();
        assert!(report.is_ok(), "{report:?}");
        assert_eq!(report.alpha + report.beta, 4);
        assert_eq!(report.image_rank, report.first_basis_size * report.second_basis_size);
    }

    #[test]
    fn verification_rejects_range_violation() {
        // the first two points carry total weight 1/2 < d1
        let shape = BlockShape::new(1, 1, 2, 3).unwrap();
        let c = Linearization::from_ratios(&[(1, 4), (1, 4), (1, 1), (1, 1), (1, 2)], 2).unwrap();
        assert!(matches!(
            verify_restriction_theorem(shape, &c, 4),
            Err(Error::RangeCondition { .. })
        ));
    }

    #[test]
    fn verification_rejects_fractional_scale() {
        let shape = BlockShape::new(1, 1, 2, 2).unwrap();
        let c = uniform_linearization(2, 4).unwrap();
        assert!(matches!(verify_restriction_theorem(shape, &c, 2), Err(Error::Precondition(_))));
    }
}
