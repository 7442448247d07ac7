//! Boundary divisors and F-curves of the moduli space, and how an F-curve sits
//! inside a boundary divisor.

use std::fmt;
use std::str::FromStr;

use crate::weights::{cut_sides, WeightVector};
use crate::{Error, Result};

/// A boundary divisor `D_I = D_{I^c}`, stored with `1 ∈ I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryCut {
    n: usize,
    subset: Vec<usize>,
}

impl BoundaryCut {
    pub fn new(n: usize, subset: &[usize]) -> Result<Self> {
        let (inside, outside) = cut_sides(n, subset)?;
        let subset = if inside.first() == Some(&1) { inside } else { outside };
        Ok(BoundaryCut { n, subset })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The side containing the point `1`, increasing.
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn complement(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|i| self.subset.binary_search(i).is_err())
            .collect()
    }
}

impl fmt::Display for BoundaryCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_block(f, &self.subset)
    }
}

/// All boundary divisors of `M_{0,n}`, each `I`/`I^c` pair once, ordered by
/// size and then lexicographically.
pub fn enumerate_boundary_cuts(n: usize) -> Vec<BoundaryCut> {
    if n < 4 {
        return Vec::new();
    }
    let mut cuts: Vec<BoundaryCut> = (0u64..1 << (n - 1))
        .filter_map(|mask| {
            // bit j of the mask selects the point j + 2; the point 1 is always in
            let mut subset = vec![1];
            subset.extend((0..n - 1).filter(|j| mask >> j & 1 == 1).map(|j| j + 2));
            (subset.len() >= 2 && subset.len() + 2 <= n).then_some(BoundaryCut { n, subset })
        })
        .collect();
    cuts.sort_by(|a, b| a.subset.len().cmp(&b.subset.len()).then_with(|| a.subset.cmp(&b.subset)));
    cuts
}

/// A partition of `{1..n}` into four nonempty blocks, indexing an F-curve.
/// Blocks are increasing and sorted by their minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition4 {
    n: usize,
    blocks: [Vec<usize>; 4],
}

impl SetPartition4 {
    pub fn new(n: usize, blocks: [Vec<usize>; 4]) -> Result<Self> {
        let mut blocks = blocks;
        let mut seen = vec![false; n + 1];
        for block in blocks.iter_mut() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i == 0 || i > n {
                    return Err(Error::InvalidPartition(format!("point {i} outside 1..={n}")));
                }
                if seen[i] {
                    return Err(Error::InvalidPartition(format!("point {i} repeated")));
                }
                seen[i] = true;
            }
        }
        if let Some(missing) = (1..=n).find(|&i| !seen[i]) {
            return Err(Error::InvalidPartition(format!("point {missing} missing")));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(SetPartition4 { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>; 4] {
        &self.blocks
    }

    /// Index of the block containing `label`.
    pub fn block_of(&self, label: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&label).is_ok())
            .expect("label belongs to the partition")
    }
}

fn write_block(f: &mut fmt::Formatter<'_>, block: &[usize]) -> fmt::Result {
    for (j, i) in block.iter().enumerate() {
        if j > 0 {
            f.write_str(",")?;
        }
        write!(f, "{i}")?;
    }
    Ok(())
}

impl fmt::Display for SetPartition4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, block) in self.blocks.iter().enumerate() {
            if j > 0 {
                f.write_str("/")?;
            }
            write_block(f, block)?;
        }
        Ok(())
    }
}

impl FromStr for SetPartition4 {
    type Err = Error;

    /// Parses `1,2/3/4/5,6`; whitespace is ignored and `n` is the largest label.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let parts: Vec<&str> = cleaned.split('/').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidPartition(format!(
                "expected 4 blocks, found {}",
                parts.len()
            )));
        }
        let mut blocks: [Vec<usize>; 4] = Default::default();
        for (block, part) in blocks.iter_mut().zip(&parts) {
            if part.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for item in part.split(',') {
                let label = item
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("bad point label {item:?}")))?;
                block.push(label);
            }
        }
        let n = blocks.iter().flatten().copied().max().unwrap_or(0);
        SetPartition4::new(n, blocks)
    }
}

/// All partitions of `{1..n}` into exactly four blocks, in canonical order.
pub fn enumerate_fcurves(n: usize) -> Vec<SetPartition4> {
    if n < 4 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // restricted growth strings: point i joins an existing block or opens the next one
    let mut assignment = vec![0usize; n];
    fn recurse(i: usize, used: usize, n: usize, assignment: &mut [usize], out: &mut Vec<SetPartition4>) {
        if n - i < 4 - used {
            return;
        }
        if i == n {
            let mut blocks: [Vec<usize>; 4] = Default::default();
            for (point, &b) in assignment.iter().enumerate() {
                blocks[b].push(point + 1);
            }
            out.push(SetPartition4 { n, blocks });
            return;
        }
        for b in 0..used.min(4) {
            assignment[i] = b;
            recurse(i + 1, used, n, assignment, out);
        }
        if used < 4 {
            assignment[i] = used;
            recurse(i + 1, used + 1, n, assignment, out);
        }
    }
    recurse(0, 0, n, &mut assignment, &mut out);
    out.sort();
    out
}

/// Four weights on the F-curve: the block sums of `c` modulo `r`, in `0..r`.
pub fn induce_four_weights(c: &WeightVector, p: &SetPartition4) -> Result<WeightVector> {
    if c.len() != p.n {
        return Err(Error::LengthMismatch {
            expected: p.n,
            actual: c.len(),
        });
    }
    if !c.is_admissible() {
        return Err(Error::NotDivisible {
            sum: c.sum(),
            r: c.r(),
        });
    }
    let r = c.r() as u64;
    let entries = p.blocks.iter().map(|b| (c.sum_over(b) % r) as u32).collect();
    WeightVector::new(c.r(), entries)
}

/// The two sides of a boundary divisor `D_I`: the `I` side carries the points
/// of `I` followed by the attaching point, the other side the complement
/// followed by the attaching point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutSide {
    /// The side of `I`, whose weights come from `phi_rule`.
    Phi,
    /// The side of `I^c`, whose weights come from `psi_rule`.
    Psi,
}

/// Finds the side of `D_I` containing the F-curve `p` and the F-curve it
/// becomes there, or `None` when `p` does not lie in `D_I`.
///
/// `p` lies in `D_I` exactly when `I` or `I^c` sits inside one block. Points on
/// the chosen side keep their relative order and the attaching point gets the
/// last label.
pub fn locate_fcurve(p: &SetPartition4, subset: &[usize]) -> Result<Option<(CutSide, SetPartition4)>> {
    let (inside, outside) = cut_sides(p.n, subset)?;
    let within = |set: &[usize]| {
        let j = p.block_of(set[0]);
        set.iter().all(|&i| p.block_of(i) == j).then_some(j)
    };
    let (side, kept, collapsed) = if let Some(j) = within(&inside) {
        (CutSide::Psi, outside, j)
    } else if let Some(j) = within(&outside) {
        (CutSide::Phi, inside, j)
    } else {
        return Ok(None);
    };
    let star = kept.len() + 1;
    let mut blocks: [Vec<usize>; 4] = Default::default();
    for (new_label, &old) in kept.iter().enumerate() {
        blocks[p.block_of(old)].push(new_label + 1);
    }
    blocks[collapsed].push(star);
    Ok(Some((side, SetPartition4::new(star, blocks)?)))
}

/// Inverse of [`locate_fcurve`]: the F-curve of `M_{0,n}` obtained from an
/// F-curve `q` on one side of `D_I` by replacing the attaching point with the
/// points of the other side.
pub fn lift_fcurve(n: usize, subset: &[usize], side: CutSide, q: &SetPartition4) -> Result<SetPartition4> {
    let (inside, outside) = cut_sides(n, subset)?;
    let (kept, other) = match side {
        CutSide::Phi => (inside, outside),
        CutSide::Psi => (outside, inside),
    };
    if q.n != kept.len() + 1 {
        return Err(Error::LengthMismatch {
            expected: kept.len() + 1,
            actual: q.n,
        });
    }
    let mut blocks: [Vec<usize>; 4] = Default::default();
    for (block, qb) in blocks.iter_mut().zip(q.blocks.iter()) {
        for &label in qb {
            if label == q.n {
                block.extend_from_slice(&other);
            } else {
                block.push(kept[label - 1]);
            }
        }
    }
    SetPartition4::new(n, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> SetPartition4 {
        s.parse().unwrap()
    }

    fn wv(r: u32, e: &[u32]) -> WeightVector {
        WeightVector::new(r, e.to_vec()).unwrap()
    }

    #[test]
    fn cut_counts() {
        let four: Vec<Vec<usize>> = enumerate_boundary_cuts(4).iter().map(|c| c.subset().to_vec()).collect();
        assert_eq!(four, vec![vec![1, 2], vec![1, 3], vec![1, 4]]);
        assert_eq!(enumerate_boundary_cuts(5).len(), 10);
        assert_eq!(enumerate_boundary_cuts(6).len(), 25);
        assert!(enumerate_boundary_cuts(3).is_empty());
    }

    #[test]
    fn cut_canonical_side() {
        let cut = BoundaryCut::new(6, &[4, 5, 6]).unwrap();
        assert_eq!(cut.subset(), &[1, 2, 3]);
        assert_eq!(cut.complement(), vec![4, 5, 6]);
        assert_eq!(cut.to_string(), "1,2,3");
        assert!(BoundaryCut::new(4, &[1]).is_err());
    }

    #[test]
    fn fcurve_counts() {
        assert_eq!(enumerate_fcurves(4), vec![part("1/2/3/4")]);
        assert_eq!(enumerate_fcurves(5).len(), 10);
        assert_eq!(enumerate_fcurves(6).len(), 65);
    }

    #[test]
    fn partition_parse_and_display() {
        let p = part(" 5,6 / 3 / 1,2 / 4 ");
        assert_eq!(p.to_string(), "1,2/3/4/5,6");
        assert_eq!(p.n(), 6);
        assert!("1,2/3/4".parse::<SetPartition4>().is_err());
        assert!("1,2//3/4".parse::<SetPartition4>().is_err());
        assert!("1,2/2/3/4".parse::<SetPartition4>().is_err());
        assert!("1,2/3/4/6".parse::<SetPartition4>().is_err());
        assert!("1,x/3/4/5".parse::<SetPartition4>().is_err());
    }

    #[test]
    fn induced_weight_examples() {
        let c = wv(2, &[1, 1, 1, 1, 0]);
        assert_eq!(induce_four_weights(&c, &part("1/2/3/4,5")).unwrap().entries(), &[1, 1, 1, 1]);
        assert_eq!(induce_four_weights(&c, &part("1,2/3/4/5")).unwrap().entries(), &[0, 1, 1, 0]);
        let c = wv(4, &[2, 1, 3, 3, 1, 2]);
        assert_eq!(induce_four_weights(&c, &part("1,2/3,4/5/6")).unwrap().entries(), &[3, 2, 1, 2]);
    }

    #[test]
    fn induced_weight_errors() {
        let c = wv(2, &[1, 1, 1, 0]);
        assert!(matches!(induce_four_weights(&c, &part("1/2/3/4")), Err(Error::NotDivisible { .. })));
        let c = wv(2, &[1, 1, 1, 1]);
        assert!(matches!(induce_four_weights(&c, &part("1/2/3/4,5")), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn locate_and_lift() {
        let p = part("1,2/3/4/5,6");
        // I = {1,2} is a block: the curve lives on the complement side
        let (side, q) = locate_fcurve(&p, &[1, 2]).unwrap().unwrap();
        assert_eq!(side, CutSide::Psi);
        assert_eq!(q.to_string(), "1/2/3,4/5");
        assert_eq!(lift_fcurve(6, &[1, 2], side, &q).unwrap(), p);
        // I = {1,2,3,4}: the complement {5,6} is a block
        let (side, q) = locate_fcurve(&p, &[1, 2, 3, 4]).unwrap().unwrap();
        assert_eq!(side, CutSide::Phi);
        assert_eq!(q.to_string(), "1,2/3/4/5");
        assert_eq!(lift_fcurve(6, &[1, 2, 3, 4], side, &q).unwrap(), p);
        // {1,3} meets two blocks on both sides
        assert!(locate_fcurve(&p, &[1, 3]).unwrap().is_none());
    }
}
