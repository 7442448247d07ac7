//! Point configurations in projective space, the block attaching map, and the
//! Hilbert-Mumford semistability test for a rational linearization.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::weights::Linearization;
use crate::{Error, Result};

/// `n` points of `P^d`, each stored with its first nonzero coordinate equal
/// to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointConfiguration {
    d: usize,
    points: Vec<Vec<BigRational>>,
}

impl PointConfiguration {
    pub fn new(d: usize, points: Vec<Vec<BigRational>>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(points.len());
        for (i, p) in points.into_iter().enumerate() {
            if p.len() != d + 1 {
                return Err(Error::InvalidConfiguration(format!(
                    "point {} has {} coordinates, expected {}",
                    i + 1,
                    p.len(),
                    d + 1
                )));
            }
            let Some(lead) = p.iter().find(|x| !x.is_zero()).cloned() else {
                return Err(Error::InvalidConfiguration(format!("point {} is zero", i + 1)));
            };
            normalized.push(p.into_iter().map(|x| x / &lead).collect());
        }
        Ok(PointConfiguration {
            d,
            points: normalized,
        })
    }

    pub fn from_integers(d: usize, points: &[Vec<i64>]) -> Result<Self> {
        let points = points
            .iter()
            .map(|p| p.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        PointConfiguration::new(d, points)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<BigRational>] {
        &self.points
    }

    /// Drops the last point, which must equal the `axis`-th coordinate vector.
    fn without_fixed_point(&self, axis: usize) -> Result<&[Vec<BigRational>]> {
        let Some((last, rest)) = self.points.split_last() else {
            return Err(Error::InvalidConfiguration("empty configuration".into()));
        };
        let is_axis = last
            .iter()
            .enumerate()
            .all(|(i, x)| if i == axis { x.is_one() } else { x.is_zero() });
        if !is_axis {
            return Err(Error::InvalidConfiguration(format!(
                "last point must be coordinate vector e_{axis} (0-based), got {}",
                fmt_point(last)
            )));
        }
        Ok(rest)
    }
}

fn fmt_point(p: &[BigRational]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl fmt::Display for PointConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|p| fmt_point(p)).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Glues `A1 ⊂ P^{d1}` (last point `e_{d1}`) and `A2 ⊂ P^{d2}` (last point
/// `e_0`) into `P^{d1+d2}`: the first block uses rows `0..=d1`, the second
/// rows `d1..=d1+d2`, and the two fixed points are identified and dropped.
pub fn attach_configuration(
    first: &PointConfiguration,
    second: &PointConfiguration,
) -> Result<PointConfiguration> {
    let (d1, d2) = (first.d, second.d);
    let head = first.without_fixed_point(d1)?;
    let tail = second.without_fixed_point(0)?;
    let d = d1 + d2;
    let mut points = Vec::with_capacity(head.len() + tail.len());
    for p in head {
        let mut q = p.clone();
        q.resize(d + 1, BigRational::zero());
        points.push(q);
    }
    for p in tail {
        let mut q = vec![BigRational::zero(); d1];
        q.extend(p.iter().cloned());
        points.push(q);
    }
    PointConfiguration::new(d, points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl Stability {
    pub fn is_semistable(self) -> bool {
        self != Stability::Unstable
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::StrictlySemistable => "strictly-semistable",
            Stability::Unstable => "unstable",
        })
    }
}

/// Rank of a set of vectors over `Q`.
pub(crate) fn rank(vectors: &[&[BigRational]]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = vectors.iter().map(|v| v.to_vec()).collect();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for i in rank + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = &rows[i][col] / &lead;
            for j in col..width {
                let delta = &factor * &rows[rank][j];
                rows[i][j] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

/// Checks `Σ_{p_i ∈ W} c_i ≤ dim W + 1` over proper subspaces `W` spanned by
/// at most `d` of the points.
pub fn is_semistable(cfg: &PointConfiguration, c: &Linearization) -> Result<Stability> {
    if c.len() != cfg.len() {
        return Err(Error::LengthMismatch {
            expected: cfg.len(),
            actual: c.len(),
        });
    }
    if c.d() as usize != cfg.d {
        return Err(Error::Precondition(format!(
            "linearization has total weight {}, configuration lives in P^{}",
            c.d() + 1,
            cfg.d
        )));
    }
    let n = cfg.len();
    let mut result = Stability::Stable;
    let mut subset = Vec::new();
    for size in 1..=cfg.d.min(n) {
        subset.clear();
        subset.extend(0..size);
        loop {
            let spanning: Vec<&[BigRational]> =
                subset.iter().map(|&i| cfg.points[i].as_slice()).collect();
            let dim = rank(&spanning);
            // only test each subspace from an independent spanning set
            if dim == size {
                let mut weight = BigRational::zero();
                for (i, p) in cfg.points.iter().enumerate() {
                    let inside = subset.contains(&i) || {
                        let mut with = spanning.clone();
                        with.push(p);
                        rank(&with) == dim
                    };
                    if inside {
                        weight += &c.entries()[i];
                    }
                }
                let bound = BigRational::from_integer(dim.into());
                if weight > bound {
                    return Ok(Stability::Unstable);
                }
                if weight == bound {
                    result = Stability::StrictlySemistable;
                }
            }
            if !next_subset(&mut subset, n) {
                break;
            }
        }
    }
    Ok(result)
}

/// Advances a sorted index subset to the next one in lexicographic order.
fn next_subset(subset: &mut [usize], n: usize) -> bool {
    let size = subset.len();
    for i in (0..size).rev() {
        if subset[i] < n - size + i {
            subset[i] += 1;
            for j in i + 1..size {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
