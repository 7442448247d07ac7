//! Semistandard tableaux and their tableau functions (products of maximal
//! minors of a coordinate matrix).

use std::fmt;

use serde::Serialize;

use super::poly::{determinant, Poly, PolyMatrix, Var};
use crate::{Error, Result};

/// A `(d+1) × k` filling stored column by column with 1-based entries.
///
/// Columns strictly increase downwards. Rows are only required to weakly
/// increase for [`Tableau::is_semistandard`] fillings; `μ`-images may violate
/// this, so the constructor does not insist on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Tableau {
    height: usize,
    columns: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(height: usize, columns: Vec<Vec<usize>>) -> Result<Self> {
        if height == 0 {
            return Err(Error::InvalidTableau("column height must be positive".into()));
        }
        for col in &columns {
            if col.len() != height {
                return Err(Error::InvalidTableau(format!(
                    "column {col:?} has length {}, expected {height}",
                    col.len()
                )));
            }
            if col[0] == 0 || col.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidTableau(format!(
                    "column {col:?} is not strictly increasing from 1"
                )));
            }
        }
        Ok(Tableau { height, columns })
    }

    /// Column height minus one: the dimension of the projective space.
    pub fn d(&self) -> usize {
        self.height - 1
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    pub fn max_entry(&self) -> usize {
        self.columns.iter().filter_map(|c| c.last().copied()).max().unwrap_or(0)
    }

    /// Rows weakly increase from left to right.
    pub fn is_semistandard(&self) -> bool {
        self.columns
            .windows(2)
            .all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| a <= b))
    }

    /// Multiplicity of each label `1..=n`.
    pub fn content(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for &e in self.columns.iter().flatten() {
            if e <= n {
                out[e - 1] += 1;
            }
        }
        out
    }

    /// The same multiset of columns, sorted lexicographically. The tableau
    /// function is unchanged.
    pub fn with_sorted_columns(&self) -> Tableau {
        let mut columns = self.columns.clone();
        columns.sort();
        Tableau {
            height: self.height,
            columns,
        }
    }

    /// Column concatenation; the tableau function is multiplicative over it.
    pub fn concat(&self, other: &Tableau) -> Result<Tableau> {
        if self.height != other.height {
            return Err(Error::InvalidTableau(format!(
                "cannot concatenate heights {} and {}",
                self.height, other.height
            )));
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Ok(Tableau {
            height: self.height,
            columns,
        })
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, col) in self.columns.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            let parts: Vec<String> = col.iter().map(|e| e.to_string()).collect();
            f.write_str(&parts.join(","))?;
        }
        Ok(())
    }
}

/// All semistandard tableaux of height `d+1` with `k` columns in which label
/// `i` appears `content[i-1]` times, in lexicographic order of column lists.
pub fn enumerate_tableaux(d: usize, k: usize, content: &[usize]) -> Result<Vec<Tableau>> {
    let height = d + 1;
    let total: usize = content.iter().sum();
    if total != k * height {
        return Err(Error::Precondition(format!(
            "content sums to {total}, expected k(d+1) = {}",
            k * height
        )));
    }
    let mut out = Vec::new();
    let mut remaining = content.to_vec();
    let mut columns = Vec::with_capacity(k);
    fill(height, k, &mut remaining, &mut columns, &mut out);
    Ok(out)
}

fn fill(
    height: usize,
    k: usize,
    remaining: &mut [usize],
    columns: &mut Vec<Vec<usize>>,
    out: &mut Vec<Tableau>,
) {
    if columns.len() == k {
        out.push(Tableau {
            height,
            columns: columns.clone(),
        });
        return;
    }
    let mut col = Vec::with_capacity(height);
    next_column(height, k, remaining, columns, &mut col, out);
}

// Chooses the next column entry by entry; each entry must be available, exceed
// the one above, and not undercut the entry to its left.
fn next_column(
    height: usize,
    k: usize,
    remaining: &mut [usize],
    columns: &mut Vec<Vec<usize>>,
    col: &mut Vec<usize>,
    out: &mut Vec<Tableau>,
) {
    let row = col.len();
    if row == height {
        columns.push(col.clone());
        fill(height, k, remaining, columns, out);
        columns.pop();
        return;
    }
    let n = remaining.len();
    let above = col.last().map_or(1, |&e| e + 1);
    let left = columns.last().map_or(1, |c| c[row]);
    let start = above.max(left);
    // leave room for the rows below
    let stop = (n + 1).saturating_sub(height - row - 1);
    for label in start..stop.max(start) {
        if remaining[label - 1] == 0 {
            continue;
        }
        remaining[label - 1] -= 1;
        col.push(label);
        next_column(height, k, remaining, columns, col, out);
        col.pop();
        remaining[label - 1] += 1;
    }
}

/// Symbolic `rows × cols` matrix of variables tagged `tag`.
pub fn generic_matrix(tag: u8, rows: usize, cols: usize) -> PolyMatrix {
    (0..rows)
        .map(|i| (0..cols).map(|j| Poly::var(Var::new(tag, i, j + 1))).collect())
        .collect()
}

/// Tableau function on the generic `(d+1) × n` coordinate matrix `x_{row,col}`
/// (rows from 0, columns from 1).
pub fn evaluate_tableau(t: &Tableau, n: usize) -> Result<Poly> {
    evaluate_on(t, &generic_matrix(0, t.height, n))
}

/// Tableau function on an explicit matrix: the product over columns of the
/// maximal minor on the selected matrix columns.
pub fn evaluate_on(t: &Tableau, matrix: &[Vec<Poly>]) -> Result<Poly> {
    if matrix.len() != t.height {
        return Err(Error::InvalidTableau(format!(
            "matrix has {} rows, tableau height is {}",
            matrix.len(),
            t.height
        )));
    }
    let width = matrix.first().map_or(0, Vec::len);
    if t.max_entry() > width {
        return Err(Error::InvalidTableau(format!(
            "entry {} exceeds matrix width {width}",
            t.max_entry()
        )));
    }
    let mut out = Poly::one();
    for col in &t.columns {
        let minor: PolyMatrix = matrix
            .iter()
            .map(|row| col.iter().map(|&j| row[j - 1].clone()).collect())
            .collect();
        let det = determinant(&minor);
        if det.is_zero() {
            return Ok(Poly::zero());
        }
        out = &out * &det;
    }
    Ok(out)
}
