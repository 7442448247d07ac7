//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients, and determinants of polynomial matrices.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A matrix entry variable `x_{row,col}` of one of several coordinate
/// matrices, distinguished by `matrix`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub matrix: u8,
    pub row: u16,
    pub col: u16,
}

impl Var {
    pub fn new(matrix: u8, row: usize, col: usize) -> Self {
        Var {
            matrix,
            row: row as u16,
            col: col as u16,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.matrix {
            0 => "x",
            1 => "y",
            2 => "z",
            _ => "w",
        };
        write!(f, "{name}_{},{}", self.row, self.col)
    }
}

/// A power product, stored as `(variable, exponent)` pairs sorted by variable
/// with no zero exponents. Ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // the first variable (in variable order) whose exponents differ decides
            let mut vars: Vec<Var> = self.0.iter().chain(&other.0).map(|&(v, _)| v).collect();
            vars.sort_unstable();
            vars.dedup();
            vars.into_iter()
                .map(|v| self.exponent(v).cmp(&other.exponent(v)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), BigInt::from(c));
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(v), BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// Largest monomial in the graded-lexicographic order, with its coefficient.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    /// Replaces each variable for which `f` returns a value; other variables
    /// are kept.
    pub fn substitute(&self, f: &impl Fn(Var) -> Option<Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(1).scale(c);
            for &(v, e) in m.factors() {
                let base = f(v).unwrap_or_else(|| Poly::var(v));
                for _ in 0..e {
                    term = &term * &base;
                }
            }
            out = out + term;
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lead_m, lead_c) = divisor.leading_term()?;
        let (lead_m, lead_c) = (lead_m.clone(), lead_c.clone());
        let mut rem = self.clone();
        let mut quotient = Poly::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lead_m)?;
            let (qc, r) = c.div_rem(&lead_c);
            if !r.is_zero() {
                return None;
            }
            rem = rem - divisor.mul_term(&qm, &qc);
            quotient.add_term(qm, qc);
        }
        Some(quotient)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (sign, abs) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if i == 0 {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let is_unit_monomial = m.factors().is_empty();
            if abs.is_one() && !is_unit_monomial {
                write!(f, "{m}")?;
            } else if is_unit_monomial {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Rows of polynomial entries.
pub type PolyMatrix = Vec<Vec<Poly>>;

/// Square-matrix determinant: cofactor expansion up to size 4, fraction-free
/// elimination above.
pub fn determinant(m: &[Vec<Poly>]) -> Poly {
    if m.len() <= 4 {
        cofactor_determinant(m)
    } else {
        bareiss_determinant(m)
    }
}

fn check_square(m: &[Vec<Poly>]) {
    assert!(m.iter().all(|row| row.len() == m.len()), "determinant of a non-square matrix");
}

/// Laplace expansion along the first row, skipping zero entries.
pub fn cofactor_determinant(m: &[Vec<Poly>]) -> Poly {
    check_square(m);
    let cols: Vec<usize> = (0..m.len()).collect();
    expand(m, 0, &cols)
}

fn expand(m: &[Vec<Poly>], row: usize, cols: &[usize]) -> Poly {
    if cols.is_empty() {
        return Poly::one();
    }
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut out = Poly::zero();
    for (i, &col) in cols.iter().enumerate() {
        let entry = &m[row][col];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != col).collect();
        let minor = expand(m, row + 1, &rest);
        if minor.is_zero() {
            continue;
        }
        let term = entry * &minor;
        out = if i % 2 == 0 { out + term } else { out - term };
    }
    out
}

/// Bareiss fraction-free elimination with row pivoting.
pub fn bareiss_determinant(m: &[Vec<Poly>]) -> Poly {
    check_square(m);
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut a = m.to_vec();
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num.div_exact(&prev).expect("Bareiss step divides exactly");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Dimension of the `Q`-span of `polys`.
pub fn rank_over_rationals(polys: &[Poly]) -> usize {
    // echelon rows keyed by their leading monomial, leading coefficient 1
    let mut rows: BTreeMap<Monomial, BTreeMap<Monomial, BigRational>> = BTreeMap::new();
    for p in polys {
        let mut v: BTreeMap<Monomial, BigRational> = p
            .terms()
            .map(|(m, c)| (m.clone(), BigRational::from_integer(c.clone())))
            .collect();
        for (pivot, row) in rows.iter().rev() {
            let Some(coef) = v.get(pivot).cloned() else { continue };
            for (m, c) in row {
                let entry = v.entry(m.clone()).or_insert_with(BigRational::zero);
                *entry -= &coef * c;
                if entry.is_zero() {
                    v.remove(m);
                }
            }
        }
        if let Some((lead, lead_c)) = v.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let normalized = v.into_iter().map(|(m, c)| (m, c / &lead_c)).collect();
            rows.insert(lead, normalized);
        }
    }
    rows.len()
}
