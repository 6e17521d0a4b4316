//! Exact linear algebra over the rationals and over `Q[t]`.
//!
//! No floating point anywhere: matrices carry `BigRational` entries, integer
//! ranks go through fraction-free (Bareiss) elimination, and the conjecture
//! probe needs ranks of small matrices with polynomial entries, computed over
//! the fraction field exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    BigRational::from(BigInt::from(num))
}

/// Renders a rational as `p/q`, or just `p` when the denominator is one.
pub fn rat_to_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn rat_from_string(s: &str) -> Result<Rat> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad rational: {s}")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator: {s}")));
            }
            Ok(BigRational::new(parse_int(p)?, den))
        }
    }
}

/// A dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl std::fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| rat_to_string(&self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = RationalMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(Error::ShapeMismatch);
        }
        let (r, c) = (rows.len(), rows[0].len());
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch);
        }
        let mut out = RationalMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch);
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rat) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Horizontal concatenation of column blocks.
    pub fn hcat(blocks: &[&RationalMatrix]) -> Result<RationalMatrix> {
        let rows = blocks.first().ok_or(Error::ShapeMismatch)?.rows;
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::ShapeMismatch);
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = RationalMatrix::zero(rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out[(i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.cols;
        }
        Ok(out)
    }

    /// The submatrix of the first `cols` columns.
    pub fn left_columns(&self, cols: usize) -> RationalMatrix {
        RationalMatrix::from_fn(self.rows, cols, |i, j| self[(i, j)].clone())
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(piv) = (rank..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let tmp = m[(piv, j)].clone();
                m[(piv, j)] = m[(rank, j)].clone();
                m[(rank, j)] = tmp;
            }
            let inv = m[(rank, col)].recip();
            for j in col..m.cols {
                let v = &m[(rank, j)] * &inv;
                m[(rank, j)] = v;
            }
            for i in 0..m.rows {
                if i != rank && !m[(i, col)].is_zero() {
                    let factor = m[(i, col)].clone();
                    for j in col..m.cols {
                        let v = &m[(i, j)] - &factor * &m[(rank, j)];
                        m[(i, j)] = v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn determinant(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&i| !m[(i, col)].is_zero()) else {
                return Ok(Rat::zero());
            };
            if piv != col {
                for j in 0..n {
                    let tmp = m[(piv, j)].clone();
                    m[(piv, j)] = m[(col, j)].clone();
                    m[(col, j)] = tmp;
                }
                det = -det;
            }
            det *= m[(col, col)].clone();
            let inv = m[(col, col)].recip();
            for i in col + 1..n {
                if m[(i, col)].is_zero() {
                    continue;
                }
                let factor = &m[(i, col)] * &inv;
                for j in col..n {
                    let v = &m[(i, j)] - &factor * &m[(col, j)];
                    m[(i, j)] = v;
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<RationalMatrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch);
        }
        let n = self.rows;
        let mut m = RationalMatrix::hcat(&[self, &RationalMatrix::identity(n)])?;
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&i| !m[(i, col)].is_zero()) else {
                return Err(Error::SingularMatrix);
            };
            for j in 0..2 * n {
                let tmp = m[(piv, j)].clone();
                m[(piv, j)] = m[(rank, j)].clone();
                m[(rank, j)] = tmp;
            }
            let inv = m[(rank, col)].recip();
            for j in 0..2 * n {
                let v = &m[(rank, j)] * &inv;
                m[(rank, j)] = v;
            }
            for i in 0..n {
                if i != rank && !m[(i, col)].is_zero() {
                    let factor = m[(i, col)].clone();
                    for j in 0..2 * n {
                        let v = &m[(i, j)] - &factor * &m[(rank, j)];
                        m[(i, j)] = v;
                    }
                }
            }
            rank += 1;
        }
        Ok(RationalMatrix::from_fn(n, n, |i, j| m[(i, j + n)].clone()))
    }

    /// Solves `A x = b` exactly; returns `None` when inconsistent. `b` is one column.
    /// The solution returned is the one with free variables set to zero.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut m = RationalMatrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            m[(i, self.cols)] = b[i].clone();
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            for j in 0..=self.cols {
                let tmp = m[(piv, j)].clone();
                m[(piv, j)] = m[(rank, j)].clone();
                m[(rank, j)] = tmp;
            }
            let inv = m[(rank, col)].recip();
            for j in col..=self.cols {
                let v = &m[(rank, j)] * &inv;
                m[(rank, j)] = v;
            }
            for i in 0..self.rows {
                if i != rank && !m[(i, col)].is_zero() {
                    let factor = m[(i, col)].clone();
                    for j in col..=self.cols {
                        let v = &m[(i, j)] - &factor * &m[(rank, j)];
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push((rank, col));
            rank += 1;
        }
        // inconsistent iff a zero row has nonzero rhs
        for i in rank..self.rows {
            if !m[(i, self.cols)].is_zero() {
                return None;
            }
        }
        let mut x = vec![Rat::zero(); self.cols];
        for &(r, c) in &pivots {
            x[c] = m[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| rat_to_string(&self[(i, j)])).collect())
            .collect()
    }

    pub fn from_string_rows(rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| rat_from_string(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(de)?;
        RationalMatrix::from_string_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let r = rows.len();
    let c = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..c {
        let Some(piv) = (rank..r).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        for i in rank + 1..r {
            for j in col + 1..c {
                let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                // Bareiss: exact division by the previous pivot
                m[i][j] = num / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == r {
            break;
        }
    }
    rank
}

/// A polynomial in one variable over the rationals, dense coefficients,
/// index = degree, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalPoly {
    pub coeffs: Vec<Rat>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = RationalPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        let mut p = RationalPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &RationalPoly) -> RationalPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for k in 0..len {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        let mut p = RationalPoly { coeffs };
        p.trim();
        p
    }

    pub fn neg(&self) -> RationalPoly {
        RationalPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &RationalPoly) -> RationalPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalPoly) -> RationalPoly {
        if self.is_zero() || other.is_zero() {
            return RationalPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = a * b;
                coeffs[i + j] += prod;
            }
        }
        let mut p = RationalPoly { coeffs };
        p.trim();
        p
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact division, returning `None` when there is a remainder.
    pub fn exact_div(&self, divisor: &RationalPoly) -> Option<RationalPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(RationalPoly::zero());
        }
        let dd = divisor.degree().unwrap();
        let nd = self.degree().unwrap();
        if nd < dd {
            return None;
        }
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.clone();
        let mut q = vec![Rat::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem.coeff(dd + k);
            if c.is_zero() {
                continue;
            }
            let f = &c / &lead;
            q[k] = f.clone();
            for (j, dcoef) in divisor.coeffs.iter().enumerate() {
                let v = rem.coeff(j + k) - &f * dcoef;
                if rem.coeffs.len() <= j + k {
                    rem.coeffs.resize(j + k + 1, Rat::zero());
                }
                rem.coeffs[j + k] = v;
            }
        }
        rem.trim();
        if rem.is_zero() {
            let mut qq = RationalPoly { coeffs: q };
            qq.trim();
            Some(qq)
        } else {
            None
        }
    }

    /// Multiplicity of the root `t = 0`.
    pub fn valuation_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// True when the only rational roots can be `t = 0`, i.e. `p = c * t^k`.
    pub fn is_monomial(&self) -> bool {
        match self.valuation_at_zero() {
            None => false,
            Some(v) => v + 1 == self.coeffs.len(),
        }
    }

    pub fn to_display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = rat_to_string(c);
            let term = match k {
                0 => cs,
                1 if c.is_one() => var.to_string(),
                1 => format!("{cs}*{var}"),
                _ if c.is_one() => format!("{var}^{k}"),
                _ => format!("{cs}*{var}^{k}"),
            };
            parts.push(term);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// A matrix with entries in `Q[t]`.
#[derive(Clone, Debug)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<RationalPoly>,
}

impl std::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = RationalPoly;
    fn index(&self, (i, j): (usize, usize)) -> &RationalPoly {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RationalPoly {
        &mut self.data[i * self.cols + j]
    }
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            data: vec![RationalPoly::zero(); rows * cols],
        }
    }

    pub fn from_constant(m: &RationalMatrix) -> Self {
        let mut out = PolyMatrix::zero(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(i, j)] = RationalPoly::constant(m[(i, j)].clone());
            }
        }
        out
    }

    /// `a + t * b` entrywise.
    pub fn linear(a: &RationalMatrix, b: &RationalMatrix) -> Result<Self> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::ShapeMismatch);
        }
        let mut out = PolyMatrix::zero(a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                out[(i, j)] = RationalPoly::constant(a[(i, j)].clone())
                    .add(&RationalPoly::monomial(b[(i, j)].clone(), 1));
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch);
        }
        let mut out = PolyMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = self[(i, k)].mul(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&prod);
                }
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, t: &Rat) -> RationalMatrix {
        RationalMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].eval(t))
    }

    /// Adjugate of a square polynomial matrix via cofactor expansion;
    /// fine for the tiny sizes used here.
    pub fn adjugate(&self) -> Result<PolyMatrix> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch);
        }
        let n = self.rows;
        let mut adj = PolyMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor_matrix(i, j);
                let mut cof = minor.determinant()?;
                if (i + j) % 2 == 1 {
                    cof = cof.neg();
                }
                // adjugate transposes the cofactor matrix
                adj[(j, i)] = cof;
            }
        }
        Ok(adj)
    }

    fn minor_matrix(&self, drop_row: usize, drop_col: usize) -> PolyMatrix {
        let mut out = PolyMatrix::zero(self.rows - 1, self.cols - 1);
        let mut ii = 0;
        for i in 0..self.rows {
            if i == drop_row {
                continue;
            }
            let mut jj = 0;
            for j in 0..self.cols {
                if j == drop_col {
                    continue;
                }
                out[(ii, jj)] = self[(i, j)].clone();
                jj += 1;
            }
            ii += 1;
        }
        out
    }

    pub fn determinant(&self) -> Result<RationalPoly> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch);
        }
        match self.rows {
            0 => Ok(RationalPoly::constant(Rat::one())),
            1 => Ok(self[(0, 0)].clone()),
            _ => {
                let mut det = RationalPoly::zero();
                for j in 0..self.cols {
                    if self[(0, j)].is_zero() {
                        continue;
                    }
                    let term = self[(0, j)].mul(&self.minor_matrix(0, j).determinant()?);
                    det = if j % 2 == 0 { det.add(&term) } else { det.sub(&term) };
                }
                Ok(det)
            }
        }
    }

    /// Rank over the fraction field `Q(t)`: the largest size of a nonzero minor.
    /// Brute force over minors; matrices here never exceed a handful of rows.
    pub fn generic_rank(&self) -> Result<usize> {
        let max = self.rows.min(self.cols);
        for size in (1..=max).rev() {
            let row_sets = combinations(self.rows, size);
            let col_sets = combinations(self.cols, size);
            for rs in &row_sets {
                for cs in &col_sets {
                    let mut sub = PolyMatrix::zero(size, size);
                    for (a, &i) in rs.iter().enumerate() {
                        for (b, &j) in cs.iter().enumerate() {
                            sub[(a, b)] = self[(i, j)].clone();
                        }
                    }
                    if !sub.determinant()?.is_zero() {
                        return Ok(size);
                    }
                }
            }
        }
        Ok(0)
    }
}

impl PolyMatrix {
    /// Limit at `t = 0` of the flag of column spans, for a square polynomial
    /// matrix with nonvanishing determinant: repeatedly replaces the
    /// rightmost column of a combination vanishing at zero by the combination
    /// divided by `t`, a flag-preserving column operation away from zero.
    /// Returns an invertible matrix whose leading column spans are the limit
    /// flag steps.
    pub fn saturated_limit_flag(&self) -> Result<RationalMatrix> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch);
        }
        let n = self.rows;
        if self.determinant()?.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let mut cols: Vec<Vec<RationalPoly>> = (0..n)
            .map(|j| (0..n).map(|i| self[(i, j)].clone()).collect())
            .collect();
        loop {
            let at_zero = RationalMatrix::from_fn(n, n, |i, j| cols[j][i].coeff(0));
            if at_zero.is_invertible() {
                return Ok(at_zero);
            }
            // a kernel combination of the evaluated columns
            let mut aug = RationalMatrix::zero(n, n);
            for j in 0..n {
                for i in 0..n {
                    aug[(i, j)] = at_zero[(i, j)].clone();
                }
            }
            let lambda = kernel_vector(&aug).expect("singular matrix has a kernel vector");
            let r = (0..n)
                .rev()
                .find(|&k| !lambda[k].is_zero())
                .expect("kernel vector is nonzero");
            let mut combo = vec![RationalPoly::zero(); n];
            for (k, lam) in lambda.iter().enumerate() {
                if lam.is_zero() {
                    continue;
                }
                for (i, entry) in combo.iter_mut().enumerate() {
                    *entry = entry.add(&cols[k][i].mul(&RationalPoly::constant(lam.clone())));
                }
            }
            let t = RationalPoly::monomial(Rat::one(), 1);
            for entry in combo.iter_mut() {
                *entry = entry
                    .exact_div(&t)
                    .expect("combination vanishing at zero is divisible by t");
            }
            cols[r] = combo;
        }
    }
}

/// One nonzero kernel vector of a square singular rational matrix.
fn kernel_vector(m: &RationalMatrix) -> Option<Vec<Rat>> {
    let n = m.rows();
    let mut work = m.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..n).find(|&i| !work[(i, col)].is_zero()) else {
            continue;
        };
        for j in 0..n {
            let tmp = work[(piv, j)].clone();
            work[(piv, j)] = work[(rank, j)].clone();
            work[(rank, j)] = tmp;
        }
        let inv = work[(rank, col)].recip();
        for j in col..n {
            let v = &work[(rank, j)] * &inv;
            work[(rank, j)] = v;
        }
        for i in 0..n {
            if i != rank && !work[(i, col)].is_zero() {
                let factor = work[(i, col)].clone();
                for j in col..n {
                    let v = &work[(i, j)] - &factor * &work[(rank, j)];
                    work[(i, j)] = v;
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    if rank == n {
        return None;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![Rat::zero(); n];
    v[free] = Rat::one();
    for &(r, c) in &pivots {
        v[c] = -work[(r, free)].clone();
    }
    Some(v)
}

/// All `k`-subsets of `{0, .., n-1}` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_inverse() {
        let m = RationalMatrix::from_i64_rows(&[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(m.rank(), 2);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RationalMatrix::identity(2));
        let sing = RationalMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(sing.rank(), 1);
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn integer_rank_bareiss() {
        assert_eq!(integer_rank(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]), 2);
        assert_eq!(integer_rank(&[vec![2, 0], vec![0, 3]]), 2);
        assert_eq!(integer_rank(&[vec![0, 0], vec![0, 0]]), 0);
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = RationalMatrix::from_i64_rows(&[vec![1, 1], vec![2, 2]]).unwrap();
        assert!(m.solve(&[rat_int(1), rat_int(2)]).is_some());
        assert!(m.solve(&[rat_int(1), rat_int(3)]).is_none());
    }

    #[test]
    fn poly_arithmetic() {
        let p = RationalPoly::monomial(rat_int(1), 1).add(&RationalPoly::constant(rat_int(2)));
        let q = p.mul(&p);
        assert_eq!(q.coeff(0), rat_int(4));
        assert_eq!(q.coeff(1), rat_int(4));
        assert_eq!(q.coeff(2), rat_int(1));
        assert_eq!(q.exact_div(&p).unwrap(), p);
        assert!(q.exact_div(&RationalPoly::monomial(rat_int(1), 1)).is_none());
    }

    #[test]
    fn poly_matrix_generic_rank() {
        // [[1, t], [t, t^2]] has generic rank 1
        let mut m = PolyMatrix::zero(2, 2);
        m[(0, 0)] = RationalPoly::constant(rat_int(1));
        m[(0, 1)] = RationalPoly::monomial(rat_int(1), 1);
        m[(1, 0)] = RationalPoly::monomial(rat_int(1), 1);
        m[(1, 1)] = RationalPoly::monomial(rat_int(1), 2);
        assert_eq!(m.generic_rank().unwrap(), 1);
        // [[1, t], [t, 1]] has generic rank 2
        m[(1, 1)] = RationalPoly::constant(rat_int(1));
        assert_eq!(m.generic_rank().unwrap(), 2);
    }

    #[test]
    fn saturated_limit_examples() {
        // columns (e1 + t e3, e2, e1 + 2t e3): the limit flag is standard
        let mut m = PolyMatrix::zero(3, 3);
        m[(0, 0)] = RationalPoly::constant(rat_int(1));
        m[(2, 0)] = RationalPoly::monomial(rat_int(1), 1);
        m[(1, 1)] = RationalPoly::constant(rat_int(1));
        m[(0, 2)] = RationalPoly::constant(rat_int(1));
        m[(2, 2)] = RationalPoly::monomial(rat_int(2), 1);
        let limit = m.saturated_limit_flag().unwrap();
        assert!(limit.is_invertible());
        // step 1 is e1, step 2 is span(e1, e2)
        assert!(limit[(1, 0)].is_zero() && limit[(2, 0)].is_zero());
        assert!(limit[(2, 1)].is_zero());
        // an invertible constant matrix is its own limit
        let id = PolyMatrix::from_constant(&RationalMatrix::identity(2));
        assert_eq!(id.saturated_limit_flag().unwrap(), RationalMatrix::identity(2));
        // vanishing determinant is rejected
        let mut sing = PolyMatrix::zero(2, 2);
        sing[(0, 0)] = RationalPoly::constant(rat_int(1));
        sing[(0, 1)] = RationalPoly::constant(rat_int(1));
        assert!(sing.saturated_limit_flag().is_err());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rat_to_string(&rat(3, 1)), "3");
        assert_eq!(rat_to_string(&rat(-3, 6)), "-1/2");
        assert_eq!(rat_from_string("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(rat_from_string("7").unwrap(), rat_int(7));
        assert!(rat_from_string("1/0").is_err());
    }
}
