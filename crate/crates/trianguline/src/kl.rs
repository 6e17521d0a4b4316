//! Kazhdan-Lusztig polynomials for products of symmetric groups.
//!
//! Two independent algorithms are kept side by side:
//!
//! * [`KlTable::kl_recursive`] runs the defining recursion through the
//!   canonical-basis multiplication rule (descent choice, mu-correction sum);
//! * [`KlTable::kl_via_r`] computes R-polynomials by their own recursion and
//!   then inverts the duality identity degree by degree, which also yields a
//!   built-in consistency check on the high-degree half of the identity.
//!
//! Both run on any `S_n^sigma` directly; the canonical product-level value is
//! the factor-wise product of single-factor values.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::weyl::{self, EmbeddingShape, WeylElement};
use crate::{Error, Result};

/// An integer-coefficient polynomial in `q`; index = degree, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KlPolynomial {
    pub coeffs: Vec<i64>,
}

impl std::fmt::Debug for KlPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl KlPolynomial {
    pub fn zero() -> Self {
        KlPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        KlPolynomial { coeffs: vec![1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        KlPolynomial { coeffs }
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

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &KlPolynomial) -> KlPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        KlPolynomial::from_coeffs((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &KlPolynomial) -> KlPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        KlPolynomial::from_coeffs((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &KlPolynomial) -> KlPolynomial {
        if self.is_zero() || other.is_zero() {
            return KlPolynomial::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        KlPolynomial::from_coeffs(coeffs)
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> KlPolynomial {
        if self.is_zero() {
            return KlPolynomial::zero();
        }
        let mut coeffs = vec![0i64; k];
        coeffs.extend_from_slice(&self.coeffs);
        KlPolynomial::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: i64) -> KlPolynomial {
        KlPolynomial::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Human form like `1+q` or `0`.
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "q".into(),
                (1, c) => format!("{c}q"),
                (k, 1) => format!("q^{k}"),
                (k, c) => format!("{c}q^{k}"),
            };
            parts.push(term);
        }
        parts.join("+")
    }
}

/// Memoized Kazhdan-Lusztig data for one group `S_n^sigma`.
///
/// The element list, index and Bruhat table are computed once; the three memo
/// maps are the only mutable shared state. Inserts are idempotent, so
/// concurrent recomputation is harmless.
pub struct KlTable {
    shape: EmbeddingShape,
    elements: Vec<WeylElement>,
    index: HashMap<WeylElement, u32>,
    lengths: Vec<usize>,
    leq: Vec<Vec<bool>>,
    p_memo: Mutex<HashMap<(u32, u32), KlPolynomial>>,
    r_memo: Mutex<HashMap<(u32, u32), KlPolynomial>>,
    p_via_r_memo: Mutex<HashMap<(u32, u32), KlPolynomial>>,
}

impl KlTable {
    pub fn new(shape: EmbeddingShape) -> Self {
        let elements = WeylElement::all(shape);
        let index: HashMap<WeylElement, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        let lengths: Vec<usize> = elements.iter().map(weyl::length).collect();
        let leq: Vec<Vec<bool>> = elements
            .iter()
            .map(|x| {
                elements
                    .iter()
                    .map(|y| weyl::bruhat_leq(x, y).expect("same shape"))
                    .collect()
            })
            .collect();
        KlTable {
            shape,
            elements,
            index,
            lengths,
            leq,
            p_memo: Mutex::new(HashMap::new()),
            r_memo: Mutex::new(HashMap::new()),
            p_via_r_memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn shape(&self) -> EmbeddingShape {
        self.shape
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    fn idx(&self, x: &WeylElement, y: &WeylElement) -> Result<(u32, u32)> {
        match (self.index.get(x), self.index.get(y)) {
            (Some(&a), Some(&b)) => Ok((a, b)),
            _ => Err(Error::ShapeMismatch),
        }
    }

    /// First right descent of `y` as a simple reflection of the product group.
    fn right_descent(&self, y: &WeylElement) -> Option<WeylElement> {
        for (tau, p) in y.parts().iter().enumerate() {
            for i in 0..self.shape.n - 1 {
                if p.has_right_descent(i) {
                    return Some(WeylElement::simple(self.shape, tau, i));
                }
            }
        }
        None
    }

    /// Defining recursion for `P_{x,y}`.
    pub fn kl_recursive(&self, x: &WeylElement, y: &WeylElement) -> Result<KlPolynomial> {
        let (xi, yi) = self.idx(x, y)?;
        Ok(self.p_rec(xi, yi))
    }

    fn p_rec(&self, xi: u32, yi: u32) -> KlPolynomial {
        if !self.leq[xi as usize][yi as usize] {
            return KlPolynomial::zero();
        }
        if xi == yi {
            return KlPolynomial::one();
        }
        if let Some(p) = self.p_memo.lock().unwrap().get(&(xi, yi)) {
            return p.clone();
        }
        let x = &self.elements[xi as usize];
        let y = &self.elements[yi as usize];
        let s = self.right_descent(y).expect("y != e has a descent");
        let ysi = self.index[&y.compose(&s).expect("same shape")];
        let xs = x.compose(&s).expect("same shape");
        let xsi = self.index[&xs];
        let c: usize = if self.lengths[xsi as usize] < self.lengths[xi as usize] {
            1
        } else {
            0
        };
        // q^(1-c) P_{xs, ys} + q^c P_{x, ys}
        let mut p = self
            .p_rec(xsi, ysi)
            .shift(1 - c)
            .add(&self.p_rec(xi, ysi).shift(c));
        // mu-correction over z with zs < z, x <= z <= ys
        let ly = self.lengths[yi as usize];
        for zi in 0..self.elements.len() as u32 {
            if !self.leq[xi as usize][zi as usize] || !self.leq[zi as usize][ysi as usize] {
                continue;
            }
            let z = &self.elements[zi as usize];
            let zsi = self.index[&z.compose(&s).expect("same shape")];
            if self.lengths[zsi as usize] >= self.lengths[zi as usize] {
                continue;
            }
            let lz = self.lengths[zi as usize];
            let gap = self.lengths[ysi as usize] - lz;
            if gap % 2 == 0 {
                continue; // mu concerns odd gaps only
            }
            let mu = self.p_rec(zi, ysi).coeff((gap - 1) / 2);
            if mu == 0 {
                continue;
            }
            debug_assert_eq!((ly - lz) % 2, 0);
            p = p.sub(&self.p_rec(xi, zi).scale(mu).shift((ly - lz) / 2));
        }
        self.p_memo.lock().unwrap().insert((xi, yi), p.clone());
        p
    }

    /// R-polynomial recursion.
    pub fn r_polynomial(&self, x: &WeylElement, y: &WeylElement) -> Result<KlPolynomial> {
        let (xi, yi) = self.idx(x, y)?;
        Ok(self.r_rec(xi, yi))
    }

    fn r_rec(&self, xi: u32, yi: u32) -> KlPolynomial {
        if xi == yi {
            return KlPolynomial::one();
        }
        if !self.leq[xi as usize][yi as usize] {
            return KlPolynomial::zero();
        }
        if let Some(r) = self.r_memo.lock().unwrap().get(&(xi, yi)) {
            return r.clone();
        }
        let x = &self.elements[xi as usize];
        let y = &self.elements[yi as usize];
        let s = self.right_descent(y).expect("y != e has a descent");
        let ysi = self.index[&y.compose(&s).expect("same shape")];
        let xsi = self.index[&x.compose(&s).expect("same shape")];
        let r = if self.lengths[xsi as usize] < self.lengths[xi as usize] {
            self.r_rec(xsi, ysi)
        } else {
            // (q - 1) R_{x, ys} + q R_{xs, ys}
            let qm1 = KlPolynomial::from_coeffs(vec![-1, 1]);
            qm1.mul(&self.r_rec(xi, ysi)).add(&self.r_rec(xsi, ysi).shift(1))
        };
        self.r_memo.lock().unwrap().insert((xi, yi), r.clone());
        r
    }

    /// Independent route: inverts `q^(l(y)-l(x)) P_{x,y}(1/q) - P_{x,y}(q) =
    /// sum_{x < z <= y} R_{x,z} P_{z,y}` downward in `x`, using the degree
    /// bound to split the two halves, and checks the high half exactly.
    pub fn kl_via_r(&self, x: &WeylElement, y: &WeylElement) -> Result<KlPolynomial> {
        let (xi, yi) = self.idx(x, y)?;
        self.p_via_r_rec(xi, yi)
    }

    fn p_via_r_rec(&self, xi: u32, yi: u32) -> Result<KlPolynomial> {
        if !self.leq[xi as usize][yi as usize] {
            return Ok(KlPolynomial::zero());
        }
        if xi == yi {
            return Ok(KlPolynomial::one());
        }
        if let Some(p) = self.p_via_r_memo.lock().unwrap().get(&(xi, yi)) {
            return Ok(p.clone());
        }
        let mut f = KlPolynomial::zero();
        for zi in 0..self.elements.len() as u32 {
            if zi == xi
                || !self.leq[xi as usize][zi as usize]
                || !self.leq[zi as usize][yi as usize]
            {
                continue;
            }
            f = f.add(&self.r_rec(xi, zi).mul(&self.p_via_r_rec(zi, yi)?));
        }
        let d = self.lengths[yi as usize] - self.lengths[xi as usize];
        // low half determines P, high half must match its mirror image
        let half = (d - 1) / 2;
        let p = KlPolynomial::from_coeffs((0..=half).map(|k| -f.coeff(k)).collect());
        for m in 0..=f.degree().unwrap_or(0).max(d) {
            let expected =
                if m <= half { -p.coeff(m) } else { 0 } + if m <= d { p.coeff(d - m) } else { 0 };
            if f.coeff(m) != expected {
                let x = &self.elements[xi as usize];
                let y = &self.elements[yi as usize];
                return Err(Error::InvariantViolation(format!(
                    "duality identity fails at degree {m} for P_{{{x},{y}}}"
                )));
            }
        }
        self.p_via_r_memo.lock().unwrap().insert((xi, yi), p.clone());
        Ok(p)
    }
}

/// Caches one [`KlTable`] per single-factor size `n`, for product-level values.
pub struct KlContext {
    tables: Mutex<HashMap<usize, std::sync::Arc<KlTable>>>,
}

impl Default for KlContext {
    fn default() -> Self {
        Self::new()
    }
}

impl KlContext {
    pub fn new() -> Self {
        KlContext {
            tables: Mutex::new(HashMap::new()),
        }
    }

    pub fn table(&self, n: usize) -> std::sync::Arc<KlTable> {
        let mut guard = self.tables.lock().unwrap();
        guard
            .entry(n)
            .or_insert_with(|| {
                std::sync::Arc::new(KlTable::new(EmbeddingShape::new(n, 1).unwrap()))
            })
            .clone()
    }

    /// The canonical product-level polynomial: the product over embeddings of
    /// single-factor values.
    pub fn kl_polynomial(&self, x: &WeylElement, y: &WeylElement) -> Result<KlPolynomial> {
        if x.shape() != y.shape() {
            return Err(Error::ShapeMismatch);
        }
        let table = self.table(x.shape().n);
        let single = EmbeddingShape::new(x.shape().n, 1).unwrap();
        let mut acc = KlPolynomial::one();
        for (a, b) in x.parts().iter().zip(y.parts()) {
            let xa = WeylElement::from_parts(vec![a.clone()])?;
            let yb = WeylElement::from_parts(vec![b.clone()])?;
            debug_assert_eq!(xa.shape(), single);
            let factor = table.kl_recursive(&xa, &yb)?;
            if factor.is_zero() {
                return Ok(KlPolynomial::zero());
            }
            acc = acc.mul(&factor);
        }
        Ok(acc)
    }

    /// `P_{w0 w, w0 w'}(1)`: the multiplicity of the simple class indexed by
    /// `wp` inside the standard class indexed by `w`. Nonzero iff `wp <= w`.
    pub fn verma_multiplicity(&self, w: &WeylElement, wp: &WeylElement) -> Result<i64> {
        if w.shape() != wp.shape() {
            return Err(Error::ShapeMismatch);
        }
        let w0 = weyl::longest_element(w.shape());
        let x = w0.compose(w)?;
        let y = w0.compose(wp)?;
        Ok(self.kl_polynomial(&x, &y)?.eval_at_one())
    }

    /// Persists all single-factor tables computed so far.
    pub fn save_cache(&self, path: &std::path::Path) -> Result<()> {
        let mut files = Vec::new();
        let guard = self.tables.lock().unwrap();
        for (n, table) in guard.iter() {
            let memo = table.p_memo.lock().unwrap();
            let mut entries = std::collections::BTreeMap::new();
            for (&(xi, yi), p) in memo.iter() {
                let x = &table.elements[xi as usize];
                let y = &table.elements[yi as usize];
                entries.insert(
                    format!("{}:{}:{}", n, x.serialized(), y.serialized()),
                    p.coeffs.clone(),
                );
            }
            files.push(CacheFile {
                version: CACHE_VERSION,
                n: *n,
                entries,
            });
        }
        files.sort_by_key(|f| f.n);
        let json = serde_json::to_string_pretty(&files)?;
        std::fs::write(path, json)?;
        Ok(())
    }

    /// Loads previously persisted tables; unknown versions are rejected.
    pub fn load_cache(&self, path: &std::path::Path) -> Result<usize> {
        let text = std::fs::read_to_string(path)?;
        let files: Vec<CacheFile> = serde_json::from_str(&text)?;
        let mut loaded = 0;
        for file in files {
            if file.version != CACHE_VERSION {
                return Err(Error::Parse(format!(
                    "unsupported cache version {}",
                    file.version
                )));
            }
            let table = self.table(file.n);
            let shape = EmbeddingShape::new(file.n, 1).unwrap();
            let mut memo = table.p_memo.lock().unwrap();
            for (key, coeffs) in file.entries {
                let mut it = key.splitn(3, ':');
                let (Some(ns), Some(xs), Some(ys)) = (it.next(), it.next(), it.next()) else {
                    return Err(Error::Parse(format!("bad cache key {key}")));
                };
                if ns.parse::<usize>().ok() != Some(file.n) {
                    return Err(Error::Parse(format!("cache key {key} disagrees with n")));
                }
                let x = WeylElement::parse(xs, shape)?;
                let y = WeylElement::parse(ys, shape)?;
                let (xi, yi) = table.idx(&x, &y)?;
                memo.insert((xi, yi), KlPolynomial::from_coeffs(coeffs));
                loaded += 1;
            }
        }
        Ok(loaded)
    }
}

const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    n: usize,
    entries: std::collections::BTreeMap<String, Vec<i64>>,
}
