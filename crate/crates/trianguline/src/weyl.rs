//! Weyl groups of products of general linear groups.
//!
//! The group is `S_n^sigma`, one symmetric-group factor per field embedding.
//! Length is additive over factors, the Bruhat order is componentwise (the
//! Coxeter system is the direct product), and the dot action is the
//! rho-shifted position action with the integral convention
//! `rho = (n-1, n-2, .., 0)` per embedding.

use serde::{Deserialize, Serialize};

use crate::perm::Perm;
use crate::{Error, Result};

/// Matrix size `n` per factor and the number of embeddings `sigma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EmbeddingShape {
    pub n: usize,
    pub sigma: usize,
}

impl EmbeddingShape {
    pub fn new(n: usize, sigma: usize) -> Result<Self> {
        if n < 1 || sigma < 1 {
            return Err(Error::Precondition(format!(
                "shape requires n >= 1 and sigma >= 1, got n = {n}, sigma = {sigma}"
            )));
        }
        Ok(EmbeddingShape { n, sigma })
    }

    /// `dim G = sigma * n^2` for `G` a product of `GL_n` restrictions.
    pub fn dim_g(&self) -> usize {
        self.sigma * self.n * self.n
    }

    /// `dim G/B = sigma * n(n-1)/2`.
    pub fn dim_gb(&self) -> usize {
        self.sigma * self.n * (self.n - 1) / 2
    }

    /// `dim T = sigma * n`.
    pub fn dim_t(&self) -> usize {
        self.sigma * self.n
    }
}

/// An element of `S_n^sigma`: one permutation per embedding.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeylElement {
    parts: Vec<Perm>,
}

impl std::fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.serialized())
    }
}

impl std::fmt::Display for WeylElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.serialized())
    }
}

impl WeylElement {
    pub fn from_parts(parts: Vec<Perm>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Precondition("a Weyl element needs at least one factor".into()));
        }
        let n = parts[0].n();
        if parts.iter().any(|p| p.n() != n) {
            return Err(Error::ShapeMismatch);
        }
        Ok(WeylElement { parts })
    }

    pub fn identity(shape: EmbeddingShape) -> Self {
        WeylElement {
            parts: vec![Perm::identity(shape.n); shape.sigma],
        }
    }

    pub fn shape(&self) -> EmbeddingShape {
        EmbeddingShape {
            n: self.parts[0].n(),
            sigma: self.parts.len(),
        }
    }

    pub fn parts(&self) -> &[Perm] {
        &self.parts
    }

    pub fn part(&self, tau: usize) -> &Perm {
        &self.parts[tau]
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(Perm::is_identity)
    }

    /// Factor-wise group product.
    pub fn compose(&self, other: &WeylElement) -> Result<WeylElement> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch);
        }
        Ok(WeylElement {
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.compose(b))
                .collect(),
        })
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement {
            parts: self.parts.iter().map(Perm::inverse).collect(),
        }
    }

    /// Simple reflection in factor `tau` at position `i` (0-based).
    pub fn simple(shape: EmbeddingShape, tau: usize, i: usize) -> Self {
        let mut parts = vec![Perm::identity(shape.n); shape.sigma];
        parts[tau] = Perm::simple(shape.n, i);
        WeylElement { parts }
    }

    /// All simple reflections of the product group, factor-major order.
    pub fn simples(shape: EmbeddingShape) -> Vec<WeylElement> {
        let mut out = Vec::new();
        for tau in 0..shape.sigma {
            for i in 0..shape.n - 1 {
                out.push(WeylElement::simple(shape, tau, i));
            }
        }
        out
    }

    /// Serialized form: one-line parts joined by '/'.
    pub fn serialized(&self) -> String {
        self.parts
            .iter()
            .map(Perm::one_line_string)
            .collect::<Vec<_>>()
            .join("/")
    }

    /// Parses the '/'-joined one-line form against a shape.
    pub fn parse(s: &str, shape: EmbeddingShape) -> Result<Self> {
        let toks: Vec<&str> = s.split('/').collect();
        if toks.len() != shape.sigma {
            return Err(Error::ShapeMismatch);
        }
        let parts = toks
            .iter()
            .map(|t| Perm::parse_one_line(t, shape.n))
            .collect::<Result<Vec<_>>>()?;
        WeylElement::from_parts(parts)
    }

    /// Every element of `S_n^sigma`, in lexicographic part order.
    pub fn all(shape: EmbeddingShape) -> Vec<WeylElement> {
        let singles = Perm::all(shape.n);
        let mut out: Vec<WeylElement> = vec![WeylElement::identity(shape)];
        for tau in 0..shape.sigma {
            let mut next = Vec::with_capacity(out.len() * singles.len());
            for w in &out {
                for p in &singles {
                    let mut parts = w.parts.clone();
                    parts[tau] = p.clone();
                    next.push(WeylElement { parts });
                }
            }
            out = next;
        }
        out
    }
}

/// An integral weight: a `sigma x n` matrix of integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntegralWeight {
    pub rows: Vec<Vec<i64>>,
}

impl IntegralWeight {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) || rows[0].is_empty() {
            return Err(Error::ShapeMismatch);
        }
        Ok(IntegralWeight { rows })
    }

    pub fn zero(shape: EmbeddingShape) -> Self {
        IntegralWeight {
            rows: vec![vec![0; shape.n]; shape.sigma],
        }
    }

    pub fn shape(&self) -> EmbeddingShape {
        EmbeddingShape {
            n: self.rows[0].len(),
            sigma: self.rows.len(),
        }
    }

    /// Dominance: weakly decreasing along each row.
    pub fn is_dominant(&self) -> bool {
        self.rows.iter().all(|r| r.windows(2).all(|w| w[0] >= w[1]))
    }

    /// Strictly increasing rows, the normal form of a Hodge-type weight.
    pub fn rows_strictly_increasing(&self) -> bool {
        self.rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]))
    }
}

/// `rho = (n-1, n-2, .., 0)` per embedding. Any integral shift of the half-sum
/// convention leaves `w(lambda + rho) - rho` unchanged.
pub fn rho(shape: EmbeddingShape) -> IntegralWeight {
    IntegralWeight {
        rows: vec![(0..shape.n).rev().map(|k| k as i64).collect(); shape.sigma],
    }
}

/// Coxeter length: total inversion count over the factors.
pub fn length(w: &WeylElement) -> usize {
    w.parts().iter().map(Perm::inversions).sum()
}

/// Componentwise Bruhat order, each factor via the rank-matrix criterion.
pub fn bruhat_leq(x: &WeylElement, y: &WeylElement) -> Result<bool> {
    if x.shape() != y.shape() {
        return Err(Error::ShapeMismatch);
    }
    Ok(x.parts()
        .iter()
        .zip(y.parts())
        .all(|(a, b)| a.bruhat_leq(b)))
}

/// The longest element: each part is `i -> n+1-i`.
pub fn longest_element(shape: EmbeddingShape) -> WeylElement {
    WeylElement {
        parts: vec![Perm::longest(shape.n); shape.sigma],
    }
}

/// Position action without shift: entry `(tau, i)` of the output is `h_{tau, w_tau^{-1}(i)}`.
pub fn apply_to_weights(w: &WeylElement, h: &IntegralWeight) -> Result<IntegralWeight> {
    if w.shape() != h.shape() {
        return Err(Error::ShapeMismatch);
    }
    let rows = w
        .parts()
        .iter()
        .zip(&h.rows)
        .map(|(p, row)| {
            let inv = p.inverse();
            (0..row.len()).map(|i| row[inv.apply(i)]).collect()
        })
        .collect();
    Ok(IntegralWeight { rows })
}

/// Dot action `w . lambda = w(lambda + rho) - rho`.
pub fn dot_action(w: &WeylElement, lam: &IntegralWeight) -> Result<IntegralWeight> {
    if w.shape() != lam.shape() {
        return Err(Error::ShapeMismatch);
    }
    let r = rho(w.shape());
    let shifted = IntegralWeight {
        rows: lam
            .rows
            .iter()
            .zip(&r.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect(),
    };
    let moved = apply_to_weights(w, &shifted)?;
    Ok(IntegralWeight {
        rows: moved
            .rows
            .iter()
            .zip(&r.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect(),
    })
}

/// Canonical test for "product of pairwise distinct simple reflections":
/// the reflection-displacement rank equals the length.
pub fn is_distinct_simple_product(w: &WeylElement) -> bool {
    crate::cartan::d_of(w) == length(w)
}

/// All elements `>= w`, sorted by (length, serialized form).
pub fn upper_interval(w: &WeylElement) -> Vec<WeylElement> {
    let shape = w.shape();
    let mut out: Vec<WeylElement> = Vec::new();
    // componentwise order: the upper set is the product of per-factor upper sets
    let factor_uppers: Vec<Vec<Perm>> = w
        .parts()
        .iter()
        .map(|p| {
            Perm::all(shape.n)
                .into_iter()
                .filter(|q| p.bruhat_leq(q))
                .collect()
        })
        .collect();
    let mut stack: Vec<Vec<Perm>> = vec![Vec::new()];
    for uppers in &factor_uppers {
        let mut next = Vec::with_capacity(stack.len() * uppers.len());
        for prefix in &stack {
            for q in uppers {
                let mut parts = prefix.clone();
                parts.push(q.clone());
                next.push(parts);
            }
        }
        stack = next;
    }
    for parts in stack {
        out.push(WeylElement { parts });
    }
    sort_canonical(&mut out);
    out
}

/// The Bruhat interval `[lo, hi]`, sorted by (length, serialized form).
pub fn interval(lo: &WeylElement, hi: &WeylElement) -> Result<Vec<WeylElement>> {
    if lo.shape() != hi.shape() {
        return Err(Error::ShapeMismatch);
    }
    let mut out: Vec<WeylElement> = upper_interval(lo)
        .into_iter()
        .filter(|z| bruhat_leq(z, hi).unwrap())
        .collect();
    sort_canonical(&mut out);
    Ok(out)
}

/// Sorts by (length, serialized form); the canonical enumeration order.
pub fn sort_canonical(items: &mut [WeylElement]) {
    items.sort_by(|a, b| {
        length(a)
            .cmp(&length(b))
            .then_with(|| a.serialized().cmp(&b.serialized()))
    });
}

/// The diamond configuration over `w`: the unique pair `{w1, w2}` of
/// length-`lg(w)+1` elements above `w` lying under a common `w3` of length
/// `lg(w)+2`, together with the first such witness `w3` in canonical order.
///
/// Uniqueness of the interior pair is re-verified for every admissible
/// witness by exhaustive search.
pub fn diamond(w: &WeylElement) -> Result<(WeylElement, WeylElement, WeylElement)> {
    let shape = w.shape();
    let lw = length(w);
    let top = length(&longest_element(shape));
    if lw + 2 > top {
        return Err(Error::Precondition(format!(
            "diamond needs lg(w) <= lg(w0) - 2, got lg = {lw} with lg(w0) = {top}"
        )));
    }
    let upper = upper_interval(w);
    let witnesses: Vec<&WeylElement> = upper.iter().filter(|z| length(z) == lw + 2).collect();
    let mut result: Option<(WeylElement, WeylElement, WeylElement)> = None;
    for w3 in witnesses {
        let interior: Vec<&WeylElement> = upper
            .iter()
            .filter(|z| length(z) == lw + 1 && bruhat_leq(z, w3).unwrap())
            .collect();
        if interior.len() != 2 {
            return Err(Error::InvariantViolation(format!(
                "length-2 interval [{w}, {w3}] has {} interior elements, expected 2",
                interior.len()
            )));
        }
        if result.is_none() {
            result = Some((interior[0].clone(), interior[1].clone(), w3.clone()));
        }
    }
    result.ok_or_else(|| {
        Error::InvariantViolation(format!("no length-2 witness above {w} despite room"))
    })
}

/// Brute-force oracles kept deliberately independent of the canonical
/// implementations; used by the property suites and tests.
pub mod oracle {
    use super::*;

    /// Bruhat order on a single factor by the subword property: some subword
    /// of a fixed reduced word of `y` multiplies to `x`.
    pub fn bruhat_leq_subword_single(x: &Perm, y: &Perm) -> bool {
        let n = x.n();
        let word = y.reduced_word();
        let l = word.len();
        // iterate over all subwords; l <= 10 at the scales this oracle serves
        for mask in 0u32..(1u32 << l) {
            let mut p = Perm::identity(n);
            for (k, &i) in word.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    p = p.compose(&Perm::simple(n, i));
                }
            }
            if &p == x {
                return true;
            }
        }
        false
    }

    /// Componentwise subword oracle.
    pub fn bruhat_leq_subword(x: &WeylElement, y: &WeylElement) -> Result<bool> {
        if x.shape() != y.shape() {
            return Err(Error::ShapeMismatch);
        }
        Ok(x.parts()
            .iter()
            .zip(y.parts())
            .all(|(a, b)| bruhat_leq_subword_single(a, b)))
    }

    /// Searches the full reduced-word tree of a single factor for a word with
    /// pairwise distinct letters.
    pub fn distinct_simple_product_single(p: &Perm) -> bool {
        fn dfs(p: &Perm, used: &mut Vec<bool>) -> bool {
            if p.is_identity() {
                return true;
            }
            for i in 0..p.n() - 1 {
                if p.has_right_descent(i) && !used[i] {
                    let shorter = p.compose(&Perm::simple(p.n(), i));
                    used[i] = true;
                    if dfs(&shorter, used) {
                        used[i] = false;
                        return true;
                    }
                    used[i] = false;
                }
            }
            false
        }
        dfs(p, &mut vec![false; p.n().saturating_sub(1)])
    }

    /// Reduced-word oracle on the product group: letters in different factors
    /// are automatically distinct, so the element qualifies iff every factor does.
    pub fn distinct_simple_product(w: &WeylElement) -> bool {
        w.parts().iter().all(distinct_simple_product_single)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(n: usize, sigma: usize) -> EmbeddingShape {
        EmbeddingShape::new(n, sigma).unwrap()
    }

    fn elt(shape: EmbeddingShape, s: &str) -> WeylElement {
        WeylElement::parse(s, shape).unwrap()
    }

    #[test]
    fn length_examples() {
        assert_eq!(length(&WeylElement::identity(shape(3, 1))), 0);
        assert_eq!(length(&longest_element(shape(4, 1))), 6);
        assert_eq!(length(&longest_element(shape(3, 2))), 6);
    }

    #[test]
    fn bruhat_examples() {
        let sh = shape(3, 1);
        let e = WeylElement::identity(sh);
        let w0 = longest_element(sh);
        assert!(bruhat_leq(&e, &w0).unwrap());
        let s1 = elt(sh, "213");
        let s2 = elt(sh, "132");
        assert!(!bruhat_leq(&s1, &s2).unwrap());
        // ((s1, e), (s1 s2, s2)) in S_3 x S_3, checked against the subword oracle
        let sh2 = shape(3, 2);
        let x = elt(sh2, "213/123");
        let y = elt(sh2, "231/132");
        assert!(bruhat_leq(&x, &y).unwrap());
        assert!(oracle::bruhat_leq_subword(&x, &y).unwrap());
    }

    #[test]
    fn longest_element_examples() {
        assert_eq!(longest_element(shape(2, 1)).serialized(), "21");
        assert_eq!(longest_element(shape(3, 1)).serialized(), "321");
        assert_eq!(longest_element(shape(2, 2)).serialized(), "21/21");
    }

    #[test]
    fn dot_action_examples() {
        let sh = shape(3, 1);
        let zero = IntegralWeight::zero(sh);
        let e = WeylElement::identity(sh);
        assert_eq!(dot_action(&e, &zero).unwrap(), zero);
        // w0 . 0 = w0(rho) - rho = (0,1,2) - (2,1,0) = (-2, 0, 2): the value of
        // -2*(half-sum rho) in the integral convention
        let w0 = longest_element(sh);
        assert_eq!(dot_action(&w0, &zero).unwrap().rows, vec![vec![-2, 0, 2]]);
        // s1 . 0 in S_2 -> (-1, 1)
        let sh2 = shape(2, 1);
        let s1 = elt(sh2, "21");
        assert_eq!(
            dot_action(&s1, &IntegralWeight::zero(sh2)).unwrap().rows,
            vec![vec![-1, 1]]
        );
    }

    #[test]
    fn apply_to_weights_examples() {
        let sh = shape(3, 1);
        let h = IntegralWeight::new(vec![vec![1, 5, 9]]).unwrap();
        let e = WeylElement::identity(sh);
        assert_eq!(apply_to_weights(&e, &h).unwrap(), h);
        let w0 = longest_element(sh);
        assert_eq!(apply_to_weights(&w0, &h).unwrap().rows, vec![vec![9, 5, 1]]);
        let s1 = elt(sh, "213");
        assert_eq!(apply_to_weights(&s1, &h).unwrap().rows, vec![vec![5, 1, 9]]);
    }

    #[test]
    fn distinct_simple_product_examples() {
        let sh = shape(3, 1);
        assert!(is_distinct_simple_product(&WeylElement::identity(sh)));
        assert!(is_distinct_simple_product(&elt(sh, "231"))); // s1 s2
        assert!(!is_distinct_simple_product(&longest_element(sh)));
        // agree with the reduced-word oracle on all of S_4
        for w in WeylElement::all(shape(4, 1)) {
            assert_eq!(
                is_distinct_simple_product(&w),
                oracle::distinct_simple_product(&w),
                "mismatch at {w}"
            );
        }
    }

    #[test]
    fn diamond_examples() {
        let sh = shape(3, 1);
        let (w1, w2, _w3) = diamond(&WeylElement::identity(sh)).unwrap();
        let mut pair = vec![w1.serialized(), w2.serialized()];
        pair.sort();
        assert_eq!(pair, vec!["132", "213"]);

        let sh22 = shape(2, 2);
        let (w1, w2, w3) = diamond(&WeylElement::identity(sh22)).unwrap();
        let mut pair = vec![w1.serialized(), w2.serialized()];
        pair.sort();
        assert_eq!(pair, vec!["12/21", "21/12"]);
        assert_eq!(w3.serialized(), "21/21");

        // w = s2 in S_4 has a unique diamond pair among its length-2 covers
        let s2 = elt(shape(4, 1), "1324");
        let (a, b, w3) = diamond(&s2).unwrap();
        assert_eq!(length(&a), 2);
        assert_eq!(length(&b), 2);
        assert_eq!(length(&w3), 3);
        assert!(bruhat_leq(&s2, &a).unwrap() && bruhat_leq(&a, &w3).unwrap());
        assert!(bruhat_leq(&s2, &b).unwrap() && bruhat_leq(&b, &w3).unwrap());
    }

    #[test]
    fn upper_interval_examples() {
        let sh = shape(3, 1);
        let w0 = longest_element(sh);
        assert_eq!(upper_interval(&w0), vec![w0.clone()]);
        assert_eq!(upper_interval(&WeylElement::identity(sh)).len(), 6);
        let s1 = elt(sh, "213");
        let names: Vec<String> = upper_interval(&s1).iter().map(|w| w.serialized()).collect();
        assert_eq!(names, vec!["213", "231", "312", "321"]);
    }

    #[test]
    fn serialization_round_trip() {
        let sh = shape(3, 2);
        let w = elt(sh, "231/321");
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, "[[2,3,1],[3,2,1]]");
        let back: WeylElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }
}
