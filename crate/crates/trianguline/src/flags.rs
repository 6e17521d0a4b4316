//! Exact linear algebra on complete flags and on points of the local model:
//! relative position, the two weight maps, cell-point construction, component
//! candidacy, root matching and graded characteristic polynomials.

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{rat_int, Rat, RationalMatrix, RationalPoly};
use crate::perm::Perm;
use crate::weyl::{self, EmbeddingShape, IntegralWeight, WeylElement};
use crate::{Error, Result};

mod probe;
pub use probe::{probe_conjecture, ProbeReport};

/// A complete flag per embedding: an invertible matrix whose first `i`
/// columns span the `i`-th step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub blocks: Vec<RationalMatrix>,
}

impl Flag {
    pub fn new(blocks: Vec<RationalMatrix>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::ShapeMismatch);
        }
        let n = blocks[0].rows();
        for b in &blocks {
            if !b.is_square() || b.rows() != n {
                return Err(Error::ShapeMismatch);
            }
            if !b.is_invertible() {
                return Err(Error::SingularMatrix);
            }
        }
        Ok(Flag { blocks })
    }

    pub fn standard(shape: EmbeddingShape) -> Self {
        Flag {
            blocks: vec![RationalMatrix::identity(shape.n); shape.sigma],
        }
    }

    /// The flag whose block `tau` is the permutation matrix of `w_tau`
    /// (column `a` is the basis vector indexed by `w_tau(a)`).
    pub fn from_weyl(w: &WeylElement) -> Self {
        Flag {
            blocks: w.parts().iter().map(permutation_matrix).collect(),
        }
    }

    pub fn shape(&self) -> EmbeddingShape {
        EmbeddingShape {
            n: self.blocks[0].rows(),
            sigma: self.blocks.len(),
        }
    }

    /// Left translate by a frame, blockwise: the flag of `g * self`.
    pub fn translate(&self, g: &[RationalMatrix]) -> Result<Flag> {
        if g.len() != self.blocks.len() {
            return Err(Error::ShapeMismatch);
        }
        let blocks = g
            .iter()
            .zip(&self.blocks)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<Vec<_>>>()?;
        Flag::new(blocks)
    }

    /// Blockwise right multiplication: the flag of `self * m`. Right
    /// multiplication by a permutation matrix moves within the same frame.
    pub fn right_multiply(&self, m: &[RationalMatrix]) -> Result<Flag> {
        if m.len() != self.blocks.len() {
            return Err(Error::ShapeMismatch);
        }
        let blocks = self
            .blocks
            .iter()
            .zip(m)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<Vec<_>>>()?;
        Flag::new(blocks)
    }

    /// Subspace-wise equality: column spans agree at every step of every block.
    pub fn same_flag(&self, other: &Flag) -> Result<bool> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch);
        }
        let n = self.shape().n;
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            for i in 1..=n {
                let left = a.left_columns(i);
                let right = b.left_columns(i);
                let cat = RationalMatrix::hcat(&[&left, &right])?;
                if cat.rank() != i {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The permutation matrix with column `a` equal to `e_{w(a)}`.
pub fn permutation_matrix(p: &Perm) -> RationalMatrix {
    let n = p.n();
    RationalMatrix::from_fn(n, n, |i, j| {
        if p.apply(j) == i {
            rat_int(1)
        } else {
            Rat::zero()
        }
    })
}

/// A point of the local model: two flags and a compatible endomorphism,
/// blockwise per embedding. `nilpotent` records whether the endomorphism is
/// nilpotent, which is what membership in the underlying variety requires;
/// general compatible endomorphisms are allowed and tagged.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalModelPoint {
    pub flag1: Flag,
    pub flag2: Flag,
    pub endo: Vec<RationalMatrix>,
}

impl LocalModelPoint {
    /// Validates both triangularity invariants (the endomorphism preserves
    /// both flags).
    pub fn new(flag1: Flag, flag2: Flag, endo: Vec<RationalMatrix>) -> Result<Self> {
        let pt = LocalModelPoint { flag1, flag2, endo };
        pt.validate()?;
        Ok(pt)
    }

    pub fn shape(&self) -> EmbeddingShape {
        self.flag1.shape()
    }

    pub fn validate(&self) -> Result<()> {
        self.conjugated().map(|_| ())
    }

    /// The endomorphism in each flag's frame, after checking both
    /// triangularity invariants.
    fn conjugated(&self) -> Result<[Vec<RationalMatrix>; 2]> {
        let shape = self.flag1.shape();
        if self.flag2.shape() != shape || self.endo.len() != shape.sigma {
            return Err(Error::ShapeMismatch);
        }
        let mut out = [Vec::new(), Vec::new()];
        for (side, flag) in [&self.flag1, &self.flag2].into_iter().enumerate() {
            for (g, psi) in flag.blocks.iter().zip(&self.endo) {
                let conj = g.inverse()?.mul(psi)?.mul(g)?;
                if !is_upper_triangular(&conj) {
                    return Err(Error::InvariantViolation(
                        "endomorphism does not preserve the flag".into(),
                    ));
                }
                out[side].push(conj);
            }
        }
        Ok(out)
    }

    /// True when every block of the endomorphism is nilpotent.
    pub fn is_nilpotent(&self) -> bool {
        let n = self.shape().n;
        self.endo.iter().all(|psi| {
            let mut power = psi.clone();
            for _ in 1..n {
                power = power.mul(psi).expect("square");
            }
            (0..n).all(|i| (0..n).all(|j| power[(i, j)].is_zero()))
        })
    }
}

fn is_upper_triangular(m: &RationalMatrix) -> bool {
    let n = m.rows();
    (0..n).all(|i| (0..i).all(|j| m[(i, j)].is_zero()))
}

/// A point of the torus over the rationals: `sigma x n` exact entries. The
/// target of the two weight maps. Serializes as rows of `p/q` strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusElement {
    pub entries: Vec<Vec<Rat>>,
}

impl Serialize for TorusElement {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(crate::linalg::rat_to_string).collect())
            .collect();
        rows.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TorusElement {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(de)?;
        let entries = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| crate::linalg::rat_from_string(s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(TorusElement { entries })
    }
}

impl TorusElement {
    pub fn shape(&self) -> EmbeddingShape {
        EmbeddingShape {
            n: self.entries[0].len(),
            sigma: self.entries.len(),
        }
    }

    /// `Ad(w^{-1})`: entry `i` of the output is entry `w(i)` of the input.
    pub fn ad_inverse(&self, w: &WeylElement) -> Result<TorusElement> {
        if w.shape() != self.shape() {
            return Err(Error::ShapeMismatch);
        }
        Ok(TorusElement {
            entries: self
                .entries
                .iter()
                .zip(w.parts())
                .map(|(row, p)| (0..row.len()).map(|i| row[p.apply(i)].clone()).collect())
                .collect(),
        })
    }

    /// Lies in the fixed subspace of `w` iff constant along the cycles of each part.
    pub fn is_fixed_by(&self, w: &WeylElement) -> Result<bool> {
        Ok(self.ad_inverse(w)? == *self)
    }

    pub fn flatten(&self) -> Vec<Rat> {
        self.entries.iter().flatten().cloned().collect()
    }
}

/// Relative position of two flags: per embedding, the unique permutation `w`
/// with `dim(F1_i meet F2_j) = #{a <= j : w(a) <= i}`, read off the jump
/// pattern of lower-left ranks of the transition matrix `F1^{-1} F2`.
pub fn relative_position(f1: &Flag, f2: &Flag) -> Result<WeylElement> {
    if f1.shape() != f2.shape() {
        return Err(Error::ShapeMismatch);
    }
    let n = f1.shape().n;
    let mut parts = Vec::with_capacity(f1.blocks.len());
    for (b1, b2) in f1.blocks.iter().zip(&f2.blocks) {
        let c = b1.inverse()?.mul(b2)?;
        // rank of rows strictly below i of the first j columns, 0-based grid
        let below_rank = |i: usize, j: usize| -> usize {
            if i == n || j == 0 {
                return 0;
            }
            RationalMatrix::from_fn(n - i, j, |a, b| c[(i + a, b)].clone()).rank()
        };
        let mut images = Vec::with_capacity(n);
        for a in 1..=n {
            // w(a) = least i with rank(below i, cols <= a) = rank(below i, cols < a)
            let mut found = None;
            for i in 1..=n {
                if below_rank(i, a) == below_rank(i, a - 1) {
                    found = Some(i - 1);
                    break;
                }
            }
            images.push(found.expect("invertible blocks always produce a jump"));
        }
        parts.push(Perm::from_one_line(&images)?);
    }
    WeylElement::from_parts(parts)
}

/// Independent oracle: the full table `dim(F1_i meet F2_j)` by ranks of
/// concatenated column blocks, compared against the rank matrix of `w`.
pub fn relative_position_table_oracle(f1: &Flag, f2: &Flag, w: &WeylElement) -> Result<bool> {
    if f1.shape() != f2.shape() || w.shape() != f1.shape() {
        return Err(Error::ShapeMismatch);
    }
    let n = f1.shape().n;
    for ((b1, b2), p) in f1.blocks.iter().zip(&f2.blocks).zip(w.parts()) {
        for i in 1..=n {
            for j in 1..=n {
                let cat = RationalMatrix::hcat(&[&b1.left_columns(i), &b2.left_columns(j)])?;
                let meet = i + j - cat.rank();
                let expected = (1..=j).filter(|&a| p.apply(a - 1) + 1 <= i).count();
                if meet != expected {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Builds the point `(gB, g w B, Ad(g)(t + u))` of the vector-bundle fiber
/// over the cell indexed by `w`.
///
/// `u_part` must be strictly upper triangular and supported on the positions
/// `(i, j)`, `i < j`, with `w^{-1}(i) < w^{-1}(j)` per embedding.
pub fn make_cell_point(
    g: &[RationalMatrix],
    w: &WeylElement,
    t_part: &TorusElement,
    u_part: &[RationalMatrix],
) -> Result<LocalModelPoint> {
    let shape = w.shape();
    if g.len() != shape.sigma || u_part.len() != shape.sigma || t_part.shape() != shape {
        return Err(Error::ShapeMismatch);
    }
    let n = shape.n;
    let mut endo = Vec::with_capacity(shape.sigma);
    for tau in 0..shape.sigma {
        let part = w.part(tau);
        let inv = part.inverse();
        let u = &u_part[tau];
        if u.rows() != n || u.cols() != n {
            return Err(Error::ShapeMismatch);
        }
        for i in 0..n {
            for j in 0..n {
                if u[(i, j)].is_zero() {
                    continue;
                }
                let inside = i < j && inv.apply(i) < inv.apply(j);
                if !inside {
                    return Err(Error::SupportViolation(format!(
                        "embedding {tau}, entry ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let mut b = u.clone();
        for i in 0..n {
            b[(i, i)] = t_part.entries[tau][i].clone();
        }
        let gi = &g[tau];
        if !gi.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        endo.push(gi.mul(&b)?.mul(&gi.inverse()?)?);
    }
    let flag1 = Flag::new(g.to_vec())?;
    let flag2 = flag1.right_multiply(
        &w.parts()
            .iter()
            .map(permutation_matrix)
            .collect::<Vec<_>>(),
    )?;
    LocalModelPoint::new(flag1, flag2, endo)
}

/// Number of admissible strictly-upper positions for [`make_cell_point`]:
/// `lg(w0) - lg(w)` in total.
pub fn cell_support_size(w: &WeylElement) -> usize {
    let n = w.shape().n;
    w.parts()
        .iter()
        .map(|p| {
            let inv = p.inverse();
            let mut count = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if inv.apply(i) < inv.apply(j) {
                        count += 1;
                    }
                }
            }
            count
        })
        .sum()
}

/// One of the two weight maps: the diagonal of the endomorphism conjugated
/// into the chosen flag's frame. Both triangularity invariants are enforced.
pub fn kappa(pt: &LocalModelPoint, side: u8) -> Result<TorusElement> {
    if side != 1 && side != 2 {
        return Err(Error::Precondition("side must be 1 or 2".into()));
    }
    let conjugated = pt.conjugated()?;
    let n = pt.shape().n;
    let entries = conjugated[side as usize - 1]
        .iter()
        .map(|conj| (0..n).map(|i| conj[(i, i)].clone()).collect())
        .collect();
    Ok(TorusElement { entries })
}

/// The candidate component set of a point: all `w` above the relative
/// position whose twist of the first weight map agrees with the relative
/// position's twist.
///
/// This is a provable superset of the true component set, with equality when
/// the endomorphism vanishes; whether equality always holds is open. General
/// compatible endomorphisms are accepted: a nilpotent one forces the weight
/// maps to vanish, which makes the twist condition vacuous, while a regular
/// one pins the set to the relative position alone.
pub fn candidate_components(pt: &LocalModelPoint) -> Result<Vec<WeylElement>> {
    pt.validate()?;
    let wp = relative_position(&pt.flag1, &pt.flag2)?;
    let k1 = kappa(pt, 1)?;
    let reference = k1.ad_inverse(&wp)?;
    let mut out = Vec::new();
    for w in weyl::upper_interval(&wp) {
        if k1.ad_inverse(&w)? == reference {
            out.push(w);
        }
    }
    Ok(out)
}

/// Recovers the unique permutation with `b_i = a_{w(i)}`; the entries of `a`
/// must be pairwise distinct and both sides must have equal product
/// polynomials.
pub fn match_roots(a: &[Rat], b: &[Rat]) -> Result<Perm> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::ShapeMismatch);
    }
    for i in 0..n {
        for j in i + 1..n {
            if a[i] == a[j] {
                return Err(Error::DuplicateEntries);
            }
        }
    }
    let mut images = Vec::with_capacity(n);
    for bi in b {
        match a.iter().position(|ai| ai == bi) {
            Some(k) => images.push(k),
            None => return Err(Error::NoMatchingPermutation),
        }
    }
    Perm::from_one_line(&images).map_err(|_| Error::NoMatchingPermutation)
}

/// Per-embedding product over the flag steps of `(Y - (label_i + induced
/// diagonal entry))`: the graded characteristic polynomial of the
/// endomorphism acting on the associated graded of the flag, shifted by the
/// integer labels.
pub fn graded_char_poly(
    endo: &[RationalMatrix],
    flag: &Flag,
    grading: &IntegralWeight,
) -> Result<Vec<RationalPoly>> {
    let shape = flag.shape();
    if endo.len() != shape.sigma || grading.shape() != shape {
        return Err(Error::ShapeMismatch);
    }
    let n = shape.n;
    let mut out = Vec::with_capacity(shape.sigma);
    for tau in 0..shape.sigma {
        let g = &flag.blocks[tau];
        let conj = g.inverse()?.mul(&endo[tau])?.mul(g)?;
        if !is_upper_triangular(&conj) {
            return Err(Error::InvariantViolation(
                "endomorphism does not preserve the flag".into(),
            ));
        }
        let mut poly = RationalPoly::constant(rat_int(1));
        for i in 0..n {
            let root = rat_int(grading.rows[tau][i]) + &conj[(i, i)];
            // (Y - root)
            let factor = RationalPoly::monomial(rat_int(1), 1)
                .sub(&RationalPoly::constant(root));
            poly = poly.mul(&factor);
        }
        out.push(poly);
    }
    Ok(out)
}

/// Seeded exact samplers used by the property suites and tests.
pub mod sample {
    use super::*;

    /// A small exact rational with numerator in `[-4, 4]` and denominator in `[1, 3]`.
    pub fn rational<R: Rng>(rng: &mut R) -> Rat {
        let num = rng.gen_range(-4i64..=4);
        let den = rng.gen_range(1i64..=3);
        crate::linalg::rat(num, den)
    }

    pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Rat {
        loop {
            let x = rational(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn invertible_matrix<R: Rng>(rng: &mut R, n: usize) -> RationalMatrix {
        loop {
            let m = RationalMatrix::from_fn(n, n, |_, _| rational(rng));
            if m.is_invertible() {
                return m;
            }
        }
    }

    pub fn frame<R: Rng>(rng: &mut R, shape: EmbeddingShape) -> Vec<RationalMatrix> {
        (0..shape.sigma)
            .map(|_| invertible_matrix(rng, shape.n))
            .collect()
    }

    pub fn flag<R: Rng>(rng: &mut R, shape: EmbeddingShape) -> Flag {
        Flag::new(frame(rng, shape)).expect("sampled invertible")
    }

    pub fn torus_element<R: Rng>(rng: &mut R, shape: EmbeddingShape) -> TorusElement {
        TorusElement {
            entries: (0..shape.sigma)
                .map(|_| (0..shape.n).map(|_| rational(rng)).collect())
                .collect(),
        }
    }

    /// A torus element constant along the cycles of each part of `w`, i.e. a
    /// point of the fixed subspace of `w`.
    pub fn fixed_torus_element<R: Rng>(rng: &mut R, w: &WeylElement) -> TorusElement {
        let shape = w.shape();
        let mut entries = Vec::with_capacity(shape.sigma);
        for part in w.parts() {
            let mut row = vec![Rat::zero(); shape.n];
            let mut seen = vec![false; shape.n];
            for start in 0..shape.n {
                if seen[start] {
                    continue;
                }
                let value = rational(rng);
                let mut a = start;
                while !seen[a] {
                    seen[a] = true;
                    row[a] = value.clone();
                    a = part.apply(a);
                }
            }
            entries.push(row);
        }
        TorusElement { entries }
    }

    /// Strictly-upper matrices supported exactly where [`make_cell_point`] allows.
    pub fn cell_upper_part<R: Rng>(rng: &mut R, w: &WeylElement) -> Vec<RationalMatrix> {
        let n = w.shape().n;
        w.parts()
            .iter()
            .map(|p| {
                let inv = p.inverse();
                RationalMatrix::from_fn(n, n, |i, j| {
                    if i < j && inv.apply(i) < inv.apply(j) {
                        rational(rng)
                    } else {
                        Rat::zero()
                    }
                })
            })
            .collect()
    }

    /// A random point of the bundle fiber over the cell of `w`, with the
    /// diagonal part zeroed out when `nilpotent` is requested.
    pub fn cell_point<R: Rng>(rng: &mut R, w: &WeylElement, nilpotent: bool) -> LocalModelPoint {
        let shape = w.shape();
        let g = frame(rng, shape);
        let t_part = if nilpotent {
            TorusElement {
                entries: vec![vec![Rat::zero(); shape.n]; shape.sigma],
            }
        } else {
            torus_element(rng, shape)
        };
        let u_part = cell_upper_part(rng, w);
        make_cell_point(&g, w, &t_part, &u_part).expect("construction satisfies its own support")
    }
}
