//! Schubert cells and varieties in single and double flag varieties: rank
//! matrices, exact tangent dimensions at torus-fixed points through a
//! determinantal Jacobian, pattern-based global smoothness, and the tangent
//! bounds that transfer to the local models.

use serde::Serialize;

use crate::cartan;
use crate::flags::Flag;
use crate::linalg::{integer_rank, Rat, RationalMatrix};
use crate::perm::Perm;
use crate::weyl::{self, EmbeddingShape, WeylElement};
use crate::{Error, Result};

/// A Weyl element together with its per-embedding rank matrices
/// `r_w(i, j) = #{a <= i : w(a) <= j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchubertDatum {
    pub w: WeylElement,
    pub rank: Vec<Vec<Vec<usize>>>,
}

impl SchubertDatum {
    pub fn new(w: WeylElement) -> Self {
        let rank = w.parts().iter().map(Perm::rank_matrix).collect();
        let datum = SchubertDatum { w, rank };
        debug_assert!(datum.invariants_hold());
        datum
    }

    /// Rank matrices are monotone in both indices and the last row counts
    /// columns.
    pub fn invariants_hold(&self) -> bool {
        let n = self.w.shape().n;
        self.rank.iter().all(|r| {
            (0..n).all(|i| {
                (0..n).all(|j| {
                    (i == 0 || r[i][j] >= r[i - 1][j])
                        && (j == 0 || r[i][j] >= r[i][j - 1])
                        && r[n - 1][j] == j + 1
                })
            })
        })
    }
}

/// Tangent dimension of the closure of the double cell indexed by `w` at a
/// torus-fixed point of the cell indexed by `v`: the orbit direction
/// `dim G/B` plus, per embedding, the single-flag fixed-point tangent
/// dimension, which is defined as the Jacobian-oracle output.
pub fn schubert_tangent_dim(w: &WeylElement, v: &WeylElement) -> Result<usize> {
    if w.shape() != v.shape() {
        return Err(Error::ShapeMismatch);
    }
    if !weyl::bruhat_leq(v, w)? {
        return Err(Error::Precondition(format!("{v} is not below {w}")));
    }
    let mut total = w.shape().dim_gb();
    for (wp, vp) in w.parts().iter().zip(v.parts()) {
        total += single_tangent_dim_fixed_point(wp, vp)?;
    }
    Ok(total)
}

/// Combinatorial fixed-point count `#{transpositions t : v t <= w}` summed
/// over embeddings; cross-checked against the Jacobian oracle at desk scale.
pub fn combinatorial_tangent_count(w: &WeylElement, v: &WeylElement) -> Result<usize> {
    if w.shape() != v.shape() {
        return Err(Error::ShapeMismatch);
    }
    let n = w.shape().n;
    let mut total = 0;
    for (wp, vp) in w.parts().iter().zip(v.parts()) {
        for i in 0..n {
            for j in i + 1..n {
                let vt = vp.compose(&Perm::transposition(n, i, j));
                if vt.bruhat_leq(wp) {
                    total += 1;
                }
            }
        }
    }
    Ok(total)
}

/// Single-flag determinantal Jacobian at the fixed point of `v` inside the
/// closed cell of `w`, in exact integer arithmetic.
///
/// The chart around the fixed point puts a `1` in row `v(a)` of column `a`,
/// zeros in rows `v(b)` for `b < a`, and free coordinates below; the closure
/// is cut out by all `(t+1)`-minors of the lower-left blocks prescribed by
/// the rank matrix, and the tangent dimension is the chart dimension minus
/// the rank of the linearized minors.
pub fn single_tangent_dim_fixed_point(w: &Perm, v: &Perm) -> Result<usize> {
    let n = w.n();
    if !v.bruhat_leq(w) {
        return Err(Error::Precondition(format!(
            "{} is not below {} in one factor",
            v.one_line_string(),
            w.one_line_string()
        )));
    }
    // variables: (row v(b), column a) for b > a
    let mut var_index = std::collections::HashMap::new();
    let mut nvars = 0usize;
    for a in 0..n {
        for b in a + 1..n {
            var_index.insert((v.apply(b), a), nvars);
            nvars += 1;
        }
    }
    // base point: the permutation matrix of v, entries in {0, 1}
    let m0 = |r: usize, c: usize| -> i64 { (v.apply(c) == r) as i64 };
    let rank_w = w.rank_matrix();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for a in 1..=n {
        for j in 1..=n {
            let t = a - rank_w[a - 1][j - 1];
            let block_rows: Vec<usize> = (j..n).collect(); // 0-based rows below step j
            let block_cols: Vec<usize> = (0..a).collect();
            if t + 1 > block_rows.len().min(block_cols.len()) {
                continue;
            }
            for rsel in crate::linalg::combinations(block_rows.len(), t + 1) {
                let rr: Vec<usize> = rsel.iter().map(|&k| block_rows[k]).collect();
                for csel in crate::linalg::combinations(block_cols.len(), t + 1) {
                    let cc: Vec<usize> = csel.iter().map(|&k| block_cols[k]).collect();
                    let mut row = vec![0i64; nvars];
                    let mut nonzero = false;
                    for (ai, &r) in rr.iter().enumerate() {
                        for (bi, &c) in cc.iter().enumerate() {
                            let Some(&vi) = var_index.get(&(r, c)) else {
                                continue;
                            };
                            let cof = integer_cofactor(&rr, &cc, ai, bi, &m0);
                            if cof != 0 {
                                row[vi] += cof;
                                nonzero = true;
                            }
                        }
                    }
                    if nonzero {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let jac_rank = if rows.is_empty() { 0 } else { integer_rank(&rows) };
    Ok(n * (n - 1) / 2 - jac_rank)
}

/// Signed cofactor of the `(ai, bi)` position of the minor on rows `rr` and
/// columns `cc` of the base point.
fn integer_cofactor(
    rr: &[usize],
    cc: &[usize],
    ai: usize,
    bi: usize,
    m0: &dyn Fn(usize, usize) -> i64,
) -> i64 {
    let sub_rows: Vec<usize> = rr
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != ai)
        .map(|(_, &r)| r)
        .collect();
    let sub_cols: Vec<usize> = cc
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != bi)
        .map(|(_, &c)| c)
        .collect();
    let det = integer_det(&sub_rows, &sub_cols, m0);
    if (ai + bi) % 2 == 0 {
        det
    } else {
        -det
    }
}

fn integer_det(rows: &[usize], cols: &[usize], m0: &dyn Fn(usize, usize) -> i64) -> i64 {
    match rows.len() {
        0 => 1,
        1 => m0(rows[0], cols[0]),
        _ => {
            let mut det = 0i64;
            for (j, &c) in cols.iter().enumerate() {
                let top = m0(rows[0], c);
                if top == 0 {
                    continue;
                }
                let rest_cols: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter(|(jj, _)| *jj != j)
                    .map(|(_, &cc)| cc)
                    .collect();
                let sub = integer_det(&rows[1..], &rest_cols, m0);
                det += if j % 2 == 0 { top * sub } else { -top * sub };
            }
            det
        }
    }
}

/// Exact tangent dimension of the double determinantal model of the closed
/// cell of `w` at an arbitrary exact flag pair satisfying its rank conditions.
///
/// The linearization runs over all minors of all prescribed sizes of the
/// concatenated column blocks, in a product chart around the point.
pub fn jacobian_tangent_dim(w: &WeylElement, f1: &Flag, f2: &Flag) -> Result<usize> {
    let shape = w.shape();
    if f1.shape() != shape || f2.shape() != shape {
        return Err(Error::ShapeMismatch);
    }
    let n = shape.n;
    let mut total = 0;
    for tau in 0..shape.sigma {
        let g1 = &f1.blocks[tau];
        let g2 = &f2.blocks[tau];
        let wp = w.part(tau);
        // membership: dim(F1_i meet F2_j) >= #{a <= j : w(a) <= i} everywhere
        for i in 1..=n {
            for j in 1..=n {
                let r = (1..=j).filter(|&a| wp.apply(a - 1) + 1 <= i).count();
                let cat = RationalMatrix::hcat(&[&g1.left_columns(i), &g2.left_columns(j)])?;
                if i + j - cat.rank() < r {
                    return Err(Error::Precondition(
                        "point violates the rank conditions of the closed cell".into(),
                    ));
                }
            }
        }
        total += double_jacobian_single_factor(wp, g1, g2)?;
    }
    Ok(total)
}

fn double_jacobian_single_factor(
    wp: &Perm,
    g1: &RationalMatrix,
    g2: &RationalMatrix,
) -> Result<usize> {
    use num_traits::Zero;
    let n = wp.n();
    // chart: M_b = g_b (I + X_b), X_b strictly lower triangular;
    // d M_b[r, c] / d X_b[k, c] = g_b[r, k] for k > c
    let mut vars: Vec<(usize, usize, usize)> = Vec::new();
    let mut var_index = std::collections::HashMap::new();
    for blk in 0..2usize {
        for c in 0..n {
            for k in c + 1..n {
                var_index.insert((blk, k, c), vars.len());
                vars.push((blk, k, c));
            }
        }
    }
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let r = (1..=j).filter(|&a| wp.apply(a - 1) + 1 <= i).count();
            if r <= (i + j).saturating_sub(n) {
                continue; // condition automatic
            }
            let size = i + j - r + 1;
            if size > n.min(i + j) {
                continue;
            }
            let entry = |rr: usize, cc: usize| -> Rat {
                if cc < i {
                    g1[(rr, cc)].clone()
                } else {
                    g2[(rr, cc - i)].clone()
                }
            };
            for rsel in crate::linalg::combinations(n, size) {
                for csel in crate::linalg::combinations(i + j, size) {
                    let mut row = vec![Rat::zero(); vars.len()];
                    let mut nonzero = false;
                    for (bi, &cfull) in csel.iter().enumerate() {
                        let (blk, c, g) = if cfull < i {
                            (0usize, cfull, g1)
                        } else {
                            (1usize, cfull - i, g2)
                        };
                        for (ai, &rfull) in rsel.iter().enumerate() {
                            let cof = rational_cofactor(&rsel, &csel, ai, bi, &entry);
                            if cof.is_zero() {
                                continue;
                            }
                            for k in c + 1..n {
                                let vi = var_index[&(blk, k, c)];
                                let add = &cof * &g[(rfull, k)];
                                if !add.is_zero() {
                                    row[vi] += add;
                                    nonzero = true;
                                }
                            }
                        }
                    }
                    if nonzero {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let jac_rank = if rows.is_empty() {
        0
    } else {
        RationalMatrix::from_rows(rows)?.rank()
    };
    Ok(n * (n - 1) - jac_rank)
}

fn rational_cofactor(
    rr: &[usize],
    cc: &[usize],
    ai: usize,
    bi: usize,
    entry: &dyn Fn(usize, usize) -> Rat,
) -> Rat {
    let sub_rows: Vec<usize> = rr
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != ai)
        .map(|(_, &r)| r)
        .collect();
    let sub_cols: Vec<usize> = cc
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != bi)
        .map(|(_, &c)| c)
        .collect();
    let k = sub_rows.len();
    let m = RationalMatrix::from_fn(k, k, |a, b| entry(sub_rows[a], sub_cols[b]));
    let det = m.determinant().expect("square");
    if (ai + bi) % 2 == 0 {
        det
    } else {
        -det
    }
}

/// Global smoothness of the closed cell: every factor avoids the patterns
/// `3412` and `4231`.
pub fn is_smooth_everywhere(w: &WeylElement) -> bool {
    let p3412 = Perm::from_one_line(&[2, 3, 0, 1]).unwrap();
    let p4231 = Perm::from_one_line(&[3, 1, 2, 0]).unwrap();
    w.parts()
        .iter()
        .all(|p| !p.contains_pattern(&p3412) && !p.contains_pattern(&p4231))
}

/// The tangent upper bound at a point of the component indexed by `w`
/// sitting over zero of the base, in the cell indexed by `wp`: fixed-point
/// tangent dimension plus the fixed-subspace dimension of the twist plus the
/// colength of `wp`.
pub fn tangent_bound(w: &WeylElement, wp: &WeylElement) -> Result<usize> {
    if !weyl::bruhat_leq(wp, w)? {
        return Err(Error::Precondition(format!("{wp} is not below {w}")));
    }
    let twist = w.compose(&wp.inverse())?;
    let w0 = weyl::longest_element(w.shape());
    let colength = weyl::length(&wp.compose(&w0)?);
    Ok(schubert_tangent_dim(w, wp)? + cartan::fixed_space_dim(&twist) + colength)
}

/// Tangent report for a point with invariants `(w, w_x)`.
#[derive(Clone, Debug, Serialize)]
pub struct TangentReport {
    pub w: String,
    pub w_x: String,
    /// Upper bound for `dim T - dim` of the ambient moduli at the point.
    pub delta_bound: i64,
    /// The specialized bound `lg(w_x w0) - d_{w_x w0}`, defined when `w = w0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominant_bound: Option<i64>,
    /// Whether the bound certifies smoothness (zero excess).
    pub smooth_certified: bool,
}

/// Transfers [`tangent_bound`] to the tangent-excess bound of the ambient
/// moduli: the excess at the point is at most `tangent_bound - dim G`, with
/// the specialized colength-minus-displacement form in the dominant case.
pub fn trianguline_tangent_report(w: &WeylElement, w_x: &WeylElement) -> Result<TangentReport> {
    if w.shape() != w_x.shape() {
        return Err(Error::ShapeMismatch);
    }
    if !weyl::bruhat_leq(w_x, w)? {
        return Err(Error::Precondition(format!("{w_x} is not below {w}")));
    }
    let shape = w.shape();
    let bound = tangent_bound(w, w_x)? as i64;
    let delta_bound = bound - shape.dim_g() as i64;
    let w0 = weyl::longest_element(shape);
    let dominant_bound = if *w == w0 {
        let wxw0 = w_x.compose(&w0)?;
        Some(weyl::length(&wxw0) as i64 - cartan::d_of(&wxw0) as i64)
    } else {
        None
    };
    // hypotheses under which the bound collapses exactly to dim G
    let twist = w.compose(&w_x.inverse())?;
    let codim_ok = cartan::d_of(&twist) == weyl::length(w) - weyl::length(w_x);
    let smooth_at_point = schubert_tangent_dim(w, w_x)? == shape.dim_gb() + weyl::length(w);
    Ok(TangentReport {
        w: w.serialized(),
        w_x: w_x.serialized(),
        delta_bound,
        dominant_bound,
        smooth_certified: codim_ok && smooth_at_point,
    })
}

/// Singularity criterion at a dominant point with invariant `w_x`: singular
/// exactly when the displacement rank of `w_x w0` falls short of its length.
pub fn singularity_verdict(w_x: &WeylElement) -> bool {
    let w0 = weyl::longest_element(w_x.shape());
    let wxw0 = w_x.compose(&w0).expect("same shape");
    cartan::d_of(&wxw0) < weyl::length(&wxw0)
}

/// One row of the tangent-table export.
#[derive(Clone, Debug, Serialize)]
pub struct TangentTableRow {
    pub w: String,
    pub v: String,
    pub dim_cell: usize,
    pub tangent_dim: usize,
    pub smooth: bool,
}

/// All `(w, v)` rows with `v <= w` for a shape, in canonical order.
pub fn tangent_table(shape: EmbeddingShape) -> Result<Vec<TangentTableRow>> {
    let mut all = WeylElement::all(shape);
    weyl::sort_canonical(&mut all);
    let mut rows = Vec::new();
    for w in &all {
        let dim_cell = shape.dim_gb() + weyl::length(w);
        for v in &all {
            if !weyl::bruhat_leq(v, w)? {
                continue;
            }
            let tangent_dim = schubert_tangent_dim(w, v)?;
            rows.push(TangentTableRow {
                w: w.serialized(),
                v: v.serialized(),
                dim_cell,
                tangent_dim,
                smooth: tangent_dim == dim_cell,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::{permutation_matrix, sample};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shape(n: usize, sigma: usize) -> EmbeddingShape {
        EmbeddingShape::new(n, sigma).unwrap()
    }

    fn perm(s: &str, n: usize) -> Perm {
        Perm::parse_one_line(s, n).unwrap()
    }

    #[test]
    fn rank_matrix_datum_invariants() {
        for w in WeylElement::all(shape(4, 1)) {
            assert!(SchubertDatum::new(w).invariants_hold());
        }
        for w in WeylElement::all(shape(3, 2)) {
            assert!(SchubertDatum::new(w).invariants_hold());
        }
    }

    #[test]
    fn open_cell_is_smooth() {
        let sh = shape(3, 1);
        for w in WeylElement::all(sh) {
            let dim = sh.dim_gb() + weyl::length(&w);
            assert_eq!(schubert_tangent_dim(&w, &w).unwrap(), dim, "at {w}");
        }
    }

    #[test]
    fn whole_space_for_longest() {
        let sh = shape(3, 1);
        let w0 = weyl::longest_element(sh);
        for v in WeylElement::all(sh) {
            assert_eq!(schubert_tangent_dim(&w0, &v).unwrap(), 2 * sh.dim_gb());
        }
    }

    #[test]
    fn singular_3412_at_identity() {
        let w = perm("3412", 4);
        let e = Perm::identity(4);
        // the classical excess fixed point: tangent 5 on a 4-dimensional cell
        assert_eq!(single_tangent_dim_fixed_point(&w, &e).unwrap(), 5);
        let w4231 = perm("4231", 4);
        assert_eq!(single_tangent_dim_fixed_point(&w4231, &e).unwrap(), 6);
    }

    #[test]
    fn combinatorial_equals_jacobian_on_s4() {
        let all = Perm::all(4);
        for w in &all {
            for v in &all {
                if !v.bruhat_leq(w) {
                    continue;
                }
                let wv = WeylElement::from_parts(vec![w.clone()]).unwrap();
                let vv = WeylElement::from_parts(vec![v.clone()]).unwrap();
                assert_eq!(
                    single_tangent_dim_fixed_point(w, v).unwrap(),
                    combinatorial_tangent_count(&wv, &vv).unwrap(),
                    "at w = {}, v = {}",
                    w.one_line_string(),
                    v.one_line_string()
                );
            }
        }
    }

    #[test]
    fn double_jacobian_matches_at_fixed_points_s3() {
        let sh = shape(3, 1);
        let all = WeylElement::all(sh);
        for w in &all {
            for v in &all {
                if !weyl::bruhat_leq(v, w).unwrap() {
                    continue;
                }
                let f1 = Flag::standard(sh);
                let f2 = f1
                    .right_multiply(&v.parts().iter().map(permutation_matrix).collect::<Vec<_>>())
                    .unwrap();
                assert_eq!(
                    jacobian_tangent_dim(w, &f1, &f2).unwrap(),
                    schubert_tangent_dim(w, v).unwrap(),
                    "at ({w}, {v})"
                );
            }
        }
    }

    #[test]
    fn double_jacobian_open_cell_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sh = shape(3, 1);
        for w in WeylElement::all(sh) {
            let g = sample::frame(&mut rng, sh);
            let f1 = Flag::new(g).unwrap();
            let f2 = f1
                .right_multiply(&w.parts().iter().map(permutation_matrix).collect::<Vec<_>>())
                .unwrap();
            // a generic point of the open cell: tangent dim = dim of the closure
            assert_eq!(
                jacobian_tangent_dim(&w, &f1, &f2).unwrap(),
                sh.dim_gb() + weyl::length(&w),
                "at {w}"
            );
        }
    }

    #[test]
    fn jacobian_rejects_outside_points() {
        let sh = shape(2, 1);
        let e = WeylElement::identity(sh);
        let f1 = Flag::standard(sh);
        let f2 = Flag::from_weyl(&weyl::longest_element(sh));
        assert!(jacobian_tangent_dim(&e, &f1, &f2).is_err());
    }

    #[test]
    fn smoothness_pattern_examples() {
        let sh3 = shape(3, 1);
        for w in WeylElement::all(sh3) {
            assert!(is_smooth_everywhere(&w));
        }
        let w3412 = WeylElement::from_parts(vec![perm("3412", 4)]).unwrap();
        let w4231 = WeylElement::from_parts(vec![perm("4231", 4)]).unwrap();
        assert!(!is_smooth_everywhere(&w3412));
        assert!(!is_smooth_everywhere(&w4231));
        assert!(is_smooth_everywhere(&weyl::longest_element(shape(5, 1))));
    }

    #[test]
    fn tangent_bound_examples() {
        let sh = shape(3, 1);
        let w0 = weyl::longest_element(sh);
        // w = wp = w0 collapses to dim G
        assert_eq!(tangent_bound(&w0, &w0).unwrap(), sh.dim_g());
        // w = w0, wp = e: 6 + 2 + 3 = 11 > 9 = dim G
        let e = WeylElement::identity(sh);
        assert_eq!(tangent_bound(&w0, &e).unwrap(), 11);
    }

    #[test]
    fn tangent_report_examples() {
        let sh = shape(3, 1);
        let w0 = weyl::longest_element(sh);
        let rep = trianguline_tangent_report(&w0, &w0).unwrap();
        assert_eq!(rep.delta_bound, 0);
        assert_eq!(rep.dominant_bound, Some(0));
        assert!(rep.smooth_certified);
        let e = WeylElement::identity(sh);
        let rep = trianguline_tangent_report(&w0, &e).unwrap();
        assert_eq!(rep.dominant_bound, Some(2)); // lg(w0) - d_{w0} = 3 - 1
        assert_eq!(rep.delta_bound, 2); // the transfer agrees with the dominant form
        assert!(!rep.smooth_certified);
        // n = 2: excess 0 for every w_x
        let sh2 = shape(2, 1);
        let w02 = weyl::longest_element(sh2);
        for wx in WeylElement::all(sh2) {
            let rep = trianguline_tangent_report(&w02, &wx).unwrap();
            assert_eq!(rep.dominant_bound, Some(0));
        }
    }

    #[test]
    fn singularity_examples() {
        let sh = shape(3, 1);
        let w0 = weyl::longest_element(sh);
        assert!(!singularity_verdict(&w0));
        assert!(singularity_verdict(&WeylElement::identity(sh)));
        let sh2 = shape(2, 1);
        for wx in WeylElement::all(sh2) {
            assert!(!singularity_verdict(&wx));
        }
    }
}
