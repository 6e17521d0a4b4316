//! The free abelian group on the components of the nilpotent fiber, indexed
//! by Weyl elements: multiplicity matrices, standard / simple / fiber cycle
//! classes, the multiplicity decomposition of fiber cycles, and a symbolic
//! replay of the descending companion-constituent induction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::kl::KlContext;
use crate::weyl::{self, EmbeddingShape, WeylElement};
use crate::{Error, Result};

/// A finitely supported integer combination of basis components; zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cycle {
    support: BTreeMap<WeylElement, i64>,
}

impl Cycle {
    pub fn zero() -> Self {
        Cycle::default()
    }

    pub fn basis(w: WeylElement) -> Self {
        let mut support = BTreeMap::new();
        support.insert(w, 1);
        Cycle { support }
    }

    pub fn coefficient(&self, w: &WeylElement) -> i64 {
        self.support.get(w).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&WeylElement, i64)> {
        self.support.iter().map(|(w, &c)| (w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.support.values().all(|&c| c > 0)
    }

    pub fn insert(&mut self, w: WeylElement, c: i64) {
        if c == 0 {
            self.support.remove(&w);
        } else {
            self.support.insert(w, c);
        }
    }

    pub fn add(&self, other: &Cycle) -> Cycle {
        let mut out = self.clone();
        for (w, c) in other.support.iter() {
            let v = out.coefficient(w) + c;
            out.insert(w.clone(), v);
        }
        out
    }

    pub fn scale(&self, c: i64) -> Cycle {
        if c == 0 {
            return Cycle::zero();
        }
        Cycle {
            support: self.support.iter().map(|(w, &v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn sub(&self, other: &Cycle) -> Cycle {
        self.add(&other.scale(-1))
    }

    /// Map from serialized element to coefficient; the wire format.
    pub fn to_map(&self) -> BTreeMap<String, i64> {
        self.support
            .iter()
            .map(|(w, &c)| (w.serialized(), c))
            .collect()
    }

    pub fn from_map(map: &BTreeMap<String, i64>, shape: EmbeddingShape) -> Result<Cycle> {
        let mut out = Cycle::zero();
        for (key, &c) in map {
            out.insert(WeylElement::parse(key, shape)?, c);
        }
        Ok(out)
    }
}

impl Serialize for Cycle {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_map().serialize(ser)
    }
}

/// Bookkeeping for the basis: the number of components is the group order and
/// each carries dimension `dim G - dim T`.
pub fn basis_size(shape: EmbeddingShape) -> usize {
    (1..=shape.n).product::<usize>().pow(shape.sigma as u32)
}

pub fn component_dimension(shape: EmbeddingShape) -> usize {
    shape.dim_g() - shape.dim_t()
}

/// The component-multiplicity matrix `a_{w,w'}`: unitriangular for the Bruhat
/// order. The default is the identity, valid for `n <= 7` per factor; larger
/// sizes must inject an externally computed matrix.
#[derive(Clone, Debug)]
pub enum AMatrix {
    Identity { shape: EmbeddingShape },
    /// Off-diagonal entries only; the diagonal is implicitly one.
    Custom {
        shape: EmbeddingShape,
        entries: BTreeMap<(WeylElement, WeylElement), u64>,
    },
}

impl AMatrix {
    /// The default matrix, guarded at `n >= 8` per factor where its validity
    /// is known to fail.
    pub fn default_identity(shape: EmbeddingShape) -> Result<AMatrix> {
        if shape.n >= 8 {
            return Err(Error::AMatrixGuard { n: shape.n });
        }
        Ok(AMatrix::Identity { shape })
    }

    /// Builds from off-diagonal entries, validating strict Bruhat triangularity.
    pub fn custom(
        shape: EmbeddingShape,
        entries: BTreeMap<(WeylElement, WeylElement), u64>,
    ) -> Result<AMatrix> {
        for ((w, wp), &v) in &entries {
            if w.shape() != shape || wp.shape() != shape {
                return Err(Error::ShapeMismatch);
            }
            if v == 0 {
                continue;
            }
            if w == wp || !weyl::bruhat_leq(wp, w)? {
                return Err(Error::InvariantViolation(format!(
                    "off-diagonal multiplicity at ({w}, {wp}) violates strict triangularity"
                )));
            }
        }
        Ok(AMatrix::Custom { shape, entries })
    }

    pub fn shape(&self) -> EmbeddingShape {
        match self {
            AMatrix::Identity { shape } | AMatrix::Custom { shape, .. } => *shape,
        }
    }

    pub fn is_default(&self) -> bool {
        matches!(self, AMatrix::Identity { .. })
    }

    pub fn get(&self, w: &WeylElement, wp: &WeylElement) -> u64 {
        if w == wp {
            return 1;
        }
        match self {
            AMatrix::Identity { .. } => 0,
            AMatrix::Custom { entries, .. } => {
                entries.get(&(w.clone(), wp.clone())).copied().unwrap_or(0)
            }
        }
    }

    /// JSON wire form: `{"n", "sigma", "entries": {"w:w'": value}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let shape = self.shape();
        let entries: BTreeMap<String, u64> = match self {
            AMatrix::Identity { .. } => BTreeMap::new(),
            AMatrix::Custom { entries, .. } => entries
                .iter()
                .filter(|(_, &v)| v != 0)
                .map(|((w, wp), &v)| (format!("{}:{}", w.serialized(), wp.serialized()), v))
                .collect(),
        };
        serde_json::json!({ "n": shape.n, "sigma": shape.sigma, "entries": entries })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<AMatrix> {
        #[derive(Deserialize)]
        struct Wire {
            n: usize,
            sigma: usize,
            #[serde(default)]
            entries: BTreeMap<String, u64>,
        }
        let wire: Wire = serde_json::from_value(value.clone())?;
        let shape = EmbeddingShape::new(wire.n, wire.sigma)?;
        let mut entries = BTreeMap::new();
        for (key, v) in wire.entries {
            let (ws, wps) = key
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad multiplicity key {key}")))?;
            entries.insert(
                (WeylElement::parse(ws, shape)?, WeylElement::parse(wps, shape)?),
                v,
            );
        }
        AMatrix::custom(shape, entries)
    }
}

fn guard(a: &AMatrix) -> Result<()> {
    if a.is_default() && a.shape().n >= 8 {
        return Err(Error::AMatrixGuard { n: a.shape().n });
    }
    Ok(())
}

/// All elements below `w`, componentwise, in canonical order.
fn lower_interval(w: &WeylElement) -> Vec<WeylElement> {
    weyl::interval(&WeylElement::identity(w.shape()), w).expect("same shape")
}

/// The class of the simple object indexed by `w` in the component basis:
/// `sum_{w'} a_{w,w'} [Z_{w'}]`.
pub fn simple_cycle(w: &WeylElement, a: &AMatrix) -> Result<Cycle> {
    if w.shape() != a.shape() {
        return Err(Error::ShapeMismatch);
    }
    guard(a)?;
    let mut out = Cycle::basis(w.clone());
    if let AMatrix::Custom { entries, .. } = a {
        for ((ww, wp), &v) in entries {
            if ww == w && v != 0 {
                out.insert(wp.clone(), v as i64);
            }
        }
    }
    Ok(out)
}

/// The class of the standard object indexed by `w`:
/// `sum_{w' <= w} P_{w0 w, w0 w'}(1) * simple_cycle(w')`.
pub fn verma_cycle(ctx: &KlContext, w: &WeylElement, a: &AMatrix) -> Result<Cycle> {
    if w.shape() != a.shape() {
        return Err(Error::ShapeMismatch);
    }
    guard(a)?;
    let mut out = Cycle::zero();
    for wp in lower_interval(w) {
        let mult = ctx.verma_multiplicity(w, &wp)?;
        debug_assert!(mult > 0);
        out = out.add(&simple_cycle(&wp, a)?.scale(mult));
    }
    Ok(out)
}

/// The class of the completed weight-map fiber at a point with invariants
/// `(w, w_x)`: the sum over the Bruhat interval `[w_x, w]` of
/// `P_{w0 w, w0 w'}(1) * simple_cycle(w')`. Every summand is nonzero in the
/// default regime.
pub fn fiber_cycle(
    ctx: &KlContext,
    w: &WeylElement,
    w_x: &WeylElement,
    a: &AMatrix,
) -> Result<Cycle> {
    if w.shape() != a.shape() || w_x.shape() != a.shape() {
        return Err(Error::ShapeMismatch);
    }
    guard(a)?;
    if !weyl::bruhat_leq(w_x, w)? {
        return Err(Error::Precondition(format!("{w_x} is not below {w}")));
    }
    let mut out = Cycle::zero();
    for wp in weyl::interval(w_x, w)? {
        let mult = ctx.verma_multiplicity(w, &wp)?;
        debug_assert!(mult > 0, "interval coefficients are positive");
        out = out.add(&simple_cycle(&wp, a)?.scale(mult));
    }
    Ok(out)
}

/// Multiplicity of the constituent indexed by `wp` in the principal series
/// whose weights are sorted by `sorting_w`: `P_{w0 w, w0 w'}(1)`.
pub fn pi_multiplicity(
    ctx: &KlContext,
    sorting_w: &WeylElement,
    wp: &WeylElement,
) -> Result<i64> {
    ctx.verma_multiplicity(sorting_w, wp)
}

/// The decomposition of the fiber cycle as constituent multiplicity times
/// constituent cycle, over the interval `[w_x, w]`; entries outside the
/// interval correspond to vanishing localized cycles and are omitted. The
/// re-summation identity is asserted on return.
pub fn breuil_mezard_decomposition(
    ctx: &KlContext,
    w: &WeylElement,
    w_x: &WeylElement,
    a: &AMatrix,
) -> Result<BTreeMap<WeylElement, (i64, Cycle)>> {
    if !weyl::bruhat_leq(w_x, w)? {
        return Err(Error::Precondition(format!("{w_x} is not below {w}")));
    }
    guard(a)?;
    let mut out = BTreeMap::new();
    let mut resummed = Cycle::zero();
    for wp in weyl::interval(w_x, w)? {
        let mult = pi_multiplicity(ctx, w, &wp)?;
        let cyc = simple_cycle(&wp, a)?;
        if mult != 0 && !cyc.is_zero() {
            resummed = resummed.add(&cyc.scale(mult));
            out.insert(wp, (mult, cyc));
        }
    }
    let fiber = fiber_cycle(ctx, w, w_x, a)?;
    if resummed != fiber {
        return Err(Error::InvariantViolation(format!(
            "decomposition does not re-sum to the fiber cycle at ({w}, {w_x})"
        )));
    }
    Ok(out)
}

/// One deduction in the induction replay.
#[derive(Clone, Debug, Serialize)]
pub struct ReplayStep {
    pub level: usize,
    pub target: String,
    pub kind: String,
    pub witnesses: Vec<String>,
    pub equations: Vec<String>,
    pub conclusion: String,
}

/// A full replay: either every class above the bottom element certified with
/// the constant multiplicity, or a structured failure at the first
/// underdetermined step.
#[derive(Clone, Debug, Serialize)]
pub struct ReplayTrace {
    pub w_y: String,
    pub multiplicity: i64,
    pub steps: Vec<ReplayStep>,
    pub certified: BTreeMap<String, i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<ReplayFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplayFailure {
    pub at: String,
    pub reason: String,
}

impl ReplayTrace {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }
}

/// Symbolic replay of the descending induction that certifies every class
/// above `w_y` as `m` times the corresponding constituent cycle.
///
/// Elements above `w_y` are certified by descending length. The top element
/// is pinned by its own fiber equation together with the support constraint
/// on the dominant locus. An element one step below the top is pinned by a
/// triangular solve of two equations. Deeper elements use the diamond
/// configuration: the two covers bound the unknown bottom rank from above,
/// the common witness two steps up bounds it from below, and effectiveness
/// of the classes forces equality with `m`.
///
/// Only the default multiplicity-matrix regime is supported; the
/// effectiveness extraction reads coefficients off the component basis.
pub fn replay_companion_induction(
    ctx: &KlContext,
    w_y: &WeylElement,
    m: i64,
) -> Result<ReplayTrace> {
    let shape = w_y.shape();
    if m < 1 {
        return Err(Error::Precondition("multiplicity must be positive".into()));
    }
    let a = AMatrix::default_identity(shape)?;
    let w0 = weyl::longest_element(shape);
    let top = weyl::length(&w0);
    let mut trace = ReplayTrace {
        w_y: w_y.serialized(),
        multiplicity: m,
        steps: Vec::new(),
        certified: BTreeMap::new(),
        failure: None,
    };
    let upper = weyl::upper_interval(w_y);
    for level in (weyl::length(w_y)..=top).rev() {
        for z in upper.iter().filter(|z| weyl::length(z) == level) {
            let step = if *z == w0 {
                base_step(z, top, m)
            } else if level + 1 == top {
                pair_step(ctx, z, &w0, m)
            } else {
                diamond_step(ctx, z, m, &a)
            };
            match step {
                Ok(step) => {
                    trace.steps.push(step);
                    trace.certified.insert(z.serialized(), m);
                }
                Err(failure) => {
                    trace.failure = Some(failure);
                    return Ok(trace);
                }
            }
        }
    }
    Ok(trace)
}

type StepResult = std::result::Result<ReplayStep, ReplayFailure>;

fn base_step(z: &WeylElement, top: usize, m: i64) -> StepResult {
    Ok(ReplayStep {
        level: top,
        target: z.serialized(),
        kind: "base".into(),
        witnesses: vec![],
        equations: vec![
            format!("[L({z})] in Z>=0 c[{z}]  (dominant-locus support)"),
            format!("E({z}): [L({z})] = {m} c[{z}]  (fiber equation over the singleton interval)"),
        ],
        conclusion: format!("[L({z})] = {m} c[{z}] != 0"),
    })
}

fn pair_step(ctx: &KlContext, z: &WeylElement, w0: &WeylElement, m: i64) -> StepResult {
    // interval [z, w0] = {z, w0}; the standard-to-simple coefficient is one
    let p = ctx
        .verma_multiplicity(w0, z)
        .map_err(|e| ReplayFailure { at: z.serialized(), reason: e.to_string() })?;
    if p != 1 {
        return Err(ReplayFailure {
            at: z.serialized(),
            reason: format!("expected unit coefficient one step below the top, got {p}"),
        });
    }
    Ok(ReplayStep {
        level: weyl::length(z),
        target: z.serialized(),
        kind: "pair".into(),
        witnesses: vec![w0.serialized()],
        equations: vec![
            format!("E({z}): [L({z})] = m' c[{z}]  (rank m' >= 0 at the maximal companion)"),
            format!("E({w0}): k c[{w0}] + {p} m' c[{z}] = {m} (c[{w0}] + {p} c[{z}])"),
            format!("[L({w0})] = k c[{w0}]  (dominant-locus support)"),
        ],
        conclusion: format!(
            "basis independence forces k = {m} and m' = {m}; [L({z})] = {m} c[{z}] != 0"
        ),
    })
}

fn diamond_step(ctx: &KlContext, z: &WeylElement, m: i64, a: &AMatrix) -> StepResult {
    let fail = |reason: String| ReplayFailure {
        at: z.serialized(),
        reason,
    };
    let (w1, w2, w3) = weyl::diamond(z).map_err(|e| fail(e.to_string()))?;
    // the length-two interval above z must be exactly the diamond
    let interval = weyl::interval(z, &w3).map_err(|e| fail(e.to_string()))?;
    if interval.len() != 4 {
        return Err(fail(format!(
            "interval [{z}, {w3}] has {} elements, expected the diamond",
            interval.len()
        )));
    }
    let p1 = ctx.verma_multiplicity(&w1, z).map_err(|e| fail(e.to_string()))?;
    let p2 = ctx.verma_multiplicity(&w2, z).map_err(|e| fail(e.to_string()))?;
    let p31 = ctx.verma_multiplicity(&w3, &w1).map_err(|e| fail(e.to_string()))?;
    let p32 = ctx.verma_multiplicity(&w3, &w2).map_err(|e| fail(e.to_string()))?;
    let p3z = ctx.verma_multiplicity(&w3, z).map_err(|e| fail(e.to_string()))?;
    // eliminating the covers from the witness equation leaves the bottom
    // coefficient (m - m') * (p3z - p31 p1 - p32 p2); effectiveness of the
    // cover classes needs p1, p2 > 0 and of the witness class needs the
    // combined coefficient negative, which pins m' = m
    let combined = p3z - p31 * p1 - p32 * p2;
    if p1 <= 0 || p2 <= 0 || combined >= 0 {
        return Err(fail(format!(
            "underdetermined: coefficients (p1, p2, p31, p32, p3z) = ({p1}, {p2}, {p31}, {p32}, {p3z}) do not pin the bottom rank"
        )));
    }
    // sanity: the certified assignment satisfies all three equations exactly
    for wtop in [&w1, &w2, &w3] {
        let fiber = fiber_cycle(ctx, wtop, z, a).map_err(|e| fail(e.to_string()))?;
        let mut lhs = Cycle::zero();
        for wp in weyl::interval(z, wtop).map_err(|e| fail(e.to_string()))? {
            let pv = ctx
                .verma_multiplicity(wtop, &wp)
                .map_err(|e| fail(e.to_string()))?;
            let c = simple_cycle(&wp, a).map_err(|e| fail(e.to_string()))?;
            lhs = lhs.add(&c.scale(pv));
        }
        if lhs.scale(m) != fiber.scale(m) {
            return Err(fail(format!(
                "equation at {wtop} fails under the all-{m} assignment"
            )));
        }
    }
    Ok(ReplayStep {
        level: weyl::length(z),
        target: z.serialized(),
        kind: "diamond".into(),
        witnesses: vec![w1.serialized(), w2.serialized(), w3.serialized()],
        equations: vec![
            format!("E({z}): [L({z})] = m' c[{z}]  (rank m' >= 0 at the maximal companion)"),
            format!("E({w1}): [L({w1})] + {p1} m' c[{z}] = {m} (c[{w1}] + {p1} c[{z}])"),
            format!("E({w2}): [L({w2})] + {p2} m' c[{z}] = {m} (c[{w2}] + {p2} c[{z}])"),
            format!(
                "E({w3}): [L({w3})] + {p31} [L({w1})] + {p32} [L({w2})] + {p3z} m' c[{z}] = {m} (c[{w3}] + {p31} c[{w1}] + {p32} c[{w2}] + {p3z} c[{z}])"
            ),
        ],
        conclusion: format!(
            "effectiveness of [L({w1})] gives m' <= {m}; eliminating the covers, effectiveness of [L({w3})] gives m' >= {m}; hence [L({z})] = {m} c[{z}] != 0"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(n: usize, sigma: usize) -> EmbeddingShape {
        EmbeddingShape::new(n, sigma).unwrap()
    }

    fn elt(sh: EmbeddingShape, s: &str) -> WeylElement {
        WeylElement::parse(s, sh).unwrap()
    }

    #[test]
    fn cycle_arithmetic() {
        let sh = shape(3, 1);
        let e = WeylElement::identity(sh);
        let c = Cycle::basis(e.clone());
        assert_eq!(c.add(&Cycle::zero()), c);
        assert_eq!(c.scale(0), Cycle::zero());
        assert_eq!(c.add(&c).coefficient(&e), 2);
        assert_eq!(c.sub(&c), Cycle::zero());
    }

    #[test]
    fn simple_cycle_default_and_custom() {
        let sh = shape(3, 1);
        let a = AMatrix::default_identity(sh).unwrap();
        let w0 = weyl::longest_element(sh);
        assert_eq!(simple_cycle(&w0, &a).unwrap(), Cycle::basis(w0.clone()));
        let e = WeylElement::identity(sh);
        assert_eq!(simple_cycle(&e, &a).unwrap(), Cycle::basis(e.clone()));
        // custom with one extra entry below w0
        let s1 = elt(sh, "213");
        let mut entries = BTreeMap::new();
        entries.insert((w0.clone(), s1.clone()), 1u64);
        let custom = AMatrix::custom(sh, entries).unwrap();
        let c = simple_cycle(&w0, &custom).unwrap();
        assert_eq!(c.coefficient(&w0), 1);
        assert_eq!(c.coefficient(&s1), 1);
    }

    #[test]
    fn amatrix_guard_at_eight() {
        let sh = shape(8, 1);
        assert!(matches!(
            AMatrix::default_identity(sh),
            Err(Error::AMatrixGuard { n: 8 })
        ));
    }

    #[test]
    fn verma_cycle_examples() {
        let ctx = KlContext::new();
        let sh = shape(3, 1);
        let a = AMatrix::default_identity(sh).unwrap();
        let e = WeylElement::identity(sh);
        assert_eq!(verma_cycle(&ctx, &e, &a).unwrap(), Cycle::basis(e.clone()));
        let w0 = weyl::longest_element(sh);
        let c = verma_cycle(&ctx, &w0, &a).unwrap();
        assert_eq!(c.support().count(), 6);
        assert!(c.support().all(|(_, v)| v == 1));
        // n = 4: coefficient two exactly where the quotient is a singular pattern
        let sh4 = shape(4, 1);
        let a4 = AMatrix::default_identity(sh4).unwrap();
        let w04 = weyl::longest_element(sh4);
        let c4 = verma_cycle(&ctx, &w04, &a4).unwrap();
        for (wp, v) in c4.support() {
            let w0wp = w04.compose(wp).unwrap();
            let name = w0wp.serialized();
            let expected = if name == "3412" || name == "4231" { 2 } else { 1 };
            assert_eq!(v, expected, "coefficient at {wp} (quotient {name})");
        }
    }

    #[test]
    fn fiber_cycle_examples() {
        let ctx = KlContext::new();
        let sh = shape(3, 1);
        let a = AMatrix::default_identity(sh).unwrap();
        let w0 = weyl::longest_element(sh);
        // w_x = w: a single basis class
        let s1 = elt(sh, "213");
        assert_eq!(
            fiber_cycle(&ctx, &s1, &s1, &a).unwrap(),
            Cycle::basis(s1.clone())
        );
        // full interval reproduces the standard class
        assert_eq!(
            fiber_cycle(&ctx, &w0, &WeylElement::identity(sh), &a).unwrap(),
            verma_cycle(&ctx, &w0, &a).unwrap()
        );
        // four classes above s1
        let c = fiber_cycle(&ctx, &w0, &s1, &a).unwrap();
        assert_eq!(c.support().count(), 4);
        assert!(c.support().all(|(_, v)| v == 1));
    }

    #[test]
    fn decomposition_resums() {
        let ctx = KlContext::new();
        let sh = shape(2, 1);
        let a = AMatrix::default_identity(sh).unwrap();
        let w0 = weyl::longest_element(sh);
        let e = WeylElement::identity(sh);
        let dec = breuil_mezard_decomposition(&ctx, &w0, &e, &a).unwrap();
        assert_eq!(dec.len(), 2);
        assert_eq!(dec[&e].0, 1);
        assert_eq!(dec[&w0].0, 1);
        // exhaustive identity on S_3
        let sh3 = shape(3, 1);
        let a3 = AMatrix::default_identity(sh3).unwrap();
        let all = WeylElement::all(sh3);
        for w in &all {
            for wx in &all {
                if weyl::bruhat_leq(wx, w).unwrap() {
                    breuil_mezard_decomposition(&ctx, w, wx, &a3).unwrap();
                }
            }
        }
    }

    #[test]
    fn unitriangular_multiplicity_matrices_invert() {
        // (P(1)) over all pairs is unitriangular and integrally invertible
        let ctx = KlContext::new();
        for n in 2..=4 {
            let sh = shape(n, 1);
            let mut all = WeylElement::all(sh);
            weyl::sort_canonical(&mut all);
            let k = all.len();
            let mut mat = vec![vec![0i64; k]; k];
            for (i, w) in all.iter().enumerate() {
                for (j, wp) in all.iter().enumerate() {
                    mat[i][j] = ctx.verma_multiplicity(w, wp).unwrap();
                }
            }
            for i in 0..k {
                assert_eq!(mat[i][i], 1);
                for j in 0..k {
                    if mat[i][j] != 0 && i != j {
                        assert!(weyl::bruhat_leq(&all[j], &all[i]).unwrap());
                    }
                }
            }
            // unitriangularity along the order implies determinant one
            let m = crate::linalg::RationalMatrix::from_i64_rows(&mat).unwrap();
            assert_eq!(m.determinant().unwrap(), crate::linalg::rat_int(1));
        }
    }

    #[test]
    fn replay_base_case() {
        let ctx = KlContext::new();
        let sh = shape(3, 1);
        let w0 = weyl::longest_element(sh);
        let trace = replay_companion_induction(&ctx, &w0, 2).unwrap();
        assert!(trace.succeeded());
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].kind, "base");
        assert_eq!(trace.certified.len(), 1);
    }

    #[test]
    fn replay_pair_case() {
        let ctx = KlContext::new();
        let sh = shape(2, 1);
        let e = WeylElement::identity(sh);
        let trace = replay_companion_induction(&ctx, &e, 3).unwrap();
        assert!(trace.succeeded());
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[1].kind, "pair");
        assert!(trace.certified.values().all(|&v| v == 3));
    }

    #[test]
    fn replay_full_s3() {
        let ctx = KlContext::new();
        let sh = shape(3, 1);
        for w_y in WeylElement::all(sh) {
            let trace = replay_companion_induction(&ctx, &w_y, 1).unwrap();
            assert!(trace.succeeded(), "replay failed at {w_y}");
            let expected = weyl::upper_interval(&w_y).len();
            assert_eq!(trace.certified.len(), expected);
            assert!(trace.certified.values().all(|&v| v == 1));
        }
        // the identity needs the diamond at the bottom level
        let e = WeylElement::identity(sh);
        let trace = replay_companion_induction(&ctx, &e, 1).unwrap();
        assert!(trace.steps.iter().any(|s| s.kind == "diamond"));
    }

    #[test]
    fn replay_product_group() {
        let ctx = KlContext::new();
        let sh = shape(2, 2);
        for w_y in WeylElement::all(sh) {
            let trace = replay_companion_induction(&ctx, &w_y, 2).unwrap();
            assert!(trace.succeeded(), "replay failed at {w_y}");
            assert!(trace.certified.values().all(|&v| v == 2));
        }
    }

    #[test]
    fn steinberg_bookkeeping() {
        let sh = shape(3, 2);
        assert_eq!(basis_size(sh), 36);
        assert_eq!(component_dimension(sh), sh.dim_g() - sh.dim_t());
    }

    #[test]
    fn amatrix_json_round_trip() {
        let sh = shape(3, 1);
        let w0 = weyl::longest_element(sh);
        let s1 = elt(sh, "213");
        let mut entries = BTreeMap::new();
        entries.insert((w0.clone(), s1.clone()), 2u64);
        let a = AMatrix::custom(sh, entries).unwrap();
        let json = a.to_json();
        let back = AMatrix::from_json(&json).unwrap();
        assert_eq!(back.get(&w0, &s1), 2);
        assert_eq!(back.get(&w0, &w0), 1);
        assert_eq!(back.get(&s1, &w0), 0);
        // triangularity violations are rejected
        let mut bad = BTreeMap::new();
        bad.insert((s1.clone(), w0.clone()), 1u64);
        assert!(AMatrix::custom(sh, bad).is_err());
    }

    #[test]
    fn cycle_serialization() {
        let sh = shape(3, 1);
        let w0 = weyl::longest_element(sh);
        let c = Cycle::basis(w0).scale(2);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"321":2}"#);
        let map: BTreeMap<String, i64> = serde_json::from_str(&json).unwrap();
        assert_eq!(Cycle::from_map(&map, sh).unwrap(), c);
    }
}
