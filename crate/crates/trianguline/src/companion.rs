//! Crystalline generic parameters and their companion points: genericity of
//! the eigenvalue ratios, the flag invariant of a refinement, enumeration of
//! the companion set over the Bruhat upper interval, and exact symbolic
//! character bookkeeping including the normalizing twist.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::flags::{relative_position, Flag};
use crate::linalg::{rat_from_string, rat_to_string, Rat};
use crate::perm::Perm;
use crate::weyl::{self, EmbeddingShape, IntegralWeight, WeylElement};
use crate::{Error, Result};

/// A character of the multiplicative group of the base field with exact
/// bookkeeping: one algebraic weight per embedding, the value of the
/// unramified part on a uniformizer, and symbolic powers of the cyclotomic
/// character and of the norm character. Multiplication adds the exponent-like
/// fields and multiplies the unramified values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub weights: Vec<i64>,
    pub unr_value: Rat,
    pub eps_power: i64,
    pub modulus_power: i64,
}

impl Character {
    pub fn algebraic(weights: Vec<i64>, unr_value: Rat) -> Self {
        Character {
            weights,
            unr_value,
            eps_power: 0,
            modulus_power: 0,
        }
    }

    pub fn mul(&self, other: &Character) -> Result<Character> {
        if self.weights.len() != other.weights.len() {
            return Err(Error::ShapeMismatch);
        }
        Ok(Character {
            weights: self
                .weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a + b)
                .collect(),
            unr_value: &self.unr_value * &other.unr_value,
            eps_power: self.eps_power + other.eps_power,
            modulus_power: self.modulus_power + other.modulus_power,
        })
    }

    /// The derivative: the algebraic weight per embedding, counting the
    /// cyclotomic character with weight one and the norm character with zero.
    pub fn derivative(&self) -> Vec<i64> {
        self.weights.iter().map(|w| w + self.eps_power).collect()
    }
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = ser.serialize_struct("Character", 4)?;
        s.serialize_field("weights", &self.weights)?;
        s.serialize_field("unr", &rat_to_string(&self.unr_value))?;
        s.serialize_field("eps_power", &self.eps_power)?;
        s.serialize_field("modulus_power", &self.modulus_power)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            weights: Vec<i64>,
            unr: String,
            #[serde(default)]
            eps_power: i64,
            #[serde(default)]
            modulus_power: i64,
        }
        let wire = Wire::deserialize(de)?;
        Ok(Character {
            weights: wire.weights,
            unr_value: rat_from_string(&wire.unr).map_err(serde::de::Error::custom)?,
            eps_power: wire.eps_power,
            modulus_power: wire.modulus_power,
        })
    }
}

/// A crystalline parameter: strictly increasing weight rows, nonzero
/// eigenvalues of the linearized Frobenius, and the residue cardinality.
#[derive(Clone, Debug)]
pub struct CrystallineParam {
    pub shape: EmbeddingShape,
    pub h: IntegralWeight,
    pub phi: Vec<Rat>,
    pub q: u64,
}

impl CrystallineParam {
    pub fn new(shape: EmbeddingShape, h: IntegralWeight, phi: Vec<Rat>, q: u64) -> Result<Self> {
        if h.shape() != shape || phi.len() != shape.n {
            return Err(Error::ShapeMismatch);
        }
        if !h.rows_strictly_increasing() {
            return Err(Error::Precondition(
                "weight rows must be strictly increasing".into(),
            ));
        }
        if phi.iter().any(Zero::is_zero) {
            return Err(Error::Precondition("eigenvalues must be nonzero".into()));
        }
        if q < 2 {
            return Err(Error::Precondition("residue cardinality must be >= 2".into()));
        }
        Ok(CrystallineParam { shape, h, phi, q })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.shape.n,
            "sigma": self.shape.sigma,
            "h": self.h.rows,
            "phi": self.phi.iter().map(rat_to_string).collect::<Vec<_>>(),
            "q": self.q,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<CrystallineParam> {
        #[derive(Deserialize)]
        struct Wire {
            n: usize,
            sigma: usize,
            h: Vec<Vec<i64>>,
            phi: Vec<String>,
            q: u64,
        }
        let wire: Wire = serde_json::from_value(value.clone())?;
        let shape = EmbeddingShape::new(wire.n, wire.sigma)?;
        let phi = wire
            .phi
            .iter()
            .map(|s| rat_from_string(s))
            .collect::<Result<Vec<_>>>()?;
        CrystallineParam::new(shape, IntegralWeight::new(wire.h)?, phi, wire.q)
    }
}

/// A genericity violation, reporting the first bad eigenvalue pair.
#[derive(Clone, Debug, Serialize)]
pub struct GenericityViolation {
    pub i: usize,
    pub j: usize,
    pub ratio: String,
}

/// Checks that no eigenvalue ratio over an ordered pair is one or the residue
/// cardinality. Symmetric by construction: both orders of every pair are
/// tested.
pub fn validate_generic(p: &CrystallineParam) -> std::result::Result<(), GenericityViolation> {
    let q = Rat::from(num_bigint::BigInt::from(p.q));
    for i in 0..p.phi.len() {
        for j in 0..p.phi.len() {
            if i == j {
                continue;
            }
            let ratio = &p.phi[i] / &p.phi[j];
            if ratio.is_one() || ratio == q {
                return Err(GenericityViolation {
                    i: i + 1,
                    j: j + 1,
                    ratio: rat_to_string(&ratio),
                });
            }
        }
    }
    Ok(())
}

fn genericity(p: &CrystallineParam) -> Result<()> {
    validate_generic(p).map_err(|v| Error::GenericityViolation {
        i: v.i,
        j: v.j,
        ratio: v.ratio,
    })
}

/// The flag invariant of a refinement: the relative position of the
/// refinement flag against the Hodge flag.
pub fn wx_from_flags(
    p: &CrystallineParam,
    refinement_flag: &Flag,
    hodge_flag: &Flag,
) -> Result<WeylElement> {
    if refinement_flag.shape() != p.shape || hodge_flag.shape() != p.shape {
        return Err(Error::ShapeMismatch);
    }
    relative_position(refinement_flag, hodge_flag)
}

/// One companion point: the indexing element and its character tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompanionPoint {
    pub w: String,
    pub characters: Vec<Character>,
}

/// The companion set of a parameter with invariant `w_x`: for every `w` in
/// the upper interval of `w_x`, the tuple whose component `i` carries the
/// `i`-th column of `w(h)` and the `i`-th eigenvalue.
pub fn companion_set(p: &CrystallineParam, w_x: &WeylElement) -> Result<Vec<CompanionPoint>> {
    if w_x.shape() != p.shape {
        return Err(Error::ShapeMismatch);
    }
    genericity(p)?;
    let mut out = Vec::new();
    for w in weyl::upper_interval(w_x) {
        let wh = weyl::apply_to_weights(&w, &p.h)?;
        let characters = (0..p.shape.n)
            .map(|i| {
                Character::algebraic(
                    wh.rows.iter().map(|row| row[i]).collect(),
                    p.phi[i].clone(),
                )
            })
            .collect();
        out.push(CompanionPoint {
            w: w.serialized(),
            characters,
        });
    }
    Ok(out)
}

/// The union over refinements of the companion sets, with the eigenvalue
/// tuple reordered per refinement and duplicates (by full character equality)
/// merged. `refinement_wx` assigns the flag invariant to each refinement.
pub fn all_points_over(
    p: &CrystallineParam,
    refinement_wx: &BTreeMap<Perm, WeylElement>,
) -> Result<Vec<CompanionPoint>> {
    genericity(p)?;
    let mut out: Vec<CompanionPoint> = Vec::new();
    for (ordering, w_x) in refinement_wx {
        if ordering.n() != p.shape.n || w_x.shape() != p.shape {
            return Err(Error::ShapeMismatch);
        }
        let reordered = CrystallineParam {
            shape: p.shape,
            h: p.h.clone(),
            phi: (0..p.shape.n)
                .map(|i| p.phi[ordering.apply(i)].clone())
                .collect(),
            q: p.q,
        };
        for point in companion_set(&reordered, w_x)? {
            if !out.iter().any(|q| q.characters == point.characters) {
                out.push(point);
            }
        }
    }
    Ok(out)
}

/// The normalizing twist: component `i` gains `i - 1` powers of the
/// cyclotomic character and `n + 1 - 2i` powers of the norm. Purely symbolic
/// and invertible; the residue cardinality is accepted for interface parity
/// but never evaluated.
pub fn iota_twist(chars: &[Character], _q: u64) -> Vec<Character> {
    let n = chars.len() as i64;
    chars
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let i = idx as i64 + 1;
            Character {
                weights: c.weights.clone(),
                unr_value: c.unr_value.clone(),
                eps_power: c.eps_power + (i - 1),
                modulus_power: c.modulus_power + (n + 1 - 2 * i),
            }
        })
        .collect()
}

/// Inverse of [`iota_twist`].
pub fn iota_untwist(chars: &[Character], _q: u64) -> Vec<Character> {
    let n = chars.len() as i64;
    chars
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let i = idx as i64 + 1;
            Character {
                weights: c.weights.clone(),
                unr_value: c.unr_value.clone(),
                eps_power: c.eps_power - (i - 1),
                modulus_power: c.modulus_power - (n + 1 - 2 * i),
            }
        })
        .collect()
}

/// The character tuple of a refinement at companion index `w`: weights
/// `w(h)`, unramified parts ordered by the refinement, then the normalizing
/// twist. Its derivative realizes the dot-shifted dominant weight built from
/// the reversed rows of `h`.
pub fn refinement_character(
    p: &CrystallineParam,
    ordering: &Perm,
    w: &WeylElement,
) -> Result<Vec<Character>> {
    if ordering.n() != p.shape.n || w.shape() != p.shape {
        return Err(Error::ShapeMismatch);
    }
    genericity(p)?;
    let wh = weyl::apply_to_weights(w, &p.h)?;
    let plain: Vec<Character> = (0..p.shape.n)
        .map(|i| {
            Character::algebraic(
                wh.rows.iter().map(|row| row[i]).collect(),
                p.phi[ordering.apply(i)].clone(),
            )
        })
        .collect();
    Ok(iota_twist(&plain, p.q))
}

/// The dominant weight `lambda` with `lambda_{tau,i} = h_{tau,n+1-i} + i - 1`.
pub fn dominant_lambda(h: &IntegralWeight) -> IntegralWeight {
    let n = h.shape().n;
    IntegralWeight {
        rows: h
            .rows
            .iter()
            .map(|row| (0..n).map(|i| row[n - 1 - i] + i as i64).collect())
            .collect(),
    }
}

/// The dot-shifted weight `w w0 . lambda` that the derivative of
/// [`refinement_character`] must reproduce componentwise.
pub fn expected_derivative(p: &CrystallineParam, w: &WeylElement) -> Result<IntegralWeight> {
    let lambda = dominant_lambda(&p.h);
    let w0 = weyl::longest_element(p.shape);
    weyl::dot_action(&w.compose(&w0)?, &lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rat_int};

    fn shape(n: usize, sigma: usize) -> EmbeddingShape {
        EmbeddingShape::new(n, sigma).unwrap()
    }

    fn param(n: usize, sigma: usize, phi: Vec<Rat>, q: u64) -> CrystallineParam {
        let h = IntegralWeight::new(
            (0..sigma)
                .map(|t| (0..n).map(|i| (i * (t + 2)) as i64).collect())
                .collect(),
        )
        .unwrap();
        CrystallineParam::new(shape(n, sigma), h, phi, q).unwrap()
    }

    #[test]
    fn genericity_examples() {
        let p = param(2, 1, vec![rat_int(1), rat_int(3)], 3);
        let err = validate_generic(&p).unwrap_err();
        assert_eq!(err.ratio, "3");
        let ok = param(2, 1, vec![rat_int(1), rat_int(2)], 5);
        assert!(validate_generic(&ok).is_ok());
        let dup = param(2, 1, vec![rat_int(2), rat_int(2)], 5);
        assert_eq!(validate_generic(&dup).unwrap_err().ratio, "1");
    }

    #[test]
    fn wx_from_flags_examples() {
        let p = param(3, 1, vec![rat_int(1), rat_int(2), rat_int(5)], 7);
        let std = Flag::standard(p.shape);
        assert!(wx_from_flags(&p, &std, &std).unwrap().is_identity());
        let rev = Flag::from_weyl(&weyl::longest_element(p.shape));
        assert_eq!(
            wx_from_flags(&p, &std, &rev).unwrap(),
            weyl::longest_element(p.shape)
        );
    }

    #[test]
    fn companion_set_examples() {
        let p = param(2, 1, vec![rat_int(1), rat_int(2)], 5);
        let w0 = weyl::longest_element(p.shape);
        assert_eq!(companion_set(&p, &w0).unwrap().len(), 1);
        let e = WeylElement::identity(p.shape);
        let set = companion_set(&p, &e).unwrap();
        assert_eq!(set.len(), 2);
        // weight rows (h1, h2) and (h2, h1): h = (0, 2) here
        let weight_cols: Vec<Vec<i64>> = set
            .iter()
            .map(|pt| pt.characters.iter().map(|c| c.weights[0]).collect())
            .collect();
        assert!(weight_cols.contains(&vec![0, 2]));
        assert!(weight_cols.contains(&vec![2, 0]));
        // the dominant companion is always present
        for wx in WeylElement::all(p.shape) {
            let set = companion_set(&p, &wx).unwrap();
            assert!(set.iter().any(|pt| pt.w == w0.serialized()));
        }
        // n = 3: four companions over a simple reflection
        let p3 = param(3, 1, vec![rat_int(1), rat_int(2), rat_int(5)], 7);
        let s1 = WeylElement::parse("213", p3.shape).unwrap();
        assert_eq!(companion_set(&p3, &s1).unwrap().len(), 4);
    }

    #[test]
    fn genericity_gate_on_companions() {
        let p = param(2, 1, vec![rat_int(1), rat_int(5)], 5);
        let e = WeylElement::identity(p.shape);
        assert!(matches!(
            companion_set(&p, &e),
            Err(Error::GenericityViolation { .. })
        ));
    }

    #[test]
    fn all_points_examples() {
        // n = 1: a single point regardless
        let p1 = CrystallineParam::new(
            shape(1, 1),
            IntegralWeight::new(vec![vec![4]]).unwrap(),
            vec![rat_int(3)],
            5,
        )
        .unwrap();
        let mut map = BTreeMap::new();
        map.insert(Perm::identity(1), WeylElement::identity(shape(1, 1)));
        assert_eq!(all_points_over(&p1, &map).unwrap().len(), 1);

        // n = 2, both refinements noncritical: two points total
        let p = param(2, 1, vec![rat_int(1), rat_int(2)], 5);
        let w0 = weyl::longest_element(p.shape);
        let mut map = BTreeMap::new();
        map.insert(Perm::identity(2), w0.clone());
        map.insert(Perm::longest(2), w0.clone());
        assert_eq!(all_points_over(&p, &map).unwrap().len(), 2);

        // one critical refinement contributes both its companions
        let mut map = BTreeMap::new();
        map.insert(Perm::identity(2), WeylElement::identity(p.shape));
        assert_eq!(all_points_over(&p, &map).unwrap().len(), 2);
    }

    #[test]
    fn iota_twist_examples() {
        // n = 1: identity
        let c1 = vec![Character::algebraic(vec![3], rat_int(2))];
        assert_eq!(iota_twist(&c1, 5), c1);
        // n = 2: powers (0, 1) of the cyclotomic and (1, -1) of the norm
        let c2 = vec![
            Character::algebraic(vec![0], rat_int(1)),
            Character::algebraic(vec![1], rat_int(2)),
        ];
        let twisted = iota_twist(&c2, 5);
        assert_eq!(twisted[0].eps_power, 0);
        assert_eq!(twisted[0].modulus_power, 1);
        assert_eq!(twisted[1].eps_power, 1);
        assert_eq!(twisted[1].modulus_power, -1);
        // round trip
        assert_eq!(iota_untwist(&twisted, 5), c2);
    }

    #[test]
    fn refinement_character_derivative_matches_dot_action() {
        for (n, sigma) in [(1, 1), (2, 1), (3, 1), (2, 2)] {
            let phi: Vec<Rat> = (0..n).map(|i| rat(2i64.pow(i as u32 + 1), 1)).collect();
            let p = param(n, sigma, phi, 7);
            for w in WeylElement::all(p.shape) {
                let chars = refinement_character(&p, &Perm::identity(n), &w).unwrap();
                let expected = expected_derivative(&p, &w).unwrap();
                for (i, c) in chars.iter().enumerate() {
                    let derived = c.derivative();
                    for tau in 0..sigma {
                        assert_eq!(
                            derived[tau], expected.rows[tau][i],
                            "component {i}, embedding {tau}, at {w}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn refinement_character_injective_small() {
        let p = param(3, 1, vec![rat_int(1), rat_int(2), rat_int(5)], 7);
        let mut seen = Vec::new();
        for ordering in Perm::all(3) {
            for w in WeylElement::all(p.shape) {
                let chars = refinement_character(&p, &ordering, &w).unwrap();
                assert!(
                    !seen.contains(&chars),
                    "collision at ordering {} and {w}",
                    ordering.one_line_string()
                );
                seen.push(chars);
            }
        }
    }

    #[test]
    fn param_json_round_trip() {
        let p = param(2, 2, vec![rat(1, 2), rat_int(3)], 4);
        let json = p.to_json();
        let back = CrystallineParam::from_json(&json).unwrap();
        assert_eq!(back.shape, p.shape);
        assert_eq!(back.h, p.h);
        assert_eq!(back.phi, p.phi);
        assert_eq!(back.q, p.q);
    }
}
