//! Characters of the two-torus and finite weighted representations.
//!
//! Sign convention: weights are those of the pullback action, under
//! which `x` is invariant, `y` scales by `t1` and `z` by `t2`. The
//! monomial `x^i y^j z^k` therefore has weight `(j, k)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::{Exponent, Poly, PolyError};

/// The character `t1^a * t2^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Character {
    pub a: i64,
    pub b: i64,
}

impl Character {
    pub const TRIVIAL: Character = Character { a: 0, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        Character { a, b }
    }
}

impl Add for Character {
    type Output = Character;
    fn add(self, o: Character) -> Character {
        Character::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Character {
    type Output = Character;
    fn sub(self, o: Character) -> Character {
        Character::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Character {
    type Output = Character;
    fn neg(self) -> Character {
        Character::new(-self.a, -self.b)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t1^{}*t2^{}", self.a, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed character `{0}`, expected t1^a*t2^b")]
pub struct ParseCharacterError(String);

impl std::str::FromStr for Character {
    type Err = ParseCharacterError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseCharacterError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (l, r) = compact.split_once('*').ok_or_else(bad)?;
        let a = l.strip_prefix("t1^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let b = r.strip_prefix("t2^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        Ok(Character::new(a, b))
    }
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Weight of a parameter-free monomial.
pub fn monomial_weight(e: &Exponent) -> Result<Character, PolyError> {
    if e.has_params() {
        return Err(PolyError::HasParameters(Poly::monomial(e.clone()).to_string()));
    }
    let [_, j, k] = e.coord_exponents();
    Ok(Character::new(j as i64, k as i64))
}

/// Weight of a monomial ignoring its parameter factors (parameters have
/// weight zero).
pub(crate) fn coordinate_weight(e: &Exponent) -> Character {
    let [_, j, k] = e.coord_exponents();
    Character::new(j as i64, k as i64)
}

/// Common weight of all terms, `None` for zero or mixed-weight polys.
pub fn poly_weight(p: &Poly) -> Option<Character> {
    let mut ws = p.terms().map(|(e, _)| coordinate_weight(e));
    let first = ws.next()?;
    ws.all(|w| w == first).then_some(first)
}

/// All monomials of degree `n`, in descending term order.
pub fn monomials_of_degree(n: u32) -> Vec<Exponent> {
    let mut out = Vec::with_capacity(((n + 1) * (n + 2) / 2) as usize);
    for i in (0..=n).rev() {
        for j in (0..=n - i).rev() {
            out.push(Exponent::coords(i, j, n - i - j));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Slot {
    multiplicity: u32,
    labels: Vec<String>,
}

/// A finite multiset of characters, optionally carrying one basis label
/// per unit of multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedRep {
    slots: BTreeMap<Character, Slot>,
}

impl WeightedRep {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_weights<I: IntoIterator<Item = Character>>(ws: I) -> Self {
        let mut r = Self::new();
        for w in ws {
            r.insert(w, None);
        }
        r
    }

    /// Adds one unit of `w`, with an optional label.
    pub fn insert(&mut self, w: Character, label: Option<String>) {
        let slot = self.slots.entry(w).or_default();
        slot.multiplicity += 1;
        if let Some(l) = label {
            slot.labels.push(l);
        }
    }

    pub fn insert_many(&mut self, w: Character, mult: u32) {
        if mult == 0 {
            return;
        }
        self.slots.entry(w).or_default().multiplicity += mult;
    }

    pub fn multiplicity(&self, w: Character) -> u32 {
        self.slots.get(&w).map_or(0, |s| s.multiplicity)
    }

    pub fn labels(&self, w: Character) -> &[String] {
        self.slots.get(&w).map_or(&[], |s| s.labels.as_slice())
    }

    pub fn dim(&self) -> u32 {
        self.slots.values().map(|s| s.multiplicity).sum()
    }

    /// Number of distinct weights.
    pub fn num_weights(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.slots.values().all(|s| s.multiplicity == 1)
    }

    /// `(weight, multiplicity)` in ascending weight order.
    pub fn iter(&self) -> impl Iterator<Item = (Character, u32)> + '_ {
        self.slots.iter().map(|(w, s)| (*w, s.multiplicity))
    }

    /// Same multiset, labels dropped.
    pub fn unlabeled(&self) -> WeightedRep {
        let mut out = WeightedRep::new();
        for (w, m) in self.iter() {
            out.insert_many(w, m);
        }
        out
    }

    /// Multiset equality ignoring labels.
    pub fn same_weights(&self, other: &WeightedRep) -> bool {
        self.iter().eq(other.iter())
    }

    /// Whether `self` is contained in `other` weight by weight.
    pub fn is_subrep_of(&self, other: &WeightedRep) -> bool {
        self.iter().all(|(w, m)| other.multiplicity(w) >= m)
    }

    /// Count of `r`-element sub-multisets.
    pub fn sub_multiset_count(&self, r: u32) -> u64 {
        let mut ways = vec![0u64; r as usize + 1];
        ways[0] = 1;
        for (_, m) in self.iter() {
            let mut next = vec![0u64; r as usize + 1];
            for (have, &count) in ways.iter().enumerate() {
                for take in 0..=m as usize {
                    if have + take <= r as usize {
                        next[have + take] += count;
                    }
                }
            }
            ways = next;
        }
        ways[r as usize]
    }
}

/// Sections of `O(n)`: every monomial of degree `n`, labelled.
pub fn sections_rep(n: u32) -> WeightedRep {
    let mut r = WeightedRep::new();
    for m in monomials_of_degree(n) {
        let w = coordinate_weight(&m);
        r.insert(w, Some(Poly::monomial(m).to_string()));
    }
    r
}

/// Multiset union.
pub fn rep_sum(a: &WeightedRep, b: &WeightedRep) -> WeightedRep {
    let mut out = a.clone();
    for (w, s) in &b.slots {
        let slot = out.slots.entry(*w).or_default();
        slot.multiplicity += s.multiplicity;
        slot.labels.extend(s.labels.iter().cloned());
    }
    out.normalize_labels();
    out
}

/// Convolution of weight multisets; labels are dropped.
pub fn rep_tensor(a: &WeightedRep, b: &WeightedRep) -> WeightedRep {
    let mut out = WeightedRep::new();
    for (w1, m1) in a.iter() {
        for (w2, m2) in b.iter() {
            out.insert_many(w1 + w2, m1 * m2);
        }
    }
    out
}

/// Uniform shift by `chi`.
pub fn rep_twist(r: &WeightedRep, chi: Character) -> WeightedRep {
    WeightedRep { slots: r.slots.iter().map(|(w, s)| (*w + chi, s.clone())).collect() }
}

impl WeightedRep {
    // Labels are all-or-nothing per weight.
    fn normalize_labels(&mut self) {
        for s in self.slots.values_mut() {
            if s.labels.len() != s.multiplicity as usize {
                s.labels.clear();
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RepEntry {
    weight: Character,
    multiplicity: u32,
    labels: Vec<String>,
}

impl Serialize for WeightedRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<RepEntry> = self
            .slots
            .iter()
            .map(|(w, slot)| RepEntry { weight: *w, multiplicity: slot.multiplicity, labels: slot.labels.clone() })
            .collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let entries = Vec::<RepEntry>::deserialize(d)?;
        let mut out = WeightedRep::new();
        for e in entries {
            if e.multiplicity == 0 {
                return Err(serde::de::Error::custom("zero multiplicity"));
            }
            let slot = out.slots.entry(e.weight).or_default();
            slot.multiplicity += e.multiplicity;
            slot.labels.extend(e.labels);
        }
        out.normalize_labels();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ch(a: i64, b: i64) -> Character {
        Character::new(a, b)
    }

    #[test]
    fn monomial_weights() {
        assert_eq!(monomial_weight(&Exponent::coords(3, 0, 0)).unwrap(), ch(0, 0));
        assert_eq!(monomial_weight(&Exponent::coords(0, 2, 1)).unwrap(), ch(2, 1));
        for i in 0..=3u32 {
            for j in 0..=3 - i {
                let e = Exponent::coords(3 - i - j, i, j);
                assert_eq!(monomial_weight(&e).unwrap(), ch(i as i64, j as i64));
            }
        }
        assert!(monomial_weight(&Exponent::param("s", 1)).is_err());
    }

    #[test]
    fn sections_dimensions() {
        let s1 = sections_rep(1);
        assert_eq!(s1.dim(), 3);
        assert!(s1.same_weights(&WeightedRep::from_weights([ch(0, 0), ch(1, 0), ch(0, 1)])));
        assert_eq!(sections_rep(2).dim(), 6);
        assert_eq!(sections_rep(4).dim(), 15);
        for n in 0..=10 {
            let r = sections_rep(n);
            assert!(r.is_multiplicity_free());
            assert_eq!(r.dim(), (n + 1) * (n + 2) / 2);
        }
    }

    #[test]
    fn twist_sum_tensor_examples() {
        let r = WeightedRep::from_weights([ch(1, 0), ch(0, 1)]);
        assert!(rep_twist(&r, ch(1, 1)).same_weights(&WeightedRep::from_weights([ch(2, 1), ch(1, 2)])));
        assert_eq!(rep_sum(&r, &WeightedRep::new()), r);
        let trivial = WeightedRep::from_weights([Character::TRIVIAL]);
        assert!(rep_tensor(&r, &trivial).same_weights(&r));
    }

    #[test]
    fn character_text_round_trip() {
        let c = ch(-2, 5);
        assert_eq!(c.to_string(), "t1^-2*t2^5");
        assert_eq!("t1^-2*t2^5".parse::<Character>().unwrap(), c);
        assert!("t1^2".parse::<Character>().is_err());
    }

    #[test]
    fn rep_json_is_sorted_array() {
        let json = serde_json::to_string(&sections_rep(1)).unwrap();
        assert_eq!(
            json,
            r#"[{"weight":"t1^0*t2^0","multiplicity":1,"labels":["x"]},{"weight":"t1^0*t2^1","multiplicity":1,"labels":["z"]},{"weight":"t1^1*t2^0","multiplicity":1,"labels":["y"]}]"#
        );
        let back: WeightedRep = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sections_rep(1));
    }

    fn arb_rep() -> impl Strategy<Value = WeightedRep> {
        prop::collection::vec(((-3i64..4, -3i64..4), 1u32..3), 0..6).prop_map(|v| {
            let mut r = WeightedRep::new();
            for ((a, b), m) in v {
                r.insert_many(ch(a, b), m);
            }
            r
        })
    }

    proptest! {
        #[test]
        fn dims_behave(a in arb_rep(), b in arb_rep(), s in -3i64..4, t in -3i64..4) {
            prop_assert_eq!(rep_sum(&a, &b).dim(), a.dim() + b.dim());
            prop_assert_eq!(rep_tensor(&a, &b).dim(), a.dim() * b.dim());
            prop_assert_eq!(rep_twist(&a, ch(s, t)).dim(), a.dim());
        }

        #[test]
        fn weight_is_monoid_morphism(i in 0u32..5, j in 0u32..5, k in 0u32..5, p in 0u32..5, q in 0u32..5, r in 0u32..5) {
            let m1 = Exponent::coords(i, j, k);
            let m2 = Exponent::coords(p, q, r);
            prop_assert_eq!(
                monomial_weight(&m1.mul(&m2)).unwrap(),
                monomial_weight(&m1).unwrap() + monomial_weight(&m2).unwrap()
            );
        }
    }
}
