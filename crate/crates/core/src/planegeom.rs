//! Torus-fixed subschemes of the plane and their twisted ideal sections.
//!
//! A fixed zero-dimensional subscheme is a triple of staircases, one per
//! coordinate point. At each point the two remaining coordinates serve as
//! local variables `(u, v)` in the order x, y, z:
//!
//! | point     | u | v |
//! |-----------|---|---|
//! | `[1,0,0]` | y | z |
//! | `[0,1,0]` | x | z |
//! | `[0,0,1]` | x | y |
//!
//! The cell in row `r`, column `c` of a staircase stands for the local
//! monomial `u^c v^r`; a partition `[λ0, λ1, ...]` has `λr` cells in row
//! `r`. The ideal consists of the monomials outside every staircase.

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::exactpoly::{CoordinatePoint, Exponent, Poly};
use crate::torusweights::{coordinate_weight, monomials_of_degree, WeightedRep};

/// A Young diagram with weakly decreasing positive rows.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct StaircasePartition {
    parts: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a partition: {0:?}")]
pub struct InvalidPartition(pub Vec<u32>);

impl TryFrom<Vec<u32>> for StaircasePartition {
    type Error = InvalidPartition;
    fn try_from(parts: Vec<u32>) -> Result<Self, Self::Error> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(InvalidPartition(parts));
        }
        Ok(StaircasePartition { parts })
    }
}

impl From<StaircasePartition> for Vec<u32> {
    fn from(p: StaircasePartition) -> Vec<u32> {
        p.parts
    }
}

impl StaircasePartition {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Whether the local monomial `u^c v^r` is a cell of the staircase.
    pub fn contains_cell(&self, c: u32, r: u32) -> bool {
        self.parts.get(r as usize).is_some_and(|&len| c < len)
    }

    /// Partitions of `n` in reverse lexicographic order (`[n]` first).
    pub fn all_of_size(n: u32) -> Vec<StaircasePartition> {
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<StaircasePartition>) {
            if rem == 0 {
                out.push(StaircasePartition { parts: cur.clone() });
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

/// A torus-fixed subscheme: one staircase at each coordinate point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MonomialSubscheme {
    parts: [StaircasePartition; 3],
}

fn local_exponents(point: CoordinatePoint, e: &Exponent) -> (u32, u32) {
    let [i, j, k] = e.coord_exponents();
    match point {
        CoordinatePoint::X => (j, k),
        CoordinatePoint::Y => (i, k),
        CoordinatePoint::Z => (i, j),
    }
}

impl MonomialSubscheme {
    pub fn new(at_x: StaircasePartition, at_y: StaircasePartition, at_z: StaircasePartition) -> Self {
        MonomialSubscheme { parts: [at_x, at_y, at_z] }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The reduced coordinate point.
    pub fn point(p: CoordinatePoint) -> Self {
        let mut s = Self::empty();
        s.parts[p.index()] = StaircasePartition { parts: vec![1] };
        s
    }

    pub fn at(&self, p: CoordinatePoint) -> &StaircasePartition {
        &self.parts[p.index()]
    }

    pub fn length(&self) -> u32 {
        self.parts.iter().map(StaircasePartition::size).sum()
    }

    pub fn support(&self) -> Vec<CoordinatePoint> {
        CoordinatePoint::ALL.into_iter().filter(|p| !self.at(*p).is_empty()).collect()
    }

    /// Whether the monomial lies in the ideal of the subscheme.
    pub fn ideal_contains(&self, e: &Exponent) -> bool {
        CoordinatePoint::ALL.into_iter().all(|p| {
            let (c, r) = local_exponents(p, e);
            !self.at(p).contains_cell(c, r)
        })
    }
}

impl fmt::Display for MonomialSubscheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        f.write_str("{")?;
        for p in CoordinatePoint::ALL {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{}:{:?}", p.bracket(), self.at(p).parts())?;
        }
        f.write_str("}")
    }
}

impl Serialize for MonomialSubscheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        for p in CoordinatePoint::ALL {
            m.serialize_entry(p.bracket(), self.at(p))?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for MonomialSubscheme {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = std::collections::BTreeMap::<String, StaircasePartition>::deserialize(d)?;
        let mut out = MonomialSubscheme::empty();
        for (k, v) in raw {
            let p = CoordinatePoint::from_bracket(&k)
                .ok_or_else(|| serde::de::Error::custom(format!("unknown coordinate point {k}")))?;
            out.parts[p.index()] = v;
        }
        Ok(out)
    }
}

/// Every fixed subscheme of length `n`, in a deterministic order.
pub fn hilb_fixed(n: u32) -> Vec<MonomialSubscheme> {
    let by_size: Vec<Vec<StaircasePartition>> = (0..=n).map(StaircasePartition::all_of_size).collect();
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n - a {
            let c = n - a - b;
            for pa in &by_size[a as usize] {
                for pb in &by_size[b as usize] {
                    for pc in &by_size[c as usize] {
                        out.push(MonomialSubscheme::new(pa.clone(), pb.clone(), pc.clone()));
                    }
                }
            }
        }
    }
    out
}

/// Degree-`d` monomials in the ideal of `z`, as a labelled weighted rep.
/// Negative degrees give the zero representation.
pub fn ideal_section_rep(z: &MonomialSubscheme, d: i64) -> WeightedRep {
    let mut r = WeightedRep::new();
    if d < 0 {
        return r;
    }
    for m in monomials_of_degree(d as u32) {
        if z.ideal_contains(&m) {
            r.insert(coordinate_weight(&m), Some(Poly::monomial(m).to_string()));
        }
    }
    r
}

/// Whether `z` lies on some curve of degree `e`; false for negative `e`.
pub fn lies_on_curve(z: &MonomialSubscheme, e: i64) -> bool {
    ideal_section_rep(z, e).dim() > 0
}

/// One isolated fixed point of the open stratum: a fixed subscheme and
/// a fixed curve through it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WdWitness {
    pub subscheme: MonomialSubscheme,
    pub curve: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WdCount {
    pub total: u64,
    pub witnesses: Vec<WdWitness>,
    /// Fixed points per admissible subscheme.
    pub distribution: Vec<(MonomialSubscheme, u32)>,
}

/// Number of genus-many points in degree `d`: `(d-1)(d-2)/2`.
pub fn point_count_for_degree(d: u32) -> u32 {
    assert!(d >= 1, "degree must be positive");
    (d - 1) * d.saturating_sub(2) / 2
}

/// Fixed points of the open stratum of `M(d,1)` in which the rank-one
/// quotient is torsion free.
pub fn count_wd_fixed(d: u32) -> WdCount {
    assert!((1..=5).contains(&d), "degree {d} outside 1..=5");
    let n = point_count_for_degree(d);
    let mut witnesses = Vec::new();
    let mut distribution = Vec::new();
    for z in hilb_fixed(n) {
        if lies_on_curve(&z, d as i64 - 3) {
            continue;
        }
        let rep = ideal_section_rep(&z, d as i64);
        let mut count = 0;
        for (w, _) in rep.iter() {
            for label in rep.labels(w) {
                witnesses.push(WdWitness { subscheme: z.clone(), curve: label.clone() });
                count += 1;
            }
        }
        distribution.push((z, count));
    }
    WdCount { total: witnesses.len() as u64, witnesses, distribution }
}
