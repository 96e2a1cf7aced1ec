//! Strata of `M(d,r)` for `d <= 5` and the computation of their
//! torus-fixed cell profiles.
//!
//! Every recipe works with one representative configuration and reaches
//! the others through the action of the coordinate permutations.

mod extension;
pub mod fixtures;
mod grassmann;
mod pairs;
mod projective;
pub mod verify;

pub use extension::{pi2_classes, pi3_h_vectors, pi3_presentation, section_profile, Pi2Class};
pub use grassmann::component_sections;
pub use pairs::{point_ideal_sheaf, quadric_pair_sheaf};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::cellcalc::{euler, poincare, projective_pair_cells, CellError, CellList, Poincare};
use crate::equipres::EquipresError;
use crate::exactpoly::PolyError;
use crate::torusweights::{Character, WeightedRep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("malformed moduli space `{0}`, expected M(d,r)")]
    Parse(String),
    #[error("degree {0} is outside the supported range 1..=5")]
    UnsupportedDegree(u32),
    #[error("d = {d} and r = {r} are not coprime")]
    NotCoprime { d: u32, r: i64 },
    #[error("unknown stratum `{id}` of {space}")]
    UnknownStratum { space: String, id: String },
    #[error("fixed-locus profile of {stratum} differs: {first} has {first_profile}, {second} has {second_profile}")]
    UniformityViolation {
        stratum: String,
        first: String,
        first_profile: String,
        second: String,
        second_profile: String,
    },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Equipres(#[from] EquipresError),
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl StrataError {
    /// Whether the error rejects the input rather than signalling a defect.
    pub fn is_unsupported_input(&self) -> bool {
        matches!(self, StrataError::UnsupportedDegree(_) | StrataError::NotCoprime { .. })
    }
}

/// A moduli space `M(d,r)` with `r` normalized to `min(r mod d, d - r mod d)`,
/// which gives an isomorphic space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ModuliSpec {
    pub d: u32,
    pub r: u32,
    pub given_r: i64,
}

impl ModuliSpec {
    pub fn new(d: u32, r: i64) -> Result<Self, StrataError> {
        if !(1..=5).contains(&d) {
            return Err(StrataError::UnsupportedDegree(d));
        }
        let rr = r.rem_euclid(d as i64) as u32;
        if num_integer::gcd(rr, d) != 1 && d > 1 {
            return Err(StrataError::NotCoprime { d, r });
        }
        let normalized = if d == 1 { 1 } else { rr.min(d - rr) };
        Ok(ModuliSpec { d, r: normalized, given_r: r })
    }

    /// Every supported space, in catalogue order.
    pub fn all() -> Vec<ModuliSpec> {
        [(1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (5, 2)].iter().map(|&(d, r)| ModuliSpec::new(d, r).unwrap()).collect()
    }

    /// The normalized name `M(d,r)`.
    pub fn label(&self) -> String {
        format!("M({},{})", self.d, self.r)
    }

    /// The strata of this space in catalogue order.
    pub fn strata(&self) -> Vec<StratumInfo> {
        let ids: &[&str] = match (self.d, self.r) {
            (1, _) => &["W1"],
            (2, _) => &["W2"],
            (3, _) => &["W3"],
            (4, _) => &["W4", "M1-W4", "M2"],
            (5, 1) => &["W5", "Pi1", "Pi2", "Pi3", "M2s", "M2c", "M3"],
            (5, 2) => &["M3'", "M3", "Xi1", "Xi2", "M2c"],
            _ => unreachable!("normalized spec"),
        };
        ids.iter().map(|id| StratumInfo { id: (*id).to_string(), description: describe(self, id).to_string() }).collect()
    }
}

fn describe(spec: &ModuliSpec, id: &str) -> &'static str {
    match (spec.d, spec.r, id) {
        (_, _, "W1" | "W2" | "W3" | "W4" | "W5") => "torsion-free quotient: a curve through points in general position",
        (4, _, "M1-W4") => "quotient with torsion along a line",
        (4, _, "M2") => "curves through a point: projective bundle over the plane",
        (5, 1, "Pi1") => "torsion along a conic",
        (5, 1, "Pi2") => "torsion along a line, extension of a two-point ideal",
        (5, 1, "Pi3") => "torsion along a line, quotient of a one-point ideal",
        (5, 1, "M2s") => "pairs of quadrics",
        (5, 1, "M2c") => "products of a one-point ideal with a two-point ideal",
        (5, 1, "M3") => "curves through a point: projective bundle over the plane",
        (5, 2, "M3'") => "curves through two points: projective bundle over the Hilbert scheme",
        (5, 2, "M3") => "conic-type quotients: three points or torsion along a line",
        (5, 2, "Xi1") => "two sections of the twisted tangent sheaf",
        (5, 2, "Xi2") => "products of a linear and a quadratic two-generator cokernel",
        (5, 2, "M2c") => "products of a one-point ideal with a conic-type quotient",
        _ => "",
    }
}

impl fmt::Display for ModuliSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for ModuliSpec {
    type Err = StrataError;

    /// Accepts `M(d,r)` with optional whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || StrataError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact.strip_prefix("M(").and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let (d, r) = inner.split_once(',').ok_or_else(bad)?;
        let d: u32 = d.parse().map_err(|_| bad())?;
        let r: i64 = r.parse().map_err(|_| bad())?;
        ModuliSpec::new(d, r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumInfo {
    pub id: String,
    pub description: String,
}

/// One contribution to a stratum's fixed locus: the discrete data of a
/// fixed point or fixed family together with the cells it contributes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub space: String,
    pub stratum: String,
    pub data: Value,
    pub cells: CellList,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumReport {
    pub id: String,
    pub description: String,
    pub cells: CellList,
    /// Intermediate counts that the computation passes through.
    pub details: BTreeMap<String, Value>,
    #[serde(skip)]
    pub witnesses: Vec<Witness>,
}

impl StratumReport {
    pub fn euler(&self) -> u64 {
        euler(&self.cells)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuliReport {
    pub spec: ModuliSpec,
    pub strata: Vec<StratumReport>,
    pub total: CellList,
}

impl ModuliReport {
    pub fn euler(&self) -> u64 {
        euler(&self.total)
    }

    pub fn poincare(&self) -> Poincare {
        poincare(&self.total)
    }

    pub fn stratum(&self, id: &str) -> Option<&StratumReport> {
        self.strata.iter().find(|s| s.id == id)
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.strata.iter().flat_map(|s| s.witnesses.iter())
    }
}

/// Collects the cells, witnesses and intermediate counts of one stratum.
pub(crate) struct Builder {
    space: String,
    stratum: String,
    cells: CellList,
    witnesses: Vec<Witness>,
    details: BTreeMap<String, Value>,
}

impl Builder {
    pub(crate) fn new(spec: &ModuliSpec, stratum: &str) -> Self {
        Builder {
            space: spec.label(),
            stratum: stratum.to_string(),
            cells: CellList::new(),
            witnesses: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    pub(crate) fn add(&mut self, data: Value, cells: CellList) {
        self.cells += &cells;
        self.witnesses.push(Witness { space: self.space.clone(), stratum: self.stratum.clone(), data, cells });
    }

    /// Adds the cells of `P(V) - P(W)` weight space by weight space, one
    /// witness per weight that contributes.
    pub(crate) fn add_pair(&mut self, data: &Value, v: &WeightedRep, w: &WeightedRep) -> Result<CellList, StrataError> {
        let total = projective_pair_cells(v, w)?;
        for (weight, m) in v.iter() {
            let single = WeightedRep::from_weights(std::iter::repeat_n(weight, m as usize));
            let sub = WeightedRep::from_weights(std::iter::repeat_n(weight, w.multiplicity(weight) as usize));
            let cells = projective_pair_cells(&single, &sub)?;
            if cells.is_empty() {
                continue;
            }
            let mut d = data.clone();
            if let Value::Object(map) = &mut d {
                map.insert("weight".into(), Value::String(weight.to_string()));
                map.insert("sections".into(), serde_json::to_value(v.labels(weight)).unwrap_or(Value::Null));
            }
            self.add(d, cells);
        }
        Ok(total)
    }

    pub(crate) fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub(crate) fn finish(self, info: &StratumInfo) -> Result<StratumReport, StrataError> {
        let sum: CellList = self.witnesses.iter().map(|w| &w.cells).sum();
        if sum != self.cells {
            return Err(StrataError::Invariant(format!("witness cells of {} do not add up", self.stratum)));
        }
        self.cells.check_depth()?;
        Ok(StratumReport {
            id: info.id.clone(),
            description: info.description.clone(),
            cells: self.cells,
            details: self.details,
            witnesses: self.witnesses,
        })
    }
}

/// Computes one stratum of `spec`.
pub fn compute_stratum(spec: &ModuliSpec, id: &str) -> Result<StratumReport, StrataError> {
    let info = spec
        .strata()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| StrataError::UnknownStratum { space: spec.label(), id: id.to_string() })?;
    let mut b = Builder::new(spec, id);
    match (spec.d, spec.r, id) {
        (d, _, "W1" | "W2" | "W3" | "W4" | "W5") => projective::wd(&mut b, d),
        (4, _, "M2") => projective::point_bundle(&mut b, 1, 4, |_| true),
        (5, 1, "M3") => projective::point_bundle(&mut b, 1, 5, |_| true),
        (5, 2, "M3'") => projective::point_bundle(&mut b, 2, 5, |_| true),
        (4, _, "M1-W4") => extension::line_torsion_stratum(&mut b, 2),
        (5, 2, "M3") => {
            projective::point_bundle(&mut b, 3, 5, |z| !crate::planegeom::lies_on_curve(z, 1))?;
            extension::line_torsion_stratum(&mut b, 3)
        }
        (5, 1, "Pi1") => extension::pi1(&mut b),
        (5, 1, "Pi2") => extension::pi2(&mut b),
        (5, 1, "Pi3") => extension::pi3(&mut b),
        (5, 1, "M2s") => pairs::m2s(&mut b),
        (5, 1, "M2c") => pairs::m2c_51(&mut b),
        (5, 2, "Xi1") => grassmann::xi1(&mut b),
        (5, 2, "Xi2") => pairs::xi2(&mut b),
        (5, 2, "M2c") => pairs::m2c_52(&mut b),
        _ => unreachable!("catalogued stratum without recipe"),
    }?;
    b.finish(&info)
}

/// Computes every stratum of `spec`; the result does not depend on the
/// number of worker threads.
pub fn compute_space(spec: &ModuliSpec) -> Result<ModuliReport, StrataError> {
    let strata: Vec<StratumReport> = spec
        .strata()
        .par_iter()
        .map(|s| compute_stratum(spec, &s.id))
        .collect::<Result<Vec<_>, _>>()?;
    let total = strata.iter().map(|s| &s.cells).sum();
    Ok(ModuliReport { spec: *spec, strata, total })
}

/// The permutations of the three coordinates.
pub const S3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Applies every coordinate permutation to a representative and keeps one
/// configuration per distinct key, sorted by key.
pub(crate) fn orbit<K: Ord, T>(
    mut f: impl FnMut([usize; 3]) -> Result<(K, T), StrataError>,
) -> Result<Vec<(K, T)>, StrataError> {
    let mut out: BTreeMap<K, T> = BTreeMap::new();
    for perm in S3 {
        let (k, t) = f(perm)?;
        out.entry(k).or_insert(t);
    }
    Ok(out.into_iter().collect())
}

pub(crate) fn weight_json(w: Character) -> Value {
    Value::String(w.to_string())
}
