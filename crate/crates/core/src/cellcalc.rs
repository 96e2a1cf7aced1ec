//! Affine pavings of torus-fixed loci.
//!
//! A [`CellList`] records how many affine cells of each dimension a fixed
//! locus decomposes into. Fixed loci arise as projective spaces of
//! sections minus a linear subspace (one weight space at a time), as
//! fixed components of Grassmannians, and as such components with a
//! determinant degeneracy locus removed.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::{ratio, rat, Poly, Rational};
use crate::torusweights::{Character, WeightedRep};

/// Deepest cell dimension any computation may produce.
pub const MAX_CELL_DIM: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellError {
    #[error("sub-representation exceeds the ambient multiplicity in weight {0}")]
    NotASubrep(Character),
    #[error("cell of dimension {0} exceeds the supported depth")]
    TooDeep(u32),
    #[error("unsupported degeneracy locus on {component}: {reason}")]
    UnsupportedLocus { component: String, reason: String },
}

/// Number of affine cells per dimension.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellList {
    counts: BTreeMap<u32, u64>,
}

impl CellList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn point() -> Self {
        Self::affine(0)
    }

    /// A single copy of `A^dim`.
    pub fn affine(dim: u32) -> Self {
        let mut c = Self::new();
        c.add_cells(dim, 1);
        c
    }

    /// Builds a list from `(dimension, count)` pairs.
    pub fn from_counts<I: IntoIterator<Item = (u32, u64)>>(it: I) -> Self {
        let mut c = Self::new();
        for (d, n) in it {
            c.add_cells(d, n);
        }
        c
    }

    /// The standard paving of `P^k`: one cell in each dimension `0..=k`.
    pub fn projective(k: u32) -> Self {
        Self::from_counts((0..=k).map(|d| (d, 1)))
    }

    pub fn add_cells(&mut self, dim: u32, count: u64) {
        if count > 0 {
            *self.counts.entry(dim).or_insert(0) += count;
        }
    }

    pub fn count(&self, dim: u32) -> u64 {
        self.counts.get(&dim).copied().unwrap_or(0)
    }

    pub fn points(&self) -> u64 {
        self.count(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn max_dim(&self) -> Option<u32> {
        self.counts.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts.iter().map(|(&d, &n)| (d, n))
    }

    /// Every cell repeated `n` times.
    pub fn times(&self, n: u64) -> CellList {
        CellList::from_counts(self.iter().map(|(d, c)| (d, c * n)))
    }

    pub fn check_depth(&self) -> Result<(), CellError> {
        match self.max_dim() {
            Some(d) if d > MAX_CELL_DIM => Err(CellError::TooDeep(d)),
            _ => Ok(()),
        }
    }

    /// Human-readable profile such as `264 points + 81 A^1 + 6 A^2`.
    pub fn describe(&self) -> String {
        if self.is_empty() {
            return "empty".into();
        }
        self.iter()
            .map(|(d, n)| if d == 0 { format!("{n} points") } else { format!("{n} A^{d}") })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl Add for &CellList {
    type Output = CellList;
    fn add(self, rhs: &CellList) -> CellList {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&CellList> for CellList {
    fn add_assign(&mut self, rhs: &CellList) {
        for (d, n) in rhs.iter() {
            self.add_cells(d, n);
        }
    }
}

impl std::iter::Sum for CellList {
    fn sum<I: Iterator<Item = CellList>>(iter: I) -> Self {
        let mut out = CellList::new();
        for c in iter {
            out += &c;
        }
        out
    }
}

impl<'a> std::iter::Sum<&'a CellList> for CellList {
    fn sum<I: Iterator<Item = &'a CellList>>(iter: I) -> Self {
        let mut out = CellList::new();
        for c in iter {
            out += c;
        }
        out
    }
}

/// Product of pavings: dimensions add.
pub fn cell_product(a: &CellList, b: &CellList) -> CellList {
    let mut out = CellList::new();
    for (i, m) in a.iter() {
        for (j, n) in b.iter() {
            out.add_cells(i + j, m * n);
        }
    }
    out
}

/// Total number of cells.
pub fn euler(c: &CellList) -> u64 {
    c.counts.values().sum()
}

/// Class of a paved space in the variable `L`, the class of the line.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Poincare {
    coefficients: BTreeMap<u32, u64>,
}

impl Poincare {
    pub fn coefficient(&self, power: u32) -> u64 {
        self.coefficients.get(&power).copied().unwrap_or(0)
    }

    pub fn at_one(&self) -> u64 {
        self.coefficients.values().sum()
    }
}

impl Mul for &Poincare {
    type Output = Poincare;
    fn mul(self, rhs: &Poincare) -> Poincare {
        let mut coefficients = BTreeMap::new();
        for (&i, &a) in &self.coefficients {
            for (&j, &b) in &rhs.coefficients {
                *coefficients.entry(i + j).or_insert(0) += a * b;
            }
        }
        Poincare { coefficients }
    }
}

impl fmt::Display for Poincare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .map(|(&p, &c)| match p {
                0 => c.to_string(),
                1 => format!("{c}*L"),
                _ => format!("{c}*L^{p}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

pub fn poincare(c: &CellList) -> Poincare {
    Poincare { coefficients: c.counts.clone() }
}

/// Cells of `P(V)^T` minus `P(W)`: a weight with multiplicity `k` in `V`
/// and `j` in `W` contributes `P^{k-1}` minus `P^{j-1}`, paved by
/// `A^j, ..., A^{k-1}`.
pub fn projective_pair_cells(v: &WeightedRep, w: &WeightedRep) -> Result<CellList, CellError> {
    let mut out = CellList::new();
    for (chi, j) in w.iter() {
        if j > v.multiplicity(chi) {
            return Err(CellError::NotASubrep(chi));
        }
    }
    for (chi, k) in v.iter() {
        let j = w.multiplicity(chi);
        for d in j..k {
            out.add_cells(d, 1);
        }
    }
    out.check_depth()?;
    Ok(out)
}

/// Shape of a fixed component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentKind {
    Point,
    Projective { dim: u32 },
    Product { first: u32, second: u32 },
    /// A product of Grassmannians outside the shapes above.
    Other,
}

/// The part of one weight space selected by a fixed subspace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightChoice {
    pub weight: Character,
    pub chosen: u32,
    pub multiplicity: u32,
    pub labels: Vec<String>,
}

impl WeightChoice {
    /// Whether this choice is a positive-dimensional Grassmannian.
    pub fn is_moving(&self) -> bool {
        self.chosen > 0 && self.chosen < self.multiplicity
    }
}

/// A connected component of a torus-fixed locus in a Grassmannian of
/// subspaces of a representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FixedComponent {
    pub kind: ComponentKind,
    pub choices: Vec<WeightChoice>,
}

impl FixedComponent {
    pub fn moving_choices(&self) -> impl Iterator<Item = &WeightChoice> {
        self.choices.iter().filter(|c| c.is_moving())
    }

    /// Homogeneous coordinate names of the `i`-th projective factor, as
    /// used by [`remove_degeneracy`].
    pub fn factor_params(&self, i: usize) -> (String, String) {
        match self.kind {
            ComponentKind::Product { .. } => (format!("u{}", i + 1), format!("v{}", i + 1)),
            _ => ("u".into(), "v".into()),
        }
    }

    /// The paving of the whole component.
    pub fn cells(&self) -> Result<CellList, CellError> {
        match self.kind {
            ComponentKind::Point => Ok(CellList::point()),
            ComponentKind::Projective { dim } => Ok(CellList::projective(dim)),
            ComponentKind::Product { first, second } => {
                Ok(cell_product(&CellList::projective(first), &CellList::projective(second)))
            }
            ComponentKind::Other => Err(self.unsupported("no standard paving")),
        }
    }

    fn unsupported(&self, reason: &str) -> CellError {
        CellError::UnsupportedLocus { component: format!("{:?}", self.kind), reason: reason.into() }
    }
}

/// Fixed components of `Gr(r, V)`: one per way of distributing `r` among
/// the weight spaces, each the product of the Grassmannians of the chosen
/// sub-dimensions.
pub fn grassmannian_fixed_components(v: &WeightedRep, r: u32) -> Vec<FixedComponent> {
    let spaces: Vec<(Character, u32)> = v.iter().collect();
    let mut out = Vec::new();
    let mut chosen = vec![0u32; spaces.len()];
    fn rec(
        idx: usize,
        left: u32,
        spaces: &[(Character, u32)],
        v: &WeightedRep,
        chosen: &mut Vec<u32>,
        out: &mut Vec<FixedComponent>,
    ) {
        if idx == spaces.len() {
            if left == 0 {
                out.push(component_from(spaces, v, chosen));
            }
            return;
        }
        let (_, m) = spaces[idx];
        for c in (0..=m.min(left)).rev() {
            chosen[idx] = c;
            rec(idx + 1, left - c, spaces, v, chosen, out);
        }
        chosen[idx] = 0;
    }
    rec(0, r, &spaces, v, &mut chosen, &mut out);
    out
}

fn component_from(spaces: &[(Character, u32)], v: &WeightedRep, chosen: &[u32]) -> FixedComponent {
    let choices: Vec<WeightChoice> = spaces
        .iter()
        .zip(chosen)
        .filter(|(_, &c)| c > 0)
        .map(|(&(w, m), &c)| WeightChoice { weight: w, chosen: c, multiplicity: m, labels: v.labels(w).to_vec() })
        .collect();
    let dims: Vec<Option<u32>> = choices
        .iter()
        .filter(|c| c.is_moving())
        .map(|c| (c.chosen == 1 || c.chosen + 1 == c.multiplicity).then_some(c.multiplicity - 1))
        .collect();
    let kind = match dims.as_slice() {
        [] => ComponentKind::Point,
        [Some(k)] => ComponentKind::Projective { dim: *k },
        [Some(a), Some(b)] => ComponentKind::Product { first: *a, second: *b },
        _ => ComponentKind::Other,
    };
    FixedComponent { kind, choices }
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
type Univariate = Vec<Rational>;

fn trim(mut p: Univariate) -> Univariate {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &Univariate, b: &Univariate) -> Univariate {
    let mut r = a.clone();
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap().clone() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(a: &Univariate, b: &Univariate) -> Univariate {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn derivative(p: &Univariate) -> Univariate {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect())
}

/// Number of distinct complex roots.
fn distinct_roots(p: &Univariate) -> usize {
    let p = trim(p.clone());
    if p.len() <= 1 {
        return 0;
    }
    let g = poly_gcd(&p, &derivative(&p));
    (p.len() - 1) - (g.len() - 1)
}

/// Coefficients of a binary form in `(u, v)`, indexed by the power of
/// `u`. Fails if other variables occur or the form is not homogeneous.
fn binary_form(p: &Poly, u: &str, v: &str) -> Option<(u32, Vec<Rational>)> {
    let mut deg = None;
    let mut coeffs: BTreeMap<u32, Rational> = BTreeMap::new();
    for (e, c) in p.terms() {
        if e.degree() != 0 {
            return None;
        }
        let (mut a, mut b) = (0, 0);
        for (name, k) in e.param_exponents() {
            match name.as_str() {
                n if n == u => a = *k,
                n if n == v => b = *k,
                _ => return None,
            }
        }
        if deg.is_some_and(|d| d != a + b) {
            return None;
        }
        deg = Some(a + b);
        coeffs.insert(a, c.clone());
    }
    let d = deg?;
    Some((d, (0..=d).map(|i| coeffs.get(&i).cloned().unwrap_or_else(Rational::zero)).collect()))
}

fn sample(p: &Poly, values: &[(&str, Rational)]) -> Rational {
    let assignment: BTreeMap<String, Rational> = values.iter().map(|(n, v)| (n.to_string(), v.clone())).collect();
    p.substitute_parameters(&assignment)
        .ok()
        .and_then(|q| q.as_constant())
        .expect("sampled determinant is a constant")
}

/// The parameter-only coefficients of `det`, one per coordinate monomial.
fn degeneracy_equations(c: &FixedComponent, det: &Poly) -> Result<Vec<Poly>, CellError> {
    let eqs: Vec<Poly> = det.coordinate_coefficients().into_values().filter(|p| !p.is_zero()).collect();
    if eqs.iter().any(|p| p.check_parameter_bound().is_err()) {
        return Err(c.unsupported("too many parameters"));
    }
    Ok(eqs)
}

/// Removes the locus where `det` vanishes identically in the plane
/// coordinates from the component `c`, whose points are parametrized by
/// the names given by [`FixedComponent::factor_params`].
///
/// Supported loci: empty, everything, a single point of a projective
/// line, and the graph of an isomorphism in `P^1 x P^1`.
pub fn remove_degeneracy(c: &FixedComponent, det: &Poly) -> Result<CellList, CellError> {
    let eqs = degeneracy_equations(c, det)?;
    if eqs.is_empty() {
        return Ok(CellList::new());
    }
    if eqs.iter().any(|p| p.as_constant().is_some()) {
        return c.cells();
    }
    match c.kind {
        ComponentKind::Point | ComponentKind::Other => Err(c.unsupported("parametric equation on a rigid component")),
        ComponentKind::Projective { dim } => {
            if dim != 1 {
                return Err(c.unsupported("only projective lines carry parametric loci"));
            }
            let (u, v) = c.factor_params(0);
            let mut forms = Vec::new();
            for p in &eqs {
                forms.push(binary_form(p, &u, &v).ok_or_else(|| c.unsupported("not a binary form"))?);
            }
            let at_infinity = forms.iter().all(|(d, co)| co[*d as usize].is_zero());
            let mut g: Univariate = Vec::new();
            for (_, co) in &forms {
                g = poly_gcd(&g, co);
            }
            let zeros = distinct_roots(&g) + usize::from(at_infinity);
            let generic = sample(&eqs[0], &[(&u, ratio(7, 3)), (&v, rat(1))]);
            if generic.is_zero() {
                return Err(c.unsupported("generic sample vanishes"));
            }
            match zeros {
                0 => c.cells(),
                1 => Ok(CellList::affine(1)),
                n => Err(c.unsupported(&format!("{n} points removed from a line"))),
            }
        }
        ComponentKind::Product { first: 1, second: 1 } => {
            let reference = &eqs[0];
            let proportional = eqs.iter().all(|p| {
                let (e, c0) = reference.leading_term().unwrap();
                let lead = p.terms().find(|(f, _)| *f == e).map(|(_, c)| c.clone());
                lead.is_some_and(|c1| *p == reference.scale(&(c1 / c0)))
            });
            if !proportional {
                return Err(c.unsupported("several independent equations"));
            }
            let coeff = |a: &str, b: &str| -> Rational {
                let e = crate::exactpoly::Exponent::param(a, 1).mul(&crate::exactpoly::Exponent::param(b, 1));
                reference.terms().find(|(f, _)| **f == e).map_or_else(Rational::zero, |(_, c)| c.clone())
            };
            let allowed = ["u1", "v1", "u2", "v2"];
            let bilinear = reference.terms().all(|(e, _)| {
                let ps = e.param_exponents();
                e.degree() == 0
                    && ps.len() == 2
                    && ps.iter().all(|(n, k)| *k == 1 && allowed.contains(&n.as_str()))
                    && ps.iter().filter(|(n, _)| n.ends_with('1')).count() == 1
            });
            if !bilinear {
                return Err(c.unsupported("not a bilinear form"));
            }
            let m = [[coeff("u1", "u2"), coeff("u1", "v2")], [coeff("u2", "v1"), coeff("v1", "v2")]];
            let disc = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
            if disc.is_zero() {
                return Err(c.unsupported("degenerate bilinear form"));
            }
            // each fibre over the first factor meets the locus once
            for (a, b) in [(rat(0), rat(1)), (rat(1), rat(0)), (rat(1), rat(1)), (ratio(7, 3), rat(1))] {
                let at_zero = sample(reference, &[("u1", a.clone()), ("v1", b.clone()), ("u2", rat(0)), ("v2", rat(1))]);
                let at_one = sample(reference, &[("u1", a), ("v1", b), ("u2", rat(1)), ("v2", rat(0))]);
                if at_zero.is_zero() && at_one.is_zero() {
                    return Err(c.unsupported("fibre contained in the locus"));
                }
            }
            Ok(&CellList::affine(2) + &CellList::affine(1))
        }
        ComponentKind::Product { .. } => Err(c.unsupported("only P^1 x P^1 products are supported")),
    }
}

impl One for CellList {
    fn one() -> Self {
        CellList::point()
    }
}

impl Mul for CellList {
    type Output = CellList;
    fn mul(self, rhs: CellList) -> CellList {
        cell_product(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torusweights::sections_rep;
    use proptest::prelude::*;

    fn ch(a: i64, b: i64) -> Character {
        Character::new(a, b)
    }

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn line_torsion_rep() -> (WeightedRep, WeightedRep) {
        let mut v = sections_rep(3).unlabeled();
        v.insert(ch(2, 1), None);
        v.insert(ch(1, 2), None);
        (v, WeightedRep::from_weights([ch(2, 1), ch(1, 2)]))
    }

    #[test]
    fn pair_cells_examples() {
        let (v, w) = line_torsion_rep();
        let c = projective_pair_cells(&v, &w).unwrap();
        assert_eq!(c, CellList::from_counts([(0, 8), (1, 2)]));
        assert_eq!(projective_pair_cells(&v, &v).unwrap(), CellList::new());
        let free = sections_rep(2);
        assert_eq!(projective_pair_cells(&free, &WeightedRep::new()).unwrap(), CellList::from_counts([(0, 6)]));
        assert!(matches!(projective_pair_cells(&w, &v), Err(CellError::NotASubrep(_))));
    }

    #[test]
    fn product_example() {
        let a = CellList::from_counts([(0, 24), (1, 3)]);
        let b = CellList::from_counts([(0, 11), (1, 2)]);
        assert_eq!(cell_product(&a, &b), CellList::from_counts([(0, 264), (1, 81), (2, 6)]));
        assert_eq!(cell_product(&a, &CellList::point()), a);
        assert_eq!(cell_product(&CellList::affine(1), &CellList::affine(1)), CellList::affine(2));
    }

    #[test]
    fn poincare_rendering() {
        let c = CellList::from_counts([(0, 1545), (1, 144), (2, 6)]);
        assert_eq!(poincare(&c).to_string(), "1545 + 144*L + 6*L^2");
        assert_eq!(euler(&c), 1695);
        assert_eq!(poincare(&CellList::new()).to_string(), "0");
        assert_eq!(euler(&CellList::new()), 0);
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"0":1545,"1":144,"2":6}"#);
        let back: CellList = serde_json::from_str(r#"{"0":1545,"1":144,"2":6}"#).unwrap();
        assert_eq!(back, c);
    }

    fn euler_sequence_rep() -> WeightedRep {
        let mut v = WeightedRep::new();
        for i in 0..9 {
            v.insert(ch(i, 0), Some(format!("s{i}")));
        }
        for i in 0..3 {
            v.insert(ch(i, 5), Some(format!("a{i}")));
            v.insert(ch(i, 5), Some(format!("b{i}")));
        }
        v
    }

    #[test]
    fn grassmannian_profile() {
        let comps = grassmannian_fixed_components(&euler_sequence_rep(), 2);
        let count = |k: ComponentKind| comps.iter().filter(|c| c.kind == k).count();
        assert_eq!(count(ComponentKind::Point), 39);
        assert_eq!(count(ComponentKind::Projective { dim: 1 }), 27);
        assert_eq!(count(ComponentKind::Product { first: 1, second: 1 }), 3);
        assert_eq!(comps.len(), 69);
        let v = euler_sequence_rep();
        assert_eq!(grassmannian_fixed_components(&v, 15).len(), 1);
        let free = sections_rep(3);
        assert_eq!(grassmannian_fixed_components(&free, 1).len(), 10);
    }

    fn line_component() -> FixedComponent {
        grassmannian_fixed_components(&WeightedRep::from_weights([ch(0, 0), ch(0, 0)]), 1).remove(0)
    }

    fn square_component() -> FixedComponent {
        let v = WeightedRep::from_weights([ch(0, 0), ch(0, 0), ch(1, 0), ch(1, 0)]);
        grassmannian_fixed_components(&v, 2)
            .into_iter()
            .find(|c| c.kind == ComponentKind::Product { first: 1, second: 1 })
            .unwrap()
    }

    #[test]
    fn degeneracy_on_lines() {
        let c = line_component();
        assert_eq!(remove_degeneracy(&c, &p("x*y*u")).unwrap(), CellList::affine(1));
        assert_eq!(remove_degeneracy(&c, &p("x*y*(2*u - 3*v)")).unwrap(), CellList::affine(1));
        assert_eq!(remove_degeneracy(&c, &p("z*u^2")).unwrap(), CellList::affine(1));
        assert_eq!(remove_degeneracy(&c, &p("3*z")).unwrap(), CellList::projective(1));
        assert_eq!(remove_degeneracy(&c, &Poly::zero()).unwrap(), CellList::new());
        assert!(matches!(remove_degeneracy(&c, &p("z*u*v")), Err(CellError::UnsupportedLocus { .. })));
    }

    #[test]
    fn degeneracy_on_square() {
        let c = square_component();
        let diag = p("x*(u1*v2 - u2*v1)");
        assert_eq!(remove_degeneracy(&c, &diag).unwrap(), CellList::from_counts([(1, 1), (2, 1)]));
        assert_eq!(remove_degeneracy(&c, &p("y*(u1*u2 + 2*v1*v2 + u1*v2)")).unwrap(), CellList::from_counts([(1, 1), (2, 1)]));
        assert!(remove_degeneracy(&c, &p("x*u1*u2")).is_err());
        assert_eq!(remove_degeneracy(&c, &p("x^2")).unwrap(), CellList::from_counts([(0, 1), (1, 2), (2, 1)]));
    }

    #[test]
    fn degeneracy_on_points() {
        let c = grassmannian_fixed_components(&sections_rep(1), 1).remove(0);
        assert_eq!(remove_degeneracy(&c, &p("x*y*z")).unwrap(), CellList::point());
        assert_eq!(remove_degeneracy(&c, &Poly::zero()).unwrap(), CellList::new());
    }

    fn rep_strategy() -> impl Strategy<Value = WeightedRep> {
        prop::collection::vec((0i64..4, 0i64..3), 0..12).prop_map(|ws| WeightedRep::from_weights(ws.into_iter().map(|(a, b)| ch(a, b))))
    }

    fn cells_strategy() -> impl Strategy<Value = CellList> {
        prop::collection::vec((0u32..3, 0u64..20), 0..4).prop_map(CellList::from_counts)
    }

    proptest! {
        #[test]
        fn pair_cells_euler(v in rep_strategy(), mask in prop::collection::vec(any::<bool>(), 12)) {
            let mut w = WeightedRep::new();
            let mut i = 0;
            for (chi, k) in v.iter() {
                for _ in 0..k {
                    if mask[i % mask.len()] { w.insert(chi, None); }
                    i += 1;
                }
            }
            let c = projective_pair_cells(&v, &w).unwrap();
            prop_assert_eq!(euler(&c), u64::from(v.dim() - w.dim()));
        }

        #[test]
        fn grassmannian_count_matches(v in rep_strategy(), r in 1u32..4) {
            prop_assume!(r <= v.dim());
            prop_assert_eq!(grassmannian_fixed_components(&v, r).len() as u64, v.sub_multiset_count(r));
        }

        #[test]
        fn euler_multiplicative(a in cells_strategy(), b in cells_strategy()) {
            let ab = cell_product(&a, &b);
            prop_assert_eq!(euler(&ab), euler(&a) * euler(&b));
            prop_assert_eq!(poincare(&ab), &poincare(&a) * &poincare(&b));
            prop_assert_eq!(euler(&(&a + &b)), euler(&a) + euler(&b));
        }

        #[test]
        fn removal_never_increases_euler(a in -3i64..4, b in -3i64..4) {
            let c = line_component();
            let det = &Poly::z() * &(&Poly::param("u").scale(&rat(a)) + &Poly::param("v").scale(&rat(b)));
            if let Ok(cells) = remove_degeneracy(&c, &det) {
                prop_assert!(euler(&cells) <= euler(&c.cells().unwrap()));
            }
        }
    }
}
