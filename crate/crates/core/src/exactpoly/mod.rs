//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are the plane coordinates `x`, `y`, `z` plus at most
//! [`MAX_PARAMETERS`] named cell parameters. Terms are kept in a
//! `BTreeMap` keyed by [`Exponent`], whose `Ord` is a monomial order:
//! graded-lexicographic on the coordinates with `x > y > z`, then a
//! graded-lexicographic block on parameters with names ordered
//! alphabetically (earlier names are larger).

mod det;
mod parse;

pub use det::poly_det;
pub use parse::ParsePolyError;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational coefficient.
pub type Rational = BigRational;

/// Largest number of distinct parameters a single polynomial may carry.
pub const MAX_PARAMETERS: usize = 4;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("{dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("monomial carries parameter exponents: {0}")]
    ParameterInMonomial(String),
    #[error("polynomial has parameters: {0}")]
    HasParameters(String),
    #[error("no value assigned to parameter `{0}`")]
    MissingAssignment(String),
    #[error("{0} parameters exceed the bound of {MAX_PARAMETERS}")]
    TooManyParameters(usize),
}

/// One of the three torus-fixed points of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoordinatePoint {
    /// `[1,0,0]`
    X,
    /// `[0,1,0]`
    Y,
    /// `[0,0,1]`
    Z,
}

impl CoordinatePoint {
    pub const ALL: [CoordinatePoint; 3] = [CoordinatePoint::X, CoordinatePoint::Y, CoordinatePoint::Z];

    /// Index of the coordinate that is nonzero at this point.
    pub fn index(self) -> usize {
        match self {
            CoordinatePoint::X => 0,
            CoordinatePoint::Y => 1,
            CoordinatePoint::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }

    /// Bracket notation, e.g. `[1,0,0]`.
    pub fn bracket(self) -> &'static str {
        match self {
            CoordinatePoint::X => "[1,0,0]",
            CoordinatePoint::Y => "[0,1,0]",
            CoordinatePoint::Z => "[0,0,1]",
        }
    }

    pub fn from_bracket(s: &str) -> Option<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        Self::ALL.into_iter().find(|p| p.bracket() == compact)
    }
}

/// Exponent vector of a monomial: coordinate exponents and parameter
/// exponents (sorted by name, zero exponents never stored).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Exponent {
    coords: [u32; 3],
    params: Vec<(String, u32)>,
}

impl Exponent {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn coords(i: u32, j: u32, k: u32) -> Self {
        Exponent { coords: [i, j, k], params: Vec::new() }
    }

    pub fn param(name: &str, e: u32) -> Self {
        let params = if e == 0 { Vec::new() } else { vec![(name.to_string(), e)] };
        Exponent { coords: [0; 3], params }
    }

    pub fn coord_exponents(&self) -> [u32; 3] {
        self.coords
    }

    pub fn param_exponents(&self) -> &[(String, u32)] {
        &self.params
    }

    pub fn has_params(&self) -> bool {
        !self.params.is_empty()
    }

    /// Degree in `x, y, z`.
    pub fn degree(&self) -> u32 {
        self.coords.iter().sum()
    }

    fn param_degree(&self) -> u32 {
        self.params.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Exponent) -> Exponent {
        let coords = [
            self.coords[0] + other.coords[0],
            self.coords[1] + other.coords[1],
            self.coords[2] + other.coords[2],
        ];
        let mut merged: BTreeMap<&str, u32> = BTreeMap::new();
        for (n, e) in self.params.iter().chain(other.params.iter()) {
            *merged.entry(n.as_str()).or_default() += e;
        }
        let params = merged.into_iter().map(|(n, e)| (n.to_string(), e)).collect();
        Exponent { coords, params }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Exponent) -> Option<Exponent> {
        let mut coords = [0u32; 3];
        for (c, (a, b)) in coords.iter_mut().zip(self.coords.iter().zip(&other.coords)) {
            *c = a.checked_sub(*b)?;
        }
        let mut mine: BTreeMap<&str, u32> = self.params.iter().map(|(n, e)| (n.as_str(), *e)).collect();
        for (n, e) in &other.params {
            let slot = mine.get_mut(n.as_str())?;
            *slot = slot.checked_sub(*e)?;
        }
        let params = mine.into_iter().filter(|(_, e)| *e > 0).map(|(n, e)| (n.to_string(), e)).collect();
        Some(Exponent { coords, params })
    }

    /// Applies a permutation of the coordinates: exponent of variable
    /// `i` moves to variable `perm[i]`.
    pub fn permute(&self, perm: [usize; 3]) -> Exponent {
        let mut coords = [0u32; 3];
        for i in 0..3 {
            coords[perm[i]] = self.coords[i];
        }
        Exponent { coords, params: self.params.clone() }
    }

    fn param_exp(&self, name: &str) -> u32 {
        self.params.iter().find(|(n, _)| n == name).map_or(0, |(_, e)| *e)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coords.cmp(&other.coords))
            .then_with(|| self.param_degree().cmp(&other.param_degree()))
            .then_with(|| {
                let names: BTreeSet<&str> =
                    self.params.iter().chain(other.params.iter()).map(|(n, _)| n.as_str()).collect();
                for n in names {
                    match self.param_exp(n).cmp(&other.param_exp(n)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Componentwise minimum of two parameter-free monomials.
pub fn monomial_gcd(m1: &Exponent, m2: &Exponent) -> Result<Exponent, PolyError> {
    for m in [m1, m2] {
        if m.has_params() {
            return Err(PolyError::ParameterInMonomial(Poly::monomial(m.clone()).to_string()));
        }
    }
    Ok(Exponent::coords(
        m1.coords[0].min(m2.coords[0]),
        m1.coords[1].min(m2.coords[1]),
        m1.coords[2].min(m2.coords[2]),
    ))
}

/// A polynomial with exact rational coefficients; zero coefficients are
/// never stored, so structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Exponent::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn x() -> Self {
        Self::monomial(Exponent::coords(1, 0, 0))
    }

    pub fn y() -> Self {
        Self::monomial(Exponent::coords(0, 1, 0))
    }

    pub fn z() -> Self {
        Self::monomial(Exponent::coords(0, 0, 1))
    }

    /// The coordinate variable with index `i` (0 = x).
    pub fn var(i: usize) -> Self {
        let mut e = [0u32; 3];
        e[i] = 1;
        Self::monomial(Exponent::coords(e[0], e[1], e[2]))
    }

    pub fn param(name: &str) -> Self {
        Self::monomial(Exponent::param(name, 1))
    }

    pub fn monomial(e: Exponent) -> Self {
        Self::term(Rational::one(), e)
    }

    pub fn xyz(i: u32, j: u32, k: u32) -> Self {
        Self::monomial(Exponent::coords(i, j, k))
    }

    pub fn term(c: Rational, e: Exponent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest term in the monomial order.
    pub fn leading_term(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().next_back()
    }

    /// The single term of a monomial-times-scalar polynomial.
    pub fn as_term(&self) -> Option<(&Exponent, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// The constant value, if the polynomial has no variables at all.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Exponent::one()).cloned(),
            _ => None,
        }
    }

    pub fn parameters(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|e| e.params.iter().map(|(n, _)| n.clone())).collect()
    }

    pub fn has_params(&self) -> bool {
        self.terms.keys().any(Exponent::has_params)
    }

    /// Errors when more than [`MAX_PARAMETERS`] distinct parameters occur.
    pub fn check_parameter_bound(&self) -> Result<(), PolyError> {
        let n = self.parameters().len();
        if n > MAX_PARAMETERS {
            Err(PolyError::TooManyParameters(n))
        } else {
            Ok(())
        }
    }

    /// Common coordinate degree of all terms, `None` for zero or
    /// inhomogeneous polynomials.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Exponent::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Exponent) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, v)| (e.mul(m), v.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::one(), |acc, _| &acc * self)
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Exact quotient `self / q`.
    pub fn divide_exact(&self, q: &Poly) -> Result<Poly, PolyError> {
        let not_divisible = || PolyError::NotDivisible { dividend: self.to_string(), divisor: q.to_string() };
        let (lq_e, lq_c) = q.leading_term().ok_or_else(not_divisible)?;
        let (lq_e, lq_c) = (lq_e.clone(), lq_c.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((le, lc)) = rem.leading_term() {
            let e = le.div(&lq_e).ok_or_else(not_divisible)?;
            let c = lc / &lq_c;
            let t = Poly::term(c, e);
            rem = &rem - &(&t * q);
            quot = &quot + &t;
        }
        Ok(quot)
    }

    /// Value with the coordinate of `point` set to 1 and the others to 0.
    pub fn eval_at_fixed_point(&self, point: CoordinatePoint) -> Result<Rational, PolyError> {
        if self.has_params() {
            return Err(PolyError::HasParameters(self.to_string()));
        }
        let idx = point.index();
        Ok(self
            .terms
            .iter()
            .filter(|(e, _)| (0..3).all(|i| i == idx || e.coords[i] == 0))
            .fold(Rational::zero(), |acc, (_, c)| acc + c))
    }

    /// Replaces every parameter by its assigned value.
    pub fn substitute_parameters(&self, assignment: &BTreeMap<String, Rational>) -> Result<Poly, PolyError> {
        self.check_parameter_bound()?;
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut coef = c.clone();
            for (name, k) in &e.params {
                let v = assignment.get(name).ok_or_else(|| PolyError::MissingAssignment(name.clone()))?;
                coef *= num_traits::pow(v.clone(), *k as usize);
            }
            out.add_term(Exponent::coords(e.coords[0], e.coords[1], e.coords[2]), coef);
        }
        Ok(out)
    }

    /// Coefficient polynomials (in the parameters) grouped by coordinate
    /// monomial.
    pub fn coordinate_coefficients(&self) -> BTreeMap<Exponent, Poly> {
        let mut out: BTreeMap<Exponent, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let key = Exponent::coords(e.coords[0], e.coords[1], e.coords[2]);
            let pe = Exponent { coords: [0; 3], params: e.params.clone() };
            out.entry(key).or_default().add_term(pe, c.clone());
        }
        out
    }

    pub fn permute(&self, perm: [usize; 3]) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (e.permute(perm), c.clone())).collect() }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &Exponent, mut first: bool) -> fmt::Result {
    let names = ["x", "y", "z"];
    let factors = (0..3)
        .filter(|&i| e.coords[i] > 0)
        .map(|i| (names[i].to_string(), e.coords[i]))
        .chain(e.params.iter().cloned());
    for (name, k) in factors {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{k}")?;
        }
    }
    Ok(())
}

/// Renders leading term first, e.g. `x^2*y - 3/2*z^3`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let is_const = *e == Exponent::one();
            if is_const {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write_monomial(f, e, true)?;
            } else {
                write!(f, "{mag}")?;
                write_monomial(f, e, false)?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for Poly {
    type Err = ParsePolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_poly(s)
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
