//! Naive cross-checks kept apart from the main computation paths:
//! partition generating functions, section counts assembled from an exact
//! sequence, and determinants by cofactor expansion.

use thiserror::Error;

use crate::exactpoly::{Exponent, Poly};
use crate::torusweights::{Character, WeightedRep};

/// Largest matrix [`cofactor_det`] accepts.
pub const MAX_COFACTOR_SIZE: usize = 6;

/// Default truncation order of [`GfSeries`].
pub const DEFAULT_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("coefficient {n} requested from a series of order {order}")]
    OrderExceeded { n: usize, order: usize },
    #[error("{0} x {0} matrix is too large for cofactor expansion")]
    TooLarge(usize),
    #[error("cofactor expansion needs a square matrix")]
    NotSquare,
}

/// Integer power series truncated after `q^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfSeries {
    coeffs: Vec<u64>,
}

impl GfSeries {
    /// `sum p(m) q^m`, counting partitions by brute-force recursion.
    pub fn partitions(order: usize) -> Self {
        fn count(n: usize, max_part: usize) -> u64 {
            if n == 0 {
                return 1;
            }
            (1..=max_part.min(n)).map(|p| count(n - p, p)).sum()
        }
        GfSeries { coeffs: (0..=order.max(8)).map(|n| count(n, n)).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, n: usize) -> Result<u64, OracleError> {
        self.coeffs.get(n).copied().ok_or(OracleError::OrderExceeded { n, order: self.order() })
    }

    pub fn mul(&self, other: &GfSeries) -> GfSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|n| (0..=n).map(|i| self.coeffs[i] * other.coeffs[n - i]).sum()).collect();
        GfSeries { coeffs }
    }
}

/// Number of torus-fixed length-`n` subschemes of the plane: the
/// coefficient of `q^n` in the cube of the partition series.
pub fn hilb_count_via_gf(n: usize) -> Result<u64, OracleError> {
    let p = GfSeries::partitions(DEFAULT_ORDER);
    p.mul(&p).mul(&p).coefficient(n)
}

/// Sections of a sheaf assembled from a torsion part (shifted by `twist`)
/// and a quotient part.
pub fn splice_section_rep(torsion: &WeightedRep, twist: Character, quotient: &WeightedRep) -> WeightedRep {
    let mut out = WeightedRep::new();
    for (w, m) in torsion.iter() {
        for _ in 0..m {
            out.insert(w + twist, None);
        }
    }
    for (w, m) in quotient.iter() {
        for _ in 0..m {
            out.insert(w, None);
        }
    }
    out
}

fn degree_monomials(n: i64) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    if n < 0 {
        return out;
    }
    let n = n as u32;
    for i in 0..=n {
        for j in 0..=n - i {
            out.push([i, j, n - i - j]);
        }
    }
    out
}

fn divides(g: &Exponent, m: &[u32; 3]) -> bool {
    g.coord_exponents().iter().zip(m).all(|(a, b)| a <= b)
}

fn weight_of(m: &[u32; 3]) -> Character {
    Character::new(m[1] as i64, m[2] as i64)
}

/// Weights of degree-`n` monomials outside the monomial ideal generated
/// by `annihilator`: the sections of `(O/J)(n)` for a saturated monomial
/// ideal `J`.
pub fn quotient_ring_rep(annihilator: &[Exponent], n: i64) -> WeightedRep {
    let mut out = WeightedRep::new();
    for m in degree_monomials(n) {
        if !annihilator.iter().any(|g| divides(g, &m)) {
            out.insert(weight_of(&m), None);
        }
    }
    out
}

/// Weights of degree-`n` monomials inside the ideal generated by
/// `generators`, shifted by `-twist`.
pub fn monomial_ideal_rep(generators: &[Exponent], n: i64, twist: Character) -> WeightedRep {
    let mut out = WeightedRep::new();
    for m in degree_monomials(n) {
        if generators.iter().any(|g| divides(g, &m)) {
            out.insert(weight_of(&m) - twist, None);
        }
    }
    out
}

/// Like [`monomial_ideal_rep`] for the saturation of the ideal: a monomial
/// counts when all its multiples of some fixed large degree lie in the
/// ideal.
pub fn saturated_ideal_rep(generators: &[Exponent], n: i64, twist: Character) -> WeightedRep {
    let max_deg = generators.iter().map(|g| g.coord_exponents().iter().sum::<u32>()).max().unwrap_or(0) as i64;
    let probe = degree_monomials(2 * max_deg + 2);
    let mut out = WeightedRep::new();
    for m in degree_monomials(n) {
        let inside = probe.iter().all(|u| {
            let prod = [m[0] + u[0], m[1] + u[1], m[2] + u[2]];
            generators.iter().any(|g| divides(g, &prod))
        });
        if inside {
            out.insert(weight_of(&m) - twist, None);
        }
    }
    out
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<Poly>]) -> Result<Poly, OracleError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(OracleError::NotSquare);
    }
    if n > MAX_COFACTOR_SIZE {
        return Err(OracleError::TooLarge(n));
    }
    fn expand(m: &[Vec<Poly>]) -> Poly {
        match m.len() {
            0 => Poly::one(),
            1 => m[0][0].clone(),
            n => {
                let mut acc = Poly::zero();
                for j in 0..n {
                    if m[0][j].is_zero() {
                        continue;
                    }
                    let minor: Vec<Vec<Poly>> = m[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
                        .collect();
                    let term = &m[0][j] * &expand(&minor);
                    acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }
    Ok(expand(m))
}
