//! Presentation fixtures and constructors for the sheaves used by the
//! strata recipes.

use serde::Deserialize;

use super::StrataError;
use crate::equipres::{torsion_free_projection, EquivariantMatrix, SheafPresentation};
use crate::exactpoly::{monomial_gcd, Exponent, Poly};
use crate::planegeom::MonomialSubscheme;
use crate::torusweights::monomials_of_degree;

/// A shipped presentation with the data needed to cross-check its
/// sections against the torsion and torsion-free parts separately.
#[derive(Debug, Clone, Deserialize)]
pub struct Fixture {
    pub sheaf: SheafPresentation,
    /// Twist at which the sections are compared.
    pub section_degree: i64,
    /// Generators of the annihilator ideal of the torsion generator.
    pub torsion_annihilator: Vec<Poly>,
}

impl Fixture {
    pub fn annihilator_exponents(&self) -> Vec<Exponent> {
        self.torsion_annihilator.iter().filter_map(|p| p.as_term().map(|(e, _)| e.clone())).collect()
    }

    /// The distinct images under coordinate permutations, keyed by the
    /// permuted annihilator.
    pub fn orbit(&self) -> Result<Vec<(String, Fixture)>, StrataError> {
        super::orbit(|perm| {
            let f = self.permuted(perm)?;
            let key = f.torsion_annihilator.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            Ok((key, f))
        })
    }

    pub fn permuted(&self, perm: [usize; 3]) -> Result<Fixture, StrataError> {
        Ok(Fixture {
            sheaf: self.sheaf.permuted(perm)?,
            section_degree: self.section_degree,
            torsion_annihilator: self.torsion_annihilator.iter().map(|p| p.permute(perm)).collect(),
        })
    }
}

pub const LINE_TORSION: &str = include_str!("../../data/presentations/line_torsion.json");
pub const DOUBLE_LINE_TORSION: &str = include_str!("../../data/presentations/double_line_torsion.json");
pub const EULER_SEQUENCE: &str = include_str!("../../data/presentations/euler_sequence.json");

/// Every shipped fixture by file stem.
pub const SHIPPED: [(&str, &str); 3] =
    [("line_torsion", LINE_TORSION), ("double_line_torsion", DOUBLE_LINE_TORSION), ("euler_sequence", EULER_SEQUENCE)];

pub fn parse_fixture(json: &str) -> Result<Fixture, StrataError> {
    serde_json::from_str(json).map_err(|e| StrataError::Invariant(format!("malformed fixture: {e}")))
}

fn shipped(json: &str) -> Fixture {
    parse_fixture(json).expect("shipped fixture parses")
}

/// Rank-one quotient with torsion `O_H(-1)` along `H = {x = 0}` and
/// torsion-free part `O(1)`.
pub fn line_torsion() -> Fixture {
    shipped(LINE_TORSION)
}

/// Rank-one quotient with torsion along the double line `z^2 = 0`.
pub fn double_line_torsion() -> Fixture {
    shipped(DOUBLE_LINE_TORSION)
}

/// The cokernel of `(x, y, z)^T : O(-1) -> O^3`.
pub fn euler_sequence() -> Fixture {
    shipped(EULER_SEQUENCE)
}

/// Rank-one quotient with torsion along the conic `l*m = 0`, where `l` and
/// `m` are coordinates. The target is `O^4`; the last three summands map
/// onto `O(1)` by `(x, y, z)` and the first generates the torsion.
pub fn conic_torsion(l: usize, m: usize) -> Result<Fixture, StrataError> {
    let koszul = |i: usize| -> [Poly; 3] {
        // Syzygy of (x, y, z) with no component on coordinate i.
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let mut s = [Poly::zero(), Poly::zero(), Poly::zero()];
        s[j] = Poly::var(k);
        s[k] = -&Poly::var(j);
        s
    };
    let mut columns: Vec<[Poly; 4]> = Vec::new();
    let sm = koszul(m);
    columns.push([Poly::var(l), sm[0].clone(), sm[1].clone(), sm[2].clone()]);
    for i in (0..3).filter(|&i| i != m) {
        let s = koszul(i);
        columns.push([Poly::zero(), s[0].clone(), s[1].clone(), s[2].clone()]);
    }
    let entries: Vec<Vec<Poly>> = (0..4).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
    let matrix = EquivariantMatrix::from_target_degrees(&[0, 0, 0, 0], entries)?;
    let unit = vec![vec![Poly::one(), Poly::zero(), Poly::zero(), Poly::zero()]];
    let sheaf = SheafPresentation::new(format!("rank-one quotient with torsion along {}", conic_name(l, m)), matrix)
        .with_inclusion(unit)?
        .with_minor_projection()?;
    Ok(Fixture { sheaf, section_degree: 2, torsion_annihilator: vec![&Poly::var(l) * &Poly::var(m)] })
}

fn conic_name(l: usize, m: usize) -> String {
    format!("{} = 0", &Poly::var(l) * &Poly::var(m))
}

/// Cokernel of a single column into summands of the given degrees, with
/// the projection onto its torsion-free part.
pub fn column_cokernel(
    name: impl Into<String>,
    column: &[Poly],
    target_degrees: &[i64],
) -> Result<SheafPresentation, StrataError> {
    let entries: Vec<Vec<Poly>> = column.iter().map(|p| vec![p.clone()]).collect();
    let matrix = EquivariantMatrix::from_target_degrees(target_degrees, entries)?;
    Ok(SheafPresentation::new(name, matrix).with_minor_projection()?)
}

/// Column with `a` in row `i` and `-b` in row `j`.
fn pair_column(n: usize, i: usize, a: Poly, j: usize, b: Poly) -> Vec<Poly> {
    let mut c = vec![Poly::zero(); n];
    c[i] = a;
    c[j] = -&b;
    c
}

/// Syzygies `(l/g_i) e_i - (l/g_j) e_j` of monomial generators whose
/// least common multiple `l` has degree `deg`.
pub fn pair_syzygies(gens: &[Exponent], deg: u32) -> Result<Vec<Vec<Poly>>, StrataError> {
    let mut out = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let g = monomial_gcd(&gens[i], &gens[j])?;
            let l = gens[i].mul(&gens[j]).div(&g).expect("gcd divides");
            if l.degree() != deg {
                continue;
            }
            let a = Poly::monomial(l.div(&gens[i]).expect("divides"));
            let b = Poly::monomial(l.div(&gens[j]).expect("divides"));
            out.push(pair_column(gens.len(), i, a, j, b));
        }
    }
    Ok(out)
}

pub fn columns_to_rows(columns: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let n = columns.first().map_or(0, Vec::len);
    (0..n).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect()
}

/// `I_Z(2)` for a length-3 subscheme not on a line, as the cokernel of a
/// 3 x 2 matrix of linear monomial syzygies among its three conics.
pub fn hilbert_burch(z: &MonomialSubscheme) -> Result<SheafPresentation, StrataError> {
    let gens: Vec<Exponent> = monomials_of_degree(2).into_iter().filter(|m| z.ideal_contains(m)).collect();
    if gens.len() != 3 {
        return Err(StrataError::Invariant(format!("{z} lies on {} independent conics", gens.len())));
    }
    let syz = pair_syzygies(&gens, 3)?;
    for i in 0..syz.len() {
        for j in i + 1..syz.len() {
            let matrix =
                EquivariantMatrix::from_target_degrees(&[0, 0, 0], columns_to_rows(&[syz[i].clone(), syz[j].clone()]))?;
            let Ok(proj) = torsion_free_projection(&matrix) else { continue };
            let minors: Vec<Option<Exponent>> =
                (0..3).map(|c| proj.entry(0, c).as_term().map(|(e, _)| e.clone())).collect();
            if minors.iter().zip(&gens).all(|(m, g)| m.as_ref() == Some(g)) {
                let name = format!("ideal of {z} twisted by 2");
                return Ok(SheafPresentation::new(name, matrix).with_minor_projection()?);
            }
        }
    }
    Err(StrataError::Invariant(format!("no Hilbert-Burch matrix of monomial syzygies for {z}")))
}

/// Every presentation with a cyclic torsion subsheaf used by the strata:
/// torsion along lines, conics and the extension classes, each with the
/// twist at which its sections enter a fixed-locus computation.
pub fn torsion_fixtures() -> Result<Vec<Fixture>, StrataError> {
    let mut out = Vec::new();
    let mut push_orbit = |f: Fixture| -> Result<(), StrataError> {
        out.extend(f.orbit()?.into_iter().map(|(_, f)| f));
        Ok(())
    };
    push_orbit(line_torsion())?;
    let mut line3 = line_torsion();
    line3.section_degree = 3;
    push_orbit(line3)?;
    push_orbit(double_line_torsion())?;
    push_orbit(conic_torsion(0, 1)?)?;
    for h in super::extension::pi3_h_vectors() {
        push_orbit(super::extension::pi3_presentation(&h)?)?;
    }
    for class in super::extension::pi2_classes()? {
        for c in class.samples() {
            out.push(class.sheaf(&c)?);
        }
    }
    let quads = monomials_of_degree(2);
    for i in 0..quads.len() {
        for j in i + 1..quads.len() {
            let (sheaf, g) = super::pairs::quadric_pair_sheaf(&quads[i], &quads[j])?;
            if g.degree() > 0 {
                out.push(Fixture { sheaf, section_degree: 3, torsion_annihilator: vec![Poly::monomial(g)] });
            }
        }
    }
    Ok(out)
}
