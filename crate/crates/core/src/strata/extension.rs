//! Strata of sheaves with one-dimensional torsion: the fixed locus in
//! each space of sections is a projective space minus the torsion
//! sections, paved weight space by weight space.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::fixtures::{columns_to_rows, conic_torsion, double_line_torsion, line_torsion, pair_syzygies, Fixture};
use super::{weight_json, Builder, StrataError};
use crate::cellcalc::{cell_product, projective_pair_cells, CellList};
use crate::equipres::{section_space, EquivariantMatrix, SheafPresentation};
use crate::exactpoly::{ratio, rat, Exponent, Poly, Rational};
use crate::torusweights::{Character, WeightedRep};

/// Sections at twist `k` and their torsion part.
pub fn section_profile(p: &SheafPresentation, k: i64) -> Result<(WeightedRep, WeightedRep), StrataError> {
    let s = section_space(p, k)?;
    Ok((s.rep(), s.torsion_rep()))
}

/// Quotients with torsion along a coordinate line, sections at twist `k`.
pub(super) fn line_torsion_stratum(b: &mut Builder, k: i64) -> Result<(), StrataError> {
    let mut profiles = BTreeMap::new();
    for (line, f) in line_torsion().orbit()? {
        let (v, w) = section_profile(&f.sheaf, k)?;
        let cells = b.add_pair(&json!({ "torsion_line": format!("{line} = 0") }), &v, &w)?;
        profiles.insert(format!("{line} = 0"), json!({ "sections": v.dim(), "torsion": w.dim(), "cells": cells }));
    }
    b.detail("torsion_lines", profiles);
    Ok(())
}

/// Torsion along a conic: double lines and pairs of coordinate lines.
pub(super) fn pi1(b: &mut Builder) -> Result<(), StrataError> {
    let mut profiles = BTreeMap::new();
    let mut families = double_line_torsion().orbit()?;
    families.extend(conic_torsion(0, 1)?.orbit()?);
    for (conic, f) in families {
        let (v, w) = section_profile(&f.sheaf, f.section_degree)?;
        let cells = b.add_pair(&json!({ "torsion_conic": format!("{conic} = 0") }), &v, &w)?;
        profiles.insert(format!("{conic} = 0"), json!({ "sections": v.dim(), "torsion": w.dim(), "cells": cells }));
    }
    b.detail("torsion_conics", profiles);
    Ok(())
}

/// The basis `(x^2, xy, xz, yz, y^2)` of conics through `[0,0,1]`.
fn conics_through_point() -> [Poly; 5] {
    [Poly::xyz(2, 0, 0), Poly::xyz(1, 1, 0), Poly::xyz(1, 0, 1), Poly::xyz(0, 1, 1), Poly::xyz(0, 2, 0)]
}

/// Coordinate vectors `h` in the basis of conics through the point for
/// which some defining identity of the excluded locus fails: one of
/// `h1 h2 - h0 h3`, `h1^2 - h0 h4`, `h1 h3 - h2 h1` is nonzero.
pub fn pi3_h_vectors() -> Vec<[i64; 5]> {
    (0..5)
        .map(|i| {
            let mut h = [0i64; 5];
            h[i] = 1;
            h
        })
        .filter(|h| h[1] * h[2] - h[0] * h[3] != 0 || h[1] * h[1] - h[0] * h[4] != 0 || h[1] * h[3] - h[2] * h[1] != 0)
        .collect()
}

/// The quotient of the free module on the conics through `[0,0,1]` other
/// than the one selected by `h` by their linear syzygies. Its torsion is
/// generated by a quadratic syzygy.
pub fn pi3_presentation(h: &[i64; 5]) -> Result<Fixture, StrataError> {
    let gens: Vec<Exponent> = conics_through_point()
        .iter()
        .zip(h)
        .filter(|(_, &c)| c == 0)
        .map(|(p, _)| p.as_term().expect("monomial").0.clone())
        .collect();
    let linear = pair_syzygies(&gens, 3)?;
    if linear.len() + 1 != gens.len() {
        return Err(StrataError::Invariant(format!("expected {} linear syzygies, found {}", gens.len() - 1, linear.len())));
    }
    let matrix = EquivariantMatrix::from_target_degrees(&vec![0; gens.len()], columns_to_rows(&linear))?;
    let bare = SheafPresentation::new("quotient of a one-point ideal by linear syzygies", matrix);
    let s = section_space(&bare, 2)?;
    let mut torsion = None;
    for col in pair_syzygies(&gens, 4)? {
        let w = crate::torusweights::poly_weight(col.iter().find(|p| !p.is_zero()).expect("nonzero column"))
            .expect("monomial entry");
        let twist = bare.presentation.target().summands[col.iter().position(|p| !p.is_zero()).unwrap()].twist;
        let weight = w - twist;
        let coords = s.coordinates(weight, &col).ok_or_else(|| StrataError::Invariant("syzygy outside its weight".into()))?;
        if s.block(weight).is_some_and(|blk| blk.reduce(&coords).iter().any(|c| !c.is_zero())) {
            torsion = Some(col);
            break;
        }
    }
    let col = torsion.ok_or_else(|| StrataError::Invariant("no torsion syzygy".into()))?;
    let sheaf = bare.with_inclusion(vec![col])?.with_minor_projection()?;
    Ok(Fixture { sheaf, section_degree: 2, torsion_annihilator: vec![Poly::z()] })
}

pub(super) fn pi3(b: &mut Builder) -> Result<(), StrataError> {
    let hs = pi3_h_vectors();
    b.detail("h_vectors", &hs);
    let mut profiles = BTreeMap::new();
    for h in &hs {
        for (line, f) in pi3_presentation(h)?.orbit()? {
            let (v, w) = section_profile(&f.sheaf, f.section_degree)?;
            let data = json!({ "h": h, "torsion_line": format!("{line} = 0") });
            let cells = b.add_pair(&data, &v, &w)?;
            profiles.insert(format!("{line} = 0"), json!({ "sections": v.dim(), "torsion": w.dim(), "cells": cells }));
        }
    }
    b.detail("torsion_lines", profiles);
    Ok(())
}

/// A fixed class of extensions `0 -> O(-1) -> O + Q1 -> Q_f -> 0`, where
/// `Q1` has torsion along a line and the map is `(b, delta)`.
#[derive(Debug, Clone)]
pub struct Pi2Class {
    pub torsion_line: String,
    pub delta_weight: Character,
    /// Lift of `delta` to the free target of `Q1`; contains the parameter
    /// `c` for the family through the torsion section.
    pub delta: Vec<Poly>,
    pub a: Poly,
    pub b: Poly,
    pub family: bool,
    q1: Fixture,
}

impl Pi2Class {
    /// Presentation of `Q_f`; `c` fixes the parameter of a family.
    pub fn sheaf(&self, c: &Rational) -> Result<Fixture, StrataError> {
        let assign = BTreeMap::from([("c".to_string(), c.clone())]);
        let delta = self.delta.iter().map(|p| p.substitute_parameters(&assign)).collect::<Result<Vec<_>, _>>()?;
        let q1 = &self.q1.sheaf.presentation;
        let mut entries = vec![vec![self.b.clone(), Poly::zero(), Poly::zero()]];
        for (i, d) in delta.iter().enumerate() {
            entries.push(vec![d.clone(), q1.entry(i, 0).clone(), q1.entry(i, 1).clone()]);
        }
        let matrix = EquivariantMatrix::from_target_degrees(&[0, 0, 0, 0], entries)?;
        let inc = self.q1.sheaf.torsion_inclusion.as_ref().expect("line torsion fixture has inclusion");
        let mut column = vec![Poly::zero()];
        column.extend((0..3).map(|i| inc.entry(i, 0).clone()));
        let sheaf = SheafPresentation::new("extension of a two-point ideal by line torsion", matrix)
            .with_inclusion(vec![column])?
            .with_minor_projection()?;
        Ok(Fixture { sheaf, section_degree: 2, torsion_annihilator: self.q1.torsion_annihilator.clone() })
    }

    /// Parameter values at which the fixed locus of sections is computed.
    pub fn samples(&self) -> Vec<Rational> {
        if self.family {
            vec![rat(0), rat(1), ratio(7, 3)]
        } else {
            vec![rat(0)]
        }
    }

    pub fn label(&self) -> String {
        format!("{}: delta {} a={} b={}", self.torsion_line, self.delta_weight, self.a, self.b)
    }
}

/// Every fixed class `Q_f`, grouped by torsion line.
pub fn pi2_classes() -> Result<Vec<Pi2Class>, StrataError> {
    let mut out = Vec::new();
    for (line, q1) in line_torsion().orbit()? {
        let s = section_space(&q1.sheaf, 1)?;
        let proj = q1.sheaf.projection.clone().map_or_else(
            || crate::equipres::torsion_free_projection(&q1.sheaf.presentation),
            Ok,
        )?;
        for (&w, blk) in &s.blocks {
            let unit = |i: usize| -> Vec<Rational> {
                let mut v = vec![Rational::zero(); blk.basis.len()];
                v[i] = Rational::one();
                v
            };
            let (delta, family) = match (blk.dim(), blk.torsion_dim()) {
                (0, _) => continue,
                (1, 0) => (s.lift(w, &unit(blk.complement[0])), false),
                (2, 1) => {
                    let t = &blk.torsion[0];
                    let red = blk.reduce(t);
                    let pick = if red[1].is_zero() { 1 } else { 0 };
                    let base = s.lift(w, &unit(blk.complement[pick]));
                    let tors = s.lift(w, t);
                    let c = Poly::param("c");
                    (base.iter().zip(&tors).map(|(p, q)| p + &(&c * q)).collect(), true)
                }
                (d, t) => {
                    return Err(StrataError::Invariant(format!(
                        "weight {w} of the extension data has {d} sections and {t} torsion sections"
                    )))
                }
            };
            let zero = BTreeMap::from([("c".to_string(), Rational::zero())]);
            let mut a = Poly::zero();
            for (i, d) in delta.iter().enumerate() {
                a = &a + &(proj.entry(0, i) * &d.substitute_parameters(&zero)?);
            }
            let (a_exp, _) = a.as_term().ok_or_else(|| StrataError::Invariant(format!("image {a} is not a monomial")))?;
            let a_exp = a_exp.clone();
            for v in 0..3 {
                if a_exp.coord_exponents()[v] != 0 {
                    continue;
                }
                out.push(Pi2Class {
                    torsion_line: format!("{line} = 0"),
                    delta_weight: w,
                    delta: delta.clone(),
                    a: Poly::monomial(a_exp.clone()),
                    b: Poly::var(v),
                    family,
                    q1: q1.clone(),
                });
            }
        }
    }
    Ok(out)
}

pub(super) fn pi2(b: &mut Builder) -> Result<(), StrataError> {
    let classes = pi2_classes()?;
    let mut reference: Option<(String, CellList)> = None;
    let mut sampled = 0usize;
    let mut class_cells = CellList::new();
    for class in &classes {
        let mut profile = None;
        for c in class.samples() {
            let f = class.sheaf(&c)?;
            let (v, w) = section_profile(&f.sheaf, f.section_degree)?;
            let cells = projective_pair_cells(&v, &w)?;
            let name = format!("{} (c = {c})", class.label());
            sampled += 1;
            match &reference {
                None => reference = Some((name, cells.clone())),
                Some((first, expected)) if *expected != cells => {
                    return Err(StrataError::UniformityViolation {
                        stratum: "Pi2".into(),
                        first: first.clone(),
                        first_profile: expected.describe(),
                        second: name,
                        second_profile: cells.describe(),
                    })
                }
                _ => {}
            }
            profile = Some(cells);
        }
        let profile = profile.expect("at least one sample");
        let base = if class.family { CellList::affine(1) } else { CellList::point() };
        class_cells += &base;
        let data: Value = json!({
            "torsion_line": class.torsion_line,
            "delta_weight": weight_json(class.delta_weight),
            "a": class.a.to_string(),
            "b": class.b.to_string(),
            "family": class.family,
        });
        b.add(data, cell_product(&base, &profile));
    }
    let (_, profile) = reference.ok_or_else(|| StrataError::Invariant("no extension classes".into()))?;
    b.detail("extension_classes", &class_cells);
    b.detail("section_profile", &profile);
    b.detail("profile_samples", sampled);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unique_h_vector() {
        assert_eq!(pi3_h_vectors(), vec![[0, 1, 0, 0, 0]]);
    }

    #[test]
    fn pi3_torsion_generator() {
        let f = pi3_presentation(&[0, 1, 0, 0, 0]).unwrap();
        let inc = f.sheaf.torsion_inclusion.as_ref().unwrap();
        let col: Vec<String> = (0..4).map(|i| inc.entry(i, 0).to_string()).collect();
        assert_eq!(col, vec!["y^2", "0", "0", "-x^2"]);
        let (v, w) = section_profile(&f.sheaf, 2).unwrap();
        assert_eq!((v.dim(), w.dim()), (15, 1));
    }

    #[test]
    fn pi2_class_counts() {
        let classes = pi2_classes().unwrap();
        assert_eq!(classes.iter().filter(|c| !c.family).count(), 24);
        assert_eq!(classes.iter().filter(|c| c.family).count(), 3);
    }
}
