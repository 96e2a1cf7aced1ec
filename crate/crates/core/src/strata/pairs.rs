//! Strata parametrized by pairs of sheaves: two-generator cokernels and
//! tensor products of them. The fixed locus in each space of sections is
//! the projective space minus the torsion sections.

use std::collections::BTreeMap;

use serde_json::json;

use super::extension::section_profile;
use super::fixtures::{column_cokernel, hilbert_burch, line_torsion};
use super::{orbit, Builder, StrataError};
use crate::equipres::SheafPresentation;
use crate::exactpoly::{monomial_gcd, CoordinatePoint, Exponent, Poly};
use crate::planegeom::{hilb_fixed, lies_on_curve};
use crate::torusweights::monomials_of_degree;

/// The two coordinates vanishing at a coordinate point.
fn point_ideal(p: CoordinatePoint) -> (Poly, Poly) {
    let i = p.index();
    (Poly::var((i + 1) % 3), Poly::var((i + 2) % 3))
}

/// `I_p(1)` as the cokernel of `(b1, b2)^T : O(-1) -> O^2`.
pub fn point_ideal_sheaf(p: CoordinatePoint) -> Result<SheafPresentation, StrataError> {
    let (b1, b2) = point_ideal(p);
    column_cokernel(format!("ideal of {} twisted by 1", p.bracket()), &[b1, b2], &[0, 0])
}

/// Unordered pairs of distinct monomials of degree `deg`.
fn monomial_pairs(deg: u32) -> Vec<(Exponent, Exponent)> {
    let ms = monomials_of_degree(deg);
    let mut out = Vec::new();
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            out.push((ms[i].clone(), ms[j].clone()));
        }
    }
    out
}

/// The cokernel of `(a1, a2)^T : O(-2) -> O^2` for quadratic monomials.
/// A common factor `g` produces torsion generated by `(a1/g, a2/g)`.
pub fn quadric_pair_sheaf(a1: &Exponent, a2: &Exponent) -> Result<(SheafPresentation, Exponent), StrataError> {
    let g = monomial_gcd(a1, a2)?;
    let (p1, p2) = (Poly::monomial(a1.clone()), Poly::monomial(a2.clone()));
    let mut s = column_cokernel(format!("cokernel of ({p1}, {p2})"), &[p1, p2], &[0, 0])?;
    if g.degree() > 0 {
        let c1 = Poly::monomial(a1.div(&g).expect("gcd divides"));
        let c2 = Poly::monomial(a2.div(&g).expect("gcd divides"));
        s = s.with_inclusion(vec![vec![c1, c2]])?;
    }
    Ok((s, g))
}

/// Pairs of quadrics: torsion free when coprime, torsion along the common
/// line otherwise. Sections at twist 3.
pub(super) fn m2s(b: &mut Builder) -> Result<(), StrataError> {
    let (mut coprime, mut with_torsion) = (0, 0);
    let mut sections = Vec::new();
    for (a1, a2) in monomial_pairs(2) {
        let (s, g) = quadric_pair_sheaf(&a1, &a2)?;
        if g.degree() == 0 {
            coprime += 1;
        } else {
            with_torsion += 1;
        }
        let (v, w) = section_profile(&s, 3)?;
        sections.push(v.dim());
        let data = json!({
            "quadrics": [Poly::monomial(a1).to_string(), Poly::monomial(a2).to_string()],
            "common_factor": Poly::monomial(g).to_string(),
        });
        b.add_pair(&data, &v, &w)?;
    }
    b.detail("coprime_pairs", coprime);
    b.detail("pairs_with_torsion", with_torsion);
    sections.dedup();
    b.detail("sections", sections);
    Ok(())
}

/// `I_p(1) ⊗ I_Z(1)` for a point `p` and a fixed length-2 subscheme `Z`
/// cut out by a coordinate `b3` and a quadratic monomial `a3` prime to it.
pub(super) fn m2c_51(b: &mut Builder) -> Result<(), StrataError> {
    let mut split: BTreeMap<&str, u32> = BTreeMap::new();
    for p in CoordinatePoint::ALL {
        let ip = point_ideal_sheaf(p)?;
        for v in 0..3 {
            let b3 = Poly::var(v);
            for a3 in monomials_of_degree(2) {
                if a3.coord_exponents()[v] != 0 {
                    continue;
                }
                let a3 = Poly::monomial(a3);
                let iz = column_cokernel(format!("ideal of ({b3}, {a3}) twisted by 1"), &[a3.clone(), b3.clone()], &[0, -1])?;
                let t = ip.tensor(&iz)?;
                let (vs, ws) = section_profile(&t, 3)?;
                let kind = if ws.dim() == 0 { "torsion_free" } else { "with_torsion" };
                *split.entry(kind).or_default() += 1;
                let data = json!({ "point": p.bracket(), "second_ideal": [b3.to_string(), a3.to_string()] });
                b.add_pair(&data, &vs, &ws)?;
            }
        }
    }
    b.detail("pairs", split);
    Ok(())
}

/// `R ⊗ S` with `R = coker(b1, b2)` linear and `S = coker(a1, a2)`
/// quadratic, at twist 2, classified by the dimension of the torsion
/// sections.
pub(super) fn xi2(b: &mut Builder) -> Result<(), StrataError> {
    let mut classes: BTreeMap<u32, u32> = BTreeMap::new();
    let mut sections = Vec::new();
    for p in CoordinatePoint::ALL {
        let r = point_ideal_sheaf(p)?;
        for (a1, a2) in monomial_pairs(2) {
            let (s, _) = quadric_pair_sheaf(&a1, &a2)?;
            let t = r.tensor(&s)?;
            let (vs, ws) = section_profile(&t, 2)?;
            *classes.entry(ws.dim()).or_default() += 1;
            sections.push(vs.dim());
            let data = json!({
                "point": p.bracket(),
                "quadrics": [Poly::monomial(a1).to_string(), Poly::monomial(a2).to_string()],
                "torsion_sections": ws.dim(),
            });
            b.add_pair(&data, &vs, &ws)?;
        }
    }
    sections.sort_unstable();
    sections.dedup();
    b.detail("pairs", classes.values().sum::<u32>());
    b.detail("torsion_section_classes", classes.iter().map(|(k, v)| (k.to_string(), v)).collect::<BTreeMap<_, _>>());
    b.detail("sections", sections);
    Ok(())
}

/// `R ⊗ I_p(1)` at twist 2, where `R` is `I_Z(2)` for a length-3 subscheme
/// off every line or a quotient with torsion along a line.
pub(super) fn m2c_52(b: &mut Builder) -> Result<(), StrataError> {
    let mut rs: Vec<(serde_json::Value, SheafPresentation)> = Vec::new();
    for z in hilb_fixed(3).into_iter().filter(|z| !lies_on_curve(z, 1)) {
        rs.push((json!({ "subscheme": z }), hilbert_burch(&z)?));
    }
    let subschemes = rs.len();
    let lines = orbit(|perm| {
        let f = line_torsion().permuted(perm)?;
        Ok((f.torsion_annihilator[0].to_string(), f))
    })?;
    for (line, f) in &lines {
        rs.push((json!({ "torsion_line": format!("{line} = 0") }), f.sheaf.clone()));
    }
    let mut classes: BTreeMap<String, u32> = BTreeMap::new();
    for (rdata, r) in &rs {
        for p in CoordinatePoint::ALL {
            let t = r.tensor(&point_ideal_sheaf(p)?)?;
            let (vs, ws) = section_profile(&t, 2)?;
            let key = format!("{} sections, {} torsion", vs.dim(), ws.dim());
            *classes.entry(key).or_default() += 1;
            let mut data = rdata.clone();
            data["point"] = json!(p.bracket());
            b.add_pair(&data, &vs, &ws)?;
        }
    }
    b.detail("length_3_subschemes", subschemes);
    b.detail("torsion_lines", lines.len());
    b.detail("pair_classes", classes);
    Ok(())
}
