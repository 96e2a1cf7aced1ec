//! Two-dimensional spaces of sections of the twisted tangent-type sheaf
//! whose determinant curve is nonzero.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::json;

use super::fixtures::euler_sequence;
use super::{weight_json, Builder, StrataError};
use crate::cellcalc::{grassmannian_fixed_components, remove_degeneracy, ComponentKind, FixedComponent};
use crate::equipres::{section_space, SectionSpace};
use crate::exactpoly::{poly_det, Poly, Rational};

/// Representative sections spanning the subspaces of a fixed component,
/// with the homogeneous coordinates of each moving factor as parameters.
pub fn component_sections(s: &SectionSpace, c: &FixedComponent) -> Result<Vec<Vec<Poly>>, StrataError> {
    let mut out = Vec::new();
    let mut factor = 0;
    for choice in c.choices.iter().filter(|ch| ch.chosen > 0) {
        let blk = s.block(choice.weight).ok_or_else(|| StrataError::Invariant(format!("no sections of {}", choice.weight)))?;
        let unit = |i: usize| -> Vec<Rational> {
            let mut v = vec![Rational::zero(); blk.basis.len()];
            v[i] = Rational::one();
            v
        };
        let lifts: Vec<Vec<Poly>> = blk.complement.iter().map(|&i| s.lift(choice.weight, &unit(i))).collect();
        if choice.chosen == choice.multiplicity {
            out.extend(lifts);
        } else if choice.chosen == 1 && choice.multiplicity == 2 {
            let (u, v) = c.factor_params(factor);
            factor += 1;
            let (u, v) = (Poly::param(&u), Poly::param(&v));
            out.push(lifts[0].iter().zip(&lifts[1]).map(|(a, b)| &(&u * a) + &(&v * b)).collect());
        } else {
            return Err(StrataError::Invariant(format!(
                "choice of {} in {} sections of weight {}",
                choice.chosen, choice.multiplicity, choice.weight
            )));
        }
    }
    Ok(out)
}

pub(super) fn xi1(b: &mut Builder) -> Result<(), StrataError> {
    let e0 = euler_sequence();
    let s = section_space(&e0.sheaf, e0.section_degree)?;
    let rep = s.rep();
    let pres = &e0.sheaf.presentation;
    let mut profile: BTreeMap<String, u32> = BTreeMap::new();
    for comp in grassmannian_fixed_components(&rep, 2) {
        let kind = match comp.kind {
            ComponentKind::Point => "points".to_string(),
            ComponentKind::Projective { dim } => format!("P{dim}"),
            ComponentKind::Product { first, second } => format!("P{first}xP{second}"),
            ComponentKind::Other => "other".to_string(),
        };
        *profile.entry(kind).or_default() += 1;
        let sections = component_sections(&s, &comp)?;
        let m: Vec<Vec<Poly>> =
            (0..pres.rows()).map(|i| vec![sections[0][i].clone(), sections[1][i].clone(), pres.entry(i, 0).clone()]).collect();
        let det = poly_det(&m);
        let cells = remove_degeneracy(&comp, &det)?;
        if cells.is_empty() {
            continue;
        }
        let weights: Vec<_> = comp.choices.iter().filter(|c| c.chosen > 0).map(|c| weight_json(c.weight)).collect();
        b.add(json!({ "component": comp.kind, "weights": weights }), cells);
    }
    b.detail("sections", rep.dim());
    b.detail("grassmannian_components", profile);
    Ok(())
}
