//! Strata whose fixed points are isolated: curves through fixed
//! subschemes.

use serde_json::json;

use super::{Builder, StrataError};
use crate::cellcalc::CellList;
use crate::planegeom::{count_wd_fixed, hilb_fixed, ideal_section_rep, MonomialSubscheme};

/// The open stratum of `M(d,1)`.
pub(super) fn wd(b: &mut Builder, d: u32) -> Result<(), StrataError> {
    let count = count_wd_fixed(d);
    for w in &count.witnesses {
        b.add(json!({ "subscheme": w.subscheme, "curve": w.curve }), CellList::point());
    }
    let admissible: Vec<u32> = count.distribution.iter().map(|(_, n)| *n).collect();
    b.detail("subschemes", admissible.len());
    b.detail("points_per_subscheme", admissible);
    Ok(())
}

/// Degree-`deg` curves through a fixed length-`n` subscheme accepted by
/// `keep`: a projective bundle whose fibres have isolated fixed points.
pub(super) fn point_bundle(
    b: &mut Builder,
    n: u32,
    deg: i64,
    keep: impl Fn(&MonomialSubscheme) -> bool,
) -> Result<(), StrataError> {
    let mut fibres = Vec::new();
    for z in hilb_fixed(n).into_iter().filter(|z| keep(z)) {
        let rep = ideal_section_rep(&z, deg);
        if !rep.is_multiplicity_free() {
            return Err(StrataError::Invariant(format!("sections through {z} are not multiplicity free")));
        }
        fibres.push(rep.dim());
        for (w, _) in rep.iter() {
            for label in rep.labels(w) {
                b.add(json!({ "subscheme": z, "curve": label }), CellList::point());
            }
        }
    }
    b.detail(&format!("length_{n}_subschemes"), fibres.len());
    b.detail(&format!("sections_of_degree_{deg}"), fibres);
    Ok(())
}
