//! Torus-fixed loci and affine cell decompositions for moduli spaces of
//! one-dimensional sheaves on the projective plane, in low degree.

pub mod exactpoly;
mod linalg;
pub mod cellcalc;
pub mod equipres;
pub mod oracle;
pub mod planegeom;
pub mod strata;
pub mod torusweights;

pub use exactpoly::{CoordinatePoint, Exponent, Poly, PolyError, Rational};
pub use planegeom::{MonomialSubscheme, StaircasePartition};
pub use torusweights::{Character, WeightedRep};
pub use strata::{compute_space, compute_stratum, ModuliReport, ModuliSpec, StrataError, StratumReport, Witness};
