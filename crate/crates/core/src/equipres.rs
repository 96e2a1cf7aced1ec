//! Torus-equivariant free modules, presentation matrices, and the weight
//! decomposition of global sections of their cokernels.
//!
//! A summand `O(n)` with twist `τ` contributes the section `m` (a monomial
//! of degree `n + k` after twisting by `O(k)`) with weight `w(m) - τ`. The
//! entry in row `i`, column `j` of a matrix must then be homogeneous of
//! degree `t_i - s_j` and weight `τ_i - σ_j`.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::{monomial_gcd, poly_det, Exponent, Poly, PolyError, Rational};
use crate::linalg;
use crate::torusweights::{coordinate_weight, monomials_of_degree, Character, WeightedRep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquipresError {
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("entry ({row},{col}) is not homogeneous in degree and weight")]
    NotHomogeneous { row: usize, col: usize },
    #[error("entry ({row},{col}) has degree {found}, expected {expected}")]
    DegreeMismatch { row: usize, col: usize, expected: i64, found: i64 },
    #[error("entry ({row},{col}) has weight {found}, expected {expected}")]
    WeightMismatch { row: usize, col: usize, expected: Character, found: Character },
    #[error("cannot infer twist of {side} summand {index}: not connected to a known summand")]
    Disconnected { side: &'static str, index: usize },
    #[error("presentation is not injective on sections in weight {weight}")]
    RankDeficiency { weight: Character },
    #[error("torsion sections are not a subrepresentation of all sections")]
    NotASubrep,
    #[error("presentation has no torsion inclusion")]
    NoTorsionInclusion,
    #[error("torsion inclusion entries give inconsistent source twists")]
    InconsistentInclusion,
    #[error("projection needs an n x (n-1) presentation of rank n-1, got {rows} x {cols}")]
    NotCorankOne { rows: usize, cols: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One summand `O(degree)` with its torus linearization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Summand {
    pub degree: i64,
    pub twist: Character,
}

impl Summand {
    pub fn new(degree: i64, twist: Character) -> Self {
        Summand { degree, twist }
    }
}

/// A finite direct sum of twisted line bundles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EquivariantFreeModule {
    pub summands: Vec<Summand>,
}

impl EquivariantFreeModule {
    pub fn new(summands: Vec<Summand>) -> Self {
        EquivariantFreeModule { summands }
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    /// Summands of the tensor product, indexed `i * other.rank() + j`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.rank() * other.rank());
        for a in &self.summands {
            for b in &other.summands {
                out.push(Summand::new(a.degree + b.degree, a.twist + b.twist));
            }
        }
        EquivariantFreeModule::new(out)
    }

    /// Weight multiset of `H^0` of the module twisted by `O(k)`.
    pub fn section_rep(&self, k: i64) -> WeightedRep {
        let mut rep = WeightedRep::new();
        for s in &self.summands {
            for m in monomials_in(s.degree + k) {
                rep.insert(coordinate_weight(&m) - s.twist, None);
            }
        }
        rep
    }
}

fn monomials_in(deg: i64) -> Vec<Exponent> {
    if deg < 0 {
        Vec::new()
    } else {
        monomials_of_degree(deg as u32)
    }
}

/// Degree and weight of a nonzero polynomial whose terms all agree.
fn entry_type(p: &Poly) -> Option<(i64, Character)> {
    let mut it = p.terms().map(|(e, _)| (e.degree() as i64, coordinate_weight(e)));
    let first = it.next()?;
    it.all(|t| t == first).then_some(first)
}

/// Fills unknown node values from edges `row - col = value`.
fn propagate<T>(rows: &mut [Option<T>], cols: &mut [Option<T>], edges: &[(usize, usize, T)]) -> Result<(), (usize, usize)>
where
    T: Copy + Eq + Add<Output = T> + Sub<Output = T>,
{
    loop {
        let mut changed = false;
        for &(i, j, v) in edges {
            match (rows[i], cols[j]) {
                (Some(r), Some(c)) => {
                    if r - c != v {
                        return Err((i, j));
                    }
                }
                (Some(r), None) => {
                    cols[j] = Some(r - v);
                    changed = true;
                }
                (None, Some(c)) => {
                    rows[i] = Some(c + v);
                    changed = true;
                }
                (None, None) => {}
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

/// Partially known summand used when inferring structure from entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PartialSummand {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Character>,
}

impl From<Summand> for PartialSummand {
    fn from(s: Summand) -> Self {
        PartialSummand { degree: Some(s.degree), twist: Some(s.twist) }
    }
}

/// A map `source -> target` of equivariant free modules, stored as a
/// `target.rank() x source.rank()` matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct EquivariantMatrix {
    target: EquivariantFreeModule,
    source: EquivariantFreeModule,
    entries: Vec<Vec<Poly>>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    target: Vec<PartialSummand>,
    source: Vec<PartialSummand>,
    entries: Vec<Vec<Poly>>,
}

impl TryFrom<RawMatrix> for EquivariantMatrix {
    type Error = EquipresError;
    fn try_from(raw: RawMatrix) -> Result<Self, Self::Error> {
        let mut target = raw.target;
        if target.first().is_some_and(|t| t.twist.is_none()) && target.iter().all(|t| t.twist.is_none()) {
            target[0].twist = Some(Character::TRIVIAL);
        }
        EquivariantMatrix::infer(&target, &raw.source, raw.entries)
    }
}

impl From<EquivariantMatrix> for RawMatrix {
    fn from(m: EquivariantMatrix) -> Self {
        RawMatrix {
            target: m.target.summands.into_iter().map(Into::into).collect(),
            source: m.source.summands.into_iter().map(Into::into).collect(),
            entries: m.entries,
        }
    }
}

impl EquivariantMatrix {
    /// Builds and validates a matrix with fully specified modules.
    pub fn new(
        target: EquivariantFreeModule,
        source: EquivariantFreeModule,
        entries: Vec<Vec<Poly>>,
    ) -> Result<Self, EquipresError> {
        let m = EquivariantMatrix { target, source, entries };
        m.validate_equivariance()?;
        Ok(m)
    }

    /// Builds a matrix whose missing summand degrees and twists are
    /// determined by the nonzero entries.
    pub fn infer(
        target: &[PartialSummand],
        source: &[PartialSummand],
        entries: Vec<Vec<Poly>>,
    ) -> Result<Self, EquipresError> {
        check_shape(&entries, target.len(), source.len())?;
        let mut edges_deg = Vec::new();
        let mut edges_w = Vec::new();
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let (d, w) = entry_type(e).ok_or(EquipresError::NotHomogeneous { row: i, col: j })?;
                edges_deg.push((i, j, d));
                edges_w.push((i, j, w));
            }
        }
        let mut rd: Vec<_> = target.iter().map(|s| s.degree).collect();
        let mut cd: Vec<_> = source.iter().map(|s| s.degree).collect();
        let mut rw: Vec<_> = target.iter().map(|s| s.twist).collect();
        let mut cw: Vec<_> = source.iter().map(|s| s.twist).collect();
        if let Err((row, col)) = propagate(&mut rd, &mut cd, &edges_deg) {
            let expected = rd[row].unwrap() - cd[col].unwrap();
            let found = entries[row][col].homogeneous_degree().map_or(-1, i64::from);
            return Err(EquipresError::DegreeMismatch { row, col, expected, found });
        }
        if let Err((row, col)) = propagate(&mut rw, &mut cw, &edges_w) {
            let expected = rw[row].unwrap() - cw[col].unwrap();
            let found = entry_type(&entries[row][col]).unwrap().1;
            return Err(EquipresError::WeightMismatch { row, col, expected, found });
        }
        let complete = |ds: Vec<Option<i64>>, ws: Vec<Option<Character>>, side| {
            ds.into_iter()
                .zip(ws)
                .enumerate()
                .map(|(index, (d, w))| match (d, w) {
                    (Some(d), Some(w)) => Ok(Summand::new(d, w)),
                    _ => Err(EquipresError::Disconnected { side, index }),
                })
                .collect::<Result<Vec<_>, _>>()
        };
        let target = EquivariantFreeModule::new(complete(rd, rw, "target")?);
        let source = EquivariantFreeModule::new(complete(cd, cw, "source")?);
        EquivariantMatrix::new(target, source, entries)
    }

    /// Infers everything from entries and target degrees, fixing the twist
    /// of target summand 0 to be trivial.
    pub fn from_target_degrees(target_degrees: &[i64], entries: Vec<Vec<Poly>>) -> Result<Self, EquipresError> {
        let mut target: Vec<PartialSummand> =
            target_degrees.iter().map(|&d| PartialSummand { degree: Some(d), twist: None }).collect();
        if let Some(t) = target.first_mut() {
            t.twist = Some(Character::TRIVIAL);
        }
        let source = vec![PartialSummand::default(); entries.first().map_or(0, Vec::len)];
        EquivariantMatrix::infer(&target, &source, entries)
    }

    pub fn target(&self) -> &EquivariantFreeModule {
        &self.target
    }

    pub fn source(&self) -> &EquivariantFreeModule {
        &self.source
    }

    pub fn entries(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &Poly {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> usize {
        self.target.rank()
    }

    pub fn cols(&self) -> usize {
        self.source.rank()
    }

    /// Checks that every nonzero entry has the degree and weight forced by
    /// the twists of its row and column.
    pub fn validate_equivariance(&self) -> Result<(), EquipresError> {
        check_shape(&self.entries, self.rows(), self.cols())?;
        for (i, row) in self.entries.iter().enumerate() {
            let t = self.target.summands[i];
            for (j, e) in row.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let s = self.source.summands[j];
                let (d, w) = entry_type(e).ok_or(EquipresError::NotHomogeneous { row: i, col: j })?;
                if d != t.degree - s.degree {
                    return Err(EquipresError::DegreeMismatch { row: i, col: j, expected: t.degree - s.degree, found: d });
                }
                if w != t.twist - s.twist {
                    return Err(EquipresError::WeightMismatch { row: i, col: j, expected: t.twist - s.twist, found: w });
                }
            }
        }
        Ok(())
    }

    pub fn has_params(&self) -> bool {
        self.entries.iter().flatten().any(Poly::has_params)
    }

    pub fn substitute(&self, assignment: &BTreeMap<String, Rational>) -> Result<Self, EquipresError> {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|e| e.substitute_parameters(assignment)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        EquivariantMatrix::new(self.target.clone(), self.source.clone(), entries)
    }

    fn permuted_entries(&self, perm: [usize; 3]) -> Vec<Vec<Poly>> {
        self.entries.iter().map(|row| row.iter().map(|e| e.permute(perm)).collect()).collect()
    }

    /// Horizontal concatenation `[self | other]` over a common target.
    pub fn hcat(&self, other: &Self) -> Result<Self, EquipresError> {
        if self.target != other.target {
            return Err(EquipresError::Shape("hcat needs equal targets".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| [a.clone(), b.clone()].concat()).collect();
        let mut src = self.source.summands.clone();
        src.extend_from_slice(&other.source.summands);
        EquivariantMatrix::new(self.target.clone(), EquivariantFreeModule::new(src), entries)
    }

    /// Kronecker product: the map `S1 ⊗ S2 -> T1 ⊗ T2`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.rows() * other.rows());
        for i in 0..self.rows() {
            for l in 0..other.rows() {
                let mut row = Vec::with_capacity(self.cols() * other.cols());
                for j in 0..self.cols() {
                    for m in 0..other.cols() {
                        row.push(&self.entries[i][j] * &other.entries[l][m]);
                    }
                }
                entries.push(row);
            }
        }
        EquivariantMatrix {
            target: self.target.tensor(&other.target),
            source: self.source.tensor(&other.source),
            entries,
        }
    }

    fn identity(module: &EquivariantFreeModule) -> Self {
        let n = module.rank();
        let entries =
            (0..n).map(|i| (0..n).map(|j| if i == j { Poly::one() } else { Poly::zero() }).collect()).collect();
        EquivariantMatrix { target: module.clone(), source: module.clone(), entries }
    }
}

fn check_shape(entries: &[Vec<Poly>], rows: usize, cols: usize) -> Result<(), EquipresError> {
    if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
        return Err(EquipresError::Shape(format!("expected {rows} x {cols} entries")));
    }
    Ok(())
}

/// The signed maximal minors of an `n x (n-1)` matrix, with their common
/// monomial factor removed. This is the map from the cokernel onto its
/// torsion-free part.
pub fn torsion_free_projection(b: &EquivariantMatrix) -> Result<EquivariantMatrix, EquipresError> {
    let (n, c) = (b.rows(), b.cols());
    if n == 0 || c + 1 != n {
        return Err(EquipresError::NotCorankOne { rows: n, cols: c });
    }
    let mut minors = Vec::with_capacity(n);
    for skip in 0..n {
        let sub: Vec<Vec<Poly>> =
            b.entries.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, r)| r.clone()).collect();
        let d = poly_det(&sub);
        minors.push(if skip % 2 == 1 { -d } else { d });
    }
    let mut content: Option<Exponent> = None;
    for (e, _) in minors.iter().flat_map(Poly::terms) {
        content = Some(match content {
            None => e.clone(),
            Some(g) => monomial_gcd(&g, e)?,
        });
    }
    let Some(g) = content else {
        return Err(EquipresError::NotCorankOne { rows: n, cols: c });
    };
    let g = Poly::monomial(g);
    let row = minors.iter().map(|m| m.divide_exact(&g)).collect::<Result<Vec<_>, _>>()?;
    let target = [PartialSummand::default()];
    let source: Vec<PartialSummand> = b.target.summands.iter().map(|&s| s.into()).collect();
    EquivariantMatrix::infer(&target, &source, vec![row])
}

/// The cokernel of an equivariant matrix, with optional data describing
/// its torsion subsheaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafPresentation {
    pub name: String,
    pub presentation: EquivariantMatrix,
    /// Map from a free module onto the torsion subsheaf.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion_inclusion: Option<EquivariantMatrix>,
    /// Map to a torsion-free sheaf whose kernel on the cokernel is the
    /// torsion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<EquivariantMatrix>,
    /// Whether the presentation matrix is injective as a sheaf map.
    #[serde(default = "default_true")]
    pub injective: bool,
}

fn default_true() -> bool {
    true
}

impl SheafPresentation {
    /// A presentation with no torsion data; its cokernel is treated as
    /// torsion free.
    pub fn new(name: impl Into<String>, presentation: EquivariantMatrix) -> Self {
        SheafPresentation { name: name.into(), presentation, torsion_inclusion: None, projection: None, injective: true }
    }

    /// Adds a torsion inclusion given by one column per generator; the
    /// generator twists are inferred.
    pub fn with_inclusion(mut self, columns: Vec<Vec<Poly>>) -> Result<Self, EquipresError> {
        let n = self.presentation.rows();
        let cols = columns.len();
        let entries: Vec<Vec<Poly>> = (0..n).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
        let target: Vec<PartialSummand> = self.presentation.target.summands.iter().map(|&s| s.into()).collect();
        self.torsion_inclusion = Some(EquivariantMatrix::infer(&target, &vec![PartialSummand::default(); cols], entries)?);
        Ok(self)
    }

    /// Adds the projection onto the torsion-free part computed from
    /// maximal minors.
    pub fn with_minor_projection(mut self) -> Result<Self, EquipresError> {
        self.projection = Some(torsion_free_projection(&self.presentation)?);
        Ok(self)
    }

    pub fn has_torsion_data(&self) -> bool {
        self.torsion_inclusion.is_some() || self.projection.is_some()
    }

    pub fn has_params(&self) -> bool {
        self.presentation.has_params()
            || self.torsion_inclusion.as_ref().is_some_and(EquivariantMatrix::has_params)
            || self.projection.as_ref().is_some_and(EquivariantMatrix::has_params)
    }

    pub fn substitute(&self, assignment: &BTreeMap<String, Rational>) -> Result<Self, EquipresError> {
        let sub = |m: &Option<EquivariantMatrix>| m.as_ref().map(|m| m.substitute(assignment)).transpose();
        Ok(SheafPresentation {
            name: self.name.clone(),
            presentation: self.presentation.substitute(assignment)?,
            torsion_inclusion: sub(&self.torsion_inclusion)?,
            projection: sub(&self.projection)?,
            injective: self.injective,
        })
    }

    /// The presentation of the pullback under the coordinate permutation
    /// sending variable `i` to variable `perm[i]`. Twists are re-inferred
    /// with target summand 0 trivial, which changes the linearization by an
    /// overall character at most.
    pub fn permuted(&self, perm: [usize; 3]) -> Result<Self, EquipresError> {
        let degrees: Vec<i64> = self.presentation.target.summands.iter().map(|s| s.degree).collect();
        let mut target: Vec<PartialSummand> =
            degrees.iter().map(|&d| PartialSummand { degree: Some(d), twist: None }).collect();
        target[0].twist = Some(Character::TRIVIAL);
        let source: Vec<PartialSummand> = self
            .presentation
            .source
            .summands
            .iter()
            .map(|s| PartialSummand { degree: Some(s.degree), twist: None })
            .collect();
        let presentation = EquivariantMatrix::infer(&target, &source, self.presentation.permuted_entries(perm))?;
        let new_target: Vec<PartialSummand> = presentation.target.summands.iter().map(|&s| s.into()).collect();
        let torsion_inclusion = match &self.torsion_inclusion {
            Some(inc) => Some(EquivariantMatrix::infer(
                &new_target,
                &vec![PartialSummand::default(); inc.cols()],
                inc.permuted_entries(perm),
            )?),
            None => None,
        };
        let projection = match &self.projection {
            Some(p) => Some(EquivariantMatrix::infer(
                &vec![PartialSummand::default(); p.rows()],
                &new_target,
                p.permuted_entries(perm),
            )?),
            None => None,
        };
        Ok(SheafPresentation {
            name: self.name.clone(),
            presentation,
            torsion_inclusion,
            projection,
            injective: self.injective,
        })
    }

    /// Presentation of the tensor product of two cokernels,
    /// `coker(A) ⊗ coker(B) = coker([A ⊗ 1 | 1 ⊗ B])`. Torsion is described
    /// by the tensor product of the projections, which both factors must
    /// carry unless they are torsion free.
    pub fn tensor(&self, other: &Self) -> Result<Self, EquipresError> {
        let a = &self.presentation;
        let b = &other.presentation;
        let left = a.kron(&EquivariantMatrix::identity(&b.target));
        let right = EquivariantMatrix::identity(&a.target).kron(b);
        let presentation = left.hcat(&right)?;
        let proj_of = |p: &SheafPresentation| -> Result<EquivariantMatrix, EquipresError> {
            match (&p.projection, &p.torsion_inclusion) {
                (Some(m), _) => Ok(m.clone()),
                (None, None) => Ok(EquivariantMatrix::identity(&p.presentation.target)),
                (None, Some(_)) => torsion_free_projection(&p.presentation),
            }
        };
        let projection = if self.has_torsion_data() || other.has_torsion_data() {
            let (pa, pb) = (proj_of(self)?, proj_of(other)?);
            Some(pa.kron(&pb))
        } else {
            None
        };
        Ok(SheafPresentation {
            name: format!("{} ⊗ {}", self.name, other.name),
            presentation,
            torsion_inclusion: None,
            projection,
            injective: false,
        })
    }
}

/// Which description of the torsion to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionRoute {
    Inclusion,
    Projection,
}

/// Sections of one weight: the monomial basis of the target in that
/// weight, the reduced image of the presentation, and torsion vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightBlock {
    /// `(summand, monomial)` in descending monomial order.
    pub basis: Vec<(usize, Exponent)>,
    image: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    /// Indices into `basis` whose classes form a basis of the cokernel.
    pub complement: Vec<usize>,
    /// Torsion sections, independent modulo the image, in `basis`
    /// coordinates.
    pub torsion: Vec<Vec<Rational>>,
}

impl WeightBlock {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn torsion_dim(&self) -> usize {
        self.torsion.len()
    }

    /// Coordinates of the class of `v` in the complement basis.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (row, &p) in self.image.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &f * r;
                }
            }
        }
        self.complement.iter().map(|&c| v[c].clone()).collect()
    }

    fn index_of(&self, summand: usize, m: &Exponent) -> Option<usize> {
        self.basis.iter().position(|(s, e)| *s == summand && e == m)
    }
}

/// Weight decomposition of `H^0(coker(P)(k))` with explicit bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSpace {
    pub k: i64,
    pub rank: usize,
    pub blocks: BTreeMap<Character, WeightBlock>,
}

fn basis_label(summand: usize, m: &Exponent, rank: usize) -> String {
    let mono = Poly::monomial(m.clone()).to_string();
    if rank == 1 {
        mono
    } else {
        format!("{mono}@{summand}")
    }
}

impl SectionSpace {
    pub fn dim(&self) -> usize {
        self.blocks.values().map(WeightBlock::dim).sum()
    }

    pub fn block(&self, w: Character) -> Option<&WeightBlock> {
        self.blocks.get(&w)
    }

    /// Weights of the cokernel sections, labelled by their preferred
    /// monomial lifts.
    pub fn rep(&self) -> WeightedRep {
        let mut rep = WeightedRep::new();
        for (&w, b) in &self.blocks {
            for &c in &b.complement {
                let (s, m) = &b.basis[c];
                rep.insert(w, Some(basis_label(*s, m, self.rank)));
            }
        }
        rep
    }

    pub fn torsion_rep(&self) -> WeightedRep {
        let mut rep = WeightedRep::new();
        for (&w, b) in &self.blocks {
            rep.insert_many(w, b.torsion_dim() as u32);
        }
        rep
    }

    /// A vector of `basis` coordinates as a column of polynomials.
    pub fn lift(&self, w: Character, v: &[Rational]) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.rank];
        if let Some(b) = self.blocks.get(&w) {
            for ((s, m), c) in b.basis.iter().zip(v) {
                if !c.is_zero() {
                    out[*s] = &out[*s] + &Poly::term(c.clone(), m.clone());
                }
            }
        }
        out
    }

    /// The basis coordinates of a column of polynomials lying in weight
    /// `w`. Returns `None` if some term is not a basis monomial of `w`.
    pub fn coordinates(&self, w: Character, column: &[Poly]) -> Option<Vec<Rational>> {
        let b = self.blocks.get(&w)?;
        let mut v = vec![Rational::zero(); b.basis.len()];
        for (s, p) in column.iter().enumerate() {
            for (e, c) in p.terms() {
                let idx = b.index_of(s, e)?;
                v[idx] += c;
            }
        }
        Some(v)
    }
}

/// Basis vectors of the image of `matrix` applied to the sections of its
/// source in weight `w`, in coordinates of `basis` (indexed by `index`).
fn image_vectors(
    matrix: &EquivariantMatrix,
    k: i64,
    w: Character,
    index: &HashMap<(usize, Exponent), usize>,
    len: usize,
) -> Result<Vec<Vec<Rational>>, EquipresError> {
    let mut out = Vec::new();
    for (j, s) in matrix.source.summands.iter().enumerate() {
        for m in monomials_in(s.degree + k) {
            if coordinate_weight(&m) - s.twist != w {
                continue;
            }
            let mut v = vec![Rational::zero(); len];
            for i in 0..matrix.rows() {
                let e = &matrix.entries[i][j];
                if e.is_zero() {
                    continue;
                }
                if e.has_params() {
                    return Err(PolyError::HasParameters(e.to_string()).into());
                }
                for (t, c) in e.mul_monomial(&m).terms() {
                    let idx = index.get(&(i, t.clone())).expect("equivariant image lands in its weight");
                    v[*idx] += c;
                }
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// Sections of the cokernel of `p` twisted by `O(k)`, weight by weight,
/// with torsion computed along `route` when that data is present.
pub fn section_space_via(
    p: &SheafPresentation,
    k: i64,
    route: Option<TorsionRoute>,
) -> Result<SectionSpace, EquipresError> {
    let pres = &p.presentation;
    let mut grouped: BTreeMap<Character, Vec<(usize, Exponent)>> = BTreeMap::new();
    for (i, s) in pres.target.summands.iter().enumerate() {
        for m in monomials_in(s.degree + k) {
            grouped.entry(coordinate_weight(&m) - s.twist).or_default().push((i, m));
        }
    }
    let route = route.or(if p.torsion_inclusion.is_some() {
        Some(TorsionRoute::Inclusion)
    } else if p.projection.is_some() {
        Some(TorsionRoute::Projection)
    } else {
        None
    });
    let mut blocks = BTreeMap::new();
    for (w, mut basis) in grouped {
        basis.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let len = basis.len();
        let index: HashMap<(usize, Exponent), usize> =
            basis.iter().enumerate().map(|(n, (s, m))| ((*s, m.clone()), n)).collect();
        let img = image_vectors(pres, k, w, &index, len)?;
        let nsrc = img.len();
        let (image, pivots) = linalg::rref(img, len);
        if p.injective && pivots.len() < nsrc {
            return Err(EquipresError::RankDeficiency { weight: w });
        }
        let complement: Vec<usize> = (0..len).filter(|c| !pivots.contains(c)).collect();
        let torsion = match route {
            None => Vec::new(),
            Some(TorsionRoute::Inclusion) => {
                let inc = p.torsion_inclusion.as_ref().ok_or(EquipresError::NoTorsionInclusion)?;
                let cands = image_vectors(inc, k, w, &index, len)?;
                linalg::extend_independent(&image, &cands, len)
            }
            Some(TorsionRoute::Projection) => {
                let proj = match &p.projection {
                    Some(m) => m.clone(),
                    None => torsion_free_projection(pres)?,
                };
                let kernel = linalg::nullspace(projection_rows(&proj, &basis)?, len);
                linalg::extend_independent(&image, &kernel, len)
            }
        };
        blocks.insert(w, WeightBlock { basis, image, pivots, complement, torsion });
    }
    Ok(SectionSpace { k, rank: pres.rows(), blocks })
}

/// The matrix of `proj` restricted to the span of `basis`, one row per
/// output monomial.
fn projection_rows(proj: &EquivariantMatrix, basis: &[(usize, Exponent)]) -> Result<Vec<Vec<Rational>>, EquipresError> {
    let mut rows: BTreeMap<(usize, Exponent), Vec<Rational>> = BTreeMap::new();
    for (col, (s, m)) in basis.iter().enumerate() {
        for l in 0..proj.rows() {
            let e = &proj.entries[l][*s];
            if e.has_params() {
                return Err(PolyError::HasParameters(e.to_string()).into());
            }
            for (t, c) in e.mul_monomial(m).terms() {
                let row = rows.entry((l, t.clone())).or_insert_with(|| vec![Rational::zero(); basis.len()]);
                row[col] += c;
            }
        }
    }
    Ok(rows.into_values().collect())
}

pub fn section_space(p: &SheafPresentation, k: i64) -> Result<SectionSpace, EquipresError> {
    section_space_via(p, k, None)
}

/// Weights of `H^0(coker(P)(k))`, labelled by preferred monomial lifts.
pub fn cokernel_section_rep(p: &SheafPresentation, k: i64) -> Result<WeightedRep, EquipresError> {
    Ok(section_space_via(p, k, None)?.rep())
}

/// Weights of `H^0(T(k))` for the torsion subsheaf `T`. Empty when the
/// presentation carries no torsion data.
pub fn torsion_subrep(p: &SheafPresentation, k: i64) -> Result<WeightedRep, EquipresError> {
    let space = section_space_via(p, k, None)?;
    let t = space.torsion_rep();
    if !t.is_subrep_of(&space.rep().unlabeled()) {
        return Err(EquipresError::NotASubrep);
    }
    Ok(t)
}

/// The character by which the torsion inclusion must be twisted: the
/// negative of the twist of its (single) source summand, recomputed from
/// the entries.
pub fn derive_twist(p: &SheafPresentation) -> Result<Character, EquipresError> {
    let inc = p.torsion_inclusion.as_ref().ok_or(EquipresError::NoTorsionInclusion)?;
    inc.validate_equivariance()?;
    if inc.cols() != 1 {
        return Err(EquipresError::InconsistentInclusion);
    }
    let mut sigma = None;
    for (i, row) in inc.entries.iter().enumerate() {
        if row[0].is_zero() {
            continue;
        }
        let (_, w) = entry_type(&row[0]).ok_or(EquipresError::NotHomogeneous { row: i, col: 0 })?;
        let s = inc.target.summands[i].twist - w;
        if sigma.is_some_and(|t| t != s) {
            return Err(EquipresError::InconsistentInclusion);
        }
        sigma = Some(s);
    }
    let sigma = sigma.ok_or(EquipresError::InconsistentInclusion)?;
    if sigma != inc.source.summands[0].twist {
        return Err(EquipresError::InconsistentInclusion);
    }
    Ok(-sigma)
}

/// `(target_degree, entries)` helper for tests and fixtures.
pub fn parse_entries(rows: &[&[&str]]) -> Result<Vec<Vec<Poly>>, crate::exactpoly::ParsePolyError> {
    rows.iter().map(|r| r.iter().map(|s| s.parse()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torusweights::sections_rep;

    fn ch(a: i64, b: i64) -> Character {
        Character::new(a, b)
    }

    /// Quotient of `O^3` by `O(-1)^2` via `[[x,0],[0,x],[y,z]]`: an ideal
    /// sheaf plus torsion on the line `x = 0`.
    pub(crate) fn line_torsion() -> SheafPresentation {
        let e = parse_entries(&[&["x", "0"], &["0", "x"], &["y", "z"]]).unwrap();
        let m = EquivariantMatrix::infer(
            &[
                Summand::new(0, ch(-1, 0)).into(),
                Summand::new(0, ch(0, -1)).into(),
                Summand::new(0, ch(0, 0)).into(),
            ],
            &[PartialSummand::default(); 2],
            e,
        )
        .unwrap();
        SheafPresentation::new("line torsion", m)
            .with_inclusion(vec![parse_entries(&[&["z"], &["-y"], &["0"]]).unwrap().concat()])
            .unwrap()
    }

    #[test]
    fn infers_twists_of_line_torsion() {
        let p = line_torsion();
        assert_eq!(p.presentation.source().summands, vec![Summand::new(-1, ch(-1, 0)), Summand::new(-1, ch(0, -1))]);
        let inc = p.torsion_inclusion.as_ref().unwrap();
        assert_eq!(inc.source().summands, vec![Summand::new(-1, ch(-1, -1))]);
        assert_eq!(derive_twist(&p).unwrap(), ch(1, 1));
    }

    #[test]
    fn line_torsion_sections_at_two() {
        let p = line_torsion();
        let s = section_space(&p, 2).unwrap();
        assert_eq!(s.dim(), 12);
        let rep = s.rep();
        assert_eq!(rep.num_weights(), 10);
        // Degree-3 weights plus (2,1) and (1,2), the latter two doubled.
        let mut expect = sections_rep(3).unlabeled();
        expect.insert(ch(2, 1), None);
        expect.insert(ch(1, 2), None);
        assert_eq!(rep.unlabeled(), expect);
        let t = torsion_subrep(&p, 2).unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t, WeightedRep::from_weights([ch(1, 2), ch(2, 1)]));
    }

    #[test]
    fn inclusion_and_projection_agree() {
        let p = line_torsion().with_minor_projection().unwrap();
        let proj = p.projection.as_ref().unwrap();
        assert_eq!(proj.entries()[0], parse_entries(&[&["-y", "-z", "x"]]).unwrap()[0]);
        for k in 0..4 {
            let a = section_space_via(&p, k, Some(TorsionRoute::Inclusion)).unwrap().torsion_rep();
            let b = section_space_via(&p, k, Some(TorsionRoute::Projection)).unwrap().torsion_rep();
            assert_eq!(a, b, "k = {k}");
        }
    }

    #[test]
    fn rejects_bad_weights() {
        let e = parse_entries(&[&["x", "y"]]).unwrap();
        let t = EquivariantFreeModule::new(vec![Summand::new(0, Character::TRIVIAL)]);
        let s = EquivariantFreeModule::new(vec![Summand::new(-1, ch(0, 0)), Summand::new(-1, ch(0, 0))]);
        assert!(matches!(EquivariantMatrix::new(t.clone(), s, e.clone()), Err(EquipresError::WeightMismatch { col: 1, .. })));
        let s = EquivariantFreeModule::new(vec![Summand::new(-1, ch(0, 0)), Summand::new(-2, ch(-1, 0))]);
        assert!(matches!(EquivariantMatrix::new(t, s, e), Err(EquipresError::DegreeMismatch { col: 1, .. })));
        let bad = parse_entries(&[&["x + y"]]).unwrap();
        assert!(matches!(
            EquivariantMatrix::from_target_degrees(&[0], bad),
            Err(EquipresError::NotHomogeneous { .. })
        ));
    }

    #[test]
    fn rank_deficiency_detected() {
        let e = parse_entries(&[&["x", "x"]]).unwrap();
        let m = EquivariantMatrix::from_target_degrees(&[0], e).unwrap();
        let p = SheafPresentation::new("doubled", m);
        assert!(matches!(section_space(&p, 1), Err(EquipresError::RankDeficiency { .. })));
    }

    #[test]
    fn point_ideal_matches_geometry() {
        // The column (y, -x): O -> O(1)^2 has cokernel I_p(2), p = [0,0,1].
        let e = parse_entries(&[&["y"], &["-x"]]).unwrap();
        let m = EquivariantMatrix::infer(
            &[Summand::new(1, ch(0, 0)).into(), Summand::new(1, ch(-1, 0)).into()],
            &[PartialSummand::default()],
            e,
        )
        .unwrap();
        let p = SheafPresentation::new("point", m).with_minor_projection().unwrap();
        let s = section_space(&p, 2).unwrap();
        let z = crate::planegeom::MonomialSubscheme::point(crate::exactpoly::CoordinatePoint::Z);
        let want = crate::planegeom::ideal_section_rep(&z, 4);
        assert_eq!(s.dim() as u32, want.dim());
        assert!(torsion_subrep(&p, 2).unwrap().is_empty());
    }

    #[test]
    fn permutation_preserves_dimensions() {
        let p = line_torsion();
        for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let q = p.permuted(perm).unwrap();
            for k in 0..3 {
                let a = section_space(&p, k).unwrap();
                let b = section_space(&q, k).unwrap();
                assert_eq!(a.dim(), b.dim());
                assert_eq!(a.torsion_rep().dim(), b.torsion_rep().dim());
            }
        }
    }

    #[test]
    fn tensor_of_torsion_free_factors() {
        let p = line_torsion().with_minor_projection().unwrap();
        let one = SheafPresentation::new(
            "O",
            EquivariantMatrix::new(
                EquivariantFreeModule::new(vec![Summand::new(0, Character::TRIVIAL)]),
                EquivariantFreeModule::new(vec![]),
                vec![vec![]],
            )
            .unwrap(),
        );
        let t = p.tensor(&one).unwrap();
        let a = section_space(&p, 2).unwrap();
        let b = section_space(&t, 2).unwrap();
        assert_eq!(a.rep().unlabeled(), b.rep().unlabeled());
        assert_eq!(a.torsion_rep(), b.torsion_rep());
    }

    #[test]
    fn json_round_trip() {
        let p = line_torsion();
        let s = serde_json::to_string(&p).unwrap();
        let q: SheafPresentation = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn json_twists_may_be_omitted() {
        let json = r#"{"name":"ideal of a point","presentation":{
            "target":[{"degree":1},{"degree":1}],"source":[{}],
            "entries":[["y"],["-x"]]}}"#;
        let p: SheafPresentation = serde_json::from_str(json).unwrap();
        assert_eq!(p.presentation.target().summands[1].twist, ch(-1, 0));
        assert_eq!(p.presentation.source().summands[0], Summand::new(0, ch(-1, 0)));
    }

    #[test]
    fn reduce_gives_complement_coordinates() {
        let p = line_torsion();
        let s = section_space(&p, 2).unwrap();
        let w = ch(1, 1);
        let b = s.block(w).unwrap();
        let col = vec![Poly::zero(), Poly::zero(), Poly::xyz(0, 1, 1)];
        let v = s.coordinates(w, &col).unwrap();
        assert_eq!(s.lift(w, &v), col);
        // z times column 0 is x*z e0 + y*z e2, which reduces to zero.
        let img = vec![Poly::xyz(1, 0, 1), Poly::zero(), Poly::xyz(0, 1, 1)];
        let r = b.reduce(&s.coordinates(w, &img).unwrap());
        assert!(r.iter().all(|c| c.is_zero()));
        assert_eq!(b.reduce(&v).len(), b.dim());
    }
}
