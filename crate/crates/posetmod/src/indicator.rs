//! Indicator (upset/downset) modules, Hom computations via connected
//! components, connected homomorphisms, and monomial matrices.
//!
//! A monomial matrix is a scalar block whose rows and columns carry
//! upset/downset labels. Three orientations occur:
//!
//! * fringe: rows are birth upsets, columns are death downsets, and the
//!   map goes from the row sum to the column sum;
//! * homological (upset resolutions): rows are target upsets, columns are
//!   source upsets, the map goes from the column sum to the row sum;
//! * cohomological (downset resolutions): rows are source downsets,
//!   columns are target downsets, the map goes from the row sum to the
//!   column sum.

use crate::linalg::{Field, Matrix, Scalar};
use crate::module::{ModuleError, ModuleHom, PosetModule};
use crate::poset::{Downset, ElemSet, FinitePoset, PosetMorphism, Upset};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum IndicatorError {
    #[error("regions live over different posets")]
    MixedPoset,
    #[error("no closed formula for Hom from a downset module to an upset module")]
    UnsupportedHomPair,
    #[error("module is not an indicator subquotient: dimension {1} at element {0}")]
    NotIndicator(usize, usize),
    #[error("monomial matrix mixes downset rows with upset columns")]
    UnsupportedOrientation,
    #[error("monomial matrix violates the label-intersection rule at {0:?}")]
    InvalidMatrix(Vec<Violation>),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// An upset or downset label on a monomial matrix row or column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    Up(Upset),
    Down(Downset),
}

impl Region {
    pub fn members(&self) -> &ElemSet {
        match self {
            Region::Up(u) => u.members(),
            Region::Down(d) => d.members(),
        }
    }

    pub fn poset_fingerprint(&self) -> u64 {
        match self {
            Region::Up(u) => u.poset_fingerprint(),
            Region::Down(d) => d.poset_fingerprint(),
        }
    }

    pub fn is_up(&self) -> bool {
        matches!(self, Region::Up(_))
    }

    /// Preimage along a poset morphism; preserves the up/down kind.
    pub fn preimage(&self, source: &FinitePoset, f: &PosetMorphism) -> Region {
        match self {
            Region::Up(u) => Region::Up(source.upset_from_members(f.preimage(u.members()))),
            Region::Down(d) => Region::Down(source.downset_from_members(f.preimage(d.members()))),
        }
    }

    /// The realized indicator module: dimension one on the region, zero
    /// off it, identity maps inside.
    pub fn realize(&self, poset: &Arc<FinitePoset>, field: Field) -> PosetModule {
        indicator_module(poset, field, self.members())
    }
}

/// An indicator module together with its defining region.
#[derive(Debug, Clone)]
pub struct IndicatorModule {
    pub region: Region,
    pub module: PosetModule,
}

impl IndicatorModule {
    pub fn upset(poset: &Arc<FinitePoset>, field: Field, u: Upset) -> IndicatorModule {
        let module = indicator_module(poset, field, u.members());
        IndicatorModule { region: Region::Up(u), module }
    }

    pub fn downset(poset: &Arc<FinitePoset>, field: Field, d: Downset) -> IndicatorModule {
        let module = indicator_module(poset, field, d.members());
        IndicatorModule { region: Region::Down(d), module }
    }
}

fn indicator_module(poset: &Arc<FinitePoset>, field: Field, members: &ElemSet) -> PosetModule {
    let dims: Vec<usize> =
        (0..poset.n_elements()).map(|i| usize::from(members.contains(i))).collect();
    let mut edges = BTreeMap::new();
    for &(p, q) in poset.covers() {
        let m = if members.contains(p) && members.contains(q) {
            Matrix::identity(field, 1)
        } else {
            Matrix::zero(field, dims[q], dims[p])
        };
        edges.insert((p, q), m);
    }
    PosetModule::new(poset.clone(), field, dims, edges).expect("indicator modules commute")
}

/// Basis of a Hom space between indicator modules: one generator per
/// connected component, each acting as multiplication by 1 on its
/// component and 0 elsewhere. Components are ordered by least element.
#[derive(Debug, Clone)]
pub struct HomBasis {
    pub dimension: usize,
    pub components: Vec<ElemSet>,
}

/// Hom(source, target) for indicator modules, by the connected-component
/// formulas. The downset-to-upset direction has no such formula and is
/// rejected.
pub fn hom_indicator(
    poset: &FinitePoset,
    source: &IndicatorModule,
    target: &IndicatorModule,
) -> Result<HomBasis, IndicatorError> {
    if source.region.poset_fingerprint() != poset.fingerprint()
        || target.region.poset_fingerprint() != poset.fingerprint()
    {
        return Err(IndicatorError::MixedPoset);
    }
    let components = match (&source.region, &target.region) {
        (Region::Up(u), Region::Down(d)) => {
            poset.connected_components(&u.members().intersect(d.members()))
        }
        (Region::Up(u_src), Region::Up(u_tgt)) => poset
            .connected_components(u_src.members())
            .into_iter()
            .filter(|s| s.is_subset(u_tgt.members()))
            .collect(),
        (Region::Down(d_src), Region::Down(d_tgt)) => poset
            .connected_components(d_tgt.members())
            .into_iter()
            .filter(|s| s.is_subset(d_src.members()))
            .collect(),
        (Region::Down(_), Region::Up(_)) => return Err(IndicatorError::UnsupportedHomPair),
    };
    Ok(HomBasis { dimension: components.len(), components })
}

/// Outcome of testing whether a homomorphism of indicator subquotients is
/// multiplication by a single scalar on the whole overlap.
#[derive(Debug, Clone, PartialEq)]
pub enum Connectedness {
    Connected(Scalar),
    /// Two degrees of the overlap carrying different scalars.
    NotConnected(usize, usize),
}

/// Decide connectedness of a homomorphism between indicator subquotients
/// (all component dimensions must be at most one).
pub fn connected_scalar(phi: &ModuleHom) -> Result<Connectedness, IndicatorError> {
    let n = phi.source().poset().n_elements();
    for q in 0..n {
        if phi.source().dim_at(q) > 1 {
            return Err(IndicatorError::NotIndicator(q, phi.source().dim_at(q)));
        }
        if phi.target().dim_at(q) > 1 {
            return Err(IndicatorError::NotIndicator(q, phi.target().dim_at(q)));
        }
    }
    let field = phi.source().field();
    let mut first: Option<(usize, Scalar)> = None;
    for q in 0..n {
        if phi.source().dim_at(q) == 1 && phi.target().dim_at(q) == 1 {
            let s = phi.map_at(q).get(0, 0).clone();
            match &first {
                None => first = Some((q, s)),
                Some((q0, s0)) => {
                    if s != *s0 {
                        return Ok(Connectedness::NotConnected(*q0, q));
                    }
                }
            }
        }
    }
    Ok(match first {
        Some((_, s)) => Connectedness::Connected(s),
        None => Connectedness::Connected(field.zero()),
    })
}

/// A nonzero scalar sitting on a label pair that cannot support a nonzero
/// connected homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    pub reason: String,
}

/// Scalar block with labeled rows and columns.
#[derive(Debug, Clone)]
pub struct MonomialMatrix {
    pub rows: Vec<Region>,
    pub cols: Vec<Region>,
    pub entries: Matrix,
}

impl MonomialMatrix {
    pub fn new(rows: Vec<Region>, cols: Vec<Region>, entries: Matrix) -> MonomialMatrix {
        assert_eq!(entries.rows(), rows.len());
        assert_eq!(entries.cols(), cols.len());
        MonomialMatrix { rows, cols, entries }
    }

    /// Fringe constructor: rows are birth upsets, columns death downsets.
    pub fn fringe(rows: Vec<Upset>, cols: Vec<Downset>, entries: Matrix) -> MonomialMatrix {
        MonomialMatrix::new(
            rows.into_iter().map(Region::Up).collect(),
            cols.into_iter().map(Region::Down).collect(),
            entries,
        )
    }

    pub fn field(&self) -> Field {
        self.entries.field()
    }

    /// The homomorphism source/target orientation; see the module docs.
    /// Returns (source labels, target labels, rows_are_source).
    fn orientation(&self) -> Result<(&[Region], &[Region], bool), IndicatorError> {
        let row_up = self.rows.iter().all(Region::is_up);
        let row_down = self.rows.iter().all(|r| !r.is_up());
        let col_up = self.cols.iter().all(Region::is_up);
        let col_down = self.cols.iter().all(|r| !r.is_up());
        if row_up && col_down {
            // fringe: rows → cols, entry (p,q) is component row p → col q
            Ok((&self.rows, &self.cols, true))
        } else if row_up && col_up {
            // homological: cols → rows, entry (p,q) is component col q → row p
            Ok((&self.cols, &self.rows, false))
        } else if row_down && col_down {
            // cohomological: rows → cols
            Ok((&self.rows, &self.cols, true))
        } else {
            Err(IndicatorError::UnsupportedOrientation)
        }
    }

    /// Check the scalar rule: a nonzero entry needs a label pair that
    /// supports a nonzero connected homomorphism. Violations are data,
    /// not errors.
    pub fn validate(&self, poset: &FinitePoset) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            for (j, c) in self.cols.iter().enumerate() {
                if self.entries.get(i, j).is_zero() {
                    continue;
                }
                if let Some(reason) = entry_violation(poset, r, c) {
                    out.push(Violation { row: i, col: j, reason });
                }
            }
        }
        out
    }

    /// Evaluate to the degreewise homomorphism between the realized
    /// indicator sums. Fails on rule violations.
    pub fn evaluate(&self, poset: &Arc<FinitePoset>) -> Result<ModuleHom, IndicatorError> {
        let violations = self.validate(poset);
        if !violations.is_empty() {
            return Err(IndicatorError::InvalidMatrix(violations));
        }
        let f = self.field();
        let (src_labels, tgt_labels, rows_are_source) = self.orientation()?;
        let source = sum_of_indicators(poset, f, src_labels);
        let target = sum_of_indicators(poset, f, tgt_labels);
        let n = poset.n_elements();
        let mut maps = Vec::with_capacity(n);
        for x in 0..n {
            let src_at: Vec<usize> =
                (0..src_labels.len()).filter(|&s| src_labels[s].members().contains(x)).collect();
            let tgt_at: Vec<usize> =
                (0..tgt_labels.len()).filter(|&t| tgt_labels[t].members().contains(x)).collect();
            let mut m = Matrix::zero(f, tgt_at.len(), src_at.len());
            for (ti, &t) in tgt_at.iter().enumerate() {
                for (si, &s) in src_at.iter().enumerate() {
                    let e = if rows_are_source {
                        self.entries.get(s, t)
                    } else {
                        self.entries.get(t, s)
                    };
                    m.set(ti, si, e.clone());
                }
            }
            maps.push(m);
        }
        Ok(ModuleHom::new(source, target, maps)?)
    }

    /// Image of the evaluated homomorphism, with the factorization
    /// source ↠ image ↪ target.
    pub fn image_module(
        &self,
        poset: &Arc<FinitePoset>,
    ) -> Result<(PosetModule, ModuleHom, ModuleHom), IndicatorError> {
        Ok(self.evaluate(poset)?.image()?)
    }

    /// Replace every label by its preimage along an encoding morphism;
    /// entries whose pulled-back label pair can no longer support a nonzero
    /// homomorphism are zeroed (the component map is zero there anyway).
    pub fn pullback(&self, source: &FinitePoset, f: &PosetMorphism) -> MonomialMatrix {
        let rows: Vec<Region> = self.rows.iter().map(|r| r.preimage(source, f)).collect();
        let cols: Vec<Region> = self.cols.iter().map(|c| c.preimage(source, f)).collect();
        let mut entries = self.entries.clone();
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in cols.iter().enumerate() {
                if !entries.get(i, j).is_zero() && entry_violation(source, r, c).is_some() {
                    entries.set(i, j, self.field().zero());
                }
            }
        }
        MonomialMatrix { rows, cols, entries }
    }
}

fn entry_violation(poset: &FinitePoset, row: &Region, col: &Region) -> Option<String> {
    match (row, col) {
        (Region::Up(u), Region::Down(d)) => {
            if u.members().intersect(d.members()).is_empty() {
                Some("upset and downset labels do not intersect".to_string())
            } else {
                None
            }
        }
        // homological: row is target, col is source
        (Region::Up(tgt), Region::Up(src)) => up_up_violation(poset, src, tgt),
        // cohomological: row is source, col is target
        (Region::Down(src), Region::Down(tgt)) => down_down_violation(poset, src, tgt),
        (Region::Down(_), Region::Up(_)) => Some("downset row against upset column".to_string()),
    }
}

fn up_up_violation(poset: &FinitePoset, src: &Upset, tgt: &Upset) -> Option<String> {
    let mut any_inside = false;
    for comp in poset.connected_components(src.members()) {
        if comp.is_subset(tgt.members()) {
            any_inside = true;
        } else if !comp.intersect(tgt.members()).is_empty() {
            return Some(format!("source component {comp} only partially inside the target upset"));
        }
    }
    if any_inside {
        None
    } else {
        Some("no component of the source upset lies inside the target".to_string())
    }
}

fn down_down_violation(poset: &FinitePoset, src: &Downset, tgt: &Downset) -> Option<String> {
    let mut any_inside = false;
    for comp in poset.connected_components(tgt.members()) {
        if comp.is_subset(src.members()) {
            any_inside = true;
        } else if !comp.intersect(src.members()).is_empty() {
            return Some(format!(
                "target component {comp} only partially inside the source downset"
            ));
        }
    }
    if any_inside {
        None
    } else {
        Some("no component of the target downset lies inside the source".to_string())
    }
}

/// Direct sum of realized indicator modules, in label order.
pub fn sum_of_indicators(
    poset: &Arc<FinitePoset>,
    field: Field,
    labels: &[Region],
) -> PosetModule {
    let mut acc = PosetModule::zero(poset.clone(), field);
    for l in labels {
        acc = acc.direct_sum(&l.realize(poset, field)).expect("same poset");
    }
    acc
}
