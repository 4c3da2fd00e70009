//! Finitely determined Z^n-modules represented on bounding boxes.
//!
//! A `BoxModule` stores a module on the grid poset of a box [lo, hi] and
//! stands for its extension to all of Z^n by the convex-projection
//! convention: the component at an outside point is the component at its
//! closest box point, with identity maps on every edge that the
//! projection collapses. Under this convention the grid-level minimal
//! cover and hull compute the flat cover and injective hull of the
//! extension, with face decorations read off the box boundary: a summand
//! based at c is constant along the directions in which c sits on the
//! relevant face.

use crate::indicator::{MonomialMatrix, Region};
use crate::linalg::{Field, Matrix};
use crate::module::{ModuleError, ModuleHom, PosetModule};
use crate::poset::GridPoset;
use crate::resolve::{
    downset_resolution, fringe_presentation, injective_hull, projective_cover, Direction,
    FringePresentation, IndicatorComplex,
};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum ZnError {
    #[error("box {0:?}..{1:?} does not fit inside the window")]
    BoxOutsideWindow(Vec<i64>, Vec<i64>),
    #[error("module is not determined outside the box; offending edges: {0:?}")]
    NotDetermined(Vec<(Vec<i64>, usize)>),
    #[error("module does not live over the given grid poset")]
    GridMismatch,
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// A finitely determined Z^n-module, given by its restriction to a box
/// together with the convex-projection extension convention.
#[derive(Debug, Clone)]
pub struct BoxModule {
    grid: GridPoset,
    module: PosetModule,
}

impl BoxModule {
    pub fn new(grid: GridPoset, module: PosetModule) -> Result<BoxModule, ZnError> {
        if module.poset().fingerprint() != grid.poset.fingerprint() {
            return Err(ZnError::GridMismatch);
        }
        Ok(BoxModule { grid, module })
    }

    pub fn grid(&self) -> &GridPoset {
        &self.grid
    }

    pub fn module(&self) -> &PosetModule {
        &self.module
    }

    pub fn n(&self) -> usize {
        self.grid.dim()
    }

    pub fn field(&self) -> Field {
        self.module.field()
    }

    /// Component of the extension at an arbitrary point of Z^n.
    pub fn dim_at_point(&self, coord: &[i64]) -> usize {
        let c = self.grid.clamp(coord);
        self.module.dim_at(self.grid.index_of(&c).unwrap())
    }

    /// Smallest box (componentwise) carrying an isomorphic extension:
    /// boundary layers whose inward edges are all isomorphisms are
    /// dropped.
    pub fn canonical(&self) -> Result<BoxModule, ZnError> {
        let mut lo = self.grid.lo().to_vec();
        let mut hi = self.grid.hi().to_vec();
        let mut current = self.clone();
        loop {
            let mut shrunk = false;
            for i in 0..lo.len() {
                if hi[i] > lo[i] && current.layer_is_iso(i, hi[i] - 1, true) {
                    hi[i] -= 1;
                    current = current.restrict(&lo, &hi)?;
                    shrunk = true;
                }
                if hi[i] > lo[i] && current.layer_is_iso(i, lo[i], false) {
                    lo[i] += 1;
                    current = current.restrict(&lo, &hi)?;
                    shrunk = true;
                }
            }
            if !shrunk {
                return Ok(current);
            }
        }
    }

    /// True if every edge leaving the layer {c : c_i = layer} in direction
    /// i is an isomorphism (`top`: edges layer → layer+1).
    fn layer_is_iso(&self, i: usize, layer: i64, top: bool) -> bool {
        let _ = top;
        for idx in 0..self.grid.poset.n_elements() {
            let c = self.grid.coord_of(idx);
            if c[i] != layer {
                continue;
            }
            let mut d = c.clone();
            d[i] += 1;
            let Some(jdx) = self.grid.index_of(&d) else { continue };
            let e = self.module.edge(idx, jdx);
            if !e.is_square() || e.inverse().is_err() {
                return false;
            }
        }
        true
    }

    fn restrict(&self, lo: &[i64], hi: &[i64]) -> Result<BoxModule, ZnError> {
        let sub = restrict_to_box(&self.grid, &self.module, lo, hi);
        Ok(sub)
    }

    /// Matlis dual: negated box, mirrored components, transposed edges.
    pub fn matlis_dual(&self) -> BoxModule {
        let lo: Vec<i64> = self.grid.hi().iter().map(|v| -v).collect();
        let hi: Vec<i64> = self.grid.lo().iter().map(|v| -v).collect();
        let dual_grid = GridPoset::new(&lo, &hi);
        let f = self.module.field();
        let n = dual_grid.poset.n_elements();
        let mirror = |idx: usize| {
            let c: Vec<i64> = dual_grid.coord_of(idx).iter().map(|v| -v).collect();
            self.grid.index_of(&c).unwrap()
        };
        let dims: Vec<usize> = (0..n).map(|idx| self.module.dim_at(mirror(idx))).collect();
        let mut edges = BTreeMap::new();
        for &(a, b) in dual_grid.poset.covers() {
            // cover a ⋖ b in the dual corresponds to -b ⋖ -a here
            edges.insert((a, b), self.module.edge(mirror(b), mirror(a)).transpose());
        }
        let module = PosetModule::new(Arc::new(dual_grid.poset.clone()), f, dims, edges)
            .expect("transposed grid module commutes");
        BoxModule { grid: dual_grid, module }
    }

    /// Minimal injective resolution with face-decorated labels; length is
    /// at most n.
    pub fn minimal_injective_resolution(&self) -> Result<FaceComplex, ZnError> {
        let complex = downset_resolution(&self.module)?;
        let faces = decorate(&self.grid, &complex, FaceKind::Injective);
        Ok(FaceComplex { complex, faces })
    }

    /// Minimal flat resolution, computed as the Matlis dual of the minimal
    /// injective resolution of the Matlis dual.
    pub fn minimal_flat_resolution(&self) -> Result<FaceComplex, ZnError> {
        let dual = self.matlis_dual();
        let dual_res = downset_resolution(&dual.module)?;
        let complex = dualize_injective_complex(&dual.grid, &self.grid, &self.module, &dual_res)?;
        let faces = decorate(&self.grid, &complex, FaceKind::Flat);
        Ok(FaceComplex { complex, faces })
    }

    /// Minimal flange presentation: composite of the minimal flat cover
    /// and minimal injective hull, as a monomial matrix with face-labeled
    /// rows (flats) and columns (injectives).
    pub fn flange_presentation(&self) -> Result<FlangePresentation, ZnError> {
        let e = crate::encoding::Encoding::identity(&self.module);
        let fp = fringe_presentation(&e)?;
        let flats: Vec<FaceLabel> = fp
            .matrix
            .rows
            .iter()
            .map(|r| match r {
                Region::Up(u) => {
                    FaceLabel::flat_at(&self.grid, &self.grid.coord_of(u.generators()[0]))
                }
                Region::Down(_) => unreachable!("flange rows are upsets"),
            })
            .collect();
        let injectives: Vec<FaceLabel> = fp
            .matrix
            .cols
            .iter()
            .map(|c| match c {
                Region::Down(d) => {
                    FaceLabel::injective_at(&self.grid, &self.grid.coord_of(d.cogenerators()[0]))
                }
                Region::Up(_) => unreachable!("flange columns are downsets"),
            })
            .collect();
        // entry rule: nonzero only below the face preorder
        for (i, fl) in flats.iter().enumerate() {
            for (j, inj) in injectives.iter().enumerate() {
                if !fp.matrix.entries.get(i, j).is_zero() {
                    debug_assert!(f_preceq_e(fl, inj), "flange entry violates the face rule");
                }
            }
        }
        Ok(FlangePresentation { flats, injectives, fringe: fp })
    }
}

/// flat labels k[c + Zτ + N^n] and injective labels k[c + Zτ − N^n], in
/// the canonical form where τ is exactly the set of box faces touched.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FaceLabel {
    pub kind: FaceKind,
    pub base: Vec<i64>,
    pub face: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FaceKind {
    Flat,
    Injective,
}

impl FaceLabel {
    pub fn flat_at(grid: &GridPoset, coord: &[i64]) -> FaceLabel {
        let face = (0..grid.dim()).filter(|&i| coord[i] == grid.lo()[i]).collect();
        FaceLabel { kind: FaceKind::Flat, base: coord.to_vec(), face }
    }

    pub fn injective_at(grid: &GridPoset, coord: &[i64]) -> FaceLabel {
        let face = (0..grid.dim()).filter(|&i| coord[i] == grid.hi()[i]).collect();
        FaceLabel { kind: FaceKind::Injective, base: coord.to_vec(), face }
    }

    /// Matlis duality on labels: flats at c become injectives at −c and
    /// conversely, along the same face.
    pub fn matlis_dual(&self) -> FaceLabel {
        FaceLabel {
            kind: match self.kind {
                FaceKind::Flat => FaceKind::Injective,
                FaceKind::Injective => FaceKind::Flat,
            },
            base: self.base.iter().map(|v| -v).collect(),
            face: self.face.clone(),
        }
    }
}

/// F ⪯ E: the degree sets of a flat and an injective label intersect.
/// Coordinatewise, the intervals (free if the coordinate is in either
/// face) must overlap.
pub fn f_preceq_e(flat: &FaceLabel, inj: &FaceLabel) -> bool {
    assert_eq!(flat.kind, FaceKind::Flat);
    assert_eq!(inj.kind, FaceKind::Injective);
    assert_eq!(flat.base.len(), inj.base.len());
    (0..flat.base.len()).all(|i| {
        flat.face.contains(&i) || inj.face.contains(&i) || flat.base[i] <= inj.base[i]
    })
}

/// An indicator complex over a box grid together with the face-decorated
/// labels of each term.
#[derive(Debug, Clone)]
pub struct FaceComplex {
    pub complex: IndicatorComplex,
    pub faces: Vec<Vec<FaceLabel>>,
}

impl FaceComplex {
    pub fn term_counts(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn length(&self) -> usize {
        self.complex.length()
    }
}

/// A flange presentation: face labels on top of the underlying fringe
/// data over the box grid.
#[derive(Debug, Clone)]
pub struct FlangePresentation {
    pub flats: Vec<FaceLabel>,
    pub injectives: Vec<FaceLabel>,
    pub fringe: FringePresentation,
}

impl FlangePresentation {
    pub fn entries(&self) -> &Matrix {
        &self.fringe.matrix.entries
    }
}

fn decorate(grid: &GridPoset, complex: &IndicatorComplex, kind: FaceKind) -> Vec<Vec<FaceLabel>> {
    complex
        .terms
        .iter()
        .map(|term| {
            term.iter()
                .map(|r| match (kind, r) {
                    (FaceKind::Injective, Region::Down(d)) => {
                        FaceLabel::injective_at(grid, &grid.coord_of(d.cogenerators()[0]))
                    }
                    (FaceKind::Flat, Region::Up(u)) => {
                        FaceLabel::flat_at(grid, &grid.coord_of(u.generators()[0]))
                    }
                    _ => unreachable!("complex labels match the resolution direction"),
                })
                .collect()
        })
        .collect()
}

/// Transport a minimal injective resolution of the Matlis dual back to a
/// flat resolution of the original module: labels negate, scalar blocks
/// carry over, maps transpose degreewise.
fn dualize_injective_complex(
    dual_grid: &GridPoset,
    grid: &GridPoset,
    module: &PosetModule,
    dual_res: &IndicatorComplex,
) -> Result<IndicatorComplex, ZnError> {
    let poset = module.poset().clone();
    let f = module.field();
    let mirror_elem = |idx: usize| -> usize {
        let c: Vec<i64> = dual_grid.coord_of(idx).iter().map(|v| -v).collect();
        grid.index_of(&c).unwrap()
    };
    let terms: Vec<Vec<Region>> = dual_res
        .terms
        .iter()
        .map(|term| {
            term.iter()
                .map(|r| match r {
                    Region::Down(d) => {
                        let e = mirror_elem(d.cogenerators()[0]);
                        Region::Up(poset.upset_closure(&[e]).unwrap())
                    }
                    Region::Up(_) => unreachable!("injective resolutions use downset labels"),
                })
                .collect()
        })
        .collect();
    let differentials: Vec<MonomialMatrix> = (0..dual_res.differentials.len())
        .map(|i| {
            MonomialMatrix::new(
                terms[i].clone(),
                terms[i + 1].clone(),
                dual_res.differentials[i].entries.clone(),
            )
        })
        .collect();
    // augmentation F_0 → M: transpose the dual augmentation degreewise
    let term0 = crate::indicator::sum_of_indicators(&poset, f, &terms[0]);
    let nq = poset.n_elements();
    let mut maps = Vec::with_capacity(nq);
    for x in 0..nq {
        let dual_x: Vec<i64> = grid.coord_of(x).iter().map(|v| -v).collect();
        let dx = dual_grid.index_of(&dual_x).unwrap();
        maps.push(dual_res.augmentation.map_at(dx).transpose());
    }
    let augmentation = ModuleHom::new(term0, module.clone(), maps)?;
    Ok(IndicatorComplex {
        direction: Direction::Homological,
        poset,
        field: f,
        terms,
        differentials,
        augmentation,
    })
}

/// Restrict a module over a larger grid to a box, reusing the stored
/// dimensions and edges.
fn restrict_to_box(window: &GridPoset, m: &PosetModule, lo: &[i64], hi: &[i64]) -> BoxModule {
    let sub = GridPoset::new(lo, hi);
    let f = m.field();
    let n = sub.poset.n_elements();
    let dims: Vec<usize> = (0..n)
        .map(|idx| m.dim_at(window.index_of(&sub.coord_of(idx)).unwrap()))
        .collect();
    let mut edges = BTreeMap::new();
    for &(a, b) in sub.poset.covers() {
        let wa = window.index_of(&sub.coord_of(a)).unwrap();
        let wb = window.index_of(&sub.coord_of(b)).unwrap();
        edges.insert((a, b), m.edge(wa, wb).clone());
    }
    let module = PosetModule::new(Arc::new(sub.poset.clone()), f, dims, edges)
        .expect("restriction of a valid module commutes");
    BoxModule { grid: sub, module }
}

/// Validate that a module given on a window is determined outside the box
/// (every edge the convex projection collapses is an isomorphism) and
/// restrict it. Failures list the offending edges as (source coordinate,
/// direction) pairs.
pub fn convex_projection(
    window: &GridPoset,
    m: &PosetModule,
    lo: &[i64],
    hi: &[i64],
) -> Result<BoxModule, ZnError> {
    if m.poset().fingerprint() != window.poset.fingerprint() {
        return Err(ZnError::GridMismatch);
    }
    let wlo = window.lo();
    let whi = window.hi();
    if !(0..lo.len()).all(|i| wlo[i] <= lo[i] && hi[i] <= whi[i] && lo[i] <= hi[i]) {
        return Err(ZnError::BoxOutsideWindow(lo.to_vec(), hi.to_vec()));
    }
    let mut offending = Vec::new();
    for &(a, b) in window.poset.covers() {
        let ca = window.coord_of(a);
        let cb = window.coord_of(b);
        let i = (0..ca.len()).find(|&i| ca[i] != cb[i]).unwrap();
        // the projection collapses this edge iff the source coordinate is
        // outside [lo_i, hi_i - 1]
        if ca[i] < lo[i] || ca[i] >= hi[i] {
            let e = m.edge(a, b);
            if !e.is_square() || e.inverse().is_err() {
                offending.push((ca.clone(), i));
            }
        }
    }
    if !offending.is_empty() {
        return Err(ZnError::NotDetermined(offending));
    }
    Ok(restrict_to_box(window, m, lo, hi))
}

/// Flat cover counts of a box module, by generator position (the dual
/// notion to the socle counts of `injective_hull`).
pub fn flat_cover(bm: &BoxModule) -> Result<crate::resolve::Cover, ZnError> {
    Ok(projective_cover(&bm.module)?)
}

/// Injective hull counts of a box module.
pub fn box_injective_hull(bm: &BoxModule) -> Result<crate::resolve::Cover, ZnError> {
    Ok(injective_hull(&bm.module)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// k at a single point of the grid, zero elsewhere.
    fn skyscraper(grid: &GridPoset, at: &[i64], f: Field) -> PosetModule {
        let p = Arc::new(grid.poset.clone());
        let o = grid.index_of(at).unwrap();
        let dims: Vec<usize> = (0..p.n_elements()).map(|i| usize::from(i == o)).collect();
        let mut edges = BTreeMap::new();
        for &(a, b) in p.covers() {
            edges.insert((a, b), Matrix::zero(f, dims[b], dims[a]));
        }
        PosetModule::new(p, f, dims, edges).unwrap()
    }

    fn k0_box() -> BoxModule {
        let grid = GridPoset::new(&[-1, -1], &[1, 1]);
        let m = skyscraper(&grid, &[0, 0], Field::Rational);
        BoxModule::new(grid, m).unwrap()
    }

    #[test]
    fn convex_projection_constant_module() {
        let window = GridPoset::new(&[-2, -2], &[2, 2]);
        let m = PosetModule::constant(Arc::new(window.poset.clone()), Field::GF2);
        for b in [([-1, -1], [1, 1]), ([0, 0], [0, 0]), ([-2, -2], [2, 2])] {
            assert!(convex_projection(&window, &m, &b.0, &b.1).is_ok());
        }
    }

    #[test]
    fn convex_projection_skyscraper() {
        let window = GridPoset::new(&[-1, -1], &[1, 1]);
        let m = skyscraper(&window, &[0, 0], Field::GF2);
        // the symmetric box works
        assert!(convex_projection(&window, &m, &[-1, -1], &[1, 1]).is_ok());
        // [0,1]^2 misses the incoming edge (-1,0) → (0,0)
        let err = convex_projection(&window, &m, &[0, 0], &[1, 1]).unwrap_err();
        match err {
            ZnError::NotDetermined(edges) => {
                assert!(edges.contains(&(vec![-1, 0], 0)) || edges.contains(&(vec![0, -1], 1)));
            }
            other => panic!("expected determination failure, got {other}"),
        }
        // [-1,0]^2 misses the outgoing edge (0,0) → (1,0)
        let err = convex_projection(&window, &m, &[-1, -1], &[0, 0]).unwrap_err();
        match err {
            ZnError::NotDetermined(edges) => {
                assert!(edges.contains(&(vec![0, 0], 0)) || edges.contains(&(vec![0, 0], 1)));
            }
            other => panic!("expected determination failure, got {other}"),
        }
    }

    #[test]
    fn convex_projection_bar_on_line() {
        // bar with support [2,5] on the window [0,7] of Z
        let window = GridPoset::new(&[0], &[7]);
        let p = Arc::new(window.poset.clone());
        let f = Field::GF2;
        let dims: Vec<usize> =
            (0..8).map(|i| usize::from((2..=5).contains(&(i as i64)))).collect();
        let mut edges = BTreeMap::new();
        for &(a, b) in p.covers() {
            let m = if dims[a] == 1 && dims[b] == 1 {
                Matrix::identity(f, 1)
            } else {
                Matrix::zero(f, dims[b], dims[a])
            };
            edges.insert((a, b), m);
        }
        let m = PosetModule::new(p, f, dims, edges).unwrap();
        assert!(convex_projection(&window, &m, &[1], &[6]).is_ok());
        assert!(matches!(
            convex_projection(&window, &m, &[3], &[4]),
            Err(ZnError::NotDetermined(_))
        ));
        // canonical box of the accepted module is [1,6]
        let bm = convex_projection(&window, &m, &[1], &[6]).unwrap();
        let canon = bm.canonical().unwrap();
        assert_eq!((canon.grid.lo(), canon.grid.hi()), (&[1i64][..], &[6i64][..]));
    }

    #[test]
    fn matlis_dual_basics() {
        let grid = GridPoset::new(&[0, 0], &[1, 1]);
        let z = PosetModule::zero(Arc::new(grid.poset.clone()), Field::GF2);
        let zd = BoxModule::new(grid, z).unwrap().matlis_dual();
        assert!(zd.module.is_zero());

        // k_0 on the symmetric box is self-dual on the nose
        let k0 = k0_box();
        let dual = k0.matlis_dual();
        assert_eq!(dual.grid.lo(), k0.grid.lo());
        assert_eq!(dual.module.dims(), k0.module.dims());

        // flat label (c, τ) ↔ injective label (−c, τ)
        let grid = GridPoset::new(&[-2, 0], &[1, 3]);
        let fl = FaceLabel::flat_at(&grid, &[-2, 1]);
        assert_eq!(fl.face, vec![0]);
        let dual_label = fl.matlis_dual();
        assert_eq!(dual_label.kind, FaceKind::Injective);
        assert_eq!(dual_label.base, vec![2, -1]);
        assert_eq!(dual_label.face, vec![0]);
    }

    #[test]
    fn double_dual_is_identity() {
        let k0 = k0_box();
        let dd = k0.matlis_dual().matlis_dual();
        assert_eq!(dd.grid.lo(), k0.grid.lo());
        assert_eq!(dd.grid.hi(), k0.grid.hi());
        assert_eq!(dd.module.dims(), k0.module.dims());
        assert_eq!(dd.module.rank_invariant(), k0.module.rank_invariant());
    }

    #[test]
    fn f_preceq_e_examples() {
        let mk = |kind, base: &[i64], face: &[usize]| FaceLabel {
            kind,
            base: base.to_vec(),
            face: face.to_vec(),
        };
        // both at the origin with no faces: intersect
        assert!(f_preceq_e(
            &mk(FaceKind::Flat, &[0, 0], &[]),
            &mk(FaceKind::Injective, &[0, 0], &[])
        ));
        // n = 1: flat at 5 against injective at 3
        assert!(!f_preceq_e(&mk(FaceKind::Flat, &[5], &[]), &mk(FaceKind::Injective, &[3], &[])));
        // n = 2: coordinate 0 free on the flat side, 0 ≤ 9 in the other
        assert!(f_preceq_e(
            &mk(FaceKind::Flat, &[5, 0], &[0]),
            &mk(FaceKind::Injective, &[3, 9], &[])
        ));
    }

    #[test]
    fn flange_of_constant() {
        let grid = GridPoset::new(&[-1, -1], &[1, 1]);
        let m = PosetModule::constant(Arc::new(grid.poset.clone()), Field::GF2);
        let bm = BoxModule::new(grid, m).unwrap();
        let fl = bm.flange_presentation().unwrap();
        assert_eq!(fl.flats.len(), 1);
        assert_eq!(fl.injectives.len(), 1);
        assert_eq!(fl.flats[0].base, vec![-1, -1]);
        assert_eq!(fl.flats[0].face, vec![0, 1]);
        assert_eq!(fl.injectives[0].base, vec![1, 1]);
        assert_eq!(fl.injectives[0].face, vec![0, 1]);
        assert!(!fl.entries().get(0, 0).is_zero());
    }

    #[test]
    fn flange_of_bar_and_skyscraper() {
        // single Z^1 bar: flat at the left end, injective at the right end
        let grid = GridPoset::new(&[0], &[4]);
        let p = Arc::new(grid.poset.clone());
        let f = Field::GF2;
        let dims: Vec<usize> = (0..5).map(|i| usize::from((1..=3).contains(&i))).collect();
        let mut edges = BTreeMap::new();
        for &(a, b) in p.covers() {
            let m = if dims[a] == 1 && dims[b] == 1 {
                Matrix::identity(f, 1)
            } else {
                Matrix::zero(f, dims[b], dims[a])
            };
            edges.insert((a, b), m);
        }
        let bar = PosetModule::new(p, f, dims, edges).unwrap();
        let bm = BoxModule::new(grid, bar).unwrap();
        let fl = bm.flange_presentation().unwrap();
        assert_eq!(fl.flats, vec![FaceLabel { kind: FaceKind::Flat, base: vec![1], face: vec![] }]);
        assert_eq!(
            fl.injectives,
            vec![FaceLabel { kind: FaceKind::Injective, base: vec![3], face: vec![] }]
        );

        // k_0 in two parameters: 1x1 flange
        let k0 = k0_box();
        let fl = k0.flange_presentation().unwrap();
        assert_eq!(fl.flats.len(), 1);
        assert_eq!(fl.injectives.len(), 1);
        assert_eq!(fl.flats[0], FaceLabel { kind: FaceKind::Flat, base: vec![0, 0], face: vec![] });
        assert_eq!(
            fl.injectives[0],
            FaceLabel { kind: FaceKind::Injective, base: vec![0, 0], face: vec![] }
        );
    }

    #[test]
    fn injective_resolution_of_k0_is_koszul() {
        let k0 = k0_box();
        let res = k0.minimal_injective_resolution().unwrap();
        assert_eq!(res.term_counts(), vec![1, 2, 1]);
        assert_eq!(res.length(), 2);
        assert!(res.complex.is_resolution().unwrap());
        // E^0 is cogenerated at the origin with empty face
        assert_eq!(res.faces[0][0].base, vec![0, 0]);
        assert_eq!(res.faces[0][0].face, Vec::<usize>::new());
    }

    #[test]
    fn injective_module_has_length_zero_resolution() {
        // a single coprincipal downset: k[D] for D cogenerated at the top
        // corner is the constant module, already injective
        let grid = GridPoset::new(&[0, 0], &[1, 1]);
        let m = PosetModule::constant(Arc::new(grid.poset.clone()), Field::GF2);
        let bm = BoxModule::new(grid, m).unwrap();
        let res = bm.minimal_injective_resolution().unwrap();
        assert_eq!(res.length(), 0);
    }

    #[test]
    fn flat_resolution_agrees_with_direct_computation() {
        let k0 = k0_box();
        let res = k0.minimal_flat_resolution().unwrap();
        assert_eq!(res.term_counts(), vec![1, 2, 1]);
        assert!(res.complex.is_resolution().unwrap());
        // direct grid-level upset resolution has the same shape
        let direct = crate::resolve::upset_resolution(k0.module()).unwrap();
        let counts: Vec<usize> = direct.terms.iter().map(Vec::len).collect();
        assert_eq!(counts, res.term_counts());
        // duality of term counts: flat resolution of m ↔ injective
        // resolution of the dual
        let dual_inj = k0.matlis_dual().minimal_injective_resolution().unwrap();
        assert_eq!(res.term_counts(), dual_inj.term_counts());
    }

    #[test]
    fn resolution_length_bound() {
        // assorted small box modules in n = 1, 2: length ≤ n
        let grid = GridPoset::new(&[0, 0], &[2, 2]);
        let p = Arc::new(grid.poset.clone());
        let f = Field::GF2;
        let u = p
            .upset_closure(&[grid.index_of(&[1, 0]).unwrap(), grid.index_of(&[0, 2]).unwrap()])
            .unwrap();
        let m = crate::indicator::IndicatorModule::upset(&p, f, u).module;
        let bm = BoxModule::new(grid.clone(), m).unwrap();
        assert!(bm.minimal_injective_resolution().unwrap().length() <= 2);
        assert!(bm.minimal_flat_resolution().unwrap().length() <= 2);
    }
}
