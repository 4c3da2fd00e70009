//! Minimal upset covers and downset hulls over finite posets, indicator
//! resolutions and (co)presentations, fringe presentation synthesis, and
//! pullback of all of these through an encoding.
//!
//! Principal upsets are the projectives and principal downsets the
//! injectives of the category of modules over a finite poset; Hom spaces
//! between them are at most one-dimensional with automatically connected
//! elements, which is why resolutions computed over an encoding poset pull
//! back to valid monomial matrices over the original poset.

use crate::encoding::Encoding;
use crate::indicator::{sum_of_indicators, MonomialMatrix, Region};
use crate::linalg::{Field, Matrix};
use crate::module::{ModuleError, ModuleHom, PosetModule};
use crate::poset::FinitePoset;
use std::sync::Arc;

/// A minimal cover ⊕_p k[U_p]^{β_p} ↠ H (or, dually, a minimal hull
/// H ↪ ⊕_q k[D_q]^{γ_q}).
#[derive(Debug, Clone)]
pub struct Cover {
    /// summand count per poset element
    pub counts: Vec<usize>,
    /// one entry per summand, the element generating (cogenerating) it,
    /// ascending
    pub labels: Vec<usize>,
    /// the cover map F → H (hull map H → E)
    pub map: ModuleHom,
}

/// Minimal projective cover by principal upset modules. The multiplicity
/// at p is dim of H_p modulo the images from strictly below (the radical
/// quotient); lifts are the lexicographically first standard basis vectors
/// completing the radical.
pub fn projective_cover(h: &PosetModule) -> Result<Cover, ModuleError> {
    let poset = h.poset().clone();
    let f = h.field();
    let n = poset.n_elements();
    let mut counts = vec![0usize; n];
    let mut gens: Vec<(usize, Matrix)> = Vec::new(); // (element, lift vector)
    for p in 0..n {
        let mut rad_cols: Vec<Matrix> = Vec::new();
        for r in poset.covers_below(p) {
            let e = h.edge(r, p);
            for j in 0..e.cols() {
                rad_cols.push(e.column(j));
            }
        }
        let rad = if rad_cols.is_empty() {
            Matrix::zero(f, h.dim_at(p), 0)
        } else {
            Matrix::hcat(f, &rad_cols.iter().collect::<Vec<_>>())
        };
        let sq = crate::linalg::Subquotient::cokernel(f, h.dim_at(p), &rad);
        // standard basis vectors whose classes form a basis of the quotient
        let mut chosen: Vec<Matrix> = Vec::new();
        let mut span = rad_cols;
        for j in 0..h.dim_at(p) {
            if chosen.len() == sq.dim() {
                break;
            }
            let mut e = Matrix::zero(f, h.dim_at(p), 1);
            e.set(j, 0, f.one());
            let mut test_cols: Vec<&Matrix> = span.iter().collect();
            let with = Matrix::hcat(f, &test_cols);
            let rank_before = with.rank();
            test_cols.push(&e);
            let with_e = Matrix::hcat(f, &test_cols);
            if with_e.rank() > rank_before {
                span.push(e.clone());
                chosen.push(e);
            }
        }
        counts[p] = chosen.len();
        for g in chosen {
            gens.push((p, g));
        }
    }
    let labels: Vec<usize> = gens.iter().map(|(p, _)| *p).collect();
    let regions: Vec<Region> =
        labels.iter().map(|&p| Region::Up(poset.upset_closure(&[p]).unwrap())).collect();
    let cover_mod = sum_of_indicators(&poset, f, &regions);
    // cover map at degree x: the column for summand (p, i) is the image of
    // its lift under H(p ≤ x)
    let mut maps = Vec::with_capacity(n);
    for x in 0..n {
        let active: Vec<usize> =
            (0..gens.len()).filter(|&s| poset.leq(gens[s].0, x)).collect();
        let mut m = Matrix::zero(f, h.dim_at(x), active.len());
        for (col, &s) in active.iter().enumerate() {
            let (p, g) = &gens[s];
            let v = h.composite(*p, x).mul(g)?;
            for i in 0..h.dim_at(x) {
                m.set(i, col, v.get(i, 0).clone());
            }
        }
        maps.push(m);
    }
    let map = ModuleHom::new(cover_mod, h.clone(), maps)?;
    Ok(Cover { counts, labels, map })
}

/// Minimal injective hull by principal downset modules, computed as the
/// dual of the projective cover over the opposite poset. The multiplicity
/// at q is the dimension of the socle at q (everything killed by all maps
/// upward).
pub fn injective_hull(h: &PosetModule) -> Result<Cover, ModuleError> {
    let op = Arc::new(h.poset().opposite());
    let dual = h.opposite_dual(op);
    let cover = projective_cover(&dual)?;
    let poset = h.poset().clone();
    let f = h.field();
    let regions: Vec<Region> = cover
        .labels
        .iter()
        .map(|&q| Region::Down(poset.downset_closure(&[q]).unwrap()))
        .collect();
    let hull_mod = sum_of_indicators(&poset, f, &regions);
    let maps: Vec<Matrix> = cover.map.maps().iter().map(Matrix::transpose).collect();
    let map = ModuleHom::new(h.clone(), hull_mod, maps)?;
    Ok(Cover { counts: cover.counts, labels: cover.labels, map })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// upset resolution: F_0 ← F_1 ← …, differentials decrease degree
    Homological,
    /// downset resolution: E^0 → E^1 → …
    Cohomological,
}

/// A complex of indicator-module sums with monomial-matrix differentials.
/// `differentials[i]` connects `terms[i]` and `terms[i+1]`: its rows are
/// labeled by `terms[i]` and its columns by `terms[i+1]` (targets/sources
/// for the homological direction, sources/targets for the cohomological
/// one). The augmentation relates term 0 to the resolved module.
#[derive(Debug, Clone)]
pub struct IndicatorComplex {
    pub direction: Direction,
    pub poset: Arc<FinitePoset>,
    pub field: Field,
    pub terms: Vec<Vec<Region>>,
    pub differentials: Vec<MonomialMatrix>,
    /// F_0 → M for homological, M → E^0 for cohomological
    pub augmentation: ModuleHom,
}

impl IndicatorComplex {
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    /// Evaluate differential i as a homomorphism (source and target per
    /// the direction).
    pub fn evaluate_differential(&self, i: usize) -> Result<ModuleHom, ModuleError> {
        self.differentials[i]
            .evaluate(&self.poset)
            .map_err(|e| match e {
                crate::indicator::IndicatorError::Module(m) => m,
                other => panic!("complex differential failed to evaluate: {other}"),
            })
    }

    /// d ∘ d = 0, checked by evaluation.
    pub fn differentials_compose_to_zero(&self) -> Result<bool, ModuleError> {
        for i in 1..self.differentials.len() {
            let a = self.evaluate_differential(i - 1)?;
            let b = self.evaluate_differential(i)?;
            let comp = match self.direction {
                Direction::Homological => a.compose(&b)?,
                Direction::Cohomological => b.compose(&a)?,
            };
            if !comp.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exactness: homology concentrated in position 0 and isomorphic to
    /// the augmented module (witnessed by the augmentation map).
    pub fn is_resolution(&self) -> Result<bool, ModuleError> {
        if !self.differentials_compose_to_zero()? {
            return Ok(false);
        }
        let n = self.poset.n_elements();
        let deltas: Vec<ModuleHom> = (0..self.differentials.len())
            .map(|i| self.evaluate_differential(i))
            .collect::<Result<_, _>>()?;
        match self.direction {
            Direction::Homological => {
                let aug = &self.augmentation;
                for x in 0..n {
                    // surjectivity of the augmentation
                    if aug.map_at(x).rank() != aug.target().dim_at(x) {
                        return Ok(false);
                    }
                    // ker(aug) = im(d_0)
                    let ker_aug = aug.source().dim_at(x) - aug.map_at(x).rank();
                    let im0 = deltas.first().map_or(0, |d| d.map_at(x).rank());
                    if ker_aug != im0 {
                        return Ok(false);
                    }
                    if !deltas.is_empty()
                        && !aug.compose(&deltas[0])?.is_zero()
                    {
                        return Ok(false);
                    }
                    for i in 0..deltas.len() {
                        let ker = deltas[i].source().dim_at(x) - deltas[i].map_at(x).rank();
                        let im_next =
                            deltas.get(i + 1).map_or(0, |d| d.map_at(x).rank());
                        if ker != im_next {
                            return Ok(false);
                        }
                    }
                }
            }
            Direction::Cohomological => {
                let aug = &self.augmentation;
                for x in 0..n {
                    // injectivity of the augmentation
                    if aug.map_at(x).rank() != aug.source().dim_at(x) {
                        return Ok(false);
                    }
                    // im(aug) = ker(d_0)
                    let ker0 = match deltas.first() {
                        Some(d) => d.source().dim_at(x) - d.map_at(x).rank(),
                        None => aug.target().dim_at(x),
                    };
                    if aug.map_at(x).rank() != ker0 {
                        return Ok(false);
                    }
                    if !deltas.is_empty()
                        && !deltas[0].compose(aug)?.is_zero()
                    {
                        return Ok(false);
                    }
                    for i in 1..deltas.len() + 1 {
                        let im_prev = deltas[i - 1].map_at(x).rank();
                        let ker = match deltas.get(i) {
                            Some(d) => d.source().dim_at(x) - d.map_at(x).rank(),
                            None => deltas[i - 1].target().dim_at(x),
                        };
                        if im_prev != ker {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// No nonzero entry connects a pair of equal labels in consecutive
    /// terms; with the radical/socle construction this certifies
    /// minimality.
    pub fn has_no_split_summand(&self) -> bool {
        self.differentials.iter().all(|d| {
            d.rows.iter().enumerate().all(|(i, r)| {
                d.cols
                    .iter()
                    .enumerate()
                    .all(|(j, c)| d.entries.get(i, j).is_zero() || r != c)
            })
        })
    }
}

fn principal_up(poset: &Arc<FinitePoset>, p: usize) -> Region {
    Region::Up(poset.upset_closure(&[p]).unwrap())
}

fn principal_down(poset: &Arc<FinitePoset>, p: usize) -> Region {
    Region::Down(poset.downset_closure(&[p]).unwrap())
}

/// Positions (in label order) of the summands whose label contains x.
fn active_at(labels: &[Region], x: usize) -> Vec<usize> {
    (0..labels.len()).filter(|&s| labels[s].members().contains(x)).collect()
}

/// Extract the scalar of the component between two principal-label
/// summands of an evaluated homomorphism. `read_at` must lie in both
/// labels.
fn component_scalar(
    hom: &ModuleHom,
    src_labels: &[Region],
    tgt_labels: &[Region],
    src_idx: usize,
    tgt_idx: usize,
    read_at: usize,
) -> crate::linalg::Scalar {
    let srcs = active_at(src_labels, read_at);
    let tgts = active_at(tgt_labels, read_at);
    let si = srcs.iter().position(|&s| s == src_idx).unwrap();
    let ti = tgts.iter().position(|&t| t == tgt_idx).unwrap();
    hom.map_at(read_at).get(ti, si).clone()
}

/// Minimal upset resolution: iterated projective covers of kernels until
/// the kernel vanishes. `max_length` truncates (used for presentations).
fn upset_resolution_inner(
    h: &PosetModule,
    max_length: Option<usize>,
) -> Result<IndicatorComplex, ModuleError> {
    let poset = h.poset().clone();
    let f = h.field();
    let mut terms: Vec<Vec<Region>> = Vec::new();
    let mut labels: Vec<Vec<usize>> = Vec::new();
    let mut differentials: Vec<MonomialMatrix> = Vec::new();

    let cover0 = projective_cover(h)?;
    let augmentation = cover0.map.clone();
    terms.push(cover0.labels.iter().map(|&p| principal_up(&poset, p)).collect());
    labels.push(cover0.labels.clone());
    let mut prev_map = cover0.map;
    let budget = poset.n_elements() * (h.total_dim() + 2) + 2;
    for step in 0..budget {
        if let Some(maxl) = max_length {
            if step >= maxl {
                break;
            }
        }
        let (kernel, incl) = prev_map.kernel()?;
        if kernel.is_zero() {
            break;
        }
        let cover = projective_cover(&kernel)?;
        let diff = incl.compose(&cover.map)?; // F_{i+1} → F_i
        let tgt_labels = terms.last().unwrap().clone();
        let src_labels: Vec<Region> =
            cover.labels.iter().map(|&p| principal_up(&poset, p)).collect();
        let tgt_elems = labels.last().unwrap().clone();
        let mut entries = Matrix::zero(f, tgt_labels.len(), src_labels.len());
        for (j, &q) in cover.labels.iter().enumerate() {
            for (i, &p) in tgt_elems.iter().enumerate() {
                if poset.leq(p, q) {
                    let s = component_scalar(&diff, &src_labels, &tgt_labels, j, i, q);
                    entries.set(i, j, s);
                }
            }
        }
        differentials.push(MonomialMatrix::new(tgt_labels, src_labels.clone(), entries));
        terms.push(src_labels);
        labels.push(cover.labels.clone());
        prev_map = cover.map;
    }
    Ok(IndicatorComplex {
        direction: Direction::Homological,
        poset,
        field: f,
        terms,
        differentials,
        augmentation,
    })
}

/// Minimal downset resolution: iterated injective hulls of cokernels.
fn downset_resolution_inner(
    h: &PosetModule,
    max_length: Option<usize>,
) -> Result<IndicatorComplex, ModuleError> {
    let poset = h.poset().clone();
    let f = h.field();
    let mut terms: Vec<Vec<Region>> = Vec::new();
    let mut labels: Vec<Vec<usize>> = Vec::new();
    let mut differentials: Vec<MonomialMatrix> = Vec::new();

    let hull0 = injective_hull(h)?;
    let augmentation = hull0.map.clone();
    terms.push(hull0.labels.iter().map(|&p| principal_down(&poset, p)).collect());
    labels.push(hull0.labels.clone());
    let mut prev_map = hull0.map;
    let budget = poset.n_elements() * (h.total_dim() + 2) + 2;
    for step in 0..budget {
        if let Some(maxl) = max_length {
            if step >= maxl {
                break;
            }
        }
        let (coker, proj) = prev_map.cokernel()?;
        if coker.is_zero() {
            break;
        }
        let hull = injective_hull(&coker)?;
        let diff = hull.map.compose(&proj)?; // E^i → E^{i+1}
        let src_labels = terms.last().unwrap().clone();
        let tgt_labels: Vec<Region> =
            hull.labels.iter().map(|&p| principal_down(&poset, p)).collect();
        let src_elems = labels.last().unwrap().clone();
        let mut entries = Matrix::zero(f, src_labels.len(), tgt_labels.len());
        for (i, &p) in src_elems.iter().enumerate() {
            for (j, &q) in hull.labels.iter().enumerate() {
                // component k[D_p] → k[D_q] is nonzero only when q ≤ p;
                // read the scalar at the cogenerator q
                if poset.leq(q, p) {
                    let s = component_scalar(&diff, &src_labels, &tgt_labels, i, j, q);
                    entries.set(i, j, s);
                }
            }
        }
        differentials.push(MonomialMatrix::new(src_labels, tgt_labels.clone(), entries));
        terms.push(tgt_labels);
        labels.push(hull.labels.clone());
        prev_map = hull.map;
    }
    Ok(IndicatorComplex {
        direction: Direction::Cohomological,
        poset,
        field: f,
        terms,
        differentials,
        augmentation,
    })
}

pub fn upset_resolution(h: &PosetModule) -> Result<IndicatorComplex, ModuleError> {
    upset_resolution_inner(h, None)
}

pub fn downset_resolution(h: &PosetModule) -> Result<IndicatorComplex, ModuleError> {
    downset_resolution_inner(h, None)
}

/// Upset presentation F_1 → F_0 (cokernel ≅ H via the augmentation) and
/// downset copresentation E^0 → E^1 (kernel ≅ H).
pub fn presentations(
    h: &PosetModule,
) -> Result<(IndicatorComplex, IndicatorComplex), ModuleError> {
    Ok((upset_resolution_inner(h, Some(1))?, downset_resolution_inner(h, Some(1))?))
}

/// A fringe presentation: monomial matrix plus the witness factorization
/// F ↠ M ↪ E through the presented module.
#[derive(Debug, Clone)]
pub struct FringePresentation {
    pub matrix: MonomialMatrix,
    pub onto: ModuleHom,
    pub into: ModuleHom,
}

impl FringePresentation {
    /// The evaluated matrix must equal into ∘ onto.
    pub fn verify(&self) -> Result<bool, ModuleError> {
        let poset = self.onto.source().poset().clone();
        let evaluated = match self.matrix.evaluate(&poset) {
            Ok(h) => h,
            Err(_) => return Ok(false),
        };
        let through = self.into.compose(&self.onto)?;
        Ok(evaluated.maps() == through.maps())
    }
}

/// Fringe presentation of the module encoded by `e`: compose the minimal
/// upset cover and downset hull of H over the encoding poset, then pull
/// the monomial matrix back along π.
pub fn fringe_presentation(e: &Encoding) -> Result<FringePresentation, ModuleError> {
    let p_poset = e.h.poset().clone();
    let f = e.h.field();
    let cover = projective_cover(&e.h)?;
    let hull = injective_hull(&e.h)?;
    let composite = hull.map.compose(&cover.map)?;
    let rows_p: Vec<Region> = cover.labels.iter().map(|&p| principal_up(&p_poset, p)).collect();
    let cols_p: Vec<Region> =
        hull.labels.iter().map(|&q| principal_down(&p_poset, q)).collect();
    let mut entries = Matrix::zero(f, rows_p.len(), cols_p.len());
    for (i, &p) in cover.labels.iter().enumerate() {
        for (j, &q) in hull.labels.iter().enumerate() {
            if p_poset.leq(p, q) {
                entries.set(i, j, component_scalar(&composite, &rows_p, &cols_p, i, j, q));
            }
        }
    }
    let mm_p = MonomialMatrix::new(rows_p, cols_p, entries);
    let mm_q = mm_p.pullback(&e.source_poset, &e.morphism);
    // witness factorization over Q through the encoded module
    let fq = sum_of_indicators(&e.source_poset, f, &mm_q.rows);
    let eq = sum_of_indicators(&e.source_poset, f, &mm_q.cols);
    let nq = e.source_poset.n_elements();
    let mut onto_maps = Vec::with_capacity(nq);
    let mut into_maps = Vec::with_capacity(nq);
    for x in 0..nq {
        let px = e.morphism.apply(x);
        onto_maps.push(e.witnesses[x].mul(cover.map.map_at(px))?);
        into_maps.push(hull.map.map_at(px).mul(&e.witnesses[x].inverse()?)?);
    }
    let onto = ModuleHom::new(fq, e.module.clone(), onto_maps)?;
    let into = ModuleHom::new(e.module.clone(), eq, into_maps)?;
    Ok(FringePresentation { matrix: mm_q, onto, into })
}

/// Pull an indicator complex over the encoding poset back along π:
/// labels are replaced by preimages, scalar blocks stay (entries whose
/// labels die are zeroed), and the augmentation is transported through
/// the encoding witnesses.
pub fn pullback_complex(
    e: &Encoding,
    c: &IndicatorComplex,
) -> Result<IndicatorComplex, ModuleError> {
    let q_poset = e.source_poset.clone();
    let terms: Vec<Vec<Region>> = c
        .terms
        .iter()
        .map(|t| t.iter().map(|r| r.preimage(&q_poset, &e.morphism)).collect())
        .collect();
    let differentials: Vec<MonomialMatrix> =
        c.differentials.iter().map(|d| d.pullback(&q_poset, &e.morphism)).collect();
    let nq = q_poset.n_elements();
    let f = c.field;
    let term0 = sum_of_indicators(&q_poset, f, &terms[0]);
    let augmentation = match c.direction {
        Direction::Homological => {
            let mut maps = Vec::with_capacity(nq);
            for x in 0..nq {
                maps.push(e.witnesses[x].mul(c.augmentation.map_at(e.morphism.apply(x)))?);
            }
            ModuleHom::new(term0, e.module.clone(), maps)?
        }
        Direction::Cohomological => {
            let mut maps = Vec::with_capacity(nq);
            for x in 0..nq {
                maps.push(
                    c.augmentation.map_at(e.morphism.apply(x)).mul(&e.witnesses[x].inverse()?)?,
                );
            }
            ModuleHom::new(e.module.clone(), term0, maps)?
        }
    };
    Ok(IndicatorComplex {
        direction: c.direction,
        poset: q_poset,
        field: f,
        terms,
        differentials,
        augmentation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Scalar;
    use crate::poset::GridPoset;
    use std::collections::BTreeMap;

    fn bar_on_chain() -> PosetModule {
        // dims (0,1,0) on 0<1<2
        let p = Arc::new(FinitePoset::chain(3));
        let f = Field::GF2;
        let mut edges = BTreeMap::new();
        edges.insert((0, 1), Matrix::zero(f, 1, 0));
        edges.insert((1, 2), Matrix::zero(f, 0, 1));
        PosetModule::new(p, f, vec![0, 1, 0], edges).unwrap()
    }

    #[test]
    fn cover_of_constant_with_minimum() {
        let p = Arc::new(FinitePoset::chain(4));
        let k = PosetModule::constant(p, Field::GF2);
        let c = projective_cover(&k).unwrap();
        assert_eq!(c.labels, vec![0]);
        for x in 0..4 {
            assert_eq!(c.map.map_at(x).rank(), 1);
        }
    }

    #[test]
    fn cover_of_two_incomparable_points() {
        let p = Arc::new(FinitePoset::antichain(2));
        let k = PosetModule::constant(p, Field::GF2);
        let c = projective_cover(&k).unwrap();
        assert_eq!(c.labels, vec![0, 1]);
    }

    #[test]
    fn cover_and_hull_of_bar() {
        let m = bar_on_chain();
        let c = projective_cover(&m).unwrap();
        assert_eq!(c.labels, vec![1]);
        let h = injective_hull(&m).unwrap();
        assert_eq!(h.labels, vec![1]);
        // hull is injective degreewise
        for x in 0..3 {
            assert_eq!(h.map.map_at(x).rank(), m.dim_at(x));
        }
    }

    #[test]
    fn hull_of_constant_with_maximum() {
        let p = Arc::new(FinitePoset::chain(3));
        let k = PosetModule::constant(p, Field::Prime(5));
        let h = injective_hull(&k).unwrap();
        assert_eq!(h.labels, vec![2]);
    }

    #[test]
    fn resolution_of_projective_has_length_zero() {
        let p = Arc::new(FinitePoset::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap());
        let f = Field::GF2;
        let proj = sum_of_indicators(
            &p,
            f,
            &[principal_up(&p, 0), principal_up(&p, 1), principal_up(&p, 2)],
        );
        let res = upset_resolution(&proj).unwrap();
        assert_eq!(res.length(), 0);
        assert!(res.is_resolution().unwrap());
    }

    #[test]
    fn koszul_shape_for_origin_skyscraper() {
        // k at the minimum of the 2x2 grid: ranks (1, 2, 1)
        let g = GridPoset::new(&[0, 0], &[1, 1]);
        let p = Arc::new(g.poset.clone());
        let f = Field::GF2;
        let o = g.index_of(&[0, 0]).unwrap();
        let dims: Vec<usize> = (0..4).map(|i| usize::from(i == o)).collect();
        let mut edges = BTreeMap::new();
        for &(a, b) in p.covers() {
            edges.insert((a, b), Matrix::zero(f, dims[b], dims[a]));
        }
        let m = PosetModule::new(p, f, dims, edges).unwrap();
        let res = upset_resolution(&m).unwrap();
        let counts: Vec<usize> = res.terms.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 2, 1]);
        assert!(res.is_resolution().unwrap());
        assert!(res.has_no_split_summand());
    }

    #[test]
    fn downset_resolution_of_bar() {
        let m = bar_on_chain();
        let res = downset_resolution(&m).unwrap();
        assert!(res.is_resolution().unwrap());
        assert!(res.differentials_compose_to_zero().unwrap());
    }

    #[test]
    fn puuska_presentation_matches_up_to_scaling() {
        let m = crate::encoding::fixtures::puuska_module();
        let (up, down) = presentations(&m).unwrap();
        // F_0 = k[L] ⊕ k[R] (the two minimal elements), F_1 = k[T] ⊕ k[B]
        assert_eq!(up.terms[0].len(), 2);
        assert_eq!(up.terms[1].len(), 2);
        let d = &up.differentials[0];
        // all four entries nonzero; diagonal-equivalent to [[2,1],[-1,-1]],
        // detected by the cross-ratio (ad)/(bc) = 2
        let f = Field::Rational;
        let get = |i: usize, j: usize| -> Scalar { d.entries.get(i, j).clone() };
        for i in 0..2 {
            for j in 0..2 {
                assert!(!get(i, j).is_zero());
            }
        }
        let ad = f.mul(&get(0, 0), &get(1, 1));
        let bc = f.mul(&get(0, 1), &get(1, 0));
        assert_eq!(ad, f.mul(&f.from_i64(2), &bc));
        // cokernel of the evaluated presentation is the module
        let hom = up.evaluate_differential(0).unwrap();
        let (coker, _) = hom.cokernel().unwrap();
        assert_eq!(coker.dims(), m.dims());
        // copresentation kernel gives the module back
        let dhom = down.evaluate_differential(0).unwrap();
        let (ker, _) = dhom.kernel().unwrap();
        assert_eq!(ker.dims(), m.dims());
    }

    #[test]
    fn bar_presentation_is_one_by_one() {
        let m = bar_on_chain();
        let (up, _) = presentations(&m).unwrap();
        assert_eq!(up.terms[0].len(), 1);
        assert_eq!(up.terms[1].len(), 1);
        assert_eq!(*up.differentials[0].entries.get(0, 0), Scalar::Fp(1));
    }

    #[test]
    fn fringe_of_constant_module() {
        // k[Q] via the one-point encoding: 1x1 matrix [1] with full labels
        let q = Arc::new(FinitePoset::chain(3));
        let f = Field::GF2;
        let m = PosetModule::constant(q.clone(), f);
        let pt = Arc::new(FinitePoset::antichain(1));
        let h = PosetModule::constant(pt.clone(), f);
        let pi = crate::poset::PosetMorphism::new(&q, &pt, vec![0; 3]).unwrap();
        let e = Encoding::new(
            q.clone(),
            pi,
            h,
            vec![Matrix::identity(f, 1); 3],
            m.clone(),
        )
        .unwrap();
        let fp = fringe_presentation(&e).unwrap();
        assert_eq!(fp.matrix.rows.len(), 1);
        assert_eq!(fp.matrix.cols.len(), 1);
        assert_eq!(*fp.matrix.entries.get(0, 0), Scalar::Fp(1));
        assert_eq!(fp.matrix.rows[0].members().len(), 3);
        assert_eq!(fp.matrix.cols[0].members().len(), 3);
        assert!(fp.verify().unwrap());
    }

    #[test]
    fn fringe_of_single_bar() {
        let m = bar_on_chain();
        let e = Encoding::identity(&m);
        let fp = fringe_presentation(&e).unwrap();
        assert_eq!(fp.matrix.rows.len(), 1);
        assert_eq!(fp.matrix.cols.len(), 1);
        assert_eq!(*fp.matrix.entries.get(0, 0), Scalar::Fp(1));
        // birth ray row and death ray column
        assert_eq!(*fp.matrix.rows[0].members(), crate::poset::ElemSet::from_iter(3, [1, 2]));
        assert_eq!(*fp.matrix.cols[0].members(), crate::poset::ElemSet::from_iter(3, [0, 1]));
        let (img, _, _) = fp.matrix.image_module(&m.poset().clone()).unwrap();
        assert_eq!(img.dims(), m.dims());
        assert!(fp.verify().unwrap());
    }

    #[test]
    fn pullback_complex_through_identity() {
        let m = crate::encoding::fixtures::puuska_module();
        let e = Encoding::identity(&m);
        let res = upset_resolution(&m).unwrap();
        let pulled = pullback_complex(&e, &res).unwrap();
        assert!(pulled.is_resolution().unwrap());
        assert_eq!(pulled.terms.len(), res.terms.len());
    }
}
