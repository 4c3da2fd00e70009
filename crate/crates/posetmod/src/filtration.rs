//! Multifiltered finite simplicial complexes over grid posets, their
//! persistent homology as a poset module, and the natural finite encoding
//! through the poset of distinct subcomplexes.
//!
//! Homology is computed once per distinct subcomplex by boundary-matrix
//! reduction over the chosen field, with bases fixed by deterministic
//! elimination, so induced maps are well defined matrices and grid points
//! sharing a subcomplex share bases on the nose (the encoding witnesses
//! are identities).

use crate::encoding::{Encoding, EncodingError};
use crate::linalg::{Field, Matrix, Subquotient};
use crate::module::{ModuleError, PosetModule};
use crate::poset::{ElemSet, FinitePoset, GridPoset, PosetMorphism, Upset};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum FiltrationError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("duplicate simplex {0:?}")]
    DuplicateSimplex(Vec<usize>),
    #[error("grade {0:?} lies outside the grid")]
    GradeOutsideGrid(Vec<i64>),
    #[error("filtration is invalid: {0:?}")]
    Invalid(Vec<FiltrationViolation>),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

/// A face entering later than a simplex containing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationViolation {
    pub simplex: Vec<usize>,
    pub face: Vec<usize>,
}

/// A finite simplicial complex with one entry upset of the grid per
/// simplex (the set of parameters at which the simplex is present).
#[derive(Debug, Clone)]
pub struct MultiFiltration {
    grid: GridPoset,
    poset: Arc<FinitePoset>,
    /// sorted vertex lists, ordered by (dimension, lexicographic)
    simplices: Vec<Vec<usize>>,
    entries: Vec<Upset>,
}

impl MultiFiltration {
    /// Build from (simplex, minimal entry grades) pairs. Entry sets are
    /// the upset closures of the given antichains.
    pub fn new(
        grid: GridPoset,
        data: Vec<(Vec<usize>, Vec<Vec<i64>>)>,
    ) -> Result<MultiFiltration, FiltrationError> {
        let poset = Arc::new(grid.poset.clone());
        let mut items: Vec<(Vec<usize>, Vec<Vec<i64>>)> = Vec::with_capacity(data.len());
        for (mut verts, grades) in data {
            verts.sort_unstable();
            verts.dedup();
            items.push((verts, grades));
        }
        items.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        for w in items.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(FiltrationError::DuplicateSimplex(w[0].0.clone()));
            }
        }
        let mut simplices = Vec::with_capacity(items.len());
        let mut entries = Vec::with_capacity(items.len());
        for (verts, grades) in items {
            let mut gen_idx = Vec::with_capacity(grades.len());
            for g in &grades {
                let idx = grid
                    .index_of(g)
                    .ok_or_else(|| FiltrationError::GradeOutsideGrid(g.clone()))?;
                gen_idx.push(idx);
            }
            entries.push(poset.upset_closure(&gen_idx).unwrap());
            simplices.push(verts);
        }
        Ok(MultiFiltration { grid, poset, simplices, entries })
    }

    pub fn grid(&self) -> &GridPoset {
        &self.grid
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn entries(&self) -> &[Upset] {
        &self.entries
    }

    pub fn max_dimension(&self) -> Option<usize> {
        self.simplices.last().map(|s| s.len() - 1)
    }

    /// Face-monotonicity check: every facet of a simplex is present and
    /// enters no later. Violations are data.
    pub fn validate(&self) -> Vec<FiltrationViolation> {
        let mut out = Vec::new();
        for (s, entry) in self.simplices.iter().zip(&self.entries) {
            if s.len() < 2 {
                continue;
            }
            for drop in 0..s.len() {
                let face: Vec<usize> =
                    s.iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, &v)| v).collect();
                match self.simplex_index(&face) {
                    None => out.push(FiltrationViolation { simplex: s.clone(), face }),
                    Some(fi) => {
                        if !entry.members().is_subset(self.entries[fi].members()) {
                            out.push(FiltrationViolation { simplex: s.clone(), face });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn simplex_index(&self, verts: &[usize]) -> Option<usize> {
        self.simplices
            .binary_search_by(|s| (s.len(), s.as_slice()).cmp(&(verts.len(), verts)))
            .ok()
    }

    /// The subcomplex present at a grid point, as a simplex bitset.
    pub fn subcomplex_at(&self, q: usize) -> ElemSet {
        ElemSet::from_iter(
            self.simplices.len(),
            (0..self.simplices.len()).filter(|&s| self.entries[s].contains(q)),
        )
    }
}

/// Deterministic homology data of one subcomplex: dimension plus the
/// cycle-to-coordinates reduction.
struct SubcomplexHomology {
    /// global indices of the present i-simplices, ascending
    chain_support: Vec<usize>,
    sq: Subquotient,
}

impl SubcomplexHomology {
    fn dim(&self) -> usize {
        self.sq.dim()
    }
}

fn boundary_matrix(
    filt: &MultiFiltration,
    field: Field,
    rows: &[usize],
    cols: &[usize],
) -> Matrix {
    let mut m = Matrix::zero(field, rows.len(), cols.len());
    for (j, &cs) in cols.iter().enumerate() {
        let simplex = &filt.simplices[cs];
        if simplex.len() == 1 {
            continue; // vertices have zero boundary
        }
        for drop in 0..simplex.len() {
            let face: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != drop)
                .map(|(_, &v)| v)
                .collect();
            let fi = filt.simplex_index(&face).expect("validated filtration has all faces");
            if let Ok(i) = rows.binary_search(&fi) {
                let sign = if drop % 2 == 0 { 1 } else { -1 };
                m.set(i, j, field.from_i64(sign));
            }
        }
    }
    m
}

fn homology_of_mask(
    filt: &MultiFiltration,
    field: Field,
    mask: &ElemSet,
    degree: usize,
) -> SubcomplexHomology {
    let of_dim = |d: usize| -> Vec<usize> {
        (0..filt.simplices.len())
            .filter(|&s| mask.contains(s) && filt.simplices[s].len() == d + 1)
            .collect()
    };
    let chain_support = of_dim(degree);
    let below = if degree == 0 { Vec::new() } else { of_dim(degree - 1) };
    let above = of_dim(degree + 1);
    let d_i = boundary_matrix(filt, field, &below, &chain_support);
    let d_above = boundary_matrix(filt, field, &chain_support, &above);
    let cycles = d_i.kernel_basis();
    let sq = Subquotient::new(field, chain_support.len(), &cycles, &d_above);
    SubcomplexHomology { chain_support, sq }
}

/// Induced map on homology for an inclusion of subcomplexes: send each
/// basis representative over, then read off its coordinates.
fn induced_map(
    field: Field,
    small: &SubcomplexHomology,
    large: &SubcomplexHomology,
) -> Matrix {
    let mut m = Matrix::zero(field, large.dim(), small.dim());
    for k in 0..small.dim() {
        let rep = small.sq.representative(k);
        let mut v = Matrix::zero(field, large.chain_support.len(), 1);
        for (pos, &s) in small.chain_support.iter().enumerate() {
            let target = large
                .chain_support
                .binary_search(&s)
                .expect("inclusion of subcomplexes preserves simplices");
            v.set(target, 0, rep.get(pos, 0).clone());
        }
        let coords = large.sq.project(&v).expect("a cycle stays a cycle under inclusion");
        for i in 0..large.dim() {
            m.set(i, k, coords.get(i, 0).clone());
        }
    }
    m
}

/// Persistent homology of a multifiltration in one degree, with the data
/// of the distinct subcomplexes that computed it.
#[derive(Debug, Clone)]
pub struct PHModule {
    pub module: PosetModule,
    pub degree: usize,
    /// distinct realized subcomplexes (simplex bitsets), ascending in
    /// (size, bits)
    pub classes: Vec<ElemSet>,
    /// class index per grid point
    pub class_of: Vec<usize>,
    /// homology dimension per class
    pub class_dims: Vec<usize>,
}

/// The shared computation behind `persistent_homology` and
/// `natural_encoding`: distinct subcomplexes, their poset under
/// inclusion, and the class-level homology module.
fn homology_classes(
    filt: &MultiFiltration,
    field: Field,
    degree: usize,
) -> Result<(PHModule, Arc<FinitePoset>, PosetModule, PosetMorphism), FiltrationError> {
    let violations = filt.validate();
    if !violations.is_empty() {
        return Err(FiltrationError::Invalid(violations));
    }
    let nq = filt.poset.n_elements();
    let mut classes: Vec<ElemSet> = Vec::new();
    let mut class_of = vec![0usize; nq];
    for q in 0..nq {
        let mask = filt.subcomplex_at(q);
        match classes.iter().position(|m| *m == mask) {
            Some(k) => class_of[q] = k,
            None => {
                classes.push(mask);
                class_of[q] = classes.len() - 1;
            }
        }
    }
    // deterministic class order: by (size, bits); remap
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&k| (classes[k].len(), classes[k].clone()));
    let rank_of: Vec<usize> = {
        let mut r = vec![0; classes.len()];
        for (new, &old) in order.iter().enumerate() {
            r[old] = new;
        }
        r
    };
    let classes: Vec<ElemSet> = order.iter().map(|&k| classes[k].clone()).collect();
    for c in class_of.iter_mut() {
        *c = rank_of[*c];
    }
    // class poset under inclusion
    let np = classes.len();
    let mut rel = Vec::new();
    for a in 0..np {
        for b in 0..np {
            if a != b && classes[a].is_subset(&classes[b]) {
                rel.push((a, b));
            }
        }
    }
    let class_poset =
        Arc::new(FinitePoset::from_relation(np, &rel).expect("inclusion order is acyclic"));
    let homs: Vec<SubcomplexHomology> =
        classes.iter().map(|m| homology_of_mask(filt, field, m, degree)).collect();
    let dims: Vec<usize> = homs.iter().map(SubcomplexHomology::dim).collect();
    let mut edges = BTreeMap::new();
    for &(a, b) in class_poset.covers() {
        edges.insert((a, b), induced_map(field, &homs[a], &homs[b]));
    }
    let h = PosetModule::new(class_poset.clone(), field, dims.clone(), edges)?;
    let morphism = PosetMorphism::new(&filt.poset, &class_poset, class_of.clone())
        .expect("subcomplex assignment is monotone");
    let module = PosetModule::pullback(&filt.poset, &morphism, &h)?;
    let ph = PHModule {
        module,
        degree,
        classes,
        class_of,
        class_dims: dims,
    };
    Ok((ph, class_poset, h, morphism))
}

/// Persistent homology in the given degree as a module over the grid
/// poset.
pub fn persistent_homology(
    filt: &MultiFiltration,
    field: Field,
    degree: usize,
) -> Result<PHModule, FiltrationError> {
    Ok(homology_classes(filt, field, degree)?.0)
}

/// The natural finite encoding of persistent homology: the poset of
/// distinct realized subcomplexes ordered by inclusion, each carrying its
/// homology.
pub fn natural_encoding(
    filt: &MultiFiltration,
    field: Field,
    degree: usize,
) -> Result<(PHModule, Encoding), FiltrationError> {
    let (ph, _class_poset, h, morphism) = homology_classes(filt, field, degree)?;
    let witnesses: Vec<Matrix> = (0..filt.poset.n_elements())
        .map(|q| Matrix::identity(field, ph.module.dim_at(q)))
        .collect();
    let encoding =
        Encoding::new(filt.poset.clone(), morphism, h, witnesses, ph.module.clone())?;
    Ok((ph, encoding))
}

/// Euler characteristic consistency at every grid point: the alternating
/// sum of face counts equals the alternating sum of homology dimensions.
pub fn euler_characteristic_check(
    filt: &MultiFiltration,
    field: Field,
) -> Result<bool, FiltrationError> {
    let Some(maxdim) = filt.max_dimension() else { return Ok(true) };
    let mut hdims: Vec<Vec<usize>> = Vec::new();
    for d in 0..=maxdim {
        let ph = persistent_homology(filt, field, d)?;
        hdims.push(ph.module.dims().to_vec());
    }
    for q in 0..filt.poset.n_elements() {
        let mask = filt.subcomplex_at(q);
        let mut faces = 0i64;
        for s in mask.iter() {
            let d = filt.simplices[s].len() - 1;
            faces += if d % 2 == 0 { 1 } else { -1 };
        }
        let mut homs = 0i64;
        for (d, dims) in hdims.iter().enumerate() {
            homs += if d % 2 == 0 { dims[q] as i64 } else { -(dims[q] as i64) };
        }
        if faces != homs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three vertices joined into a path, edges entering at (1,0) and
    /// (0,1): the running desk-scale bifiltration.
    pub(crate) fn path_bifiltration() -> MultiFiltration {
        let grid = GridPoset::new(&[0, 0], &[2, 2]);
        MultiFiltration::new(
            grid,
            vec![
                (vec![0], vec![vec![0, 0]]),
                (vec![1], vec![vec![0, 0]]),
                (vec![2], vec![vec![0, 0]]),
                (vec![0, 1], vec![vec![1, 0]]),
                (vec![1, 2], vec![vec![0, 1]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn empty_complex_is_valid() {
        let grid = GridPoset::new(&[0], &[2]);
        let f = MultiFiltration::new(grid, vec![]).unwrap();
        assert!(f.validate().is_empty());
        let ph = persistent_homology(&f, Field::GF2, 0).unwrap();
        assert!(ph.module.is_zero());
    }

    #[test]
    fn one_vertex_gives_constant_module() {
        let grid = GridPoset::new(&[0, 0], &[1, 1]);
        let f = MultiFiltration::new(grid, vec![(vec![0], vec![vec![0, 0]])]).unwrap();
        let ph = persistent_homology(&f, Field::GF2, 0).unwrap();
        assert_eq!(ph.module.dims(), &[1, 1, 1, 1]);
        assert!(ph.module.rank_invariant().values().all(|&r| r == 1));
        let (_, enc) = natural_encoding(&f, Field::GF2, 0).unwrap();
        assert_eq!(enc.h.poset().n_elements(), 1);
    }

    #[test]
    fn edge_before_vertex_is_a_violation() {
        let grid = GridPoset::new(&[0], &[2]);
        let f = MultiFiltration::new(
            grid,
            vec![
                (vec![0], vec![vec![1]]),
                (vec![1], vec![vec![0]]),
                (vec![0, 1], vec![vec![0]]),
            ],
        )
        .unwrap();
        let v = f.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].simplex, vec![0, 1]);
        assert_eq!(v[0].face, vec![0]);
        assert!(matches!(
            persistent_homology(&f, Field::GF2, 0),
            Err(FiltrationError::Invalid(_))
        ));
    }

    #[test]
    fn two_vertices_merged_by_an_edge() {
        // chain [0,2]: two vertices at 0, edge at 1: dims (2,1,1)
        let grid = GridPoset::new(&[0], &[2]);
        let f = MultiFiltration::new(
            grid,
            vec![
                (vec![0], vec![vec![0]]),
                (vec![1], vec![vec![0]]),
                (vec![0, 1], vec![vec![1]]),
            ],
        )
        .unwrap();
        let ph = persistent_homology(&f, Field::GF2, 0).unwrap();
        assert_eq!(ph.module.dims(), &[2, 1, 1]);
        // the merge map sends both classes to the single class
        let e = ph.module.edge(0, 1);
        assert_eq!(e.rank(), 1);
        assert!(!e.column(0).is_zero());
        assert!(!e.column(1).is_zero());
    }

    #[test]
    fn hollow_triangle_cycle_appears_at_join() {
        let grid = GridPoset::new(&[0, 0], &[2, 2]);
        let f = MultiFiltration::new(
            grid.clone(),
            vec![
                (vec![0], vec![vec![0, 0]]),
                (vec![1], vec![vec![0, 0]]),
                (vec![2], vec![vec![0, 0]]),
                (vec![0, 1], vec![vec![1, 0]]),
                (vec![1, 2], vec![vec![0, 1]]),
                (vec![0, 2], vec![vec![1, 1]]),
            ],
        )
        .unwrap();
        let ph = persistent_homology(&f, Field::GF2, 1).unwrap();
        for q in 0..grid.poset.n_elements() {
            let c = grid.coord_of(q);
            let expect = usize::from(c[0] >= 1 && c[1] >= 1);
            assert_eq!(ph.module.dim_at(q), expect, "H_1 at {c:?}");
        }
        assert!(euler_characteristic_check(&f, Field::GF2).unwrap());
    }

    #[test]
    fn path_bifiltration_dims_and_encoding() {
        let f = path_bifiltration();
        let ph = persistent_homology(&f, Field::GF2, 0).unwrap();
        let g = f.grid().clone();
        let expect = |c: &[i64]| -> usize {
            match (c[0] >= 1, c[1] >= 1) {
                (false, false) => 3,
                (true, false) | (false, true) => 2,
                (true, true) => 1,
            }
        };
        for q in 0..g.poset.n_elements() {
            assert_eq!(ph.module.dim_at(q), expect(&g.coord_of(q)));
        }
        let (ph, enc) = natural_encoding(&f, Field::GF2, 0).unwrap();
        enc.verify().unwrap();
        assert_eq!(enc.h.poset().n_elements(), 4);
        let mut class_dims = ph.class_dims.clone();
        class_dims.sort_unstable();
        assert_eq!(class_dims, vec![1, 2, 2, 3]);
        assert!(euler_characteristic_check(&f, Field::GF2).unwrap());
    }

    #[test]
    fn rank_of_merge_edges_counts_components() {
        // for degree 0, every edge map is surjective onto the merged
        // component space
        let f = path_bifiltration();
        let ph = persistent_homology(&f, Field::Prime(3), 0).unwrap();
        let g = f.grid();
        for &(a, b) in g.poset.covers() {
            let e = ph.module.edge(a, b);
            assert_eq!(e.rank(), ph.module.dim_at(b), "edge {a} → {b}");
        }
    }
}
