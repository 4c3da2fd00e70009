//! Constant subdivisions, monodromy detection, finite encodings, and the
//! uptight encoding construction.
//!
//! A constant subdivision carries explicit witness isomorphisms
//! M_I → M_i; carrying them (instead of recomputing) is what makes
//! "pullback isomorphic to the module" decidable. The no-monodromy scan
//! checks that every comparable pair induces the same composite
//! M_I → M_i → M_j → M_J per region pair, and returns the first failing
//! quadruple as a certificate.

use crate::linalg::Matrix;
use crate::module::{ModuleError, ModuleHom, PosetModule};
use crate::poset::{ElemSet, FinitePoset, PosetMorphism, Upset};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum EncodingError {
    #[error("regions do not partition the poset (element {0})")]
    BadPartition(usize),
    #[error("region {region} mixes components of different dimension at elements {i} and {j}")]
    NonIsotypic { region: usize, i: usize, j: usize },
    #[error("witness at element {0} is not an isomorphism onto the component")]
    BadWitness(usize),
    #[error("in-region structure map {0} → {1} is singular")]
    SingularInRegion(usize, usize),
    #[error("monodromy: {0}")]
    Monodromy(MonodromyCertificate),
    #[error("pullback does not match the module at element {0}")]
    PullbackMismatch(usize),
    #[error("witness square at cover ({0},{1}) does not commute")]
    WitnessSquare(usize, usize),
    #[error("encodings have different source posets")]
    SourceMismatch,
    #[error("morphism is not constant on region {region}: elements {i} and {j}")]
    NotTame { region: usize, i: usize, j: usize },
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

/// Two comparable pairs between the same pair of regions whose composites
/// M_I → M_i → M_j → M_J differ.
#[derive(Debug, Clone)]
pub struct MonodromyCertificate {
    pub region_a: usize,
    pub region_b: usize,
    pub pair_a: (usize, usize),
    pub pair_b: (usize, usize),
}

impl std::fmt::Display for MonodromyCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "pairs {:?} and {:?} between regions {} and {} induce different composites",
            self.pair_a, self.pair_b, self.region_a, self.region_b
        )
    }
}

/// A partition of the poset into constant regions, with one vector space
/// per region and witness isomorphisms M_I → M_i per element.
#[derive(Debug, Clone)]
pub struct ConstantSubdivision {
    pub module: PosetModule,
    pub regions: Vec<ElemSet>,
    pub region_dims: Vec<usize>,
    /// witnesses[i]: M_{region(i)} → M_i, a dims(i) × region_dim matrix
    pub witnesses: Vec<Matrix>,
}

impl ConstantSubdivision {
    /// The singleton subdivision with identity witnesses; always verifies.
    pub fn singletons(module: &PosetModule) -> ConstantSubdivision {
        let n = module.poset().n_elements();
        let field = module.field();
        let regions = (0..n).map(|i| ElemSet::from_iter(n, [i])).collect();
        let region_dims = module.dims().to_vec();
        let witnesses = (0..n).map(|i| Matrix::identity(field, module.dim_at(i))).collect();
        ConstantSubdivision { module: module.clone(), regions, region_dims, witnesses }
    }

    pub fn region_of(&self, elem: usize) -> usize {
        self.regions.iter().position(|r| r.contains(elem)).unwrap()
    }

    /// Full verification: partition, witness shapes and invertibility, and
    /// the no-monodromy scan over all comparable pairs.
    pub fn verify(&self) -> Result<(), EncodingError> {
        let poset = self.module.poset().clone();
        let n = poset.n_elements();
        let mut region_of = vec![usize::MAX; n];
        for (k, r) in self.regions.iter().enumerate() {
            for i in r.iter() {
                if region_of[i] != usize::MAX {
                    return Err(EncodingError::BadPartition(i));
                }
                region_of[i] = k;
            }
        }
        if let Some(i) = region_of.iter().position(|&k| k == usize::MAX) {
            return Err(EncodingError::BadPartition(i));
        }
        for i in 0..n {
            let w = &self.witnesses[i];
            if w.rows() != self.module.dim_at(i)
                || w.cols() != self.region_dims[region_of[i]]
                || !w.is_square()
                || w.inverse().is_err()
            {
                return Err(EncodingError::BadWitness(i));
            }
        }
        // no-monodromy scan: composite w_j^{-1} ∘ M(i ≤ j) ∘ w_i constant
        // per ordered region pair (including within one region)
        let mut seen: BTreeMap<(usize, usize), (Matrix, (usize, usize))> = BTreeMap::new();
        for i in 0..n {
            let comps = self.module.composites_from(i);
            for j in 0..n {
                let Some(c) = &comps[j] else { continue };
                let composite =
                    self.witnesses[j].inverse()?.mul(c)?.mul(&self.witnesses[i])?;
                let key = (region_of[i], region_of[j]);
                match seen.get(&key) {
                    None => {
                        seen.insert(key, (composite, (i, j)));
                    }
                    Some((existing, pair)) => {
                        if existing != &composite {
                            return Err(EncodingError::Monodromy(MonodromyCertificate {
                                region_a: key.0,
                                region_b: key.1,
                                pair_a: *pair,
                                pair_b: (i, j),
                            }));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The constant upsets of the subdivision: for each region I, the upset
    /// generated by I and the complement of the downset cogenerated by I.
    /// Duplicates are removed; the family has at most 2·(#regions) members.
    pub fn constant_upsets(&self) -> Vec<Upset> {
        let poset = self.module.poset();
        let mut family: Vec<Upset> = Vec::new();
        for r in &self.regions {
            let gens: Vec<usize> = r.iter().collect();
            let u = poset.upset_closure(&gens).unwrap();
            let d = poset.downset_closure(&gens).unwrap();
            let dc = d.complement(poset);
            for cand in [u, dc] {
                if !family.contains(&cand) {
                    family.push(cand);
                }
            }
        }
        family
    }
}

/// Attempt to upgrade a bare partition to a verified constant subdivision
/// by propagating witnesses along a deterministic spanning forest of each
/// region's comparability graph, then running the full scan.
pub fn construct_witnesses(
    module: &PosetModule,
    partition: &[ElemSet],
) -> Result<ConstantSubdivision, EncodingError> {
    let poset = module.poset().clone();
    let field = module.field();
    let n = poset.n_elements();
    let mut region_of = vec![usize::MAX; n];
    for (k, r) in partition.iter().enumerate() {
        for i in r.iter() {
            if region_of[i] != usize::MAX {
                return Err(EncodingError::BadPartition(i));
            }
            region_of[i] = k;
        }
    }
    if let Some(i) = region_of.iter().position(|&k| k == usize::MAX) {
        return Err(EncodingError::BadPartition(i));
    }
    let mut region_dims = Vec::with_capacity(partition.len());
    for (k, r) in partition.iter().enumerate() {
        let mut dim = None;
        for i in r.iter() {
            match dim {
                None => dim = Some((module.dim_at(i), i)),
                Some((d, first)) => {
                    if module.dim_at(i) != d {
                        return Err(EncodingError::NonIsotypic { region: k, i: first, j: i });
                    }
                }
            }
        }
        region_dims.push(dim.map_or(0, |(d, _)| d));
    }
    let mut witnesses: Vec<Option<Matrix>> = vec![None; n];
    for (k, r) in partition.iter().enumerate() {
        // spanning forest over comparable in-region pairs, lowest index first
        let elems: Vec<usize> = r.iter().collect();
        for &root in &elems {
            if witnesses[root].is_some() {
                continue;
            }
            witnesses[root] = Some(Matrix::identity(field, region_dims[k]));
            let mut queue = vec![root];
            while let Some(i) = queue.pop() {
                for &j in &elems {
                    if witnesses[j].is_some() {
                        continue;
                    }
                    let (lo, hi, forward) = if poset.leq(i, j) {
                        (i, j, true)
                    } else if poset.leq(j, i) {
                        (j, i, false)
                    } else {
                        continue;
                    };
                    let c = module.composite(lo, hi);
                    if !c.is_square() || c.inverse().is_err() {
                        return Err(EncodingError::SingularInRegion(lo, hi));
                    }
                    let w = if forward {
                        c.mul(witnesses[i].as_ref().unwrap())?
                    } else {
                        c.inverse()?.mul(witnesses[i].as_ref().unwrap())?
                    };
                    witnesses[j] = Some(w);
                    queue.push(j);
                }
            }
        }
    }
    let cs = ConstantSubdivision {
        module: module.clone(),
        regions: partition.to_vec(),
        region_dims,
        witnesses: witnesses.into_iter().map(Option::unwrap).collect(),
    };
    cs.verify()?;
    Ok(cs)
}

/// A finite encoding: a monotone π: Q → P, a P-module H, and degreewise
/// witness isomorphisms H_{π(q)} → M_q commuting with all edge maps.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub source_poset: Arc<FinitePoset>,
    pub morphism: PosetMorphism,
    pub h: PosetModule,
    pub witnesses: Vec<Matrix>,
    pub module: PosetModule,
}

impl Encoding {
    pub fn new(
        source_poset: Arc<FinitePoset>,
        morphism: PosetMorphism,
        h: PosetModule,
        witnesses: Vec<Matrix>,
        module: PosetModule,
    ) -> Result<Encoding, EncodingError> {
        let e = Encoding { source_poset, morphism, h, witnesses, module };
        e.verify()?;
        Ok(e)
    }

    /// The identity encoding of a module over its own (finite) poset.
    pub fn identity(module: &PosetModule) -> Encoding {
        let poset = module.poset().clone();
        let witnesses = (0..poset.n_elements())
            .map(|q| Matrix::identity(module.field(), module.dim_at(q)))
            .collect();
        Encoding {
            source_poset: poset.clone(),
            morphism: PosetMorphism::identity(&poset),
            h: module.clone(),
            witnesses,
            module: module.clone(),
        }
    }

    /// Check π shape, witness invertibility, degreewise dimensions, and
    /// commutation of the witness squares on every cover edge of Q.
    pub fn verify(&self) -> Result<(), EncodingError> {
        let n = self.source_poset.n_elements();
        for q in 0..n {
            let w = &self.witnesses[q];
            let hp = self.h.dim_at(self.morphism.apply(q));
            if self.module.dim_at(q) != hp {
                return Err(EncodingError::PullbackMismatch(q));
            }
            if w.rows() != hp || w.cols() != hp || w.inverse().is_err() {
                return Err(EncodingError::BadWitness(q));
            }
        }
        for &(q, q2) in self.source_poset.covers() {
            let hmap = self.h.composite(self.morphism.apply(q), self.morphism.apply(q2));
            let lhs = self.witnesses[q2].mul(&hmap)?;
            let rhs = self.module.edge(q, q2).mul(&self.witnesses[q])?;
            if lhs != rhs {
                return Err(EncodingError::WitnessSquare(q, q2));
            }
        }
        Ok(())
    }

    /// The pullback π*H as a module over Q (isomorphic to the encoded
    /// module via the witnesses).
    pub fn pullback(&self) -> Result<PosetModule, EncodingError> {
        Ok(PosetModule::pullback(&self.source_poset, &self.morphism, &self.h)?)
    }

    /// The fibers of π form a constant subdivision (easy direction of the
    /// encoding theorem).
    pub fn fibers_as_subdivision(&self) -> ConstantSubdivision {
        let n = self.source_poset.n_elements();
        let mut regions = Vec::new();
        let mut region_dims = Vec::new();
        for p in 0..self.h.poset().n_elements() {
            let fiber = ElemSet::from_iter(
                n,
                (0..n).filter(|&q| self.morphism.apply(q) == p),
            );
            if !fiber.is_empty() {
                regions.push(fiber);
                region_dims.push(self.h.dim_at(p));
            }
        }
        ConstantSubdivision {
            module: self.module.clone(),
            regions,
            region_dims,
            witnesses: self.witnesses.clone(),
        }
    }
}

/// The uptight encoding of a verified constant subdivision: quotient by
/// the uptight regions of the constant upsets, with the region vector
/// spaces assembled into a module over the uptight poset.
pub fn uptight_encoding(cs: &ConstantSubdivision) -> Result<Encoding, EncodingError> {
    let module = &cs.module;
    let poset = module.poset().clone();
    let field = module.field();
    let family = cs.constant_upsets();
    let uptight = poset.uptight_poset(&family);
    let r_in = cs.regions.len();
    assert!(
        uptight.regions.len() <= 1usize << (2 * r_in.min(30)),
        "uptight region count exceeds the 2^(2r) bound"
    );
    // one representative input region per uptight region: the one holding
    // the least element
    let rep: Vec<usize> = uptight
        .regions
        .iter()
        .map(|a| cs.region_of(a.min_element().expect("regions are nonempty")))
        .collect();
    // new witness per element a ∈ A: w_a ∘ can(rep(A) → region(a)), where
    // can is the sandwich composite from the constant-subdivision theorem
    let n = poset.n_elements();
    let mut new_wit: Vec<Option<Matrix>> = vec![None; n];
    for (ai, a_set) in uptight.regions.iter().enumerate() {
        let i_rep = rep[ai];
        for a in a_set.iter() {
            let j = cs.region_of(a);
            let can = if j == i_rep {
                Matrix::identity(field, cs.region_dims[i_rep])
            } else {
                // least element of region j inside A, least witness below it
                // from the representative region
                let a_j = cs.regions[j]
                    .intersect(a_set)
                    .min_element()
                    .expect("region j meets A");
                let i = cs.regions[i_rep]
                    .iter()
                    .find(|&i| poset.leq(i, a_j))
                    .expect("A lies in the upset generated by its representative region");
                cs.witnesses[a_j].inverse()?.mul(&module.composite(i, a_j))?.mul(&cs.witnesses[i])?
            };
            new_wit[a] = Some(cs.witnesses[a].mul(&can)?);
        }
    }
    let witnesses: Vec<Matrix> = new_wit.into_iter().map(Option::unwrap).collect();
    // H over the uptight poset: vector space of the representative region,
    // edges induced by any comparable pair (constant by the theorem; the
    // final verification re-checks every square)
    let dims: Vec<usize> = rep.iter().map(|&i| cs.region_dims[i]).collect();
    let mut edges = BTreeMap::new();
    for &(a, b) in uptight.poset.covers() {
        let (x, y) = first_comparable_pair(&poset, &uptight.regions[a], &uptight.regions[b])
            .expect("cover edges of the uptight poset come from raw comparabilities");
        let m = witnesses[y].inverse()?.mul(&module.composite(x, y))?.mul(&witnesses[x])?;
        edges.insert((a, b), m);
    }
    let h = PosetModule::new(Arc::new(uptight.poset.clone()), field, dims, edges)?;
    Encoding::new(poset, uptight.quotient, h, witnesses, module.clone())
}

fn first_comparable_pair(
    poset: &FinitePoset,
    a: &ElemSet,
    b: &ElemSet,
) -> Option<(usize, usize)> {
    for x in a.iter() {
        let up = poset.up_set(x).intersect(b);
        if let Some(y) = up.min_element() {
            return Some((x, y));
        }
    }
    None
}

/// Both modules of a pair of encodings re-encoded over the image of
/// π × π′; used to certify tame morphisms.
#[derive(Debug, Clone)]
pub struct JointEncoding {
    pub poset: Arc<FinitePoset>,
    pub morphism: PosetMorphism,
    pub first: Encoding,
    pub second: Encoding,
}

/// Common refinement of two encodings of modules over the same poset Q:
/// the image of π × π′ in P × P′, with both modules encoded over it.
pub fn common_refinement(e1: &Encoding, e2: &Encoding) -> Result<JointEncoding, EncodingError> {
    if e1.source_poset.fingerprint() != e2.source_poset.fingerprint() {
        return Err(EncodingError::SourceMismatch);
    }
    let q = e1.source_poset.clone();
    let nq = q.n_elements();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for x in 0..nq {
        let pair = (e1.morphism.apply(x), e2.morphism.apply(x));
        if !pairs.contains(&pair) {
            pairs.push(pair);
        }
    }
    pairs.sort_unstable();
    let np = pairs.len();
    let mut rel = Vec::new();
    for (i, &(a1, a2)) in pairs.iter().enumerate() {
        for (j, &(b1, b2)) in pairs.iter().enumerate() {
            if i != j && e1.h.poset().leq(a1, b1) && e2.h.poset().leq(a2, b2) {
                rel.push((i, j));
            }
        }
    }
    let joint = Arc::new(FinitePoset::from_relation(np, &rel).expect("subposet of a product"));
    let map: Vec<usize> = (0..nq)
        .map(|x| {
            let pair = (e1.morphism.apply(x), e2.morphism.apply(x));
            pairs.iter().position(|&p| p == pair).unwrap()
        })
        .collect();
    let morphism = PosetMorphism::new(&q, &joint, map.clone()).expect("pair map is monotone");
    let project = |which: usize, e: &Encoding| -> Result<Encoding, EncodingError> {
        let proj: Vec<usize> =
            pairs.iter().map(|&(a, b)| if which == 0 { a } else { b }).collect();
        let pr = PosetMorphism::new(&joint, e.h.poset(), proj)
            .expect("projection from the image subposet is monotone");
        let h = PosetModule::pullback(&joint, &pr, &e.h)?;
        Encoding::new(q.clone(), morphism.clone(), h, e.witnesses.clone(), e.module.clone())
    };
    let first = project(0, e1)?;
    let second = project(1, e2)?;
    Ok(JointEncoding { poset: joint, morphism, first, second })
}

/// Certify a homomorphism φ: M → N as tame with respect to a joint
/// encoding: per fiber the conjugated matrix H_M → H_N must not depend on
/// the element. Returns the per-region matrices.
pub fn certify_tame_morphism(
    joint: &JointEncoding,
    phi: &ModuleHom,
) -> Result<Vec<Option<Matrix>>, EncodingError> {
    let np = joint.poset.n_elements();
    let nq = joint.first.source_poset.n_elements();
    let mut out: Vec<Option<(Matrix, usize)>> = vec![None; np];
    for x in 0..nq {
        let p = joint.morphism.apply(x);
        let m = joint.second.witnesses[x]
            .inverse()?
            .mul(phi.map_at(x))?
            .mul(&joint.first.witnesses[x])?;
        match &out[p] {
            None => out[p] = Some((m, x)),
            Some((existing, first)) => {
                if existing != &m {
                    return Err(EncodingError::NotTame { region: p, i: *first, j: x });
                }
            }
        }
    }
    Ok(out.into_iter().map(|o| o.map(|(m, _)| m)).collect())
}


#[cfg(test)]
mod tests {
    use super::fixtures::{origin_plus_constant, puuska_module};
    use super::*;
    use crate::linalg::Field;
    use crate::poset::GridPoset;

    #[test]
    fn singletons_always_verify() {
        let m = puuska_module();
        let cs = ConstantSubdivision::singletons(&m);
        cs.verify().unwrap();
    }

    #[test]
    fn one_region_constant_module() {
        let p = Arc::new(FinitePoset::chain(4));
        let m = PosetModule::constant(p.clone(), Field::GF2);
        let cs = construct_witnesses(&m, &[ElemSet::full(4)]).unwrap();
        cs.verify().unwrap();
        let fam = cs.constant_upsets();
        // upset generated by everything is everything; complement of the
        // downset cogenerated by everything is empty
        assert_eq!(fam.len(), 2);
        assert_eq!(fam[0].members(), &ElemSet::full(4));
        assert!(fam[1].members().is_empty());
        let e = uptight_encoding(&cs).unwrap();
        assert_eq!(e.h.poset().n_elements(), 1);
    }

    #[test]
    fn puuska_isotypic_partition_has_monodromy() {
        let m = puuska_module();
        let mins = ElemSet::from_iter(4, [0, 1]);
        let maxs = ElemSet::from_iter(4, [2, 3]);
        let err = construct_witnesses(&m, &[mins, maxs]).unwrap_err();
        match err {
            EncodingError::Monodromy(cert) => {
                assert_ne!(cert.pair_a, cert.pair_b);
            }
            other => panic!("expected monodromy, got {other}"),
        }
    }

    #[test]
    fn puuska_refined_partition_verifies() {
        // one minimum paired with one maximum per region
        let m = puuska_module();
        let r1 = ElemSet::from_iter(4, [0, 2]);
        let r2 = ElemSet::from_iter(4, [1, 3]);
        let cs = construct_witnesses(&m, &[r1, r2]).unwrap();
        cs.verify().unwrap();
        // any refinement of a constant subdivision stays constant
        let refined = construct_witnesses(
            &m,
            &[
                ElemSet::from_iter(4, [0, 2]),
                ElemSet::from_iter(4, [1]),
                ElemSet::from_iter(4, [3]),
            ],
        )
        .unwrap();
        refined.verify().unwrap();
        // and the uptight encoding reproduces the module
        let e = uptight_encoding(&cs).unwrap();
        e.verify().unwrap();
        assert_eq!(e.pullback().unwrap().dims(), m.dims());
    }

    #[test]
    fn four_uptight_regions() {
        let (g, m) = origin_plus_constant();
        let o = g.index_of(&[0, 0]).unwrap();
        let n = m.poset().n_elements();
        let origin = ElemSet::from_iter(n, [o]);
        let rest = origin.complement();
        let cs = construct_witnesses(&m, &[origin, rest]).unwrap();
        let e = uptight_encoding(&cs).unwrap();
        assert_eq!(e.h.poset().n_elements(), 4);
        // the four regions: origin, punctured principal upset, punctured
        // principal downset, remainder
        let fibers = e.fibers_as_subdivision();
        fibers.verify().unwrap();
        let find = |coord: [i64; 2]| {
            let idx = g.index_of(&coord).unwrap();
            fibers.regions.iter().position(|r| r.contains(idx)).unwrap()
        };
        let r_origin = find([0, 0]);
        let r_up = find([1, 0]);
        let r_down = find([-1, 0]);
        let r_rest = find([1, -1]);
        assert_eq!(fibers.regions[r_origin].len(), 1);
        assert_eq!(fibers.regions[r_up].len(), 8);
        assert_eq!(fibers.regions[r_down].len(), 8);
        assert_eq!(fibers.regions[r_rest].len(), 8);
        assert_eq!(
            [r_origin, r_up, r_down, r_rest].iter().collect::<std::collections::BTreeSet<_>>().len(),
            4
        );
        // the remainder region has two incomparable quadrant components
        let comps = m.poset().connected_components(&fibers.regions[r_rest]);
        assert_eq!(comps.len(), 2);
    }

    #[test]
    fn fibers_of_encoding_verify() {
        let m = puuska_module();
        let e = Encoding::identity(&m);
        e.verify().unwrap();
        let cs = e.fibers_as_subdivision();
        cs.verify().unwrap();
        assert_eq!(cs.regions.len(), 4);
    }

    #[test]
    fn common_refinement_identity() {
        let p = Arc::new(FinitePoset::chain(3));
        let m = PosetModule::constant(p.clone(), Field::GF2);
        // encode k[Q] by the one-point poset
        let pt = Arc::new(FinitePoset::antichain(1));
        let h = PosetModule::constant(pt.clone(), Field::GF2);
        let pi = PosetMorphism::new(&p, &pt, vec![0; 3]).unwrap();
        let wit = vec![Matrix::identity(Field::GF2, 1); 3];
        let e = Encoding::new(p.clone(), pi, h, wit, m.clone()).unwrap();
        let joint = common_refinement(&e, &e).unwrap();
        assert_eq!(joint.poset.n_elements(), 1);
        // the identity on k[Q] is tame with respect to the joint encoding
        let id = ModuleHom::identity(&m);
        let mats = certify_tame_morphism(&joint, &id).unwrap();
        assert_eq!(mats.len(), 1);
    }

    #[test]
    fn common_refinement_chain_vs_antichain() {
        // two encodings of the same module over a 2x2 grid, one collapsing
        // rows, one collapsing columns; the joint poset is the image of the
        // pair map
        let g = GridPoset::new(&[0, 0], &[1, 1]);
        let q = Arc::new(g.poset.clone());
        let m = PosetModule::constant(q.clone(), Field::GF2);
        let two = Arc::new(FinitePoset::chain(2));
        let h = PosetModule::constant(two.clone(), Field::GF2);
        let by_row: Vec<usize> = (0..4).map(|i| (g.coord_of(i)[0] == 1) as usize).collect();
        let by_col: Vec<usize> = (0..4).map(|i| (g.coord_of(i)[1] == 1) as usize).collect();
        let e1 = Encoding::new(
            q.clone(),
            PosetMorphism::new(&q, &two, by_row).unwrap(),
            h.clone(),
            vec![Matrix::identity(Field::GF2, 1); 4],
            m.clone(),
        )
        .unwrap();
        let e2 = Encoding::new(
            q.clone(),
            PosetMorphism::new(&q, &two, by_col).unwrap(),
            h,
            vec![Matrix::identity(Field::GF2, 1); 4],
            m,
        )
        .unwrap();
        let joint = common_refinement(&e1, &e2).unwrap();
        assert_eq!(joint.poset.n_elements(), 4);
        joint.first.verify().unwrap();
        joint.second.verify().unwrap();
    }
}
