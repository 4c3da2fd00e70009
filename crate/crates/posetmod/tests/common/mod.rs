//! Shared generators and oracles for the integration suites.
//!
//! All randomness is seeded; every generated module is commutative by
//! construction (indicator sums or chain pullbacks, conjugated by random
//! basis changes).

use posetmod::encoding::ConstantSubdivision;
use posetmod::indicator::Region;
use posetmod::linalg::{Field, Matrix};
use posetmod::module::PosetModule;
use posetmod::poset::{Downset, ElemSet, FinitePoset, PosetMorphism, Upset};
use rand::Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

pub fn random_poset<R: Rng>(rng: &mut R, max_n: usize) -> Arc<FinitePoset> {
    let n = rng.gen_range(1..=max_n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.35) {
                edges.push((i, j));
            }
        }
    }
    Arc::new(FinitePoset::new(n, &edges).unwrap())
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

pub fn random_upset<R: Rng>(rng: &mut R, poset: &FinitePoset) -> Upset {
    let gens = random_subset(rng, poset.n_elements(), 0.35);
    poset.upset_closure(&gens).unwrap()
}

pub fn random_downset<R: Rng>(rng: &mut R, poset: &FinitePoset) -> Downset {
    let gens = random_subset(rng, poset.n_elements(), 0.35);
    poset.downset_closure(&gens).unwrap()
}

pub fn random_scalar<R: Rng>(rng: &mut R, field: Field) -> i64 {
    match field {
        Field::Prime(p) => rng.gen_range(0..p as i64),
        Field::Rational => rng.gen_range(-2..=2),
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, field: Field, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zero(field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, field.from_i64(random_scalar(rng, field)));
        }
    }
    m
}

pub fn random_invertible<R: Rng>(rng: &mut R, field: Field, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, field, n, n);
        if m.inverse().is_ok() {
            return m;
        }
    }
}

/// Longest-path height, a monotone map onto a chain.
pub fn height_map(poset: &FinitePoset) -> Vec<usize> {
    let order = poset.topological_order();
    let mut h = vec![0usize; poset.n_elements()];
    for &q in &order {
        for r in poset.covers_below(q) {
            h[q] = h[q].max(h[r] + 1);
        }
    }
    h
}

/// Arbitrary dims and edge maps over a chain are always a valid module.
pub fn random_chain_module<R: Rng>(
    rng: &mut R,
    field: Field,
    len: usize,
    max_dim: usize,
) -> PosetModule {
    let poset = Arc::new(FinitePoset::chain(len));
    let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_dim)).collect();
    let mut edges = BTreeMap::new();
    for &(a, b) in poset.covers() {
        edges.insert((a, b), random_matrix(rng, field, dims[b], dims[a]));
    }
    PosetModule::new(poset, field, dims, edges).unwrap()
}

/// A random commutative module: a sum of indicator modules or a pullback
/// of a chain module, conjugated by random basis changes.
pub fn random_module<R: Rng>(rng: &mut R, poset: &Arc<FinitePoset>, field: Field) -> PosetModule {
    let base = if rng.gen_bool(0.5) {
        let k = rng.gen_range(1..=3);
        let mut acc = PosetModule::zero(poset.clone(), field);
        for _ in 0..k {
            let region = if rng.gen_bool(0.5) {
                Region::Up(random_upset(rng, poset))
            } else {
                Region::Down(random_downset(rng, poset))
            };
            acc = acc.direct_sum(&region.realize(poset, field)).unwrap();
        }
        acc
    } else {
        let h = height_map(poset);
        let len = h.iter().max().copied().unwrap_or(0) + 1;
        let cm = random_chain_module(rng, field, len, 3);
        let f = PosetMorphism::new(poset, cm.poset(), h).unwrap();
        PosetModule::pullback(poset, &f, &cm).unwrap()
    };
    let changes: Vec<Matrix> = base
        .dims()
        .iter()
        .map(|&d| random_invertible(rng, field, d))
        .collect();
    base.conjugate(&changes).unwrap().0
}

/// A verified constant subdivision: pull a random chain module back along
/// the height map, take the fibers (optionally refined), and conjugate.
pub fn random_subdivision<R: Rng>(
    rng: &mut R,
    poset: &Arc<FinitePoset>,
    field: Field,
) -> ConstantSubdivision {
    let n = poset.n_elements();
    let h = height_map(poset);
    let len = h.iter().max().copied().unwrap_or(0) + 1;
    let cm = random_chain_module(rng, field, len, 3);
    let f = PosetMorphism::new(poset, cm.poset(), h.clone()).unwrap();
    let base = PosetModule::pullback(poset, &f, &cm).unwrap();
    let changes: Vec<Matrix> =
        base.dims().iter().map(|&d| random_invertible(rng, field, d)).collect();
    let (module, _) = base.conjugate(&changes).unwrap();
    // fibers of the height map, each possibly split in two
    let mut regions: Vec<ElemSet> = Vec::new();
    let mut region_dims: Vec<usize> = Vec::new();
    for level in 0..len {
        let fiber: Vec<usize> = (0..n).filter(|&q| h[q] == level).collect();
        if fiber.is_empty() {
            continue;
        }
        if fiber.len() > 1 && rng.gen_bool(0.4) {
            let cut = rng.gen_range(1..fiber.len());
            regions.push(ElemSet::from_iter(n, fiber[..cut].iter().copied()));
            region_dims.push(cm.dim_at(level));
            regions.push(ElemSet::from_iter(n, fiber[cut..].iter().copied()));
            region_dims.push(cm.dim_at(level));
        } else {
            regions.push(ElemSet::from_iter(n, fiber.iter().copied()));
            region_dims.push(cm.dim_at(level));
        }
    }
    let witnesses: Vec<Matrix> = (0..n).map(|q| changes[q].clone()).collect();
    let cs = ConstantSubdivision { module, regions, region_dims, witnesses };
    cs.verify().expect("generated subdivision verifies");
    cs
}

/// Number of bars [a, b] of a chain module, by inclusion–exclusion on the
/// rank invariant. Independent of the resolution pipeline.
pub fn barcode_oracle(m: &PosetModule) -> BTreeMap<(usize, usize), usize> {
    let n = m.poset().n_elements();
    let ri = m.rank_invariant();
    let r = |a: i64, b: i64| -> i64 {
        if a < 0 || b >= n as i64 || a > b {
            0
        } else {
            ri[&(a as usize, b as usize)] as i64
        }
    };
    let mut bars = BTreeMap::new();
    for a in 0..n as i64 {
        for b in a..n as i64 {
            let count = r(a, b) - r(a - 1, b) - r(a, b + 1) + r(a - 1, b + 1);
            assert!(count >= 0, "persistence measure must be nonnegative");
            if count > 0 {
                bars.insert((a as usize, b as usize), count as usize);
            }
        }
    }
    bars
}

/// Normalize the scalar block of a one-parameter fringe presentation to a
/// permutation using only label-respecting row/column operations (add an
/// earlier-birth row into a later one, add a later-death column into an
/// earlier one). Returns the matched (birth, death) pairs, or None if the
/// block cannot be reduced to a permutation.
pub fn normalize_to_permutation(
    field: Field,
    entries: &Matrix,
    births: &[usize],
    deaths: &[usize],
) -> Option<Vec<(usize, usize)>> {
    let r = entries.rows();
    let c = entries.cols();
    if r != c {
        return None;
    }
    let mut work = entries.clone();
    let mut col_used = vec![false; c];
    let mut pairs = Vec::new();
    for i in 0..r {
        let j = (0..c).rev().find(|&j| !col_used[j] && !work.get(i, j).is_zero())?;
        col_used[j] = true;
        pairs.push((births[i], deaths[j]));
        let pivot_inv = field.inv(work.get(i, j));
        // clear the pivot column below (row ops, earlier birth into later)
        for i2 in (i + 1)..r {
            let v = work.get(i2, j).clone();
            if v.is_zero() {
                continue;
            }
            let lam = field.neg(&field.mul(&v, &pivot_inv));
            for jj in 0..c {
                let val = field.add(work.get(i2, jj), &field.mul(&lam, work.get(i, jj)));
                work.set(i2, jj, val);
            }
        }
        // clear the pivot row to the left (col ops, later death into earlier)
        for j2 in 0..j {
            if col_used[j2] {
                continue;
            }
            let v = work.get(i, j2).clone();
            if v.is_zero() {
                continue;
            }
            let lam = field.neg(&field.mul(&v, &pivot_inv));
            for ii in 0..r {
                let val = field.add(work.get(ii, j2), &field.mul(&lam, work.get(ii, j)));
                work.set(ii, j2, val);
            }
        }
    }
    Some(pairs)
}
