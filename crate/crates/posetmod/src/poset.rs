//! Finite posets, morphisms, upsets/downsets, zigzag components, grid
//! posets, and the uptight-region machinery.
//!
//! Elements are dense indices `0..n`; user-facing labels live in the
//! interchange layer, not here. Reachability is cached as one bitset row
//! per element, so `leq` is O(1) and upset/downset algebra is word-wise.

use std::fmt;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("element index {0} out of range (poset has {1} elements)")]
    IndexOutOfRange(usize, usize),
    #[error("cover relation contains a cycle: {0:?}")]
    Cycle(Vec<usize>),
    #[error("map is not monotone: {0} < {1} in source but images are not ordered")]
    NotMonotone(usize, usize),
    #[error("regions belong to different posets")]
    MixedPoset,
    #[error("map is not an order embedding: elements {0}, {1}")]
    NotEmbedding(usize, usize),
}

/// Small bitset over element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet {
    n: usize,
    words: Vec<u64>,
}

impl ElemSet {
    pub fn empty(n: usize) -> ElemSet {
        ElemSet { n, words: vec![0; n.div_ceil(64)] }
    }

    pub fn full(n: usize) -> ElemSet {
        let mut s = ElemSet::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, it: I) -> ElemSet {
        let mut s = ElemSet::empty(n);
        for i in it {
            s.insert(i);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.n);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect(&self, other: &ElemSet) -> ElemSet {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        ElemSet { n: self.n, words }
    }

    pub fn complement(&self) -> ElemSet {
        let mut s = ElemSet::full(self.n);
        for (a, b) in s.words.iter_mut().zip(&self.words) {
            *a &= !b;
        }
        s
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    pub fn min_element(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl fmt::Display for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A finite poset given by its cover relation, with the reachability
/// closure cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    n: usize,
    covers: Vec<(usize, usize)>,
    /// up[i] = principal upset of i (contains i)
    up: Vec<ElemSet>,
    /// down[i] = principal downset of i (contains i)
    down: Vec<ElemSet>,
    fingerprint: u64,
}

impl FinitePoset {
    /// Build and validate a poset from cover pairs `(lower, upper)`.
    /// Rejects cyclic input with the offending cycle as certificate.
    pub fn new(n: usize, covers: &[(usize, usize)]) -> Result<FinitePoset, PosetError> {
        for &(a, b) in covers {
            if a >= n {
                return Err(PosetError::IndexOutOfRange(a, n));
            }
            if b >= n {
                return Err(PosetError::IndexOutOfRange(b, n));
            }
        }
        Self::from_relation(n, covers)
    }

    /// Build from an arbitrary acyclic relation (closure is taken; covers
    /// are recomputed irredundantly).
    pub fn from_relation(n: usize, pairs: &[(usize, usize)]) -> Result<FinitePoset, PosetError> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in pairs {
            if a == b {
                return Err(PosetError::Cycle(vec![a]));
            }
            adj[a].push(b);
        }
        for row in adj.iter_mut() {
            row.sort_unstable();
            row.dedup();
        }
        let order = topo_order(n, &adj)?;
        // reachability closure, processed in reverse topological order
        let mut up: Vec<ElemSet> = vec![ElemSet::empty(n); n];
        for &v in order.iter().rev() {
            let mut s = ElemSet::empty(n);
            s.insert(v);
            for &w in &adj[v] {
                let t = up[w].clone();
                s.union_with(&t);
            }
            up[v] = s;
        }
        let mut down: Vec<ElemSet> = vec![ElemSet::empty(n); n];
        for i in 0..n {
            for j in up[i].iter() {
                down[j].insert(i);
            }
        }
        // transitive reduction: (a,b) is a cover iff no c strictly between
        let mut covers = Vec::new();
        for a in 0..n {
            for b in up[a].iter() {
                if b == a {
                    continue;
                }
                let between = up[a].intersect(&down[b]);
                if between.len() == 2 {
                    covers.push((a, b));
                }
            }
        }
        covers.sort_unstable();
        let fingerprint = fingerprint(n, &covers);
        Ok(FinitePoset { n, covers, up, down, fingerprint })
    }

    /// Antichain on n elements.
    pub fn antichain(n: usize) -> FinitePoset {
        FinitePoset::new(n, &[]).unwrap()
    }

    /// Chain 0 < 1 < ... < n-1.
    pub fn chain(n: usize) -> FinitePoset {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FinitePoset::new(n, &covers).unwrap()
    }

    pub fn n_elements(&self) -> usize {
        self.n
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// Principal upset of `i`, including `i`.
    pub fn up_set(&self, i: usize) -> &ElemSet {
        &self.up[i]
    }

    /// Principal downset of `i`, including `i`.
    pub fn down_set(&self, i: usize) -> &ElemSet {
        &self.down[i]
    }

    /// The interval [a, b].
    pub fn interval(&self, a: usize, b: usize) -> ElemSet {
        self.up[a].intersect(&self.down[b])
    }

    /// Covers of the form (i, _).
    pub fn covers_above(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |&&(a, _)| a == i).map(|&(_, b)| b)
    }

    pub fn covers_below(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |&&(_, b)| b == i).map(|&(a, _)| a)
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.down[i].len() == 1).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.up[i].len() == 1).collect()
    }

    /// A linear extension (ascending).
    pub fn topological_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.n).collect();
        idx.sort_by_key(|&i| (self.down[i].len(), i));
        idx
    }

    /// Opposite poset (all relations reversed).
    pub fn opposite(&self) -> FinitePoset {
        let covers: Vec<_> = self.covers.iter().map(|&(a, b)| (b, a)).collect();
        FinitePoset::new(self.n, &covers).unwrap()
    }

    /// Zigzag-connected components of a subset: two elements share a class
    /// iff they are joined by a path of comparabilities inside `s`.
    /// Components are returned ordered by least element.
    pub fn connected_components(&self, s: &ElemSet) -> Vec<ElemSet> {
        let mut uf = UnionFind::new(self.n);
        let elems: Vec<usize> = s.iter().collect();
        for (k, &a) in elems.iter().enumerate() {
            for &b in &elems[k + 1..] {
                if self.leq(a, b) || self.leq(b, a) {
                    uf.union(a, b);
                }
            }
        }
        let mut comps: Vec<(usize, ElemSet)> = Vec::new();
        for &a in &elems {
            let root = uf.find(a);
            match comps.iter_mut().find(|(r, _)| *r == root) {
                Some((_, set)) => set.insert(a),
                None => {
                    let mut set = ElemSet::empty(self.n);
                    set.insert(a);
                    comps.push((root, set));
                }
            }
        }
        let mut out: Vec<ElemSet> = comps.into_iter().map(|(_, s)| s).collect();
        out.sort_by_key(|s| s.min_element());
        out
    }

    /// Smallest upset containing `gens`.
    pub fn upset_closure(&self, gens: &[usize]) -> Result<Upset, PosetError> {
        let mut members = ElemSet::empty(self.n);
        for &g in gens {
            if g >= self.n {
                return Err(PosetError::IndexOutOfRange(g, self.n));
            }
            members.union_with(&self.up[g]);
        }
        Ok(self.upset_from_members(members))
    }

    pub fn upset_from_members(&self, members: ElemSet) -> Upset {
        debug_assert!(self.is_upward_closed(&members));
        let gens = self.minimal_of(&members);
        Upset { poset_fp: self.fingerprint, members, gens }
    }

    /// Smallest downset containing `cogens`.
    pub fn downset_closure(&self, cogens: &[usize]) -> Result<Downset, PosetError> {
        let mut members = ElemSet::empty(self.n);
        for &g in cogens {
            if g >= self.n {
                return Err(PosetError::IndexOutOfRange(g, self.n));
            }
            members.union_with(&self.down[g]);
        }
        Ok(self.downset_from_members(members))
    }

    pub fn downset_from_members(&self, members: ElemSet) -> Downset {
        debug_assert!(self.is_downward_closed(&members));
        let cogens = self.maximal_of(&members);
        Downset { poset_fp: self.fingerprint, members, cogens }
    }

    pub fn is_upward_closed(&self, s: &ElemSet) -> bool {
        s.iter().all(|i| self.up[i].is_subset(s))
    }

    pub fn is_downward_closed(&self, s: &ElemSet) -> bool {
        s.iter().all(|i| self.down[i].is_subset(s))
    }

    /// Minimal elements of a subset.
    pub fn minimal_of(&self, s: &ElemSet) -> Vec<usize> {
        s.iter()
            .filter(|&i| !s.iter().any(|j| j != i && self.leq(j, i)))
            .collect()
    }

    /// Maximal elements of a subset.
    pub fn maximal_of(&self, s: &ElemSet) -> Vec<usize> {
        s.iter()
            .filter(|&i| !s.iter().any(|j| j != i && self.leq(i, j)))
            .collect()
    }

    /// Uptight regions of a family of upsets: a and b share a region iff
    /// they lie in exactly the same members of the family. Regions are
    /// ordered by least element.
    pub fn uptight_regions(&self, family: &[Upset]) -> Vec<ElemSet> {
        let mut sigs: Vec<(Vec<bool>, ElemSet)> = Vec::new();
        for a in 0..self.n {
            let sig: Vec<bool> = family.iter().map(|u| u.members.contains(a)).collect();
            match sigs.iter_mut().find(|(s, _)| *s == sig) {
                Some((_, set)) => set.insert(a),
                None => {
                    let mut set = ElemSet::empty(self.n);
                    set.insert(a);
                    sigs.push((sig, set));
                }
            }
        }
        let mut out: Vec<ElemSet> = sigs.into_iter().map(|(_, s)| s).collect();
        out.sort_by_key(|s| s.min_element());
        out
    }

    /// The uptight poset of an upset family: quotient by uptight regions,
    /// raw relation A ⪯ B iff some a ∈ A, b ∈ B with a ≤ b, then transitive
    /// closure. The raw relation is reflexive and acyclic, but need not be
    /// transitive; `raw_transitive` records whether it already was.
    pub fn uptight_poset(&self, family: &[Upset]) -> UptightPoset {
        let regions = self.uptight_regions(family);
        let r = regions.len();
        let mut region_of = vec![0usize; self.n];
        for (k, reg) in regions.iter().enumerate() {
            for a in reg.iter() {
                region_of[a] = k;
            }
        }
        let mut raw = vec![vec![false; r]; r];
        for a in 0..self.n {
            for b in self.up[a].iter() {
                raw[region_of[a]][region_of[b]] = true;
            }
        }
        let mut raw_edges = Vec::new();
        for (i, row) in raw.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v && i != j {
                    raw_edges.push((i, j));
                }
            }
        }
        let poset = FinitePoset::from_relation(r, &raw_edges)
            .expect("uptight raw relation is acyclic (Proposition on poset quotients)");
        let mut raw_transitive = true;
        for i in 0..r {
            for j in poset.up[i].iter() {
                if !raw[i][j] {
                    raw_transitive = false;
                }
            }
        }
        let quotient = PosetMorphism::new(self, &poset, region_of.clone())
            .expect("uptight quotient map is monotone by construction");
        UptightPoset { poset, quotient, regions, raw_edges, raw_transitive }
    }

    /// Order embedding into the grid poset {0,1}^n sending each element to
    /// the characteristic vector of its principal downset.
    pub fn embed_into_grid(&self) -> (GridPoset, PosetMorphism) {
        let grid = GridPoset::new(&vec![0; self.n], &vec![1; self.n]);
        let map: Vec<usize> = (0..self.n)
            .map(|p| {
                let coord: Vec<i64> =
                    (0..self.n).map(|j| i64::from(self.down[p].contains(j))).collect();
                grid.index_of(&coord).unwrap()
            })
            .collect();
        let morphism = PosetMorphism::new(self, &grid.poset, map)
            .expect("characteristic-vector embedding is monotone");
        (grid, morphism)
    }
}

fn topo_order(n: usize, adj: &[Vec<usize>]) -> Result<Vec<usize>, PosetError> {
    let mut state = vec![0u8; n]; // 0 unseen, 1 on stack, 2 done
    let mut order = Vec::with_capacity(n);
    // iterative DFS with explicit path for cycle certificates
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        state[start] = 1;
        let mut path = vec![start];
        while let Some(&mut (v, ref mut k)) = stack.last_mut() {
            if *k < adj[v].len() {
                let w = adj[v][*k];
                *k += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                        path.push(w);
                    }
                    1 => {
                        let pos = path.iter().position(|&x| x == w).unwrap();
                        return Err(PosetError::Cycle(path[pos..].to_vec()));
                    }
                    _ => {}
                }
            } else {
                state[v] = 2;
                order.push(v);
                stack.pop();
                path.pop();
            }
        }
    }
    order.reverse();
    Ok(order)
}

fn fingerprint(n: usize, covers: &[(usize, usize)]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut feed = |x: u64| {
        h ^= x;
        h = h.wrapping_mul(0x100000001b3);
    };
    feed(n as u64);
    for &(a, b) in covers {
        feed(a as u64);
        feed(b as u64);
    }
    h
}

/// Monotone map between two posets, stored as an index vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetMorphism {
    source_fp: u64,
    target_fp: u64,
    map: Vec<usize>,
}

impl PosetMorphism {
    pub fn new(
        source: &FinitePoset,
        target: &FinitePoset,
        map: Vec<usize>,
    ) -> Result<PosetMorphism, PosetError> {
        if map.len() != source.n {
            return Err(PosetError::IndexOutOfRange(map.len(), source.n));
        }
        for &v in &map {
            if v >= target.n {
                return Err(PosetError::IndexOutOfRange(v, target.n));
            }
        }
        for &(a, b) in &source.covers {
            if !target.leq(map[a], map[b]) {
                return Err(PosetError::NotMonotone(a, b));
            }
        }
        Ok(PosetMorphism { source_fp: source.fingerprint, target_fp: target.fingerprint, map })
    }

    pub fn identity(poset: &FinitePoset) -> PosetMorphism {
        PosetMorphism {
            source_fp: poset.fingerprint,
            target_fp: poset.fingerprint,
            map: (0..poset.n).collect(),
        }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn source_fingerprint(&self) -> u64 {
        self.source_fp
    }

    pub fn target_fingerprint(&self) -> u64 {
        self.target_fp
    }

    /// Checks the injective order-embedding property exhaustively.
    pub fn is_order_embedding(&self, source: &FinitePoset, target: &FinitePoset) -> bool {
        for a in 0..source.n {
            for b in 0..source.n {
                if source.leq(a, b) != target.leq(self.map[a], self.map[b]) {
                    return false;
                }
            }
        }
        true
    }

    /// Preimage of a target subset.
    pub fn preimage(&self, s: &ElemSet) -> ElemSet {
        ElemSet::from_iter(self.map.len(), (0..self.map.len()).filter(|&q| s.contains(self.map[q])))
    }
}

/// Upward-closed subset with cached minimal generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Upset {
    poset_fp: u64,
    members: ElemSet,
    gens: Vec<usize>,
}

impl Upset {
    pub fn members(&self) -> &ElemSet {
        &self.members
    }
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }
    pub fn poset_fingerprint(&self) -> u64 {
        self.poset_fp
    }
    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(i)
    }
    /// Complement, which is a downset.
    pub fn complement(&self, poset: &FinitePoset) -> Downset {
        poset.downset_from_members(self.members.complement())
    }
}

/// Downward-closed subset with cached maximal cogenerators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Downset {
    poset_fp: u64,
    members: ElemSet,
    cogens: Vec<usize>,
}

impl Downset {
    pub fn members(&self) -> &ElemSet {
        &self.members
    }
    pub fn cogenerators(&self) -> &[usize] {
        &self.cogens
    }
    pub fn poset_fingerprint(&self) -> u64 {
        self.poset_fp
    }
    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(i)
    }
    pub fn complement(&self, poset: &FinitePoset) -> Upset {
        poset.upset_from_members(self.members.complement())
    }
}

/// Output of the uptight construction.
#[derive(Debug, Clone)]
pub struct UptightPoset {
    pub poset: FinitePoset,
    pub quotient: PosetMorphism,
    pub regions: Vec<ElemSet>,
    pub raw_edges: Vec<(usize, usize)>,
    pub raw_transitive: bool,
}

/// Product-of-chains poset on the lattice points of a box in Z^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPoset {
    lo: Vec<i64>,
    hi: Vec<i64>,
    pub poset: FinitePoset,
}

impl GridPoset {
    pub fn new(lo: &[i64], hi: &[i64]) -> GridPoset {
        assert_eq!(lo.len(), hi.len());
        assert!(lo.iter().zip(hi).all(|(a, b)| a <= b), "empty box");
        let dims: Vec<usize> = lo.iter().zip(hi).map(|(a, b)| (b - a + 1) as usize).collect();
        let n: usize = dims.iter().product();
        let mut covers = Vec::new();
        for idx in 0..n {
            let c = Self::unrank(&dims, idx);
            for i in 0..dims.len() {
                if c[i] + 1 < dims[i] {
                    let mut d = c.clone();
                    d[i] += 1;
                    covers.push((idx, Self::rank(&dims, &d)));
                }
            }
        }
        let poset = FinitePoset::new(n, &covers).unwrap();
        GridPoset { lo: lo.to_vec(), hi: hi.to_vec(), poset }
    }

    fn rank(dims: &[usize], c: &[usize]) -> usize {
        let mut idx = 0;
        for (i, &v) in c.iter().enumerate() {
            idx = idx * dims[i] + v;
        }
        idx
    }

    fn unrank(dims: &[usize], mut idx: usize) -> Vec<usize> {
        let mut c = vec![0; dims.len()];
        for i in (0..dims.len()).rev() {
            c[i] = idx % dims[i];
            idx /= dims[i];
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn contains(&self, coord: &[i64]) -> bool {
        coord.len() == self.lo.len()
            && coord.iter().zip(self.lo.iter().zip(&self.hi)).all(|(c, (a, b))| a <= c && c <= b)
    }

    pub fn index_of(&self, coord: &[i64]) -> Option<usize> {
        if !self.contains(coord) {
            return None;
        }
        let dims: Vec<usize> =
            self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a + 1) as usize).collect();
        let c: Vec<usize> =
            coord.iter().zip(&self.lo).map(|(v, a)| (v - a) as usize).collect();
        Some(Self::rank(&dims, &c))
    }

    pub fn coord_of(&self, idx: usize) -> Vec<i64> {
        let dims: Vec<usize> =
            self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a + 1) as usize).collect();
        Self::unrank(&dims, idx).iter().zip(&self.lo).map(|(c, a)| *c as i64 + a).collect()
    }

    /// Clamp an arbitrary point of Z^n onto the box.
    pub fn clamp(&self, coord: &[i64]) -> Vec<i64> {
        coord
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(c, (a, b))| (*c).max(*a).min(*b))
            .collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // lower root wins, for deterministic component representatives
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
