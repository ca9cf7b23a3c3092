//! Oriented graphs and tournaments on at most 64 vertices, the inversion
//! operation, dijoin and k-join constructors, structural reductions, and
//! enumeration of small tournaments.
//!
//! Adjacency is one out-neighbourhood bit word per vertex, so inverting a
//! vertex subset is a handful of masked XORs.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pairs::{pair_at, pair_count};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const MAX_VERTICES: usize = 64;

/// Subset of the vertex range `[0, n)`, stored as a bit word.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub fn empty() -> Self {
        VertexSet(0)
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        if n == 64 {
            VertexSet(!0)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && (self.0 >> v) & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < 64);
        self.0 |= 1 << v;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Vertices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    /// Whether every member lies in `[0, n)`.
    pub fn within(self, n: usize) -> bool {
        self.0 & !VertexSet::full(n).0 == 0
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = VertexSet::empty();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let vs: Vec<usize> = Vec::deserialize(deserializer)?;
        if vs.iter().any(|&v| v >= 64) {
            return Err(D::Error::custom("vertex out of range"));
        }
        Ok(vs.into_iter().collect())
    }
}

/// Ordered family of vertex sets. Applying it to a digraph is independent
/// of the order of the sets.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SetFamily {
    pub sets: Vec<VertexSet>,
}

impl SetFamily {
    pub fn new(sets: Vec<VertexSet>) -> Self {
        SetFamily { sets }
    }

    pub fn empty() -> Self {
        SetFamily { sets: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &VertexSet> {
        self.sets.iter()
    }

    /// Sets as a sorted multiset, for order-insensitive comparison.
    pub fn sorted(&self) -> Vec<VertexSet> {
        let mut s = self.sets.clone();
        s.sort();
        s
    }
}

/// Bijection of `[0, n)`; `seq[k]` is the vertex at position `k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VertexOrder {
    seq: Vec<usize>,
    pos: Vec<usize>,
}

impl VertexOrder {
    pub fn identity(n: usize) -> Self {
        VertexOrder {
            seq: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    pub fn from_seq(seq: Vec<usize>) -> Result<Self> {
        let n = seq.len();
        let mut pos = vec![usize::MAX; n];
        for (k, &v) in seq.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::Internal("sequence is not a permutation".into()));
            }
            pos[v] = k;
        }
        Ok(VertexOrder { seq, pos })
    }

    /// Number of orderings of `n` vertices (`n!`).
    pub fn count(n: usize) -> u64 {
        (1..=n as u64).product()
    }

    /// The `idx`-th ordering in lexicographic order of the vertex sequence.
    pub fn from_index(n: usize, idx: u64) -> Self {
        debug_assert!(idx < Self::count(n));
        let mut avail: Vec<usize> = (0..n).collect();
        let mut idx = idx;
        let mut fact = Self::count(n);
        let mut seq = Vec::with_capacity(n);
        for k in 0..n {
            fact /= (n - k) as u64;
            let d = (idx / fact) as usize;
            idx %= fact;
            seq.push(avail.remove(d));
        }
        VertexOrder::from_seq(seq).expect("decoded a permutation")
    }

    pub fn n(&self) -> usize {
        self.seq.len()
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    /// All orderings, lexicographic by vertex sequence.
    pub fn all(n: usize) -> impl Iterator<Item = VertexOrder> {
        (0..Self::count(n)).map(move |i| Self::from_index(n, i))
    }
}

impl Serialize for VertexOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.seq.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VertexOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let seq: Vec<usize> = Vec::deserialize(deserializer)?;
        VertexOrder::from_seq(seq).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Simple oriented graph: no loops, no two-cycles, at most 64 vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<u64>,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Digraph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices");
        Digraph { n, out: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut d = Self::empty(n);
        for &(u, v) in edges {
            d.try_add_edge(u, v)?;
        }
        Ok(d)
    }

    fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n {
            return Err(Error::VertexOutOfRange(u));
        }
        if v >= self.n {
            return Err(Error::VertexOutOfRange(v));
        }
        if u == v {
            return Err(Error::Internal(format!("loop at vertex {u}")));
        }
        if self.has_edge(u, v) || self.has_edge(v, u) {
            return Err(Error::Internal(format!(
                "conflicting edge between {u} and {v}"
            )));
        }
        self.out[u] |= 1 << v;
        Ok(())
    }

    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && !self.has_edge(v, u));
        self.out[u] |= 1 << v;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.out[u] >> v) & 1 == 1
    }

    /// Whether some orientation of the pair `{u, v}` is present.
    pub fn has_pair(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v) || self.has_edge(v, u)
    }

    pub fn out_neighbours(&self, v: usize) -> VertexSet {
        VertexSet(self.out[v])
    }

    pub fn in_neighbours(&self, v: usize) -> VertexSet {
        let mut bits = 0;
        for (u, &o) in self.out.iter().enumerate() {
            bits |= ((o >> v) & 1) << u;
        }
        VertexSet(bits)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut es = Vec::new();
        for u in 0..self.n {
            for v in VertexSet(self.out[u]).iter() {
                es.push((u, v));
            }
        }
        es
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|o| o.count_ones() as usize).sum()
    }

    pub fn is_tournament(&self) -> bool {
        (0..self.n).all(|u| (u + 1..self.n).all(|v| self.has_pair(u, v)))
    }

    /// Reverses every edge with both endpoints in `x`.
    pub fn invert(&self, x: VertexSet) -> Result<Digraph> {
        if !x.within(self.n) {
            return Err(Error::SetOutOfRange);
        }
        Ok(self.invert_masked(x))
    }

    /// Same as [`invert`](Self::invert) but silently clips `x` to the vertex
    /// range.
    pub fn invert_masked(&self, x: VertexSet) -> Digraph {
        let xb = x.bits() & VertexSet::full(self.n).bits();
        let mut out = self.out.clone();
        for v in VertexSet(xb).iter() {
            // Out-edges inside X become in-edges and vice versa.
            let kept = self.out[v] & !xb;
            let mut gained = 0u64;
            for u in VertexSet(xb).iter() {
                gained |= ((self.out[u] >> v) & 1) << u;
            }
            out[v] = kept | gained;
        }
        Digraph { n: self.n, out }
    }

    /// Applies each set of the family in turn. The outcome does not depend
    /// on the order of the sets.
    pub fn apply_family(&self, family: &SetFamily) -> Result<Digraph> {
        let mut d = self.clone();
        for &x in &family.sets {
            d = d.invert(x)?;
        }
        Ok(d)
    }

    pub(crate) fn apply_family_masked(&self, family: &SetFamily) -> Digraph {
        let mut d = self.clone();
        for &x in &family.sets {
            d = d.invert_masked(x);
        }
        d
    }

    /// Topological order if the digraph is acyclic: every edge points from
    /// an earlier to a later position. Smallest-index source first, so the
    /// witness is deterministic.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut remaining = VertexSet::full(self.n).bits();
        let mut order = Vec::with_capacity(self.n);
        while remaining != 0 {
            let mut covered = 0u64;
            for v in VertexSet(remaining).iter() {
                covered |= self.out[v] & remaining;
            }
            let sources = remaining & !covered;
            if sources == 0 {
                return None;
            }
            let v = sources.trailing_zeros() as usize;
            order.push(v);
            remaining &= !(1 << v);
        }
        Some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// The set of sources and the set of sinks.
    pub fn sources_sinks(&self) -> (VertexSet, VertexSet) {
        let mut has_in = 0u64;
        for &o in &self.out {
            has_in |= o;
        }
        let all = VertexSet::full(self.n).bits();
        let sources = all & !has_in;
        let mut sinks = 0u64;
        for v in 0..self.n {
            if self.out[v] == 0 {
                sinks |= 1 << v;
            }
        }
        (VertexSet(sources), VertexSet(sinks))
    }

    /// All unordered twin pairs: `u, v` whose out- and in-neighbourhoods
    /// agree outside `{u, v}`.
    pub fn twins(&self) -> Vec<(usize, usize)> {
        let ins: Vec<u64> = (0..self.n).map(|v| self.in_neighbours(v).bits()).collect();
        let mut pairs = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                let mask = !((1u64 << u) | (1u64 << v));
                if self.out[u] & mask == self.out[v] & mask && ins[u] & mask == ins[v] & mask {
                    pairs.push((u, v));
                }
            }
        }
        pairs
    }

    /// Decycling family with at most `n - 1` sets: for each vertex `i` in
    /// turn, invert `N+(i) ∪ {i}` minus the already-processed vertices,
    /// where the out-neighbourhood is taken in the current digraph after the
    /// earlier inversions. Singleton and empty steps are no-ops and are
    /// dropped. On a tournament the result is the reverse-transitive
    /// tournament (every edge from the larger to the smaller label).
    pub fn greedy_decycling(&self) -> SetFamily {
        let mut cur = self.clone();
        let mut sets = Vec::new();
        for i in 0..self.n.saturating_sub(1) {
            let done = if i == 0 { 0 } else { (1u64 << i) - 1 };
            let x = VertexSet((cur.out[i] | (1 << i)) & !done);
            if x.len() >= 2 {
                cur = cur.invert_masked(x);
                sets.push(x);
            }
        }
        SetFamily::new(sets)
    }

    /// Copy with vertex `v` removed; the remaining vertices are relabelled
    /// downwards to stay contiguous.
    pub fn remove_vertex(&self, v: usize) -> Digraph {
        assert!(v < self.n);
        let map = |u: usize| if u > v { u - 1 } else { u };
        let mut d = Digraph::empty(self.n - 1);
        for (a, b) in self.edges() {
            if a != v && b != v {
                d.out[map(a)] |= 1 << map(b);
            }
        }
        d
    }

    /// Relabels vertices: `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Digraph {
        assert_eq!(perm.len(), self.n);
        let mut d = Digraph::empty(self.n);
        for (u, v) in self.edges() {
            d.out[perm[u]] |= 1 << perm[v];
        }
        d
    }
}

/// Disjoint union of the two digraphs plus every edge from the first copy
/// to the second. Vertices of `a` keep their labels; those of `b` are
/// shifted up by `a.n()`.
pub fn dijoin(a: &Digraph, b: &Digraph) -> Result<Digraph> {
    let n = a.n + b.n;
    if n > MAX_VERTICES {
        return Err(Error::LimitExceeded(format!("dijoin would have {n} vertices")));
    }
    let cross = VertexSet::full(n).bits() & !VertexSet::full(a.n).bits();
    let mut out = Vec::with_capacity(n);
    for u in 0..a.n {
        out.push(a.out[u] | cross);
    }
    for v in 0..b.n {
        out.push(b.out[v] << a.n);
    }
    Ok(Digraph { n, out })
}

/// Left fold of [`dijoin`] over the sequence.
pub fn kjoin(parts: &[Digraph]) -> Result<Digraph> {
    let mut acc = Digraph::empty(0);
    for p in parts {
        acc = dijoin(&acc, p)?;
    }
    Ok(acc)
}

/// Oriented graph with exactly one edge per vertex pair.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tournament(Digraph);

impl TryFrom<Digraph> for Tournament {
    type Error = Error;

    fn try_from(d: Digraph) -> Result<Self> {
        if d.is_tournament() {
            Ok(Tournament(d))
        } else {
            Err(Error::NotTournament)
        }
    }
}

impl std::ops::Deref for Tournament {
    type Target = Digraph;

    fn deref(&self) -> &Digraph {
        &self.0
    }
}

impl Tournament {
    pub fn digraph(&self) -> &Digraph {
        &self.0
    }

    pub fn into_digraph(self) -> Digraph {
        self.0
    }

    /// Transitive tournament with edges from smaller to larger labels.
    pub fn transitive(n: usize) -> Self {
        let mut d = Digraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                d.out[u] |= 1 << v;
            }
        }
        Tournament(d)
    }

    /// The directed triangle `0 -> 1 -> 2 -> 0`.
    pub fn directed_triangle() -> Self {
        Tournament(Digraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap())
    }

    /// Transitive tournament induced by an ordering: `u -> v` iff `u` comes
    /// before `v`.
    pub fn from_order(order: &VertexOrder) -> Self {
        let n = order.n();
        let mut d = Digraph::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v && order.position(u) < order.position(v) {
                    d.out[u] |= 1 << v;
                }
            }
        }
        Tournament(d)
    }

    pub fn invert(&self, x: VertexSet) -> Result<Tournament> {
        Ok(Tournament(self.0.invert(x)?))
    }

    pub fn apply_family(&self, family: &SetFamily) -> Result<Tournament> {
        Ok(Tournament(self.0.apply_family(family)?))
    }

    pub fn permuted(&self, perm: &[usize]) -> Tournament {
        Tournament(self.0.permuted(perm))
    }

    pub fn dijoin(&self, other: &Tournament) -> Result<Tournament> {
        Ok(Tournament(dijoin(&self.0, &other.0)?))
    }

    pub fn remove_vertex(&self, v: usize) -> Tournament {
        Tournament(self.0.remove_vertex(v))
    }

    /// Pair-bit encoding: bit `k` is 1 when the `k`-th pair `(i, j)`,
    /// `i < j` in lexicographic order, is oriented `i -> j`.
    pub fn code(&self) -> u64 {
        assert!(pair_count(self.n()) <= 64, "code only covers small orders");
        let mut code = 0u64;
        for k in 0..pair_count(self.n()) {
            let (i, j) = pair_at(self.n(), k);
            if self.has_edge(i, j) {
                code |= 1 << k;
            }
        }
        code
    }

    pub fn from_code(n: usize, code: u64) -> Result<Self> {
        if pair_count(n) > 64 {
            return Err(Error::LimitExceeded(format!(
                "{n} vertices exceed the pair-code width"
            )));
        }
        if pair_count(n) < 64 && code >> pair_count(n) != 0 {
            return Err(Error::Internal("stray bits in tournament code".into()));
        }
        let mut d = Digraph::empty(n);
        for k in 0..pair_count(n) {
            let (i, j) = pair_at(n, k);
            if (code >> k) & 1 == 1 {
                d.out[i] |= 1 << j;
            } else {
                d.out[j] |= 1 << i;
            }
        }
        Ok(Tournament(d))
    }

    /// Lexicographically minimal code over all vertex relabelings.
    pub fn canonical_code(&self) -> u64 {
        let n = self.n();
        let mut best = u64::MAX;
        for perm in VertexOrder::all(n) {
            let code = self.permuted(perm.seq()).code();
            best = best.min(code);
        }
        best
    }

    pub fn is_canonical(&self) -> bool {
        self.code() == self.canonical_code()
    }
}

/// All labelled tournaments on `n` vertices in code order, starting at
/// `offset`. The stream is restartable from any code index.
pub fn enumerate_labeled_from(n: usize, offset: u64) -> Result<impl Iterator<Item = Tournament>> {
    if n > 7 {
        return Err(Error::LimitExceeded(format!(
            "exhaustive enumeration is limited to 7 vertices, got {n}"
        )));
    }
    let total = 1u64 << pair_count(n);
    Ok((offset..total).map(move |code| Tournament::from_code(n, code).expect("valid code")))
}

pub fn enumerate_labeled(n: usize) -> Result<impl Iterator<Item = Tournament>> {
    enumerate_labeled_from(n, 0)
}

/// Canonical representatives only: tournaments whose code is
/// lexicographically minimal among all relabelings.
pub fn enumerate_canonical(n: usize) -> Result<impl Iterator<Item = Tournament>> {
    Ok(enumerate_labeled(n)?.filter(|t| t.is_canonical()))
}

/// Tournament on the same vertex set containing `d`, with `family` still a
/// decycling family: extend the decycled digraph to a transitive tournament
/// along its topological order, then undo the inversions.
pub fn tournament_completion(d: &Digraph, family: &SetFamily) -> Result<Tournament> {
    let decycled = d.apply_family(family)?;
    let order = decycled.topological_order().ok_or(Error::NotDecycling)?;
    let mut extended = decycled;
    for (k, &u) in order.iter().enumerate() {
        for &v in &order[k + 1..] {
            if !extended.has_pair(u, v) {
                extended.add_edge_unchecked(u, v);
            }
        }
    }
    let completed = extended.apply_family(family)?;
    Tournament::try_from(completed)
}

/// Disagreement graph between a tournament and the transitive tournament
/// induced by `order`: the pair `{u, v}` is an edge exactly when the two
/// orientations differ.
pub fn diff_graph(t: &Tournament, order: &VertexOrder) -> Graph {
    let n = t.n();
    assert_eq!(order.n(), n, "ordering must cover the vertex set");
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if t.has_edge(u, v) != (order.position(u) < order.position(v)) {
                g.add_edge_unchecked(u, v);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c3() -> Digraph {
        Digraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn invert_examples() {
        let d = c3();
        assert_eq!(d.invert(VertexSet::empty()).unwrap(), d);

        let flipped = d.invert([0, 1].into_iter().collect()).unwrap();
        assert_eq!(flipped.edges(), vec![(1, 0), (1, 2), (2, 0)]);
        assert!(flipped.is_acyclic());

        assert!(d.invert(VertexSet::from_bits(1 << 5)).is_err());
    }

    #[test]
    fn invert_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..300 {
            let n = rng.gen_range(0..=8);
            let d = sample::random_digraph(&mut rng, n);
            let x = sample::random_subset(&mut rng, n);
            let back = d.invert(x).unwrap().invert(x).unwrap();
            assert_eq!(back, d);
            let t = sample::random_tournament(&mut rng, n);
            assert!(t.invert(x).unwrap().is_tournament());
        }
    }

    #[test]
    fn apply_family_examples() {
        let d = c3();
        assert_eq!(d.apply_family(&SetFamily::empty()).unwrap(), d);
        let f = SetFamily::new(vec![[0, 1].into_iter().collect()]);
        assert!(d.apply_family(&f).unwrap().is_acyclic());
        let twice = SetFamily::new(vec![f.sets[0], f.sets[0]]);
        assert_eq!(d.apply_family(&twice).unwrap(), d);
    }

    #[test]
    fn apply_family_is_order_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let d = sample::random_digraph(&mut rng, n);
            let f = sample::random_family(&mut rng, n, 4);
            let a = d.apply_family(&f).unwrap();
            let mut shuffled = f.sets.clone();
            for i in (1..shuffled.len()).rev() {
                shuffled.swap(i, rng.gen_range(0..=i));
            }
            let b = d.apply_family(&SetFamily::new(shuffled)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn acyclicity_examples() {
        assert!(Tournament::transitive(4).is_acyclic());
        assert!(!c3().is_acyclic());
        assert!(Digraph::empty(5).is_acyclic());
        assert!(Digraph::empty(0).is_acyclic());
    }

    #[test]
    fn topological_witness_orients_all_edges_forward() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let d = sample::random_digraph(&mut rng, n);
            if let Some(order) = d.topological_order() {
                let pos = VertexOrder::from_seq(order).unwrap();
                for (u, v) in d.edges() {
                    assert!(pos.position(u) < pos.position(v));
                }
            }
        }
    }

    #[test]
    fn dijoin_examples() {
        let t = c3();
        let j = dijoin(&t, &t).unwrap();
        assert_eq!(j.n(), 6);
        assert_eq!(j.edge_count(), 3 + 3 + 9);
        assert!(j.is_tournament());

        let a = Tournament::transitive(3);
        let b = Tournament::transitive(4);
        assert!(dijoin(&a, &b).unwrap().is_acyclic());

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let n1 = rng.gen_range(0..=5);
            let n2 = rng.gen_range(0..=5);
            let d1 = sample::random_digraph(&mut rng, n1);
            let d2 = sample::random_digraph(&mut rng, n2);
            let j = dijoin(&d1, &d2).unwrap();
            assert_eq!(
                j.edge_count(),
                d1.edge_count() + d2.edge_count() + d1.n() * d2.n()
            );
        }
    }

    #[test]
    fn kjoin_examples() {
        let t = c3();
        assert_eq!(kjoin(std::slice::from_ref(&t)).unwrap(), t);
        assert_eq!(
            kjoin(&[t.clone(), t.clone()]).unwrap(),
            dijoin(&t, &t).unwrap()
        );
        let triple = kjoin(&[t.clone(), t.clone(), t.clone()]).unwrap();
        assert_eq!(triple.n(), 9);
        assert_eq!(triple.edge_count(), 36);
    }

    #[test]
    fn sources_and_sinks() {
        let tt3 = Tournament::transitive(3);
        let (sources, sinks) = tt3.sources_sinks();
        assert_eq!(sources, [0].into_iter().collect());
        assert_eq!(sinks, [2].into_iter().collect());

        let (sources, sinks) = c3().sources_sinks();
        assert!(sources.is_empty() && sinks.is_empty());

        let single = Digraph::empty(1);
        let (sources, sinks) = single.sources_sinks();
        assert_eq!(sources, [0].into_iter().collect());
        assert_eq!(sinks, [0].into_iter().collect());
    }

    #[test]
    fn twin_examples() {
        let isolated = Digraph::empty(2);
        assert_eq!(isolated.twins(), vec![(0, 1)]);

        // No pair of the directed triangle qualifies: the out-neighbourhoods
        // minus the other vertex are {} vs {next}.
        assert!(c3().twins().is_empty());

        // Brute-force check fixes the transitive triangle's twin pairs.
        assert_eq!(Tournament::transitive(3).twins(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn twins_match_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(2..=7);
            let d = sample::random_digraph(&mut rng, n);
            let found = d.twins();
            for u in 0..n {
                for v in u + 1..n {
                    let without = |s: VertexSet, w| {
                        s.iter().filter(|&x| x != w).collect::<Vec<_>>()
                    };
                    let twins = without(d.out_neighbours(u), v) == without(d.out_neighbours(v), u)
                        && without(d.in_neighbours(u), v) == without(d.in_neighbours(v), u);
                    assert_eq!(found.contains(&(u, v)), twins);
                }
            }
        }
    }

    #[test]
    fn greedy_decycling_examples() {
        assert!(Digraph::empty(1).greedy_decycling().is_empty());

        let d = c3();
        let f = d.greedy_decycling();
        assert_eq!(
            f.sets,
            vec![[0, 1].into_iter().collect(), [1, 2].into_iter().collect()]
        );
        let result = d.apply_family(&f).unwrap();
        assert_eq!(result.edges(), vec![(1, 0), (2, 0), (2, 1)]);
    }

    #[test]
    fn greedy_decycling_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..2000 {
            let n = rng.gen_range(1..=10);
            let d = sample::random_digraph(&mut rng, n);
            let f = d.greedy_decycling();
            assert!(f.len() <= n.saturating_sub(1));
            assert!(d.apply_family(&f).unwrap().is_acyclic());
        }
        // On tournaments the outcome is the reverse-transitive tournament.
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let t = sample::random_tournament(&mut rng, n);
            let f = t.greedy_decycling();
            let r = t.apply_family(&f).unwrap();
            for u in 0..n {
                for v in u + 1..n {
                    assert!(r.has_edge(v, u));
                }
            }
        }
    }

    #[test]
    fn completion_examples() {
        // Already a tournament: nothing to extend.
        let t = Tournament::directed_triangle();
        let f = SetFamily::new(vec![[0, 1].into_iter().collect()]);
        let completed = tournament_completion(t.digraph(), &f).unwrap();
        assert_eq!(completed.digraph(), t.digraph());

        // Single edge on three vertices, empty family.
        let d = Digraph::from_edges(3, &[(0, 1)]).unwrap();
        let completed = tournament_completion(&d, &SetFamily::empty()).unwrap();
        assert!(completed.is_acyclic());
        assert!(completed.has_edge(0, 1));

        // A family that does not decycle is rejected.
        assert!(matches!(
            tournament_completion(&c3(), &SetFamily::empty()),
            Err(Error::NotDecycling)
        ));
    }

    #[test]
    fn completion_contains_and_preserves_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=7);
            let d = sample::random_digraph(&mut rng, n);
            let f = d.greedy_decycling();
            let completed = tournament_completion(&d, &f).unwrap();
            for (u, v) in d.edges() {
                assert!(completed.has_edge(u, v));
            }
            assert!(completed.apply_family(&f).unwrap().is_acyclic());
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_labeled(1).unwrap().count(), 1);
        assert_eq!(enumerate_labeled(3).unwrap().count(), 8);
        assert_eq!(enumerate_canonical(3).unwrap().count(), 2);
        assert_eq!(enumerate_labeled(4).unwrap().count(), 64);
        assert_eq!(enumerate_canonical(4).unwrap().count(), 4);
        assert_eq!(enumerate_canonical(5).unwrap().count(), 12);
        assert!(enumerate_labeled(8).is_err());
    }

    #[test]
    fn enumeration_is_restartable() {
        let all: Vec<u64> = enumerate_labeled(4).unwrap().map(|t| t.code()).collect();
        let tail: Vec<u64> = enumerate_labeled_from(4, 40)
            .unwrap()
            .map(|t| t.code())
            .collect();
        assert_eq!(&all[40..], &tail[..]);
    }

    #[test]
    fn code_roundtrip() {
        for t in enumerate_labeled(4).unwrap() {
            let code = t.code();
            assert_eq!(Tournament::from_code(4, code).unwrap(), t);
        }
        assert!(Tournament::from_code(3, 0b1000).is_err());
    }

    #[test]
    fn diff_graph_examples() {
        let n = 5;
        let tt = Tournament::transitive(n);
        let id = VertexOrder::identity(n);
        assert_eq!(diff_graph(&tt, &id).edge_count(), 0);

        let t = Tournament::directed_triangle();
        let g = diff_graph(&t, &VertexOrder::identity(3));
        assert_eq!(g.edges(), vec![(0, 2)]);

        // Reversed transitive tournament disagrees on every pair.
        let rev = Tournament::from_order(&VertexOrder::from_seq(vec![4, 3, 2, 1, 0]).unwrap());
        let g = diff_graph(&rev, &id);
        assert_eq!(g.edge_count(), pair_count(n));
    }

    #[test]
    fn diff_graph_empty_iff_matching_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let t = sample::random_tournament(&mut rng, n);
            let order = VertexOrder::from_index(n, rng.gen_range(0..VertexOrder::count(n)));
            let g = diff_graph(&t, &order);
            let matches = *t.digraph() == *Tournament::from_order(&order).digraph();
            assert_eq!(g.edge_count() == 0, matches);
        }
    }

    #[test]
    fn dijoin_blockwise_order_has_empty_cross_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let n1 = rng.gen_range(1..=4);
            let n2 = rng.gen_range(1..=4);
            let t1 = sample::random_tournament(&mut rng, n1);
            let t2 = sample::random_tournament(&mut rng, n2);
            let j = t1.dijoin(&t2).unwrap();
            let o1 = VertexOrder::from_index(n1, rng.gen_range(0..VertexOrder::count(n1)));
            let o2 = VertexOrder::from_index(n2, rng.gen_range(0..VertexOrder::count(n2)));
            let seq: Vec<usize> = o1
                .seq()
                .iter()
                .copied()
                .chain(o2.seq().iter().map(|&v| v + n1))
                .collect();
            let order = VertexOrder::from_seq(seq).unwrap();
            let g = diff_graph(&j, &order);
            // Cross edges all agree with any order putting the first copy
            // before the second.
            for u in 0..n1 {
                for v in n1..n1 + n2 {
                    assert!(!g.has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn vertex_order_enumeration() {
        assert_eq!(VertexOrder::count(4), 24);
        let all: Vec<_> = VertexOrder::all(3).map(|o| o.seq().to_vec()).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[5], vec![2, 1, 0]);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 6);
    }

    #[test]
    fn degenerate_orders() {
        assert!(Digraph::empty(0).is_acyclic());
        assert_eq!(Digraph::empty(0).greedy_decycling().len(), 0);
        assert_eq!(VertexOrder::count(0), 1);
        assert_eq!(VertexOrder::all(0).count(), 1);
    }
}
