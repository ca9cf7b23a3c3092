//! Undirected simple graphs on at most 64 vertices, stored as one
//! adjacency bit word per vertex.

use crate::digraph::{VertexSet, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::pairs::{pair_at, pair_count, pair_index};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices");
        Graph { n, adj: vec![0; n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 0..n {
            g.adj[v] = VertexSet::full(n).bits() & !(1 << v);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(Error::VertexOutOfRange(v));
            }
            if u == v {
                return Err(Error::Internal(format!("loop at vertex {u}")));
            }
            g.adj[u] |= 1 << v;
            g.adj[v] |= 1 << u;
        }
        Ok(g)
    }

    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.adj[u] >> v) & 1 == 1
    }

    pub fn neighbours(&self, v: usize) -> VertexSet {
        VertexSet::from_bits(self.adj[v])
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut es = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    es.push((u, v));
                }
            }
        }
        es
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn is_edgeless(&self) -> bool {
        self.adj.iter().all(|&a| a == 0)
    }

    /// Toggles every pair inside `x`. An involution.
    pub fn complement_subgraph(&self, x: VertexSet) -> Result<Graph> {
        if !x.within(self.n) {
            return Err(Error::SetOutOfRange);
        }
        Ok(self.complement_subgraph_masked(x))
    }

    pub(crate) fn complement_subgraph_masked(&self, x: VertexSet) -> Graph {
        let xb = x.bits() & VertexSet::full(self.n).bits();
        let mut g = self.clone();
        for v in VertexSet::from_bits(xb).iter() {
            g.adj[v] ^= xb & !(1 << v);
        }
        g
    }

    /// Adjacency matrix with a zero diagonal.
    pub fn adjacency_matrix(&self) -> Gf2Matrix {
        Gf2Matrix::from_rows(self.n, self.adj.clone())
    }

    /// Pair-bit encoding analogous to the tournament code: bit `k` set iff
    /// the `k`-th pair is an edge. Requires at most 11 vertices.
    pub fn pair_code(&self) -> u64 {
        assert!(pair_count(self.n) <= 64);
        let mut code = 0u64;
        for k in 0..pair_count(self.n) {
            let (i, j) = pair_at(self.n, k);
            if self.has_edge(i, j) {
                code |= 1 << k;
            }
        }
        code
    }

    pub fn from_pair_code(n: usize, code: u64) -> Result<Self> {
        if pair_count(n) > 64 {
            return Err(Error::LimitExceeded(format!(
                "{n} vertices exceed the pair-code width"
            )));
        }
        if pair_count(n) < 64 && code >> pair_count(n) != 0 {
            return Err(Error::Internal("stray bits in graph code".into()));
        }
        let mut g = Graph::empty(n);
        for k in 0..pair_count(n) {
            if (code >> k) & 1 == 1 {
                let (i, j) = pair_at(n, k);
                g.add_edge_unchecked(i, j);
            }
        }
        Ok(g)
    }

    /// Relabels vertices: `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge_unchecked(perm[u], perm[v]);
        }
        g
    }

    /// Bit index of the pair `{u, v}` in the pair code.
    pub fn pair_bit(&self, u: usize, v: usize) -> usize {
        pair_index(self.n, u.min(v), u.max(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_examples() {
        let k3 = Graph::complete(3);
        let emptied = k3.complement_subgraph(VertexSet::full(3)).unwrap();
        assert!(emptied.is_edgeless());

        let e2 = Graph::empty(2);
        let k2 = e2.complement_subgraph(VertexSet::full(2)).unwrap();
        assert_eq!(k2.edges(), vec![(0, 1)]);

        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let x: VertexSet = [0, 2, 3].into_iter().collect();
        assert_eq!(
            g.complement_subgraph(x).unwrap().complement_subgraph(x).unwrap(),
            g
        );

        assert!(g.complement_subgraph(VertexSet::from_bits(1 << 9)).is_err());
    }

    #[test]
    fn pair_code_roundtrip() {
        for code in 0u64..1 << 6 {
            let g = Graph::from_pair_code(4, code).unwrap();
            assert_eq!(g.pair_code(), code);
        }
    }

    #[test]
    fn adjacency_matrix_is_symmetric_zero_diag() {
        let g = Graph::from_edges(5, &[(0, 3), (1, 2), (3, 4)]).unwrap();
        let m = g.adjacency_matrix();
        assert!(m.is_symmetric());
        assert_eq!(m.diag(), 0);
        assert!(m.get(0, 3) && m.get(3, 0) && !m.get(0, 1));
    }
}
