//! Seeded random instance generators used by the verification suites and
//! the test harness. Every generator takes the RNG explicitly so runs are
//! reproducible and shardable: use [`rng_for`] with the instance index as
//! the stream.

use crate::digraph::{Digraph, SetFamily, Tournament, VertexSet};
use crate::gf2::Gf2Matrix;
use crate::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent generator for instance `stream` under a fixed suite seed.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Each pair is absent with probability 1/2, otherwise oriented fairly.
pub fn random_digraph(rng: &mut impl Rng, n: usize) -> Digraph {
    let mut d = Digraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                if rng.gen_bool(0.5) {
                    d.add_edge_unchecked(u, v);
                } else {
                    d.add_edge_unchecked(v, u);
                }
            }
        }
    }
    d
}

pub fn random_tournament(rng: &mut impl Rng, n: usize) -> Tournament {
    let mut d = Digraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                d.add_edge_unchecked(u, v);
            } else {
                d.add_edge_unchecked(v, u);
            }
        }
    }
    Tournament::try_from(d).expect("every pair oriented")
}

pub fn random_graph(rng: &mut impl Rng, n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                g.add_edge_unchecked(u, v);
            }
        }
    }
    g
}

pub fn random_subset(rng: &mut impl Rng, n: usize) -> VertexSet {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

pub fn random_family(rng: &mut impl Rng, n: usize, max_sets: usize) -> SetFamily {
    let k = rng.gen_range(0..=max_sets);
    SetFamily::new((0..k).map(|_| random_subset(rng, n)).collect())
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> Gf2Matrix {
    let mut m = Gf2Matrix::zero(n, n);
    for i in 0..n {
        for j in i..n {
            if rng.gen_bool(0.5) {
                m.set(i, j, true);
                m.set(j, i, true);
            }
        }
    }
    m
}

/// Random staircase block: ones fill the bottom of each column, with
/// column heights non-increasing left to right.
pub fn random_staircase(rng: &mut impl Rng, nrows: usize, ncols: usize) -> Gf2Matrix {
    let mut heights: Vec<usize> = (0..ncols).map(|_| rng.gen_range(0..=nrows)).collect();
    heights.sort_unstable_by(|a, b| b.cmp(a));
    Gf2Matrix::from_fn(nrows, ncols, |i, j| i >= nrows - heights[j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::is_staircase;

    #[test]
    fn staircase_generator_is_valid() {
        let mut rng = rng_for(99, 0);
        for _ in 0..500 {
            let n = rng.gen_range(1..=8);
            let m = rng.gen_range(1..=8);
            assert!(is_staircase(&random_staircase(&mut rng, n, m)));
        }
    }

    #[test]
    fn generators_are_reproducible() {
        let a = random_digraph(&mut rng_for(5, 3), 6);
        let b = random_digraph(&mut rng_for(5, 3), 6);
        assert_eq!(a, b);
        let c = random_digraph(&mut rng_for(5, 4), 6);
        assert!(a != c || a.edge_count() == c.edge_count());
    }
}
