//! Exact inversion numbers by two independent engines.
//!
//! The breadth-first engine walks orientation states of the fixed
//! underlying graph, one subset inversion per step, and reads the distance
//! to the nearest acyclic state. The rank engine minimizes the rank, over
//! the two-element field, of disagreement-graph matrices across all vertex
//! orderings and diagonal assignments; the minimum pins the inversion
//! number to one of two consecutive values and a diagonal classification
//! decides between them. Certificates from either engine are re-verified
//! before they are returned.

use crate::complement::system_from_matrix;
use crate::digraph::{diff_graph, Digraph, SetFamily, Tournament, VertexOrder, VertexSet};
use crate::error::{Error, Result};
use crate::pairs::pair_count;
use crate::shard;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Largest tournament order accepted by the rank engine (`n!` orderings).
pub const TMR_MAX_N: usize = 10;

/// Limits for the breadth-first engine: one state bit per edge of the
/// underlying graph, subsets enumerated over the vertex range.
pub const BFS_MAX_EDGES: usize = 21;
pub const BFS_MAX_N: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bfs,
    Rank,
}

/// An inversion number together with a decycling family of exactly that
/// size and the engine that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvResult {
    pub value: usize,
    pub certificate: SetFamily,
    pub method: Method,
}

/// True when applying the family (clipped to the vertex range) leaves an
/// acyclic digraph.
pub fn check_decycling(d: &Digraph, family: &SetFamily) -> bool {
    d.apply_family_masked(family).is_acyclic()
}

/// Shared state-space machinery for the breadth-first engine: the
/// underlying edge list, the subset transition masks, and the orientation
/// encoding.
struct OrientationSpace {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// Distinct nonzero edge-flip masks with a representative subset each.
    moves: Vec<(u32, VertexSet)>,
}

impl OrientationSpace {
    fn new(d: &Digraph) -> Result<Self> {
        let n = d.n();
        if n > BFS_MAX_N {
            return Err(Error::LimitExceeded(format!(
                "breadth-first engine handles at most {BFS_MAX_N} vertices, got {n}"
            )));
        }
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| d.has_pair(u, v))
            .collect();
        if edges.len() > BFS_MAX_EDGES {
            return Err(Error::LimitExceeded(format!(
                "breadth-first engine handles at most {BFS_MAX_EDGES} edges, got {}",
                edges.len()
            )));
        }
        let mut seen = HashSet::new();
        let mut moves = Vec::new();
        for xbits in 0u64..1 << n {
            let x = VertexSet::from_bits(xbits);
            if x.len() < 2 {
                continue;
            }
            let mut mask = 0u32;
            for (k, &(u, v)) in edges.iter().enumerate() {
                if x.contains(u) && x.contains(v) {
                    mask |= 1 << k;
                }
            }
            // Subsets inducing no edge are no-ops; subsets with the same
            // induced edge set act identically, keep the first.
            if mask != 0 && seen.insert(mask) {
                moves.push((mask, x));
            }
        }
        Ok(OrientationSpace { n, edges, moves })
    }

    /// Orientation state of a digraph over this space's edge list: bit `k`
    /// set when edge `k = (u, v)` is oriented `u -> v`.
    fn encode(&self, d: &Digraph) -> u32 {
        let mut state = 0u32;
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            if d.has_edge(u, v) {
                state |= 1 << k;
            }
        }
        state
    }

    fn decode(&self, state: u32) -> Digraph {
        let mut d = Digraph::empty(self.n);
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            if (state >> k) & 1 == 1 {
                d.add_edge_unchecked(u, v);
            } else {
                d.add_edge_unchecked(v, u);
            }
        }
        d
    }

    fn is_acyclic(&self, state: u32) -> bool {
        self.decode(state).is_acyclic()
    }
}

/// Exact inversion number by breadth-first search from the input
/// orientation to the nearest acyclic orientation of the same underlying
/// graph. The certificate is reconstructed from the distance table.
pub fn inv_bfs(d: &Digraph) -> Result<InvResult> {
    if d.is_acyclic() {
        return Ok(InvResult {
            value: 0,
            certificate: SetFamily::empty(),
            method: Method::Bfs,
        });
    }
    let space = OrientationSpace::new(d)?;
    let start = space.encode(d);
    let mut dist = vec![u8::MAX; 1usize << space.edges.len()];
    let mut queue = std::collections::VecDeque::new();
    dist[start as usize] = 0;
    queue.push_back(start);
    let goal = loop {
        let Some(state) = queue.pop_front() else {
            return Err(Error::Internal(
                "state space exhausted without an acyclic orientation".into(),
            ));
        };
        if space.is_acyclic(state) {
            break state;
        }
        let base = dist[state as usize];
        for &(mask, _) in &space.moves {
            let next = state ^ mask;
            if dist[next as usize] == u8::MAX {
                dist[next as usize] = base + 1;
                queue.push_back(next);
            }
        }
    };
    // Walk back toward the start along strictly decreasing distances.
    let mut sets = Vec::new();
    let mut cur = goal;
    while dist[cur as usize] > 0 {
        let d0 = dist[cur as usize];
        let &(mask, x) = space
            .moves
            .iter()
            .find(|(mask, _)| dist[(cur ^ mask) as usize] == d0 - 1)
            .expect("predecessor on a shortest path");
        sets.push(x);
        cur ^= mask;
    }
    let certificate = SetFamily::new(sets);
    debug_assert!(check_decycling(d, &certificate));
    Ok(InvResult {
        value: dist[goal as usize] as usize,
        certificate,
        method: Method::Bfs,
    })
}

/// Inversion numbers of every labelled tournament of one order at once:
/// multi-source breadth-first search from all transitive orientations.
/// Inversions are involutions, so distance from the transitive set equals
/// distance to it.
pub struct InvTable {
    n: usize,
    dist: Vec<u8>,
    moves: Vec<(u32, VertexSet)>,
}

impl InvTable {
    pub fn build(n: usize) -> Result<Self> {
        if pair_count(n) > BFS_MAX_EDGES {
            return Err(Error::LimitExceeded(format!(
                "full tournament table is limited to 7 vertices, got {n}"
            )));
        }
        let space = OrientationSpace::new(Tournament::transitive(n).digraph())?;
        let mut dist = vec![u8::MAX; 1usize << pair_count(n)];
        let mut queue = std::collections::VecDeque::new();
        for order in VertexOrder::all(n) {
            let code = Tournament::from_order(&order).code() as u32;
            if dist[code as usize] == u8::MAX {
                dist[code as usize] = 0;
                queue.push_back(code);
            }
        }
        while let Some(state) = queue.pop_front() {
            let base = dist[state as usize];
            for &(mask, _) in &space.moves {
                let next = state ^ mask;
                if dist[next as usize] == u8::MAX {
                    dist[next as usize] = base + 1;
                    queue.push_back(next);
                }
            }
        }
        Ok(InvTable {
            n,
            dist,
            moves: space.moves,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn inv_of_code(&self, code: u64) -> usize {
        self.dist[code as usize] as usize
    }

    pub fn inv(&self, t: &Tournament) -> usize {
        assert_eq!(t.n(), self.n);
        self.inv_of_code(t.code())
    }

    /// A minimum decycling family, by walking the table toward any
    /// transitive orientation.
    pub fn certificate(&self, t: &Tournament) -> SetFamily {
        assert_eq!(t.n(), self.n);
        let mut cur = t.code() as u32;
        let mut sets = Vec::new();
        while self.dist[cur as usize] > 0 {
            let d0 = self.dist[cur as usize];
            let &(mask, x) = self
                .moves
                .iter()
                .find(|(mask, _)| self.dist[(cur ^ mask) as usize] == d0 - 1)
                .expect("step toward a transitive orientation");
            sets.push(x);
            cur ^= mask;
        }
        SetFamily::new(sets)
    }
}

/// How much of the rank scan to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmrMode {
    /// Minimum and first witness only; prunes everything above the running
    /// minimum.
    Value,
    /// Additionally visits every achiever of the minimum to decide whether
    /// all of them have an all-zero diagonal, which settles the inversion
    /// number.
    Classify,
}

/// Diagonal classification at the minimum rank.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TmrClassification {
    /// Every minimum-rank matrix across all orderings has a zero diagonal.
    pub all_achievers_zero_diag: bool,
    /// The inversion number this implies.
    pub inv_value: usize,
}

/// Result of the rank scan over all vertex orderings and diagonals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TmrOutcome {
    pub tmr: usize,
    /// First ordering/diagonal pair attaining the minimum, in enumeration
    /// order.
    pub witness: (VertexOrder, u64),
    /// Present in classify mode only.
    pub classification: Option<TmrClassification>,
}

struct TmrPartial {
    best: usize,
    witness: Option<(VertexOrder, u64)>,
    all_zero: bool,
    first_nonalt: Option<(VertexOrder, u64)>,
}

fn merge_tmr(a: TmrPartial, b: TmrPartial) -> TmrPartial {
    use std::cmp::Ordering;
    match a.best.cmp(&b.best) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => TmrPartial {
            best: a.best,
            witness: a.witness.or(b.witness),
            all_zero: a.all_zero && b.all_zero,
            first_nonalt: a.first_nonalt.or(b.first_nonalt),
        },
    }
}

/// Scans orderings `lo..hi` (by permutation index). `init_best` bounds the
/// ranks of interest; the scan stops early once the running minimum drops
/// below `stop_below`.
fn tmr_range(
    t: &Tournament,
    mode: TmrMode,
    lo: u64,
    hi: u64,
    init_best: usize,
    stop_below: usize,
) -> TmrPartial {
    let n = t.n();
    let mut seen: HashSet<u64> = HashSet::new();
    let mut p = TmrPartial {
        best: init_best,
        witness: None,
        all_zero: true,
        first_nonalt: None,
    };
    'orders: for idx in lo..hi {
        let order = VertexOrder::from_index(n, idx);
        let g = diff_graph(t, &order);
        // Distinct orderings often induce the same disagreement graph and
        // hence the same matrix family; scan each family once.
        if !seen.insert(g.pair_code()) {
            continue;
        }
        let adj = g.adjacency_matrix();
        for diag in 0..1u64 << n {
            let bound = match mode {
                // Only strictly better ranks matter in value mode.
                TmrMode::Value => match p.best.checked_sub(1) {
                    Some(b) => b,
                    None => break 'orders,
                },
                TmrMode::Classify => p.best,
            };
            let Some(r) = adj.with_diag(diag).rank_bounded(bound.min(n)) else {
                continue;
            };
            if r < p.best {
                p.best = r;
                p.witness = Some((order.clone(), diag));
                p.all_zero = diag == 0;
                p.first_nonalt = (diag != 0).then(|| (order.clone(), diag));
                if r < stop_below {
                    break 'orders;
                }
            } else if r == p.best && matches!(mode, TmrMode::Classify) {
                p.all_zero &= diag == 0;
                if diag != 0 && p.first_nonalt.is_none() {
                    p.first_nonalt = Some((order.clone(), diag));
                }
            }
        }
    }
    p
}

pub(crate) struct TmrScan {
    pub outcome: TmrOutcome,
    pub first_nonalt: Option<(VertexOrder, u64)>,
}

pub(crate) fn tmr_scan(t: &Tournament, mode: TmrMode, jobs: usize) -> Result<TmrScan> {
    let n = t.n();
    if n > TMR_MAX_N {
        return Err(Error::LimitExceeded(format!(
            "rank engine enumerates {n}! orderings"
        )));
    }
    let stop_below = 1; // nothing beats a transitive match
    let total = VertexOrder::count(n);
    let partials = shard::map_ranges(total, jobs, |r| {
        tmr_range(t, mode, r.start, r.end, n + 1, stop_below)
    });
    let merged = partials
        .into_iter()
        .reduce(merge_tmr)
        .expect("at least one shard");
    let tmr = merged.best;
    let witness = merged
        .witness
        .ok_or_else(|| Error::Internal("no ordering scanned".into()))?;
    let classification = match mode {
        TmrMode::Value => None,
        TmrMode::Classify => {
            let inv_value = if tmr == 0 {
                0
            } else if merged.all_zero {
                tmr + 1
            } else {
                tmr
            };
            Some(TmrClassification {
                all_achievers_zero_diag: merged.all_zero,
                inv_value,
            })
        }
    };
    Ok(TmrScan {
        outcome: TmrOutcome {
            tmr,
            witness,
            classification,
        },
        first_nonalt: merged.first_nonalt,
    })
}

/// Minimum rank over every ordering's matrix family. With
/// [`TmrMode::Classify`] the outcome also carries the diagonal
/// classification and the inversion number it implies.
pub fn tmr(t: &Tournament, mode: TmrMode) -> Result<TmrOutcome> {
    tmr_jobs(t, mode, 1)
}

/// [`tmr`] with the ordering enumeration sharded over worker threads.
pub fn tmr_jobs(t: &Tournament, mode: TmrMode, jobs: usize) -> Result<TmrOutcome> {
    Ok(tmr_scan(t, mode, jobs)?.outcome)
}

/// Bounded variant: the exact minimum (with witness) when it is below
/// `cap`, `None` once every ordering has been ruled out at ranks under
/// `cap`. Much cheaper than the full scan when `cap` is small.
pub fn tmr_bounded(t: &Tournament, cap: usize, jobs: usize) -> Result<Option<TmrOutcome>> {
    let n = t.n();
    if n > TMR_MAX_N {
        return Err(Error::LimitExceeded(format!(
            "rank engine enumerates {n}! orderings"
        )));
    }
    if cap == 0 {
        return Ok(None);
    }
    let total = VertexOrder::count(n);
    let partials = shard::map_ranges(total, jobs, |r| {
        tmr_range(t, TmrMode::Value, r.start, r.end, cap, 1)
    });
    let merged = partials
        .into_iter()
        .reduce(merge_tmr)
        .expect("at least one shard");
    Ok(merged.witness.map(|witness| TmrOutcome {
        tmr: merged.best,
        witness,
        classification: None,
    }))
}

/// Whether the minimum rank is at least `k`.
pub fn tmr_at_least(t: &Tournament, k: usize, jobs: usize) -> Result<bool> {
    Ok(tmr_bounded(t, k, jobs)?.is_none())
}

/// Exact inversion number through the rank engine, with a certificate
/// extracted from an achieving matrix: the complementing system of the
/// disagreement graph is exactly a family of inversions taking the
/// tournament to the witnessing transitive order.
pub fn inv_rank(t: &Tournament) -> Result<InvResult> {
    inv_rank_jobs(t, 1)
}

pub fn inv_rank_jobs(t: &Tournament, jobs: usize) -> Result<InvResult> {
    Ok(inv_rank_detailed(t, jobs)?.0)
}

/// [`inv_rank`] together with the classified scan outcome it was derived
/// from.
pub fn inv_rank_detailed(t: &Tournament, jobs: usize) -> Result<(InvResult, TmrOutcome)> {
    let TmrScan {
        outcome,
        first_nonalt,
    } = tmr_scan(t, TmrMode::Classify, jobs)?;
    let cls = outcome
        .classification
        .expect("classify mode fills the classification");
    if outcome.tmr == 0 {
        return Ok((
            InvResult {
                value: 0,
                certificate: SetFamily::empty(),
                method: Method::Rank,
            },
            outcome,
        ));
    }
    // A minimum-rank achiever with a nonzero diagonal yields a family of
    // exactly tmr sets. When every achiever is alternating, the one-set
    // overhead of the alternating factorization is forced and matches the
    // classified inversion number.
    let (order, diag) = match &first_nonalt {
        Some(w) => w.clone(),
        None => outcome.witness.clone(),
    };
    let g = diff_graph(t, &order);
    let m = g.adjacency_matrix().with_diag(diag);
    let family = system_from_matrix(&g, &m)?;
    if family.len() != cls.inv_value {
        return Err(Error::Internal(format!(
            "certificate has {} sets, classification says {}",
            family.len(),
            cls.inv_value
        )));
    }
    if !check_decycling(t.digraph(), &family) {
        return Err(Error::Internal("rank-engine certificate does not decycle".into()));
    }
    Ok((
        InvResult {
            value: cls.inv_value,
            certificate: family,
            method: Method::Rank,
        },
        scan.outcome,
    ))
}

/// Engine dispatch: tournaments go to the rank engine, everything else to
/// the breadth-first engine. In debug builds small tournaments are run
/// through both and the values compared.
pub fn inv(d: &Digraph) -> Result<InvResult> {
    if d.is_tournament() && d.n() <= TMR_MAX_N {
        let t = Tournament::try_from(d.clone())?;
        let res = inv_rank(&t)?;
        #[cfg(debug_assertions)]
        if t.n() < 6 {
            let bfs = inv_bfs(d)?;
            assert_eq!(res.value, bfs.value, "engine disagreement on {d:?}");
        }
        return Ok(res);
    }
    inv_bfs(d)
}
