//! Named verification suites and search drivers over the two engines.
//!
//! Suites check structural statements on exhaustive or sampled instance
//! streams and report violations with full payloads (codes, matrices,
//! orderings), so a finding can be re-checked by hand. Searches scan
//! canonical instance spaces for interesting examples and report hits the
//! same way. Every finding is re-verified from its serialized form before
//! a report is finalized, and [`replay`] re-verifies a report that was
//! loaded back from disk.

use crate::digraph::{
    dijoin, enumerate_canonical, kjoin, Digraph, SetFamily, Tournament, VertexOrder, VertexSet,
};
use crate::error::{Error, Result};
use crate::format::{parse_digraph, parse_tournament_code, print_digraph, print_tournament_code};
use crate::gf2::{block_compose, staircase_conclusion, Gf2Matrix};
use crate::inversion::{
    check_decycling, inv_bfs, inv_rank, tmr, tmr_bounded, tmr_jobs, InvTable, TmrMode,
};
use crate::pairs::pair_count;
use crate::sample;
use crate::shard;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::BTreeMap;
use std::time::Instant;

/// A violation or a search hit, with enough payload to re-verify it from
/// scratch: instance encodings in the text formats, the relevant numbers,
/// and free-form detail (matrices, orderings, families).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Finding {
    pub label: String,
    pub instances: Vec<String>,
    pub values: BTreeMap<String, i64>,
    #[serde(default)]
    pub detail: serde_json::Value,
}

impl Finding {
    fn new(label: &str, instances: Vec<String>) -> Self {
        Finding {
            label: label.to_string(),
            instances,
            values: BTreeMap::new(),
            detail: serde_json::Value::Null,
        }
    }

    fn value(mut self, key: &str, v: i64) -> Self {
        self.values.insert(key.to_string(), v);
        self
    }

    fn detail(mut self, detail: serde_json::Value) -> Self {
        self.detail = detail;
        self
    }

    fn get(&self, key: &str) -> Result<i64> {
        self.values
            .get(key)
            .copied()
            .ok_or_else(|| Error::Internal(format!("finding lacks value {key:?}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: BTreeMap<String, u64>,
    pub seed: u64,
    pub instances_checked: u64,
    pub violations: Vec<Finding>,
    pub runtime_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub question: String,
    pub space_description: String,
    pub params: BTreeMap<String, u64>,
    pub seed: u64,
    pub instances_checked: u64,
    pub hits: Vec<Finding>,
    pub exhausted: bool,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    Suite(SuiteReport),
    Search(SearchReport),
}

impl Report {
    pub fn findings(&self) -> &[Finding] {
        match self {
            Report::Suite(s) => &s.violations,
            Report::Search(s) => &s.hits,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Report::Suite(s) => &s.suite,
            Report::Search(s) => &s.question,
        }
    }

    /// Exit-status semantics: a suite with violations or a search with hits
    /// is a discovery.
    pub fn has_findings(&self) -> bool {
        !self.findings().is_empty()
    }
}

fn params(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect()
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Re-verifies every finding of a freshly built report and hands it back;
/// a finding that fails to reproduce is an internal error.
fn finalize(report: Report) -> Result<Report> {
    for finding in report.findings() {
        if !recheck(report.name(), finding)? {
            return Err(Error::Internal(format!(
                "finding {:?} of {} did not re-verify",
                finding.label,
                report.name()
            )));
        }
    }
    Ok(report)
}

fn finalize_suite(report: SuiteReport) -> Result<SuiteReport> {
    match finalize(Report::Suite(report))? {
        Report::Suite(s) => Ok(s),
        Report::Search(_) => unreachable!(),
    }
}

fn finalize_search(report: SearchReport) -> Result<SearchReport> {
    match finalize(Report::Search(report))? {
        Report::Search(s) => Ok(s),
        Report::Suite(_) => unreachable!(),
    }
}

/// Canonical tournaments of every order up to `nmax`, paired with their
/// inversion numbers from the rank engine.
fn canonicals_with_inv(nmax: usize) -> Result<Vec<(Tournament, usize)>> {
    let mut out = Vec::new();
    for n in 1..=nmax {
        for t in enumerate_canonical(n)? {
            let value = inv_rank(&t)?.value;
            out.push((t, value));
        }
    }
    Ok(out)
}

/// Whether `inv(t) > k`, settled with as little classification work as
/// possible: a minimum above `k` is immediately conclusive, and only an
/// exact tie needs the diagonal classification.
fn inv_exceeds(t: &Tournament, k: usize, jobs: usize) -> Result<bool> {
    match tmr_bounded(t, k + 1, jobs)? {
        None => Ok(true),
        Some(outcome) if outcome.tmr < k => Ok(false),
        Some(_) => {
            let out = tmr_jobs(t, TmrMode::Classify, jobs)?;
            Ok(out.classification.expect("classified").inv_value > k)
        }
    }
}

/// Exact inversion number of a tournament with minimal classification
/// effort, using the parity of the minimum where it already decides.
fn inv_value_via_rank(t: &Tournament, jobs: usize) -> Result<usize> {
    let value = tmr_jobs(t, TmrMode::Value, jobs)?.tmr;
    if value == 0 || value % 2 == 1 {
        // Transitive, or the off-by-one case is excluded by parity.
        return Ok(value);
    }
    let out = tmr_jobs(t, TmrMode::Classify, jobs)?;
    Ok(out.classification.expect("classified").inv_value)
}

// ---------------------------------------------------------------------
// Suite: dijoin-growth
// ---------------------------------------------------------------------

/// For every pair of canonical tournaments with equal positive inversion
/// number at orders up to `(n1, n2)`, checks that the dijoin's inversion
/// number strictly exceeds it. For pairs of inversion number one the claim
/// is additionally checked directly: no single subset inversion decycles
/// the dijoin, over all subsets of the joined vertex set.
pub fn dijoin_growth(n1: usize, n2: usize, jobs: usize) -> Result<SuiteReport> {
    let start = Instant::now();
    if n1 + n2 > 9 {
        return Err(Error::LimitExceeded(format!(
            "dijoins on {} vertices exceed the rank engine budget",
            n1 + n2
        )));
    }
    let lefts: Vec<_> = canonicals_with_inv(n1)?
        .into_iter()
        .filter(|(_, k)| *k >= 1)
        .collect();
    let rights: Vec<_> = canonicals_with_inv(n2)?
        .into_iter()
        .filter(|(_, k)| *k >= 1)
        .collect();
    let mut violations = Vec::new();
    let mut checked = 0u64;
    for (d1, k1) in &lefts {
        for (d2, k2) in &rights {
            if k1 != k2 {
                continue;
            }
            let k = *k1;
            checked += 1;
            let joined = d1.dijoin(d2)?;
            if !inv_exceeds(&joined, k, jobs)? {
                let inv_joined = inv_value_via_rank(&joined, jobs)?;
                violations.push(
                    Finding::new(
                        "dijoin-growth",
                        vec![print_tournament_code(d1), print_tournament_code(d2)],
                    )
                    .value("k", k as i64)
                    .value("inv_dijoin", inv_joined as i64),
                );
            }
            if k == 1 {
                for xbits in 0..1u64 << joined.n() {
                    let x = VertexSet::from_bits(xbits);
                    if joined.invert(x)?.is_acyclic() {
                        violations.push(
                            Finding::new(
                                "single-inversion-decycles",
                                vec![print_tournament_code(d1), print_tournament_code(d2)],
                            )
                            .value("subset", xbits as i64),
                        );
                    }
                }
            }
        }
    }
    finalize_suite(SuiteReport {
        suite: "dijoin-growth".into(),
        params: params(&[("n1", n1 as u64), ("n2", n2 as u64)]),
        seed: 0,
        instances_checked: checked,
        violations,
        runtime_ms: elapsed_ms(start),
    })
}

// ---------------------------------------------------------------------
// Suite: rank-dichotomy
// ---------------------------------------------------------------------

fn dichotomy_violations(t: &Tournament, oracle_inv: usize) -> Vec<Finding> {
    let out = tmr(t, TmrMode::Classify).expect("within rank engine limits");
    let cls = out.classification.expect("classified");
    let code = print_tournament_code(t);
    let base = |label: &str| {
        Finding::new(label, vec![code.clone()])
            .value("inv", oracle_inv as i64)
            .value("tmr", out.tmr as i64)
            .value("all_zero_diag", i64::from(cls.all_achievers_zero_diag))
            .value("classified_inv", cls.inv_value as i64)
    };
    let mut violations = Vec::new();
    if oracle_inv != out.tmr && oracle_inv != out.tmr + 1 {
        violations.push(base("dichotomy-range"));
    }
    if oracle_inv == out.tmr + 1 && out.tmr % 2 != 0 {
        violations.push(base("parity"));
    }
    if cls.inv_value != oracle_inv {
        violations.push(base("classified-value"));
    }
    if out.tmr > 0 && (oracle_inv == out.tmr + 1) != cls.all_achievers_zero_diag {
        violations.push(base("zero-diag-iff"));
    }
    violations
}

/// Checks the two-value dichotomy, its parity condition, and the diagonal
/// classification against the breadth-first oracle: exhaustively over all
/// labelled tournaments for `n <= 5`, on `samples` seeded random
/// tournaments for `n` of 6 or 7.
pub fn rank_dichotomy(n: usize, samples: u64, seed: u64, jobs: usize) -> Result<SuiteReport> {
    let start = Instant::now();
    let (checked, violations) = if n <= 5 {
        let table = InvTable::build(n)?;
        let total = 1u64 << pair_count(n);
        let partials = shard::map_ranges(total, jobs, |range| {
            let mut violations = Vec::new();
            for code in range {
                let t = Tournament::from_code(n, code).expect("valid code");
                violations.extend(dichotomy_violations(&t, table.inv_of_code(code)));
            }
            violations
        });
        (total, partials.into_iter().flatten().collect())
    } else if n <= 7 {
        let partials = shard::map_ranges(samples, jobs, |range| {
            let mut violations = Vec::new();
            for i in range {
                let mut rng = sample::rng_for(seed, i);
                let t = sample::random_tournament(&mut rng, n);
                let oracle = inv_bfs(t.digraph()).expect("within oracle limits").value;
                violations.extend(dichotomy_violations(&t, oracle));
            }
            violations
        });
        (samples, partials.into_iter().flatten().collect())
    } else {
        return Err(Error::LimitExceeded(format!(
            "oracle cross-check is limited to 7 vertices, got {n}"
        )));
    };
    finalize_suite(SuiteReport {
        suite: "rank-dichotomy".into(),
        params: params(&[("n", n as u64), ("samples", if n <= 5 { 0 } else { samples })]),
        seed,
        instances_checked: checked,
        violations,
        runtime_ms: elapsed_ms(start),
    })
}

// ---------------------------------------------------------------------
// Suite: staircase
// ---------------------------------------------------------------------

fn random_staircase_instance(
    rng: &mut impl Rng,
    nmax: usize,
) -> (Gf2Matrix, Gf2Matrix, Gf2Matrix) {
    loop {
        let n = rng.gen_range(1..=nmax);
        let a = sample::random_symmetric(rng, n);
        let rank_a = a.rank();
        if rank_a + 1 > nmax {
            continue;
        }
        let m = rng.gen_range(rank_a + 1..=nmax);
        let b = sample::random_symmetric(rng, m);
        let c = sample::random_staircase(rng, n, m);
        return (a, b, c);
    }
}

/// Random symmetric block matrices with a staircase cross block and enough
/// columns on the right: asserts that at least one of the three structural
/// conclusions holds for each instance.
pub fn staircase_blocks(trials: u64, nmax: usize, seed: u64, jobs: usize) -> Result<SuiteReport> {
    let start = Instant::now();
    if nmax < 1 || nmax > 16 {
        return Err(Error::LimitExceeded("block sizes up to 16 only".into()));
    }
    let partials = shard::map_ranges(trials, jobs, |range| {
        let mut violations = Vec::new();
        for i in range {
            let mut rng = sample::rng_for(seed, i);
            let (a, b, c) = random_staircase_instance(&mut rng, nmax);
            let m = block_compose(&a, &b, &c).expect("consistent dimensions");
            match staircase_conclusion(&m, a.nrows(), b.nrows()) {
                Ok(_) => {}
                Err(Error::StaircaseConclusionViolated) => violations.push(
                    Finding::new("no-conclusion", Vec::new())
                        .value("n", a.nrows() as i64)
                        .value("m", b.nrows() as i64)
                        .detail(json!({
                            "a": a.row_strings(),
                            "b": b.row_strings(),
                            "c": c.row_strings(),
                        })),
                ),
                Err(e) => panic!("constructed instance rejected: {e}"),
            }
        }
        violations
    });
    finalize_suite(SuiteReport {
        suite: "staircase".into(),
        params: params(&[("trials", trials), ("nmax", nmax as u64)]),
        seed,
        instances_checked: trials,
        violations: partials.into_iter().flatten().collect(),
        runtime_ms: elapsed_ms(start),
    })
}

// ---------------------------------------------------------------------
// Suite: triangle-kjoin
// ---------------------------------------------------------------------

/// The iterated dijoin of `k` directed triangles has inversion number
/// exactly `k`: one inversion per block certifies the upper bound, the
/// rank engine provides the matching lower bound. `kmax` is capped at 3
/// (nine vertices).
pub fn triangle_kjoin(kmax: usize, jobs: usize) -> Result<SuiteReport> {
    let start = Instant::now();
    if kmax < 1 || kmax > 3 {
        return Err(Error::LimitExceeded(
            "the exact check is limited to at most three blocks".into(),
        ));
    }
    let triangle = Tournament::directed_triangle();
    let mut violations = Vec::new();
    for k in 1..=kmax {
        let parts: Vec<Digraph> = (0..k).map(|_| triangle.digraph().clone()).collect();
        let joined = Tournament::try_from(kjoin(&parts)?)?;
        let code = print_tournament_code(&joined);

        // One inversion inside each block flips its triangle; cross edges
        // are untouched, so the result is a dijoin of acyclic parts.
        let cert = SetFamily::new(
            (0..k)
                .map(|i| [3 * i, 3 * i + 1].into_iter().collect())
                .collect(),
        );
        if cert.len() != k || !check_decycling(joined.digraph(), &cert) {
            violations.push(
                Finding::new("blockwise-certificate", vec![code.clone()]).value("k", k as i64),
            );
        }

        let inv = if k <= 2 {
            let rank = inv_rank(&joined)?;
            let bfs = inv_bfs(joined.digraph())?;
            if rank.value != bfs.value {
                violations.push(
                    Finding::new("engine-disagreement", vec![code.clone()])
                        .value("rank", rank.value as i64)
                        .value("bfs", bfs.value as i64),
                );
            }
            rank.value
        } else {
            inv_value_via_rank(&joined, jobs)?
        };
        if inv != k {
            violations.push(
                Finding::new("kjoin-value", vec![code.clone()])
                    .value("k", k as i64)
                    .value("inv", inv as i64),
            );
        }
    }
    finalize_suite(SuiteReport {
        suite: "triangle-kjoin".into(),
        params: params(&[("kmax", kmax as u64)]),
        seed: 0,
        instances_checked: kmax as u64,
        violations,
        runtime_ms: elapsed_ms(start),
    })
}

// ---------------------------------------------------------------------
// Suite: reductions
// ---------------------------------------------------------------------

fn force_source(d: &Digraph, v: usize) -> Digraph {
    let edges: Vec<(usize, usize)> = d
        .edges()
        .into_iter()
        .filter(|&(_, b)| b != v)
        .collect();
    Digraph::from_edges(d.n(), &edges).expect("subset of valid edges")
}

fn duplicate_vertex(rng: &mut impl Rng, base: &Digraph, u: usize) -> Digraph {
    let n = base.n();
    let mut edges = base.edges();
    for w in base.out_neighbours(u).iter() {
        edges.push((n, w));
    }
    for w in base.in_neighbours(u).iter() {
        edges.push((w, n));
    }
    match rng.gen_range(0..3) {
        0 => {}
        1 => edges.push((u, n)),
        _ => edges.push((n, u)),
    }
    Digraph::from_edges(n + 1, &edges).expect("twin construction is consistent")
}

/// Bundles the structural reduction checks: the greedy decycling family is
/// small and works, the tournament completion preserves the inversion
/// number, and deleting a source, sink or twin leaves the inversion number
/// unchanged (all oracle-checked).
pub fn reductions(n: usize, samples: u64, seed: u64, jobs: usize) -> Result<SuiteReport> {
    let start = Instant::now();
    if n < 1 || n > 10 {
        return Err(Error::LimitExceeded("vertex budget is 1..=10".into()));
    }
    let oracle_n = n.min(6);
    let oracle_samples = samples.min(1000);

    // Greedy decycling across the full size budget.
    let greedy = shard::map_ranges(samples, jobs, |range| {
        let mut violations = Vec::new();
        for i in range {
            let mut rng = sample::rng_for(seed, i);
            let nv = rng.gen_range(1..=n);
            let d = sample::random_digraph(&mut rng, nv);
            let f = d.greedy_decycling();
            let ok = f.len() <= nv - 1 && check_decycling(&d, &f);
            if !ok {
                violations.push(
                    Finding::new("greedy-decycling", vec![print_digraph(&d)])
                        .value("family_size", f.len() as i64),
                );
            }
        }
        violations
    });

    // Completion, source/sink deletion and twin deletion are oracle-checked
    // at small orders.
    let rest = shard::map_ranges(oracle_samples, jobs, |range| {
        let mut violations = Vec::new();
        let mut checked = 0u64;
        for i in range {
            let mut rng = sample::rng_for(seed, (1 << 32) | i);

            // Tournament completion with an optimal family from the oracle.
            let nv = rng.gen_range(1..=oracle_n);
            let d = sample::random_digraph(&mut rng, nv);
            let base = inv_bfs(&d).expect("within oracle limits");
            let completed = tournament_completion_checked(&d, &base.certificate);
            checked += 1;
            match completed {
                Ok(t) => {
                    let inv_t = inv_bfs(t.digraph()).expect("within oracle limits").value;
                    if inv_t != base.value {
                        violations.push(
                            Finding::new("tournament-completion", vec![print_digraph(&d)])
                                .value("inv", base.value as i64)
                                .value("inv_completed", inv_t as i64),
                        );
                    }
                }
                Err(msg) => violations.push(
                    Finding::new("tournament-completion", vec![print_digraph(&d)])
                        .value("inv", base.value as i64)
                        .detail(json!({ "failure": msg })),
                ),
            }

            // Source or sink deletion.
            let nv = rng.gen_range(2..=oracle_n.max(2));
            let mut d = sample::random_digraph(&mut rng, nv);
            if rng.gen_bool(0.5) {
                let v = rng.gen_range(0..nv);
                d = force_source(&d, v);
            }
            let (sources, sinks) = d.sources_sinks();
            if let Some(v) = sources.iter().chain(sinks.iter()).next() {
                checked += 1;
                let whole = inv_bfs(&d).expect("oracle").value;
                let reduced = inv_bfs(&d.remove_vertex(v)).expect("oracle").value;
                if whole != reduced {
                    violations.push(
                        Finding::new("source-sink-deletion", vec![print_digraph(&d)])
                            .value("vertex", v as i64)
                            .value("inv", whole as i64)
                            .value("inv_deleted", reduced as i64),
                    );
                }
            }

            // Twin deletion on a constructed twin pair.
            let nv = rng.gen_range(1..=oracle_n - 1);
            let base_d = sample::random_digraph(&mut rng, nv);
            let u = rng.gen_range(0..nv);
            let twinned = duplicate_vertex(&mut rng, &base_d, u);
            checked += 1;
            if !twinned.twins().contains(&(u.min(nv), u.max(nv))) {
                violations.push(
                    Finding::new("twin-construction", vec![print_digraph(&twinned)])
                        .value("u", u as i64)
                        .value("v", nv as i64),
                );
            } else {
                let whole = inv_bfs(&twinned).expect("oracle").value;
                let reduced = inv_bfs(&twinned.remove_vertex(nv)).expect("oracle").value;
                if whole != reduced {
                    violations.push(
                        Finding::new("twin-deletion", vec![print_digraph(&twinned)])
                            .value("vertex", nv as i64)
                            .value("inv", whole as i64)
                            .value("inv_deleted", reduced as i64),
                    );
                }
            }
        }
        (checked, violations)
    });

    let mut violations: Vec<Finding> = greedy.into_iter().flatten().collect();
    let mut checked = samples;
    for (c, v) in rest {
        checked += c;
        violations.extend(v);
    }

    // Fixed instances: a triangle plus an isolated vertex loses nothing by
    // deleting the isolated vertex, and the triangle has no twin pair at
    // all (each pair differs in its outside out-neighbourhood).
    let triangle = Tournament::directed_triangle();
    let with_sink = dijoin(triangle.digraph(), &Digraph::empty(0))?;
    let padded = Digraph::from_edges(4, &with_sink.edges())?;
    checked += 2;
    if inv_bfs(&padded)?.value != inv_bfs(&padded.remove_vertex(3))?.value {
        violations.push(Finding::new("source-sink-deletion", vec![print_digraph(&padded)]).value("vertex", 3));
    }
    if !triangle.twins().is_empty() {
        violations.push(Finding::new("triangle-twins", vec![print_tournament_code(&triangle)]));
    }

    finalize_suite(SuiteReport {
        suite: "reductions".into(),
        params: params(&[("n", n as u64), ("samples", samples)]),
        seed,
        instances_checked: checked,
        violations,
        runtime_ms: elapsed_ms(start),
    })
}

fn tournament_completion_checked(
    d: &Digraph,
    family: &SetFamily,
) -> std::result::Result<Tournament, String> {
    let t = crate::digraph::tournament_completion(d, family).map_err(|e| e.to_string())?;
    for (u, v) in d.edges() {
        if !t.has_edge(u, v) {
            return Err(format!("edge {u}->{v} lost in completion"));
        }
    }
    if !check_decycling(t.digraph(), family) {
        return Err("family no longer decycles the completion".into());
    }
    Ok(t)
}

// ---------------------------------------------------------------------
// Searches
// ---------------------------------------------------------------------

/// Scans ordered pairs of canonical non-transitive tournaments whose
/// inversion number equals the rank minimum, looking for a dijoin whose
/// inversion number beats the sum.
pub fn search_inv_eq_tmr_pairs(nmax: usize, jobs: usize) -> Result<SearchReport> {
    let start = Instant::now();
    if 2 * nmax > 9 {
        return Err(Error::LimitExceeded(
            "pair scans need dijoins within nine vertices".into(),
        ));
    }
    let mut pool = Vec::new();
    for n in 1..=nmax {
        for t in enumerate_canonical(n)? {
            let out = tmr(&t, TmrMode::Classify)?;
            let cls = out.classification.expect("classified");
            if out.tmr >= 1 && cls.inv_value == out.tmr {
                pool.push((t, out.tmr));
            }
        }
    }
    let mut hits = Vec::new();
    let mut checked = 0u64;
    for (d1, k1) in &pool {
        for (d2, k2) in &pool {
            checked += 1;
            let joined = d1.dijoin(d2)?;
            let sum = k1 + k2;
            // inv >= sum is the expected outcome; anything smaller is a hit.
            if !inv_exceeds(&joined, sum - 1, jobs)? {
                let inv_joined = inv_value_via_rank(&joined, jobs)?;
                hits.push(
                    Finding::new(
                        "strictly-subadditive-pair",
                        vec![print_tournament_code(d1), print_tournament_code(d2)],
                    )
                    .value("inv1", *k1 as i64)
                    .value("inv2", *k2 as i64)
                    .value("inv_dijoin", inv_joined as i64),
                );
            }
        }
    }
    finalize_search(SearchReport {
        question: "inv-eq-tmr-pairs".into(),
        space_description: format!(
            "ordered pairs of canonical non-transitive tournaments with inv = rank minimum, orders up to {nmax}"
        ),
        params: params(&[("nmax", nmax as u64)]),
        seed: 0,
        instances_checked: checked,
        hits,
        exhausted: true,
        runtime_ms: elapsed_ms(start),
    })
}

/// Scans ordered pairs of canonical tournaments for a dijoin whose rank
/// minimum is strictly below the sum of the parts' minima.
pub fn search_tmr_subadditivity(nmax: usize, jobs: usize) -> Result<SearchReport> {
    let start = Instant::now();
    if 2 * nmax > 9 {
        return Err(Error::LimitExceeded(
            "pair scans need dijoins within nine vertices".into(),
        ));
    }
    let mut pool = Vec::new();
    for n in 1..=nmax {
        for t in enumerate_canonical(n)? {
            let value = tmr(&t, TmrMode::Value)?.tmr;
            pool.push((t, value));
        }
    }
    let mut hits = Vec::new();
    let mut checked = 0u64;
    for (d1, t1) in &pool {
        for (d2, t2) in &pool {
            checked += 1;
            let sum = t1 + t2;
            if sum == 0 {
                continue; // the minimum cannot be negative
            }
            let joined = d1.dijoin(d2)?;
            if let Some(outcome) = tmr_bounded(&joined, sum, jobs)? {
                hits.push(
                    Finding::new(
                        "tmr-subadditive",
                        vec![print_tournament_code(d1), print_tournament_code(d2)],
                    )
                    .value("tmr1", *t1 as i64)
                    .value("tmr2", *t2 as i64)
                    .value("tmr_dijoin", outcome.tmr as i64),
                );
            }
        }
    }
    finalize_search(SearchReport {
        question: "tmr-subadditivity".into(),
        space_description: format!(
            "ordered pairs of canonical tournaments of orders up to {nmax}"
        ),
        params: params(&[("nmax", nmax as u64)]),
        seed: 0,
        instances_checked: checked,
        hits,
        exhausted: true,
        runtime_ms: elapsed_ms(start),
    })
}

/// For every canonical tournament `D` up to `nmax`, checks whether joining
/// a directed triangle on either side raises the rank minimum by exactly
/// one. Deviations in either direction are hits.
pub fn search_triangle_tmr_step(nmax: usize, jobs: usize) -> Result<SearchReport> {
    let start = Instant::now();
    if nmax + 3 > 9 {
        return Err(Error::LimitExceeded(
            "triangle joins must stay within nine vertices".into(),
        ));
    }
    let triangle = Tournament::directed_triangle();
    let mut hits = Vec::new();
    let mut checked = 0u64;
    for n in 1..=nmax {
        for t in enumerate_canonical(n)? {
            let base = tmr(&t, TmrMode::Value)?.tmr;
            for (side, joined) in [(0u8, t.dijoin(&triangle)?), (1u8, triangle.dijoin(&t)?)] {
                checked += 1;
                let found = match tmr_bounded(&joined, base + 2, jobs)? {
                    Some(outcome) => outcome.tmr,
                    None => base + 2, // at least; already a deviation
                };
                if found != base + 1 {
                    hits.push(
                        Finding::new("tmr-step-deviation", vec![print_tournament_code(&t)])
                            .value("tmr", base as i64)
                            .value("side", side as i64)
                            .value("tmr_joined", found as i64),
                    );
                }
            }
        }
    }
    finalize_search(SearchReport {
        question: "triangle-tmr-step".into(),
        space_description: format!(
            "canonical tournaments of orders up to {nmax}, joined with a directed triangle on each side"
        ),
        params: params(&[("nmax", nmax as u64)]),
        seed: 0,
        instances_checked: checked,
        hits,
        exhausted: true,
        runtime_ms: elapsed_ms(start),
    })
}

/// Scans canonical tournaments for the off-by-one case where the inversion
/// number exceeds the rank minimum. Every hit is paired with small
/// non-transitive tournaments to confirm that its dijoins save at least
/// one inversion.
pub fn search_inv_above_tmr(nmax: usize, jobs: usize) -> Result<SearchReport> {
    let start = Instant::now();
    if nmax > 6 {
        return Err(Error::LimitExceeded(
            "classification scans are limited to six vertices here".into(),
        ));
    }
    let mut hits = Vec::new();
    let mut checked = 0u64;
    let mut found: Vec<(Tournament, usize, usize)> = Vec::new();
    for n in 1..=nmax {
        for t in enumerate_canonical(n)? {
            checked += 1;
            let out = tmr(&t, TmrMode::Classify)?;
            let cls = out.classification.expect("classified");
            if cls.inv_value == out.tmr + 1 {
                hits.push(
                    Finding::new("inv-above-tmr", vec![print_tournament_code(&t)])
                        .value("inv", cls.inv_value as i64)
                        .value("tmr", out.tmr as i64),
                );
                found.push((t, cls.inv_value, out.tmr));
            }
        }
    }
    // Each hit must make its dijoins strictly cheaper than the sum.
    for (d1, inv1, _) in &found {
        for n2 in 1..=(9usize.saturating_sub(d1.n())) {
            for d2 in enumerate_canonical(n2.min(4))? {
                if d2.is_acyclic() {
                    continue;
                }
                let inv2 = inv_value_via_rank(&d2, jobs)?;
                let joined = d1.dijoin(&d2)?;
                checked += 1;
                if inv_exceeds(&joined, inv1 + inv2 - 1, jobs)? {
                    hits.push(
                        Finding::new(
                            "dijoin-savings-violated",
                            vec![print_tournament_code(d1), print_tournament_code(&d2)],
                        )
                        .value("inv1", *inv1 as i64)
                        .value("inv2", inv2 as i64),
                    );
                }
            }
        }
    }
    finalize_search(SearchReport {
        question: "inv-above-tmr".into(),
        space_description: format!(
            "canonical tournaments of orders up to {nmax}; absence of hits certifies inv = tmr throughout"
        ),
        params: params(&[("nmax", nmax as u64)]),
        seed: 0,
        instances_checked: checked,
        hits,
        exhausted: true,
        runtime_ms: elapsed_ms(start),
    })
}

// ---------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplayOutcome {
    pub rechecked: usize,
    pub confirmed: usize,
    pub failed: Vec<String>,
}

impl ReplayOutcome {
    pub fn all_confirmed(&self) -> bool {
        self.failed.is_empty()
    }
}

/// Re-verifies every finding of a loaded report from its serialized data.
pub fn replay(report: &Report) -> Result<ReplayOutcome> {
    let mut outcome = ReplayOutcome {
        rechecked: 0,
        confirmed: 0,
        failed: Vec::new(),
    };
    for finding in report.findings() {
        outcome.rechecked += 1;
        if recheck(report.name(), finding)? {
            outcome.confirmed += 1;
        } else {
            outcome.failed.push(format!(
                "{} / {}: {:?}",
                report.name(),
                finding.label,
                finding.instances
            ));
        }
    }
    Ok(outcome)
}

fn parse_instance_tournament(finding: &Finding, idx: usize) -> Result<Tournament> {
    let s = finding
        .instances
        .get(idx)
        .ok_or_else(|| Error::Internal("finding lacks an instance".into()))?;
    parse_tournament_code(s)
}

fn parse_instance_digraph(finding: &Finding, idx: usize) -> Result<Digraph> {
    let s = finding
        .instances
        .get(idx)
        .ok_or_else(|| Error::Internal("finding lacks an instance".into()))?;
    parse_digraph(s)
}

fn matrix_from_detail(detail: &serde_json::Value, key: &str) -> Result<Gf2Matrix> {
    let rows: Vec<String> = detail
        .get(key)
        .and_then(|v| serde_json::from_value(v.clone()).ok())
        .ok_or_else(|| Error::Internal(format!("detail lacks matrix {key:?}")))?;
    let refs: Vec<&str> = rows.iter().map(|s| s.as_str()).collect();
    Ok(Gf2Matrix::from_bit_strings(&refs))
}

/// Recomputes a finding from its payload and reports whether it still
/// holds. Dispatch is by report name and finding label.
pub fn recheck(owner: &str, finding: &Finding) -> Result<bool> {
    match (owner, finding.label.as_str()) {
        ("dijoin-growth", "dijoin-growth") | ("inv-eq-tmr-pairs", "strictly-subadditive-pair") => {
            let d1 = parse_instance_tournament(finding, 0)?;
            let d2 = parse_instance_tournament(finding, 1)?;
            let joined = d1.dijoin(&d2)?;
            let inv_joined = inv_value_via_rank(&joined, 1)?;
            match owner {
                "dijoin-growth" => {
                    let k = finding.get("k")? as usize;
                    Ok(inv_joined as i64 == finding.get("inv_dijoin")?
                        && inv_value_via_rank(&d1, 1)? == k
                        && inv_value_via_rank(&d2, 1)? == k
                        && inv_joined <= k)
                }
                _ => {
                    let inv1 = inv_value_via_rank(&d1, 1)?;
                    let inv2 = inv_value_via_rank(&d2, 1)?;
                    Ok(inv1 as i64 == finding.get("inv1")?
                        && inv2 as i64 == finding.get("inv2")?
                        && inv_joined as i64 == finding.get("inv_dijoin")?
                        && inv_joined < inv1 + inv2)
                }
            }
        }
        ("dijoin-growth", "single-inversion-decycles") => {
            let d1 = parse_instance_tournament(finding, 0)?;
            let d2 = parse_instance_tournament(finding, 1)?;
            let joined = d1.dijoin(&d2)?;
            let x = VertexSet::from_bits(finding.get("subset")? as u64);
            Ok(joined.invert(x)?.is_acyclic())
        }
        ("rank-dichotomy", label) => {
            let t = parse_instance_tournament(finding, 0)?;
            let oracle = inv_bfs(t.digraph())?.value;
            let out = tmr(&t, TmrMode::Classify)?;
            let cls = out.classification.expect("classified");
            if oracle as i64 != finding.get("inv")? || out.tmr as i64 != finding.get("tmr")? {
                return Ok(false);
            }
            Ok(match label {
                "dichotomy-range" => oracle != out.tmr && oracle != out.tmr + 1,
                "parity" => oracle == out.tmr + 1 && out.tmr % 2 != 0,
                "classified-value" => cls.inv_value != oracle,
                "zero-diag-iff" => {
                    out.tmr > 0 && (oracle == out.tmr + 1) != cls.all_achievers_zero_diag
                }
                _ => false,
            })
        }
        ("staircase", "no-conclusion") => {
            let a = matrix_from_detail(&finding.detail, "a")?;
            let b = matrix_from_detail(&finding.detail, "b")?;
            let c = matrix_from_detail(&finding.detail, "c")?;
            let m = block_compose(&a, &b, &c)?;
            Ok(matches!(
                staircase_conclusion(&m, a.nrows(), b.nrows()),
                Err(Error::StaircaseConclusionViolated)
            ))
        }
        ("triangle-kjoin", "kjoin-value") => {
            let t = parse_instance_tournament(finding, 0)?;
            let inv = inv_value_via_rank(&t, 1)?;
            Ok(inv as i64 == finding.get("inv")? && inv as i64 != finding.get("k")?)
        }
        ("triangle-kjoin", "blockwise-certificate") => {
            let t = parse_instance_tournament(finding, 0)?;
            let k = finding.get("k")? as usize;
            let cert = SetFamily::new(
                (0..k)
                    .map(|i| [3 * i, 3 * i + 1].into_iter().collect())
                    .collect(),
            );
            Ok(!check_decycling(t.digraph(), &cert))
        }
        ("triangle-kjoin", "engine-disagreement") => {
            let t = parse_instance_tournament(finding, 0)?;
            Ok(inv_rank(&t)?.value != inv_bfs(t.digraph())?.value)
        }
        ("reductions", "greedy-decycling") => {
            let d = parse_instance_digraph(finding, 0)?;
            let f = d.greedy_decycling();
            Ok(f.len() > d.n().saturating_sub(1) || !check_decycling(&d, &f))
        }
        ("reductions", "tournament-completion") => {
            let d = parse_instance_digraph(finding, 0)?;
            let base = inv_bfs(&d)?;
            Ok(match tournament_completion_checked(&d, &base.certificate) {
                Ok(t) => inv_bfs(t.digraph())?.value != base.value,
                Err(_) => true,
            })
        }
        ("reductions", "source-sink-deletion") | ("reductions", "twin-deletion") => {
            let d = parse_instance_digraph(finding, 0)?;
            let v = finding.get("vertex")? as usize;
            Ok(inv_bfs(&d)?.value != inv_bfs(&d.remove_vertex(v))?.value)
        }
        ("reductions", "twin-construction") => {
            let d = parse_instance_digraph(finding, 0)?;
            let u = finding.get("u")? as usize;
            let v = finding.get("v")? as usize;
            Ok(!d.twins().contains(&(u.min(v), u.max(v))))
        }
        ("reductions", "triangle-twins") => {
            Ok(!Tournament::directed_triangle().twins().is_empty())
        }
        ("tmr-subadditivity", "tmr-subadditive") => {
            let d1 = parse_instance_tournament(finding, 0)?;
            let d2 = parse_instance_tournament(finding, 1)?;
            let t1 = tmr(&d1, TmrMode::Value)?.tmr;
            let t2 = tmr(&d2, TmrMode::Value)?.tmr;
            let tj = tmr(&d1.dijoin(&d2)?, TmrMode::Value)?.tmr;
            Ok(t1 as i64 == finding.get("tmr1")?
                && t2 as i64 == finding.get("tmr2")?
                && tj as i64 == finding.get("tmr_dijoin")?
                && tj < t1 + t2)
        }
        ("triangle-tmr-step", "tmr-step-deviation") => {
            let t = parse_instance_tournament(finding, 0)?;
            let base = tmr(&t, TmrMode::Value)?.tmr;
            let triangle = Tournament::directed_triangle();
            let joined = if finding.get("side")? == 0 {
                t.dijoin(&triangle)?
            } else {
                triangle.dijoin(&t)?
            };
            let found = match tmr_bounded(&joined, base + 2, 1)? {
                Some(outcome) => outcome.tmr,
                None => base + 2,
            };
            Ok(base as i64 == finding.get("tmr")?
                && found as i64 == finding.get("tmr_joined")?
                && found != base + 1)
        }
        ("inv-above-tmr", "inv-above-tmr") => {
            let t = parse_instance_tournament(finding, 0)?;
            let out = tmr(&t, TmrMode::Classify)?;
            let cls = out.classification.expect("classified");
            Ok(out.tmr as i64 == finding.get("tmr")?
                && cls.inv_value as i64 == finding.get("inv")?
                && cls.inv_value == out.tmr + 1)
        }
        ("inv-above-tmr", "dijoin-savings-violated") => {
            let d1 = parse_instance_tournament(finding, 0)?;
            let d2 = parse_instance_tournament(finding, 1)?;
            let inv1 = finding.get("inv1")? as usize;
            let inv2 = finding.get("inv2")? as usize;
            inv_exceeds(&d1.dijoin(&d2)?, inv1 + inv2 - 1, 1)
        }
        _ => Err(Error::Internal(format!(
            "no recheck rule for {owner} / {}",
            finding.label
        ))),
    }
}

// ---------------------------------------------------------------------
// Block-structure consistency of minimum-rank achievers of a dijoin
// ---------------------------------------------------------------------

/// For a dijoin and an ordering, the blockwise reordering: first copy's
/// vertices by their position, then the second copy's.
pub fn blockwise_perm(order: &VertexOrder, n1: usize) -> Vec<usize> {
    let n = order.n();
    let mut firsts: Vec<usize> = (0..n1).collect();
    firsts.sort_by_key(|&v| order.position(v));
    let mut seconds: Vec<usize> = (n1..n).collect();
    seconds.sort_by_key(|&v| order.position(v));
    let mut perm = vec![0; n];
    for (pos, &v) in firsts.iter().chain(seconds.iter()).enumerate() {
        perm[v] = pos;
    }
    perm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::diff_graph;
    use crate::gf2::is_staircase;

    #[test]
    fn dijoin_growth_small() {
        let report = dijoin_growth(3, 3, 1).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        // Exactly one non-transitive canonical pair at order three.
        assert_eq!(report.instances_checked, 1);
    }

    #[test]
    fn rank_dichotomy_exhaustive_small() {
        for n in 1..=4 {
            let report = rank_dichotomy(n, 0, 0, 1).unwrap();
            assert!(report.passed(), "{:?}", report.violations);
            assert_eq!(report.instances_checked, 1 << pair_count(n));
        }
    }

    #[test]
    fn rank_dichotomy_sampled() {
        let report = rank_dichotomy(6, 40, 7, 2).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.instances_checked, 40);
    }

    #[test]
    fn staircase_suite_small() {
        let report = staircase_blocks(2000, 8, 11, 2).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.instances_checked, 2000);
    }

    #[test]
    fn triangle_kjoin_two_blocks() {
        let report = triangle_kjoin(2, 1).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert!(triangle_kjoin(4, 1).is_err());
    }

    #[test]
    fn reductions_small() {
        let report = reductions(6, 120, 3, 2).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert!(report.instances_checked >= 120);
    }

    #[test]
    fn searches_exhaust_small_spaces() {
        let r = search_inv_eq_tmr_pairs(3, 1).unwrap();
        assert!(r.exhausted && r.hits.is_empty());
        // Only the directed triangle qualifies at order three.
        assert_eq!(r.instances_checked, 1);

        let r = search_tmr_subadditivity(3, 1).unwrap();
        assert!(r.exhausted && r.hits.is_empty());
        assert_eq!(r.instances_checked, 16);

        let r = search_triangle_tmr_step(2, 1).unwrap();
        assert!(r.exhausted && r.hits.is_empty());

        let r = search_inv_above_tmr(4, 1).unwrap();
        assert!(r.exhausted && r.hits.is_empty());
    }

    #[test]
    fn empty_search_space_is_exhausted() {
        // All tournaments on up to two vertices are transitive.
        let r = search_inv_eq_tmr_pairs(2, 1).unwrap();
        assert!(r.exhausted);
        assert_eq!(r.instances_checked, 0);
        assert!(r.hits.is_empty());
    }

    #[test]
    fn report_roundtrips_through_json() {
        let report = Report::Suite(rank_dichotomy(3, 0, 0, 1).unwrap());
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back.name(), "rank-dichotomy");
        let outcome = replay(&back).unwrap();
        assert_eq!(outcome.rechecked, 0);
        assert!(outcome.all_confirmed());
    }

    #[test]
    fn recheck_confirms_a_reproducible_finding() {
        // Manufactured finding whose payload genuinely reproduces: the
        // empty subset trivially leaves an acyclic dijoin of two
        // single-vertex tournaments.
        let f = Finding::new(
            "single-inversion-decycles",
            vec!["t:1:0".into(), "t:1:0".into()],
        )
        .value("subset", 0);
        assert!(recheck("dijoin-growth", &f).unwrap());
    }

    #[test]
    fn recheck_rejects_a_bogus_finding() {
        // No single inversion decycles the dijoin of two triangles.
        let c3 = print_tournament_code(&Tournament::directed_triangle());
        for subset in [0i64, 0b11, 0b111000] {
            let f = Finding::new("single-inversion-decycles", vec![c3.clone(), c3.clone()])
                .value("subset", subset);
            assert!(!recheck("dijoin-growth", &f).unwrap());
        }

        // A dichotomy violation that does not reproduce.
        let f = Finding::new("dichotomy-range", vec![c3.clone()])
            .value("inv", 1)
            .value("tmr", 1);
        assert!(!recheck("rank-dichotomy", &f).unwrap());

        // Claimed strict subadditivity that is false.
        let f = Finding::new("tmr-subadditive", vec![c3.clone(), c3])
            .value("tmr1", 1)
            .value("tmr2", 1)
            .value("tmr_dijoin", 2);
        assert!(!recheck("tmr-subadditivity", &f).unwrap());
    }

    #[test]
    fn replay_reports_failures() {
        let mut report = rank_dichotomy(3, 0, 0, 1).unwrap();
        report.violations.push(
            Finding::new(
                "parity",
                vec![print_tournament_code(&Tournament::directed_triangle())],
            )
            .value("inv", 1)
            .value("tmr", 1),
        );
        let outcome = replay(&Report::Suite(report)).unwrap();
        assert_eq!(outcome.rechecked, 1);
        assert_eq!(outcome.confirmed, 0);
        assert_eq!(outcome.failed.len(), 1);
    }

    #[test]
    fn block_structure_of_triangle_pair_achievers() {
        // Every minimum-rank achiever of the dijoin of two triangles, put
        // in the blockwise ordering, splits into a staircase cross block
        // and diagonal blocks of rank one; the whole matrix has rank two.
        let triangle = Tournament::directed_triangle();
        let joined = triangle.dijoin(&triangle).unwrap();
        let minimum = tmr(&joined, TmrMode::Value).unwrap().tmr;
        assert_eq!(minimum, 2);
        let n = joined.n();
        let mut achievers = 0;
        for order in VertexOrder::all(n) {
            let g = diff_graph(&joined, &order);
            let adj = g.adjacency_matrix();
            for diag in 0..1u64 << n {
                let m = adj.with_diag(diag);
                if m.rank() != minimum {
                    continue;
                }
                achievers += 1;
                let perm = blockwise_perm(&order, 3);
                let mp = m.permuted(&perm);
                let a = mp.submatrix(0..3, 0..3);
                let b = mp.submatrix(3..6, 3..6);
                let c = mp.submatrix(0..3, 3..6);
                assert!(is_staircase(&c));
                assert_eq!(a.rank(), 1);
                assert_eq!(b.rank(), 1);
            }
        }
        assert!(achievers > 0);
    }
}
