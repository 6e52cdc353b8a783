//! Desk-scale verification suites.
//!
//! Each suite builds its instances from explicit seeds, checks one bound or
//! structural claim per instance, and returns a [`VerificationReport`].
//! Bounds are compared in exact rational arithmetic.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::census::{census_k4, BipartiteColouring};
use crate::constructions::{closeness_to_split_exact, make_bipartite_mindeg, make_multicolour_cycle, make_pk, make_random, make_split};
use crate::error::{Error, Result};
use crate::graph::{balance_profile, is_locally_balanced, Colour, ColouredCompleteGraph, Rational};
use crate::io::{bipartite_to_json, graph_to_json};
use crate::multicolour::{min_unibalanced_subgraph_size, MinUnibalanced, DEFAULT_SUBSET_BUDGET};
use crate::patterns::{find_pattern_blowup_exhaustive, pattern_by_name, DEFAULT_EXHAUSTIVE_BUDGET};

type Big = Ratio<i128>;

fn big(q: Rational) -> Big {
    Big::new(*q.numer() as i128, *q.denom() as i128)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub instance: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colouring: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub instance: String,
    pub bound: String,
    pub observed: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub instance: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub suite: String,
    /// Record-only suites fail only in strict mode.
    pub strict: bool,
    pub instances: usize,
    pub failures: Vec<Failure>,
    pub bounds: Vec<BoundCheck>,
    pub skipped: Vec<Skipped>,
    pub seeds: Vec<u64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    fn new(suite: &str, strict: bool) -> Self {
        Self {
            suite: suite.to_string(),
            strict,
            instances: 0,
            failures: Vec::new(),
            bounds: Vec::new(),
            skipped: Vec::new(),
            seeds: Vec::new(),
            pass: false,
            runtime_ms: None,
            elapsed: Duration::ZERO,
        }
    }

    fn bound(&mut self, instance: String, bound: impl ToString, observed: impl ToString, holds: bool, g: Option<&ColouredCompleteGraph>) {
        if !holds {
            self.failures.push(Failure {
                instance: instance.clone(),
                detail: format!("observed {} violates bound {}", observed.to_string(), bound.to_string()),
                colouring: g.map(|g| graph_to_json(g, true)),
            });
        }
        self.bounds.push(BoundCheck {
            instance,
            bound: bound.to_string(),
            observed: observed.to_string(),
            holds,
        });
    }

    /// Hard suites pass iff nothing failed; record-only suites always pass
    /// unless strict.
    fn finish(mut self, hard: bool, started: Instant) -> Self {
        self.pass = self.failures.is_empty() || !(hard || self.strict);
        self.elapsed = started.elapsed();
        self
    }
}

/// A host graph with a label and the seed that produced it, if any.
#[derive(Clone, Debug)]
pub struct Instance {
    pub label: String,
    pub graph: ColouredCompleteGraph,
    pub seed: Option<u64>,
}

impl Instance {
    pub fn new(label: impl Into<String>, graph: ColouredCompleteGraph, seed: Option<u64>) -> Self {
        Self { label: label.into(), graph, seed }
    }
}

/// Largest number of rejected candidates per sampled instance.
pub const REJECTION_BUDGET: u64 = 10_000;

/// Tries `make_random(n, r, s)` for `s = start, start+1, ...` until the
/// colouring is locally `eps`-balanced. Returns the graph and its seed.
pub fn sample_locally_balanced(n: usize, r: u8, eps: Rational, start: u64) -> Result<(ColouredCompleteGraph, u64)> {
    for k in 0..REJECTION_BUDGET {
        let seed = start.wrapping_add(k);
        let g = make_random(n, r, seed)?;
        if is_locally_balanced(&g, eps) {
            return Ok((g, seed));
        }
    }
    Err(Error::ResamplingExhausted(REJECTION_BUDGET as usize))
}

/// `count` locally `eps`-balanced random colourings on `n` vertices, with
/// candidate seeds scanned upward from `seed`.
pub fn balanced_instances(n: usize, eps: Rational, count: usize, seed: u64) -> Result<Vec<Instance>> {
    let mut out = Vec::with_capacity(count);
    let mut next = seed;
    for i in 0..count {
        let (g, used) = sample_locally_balanced(n, 2, eps, next)?;
        next = used.wrapping_add(1);
        out.push(Instance::new(format!("random n={n} #{i}"), g, Some(used)));
    }
    Ok(out)
}

/// Every colouring of `K_{3,3}` and of `K_{3,4}` (both orientations) in
/// which each `A`-vertex has a blue neighbour and each `B`-vertex a red one
/// must contain an alternating 4-cycle.
pub fn verify_prop_cute() -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new("cute", true);
    for (a, b) in [(3usize, 3usize), (3, 4), (4, 3)] {
        let cells = a * b;
        let results: Vec<(bool, Option<Failure>)> = (0u32..1 << cells)
            .into_par_iter()
            .map(|mask| {
                let colours: Vec<Colour> = (0..cells).map(|k| (mask >> k & 1) as Colour).collect();
                let col = |i: usize, j: usize| colours[i * b + j];
                let a_ok = (0..a).all(|i| (0..b).any(|j| col(i, j) == 1));
                let b_ok = (0..b).all(|j| (0..a).any(|i| col(i, j) == 0));
                if !(a_ok && b_ok) {
                    return (false, None);
                }
                let bc = BipartiteColouring::new((0..a).collect(), (a..a + b).collect(), colours.clone())
                    .expect("valid bipartite colouring");
                let failure = (bc.count_m1() == 0).then(|| Failure {
                    instance: format!("K{a},{b} mask {mask}"),
                    detail: "no alternating 4-cycle".into(),
                    colouring: Some(bipartite_to_json(&bc)),
                });
                (true, failure)
            })
            .collect();
        let in_hypothesis = results.iter().filter(|r| r.0).count();
        report.instances += in_hypothesis;
        report.failures.extend(results.into_iter().filter_map(|r| r.1));
        report.bounds.push(BoundCheck {
            instance: format!("K{a},{b}"),
            bound: format!("{in_hypothesis} colourings with an alternating 4-cycle"),
            observed: format!("{} without", report.failures.len()),
            holds: report.failures.is_empty(),
        });
    }
    report.finish(true, started)
}

/// `count_c4 + count_c4bar + count_p3o >= eps^4 n^4 / 10^5` with `eps` the
/// instance's exact local balance.
pub fn verify_prop_many_p3c4(instances: &[Instance]) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new("p3c4", true);
    let rows: Vec<Result<(Rational, u64)>> = instances
        .par_iter()
        .map(|inst| {
            let eps = balance_profile(&inst.graph).epsilon_local;
            Ok((eps, census_k4(&inst.graph)?.alternating_completions()))
        })
        .collect();
    for (inst, row) in instances.iter().zip(rows) {
        let (eps, observed) = row?;
        report.seeds.extend(inst.seed);
        if eps == Rational::from_integer(0) {
            report.skipped.push(Skipped {
                instance: inst.label.clone(),
                reason: "not locally balanced for any eps > 0".into(),
            });
            continue;
        }
        report.instances += 1;
        let n = inst.graph.n() as i128;
        let bound = big(eps).pow(4) * Big::from_integer(n.pow(4)) / Big::from_integer(100_000);
        let holds = Big::from_integer(observed as i128) >= bound;
        report.bound(format!("{} (eps={eps})", inst.label), bound, observed, holds, Some(&inst.graph));
    }
    Ok(report.finish(true, started))
}

/// Largest host on which the optimisation suite computes exact closeness.
pub const OPTIMIZE_MAX_N: usize = 20;

/// `min colour degree <= (1/4 + 3 delta) n`, with `delta` the exact distance
/// to the nearest split colouring.
pub fn verify_prop_optimize(instances: &[Instance]) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new("optimize", true);
    let rows: Vec<Option<Result<(Rational, usize)>>> = instances
        .par_iter()
        .map(|inst| {
            let g = &inst.graph;
            if g.n() > OPTIMIZE_MAX_N || g.r() != 2 {
                return None;
            }
            Some(closeness_to_split_exact(g).map(|c| (c.delta, balance_profile(g).min_degree_per_colour)))
        })
        .collect();
    for (inst, row) in instances.iter().zip(rows) {
        report.seeds.extend(inst.seed);
        let Some(row) = row else {
            report.skipped.push(Skipped {
                instance: inst.label.clone(),
                reason: format!("needs a 2-coloured host with n <= {OPTIMIZE_MAX_N}"),
            });
            continue;
        };
        let (delta, min_deg) = row?;
        report.instances += 1;
        let n = inst.graph.n() as i64;
        let bound = (Rational::new(1, 4) + delta * 3) * Rational::from_integer(n);
        let holds = Rational::from_integer(min_deg as i64) <= bound;
        let g = (!holds).then_some(&inst.graph);
        report.bound(format!("{} (delta={delta})", inst.label), bound, min_deg, holds, g);
    }
    Ok(report.finish(true, started))
}

/// Samples `samples` locally `eps`-balanced colourings of `K_n` and looks for
/// a 2-blow-up of `P1`, `P1bar` or `P3` in each. Misses are failures only in
/// strict mode.
pub fn verify_theorem_anybalanced_small(
    n: usize,
    eps: Rational,
    samples: usize,
    seed: u64,
    strict: bool,
) -> Result<VerificationReport> {
    if n > 16 {
        return Err(Error::InvalidParameter(format!("n = {n} exceeds 16")));
    }
    let started = Instant::now();
    let mut report = VerificationReport::new("anybalanced", strict);
    let patterns: Vec<_> = ["P1", "P1bar", "P3"].iter().map(|p| (*p, pattern_by_name(p).unwrap())).collect();
    let mut next = seed;
    let mut hosts = Vec::with_capacity(samples);
    for i in 0..samples {
        match sample_locally_balanced(n, 2, eps, next) {
            Ok((g, used)) => {
                next = used.wrapping_add(1);
                hosts.push((i, g, used));
            }
            Err(e) => {
                report.skipped.push(Skipped {
                    instance: format!("sample #{i}"),
                    reason: e.to_string(),
                });
                break;
            }
        }
    }
    let found: Vec<Result<Option<&str>>> = hosts
        .par_iter()
        .map(|(_, g, _)| {
            for (name, h) in &patterns {
                if find_pattern_blowup_exhaustive(g, h, 2, false, DEFAULT_EXHAUSTIVE_BUDGET)?.is_some() {
                    return Ok(Some(*name));
                }
            }
            Ok(None)
        })
        .collect();
    for ((i, g, used), hit) in hosts.iter().zip(found) {
        report.instances += 1;
        report.seeds.push(*used);
        let hit = hit?;
        report.bounds.push(BoundCheck {
            instance: format!("sample #{i} n={n}"),
            bound: "2-blow-up of P1, P1bar or P3".into(),
            observed: hit.unwrap_or("none").into(),
            holds: hit.is_some(),
        });
        if hit.is_none() {
            report.failures.push(Failure {
                instance: format!("sample #{i} n={n}"),
                detail: "no 2-blow-up of P1, P1bar or P3".into(),
                colouring: Some(graph_to_json(g, true)),
            });
        }
    }
    Ok(report.finish(false, started))
}

/// `count_m1 >= eps^4 n^4 / 150` on `per_cell` instances of
/// `make_bipartite_mindeg(n, eps, seed + i)` for each side size and `eps`.
pub fn verify_m1_bound(sides: &[usize], eps_list: &[Rational], per_cell: usize, seed: u64) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new("m1bound", true);
    for &n in sides {
        for &eps in eps_list {
            let rows: Vec<Result<u64>> = (0..per_cell)
                .into_par_iter()
                .map(|i| Ok(make_bipartite_mindeg(n, eps, seed.wrapping_add(i as u64))?.count_m1()))
                .collect();
            for (i, row) in rows.into_iter().enumerate() {
                let observed = row?;
                let s = seed.wrapping_add(i as u64);
                report.seeds.push(s);
                report.instances += 1;
                let bound = big(eps).pow(4) * Big::from_integer((n as i128).pow(4)) / Big::from_integer(150);
                let holds = Big::from_integer(observed as i128) >= bound;
                report.bound(format!("n={n} eps={eps} seed={s}"), bound, observed, holds, None);
            }
        }
    }
    Ok(report.finish(true, started))
}

/// The alternating multicolour cycle on `l` parts has no unibalanced
/// subgraph on fewer than `l` vertices, and a transversal achieves `l`.
pub fn verify_3colourfail(cases: &[(usize, usize)]) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new("3colourfail", true);
    for &(l, m) in cases {
        let g = make_multicolour_cycle(l, m)?;
        let got = min_unibalanced_subgraph_size(&g, l.min(12), DEFAULT_SUBSET_BUDGET)?;
        report.instances += 1;
        let observed = match got {
            MinUnibalanced::Size(k) => k.to_string(),
            MinUnibalanced::ExceedsCap(c) => format!("> {c}"),
        };
        let holds = got == MinUnibalanced::Size(l);
        report.bounds.push(BoundCheck {
            instance: format!("cycle l={l} m={m}"),
            bound: format!("= {l}"),
            observed: observed.clone(),
            holds,
        });
        if !holds {
            report.failures.push(Failure {
                instance: format!("cycle l={l} m={m}"),
                detail: format!("minimum unibalanced size {observed}, expected {l}"),
                colouring: Some(graph_to_json(&g, true)),
            });
        }
    }
    Ok(report.finish(true, started))
}

/// `P_k` for `k` in `ks`.
pub fn pk_instances(ks: impl IntoIterator<Item = usize>) -> Result<Vec<Instance>> {
    ks.into_iter()
        .map(|k| Ok(Instance::new(format!("P_k k={k}"), make_pk(k)?, None)))
        .collect()
}

/// Split colourings with `2 <= a + b <= max_n` and the given flip counts,
/// each seeded with `seed`.
pub fn split_instances(max_n: usize, flips: &[usize], seed: u64) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for a in 0..=max_n {
        for b in 2usize.saturating_sub(a)..=max_n - a {
            for &f in flips {
                out.push(Instance::new(format!("split a={a} b={b} flips={f}"), make_split(a, b, f, seed)?, Some(seed)));
            }
        }
    }
    Ok(out)
}

pub const SUITES: [&str; 6] = ["cute", "p3c4", "optimize", "anybalanced", "m1bound", "3colourfail"];

/// Runs a named suite with its standard instance set.
pub fn run_suite(name: &str, seed: u64, strict: bool) -> Result<VerificationReport> {
    match name {
        "cute" => Ok(verify_prop_cute()),
        "p3c4" => {
            let mut inst = pk_instances(2..=8)?;
            for n in [16, 24, 32] {
                inst.extend(balanced_instances(n, Rational::new(3, 10), 100, seed)?);
            }
            verify_prop_many_p3c4(&inst)
        }
        "optimize" => {
            let mut inst = split_instances(20, &[0, 2, 4], seed)?;
            inst.extend(pk_instances(1..=5)?);
            verify_prop_optimize(&inst)
        }
        "anybalanced" => verify_theorem_anybalanced_small(12, Rational::new(1, 4), 100, seed, strict),
        "m1bound" => verify_m1_bound(&[20, 30, 40], &[Rational::new(1, 10), Rational::new(1, 5)], 50, seed),
        "3colourfail" => verify_3colourfail(&[(4, 1), (4, 2), (6, 1), (6, 2)]),
        _ => Err(Error::InvalidParameter(format!(
            "unknown suite {name:?}; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::blow_up;

    #[test]
    fn cute_has_no_failures() {
        let r = verify_prop_cute();
        assert!(r.pass);
        assert!(r.failures.is_empty());
        assert!(r.instances > 0 && r.instances < 512 + 2 * 4096);
    }

    #[test]
    fn p3c4_on_pk_and_p1_blowup() {
        let mut inst = pk_instances(2..=4).unwrap();
        inst.push(Instance::new("P1[5]", blow_up(&pattern_by_name("P1").unwrap(), 5).unwrap(), None));
        inst.push(Instance::new("mono", ColouredCompleteGraph::monochromatic(6, 2, 0).unwrap(), None));
        let r = verify_prop_many_p3c4(&inst).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.instances, 4);
        assert_eq!(r.skipped.len(), 1);
    }

    #[test]
    fn optimize_on_splits() {
        let g = make_split(8, 8, 0, 0).unwrap();
        // The blue cross edges or the red ones number at most 32, so some
        // vertex has at most 4 neighbours in its minority colour.
        assert!(balance_profile(&g).min_degree_per_colour <= 4);
        let inst = vec![
            Instance::new("split 8,8", g, Some(0)),
            Instance::new("split 10,6 f2", make_split(10, 6, 2, 1).unwrap(), Some(1)),
            Instance::new("split 10,6 f4", make_split(10, 6, 4, 2).unwrap(), Some(2)),
            Instance::new("P_4", make_pk(4).unwrap(), None),
            Instance::new("big", make_pk(6).unwrap(), None),
        ];
        let r = verify_prop_optimize(&inst).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.instances, 4);
        assert_eq!(r.skipped.len(), 1);
    }

    #[test]
    fn anybalanced_records_and_rejects_large_n() {
        let r = verify_theorem_anybalanced_small(8, Rational::new(1, 4), 5, 1, false).unwrap();
        assert!(r.pass);
        assert_eq!(r.seeds.len(), r.instances);
        assert!(verify_theorem_anybalanced_small(17, Rational::new(1, 4), 1, 1, false).is_err());
    }

    #[test]
    fn planted_blowups_are_found() {
        let g = make_pk(3).unwrap();
        let p3 = pattern_by_name("P3").unwrap();
        assert!(find_pattern_blowup_exhaustive(&g, &p3, 2, false, DEFAULT_EXHAUSTIVE_BUDGET).unwrap().is_some());
        let p1 = pattern_by_name("P1").unwrap();
        let g = blow_up(&p1, 6).unwrap();
        assert!(find_pattern_blowup_exhaustive(&g, &p1, 2, false, DEFAULT_EXHAUSTIVE_BUDGET).unwrap().is_some());
    }

    #[test]
    fn m1_and_cycle_suites_pass_small() {
        let r = verify_m1_bound(&[10], &[Rational::new(1, 5)], 5, 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.seeds, vec![3, 4, 5, 6, 7]);
        let r = verify_3colourfail(&[(4, 1), (6, 1)]).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn reports_are_reproducible() {
        let a = serde_json::to_string(&run_suite("m1bound", 5, false).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite("m1bound", 5, false).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(run_suite("nope", 0, false).is_err());
    }
}
