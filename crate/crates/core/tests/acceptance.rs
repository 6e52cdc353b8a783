//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Built with `harness = false` so the lines always print.

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use ramsey_balance::blowup::{find_homogeneous_blowup, min_degree_cleanup, CanonicalHypergraph, FinderConfig};
use ramsey_balance::census::{census_k4_fast, census_k4_reference};
use ramsey_balance::constructions::{make_bipartite_mindeg, make_multicolour_cycle, make_pk, make_random, make_split, rng_from_seed};
use ramsey_balance::multicolour::{min_unibalanced_subgraph_size, MinUnibalanced, DEFAULT_SUBSET_BUDGET};
use ramsey_balance::patterns::{blow_up, find_pattern_blowup_exhaustive, pattern_by_name, pattern_library, verify_witness, DEFAULT_EXHAUSTIVE_BUDGET};
use ramsey_balance::verify::{
    balanced_instances, pk_instances, split_instances, verify_m1_bound, verify_prop_cute, verify_prop_many_p3c4,
    verify_prop_optimize, verify_theorem_anybalanced_small,
};
use ramsey_balance::{balance_profile, ColouredCompleteGraph, Rational};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed < Duration::from_secs(limit_s)
}

fn construction_fidelity() -> Outcome {
    let started = Instant::now();
    let p1 = pattern_by_name("P1").unwrap();
    let p1bar = pattern_by_name("P1bar").unwrap();
    let mut bad = Vec::new();
    for k in 1..=6 {
        let g = make_pk(k).unwrap();
        let eps = balance_profile(&g).epsilon_local;
        if eps != Rational::new(1, 4) {
            bad.push(format!("k={k}: eps={eps}"));
        }
        for h in [&p1, &p1bar] {
            if find_pattern_blowup_exhaustive(&g, h, 2, false, DEFAULT_EXHAUSTIVE_BUDGET).unwrap().is_some() {
                bad.push(format!("k={k}: contains a 2-blow-up"));
            }
        }
    }
    let elapsed = started.elapsed();
    outcome(
        bad.is_empty() && within(elapsed, 10),
        format!("k=1..6, {:?}; {}", elapsed, if bad.is_empty() { "eps=1/4, no P1/P1bar 2-blow-up".into() } else { bad.join("; ") }),
    )
}

fn prop_cute() -> Outcome {
    let started = Instant::now();
    let r = verify_prop_cute();
    let elapsed = started.elapsed();
    outcome(
        r.pass && within(elapsed, 5),
        format!("{} in-hypothesis colourings, {} failures, {:?}", r.instances, r.failures.len(), elapsed),
    )
}

fn m1_bound() -> Outcome {
    let started = Instant::now();
    let r = verify_m1_bound(&[20, 30, 40], &[Rational::new(1, 10), Rational::new(1, 5)], 50, 0).unwrap();
    let elapsed = started.elapsed();
    outcome(
        r.pass && r.instances == 300 && within(elapsed, 60),
        format!("{} instances, {} violations, {:?}", r.instances, r.failures.len(), elapsed),
    )
}

fn many_p3c4() -> Outcome {
    let mut inst = pk_instances(2..=8).unwrap();
    for n in [16, 24, 32] {
        inst.extend(balanced_instances(n, Rational::new(3, 10), 100, 1000 * n as u64).unwrap());
    }
    let r = verify_prop_many_p3c4(&inst).unwrap();
    outcome(
        r.pass && r.instances == 307 && r.skipped.is_empty(),
        format!("{} instances, {} violations", r.instances, r.failures.len()),
    )
}

fn optimize() -> Outcome {
    let mut inst = split_instances(20, &[0, 2, 4], 0).unwrap();
    inst.extend(pk_instances(1..=5).unwrap());
    let total = inst.len();
    let r = verify_prop_optimize(&inst).unwrap();
    outcome(
        r.pass && r.instances == total,
        format!("{} instances, {} violations", r.instances, r.failures.len()),
    )
}

fn three_colour_fail() -> Outcome {
    let mut bad = Vec::new();
    for l in [4, 6] {
        for m in [1, 2] {
            let g = make_multicolour_cycle(l, m).unwrap();
            let got = min_unibalanced_subgraph_size(&g, 12, DEFAULT_SUBSET_BUDGET).unwrap();
            if got != MinUnibalanced::Size(l) {
                bad.push(format!("l={l} m={m}: {got:?}"));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "minimum = l for l in {4,6}, m in {1,2}".into() } else { bad.join("; ") })
}

fn census_equivalence() -> Outcome {
    let mut graphs: Vec<(String, ColouredCompleteGraph)> = Vec::new();
    for seed in 0..200u64 {
        let n = 4 + (seed as usize * 7) % 37;
        graphs.push((format!("random n={n} seed={seed}"), make_random(n, 2, seed).unwrap()));
    }
    for k in 1..=8 {
        graphs.push((format!("P_k k={k}"), make_pk(k).unwrap()));
    }
    for (a, b) in [(2, 2), (5, 7), (16, 16), (20, 12), (0, 9)] {
        for flips in [0, 3, 40] {
            graphs.push((format!("split {a},{b},{flips}"), make_split(a, b, flips, 5).unwrap()));
        }
    }
    for (name, h) in pattern_library() {
        if !h.is_complete() {
            continue;
        }
        for t in 1..=32 / h.l() {
            graphs.push((format!("{name}[{t}]"), blow_up(&h, t).unwrap()));
        }
    }
    let mismatched: Vec<&str> = graphs
        .iter()
        .filter(|(_, g)| census_k4_fast(g).unwrap() != census_k4_reference(g).unwrap())
        .map(|(label, _)| label.as_str())
        .collect();
    let mut m1_bad = 0;
    for seed in 0..200u64 {
        let n = 2 + seed as usize % 19;
        let eps = if seed % 2 == 0 { Rational::new(1, 10) } else { Rational::new(1, 4) };
        let b = make_bipartite_mindeg(n, eps, seed).unwrap();
        if b.count_m1() != b.count_m1_pairs() {
            m1_bad += 1;
        }
    }
    outcome(
        mismatched.is_empty() && m1_bad == 0,
        format!(
            "{} graphs, {} census mismatches {:?}; 200 bipartite, {} M1 mismatches",
            graphs.len(),
            mismatched.len(),
            mismatched,
            m1_bad
        ),
    )
}

fn blowup_pipeline() -> Outcome {
    let mut cells = Vec::new();
    let mut all_ok = true;
    for name in ["C4", "P3o"] {
        let h = pattern_by_name(name).unwrap();
        for t in [4, 6, 8] {
            let g = blow_up(&h, t).unwrap();
            let mut recovered = 0;
            for seed in 0..10 {
                let config = FinderConfig { seed, max_partition_retries: 400, ..FinderConfig::default() };
                let res = find_homogeneous_blowup(&g, &h, &config).unwrap();
                if let Some(w) = &res.witness {
                    if !verify_witness(&g, w).unwrap() {
                        all_ok = false;
                    }
                }
                if res.t >= 2 {
                    recovered += 1;
                }
            }
            all_ok &= recovered >= 8;
            cells.push(format!("{name}[{t}] {recovered}/10"));
        }
    }
    outcome(all_ok, cells.join(", "))
}

/// Deletes the edges of one violating prefix at a time, in random order.
fn naive_cleanup(hg: &CanonicalHypergraph, threshold: Rational, seed: u64) -> BTreeSet<Vec<usize>> {
    let mut rng = rng_from_seed(seed);
    let l = hg.l();
    let limit = threshold * Rational::from_integer(hg.parts()[l - 1].len() as i64);
    let mut edges: Vec<Vec<usize>> = hg.edges().iter().cloned().collect();
    loop {
        let mut deg: HashMap<&[usize], usize> = HashMap::new();
        for e in &edges {
            *deg.entry(&e[..l - 1]).or_default() += 1;
        }
        let mut bad: Vec<Vec<usize>> = deg
            .into_iter()
            .filter(|&(_, d)| Rational::from_integer(d as i64) < limit)
            .map(|(r, _)| r.to_vec())
            .collect();
        if bad.is_empty() {
            return edges.into_iter().collect();
        }
        bad.sort();
        let pick = bad.swap_remove(rng.gen_range(0..bad.len()));
        edges.retain(|e| e[..l - 1] != pick[..]);
    }
}

fn cleanup_oracle() -> Outcome {
    let mut rng = rng_from_seed(2024);
    let mut mismatches = 0;
    for seed in 0..100u64 {
        let l = rng.gen_range(1..=4);
        let size = rng.gen_range(1..=12);
        let p = rng.gen_range(0.05..0.7);
        let parts: Vec<Vec<usize>> = (0..l).map(|i| (i * size..(i + 1) * size).collect()).collect();
        let mut edges = Vec::new();
        let mut tuple = vec![0usize; l];
        let mut edge_rng = rng_from_seed(seed);
        loop {
            if edge_rng.gen_bool(p) {
                edges.push(tuple.iter().enumerate().map(|(i, &x)| parts[i][x]).collect::<Vec<_>>());
            }
            let Some(i) = (0..l).rev().find(|&i| tuple[i] + 1 < size) else { break };
            tuple[i] += 1;
            tuple[i + 1..].iter_mut().for_each(|x| *x = 0);
        }
        let hg = CanonicalHypergraph::new(parts, edges).unwrap();
        let threshold = Rational::new(rng.gen_range(0..=6), 10);
        if min_degree_cleanup(&hg, threshold).edges() != &naive_cleanup(&hg, threshold, seed) {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("100 hypergraphs, {mismatches} mismatches"))
}

fn anybalanced_record() -> Outcome {
    let r = verify_theorem_anybalanced_small(12, Rational::new(1, 4), 100, 0, false).unwrap();
    outcome(
        r.pass,
        format!(
            "record only: n=12, t=2, {} samples, {} without a 2-blow-up of P1/P1bar/P3, {} skipped",
            r.instances,
            r.failures.len(),
            r.skipped.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("construction fidelity", construction_fidelity),
        ("alternating 4-cycle in K3,3 / K3,4", prop_cute),
        ("alternating matchings bound", m1_bound),
        ("C4 + C4bar + P3o bound", many_p3c4),
        ("min colour degree vs split distance", optimize),
        ("multicolour cycle minimum", three_colour_fail),
        ("census and M1 oracle equivalence", census_equivalence),
        ("blow-up pipeline soundness", blowup_pipeline),
        ("cleanup fixpoint oracle", cleanup_oracle),
        ("small-n blow-up evidence", anybalanced_record),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({}) [{:.1?}]",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.detail,
            started.elapsed()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
