use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::*;
use crate::constructions::{make_pk, rng_from_seed};
use crate::patterns::{blow_up, defining_partition, pattern_by_name};

fn random_hypergraph(seed: u64, l: usize, part: usize, p: f64) -> CanonicalHypergraph {
    let mut rng = rng_from_seed(seed);
    let parts: Vec<Vec<usize>> = (0..l).map(|i| (i * part..(i + 1) * part).collect()).collect();
    let mut edges = Vec::new();
    let mut tuple = vec![0; l];
    let total = part.pow(l as u32);
    for mut code in 0..total {
        for slot in tuple.iter_mut().rev() {
            *slot = code % part;
            code /= part;
        }
        if rng.gen_bool(p) {
            edges.push(tuple.iter().enumerate().map(|(i, &x)| parts[i][x]).collect());
        }
    }
    CanonicalHypergraph::new(parts, edges).unwrap()
}

/// Deletes the edges of one violating prefix at a time, in random order,
/// until nothing violates the bound.
fn naive_cleanup(hg: &CanonicalHypergraph, threshold: Rational, seed: u64) -> BTreeSet<Vec<usize>> {
    let mut rng = rng_from_seed(seed);
    let limit = threshold * Rational::from_integer(hg.parts().last().unwrap().len() as i64);
    let mut edges: Vec<Vec<usize>> = hg.edges().iter().cloned().collect();
    loop {
        let l = hg.l();
        let mut bad: Vec<Vec<usize>> = edges
            .iter()
            .map(|e| e[..l - 1].to_vec())
            .filter(|r| {
                let d = edges.iter().filter(|e| e[..l - 1] == r[..]).count();
                Rational::from_integer(d as i64) < limit
            })
            .collect();
        if bad.is_empty() {
            return edges.into_iter().collect();
        }
        bad.shuffle(&mut rng);
        let r = &bad[0];
        edges.retain(|e| e[..l - 1] != r[..]);
    }
}

#[test]
fn planted_c4_has_t_to_the_fourth_canonical_copies() {
    let c4 = pattern_by_name("C4").unwrap();
    for t in [2, 3, 4] {
        let g = blow_up(&c4, t).unwrap();
        let (hg, truncated) = canonical_copies(&g, &c4, defining_partition(4, t), usize::MAX).unwrap();
        assert!(!truncated);
        assert_eq!(hg.len(), t.pow(4));
    }
}

#[test]
fn no_copies_gives_empty_hypergraph() {
    let g = ColouredCompleteGraph::monochromatic(12, 2, 0).unwrap();
    let h = pattern_by_name("P3o").unwrap();
    let out = canonical_partition(&g, &h, &FinderConfig::default()).unwrap();
    assert!(out.hypergraph.is_empty());
    assert!(!out.density_met);
    assert_eq!(out.partition().len(), 4);
}

#[test]
fn random_partitions_find_planted_copies() {
    let h = pattern_by_name("P3o").unwrap();
    let g = blow_up(&h, 5).unwrap();
    for seed in 0..10 {
        let config = FinderConfig { seed, ..FinderConfig::default() };
        let out = canonical_partition(&g, &h, &config).unwrap();
        assert!(!out.hypergraph.is_empty(), "seed {seed}");
        let sizes: Vec<usize> = out.partition().iter().map(Vec::len).collect();
        assert!(sizes.iter().all(|&s| s == 5));
    }
}

#[test]
fn cleanup_keeps_dense_hypergraph() {
    let hg = random_hypergraph(1, 3, 4, 1.0);
    assert_eq!(min_degree_cleanup(&hg, Rational::new(1, 2)), hg);
}

#[test]
fn cleanup_removes_lone_edge() {
    let parts = vec![vec![0, 1], vec![2, 3], vec![4, 5, 6]];
    let hg = CanonicalHypergraph::new(parts, vec![vec![0, 2, 4]]).unwrap();
    assert!(min_degree_cleanup(&hg, Rational::new(1, 2)).is_empty());
    assert_eq!(min_degree_cleanup(&hg, Rational::new(1, 3)), hg);
}

#[test]
fn cleanup_matches_naive_fixpoint() {
    let mut rng = rng_from_seed(99);
    for seed in 0..100 {
        let l = rng.gen_range(1..=4);
        let part = rng.gen_range(1..=if l == 4 { 6 } else { 12 });
        let p = rng.gen_range(0.05..0.6);
        let hg = random_hypergraph(seed, l, part, p);
        let threshold = Rational::new(rng.gen_range(0..=5), 10);
        let fast = min_degree_cleanup(&hg, threshold);
        assert_eq!(fast.edges(), &naive_cleanup(&hg, threshold, seed), "seed {seed}");
        assert_eq!(min_degree_cleanup(&fast, threshold), fast);
        let limit = threshold * Rational::from_integer(part as i64);
        for (_, d) in fast.prefix_degrees() {
            assert!(Rational::from_integer(d as i64) >= limit);
        }
    }
}

#[test]
fn cover_of_singletons_is_everything() {
    let g = ColouredCompleteGraph::monochromatic(9, 2, 1).unwrap();
    let hg = CanonicalHypergraph::new(vec![(0..9).collect()], (0..9).map(|v| vec![v])).unwrap();
    let phi = |u: usize, v: usize| g.colour(u, v);
    let out = hypergraph_cover(&hg, &phi, 2, Rational::new(1, 2), 1000, 9);
    let cover = out.cover();
    assert!(matches!(out, CoverOutcome::Complete(_)));
    assert_eq!(cover.sets, vec![(0..9).collect::<Vec<_>>()]);
    assert_eq!(cover.colours, vec![Some(1)]);
}

#[test]
fn cover_recovers_planted_parts() {
    let c4 = pattern_by_name("C4").unwrap();
    for t in [2, 4, 6] {
        let g = blow_up(&c4, t).unwrap();
        let (hg, _) = canonical_copies(&g, &c4, defining_partition(4, t), usize::MAX).unwrap();
        let phi = |u: usize, v: usize| g.colour(u, v);
        let out = hypergraph_cover(&hg, &phi, 2, Rational::new(1, 8), 1 << 20, t);
        let cover = out.cover();
        assert_eq!(cover.size(), t);
        assert_eq!(cover.sets, defining_partition(4, t));
        assert_eq!(cover.matching.len(), t);
        assert!(cover.matching.iter().all(|e| hg.contains(e)));
    }
}

#[test]
fn single_edge_cover_is_that_edge() {
    let parts = vec![vec![0, 1], vec![2, 3], vec![4, 5]];
    let hg = CanonicalHypergraph::new(parts, vec![vec![1, 2, 5]]).unwrap();
    let phi = |_: usize, _: usize| 0u8;
    let out = hypergraph_cover(&hg, &phi, 2, Rational::new(1, 4), 1000, 2);
    assert_eq!(out.achieved(), 1);
    assert!(matches!(out, CoverOutcome::TooSmall { achieved: 1, .. }));
    assert_eq!(out.cover().sets, vec![vec![1], vec![2], vec![5]]);
    assert_eq!(out.cover().matching, vec![vec![1, 2, 5]]);
}

/// Cover contracts on arbitrary input: equal sizes, constant colouring inside
/// each set, every cross pair in an edge, and a genuine matching.
#[test]
fn cover_contracts_hold_on_random_input() {
    for seed in 0..40 {
        let l = 1 + (seed as usize % 3);
        let hg = random_hypergraph(seed, l, 6, 0.5);
        let g = crate::constructions::make_random(6 * l, 2, seed).unwrap();
        let phi = |u: usize, v: usize| g.colour(u, v);
        let cover = hypergraph_cover(&hg, &phi, 2, Rational::new(1, 6), 1000, 2).into_cover();
        let t = cover.size();
        assert!(cover.sets.iter().all(|s| s.len() == t));
        for (s, c) in cover.sets.iter().zip(&cover.colours) {
            for (i, &u) in s.iter().enumerate() {
                for &v in &s[i + 1..] {
                    assert_eq!(Some(g.colour(u, v)), *c);
                }
            }
        }
        for i in 0..l {
            for j in i + 1..l {
                for &u in &cover.sets[i] {
                    for &v in &cover.sets[j] {
                        assert!(hg.covers_pair(u, v), "seed {seed}");
                    }
                }
            }
        }
        assert_eq!(cover.matching.len(), t);
        let used: BTreeSet<usize> = cover.matching.iter().flatten().copied().collect();
        assert_eq!(used.len(), t * l);
        assert!(cover.matching.iter().all(|e| hg.contains(e)));
    }
}

#[test]
fn finds_planted_c4_blowup() {
    let c4 = pattern_by_name("C4").unwrap();
    let g = blow_up(&c4, 6).unwrap();
    for seed in 0..10 {
        let config = FinderConfig { seed, max_partition_retries: 400, ..FinderConfig::default() };
        let res = find_homogeneous_blowup(&g, &c4, &config).unwrap();
        assert!(res.t >= 2, "seed {seed}: t = {}", res.t);
        assert!(verify_witness(&g, res.witness.as_ref().unwrap()).unwrap());
    }
}

#[test]
fn monochromatic_host_has_no_blowup() {
    let g = ColouredCompleteGraph::monochromatic(12, 2, 1).unwrap();
    let h = pattern_by_name("P3o").unwrap();
    let config = FinderConfig { max_partition_retries: 5, ..FinderConfig::default() };
    let res = find_homogeneous_blowup(&g, &h, &config).unwrap();
    assert_eq!(res.t, 0);
    assert!(res.witness.is_none());
    assert_eq!(res.partitions_tried, 5);
}

#[test]
fn finds_p3o_blowup_in_pk() {
    let g = make_pk(8).unwrap();
    let h = pattern_by_name("P3o").unwrap();
    for seed in 0..5 {
        let config = FinderConfig { seed, max_partition_retries: 400, ..FinderConfig::default() };
        let res = find_homogeneous_blowup(&g, &h, &config).unwrap();
        assert!(res.t >= 2, "seed {seed}: t = {}", res.t);
        assert!(verify_witness(&g, res.witness.as_ref().unwrap()).unwrap());
    }
}

#[test]
fn same_seed_same_result() {
    let h = pattern_by_name("P3o").unwrap();
    let g = blow_up(&h, 4).unwrap();
    let config = FinderConfig { seed: 7, ..FinderConfig::default() };
    let a = find_homogeneous_blowup(&g, &h, &config).unwrap();
    let b = find_homogeneous_blowup(&g, &h, &config).unwrap();
    assert_eq!(a.parts, b.parts);
    assert_eq!(a.partitions_tried, b.partitions_tried);
}

#[test]
fn greedy_clique_meets_log_bound() {
    for r in 2..=4u8 {
        for seed in 0..30 {
            let n = 4 + (seed as usize * 7) % 120;
            let g = crate::constructions::make_random(n, r, seed).unwrap();
            let vs: Vec<usize> = (0..n).collect();
            let c = ramsey_clique(&vs, |u, v| g.colour(u, v), r);
            assert!(c.len() >= greedy_ramsey_bound(n, r), "r={r} n={n}: {}", c.len());
        }
    }
}

#[test]
fn density_check_is_exact() {
    let config = FinderConfig { c: Rational::new(1, 8), ..FinderConfig::default() };
    // floor(17/4)^4 = 256, so the bar is 32 copies.
    assert!(config.density_met(32, 17, 4));
    assert!(!config.density_met(31, 17, 4));
    assert!(config.paper_target_t(1 << 20, 4, 2) < 1.0);
}
