//! Unibalanced induced subgraphs of many-coloured hosts.
//!
//! A vertex set `S` is unibalanced when every vertex of `S` has an edge of
//! every colour inside `S`. Random subsets of a balanced host are sampled
//! here, and the smallest unibalanced subset is found by exhaustive search
//! over twin classes.

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{is_locally_balanced, ColouredCompleteGraph, Rational};

pub fn induced_unibalanced(g: &ColouredCompleteGraph, s: &[usize]) -> bool {
    let set = BitSet::from_indices(g.n(), s.iter().copied());
    unibalanced_mask(g, &set)
}

fn unibalanced_mask(g: &ColouredCompleteGraph, set: &BitSet) -> bool {
    set.iter()
        .all(|v| (0..g.r()).all(|c| g.neighbours(c, v).intersection_count(set) > 0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplerConfig {
    pub eps: Rational,
    pub r: u8,
    /// Expected sample size `(20/eps)(ln r + ln 1/eps)`.
    pub zeta: f64,
    /// Size cap `(80/eps) ln 1/eps`.
    pub cap: f64,
    pub max_draws: usize,
    pub seed: u64,
}

impl SamplerConfig {
    /// Needs `0 < eps < 1` and `zeta <= cap/2`, which amounts to `eps <= 1/r`.
    pub fn new(eps: Rational, r: u8, max_draws: usize, seed: u64) -> Result<Self> {
        if eps <= Rational::zero() || eps >= Rational::from_integer(1) {
            return Err(Error::InvalidParameter(format!("eps = {eps} must lie in (0, 1)")));
        }
        if r < 2 {
            return Err(Error::InvalidParameter("need at least two colours".into()));
        }
        let e = eps.to_f64().unwrap();
        let zeta = 20.0 / e * ((r as f64).ln() + (1.0 / e).ln());
        let cap = 80.0 / e * (1.0 / e).ln();
        if eps * Rational::from_integer(r as i64) > Rational::from_integer(1) {
            return Err(Error::InvalidParameter(format!(
                "zeta = {zeta:.2} exceeds half the cap {cap:.2}; eps must be at most 1/r"
            )));
        }
        if max_draws == 0 {
            return Err(Error::InvalidParameter("max_draws must be at least 1".into()));
        }
        Ok(Self { eps, r, zeta, cap, max_draws, seed })
    }

    /// Per-vertex inclusion probability `min(1, zeta/n)`.
    pub fn probability(&self, n: usize) -> f64 {
        (self.zeta / n as f64).min(1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampledSubset {
    pub subset: Vec<usize>,
    /// 1-based index of the successful draw.
    pub draws: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleOutcome {
    pub found: Option<SampledSubset>,
    pub draws_made: usize,
    /// Whether the host met the local balance the sampler assumes.
    pub host_balanced: bool,
    pub zeta: f64,
    pub cap: f64,
}

/// Draw `index` of a sampling run: an independent stream per draw, so
/// draws can run in any order and still agree.
fn draw(g: &ColouredCompleteGraph, config: &SamplerConfig, index: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let p = config.probability(g.n());
    (0..g.n()).filter(|_| rng.gen_bool(p)).collect()
}

fn draw_succeeds(g: &ColouredCompleteGraph, config: &SamplerConfig, s: &[usize]) -> bool {
    !s.is_empty() && (s.len() as f64) <= config.cap && induced_unibalanced(g, s)
}

/// Samples vertices independently with probability `zeta/n` (clamped to 1)
/// until a draw is nonempty, within the size cap, and unibalanced.
pub fn sample_unibalanced_subset(g: &ColouredCompleteGraph, config: &SamplerConfig) -> Result<SampleOutcome> {
    if g.r() != config.r {
        return Err(Error::InvalidParameter(format!("host has {} colours, config has {}", g.r(), config.r)));
    }
    let host_balanced = is_locally_balanced(g, config.eps);
    let found = (0..config.max_draws)
        .into_par_iter()
        .find_map_first(|i| {
            let s = draw(g, config, i);
            draw_succeeds(g, config, &s).then_some(SampledSubset { subset: s, draws: i + 1 })
        });
    let draws_made = found.as_ref().map_or(config.max_draws, |f| f.draws);
    Ok(SampleOutcome {
        found,
        draws_made,
        host_balanced,
        zeta: config.zeta,
        cap: config.cap,
    })
}

/// Fraction of the first `draws` draws that succeed.
pub fn draw_success_rate(g: &ColouredCompleteGraph, config: &SamplerConfig, draws: usize) -> f64 {
    if draws == 0 {
        return 0.0;
    }
    let hits = (0..draws)
        .into_par_iter()
        .filter(|&i| draw_succeeds(g, config, &draw(g, config, i)))
        .count();
    hits as f64 / draws as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum MinUnibalanced {
    Size(usize),
    ExceedsCap(usize),
}

pub const MAX_UNIBALANCED_CAP: usize = 12;
pub const DEFAULT_SUBSET_BUDGET: u128 = 1 << 32;

/// Classes of pairwise twins: `u` and `v` are twins when they see every
/// other vertex in the same colour. Swapping twins is an automorphism.
pub fn twin_classes(g: &ColouredCompleteGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if class_of[v] != usize::MAX {
            continue;
        }
        class_of[v] = classes.len();
        let mut class = vec![v];
        for u in v + 1..n {
            if class_of[u] == usize::MAX && (0..n).all(|w| w == u || w == v || g.colour(u, w) == g.colour(v, w)) {
                class_of[u] = classes.len();
                class.push(u);
            }
        }
        classes.push(class);
    }
    classes
}

/// Number of count vectors `(k_i)` with `k_i <= sizes[i]` and `sum = k`.
fn count_vectors(sizes: &[usize], k: usize) -> u128 {
    let mut ways = vec![0u128; k + 1];
    ways[0] = 1;
    for &s in sizes {
        let mut next = vec![0u128; k + 1];
        for (total, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for take in 0..=s.min(k - total) {
                next[total + take] = next[total + take].saturating_add(w);
            }
        }
        ways = next;
    }
    ways[k]
}

/// Smallest unibalanced vertex set, searched by increasing size up to `cap`.
/// Subsets are taken up to twin symmetry: only the first `k_i` vertices of
/// each twin class are used. Fails if a size level would test more than
/// `budget` subsets.
pub fn min_unibalanced_subgraph_size(g: &ColouredCompleteGraph, cap: usize, budget: u128) -> Result<MinUnibalanced> {
    if cap > MAX_UNIBALANCED_CAP {
        return Err(Error::InvalidParameter(format!("cap {cap} exceeds {MAX_UNIBALANCED_CAP}")));
    }
    let classes = twin_classes(g);
    let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    for k in 2..=cap.min(g.n()) {
        let needed = count_vectors(&sizes, k);
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let mut counts = vec![0usize; classes.len()];
        if search_level(g, &classes, &mut counts, 0, k) {
            return Ok(MinUnibalanced::Size(k));
        }
    }
    Ok(MinUnibalanced::ExceedsCap(cap))
}

fn search_level(g: &ColouredCompleteGraph, classes: &[Vec<usize>], counts: &mut [usize], i: usize, left: usize) -> bool {
    if left == 0 {
        let set = BitSet::from_indices(
            g.n(),
            classes.iter().zip(counts.iter()).flat_map(|(c, &k)| c[..k].iter().copied()),
        );
        return unibalanced_mask(g, &set);
    }
    if i == classes.len() {
        return false;
    }
    let rest: usize = classes[i + 1..].iter().map(Vec::len).sum();
    let lo = left.saturating_sub(rest);
    for take in (lo..=classes[i].len().min(left)).rev() {
        counts[i] = take;
        if search_level(g, classes, counts, i + 1, left - take) {
            return true;
        }
    }
    counts[i] = 0;
    false
}

/// Number of unibalanced `k`-subsets, by plain enumeration.
pub fn count_unibalanced_subsets(g: &ColouredCompleteGraph, k: usize) -> u64 {
    let n = g.n();
    if k > n {
        return 0;
    }
    let mut count = 0;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if induced_unibalanced(g, &idx) {
            count += 1;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return count;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{make_multicolour_cycle, make_pk, make_random};
    use crate::patterns::{blow_up, pattern_by_name};

    fn brute_min(g: &ColouredCompleteGraph) -> Option<usize> {
        (1..=g.n()).find(|&k| count_unibalanced_subsets(g, k) > 0)
    }

    #[test]
    fn transversal_of_cycle_is_unibalanced() {
        let g = make_multicolour_cycle(6, 2).unwrap();
        let s: Vec<usize> = (0..6).map(|i| 2 * i).collect();
        assert!(induced_unibalanced(&g, &s));
        assert!(!induced_unibalanced(&g, &[3]));
        assert!(!induced_unibalanced(&g, &[0, 1]));
    }

    #[test]
    fn cycle_minimum_equals_number_of_parts() {
        for l in [4, 6] {
            for m in [1, 2] {
                let g = make_multicolour_cycle(l, m).unwrap();
                let got = min_unibalanced_subgraph_size(&g, 12, DEFAULT_SUBSET_BUDGET).unwrap();
                assert_eq!(got, MinUnibalanced::Size(l), "l={l} m={m}");
                assert_eq!(brute_min(&g), Some(l));
            }
        }
    }

    #[test]
    fn p1_blowup_needs_all_four_vertices() {
        let g = blow_up(&pattern_by_name("P1").unwrap(), 2).unwrap();
        let got = min_unibalanced_subgraph_size(&g, 4, DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(Some(got), brute_min(&g).map(MinUnibalanced::Size));
        assert_eq!(got, MinUnibalanced::Size(4));
    }

    #[test]
    fn twin_search_agrees_with_enumeration_on_random_hosts() {
        for seed in 0..15 {
            let r = 2 + (seed % 2) as u8;
            let g = make_random(9, r, seed).unwrap();
            let fast = min_unibalanced_subgraph_size(&g, 9, DEFAULT_SUBSET_BUDGET).unwrap();
            let slow = brute_min(&g).map_or(MinUnibalanced::ExceedsCap(9), MinUnibalanced::Size);
            assert_eq!(fast, slow, "seed {seed}");
        }
    }

    #[test]
    fn monochromatic_host_exceeds_cap_and_never_samples() {
        let g = ColouredCompleteGraph::monochromatic(10, 2, 0).unwrap();
        assert_eq!(
            min_unibalanced_subgraph_size(&g, 6, DEFAULT_SUBSET_BUDGET).unwrap(),
            MinUnibalanced::ExceedsCap(6)
        );
        let config = SamplerConfig::new(Rational::new(1, 4), 2, 20, 0).unwrap();
        let out = sample_unibalanced_subset(&g, &config).unwrap();
        assert!(out.found.is_none());
        assert_eq!(out.draws_made, 20);
        assert!(!out.host_balanced);
    }

    #[test]
    fn sampler_succeeds_on_cycle_and_pk() {
        let g = make_multicolour_cycle(6, 40).unwrap();
        for seed in 0..10 {
            let config = SamplerConfig::new(Rational::new(1, 6), 3, 64, seed).unwrap();
            let out = sample_unibalanced_subset(&g, &config).unwrap();
            let s = out.found.expect("cycle sample");
            assert!(induced_unibalanced(&g, &s.subset));
            assert!(out.host_balanced);
        }
        let g = make_pk(30).unwrap();
        for seed in 0..10 {
            let config = SamplerConfig::new(Rational::new(1, 4), 2, 64, seed).unwrap();
            let s = sample_unibalanced_subset(&g, &config).unwrap().found.expect("pk sample");
            assert!(s.subset.len() as f64 <= config.cap);
            assert!(induced_unibalanced(&g, &s.subset));
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let g = make_random(60, 3, 4).unwrap();
        let config = SamplerConfig::new(Rational::new(1, 5), 3, 32, 9).unwrap();
        let a = sample_unibalanced_subset(&g, &config).unwrap();
        let b = sample_unibalanced_subset(&g, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_rejects_eps_above_one_over_r() {
        assert!(SamplerConfig::new(Rational::new(1, 2), 3, 10, 0).is_err());
        assert!(SamplerConfig::new(Rational::new(0, 1), 2, 10, 0).is_err());
        let c = SamplerConfig::new(Rational::new(1, 3), 3, 10, 0).unwrap();
        assert!(c.zeta <= c.cap / 2.0 + 1e-9);
    }

    #[test]
    fn unibalanced_sets_keep_their_incidences_in_supersets() {
        for seed in 0..20 {
            let g = make_random(12, 3, seed).unwrap();
            let mut rng = crate::constructions::rng_from_seed(seed);
            for _ in 0..50 {
                let s: Vec<usize> = (0..12).filter(|_| rng.gen_bool(0.5)).collect();
                if s.is_empty() || !induced_unibalanced(&g, &s) {
                    continue;
                }
                let t: Vec<usize> = (0..12).filter(|v| s.contains(v) || rng.gen_bool(0.5)).collect();
                let tset = BitSet::from_indices(12, t.iter().copied());
                for &v in &s {
                    assert!((0..3).all(|c| g.neighbours(c, v).intersection_count(&tset) > 0));
                }
            }
        }
    }

    #[test]
    fn count_vectors_matches_binomials_for_singletons() {
        assert_eq!(count_vectors(&[1; 10], 4), 210);
        assert_eq!(count_vectors(&[2, 2], 2), 3);
    }
}
