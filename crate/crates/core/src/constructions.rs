//! Generators for the named colourings, plus closeness to split colourings.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::census::BipartiteColouring;
use crate::error::{Error, Result};
use crate::graph::{Colour, ColouredCompleteGraph, Rational, BLUE, GREEN, RED};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The `4k`-vertex colouring on parts `V1..V4` (consecutive blocks of `k`):
/// red inside `V1 ∪ V4`, blue inside `V2 ∪ V3`, red across `V1–V3` and
/// `V2–V4`, blue across `V1–V2` and `V3–V4`.
pub fn make_pk(k: usize) -> Result<ColouredCompleteGraph> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    ColouredCompleteGraph::from_fn(4 * k, 2, |u, v| {
        let (a, b) = ((u / k).min(v / k), (u / k).max(v / k));
        match (a, b) {
            (0, 0) | (3, 3) | (0, 3) => RED,
            (1, 1) | (2, 2) | (1, 2) => BLUE,
            (0, 2) | (1, 3) => RED,
            (0, 1) | (2, 3) => BLUE,
            _ => unreachable!(),
        }
    })
}

/// Red clique on `0..a`, blue clique on `a..a+b`, cross pairs by a seeded fair
/// coin, then `flips` distinct uniformly chosen pairs recoloured (all pairs
/// when `flips >= C(n, 2)`).
pub fn make_split(a: usize, b: usize, flips: usize, seed: u64) -> Result<ColouredCompleteGraph> {
    let n = a + b;
    if n < 2 {
        return Err(Error::InvalidParameter("a + b must be at least 2".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut cross = vec![RED; n * n];
    for u in 0..a {
        for v in a..n {
            cross[u * n + v] = if rng.gen::<bool>() { RED } else { BLUE };
        }
    }
    let pairs = n * (n - 1) / 2;
    let mut flipped = vec![false; pairs];
    for idx in sample(&mut rng, pairs, flips.min(pairs)) {
        flipped[idx] = true;
    }
    let mut pair_index = 0;
    ColouredCompleteGraph::from_fn(n, 2, |u, v| {
        let base = match (u < a, v < a) {
            (true, true) => RED,
            (false, false) => BLUE,
            _ => cross[u.min(v) * n + u.max(v)],
        };
        let c = if flipped[pair_index] { 1 - base } else { base };
        pair_index += 1;
        c
    })
}

/// Three colours on `l` parts of `part_size`: pairs between parts `i` and
/// `i+1 (mod l)` are red for even `i` and blue for odd `i` (0-indexed), all
/// other pairs, including those inside a part, are green.
pub fn make_multicolour_cycle(l: usize, part_size: usize) -> Result<ColouredCompleteGraph> {
    if l < 4 || l % 2 == 1 {
        return Err(Error::InvalidParameter(format!("number of parts must be even and >= 4, got {l}")));
    }
    if part_size == 0 {
        return Err(Error::InvalidParameter("part size must be at least 1".into()));
    }
    ColouredCompleteGraph::from_fn(l * part_size, 3, |u, v| {
        let (i, j) = (u / part_size, v / part_size);
        if (i + 1) % l == j {
            cycle_colour(i)
        } else if (j + 1) % l == i {
            cycle_colour(j)
        } else {
            GREEN
        }
    })
}

fn cycle_colour(i: usize) -> Colour {
    if i % 2 == 0 {
        RED
    } else {
        BLUE
    }
}

/// Independent uniform colours, deterministic per seed.
pub fn make_random(n: usize, r: u8, seed: u64) -> Result<ColouredCompleteGraph> {
    let mut rng = rng_from_seed(seed);
    ColouredCompleteGraph::from_fn(n, r, |_, _| rng.gen_range(0..r))
}

pub const BIPARTITE_RESAMPLE_BUDGET: usize = 10_000;

/// A colouring of `K_{n,n}` in which every `X`-vertex has at least
/// `ceil(eps n)` red and every `Y`-vertex at least `ceil(eps n)` blue
/// neighbours.
///
/// Every `x` draws `ceil(eps n)` forced-red partners; every `y` then draws
/// `ceil(eps n)` forced-blue partners among the `x` that did not force the
/// pair red. When some `y` has too few such partners the whole draw is
/// resampled. Unforced pairs are fair coins.
pub fn make_bipartite_mindeg(n_side: usize, eps: Rational, seed: u64) -> Result<BipartiteColouring> {
    if n_side == 0 {
        return Err(Error::InvalidParameter("side size must be at least 1".into()));
    }
    if eps <= Rational::from_integer(0) || eps > Rational::new(1, 2) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1/2], got {eps}")));
    }
    let need = (eps * Rational::from_integer(n_side as i64)).ceil().to_integer() as usize;
    let mut rng = rng_from_seed(seed);
    for _ in 0..BIPARTITE_RESAMPLE_BUDGET {
        // None = free, Some(c) = forced
        let mut forced: Vec<Option<Colour>> = vec![None; n_side * n_side];
        for x in 0..n_side {
            for y in sample(&mut rng, n_side, need) {
                forced[x * n_side + y] = Some(RED);
            }
        }
        let mut ok = true;
        for y in 0..n_side {
            let allowed: Vec<usize> = (0..n_side).filter(|&x| forced[x * n_side + y] != Some(RED)).collect();
            if allowed.len() < need {
                ok = false;
                break;
            }
            for k in sample(&mut rng, allowed.len(), need) {
                forced[allowed[k] * n_side + y] = Some(BLUE);
            }
        }
        if !ok {
            continue;
        }
        let colours: Vec<Colour> = forced
            .into_iter()
            .map(|f| f.unwrap_or_else(|| if rng.gen::<bool>() { RED } else { BLUE }))
            .collect();
        let b = BipartiteColouring::new((0..n_side).collect(), (n_side..2 * n_side).collect(), colours)?;
        assert!(b.min_degree_x(RED) >= need && b.min_degree_y(BLUE) >= need);
        return Ok(b);
    }
    Err(Error::ResamplingExhausted(BIPARTITE_RESAMPLE_BUDGET))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosenessMode {
    /// True optimum over all bipartitions.
    Exact,
    /// Best of several steepest-descent runs; an upper bound.
    LocalSearch,
}

/// Distance from the nearest split colouring over labelled bipartitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCloseness {
    /// `flips / n^2`.
    pub delta: Rational,
    pub flips: usize,
    pub red_side: Vec<usize>,
    pub blue_side: Vec<usize>,
    /// Blue pairs inside the red side, then red pairs inside the blue side.
    pub flipped_edges: Vec<(usize, usize)>,
    pub mode: ClosenessMode,
}

pub const EXACT_CLOSENESS_MAX_N: usize = 24;
pub const LOCAL_SEARCH_STARTS: usize = 32;

pub fn closeness_to_split(g: &ColouredCompleteGraph) -> Result<SplitCloseness> {
    if g.n() <= EXACT_CLOSENESS_MAX_N {
        closeness_to_split_exact(g)
    } else {
        closeness_to_split_local(g, LOCAL_SEARCH_STARTS, 0)
    }
}

fn closeness_from_side(g: &ColouredCompleteGraph, in_red: &[bool], mode: ClosenessMode) -> SplitCloseness {
    let n = g.n();
    let red_side: Vec<usize> = (0..n).filter(|&v| in_red[v]).collect();
    let blue_side: Vec<usize> = (0..n).filter(|&v| !in_red[v]).collect();
    let mut flipped_edges = Vec::new();
    for (side, bad) in [(&red_side, BLUE), (&blue_side, RED)] {
        for (i, &u) in side.iter().enumerate() {
            for &v in &side[i + 1..] {
                if g.colour(u, v) == bad {
                    flipped_edges.push((u, v));
                }
            }
        }
    }
    let flips = flipped_edges.len();
    SplitCloseness {
        delta: Rational::new(flips as i64, (n * n) as i64),
        flips,
        red_side,
        blue_side,
        flipped_edges,
        mode,
    }
}

/// Minimises over all `2^n` bipartitions in Gray-code order with O(1) updates.
pub fn closeness_to_split_exact(g: &ColouredCompleteGraph) -> Result<SplitCloseness> {
    if g.r() != 2 {
        return Err(Error::NotTwoColoured(g.r()));
    }
    let n = g.n();
    if n > EXACT_CLOSENESS_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "exact closeness supports n <= {EXACT_CLOSENESS_MAX_N}, got {n}"
        )));
    }
    let mask_of = |c: Colour, v: usize| -> u32 { g.neighbours(c, v).iter().fold(0u32, |m, u| m | (1 << u)) };
    let red: Vec<u32> = (0..n).map(|v| mask_of(RED, v)).collect();
    let blue: Vec<u32> = (0..n).map(|v| mask_of(BLUE, v)).collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };

    // x = red side; start with everything on the blue side
    let mut x: u32 = 0;
    let mut cost: i64 = g.colour_class_sizes()[RED as usize] as i64;
    let (mut best_cost, mut best_mask) = (cost, 0u32);
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let bit = 1u32 << v;
        let y = full & !x;
        if x & bit == 0 {
            cost += i64::from((blue[v] & x).count_ones()) - i64::from((red[v] & y & !bit).count_ones());
            x |= bit;
        } else {
            cost += i64::from((red[v] & y).count_ones()) - i64::from((blue[v] & x & !bit).count_ones());
            x &= !bit;
        }
        if cost < best_cost || (cost == best_cost && x < best_mask) {
            best_cost = cost;
            best_mask = x;
        }
    }
    let in_red: Vec<bool> = (0..n).map(|v| best_mask >> v & 1 == 1).collect();
    let result = closeness_from_side(g, &in_red, ClosenessMode::Exact);
    debug_assert_eq!(result.flips as i64, best_cost);
    Ok(result)
}

/// Steepest descent over single-vertex moves from `starts` seeded random
/// bipartitions; ties between starts go to the lowest start index.
pub fn closeness_to_split_local(g: &ColouredCompleteGraph, starts: usize, seed: u64) -> Result<SplitCloseness> {
    if g.r() != 2 {
        return Err(Error::NotTwoColoured(g.r()));
    }
    let n = g.n();
    let runs: Vec<(usize, Vec<bool>)> = (0..starts.max(1))
        .into_par_iter()
        .map(|start| {
            let mut rng = rng_from_seed(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(start as u64));
            let mut in_red: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
            // red_in[v] / blue_in[v]: red (blue) neighbours of v on the red side
            let mut red_in = vec![0i64; n];
            let mut blue_in = vec![0i64; n];
            for (u, v, c) in g.edges() {
                for (a, b) in [(u, v), (v, u)] {
                    if in_red[b] {
                        if c == RED {
                            red_in[a] += 1;
                        } else {
                            blue_in[a] += 1;
                        }
                    }
                }
            }
            let red_deg: Vec<i64> = (0..n).map(|v| g.colour_degree(v, RED) as i64).collect();
            loop {
                // gain of moving v = decrease in flip count
                let mut best: Option<(i64, usize)> = None;
                for v in 0..n {
                    let red_out = red_deg[v] - red_in[v];
                    let gain = if in_red[v] { blue_in[v] - red_out } else { red_out - blue_in[v] };
                    if gain > 0 && best.map_or(true, |(g0, _)| gain > g0) {
                        best = Some((gain, v));
                    }
                }
                let Some((_, v)) = best else { break };
                let entering = !in_red[v];
                in_red[v] = entering;
                let delta = if entering { 1 } else { -1 };
                for c in [RED, BLUE] {
                    for u in g.neighbours(c, v).iter() {
                        if c == RED {
                            red_in[u] += delta;
                        } else {
                            blue_in[u] += delta;
                        }
                    }
                }
            }
            let flips = closeness_from_side(g, &in_red, ClosenessMode::LocalSearch).flips;
            (flips, in_red)
        })
        .collect();
    let (_, best) = runs
        .into_iter()
        .enumerate()
        .min_by_key(|(i, (flips, _))| (*flips, *i))
        .map(|(_, r)| r)
        .expect("at least one start");
    Ok(closeness_from_side(g, &best, ClosenessMode::LocalSearch))
}
