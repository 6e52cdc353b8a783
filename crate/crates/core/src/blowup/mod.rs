//! Homogeneous blow-ups from dense families of pattern copies.
//!
//! The pipeline draws a random equitable partition, collects the copies of
//! the pattern that are canonical for it (vertex `i` in part `i`), and
//! shrinks that hypergraph to a cover: equal-size sets, one per part, with
//! every cross pair inside some copy and the pair colouring constant on each
//! set. A cover of size `t` is a homogeneous `t`-blow-up of the pattern.

mod cover;
mod hypergraph;
mod kst;
mod ramsey;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Colour, ColouredCompleteGraph, Rational};
use crate::patterns::{verify_witness, BlowupWitness, TotallyColouredPattern};

pub use cover::{hypergraph_cover, Cover, CoverOutcome};
pub use hypergraph::{canonical_copies, canonical_partition, min_degree_cleanup, CanonicalHypergraph, PartitionOutcome};
pub use kst::{kst_star, BipartiteIncidence, KstMode, KstStar};
pub use ramsey::{
    best_monochromatic_clique, greedy_ramsey_bound, max_monochromatic_clique, ramsey_clique, MonoClique, EXACT_CLIQUE_MAX,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinderConfig {
    /// Copy density `c`: a partition is accepted once it has
    /// `c * floor(n/l)^l` canonical copies.
    pub c: Rational,
    pub seed: u64,
    pub max_partition_retries: usize,
    /// Exact star search runs when there are at most this many subsets.
    pub subset_search_budget: u128,
    /// Stop retrying once a blow-up of this size is found.
    pub target_t: usize,
    /// Cap on the number of canonical copies enumerated per partition.
    pub edge_budget: usize,
}

impl Default for FinderConfig {
    fn default() -> Self {
        Self {
            c: Rational::new(1, 32),
            seed: 0,
            max_partition_retries: 64,
            subset_search_budget: 200_000,
            target_t: 2,
            edge_budget: 2_000_000,
        }
    }
}

impl FinderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.c <= Rational::zero() || self.c > Rational::from_integer(1) {
            return Err(Error::InvalidParameter(format!("c = {} must lie in (0, 1]", self.c)));
        }
        if self.max_partition_retries == 0 || self.subset_search_budget == 0 || self.edge_budget == 0 {
            return Err(Error::InvalidParameter("budgets must be at least 1".into()));
        }
        Ok(())
    }

    /// Whether `copies >= c * floor(n/l)^l`, compared exactly.
    pub fn density_met(&self, copies: usize, n: usize, l: usize) -> bool {
        let side = (n / l) as u128;
        let volume = (0..l).try_fold(1u128, |acc, _| acc.checked_mul(side));
        let (num, den) = (*self.c.numer() as u128, *self.c.denom() as u128);
        match volume.and_then(|v| v.checked_mul(num)) {
            Some(rhs) => (copies as u128).saturating_mul(den) >= rhs,
            None => false,
        }
    }

    /// `min{c/(2l), 1/(2r log r)}^l * log n` with binary logarithms.
    pub fn paper_target_t(&self, n: usize, l: usize, r: u8) -> f64 {
        let c = self.c.to_f64().unwrap_or(0.0);
        let r = r as f64;
        let base = (c / (2.0 * l as f64)).min(1.0 / (2.0 * r * r.log2()));
        base.powi(l as i32) * (n as f64).log2()
    }
}

/// Result of [`find_homogeneous_blowup`].
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BlowupSearch {
    /// Size of the best blow-up found; 0 when the host has no copy.
    pub t: usize,
    pub parts: Vec<Vec<usize>>,
    pub part_colours: Vec<Option<Colour>>,
    /// `greedy`, `exact`, `mixed`, or `none` (single-vertex pattern or no copy).
    pub mode: String,
    pub paper_target_t: f64,
    pub partitions_tried: usize,
    pub copies: usize,
    pub density_met: bool,
    #[serde(skip)]
    pub witness: Option<BlowupWitness>,
}

fn mode_label(modes: &[KstMode]) -> String {
    let exact = modes.iter().filter(|&&m| m == KstMode::Exact).count();
    match (modes.len(), exact) {
        (0, _) => "none",
        (n, e) if e == n => "exact",
        (_, 0) => "greedy",
        _ => "mixed",
    }
    .to_string()
}

/// Searches `g` for a homogeneous blow-up of `h`'s edge pattern.
///
/// Each retry draws a fresh partition from the seeded generator, builds the
/// canonical copy hypergraph, and covers it with cleanup threshold `c/l`.
/// The largest cover is kept; the search stops as soon as it reaches
/// `target_t`. Every returned witness has passed [`verify_witness`].
pub fn find_homogeneous_blowup(
    g: &ColouredCompleteGraph,
    h: &TotallyColouredPattern,
    config: &FinderConfig,
) -> Result<BlowupSearch> {
    config.validate()?;
    if g.r() != h.r() {
        return Err(Error::InvalidParameter(format!("host has {} colours, pattern has {}", g.r(), h.r())));
    }
    let l = h.l();
    if g.n() < l {
        return Err(Error::InvalidParameter(format!("host has {} < {l} vertices", g.n())));
    }
    let pattern = h.edge_pattern();
    let threshold = config.c / Rational::from_integer(l as i64);
    let phi = |u: usize, v: usize| g.colour(u, v);
    let mut rng = crate::constructions::rng_from_seed(config.seed);

    let mut best: Option<(Cover, usize, bool)> = None;
    let mut tried = 0;
    for _ in 0..config.max_partition_retries {
        tried += 1;
        let parts = hypergraph::random_equitable_partition(g.n(), l, &mut rng);
        let (hg, _) = canonical_copies(g, &pattern, parts, config.edge_budget)?;
        let copies = hg.len();
        let density_met = config.density_met(copies, g.n(), l);
        if copies == 0 {
            if best.is_none() {
                best = Some((Cover::empty(l), 0, false));
            }
            continue;
        }
        let cover = hypergraph_cover(&hg, &phi, g.r(), threshold, config.subset_search_budget, config.target_t)
            .into_cover();
        let improves = best.as_ref().map_or(true, |b| cover.size() > b.0.size());
        if improves {
            best = Some((cover, copies, density_met));
        }
        if best.as_ref().is_some_and(|b| b.0.size() >= config.target_t.max(1)) {
            break;
        }
    }
    let (cover, copies, density_met) = best.expect("at least one retry");
    let t = cover.size();
    let witness = if t > 0 {
        let w = BlowupWitness {
            pattern: pattern.clone(),
            parts: cover.sets.clone(),
            t,
            homogeneous: true,
        };
        if !verify_witness(g, &w)? {
            return Err(Error::InvalidWitness("cover does not induce a homogeneous blow-up".into()));
        }
        Some(w)
    } else {
        None
    };
    Ok(BlowupSearch {
        t,
        part_colours: if t >= 2 { cover.colours.clone() } else { vec![None; l] },
        parts: cover.sets,
        mode: mode_label(&cover.kst_modes),
        paper_target_t: config.paper_target_t(g.n(), l, g.r()),
        partitions_tried: tried,
        copies,
        density_met,
        witness,
    })
}

#[cfg(test)]
mod tests;
