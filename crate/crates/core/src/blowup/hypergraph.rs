use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{ColouredCompleteGraph, Rational};
use crate::patterns::TotallyColouredPattern;

use super::FinderConfig;

/// An `l`-partite `l`-uniform hypergraph whose edges are tuples of host
/// vertices, one from each part, in part order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalHypergraph {
    parts: Vec<Vec<usize>>,
    edges: BTreeSet<Vec<usize>>,
}

impl CanonicalHypergraph {
    pub fn new(parts: Vec<Vec<usize>>, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParameter("hypergraph needs at least one part".into()));
        }
        let mut part_of = HashMap::new();
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                if part_of.insert(v, i).is_some() {
                    return Err(Error::Overlap(v));
                }
            }
        }
        let l = parts.len();
        let mut set = BTreeSet::new();
        for e in edges {
            if e.len() != l || e.iter().enumerate().any(|(i, v)| part_of.get(v) != Some(&i)) {
                return Err(Error::InvalidParameter(format!("edge {e:?} is not a transversal in part order")));
            }
            set.insert(e);
        }
        Ok(Self { parts, edges: set })
    }

    fn from_parts_unchecked(parts: Vec<Vec<usize>>, edges: BTreeSet<Vec<usize>>) -> Self {
        Self { parts, edges }
    }

    pub fn l(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn edges(&self) -> &BTreeSet<Vec<usize>> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, edge: &[usize]) -> bool {
        self.edges.contains(edge)
    }

    /// `d(R)` for every `(l-1)`-prefix `R` that occurs.
    pub fn prefix_degrees(&self) -> BTreeMap<&[usize], usize> {
        let mut deg = BTreeMap::new();
        for e in &self.edges {
            *deg.entry(&e[..e.len() - 1]).or_insert(0) += 1;
        }
        deg
    }

    /// Prefixes of the edges on parts `1..l-1`; needs `l >= 2`.
    pub fn shadow(&self) -> Self {
        assert!(self.l() >= 2, "shadow of a 1-uniform hypergraph");
        let l = self.l();
        let edges = self.edges.iter().map(|e| e[..l - 1].to_vec()).collect();
        Self::from_parts_unchecked(self.parts[..l - 1].to_vec(), edges)
    }

    /// Last vertices of the edges extending `prefix`.
    pub fn extensions(&self) -> HashMap<&[usize], Vec<usize>> {
        let mut out: HashMap<&[usize], Vec<usize>> = HashMap::new();
        for e in &self.edges {
            out.entry(&e[..e.len() - 1]).or_default().push(e[e.len() - 1]);
        }
        out
    }

    /// Vertex pairs covered by some edge.
    pub fn covers_pair(&self, u: usize, v: usize) -> bool {
        self.edges.iter().any(|e| e.contains(&u) && e.contains(&v))
    }
}

/// Removes every edge whose prefix `R` has `0 < d(R) < threshold * |V_l|`,
/// repeating until no prefix violates the bound.
pub fn min_degree_cleanup(hg: &CanonicalHypergraph, threshold: Rational) -> CanonicalHypergraph {
    let last = hg.parts.last().map_or(0, Vec::len) as i64;
    let limit = threshold * Rational::from_integer(last);
    let mut edges = hg.edges.clone();
    loop {
        let mut deg: HashMap<Vec<usize>, usize> = HashMap::new();
        for e in &edges {
            *deg.entry(e[..e.len() - 1].to_vec()).or_insert(0) += 1;
        }
        let before = edges.len();
        edges.retain(|e| Rational::from_integer(deg[&e[..e.len() - 1]] as i64) >= limit);
        if edges.len() == before {
            break;
        }
    }
    CanonicalHypergraph::from_parts_unchecked(hg.parts.clone(), edges)
}

/// Outcome of [`canonical_partition`].
#[derive(Clone, Debug)]
pub struct PartitionOutcome {
    pub hypergraph: CanonicalHypergraph,
    /// Whether the edge count reached `c * floor(n/l)^l`.
    pub density_met: bool,
    pub attempts: usize,
    /// True when enumeration stopped at the configured edge budget.
    pub truncated: bool,
}

impl PartitionOutcome {
    pub fn partition(&self) -> &[Vec<usize>] {
        self.hypergraph.parts()
    }
}

/// Random equitable partition: shuffle, then deal vertices round-robin.
pub(crate) fn random_equitable_partition(n: usize, l: usize, rng: &mut impl rand::Rng) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut parts = vec![Vec::new(); l];
    for (i, v) in order.into_iter().enumerate() {
        parts[i % l].push(v);
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    parts
}

/// Every copy of `h`'s edge colouring with vertex `i` in `parts[i]`.
/// Returns the hypergraph and whether `edge_budget` cut enumeration short.
pub fn canonical_copies(
    g: &ColouredCompleteGraph,
    h: &TotallyColouredPattern,
    parts: Vec<Vec<usize>>,
    edge_budget: usize,
) -> Result<(CanonicalHypergraph, bool)> {
    if parts.len() != h.l() {
        return Err(Error::InvalidParameter("one part per pattern vertex required".into()));
    }
    let masks: Vec<BitSet> = parts.iter().map(|p| BitSet::from_indices(g.n(), p.iter().copied())).collect();
    let mut edges = BTreeSet::new();
    let mut truncated = false;
    if g.r() == h.r() {
        let mut tuple = Vec::with_capacity(h.l());
        enumerate_copies(g, h, &masks, &mut tuple, &mut edges, edge_budget, &mut truncated);
    }
    Ok((CanonicalHypergraph::new(parts, edges)?, truncated))
}

fn enumerate_copies(
    g: &ColouredCompleteGraph,
    h: &TotallyColouredPattern,
    masks: &[BitSet],
    tuple: &mut Vec<usize>,
    out: &mut BTreeSet<Vec<usize>>,
    budget: usize,
    truncated: &mut bool,
) {
    if *truncated {
        return;
    }
    let i = tuple.len();
    if i == h.l() {
        if out.len() >= budget {
            *truncated = true;
            return;
        }
        out.insert(tuple.clone());
        return;
    }
    let mut cand = masks[i].clone();
    for (j, &u) in tuple.iter().enumerate() {
        if let Some(c) = h.edge_colour(j, i) {
            cand.intersect_with(g.neighbours(c, u));
        }
    }
    for v in cand.iter() {
        tuple.push(v);
        enumerate_copies(g, h, masks, tuple, out, budget, truncated);
        tuple.pop();
        if *truncated {
            return;
        }
    }
}

/// Draws random equitable partitions (up to `max_partition_retries`) until
/// the canonical copies number at least `c * floor(n/l)^l`; otherwise returns
/// the partition with the most copies.
pub fn canonical_partition(
    g: &ColouredCompleteGraph,
    h: &TotallyColouredPattern,
    config: &FinderConfig,
) -> Result<PartitionOutcome> {
    config.validate()?;
    let l = h.l();
    if g.n() < l {
        return Err(Error::InvalidParameter(format!("host has {} < {l} vertices", g.n())));
    }
    let mut rng = crate::constructions::rng_from_seed(config.seed);
    let mut best: Option<PartitionOutcome> = None;
    for attempt in 1..=config.max_partition_retries {
        let parts = random_equitable_partition(g.n(), l, &mut rng);
        let (hg, truncated) = canonical_copies(g, h, parts, config.edge_budget)?;
        let density_met = config.density_met(hg.len(), g.n(), l);
        let better = best.as_ref().map_or(true, |b| hg.len() > b.hypergraph.len());
        if better {
            best = Some(PartitionOutcome {
                hypergraph: hg,
                density_met,
                attempts: attempt,
                truncated,
            });
        }
        if density_met {
            break;
        }
    }
    let mut out = best.expect("at least one attempt");
    out.attempts = out.attempts.max(1);
    Ok(out)
}
