use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::graph::{Colour, Rational};

use super::hypergraph::{min_degree_cleanup, CanonicalHypergraph};
use super::kst::{kst_star, BipartiteIncidence, KstMode};
use super::ramsey::best_monochromatic_clique;

/// Sets `S_1..S_l` of equal size, one per part, such that the pair colouring
/// is constant on each set, every cross pair lies in a surviving edge, and
/// `matching` lists `|S_1|` disjoint edges on their union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub sets: Vec<Vec<usize>>,
    pub colours: Vec<Option<Colour>>,
    pub matching: Vec<Vec<usize>>,
    /// Strategy used by the star search at each level above the base.
    pub kst_modes: Vec<KstMode>,
}

impl Cover {
    pub fn size(&self) -> usize {
        self.sets.first().map_or(0, Vec::len)
    }

    pub(crate) fn empty(l: usize) -> Self {
        Self {
            sets: vec![Vec::new(); l],
            colours: vec![None; l],
            matching: Vec::new(),
            kst_modes: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverOutcome {
    /// The cover reached the requested size.
    Complete(Cover),
    /// The best cover found is smaller than requested.
    TooSmall { cover: Cover, achieved: usize },
}

impl CoverOutcome {
    pub fn cover(&self) -> &Cover {
        match self {
            CoverOutcome::Complete(c) | CoverOutcome::TooSmall { cover: c, .. } => c,
        }
    }

    pub fn into_cover(self) -> Cover {
        match self {
            CoverOutcome::Complete(c) | CoverOutcome::TooSmall { cover: c, .. } => c,
        }
    }

    pub fn achieved(&self) -> usize {
        self.cover().size()
    }
}

/// Builds a cover by induction on the uniformity.
///
/// At each level the edges are cleaned so that every surviving prefix has
/// degree at least `threshold * |V_l|`, the shadow is covered recursively,
/// and the recursive matching is extended by a star search into the last
/// part followed by a monochromatic clique inside the common neighbourhood.
/// `target` only decides the outcome variant.
pub fn hypergraph_cover(
    hg: &CanonicalHypergraph,
    phi: &(dyn Fn(usize, usize) -> Colour + Sync),
    r: u8,
    threshold: Rational,
    exact_budget: u128,
    target: usize,
) -> CoverOutcome {
    let cover = cover_rec(hg, phi, r, threshold, exact_budget);
    let achieved = cover.size();
    if achieved >= target.max(1) {
        CoverOutcome::Complete(cover)
    } else {
        CoverOutcome::TooSmall { cover, achieved }
    }
}

fn cover_rec(
    hg: &CanonicalHypergraph,
    phi: &(dyn Fn(usize, usize) -> Colour + Sync),
    r: u8,
    threshold: Rational,
    exact_budget: u128,
) -> Cover {
    let l = hg.l();
    let cleaned = min_degree_cleanup(hg, threshold);
    if cleaned.is_empty() {
        return Cover::empty(l);
    }
    if l == 1 {
        let vs: Vec<usize> = cleaned.edges().iter().map(|e| e[0]).collect();
        let clique = best_monochromatic_clique(&vs, phi, r);
        return Cover {
            matching: clique.vertices.iter().map(|&v| vec![v]).collect(),
            colours: vec![clique.colour],
            sets: vec![clique.vertices],
            kst_modes: Vec::new(),
        };
    }
    let sub = cover_rec(&cleaned.shadow(), phi, r, threshold, exact_budget);
    if sub.size() == 0 {
        return Cover::empty(l);
    }

    let last = &cleaned.parts()[l - 1];
    let local: HashMap<usize, usize> = last.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let ext = cleaned.extensions();
    let rows: Vec<BitSet> = sub
        .matching
        .iter()
        .map(|prefix| {
            let ends = ext.get(prefix.as_slice()).map_or(&[][..], Vec::as_slice);
            BitSet::from_indices(last.len(), ends.iter().map(|v| local[v]))
        })
        .collect();
    let f = BipartiteIncidence::from_rows(last.len(), rows);

    let m = sub.size();
    let mut best: Option<(usize, Vec<usize>, Vec<usize>, Option<Colour>, KstMode)> = None;
    for s in (1..=m).rev() {
        if best.as_ref().is_some_and(|b| s <= b.0) {
            break;
        }
        let Some(star) = kst_star(&f, s, exact_budget) else {
            continue;
        };
        let t_side: Vec<usize> = star.t_side.iter().map(|&i| last[i]).collect();
        let clique = best_monochromatic_clique(&t_side, phi, r);
        let achieved = s.min(clique.len());
        if best.as_ref().map_or(true, |b| achieved > b.0) {
            best = Some((achieved, star.s_side, clique.vertices, clique.colour, star.mode));
        }
    }
    let Some((t, s_side, clique, clique_colour, mode)) = best else {
        return Cover::empty(l);
    };

    let rows: Vec<&Vec<usize>> = s_side[..t].iter().map(|&i| &sub.matching[i]).collect();
    let mut matching: Vec<Vec<usize>> = rows
        .iter()
        .zip(&clique[..t])
        .map(|(prefix, &v)| {
            let mut e = (*prefix).clone();
            e.push(v);
            e
        })
        .collect();
    matching.sort();
    let mut sets: Vec<Vec<usize>> = (0..l).map(|i| matching.iter().map(|e| e[i]).collect()).collect();
    for s in &mut sets {
        s.sort_unstable();
    }
    let mut colours: Vec<Option<Colour>> = sub.colours.clone();
    colours.push(clique_colour);
    if t < 2 {
        colours = vec![None; l];
    }
    let mut kst_modes = sub.kst_modes;
    kst_modes.push(mode);
    Cover {
        sets,
        colours,
        matching,
        kst_modes,
    }
}
