//! Totally-coloured patterns, their blow-ups, and blow-up witnesses.
//!
//! A pattern lives on a complete graph with `l <= 8` vertices. Vertex colours
//! may be absent (an edge-only pattern such as `P3o` or `C4`), and a pair may be
//! left unconstrained (the two non-edges of `M1`, which is a `K_{2,2}`).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{Colour, ColouredCompleteGraph, BLUE, RED};

pub const MAX_PATTERN_VERTICES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotallyColouredPattern {
    l: usize,
    r: u8,
    vertex_colours: Vec<Option<Colour>>,
    edge_colours: Vec<Option<Colour>>,
}

impl TotallyColouredPattern {
    /// `edge(i, j)` is called for `i < j`; `None` leaves the pair unconstrained.
    pub fn new(
        r: u8,
        vertex_colours: Vec<Option<Colour>>,
        mut edge: impl FnMut(usize, usize) -> Option<Colour>,
    ) -> Result<Self> {
        let l = vertex_colours.len();
        if l == 0 || l > MAX_PATTERN_VERTICES {
            return Err(Error::InvalidPattern(format!(
                "pattern must have 1..={MAX_PATTERN_VERTICES} vertices, got {l}"
            )));
        }
        if r < 2 {
            return Err(Error::InvalidPattern(format!("r must be at least 2, got {r}")));
        }
        if let Some(c) = vertex_colours.iter().flatten().find(|&&c| c >= r) {
            return Err(Error::InvalidPattern(format!("vertex colour {c} >= r = {r}")));
        }
        let mut edge_colours = vec![None; l * l];
        for i in 0..l {
            for j in (i + 1)..l {
                let c = edge(i, j);
                if let Some(c) = c {
                    if c >= r {
                        return Err(Error::InvalidPattern(format!("edge ({i},{j}) colour {c} >= r = {r}")));
                    }
                }
                edge_colours[i * l + j] = c;
                edge_colours[j * l + i] = c;
            }
        }
        Ok(Self {
            l,
            r,
            vertex_colours,
            edge_colours,
        })
    }

    /// The edge-only pattern whose edge colours are those of `g`.
    pub fn from_graph(g: &ColouredCompleteGraph) -> Result<Self> {
        Self::new(g.r(), vec![None; g.n()], |i, j| Some(g.colour(i, j)))
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn vertex_colour(&self, i: usize) -> Option<Colour> {
        self.vertex_colours[i]
    }

    pub fn edge_colour(&self, i: usize, j: usize) -> Option<Colour> {
        assert!(i != j);
        self.edge_colours[i * self.l + j]
    }

    /// True when every pair carries a colour.
    pub fn is_complete(&self) -> bool {
        (0..self.l).all(|i| ((i + 1)..self.l).all(|j| self.edge_colour(i, j).is_some()))
    }

    /// Drops the vertex colours.
    pub fn edge_pattern(&self) -> Self {
        Self {
            vertex_colours: vec![None; self.l],
            ..self.clone()
        }
    }

    /// Interchanges red and blue on vertices and edges.
    pub fn swap(&self) -> Result<Self> {
        if self.r != 2 {
            return Err(Error::NotTwoColoured(self.r));
        }
        let flip = |c: Option<Colour>| c.map(|c| 1 - c);
        Ok(Self {
            l: self.l,
            r: 2,
            vertex_colours: self.vertex_colours.iter().map(|&c| flip(c)).collect(),
            edge_colours: self.edge_colours.iter().map(|&c| flip(c)).collect(),
        })
    }

    /// Vertex `i` becomes `perm[i]`.
    pub fn relabelled(&self, perm: &[usize]) -> Self {
        let mut inverse = vec![0; self.l];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        let vertex_colours = (0..self.l).map(|a| self.vertex_colours[inverse[a]]).collect();
        let mut edge_colours = vec![None; self.l * self.l];
        for a in 0..self.l {
            for b in 0..self.l {
                if a != b {
                    edge_colours[a * self.l + b] = self.edge_colours[inverse[a] * self.l + inverse[b]];
                }
            }
        }
        Self {
            l: self.l,
            r: self.r,
            vertex_colours,
            edge_colours,
        }
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        if self.l != other.l || self.r != other.r {
            return false;
        }
        let l = self.l;
        find_isomorphism(
            l,
            |a| self.vertex_colours[a],
            |b| other.vertex_colours[b],
            |a1, a2| self.edge_colours[a1 * l + a2],
            |b1, b2| other.edge_colours[b1 * l + b2],
        )
        .is_some()
    }

    pub fn to_json(&self) -> Value {
        let mut edges = Vec::new();
        for i in 0..self.l {
            for j in (i + 1)..self.l {
                if let Some(c) = self.edge_colour(i, j) {
                    edges.push(json!([i, j, c]));
                }
            }
        }
        json!({
            "l": self.l,
            "r": self.r,
            "vertexColours": self.vertex_colours,
            "edges": edges,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidPattern(msg.to_string());
        let l = value["l"].as_u64().ok_or_else(|| bad("missing \"l\""))? as usize;
        let r = value["r"].as_u64().ok_or_else(|| bad("missing \"r\""))?;
        if r > 254 {
            return Err(bad("r too large"));
        }
        let vc = value["vertexColours"]
            .as_array()
            .ok_or_else(|| bad("missing \"vertexColours\""))?;
        if vc.len() != l {
            return Err(bad("vertexColours length differs from l"));
        }
        let vertex_colours = vc
            .iter()
            .map(|v| match v {
                Value::Null => Ok(None),
                v => v
                    .as_u64()
                    .filter(|&c| c < 255)
                    .map(|c| Some(c as Colour))
                    .ok_or_else(|| bad("vertex colour must be an integer or null")),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut given = BTreeMap::new();
        for e in value["edges"].as_array().ok_or_else(|| bad("missing \"edges\""))? {
            let t = e
                .as_array()
                .filter(|a| a.len() == 3)
                .and_then(|a| Some((a[0].as_u64()? as usize, a[1].as_u64()? as usize, a[2].as_u64()?)))
                .ok_or_else(|| bad("malformed edge"))?;
            let (i, j, c) = t;
            if i >= l || j >= l || i == j || c >= r {
                return Err(bad("edge out of range"));
            }
            if given.insert((i.min(j), i.max(j)), c as Colour).is_some() {
                return Err(bad("duplicate edge"));
            }
        }
        Self::new(r as u8, vertex_colours, |i, j| given.get(&(i, j)).copied())
    }
}

/// Backtracking search for a colour-preserving bijection `a -> b` on `0..l`.
fn find_isomorphism(
    l: usize,
    vertex_a: impl Fn(usize) -> Option<Colour>,
    vertex_b: impl Fn(usize) -> Option<Colour>,
    edge_a: impl Fn(usize, usize) -> Option<Colour>,
    edge_b: impl Fn(usize, usize) -> Option<Colour>,
) -> Option<Vec<usize>> {
    fn extend(
        depth: usize,
        l: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(&[usize], usize) -> bool,
    ) -> bool {
        if depth == l {
            return true;
        }
        for b in 0..l {
            if used[b] || !ok(map, b) {
                continue;
            }
            used[b] = true;
            map.push(b);
            if extend(depth + 1, l, map, used, ok) {
                return true;
            }
            map.pop();
            used[b] = false;
        }
        false
    }
    let ok = |map: &[usize], b: usize| {
        let a = map.len();
        vertex_a(a) == vertex_b(b) && map.iter().enumerate().all(|(a2, &b2)| edge_a(a, a2) == edge_b(b, b2))
    };
    let mut map = Vec::with_capacity(l);
    let mut used = vec![false; l];
    extend(0, l, &mut map, &mut used, &ok).then_some(map)
}

/// Colour-preserving isomorphism test for small hosts (exhaustive with pruning).
pub fn graphs_isomorphic(g: &ColouredCompleteGraph, h: &ColouredCompleteGraph) -> bool {
    if g.n() != h.n() || g.r() != h.r() {
        return false;
    }
    let mut dg: Vec<Vec<usize>> = (0..g.n()).map(|v| (0..g.r()).map(|c| g.colour_degree(v, c)).collect()).collect();
    let mut dh: Vec<Vec<usize>> = (0..h.n()).map(|v| (0..h.r()).map(|c| h.colour_degree(v, c)).collect()).collect();
    let (first_g, first_h) = (dg.clone(), dh.clone());
    dg.sort();
    dh.sort();
    if dg != dh {
        return false;
    }
    find_isomorphism(
        g.n(),
        |a| degree_key(&first_g[a]),
        |b| degree_key(&first_h[b]),
        |a1, a2| Some(g.colour(a1, a2)),
        |b1, b2| Some(h.colour(b1, b2)),
    )
    .is_some()
}

// Hash of a degree vector folded into the vertex-colour slot of the matcher;
// equal vectors give equal keys, so this only prunes.
fn degree_key(d: &[usize]) -> Option<Colour> {
    let mut h: u64 = 1469598103934665603;
    for &x in d {
        h = (h ^ x as u64).wrapping_mul(1099511628211);
    }
    Some((h % 251) as Colour)
}

/// The named patterns, keyed by their CLI names.
pub fn pattern_library() -> BTreeMap<&'static str, TotallyColouredPattern> {
    let mut lib = BTreeMap::new();
    let p1 = TotallyColouredPattern::new(2, vec![Some(RED), Some(RED)], |_, _| Some(BLUE)).unwrap();
    let p2 = TotallyColouredPattern::new(2, vec![Some(RED), Some(BLUE)], |_, _| Some(RED)).unwrap();
    let p3 = TotallyColouredPattern::new(2, vec![Some(RED), Some(BLUE), Some(BLUE), Some(RED)], |i, j| {
        Some(if j == i + 1 { BLUE } else { RED })
    })
    .unwrap();
    let c4 = TotallyColouredPattern::new(2, vec![None; 4], |i, j| {
        Some(if (i + 2) % 4 == j || (j + 2) % 4 == i { BLUE } else { RED })
    })
    .unwrap();
    // x0 = 0, x1 = 1, y0 = 2, y1 = 3
    let m1 = TotallyColouredPattern::new(2, vec![None; 4], |i, j| match (i, j) {
        (0, 2) | (1, 3) => Some(RED),
        (0, 3) | (1, 2) => Some(BLUE),
        _ => None,
    })
    .unwrap();
    lib.insert("P1bar", p1.swap().unwrap());
    lib.insert("P2bar", p2.swap().unwrap());
    lib.insert("C4bar", c4.swap().unwrap());
    lib.insert("P3o", p3.edge_pattern());
    lib.insert("P1", p1);
    lib.insert("P2", p2);
    lib.insert("P3", p3);
    lib.insert("C4", c4);
    lib.insert("M1", m1);
    lib
}

pub fn pattern_by_name(name: &str) -> Result<TotallyColouredPattern> {
    pattern_library()
        .remove(name)
        .ok_or_else(|| Error::InvalidPattern(format!("unknown pattern name {name:?}")))
}

/// `H[t]`: part `i` is `i*t .. (i+1)*t`, a clique in vertex `i`'s colour
/// (red when the pattern leaves it uncoloured); cross pairs take the edge colour.
pub fn blow_up(h: &TotallyColouredPattern, t: usize) -> Result<ColouredCompleteGraph> {
    if t == 0 {
        return Err(Error::InvalidParameter("blow-up size t must be at least 1".into()));
    }
    if !h.is_complete() {
        return Err(Error::InvalidPattern(
            "cannot blow up a pattern with unconstrained pairs".into(),
        ));
    }
    ColouredCompleteGraph::from_fn(h.l() * t, h.r(), |u, v| {
        let (i, j) = (u / t, v / t);
        if i == j {
            h.vertex_colour(i).unwrap_or(RED)
        } else {
            h.edge_colour(i, j).unwrap()
        }
    })
}

/// The parts `[i*t, (i+1)*t)` used by [`blow_up`].
pub fn defining_partition(l: usize, t: usize) -> Vec<Vec<usize>> {
    (0..l).map(|i| (i * t..(i + 1) * t).collect()).collect()
}

/// Every vertex of `H[2]` sees all `r` colours; a vertex's own colour counts.
pub fn is_unibalanced(h: &TotallyColouredPattern) -> bool {
    (0..h.l()).all(|i| {
        let mut seen = vec![false; h.r() as usize];
        if let Some(c) = h.vertex_colour(i) {
            seen[c as usize] = true;
        }
        for j in (0..h.l()).filter(|&j| j != i) {
            if let Some(c) = h.edge_colour(i, j) {
                seen[c as usize] = true;
            }
        }
        seen.into_iter().all(|s| s)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupWitness {
    pub pattern: TotallyColouredPattern,
    pub parts: Vec<Vec<usize>>,
    pub t: usize,
    /// When set, part cliques may have any colour; otherwise part `i` must be
    /// coloured like pattern vertex `i` (if it has a colour).
    pub homogeneous: bool,
}

impl BlowupWitness {
    /// Clique colour of each part; `None` for single-vertex parts.
    pub fn part_colours(&self, g: &ColouredCompleteGraph) -> Vec<Option<Colour>> {
        self.parts
            .iter()
            .map(|p| if p.len() >= 2 { Some(g.colour(p[0], p[1])) } else { None })
            .collect()
    }
}

pub fn verify_witness(g: &ColouredCompleteGraph, w: &BlowupWitness) -> Result<bool> {
    let h = &w.pattern;
    if w.parts.len() != h.l() {
        return Err(Error::InvalidWitness(format!(
            "{} parts for a pattern on {} vertices",
            w.parts.len(),
            h.l()
        )));
    }
    if w.t == 0 {
        return Err(Error::InvalidWitness("t must be at least 1".into()));
    }
    let mut used = BitSet::new(g.n());
    for part in &w.parts {
        if part.len() != w.t {
            return Err(Error::InvalidWitness(format!("part of size {} but t = {}", part.len(), w.t)));
        }
        for &v in part {
            if v >= g.n() {
                return Err(Error::InvalidWitness(format!("vertex {v} out of range")));
            }
            if used.contains(v) {
                return Err(Error::Overlap(v));
            }
            used.insert(v);
        }
    }
    if g.r() != h.r() {
        return Ok(false);
    }
    for (i, part) in w.parts.iter().enumerate() {
        let wanted = if w.homogeneous { None } else { h.vertex_colour(i) };
        let mut clique: Option<Colour> = wanted;
        for (a, &u) in part.iter().enumerate() {
            for &v in &part[a + 1..] {
                let c = g.colour(u, v);
                match clique {
                    None => clique = Some(c),
                    Some(k) if k != c => return Ok(false),
                    _ => {}
                }
            }
        }
    }
    for i in 0..h.l() {
        for j in (i + 1)..h.l() {
            let Some(c) = h.edge_colour(i, j) else { continue };
            for &u in &w.parts[i] {
                for &v in &w.parts[j] {
                    if g.colour(u, v) != c {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub const DEFAULT_EXHAUSTIVE_BUDGET: u128 = 1 << 40;

/// Exhaustive search for a `t`-blow-up of `h` in `g`.
///
/// The size of the raw search space `C(n, t)^l` is checked against `budget`
/// before searching; the search itself is a pruned backtrack over the parts in
/// order, each part enumerated as a sorted `t`-subset in lexicographic order,
/// so the witness returned is the lexicographically least one.
pub fn find_pattern_blowup_exhaustive(
    g: &ColouredCompleteGraph,
    h: &TotallyColouredPattern,
    t: usize,
    homogeneous: bool,
    budget: u128,
) -> Result<Option<BlowupWitness>> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    let per_part = binomial(g.n(), t);
    let needed = (0..h.l()).try_fold(1u128, |acc, _| acc.checked_mul(per_part)).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    if g.r() != h.r() || h.l() * t > g.n() {
        return Ok(None);
    }
    let search = ExhaustiveSearch { g, h, t, homogeneous };
    let all = BitSet::full(g.n());
    let firsts = search.part_choices(0, &all);
    let found = firsts.par_iter().find_map_first(|first| {
        let mut parts = vec![first.clone()];
        search.extend(&mut parts).then_some(parts)
    });
    Ok(found.map(|parts| BlowupWitness {
        pattern: h.clone(),
        parts,
        t,
        homogeneous,
    }))
}

struct ExhaustiveSearch<'a> {
    g: &'a ColouredCompleteGraph,
    h: &'a TotallyColouredPattern,
    t: usize,
    homogeneous: bool,
}

impl ExhaustiveSearch<'_> {
    fn candidates(&self, parts: &[Vec<usize>]) -> BitSet {
        let i = parts.len();
        let mut cand = BitSet::full(self.g.n());
        for (j, part) in parts.iter().enumerate() {
            for &u in part {
                cand.remove(u);
                if let Some(c) = self.h.edge_colour(j, i) {
                    cand.intersect_with(self.g.neighbours(c, u));
                }
            }
        }
        cand
    }

    fn extend(&self, parts: &mut Vec<Vec<usize>>) -> bool {
        if parts.len() == self.h.l() {
            return true;
        }
        let cand = self.candidates(parts);
        if cand.count() < self.t {
            return false;
        }
        for choice in self.part_choices(parts.len(), &cand) {
            parts.push(choice);
            if self.extend(parts) {
                return true;
            }
            parts.pop();
        }
        false
    }

    /// Monochromatic `t`-subsets of `cand` for pattern vertex `i`, lexicographic.
    fn part_choices(&self, i: usize, cand: &BitSet) -> Vec<Vec<usize>> {
        let fixed = if self.homogeneous { None } else { self.h.vertex_colour(i) };
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(self.t);
        self.cliques(cand.clone(), fixed, &mut chosen, &mut out);
        out
    }

    fn cliques(&self, cand: BitSet, colour: Option<Colour>, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if chosen.len() == self.t {
            out.push(chosen.clone());
            return;
        }
        let need = self.t - chosen.len();
        let verts: Vec<usize> = cand.iter().collect();
        for (k, &v) in verts.iter().enumerate() {
            if verts.len() - k < need {
                break;
            }
            let mut rest = cand.clone();
            rest.clear_through(v);
            let next = match (colour, chosen.first()) {
                (Some(c), _) => {
                    rest.intersect_with(self.g.neighbours(c, v));
                    Some(c)
                }
                (None, None) => None,
                // the second vertex fixes the clique colour
                (None, Some(&first)) => {
                    let c = self.g.colour(first, v);
                    rest.intersect_with(self.g.neighbours(c, v));
                    rest.intersect_with(self.g.neighbours(c, first));
                    Some(c)
                }
            };
            chosen.push(v);
            self.cliques(rest, next, chosen, out);
            chosen.pop();
        }
    }
}
