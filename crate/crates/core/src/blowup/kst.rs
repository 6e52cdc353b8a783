use serde::Serialize;

use crate::bitset::BitSet;
use crate::patterns::binomial;

/// Bipartite graph `A x B` stored as neighbourhood rows over `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteIncidence {
    b_len: usize,
    rows: Vec<BitSet>,
}

impl BipartiteIncidence {
    pub fn new(a_len: usize, b_len: usize) -> Self {
        Self {
            b_len,
            rows: vec![BitSet::new(b_len); a_len],
        }
    }

    pub fn from_rows(b_len: usize, rows: Vec<BitSet>) -> Self {
        assert!(rows.iter().all(|r| r.capacity() == b_len));
        Self { b_len, rows }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.rows[a].insert(b);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    pub fn a_len(&self) -> usize {
        self.rows.len()
    }

    pub fn b_len(&self) -> usize {
        self.b_len
    }

    pub fn row(&self, a: usize) -> &BitSet {
        &self.rows[a]
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KstMode {
    Greedy,
    Exact,
}

/// A complete bipartite subgraph `S x T` of an incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KstStar {
    pub s_side: Vec<usize>,
    pub t_side: Vec<usize>,
    pub mode: KstMode,
}

/// Finds `s` vertices of `A` with a large common neighbourhood.
///
/// Runs the greedy strategy and, when there are at most `exact_budget`
/// `s`-subsets of `A`, the exact maximisation over all of them. Returns
/// `None` if `s == 0`, `s > |A|`, or the best common neighbourhood is empty.
pub fn kst_star(f: &BipartiteIncidence, s: usize, exact_budget: u128) -> Option<KstStar> {
    if s == 0 || s > f.a_len() {
        return None;
    }
    let (mut s_side, mut common) = kst_greedy(f, s);
    let mut mode = KstMode::Greedy;
    if binomial(f.a_len(), s) <= exact_budget {
        if let Some((set, t)) = kst_exact(f, s) {
            s_side = set;
            common = t;
            mode = KstMode::Exact;
        }
    }
    if common.is_empty() {
        return None;
    }
    s_side.sort_unstable();
    Some(KstStar {
        s_side,
        t_side: common.iter().collect(),
        mode,
    })
}

fn kst_greedy(f: &BipartiteIncidence, s: usize) -> (Vec<usize>, BitSet) {
    let mut common = BitSet::full(f.b_len());
    let mut used = vec![false; f.a_len()];
    let mut chosen = Vec::with_capacity(s);
    for _ in 0..s {
        let best = (0..f.a_len())
            .filter(|&a| !used[a])
            .max_by_key(|&a| (f.row(a).intersection_count(&common), std::cmp::Reverse(a)))
            .expect("s <= |A|");
        used[best] = true;
        chosen.push(best);
        common.intersect_with(f.row(best));
    }
    (chosen, common)
}

/// Exact maximum of `|N(S)|` over `s`-subsets; ties go to the
/// lexicographically first subset.
fn kst_exact(f: &BipartiteIncidence, s: usize) -> Option<(Vec<usize>, BitSet)> {
    let mut best: Option<(Vec<usize>, BitSet)> = None;
    let mut stack = Vec::with_capacity(s);
    exact_rec(f, s, 0, BitSet::full(f.b_len()), &mut stack, &mut best);
    best
}

fn exact_rec(
    f: &BipartiteIncidence,
    s: usize,
    from: usize,
    common: BitSet,
    stack: &mut Vec<usize>,
    best: &mut Option<(Vec<usize>, BitSet)>,
) {
    let best_count = best.as_ref().map_or(0, |b| b.1.count());
    if best.is_some() && common.count() <= best_count {
        // Common neighbourhoods only shrink, so this branch cannot win.
        return;
    }
    if stack.len() == s {
        *best = Some((stack.clone(), common));
        return;
    }
    let remaining = s - stack.len();
    for a in from..=f.a_len() - remaining {
        stack.push(a);
        exact_rec(f, s, a + 1, common.intersection(f.row(a)), stack, best);
        stack.pop();
    }
}
