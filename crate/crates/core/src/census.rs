//! Exact counts of 2-coloured `K4` classes and of alternating `K_{2,2}` copies.
//!
//! The 11 isomorphism classes of 2-coloured `K4` are derived at first use by
//! brute force over the 64 colourings modulo `S4`. A class key is the
//! lexicographically least 6-character colour string over the pairs
//! `01 02 03 12 13 23`.
//!
//! Two census paths exist. The reference path classifies every 4-subset. The
//! fast path computes non-induced counts of every 4-vertex red graph from
//! degrees, codegrees and a `K4` count, then recovers the induced counts by
//! back-substitution through the (unitriangular) subgraph-containment matrix.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{Colour, ColouredCompleteGraph, BLUE, RED};

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pair_index(a: usize, b: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    PAIRS.iter().position(|&p| p == (a, b)).unwrap()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Bit `i` of a code is the colour of pair `PAIRS[i]`.
fn code_string(code: u8) -> String {
    (0..6).map(|i| if code >> i & 1 == 1 { '1' } else { '0' }).collect()
}

fn red_edge_count(code: u8) -> u32 {
    6 - code.count_ones()
}

struct ClassTable {
    /// Canonical key of each class, sorted.
    keys: Vec<String>,
    /// Representative code (lexicographically least string) of each class.
    reps: Vec<u8>,
    /// Class index of each of the 64 codes.
    class_of: [usize; 64],
    /// `containment[f][h]`: red spanning subgraphs of class `h`'s red graph isomorphic to class `f`'s.
    containment: Vec<Vec<i128>>,
}

fn canonical_code(code: u8, perms: &[Vec<usize>]) -> u8 {
    perms
        .iter()
        .map(|p| {
            let mut out = 0u8;
            for (i, &(a, b)) in PAIRS.iter().enumerate() {
                if code >> i & 1 == 1 {
                    out |= 1 << pair_index(p[a], p[b]);
                }
            }
            out
        })
        .min_by_key(|&c| code_string(c))
        .unwrap()
}

fn class_table() -> &'static ClassTable {
    static TABLE: OnceLock<ClassTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let perms = permutations(4);
        let canon: Vec<u8> = (0..64u8).map(|c| canonical_code(c, &perms)).collect();
        let mut reps: Vec<u8> = canon.clone();
        reps.sort_by_key(|&c| code_string(c));
        reps.dedup();
        let keys: Vec<String> = reps.iter().map(|&c| code_string(c)).collect();
        let mut class_of = [0usize; 64];
        for code in 0..64 {
            class_of[code] = reps.iter().position(|&r| r == canon[code]).unwrap();
        }
        let k = reps.len();
        let mut containment = vec![vec![0i128; k]; k];
        for (h, &rep) in reps.iter().enumerate() {
            let red_bits: Vec<usize> = (0..6).filter(|&i| rep >> i & 1 == 0).collect();
            for sub in 0u32..(1 << red_bits.len()) {
                // spanning red subgraph: chosen red pairs stay red, the rest become blue
                let mut code = 0x3fu8;
                for (j, &bit) in red_bits.iter().enumerate() {
                    if sub >> j & 1 == 1 {
                        code &= !(1 << bit);
                    }
                }
                containment[class_of[code as usize]][h] += 1;
            }
        }
        ClassTable {
            keys,
            reps,
            class_of,
            containment,
        }
    })
}

/// Number of 2-coloured `K4` classes up to isomorphism.
pub fn k4_class_count() -> usize {
    class_table().keys.len()
}

/// Class key of the colouring `g` restricted to four distinct vertices.
pub fn classify_quadruple(g: &ColouredCompleteGraph, q: [usize; 4]) -> String {
    let t = class_table();
    t.keys[t.class_of[quadruple_code(g, q) as usize]].clone()
}

fn quadruple_code(g: &ColouredCompleteGraph, q: [usize; 4]) -> u8 {
    let mut code = 0u8;
    for (i, &(a, b)) in PAIRS.iter().enumerate() {
        if g.colour(q[a], q[b]) == BLUE {
            code |= 1 << i;
        }
    }
    code
}

fn class_of_red_edges(red: &[(usize, usize)]) -> usize {
    let mut code = 0x3fu8;
    for &(a, b) in red {
        code &= !(1 << pair_index(a, b));
    }
    class_table().class_of[code as usize]
}

/// Class key of the 4-vertex colouring whose red pairs are `red`.
pub fn class_key_of_red_edges(red: &[(usize, usize)]) -> String {
    class_table().keys[class_of_red_edges(red)].clone()
}

pub fn c4_class_key() -> String {
    class_key_of_red_edges(&[(0, 1), (1, 2), (2, 3), (0, 3)])
}

pub fn c4bar_class_key() -> String {
    class_key_of_red_edges(&[(0, 2), (1, 3)])
}

pub fn p3o_class_key() -> String {
    // blue path 0-1-2-3, red path 2-0-3-1
    class_key_of_red_edges(&[(0, 2), (0, 3), (1, 3)])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternCensus {
    pub n: usize,
    /// Every one of the 11 class keys, including empty classes.
    pub k4_counts: BTreeMap<String, u64>,
    pub count_c4: u64,
    pub count_c4bar: u64,
    pub count_p3o: u64,
    pub total_quadruples: u64,
}

impl PatternCensus {
    fn from_counts(n: usize, counts: &[u64]) -> Result<Self> {
        let t = class_table();
        let k4_counts: BTreeMap<String, u64> = t.keys.iter().cloned().zip(counts.iter().copied()).collect();
        let total = crate::patterns::binomial(n, 4);
        let total_quadruples = u64::try_from(total).map_err(|_| Error::Overflow("C(n, 4)"))?;
        Ok(Self {
            n,
            count_c4: k4_counts[&c4_class_key()],
            count_c4bar: k4_counts[&c4bar_class_key()],
            count_p3o: k4_counts[&p3o_class_key()],
            k4_counts,
            total_quadruples,
        })
    }

    /// `C4 + C4bar + P3o`.
    pub fn alternating_completions(&self) -> u64 {
        self.count_c4 + self.count_c4bar + self.count_p3o
    }
}

fn require_two_colours(g: &ColouredCompleteGraph) -> Result<()> {
    if g.r() != 2 {
        return Err(Error::NotTwoColoured(g.r()));
    }
    Ok(())
}

/// Counts every class via the fast path.
pub fn census_k4(g: &ColouredCompleteGraph) -> Result<PatternCensus> {
    census_k4_fast(g)
}

/// Classifies every 4-subset; `O(n^4)`.
pub fn census_k4_reference(g: &ColouredCompleteGraph) -> Result<PatternCensus> {
    require_two_colours(g)?;
    let n = g.n();
    let t = class_table();
    let k = t.keys.len();
    let counts = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut local = vec![0u64; k];
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    for d in (c + 1)..n {
                        local[t.class_of[quadruple_code(g, [a, b, c, d]) as usize]] += 1;
                    }
                }
            }
            local
        })
        .reduce(|| vec![0u64; k], |mut x, y| {
            for (a, b) in x.iter_mut().zip(y) {
                *a += b;
            }
            x
        });
    PatternCensus::from_counts(n, &counts)
}

fn choose(n: i128, k: u32) -> i128 {
    if n < k as i128 {
        return 0;
    }
    let mut acc = 1i128;
    for i in 0..k as i128 {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of `K4`s in the red graph.
fn red_k4_count(g: &ColouredCompleteGraph) -> i128 {
    let n = g.n();
    (0..n)
        .into_par_iter()
        .map(|u| {
            let nu = g.neighbours(RED, u);
            let mut local = 0i128;
            let mut later = nu.clone();
            later.clear_through(u);
            for v in later.iter() {
                let mut common = nu.intersection(g.neighbours(RED, v));
                common.clear_through(v);
                for w in common.iter() {
                    let mut rest = common.intersection(g.neighbours(RED, w));
                    rest.clear_through(w);
                    local += rest.count() as i128;
                }
            }
            local
        })
        .sum()
}

/// Codegree-based census; agrees exactly with [`census_k4_reference`].
pub fn census_k4_fast(g: &ColouredCompleteGraph) -> Result<PatternCensus> {
    require_two_colours(g)?;
    let n = g.n();
    let ni = n as i128;
    let deg: Vec<i128> = (0..n).map(|v| g.colour_degree(v, RED) as i128).collect();

    // per-pair sums that need the red codegree
    struct PairSums {
        triangles3: i128,
        p4_products: i128,
        c4_twice: i128,
        diamonds: i128,
        vertex_triangles2: Vec<i128>,
    }
    let sums = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut s = PairSums {
                triangles3: 0,
                p4_products: 0,
                c4_twice: 0,
                diamonds: 0,
                vertex_triangles2: vec![0; n],
            };
            for v in (u + 1)..n {
                let cd = g.codegree(RED, u, RED, v) as i128;
                s.c4_twice += choose(cd, 2);
                if g.colour(u, v) == RED {
                    s.triangles3 += cd;
                    s.p4_products += (deg[u] - 1) * (deg[v] - 1);
                    s.diamonds += choose(cd, 2);
                    s.vertex_triangles2[u] += cd;
                    s.vertex_triangles2[v] += cd;
                }
            }
            s
        })
        .reduce(
            || PairSums {
                triangles3: 0,
                p4_products: 0,
                c4_twice: 0,
                diamonds: 0,
                vertex_triangles2: vec![0; n],
            },
            |mut a, b| {
                a.triangles3 += b.triangles3;
                a.p4_products += b.p4_products;
                a.c4_twice += b.c4_twice;
                a.diamonds += b.diamonds;
                for (x, y) in a.vertex_triangles2.iter_mut().zip(b.vertex_triangles2) {
                    *x += y;
                }
                a
            },
        );

    let m: i128 = deg.iter().sum::<i128>() / 2;
    let triangles = sums.triangles3 / 3;
    let cherries: i128 = deg.iter().map(|&d| choose(d, 2)).sum();
    let stars: i128 = deg.iter().map(|&d| choose(d, 3)).sum();
    // vertex_triangles2[v] counts each triangle at v twice
    let paws: i128 = (0..n).map(|v| sums.vertex_triangles2[v] / 2 * (deg[v] - 2).max(0)).sum();

    let non_induced: Vec<(Vec<(usize, usize)>, i128)> = vec![
        (vec![], choose(ni, 4)),
        (vec![(0, 1)], m * choose(ni - 2, 2)),
        (vec![(0, 1), (1, 2)], cherries * (ni - 3)),
        (vec![(0, 1), (2, 3)], choose(m, 2) - cherries),
        (vec![(0, 1), (0, 2), (1, 2)], triangles * (ni - 3)),
        (vec![(0, 1), (0, 2), (0, 3)], stars),
        (vec![(0, 1), (1, 2), (2, 3)], sums.p4_products - 3 * triangles),
        (vec![(0, 1), (1, 2), (2, 3), (0, 3)], sums.c4_twice / 2),
        (vec![(0, 1), (0, 2), (1, 2), (2, 3)], paws),
        (vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)], sums.diamonds),
        (PAIRS.to_vec(), red_k4_count(g)),
    ];

    let t = class_table();
    let k = t.keys.len();
    let mut rhs = vec![0i128; k];
    for (edges, count) in &non_induced {
        rhs[class_of_red_edges(edges)] = *count;
    }
    // back-substitute from the densest red graph downwards
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&h| std::cmp::Reverse(red_edge_count(t.reps[h])));
    let mut induced = vec![0i128; k];
    for (pos, &f) in order.iter().enumerate() {
        let mut value = rhs[f];
        for &h in &order[..pos] {
            value -= t.containment[f][h] * induced[h];
        }
        debug_assert_eq!(t.containment[f][f], 1);
        induced[f] = value;
    }
    let counts = induced
        .into_iter()
        .map(|c| u64::try_from(c).map_err(|_| Error::Overflow("class count")))
        .collect::<Result<Vec<u64>>>()?;
    PatternCensus::from_counts(n, &counts)
}

/// A red/blue colouring of the complete bipartite graph on `X × Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteColouring {
    x: Vec<usize>,
    y: Vec<usize>,
    /// Row-major `|X| × |Y|`.
    colours: Vec<Colour>,
}

impl BipartiteColouring {
    pub fn new(x: Vec<usize>, y: Vec<usize>, colours: Vec<Colour>) -> Result<Self> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::InvalidParameter("both sides must be nonempty".into()));
        }
        if colours.len() != x.len() * y.len() {
            return Err(Error::InvalidParameter("colour table has the wrong size".into()));
        }
        if colours.iter().any(|&c| c > BLUE) {
            return Err(Error::NotTwoColoured(3));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &v in x.iter().chain(&y) {
            if !seen.insert(v) {
                return Err(Error::Overlap(v));
            }
        }
        Ok(Self { x, y, colours })
    }

    /// The bipartite restriction of `g` to `X × Y`.
    pub fn from_graph(g: &ColouredCompleteGraph, x: &[usize], y: &[usize]) -> Result<Self> {
        if g.r() != 2 {
            return Err(Error::NotTwoColoured(g.r()));
        }
        if let Some(&v) = x.iter().chain(y).find(|&&v| v >= g.n()) {
            return Err(Error::InvalidParameter(format!("vertex {v} out of range")));
        }
        let mut colours = Vec::with_capacity(x.len() * y.len());
        let mut xs = BitSet::new(g.n());
        for &u in x {
            xs.insert(u);
        }
        for &u in x {
            for &v in y {
                if xs.contains(v) {
                    return Err(Error::Overlap(v));
                }
                colours.push(g.colour(u, v));
            }
        }
        Self::new(x.to_vec(), y.to_vec(), colours)
    }

    pub fn x(&self) -> &[usize] {
        &self.x
    }

    pub fn y(&self) -> &[usize] {
        &self.y
    }

    /// Colour between the `i`-th vertex of `X` and the `j`-th of `Y`.
    #[inline]
    pub fn colour(&self, i: usize, j: usize) -> Colour {
        self.colours[i * self.y.len() + j]
    }

    pub fn min_degree_x(&self, c: Colour) -> usize {
        (0..self.x.len())
            .map(|i| (0..self.y.len()).filter(|&j| self.colour(i, j) == c).count())
            .min()
            .unwrap_or(0)
    }

    pub fn min_degree_y(&self, c: Colour) -> usize {
        (0..self.y.len())
            .map(|j| (0..self.x.len()).filter(|&i| self.colour(i, j) == c).count())
            .min()
            .unwrap_or(0)
    }

    /// Copies of `M1` by the codegree formula: for each pair `y < y'`, the
    /// product of `#{x: xy red, xy' blue}` and `#{x: xy blue, xy' red}`.
    pub fn count_m1(&self) -> u64 {
        let (nx, ny) = (self.x.len(), self.y.len());
        let col_bits = |j: usize, c: Colour| BitSet::from_indices(nx, (0..nx).filter(|&i| self.colour(i, j) == c));
        let red: Vec<BitSet> = (0..ny).map(|j| col_bits(j, RED)).collect();
        let blue: Vec<BitSet> = (0..ny).map(|j| col_bits(j, BLUE)).collect();
        let total: u64 = (0..ny)
            .into_par_iter()
            .map(|j| {
                ((j + 1)..ny)
                    .map(|j2| {
                        let a = red[j].intersection_count(&blue[j2]) as u64;
                        let b = blue[j].intersection_count(&red[j2]) as u64;
                        a * b
                    })
                    .sum::<u64>()
            })
            .sum();
        debug_assert!(nx > 24 || ny > 24 || total == self.count_m1_pairs());
        total
    }

    /// Copies of `M1` by enumerating every `{x, x'} × {y, y'}`.
    pub fn count_m1_pairs(&self) -> u64 {
        let (nx, ny) = (self.x.len(), self.y.len());
        let mut count = 0;
        for i in 0..nx {
            for i2 in (i + 1)..nx {
                for j in 0..ny {
                    for j2 in (j + 1)..ny {
                        let (a, b, c, d) = (self.colour(i, j), self.colour(i, j2), self.colour(i2, j), self.colour(i2, j2));
                        if a != b && a != c && d != b && d != c {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }
}

pub fn count_m1(b: &BipartiteColouring) -> u64 {
    b.count_m1()
}

/// Alternating red/blue 4-cycles between disjoint vertex sets `x` and `y` of `g`.
pub fn count_alternating_c4(g: &ColouredCompleteGraph, x: &[usize], y: &[usize]) -> Result<u64> {
    Ok(BipartiteColouring::from_graph(g, x, y)?.count_m1())
}
