//! Edge-coloured complete graphs and balancedness measures.

use num_rational::Ratio;
use num_traits::Zero;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub type Colour = u8;
pub type Rational = Ratio<i64>;

pub const RED: Colour = 0;
pub const BLUE: Colour = 1;
pub const GREEN: Colour = 2;

const NO_COLOUR: Colour = Colour::MAX;

/// An `r`-edge-coloured complete graph on `n` vertices.
///
/// The colour table is dense and symmetric; alongside it every colour keeps
/// one adjacency bitrow per vertex, so colour degrees and codegrees are
/// popcounts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredCompleteGraph {
    n: usize,
    r: u8,
    table: Vec<Colour>,
    rows: Vec<BitSet>,
}

impl ColouredCompleteGraph {
    /// Builds a graph by evaluating `colour(u, v)` once for every `u < v`.
    pub fn from_fn(n: usize, r: u8, mut colour: impl FnMut(usize, usize) -> Colour) -> Result<Self> {
        check_shape(n, r)?;
        let mut table = vec![NO_COLOUR; n * n];
        for u in 0..n {
            for v in (u + 1)..n {
                let c = colour(u, v);
                if c >= r {
                    return Err(Error::InvalidGraph(format!(
                        "edge ({u},{v}) has colour {c}, but r = {r}"
                    )));
                }
                table[u * n + v] = c;
                table[v * n + u] = c;
            }
        }
        Ok(Self::from_table(n, r, table))
    }

    /// Builds a graph from an explicit edge list that must name every pair exactly once.
    pub fn from_edges(n: usize, r: u8, edges: &[(usize, usize, Colour)]) -> Result<Self> {
        check_shape(n, r)?;
        let mut table = vec![NO_COLOUR; n * n];
        for &(u, v, c) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if c >= r {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) has colour {c}, but r = {r}"
                )));
            }
            if table[u * n + v] != NO_COLOUR {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u},{v})")));
            }
            table[u * n + v] = c;
            table[v * n + u] = c;
        }
        for u in 0..n {
            for v in (u + 1)..n {
                if table[u * n + v] == NO_COLOUR {
                    return Err(Error::InvalidGraph(format!("missing edge ({u},{v})")));
                }
            }
        }
        Ok(Self::from_table(n, r, table))
    }

    pub fn monochromatic(n: usize, r: u8, colour: Colour) -> Result<Self> {
        Self::from_fn(n, r, |_, _| colour)
    }

    fn from_table(n: usize, r: u8, table: Vec<Colour>) -> Self {
        let mut rows = vec![BitSet::new(n); r as usize * n];
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    let c = table[u * n + v] as usize;
                    rows[c * n + u].insert(v);
                }
            }
        }
        Self { n, r, table, rows }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> u8 {
        self.r
    }

    /// Colour of the pair `{u, v}`. Panics on `u == v`.
    #[inline]
    pub fn colour(&self, u: usize, v: usize) -> Colour {
        assert!(u != v, "no self-loops in a complete graph");
        self.table[u * self.n + v]
    }

    /// The `colour`-neighbourhood of `v` as a bitrow.
    #[inline]
    pub fn neighbours(&self, colour: Colour, v: usize) -> &BitSet {
        &self.rows[colour as usize * self.n + v]
    }

    #[inline]
    pub fn colour_degree(&self, v: usize, colour: Colour) -> usize {
        self.neighbours(colour, v).count()
    }

    /// `|N_a(u) ∩ N_b(v)|`.
    #[inline]
    pub fn codegree(&self, a: Colour, u: usize, b: Colour, v: usize) -> usize {
        self.neighbours(a, u).intersection_count(self.neighbours(b, v))
    }

    /// All edges `(u, v, c)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Colour)> + '_ {
        (0..self.n).flat_map(move |u| ((u + 1)..self.n).map(move |v| (u, v, self.colour(u, v))))
    }

    pub fn edge_count(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    /// Size of each colour class.
    pub fn colour_class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.r as usize];
        for (_, _, c) in self.edges() {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// The subgraph induced on `vertices`, relabelled `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        let mut seen = BitSet::new(self.n);
        for &v in vertices {
            if v >= self.n {
                return Err(Error::InvalidGraph(format!("vertex {v} out of range")));
            }
            if seen.contains(v) {
                return Err(Error::Overlap(v));
            }
            seen.insert(v);
        }
        Self::from_fn(vertices.len(), self.r, |i, j| self.colour(vertices[i], vertices[j]))
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabelled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::InvalidParameter("permutation length differs from n".into()));
        }
        let mut inverse = vec![usize::MAX; self.n];
        for (v, &p) in perm.iter().enumerate() {
            if p >= self.n || inverse[p] != usize::MAX {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
            inverse[p] = v;
        }
        Self::from_fn(self.n, self.r, |a, b| self.colour(inverse[a], inverse[b]))
    }

    /// Interchanges the two colours of a 2-coloured graph.
    pub fn colour_swap(&self) -> Result<Self> {
        if self.r != 2 {
            return Err(Error::NotTwoColoured(self.r));
        }
        Self::from_fn(self.n, 2, |u, v| 1 - self.colour(u, v))
    }

    /// Returns a copy with the colour of `{u, v}` replaced.
    pub fn with_edge(&self, u: usize, v: usize, colour: Colour) -> Result<Self> {
        if u == v || u >= self.n || v >= self.n || colour >= self.r {
            return Err(Error::InvalidParameter(format!("cannot recolour ({u},{v}) to {colour}")));
        }
        let mut table = self.table.clone();
        table[u * self.n + v] = colour;
        table[v * self.n + u] = colour;
        Ok(Self::from_table(self.n, self.r, table))
    }

    /// Checks the structural invariants: symmetry, colour range, and that the
    /// bitrows of all colours partition every row.
    pub fn check_invariants(&self) -> Result<()> {
        for u in 0..self.n {
            let mut covered = BitSet::new(self.n);
            let mut total = 0;
            for c in 0..self.r {
                let row = self.neighbours(c, u);
                if row.contains(u) {
                    return Err(Error::InvalidGraph(format!("self-loop bit at {u}")));
                }
                total += row.count();
                covered.union_with(row);
            }
            if total != self.n - 1 || covered.count() != self.n - 1 {
                return Err(Error::InvalidGraph(format!("bitrows do not partition row {u}")));
            }
            for v in 0..self.n {
                if u == v {
                    continue;
                }
                let c = self.table[u * self.n + v];
                if c >= self.r || c != self.table[v * self.n + u] || !self.neighbours(c, u).contains(v) {
                    return Err(Error::InvalidGraph(format!("inconsistent pair ({u},{v})")));
                }
            }
        }
        Ok(())
    }
}

fn check_shape(n: usize, r: u8) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidGraph("n must be at least 1".into()));
    }
    if r < 2 || r == NO_COLOUR {
        return Err(Error::InvalidGraph(format!("r must be in [2, 254], got {r}")));
    }
    Ok(())
}

/// Per-vertex colour degrees and the derived balance measures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceProfile {
    /// `degrees[v][c]` is the number of `c`-coloured edges at `v`.
    pub degrees: Vec<Vec<usize>>,
    pub min_degree_per_colour: usize,
    /// `min_degree_per_colour / n`.
    pub epsilon_local: Rational,
    /// Smallest colour class divided by `C(n, 2)`; zero when `n = 1`.
    pub epsilon_global: Rational,
}

pub fn balance_profile(g: &ColouredCompleteGraph) -> BalanceProfile {
    let degrees: Vec<Vec<usize>> = (0..g.n())
        .map(|v| (0..g.r()).map(|c| g.colour_degree(v, c)).collect())
        .collect();
    let min_degree_per_colour = degrees
        .iter()
        .flat_map(|row| row.iter().copied())
        .min()
        .unwrap_or(0);
    let pairs = g.edge_count() as i64;
    let min_class = g.colour_class_sizes().into_iter().min().unwrap_or(0) as i64;
    let epsilon_global = if pairs == 0 {
        Rational::zero()
    } else {
        Rational::new(min_class, pairs)
    };
    BalanceProfile {
        degrees,
        min_degree_per_colour,
        epsilon_local: Rational::new(min_degree_per_colour as i64, g.n() as i64),
        epsilon_global,
    }
}

/// True iff every vertex has at least `eps * n` edges of every colour, compared exactly.
pub fn is_locally_balanced(g: &ColouredCompleteGraph, eps: Rational) -> bool {
    let threshold = eps * Rational::from_integer(g.n() as i64);
    (0..g.n()).all(|v| (0..g.r()).all(|c| Rational::from_integer(g.colour_degree(v, c) as i64) >= threshold))
}
