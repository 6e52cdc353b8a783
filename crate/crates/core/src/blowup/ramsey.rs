use crate::graph::Colour;

/// A monochromatic clique; `colour` is `None` when the clique has fewer than
/// two vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoClique {
    pub vertices: Vec<usize>,
    pub colour: Option<Colour>,
}

impl MonoClique {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Largest vertex set on which [`best_monochromatic_clique`] runs the exact search.
pub const EXACT_CLIQUE_MAX: usize = 64;

/// Greedy Erdős–Szekeres: take the least live vertex, keep only its
/// majority-colour neighbourhood, repeat. The picks sharing the most frequent
/// colour, plus the final pick, form a monochromatic clique.
pub fn ramsey_clique(vertices: &[usize], phi: impl Fn(usize, usize) -> Colour, r: u8) -> MonoClique {
    let mut live: Vec<usize> = vertices.to_vec();
    live.sort_unstable();
    live.dedup();
    if live.is_empty() {
        return MonoClique { vertices: Vec::new(), colour: None };
    }
    let mut picks: Vec<(usize, Option<Colour>)> = Vec::new();
    while !live.is_empty() {
        let v = live.remove(0);
        if live.is_empty() {
            picks.push((v, None));
            break;
        }
        let mut counts = vec![0usize; r as usize];
        for &u in &live {
            counts[phi(v, u) as usize] += 1;
        }
        // Majority colour, ties to the smallest colour.
        let c = (0..r).max_by_key(|&c| (counts[c as usize], std::cmp::Reverse(c))).unwrap();
        picks.push((v, Some(c)));
        live.retain(|&u| phi(v, u) == c);
    }
    let mut per_colour = vec![0usize; r as usize];
    for &(_, c) in &picks {
        if let Some(c) = c {
            per_colour[c as usize] += 1;
        }
    }
    let best = (0..r).max_by_key(|&c| (per_colour[c as usize], std::cmp::Reverse(c))).unwrap();
    let last = picks.last().unwrap().0;
    let mut clique: Vec<usize> = picks
        .iter()
        .filter(|&&(_, c)| c == Some(best))
        .map(|&(v, _)| v)
        .collect();
    clique.push(last);
    clique.sort_unstable();
    let colour = (clique.len() >= 2).then_some(best);
    MonoClique { vertices: clique, colour }
}

/// `floor(log_{2r} n)`, the size the greedy strategy is checked against.
pub fn greedy_ramsey_bound(n: usize, r: u8) -> usize {
    let base = 2 * r as usize;
    let mut k = 0;
    let mut p = base;
    while p <= n {
        k += 1;
        p = p.saturating_mul(base);
    }
    k
}

/// Maximum monochromatic clique by branch and bound; at most
/// [`EXACT_CLIQUE_MAX`] vertices. Ties go to the smallest colour.
pub fn max_monochromatic_clique(vertices: &[usize], phi: impl Fn(usize, usize) -> Colour, r: u8) -> MonoClique {
    let mut vs: Vec<usize> = vertices.to_vec();
    vs.sort_unstable();
    vs.dedup();
    assert!(vs.len() <= EXACT_CLIQUE_MAX, "exact clique search is limited to {EXACT_CLIQUE_MAX} vertices");
    if vs.len() <= 1 {
        return MonoClique { vertices: vs, colour: None };
    }
    let k = vs.len();
    let mut best: (usize, u64, Colour) = (1, 1, 0);
    for c in 0..r {
        let adj: Vec<u64> = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| j != i && phi(vs[i], vs[j]) == c)
                    .fold(0u64, |m, j| m | 1 << j)
            })
            .collect();
        let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        let mut found = (best.0, 0u64);
        clique_rec(&adj, 0, all, &mut found);
        if found.1 != 0 && found.0 > best.0 {
            best = (found.0, found.1, c);
        }
    }
    let clique: Vec<usize> = (0..k).filter(|&i| best.1 >> i & 1 == 1).map(|i| vs[i]).collect();
    let colour = (clique.len() >= 2).then_some(best.2);
    MonoClique { vertices: clique, colour }
}

fn clique_rec(adj: &[u64], current: u64, mut cand: u64, best: &mut (usize, u64)) {
    let size = current.count_ones() as usize;
    if cand == 0 {
        if size > best.0 {
            *best = (size, current);
        }
        return;
    }
    while cand != 0 {
        if size + cand.count_ones() as usize <= best.0 {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        clique_rec(adj, current | 1 << v, cand & adj[v], best);
    }
}

/// Exact search when the set is small enough, greedy otherwise.
pub fn best_monochromatic_clique(vertices: &[usize], phi: impl Fn(usize, usize) -> Colour + Copy, r: u8) -> MonoClique {
    let greedy = ramsey_clique(vertices, phi, r);
    if vertices.len() <= EXACT_CLIQUE_MAX {
        let exact = max_monochromatic_clique(vertices, phi, r);
        if exact.len() > greedy.len() {
            return exact;
        }
    }
    greedy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::make_random;
    use crate::graph::ColouredCompleteGraph;

    fn is_mono(g: &ColouredCompleteGraph, c: &MonoClique) -> bool {
        let vs = &c.vertices;
        vs.iter().enumerate().all(|(i, &u)| {
            vs[i + 1..].iter().all(|&v| Some(g.colour(u, v)) == c.colour)
        })
    }

    #[test]
    fn monochromatic_input_returns_everything() {
        let g = ColouredCompleteGraph::monochromatic(10, 2, 1).unwrap();
        let vs: Vec<usize> = (0..10).collect();
        let c = ramsey_clique(&vs, |u, v| g.colour(u, v), 2);
        assert_eq!(c.vertices, vs);
        assert_eq!(c.colour, Some(1));
    }

    #[test]
    fn random_k16_gives_a_checked_clique() {
        for seed in 0..20 {
            let g = make_random(16, 2, seed).unwrap();
            let vs: Vec<usize> = (0..16).collect();
            let c = ramsey_clique(&vs, |u, v| g.colour(u, v), 2);
            assert!(c.len() >= 2);
            assert!(is_mono(&g, &c));
        }
    }

    #[test]
    fn split_with_red_cross_edges() {
        // Red clique on 0..8, blue clique on 8..16, red cross edges.
        let g = ColouredCompleteGraph::from_fn(16, 2, |u, v| u8::from(u >= 8 && v >= 8)).unwrap();
        let vs: Vec<usize> = (0..16).collect();
        let c = ramsey_clique(&vs, |u, v| g.colour(u, v), 2);
        assert!(c.len() >= 4);
        assert!(is_mono(&g, &c));
    }

    #[test]
    fn single_vertex_has_no_colour() {
        let c = ramsey_clique(&[5], |_, _| 0, 3);
        assert_eq!(c.vertices, vec![5]);
        assert_eq!(c.colour, None);
    }

    #[test]
    fn exact_search_agrees_with_brute_force() {
        for seed in 0..20 {
            let g = make_random(11, 2, seed).unwrap();
            let brute = (1u32..1 << 11)
                .filter(|&m| {
                    let vs: Vec<usize> = (0..11).filter(|i| m >> i & 1 == 1).collect();
                    (0..2).any(|c| {
                        vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.colour(u, v) == c))
                    })
                })
                .map(|m| m.count_ones() as usize)
                .max()
                .unwrap();
            let vs: Vec<usize> = (0..11).collect();
            let exact = max_monochromatic_clique(&vs, |u, v| g.colour(u, v), 2);
            assert_eq!(exact.len(), brute);
            assert!(is_mono(&g, &exact));
            assert!(ramsey_clique(&vs, |u, v| g.colour(u, v), 2).len() <= brute);
        }
    }

    #[test]
    fn greedy_bound_values() {
        assert_eq!(greedy_ramsey_bound(1, 2), 0);
        assert_eq!(greedy_ramsey_bound(3, 2), 0);
        assert_eq!(greedy_ramsey_bound(4, 2), 1);
        assert_eq!(greedy_ramsey_bound(16, 2), 2);
        assert_eq!(greedy_ramsey_bound(63, 2), 2);
        assert_eq!(greedy_ramsey_bound(64, 2), 3);
        assert_eq!(greedy_ramsey_bound(36, 3), 2);
    }
}
