//! Embeddings of a pattern digraph into a host digraph.
//!
//! An injection `φ: V(H) → V(G)` is an embedding when every edge `uv` of `H`
//! maps to an edge `φ(u)φ(v)` of `G`. Candidates for each pattern vertex are
//! narrowed with bit-row intersections against the already placed
//! neighbours.

use std::ops::ControlFlow;

use crate::digraph::Digraph;
use crate::pattern::Pattern;

/// Precomputed search order for embedding one pattern.
#[derive(Clone, Debug)]
pub struct EmbeddingPlan {
    order: Vec<usize>,
    /// For position `i`: earlier positions `p` with an edge `order[i] -> order[p]`.
    out_to_earlier: Vec<Vec<usize>>,
    /// For position `i`: earlier positions `p` with an edge `order[p] -> order[i]`.
    in_from_earlier: Vec<Vec<usize>>,
}

impl EmbeddingPlan {
    pub fn new(pattern: &Digraph) -> Self {
        let h = pattern.n();
        let order = search_order(pattern);
        let mut out_to_earlier = vec![Vec::new(); h];
        let mut in_from_earlier = vec![Vec::new(); h];
        for i in 0..h {
            let x = order[i];
            for (p, &y) in order[..i].iter().enumerate() {
                if pattern.has_edge(x, y) {
                    out_to_earlier[i].push(p);
                }
                if pattern.has_edge(y, x) {
                    in_from_earlier[i].push(p);
                }
            }
        }
        EmbeddingPlan {
            order,
            out_to_earlier,
            in_from_earlier,
        }
    }

    pub fn pattern_order(&self) -> usize {
        self.order.len()
    }

    /// Calls `visit` with `image[x] = φ(x)` for every embedding, in a fixed
    /// deterministic order. Stops early when `visit` breaks.
    pub fn for_each<F>(&self, host: &Digraph, mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let h = self.order.len();
        if h > host.n() {
            return ControlFlow::Continue(());
        }
        let mut placed = vec![0usize; h];
        let mut image = vec![usize::MAX; h];
        self.extend(host, 0, 0, &mut placed, &mut image, &mut visit)
    }

    fn extend<F>(
        &self,
        host: &Digraph,
        depth: usize,
        used: u64,
        placed: &mut [usize],
        image: &mut [usize],
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if depth == self.order.len() {
            return visit(image);
        }
        let all = if host.n() == 64 { !0 } else { (1u64 << host.n()) - 1 };
        let mut cand = all & !used;
        for &p in &self.out_to_earlier[depth] {
            cand &= host.in_row(placed[p]);
        }
        for &p in &self.in_from_earlier[depth] {
            cand &= host.out_row(placed[p]);
        }
        let x = self.order[depth];
        while cand != 0 {
            let g = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            placed[depth] = g;
            image[x] = g;
            self.extend(host, depth + 1, used | 1 << g, placed, image, visit)?;
        }
        image[x] = usize::MAX;
        ControlFlow::Continue(())
    }

    pub fn count(&self, host: &Digraph) -> u64 {
        let mut c = 0u64;
        let _ = self.for_each(host, |_| {
            c += 1;
            ControlFlow::Continue(())
        });
        c
    }

    pub fn exists(&self, host: &Digraph) -> bool {
        self.for_each(host, |_| ControlFlow::Break(())).is_break()
    }
}

/// Vertices ordered so that each one (after the first of its component) is
/// adjacent to an earlier one; highest total degree first.
fn search_order(pattern: &Digraph) -> Vec<usize> {
    let h = pattern.n();
    let degree = |v: usize| (pattern.out_row(v) | pattern.in_row(v)).count_ones();
    let mut order = Vec::with_capacity(h);
    let mut placed = 0u64;
    while order.len() < h {
        let next = (0..h)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| {
                let nbrs = pattern.out_row(v) | pattern.in_row(v);
                ((nbrs & placed).count_ones(), degree(v), std::cmp::Reverse(v))
            })
            .expect("unplaced vertex");
        order.push(next);
        placed |= 1 << next;
    }
    order
}

/// Number of labelled embeddings of `pattern` into `host`.
pub fn count_injections(pattern: &Digraph, host: &Digraph) -> u64 {
    EmbeddingPlan::new(pattern).count(host)
}

/// Number of distinct edge subsets of `host` that form a copy of `pattern`.
///
/// Isolated vertices of the pattern only require that the host has enough
/// vertices; they never create additional edge subsets.
pub fn count_copies(host: &Digraph, pattern: &Pattern) -> u64 {
    if host.n() < pattern.order() {
        return 0;
    }
    let inj = pattern.core_plan().count(host);
    debug_assert_eq!(inj % pattern.core_automorphisms(), 0);
    inj / pattern.core_automorphisms()
}

/// Labelled injections of the full pattern (isolated vertices included).
pub fn count_labelled_copies(host: &Digraph, pattern: &Pattern) -> u64 {
    if host.n() < pattern.order() {
        return 0;
    }
    let core = pattern.core_plan().count(host);
    let free_host = (host.n() - pattern.core().n()) as u64;
    let isolated = (pattern.order() - pattern.core().n()) as u64;
    (0..isolated).fold(core, |acc, i| acc * (free_host - i))
}

pub fn contains_copy(host: &Digraph, pattern: &Pattern) -> bool {
    host.n() >= pattern.order() && pattern.core_plan().exists(host)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::zoo;

    fn pat(g: Digraph) -> Pattern {
        Pattern::new(g).unwrap()
    }

    #[test]
    fn dk3_contains_two_directed_triangles() {
        let c3 = pat(zoo::c3());
        assert_eq!(count_injections(&zoo::c3(), &zoo::dk3()), 6);
        assert_eq!(count_copies(&zoo::dk3(), &c3), 2);
    }

    #[test]
    fn pattern_in_itself() {
        for g in [zoo::c3(), zoo::t3(), zoo::dk3(), zoo::two_cycle(), zoo::path(4)] {
            let p = pat(g.clone());
            assert_eq!(count_copies(&g, &p), 1, "{g:?}");
        }
    }

    #[test]
    fn host_too_small() {
        let c3 = pat(zoo::c3());
        assert_eq!(count_copies(&Digraph::complete(2), &c3), 0);
        assert!(!contains_copy(&Digraph::complete(2), &c3));
    }

    #[test]
    fn isolated_vertices_do_not_multiply_copies() {
        // a single 2-cycle plus an isolated vertex
        let g = Digraph::from_edges(3, [(0, 1), (1, 0)]).unwrap();
        let p = pat(g);
        assert_eq!(count_copies(&Digraph::complete(2), &p), 0);
        assert_eq!(count_copies(&Digraph::complete(3), &p), 3);
        assert_eq!(count_labelled_copies(&Digraph::complete(3), &p), 6);
        assert_eq!(count_labelled_copies(&Digraph::complete(4), &p), 24);
    }

    #[test]
    fn t3_in_tournament() {
        // transitive tournament on 4 vertices has C(4,3) transitive triples
        let tt4 = Digraph::from_edges(4, (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))))
            .unwrap();
        assert_eq!(count_copies(&tt4, &pat(zoo::t3())), 4);
        assert_eq!(count_copies(&tt4, &pat(zoo::c3())), 0);
    }
}
