//! The auxiliary hypergraph whose vertices are the ordered pairs of `[N]`
//! and whose hyperedges are the edge sets of copies of the pattern.
//! Digraphs on `[N]` are exactly the vertex subsets, and the pattern-free
//! ones are exactly the independent sets.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use crate::copies::count_copies;
use crate::digraph::{Digraph, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::pattern::Pattern;

/// Hard limit on the number of distinct hyperedges materialised.
pub const MAX_HYPEREDGES: u64 = 5_000_000;

/// Bijection between ordered pairs `(i, j)`, `i != j`, of `[N]` and
/// `0..N(N-1)`: `idx = i·(N-1) + (j if j < i else j-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairUniverse {
    n: usize,
}

impl PairUniverse {
    pub fn new(n: usize) -> Self {
        PairUniverse { n }
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    /// `N² - N`.
    pub fn size(&self) -> usize {
        self.n * self.n.saturating_sub(1)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i != j && i < self.n && j < self.n);
        i * (self.n - 1) + if j < i { j } else { j - 1 }
    }

    #[inline]
    pub fn pair(&self, idx: usize) -> (usize, usize) {
        let i = idx / (self.n - 1);
        let r = idx % (self.n - 1);
        (i, if r < i { r } else { r + 1 })
    }

    pub fn set_of(&self, g: &Digraph) -> FixedBitSet {
        assert_eq!(g.n(), self.n);
        let mut s = FixedBitSet::with_capacity(self.size());
        for (u, v) in g.edges() {
            s.insert(self.index(u, v));
        }
        s
    }

    pub fn digraph_of(&self, set: &FixedBitSet) -> Digraph {
        let mut g = Digraph::empty(self.n);
        for idx in set.ones() {
            let (u, v) = self.pair(idx);
            g.insert(u, v);
        }
        g
    }
}

#[derive(Clone, Debug)]
pub struct PairHypergraph {
    universe: PairUniverse,
    uniformity: usize,
    edges: Vec<Vec<u32>>,
    incidence: Vec<Vec<u32>>,
    labelled_copy_count: u128,
}

impl PairHypergraph {
    /// Builds the hypergraph for `pattern` on `[n]`. Hyperedges are sorted
    /// index arrays, listed in increasing lexicographic order.
    pub fn build(n: usize, pattern: &Pattern) -> Result<Self> {
        let h = pattern.order();
        if n < h {
            return Err(Error::Precondition(format!(
                "N={n} is smaller than v(H)={h}"
            )));
        }
        if n > MAX_VERTICES {
            return Err(Error::Budget(format!("N={n} exceeds {MAX_VERTICES}")));
        }
        let core = pattern.core();
        let estimate = (0..core.n()).fold(1f64, |acc, i| acc * (n - i) as f64)
            / pattern.core_automorphisms() as f64;
        if estimate > MAX_HYPEREDGES as f64 {
            return Err(Error::Budget(format!(
                "D({n},H) would have about {estimate:.0} hyperedges (limit {MAX_HYPEREDGES})"
            )));
        }

        let universe = PairUniverse::new(n);
        let host = Digraph::complete(n);
        let mut distinct = BTreeSet::new();
        let mut core_injections = 0u128;
        let core_edges: Vec<(usize, usize)> = core.edges().collect();
        let _ = pattern.core_plan().for_each(&host, |image| {
            core_injections += 1;
            let mut e: Vec<u32> = core_edges
                .iter()
                .map(|&(u, v)| universe.index(image[u], image[v]) as u32)
                .collect();
            e.sort_unstable();
            distinct.insert(e);
            ControlFlow::Continue(())
        });
        let isolated = (h - core.n()) as u128;
        let free = (n - core.n()) as u128;
        let labelled_copy_count = (0..isolated).fold(core_injections, |acc, i| acc * (free - i));

        let edges: Vec<Vec<u32>> = distinct.into_iter().collect();
        let mut incidence = vec![Vec::new(); universe.size()];
        for (id, e) in edges.iter().enumerate() {
            for &x in e {
                incidence[x as usize].push(id as u32);
            }
        }
        let d = PairHypergraph {
            universe,
            uniformity: pattern.size(),
            edges,
            incidence,
            labelled_copy_count,
        };
        d.self_check(pattern)?;
        Ok(d)
    }

    fn self_check(&self, pattern: &Pattern) -> Result<()> {
        let r = self.uniformity;
        for e in &self.edges {
            let g = self.decode(e);
            if e.len() != r || g.edge_count() != r || count_copies(&g, pattern) != 1 {
                return Err(Error::Internal(format!(
                    "hyperedge {e:?} does not decode to a single copy of H"
                )));
            }
        }
        Ok(())
    }

    pub fn universe(&self) -> PairUniverse {
        self.universe
    }

    /// `r`.
    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Raw count of labelled injections `V(H) → [N]`.
    pub fn labelled_copy_count(&self) -> u128 {
        self.labelled_copy_count
    }

    /// Ids of the hyperedges through universe element `x`.
    pub fn incident(&self, x: usize) -> &[u32] {
        &self.incidence[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.incidence[x].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `r·e(D)/|U|`, using distinct hyperedges.
    pub fn average_degree(&self) -> f64 {
        if self.universe.size() == 0 {
            return 0.0;
        }
        (self.uniformity * self.edges.len()) as f64 / self.universe.size() as f64
    }

    pub fn decode(&self, edge: &[u32]) -> Digraph {
        let mut g = Digraph::empty(self.universe.vertices());
        for &x in edge {
            let (u, v) = self.universe.pair(x as usize);
            g.insert(u, v);
        }
        g
    }

    pub fn edge_set(&self, id: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.universe.size());
        for &x in &self.edges[id] {
            s.insert(x as usize);
        }
        s
    }

    /// Number of hyperedges lying entirely inside `set`.
    pub fn spanned_edges(&self, set: &FixedBitSet) -> usize {
        self.edges
            .iter()
            .filter(|e| e.iter().all(|&x| set.contains(x as usize)))
            .count()
    }

    pub fn is_independent(&self, set: &FixedBitSet) -> bool {
        // only edges through a member can lie inside the set
        set.ones().all(|x| {
            self.incidence[x].iter().all(|&id| {
                !self.edges[id as usize]
                    .iter()
                    .all(|&y| set.contains(y as usize))
            })
        })
    }

    /// Whether `g` (a digraph on `[N]`) spans no hyperedge.
    pub fn independent_set_check(&self, g: &Digraph) -> Result<bool> {
        if g.n() != self.universe.vertices() {
            return Err(Error::Precondition(format!(
                "digraph has {} vertices, hypergraph is on N={}",
                g.n(),
                self.universe.vertices()
            )));
        }
        Ok(self.is_independent(&self.universe.set_of(g)))
    }

    /// Hyperedges as `u64` masks; only when `N(N-1) <= 64`.
    pub fn edge_masks(&self) -> Option<Vec<u64>> {
        if self.universe.size() > 64 {
            return None;
        }
        Some(
            self.edges
                .iter()
                .map(|e| e.iter().fold(0u64, |m, &x| m | 1 << x))
                .collect(),
        )
    }

    /// Header `N=<int> r=<int> edges=<int>`, then one line of `r`
    /// pair-indices per hyperedge.
    pub fn export(&self) -> String {
        let mut s = format!(
            "N={} r={} edges={}\n",
            self.universe.vertices(),
            self.uniformity,
            self.edges.len()
        );
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(u32::to_string).collect();
            writeln!(s, "{}", line.join(" ")).unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::zoo;

    #[test]
    fn codec_is_bijective() {
        for n in 2..9 {
            let u = PairUniverse::new(n);
            let mut seen = vec![false; u.size()];
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let idx = u.index(i, j);
                    assert!(!seen[idx]);
                    seen[idx] = true;
                    assert_eq!(u.pair(idx), (i, j));
                }
            }
            assert!(seen.iter().all(|&b| b));
        }
    }

    #[test]
    fn c3_on_three_vertices() {
        let d = PairHypergraph::build(3, &Pattern::new(zoo::c3()).unwrap()).unwrap();
        assert_eq!(d.universe().size(), 6);
        assert_eq!(d.edge_count(), 2);
        assert_eq!(d.labelled_copy_count(), 6);
    }

    #[test]
    fn t3_on_three_vertices() {
        let d = PairHypergraph::build(3, &Pattern::new(zoo::t3()).unwrap()).unwrap();
        assert_eq!(d.edge_count(), 6);
        assert_eq!(d.labelled_copy_count(), 6);
    }

    #[test]
    fn too_few_vertices() {
        let err = PairHypergraph::build(2, &Pattern::new(zoo::c3()).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn independence_examples() {
        let p = Pattern::new(zoo::c3()).unwrap();
        let d = PairHypergraph::build(4, &p).unwrap();
        assert!(d.independent_set_check(&Digraph::empty(4)).unwrap());
        let embedded = Digraph::from_edges(4, [(1, 3), (3, 2), (2, 1)]).unwrap();
        assert!(!d.independent_set_check(&embedded).unwrap());
        let tt = Digraph::from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        assert!(d.independent_set_check(&tt).unwrap());
        assert!(d.independent_set_check(&Digraph::empty(3)).is_err());
    }

    #[test]
    fn export_format() {
        let d = PairHypergraph::build(3, &Pattern::new(zoo::c3()).unwrap()).unwrap();
        let text = d.export();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("N=3 r=3 edges=2"));
        // 0->1 (0), 1->2 (3), 2->0 (4); 0->2 (1), 2->1 (5), 1->0 (2)
        assert_eq!(lines.next(), Some("0 3 4"));
        assert_eq!(lines.next(), Some("1 2 5"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn spanned_counts_copies() {
        let p = Pattern::new(zoo::c3()).unwrap();
        let d = PairHypergraph::build(4, &p).unwrap();
        let all = d.universe().set_of(&Digraph::complete(4));
        assert_eq!(d.spanned_edges(&all), d.edge_count());
        assert_eq!(d.edge_count(), 8);
    }
}
