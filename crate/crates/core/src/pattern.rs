//! The forbidden digraph `H` with its cached derived data.

use crate::copies::{count_injections, EmbeddingPlan};
use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// Largest edge count for which all edge subsets are enumerated.
pub const MAX_SUBSET_EDGES: usize = 24;

#[derive(Clone, Debug)]
pub struct Pattern {
    graph: Digraph,
    edges: Vec<(usize, usize)>,
    automorphisms: u64,
    core: Digraph,
    core_automorphisms: u64,
    core_plan: EmbeddingPlan,
}

impl Pattern {
    /// Wraps `graph`, which must have at least two edges.
    pub fn new(graph: Digraph) -> Result<Self> {
        let r = graph.edge_count();
        if r < 2 {
            return Err(Error::Precondition(format!(
                "pattern must have at least 2 edges, found {r}"
            )));
        }
        let keep = graph.non_isolated();
        let mut relabel = vec![usize::MAX; graph.n()];
        for (i, &v) in keep.iter().enumerate() {
            relabel[v] = i;
        }
        let core = Digraph::from_edges(
            keep.len(),
            graph.edges().map(|(u, v)| (relabel[u], relabel[v])),
        )?;
        let automorphisms = count_injections(&graph, &graph);
        let core_automorphisms = count_injections(&core, &core);
        let core_plan = EmbeddingPlan::new(&core);
        Ok(Pattern {
            edges: graph.edges().collect(),
            graph,
            automorphisms,
            core,
            core_automorphisms,
            core_plan,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Pattern::new(Digraph::parse(text)?)
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    /// `r = e(H)`.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// `h = v(H)`, counting isolated vertices.
    pub fn order(&self) -> usize {
        self.graph.n()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `|Aut(H)|`.
    pub fn automorphisms(&self) -> u64 {
        self.automorphisms
    }

    /// `H` with isolated vertices removed.
    pub fn core(&self) -> &Digraph {
        &self.core
    }

    pub fn core_automorphisms(&self) -> u64 {
        self.core_automorphisms
    }

    pub(crate) fn core_plan(&self) -> &EmbeddingPlan {
        &self.core_plan
    }

    pub fn has_two_cycle(&self) -> bool {
        self.graph.f2() > 0
    }

    /// Edges selected by `mask` (bit `i` is `edges()[i]`).
    pub fn edges_of(&self, mask: u64) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect()
    }
}

/// An edge subset `H' ⊆ H` with the vertices it spans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Subpattern {
    /// Bit `i` selects `Pattern::edges()[i]`.
    pub mask: u64,
    /// Vertices incident to the chosen edges.
    pub vertices: u32,
    pub edges: u32,
}

/// Every edge subset with at least two edges, in increasing mask order.
pub fn enumerate_subpatterns(pattern: &Pattern) -> Result<Vec<Subpattern>> {
    let r = pattern.size();
    if r > MAX_SUBSET_EDGES {
        return Err(Error::Budget(format!(
            "pattern has {r} edges; subset enumeration is limited to {MAX_SUBSET_EDGES}"
        )));
    }
    let endpoint_masks: Vec<u64> = pattern
        .edges()
        .iter()
        .map(|&(u, v)| 1u64 << u | 1u64 << v)
        .collect();
    let mut out = Vec::new();
    for mask in 1u64..1 << r {
        let edges = mask.count_ones();
        if edges < 2 {
            continue;
        }
        let mut span = 0u64;
        let mut rest = mask;
        while rest != 0 {
            span |= endpoint_masks[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        out.push(Subpattern {
            mask,
            vertices: span.count_ones(),
            edges,
        });
    }
    Ok(out)
}
