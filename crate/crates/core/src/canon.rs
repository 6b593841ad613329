//! Exact canonical forms for digraphs.
//!
//! The key is the lexicographically smallest adjacency string over all
//! vertex orderings reachable in an individualization–refinement search
//! tree. Refinement is invariant under relabelling, so the tree of an
//! isomorphic copy is the relabelled tree and the minimum is a true
//! canonical form. No hashing is involved; equal keys mean isomorphic
//! digraphs.

use std::cmp::Ordering;
use std::fmt;

use crate::digraph::Digraph;

/// `[n, packed adjacency bits]`, bits in row-major order over ordered pairs
/// `(p, q)`, `p != q`, most significant bit first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonKey(Vec<u8>);

impl CanonKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn n(&self) -> usize {
        self.0[0] as usize
    }

    /// The canonically labelled representative.
    pub fn to_digraph(&self) -> Digraph {
        let n = self.n();
        let mut g = Digraph::empty(n);
        let mut bit = 0usize;
        for p in 0..n {
            for q in 0..n {
                if p == q {
                    continue;
                }
                if self.0[1 + bit / 8] >> (7 - bit % 8) & 1 == 1 {
                    g.insert(p, q);
                }
                bit += 1;
            }
        }
        g
    }
}

impl fmt::Debug for CanonKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonKey({})", self.to_hex())
    }
}

impl fmt::Display for CanonKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[derive(Clone, Debug)]
pub struct Canonical {
    pub key: CanonKey,
    /// `labelling[v]` is the canonical position of vertex `v`.
    pub labelling: Vec<usize>,
    /// `|Aut(G)|`: the number of search leaves attaining the minimum.
    pub automorphisms: u64,
}

pub fn canonical_form(g: &Digraph) -> CanonKey {
    canonical_labelling(g).key
}

pub fn canonical_labelling(g: &Digraph) -> Canonical {
    let n = g.n();
    let colours = refine(g, vec![0; n]);
    let mut search = Search {
        g,
        best: None,
        automorphisms: 0,
    };
    search.descend(colours);
    let (key, labelling) = search.best.expect("search reaches at least one leaf");
    Canonical {
        key,
        labelling,
        automorphisms: search.automorphisms,
    }
}

pub fn automorphism_count(g: &Digraph) -> u64 {
    canonical_labelling(g).automorphisms
}

pub fn are_isomorphic(a: &Digraph, b: &Digraph) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && canonical_form(a) == canonical_form(b)
}

struct Search<'a> {
    g: &'a Digraph,
    best: Option<(CanonKey, Vec<usize>)>,
    automorphisms: u64,
}

impl Search<'_> {
    fn descend(&mut self, colours: Vec<u32>) {
        let n = self.g.n();
        let Some(target) = target_cell(&colours) else {
            let key = key_for(self.g, &colours);
            match self.best.as_ref().map(|(b, _)| key.cmp(b)) {
                None | Some(Ordering::Less) => {
                    let labelling = colours.iter().map(|&c| c as usize).collect();
                    self.best = Some((key, labelling));
                    self.automorphisms = 1;
                }
                Some(Ordering::Equal) => self.automorphisms += 1,
                Some(Ordering::Greater) => {}
            }
            return;
        };
        for v in 0..n {
            if colours[v] != target {
                continue;
            }
            // Individualize v: it keeps the cell's colour, the rest of the
            // cell moves just after it.
            let next: Vec<u32> = colours
                .iter()
                .enumerate()
                .map(|(u, &c)| {
                    let c2 = 2 * c;
                    if c == target && u != v {
                        c2 + 1
                    } else {
                        c2
                    }
                })
                .collect();
            self.descend(refine(self.g, normalise(next)));
        }
    }
}

/// First smallest non-singleton cell, or `None` when the colouring is
/// discrete.
fn target_cell(colours: &[u32]) -> Option<u32> {
    let mut sizes = vec![0u32; colours.len()];
    for &c in colours {
        sizes[c as usize] += 1;
    }
    sizes
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 1)
        .min_by_key(|&(c, &s)| (s, c))
        .map(|(c, _)| c as u32)
}

/// Renumbers colours to `0..k` preserving order.
fn normalise(colours: Vec<u32>) -> Vec<u32> {
    let mut distinct = colours.clone();
    distinct.sort_unstable();
    distinct.dedup();
    colours
        .iter()
        .map(|c| distinct.binary_search(c).unwrap() as u32)
        .collect()
}

/// Colour refinement by counts of out- and in-neighbours per cell, until
/// the partition is equitable. Cells only split; new cells are ordered by
/// their signatures, which keeps the procedure label-invariant.
fn refine(g: &Digraph, mut colours: Vec<u32>) -> Vec<u32> {
    let n = g.n();
    let mut cells = colours.iter().copied().max().map_or(0, |m| m + 1) as usize;
    loop {
        let mut masks = vec![0u64; cells];
        for (v, &c) in colours.iter().enumerate() {
            masks[c as usize] |= 1 << v;
        }
        let signature = |v: usize| -> Vec<u32> {
            let mut s = Vec::with_capacity(1 + 2 * cells);
            s.push(colours[v]);
            for m in &masks {
                s.push((g.out_row(v) & m).count_ones());
                s.push((g.in_row(v) & m).count_ones());
            }
            s
        };
        let sigs: Vec<Vec<u32>> = (0..n).map(signature).collect();
        let mut distinct: Vec<&Vec<u32>> = sigs.iter().collect();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() == cells {
            return colours;
        }
        colours = sigs
            .iter()
            .map(|s| distinct.binary_search(&s).unwrap() as u32)
            .collect();
        cells = distinct.len();
    }
}

fn key_for(g: &Digraph, colours: &[u32]) -> CanonKey {
    let n = g.n();
    let mut inverse = vec![0usize; n];
    for (v, &c) in colours.iter().enumerate() {
        inverse[c as usize] = v;
    }
    let bits = n * n.saturating_sub(1);
    let mut bytes = vec![0u8; 1 + bits.div_ceil(8)];
    bytes[0] = n as u8;
    let mut bit = 0usize;
    for p in 0..n {
        let row = g.out_row(inverse[p]);
        for q in 0..n {
            if p == q {
                continue;
            }
            if row >> inverse[q] & 1 == 1 {
                bytes[1 + bit / 8] |= 1 << (7 - bit % 8);
            }
            bit += 1;
        }
    }
    CanonKey(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::zoo;

    #[test]
    fn reversal_of_c3_is_isomorphic() {
        let rev = Digraph::from_edges(3, [(1, 0), (2, 1), (0, 2)]).unwrap();
        assert_eq!(canonical_form(&zoo::c3()), canonical_form(&rev));
    }

    #[test]
    fn c3_and_t3_differ() {
        assert_ne!(canonical_form(&zoo::c3()), canonical_form(&zoo::t3()));
    }

    #[test]
    fn key_decodes_to_isomorphic_graph() {
        for g in [zoo::c3(), zoo::t3(), zoo::dk3(), zoo::path(5), zoo::two_edges()] {
            let key = canonical_form(&g);
            let rep = key.to_digraph();
            assert_eq!(canonical_form(&rep), key);
            assert_eq!(rep.edge_count(), g.edge_count());
        }
    }

    #[test]
    fn automorphisms_of_small_graphs() {
        assert_eq!(automorphism_count(&zoo::c3()), 3);
        assert_eq!(automorphism_count(&zoo::t3()), 1);
        assert_eq!(automorphism_count(&zoo::dk3()), 6);
        assert_eq!(automorphism_count(&Digraph::empty(5)), 120);
        assert_eq!(automorphism_count(&zoo::cycle(5)), 5);
    }

    #[test]
    fn empty_and_trivial() {
        let k0 = canonical_form(&Digraph::empty(0));
        assert_eq!(k0.n(), 0);
        assert_eq!(canonical_form(&Digraph::empty(1)).to_digraph(), Digraph::empty(1));
    }
}
