//! Labelled digraphs on `0..n` stored as dense adjacency bit rows.
//!
//! The edge-list text format understood by [`Digraph::parse`] is
//!
//! ```text
//! n=3        # header, vertex count
//! 0 1        # one ordered pair per record
//! 1 0
//! ```
//!
//! `#` starts a comment, and `;` may be used in place of a newline to
//! separate records.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseErrorKind, Result};
use crate::hypergraph::PairUniverse;

/// Largest supported vertex count (one `u64` row per vertex).
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
}

impl Digraph {
    /// The empty digraph on `n` vertices.
    ///
    /// # Panics
    ///
    /// If `n` exceeds [`MAX_VERTICES`].
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "digraph with {n} vertices exceeds {MAX_VERTICES}");
        Digraph {
            n,
            out: vec![0; n],
            inn: vec![0; n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Digraph::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.insert(u, v);
                }
            }
        }
        g
    }

    /// Builds a digraph from ordered pairs, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > MAX_VERTICES {
            return Err(Error::InvalidParameter(format!(
                "n={n} exceeds the supported maximum of {MAX_VERTICES}"
            )));
        }
        let mut g = Digraph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            if !g.insert(u, v) {
                return Err(Error::InvalidParameter(format!("duplicate edge ({u},{v})")));
            }
        }
        Ok(g)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<usize> = None;
        let mut g = Digraph::empty(0);
        // `#` comments run to the end of the physical line; `;` separates
        // records within a line.
        let records = text.lines().enumerate().flat_map(|(idx, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            body.split(';').map(move |r| (idx + 1, r.trim()))
        });
        for (line, rec) in records {
            if rec.is_empty() {
                continue;
            }
            let Some(n) = header else {
                let Some(value) = rec.strip_prefix("n=").or_else(|| rec.strip_prefix("n =")) else {
                    return Err(Error::parse(line, ParseErrorKind::MissingHeader));
                };
                let n: usize = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line, ParseErrorKind::BadHeader(rec.to_string())))?;
                if n > MAX_VERTICES {
                    return Err(Error::parse(line, ParseErrorKind::BadHeader(rec.to_string())));
                }
                header = Some(n);
                g = Digraph::empty(n);
                continue;
            };
            let mut fields = rec.split_whitespace();
            let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::parse(line, ParseErrorKind::Malformed(rec.to_string())));
            };
            let (Ok(u), Ok(v)) = (a.parse::<usize>(), b.parse::<usize>()) else {
                return Err(Error::parse(line, ParseErrorKind::Malformed(rec.to_string())));
            };
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(Error::parse(line, ParseErrorKind::VertexOutOfRange { vertex, n }));
                }
            }
            if u == v {
                return Err(Error::parse(line, ParseErrorKind::Loop(u)));
            }
            if !g.insert(u, v) {
                return Err(Error::parse(line, ParseErrorKind::DuplicateEdge(u, v)));
            }
        }
        if header.is_none() {
            return Err(Error::parse(1, ParseErrorKind::MissingHeader));
        }
        Ok(g)
    }

    /// Renders the edge-list format, edges in lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u] >> v & 1 == 1
    }

    /// Inserts `u -> v`; returns false if it was already present.
    pub fn insert(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v && u < self.n && v < self.n);
        if self.has_edge(u, v) {
            return false;
        }
        self.out[u] |= 1 << v;
        self.inn[v] |= 1 << u;
        true
    }

    pub fn remove(&mut self, u: usize, v: usize) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        self.out[u] &= !(1 << v);
        self.inn[v] &= !(1 << u);
        true
    }

    /// Out-neighbourhood of `u` as a bit row.
    #[inline]
    pub fn out_row(&self, u: usize) -> u64 {
        self.out[u]
    }

    /// In-neighbourhood of `v` as a bit row.
    #[inline]
    pub fn in_row(&self, v: usize) -> u64 {
        self.inn[v]
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            let row = self.out[u];
            (0..self.n).filter(move |&v| row >> v & 1 == 1).map(move |v| (u, v))
        })
    }

    /// Number of 2-cycles (unordered pairs joined in both directions).
    pub fn f2(&self) -> usize {
        (0..self.n)
            .map(|u| {
                let above = if u + 1 >= 64 { 0 } else { !0u64 << (u + 1) };
                (self.out[u] & self.inn[u] & above).count_ones() as usize
            })
            .sum()
    }

    /// Number of unordered pairs joined by exactly one directed edge.
    pub fn f1(&self) -> usize {
        self.edge_count() - 2 * self.f2()
    }

    /// Vertices incident to at least one edge.
    pub fn non_isolated(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.out[v] | self.inn[v] != 0).collect()
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Digraph {
        assert_eq!(perm.len(), self.n);
        let mut g = Digraph::empty(self.n);
        for (u, v) in self.edges() {
            g.insert(perm[u], perm[v]);
        }
        g
    }

    /// Subdigraph on `0..n` keeping only the listed edges (must be edges of
    /// `self`).
    pub fn with_edges(&self, edges: &[(usize, usize)]) -> Digraph {
        let mut g = Digraph::empty(self.n);
        for &(u, v) in edges {
            debug_assert!(self.has_edge(u, v));
            g.insert(u, v);
        }
        g
    }

    /// Whether every edge of `self` is an edge of `other` (same vertex set).
    pub fn is_subgraph_of(&self, other: &Digraph) -> bool {
        self.n == other.n && self.out.iter().zip(&other.out).all(|(a, b)| a & !b == 0)
    }

    /// Edge set as a bitmask over the ordered-pair universe of `n`.
    /// Only valid while `n(n-1) <= 64`.
    pub fn to_mask(&self) -> u64 {
        let universe = PairUniverse::new(self.n);
        assert!(universe.size() <= 64, "mask needs n(n-1) <= 64");
        self.edges().fold(0u64, |m, (u, v)| m | 1 << universe.index(u, v))
    }

    pub fn from_mask(n: usize, mask: u64) -> Digraph {
        let universe = PairUniverse::new(n);
        let mut g = Digraph::empty(n);
        let mut rest = mask;
        while rest != 0 {
            let idx = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (u, v) = universe.pair(idx);
            g.insert(u, v);
        }
        g
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, [", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}->{v}")?;
        }
        write!(f, "])")
    }
}

impl FromStr for Digraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Digraph::parse(s)
    }
}

/// Named small digraphs used throughout tests and the pattern corpus.
pub mod zoo {
    use super::Digraph;

    /// Directed triangle 0→1→2→0.
    pub fn c3() -> Digraph {
        Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    /// Transitive tournament on three vertices.
    pub fn t3() -> Digraph {
        Digraph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    /// Complete digraph on three vertices.
    pub fn dk3() -> Digraph {
        Digraph::complete(3)
    }

    pub fn two_cycle() -> Digraph {
        Digraph::from_edges(2, [(0, 1), (1, 0)]).unwrap()
    }

    /// Directed path on `k` vertices.
    pub fn path(k: usize) -> Digraph {
        Digraph::from_edges(k, (1..k).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(k: usize) -> Digraph {
        Digraph::from_edges(k, (0..k).map(|i| (i, (i + 1) % k))).unwrap()
    }

    /// Two vertex-disjoint single edges.
    pub fn two_edges() -> Digraph {
        Digraph::from_edges(4, [(0, 1), (2, 3)]).unwrap()
    }
}
