//! Exhaustive walk over all labelled digraphs on `[n]`.
//!
//! Each unordered pair `{i, j}` is in one of four states (none, `i→j`,
//! `j→i`, both), so the space is `4^(n(n-1)/2)`. The walk fixes pairs in
//! order and keeps the number of pattern copies up to date: a copy is
//! counted at the last pair its edges touch. Subtrees whose copy count
//! already exceeds the caller's cap are skipped, which is exact because
//! copies are never lost by adding edges.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::{PairHypergraph, PairUniverse};
use crate::pattern::Pattern;
use crate::weight::EdgeProfile;

/// Largest `n` walked in full.
pub const MAX_FULL_N: usize = 5;

#[derive(Clone, Copy, Debug)]
pub struct Leaf {
    /// Edge set over the pair universe of `n`.
    pub mask: u64,
    pub copies: u64,
    pub profile: EdgeProfile,
}

pub struct LabelledSpace {
    n: usize,
    /// `(mask of i→j, mask of j→i)` per unordered pair.
    pair_bits: Vec<(u64, u64)>,
    /// Copies (as masks) whose highest pair is the given pair.
    completed_at: Vec<Vec<u64>>,
}

impl LabelledSpace {
    pub fn new(n: usize, pattern: &Pattern) -> Result<Self> {
        Self::with_limit(n, pattern, MAX_FULL_N)
    }

    pub(crate) fn with_limit(n: usize, pattern: &Pattern, limit: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n must be at least 1".into()));
        }
        if n > limit {
            return Err(Error::Budget(format!(
                "full enumeration covers n <= {limit} (4^{} states requested)",
                n * (n - 1) / 2
            )));
        }
        let universe = PairUniverse::new(n);
        let mut pair_of_bit = vec![0usize; universe.size()];
        let mut pair_bits = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (universe.index(i, j), universe.index(j, i));
                pair_of_bit[a] = pair_bits.len();
                pair_of_bit[b] = pair_bits.len();
                pair_bits.push((1u64 << a, 1u64 << b));
            }
        }
        let mut completed_at = vec![Vec::new(); pair_bits.len()];
        if n >= pattern.order() {
            let d = PairHypergraph::build(n, pattern)?;
            for (mask, e) in d.edge_masks().expect("n <= 8").into_iter().zip(d.edges()) {
                let last = e.iter().map(|&x| pair_of_bit[x as usize]).max().unwrap();
                completed_at[last].push(mask);
            }
        }
        Ok(LabelledSpace {
            n,
            pair_bits,
            completed_at,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Folds `visit` over every labelled digraph with at most `cap` copies.
    /// With `workers > 1` the space is split on the first pairs and the
    /// partial accumulators are merged in a fixed order.
    pub fn fold<A, I, V, M>(&self, cap: u64, workers: usize, init: I, visit: V, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync,
        V: Fn(&mut A, Leaf) + Sync,
        M: Fn(A, A) -> A,
    {
        let split = self.pair_bits.len().min(2);
        let prefixes: Vec<u32> = (0..4u32.pow(split as u32)).collect();
        let run = |prefix: &u32| {
            let mut acc = init();
            self.walk_prefix(*prefix, split, cap, &mut |l| visit(&mut acc, l));
            acc
        };
        let parts: Vec<A> = if workers > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("thread pool");
            pool.install(|| prefixes.par_iter().map(run).collect())
        } else {
            prefixes.iter().map(run).collect()
        };
        let mut it = parts.into_iter();
        let first = it.next().unwrap_or_else(&init);
        it.fold(first, merge)
    }

    fn walk_prefix(&self, prefix: u32, split: usize, cap: u64, visit: &mut dyn FnMut(Leaf)) {
        let mut state = Walk {
            mask: 0,
            copies: 0,
            doubles: 0,
            singles: 0,
        };
        let mut code = prefix;
        for p in 0..split {
            let s = (code & 3) as u8;
            code >>= 2;
            if !self.apply(p, s, &mut state, cap) {
                return;
            }
        }
        self.walk(split, state, cap, visit);
    }

    /// Sets pair `p` to `s`; false when the copy count overflows `cap`.
    #[inline]
    fn apply(&self, p: usize, s: u8, st: &mut Walk, cap: u64) -> bool {
        let (fwd, bwd) = self.pair_bits[p];
        match s {
            0 => {}
            1 => {
                st.mask |= fwd;
                st.singles += 1;
            }
            2 => {
                st.mask |= bwd;
                st.singles += 1;
            }
            _ => {
                st.mask |= fwd | bwd;
                st.doubles += 1;
            }
        }
        if s != 0 {
            let m = st.mask;
            st.copies += self.completed_at[p].iter().filter(|&&c| c & m == c).count() as u64;
        }
        st.copies <= cap
    }

    fn walk(&self, p: usize, st: Walk, cap: u64, visit: &mut dyn FnMut(Leaf)) {
        if p == self.pair_bits.len() {
            visit(Leaf {
                mask: st.mask,
                copies: st.copies,
                profile: EdgeProfile::new(st.doubles, st.singles),
            });
            return;
        }
        for s in 0..4u8 {
            let mut next = st;
            if self.apply(p, s, &mut next, cap) {
                self.walk(p + 1, next, cap, visit);
            }
        }
    }
}

#[derive(Clone, Copy)]
struct Walk {
    mask: u64,
    copies: u64,
    doubles: u32,
    singles: u32,
}
