//! Isomorphism classes of pattern-free digraphs, generated one edge at a
//! time with isomorph rejection by canonical key.
//!
//! Deleting any edge of a pattern-free digraph leaves a pattern-free
//! digraph, so every class with `k+1` edges is reached from a stored
//! representative with `k` edges.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::canon::{canonical_form, CanonKey};
use crate::copies::contains_copy;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::weight::EdgeProfile;

/// Largest `n` for the canonical search.
pub const MAX_CANONICAL_N: usize = 7;

/// Pattern-free one-edge extensions of `g` and the edges that produced
/// them.
pub(crate) fn extensions(g: &Digraph, pattern: &Pattern) -> Vec<((usize, usize), Digraph)> {
    let n = g.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || g.has_edge(u, v) {
                continue;
            }
            let mut child = g.clone();
            child.insert(u, v);
            if !contains_copy(&child, pattern) {
                out.push(((u, v), child));
            }
        }
    }
    out
}

/// An upper bound on the profile of any pattern-free supergraph of `g`
/// given the set of individually addable edges. It never increases along
/// an augmentation path.
pub(crate) fn profile_upper_bound(g: &Digraph, addable: &[(usize, usize)]) -> EdgeProfile {
    let n = g.n();
    let mut can = vec![0u64; n];
    for &(u, v) in addable {
        can[u] |= 1 << v;
    }
    let mut p = EdgeProfile::of(g);
    for i in 0..n {
        for j in i + 1..n {
            let fwd = g.has_edge(i, j);
            let bwd = g.has_edge(j, i);
            let can_fwd = can[i] >> j & 1 == 1;
            let can_bwd = can[j] >> i & 1 == 1;
            match (fwd, bwd) {
                (false, false) if can_fwd && can_bwd => p.doubles += 1,
                (false, false) if can_fwd || can_bwd => p.singles += 1,
                (true, false) if can_bwd => {
                    p.doubles += 1;
                    p.singles -= 1;
                }
                (false, true) if can_fwd => {
                    p.doubles += 1;
                    p.singles -= 1;
                }
                _ => {}
            }
        }
    }
    p
}

pub(crate) fn check_n(n: usize, limit: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    if n > limit {
        return Err(Error::Budget(format!(
            "canonical search covers n <= {limit}, requested n={n}"
        )));
    }
    Ok(())
}

pub(crate) fn run_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    if workers > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool")
            .install(job)
    } else {
        job()
    }
}

/// Level-by-level search. `keep` decides, from a representative and its
/// pattern-free extensions, whether those extensions are explored.
pub(crate) fn search<K, S>(
    n: usize,
    pattern: &Pattern,
    workers: usize,
    keep: K,
    mut on_class: S,
) where
    K: Fn(&Digraph, &[((usize, usize), Digraph)]) -> bool + Sync,
    S: FnMut(&CanonKey, &Digraph),
{
    let mut level: BTreeSet<CanonKey> = BTreeSet::new();
    level.insert(canonical_form(&Digraph::empty(n)));
    while !level.is_empty() {
        let reps: Vec<(CanonKey, Digraph)> =
            level.into_iter().map(|k| { let g = k.to_digraph(); (k, g) }).collect();
        for (k, g) in &reps {
            on_class(k, g);
        }
        let expand = |(_, g): &(CanonKey, Digraph)| -> Vec<CanonKey> {
            let ext = extensions(g, pattern);
            if !keep(g, &ext) {
                return Vec::new();
            }
            ext.iter().map(|(_, c)| canonical_form(c)).collect()
        };
        let children: Vec<Vec<CanonKey>> = run_pool(workers, || {
            if workers > 1 {
                reps.par_iter().map(expand).collect()
            } else {
                reps.iter().map(expand).collect()
            }
        });
        level = children.into_iter().flatten().collect();
    }
}

/// Canonical keys of every pattern-free digraph on `n` vertices.
pub fn free_classes(n: usize, pattern: &Pattern, workers: usize) -> Result<Vec<CanonKey>> {
    check_n(n, MAX_CANONICAL_N)?;
    let mut all = Vec::new();
    search(n, pattern, workers, |_, _| true, |k, _| all.push(k.clone()));
    all.sort();
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::zoo;

    #[test]
    fn all_digraph_classes_when_nothing_is_forbidden() {
        // A pattern on more vertices than the host never occurs, so this
        // enumerates every digraph up to isomorphism: 1, 3, 16, 218.
        let p = Pattern::new(zoo::path(5)).unwrap();
        let counts: Vec<usize> = (1..=4).map(|n| free_classes(n, &p, 1).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 3, 16, 218]);
    }

    #[test]
    fn upper_bound_never_below_profile() {
        let p = Pattern::new(zoo::c3()).unwrap();
        let g = Digraph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        let ext = extensions(&g, &p);
        let addable: Vec<_> = ext.iter().map(|(e, _)| *e).collect();
        assert!(!addable.contains(&(2, 0)));
        let ub = profile_upper_bound(&g, &addable);
        for (_, c) in &ext {
            let pc = EdgeProfile::of(c);
            assert!(2 * pc.doubles + pc.singles <= 2 * ub.doubles + ub.singles);
        }
    }
}
