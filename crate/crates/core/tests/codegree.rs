//! Co-degrees against a scan over every `j`-subset of the universe.

use dicon::codegree::{codegree_profile, codegree_sums, max_codegree, DegreeNormalization};
use dicon::digraph::zoo;
use dicon::hypergraph::PairHypergraph;
use dicon::Pattern;

/// `Σ_v max_{σ ∋ v, |σ| = j} d(σ)` by listing all `j`-subsets.
fn naive_sums(masks: &[u64], universe: usize, r: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for j in 2..=r {
        let mut best = vec![0u64; universe];
        let mut sigma = Vec::with_capacity(j);
        fn go(
            start: usize,
            j: usize,
            universe: usize,
            sigma: &mut Vec<usize>,
            masks: &[u64],
            best: &mut [u64],
        ) {
            if sigma.len() == j {
                let s: u64 = sigma.iter().map(|&x| 1u64 << x).sum();
                let d = masks.iter().filter(|&&e| e & s == s).count() as u64;
                for &x in sigma.iter() {
                    best[x] = best[x].max(d);
                }
                return;
            }
            for x in start..universe {
                sigma.push(x);
                go(x + 1, j, universe, sigma, masks, best);
                sigma.pop();
            }
        }
        go(0, j, universe, &mut sigma, masks, &mut best);
        out.push(best.iter().sum());
    }
    out
}

#[test]
fn sums_match_all_subset_scan() {
    for h in [zoo::c3(), zoo::t3(), zoo::path(3), zoo::two_edges()] {
        let p = Pattern::new(h).unwrap();
        for n in p.order().max(3)..=8 {
            let d = PairHypergraph::build(n, &p).unwrap();
            let masks = d.edge_masks().unwrap();
            let u = d.universe().size();
            let expect = naive_sums(&masks, u, d.uniformity());
            assert_eq!(codegree_sums(&d), expect, "n={n}");
        }
    }
}

#[test]
fn vertex_codegrees_on_small_cases() {
    let p = Pattern::new(zoo::t3()).unwrap();
    let d = PairHypergraph::build(4, &p).unwrap();
    // Each pair lies in one transitive triangle per third vertex and role.
    for v in 0..d.universe().size() {
        assert_eq!(max_codegree(&d, v, 3), 1);
        assert_eq!(d.degree(v), 6);
    }
}

#[test]
fn delta_decreases_with_tau() {
    let p = Pattern::new(zoo::c3()).unwrap();
    let d = PairHypergraph::build(7, &p).unwrap();
    let mut last = f64::INFINITY;
    for tau in [0.05, 0.1, 0.2, 0.4, 0.8, 1.0] {
        for norm in [DegreeNormalization::Average, DegreeNormalization::Maximum] {
            let prof = codegree_profile(&d, tau, norm).unwrap();
            assert!(prof.delta.is_finite());
        }
        let avg = codegree_profile(&d, tau, DegreeNormalization::Average).unwrap();
        assert!(avg.delta <= last);
        last = avg.delta;
    }
}
