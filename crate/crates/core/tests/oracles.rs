//! Brute-force oracles written without the library's search code: plain
//! permutation scans, all-injection enumeration and all-subset scans.

use std::collections::{BTreeSet, HashMap};

use dicon::canon::{automorphism_count, canonical_form};
use dicon::copies::count_copies;
use dicon::density::{condition_a, m_density, MDensity};
use dicon::digraph::zoo;
use dicon::extremal::free_classes;
use dicon::hypergraph::PairHypergraph;
use dicon::pattern::enumerate_subpatterns;
use dicon::{Digraph, Pattern, Rational, Weight};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn edge_vec(g: &Digraph) -> Vec<(usize, usize)> {
    g.edges().collect()
}

/// All digraphs on `n` labelled vertices.
fn all_digraphs(n: usize) -> Vec<Digraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    (0..1u64 << pairs.len())
        .map(|m| {
            let chosen: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Digraph::from_edges(n, chosen).unwrap()
        })
        .collect()
}

/// Smallest sorted edge list over all relabellings.
fn brute_key(g: &Digraph, perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    perms
        .iter()
        .map(|p| {
            let mut e: Vec<_> = g.edges().map(|(u, v)| (p[u], p[v])).collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap()
}

/// Distinct edge sets of injective images of `h` inside `g`.
fn brute_copies(g: &Digraph, h: &Digraph) -> usize {
    let (n, k) = (g.n(), h.n());
    if k > n {
        return 0;
    }
    let mut seen = BTreeSet::new();
    let mut img = vec![0usize; k];
    fn go(
        i: usize,
        img: &mut Vec<usize>,
        g: &Digraph,
        h: &Digraph,
        seen: &mut BTreeSet<Vec<(usize, usize)>>,
    ) {
        if i == img.len() {
            if h.edges().all(|(u, v)| g.has_edge(img[u], img[v])) {
                let mut e: Vec<_> = h.edges().map(|(u, v)| (img[u], img[v])).collect();
                e.sort_unstable();
                seen.insert(e);
            }
            return;
        }
        for x in 0..g.n() {
            if !img[..i].contains(&x) {
                img[i] = x;
                go(i + 1, img, g, h, seen);
            }
        }
    }
    go(0, &mut img, g, h, &mut seen);
    seen.len()
}

#[test]
fn canonical_form_matches_permutation_search() {
    for n in 1..=4 {
        let perms = permutations(n);
        let mut brute_to_canon: HashMap<Vec<(usize, usize)>, _> = HashMap::new();
        let mut canon_to_brute = HashMap::new();
        for g in all_digraphs(n) {
            let b = brute_key(&g, &perms);
            let c = canonical_form(&g);
            assert_eq!(*brute_to_canon.entry(b.clone()).or_insert_with(|| c.clone()), c);
            assert_eq!(*canon_to_brute.entry(c).or_insert(b.clone()), b);
            let aut = perms
                .iter()
                .filter(|p| g.relabel(p).edges().eq(g.edges()))
                .count() as u64;
            assert_eq!(automorphism_count(&g), aut, "{g:?}");
        }
        let expected = [1, 3, 16, 218][n - 1];
        assert_eq!(brute_to_canon.len(), expected);
    }
}

#[test]
fn copy_counts_match_injection_enumeration() {
    let patterns = [
        zoo::c3(),
        zoo::t3(),
        zoo::dk3(),
        zoo::two_cycle(),
        zoo::path(3),
        zoo::two_edges(),
    ];
    for h in patterns {
        let p = Pattern::new(h.clone()).unwrap();
        for g in all_digraphs(4) {
            assert_eq!(count_copies(&g, &p) as usize, brute_copies(&g, &h), "{g:?} {h:?}");
        }
    }
}

#[test]
fn dk3_holds_two_directed_triangles() {
    let p = Pattern::new(zoo::c3()).unwrap();
    assert_eq!(count_copies(&zoo::dk3(), &p), 2);
    assert_eq!(brute_copies(&zoo::dk3(), &zoo::c3()), 2);
}

/// `(e-1)/(v-2)` over every edge subset with two or more edges, scanned
/// directly; `None` stands for an infinite value.
fn naive_m(h: &Digraph) -> Option<Rational> {
    let e = edge_vec(h);
    let mut best: Option<Rational> = None;
    let mut infinite = false;
    for mask in 0u32..1 << e.len() {
        let chosen: Vec<_> = (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect();
        if chosen.len() < 2 {
            continue;
        }
        let verts: BTreeSet<usize> = chosen.iter().flat_map(|&(u, v)| [u, v]).collect();
        if verts.len() == 2 {
            infinite = true;
            continue;
        }
        let r = Rational::new(chosen.len() as i64 - 1, verts.len() as i64 - 2);
        best = Some(best.map_or(r, |b| b.max(r)));
    }
    if infinite {
        None
    } else {
        best
    }
}

fn naive_max_density(h: &Digraph) -> Rational {
    let e = edge_vec(h);
    let mut best = Rational::from_integer(0);
    for mask in 0u32..1 << e.len() {
        let chosen: Vec<_> = (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect();
        if chosen.len() < 2 {
            continue;
        }
        let verts: BTreeSet<usize> = chosen.iter().flat_map(|&(u, v)| [u, v]).collect();
        best = best.max(Rational::new(chosen.len() as i64, verts.len() as i64));
    }
    best
}

#[test]
fn density_parameters_match_subset_scan() {
    let never = Pattern::new(zoo::path(5)).unwrap();
    let mut checked = 0;
    for n in 2..=4 {
        for key in free_classes(n, &never, 1).unwrap() {
            let h = key.to_digraph();
            if !(2..=8).contains(&h.edge_count()) {
                continue;
            }
            let p = Pattern::new(h.clone()).unwrap();
            let m = m_density(&p).unwrap();
            match naive_m(&h) {
                None => assert_eq!(m.value, MDensity::Infinite),
                Some(r) => assert_eq!(m.value, MDensity::Finite(r)),
            }
            let dens = naive_max_density(&h);
            for a in [1, 2, 3, 4] {
                let w = Weight::integer(a).unwrap();
                let c = condition_a(&p, &w).unwrap();
                assert_eq!(c.holds, dens <= Rational::new(a, 2), "{h:?} a={a}");
                assert_eq!(c.densest.density(), dens);
            }
            checked += 1;
        }
    }
    assert!(checked > 200);
}

#[test]
fn subpattern_lists() {
    let entries = |g: Digraph| {
        let p = Pattern::new(g).unwrap();
        let mut v: Vec<(u32, u32)> = enumerate_subpatterns(&p)
            .unwrap()
            .iter()
            .map(|s| (s.vertices, s.edges))
            .collect();
        v.sort_unstable();
        v
    };
    assert_eq!(entries(zoo::c3()), vec![(3, 2), (3, 2), (3, 2), (3, 3)]);
    assert_eq!(entries(zoo::t3()), vec![(3, 2), (3, 2), (3, 2), (3, 3)]);
    assert_eq!(entries(zoo::two_cycle()), vec![(2, 2)]);
}

#[test]
fn condition_verdicts() {
    let w2 = Weight::integer(2).unwrap();
    let w4 = Weight::integer(4).unwrap();
    let dk3 = Pattern::new(zoo::dk3()).unwrap();
    let c = condition_a(&dk3, &w2).unwrap();
    assert!(!c.holds);
    assert_eq!(c.comparison_string(), "6/3 > 2/2");
    assert!(condition_a(&dk3, &w4).unwrap().holds);
    assert!(condition_a(&Pattern::new(zoo::c3()).unwrap(), &w2).unwrap().holds);
    assert!(condition_a(&Pattern::new(zoo::t3()).unwrap(), &w2).unwrap().holds);
    assert!(!condition_a(&dk3, &Weight::log2_3()).unwrap().holds);
}

#[test]
fn independence_is_pattern_freeness() {
    for h in [zoo::c3(), zoo::t3(), zoo::path(3), zoo::two_cycle()] {
        let p = Pattern::new(h).unwrap();
        for n in p.order()..=4 {
            let d = PairHypergraph::build(n, &p).unwrap();
            assert_eq!(
                d.labelled_copy_count(),
                d.edge_count() as u128 * p.automorphisms() as u128
            );
            for g in all_digraphs(n) {
                assert_eq!(d.independent_set_check(&g).unwrap(), count_copies(&g, &p) == 0);
            }
        }
    }
}

#[test]
fn independence_is_pattern_freeness_on_five_vertices() {
    let p = Pattern::new(zoo::c3()).unwrap();
    let d = PairHypergraph::build(5, &p).unwrap();
    let masks = d.edge_masks().unwrap();
    for m in 0u64..1 << 20 {
        let g = Digraph::from_mask(5, m);
        let independent = masks.iter().all(|&e| e & m != e);
        assert_eq!(independent, count_copies(&g, &p) == 0);
        if m % 4099 == 0 {
            assert_eq!(d.independent_set_check(&g).unwrap(), independent);
        }
    }
}

#[test]
fn hypergraph_examples() {
    let c3 = PairHypergraph::build(3, &Pattern::new(zoo::c3()).unwrap()).unwrap();
    assert_eq!((c3.universe().size(), c3.edge_count(), c3.labelled_copy_count()), (6, 2, 6));
    let t3 = PairHypergraph::build(3, &Pattern::new(zoo::t3()).unwrap()).unwrap();
    assert_eq!((t3.edge_count(), t3.labelled_copy_count()), (6, 6));
    for e in c3.edges() {
        let g = c3.decode(e);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(brute_copies(&g, &zoo::c3()), 1);
    }
}
