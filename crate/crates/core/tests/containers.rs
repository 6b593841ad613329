//! Container families checked against the definitions directly: every
//! pattern-free digraph is scanned against every container.

use dicon::container::{build_containers, verify_family, ContainerEngine, ContainerParams, VerifyMode};
use dicon::digraph::zoo;
use dicon::hypergraph::PairHypergraph;
use dicon::{Digraph, Pattern, Rational};

/// Pattern-freeness by trying every injection of a 3-vertex pattern.
fn free_of_3(g: &Digraph, h: &Digraph) -> bool {
    let n = g.n();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a == b || b == c || a == c {
                    continue;
                }
                let img = [a, b, c];
                if h.edges().all(|(u, v)| g.has_edge(img[u], img[v])) {
                    return false;
                }
            }
        }
    }
    true
}

fn params(n: usize) -> ContainerParams {
    ContainerParams::new(Rational::new(1, 10), (n as f64).powf(-0.5)).unwrap()
}

#[test]
fn every_free_digraph_lies_in_a_container() {
    for h in [zoo::c3(), zoo::t3()] {
        let p = Pattern::new(h.clone()).unwrap();
        for n in 3..=5 {
            let d = PairHypergraph::build(n, &p).unwrap();
            let fam = build_containers(&d, params(n), 2).unwrap();
            let bits = n * (n - 1);
            let mut free = 0u64;
            for m in 0u64..1 << bits {
                if !free_of_3(&Digraph::from_mask(n, m), &h) {
                    continue;
                }
                free += 1;
                assert!(fam.containers().iter().any(|&c| m & !c == 0), "n={n} {m:x}");
            }
            let rep = verify_family(&d, &p, &fam, VerifyMode::Exhaustive, 2).unwrap();
            assert_eq!(rep.checked, free);
            assert!(rep.passed());
        }
    }
}

#[test]
fn containers_are_sparse() {
    let p = Pattern::new(zoo::c3()).unwrap();
    for n in 3..=6 {
        let d = PairHypergraph::build(n, &p).unwrap();
        let masks = d.edge_masks().unwrap();
        let fam = build_containers(&d, params(n), 4).unwrap();
        for &c in fam.containers() {
            let spanned = masks.iter().filter(|&&e| e & c == e).count();
            assert!(10 * spanned <= masks.len(), "n={n} {c:x}");
        }
    }
}

#[test]
fn pruning_only_removes_forbidden_elements() {
    for h in [zoo::c3(), zoo::t3(), zoo::path(3)] {
        let p = Pattern::new(h).unwrap();
        for n in 3..=4 {
            let d = PairHypergraph::build(n, &p).unwrap();
            let masks = d.edge_masks().unwrap();
            let eng = ContainerEngine::new(&d, params(n)).unwrap();
            let mut steps = 0;
            eng.trace(&mut |s| {
                steps += 1;
                assert_eq!(s.members & s.available, 0);
                assert!(s.available >> s.chosen & 1 == 1);
                assert_eq!(s.pruned & !s.available, 0);
                if !s.member {
                    assert_eq!(s.pruned, 0);
                    return;
                }
                let with = s.members | 1 << s.chosen;
                let mut rest = s.pruned;
                while rest != 0 {
                    let u = rest.trailing_zeros();
                    rest &= rest - 1;
                    let grown = with | 1 << u;
                    assert!(masks.iter().any(|&e| e & grown == e && e >> u & 1 == 1));
                }
            })
            .unwrap();
            assert!(steps > 0);
        }
    }
}

#[test]
fn routes_contain_their_sets() {
    let h = zoo::c3();
    let p = Pattern::new(h.clone()).unwrap();
    let n = 4;
    let d = PairHypergraph::build(n, &p).unwrap();
    let eng = ContainerEngine::new(&d, params(n)).unwrap();
    let fam = build_containers(&d, params(n), 1).unwrap();
    for m in 0u64..1 << 12 {
        if !free_of_3(&Digraph::from_mask(n, m), &h) {
            assert!(eng.route(m).is_err());
            continue;
        }
        let r = eng.route(m).unwrap();
        assert_eq!(r.fingerprint & !m, 0);
        assert_eq!(m & !r.container, 0);
        let i = fam.lookup(r.fingerprint).unwrap();
        assert_eq!(fam.containers()[i], r.container);
    }
}

#[test]
fn removing_an_element_is_caught() {
    let p = Pattern::new(zoo::c3()).unwrap();
    let n = 4;
    let d = PairHypergraph::build(n, &p).unwrap();
    let fam = build_containers(&d, params(n), 1).unwrap();
    for i in [0, fam.len() / 2, fam.len() - 1] {
        let c = fam.containers()[i];
        let x = c.trailing_zeros() as usize;
        let mut broken = fam.clone();
        broken.remove_element(i, x).unwrap();
        let rep = verify_family(&d, &p, &broken, VerifyMode::Exhaustive, 1).unwrap();
        let miss = rep.miss.expect("a miss is reported");
        assert_eq!(miss.container, Some(i));
        assert!(miss.witness.has_edge(d.universe().pair(x).0, d.universe().pair(x).1));
    }
}

#[test]
fn export_import_is_lossless() {
    let p = Pattern::new(zoo::t3()).unwrap();
    let d = PairHypergraph::build(5, &p).unwrap();
    let fam = build_containers(&d, params(5), 3).unwrap();
    let text = fam.export();
    let back = dicon::container::ContainerFamily::import(&text).unwrap();
    assert_eq!(back, fam);
    assert_eq!(back.export(), text);
}
