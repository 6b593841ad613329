//! Exact weighted extremal numbers `ex_a(n, H)`, labelled counts of
//! pattern-free digraphs, and the copy-budget (supersaturation) scan.

mod classes;
mod labelled;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::canon::{canonical_form, canonical_labelling, CanonKey};
use crate::copies::contains_copy;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::weight::{EdgeProfile, Weight, WeightedValue};

pub use classes::{free_classes, MAX_CANONICAL_N};
pub use labelled::{LabelledSpace, Leaf, MAX_FULL_N};
pub(crate) use classes::run_pool;

/// Largest `n` for labelled counting through isomorphism classes.
pub const MAX_ORBIT_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Walk every labelled digraph.
    Full,
    /// Walk isomorphism classes with pruning.
    Canonical,
}

impl SearchMode {
    pub fn name(&self) -> &'static str {
        match self {
            SearchMode::Full => "full",
            SearchMode::Canonical => "canonical",
        }
    }
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(SearchMode::Full),
            "canonical" => Ok(SearchMode::Canonical),
            _ => Err(Error::InvalidParameter(format!("unknown search mode `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub workers: usize,
    /// Witness classes retained; more set `witness_overflow`.
    pub witness_cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            workers: 1,
            witness_cap: 10_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtremalResult {
    pub n: usize,
    pub weight: Weight,
    pub mode: SearchMode,
    pub value: WeightedValue,
    /// Every `(f2, f1)` attaining the maximum.
    pub profiles: Vec<EdgeProfile>,
    /// Canonical keys of the extremal classes, sorted.
    pub witnesses: Vec<CanonKey>,
    pub witness_overflow: bool,
}

/// Tracks the maximal profiles under an exact weight order.
struct Top<'w> {
    weight: &'w Weight,
    profiles: BTreeSet<EdgeProfile>,
}

impl<'w> Top<'w> {
    fn new(weight: &'w Weight) -> Self {
        Top {
            weight,
            profiles: BTreeSet::new(),
        }
    }

    fn best(&self) -> Option<EdgeProfile> {
        self.profiles.iter().next().copied()
    }

    /// Offers a profile; returns its standing relative to the current top.
    fn offer(&mut self, p: EdgeProfile) -> Ordering {
        let ord = match self.best() {
            None => Ordering::Greater,
            Some(b) => self.weight.compare(p, b),
        };
        match ord {
            Ordering::Greater => {
                self.profiles.clear();
                self.profiles.insert(p);
            }
            Ordering::Equal => {
                self.profiles.insert(p);
            }
            Ordering::Less => {}
        }
        ord
    }
}

/// `ex_a(n, H)` with the isomorphism classes attaining it.
pub fn ex_a(
    n: usize,
    pattern: &Pattern,
    weight: &Weight,
    mode: SearchMode,
    opts: &SearchOptions,
) -> Result<ExtremalResult> {
    let (profiles, keys) = match mode {
        SearchMode::Full => ex_full(n, pattern, weight, opts)?,
        SearchMode::Canonical => ex_canonical(n, pattern, weight, opts)?,
    };
    let witness_overflow = keys.len() > opts.witness_cap;
    let witnesses: Vec<CanonKey> = keys.into_iter().take(opts.witness_cap).collect();
    let value = weight.value(*profiles.first().expect("the empty digraph is always free"));
    Ok(ExtremalResult {
        n,
        weight: weight.clone(),
        mode,
        value,
        profiles,
        witnesses,
        witness_overflow,
    })
}

fn ex_full(
    n: usize,
    pattern: &Pattern,
    weight: &Weight,
    opts: &SearchOptions,
) -> Result<(Vec<EdgeProfile>, BTreeSet<CanonKey>)> {
    let space = LabelledSpace::new(n, pattern)?;
    let union = |mut a: BTreeSet<EdgeProfile>, b: BTreeSet<EdgeProfile>| {
        a.extend(b);
        a
    };
    let achieved = space.fold(0, opts.workers, BTreeSet::new, |acc, l| {
        acc.insert(l.profile);
    }, union);
    let mut top = Top::new(weight);
    for p in achieved {
        top.offer(p);
    }
    let profiles = top.profiles;
    let keys = space.fold(
        0,
        opts.workers,
        BTreeSet::new,
        |acc, l| {
            if profiles.contains(&l.profile) {
                acc.insert(canonical_form(&Digraph::from_mask(n, l.mask)));
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    Ok((profiles.into_iter().collect(), keys))
}

/// A maximal pattern-free digraph built greedily; its profile seeds the
/// pruning bound.
fn greedy_lower_bound(n: usize, pattern: &Pattern) -> Digraph {
    let mut g = Digraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            for (u, v) in [(i, j), (j, i)] {
                g.insert(u, v);
                if contains_copy(&g, pattern) {
                    g.remove(u, v);
                }
            }
        }
    }
    g
}

fn ex_canonical(
    n: usize,
    pattern: &Pattern,
    weight: &Weight,
    opts: &SearchOptions,
) -> Result<(Vec<EdgeProfile>, BTreeSet<CanonKey>)> {
    classes::check_n(n, MAX_CANONICAL_N)?;
    let seed = EdgeProfile::of(&greedy_lower_bound(n, pattern));
    // Bound used for pruning; only ever raised between levels.
    let bound = std::sync::RwLock::new(seed);
    let mut top = Top::new(weight);
    let mut keys: BTreeMap<EdgeProfile, BTreeSet<CanonKey>> = BTreeMap::new();
    classes::search(
        n,
        pattern,
        opts.workers,
        |g, ext| {
            let addable: Vec<(usize, usize)> = ext.iter().map(|(e, _)| *e).collect();
            let ub = classes::profile_upper_bound(g, &addable);
            let b = *bound.read().unwrap();
            weight.compare(ub, b) != Ordering::Less
        },
        |k, g| {
            let p = EdgeProfile::of(g);
            if top.offer(p) != Ordering::Less {
                keys.entry(p).or_default().insert(k.clone());
                keys.retain(|q, _| top.profiles.contains(q));
                let best = top.best().unwrap();
                let mut b = bound.write().unwrap();
                if weight.compare(best, *b) == Ordering::Greater {
                    *b = best;
                }
            }
        },
    );
    let all: BTreeSet<CanonKey> = keys.into_values().flatten().collect();
    Ok((top.profiles.into_iter().collect(), all))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    /// Every labelled digraph walked.
    Full,
    /// Sum of `n!/|Aut(G)|` over isomorphism classes.
    Orbits,
}

impl CountMethod {
    pub fn name(&self) -> &'static str {
        match self {
            CountMethod::Full => "full",
            CountMethod::Orbits => "orbits",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FreeCount {
    pub n: usize,
    pub count: BigUint,
    pub method: CountMethod,
}

/// `f*(n, H)`: labelled pattern-free digraphs on `[n]`. Full enumeration
/// for `n ≤ 5`, orbit counting for `n = 6`.
pub fn count_free(n: usize, pattern: &Pattern, opts: &SearchOptions) -> Result<FreeCount> {
    if n <= MAX_FULL_N {
        count_free_with(n, pattern, CountMethod::Full, opts)
    } else {
        count_free_with(n, pattern, CountMethod::Orbits, opts)
    }
}

pub fn count_free_with(
    n: usize,
    pattern: &Pattern,
    method: CountMethod,
    opts: &SearchOptions,
) -> Result<FreeCount> {
    let count = match method {
        CountMethod::Full => {
            let space = LabelledSpace::new(n, pattern)?;
            let c = space.fold(0, opts.workers, || 0u64, |acc, _| *acc += 1, |a, b| a + b);
            BigUint::from(c)
        }
        CountMethod::Orbits => {
            classes::check_n(n, MAX_ORBIT_N)?;
            let factorial: BigUint = (1..=n as u64).fold(BigUint::one(), |a, i| a * i);
            let mut total = BigUint::zero();
            for key in free_classes(n, pattern, opts.workers)? {
                let aut = canonical_labelling(&key.to_digraph()).automorphisms;
                total += &factorial / aut;
            }
            total
        }
    };
    Ok(FreeCount { n, count, method })
}

#[derive(Clone, Debug)]
pub struct CountingRatio {
    pub n: usize,
    pub free: FreeCount,
    pub log2_count: f64,
    /// `ex_2(n, H)`.
    pub ex2: u64,
    /// `log2 f* / ex_2`; `None` when `ex_2 = 0`.
    pub ratio: Option<f64>,
    /// `f*(n, H) ≥ 2^ex_2(n, H)`, compared exactly.
    pub lower_bound_holds: bool,
}

pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 53;
    (x >> shift).to_f64().unwrap().log2() + shift as f64
}

pub fn counting_ratio(n: usize, pattern: &Pattern, opts: &SearchOptions) -> Result<CountingRatio> {
    let free = count_free(n, pattern, opts)?;
    let mode = if n <= MAX_FULL_N {
        SearchMode::Full
    } else {
        SearchMode::Canonical
    };
    let ex = ex_a(n, pattern, &Weight::integer(2)?, mode, opts)?;
    let ex2 = ex
        .value
        .exact()
        .and_then(|r| r.to_integer().to_u64())
        .expect("ex_2 is a nonnegative integer");
    let log2_count = log2_big(&free.count);
    let lower_bound_holds = free.count >= BigUint::one() << ex2;
    if !lower_bound_holds {
        return Err(Error::Verification(format!(
            "f*({n},H) = {} is below 2^{ex2}",
            free.count
        )));
    }
    Ok(CountingRatio {
        n,
        log2_count,
        ex2,
        ratio: (ex2 > 0).then(|| log2_count / ex2 as f64),
        lower_bound_holds,
        free,
    })
}

#[derive(Clone, Debug)]
pub struct SupersatPoint {
    pub n: usize,
    /// Copy budget.
    pub k: u64,
    /// Maximum weighted size over digraphs with at most `k` copies.
    pub max: WeightedValue,
    pub profiles: Vec<EdgeProfile>,
}

/// For each `k` in `0..=k_max`, the maximum weighted size over labelled
/// digraphs on `[n]` with at most `k` copies of the pattern.
pub fn supersat_scan(
    n: usize,
    pattern: &Pattern,
    weight: &Weight,
    k_max: u64,
    opts: &SearchOptions,
) -> Result<Vec<SupersatPoint>> {
    let space = LabelledSpace::new(n, pattern)?;
    let by_count: BTreeMap<u64, BTreeSet<EdgeProfile>> = space.fold(
        k_max,
        opts.workers,
        BTreeMap::new,
        |acc: &mut BTreeMap<u64, BTreeSet<EdgeProfile>>, l| {
            acc.entry(l.copies).or_default().insert(l.profile);
        },
        |mut a, b| {
            for (k, set) in b {
                a.entry(k).or_default().extend(set);
            }
            a
        },
    );
    let mut top = Top::new(weight);
    let mut points = Vec::new();
    for k in 0..=k_max {
        if let Some(set) = by_count.get(&k) {
            for &p in set {
                top.offer(p);
            }
        }
        let profiles: Vec<EdgeProfile> = top.profiles.iter().copied().collect();
        points.push(SupersatPoint {
            n,
            k,
            max: weight.value(profiles[0]),
            profiles,
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::zoo;
    use crate::weight::Rational;

    fn pat(g: Digraph) -> Pattern {
        Pattern::new(g).unwrap()
    }

    fn two() -> Weight {
        Weight::integer(2).unwrap()
    }

    #[test]
    fn two_vertices_everything_is_free() {
        for mode in [SearchMode::Full, SearchMode::Canonical] {
            let r = ex_a(2, &pat(zoo::c3()), &two(), mode, &Default::default()).unwrap();
            assert_eq!(r.value.exact(), Some(Rational::from_integer(2)));
            assert_eq!(r.witnesses.len(), 1);
            assert_eq!(r.witnesses[0].to_digraph(), Digraph::complete(2));
        }
        let c = count_free(2, &pat(zoo::c3()), &Default::default()).unwrap();
        assert_eq!(c.count, BigUint::from(4u32));
    }

    #[test]
    fn dk3_on_three_vertices() {
        let p = pat(zoo::dk3());
        for mode in [SearchMode::Full, SearchMode::Canonical] {
            let r = ex_a(3, &p, &two(), mode, &Default::default()).unwrap();
            assert_eq!(r.value.exact(), Some(Rational::from_integer(5)));
            // DK3 minus one edge, a single class
            assert_eq!(r.witnesses.len(), 1);
        }
        let c = count_free(3, &p, &Default::default()).unwrap();
        assert_eq!(c.count, BigUint::from(63u32));
    }

    #[test]
    fn supersat_dk3() {
        let pts = supersat_scan(3, &pat(zoo::dk3()), &two(), 1, &Default::default()).unwrap();
        let vals: Vec<_> = pts.iter().map(|p| p.max.exact().unwrap()).collect();
        assert_eq!(vals, vec![Rational::from_integer(5), Rational::from_integer(6)]);
    }

    #[test]
    fn supersat_k0_is_ex() {
        let p = pat(zoo::c3());
        let pts = supersat_scan(4, &p, &two(), 0, &Default::default()).unwrap();
        let ex = ex_a(4, &p, &two(), SearchMode::Full, &Default::default()).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].max.exact(), ex.value.exact());
    }

    #[test]
    fn ratio_small() {
        let r = counting_ratio(2, &pat(zoo::c3()), &Default::default()).unwrap();
        assert_eq!(r.ex2, 2);
        assert_eq!(r.log2_count, 2.0);
        assert_eq!(r.ratio, Some(1.0));
        let r = counting_ratio(3, &pat(zoo::dk3()), &Default::default()).unwrap();
        assert_eq!(r.ex2, 5);
        assert!((r.log2_count - 63f64.log2()).abs() < 1e-12);
        assert!((r.ratio.unwrap() - 63f64.log2() / 5.0).abs() < 1e-12);
    }

    #[test]
    fn orbit_counting_matches_full() {
        for g in [zoo::c3(), zoo::t3(), zoo::dk3()] {
            let p = pat(g);
            for n in 1..=4 {
                let a = count_free_with(n, &p, CountMethod::Full, &Default::default()).unwrap();
                let b = count_free_with(n, &p, CountMethod::Orbits, &Default::default()).unwrap();
                assert_eq!(a.count, b.count, "n={n}");
            }
        }
    }

    #[test]
    fn log_weight_modes_agree() {
        let w = Weight::log2_3();
        let p = pat(zoo::c3());
        for n in 2..=4 {
            let a = ex_a(n, &p, &w, SearchMode::Full, &Default::default()).unwrap();
            let b = ex_a(n, &p, &w, SearchMode::Canonical, &Default::default()).unwrap();
            assert_eq!(a.profiles, b.profiles);
            assert_eq!(a.witnesses, b.witnesses);
        }
    }

    #[test]
    fn budgets() {
        let p = pat(zoo::c3());
        let o = SearchOptions::default();
        assert!(matches!(ex_a(6, &p, &two(), SearchMode::Full, &o), Err(Error::Budget(_))));
        assert!(matches!(ex_a(8, &p, &two(), SearchMode::Canonical, &o), Err(Error::Budget(_))));
        assert!(matches!(count_free(7, &p, &o), Err(Error::Budget(_))));
        assert!(matches!(supersat_scan(6, &p, &two(), 1, &o), Err(Error::Budget(_))));
    }

    #[test]
    fn log2_of_big_values() {
        assert_eq!(log2_big(&BigUint::from(1024u32)), 10.0);
        let big = BigUint::one() << 100u32;
        assert!((log2_big(&big) - 100.0).abs() < 1e-12);
    }
}
