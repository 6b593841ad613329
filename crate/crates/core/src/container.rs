//! A deterministic container algorithm for the pair hypergraph, and exact
//! verification of the families it produces.
//!
//! The algorithm walks a member/non-member decision tree. A node holds the
//! members `S` (the fingerprint so far) and the still-available elements
//! `A`; its container is `S ∪ A`. While `S ∪ A` spans more than `ε·e(D)`
//! hyperedges, the available element of largest degree in `D[S ∪ A]`
//! (lowest index on ties) is decided:
//!
//! * member: it joins `S`, and every `u ∈ A` with a hyperedge `e` such that
//!   `e - {u} ⊆ S` leaves `A` (no independent set through this node holds
//!   `u`);
//! * non-member: it leaves `A`.
//!
//! An independent set `I` follows the unique path that answers "is the
//! element in `I`?", so `I ⊆ S ∪ A` at its leaf. The path is a function of
//! `S` alone, so the final `S` is the fingerprint that names the leaf and
//! lets any `I` be routed back to it.
//!
//! Universe subsets are `u64` masks, which covers `N ≤ 8`.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::copies::count_copies;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::extremal::{LabelledSpace, MAX_FULL_N};
use crate::hypergraph::PairHypergraph;
use crate::pattern::Pattern;
use crate::weight::{parse_rational, ratio_string, Rational};

/// Largest family materialised by [`build_containers`].
pub const MAX_CONTAINERS: usize = 5_000_000;

/// Largest `N` whose universe fits a `u64` mask.
pub const MAX_CONTAINER_N: usize = 8;

/// Largest `N` for exhaustive coverage checks.
pub const MAX_EXHAUSTIVE_N: usize = MAX_FULL_N;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContainerParams {
    pub eps: Rational,
    pub tau: f64,
}

impl ContainerParams {
    pub fn new(eps: Rational, tau: f64) -> Result<Self> {
        if !(eps > Rational::from_integer(0) && eps < Rational::new(1, 2)) {
            return Err(Error::InvalidParameter(format!(
                "eps={} must lie in (0, 1/2)",
                ratio_string(&eps)
            )));
        }
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::InvalidParameter(format!("tau={tau} must lie in (0, 1]")));
        }
        Ok(ContainerParams { eps, tau })
    }
}

/// One decision of the algorithm, as seen by [`ContainerEngine::trace`].
#[derive(Clone, Copy, Debug)]
pub struct TraceStep {
    pub members: u64,
    pub available: u64,
    pub chosen: usize,
    pub member: bool,
    /// Elements removed from `A` by this decision, other than `chosen`.
    pub pruned: u64,
}

/// Where an independent set ends up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Route {
    pub fingerprint: u64,
    pub container: u64,
    pub rounds: usize,
}

/// The algorithm bound to one hypergraph and parameter set.
#[derive(Clone, Debug)]
pub struct ContainerEngine {
    universe: usize,
    edges: Vec<u64>,
    incidence: Vec<Vec<u32>>,
    params: ContainerParams,
    round_budget: usize,
    round_cap: usize,
}

impl ContainerEngine {
    pub fn new(d: &PairHypergraph, params: ContainerParams) -> Result<Self> {
        let n = d.universe().vertices();
        let universe = d.universe().size();
        let edges = d.edge_masks().ok_or_else(|| {
            Error::Budget(format!(
                "containers are built for N <= {MAX_CONTAINER_N}, requested N={n}"
            ))
        })?;
        let incidence = (0..universe).map(|x| d.incident(x).to_vec()).collect();
        let round_budget = ((params.tau * universe as f64).ceil() as usize).max(1);
        let inv = (Rational::from_integer(1) / params.eps).ceil().to_integer() as usize;
        Ok(ContainerEngine {
            universe,
            edges,
            incidence,
            params,
            round_budget,
            round_cap: 4 * d.uniformity() * inv,
        })
    }

    pub fn params(&self) -> ContainerParams {
        self.params
    }

    /// Fingerprint elements allowed per round: `max(1, ⌈τ·|U|⌉)`.
    pub fn round_budget(&self) -> usize {
        self.round_budget
    }

    /// `4·r·⌈1/ε⌉`.
    pub fn round_cap(&self) -> usize {
        self.round_cap
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn full(&self) -> u64 {
        if self.universe == 64 {
            u64::MAX
        } else {
            (1u64 << self.universe) - 1
        }
    }

    pub fn spanned(&self, set: u64) -> usize {
        self.edges.iter().filter(|&&e| e & set == e).count()
    }

    /// `spanned ≤ ε·e(D)`, exactly.
    pub fn is_sparse(&self, set: u64) -> bool {
        sparse_enough(self.spanned(set), self.edges.len(), self.params.eps)
    }

    fn rounds(&self, members: u64) -> usize {
        (members.count_ones() as usize).div_ceil(self.round_budget)
    }

    fn check_rounds(&self, members: u64) -> Result<()> {
        let rounds = self.rounds(members);
        if rounds > self.round_cap {
            return Err(Error::Budget(format!(
                "fingerprint {:x} needs {rounds} rounds of {} elements, cap is {}",
                members, self.round_budget, self.round_cap
            )));
        }
        Ok(())
    }

    /// The element to decide next, or `None` at a leaf.
    fn select(&self, members: u64, available: u64) -> Option<usize> {
        let set = members | available;
        if self.is_sparse(set) {
            return None;
        }
        let mut best: Option<(usize, usize)> = None;
        let mut rest = available;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let deg = self.incidence[x]
                .iter()
                .filter(|&&id| {
                    let e = self.edges[id as usize];
                    e & set == e
                })
                .count();
            if best.is_none_or(|(b, _)| deg > b) {
                best = Some((deg, x));
            }
        }
        // A dense S ∪ A has a hyperedge with an available element.
        best.map(|(_, x)| x)
    }

    /// Elements of `available` forced out once `x` joins `members`.
    fn forced_out(&self, members: u64, available: u64, x: usize) -> u64 {
        let with = members | 1 << x;
        let mut out = 0u64;
        for &id in &self.incidence[x] {
            let rest = self.edges[id as usize] & !with;
            if rest.count_ones() == 1 {
                out |= rest;
            }
        }
        out & available & !(1 << x)
    }

    fn step(&self, members: u64, available: u64, x: usize, member: bool) -> (u64, u64, u64) {
        let bit = 1u64 << x;
        if member {
            let pruned = self.forced_out(members, available, x);
            (members | bit, available & !bit & !pruned, pruned)
        } else {
            (members, available & !bit, 0)
        }
    }

    /// Replays the path of the independent set `set`.
    pub fn route(&self, set: u64) -> Result<Route> {
        if set & !self.full() != 0 || self.edges.iter().any(|&e| e & set == e) {
            return Err(Error::Precondition(format!(
                "{set:x} is not an independent set of the hypergraph"
            )));
        }
        let (mut members, mut available) = (0u64, self.full());
        while let Some(x) = self.select(members, available) {
            let member = set >> x & 1 == 1;
            (members, available, _) = self.step(members, available, x, member);
            self.check_rounds(members)?;
        }
        Ok(Route {
            fingerprint: members,
            container: members | available,
            rounds: self.rounds(members),
        })
    }

    /// Visits every decision of the whole tree in depth-first order.
    pub fn trace(&self, visit: &mut dyn FnMut(&TraceStep)) -> Result<()> {
        fn go(
            eng: &ContainerEngine,
            members: u64,
            available: u64,
            visit: &mut dyn FnMut(&TraceStep),
        ) -> Result<()> {
            eng.check_rounds(members)?;
            let Some(x) = eng.select(members, available) else {
                return Ok(());
            };
            for member in [true, false] {
                let (m, a, pruned) = eng.step(members, available, x, member);
                visit(&TraceStep {
                    members,
                    available,
                    chosen: x,
                    member,
                    pruned,
                });
                go(eng, m, a, visit)?;
            }
            Ok(())
        }
        go(self, 0, self.full(), visit)
    }

    /// Every leaf as `(fingerprint, container)`, sorted by fingerprint.
    pub fn leaves(&self, workers: usize) -> Result<Vec<(u64, u64)>> {
        // Subtrees below this depth run sequentially.
        const SPLIT_DEPTH: usize = 12;
        fn go(
            eng: &ContainerEngine,
            members: u64,
            available: u64,
            depth: usize,
            parallel: bool,
            out: &mut Vec<(u64, u64)>,
        ) -> Result<()> {
            eng.check_rounds(members)?;
            if out.len() > MAX_CONTAINERS {
                return Err(Error::Budget(format!(
                    "container family exceeds {MAX_CONTAINERS} members"
                )));
            }
            let Some(x) = eng.select(members, available) else {
                out.push((members, members | available));
                return Ok(());
            };
            let (m1, a1, _) = eng.step(members, available, x, true);
            let (m0, a0, _) = eng.step(members, available, x, false);
            if parallel && depth < SPLIT_DEPTH {
                let mut right = Vec::new();
                let (l, r) = rayon::join(
                    || go(eng, m1, a1, depth + 1, true, out),
                    || go(eng, m0, a0, depth + 1, true, &mut right),
                );
                l?;
                r?;
                out.extend(right);
                Ok(())
            } else {
                go(eng, m1, a1, depth + 1, parallel, out)?;
                go(eng, m0, a0, depth + 1, parallel, out)
            }
        }
        let mut out = Vec::new();
        crate::extremal::run_pool(workers, || go(self, 0, self.full(), 0, workers > 1, &mut out))?;
        out.sort_unstable();
        Ok(out)
    }
}

fn sparse_enough(spanned: usize, total: usize, eps: Rational) -> bool {
    // spanned ≤ (p/q)·total  ⇔  q·spanned ≤ p·total
    (*eps.denom() as i128) * spanned as i128 <= (*eps.numer() as i128) * total as i128
}

/// Containers with their fingerprints, sorted by fingerprint.
#[derive(Clone, Debug, PartialEq)]
pub struct ContainerFamily {
    pub n: usize,
    pub r: usize,
    pub params: ContainerParams,
    containers: Vec<u64>,
    fingerprints: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl ContainerFamily {
    pub fn from_parts(
        n: usize,
        r: usize,
        params: ContainerParams,
        containers: Vec<u64>,
        fingerprints: Vec<u64>,
    ) -> Result<Self> {
        if containers.len() != fingerprints.len() {
            return Err(Error::InvalidParameter(format!(
                "{} containers but {} fingerprints",
                containers.len(),
                fingerprints.len()
            )));
        }
        let mut index = HashMap::with_capacity(fingerprints.len());
        for (i, &f) in fingerprints.iter().enumerate() {
            if index.insert(f, i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate fingerprint {f:x}")));
            }
        }
        Ok(ContainerFamily {
            n,
            r,
            params,
            containers,
            fingerprints,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.containers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.containers.is_empty()
    }

    pub fn containers(&self) -> &[u64] {
        &self.containers
    }

    pub fn fingerprints(&self) -> &[u64] {
        &self.fingerprints
    }

    /// Index of the container named by a fingerprint.
    pub fn lookup(&self, fingerprint: u64) -> Option<usize> {
        self.index.get(&fingerprint).copied()
    }

    pub fn digraph(&self, i: usize) -> Digraph {
        Digraph::from_mask(self.n, self.containers[i])
    }

    /// Drops universe element `x` from container `i`; used to check that
    /// verification notices damage.
    pub fn remove_element(&mut self, i: usize, x: usize) -> Result<()> {
        let c = self.containers.get_mut(i).ok_or_else(|| {
            Error::InvalidParameter(format!("no container with index {i}"))
        })?;
        if x >= 64 || *c >> x & 1 == 0 {
            return Err(Error::InvalidParameter(format!(
                "element {x} is not in container {i}"
            )));
        }
        *c &= !(1 << x);
        Ok(())
    }

    pub fn log2_size(&self) -> f64 {
        (self.len() as f64).log2()
    }

    fn hex_width(&self) -> usize {
        (self.n * self.n.saturating_sub(1)).div_ceil(4).max(1)
    }

    /// Header `N r eps tau count`, one hex bitset per container (bit `i`
    /// is universe element `i`), then `<fingerprint> <index>` per line.
    pub fn export(&self) -> String {
        let w = self.hex_width();
        let mut s = format!(
            "{} {} {} {:?} {}\n",
            self.n,
            self.r,
            ratio_string(&self.params.eps),
            self.params.tau,
            self.len()
        );
        for c in &self.containers {
            writeln!(s, "{c:0w$x}").unwrap();
        }
        for (i, f) in self.fingerprints.iter().enumerate() {
            writeln!(s, "{f:0w$x} {i}").unwrap();
        }
        s
    }

    pub fn import(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let bad = |line: usize, msg: &str| {
            Error::InvalidParameter(format!("container file line {}: {msg}", line + 1))
        };
        let (hl, header) = lines.next().ok_or_else(|| bad(0, "missing header"))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        if f.len() != 5 {
            return Err(bad(hl, "header must be `N r eps tau count`"));
        }
        let n: usize = f[0].parse().map_err(|_| bad(hl, "bad N"))?;
        let r: usize = f[1].parse().map_err(|_| bad(hl, "bad r"))?;
        let eps = parse_rational(f[2])?;
        let tau: f64 = f[3].parse().map_err(|_| bad(hl, "bad tau"))?;
        let count: usize = f[4].parse().map_err(|_| bad(hl, "bad count"))?;
        if n > MAX_CONTAINER_N {
            return Err(bad(hl, "N too large"));
        }
        let params = ContainerParams::new(eps, tau)?;
        let hex = |line: usize, s: &str| {
            u64::from_str_radix(s, 16).map_err(|_| bad(line, "bad hex bitset"))
        };
        let mut containers = Vec::with_capacity(count);
        for _ in 0..count {
            let (l, s) = lines.next().ok_or_else(|| bad(hl, "too few container lines"))?;
            containers.push(hex(l, s.trim())?);
        }
        let mut fingerprints = vec![None; count];
        for _ in 0..count {
            let (l, s) = lines.next().ok_or_else(|| bad(hl, "too few fingerprint lines"))?;
            let (fp, idx) = s
                .trim()
                .split_once(' ')
                .ok_or_else(|| bad(l, "expected `<fingerprint> <index>`"))?;
            let idx: usize = idx.trim().parse().map_err(|_| bad(l, "bad index"))?;
            let slot = fingerprints.get_mut(idx).ok_or_else(|| bad(l, "index out of range"))?;
            *slot = Some(hex(l, fp)?);
        }
        if let Some((l, _)) = lines.next() {
            return Err(bad(l, "trailing content"));
        }
        let fingerprints = fingerprints
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad(hl, "some container has no fingerprint"))?;
        ContainerFamily::from_parts(n, r, params, containers, fingerprints)
    }
}

/// Runs the algorithm to completion and materialises every leaf.
pub fn build_containers(
    d: &PairHypergraph,
    params: ContainerParams,
    workers: usize,
) -> Result<ContainerFamily> {
    let engine = ContainerEngine::new(d, params)?;
    let leaves = engine.leaves(workers)?;
    let (fingerprints, containers) = leaves.into_iter().unzip();
    ContainerFamily::from_parts(
        d.universe().vertices(),
        d.uniformity(),
        params,
        containers,
        fingerprints,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every pattern-free digraph on `[N]`.
    Exhaustive,
    /// Uniform pattern-free digraphs by rejection from uniform digraphs.
    Sampled { samples: u64, seed: u64 },
}

impl VerifyMode {
    pub fn name(&self) -> &'static str {
        match self {
            VerifyMode::Exhaustive => "exhaustive",
            VerifyMode::Sampled { .. } => "sampled",
        }
    }
}

/// An independent set the family fails to cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageMiss {
    pub witness: Digraph,
    pub fingerprint: u64,
    /// `None` when the fingerprint names no container.
    pub container: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SparsityRow {
    pub index: usize,
    /// Copies of `H` in the decoded container, counted directly.
    pub copies: u64,
    pub sparse: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub mode: VerifyMode,
    /// Independent sets checked.
    pub checked: u64,
    /// Uniform digraphs drawn (sampled mode).
    pub drawn: u64,
    pub miss: Option<CoverageMiss>,
    pub sparsity: Vec<SparsityRow>,
    pub hyperedges: usize,
}

impl VerifyReport {
    pub fn covered(&self) -> bool {
        self.miss.is_none()
    }

    pub fn sparse(&self) -> bool {
        self.sparsity.iter().all(|s| s.sparse)
    }

    pub fn passed(&self) -> bool {
        self.covered() && self.sparse()
    }
}

/// Checks coverage through the fingerprint map and re-counts the copies
/// inside every container.
pub fn verify_family(
    d: &PairHypergraph,
    pattern: &Pattern,
    family: &ContainerFamily,
    mode: VerifyMode,
    workers: usize,
) -> Result<VerifyReport> {
    let n = d.universe().vertices();
    if family.n != n || family.r != d.uniformity() {
        return Err(Error::Precondition(format!(
            "family is for N={} r={}, hypergraph is N={n} r={}",
            family.n,
            family.r,
            d.uniformity()
        )));
    }
    let engine = ContainerEngine::new(d, family.params)?;
    let check = |set: u64| -> Result<Option<CoverageMiss>> {
        let route = engine.route(set)?;
        let container = family.lookup(route.fingerprint);
        let ok = container.is_some_and(|i| set & !family.containers[i] == 0);
        Ok((!ok).then(|| CoverageMiss {
            witness: Digraph::from_mask(n, set),
            fingerprint: route.fingerprint,
            container,
        }))
    };
    // Keeps the miss of the smallest mask so the witness is independent of
    // scheduling.
    let earliest = |a: Option<(u64, CoverageMiss)>, b: Option<(u64, CoverageMiss)>| match (a, b) {
        (Some(x), Some(y)) => Some(if y.0 < x.0 { y } else { x }),
        (x, y) => x.or(y),
    };

    let (checked, drawn, miss) = match mode {
        VerifyMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_N {
                return Err(Error::Budget(format!(
                    "exhaustive coverage covers N <= {MAX_EXHAUSTIVE_N}, requested N={n}"
                )));
            }
            let space = LabelledSpace::new(n, pattern)?;
            type Acc = (u64, Option<(u64, CoverageMiss)>, Option<Error>);
            let (checked, miss, err) = space.fold(
                0,
                workers,
                || (0u64, None, None),
                |acc: &mut Acc, leaf| {
                    acc.0 += 1;
                    match check(leaf.mask) {
                        Ok(Some(m)) => {
                            let cur = acc.1.take();
                            acc.1 = earliest(cur, Some((leaf.mask, m)));
                        }
                        Ok(None) => {}
                        Err(e) => {
                            acc.2.get_or_insert(e);
                        }
                    }
                },
                |a: Acc, b: Acc| (a.0 + b.0, earliest(a.1, b.1), a.2.or(b.2)),
            );
            if let Some(e) = err {
                return Err(e);
            }
            (checked, checked, miss.map(|m| m.1))
        }
        VerifyMode::Sampled { samples, seed } => {
            let (drawn, sets) = sample_independent(d, samples, seed, workers)?;
            let results: Vec<Result<Option<CoverageMiss>>> = crate::extremal::run_pool(workers, || {
                if workers > 1 {
                    sets.par_iter().map(|&s| check(s)).collect()
                } else {
                    sets.iter().map(|&s| check(s)).collect()
                }
            });
            let mut miss = None;
            for (s, r) in sets.iter().zip(results) {
                if let Some(m) = r? {
                    miss = earliest(miss, Some((*s, m)));
                }
            }
            (sets.len() as u64, drawn, miss.map(|m| m.1))
        }
    };

    let total = d.edge_count();
    let rows = |i: usize| {
        let copies = count_copies(&family.digraph(i), pattern);
        SparsityRow {
            index: i,
            copies,
            sparse: sparse_enough(copies as usize, total, family.params.eps),
        }
    };
    let sparsity: Vec<SparsityRow> = crate::extremal::run_pool(workers, || {
        if workers > 1 {
            (0..family.len()).into_par_iter().map(rows).collect()
        } else {
            (0..family.len()).map(rows).collect()
        }
    });
    Ok(VerifyReport {
        mode,
        checked,
        drawn,
        miss,
        sparsity,
        hyperedges: total,
    })
}

/// Draws `samples` independent sets, each uniform among all independent
/// sets, by rejection from uniform subsets of the universe. Returns the
/// number of draws and the accepted sets in draw order.
///
/// Draws come in fixed blocks, each from its own stream seeded by
/// `(seed, block)`, so the result does not depend on `workers`.
pub fn sample_independent(
    d: &PairHypergraph,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<(u64, Vec<u64>)> {
    const BLOCK: u64 = 1 << 16;
    const MAX_DRAWS: u64 = 1 << 36;
    let edges = d.edge_masks().ok_or_else(|| {
        Error::Budget(format!("sampling needs N <= {MAX_CONTAINER_N}"))
    })?;
    let size = d.universe().size();
    let full = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
    let block = |b: u64| -> Vec<(u64, u64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b);
        (0..BLOCK)
            .filter_map(|k| {
                let s = rng.gen::<u64>() & full;
                edges.iter().all(|&e| e & s != e).then_some((b * BLOCK + k, s))
            })
            .collect()
    };
    let mut accepted: Vec<u64> = Vec::new();
    let mut next = 0u64;
    let batch = workers.max(1) as u64 * 4;
    while (accepted.len() as u64) < samples {
        if next * BLOCK >= MAX_DRAWS {
            return Err(Error::Budget(format!(
                "rejection sampling accepted {} of {samples} sets in {MAX_DRAWS} draws",
                accepted.len()
            )));
        }
        let ids: Vec<u64> = (next..next + batch).collect();
        next += batch;
        let found: Vec<Vec<(u64, u64)>> = crate::extremal::run_pool(workers, || {
            if workers > 1 {
                ids.par_iter().map(|&b| block(b)).collect()
            } else {
                ids.iter().map(|&b| block(b)).collect()
            }
        });
        for (draw, s) in found.into_iter().flatten() {
            if (accepted.len() as u64) < samples {
                accepted.push(s);
                if accepted.len() as u64 == samples {
                    return Ok((draw + 1, accepted));
                }
            }
        }
    }
    Ok((0, accepted))
}
