//! Density parameters of a pattern: `m(H)`, the sparsity condition
//! `e(H')/v(H') ≤ a/2`, and the constant `C(H) = r·2^(r²)·(h!)²`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::pattern::{enumerate_subpatterns, Pattern, Subpattern};
use crate::weight::{ratio_string, Rational, Weight};

/// `m(H)`. Infinite whenever a qualifying subgraph spans only two
/// vertices (a 2-cycle), where `(e-1)/(v-2)` has a zero denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MDensity {
    Finite(Rational),
    Infinite,
}

impl MDensity {
    pub fn finite(&self) -> Option<Rational> {
        match self {
            MDensity::Finite(r) => Some(*r),
            MDensity::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, MDensity::Infinite)
    }

    /// `p/q`, or `inf`.
    pub fn to_exact_string(&self) -> String {
        match self {
            MDensity::Finite(r) => ratio_string(r),
            MDensity::Infinite => "inf".to_string(),
        }
    }
}

impl PartialOrd for MDensity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MDensity {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (MDensity::Infinite, MDensity::Infinite) => Ordering::Equal,
            (MDensity::Infinite, _) => Ordering::Greater,
            (_, MDensity::Infinite) => Ordering::Less,
            (MDensity::Finite(a), MDensity::Finite(b)) => a.cmp(b),
        }
    }
}

/// An edge subset of the pattern with its spanned vertex count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub edges: Vec<(usize, usize)>,
    pub vertices: u32,
}

impl Witness {
    fn of(pattern: &Pattern, sub: &Subpattern) -> Self {
        Witness {
            edges: pattern.edges_of(sub.mask),
            vertices: sub.vertices,
        }
    }

    pub fn edge_count(&self) -> u32 {
        self.edges.len() as u32
    }

    pub fn density(&self) -> Rational {
        Rational::new(self.edges.len() as i64, self.vertices as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MResult {
    pub value: MDensity,
    pub witness: Witness,
    /// The maximum restricted to subgraphs on at least three vertices, when
    /// any exist. Equals `value` whenever `value` is finite.
    pub over_three_or_more: Option<(Rational, Witness)>,
}

fn check_size(pattern: &Pattern) -> Result<()> {
    if pattern.size() < 2 {
        return Err(Error::Precondition("pattern needs e(H) >= 2".into()));
    }
    Ok(())
}

/// Maximum of `(e(H')-1)/(v(H')-2)` over edge subsets with `e(H') > 1`.
pub fn m_density(pattern: &Pattern) -> Result<MResult> {
    check_size(pattern)?;
    let subs = enumerate_subpatterns(pattern)?;
    let mut finite_best: Option<(Rational, &Subpattern)> = None;
    let mut degenerate: Option<&Subpattern> = None;
    for sub in &subs {
        if sub.vertices == 2 {
            degenerate.get_or_insert(sub);
            continue;
        }
        let ratio = Rational::new(sub.edges as i64 - 1, sub.vertices as i64 - 2);
        if finite_best.as_ref().is_none_or(|(b, _)| ratio > *b) {
            finite_best = Some((ratio, sub));
        }
    }
    let over_three_or_more = finite_best.map(|(r, s)| (r, Witness::of(pattern, s)));
    let result = match (degenerate, &over_three_or_more) {
        (Some(sub), _) => MResult {
            value: MDensity::Infinite,
            witness: Witness::of(pattern, sub),
            over_three_or_more,
        },
        (None, Some((r, w))) => MResult {
            value: MDensity::Finite(*r),
            witness: w.clone(),
            over_three_or_more,
        },
        (None, None) => unreachable!("a pattern with two edges has a qualifying subgraph"),
    };
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionA {
    pub holds: bool,
    /// A subgraph of maximum density `e/v` (ties: more edges, then first in
    /// subset order). When `holds` is false this density exceeds `a/2`.
    pub densest: Witness,
    pub weight: Weight,
}

impl ConditionA {
    /// `"e/v <= a/2"` or `"e/v > a/2"` with the numbers filled in.
    pub fn comparison_string(&self) -> String {
        let op = if self.holds { "<=" } else { ">" };
        format!(
            "{}/{} {} {}",
            self.densest.edge_count(),
            self.densest.vertices,
            op,
            half_string(&self.weight)
        )
    }
}

fn half_string(w: &Weight) -> String {
    match w {
        Weight::Rational(r) if r.is_integer() => format!("{}/2", r.numer()),
        Weight::Rational(r) => format!("{}/{}", r.numer(), 2 * r.denom()),
        Weight::Log2(k) => format!("log2({k})/2"),
    }
}

/// Whether every `H' ⊆ H` with `e(H') > 1` has `e(H')/v(H') ≤ a/2`.
pub fn condition_a(pattern: &Pattern, weight: &Weight) -> Result<ConditionA> {
    check_size(pattern)?;
    let subs = enumerate_subpatterns(pattern)?;
    let densest = subs
        .iter()
        .reduce(|best, s| {
            let a = Rational::new(s.edges as i64, s.vertices as i64);
            let b = Rational::new(best.edges as i64, best.vertices as i64);
            match a.cmp(&b).then(s.edges.cmp(&best.edges)) {
                Ordering::Greater => s,
                _ => best,
            }
        })
        .expect("at least one subset with two edges");
    // e/v ≤ a/2  ⇔  a·v ≥ 2e
    let holds = weight.cmp_scaled(densest.vertices as i64, 2 * densest.edges as i64)
        != Ordering::Less;
    Ok(ConditionA {
        holds,
        densest: Witness::of(pattern, densest),
        weight: weight.clone(),
    })
}

/// `C(H) = r · 2^(r²) · (h!)²`.
pub fn constant_c(pattern: &Pattern) -> BigUint {
    let r = pattern.size() as u32;
    let h = pattern.order() as u32;
    let fact: BigUint = (1..=h).fold(BigUint::one(), |acc, i| acc * i);
    BigUint::from(r) * (BigUint::one() << (r * r)) * &fact * &fact
}

#[derive(Clone, Debug)]
pub struct DensityReport {
    pub m: MResult,
    pub condition_a: ConditionA,
    pub c_of_h: BigUint,
}

pub fn density_report(pattern: &Pattern, weight: &Weight) -> Result<DensityReport> {
    Ok(DensityReport {
        m: m_density(pattern)?,
        condition_a: condition_a(pattern, weight)?,
        c_of_h: constant_c(pattern),
    })
}
