//! End to end: gate the pattern, build `D(N, H)` with `τ = N^(-1/m)`, build
//! containers, verify them, and measure every container against the three
//! target properties.

use std::cmp::Ordering;

use crate::container::{
    build_containers, verify_family, ContainerEngine, ContainerFamily, ContainerParams, VerifyMode, VerifyReport,
    MAX_EXHAUSTIVE_N,
};
use crate::density::{condition_a, m_density, ConditionA};
use crate::error::{Error, Result};
use crate::extremal::{ex_a, ExtremalResult, SearchMode, SearchOptions, MAX_CANONICAL_N, MAX_FULL_N};
use crate::hypergraph::PairHypergraph;
use crate::pattern::Pattern;
use crate::weight::{rational_to_f64, ratio_string, weighted_size, Rational, Weight, WeightedValue};

#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    pub workers: usize,
    /// Independent sets sampled when `N` is too large for exhaustive
    /// coverage.
    pub samples: u64,
    pub seed: u64,
    /// Largest `N` for which `ex_a(N, H)` is computed; the canonical
    /// search at `N = 7` takes minutes, so it is opt-in.
    pub ex_limit: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            workers: 1,
            samples: 10_000,
            seed: 0,
            ex_limit: 6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ContainerRow {
    pub index: usize,
    pub fingerprint: u64,
    /// Copies of `H` in `G_C`, counted directly.
    pub copies: u64,
    /// `copies ≤ ε·e(D)`.
    pub within_hyperedge_budget: bool,
    /// `copies ≤ ε·N^h`.
    pub within_vertex_budget: bool,
    pub weighted: WeightedValue,
    /// `e_a(G_C) ≤ ex_a(N, H) + ε·N²`, when `ex_a` is known.
    pub within_weight_bound: Option<bool>,
    /// `ex_a(N, H) + ε·N² - e_a(G_C)`, when `ex_a` is known.
    pub slack: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub n: usize,
    pub weight: Weight,
    pub eps: Rational,
    pub condition: ConditionA,
    pub m: Rational,
    pub tau: f64,
    pub hyperedges: usize,
    pub labelled_copies: u128,
    /// `N^h`.
    pub vertex_normaliser: u128,
    pub family: ContainerFamily,
    pub verification: VerifyReport,
    pub extremal: Option<ExtremalResult>,
    pub rows: Vec<ContainerRow>,
    pub log2_family_size: f64,
    /// `N^(2-1/m)·ln N`.
    pub reference: f64,
    /// `log2|C|` divided by the reference.
    pub fitted_constant: f64,
    pub max_rounds: usize,
}

impl PipelineReport {
    /// Every pattern-free digraph checked lies in its container.
    pub fn coverage_holds(&self) -> bool {
        self.verification.covered()
    }

    /// Every container has at most `ε·e(D)` copies.
    pub fn sparsity_holds(&self) -> bool {
        self.verification.sparse() && self.rows.iter().all(|r| r.within_hyperedge_budget)
    }

    pub fn vertex_budget_holds(&self) -> bool {
        self.rows.iter().all(|r| r.within_vertex_budget)
    }

    /// `None` when `ex_a(N, H)` was not computed.
    pub fn weight_bound_holds(&self) -> Option<bool> {
        self.rows
            .iter()
            .map(|r| r.within_weight_bound)
            .collect::<Option<Vec<bool>>>()
            .map(|v| v.into_iter().all(|b| b))
    }
}

pub fn container_pipeline(
    pattern: &Pattern,
    weight: &Weight,
    n: usize,
    eps: Rational,
    opts: &PipelineOptions,
) -> Result<PipelineReport> {
    let condition = condition_a(pattern, weight)?;
    if !condition.holds {
        return Err(Error::ConditionAFailed {
            witness: condition.comparison_string(),
        });
    }
    let m = m_density(pattern)?;
    let Some(m_value) = m.value.finite() else {
        return Err(Error::InfiniteDensity {
            reason: format!(
                "the pattern contains a 2-cycle ({:?}), so tau = N^(-1/m) is undefined",
                m.witness.edges
            ),
        });
    };
    let m_f = rational_to_f64(&m_value);
    let tau = (n as f64).powf(-1.0 / m_f);
    let params = ContainerParams::new(eps, tau)?;

    let d = PairHypergraph::build(n, pattern)?;
    let family = build_containers(&d, params, opts.workers)?;
    let mode = if n <= MAX_EXHAUSTIVE_N {
        VerifyMode::Exhaustive
    } else {
        VerifyMode::Sampled {
            samples: opts.samples,
            seed: opts.seed,
        }
    };
    let verification = verify_family(&d, pattern, &family, mode, opts.workers)?;

    let search = SearchOptions {
        workers: opts.workers,
        ..SearchOptions::default()
    };
    let extremal = if n <= opts.ex_limit.min(MAX_CANONICAL_N) {
        let mode = if n <= MAX_FULL_N {
            SearchMode::Full
        } else {
            SearchMode::Canonical
        };
        Some(ex_a(n, pattern, weight, mode, &search)?)
    } else {
        None
    };

    let n2 = Rational::from_integer((n * n) as i64);
    let nh = (n as u128).pow(pattern.order() as u32);
    let e_d = d.edge_count() as i128;
    let (p, q) = (*eps.numer() as i128, *eps.denom() as i128);
    let rows: Vec<ContainerRow> = verification
        .sparsity
        .iter()
        .map(|s| {
            let g = family.digraph(s.index);
            let weighted = weighted_size(&g, weight);
            let (within, slack) = match &extremal {
                Some(ex) => {
                    // a·f2 + f1 ≤ a·F2 + F1 + εN²
                    //   ⇔  a·(f2 - F2) ≤ F1 - f1 + εN²
                    let ep = ex.value.profile;
                    let x = weighted.profile.doubles as i64 - ep.doubles as i64;
                    let y = Rational::from_integer(ep.singles as i64 - weighted.profile.singles as i64)
                        + eps * n2;
                    let ok = weight.cmp_scaled_rational(x, y) != Ordering::Greater;
                    let slack = ex.value.to_f64() + rational_to_f64(&(eps * n2)) - weighted.to_f64();
                    (Some(ok), Some(slack))
                }
                None => (None, None),
            };
            ContainerRow {
                index: s.index,
                fingerprint: family.fingerprints()[s.index],
                copies: s.copies,
                within_hyperedge_budget: q * s.copies as i128 <= p * e_d,
                within_vertex_budget: (q as u128) * s.copies as u128 <= (p as u128) * nh,
                weighted,
                within_weight_bound: within,
                slack,
            }
        })
        .collect();

    let log2_family_size = family.log2_size();
    let reference = (n as f64).powf(2.0 - 1.0 / m_f) * (n as f64).ln();
    let budget = ContainerEngine::new(&d, params)?.round_budget();
    let max_rounds = family
        .fingerprints()
        .iter()
        .map(|f| (f.count_ones() as usize).div_ceil(budget))
        .max()
        .unwrap_or(0);
    Ok(PipelineReport {
        n,
        weight: weight.clone(),
        eps,
        condition,
        m: m_value,
        tau,
        hyperedges: d.edge_count(),
        labelled_copies: d.labelled_copy_count(),
        vertex_normaliser: nh,
        family,
        verification,
        extremal,
        rows,
        log2_family_size,
        reference,
        fitted_constant: log2_family_size / reference,
        max_rounds,
    })
}

/// `p/q` for the slack bound `ε·N²`.
pub fn eps_n2_string(eps: Rational, n: usize) -> String {
    ratio_string(&(eps * Rational::from_integer((n * n) as i64)))
}
