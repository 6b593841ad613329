//! Co-degree statistics of the pair hypergraph and the degree-lemma check.
//!
//! For a set `σ` of universe elements, `d(σ)` is the number of hyperedges
//! containing `σ`, and `d⁽ʲ⁾(v) = max{ d(σ) : v ∈ σ, |σ| = j }`. The
//! normalised co-degrees `δ_j` solve `δ_j·τ^(j-1)·|U|·D = Σ_v d⁽ʲ⁾(v)`
//! with `D` either the average degree or the maximum degree, and
//! `δ(D, τ) = 2^(C(r,2)-1) · Σ_{j=2..r} 2^-(j-1) δ_j`.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::density::{constant_c, m_density, MDensity};
use crate::error::{Error, Result};
use crate::hypergraph::PairHypergraph;
use crate::pattern::Pattern;
use crate::weight::rational_to_f64;

/// Which degree normalises `δ_j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DegreeNormalization {
    /// Average degree `r·e(D)/|U|`; the identity used in the degree lemma.
    #[default]
    Average,
    /// Maximum degree `Δ_1`.
    Maximum,
}

impl DegreeNormalization {
    pub fn name(&self) -> &'static str {
        match self {
            DegreeNormalization::Average => "average",
            DegreeNormalization::Maximum => "maximum",
        }
    }
}

/// `Σ_v d⁽ʲ⁾(v)` for `j = 2..=r` (entry `j-2`), exact.
pub fn codegree_sums(d: &PairHypergraph) -> Vec<u64> {
    let r = d.uniformity();
    (2..=r).map(|j| (0..d.universe().size()).map(|v| max_codegree(d, v, j)).sum()).collect()
}

/// `d⁽ʲ⁾(v)`: only `j`-sets inside some hyperedge through `v` can have a
/// positive co-degree, so those are the only ones enumerated.
pub fn max_codegree(d: &PairHypergraph, v: usize, j: usize) -> u64 {
    let through = d.incident(v);
    if through.is_empty() {
        return 0;
    }
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut best = 0u64;
    for &id in through {
        let others: Vec<u32> = d.edges()[id as usize]
            .iter()
            .copied()
            .filter(|&x| x as usize != v)
            .collect();
        for_each_subset(&others, j - 1, &mut |subset| {
            let mut key = subset.to_vec();
            key.push(v as u32);
            key.sort_unstable();
            let c = counts.entry(key).or_insert(0);
            *c += 1;
            best = best.max(*c);
        });
    }
    best
}

fn for_each_subset(items: &[u32], k: usize, f: &mut dyn FnMut(&[u32])) {
    fn go(items: &[u32], k: usize, start: usize, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let need = k - cur.len();
        if items.len() < start + need {
            return;
        }
        for i in start..=items.len() - need {
            cur.push(items[i]);
            go(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    let mut cur = Vec::with_capacity(k);
    go(items, k, 0, &mut cur, f);
}

#[derive(Clone, Debug)]
pub struct CodegreeProfile {
    pub tau: f64,
    pub normalization: DegreeNormalization,
    pub universe_size: usize,
    pub edge_count: usize,
    pub average_degree: f64,
    pub max_degree: usize,
    /// `Σ_v d⁽ʲ⁾(v)` for `j = 2..=r`.
    pub codegree_sums: Vec<u64>,
    /// `δ_j` for `j = 2..=r`.
    pub delta_j: Vec<f64>,
    /// `δ(D, τ)`.
    pub delta: f64,
}

impl CodegreeProfile {
    pub fn from_sums(
        d: &PairHypergraph,
        sums: Vec<u64>,
        tau: f64,
        normalization: DegreeNormalization,
    ) -> Result<Self> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::InvalidParameter(format!("tau={tau} must lie in (0, 1]")));
        }
        if d.edge_count() == 0 {
            return Err(Error::Precondition(
                "hypergraph has no hyperedges; the average degree is zero".into(),
            ));
        }
        let n_u = d.universe().size() as f64;
        let scale = match normalization {
            DegreeNormalization::Average => d.average_degree(),
            DegreeNormalization::Maximum => d.max_degree() as f64,
        };
        let delta_j: Vec<f64> = sums
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let j = i + 2;
                s as f64 / (tau.powi(j as i32 - 1) * n_u * scale)
            })
            .collect();
        let r = d.uniformity() as i32;
        let lead = 2f64.powi(r * (r - 1) / 2 - 1);
        let delta = lead
            * delta_j
                .iter()
                .enumerate()
                .map(|(i, dj)| 2f64.powi(-(i as i32 + 1)) * dj)
                .sum::<f64>();
        Ok(CodegreeProfile {
            tau,
            normalization,
            universe_size: d.universe().size(),
            edge_count: d.edge_count(),
            average_degree: d.average_degree(),
            max_degree: d.max_degree(),
            codegree_sums: sums,
            delta_j,
            delta,
        })
    }
}

pub fn codegree_profile(
    d: &PairHypergraph,
    tau: f64,
    normalization: DegreeNormalization,
) -> Result<CodegreeProfile> {
    if d.edge_count() == 0 {
        return Err(Error::Precondition(
            "hypergraph has no hyperedges; the average degree is zero".into(),
        ));
    }
    CodegreeProfile::from_sums(d, codegree_sums(d), tau, normalization)
}

#[derive(Clone, Debug)]
pub struct LemmaRow {
    pub n: usize,
    pub tau: f64,
    pub profile: CodegreeProfile,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub gamma: f64,
    pub m: MDensity,
    pub c_of_h: num_bigint::BigUint,
    pub rows: Vec<LemmaRow>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Evaluates `δ(D(N,H), γ⁻¹·N^(-1/m(H)))` against `C(H)·γ` for each `N`.
pub fn verify_degree_lemma(
    pattern: &Pattern,
    ns: &[usize],
    gamma: f64,
    normalization: DegreeNormalization,
) -> Result<LemmaReport> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Precondition(format!("gamma={gamma} must lie in (0, 1]")));
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
    let c = constant_c(pattern);
    let bound = c.to_f64().unwrap_or(f64::INFINITY) * gamma;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let d = PairHypergraph::build(n, pattern)?;
        let tau = (n as f64).powf(-1.0 / m_f) / gamma;
        let profile = codegree_profile(&d, tau, normalization)?;
        rows.push(LemmaRow {
            n,
            tau,
            pass: profile.delta <= bound,
            bound,
            profile,
        });
    }
    Ok(LemmaReport {
        gamma,
        m: m.value,
        c_of_h: c,
        rows,
    })
}
