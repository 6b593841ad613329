use std::path::Path;

use dicon::canon::canonical_form;
use dicon::codegree::{codegree_profile, verify_degree_lemma, CodegreeProfile, DegreeNormalization};
use dicon::container::{
    build_containers, verify_family, ContainerEngine, ContainerFamily, ContainerParams, VerifyMode,
};
use dicon::copies::count_copies;
use dicon::density::{condition_a, constant_c, m_density, ConditionA, MDensity, Witness};
use dicon::extremal::{
    count_free, count_free_with, counting_ratio, ex_a, supersat_scan, CountMethod, SearchMode,
    SearchOptions, MAX_FULL_N,
};
use dicon::hypergraph::PairHypergraph;
use dicon::pattern::enumerate_subpatterns;
use dicon::pipeline::{container_pipeline, eps_n2_string, PipelineOptions};
use dicon::weight::{parse_rational, ratio_string, rational_to_f64, weighted_size, EdgeProfile};
use dicon::{Digraph, Error, Pattern, Rational, Weight};
use serde_json::{json, Map, Value};

use crate::{Command, Common, Outcome};

pub enum Failure {
    Usage(String),
    Core { error: Error, doc: Value },
}

enum CmdErr {
    Usage(String),
    Core(Error),
}

impl From<Error> for CmdErr {
    fn from(e: Error) -> Self {
        CmdErr::Core(e)
    }
}

type CmdResult = std::result::Result<Outcome, CmdErr>;

const FLOAT_NOTE: &str = "binary64, not exact";

fn approx(x: f64) -> Value {
    json!({ "value": x, "precision": FLOAT_NOTE })
}

fn hex(x: u64, universe: usize) -> String {
    format!("{:0w$x}", x, w = universe.div_ceil(4).max(1))
}

fn one_line(g: &Digraph) -> String {
    g.to_edge_list().trim_end().replace('\n', "; ")
}

fn edges_json(edges: &[(usize, usize)]) -> Value {
    Value::Array(edges.iter().map(|&(u, v)| json!([u, v])).collect())
}

fn witness_json(w: &Witness) -> Value {
    json!({
        "edges": edges_json(&w.edges),
        "e": w.edge_count(),
        "v": w.vertices,
        "density": ratio_string(&w.density()),
    })
}

fn profile_json(p: EdgeProfile) -> Value {
    json!({ "f2": p.doubles, "f1": p.singles })
}

fn read(path: &Path) -> std::result::Result<String, CmdErr> {
    std::fs::read_to_string(path)
        .map_err(|e| CmdErr::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_pattern(path: &Path) -> std::result::Result<(Pattern, Value), CmdErr> {
    let text = read(path)?;
    let g = Digraph::parse(&text).map_err(|e| match e {
        Error::Parse { .. } => CmdErr::Usage(format!("{}: {e}", path.display())),
        other => CmdErr::Core(other),
    })?;
    let p = Pattern::new(g)?;
    let info = json!({
        "file": path.display().to_string(),
        "edge_list": p.graph().to_edge_list(),
        "h": p.order(),
        "r": p.size(),
        "automorphisms": p.automorphisms(),
    });
    Ok((p, info))
}

fn weight(s: &str) -> std::result::Result<Weight, CmdErr> {
    s.parse::<Weight>().map_err(|e| CmdErr::Usage(e.to_string()))
}

fn rational(s: &str, what: &str) -> std::result::Result<Rational, CmdErr> {
    parse_rational(s).map_err(|_| CmdErr::Usage(format!("{what} `{s}` is not an exact rational")))
}

fn normalization(s: &str) -> std::result::Result<DegreeNormalization, CmdErr> {
    match s {
        "average" => Ok(DegreeNormalization::Average),
        "maximum" => Ok(DegreeNormalization::Maximum),
        _ => Err(CmdErr::Usage(format!("unknown normalization `{s}`"))),
    }
}

fn parse_range(s: &str) -> std::result::Result<Vec<usize>, CmdErr> {
    let bad = || CmdErr::Usage(format!("bad N range `{s}`"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn search(common: &Common, witness_cap: usize) -> SearchOptions {
    SearchOptions {
        workers: common.workers.max(1),
        witness_cap,
    }
}

/// Name and parameters of a command, in a fixed order.
fn describe(cmd: &Command) -> (&'static str, Vec<(&'static str, Value)>, Option<u64>) {
    let p = |x: &Path| Value::String(x.display().to_string());
    match cmd {
        Command::Density { pattern, a } => ("density", vec![("pattern", p(pattern)), ("a", json!(a))], None),
        Command::ConditionA { pattern, a } => {
            ("condition-a", vec![("pattern", p(pattern)), ("a", json!(a))], None)
        }
        Command::Ex {
            pattern,
            n,
            a,
            mode,
            witness_dir,
            witness_cap,
        } => (
            "ex",
            vec![
                ("pattern", p(pattern)),
                ("n", json!(n)),
                ("a", json!(a)),
                ("mode", json!(mode)),
                ("witness_dir", json!(witness_dir.as_ref().map(|d| d.display().to_string()))),
                ("witness_cap", json!(witness_cap)),
            ],
            None,
        ),
        Command::CountFree { pattern, n, method } => (
            "count-free",
            vec![("pattern", p(pattern)), ("n", json!(n)), ("method", json!(method))],
            None,
        ),
        Command::Ratio { pattern, n } => ("ratio", vec![("pattern", p(pattern)), ("n", json!(n))], None),
        Command::Supersat { pattern, n, a, k_max } => (
            "supersat",
            vec![
                ("pattern", p(pattern)),
                ("n", json!(n)),
                ("a", json!(a)),
                ("k_max", json!(k_max)),
            ],
            None,
        ),
        Command::Hypergraph { pattern, big_n, export } => (
            "hypergraph",
            vec![
                ("pattern", p(pattern)),
                ("N", json!(big_n)),
                ("export", json!(export.as_ref().map(|d| d.display().to_string()))),
            ],
            None,
        ),
        Command::Codegree {
            pattern,
            big_n,
            tau,
            normalization,
        } => (
            "codegree",
            vec![
                ("pattern", p(pattern)),
                ("N", json!(big_n)),
                ("tau", json!(tau)),
                ("normalization", json!(normalization)),
            ],
            None,
        ),
        Command::VerifyLemma {
            pattern,
            range,
            gamma,
            normalization,
        } => (
            "verify-lemma",
            vec![
                ("pattern", p(pattern)),
                ("N_range", json!(range)),
                ("gamma", json!(gamma)),
                ("normalization", json!(normalization)),
            ],
            None,
        ),
        Command::Containers {
            pattern,
            big_n,
            eps,
            tau,
            export,
        } => (
            "containers",
            vec![
                ("pattern", p(pattern)),
                ("N", json!(big_n)),
                ("eps", json!(eps)),
                ("tau", json!(tau)),
                ("export", json!(export.as_ref().map(|d| d.display().to_string()))),
            ],
            None,
        ),
        Command::VerifyFamily {
            pattern,
            family,
            mode,
            samples,
            seed,
        } => (
            "verify-family",
            vec![
                ("pattern", p(pattern)),
                ("family", p(family)),
                ("mode", json!(mode)),
                ("samples", json!(samples)),
            ],
            Some(*seed),
        ),
        Command::Pipeline {
            pattern,
            a,
            big_n,
            eps,
            samples,
            seed,
            max_rows,
            ex_limit,
        } => (
            "pipeline",
            vec![
                ("pattern", p(pattern)),
                ("a", json!(a)),
                ("N", json!(big_n)),
                ("eps", json!(eps)),
                ("samples", json!(samples)),
                ("max_rows", json!(max_rows)),
                ("ex_limit", json!(ex_limit)),
            ],
            Some(*seed),
        ),
    }
}

fn manifest(cmd: &Command, common: &Common) -> Value {
    let (name, params, seed) = describe(cmd);
    let mut args = Map::new();
    for (k, v) in params {
        args.insert(k.to_string(), v);
    }
    args.insert("workers".into(), json!(common.workers));
    json!({
        "command": name,
        "args": Value::Object(args),
        "tool": "dicon",
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
    })
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::InvalidParameter(_) => "invalid-parameter",
        Error::Precondition(_) => "precondition",
        Error::Budget(_) => "budget",
        Error::ConditionAFailed { .. } => "condition-a-refusal",
        Error::InfiniteDensity { .. } => "infinite-density-refusal",
        Error::Verification(_) => "verification",
        Error::Internal(_) => "internal",
    }
}

pub fn run(cmd: &Command, common: &Common) -> std::result::Result<Outcome, Failure> {
    let manifest = manifest(cmd, common);
    let result = match cmd {
        Command::Density { pattern, a } => density(pattern, a),
        Command::ConditionA { pattern, a } => condition(pattern, a),
        Command::Ex {
            pattern,
            n,
            a,
            mode,
            witness_dir,
            witness_cap,
        } => ex(common, pattern, *n, a, mode, witness_dir.as_deref(), *witness_cap),
        Command::CountFree { pattern, n, method } => count(common, pattern, *n, method),
        Command::Ratio { pattern, n } => ratio(common, pattern, *n),
        Command::Supersat { pattern, n, a, k_max } => supersat(common, pattern, *n, a, *k_max),
        Command::Hypergraph { pattern, big_n, export } => hypergraph(pattern, *big_n, export.as_deref()),
        Command::Codegree {
            pattern,
            big_n,
            tau,
            normalization: norm,
        } => codegree(pattern, *big_n, *tau, norm),
        Command::VerifyLemma {
            pattern,
            range,
            gamma,
            normalization: norm,
        } => lemma(pattern, range, gamma, norm),
        Command::Containers {
            pattern,
            big_n,
            eps,
            tau,
            export,
        } => containers(common, pattern, *big_n, eps, *tau, export.as_deref()),
        Command::VerifyFamily {
            pattern,
            family,
            mode,
            samples,
            seed,
        } => verify(common, pattern, family, mode, *samples, *seed),
        Command::Pipeline {
            pattern,
            a,
            big_n,
            eps,
            samples,
            seed,
            max_rows,
            ex_limit,
        } => pipeline(common, pattern, a, *big_n, eps, (*samples, *seed), *max_rows, *ex_limit),
    };
    match result {
        Ok(mut outcome) => {
            let mut doc = Map::new();
            doc.insert("manifest".into(), manifest);
            if let Value::Object(body) = outcome.doc.take() {
                doc.extend(body);
            }
            outcome.doc = Value::Object(doc);
            Ok(outcome)
        }
        Err(CmdErr::Usage(msg)) => Err(Failure::Usage(msg)),
        Err(CmdErr::Core(error)) => {
            let mut detail = json!({
                "kind": error_kind(&error),
                "message": error.to_string(),
            });
            if let Error::ConditionAFailed { witness } = &error {
                detail["witness"] = json!(witness);
            }
            let doc = json!({ "manifest": manifest, "error": detail });
            Err(Failure::Core { error, doc })
        }
    }
}

fn ok(doc: Value) -> CmdResult {
    Ok(Outcome { doc, failure: None })
}

fn condition_json(c: &ConditionA) -> Value {
    json!({
        "holds": c.holds,
        "a": c.weight.to_param_string(),
        "comparison": c.comparison_string(),
        "densest": witness_json(&c.densest),
    })
}

fn m_json(pattern: &Pattern) -> std::result::Result<Value, CmdErr> {
    let m = m_density(pattern)?;
    let over = m.over_three_or_more.as_ref().map(|(r, w)| {
        json!({ "value": ratio_string(r), "witness": witness_json(w) })
    });
    Ok(json!({
        "value": m.value.to_exact_string(),
        "infinite": m.value.is_infinite(),
        "witness": witness_json(&m.witness),
        "over_three_or_more_vertices": over,
        "policy": "a subgraph that is a bare 2-cycle (v=2) makes m infinite; the maximum over v>=3 is reported alongside",
    }))
}

fn density(path: &Path, a: &str) -> CmdResult {
    let (pattern, info) = load_pattern(path)?;
    let w = weight(a)?;
    let subs: Vec<Value> = enumerate_subpatterns(&pattern)?
        .iter()
        .map(|s| {
            json!({
                "edges": edges_json(&pattern.edges_of(s.mask)),
                "e": s.edges,
                "v": s.vertices,
            })
        })
        .collect();
    ok(json!({
        "inputs": { "pattern": info, "a": w.to_param_string() },
        "results": {
            "m": m_json(&pattern)?,
            "condition_a": condition_json(&condition_a(&pattern, &w)?),
            "c_of_h": constant_c(&pattern).to_string(),
            "subpatterns": subs,
        },
    }))
}

fn condition(path: &Path, a: &str) -> CmdResult {
    let (pattern, info) = load_pattern(path)?;
    let w = weight(a)?;
    let c = condition_a(&pattern, &w)?;
    let recheck = {
        // density of the witness against a/2, recomputed from its edges
        let e = c.densest.edges.len() as i64;
        let v = c.densest.vertices as i64;
        (w.cmp_scaled(v, 2 * e) != std::cmp::Ordering::Less) == c.holds
    };
    let failure = (!recheck).then(|| "witness density disagrees with the verdict".to_string());
    Ok(Outcome {
        doc: json!({
            "inputs": { "pattern": info, "a": w.to_param_string() },
            "results": {
                "holds": c.holds,
                "witness": c.comparison_string(),
                "densest": witness_json(&c.densest),
            },
            "checks": { "witness_recomputed": recheck },
        }),
        failure,
    })
}

fn ex(
    common: &Common,
    path: &Path,
    n: usize,
    a: &str,
    mode: &str,
    witness_dir: Option<&Path>,
    witness_cap: usize,
) -> CmdResult {
    let (pattern, info) = load_pattern(path)?;
    let w = weight(a)?;
    let mode: SearchMode = mode.parse().map_err(|e: Error| CmdErr::Usage(e.to_string()))?;
    let res = ex_a(n, &pattern, &w, mode, &search(common, witness_cap))?;
    let mut witnesses = Vec::new();
    let mut all_free = true;
    let mut all_attain = true;
    for (i, key) in res.witnesses.iter().enumerate() {
        let g = key.to_digraph();
        let free = count_copies(&g, &pattern) == 0;
        let value = weighted_size(&g, &w);
        let attains = value.profile == res.value.profile
            || w.compare(value.profile, res.value.profile) == std::cmp::Ordering::Equal;
        let canonical = canonical_form(&g) == *key;
        all_free &= free;
        all_attain &= attains && canonical;
        if let Some(dir) = witness_dir {
            std::fs::create_dir_all(dir)
                .and_then(|_| std::fs::write(dir.join(format!("witness_{i:04}.dg")), g.to_edge_list()))
                .map_err(|e| CmdErr::Usage(format!("cannot write witness: {e}")))?;
        }
        witnesses.push(json!({
            "key": key.to_hex(),
            "edge_list": g.to_edge_list(),
            "profile": profile_json(EdgeProfile::of(&g)),
        }));
    }
    let failure = (!(all_free && all_attain))
        .then(|| "an extremal witness failed its re-check".to_string());
    Ok(Outcome {
        doc: json!({
            "inputs": { "pattern": info, "n": n, "a": w.to_param_string(), "mode": res.mode.name() },
            "results": {
                "value": res.value.exact_string(),
                "value_approx": approx(res.value.to_f64()),
                "profiles": res.profiles.iter().map(|&p| profile_json(p)).collect::<Vec<_>>(),
                "witness_count": res.witnesses.len(),
                "witness_overflow": res.witness_overflow,
                "witnesses": witnesses,
            },
            "checks": {
                "witnesses_pattern_free": all_free,
                "witnesses_attain_value": all_attain,
            },
        }),
        failure,
    })
}

fn count(common: &Common, path: &Path, n: usize, method: &str) -> CmdResult {
    let (pattern, info) = load_pattern(path)?;
    let opts = search(common, 0);
    let res = match method {
        "auto" => count_free(n, &pattern, &opts)?,
        "full" => count_free_with(n, &pattern, CountMethod::Full, &opts)?,
        "orbits" => count_free_with(n, &pattern, CountMethod::Orbits, &opts)?,
        other => return Err(CmdErr::Usage(format!("unknown method `{other}`"))),
    };
    ok(json!({
        "inputs": { "pattern": info, "n": n },
        "results": { "count": res.count.to_string(), "method": res.method.name() },
    }))
}

fn ratio(common: &Common, path: &Path, n: usize) -> CmdResult {
    let (pattern, info) = load_pattern(path)?;
    let r = counting_ratio(n, &pattern, &search(common, 0))?;
    ok(json!({
        "inputs": { "pattern": info, "n": n },
        "results": {
            "count": r.free.count.to_string(),
            "count_method": r.free.method.name(),
            "log2_count": approx(r.log2_count),
            "ex2": r.ex2.to_string(),
            "ratio": r.ratio.map(approx),
        },
        "checks": { "count_at_least_2_pow_ex2": r.lower_bound_holds },
    }))
}

fn supersat(common: &Common, path: &Path, n: usize, a: &str, k_max: u64) -> CmdResult {
    let (pattern, info) = load_pattern(path)?;
    let w = weight(a)?;
    let opts = search(common, 1);
    let points = supersat_scan(n, &pattern, &w, k_max, &opts)?;
    let mode = if n <= MAX_FULL_N {
        SearchMode::Full
    } else {
        SearchMode::Canonical
    };
    let ex = ex_a(n, &pattern, &w, mode, &opts)?;
    let monotone = points
        .windows(2)
        .all(|p| w.compare(p[1].max.profile, p[0].max.profile) != std::cmp::Ordering::Less);
    let base = w.compare(points[0].max.profile, ex.value.profile) == std::cmp::Ordering::Equal;
    let failure = (!(monotone && base)).then(|| "copy-budget scan failed its checks".to_string());
    Ok(Outcome {
        doc: json!({
            "inputs": { "pattern": info, "n": n, "a": w.to_param_string(), "k_max": k_max },
            "results": {
                "points": points.iter().map(|p| json!({
                    "k": p.k,
                    "max": p.max.exact_string(),
                    "max_approx": approx(p.max.to_f64()),
                    "profiles": p.profiles.iter().map(|&q| profile_json(q)).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
                "ex_a": ex.value.exact_string(),
            },
            "checks": { "nondecreasing_in_k": monotone, "k0_equals_ex_a": base },
        }),
        failure,
    })
}

fn hypergraph(path: &Path, n: usize, export: Option<&Path>) -> CmdResult {
    let (pattern, info) = load_pattern(path)?;
    let d = PairHypergraph::build(n, &pattern)?;
    if let Some(out) = export {
        std::fs::write(out, d.export())
            .map_err(|e| CmdErr::Usage(format!("cannot write {}: {e}", out.display())))?;
    }
    ok(json!({
        "inputs": { "pattern": info, "N": n },
        "results": {
            "universe_size": d.universe().size(),
            "r": d.uniformity(),
            "hyperedges": d.edge_count(),
            "labelled_copy_count": d.labelled_copy_count().to_string(),
            "max_degree": d.max_degree(),
            "average_degree": approx(d.average_degree()),
            "codec": "idx = i*(N-1) + (j if j < i else j-1)",
        },
    }))
}

fn profile_doc(p: &CodegreeProfile) -> Value {
    json!({
        "tau": approx(p.tau),
        "normalization": p.normalization.name(),
        "universe_size": p.universe_size,
        "hyperedges": p.edge_count,
        "average_degree": approx(p.average_degree),
        "max_degree": p.max_degree,
        "codegree_sums": p.codegree_sums.iter().map(u64::to_string).collect::<Vec<_>>(),
        "delta_j": p.delta_j.iter().map(|&x| approx(x)).collect::<Vec<_>>(),
        "delta": approx(p.delta),
    })
}

fn other(n: DegreeNormalization) -> DegreeNormalization {
    match n {
        DegreeNormalization::Average => DegreeNormalization::Maximum,
        DegreeNormalization::Maximum => DegreeNormalization::Average,
    }
}

fn codegree(path: &Path, n: usize, tau: f64, norm: &str) -> CmdResult {
    let (pattern, info) = load_pattern(path)?;
    let norm = normalization(norm)?;
    let d = PairHypergraph::build(n, &pattern)?;
    let p = codegree_profile(&d, tau, norm)?;
    let alt = dicon::codegree::CodegreeProfile::from_sums(&d, p.codegree_sums.clone(), tau, other(norm))?;
    ok(json!({
        "inputs": { "pattern": info, "N": n, "tau": tau },
        "results": { "profile": profile_doc(&p), "other_normalization": profile_doc(&alt) },
    }))
}

fn lemma(path: &Path, range: &str, gamma: &str, norm: &str) -> CmdResult {
    let (pattern, info) = load_pattern(path)?;
    let ns = parse_range(range)?;
    let g = rational(gamma, "gamma")?;
    let norm = normalization(norm)?;
    let rep = verify_degree_lemma(&pattern, &ns, rational_to_f64(&g), norm)?;
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|r| {
            json!({
                "N": r.n,
                "tau": approx(r.tau),
                "delta": approx(r.profile.delta),
                "delta_j": r.profile.delta_j.iter().map(|&x| approx(x)).collect::<Vec<_>>(),
                "bound": approx(r.bound),
                "pass": r.pass,
            })
        })
        .collect();
    let failing: Vec<usize> = rep.rows.iter().filter(|r| !r.pass).map(|r| r.n).collect();
    let failure = (!failing.is_empty()).then(|| format!("degree bound violated at N = {failing:?}"));
    Ok(Outcome {
        doc: json!({
            "inputs": {
                "pattern": info,
                "N": ns,
                "gamma": ratio_string(&g),
                "normalization": norm.name(),
            },
            "results": {
                "m": rep.m.to_exact_string(),
                "c_of_h": rep.c_of_h.to_string(),
                "rows": rows,
            },
            "checks": { "all_rows_pass": rep.all_pass() },
        }),
        failure,
    })
}

fn default_tau(pattern: &Pattern, n: usize) -> std::result::Result<f64, CmdErr> {
    let m = m_density(pattern)?;
    match m.value {
        MDensity::Finite(r) => Ok((n as f64).powf(-1.0 / rational_to_f64(&r))),
        MDensity::Infinite => Err(CmdErr::Core(Error::InfiniteDensity {
            reason: "no default tau; pass --tau".into(),
        })),
    }
}

fn containers(
    common: &Common,
    path: &Path,
    n: usize,
    eps: &str,
    tau: Option<f64>,
    export: Option<&Path>,
) -> CmdResult {
    let (pattern, info) = load_pattern(path)?;
    let eps = rational(eps, "eps")?;
    let tau = match tau {
        Some(t) => t,
        None => default_tau(&pattern, n)?,
    };
    let params = ContainerParams::new(eps, tau)?;
    let d = PairHypergraph::build(n, &pattern)?;
    let engine = ContainerEngine::new(&d, params)?;
    let fam = build_containers(&d, params, common.workers.max(1))?;
    if let Some(out) = export {
        std::fs::write(out, fam.export())
            .map_err(|e| CmdErr::Usage(format!("cannot write {}: {e}", out.display())))?;
    }
    let max_fp = fam.fingerprints().iter().map(|f| f.count_ones()).max().unwrap_or(0);
    let max_spanned = fam.containers().iter().map(|&c| engine.spanned(c)).max().unwrap_or(0);
    let sparse = fam.containers().iter().all(|&c| engine.is_sparse(c));
    let failure = (!sparse).then(|| "a container spans too many hyperedges".to_string());
    Ok(Outcome {
        doc: json!({
            "inputs": { "pattern": info, "N": n, "eps": ratio_string(&eps), "tau": approx(tau) },
            "results": {
                "containers": fam.len(),
                "log2_containers": approx(fam.log2_size()),
                "hyperedges": d.edge_count(),
                "max_fingerprint_size": max_fp,
                "round_budget": engine.round_budget(),
                "round_cap": engine.round_cap(),
                "max_rounds": (max_fp as usize).div_ceil(engine.round_budget()),
                "max_spanned": max_spanned,
            },
            "checks": { "every_container_sparse": sparse },
        }),
        failure,
    })
}

fn verify(common: &Common, path: &Path, family: &Path, mode: &str, samples: u64, seed: u64) -> CmdResult {
    let (pattern, info) = load_pattern(path)?;
    let fam = ContainerFamily::import(&read(family)?).map_err(|e| CmdErr::Usage(e.to_string()))?;
    let mode = match mode {
        "exhaustive" => VerifyMode::Exhaustive,
        "sampled" => VerifyMode::Sampled { samples, seed },
        other => return Err(CmdErr::Usage(format!("unknown mode `{other}`"))),
    };
    let d = PairHypergraph::build(fam.n, &pattern)?;
    let workers = common.workers.max(1);
    let rep = verify_family(&d, &pattern, &fam, mode, workers)?;
    let universe = d.universe().size();
    // The exhaustive count must equal f*(N, H) from the counting oracle.
    let expected = match mode {
        VerifyMode::Exhaustive => Some(count_free(fam.n, &pattern, &search(common, 0))?.count),
        VerifyMode::Sampled { .. } => None,
    };
    let count_ok = expected.as_ref().is_none_or(|e| *e == rep.checked.into());
    let miss = rep.miss.as_ref().map(|m| {
        json!({
            "witness": m.witness.to_edge_list(),
            "fingerprint": hex(m.fingerprint, universe),
            "container": m.container,
        })
    });
    let dense: Vec<usize> = rep.sparsity.iter().filter(|s| !s.sparse).map(|s| s.index).collect();
    let mut problems = Vec::new();
    if let Some(m) = &rep.miss {
        problems.push(format!(
            "coverage miss: witness `{}` is not inside container {}",
            one_line(&m.witness),
            m.container.map_or("(none)".to_string(), |i| i.to_string())
        ));
    }
    if !dense.is_empty() {
        problems.push(format!("{} containers exceed the sparsity bound", dense.len()));
    }
    if !count_ok {
        problems.push("checked count differs from f*(N, H)".into());
    }
    let failure = (!problems.is_empty()).then(|| problems.join("; "));
    Ok(Outcome {
        doc: json!({
            "inputs": {
                "pattern": info,
                "N": fam.n,
                "eps": ratio_string(&fam.params.eps),
                "tau": approx(fam.params.tau),
                "containers": fam.len(),
                "mode": mode.name(),
            },
            "results": {
                "checked": rep.checked,
                "drawn": rep.drawn,
                "expected_checked": expected.map(|e| e.to_string()),
                "hyperedges": rep.hyperedges,
                "max_copies": rep.sparsity.iter().map(|s| s.copies).max(),
                "dense_containers": dense,
                "miss": miss,
            },
            "checks": {
                "coverage": rep.covered(),
                "sparsity": rep.sparse(),
                "checked_equals_count": count_ok,
            },
        }),
        failure,
    })
}

#[allow(clippy::too_many_arguments)]
fn pipeline(
    common: &Common,
    path: &Path,
    a: &str,
    n: usize,
    eps: &str,
    (samples, seed): (u64, u64),
    max_rows: usize,
    ex_limit: usize,
) -> CmdResult {
    let (pattern, info) = load_pattern(path)?;
    let w = weight(a)?;
    let eps = rational(eps, "eps")?;
    let opts = PipelineOptions {
        workers: common.workers.max(1),
        samples,
        seed,
        ex_limit,
    };
    let rep = container_pipeline(&pattern, &w, n, eps, &opts)?;
    let universe = n * (n - 1);
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .take(max_rows)
        .map(|r| {
            json!({
                "index": r.index,
                "fingerprint": hex(r.fingerprint, universe),
                "copies": r.copies,
                "e_a": r.weighted.exact_string(),
                "within_eps_hyperedges": r.within_hyperedge_budget,
                "within_eps_n_h": r.within_vertex_budget,
                "within_weight_bound": r.within_weight_bound,
                "slack": r.slack.map(approx),
            })
        })
        .collect();
    let max_copies = rep.rows.iter().map(|r| r.copies).max();
    let max_ea = rep
        .rows
        .iter()
        .map(|r| r.weighted.clone())
        .reduce(|x, y| if w.compare(y.profile, x.profile).is_gt() { y } else { x });
    let min_slack = rep.rows.iter().filter_map(|r| r.slack).reduce(f64::min);
    let weight_ok = rep.weight_bound_holds();
    let over_weight = rep
        .rows
        .iter()
        .filter(|r| r.within_weight_bound == Some(false))
        .count();
    let ex_doc = match &rep.extremal {
        Some(ex) => json!({
            "value": ex.value.exact_string(),
            "mode": ex.mode.name(),
            "bound": format!("{} + {}", ex.value.exact_string(), eps_n2_string(eps, n)),
        }),
        None => json!("bound unavailable"),
    };
    let mut problems = Vec::new();
    if let Some(m) = &rep.verification.miss {
        problems.push(format!("coverage miss: witness `{}`", one_line(&m.witness)));
    }
    if !rep.sparsity_holds() {
        problems.push("a container exceeds eps*e(D) copies".into());
    }
    let failure = (!problems.is_empty()).then(|| problems.join("; "));
    Ok(Outcome {
        doc: json!({
            "inputs": {
                "pattern": info,
                "a": w.to_param_string(),
                "N": n,
                "eps": ratio_string(&eps),
            },
            "results": {
                "condition_a": condition_json(&rep.condition),
                "m": ratio_string(&rep.m),
                "tau": approx(rep.tau),
                "hyperedges": rep.hyperedges,
                "labelled_copies": rep.labelled_copies.to_string(),
                "n_pow_h": rep.vertex_normaliser.to_string(),
                "containers": rep.family.len(),
                "max_rounds": rep.max_rounds,
                "coverage": {
                    "mode": rep.verification.mode.name(),
                    "checked": rep.verification.checked,
                    "drawn": rep.verification.drawn,
                    "miss": rep.verification.miss.as_ref().map(|m| m.witness.to_edge_list()),
                },
                "copies": {
                    "max": max_copies,
                    "bound_eps_hyperedges": ratio_string(&(eps * Rational::from_integer(rep.hyperedges as i64))),
                    "bound_eps_n_h": format!("{} * {}", ratio_string(&eps), rep.vertex_normaliser),
                },
                "weighted_size": {
                    "max": max_ea.as_ref().map(|v| v.exact_string()),
                    "ex_a": ex_doc,
                    "containers_over_bound": over_weight,
                    "min_slack": min_slack.map(approx),
                },
                "family_size": {
                    "log2_containers": approx(rep.log2_family_size),
                    "reference_n_pow_2_minus_1_over_m_ln_n": approx(rep.reference),
                    "fitted_constant": approx(rep.fitted_constant),
                    "note": "reported, not asserted",
                },
                "rows_shown": rows.len(),
                "rows": rows,
            },
            "checks": {
                "a_coverage": rep.coverage_holds(),
                "b_copies_eps_hyperedges": rep.sparsity_holds(),
                "b_copies_eps_n_h": rep.vertex_budget_holds(),
                "b_weighted_size": weight_ok,
            },
        }),
        failure,
    })
}
