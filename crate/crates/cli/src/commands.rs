use serde_json::{json, Value};

use cmloops::degseq::{bipartite_moments, compute_moments, directed_moments, DegreeSequence, Flavor, MomentSummary};
use cmloops::dist::{cramer_wold_check, ks_normal, tv_joint, tv_poisson, EmpiricalDist};
use cmloops::exact::Exact;
use cmloops::exact_law::ExactLaw;
use cmloops::limits::{flavor_lambdas, lambda_truncated, limit_report, standardized_score, LambdaPair};
use cmloops::montecarlo::{joint_of, simple_fraction, simulate, Execution, ReplicateRecord};
use cmloops::rng::RngStream;
use cmloops::Error;

use crate::config::ExperimentConfig;
use crate::output::{Report, Table};
use crate::CliError;

/// Salt for the thinning marks of the Cramér–Wold check.
const THINNING_SALT: u64 = 0x7468_696e;

/// Below this `nu_n` the self-loop CLT is a poor description.
const SMALL_NU: f64 = 10.0;

fn exact_cells(x: Option<&Exact>) -> [String; 2] {
    match x {
        Some(x) => [x.value().to_string(), x.to_string()],
        None => [String::new(), String::new()],
    }
}

fn opt_cell<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn moment_rows(table: &mut Table, side: &str, m: &MomentSummary) {
    let mut row = |q: &str, cells: [String; 2]| table.push([side.to_string(), q.to_string(), cells[0].clone(), cells[1].clone()]);
    row("n", [m.n.to_string(), m.n.to_string()]);
    row("ell", [m.ell.to_string(), m.ell.to_string()]);
    for r in 1..=4 {
        row(&format!("mu{r}"), exact_cells(Some(m.mu(r))));
    }
    row("nu", exact_cells(Some(&m.nu)));
    row("chi", exact_cells(m.chi.as_ref()));
    row("d_max", [m.d_max.to_string(), m.d_max.to_string()]);
}

fn sides(d: &DegreeSequence) -> Vec<(&'static str, MomentSummary)> {
    match d {
        DegreeSequence::Undirected(u) => vec![("all", compute_moments(u))],
        DegreeSequence::Directed(dd) => {
            let (a, b) = directed_moments(dd);
            vec![("in", a), ("out", b)]
        }
        DegreeSequence::Bipartite(b) => {
            let (l, r) = bipartite_moments(b);
            vec![("left", l), ("right", r)]
        }
    }
}

fn undefined_lambda_m(d: &DegreeSequence) -> String {
    format!(
        "lambda_M for the {} model with total degree {}",
        d.flavor(),
        d.total()
    )
}

fn require_lambda_m(d: &DegreeSequence, l: &LambdaPair) -> Result<f64, CliError> {
    l.lambda_m
        .as_ref()
        .map(Exact::value)
        .ok_or_else(|| Error::Undefined(undefined_lambda_m(d)).into())
}

pub fn moments(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let d = cfg.load()?;
    let report = limit_report(&d);
    let mut warnings = Vec::new();
    if report.lambda_m.is_none() {
        warnings.push(format!("undefined: {}", undefined_lambda_m(&d)));
    }
    let sides = sides(&d);
    let mut mt = Table::new("moments", &["side", "quantity", "decimal", "exact"]);
    for (name, m) in &sides {
        moment_rows(&mut mt, name, m);
    }
    let mut lt = Table::new("limits", &["quantity", "decimal", "exact"]);
    let mut row = |q: &str, cells: [String; 2]| lt.push([q.to_string(), cells[0].clone(), cells[1].clone()]);
    row("lambda_s", exact_cells(report.lambda_s.as_ref()));
    row("lambda_m", exact_cells(report.lambda_m.as_ref()));
    row("bound_s", exact_cells(report.bounds.bound_s.as_ref()));
    row("bound_m", exact_cells(report.bounds.bound_m.as_ref()));
    row("bound_sum", exact_cells(report.bounds.bound_sum.as_ref()));
    row("p_simple_est", [opt_cell(report.p_simple_est), String::new()]);
    row("log_count_est", [opt_cell(report.log_count_est), String::new()]);
    row("lambda_m_approx", exact_cells(report.lambda_m_approx.as_ref()));
    let scaled = cfg.stein_c.map(|c| report.bounds.scaled(c));
    if let Some(scaled) = scaled {
        for (name, v) in ["scaled_bound_s", "scaled_bound_m", "scaled_bound_sum"].iter().zip(scaled) {
            row(name, [opt_cell(v), String::new()]);
        }
    }
    let moments: serde_json::Map<String, Value> = sides
        .iter()
        .map(|(name, m)| (name.to_string(), serde_json::to_value(m).expect("serializable")))
        .collect();
    let data = json!({
        "moments": moments,
        "limits": report,
        "scaled_bounds": scaled.map(|[s, m, sum]| json!({ "bound_s": s, "bound_m": m, "bound_sum": sum })),
    });
    Ok(Report {
        data,
        tables: vec![mt, lt],
        warnings,
    })
}

fn run_replicates(cfg: &ExperimentConfig, d: &DegreeSequence) -> Result<Vec<ReplicateRecord>, CliError> {
    let m_cut = if d.flavor() == Flavor::Undirected { cfg.m_cut } else { None };
    Ok(simulate(d, cfg.replicates, cfg.seed, m_cut, Execution::Parallel)?)
}

fn replicate_table(recs: &[ReplicateRecord]) -> Table {
    let header: Vec<&str> = ReplicateRecord::CSV_HEADER.split(',').collect();
    let mut t = Table::new("replicates", &header);
    for r in recs {
        t.rows.push(r.csv_row().split(',').map(str::to_string).collect());
    }
    t
}

pub fn montecarlo(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let d = cfg.load()?;
    let l = flavor_lambdas(&d);
    let lm = require_lambda_m(&d, &l)?;
    let ls = l.lambda_s.value();
    let recs = run_replicates(cfg, &d)?;
    let joint = joint_of(&recs);
    let has_loops = d.flavor() != Flavor::Bipartite;
    let tv_s = if has_loops { Some(tv_poisson(&joint.first_marginal(), ls)?) } else { None };
    let tv_m = tv_poisson(&joint.second_marginal(), lm)?;
    let tv_j = if has_loops { Some(tv_joint(&joint, ls, lm)?) } else { None };
    let tv_sum = tv_poisson(&joint.sum_marginal(), ls + lm)?;
    let p_simple = simple_fraction(&recs);
    let p_simple_est = (-(ls + lm)).exp();
    let truncated = match (d.as_undirected(), cfg.m_cut) {
        (Ok(u), Some(cut)) => {
            let lt = lambda_truncated(u, cut).map(|x| x.value());
            let e: EmpiricalDist = recs.iter().filter_map(|r| r.m_trunc).collect();
            let tv = match lt {
                Some(lt) => Some(tv_poisson(&e, lt)?),
                None => None,
            };
            Some(json!({ "m_cut": cut, "lambda_m_trunc": lt, "mean_m_trunc": e.mean(), "tv_m_trunc": tv }))
        }
        _ => None,
    };
    let mean_s = joint.first_marginal().mean();
    let mean_m = joint.second_marginal().mean();
    let summary = json!({
        "replicates": recs.len(),
        "lambda_s": ls,
        "lambda_m": lm,
        "mean_s": mean_s,
        "mean_m": mean_m,
        "p_simple": p_simple,
        "p_simple_est": p_simple_est,
        "tv_s": tv_s,
        "tv_m": tv_m,
        "tv_joint": tv_j,
        "tv_sum": tv_sum,
        "truncated": truncated,
    });
    let mut st = Table::new("summary", &["quantity", "value"]);
    st.kv("replicates", recs.len());
    st.kv("lambda_s", ls);
    st.kv("lambda_m", lm);
    st.kv("mean_s", mean_s);
    st.kv("mean_m", mean_m);
    st.kv("p_simple", p_simple);
    st.kv("p_simple_est", p_simple_est);
    st.kv("tv_s", opt_cell(tv_s));
    st.kv("tv_m", tv_m);
    st.kv("tv_joint", opt_cell(tv_j));
    st.kv("tv_sum", tv_sum);
    if let Some(t) = &truncated {
        for key in ["m_cut", "lambda_m_trunc", "mean_m_trunc", "tv_m_trunc"] {
            st.kv(key, value_cell(&t[key]));
        }
    }
    Ok(Report {
        data: json!({ "summary": summary, "replicates": recs }),
        tables: vec![st, replicate_table(&recs)],
        warnings: Vec::new(),
    })
}

fn value_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn enumerate(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let d = cfg.load()?;
    let law = ExactLaw::compute(&d, cfg.enumeration_cap())?;
    let l = flavor_lambdas(&d);
    let mean_s = Exact(law.mean_s());
    let mean_m = Exact(law.mean_m());
    let check_s = mean_s == l.lambda_s;
    let check_m = l.lambda_m.as_ref().map(|lm| *lm == mean_m);
    let mut warnings = Vec::new();
    if l.lambda_m.is_none() {
        warnings.push(format!("undefined: {}", undefined_lambda_m(&d)));
    }
    if !check_s || check_m == Some(false) {
        warnings.push("enumerated means differ from the closed-form lambdas".to_string());
    }
    let joint: Vec<Value> = law
        .joint()
        .map(|((s, m), p)| json!({ "s": s, "m": m, "probability": Exact(p) }))
        .collect();
    let removed: Vec<Value> = law
        .removed_law()
        .map(|(r, p)| json!({ "removed": r, "probability": Exact(p) }))
        .collect();
    let graph_count = law.graph_count().to_string();
    let data = json!({
        "configurations": law.configurations(),
        "simple_configurations": law.simple_configurations(),
        "p_simple": Exact(law.p_simple()),
        "graph_count": graph_count,
        "mean_s": mean_s,
        "mean_m": mean_m,
        "lambda_s": l.lambda_s,
        "lambda_m": l.lambda_m,
        "first_moment_s": check_s,
        "first_moment_m": check_m,
        "joint": joint,
        "removed": removed,
    });
    let mut st = Table::new("summary", &["quantity", "decimal", "exact"]);
    let mut row = |q: &str, a: String, b: String| st.push([q.to_string(), a, b]);
    row("configurations", law.configurations().to_string(), law.configurations().to_string());
    row(
        "simple_configurations",
        law.simple_configurations().to_string(),
        law.simple_configurations().to_string(),
    );
    let [a, b] = exact_cells(Some(&Exact(law.p_simple())));
    row("p_simple", a, b);
    row("graph_count", graph_count.clone(), graph_count);
    let [a, b] = exact_cells(Some(&mean_s));
    row("mean_s", a, b);
    let [a, b] = exact_cells(Some(&mean_m));
    row("mean_m", a, b);
    let [a, b] = exact_cells(Some(&l.lambda_s));
    row("lambda_s", a, b);
    let [a, b] = exact_cells(l.lambda_m.as_ref());
    row("lambda_m", a, b);
    row("first_moment_s", check_s.to_string(), String::new());
    row("first_moment_m", opt_cell(check_m), String::new());
    let mut jt = Table::new("joint", &["s", "m", "decimal", "exact"]);
    for ((s, m), p) in law.joint() {
        let [a, b] = exact_cells(Some(&Exact(p)));
        jt.push([s.to_string(), m.to_string(), a, b]);
    }
    let mut tables = vec![st, jt];
    if d.flavor() == Flavor::Undirected {
        let mut rt = Table::new("removed", &["removed", "decimal", "exact"]);
        for (r, p) in law.removed_law() {
            let [a, b] = exact_cells(Some(&Exact(p)));
            rt.push([r.to_string(), a, b]);
        }
        tables.push(rt);
    }
    Ok(Report { data, tables, warnings })
}

pub fn clt(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let d = cfg.load()?;
    let u = d
        .as_undirected()
        .map_err(|_| CliError::invalid("clt supports the undirected model only"))?;
    let mom = compute_moments(u);
    let nu = mom.nu.value();
    let mut warnings = Vec::new();
    if nu < SMALL_NU {
        warnings.push(format!("nu = {nu} is small; the normal approximation of S is poor"));
    }
    let ell = u.total();
    let d_max = u64::from(u.max_degree());
    let emit_m = 4 * d_max * d_max <= ell;
    if !emit_m {
        warnings.push(format!(
            "d_max^2 = {} exceeds ell/4 = {}; multi-edge scores are not emitted",
            d_max * d_max,
            ell as f64 / 4.0
        ));
    }
    let lambda_m = match cfg.m_cut {
        Some(cut) => lambda_truncated(u, cut),
        None => flavor_lambdas(&d).lambda_m,
    }
    .map(|x| x.value());
    let recs = run_replicates(cfg, &d)?;
    let s_scores = recs
        .iter()
        .map(|r| standardized_score(r.s, nu / 2.0, nu / 2.0))
        .collect::<Result<Vec<f64>, Error>>()?;
    let m_scores = match (emit_m, lambda_m) {
        (true, Some(lm)) if lm > 0.0 => Some(
            recs.iter()
                .map(|r| standardized_score(r.m_trunc.unwrap_or(r.m), lm, lm))
                .collect::<Result<Vec<f64>, Error>>()?,
        ),
        (true, _) => {
            warnings.push("lambda_M is zero or undefined; multi-edge scores are not emitted".to_string());
            None
        }
        _ => None,
    };
    let ks_s = if s_scores.len() >= 2 { Some(ks_normal(&s_scores)?) } else { None };
    let ks_m = match &m_scores {
        Some(m) if m.len() >= 2 => Some(ks_normal(m)?),
        _ => None,
    };
    let mut st = Table::new("summary", &["quantity", "value"]);
    st.kv("nu", nu);
    st.kv("ell", ell);
    st.kv("d_max", d_max);
    st.kv("lambda_m", opt_cell(lambda_m));
    st.kv("m_scores_emitted", m_scores.is_some());
    st.kv("ks_s", opt_cell(ks_s));
    st.kv("ks_m", opt_cell(ks_m));
    let mut sc = Table::new("scores", &["replicate", "s_score", "m_score"]);
    let scores: Vec<Value> = s_scores
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let m = m_scores.as_ref().map(|v| v[i]);
            sc.push([i.to_string(), s.to_string(), opt_cell(m)]);
            json!({ "replicate": i, "s_score": s, "m_score": m })
        })
        .collect();
    let data = json!({
        "nu": nu,
        "ell": ell,
        "d_max": d_max,
        "lambda_m": lambda_m,
        "m_scores_emitted": m_scores.is_some(),
        "ks_s": ks_s,
        "ks_m": ks_m,
        "scores": scores,
    });
    Ok(Report {
        data,
        tables: vec![st, sc],
        warnings,
    })
}

pub fn cramer_wold(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let d = cfg.load()?;
    let l = flavor_lambdas(&d);
    let lm = require_lambda_m(&d, &l)?;
    let ls = l.lambda_s.value();
    let recs = run_replicates(cfg, &d)?;
    let samples: Vec<(u64, u64)> = recs.iter().map(|r| (r.s, r.m)).collect();
    let stream = RngStream::new(cfg.seed, 0).salted(THINNING_SALT);
    let tv = cramer_wold_check(&samples, cfg.p, cfg.q, ls, lm, stream)?;
    let lambda = cfg.p * ls + cfg.q * lm;
    let mut st = Table::new("summary", &["quantity", "value"]);
    st.kv("p", cfg.p);
    st.kv("q", cfg.q);
    st.kv("lambda_s", ls);
    st.kv("lambda_m", lm);
    st.kv("lambda", lambda);
    st.kv("tv", tv);
    Ok(Report {
        data: json!({ "p": cfg.p, "q": cfg.q, "lambda_s": ls, "lambda_m": lm, "lambda": lambda, "tv": tv }),
        tables: vec![st],
        warnings: Vec::new(),
    })
}

pub fn erased(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let d = cfg.load()?;
    let u = d
        .as_undirected()
        .map_err(|_| CliError::invalid("erased supports the undirected model only"))?;
    let edges = u.total() / 2;
    let recs = run_replicates(cfg, &d)?;
    let dist: EmpiricalDist = recs.iter().filter_map(|r| r.removed).collect();
    let mean_removed = dist.mean();
    let fraction = mean_removed / edges as f64;
    let mut st = Table::new("summary", &["quantity", "value"]);
    st.kv("edges", edges);
    st.kv("mean_removed", mean_removed);
    st.kv("removed_fraction", fraction);
    let mut dt = Table::new("distribution", &["removed", "count"]);
    let rows: Vec<Value> = dist
        .iter()
        .map(|(r, c)| {
            dt.push([r, c]);
            json!({ "removed": r, "count": c })
        })
        .collect();
    Ok(Report {
        data: json!({
            "edges": edges,
            "mean_removed": mean_removed,
            "removed_fraction": fraction,
            "distribution": rows,
        }),
        tables: vec![st, dt],
        warnings: Vec::new(),
    })
}

