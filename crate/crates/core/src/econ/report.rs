use std::fmt::Write as _;

use super::estimate::FitResult;
use super::inference::WaldTest;

fn num(v: Option<f64>) -> String {
    match v {
        Some(v) if v.is_finite() => format!("{v:.10e}"),
        Some(v) => v.to_string(),
        None => "NA".into(),
    }
}

/// Structured-text report: `key = value` header lines, then a
/// `term,estimate,se,t,p` table. Missing values print as `NA`.
pub fn render_report(name: &str, fit: &FitResult, peak: Option<f64>, tests: &[(String, WaldTest)]) -> String {
    let d = &fit.diagnostics;
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("spec", name.to_string());
    kv("estimator", fit.estimator.label().to_string());
    kv("outcome", fit.outcome.clone());
    kv("n_obs", fit.n_obs.to_string());
    kv("n_clusters", fit.n_clusters.to_string());
    kv("cluster", fit.cluster.label().to_string());
    kv("df_resid", fit.df_resid.to_string());
    kv("inference_df", fit.inference_df.to_string());
    let fe = d.absorbed.iter().map(|(g, n)| format!("{}:{n}", g.label())).collect::<Vec<_>>().join(";");
    kv("fixed_effects", if fe.is_empty() { "none".into() } else { fe });
    kv("absorbed_dof", d.absorbed_dof.to_string());
    kv("fe_iterations", d.fe_iterations.to_string());
    kv("dummy_fallback", d.dummy_fallback.to_string());
    kv("rows_total", d.rows_total.to_string());
    kv("dropped_missing", d.dropped_missing.to_string());
    kv("dropped_singletons", d.dropped_singletons.to_string());
    kv("singleton_clusters", d.singleton_clusters.to_string());
    kv("omitted_terms", d.omitted_terms.join(";"));
    kv("first_stage_F", num(fit.first_stage_f()));
    for fs in &fit.first_stage {
        kv(&format!("first_stage_F[{}]", fs.endogenous), num(Some(fs.f_stat)));
    }
    kv("peak", num(peak));
    for (label, w) in tests {
        kv(&format!("wald[{label}]"), format!("{} df={} p={}", num(Some(w.statistic)), w.df, num(Some(w.p_value))));
    }
    for w in &fit.warnings {
        kv("warning", w.to_string());
    }
    s.push_str("\nterm,estimate,se,t,p\n");
    for t in &fit.terms {
        let _ = writeln!(
            s,
            "{t},{},{},{},{}",
            num(fit.coef(t)),
            num(fit.se(t)),
            num(fit.t_stat(t)),
            num(fit.p_value(t))
        );
    }
    s
}

/// Reads back the `key = value` header of a report.
pub fn report_value<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report.lines().take_while(|l| !l.is_empty()).find_map(|l| {
        let (k, v) = l.split_once(" = ")?;
        (k == key).then_some(v)
    })
}
