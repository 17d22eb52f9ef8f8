use std::error::Error;
use std::fmt::Write as _;

use ambiguity_lab::econ::{
    build_lags, fit, lag_column_name, peak_location, render_report, wald_joint_test, AbsorbOptions, DesignSpec, Term,
};
use ambiguity_lab::game::{
    contest_win_probabilities, format_rational, parse_rational, solve, AmbiguityGame, DeviationSet, Profile, Rational,
    VoterUtility,
};
use ambiguity_lab::ingest::{
    aggregate_party_year, read_expert_table, AggregationPolicy, DimensionRegistry, ExpertTable, SchemaMap,
};
use ambiguity_lab::lab::{monte_carlo_check, sweep_grid, write_phase_table, LRule, SweepGrid};
use ambiguity_lab::panel::{Grouping, PartyYearPanel};
use ambiguity_lab::recipes::{add_centrism_columns, baseline_specs, binned_table, mechanism_specs, SpecRun};
use ambiguity_lab::synth::{
    apply_interaction_truth, generate_context, generate_expert_table, generate_panel, ContextParams, ContextTable,
    DgpParams, OutcomeModel, PanelSpec,
};
use num_traits::{One, Signed, ToPrimitive};

use crate::run::RunDir;
use crate::{
    BaselineArgs, Cli, Cmd, ContextArgs, ExpertInput, FitArgs, GenArgs, IngestCmdArgs, McArgs, MechanismArgs,
    ModelArg, SolveArgs, SweepArgs, SynthArgs,
};

type Res<T> = Result<T, Box<dyn Error>>;

/// A command after validation: everything needed to run without further
/// argument errors.
type Job = Box<dyn FnOnce(&mut RunDir) -> Res<()>>;

/// Validates arguments, then runs the command inside a fresh run directory.
/// Validation errors return `Err` before anything is written; failures
/// during the run are recorded in the error index.
pub fn dispatch(cli: Cli, name: &str, settings: &str, argv: &[String]) -> Res<i32> {
    let job: Job = match cli.command {
        Cmd::Solve(a) => solve_job(a)?,
        Cmd::Sweep(a) => sweep_job(a)?,
        Cmd::McCheck(a) => mc_job(a)?,
        Cmd::Gen(a) => gen_job(a)?,
        Cmd::Ingest(a) => ingest_job(a)?,
        Cmd::Fit(a) => fit_job(a)?,
        Cmd::ReplicateBaseline(a) => baseline_job(a)?,
        Cmd::ReplicateMechanism(a) => mechanism_job(a)?,
    };
    let mut run = RunDir::create(&cli.out, name)?;
    run.write_manifest(name, settings, argv)?;
    if let Err(e) = job(&mut run) {
        run.error(name, e);
    }
    Ok(run.finish()?)
}

fn list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

fn rationals(s: &str) -> Res<Vec<Rational>> {
    Ok(list(s).iter().map(|v| parse_rational(v)).collect::<Result<_, _>>()?)
}

const MAX_GRID: usize = 1_000_000;

/// `start:stop:step`, inclusive of `stop` when it lies on the grid.
fn rational_range(s: &str) -> Res<Vec<Rational>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(format!("range `{s}` is not start:stop:step").into());
    };
    let (a, b, step) = (parse_rational(a)?, parse_rational(b)?, parse_rational(step)?);
    if !step.is_positive() {
        return Err("range step must be positive".into());
    }
    if b < a {
        return Err("range stop is below start".into());
    }
    let n = ((&b - &a) / &step).floor().to_usize().unwrap_or(usize::MAX);
    if n >= MAX_GRID {
        return Err(format!("range has more than {MAX_GRID} values").into());
    }
    Ok((0..=n).map(|i| &a + &step * Rational::from_integer(i.into())).collect())
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn solve_job(a: SolveArgs) -> Res<Job> {
    let k = parse_rational(&a.k)?;
    let l = parse_rational(&a.l)?;
    let tol = parse_rational(&a.boundary_tol)?;
    let risk = parse_rational(&a.risk_exponent)?;
    let canonical = AmbiguityGame::canonical(&k, &l)?;
    let two = Rational::from_integer(2.into());
    let game = if risk == two && a.extremist_set.is_none() {
        canonical
    } else {
        let base = DeviationSet::symmetric(&[Rational::one(), k.clone()])?;
        let wide = match &a.extremist_set {
            Some(m) => DeviationSet::symmetric(&rationals(m)?)?,
            None => canonical.ambiguous_set(ambiguity_lab::game::Party::Extremist).clone(),
        };
        AmbiguityGame::new(base.clone(), base.clone(), base, wide, VoterUtility::new(risk)?)?
    };
    // Fail before the run directory exists on bad tolerances.
    solve(&game, &tol)?;
    Ok(Box::new(move |run| {
        let report = solve(&game, &tol)?;
        let mut s = String::new();
        writeln!(s, "k = {}", format_rational(&k))?;
        writeln!(s, "l = {}", format_rational(&l))?;
        writeln!(s, "game = {}", if game.is_extension() { "exploratory" } else { "canonical" })?;
        writeln!(s, "risk_exponent = {}", format_rational(game.utility().risk_exponent()))?;
        let set = |d: &DeviationSet| d.values().iter().map(format_rational).collect::<Vec<_>>().join(" ");
        writeln!(s, "extremist_ambiguous_set = {}", set(game.ambiguous_set(ambiguity_lab::game::Party::Extremist)))?;
        writeln!(s, "asymmetric_ambiguity = {}", report.asymmetric_ambiguity)?;
        let eq: Vec<String> = report.pure_equilibria.iter().map(Profile::to_string).collect();
        writeln!(s, "equilibria = {}", if eq.is_empty() { "none".into() } else { eq.join("|") })?;
        if let (Some(regime), Some(t)) = (report.regime, &report.thresholds) {
            writeln!(s, "regime = {regime}")?;
            let predicted = regime.predicted_equilibrium().map_or("none".into(), |p| p.to_string());
            writeln!(s, "predicted_equilibrium = {predicted}")?;
            writeln!(s, "centrist_margin = {}", format_rational(&t.centrist_margin))?;
            writeln!(s, "joint_margin = {}", format_rational(&t.joint_margin))?;
        }
        let mut table = String::from("profile,p_centrist,p_extremist,p_centrist_decimal\n");
        for p in Profile::ALL {
            let w = report.payoffs.get(p);
            writeln!(
                table,
                "{p},{},{},{}",
                format_rational(&w.centrist),
                format_rational(&w.extremist),
                to_f64(&w.centrist)
            )?;
        }
        print!("{s}");
        run.write("report.txt", s)?;
        run.write("payoffs.csv", table)?;
        Ok(())
    }))
}

fn sweep_job(a: SweepArgs) -> Res<Job> {
    let k_values = match (&a.k_values, &a.k_range) {
        (Some(v), None) => rationals(v)?,
        (None, Some(r)) => rational_range(r)?,
        _ => return Err("give exactly one of --k-values or --k-range".into()),
    };
    let l_rule = match (&a.l_offset, &a.l_values) {
        (Some(d), None) => LRule::Offset(parse_rational(d)?),
        (None, Some(v)) => LRule::Explicit(rationals(v)?),
        _ => return Err("give exactly one of --l-offset or --l-values".into()),
    };
    let grid = SweepGrid { k_values, l_rule };
    grid.pairs()?;
    let tol = parse_rational(&a.boundary_tol)?;
    if tol.is_negative() {
        return Err("boundary tolerance must be non-negative".into());
    }
    Ok(Box::new(move |run| {
        let records = sweep_grid(&grid, &tol)?;
        let mut table = Vec::new();
        write_phase_table(&records, &mut table)?;
        run.write("phase_table.csv", table)?;
        let mut counts = std::collections::BTreeMap::new();
        for r in &records {
            *counts.entry(r.regime.label()).or_insert(0usize) += 1;
            if !r.is_consistent() {
                run.error(
                    format!("cell k={} l={}", format_rational(&r.k), format_rational(&r.l)),
                    format!("regime {} disagrees with enumerated equilibria", r.regime),
                );
            }
        }
        let mut s = format!("cells = {}\n", records.len());
        for (regime, n) in counts {
            writeln!(s, "{regime} = {n}")?;
        }
        print!("{s}");
        run.write("summary.txt", s)?;
        Ok(())
    }))
}

fn mc_job(a: McArgs) -> Res<Job> {
    let game = AmbiguityGame::canonical(&parse_rational(&a.k)?, &parse_rational(&a.l)?)?;
    let profiles: Vec<Profile> = list(&a.profiles).iter().map(|p| p.parse()).collect::<Result<_, _>>()?;
    if profiles.is_empty() {
        return Err("no profiles to check".into());
    }
    if a.samples == 0 {
        return Err("--samples must be positive".into());
    }
    Ok(Box::new(move |run| {
        let mut table = String::from("profile,exact,exact_decimal,frequency,std_error,z,within_3se\n");
        for p in profiles {
            let exact = contest_win_probabilities(&game, p).centrist;
            let est = monte_carlo_check(&game, p, a.samples, a.seed)?;
            let diff = est.frequency - to_f64(&exact);
            let z = if est.std_error > 0.0 {
                diff / est.std_error
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY * diff.signum()
            };
            writeln!(
                table,
                "{p},{},{},{},{},{z},{}",
                format_rational(&exact),
                to_f64(&exact),
                est.frequency,
                est.std_error,
                z.abs() <= 3.0
            )?;
        }
        print!("{table}");
        run.write("mc_check.csv", table)?;
        Ok(())
    }))
}

fn panel_spec(s: &SynthArgs, dimensions: &str) -> Res<PanelSpec> {
    let waves = list(&s.waves).iter().map(|w| w.parse::<i32>()).collect::<Result<Vec<_>, _>>()?;
    let spec = PanelSpec {
        n_countries: s.countries,
        parties_per_country: s.parties,
        waves,
        dimensions: list(dimensions),
    };
    spec.validate()?;
    Ok(spec)
}

fn dgp(s: &SynthArgs, default: OutcomeModel) -> Res<DgpParams> {
    let outcome = match s.model {
        Some(ModelArg::Quadratic) => OutcomeModel::Quadratic,
        Some(ModelArg::Centrism) => OutcomeModel::Centrism,
        None => default,
    };
    let p = DgpParams {
        outcome,
        beta0: s.beta0,
        beta1: s.beta1,
        beta2: s.beta2,
        alpha0: s.alpha0,
        alpha1: s.alpha1,
        sd_country_year: s.sd_country_year,
        sd_party: s.sd_party,
        sd_noise: s.sd_noise,
        position_mean: s.position_mean,
        position_sd: s.position_sd,
        persistence: s.persistence,
        feedback: s.feedback,
    };
    p.validate()?;
    Ok(p)
}

fn context_params(c: &ContextArgs) -> Res<ContextParams> {
    let p = ContextParams {
        growth_mean: c.growth_mean,
        growth_sd: c.growth_sd,
        growth_sd_dispersion: c.growth_sd_dispersion,
        growth_persistence: c.growth_persistence,
        variance_window: c.variance_window,
        government_share: c.government_share,
    };
    p.validate()?;
    Ok(p)
}

/// `dim=value,...` against the panel's dimensions.
fn thetas(s: &str, dimensions: &[String]) -> Res<Vec<(String, f64)>> {
    list(s)
        .iter()
        .map(|e| {
            let (d, v) = e.split_once('=').ok_or_else(|| format!("theta entry `{e}` is not dimension=value"))?;
            let d = d.trim().to_string();
            if !dimensions.contains(&d) {
                return Err(format!("theta names unknown dimension `{d}`").into());
            }
            let v: f64 = v.trim().parse().map_err(|_| format!("theta for `{d}` is not a number"))?;
            if !v.is_finite() {
                return Err(format!("theta for `{d}` must be finite").into());
            }
            Ok((d, v))
        })
        .collect()
}

fn check_expert_sd(sd: f64) -> Res<()> {
    if !sd.is_finite() || sd < 0.0 {
        return Err(format!("--expert-sd {sd} must be finite and nonnegative").into());
    }
    Ok(())
}

fn gen_job(a: GenArgs) -> Res<Job> {
    let spec = panel_spec(&a.synth, &a.dimensions)?;
    let params = dgp(&a.synth, OutcomeModel::Quadratic)?;
    let ctx = context_params(&a.ctx)?;
    let theta = a.theta.as_deref().map(|t| thetas(t, &spec.dimensions)).transpose()?.unwrap_or_default();
    check_expert_sd(a.expert_sd)?;
    let with_context = a.context || !theta.is_empty();
    let seed = a.synth.seed;
    Ok(Box::new(move |run| {
        let g = generate_panel(&spec, &params, seed)?;
        let mut panel = g.panel;
        let mut s = format!("rows = {}\nclamped_share = {}\n", panel.len(), g.clamped as f64 / g.scaled_values as f64);
        if with_context {
            let table = generate_context(&panel, &ctx, seed)?;
            table.merge_into(&mut panel)?;
            for (d, t) in &theta {
                let clamped = apply_interaction_truth(&mut panel, d, *t)?;
                writeln!(s, "theta_{d} = {t}\ntheta_clamped_{d} = {clamped}")?;
            }
            table.write_paths(run.file("context_country_years.csv"), run.file("context_government.csv"))?;
        }
        panel.write_csv_path(run.file("panel.csv"))?;
        if a.experts > 0 {
            let experts = generate_expert_table(&panel, a.experts, a.expert_sd, seed)?;
            writeln!(s, "expert_rows = {}", experts.len())?;
            experts.write_csv_path(run.file("experts.csv"))?;
        }
        print!("{s}");
        run.write("summary.txt", s)?;
        Ok(())
    }))
}

fn registry(input: &ExpertInput) -> DimensionRegistry {
    let mut r = DimensionRegistry::default();
    for d in input.register_dimensions.as_deref().map(list).unwrap_or_default() {
        r.register(d);
    }
    r
}

fn policy(input: &ExpertInput, dimensions: Option<&str>) -> Res<AggregationPolicy> {
    let year_filter = input
        .years
        .as_deref()
        .map(|y| list(y).iter().map(|v| v.parse::<i32>()).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    Ok(AggregationPolicy { min_experts: input.min_experts, dimensions: dimensions.map(list), year_filter })
}

fn schema(input: &ExpertInput) -> Res<SchemaMap> {
    Ok(match &input.schema {
        Some(s) => s.parse()?,
        None => SchemaMap::canonical(),
    })
}

/// Aggregates an expert table and records the group counts.
fn aggregate(table: &ExpertTable, policy: &AggregationPolicy, run: &RunDir) -> Res<PartyYearPanel> {
    let agg = aggregate_party_year(table, policy)?;
    let s = format!(
        "expert_rows = {}\ngroups_total = {}\ngroups_dropped = {}\ngroups_retained = {}\nparty_years = {}\n",
        table.len(),
        agg.total_groups,
        agg.dropped_groups,
        agg.retained_groups,
        agg.panel.len()
    );
    print!("{s}");
    run.write("ingest.txt", s)?;
    Ok(agg.panel)
}

fn ingest_job(a: IngestCmdArgs) -> Res<Job> {
    let path = a.input.experts_file.clone().ok_or("--experts-file is required")?;
    let schema = schema(&a.input)?;
    let policy = policy(&a.input, a.dimensions.as_deref())?;
    let registry = registry(&a.input);
    Ok(Box::new(move |run| {
        let table = read_expert_table(&path, &schema, &registry)?;
        aggregate(&table, &policy, run)?.write_csv_path(run.file("panel.csv"))?;
        Ok(())
    }))
}

fn groupings(s: &str) -> Res<Vec<Grouping>> {
    if s.trim().eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    Ok(list(s).iter().map(|g| g.parse::<Grouping>()).collect::<Result<_, _>>()?)
}

fn terms(s: &str) -> Res<Vec<Term>> {
    Ok(list(s).iter().map(|t| t.parse::<Term>()).collect::<Result<_, _>>()?)
}

fn fit_job(a: FitArgs) -> Res<Job> {
    let mut spec = DesignSpec::new(&a.outcome)
        .regressors(terms(&a.regressors)?)
        .fixed_effects(groupings(&a.fe)?)
        .cluster(a.cluster.parse::<Grouping>()?);
    for entry in a.instruments.as_deref().unwrap_or("").split(';').map(str::trim).filter(|e| !e.is_empty()) {
        let (endog, zs) = entry.split_once('=').ok_or_else(|| format!("instrument entry `{entry}` is not endog=z1|z2"))?;
        let zs: Vec<Term> = zs.split('|').map(|z| z.parse()).collect::<Result<_, _>>()?;
        spec = spec.instrument(endog.parse()?, zs);
    }
    spec.absorb = AbsorbOptions { tolerance: a.fe_tolerance, max_iterations: a.fe_max_iterations };
    spec.omit_absorbed = a.omit_absorbed;
    spec.validate()?;
    if !(a.fe_tolerance > 0.0 && a.fe_tolerance.is_finite()) || a.fe_max_iterations == 0 {
        return Err("fixed-effect tolerance and iteration cap must be positive".into());
    }
    if a.inference_df == Some(0) {
        return Err("--inference-df must be positive".into());
    }
    let joint = a.joint.as_deref().map(list).unwrap_or_default();
    Ok(Box::new(move |run| {
        let mut panel = PartyYearPanel::read_csv_path(&a.panel)?;
        if let Some(dims) = &a.centrism {
            add_centrism_columns(&mut panel, &list(dims))?;
        }
        if let Some(cols) = &a.lags {
            let cols = list(cols);
            let refs: Vec<&str> = cols.iter().map(String::as_str).collect();
            panel = build_lags(&panel, &refs, 1)?;
            for c in &cols {
                println!("lag column: {}", lag_column_name(c, 1));
            }
        }
        let mut f = fit(&panel, &spec)?;
        if let Some(df) = a.inference_df {
            f.inference_df = df;
        }
        let peak = a.peak.as_deref().map(|v| peak_location(&f, v)).transpose()?;
        let tests = if joint.is_empty() { Vec::new() } else { vec![(joint.join("+"), wald_joint_test(&f, &joint)?)] };
        let report = render_report(&a.name, &f, peak, &tests);
        print!("{report}");
        run.write("report.txt", report)?;
        Ok(())
    }))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One report per spec under `reports/`, a summary table, and an error-index
/// entry for each failed spec.
fn write_spec_runs(run: &mut RunDir, runs: &[SpecRun]) -> Res<()> {
    let mut summary = String::from("spec,status,n_obs,n_clusters,key_term,estimate,se,p_value,wald_p,peak,error\n");
    for r in runs {
        match &r.result {
            Ok(sf) => {
                let f = &sf.fit;
                let key = f.terms.last().cloned().unwrap_or_default();
                let na = |v: Option<f64>| v.map_or("NA".to_string(), |x| x.to_string());
                writeln!(
                    summary,
                    "{},ok,{},{},{},{},{},{},{},{},",
                    r.name,
                    f.n_obs,
                    f.n_clusters,
                    csv_field(&key),
                    na(f.coef(&key)),
                    na(f.se(&key)),
                    na(f.p_value(&key)),
                    na(sf.tests.first().map(|(_, t)| t.p_value)),
                    na(sf.peak)
                )?;
                run.write(&format!("reports/{}.txt", r.name), r.report().expect("fit succeeded"))?;
            }
            Err(e) => {
                writeln!(summary, "{},error,,,,,,,,,{}", r.name, csv_field(&e.to_string()))?;
                run.error(&r.name, e);
            }
        }
    }
    print!("{summary}");
    run.write("summary.csv", summary)?;
    Ok(())
}

enum PanelSource {
    File(std::path::PathBuf),
    Experts { path: std::path::PathBuf, schema: SchemaMap, registry: DimensionRegistry, policy: AggregationPolicy },
    Synthetic { spec: PanelSpec, params: DgpParams, experts: usize, expert_sd: f64, seed: u64, policy: AggregationPolicy },
}

fn baseline_job(a: BaselineArgs) -> Res<Job> {
    let dims = list(&a.dimensions);
    if dims.is_empty() {
        return Err("no dimensions given".into());
    }
    if a.bins == 0 {
        return Err("--bins must be positive".into());
    }
    let policy = policy(&a.input, Some(&a.dimensions))?;
    let source = match (&a.panel, &a.input.experts_file) {
        (Some(p), _) => PanelSource::File(p.clone()),
        (None, Some(path)) => PanelSource::Experts {
            path: path.clone(),
            schema: schema(&a.input)?,
            registry: registry(&a.input),
            policy,
        },
        (None, None) => {
            check_expert_sd(a.expert_sd)?;
            PanelSource::Synthetic {
                spec: panel_spec(&a.synth, &a.dimensions)?,
                params: dgp(&a.synth, OutcomeModel::Quadratic)?,
                experts: a.experts,
                expert_sd: a.expert_sd,
                seed: a.synth.seed,
                policy,
            }
        }
    };
    Ok(Box::new(move |run| {
        let panel = match source {
            PanelSource::File(p) => PartyYearPanel::read_csv_path(p)?,
            PanelSource::Experts { path, schema, registry, policy } => {
                aggregate(&read_expert_table(path, &schema, &registry)?, &policy, run)?
            }
            PanelSource::Synthetic { spec, params, experts, expert_sd, seed, policy } => {
                let truth = generate_panel(&spec, &params, seed)?.panel;
                if experts == 0 {
                    truth
                } else {
                    aggregate(&generate_expert_table(&truth, experts, expert_sd, seed)?, &policy, run)?
                }
            }
        };
        panel.write_csv_path(run.file("panel.csv"))?;
        run.write("binned.csv", binned_table(&panel, &dims, a.bins)?)?;
        let runs = baseline_specs(&panel, &dims)?;
        write_spec_runs(run, &runs)
    }))
}

fn mechanism_job(a: MechanismArgs) -> Res<Job> {
    let dims = list(&a.dimensions);
    if dims.is_empty() {
        return Err("no dimensions given".into());
    }
    let synthetic = if a.panel.is_none() {
        let spec = panel_spec(&a.synth, &a.dimensions)?;
        let params = dgp(&a.synth, OutcomeModel::Centrism)?;
        let ctx = context_params(&a.ctx)?;
        let theta = thetas(&a.theta, &dims)?;
        Some((spec, params, ctx, theta))
    } else {
        None
    };
    let seed = a.synth.seed;
    Ok(Box::new(move |run| {
        let panel = match synthetic {
            Some((spec, params, ctx, theta)) => {
                let mut panel = generate_panel(&spec, &params, seed)?.panel;
                let table = generate_context(&panel, &ctx, seed)?;
                table.merge_into(&mut panel)?;
                for (d, t) in &theta {
                    apply_interaction_truth(&mut panel, d, *t)?;
                }
                table.write_paths(run.file("context_country_years.csv"), run.file("context_government.csv"))?;
                panel
            }
            None => {
                let mut panel = PartyYearPanel::read_csv_path(a.panel.as_deref().expect("checked"))?;
                // Both paths are required alongside --panel.
                let cy = a.context_country_years.as_deref().expect("checked by the parser");
                let gov = a.context_government.as_deref().expect("checked by the parser");
                ContextTable::read_paths(cy, gov)?.merge_into(&mut panel)?;
                panel
            }
        };
        panel.write_csv_path(run.file("panel.csv"))?;
        let runs = mechanism_specs(&panel, &dims)?;
        write_spec_runs(run, &runs)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_are_exact_and_inclusive() {
        let r = rational_range("1.1:1.3:0.1").unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[2], parse_rational("1.3").unwrap());
        assert_eq!(rational_range("1:1.25:0.1").unwrap().len(), 3);
        assert!(rational_range("1:2:0").is_err());
        assert!(rational_range("2:1:0.1").is_err());
        assert!(rational_range("1:2").is_err());
    }

    #[test]
    fn theta_entries_are_checked() {
        let dims = vec!["economic".to_string()];
        assert_eq!(thetas("economic=0.3", &dims).unwrap(), [("economic".to_string(), 0.3)]);
        assert!(thetas("social=0.3", &dims).is_err());
        assert!(thetas("economic", &dims).is_err());
        assert!(groupings("none").unwrap().is_empty());
        assert_eq!(groupings("country,year").unwrap(), [Grouping::Country, Grouping::Year]);
    }

    #[test]
    fn csv_fields_are_quoted_when_needed() {
        assert_eq!(csv_field("a*b"), "a*b");
        assert_eq!(csv_field("x, \"y\""), "\"x, \"\"y\"\"\"");
    }
}
