use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::absorb::FixedEffects;
use super::design::{DesignSpec, Term};
use super::inference::wald_on_block;
use super::linalg::{column_norms, dependent_columns, least_squares, project, symmetrize, RANK_TOLERANCE};
use super::EconError;
use crate::panel::{Grouping, PartyYearPanel};

/// Above this many FE levels the dummy fallback is not attempted.
const DUMMY_FALLBACK_MAX_LEVELS: usize = 5_000;

/// First-stage F below this value triggers a weak-instrument warning.
pub const WEAK_INSTRUMENT_F: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    Ols,
    TwoSls,
}

impl Estimator {
    pub fn label(self) -> &'static str {
        match self {
            Estimator::Ols => "OLS",
            Estimator::TwoSls => "2SLS",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstStage {
    pub endogenous: String,
    /// Cluster-robust Wald statistic for the excluded instruments divided by their count.
    pub f_stat: f64,
    pub n_instruments: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    pub rows_total: usize,
    pub dropped_missing: usize,
    /// Rows dropped because they were alone in a fixed-effect group.
    pub dropped_singletons: usize,
    /// Clusters with one observation (kept in estimation).
    pub singleton_clusters: usize,
    pub absorbed: Vec<(Grouping, usize)>,
    pub absorbed_dof: usize,
    pub fe_iterations: usize,
    pub dummy_fallback: bool,
    pub omitted_terms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    WeakInstrument { endogenous: String, f_stat: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::WeakInstrument { endogenous, f_stat } => {
                write!(f, "weak instrument for `{endogenous}`: first-stage F = {f_stat:.3} < {WEAK_INSTRUMENT_F}")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub estimator: Estimator,
    pub outcome: String,
    pub terms: Vec<String>,
    pub coefficients: DVector<f64>,
    /// CR1 cluster-robust covariance.
    pub vcov: DMatrix<f64>,
    pub n_obs: usize,
    pub n_clusters: usize,
    pub cluster: Grouping,
    /// `n - K`, with K counting regressors and absorbed FE levels not nested in clusters.
    pub df_resid: usize,
    /// Degrees of freedom of the t reference distribution; defaults to
    /// clusters minus one and may be overridden.
    pub inference_df: usize,
    pub first_stage: Vec<FirstStage>,
    pub diagnostics: Diagnostics,
    pub warnings: Vec<Warning>,
    /// Panel rows used, in estimation order.
    pub rows: Vec<usize>,
    /// FE-demeaned residuals aligned with `rows`.
    pub residuals: DVector<f64>,
}

impl FitResult {
    pub fn index(&self, term: &str) -> Option<usize> {
        self.terms.iter().position(|t| t == term)
    }

    pub fn coef(&self, term: &str) -> Option<f64> {
        self.index(term).map(|i| self.coefficients[i])
    }

    pub fn se(&self, term: &str) -> Option<f64> {
        self.index(term).map(|i| self.vcov[(i, i)].max(0.0).sqrt())
    }

    pub fn t_stat(&self, term: &str) -> Option<f64> {
        Some(self.coef(term)? / self.se(term)?)
    }

    /// Two-sided p-value from Student's t with `inference_df` degrees of freedom.
    pub fn p_value(&self, term: &str) -> Option<f64> {
        let t = self.t_stat(term)?;
        Some(t_test_p_value(t, self.inference_df))
    }

    /// Smallest first-stage F across endogenous terms.
    pub fn first_stage_f(&self) -> Option<f64> {
        self.first_stage.iter().map(|f| f.f_stat).reduce(f64::min)
    }
}

pub(crate) fn t_test_p_value(t: f64, df: usize) -> f64 {
    if !t.is_finite() {
        return if t.is_nan() { f64::NAN } else { 0.0 };
    }
    let dist = StudentsT::new(0.0, 1.0, df.max(1) as f64).expect("positive df");
    2.0 * (1.0 - dist.cdf(t.abs()))
}

struct Prepared {
    rows: Vec<usize>,
    terms: Vec<Term>,
    y: DVector<f64>,
    x: DMatrix<f64>,
    /// Excluded instruments (empty for OLS).
    z: DMatrix<f64>,
    z_terms: Vec<Term>,
    clusters: Vec<usize>,
    n_clusters: usize,
    /// FE parameters counted in the small-sample correction.
    k_fe: usize,
    diagnostics: Diagnostics,
}

fn prepare(panel: &PartyYearPanel, spec: &DesignSpec) -> Result<Prepared, EconError> {
    spec.validate()?;
    let mut terms = spec.estimation_terms();
    let z_terms = spec.excluded_instruments();
    let mut diagnostics = Diagnostics { rows_total: panel.len(), ..Default::default() };

    // Listwise deletion over everything the design touches.
    let outcome = panel.column(&spec.outcome)?;
    let mut rows = Vec::new();
    let mut values: Vec<Vec<f64>> = Vec::new();
    'rows: for r in 0..panel.len() {
        let Some(y) = outcome[r] else { continue };
        let mut row = Vec::with_capacity(1 + terms.len() + z_terms.len());
        row.push(y);
        for t in terms.iter().chain(&z_terms) {
            match t.evaluate(panel, r)? {
                Some(v) => row.push(v),
                None => continue 'rows,
            }
        }
        rows.push(r);
        values.push(row);
    }
    diagnostics.dropped_missing = panel.len() - rows.len();

    let mut fe = FixedEffects::new(panel, &rows, &spec.fe_dims);
    loop {
        let singles = fe.singleton_positions();
        if singles.is_empty() {
            break;
        }
        diagnostics.dropped_singletons += singles.len();
        let mut keep = vec![true; rows.len()];
        for i in singles {
            keep[i] = false;
        }
        let mut flags = keep.iter();
        rows.retain(|_| *flags.next().expect("aligned"));
        let mut flags = keep.iter();
        values.retain(|_| *flags.next().expect("aligned"));
        fe = FixedEffects::new(panel, &rows, &spec.fe_dims);
    }

    let n = rows.len();
    let p = terms.len();
    let needed = p + z_terms.len();
    if n == 0 || n < p {
        return Err(EconError::InsufficientData { needed: needed.max(1), available: n });
    }
    let mut y = DVector::from_fn(n, |i, _| values[i][0]);
    let mut x = DMatrix::from_fn(n, p, |i, j| values[i][1 + j]);
    let mut z = DMatrix::from_fn(n, z_terms.len(), |i, j| values[i][1 + p + j]);
    let raw_x_norms = column_norms(&x);

    if !fe.is_empty() {
        diagnostics.absorbed = fe.levels();
        diagnostics.absorbed_dof = fe.absorbed_dof();
        let mut all = DMatrix::zeros(n, 1 + p + z.ncols());
        all.set_column(0, &y);
        all.columns_mut(1, p).copy_from(&x);
        all.columns_mut(1 + p, z.ncols()).copy_from(&z);
        match fe.demean_matrix(&mut all, &spec.absorb) {
            Ok(iterations) => diagnostics.fe_iterations = iterations,
            Err(EconError::Convergence { .. })
                if diagnostics.absorbed.iter().map(|(_, l)| l).sum::<usize>() <= DUMMY_FALLBACK_MAX_LEVELS =>
            {
                let mut raw = DMatrix::zeros(n, 1 + p + z.ncols());
                raw.set_column(0, &y);
                raw.columns_mut(1, p).copy_from(&x);
                raw.columns_mut(1 + p, z.ncols()).copy_from(&z);
                fe.residualize_with_dummies(&mut raw);
                all = raw;
                diagnostics.dummy_fallback = true;
            }
            Err(e) => return Err(e),
        }
        y = all.column(0).into_owned();
        x = all.columns(1, p).into_owned();
        z = all.columns(1 + p, z.ncols()).into_owned();
    }

    if spec.omit_absorbed {
        let keep: Vec<usize> = (0..p)
            .filter(|&j| x.column(j).norm() > RANK_TOLERANCE * raw_x_norms[j] || spec.is_endogenous(&terms[j]))
            .collect();
        if keep.len() < p {
            diagnostics.omitted_terms =
                (0..p).filter(|j| !keep.contains(j)).map(|j| terms[j].name()).collect();
            x = x.select_columns(&keep);
            terms = keep.iter().map(|&j| terms[j].clone()).collect();
            if terms.is_empty() {
                return Err(EconError::Rank { terms: diagnostics.omitted_terms.clone() });
            }
        }
    }
    let kept_norms: Vec<f64> = terms
        .iter()
        .map(|t| raw_x_norms[spec.estimation_terms().iter().position(|u| u == t).expect("known term")])
        .collect();
    let dependent = dependent_columns(&x, &kept_norms);
    if !dependent.is_empty() {
        return Err(EconError::Rank { terms: dependent.into_iter().map(|j| terms[j].name()).collect() });
    }

    let (clusters, n_clusters) = panel.group_ids(spec.cluster, &rows);
    if n_clusters < 2 {
        return Err(EconError::Cluster { n_clusters });
    }
    let mut sizes = vec![0usize; n_clusters];
    for &c in &clusters {
        sizes[c] += 1;
    }
    diagnostics.singleton_clusters = sizes.iter().filter(|&&s| s == 1).count();
    let k_fe = diagnostics.absorbed_dof.saturating_sub(fe.nested_levels(&clusters));

    Ok(Prepared { rows, terms, y, x, z, z_terms, clusters, n_clusters, k_fe, diagnostics })
}

/// CR1: `M/(M-1) · (n-1)/(n-K) · B (Σ_g s_g s_g') B` with `s_g` the cluster
/// score sums `X_g' e_g`.
fn clustered_vcov(
    scores_x: &DMatrix<f64>,
    resid: &DVector<f64>,
    bread: &DMatrix<f64>,
    clusters: &[usize],
    n_clusters: usize,
    k_total: usize,
) -> Result<DMatrix<f64>, EconError> {
    let n = scores_x.nrows();
    if n <= k_total {
        return Err(EconError::InsufficientData { needed: k_total + 1, available: n });
    }
    let p = scores_x.ncols();
    let mut sums = DMatrix::zeros(n_clusters, p);
    for (i, &c) in clusters.iter().enumerate() {
        for j in 0..p {
            sums[(c, j)] += scores_x[(i, j)] * resid[i];
        }
    }
    let meat = sums.transpose() * &sums;
    let m = n_clusters as f64;
    let correction = m / (m - 1.0) * (n as f64 - 1.0) / (n - k_total) as f64;
    let mut v = bread * meat * bread * correction;
    symmetrize(&mut v);
    Ok(v)
}

/// Fixed-effects OLS with CR1 clustered covariance.
pub fn fit_ols_clustered(panel: &PartyYearPanel, spec: &DesignSpec) -> Result<FitResult, EconError> {
    if spec.is_iv() {
        return Err(EconError::Domain("design has instruments; use fit_2sls".into()));
    }
    let prep = prepare(panel, spec)?;
    let (beta, bread) = least_squares(&prep.x, &prep.y);
    let resid = &prep.y - &prep.x * &beta;
    let k_total = prep.x.ncols() + prep.k_fe;
    let vcov = clustered_vcov(&prep.x, &resid, &bread, &prep.clusters, prep.n_clusters, k_total)?;
    Ok(FitResult {
        estimator: Estimator::Ols,
        outcome: spec.outcome.clone(),
        terms: prep.terms.iter().map(Term::name).collect(),
        coefficients: beta,
        vcov,
        n_obs: prep.rows.len(),
        n_clusters: prep.n_clusters,
        cluster: spec.cluster,
        df_resid: prep.rows.len() - k_total,
        inference_df: prep.n_clusters - 1,
        first_stage: Vec::new(),
        diagnostics: prep.diagnostics,
        warnings: Vec::new(),
        rows: prep.rows,
        residuals: resid,
    })
}

/// Two-stage least squares on the FE-demeaned system. Each endogenous term
/// gets a clustered first-stage F for the excluded instruments; F below 10
/// adds a [`Warning::WeakInstrument`] without failing the fit.
pub fn fit_2sls(panel: &PartyYearPanel, spec: &DesignSpec) -> Result<FitResult, EconError> {
    if !spec.is_iv() {
        return Err(EconError::Domain("2SLS needs at least one instrumented term".into()));
    }
    let prep = prepare(panel, spec)?;
    let n = prep.rows.len();
    let exog: Vec<usize> = (0..prep.terms.len()).filter(|&j| !spec.is_endogenous(&prep.terms[j])).collect();
    let endog: Vec<usize> = (0..prep.terms.len()).filter(|&j| spec.is_endogenous(&prep.terms[j])).collect();

    let q = prep.z.ncols();
    let mut w = DMatrix::zeros(n, exog.len() + q);
    for (c, &j) in exog.iter().enumerate() {
        w.set_column(c, &prep.x.column(j));
    }
    w.columns_mut(exog.len(), q).copy_from(&prep.z);
    let w_names: Vec<String> = exog
        .iter()
        .map(|&j| prep.terms[j].name())
        .chain(prep.z_terms.iter().map(Term::name))
        .collect();
    let dependent = dependent_columns(&w, &column_norms(&w));
    if !dependent.is_empty() {
        return Err(EconError::Rank { terms: dependent.into_iter().map(|j| w_names[j].clone()).collect() });
    }

    let x_hat = project(&w, &prep.x);
    let dependent = dependent_columns(&x_hat, &column_norms(&prep.x));
    if !dependent.is_empty() {
        return Err(EconError::Rank { terms: dependent.into_iter().map(|j| prep.terms[j].name()).collect() });
    }
    let (beta, bread) = least_squares(&x_hat, &prep.y);
    let resid = &prep.y - &prep.x * &beta;
    let k_total = prep.x.ncols() + prep.k_fe;
    let vcov = clustered_vcov(&x_hat, &resid, &bread, &prep.clusters, prep.n_clusters, k_total)?;

    let mut first_stage = Vec::new();
    let mut warnings = Vec::new();
    let k_first = w.ncols() + prep.k_fe;
    for &j in &endog {
        let target = prep.x.column(j).into_owned();
        let (gamma, w_bread) = least_squares(&w, &target);
        let first_resid = &target - &w * &gamma;
        let v = clustered_vcov(&w, &first_resid, &w_bread, &prep.clusters, prep.n_clusters, k_first)?;
        let block: Vec<usize> = (exog.len()..w.ncols()).collect();
        let f_stat = wald_on_block(&gamma, &v, &block)? / q as f64;
        let name = prep.terms[j].name();
        if f_stat < WEAK_INSTRUMENT_F {
            warnings.push(Warning::WeakInstrument { endogenous: name.clone(), f_stat });
        }
        first_stage.push(FirstStage { endogenous: name, f_stat, n_instruments: q });
    }

    Ok(FitResult {
        estimator: Estimator::TwoSls,
        outcome: spec.outcome.clone(),
        terms: prep.terms.iter().map(Term::name).collect(),
        coefficients: beta,
        vcov,
        n_obs: n,
        n_clusters: prep.n_clusters,
        cluster: spec.cluster,
        df_resid: n - k_total,
        inference_df: prep.n_clusters - 1,
        first_stage,
        diagnostics: prep.diagnostics,
        warnings,
        rows: prep.rows,
        residuals: resid,
    })
}

/// OLS or 2SLS depending on whether the design has instruments.
pub fn fit(panel: &PartyYearPanel, spec: &DesignSpec) -> Result<FitResult, EconError> {
    if spec.is_iv() {
        fit_2sls(panel, spec)
    } else {
        fit_ols_clustered(panel, spec)
    }
}
