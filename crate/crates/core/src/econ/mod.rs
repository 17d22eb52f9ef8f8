//! Panel regression engine: fixed-effects OLS and 2SLS with party-clustered
//! inference, joint Wald tests, peak location, interaction designs and
//! FE-partialled correlations.

mod absorb;
mod centrism;
mod correlation;
mod design;
mod estimate;
mod inference;
mod interaction;
mod lags;
mod linalg;
mod report;

pub use absorb::{absorb_fixed_effects, AbsorbOptions, Demeaned, FixedEffects};
pub use centrism::{add_centrism_column, centrism_transform, extremism, CentrismMode, CentrismReference, MIDPOINT};
pub use correlation::partial_correlation;
pub use design::{DesignSpec, InstrumentSpec, Term};
pub use estimate::{
    fit, fit_2sls, fit_ols_clustered, Diagnostics, Estimator, FirstStage, FitResult, Warning, WEAK_INSTRUMENT_F,
};
pub use inference::{peak_from_coefficients, peak_location, wald_joint_test, WaldTest};
pub use interaction::{fit_interaction, interaction_design};
pub use report::{render_report, report_value};
pub use lags::{build_lags, lag_column_name};

use thiserror::Error;

use crate::panel::PanelError;

#[derive(Debug, Error)]
pub enum EconError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("fixed-effect absorption did not converge: max change {max_change:e} after {iterations} iterations")]
    Convergence { iterations: usize, max_change: f64 },
    #[error("collinear design; offending terms: {}", terms.join(", "))]
    Rank { terms: Vec<String> },
    #[error("clustered inference needs at least 2 clusters, found {n_clusters}")]
    Cluster { n_clusters: usize },
    #[error("singular covariance block: {0}")]
    Singular(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error("insufficient data: need {needed} usable rows, have {available}")]
    InsufficientData { needed: usize, available: usize },
    #[error(transparent)]
    Panel(#[from] PanelError),
}
