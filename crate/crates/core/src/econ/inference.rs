use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::estimate::FitResult;
use super::EconError;

/// Relative eigenvalue floor below which a covariance block counts as singular.
const SINGULAR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaldTest {
    pub statistic: f64,
    pub df: usize,
    /// Upper tail of chi-square with `df` degrees of freedom.
    pub p_value: f64,
}

/// `r' V_r^-1 r` for the coefficients at `idx`.
pub(crate) fn wald_on_block(beta: &DVector<f64>, vcov: &DMatrix<f64>, idx: &[usize]) -> Result<f64, EconError> {
    let q = idx.len();
    let r = DVector::from_fn(q, |i, _| beta[idx[i]]);
    let v = DMatrix::from_fn(q, q, |i, j| vcov[(idx[i], idx[j])]);
    let eig = v.clone().symmetric_eigen();
    let max = eig.eigenvalues.iter().cloned().fold(0.0_f64, |a, b| a.max(b.abs()));
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 || !min.is_finite() || min <= SINGULAR_TOLERANCE * max {
        return Err(EconError::Singular(format!("{q}x{q} block with eigenvalues {:?}", eig.eigenvalues.as_slice())));
    }
    let chol = v.cholesky().ok_or_else(|| EconError::Singular("covariance block is not positive definite".into()))?;
    Ok(r.dot(&chol.solve(&r)))
}

/// Joint Wald test that all listed coefficients are zero.
pub fn wald_joint_test<S: AsRef<str>>(fit: &FitResult, terms: &[S]) -> Result<WaldTest, EconError> {
    if terms.is_empty() {
        return Err(EconError::Domain("Wald test needs at least one term".into()));
    }
    let idx = terms
        .iter()
        .map(|t| {
            fit.index(t.as_ref())
                .ok_or_else(|| EconError::Domain(format!("term `{}` is not in the fit", t.as_ref())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let statistic = wald_on_block(&fit.coefficients, &fit.vcov, &idx)?;
    let df = idx.len();
    let chi = ChiSquared::new(df as f64).expect("positive df");
    Ok(WaldTest { statistic, df, p_value: 1.0 - chi.cdf(statistic) })
}

/// `-b1 / (2 b2)`; fails unless `b2 < 0`.
pub fn peak_from_coefficients(b1: f64, b2: f64) -> Result<f64, EconError> {
    if b2.is_nan() || b2 >= 0.0 {
        return Err(EconError::Shape(format!("quadratic coefficient {b2} is not negative; no interior maximum")));
    }
    Ok(-b1 / (2.0 * b2))
}

/// Peak of the fitted inverted U in `variable`, using the `variable` and
/// `variable^2` coefficients.
pub fn peak_location(fit: &FitResult, variable: &str) -> Result<f64, EconError> {
    let square = format!("{variable}^2");
    let missing = |t: &str| EconError::Domain(format!("term `{t}` is not in the fit"));
    let b1 = fit.coef(variable).ok_or_else(|| missing(variable))?;
    let b2 = fit.coef(&square).ok_or_else(|| missing(&square))?;
    peak_from_coefficients(b1, b2)
}
