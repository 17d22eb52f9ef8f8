//! Small dense helpers on top of nalgebra's Householder QR.

use nalgebra::{DMatrix, DVector};

/// Relative threshold below which a QR pivot counts as collinear.
pub(crate) const RANK_TOLERANCE: f64 = 1e-9;

/// Columns whose component orthogonal to all earlier columns is negligible
/// relative to `reference_norms` (typically the column norms before FE
/// demeaning, so fully absorbed columns are caught too).
pub(crate) fn dependent_columns(x: &DMatrix<f64>, reference_norms: &[f64]) -> Vec<usize> {
    let p = x.ncols();
    if x.nrows() < p {
        // Every column past the row count is trivially dependent.
        let mut dep = dependent_columns(&x.columns(0, x.nrows()).into_owned(), &reference_norms[..x.nrows()]);
        dep.extend(x.nrows()..p);
        return dep;
    }
    let r = x.clone().qr().r();
    (0..p)
        .filter(|&j| {
            let scale = reference_norms[j].max(f64::MIN_POSITIVE);
            reference_norms[j] == 0.0 || r[(j, j)].abs() <= RANK_TOLERANCE * scale
        })
        .collect()
}

pub(crate) fn column_norms(x: &DMatrix<f64>) -> Vec<f64> {
    x.column_iter().map(|c| c.norm()).collect()
}

/// Least squares via QR: returns `beta` and `(X'X)^-1 = R^-1 R^-T`.
/// The caller has already ruled out rank deficiency.
pub(crate) fn least_squares(x: &DMatrix<f64>, y: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let qr = x.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let qty = q.transpose() * y;
    let beta = r.solve_upper_triangular(&qty).expect("full-rank design");
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(r.nrows(), r.ncols()))
        .expect("full-rank design");
    let bread = &r_inv * r_inv.transpose();
    (beta, bread)
}

/// Orthogonal projection of the columns of `x` onto the column space of `w`
/// (assumed full column rank).
pub(crate) fn project(w: &DMatrix<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
    let q = w.clone().qr().q();
    &q * (q.transpose() * x)
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let t = m.transpose();
    *m += t;
    *m *= 0.5;
}
