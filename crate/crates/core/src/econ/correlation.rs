use nalgebra::DMatrix;

use super::absorb::{AbsorbOptions, FixedEffects};
use super::EconError;
use crate::panel::{Grouping, PartyYearPanel};

/// Pearson correlation of `x` and `y` after partialling out the fixed
/// effects in `fe_dims` (plain Pearson when `fe_dims` is empty).
pub fn partial_correlation(
    panel: &PartyYearPanel,
    x: &str,
    y: &str,
    fe_dims: &[Grouping],
    options: &AbsorbOptions,
) -> Result<f64, EconError> {
    let (xs, ys) = (panel.column(x)?, panel.column(y)?);
    let rows: Vec<usize> = (0..panel.len()).filter(|&r| xs[r].is_some() && ys[r].is_some()).collect();
    if rows.len() < 3 {
        return Err(EconError::InsufficientData { needed: 3, available: rows.len() });
    }
    let mut m = DMatrix::from_fn(rows.len(), 2, |i, j| {
        if j == 0 { xs[rows[i]] } else { ys[rows[i]] }.expect("complete row")
    });
    if fe_dims.is_empty() {
        for mut c in m.column_iter_mut() {
            let mean = c.mean();
            c.add_scalar_mut(-mean);
        }
    } else {
        FixedEffects::new(panel, &rows, fe_dims).demean_matrix(&mut m, options)?;
    }
    let (a, b) = (m.column(0), m.column(1));
    let (na, nb) = (a.norm(), b.norm());
    let scale = m.amax().max(1.0) * 1e-12 * (rows.len() as f64).sqrt();
    if na <= scale || nb <= scale {
        return Err(EconError::Degenerate(format!("residualized `{x}` or `{y}` has zero variance")));
    }
    Ok((a.dot(&b) / (na * nb)).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::RowKey;

    fn panel(x: Vec<f64>, y: Vec<f64>) -> PartyYearPanel {
        let keys = (0..x.len()).map(|i| RowKey::new(["A", "B"][i % 2], (i / 2).to_string(), 2017)).collect();
        let mut p = PartyYearPanel::new(keys).unwrap();
        p.insert_dense("x", x).unwrap();
        p.insert_dense("y", y).unwrap();
        p
    }

    #[test]
    fn plain_pearson_without_fe() {
        let x = vec![1.0, 2.0, 3.0, 4.0, 5.0, 7.0];
        let y = vec![2.0, 1.0, 4.0, 3.0, 6.0, 5.0];
        let p = panel(x.clone(), y.clone());
        let r = partial_correlation(&p, "x", "y", &[], &AbsorbOptions::default()).unwrap();
        let n = x.len() as f64;
        let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
        let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
        assert!((r - sxy / (sxx * syy).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn identical_after_demeaning_is_one() {
        let x = vec![1.0, 5.0, 2.0, 8.0, 4.0, 3.0];
        // y differs from x only by a country-level shift
        let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v + if i % 2 == 0 { 10.0 } else { -3.0 }).collect();
        let p = panel(x, y);
        let r = partial_correlation(&p, "x", "y", &[Grouping::Country], &AbsorbOptions::default()).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_short_inputs() {
        let p = panel(vec![1.0, 2.0, 1.0, 2.0], vec![1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            partial_correlation(&p, "x", "y", &[], &AbsorbOptions::default()),
            Err(EconError::Degenerate(_))
        ));
        let short = panel(vec![1.0, 2.0], vec![3.0, 1.0]);
        assert!(matches!(
            partial_correlation(&short, "x", "y", &[], &AbsorbOptions::default()),
            Err(EconError::InsufficientData { .. })
        ));
    }
}
