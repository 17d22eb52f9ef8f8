//! Test-side oracles shared by the integration targets.
#![allow(dead_code)]

use ambiguity_lab::panel::{Grouping, PartyYearPanel, RowKey};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random unbalanced panel: `nc` countries × `np` parties × `nw` waves with
/// a few rows removed, columns x1, x2, z, y.
pub fn random_panel(seed: u64, nc: usize, np: usize, nw: usize) -> PartyYearPanel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keys = Vec::new();
    for c in 0..nc {
        for p in 0..np {
            for w in 0..nw {
                if rng.random::<f64>() > 0.1 || w == 0 {
                    keys.push(RowKey::new(format!("c{c}"), format!("p{p}"), 2000 + w as i32));
                }
            }
        }
    }
    let n = keys.len();
    let mut panel = PartyYearPanel::new(keys).unwrap();
    let x1: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
    let x2: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
    let z: Vec<f64> = x1.iter().map(|x| x + rng.random_range(-1.0..1.0)).collect();
    let y: Vec<f64> = (0..n).map(|i| 1.0 + 0.7 * x1[i] - 0.4 * x2[i] + rng.random_range(-1.0..1.0)).collect();
    panel.insert_dense("x1", x1).unwrap();
    panel.insert_dense("x2", x2).unwrap();
    panel.insert_dense("z", z).unwrap();
    panel.insert_dense("y", y).unwrap();
    panel
}

pub fn dummies(panel: &PartyYearPanel, rows: &[usize], g: Grouping, drop_first: bool) -> DMatrix<f64> {
    let (ids, n) = panel.group_ids(g, rows);
    let skip = usize::from(drop_first);
    DMatrix::from_fn(rows.len(), n - skip, |i, j| if ids[i] == j + skip { 1.0 } else { 0.0 })
}

/// Full-dummy OLS solved by SVD, independent of the demeaning path.
pub fn dummy_ols(panel: &PartyYearPanel, rows: &[usize], xs: &[&str], y: &str, fe: &[Grouping]) -> (DVector<f64>, DMatrix<f64>, DVector<f64>) {
    let mut blocks: Vec<DMatrix<f64>> = vec![DMatrix::from_fn(rows.len(), xs.len(), |i, j| {
        panel.value(xs[j], rows[i]).unwrap().unwrap()
    })];
    for (k, g) in fe.iter().enumerate() {
        blocks.push(dummies(panel, rows, *g, k > 0));
    }
    let ncols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut z = DMatrix::zeros(rows.len(), ncols);
    let mut off = 0;
    for b in &blocks {
        z.columns_mut(off, b.ncols()).copy_from(b);
        off += b.ncols();
    }
    let yv = DVector::from_fn(rows.len(), |i, _| panel.value(y, rows[i]).unwrap().unwrap());
    let svd = z.clone().svd(true, true);
    let beta = svd.solve(&yv, 1e-10).unwrap();
    let resid = &yv - &z * &beta;
    (beta.rows(0, xs.len()).into_owned(), z, resid)
}

