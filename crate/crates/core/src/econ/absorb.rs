use nalgebra::DMatrix;

use super::EconError;
use crate::panel::{Grouping, PartyYearPanel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorbOptions {
    /// Alternating demeaning stops once a full sweep changes no value by more than this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for AbsorbOptions {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_iterations: 10_000 }
    }
}

#[derive(Debug, Clone)]
struct Dimension {
    grouping: Grouping,
    ids: Vec<usize>,
    counts: Vec<usize>,
}

/// Fixed-effect group structure over a fixed set of panel rows.
#[derive(Debug, Clone)]
pub struct FixedEffects {
    dims: Vec<Dimension>,
    n_rows: usize,
}

impl FixedEffects {
    pub fn new(panel: &PartyYearPanel, rows: &[usize], groupings: &[Grouping]) -> Self {
        let dims = groupings
            .iter()
            .map(|&grouping| {
                let (ids, n) = panel.group_ids(grouping, rows);
                let mut counts = vec![0; n];
                for &g in &ids {
                    counts[g] += 1;
                }
                Dimension { grouping, ids, counts }
            })
            .collect();
        Self { dims, n_rows: rows.len() }
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn levels(&self) -> Vec<(Grouping, usize)> {
        self.dims.iter().map(|d| (d.grouping, d.counts.len())).collect()
    }

    /// Positions (within the row set) that are alone in some FE group.
    pub fn singleton_positions(&self) -> Vec<usize> {
        (0..self.n_rows).filter(|&i| self.dims.iter().any(|d| d.counts[d.ids[i]] == 1)).collect()
    }

    /// Group ids of one dimension, aligned with the row set.
    pub fn ids(&self, grouping: Grouping) -> Option<&[usize]> {
        self.dims.iter().find(|d| d.grouping == grouping).map(|d| d.ids.as_slice())
    }

    fn sweep(&self, dim: &Dimension, col: &mut [f64]) -> f64 {
        let mut sums = vec![0.0; dim.counts.len()];
        for (v, &g) in col.iter().zip(&dim.ids) {
            sums[g] += v;
        }
        let mut max_change: f64 = 0.0;
        for (s, &c) in sums.iter_mut().zip(&dim.counts) {
            *s /= c as f64;
            max_change = max_change.max(s.abs());
        }
        for (v, &g) in col.iter_mut().zip(&dim.ids) {
            *v -= sums[g];
        }
        max_change
    }

    /// Demeans one column in place. A single dimension is exact in one pass;
    /// several dimensions alternate until a sweep moves nothing by more than
    /// the tolerance. Returns the number of sweeps.
    pub fn demean(&self, col: &mut [f64], options: &AbsorbOptions) -> Result<usize, EconError> {
        debug_assert_eq!(col.len(), self.n_rows);
        match self.dims.len() {
            0 => Ok(0),
            1 => {
                self.sweep(&self.dims[0], col);
                Ok(1)
            }
            _ => {
                let mut max_change = f64::INFINITY;
                for iteration in 1..=options.max_iterations {
                    max_change = self.dims.iter().map(|d| self.sweep(d, col)).fold(0.0, f64::max);
                    if max_change < options.tolerance {
                        return Ok(iteration);
                    }
                }
                Err(EconError::Convergence { iterations: options.max_iterations, max_change })
            }
        }
    }

    /// Demeans every column; returns the largest sweep count.
    pub fn demean_matrix(&self, m: &mut DMatrix<f64>, options: &AbsorbOptions) -> Result<usize, EconError> {
        let mut iterations = 0;
        for mut c in m.column_iter_mut() {
            iterations = iterations.max(self.demean(c.as_mut_slice(), options)?);
        }
        Ok(iterations)
    }

    /// Residualizes columns on the full dummy matrix via SVD projection.
    pub fn residualize_with_dummies(&self, m: &mut DMatrix<f64>) {
        let total: usize = self.dims.iter().map(|d| d.counts.len()).sum();
        let mut dummies = DMatrix::zeros(self.n_rows, total);
        let mut offset = 0;
        for d in &self.dims {
            for (i, &g) in d.ids.iter().enumerate() {
                dummies[(i, offset + g)] = 1.0;
            }
            offset += d.counts.len();
        }
        let svd = dummies.svd(true, false);
        let u = svd.u.expect("requested U");
        let max_sv = svd.singular_values.max();
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > 1e-10 * max_sv)
            .collect();
        let basis = u.select_columns(&keep);
        let fitted = &basis * (basis.transpose() * &*m);
        *m -= fitted;
    }

    /// Degrees of freedom absorbed: levels of each dimension minus the
    /// redundancies between them (connected components for two dimensions).
    pub fn absorbed_dof(&self) -> usize {
        let total: usize = self.dims.iter().map(|d| d.counts.len()).sum();
        match self.dims.len() {
            0 => 0,
            1 => total,
            2 => total - self.components(&self.dims[0], &self.dims[1]),
            n => total.saturating_sub(n - 1),
        }
    }

    fn components(&self, a: &Dimension, b: &Dimension) -> usize {
        let na = a.counts.len();
        let mut parent: Vec<usize> = (0..na + b.counts.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (&ga, &gb) in a.ids.iter().zip(&b.ids) {
            let (ra, rb) = (find(&mut parent, ga), find(&mut parent, na + gb));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..parent.len()).filter(|&x| find(&mut parent, x) == x).count()
    }

    /// Levels of dimensions whose groups each sit inside a single cluster.
    /// Those parameters do not count against the small-sample correction.
    pub fn nested_levels(&self, cluster_ids: &[usize]) -> usize {
        self.dims
            .iter()
            .filter(|d| {
                let mut owner = vec![usize::MAX; d.counts.len()];
                d.ids.iter().zip(cluster_ids).all(|(&g, &c)| {
                    if owner[g] == usize::MAX {
                        owner[g] = c;
                    }
                    owner[g] == c
                })
            })
            .map(|d| d.counts.len())
            .sum()
    }
}

/// FE-demeaned copy of the given columns over rows where all are present.
#[derive(Debug, Clone)]
pub struct Demeaned {
    pub names: Vec<String>,
    /// Panel rows used, in order.
    pub rows: Vec<usize>,
    pub data: DMatrix<f64>,
    pub iterations: usize,
}

pub fn absorb_fixed_effects(
    panel: &PartyYearPanel,
    columns: &[&str],
    fe_dims: &[Grouping],
    options: &AbsorbOptions,
) -> Result<Demeaned, EconError> {
    if fe_dims.is_empty() {
        return Err(EconError::Domain("at least one fixed-effect dimension is required".into()));
    }
    let cols = columns.iter().map(|c| panel.column(c)).collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<usize> = (0..panel.len()).filter(|&r| cols.iter().all(|c| c[r].is_some())).collect();
    let mut data = DMatrix::from_fn(rows.len(), cols.len(), |i, j| cols[j][rows[i]].expect("complete row"));
    let fe = FixedEffects::new(panel, &rows, fe_dims);
    let iterations = fe.demean_matrix(&mut data, options)?;
    Ok(Demeaned { names: columns.iter().map(|c| c.to_string()).collect(), rows, data, iterations })
}
