//! Phase-diagram sweeps over `(k, l)` and a Monte Carlo election simulator
//! that checks the exact win probabilities independently.

use std::io::{self, Write};

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::game::{
    format_rational, solve, AmbiguityGame, ContestTable, GameError, PayoffMatrix, Profile, Rational, Regime,
};
use crate::rng::{stream_rng, Stream};

/// How `l` is chosen for each `k`.
#[derive(Debug, Clone, PartialEq)]
pub enum LRule {
    /// Cartesian product of `k_values` with these `l` values.
    Explicit(Vec<Rational>),
    /// `l = k + delta`.
    Offset(Rational),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub k_values: Vec<Rational>,
    pub l_rule: LRule,
}

impl SweepGrid {
    /// `(k index, l index, k, l)` in evaluation order; the `l` index is 0 for offset rules.
    pub fn pairs(&self) -> Result<Vec<(usize, usize, Rational, Rational)>, GameError> {
        if self.k_values.is_empty() {
            return Err(GameError::Domain("sweep grid has no k values".into()));
        }
        if let Some(i) = self.k_values.windows(2).position(|w| w[0] >= w[1]) {
            return Err(GameError::Domain(format!("k values must increase (index {})", i + 1)));
        }
        let pairs: Vec<_> = match &self.l_rule {
            LRule::Offset(delta) => {
                if *delta <= Rational::zero() {
                    return Err(GameError::Domain("l offset must be positive".into()));
                }
                self.k_values.iter().enumerate().map(|(i, k)| (i, 0, k.clone(), k + delta)).collect()
            }
            LRule::Explicit(ls) => {
                if ls.is_empty() {
                    return Err(GameError::Domain("sweep grid has no l values".into()));
                }
                self.k_values
                    .iter()
                    .enumerate()
                    .flat_map(|(i, k)| ls.iter().enumerate().map(move |(j, l)| (i, j, k.clone(), l.clone())))
                    .collect()
            }
        };
        for (i, j, k, l) in &pairs {
            if *k <= Rational::one() || l <= k {
                return Err(GameError::Domain(format!(
                    "grid cell (k index {i}, l index {j}) violates 1 < k < l: k = {}, l = {}",
                    format_rational(k),
                    format_rational(l)
                )));
            }
        }
        Ok(pairs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRecord {
    pub k: Rational,
    pub l: Rational,
    pub regime: Regime,
    pub equilibria: Vec<Profile>,
    pub payoffs: PayoffMatrix,
}

impl PhaseRecord {
    /// The regime's predicted equilibrium matches the enumerated set.
    pub fn is_consistent(&self) -> bool {
        match self.regime.predicted_equilibrium() {
            Some(p) => self.equilibria == [p],
            None => true,
        }
    }
}

/// Solves every grid cell. Cells are evaluated in parallel; output order is
/// the grid order.
pub fn sweep_grid(grid: &SweepGrid, boundary_tolerance: &Rational) -> Result<Vec<PhaseRecord>, GameError> {
    grid.pairs()?
        .into_par_iter()
        .map(|(_, _, k, l)| {
            let game = AmbiguityGame::canonical(&k, &l)?;
            let report = solve(&game, boundary_tolerance)?;
            Ok(PhaseRecord {
                regime: report.regime.expect("canonical game has a regime"),
                equilibria: report.pure_equilibria,
                payoffs: report.payoffs,
                k,
                l,
            })
        })
        .collect()
}

pub const PHASE_TABLE_HEADER: &str = "k,l,regime,eq_profiles,pC_AA,pC_AC,pC_CA,pC_CC";

/// Writes the phase table: one row per record, rationals as `num/den`,
/// equilibrium profiles joined with `|` (empty when none).
pub fn write_phase_table<W: Write>(records: &[PhaseRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{PHASE_TABLE_HEADER}")?;
    for r in records {
        let eq = r.equilibria.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("|");
        let probs = Profile::ALL
            .iter()
            .map(|p| format_rational(&r.payoffs.get(*p).centrist))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(out, "{},{},{},{},{}", format_rational(&r.k), format_rational(&r.l), r.regime, eq, probs)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    /// Empirical centrist win frequency (ties count one half).
    pub frequency: f64,
    /// Binomial standard error `sqrt(f(1-f)/n)`.
    pub std_error: f64,
    pub n_samples: u64,
}

/// Simulates `n_samples` elections. Committing parties' deviations are drawn
/// uniformly; ambiguous parties are evaluated at their lottery's expected
/// utility, exactly as in the enumeration.
pub fn monte_carlo_check(
    game: &AmbiguityGame,
    profile: Profile,
    n_samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate, GameError> {
    if n_samples == 0 {
        return Err(GameError::Domain("Monte Carlo needs at least one sample".into()));
    }
    let table = ContestTable::build(game, profile);
    let mut rng = stream_rng(seed, Stream::MonteCarlo, 0);
    let (nc, ne) = (table.centrist_len(), table.extremist_len());
    let mut doubled: u64 = 0;
    for _ in 0..n_samples {
        let i = if nc == 1 { 0 } else { rng.random_range(0..nc) };
        let j = if ne == 1 { 0 } else { rng.random_range(0..ne) };
        doubled += crate::game::doubled_score(table.outcome(i, j));
    }
    let n = n_samples as f64;
    let frequency = doubled as f64 / (2.0 * n);
    let std_error = (frequency * (1.0 - frequency) / n).sqrt();
    Ok(MonteCarloEstimate { frequency, std_error, n_samples })
}
