//! Synthetic party-year panels with known truth.
//!
//! Blurriness follows either the quadratic-in-position model or the linear
//! centrism model, plus country×year effects, persistent party effects and
//! idiosyncratic noise. Positions follow a stationary AR(1) across waves so
//! lagged positions instrument current ones. A context table adds GDP-growth
//! history and government status for interaction designs.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;
use rand_distr::{Bernoulli, Distribution, StandardNormal};
use thiserror::Error;

use crate::econ::{centrism_transform, CentrismReference};
use crate::ingest::{blurriness_column, position_column, ExpertRow, ExpertTable};
use crate::panel::{PanelError, PartyYearPanel, RowKey, SCALE_MAX, SCALE_MIN};
use crate::rng::{stream_rng, Stream};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Panel(#[from] PanelError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PanelSpec {
    pub n_countries: usize,
    pub parties_per_country: usize,
    /// Survey years, increasing.
    pub waves: Vec<i32>,
    pub dimensions: Vec<String>,
}

impl Default for PanelSpec {
    /// 25 countries × 8 parties × 2 waves, economic and social dimensions.
    fn default() -> Self {
        Self {
            n_countries: 25,
            parties_per_country: 8,
            waves: vec![2017, 2019],
            dimensions: vec!["economic".into(), "social".into()],
        }
    }
}

impl PanelSpec {
    /// `n_waves` survey years two years apart starting in 2017.
    pub fn new(n_countries: usize, n_waves: usize, parties_per_country: usize) -> Self {
        Self {
            n_countries,
            parties_per_country,
            waves: (0..n_waves as i32).map(|w| 2017 + 2 * w).collect(),
            ..Self::default()
        }
    }

    pub fn n_waves(&self) -> usize {
        self.waves.len()
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.n_countries == 0 || self.parties_per_country == 0 || self.waves.is_empty() || self.dimensions.is_empty()
        {
            return Err(SynthError::Domain("panel spec needs at least one country, party, wave and dimension".into()));
        }
        if self.waves.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SynthError::Domain("waves must increase".into()));
        }
        Ok(())
    }

    pub fn country_label(i: usize) -> String {
        format!("C{:02}", i + 1)
    }

    pub fn party_label(j: usize) -> String {
        format!("P{:02}", j + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeModel {
    /// `β0 + β1·p + β2·p²`.
    Quadratic,
    /// `α0 + α1·(5 − |5 − p|)`.
    Centrism,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DgpParams {
    pub outcome: OutcomeModel,
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub sd_country_year: f64,
    pub sd_party: f64,
    pub sd_noise: f64,
    pub position_mean: f64,
    pub position_sd: f64,
    /// Across-wave AR(1) coefficient of latent positions, in [0, 1).
    pub persistence: f64,
    /// Simultaneity: measured position moves toward the midpoint by
    /// `feedback × noise`, so measured centrism absorbs part of the
    /// blurriness shock. 0 disables it.
    pub feedback: f64,
}

impl Default for DgpParams {
    /// Peak-5 quadratic calibrated to the sample moments: mean position
    /// 4.916, mean blurriness ≈ 3.675.
    fn default() -> Self {
        Self {
            outcome: OutcomeModel::Quadratic,
            beta0: 1.48,
            beta1: 1.0,
            beta2: -0.1,
            alpha0: 1.5,
            alpha1: 0.6,
            sd_country_year: 0.4,
            sd_party: 0.5,
            sd_noise: 0.6,
            position_mean: 4.916,
            position_sd: 1.75,
            persistence: 0.9,
            feedback: 0.0,
        }
    }
}

impl DgpParams {
    /// Linear-centrism truth with the same noise and position calibration.
    pub fn centrism() -> Self {
        Self { outcome: OutcomeModel::Centrism, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let sds = [self.sd_country_year, self.sd_party, self.sd_noise, self.position_sd];
        if sds.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(SynthError::Domain("standard deviations must be finite and nonnegative".into()));
        }
        if !(0.0..1.0).contains(&self.persistence) {
            return Err(SynthError::Domain(format!("persistence {} outside [0, 1)", self.persistence)));
        }
        let finite = [self.beta0, self.beta1, self.beta2, self.alpha0, self.alpha1, self.position_mean, self.feedback];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(SynthError::Domain("coefficients must be finite".into()));
        }
        Ok(())
    }

    /// Systematic part of blurriness at latent position `p`.
    pub fn mean_blurriness(&self, p: f64) -> f64 {
        match self.outcome {
            OutcomeModel::Quadratic => self.beta0 + self.beta1 * p + self.beta2 * p * p,
            OutcomeModel::Centrism => {
                self.alpha0 + self.alpha1 * centrism_transform(p, CentrismReference::Midpoint).expect("finite position")
            }
        }
    }
}

fn clamp_scale(v: f64) -> (f64, bool) {
    let c = v.clamp(SCALE_MIN, SCALE_MAX);
    (c, c != v)
}

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample::<f64, _>(StandardNormal)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedPanel {
    pub panel: PartyYearPanel,
    /// Values (positions and blurriness) moved onto the 0–10 scale.
    pub clamped: usize,
    /// Total generated scaled values.
    pub scaled_values: usize,
}

impl GeneratedPanel {
    pub fn clamped_share(&self) -> f64 {
        self.clamped as f64 / self.scaled_values.max(1) as f64
    }
}

/// Generates `position_<d>` and `blurriness_<d>` for every dimension. Rows
/// are ordered country, party, wave. Each dimension draws from its own
/// streams, so adding a dimension leaves the others unchanged.
pub fn generate_panel(spec: &PanelSpec, params: &DgpParams, seed: u64) -> Result<GeneratedPanel, SynthError> {
    spec.validate()?;
    params.validate()?;
    let (nc, np, nw) = (spec.n_countries, spec.parties_per_country, spec.n_waves());
    let mut keys = Vec::with_capacity(nc * np * nw);
    for c in 0..nc {
        for j in 0..np {
            for &y in &spec.waves {
                keys.push(RowKey::new(PanelSpec::country_label(c), PanelSpec::party_label(j), y));
            }
        }
    }
    let mut panel = PartyYearPanel::new(keys)?;
    let mut clamped = 0;
    let innovation_sd = params.position_sd * (1.0 - params.persistence * params.persistence).sqrt();
    for (d, dim) in spec.dimensions.iter().enumerate() {
        let mut pos_rng = stream_rng(seed, Stream::PanelPositions, d as u32);
        let mut shock_rng = stream_rng(seed, Stream::PanelShocks, d as u32);
        let cy_effects: Vec<f64> = (0..nc * nw).map(|_| params.sd_country_year * normal(&mut shock_rng)).collect();
        let mut positions = Vec::with_capacity(nc * np * nw);
        let mut blurriness = Vec::with_capacity(nc * np * nw);
        for c in 0..nc {
            for _ in 0..np {
                let party_effect = params.sd_party * normal(&mut shock_rng);
                let mut latent = params.position_mean + params.position_sd * normal(&mut pos_rng);
                for w in 0..nw {
                    if w > 0 {
                        latent = params.position_mean
                            + params.persistence * (latent - params.position_mean)
                            + innovation_sd * normal(&mut pos_rng);
                    }
                    let (p, cp) = clamp_scale(latent);
                    let noise = params.sd_noise * normal(&mut shock_rng);
                    let raw_blur = params.mean_blurriness(p) + cy_effects[c * nw + w] + party_effect + noise;
                    let (b, cb) = clamp_scale(raw_blur);
                    let measured = if params.feedback != 0.0 {
                        let toward_mid = if p < 5.0 { 1.0 } else { -1.0 };
                        clamp_scale(p + params.feedback * noise * toward_mid).0
                    } else {
                        p
                    };
                    clamped += usize::from(cp) + usize::from(cb);
                    positions.push(measured);
                    blurriness.push(b);
                }
            }
        }
        panel.insert_dense(position_column(dim), positions)?;
        panel.insert_dense(blurriness_column(dim), blurriness)?;
    }
    let scaled_values = 2 * panel.len() * spec.dimensions.len();
    Ok(GeneratedPanel { panel, clamped, scaled_values })
}

/// One row per expert × party-year × dimension: the party-year value plus
/// independent N(0, expert_sd) noise, clamped to the scale. Dimensions are
/// the `position_<d>` columns of the panel.
pub fn generate_expert_table(
    panel: &PartyYearPanel,
    experts_per_party: usize,
    expert_sd: f64,
    seed: u64,
) -> Result<ExpertTable, SynthError> {
    if experts_per_party == 0 {
        return Err(SynthError::Domain("experts_per_party must be at least 1".into()));
    }
    if !expert_sd.is_finite() || expert_sd < 0.0 {
        return Err(SynthError::Domain(format!("expert_sd {expert_sd} must be finite and nonnegative")));
    }
    let dims: Vec<String> = panel
        .column_names()
        .filter_map(|c| c.strip_prefix("position_"))
        .filter(|d| !d.starts_with("sd_"))
        .map(String::from)
        .collect();
    let mut rng = stream_rng(seed, Stream::ExpertNoise, 0);
    let mut table = ExpertTable::default();
    for (r, key) in panel.keys().iter().enumerate() {
        for d in &dims {
            let Some(pos) = panel.value(&position_column(d), r)? else { continue };
            let blur = if panel.has_column(&blurriness_column(d)) { panel.value(&blurriness_column(d), r)? } else { None };
            for e in 0..experts_per_party {
                let mut jitter = |v: f64| {
                    if expert_sd == 0.0 {
                        v
                    } else {
                        clamp_scale(v + expert_sd * normal(&mut rng)).0
                    }
                };
                let position = jitter(pos);
                let blurriness = blur.map(&mut jitter);
                table.rows.push(ExpertRow {
                    expert_id: format!("E{:03}", e + 1),
                    country: key.country.clone(),
                    party_id: key.party_id.clone(),
                    year: key.year,
                    dimension: d.clone(),
                    position,
                    blurriness,
                });
            }
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextParams {
    /// Mean annual GDP growth, percent.
    pub growth_mean: f64,
    /// Typical within-country growth SD.
    pub growth_sd: f64,
    /// SD of a log-normal per-country factor on `growth_sd`. Off by default:
    /// the fat right tail it gives the lagged variance pushes blurriness
    /// against the top of the scale once the interaction truth is added.
    pub growth_sd_dispersion: f64,
    pub growth_persistence: f64,
    /// Trailing years used for the lagged variance and crisis count.
    pub variance_window: usize,
    /// Probability that a party-year is in government.
    pub government_share: f64,
}

impl Default for ContextParams {
    fn default() -> Self {
        Self {
            growth_mean: 2.0,
            growth_sd: 1.1,
            growth_sd_dispersion: 0.0,
            growth_persistence: 0.3,
            variance_window: 3,
            government_share: 0.35,
        }
    }
}

impl ContextParams {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.variance_window < 2 {
            return Err(SynthError::Domain("variance window needs at least 2 years".into()));
        }
        if !(0.0..=1.0).contains(&self.government_share) {
            return Err(SynthError::Domain("government share must lie in [0, 1]".into()));
        }
        if !(self.growth_sd >= 0.0 && self.growth_sd_dispersion >= 0.0) || !(-1.0..1.0).contains(&self.growth_persistence)
        {
            return Err(SynthError::Domain("invalid growth process parameters".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountryYearContext {
    pub country: String,
    pub year: i32,
    pub gdp_growth: f64,
    /// Sample variance of growth over the trailing window ending the year before.
    pub growth_variance_lag: f64,
    /// 1 when `growth_variance_lag` exceeds the median across country-years.
    pub high_variance: bool,
    /// Negative-growth years in the trailing window.
    pub crisis_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextTable {
    pub country_years: Vec<CountryYearContext>,
    pub in_government: Vec<(RowKey, bool)>,
}

pub const CONTEXT_COLUMNS: [&str; 7] =
    ["gdp_growth", "growth_var_lag", "growth_var_high", "low_growth", "crisis_count", "in_government", "opposition"];

fn sample_variance(xs: &[f64]) -> f64 {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Annual GDP growth per country (AR(1) around `growth_mean`), from
/// `variance_window` years before the first wave through the last wave, and
/// Bernoulli government status per party-year.
pub fn generate_context(panel: &PartyYearPanel, params: &ContextParams, seed: u64) -> Result<ContextTable, SynthError> {
    params.validate()?;
    if panel.is_empty() {
        return Err(SynthError::Domain("panel is empty".into()));
    }
    let waves = panel.waves();
    let (first, last) = (waves[0], *waves.last().expect("non-empty"));
    let start = first - params.variance_window as i32;
    let mut countries: Vec<&str> = Vec::new();
    for k in panel.keys() {
        if !countries.contains(&k.country.as_str()) {
            countries.push(&k.country);
        }
    }
    let mut country_years = Vec::new();
    for (ci, country) in countries.iter().enumerate() {
        let mut rng = stream_rng(seed, Stream::Context, ci as u32);
        let sd = params.growth_sd * (params.growth_sd_dispersion * normal(&mut rng)).exp();
        let rho = params.growth_persistence;
        let mut dev = sd * normal(&mut rng);
        let mut series = Vec::new();
        for year in start..=last {
            if year > start {
                dev = rho * dev + sd * (1.0 - rho * rho).sqrt() * normal(&mut rng);
            }
            series.push((year, params.growth_mean + dev));
        }
        for &year in &waves {
            let at = (year - start) as usize;
            let window: Vec<f64> = series[at - params.variance_window..at].iter().map(|(_, g)| *g).collect();
            country_years.push(CountryYearContext {
                country: country.to_string(),
                year,
                gdp_growth: series[at].1,
                growth_variance_lag: sample_variance(&window),
                high_variance: false,
                crisis_count: window.iter().filter(|g| **g < 0.0).count(),
            });
        }
    }
    let mut variances: Vec<f64> = country_years.iter().map(|c| c.growth_variance_lag).collect();
    variances.sort_by(f64::total_cmp);
    let median = median_sorted(&variances);
    for c in &mut country_years {
        c.high_variance = c.growth_variance_lag > median;
    }
    let mut gov_rng = stream_rng(seed, Stream::Government, 0);
    let coin = Bernoulli::new(params.government_share).expect("validated share");
    let in_government = panel.keys().iter().map(|k| (k.clone(), coin.sample(&mut gov_rng))).collect();
    Ok(ContextTable { country_years, in_government })
}

fn median_sorted(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

impl ContextTable {
    /// Adds the context columns to `panel`. `low_growth` flags country-years
    /// with growth below the median across country-years.
    pub fn merge_into(&self, panel: &mut PartyYearPanel) -> Result<(), SynthError> {
        let by_cy: HashMap<(&str, i32), &CountryYearContext> =
            self.country_years.iter().map(|c| ((c.country.as_str(), c.year), c)).collect();
        let gov: HashMap<&RowKey, bool> = self.in_government.iter().map(|(k, g)| (k, *g)).collect();
        let mut growth: Vec<f64> = self.country_years.iter().map(|c| c.gdp_growth).collect();
        growth.sort_by(f64::total_cmp);
        let growth_median = if growth.is_empty() { 0.0 } else { median_sorted(&growth) };
        let n = panel.len();
        let mut cols: Vec<Vec<Option<f64>>> = vec![vec![None; n]; CONTEXT_COLUMNS.len()];
        for (r, k) in panel.keys().iter().enumerate() {
            if let Some(c) = by_cy.get(&(k.country.as_str(), k.year)) {
                cols[0][r] = Some(c.gdp_growth);
                cols[1][r] = Some(c.growth_variance_lag);
                cols[2][r] = Some(f64::from(u8::from(c.high_variance)));
                cols[3][r] = Some(f64::from(u8::from(c.gdp_growth < growth_median)));
                cols[4][r] = Some(c.crisis_count as f64);
            }
            if let Some(g) = gov.get(k) {
                cols[5][r] = Some(f64::from(u8::from(*g)));
                cols[6][r] = Some(f64::from(u8::from(!*g)));
            }
        }
        for (name, values) in CONTEXT_COLUMNS.iter().zip(cols) {
            panel.insert_column(*name, values)?;
        }
        Ok(())
    }

    /// Country-year table: `country,year,gdp_growth,growth_var_lag,growth_var_high,crisis_count`.
    pub fn write_country_years<W: Write>(&self, out: W) -> Result<(), SynthError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["country", "year", "gdp_growth", "growth_var_lag", "growth_var_high", "crisis_count"])?;
        for c in &self.country_years {
            w.write_record([
                c.country.clone(),
                c.year.to_string(),
                c.gdp_growth.to_string(),
                c.growth_variance_lag.to_string(),
                u8::from(c.high_variance).to_string(),
                c.crisis_count.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Party-year table: `country,party_id,year,in_government`.
    pub fn write_government<W: Write>(&self, out: W) -> Result<(), SynthError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["country", "party_id", "year", "in_government"])?;
        for (k, g) in &self.in_government {
            w.write_record([k.country.clone(), k.party_id.clone(), k.year.to_string(), u8::from(*g).to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read<R1: Read, R2: Read>(country_years: R1, government: R2) -> Result<Self, SynthError> {
        fn parse<T: std::str::FromStr>(v: &str, line: usize, col: &str) -> Result<T, SynthError> {
            v.trim().parse().map_err(|_| {
                SynthError::Panel(PanelError::Parse { line, column: col.into(), reason: format!("cannot parse `{v}`") })
            })
        }
        let mut rdr = csv::Reader::from_reader(country_years);
        let mut cys = Vec::new();
        for (n, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = n + 2;
            if rec.len() < 6 {
                return Err(SynthError::Domain(format!("country-year line {line}: expected 6 fields")));
            }
            cys.push(CountryYearContext {
                country: rec[0].to_string(),
                year: parse(&rec[1], line, "year")?,
                gdp_growth: parse(&rec[2], line, "gdp_growth")?,
                growth_variance_lag: parse(&rec[3], line, "growth_var_lag")?,
                high_variance: parse::<u8>(&rec[4], line, "growth_var_high")? == 1,
                crisis_count: parse(&rec[5], line, "crisis_count")?,
            });
        }
        let mut rdr = csv::Reader::from_reader(government);
        let mut gov = Vec::new();
        for (n, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = n + 2;
            if rec.len() < 4 {
                return Err(SynthError::Domain(format!("government line {line}: expected 4 fields")));
            }
            let key = RowKey::new(&rec[0], &rec[1], parse(&rec[2], line, "year")?);
            gov.push((key, parse::<u8>(&rec[3], line, "in_government")? == 1));
        }
        Ok(Self { country_years: cys, in_government: gov })
    }

    pub fn write_paths(&self, country_years: impl AsRef<Path>, government: impl AsRef<Path>) -> Result<(), SynthError> {
        self.write_country_years(std::fs::File::create(country_years)?)?;
        self.write_government(std::fs::File::create(government)?)
    }

    pub fn read_paths(country_years: impl AsRef<Path>, government: impl AsRef<Path>) -> Result<Self, SynthError> {
        Self::read(std::fs::File::open(country_years)?, std::fs::File::open(government)?)
    }
}

/// Interaction truth for the uncertainty-of-extremes mechanism: adds
/// `theta × centrism × growth_var_lag × opposition` to `blurriness_<d>`,
/// using midpoint centrism of the measured position, then clamps to the
/// scale. Requires the context columns (see [`ContextTable::merge_into`]).
/// Returns the number of clamped values.
pub fn apply_interaction_truth(panel: &mut PartyYearPanel, dimension: &str, theta: f64) -> Result<usize, SynthError> {
    if theta == 0.0 {
        return Ok(0);
    }
    let pos = panel.column(&position_column(dimension))?.to_vec();
    let var = panel.column("growth_var_lag")?.to_vec();
    let opp = panel.column("opposition")?.to_vec();
    let blur_name = blurriness_column(dimension);
    let blur = panel.column(&blur_name)?.to_vec();
    let mut clamped = 0;
    let updated = (0..panel.len())
        .map(|r| match (blur[r], pos[r], var[r], opp[r]) {
            (Some(b), Some(p), Some(v), Some(o)) => {
                let c = centrism_transform(p, CentrismReference::Midpoint).expect("scaled position");
                let (nb, hit) = clamp_scale(b + theta * c * v * o);
                clamped += usize::from(hit);
                Some(nb)
            }
            (b, ..) => b,
        })
        .collect();
    panel.insert_column(blur_name, updated)?;
    Ok(clamped)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_given_seed() {
        let spec = PanelSpec::new(3, 2, 4);
        let a = generate_panel(&spec, &DgpParams::default(), 9).unwrap();
        let b = generate_panel(&spec, &DgpParams::default(), 9).unwrap();
        assert_eq!(a, b);
        let c = generate_panel(&spec, &DgpParams::default(), 10).unwrap();
        assert_ne!(a.panel, c.panel);
    }

    #[test]
    fn zero_noise_is_exactly_quadratic() {
        let params = DgpParams {
            beta0: 0.5,
            beta1: 1.6,
            beta2: -0.16,
            sd_noise: 0.0,
            sd_country_year: 0.0,
            sd_party: 0.0,
            ..DgpParams::default()
        };
        let g = generate_panel(&PanelSpec::new(4, 2, 5), &params, 1).unwrap();
        let p = g.panel.column("position_economic").unwrap();
        let b = g.panel.column("blurriness_economic").unwrap();
        for (p, b) in p.iter().zip(b) {
            let p = p.unwrap();
            assert_eq!(b.unwrap(), 0.5 + 1.6 * p - 0.16 * p * p);
        }
    }

    #[test]
    fn rejects_empty_or_invalid_specs() {
        assert!(generate_panel(&PanelSpec::new(0, 2, 3), &DgpParams::default(), 1).is_err());
        let bad = DgpParams { persistence: 1.0, ..DgpParams::default() };
        assert!(generate_panel(&PanelSpec::default(), &bad, 1).is_err());
        let neg = DgpParams { sd_noise: -1.0, ..DgpParams::default() };
        assert!(generate_panel(&PanelSpec::default(), &neg, 1).is_err());
    }

    #[test]
    fn dimensions_use_independent_streams() {
        let one = PanelSpec { dimensions: vec!["economic".into()], ..PanelSpec::new(2, 2, 3) };
        let two = PanelSpec::new(2, 2, 3);
        let a = generate_panel(&one, &DgpParams::default(), 4).unwrap().panel;
        let b = generate_panel(&two, &DgpParams::default(), 4).unwrap().panel;
        assert_eq!(a.column("blurriness_economic").unwrap(), b.column("blurriness_economic").unwrap());
    }

    #[test]
    fn context_median_dummy_and_window() {
        let g = generate_panel(&PanelSpec::new(6, 2, 3), &DgpParams::default(), 2).unwrap();
        let ctx = generate_context(&g.panel, &ContextParams::default(), 5).unwrap();
        assert_eq!(ctx.country_years.len(), 12);
        let mut v: Vec<f64> = ctx.country_years.iter().map(|c| c.growth_variance_lag).collect();
        v.sort_by(f64::total_cmp);
        let median = 0.5 * (v[5] + v[6]);
        for c in &ctx.country_years {
            assert!(c.growth_variance_lag >= 0.0);
            assert_eq!(c.high_variance, c.growth_variance_lag > median);
        }
        assert_eq!(ctx.country_years.iter().filter(|c| c.high_variance).count(), 6);
    }

    #[test]
    fn context_round_trips_and_merges() {
        let mut g = generate_panel(&PanelSpec::new(3, 2, 2), &DgpParams::default(), 2).unwrap().panel;
        let ctx = generate_context(&g, &ContextParams::default(), 5).unwrap();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        ctx.write_country_years(&mut a).unwrap();
        ctx.write_government(&mut b).unwrap();
        assert_eq!(ContextTable::read(a.as_slice(), b.as_slice()).unwrap(), ctx);
        ctx.merge_into(&mut g).unwrap();
        for r in 0..g.len() {
            let gov = g.value("in_government", r).unwrap().unwrap();
            assert_eq!(gov + g.value("opposition", r).unwrap().unwrap(), 1.0);
        }
        let before = g.column("blurriness_economic").unwrap().to_vec();
        apply_interaction_truth(&mut g, "economic", 0.0).unwrap();
        assert_eq!(g.column("blurriness_economic").unwrap(), before.as_slice());
    }
}
