use std::collections::HashMap;

use super::EconError;
use crate::panel::{Grouping, PartyYearPanel, SCALE_MAX, SCALE_MIN};

pub const MIDPOINT: f64 = 5.0;

/// Reference point centrism is measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CentrismReference {
    /// The scale midpoint, 5.
    Midpoint,
    /// The median position of the party system.
    Median(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CentrismMode {
    Midpoint,
    /// Median position within each country-year.
    Median,
}

impl CentrismMode {
    pub fn label(self) -> &'static str {
        match self {
            CentrismMode::Midpoint => "midpoint",
            CentrismMode::Median => "median",
        }
    }
}

fn check_scale(what: &str, value: f64) -> Result<(), EconError> {
    if (SCALE_MIN..=SCALE_MAX).contains(&value) {
        Ok(())
    } else {
        Err(EconError::Domain(format!("{what} {value} is outside the 0-10 scale")))
    }
}

/// `|reference - position|`.
pub fn extremism(position: f64, reference: CentrismReference) -> Result<f64, EconError> {
    check_scale("position", position)?;
    let r = match reference {
        CentrismReference::Midpoint => MIDPOINT,
        CentrismReference::Median(m) => {
            check_scale("median reference", m)?;
            m
        }
    };
    Ok((r - position).abs())
}

/// `5 - |reference - position|`. Both modes share the scale constant 5, so
/// the median variant only moves the point of maximal centrism.
pub fn centrism_transform(position: f64, reference: CentrismReference) -> Result<f64, EconError> {
    Ok(MIDPOINT - extremism(position, reference)?)
}

fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    Some(if n % 2 == 1 { values[n / 2] } else { 0.5 * (values[n / 2 - 1] + values[n / 2]) })
}

/// Adds a centrism column computed from `position_column`. Median mode uses
/// the median of observed positions within each country-year.
pub fn add_centrism_column(
    panel: &mut PartyYearPanel,
    position_column: &str,
    output_column: &str,
    mode: CentrismMode,
) -> Result<(), EconError> {
    let positions = panel.column(position_column)?.to_vec();
    let rows: Vec<usize> = (0..panel.len()).collect();
    let (groups, _) = panel.group_ids(Grouping::CountryYear, &rows);
    let mut medians: HashMap<usize, f64> = HashMap::new();
    if mode == CentrismMode::Median {
        let mut members: HashMap<usize, Vec<f64>> = HashMap::new();
        for (g, p) in groups.iter().zip(&positions) {
            if let Some(p) = p {
                members.entry(*g).or_default().push(*p);
            }
        }
        for (g, mut vals) in members {
            medians.insert(g, median(&mut vals).expect("non-empty group"));
        }
    }
    let values = positions
        .iter()
        .zip(&groups)
        .map(|(p, g)| {
            p.map(|p| {
                let reference = match mode {
                    CentrismMode::Midpoint => CentrismReference::Midpoint,
                    CentrismMode::Median => CentrismReference::Median(medians[g]),
                };
                centrism_transform(p, reference)
            })
            .transpose()
        })
        .collect::<Result<Vec<_>, _>>()?;
    panel.insert_column(output_column, values)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::RowKey;
    use proptest::prelude::*;

    #[test]
    fn midpoint_values() {
        let c = |p| centrism_transform(p, CentrismReference::Midpoint).unwrap();
        assert_eq!(c(5.0), 5.0);
        assert_eq!(c(0.0), 0.0);
        assert_eq!(c(10.0), 0.0);
        assert_eq!(c(2.5), 2.5);
        assert_eq!(extremism(2.5, CentrismReference::Midpoint).unwrap(), 2.5);
    }

    #[test]
    fn out_of_scale_is_domain_error() {
        assert!(matches!(centrism_transform(10.5, CentrismReference::Midpoint), Err(EconError::Domain(_))));
        assert!(centrism_transform(-0.1, CentrismReference::Midpoint).is_err());
        assert!(centrism_transform(3.0, CentrismReference::Median(12.0)).is_err());
    }

    #[test]
    fn median_mode_column() {
        let keys = (0..3).map(|i| RowKey::new("AT", i.to_string(), 2017)).collect();
        let mut p = PartyYearPanel::new(keys).unwrap();
        p.insert_column("position_econ", vec![Some(2.0), Some(4.0), Some(9.0)]).unwrap();
        add_centrism_column(&mut p, "position_econ", "c_med", CentrismMode::Median).unwrap();
        add_centrism_column(&mut p, "position_econ", "c_mid", CentrismMode::Midpoint).unwrap();
        assert_eq!(p.column("c_med").unwrap(), &[Some(3.0), Some(5.0), Some(0.0)]);
        assert_eq!(p.column("c_mid").unwrap(), &[Some(2.0), Some(4.0), Some(1.0)]);
    }

    proptest! {
        #[test]
        fn symmetric_about_reference(r in 0.0f64..=10.0, d in 0.0f64..=5.0) {
            prop_assume!(r + d <= 10.0 && r - d >= 0.0);
            let refr = CentrismReference::Median(r);
            let up = centrism_transform(r + d, refr).unwrap();
            let down = centrism_transform(r - d, refr).unwrap();
            prop_assert!((up - down).abs() < 1e-12);
        }
    }
}
