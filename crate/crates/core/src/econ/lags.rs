use std::collections::HashMap;

use super::EconError;
use crate::panel::PartyYearPanel;

pub fn lag_column_name(column: &str, order: usize) -> String {
    format!("{column}_lag{order}")
}

/// Adds `<column>_lag<order>` for each column. A lag is the same party's value
/// `order` waves earlier in the panel's wave sequence; it is missing when the
/// party was not observed in that wave.
pub fn build_lags(panel: &PartyYearPanel, columns: &[&str], order: usize) -> Result<PartyYearPanel, EconError> {
    if order == 0 {
        return Err(EconError::Domain("lag order must be positive".into()));
    }
    let waves = panel.waves();
    let wave_index: HashMap<i32, usize> = waves.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let row_of: HashMap<(&str, &str, usize), usize> = panel
        .keys()
        .iter()
        .enumerate()
        .map(|(r, k)| ((k.country.as_str(), k.party_id.as_str(), wave_index[&k.year]), r))
        .collect();
    let source_rows: Vec<Option<usize>> = panel
        .keys()
        .iter()
        .map(|k| {
            let w = wave_index[&k.year];
            w.checked_sub(order)
                .and_then(|prev| row_of.get(&(k.country.as_str(), k.party_id.as_str(), prev)).copied())
        })
        .collect();
    let mut out = panel.clone();
    for column in columns {
        let values = panel.column(column)?;
        let lagged = source_rows.iter().map(|src| src.and_then(|r| values[r])).collect();
        out.insert_column(lag_column_name(column, order), lagged)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::RowKey;

    #[test]
    fn lags_follow_party_across_waves() {
        let keys = vec![
            RowKey::new("AT", "1", 2017),
            RowKey::new("AT", "1", 2019),
            RowKey::new("AT", "2", 2019),
            RowKey::new("AT", "3", 2014),
            RowKey::new("AT", "3", 2019),
        ];
        let mut p = PartyYearPanel::new(keys).unwrap();
        p.insert_dense("position_econ", vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        p.insert_dense("k", vec![7.0; 5]).unwrap();
        let out = build_lags(&p, &["position_econ", "k"], 1).unwrap();
        // waves are 2014, 2017, 2019: party 3 skipped 2017, so its 2019 lag is missing
        assert_eq!(out.column("position_econ_lag1").unwrap(), &[None, Some(1.0), None, None, None]);
        assert_eq!(out.column("k_lag1").unwrap(), &[None, Some(7.0), None, None, None]);
        let two = build_lags(&p, &["position_econ"], 2).unwrap();
        assert_eq!(two.column("position_econ_lag2").unwrap(), &[None, None, None, None, Some(4.0)]);
        assert!(build_lags(&p, &["nope"], 1).is_err());
        assert!(build_lags(&p, &["k"], 0).is_err());
    }
}
