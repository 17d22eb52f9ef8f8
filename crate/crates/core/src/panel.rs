//! Rectangular party × wave table.
//!
//! Rows are keyed by `(country, party_id, year)`; a party's identity is the
//! `(country, party_id)` pair. Value columns are `Option<f64>` so missing data
//! stays explicit. Columns whose name starts with `position` or `blurriness`
//! are on the 0–10 expert scale and are range-checked on insertion.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use thiserror::Error;

pub const SCALE_MIN: f64 = 0.0;
pub const SCALE_MAX: f64 = 10.0;

#[derive(Debug, Error)]
pub enum PanelError {
    #[error("duplicate row key ({country}, {party}, {year})")]
    DuplicateKey { country: String, party: String, year: i32 },
    #[error("column `{column}` has {got} values, panel has {expected} rows")]
    LengthMismatch { column: String, expected: usize, got: usize },
    #[error("column `{column}` row {row}: {value} is outside the 0-10 scale")]
    OutOfScale { column: String, row: usize, value: f64 },
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("line {line}, column `{column}`: {reason}")]
    Parse { line: usize, column: String, reason: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Row groupings used for fixed effects and clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grouping {
    Country,
    Year,
    CountryYear,
    Party,
}

impl Grouping {
    pub fn label(self) -> &'static str {
        match self {
            Grouping::Country => "country",
            Grouping::Year => "year",
            Grouping::CountryYear => "country_year",
            Grouping::Party => "party",
        }
    }
}

impl fmt::Display for Grouping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Grouping {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "country" => Ok(Grouping::Country),
            "year" | "wave" => Ok(Grouping::Year),
            "country_year" | "country×year" | "countryyear" | "ct" => Ok(Grouping::CountryYear),
            "party" => Ok(Grouping::Party),
            other => Err(format!("unknown grouping `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowKey {
    pub country: String,
    pub party_id: String,
    pub year: i32,
}

impl RowKey {
    pub fn new(country: impl Into<String>, party_id: impl Into<String>, year: i32) -> Self {
        Self { country: country.into(), party_id: party_id.into(), year }
    }
}

pub fn is_scaled_column(name: &str) -> bool {
    name.starts_with("position") || name.starts_with("blurriness")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PartyYearPanel {
    keys: Vec<RowKey>,
    columns: IndexMap<String, Vec<Option<f64>>>,
}

impl PartyYearPanel {
    pub fn new(keys: Vec<RowKey>) -> Result<Self, PanelError> {
        let mut seen = HashSet::with_capacity(keys.len());
        for k in &keys {
            if !seen.insert(k) {
                return Err(PanelError::DuplicateKey {
                    country: k.country.clone(),
                    party: k.party_id.clone(),
                    year: k.year,
                });
            }
        }
        Ok(Self { keys, columns: IndexMap::new() })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[RowKey] {
        &self.keys
    }

    pub fn key(&self, row: usize) -> &RowKey {
        &self.keys[row]
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.keys().map(String::as_str)
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.columns.contains_key(name)
    }

    pub fn column(&self, name: &str) -> Result<&[Option<f64>], PanelError> {
        self.columns.get(name).map(Vec::as_slice).ok_or_else(|| PanelError::UnknownColumn(name.to_string()))
    }

    pub fn value(&self, name: &str, row: usize) -> Result<Option<f64>, PanelError> {
        Ok(self.column(name)?[row])
    }

    /// Adds or replaces a column.
    pub fn insert_column(&mut self, name: impl Into<String>, values: Vec<Option<f64>>) -> Result<(), PanelError> {
        let name = name.into();
        if values.len() != self.len() {
            return Err(PanelError::LengthMismatch { column: name, expected: self.len(), got: values.len() });
        }
        if is_scaled_column(&name) {
            if let Some((row, v)) = values
                .iter()
                .enumerate()
                .find_map(|(i, v)| v.filter(|x| !(SCALE_MIN..=SCALE_MAX).contains(x)).map(|x| (i, x)))
            {
                return Err(PanelError::OutOfScale { column: name, row, value: v });
            }
        }
        self.columns.insert(name, values);
        Ok(())
    }

    pub fn insert_dense(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<(), PanelError> {
        self.insert_column(name, values.into_iter().map(Some).collect())
    }

    pub fn remove_column(&mut self, name: &str) -> Option<Vec<Option<f64>>> {
        self.columns.shift_remove(name)
    }

    /// Sorted distinct survey years.
    pub fn waves(&self) -> Vec<i32> {
        self.keys.iter().map(|k| k.year).collect::<BTreeSet<_>>().into_iter().collect()
    }

    pub fn n_parties(&self) -> usize {
        self.keys.iter().map(|k| (&k.country, &k.party_id)).collect::<HashSet<_>>().len()
    }

    /// Dense group ids (first-appearance order) for the given rows.
    pub fn group_ids(&self, grouping: Grouping, rows: &[usize]) -> (Vec<usize>, usize) {
        let mut index: HashMap<(&str, &str, i32), usize> = HashMap::new();
        let ids = rows
            .iter()
            .map(|&r| {
                let k = &self.keys[r];
                let key = match grouping {
                    Grouping::Country => (k.country.as_str(), "", 0),
                    Grouping::Year => ("", "", k.year),
                    Grouping::CountryYear => (k.country.as_str(), "", k.year),
                    Grouping::Party => (k.country.as_str(), k.party_id.as_str(), 0),
                };
                let next = index.len();
                *index.entry(key).or_insert(next)
            })
            .collect();
        (ids, index.len())
    }

    /// Keeps only rows where `keep` is true, preserving order.
    pub fn filter_rows(&self, keep: impl Fn(usize, &RowKey) -> bool) -> Self {
        let rows: Vec<usize> = (0..self.len()).filter(|&r| keep(r, &self.keys[r])).collect();
        self.select_rows(&rows)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            keys: rows.iter().map(|&r| self.keys[r].clone()).collect(),
            columns: self
                .columns
                .iter()
                .map(|(name, col)| (name.clone(), rows.iter().map(|&r| col[r]).collect()))
                .collect(),
        }
    }

    pub fn row_of(&self, key: &RowKey) -> Option<usize> {
        self.keys.iter().position(|k| k == key)
    }

    /// `country,party_id,year,<columns…>`; missing values are empty fields.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), PanelError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["country", "party_id", "year"];
        header.extend(self.columns.keys().map(String::as_str));
        w.write_record(&header)?;
        for (r, k) in self.keys.iter().enumerate() {
            let mut rec = vec![k.country.clone(), k.party_id.clone(), k.year.to_string()];
            rec.extend(self.columns.values().map(|c| c[r].map(|v| v.to_string()).unwrap_or_default()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, PanelError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let header = rdr.headers()?.clone();
        let pos = |name: &str| {
            header.iter().position(|h| h == name).ok_or_else(|| PanelError::Parse {
                line: 1,
                column: name.to_string(),
                reason: "required header missing".into(),
            })
        };
        let (ci, pi, yi) = (pos("country")?, pos("party_id")?, pos("year")?);
        let value_cols: Vec<(usize, String)> = header
            .iter()
            .enumerate()
            .filter(|(i, _)| ![ci, pi, yi].contains(i))
            .map(|(i, h)| (i, h.to_string()))
            .collect();
        let mut keys = Vec::new();
        let mut values: Vec<Vec<Option<f64>>> = vec![Vec::new(); value_cols.len()];
        for (n, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = n + 2;
            let year = rec[yi].parse::<i32>().map_err(|e| PanelError::Parse {
                line,
                column: "year".into(),
                reason: e.to_string(),
            })?;
            keys.push(RowKey::new(&rec[ci], &rec[pi], year));
            for (slot, (i, name)) in values.iter_mut().zip(&value_cols) {
                let field = &rec[*i];
                slot.push(if field.is_empty() || field.eq_ignore_ascii_case("na") {
                    None
                } else {
                    Some(field.parse::<f64>().map_err(|e| PanelError::Parse {
                        line,
                        column: name.clone(),
                        reason: e.to_string(),
                    })?)
                });
            }
        }
        let mut panel = Self::new(keys)?;
        for ((_, name), col) in value_cols.into_iter().zip(values) {
            panel.insert_column(name, col)?;
        }
        Ok(panel)
    }

    pub fn write_csv_path(&self, path: impl AsRef<Path>) -> Result<(), PanelError> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn read_csv_path(path: impl AsRef<Path>) -> Result<Self, PanelError> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> PartyYearPanel {
        let keys = vec![
            RowKey::new("AT", "1", 2017),
            RowKey::new("AT", "1", 2019),
            RowKey::new("AT", "2", 2019),
            RowKey::new("BE", "1", 2017),
        ];
        let mut p = PartyYearPanel::new(keys).unwrap();
        p.insert_column("position_econ", vec![Some(2.0), Some(2.5), None, Some(9.0)]).unwrap();
        p
    }

    #[test]
    fn rejects_duplicate_keys() {
        let keys = vec![RowKey::new("AT", "1", 2017), RowKey::new("AT", "1", 2017)];
        assert!(matches!(PartyYearPanel::new(keys), Err(PanelError::DuplicateKey { .. })));
    }

    #[test]
    fn enforces_scale_on_scaled_columns() {
        let mut p = small();
        let err = p.insert_column("blurriness_econ", vec![Some(1.0), Some(11.0), None, None]).unwrap_err();
        assert!(matches!(err, PanelError::OutOfScale { row: 1, .. }));
        p.insert_column("gdp_growth", vec![Some(-3.0), Some(11.0), None, None]).unwrap();
        assert!(p.insert_column("x", vec![None]).is_err());
    }

    #[test]
    fn grouping_ids() {
        let p = small();
        let rows: Vec<usize> = (0..p.len()).collect();
        assert_eq!(p.group_ids(Grouping::Party, &rows), (vec![0, 0, 1, 2], 3));
        assert_eq!(p.group_ids(Grouping::CountryYear, &rows), (vec![0, 1, 1, 2], 3));
        assert_eq!(p.group_ids(Grouping::Year, &rows), (vec![0, 1, 1, 0], 2));
        assert_eq!(p.waves(), vec![2017, 2019]);
        assert_eq!(p.n_parties(), 3);
        assert_eq!("country_year".parse::<Grouping>().unwrap(), Grouping::CountryYear);
    }

    #[test]
    fn csv_round_trip_preserves_missing() {
        let p = small();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let back = PartyYearPanel::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn csv_parse_errors_carry_line() {
        let text = "country,party_id,year,position_econ\nAT,1,2017,abc\n";
        match PartyYearPanel::read_csv(text.as_bytes()) {
            Err(PanelError::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, "position_econ");
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
