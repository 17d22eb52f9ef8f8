//! Expert-survey ingestion: typed reading of CHES-shaped delimited files and
//! aggregation of expert assessments to the party-year panel.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use thiserror::Error;

use crate::panel::{PanelError, PartyYearPanel, RowKey, SCALE_MAX, SCALE_MIN};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}, column `{column}`: {reason}")]
    Parse { line: usize, column: String, reason: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Panel(#[from] PanelError),
}

/// Known issue dimensions. Aliases map CHES variable stems onto canonical names.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionRegistry {
    names: Vec<String>,
    aliases: HashMap<String, String>,
}

impl Default for DimensionRegistry {
    fn default() -> Self {
        let names = ["economic", "social", "eu", "immigration", "environment"].map(String::from).to_vec();
        let aliases = [("lrecon", "economic"), ("galtan", "social"), ("eu_position", "eu"), ("immigrate_policy", "immigration")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        Self { names, aliases }
    }
}

impl DimensionRegistry {
    pub fn register(&mut self, name: impl Into<String>) {
        let name = name.into();
        if !self.names.contains(&name) {
            self.names.push(name);
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Canonical name for `name` or one of its aliases.
    pub fn resolve(&self, name: &str) -> Option<&str> {
        let name = name.trim();
        let canonical = self.aliases.get(name).map(String::as_str).unwrap_or(name);
        self.names.iter().find(|n| *n == canonical).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpertRow {
    pub expert_id: String,
    pub country: String,
    pub party_id: String,
    pub year: i32,
    pub dimension: String,
    pub position: f64,
    pub blurriness: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpertTable {
    pub rows: Vec<ExpertRow>,
}

fn check_scale(v: f64, line: usize, column: &str) -> Result<f64, IngestError> {
    if !v.is_finite() || !(SCALE_MIN..=SCALE_MAX).contains(&v) {
        return Err(IngestError::Parse {
            line,
            column: column.to_string(),
            reason: format!("value {v} outside the {SCALE_MIN}–{SCALE_MAX} scale"),
        });
    }
    Ok(v)
}

impl ExpertTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Appends a row after checking the 0–10 bounds.
    pub fn push(&mut self, row: ExpertRow) -> Result<(), IngestError> {
        let line = self.rows.len() + 2;
        check_scale(row.position, line, "position")?;
        if let Some(b) = row.blurriness {
            check_scale(b, line, "blurriness")?;
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn dimensions(&self) -> Vec<&str> {
        let mut seen: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !seen.contains(&r.dimension.as_str()) {
                seen.push(&r.dimension);
            }
        }
        seen
    }

    /// Canonical long layout: `expert_id,country,party_id,year,dimension,position,blurriness`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), IngestError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(SchemaMap::LONG_HEADER)?;
        for r in &self.rows {
            w.write_record([
                r.expert_id.as_str(),
                &r.country,
                &r.party_id,
                &r.year.to_string(),
                &r.dimension,
                &r.position.to_string(),
                &r.blurriness.map(|b| b.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_path(&self, path: impl AsRef<Path>) -> Result<(), IngestError> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WideDimension {
    pub dimension: String,
    pub position: String,
    pub blurriness: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Layout {
    /// One row per expert × party × dimension.
    Long { dimension: String, position: String, blurriness: Option<String> },
    /// One row per expert × party, one column pair per dimension (CHES style).
    Wide(Vec<WideDimension>),
}

/// Binds file columns to canonical fields.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaMap {
    pub expert_id: String,
    pub country: String,
    pub party_id: String,
    pub year: String,
    pub layout: Layout,
}

impl SchemaMap {
    pub const LONG_HEADER: [&'static str; 7] =
        ["expert_id", "country", "party_id", "year", "dimension", "position", "blurriness"];

    /// The layout written by [`ExpertTable::write_csv`].
    pub fn canonical() -> Self {
        Self {
            expert_id: "expert_id".into(),
            country: "country".into(),
            party_id: "party_id".into(),
            year: "year".into(),
            layout: Layout::Long {
                dimension: "dimension".into(),
                position: "position".into(),
                blurriness: Some("blurriness".into()),
            },
        }
    }
}

impl Default for SchemaMap {
    fn default() -> Self {
        Self::canonical()
    }
}

/// Comma-separated `field=column` bindings over the canonical layout.
/// Any key that is not a canonical field names a dimension and switches to
/// the wide layout, e.g. `country=cname,economic=lrecon:lrecon_blur`.
impl FromStr for SchemaMap {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut map = Self::canonical();
        let (mut dimension, mut position, mut blurriness) =
            ("dimension".to_string(), "position".to_string(), Some("blurriness".to_string()));
        let mut wide = Vec::new();
        for entry in s.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (k, v) = entry
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| IngestError::Schema(format!("binding `{entry}` is not field=column")))?;
            if v.is_empty() {
                return Err(IngestError::Schema(format!("binding for `{k}` is empty")));
            }
            match k {
                "expert_id" => map.expert_id = v.into(),
                "country" => map.country = v.into(),
                "party_id" => map.party_id = v.into(),
                "year" => map.year = v.into(),
                "dimension" => dimension = v.into(),
                "position" => position = v.into(),
                "blurriness" => blurriness = (v != "-").then(|| v.to_string()),
                dim => {
                    let (p, b) = match v.split_once(':') {
                        Some((p, b)) => (p.to_string(), Some(b.to_string())),
                        None => (v.to_string(), None),
                    };
                    wide.push(WideDimension { dimension: dim.into(), position: p, blurriness: b });
                }
            }
        }
        map.layout = if wide.is_empty() { Layout::Long { dimension, position, blurriness } } else { Layout::Wide(wide) };
        Ok(map)
    }
}

impl fmt::Display for SchemaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expert_id={},country={},party_id={},year={}", self.expert_id, self.country, self.party_id, self.year)?;
        match &self.layout {
            Layout::Long { dimension, position, blurriness } => {
                write!(f, ",dimension={dimension},position={position},blurriness={}", blurriness.as_deref().unwrap_or("-"))
            }
            Layout::Wide(dims) => {
                for d in dims {
                    write!(f, ",{}={}", d.dimension, d.position)?;
                    if let Some(b) = &d.blurriness {
                        write!(f, ":{b}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

fn parse_optional_scaled(field: &str, line: usize, column: &str) -> Result<Option<f64>, IngestError> {
    let field = field.trim();
    if field.is_empty() || field.eq_ignore_ascii_case("na") {
        return Ok(None);
    }
    let v = field
        .parse::<f64>()
        .map_err(|e| IngestError::Parse { line, column: column.into(), reason: e.to_string() })?;
    check_scale(v, line, column).map(Some)
}

/// Reads a header-bearing comma-separated expert file. Line numbers in
/// errors count the header as line 1.
pub fn read_expert_csv<R: Read>(
    input: R,
    schema: &SchemaMap,
    registry: &DimensionRegistry,
) -> Result<ExpertTable, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = rdr.headers()?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IngestError::Schema(format!("bound column `{name}` not in header")))
    };
    let (ei, ci, pi, yi) = (col(&schema.expert_id)?, col(&schema.country)?, col(&schema.party_id)?, col(&schema.year)?);
    enum Bound<'a> {
        Long { d: usize, p: usize, b: Option<usize> },
        Wide(Vec<(&'a str, &'a str, usize, Option<(&'a str, usize)>)>),
    }
    let bound = match &schema.layout {
        Layout::Long { dimension, position, blurriness } => Bound::Long {
            d: col(dimension)?,
            p: col(position)?,
            b: blurriness.as_deref().map(col).transpose()?,
        },
        Layout::Wide(dims) => Bound::Wide(
            dims.iter()
                .map(|w| {
                    let canonical = registry
                        .resolve(&w.dimension)
                        .ok_or_else(|| IngestError::Schema(format!("dimension `{}` is not registered", w.dimension)))?;
                    let b = match &w.blurriness {
                        Some(b) => Some((b.as_str(), col(b)?)),
                        None => None,
                    };
                    Ok((canonical, w.position.as_str(), col(&w.position)?, b))
                })
                .collect::<Result<_, IngestError>>()?,
        ),
    };

    let mut table = ExpertTable::default();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = n + 2;
        let text = |i: usize, name: &str| -> Result<String, IngestError> {
            let v = rec.get(i).unwrap_or("").trim();
            if v.is_empty() {
                return Err(IngestError::Parse { line, column: name.into(), reason: "empty required field".into() });
            }
            Ok(v.to_string())
        };
        let expert_id = text(ei, &schema.expert_id)?;
        let country = text(ci, &schema.country)?;
        let party_id = text(pi, &schema.party_id)?;
        let year_text = text(yi, &schema.year)?;
        let year = year_text.parse::<f64>().ok().filter(|y| y.fract() == 0.0).map(|y| y as i32).ok_or_else(|| {
            IngestError::Parse { line, column: schema.year.clone(), reason: format!("`{year_text}` is not a year") }
        })?;
        let base = |dimension: &str, position: f64, blurriness: Option<f64>| ExpertRow {
            expert_id: expert_id.clone(),
            country: country.clone(),
            party_id: party_id.clone(),
            year,
            dimension: dimension.to_string(),
            position,
            blurriness,
        };
        match &bound {
            Bound::Long { d, p, b } => {
                let Layout::Long { dimension, position, blurriness } = &schema.layout else { unreachable!() };
                let raw_dim = text(*d, dimension)?;
                let dim = registry.resolve(&raw_dim).ok_or_else(|| IngestError::Parse {
                    line,
                    column: dimension.clone(),
                    reason: format!("unknown dimension `{raw_dim}`"),
                })?;
                let pos = parse_optional_scaled(rec.get(*p).unwrap_or(""), line, position)?.ok_or_else(|| {
                    IngestError::Parse { line, column: position.clone(), reason: "empty required field".into() }
                })?;
                let blur = match (b, blurriness) {
                    (Some(i), Some(name)) => parse_optional_scaled(rec.get(*i).unwrap_or(""), line, name)?,
                    _ => None,
                };
                table.rows.push(base(dim, pos, blur));
            }
            Bound::Wide(dims) => {
                for (dim, pos_name, pi, blur) in dims {
                    // Experts often skip dimensions; a missing position skips the cell.
                    let Some(pos) = parse_optional_scaled(rec.get(*pi).unwrap_or(""), line, pos_name)? else {
                        continue;
                    };
                    let blur = match blur {
                        Some((name, i)) => parse_optional_scaled(rec.get(*i).unwrap_or(""), line, name)?,
                        None => None,
                    };
                    table.rows.push(base(dim, pos, blur));
                }
            }
        }
    }
    Ok(table)
}

pub fn read_expert_table(
    path: impl AsRef<Path>,
    schema: &SchemaMap,
    registry: &DimensionRegistry,
) -> Result<ExpertTable, IngestError> {
    read_expert_csv(std::fs::File::open(path)?, schema, registry)
}

/// Which expert groups survive aggregation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AggregationPolicy {
    /// Groups with fewer experts are dropped (0 keeps everything).
    pub min_experts: usize,
    /// Dimensions to keep; `None` keeps all.
    pub dimensions: Option<Vec<String>>,
    /// Waves to keep; `None` keeps all.
    pub year_filter: Option<Vec<i32>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregation {
    pub panel: PartyYearPanel,
    /// Party × year × dimension groups considered (after dimension and year filters).
    pub total_groups: usize,
    pub dropped_groups: usize,
    pub retained_groups: usize,
}

pub fn position_column(dimension: &str) -> String {
    format!("position_{dimension}")
}

pub fn blurriness_column(dimension: &str) -> String {
    format!("blurriness_{dimension}")
}

/// The alternative blurriness measure: SD of expert position assessments.
pub fn position_sd_column(dimension: &str) -> String {
    format!("position_sd_{dimension}")
}

pub fn n_experts_column(dimension: &str) -> String {
    format!("n_experts_{dimension}")
}

/// Mean computed as an offset from the first value, so identical inputs
/// return that value exactly.
fn mean(values: &[f64]) -> f64 {
    let first = values[0];
    first + values.iter().map(|v| v - first).sum::<f64>() / values.len() as f64
}

/// Sample SD (n−1); 0 for a single value.
fn sample_sd(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

/// Averages experts per party × year × dimension into panel columns
/// `position_<d>`, `blurriness_<d>`, `position_sd_<d>` and `n_experts_<d>`.
/// Values are sorted before summing, so the result does not depend on row order.
pub fn aggregate_party_year(table: &ExpertTable, policy: &AggregationPolicy) -> Result<Aggregation, IngestError> {
    let keep_dim = |d: &str| policy.dimensions.as_ref().is_none_or(|ds| ds.iter().any(|x| x == d));
    let keep_year = |y: i32| policy.year_filter.as_ref().is_none_or(|ys| ys.contains(&y));

    type Group = (Vec<f64>, Vec<f64>);
    let mut groups: IndexMap<(RowKey, String), Group> = IndexMap::new();
    let mut keys: IndexMap<RowKey, ()> = IndexMap::new();
    let mut dims: Vec<String> = Vec::new();
    for r in table.rows.iter().filter(|r| keep_dim(&r.dimension) && keep_year(r.year)) {
        let key = RowKey::new(&r.country, &r.party_id, r.year);
        let g = groups.entry((key.clone(), r.dimension.clone())).or_default();
        g.0.push(r.position);
        if let Some(b) = r.blurriness {
            g.1.push(b);
        }
        if !dims.contains(&r.dimension) {
            dims.push(r.dimension.clone());
        }
        keys.entry(key).or_insert(());
    }
    let total_groups = groups.len();
    groups.retain(|_, g| g.0.len() >= policy.min_experts);
    let retained_groups = groups.len();
    let retained_keys: BTreeSet<&RowKey> = groups.keys().map(|(k, _)| k).collect();
    let row_keys: Vec<RowKey> = keys.keys().filter(|k| retained_keys.contains(k)).cloned().collect();
    let index: HashMap<&RowKey, usize> = row_keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let n = row_keys.len();

    let mut cols: IndexMap<String, Vec<Option<f64>>> = IndexMap::new();
    for d in &dims {
        for c in [position_column(d), blurriness_column(d), position_sd_column(d), n_experts_column(d)] {
            cols.insert(c, vec![None; n]);
        }
    }
    for ((key, d), (mut pos, mut blur)) in groups {
        let r = index[&key];
        pos.sort_by(f64::total_cmp);
        blur.sort_by(f64::total_cmp);
        cols[&position_column(&d)][r] = Some(mean(&pos));
        cols[&blurriness_column(&d)][r] = (!blur.is_empty()).then(|| mean(&blur));
        cols[&position_sd_column(&d)][r] = Some(sample_sd(&pos));
        cols[&n_experts_column(&d)][r] = Some(pos.len() as f64);
    }
    let mut panel = PartyYearPanel::new(row_keys)?;
    for (name, values) in cols {
        panel.insert_column(name, values)?;
    }
    Ok(Aggregation { panel, total_groups, dropped_groups: total_groups - retained_groups, retained_groups })
}

#[cfg(test)]
mod tests {
    use super::*;

    const LONG: &str = "expert_id,country,party_id,year,dimension,position,blurriness\n\
        e1,DE,P1,2017,economic,4,2\n\
        e2,DE,P1,2017,economic,6,\n\
        e1,DE,P1,2017,galtan,3,1\n";

    #[test]
    fn reads_long_rows() {
        let t = read_expert_csv(LONG.as_bytes(), &SchemaMap::canonical(), &DimensionRegistry::default()).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.rows[1].blurriness, None);
        assert_eq!(t.rows[2].dimension, "social");
    }

    #[test]
    fn out_of_scale_cites_line() {
        let bad = LONG.replace("e2,DE,P1,2017,economic,6,", "e2,DE,P1,2017,economic,11,");
        let err = read_expert_csv(bad.as_bytes(), &SchemaMap::canonical(), &DimensionRegistry::default()).unwrap_err();
        match err {
            IngestError::Parse { line, reason, .. } => {
                assert_eq!(line, 3);
                assert!(reason.contains("0–10"), "{reason}");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn missing_binding_is_schema_error() {
        let schema: SchemaMap = "country=cname".parse().unwrap();
        let err = read_expert_csv(LONG.as_bytes(), &schema, &DimensionRegistry::default()).unwrap_err();
        assert!(matches!(err, IngestError::Schema(_)));
    }

    #[test]
    fn wide_layout() {
        let text = "id,cname,party,year,lrecon,lrecon_blur,galtan\nx,NL,A,2019,2.5,1,\ny,NL,A,2019,3.5,na,7\n";
        let schema: SchemaMap =
            "expert_id=id,country=cname,party_id=party,economic=lrecon:lrecon_blur,galtan=galtan".parse().unwrap();
        let t = read_expert_csv(text.as_bytes(), &schema, &DimensionRegistry::default()).unwrap();
        assert_eq!(t.len(), 3);
        let agg = aggregate_party_year(&t, &AggregationPolicy::default()).unwrap();
        assert_eq!(agg.panel.value("position_economic", 0).unwrap(), Some(3.0));
        assert_eq!(agg.panel.value("blurriness_economic", 0).unwrap(), Some(1.0));
        assert_eq!(agg.panel.value("n_experts_social", 0).unwrap(), Some(1.0));
        assert_eq!(schema.to_string().parse::<SchemaMap>().unwrap(), schema);
    }

    #[test]
    fn single_expert_and_min_experts() {
        let t = read_expert_csv(LONG.as_bytes(), &SchemaMap::canonical(), &DimensionRegistry::default()).unwrap();
        let agg = aggregate_party_year(&t, &AggregationPolicy::default()).unwrap();
        assert_eq!(agg.panel.value("position_social", 0).unwrap(), Some(3.0));
        assert_eq!(agg.panel.value("position_sd_social", 0).unwrap(), Some(0.0));
        let sd = agg.panel.value("position_sd_economic", 0).unwrap().unwrap();
        assert!((sd - 2f64.sqrt()).abs() < 1e-12);
        let strict = aggregate_party_year(&t, &AggregationPolicy { min_experts: 2, ..Default::default() }).unwrap();
        assert_eq!((strict.total_groups, strict.dropped_groups, strict.retained_groups), (2, 1, 1));
        assert_eq!(strict.panel.value("position_social", 0).unwrap(), None);
    }

    #[test]
    fn write_then_read_round_trips() {
        let t = read_expert_csv(LONG.as_bytes(), &SchemaMap::canonical(), &DimensionRegistry::default()).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = read_expert_csv(buf.as_slice(), &SchemaMap::canonical(), &DimensionRegistry::default()).unwrap();
        assert_eq!(back, t);
    }
}
