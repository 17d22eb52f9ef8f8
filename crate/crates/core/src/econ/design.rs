use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::{AbsorbOptions, EconError};
use crate::panel::{Grouping, PartyYearPanel};

/// A regressor built from panel columns.
#[derive(Debug, Clone)]
pub enum Term {
    /// Intercept, added automatically when no fixed effects are absorbed.
    Constant,
    Column(String),
    Square(String),
    Product(Vec<String>),
}

impl Term {
    pub fn column(name: impl Into<String>) -> Self {
        Term::Column(name.into())
    }

    pub fn square(name: impl Into<String>) -> Self {
        Term::Square(name.into())
    }

    pub fn product<S: Into<String>>(factors: impl IntoIterator<Item = S>) -> Self {
        let factors: Vec<String> = factors.into_iter().map(Into::into).collect();
        if factors.len() == 1 {
            Term::Column(factors.into_iter().next().expect("one factor"))
        } else {
            Term::Product(factors)
        }
    }

    pub fn name(&self) -> String {
        match self {
            Term::Constant => "_cons".into(),
            Term::Column(c) => c.clone(),
            Term::Square(c) => format!("{c}^2"),
            Term::Product(fs) => fs.join("*"),
        }
    }

    /// Order-insensitive identity used to de-duplicate terms.
    pub fn key(&self) -> Vec<String> {
        match self {
            Term::Constant => vec![],
            Term::Column(c) => vec![c.clone()],
            Term::Square(c) => vec![c.clone(), c.clone()],
            Term::Product(fs) => {
                let mut fs = fs.clone();
                fs.sort();
                fs
            }
        }
    }

    pub fn columns(&self) -> Vec<&str> {
        match self {
            Term::Constant => vec![],
            Term::Column(c) | Term::Square(c) => vec![c.as_str()],
            Term::Product(fs) => fs.iter().map(String::as_str).collect(),
        }
    }

    pub fn evaluate(&self, panel: &PartyYearPanel, row: usize) -> Result<Option<f64>, EconError> {
        Ok(match self {
            Term::Constant => Some(1.0),
            Term::Column(c) => panel.value(c, row)?,
            Term::Square(c) => panel.value(c, row)?.map(|v| v * v),
            Term::Product(fs) => {
                let mut acc = Some(1.0);
                for f in fs {
                    acc = match (acc, panel.value(f, row)?) {
                        (Some(a), Some(v)) => Some(a * v),
                        _ => None,
                    };
                }
                acc
            }
        })
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key() && matches!(self, Term::Constant) == matches!(other, Term::Constant)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `x`, `x^2`, `a*b*c`, or `_cons`.
impl FromStr for Term {
    type Err = EconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || EconError::Domain(format!("cannot parse term `{s}`"));
        if s.is_empty() {
            return Err(bad());
        }
        if s == "_cons" {
            return Ok(Term::Constant);
        }
        if let Some(base) = s.strip_suffix("^2") {
            return if base.is_empty() || base.contains('*') { Err(bad()) } else { Ok(Term::square(base)) };
        }
        if s.contains('*') {
            let factors: Vec<&str> = s.split('*').map(str::trim).collect();
            if factors.iter().any(|f| f.is_empty()) {
                return Err(bad());
            }
            return Ok(Term::product(factors));
        }
        Ok(Term::column(s))
    }
}

/// Instruments for one endogenous regressor.
#[derive(Debug, Clone, PartialEq)]
pub struct InstrumentSpec {
    pub endogenous: Term,
    pub instruments: Vec<Term>,
}

/// Regression specification: outcome, ordered regressors, absorbed fixed
/// effects, cluster dimension and optional instruments.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpec {
    pub outcome: String,
    pub regressors: Vec<Term>,
    pub fe_dims: Vec<Grouping>,
    pub cluster: Grouping,
    pub instruments: Vec<InstrumentSpec>,
    pub absorb: AbsorbOptions,
    /// Drop regressors fully absorbed by the fixed effects instead of
    /// failing with a rank error.
    pub omit_absorbed: bool,
}

impl DesignSpec {
    /// Country×year fixed effects, party clusters.
    pub fn new(outcome: impl Into<String>) -> Self {
        Self {
            outcome: outcome.into(),
            regressors: Vec::new(),
            fe_dims: vec![Grouping::CountryYear],
            cluster: Grouping::Party,
            instruments: Vec::new(),
            absorb: AbsorbOptions::default(),
            omit_absorbed: false,
        }
    }

    pub fn regressor(mut self, term: Term) -> Self {
        self.regressors.push(term);
        self
    }

    pub fn regressors(mut self, terms: impl IntoIterator<Item = Term>) -> Self {
        self.regressors.extend(terms);
        self
    }

    pub fn fixed_effects(mut self, dims: impl IntoIterator<Item = Grouping>) -> Self {
        self.fe_dims = dims.into_iter().collect();
        self
    }

    pub fn cluster(mut self, cluster: Grouping) -> Self {
        self.cluster = cluster;
        self
    }

    pub fn instrument(mut self, endogenous: Term, instruments: impl IntoIterator<Item = Term>) -> Self {
        self.instruments.push(InstrumentSpec { endogenous, instruments: instruments.into_iter().collect() });
        self
    }

    pub fn is_iv(&self) -> bool {
        !self.instruments.is_empty()
    }

    /// Regressors in estimation order, with `_cons` first when no FE is absorbed.
    pub fn estimation_terms(&self) -> Vec<Term> {
        let mut terms = Vec::with_capacity(self.regressors.len() + 1);
        if self.fe_dims.is_empty() && !self.regressors.contains(&Term::Constant) {
            terms.push(Term::Constant);
        }
        terms.extend(self.regressors.iter().cloned());
        terms
    }

    pub fn is_endogenous(&self, term: &Term) -> bool {
        self.instruments.iter().any(|i| &i.endogenous == term)
    }

    /// Excluded instruments, de-duplicated, in first-mention order.
    pub fn excluded_instruments(&self) -> Vec<Term> {
        let mut out: Vec<Term> = Vec::new();
        for t in self.instruments.iter().flat_map(|i| &i.instruments) {
            if !out.contains(t) {
                out.push(t.clone());
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), EconError> {
        if self.regressors.is_empty() {
            return Err(EconError::Domain("design has no regressors".into()));
        }
        let mut seen = BTreeSet::new();
        for t in &self.regressors {
            if !seen.insert(t.key()) {
                return Err(EconError::Domain(format!("regressor `{t}` listed twice")));
            }
        }
        for inst in &self.instruments {
            if !self.regressors.contains(&inst.endogenous) {
                return Err(EconError::Domain(format!(
                    "endogenous term `{}` is not among the regressors",
                    inst.endogenous
                )));
            }
        }
        let mut endog: Vec<&Term> = Vec::new();
        for inst in &self.instruments {
            if !endog.contains(&&inst.endogenous) {
                endog.push(&inst.endogenous);
            }
        }
        let n_endog = endog.len();
        let n_excluded = self.excluded_instruments().len();
        if n_excluded < n_endog {
            return Err(EconError::Domain(format!(
                "order condition fails: {n_excluded} excluded instruments for {n_endog} endogenous terms"
            )));
        }
        Ok(())
    }
}
