//! Two-party ambiguity game between a centrist and an extremist party.
//!
//! Each party either commits to a position or stays ambiguous. A committing
//! party's realized deviation from the median voter's ideal point is uniform
//! on its commit set and is observed by the voter before the election. An
//! ambiguous party is judged by the expected utility of the uniform lottery
//! over its (wider) ambiguous set. The median voter elects whichever party
//! gives the higher evaluation; exact ties split the win 1/2–1/2.
//!
//! Committing parties do not pick a location inside their commit set. The
//! uniform draw is what produces the 1/5, 3/5 and 2/5 win probabilities of the
//! canonical game, so every probability here is obtained by enumerating joint
//! realizations and is an exact ratio whenever the risk exponent is an integer.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Tolerance used when a non-integer risk exponent forces floating evaluation.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse `{0}` as a rational number")]
    ParseRational(String),
}

/// Parses `"6/5"`, `"1.2"`, `"-3"` or `"1.5e-2"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, GameError> {
    let s = text.trim();
    let bad = || GameError::ParseRational(text.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_rational(num)?;
        let den = parse_rational(den)?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(num / den);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&all_digits).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Formats a rational as `num/den`, including integers (`2/1`).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A voter evaluation: exact when the risk exponent is an integer.
#[derive(Debug, Clone, PartialEq)]
pub enum Utility {
    Exact(Rational),
    Approx(f64),
}

impl Utility {
    pub fn to_f64(&self) -> f64 {
        match self {
            Utility::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Utility::Approx(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Utility::Exact(r) => Some(r),
            Utility::Approx(_) => None,
        }
    }

    /// Exact comparison for rationals, tolerance-based otherwise.
    pub fn compare(&self, other: &Utility) -> Ordering {
        match (self, other) {
            (Utility::Exact(a), Utility::Exact(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                let scale = 1.0_f64.max(a.abs()).max(b.abs());
                if (a - b).abs() <= FLOAT_TOLERANCE * scale {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }
}

impl fmt::Display for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Utility::Exact(r) => write!(f, "{}", format_rational(r)),
            Utility::Approx(x) => write!(f, "{x}"),
        }
    }
}

/// Finite, strictly increasing set of policy deviations from the median
/// voter's ideal point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeviationSet(Vec<Rational>);

impl DeviationSet {
    pub fn new(values: Vec<Rational>) -> Result<Self, GameError> {
        if values.is_empty() {
            return Err(GameError::Domain("deviation set must be non-empty".into()));
        }
        if let Some(w) = values.windows(2).find(|w| w[0] >= w[1]) {
            return Err(GameError::Domain(format!(
                "deviation set must be strictly increasing ({} is followed by {})",
                format_rational(&w[0]),
                format_rational(&w[1])
            )));
        }
        Ok(Self(values))
    }

    /// Sorts the input; duplicates are still rejected.
    pub fn from_unordered(mut values: Vec<Rational>) -> Result<Self, GameError> {
        values.sort();
        Self::new(values)
    }

    /// `{-m_n, ..., -m_1, 0, m_1, ..., m_n}` for strictly increasing positive magnitudes.
    pub fn symmetric(magnitudes: &[Rational]) -> Result<Self, GameError> {
        let mut values: Vec<Rational> = magnitudes.iter().rev().map(|m| -m.clone()).collect();
        values.push(Rational::zero());
        values.extend(magnitudes.iter().cloned());
        Self::new(values)
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.0.binary_search(value).is_ok()
    }

    pub fn is_subset_of(&self, other: &DeviationSet) -> bool {
        self.0.iter().all(|v| other.contains(v))
    }
}

/// Median voter's utility `-|x|^risk_exponent` over realized deviations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VoterUtility {
    risk_exponent: Rational,
}

impl VoterUtility {
    pub fn new(risk_exponent: Rational) -> Result<Self, GameError> {
        if risk_exponent < Rational::one() {
            return Err(GameError::Domain(format!(
                "risk exponent must be at least 1, got {}",
                format_rational(&risk_exponent)
            )));
        }
        if risk_exponent.is_integer() && risk_exponent.to_integer() > BigInt::from(u16::MAX) {
            return Err(GameError::Domain("risk exponent too large".into()));
        }
        Ok(Self { risk_exponent })
    }

    pub fn quadratic() -> Self {
        Self { risk_exponent: Rational::from_integer(BigInt::from(2)) }
    }

    pub fn risk_exponent(&self) -> &Rational {
        &self.risk_exponent
    }

    /// Integer exponents keep every evaluation exact.
    pub fn is_exact(&self) -> bool {
        self.risk_exponent.is_integer()
    }

    pub fn evaluate(&self, deviation: &Rational) -> Utility {
        if self.is_exact() {
            let n = self.risk_exponent.to_integer().to_usize().expect("bounded exponent");
            Utility::Exact(-num_traits::pow(deviation.abs(), n))
        } else {
            let x = deviation.abs().to_f64().unwrap_or(f64::INFINITY);
            let p = self.risk_exponent.to_f64().unwrap_or(f64::INFINITY);
            Utility::Approx(-x.powf(p))
        }
    }
}

impl Default for VoterUtility {
    fn default() -> Self {
        Self::quadratic()
    }
}

/// Expected utility of the uniform lottery over `set`.
pub fn lottery_expected_utility(set: &DeviationSet, utility: &VoterUtility) -> Utility {
    let n = set.len();
    if utility.is_exact() {
        let total = set.values().iter().fold(Rational::zero(), |acc, v| {
            match utility.evaluate(v) {
                Utility::Exact(u) => acc + u,
                Utility::Approx(_) => unreachable!("integer exponent evaluates exactly"),
            }
        });
        Utility::Exact(total / Rational::from_integer(BigInt::from(n)))
    } else {
        let total: f64 = set.values().iter().map(|v| utility.evaluate(v).to_f64()).sum();
        Utility::Approx(total / n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    Centrist,
    Extremist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetaAction {
    Ambiguous,
    Commit,
}

impl MetaAction {
    pub const ALL: [MetaAction; 2] = [MetaAction::Ambiguous, MetaAction::Commit];

    pub fn code(self) -> char {
        match self {
            MetaAction::Ambiguous => 'A',
            MetaAction::Commit => 'C',
        }
    }

    pub fn other(self) -> MetaAction {
        match self {
            MetaAction::Ambiguous => MetaAction::Commit,
            MetaAction::Commit => MetaAction::Ambiguous,
        }
    }

    fn index(self) -> usize {
        match self {
            MetaAction::Ambiguous => 0,
            MetaAction::Commit => 1,
        }
    }
}

/// Action profile, centrist first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    pub centrist: MetaAction,
    pub extremist: MetaAction,
}

impl Profile {
    pub const fn new(centrist: MetaAction, extremist: MetaAction) -> Self {
        Self { centrist, extremist }
    }

    /// AA, AC, CA, CC.
    pub const ALL: [Profile; 4] = [
        Profile::new(MetaAction::Ambiguous, MetaAction::Ambiguous),
        Profile::new(MetaAction::Ambiguous, MetaAction::Commit),
        Profile::new(MetaAction::Commit, MetaAction::Ambiguous),
        Profile::new(MetaAction::Commit, MetaAction::Commit),
    ];

    pub fn action(&self, party: Party) -> MetaAction {
        match party {
            Party::Centrist => self.centrist,
            Party::Extremist => self.extremist,
        }
    }

    pub fn with_action(&self, party: Party, action: MetaAction) -> Profile {
        match party {
            Party::Centrist => Profile::new(action, self.extremist),
            Party::Extremist => Profile::new(self.centrist, action),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.centrist.code(), self.extremist.code())
    }
}

impl FromStr for Profile {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |c: char| match c.to_ascii_uppercase() {
            'A' => Ok(MetaAction::Ambiguous),
            'C' => Ok(MetaAction::Commit),
            _ => Err(GameError::Domain(format!("unknown action code `{c}` in `{s}`"))),
        };
        let codes: Vec<char> = s.trim().chars().filter(|c| c.is_ascii_alphabetic()).collect();
        match codes.as_slice() {
            [c, e] => Ok(Profile::new(parse(*c)?, parse(*e)?)),
            _ => Err(GameError::Domain(format!("profile must be two action codes like `AC`, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalParams {
    pub k: Rational,
    pub l: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbiguityGame {
    commit_centrist: DeviationSet,
    commit_extremist: DeviationSet,
    ambiguous_centrist: DeviationSet,
    ambiguous_extremist: DeviationSet,
    utility: VoterUtility,
    canonical: Option<CanonicalParams>,
}

impl AmbiguityGame {
    /// Generalized ("extension") game. Requires each commit set to lie inside
    /// the same party's ambiguous set.
    pub fn new(
        commit_centrist: DeviationSet,
        commit_extremist: DeviationSet,
        ambiguous_centrist: DeviationSet,
        ambiguous_extremist: DeviationSet,
        utility: VoterUtility,
    ) -> Result<Self, GameError> {
        if !commit_centrist.is_subset_of(&ambiguous_centrist) {
            return Err(GameError::Domain("centrist commit set is not inside its ambiguous set".into()));
        }
        if !commit_extremist.is_subset_of(&ambiguous_extremist) {
            return Err(GameError::Domain("extremist commit set is not inside its ambiguous set".into()));
        }
        Ok(Self {
            commit_centrist,
            commit_extremist,
            ambiguous_centrist,
            ambiguous_extremist,
            utility,
            canonical: None,
        })
    }

    /// Commit sets and the centrist's ambiguous set are `{-k,-1,0,1,k}`; the
    /// extremist's ambiguous set adds `±l`. Quadratic voter utility.
    pub fn canonical(k: &Rational, l: &Rational) -> Result<Self, GameError> {
        validate_canonical(k, l)?;
        let one = Rational::one();
        let base = DeviationSet::symmetric(&[one.clone(), k.clone()])?;
        let wide = DeviationSet::symmetric(&[one, k.clone(), l.clone()])?;
        let mut game = Self::new(base.clone(), base.clone(), base, wide, VoterUtility::quadratic())?;
        game.canonical = Some(CanonicalParams { k: k.clone(), l: l.clone() });
        Ok(game)
    }

    pub fn commit_set(&self, party: Party) -> &DeviationSet {
        match party {
            Party::Centrist => &self.commit_centrist,
            Party::Extremist => &self.commit_extremist,
        }
    }

    pub fn ambiguous_set(&self, party: Party) -> &DeviationSet {
        match party {
            Party::Centrist => &self.ambiguous_centrist,
            Party::Extremist => &self.ambiguous_extremist,
        }
    }

    pub fn utility(&self) -> &VoterUtility {
        &self.utility
    }

    pub fn canonical_params(&self) -> Option<&CanonicalParams> {
        self.canonical.as_ref()
    }

    pub fn is_extension(&self) -> bool {
        self.canonical.is_none()
    }

    /// Whether the extremist's ambiguous set is strictly larger than the
    /// centrist's. Reported for exploratory games, never enforced.
    pub fn has_asymmetric_ambiguity(&self) -> bool {
        self.ambiguous_centrist.len() < self.ambiguous_extremist.len()
    }

    /// Returns a copy with the extremist's ambiguous set replaced.
    pub fn with_extremist_ambiguous_set(&self, set: DeviationSet) -> Result<Self, GameError> {
        Self::new(
            self.commit_centrist.clone(),
            self.commit_extremist.clone(),
            self.ambiguous_centrist.clone(),
            set,
            self.utility.clone(),
        )
    }

    /// Possible voter evaluations of `party` under `action`, each equally likely.
    pub fn evaluations(&self, party: Party, action: MetaAction) -> Vec<Utility> {
        match action {
            MetaAction::Commit => self
                .commit_set(party)
                .values()
                .iter()
                .map(|d| self.utility.evaluate(d))
                .collect(),
            MetaAction::Ambiguous => vec![lottery_expected_utility(self.ambiguous_set(party), &self.utility)],
        }
    }
}

fn validate_canonical(k: &Rational, l: &Rational) -> Result<(), GameError> {
    if *k <= Rational::one() {
        return Err(GameError::Domain(format!("canonical game needs 1 < k, got k = {}", format_rational(k))));
    }
    if l <= k {
        return Err(GameError::Domain(format!(
            "canonical game needs k < l, got k = {}, l = {}",
            format_rational(k),
            format_rational(l)
        )));
    }
    Ok(())
}

/// Voter comparisons for every joint realization of a profile.
///
/// `outcome(i, j)` compares the centrist's i-th possible evaluation with the
/// extremist's j-th; all cells are equally likely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContestTable {
    centrist_len: usize,
    extremist_len: usize,
    outcomes: Vec<Ordering>,
}

impl ContestTable {
    pub fn build(game: &AmbiguityGame, profile: Profile) -> Self {
        let centrist = game.evaluations(Party::Centrist, profile.centrist);
        let extremist = game.evaluations(Party::Extremist, profile.extremist);
        let outcomes = centrist
            .iter()
            .flat_map(|c| extremist.iter().map(move |e| c.compare(e)))
            .collect();
        Self { centrist_len: centrist.len(), extremist_len: extremist.len(), outcomes }
    }

    pub fn centrist_len(&self) -> usize {
        self.centrist_len
    }

    pub fn extremist_len(&self) -> usize {
        self.extremist_len
    }

    pub fn outcome(&self, centrist_index: usize, extremist_index: usize) -> Ordering {
        self.outcomes[centrist_index * self.extremist_len + extremist_index]
    }

    /// Twice the centrist's score: 2 per win, 1 per tie.
    pub fn doubled_centrist_score(&self) -> u64 {
        self.outcomes.iter().map(|o| doubled_score(*o)).sum()
    }

    pub fn cells(&self) -> usize {
        self.outcomes.len()
    }
}

/// 2 for a centrist win, 1 for a tie, 0 for a loss.
pub fn doubled_score(outcome: Ordering) -> u64 {
    match outcome {
        Ordering::Greater => 2,
        Ordering::Equal => 1,
        Ordering::Less => 0,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WinProbabilities {
    pub centrist: Rational,
    pub extremist: Rational,
}

impl WinProbabilities {
    pub fn of(&self, party: Party) -> &Rational {
        match party {
            Party::Centrist => &self.centrist,
            Party::Extremist => &self.extremist,
        }
    }
}

/// Exact win probabilities of both parties under `profile`.
pub fn contest_win_probabilities(game: &AmbiguityGame, profile: Profile) -> WinProbabilities {
    let table = ContestTable::build(game, profile);
    let centrist = Rational::new(
        BigInt::from(table.doubled_centrist_score()),
        BigInt::from(2 * table.cells() as u64),
    );
    let extremist = Rational::one() - &centrist;
    WinProbabilities { centrist, extremist }
}

/// The four contest outcomes of a game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffMatrix {
    entries: [[WinProbabilities; 2]; 2],
}

impl PayoffMatrix {
    pub fn from_fn(mut f: impl FnMut(Profile) -> WinProbabilities) -> Self {
        let cell = |c, e, f: &mut dyn FnMut(Profile) -> WinProbabilities| f(Profile::new(c, e));
        let aa = cell(MetaAction::Ambiguous, MetaAction::Ambiguous, &mut f);
        let ac = cell(MetaAction::Ambiguous, MetaAction::Commit, &mut f);
        let ca = cell(MetaAction::Commit, MetaAction::Ambiguous, &mut f);
        let cc = cell(MetaAction::Commit, MetaAction::Commit, &mut f);
        Self { entries: [[aa, ac], [ca, cc]] }
    }

    pub fn get(&self, profile: Profile) -> &WinProbabilities {
        &self.entries[profile.centrist.index()][profile.extremist.index()]
    }

    pub fn payoff(&self, profile: Profile, party: Party) -> &Rational {
        self.get(profile).of(party)
    }
}

pub fn payoff_matrix(game: &AmbiguityGame) -> PayoffMatrix {
    PayoffMatrix::from_fn(|profile| contest_win_probabilities(game, profile))
}

/// Profiles where neither party strictly gains by switching its action.
pub fn pure_nash_equilibria(matrix: &PayoffMatrix) -> Vec<Profile> {
    Profile::ALL
        .into_iter()
        .filter(|profile| {
            [Party::Centrist, Party::Extremist].into_iter().all(|party| {
                let deviation = profile.with_action(party, profile.action(party).other());
                matrix.payoff(deviation, party) <= matrix.payoff(*profile, party)
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Centrist ambiguous, extremist commits.
    CentristAmbiguity,
    /// Both parties commit.
    FullCommitment,
    /// `k²` at (or within the tolerance of) the 3/2 threshold.
    Boundary,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::CentristAmbiguity => "CentristAmbiguity",
            Regime::FullCommitment => "FullCommitment",
            Regime::Boundary => "Boundary",
        }
    }

    /// The unique equilibrium the regime predicts.
    pub fn predicted_equilibrium(self) -> Option<Profile> {
        match self {
            Regime::CentristAmbiguity => Some(Profile::new(MetaAction::Ambiguous, MetaAction::Commit)),
            Regime::FullCommitment => Some(Profile::new(MetaAction::Commit, MetaAction::Commit)),
            Regime::Boundary => None,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Regime {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "CentristAmbiguity" => Ok(Regime::CentristAmbiguity),
            "FullCommitment" => Ok(Regime::FullCommitment),
            "Boundary" => Ok(Regime::Boundary),
            other => Err(GameError::Domain(format!("unknown regime `{other}`"))),
        }
    }
}

/// Classifies a canonical game from `k² - 3/2`. A zero `tolerance` means
/// exact comparison, with `Boundary` only at equality.
pub fn analytic_regime(k: &Rational, l: &Rational, tolerance: &Rational) -> Result<Regime, GameError> {
    validate_canonical(k, l)?;
    if tolerance.is_negative() {
        return Err(GameError::Domain("boundary tolerance must be non-negative".into()));
    }
    regime_for_k_squared(&(k * k), tolerance)
}

/// Classification by `k²` directly; the only way to land exactly on the
/// threshold, since `k² = 3/2` has no rational `k`.
pub fn regime_for_k_squared(k_squared: &Rational, tolerance: &Rational) -> Result<Regime, GameError> {
    if tolerance.is_negative() {
        return Err(GameError::Domain("boundary tolerance must be non-negative".into()));
    }
    let margin = k_squared - rational(3, 2);
    Ok(if margin.abs() <= *tolerance {
        Regime::Boundary
    } else if margin.is_negative() {
        Regime::CentristAmbiguity
    } else {
        Regime::FullCommitment
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thresholds {
    /// `k² - 3/2`
    pub centrist_margin: Rational,
    /// `k² + l² - 5/2`
    pub joint_margin: Rational,
}

impl Thresholds {
    pub fn evaluate(k: &Rational, l: &Rational) -> Self {
        let k2 = k * k;
        let l2 = l * l;
        Self {
            centrist_margin: &k2 - rational(3, 2),
            joint_margin: k2 + l2 - rational(5, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumReport {
    pub pure_equilibria: Vec<Profile>,
    /// `None` for extension games.
    pub regime: Option<Regime>,
    pub thresholds: Option<Thresholds>,
    pub payoffs: PayoffMatrix,
    pub asymmetric_ambiguity: bool,
}

impl EquilibriumReport {
    pub fn is_extension(&self) -> bool {
        self.regime.is_none()
    }
}

/// Builds the payoff matrix, enumerates pure equilibria and, for canonical
/// games, attaches the analytic regime and threshold margins.
pub fn solve(game: &AmbiguityGame, boundary_tolerance: &Rational) -> Result<EquilibriumReport, GameError> {
    let payoffs = payoff_matrix(game);
    let pure_equilibria = pure_nash_equilibria(&payoffs);
    let (regime, thresholds) = match game.canonical_params() {
        Some(CanonicalParams { k, l }) => {
            (Some(analytic_regime(k, l, boundary_tolerance)?), Some(Thresholds::evaluate(k, l)))
        }
        None => (None, None),
    };
    Ok(EquilibriumReport {
        pure_equilibria,
        regime,
        thresholds,
        payoffs,
        asymmetric_ambiguity: game.has_asymmetric_ambiguity(),
    })
}
