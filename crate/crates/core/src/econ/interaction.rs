use super::design::{DesignSpec, Term};
use super::estimate::{fit, FitResult};
use super::EconError;
use crate::panel::PartyYearPanel;

/// Augments `base` with the product of each factor list. With
/// `full_factorial`, every lower-order sub-product is added too (main
/// effects and two-way terms under a triple interaction). Terms absorbed by
/// the fixed effects, such as country-year-level context variables under
/// country×year FE, are dropped and reported in the diagnostics.
pub fn fit_interaction<S: AsRef<str>>(
    panel: &PartyYearPanel,
    base: &DesignSpec,
    interactions: &[Vec<S>],
    full_factorial: bool,
) -> Result<FitResult, EconError> {
    fit(panel, &interaction_design(base, interactions, full_factorial)?)
}

/// The design [`fit_interaction`] estimates.
pub fn interaction_design<S: AsRef<str>>(
    base: &DesignSpec,
    interactions: &[Vec<S>],
    full_factorial: bool,
) -> Result<DesignSpec, EconError> {
    let mut spec = base.clone();
    spec.omit_absorbed = true;
    for factors in interactions {
        let factors: Vec<&str> = factors.iter().map(AsRef::as_ref).collect();
        if factors.len() < 2 {
            return Err(EconError::Domain(format!("interaction needs at least two factors, got {factors:?}")));
        }
        let n = factors.len();
        let subsets: Vec<usize> = if full_factorial { (1..1usize << n).collect() } else { vec![(1 << n) - 1] };
        let mut ordered = subsets;
        ordered.sort_by_key(|m| m.count_ones());
        for mask in ordered {
            let picked: Vec<&str> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| factors[i]).collect();
            let term = Term::product(picked);
            if !spec.regressors.contains(&term) {
                spec.regressors.push(term);
            }
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_factorial_expansion() {
        let base = DesignSpec::new("y").regressor(Term::column("c"));
        let spec = interaction_design(&base, &[vec!["c", "v", "o"]], true).unwrap();
        let names: Vec<String> = spec.regressors.iter().map(Term::name).collect();
        assert_eq!(names, ["c", "v", "o", "c*v", "c*o", "v*o", "c*v*o"]);
        let only = interaction_design(&base, &[vec!["c", "v"]], false).unwrap();
        assert_eq!(only.regressors.len(), 2);
        assert!(interaction_design(&base, &[vec!["c"]], true).is_err());
    }
}
