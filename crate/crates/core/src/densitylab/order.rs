//! Support measure, localization, majorization and δ-neighboring.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{compensated, DiscreteDistribution, StepDensity};
use crate::error::{Error, Result};

/// Slack for float comparisons of cumulative masses.
const ORDER_TOL: f64 = 1e-12;

/// Which of two densities has the smaller effective domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Localization {
    FLocalized,
    GLocalized,
    Equal,
}

/// Volume of the support, leaving out zero-level shells.
pub fn effective_domain_measure(rho: &StepDensity) -> f64 {
    compensated(rho.shells().iter().zip(rho.shell_volumes()).filter(|(s, _)| s.level > 0.0).map(|(_, v)| v))
}

/// Support volume divided by `C_D`, as an exact rational.
fn exact_domain(rho: &StepDensity) -> Option<BigRational> {
    let ex = rho.exact_shells()?;
    let mut prev = BigRational::zero();
    let mut total = BigRational::zero();
    for s in ex {
        if s.scaled_level.is_positive() {
            total += &s.outer_power - &prev;
        }
        prev = s.outer_power.clone();
    }
    Some(total)
}

fn same_dimension(f: &StepDensity, g: &StepDensity, op: &'static str) -> Result<()> {
    if f.dimension() != g.dimension() {
        return Err(Error::domain(op, format!("dimensions {} and {} differ", f.dimension(), g.dimension())));
    }
    Ok(())
}

/// Compare effective-domain measures; only a strict difference localizes.
pub fn is_localized(f: &StepDensity, g: &StepDensity) -> Result<Localization> {
    same_dimension(f, g, "is_localized")?;
    let ord = match (exact_domain(f), exact_domain(g)) {
        (Some(a), Some(b)) => a.cmp(&b),
        _ => {
            let (a, b) = (effective_domain_measure(f), effective_domain_measure(g));
            if (a - b).abs() <= ORDER_TOL * a.max(b) {
                Ordering::Equal
            } else {
                a.total_cmp(&b)
            }
        }
    };
    Ok(match ord {
        Ordering::Less => Localization::FLocalized,
        Ordering::Greater => Localization::GLocalized,
        Ordering::Equal => Localization::Equal,
    })
}

/// Majorization `f ≻ g` between two inputs of the same kind.
pub trait Majorize {
    fn majorizes(&self, other: &Self) -> Result<bool>;
}

/// `f ≻ g`. Mixing a discrete distribution with a step density does not type-check.
pub fn majorizes<T: Majorize>(f: &T, g: &T) -> Result<bool> {
    f.majorizes(g)
}

fn common_cell_measure(p: &DiscreteDistribution) -> Option<f64> {
    match p.cell_measures() {
        None => Some(1.0),
        Some(m) => {
            let first = m[0];
            m.iter().all(|x| *x == first).then_some(first)
        }
    }
}

impl Majorize for DiscreteDistribution {
    /// Sorted prefix sums of `f` dominate those of `g`.
    fn majorizes(&self, other: &Self) -> Result<bool> {
        let (mf, mg) = (common_cell_measure(self), common_cell_measure(other));
        match (mf, mg) {
            (Some(a), Some(b)) if a == b => {}
            _ => {
                return Err(Error::domain("majorizes", "discrete majorization needs one common cell measure"));
            }
        }
        let sorted = |p: &DiscreteDistribution| {
            let mut v = p.probabilities().to_vec();
            v.sort_by(|a, b| b.total_cmp(a));
            v
        };
        let (a, b) = (sorted(self), sorted(other));
        let n = a.len().max(b.len());
        let (mut sa, mut sb) = (0.0f64, 0.0f64);
        for k in 0..n {
            sa += a.get(k).copied().unwrap_or(0.0);
            sb += b.get(k).copied().unwrap_or(0.0);
            if sa < sb - ORDER_TOL {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `∫[f − t]⁺` for a step density, in float.
fn excess(rho: &StepDensity, t: f64) -> f64 {
    compensated(rho.shells().iter().zip(rho.shell_volumes()).map(|(s, v)| (s.level - t).max(0.0) * v))
}

/// `C_D ∫[f − t/C_D]⁺`, exact.
fn excess_exact(rho: &StepDensity, t: &BigRational) -> BigRational {
    let ex = rho.exact_shells().expect("exact density");
    let mut prev = BigRational::zero();
    let mut total = BigRational::zero();
    for s in ex {
        if &s.scaled_level > t {
            total += (&s.scaled_level - t) * (&s.outer_power - &prev);
        }
        prev = s.outer_power.clone();
    }
    total
}

impl Majorize for StepDensity {
    /// `∫[f − t]⁺ ≥ ∫[g − t]⁺` for all `t ≥ 0`. Both sides are piecewise linear
    /// in `t` with kinks at the levels, so checking at zero and every level is exhaustive.
    fn majorizes(&self, other: &Self) -> Result<bool> {
        same_dimension(self, other, "majorizes")?;
        if let (Some(ef), Some(eg)) = (self.exact_shells(), other.exact_shells()) {
            let mut thresholds: Vec<BigRational> =
                ef.iter().chain(eg).map(|s| s.scaled_level.clone()).collect();
            thresholds.push(BigRational::zero());
            return Ok(thresholds.iter().all(|t| excess_exact(self, t) >= excess_exact(other, t)));
        }
        let mut thresholds: Vec<f64> = self.shells().iter().chain(other.shells()).map(|s| s.level).collect();
        thresholds.push(0.0);
        Ok(thresholds.iter().all(|&t| excess(self, t) >= excess(other, t) - ORDER_TOL))
    }
}

/// `sup |f − g|` off a null set, for two step densities sharing a center.
pub fn sup_gap(f: &StepDensity, g: &StepDensity) -> Result<f64> {
    same_dimension(f, g, "sup_gap")?;
    if f.center() != g.center() {
        return Err(Error::domain("sup_gap", "step densities must share a center"));
    }
    let mut radii: Vec<f64> = f.shells().iter().chain(g.shells()).map(|s| s.outer_radius).collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let mut prev = 0.0;
    let mut gap = 0.0f64;
    for r in radii {
        let mid = 0.5 * (prev + r);
        gap = gap.max((f.radial_level(mid) - g.radial_level(mid)).abs());
        prev = r;
    }
    Ok(gap)
}

/// True iff `|f − g| < δ` almost everywhere.
pub fn delta_neighboring(f: &StepDensity, g: &StepDensity, delta: f64) -> Result<bool> {
    if !(delta > 0.0) {
        return Err(Error::domain("delta_neighboring", format!("delta = {delta} must be positive")));
    }
    Ok(sup_gap(f, g)? < delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densitylab::{make_example_pair, unit_ball_volume};
    use approx::assert_relative_eq;

    fn pair(delta: f64) -> (StepDensity, StepDensity) {
        let p = make_example_pair(3, 2f64.cbrt(), delta, delta).unwrap();
        (p.f1, p.f2)
    }

    #[test]
    fn effective_domains_of_example() {
        let c = unit_ball_volume(3);
        let (f1, f2) = pair(0.3);
        assert_relative_eq!(effective_domain_measure(&f2), c, max_relative = 1e-15);
        assert_relative_eq!(effective_domain_measure(&f1), 2.0 * c, max_relative = 1e-14);
    }

    #[test]
    fn zero_level_shell_is_not_support() {
        let rho = StepDensity::from_scaled_f64(3, &[(1.0, 1.0), (2.0, 0.0)]).unwrap();
        assert_relative_eq!(effective_domain_measure(&rho), unit_ball_volume(3), max_relative = 1e-15);
        let ball = StepDensity::uniform_ball(3, 1.0).unwrap();
        assert_eq!(is_localized(&rho, &ball).unwrap(), Localization::Equal);
    }

    #[test]
    fn localization_verdicts() {
        let (f1, f2) = pair(0.3);
        assert_eq!(is_localized(&f2, &f1).unwrap(), Localization::FLocalized);
        assert_eq!(is_localized(&f1, &f2).unwrap(), Localization::GLocalized);
        assert_eq!(is_localized(&f2, &f2.clone()).unwrap(), Localization::Equal);
        let two_shell = StepDensity::from_scaled_f64(3, &[(0.5, 1.5), (1.0, 0.5)]).unwrap();
        assert_eq!(is_localized(&two_shell, &f2).unwrap(), Localization::Equal);
        let flat = StepDensity::uniform_ball(2, 1.0).unwrap();
        assert!(is_localized(&f1, &flat).is_err());
    }

    #[test]
    fn discrete_majorization() {
        let a = DiscreteDistribution::new(vec![0.7, 0.3]).unwrap();
        let b = DiscreteDistribution::new(vec![0.6, 0.4]).unwrap();
        assert!(majorizes(&a, &b).unwrap());
        assert!(!majorizes(&b, &a).unwrap());
        assert!(majorizes(&a, &a).unwrap());
        let spread = DiscreteDistribution::uniform(3).unwrap();
        assert!(majorizes(&b, &spread).unwrap());
        let weighted = DiscreteDistribution::with_measures(vec![0.1, 0.45], vec![1.0, 2.0]).unwrap();
        assert!(majorizes(&weighted, &a).is_err());
    }

    #[test]
    fn concentrated_ball_majorizes_example_density() {
        for delta in [0.9, 0.5, 0.1, 1e-3] {
            let (f1, f2) = pair(delta);
            assert!(majorizes(&f2, &f1).unwrap());
            assert!(!majorizes(&f1, &f2).unwrap());
            assert!(majorizes(&f1, &f1).unwrap());
        }
    }

    #[test]
    fn float_majorization_agrees_with_exact() {
        let (f1, f2) = pair(0.2);
        let float = |s: &StepDensity| {
            let shells: Vec<(f64, f64)> = s.shells().iter().map(|x| (x.outer_radius, x.level)).collect();
            StepDensity::new(3, &shells).unwrap()
        };
        assert!(majorizes(&float(&f2), &float(&f1)).unwrap());
        assert!(!majorizes(&float(&f1), &float(&f2)).unwrap());
    }

    #[test]
    fn neighboring_example() {
        let (f1, f2) = pair(0.01);
        let gap = sup_gap(&f1, &f2).unwrap();
        assert_relative_eq!(gap, 0.01 / unit_ball_volume(3), max_relative = 1e-12);
        assert_relative_eq!(gap, 0.002_387_324_146_378_430, max_relative = 1e-12);
        assert!(delta_neighboring(&f1, &f2, 0.0024).unwrap());
        assert!(!delta_neighboring(&f1, &f2, 0.0023).unwrap());
        assert!(delta_neighboring(&f1, &f1, 1e-300).unwrap());
        assert!(delta_neighboring(&f1, &f2, 0.0).is_err());
    }
}
