//! Two-shell densities that approach the uniform ball, used to show that the
//! complexity ratio is continuous although the support jumps.

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{rational, rational_pow, rcr_step, StepDensity};
use crate::error::{Error, Result};

/// `f₁, g₁` spread a fraction `δ` of their mass over the shell `1 < |r| < B`;
/// `f₂ = g₂` is the uniform unit ball.
#[derive(Debug, Clone)]
pub struct ExamplePair {
    pub f1: StepDensity,
    pub g1: StepDensity,
    pub f2: StepDensity,
    pub g2: StepDensity,
}

/// The pair for outer radius `B > 1` and leaked fractions `δ₁, δ′₁ ∈ (0, 1)`.
pub fn make_example_pair(dimension: u32, b: f64, delta1: f64, delta1_prime: f64) -> Result<ExamplePair> {
    if !(b > 1.0 && b.is_finite()) {
        return Err(Error::domain("make_example_pair", format!("outer radius {b} must exceed 1")));
    }
    let ratio = rational_pow(&rational(b, "make_example_pair")?, dimension);
    build(dimension, ratio, delta1, delta1_prime)
}

/// As [`make_example_pair`], given the volume ratio `B^D` instead of `B`.
pub fn example_pair_from_volume_ratio(dimension: u32, ratio: f64, delta1: f64, delta1_prime: f64) -> Result<ExamplePair> {
    build(dimension, rational(ratio, "example_pair_from_volume_ratio")?, delta1, delta1_prime)
}

fn leaky(dimension: u32, ratio: &BigRational, delta: f64) -> Result<StepDensity> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain("make_example_pair", format!("fraction {delta} must lie in (0, 1)")));
    }
    let d = rational(delta, "make_example_pair")?;
    let one = BigRational::one();
    let outer = &d / (ratio - &one);
    StepDensity::from_scaled(dimension, vec![(one.clone(), &one - &d), (ratio.clone(), outer)])
}

fn build(dimension: u32, ratio: BigRational, delta1: f64, delta1_prime: f64) -> Result<ExamplePair> {
    if ratio <= BigRational::one() || !ratio.is_positive() {
        return Err(Error::domain("make_example_pair", "volume ratio B^D must exceed 1"));
    }
    let ball = StepDensity::uniform_ball(dimension, 1.0)?;
    Ok(ExamplePair {
        f1: leaky(dimension, &ratio, delta1)?,
        g1: leaky(dimension, &ratio, delta1_prime)?,
        f2: ball.clone(),
        g2: ball,
    })
}

/// One rung of the ladder `δ₁ = δ′₁ = δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderPoint {
    pub delta: f64,
    pub rcr_leaky: f64,
    pub rcr_ball: f64,
}

impl LadderPoint {
    pub fn gap(&self) -> f64 {
        (self.rcr_leaky - self.rcr_ball).abs()
    }
}

/// `rcr(f₁, g₁)` and `rcr(f₂, g₂)` along the given fractions.
pub fn near_continuity_ladder(
    dimension: u32,
    volume_ratio: f64,
    alpha: f64,
    beta: f64,
    deltas: &[f64],
) -> Result<Vec<LadderPoint>> {
    deltas
        .iter()
        .map(|&delta| {
            let p = example_pair_from_volume_ratio(dimension, volume_ratio, delta, delta)?;
            Ok(LadderPoint {
                delta,
                rcr_leaky: rcr_step(&p.f1, &p.g1, alpha, beta)?,
                rcr_ball: rcr_step(&p.f2, &p.g2, alpha, beta)?,
            })
        })
        .collect()
}

/// Aitken's Δ² on the last three terms of a sequence; the last term when the
/// second difference vanishes.
pub fn extrapolate_limit(values: &[f64]) -> f64 {
    match values {
        [] => f64::NAN,
        [x] => *x,
        [.., x0, x1, x2] => {
            let d1 = x2 - x1;
            let d2 = d1 - (x1 - x0);
            if d2 == 0.0 || !(d1 * d1 / d2).is_finite() {
                *x2
            } else {
                x2 - d1 * d1 / d2
            }
        }
        [.., x] => *x,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densitylab::{renyi_step, unit_ball_volume};
    use approx::assert_relative_eq;

    #[test]
    fn levels_match_construction() {
        let c = unit_ball_volume(3);
        let p = example_pair_from_volume_ratio(3, 2.0, 0.25, 0.5).unwrap();
        assert_relative_eq!(p.f1.shells()[0].level, 0.75 / c, max_relative = 1e-15);
        assert_relative_eq!(p.f1.shells()[1].level, 0.25 / c, max_relative = 1e-15);
        assert_relative_eq!(p.g1.shells()[1].level, 0.5 / c, max_relative = 1e-15);
        assert_relative_eq!(p.f1.shells()[1].outer_radius, 2f64.cbrt(), max_relative = 1e-15);
        for rho in [&p.f1, &p.g1, &p.f2] {
            assert_eq!(rho.exact_mass(), Some(BigRational::one()));
        }
        assert!(make_example_pair(3, 0.9, 0.1, 0.1).is_err());
        assert!(make_example_pair(3, 2.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn renyi_of_leaky_density() {
        let p = example_pair_from_volume_ratio(3, 2.0, 0.5, 0.5).unwrap();
        assert_relative_eq!(renyi_step(&p.f1, 2.0).unwrap(), 2.125_559_138_861_126_4, max_relative = 1e-14);
        let c = unit_ball_volume(3);
        assert_relative_eq!(renyi_step(&p.f1, 1e-10).unwrap(), (2.0 * c).ln(), max_relative = 1e-9);
        assert_relative_eq!(renyi_step(&p.f1, 0.0).unwrap(), (2.0 * c).ln(), max_relative = 1e-15);
        for d in [1, 2, 5] {
            let p = make_example_pair(d, 1.5, 0.2, 0.2).unwrap();
            let cd = unit_ball_volume(d);
            for alpha in [0.5, 2.0, 3.0] {
                assert_relative_eq!(renyi_step(&p.f2, alpha).unwrap(), cd.ln(), max_relative = 1e-14);
                let k = 1.5f64.powi(d as i32) - 1.0;
                let closed = ((0.8f64.powf(alpha) + 0.2f64.powf(alpha) / k.powf(alpha - 1.0)).ln()) / (1.0 - alpha) + cd.ln();
                assert_relative_eq!(renyi_step(&p.f1, alpha).unwrap(), closed, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn leaky_density_approaches_ball_in_sup_norm() {
        let mut last = f64::INFINITY;
        for delta in [0.1, 0.01, 0.001] {
            let p = example_pair_from_volume_ratio(3, 2.0, delta, delta).unwrap();
            let gap = crate::densitylab::sup_gap(&p.f1, &p.f2).unwrap();
            assert!(gap < last);
            last = gap;
        }
    }

    #[test]
    fn aitken_recovers_geometric_limit() {
        let seq: Vec<f64> = (0..5).map(|k| 1.0 + 0.3 * 0.1f64.powi(k)).collect();
        assert_relative_eq!(extrapolate_limit(&seq), 1.0, max_relative = 1e-14);
        assert_eq!(extrapolate_limit(&[2.0, 2.0, 2.0]), 2.0);
        assert_eq!(extrapolate_limit(&[3.0]), 3.0);
    }
}
