//! Rescaled and shifted copies of step densities, and weighted mixtures of them.

use super::{distance, rational, rational_pow, Cell, ExactShell, PiecewiseConstant, StepDensity, MASS_TOL};
use crate::error::{Error, Result};

/// `a^D f(a(r − b))`: the density squeezed by `a` and moved to `b`.
pub fn transform(rho: &StepDensity, scale: f64, shift: &[f64]) -> Result<StepDensity> {
    const OP: &str = "transform";
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain(OP, format!("scale {scale} must be positive and finite")));
    }
    let d = rho.dimension();
    if shift.len() != d as usize {
        return Err(Error::domain(OP, format!("shift has {} components, dimension is {d}", shift.len())));
    }
    let center: Vec<f64> = shift.iter().zip(rho.center()).map(|(b, c)| b + c / scale).collect();
    if let Some(ex) = rho.exact_shells() {
        let a_d = rational_pow(&rational(scale, OP)?, d);
        let shells = ex
            .iter()
            .map(|s| ExactShell { outer_power: &s.outer_power / &a_d, scaled_level: &s.scaled_level * &a_d })
            .collect();
        return Ok(StepDensity::from_exact(d, shells, center));
    }
    let a_d = scale.powi(d as i32);
    let shells: Vec<(f64, f64)> = rho.shells().iter().map(|s| (s.outer_radius / scale, s.level * a_d)).collect();
    Ok(StepDensity::new(d, &shells)?.with_center(center))
}

/// A weighted sum of step densities, possibly with different centers.
#[derive(Debug, Clone)]
pub struct Mixture {
    components: Vec<(StepDensity, f64)>,
    overlapping: bool,
}

/// Weighted sum of components; weights must be positive and sum to one.
/// Overlapping supports are allowed and reported by [`Mixture::is_overlapping`].
pub fn mixture(components: Vec<(StepDensity, f64)>) -> Result<Mixture> {
    const OP: &str = "mixture";
    let Some((first, _)) = components.first() else {
        return Err(Error::domain(OP, "need at least one component"));
    };
    let d = first.dimension();
    if components.iter().any(|(c, _)| c.dimension() != d) {
        return Err(Error::domain(OP, "components have different dimensions"));
    }
    if let Some((_, w)) = components.iter().find(|(_, w)| !(*w > 0.0 && w.is_finite())) {
        return Err(Error::domain(OP, format!("weight {w} must be positive")));
    }
    let total: f64 = components.iter().map(|(_, w)| w).sum();
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::domain(OP, format!("weights sum to {total}")));
    }
    let mut overlapping = false;
    for (i, (a, _)) in components.iter().enumerate() {
        for (b, _) in &components[i + 1..] {
            if distance(a.center(), b.center()) < a.support_radius() + b.support_radius() {
                overlapping = true;
            }
        }
    }
    Ok(Mixture { components, overlapping })
}

impl Mixture {
    pub fn components(&self) -> &[(StepDensity, f64)] {
        &self.components
    }

    pub fn is_overlapping(&self) -> bool {
        self.overlapping
    }

    pub fn dimension(&self) -> u32 {
        self.components[0].0.dimension()
    }

    pub fn mass(&self) -> f64 {
        self.components.iter().map(|(c, w)| w * c.mass()).sum()
    }

    pub fn level_at(&self, point: &[f64]) -> f64 {
        self.components.iter().map(|(c, w)| w * c.level_at(point)).sum()
    }

    fn concentric(&self) -> bool {
        let c0 = self.components[0].0.center();
        self.components.iter().all(|(c, _)| c.center() == c0)
    }

    /// The mixture as one step density; requires a common center.
    pub fn to_step_density(&self) -> Result<StepDensity> {
        if !self.concentric() {
            return Err(Error::domain("Mixture::to_step_density", "components do not share a center"));
        }
        let mut radii: Vec<f64> =
            self.components.iter().flat_map(|(c, _)| c.shells().iter().map(|s| s.outer_radius)).collect();
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let mut prev = 0.0;
        let shells: Vec<(f64, f64)> = radii
            .into_iter()
            .map(|r| {
                let mid = 0.5 * (prev + r);
                prev = r;
                (r, self.components.iter().map(|(c, w)| w * c.radial_level(mid)).sum())
            })
            .collect();
        let center = self.components[0].0.center().to_vec();
        Ok(StepDensity::new(self.dimension(), &shells)?.with_center(center))
    }
}

impl PiecewiseConstant for Mixture {
    /// Cells of every component scaled by its weight when supports are disjoint;
    /// the merged shells when all components share a center.
    fn cells(&self) -> Result<Vec<Cell>> {
        if !self.overlapping {
            let mut cells = Vec::new();
            for (c, w) in &self.components {
                cells.extend(c.cells()?.into_iter().map(|x| Cell { value: w * x.value, measure: x.measure }));
            }
            return Ok(cells);
        }
        if self.concentric() {
            return self.to_step_density()?.cells();
        }
        Err(Error::domain("Mixture::cells", "overlapping off-center components have no shell decomposition"))
    }
}

/// `n` disjoint copies `n^{D/2−1} f(√n (r − a_i))`, each carrying probability `1/n`.
pub fn disjoint_copies(rho: &StepDensity, n: u32) -> Result<Mixture> {
    if n == 0 {
        return Err(Error::domain("disjoint_copies", "need at least one copy"));
    }
    let scale = (n as f64).sqrt();
    let spacing = 3.0 * rho.support_radius();
    let components = (0..n)
        .map(|i| {
            let mut shift = vec![0.0; rho.dimension() as usize];
            shift[0] = i as f64 * spacing;
            Ok((transform(rho, scale, &shift)?, 1.0 / n as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    mixture(components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densitylab::{renyi_step, unit_ball_volume};
    use approx::assert_relative_eq;
    use num_rational::BigRational;
    use num_traits::One;

    #[test]
    fn transform_keeps_mass_exactly() {
        let rho = StepDensity::from_scaled_f64(3, &[(0.5, 1.5), (1.0, 0.5)]).unwrap();
        for (a, b) in [(2.0, [1.0, 0.0, 0.0]), (0.3, [0.0, -2.0, 5.0])] {
            let t = transform(&rho, a, &b).unwrap();
            assert_eq!(t.exact_mass(), Some(BigRational::one()));
            assert_relative_eq!(t.mass(), 1.0, max_relative = 1e-14);
            let point = [b[0] + 0.1 / a, b[1], b[2]];
            assert_relative_eq!(t.level_at(&point), a.powi(3) * rho.radial_level(0.1), max_relative = 1e-14);
        }
    }

    #[test]
    fn transform_shifts_renyi_by_log_volume_factor() {
        let rho = StepDensity::from_scaled_f64(2, &[(0.25, 2.5), (1.0, 0.5)]).unwrap();
        let t = transform(&rho, 3.0, &[0.5, 0.5]).unwrap();
        for alpha in [0.5, 1.0, 2.0] {
            let shift = renyi_step(&t, alpha).unwrap() - renyi_step(&rho, alpha).unwrap();
            assert_relative_eq!(shift, -2.0 * 3f64.ln(), max_relative = 1e-13);
        }
    }

    #[test]
    fn copies_are_disjoint_and_normalized() {
        let rho = StepDensity::uniform_ball(3, 1.0).unwrap();
        let m = disjoint_copies(&rho, 4).unwrap();
        assert!(!m.is_overlapping());
        assert_relative_eq!(m.mass(), 1.0, max_relative = 1e-14);
        let r = renyi_step(&m, 2.0).unwrap();
        let expected = unit_ball_volume(3).ln() + (1.0 - 1.5) * 4f64.ln();
        assert_relative_eq!(r, expected, max_relative = 1e-13);
    }

    #[test]
    fn overlapping_mixtures_are_flagged() {
        let a = StepDensity::uniform_ball(3, 1.0).unwrap();
        let b = transform(&a, 1.0, &[1.0, 0.0, 0.0]).unwrap();
        let m = mixture(vec![(a.clone(), 0.5), (b, 0.5)]).unwrap();
        assert!(m.is_overlapping());
        assert!(m.cells().is_err());
        let wide = StepDensity::uniform_ball(3, 2.0).unwrap();
        let concentric = mixture(vec![(a, 0.25), (wide, 0.75)]).unwrap();
        assert!(concentric.is_overlapping());
        let merged = concentric.to_step_density().unwrap();
        assert_relative_eq!(merged.mass(), 1.0, max_relative = 1e-14);
        assert_eq!(merged.shells().len(), 2);
        assert!(mixture(vec![(merged.clone(), 0.5)]).is_err());
    }
}
