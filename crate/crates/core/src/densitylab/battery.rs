//! Random discrete distributions for property batteries.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, RngExt};

use super::{rational, DiscreteDistribution, StepDensity};
use crate::error::Result;

/// A random distribution on `n` unit cells with exponentially distributed weights.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<DiscreteDistribution> {
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    DiscreteDistribution::new(w.iter().map(|x| x / total).collect())
}

/// A pair `(f, g)` with `f ≻ g`: `g` is random and `f` follows from it by
/// repeatedly moving mass from a poorer cell to a richer one.
pub fn random_majorized_pair<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
) -> Result<(DiscreteDistribution, DiscreteDistribution)> {
    let g = random_distribution(rng, n)?;
    let mut p = g.probabilities().to_vec();
    if n >= 2 {
        for _ in 0..rng.random_range(1..=2 * n) {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            if i == j {
                continue;
            }
            let (rich, poor) = if p[i] >= p[j] { (i, j) } else { (j, i) };
            let t = p[poor] * rng.random::<f64>();
            p[rich] += t;
            p[poor] -= t;
        }
    }
    let total: f64 = p.iter().sum();
    let f = DiscreteDistribution::new(p.iter().map(|x| x / total).collect())?;
    Ok((f, g))
}

/// A random radial step density in `dimension` dimensions with `shells`
/// shells, normalized exactly.
pub fn random_step_density<R: Rng + ?Sized>(rng: &mut R, dimension: u32, shells: usize) -> Result<StepDensity> {
    let mut v = 0.0;
    let mut raw = Vec::with_capacity(shells);
    for _ in 0..shells.max(1) {
        v += 0.1 + rng.random::<f64>();
        let w = 0.05 + rng.random::<f64>();
        raw.push((rational(v, "random_step_density")?, rational(w, "random_step_density")?));
    }
    let mut prev = BigRational::zero();
    let mut mass = BigRational::zero();
    for (v, w) in &raw {
        mass += w * (v - &prev);
        prev = v.clone();
    }
    StepDensity::from_scaled(dimension, raw.into_iter().map(|(v, w)| (v, w / &mass)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densitylab::majorizes;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn constructed_pairs_majorize() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in [2usize, 3, 8, 20] {
            for _ in 0..50 {
                let (f, g) = random_majorized_pair(&mut rng, n).unwrap();
                assert!(majorizes(&f, &g).unwrap());
            }
        }
    }

    #[test]
    fn random_step_densities_are_exact() {
        let mut rng = StdRng::seed_from_u64(11);
        for d in 1..=3 {
            let rho = random_step_density(&mut rng, d, 4).unwrap();
            assert!(rho.is_exact());
            assert_eq!(rho.shells().len(), 4);
            assert!((rho.mass() - 1.0).abs() < 1e-14);
        }
    }
}
