//! Entropic moments of `|Y_ℓm|²` over the unit sphere.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::gamma::ln_gamma_unchecked;
use crate::specfun::{binomial, DoubleDouble};

/// `ln ∫ |Y_ℓm|^{2α} dΩ` in closed form.
pub fn ln_j2_moment(l: u32, m: i32, alpha: u32, term_cap: u128) -> Result<f64> {
    let b = AngularBlocks::new(l, m, alpha, term_cap)?;
    Ok(b.ln_total())
}

/// The factors of the angular moment kept apart, so that regrouped
/// complexity formulas can collect exponents block by block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularBlocks {
    pub l: u32,
    /// `|m|`.
    pub m: u32,
    pub alpha: u32,
    /// `ln [Γ(m+½)² Γ(m+1)² Γ(ℓ−m+1) Γ(ℓ+m+1) / (Γ(2m+1)² Γ(ℓ+1)²)]`.
    pub ln_bracket: f64,
    /// `ln B(α, ℓ, m)`, the finite index sum with its binomial prefactor.
    pub ln_b: f64,
}

impl AngularBlocks {
    /// The sum over `j_1 … j_{2α} ∈ [0, ℓ−|m|]` groups by total index; each
    /// group shares the sign `(−1)^J`, and the grouped sum is done in
    /// double-double. `m` enters only through `|m|`.
    pub fn new(l: u32, m: i32, alpha: u32, term_cap: u128) -> Result<Self> {
        let am = m.unsigned_abs();
        if am > l {
            return Err(Error::domain("j2_moment", format!("|m| = {am} exceeds l = {l}")));
        }
        if alpha == 0 {
            return Err(Error::domain("j2_moment", "order must be a positive integer"));
        }
        let width = (l - am) as u128 + 1;
        let slots = 2 * alpha;
        let needed = width.checked_pow(slots).unwrap_or(u128::MAX);
        if needed > term_cap {
            return Err(Error::Budget { op: "j2_moment", needed, cap: term_cap });
        }
        let (lf, mf, af) = (l as f64, am as f64, alpha as f64);
        let lg = ln_gamma_unchecked;
        let ln_bracket = 2.0 * lg(mf + 0.5) + 2.0 * lg(mf + 1.0) + lg(lf - mf + 1.0) + lg(lf + mf + 1.0)
            - 2.0 * lg(2.0 * mf + 1.0)
            - 2.0 * lg(lf + 1.0);

        // Per-index factor (m−ℓ)_j (m+ℓ+1)_j / ((m+1)_j j!), exact in double-double.
        let deg = (l - am) as usize;
        let mut single = Vec::with_capacity(deg + 1);
        let mut f = DoubleDouble::ONE;
        single.push(f);
        for j in 0..deg {
            let jf = j as f64;
            let num = DoubleDouble::from(mf - lf + jf) * DoubleDouble::from(mf + lf + 1.0 + jf);
            let den = DoubleDouble::from(mf + 1.0 + jf) * DoubleDouble::from(jf + 1.0);
            f = f * num / den;
            single.push(f);
        }
        // Coefficients of the product of 2α identical polynomials, by repeated convolution.
        let mut grouped = vec![DoubleDouble::ONE];
        for _ in 0..slots {
            let mut next = vec![DoubleDouble::ZERO; grouped.len() + deg];
            for (i, g) in grouped.iter().enumerate() {
                for (k, s) in single.iter().enumerate() {
                    next[i + k] += *g * *s;
                }
            }
            grouped = next;
        }
        let mut acc = DoubleDouble::ZERO;
        let mut ratio = DoubleDouble::ONE;
        for (jt, e) in grouped.iter().enumerate() {
            acc += ratio * *e;
            let jf = jt as f64;
            ratio = ratio * DoubleDouble::from(mf * af + 1.0 + jf) / DoubleDouble::from(2.0 * mf * af + 2.0 + jf);
        }
        let sum = acc.to_f64();
        if !(sum > 0.0) {
            return Err(Error::NoConvergence { op: "j2_moment", estimate: sum, bound: f64::INFINITY });
        }
        let ln_b = 2.0 * af * binomial(lf, l - am).ln() + sum.ln();
        Ok(Self { l, m: am, alpha, ln_bracket, ln_b })
    }

    /// Exponent of 2 in the moment.
    pub fn two_power(&self) -> f64 {
        2.0 * self.alpha as f64 * (2.0 * self.m as f64 - 1.0) + 2.0
    }

    /// Exponent of π in the moment.
    pub fn pi_power(&self) -> f64 {
        1.0 - 2.0 * self.alpha as f64
    }

    /// `ln [Γ(mα+1)² / Γ(2mα+2)]`.
    pub fn ln_gamma_ratio(&self) -> f64 {
        let ma = (self.m * self.alpha) as f64;
        2.0 * ln_gamma_unchecked(ma + 1.0) - ln_gamma_unchecked(2.0 * ma + 2.0)
    }

    pub fn ln_total(&self) -> f64 {
        let af = self.alpha as f64;
        self.two_power() * 2f64.ln()
            + af * (2.0 * self.l as f64 + 1.0).ln()
            + self.ln_gamma_ratio()
            + self.pi_power() * PI.ln()
            + af * self.ln_bracket
            + self.ln_b
    }
}

/// `∫ |Y_ℓm|^{2α} dΩ`.
pub fn j2_moment(l: u32, m: i32, alpha: u32) -> Result<f64> {
    ln_j2_moment(l, m, alpha, crate::specfun::DEFAULT_TERM_CAP).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_legendre;
    use crate::states::harmonic_sq_cos;
    use approx::assert_relative_eq;

    #[test]
    fn isotropic_and_normalization_cases() {
        for alpha in 1..6 {
            assert_relative_eq!(j2_moment(0, 0, alpha).unwrap(), (4.0 * PI).powi(1 - alpha as i32), max_relative = 1e-13);
        }
        for l in 0..6 {
            for m in -(l as i32)..=(l as i32) {
                assert_relative_eq!(j2_moment(l, m, 1).unwrap(), 1.0, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn p_wave_square() {
        assert_relative_eq!(j2_moment(1, 0, 2).unwrap(), 9.0 / (20.0 * PI), max_relative = 1e-13);
    }

    #[test]
    fn matches_angular_quadrature() {
        for l in 0..5u32 {
            for m in -(l as i32)..=(l as i32) {
                for alpha in 2..4u32 {
                    let q = integrate_legendre(|x| harmonic_sq_cos(l, m.unsigned_abs(), x).powi(alpha as i32), 1e-13);
                    let expected = 2.0 * PI * q.value;
                    assert_relative_eq!(j2_moment(l, m, alpha).unwrap(), expected, max_relative = 1e-11);
                    assert_eq!(j2_moment(l, m, alpha).unwrap(), j2_moment(l, -m, alpha).unwrap());
                }
            }
        }
    }

    #[test]
    fn budget_and_domain() {
        assert!(matches!(ln_j2_moment(9, 0, 4, 1000), Err(Error::Budget { .. })));
        assert!(j2_moment(1, 2, 2).is_err());
        assert!(j2_moment(1, 0, 0).is_err());
    }
}
