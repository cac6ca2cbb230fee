//! Pseudoharmonic oscillator and its one-parameter isospectral family:
//! potentials, energies, wavefunctions and normalized position densities.
//!
//! All radial quantities are written in the variable `t = a r²`. The radial
//! volume element becomes `r² dr = √t dt / (2 a^{3/2})`, which is what makes
//! the normalization constants below come out in closed form.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::specfun::gamma::{ln_gamma_unchecked, lower_unchecked};
use crate::specfun::orthopoly::{laguerre_unchecked, legendre_unchecked};
use crate::specfun::{ln_factorial, ln_gamma};

/// Molecular constants of the pseudoharmonic potential.
///
/// Any consistent unit system works. With the molecule table, `mu` holds
/// `μc²` in eV and `hbar` holds `ħc` in eV·Å, so `a` is in Å⁻² and
/// `hbar * omega_r` in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoharmonicParams {
    pub de: f64,
    pub re: f64,
    pub mu: f64,
    pub hbar: f64,
}

impl PseudoharmonicParams {
    pub fn new(de: f64, re: f64, mu: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("D_e", de), ("r_e", re), ("mu", mu), ("hbar", hbar)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain("PseudoharmonicParams", format!("{name} = {v} must be positive")));
            }
        }
        Ok(Self { de, re, mu, hbar })
    }

    /// The reduced-unit system `D_e = 7/2, r_e = 1/2, μ = ħ = 1`.
    pub fn reduced_example() -> Self {
        Self { de: 3.5, re: 0.5, mu: 1.0, hbar: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Inverse squared length scale of the Gaussian factor.
    pub a: f64,
    /// Effective angular momentum, `≥ ℓ` and generally irrational.
    pub l_eff: f64,
    /// Radial angular frequency; energies use `hbar * omega_r`.
    pub omega_r: f64,
}

impl DerivedParams {
    /// `L + 3/2`, the shape parameter of the incomplete gammas.
    pub fn shape(&self) -> f64 {
        self.l_eff + 1.5
    }

    /// `L + 1/2`, the Laguerre parameter.
    pub fn laguerre_k(&self) -> f64 {
        self.l_eff + 0.5
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: u32,
    pub m: i32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(Error::domain("QuantumNumbers", format!("|m| = {} exceeds l = {l}", m.unsigned_abs())));
        }
        Ok(Self { n, l, m })
    }

    pub fn ground() -> Self {
        Self { n: 0, l: 0, m: 0 }
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.l, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsospectralParams {
    pub base: PseudoharmonicParams,
    pub lambda: f64,
}

impl IsospectralParams {
    pub fn new(base: PseudoharmonicParams, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self { base, lambda })
    }
}

/// Accepts `λ ∈ (−∞, −2) ∪ (1, ∞)`.
pub fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && (lambda < -2.0 || lambda > 1.0) {
        Ok(())
    } else {
        Err(Error::domain("isospectral family", format!("lambda = {lambda} outside (-inf, -2) U (1, inf)")))
    }
}

pub fn derive(params: &PseudoharmonicParams, l: u32) -> DerivedParams {
    let PseudoharmonicParams { de, re, mu, hbar } = *params;
    let a = (2.0 * mu * de).sqrt() / (hbar * re);
    let lf = l as f64;
    let l_eff = -0.5 + (lf * (lf + 1.0) + 0.25 + a * a * re.powi(4)).sqrt();
    let omega_r = (de / (2.0 * mu * re * re)).sqrt();
    DerivedParams { a, l_eff, omega_r }
}

/// Ro-vibrational energy `ħω_r(4n + 2L + 3) − 2D_e`, shared by both systems.
pub fn energy(params: &PseudoharmonicParams, qn: QuantumNumbers) -> f64 {
    let d = derive(params, qn.l);
    params.hbar * d.omega_r * (4.0 * qn.n as f64 + 2.0 * d.l_eff + 3.0) - 2.0 * params.de
}

/// Level spacing `4ħω_r` between consecutive `n` at fixed `ℓ`.
pub fn energy_spacing(params: &PseudoharmonicParams) -> f64 {
    4.0 * params.hbar * derive(params, 0).omega_r
}

pub fn pho_potential(params: &PseudoharmonicParams, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain("pho_potential", format!("r = {r} must be positive")));
    }
    let x = r / params.re - params.re / r;
    Ok(params.de * x * x)
}

/// `V(r) − (ħ²/μ) d²/dr² ln(λ + P(L+3/2, a r²))`.
pub fn iso_potential(params: &PseudoharmonicParams, l: u32, lambda: f64, r: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let v = pho_potential(params, r)?;
    let d = derive(params, l);
    let s = d.shape();
    let t = d.a * r * r;
    let p = lower_unchecked(s, t);
    // dP/dr = 2a r t^{L+1/2} e^{−t} / Γ(s)
    let dp = (2.0 * d.a).ln() + r.ln() + (d.l_eff + 0.5) * t.ln() - t - ln_gamma_unchecked(s);
    let dp = dp.exp();
    let d2p = dp * ((2.0 * d.l_eff + 2.0) / r - 2.0 * d.a * r);
    let denom = lambda + p;
    let second = d2p / denom - (dp / denom).powi(2);
    Ok(v - params.hbar * params.hbar / params.mu * second)
}

/// `|Y_ℓm(θ, φ)|²`, independent of `φ`.
pub fn sph_harm_sq(l: u32, m: i32, theta: f64) -> Result<f64> {
    if m.unsigned_abs() > l {
        return Err(Error::domain("sph_harm_sq", format!("|m| = {} exceeds l = {l}", m.unsigned_abs())));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::domain("sph_harm_sq", format!("theta = {theta} outside [0, pi]")));
    }
    Ok(harmonic_sq_cos(l, m.unsigned_abs(), theta.cos()))
}

pub(crate) fn harmonic_sq_cos(l: u32, am: u32, x: f64) -> f64 {
    let p = legendre_unchecked(l, am, x);
    harmonic_norm(l, am) * p * p
}

fn harmonic_norm(l: u32, am: u32) -> f64 {
    let ln_ratio = ln_factorial(l - am) - ln_factorial(l + am);
    (2 * l + 1) as f64 / (4.0 * PI) * ln_ratio.exp()
}

/// Angular factor of a separable density, normalized to one over the sphere.
#[derive(Clone)]
pub enum Angular {
    /// `|Y_ℓm|²`.
    Harmonic { l: u32, m: i32 },
    /// `1 / S_D`, the reciprocal area of the unit sphere in `D` dimensions.
    Isotropic,
}

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type PointFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    /// `ρ = exp(ln_radial(r)) · A(θ)` with `∫ exp(ln_radial) r^{D−1} dr = 1`.
    Separable { ln_radial: RadialFn, angular: Angular },
    /// Arbitrary `ρ(r, θ, φ)` in three dimensions.
    General { eval: PointFn, phi_uniform: bool },
}

/// A normalized density on `ℝ^D` in spherical coordinates.
#[derive(Clone)]
pub struct JointDensity {
    shape: Shape,
    pub dimension: u32,
    /// Length beyond which the radial tail is negligible; quadrature stops at
    /// twelve times this.
    pub radial_tail_scale: f64,
    /// Interior points where the radial integrand changes character.
    pub breakpoints: Vec<f64>,
    /// Radius past which the density vanishes identically, if any.
    pub support_radius: Option<f64>,
    pub sup_hint: Option<f64>,
    pub label: String,
}

impl fmt::Debug for JointDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JointDensity")
            .field("label", &self.label)
            .field("dimension", &self.dimension)
            .field("separable", &self.is_separable())
            .field("radial_tail_scale", &self.radial_tail_scale)
            .finish()
    }
}

impl JointDensity {
    pub fn separable(
        dimension: u32,
        ln_radial: impl Fn(f64) -> f64 + Send + Sync + 'static,
        angular: Angular,
        radial_tail_scale: f64,
    ) -> Self {
        Self {
            shape: Shape::Separable { ln_radial: Arc::new(ln_radial), angular },
            dimension,
            radial_tail_scale,
            breakpoints: Vec::new(),
            support_radius: None,
            sup_hint: None,
            label: String::new(),
        }
    }

    pub fn general(
        eval: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        phi_uniform: bool,
        radial_tail_scale: f64,
    ) -> Self {
        Self {
            shape: Shape::General { eval: Arc::new(eval), phi_uniform },
            dimension: 3,
            radial_tail_scale,
            breakpoints: Vec::new(),
            support_radius: None,
            sup_hint: None,
            label: String::new(),
        }
    }

    /// The uniform density on the unit ball in `D` dimensions.
    pub fn uniform_ball(dimension: u32, radius: f64) -> Self {
        let vol = ball_volume(dimension, radius);
        let ln_level = -vol.ln() + sphere_area(dimension).ln();
        let mut d = Self::separable(
            dimension,
            move |r| if r <= radius { ln_level } else { f64::NEG_INFINITY },
            Angular::Isotropic,
            radius,
        );
        d.support_radius = Some(radius);
        d.sup_hint = Some(1.0 / vol);
        d.label = format!("uniform ball D={dimension} R={radius}");
        d
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_breakpoints(mut self, points: Vec<f64>) -> Self {
        self.breakpoints = points;
        self
    }

    pub fn with_sup_hint(mut self, sup: f64) -> Self {
        self.sup_hint = Some(sup);
        self
    }

    pub fn with_support_radius(mut self, radius: f64) -> Self {
        self.support_radius = Some(radius);
        self
    }

    pub fn is_separable(&self) -> bool {
        matches!(self.shape, Shape::Separable { .. })
    }

    pub fn phi_uniform(&self) -> bool {
        match &self.shape {
            Shape::Separable { .. } => true,
            Shape::General { phi_uniform, .. } => *phi_uniform,
        }
    }

    /// `ρ(r, θ, φ)`.
    pub fn evaluate(&self, r: f64, theta: f64, phi: f64) -> f64 {
        match &self.shape {
            Shape::Separable { ln_radial, angular } => ln_radial(r).exp() * self.angular_value(angular, theta.cos()),
            Shape::General { eval, .. } => eval(r, theta, phi),
        }
    }

    pub(crate) fn radial_part(&self) -> Option<(&RadialFn, &Angular)> {
        match &self.shape {
            Shape::Separable { ln_radial, angular } => Some((ln_radial, angular)),
            Shape::General { .. } => None,
        }
    }

    pub(crate) fn general_part(&self) -> Option<&PointFn> {
        match &self.shape {
            Shape::General { eval, .. } => Some(eval),
            Shape::Separable { .. } => None,
        }
    }

    pub(crate) fn angular_value(&self, angular: &Angular, cos_theta: f64) -> f64 {
        match angular {
            Angular::Harmonic { l, m } => harmonic_sq_cos(*l, m.unsigned_abs(), cos_theta),
            Angular::Isotropic => 1.0 / sphere_area(self.dimension),
        }
    }

    /// Upper integration limit for the radial coordinate.
    pub fn radial_limit(&self) -> f64 {
        self.support_radius.unwrap_or(12.0 * self.radial_tail_scale)
    }

    /// Sorted breakpoints from zero to the radial limit.
    pub fn radial_grid(&self) -> Vec<f64> {
        let end = self.radial_limit();
        let mut pts = vec![0.0];
        pts.extend(self.breakpoints.iter().copied().filter(|&p| p > 0.0 && p < end));
        pts.push(end);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

/// Surface area `2π^{D/2}/Γ(D/2)` of the unit sphere in `ℝ^D`.
pub fn sphere_area(dimension: u32) -> f64 {
    let h = dimension as f64 / 2.0;
    2.0 * PI.powf(h) / ln_gamma_unchecked(h).exp()
}

/// Volume `C_D R^D` of the radius-`R` ball in `ℝ^D`.
pub fn ball_volume(dimension: u32, radius: f64) -> f64 {
    sphere_area(dimension) / dimension as f64 * radius.powi(dimension as i32)
}

/// Breakpoints around the radial peak at `t ≈ L`, spaced by the peak width.
fn peak_breakpoints(d: &DerivedParams, n: u32) -> Vec<f64> {
    let l = d.l_eff;
    let center = (l.max(0.5) / d.a).sqrt();
    let width = (0.5 * (1.0 + 2.0 * n as f64 + l).sqrt() / d.a.sqrt() / (l.max(1.0)).sqrt()).max(1e-3 * center);
    let spread = (n as f64 + 1.0) * width;
    (-10..=10)
        .map(|k| center + k as f64 * spread)
        .filter(|&r| r > 0.0)
        .collect()
}

/// `ln` of the pseudoharmonic radial density, normalized against `r² dr`.
pub fn pho_ln_radial(params: &PseudoharmonicParams, n: u32, l: u32) -> impl Fn(f64) -> f64 + Send + Sync + Clone {
    let d = derive(params, l);
    let (a, big_l, k, s) = (d.a, d.l_eff, d.laguerre_k(), d.shape());
    // a N² = n! 2 a^{3/2} / Γ(n + s)
    let ln_pref = ln_factorial(n) + (2.0f64).ln() + 1.5 * a.ln() - ln_gamma_unchecked(n as f64 + s);
    move |r: f64| {
        let t = a * r * r;
        if t == 0.0 {
            return f64::NEG_INFINITY;
        }
        let lag = laguerre_unchecked(n, k, t);
        ln_pref - t + big_l * t.ln() + 2.0 * lag.abs().ln()
    }
}

pub fn rho_pho(params: &PseudoharmonicParams, qn: QuantumNumbers) -> JointDensity {
    let d = derive(params, qn.l);
    let tail = ((2 * qn.n) as f64 + d.l_eff + 3.0).sqrt() / d.a.sqrt();
    JointDensity::separable(3, pho_ln_radial(params, qn.n, qn.l), Angular::Harmonic { l: qn.l, m: qn.m }, tail)
        .with_breakpoints(peak_breakpoints(&d, qn.n))
        .with_label(format!("pho{qn}"))
}

/// Radial factor `Φ_n / (λ + P)` of the isospectral wavefunction, together
/// with `ln(Ĉ_n² / Γ(s))`.
#[derive(Debug, Clone, Copy)]
pub struct IsoRadial {
    pub d: DerivedParams,
    pub n: u32,
    pub lambda: f64,
    ln_norm: f64,
}

impl IsoRadial {
    pub fn new(params: &PseudoharmonicParams, n: u32, l: u32, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        let d = derive(params, l);
        let s = d.shape();
        let ln_norm = if n == 0 {
            (lambda * (lambda + 1.0)).ln() - ln_gamma(s)?
        } else {
            ln_factorial(n) - ln_gamma(n as f64 + s)?
        };
        Ok(Self { d, n, lambda, ln_norm })
    }

    /// `Φ_n(t) / (λ + P(s, t))`.
    pub fn ratio(&self, t: f64) -> f64 {
        let s = self.d.shape();
        let p = lower_unchecked(s, t);
        let denom = self.lambda + p;
        if self.n == 0 {
            return 1.0 / denom;
        }
        let k = self.d.laguerre_k();
        let lead = laguerre_unchecked(self.n, k, t);
        if t == 0.0 {
            return lead;
        }
        let ln_dd = s * t.ln() - t - ln_gamma_unchecked(s);
        let corr = ln_dd.exp() * laguerre_unchecked(self.n - 1, k + 1.0, t) / (self.n as f64 * denom);
        lead - corr
    }

    /// `ln` of the radial density, normalized against `r² dr`.
    pub fn ln_radial(&self, r: f64) -> f64 {
        let t = self.d.a * r * r;
        if t == 0.0 {
            return f64::NEG_INFINITY;
        }
        (2.0f64).ln() + 1.5 * self.d.a.ln() + self.ln_norm + self.d.l_eff * t.ln() - t + 2.0 * self.ratio(t).abs().ln()
    }

    /// Signed radial wavefunction, normalized so that `∫ R² r² dr = 1`.
    pub fn wavefunction(&self, r: f64) -> f64 {
        let t = self.d.a * r * r;
        if t == 0.0 {
            return 0.0;
        }
        let half = 0.5 * ((2.0f64).ln() + 1.5 * self.d.a.ln() + self.ln_norm + self.d.l_eff * t.ln() - t);
        half.exp() * self.ratio(t)
    }
}

pub fn rho_iso(params: &PseudoharmonicParams, qn: QuantumNumbers, lambda: f64) -> Result<JointDensity> {
    let radial = IsoRadial::new(params, qn.n, qn.l, lambda)?;
    let d = radial.d;
    let tail = ((2 * qn.n) as f64 + d.l_eff + 3.0).sqrt() / d.a.sqrt();
    Ok(JointDensity::separable(3, move |r| radial.ln_radial(r), Angular::Harmonic { l: qn.l, m: qn.m }, tail)
        .with_breakpoints(peak_breakpoints(&d, qn.n))
        .with_label(format!("iso{qn} lambda={lambda}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, integrate_legendre, QuadConfig};
    use approx::assert_relative_eq;

    fn radial_norm(ln_radial: impl Fn(f64) -> f64, grid: &[f64]) -> f64 {
        integrate(|r| ln_radial(r).exp() * r * r, grid, &QuadConfig::default()).value
    }

    #[test]
    fn derived_parameters_reduced_units() {
        let d = derive(&PseudoharmonicParams::reduced_example(), 0);
        assert_relative_eq!(d.a, 2.0 * 7f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(d.l_eff, 2f64.sqrt() - 0.5, max_relative = 1e-14);
        assert_relative_eq!(d.omega_r, 7f64.sqrt(), max_relative = 1e-15);
        let p = PseudoharmonicParams::reduced_example();
        assert_relative_eq!(
            d.a * d.a * p.re.powi(4),
            2.0 * p.mu * p.de * p.re * p.re / (p.hbar * p.hbar),
            max_relative = 1e-14
        );
    }

    #[test]
    fn effective_l_grows_like_l() {
        let p = PseudoharmonicParams::reduced_example();
        let d = derive(&p, 100_000);
        assert!((d.l_eff / 100_000.0 - 1.0).abs() < 1e-4);
        for l in 0..10 {
            assert!(derive(&p, l).l_eff >= l as f64);
        }
    }

    #[test]
    fn energy_and_spacing() {
        let p = PseudoharmonicParams::reduced_example();
        let e0 = energy(&p, QuantumNumbers::ground());
        let expected = 7f64.sqrt() * (2.0 * (2f64.sqrt() - 0.5) + 3.0) - 7.0;
        assert_relative_eq!(e0, expected, max_relative = 1e-14);
        assert_relative_eq!(e0, 5.774_817_395_677_063, max_relative = 1e-14);
        for n in 0..5 {
            let gap = energy(&p, QuantumNumbers::new(n + 1, 2, 1).unwrap()) - energy(&p, QuantumNumbers::new(n, 2, 1).unwrap());
            assert_relative_eq!(gap, energy_spacing(&p), max_relative = 1e-13);
        }
    }

    #[test]
    fn potential_shape() {
        let p = PseudoharmonicParams::reduced_example();
        assert_eq!(pho_potential(&p, p.re).unwrap(), 0.0);
        assert_relative_eq!(pho_potential(&p, 2.0 * p.re).unwrap(), 2.25 * p.de, max_relative = 1e-15);
        for &r in &[0.1, 0.3, 0.9, 2.0] {
            assert_relative_eq!(
                pho_potential(&p, r).unwrap(),
                pho_potential(&p, p.re * p.re / r).unwrap(),
                max_relative = 1e-13
            );
        }
        assert!(pho_potential(&p, 0.0).is_err());
    }

    #[test]
    fn iso_potential_matches_finite_difference() {
        let p = PseudoharmonicParams::reduced_example();
        let d = derive(&p, 1);
        let f = |r: f64| (2.5 + lower_unchecked(d.shape(), d.a * r * r)).ln();
        for &r in &[0.2, 0.45, 0.7, 1.1] {
            let h = 1e-4;
            let fd = (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
            let expected = pho_potential(&p, r).unwrap() - fd;
            let got = iso_potential(&p, 1, 2.5, r).unwrap();
            assert!((got - expected).abs() < 1e-6 * expected.abs().max(1.0), "r={r}: {got} vs {expected}");
        }
    }

    #[test]
    fn iso_potential_limits() {
        let p = PseudoharmonicParams::reduced_example();
        let r = 0.6;
        let v = pho_potential(&p, r).unwrap();
        assert!((iso_potential(&p, 0, 1e12, r).unwrap() - v).abs() < 1e-9);
        let tiny = iso_potential(&p, 0, 2.5, 1e-3).unwrap() - pho_potential(&p, 1e-3).unwrap();
        assert!(tiny.abs() < 1e-3);
        assert!(iso_potential(&p, 0, 0.5, r).is_err());
    }

    #[test]
    fn harmonics() {
        assert_relative_eq!(sph_harm_sq(0, 0, 1.2).unwrap(), 1.0 / (4.0 * PI), max_relative = 1e-15);
        assert_relative_eq!(sph_harm_sq(1, 0, 0.0).unwrap(), 3.0 / (4.0 * PI), max_relative = 1e-15);
        for l in 0..5u32 {
            for m in -(l as i32)..=(l as i32) {
                let q = integrate_legendre(|x| harmonic_sq_cos(l, m.unsigned_abs(), x), 1e-12);
                assert_relative_eq!(2.0 * PI * q.value, 1.0, max_relative = 1e-13);
            }
        }
        assert!(sph_harm_sq(1, 2, 0.3).is_err());
    }

    #[test]
    fn pho_densities_normalized() {
        let p = PseudoharmonicParams::reduced_example();
        for n in 0..4 {
            for l in 0..3 {
                let rho = rho_pho(&p, QuantumNumbers::new(n, l, 0).unwrap());
                let (lr, _) = rho.radial_part().unwrap();
                assert_relative_eq!(radial_norm(|r| lr(r), &rho.radial_grid()), 1.0, max_relative = 1e-10);
                assert_eq!(rho.evaluate(0.0, 0.3, 0.0), 0.0);
            }
        }
    }

    #[test]
    fn iso_densities_normalized() {
        let p = PseudoharmonicParams::reduced_example();
        for &lambda in &[-3.0, 1.5, 2.5] {
            for n in 0..3 {
                for l in 0..2 {
                    let rho = rho_iso(&p, QuantumNumbers::new(n, l, 0).unwrap(), lambda).unwrap();
                    let (lr, _) = rho.radial_part().unwrap();
                    assert_relative_eq!(radial_norm(|r| lr(r), &rho.radial_grid()), 1.0, max_relative = 1e-9);
                }
            }
        }
        assert!(rho_iso(&p, QuantumNumbers::ground(), -1.5).is_err());
    }

    #[test]
    fn iso_wavefunctions_orthonormal() {
        let p = PseudoharmonicParams::reduced_example();
        for &lambda in &[-3.0, 2.5] {
            let waves: Vec<IsoRadial> = (0..4).map(|n| IsoRadial::new(&p, n, 1, lambda).unwrap()).collect();
            let grid = rho_iso(&p, QuantumNumbers::new(3, 1, 0).unwrap(), lambda).unwrap().radial_grid();
            for i in 0..4 {
                for j in 0..4 {
                    let v = integrate(|r| waves[i].wavefunction(r) * waves[j].wavefunction(r) * r * r, &grid, &QuadConfig::default())
                        .value;
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((v - expected).abs() < 1e-8, "lambda={lambda} <{i}|{j}> = {v}");
                }
            }
        }
    }

    #[test]
    fn iso_tends_to_pho_for_large_lambda() {
        let p = PseudoharmonicParams::reduced_example();
        let qn = QuantumNumbers::new(1, 1, 0).unwrap();
        let pho = rho_pho(&p, qn);
        let iso = rho_iso(&p, qn, 1e4).unwrap();
        let mut sup = 0.0f64;
        let mut gap = 0.0f64;
        for i in 1..400 {
            let r = i as f64 * 0.005;
            let a = pho.evaluate(r, 0.4, 0.0);
            sup = sup.max(a);
            gap = gap.max((a - iso.evaluate(r, 0.4, 0.0)).abs());
        }
        assert!(gap < 1e-3 * sup);
    }

    #[test]
    fn iso_denominator_bounded_away_from_zero() {
        let p = PseudoharmonicParams::reduced_example();
        let d = derive(&p, 0);
        for &lambda in &[-3.0, -2.0001, 1.0001, 1.5] {
            let mut min = f64::INFINITY;
            for i in 0..2000 {
                let t = i as f64 * 0.01;
                min = min.min((lambda + lower_unchecked(d.shape(), t)).abs());
            }
            assert!(min >= 1.0 - 1e-12);
        }
    }
}
