//! Order-α information measures of a [`JointDensity`] by adaptive quadrature,
//! plus complexity ratios and the entropic upper bound on them.
//!
//! These are the reference values the closed forms are checked against.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, integrate, integrate_legendre, QuadConfig, QuadResult};
use crate::specfun::gamma::ln_gamma_unchecked;
use crate::specfun::{NeumaierSum, SeriesDiagnostics};
use crate::states::{sphere_area, Angular, JointDensity};

/// Agreement required between successive angular rule orders.
const ANGULAR_TOL: f64 = 1e-11;

/// A positive order; `1` selects the Shannon branch everywhere.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::domain("Order", format!("order {value} must be positive and finite")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_shannon(self) -> bool {
        self.0 == 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Quadrature,
    Closed,
    Exact,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Quadrature => "quad",
            Method::Closed => "closed",
            Method::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureValue {
    pub value: f64,
    pub method: Method,
    pub abs_error: f64,
    pub diagnostics: Option<SeriesDiagnostics>,
    /// False when a quadrature or series stopped short of its tolerance; the
    /// error estimate is inflated in that case.
    pub converged: bool,
    pub notes: Vec<String>,
}

impl MeasureValue {
    pub fn exact(value: f64) -> Self {
        Self { value, method: Method::Exact, abs_error: 0.0, diagnostics: None, converged: true, notes: Vec::new() }
    }

    fn quad(value: f64, abs_error: f64, converged: bool) -> Self {
        let abs_error = if converged { abs_error } else { 10.0 * abs_error.max(f64::EPSILON * value.abs()) };
        Self { value, method: Method::Quadrature, abs_error, diagnostics: None, converged, notes: Vec::new() }
    }

    /// Apply a smooth map, propagating the error estimate by its derivative.
    pub fn map(&self, f: impl Fn(f64) -> f64, derivative: f64) -> Self {
        Self { value: f(self.value), abs_error: derivative.abs() * self.abs_error, ..self.clone() }
    }

    pub(crate) fn combine(&self, other: &Self, value: f64, abs_error: f64) -> Self {
        let mut notes = self.notes.clone();
        notes.extend(other.notes.iter().cloned());
        Self {
            value,
            method: if self.method == other.method { self.method } else { Method::Quadrature },
            abs_error,
            diagnostics: match (self.diagnostics, other.diagnostics) {
                (Some(a), Some(b)) => Some(a.merge(b)),
                (a, b) => a.or(b),
            },
            converged: self.converged && other.converged,
            notes,
        }
    }
}

fn radial_config() -> QuadConfig {
    QuadConfig { rel_tol: 1e-12, abs_tol: 1e-300, max_segments: 4000 }
}

/// `∫ g(R(r)) r^{D−1+extra} dr` over the density's radial grid, with `g`
/// applied to `ln R`.
fn radial_integral(rho: &JointDensity, extra_power: i32, g: impl Fn(f64) -> f64) -> QuadResult {
    let (ln_radial, _) = rho.radial_part().expect("separable density");
    let power = rho.dimension as i32 - 1 + extra_power;
    integrate(
        |r| {
            let lr = ln_radial(r);
            if lr == f64::NEG_INFINITY {
                0.0
            } else {
                g(lr) * r.powi(power)
            }
        },
        &rho.radial_grid(),
        &radial_config(),
    )
}

/// `∫ g(A) dΩ` for the angular factor.
fn angular_integral(rho: &JointDensity, angular: &Angular, g: impl Fn(f64) -> f64) -> QuadResult {
    match angular {
        Angular::Harmonic { .. } => {
            let mut q = integrate_legendre(|x| g(rho.angular_value(angular, x)), ANGULAR_TOL);
            q.value *= 2.0 * PI;
            q.abs_error *= 2.0 * PI;
            q
        }
        Angular::Isotropic => {
            let area = sphere_area(rho.dimension);
            QuadResult { value: area * g(1.0 / area), abs_error: 0.0, evaluations: 1, converged: true }
        }
    }
}

/// Triple integral `∫ h(ρ) r^{2+extra} dr dcosθ dφ` for a general 3-D density.
///
/// The angular rule order is fixed up front: doubled from 64 until two orders
/// agree at a set of probe radii, then reused for every radial node.
fn general_integral(rho: &JointDensity, extra_power: i32, h: impl Fn(f64) -> f64) -> QuadResult {
    let eval = rho.general_part().expect("general density");
    let phi_uniform = rho.phi_uniform();
    let shell = |r: f64, rule: &(Vec<f64>, Vec<f64>)| -> f64 {
        let (x, w) = rule;
        let mut acc = NeumaierSum::new();
        for (xi, wi) in x.iter().zip(w) {
            let theta = xi.acos();
            let v = if phi_uniform {
                2.0 * PI * h(eval(r, theta, 0.0))
            } else {
                let mut ring = NeumaierSum::new();
                for (uj, vj) in x.iter().zip(w) {
                    ring.add(vj * PI * h(eval(r, theta, PI * (uj + 1.0))));
                }
                ring.value()
            };
            acc.add(wi * v);
        }
        acc.value()
    };
    let grid = rho.radial_grid();
    let probes: Vec<f64> = grid.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let mut order = 64;
    let mut rule = gauss_legendre(order);
    let mut angular_ok = false;
    while order < 1024 {
        let finer = gauss_legendre(2 * order);
        angular_ok = probes.iter().all(|&r| {
            let a = shell(r, &rule);
            let b = shell(r, &finer);
            (a - b).abs() <= ANGULAR_TOL * b.abs().max(f64::MIN_POSITIVE)
        });
        order *= 2;
        rule = finer;
        if angular_ok {
            break;
        }
    }
    let mut q = integrate(
        |r| shell(r, &rule) * r.powi(2 + extra_power),
        &grid,
        &QuadConfig { rel_tol: 1e-10, abs_tol: 1e-300, max_segments: 2000 },
    );
    q.converged &= angular_ok;
    q
}

/// `I^{(α)} = ∫ ρ^α dV`.
pub fn entropic_moment(rho: &JointDensity, alpha: f64) -> Result<MeasureValue> {
    let a = Order::new(alpha)?.value();
    if let Some((_, angular)) = rho.radial_part() {
        let rad = radial_integral(rho, 0, |lr| (a * lr).exp());
        let ang = angular_integral(rho, angular, |y| if y > 0.0 { y.powf(a) } else { 0.0 });
        let value = rad.value * ang.value;
        let err = rad.abs_error * ang.value.abs() + ang.abs_error * rad.value.abs();
        Ok(MeasureValue::quad(value, err, rad.converged && ang.converged))
    } else {
        let q = general_integral(rho, 0, |y| if y > 0.0 { y.powf(a) } else { 0.0 });
        Ok(MeasureValue::quad(q.value, q.abs_error, q.converged))
    }
}

/// `∫ ρ dV`, which should be one.
pub fn normalization(rho: &JointDensity) -> Result<MeasureValue> {
    entropic_moment(rho, 1.0)
}

/// Shannon entropy `−∫ ρ ln ρ dV`.
pub fn shannon(rho: &JointDensity) -> Result<MeasureValue> {
    let xlogx = |y: f64| if y > 0.0 { y * y.ln() } else { 0.0 };
    if let Some((_, angular)) = rho.radial_part() {
        let rad_norm = radial_integral(rho, 0, f64::exp);
        let rad_ent = radial_integral(rho, 0, |lr| lr.exp() * lr);
        let ang_norm = angular_integral(rho, angular, |y| y);
        let ang_ent = angular_integral(rho, angular, xlogx);
        let value = -(rad_ent.value * ang_norm.value + rad_norm.value * ang_ent.value);
        let err = rad_ent.abs_error + ang_ent.abs_error + (rad_norm.abs_error + ang_norm.abs_error) * value.abs();
        let ok = rad_norm.converged && rad_ent.converged && ang_norm.converged && ang_ent.converged;
        Ok(MeasureValue::quad(value, err, ok))
    } else {
        let q = general_integral(rho, 0, xlogx);
        Ok(MeasureValue::quad(-q.value, q.abs_error, q.converged))
    }
}

/// Rényi entropy; order one is the Shannon entropy.
pub fn renyi(rho: &JointDensity, alpha: f64) -> Result<MeasureValue> {
    let order = Order::new(alpha)?;
    if order.is_shannon() {
        return shannon(rho);
    }
    let moment = entropic_moment(rho, alpha)?;
    let k = 1.0 / (1.0 - alpha);
    Ok(moment.map(|i| k * i.ln(), k / moment.value))
}

/// Tsallis entropy `(1 − I^{(α)})/(α − 1)`; order one is the Shannon entropy.
pub fn tsallis(rho: &JointDensity, alpha: f64) -> Result<MeasureValue> {
    let order = Order::new(alpha)?;
    if order.is_shannon() {
        return shannon(rho);
    }
    let moment = entropic_moment(rho, alpha)?;
    let k = 1.0 / (alpha - 1.0);
    Ok(moment.map(|i| k * (1.0 - i), k))
}

fn check_not_shannon(op: &'static str, alpha: f64) -> Result<()> {
    Order::new(alpha)?;
    if alpha == 1.0 {
        return Err(Error::domain(op, "order 1 has no conversion; both entropies equal the Shannon entropy there"));
    }
    Ok(())
}

pub fn tsallis_from_renyi(renyi: f64, alpha: f64) -> Result<f64> {
    check_not_shannon("tsallis_from_renyi", alpha)?;
    Ok((1.0 - ((1.0 - alpha) * renyi).exp()) / (alpha - 1.0))
}

pub fn renyi_from_tsallis(tsallis: f64, alpha: f64) -> Result<f64> {
    check_not_shannon("renyi_from_tsallis", alpha)?;
    Ok((1.0 + (1.0 - alpha) * tsallis).ln() / (1.0 - alpha))
}

/// Volume of the unit ball, `C_D`.
fn unit_ball_volume(dimension: u32) -> f64 {
    sphere_area(dimension) / dimension as f64
}

/// Rényi length `(V/C_D)^{1/D}` with Rényi volume `V = e^{R}`; for `D = 3` this is
/// `(3/(4π))^{1/3} e^{R/3}`.
pub fn renyi_length(rho: &JointDensity, alpha: f64) -> Result<MeasureValue> {
    let r = renyi(rho, alpha)?;
    let d = rho.dimension as f64;
    let c = unit_ball_volume(rho.dimension);
    let len = (r.value / d).exp() / c.powf(1.0 / d);
    Ok(r.map(|_| len, len / d))
}

/// Disequilibrium `e^{−R^{(2)}} = ∫ρ²`.
pub fn disequilibrium(rho: &JointDensity) -> Result<MeasureValue> {
    let r = renyi(rho, 2.0)?;
    let v = (-r.value).exp();
    Ok(r.map(|_| v, v))
}

/// Rényi complexity ratio `exp(R_f^{(α)} − R_g^{(β)})`.
pub fn rcr(f: &JointDensity, g: &JointDensity, alpha: f64, beta: f64) -> Result<MeasureValue> {
    let rf = renyi(f, alpha)?;
    let rg = renyi(g, beta)?;
    let v = (rf.value - rg.value).exp();
    Ok(rf.combine(&rg, v, v * (rf.abs_error + rg.abs_error)))
}

/// Generalized Rényi complexity of one density at two orders.
pub fn grc(rho: &JointDensity, alpha: f64, beta: f64) -> Result<MeasureValue> {
    if alpha == beta {
        Order::new(alpha)?;
        return Ok(MeasureValue::exact(1.0));
    }
    rcr(rho, rho, alpha, beta)
}

/// Shape Rényi complexity, `grc(ρ, α, 2)`.
pub fn src(rho: &JointDensity, alpha: f64) -> Result<MeasureValue> {
    grc(rho, alpha, 2.0)
}

/// LMC complexity, `grc(ρ, 1, 2)`.
pub fn lmc(rho: &JointDensity) -> Result<MeasureValue> {
    grc(rho, 1.0, 2.0)
}

/// Structural entropy `R^{(1)} − R^{(2)} = ln lmc`.
pub fn structural_entropy(rho: &JointDensity) -> Result<MeasureValue> {
    let s = renyi(rho, 1.0)?;
    let r2 = renyi(rho, 2.0)?;
    Ok(s.combine(&r2, s.value - r2.value, s.abs_error + r2.abs_error))
}

/// Maximal Rényi entropy at fixed second moment, in the form
/// `ln(max e^{R}) − (D/2) ln(⟨r²⟩/D)`; defined for `α > D/(D+2)`.
pub fn bound_b(dimension: u32, alpha: f64) -> Result<f64> {
    let d = dimension as f64;
    if dimension == 0 || !(alpha > d / (d + 2.0)) || !alpha.is_finite() {
        return Err(Error::domain("bound_b", format!("alpha = {alpha} must exceed D/(D+2) = {}", d / (d + 2.0))));
    }
    let q = (2.0 + d) * alpha - d;
    if alpha == 1.0 {
        return Ok(0.5 * d * (2.0 * PI * std::f64::consts::E).ln());
    }
    if alpha < 1.0 {
        let w = 1.0 - alpha;
        Ok(0.5 * d * (PI * q / w).ln() - alpha / w * (q / (2.0 * alpha)).ln()
            - (ln_gamma_unchecked(alpha / w) - ln_gamma_unchecked(q / (2.0 * w))))
    } else {
        let w = alpha - 1.0;
        Ok(0.5 * d * (PI * q / w).ln() + alpha / w * (q / (2.0 * alpha)).ln()
            + (ln_gamma_unchecked(alpha / w) - ln_gamma_unchecked(q / (2.0 * w))))
    }
}

/// `‖ρ‖∞`, from the density's hint when present, else by grid search with
/// golden-section refinement. The flag is true when the value is approximate.
pub fn sup_norm(rho: &JointDensity) -> (f64, bool) {
    if let Some(s) = rho.sup_hint {
        return (s, false);
    }
    if let Some((ln_radial, angular)) = rho.radial_part() {
        let lr = |r: f64| ln_radial(r);
        let r_max = maximize(lr, 0.0, rho.radial_limit(), &rho.radial_grid());
        let ang = match angular {
            Angular::Isotropic => 1.0 / sphere_area(rho.dimension),
            Angular::Harmonic { .. } => {
                let a = |x: f64| rho.angular_value(angular, x);
                let x = maximize(a, -1.0, 1.0, &[-1.0, 1.0]);
                a(x).max(a(-1.0)).max(a(1.0))
            }
        };
        (lr(r_max).exp() * ang, true)
    } else {
        let mut best = 0.0f64;
        let lim = rho.radial_limit();
        for i in 0..=200 {
            let r = lim * i as f64 / 200.0;
            for j in 0..=64 {
                let theta = PI * j as f64 / 64.0;
                for k in 0..32 {
                    best = best.max(rho.evaluate(r, theta, 2.0 * PI * k as f64 / 32.0));
                }
            }
        }
        (best, true)
    }
}

/// Argmax of `f` on `[lo, hi]`: dense scan then golden-section refinement.
fn maximize(f: impl Fn(f64) -> f64, lo: f64, hi: f64, extra: &[f64]) -> f64 {
    let n = 4000;
    let mut best_x = lo;
    let mut best = f64::NEG_INFINITY;
    let candidates = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).chain(extra.iter().copied());
    for x in candidates {
        let v = f(x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    let step = (hi - lo) / n as f64;
    let (mut a, mut b) = ((best_x - step).max(lo), (best_x + step).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let x = 0.5 * (a + b);
    if f(x) >= best {
        x
    } else {
        best_x
    }
}

/// `⟨r²⟩ = ∫ ρ r² dV`.
pub fn second_moment(rho: &JointDensity) -> Result<MeasureValue> {
    if let Some((_, angular)) = rho.radial_part() {
        let rad = radial_integral(rho, 2, f64::exp);
        let ang = angular_integral(rho, angular, |y| y);
        Ok(MeasureValue::quad(rad.value * ang.value, rad.abs_error + ang.abs_error * rad.value, rad.converged))
    } else {
        let q = general_integral(rho, 2, |y| y);
        Ok(MeasureValue::quad(q.value, q.abs_error, q.converged))
    }
}

/// The three-branch factor multiplying the sup norm in the improved bound.
pub fn g_factor(g: &JointDensity, beta: f64, sup: f64) -> Result<(f64, Vec<String>)> {
    Order::new(beta)?;
    let mut notes = Vec::new();
    let value = if beta < 1.0 {
        if sup > 1.0 {
            notes.push(format!("sup norm {sup} exceeds 1; the beta < 1 factor assumes densities valued in [0, 1]"));
        }
        sup.powf(-beta / (1.0 - beta))
    } else if beta == 1.0 {
        let diseq = disequilibrium(g)?.value;
        let r3 = renyi(g, 3.0)?.value;
        if r3 > 0.0 {
            notes.push("beta = 1 factor D_g^2 / sqrt(R_g^(3)) used as printed".to_string());
            diseq * diseq / r3.sqrt()
        } else {
            notes.push(format!("R_g^(3) = {r3} <= 0 makes the beta = 1 factor undefined; using the sup norm"));
            sup
        }
    } else {
        sup
    };
    Ok((value, notes))
}

/// `min{G_g(β), ‖g‖∞} · (⟨r²⟩_f/D)^{D/2} · e^{B_D(α)}`.
pub fn rcr_upper_bound(f: &JointDensity, g: &JointDensity, alpha: f64, beta: f64) -> Result<MeasureValue> {
    let dim = f.dimension;
    let b = bound_b(dim, alpha)?;
    let (sup, approx) = sup_norm(g);
    let (gf, mut notes) = g_factor(g, beta, sup)?;
    if approx {
        notes.push("sup norm of g found by grid search; bound is approximate".to_string());
    }
    let r2 = second_moment(f)?;
    let d = dim as f64;
    let value = gf.min(sup) * (r2.value / d).powf(d / 2.0) * b.exp();
    let rel = 0.5 * d * r2.abs_error / r2.value;
    Ok(MeasureValue { value, method: Method::Quadrature, abs_error: rel * value, diagnostics: None, converged: r2.converged, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{rho_iso, rho_pho, PseudoharmonicParams, QuantumNumbers};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ball() -> JointDensity {
        JointDensity::uniform_ball(3, 1.0)
    }

    #[test]
    fn uniform_ball_measures() {
        let c3 = 4.0 * PI / 3.0;
        assert_relative_eq!(entropic_moment(&ball(), 2.0).unwrap().value, 3.0 / (4.0 * PI), max_relative = 1e-12);
        for &a in &[0.5, 1.0, 2.0, 3.7] {
            assert_relative_eq!(renyi(&ball(), a).unwrap().value, c3.ln(), max_relative = 1e-12);
            assert_relative_eq!(renyi_length(&ball(), a).unwrap().value, 1.0, max_relative = 1e-12);
        }
        assert_relative_eq!(disequilibrium(&ball()).unwrap().value, 3.0 / (4.0 * PI), max_relative = 1e-12);
        assert_relative_eq!(grc(&ball(), 0.5, 3.0).unwrap().value, 1.0, max_relative = 1e-12);
        assert_relative_eq!(second_moment(&ball()).unwrap().value, 0.6, max_relative = 1e-12);
        assert_relative_eq!(sup_norm(&ball()).0, 3.0 / (4.0 * PI));
    }

    #[test]
    fn moment_of_order_one_is_normalization() {
        let p = PseudoharmonicParams::reduced_example();
        let rho = rho_pho(&p, QuantumNumbers::new(2, 1, 1).unwrap());
        assert_relative_eq!(normalization(&rho).unwrap().value, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn ground_state_moment_matches_gamma_integral() {
        let p = PseudoharmonicParams::reduced_example();
        let d = crate::states::derive(&p, 0);
        let (a, l) = (d.a, d.l_eff);
        // a N_0² = 2 a^{3/2} / Γ(L+3/2); radial integral Γ(2L+3/2)/(2(2a)^{2L+3/2}) after scaling r.
        let an2 = 2.0 * a.powf(1.5) / ln_gamma_unchecked(l + 1.5).exp();
        let radial = an2 * an2 * a.powf(2.0 * l) * ln_gamma_unchecked(2.0 * l + 1.5).exp() / (2.0 * (2.0 * a).powf(2.0 * l + 1.5));
        let expected = radial / (4.0 * PI);
        let got = entropic_moment(&rho_pho(&p, QuantumNumbers::ground()), 2.0).unwrap();
        assert_relative_eq!(got.value, expected, max_relative = 1e-11);
    }

    #[test]
    fn shannon_is_bracketed_by_nearby_orders() {
        let p = PseudoharmonicParams::reduced_example();
        let rho = rho_iso(&p, QuantumNumbers::new(1, 1, 0).unwrap(), 2.5).unwrap();
        let s = shannon(&rho).unwrap().value;
        let h = 1e-4;
        let lo = renyi(&rho, 1.0 - h).unwrap().value;
        let hi = renyi(&rho, 1.0 + h).unwrap().value;
        assert!(hi <= s + 1e-6 && s <= lo + 1e-6, "{hi} {s} {lo}");
        assert!((0.5 * (lo + hi) - s).abs() < 1e-6);
    }

    #[test]
    fn tsallis_basics() {
        assert_relative_eq!(tsallis_from_renyi(-(0.5f64).ln(), 2.0).unwrap(), 0.5, max_relative = 1e-15);
        assert!(tsallis_from_renyi(1.0, 1.0).is_err());
        let p = PseudoharmonicParams::reduced_example();
        let rho = rho_pho(&p, QuantumNumbers::new(1, 0, 0).unwrap());
        let r = renyi(&rho, 2.5).unwrap().value;
        let t = tsallis(&rho, 2.5).unwrap().value;
        assert_relative_eq!(tsallis_from_renyi(r, 2.5).unwrap(), t, max_relative = 1e-10);
    }

    #[test]
    fn bound_b_values() {
        assert_relative_eq!(bound_b(3, 1.0).unwrap(), 4.256_815_599_614_018, max_relative = 1e-14);
        let at = bound_b(3, 1.0).unwrap();
        assert!((bound_b(3, 1.0 + 1e-5).unwrap() - at).abs() < 1e-4);
        assert!((bound_b(3, 1.0 - 1e-5).unwrap() - at).abs() < 1e-4);
        assert!((bound_b(3, 1.0 + 1e-7).unwrap() - at).abs() < 1e-6);
        assert!(bound_b(3, 2.0).unwrap().is_finite());
        assert!(bound_b(3, 0.6).is_err());
        assert!(bound_b(1, 0.4).is_ok());
    }

    #[test]
    fn bound_b_alpha_two_independent_transcription() {
        // α = 2, D = 3: (3/2) ln(7π) + 2 ln(7/4) + ln(Γ(2)/Γ(7/2)).
        let expected = 1.5 * (7.0 * PI).ln() + 2.0 * (7.0f64 / 4.0).ln() - (15.0 * PI.sqrt() / 8.0).ln();
        assert_relative_eq!(bound_b(3, 2.0).unwrap(), expected, max_relative = 1e-14);
    }

    #[test]
    fn bound_holds_for_ball_and_ground_state() {
        let p = PseudoharmonicParams::reduced_example();
        let rho = rho_pho(&p, QuantumNumbers::ground());
        for &(a, b) in &[(2.0, 3.0), (0.8, 2.0), (1.0, 0.5), (3.0, 0.7)] {
            for (f, g) in [(&ball(), &ball()), (&rho, &ball()), (&ball(), &rho)] {
                let c = rcr(f, g, a, b).unwrap().value;
                let ub = rcr_upper_bound(f, g, a, b).unwrap().value;
                assert!(c <= ub, "{} {} a={a} b={b}: {c} > {ub}", f.label, g.label);
            }
        }
    }

    #[test]
    fn sup_norm_by_search_matches_closed_value() {
        // Ground state radial maximum sits at t = L.
        let p = PseudoharmonicParams::reduced_example();
        let rho = rho_pho(&p, QuantumNumbers::ground());
        let d = crate::states::derive(&p, 0);
        let (lr, _) = rho.radial_part().unwrap();
        let expected = lr((d.l_eff / d.a).sqrt()).exp() / (4.0 * PI);
        let (sup, approx) = sup_norm(&rho);
        assert!(approx);
        assert_relative_eq!(sup, expected, max_relative = 1e-10);
    }

    #[test]
    fn general_density_matches_separable() {
        let p = PseudoharmonicParams::reduced_example();
        let sep = rho_pho(&p, QuantumNumbers::new(0, 1, 1).unwrap());
        let clone = sep.clone();
        let gen = JointDensity::general(move |r, t, f| clone.evaluate(r, t, f), false, sep.radial_tail_scale)
            .with_breakpoints(sep.breakpoints.clone());
        let a = entropic_moment(&sep, 2.0).unwrap().value;
        let b = entropic_moment(&gen, 2.0).unwrap().value;
        assert_relative_eq!(a, b, max_relative = 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn tsallis_round_trip(r in -20.0f64..20.0, alpha in 0.05f64..6.0) {
            prop_assume!((alpha - 1.0).abs() > 1e-3 && (1.0 - alpha) * r > -5.0);
            let t = tsallis_from_renyi(r, alpha).unwrap();
            let back = renyi_from_tsallis(t, alpha).unwrap();
            prop_assert!((back - r).abs() <= 1e-12 * r.abs().max(1.0));
        }
    }
}
