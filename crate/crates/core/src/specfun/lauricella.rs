//! Terminating Lauricella `F_A` sums and the `A_p` coefficient built on them.
//!
//! ```text
//! A_p(μ, β, {m_i}, {a_i}, {t_i}) = (β+1)_μ · Π_i C(m_i + a_i, m_i)
//!     · Σ_{j_1..j_s, k} (μ+β+1)_{J+k} Π_i (−m_i)_{j_i} t_i^{j_i} / ((a_i+1)_{j_i} j_i!)
//!                                    · (−p)_k / ((β+1)_k k!)
//! ```
//!
//! Every upper parameter `−m_i`, `−p` is a nonpositive integer, so the sum is
//! a finite nested loop with `j_i ∈ [0, m_i]` and `k ∈ [0, p]`.

use super::gamma::{binomial, ln_gamma};
use super::summation::{DoubleDouble, NeumaierSum, CANCELLATION_RATIO};
use crate::error::{Error, Result};

/// Bookkeeping for a finite or truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SeriesDiagnostics {
    pub terms_used: u64,
    pub last_term_magnitude: f64,
    /// A configured term cap was hit before the tolerance was met.
    pub truncation_flag: bool,
    /// Peak partial sum exceeded `1e6 ×` the result.
    pub cancellation_flag: bool,
    /// The value was recomputed in double-double arithmetic.
    pub extended_precision: bool,
}

impl SeriesDiagnostics {
    /// Combine diagnostics of sub-evaluations feeding one result.
    pub fn merge(self, other: SeriesDiagnostics) -> SeriesDiagnostics {
        SeriesDiagnostics {
            terms_used: self.terms_used + other.terms_used,
            last_term_magnitude: self.last_term_magnitude.max(other.last_term_magnitude),
            truncation_flag: self.truncation_flag || other.truncation_flag,
            cancellation_flag: self.cancellation_flag || other.cancellation_flag,
            extended_precision: self.extended_precision || other.extended_precision,
        }
    }
}

/// A coefficient held as `sign · exp(ln_abs)` so that huge Pochhammer
/// prefactors never have to be materialised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub ln_abs: f64,
    pub sign: f64,
    pub diagnostics: SeriesDiagnostics,
}

impl ScaledValue {
    /// The plain value; errors instead of saturating to infinity.
    pub fn value(&self) -> Result<f64> {
        if self.sign == 0.0 {
            return Ok(0.0);
        }
        let v = self.ln_abs.exp();
        if !v.is_finite() {
            return Err(Error::Overflow {
                op: "lauricella_a_coeff",
                detail: format!("ln|A| = {:.3} exceeds f64 range; use the scaled form", self.ln_abs),
            });
        }
        Ok(self.sign * v)
    }
}

/// Default budget on the number of nested-loop terms.
pub const DEFAULT_TERM_CAP: u128 = 10_000_000;

fn check_args(degrees: &[u32], params: &[f64], args: &[f64]) -> Result<()> {
    if degrees.is_empty() {
        return Err(Error::domain("lauricella_a_coeff", "degree list must be nonempty"));
    }
    if degrees.len() != params.len() || degrees.len() != args.len() {
        return Err(Error::domain(
            "lauricella_a_coeff",
            format!(
                "list lengths differ: {} degrees, {} params, {} args",
                degrees.len(),
                params.len(),
                args.len()
            ),
        ));
    }
    if let Some(a) = params.iter().find(|a| !(**a > -1.0)) {
        return Err(Error::domain("lauricella_a_coeff", format!("lower parameter a + 1 = {} must be positive", a + 1.0)));
    }
    Ok(())
}

fn term_count(degrees: &[u32], p: u32) -> u128 {
    degrees.iter().fold(p as u128 + 1, |acc, &m| acc.saturating_mul(m as u128 + 1))
}

/// ln of the prefactor `(β+1)_μ · Π C(m_i + a_i, m_i)` with its sign.
fn prefactor(mu: f64, beta: f64, degrees: &[u32], params: &[f64]) -> Result<(f64, f64)> {
    let ln_poch = ln_gamma(beta + 1.0 + mu)? - ln_gamma(beta + 1.0)?;
    let mut ln_abs = ln_poch;
    let mut sign = 1.0;
    for (&m, &a) in degrees.iter().zip(params) {
        let b = binomial(m as f64 + a, m);
        if b == 0.0 {
            return Ok((f64::NEG_INFINITY, 0.0));
        }
        sign *= b.signum();
        ln_abs += b.abs().ln();
    }
    Ok((ln_abs, sign))
}

/// Mixed-radix odometer over `j_i ∈ [0, m_i]`.
struct Odometer<'a> {
    limits: &'a [u32],
    state: Vec<u32>,
    done: bool,
}

impl<'a> Odometer<'a> {
    fn new(limits: &'a [u32]) -> Self {
        Self { limits, state: vec![0; limits.len()], done: false }
    }

    fn advance(&mut self) {
        for (s, &lim) in self.state.iter_mut().zip(self.limits) {
            if *s < lim {
                *s += 1;
                return;
            }
            *s = 0;
        }
        self.done = true;
    }
}

/// Per-index factor `(−m)_j t^j / ((a+1)_j j!)` for `j = 0..=m`.
fn index_factors(m: u32, a: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(m as usize + 1);
    let mut f = 1.0;
    out.push(f);
    for j in 0..m {
        let jf = j as f64;
        f *= (jf - m as f64) * t / ((a + 1.0 + jf) * (jf + 1.0));
        out.push(f);
    }
    out
}

fn index_factors_dd(m: u32, a: f64, t: f64) -> Vec<DoubleDouble> {
    let t = DoubleDouble::from(t);
    let mut out = Vec::with_capacity(m as usize + 1);
    let mut f = DoubleDouble::ONE;
    out.push(f);
    for j in 0..m {
        let jf = j as f64;
        let num = DoubleDouble::from(jf - m as f64) * t;
        let den = (DoubleDouble::from(a) + DoubleDouble::from(1.0 + jf)) * DoubleDouble::from(jf + 1.0);
        f = f * num / den;
        out.push(f);
    }
    out
}

/// `A_p(μ, β, {m_i}, {a_i}, {t_i})` as a plain `f64`.
///
/// Returns [`Error::Overflow`] when the value leaves the `f64` range; use
/// [`lauricella_a_coeff_scaled`] in that case.
pub fn lauricella_a_coeff(
    p: u32,
    mu: f64,
    beta: f64,
    degrees: &[u32],
    params: &[f64],
    args: &[f64],
) -> Result<f64> {
    lauricella_a_coeff_scaled(p, mu, beta, degrees, params, args, DEFAULT_TERM_CAP)?.value()
}

/// `A_p` in log-magnitude form by direct nested enumeration.
///
/// Terms are accumulated with compensated summation; if the peak partial sum
/// exceeds `1e6 ×` the result, the whole sum is redone in double-double.
pub fn lauricella_a_coeff_scaled(
    p: u32,
    mu: f64,
    beta: f64,
    degrees: &[u32],
    params: &[f64],
    args: &[f64],
    term_cap: u128,
) -> Result<ScaledValue> {
    check_args(degrees, params, args)?;
    let needed = term_count(degrees, p);
    if needed > term_cap {
        return Err(Error::Budget { op: "lauricella_a_coeff", needed, cap: term_cap });
    }
    let (ln_pref, pref_sign) = prefactor(mu, beta, degrees, params)?;
    if pref_sign == 0.0 {
        return Ok(ScaledValue { ln_abs: f64::NEG_INFINITY, sign: 0.0, diagnostics: SeriesDiagnostics::default() });
    }

    let c = mu + beta + 1.0;
    let total_max = degrees.iter().map(|&m| m as usize).sum::<usize>() + p as usize;
    // (c)_N / c^N stays moderate; the c^N is folded into the per-index factors.
    let mut rising = Vec::with_capacity(total_max + 1);
    let mut r = 1.0;
    rising.push(r);
    for n in 0..total_max {
        r *= (c + n as f64) / c;
        rising.push(r);
    }
    let factors: Vec<Vec<f64>> = degrees
        .iter()
        .zip(params)
        .zip(args)
        .map(|((&m, &a), &t)| index_factors(m, a, t * c))
        .collect();
    let last = index_factors(p, beta, c);

    let mut acc = NeumaierSum::new();
    let mut odo = Odometer::new(degrees);
    let mut last_term = 0.0f64;
    while !odo.done {
        let jsum: usize = odo.state.iter().map(|&j| j as usize).sum();
        let base: f64 = odo.state.iter().zip(&factors).map(|(&j, f)| f[j as usize]).product();
        for (k, lk) in last.iter().enumerate() {
            let term = base * lk * rising[jsum + k];
            last_term = term.abs();
            acc.add(term);
        }
        odo.advance();
    }
    let mut diagnostics = SeriesDiagnostics {
        terms_used: needed as u64,
        last_term_magnitude: last_term,
        truncation_flag: false,
        cancellation_flag: false,
        extended_precision: false,
    };
    let mut series = acc.value();
    if !series.is_finite() || !acc.peak().is_finite() {
        return Err(Error::Overflow {
            op: "lauricella_a_coeff",
            detail: format!("intermediate sum not finite (μ = {mu}, {} indices)", degrees.len()),
        });
    }
    if acc.cancellation() > CANCELLATION_RATIO {
        diagnostics.cancellation_flag = true;
        diagnostics.extended_precision = true;
        series = nested_sum_dd(p, c, beta, degrees, params, args)?.to_f64();
    }
    Ok(ScaledValue {
        ln_abs: ln_pref + series.abs().ln(),
        sign: pref_sign * series.signum() * if series == 0.0 { 0.0 } else { 1.0 },
        diagnostics,
    })
}

fn nested_sum_dd(p: u32, c: f64, beta: f64, degrees: &[u32], params: &[f64], args: &[f64]) -> Result<DoubleDouble> {
    let total_max = degrees.iter().map(|&m| m as usize).sum::<usize>() + p as usize;
    let cd = DoubleDouble::from(c);
    let mut rising = Vec::with_capacity(total_max + 1);
    let mut r = DoubleDouble::ONE;
    rising.push(r);
    for n in 0..total_max {
        r = r * (cd + DoubleDouble::from(n as f64)) / cd;
        rising.push(r);
    }
    let factors: Vec<Vec<DoubleDouble>> = degrees
        .iter()
        .zip(params)
        .zip(args)
        .map(|((&m, &a), &t)| {
            // t·c formed in double-double so the scaling adds no rounding.
            let tc = DoubleDouble::from(t) * cd;
            let mut v = index_factors_dd(m, a, 1.0);
            let mut pw = DoubleDouble::ONE;
            for x in v.iter_mut() {
                *x = *x * pw;
                pw = pw * tc;
            }
            v
        })
        .collect();
    let mut last = index_factors_dd(p, beta, 1.0);
    let mut pw = DoubleDouble::ONE;
    for x in last.iter_mut() {
        *x = *x * pw;
        pw = pw * cd;
    }
    let mut acc = DoubleDouble::ZERO;
    let mut odo = Odometer::new(degrees);
    while !odo.done {
        let jsum: usize = odo.state.iter().map(|&j| j as usize).sum();
        let mut base = DoubleDouble::ONE;
        for (&j, f) in odo.state.iter().zip(&factors) {
            base = base * f[j as usize];
        }
        for (k, lk) in last.iter().enumerate() {
            acc += base * *lk * rising[jsum + k];
        }
        odo.advance();
    }
    if !acc.is_finite() {
        return Err(Error::Overflow { op: "lauricella_a_coeff", detail: "double-double sum not finite".into() });
    }
    Ok(acc)
}

/// `A_0` with every argument equal, prepared once for repeated evaluation at
/// different `μ` and `t`.
///
/// With `t_i = t` the nested sum groups by total index `J = Σ j_i`:
/// `Σ_J (μ+1)_J t^J e_J`, where `e_J` collects the `Π (−m_i)_{j_i}/((a_i+1)_{j_i} j_i!)`
/// of every index tuple with that total. All terms of one `e_J` share the sign
/// `(−1)^J`, and the alternating outer sum is always run in double-double.
#[derive(Debug, Clone)]
pub struct EqualArgLauricella {
    ln_binomials: f64,
    binomial_sign: f64,
    coeffs: Vec<DoubleDouble>,
    enumerated: u64,
}

impl EqualArgLauricella {
    pub fn new(degrees: &[u32], params: &[f64], term_cap: u128) -> Result<Self> {
        let dummy_args = vec![1.0; degrees.len()];
        check_args(degrees, params, &dummy_args)?;
        let needed = term_count(degrees, 0);
        if needed > term_cap {
            return Err(Error::Budget { op: "lauricella_a_coeff", needed, cap: term_cap });
        }
        let (ln_binomials, binomial_sign) = prefactor(0.0, 0.0, degrees, params)?;
        let factors: Vec<Vec<DoubleDouble>> =
            degrees.iter().zip(params).map(|(&m, &a)| index_factors_dd(m, a, 1.0)).collect();
        let total: usize = degrees.iter().map(|&m| m as usize).sum();
        let mut coeffs = vec![DoubleDouble::ZERO; total + 1];
        let mut odo = Odometer::new(degrees);
        while !odo.done {
            let jsum: usize = odo.state.iter().map(|&j| j as usize).sum();
            let mut prod = DoubleDouble::ONE;
            for (&j, f) in odo.state.iter().zip(&factors) {
                prod = prod * f[j as usize];
            }
            coeffs[jsum] += prod;
            odo.advance();
        }
        Ok(Self { ln_binomials, binomial_sign, coeffs, enumerated: needed as u64 })
    }

    /// `A_0(μ, 0, …, {t})`, returned in scaled form. `ln_abs` includes `ln Γ(μ+1)`.
    pub fn a0(&self, mu: f64, t: f64) -> Result<ScaledValue> {
        let series = self.series_dd(mu, t);
        let s = series.to_f64();
        let ln_gamma_mu = ln_gamma(mu + 1.0)?;
        Ok(ScaledValue {
            ln_abs: ln_gamma_mu + self.ln_binomials + s.abs().ln(),
            sign: self.binomial_sign * if s == 0.0 { 0.0 } else { s.signum() },
            diagnostics: SeriesDiagnostics {
                terms_used: self.enumerated,
                last_term_magnitude: 0.0,
                truncation_flag: false,
                cancellation_flag: false,
                extended_precision: true,
            },
        })
    }

    /// The grouped `F_A` sum `Σ_J (μ+1)_J t^J e_J` in double-double.
    pub fn series_dd(&self, mu: f64, t: f64) -> DoubleDouble {
        let td = DoubleDouble::from(t);
        let mut acc = DoubleDouble::ZERO;
        let mut w = DoubleDouble::ONE;
        for (j, e) in self.coeffs.iter().enumerate() {
            acc += w * *e;
            w = w * (DoubleDouble::from(mu) + DoubleDouble::from(1.0 + j as f64)) * td;
        }
        acc
    }

    /// `ln |Π C(m_i + a_i, m_i)|` and its sign.
    pub fn binomial_prefactor(&self) -> (f64, f64) {
        (self.ln_binomials, self.binomial_sign)
    }

    pub fn max_total_index(&self) -> usize {
        self.coeffs.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::{gamma, pochhammer};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Independent brute force: literal nested loops with Pochhammers and
    /// factorials recomputed from scratch per term, summed in the same order.
    /// Direct summation, with the sum of term magnitudes as a cancellation scale.
    fn brute_force(p: u32, mu: f64, beta: f64, degrees: &[u32], params: &[f64], args: &[f64]) -> (f64, f64) {
        let s = degrees.len();
        let mut pref = gamma(beta + 1.0 + mu).unwrap() / gamma(beta + 1.0).unwrap();
        for i in 0..s {
            pref *= binomial(degrees[i] as f64 + params[i], degrees[i]);
        }
        let mut idx = vec![0u32; s];
        let mut total = 0.0;
        let mut magnitude = 0.0;
        loop {
            let jsum: u32 = idx.iter().sum();
            let mut base = 1.0;
            for i in 0..s {
                let j = idx[i];
                base *= pochhammer(-(degrees[i] as f64), j) * args[i].powi(j as i32)
                    / (pochhammer(params[i] + 1.0, j) * pochhammer(1.0, j));
            }
            for k in 0..=p {
                let term = base * pochhammer(mu + beta + 1.0, jsum + k) * pochhammer(-(p as f64), k)
                    / (pochhammer(beta + 1.0, k) * pochhammer(1.0, k));
                total += term;
                magnitude += term.abs();
            }
            let mut carry = true;
            for i in 0..s {
                if !carry {
                    break;
                }
                if idx[i] < degrees[i] {
                    idx[i] += 1;
                    carry = false;
                } else {
                    idx[i] = 0;
                }
            }
            if carry {
                break;
            }
        }
        (pref * total, (pref * magnitude).abs())
    }

    #[test]
    fn all_zero_degrees_reduce_to_pochhammer() {
        for &mu in &[0.0, 0.5, 2.25, 7.0] {
            let v = lauricella_a_coeff(0, mu, 0.0, &[0, 0, 0, 0], &[0.3, 0.3, 0.3, 0.3], &[0.5; 4]).unwrap();
            assert_relative_eq!(v, gamma(mu + 1.0).unwrap(), max_relative = 1e-13);
        }
    }

    #[test]
    fn two_unit_degrees_three_term_sum() {
        // {1,1}: j ∈ {0,1}² gives 1 + 2·(μ+1)(−t)/(a+1) + (μ+1)(μ+2) t²/(a+1)²
        let (mu, a, t) = (1.75, 0.6, 0.4);
        let x = -t / (a + 1.0);
        let series = 1.0 + 2.0 * (mu + 1.0) * x + (mu + 1.0) * (mu + 2.0) * x * x;
        let expected = gamma(mu + 1.0).unwrap() * (1.0 + a) * (1.0 + a) * series;
        let v = lauricella_a_coeff(0, mu, 0.0, &[1, 1], &[a, a], &[t, t]).unwrap();
        assert_relative_eq!(v, expected, max_relative = 1e-13);
    }

    #[test]
    fn mismatched_lengths_and_empty_rejected() {
        assert!(lauricella_a_coeff(0, 1.0, 0.0, &[], &[], &[]).is_err());
        assert!(lauricella_a_coeff(0, 1.0, 0.0, &[1, 2], &[0.5], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn budget_enforced() {
        let err = lauricella_a_coeff_scaled(0, 1.0, 0.0, &[9; 8], &[0.5; 8], &[0.5; 8], 1000).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn overflow_is_signalled_not_saturated() {
        let err = lauricella_a_coeff(0, 400.0, 0.0, &[1], &[0.5], &[0.1]).unwrap_err();
        assert!(matches!(err, Error::Overflow { .. }));
        let scaled = lauricella_a_coeff_scaled(0, 400.0, 0.0, &[1], &[0.5], &[0.1], DEFAULT_TERM_CAP).unwrap();
        assert!(scaled.ln_abs.is_finite());
    }

    #[test]
    fn cancellation_triggers_extended_precision() {
        // Product of six Laguerre-like factors with a large first parameter.
        let s = lauricella_a_coeff_scaled(0, 650.5, 0.0, &[2; 6], &[217.0; 6], &[1.0 / 3.0; 6], DEFAULT_TERM_CAP)
            .unwrap();
        assert!(s.diagnostics.cancellation_flag);
        assert!(s.diagnostics.extended_precision);
        let grouped = EqualArgLauricella::new(&[2; 6], &[217.0; 6], DEFAULT_TERM_CAP).unwrap();
        let g = grouped.a0(650.5, 1.0 / 3.0).unwrap();
        assert_relative_eq!(s.ln_abs, g.ln_abs, max_relative = 1e-12);
        assert_eq!(s.sign, g.sign);
    }

    #[test]
    fn deterministic() {
        let a = lauricella_a_coeff(2, 3.25, 0.5, &[2, 1, 3], &[0.5, 1.5, 2.0], &[0.3, -0.2, 0.7]).unwrap();
        let b = lauricella_a_coeff(2, 3.25, 0.5, &[2, 1, 3], &[0.5, 1.5, 2.0], &[0.3, -0.2, 0.7]).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            degrees in proptest::collection::vec(0u32..4, 1..5),
            p in 0u32..4,
            mu in 0.0f64..6.0,
            beta in 0.0f64..2.0,
            a in 0.0f64..3.0,
            t in -0.9f64..0.9,
        ) {
            let s = degrees.len();
            let params: Vec<f64> = (0..s).map(|i| a + 0.37 * i as f64).collect();
            let args: Vec<f64> = (0..s).map(|i| t * (1.0 - 0.1 * i as f64)).collect();
            let fast = lauricella_a_coeff(p, mu, beta, &degrees, &params, &args).unwrap();
            let (slow, magnitude) = brute_force(p, mu, beta, &degrees, &params, &args);
            let scale = slow.abs().max(1e-12);
            prop_assert!((fast - slow).abs() <= 1e-9 * scale + 1e-14 * magnitude, "fast {} slow {}", fast, slow);
        }

        #[test]
        fn grouped_matches_general(
            degrees in proptest::collection::vec(0u32..3, 1..5),
            mu in 0.0f64..40.0,
            a in 0.0f64..10.0,
            t in 0.05f64..1.0,
        ) {
            let s = degrees.len();
            let params = vec![a; s];
            let g = EqualArgLauricella::new(&degrees, &params, DEFAULT_TERM_CAP).unwrap().a0(mu, t).unwrap();
            let d = lauricella_a_coeff_scaled(0, mu, 0.0, &degrees, &params, &vec![t; s], DEFAULT_TERM_CAP).unwrap();
            prop_assert_eq!(g.sign, d.sign);
            if g.sign != 0.0 {
                prop_assert!((g.ln_abs - d.ln_abs).abs() <= 1e-10 * g.ln_abs.abs().max(1.0));
            }
        }
    }
}
