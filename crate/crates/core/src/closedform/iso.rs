//! Isospectral moments as a series in powers of `P(s, t)`.
//!
//! `(λ + P)^{−m}` is expanded binomially in `P/λ`, and each power `P^j` is
//! written as `t^{sj} e^{−jt} Γ(s)^{−j} Σ_p c_p^{(j)} t^p` using
//! `γ(s, t) = t^s e^{−t} Σ_k t^k / (s)_{k+1}`. All `c^{(j)}` are positive and are
//! built by repeated convolution in log space; every resulting integral is a
//! Gamma function.

use super::{check_order, MomentParts, MuIndices, TruncationPolicy};
use crate::closedform::angular::AngularBlocks;
use crate::error::{Error, Result};
use crate::measures::MeasureValue;
use crate::specfun::gamma::ln_gamma_unchecked;
use crate::specfun::{binomial, ln_factorial, EqualArgLauricella, NeumaierSum, SeriesDiagnostics, CANCELLATION_RATIO};
use crate::states::{check_lambda, derive, PseudoharmonicParams, QuantumNumbers};

/// Terms further than this below the largest in a sum are dropped.
const LN_NEGLIGIBLE: f64 = -46.0;

/// Signed sum of `±exp(ln_i)` without overflow.
#[derive(Debug, Clone)]
struct LogAccumulator {
    reference: f64,
    sum: NeumaierSum,
}

impl LogAccumulator {
    fn new() -> Self {
        Self { reference: f64::NEG_INFINITY, sum: NeumaierSum::new() }
    }

    fn add(&mut self, ln_abs: f64, sign: f64) {
        if sign == 0.0 || ln_abs == f64::NEG_INFINITY {
            return;
        }
        if self.reference == f64::NEG_INFINITY {
            self.reference = ln_abs;
        } else if ln_abs > self.reference + 300.0 {
            let shift = (self.reference - ln_abs).exp();
            let (v, peak) = (self.sum.value(), self.sum.peak());
            self.sum = NeumaierSum::new();
            self.sum.add(peak * shift);
            self.sum.add(-peak * shift);
            self.sum.add(v * shift);
            self.reference = ln_abs;
        }
        self.sum.add(sign * (ln_abs - self.reference).exp());
    }

    /// `(ln |sum|, sign, peak / |sum|)`.
    fn result(&self) -> (f64, f64, f64) {
        let v = self.sum.value();
        let ratio = if v == 0.0 { f64::INFINITY } else { self.sum.peak() / v.abs() };
        (self.reference + v.abs().ln(), v.signum(), ratio)
    }
}

/// `ln c^{(j)}_p` for successive `j`, exact up to a common length.
struct ConvolutionPowers {
    ln_b: Vec<f64>,
    current: Vec<f64>,
    power: u32,
    ops: u64,
}

impl ConvolutionPowers {
    fn new(s: f64, len: usize) -> Self {
        let mut ln_b = Vec::with_capacity(len);
        let mut acc = 0.0;
        for k in 0..len {
            acc -= (s + k as f64).ln();
            ln_b.push(acc);
        }
        let mut current = vec![f64::NEG_INFINITY; len];
        current[0] = 0.0;
        Self { ln_b, current, power: 0, ops: 0 }
    }

    fn len(&self) -> usize {
        self.ln_b.len()
    }

    fn advance(&mut self) {
        if self.power == 0 {
            self.current = self.ln_b.clone();
            self.power = 1;
            return;
        }
        // Both ln b_k and ln c_p are concave (log-concavity survives
        // convolution), so for fixed p the summand is unimodal in k: climb to
        // its peak from the previous p's argmax, then sweep outwards.
        let len = self.len();
        let (cur, b) = (&self.current, &self.ln_b);
        let mut next = vec![f64::NEG_INFINITY; len];
        let mut guess = 0usize;
        let mut ops = 0u64;
        for (p, out) in next.iter_mut().enumerate() {
            let f = |k: usize| cur[p - k] + b[k];
            let mut g = guess.min(p);
            while g < p && f(g + 1) > f(g) {
                g += 1;
            }
            while g > 0 && f(g - 1) > f(g) {
                g -= 1;
            }
            guess = g;
            let max = f(g);
            if max == f64::NEG_INFINITY {
                continue;
            }
            let mut sum = 1.0;
            for k in (0..g).rev() {
                let x = f(k) - max;
                if x < LN_NEGLIGIBLE {
                    break;
                }
                sum += x.exp();
                ops += 1;
            }
            for k in g + 1..=p {
                let x = f(k) - max;
                if x < LN_NEGLIGIBLE {
                    break;
                }
                sum += x.exp();
                ops += 1;
            }
            *out = max + sum.ln();
        }
        self.ops += ops + len as u64;
        self.current = next;
        self.power += 1;
    }
}

/// One binomial branch of the expansion: the factor
/// `C(2α, i) (−1/n)^i (λ+P)^{−m} (L_n^k)^{2α−i} (L_{n−1}^{k+1})^i D^i`
/// (or `(λ+P)^{−2α}` alone for the ground radial state).
struct Branch {
    i: u32,
    m: u32,
    ln_const: f64,
    sign_const: f64,
    poly: Option<EqualArgLauricella>,
}

/// Outcome of a series evaluation.
#[derive(Debug, Clone, Copy)]
struct SeriesSum {
    ln_abs: f64,
    sign: f64,
    ln_err: f64,
    diagnostics: SeriesDiagnostics,
}

struct Engine<'a> {
    branches: &'a [Branch],
    s: f64,
    mu1: f64,
    alpha: f64,
    ln_gs: f64,
    ln_lambda: f64,
    lambda_sign: f64,
}

impl Engine<'_> {
    /// Sum over `p` for branch `b` at power `j`: `(ln|·|, sign, tail_ok)`.
    fn branch_term(&self, b: &Branch, j: u32, ln_c: &[f64], terms: &mut Vec<(f64, f64)>) -> bool {
        if j > 0 && b.m == 0 {
            return true;
        }
        let ln_coef = b.ln_const + binomial((b.m + j) as f64 - 1.0, j).ln()
            - j as f64 * (self.ln_lambda + self.ln_gs)
            - b.i as f64 * (self.ln_lambda + self.ln_gs);
        let sign = b.sign_const * if j % 2 == 1 { -self.lambda_sign } else { 1.0 };
        let base = self.alpha + (b.i + j) as f64;
        let ln_base = base.ln();
        let mu0 = self.mu1 + self.s * (b.i + j) as f64;
        let mut lw = ln_gamma_unchecked(mu0 + 1.0) - (mu0 + 1.0) * ln_base;
        let start = terms.len();
        let mut peak = f64::NEG_INFINITY;
        let mut peak_at = 0;
        for (p, &lc) in ln_c.iter().enumerate() {
            let mu = mu0 + p as f64;
            if lc != f64::NEG_INFINITY {
                let (lp, sp) = match &b.poly {
                    None => (0.0, 1.0),
                    Some(poly) => {
                        let v = poly.series_dd(mu, 1.0 / base).to_f64();
                        (v.abs().ln(), v.signum())
                    }
                };
                let ln_t = ln_coef + lc + lw;
                if ln_t > peak {
                    peak = ln_t;
                    peak_at = p;
                }
                terms.push((ln_t + lp, sign * sp));
            }
            lw += (mu + 1.0).ln() - ln_base;
        }
        let last = terms[start..].last().map(|t| t.0).unwrap_or(f64::NEG_INFINITY);
        // Tail must sit past the peak and far below it.
        peak_at + 1 < ln_c.len() && last - ln_coef < peak - ln_coef + LN_NEGLIGIBLE + 6.0
            || ln_c.len() == 1 && j == 0
    }

    fn run(&self, policy: &TruncationPolicy, max_m: u32, lambda: f64) -> Result<SeriesSum> {
        let (j_max, p_max, rel_tol) = policy.effective(lambda, max_m.max(1));
        let only_leading = self.branches.iter().all(|b| b.m == 0);
        let mut len = 64usize.min(p_max as usize).max(1);
        let mut conv = ConvolutionPowers::new(self.s, len);
        let mut total = LogAccumulator::new();
        let mut diag = SeriesDiagnostics { extended_precision: self.branches.iter().any(|b| b.poly.is_some()), ..Default::default() };
        let mut small_shells = 0;
        let mut last_shell;
        let mut peak_ratio: f64 = 1.0;
        let mut j = 0u32;
        let mut spent = 0u64;
        loop {
            let work = spent + conv.ops + diag.terms_used;
            if work > policy.work_cap {
                return Err(Error::Budget { op: "renyi_iso_closed", needed: work as u128, cap: policy.work_cap as u128 });
            }
            let mut terms = Vec::new();
            let mut tails_ok = true;
            for b in self.branches {
                tails_ok &= self.branch_term(b, j, &conv.current, &mut terms);
            }
            if !tails_ok && j > 0 {
                if len >= p_max as usize {
                    diag.truncation_flag = true;
                } else {
                    len = (2 * len).min(p_max as usize);
                    spent += conv.ops;
                    conv = ConvolutionPowers::new(self.s, len);
                    while conv.power < j {
                        if spent + conv.ops > policy.work_cap {
                            break;
                        }
                        conv.advance();
                    }
                    continue;
                }
            }
            let mut shell = LogAccumulator::new();
            for &(l, sg) in &terms {
                shell.add(l, sg);
            }
            diag.terms_used += terms.len() as u64;
            let (ln_shell, _, shell_ratio) = shell.result();
            peak_ratio = peak_ratio.max(shell_ratio);
            for &(l, sg) in &terms {
                total.add(l, sg);
            }
            let (ln_total, _, ratio) = total.result();
            peak_ratio = peak_ratio.max(ratio);
            last_shell = ln_shell;
            if only_leading {
                break;
            }
            if j > 0 && ln_shell - ln_total < rel_tol.ln() {
                small_shells += 1;
            } else {
                small_shells = 0;
            }
            if small_shells >= 2 && j >= 3 {
                break;
            }
            if j >= j_max {
                diag.truncation_flag = true;
                break;
            }
            j += 1;
            conv.advance();
        }
        let (ln_abs, sign, _) = total.result();
        diag.last_term_magnitude = (last_shell - ln_abs).exp();
        diag.cancellation_flag = peak_ratio > CANCELLATION_RATIO;
        if diag.truncation_flag {
            return Err(Error::NoConvergence {
                op: "renyi_iso_closed",
                estimate: ln_abs,
                bound: diag.last_term_magnitude,
            });
        }
        if !(sign > 0.0) {
            return Err(Error::NoConvergence { op: "renyi_iso_closed", estimate: sign, bound: f64::INFINITY });
        }
        let ln_err = 2.0 * diag.last_term_magnitude + 8.0 * f64::EPSILON * peak_ratio;
        Ok(SeriesSum { ln_abs, sign, ln_err, diagnostics: diag })
    }
}

/// Factors of `∫ ρ̂^α dV` for an isospectral state. `ln_series` is the
/// resummed series `Σ_j (−1)^j C(2α+j−1, j) (λΓ(L+3/2))^{−j} ∫ t^{αL+1/2} e^{−αt} γ(L+3/2, t)^j dt`
/// for `n = 0`, and `∫ t^{αL+1/2} e^{−αt} (Φ_n/(λ+P))^{2α} dt` otherwise.
pub fn moment_parts_iso(
    params: &PseudoharmonicParams,
    qn: QuantumNumbers,
    lambda: f64,
    alpha: u32,
    policy: &TruncationPolicy,
) -> Result<MomentParts> {
    check_order(alpha, "renyi_iso_closed")?;
    check_lambda(lambda)?;
    let d = derive(params, qn.l);
    let (s, k, af) = (d.shape(), d.laguerre_k(), alpha as f64);
    let mu1 = MuIndices::new(d.l_eff, alpha, 0, 0, 0).mu1;
    let ln_gs = ln_gamma_unchecked(s);
    let ln_2a32 = 2f64.ln() + 1.5 * d.a.ln();
    let n = qn.n;
    let mut branches = Vec::new();
    let ln_norm;
    if n == 0 {
        ln_norm = af * (((lambda + 1.0) / lambda).ln() - ln_gs);
        branches.push(Branch { i: 0, m: 2 * alpha, ln_const: 0.0, sign_const: 1.0, poly: None });
    } else {
        ln_norm = af * (ln_factorial(n) - ln_gamma_unchecked(n as f64 + s));
        let slots = 2 * alpha;
        for i in 0..=slots {
            let mut degrees = vec![n; (slots - i) as usize];
            let mut pars = vec![k; (slots - i) as usize];
            degrees.extend(std::iter::repeat(n - 1).take(i as usize));
            pars.extend(std::iter::repeat(k + 1.0).take(i as usize));
            let poly = EqualArgLauricella::new(&degrees, &pars, policy.term_cap)?;
            let (lb, sb) = poly.binomial_prefactor();
            let sign_i = if i % 2 == 1 { -lambda.signum() } else { 1.0 };
            branches.push(Branch {
                i,
                m: i,
                ln_const: binomial(slots as f64, i).ln() - i as f64 * (n as f64).ln() + lb,
                sign_const: sign_i * sb,
                poly: Some(poly),
            });
        }
    }
    let engine = Engine {
        branches: &branches,
        s,
        mu1,
        alpha: af,
        ln_gs,
        ln_lambda: lambda.abs().ln(),
        lambda_sign: lambda.signum(),
    };
    let max_m = branches.iter().map(|b| b.m).max().unwrap_or(0);
    let series = engine.run(policy, max_m, lambda)?;
    debug_assert!(series.sign > 0.0);
    Ok(MomentParts {
        alpha,
        angular: AngularBlocks::new(qn.l, qn.m, alpha, policy.term_cap)?,
        ln_scale: (af - 1.0) * ln_2a32,
        ln_norm,
        ln_series: series.ln_abs,
        mu1,
        ln_err: series.ln_err,
        diagnostics: series.diagnostics,
    })
}

/// `ln ∫ ρ̂^α dV` for an isospectral state, with its error in the log and
/// diagnostics.
pub fn ln_moment_iso(
    params: &PseudoharmonicParams,
    qn: QuantumNumbers,
    lambda: f64,
    alpha: u32,
    policy: &TruncationPolicy,
) -> Result<(f64, f64, SeriesDiagnostics)> {
    let parts = moment_parts_iso(params, qn, lambda, alpha, policy)?;
    Ok((parts.ln_moment(), parts.ln_err, parts.diagnostics))
}

/// Closed-form Rényi entropy of order `alpha` of an isospectral state.
pub fn renyi_iso_closed(
    params: &PseudoharmonicParams,
    qn: QuantumNumbers,
    lambda: f64,
    alpha: u32,
    policy: &TruncationPolicy,
) -> Result<MeasureValue> {
    Ok(moment_parts_iso(params, qn, lambda, alpha, policy)?.renyi())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::renyi_pho_closed;
    use crate::measures::renyi;
    use crate::states::rho_iso;
    use approx::assert_relative_eq;

    fn reduced() -> PseudoharmonicParams {
        PseudoharmonicParams::reduced_example()
    }

    #[test]
    fn convolution_matches_direct_square() {
        let s = 2.3;
        let mut c = ConvolutionPowers::new(s, 12);
        c.advance();
        c.advance();
        for p in 0..12 {
            let direct: f64 = (0..=p).map(|k| (c.ln_b[k] + c.ln_b[p - k]).exp()).sum();
            assert_relative_eq!(c.current[p].exp(), direct, max_relative = 1e-14);
        }
    }

    #[test]
    fn ground_radial_matches_quadrature() {
        let p = reduced();
        for lambda in [-3.0, 2.5, 1.5] {
            for (l, m) in [(0, 0), (1, 1)] {
                let qn = QuantumNumbers::new(0, l, m).unwrap();
                let rho = rho_iso(&p, qn, lambda).unwrap();
                for alpha in 2..=3u32 {
                    let closed = renyi_iso_closed(&p, qn, lambda, alpha, &TruncationPolicy::default()).unwrap();
                    let quad = renyi(&rho, alpha as f64).unwrap().value;
                    assert_relative_eq!(closed.value, quad, epsilon = 1e-9, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn excited_radial_matches_quadrature() {
        let p = reduced();
        for lambda in [-3.0, 2.5] {
            for (n, l, m) in [(1, 1, 1), (2, 0, 0)] {
                let qn = QuantumNumbers::new(n, l, m).unwrap();
                let rho = rho_iso(&p, qn, lambda).unwrap();
                for alpha in 2..=3u32 {
                    let closed = renyi_iso_closed(&p, qn, lambda, alpha, &TruncationPolicy::default()).unwrap();
                    let quad = renyi(&rho, alpha as f64).unwrap().value;
                    assert_relative_eq!(closed.value, quad, epsilon = 1e-9, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn large_lambda_approaches_pseudoharmonic() {
        let p = reduced();
        for qn in [QuantumNumbers::ground(), QuantumNumbers::new(1, 1, 0).unwrap()] {
            let iso = renyi_iso_closed(&p, qn, 1e4, 2, &TruncationPolicy::default()).unwrap().value;
            let pho = renyi_pho_closed(&p, qn, 2).unwrap().value;
            assert!((iso - pho).abs() < 1e-3);
        }
    }

    #[test]
    fn strict_caps_report_truncation() {
        let policy = TruncationPolicy { j_max: 3, auto_raise: false, ..Default::default() };
        let err = renyi_iso_closed(&reduced(), QuantumNumbers::ground(), 1.5, 2, &policy).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }
}
