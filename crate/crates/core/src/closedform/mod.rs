//! Closed-form Rényi entropies and complexity ratios for integer orders.
//!
//! The pseudoharmonic moment is a finite Lauricella sum. The isospectral one
//! is an infinite series in powers of the regularized incomplete gamma
//! function; it is summed in log space with adaptive truncation.

pub mod angular;
pub mod iso;
pub mod pho;
pub mod transcribed;
pub mod ratios;

pub use angular::{j2_moment, ln_j2_moment, AngularBlocks};
pub use iso::{ln_moment_iso, moment_parts_iso, renyi_iso_closed};
pub use pho::{ln_moment_pho, moment_parts_pho, renyi_pho_closed};
pub use transcribed::{erratum_report, CrossCheck, Reading, TranscribedForm};
pub use ratios::{grc_closed, grc_closed_checked, moment_parts, rcr_closed, rcr_closed_checked, src_closed, Direction, Model};

use crate::error::{Error, Result};
use crate::measures::{MeasureValue, Method};
use crate::specfun::{SeriesDiagnostics, DEFAULT_TERM_CAP};

/// Caps and tolerance for the infinite isospectral series.
///
/// `j_max` bounds the power of the incomplete gamma function, `p_max` the
/// number of power-series coefficients kept per power. With `auto_raise`
/// both caps are lifted to an a-priori estimate of what the requested
/// tolerance needs, which matters near the edges of the λ domain.
/// `work_cap` bounds the coefficient operations of one isospectral series;
/// past it the evaluation stops with [`Error::Budget`](crate::Error::Budget).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub j_max: u32,
    pub p_max: u32,
    pub rel_tol: f64,
    pub term_cap: u128,
    pub auto_raise: bool,
    pub work_cap: u64,
}

/// One to two seconds of work for one series.
pub const DEFAULT_WORK_CAP: u64 = 200_000_000;

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { j_max: 60, p_max: 200, rel_tol: 1e-12, term_cap: DEFAULT_TERM_CAP, auto_raise: true, work_cap: DEFAULT_WORK_CAP }
    }
}

const HARD_J_MAX: u32 = 5000;
const HARD_P_MAX: u32 = 1 << 17;

impl TruncationPolicy {
    /// Caps actually used for a series with `|λ|` and expansion exponent `m`.
    pub(crate) fn effective(&self, lambda: f64, m: u32) -> (u32, u32, f64) {
        if !self.auto_raise {
            return (self.j_max, self.p_max, self.rel_tol);
        }
        // Crude bound on the j-th shell relative to the first: C(m+j−1, j) |λ|^{−j}.
        let target = (self.rel_tol * 1e-2).ln();
        let ln_l = lambda.abs().ln();
        let mut j = 0u32;
        let mut ln_shell = 0.0;
        while j < HARD_J_MAX && (ln_shell > target || j < 2 * m) {
            j += 1;
            ln_shell += ((m + j - 1) as f64 / j as f64).ln() - ln_l;
        }
        // Near the edge tighten the tolerance: the alternating sum loses digits.
        let rel_tol = if lambda > 0.0 && lambda < 2.0 { self.rel_tol.min(1e-13) } else { self.rel_tol };
        (self.j_max.max(j + 10), HARD_P_MAX.max(self.p_max), rel_tol)
    }
}

/// Exponents of the Gamma-function arguments appearing in the series:
/// `mu1 = αL + 1/2`, `mu2 = p + s j + mu1`, `mu3 = p + s (i + j) + mu1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuIndices {
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
}

impl MuIndices {
    pub fn new(l_eff: f64, alpha: u32, i: u32, j: u32, p: u32) -> Self {
        let s = l_eff + 1.5;
        let mu1 = alpha as f64 * l_eff + 0.5;
        Self { mu1, mu2: p as f64 + s * j as f64 + mu1, mu3: p as f64 + s * (i + j) as f64 + mu1 }
    }
}

pub(crate) fn check_order(alpha: u32, op: &'static str) -> Result<()> {
    if alpha < 2 {
        return Err(Error::domain(op, format!("closed forms need an integer order >= 2, got {alpha}")));
    }
    Ok(())
}

/// `ln ∫ρ^α dV` split as `ln_angular + ln_scale + ln_norm + ln_series`, where
/// `ln_scale = (α−1) ln(2a^{3/2})` and `ln_norm` is `α ×` the log of the radial
/// normalization ratio (`n!/Γ(n+L+3/2)`, or `(λ+1)/(λΓ(L+3/2))` for the
/// isospectral ground radial state).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentParts {
    pub alpha: u32,
    pub angular: angular::AngularBlocks,
    pub ln_scale: f64,
    pub ln_norm: f64,
    pub ln_series: f64,
    /// `αL + 1/2`.
    pub mu1: f64,
    /// Error estimate of `ln_series`.
    pub ln_err: f64,
    pub diagnostics: SeriesDiagnostics,
}

impl MomentParts {
    pub fn ln_moment(&self) -> f64 {
        self.angular.ln_total() + self.ln_scale + self.ln_norm + self.ln_series
    }

    pub fn renyi(&self) -> MeasureValue {
        renyi_from_ln_moment(self.ln_moment(), self.ln_err, self.alpha, self.diagnostics)
    }
}

/// Rényi entropy from `ln ∫ρ^α` with its error estimate.
pub(crate) fn renyi_from_ln_moment(
    ln_moment: f64,
    ln_err: f64,
    alpha: u32,
    diagnostics: SeriesDiagnostics,
) -> MeasureValue {
    let scale = 1.0 / (1.0 - alpha as f64);
    MeasureValue {
        value: scale * ln_moment,
        method: Method::Closed,
        abs_error: scale.abs() * (ln_err + 4.0 * f64::EPSILON * ln_moment.abs()),
        diagnostics: Some(diagnostics),
        converged: true,
        notes: Vec::new(),
    }
}
