//! Complexity formulas as written in closed form, evaluated independently of
//! the entropy-difference composition so the two can be compared.
//!
//! Literal readings keep every prefactor exactly as written; the infinite
//! inner sums take their resummed values. Regrouped readings collect the
//! exponent of each factor of the angular moment across numerator and
//! denominator; they must agree with the composition to rounding.

use std::f64::consts::PI;
use std::fmt;

use super::ratios::{moment_parts, Direction, Model};
use super::{MomentParts, TruncationPolicy};
use crate::error::Result;
use crate::specfun::gamma::ln_gamma_unchecked;
use crate::specfun::ln_factorial;
use crate::states::{derive, PseudoharmonicParams, QuantumNumbers};

/// Relative agreement required between a transcription and the composition.
pub const AGREEMENT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TranscribedForm {
    /// `C(ρ̂, ρ)` for `n = 0`.
    RcrIsoOverPhoGround,
    /// Any ratio assembled from collected exponents.
    RcrRegrouped,
    /// Pseudoharmonic GRC.
    GrcPho,
    /// Isospectral GRC for `n = 0`.
    GrcIsoGround,
    /// Isospectral GRC for `n ≥ 1`, from collected exponents.
    GrcRegrouped,
}

impl fmt::Display for TranscribedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TranscribedForm::RcrIsoOverPhoGround => "rcr_iso_over_pho_ground",
            TranscribedForm::RcrRegrouped => "rcr_regrouped",
            TranscribedForm::GrcPho => "grc_pho",
            TranscribedForm::GrcIsoGround => "grc_iso_ground",
            TranscribedForm::GrcRegrouped => "grc_regrouped",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reading {
    Literal,
    /// The literal form with its identified misprints repaired.
    Corrected,
    Regrouped,
}

/// Outcome of comparing one transcription against the composition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheck {
    pub form: TranscribedForm,
    pub reading: Reading,
    pub ln_transcribed: f64,
    pub ln_composed: f64,
    /// `|transcribed / composed − 1|`.
    pub rel_diff: f64,
    pub agrees: bool,
}

impl CrossCheck {
    fn new(form: TranscribedForm, reading: Reading, ln_transcribed: f64, ln_composed: f64) -> Self {
        let rel_diff = (ln_transcribed - ln_composed).exp_m1().abs();
        Self { form, reading, ln_transcribed, ln_composed, rel_diff, agrees: rel_diff <= AGREEMENT_TOL }
    }

    pub fn describe(&self) -> String {
        let verdict = if self.agrees { "agrees" } else { "differs; composition used" };
        format!(
            "{} ({:?}): transcribed {:.12e}, composed {:.12e}, rel diff {:.3e}, {verdict}",
            self.form,
            self.reading,
            self.ln_transcribed.exp(),
            self.ln_composed.exp(),
            self.rel_diff
        )
    }
}

fn inv(order: u32) -> f64 {
    1.0 / (1.0 - order as f64)
}

/// Exponents collected factor by factor.
pub(crate) fn regrouped(num: &MomentParts, den: &MomentParts, ln_a: f64) -> f64 {
    let (ea, eb) = (inv(num.alpha), inv(den.alpha));
    let (af, bf) = (num.alpha as f64, den.alpha as f64);
    let (na, nb) = (&num.angular, &den.angular);
    let two = (na.two_power() + af - 1.0) * ea - (nb.two_power() + bf - 1.0) * eb;
    let a_pow = 1.5 * (af - 1.0) * ea - 1.5 * (bf - 1.0) * eb;
    let harmonic = af * ea - bf * eb;
    two * 2f64.ln()
        + a_pow * ln_a
        + harmonic * ((2.0 * na.l as f64 + 1.0).ln() + na.ln_bracket)
        + (na.pi_power() * ea - nb.pi_power() * eb) * PI.ln()
        + na.ln_gamma_ratio() * ea
        - nb.ln_gamma_ratio() * eb
        + na.ln_b * ea
        - nb.ln_b * eb
        + (num.ln_norm + num.ln_series) * ea
        - (den.ln_norm + den.ln_series) * eb
}

/// `C(ρ̂, ρ)` for `n = 0` with every prefactor as written. The repaired
/// reading uses `β` instead of `2β` in the bracket exponent, `2β − 3` in
/// the power of `a`, and `Γ(mα+1)^{2/(1−α)}`.
fn literal_rcr_ground(
    iso: &MomentParts,
    pho: &MomentParts,
    l_eff: f64,
    a: f64,
    lambda: f64,
    l: u32,
    repaired: bool,
) -> f64 {
    let (alpha, beta) = (iso.alpha as f64, pho.alpha as f64);
    let (ea, eb) = (inv(iso.alpha), inv(pho.alpha));
    let m = iso.angular.m as f64;
    let lg = ln_gamma_unchecked;
    let s = l_eff + 1.5;
    let ln_bracket = (2.0 * a.sqrt()).ln() + (2.0 * l as f64 + 1.0).ln() + iso.angular.ln_bracket - lg(s);
    let ln_a0_beta = pho.ln_series + (pho.mu1 + 1.0) * beta.ln();
    let (bracket_beta, a_beta, gm_alpha, gm_beta) =
        if repaired { (beta, 2.0 * beta - 3.0, 2.0, 2.0) } else { (2.0 * beta, 2.0 * beta - 1.0, 2.0 * alpha, 2.0 * beta) };
    alpha * ea * ((lambda + 1.0) / lambda).ln()
        + (alpha * ea - bracket_beta * eb) * ln_bracket
        + ((alpha * (4.0 * m - 2.0) + 1.0) * ea - (beta * (4.0 * m - 2.0) + 1.0) * eb) * 2f64.ln()
        + (pho.mu1 + 1.0) * eb * beta.ln()
        + ((2.0 * alpha - 3.0) / (2.0 - 2.0 * alpha) - a_beta / (2.0 - 2.0 * beta)) * a.ln()
        + gm_alpha * ea * lg(m * alpha + 1.0)
        + eb * lg(2.0 * m * beta + 2.0)
        + ea * iso.angular.ln_b
        - eb * ln_a0_beta
        - ((2.0 * alpha - 1.0) * ea - (2.0 * beta - 1.0) * eb) * PI.ln()
        - gm_beta * eb * lg(m * beta + 1.0)
        - ea * lg(2.0 * m * alpha + 2.0)
        - eb * pho.angular.ln_b
        + ea * iso.ln_series
}

/// Pseudoharmonic GRC with every prefactor as written. The repaired reading
/// uses `2a^{3/2} n!/Γ(n+L+3/2)` outside and `1/(2a^{3/2})` inside the brackets.
fn literal_grc_pho(pa: &MomentParts, pb: &MomentParts, l_eff: f64, a: f64, n: u32, repaired: bool) -> f64 {
    let (alpha, beta) = (pa.alpha as f64, pb.alpha as f64);
    let (ea, eb) = (inv(pa.alpha), inv(pb.alpha));
    let s = l_eff + 1.5;
    let (lead, half_root_a) = if repaired {
        let scale = 2f64.ln() + 1.5 * a.ln();
        (scale + ln_factorial(n) - ln_gamma_unchecked(n as f64 + s), -scale)
    } else {
        ((2.0 * a.sqrt()).ln() + ln_factorial(n) - ln_gamma_unchecked(s), (a.sqrt() / 2.0).ln())
    };
    let a0 = |p: &MomentParts, order: f64| p.ln_series + (p.mu1 + 1.0) * order.ln();
    (alpha * ea - beta * eb) * lead + (pb.mu1 + 1.0) * eb * beta.ln()
        + ea * (half_root_a + a0(pa, alpha) + pa.angular.ln_total())
        - (pa.mu1 + 1.0) * ea * alpha.ln()
        - eb * (half_root_a + a0(pb, beta) + pb.angular.ln_total())
}

/// Isospectral GRC for `n = 0` with every prefactor as written.
fn literal_grc_iso_ground(ia: &MomentParts, ib: &MomentParts, l_eff: f64, a: f64, lambda: f64) -> f64 {
    let (alpha, beta) = (ia.alpha as f64, ib.alpha as f64);
    let (ea, eb) = (inv(ia.alpha), inv(ib.alpha));
    let s = l_eff + 1.5;
    let lead = (2.0 * a.sqrt() * (lambda + 1.0) / lambda).ln() - ln_gamma_unchecked(s);
    (alpha * ea - beta * eb) * lead + ea * (ia.ln_series + ia.angular.ln_total())
        - (eb - ea) * (1.0 / (2.0 * a.sqrt())).ln()
        - eb * (ib.ln_series + ib.angular.ln_total())
}

/// Cross-checks for a ratio `num(α) / den(β)`; `num == den` models give the
/// GRC. Literal readings come with their repaired counterpart.
pub(crate) fn cross_check(
    params: &PseudoharmonicParams,
    qn: QuantumNumbers,
    num_model: Model,
    den_model: Model,
    num: &MomentParts,
    den: &MomentParts,
) -> Vec<CrossCheck> {
    let d = derive(params, qn.l);
    let composed = inv(num.alpha) * num.ln_moment() - inv(den.alpha) * den.ln_moment();
    let ground = qn.n == 0;
    let check = |form, reading, value| CrossCheck::new(form, reading, value, composed);
    match (num_model, den_model) {
        (Model::Iso(lambda), Model::Pho) if ground => [(Reading::Literal, false), (Reading::Corrected, true)]
            .into_iter()
            .map(|(r, fix)| {
                check(TranscribedForm::RcrIsoOverPhoGround, r, literal_rcr_ground(num, den, d.l_eff, d.a, lambda, qn.l, fix))
            })
            .collect(),
        (Model::Pho, Model::Pho) => [(Reading::Literal, false), (Reading::Corrected, true)]
            .into_iter()
            .map(|(r, fix)| check(TranscribedForm::GrcPho, r, literal_grc_pho(num, den, d.l_eff, d.a, qn.n, fix)))
            .collect(),
        (Model::Iso(lambda), Model::Iso(_)) if ground => vec![check(
            TranscribedForm::GrcIsoGround,
            Reading::Literal,
            literal_grc_iso_ground(num, den, d.l_eff, d.a, lambda),
        )],
        (Model::Iso(_), Model::Iso(_)) => {
            vec![check(TranscribedForm::GrcRegrouped, Reading::Regrouped, regrouped(num, den, d.a.ln()))]
        }
        _ => vec![check(TranscribedForm::RcrRegrouped, Reading::Regrouped, regrouped(num, den, d.a.ln()))],
    }
}

/// Compare every transcription against the composition on a small grid of
/// states and orders, one line per comparison.
pub fn erratum_report(params: &PseudoharmonicParams, lambda: f64, policy: &TruncationPolicy) -> Result<Vec<String>> {
    let mut lines = Vec::new();
    let states = [QuantumNumbers::new(0, 0, 0)?, QuantumNumbers::new(0, 1, 1)?, QuantumNumbers::new(1, 1, 1)?];
    for qn in states {
        for (alpha, beta) in [(2u32, 3u32), (3, 2)] {
            for dir in [Direction::IsoOverPho, Direction::PhoOverPho, Direction::IsoOverIso] {
                let (nm, dm) = dir.models(lambda);
                let num = moment_parts(params, qn, nm, alpha, policy)?;
                let den = moment_parts(params, qn, dm, beta, policy)?;
                for check in cross_check(params, qn, nm, dm, &num, &den) {
                    lines.push(format!("{qn} alpha={alpha} beta={beta} lambda={lambda}: {}", check.describe()));
                }
            }
        }
    }
    Ok(lines)
}
