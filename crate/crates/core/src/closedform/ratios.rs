//! Complexity ratios composed from closed-form entropies.

use std::fmt;
use std::str::FromStr;

use super::transcribed::{cross_check, CrossCheck};
use super::{check_order, moment_parts_iso, moment_parts_pho, MomentParts, TruncationPolicy};
use crate::error::{Error, Result};
use crate::measures::{MeasureValue, Method};
use crate::states::{PseudoharmonicParams, QuantumNumbers};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Pho,
    Iso(f64),
}

/// Which densities sit in the numerator (order α) and denominator (order β).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    IsoOverPho,
    PhoOverIso,
    IsoOverIso,
    PhoOverPho,
}

impl Direction {
    pub const ALL: [Direction; 4] =
        [Direction::IsoOverPho, Direction::PhoOverIso, Direction::IsoOverIso, Direction::PhoOverPho];

    pub fn models(self, lambda: f64) -> (Model, Model) {
        match self {
            Direction::IsoOverPho => (Model::Iso(lambda), Model::Pho),
            Direction::PhoOverIso => (Model::Pho, Model::Iso(lambda)),
            Direction::IsoOverIso => (Model::Iso(lambda), Model::Iso(lambda)),
            Direction::PhoOverPho => (Model::Pho, Model::Pho),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::IsoOverPho => "iso_over_pho",
            Direction::PhoOverIso => "pho_over_iso",
            Direction::IsoOverIso => "iso_over_iso",
            Direction::PhoOverPho => "pho_over_pho",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Direction::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| Error::domain("Direction", format!("unknown direction {s:?}")))
    }
}

pub fn moment_parts(
    params: &PseudoharmonicParams,
    qn: QuantumNumbers,
    model: Model,
    alpha: u32,
    policy: &TruncationPolicy,
) -> Result<MomentParts> {
    match model {
        Model::Pho => moment_parts_pho(params, qn, alpha, policy.term_cap),
        Model::Iso(lambda) => moment_parts_iso(params, qn, lambda, alpha, policy),
    }
}

fn compose(num: &MomentParts, den: &MomentParts, checks: &[CrossCheck]) -> MeasureValue {
    let (rn, rd) = (num.renyi(), den.renyi());
    let value = (rn.value - rd.value).exp();
    let notes = checks.iter().filter(|c| !c.agrees).map(CrossCheck::describe).collect();
    MeasureValue {
        value,
        method: Method::Closed,
        abs_error: value * (rn.abs_error + rd.abs_error),
        diagnostics: Some(num.diagnostics.merge(den.diagnostics)),
        converged: true,
        notes,
    }
}

fn ratio_checked(
    params: &PseudoharmonicParams,
    qn: QuantumNumbers,
    models: (Model, Model),
    alpha: u32,
    beta: u32,
    policy: &TruncationPolicy,
) -> Result<(MeasureValue, Vec<CrossCheck>)> {
    check_order(alpha, "rcr_closed")?;
    check_order(beta, "rcr_closed")?;
    let num = moment_parts(params, qn, models.0, alpha, policy)?;
    let den = if models.0 == models.1 && alpha == beta {
        num
    } else {
        moment_parts(params, qn, models.1, beta, policy)?
    };
    let checks = cross_check(params, qn, models.0, models.1, &num, &den);
    Ok((compose(&num, &den, &checks), checks))
}

/// `exp(R_num^{(α)} − R_den^{(β)})` with the transcription cross-check.
pub fn rcr_closed_checked(
    params: &PseudoharmonicParams,
    qn: QuantumNumbers,
    lambda: f64,
    alpha: u32,
    beta: u32,
    direction: Direction,
    policy: &TruncationPolicy,
) -> Result<(MeasureValue, Vec<CrossCheck>)> {
    ratio_checked(params, qn, direction.models(lambda), alpha, beta, policy)
}

/// Closed-form Rényi complexity ratio between the pseudoharmonic and
/// isospectral densities of one state. A disagreeing transcription is
/// reported in `notes`.
pub fn rcr_closed(
    params: &PseudoharmonicParams,
    qn: QuantumNumbers,
    lambda: f64,
    alpha: u32,
    beta: u32,
    direction: Direction,
    policy: &TruncationPolicy,
) -> Result<MeasureValue> {
    rcr_closed_checked(params, qn, lambda, alpha, beta, direction, policy).map(|(v, _)| v)
}

/// GRC of the pseudoharmonic (`lambda = None`) or isospectral density.
pub fn grc_closed_checked(
    params: &PseudoharmonicParams,
    qn: QuantumNumbers,
    alpha: u32,
    beta: u32,
    lambda: Option<f64>,
    policy: &TruncationPolicy,
) -> Result<(MeasureValue, Vec<CrossCheck>)> {
    check_order(alpha, "grc_closed")?;
    check_order(beta, "grc_closed")?;
    if alpha == beta {
        return Ok((MeasureValue::exact(1.0), Vec::new()));
    }
    let model = lambda.map_or(Model::Pho, Model::Iso);
    ratio_checked(params, qn, (model, model), alpha, beta, policy)
}

pub fn grc_closed(
    params: &PseudoharmonicParams,
    qn: QuantumNumbers,
    alpha: u32,
    beta: u32,
    lambda: Option<f64>,
    policy: &TruncationPolicy,
) -> Result<MeasureValue> {
    grc_closed_checked(params, qn, alpha, beta, lambda, policy).map(|(v, _)| v)
}

/// Shape Rényi complexity: the GRC with `β = 2`.
pub fn src_closed(
    params: &PseudoharmonicParams,
    qn: QuantumNumbers,
    alpha: u32,
    lambda: Option<f64>,
    policy: &TruncationPolicy,
) -> Result<MeasureValue> {
    grc_closed(params, qn, alpha, 2, lambda, policy)
}
