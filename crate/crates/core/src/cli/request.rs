//! One measure of one (or two) quantum states, by closed form or quadrature.

use std::fmt;

use clap::ValueEnum;

use crate::closedform::{renyi_iso_closed, renyi_pho_closed, TruncationPolicy};
use crate::error::{Error, Result};
use crate::measures::{self, MeasureValue};
use crate::specfun::gamma::ln_gamma;
use crate::states::{ball_volume, check_lambda, derive, rho_iso, rho_pho, JointDensity, PseudoharmonicParams, QuantumNumbers};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum System {
    Pho,
    Iso,
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Pho => "pho",
            System::Iso => "iso",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum MeasureKind {
    Renyi,
    Shannon,
    Tsallis,
    Rcr,
    Grc,
    Src,
    Lmc,
    Length,
    Diseq,
    Bound,
}

impl MeasureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::Renyi => "renyi",
            MeasureKind::Shannon => "shannon",
            MeasureKind::Tsallis => "tsallis",
            MeasureKind::Rcr => "rcr",
            MeasureKind::Grc => "grc",
            MeasureKind::Src => "src",
            MeasureKind::Lmc => "lmc",
            MeasureKind::Length => "length",
            MeasureKind::Diseq => "diseq",
            MeasureKind::Bound => "bound",
        }
    }

    fn uses_beta(self) -> bool {
        matches!(self, MeasureKind::Rcr | MeasureKind::Grc | MeasureKind::Bound)
    }

    fn uses_alpha(self) -> bool {
        !matches!(self, MeasureKind::Shannon | MeasureKind::Lmc | MeasureKind::Diseq)
    }

    fn two_densities(self) -> bool {
        matches!(self, MeasureKind::Rcr | MeasureKind::Bound)
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, ValueEnum)]
pub enum MethodChoice {
    /// Closed form for integer orders ≥ 2, quadrature otherwise.
    #[default]
    Auto,
    Closed,
    Quad,
}

/// How densities are normalized. `Printed` reproduces the published plots,
/// whose normalization uses `Γ(L+3/2)` in place of `Γ(n+L+3/2)`; every
/// entropic moment is then scaled by `K^α` with `K = Γ(n+L+3/2)/Γ(L+3/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, ValueEnum)]
pub enum Normalization {
    #[default]
    Exact,
    Printed,
}

#[derive(Debug, Clone)]
pub struct Request {
    pub measure: MeasureKind,
    pub params: PseudoharmonicParams,
    pub qn: QuantumNumbers,
    /// State of the denominator density when it differs from `qn`.
    pub denominator_qn: Option<QuantumNumbers>,
    pub numerator: System,
    pub denominator: System,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub method: MethodChoice,
    pub normalization: Normalization,
    pub policy: TruncationPolicy,
    /// Prefix of the `system` column, e.g. the molecule name.
    pub tag: Option<String>,
}

impl Request {
    /// A request on one system; `numerator` and `denominator` both default to it.
    pub fn new(measure: MeasureKind, system: System, params: PseudoharmonicParams, qn: QuantumNumbers) -> Self {
        Self {
            measure,
            params,
            qn,
            denominator_qn: None,
            numerator: system,
            denominator: system,
            lambda: None,
            alpha: None,
            beta: None,
            method: MethodChoice::Auto,
            normalization: Normalization::Exact,
            policy: TruncationPolicy::default(),
            tag: None,
        }
    }

    pub fn with_orders(mut self, alpha: Option<f64>, beta: Option<f64>) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_pair(mut self, numerator: System, denominator: System) -> Self {
        self.numerator = numerator;
        self.denominator = denominator;
        self
    }

    pub fn with_method(mut self, method: MethodChoice) -> Self {
        self.method = method;
        self
    }

    /// Label for the `system` column: `iso`, `iso/pho` for two densities,
    /// `pho@n1/pho@n0` for two levels, prefixed by `tag:` when tagged.
    pub fn system_label(&self) -> String {
        let den_qn = self.denominator_qn.filter(|q| *q != self.qn);
        let body = match den_qn {
            Some(q) => format!("{}@n{}/{}@n{}", self.numerator, self.qn.n, self.denominator, q.n),
            None if self.measure.two_densities() => format!("{}/{}", self.numerator, self.denominator),
            None => self.numerator.to_string(),
        };
        match &self.tag {
            Some(t) => format!("{t}:{body}"),
            None => body,
        }
    }

    fn involves_iso(&self) -> bool {
        self.numerator == System::Iso || (self.measure.two_densities() && self.denominator == System::Iso)
    }

    /// The orders actually used, after defaults for the fixed-order measures.
    pub fn effective_orders(&self) -> (Option<f64>, Option<f64>) {
        match self.measure {
            MeasureKind::Shannon => (Some(1.0), None),
            MeasureKind::Lmc => (Some(1.0), Some(2.0)),
            MeasureKind::Diseq => (Some(2.0), None),
            MeasureKind::Src => (self.alpha, Some(2.0)),
            m if m.uses_beta() => (self.alpha, self.beta),
            _ => (self.alpha, None),
        }
    }

    fn validate(&self) -> Result<(f64, Option<f64>)> {
        const OP: &str = "request";
        if self.denominator_qn.is_some() && !self.measure.two_densities() {
            return Err(Error::domain(OP, format!("{} is a one-density measure; a denominator level needs rcr or bound", self.measure)));
        }
        if self.involves_iso() {
            let lambda = self.lambda.ok_or_else(|| Error::domain(OP, "the isospectral system needs --lambda"))?;
            check_lambda(lambda)?;
        }
        let (alpha, beta) = self.effective_orders();
        let alpha = match alpha {
            Some(a) => a,
            None if self.measure.uses_alpha() => return Err(Error::domain(OP, format!("{} needs --alpha", self.measure))),
            None => 1.0,
        };
        measures::Order::new(alpha)?;
        if self.measure.uses_beta() {
            let b = beta.ok_or_else(|| Error::domain(OP, format!("{} needs --beta", self.measure)))?;
            measures::Order::new(b)?;
        } else if let Some(b) = beta {
            measures::Order::new(b)?;
        }
        Ok((alpha, beta))
    }

    fn density(&self, system: System, qn: QuantumNumbers) -> Result<JointDensity> {
        match system {
            System::Pho => Ok(rho_pho(&self.params, qn)),
            System::Iso => rho_iso(&self.params, qn, self.lambda.expect("validated")),
        }
    }

    fn printed_shift(&self, qn: QuantumNumbers, alpha: f64) -> Result<f64> {
        match self.normalization {
            Normalization::Exact => Ok(0.0),
            Normalization::Printed => {
                if alpha == 1.0 {
                    return Err(Error::domain("request", "the printed normalization has no Shannon reading"));
                }
                Ok(alpha / (1.0 - alpha) * printed_ln_factor(&self.params, qn)?)
            }
        }
    }

    /// Rényi entropy of one density, honoring the method choice.
    pub fn renyi_of(&self, system: System, qn: QuantumNumbers, alpha: f64) -> Result<MeasureValue> {
        let integer = alpha.fract() == 0.0 && alpha >= 2.0 && alpha <= u32::MAX as f64;
        let closed = match self.method {
            MethodChoice::Quad => false,
            MethodChoice::Closed if !integer => {
                return Err(Error::domain("request", format!("no closed form for order {alpha}; integer orders >= 2 only")));
            }
            MethodChoice::Closed => true,
            MethodChoice::Auto => integer,
        };
        let mut value = if closed {
            let k = alpha as u32;
            let attempt = match system {
                System::Pho => renyi_pho_closed(&self.params, qn, k),
                System::Iso => renyi_iso_closed(&self.params, qn, self.lambda.expect("validated"), k, &self.policy),
            };
            match attempt {
                Err(Error::NoConvergence { .. } | Error::Budget { .. }) if self.method == MethodChoice::Auto => {
                    let mut v = measures::renyi(&self.density(system, qn)?, alpha)?;
                    v.notes.push("closed form did not converge within its budget; quadrature used".into());
                    v
                }
                other => other?,
            }
        } else {
            measures::renyi(&self.density(system, qn)?, alpha)?
        };
        value.value += self.printed_shift(qn, alpha)?;
        Ok(value)
    }

    pub fn evaluate(&self) -> Result<MeasureValue> {
        let (alpha, beta) = self.validate()?;
        let num = (self.numerator, self.qn);
        let den_sys = if self.measure.two_densities() { self.denominator } else { self.numerator };
        let den = (den_sys, self.denominator_qn.unwrap_or(self.qn));
        match self.measure {
            MeasureKind::Renyi | MeasureKind::Shannon => self.renyi_of(num.0, num.1, alpha),
            MeasureKind::Tsallis => {
                let r = self.renyi_of(num.0, num.1, alpha)?;
                if alpha == 1.0 {
                    return Ok(r);
                }
                let e = ((1.0 - alpha) * r.value).exp();
                Ok(r.map(|_| (1.0 - e) / (alpha - 1.0), e))
            }
            MeasureKind::Length => {
                let r = self.renyi_of(num.0, num.1, alpha)?;
                let c = ball_volume(3, 1.0);
                let len = (r.value / 3.0).exp() / c.cbrt();
                Ok(r.map(|_| len, len / 3.0))
            }
            MeasureKind::Diseq => {
                let r = self.renyi_of(num.0, num.1, 2.0)?;
                let d = (-r.value).exp();
                Ok(r.map(|_| d, d))
            }
            MeasureKind::Rcr | MeasureKind::Grc | MeasureKind::Src | MeasureKind::Lmc => {
                let beta = beta.expect("validated");
                if num == den && alpha == beta {
                    return Ok(MeasureValue::exact(1.0));
                }
                let rf = self.renyi_of(num.0, num.1, alpha)?;
                let rg = self.renyi_of(den.0, den.1, beta)?;
                let v = (rf.value - rg.value).exp();
                Ok(rf.combine(&rg, v, v * (rf.abs_error + rg.abs_error)))
            }
            MeasureKind::Bound => {
                if self.method == MethodChoice::Closed {
                    return Err(Error::domain("request", "the entropic bound is evaluated by quadrature only"));
                }
                let f = self.density(num.0, num.1)?;
                let g = self.density(den.0, den.1)?;
                measures::rcr_upper_bound(&f, &g, alpha, beta.expect("validated"))
            }
        }
    }
}

/// `ln K` with `K = Γ(n+L+3/2)/Γ(L+3/2)`, the factor by which the printed
/// normalization overstates the density.
pub fn printed_ln_factor(params: &PseudoharmonicParams, qn: QuantumNumbers) -> Result<f64> {
    let shape = derive(params, qn.l).shape();
    Ok(ln_gamma(qn.n as f64 + shape)? - ln_gamma(shape)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::{grc_closed, src_closed};
    use crate::measures::Method;
    use approx::assert_relative_eq;

    fn reduced(measure: MeasureKind, system: System) -> Request {
        Request::new(measure, system, PseudoharmonicParams::reduced_example(), QuantumNumbers::new(1, 1, 0).unwrap())
    }

    #[test]
    fn auto_uses_closed_form_for_integer_orders() {
        let r = reduced(MeasureKind::Renyi, System::Pho).with_orders(Some(2.0), None).evaluate().unwrap();
        assert_eq!(r.method, Method::Closed);
        let expected = renyi_pho_closed(&PseudoharmonicParams::reduced_example(), QuantumNumbers::new(1, 1, 0).unwrap(), 2).unwrap();
        assert_eq!(r.value, expected.value);
        let q = reduced(MeasureKind::Renyi, System::Pho).with_orders(Some(2.5), None).evaluate().unwrap();
        assert_eq!(q.method, Method::Quadrature);
        let forced = reduced(MeasureKind::Renyi, System::Pho).with_orders(Some(2.0), None).with_method(MethodChoice::Quad);
        assert_relative_eq!(forced.evaluate().unwrap().value, r.value, max_relative = 1e-9);
    }

    #[test]
    fn closed_method_rejects_fractional_orders() {
        let r = reduced(MeasureKind::Renyi, System::Pho).with_orders(Some(2.5), None).with_method(MethodChoice::Closed);
        assert!(matches!(r.evaluate(), Err(Error::Domain { .. })));
    }

    #[test]
    fn complexities_match_closed_forms() {
        let p = PseudoharmonicParams::reduced_example();
        let qn = QuantumNumbers::new(1, 1, 0).unwrap();
        let policy = TruncationPolicy::default();
        let grc = reduced(MeasureKind::Grc, System::Iso).with_lambda(2.5).with_orders(Some(3.0), Some(2.0));
        let expected = grc_closed(&p, qn, 3, 2, Some(2.5), &policy).unwrap().value;
        assert_relative_eq!(grc.evaluate().unwrap().value, expected, max_relative = 1e-12);
        let src = reduced(MeasureKind::Src, System::Pho).with_orders(Some(3.0), None);
        assert_relative_eq!(src.evaluate().unwrap().value, src_closed(&p, qn, 3, None, &policy).unwrap().value, max_relative = 1e-12);
        let same = reduced(MeasureKind::Grc, System::Pho).with_orders(Some(2.0), Some(2.0)).evaluate().unwrap();
        assert_eq!(same.value, 1.0);
    }

    #[test]
    fn derived_measures_are_consistent() {
        let base = reduced(MeasureKind::Renyi, System::Pho).with_orders(Some(2.0), None);
        let r2 = base.evaluate().unwrap().value;
        let d = reduced(MeasureKind::Diseq, System::Pho).evaluate().unwrap().value;
        assert_relative_eq!(d, (-r2).exp(), max_relative = 1e-14);
        let t = reduced(MeasureKind::Tsallis, System::Pho).with_orders(Some(2.0), None).evaluate().unwrap().value;
        assert_relative_eq!(t, 1.0 - (-r2).exp(), max_relative = 1e-14);
        let len = reduced(MeasureKind::Length, System::Pho).with_orders(Some(2.0), None).evaluate().unwrap().value;
        assert_relative_eq!(len, (3.0 / (4.0 * std::f64::consts::PI)).cbrt() * (r2 / 3.0).exp(), max_relative = 1e-14);
        let lmc = reduced(MeasureKind::Lmc, System::Pho).evaluate().unwrap();
        let s = reduced(MeasureKind::Shannon, System::Pho).evaluate().unwrap().value;
        assert_relative_eq!(lmc.value, (s - r2).exp(), max_relative = 1e-8);
    }

    #[test]
    fn rcr_between_systems_and_domain_errors() {
        let r = reduced(MeasureKind::Rcr, System::Iso)
            .with_lambda(2.5)
            .with_pair(System::Iso, System::Pho)
            .with_orders(Some(2.0), Some(3.0));
        assert_eq!(r.system_label(), "iso/pho");
        let v = r.evaluate().unwrap();
        assert!(v.value > 0.0);
        let bad = reduced(MeasureKind::Renyi, System::Iso).with_lambda(0.5).with_orders(Some(2.0), None);
        assert!(matches!(bad.evaluate(), Err(Error::Domain { .. })));
        let missing = reduced(MeasureKind::Rcr, System::Pho).with_orders(Some(2.0), None);
        assert!(missing.evaluate().is_err());
    }

    #[test]
    fn printed_normalization_shifts_by_gamma_ratio() {
        let qn = QuantumNumbers::new(2, 0, 0).unwrap();
        let p = PseudoharmonicParams::reduced_example();
        let exact = Request::new(MeasureKind::Renyi, System::Pho, p, qn).with_orders(Some(2.0), None);
        let printed = Request { normalization: Normalization::Printed, ..exact.clone() };
        let l = derive(&p, 0).l_eff;
        let ln_k = ln_gamma(2.0 + l + 1.5).unwrap() - ln_gamma(l + 1.5).unwrap();
        let shift = printed.evaluate().unwrap().value - exact.evaluate().unwrap().value;
        assert_relative_eq!(shift, -2.0 * ln_k, max_relative = 1e-12);
    }
}
