//! One-parameter grids, evaluated in parallel and written in grid order.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use rayon::prelude::*;

use super::request::Request;
use super::svg::{Line, Plot};
use super::{build_request, evaluate_row, exit_code, fmt_num, row_prefix, row_suffix, SweepArgs, EXIT_NO_CONVERGENCE, EXIT_OK, EXIT_USAGE, SWEEP_HEADER};
use crate::error::{Error, Result};
use crate::measures::MeasureValue;
use crate::molecules::AMU_IN_EV;
use crate::states::{PseudoharmonicParams, QuantumNumbers};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum SweepParam {
    Lambda,
    #[value(name = "De")]
    De,
    Re,
    Mu,
    N,
    Alpha,
    Beta,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Lambda => "lambda",
            SweepParam::De => "De",
            SweepParam::Re => "re",
            SweepParam::Mu => "mu",
            SweepParam::N => "n",
            SweepParam::Alpha => "alpha",
            SweepParam::Beta => "beta",
        }
    }

    fn is_integer(self) -> bool {
        self == SweepParam::N
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, ValueEnum)]
pub enum SweepScale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub scale: SweepScale,
}

impl SweepSpec {
    pub fn new(parameter: SweepParam, from: f64, to: f64, steps: usize, scale: SweepScale) -> Result<Self> {
        const OP: &str = "SweepSpec";
        if !(from.is_finite() && to.is_finite()) || from == to {
            return Err(Error::domain(OP, format!("endpoints {from} and {to} must be finite and distinct")));
        }
        if steps < 2 {
            return Err(Error::domain(OP, format!("steps = {steps}; at least 2 are needed")));
        }
        if scale == SweepScale::Log && from * to <= 0.0 {
            return Err(Error::domain(OP, "a log scale needs nonzero endpoints of one sign"));
        }
        if parameter.is_integer() {
            if from.fract() != 0.0 || to.fract() != 0.0 || from.min(to) < 0.0 {
                return Err(Error::domain(OP, "n endpoints must be nonnegative integers"));
            }
            if scale == SweepScale::Log {
                return Err(Error::domain(OP, "n is swept on a linear scale"));
            }
        }
        Ok(Self { parameter, from, to, steps, scale })
    }

    /// Every integer between the endpoints.
    pub fn integers(parameter: SweepParam, from: u32, to: u32) -> Result<Self> {
        let steps = from.abs_diff(to) as usize + 1;
        Self::new(parameter, from as f64, to as f64, steps, SweepScale::Linear)
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        let values = (0..self.steps).map(|i| {
            let t = i as f64 / last;
            match self.scale {
                SweepScale::Linear => self.from + t * (self.to - self.from),
                SweepScale::Log => self.from.signum() * (self.from.abs().ln() * (1.0 - t) + self.to.abs().ln() * t).exp(),
            }
        });
        let mut pts: Vec<f64> = values.collect();
        pts[0] = self.from;
        pts[self.steps - 1] = self.to;
        if self.parameter.is_integer() {
            pts.iter_mut().for_each(|x| *x = x.round());
            pts.dedup();
        }
        pts
    }
}

/// How a point's parameter maps onto a request. `molecular` selects amu for `mu`.
pub fn apply(req: &Request, param: SweepParam, value: f64, molecular: bool) -> Result<Request> {
    let mut r = req.clone();
    let p = r.params;
    let rebuild = |de: f64, re: f64, mu: f64| PseudoharmonicParams::new(de, re, mu, p.hbar);
    match param {
        SweepParam::Lambda => r.lambda = Some(value),
        SweepParam::De => r.params = rebuild(value, p.re, p.mu)?,
        SweepParam::Re => r.params = rebuild(p.de, value, p.mu)?,
        SweepParam::Mu => r.params = rebuild(p.de, p.re, if molecular { value * AMU_IN_EV } else { value })?,
        SweepParam::N => {
            let n = value as u32;
            let shift = r.denominator_qn.map(|d| d.n as i64 - r.qn.n as i64);
            r.qn = QuantumNumbers::new(n, r.qn.l, r.qn.m)?;
            if let Some(s) = shift {
                let dn = u32::try_from(n as i64 + s).map_err(|_| Error::domain("sweep", "denominator level below 0"))?;
                r.denominator_qn = Some(QuantumNumbers::new(dn, r.qn.l, r.qn.m)?);
            }
        }
        SweepParam::Alpha => r.alpha = Some(value),
        SweepParam::Beta => r.beta = Some(value),
    }
    Ok(r)
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub request: Request,
    pub param: SweepParam,
    pub param_value: f64,
    pub value: MeasureValue,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!("{},{},{},{}", row_prefix(&self.request), self.param, fmt_num(self.param_value), row_suffix(&self.value))
    }
}

/// Evaluate every point; rows come back in grid order, or the error of the
/// first failing point.
pub fn evaluate_grid(base: &Request, spec: &SweepSpec, molecular: bool) -> Result<Vec<SweepRow>> {
    let points = spec.points();
    let rows: Vec<Result<SweepRow>> = points
        .par_iter()
        .map(|&x| {
            let request = apply(base, spec.parameter, x, molecular)?;
            let value = evaluate_row(&request)?;
            Ok(SweepRow { request, param: spec.parameter, param_value: x, value })
        })
        .collect();
    rows.into_iter().collect()
}

pub fn write_rows(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{SWEEP_HEADER}")?;
    for row in rows {
        writeln!(w, "{}", row.to_csv())?;
    }
    w.flush()?;
    Ok(())
}

pub(super) fn run(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let prepared = (|| {
        let req = build_request(&args.model, &args.measure)?;
        let steps = match args.steps {
            Some(s) => s,
            None if args.param.is_integer() => (args.to - args.from).abs() as usize + 1,
            None => return Err(Error::domain("sweep", "--steps is required for a continuous parameter")),
        };
        let spec = SweepSpec::new(args.param, args.from, args.to, steps, args.scale)?;
        Ok((req, spec))
    })();
    let (req, spec) = match prepared {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    if let Err(e) = File::create(&args.out) {
        let _ = writeln!(err, "error: cannot write {}: {e}", args.out.display());
        return EXIT_USAGE;
    }
    let rows = match evaluate_grid(&req, &spec, !args.model.reduced) {
        Ok(rows) => rows,
        Err(e) => {
            let _ = std::fs::remove_file(&args.out);
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    if let Err(e) = write_rows(&args.out, &rows) {
        let _ = std::fs::remove_file(&args.out);
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    if let Some(svg_path) = &args.svg {
        let plot = Plot {
            title: format!("{} of {}", req.measure, req.system_label()),
            x_label: spec.parameter.to_string(),
            y_label: req.measure.to_string(),
            lines: vec![Line { label: req.system_label(), points: rows.iter().map(|r| (r.param_value, r.value.value)).collect() }],
        };
        if let Err(e) = std::fs::write(svg_path, plot.render()) {
            let _ = writeln!(err, "error: cannot write {}: {e}", svg_path.display());
            return EXIT_USAGE;
        }
    }
    let _ = writeln!(out, "wrote {} rows to {}", rows.len(), args.out.display());
    if rows.iter().all(|r| r.value.converged) {
        EXIT_OK
    } else {
        let _ = writeln!(err, "warning: some points did not reach their tolerance");
        EXIT_NO_CONVERGENCE
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::{MeasureKind, System};

    #[test]
    fn grids() {
        let s = SweepSpec::new(SweepParam::Lambda, 2.0, 4.0, 3, SweepScale::Linear).unwrap();
        assert_eq!(s.points(), vec![2.0, 3.0, 4.0]);
        let l = SweepSpec::new(SweepParam::Lambda, 1.0, 100.0, 3, SweepScale::Log).unwrap();
        let p = l.points();
        assert!((p[1] - 10.0).abs() < 1e-12 && p[2] == 100.0);
        let neg = SweepSpec::new(SweepParam::Lambda, -3.0, -300.0, 3, SweepScale::Log).unwrap();
        assert!((neg.points()[1] + 30.0).abs() < 1e-12);
        assert_eq!(SweepSpec::integers(SweepParam::N, 0, 4).unwrap().points(), vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(SweepSpec::new(SweepParam::Lambda, 1.0, 1.0, 3, SweepScale::Linear).is_err());
        assert!(SweepSpec::new(SweepParam::Lambda, 1.0, 2.0, 1, SweepScale::Linear).is_err());
        assert!(SweepSpec::new(SweepParam::Lambda, -1.0, 2.0, 5, SweepScale::Log).is_err());
        assert!(SweepSpec::new(SweepParam::N, 0.0, 2.5, 5, SweepScale::Linear).is_err());
    }

    #[test]
    fn rows_follow_grid_order() {
        let base = Request::new(MeasureKind::Renyi, System::Iso, PseudoharmonicParams::reduced_example(), QuantumNumbers::ground())
            .with_orders(Some(2.5), None);
        let spec = SweepSpec::new(SweepParam::Lambda, 1.5, 20.0, 9, SweepScale::Linear).unwrap();
        let rows = evaluate_grid(&base, &spec, false).unwrap();
        let xs: Vec<f64> = rows.iter().map(|r| r.param_value).collect();
        assert_eq!(xs, spec.points());
        assert!(rows.windows(2).all(|w| w[1].value.value > w[0].value.value));
        assert!(rows[0].to_csv().starts_with("renyi,iso,0,0,0,2.5,,1.5,lambda,1.5,"));
    }

    #[test]
    fn failing_point_aborts() {
        let base = Request::new(MeasureKind::Renyi, System::Iso, PseudoharmonicParams::reduced_example(), QuantumNumbers::ground())
            .with_orders(Some(2.0), None);
        let spec = SweepSpec::new(SweepParam::Lambda, -1.0, 3.0, 5, SweepScale::Linear).unwrap();
        assert!(matches!(evaluate_grid(&base, &spec, false), Err(Error::Domain { .. })));
    }

    #[test]
    fn level_sweep_keeps_denominator_offset() {
        let mut base = Request::new(MeasureKind::Rcr, System::Pho, PseudoharmonicParams::reduced_example(), QuantumNumbers::ground())
            .with_orders(Some(2.5), Some(2.5));
        base.qn = QuantumNumbers::new(1, 0, 0).unwrap();
        base.denominator_qn = Some(QuantumNumbers::ground());
        let r = apply(&base, SweepParam::N, 4.0, false).unwrap();
        assert_eq!((r.qn.n, r.denominator_qn.unwrap().n), (4, 3));
    }
}
