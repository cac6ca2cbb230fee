//! The eleven published figures as parameter grids, plus checks of the
//! qualitative shape each figure is described as having.
//!
//! Axis ranges are not stated in the captions; these are used, with
//! [`DEFAULT_POINTS`] evenly spaced points on continuous axes:
//!
//! | figure | axis | range |
//! |---|---|---|
//! | 1, 6–9 | λ | 1.1 to 100 |
//! | 2 | n | 0 to 20 |
//! | 10, 11 | n over n − 1 | 1 to 20 |
//! | 3 | D_e, r_e, μ (reduced, ħ = 1) | 0.5 to 10, 0.2 to 5, 0.5 to 10 |
//! | 4, 5 | λ | 1.1 to 1000 |
//!
//! Every grid point is evaluated by quadrature.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use super::request::{MeasureKind, MethodChoice, Normalization, Request, System};
use super::svg::{Line, Plot};
use super::sweep::{evaluate_grid, SweepParam, SweepRow, SweepScale, SweepSpec};
use super::verify::CheckOutcome;
use super::{exit_code, ReproduceArgs, EXIT_NO_CONVERGENCE, EXIT_OK, EXIT_USAGE, SWEEP_HEADER};
use crate::error::{Error, Result};
use crate::molecules::{default_table, find};
use crate::states::{PseudoharmonicParams, QuantumNumbers};

pub const DEFAULT_POINTS: usize = 200;
pub const FIGURE_MOLECULES: [&str; 6] = ["CO", "NO", "N2", "CH", "H2", "ScH"];
pub const LAMBDA_RANGE: (f64, f64) = (1.1, 100.0);
pub const WIDE_LAMBDA_RANGE: (f64, f64) = (1.1, 1000.0);
pub const LEVELS: u32 = 20;

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub base: Request,
    /// `mu` sweeps in amu rather than reduced units.
    pub molecular: bool,
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub name: String,
    pub title: String,
    pub y_label: String,
    pub spec: SweepSpec,
    pub series: Vec<Series>,
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub number: u8,
    pub title: String,
    pub panels: Vec<Panel>,
}

#[derive(Debug, Clone)]
pub struct PanelData {
    pub panel: Panel,
    pub rows: Vec<(String, Vec<SweepRow>)>,
}

impl PanelData {
    pub fn series(&self, label: &str) -> Option<&[SweepRow]> {
        self.rows.iter().find(|(l, _)| l == label).map(|(_, r)| r.as_slice())
    }

    pub fn values(&self, label: &str) -> Vec<f64> {
        self.series(label).map(|r| r.iter().map(|x| x.value.value).collect()).unwrap_or_default()
    }

    pub fn plot(&self) -> Plot {
        Plot {
            title: self.panel.title.clone(),
            x_label: self.panel.spec.parameter.to_string(),
            y_label: self.panel.y_label.clone(),
            lines: self
                .rows
                .iter()
                .map(|(label, rows)| Line { label: label.clone(), points: rows.iter().map(|r| (r.param_value, r.value.value)).collect() })
                .collect(),
        }
    }
}

fn molecule_params() -> Result<Vec<(String, PseudoharmonicParams)>> {
    let table = default_table()?;
    FIGURE_MOLECULES.iter().map(|name| Ok((name.to_string(), find(&table, name)?.to_params()?))).collect()
}

fn reduced(de: f64, re: f64, mu: f64) -> PseudoharmonicParams {
    PseudoharmonicParams::new(de, re, mu, 1.0).expect("positive reduced parameters")
}

fn qn(n: u32, l: u32, m: i32) -> QuantumNumbers {
    QuantumNumbers::new(n, l, m).expect("valid quantum numbers")
}

struct Ctx {
    points: usize,
    normalization: Normalization,
}

impl Ctx {
    fn request(&self, measure: MeasureKind, params: PseudoharmonicParams, state: QuantumNumbers, tag: Option<&str>) -> Request {
        let mut r = Request::new(measure, System::Iso, params, state).with_method(MethodChoice::Quad);
        r.normalization = self.normalization;
        r.tag = tag.map(str::to_string);
        r
    }

    fn lambda_axis(&self, range: (f64, f64)) -> SweepSpec {
        SweepSpec::new(SweepParam::Lambda, range.0, range.1, self.points, SweepScale::Linear).expect("valid axis")
    }

    fn axis(&self, param: SweepParam, from: f64, to: f64) -> SweepSpec {
        SweepSpec::new(param, from, to, self.points, SweepScale::Linear).expect("valid axis")
    }

    /// One series per molecule for the isospectral ground state over λ.
    fn molecules_over_lambda(
        &self,
        number: u8,
        title: &str,
        y_label: &str,
        make: impl Fn(Request) -> Request,
        measure: MeasureKind,
    ) -> Result<Figure> {
        let series = molecule_params()?
            .into_iter()
            .map(|(name, p)| Series { base: make(self.request(measure, p, QuantumNumbers::ground(), Some(&name))), label: name, molecular: true })
            .collect();
        Ok(Figure {
            number,
            title: title.to_string(),
            panels: vec![Panel {
                name: String::new(),
                title: title.to_string(),
                y_label: y_label.to_string(),
                spec: self.lambda_axis(LAMBDA_RANGE),
                series,
            }],
        })
    }

    /// Ratios between levels `n + 1` and `n` for each pair of systems.
    fn successive_levels(&self, number: u8, pairs: [(System, System); 2]) -> Result<Figure> {
        let molecules = molecule_params()?;
        let panels = pairs
            .iter()
            .zip(["A", "B"])
            .map(|(&(num, den), name)| {
                let series = molecules
                    .iter()
                    .map(|(m, p)| {
                        let mut r = self.request(MeasureKind::Rcr, *p, qn(1, 0, 0), Some(m)).with_pair(num, den).with_lambda(2.5);
                        r.alpha = Some(2.5);
                        r.beta = Some(2.5);
                        r.denominator_qn = Some(QuantumNumbers::ground());
                        Series { label: m.clone(), base: r, molecular: true }
                    })
                    .collect();
                Panel {
                    name: name.to_string(),
                    title: format!("rcr of {num}(n,0,0) over {den}(n-1,0,0), lambda = 2.5, orders (2.5, 2.5)"),
                    y_label: "rcr".into(),
                    spec: SweepSpec::integers(SweepParam::N, 1, LEVELS).expect("valid axis"),
                    series,
                }
            })
            .collect();
        Ok(Figure { number, title: format!("Figure {number}: successive levels"), panels })
    }
}

/// The grid of figure `number` (1 to 11).
pub fn figure(number: u8, points: usize, normalization: Normalization) -> Result<Figure> {
    if points < 2 {
        return Err(Error::domain("figure", "at least 2 points per axis"));
    }
    let ctx = Ctx { points, normalization };
    let orders = |a: f64, b: Option<f64>| move |r: Request| r.with_orders(Some(a), b);
    match number {
        1 => ctx.molecules_over_lambda(1, "Renyi entropy of iso(0,0,0), alpha = 2.5", "renyi", orders(2.5, None), MeasureKind::Renyi),
        2 => {
            let series = molecule_params()?
                .into_iter()
                .map(|(name, p)| {
                    let r = ctx
                        .request(MeasureKind::Rcr, p, QuantumNumbers::ground(), Some(&name))
                        .with_pair(System::Iso, System::Pho)
                        .with_lambda(2.5)
                        .with_orders(Some(2.25), Some(3.5));
                    Series { label: name, base: r, molecular: true }
                })
                .collect();
            let title = "rcr of iso(n,0,0) over pho(n,0,0), lambda = 2.5, orders (2.25, 3.5)";
            Ok(Figure {
                number,
                title: title.into(),
                panels: vec![Panel {
                    name: String::new(),
                    title: title.into(),
                    y_label: "rcr".into(),
                    spec: SweepSpec::integers(SweepParam::N, 0, LEVELS)?,
                    series,
                }],
            })
        }
        3 => {
            let axes = [(SweepParam::De, 0.5, 10.0), (SweepParam::Re, 0.2, 5.0), (SweepParam::Mu, 0.5, 10.0)];
            let mut panels = Vec::new();
            for (row, state) in [qn(0, 0, 0), qn(3, 2, 1)].into_iter().enumerate() {
                for (col, &(param, from, to)) in axes.iter().enumerate() {
                    let mut series = Vec::new();
                    for (a, b) in [(2.5, 3.0), (3.5, 2.75)] {
                        for (num, den) in [(System::Pho, System::Iso), (System::Iso, System::Pho)] {
                            let label = format!("{num}/{den} ({a}, {b})");
                            let r = ctx
                                .request(MeasureKind::Rcr, reduced(1.0, 1.0, 1.0), state, None)
                                .with_pair(num, den)
                                .with_lambda(1.5)
                                .with_orders(Some(a), Some(b));
                            series.push(Series { label, base: r, molecular: false });
                        }
                    }
                    panels.push(Panel {
                        name: ["A", "B", "C", "D", "E", "F"][3 * row + col].to_string(),
                        title: format!("rcr of state {state} over {param}, lambda = 1.5, hbar = 1"),
                        y_label: "rcr".into(),
                        spec: ctx.axis(param, from, to),
                        series,
                    });
                }
            }
            Ok(Figure { number, title: "Figure 3: rcr against the potential parameters".into(), panels })
        }
        4 | 5 => {
            let p = PseudoharmonicParams::reduced_example();
            let mut panels = Vec::new();
            for (i, (state, (a, b))) in [qn(0, 1, 1), qn(1, 1, 1)]
                .into_iter()
                .flat_map(|s| [(s, (2.25, 3.0)), (s, (2.5, 1.5))])
                .enumerate()
            {
                let mut series = Vec::new();
                if number == 4 {
                    for (num, den) in [(System::Pho, System::Iso), (System::Iso, System::Pho)] {
                        let label = format!("{num}/{den}");
                        let r = ctx.request(MeasureKind::Rcr, p, state, None).with_pair(num, den).with_lambda(2.0).with_orders(Some(a), Some(b));
                        series.push(Series { label, base: r, molecular: false });
                    }
                } else {
                    let r = ctx.request(MeasureKind::Grc, p, state, None).with_lambda(2.0).with_orders(Some(a), Some(b));
                    series.push(Series { label: "iso".into(), base: r, molecular: false });
                }
                let mut pho = ctx.request(MeasureKind::Grc, p, state, None).with_orders(Some(a), Some(b));
                pho.numerator = System::Pho;
                pho.denominator = System::Pho;
                series.push(Series { label: "pho".into(), base: pho, molecular: false });
                let kind = if number == 4 { "rcr" } else { "grc" };
                panels.push(Panel {
                    name: ["A", "B", "C", "D"][i].to_string(),
                    title: format!("{kind} of state {state}, orders ({a}, {b}), De = 3.5, re = 0.5, mu = 1"),
                    y_label: kind.into(),
                    spec: ctx.lambda_axis(WIDE_LAMBDA_RANGE),
                    series,
                });
            }
            Ok(Figure { number, title: format!("Figure {number}"), panels })
        }
        6 => ctx.molecules_over_lambda(6, "grc of iso(0,0,0), orders (8.5, 3.5)", "grc", orders(8.5, Some(3.5)), MeasureKind::Grc),
        7 => ctx.molecules_over_lambda(7, "grc of iso(0,0,0), orders (2.25, 3.5)", "grc", orders(2.25, Some(3.5)), MeasureKind::Grc),
        8 => ctx.molecules_over_lambda(8, "src of iso(0,0,0), alpha = 2.5", "src", orders(2.5, None), MeasureKind::Src),
        9 => ctx.molecules_over_lambda(9, "src of iso(0,0,0), alpha = 1.75", "src", orders(1.75, None), MeasureKind::Src),
        10 => ctx.successive_levels(10, [(System::Pho, System::Pho), (System::Iso, System::Iso)]),
        11 => ctx.successive_levels(11, [(System::Pho, System::Iso), (System::Iso, System::Pho)]),
        _ => Err(Error::domain("figure", format!("no figure {number}; figures are numbered 1 to 11"))),
    }
}

impl Figure {
    pub fn evaluate(&self) -> Result<Vec<PanelData>> {
        self.panels
            .par_iter()
            .map(|panel| {
                let rows = panel
                    .series
                    .par_iter()
                    .map(|s| Ok((s.label.clone(), evaluate_grid(&s.base, &panel.spec, s.molecular)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(PanelData { panel: panel.clone(), rows })
            })
            .collect()
    }

    pub fn file_stem(&self) -> String {
        format!("fig{:02}", self.number)
    }
}

fn first_differences(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Number of sign changes in the first differences.
pub fn turning_points(v: &[f64]) -> usize {
    let d: Vec<f64> = first_differences(v).into_iter().filter(|x| *x != 0.0).collect();
    d.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Qualitative claims made about a figure, checked on its data.
pub fn shape_checks(number: u8, data: &[PanelData]) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    match number {
        1 => {
            let mut c = CheckOutcome::new("figure 1: renyi increases in lambda toward a plateau", 0.0);
            for (label, rows) in &data[0].rows {
                let v: Vec<f64> = rows.iter().map(|r| r.value.value).collect();
                let drops = first_differences(&v).into_iter().filter(|d| *d < 0.0).count();
                let n = v.len();
                let early = v[n / 10] - v[0];
                let late = v[n - 1] - v[n - 1 - n / 10];
                c.case(drops == 0 && late < 0.1 * early, 0.0, || format!("{label}: {drops} decreases, late rise {late:.3e} vs early {early:.3e}"));
            }
            out.push(c);
        }
        2 => {
            let mut c = CheckOutcome::new("figure 2: rcr tends to 0 as n grows", 0.0);
            for (label, rows) in &data[0].rows {
                let v: Vec<f64> = rows.iter().map(|r| r.value.value).collect();
                let last = *v.last().expect("nonempty");
                let ok = last < 0.1 * v[0] && turning_points(&v) == 0;
                c.case(ok, last, || format!("{label}: rcr goes from {:.4} at n = 0 to {last:.4} at n = {}", v[0], v.len() - 1));
            }
            out.push(c);
        }
        3 => {
            let mut c = CheckOutcome::new("figure 3: rcr monotone in De, re and mu", 0.0);
            for panel in data {
                for (label, rows) in &panel.rows {
                    let v: Vec<f64> = rows.iter().map(|r| r.value.value).collect();
                    let t = turning_points(&v);
                    c.case(t == 0, t as f64, || format!("panel {} {label}: {t} turning points", panel.panel.name));
                }
            }
            out.push(c);
        }
        4 | 5 => {
            let mut c = CheckOutcome::new(
                if number == 4 { "figure 4: both rcr directions approach the pho grc" } else { "figure 5: iso grc approaches the pho grc" },
                5e-3,
            );
            for panel in data {
                let target = *panel.values("pho").last().expect("pho series");
                for (label, rows) in panel.rows.iter().filter(|(l, _)| l != "pho") {
                    let v: Vec<f64> = rows.iter().map(|r| r.value.value).collect();
                    let far = relative(*v.last().expect("nonempty"), target);
                    let near = relative(v[0], target);
                    c.case(far <= 5e-3 && far < near, far, || {
                        format!("panel {} {label}: relative gap {near:.3e} at lambda = 1.1, {far:.3e} at lambda = 1000", panel.panel.name)
                    });
                }
            }
            out.push(c);
        }
        6..=9 => {
            let mut c = CheckOutcome::new(format!("figure {number}: monotone and bounded in lambda"), 0.0);
            for (label, rows) in &data[0].rows {
                let v: Vec<f64> = rows.iter().map(|r| r.value.value).collect();
                let t = turning_points(&v);
                c.case(t == 0 && v.iter().all(|x| x.is_finite()), t as f64, || format!("{label}: {t} turning points"));
            }
            out.push(c);
        }
        10 | 11 => {
            let mut c = CheckOutcome::new(format!("figure {number}: rcr oscillates in n"), 0.0);
            for panel in data {
                for (label, rows) in &panel.rows {
                    let v: Vec<f64> = rows.iter().map(|r| r.value.value).collect();
                    let t = turning_points(&v);
                    c.case(t >= 2, t as f64, || {
                        format!("panel {} {label}: {t} turning points; rcr runs from {:.4} to {:.4}", panel.panel.name, v[0], v[v.len() - 1])
                    });
                }
            }
            out.push(c);
        }
        _ => {}
    }
    out
}

pub fn write_figure(dir: &Path, fig: &Figure, data: &[PanelData]) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let stem = fig.file_stem();
    let csv_path = dir.join(format!("{stem}.csv"));
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for panel in data {
        for (_, rows) in &panel.rows {
            for r in rows {
                csv.push_str(&r.to_csv());
                csv.push('\n');
            }
        }
    }
    std::fs::write(&csv_path, csv)?;
    let mut written = vec![csv_path];
    for panel in data {
        let name = if panel.panel.name.is_empty() { format!("{stem}.svg") } else { format!("{stem}{}.svg", panel.panel.name) };
        let path = dir.join(name);
        std::fs::write(&path, panel.plot().render())?;
        written.push(path);
    }
    Ok(written)
}

pub(super) fn run(args: &ReproduceArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = figure(args.figure, args.points, args.normalization).and_then(|fig| {
        let data = fig.evaluate()?;
        Ok((fig, data))
    });
    let (fig, data) = match result {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    match write_figure(&args.out, &fig, &data) {
        Ok(paths) => {
            for p in paths {
                let _ = writeln!(out, "wrote {}", p.display());
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    }
    for check in shape_checks(fig.number, &data) {
        let _ = writeln!(out, "{}", check.summary_line());
        for f in &check.failures {
            let _ = writeln!(out, "  {f}");
        }
    }
    let converged = data.iter().all(|p| p.rows.iter().all(|(_, rows)| rows.iter().all(|r| r.value.converged)));
    if converged {
        EXIT_OK
    } else {
        EXIT_NO_CONVERGENCE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_figure_has_a_grid() {
        for n in 1..=11 {
            let f = figure(n, 5, Normalization::Exact).unwrap();
            assert!(!f.panels.is_empty());
            for p in &f.panels {
                assert!(!p.series.is_empty());
            }
        }
        assert!(figure(12, 5, Normalization::Exact).is_err());
        assert_eq!(figure(3, 5, Normalization::Exact).unwrap().panels.len(), 6);
        assert_eq!(figure(2, 5, Normalization::Exact).unwrap().panels[0].spec.points().len(), 21);
    }

    #[test]
    fn turning_point_count() {
        assert_eq!(turning_points(&[1.0, 2.0, 3.0]), 0);
        assert_eq!(turning_points(&[1.0, 2.0, 1.0, 2.0]), 2);
        assert_eq!(turning_points(&[1.0, 1.0, 0.5]), 0);
    }

    #[test]
    fn small_figure_round_trip() {
        let fig = figure(8, 6, Normalization::Exact).unwrap();
        let data = fig.evaluate().unwrap();
        assert_eq!(data[0].rows.len(), 6);
        let dir = std::env::temp_dir().join(format!("qcr-fig-{}", std::process::id()));
        let paths = write_figure(&dir, &fig, &data).unwrap();
        let csv = std::fs::read_to_string(&paths[0]).unwrap();
        assert_eq!(csv.lines().count(), 1 + 6 * 6);
        assert!(csv.lines().nth(1).unwrap().starts_with("src,CO:iso,0,0,0,2.5,2,1.1,lambda,1.1,"));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
