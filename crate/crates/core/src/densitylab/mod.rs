//! Piecewise-constant densities on concentric shells and finite discrete
//! distributions.
//!
//! A [`StepDensity`] keeps an exact rational copy of its shells when it was
//! built from rational data: shells are stored as the `D`-th power of the outer
//! radius together with the level multiplied by the unit-ball volume `C_D`, so
//! that the total mass `Σ w_i (v_i − v_{i−1})` is a rational number even when
//! the radii themselves are irrational.

mod battery;
mod example;
mod extremality;
mod order;
mod transform;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::specfun::NeumaierSum;
use crate::states::{ball_volume, sphere_area, Angular, JointDensity};

pub use battery::{random_distribution, random_majorized_pair, random_step_density};
pub use example::{example_pair_from_volume_ratio, extrapolate_limit, make_example_pair, near_continuity_ladder, ExamplePair, LadderPoint};
pub use extremality::{extremality_residual, ExtremalityResidual};
pub use order::{delta_neighboring, effective_domain_measure, is_localized, majorizes, sup_gap, Localization, Majorize};
pub use transform::{disjoint_copies, mixture, transform, Mixture};

/// Allowed deviation of a float-built density's mass from one.
pub const MASS_TOL: f64 = 1e-12;

/// Volume of the unit ball in `ℝ^D`.
pub fn unit_ball_volume(dimension: u32) -> f64 {
    ball_volume(dimension, 1.0)
}

/// One constant piece: its value and the measure of the set carrying it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub value: f64,
    pub measure: f64,
}

/// Anything that can be listed as finitely many constant pieces.
pub trait PiecewiseConstant {
    fn cells(&self) -> Result<Vec<Cell>>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shell {
    pub outer_radius: f64,
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ExactShell {
    /// `R^D` of the outer boundary.
    pub outer_power: BigRational,
    /// `C_D` times the level.
    pub scaled_level: BigRational,
}

#[derive(Debug, Clone)]
pub struct StepDensity {
    dimension: u32,
    shells: Vec<Shell>,
    center: Vec<f64>,
    exact: Option<Vec<ExactShell>>,
}

pub(crate) fn rational(x: f64, op: &'static str) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::domain(op, format!("{x} is not finite")))
}

pub(crate) fn rational_pow(x: &BigRational, k: u32) -> BigRational {
    num_traits::pow(x.clone(), k as usize)
}

fn check_dimension(dimension: u32, op: &'static str) -> Result<()> {
    if dimension == 0 {
        return Err(Error::domain(op, "dimension must be positive"));
    }
    Ok(())
}

impl StepDensity {
    /// Build from `(outer_radius, level)` pairs; the mass must be one to [`MASS_TOL`].
    pub fn new(dimension: u32, shells: &[(f64, f64)]) -> Result<Self> {
        const OP: &str = "StepDensity::new";
        check_dimension(dimension, OP)?;
        if shells.is_empty() {
            return Err(Error::domain(OP, "at least one shell is required"));
        }
        let mut prev = 0.0;
        for &(r, level) in shells {
            if !(r.is_finite() && r > prev) {
                return Err(Error::domain(OP, format!("radii must be finite and strictly increasing, got {r} after {prev}")));
            }
            if !(level.is_finite() && level >= 0.0) {
                return Err(Error::domain(OP, format!("level {level} must be finite and nonnegative")));
            }
            prev = r;
        }
        let density = Self {
            dimension,
            shells: shells.iter().map(|&(outer_radius, level)| Shell { outer_radius, level }).collect(),
            center: vec![0.0; dimension as usize],
            exact: None,
        };
        let mass = density.mass();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::domain(OP, format!("total probability {mass} differs from 1")));
        }
        Ok(density)
    }

    /// Build from exact `(R^D, C_D · level)` pairs; the mass must be exactly one.
    pub fn from_scaled(dimension: u32, shells: Vec<(BigRational, BigRational)>) -> Result<Self> {
        const OP: &str = "StepDensity::from_scaled";
        check_dimension(dimension, OP)?;
        if shells.is_empty() {
            return Err(Error::domain(OP, "at least one shell is required"));
        }
        let mut prev = BigRational::zero();
        let mut mass = BigRational::zero();
        for (v, w) in &shells {
            if v <= &prev {
                return Err(Error::domain(OP, format!("outer powers must strictly increase, got {v} after {prev}")));
            }
            if w.is_negative() {
                return Err(Error::domain(OP, format!("scaled level {w} is negative")));
            }
            mass += w * (v - &prev);
            prev = v.clone();
        }
        if !mass.is_one() {
            return Err(Error::domain(OP, format!("total probability {mass} is not exactly 1")));
        }
        let exact: Vec<ExactShell> =
            shells.into_iter().map(|(outer_power, scaled_level)| ExactShell { outer_power, scaled_level }).collect();
        Ok(Self::from_exact(dimension, exact, vec![0.0; dimension as usize]))
    }

    /// [`StepDensity::from_scaled`] with float inputs taken at their exact binary values.
    pub fn from_scaled_f64(dimension: u32, shells: &[(f64, f64)]) -> Result<Self> {
        let exact = shells
            .iter()
            .map(|&(v, w)| Ok((rational(v, "StepDensity::from_scaled_f64")?, rational(w, "StepDensity::from_scaled_f64")?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_scaled(dimension, exact)
    }

    pub(crate) fn from_exact(dimension: u32, exact: Vec<ExactShell>, center: Vec<f64>) -> Self {
        let c = unit_ball_volume(dimension);
        let inv_d = 1.0 / dimension as f64;
        let shells = exact
            .iter()
            .map(|s| Shell {
                outer_radius: to_f64(&s.outer_power).powf(inv_d),
                level: to_f64(&s.scaled_level) / c,
            })
            .collect();
        Self { dimension, shells, center, exact: Some(exact) }
    }

    /// The uniform density on the ball of the given radius.
    pub fn uniform_ball(dimension: u32, radius: f64) -> Result<Self> {
        check_dimension(dimension, "StepDensity::uniform_ball")?;
        let v = rational(radius, "StepDensity::uniform_ball")?;
        if !v.is_positive() {
            return Err(Error::domain("StepDensity::uniform_ball", format!("radius {radius} must be positive")));
        }
        let v = rational_pow(&v, dimension);
        let w = v.recip();
        Self::from_scaled(dimension, vec![(v, w)])
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn shells(&self) -> &[Shell] {
        &self.shells
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub(crate) fn exact_shells(&self) -> Option<&[ExactShell]> {
        self.exact.as_deref()
    }

    pub(crate) fn with_center(mut self, center: Vec<f64>) -> Self {
        self.center = center;
        self
    }

    /// Volumes of the shells, innermost first.
    pub fn shell_volumes(&self) -> Vec<f64> {
        let c = unit_ball_volume(self.dimension);
        match &self.exact {
            Some(ex) => {
                let mut prev = BigRational::zero();
                ex.iter()
                    .map(|s| {
                        let dv = &s.outer_power - &prev;
                        prev = s.outer_power.clone();
                        c * to_f64(&dv)
                    })
                    .collect()
            }
            None => {
                let d = self.dimension as i32;
                let mut prev = 0.0f64;
                self.shells
                    .iter()
                    .map(|s| {
                        let v = c * (s.outer_radius.powi(d) - prev.powi(d));
                        prev = s.outer_radius;
                        v
                    })
                    .collect()
            }
        }
    }

    /// Total probability, exact when the density carries rational data.
    pub fn exact_mass(&self) -> Option<BigRational> {
        let ex = self.exact.as_ref()?;
        let mut prev = BigRational::zero();
        let mut mass = BigRational::zero();
        for s in ex {
            mass += &s.scaled_level * (&s.outer_power - &prev);
            prev = s.outer_power.clone();
        }
        Some(mass)
    }

    pub fn mass(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for (s, v) in self.shells.iter().zip(self.shell_volumes()) {
            acc.add(s.level * v);
        }
        acc.value()
    }

    /// Level at distance `r` from the center; shell boundaries belong to the inner shell.
    pub fn radial_level(&self, r: f64) -> f64 {
        let r = r.abs();
        self.shells.iter().find(|s| r <= s.outer_radius).map_or(0.0, |s| s.level)
    }

    /// Value at a point of `ℝ^D`.
    pub fn level_at(&self, point: &[f64]) -> f64 {
        self.radial_level(distance(point, &self.center))
    }

    /// Radius of the smallest centered ball carrying all the probability.
    pub fn support_radius(&self) -> f64 {
        self.shells.iter().rev().find(|s| s.level > 0.0).map_or(0.0, |s| s.outer_radius)
    }

    pub fn sup(&self) -> f64 {
        self.shells.iter().map(|s| s.level).fold(0.0, f64::max)
    }

    /// The same density as an isotropic [`JointDensity`] centered at the origin,
    /// for the quadrature-based measures.
    pub fn to_joint_density(&self) -> JointDensity {
        let area = sphere_area(self.dimension);
        let shells = self.shells.clone();
        let ln_radial = move |r: f64| {
            let level = shells.iter().find(|s| r <= s.outer_radius).map_or(0.0, |s| s.level);
            if level > 0.0 {
                (level * area).ln()
            } else {
                f64::NEG_INFINITY
            }
        };
        let radius = self.support_radius();
        JointDensity::separable(self.dimension, ln_radial, Angular::Isotropic, radius)
            .with_breakpoints(self.shells.iter().map(|s| s.outer_radius).collect())
            .with_support_radius(radius)
            .with_sup_hint(self.sup())
            .with_label(format!("step density D={} with {} shells", self.dimension, self.shells.len()))
    }
}

impl PiecewiseConstant for StepDensity {
    fn cells(&self) -> Result<Vec<Cell>> {
        Ok(self.shells.iter().zip(self.shell_volumes()).map(|(s, measure)| Cell { value: s.level, measure }).collect())
    }
}

pub(crate) fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Probabilities on finitely many cells, optionally with cell measures.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    probabilities: Vec<f64>,
    cell_measures: Option<Vec<f64>>,
}

impl DiscreteDistribution {
    /// Probabilities summing to one.
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        const OP: &str = "DiscreteDistribution::new";
        check_probabilities(&probabilities, OP)?;
        let total = compensated(probabilities.iter().copied());
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::domain(OP, format!("probabilities sum to {total}")));
        }
        Ok(Self { probabilities, cell_measures: None })
    }

    /// Cell values `p_i` over cells of measure `m_i` with `Σ p_i m_i = 1`.
    pub fn with_measures(probabilities: Vec<f64>, cell_measures: Vec<f64>) -> Result<Self> {
        const OP: &str = "DiscreteDistribution::with_measures";
        check_probabilities(&probabilities, OP)?;
        if cell_measures.len() != probabilities.len() {
            return Err(Error::domain(OP, "one measure per cell is required"));
        }
        if let Some(m) = cell_measures.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return Err(Error::domain(OP, format!("cell measure {m} must be positive")));
        }
        let total = compensated(probabilities.iter().zip(&cell_measures).map(|(p, m)| p * m));
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::domain(OP, format!("Σ p·m = {total}")));
        }
        Ok(Self { probabilities, cell_measures: Some(cell_measures) })
    }

    /// The uniform distribution on `n` unit cells.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("DiscreteDistribution::uniform", "need at least one cell"));
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn cell_measures(&self) -> Option<&[f64]> {
        self.cell_measures.as_deref()
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn measure(&self, i: usize) -> f64 {
        self.cell_measures.as_ref().map_or(1.0, |m| m[i])
    }

    /// `p_i m_i`, the probability carried by each cell.
    pub fn masses(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.probabilities[i] * self.measure(i)).collect()
    }
}

impl PiecewiseConstant for DiscreteDistribution {
    fn cells(&self) -> Result<Vec<Cell>> {
        Ok((0..self.len()).map(|i| Cell { value: self.probabilities[i], measure: self.measure(i) }).collect())
    }
}

fn check_probabilities(p: &[f64], op: &'static str) -> Result<()> {
    if p.is_empty() {
        return Err(Error::domain(op, "need at least one cell"));
    }
    if let Some(x) = p.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::domain(op, format!("probability {x} must be finite and nonnegative")));
    }
    Ok(())
}

pub(crate) fn compensated(values: impl Iterator<Item = f64>) -> f64 {
    let mut acc = NeumaierSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// `(1/(1−α)) ln Σ p_i^α m_i` over the nonzero cells. Order one gives
/// `−Σ p_i ln p_i m_i`; order zero gives the log of the support measure.
pub fn renyi_step<T: PiecewiseConstant + ?Sized>(rho: &T, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::domain("renyi_step", format!("order {alpha} must be finite and nonnegative")));
    }
    let cells: Vec<Cell> = rho.cells()?.into_iter().filter(|c| c.value > 0.0 && c.measure > 0.0).collect();
    if alpha == 0.0 {
        return Ok(compensated(cells.iter().map(|c| c.measure)).ln());
    }
    if alpha == 1.0 {
        return Ok(-compensated(cells.iter().map(|c| c.value * c.value.ln() * c.measure)));
    }
    let terms: Vec<f64> = cells.iter().map(|c| alpha * c.value.ln() + c.measure.ln()).collect();
    Ok(log_sum_exp(&terms) / (1.0 - alpha))
}

/// `exp(R_f^{(α)} − R_g^{(β)})` for piecewise-constant inputs.
pub fn rcr_step<F, G>(f: &F, g: &G, alpha: f64, beta: f64) -> Result<f64>
where
    F: PiecewiseConstant + ?Sized,
    G: PiecewiseConstant + ?Sized,
{
    Ok((renyi_step(f, alpha)? - renyi_step(g, beta)?).exp())
}

/// Generalized Rényi complexity of one piecewise-constant density.
pub fn grc_step<T: PiecewiseConstant + ?Sized>(rho: &T, alpha: f64, beta: f64) -> Result<f64> {
    if alpha == beta {
        renyi_step(rho, alpha)?;
        return Ok(1.0);
    }
    rcr_step(rho, rho, alpha, beta)
}

pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let peak = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return peak;
    }
    peak + compensated(terms.iter().map(|t| (t - peak).exp())).ln()
}
