//! Stationarity of the log complexity ratio of two discrete distributions
//! on a shared partition.
//!
//! With `S_f = Σ p_i^α m_i` and `S_g = Σ q_i^β m_i`, the log ratio is
//! `ln S_f/(1−α) − ln S_g/(1−β)`. Three conditions are checked cell by cell:
//!
//! * stationarity in the probabilities under `Σ p_i m_i = 1`: the gradient
//!   `α p_i^{α−1}/((1−α) S_f)` (and its `q` counterpart) is the same in every cell;
//! * stationarity in the cell measures: `p_i^α / q_i^β = (1−α) S_f / ((1−β) S_g)`;
//! * the second-order conditions `p_i^α m_i = ((α−1)/α) S_f` and
//!   `q_i^β m_i = ((β−1)/β) S_g`.

use super::{compensated, DiscreteDistribution};
use crate::error::{Error, Result};

/// Largest absolute violation of each condition; `None` where a condition is
/// undefined at the given orders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalityResidual {
    pub stationarity: f64,
    /// Undefined when `β = 1`.
    pub measure_variation: Option<f64>,
    /// Undefined when `α = 0` or `β = 0`.
    pub second_variation: Option<f64>,
}

/// Spread of the gradient of `sign · ln S/(1−a)` over the cells.
fn gradient_spread(values: &[f64], order: f64, sum: f64) -> f64 {
    if order == 0.0 {
        return 0.0;
    }
    let grad: Vec<f64> = if order == 1.0 {
        values.iter().map(|v| -(v.ln() + 1.0)).collect()
    } else {
        values.iter().map(|v| order * v.powf(order - 1.0) / ((1.0 - order) * sum)).collect()
    };
    let hi = grad.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = grad.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}

pub fn extremality_residual(
    f: &DiscreteDistribution,
    g: &DiscreteDistribution,
    alpha: f64,
    beta: f64,
) -> Result<ExtremalityResidual> {
    const OP: &str = "extremality_residual";
    for order in [alpha, beta] {
        if !(order >= 0.0 && order.is_finite()) {
            return Err(Error::domain(OP, format!("order {order} must be finite and nonnegative")));
        }
    }
    if f.len() != g.len() || (0..f.len()).any(|i| f.measure(i) != g.measure(i)) {
        return Err(Error::domain(OP, "distributions must share one partition"));
    }
    let (p, q) = (f.probabilities(), g.probabilities());
    if p.iter().chain(q).any(|x| *x <= 0.0) {
        return Err(Error::domain(OP, "every cell must carry positive probability"));
    }
    let m: Vec<f64> = (0..f.len()).map(|i| f.measure(i)).collect();
    let s_f = compensated(p.iter().zip(&m).map(|(x, w)| x.powf(alpha) * w));
    let s_g = compensated(q.iter().zip(&m).map(|(x, w)| x.powf(beta) * w));

    let stationarity = gradient_spread(p, alpha, s_f).max(gradient_spread(q, beta, s_g));

    let measure_variation = (beta != 1.0).then(|| {
        let target = (1.0 - alpha) * s_f / ((1.0 - beta) * s_g);
        p.iter().zip(q).map(|(a, b)| (a.powf(alpha) / b.powf(beta) - target).abs()).fold(0.0, f64::max)
    });

    let second_variation = (alpha != 0.0 && beta != 0.0).then(|| {
        let tf = (alpha - 1.0) / alpha * s_f;
        let tg = (beta - 1.0) / beta * s_g;
        (0..p.len())
            .map(|i| (p[i].powf(alpha) * m[i] - tf).abs().max((q[i].powf(beta) * m[i] - tg).abs()))
            .fold(0.0, f64::max)
    });

    Ok(ExtremalityResidual { stationarity, measure_variation, second_variation })
}
