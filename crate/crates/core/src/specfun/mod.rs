//! Special-function kernels: gamma family, orthogonal polynomials, terminating
//! Lauricella sums and compensated summation.

pub mod gamma;
pub mod lauricella;
pub mod orthopoly;
pub mod summation;

pub use gamma::{
    binomial, factorial, gamma, ln_factorial, ln_gamma, ln_pochhammer, pochhammer, regularized_lower_gamma,
    regularized_upper_gamma, upper_incomplete_gamma,
};
pub use lauricella::{
    lauricella_a_coeff, lauricella_a_coeff_scaled, EqualArgLauricella, ScaledValue, SeriesDiagnostics,
    DEFAULT_TERM_CAP,
};
pub use orthopoly::{assoc_laguerre, assoc_legendre_abs};
pub use summation::{neumaier_sum, DoubleDouble, NeumaierSum, CANCELLATION_RATIO};
