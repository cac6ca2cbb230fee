use super::{check_order, MomentParts, MuIndices};
use crate::closedform::angular::AngularBlocks;
use crate::error::Result;
use crate::measures::MeasureValue;
use crate::specfun::gamma::ln_gamma_unchecked;
use crate::specfun::{ln_factorial, EqualArgLauricella, SeriesDiagnostics, DEFAULT_TERM_CAP};
use crate::states::{derive, PseudoharmonicParams, QuantumNumbers};

/// Factors of `∫ ρ^α dV` for a pseudoharmonic state.
///
/// `(n!)^α 2^{α−1} a^{3(α−1)/2} / Γ(n+L+3/2)^α · A_0(αL+1/2, 0, {n}, {L+1/2}, {1/α}) / α^{αL+3/2}`
/// times the angular moment. The `A_0` argument list has `2α` identical slots.
pub fn moment_parts_pho(
    params: &PseudoharmonicParams,
    qn: QuantumNumbers,
    alpha: u32,
    term_cap: u128,
) -> Result<MomentParts> {
    check_order(alpha, "renyi_pho_closed")?;
    let d = derive(params, qn.l);
    let af = alpha as f64;
    let slots = 2 * alpha as usize;
    let mu1 = MuIndices::new(d.l_eff, alpha, 0, 0, 0).mu1;
    let kernel = EqualArgLauricella::new(&vec![qn.n; slots], &vec![d.laguerre_k(); slots], term_cap)?;
    let a0 = kernel.a0(mu1, 1.0 / af)?;
    Ok(MomentParts {
        alpha,
        angular: AngularBlocks::new(qn.l, qn.m, alpha, term_cap)?,
        ln_scale: (af - 1.0) * (2f64.ln() + 1.5 * d.a.ln()),
        ln_norm: af * (ln_factorial(qn.n) - ln_gamma_unchecked(qn.n as f64 + d.shape())),
        ln_series: a0.ln_abs - (mu1 + 1.0) * af.ln(),
        mu1,
        ln_err: 0.0,
        diagnostics: a0.diagnostics,
    })
}

/// `ln ∫ ρ^α dV` for a pseudoharmonic state, with diagnostics.
pub fn ln_moment_pho(
    params: &PseudoharmonicParams,
    qn: QuantumNumbers,
    alpha: u32,
    term_cap: u128,
) -> Result<(f64, SeriesDiagnostics)> {
    let parts = moment_parts_pho(params, qn, alpha, term_cap)?;
    Ok((parts.ln_moment(), parts.diagnostics))
}

/// Closed-form Rényi entropy of order `alpha` of a pseudoharmonic state.
pub fn renyi_pho_closed(params: &PseudoharmonicParams, qn: QuantumNumbers, alpha: u32) -> Result<MeasureValue> {
    Ok(moment_parts_pho(params, qn, alpha, DEFAULT_TERM_CAP)?.renyi())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::renyi;
    use crate::states::rho_pho;
    use approx::assert_relative_eq;

    #[test]
    fn matches_quadrature_reduced_units() {
        let p = PseudoharmonicParams::reduced_example();
        for (n, l, m) in [(0, 0, 0), (0, 1, 1), (1, 1, 1), (2, 0, 0), (1, 2, -1), (3, 1, 0)] {
            let qn = QuantumNumbers::new(n, l, m).unwrap();
            let rho = rho_pho(&p, qn);
            for alpha in 2..=3u32 {
                let closed = renyi_pho_closed(&p, qn, alpha).unwrap().value;
                let quad = renyi(&rho, alpha as f64).unwrap().value;
                assert_relative_eq!(closed, quad, epsilon = 1e-9, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn ground_state_gamma_integral() {
        // R_2 of the isotropic ground state: −ln[(4π)^{−1} 2a^{3/2} Γ(2L+3/2) / (Γ(L+3/2)² 2^{2L+3/2})].
        let p = PseudoharmonicParams::reduced_example();
        let v = renyi_pho_closed(&p, QuantumNumbers::ground(), 2).unwrap().value;
        let d = derive(&p, 0);
        let ln_i = (1.0 / (4.0 * std::f64::consts::PI)).ln() + 2f64.ln() + 1.5 * d.a.ln()
            - 2.0 * ln_gamma_unchecked(d.shape())
            + ln_gamma_unchecked(2.0 * d.l_eff + 1.5)
            - (2.0 * d.l_eff + 1.5) * 2f64.ln();
        assert_relative_eq!(v, -ln_i, max_relative = 1e-13);
        // mpmath, direct radial integral at 30 digits.
        assert_relative_eq!(v, 1.081_538_167_566_140_9, max_relative = 1e-12);
    }

    #[test]
    fn nonincreasing_in_order() {
        let p = PseudoharmonicParams::reduced_example();
        for qn in [QuantumNumbers::ground(), QuantumNumbers::new(2, 1, 0).unwrap()] {
            let r: Vec<f64> = (2..=4).map(|a| renyi_pho_closed(&p, qn, a).unwrap().value).collect();
            assert!(r[0] >= r[1] && r[1] >= r[2], "{r:?}");
        }
    }

    #[test]
    fn order_one_rejected() {
        let p = PseudoharmonicParams::reduced_example();
        assert!(renyi_pho_closed(&p, QuantumNumbers::ground(), 1).is_err());
    }
}
