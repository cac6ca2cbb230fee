use crate::error::{Error, Result};

/// Generalized Laguerre polynomial `L_n^{(k)}(x)` by the three-term recurrence
/// `(j+1) L_{j+1} = (2j + k + 1 − x) L_j − (j + k) L_{j−1}`.
pub fn assoc_laguerre(n: u32, k: f64, x: f64) -> Result<f64> {
    if !(k > -1.0) {
        return Err(Error::domain("assoc_laguerre", format!("k = {k} must exceed -1")));
    }
    Ok(laguerre_unchecked(n, k, x))
}

pub(crate) fn laguerre_unchecked(n: u32, k: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + k - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + k + 1.0 - x) * cur - (jf + k) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `|P_ℓ^{|m|}(x)|`, the magnitude of the associated Legendre function.
///
/// Only magnitudes are exposed: densities consume `|Y_ℓm|²`, so the phase
/// convention never matters.
pub fn assoc_legendre_abs(l: u32, m: i32, x: f64) -> Result<f64> {
    let am = m.unsigned_abs();
    if am > l {
        return Err(Error::domain("assoc_legendre_abs", format!("|m| = {am} exceeds l = {l}")));
    }
    if !(x.abs() <= 1.0) {
        return Err(Error::domain("assoc_legendre_abs", format!("x = {x} outside [-1, 1]")));
    }
    Ok(legendre_unchecked(l, am, x).abs())
}

pub(crate) fn legendre_unchecked(l: u32, m: u32, x: f64) -> f64 {
    // P_m^m = (2m − 1)!! (1 − x²)^{m/2}, sign dropped.
    let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= fact * somx2;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        pll = (x * (2 * ll - 1) as f64 * pmmp1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn laguerre_low_degrees() {
        assert_eq!(assoc_laguerre(0, 3.7, 12.0).unwrap(), 1.0);
        assert_relative_eq!(assoc_laguerre(1, 0.25, 2.0).unwrap(), 1.0 + 0.25 - 2.0);
        // L_2^{1/2}(x) = x²/2 − (5/2) x + 15/8
        assert_relative_eq!(assoc_laguerre(2, 0.5, 1.0).unwrap(), -0.125, max_relative = 1e-15);
    }

    #[test]
    fn laguerre_rejects_bad_parameter() {
        assert!(assoc_laguerre(2, -1.0, 0.3).is_err());
    }

    #[test]
    fn legendre_explicit_forms() {
        assert_eq!(assoc_legendre_abs(0, 0, 0.7).unwrap(), 1.0);
        assert_relative_eq!(assoc_legendre_abs(1, 0, 0.3).unwrap(), 0.3);
        assert_relative_eq!(
            assoc_legendre_abs(2, 1, 0.5).unwrap(),
            3.0 * 0.5 * 0.75f64.sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(assoc_legendre_abs(2, -1, 0.5).unwrap(), 1.299_038_105_676_658, max_relative = 1e-14);
        // P_3^2 = 15 x (1 − x²)
        assert_relative_eq!(assoc_legendre_abs(3, 2, 0.4).unwrap(), 15.0 * 0.4 * 0.84, max_relative = 1e-14);
    }

    #[test]
    fn legendre_domain_errors() {
        assert!(assoc_legendre_abs(1, 2, 0.0).is_err());
        assert!(assoc_legendre_abs(2, 0, 1.5).is_err());
    }

    proptest! {
        #[test]
        fn laguerre_satisfies_recurrence(n in 1u32..25, k in -0.9f64..30.0, x in 0.0f64..60.0) {
            let lm = assoc_laguerre(n - 1, k, x).unwrap();
            let l0 = assoc_laguerre(n, k, x).unwrap();
            let lp = assoc_laguerre(n + 1, k, x).unwrap();
            let nf = n as f64;
            let lhs = (nf + 1.0) * lp;
            let rhs = (2.0 * nf + k + 1.0 - x) * l0 - (nf + k) * lm;
            let scale = lhs.abs().max(((2.0 * nf + k + 1.0 - x) * l0).abs()).max(1e-300);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * scale);
        }
    }
}
