//! Closed-form Rényi entropies of integer order against quadrature.

use qcr::closedform::{renyi_iso_closed, renyi_pho_closed, TruncationPolicy};
use qcr::measures::renyi;
use qcr::states::{rho_iso, rho_pho, PseudoharmonicParams, QuantumNumbers};

fn main() -> qcr::Result<()> {
    let params = PseudoharmonicParams::reduced_example();
    let policy = TruncationPolicy::default();
    println!("state    system  alpha  closed              quadrature          rel diff");
    for (n, l, m) in [(0, 0, 0), (1, 1, 0), (2, 2, -1)] {
        let qn = QuantumNumbers::new(n, l, m)?;
        for alpha in [2, 3] {
            let closed = renyi_pho_closed(&params, qn, alpha)?;
            let quad = renyi(&rho_pho(&params, qn), alpha as f64)?;
            println!("{qn:8} pho     {alpha}      {:<19.15} {:<19.15} {:.1e}", closed.value, quad.value, rel(closed.value, quad.value));

            let closed = renyi_iso_closed(&params, qn, 2.5, alpha, &policy)?;
            let quad = renyi(&rho_iso(&params, qn, 2.5)?, alpha as f64)?;
            println!("{qn:8} iso     {alpha}      {:<19.15} {:<19.15} {:.1e}", closed.value, quad.value, rel(closed.value, quad.value));
            if let Some(d) = closed.diagnostics {
                println!("         series terms {}, last term {:.1e}", d.terms_used, d.last_term_magnitude);
            }
        }
    }
    Ok(())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
