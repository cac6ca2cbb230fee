//! The isospectral family approaches the pseudoharmonic state as |λ| grows.

use qcr::closedform::{grc_closed, renyi_pho_closed, TruncationPolicy};
use qcr::measures::renyi;
use qcr::states::{rho_iso, PseudoharmonicParams, QuantumNumbers};

fn main() -> qcr::Result<()> {
    let params = PseudoharmonicParams::reduced_example();
    let qn = QuantumNumbers::ground();
    let policy = TruncationPolicy::default();
    let limit = renyi_pho_closed(&params, qn, 2)?.value;
    let grc_limit = grc_closed(&params, qn, 2, 3, None, &policy)?.value;
    println!("pho: R2 = {limit:.12}, grc(2, 3) = {grc_limit:.12}");
    println!("{:>10} {:>16} {:>16} {:>16}", "lambda", "R2 iso", "R2 - R2 pho", "grc(2, 3) iso");
    for lambda in [-1000.0, -10.0, -3.0, 1.5, 2.5, 10.0, 100.0, 1000.0] {
        let r2 = renyi(&rho_iso(&params, qn, lambda)?, 2.0)?.value;
        let g = grc_closed(&params, qn, 2, 3, Some(lambda), &policy)?.value;
        println!("{lambda:>10} {r2:>16.12} {:>16.3e} {g:>16.12}", r2 - limit);
    }
    match rho_iso(&params, qn, 0.5) {
        Err(e) => println!("lambda = 0.5: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
