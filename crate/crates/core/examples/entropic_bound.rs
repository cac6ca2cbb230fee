//! The upper bound on the complexity ratio from the second moment and the
//! supremum norm.

use qcr::measures::{bound_b, rcr, rcr_upper_bound, sup_norm};
use qcr::states::{rho_iso, rho_pho, PseudoharmonicParams, QuantumNumbers};

fn main() -> qcr::Result<()> {
    let params = PseudoharmonicParams::reduced_example();
    let f = rho_pho(&params, QuantumNumbers::new(1, 0, 0)?);
    let g = rho_iso(&params, QuantumNumbers::ground(), 2.5)?;
    println!("sup f = {:.6}, sup g = {:.6}", sup_norm(&f).0, sup_norm(&g).0);
    for alpha in [0.7, 1.0, 2.0, 4.0] {
        println!("B_3({alpha}) = {:.6}", bound_b(3, alpha)?);
    }
    for (a, b) in [(0.8, 0.5), (2.0, 3.0), (3.0, 1.5)] {
        let value = rcr(&f, &g, a, b)?.value;
        let bound = rcr_upper_bound(&f, &g, a, b)?;
        println!("orders ({a}, {b}): rcr {value:.6} <= bound {:.6}", bound.value);
        bound.notes.iter().for_each(|n| println!("  note: {n}"));
    }
    Ok(())
}
