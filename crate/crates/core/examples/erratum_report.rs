//! Alternative readings of the printed isospectral formulas, each compared
//! with direct quadrature.

use qcr::closedform::{erratum_report, TruncationPolicy};
use qcr::states::PseudoharmonicParams;

fn main() -> qcr::Result<()> {
    let params = PseudoharmonicParams::reduced_example();
    for line in erratum_report(&params, 2.5, &TruncationPolicy::default())? {
        println!("{line}");
    }
    Ok(())
}
