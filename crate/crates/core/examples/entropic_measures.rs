//! Every quadrature-based measure on one pseudoharmonic state of CO.

use qcr::measures::{disequilibrium, grc, lmc, renyi, renyi_length, second_moment, shannon, src, structural_entropy, tsallis};
use qcr::molecules::{builtin_table, find};
use qcr::states::{rho_pho, QuantumNumbers};

fn main() -> qcr::Result<()> {
    let table = builtin_table();
    let params = find(&table, "CO")?.to_params()?;
    let rho = rho_pho(&params, QuantumNumbers::new(1, 1, 1)?);

    let show = |name: &str, v: qcr::measures::MeasureValue| println!("{name:<22} {:>22.15e}  ± {:.1e}", v.value, v.abs_error);
    show("shannon", shannon(&rho)?);
    for alpha in [0.5, 2.0, 3.5] {
        show(&format!("renyi {alpha}"), renyi(&rho, alpha)?);
        show(&format!("tsallis {alpha}"), tsallis(&rho, alpha)?);
        show(&format!("renyi length {alpha}"), renyi_length(&rho, alpha)?);
    }
    show("disequilibrium", disequilibrium(&rho)?);
    show("second moment", second_moment(&rho)?);
    show("lmc", lmc(&rho)?);
    show("src 2.5", src(&rho, 2.5)?);
    show("grc (2.25, 3.5)", grc(&rho, 2.25, 3.5)?);
    show("structural entropy", structural_entropy(&rho)?);
    Ok(())
}
