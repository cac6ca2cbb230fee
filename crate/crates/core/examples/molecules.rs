//! The built-in diatomic table, its energy spacings, and a user table in the
//! format read from `QCR_MOLECULES`.

use qcr::molecules::{builtin_table, parse_molecules, write_molecules, PRINTED_SPACINGS};
use qcr::states::{derive, energy_spacing};

fn main() -> qcr::Result<()> {
    let table = builtin_table();
    println!("{:<5} {:>10} {:>10} {:>10} {:>12} {:>10}", "name", "De (eV)", "re (A)", "mu (amu)", "spacing eV", "L");
    for rec in &table {
        let p = rec.to_params()?;
        println!(
            "{:<5} {:>10.6} {:>10.6} {:>10.6} {:>12.6} {:>10.4}",
            rec.name,
            rec.de_ev(),
            rec.re_angstrom,
            rec.mu_amu,
            energy_spacing(&p),
            derive(&p, 0).l_eff
        );
    }
    println!("published spacings: {PRINTED_SPACINGS:?}");

    let mut text = write_molecules(&table[..1]);
    text.push_str("XY,1.5,eV,1.2,7.5,made up\n");
    let custom = parse_molecules(&text)?;
    println!("custom table:\n{}", write_molecules(&custom));
    match parse_molecules("name,De,De_unit,re_angstrom,mu_amu,source\nBad,-1,eV,1,1,x\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
