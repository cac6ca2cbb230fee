//! A λ sweep of the isospectral Rényi entropy for two molecules, written as
//! CSV and SVG to the system temp directory.

use qcr::cli::svg::{Line, Plot};
use qcr::cli::sweep::evaluate_grid;
use qcr::cli::{MeasureKind, Request, SweepParam, SweepScale, SweepSpec, System, SWEEP_HEADER};
use qcr::molecules::{builtin_table, find};
use qcr::states::QuantumNumbers;

fn main() -> qcr::Result<()> {
    let table = builtin_table();
    let spec = SweepSpec::new(SweepParam::Lambda, 1.5, 200.0, 25, SweepScale::Log)?;
    let mut csv = format!("{SWEEP_HEADER}\n");
    let mut lines = Vec::new();
    for name in ["CO", "H2"] {
        let params = find(&table, name)?.to_params()?;
        let mut base = Request::new(MeasureKind::Renyi, System::Iso, params, QuantumNumbers::ground()).with_orders(Some(2.5), None);
        base.tag = Some(name.to_string());
        let rows = evaluate_grid(&base, &spec, true)?;
        rows.iter().for_each(|r| {
            csv.push_str(&r.to_csv());
            csv.push('\n');
        });
        lines.push(Line { label: name.into(), points: rows.iter().map(|r| (r.param_value, r.value.value)).collect() });
    }
    let plot = Plot { title: "Renyi entropy of order 2.5, ground state".into(), x_label: "lambda".into(), y_label: "R".into(), lines };
    let dir = std::env::temp_dir();
    std::fs::write(dir.join("qcr_sweep.csv"), &csv)?;
    std::fs::write(dir.join("qcr_sweep.svg"), plot.render())?;
    print!("{}", csv.lines().take(6).collect::<Vec<_>>().join("\n"));
    println!("\nwrote {}", dir.join("qcr_sweep.{csv,svg}").display());
    Ok(())
}
