//! A ball and a density leaking a fraction δ of its mass into an outer shell:
//! the complexity ratio tends to 1 as δ → 0.

use qcr::densitylab::{example_pair_from_volume_ratio, extrapolate_limit, near_continuity_ladder, sup_gap};

fn main() -> qcr::Result<()> {
    let pair = example_pair_from_volume_ratio(3, 2.0, 1e-2, 1e-2)?;
    println!("sup |f1 - f2| at delta = 1e-2: {:.3e}", sup_gap(&pair.f1, &pair.f2)?);

    let deltas: Vec<f64> = (1..=12).map(|k| 10f64.powi(-k)).collect();
    for (a, b) in [(0.5, 3.0), (2.0, 1.0)] {
        let ladder = near_continuity_ladder(3, 2.0, a, b, &deltas)?;
        println!("orders ({a}, {b})");
        for p in ladder.iter().take(6) {
            println!("  delta {:>7.0e}  rcr {:.12}  |rcr - 1| {:.3e}", p.delta, p.rcr_leaky, p.gap());
        }
        let values: Vec<f64> = ladder.iter().map(|p| p.rcr_leaky).collect();
        println!("  extrapolated limit {:.12}", extrapolate_limit(&values));
    }
    Ok(())
}
