//! Majorization orders entropies and bounds complexity ratios.

use qcr::densitylab::{majorizes, random_majorized_pair, rcr_step, renyi_step};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() -> qcr::Result<()> {
    let mut rng = StdRng::seed_from_u64(7);
    let (f, g) = random_majorized_pair(&mut rng, 6)?;
    println!("f = {:.4?}", f.probabilities());
    println!("g = {:.4?}", g.probabilities());
    println!("f majorizes g: {}, g majorizes f: {}", majorizes(&f, &g)?, majorizes(&g, &f)?);
    for alpha in [0.5, 1.0, 2.0, 5.0] {
        println!("order {alpha}: R_f = {:.6} <= R_g = {:.6}", renyi_step(&f, alpha)?, renyi_step(&g, alpha)?);
    }
    for (a, b) in [(3.0, 1.0), (2.0, 2.0), (1.0, 3.0)] {
        println!("orders ({a}, {b}): rcr(f, g) = {:.6}, rcr(g, f) = {:.6}", rcr_step(&f, &g, a, b)?, rcr_step(&g, &f, a, b)?);
    }
    Ok(())
}
