//! Radial step densities: exact construction, rescaling, disjoint copies and
//! the scaling laws of the complexity ratio.

use qcr::densitylab::{disjoint_copies, grc_step, rcr_step, renyi_step, transform, StepDensity};

fn main() -> qcr::Result<()> {
    // Pairs are (R³, level × unit-ball volume): half the mass inside r = 1,
    // half in the shell out to r = 2^(1/3).
    let f = StepDensity::from_scaled_f64(3, &[(1.0, 0.5), (2.0, 0.5)])?;
    let g = StepDensity::uniform_ball(3, 1.5)?;
    println!("f: mass {} exact {} sup {:.6}", f.mass(), f.is_exact(), f.sup());
    for alpha in [0.0, 0.5, 1.0, 2.0, 10.0] {
        println!("R_{alpha:<4} f = {:>10.6}  g = {:>10.6}", renyi_step(&f, alpha)?, renyi_step(&g, alpha)?);
    }
    let (a, b) = (2.0, 3.0);
    let base = rcr_step(&f, &g, a, b)?;
    println!("rcr(f, g; {a}, {b}) = {base:.12}, grc(f) = {:.12}", grc_step(&f, a, b)?);

    let fs = transform(&f, 2.0, &[0.5, 0.0, -1.0])?;
    let gs = transform(&g, 0.5, &[0.0, 0.0, 0.0])?;
    println!("rescaled: {:.12}  expected (0.5/2)^3 x base = {:.12}", rcr_step(&fs, &gs, a, b)?, 0.25f64.powi(3) * base);

    let fc = disjoint_copies(&f, 4)?;
    let gc = disjoint_copies(&g, 2)?;
    println!("copies:   {:.12}  expected (2/4)^(1/2) x base = {:.12}", rcr_step(&fc, &gc, a, b)?, 0.5f64.sqrt() * base);
    Ok(())
}
