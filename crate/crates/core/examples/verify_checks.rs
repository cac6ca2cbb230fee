//! Two of the invariant checks behind `qcr verify`, run directly.

use qcr::cli::verify::{angular_moments, majorization_battery, SUMMARY_HEADER};

fn main() {
    println!("{SUMMARY_HEADER}");
    for check in [angular_moments(), majorization_battery(11, 100)] {
        println!("{}", check.summary_line());
        check.failures.iter().for_each(|f| println!("  {f}"));
    }
}
