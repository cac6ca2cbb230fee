use proptest::prelude::*;

use qcr::densitylab::{majorizes, rcr_step, renyi_step, transform, DiscreteDistribution, StepDensity};

fn shells_in(d: u32) -> impl Strategy<Value = StepDensity> {
    prop::collection::vec((0.05f64..2.0, 0.05f64..2.0), 1..5).prop_map(move |raw| {
        let mut radius = 0.0;
        let shells: Vec<(f64, f64)> = raw
            .iter()
            .map(|&(dr, w)| {
                radius += dr;
                (radius, w)
            })
            .collect();
        let ball = qcr::densitylab::unit_ball_volume(d);
        let mut prev = 0.0f64;
        let mass: f64 = shells
            .iter()
            .map(|&(r, w)| {
                let m = w * ball * (r.powi(d as i32) - prev.powi(d as i32));
                prev = r;
                m
            })
            .sum();
        let scaled: Vec<(f64, f64)> = shells.iter().map(|&(r, w)| (r, w / mass)).collect();
        StepDensity::new(d, &scaled).expect("normalized")
    })
}

fn step_density() -> impl Strategy<Value = StepDensity> {
    (1u32..=3).prop_flat_map(shells_in)
}

fn step_pair() -> impl Strategy<Value = (StepDensity, StepDensity)> {
    (1u32..=3).prop_flat_map(|d| (shells_in(d), shells_in(d)))
}

fn normalized(w: Vec<f64>) -> DiscreteDistribution {
    let total: f64 = w.iter().sum();
    DiscreteDistribution::new(w.iter().map(|x| x / total).collect()).expect("normalized")
}

fn distribution() -> impl Strategy<Value = DiscreteDistribution> {
    prop::collection::vec(0.01f64..1.0, 2..12).prop_map(normalized)
}

fn distribution_pair() -> impl Strategy<Value = (DiscreteDistribution, DiscreteDistribution)> {
    (2usize..12).prop_flat_map(|n| {
        let w = || prop::collection::vec(0.01f64..1.0, n).prop_map(normalized);
        (w(), w())
    })
}

fn order() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), 0.2f64..6.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reciprocal_ratio((f, g) in step_pair(), a in order(), b in order()) {
        let prod = rcr_step(&f, &g, a, b).unwrap() * rcr_step(&g, &f, b, a).unwrap();
        prop_assert!((prod - 1.0).abs() < 1e-10, "{prod}");
    }

    #[test]
    fn renyi_nonincreasing(f in step_density(), a in 0.1f64..5.0, da in 0.01f64..3.0) {
        prop_assert!(renyi_step(&f, a + da).unwrap() <= renyi_step(&f, a).unwrap() + 1e-12);
    }

    #[test]
    fn rescaling_multiplies_ratio((f, g) in step_pair(), s in 0.3f64..3.0, c in 0.3f64..3.0, a in order(), b in order()) {
        let d = f.dimension();
        let zero = vec![0.0; d as usize];
        let base = rcr_step(&f, &g, a, b).unwrap();
        let moved = rcr_step(&transform(&f, s, &zero).unwrap(), &transform(&g, c, &zero).unwrap(), a, b).unwrap();
        let expected = (c / s).powi(d as i32) * base;
        prop_assert!((moved / expected - 1.0).abs() < 1e-9, "{moved} vs {expected}");
    }

    #[test]
    fn majorization_orders_entropy((f, g) in distribution_pair(), a in order()) {
        if majorizes(&f, &g).unwrap() {
            prop_assert!(renyi_step(&f, a).unwrap() <= renyi_step(&g, a).unwrap() + 1e-12);
        }
    }

    #[test]
    fn uniform_is_majorized_by_everything(f in distribution()) {
        let u = DiscreteDistribution::uniform(f.len()).unwrap();
        prop_assert!(majorizes(&f, &u).unwrap());
    }
}
