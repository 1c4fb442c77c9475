use core::f64::consts::PI;

use ghzsim_core::analytics::{estimate_range, e1_closed};
use ghzsim_core::boxes::run_box_protocol;
use ghzsim_core::coefficients::{CoefficientTable, OddSeries, DEFAULT_TAIL_TARGET};
use ghzsim_core::detection::{run_detection, DetectionScheme, Guesses};
use ghzsim_core::protocols::{run_protocol1, run_protocol2, run_variant, Settings, Variant};
use ghzsim_core::randomness::{random_angle, sample_shared, Angle, Mixing};
use ghzsim_core::Sign;

#[test]
fn serial_estimate_tracks_e1() {
    let settings = Settings::with_sum(1.0, 0.4, 2.2);
    let tally = estimate_range(3, 0, 0..200_000, |rng| {
        let draw = sample_shared(rng, Mixing::Plain);
        let out = run_protocol1(&settings, &draw.shared)?;
        Ok(out.signs().into())
    })
    .unwrap();
    let est = tally.correlation();
    assert!((est.mean - e1_closed(1.0)).abs() < 4.0 * est.stderr);
}

#[test]
fn all_forms_share_one_answer() {
    let table = CoefficientTable::certified(OddSeries::E1, DEFAULT_TAIL_TARGET).unwrap();
    let tally = estimate_range(4, 0, 0..20_000, |rng| {
        let settings = Settings {
            phi_a: random_angle(rng),
            phi_b: random_angle(rng),
            phi_c: random_angle(rng),
        };
        let shared = sample_shared(rng, Mixing::Mixture(&table)).shared;
        let harmonic = settings.harmonic(shared.m);
        let p2 = run_protocol2(&settings, &shared)?;
        for v in Variant::ALL {
            assert_eq!(run_variant(v, &harmonic, &shared)?.product(), p2.product());
        }
        assert_eq!(run_box_protocol(&harmonic, &shared, rng)?.outcome.product(), p2.product());
        let guesses = Guesses::sample(rng);
        let det = run_detection(DetectionScheme::TriplePrime, &harmonic, &shared, guesses)?;
        if let Some(signs) = det.signs() {
            assert_eq!(signs[0] * signs[1] * signs[2], p2.product());
        }
        Ok(p2.signs().into())
    })
    .unwrap();
    assert_eq!(tally.n, 20_000);
}

#[test]
fn perfect_correlations_survive_the_mixture() {
    let table = CoefficientTable::certified(OddSeries::E1, DEFAULT_TAIL_TARGET).unwrap();
    for (sum, expected) in [(0.0, Sign::Plus), (PI, Sign::Minus)] {
        let settings = Settings {
            phi_a: Angle::new(0.7),
            phi_b: Angle::new(2.9),
            phi_c: Angle::new(sum - 3.6),
        };
        let tally = estimate_range(5, 0, 0..20_000, |rng| {
            let shared = sample_shared(rng, Mixing::Mixture(&table)).shared;
            Ok(run_protocol2(&settings, &shared)?.signs().into())
        })
        .unwrap();
        assert_eq!(tally.abc, expected.value() * tally.n as i64);
    }
}
