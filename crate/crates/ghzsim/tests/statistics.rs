use std::f64::consts::PI;

use ghzsim::engine::{Engine, GridPoint, Protocol, Summary, Workload};
use ghzsim::stats::chi_square_critical;
use ghzsim_core::analytics::{chi_square_statistic, e1_closed};
use ghzsim_core::coefficients::{CoefficientTable, OddSeries, DEFAULT_TAIL_TARGET};
use ghzsim_core::detection::DetectionScheme;
use ghzsim_core::randomness::TrialRng;

fn table() -> CoefficientTable {
    CoefficientTable::certified(OddSeries::E1, DEFAULT_TAIL_TARGET).unwrap()
}

fn run(protocol: Protocol, point: GridPoint, n: u64, seed: u64, table: &CoefficientTable) -> Summary {
    let w = Workload {
        protocol,
        point,
        n_parties: 3,
        table,
        scheme: DetectionScheme::default(),
    };
    Engine::new(0).unwrap().run_workload(&w, seed, 0, n).unwrap()
}

#[test]
fn e1_at_a_quarter_turn() {
    let t = table();
    let s = run(Protocol::P1, GridPoint::Sum(PI / 4.0), 1_000_000, 11, &t);
    let est = s.tally.correlation();
    assert!((e1_closed(PI / 4.0) - 0.818_309_9).abs() < 1e-7);
    assert!((est.mean - 0.818_309_9).abs() < 4.0 * est.stderr, "{est:?}");
}

#[test]
fn e1_vanishes_at_a_right_angle() {
    let t = table();
    let est = run(Protocol::P1, GridPoint::Sum(PI / 2.0), 1_000_000, 12, &t).tally.correlation();
    assert!(est.mean.abs() < 4e-3, "{est:?}");
}

#[test]
fn cosine_at_two_thirds_turn() {
    let t = table();
    let est = run(Protocol::P2, GridPoint::Sum(2.0 * PI / 3.0), 1_000_000, 13, &t).tally.correlation();
    assert!((est.mean + 0.5).abs() < 4.0 * est.stderr + 2.0 * t.tail_epsilon(), "{est:?}");
}

#[test]
fn correlation_depends_only_on_the_sum() {
    let t = table();
    let sum = 1.3;
    let triples = [[0.0, 0.0, sum], [2.0, -1.5, sum - 0.5], [5.9, 4.4, sum - 10.3], [sum, 0.0, 0.0]];
    for protocol in [Protocol::P1, Protocol::P2, Protocol::Boxes] {
        let reference = run(protocol, GridPoint::Sum(sum), 400_000, 14, &t).tally.correlation();
        for (k, triple) in triples.iter().enumerate() {
            let est = run(protocol, GridPoint::Triple(*triple), 400_000, 15 + k as u64, &t).tally.correlation();
            let tol = 4.0 * (est.stderr.powi(2) + reference.stderr.powi(2)).sqrt();
            assert!((est.mean - reference.mean).abs() < tol, "{protocol} {triple:?}");
        }
    }
}

#[test]
fn harmonic_sampler_matches_table() {
    let t = table();
    let n = 1_000_000u64;
    let mut counts = [0u64; 6];
    for i in 0..n {
        let m = t.sample_harmonic(&mut TrialRng::new(16, 0, i));
        counts[match m {
            1 | 3 | 5 | 7 | 9 => (m as usize - 1) / 2,
            _ => 5,
        }] += 1;
    }
    let mut probs: Vec<f64> = (1..=9).step_by(2).map(|m| t.weight(m)).collect();
    probs[0] += 1.0 - t.cumulative().last().unwrap();
    probs.push(1.0 - probs.iter().sum::<f64>());
    let stat = chi_square_statistic(&counts, &probs);
    assert!(stat < chi_square_critical(5, 0.01), "{stat}");
}

#[test]
fn detection_schemes_trade_efficiency() {
    let t = table();
    for scheme in DetectionScheme::ALL {
        let w = Workload {
            protocol: Protocol::Detect,
            point: GridPoint::Sum(0.9),
            n_parties: 3,
            table: &t,
            scheme,
        };
        let s = Engine::new(0).unwrap().run_workload(&w, 17, 0, 400_000).unwrap();
        let rates = s.detection_rates();
        for (r, e) in rates.iter().zip(scheme.efficiencies()) {
            assert!((r - e).abs() < 0.004, "{scheme:?} {rates:?}");
        }
        assert!((s.triple_rate() - 0.125).abs() < 0.003, "{scheme:?}");
        let est = s.tally.correlation();
        assert!((est.mean - 0.9f64.cos()).abs() < 4.0 * est.stderr + 2.0 * t.tail_epsilon());
    }
}

#[test]
fn nparty_perfect_correlations() {
    let t = table();
    for n_parties in [4usize, 5, 7] {
        for (sum, expected) in [(0.0, 1), (PI, -1)] {
            let w = Workload {
                protocol: Protocol::Nparty,
                point: GridPoint::Sum(sum),
                n_parties,
                table: &t,
                scheme: DetectionScheme::default(),
            };
            let s = Engine::new(0).unwrap().run_workload(&w, 18, 0, 50_000).unwrap();
            assert_eq!(s.tally.abc, expected * s.tally.n as i64, "N = {n_parties}, sum {sum}");
        }
    }
}
