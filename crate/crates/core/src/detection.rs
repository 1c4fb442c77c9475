//! Detection-loophole form of the re-routed protocols.
//!
//! Every message is replaced by a shared uniform guess. A party that would
//! have sent a message detects only if its message equals the guess; a party
//! that would have received one uses the guess instead. Whenever all three
//! detect, the guesses are the true messages and the outputs coincide with
//! [`run_variant`](crate::protocols::run_variant).

use rand_core::RngCore;

use crate::protocols::{alice_table, bob_view, charlie_view, Settings, Variant};
use crate::randomness::{random_bit, SharedRandomness};
use crate::{Result, Sign};

/// Shared guess bits, one per message in the order the variant sends them:
///
/// | scheme          | `0`   | `1`   | `2`     |
/// |-----------------|-------|-------|---------|
/// | `TriplePrime`   | `τb`  | `τbc` | `τα`    |
/// | `Prime`         | `τc`  | `τ0`  | `τbc`   |
/// | `DoublePrime`   | `τc`  | `τ0`  | `τa`    |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Guesses(pub [bool; 3]);

impl Guesses {
    pub fn sample<R: RngCore + ?Sized>(rng: &mut R) -> Guesses {
        Guesses([random_bit(rng), random_bit(rng), random_bit(rng)])
    }
}

/// Which re-routed protocol seeds the construction. `TriplePrime` gives every
/// party efficiency 1/2; the others trade efficiency between parties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum DetectionScheme {
    #[default]
    TriplePrime,
    Prime,
    DoublePrime,
}

impl DetectionScheme {
    pub const ALL: [DetectionScheme; 3] = [
        DetectionScheme::TriplePrime,
        DetectionScheme::Prime,
        DetectionScheme::DoublePrime,
    ];

    pub fn variant(self) -> Variant {
        match self {
            DetectionScheme::TriplePrime => Variant::TriplePrime,
            DetectionScheme::Prime => Variant::Prime,
            DetectionScheme::DoublePrime => Variant::DoublePrime,
        }
    }

    /// Probability that each party detects, Alice first.
    pub fn efficiencies(self) -> [f64; 3] {
        match self {
            DetectionScheme::TriplePrime | DetectionScheme::DoublePrime => [0.5; 3],
            DetectionScheme::Prime => [1.0, 0.25, 0.5],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetectionOutcome {
    /// Alice, Bob, Charlie; `None` when the party did not detect.
    pub outputs: [Option<Sign>; 3],
}

impl DetectionOutcome {
    pub fn detected(&self) -> [bool; 3] {
        self.outputs.map(|o| o.is_some())
    }

    pub fn all_detected(&self) -> bool {
        self.outputs.iter().all(Option::is_some)
    }

    /// The three outputs, if every party detected.
    pub fn signs(&self) -> Option<[Sign; 3]> {
        match self.outputs {
            [Some(a), Some(b), Some(c)] => Some([a, b, c]),
            _ => None,
        }
    }
}

fn emit(detect: bool, bit: bool) -> Option<Sign> {
    detect.then(|| Sign::from_bit(bit))
}

pub fn run_detection(
    scheme: DetectionScheme,
    settings: &Settings,
    shared: &SharedRandomness,
    guesses: Guesses,
) -> Result<DetectionOutcome> {
    let bob = bob_view(settings.phi_b, shared)?;
    let charlie = charlie_view(settings.phi_c, shared.phi_c);
    let table = alice_table(settings.phi_a, shared)?;
    let [g0, g1, g2] = guesses.0;

    let outputs = match scheme {
        DetectionScheme::TriplePrime => {
            let (g_b, g_bc, g_alpha) = (g0, g1, g2);
            let tau_bc = g_b ^ charlie.tau_c;
            let tau_alpha = table.get(false, g_bc, false) ^ table.get(true, g_bc, false);
            [
                emit(tau_alpha == g_alpha, table.get(false, g_bc, false)),
                emit(bob.tau_b == g_b, bob.b ^ (bob.tau0 & g_alpha)),
                emit(tau_bc == g_bc, charlie.c ^ (g_b & charlie.tau_c)),
            ]
        }
        DetectionScheme::Prime => {
            let (g_c, g_0, g_bc) = (g0, g1, g2);
            let tau_bc = bob.tau_b ^ g_c;
            [
                emit(true, table.get(g_0, g_bc, false)),
                emit(bob.tau0 == g_0 && tau_bc == g_bc, bob.b ^ (bob.tau_b & g_c)),
                emit(charlie.tau_c == g_c, charlie.c),
            ]
        }
        DetectionScheme::DoublePrime => {
            let (g_c, g_0, g_a) = (g0, g1, g2);
            let tau_a = table.get(g_0, false, false) ^ table.get(g_0, true, false);
            let b = bob.b ^ (g_a & bob.tau_b) ^ (g_a & g_c) ^ (bob.tau_b & g_c);
            [
                emit(tau_a == g_a, table.get(g_0, false, false)),
                emit(bob.tau0 == g_0, b),
                emit(charlie.tau_c == g_c, charlie.c),
            ]
        }
    };
    Ok(DetectionOutcome { outputs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::run_variant;
    use crate::randomness::{random_angle, sample_shared, Mixing, TrialRng};

    fn random_run(seed: u64, trial: u64, scheme: DetectionScheme) -> (Settings, SharedRandomness, DetectionOutcome) {
        let mut rng = TrialRng::new(seed, 0, trial);
        let settings = Settings {
            phi_a: random_angle(&mut rng),
            phi_b: random_angle(&mut rng),
            phi_c: random_angle(&mut rng),
        };
        let shared = sample_shared(&mut rng, Mixing::Plain).shared;
        let guesses = Guesses::sample(&mut rng);
        let out = run_detection(scheme, &settings, &shared, guesses).unwrap();
        (settings, shared, out)
    }

    #[test]
    fn conditional_outputs_equal_variant() {
        for scheme in DetectionScheme::ALL {
            let mut all = 0;
            for trial in 0..50_000 {
                let (settings, shared, out) = random_run(31, trial, scheme);
                if let Some(signs) = out.signs() {
                    all += 1;
                    let reference = run_variant(scheme.variant(), &settings, &shared).unwrap();
                    assert_eq!(signs, reference.signs(), "{scheme:?}");
                }
            }
            assert!(all > 5000);
        }
    }

    #[test]
    fn rates() {
        let n = 200_000u64;
        for scheme in DetectionScheme::ALL {
            let mut counts = [0u64; 3];
            let mut triple = 0u64;
            for trial in 0..n {
                let (_, _, out) = random_run(32, trial, scheme);
                for (k, d) in out.detected().iter().enumerate() {
                    counts[k] += *d as u64;
                }
                triple += out.all_detected() as u64;
            }
            let eff = scheme.efficiencies();
            for k in 0..3 {
                let rate = counts[k] as f64 / n as f64;
                assert!((rate - eff[k]).abs() < 0.005, "{scheme:?} party {k}: {rate}");
            }
            let rate = triple as f64 / n as f64;
            assert!((rate - 0.125).abs() < 0.004, "{scheme:?} triple: {rate}");
        }
    }

    #[test]
    fn output_present_iff_detected() {
        let (_, _, out) = random_run(33, 0, DetectionScheme::TriplePrime);
        assert_eq!(out.detected(), out.outputs.map(|o| o.is_some()));
    }
}
