//! Re-routed forms of the 3-bit protocol. Alice only needs `τb ⊕ τc`; the
//! `τb·τc` correction and the `τ0` dependence can be moved to other parties.

use super::three_bit::{alice_branch, alice_table, bob_view, charlie_view};
use super::{Message, Party, RunOutcome, Settings, Tag, Transcript};
use crate::randomness::SharedRandomness;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `C -τc-> B -(τ0, τbc)-> A`.
    Prime,
    /// `C -τc-> B`, `B -τ0-> A -τa-> B`.
    DoublePrime,
    /// `B -τb-> C -τbc-> A -τα-> B`.
    TriplePrime,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Prime, Variant::DoublePrime, Variant::TriplePrime];
}

pub fn run_variant(variant: Variant, settings: &Settings, shared: &SharedRandomness) -> Result<RunOutcome> {
    let bob = bob_view(settings.phi_b, shared)?;
    let charlie = charlie_view(settings.phi_c, shared.phi_c);
    let (tau0, tau_b, tau_c) = (bob.tau0, bob.tau_b, charlie.tau_c);
    let tau_bc = tau_b ^ tau_c;
    let mut transcript = Transcript::new();

    let (a, b, c) = match variant {
        Variant::Prime => {
            let alice = alice_branch(settings.phi_a, shared, tau0)?;
            transcript.push(Message::bit(Party::CHARLIE, Party::BOB, Tag::TauC, tau_c));
            transcript.push(Message::bit(Party::BOB, Party::ALICE, Tag::Tau0, tau0));
            transcript.push(Message::bit(Party::BOB, Party::ALICE, Tag::TauBC, tau_bc));
            (
                alice.get(tau_bc, false),
                bob.b ^ (tau_b & tau_c),
                charlie.c,
            )
        }
        Variant::DoublePrime => {
            let alice = alice_branch(settings.phi_a, shared, tau0)?;
            let tau_a = alice.get(false, false) ^ alice.get(true, false);
            transcript.push(Message::bit(Party::CHARLIE, Party::BOB, Tag::TauC, tau_c));
            transcript.push(Message::bit(Party::BOB, Party::ALICE, Tag::Tau0, tau0));
            transcript.push(Message::bit(Party::ALICE, Party::BOB, Tag::TauA, tau_a));
            (
                alice.get(false, false),
                bob.b ^ (tau_a & tau_b) ^ (tau_a & tau_c) ^ (tau_b & tau_c),
                charlie.c,
            )
        }
        Variant::TriplePrime => {
            let table = alice_table(settings.phi_a, shared)?;
            let tau_alpha = table.get(false, tau_bc, false) ^ table.get(true, tau_bc, false);
            transcript.push(Message::bit(Party::BOB, Party::CHARLIE, Tag::TauB, tau_b));
            transcript.push(Message::bit(Party::CHARLIE, Party::ALICE, Tag::TauBC, tau_bc));
            transcript.push(Message::bit(Party::ALICE, Party::BOB, Tag::TauAlpha, tau_alpha));
            (
                table.get(false, tau_bc, false),
                bob.b ^ (tau0 & tau_alpha),
                charlie.c ^ (tau_b & tau_c),
            )
        }
    };
    Ok(RunOutcome::from_bits(a, b, c, transcript))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::run_protocol1;
    use crate::randomness::{random_angle, sample_shared, Mixing, TrialRng};
    use alloc::vec;

    #[test]
    fn products_match_original_run_by_run() {
        for trial in 0..100_000 {
            let mut rng = TrialRng::new(21, 0, trial);
            let settings = Settings {
                phi_a: random_angle(&mut rng),
                phi_b: random_angle(&mut rng),
                phi_c: random_angle(&mut rng),
            };
            let shared = sample_shared(&mut rng, Mixing::Plain).shared;
            let base = run_protocol1(&settings, &shared).unwrap().product();
            for v in Variant::ALL {
                assert_eq!(run_variant(v, &settings, &shared).unwrap().product(), base);
            }
        }
    }

    #[test]
    fn transcript_patterns() {
        let settings = Settings::new(0.1, 0.2, 0.3);
        let shared = sample_shared(&mut TrialRng::new(1, 1, 1), Mixing::Plain).shared;
        let (a, b, c) = (Party::ALICE, Party::BOB, Party::CHARLIE);
        let expect = [
            (Variant::Prime, vec![(c, b, 1), (b, a, 2)]),
            (Variant::DoublePrime, vec![(c, b, 1), (b, a, 1), (a, b, 1)]),
            (Variant::TriplePrime, vec![(b, c, 1), (c, a, 1), (a, b, 1)]),
        ];
        for (v, pattern) in expect {
            let out = run_variant(v, &settings, &shared).unwrap();
            assert_eq!(out.transcript.pattern(), pattern, "{v:?}");
            assert_eq!(out.transcript.total_bits(), 3);
        }
    }
}
