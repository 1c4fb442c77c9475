//! Protocols without the `τ0` step: the 2-bit protocol and its N-party
//! generalisation, where each non-Alice party reports the sector of its
//! shifted angle modulo `π`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::three_bit::{alice_bit_table, quadrant_bits};
use super::{Bits, Message, Party, RunOutcome, Settings, Tag, Transcript};
use crate::randomness::Angle;
use crate::{Error, Result, Sign};

/// Phases shared by Alice–Bob and Alice–Charlie.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoBitShared {
    pub phi_b: Angle,
    pub phi_c: Angle,
}

pub fn run_two_bit(settings: &Settings, shared: &TwoBitShared) -> RunOutcome {
    let phi_a_tilde = settings.phi_a - shared.phi_b - shared.phi_c;
    let (tau_b, b) = quadrant_bits(settings.phi_b + shared.phi_b);
    let (tau_c, c) = quadrant_bits(settings.phi_c + shared.phi_c);
    let a = alice_bit_table(phi_a_tilde).get(tau_b, tau_c);

    let mut transcript = Transcript::new();
    transcript.push(Message::bit(Party::BOB, Party::ALICE, Tag::TauB, tau_b));
    transcript.push(Message::bit(Party::CHARLIE, Party::ALICE, Tag::TauC, tau_c));
    RunOutcome::from_bits(a, b, c, transcript)
}

/// Bits per sector report for `n` parties: `⌈log2(n - 1)⌉`.
pub fn sector_bits(n: usize) -> u8 {
    let sectors = n.saturating_sub(1).max(1);
    (usize::BITS - (sectors - 1).leading_zeros()) as u8
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NPartyOutcome {
    /// `outputs[0]` is Alice's.
    pub outputs: Vec<Sign>,
    pub transcript: Transcript,
}

impl NPartyOutcome {
    pub fn product(&self) -> Sign {
        self.outputs.iter().fold(Sign::Plus, |acc, &s| acc * s)
    }
}

/// `settings[0]` is Alice's angle; `shared[i - 1]` is the phase party `i + 1`
/// shares with her.
pub fn run_nparty(settings: &[Angle], shared: &[Angle]) -> Result<NPartyOutcome> {
    let n = settings.len();
    if n < 3 {
        return Err(Error::InvalidParameter("at least three parties are required"));
    }
    if shared.len() != n - 1 {
        return Err(Error::InvalidParameter("one shared phase per non-Alice party"));
    }
    let sectors = n - 1;
    let width = sector_bits(n);
    let alice_tilde = shared.iter().fold(settings[0], |acc, &phase| acc - phase);

    let mut outputs = Vec::with_capacity(n);
    outputs.push(Sign::Plus);
    let mut transcript = Transcript::new();
    let mut shift = 0usize;
    for (i, (&setting, &phase)) in settings[1..].iter().zip(shared).enumerate() {
        let tilde = setting + phase;
        outputs.push(Sign::of(libm::sin(tilde.radians())));
        let folded = libm::fmod(tilde.radians(), PI);
        let k = ((folded * sectors as f64 / PI) as usize).min(sectors - 1);
        shift += k;
        transcript.push(Message {
            from: Party(i as u8 + 2),
            to: Party::ALICE,
            tag: Tag::Sector,
            bits: Bits::new(k as u32, width),
        });
    }

    // sin(θ - shift·π/(n-1)): whole half-turns flip the sign, the rest is
    // evaluated directly. For n = 3 this is exactly Alice's 2-bit table.
    let theta = (-alice_tilde).radians();
    let half_turns = shift / sectors;
    let rest = (shift % sectors) as f64 * PI / sectors as f64;
    let mut alpha = Sign::of(libm::sin(theta - rest));
    if half_turns % 2 == 1 {
        alpha = -alpha;
    }
    outputs[0] = alpha;
    Ok(NPartyOutcome {
        outputs,
        transcript,
    })
}
