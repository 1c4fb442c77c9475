//! Party-local computations and message transcripts for the communication
//! protocols.
//!
//! Every runner is a pure function of the settings and the shared randomness.
//! Alice's output is read from a table `a[τ0][τb][τc]` of bits indexed by the
//! messages she may receive; all protocol forms read the same table, so their
//! per-run products agree exactly.

use alloc::vec::Vec;
use core::fmt;

use crate::randomness::Angle;
use crate::Sign;

mod sectors;
mod three_bit;
mod variants;

pub use sectors::{run_nparty, run_two_bit, sector_bits, NPartyOutcome, TwoBitShared};
pub use three_bit::{
    alice_bit_table, alice_branch, alice_table, bob_view, charlie_view, run_protocol1,
    run_protocol2, shared_phase, step0, AliceBits, AliceTable, BobView, CharlieView, Step0,
};
pub use variants::{run_variant, Variant};

/// A party identifier; Alice is party 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Party(pub u8);

impl Party {
    pub const ALICE: Party = Party(1);
    pub const BOB: Party = Party(2);
    pub const CHARLIE: Party = Party(3);
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Party::ALICE => f.write_str("A"),
            Party::BOB => f.write_str("B"),
            Party::CHARLIE => f.write_str("C"),
            Party(k) => write!(f, "P{k}"),
        }
    }
}

/// What a message carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    Tau0,
    TauB,
    TauC,
    TauBC,
    TauA,
    TauAlpha,
    Sector,
}

/// Up to 32 bits, most significant first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bits {
    value: u32,
    len: u8,
}

impl Bits {
    pub fn single(bit: bool) -> Bits {
        Bits {
            value: bit as u32,
            len: 1,
        }
    }

    /// The low `len` bits of `value`; `len` must be in `1..=32`.
    pub fn new(value: u32, len: u8) -> Bits {
        assert!((1..=32).contains(&len), "bit strings carry 1 to 32 bits");
        let mask = if len == 32 { u32::MAX } else { (1 << len) - 1 };
        Bits {
            value: value & mask,
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).rev().map(move |k| self.value >> k & 1 == 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Message {
    pub from: Party,
    pub to: Party,
    pub tag: Tag,
    pub bits: Bits,
}

impl Message {
    pub fn bit(from: Party, to: Party, tag: Tag, bit: bool) -> Message {
        Message {
            from,
            to,
            tag,
            bits: Bits::single(bit),
        }
    }
}

/// Ordered record of the messages of one run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript(Vec<Message>);

impl Transcript {
    pub fn new() -> Transcript {
        Transcript(Vec::new())
    }

    pub fn push(&mut self, message: Message) {
        self.0.push(message);
    }

    pub fn messages(&self) -> &[Message] {
        &self.0
    }

    pub fn total_bits(&self) -> usize {
        self.0.iter().map(|m| m.bits.len()).sum()
    }

    /// Bits sent on the directed link `from -> to`.
    pub fn bits_on(&self, from: Party, to: Party) -> usize {
        self.0
            .iter()
            .filter(|m| m.from == from && m.to == to)
            .map(|m| m.bits.len())
            .sum()
    }

    /// Directed links in order of first use, with their bit counts.
    pub fn pattern(&self) -> Vec<(Party, Party, usize)> {
        let mut out: Vec<(Party, Party, usize)> = Vec::new();
        for m in &self.0 {
            match out.last_mut() {
                Some((f, t, n)) if *f == m.from && *t == m.to => *n += m.bits.len(),
                _ => out.push((m.from, m.to, m.bits.len())),
            }
        }
        out
    }
}

/// The three settings, each reduced to `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub phi_a: Angle,
    pub phi_b: Angle,
    pub phi_c: Angle,
}

impl Settings {
    pub fn new(phi_a: f64, phi_b: f64, phi_c: f64) -> Settings {
        Settings {
            phi_a: Angle::new(phi_a),
            phi_b: Angle::new(phi_b),
            phi_c: Angle::new(phi_c),
        }
    }

    /// Settings with the given sum, Alice and Bob fixed and Charlie taking the
    /// remainder.
    pub fn with_sum(sum: f64, phi_a: f64, phi_b: f64) -> Settings {
        Settings::new(phi_a, phi_b, sum - phi_a - phi_b)
    }

    pub fn sum(&self) -> Angle {
        self.phi_a + self.phi_b + self.phi_c
    }

    /// Every setting multiplied by the odd harmonic `m`, reduced.
    pub fn harmonic(&self, m: u32) -> Settings {
        if m == 1 {
            return *self;
        }
        Settings {
            phi_a: self.phi_a.scale(m),
            phi_b: self.phi_b.scale(m),
            phi_c: self.phi_c.scale(m),
        }
    }
}

/// Outputs and transcript of one three-party run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub alpha: Sign,
    pub beta: Sign,
    pub gamma: Sign,
    pub transcript: Transcript,
}

impl RunOutcome {
    pub fn signs(&self) -> [Sign; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    pub fn product(&self) -> Sign {
        self.alpha * self.beta * self.gamma
    }

    pub(crate) fn from_bits(a: bool, b: bool, c: bool, transcript: Transcript) -> RunOutcome {
        RunOutcome {
            alpha: Sign::from_bit(a),
            beta: Sign::from_bit(b),
            gamma: Sign::from_bit(c),
            transcript,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn bit_strings() {
        let b = Bits::new(0b101, 3);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![true, false, true]);
        assert_eq!(Bits::new(0xff, 2).value(), 3);
    }

    #[test]
    fn transcript_counts() {
        let mut t = Transcript::new();
        t.push(Message::bit(Party::BOB, Party::ALICE, Tag::Tau0, true));
        t.push(Message::bit(Party::BOB, Party::ALICE, Tag::TauB, false));
        t.push(Message::bit(Party::CHARLIE, Party::ALICE, Tag::TauC, false));
        assert_eq!(t.total_bits(), 3);
        assert_eq!(t.bits_on(Party::BOB, Party::ALICE), 2);
        assert_eq!(t.bits_on(Party::ALICE, Party::BOB), 0);
        assert_eq!(
            t.pattern(),
            vec![(Party::BOB, Party::ALICE, 2), (Party::CHARLIE, Party::ALICE, 1)]
        );
    }

    #[test]
    fn harmonic_scaling_preserves_sum() {
        let s = Settings::new(0.3, 1.1, 2.9);
        let h = s.harmonic(7);
        let diff = libm::fmod((h.sum().radians() - s.sum().scale(7).radians()).abs(), core::f64::consts::TAU);
        assert!(diff < 1e-12 || (core::f64::consts::TAU - diff) < 1e-12);
    }
}
