//! PR boxes and the communication-free form of the 3-bit protocol.
//!
//! With `X1 = a000 ⊕ a100`, `X2 = a000 ⊕ a010` and
//! `X3 = a000 ⊕ a010 ⊕ a100 ⊕ a110` taken from Alice's table,
//!
//! ```text
//! a[τ0][τb][τc] ⊕ b ⊕ c = a000 ⊕ b ⊕ c ⊕ τ0·X1 ⊕ τb·X2 ⊕ τ0τb·X3
//!                         ⊕ τb·τc ⊕ τc·X2 ⊕ τ0τc·X3
//! ```
//!
//! Each product between two parties is produced by one PR box and the
//! three-party term by a GHZ box made of three more, eight boxes in all.

use rand_core::RngCore;

use crate::protocols::{alice_table, bob_view, charlie_view, Party, RunOutcome, Settings, Transcript};
use crate::randomness::{random_bit, SharedRandomness};
use crate::Result;

/// Outputs `(a, b)` with `a` uniform and `a ⊕ b = x·y`.
pub fn pr_box<R: RngCore + ?Sized>(x: bool, y: bool, rng: &mut R) -> (bool, bool) {
    let a = random_bit(rng);
    (a, a ^ (x & y))
}

/// One PR box between two parties, with its use count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrBox {
    pub endpoints: (Party, Party),
    uses: u32,
}

impl PrBox {
    pub fn new(first: Party, second: Party) -> PrBox {
        PrBox {
            endpoints: (first, second),
            uses: 0,
        }
    }

    /// `x` is the first endpoint's input, `y` the second's.
    pub fn evaluate<R: RngCore + ?Sized>(&mut self, x: bool, y: bool, rng: &mut R) -> (bool, bool) {
        self.uses += 1;
        pr_box(x, y, rng)
    }

    pub fn uses(&self) -> u32 {
        self.uses
    }
}

/// Tripartite box with `a ⊕ b ⊕ c = x·y·z`, wired from three PR boxes:
/// `PR(x, y) -> (p, q)`, `PR(p, z) -> (r, s)`, `PR(q, z) -> (t, u)`, then
/// `a = r`, `b = t`, `c = s ⊕ u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GhzBox {
    pub parts: [PrBox; 3],
}

impl GhzBox {
    /// Inputs and outputs in the order of `parties`.
    pub fn new(parties: [Party; 3]) -> GhzBox {
        let [x, y, z] = parties;
        GhzBox {
            parts: [PrBox::new(x, y), PrBox::new(x, z), PrBox::new(y, z)],
        }
    }

    pub fn evaluate<R: RngCore + ?Sized>(
        &mut self,
        x: bool,
        y: bool,
        z: bool,
        rng: &mut R,
    ) -> (bool, bool, bool) {
        let (p, q) = self.parts[0].evaluate(x, y, rng);
        let (r, s) = self.parts[1].evaluate(p, z, rng);
        let (t, u) = self.parts[2].evaluate(q, z, rng);
        (r, t, s ^ u)
    }
}

/// Stateless convenience form of [`GhzBox`].
pub fn ghz_box<R: RngCore + ?Sized>(x: bool, y: bool, z: bool, rng: &mut R) -> (bool, bool, bool) {
    GhzBox::new([Party::ALICE, Party::BOB, Party::CHARLIE]).evaluate(x, y, z, rng)
}

/// The eight PR boxes of one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxNetwork {
    /// Alice–Bob boxes for `τ0·X1`, `τb·X2` and `(τ0τb)·X3`.
    pub ab_boxes: [PrBox; 3],
    /// Bob–Charlie box for `τb·τc`.
    pub bc_box: PrBox,
    /// Alice–Charlie box for `τc·X2`.
    pub ac_box: PrBox,
    /// Alice, Bob, Charlie box for `X3·τ0·τc`.
    pub ghz: GhzBox,
}

impl Default for BoxNetwork {
    fn default() -> Self {
        BoxNetwork::new()
    }
}

/// What Alice feeds into her boxes and XORs onto them.
#[derive(Clone, Copy, Debug)]
struct AliceInputs {
    base: bool,
    x1: bool,
    x2: bool,
    x3: bool,
}

#[derive(Clone, Copy, Debug)]
struct BobInputs {
    base: bool,
    tau0: bool,
    tau_b: bool,
}

#[derive(Clone, Copy, Debug)]
struct CharlieInputs {
    base: bool,
    tau_c: bool,
}

impl BoxNetwork {
    pub fn new() -> BoxNetwork {
        let (a, b, c) = (Party::ALICE, Party::BOB, Party::CHARLIE);
        BoxNetwork {
            ab_boxes: [PrBox::new(a, b); 3],
            bc_box: PrBox::new(b, c),
            ac_box: PrBox::new(a, c),
            ghz: GhzBox::new([a, b, c]),
        }
    }

    pub fn boxes(&self) -> impl Iterator<Item = &PrBox> {
        self.ab_boxes
            .iter()
            .chain([&self.bc_box, &self.ac_box])
            .chain(self.ghz.parts.iter())
    }

    pub fn total_uses(&self) -> u32 {
        self.boxes().map(PrBox::uses).sum()
    }

    /// One run. Each party's inputs depend only on its own setting and the
    /// randomness it holds; its output only on those and its box outputs.
    pub fn run<R: RngCore + ?Sized>(
        &mut self,
        settings: &Settings,
        shared: &SharedRandomness,
        rng: &mut R,
    ) -> Result<RunOutcome> {
        let alice = {
            let t = alice_table(settings.phi_a, shared)?;
            let a000 = t.get(false, false, false);
            let a100 = t.get(true, false, false);
            let a010 = t.get(false, true, false);
            let a110 = t.get(true, true, false);
            AliceInputs {
                base: a000,
                x1: a000 ^ a100,
                x2: a000 ^ a010,
                x3: a000 ^ a010 ^ a100 ^ a110,
            }
        };
        let bob = {
            let v = bob_view(settings.phi_b, shared)?;
            BobInputs {
                base: v.b,
                tau0: v.tau0,
                tau_b: v.tau_b,
            }
        };
        let charlie = {
            let v = charlie_view(settings.phi_c, shared.phi_c);
            CharlieInputs {
                base: v.c,
                tau_c: v.tau_c,
            }
        };

        let (a1, b1) = self.ab_boxes[0].evaluate(alice.x1, bob.tau0, rng);
        let (a2, b2) = self.ab_boxes[1].evaluate(alice.x2, bob.tau_b, rng);
        let (a3, b3) = self.ab_boxes[2].evaluate(alice.x3, bob.tau0 & bob.tau_b, rng);
        let (b4, c4) = self.bc_box.evaluate(bob.tau_b, charlie.tau_c, rng);
        let (a5, c5) = self.ac_box.evaluate(alice.x2, charlie.tau_c, rng);
        let (a6, b6, c6) = self.ghz.evaluate(alice.x3, bob.tau0, charlie.tau_c, rng);

        let a = alice.base ^ a1 ^ a2 ^ a3 ^ a5 ^ a6;
        let b = bob.base ^ b1 ^ b2 ^ b3 ^ b4 ^ b6;
        let c = charlie.base ^ c4 ^ c5 ^ c6;
        Ok(RunOutcome::from_bits(a, b, c, Transcript::new()))
    }
}

/// Outcome of one box-protocol run and the network it used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxRun {
    pub outcome: RunOutcome,
    pub network: BoxNetwork,
}

pub fn run_box_protocol<R: RngCore + ?Sized>(
    settings: &Settings,
    shared: &SharedRandomness,
    rng: &mut R,
) -> Result<BoxRun> {
    let mut network = BoxNetwork::new();
    let outcome = network.run(settings, shared, rng)?;
    Ok(BoxRun { outcome, network })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::run_protocol1;
    use crate::randomness::{random_angle, sample_shared, Mixing, TrialRng};

    #[test]
    fn pr_relation() {
        let mut rng = TrialRng::new(0, 0, 0);
        for _ in 0..1000 {
            for (x, y) in [(false, false), (false, true), (true, false), (true, true)] {
                let (a, b) = pr_box(x, y, &mut rng);
                assert_eq!(a ^ b, x & y);
            }
        }
    }

    #[test]
    fn pr_marginal_is_uniform() {
        let n = 1_000_000;
        let mut rng = TrialRng::new(1, 0, 0);
        for (x, y) in [(false, false), (true, true)] {
            let ones = (0..n).filter(|_| pr_box(x, y, &mut rng).0).count();
            assert!((ones as f64 / n as f64 - 0.5).abs() < 0.002);
        }
    }

    #[test]
    fn ghz_parity_on_all_inputs() {
        let mut rng = TrialRng::new(2, 0, 0);
        for input in 0..8u8 {
            let (x, y, z) = (input & 1 == 1, input & 2 == 2, input & 4 == 4);
            for _ in 0..100_000 {
                let (a, b, c) = ghz_box(x, y, z, &mut rng);
                assert_eq!(a ^ b ^ c, x & y & z);
            }
        }
    }

    #[test]
    fn ghz_outputs_enumerated() {
        // All 8 internal coin values give each output pair exactly twice.
        for input in 0..8u8 {
            let (x, y, z) = (input & 1 == 1, input & 2 == 2, input & 4 == 4);
            let mut pairs = [[0u32; 4]; 3];
            for coins in 0..8u8 {
                let (c0, c1, c2) = (coins & 1 == 1, coins & 2 == 2, coins & 4 == 4);
                let (p, q) = (c0, c0 ^ (x & y));
                let (r, s) = (c1, c1 ^ (p & z));
                let (t, u) = (c2, c2 ^ (q & z));
                let (a, b, c) = (r, t, s ^ u);
                assert_eq!(a ^ b ^ c, x & y & z);
                pairs[0][(a as usize) << 1 | b as usize] += 1;
                pairs[1][(a as usize) << 1 | c as usize] += 1;
                pairs[2][(b as usize) << 1 | c as usize] += 1;
            }
            assert!(pairs.iter().all(|p| p.iter().all(|&k| k == 2)));
        }
    }

    #[test]
    fn parity_matches_communication_protocol() {
        for trial in 0..100_000 {
            let mut rng = TrialRng::new(3, 0, trial);
            let settings = Settings {
                phi_a: random_angle(&mut rng),
                phi_b: random_angle(&mut rng),
                phi_c: random_angle(&mut rng),
            };
            let shared = sample_shared(&mut rng, Mixing::Plain).shared;
            let run = run_box_protocol(&settings, &shared, &mut rng).unwrap();
            let reference = run_protocol1(&settings, &shared).unwrap();
            assert_eq!(run.outcome.product(), reference.product());
            assert_eq!(run.network.total_uses(), 8);
            assert!(run.network.boxes().all(|b| b.uses() == 1));
            assert_eq!(run.outcome.transcript.total_bits(), 0);
        }
    }
}
