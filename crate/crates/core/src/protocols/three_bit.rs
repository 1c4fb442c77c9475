//! The 3-bit protocol: 2 bits from Bob to Alice, 1 from Charlie to Alice.

use core::f64::consts::FRAC_PI_2;

use super::{Message, Party, RunOutcome, Settings, Tag, Transcript};
use crate::randomness::{azimuth, combine, Angle, SharedRandomness, UnitVec3};
use crate::{Result, Sign};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step0 {
    pub tau0: bool,
    /// The phase Bob and Alice both derive, `azimuth(λ1 ± λ2)/2 + ξπ`.
    pub phi_b: Angle,
}

/// Bob's first message and the resulting shared phase.
///
/// `b̂` is the equatorial vector with azimuth `π/2 - 2 φ_B`; `τ0` records
/// whether `λ1` and `λ2` fall on opposite sides of it.
pub fn step0(lambda1: &UnitVec3, lambda2: &UnitVec3, xi: bool, phi_b: Angle) -> Result<Step0> {
    let b_hat = UnitVec3::equatorial(FRAC_PI_2 - 2.0 * phi_b.radians());
    let sigma0 = Sign::of(b_hat.dot(lambda1)) * Sign::of(b_hat.dot(lambda2));
    let tau0 = sigma0.bit();
    Ok(Step0 {
        tau0,
        phi_b: shared_phase(lambda1, lambda2, xi, tau0)?,
    })
}

/// `azimuth(λ1 + (-1)^τ0 λ2)/2 + ξπ`, reduced.
pub fn shared_phase(lambda1: &UnitVec3, lambda2: &UnitVec3, xi: bool, tau0: bool) -> Result<Angle> {
    let phi0 = azimuth(combine(lambda1, lambda2, tau0))?;
    let shift = if xi { core::f64::consts::PI } else { 0.0 };
    Ok(Angle::new(0.5 * phi0.radians() + shift))
}

/// Alice's output bits `a[τb][τc]` for one value of `τ0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AliceBits(pub [[bool; 2]; 2]);

impl AliceBits {
    #[inline]
    pub fn get(&self, tau_b: bool, tau_c: bool) -> bool {
        self.0[tau_b as usize][tau_c as usize]
    }
}

/// Alice's output bits for both values of `τ0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AliceTable(pub [AliceBits; 2]);

impl AliceTable {
    #[inline]
    pub fn get(&self, tau0: bool, tau_b: bool, tau_c: bool) -> bool {
        self.0[tau0 as usize].get(tau_b, tau_c)
    }
}

/// Bits of `sign(sin(-φ̃_A - (τb + τc) π/2))` for the four message pairs.
///
/// Only `(0,0)` and `(0,1)` are evaluated; `(1,1)` is the complement of
/// `(0,0)` and `(1,0)` equals `(0,1)`, since shifting by `π` flips the sign.
/// Deriving them keeps both relations exact even where `sin` is zero.
pub fn alice_bit_table(phi_a_tilde: Angle) -> AliceBits {
    let theta = (-phi_a_tilde).radians();
    let a00 = Sign::of(libm::sin(theta)).bit();
    let a01 = Sign::of(libm::sin(theta - FRAC_PI_2)).bit();
    AliceBits([[a00, a01], [a01, !a00]])
}

/// Alice's bits for the `τ0` branch: `φ̃_A = φ_A - φ_b(τ0) - φ_c`.
pub fn alice_branch(phi_a: Angle, shared: &SharedRandomness, tau0: bool) -> Result<AliceBits> {
    let phi_b = shared_phase(&shared.lambda1, &shared.lambda2, shared.xi, tau0)?;
    Ok(alice_bit_table(phi_a - phi_b - shared.phi_c))
}

/// Alice's full table, assembled from both hypothetical `τ0` branches.
pub fn alice_table(phi_a: Angle, shared: &SharedRandomness) -> Result<AliceTable> {
    Ok(AliceTable([
        alice_branch(phi_a, shared, false)?,
        alice_branch(phi_a, shared, true)?,
    ]))
}

/// What Bob computes from his setting and the randomness he shares with Alice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BobView {
    pub tau0: bool,
    pub tau_b: bool,
    /// Output bit of the original protocol.
    pub b: bool,
}

pub fn bob_view(phi_b: Angle, shared: &SharedRandomness) -> Result<BobView> {
    let s0 = step0(&shared.lambda1, &shared.lambda2, shared.xi, phi_b)?;
    let (tau_b, b) = quadrant_bits(phi_b + s0.phi_b);
    Ok(BobView {
        tau0: s0.tau0,
        tau_b,
        b,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharlieView {
    pub tau_c: bool,
    pub c: bool,
}

pub fn charlie_view(phi_c: Angle, shared_phase: Angle) -> CharlieView {
    let (tau_c, c) = quadrant_bits(phi_c + shared_phase);
    CharlieView { tau_c, c }
}

/// `(bit of sign(sin 2x), bit of sign(sin x))`.
#[inline]
pub(crate) fn quadrant_bits(x: Angle) -> (bool, bool) {
    let x = x.radians();
    (
        Sign::of(libm::sin(2.0 * x)).bit(),
        Sign::of(libm::sin(x)).bit(),
    )
}

/// One run of the 3-bit protocol on the settings as given.
pub fn run_protocol1(settings: &Settings, shared: &SharedRandomness) -> Result<RunOutcome> {
    let bob = bob_view(settings.phi_b, shared)?;
    let charlie = charlie_view(settings.phi_c, shared.phi_c);
    let alice = alice_branch(settings.phi_a, shared, bob.tau0)?;
    let a = alice.get(bob.tau_b, charlie.tau_c);

    let mut transcript = Transcript::new();
    transcript.push(Message::bit(Party::BOB, Party::ALICE, Tag::Tau0, bob.tau0));
    transcript.push(Message::bit(Party::BOB, Party::ALICE, Tag::TauB, bob.tau_b));
    transcript.push(Message::bit(
        Party::CHARLIE,
        Party::ALICE,
        Tag::TauC,
        charlie.tau_c,
    ));
    Ok(RunOutcome::from_bits(a, bob.b, charlie.c, transcript))
}

/// The harmonic form: the 3-bit protocol on the settings multiplied by the
/// shared odd index `shared.m`.
pub fn run_protocol2(settings: &Settings, shared: &SharedRandomness) -> Result<RunOutcome> {
    run_protocol1(&settings.harmonic(shared.m), shared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomness::{sample_shared, Mixing, TrialRng};
    use core::f64::consts::{PI, TAU};
    use proptest::prelude::*;

    #[test]
    fn aligned_lambdas() {
        let x = UnitVec3::X;
        for phi_b in [0.0, 0.3, 1.7, 4.0] {
            let s = step0(&x, &x, false, Angle::new(phi_b)).unwrap();
            assert!(!s.tau0);
            assert_eq!(s.phi_b.radians(), 0.0);
        }
        let v = UnitVec3::new(0.2, 0.9, -0.4).unwrap();
        let s = step0(&v, &v, true, Angle::new(0.8)).unwrap();
        let expected = azimuth(v.to_array()).unwrap().radians() / 2.0 + PI;
        assert!((s.phi_b.radians() - expected).abs() < 1e-12);
    }

    #[test]
    fn quarter_turn_table() {
        // sin(π/4 - kπ/2) for k = 0, 1, 2 is +, -, -.
        let bits = alice_bit_table(Angle::new(-PI / 4.0));
        assert!(!bits.get(false, false));
        assert!(bits.get(false, true));
        assert!(bits.get(true, false));
        assert!(bits.get(true, true));
    }

    proptest! {
        #[test]
        fn table_relations(phi in 0.0..TAU) {
            let bits = alice_bit_table(Angle::new(phi));
            prop_assert!(bits.get(true, true) ^ bits.get(false, false));
            prop_assert_eq!(bits.get(false, true), bits.get(true, false));
        }

        #[test]
        fn table_matches_direct_formula_off_zeros(phi in 0.0..TAU) {
            let bits = alice_bit_table(Angle::new(phi));
            for (tb, tc) in [(false, false), (false, true), (true, false), (true, true)] {
                let arg = -phi - (tb as u8 + tc as u8) as f64 * FRAC_PI_2;
                let s = libm::sin(arg);
                prop_assume!(s.abs() > 1e-9);
                prop_assert_eq!(bits.get(tb, tc), Sign::of(s).bit());
            }
        }
    }

    #[test]
    fn transcript_is_three_bits() {
        let settings = Settings::new(0.4, 2.2, 5.1);
        for trial in 0..1000 {
            let shared = sample_shared(&mut TrialRng::new(1, 0, trial), Mixing::Plain).shared;
            let out = run_protocol1(&settings, &shared).unwrap();
            assert_eq!(out.transcript.total_bits(), 3);
            assert_eq!(out.transcript.bits_on(Party::BOB, Party::ALICE), 2);
            assert_eq!(out.transcript.bits_on(Party::CHARLIE, Party::ALICE), 1);
        }
    }

    #[test]
    fn perfect_correlations() {
        let zero = Settings::with_sum(0.0, 1.3, 4.4);
        let pi = Settings::with_sum(PI, 0.2, 2.9);
        for trial in 0..100_000 {
            let shared = sample_shared(&mut TrialRng::new(2, 0, trial), Mixing::Plain).shared;
            assert_eq!(run_protocol1(&zero, &shared).unwrap().product(), Sign::Plus);
            assert_eq!(run_protocol1(&pi, &shared).unwrap().product(), Sign::Minus);
        }
    }

    #[test]
    fn unit_harmonic_is_identity() {
        let settings = Settings::new(1.0, 2.0, 3.0);
        for trial in 0..1000 {
            let shared = sample_shared(&mut TrialRng::new(4, 0, trial), Mixing::Plain).shared;
            assert_eq!(
                run_protocol2(&settings, &shared).unwrap(),
                run_protocol1(&settings, &shared).unwrap()
            );
        }
    }

    #[test]
    fn degenerate_branch_is_reported() {
        let v = UnitVec3::new(0.0, 0.0, 1.0).unwrap();
        assert_eq!(
            step0(&v, &v, false, Angle::ZERO),
            Err(crate::Error::DegenerateVector)
        );
    }
}
