//! Per-trial random streams and the shared hidden variables.
//!
//! Every trial draws from its own ChaCha8 stream keyed by `(seed, stream)`
//! and positioned by the trial index, so a trial's randomness does not depend
//! on which worker runs it or in what order.

use core::f64::consts::{PI, TAU};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::coefficients::CoefficientTable;
use crate::{Error, Result};

/// Planar norms below this are treated as having no azimuth.
pub const DEGENERATE_NORM: f64 = 1e-12;

/// Counter-based generator for one trial.
#[derive(Clone, Debug)]
pub struct TrialRng(ChaCha8Rng);

impl TrialRng {
    /// Stream for trial `trial` of sub-experiment `stream` under `seed`.
    pub fn new(seed: u64, stream: u64, trial: u64) -> TrialRng {
        let mut seed_state = seed;
        let mut stream_state = stream ^ 0x6a09_e667_f3bc_c909;
        let words = [
            splitmix64(&mut seed_state),
            splitmix64(&mut seed_state),
            splitmix64(&mut stream_state),
            splitmix64(&mut stream_state),
        ];
        let mut key = [0u8; 32];
        for (chunk, word) in key.chunks_exact_mut(8).zip(words) {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(trial);
        TrialRng(rng)
    }
}

impl RngCore for TrialRng {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    #[inline]
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform on `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform01<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[inline]
pub fn random_bit<R: RngCore + ?Sized>(rng: &mut R) -> bool {
    rng.next_u64() >> 63 == 1
}

#[inline]
pub fn random_angle<R: RngCore + ?Sized>(rng: &mut R) -> Angle {
    Angle::new(TAU * uniform01(rng))
}

/// An angle reduced to `[0, 2π)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    #[inline]
    pub fn new(radians: f64) -> Angle {
        let mut r = libm::fmod(radians, TAU);
        if r < 0.0 {
            r += TAU;
        }
        if r >= TAU {
            r = 0.0;
        }
        Angle(r)
    }

    /// `fraction * π`, the unit used on the command line.
    pub fn from_pi_units(fraction: f64) -> Angle {
        Angle::new(fraction * PI)
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    /// `k * self`, reduced.
    #[inline]
    pub fn scale(self, k: u32) -> Angle {
        Angle::new(self.0 * k as f64)
    }
}

impl core::ops::Add for Angle {
    type Output = Angle;

    #[inline]
    fn add(self, rhs: Angle) -> Angle {
        Angle::new(self.0 + rhs.0)
    }
}

impl core::ops::Sub for Angle {
    type Output = Angle;

    #[inline]
    fn sub(self, rhs: Angle) -> Angle {
        Angle::new(self.0 - rhs.0)
    }
}

impl core::ops::Neg for Angle {
    type Output = Angle;

    #[inline]
    fn neg(self) -> Angle {
        Angle::new(-self.0)
    }
}

/// A point on the unit sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitVec3 {
    pub const X: UnitVec3 = UnitVec3 {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };

    /// Normalises `(x, y, z)`; `None` for the zero vector.
    pub fn new(x: f64, y: f64, z: f64) -> Option<UnitVec3> {
        let norm = libm::sqrt(x * x + y * y + z * z);
        (norm > 0.0).then(|| UnitVec3 {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// The equatorial unit vector with the given azimuth.
    pub fn equatorial(azimuth: f64) -> UnitVec3 {
        UnitVec3 {
            x: libm::cos(azimuth),
            y: libm::sin(azimuth),
            z: 0.0,
        }
    }

    #[inline]
    pub fn dot(&self, other: &UnitVec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn negated(self) -> UnitVec3 {
        UnitVec3 {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// Uniform on the sphere: `z` uniform on `[-1, 1]`, azimuth uniform.
pub fn sample_unit_sphere<R: RngCore + ?Sized>(rng: &mut R) -> UnitVec3 {
    let z = 2.0 * uniform01(rng) - 1.0;
    let azimuth = TAU * uniform01(rng);
    let r = libm::sqrt((1.0 - z * z).max(0.0));
    UnitVec3 {
        x: r * libm::cos(azimuth),
        y: r * libm::sin(azimuth),
        z,
    }
}

/// Uniform on the half sphere `{v : axis · v >= 0}`.
pub fn sample_half_sphere<R: RngCore + ?Sized>(rng: &mut R, axis: &UnitVec3) -> UnitVec3 {
    let v = sample_unit_sphere(rng);
    if axis.dot(&v) >= 0.0 {
        v
    } else {
        v.negated()
    }
}

/// Azimuth of the planar part of `v`, in `[0, 2π)`.
pub fn azimuth(v: [f64; 3]) -> Result<Angle> {
    let [x, y, _] = v;
    if libm::hypot(x, y) < DEGENERATE_NORM {
        return Err(Error::DegenerateVector);
    }
    Ok(Angle::new(libm::atan2(y, x)))
}

/// `a + sign * b`, the combination whose azimuth fixes Bob's shared phase.
#[inline]
pub fn combine(a: &UnitVec3, b: &UnitVec3, flip: bool) -> [f64; 3] {
    let s = if flip { -1.0 } else { 1.0 };
    [a.x + s * b.x, a.y + s * b.y, a.z + s * b.z]
}

/// Hidden variables shared before the settings arrive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SharedRandomness {
    /// Shared by Alice and Bob.
    pub lambda1: UnitVec3,
    /// Shared by Alice and Bob.
    pub lambda2: UnitVec3,
    /// Shared by Alice and Bob.
    pub xi: bool,
    /// Shared by Alice and Charlie.
    pub phi_c: Angle,
    /// Odd harmonic index; 1 for the plain protocol.
    pub m: u32,
}

/// Whether the harmonic index is fixed at 1 or drawn from a mixture table.
#[derive(Clone, Copy, Debug)]
pub enum Mixing<'a> {
    Plain,
    Mixture(&'a CoefficientTable),
}

/// A draw of shared randomness together with how many draws were rejected
/// because `lambda1 ± lambda2` had no planar component.
#[derive(Clone, Copy, Debug)]
pub struct SharedDraw {
    pub shared: SharedRandomness,
    pub resamples: u32,
}

pub fn sample_shared<R: RngCore + ?Sized>(rng: &mut R, mixing: Mixing<'_>) -> SharedDraw {
    let mut resamples = 0;
    let (lambda1, lambda2) = loop {
        let l1 = sample_unit_sphere(rng);
        let l2 = sample_unit_sphere(rng);
        let ok = |v: [f64; 3]| libm::hypot(v[0], v[1]) >= DEGENERATE_NORM;
        if ok(combine(&l1, &l2, false)) && ok(combine(&l1, &l2, true)) {
            break (l1, l2);
        }
        resamples += 1;
    };
    let xi = random_bit(rng);
    let phi_c = random_angle(rng);
    let m = match mixing {
        Mixing::Plain => 1,
        Mixing::Mixture(table) => table.sample_harmonic(rng),
    };
    SharedDraw {
        shared: SharedRandomness {
            lambda1,
            lambda2,
            xi,
            phi_c,
            m,
        },
        resamples,
    }
}
