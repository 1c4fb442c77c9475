use core::ops::{Mul, Neg};

/// A measurement outcome `+1` or `-1`.
///
/// Bits follow `bit = (1 - sign) / 2`, so `Plus` is `false` and `Minus` is
/// `true`; products of signs become XORs of bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `+1` for `x >= 0` (including `-0.0`), `-1` otherwise.
    #[inline]
    pub fn of(x: f64) -> Sign {
        if x >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    #[inline]
    pub fn from_bit(bit: bool) -> Sign {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    #[inline]
    pub fn bit(self) -> bool {
        self == Sign::Minus
    }

    #[inline]
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bit(self.bit() ^ rhs.bit())
    }
}

impl Neg for Sign {
    type Output = Sign;

    #[inline]
    fn neg(self) -> Sign {
        Sign::from_bit(!self.bit())
    }
}
