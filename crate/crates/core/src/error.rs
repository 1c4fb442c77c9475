use core::fmt;

/// Which mixture condition a coefficient series failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// `e_1 > 0`.
    LeadingPositive,
    /// `e_{2n+1} <= 0` for `n >= 1`.
    TrailingNonPositive,
    /// `sum e_{2n+1} = 1`.
    Normalization,
    /// `sum (2n+1)^2 e_{2n+1} >= 0`.
    Curvature,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::LeadingPositive => "e_1 > 0",
            Clause::TrailingNonPositive => "e_(2n+1) <= 0 for n >= 1",
            Clause::Normalization => "sum of e_(2n+1) equals 1",
            Clause::Curvature => "sum of (2n+1)^2 e_(2n+1) is non-negative",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A vector with no planar component has no azimuth.
    DegenerateVector,
    /// A coefficient series does not satisfy the mixture conditions.
    ConditionViolated { clause: Clause, index: usize, value: f64 },
    /// The weighted tail constant reached 1, so the weights are not summable
    /// by the geometric bound.
    DivergentMixture { c_three_halves: f64 },
    /// The requested tail bound could not be certified below the search cap.
    TargetUnreachable { target: f64, cap: u32 },
    EmptySample,
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateVector => f.write_str("vector has no planar component"),
            Error::ConditionViolated {
                clause,
                index,
                value,
            } => write!(
                f,
                "mixture condition violated ({clause}) at harmonic {index}: {value}"
            ),
            Error::DivergentMixture { c_three_halves } => {
                write!(f, "mixture weights diverge: C_3/2 = {c_three_halves} >= 1")
            }
            Error::TargetUnreachable { target, cap } => write!(
                f,
                "tail bound {target} not certified for harmonics up to {cap}"
            ),
            Error::EmptySample => f.write_str("empty sample"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl core::error::Error for Error {}
