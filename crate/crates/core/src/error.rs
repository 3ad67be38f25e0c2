use core::fmt;

use crate::ModeIndex;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A closed-form resonance solution lies outside the requested search bound.
    BoundTooSmall { bound: i64, mode: ModeIndex },
    /// The torus specification violates one of its invariants.
    InvalidSpec(&'static str),
    /// Family parameters produce coinciding modes.
    DegenerateQuintuple([ModeIndex; 5]),
    /// Family parameters with `k = 0` or `(n, r) = (0, 0)`.
    InvalidFamilyParams,
    /// A precondition of the called routine does not hold.
    PreconditionViolated(&'static str),
    /// An external block sits on the parabolic (elliptic/hyperbolic) transition.
    DegenerateBlock { modes: [ModeIndex; 2] },
    /// The couplings of a block cannot be made time independent by a frame change.
    NonStationaryCoupling,
    /// The eigenvalue routine did not converge.
    NonConvergence,
    /// A search range was empty.
    EmptyRange,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BoundTooSmall { bound, mode } => {
                write!(f, "resonant mode {mode} lies outside the search bound {bound}")
            }
            Error::InvalidSpec(why) => write!(f, "invalid torus specification: {why}"),
            Error::DegenerateQuintuple(q) => write!(f, "degenerate quintuple {q:?}"),
            Error::InvalidFamilyParams => write!(f, "family parameters need k != 0 and (n, r) != (0, 0)"),
            Error::PreconditionViolated(why) => write!(f, "precondition violated: {why}"),
            Error::DegenerateBlock { modes } => {
                write!(f, "block {modes:?} is on the parabolic transition")
            }
            Error::NonStationaryCoupling => {
                write!(f, "block couplings cannot be made stationary in a rotating frame")
            }
            Error::NonConvergence => write!(f, "eigenvalue iteration did not converge"),
            Error::EmptyRange => write!(f, "empty search range"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
