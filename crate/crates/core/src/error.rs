use alloc::string::String;
use core::fmt;

use crate::integer::Label2;

/// Which neighbour of a base label was absent when forming a quantum
/// rotation number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbor {
    /// The `(j + 1, k)` neighbour.
    East,
    /// The `(j, k + 1)` neighbour.
    North,
    /// The base label itself.
    Base,
}

/// Every failure mode of the library.
///
/// Variant names are part of the public contract: the command-line front end
/// reports them verbatim (see [`Error::name`]).
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A value violated a documented range or structural constraint.
    InvalidInput(String),
    EmptyCandidateSet,
    TooFewPoints {
        needed: usize,
        found: usize,
    },
    OutOfDomain {
        x: f64,
        y: f64,
    },
    EmptySnapshot,
    InvalidSchedule(String),
    InversionFailed {
        x: f64,
        y: f64,
    },
    DegenerateGradient,
    DegenerateDirection,
    SingularValue(String),
    QuadratureFailure(String),
    DegenerateBasis {
        det: f64,
    },
    SafetyCapExceeded {
        cap: usize,
    },
    NotAffine(String),
    NotUnimodular {
        det: i128,
    },
    OrientationReversed,
    NotStriped {
        max_residual: f64,
        bound: f64,
    },
    NoStripNeighbor,
    NotCoprime {
        n: i64,
        m: i64,
    },
    DuplicateHeight {
        strip: i64,
    },
    DuplicateLabel(Label2),
    TooFewSnapshots {
        found: usize,
    },
    LabelMissing(Label2),
    PointUnlabelled {
        x: f64,
        y: f64,
    },
    AmbiguousMatch,
    NoAdmissiblePair,
    InsufficientOverlap {
        window: usize,
    },
    NeighborMissing {
        label: Label2,
        which: Neighbor,
    },
    WrongLabellingKind,
}

impl Error {
    /// Stable identifier of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::EmptyCandidateSet => "EmptyCandidateSet",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::OutOfDomain { .. } => "OutOfDomain",
            Error::EmptySnapshot => "EmptySnapshot",
            Error::InvalidSchedule(_) => "InvalidSchedule",
            Error::InversionFailed { .. } => "InversionFailed",
            Error::DegenerateGradient => "DegenerateGradient",
            Error::DegenerateDirection => "DegenerateDirection",
            Error::SingularValue(_) => "SingularValue",
            Error::QuadratureFailure(_) => "QuadratureFailure",
            Error::DegenerateBasis { .. } => "DegenerateBasis",
            Error::SafetyCapExceeded { .. } => "SafetyCapExceeded",
            Error::NotAffine(_) => "NotAffine",
            Error::NotUnimodular { .. } => "NotUnimodular",
            Error::OrientationReversed => "OrientationReversed",
            Error::NotStriped { .. } => "NotStriped",
            Error::NoStripNeighbor => "NoStripNeighbor",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::DuplicateHeight { .. } => "DuplicateHeight",
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::TooFewSnapshots { .. } => "TooFewSnapshots",
            Error::LabelMissing(_) => "LabelMissing",
            Error::PointUnlabelled { .. } => "PointUnlabelled",
            Error::AmbiguousMatch => "AmbiguousMatch",
            Error::NoAdmissiblePair => "NoAdmissiblePair",
            Error::InsufficientOverlap { .. } => "InsufficientOverlap",
            Error::NeighborMissing { .. } => "NeighborMissing",
            Error::WrongLabellingKind => "WrongLabellingKind",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        match self {
            Error::InvalidInput(msg)
            | Error::InvalidSchedule(msg)
            | Error::SingularValue(msg)
            | Error::QuadratureFailure(msg)
            | Error::NotAffine(msg) => write!(f, ": {msg}"),
            Error::TooFewPoints { needed, found } => {
                write!(f, ": need at least {needed} points, found {found}")
            }
            Error::OutOfDomain { x, y } => write!(f, ": ({x}, {y}) is outside the chart domain"),
            Error::InversionFailed { x, y } => {
                write!(f, ": could not invert the chart at ({x}, {y})")
            }
            Error::DegenerateBasis { det } => write!(f, ": basis determinant {det}"),
            Error::SafetyCapExceeded { cap } => write!(f, ": more than {cap} steps"),
            Error::NotUnimodular { det } => write!(f, ": determinant {det}"),
            Error::NotStriped {
                max_residual,
                bound,
            } => {
                write!(f, ": residual {max_residual} exceeds {bound}")
            }
            Error::NotCoprime { n, m } => write!(f, ": ({n}, {m})"),
            Error::DuplicateHeight { strip } => write!(f, ": strip {strip}"),
            Error::DuplicateLabel(l) | Error::LabelMissing(l) => write!(f, ": {l}"),
            Error::PointUnlabelled { x, y } => write!(f, ": ({x}, {y})"),
            Error::TooFewSnapshots { found } => write!(f, ": found {found}"),
            Error::InsufficientOverlap { window } => {
                write!(f, ": overlap after window {window}")
            }
            Error::NeighborMissing { label, which } => write!(f, ": {which:?} of {label}"),
            _ => Ok(()),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
