//! Verification toolkit for discrete log-concave sequences.

pub mod closed_forms;
pub mod error;
pub mod interval;
pub mod io;
pub mod localization;
pub mod log_affine;
pub mod moments;
pub mod ops;
pub mod predicates;
pub mod reference;
pub mod sampling;
pub mod scalar;
pub mod sequence;
pub mod verify;

pub use error::{Error, Result};
pub use num::BigRational;
pub use interval::IntegerInterval;
pub use log_affine::LogAffineSpec;
pub use reference::{ReferenceKind, ReferenceMeasure};
pub use scalar::{Backend, Scalar};
pub use sequence::{FloatLaw, FloatSequence, ProbSequence, RationalLaw, RationalSequence, Sequence};
pub use localization::{ConvexFunctional, ExtremalSearchResult, GridSpec, LinearConstraint};
pub use verify::VerificationReport;
