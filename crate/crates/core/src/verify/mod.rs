pub mod convolution;
pub mod deviation;
pub mod dilation;
pub mod four_functions;
pub mod prekopa;
pub mod report;

pub use report::{Tally, VerificationReport};
