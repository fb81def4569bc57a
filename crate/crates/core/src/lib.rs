//! Exact closed forms for sums of products of C-finite sequences.

pub mod closer;
pub mod error;
pub mod exact;
pub mod indefinite;
pub mod io;
pub mod scalar;
pub mod render;
pub mod sequence;
pub mod spectra;

use num_rational::BigRational;

pub use error::{Error, Result};
pub use sequence::{builtin, CFiniteSequence, RationalSpectrum, SeqRef, SpectralProfile};

/// The coefficient domain of the whole engine.
pub type ExactScalar = BigRational;
pub type UniPoly = exact::Poly<ExactScalar>;
pub type ExactMatrix = exact::Matrix<ExactScalar>;
pub type LinearSolution = exact::Solution<ExactScalar>;
