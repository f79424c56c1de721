//! Exact-arithmetic group-convolution classifiers over finite groups.
//!
//! The crate covers finite group construction, convolution of group
//! functions, a two-parameter ReLU/pooling classifier with a fixed kernel,
//! shattering certificates, complete families of orders, kernel synthesis
//! and VC-dimension bounds. Everything is generic over [`Scalar`]; the
//! aliases below fix the scalar to exact rationals.

pub mod bounds;
pub mod classifier;
pub mod error;
pub mod gfunc;
pub mod group;
pub mod io;
pub mod orders;
pub mod scalar;
pub mod shatter;
pub mod synth;

pub use classifier::{classify, nu, Label, NuProfile, Ranking, StepFn};
pub use error::{Error, Result};
pub use gfunc::{convolve, GroupFunction, Measure};
pub use group::{FiniteGroup, GroupSpec, ValidationReport};
pub use scalar::Scalar;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Arbitrary-precision rational, the default scalar.
pub type Rational = num_rational::BigRational;
pub type RationalFunction = GroupFunction<Rational>;
pub type RationalMeasure = Measure<Rational>;
pub type RationalProfile = NuProfile<Rational>;
pub type RationalCertificate = shatter::ShatterCertificate<Rational>;
pub type RationalSynthesis = synth::Synthesis<Rational>;
