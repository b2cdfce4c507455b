//! Exact computation with Hamming-weight distributions of bounded-uniform
//! and small-bias spaces.
//!
//! Everything in this crate works on the *weight PMF* of an exchangeable
//! distribution on {-1,1}^n: the exact law of the coordinate sum. Since an
//! exchangeable distribution is a mixture of uniform slice distributions,
//! the weight PMF is a lossless representation for moments, parities,
//! tails, noise, and the linear programs computed here.
//!
//! The main pieces:
//!
//! - [`WeightPMF`]: exact rational PMF over Hamming weights, with moments,
//!   tails and k-uniformity tests.
//! - [`krawtchouk`]: exact parity biases of slices and mixtures.
//! - [`lp`]: an exact rational simplex over weight masses; feasibility
//!   constructions, extremal tails with dual polynomial certificates, and
//!   moment-preserving sparsification.
//! - [`noise`]: exact smoothing and coordinate-rerandomization kernels.
//! - [`transform`]: the bounded-uniform-to-small-bias pipeline and its
//!   per-parity bias certification.
//! - [`distinguish`]: threshold/interval distinguishing experiments and
//!   the analytic comparator formulas.
//! - [`gaussmix`]: Gaussian-mixture distances, Hankel/Vandermonde
//!   certificates, q-binomials, and approximation-theory checkers.
//! - [`verify`]: the acceptance suite, callable from tests and the CLI.
//!
//! Probabilities, moments, and LP data are exact `BigRational`s; bounds
//! that are irrational (Gaussian tails, fractional powers) are evaluated
//! in `f64` and compared with documented slacks.

pub mod distinguish;
pub mod error;
pub mod gaussmix;
pub mod krawtchouk;
pub mod lp;
pub mod noise;
pub mod params;
pub mod pmf;
pub mod poly;
pub mod rat;
pub mod transform;
pub mod verify;

pub use distinguish::{Scenario, SeparationReport};
pub use error::Error;
pub use gaussmix::{GaussMixture, MkMatrix};
pub use krawtchouk::BiasProfile;
pub use lp::{LPProblem, LPSolution, LpStatus, Sense, TailObjective};
pub use params::ParamSet;
pub use pmf::WeightPMF;
pub use poly::UnivariatePoly;
pub use rat::Q;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
