//! Squeezing-function values, bounds and searches for domains in ℂⁿ.
//!
//! * [`hyperbolic`]: the σ-kernel, Möbius maps and invariant distances.
//! * [`rouche`]: argument-principle zero counting and injectivity certificates.
//! * [`symmetric`]: exact constants of the classical symmetric domains.
//! * [`planar`]: certified bounds on annuli, excised discs and punctured balls.
//! * [`search`]: numerical search for extremal annulus embeddings.

pub mod certificate;
pub mod corpus;
pub mod hyperbolic;
pub mod planar;
pub mod rouche;
pub mod search;
pub mod symmetric;

pub use certificate::{BoundCertificate, BoundTag, Witness, WitnessValue};
pub use hyperbolic::{BallPoint, DiscPoint, EuclideanRadius, HyperbolicError, HyperbolicValue};
