//! Capacity analysis for additive signal-dependent noise (ASDN) channels
//! `Y = X + sigma(X) Z`.
//!
//! The crate computes and cross-checks:
//!
//! - two capacity lower bounds (a majorization bound through the
//!   phi-transform, and a tail-conditioned bound through the psi-transform
//!   with an optimized threshold),
//! - a symmetrized-KL upper bound for Gaussian noise with its two-point
//!   covariance maximizer,
//! - a constrained Blahut-Arimoto oracle on a discretized channel, used to
//!   sandwich every bound,
//! - finiteness hypotheses and infinite-capacity detection, including the
//!   interval-packing witness that drives mutual information to infinity.
//!
//! Start from [`ChannelSpec`] (JSON-serializable), then call into [`bounds`],
//! [`oracle`], or [`infinity`]. The `examples/` directory has one runnable
//! example per capability; the `asdn` binary exposes the same operations as
//! subcommands.

pub mod bounds;
pub mod catalog;
pub mod channel;
pub mod error;
pub mod figures;
pub mod infinity;
mod interp;
pub mod oracle;
pub mod quad;
pub mod transform;

pub use channel::{
    ChannelSpec, Constraint, Endpoint, InputDist, Monotonicity, NoiseModel, SigmaFamily,
    SigmaProfile,
};
pub use error::{Error, Result};
pub use quad::{QuadratureConfig, TailSide};
