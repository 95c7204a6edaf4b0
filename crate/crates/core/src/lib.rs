//! Quantum discord and weak-measurement super discord for two-qubit X states.
//!
//! The library covers one four-parameter state family and two correlation
//! measures on it, each available twice: as the published-style closed form
//! and as a definitional brute-force oracle (matrix-level posteriors plus a
//! full minimization over measurement directions). Keeping both routes in one
//! crate lets every closed form be audited against first principles, which is
//! the point: the four-term weak closed form is exact only for unbiased
//! states, and the `verify` module measures that gap rather than hiding it.
//!
//! Module map:
//! - [`linalg`]: small fixed-size complex matrices, a Jacobi eigensolver,
//!   entropies, partial traces, Kraus application.
//! - [`states`]: the X-state family, validation, spectrum, samplers.
//! - [`measurement`]: weak two-outcome measurements, posteriors, the two
//!   conditional-entropy closed forms and their analytic gap.
//! - [`discord`]: sphere minimization, discord and super discord (closed and
//!   oracle), reports.
//! - [`channels`]: two-sided phase-flip noise and its closed-form effect.
//! - [`sweep`]: deterministic grids over strength or noise with CSV output.
//! - [`verify`]: the numbered verification battery.

pub mod channels;
pub mod discord;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod states;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
