//! Rates and resource allocation for the symmetric primitive Gaussian
//! diamond relay channel with compress-and-forward (CF) and
//! decode-and-forward (DF) relaying.
//!
//! - [`rates`]: single-letter CF, DF and cut-set expressions.
//! - [`superposition`]: one DF and one CF layer in the same resource.
//! - [`flat`]: time sharing between CF and DF on a flat channel.
//! - [`freq`]: frequency-selective allocation via dual prices and an LP.
//! - [`atlas`]: border lines and regions of the price plane.
//!
//! Grid searches run on rayon when the `parallel` feature is enabled (the
//! default); [`Exec`] selects the backend per call.

// `!(x > 0.0)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atlas;
pub mod error;
pub mod exec;
pub mod flat;
pub mod freq;
pub mod lp;
pub mod numeric;
pub mod rates;
pub mod superposition;

pub use error::{Error, Result};
pub use exec::Exec;
