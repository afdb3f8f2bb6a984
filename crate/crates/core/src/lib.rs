//! Numerical laboratory for the sharp constant in Nash's inequality and the
//! optimal constants of the Gagliardo-Nirenberg family that degenerates to it.
//!
//! - [`specfun`]: Gamma, Bessel `J_α`, Neumann eigenvalue of the unit ball,
//!   the optimal profile and the closed-form sharp constant.
//! - [`radial`]: sampled radial profiles, norms and quotients.
//! - [`shooting`]: compactly supported ground states of `-Δu = u - u^{p-1}`.
//! - [`constants`]: `C_GN(p)`, the scaling relation and the classical bounds.
//! - [`heat`]: heat-flow decay envelopes.
//! - [`verify`]: inequality checks over a seeded corpus of test functions.
//! - [`io`]: CSV formats shared with the command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod constants;
pub mod error;
pub mod heat;
pub mod io;
pub mod radial;
pub mod shooting;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
