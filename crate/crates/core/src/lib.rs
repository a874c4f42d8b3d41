//! Pseudospectral solver and analysis toolkit for the `gamma`-family of
//! Camassa-Holm type equations
//!
//! ```text
//! u_t - u_txx + 2w u_x + 3 u u_x = g (2 u_x u_xx + u u_xxx)
//! ```
//!
//! on a periodic box, with solitary-wave construction and wave-breaking
//! diagnostics.

pub mod analysis;
pub mod config;
pub mod error;
pub mod initial;
pub mod io;
pub mod model;
pub mod run;
pub mod solitary;
pub mod spectral;
pub mod stepper;

pub use error::{Error, Result};
