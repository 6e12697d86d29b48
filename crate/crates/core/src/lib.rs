//! Genera of quotients of the Hermitian curve by subgroups of the
//! stabilizer of a self-polar triangle and, for even `q`, of a pole-polar
//! pair.
//!
//! Closed-form genus formulas live in [`families`]; [`oracle`] recomputes
//! them from explicit matrix groups over F_{q^2}.

pub mod cli;
pub mod error;
pub mod families;
pub mod gf;
pub mod numthy;
pub mod oracle;
pub mod pgu;
pub mod spectrum;

pub use error::{Error, Result};
