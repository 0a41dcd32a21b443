//! Finitely presented modules and bounded cochain complexes over `Z` and
//! `Z/n`, with universe-bounded checkers for relative injectivity and
//! projectivity and constructive precover/preenvelope builders.

pub mod error;
pub mod exactalg;
pub mod complexes;
pub mod modules;
pub mod xclass;
pub mod lifting;
pub mod construct;
pub mod cli;

pub use error::{Error, Result};
