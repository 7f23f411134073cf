pub mod calculus;
pub mod error;
pub mod function_space;
pub mod harness;
pub mod linalg;
pub mod util;

pub use error::{Error, Result};
pub use util::{binomial, signed_binomial};
