//! Exact computations with representations of special biserial algebras:
//! gentle completions, circular complexes, irreducible components of
//! representation varieties, Krull-Schmidt splitting, string and band
//! modules, and King stability.

pub mod circular;
pub mod error;
pub mod field;
pub mod krull_schmidt;
pub mod linalg;
pub mod poly;
pub mod quiver;
pub mod repvar;
pub mod stability;
pub mod strings_bands;
pub mod text;

pub use error::{Error, Result};
