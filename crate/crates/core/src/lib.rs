//! Numerical toolkit for the Fréchet algebras `F^p` (`p > 1`) of holomorphic
//! functions on the unit disk.
//!
//! Functions are represented by truncated Taylor series with complex
//! coefficients. On top of that representation the crate evaluates the two
//! Stoll seminorm families (coefficient sums and radially weighted integral
//! means), the metrics `d_p` and `lambda_p`, a coefficient-growth membership
//! classifier, the point-evaluation ideals `M_lambda` with their quotient
//! structure, and corpus-level verification harnesses.
//!
//! Every result is a numerical estimate on finite truncations; quadrature
//! based quantities carry their residual.

pub mod circle;
pub mod corpus;
pub mod error;
pub mod ideals;
pub mod membership;
pub mod params;
pub mod quadrature;
pub mod seminorms;
pub mod series;
pub mod verify;

pub use num_complex::Complex64;

pub use error::{FpError, Result};
pub use params::{Estimate, QuadConfig, SeminormFamily, SeminormSpec, SpaceParams};
pub use series::{DiskPoint, TruncatedSeries};
