//! Weighted Lebesgue and Sobolev orthogonal polynomials on the unit ball.
//!
//! ```
//! use sobolev_ball::poly::{rat, MPoly};
//! use sobolev_ball::projectors::{partial_sum_sobolev, proj_lebesgue};
//! use sobolev_ball::Alpha;
//!
//! # fn main() -> sobolev_ball::Result<()> {
//! let a = Alpha::new(2, rat(0, 1))?;
//! let u = MPoly::parse(2, "x1^2")?;
//! assert_eq!(proj_lebesgue(&u, &a, 2)?, MPoly::parse(2, "x1^2 - 1/4")?);
//! let v = MPoly::parse(2, "x1^4*x2")?;
//! assert_eq!(partial_sum_sobolev(&v, &a, 5)?, v);
//! # Ok(())
//! # }
//! ```

pub mod bases;
pub mod diffops;
pub mod error;
pub mod experiment;
pub mod jacobi;
pub mod measure;
pub mod par;
pub mod poly;
pub mod projectors;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, PolyError, Result};
pub use measure::Alpha;
pub use par::Execution;
pub use poly::{MPoly, MultiIndex, Rational};
