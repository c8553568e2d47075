//! Reverse generalised Bessel polynomials `theta_n(z; a)` for large degree:
//! a high-precision direct oracle, the Liouville-Green and Airy-type uniform
//! asymptotic expansions, and the conformal map machinery they rest on.

pub mod airy;
pub mod bigcomplex;
pub mod error;
pub mod lg_coeffs;
pub mod lg_solutions;
pub mod mapping;
pub mod oracle;
pub mod params;
pub mod problem;
pub mod quad;
pub mod uniform_airy;

pub use bigcomplex::BigComplex;
pub use error::{Error, Result};
pub use params::{ProblemParams, ScaledComplex};
pub use problem::Problem;
