//! Exact symbolic engine for a free field realization of affine `sl(2)` by
//! differential operators on (Laurent) polynomial spaces.

pub mod batch;
pub mod error;
pub mod modspace;
pub mod par;
pub mod random;
pub mod realization;
pub mod ring;
pub mod structure;
pub mod ualgebra;

pub use error::{Error, Result};
pub use modspace::{make_context, Kind, ModuleContext, Params, Weight};
pub use par::Exec;
pub use realization::Generator;
pub use ring::{q, qi, Element, Monomial, Rational, Var};
pub use ualgebra::{UElement, UWord};
