//! Numerical toolkit for the contact geometry of material-point
//! thermodynamics: entropy 1-forms and their closeness, Legendre and
//! Reeb-shifted constitutive surfaces, admissible processes, and the
//! thermoelastic and ferroelectric point models.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod expr;

pub mod ferroelectric;
pub mod geometry;
pub mod legendre;
pub mod numerics;
pub mod processes;
pub mod tensor;
pub mod thermoelastic;

pub use error::{Error, EvalError, ParseError, Result};
pub use expr::{parse, Binding, Expr, ScalarField};
