//! Regular differential forms and Cartier–Manin matrices of plane curves
//! over prime fields.

pub mod error;
pub mod cartier;
pub mod cli;
pub mod conductor;
pub mod field;
pub mod forms;
pub mod function_field;
pub mod groebner;
pub mod linalg;
pub mod modgb;
pub mod normalize;
pub mod poly;

pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField};
pub use poly::{Degree, Monomial, MonomialOrder, OrderKind, Polynomial, Ring};
