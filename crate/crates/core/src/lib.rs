//! Exact calculus of genus-0, 1 and 2 descendant generating functions on
//! the truncated big phase space.
#![no_std]

extern crate alloc;

pub mod catalog;
pub mod check;
pub mod error;
pub mod field;
pub mod genfun;
pub mod model;
pub mod ops;
pub mod oracle;
pub mod series;
pub mod solver;
pub mod trr;
pub mod virasoro;

pub use error::{Error, Result};
pub use field::VectorField;
pub use genfun::{GenFunSet, GenusDegrees, GwRecord};
pub use model::ManifoldModel;
pub use ops::Context;
pub use series::{Monomial, Order, Series, VarId, VarWindow, Q};
