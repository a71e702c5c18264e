//! Chart-based computational toolkit for contact geometry.
//!
//! Everything works on a single coordinate chart: coefficient functions are
//! symbolic expression trees ([`expr`]), differential forms and vector fields
//! live in [`calculus`], and the geometric layers ([`contact`], [`dynamics`],
//! [`products`], [`prequant`]) build on those to construct contact forms,
//! Reeb fields, symplectizations, contact products, and prequantization
//! operators, each with numerical verification at seeded sample points.
//!
//! The [`catalog`] module ships ready-made examples (Darboux charts, the Hopf
//! sphere, exact contactifications, a punctured incomplete example, torus
//! period fixtures) that exercise every construction.

pub mod calculus;
pub mod catalog;
pub mod chart;
pub mod contact;
pub mod dynamics;
pub mod error;
pub mod expr;
pub mod prequant;
pub mod products;
pub mod rational;

pub use error::{Error, Result};

// re-exported because complex values appear in the prequant API
pub use num_complex;
