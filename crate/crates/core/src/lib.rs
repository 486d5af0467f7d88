//! Definability of convex subgroups in ordered abelian groups, valuation
//! rings in henselian valued fields, and final segments of linear orders.

pub mod dsl;
pub mod error;
pub mod fields;
pub mod groups;
pub mod orders;
pub mod rules;
pub mod spines;

pub use error::{Error, Result};
