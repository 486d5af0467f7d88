//! Ordered abelian groups presented as Hahn sums over term indices.
//!
//! Convex subgroups are named by cuts of the index: the subgroup is the sum
//! over the cut's upper part.

pub mod arch;
pub mod element;
pub mod term;

pub use arch::{ArchComponent, Rational};
pub use element::GroupElement;
pub use term::GroupTerm;

use crate::error::Result;
use crate::orders::Cut;

/// `g ∈ H`.
pub fn member(g: &GroupTerm, h: &Cut, x: &GroupElement) -> Result<bool> {
    let h = g.subgroup(h)?;
    Ok(match x.v() {
        Err(_) => true,
        Ok(p) => g.chain().contains(&h, p),
    })
}

/// Image of a convex subgroup in the value set: the cut itself.
pub fn phi(g: &GroupTerm, h: &Cut) -> Result<Cut> {
    g.subgroup(h)
}
