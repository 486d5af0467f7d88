//! Finite n-spines.

use std::fmt;

use super::invariants::{abc_n, f_n};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupTerm, Rational};
use crate::orders::Cut;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpineKind {
    A,
    F,
    Both,
}

impl fmt::Display for SpineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpineKind::A => "A",
            SpineKind::F => "F",
            SpineKind::Both => "A,F",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpineElement {
    pub subgroup: Cut,
    pub kind: SpineKind,
    /// `G/C` has a least positive element.
    pub dk: bool,
    /// An element realizing the subgroup as `A_n` (or `F_n` when F-only).
    pub witness: GroupElement,
}

impl SpineElement {
    pub fn is_a(&self) -> bool {
        self.kind != SpineKind::F
    }

    pub fn is_f(&self) -> bool {
        self.kind != SpineKind::A
    }
}

/// Elements are listed in spine order: larger subgroups first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spine {
    pub n: u64,
    pub elements: Vec<SpineElement>,
}

impl Spine {
    pub fn find(&self, c: &Cut) -> Option<&SpineElement> {
        self.elements.iter().find(|e| e.subgroup == *c)
    }
}

impl fmt::Display for Spine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .elements
            .iter()
            .map(|e| format!("{}[{}{}]", e.subgroup, e.kind, if e.dk { ",Dk" } else { "" }))
            .collect();
        write!(f, "SP_{}{{{}}}", self.n, parts.join(", "))
    }
}

/// `A_n` depends only on the leading point and `F_n` only on the least
/// failing entry, so unit elements at every point realize both families.
pub fn spine(g: &GroupTerm, n: u64) -> Result<Spine> {
    if !g.has_finite_index() {
        return Err(Error::Scope("spines are only materialized for finite indices".into()));
    }
    let chain = g.chain();
    let mut elements: Vec<SpineElement> = Vec::new();
    let mut record = |c: Cut, a: bool, w: GroupElement| {
        if let Some(e) = elements.iter_mut().find(|e| e.subgroup == c) {
            e.kind = match (e.kind, a) {
                (SpineKind::A, false) | (SpineKind::F, true) => SpineKind::Both,
                (k, _) => k,
            };
            return;
        }
        let dk = g.quotient_is_discrete(&c);
        let kind = if a { SpineKind::A } else { SpineKind::F };
        elements.push(SpineElement { subgroup: c, kind, dk, witness: w });
    };
    for p in chain.finite_points()? {
        let unit = GroupElement::single(p, Rational::from_integer(1));
        record(abc_n(g, &unit, n)?.a, true, unit.clone());
        if let Some(c) = f_n(g, &unit, n)? {
            record(c, false, unit);
        }
    }
    elements.sort_by(|x, y| chain.cmp_cuts(&x.subgroup, &y.subgroup));
    Ok(Spine { n, elements })
}
