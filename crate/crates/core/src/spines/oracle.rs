//! Brute-force evaluation of the invariants on finite-index groups by
//! enumerating every convex subgroup.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupTerm};
use crate::orders::{Cut, Point};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleValues {
    pub a: Cut,
    pub b: Cut,
    pub a_n: Cut,
    pub b_n: Cut,
    pub f_n: Option<Cut>,
}

/// All convex subgroups, from `G` down to `{0}`.
pub fn convex_subgroups(g: &GroupTerm) -> Result<Vec<Cut>> {
    if !g.has_finite_index() {
        return Err(Error::Scope("subgroup enumeration needs a finite index".into()));
    }
    let chain = g.chain();
    let mut out = Vec::new();
    for p in chain.finite_points()? {
        out.push(chain.canon(&Cut::Minus(p))?);
    }
    out.push(Cut::Nothing);
    Ok(out)
}

fn points_between(g: &GroupTerm, below: &Cut, above: &Cut) -> Result<Vec<Point>> {
    let chain = g.chain();
    Ok(chain
        .finite_points()?
        .into_iter()
        .filter(|p| chain.contains(below, p) && !chain.contains(above, p))
        .collect())
}

/// `below/above` is n-regular: every quotient by a non-trivial convex
/// subgroup is n-divisible.
fn section_is_regular(g: &GroupTerm, below: &Cut, above: &Cut, n: u64) -> Result<bool> {
    let pts = points_between(g, below, above)?;
    // quotient by the subgroup over pts[k..] keeps exactly pts[..k]
    Ok((0..pts.len()).all(|k| pts[..k].iter().all(|p| g.block_at(p).divisible_by(n))))
}

fn smallest<'a>(g: &GroupTerm, cuts: impl Iterator<Item = &'a Cut>) -> Option<Cut> {
    cuts.max_by(|a, b| g.chain().cmp_cuts(a, b)).cloned()
}

fn largest<'a>(g: &GroupTerm, cuts: impl Iterator<Item = &'a Cut>) -> Option<Cut> {
    cuts.min_by(|a, b| g.chain().cmp_cuts(a, b)).cloned()
}

fn strictly_inside(g: &GroupTerm, a: &Cut, b: &Cut) -> bool {
    g.chain().cmp_cuts(a, b) == Ordering::Greater
}

/// The part of `x` supported outside `h`.
fn outside(g: &GroupTerm, h: &Cut, x: &GroupElement) -> Result<GroupElement> {
    let chain = g.chain();
    GroupElement::new(
        g,
        x.entries().iter().filter(|(p, _)| !chain.contains(h, p)).cloned().collect(),
    )
}

pub fn oracle_spine(g: &GroupTerm, x: &GroupElement, n: u64) -> Result<OracleValues> {
    if n < 2 {
        return Err(Error::Precondition(format!("modulus must be at least 2, got {n}")));
    }
    let subs = convex_subgroups(g)?;
    let chain = g.chain();
    let gamma = x.v().map_err(|_| Error::Domain("the invariants are defined for non-zero elements only".into()))?;

    let a = largest(g, subs.iter().filter(|h| !chain.contains(h, gamma))).expect("{0} misses x");
    let b = smallest(g, subs.iter().filter(|h| chain.contains(h, gamma))).expect("G holds x");

    let mut below_b = Vec::new();
    for h in subs.iter().filter(|h| strictly_inside(g, h, &b)) {
        if section_is_regular(g, &b, h, n)? {
            below_b.push(h.clone());
        }
    }
    let a_n = smallest(g, below_b.iter()).expect("A(g) qualifies");

    let mut above_a = Vec::new();
    for h in subs.iter().filter(|h| strictly_inside(g, &a, h)) {
        if section_is_regular(g, h, &a, n)? {
            above_a.push(h.clone());
        }
    }
    let b_n = largest(g, above_a.iter()).expect("B(g) qualifies");

    let f_n = if x.in_n_g(g, n) {
        None
    } else {
        // h ∩ (x + nG) is empty iff no element of h cancels x modulo nG
        let mut avoiding = Vec::new();
        for h in &subs {
            if !outside(g, h, x)?.in_n_g(g, n) {
                avoiding.push(h.clone());
            }
        }
        largest(g, avoiding.iter())
    };
    Ok(OracleValues { a, b, a_n, b_n, f_n })
}
