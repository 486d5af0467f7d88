//! Blockwise computation of the invariants A, B, C, A_n, B_n, C_n, F_n and
//! E_n of a group element.

use std::fmt;

use crate::error::{Error, Result};
use crate::groups::{ArchComponent, GroupElement, GroupTerm};
use crate::orders::{Cut, Point};

/// `B/A` for two convex subgroups `A ⊆ B`. The term is filled in when the
/// section is a single layer or the index is finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub above: Cut,
    pub below: Cut,
    pub term: Option<GroupTerm>,
}

impl Section {
    pub fn new(g: &GroupTerm, below: Cut, above: Cut) -> Self {
        let term = section_term(g, &below, &above);
        Section { above, below, term }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.term {
            Some(t) => write!(f, "{t}"),
            None => write!(f, "{}/{}", self.below, self.above),
        }
    }
}

fn section_term(g: &GroupTerm, below: &Cut, above: &Cut) -> Option<GroupTerm> {
    let chain = g.chain();
    if !g.has_finite_index() {
        return None;
    }
    let blocks: Vec<ArchComponent> = chain
        .finite_points()
        .ok()?
        .iter()
        .filter(|p| chain.contains(below, p) && !chain.contains(above, p))
        .map(|p| g.block_at(p).clone())
        .collect();
    if blocks.is_empty() {
        return None;
    }
    GroupTerm::lex(blocks).ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub a: Cut,
    pub b: Cut,
    pub c: Section,
}

fn leading(x: &GroupElement) -> Result<&Point> {
    x.v().map_err(|_| Error::Domain("the invariants are defined for non-zero elements only".into()))
}

fn check_modulus(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("modulus must be at least 2, got {n}")));
    }
    Ok(())
}

/// `A(g)`, `B(g)` and `C(g) = B(g)/A(g)`, the layer at `v(g)`.
pub fn abc(g: &GroupTerm, x: &GroupElement) -> Result<Invariants> {
    let p = leading(x)?;
    let chain = g.chain();
    let a = chain.canon(&Cut::Plus(p.clone()))?;
    let b = chain.canon(&Cut::Minus(p.clone()))?;
    let c = Section {
        term: Some(GroupTerm::lex(vec![g.block_at(p).clone()])?),
        above: a.clone(),
        below: b.clone(),
    };
    Ok(Invariants { a, b, c })
}

/// `A_n(g)`, `B_n(g)` and `C_n(g)`. A quotient of a convex section is
/// n-regular iff every layer except a maximal one is n-divisible, so both
/// bounds move through n-divisible layers away from `v(g)`.
pub fn abc_n(g: &GroupTerm, x: &GroupElement, n: u64) -> Result<Invariants> {
    check_modulus(n)?;
    let p = leading(x)?;
    let chain = g.chain();
    let div = |atom: usize| g.block(atom).divisible_by(n);

    let a = if !div(p.atom) {
        chain.canon(&Cut::Plus(p.clone()))?
    } else {
        match (p.atom + 1..=chain.len()).find(|&k| !div(k)) {
            None => Cut::Nothing,
            Some(k) => match chain.atom_min(k) {
                Some(m) => chain.canon(&Cut::Plus(m))?,
                None => chain.canon(&Cut::AtomBoundary(k))?,
            },
        }
    };

    let at_atom_min = chain.atom_min(p.atom).as_ref() == Some(p);
    let b = if !at_atom_min && !div(p.atom) {
        chain.canon(&Cut::Minus(p.clone()))?
    } else {
        match (1..p.atom).rev().find(|&j| !div(j)) {
            None => Cut::Everything,
            Some(j) => chain.canon(&Cut::AtomBoundary(j + 1))?,
        }
    };
    let c = Section::new(g, b.clone(), a.clone());
    Ok(Invariants { a, b, c })
}

/// `F_n(g)`; `None` stands for the empty set assigned to `g ∈ nG`. A convex
/// subgroup misses `g + nG` iff some entry of `g` outside it is not in the
/// matching multiple, so the union is cut just above the least such entry.
pub fn f_n(g: &GroupTerm, x: &GroupElement, n: u64) -> Result<Option<Cut>> {
    check_modulus(n)?;
    let bad = x
        .entries()
        .iter()
        .find(|(p, q)| !g.block_at(p).in_multiple(q, n));
    match bad {
        None => Ok(None),
        Some((p, _)) => Ok(Some(g.chain().canon(&Cut::Plus(p.clone()))?)),
    }
}

/// Inclusion of `F_n` values, the empty set lying below everything.
pub fn f_subset(g: &GroupTerm, a: &Option<Cut>, b: &Option<Cut>) -> bool {
    match (a, b) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => g.chain().cut_subset(a, b),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EMembership {
    /// `h ∈ E_n(g)`
    pub in_e: bool,
    /// `h ∈ E_n*(g)`
    pub in_e_star: bool,
}

pub fn e_n(g: &GroupTerm, x: &GroupElement, h: &GroupElement, n: u64) -> Result<EMembership> {
    let fx = f_n(g, x, n)?;
    if fx.is_none() {
        return Err(Error::Domain(format!("{x} lies in {n}G")));
    }
    let fh = f_n(g, h, n)?;
    let in_e = f_subset(g, &fh, &fx);
    Ok(EMembership { in_e, in_e_star: in_e && fh != fx })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{ArchComponent::*, Rational};
    use crate::orders::{Locator, OrderTerm};

    fn at(i: usize) -> Point {
        Point::new(i, Locator::Fin(0))
    }

    fn el(g: &GroupTerm, es: &[(usize, Rational)]) -> GroupElement {
        GroupElement::new(g, es.iter().map(|(i, q)| (at(*i), *q)).collect()).unwrap()
    }

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn upper2(g: &GroupTerm) -> Cut {
        g.chain().canon(&Cut::AtomBoundary(2)).unwrap()
    }

    #[test]
    fn leading_layer_invariants() {
        let g = GroupTerm::lex(vec![Z, Q]).unwrap();
        let i = abc(&g, &el(&g, &[(1, r(1))])).unwrap();
        assert_eq!((i.a, i.b), (upper2(&g), Cut::Everything));
        assert_eq!(i.c.to_string(), "lex(Z)");
        let i = abc(&g, &el(&g, &[(2, Rational::new(1, 3))])).unwrap();
        assert_eq!((i.a, i.b), (Cut::Nothing, upper2(&g)));
        assert_eq!(i.c.to_string(), "lex(Q)");
        assert!(abc(&g, &GroupElement::zero()).is_err());
    }

    #[test]
    fn omega_index_layers() {
        let g = GroupTerm::new(OrderTerm::Omega, vec![Z]).unwrap();
        let k = Point::new(1, Locator::Omega(4));
        let x = GroupElement::new(&g, vec![(k.clone(), r(1))]).unwrap();
        let i = abc(&g, &x).unwrap();
        assert_eq!(i.a, Cut::Minus(Point::new(1, Locator::Omega(5))));
        assert_eq!(i.b, Cut::Minus(k));
    }

    #[test]
    fn regular_hulls() {
        let g = GroupTerm::lex(vec![Z, ArchComponent::local(2)]).unwrap();
        let i = abc_n(&g, &el(&g, &[(1, r(1))]), 2).unwrap();
        assert_eq!((i.a, i.b), (upper2(&g), Cut::Everything));
        assert_eq!(i.c.to_string(), "lex(Z)");

        let g = GroupTerm::lex(vec![Z]).unwrap();
        let i = abc_n(&g, &el(&g, &[(1, r(1))]), 2).unwrap();
        assert_eq!((i.a, i.b), (Cut::Nothing, Cut::Everything));

        let g = GroupTerm::lex(vec![Q, Q]).unwrap();
        let i = abc_n(&g, &el(&g, &[(1, r(1))]), 2).unwrap();
        assert_eq!((i.a, i.b), (Cut::Nothing, Cut::Everything));
        assert_eq!(i.c.to_string(), "lex(Q, Q)");
    }

    #[test]
    fn residue_avoiding_union() {
        let g = GroupTerm::lex(vec![Z, ArchComponent::local(2)]).unwrap();
        assert_eq!(f_n(&g, &el(&g, &[(1, r(1)), (2, r(1))]), 2).unwrap(), Some(upper2(&g)));
        assert_eq!(f_n(&g, &el(&g, &[(1, r(1)), (2, r(2))]), 2).unwrap(), Some(upper2(&g)));
        assert_eq!(f_n(&g, &el(&g, &[(2, r(1))]), 2).unwrap(), Some(Cut::Nothing));
        let zz = GroupTerm::lex(vec![Z, Z]).unwrap();
        assert_eq!(f_n(&zz, &el(&zz, &[(2, r(4))]), 2).unwrap(), None);
        assert!(f_n(&zz, &el(&zz, &[(2, r(4))]), 1).is_err());
    }

    #[test]
    fn e_membership() {
        let g = GroupTerm::lex(vec![Z, ArchComponent::local(2)]).unwrap();
        let x = el(&g, &[(1, r(1))]);
        let h = el(&g, &[(2, r(1))]);
        let m = |a: &GroupElement, b: &GroupElement| e_n(&g, a, b, 2).unwrap();
        assert_eq!(m(&x, &h), EMembership { in_e: true, in_e_star: true });
        assert_eq!(m(&x, &x), EMembership { in_e: true, in_e_star: false });
        assert_eq!(m(&h, &x), EMembership { in_e: false, in_e_star: false });
        assert!(e_n(&g, &el(&g, &[(1, r(2))]), &x, 2).is_err());
    }
}
