//! Finite-support elements of a Hahn sum.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{CheckedAdd, CheckedMul, Signed, Zero};

use super::arch::Rational;
use super::term::GroupTerm;
use crate::error::{Error, Result};
use crate::orders::Point;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    entries: Vec<(Point, Rational)>,
}

impl GroupElement {
    pub fn zero() -> Self {
        GroupElement { entries: Vec::new() }
    }

    /// Validates points and admissibility; sorts entries, merges repeated
    /// points and drops zero values.
    pub fn new(g: &GroupTerm, entries: Vec<(Point, Rational)>) -> Result<Self> {
        let chain = g.chain();
        for (p, q) in &entries {
            chain.validate(p)?;
            if !g.block_at(p).admits(q) {
                return Err(Error::Domain(format!("{q} is not an element of {}", g.block_at(p))));
            }
        }
        let mut sorted = entries;
        sorted.sort_by(|a, b| chain.cmp_points(&a.0, &b.0));
        let mut out: Vec<(Point, Rational)> = Vec::new();
        for (p, q) in sorted {
            match out.last_mut() {
                Some((lp, lq)) if *lp == p => *lq = checked_add(lq, &q)?,
                _ => out.push((p, q)),
            }
        }
        out.retain(|(_, q)| !q.is_zero());
        Ok(GroupElement { entries: out })
    }

    /// The element with a single entry.
    pub fn single(p: Point, q: Rational) -> Self {
        if q.is_zero() {
            return GroupElement::zero();
        }
        GroupElement { entries: vec![(p, q)] }
    }

    pub fn entries(&self) -> &[(Point, Rational)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, g: &GroupTerm, other: &GroupElement) -> Result<GroupElement> {
        let mut all = self.entries.clone();
        all.extend(other.entries.iter().cloned());
        GroupElement::new(g, all)
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement { entries: self.entries.iter().map(|(p, q)| (p.clone(), -q)).collect() }
    }

    pub fn sub(&self, g: &GroupTerm, other: &GroupElement) -> Result<GroupElement> {
        self.add(g, &other.neg())
    }

    /// Sign of the leading entry.
    pub fn signum(&self) -> Ordering {
        match self.entries.first() {
            None => Ordering::Equal,
            Some((_, q)) => q.cmp(&Rational::zero()),
        }
    }

    pub fn cmp(&self, g: &GroupTerm, other: &GroupElement) -> Result<Ordering> {
        Ok(self.sub(g, other)?.signum())
    }

    pub fn is_negative(&self) -> bool {
        self.entries.first().is_some_and(|(_, q)| q.is_negative())
    }

    pub fn abs(&self) -> GroupElement {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Natural valuation: the least point of the support.
    pub fn v(&self) -> Result<&Point> {
        self.entries.first().map(|(p, _)| p).ok_or(Error::ValuationOfZero)
    }

    pub fn scale(&self, n: i64) -> Result<GroupElement> {
        let n = Rational::from_integer(n);
        let mut entries = Vec::with_capacity(self.entries.len());
        for (p, q) in &self.entries {
            let v = q.checked_mul(&n).ok_or_else(overflow)?;
            if !v.is_zero() {
                entries.push((p.clone(), v));
            }
        }
        Ok(GroupElement { entries })
    }

    /// `g ∈ nG`.
    pub fn in_n_g(&self, g: &GroupTerm, n: u64) -> bool {
        self.entries.iter().all(|(p, q)| g.block_at(p).in_multiple(q, n))
    }

    /// Same archimedean class.
    pub fn arch_equiv(&self, other: &GroupElement) -> bool {
        match (self.v(), other.v()) {
            (Ok(a), Ok(b)) => a == b,
            (Err(_), Err(_)) => true,
            _ => false,
        }
    }
}

fn overflow() -> Error {
    Error::Domain("rational arithmetic overflow".into())
}

fn checked_add(a: &Rational, b: &Rational) -> Result<Rational> {
    a.checked_add(b).ok_or_else(overflow)
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(p, q)| format!("{p} -> {}", format_rational(q)))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::arch::ArchComponent::{self, Q, Z};
    use crate::orders::Locator;

    fn at(i: usize) -> Point {
        Point::new(i, Locator::Fin(0))
    }

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn el(g: &GroupTerm, es: &[(usize, i64)]) -> GroupElement {
        GroupElement::new(g, es.iter().map(|&(i, q)| (at(i), r(q))).collect()).unwrap()
    }

    #[test]
    fn inverses_cancel() {
        let g = GroupTerm::lex(vec![Z, Z]).unwrap();
        assert!(el(&g, &[(1, 1)]).add(&g, &el(&g, &[(1, -1)])).unwrap().is_zero());
    }

    #[test]
    fn leading_index_dominates() {
        let g = GroupTerm::lex(vec![Z, Z]).unwrap();
        let a = el(&g, &[(1, 1), (2, -7)]);
        let b = el(&g, &[(2, 100)]);
        assert_eq!(a.cmp(&g, &b).unwrap(), Ordering::Greater);
        assert_eq!(el(&g, &[(1, -2)]).abs(), el(&g, &[(1, 2)]));
    }

    #[test]
    fn valuation_and_archimedean_classes() {
        let g = GroupTerm::lex(vec![Z, Z]).unwrap();
        assert_eq!(el(&g, &[(2, 5)]).v().unwrap(), &at(2));
        assert!(el(&g, &[(1, 1), (2, 9)]).arch_equiv(&el(&g, &[(1, -3)])));
        assert!(!el(&g, &[(1, 1)]).arch_equiv(&el(&g, &[(2, 1)])));
        assert_eq!(GroupElement::zero().v(), Err(Error::ValuationOfZero));
    }

    #[test]
    fn membership_in_multiples() {
        let g = GroupTerm::lex(vec![Z, ArchComponent::local(2)]).unwrap();
        assert!(!el(&g, &[(1, 1), (2, 1)]).in_n_g(&g, 2));
        assert!(el(&g, &[(2, 6)]).in_n_g(&g, 2));
    }

    #[test]
    fn inadmissible_denominators_are_rejected() {
        let g = GroupTerm::lex(vec![Z, Q]).unwrap();
        assert!(GroupElement::new(&g, vec![(at(1), Rational::new(1, 2))]).is_err());
        assert!(GroupElement::new(&g, vec![(at(2), Rational::new(1, 2))]).is_ok());
    }
}
