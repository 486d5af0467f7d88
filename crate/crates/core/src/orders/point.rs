//! Points of a term and their position in the canonical model.

use std::cmp::Ordering;
use std::fmt;

use super::term::OrderTerm;
use crate::error::{Error, Result};

/// A point of a dense atom: an endpoint or an interior point named by an
/// integer label (labels are ordered like the rationals they stand for).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DensePoint {
    Min,
    At(i64),
    Max,
}

impl DensePoint {
    pub(crate) fn key(self) -> i128 {
        match self {
            DensePoint::Min => i128::MIN / 2,
            DensePoint::At(l) => l as i128,
            DensePoint::Max => i128::MAX / 2,
        }
    }

    /// Interior label, or 0 for an endpoint.
    pub(crate) fn label(self) -> i64 {
        match self {
            DensePoint::At(l) => l,
            _ => 0,
        }
    }
}

impl fmt::Display for DensePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensePoint::Min => write!(f, "min"),
            DensePoint::Max => write!(f, "max"),
            DensePoint::At(l) => write!(f, "{l}"),
        }
    }
}

/// Position of a point inside its atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Locator {
    Fin(u64),
    Omega(u64),
    /// Offset from the right end.
    OmegaStar(u64),
    Zeta(i64),
    Dense(DensePoint),
    /// Base point of the replicated atom and a point of the summand.
    Repl(DensePoint, Box<Point>),
}

/// A point of a term: 1-based atom index plus in-atom locator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub atom: usize,
    pub loc: Locator,
}

impl Point {
    pub fn new(atom: usize, loc: Locator) -> Self {
        Point { atom, loc }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.atom)?;
        match &self.loc {
            Locator::Fin(k) | Locator::Omega(k) | Locator::OmegaStar(k) => write!(f, "{k}"),
            Locator::Zeta(z) => write!(f, "{z}"),
            Locator::Dense(d) => write!(f, "{d}"),
            Locator::Repl(b, inner) => write!(f, "{b}{{{inner}}}"),
        }
    }
}

/// The flattened atoms of a term, with point-level navigation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    atoms: Vec<OrderTerm>,
}

impl Chain {
    pub fn new(t: &OrderTerm) -> Self {
        Chain { atoms: t.atoms() }
    }

    pub fn from_atoms(atoms: Vec<OrderTerm>) -> Self {
        Chain { atoms }
    }

    pub fn atoms(&self) -> &[OrderTerm] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn term(&self) -> OrderTerm {
        match self.atoms.len() {
            0 => OrderTerm::Empty,
            1 => self.atoms[0].clone(),
            _ => OrderTerm::Sum(self.atoms.clone()),
        }
    }

    /// Atom by 1-based index.
    pub fn atom(&self, i: usize) -> Option<&OrderTerm> {
        i.checked_sub(1).and_then(|j| self.atoms.get(j))
    }

    pub fn validate(&self, p: &Point) -> Result<()> {
        let atom = self
            .atom(p.atom)
            .ok_or_else(|| Error::Point(format!("atom index {} out of range", p.atom)))?;
        validate_loc(atom, &p.loc).map_err(|e| Error::Point(format!("{p}: {e}")))
    }

    pub fn atom_min(&self, i: usize) -> Option<Point> {
        atom_min_loc(self.atom(i)?).map(|loc| Point::new(i, loc))
    }

    pub fn atom_max(&self, i: usize) -> Option<Point> {
        atom_max_loc(self.atom(i)?).map(|loc| Point::new(i, loc))
    }

    pub fn min(&self) -> Option<Point> {
        if self.is_empty() {
            None
        } else {
            self.atom_min(1)
        }
    }

    pub fn max(&self) -> Option<Point> {
        self.atom_max(self.len())
    }

    pub fn succ(&self, p: &Point) -> Option<Point> {
        let atom = self.atom(p.atom)?;
        if let Some(loc) = succ_within(atom, &p.loc) {
            return Some(Point::new(p.atom, loc));
        }
        if self.atom_max(p.atom).as_ref() == Some(p) {
            return self.atom_min(p.atom + 1);
        }
        None
    }

    pub fn pred(&self, p: &Point) -> Option<Point> {
        let atom = self.atom(p.atom)?;
        if let Some(loc) = pred_within(atom, &p.loc) {
            return Some(Point::new(p.atom, loc));
        }
        if p.atom > 1 && self.atom_min(p.atom).as_ref() == Some(p) {
            return self.atom_max(p.atom - 1);
        }
        None
    }

    pub fn cmp_points(&self, a: &Point, b: &Point) -> Ordering {
        point_key(a).cmp(&point_key(b))
    }

    /// Enumerate every point of a finite chain in increasing order.
    pub fn finite_points(&self) -> Result<Vec<Point>> {
        let mut out = Vec::new();
        for (j, atom) in self.atoms.iter().enumerate() {
            match atom {
                OrderTerm::Fin(n) => out.extend((0..*n).map(|k| Point::new(j + 1, Locator::Fin(k)))),
                other => {
                    return Err(Error::Scope(format!("atom {other} has infinitely many points")))
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn point_key(p: &Point) -> Vec<i128> {
    let mut key = vec![p.atom as i128];
    loc_key(&p.loc, &mut key);
    key
}

fn loc_key(loc: &Locator, key: &mut Vec<i128>) {
    match loc {
        Locator::Fin(k) | Locator::Omega(k) => key.push(*k as i128),
        Locator::OmegaStar(k) => key.push(-(*k as i128)),
        Locator::Zeta(z) => key.push(*z as i128),
        Locator::Dense(d) => key.push(d.key()),
        Locator::Repl(b, inner) => {
            key.push(b.key());
            key.extend(point_key(inner));
        }
    }
}

fn validate_loc(atom: &OrderTerm, loc: &Locator) -> std::result::Result<(), String> {
    match (atom, loc) {
        (OrderTerm::Fin(n), Locator::Fin(k)) if k < n => Ok(()),
        (OrderTerm::Fin(n), Locator::Fin(k)) => Err(format!("offset {k} outside fin({n})")),
        (OrderTerm::Omega, Locator::Omega(_)) => Ok(()),
        (OrderTerm::OmegaStar, Locator::OmegaStar(_)) => Ok(()),
        (OrderTerm::Zeta, Locator::Zeta(_)) => Ok(()),
        (OrderTerm::Dense { .. }, Locator::Dense(d)) => validate_dense(atom, *d),
        (OrderTerm::Repl { base, summand }, Locator::Repl(b, inner)) => {
            validate_dense(base, *b)?;
            Chain::new(summand).validate(inner).map_err(|e| e.to_string())
        }
        (a, l) => Err(format!("locator {l:?} does not match atom {a}")),
    }
}

fn validate_dense(atom: &OrderTerm, d: DensePoint) -> std::result::Result<(), String> {
    let OrderTerm::Dense { has_min, has_max } = atom else {
        return Err(format!("{atom} is not dense"));
    };
    match d {
        DensePoint::Min if !has_min => Err("dense atom has no minimum".into()),
        DensePoint::Max if !has_max => Err("dense atom has no maximum".into()),
        _ => Ok(()),
    }
}

pub(crate) fn atom_min_loc(atom: &OrderTerm) -> Option<Locator> {
    match atom {
        OrderTerm::Fin(n) if *n > 0 => Some(Locator::Fin(0)),
        OrderTerm::Omega => Some(Locator::Omega(0)),
        OrderTerm::Dense { has_min: true, .. } => Some(Locator::Dense(DensePoint::Min)),
        OrderTerm::Repl { base, summand } if base.atom_has_min() => {
            Chain::new(summand).min().map(|q| Locator::Repl(DensePoint::Min, Box::new(q)))
        }
        _ => None,
    }
}

pub(crate) fn atom_max_loc(atom: &OrderTerm) -> Option<Locator> {
    match atom {
        OrderTerm::Fin(n) if *n > 0 => Some(Locator::Fin(n - 1)),
        OrderTerm::OmegaStar => Some(Locator::OmegaStar(0)),
        OrderTerm::Dense { has_max: true, .. } => Some(Locator::Dense(DensePoint::Max)),
        OrderTerm::Repl { base, summand } if base.atom_has_max() => {
            Chain::new(summand).max().map(|q| Locator::Repl(DensePoint::Max, Box::new(q)))
        }
        _ => None,
    }
}

fn succ_within(atom: &OrderTerm, loc: &Locator) -> Option<Locator> {
    match (atom, loc) {
        (OrderTerm::Fin(n), Locator::Fin(k)) if k + 1 < *n => Some(Locator::Fin(k + 1)),
        (OrderTerm::Omega, Locator::Omega(k)) => Some(Locator::Omega(k + 1)),
        (OrderTerm::OmegaStar, Locator::OmegaStar(k)) if *k > 0 => Some(Locator::OmegaStar(k - 1)),
        (OrderTerm::Zeta, Locator::Zeta(z)) => Some(Locator::Zeta(z + 1)),
        (OrderTerm::Repl { summand, .. }, Locator::Repl(b, q)) => Chain::new(summand)
            .succ(q)
            .map(|q2| Locator::Repl(*b, Box::new(q2))),
        _ => None,
    }
}

fn pred_within(atom: &OrderTerm, loc: &Locator) -> Option<Locator> {
    match (atom, loc) {
        (OrderTerm::Fin(_), Locator::Fin(k)) if *k > 0 => Some(Locator::Fin(k - 1)),
        (OrderTerm::Omega, Locator::Omega(k)) if *k > 0 => Some(Locator::Omega(k - 1)),
        (OrderTerm::OmegaStar, Locator::OmegaStar(k)) => Some(Locator::OmegaStar(k + 1)),
        (OrderTerm::Zeta, Locator::Zeta(z)) => Some(Locator::Zeta(z - 1)),
        (OrderTerm::Repl { summand, .. }, Locator::Repl(b, q)) => Chain::new(summand)
            .pred(q)
            .map(|q2| Locator::Repl(*b, Box::new(q2))),
        _ => None,
    }
}
