//! Cuts (final segments) of a term.
//!
//! A cut is named by its upper part. Every designator has a canonical form,
//! so two designators denote the same final segment iff their canonical
//! forms are equal: principal `Minus` is preferred over `Plus`, and atom
//! boundaries are rewritten into principal form whenever an adjacent
//! endpoint exists.

use std::cmp::Ordering;
use std::fmt;

use super::point::{point_key, Chain, DensePoint, Locator, Point};
use super::term::OrderTerm;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cut {
    /// The whole order.
    Everything,
    /// The empty final segment.
    Nothing,
    /// `{x | x >= p}`
    Minus(Point),
    /// `{x | x > p}`
    Plus(Point),
    /// Upper part starts at the given 1-based atom.
    AtomBoundary(usize),
    /// An irrational gap of a dense atom (or of the base of a replicated
    /// atom) lying just above the named label.
    DenseGap(usize, i64),
    /// A cut inside the fibre over a base point of a replicated atom.
    Fibre(usize, DensePoint, Box<Cut>),
}

impl Cut {
    pub fn is_principal(&self) -> bool {
        matches!(self, Cut::Minus(_) | Cut::Plus(_))
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::Everything => write!(f, "all"),
            Cut::Nothing => write!(f, "zero"),
            Cut::Minus(p) => write!(f, "minus({p})"),
            Cut::Plus(p) => write!(f, "plus({p})"),
            Cut::AtomBoundary(i) => write!(f, "upper({i})"),
            Cut::DenseGap(i, l) => write!(f, "gap({i}:{l})"),
            Cut::Fibre(i, b, inner) => write!(f, "fibre({i}:{b}; {inner})"),
        }
    }
}

/// Where the lower or upper part of a cut ends: the atom holding its
/// cofinal (resp. coinitial) part and whether that part has an endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Side {
    pub atom: usize,
    pub extremal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutProfile {
    /// `None` when the lower part is empty; `extremal` = has a maximum.
    pub lower: Option<Side>,
    /// `None` when the upper part is empty; `extremal` = has a minimum.
    pub upper: Option<Side>,
}

impl Chain {
    /// Canonical form of a cut; validates every point it mentions.
    pub fn canon(&self, cut: &Cut) -> Result<Cut> {
        match cut {
            Cut::Everything | Cut::Nothing => Ok(cut.clone()),
            Cut::Minus(p) => {
                self.validate(p)?;
                if self.min().as_ref() == Some(p) {
                    Ok(Cut::Everything)
                } else {
                    Ok(cut.clone())
                }
            }
            Cut::Plus(p) => {
                self.validate(p)?;
                if let Some(q) = self.succ(p) {
                    Ok(Cut::Minus(q))
                } else if self.max().as_ref() == Some(p) {
                    Ok(Cut::Nothing)
                } else {
                    Ok(cut.clone())
                }
            }
            Cut::AtomBoundary(i) => {
                let i = *i;
                if i == 0 || i > self.len() + 1 {
                    return Err(Error::Designator(format!("atom boundary {i} out of range")));
                }
                if i == 1 {
                    return Ok(Cut::Everything);
                }
                if i == self.len() + 1 {
                    return Ok(Cut::Nothing);
                }
                if let Some(m) = self.atom_min(i) {
                    return self.canon(&Cut::Minus(m));
                }
                if let Some(m) = self.atom_max(i - 1) {
                    return self.canon(&Cut::Plus(m));
                }
                Ok(Cut::AtomBoundary(i))
            }
            Cut::DenseGap(i, _) => match self.atom(*i) {
                Some(OrderTerm::Dense { .. } | OrderTerm::Repl { .. }) => Ok(cut.clone()),
                _ => Err(Error::Designator(format!("atom {i} has no dense gaps"))),
            },
            Cut::Fibre(i, b, inner) => {
                let Some(OrderTerm::Repl { base, summand }) = self.atom(*i) else {
                    return Err(Error::Designator(format!("atom {i} is not replicated")));
                };
                Chain::new(base).validate(&Point::new(1, Locator::Dense(*b)))?;
                let fibre = Chain::new(summand);
                let lift = |q: Point| Point::new(*i, Locator::Repl(*b, Box::new(q)));
                match fibre.canon(inner)? {
                    Cut::Everything => match fibre.min() {
                        Some(q) => self.canon(&Cut::Minus(lift(q))),
                        None if *b == DensePoint::Min => self.canon(&Cut::AtomBoundary(*i)),
                        None => Ok(Cut::Fibre(*i, *b, Box::new(Cut::Everything))),
                    },
                    Cut::Nothing => match fibre.max() {
                        Some(q) => self.canon(&Cut::Plus(lift(q))),
                        None if *b == DensePoint::Max => self.canon(&Cut::AtomBoundary(i + 1)),
                        None => Ok(Cut::Fibre(*i, *b, Box::new(Cut::Nothing))),
                    },
                    Cut::Minus(q) => self.canon(&Cut::Minus(lift(q))),
                    Cut::Plus(q) => self.canon(&Cut::Plus(lift(q))),
                    other => Ok(Cut::Fibre(*i, *b, Box::new(other))),
                }
            }
        }
    }

    /// Membership of a point in the upper part of a cut.
    pub fn contains(&self, cut: &Cut, p: &Point) -> bool {
        match cut {
            Cut::Everything => true,
            Cut::Nothing => false,
            Cut::Minus(q) => point_key(p) >= point_key(q),
            Cut::Plus(q) => point_key(p) > point_key(q),
            Cut::AtomBoundary(i) => p.atom >= *i,
            Cut::DenseGap(i, l) => p.atom > *i || (p.atom == *i && base_key(&p.loc) > *l as i128),
            Cut::Fibre(i, b, inner) => {
                if p.atom != *i {
                    return p.atom > *i;
                }
                let Locator::Repl(pb, q) = &p.loc else { return false };
                match pb.key().cmp(&b.key()) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => match self.atom(*i) {
                        Some(OrderTerm::Repl { summand, .. }) => Chain::new(summand).contains(inner, q),
                        _ => false,
                    },
                }
            }
        }
    }

    /// Inclusion order on final segments: `Less` means the upper part of `a`
    /// is strictly larger than that of `b`. Both cuts must be canonical.
    pub fn cmp_cuts(&self, a: &Cut, b: &Cut) -> Ordering {
        cut_key(a).cmp(&cut_key(b))
    }

    /// Upper part of `a` is contained in the upper part of `b`.
    pub fn cut_subset(&self, a: &Cut, b: &Cut) -> bool {
        self.cmp_cuts(a, b) != Ordering::Less
    }

    /// Endpoint structure of both parts of a canonical cut.
    pub fn profile(&self, cut: &Cut) -> CutProfile {
        let n = self.len();
        match cut {
            Cut::Everything => CutProfile {
                lower: None,
                upper: (n > 0).then(|| Side { atom: 1, extremal: self.min().is_some() }),
            },
            Cut::Nothing => CutProfile {
                lower: (n > 0).then(|| Side { atom: n, extremal: self.max().is_some() }),
                upper: None,
            },
            Cut::Minus(p) => {
                let lower = if self.atom_min(p.atom).as_ref() == Some(p) {
                    (p.atom > 1).then(|| Side {
                        atom: p.atom - 1,
                        extremal: self.atom_max(p.atom - 1).is_some(),
                    })
                } else {
                    Some(Side { atom: p.atom, extremal: self.pred(p).is_some() })
                };
                CutProfile { lower, upper: Some(Side { atom: p.atom, extremal: true }) }
            }
            Cut::Plus(p) => {
                let upper = if self.atom_max(p.atom).as_ref() == Some(p) {
                    (p.atom < n).then(|| Side {
                        atom: p.atom + 1,
                        extremal: self.atom_min(p.atom + 1).is_some(),
                    })
                } else {
                    Some(Side { atom: p.atom, extremal: self.succ(p).is_some() })
                };
                CutProfile { lower: Some(Side { atom: p.atom, extremal: true }), upper }
            }
            Cut::AtomBoundary(i) => CutProfile {
                lower: Some(Side { atom: i - 1, extremal: self.atom_max(i - 1).is_some() }),
                upper: Some(Side { atom: *i, extremal: self.atom_min(*i).is_some() }),
            },
            Cut::DenseGap(i, _) => CutProfile {
                lower: Some(Side { atom: *i, extremal: false }),
                upper: Some(Side { atom: *i, extremal: false }),
            },
            Cut::Fibre(i, _, inner) => {
                let inner_profile = match self.atom(*i) {
                    Some(OrderTerm::Repl { summand, .. }) => Chain::new(summand).profile(inner),
                    _ => CutProfile { lower: None, upper: None },
                };
                CutProfile {
                    lower: Some(Side {
                        atom: *i,
                        extremal: inner_profile.lower.is_some_and(|s| s.extremal),
                    }),
                    upper: Some(Side {
                        atom: *i,
                        extremal: inner_profile.upper.is_some_and(|s| s.extremal),
                    }),
                }
            }
        }
    }

    /// Atoms of the lower part of a canonical cut, each tagged with the
    /// index of the atom it was cut from.
    pub fn lower_atoms(&self, cut: &Cut) -> Vec<(usize, OrderTerm)> {
        let whole = |upto: usize| -> Vec<(usize, OrderTerm)> {
            self.atoms()
                .iter()
                .take(upto)
                .enumerate()
                .map(|(j, a)| (j + 1, a.clone()))
                .collect()
        };
        let mut out = match cut {
            Cut::Everything => Vec::new(),
            Cut::Nothing => whole(self.len()),
            Cut::AtomBoundary(i) => whole(i - 1),
            Cut::Minus(p) | Cut::Plus(p) => whole(p.atom - 1),
            Cut::DenseGap(i, _) | Cut::Fibre(i, ..) => whole(i - 1),
        };
        match cut {
            Cut::Minus(p) | Cut::Plus(p) => {
                let inclusive = matches!(cut, Cut::Plus(_));
                let atom = &self.atoms()[p.atom - 1];
                out.extend(truncate_lower(atom, &p.loc, inclusive).into_iter().map(|a| (p.atom, a)));
            }
            Cut::DenseGap(i, _) => match &self.atoms()[i - 1] {
                OrderTerm::Dense { has_min, .. } => {
                    out.push((*i, OrderTerm::Dense { has_min: *has_min, has_max: false }))
                }
                OrderTerm::Repl { base, summand } => out.push((
                    *i,
                    OrderTerm::Repl {
                        base: Box::new(open_above(base)),
                        summand: summand.clone(),
                    },
                )),
                _ => {}
            },
            Cut::Fibre(i, b, inner) => {
                if let OrderTerm::Repl { base, summand } = &self.atoms()[i - 1] {
                    if *b != DensePoint::Min {
                        out.push((
                            *i,
                            OrderTerm::Repl { base: Box::new(open_above(base)), summand: summand.clone() },
                        ));
                    }
                    let fibre = Chain::new(summand);
                    out.extend(fibre.lower_atoms(inner).into_iter().map(|(_, a)| (*i, a)));
                }
            }
            _ => {}
        }
        out.retain(|(_, a)| !matches!(a, OrderTerm::Empty | OrderTerm::Fin(0)));
        out
    }
}

fn open_above(base: &OrderTerm) -> OrderTerm {
    match base {
        OrderTerm::Dense { has_min, .. } => OrderTerm::Dense { has_min: *has_min, has_max: false },
        other => other.clone(),
    }
}

fn truncate_lower(atom: &OrderTerm, loc: &Locator, inclusive: bool) -> Vec<OrderTerm> {
    let inc = inclusive as u64;
    match (atom, loc) {
        (OrderTerm::Fin(_), Locator::Fin(k)) | (OrderTerm::Omega, Locator::Omega(k)) => {
            vec![OrderTerm::Fin(k + inc)]
        }
        (OrderTerm::OmegaStar, _) | (OrderTerm::Zeta, _) => vec![OrderTerm::OmegaStar],
        (OrderTerm::Dense { has_min, .. }, Locator::Dense(d)) => match d {
            DensePoint::Min if inclusive => vec![OrderTerm::Fin(1)],
            DensePoint::Min => vec![],
            _ => vec![OrderTerm::Dense { has_min: *has_min, has_max: inclusive }],
        },
        (OrderTerm::Repl { base, summand }, Locator::Repl(b, q)) => {
            let mut out = Vec::new();
            if *b != DensePoint::Min {
                out.push(OrderTerm::Repl { base: Box::new(open_above(base)), summand: summand.clone() });
            }
            let fibre = Chain::new(summand);
            let cut = if inclusive { Cut::Plus((**q).clone()) } else { Cut::Minus((**q).clone()) };
            let cut = fibre.canon(&cut).unwrap_or(cut);
            out.extend(fibre.lower_atoms(&cut).into_iter().map(|(_, a)| a));
            out
        }
        _ => vec![],
    }
}

fn base_key(loc: &Locator) -> i128 {
    match loc {
        Locator::Dense(d) | Locator::Repl(d, _) => d.key(),
        _ => 0,
    }
}

pub(crate) fn cut_key(cut: &Cut) -> Vec<i128> {
    match cut {
        Cut::Everything => vec![i128::MIN],
        Cut::Nothing => vec![i128::MAX],
        Cut::Minus(p) => {
            let mut k = point_key(p);
            k.push(0);
            k
        }
        Cut::Plus(p) => {
            let mut k = point_key(p);
            k.push(2);
            k
        }
        Cut::AtomBoundary(i) => vec![*i as i128, i128::MIN],
        Cut::DenseGap(i, l) => vec![*i as i128, *l as i128, i128::MAX, 1],
        Cut::Fibre(i, b, inner) => {
            let mut k = vec![*i as i128, b.key()];
            k.extend(cut_key(inner));
            k
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin_point(atom: usize, k: u64) -> Point {
        Point::new(atom, Locator::Fin(k))
    }

    #[test]
    fn canonical_forms_identify_equal_segments() {
        let c = Chain::new(&OrderTerm::sum([OrderTerm::Fin(1), OrderTerm::Fin(1)]));
        assert_eq!(c.canon(&Cut::AtomBoundary(2)).unwrap(), Cut::Minus(fin_point(2, 0)));
        assert_eq!(c.canon(&Cut::Plus(fin_point(1, 0))).unwrap(), Cut::Minus(fin_point(2, 0)));
        assert_eq!(c.canon(&Cut::Plus(fin_point(2, 0))).unwrap(), Cut::Nothing);
        assert_eq!(c.canon(&Cut::Minus(fin_point(1, 0))).unwrap(), Cut::Everything);
    }

    #[test]
    fn non_principal_boundary_survives() {
        let c = Chain::new(&OrderTerm::sum([OrderTerm::dense(), OrderTerm::Zeta]));
        assert_eq!(c.canon(&Cut::AtomBoundary(2)).unwrap(), Cut::AtomBoundary(2));
        let prof = c.profile(&Cut::AtomBoundary(2));
        assert_eq!(prof.lower, Some(Side { atom: 1, extremal: false }));
        assert_eq!(prof.upper, Some(Side { atom: 2, extremal: false }));
    }

    #[test]
    fn gap_sits_between_named_points() {
        let c = Chain::new(&OrderTerm::dense());
        let at = |l| Point::new(1, Locator::Dense(DensePoint::At(l)));
        let gap = Cut::DenseGap(1, 0);
        assert!(c.cmp_cuts(&Cut::Plus(at(0)), &gap) == Ordering::Less);
        assert!(c.cmp_cuts(&gap, &Cut::Minus(at(1))) == Ordering::Less);
        assert!(c.contains(&gap, &at(1)));
        assert!(!c.contains(&gap, &at(0)));
    }

    #[test]
    fn lower_atoms_truncate_the_cut_atom() {
        let c = Chain::new(&OrderTerm::sum([OrderTerm::Omega, OrderTerm::Fin(3)]));
        let cut = Cut::Minus(fin_point(2, 2));
        assert_eq!(
            c.lower_atoms(&cut),
            vec![(1, OrderTerm::Omega), (2, OrderTerm::Fin(2))]
        );
    }

    #[test]
    fn fibre_cuts_collapse_to_principal_when_possible() {
        let t = OrderTerm::repl(OrderTerm::dense(), OrderTerm::Omega);
        let c = Chain::new(&t);
        let cut = Cut::Fibre(1, DensePoint::At(0), Box::new(Cut::Everything));
        let first = Point::new(1, Locator::Repl(DensePoint::At(0), Box::new(Point::new(1, Locator::Omega(0)))));
        assert_eq!(c.canon(&cut).unwrap(), Cut::Minus(first));
        let end = Cut::Fibre(1, DensePoint::At(0), Box::new(Cut::Nothing));
        assert_eq!(c.canon(&end).unwrap(), end);
    }
}
