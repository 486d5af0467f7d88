//! Term language for linear orders.

use std::fmt;

use crate::error::{Error, Result};

/// A linear order written as a finite sum of atoms.
///
/// Atoms denote structures up to elementary equivalence: `Dense` is read as
/// a copy of the rationals (with the requested endpoints) and `Zeta` as the
/// integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrderTerm {
    Empty,
    Fin(u64),
    Omega,
    OmegaStar,
    Zeta,
    Dense { has_min: bool, has_max: bool },
    Sum(Vec<OrderTerm>),
    /// One copy of `summand` for every point of the dense `base`.
    Repl { base: Box<OrderTerm>, summand: Box<OrderTerm> },
}

impl OrderTerm {
    pub fn dense() -> Self {
        OrderTerm::Dense { has_min: false, has_max: false }
    }

    pub fn fin(n: u64) -> Self {
        OrderTerm::Fin(n)
    }

    pub fn sum(parts: impl IntoIterator<Item = OrderTerm>) -> Self {
        OrderTerm::Sum(parts.into_iter().collect())
    }

    pub fn repl(base: OrderTerm, summand: OrderTerm) -> Self {
        OrderTerm::Repl { base: Box::new(base), summand: Box::new(summand) }
    }

    pub fn is_atom(&self) -> bool {
        !matches!(self, OrderTerm::Sum(_) | OrderTerm::Empty)
    }

    /// Flattened list of atoms, without merging neighbours.
    pub fn atoms(&self) -> Vec<OrderTerm> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<OrderTerm>) {
        match self {
            OrderTerm::Empty | OrderTerm::Fin(0) => {}
            OrderTerm::Sum(parts) => parts.iter().for_each(|p| p.collect_atoms(out)),
            other => out.push(other.clone()),
        }
    }

    /// Structural checks: Repl bases are dense atoms, Repl summands are
    /// Repl-free and non-empty.
    pub fn check(&self) -> Result<()> {
        match self {
            OrderTerm::Sum(parts) => parts.iter().try_for_each(OrderTerm::check),
            OrderTerm::Repl { base, summand } => {
                if !matches!(**base, OrderTerm::Dense { .. }) {
                    return Err(Error::Structure("repl base must be a dense atom".into()));
                }
                if summand.contains_repl() {
                    return Err(Error::Structure(
                        "repl nesting deeper than one level is not supported".into(),
                    ));
                }
                summand.check()
            }
            _ => Ok(()),
        }
    }

    fn contains_repl(&self) -> bool {
        match self {
            OrderTerm::Repl { .. } => true,
            OrderTerm::Sum(parts) => parts.iter().any(OrderTerm::contains_repl),
            _ => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.atoms().iter().all(|a| matches!(a, OrderTerm::Fin(_)))
    }

    /// Number of points when the term is finite.
    pub fn finite_len(&self) -> Option<u64> {
        self.atoms()
            .iter()
            .map(|a| match a {
                OrderTerm::Fin(n) => Some(*n),
                _ => None,
            })
            .sum()
    }

    pub fn atom_has_min(&self) -> bool {
        match self {
            OrderTerm::Fin(_) | OrderTerm::Omega => true,
            OrderTerm::OmegaStar | OrderTerm::Zeta => false,
            OrderTerm::Dense { has_min, .. } => *has_min,
            OrderTerm::Repl { base, summand } => base.atom_has_min() && summand.term_has_min(),
            OrderTerm::Sum(_) | OrderTerm::Empty => self.term_has_min(),
        }
    }

    pub fn atom_has_max(&self) -> bool {
        match self {
            OrderTerm::Fin(_) | OrderTerm::OmegaStar => true,
            OrderTerm::Omega | OrderTerm::Zeta => false,
            OrderTerm::Dense { has_max, .. } => *has_max,
            OrderTerm::Repl { base, summand } => base.atom_has_max() && summand.term_has_max(),
            OrderTerm::Sum(_) | OrderTerm::Empty => self.term_has_max(),
        }
    }

    pub fn term_has_min(&self) -> bool {
        self.atoms().first().is_some_and(OrderTerm::atom_has_min)
    }

    pub fn term_has_max(&self) -> bool {
        self.atoms().last().is_some_and(OrderTerm::atom_has_max)
    }
}

/// Flatten sums and merge adjacent atoms that denote a single atom.
pub fn normalize(t: &OrderTerm) -> Result<OrderTerm> {
    t.check()?;
    Ok(normalize_unchecked(t))
}

fn normalize_unchecked(t: &OrderTerm) -> OrderTerm {
    let mut out: Vec<OrderTerm> = Vec::new();
    for atom in t.atoms() {
        let atom = match atom {
            OrderTerm::Repl { base, summand } => {
                let summand = normalize_unchecked(&summand);
                match summand {
                    OrderTerm::Empty => continue,
                    // one point per base point is the base itself
                    OrderTerm::Fin(1) => *base,
                    s => OrderTerm::Repl { base, summand: Box::new(s) },
                }
            }
            a => a,
        };
        match out.last_mut().and_then(|prev| merge(prev, &atom)) {
            Some(merged) => *out.last_mut().unwrap() = merged,
            None => out.push(atom),
        }
    }
    match out.len() {
        0 => OrderTerm::Empty,
        1 => out.pop().unwrap(),
        _ => OrderTerm::Sum(out),
    }
}

fn merge(left: &OrderTerm, right: &OrderTerm) -> Option<OrderTerm> {
    use OrderTerm::*;
    match (left, right) {
        (Fin(a), Fin(b)) => Some(Fin(a + b)),
        (Fin(_), Omega) => Some(Omega),
        (OmegaStar, Fin(_)) => Some(OmegaStar),
        (OmegaStar, Omega) => Some(Zeta),
        (
            Dense { has_min, has_max: false },
            Dense { has_min: false, has_max },
        ) => Some(Dense { has_min: *has_min, has_max: *has_max }),
        _ => None,
    }
}

impl fmt::Display for OrderTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderTerm::Empty => write!(f, "empty"),
            OrderTerm::Fin(1) => write!(f, "1"),
            OrderTerm::Fin(n) => write!(f, "fin({n})"),
            OrderTerm::Omega => write!(f, "omega"),
            OrderTerm::OmegaStar => write!(f, "omega*"),
            OrderTerm::Zeta => write!(f, "zeta"),
            OrderTerm::Dense { has_min, has_max } => match (has_min, has_max) {
                (false, false) => write!(f, "dense"),
                (true, false) => write!(f, "dense[min]"),
                (false, true) => write!(f, "dense[,max]"),
                (true, true) => write!(f, "dense[min,max]"),
            },
            OrderTerm::Sum(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    if matches!(p, OrderTerm::Sum(_)) {
                        write!(f, "({p})")?;
                    } else {
                        write!(f, "{p}")?;
                    }
                }
                Ok(())
            }
            OrderTerm::Repl { base, summand } => write!(f, "repl({base}; {summand})"),
        }
    }
}
