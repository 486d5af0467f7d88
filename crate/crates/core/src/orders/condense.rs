//! Definable condensation: collapse every maximal convex discrete piece to
//! a point coloured by its order type; dense parts survive pointwise.

use std::fmt;

use super::term::{normalize, OrderTerm};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Color {
    /// A surviving singleton.
    Trivial,
    /// The term of the collapsed class.
    Fibre(OrderTerm),
    /// Fibres that themselves condense to several points.
    Pattern(String),
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Trivial => write!(f, "trivial"),
            Color::Fibre(t) => write!(f, "{t}"),
            Color::Pattern(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredChain {
    pub atoms: Vec<(OrderTerm, Color)>,
}

impl ColoredChain {
    /// The underlying order with colours forgotten.
    pub fn underlying(&self) -> OrderTerm {
        match self.atoms.len() {
            0 => OrderTerm::Empty,
            1 => self.atoms[0].0.clone(),
            _ => OrderTerm::Sum(self.atoms.iter().map(|(t, _)| t.clone()).collect()),
        }
    }
}

impl fmt::Display for ColoredChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "empty");
        }
        for (i, (t, c)) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match c {
                Color::Trivial => write!(f, "{t}")?,
                c => write!(f, "{t}[{c}]")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum Piece {
    /// Convex piece in which every point but the last has a successor and
    /// every point but the first has a predecessor.
    Disc { term: OrderTerm, min: bool, max: bool, origin: usize },
    /// Interior of a dense atom.
    Singletons { origin: usize },
    /// Interior fibres of a replicated atom.
    Fibres { summand: OrderTerm, origin: usize },
}

fn pieces(atoms: &[OrderTerm], out: &mut Vec<Piece>, origin_base: usize) {
    for (j, atom) in atoms.iter().enumerate() {
        let origin = origin_base + j;
        let disc = |term: OrderTerm, min, max| Piece::Disc { term, min, max, origin };
        match atom {
            OrderTerm::Fin(n) => out.push(disc(OrderTerm::Fin(*n), true, true)),
            OrderTerm::Omega => out.push(disc(OrderTerm::Omega, true, false)),
            OrderTerm::OmegaStar => out.push(disc(OrderTerm::OmegaStar, false, true)),
            OrderTerm::Zeta => out.push(disc(OrderTerm::Zeta, false, false)),
            OrderTerm::Dense { has_min, has_max } => {
                if *has_min {
                    out.push(disc(OrderTerm::Fin(1), true, true));
                }
                out.push(Piece::Singletons { origin });
                if *has_max {
                    out.push(disc(OrderTerm::Fin(1), true, true));
                }
            }
            OrderTerm::Repl { base, summand } => {
                let inner = summand.atoms();
                // boundary fibres keep the origin so they can rejoin the interior
                if base.atom_has_min() {
                    pieces_with_origin(&inner, out, origin);
                }
                out.push(Piece::Fibres { summand: (**summand).clone(), origin });
                if base.atom_has_max() {
                    pieces_with_origin(&inner, out, origin);
                }
            }
            OrderTerm::Empty | OrderTerm::Sum(_) => {}
        }
    }
}

fn pieces_with_origin(atoms: &[OrderTerm], out: &mut Vec<Piece>, origin: usize) {
    let start = out.len();
    pieces(atoms, out, 0);
    for p in &mut out[start..] {
        match p {
            Piece::Disc { origin: o, .. } | Piece::Singletons { origin: o } | Piece::Fibres { origin: o, .. } => {
                *o = origin
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Item {
    Point { color: Color, origin: Option<usize> },
    Dense { min: bool, max: bool, color: Color, origin: usize },
    Repl { summand: OrderTerm, color: Color },
}

fn joins(left: &Piece, right: &Piece) -> bool {
    match (left, right) {
        (Piece::Disc { max, .. }, Piece::Disc { min, .. }) => *max == *min,
        _ => false,
    }
}

fn items(t: &OrderTerm) -> Result<Vec<Item>> {
    let mut ps = Vec::new();
    pieces(&t.atoms(), &mut ps, 1);
    let mut out = Vec::new();
    let mut k = 0;
    while k < ps.len() {
        match &ps[k] {
            Piece::Disc { origin, .. } => {
                let mut group = vec![k];
                while k + 1 < ps.len() && joins(&ps[k], &ps[k + 1]) {
                    k += 1;
                    group.push(k);
                }
                let terms: Vec<OrderTerm> = group
                    .iter()
                    .map(|&g| match &ps[g] {
                        Piece::Disc { term, .. } => term.clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                let term = normalize(&OrderTerm::sum(terms))?;
                let color = if term == OrderTerm::Fin(1) { Color::Trivial } else { Color::Fibre(term) };
                let origin = (group.len() == 1).then_some(*origin);
                out.push(Item::Point { color, origin });
            }
            Piece::Singletons { origin } => out.push(Item::Dense {
                min: false,
                max: false,
                color: Color::Trivial,
                origin: *origin,
            }),
            Piece::Fibres { summand, origin } => {
                let inner = condense(summand)?;
                match inner.atoms.as_slice() {
                    [(OrderTerm::Fin(1), c)] => out.push(Item::Dense {
                        min: false,
                        max: false,
                        color: match c {
                            Color::Trivial => Color::Fibre(OrderTerm::Fin(1)),
                            c => c.clone(),
                        },
                        origin: *origin,
                    }),
                    _ => out.push(Item::Repl {
                        summand: normalize(&inner.underlying())?,
                        color: Color::Pattern(inner.to_string()),
                    }),
                }
            }
        }
        k += 1;
    }
    Ok(out)
}

/// Reattach single points to the dense part they came from and merge
/// dense neighbours of equal colour.
fn tidy(mut v: Vec<Item>) -> Vec<Item> {
    let mut k = 0;
    while k < v.len() {
        if let Item::Dense { origin, .. } = v[k] {
            let absorb = |it: &Item, color: &Color| {
                matches!(it, Item::Point { color: c, origin: Some(o) } if *o == origin && c == color)
            };
            let color = match &v[k] {
                Item::Dense { color, .. } => color.clone(),
                _ => unreachable!(),
            };
            if k > 0 && absorb(&v[k - 1], &color) {
                v.remove(k - 1);
                k -= 1;
                if let Item::Dense { min, .. } = &mut v[k] {
                    *min = true;
                }
            }
            if k + 1 < v.len() && absorb(&v[k + 1], &color) {
                v.remove(k + 1);
                if let Item::Dense { max, .. } = &mut v[k] {
                    *max = true;
                }
            }
        }
        k += 1;
    }
    let mut out: Vec<Item> = Vec::new();
    for it in v {
        if let (
            Some(Item::Dense { max: false, color: c1, .. }),
            Item::Dense { min: false, max, color: c2, .. },
        ) = (out.last_mut(), &it)
        {
            if c1 == c2 {
                let new_max = *max;
                if let Some(Item::Dense { max, .. }) = out.last_mut() {
                    *max = new_max;
                }
                continue;
            }
        }
        out.push(it);
    }
    out
}

pub fn condense(t: &OrderTerm) -> Result<ColoredChain> {
    let t = normalize(t)?;
    let atoms = tidy(items(&t)?)
        .into_iter()
        .map(|it| match it {
            Item::Point { color, .. } => (OrderTerm::Fin(1), color),
            Item::Dense { min, max, color, .. } => (OrderTerm::Dense { has_min: min, has_max: max }, color),
            Item::Repl { summand, color } => (OrderTerm::repl(OrderTerm::dense(), summand), color),
        })
        .collect();
    Ok(ColoredChain { atoms })
}

/// Iterate condensation on underlying orders until nothing changes. The
/// step count includes the application that confirms the fixpoint.
pub fn condense_iter(t: &OrderTerm, max_steps: usize) -> Result<(ColoredChain, usize, bool)> {
    let mut cur = normalize(t)?;
    let mut steps = 0;
    loop {
        steps += 1;
        let c = condense(&cur)?;
        let next = normalize(&c.underlying())?;
        if next == cur {
            return Ok((c, steps, true));
        }
        if steps >= max_steps.max(1) {
            return Ok((c, steps, false));
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_plus_zeta_collapses_the_integers() {
        let t = OrderTerm::sum([OrderTerm::dense(), OrderTerm::Zeta]);
        assert_eq!(condense(&t).unwrap().to_string(), "dense + 1[zeta]");
    }

    #[test]
    fn replicated_halves_become_two_coloured_dense_parts() {
        let t = OrderTerm::sum([
            OrderTerm::repl(OrderTerm::dense(), OrderTerm::OmegaStar),
            OrderTerm::repl(OrderTerm::dense(), OrderTerm::Omega),
        ]);
        let c = condense(&t).unwrap();
        assert_eq!(c.to_string(), "dense[omega*] + dense[omega]");
    }

    #[test]
    fn finite_chain_is_one_class() {
        assert_eq!(condense(&OrderTerm::Fin(5)).unwrap().to_string(), "1[fin(5)]");
    }

    #[test]
    fn dense_orders_are_fixed() {
        for t in [
            OrderTerm::dense(),
            OrderTerm::Dense { has_min: true, has_max: true },
            OrderTerm::sum([OrderTerm::Fin(1), OrderTerm::dense()]),
        ] {
            let c = condense(&t).unwrap();
            assert_eq!(normalize(&c.underlying()).unwrap(), normalize(&t).unwrap(), "{t}");
        }
    }

    #[test]
    fn omega_then_omega_star_is_one_class() {
        let t = OrderTerm::sum([OrderTerm::Omega, OrderTerm::OmegaStar]);
        assert_eq!(condense(&t).unwrap().to_string(), "1[omega + omega*]");
    }

    #[test]
    fn iteration_counts_the_confirming_step() {
        let (c, steps, fixed) = condense_iter(&OrderTerm::Zeta, 5).unwrap();
        assert_eq!((c.underlying(), steps, fixed), (OrderTerm::Fin(1), 2, true));
        let (_, steps, fixed) = condense_iter(&OrderTerm::dense(), 1).unwrap();
        assert_eq!((steps, fixed), (1, true));
        let t = OrderTerm::sum([OrderTerm::dense(), OrderTerm::Zeta]);
        let (c, steps, fixed) = condense_iter(&t, 3).unwrap();
        assert_eq!((c.to_string(), steps, fixed), ("dense + 1".to_string(), 2, true));
    }
}
