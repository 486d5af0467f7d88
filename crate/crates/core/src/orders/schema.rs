//! A fixed catalog of formula schemas over `<`, their literal formulas and
//! their exact extensions in the canonical model of a term.

use std::fmt;

use super::cut::Cut;
use super::fo::{self, Formula};
use super::layout::{layout, SegKind, Segment};
use super::point::{Chain, Point};
use super::props::sample_points;
use super::term::OrderTerm;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schema {
    Empty,
    PrincipalMinus(Point),
    PrincipalPlus(Point),
    HasPredecessor,
    HasSuccessor,
    /// `θ(x) := ∀y (y > x → ∃z ψ(y, z))`
    AllLaterHaveSuccessor,
    AllLaterHavePredecessor,
    /// `x > a ∧ S(x)`
    Above(Point, Box<Schema>),
    /// `x ≥ a ∨ (x < a ∧ ∀y (x < y < a → S(y)))`
    Below(Point, Box<Schema>),
}

impl Schema {
    pub fn name(&self) -> &'static str {
        match self {
            Schema::Empty => "Empty",
            Schema::PrincipalMinus(_) => "PrincipalMinus",
            Schema::PrincipalPlus(_) => "PrincipalPlus",
            Schema::HasPredecessor => "HasPredecessor",
            Schema::HasSuccessor => "HasSuccessor",
            Schema::AllLaterHaveSuccessor => "AllLaterHaveSuccessor",
            Schema::AllLaterHavePredecessor => "AllLaterHavePredecessor",
            Schema::Above(..) => "Above",
            Schema::Below(..) => "Below",
        }
    }

    /// Parameters in order of appearance.
    pub fn params(&self) -> Vec<Point> {
        match self {
            Schema::PrincipalMinus(a) | Schema::PrincipalPlus(a) => vec![a.clone()],
            Schema::Above(a, s) | Schema::Below(a, s) => {
                let mut v = vec![a.clone()];
                v.extend(s.params());
                v
            }
            _ => Vec::new(),
        }
    }

    /// Literal formula with free variable `x`; the k-th parameter is the
    /// free variable `p{k}`.
    pub fn formula(&self) -> Formula {
        let mut k = 0;
        self.formula_in("x", &mut k)
    }

    fn formula_in(&self, x: &str, k: &mut usize) -> Formula {
        let y = format!("{x}y");
        let z = format!("{x}z");
        let mut param = || {
            let p = format!("p{k}");
            *k += 1;
            p
        };
        match self {
            Schema::Empty => fo::not(fo::eq(x, x)),
            Schema::PrincipalMinus(_) => fo::le(&param(), x),
            Schema::PrincipalPlus(_) => fo::lt(&param(), x),
            Schema::HasPredecessor => fo::exists(&y, fo::successor(&y, x)),
            Schema::HasSuccessor => fo::exists(&y, fo::successor(x, &y)),
            Schema::AllLaterHaveSuccessor => {
                fo::forall(&y, fo::implies(fo::lt(x, &y), fo::exists(&z, fo::successor(&y, &z))))
            }
            Schema::AllLaterHavePredecessor => {
                fo::forall(&y, fo::implies(fo::lt(x, &y), fo::exists(&z, fo::successor(&z, &y))))
            }
            Schema::Above(_, s) => {
                let a = param();
                fo::and([fo::lt(&a, x), s.formula_in(x, k)])
            }
            Schema::Below(_, s) => {
                let a = param();
                fo::or([
                    fo::le(&a, x),
                    fo::and([
                        fo::lt(x, &a),
                        fo::forall(
                            &y,
                            fo::implies(fo::and([fo::lt(x, &y), fo::lt(&y, &a)]), s.formula_in(&y, k)),
                        ),
                    ]),
                ])
            }
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schema::PrincipalMinus(a) | Schema::PrincipalPlus(a) => write!(f, "{}({a})", self.name()),
            Schema::Above(a, s) | Schema::Below(a, s) => write!(f, "{}({a}, {s})", self.name()),
            _ => write!(f, "{}", self.name()),
        }
    }
}

/// Extension of a schema: a final segment, or a description of a set that
/// is not one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    Segment(Cut),
    Set(String),
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extension::Segment(c) => write!(f, "{c}"),
            Extension::Set(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Truth {
    Uniform(bool),
    /// Per inner segment of one representative fibre.
    Fibres(Vec<bool>),
}

impl Truth {
    fn all(&self) -> bool {
        match self {
            Truth::Uniform(b) => *b,
            Truth::Fibres(v) => v.iter().all(|b| *b),
        }
    }

    fn uniform(&self) -> Option<bool> {
        match self {
            Truth::Uniform(b) => Some(*b),
            Truth::Fibres(v) if v.iter().all(|b| *b) => Some(true),
            Truth::Fibres(v) if v.iter().all(|b| !*b) => Some(false),
            Truth::Fibres(_) => None,
        }
    }
}

fn pointwise(segs: &[Segment], f: impl Fn(&Point) -> bool) -> Vec<Truth> {
    segs.iter()
        .map(|s| match s.kind {
            SegKind::Fibres => Truth::Fibres(s.inner.iter().map(|x| f(&x.rep)).collect()),
            _ => Truth::Uniform(f(&s.rep)),
        })
        .collect()
}

fn pin_index(segs: &[Segment], a: &Point) -> Result<usize> {
    segs.iter()
        .position(|s| s.is_point() && &s.rep == a)
        .ok_or_else(|| Error::Inconsistent(format!("parameter {a} was not isolated")))
}

fn truths(chain: &Chain, segs: &[Segment], schema: &Schema) -> Result<Vec<Truth>> {
    let n = segs.len();
    Ok(match schema {
        Schema::Empty => vec![Truth::Uniform(false); n],
        Schema::PrincipalMinus(a) => {
            let k = pin_index(segs, a)?;
            (0..n).map(|i| Truth::Uniform(i >= k)).collect()
        }
        Schema::PrincipalPlus(a) => {
            let k = pin_index(segs, a)?;
            (0..n).map(|i| Truth::Uniform(i > k)).collect()
        }
        Schema::HasPredecessor => pointwise(segs, |p| chain.pred(p).is_some()),
        Schema::HasSuccessor => pointwise(segs, |p| chain.succ(p).is_some()),
        Schema::AllLaterHaveSuccessor | Schema::AllLaterHavePredecessor => {
            let base = if *schema == Schema::AllLaterHaveSuccessor {
                truths(chain, segs, &Schema::HasSuccessor)?
            } else {
                truths(chain, segs, &Schema::HasPredecessor)?
            };
            let mut out = vec![Truth::Uniform(false); n];
            let mut all_after = true;
            for i in (0..n).rev() {
                let here = match segs[i].kind {
                    SegKind::Point => all_after,
                    // later points of the same run (or of later fibres) look
                    // like the whole segment
                    _ => base[i].all() && all_after,
                };
                out[i] = Truth::Uniform(here);
                all_after &= base[i].all();
            }
            out
        }
        Schema::Above(a, s) => {
            let k = pin_index(segs, a)?;
            let inner = truths(chain, segs, s)?;
            inner
                .into_iter()
                .enumerate()
                .map(|(i, t)| if i > k { t } else { Truth::Uniform(false) })
                .collect()
        }
        Schema::Below(a, s) => {
            let k = pin_index(segs, a)?;
            let inner = truths(chain, segs, s)?;
            let mut out = vec![Truth::Uniform(true); n];
            let mut between = true;
            for i in (0..k).rev() {
                let here = match segs[i].kind {
                    SegKind::Point => between,
                    _ => inner[i].all() && between,
                };
                out[i] = Truth::Uniform(here);
                between &= inner[i].all();
            }
            out
        }
    })
}

fn describe(segs: &[Segment], ts: &[Truth]) -> String {
    let parts: Vec<String> = segs
        .iter()
        .zip(ts)
        .map(|(s, t)| {
            let v = match t.uniform() {
                Some(true) => "T",
                Some(false) => "F",
                None => "mixed",
            };
            format!("{s}:{v}")
        })
        .collect();
    format!("set[{}]", parts.join(", "))
}

/// Exact extension of `schema` in the canonical model of `t`.
pub fn schema_extension(t: &OrderTerm, schema: &Schema) -> Result<Extension> {
    let chain = Chain::new(t);
    let pins = schema.params();
    for p in &pins {
        chain.validate(p)?;
    }
    let segs = layout(&chain, &pins);
    let ts = truths(&chain, &segs, schema)?;
    let mut first_true = None;
    for (i, t) in ts.iter().enumerate() {
        match (t.uniform(), first_true) {
            (None, _) | (Some(false), Some(_)) => return Ok(Extension::Set(describe(&segs, &ts))),
            (Some(true), None) => first_true = Some(i),
            _ => {}
        }
    }
    let cut = match first_true {
        None => Cut::Nothing,
        Some(i) => segs[i].start.clone(),
    };
    Ok(Extension::Segment(chain.canon(&cut)?))
}

/// Catalog in its fixed search order, with relativized variants over the
/// given parameter candidates.
pub fn catalog(params: &[Point]) -> Vec<Schema> {
    let mut out = vec![Schema::Empty];
    for a in params {
        out.push(Schema::PrincipalMinus(a.clone()));
        out.push(Schema::PrincipalPlus(a.clone()));
    }
    out.extend([
        Schema::HasPredecessor,
        Schema::HasSuccessor,
        Schema::AllLaterHaveSuccessor,
        Schema::AllLaterHavePredecessor,
    ]);
    let base = [
        Schema::HasPredecessor,
        Schema::HasSuccessor,
        Schema::AllLaterHaveSuccessor,
        Schema::AllLaterHavePredecessor,
    ];
    for a in params {
        for s in &base {
            out.push(Schema::Above(a.clone(), Box::new(s.clone())));
        }
        for s in &base[..2] {
            out.push(Schema::Below(a.clone(), Box::new(s.clone())));
        }
    }
    out
}

/// Parameter candidates: one representative per segment of the unpinned
/// layout.
pub fn parameter_candidates(t: &OrderTerm) -> Vec<Point> {
    sample_points(&layout(&Chain::new(t), &[]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::point::Locator;
    use std::collections::HashMap;

    #[test]
    fn has_predecessor_cuts_dense_plus_zeta() {
        let t = OrderTerm::sum([OrderTerm::dense(), OrderTerm::Zeta]);
        let e = schema_extension(&t, &Schema::HasPredecessor).unwrap();
        assert_eq!(e, Extension::Segment(Cut::AtomBoundary(2)));
    }

    #[test]
    fn has_predecessor_on_two_points() {
        let e = schema_extension(&OrderTerm::Fin(2), &Schema::HasPredecessor).unwrap();
        assert_eq!(e, Extension::Segment(Cut::Minus(Point::new(1, Locator::Fin(1)))));
    }

    #[test]
    fn every_natural_number_has_a_successor() {
        let e = schema_extension(&OrderTerm::Omega, &Schema::HasSuccessor).unwrap();
        assert_eq!(e, Extension::Segment(Cut::Everything));
    }

    #[test]
    fn theta_cuts_between_replicated_atoms() {
        let t = OrderTerm::sum([
            OrderTerm::repl(OrderTerm::dense(), OrderTerm::OmegaStar),
            OrderTerm::repl(OrderTerm::dense(), OrderTerm::Omega),
        ]);
        let e = schema_extension(&t, &Schema::AllLaterHaveSuccessor).unwrap();
        assert_eq!(e, Extension::Segment(Cut::AtomBoundary(2)));
        assert!(matches!(
            schema_extension(&t, &Schema::HasPredecessor).unwrap(),
            Extension::Set(_)
        ));
    }

    #[test]
    fn theta_on_four_points_holds_only_at_the_last() {
        // the last point has no successor, so every earlier x fails
        let f = Schema::AllLaterHaveSuccessor.formula();
        let at = |x: usize| -> HashMap<String, usize> { [("x".to_string(), x)].into() };
        assert!(!fo::fo_eval_finite(&OrderTerm::Fin(4), &f, &at(0)).unwrap());
        assert!(fo::fo_eval_finite(&OrderTerm::Fin(4), &f, &at(3)).unwrap());
        let e = schema_extension(&OrderTerm::Fin(4), &Schema::AllLaterHaveSuccessor).unwrap();
        assert_eq!(e, Extension::Segment(Cut::Minus(Point::new(1, Locator::Fin(3)))));
    }

    #[test]
    fn relativized_schema_isolates_a_later_block() {
        let t = OrderTerm::sum([OrderTerm::Zeta, OrderTerm::dense(), OrderTerm::Zeta]);
        let a = Point::new(2, Locator::Dense(crate::orders::point::DensePoint::At(0)));
        let s = Schema::Above(a, Box::new(Schema::HasPredecessor));
        let e = schema_extension(&t, &s).unwrap();
        assert_eq!(e, Extension::Segment(Cut::AtomBoundary(3)));
    }
}
