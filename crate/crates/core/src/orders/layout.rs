//! Decomposition of a term into finitely many segments on which every
//! successor-based property is constant.
//!
//! Parameters ("pins") are isolated as single-point segments so that
//! relativized properties stay constant on the remaining segments.

use std::collections::BTreeSet;
use std::fmt;

use super::cut::Cut;
use super::point::{Chain, DensePoint, Locator, Point};
use super::term::OrderTerm;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegKind {
    /// A single point.
    Point,
    /// Infinitely many discrete points, all alike.
    Run,
    /// A dense run without endpoints.
    DenseRun,
    /// Densely many copies of a fibre (the interior of a replicated atom).
    Fibres,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub kind: SegKind,
    /// The point itself, or a representative used for navigation only.
    pub rep: Point,
    /// Cut whose upper part starts exactly at this segment (not canonical).
    pub start: Cut,
    /// Layout of one representative fibre (only for `Fibres`).
    pub inner: Vec<Segment>,
}

impl Segment {
    fn point(p: Point, start: Cut) -> Self {
        Segment { kind: SegKind::Point, rep: p, start, inner: Vec::new() }
    }

    fn run(kind: SegKind, rep: Point, start: Cut) -> Self {
        Segment { kind, rep, start, inner: Vec::new() }
    }

    pub fn is_point(&self) -> bool {
        self.kind == SegKind::Point
    }

    fn lift(&self, atom: usize, b: DensePoint) -> Segment {
        Segment {
            kind: self.kind,
            rep: Point::new(atom, Locator::Repl(b, Box::new(self.rep.clone()))),
            start: Cut::Fibre(atom, b, Box::new(self.start.clone())),
            inner: Vec::new(),
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SegKind::Point => write!(f, "{}", self.rep),
            SegKind::Run => write!(f, "run@{}", self.rep),
            SegKind::DenseRun => write!(f, "dense@{}", self.rep),
            SegKind::Fibres => write!(f, "fibres@{}", self.rep.atom),
        }
    }
}

/// Segments of the whole chain in increasing order.
pub fn layout(chain: &Chain, pins: &[Point]) -> Vec<Segment> {
    let mut out = Vec::new();
    for (j, atom) in chain.atoms().iter().enumerate() {
        let i = j + 1;
        let here: Vec<&Point> = pins.iter().filter(|p| p.atom == i).collect();
        let mut segs = atom_layout(i, atom, &here);
        if let Some(first) = segs.first_mut() {
            first.start = Cut::AtomBoundary(i);
        }
        out.extend(segs);
    }
    out
}

fn atom_layout(i: usize, atom: &OrderTerm, pins: &[&Point]) -> Vec<Segment> {
    let pt = |loc: Locator| Point::new(i, loc);
    match atom {
        OrderTerm::Fin(n) => (0..*n)
            .map(|k| Segment::point(pt(Locator::Fin(k)), Cut::Minus(pt(Locator::Fin(k)))))
            .collect(),
        OrderTerm::Omega => {
            let top = offsets(pins).max().unwrap_or(0) + 1;
            let mut segs: Vec<Segment> = (0..=top)
                .map(|k| Segment::point(pt(Locator::Omega(k)), Cut::Minus(pt(Locator::Omega(k)))))
                .collect();
            let rep = pt(Locator::Omega(top + 1));
            segs.push(Segment::run(SegKind::Run, rep.clone(), Cut::Minus(rep)));
            segs
        }
        OrderTerm::OmegaStar => {
            let top = offsets(pins).max().unwrap_or(0) + 1;
            let mut segs = vec![Segment::run(
                SegKind::Run,
                pt(Locator::OmegaStar(top + 1)),
                Cut::AtomBoundary(i),
            )];
            segs.extend((0..=top).rev().map(|k| {
                Segment::point(pt(Locator::OmegaStar(k)), Cut::Minus(pt(Locator::OmegaStar(k))))
            }));
            segs
        }
        OrderTerm::Zeta => {
            let zs: BTreeSet<i64> = pins
                .iter()
                .filter_map(|p| match p.loc {
                    Locator::Zeta(z) => Some(z),
                    _ => None,
                })
                .collect();
            let (Some(&lo), Some(&hi)) = (zs.first(), zs.last()) else {
                return vec![Segment::run(SegKind::Run, pt(Locator::Zeta(0)), Cut::AtomBoundary(i))];
            };
            let mut segs =
                vec![Segment::run(SegKind::Run, pt(Locator::Zeta(lo - 2)), Cut::AtomBoundary(i))];
            segs.extend(
                (lo - 1..=hi + 1)
                    .map(|z| Segment::point(pt(Locator::Zeta(z)), Cut::Minus(pt(Locator::Zeta(z))))),
            );
            let rep = pt(Locator::Zeta(hi + 2));
            segs.push(Segment::run(SegKind::Run, rep.clone(), Cut::Minus(rep)));
            segs
        }
        OrderTerm::Dense { has_min, has_max } => {
            let labels = dense_labels(pins, |loc| match loc {
                Locator::Dense(d) => Some(*d),
                _ => None,
            });
            let loc = |d| pt(Locator::Dense(d));
            let mut segs = Vec::new();
            if *has_min {
                segs.push(Segment::point(loc(DensePoint::Min), Cut::Minus(loc(DensePoint::Min))));
            }
            let mut prev: Option<Point> = has_min.then(|| loc(DensePoint::Min));
            for w in interleave(&labels) {
                match w {
                    Slot::Open(rep) => {
                        let start = match &prev {
                            Some(p) => Cut::Plus(p.clone()),
                            None => Cut::AtomBoundary(i),
                        };
                        segs.push(Segment::run(SegKind::DenseRun, loc(DensePoint::At(rep)), start));
                    }
                    Slot::Pin(l) => {
                        let p = loc(DensePoint::At(l));
                        segs.push(Segment::point(p.clone(), Cut::Minus(p.clone())));
                        prev = Some(p);
                    }
                }
            }
            if *has_max {
                segs.push(Segment::point(loc(DensePoint::Max), Cut::Minus(loc(DensePoint::Max))));
            }
            segs
        }
        OrderTerm::Repl { base, summand } => {
            let OrderTerm::Dense { has_min, has_max } = **base else {
                return Vec::new();
            };
            let fibre = Chain::new(summand);
            let inner_pins = |b: DensePoint| -> Vec<Point> {
                pins.iter()
                    .filter_map(|p| match &p.loc {
                        Locator::Repl(pb, q) if *pb == b => Some((**q).clone()),
                        _ => None,
                    })
                    .collect()
            };
            let fibre_at = |b: DensePoint| -> Vec<Segment> {
                layout(&fibre, &inner_pins(b)).iter().map(|s| s.lift(i, b)).collect()
            };
            let labels = dense_labels(pins, |loc| match loc {
                Locator::Repl(b, _) => Some(*b),
                _ => None,
            });
            let mut segs = Vec::new();
            let mut prev: Option<DensePoint> = None;
            if has_min {
                segs.extend(fibre_at(DensePoint::Min));
                prev = Some(DensePoint::Min);
            }
            for w in interleave(&labels) {
                match w {
                    Slot::Open(rep) => {
                        let start = match prev {
                            Some(b) => Cut::Fibre(i, b, Box::new(Cut::Nothing)),
                            None => Cut::AtomBoundary(i),
                        };
                        let inner = fibre_at(DensePoint::At(rep));
                        let rep_point = inner[0].rep.clone();
                        segs.push(Segment { kind: SegKind::Fibres, rep: rep_point, start, inner });
                    }
                    Slot::Pin(l) => {
                        segs.extend(fibre_at(DensePoint::At(l)));
                        prev = Some(DensePoint::At(l));
                    }
                }
            }
            if has_max {
                segs.extend(fibre_at(DensePoint::Max));
            }
            segs
        }
        OrderTerm::Empty | OrderTerm::Sum(_) => Vec::new(),
    }
}

fn offsets<'a>(pins: &'a [&Point]) -> impl Iterator<Item = u64> + 'a {
    pins.iter().filter_map(|p| match p.loc {
        Locator::Omega(k) | Locator::OmegaStar(k) => Some(k),
        _ => None,
    })
}

fn dense_labels(pins: &[&Point], f: impl Fn(&Locator) -> Option<DensePoint>) -> Vec<i64> {
    let set: BTreeSet<i64> = pins
        .iter()
        .filter_map(|p| match f(&p.loc) {
            Some(DensePoint::At(l)) => Some(l),
            _ => None,
        })
        .collect();
    set.into_iter().collect()
}

enum Slot {
    /// An open interval of the dense base; the payload is a navigation label.
    Open(i64),
    Pin(i64),
}

fn interleave(labels: &[i64]) -> Vec<Slot> {
    let mut out = Vec::new();
    match labels.first() {
        None => return vec![Slot::Open(0)],
        Some(&l) => out.push(Slot::Open(l.saturating_sub(1))),
    }
    for (k, &l) in labels.iter().enumerate() {
        out.push(Slot::Pin(l));
        let rep = labels.get(k + 1).map_or(l.saturating_add(1), |_| l);
        out.push(Slot::Open(rep));
    }
    out
}
