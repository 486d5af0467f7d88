//! Definability of final segments and definable ranks of orders.

use std::cmp::Ordering;
use std::fmt;

use super::cut::Cut;
use super::layout::{layout, SegKind};
use super::point::{Chain, DensePoint, Locator, Point};
use super::props::order_props;
use super::schema::{catalog, parameter_candidates, schema_extension, Extension, Schema};
use super::term::OrderTerm;
use crate::error::{Error, Result};
use crate::rules::Rule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentVerdict {
    Definable { schema: Schema, rule: Rule },
    NotDefinable(Rule),
    Unknown(String),
}

impl fmt::Display for SegmentVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegmentVerdict::Definable { schema, rule } => write!(f, "definable by {schema} [{rule}]"),
            SegmentVerdict::NotDefinable(rule) => write!(f, "not definable [{rule}]"),
            SegmentVerdict::Unknown(why) => write!(f, "unknown ({why})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Local {
    Dense,
    Discrete,
    Mixed,
}

fn fibre_family(summand: &OrderTerm) -> Local {
    let p = order_props(summand);
    if p.dense {
        Local::Dense
    } else if p.discrete && !p.has_min && !p.has_max {
        Local::Discrete
    } else {
        Local::Mixed
    }
}

/// Local type just below the (missing) maximum of an atom.
fn tail(atom: Option<&OrderTerm>) -> Local {
    match atom {
        Some(OrderTerm::Omega | OrderTerm::Zeta) => Local::Discrete,
        Some(OrderTerm::Dense { .. }) => Local::Dense,
        Some(OrderTerm::Repl { base, summand }) if base.atom_has_max() => {
            tail(summand.atoms().last())
        }
        Some(OrderTerm::Repl { summand, .. }) => fibre_family(summand),
        _ => Local::Mixed,
    }
}

/// Local type just above the (missing) minimum of an atom.
fn head(atom: Option<&OrderTerm>) -> Local {
    match atom {
        Some(OrderTerm::OmegaStar | OrderTerm::Zeta) => Local::Discrete,
        Some(OrderTerm::Dense { .. }) => Local::Dense,
        Some(OrderTerm::Repl { base, summand }) if base.atom_has_min() => {
            head(summand.atoms().first())
        }
        Some(OrderTerm::Repl { summand, .. }) => fibre_family(summand),
        _ => Local::Mixed,
    }
}

/// Local types on both sides of a non-principal canonical cut.
fn sides(chain: &Chain, cut: &Cut) -> (Local, Local) {
    match cut {
        Cut::AtomBoundary(i) => (tail(chain.atom(i - 1)), head(chain.atom(*i))),
        Cut::DenseGap(i, _) => match chain.atom(*i) {
            Some(OrderTerm::Dense { .. }) => (Local::Dense, Local::Dense),
            Some(OrderTerm::Repl { summand, .. }) => (fibre_family(summand), fibre_family(summand)),
            _ => (Local::Mixed, Local::Mixed),
        },
        Cut::Fibre(i, _, inner) => {
            let Some(OrderTerm::Repl { summand, .. }) = chain.atom(*i) else {
                return (Local::Mixed, Local::Mixed);
            };
            let s = Chain::new(summand);
            match **inner {
                Cut::Everything => (fibre_family(summand), head(s.atom(1))),
                Cut::Nothing => (tail(s.atom(s.len())), fibre_family(summand)),
                ref c => sides(&s, c),
            }
        }
        _ => (Local::Mixed, Local::Mixed),
    }
}

fn locally_tame(chain: &Chain, cut: &Cut) -> bool {
    let (l, u) = sides(chain, cut);
    l == u && l != Local::Mixed
}

pub fn classify_final_segment(t: &OrderTerm, cut: &Cut) -> Result<SegmentVerdict> {
    t.check()?;
    let chain = Chain::new(t);
    let cut = chain.canon(cut)?;
    match &cut {
        Cut::Everything => {
            return Err(Error::Domain("only proper final segments are ranked".into()))
        }
        Cut::Minus(p) => {
            return Ok(SegmentVerdict::Definable {
                schema: Schema::PrincipalMinus(p.clone()),
                rule: Rule::Principal,
            })
        }
        Cut::Plus(p) => {
            return Ok(SegmentVerdict::Definable {
                schema: Schema::PrincipalPlus(p.clone()),
                rule: Rule::Principal,
            })
        }
        _ => {}
    }
    let props = order_props(t);
    let tame = props.dense || props.discrete || locally_tame(&chain, &cut);
    let target = Extension::Segment(cut.clone());
    for schema in catalog(&parameter_candidates(t)) {
        if schema_extension(t, &schema)? == target {
            if tame && cut != Cut::Nothing {
                return Err(Error::Inconsistent(format!(
                    "{schema} defines the non-principal cut {cut} inside a tame region"
                )));
            }
            return Ok(SegmentVerdict::Definable { schema, rule: Rule::Schema });
        }
    }
    if tame {
        return Ok(SegmentVerdict::NotDefinable(Rule::OMinimalLocal));
    }
    Ok(SegmentVerdict::Unknown(format!(
        "no catalog schema defines {cut} and it does not lie inside a dense or discrete convex region"
    )))
}

/// A definable-rank member: one cut, or a homogeneous family of cuts
/// given by a representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutClass {
    Single(Cut),
    Family { label: String, rep: Cut },
}

impl CutClass {
    pub fn rep(&self) -> &Cut {
        match self {
            CutClass::Single(c) => c,
            CutClass::Family { rep, .. } => rep,
        }
    }
}

impl fmt::Display for CutClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutClass::Single(c) => write!(f, "{c}"),
            CutClass::Family { label, .. } => write!(f, "{label}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    SoundOnly,
}

impl fmt::Display for Completeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Completeness::Complete => "complete",
            Completeness::SoundOnly => "sound-only",
        })
    }
}

/// Symbolic description of the set of definable proper final segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrkDescription {
    pub universe: OrderTerm,
    /// Every member, for finite universes, ordered by inclusion.
    pub explicit: Option<Vec<Cut>>,
    /// `γ_-` for every γ (proper ones).
    pub minus_family: bool,
    /// `γ_+` for every γ.
    pub plus_family: bool,
    pub nothing: bool,
    /// Non-principal definable members besides `∅`.
    pub members: Vec<CutClass>,
    pub undecided: Vec<CutClass>,
    pub completeness: Completeness,
}

impl DrkDescription {
    /// Render an explicit member as a set of global 1-based positions.
    fn render_finite(&self, cut: &Cut) -> String {
        let chain = Chain::new(&self.universe);
        let points = chain.finite_points().unwrap_or_default();
        let inside: Vec<String> = points
            .iter()
            .enumerate()
            .filter(|(_, p)| chain.contains(cut, p))
            .map(|(k, _)| (k + 1).to_string())
            .collect();
        if inside.is_empty() {
            "∅".into()
        } else {
            format!("{{{}}}", inside.join(", "))
        }
    }
}

impl fmt::Display for DrkDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(list) = &self.explicit {
            let parts: Vec<String> = list.iter().map(|c| self.render_finite(c)).collect();
            return write!(f, "{{{}}}", parts.join(", "));
        }
        let mut parts = Vec::new();
        if self.nothing {
            parts.push("∅".to_string());
        }
        match (self.minus_family, self.plus_family) {
            (true, true) => parts.push("γ_-, γ_+ (γ ∈ Γ)".into()),
            (true, false) => parts.push("γ_- (γ ∈ Γ)".into()),
            (false, true) => parts.push("γ_+ (γ ∈ Γ)".into()),
            (false, false) => {}
        }
        parts.extend(self.members.iter().map(|m| m.to_string()));
        write!(f, "{{{}}}", parts.join("; "))
    }
}

/// All non-principal cut classes of a term: segment boundaries, gaps of
/// dense runs and the cuts inside or between fibres.
pub fn cut_classes(chain: &Chain) -> Vec<CutClass> {
    let mut out: Vec<CutClass> = Vec::new();
    let push = |c: CutClass, out: &mut Vec<CutClass>| {
        if !out.iter().any(|x| x.rep() == c.rep()) {
            out.push(c);
        }
    };
    let non_principal = |c: &Cut| !matches!(c, Cut::Everything | Cut::Nothing | Cut::Minus(_) | Cut::Plus(_));
    for s in layout(chain, &[]) {
        let start = chain.canon(&s.start).expect("layout cuts are valid");
        if non_principal(&start) {
            push(CutClass::Single(start), &mut out);
        }
        match s.kind {
            SegKind::DenseRun => {
                let rep = gap_at(&s.rep);
                push(CutClass::Family { label: family_label(&rep), rep }, &mut out);
            }
            SegKind::Fibres => {
                let i = s.rep.atom;
                let Locator::Repl(b, _) = s.rep.loc else { continue };
                let gap = Cut::DenseGap(i, b.label());
                push(CutClass::Family { label: family_label(&gap), rep: gap }, &mut out);
                let mut inner_cuts: Vec<Cut> = s.inner.iter().map(|x| x.start.clone()).collect();
                inner_cuts.push(Cut::Fibre(i, b, Box::new(Cut::Nothing)));
                for x in &s.inner {
                    if x.kind == SegKind::DenseRun {
                        inner_cuts.push(gap_at(&x.rep));
                    }
                }
                for c in inner_cuts {
                    let c = chain.canon(&c).expect("layout cuts are valid");
                    if non_principal(&c) {
                        push(CutClass::Family { label: family_label(&c), rep: c }, &mut out);
                    }
                }
            }
            _ => {}
        }
    }
    out
}

/// Gap just above the dense representative point.
fn gap_at(p: &Point) -> Cut {
    match &p.loc {
        Locator::Dense(d) => Cut::DenseGap(p.atom, d.label()),
        Locator::Repl(b, q) => Cut::Fibre(p.atom, *b, Box::new(gap_at(q))),
        _ => Cut::Nothing,
    }
}

/// Family label: the representative with interior base labels replaced by
/// `*`.
fn family_label(c: &Cut) -> String {
    match c {
        Cut::DenseGap(i, _) => format!("gap({i}:*)"),
        Cut::Fibre(i, b, inner) => {
            let b = match b {
                DensePoint::At(_) => "*".to_string(),
                other => other.to_string(),
            };
            format!("fibre({i}:{b}; {})", family_label(inner))
        }
        other => other.to_string(),
    }
}

pub fn drk_order(t: &OrderTerm) -> Result<DrkDescription> {
    t.check()?;
    let chain = Chain::new(t);
    if chain.is_empty() {
        return Err(Error::Domain("the empty order has no proper final segments".into()));
    }
    let mut d = DrkDescription {
        universe: t.clone(),
        explicit: None,
        minus_family: true,
        plus_family: true,
        nothing: true,
        members: Vec::new(),
        undecided: Vec::new(),
        completeness: Completeness::Complete,
    };
    if t.is_finite() {
        let mut cuts = vec![Cut::Nothing];
        for p in chain.finite_points()?.iter().skip(1).rev() {
            let c = Cut::Minus(p.clone());
            if let SegmentVerdict::Definable { .. } = classify_final_segment(t, &c)? {
                cuts.push(c);
            }
        }
        d.explicit = Some(cuts);
        return Ok(d);
    }
    let props = order_props(t);
    if props.dense || props.discrete {
        return Ok(d);
    }
    d.completeness = Completeness::SoundOnly;
    for class in cut_classes(&chain) {
        match classify_final_segment(t, class.rep())? {
            SegmentVerdict::Definable { .. } => d.members.push(class),
            SegmentVerdict::NotDefinable(_) => {}
            SegmentVerdict::Unknown(_) => d.undecided.push(class),
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DrkReport {
    pub violations: Vec<String>,
}

impl DrkReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check that between any two comparable members there is a member with
/// an immediate successor.
pub fn validate_drk(d: &DrkDescription) -> DrkReport {
    let mut report = DrkReport::default();
    let chain = Chain::new(&d.universe);
    if let Some(list) = &d.explicit {
        let mut sorted = list.clone();
        // ascending by inclusion: larger keys have smaller upper parts
        sorted.sort_by(|a, b| chain.cmp_cuts(b, a));
        sorted.dedup();
        let has_successor = |k: usize| k + 1 < sorted.len();
        for i in 0..sorted.len() {
            for j in i + 1..sorted.len() {
                if chain.cmp_cuts(&sorted[i], &sorted[j]) != Ordering::Greater {
                    continue;
                }
                if !(i..j).any(has_successor) {
                    report.violations.push(format!(
                        "no member with a successor between {} and {}",
                        sorted[i], sorted[j]
                    ));
                }
            }
        }
        return report;
    }
    if d.minus_family && d.plus_family {
        return report;
    }
    let dense_part = layout(&chain, &[])
        .iter()
        .any(|s| matches!(s.kind, SegKind::DenseRun | SegKind::Fibres));
    if dense_part {
        report.violations.push(
            "a principal family without its partner is densely ordered and has no successor pairs"
                .into(),
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_zeta() -> OrderTerm {
        OrderTerm::sum([OrderTerm::dense(), OrderTerm::Zeta])
    }

    #[test]
    fn boundary_of_dense_plus_zeta_is_defined_by_predecessors() {
        let v = classify_final_segment(&dense_zeta(), &Cut::AtomBoundary(2)).unwrap();
        assert_eq!(v, SegmentVerdict::Definable { schema: Schema::HasPredecessor, rule: Rule::Schema });
    }

    #[test]
    fn positive_fibres_are_defined_by_theta() {
        let t = OrderTerm::sum([
            OrderTerm::repl(OrderTerm::dense(), OrderTerm::OmegaStar),
            OrderTerm::repl(OrderTerm::dense(), OrderTerm::Omega),
        ]);
        let v = classify_final_segment(&t, &Cut::AtomBoundary(2)).unwrap();
        assert_eq!(
            v,
            SegmentVerdict::Definable { schema: Schema::AllLaterHaveSuccessor, rule: Rule::Schema }
        );
    }

    #[test]
    fn dense_gap_is_not_definable() {
        let v = classify_final_segment(&OrderTerm::dense(), &Cut::DenseGap(1, 0)).unwrap();
        assert_eq!(v, SegmentVerdict::NotDefinable(Rule::OMinimalLocal));
        let v = classify_final_segment(&dense_zeta(), &Cut::DenseGap(1, 5)).unwrap();
        assert_eq!(v, SegmentVerdict::NotDefinable(Rule::OMinimalLocal));
    }

    #[test]
    fn whole_order_is_rejected() {
        assert!(matches!(
            classify_final_segment(&OrderTerm::Zeta, &Cut::Everything),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn two_point_rank_renders_explicitly() {
        let d = drk_order(&OrderTerm::Fin(2)).unwrap();
        assert_eq!(d.to_string(), "{∅, {2}}");
        assert!(validate_drk(&d).ok());
    }

    #[test]
    fn dense_rank_is_complete_and_principal() {
        let d = drk_order(&OrderTerm::dense()).unwrap();
        assert_eq!(d.completeness, Completeness::Complete);
        assert!(d.members.is_empty());
        assert!(validate_drk(&d).ok());
    }

    #[test]
    fn dense_plus_zeta_rank_adds_the_boundary() {
        let d = drk_order(&dense_zeta()).unwrap();
        assert_eq!(d.completeness, Completeness::SoundOnly);
        assert_eq!(d.members, vec![CutClass::Single(Cut::AtomBoundary(2))]);
        assert!(d.undecided.is_empty());
        assert!(validate_drk(&d).ok());
    }

    #[test]
    fn one_sided_principal_family_on_dense_is_flagged() {
        let mut d = drk_order(&OrderTerm::dense()).unwrap();
        d.plus_family = false;
        assert!(!validate_drk(&d).ok());
    }
}
