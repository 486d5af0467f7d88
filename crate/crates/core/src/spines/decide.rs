//! Definability of convex subgroups and the definable rank of a group.

use std::collections::BTreeSet;
use std::fmt;

use super::spine::spine;
use crate::error::{Error, Result};
use crate::groups::arch::generic_prime;
use crate::groups::{ArchComponent, GroupTerm};
use crate::orders::layout::{layout, SegKind};
use crate::orders::classify::{cut_classes, CutClass};
use crate::orders::{Completeness, Cut, Locator, Point};
use crate::rules::Rule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Definable { rule: Rule, n: Option<u64>, detail: String },
    NotDefinable { rule: Rule, detail: String },
    Unknown(String),
}

impl Verdict {
    pub fn is_definable(&self) -> bool {
        matches!(self, Verdict::Definable { .. })
    }

    pub fn rule(&self) -> Option<Rule> {
        match self {
            Verdict::Definable { rule, .. } | Verdict::NotDefinable { rule, .. } => Some(*rule),
            Verdict::Unknown(_) => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Definable { rule, n: Some(n), .. } => write!(f, "definable ({rule}, n = {n})"),
            Verdict::Definable { rule, .. } => write!(f, "definable ({rule})"),
            Verdict::NotDefinable { rule, .. } => write!(f, "not definable ({rule})"),
            Verdict::Unknown(why) => write!(f, "unknown ({why})"),
        }
    }
}

/// Name of a convex subgroup: `{0}`, `G`, `upper(i)` for the sum over the
/// atoms from `i` on of a lexicographic sum, else the cut.
pub fn subgroup_label(g: &GroupTerm, h: &Cut) -> String {
    match h {
        Cut::Nothing => "{0}".into(),
        Cut::Everything => "G".into(),
        Cut::Minus(Point { atom, loc: Locator::Fin(0) }) if g.is_lex() => format!("upper({atom})"),
        other => other.to_string(),
    }
}

/// Every prime that behaves differently in some component, plus one
/// standing for all others.
fn prime_representatives(g: &GroupTerm) -> Vec<u64> {
    let exc = g.exceptional_primes();
    let mut ps: BTreeSet<u64> = exc.clone();
    ps.insert(generic_prime(&exc));
    ps.into_iter().collect()
}

fn divisible_by_all(b: &ArchComponent, primes: &[u64]) -> bool {
    primes.iter().all(|&p| b.allows(p))
}

type Derivations = (Vec<(Rule, Option<u64>, String)>, Vec<(Rule, String)>);

/// All rules whose hypotheses hold, definability rules first in a fixed
/// order, then obstructions.
fn derivable(g: &GroupTerm, h: &Cut, moduli: &[u64]) -> Derivations {
    let chain = g.chain();
    let prof = chain.profile(h);
    let (lo, up) = (prof.lower.expect("proper"), prof.upper.expect("non-trivial"));
    let bl = g.block(lo.atom);
    let bu = g.block(up.atom);
    let rigid = |n: u64| !bl.divisible_by(n);
    let mut yes = Vec::new();
    let first = |rule: Rule, ok: &dyn Fn(u64) -> bool, what: &str, yes: &mut Vec<_>| {
        if let Some(n) = moduli.iter().copied().find(|&n| ok(n)) {
            yes.push((rule, Some(n), what.to_string()));
        }
    };
    first(
        Rule::RigidQuotientDivisibleLayer,
        &|n| rigid(n) && bu.divisible_by(n),
        "G/H has no non-trivial n-divisible convex subgroup and the lowest layer of H is n-divisible",
        &mut yes,
    );
    first(
        Rule::RigidQuotientWithMax,
        &|n| lo.extremal && rigid(n),
        "the complement of Φ(H) has a maximum and G/H has no non-trivial n-divisible convex subgroup",
        &mut yes,
    );
    first(
        Rule::DivisibleQuotientOpenSubgroup,
        &|n| !rigid(n) && !up.extremal && !bu.divisible_by(n),
        "G/H has an n-divisible convex subgroup, Φ(H) has no minimum and no H/H' is n-divisible",
        &mut yes,
    );
    first(
        Rule::RigidQuotientWithMin,
        &|n| up.extremal && rigid(n),
        "Φ(H) has a minimum and G/H has no non-trivial n-divisible convex subgroup",
        &mut yes,
    );
    let primes = prime_representatives(g);
    if let Some(&p) = primes.iter().find(|&&p| g.max_divisible(p) == *h) {
        yes.push((Rule::MaximalPDivisible, None, format!("H is the maximal {p}-divisible convex subgroup")));
    }

    let mut no = Vec::new();
    if divisible_by_all(bl, &primes) {
        if divisible_by_all(bu, &primes) {
            no.push((
                Rule::DivisibleQuotientsDivisibleLayer,
                "every G/H has an n-divisible convex subgroup and the lowest layer of H is divisible".into(),
            ));
        }
        if up.extremal {
            no.push((
                Rule::DivisibleQuotientsWithMin,
                "every G/H has an n-divisible convex subgroup and Φ(H) has a minimum".into(),
            ));
        }
    }
    (yes, no)
}

/// Moduli used for the exact finite-index test: the configured ones plus
/// every divisibility pattern of the group.
fn spine_moduli(g: &GroupTerm, moduli: &[u64]) -> Vec<u64> {
    let mut all: BTreeSet<u64> = moduli.iter().copied().collect();
    all.extend(g.default_moduli());
    all.into_iter().collect()
}

fn in_some_spine(g: &GroupTerm, h: &Cut, moduli: &[u64]) -> Result<Option<u64>> {
    for n in spine_moduli(g, moduli) {
        if spine(g, n)?.find(h).is_some() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

pub fn decide_definable(g: &GroupTerm, h: &Cut, moduli: &[u64]) -> Result<Verdict> {
    let h = g.subgroup(h)?;
    if let Some(&n) = moduli.iter().find(|&&n| n < 2) {
        return Err(Error::Precondition(format!("modulus must be at least 2, got {n}")));
    }
    match h {
        Cut::Everything => return Err(Error::Domain("only proper convex subgroups are ranked".into())),
        Cut::Nothing => {
            return Ok(Verdict::Definable {
                rule: Rule::TrivialZero,
                n: None,
                detail: "defined by x = 0".into(),
            })
        }
        _ => {}
    }
    let (yes, no) = derivable(g, &h, moduli);
    if let (Some(y), Some(n)) = (yes.first(), no.first()) {
        return Err(Error::Inconsistent(format!(
            "{} and {} both apply to {}",
            y.0,
            n.0,
            subgroup_label(g, &h)
        )));
    }
    let verdict = if let Some((rule, n, detail)) = yes.into_iter().next() {
        Verdict::Definable { rule, n, detail }
    } else if let Some((rule, detail)) = no.into_iter().next() {
        Verdict::NotDefinable { rule, detail }
    } else if g.has_finite_index() {
        match in_some_spine(g, &h, moduli)? {
            Some(n) => Verdict::Definable {
                rule: Rule::FiniteSpine,
                n: Some(n),
                detail: format!("H is an element of SP_{n}(G)"),
            },
            None => Verdict::NotDefinable {
                rule: Rule::FiniteSpine,
                detail: "H lies in no n-spine of G".into(),
            },
        }
    } else {
        return Ok(Verdict::Unknown(
            "no sufficient condition or obstruction applies and the index is infinite".into(),
        ));
    };
    if g.has_finite_index() && verdict.rule() != Some(Rule::FiniteSpine) {
        let exact = in_some_spine(g, &h, moduli)?.is_some();
        if exact != verdict.is_definable() {
            return Err(Error::Inconsistent(format!(
                "{verdict} disagrees with the spine test for {}",
                subgroup_label(g, &h)
            )));
        }
    }
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrkMember {
    pub label: String,
    pub rep: Cut,
    pub verdict: Verdict,
}

/// Definable proper convex subgroups, named by their cuts of the value set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDrk {
    pub members: Vec<DrkMember>,
    pub undecided: Vec<DrkMember>,
    pub completeness: Completeness,
}

impl fmt::Display for GroupDrk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.members.iter().map(|m| m.label.as_str()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// One representative per class of proper convex subgroups on which the
/// verdict is constant. A family label wins over a single point naming the
/// same subgroup.
fn candidates(g: &GroupTerm) -> Result<Vec<(String, Cut)>> {
    let chain = g.chain();
    let mut out: Vec<(String, Cut, bool)> = vec![("{0}".into(), Cut::Nothing, false)];
    let push = |label: Option<String>, c: &Cut, out: &mut Vec<(String, Cut, bool)>| -> Result<()> {
        let c = chain.canon(c)?;
        if c == Cut::Everything {
            return Ok(());
        }
        match out.iter_mut().find(|(_, x, _)| *x == c) {
            Some(slot) => {
                if let (Some(l), false) = (&label, slot.2) {
                    *slot = (l.clone(), c, true);
                }
            }
            None => {
                let family = label.is_some();
                out.push((label.unwrap_or_else(|| subgroup_label(g, &c)), c, family));
            }
        }
        Ok(())
    };
    if g.has_finite_index() {
        for p in chain.finite_points()?.into_iter().rev() {
            push(None, &Cut::Minus(p), &mut out)?;
        }
    } else {
        for s in layout(chain, &[]) {
            push(None, &s.start, &mut out)?;
            let reps: Vec<_> = match s.kind {
                SegKind::Fibres => s.inner.iter().map(|x| (x.rep.clone(), true)).collect(),
                SegKind::Point => vec![(s.rep.clone(), false)],
                _ => vec![(s.rep.clone(), true)],
            };
            for (p, family) in reps {
                for (side, c) in [("minus", Cut::Minus(p.clone())), ("plus", Cut::Plus(p.clone()))] {
                    let label = family.then(|| format!("{side}(γ) for γ ∈ {s}"));
                    push(label, &c, &mut out)?;
                }
            }
        }
        for class in cut_classes(chain) {
            let label = matches!(class, CutClass::Family { .. }).then(|| class.to_string());
            push(label, class.rep(), &mut out)?;
        }
    }
    Ok(out.into_iter().map(|(l, c, _)| (l, c)).collect())
}

pub fn drk_group(g: &GroupTerm, moduli: &[u64]) -> Result<GroupDrk> {
    let mut d = GroupDrk { members: Vec::new(), undecided: Vec::new(), completeness: Completeness::Complete };
    for (label, rep) in candidates(g)? {
        let verdict = decide_definable(g, &rep, moduli)?;
        let m = DrkMember { label, rep, verdict };
        match m.verdict {
            Verdict::Definable { .. } => d.members.push(m),
            Verdict::NotDefinable { .. } => {}
            Verdict::Unknown(_) => d.undecided.push(m),
        }
    }
    if !d.undecided.is_empty() {
        d.completeness = Completeness::SoundOnly;
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderRankCheck {
    pub holds: bool,
    pub n: Option<u64>,
    pub conclusion: Option<String>,
}

/// Every layer fails n-divisibility for one common n, so each `C(g)` does;
/// then every definable final segment of Γ comes from a definable subgroup.
pub fn order_rank_check(g: &GroupTerm, moduli: &[u64]) -> OrderRankCheck {
    match moduli.iter().copied().find(|&n| g.blocks().iter().all(|b| !b.divisible_by(n))) {
        Some(n) => OrderRankCheck {
            holds: true,
            n: Some(n),
            conclusion: Some("drk_Γ ⊆ Φ_G(drk_G)".into()),
        },
        None => OrderRankCheck { holds: false, n: None, conclusion: None },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::ArchComponent::{Q, Z};
    use crate::orders::OrderTerm;

    fn lex(bs: Vec<ArchComponent>) -> GroupTerm {
        GroupTerm::lex(bs).unwrap()
    }

    fn upper2(g: &GroupTerm) -> Cut {
        g.subgroup(&Cut::AtomBoundary(2)).unwrap()
    }

    fn decide(g: &GroupTerm, h: &Cut) -> Verdict {
        decide_definable(g, h, &g.default_moduli()).unwrap()
    }

    #[test]
    fn divisible_layers_block_definability() {
        let g = lex(vec![Q, Q]);
        let v = decide(&g, &upper2(&g));
        assert_eq!(v.rule(), Some(Rule::DivisibleQuotientsDivisibleLayer));
        assert!(!v.is_definable());
    }

    #[test]
    fn integer_quotients_give_definability() {
        let g = lex(vec![Z, Z]);
        let v = decide(&g, &upper2(&g));
        assert_eq!(v.rule(), Some(Rule::RigidQuotientWithMax));
        assert!(matches!(v, Verdict::Definable { n: Some(2), .. }));
        let g = lex(vec![Z, Q]);
        let v = decide(&g, &upper2(&g));
        assert_eq!(v.rule(), Some(Rule::RigidQuotientDivisibleLayer));
    }

    #[test]
    fn zero_and_whole_group() {
        let g = lex(vec![Z]);
        assert_eq!(decide(&g, &Cut::Nothing).rule(), Some(Rule::TrivialZero));
        assert!(decide_definable(&g, &Cut::Everything, &[2]).is_err());
    }

    #[test]
    fn ranks_of_small_groups() {
        let rank = |g: GroupTerm| drk_group(&g, &g.default_moduli()).unwrap();
        assert_eq!(rank(lex(vec![Q, Q])).to_string(), "{{0}}");
        assert_eq!(rank(lex(vec![Z])).to_string(), "{{0}}");
        let d = rank(lex(vec![Z, Z]));
        assert_eq!(d.to_string(), "{{0}, upper(2)}");
        assert_eq!(d.completeness, Completeness::Complete);
    }

    #[test]
    fn omega_of_integers_is_fully_definable() {
        let g = GroupTerm::new(OrderTerm::Omega, vec![Z]).unwrap();
        let d = drk_group(&g, &g.default_moduli()).unwrap();
        assert_eq!(d.completeness, Completeness::Complete);
        assert!(d.members.len() >= 2);
    }

    #[test]
    fn layer_divisibility_condition() {
        let m = [2, 3, 6];
        let g = GroupTerm::new(OrderTerm::Omega, vec![Z]).unwrap();
        assert_eq!(order_rank_check(&g, &m).n, Some(2));
        assert!(!order_rank_check(&lex(vec![Z, Q]), &m).holds);
        let z2 = ArchComponent::local(2);
        assert_eq!(order_rank_check(&lex(vec![z2.clone(), z2]), &m).n, Some(2));
    }
}
