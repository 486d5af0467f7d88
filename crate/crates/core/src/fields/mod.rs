//! Power series fields `k((G))` with archimedean residue field, their
//! convex valuations (named by convex subgroups of `G`) and the transfer of
//! definability from the value group.

use std::fmt;

use crate::error::{Error, Result};
use crate::groups::GroupTerm;
use crate::orders::layout::layout;
use crate::orders::props::sample_points;
use crate::orders::{Cut, DensePoint, Locator, Point};
use crate::rules::Rule;
use crate::orders::Completeness;
use crate::spines::{decide_definable, drk_group, subgroup_label, GroupDrk, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSpec {
    pub name: String,
    pub archimedean: bool,
    pub real_closed: bool,
}

impl ResidueSpec {
    pub fn new(name: impl Into<String>, real_closed: bool) -> Self {
        ResidueSpec { name: name.into(), archimedean: true, real_closed }
    }

    /// The real algebraic numbers.
    pub fn rcf() -> Self {
        ResidueSpec::new("rcf", true)
    }

    pub fn rationals() -> Self {
        ResidueSpec::new("Q", false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTerm {
    residue: ResidueSpec,
    group: GroupTerm,
}

impl FieldTerm {
    pub fn new(residue: ResidueSpec, group: GroupTerm) -> Result<Self> {
        if !residue.archimedean {
            return Err(Error::Structure(format!("residue field {} must be archimedean", residue.name)));
        }
        Ok(FieldTerm { residue, group })
    }

    pub fn residue(&self) -> &ResidueSpec {
        &self.residue
    }

    pub fn group(&self) -> &GroupTerm {
        &self.group
    }
}

impl fmt::Display for FieldTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ps({}, {})", self.residue.name, self.group)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldProps {
    pub real_closed: bool,
    pub henselian_vnat: bool,
}

pub fn field_props(k: &FieldTerm) -> FieldProps {
    let divisible = k.group.blocks().iter().all(|b| b.is_divisible());
    FieldProps { real_closed: k.residue.real_closed && divisible, henselian_vnat: true }
}

/// Name of the convex valuation whose ring maps to `h`.
pub fn valuation_label(g: &GroupTerm, h: &Cut) -> String {
    match h {
        Cut::Nothing => "O_vnat".into(),
        other => format!("Φ_K⁻¹({})", subgroup_label(g, other)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferCase {
    /// `Φ_K(drk_K) = drk_G`
    Case1,
    /// `Φ_K(drk_K) = drk_G ∖ {{0}}`
    Case2,
}

impl fmt::Display for TransferCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransferCase::Case1 => "case1",
            TransferCase::Case2 => "case2",
        })
    }
}

/// Case 1 iff the residue field is not real closed or some `G_p` is zero.
pub fn transfer_case(k: &FieldTerm) -> TransferCase {
    let g = &k.group;
    let mut primes: Vec<u64> = g.exceptional_primes().into_iter().collect();
    primes.push(crate::groups::arch::generic_prime(&g.exceptional_primes()));
    if !k.residue.real_closed || primes.iter().any(|&p| g.max_divisible(p) == Cut::Nothing) {
        TransferCase::Case1
    } else {
        TransferCase::Case2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDrk {
    pub case: TransferCase,
    pub rule: Rule,
    /// Definable convex valuations, named by their subgroups.
    pub members: Vec<(String, Cut)>,
    pub group_rank: GroupDrk,
    pub completeness: Completeness,
}

impl fmt::Display for FieldDrk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.members.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<&str> = self.members.iter().map(|(l, _)| l.as_str()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn drk_field(k: &FieldTerm, moduli: &[u64]) -> Result<FieldDrk> {
    let g = &k.group;
    let group_rank = drk_group(g, moduli)?;
    let case = transfer_case(k);
    let rule = match case {
        TransferCase::Case1 => Rule::HenselianCase1,
        _ if field_props(k).real_closed => Rule::DivisibleException,
        TransferCase::Case2 => Rule::HenselianCase2,
    };
    let members = group_rank
        .members
        .iter()
        .filter(|m| case == TransferCase::Case1 || m.rep != Cut::Nothing)
        .map(|m| {
            let label = match m.rep {
                Cut::Nothing => "O_vnat".to_string(),
                _ => format!("Φ_K⁻¹({})", m.label),
            };
            (label, m.rep.clone())
        })
        .collect();
    let completeness = group_rank.completeness;
    Ok(FieldDrk { case, rule, members, group_rank, completeness })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldVerdict {
    pub verdict: Verdict,
    /// Derivation steps, outermost last.
    pub chain: Vec<String>,
}

/// Definability of the convex valuation `Φ_K⁻¹(h)`.
pub fn lift_definability(k: &FieldTerm, h: &Cut, moduli: &[u64]) -> Result<FieldVerdict> {
    let g = &k.group;
    let h = g.subgroup(h)?;
    if h == Cut::Everything {
        return Err(Error::Domain("the trivial valuation is not a proper coarsening".into()));
    }
    let name = valuation_label(g, &h);
    let group = decide_definable(g, &h, moduli)?;
    let mut chain = vec![format!("group level: {} is {group}", subgroup_label(g, &h))];
    let verdict = match &group {
        Verdict::Unknown(why) => Verdict::Unknown(why.clone()),
        Verdict::NotDefinable { .. } => {
            chain.push("every definable convex valuation maps to a definable convex subgroup".into());
            Verdict::NotDefinable {
                rule: Rule::HenselianTransfer,
                detail: format!("{name} is not definable since its subgroup is not"),
            }
        }
        Verdict::Definable { .. } => {
            let g0 = g.max_divisible(0);
            let chain_ = g.chain();
            if chain_.cut_subset(&g0, &h) && g0 != h {
                chain.push(format!("G_0 = {} is strictly inside H", subgroup_label(g, &g0)));
                chain.push(format!(
                    "compose a definable valuation w below {name} with the group formula: w(a) > 0 ∨ w(a) ∈ H"
                ));
                Verdict::Definable {
                    rule: Rule::CoarseningAboveDivisible,
                    n: None,
                    detail: format!("{name} is a definable coarsening"),
                }
            } else {
                let case = transfer_case(k);
                chain.push(format!("H ⊆ G_0, so the henselian dichotomy decides ({case})"));
                match case {
                    TransferCase::Case1 => Verdict::Definable {
                        rule: Rule::HenselianCase1,
                        n: None,
                        detail: format!("{name} is definable since Φ_K(drk_K) = drk_G"),
                    },
                    TransferCase::Case2 if h == Cut::Nothing => Verdict::NotDefinable {
                        rule: Rule::HenselianCase2,
                        detail: "the natural valuation is not definable since Φ_K(drk_K) = drk_G ∖ {{0}}"
                            .into(),
                    },
                    TransferCase::Case2 => Verdict::Definable {
                        rule: Rule::HenselianCase2,
                        n: None,
                        detail: format!("{name} is definable since Φ_K(drk_K) = drk_G ∖ {{{{0}}}}"),
                    },
                }
            }
        }
    };
    if let (Verdict::NotDefinable { .. }, true) = (&verdict, group.is_definable()) {
        let g0 = g.max_divisible(0);
        if h != Cut::Nothing && h != g0 {
            return Err(Error::Inconsistent(format!(
                "{name} is group-definable but neither {{0}} nor G_0"
            )));
        }
    }
    Ok(FieldVerdict { verdict, chain })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientReason {
    Discrete,
    NotClosedInDivHull,
}

impl fmt::Display for QuotientReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuotientReason::Discrete => "discrete",
            QuotientReason::NotClosedInDivHull => "not closed in its divisible hull",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseningWitness {
    pub h_a: Cut,
    pub h_b: Cut,
    pub n: u64,
    pub g: Point,
    pub reason: QuotientReason,
}

/// A point of atom `k` in the upper part of `h`, least among the sampled
/// ones.
fn point_in(g: &GroupTerm, h: &Cut, k: usize) -> Option<Point> {
    let chain = g.chain();
    let pins: Vec<Point> = match h {
        Cut::Minus(p) | Cut::Plus(p) => vec![p.clone()],
        Cut::DenseGap(i, l) => vec![Point::new(*i, Locator::Dense(DensePoint::At(l + 1)))],
        _ => vec![],
    };
    let mut cands = sample_points(&layout(chain, &pins));
    cands.extend(chain.atom_min(k));
    cands.extend(chain.atom_max(k));
    if let Cut::Plus(p) = h {
        cands.extend(chain.succ(p));
    }
    cands
        .into_iter()
        .filter(|p| p.atom == k && chain.contains(h, p))
        .min_by(|a, b| chain.cmp_points(a, b))
}

/// For `G_0 ⊊ H`: a unit `g ∈ H` outside `G_0` with `g + G_0` not
/// n-divisible, `H_a = B(g)` and `H_b = F_n(g)`.
pub fn coarsening_witness(g: &GroupTerm, h: &Cut, moduli: &[u64]) -> Result<CoarseningWitness> {
    let chain = g.chain();
    let h = g.subgroup(h)?;
    let g0 = g.max_divisible(0);
    if !chain.cut_subset(&g0, &h) || g0 == h {
        return Err(Error::Precondition(format!(
            "{} is not strictly above G_0 = {}",
            subgroup_label(g, &h),
            subgroup_label(g, &g0)
        )));
    }
    let first = chain.profile(&h).upper.expect("H is above G_0").atom;
    for k in first..=chain.len() {
        let block = g.block(k);
        let Some(n) = moduli.iter().copied().find(|&n| !block.divisible_by(n)) else { continue };
        let Some(p) = point_in(g, &h, k) else { continue };
        let h_a = chain.canon(&Cut::Minus(p.clone()))?;
        let h_b = chain.canon(&Cut::Plus(p.clone()))?;
        let reason = if block.is_discrete() {
            QuotientReason::Discrete
        } else {
            QuotientReason::NotClosedInDivHull
        };
        return Ok(CoarseningWitness { h_a, h_b, n, g: p, reason });
    }
    Err(Error::Precondition("no layer of H outside G_0 fails divisibility for the given moduli".into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchCheck {
    pub consistent: bool,
    pub violations: Vec<String>,
}

/// Necessary conditions for elementary equivalence with an archimedean
/// field; passing them proves nothing.
pub fn arch_equiv_necessary(k: &FieldTerm) -> Result<ArchCheck> {
    let mut violations = Vec::new();
    if !k.residue.real_closed {
        violations.push("residue field not real closed".to_string());
    }
    if !k.group.blocks().iter().all(|b| b.is_divisible()) {
        violations.push("value group not divisible".to_string());
    }
    Ok(ArchCheck { consistent: violations.is_empty(), violations })
}
