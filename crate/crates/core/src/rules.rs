//! Named inference rules cited by verdicts.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// Principal final segments are defined by `x ≥ a` or `x > a`.
    Principal,
    /// A catalog schema defines the segment.
    Schema,
    /// A non-principal cut inside a convex dense or discrete region.
    OMinimalLocal,
    /// The zero subgroup.
    TrivialZero,
    /// Membership in a finite spine of the group.
    FiniteSpine,
    RigidQuotientWithMax,
    DivisibleQuotientOpenSubgroup,
    RigidQuotientWithMin,
    RigidQuotientDivisibleLayer,
    DivisibleQuotientsWithMin,
    DivisibleQuotientsDivisibleLayer,
    MaximalPDivisible,
    /// A convex valuation whose group-level subgroup lies above `G_0`.
    CoarseningAboveDivisible,
    /// Henselian transfer when some definable valuation is non-trivial.
    HenselianCase1,
    /// Henselian transfer when every definable valuation is trivial.
    HenselianCase2,
    /// Group-level non-definability carries over to the field.
    HenselianTransfer,
    /// Real closed residue with divisible group.
    DivisibleException,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::Principal => "principal",
            Rule::Schema => "schema",
            Rule::OMinimalLocal => "o-minimal-local",
            Rule::TrivialZero => "trivial-zero",
            Rule::FiniteSpine => "finite-spine",
            Rule::RigidQuotientWithMax => "rigid-quotient-with-max",
            Rule::DivisibleQuotientOpenSubgroup => "divisible-quotient-open-subgroup",
            Rule::RigidQuotientWithMin => "rigid-quotient-with-min",
            Rule::RigidQuotientDivisibleLayer => "rigid-quotient-divisible-layer",
            Rule::DivisibleQuotientsWithMin => "divisible-quotients-with-min",
            Rule::DivisibleQuotientsDivisibleLayer => "divisible-quotients-divisible-layer",
            Rule::MaximalPDivisible => "maximal-p-divisible",
            Rule::CoarseningAboveDivisible => "coarsening-above-divisible",
            Rule::HenselianCase1 => "henselian-case1",
            Rule::HenselianCase2 => "henselian-case2",
            Rule::HenselianTransfer => "henselian-transfer",
            Rule::DivisibleException => "divisible-exception",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}
