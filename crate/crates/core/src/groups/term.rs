//! Hahn sums of archimedean components over a term index.

use std::collections::BTreeSet;
use std::fmt;

use super::arch::{candidate_moduli, ArchComponent};
use crate::error::{Error, Result};
use crate::orders::{normalize, Chain, Cut, OrderTerm, Point};

/// `⨿_{i ∈ I} H_i` with one component per atom of the index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTerm {
    index: OrderTerm,
    chain: Chain,
    blocks: Vec<ArchComponent>,
}

impl GroupTerm {
    pub fn new(index: OrderTerm, blocks: Vec<ArchComponent>) -> Result<Self> {
        index.check()?;
        let chain = Chain::new(&index);
        if chain.is_empty() {
            return Err(Error::Structure("the index of a group must be non-empty".into()));
        }
        if chain.len() != blocks.len() {
            return Err(Error::Structure(format!(
                "index has {} atoms but {} components were given",
                chain.len(),
                blocks.len()
            )));
        }
        let index = chain.term();
        Ok(GroupTerm { index, chain, blocks })
    }

    /// Finite lexicographic sum, leading component first.
    pub fn lex(blocks: Vec<ArchComponent>) -> Result<Self> {
        let index = OrderTerm::Sum(vec![OrderTerm::Fin(1); blocks.len()]);
        GroupTerm::new(index, blocks)
    }

    pub fn index(&self) -> &OrderTerm {
        &self.index
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn blocks(&self) -> &[ArchComponent] {
        &self.blocks
    }

    /// Component of a 1-based atom.
    pub fn block(&self, atom: usize) -> &ArchComponent {
        &self.blocks[atom - 1]
    }

    pub fn block_at(&self, p: &Point) -> &ArchComponent {
        self.block(p.atom)
    }

    pub fn is_lex(&self) -> bool {
        self.chain.atoms().iter().all(|a| *a == OrderTerm::Fin(1))
    }

    pub fn has_finite_index(&self) -> bool {
        self.index.is_finite()
    }

    pub fn exceptional_primes(&self) -> BTreeSet<u64> {
        self.blocks.iter().flat_map(ArchComponent::exceptional_primes).collect()
    }

    pub fn default_moduli(&self) -> Vec<u64> {
        candidate_moduli(&self.exceptional_primes())
    }

    /// The value set of the natural valuation.
    pub fn gamma(&self) -> OrderTerm {
        normalize(&self.index).expect("index was checked")
    }

    pub fn subgroup(&self, cut: &Cut) -> Result<Cut> {
        self.chain.canon(cut)
    }

    /// Sum over the lower part of the index.
    pub fn quotient(&self, h: &Cut) -> Result<GroupTerm> {
        let h = self.subgroup(h)?;
        if h == Cut::Everything {
            return Err(Error::Domain("G/G is the zero group".into()));
        }
        let (atoms, blocks): (Vec<_>, Vec<_>) = self
            .chain
            .lower_atoms(&h)
            .into_iter()
            .map(|(i, a)| (a, self.block(i).clone()))
            .unzip();
        GroupTerm::new(OrderTerm::Sum(atoms), blocks)
    }

    pub fn divisible_by(&self, n: u64) -> bool {
        self.blocks.iter().all(|b| b.divisible_by(n))
    }

    /// `G_p` for a prime `p`, or `G_0` for `p = 0`.
    pub fn max_divisible(&self, p: u64) -> Cut {
        let ok = |b: &ArchComponent| if p == 0 { b.is_divisible() } else { b.allows(p) };
        match self.blocks.iter().rposition(|b| !ok(b)) {
            None => Cut::Everything,
            Some(j) => self.chain.canon(&Cut::AtomBoundary(j + 2)).expect("boundary in range"),
        }
    }

    /// Every quotient by a non-zero convex subgroup is n-divisible: all
    /// components are, except possibly the one at a single maximal point.
    pub fn is_n_regular(&self, n: u64) -> bool {
        let last = self.blocks.len() - 1;
        self.blocks.iter().enumerate().all(|(j, b)| {
            b.divisible_by(n) || (j == last && self.chain.atoms()[j] == OrderTerm::Fin(1))
        })
    }

    /// `G/H` has a least positive element: the lower part has a maximum
    /// whose component is discrete.
    pub fn quotient_is_discrete(&self, h: &Cut) -> bool {
        match self.chain.profile(h).lower {
            Some(side) if side.extremal => self.block(side.atom).is_discrete(),
            _ => false,
        }
    }
}

impl fmt::Display for GroupTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        if self.is_lex() {
            write!(f, "lex({})", blocks.join(", "))
        } else {
            write!(f, "hahn({}; {})", self.index, blocks.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::Locator;
    use ArchComponent::{Q, Z};

    fn z2() -> ArchComponent {
        ArchComponent::local(2)
    }

    #[test]
    fn value_set_of_two_rational_layers() {
        assert_eq!(GroupTerm::lex(vec![Q, Q]).unwrap().gamma(), OrderTerm::Fin(2));
        let g = GroupTerm::new(OrderTerm::Omega, vec![Z]).unwrap();
        assert_eq!(g.gamma(), OrderTerm::Omega);
    }

    #[test]
    fn quotients_drop_included_layers() {
        let g = GroupTerm::lex(vec![Z, Q]).unwrap();
        assert_eq!(g.quotient(&Cut::AtomBoundary(2)).unwrap(), GroupTerm::lex(vec![Z]).unwrap());
        let g = GroupTerm::lex(vec![z2(), Q, Z]).unwrap();
        assert_eq!(g.quotient(&Cut::AtomBoundary(3)).unwrap(), GroupTerm::lex(vec![z2(), Q]).unwrap());
        let g = GroupTerm::new(OrderTerm::Omega, vec![Z]).unwrap();
        assert_eq!(g.quotient(&Cut::Nothing).unwrap(), g);
        assert!(g.quotient(&Cut::Everything).is_err());
    }

    #[test]
    fn maximal_divisible_subgroups() {
        let g = GroupTerm::lex(vec![z2(), Q]).unwrap();
        let upper2 = Cut::Minus(Point::new(2, Locator::Fin(0)));
        assert_eq!(g.max_divisible(2), upper2);
        assert_eq!(g.max_divisible(3), Cut::Everything);
        assert_eq!(GroupTerm::lex(vec![Z, Z]).unwrap().max_divisible(0), Cut::Nothing);
    }

    #[test]
    fn regularity_allows_only_a_last_rigid_point() {
        assert!(GroupTerm::lex(vec![Z]).unwrap().is_n_regular(2));
        assert!(!GroupTerm::lex(vec![Z, z2()]).unwrap().is_n_regular(2));
        assert!(GroupTerm::lex(vec![Q, Z]).unwrap().is_n_regular(2));
        assert!(!GroupTerm::new(OrderTerm::Omega, vec![Z]).unwrap().is_n_regular(2));
        assert!(!GroupTerm::new(OrderTerm::Fin(2), vec![Z]).unwrap().is_n_regular(2));
    }

    #[test]
    fn discrete_quotient_needs_a_last_integer_layer() {
        let g = GroupTerm::lex(vec![Q, Z, Q]).unwrap();
        assert!(g.quotient_is_discrete(&g.subgroup(&Cut::AtomBoundary(3)).unwrap()));
        assert!(!g.quotient_is_discrete(&g.subgroup(&Cut::AtomBoundary(2)).unwrap()));
        let h = GroupTerm::new(OrderTerm::sum([OrderTerm::Omega, OrderTerm::Fin(1)]), vec![Z, Q]).unwrap();
        assert!(!h.quotient_is_discrete(&h.subgroup(&Cut::AtomBoundary(2)).unwrap()));
    }
}
