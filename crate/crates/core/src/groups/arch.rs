//! Archimedean components: subgroups of the rationals given by which
//! primes may appear in denominators.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArchComponent {
    /// The rationals.
    Q,
    /// The integers.
    Z,
    /// Denominators use only these primes.
    Div(BTreeSet<u64>),
    /// Denominators use every prime except these.
    CoDiv(BTreeSet<u64>),
}

impl ArchComponent {
    /// Canonical form: empty prime sets collapse to `Z` or `Q`.
    pub fn div(primes: impl IntoIterator<Item = u64>) -> Self {
        let set: BTreeSet<u64> = primes.into_iter().collect();
        if set.is_empty() {
            ArchComponent::Z
        } else {
            ArchComponent::Div(set)
        }
    }

    pub fn codiv(primes: impl IntoIterator<Item = u64>) -> Self {
        let set: BTreeSet<u64> = primes.into_iter().collect();
        if set.is_empty() {
            ArchComponent::Q
        } else {
            ArchComponent::CoDiv(set)
        }
    }

    /// The localization at `p`: divisible by every prime but `p`.
    pub fn local(p: u64) -> Self {
        ArchComponent::codiv([p])
    }

    pub fn allows(&self, p: u64) -> bool {
        match self {
            ArchComponent::Q => true,
            ArchComponent::Z => false,
            ArchComponent::Div(s) => s.contains(&p),
            ArchComponent::CoDiv(s) => !s.contains(&p),
        }
    }

    pub fn divisible_by(&self, n: u64) -> bool {
        prime_factors(n).iter().all(|&(p, _)| self.allows(p))
    }

    pub fn is_divisible(&self) -> bool {
        *self == ArchComponent::Q
    }

    pub fn is_discrete(&self) -> bool {
        *self == ArchComponent::Z
    }

    pub fn exceptional_primes(&self) -> BTreeSet<u64> {
        match self {
            ArchComponent::Div(s) | ArchComponent::CoDiv(s) => s.clone(),
            _ => BTreeSet::new(),
        }
    }

    pub fn admits(&self, q: &Rational) -> bool {
        prime_factors(q.denom().unsigned_abs()).iter().all(|&(p, _)| self.allows(p))
    }

    /// `q ∈ n·H`, assuming `q ∈ H`.
    pub fn in_multiple(&self, q: &Rational, n: u64) -> bool {
        prime_factors(n)
            .iter()
            .all(|&(p, e)| self.allows(p) || p_valuation(q, p) >= e as i64)
    }
}

impl fmt::Display for ArchComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<u64>| s.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self {
            ArchComponent::Q => write!(f, "Q"),
            ArchComponent::Z => write!(f, "Z"),
            ArchComponent::CoDiv(s) if s.len() == 1 => write!(f, "Z_({})", s.first().unwrap()),
            ArchComponent::Div(s) => write!(f, "arch(div={{{}}})", list(s)),
            ArchComponent::CoDiv(s) => write!(f, "arch(codiv={{{}}})", list(s)),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// p-adic valuation of a nonzero rational (`i64::MAX` for zero).
pub fn p_valuation(q: &Rational, p: u64) -> i64 {
    if *q.numer() == 0 {
        return i64::MAX;
    }
    let count = |mut m: u64| {
        let mut k = 0;
        while m.is_multiple_of(p) {
            m /= p;
            k += 1;
        }
        k
    };
    count(q.numer().unsigned_abs()) - count(q.denom().unsigned_abs())
}

/// The least prime outside `exceptional`.
pub fn generic_prime(exceptional: &BTreeSet<u64>) -> u64 {
    (2..).find(|&p| is_prime(p) && !exceptional.contains(&p)).unwrap()
}

/// Squarefree moduli whose prime sets cover every divisibility pattern of
/// components with the given exceptional primes: all products of subsets
/// of the exceptional primes, 2 and one generic prime (subsets are capped
/// at pairs once more than five primes are involved).
pub fn candidate_moduli(exceptional: &BTreeSet<u64>) -> Vec<u64> {
    let mut primes: BTreeSet<u64> = exceptional.clone();
    primes.insert(2);
    primes.insert(generic_prime(exceptional));
    let primes: Vec<u64> = primes.into_iter().collect();
    let mut out = BTreeSet::new();
    if primes.len() <= 5 {
        for mask in 1u32..(1 << primes.len()) {
            let prod = (0..primes.len())
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| primes[k])
                .product::<u64>();
            out.insert(prod);
        }
    } else {
        for (i, p) in primes.iter().enumerate() {
            out.insert(*p);
            for q in &primes[i + 1..] {
                out.insert(p * q);
            }
        }
    }
    out.into_iter().collect()
}

/// Least candidate not dividing into the component.
pub fn first_obstruction(block: &ArchComponent, moduli: &[u64]) -> Option<u64> {
    moduli.iter().copied().find(|&n| !block.divisible_by(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn localization_is_divisible_by_other_primes() {
        let z2 = ArchComponent::local(2);
        assert!(!z2.divisible_by(2));
        assert!(z2.divisible_by(3));
        assert!(!z2.divisible_by(6));
        assert_eq!(z2.to_string(), "Z_(2)");
    }

    #[test]
    fn multiples_respect_prime_powers() {
        let z = ArchComponent::Z;
        assert!(!z.in_multiple(&Rational::from_integer(1), 2));
        assert!(z.in_multiple(&Rational::from_integer(4), 4));
        assert!(!z.in_multiple(&Rational::from_integer(2), 4));
        let z2 = ArchComponent::local(2);
        assert!(z2.in_multiple(&Rational::from_integer(6), 2));
        assert!(!z2.in_multiple(&Rational::new(1, 3), 2));
        assert!(z2.in_multiple(&Rational::new(2, 3), 6));
    }

    #[test]
    fn moduli_cover_generic_prime() {
        let exc: BTreeSet<u64> = [2].into();
        assert_eq!(candidate_moduli(&exc), vec![2, 3, 6]);
        let exc: BTreeSet<u64> = [2, 3].into();
        assert_eq!(candidate_moduli(&exc), vec![2, 3, 5, 6, 10, 15, 30]);
    }

    #[test]
    fn canonical_empty_specs() {
        assert_eq!(ArchComponent::div([]), ArchComponent::Z);
        assert_eq!(ArchComponent::codiv([]), ArchComponent::Q);
        assert!(ArchComponent::Q.is_divisible());
        assert!(!ArchComponent::div([2, 3]).is_divisible());
    }
}
