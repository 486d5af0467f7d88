//! Randomized invariants of the order and group layers.

use std::collections::HashMap;

use oagrank_core::groups::{ArchComponent, GroupElement, GroupTerm, Rational};
use oagrank_core::orders::fo::{self, fo_eval_finite};
use oagrank_core::orders::schema::catalog;
use oagrank_core::orders::{condense, condense_iter, normalize, schema_extension, Chain, Extension, Locator, OrderTerm, Point};
use proptest::prelude::*;

fn simple_atom() -> impl Strategy<Value = OrderTerm> {
    prop_oneof![
        (1u64..4).prop_map(OrderTerm::Fin),
        Just(OrderTerm::Omega),
        Just(OrderTerm::OmegaStar),
        Just(OrderTerm::Zeta),
        (any::<bool>(), any::<bool>()).prop_map(|(has_min, has_max)| OrderTerm::Dense { has_min, has_max }),
    ]
}

fn atom() -> impl Strategy<Value = OrderTerm> {
    prop_oneof![
        4 => simple_atom(),
        1 => (prop::collection::vec(simple_atom().prop_filter("discrete", |a| !matches!(a, OrderTerm::Dense { .. })), 1..3))
            .prop_map(|s| OrderTerm::repl(OrderTerm::dense(), OrderTerm::sum(s))),
    ]
}

fn order() -> impl Strategy<Value = OrderTerm> {
    prop::collection::vec(atom(), 1..5).prop_map(OrderTerm::sum)
}

fn component() -> impl Strategy<Value = ArchComponent> {
    prop_oneof![
        Just(ArchComponent::Z),
        Just(ArchComponent::Q),
        Just(ArchComponent::local(2)),
        Just(ArchComponent::local(3)),
        Just(ArchComponent::div([2])),
    ]
}

fn group_and_elements() -> impl Strategy<Value = (GroupTerm, Vec<Vec<(usize, i64)>>)> {
    prop::collection::vec(component(), 1..5).prop_flat_map(|blocks| {
        let rank = blocks.len();
        let g = GroupTerm::lex(blocks).unwrap();
        let elem = prop::collection::vec((1..=rank, -6i64..=6), 0..4);
        (Just(g), prop::collection::vec(elem, 3))
    })
}

fn element(g: &GroupTerm, es: &[(usize, i64)]) -> GroupElement {
    let entries = es
        .iter()
        .map(|&(i, q)| (Point::new(i, Locator::Fin(0)), Rational::from_integer(q)))
        .collect();
    GroupElement::new(g, entries).unwrap()
}

proptest! {
    #[test]
    fn normalize_is_idempotent(t in order()) {
        let n = normalize(&t).unwrap();
        prop_assert_eq!(normalize(&n).unwrap(), n);
    }

    #[test]
    fn condensation_reaches_a_fixpoint(t in order()) {
        let (c, _, fixed) = condense_iter(&t, 4).unwrap();
        prop_assert!(fixed, "{} did not stabilise", t);
        let u = normalize(&c.underlying()).unwrap();
        prop_assert_eq!(normalize(&condense(&u).unwrap().underlying()).unwrap(), u);
    }

    #[test]
    fn finite_orders_condense_to_one_class(parts in prop::collection::vec(1u64..4, 1..4)) {
        let t = OrderTerm::sum(parts.iter().map(|&n| OrderTerm::Fin(n)));
        let total: u64 = parts.iter().sum();
        let c = condense(&t).unwrap();
        prop_assert_eq!(c.atoms.len(), 1);
        let f = fo::condensation("x", "y");
        for x in 0..total as usize {
            for y in 0..total as usize {
                let env: HashMap<String, usize> = [("x".to_string(), x), ("y".to_string(), y)].into();
                prop_assert!(fo_eval_finite(&t, &f, &env).unwrap());
            }
        }
    }

    #[test]
    fn schema_extensions_match_literal_evaluation(parts in prop::collection::vec(1u64..4, 1..4)) {
        let t = OrderTerm::sum(parts.iter().map(|&n| OrderTerm::Fin(n)));
        let chain = Chain::new(&t);
        let points = chain.finite_points().unwrap();
        prop_assume!(points.len() <= 8);
        let index = |p: &Point| points.iter().position(|q| q == p).unwrap();
        for schema in catalog(&points) {
            let Extension::Segment(cut) = schema_extension(&t, &schema).unwrap() else {
                continue;
            };
            let f = schema.formula();
            for (k, p) in points.iter().enumerate() {
                let mut env: HashMap<String, usize> = [("x".to_string(), k)].into();
                for (j, a) in schema.params().iter().enumerate() {
                    env.insert(format!("p{j}"), index(a));
                }
                prop_assert_eq!(
                    fo_eval_finite(&t, &f, &env).unwrap(),
                    chain.contains(&cut, p),
                    "{} at {}", schema, p
                );
            }
        }
    }

    #[test]
    fn group_order_and_valuation((g, es) in group_and_elements()) {
        let (x, y, z) = (element(&g, &es[0]), element(&g, &es[1]), element(&g, &es[2]));
        let before = x.cmp(&g, &y).unwrap();
        let after = x.add(&g, &z).unwrap().cmp(&g, &y.add(&g, &z).unwrap()).unwrap();
        prop_assert_eq!(before, after);
        let s = x.add(&g, &y).unwrap();
        if let (Ok(vs), Ok(vx), Ok(vy)) = (s.v(), x.v(), y.v()) {
            let least = if g.chain().cmp_points(vx, vy).is_le() { vx } else { vy };
            prop_assert!(g.chain().cmp_points(vs, least).is_ge());
        }
        for p in [2u64, 3, 5] {
            prop_assert!(g.chain().cut_subset(&g.max_divisible(0), &g.max_divisible(p)));
        }
    }
}
