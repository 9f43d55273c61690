#![allow(dead_code)]

use lukasiewicz::formula::Formula;
use lukasiewicz::semantics::{Rat, Valuation};
use proptest::prelude::*;
use rand::Rng;

pub fn formula(depth: u32, vars: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Bottom),
        6 => prop::sample::select(vars).prop_map(Formula::prop),
    ];
    leaf.prop_recursive(depth, 96, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::conj(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

pub fn rat() -> impl Strategy<Value = Rat> {
    (1i64..=12).prop_flat_map(|d| (0..=d).prop_map(move |n| Rat::new(n, d)))
}

pub fn valuation(vars: &'static [&'static str]) -> impl Strategy<Value = Valuation> {
    prop::collection::vec(rat(), vars.len()).prop_map(move |xs| {
        let mut v = Valuation::new();
        for (name, x) in vars.iter().zip(xs) {
            v.set(*name, x).unwrap();
        }
        v
    })
}

pub fn random_valuation<R: Rng>(rng: &mut R, vars: &[&str]) -> Valuation {
    let mut v = Valuation::new();
    for name in vars {
        let d = rng.gen_range(1..=12);
        v.set(*name, Rat::new(rng.gen_range(0..=d), d)).unwrap();
    }
    v
}
