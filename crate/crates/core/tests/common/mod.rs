#![allow(dead_code)]

use ksctx_core::corpus::corpus_get;
use ksctx_core::{OrthoGraph, RadScalar, Ray, RaySet, Rational};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const SQUARE_FREE: [u64; 10] = [1, 2, 3, 5, 6, 7, 10, 11, 14, 15];

pub fn graph(name: &str) -> OrthoGraph {
    OrthoGraph::build(corpus_get(name).unwrap().rays).unwrap()
}

pub fn closed_graph(name: &str) -> OrthoGraph {
    OrthoGraph::build(corpus_get(name).unwrap().rays.triad_closure().unwrap()).unwrap()
}

pub fn sq(v: &[i64]) -> Ray {
    Ray::from_sqmag(v).unwrap()
}

/// Up to four radicals, coefficients with |num|, den ≤ 100.
pub fn random_scalar(rng: &mut impl Rng) -> RadScalar {
    let n = rng.gen_range(0..=4);
    let mut acc = RadScalar::zero();
    for d in SQUARE_FREE.choose_multiple(rng, n) {
        let q = Rational::new(
            BigInt::from(rng.gen_range(-100i64..=100)),
            BigInt::from(rng.gen_range(1i64..=100)),
        );
        acc = &acc + &RadScalar::term(q, *d).unwrap();
    }
    acc
}

/// Triad closures of small random subsets of `parent`.
pub fn random_closed_subsets(parent: &RaySet, count: usize, seed: u64) -> Vec<RaySet> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(2..=5);
            let picked = parent.rays().choose_multiple(&mut rng, k).cloned();
            let (set, _) = RaySet::from_rays(3, picked).unwrap();
            set.triad_closure().unwrap()
        })
        .collect()
}
