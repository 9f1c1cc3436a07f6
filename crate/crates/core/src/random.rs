//! Seeded generators for property batches.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebroid::{subsets, MixedTensor, Multivector, Presentation};
use crate::deform::{Generator, MultiDerivation};
use crate::exactcore::{qf, Monomial, Poly, Rational};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-stream seed derived from a master seed.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    master
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xBF58_476D_1CE4_E5B9))
        ^ (stream << 17)
}

pub fn small_int(rng: &mut TestRng) -> i64 {
    rng.gen_range(-3..=3)
}

pub fn small_rational(rng: &mut TestRng) -> Rational {
    let den = if rng.gen_bool(0.25) {
        rng.gen_range(2..=3)
    } else {
        1
    };
    qf(small_int(rng), den)
}

/// Random polynomial of degree ≤ `deg` with a few small coefficients.
pub fn poly(rng: &mut TestRng, num_vars: usize, deg: u32) -> Poly {
    let mut terms = Vec::new();
    for mono in Monomial::up_to_degree(num_vars, deg) {
        if rng.gen_bool(0.5) {
            terms.push((mono, small_rational(rng)));
        }
    }
    Poly::from_terms(num_vars, terms)
}

/// Random section of ∧^q A with coefficient degree ≤ `deg`.
pub fn multivector(rng: &mut TestRng, p: &Presentation, q: usize, deg: u32) -> Multivector {
    let mut out = p.zero_mv();
    for s in subsets(p.n(), q) {
        if rng.gen_bool(0.6) {
            out += &p.blade(&s, poly(rng, p.m(), deg));
        }
    }
    out
}

/// A random tensor in TM ⊗ ∧^{k−1} A.
pub fn tm_tensor(rng: &mut TestRng, p: &Presentation, k: usize, deg: u32) -> MixedTensor {
    let comps: Vec<Multivector> = (0..p.m())
        .map(|_| multivector(rng, p, k - 1, deg))
        .collect();
    MixedTensor::from_components(p, &comps)
}

/// Random rational point of the base.
pub fn point(rng: &mut TestRng, m: usize) -> Vec<Rational> {
    (0..m).map(|_| small_rational(rng)).collect()
}

/// Random multiderivation of bidegree (n, p) with values of coefficient
/// degree ≤ 1.
pub fn multiderivation(rng: &mut TestRng, p: &Presentation, n: i64, pdeg: i64) -> MultiDerivation {
    MultiDerivation::from_generator_values(p, n, pdeg, |gens| {
        let coords = gens
            .iter()
            .filter(|g| matches!(g, Generator::Coord(_)))
            .count() as i64;
        let q = pdeg + 1 - coords;
        Ok(if q < 0 {
            p.zero_mv()
        } else {
            multivector(rng, p, q as usize, 1)
        })
    })
    .expect("bidegree is in range")
}
