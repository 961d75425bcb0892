//! Seeded random elements for property checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeff::{FqElem, FqField};
use crate::ring::Ring;
use crate::series::KElt;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fq<R: Rng>(rng: &mut R, field: &'static FqField) -> FqElem {
    field.element(rng.gen_range(0..field.q()))
}

pub fn fq_nonzero<R: Rng>(rng: &mut R, field: &'static FqField) -> FqElem {
    field.element(rng.gen_range(1..field.q()))
}

/// Sum of `1..=max_terms` monomials `c t^a pi^b` with exponents in the given
/// inclusive ranges; may cancel to zero.
pub fn k_poly<R: Rng>(
    rng: &mut R,
    field: &'static FqField,
    t: (i64, i64),
    pi: (i64, i64),
    max_terms: usize,
) -> KElt {
    let n = rng.gen_range(1..=max_terms);
    let terms: Vec<KElt> = (0..n)
        .map(|_| KElt::term(fq_nonzero(rng, field), rng.gen_range(t.0..=t.1), rng.gen_range(pi.0..=pi.1)))
        .collect();
    KElt::sum_all(field, terms).expect("exact sums")
}

pub fn k_poly_nonzero<R: Rng>(
    rng: &mut R,
    field: &'static FqField,
    t: (i64, i64),
    pi: (i64, i64),
    max_terms: usize,
) -> KElt {
    loop {
        let x = k_poly(rng, field, t, pi, max_terms);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A nonzero element of `K` whose inverse is cheap: a monomial, or a
/// monomial times `1 + (something in pi A)`.
pub fn k_unit_like<R: Rng>(rng: &mut R, field: &'static FqField) -> KElt {
    let mono = KElt::term(fq_nonzero(rng, field), rng.gen_range(-2..=2), rng.gen_range(-2..=2));
    if rng.gen_bool(0.5) {
        return mono;
    }
    let tail = k_poly(rng, field, (-2, 2), (1, 2), 2);
    mono.mul(&KElt::one(field).add(&tail).expect("exact")).expect("exact")
}
