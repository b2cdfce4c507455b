//! Seeded random-instance tests for the polynomial growth checkers.

use hwlab_core::gaussmix::{chebyshev_extremal_check, coppersmith_check, erdelyi_check};
use hwlab_core::poly::{chebyshev, UnivariatePoly};
use hwlab_core::rat::{qi, qr, Q};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> UnivariatePoly {
    let deg = rng.gen_range(0..=max_deg);
    let coeffs: Vec<Q> = (0..=deg)
        .map(|_| qr(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
        .collect();
    UnivariatePoly::new(coeffs)
}

#[test]
fn erdelyi_passes_on_1000_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let (m, big_l) = (30i64, qi(1));
    let mut checked = 0;
    while checked < 1000 {
        let q = random_poly(&mut rng, 8);
        let outcome = erdelyi_check(&q, m, &big_l);
        assert!(
            outcome.passed(),
            "instance {checked}: {:?} on {}",
            outcome,
            q
        );
        checked += 1;
    }
}

#[test]
fn coppersmith_passes_on_1000_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut checked = 0;
    while checked < 1000 {
        let d = rng.gen_range(1..=4usize);
        let m = 3 * (d * d) as i64;
        let raw = random_poly(&mut rng, d);
        // scale so that max |p(i)| over i = 0..m is exactly 1
        let peak = (0..=m)
            .map(|i| raw.eval_int(i).abs())
            .max()
            .unwrap_or_else(Q::zero);
        if peak.is_zero() {
            continue;
        }
        let p = raw.scale(&(qi(1) / peak));
        let outcome = coppersmith_check(&p, m);
        assert!(outcome.passed(), "instance {checked}: {:?}", outcome);
        checked += 1;
    }
}

/// Convex combinations of Chebyshev polynomials are bounded by 1 on
/// [-1,1] analytically, so the growth conclusion must hold exactly.
#[test]
fn chebyshev_growth_on_random_combinations() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..300 {
        let deg = rng.gen_range(1..=6usize);
        // nonnegative rational weights summing to <= 1
        let mut remaining = qi(1);
        let mut poly = UnivariatePoly::zero();
        for j in 0..=deg {
            let num = rng.gen_range(0..=3i64);
            let c = &remaining * qr(num, 12);
            remaining -= &c;
            let signed = if rng.gen_bool(0.5) { c } else { -c };
            poly = poly.add(&chebyshev(j).scale(&signed));
        }
        if poly.degree() < 1 {
            continue;
        }
        let s = qr(rng.gen_range(4..=12), rng.gen_range(1..=4)).abs() + qi(1);
        let outcome = chebyshev_extremal_check(&poly, &s);
        assert!(outcome.passed(), "{:?} for p = {} at s = {}", outcome, poly, s);
    }
}
