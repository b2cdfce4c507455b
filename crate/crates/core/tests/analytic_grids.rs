//! Grid verifications with empirically established, pinned ranges:
//! the Bernstein-type smoothing tail with c = 1/8, and the lattice-aware
//! binomial-vs-normal tail comparison.

use hwlab_core::distinguish::{bernstein_noise_bound, normal_tail};
use hwlab_core::noise::smooth;
use hwlab_core::pmf::WeightPMF;
use hwlab_core::rat::{q_from_f64, q_to_f64, qi, qr, Q};
use num_traits::Signed;

/// Exact smoothed deviation tails stay below 2 exp(-s^2/8((1-rho^2)n+s)).
///
/// The constant 1/8 was verified to suffice on this whole grid before
/// being pinned here; it also follows from the two-sided Bernstein bound
/// with |Y_i| <= 2 since 8((1-rho^2)n + s) >= 2(1-rho^2)n + 4s/3.
#[test]
fn noise_tail_constant_one_eighth_on_grid() {
    let rhos = [qi(0), qr(1, 4), qr(1, 2), qr(3, 4), qr(9, 10)];
    for n in 1..=20i64 {
        for t in (-n..=n).step_by(2) {
            let slice = WeightPMF::slice(n, t).unwrap();
            for rho in &rhos {
                let out = smooth(&slice, rho).unwrap();
                let center = rho * qi(t);
                let rho_f = q_to_f64(rho);
                // attained deviation values; checking each covers all s > 0
                let mut devs: Vec<Q> = out
                    .support()
                    .map(|w| (qi(w) - &center).abs())
                    .filter(|d| d > &Q::from_integer(0.into()))
                    .collect();
                devs.sort();
                devs.dedup();
                for d in devs {
                    let mut lhs = Q::from_integer(0.into());
                    for (w, mass) in out.iter() {
                        if (qi(w) - &center).abs() >= d {
                            lhs += mass;
                        }
                    }
                    let bound = bernstein_noise_bound(n, rho_f, q_to_f64(&d), 0.125);
                    assert!(
                        lhs <= q_from_f64(bound) + qr(1, 1_000_000_000_000),
                        "n={n}, t={t}, rho={rho}, s={d}"
                    );
                }
            }
        }
    }
}

/// Binomial tails dominate the normal tail at atom-aligned thresholds.
///
/// The valid range was established by a brute-force sweep: at n = 64 the
/// inequality Pr[B >= t] >= Pr[N(0,1) >= t/sqrt(n)] holds for every even
/// t in [2, 36] and first fails at t = 38; at n = 256 it holds on [2, 92]
/// and first fails at t = 94. Off-atom thresholds fail much earlier from
/// lattice effects, so the pinned grid is the atom-aligned one.
#[test]
fn binomial_tail_dominates_normal_on_pinned_grid() {
    for (n, max_ok, first_fail) in [(64i64, 36i64, 38i64), (256, 92, 94)] {
        let b = WeightPMF::binomial(n).unwrap();
        let root = (n as f64).sqrt();
        for t in (2..=max_ok).step_by(2) {
            let lhs = b.tail_mass(t);
            let rhs = normal_tail(t as f64 / root);
            assert!(
                lhs >= q_from_f64(rhs),
                "n={n}, t={t}: binomial tail below normal tail"
            );
        }
        let lhs = b.tail_mass(first_fail);
        let rhs = normal_tail(first_fail as f64 / root);
        assert!(
            lhs < q_from_f64(rhs),
            "n={n}: expected first failure at t={first_fail}"
        );
    }
}
