//! The exact LP maxima against the analytic moment bounds: the strongest
//! form of the tail-bound consistency checks, since the left side ranges
//! over ALL (2k)-uniform weight laws, not samples of them.

use hwlab_core::distinguish::fact2_bound;
use hwlab_core::lp::{extremal_tail, SupportFilter, TailObjective};
use hwlab_core::pmf::weight_grid;
use hwlab_core::rat::{q_from_f64, qr};

#[test]
fn two_sided_extremal_tail_below_moment_bound() {
    let slack = qr(1, 1_000_000_000_000); // 1e-12
    for &(n, k) in &[(20i64, 1i64), (20, 2), (40, 2), (60, 3)] {
        for t in weight_grid(n).into_iter().filter(|&t| t >= 2) {
            let sol = extremal_tail(n, 2 * k, t, TailObjective::TwoSided, SupportFilter::All)
                .unwrap();
            let lp_max = sol.value.unwrap();
            let bound = q_from_f64(fact2_bound(n, k, t as f64)) + &slack;
            assert!(
                lp_max <= bound,
                "(n={n}, 2k={}, t={t}): two-sided extremal exceeds moment bound",
                2 * k
            );
        }
    }
}

/// The signed-gap objective dominates both one-sided deviations from the
/// binomial by construction.
#[test]
fn signed_gap_dominates_one_sided_gaps() {
    use hwlab_core::pmf::WeightPMF;
    let (n, k, t) = (16i64, 2i64, 6i64);
    let gap = extremal_tail(n, k, t, TailObjective::SignedGap, SupportFilter::All)
        .unwrap()
        .value
        .unwrap();
    let btail = WeightPMF::binomial(n).unwrap().tail_mass(t);
    let hi = extremal_tail(n, k, t, TailObjective::MaxTail, SupportFilter::All)
        .unwrap()
        .value
        .unwrap();
    assert!(gap >= hi - btail);
    assert!(gap >= qr(0, 1));
}
