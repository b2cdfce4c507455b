//! End-to-end pipeline realizations: tail masses survive a k-shift, and
//! slab-concentrated inputs stay concentrated.

use hwlab_core::lp::{construct_k_uniform, extremal_tail, LpStatus, SupportFilter, TailObjective};
use hwlab_core::pmf::WeightPMF;
use hwlab_core::transform::{bu_to_sb, interval_property_check};

/// Anticoncentrated inputs: Pr[Q >= t-k] >= Pr[P >= t] exactly after the
/// pipeline, for the extremal-tail vertices.
#[test]
fn tail_mass_survives_k_shift_for_extremal_inputs() {
    for (n, k, t) in [(60i64, 2i64, 40i64), (100, 4, 50), (36, 2, 24)] {
        let sol = extremal_tail(n, k, t, TailObjective::MaxTail, SupportFilter::All).unwrap();
        let p = sol.primal.unwrap();
        let q = bu_to_sb(&p, k).unwrap();
        assert!(
            q.tail_mass(t - k) >= p.tail_mass(t),
            "(n={n},k={k},t={t}): shifted tail lost mass"
        );
        assert!(interval_property_check(&p, &q, k));
    }
}

/// Mod-class point-mass inputs: the pipeline keeps the planted point's
/// mass within a k-shifted tail.
#[test]
fn tail_mass_survives_k_shift_for_mod_class_inputs() {
    let (n, k) = (144i64, 2i64);
    let m = ((n / (8 * k)) as f64).sqrt().floor() as i64; // = 3
    let t = 14i64;
    let sol = extremal_tail(
        n,
        k,
        t,
        TailObjective::MaxPoint,
        SupportFilter::ModClass {
            modulus: m,
            residue: t.rem_euclid(m),
        },
    )
    .unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    let p = sol.primal.unwrap();
    let q = bu_to_sb(&p, k).unwrap();
    assert!(q.tail_mass(t - k) >= p.tail_mass(t));
}

/// Non-vacuous slab at n = 900: the slab bound 10 sqrt(kn) = 424 really
/// constrains the support, and the pipeline only widens it by 2 floor(k/2).
#[test]
fn slab_stays_concentrated_at_n_900() {
    let (n, k) = (900i64, 2i64);
    let slab = (10.0 * ((k * n) as f64).sqrt()).floor() as i64;
    assert!(slab < n, "slab must bind for this test");
    let input = construct_k_uniform(n, k, |w| w.abs() <= slab, None)
        .unwrap()
        .primal
        .unwrap();
    assert!(input.support().all(|w| w.abs() <= slab));
    let out = bu_to_sb(&input, k).unwrap();
    let max_w = out.support().map(|w| w.abs()).max().unwrap();
    assert!(max_w <= slab + 2 * (k / 2));
    let cap = (21.0 * ((k * n) as f64).sqrt()).floor() as i64;
    assert!(max_w <= cap);
    assert!(out.is_k_uniform(k));
}

/// The smoothing kernel scales every parity bias by rho^l; combined with
/// the pipeline this keeps small-bias outputs small-biased.
#[test]
fn smoothing_scales_biases_geometrically() {
    use hwlab_core::krawtchouk::bias_profile;
    use hwlab_core::noise::smooth;
    use hwlab_core::rat::{q_pow, qr};

    let p = WeightPMF::mixture(&[
        (qr(1, 2), &WeightPMF::slice(10, 4).unwrap()),
        (qr(1, 2), &WeightPMF::slice(10, -2).unwrap()),
    ])
    .unwrap();
    let rho = qr(2, 3);
    let before = bias_profile(&p);
    let after = bias_profile(&smooth(&p, &rho).unwrap());
    for ell in 0..=10usize {
        assert_eq!(
            after.biases[ell],
            before.biases[ell].clone() * q_pow(&rho, ell as i64),
            "bias scaling at ell={ell}"
        );
    }
}
