//! Brute-force string-enumeration agreement for the core and Krawtchouk
//! operations, at dimensions where 2^n enumeration is instant.

use hwlab_core::krawtchouk::{bias_profile, lemma13_bound, slice_bias};
use hwlab_core::pmf::{weight_grid, WeightPMF};
use hwlab_core::rat::{q_from_f64, qi, qr, Q};
use hwlab_core::verify::oracle::{bias_by_enumeration, string_mass, strings};
use num_traits::{One, Zero};

/// A few exchangeable test distributions per dimension.
fn fixtures(n: i64) -> Vec<WeightPMF> {
    let mut out = vec![WeightPMF::binomial(n).unwrap(), WeightPMF::slice(n, n).unwrap()];
    if n >= 2 {
        out.push(WeightPMF::slice(n, n - 2).unwrap());
        out.push(
            WeightPMF::mixture(&[
                (qr(1, 4), &WeightPMF::slice(n, n).unwrap()),
                (qr(3, 4), &WeightPMF::slice(n, n % 2).unwrap()),
            ])
            .unwrap(),
        );
    }
    out
}

#[test]
fn moments_tails_and_complement_match_enumeration() {
    for n in 1..=12i64 {
        for p in fixtures(n) {
            let all = strings(n);
            // moments up to 4 by direct string sums
            for j in 1..=4u32 {
                let mut acc = Q::zero();
                for s in &all {
                    let mass = string_mass(&p, s);
                    if mass.is_zero() {
                        continue;
                    }
                    let w: i64 = s.iter().map(|&v| v as i64).sum();
                    acc += mass * qi(w.pow(j));
                }
                assert_eq!(p.moment(j), acc, "moment {j} at n={n}");
            }
            // tails at every threshold
            for t in weight_grid(n) {
                let mut acc = Q::zero();
                for s in &all {
                    let w: i64 = s.iter().map(|&v| v as i64).sum();
                    if w >= t {
                        acc += string_mass(&p, s);
                    }
                }
                assert_eq!(p.tail_mass(t), acc, "tail at n={n}, t={t}");
            }
            // complement = global sign flip
            let comp = p.complement();
            for s in &all {
                let flipped: Vec<i8> = s.iter().map(|&v| -v).collect();
                assert_eq!(string_mass(&comp, s), string_mass(&p, &flipped));
            }
        }
    }
}

#[test]
fn complement_preserves_uniformity_exhaustively() {
    for n in 1..=10i64 {
        for p in fixtures(n) {
            let comp = p.complement();
            for k in 1..=n {
                assert_eq!(
                    p.is_k_uniform(k),
                    comp.is_k_uniform(k),
                    "n={n}, k={k}"
                );
            }
        }
    }
}

#[test]
fn slice_bias_matches_subset_averages() {
    for n in 1..=10i64 {
        for t in (-n..=n).step_by(2) {
            let slice = WeightPMF::slice(n, t).unwrap();
            for ell in 0..=n {
                let expected = slice_bias(n, t, ell).unwrap();
                // exchangeability: any subset of size ell gives the same
                // average; check the prefix subset and one interleaved one.
                let prefix: Vec<usize> = (0..ell as usize).collect();
                assert_eq!(bias_by_enumeration(&slice, &prefix), expected);
                let spread: Vec<usize> = (0..n as usize)
                    .rev()
                    .step_by(2)
                    .take(ell as usize)
                    .collect();
                if spread.len() == ell as usize {
                    assert_eq!(bias_by_enumeration(&slice, &spread), expected);
                }
            }
        }
    }
}

#[test]
fn bias_profile_matches_enumeration_on_mixtures() {
    for n in [3i64, 5, 8] {
        for p in fixtures(n) {
            let profile = bias_profile(&p);
            assert_eq!(profile.biases[0], Q::one(), "entry 0 is always 1");
            for ell in 0..=n {
                let b = &profile.biases[ell as usize];
                assert!(num_traits::Signed::abs(b) <= Q::one(), "bias outside [-1,1]");
                let subset: Vec<usize> = (0..ell as usize).collect();
                assert_eq!(
                    b,
                    &bias_by_enumeration(&p, &subset),
                    "n={n}, ell={ell}"
                );
            }
        }
    }
}

#[test]
fn slice_bias_within_lemma13_bound_up_to_n40() {
    let slack = qr(1, 1_000_000_000_000); // 1e-12
    for n in 1..=40i64 {
        for t in (-n..=n).step_by(2) {
            for ell in 0..=n {
                let bias = slice_bias(n, t, ell).unwrap();
                let bound = lemma13_bound(n, t as f64, ell);
                assert!(
                    num_traits::Signed::abs(&bias) <= q_from_f64(bound) + &slack,
                    "n={n}, t={t}, ell={ell}: |bias| > bound + 1e-12"
                );
            }
        }
    }
}
