//! The bounded-uniform to small-bias pipeline and its certification.
//!
//! The pipeline keeps a k-uniform weight law, shrinks its support to at
//! most k+1 weights (moment-preserving vertex), then applies floor(k/2)
//! rerandomization rounds. The output stays exactly k-uniform, lives on
//! at most (k+1)^2 weights, and every interval mass of a sparse input
//! survives inside a k-fattened interval.

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::Error;
use crate::krawtchouk::{bias_profile, lemma13_bound};
use crate::lp::sparsify;
use crate::noise::replace_noise;
use crate::pmf::WeightPMF;
use crate::rat::{format_q, q_from_f64, Q};
use crate::Result;

/// Sparsify to k+1 weights, then add floor(k/2) rounds of coordinate noise.
pub fn bu_to_sb(p: &WeightPMF, k: i64) -> Result<WeightPMF> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "pipeline needs k >= 2, got {k}"
        )));
    }
    let sparse = sparsify(p, k)?; // also checks k-uniformity
    let rounds = (k / 2) as u32;
    Ok(replace_noise(&sparse, rounds))
}

/// Which certification regime a parity size falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiasCase {
    /// l in [1, k]: k-uniformity forces bias exactly 0.
    Uniform,
    /// l in [k+1, n-k-1]: slice bound at |W| <= (k n^3)^(1/4) plus the
    /// moment tail term.
    Middle,
    /// l in [n-k, n]: every noise round hits the parity with probability
    /// at least 1 - k/n, giving (k/n)^(k/2).
    Top,
}

impl BiasCase {
    pub fn id(&self) -> &'static str {
        match self {
            BiasCase::Uniform => "case1",
            BiasCase::Middle => "case2",
            BiasCase::Top => "case3",
        }
    }
}

/// One row of the certification report.
#[derive(Debug, Clone)]
pub struct CertRow {
    pub ell: i64,
    pub bias: Q,
    pub case: BiasCase,
    /// The per-case printed bound (f64; the middle case is irrational).
    pub bound: f64,
    pub pass: bool,
}

/// Per-parity bias certification of a pipeline output.
#[derive(Debug, Clone)]
pub struct BiasCertification {
    pub n: i64,
    pub k: i64,
    /// Rows for l = 1..=n in order.
    pub rows: Vec<CertRow>,
    /// The headline case-2 bound 2 (2k/n)^(k/4), reported alongside.
    pub headline_middle_bound: f64,
}

impl BiasCertification {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// Rows as CSV: l, bias "num/den", case, bound (6 decimals), pass.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("l,bias,case,bound,pass\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.6},{}\n",
                r.ell,
                format_q(&r.bias),
                r.case.id(),
                r.bound,
                r.pass
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "k": self.k,
            "headline_middle_bound": self.headline_middle_bound,
            "rows": self.rows.iter().map(|r| json!({
                "l": r.ell,
                "bias": format_q(&r.bias),
                "case": r.case.id(),
                "bound": r.bound,
                "pass": r.pass,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Slack for comparing exact biases against irrational case bounds.
const CASE_BOUND_SLACK: f64 = 1e-12;

/// Certify the bias of every parity size of an exchangeable PMF.
///
/// Case bounds follow the explicit three-case argument; the middle case
/// uses the slice bound at t = (k n^3)^(1/4) with the reflected parity
/// size min(l, n-l), plus the degree-k moment tail term, rather than the
/// headline with its unspecified constant. The headline value is still
/// reported for reference.
pub fn certify_bias(q: &WeightPMF, k: i64) -> BiasCertification {
    let n = q.n();
    let profile = bias_profile(q);
    let nf = n as f64;
    let kf = k as f64;
    // sqrt(2) (kn / (e t^2))^(k/2) at t^2 = sqrt(k n^3)
    let t_mid = (kf * nf * nf * nf).powf(0.25);
    let tail_term = std::f64::consts::SQRT_2
        * (kf * nf / (std::f64::consts::E * t_mid * t_mid)).powf(kf / 2.0);
    let headline = 2.0 * (2.0 * kf / nf).powf(kf / 4.0);
    let mut rows = Vec::with_capacity(n as usize);
    for ell in 1..=n {
        let bias = profile.biases[ell as usize].clone();
        let (case, bound) = if ell <= k {
            (BiasCase::Uniform, 0.0)
        } else if ell < n - k {
            let ell_eff = ell.min(n - ell);
            (
                BiasCase::Middle,
                lemma13_bound(n, t_mid, ell_eff) + tail_term,
            )
        } else {
            (BiasCase::Top, (kf / nf).powf(kf / 2.0))
        };
        let pass = if bound == 0.0 {
            bias.is_zero()
        } else {
            bias.abs() <= q_from_f64(bound + CASE_BOUND_SLACK)
        };
        rows.push(CertRow {
            ell,
            bias,
            case,
            bound,
            pass,
        });
    }
    BiasCertification {
        n,
        k,
        rows,
        headline_middle_bound: headline,
    }
}

/// Exact check that every interval's mass survives k-fattening:
/// Pr[Q in [a-k, b+k]] >= Pr[P in [a, b]] for all admissible a <= b.
pub fn interval_property_check(p: &WeightPMF, q: &WeightPMF, k: i64) -> bool {
    let n = p.n();
    if q.n() != n {
        return false;
    }
    // Prefix sums over the admissible grid make each interval O(1).
    let grid: Vec<i64> = crate::pmf::weight_grid(n);
    let prefix = |pmf: &WeightPMF| -> Vec<Q> {
        let mut acc = Q::from_integer(0.into());
        let mut out = Vec::with_capacity(grid.len() + 1);
        out.push(acc.clone());
        for &w in &grid {
            acc += pmf.mass(w);
            out.push(acc.clone());
        }
        out
    };
    let pp = prefix(p);
    let pq = prefix(q);
    let idx = |w: i64| -> usize {
        // number of grid points <= w
        if w < -n {
            0
        } else if w >= n {
            grid.len()
        } else {
            (((w + n) / 2) + 1) as usize
        }
    };
    let mass_between = |pref: &Vec<Q>, a: i64, b: i64| -> Q {
        if a > b {
            return Q::from_integer(0.into());
        }
        let hi = idx(b);
        let lo = idx(a - 1);
        pref[hi].clone() - &pref[lo]
    };
    for (ai, &a) in grid.iter().enumerate() {
        for &b in &grid[ai..] {
            let lhs = mass_between(&pq, a - k, b + k);
            let rhs = mass_between(&pp, a, b);
            if lhs < rhs {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{construct_k_uniform, extremal_tail, SupportFilter, TailObjective};
    use crate::rat::{qi, qr};

    #[test]
    fn pipeline_preserves_uniformity_and_support_bound() {
        let b8 = WeightPMF::binomial(8).unwrap();
        let out = bu_to_sb(&b8, 2).unwrap();
        assert!(out.is_k_uniform(2));
        assert_eq!(out.moment(2), qi(8));
        assert!(out.support_len() <= 9, "(k+1)(2*floor(k/2)+1)");
        assert!(bu_to_sb(&b8, 1).is_err());
        assert!(bu_to_sb(&WeightPMF::slice(8, 2).unwrap(), 2).is_err());
    }

    #[test]
    fn pipeline_on_binomial_8_2_interval_property() {
        // Pinned after a verified run: the central-mass vertex for
        // (binomial(8), k=2) is {-8: 1/16, 0: 7/8, 8: 1/16} and the full
        // O(n^2) interval check passes against the binomial input.
        let b8 = WeightPMF::binomial(8).unwrap();
        let sparse = sparsify(&b8, 2).unwrap();
        assert_eq!(sparse.mass(0), qr(7, 8));
        assert_eq!(sparse.mass(8), qr(1, 16));
        let out = bu_to_sb(&b8, 2).unwrap();
        assert!(interval_property_check(&b8, &out, 2));
    }

    #[test]
    fn interval_property_trivial_and_sparse() {
        let p = extremal_tail(12, 2, 6, TailObjective::MaxTail, SupportFilter::All)
            .unwrap()
            .primal
            .unwrap();
        let q = bu_to_sb(&p, 2).unwrap();
        // full range is always preserved
        assert_eq!(q.interval_mass(-12 - 2, 12 + 2), qi(1));
        assert!(interval_property_check(&p, &q, 2));
    }

    #[test]
    fn certification_cases_and_bounds() {
        let input = construct_k_uniform(60, 4, |_| true, None)
            .unwrap()
            .primal
            .unwrap();
        let out = bu_to_sb(&input, 4).unwrap();
        let cert = certify_bias(&out, 4);
        assert_eq!(cert.rows.len(), 60);
        for row in &cert.rows[..4] {
            assert_eq!(row.case, BiasCase::Uniform);
            assert!(row.bias.is_zero());
            assert!(row.pass);
        }
        // formula values at (n=60, k=4)
        assert!((cert.headline_middle_bound - 4.0 / 15.0).abs() < 1e-12);
        let top = cert.rows.last().unwrap();
        assert_eq!(top.case, BiasCase::Top);
        assert!((top.bound - 1.0 / 225.0).abs() < 1e-12);
        assert!(cert.all_pass());
    }

    #[test]
    fn certification_csv_shape() {
        let input = WeightPMF::binomial(8).unwrap();
        let out = bu_to_sb(&input, 2).unwrap();
        let cert = certify_bias(&out, 2);
        let csv = cert.to_csv();
        assert!(csv.starts_with("l,bias,case,bound,pass\n"));
        assert_eq!(csv.lines().count(), 9);
    }
}
