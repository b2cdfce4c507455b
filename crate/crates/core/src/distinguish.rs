//! Threshold and interval distinguishing experiments, with the analytic
//! comparator formulas they are reported against.
//!
//! Advantages are exact rationals computed from weight PMFs; the analytic
//! templates (moment tails, normal-tail sandwiches, Cramer corrections,
//! Bernstein bounds) are f64 formulas with caller-supplied constants
//! wherever the underlying statement leaves a constant unspecified.

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::Error;
use crate::lp::{construct_k_uniform, extremal_tail, SupportFilter, TailObjective};
use crate::noise::smooth;
use crate::params::ParamSet;
use crate::pmf::{weight_grid, WeightPMF};
use crate::rat::{format_q, q_to_f64, Q};
use crate::transform::bu_to_sb;
use crate::Result;

/// Pr[P >= t] - Pr[Q >= t], exact.
pub fn advantage(p: &WeightPMF, q: &WeightPMF, t: i64) -> Result<Q> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch(p.n(), q.n()));
    }
    Ok(p.tail_mass(t) - q.tail_mass(t))
}

/// Scan all thresholds; return the maximizer (smallest t on ties).
pub fn best_threshold(p: &WeightPMF, q: &WeightPMF) -> Result<(i64, Q)> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch(p.n(), q.n()));
    }
    let mut best: Option<(i64, Q)> = None;
    for t in weight_grid(p.n()) {
        let adv = p.tail_mass(t) - q.tail_mass(t);
        match &best {
            Some((_, cur)) if *cur >= adv => {}
            _ => best = Some((t, adv)),
        }
    }
    Ok(best.expect("grid nonempty"))
}

/// Scan all O(n^2) intervals; return the maximizer of
/// Pr[P in [a,b]] - Pr[Q in [a,b]] (lexicographically smallest [a,b] on ties).
pub fn best_interval(p: &WeightPMF, q: &WeightPMF) -> Result<(i64, i64, Q)> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch(p.n(), q.n()));
    }
    let grid = weight_grid(p.n());
    // prefix[i] = mass of the first i grid points
    let prefix = |pmf: &WeightPMF| -> Vec<Q> {
        let mut out = Vec::with_capacity(grid.len() + 1);
        let mut acc = Q::zero();
        out.push(acc.clone());
        for &w in &grid {
            acc += pmf.mass(w);
            out.push(acc.clone());
        }
        out
    };
    let pp = prefix(p);
    let pq = prefix(q);
    let mut best: Option<(i64, i64, Q)> = None;
    for i in 0..grid.len() {
        for j in i..grid.len() {
            let adv = (&pp[j + 1] - &pp[i]) - (&pq[j + 1] - &pq[i]);
            match &best {
                Some((_, _, cur)) if *cur >= adv => {}
                _ => best = Some((grid[i], grid[j], adv)),
            }
        }
    }
    Ok(best.expect("grid nonempty"))
}

/// The three separation experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Concentrated small-bias input: the binomial out-weighs its smoothed
    /// tail at some threshold.
    ConcentratedVsBinomial,
    /// Anticoncentrated small-bias input beats EVERY k'-uniform law at
    /// some threshold (the k'-uniform side is an exact LP maximum).
    AnticoncentratedVsKUniform,
    /// A few-weight law, smoothed, differs from the binomial on an interval.
    FewWeightsVsBinomial,
}

impl Scenario {
    pub fn id(&self) -> &'static str {
        match self {
            Scenario::ConcentratedVsBinomial => "thm8",
            Scenario::AnticoncentratedVsKUniform => "thm9",
            Scenario::FewWeightsVsBinomial => "thm10",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "thm8" => Ok(Scenario::ConcentratedVsBinomial),
            "thm9" => Ok(Scenario::AnticoncentratedVsKUniform),
            "thm10" => Ok(Scenario::FewWeightsVsBinomial),
            _ => Err(Error::InvalidParameter(format!("unknown scenario `{s}`"))),
        }
    }
}

/// Result of a separation run.
#[derive(Debug, Clone)]
pub struct SeparationReport {
    pub scenario: &'static str,
    pub n: i64,
    pub k: i64,
    pub rho: Q,
    /// Chosen threshold, or interval when the scenario scans intervals.
    pub t: Option<i64>,
    pub interval: Option<(i64, i64)>,
    pub lhs: Q,
    pub rhs: Q,
    /// lhs - rhs, exact.
    pub advantage: Q,
    /// Analytic template value with the caller-supplied constant.
    pub template: f64,
    /// Smallest scanned threshold with positive advantage, if any.
    pub smallest_positive_t: Option<i64>,
}

impl SeparationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "scenario": self.scenario,
            "n": self.n,
            "k": self.k,
            "rho": format_q(&self.rho),
            "t": self.t,
            "interval": self.interval.map(|(a, b)| json!([a, b])),
            "lhs": format_q(&self.lhs),
            "rhs": format_q(&self.rhs),
            "advantage": format_q(&self.advantage),
            "template": self.template,
            "smallest_positive_t": self.smallest_positive_t,
        })
    }

    pub fn csv_header() -> &'static str {
        "scenario,n,k,rho,t,lhs,rhs,advantage,template"
    }

    pub fn csv_row(&self) -> String {
        let t_repr = match (self.t, self.interval) {
            (Some(t), _) => t.to_string(),
            (None, Some((a, b))) => format!("[{a};{b}]"),
            _ => String::new(),
        };
        format!(
            "{},{},{},{},{},{},{},{},{:.6e}",
            self.scenario,
            self.n,
            self.k,
            format_q(&self.rho),
            t_repr,
            format_q(&self.lhs),
            format_q(&self.rhs),
            format_q(&self.advantage),
            self.template
        )
    }
}

/// Run one separation scenario.
///
/// Unspecified universal constants enter only through `params.c` (default
/// 1). The runs are exact except for the reported analytic template.
pub fn run_separation(scenario: Scenario, params: &ParamSet) -> Result<SeparationReport> {
    match scenario {
        Scenario::ConcentratedVsBinomial => run_concentrated(params),
        Scenario::AnticoncentratedVsKUniform => run_anticoncentrated(params),
        Scenario::FewWeightsVsBinomial => run_few_weights(params),
    }
}

/// Slab half-width used by the concentrated construction.
pub fn slab_half_width(n: i64, k: i64) -> i64 {
    let w = (10.0 * ((k * n) as f64).sqrt()).floor() as i64;
    w.min(n)
}

fn run_concentrated(params: &ParamSet) -> Result<SeparationReport> {
    let n = params.require_n()?;
    let k = params.require_k()?;
    let rho = params.require_rho()?;
    let c = params.c.unwrap_or(1.0);
    let slab = slab_half_width(n, k);
    let input = construct_k_uniform(n, k, |w| w.abs() <= slab, None)?
        .primal
        .ok_or_else(|| Error::InvalidProgram("slab construction infeasible".into()))?;
    let small_bias = bu_to_sb(&input, k)?;
    let smoothed = smooth(&small_bias, &rho)?;
    let binom = WeightPMF::binomial(n)?;
    let (t, adv) = best_threshold(&binom, &smoothed)?;
    let smallest = weight_grid(n)
        .into_iter()
        .find(|&u| (binom.tail_mass(u) - smoothed.tail_mass(u)).is_positive());
    let rho_f = q_to_f64(&rho);
    let template = 2f64.powf(-c * k as f64 / (rho_f * rho_f));
    Ok(SeparationReport {
        scenario: scenario_id(Scenario::ConcentratedVsBinomial),
        n,
        k,
        rho,
        t: Some(t),
        interval: None,
        lhs: binom.tail_mass(t),
        rhs: smoothed.tail_mass(t),
        advantage: adv,
        template,
        smallest_positive_t: smallest,
    })
}

fn run_anticoncentrated(params: &ParamSet) -> Result<SeparationReport> {
    let n = params.require_n()?;
    let k = params.require_k()?;
    let rho = params.require_rho()?;
    let kprime = params
        .kprime
        .ok_or_else(|| Error::InvalidParameter("missing k'".into()))?;
    let c = params.c.unwrap_or(1.0);

    // Desk-scale parameter scan: anticoncentrate at t', smooth, and beat
    // the exact LP maximum over ALL k'-uniform laws at threshold t. The
    // asymptotic recipe (t = sqrt(k'n), t' = 2t/rho) overshoots the cube
    // at small n, so the scan picks the best exact pair.
    let grid = weight_grid(n);
    let mut rhs_cache: std::collections::BTreeMap<i64, Q> = std::collections::BTreeMap::new();
    let mut best: Option<(i64, i64, Q, Q, Q)> = None; // (t', t, lhs, rhs, adv)
    let tprime_candidates: Vec<i64> = grid
        .iter()
        .copied()
        .filter(|&w| w > 0 && (w as f64) >= 0.5 * n as f64)
        .collect();
    for &tp in &tprime_candidates {
        let vertex = extremal_tail(n, k, tp, TailObjective::MaxTail, SupportFilter::All)?
            .primal
            .ok_or_else(|| Error::InvalidProgram("extremal vertex missing".into()))?;
        let small_bias = bu_to_sb(&vertex, k)?;
        let smoothed = smooth(&small_bias, &rho)?;
        for &t in grid.iter().filter(|&&t| t > 0) {
            let lhs = smoothed.tail_mass(t);
            let rhs = match rhs_cache.get(&t) {
                Some(v) => v.clone(),
                None => {
                    let v = extremal_tail(n, kprime, t, TailObjective::MaxTail, SupportFilter::All)?
                        .value
                        .ok_or_else(|| Error::InvalidProgram("rhs LP not optimal".into()))?;
                    rhs_cache.insert(t, v.clone());
                    v
                }
            };
            let adv = &lhs - &rhs;
            let better = match &best {
                None => true,
                Some((_, _, _, _, cur)) => adv > *cur,
            };
            if better {
                best = Some((tp, t, lhs, rhs.clone(), adv));
            }
        }
    }
    let (_tp, t, lhs, rhs, adv) = best.expect("scan nonempty");
    let rho_f = q_to_f64(&rho);
    let log_inv_rho = (1.0 / rho_f).ln().max(f64::MIN_POSITIVE);
    let template = (c * rho_f * rho_f / log_inv_rho).powf(k as f64 / 2.0);
    Ok(SeparationReport {
        scenario: scenario_id(Scenario::AnticoncentratedVsKUniform),
        n,
        k: kprime,
        rho,
        t: Some(t),
        interval: None,
        lhs,
        rhs,
        advantage: adv,
        template,
        smallest_positive_t: None,
    })
}

fn run_few_weights(params: &ParamSet) -> Result<SeparationReport> {
    let n = params.require_n()?;
    let rho = params.require_rho()?;
    let c = params.c.unwrap_or(1.0);
    // A two-weight slice mixture; weights chosen from params.a/params.b or
    // a default pair straddling the bulk.
    let w1 = params.a.unwrap_or(n % 2);
    let w2 = params.b.unwrap_or_else(|| {
        let mut w = (2.0 * (n as f64).sqrt()).round() as i64;
        w += (n - w).rem_euclid(2); // fix parity
        w.min(n)
    });
    let half = Q::new(1.into(), 2.into());
    let d = WeightPMF::mixture(&[
        (half.clone(), &WeightPMF::slice(n, w1)?),
        (half, &WeightPMF::slice(n, w2)?),
    ])?;
    let k = d.support_len() as i64;
    let smoothed = smooth(&d, &rho)?;
    let binom = WeightPMF::binomial(n)?;
    let (a, b, adv) = best_interval(&binom, &smoothed)?;
    let rho_f = q_to_f64(&rho);
    let template = 2f64.powf(-c * k as f64 / rho_f);
    Ok(SeparationReport {
        scenario: scenario_id(Scenario::FewWeightsVsBinomial),
        n,
        k,
        rho,
        t: None,
        interval: Some((a, b)),
        lhs: binom.interval_mass(a, b),
        rhs: smoothed.interval_mass(a, b),
        advantage: adv,
        template,
        smallest_positive_t: None,
    })
}

fn scenario_id(s: Scenario) -> &'static str {
    s.id()
}

// ---------------------------------------------------------------------
// Analytic comparator formulas.
// ---------------------------------------------------------------------

/// Moment tail bound sqrt(2) (2kn / (e t^2))^k for 2k-uniform laws.
pub fn fact2_bound(n: i64, k: i64, t: f64) -> f64 {
    std::f64::consts::SQRT_2
        * (2.0 * k as f64 * n as f64 / (std::f64::consts::E * t * t)).powi(k as i32)
}

/// Point-mass lower bound 2^(-a^2/n) / (2 sqrt(n)) for the binomial.
pub fn stirling_lower(n: i64, a: i64) -> f64 {
    2f64.powf(-((a * a) as f64) / n as f64) / (2.0 * (n as f64).sqrt())
}

/// Berry-Esseen ratio for smoothed coordinates: (1+rho^2)/((1-rho^2)^(1/2) sqrt(n)).
pub fn berry_esseen_noise(rho: f64, n: i64) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!(
            "rho = {rho} outside [0, 1)"
        )));
    }
    Ok((1.0 + rho * rho) / ((1.0 - rho * rho).sqrt() * (n as f64).sqrt()))
}

/// Cramer-style correction for smoothed coordinates at weight w: the
/// multiplicative factor exp(sum E[Y^3] / (6 (sum Var)^(3/2)) theta^3) and
/// the eps-interval [0, (theta+1)/(c sqrt(n))] for a caller constant c.
pub fn petrov_factor(n: i64, w: i64, rho: f64, theta: f64, c: f64) -> Result<(f64, (f64, f64))> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!(
            "rho = {rho} outside [0, 1)"
        )));
    }
    if c <= 0.0 {
        return Err(Error::InvalidParameter("c must be positive".into()));
    }
    let var = 1.0 - rho * rho;
    let third_sum = -2.0 * rho * var * w as f64;
    let factor = (third_sum / (6.0 * (var * n as f64).powf(1.5)) * theta.powi(3)).exp();
    Ok((factor, (0.0, (theta + 1.0) / (c * (n as f64).sqrt()))))
}

/// Normal tail sandwich: returns (lower, upper) bracketing Pr[N(0,1) >= theta]:
/// phi(theta)/(theta + 1/theta) <= tail <= phi(theta)/theta.
pub fn phi_tail_bounds(theta: f64) -> Result<(f64, f64)> {
    if theta <= 0.0 {
        return Err(Error::InvalidParameter(format!("theta = {theta} <= 0")));
    }
    let phi = (-theta * theta / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    Ok((phi / (theta + 1.0 / theta), phi / theta))
}

/// Exact normal upper tail via the complementary error function.
pub fn normal_tail(theta: f64) -> f64 {
    0.5 * libm::erfc(theta / std::f64::consts::SQRT_2)
}

/// Bernstein-type tail for smoothed deviations:
/// 2 exp(-c s^2 / ((1-rho^2) n + s)).
pub fn bernstein_noise_bound(n: i64, rho: f64, s: f64, c: f64) -> f64 {
    2.0 * (-c * s * s / ((1.0 - rho * rho) * n as f64 + s)).exp()
}

/// Value of one analytic comparator formula.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Single(f64),
    /// (lower, upper) bracket.
    Pair(f64, f64),
    /// Cramer correction: multiplicative factor and the eps range.
    FactorAndRange { factor: f64, eps_range: (f64, f64) },
}

/// Name-dispatched access to the comparator formulas, mirroring their
/// individual functions. Parameter slots: `t` is the threshold, `a` the
/// string weight (petrov), `theta` doubles as the deviation s for the
/// Bernstein form, and `c` the caller constant (default 1).
pub fn analytic_bounds(name: &str, params: &ParamSet) -> Result<BoundValue> {
    let c = params.c.unwrap_or(1.0);
    match name {
        "fact2" => {
            let (n, k) = (params.require_n()?, params.require_k()?);
            let t = params
                .t
                .ok_or_else(|| Error::InvalidParameter("missing t".into()))?;
            Ok(BoundValue::Single(fact2_bound(n, k, t as f64)))
        }
        "stirling" => {
            let n = params.require_n()?;
            let a = params
                .a
                .ok_or_else(|| Error::InvalidParameter("missing a".into()))?;
            Ok(BoundValue::Single(stirling_lower(n, a)))
        }
        "be" => {
            let n = params.require_n()?;
            let rho = q_to_f64(&params.require_rho()?);
            Ok(BoundValue::Single(berry_esseen_noise(rho, n)?))
        }
        "petrov" => {
            let n = params.require_n()?;
            let rho = q_to_f64(&params.require_rho()?);
            let w = params
                .a
                .ok_or_else(|| Error::InvalidParameter("missing a (string weight)".into()))?;
            let theta = params
                .theta
                .ok_or_else(|| Error::InvalidParameter("missing theta".into()))?;
            let (factor, eps_range) = petrov_factor(n, w, rho, theta, c)?;
            Ok(BoundValue::FactorAndRange { factor, eps_range })
        }
        "phi_tail" => {
            let theta = params
                .theta
                .ok_or_else(|| Error::InvalidParameter("missing theta".into()))?;
            let (lo, hi) = phi_tail_bounds(theta)?;
            Ok(BoundValue::Pair(lo, hi))
        }
        "bernstein_noise" => {
            let n = params.require_n()?;
            let rho = q_to_f64(&params.require_rho()?);
            let s = params
                .theta
                .ok_or_else(|| Error::InvalidParameter("missing theta (deviation s)".into()))?;
            Ok(BoundValue::Single(bernstein_noise_bound(n, rho, s, c)))
        }
        _ => Err(Error::InvalidParameter(format!(
            "unknown bound `{name}` (fact2|stirling|be|petrov|phi_tail|bernstein_noise)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{qi, qr};

    #[test]
    fn advantage_examples() {
        let b4 = WeightPMF::binomial(4).unwrap();
        assert_eq!(advantage(&b4, &b4, 2).unwrap(), qi(0));
        let s0 = WeightPMF::slice(4, 0).unwrap();
        assert_eq!(advantage(&b4, &s0, 2).unwrap(), qr(5, 16));
        let s4 = WeightPMF::slice(4, 4).unwrap();
        assert_eq!(best_threshold(&s4, &b4).unwrap(), (4, qr(15, 16)));
        let b2 = WeightPMF::binomial(2).unwrap();
        assert!(advantage(&b4, &b2, 0).is_err());
    }

    #[test]
    fn dichotomy_identity_exact() {
        // one-sided advantages summed equal the point-mass difference
        let p = WeightPMF::slice(6, 2).unwrap();
        let q = WeightPMF::binomial(6).unwrap();
        for t in weight_grid(6) {
            let up = p.tail_mass(t) - q.tail_mass(t);
            let down = p.lower_tail_mass(t) - q.lower_tail_mass(t);
            let point = p.mass(t) - q.mass(t);
            assert_eq!(up + down, point);
        }
    }

    #[test]
    fn best_interval_beats_thresholds() {
        let p = WeightPMF::slice(8, 0).unwrap();
        let q = WeightPMF::binomial(8).unwrap();
        let (a, b, adv) = best_interval(&p, &q).unwrap();
        let (_, tadv) = best_threshold(&p, &q).unwrap();
        assert!(adv >= tadv);
        assert_eq!((a, b), (0, 0));
        assert_eq!(adv, qi(1) - q.mass(0));
    }

    #[test]
    fn analytic_formula_known_values() {
        assert!((fact2_bound(4, 1, 4.0) - std::f64::consts::SQRT_2 / (2.0 * std::f64::consts::E))
            .abs()
            < 1e-12);
        let (lo, hi) = phi_tail_bounds(1.0).unwrap();
        assert!((hi - 0.24197).abs() < 5e-6);
        assert!((lo - 0.12099).abs() < 5e-6);
        let tail = normal_tail(1.0);
        assert!((tail - 0.15866).abs() < 5e-6);
        assert!(lo <= tail && tail <= hi);
        assert!((berry_esseen_noise(0.0, 16).unwrap() - 0.25).abs() < 1e-15);
        assert!(phi_tail_bounds(0.0).is_err());
    }

    #[test]
    fn analytic_bounds_dispatch() {
        let p = ParamSet {
            n: Some(4),
            k: Some(1),
            t: Some(4),
            ..ParamSet::new()
        };
        match analytic_bounds("fact2", &p).unwrap() {
            BoundValue::Single(v) => {
                assert!((v - std::f64::consts::SQRT_2 / (2.0 * std::f64::consts::E)).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
        let p = ParamSet {
            theta: Some(1.0),
            ..ParamSet::new()
        };
        assert!(matches!(
            analytic_bounds("phi_tail", &p).unwrap(),
            BoundValue::Pair(_, _)
        ));
        assert!(analytic_bounds("nope", &p).is_err());
        assert!(analytic_bounds("fact2", &ParamSet::new()).is_err());
    }

    #[test]
    fn petrov_factor_sign() {
        // positive weight w -> negative third moments -> factor <= 1
        let (f, (lo, hi)) = petrov_factor(64, 10, 0.5, 1.0, 1.0).unwrap();
        assert!(f <= 1.0 && f > 0.0);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0);
        let (f2, _) = petrov_factor(64, -10, 0.5, 1.0, 1.0).unwrap();
        assert!(f2 >= 1.0);
    }
}
