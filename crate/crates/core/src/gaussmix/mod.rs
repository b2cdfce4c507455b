//! Gaussian-mixture distances, Hankel/Vandermonde certificates,
//! q-binomials, and approximation-theory checkers.
//!
//! Numeric parts (mixture pdfs, the derivative-free optimizer) run in f64
//! on a documented grid (radius 10, step 1e-3 by default); exact parts
//! (determinants, inverses, q-polynomials, symmetric functions) never
//! touch floating point.

mod optim;
mod vandermonde;

pub use optim::{best_mixture_fit, fit_exponential_sum, FitResult};
pub use vandermonde::{
    elementary_symmetric_quotient_check, qbinomial, vandermonde_power_count_check,
    PowerCountReport, QuotientCheckReport,
};

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::poly::{chebyshev_eval, UnivariatePoly};
use crate::rat::{q_pow, Q};
use crate::Result;

/// Default evaluation grid for mixture distances.
pub const DEFAULT_GRID_RADIUS: f64 = 10.0;
pub const DEFAULT_GRID_STEP: f64 = 1e-3;

/// A k-component Gaussian mixture with one shared variance.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussMixture {
    pub means: Vec<f64>,
    pub weights: Vec<f64>,
    /// Common variance, in (0, 1].
    pub variance: f64,
}

impl GaussMixture {
    pub fn new(means: Vec<f64>, weights: Vec<f64>, variance: f64) -> Result<Self> {
        if means.is_empty() || means.len() != weights.len() {
            return Err(Error::InvalidParameter(
                "means/weights must be nonempty and equal length".into(),
            ));
        }
        if !(variance > 0.0 && variance <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "variance {variance} outside (0, 1]"
            )));
        }
        if weights.iter().any(|w| *w < 0.0) {
            return Err(Error::InvalidParameter("negative mixture weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(GaussMixture {
            means,
            weights,
            variance,
        })
    }

    pub fn k(&self) -> usize {
        self.means.len()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        // Written through `phi` so a single zero-mean unit-variance
        // component reproduces the standard normal pdf bit for bit.
        let sigma = self.variance.sqrt();
        self.means
            .iter()
            .zip(&self.weights)
            .map(|(mu, w)| w * phi((x - mu) / sigma) / sigma)
            .sum()
    }
}

/// Standard normal pdf.
pub fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Grid maximum of |phi - mixture pdf|: a lower bound on the true sup.
pub fn sup_distance(m: &GaussMixture, grid_radius: f64, grid_step: f64) -> f64 {
    assert!(grid_step > 0.0, "grid step must be positive");
    let steps = (grid_radius / grid_step).round() as i64;
    let mut best = 0.0f64;
    for i in -steps..=steps {
        let x = i as f64 * grid_step;
        let d = (phi(x) - m.pdf(x)).abs();
        if d > best {
            best = d;
        }
    }
    best
}

/// Best scanned interval for the integrated pdf difference.
///
/// Trapezoid integration of phi - pdf over the default grid; returns the
/// interval with the largest |integral| and that value.
pub fn interval_advantage(m: &GaussMixture) -> ((f64, f64), f64) {
    let step = DEFAULT_GRID_STEP;
    let steps = (DEFAULT_GRID_RADIUS / step).round() as i64;
    let mut xs = Vec::with_capacity((2 * steps + 1) as usize);
    let mut prefix = Vec::with_capacity((2 * steps + 2) as usize);
    prefix.push(0.0f64);
    let mut prev: Option<f64> = None;
    let mut acc = 0.0f64;
    for i in -steps..=steps {
        let x = i as f64 * step;
        let d = phi(x) - m.pdf(x);
        if let Some(pd) = prev {
            acc += 0.5 * (pd + d) * step;
        }
        prev = Some(d);
        xs.push(x);
        prefix.push(acc);
    }
    // prefix[i+1] integrates up to xs[i]; maximize |prefix[j] - prefix[i]|
    let (mut lo_i, mut hi_i) = (0usize, 0usize);
    for (i, v) in prefix.iter().enumerate() {
        if *v < prefix[lo_i] {
            lo_i = i;
        }
        if *v > prefix[hi_i] {
            hi_i = i;
        }
    }
    let value = (prefix[hi_i] - prefix[lo_i]).abs();
    let i0 = lo_i.min(hi_i);
    let i1 = lo_i.max(hi_i);
    let a = xs[i0.saturating_sub(1)];
    let b = xs[i1.saturating_sub(1)];
    ((a, b), value)
}

/// The (k+1)x(k+1) Hankel matrix with entry (i,j) = f(i+j-k-2), exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MkMatrix {
    pub k: i64,
    /// Row-major entries, (k+1)^2 of them.
    pub entries: Vec<Vec<Q>>,
}

impl MkMatrix {
    /// Build from an integer-indexed function defined on [-k, k].
    pub fn from_fn(k: i64, f: impl Fn(i64) -> Q) -> Self {
        let dim = (k + 1) as usize;
        let mut entries = Vec::with_capacity(dim);
        for i in 1..=dim as i64 {
            let mut row = Vec::with_capacity(dim);
            for j in 1..=dim as i64 {
                row.push(f(i + j - k - 2));
            }
            entries.push(row);
        }
        MkMatrix { k, entries }
    }

    /// Determinant by exact Gaussian elimination.
    pub fn det(&self) -> Q {
        det_exact(self.entries.clone())
    }

    /// Exact inverse via Gauss-Jordan; None when singular.
    pub fn inverse(&self) -> Option<Vec<Vec<Q>>> {
        invert_exact(&self.entries)
    }
}

/// Exact determinant of a dense rational matrix.
#[allow(clippy::needless_range_loop)]
pub fn det_exact(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut det = Q::from_integer(1.into());
    for col in 0..n {
        let piv = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Q::zero(),
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pv;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

#[allow(clippy::needless_range_loop)]
fn invert_exact(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut full = row.clone();
            full.extend((0..n).map(|c| {
                if c == r {
                    Q::from_integer(1.into())
                } else {
                    Q::zero()
                }
            }));
            full
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let pv = aug[col][col].clone();
        for v in aug[col].iter_mut() {
            *v /= &pv;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let f = aug[r][col].clone();
            for c in 0..2 * n {
                let t = &f * &aug[col][c];
                aug[r][c] -= t;
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// M_k of an exponential sum f(x) = sum_i a_i b_i^x with rational bases.
pub fn mk_exponential_sum(k: i64, terms: &[(Q, Q)]) -> Result<MkMatrix> {
    for (_, b) in terms {
        if !b.is_positive() {
            return Err(Error::InvalidParameter(
                "exponential bases must be positive rationals".into(),
            ));
        }
    }
    Ok(MkMatrix::from_fn(k, |x| {
        terms.iter().map(|(a, b)| a * q_pow(b, x)).sum()
    }))
}

/// Report for the inverse-entry bound on M_k(q^(x^2)).
#[derive(Debug, Clone)]
pub struct InverseBoundReport {
    pub k: i64,
    pub q: Q,
    /// max |A_ij| over all entries, exact.
    pub max_abs_entry: Q,
    /// Per-entry bound denominators are shared: prod_{i=1}^k (1 - q^(-2i)).
    pub denominator: Q,
    pub pass: bool,
}

/// Check |(M_k(q^(x^2))^(-1))_{i,j}| <= C(k,i-1) C(k,j-1) / prod(1-q^(-2i)),
/// all exactly in rationals.
pub fn inverse_entry_bound_check(k: i64, q: &Q) -> Result<InverseBoundReport> {
    if *q <= Q::from_integer(1.into()) {
        return Err(Error::InvalidParameter("q must exceed 1".into()));
    }
    let m = MkMatrix::from_fn(k, |x| q_pow(q, x * x));
    let inv = m
        .inverse()
        .ok_or_else(|| Error::InvalidParameter("M_k(q^{x^2}) unexpectedly singular".into()))?;
    let mut denom = Q::from_integer(1.into());
    for i in 1..=k {
        denom *= Q::from_integer(1.into()) - q_pow(q, -2 * i);
    }
    let mut pass = true;
    let mut max_abs = Q::zero();
    for (i, row) in inv.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let a = v.abs();
            if a > max_abs {
                max_abs = a.clone();
            }
            let bound = Q::from_integer(
                crate::rat::binomial(k as u64, i as i64) * crate::rat::binomial(k as u64, j as i64),
            ) / &denom;
            if a > bound {
                pass = false;
            }
        }
    }
    Ok(InverseBoundReport {
        k,
        q: q.clone(),
        max_abs_entry: max_abs,
        denominator: denom,
        pass,
    })
}

/// Explicit lower bound prod_{i=1}^k (1 - q^(-2i)) / (4^k (k+1)) on the
/// sample-point gap between e^(alpha x^2) and k-term exponential sums,
/// with q = e^(d^2 alpha / k).
pub fn gapmiddle_lower(k: i64, d_half: f64, alpha: f64) -> f64 {
    assert!(d_half > 0.0 && alpha > 0.0, "d and alpha must be positive");
    let q = (d_half * d_half * alpha / k as f64).exp();
    let mut prod = 1.0;
    for i in 1..=k {
        prod *= 1.0 - q.powi(-2 * i as i32);
    }
    prod / (4f64.powi(k as i32) * (k as f64 + 1.0))
}

/// Fully explicit lower bound on sup |phi - g| over mixtures g of k
/// Gaussians with common variance sigma2 < 1, for a chosen window
/// coefficient d: exp(-d^2 k / (2 sigma2)) * gapmiddle_lower(k, d, alpha)
/// with alpha = 1/(2 sigma2) - 1/2.
pub fn mixture_distance_lower(k: i64, sigma2: f64, d_half: f64) -> f64 {
    assert!(sigma2 > 0.0 && sigma2 < 1.0);
    let alpha = 1.0 / (2.0 * sigma2) - 0.5;
    (-d_half * d_half * k as f64 / (2.0 * sigma2)).exp() * gapmiddle_lower(k, d_half, alpha)
}

/// Outcome of a lemma-instance checker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    /// The instance does not satisfy the lemma's hypotheses; the
    /// conclusion was not evaluated.
    HypothesisViolated(String),
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }
}

/// Integer-point growth check: if deg Q < 7 sqrt(m/L), then
/// |Q(0)| <= (1/L) sum_{j=1}^m |Q(j)|. All arithmetic exact.
pub fn erdelyi_check(q: &UnivariatePoly, m: i64, big_l: &Q) -> CheckOutcome {
    if m < 1 || !big_l.is_positive() {
        return CheckOutcome::HypothesisViolated("need m >= 1 and L > 0".into());
    }
    // deg < 7 sqrt(m/L)  <=>  deg^2 L < 49 m
    let d = q.degree() as i64;
    let lhs = Q::from_integer((d * d).into()) * big_l;
    if lhs >= Q::from_integer((49 * m).into()) {
        return CheckOutcome::HypothesisViolated(format!(
            "degree {d} not below 7 sqrt(m/L)"
        ));
    }
    let mut sum = Q::zero();
    for j in 1..=m {
        sum += q.eval_int(j).abs();
    }
    if q.eval_int(0).abs() * big_l <= sum {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail("|Q(0)| exceeds (1/L) sum |Q(j)|".into())
    }
}

/// Integer-to-interval growth check: if |p(i)| <= 1 on i = 0..m and
/// 3 d^2 <= m, then sup_{[0,m]} |p| <= 3/2 (sup estimated on a dense grid
/// with local refinement).
pub fn coppersmith_check(p: &UnivariatePoly, m: i64) -> CheckOutcome {
    let d = p.degree() as i64;
    if 3 * d * d > m {
        return CheckOutcome::HypothesisViolated(format!("3 d^2 = {} > m = {m}", 3 * d * d));
    }
    let one = Q::from_integer(1.into());
    for i in 0..=m {
        if p.eval_int(i).abs() > one {
            return CheckOutcome::HypothesisViolated(format!("|p({i})| > 1"));
        }
    }
    let sup = sup_abs_on_interval(p, 0.0, m as f64);
    if sup <= 1.5 + 1e-9 {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail(format!("sup estimate {sup} exceeds 3/2"))
    }
}

fn sup_abs_on_interval(p: &UnivariatePoly, lo: f64, hi: f64) -> f64 {
    let coarse = 4096usize;
    let mut best_x = lo;
    let mut best = 0.0f64;
    for i in 0..=coarse {
        let x = lo + (hi - lo) * i as f64 / coarse as f64;
        let v = p.eval_f64(x).abs();
        if v > best {
            best = v;
            best_x = x;
        }
    }
    // local refinement around the best coarse point
    let mut span = (hi - lo) / coarse as f64;
    let mut center = best_x;
    for _ in 0..40 {
        for &x in &[center - span / 2.0, center + span / 2.0] {
            let xc = x.clamp(lo, hi);
            let v = p.eval_f64(xc).abs();
            if v > best {
                best = v;
                center = xc;
            }
        }
        span /= 2.0;
    }
    best
}

/// Chebyshev growth check: if |p| <= 1 on [-1,1] (grid hypothesis) then
/// |p(s)| <= T_d(s) <= (2|s|)^d for s >= 1, the conclusion exact.
pub fn chebyshev_extremal_check(p: &UnivariatePoly, s: &Q) -> CheckOutcome {
    let one = Q::from_integer(1.into());
    if *s < one {
        return CheckOutcome::HypothesisViolated("need s >= 1".into());
    }
    let grid = 2001;
    for i in 0..=grid {
        let x = -1.0 + 2.0 * i as f64 / grid as f64;
        if p.eval_f64(x).abs() > 1.0 + 1e-9 {
            return CheckOutcome::HypothesisViolated(format!("|p({x})| > 1 on [-1,1]"));
        }
    }
    let d = p.degree();
    let tk = chebyshev_eval(d, s);
    let ps = p.eval(s).abs();
    if ps > tk {
        return CheckOutcome::Fail(format!(
            "|p(s)| = {} exceeds T_d(s) = {}",
            crate::rat::format_q(&ps),
            crate::rat::format_q(&tk)
        ));
    }
    let two_s = (Q::from_integer(2.into()) * s.abs()).pow(d as i32);
    if tk > two_s {
        return CheckOutcome::Fail("T_d(s) exceeds (2|s|)^d".into());
    }
    CheckOutcome::Pass
}

/// Report for the infinite-product lower bound.
#[derive(Debug, Clone)]
pub struct SeriesCheckReport {
    pub x: f64,
    /// Certified lower bound on prod_{i>=1}(1 - x^i).
    pub product_lower: f64,
    /// exp(-pi^2 / (6 (1 - x))).
    pub bound: f64,
    pub pass: bool,
}

/// Check prod_{i=1}^inf (1 - x^i) >= exp(-pi^2/(6(1-x))) for 0 < x < 1.
///
/// The left side is a partial product times the tail correction
/// (1 - x^(N+1)/(1-x)), so the reported value is a true lower bound.
pub fn series_lower_check(x: f64) -> Result<SeriesCheckReport> {
    if !(0.0 < x && x < 1.0) {
        return Err(Error::InvalidParameter(format!("x = {x} outside (0, 1)")));
    }
    let mut prod = 1.0f64;
    let mut term = x;
    let mut i = 1u32;
    while term > 1e-19 && i <= 100_000 {
        prod *= 1.0 - term;
        term *= x;
        i += 1;
    }
    // remaining factor is at least 1 - sum_{j>i} x^j = 1 - x^(i)/(1-x)
    let tail = 1.0 - term / (1.0 - x);
    let lower = prod * tail.max(0.0);
    let bound = (-std::f64::consts::PI.powi(2) / (6.0 * (1.0 - x))).exp();
    Ok(SeriesCheckReport {
        x,
        product_lower: lower,
        bound,
        pass: lower >= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{qi, qr};

    #[test]
    fn phi_normalization() {
        assert!((phi(0.0) - 0.3989422804014327).abs() < 1e-15);
    }

    #[test]
    fn sup_distance_known_values() {
        let exact = GaussMixture::new(vec![0.0], vec![1.0], 1.0).unwrap();
        assert_eq!(sup_distance(&exact, 10.0, 1e-3), 0.0);

        let narrow = GaussMixture::new(vec![0.0], vec![1.0], 0.75).unwrap();
        let d = sup_distance(&narrow, 10.0, 1e-3);
        let closed_form = (1.0 / (2.0 * std::f64::consts::PI).sqrt()) * (1.0 / 0.75f64.sqrt() - 1.0);
        assert!((d - closed_form).abs() < 1e-9, "max sits at x = 0");
    }

    #[test]
    fn interval_advantage_positive_for_narrow_mixture() {
        let narrow = GaussMixture::new(vec![0.0], vec![1.0], 0.75).unwrap();
        let ((a, b), v) = interval_advantage(&narrow);
        assert!(v > 0.0);
        assert!(a < b);
    }

    #[test]
    fn symmetric_two_mixture_pinned_values() {
        // pinned after the first verified run on the default grid
        let m = GaussMixture::new(vec![-1.0, 1.0], vec![0.5, 0.5], 0.5).unwrap();
        let d = sup_distance(&m, 10.0, 1e-3);
        assert!(d > 0.0);
        assert!((d - 0.191388531691135).abs() < 1e-12);
        let ((a, b), v) = interval_advantage(&m);
        assert!((a + 0.826).abs() < 1e-9 && (b - 0.826).abs() < 1e-9);
        assert!((v - 0.193289503656590).abs() < 1e-12);
    }

    #[test]
    fn fewer_terms_than_k_still_singular() {
        // a 3-term exponential sum is also a <=5-term sum
        let terms = [(qi(1), qi(2)), (qr(1, 2), qi(3)), (qr(2, 7), qr(5, 4))];
        let m = mk_exponential_sum(5, &terms).unwrap();
        assert_eq!(m.det(), qi(0));
        let m = mk_exponential_sum(6, &terms).unwrap();
        assert_eq!(m.det(), qi(0));
    }

    #[test]
    fn mk_matrix_known_values() {
        // f(x) = 3 * 2^x, k = 1
        let m = mk_exponential_sum(1, &[(qi(3), qi(2))]).unwrap();
        assert_eq!(m.entries, vec![vec![qr(3, 2), qi(3)], vec![qi(3), qi(6)]]);
        assert_eq!(m.det(), qi(0));

        // f(x) = 2^(x^2), k = 1
        let m = MkMatrix::from_fn(1, |x| q_pow(&qi(2), x * x));
        assert_eq!(m.entries, vec![vec![qi(2), qi(1)], vec![qi(1), qi(2)]]);
        assert_eq!(m.det(), qi(3));

        // two-term exponential sum, k = 2: singular
        let m = mk_exponential_sum(2, &[(qi(1), qi(2)), (qr(1, 3), qr(3, 2))]).unwrap();
        assert_eq!(m.det(), qi(0));
    }

    #[test]
    fn hankel_structure() {
        let m = MkMatrix::from_fn(3, |x| qi(x * x * x));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.entries[i + 1][j], m.entries[i][j + 1]);
            }
        }
    }

    #[test]
    fn inverse_bound_known_values() {
        let r = inverse_entry_bound_check(1, &qi(2)).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_abs_entry, qr(2, 3));
        assert_eq!(r.denominator, qr(3, 4));

        let r = inverse_entry_bound_check(2, &qi(2)).unwrap();
        assert!(r.pass);

        let r = inverse_entry_bound_check(1, &qr(3, 2)).unwrap();
        assert!(r.pass);
        assert_eq!(r.denominator, qr(5, 9));

        assert!(inverse_entry_bound_check(2, &qi(1)).is_err());
    }

    #[test]
    fn gapmiddle_formula_value() {
        let v = gapmiddle_lower(1, 1.0, 1.0);
        let expect = (1.0 - (-2.0f64).exp()) / 8.0;
        assert!((v - expect).abs() < 1e-12);
        // monotone decreasing in k at fixed d^2 alpha
        let mut prev = v;
        for k in 2..=8 {
            let cur = gapmiddle_lower(k, 1.0, 1.0);
            assert!(cur < prev);
            prev = cur;
        }
        // alpha -> 0+ drives the bound to 0+
        assert!(gapmiddle_lower(1, 1.0, 1e-9) < 1e-8);
    }

    #[test]
    fn erdelyi_known_instances() {
        let one = UnivariatePoly::constant(qi(1));
        assert!(erdelyi_check(&one, 4, &qi(2)).passed());
        // hypothesis violation reported distinctly
        let big = UnivariatePoly::new(vec![qi(0); 50].into_iter().chain([qi(1)]).collect());
        assert!(matches!(
            erdelyi_check(&big, 4, &qi(2)),
            CheckOutcome::HypothesisViolated(_)
        ));
        // a polynomial vanishing on 1..m slips below its |Q(0)|: honest fail
        let mut vanish = UnivariatePoly::constant(qi(1));
        for j in 1..=4 {
            vanish = vanish.mul(&UnivariatePoly::new(vec![qi(-j), qi(1)]));
        }
        assert!(matches!(
            erdelyi_check(&vanish, 4, &qi(2)),
            CheckOutcome::Fail(_)
        ));
    }

    #[test]
    fn coppersmith_known_instances() {
        // p(x) = x / 12 on [0, 12]
        let p = UnivariatePoly::new(vec![qi(0), qr(1, 12)]);
        assert!(coppersmith_check(&p, 12).passed());
        // degree too large for m
        let p = UnivariatePoly::new(vec![qi(0), qi(0), qi(0), qr(1, 1000)]);
        assert!(matches!(
            coppersmith_check(&p, 12),
            CheckOutcome::HypothesisViolated(_)
        ));
    }

    #[test]
    fn chebyshev_known_instances() {
        // T_2 itself: |T_2(2)| = 7 <= T_2(2) = 7 <= 16
        let t2 = crate::poly::chebyshev(2);
        assert!(chebyshev_extremal_check(&t2, &qi(2)).passed());
        assert!(matches!(
            chebyshev_extremal_check(&t2, &qr(1, 2)),
            CheckOutcome::HypothesisViolated(_)
        ));
        let too_big = UnivariatePoly::new(vec![qi(0), qi(2)]);
        assert!(matches!(
            chebyshev_extremal_check(&too_big, &qi(2)),
            CheckOutcome::HypothesisViolated(_)
        ));
    }

    #[test]
    fn series_known_instance() {
        let r = series_lower_check(0.5).unwrap();
        assert!((r.product_lower - 0.288788).abs() < 1e-5);
        assert!((r.bound - 0.037256).abs() < 1e-5);
        assert!(r.pass);
        assert!(series_lower_check(1.0).is_err());
    }
}
