//! Exact parity biases of exchangeable distributions.
//!
//! For the uniform distribution on the slice of weight t, the expectation
//! of a size-l parity depends only on l and equals K_l(j)/C(n,l) with
//! j = (n-t)/2 and K_l the Krawtchouk polynomial, computed here as the
//! alternating binomial sum in exact integers (no recurrences).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::Error;
use crate::pmf::{check_weight, WeightPMF};
use crate::rat::{binomial, format_q, parse_q, Q};
use crate::Result;

/// K_l(j) = sum_i (-1)^i C(j,i) C(n-j, l-i), exact.
fn krawtchouk(n: i64, ell: i64, j: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..=ell.min(j) {
        let term = binomial(j as u64, i) * binomial((n - j) as u64, ell - i);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// E[prod_{i in S} x_i] over the uniform slice of weight t, for |S| = ell.
pub fn slice_bias(n: i64, t: i64, ell: i64) -> Result<Q> {
    if n < 1 {
        return Err(Error::DegenerateDimension(n));
    }
    check_weight(n, t)?;
    if !(0..=n).contains(&ell) {
        return Err(Error::ParitySize { n, ell });
    }
    let j = (n - t) / 2;
    Ok(Q::new(krawtchouk(n, ell, j), binomial(n as u64, ell)))
}

/// Exact parity bias as a function of parity size l = 0..=n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiasProfile {
    pub n: i64,
    /// Entry l is E[D^S] for any |S| = l; entry 0 is always 1.
    pub biases: Vec<Q>,
}

impl BiasProfile {
    /// Largest |bias| over parity sizes 1..=k (clamped to n).
    pub fn max_abs_bias(&self, k: i64) -> Q {
        let hi = k.min(self.n).max(0) as usize;
        let mut best = Q::zero();
        for b in &self.biases[1..=hi] {
            let a = b.abs();
            if a > best {
                best = a;
            }
        }
        best
    }

    /// Exact (eps, k)-bias certificate: max_{1<=l<=k} |bias(l)| <= eps.
    pub fn is_eps_k_biased(&self, eps: &Q, k: i64) -> bool {
        self.max_abs_bias(k) <= *eps
    }

    /// Serialize as {"n": .., "bias": ["num/den", ..]}.
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "bias": self.biases.iter().map(format_q).collect::<Vec<_>>(),
        })
    }

    /// Parse the [`to_json`](Self::to_json) record.
    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("n")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Parse("missing integer field `n`".into()))?;
        let arr = v
            .get("bias")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field `bias`".into()))?;
        let biases = arr
            .iter()
            .map(|e| {
                e.as_str()
                    .ok_or_else(|| Error::Parse("bias entry not a string".into()))
                    .and_then(parse_q)
            })
            .collect::<Result<Vec<_>>>()?;
        if biases.len() != (n + 1) as usize {
            return Err(Error::Parse("bias vector length != n + 1".into()));
        }
        Ok(BiasProfile { n, biases })
    }
}

/// Full bias profile of a weight PMF: entry l is sum_w P(w) slice_bias(n,w,l).
pub fn bias_profile(p: &WeightPMF) -> BiasProfile {
    let n = p.n();
    let mut biases = Vec::with_capacity((n + 1) as usize);
    for ell in 0..=n {
        let mut b = Q::zero();
        for (w, mass) in p.iter() {
            b += mass * slice_bias(n, w, ell).expect("valid support weight");
        }
        biases.push(b);
    }
    BiasProfile { n, biases }
}

/// The slice parity bound (l/n + t^2/n^2)^(l/2), evaluated in f64.
///
/// Comparisons of exact biases against this irrational bound use a
/// documented slack of 1e-12.
pub fn lemma13_bound(n: i64, t: f64, ell: i64) -> f64 {
    if ell == 0 {
        return 1.0;
    }
    let nf = n as f64;
    let base = ell as f64 / nf + (t * t) / (nf * nf);
    base.powf(ell as f64 / 2.0)
}
