//! Exact probability mass functions over Hamming weights.
//!
//! A [`WeightPMF`] is the law of the coordinate sum of an exchangeable
//! distribution on {-1,1}^n. Weights live on the parity grid
//! {-n, -n+2, ..., n}; masses are exact nonnegative rationals summing to 1
//! and zero-mass weights are never stored.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::Error;
use crate::rat::{binomial_row, format_q, int_pow, parse_q, Q};
use crate::Result;

/// Exact weight PMF of an exchangeable distribution on {-1,1}^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightPMF {
    n: i64,
    masses: BTreeMap<i64, Q>,
}

impl WeightPMF {
    /// Build from explicit masses, validating parity, range, nonnegativity
    /// and exact normalization. Zero-mass entries are dropped.
    pub fn from_masses(n: i64, masses: BTreeMap<i64, Q>) -> Result<Self> {
        if n < 1 {
            return Err(Error::DegenerateDimension(n));
        }
        let mut clean = BTreeMap::new();
        let mut total = Q::zero();
        for (w, p) in masses {
            check_weight(n, w)?;
            if p.is_negative() {
                return Err(Error::InvalidMasses(format!("negative mass at weight {w}")));
            }
            if p.is_zero() {
                continue;
            }
            total += &p;
            clean.insert(w, p);
        }
        if !total.is_one() {
            return Err(Error::InvalidMasses(format!(
                "sum to {} instead of 1",
                format_q(&total)
            )));
        }
        Ok(WeightPMF { n, masses: clean })
    }

    /// Law of the sum of n independent uniform signs: mass C(n,(n+w)/2)/2^n.
    pub fn binomial(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::DegenerateDimension(n));
        }
        let row = binomial_row(n as u64);
        let denom = BigInt::one() << n as u64;
        let mut masses = BTreeMap::new();
        for w in weight_grid(n) {
            let ones = ((n + w) / 2) as usize;
            masses.insert(w, Q::new(row[ones].clone(), denom.clone()));
        }
        Ok(WeightPMF { n, masses })
    }

    /// Point mass at weight t: the uniform slice distribution.
    pub fn slice(n: i64, t: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::DegenerateDimension(n));
        }
        check_weight(n, t)?;
        let mut masses = BTreeMap::new();
        masses.insert(t, Q::one());
        Ok(WeightPMF { n, masses })
    }

    /// Convex mixture of weight PMFs on the same dimension.
    ///
    /// Coefficients must be nonnegative and sum to exactly 1.
    pub fn mixture(parts: &[(Q, &WeightPMF)]) -> Result<Self> {
        let n = parts
            .first()
            .ok_or_else(|| Error::InvalidMasses("empty mixture".into()))?
            .1
            .n;
        let mut masses: BTreeMap<i64, Q> = BTreeMap::new();
        for (c, p) in parts {
            if p.n != n {
                return Err(Error::DimensionMismatch(n, p.n));
            }
            if c.is_negative() {
                return Err(Error::InvalidMasses("negative mixture coefficient".into()));
            }
            for (w, m) in &p.masses {
                *masses.entry(*w).or_insert_with(Q::zero) += c * m;
            }
        }
        WeightPMF::from_masses(n, masses)
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// Support size.
    pub fn support_len(&self) -> usize {
        self.masses.len()
    }

    /// Weights carrying mass, in increasing order.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.masses.keys().copied()
    }

    /// Mass at w (zero off the support).
    pub fn mass(&self, w: i64) -> Q {
        self.masses.get(&w).cloned().unwrap_or_else(Q::zero)
    }

    /// Iterate (weight, mass) pairs in increasing weight order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Q)> + '_ {
        self.masses.iter().map(|(w, p)| (*w, p))
    }

    /// First k raw moments of the weight: entry j-1 is E[W^j], exact.
    pub fn moments(&self, k: i64) -> Vec<Q> {
        let mut out = Vec::with_capacity(k.max(0) as usize);
        for j in 1..=k.max(0) {
            let mut m = Q::zero();
            for (w, p) in &self.masses {
                m += p * Q::from_integer(int_pow(*w, j as u32));
            }
            out.push(m);
        }
        out
    }

    /// E[W^j] for a single j.
    pub fn moment(&self, j: u32) -> Q {
        let mut m = Q::zero();
        for (w, p) in &self.masses {
            m += p * Q::from_integer(int_pow(*w, j));
        }
        m
    }

    /// True iff the first k weight moments match the binomial's exactly.
    ///
    /// For exchangeable distributions this is exactly k-wise uniformity.
    pub fn is_k_uniform(&self, k: i64) -> bool {
        let b = binomial_moments(self.n, k);
        self.moments(k) == b
    }

    /// Pr[W >= t], exact. Thresholds outside [-n, n] are allowed.
    pub fn tail_mass(&self, t: i64) -> Q {
        let mut s = Q::zero();
        for (_, p) in self.masses.range(t..) {
            s += p;
        }
        s
    }

    /// Pr[W <= t], exact.
    pub fn lower_tail_mass(&self, t: i64) -> Q {
        let mut s = Q::zero();
        for (_, p) in self.masses.range(..=t) {
            s += p;
        }
        s
    }

    /// Pr[a <= W <= b], exact; empty interval (a > b) gives 0.
    pub fn interval_mass(&self, a: i64, b: i64) -> Q {
        if a > b {
            return Q::zero();
        }
        let mut s = Q::zero();
        for (_, p) in self.masses.range(a..=b) {
            s += p;
        }
        s
    }

    /// Pr[|W| >= t], exact.
    pub fn two_sided_tail_mass(&self, t: i64) -> Q {
        if t <= 0 {
            return Q::one();
        }
        self.tail_mass(t) + self.lower_tail_mass(-t)
    }

    /// Mean E[W], exact.
    pub fn mean(&self) -> Q {
        self.moment(1)
    }

    /// Reflection w -> -w. Preserves k-uniformity for every k.
    pub fn complement(&self) -> WeightPMF {
        let masses = self.masses.iter().map(|(w, p)| (-w, p.clone())).collect();
        WeightPMF {
            n: self.n,
            masses,
        }
    }

    /// Serialize as {"n": .., "pmf": [{"w": .., "p": "num/den"}, ..]} with
    /// weights increasing and rationals in lowest terms.
    pub fn to_json(&self) -> Value {
        let pmf: Vec<Value> = self
            .masses
            .iter()
            .map(|(w, p)| json!({"w": w, "p": format_q(p)}))
            .collect();
        json!({"n": self.n, "pmf": pmf})
    }

    /// Parse the [`to_json`](Self::to_json) record.
    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("n")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Parse("missing integer field `n`".into()))?;
        let entries = v
            .get("pmf")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field `pmf`".into()))?;
        let mut masses = BTreeMap::new();
        for e in entries {
            let w = e
                .get("w")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse("pmf entry missing `w`".into()))?;
            let p = e
                .get("p")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("pmf entry missing `p`".into()))?;
            if masses.insert(w, parse_q(p)?).is_some() {
                return Err(Error::Parse(format!("duplicate weight {w}")));
            }
        }
        WeightPMF::from_masses(n, masses)
    }
}

/// Admissible weights of dimension n in increasing order.
pub fn weight_grid(n: i64) -> Vec<i64> {
    (-n..=n).step_by(2).collect()
}

/// Parity/range validation for a weight.
pub fn check_weight(n: i64, w: i64) -> Result<()> {
    if w.abs() > n {
        return Err(Error::WeightRange { n, w });
    }
    if (w - n).rem_euclid(2) != 0 {
        return Err(Error::Parity { n, w });
    }
    Ok(())
}

/// First k raw moments of the centered binomial, exact.
pub fn binomial_moments(n: i64, k: i64) -> Vec<Q> {
    let row = binomial_row(n as u64);
    let denom = BigInt::one() << n as u64;
    let mut out = Vec::with_capacity(k.max(0) as usize);
    for j in 1..=k.max(0) {
        if j % 2 == 1 {
            out.push(Q::zero());
            continue;
        }
        let mut num = BigInt::zero();
        for w in weight_grid(n) {
            let ones = ((n + w) / 2) as usize;
            num += &row[ones] * int_pow(w, j as u32);
        }
        out.push(Q::new(num, denom.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{qi, qr};

    #[test]
    fn binomial_small() {
        let p1 = WeightPMF::binomial(1).unwrap();
        assert_eq!(p1.mass(-1), qr(1, 2));
        assert_eq!(p1.mass(1), qr(1, 2));

        let p2 = WeightPMF::binomial(2).unwrap();
        assert_eq!(p2.mass(-2), qr(1, 4));
        assert_eq!(p2.mass(0), qr(1, 2));
        assert_eq!(p2.mass(2), qr(1, 4));

        assert!(matches!(
            WeightPMF::binomial(0),
            Err(Error::DegenerateDimension(0))
        ));
    }

    #[test]
    fn slice_and_parity_errors() {
        let s = WeightPMF::slice(2, 0).unwrap();
        assert_eq!(s.mass(0), qi(1));
        let s = WeightPMF::slice(3, 1).unwrap();
        assert_eq!(s.mass(1), qi(1));
        assert!(matches!(
            WeightPMF::slice(2, 1),
            Err(Error::Parity { n: 2, w: 1 })
        ));
        assert!(matches!(
            WeightPMF::slice(2, 4),
            Err(Error::WeightRange { n: 2, w: 4 })
        ));
    }

    #[test]
    fn moments_known_values() {
        let b2 = WeightPMF::binomial(2).unwrap();
        assert_eq!(b2.moments(2), vec![qi(0), qi(2)]);
        let s = WeightPMF::slice(2, 0).unwrap();
        assert_eq!(s.moments(2), vec![qi(0), qi(0)]);
        let b4 = WeightPMF::binomial(4).unwrap();
        assert_eq!(b4.moments(4), vec![qi(0), qi(4), qi(0), qi(40)]);
    }

    #[test]
    fn k_uniformity() {
        let b6 = WeightPMF::binomial(6).unwrap();
        assert!(b6.is_k_uniform(6));
        let s = WeightPMF::slice(2, 0).unwrap();
        assert!(s.is_k_uniform(1));
        assert!(!s.is_k_uniform(2));
    }

    #[test]
    fn tails_and_intervals() {
        let b4 = WeightPMF::binomial(4).unwrap();
        assert_eq!(b4.tail_mass(2), qr(5, 16));
        assert_eq!(b4.tail_mass(-4), qi(1));
        assert_eq!(b4.tail_mass(6), qi(0));
        assert_eq!(b4.interval_mass(2, 0), qi(0));
        assert_eq!(b4.interval_mass(-4, 4), qi(1));
        assert_eq!(b4.two_sided_tail_mass(2), qr(5, 8));
    }

    #[test]
    fn complement_basics() {
        let b4 = WeightPMF::binomial(4).unwrap();
        assert_eq!(b4.complement(), b4);
        let s = WeightPMF::slice(3, 1).unwrap();
        assert_eq!(s.complement(), WeightPMF::slice(3, -1).unwrap());
        assert_eq!(s.complement().complement(), s);
    }

    #[test]
    fn validation_rejects_bad_masses() {
        let mut m = BTreeMap::new();
        m.insert(0, qr(1, 2));
        assert!(WeightPMF::from_masses(2, m.clone()).is_err());
        m.insert(2, qr(1, 2));
        assert!(WeightPMF::from_masses(2, m.clone()).is_ok());
        m.insert(2, qr(-1, 2));
        assert!(WeightPMF::from_masses(2, m).is_err());
    }

    #[test]
    fn values_are_thread_safe() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<WeightPMF>();
        assert_send_sync::<crate::BiasProfile>();
        assert_send_sync::<crate::LPSolution>();
        assert_send_sync::<crate::UnivariatePoly>();
        assert_send_sync::<crate::SeparationReport>();
    }

    #[test]
    fn json_round_trip() {
        let b4 = WeightPMF::binomial(4).unwrap();
        let v = b4.to_json();
        assert_eq!(WeightPMF::from_json(&v).unwrap(), b4);
        let txt = v.to_string();
        assert!(txt.contains("\"p\":\"1/16\""));
    }
}
