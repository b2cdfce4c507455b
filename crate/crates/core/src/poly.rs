//! Exact-coefficient univariate polynomials.
//!
//! Used for LP dual certificates, Chebyshev evaluation, q-binomials and
//! the Vandermonde certificates. Coefficients are exact rationals with the
//! constant term first; trailing zeros are trimmed so degree = len - 1.

use std::fmt;

use num_traits::{One, Zero};

use crate::rat::{qi, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePoly {
    coeffs: Vec<Q>,
}

impl UnivariatePoly {
    /// Build from coefficients (constant term first); trims trailing zeros.
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(Q::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Q::zero());
        }
        UnivariatePoly { coeffs }
    }

    pub fn zero() -> Self {
        UnivariatePoly {
            coeffs: vec![Q::zero()],
        }
    }

    pub fn constant(c: Q) -> Self {
        UnivariatePoly { coeffs: vec![c] }
    }

    /// The monomial x.
    pub fn x() -> Self {
        UnivariatePoly {
            coeffs: vec![Q::zero(), Q::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluation at an integer point.
    pub fn eval_int(&self, x: i64) -> Q {
        self.eval(&qi(x))
    }

    /// f64 evaluation (for plots and diagnostics only).
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + crate::rat::q_to_f64(c);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Q::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        UnivariatePoly::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&qi(-1)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        UnivariatePoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UnivariatePoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UnivariatePoly::new(out)
    }

    /// Multiply by x^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return UnivariatePoly::zero();
        }
        let mut out = vec![Q::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        UnivariatePoly::new(out)
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Sum of all coefficients, i.e. the value at 1.
    pub fn coeff_sum(&self) -> Q {
        self.coeffs.iter().sum()
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Chebyshev polynomial of the first kind, exact coefficients.
pub fn chebyshev(k: usize) -> UnivariatePoly {
    let mut t0 = UnivariatePoly::constant(Q::one());
    if k == 0 {
        return t0;
    }
    let mut t1 = UnivariatePoly::x();
    for _ in 1..k {
        // T_{j+1} = 2 x T_j - T_{j-1}
        let next = t1.shift_up(1).scale(&qi(2)).sub(&t0);
        t0 = t1;
        t1 = next;
    }
    t1
}

/// T_k(s) evaluated exactly at a rational point via the recurrence.
pub fn chebyshev_eval(k: usize, s: &Q) -> Q {
    let mut prev = Q::one();
    if k == 0 {
        return prev;
    }
    let mut cur = s.clone();
    for _ in 1..k {
        let next = qi(2) * s * &cur - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qr;

    #[test]
    fn arithmetic_and_eval() {
        let p = UnivariatePoly::new(vec![qi(1), qi(0), qi(2)]); // 1 + 2x^2
        assert_eq!(p.degree(), 2);
        assert_eq!(p.eval(&qr(1, 2)), qr(3, 2));
        let q = UnivariatePoly::x();
        assert_eq!(p.mul(&q).eval_int(3), qi(57));
        assert_eq!(p.sub(&p), UnivariatePoly::zero());
        assert_eq!(p.term_count(), 2);
        assert_eq!(p.coeff_sum(), qi(3));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = UnivariatePoly::new(vec![qi(5), qi(0), qi(0)]);
        assert_eq!(p.degree(), 0);
        assert_eq!(p.coeffs().len(), 1);
    }

    #[test]
    fn chebyshev_values() {
        // T_2(s) = 2s^2 - 1, T_3(s) = 4s^3 - 3s
        assert_eq!(chebyshev_eval(2, &qi(2)), qi(7));
        assert_eq!(chebyshev_eval(3, &qi(2)), qi(26));
        assert_eq!(chebyshev(3), UnivariatePoly::new(vec![qi(0), qi(-3), qi(0), qi(4)]));
        for k in 0..=6usize {
            let poly = chebyshev(k);
            for s in [-2i64, -1, 0, 1, 3] {
                assert_eq!(poly.eval_int(s), chebyshev_eval(k, &qi(s)));
            }
        }
    }
}
