//! Exact rational scalars and the binomial-coefficient cache.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational scalar used for all probabilities and LP data.
pub type Q = BigRational;

/// Rational from an integer.
pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Rational a/b.
pub fn qr(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

/// Parse "a/b" or "a" into an exact rational.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt, Error> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad integer `{t}`")))
    };
    match s.split_once('/') {
        Some((a, b)) => {
            let den = parse_int(b)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Q::new(parse_int(a)?, den))
        }
        None => Ok(Q::from_integer(parse_int(s)?)),
    }
}

/// Format as "num/den", always with an explicit denominator, lowest terms.
pub fn format_q(v: &Q) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Round-to-nearest f64 value of an exact rational.
///
/// Accurate to f64 precision even when numerator and denominator are huge:
/// the bit lengths are rebalanced before converting.
pub fn q_to_f64(v: &Q) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let (n, d) = (v.numer(), v.denom());
    if let (Some(nf), Some(df)) = (n.to_f64(), d.to_f64()) {
        if nf.is_finite() && df.is_finite() && df != 0.0 {
            let r = nf / df;
            if r.is_finite() {
                return r;
            }
        }
    }
    // Rebalance: shift both parts so they fit in f64 range, track exponent.
    let shift = n.bits() as i64 - d.bits() as i64;
    let scaled = if shift > 0 {
        Q::new(n.clone(), d.clone() << shift as u64)
    } else {
        Q::new(n.clone() << (-shift) as u64, d.clone())
    };
    let base = scaled.numer().to_f64().unwrap_or(f64::NAN) / scaled.denom().to_f64().unwrap_or(f64::NAN);
    base * 2f64.powi(shift as i32)
}

/// Exact rational equal to the given finite f64.
pub fn q_from_f64(v: f64) -> Q {
    Q::from_float(v).expect("finite float")
}

/// w^e for integer w with e >= 0, exact.
pub fn int_pow(w: i64, e: u32) -> BigInt {
    BigInt::from(w).pow(e)
}

/// q^e for rational q and integer e (negative exponents allowed).
pub fn q_pow(q: &Q, e: i64) -> Q {
    if e >= 0 {
        q.pow(e as i32)
    } else {
        Q::one() / q.pow((-e) as i32)
    }
}

/// |v| as f64, for diagnostics.
pub fn q_abs_f64(v: &Q) -> f64 {
    q_to_f64(&v.abs())
}

static BINOM_ROWS: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();

/// Row n of Pascal's triangle, cached.
pub fn binomial_row(n: u64) -> Arc<Vec<BigInt>> {
    let cache = BINOM_ROWS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("binomial cache poisoned");
    if let Some(row) = guard.get(&n) {
        return Arc::clone(row);
    }
    let mut row: Vec<BigInt> = Vec::with_capacity(n as usize + 1);
    row.push(BigInt::one());
    for k in 0..n {
        // C(n, k+1) = C(n, k) * (n - k) / (k + 1)
        let next = (&row[k as usize] * BigInt::from(n - k)) / BigInt::from(k + 1);
        row.push(next);
    }
    let row = Arc::new(row);
    guard.insert(n, Arc::clone(&row));
    row
}

/// C(n, k), zero outside 0..=n.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    binomial_row(n)[k as usize].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6").unwrap(), qr(1, 2));
        assert_eq!(parse_q("-4").unwrap(), qi(-4));
        assert_eq!(format_q(&qr(2, 4)), "1/2");
        assert_eq!(format_q(&qi(3)), "3/1");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
        assert!(binomial(4, 5).is_zero());
        assert!(binomial(4, -1).is_zero());
    }

    #[test]
    fn f64_conversion_handles_huge_terms() {
        // 2^-900 as a ratio of huge integers
        let v = Q::new(BigInt::one(), BigInt::from(2).pow(900u32));
        let f = q_to_f64(&v);
        assert!(f >= 0.0);
        let w = Q::new(BigInt::from(3).pow(400u32), BigInt::from(3).pow(401u32));
        assert!((q_to_f64(&w) - 1.0 / 3.0).abs() < 1e-15);
    }
}
