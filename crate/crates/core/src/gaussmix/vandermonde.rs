//! Symbolic certificates for geometric Vandermonde inverses.
//!
//! Everything here is exact polynomial arithmetic over the rationals in
//! the variable q. The nodes of the Vandermonde matrix are the monomials
//! 1, q, .., q^k, so minors expand to signed sums of monomials via the
//! Leibniz formula (at most (k+1)! terms, tiny for k <= 5).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::poly::UnivariatePoly;
use crate::rat::{binomial, Q};
use crate::Result;

/// Gaussian binomial coefficient C(k, i)_q as an exact polynomial in q,
/// from the generating function prod_{j=0}^{k-1} (1 + q^j t).
pub fn qbinomial(k: i64, i: i64) -> Result<UnivariatePoly> {
    if i < 0 || i > k {
        return Err(Error::InvalidParameter(format!(
            "q-binomial needs 0 <= i <= k, got ({k}, {i})"
        )));
    }
    // coeffs_t[c] is the polynomial-in-q coefficient of t^c
    let mut coeffs_t: Vec<UnivariatePoly> = vec![UnivariatePoly::constant(Q::one())];
    for j in 0..k {
        let mut next: Vec<UnivariatePoly> = Vec::with_capacity(coeffs_t.len() + 1);
        for c in 0..=coeffs_t.len() {
            let mut term = if c < coeffs_t.len() {
                coeffs_t[c].clone()
            } else {
                UnivariatePoly::zero()
            };
            if c > 0 {
                term = term.add(&coeffs_t[c - 1].shift_up(j as usize));
            }
            next.push(term);
        }
        coeffs_t = next;
    }
    // coefficient of t^i is q^(i(i-1)/2) C(k,i)_q; strip the monomial
    let raw = coeffs_t[i as usize].clone();
    let strip = (i * (i - 1) / 2) as usize;
    let coeffs = raw.coeffs();
    for c in coeffs.iter().take(strip.min(coeffs.len())) {
        debug_assert!(c.is_zero(), "t^i coefficient must start at q^(i(i-1)/2)");
    }
    Ok(UnivariatePoly::new(coeffs[strip.min(coeffs.len())..].to_vec()))
}

/// Signed permutation expansion of det [ q^(rows[r] * cols[c]) ]_{r,c}.
fn qvand_minor_det(rows: &[i64], cols: &[i64]) -> UnivariatePoly {
    assert_eq!(rows.len(), cols.len());
    let n = rows.len();
    let mut acc: Vec<(i64, bool)> = Vec::new(); // (exponent, negative)
    let mut perm: Vec<usize> = (0..n).collect();
    permute_signed(&mut perm, 0, true, &mut |p, positive| {
        let expo: i64 = (0..n).map(|r| rows[r] * cols[p[r]]).sum();
        acc.push((expo, !positive));
    });
    let max_e = acc.iter().map(|(e, _)| *e).max().unwrap_or(0);
    let mut coeffs = vec![Q::zero(); (max_e + 1) as usize];
    for (e, neg) in acc {
        if neg {
            coeffs[e as usize] -= Q::one();
        } else {
            coeffs[e as usize] += Q::one();
        }
    }
    UnivariatePoly::new(coeffs)
}

fn permute_signed<F: FnMut(&[usize], bool)>(
    perm: &mut Vec<usize>,
    at: usize,
    positive: bool,
    emit: &mut F,
) {
    let n = perm.len();
    if at == n {
        emit(perm, positive);
        return;
    }
    for i in at..n {
        perm.swap(at, i);
        let sign = if i == at { positive } else { !positive };
        permute_signed(perm, at + 1, sign, emit);
        perm.swap(at, i);
    }
}

/// One (i, j) entry of the power-count certificate.
#[derive(Debug, Clone)]
pub struct PowerCountReport {
    /// 1-based matrix position.
    pub i: i64,
    pub j: i64,
    /// C(k, i-1) C(k, j-1).
    pub expected_terms: BigInt,
    /// Sum of the (nonnegative) coefficients: powers counted with
    /// multiplicity.
    pub coeff_sum: Q,
    /// Smallest q-exponent appearing (entries are Laurent in general).
    pub min_exponent: i64,
    pub all_coeffs_nonneg: bool,
    /// Every nonzero coefficient equals 1 (fails for k >= 4 where plain
    /// q-binomial coefficients exceed 1; the count still matches).
    pub all_coeffs_one: bool,
    pub pass: bool,
}

/// Verify symbolically that (-1)^(i+j) (V^(-1))_{i,j} prod_{b=1}^k (q^b - 1)
/// is a sum of exactly C(k,i-1) C(k,j-1) powers of q for every entry of
/// V = Vand(1, q, .., q^k).
///
/// "Sum of N powers" counts multiplicity: all coefficients must be
/// nonnegative integers adding up to N (exponents may be negative).
pub fn vandermonde_power_count_check(k: i64) -> Result<Vec<PowerCountReport>> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let dim = k + 1;
    let all_rows: Vec<i64> = (0..dim).collect();
    let all_cols: Vec<i64> = (0..dim).collect();
    let det_v = qvand_minor_det(&all_rows, &all_cols);
    let mut correction = UnivariatePoly::constant(Q::one());
    for b in 1..=k {
        // q^b - 1
        let mut c = vec![Q::zero(); b as usize + 1];
        c[0] = -Q::one();
        c[b as usize] = Q::one();
        correction = correction.mul(&UnivariatePoly::new(c));
    }
    let mut out = Vec::new();
    for i in 1..=dim {
        for j in 1..=dim {
            // Cramer: (V^{-1})_{i,j} = (-1)^(i+j) det(V~_{j,i}) / det V,
            // so the signed product reduces to det(V~_{j,i}) * prod / det V.
            let rows: Vec<i64> = all_rows.iter().copied().filter(|&r| r != j - 1).collect();
            let cols: Vec<i64> = all_cols.iter().copied().filter(|&c| c != i - 1).collect();
            let minor = qvand_minor_det(&rows, &cols);
            let numerator = minor.mul(&correction);
            let (quotient, min_exp) = laurent_divide(&numerator, &det_v).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "determinant does not divide the corrected minor at ({i},{j})"
                ))
            })?;
            let coeffs = quotient.coeffs();
            let all_nonneg = coeffs.iter().all(|c| !c.is_negative());
            let all_one = coeffs
                .iter()
                .filter(|c| !c.is_zero())
                .all(|c| c.is_one());
            let coeff_sum = quotient.coeff_sum();
            let expected = binomial(k as u64, i - 1) * binomial(k as u64, j - 1);
            let pass = all_nonneg && coeff_sum == Q::from_integer(expected.clone());
            out.push(PowerCountReport {
                i,
                j,
                expected_terms: expected,
                coeff_sum,
                min_exponent: min_exp,
                all_coeffs_nonneg: all_nonneg,
                all_coeffs_one: all_one,
                pass,
            });
        }
    }
    Ok(out)
}

/// Divide num by den allowing a monomial shift: returns (quotient, e) with
/// num * q^(-e)... i.e. num/den = quotient * q^e where e = min exponent
/// (possibly negative) and quotient has a nonzero constant term.
fn laurent_divide(num: &UnivariatePoly, den: &UnivariatePoly) -> Option<(UnivariatePoly, i64)> {
    if num.is_zero() {
        return Some((UnivariatePoly::zero(), 0));
    }
    // strip common monomial factors first
    let strip = |p: &UnivariatePoly| -> (UnivariatePoly, i64) {
        let c = p.coeffs();
        let lead = c.iter().position(|v| !v.is_zero()).unwrap_or(0);
        (UnivariatePoly::new(c[lead..].to_vec()), lead as i64)
    };
    let (n0, en) = strip(num);
    let (d0, ed) = strip(den);
    let q = poly_div_exact(&n0, &d0)?;
    Some((q, en - ed))
}

/// Exact polynomial long division; None when the remainder is nonzero.
fn poly_div_exact(num: &UnivariatePoly, den: &UnivariatePoly) -> Option<UnivariatePoly> {
    if den.is_zero() {
        return None;
    }
    if num.is_zero() {
        return Some(UnivariatePoly::zero());
    }
    if num.degree() < den.degree() {
        return None;
    }
    let mut rem: Vec<Q> = num.coeffs().to_vec();
    let d = den.degree();
    let lead = den.coeff(d);
    let qlen = num.degree() - d + 1;
    let mut quot = vec![Q::zero(); qlen];
    for pos in (0..qlen).rev() {
        let c = &rem[pos + d] / &lead;
        if !c.is_zero() {
            for (off, dc) in den.coeffs().iter().enumerate() {
                let t = &c * dc;
                rem[pos + off] -= t;
            }
        }
        quot[pos] = c;
    }
    if rem.iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(UnivariatePoly::new(quot))
}

/// One (i, j) comparison of a minor quotient against an elementary
/// symmetric polynomial value.
#[derive(Debug, Clone)]
pub struct QuotientCheckReport {
    pub i: i64,
    pub j: i64,
    pub quotient: Q,
    pub elementary_value: Q,
    pub pass: bool,
}

/// On distinct rational nodes x_0..x_k, verify for every (i, j) that
/// det(X~_{j,i}) / det(X~_{k+1,i}) = e_{k+1-j}(nodes minus x_{i-1})
/// with X = Vand(x_0, .., x_k), all exactly.
pub fn elementary_symmetric_quotient_check(nodes: &[Q]) -> Result<Vec<QuotientCheckReport>> {
    let dim = nodes.len();
    if dim < 2 {
        return Err(Error::InvalidParameter("need at least 2 nodes".into()));
    }
    for a in 0..dim {
        for b in a + 1..dim {
            if nodes[a] == nodes[b] {
                return Err(Error::InvalidParameter("nodes must be distinct".into()));
            }
        }
    }
    let k = dim - 1;
    let minor_det = |drop_row: usize, drop_col: usize| -> Q {
        // rows are powers 0..k, cols are nodes
        let mut m: Vec<Vec<Q>> = Vec::with_capacity(dim - 1);
        for r in 0..dim {
            if r == drop_row {
                continue;
            }
            let mut row = Vec::with_capacity(dim - 1);
            for (c, node) in nodes.iter().enumerate() {
                if c == drop_col {
                    continue;
                }
                row.push(node.pow(r as i32));
            }
            m.push(row);
        }
        super::det_exact(m)
    };
    let mut out = Vec::new();
    for i in 1..=dim {
        let reduced: Vec<Q> = nodes
            .iter()
            .enumerate()
            .filter(|(c, _)| *c != i - 1)
            .map(|(_, v)| v.clone())
            .collect();
        let esyms = elementary_symmetric(&reduced);
        let base = minor_det(k, i - 1); // X~_{k+1, i}
        if base.is_zero() {
            return Err(Error::InvalidParameter(
                "degenerate base minor; nodes must be distinct".into(),
            ));
        }
        for j in 1..=dim {
            let quotient = minor_det(j - 1, i - 1) / &base;
            let e_val = esyms[dim - j].clone();
            out.push(QuotientCheckReport {
                i: i as i64,
                j: j as i64,
                pass: quotient == e_val,
                quotient,
                elementary_value: e_val,
            });
        }
    }
    Ok(out)
}

/// e_0..e_m of the given values, exact.
fn elementary_symmetric(values: &[Q]) -> Vec<Q> {
    let mut es = vec![Q::zero(); values.len() + 1];
    es[0] = Q::one();
    for v in values {
        for m in (1..es.len()).rev() {
            let t = v * &es[m - 1];
            es[m] += t;
        }
    }
    es
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{qi, qr};

    #[test]
    fn qbinomial_known_values() {
        // C(2,1)_q = 1 + q
        let p = qbinomial(2, 1).unwrap();
        assert_eq!(p, UnivariatePoly::new(vec![qi(1), qi(1)]));
        assert_eq!(p.term_count(), 2);
        // C(k,0)_q = 1
        assert_eq!(qbinomial(5, 0).unwrap(), UnivariatePoly::constant(qi(1)));
        // C(4,2)_q = 1 + q + 2q^2 + q^3 + q^4: coefficient 2 appears
        let p = qbinomial(4, 2).unwrap();
        assert_eq!(
            p,
            UnivariatePoly::new(vec![qi(1), qi(1), qi(2), qi(1), qi(1)])
        );
        // coefficient sum is the plain binomial
        assert_eq!(p.coeff_sum(), qi(6));
        assert!(qbinomial(3, 4).is_err());
    }

    #[test]
    fn qbinomial_symmetry() {
        for k in 1..=6 {
            for i in 0..=k {
                let a = qbinomial(k, i).unwrap();
                let b = qbinomial(k, k - i).unwrap();
                assert_eq!(a, b, "C(k,i)_q = C(k,k-i)_q");
            }
        }
    }

    #[test]
    fn det_of_qvandermonde() {
        // det Vand(1, q, q^2) = (q-1)(q^2-1)(q^2-q)
        let det = qvand_minor_det(&[0, 1, 2], &[0, 1, 2]);
        let a = UnivariatePoly::new(vec![qi(-1), qi(1)]);
        let b = UnivariatePoly::new(vec![qi(-1), qi(0), qi(1)]);
        let c = UnivariatePoly::new(vec![qi(0), qi(-1), qi(1)]);
        assert_eq!(det, a.mul(&b).mul(&c));
    }

    #[test]
    fn power_count_k2_all_ones() {
        let reports = vandermonde_power_count_check(2).unwrap();
        assert_eq!(reports.len(), 9);
        for r in &reports {
            assert!(r.pass, "({}, {}) failed", r.i, r.j);
            assert!(r.all_coeffs_one, "k = 2 entries are multiplicity-free");
        }
        // the (2,2) entry is genuinely Laurent: q^2 + q + 1 + 1/q
        let r22 = reports.iter().find(|r| r.i == 2 && r.j == 2).unwrap();
        assert_eq!(r22.min_exponent, -1);
        assert_eq!(r22.coeff_sum, qi(4));
    }

    #[test]
    fn power_count_k4_has_multiplicity() {
        let reports = vandermonde_power_count_check(4).unwrap();
        assert!(reports.iter().all(|r| r.pass));
        assert!(
            reports.iter().any(|r| !r.all_coeffs_one),
            "k = 4 entries inherit the 2q^2 of C(4,2)_q"
        );
    }

    #[test]
    fn quotient_check_known_values() {
        let nodes: Vec<Q> = [1, 2, 3, 4].map(qi).to_vec();
        let reports = elementary_symmetric_quotient_check(&nodes).unwrap();
        assert!(reports.iter().all(|r| r.pass));
        // j = k+1 row: e_0 = 1
        for r in reports.iter().filter(|r| r.j == 4) {
            assert_eq!(r.quotient, qi(1));
        }
        // rational, negative nodes too
        let nodes = vec![qr(1, 2), qi(-1), qr(7, 3), qi(2)];
        assert!(elementary_symmetric_quotient_check(&nodes)
            .unwrap()
            .iter()
            .all(|r| r.pass));
        // duplicates rejected
        let nodes = vec![qi(1), qi(1), qi(2)];
        assert!(elementary_symmetric_quotient_check(&nodes).is_err());
    }
}
