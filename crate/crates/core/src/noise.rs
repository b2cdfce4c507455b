//! Exact noise kernels on weight PMFs.
//!
//! Two kernels: correlation-rho smoothing (each coordinate independently
//! rerandomized with probability 1-rho, i.e. flipped with probability
//! (1-rho)/2) and the round-based kernel that picks a uniform coordinate
//! and sets it to uniform. Both act on the weight law exactly because the
//! string operations preserve exchangeability.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::pmf::WeightPMF;
use crate::rat::{binomial_row, q_pow, qi, qr, Q};
use crate::Result;

fn check_rho(rho: &Q) -> Result<()> {
    if rho.is_negative() || *rho > Q::one() {
        return Err(Error::RhoRange(crate::rat::format_q(rho)));
    }
    Ok(())
}

/// Binomial(m, beta) masses as exact rationals: entry f is C(m,f) beta^f (1-beta)^(m-f).
fn binomial_weights(m: i64, beta: &Q) -> Vec<Q> {
    let row = binomial_row(m as u64);
    let comp = Q::one() - beta;
    let mut out = Vec::with_capacity(m as usize + 1);
    for f in 0..=m {
        let coeff = Q::from_integer(row[f as usize].clone());
        out.push(coeff * q_pow(beta, f) * q_pow(&comp, m - f));
    }
    out
}

/// Exact law of the coordinate sum after rho-smoothing.
///
/// Conditioned on weight w with n+ = (n+w)/2 plus-coordinates, the output
/// weight is w - 2F+ + 2F- where F+ ~ Bin(n+, (1-rho)/2) and
/// F- ~ Bin(n-n+, (1-rho)/2) are independent flip counts.
pub fn smooth(p: &WeightPMF, rho: &Q) -> Result<WeightPMF> {
    check_rho(rho)?;
    let n = p.n();
    let beta = (Q::one() - rho) / qi(2); // per-coordinate flip probability
    if beta.is_zero() {
        return Ok(p.clone());
    }
    let mut masses: BTreeMap<i64, Q> = BTreeMap::new();
    for (w, mass) in p.iter() {
        let n_plus = (n + w) / 2;
        let n_minus = n - n_plus;
        let wp = binomial_weights(n_plus, &beta);
        let wm = binomial_weights(n_minus, &beta);
        for (fp, qp) in wp.iter().enumerate() {
            if qp.is_zero() {
                continue;
            }
            let part = mass * qp;
            for (fm, qm) in wm.iter().enumerate() {
                if qm.is_zero() {
                    continue;
                }
                let out_w = w - 2 * fp as i64 + 2 * fm as i64;
                *masses.entry(out_w).or_insert_with(Q::zero) += &part * qm;
            }
        }
    }
    WeightPMF::from_masses(n, masses)
}

/// One step of the pick-a-uniform-coordinate-and-rerandomize kernel:
/// from w, stay with probability 1/2, move to w-2 with probability
/// (n+w)/(4n), move to w+2 with probability (n-w)/(4n).
fn replace_step(p: &WeightPMF) -> WeightPMF {
    let n = p.n();
    let mut masses: BTreeMap<i64, Q> = BTreeMap::new();
    for (w, mass) in p.iter() {
        let stay = mass * qr(1, 2);
        *masses.entry(w).or_insert_with(Q::zero) += stay;
        let down = mass * Q::new((n + w).into(), (4 * n).into());
        if !down.is_zero() {
            *masses.entry(w - 2).or_insert_with(Q::zero) += down;
        }
        let up = mass * Q::new((n - w).into(), (4 * n).into());
        if !up.is_zero() {
            *masses.entry(w + 2).or_insert_with(Q::zero) += up;
        }
    }
    WeightPMF::from_masses(n, masses).expect("kernel preserves total mass")
}

/// Apply `rounds` independent rerandomization rounds (with replacement).
pub fn replace_noise(p: &WeightPMF, rounds: u32) -> WeightPMF {
    let mut cur = p.clone();
    for _ in 0..rounds {
        cur = replace_step(&cur);
    }
    cur
}

/// Raw and centered moments of a single smoothed coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseMoments {
    /// (E[Z], E[Z^2], E[Z^3]) for Z = (x * N_rho)_i.
    pub raw: (Q, Q, Q),
    /// Var[Z - rho x].
    pub variance: Q,
    /// E[(Z - rho x)^3].
    pub third_central: Q,
}

/// Moments of one noisy coordinate with sign x in {-1, +1}.
pub fn noise_moments(x: i8, rho: &Q) -> Result<NoiseMoments> {
    check_rho(rho)?;
    if x != 1 && x != -1 {
        return Err(Error::InvalidParameter(format!("x = {x} not a sign")));
    }
    let xq = qi(x as i64);
    let raw = (rho * &xq, Q::one(), rho * &xq);
    let variance = Q::one() - rho * rho;
    let third_central = qi(-2) * rho * &variance * &xq;
    Ok(NoiseMoments {
        raw,
        variance,
        third_central,
    })
}
