//! Two-phase primal simplex over exact rationals with Bland's rule.
//!
//! Problems are solved in the standard form
//!   min c.x  subject to  A x = b,  x >= 0
//! with dense tableaus of `BigRational`s. Bland's smallest-index rule is
//! used for both the entering and the leaving variable, so the method
//! terminates on degenerate moment polytopes and is fully deterministic.

// Dense tableau arithmetic reads clearest with explicit indices.
#![allow(clippy::needless_range_loop)]

use num_traits::{Signed, Zero};

use crate::rat::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub status: SimplexStatus,
    /// Optimal primal point (length = number of variables), zero-filled.
    pub x: Vec<Q>,
    /// min-form objective value at x.
    pub value: Q,
    /// Dual multipliers for the ORIGINAL rows; zero for rows found
    /// redundant in phase 1. At optimality y.A_j <= c_j for every column
    /// and y.b = value (min form; callers maximizing via negation must
    /// negate y as well).
    pub y: Vec<Q>,
}

struct Tableau {
    a: Vec<Vec<Q>>,
    b: Vec<Q>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.a[r][c].clone();
        for v in self.a[r].iter_mut() {
            *v /= &piv;
        }
        self.b[r] /= &piv;
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            for j in 0..self.ncols {
                let t = &f * &self.a[r][j];
                self.a[i][j] -= t;
            }
            let t = &f * &self.b[r];
            self.b[i] -= t;
        }
        self.basis[r] = c;
    }
}

/// Reduced costs and objective value for the current basis.
fn reduced_costs(tab: &Tableau, cost: &[Q]) -> (Vec<Q>, Q) {
    let mut red = cost.to_vec();
    let mut val = Q::zero();
    for (r, &bi) in tab.basis.iter().enumerate() {
        let cb = &cost[bi];
        if cb.is_zero() {
            continue;
        }
        for j in 0..tab.ncols {
            if !tab.a[r][j].is_zero() {
                let t = cb * &tab.a[r][j];
                red[j] -= t;
            }
        }
        val += cb * &tab.b[r];
    }
    (red, val)
}

/// Run Bland pivots until optimal or unbounded. Columns with
/// `eligible[j] == false` are never entered.
fn run(tab: &mut Tableau, red: &mut [Q], val: &mut Q, eligible: &[bool]) -> SimplexStatus {
    loop {
        let enter = (0..tab.ncols).find(|&j| eligible[j] && red[j].is_negative());
        let enter = match enter {
            Some(j) => j,
            None => return SimplexStatus::Optimal,
        };
        // Ratio test; ties broken by smallest basic variable index (Bland).
        let mut leave: Option<usize> = None;
        let mut best: Option<Q> = None;
        for r in 0..tab.a.len() {
            if !tab.a[r][enter].is_positive() {
                continue;
            }
            let ratio = &tab.b[r] / &tab.a[r][enter];
            let better = match &best {
                None => true,
                Some(cur) => {
                    ratio < *cur
                        || (ratio == *cur && tab.basis[r] < tab.basis[leave.unwrap()])
                }
            };
            if better {
                best = Some(ratio);
                leave = Some(r);
            }
        }
        let leave = match leave {
            Some(r) => r,
            None => return SimplexStatus::Unbounded,
        };
        tab.pivot(leave, enter);
        // Update the reduced-cost row against the normalized pivot row.
        let f = red[enter].clone();
        for j in 0..tab.ncols {
            if !tab.a[leave][j].is_zero() {
                let t = &f * &tab.a[leave][j];
                red[j] -= t;
            }
        }
        let t = &f * &tab.b[leave];
        *val += t;
    }
}

/// Solve min c.x s.t. A x = b, x >= 0 exactly.
///
/// `a` is row-major with every row of length `c.len()`.
pub fn solve_min(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> SimplexResult {
    let nv = c.len();
    let m = a.len();

    // Normalize right-hand sides to be nonnegative, remembering row signs
    // so dual multipliers can be reported against the original rows.
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(m);
    let mut rhs: Vec<Q> = Vec::with_capacity(m);
    let mut sign: Vec<bool> = Vec::with_capacity(m); // true = flipped
    for (row, bi) in a.iter().zip(b) {
        if bi.is_negative() {
            rows.push(row.iter().map(|v| -v).collect());
            rhs.push(-bi);
            sign.push(true);
        } else {
            rows.push(row.clone());
            rhs.push(bi.clone());
            sign.push(false);
        }
    }

    // Phase 1: artificial basis, minimize the sum of artificials.
    let ncols = nv + m;
    let mut tab = Tableau {
        a: rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut full = row.clone();
                full.extend((0..m).map(|i| {
                    if i == r {
                        Q::from_integer(1.into())
                    } else {
                        Q::zero()
                    }
                }));
                full
            })
            .collect(),
        b: rhs,
        basis: (nv..nv + m).collect(),
        ncols,
    };
    let mut cost1 = vec![Q::zero(); ncols];
    for j in nv..ncols {
        cost1[j] = Q::from_integer(1.into());
    }
    let (mut red, mut val) = reduced_costs(&tab, &cost1);
    // Only original columns may enter; artificials never re-enter.
    let eligible: Vec<bool> = (0..ncols).map(|j| j < nv).collect();
    let st = run(&mut tab, &mut red, &mut val, &eligible);
    debug_assert_eq!(st, SimplexStatus::Optimal, "phase 1 cannot be unbounded");
    if !val.is_zero() {
        return SimplexResult {
            status: SimplexStatus::Infeasible,
            x: vec![Q::zero(); nv],
            value: Q::zero(),
            y: vec![Q::zero(); m],
        };
    }

    // Drive basic artificials out; rows that cannot pivot are redundant.
    let mut keep_rows: Vec<bool> = vec![true; m];
    for r in 0..tab.a.len() {
        if tab.basis[r] < nv {
            continue;
        }
        match (0..nv).find(|&j| !tab.a[r][j].is_zero()) {
            Some(j) => tab.pivot(r, j),
            None => keep_rows[r] = false,
        }
    }
    // Rebuild the tableau without artificial columns and redundant rows.
    let mut kept_index: Vec<usize> = Vec::new();
    let mut a2: Vec<Vec<Q>> = Vec::new();
    let mut b2: Vec<Q> = Vec::new();
    let mut basis2: Vec<usize> = Vec::new();
    for r in 0..tab.a.len() {
        if !keep_rows[r] {
            continue;
        }
        kept_index.push(r);
        a2.push(tab.a[r][..nv].to_vec());
        b2.push(tab.b[r].clone());
        basis2.push(tab.basis[r]);
    }
    let mut tab = Tableau {
        a: a2,
        b: b2,
        basis: basis2,
        ncols: nv,
    };

    // Phase 2.
    let (mut red, mut val) = reduced_costs(&tab, c);
    let eligible = vec![true; nv];
    let st = run(&mut tab, &mut red, &mut val, &eligible);
    if st == SimplexStatus::Unbounded {
        return SimplexResult {
            status: SimplexStatus::Unbounded,
            x: vec![Q::zero(); nv],
            value: Q::zero(),
            y: vec![Q::zero(); m],
        };
    }

    let mut x = vec![Q::zero(); nv];
    for (r, &bi) in tab.basis.iter().enumerate() {
        x[bi] = tab.b[r].clone();
    }

    // Dual multipliers: solve B^T y = c_B on the kept rows of the original
    // (sign-restored) system, zero on redundant rows.
    let mk = tab.basis.len();
    let mut bt: Vec<Vec<Q>> = vec![vec![Q::zero(); mk + 1]; mk];
    for (col, &bi) in tab.basis.iter().enumerate() {
        for (row, &orig_r) in kept_index.iter().enumerate() {
            // B[row][col] = sign-restored original coefficient
            let v = if sign[orig_r] { -&rows[orig_r][bi] } else { rows[orig_r][bi].clone() };
            bt[col][row] = v;
        }
        bt[col][mk] = c[bi].clone();
    }
    let yk = gauss_solve(&mut bt);
    let mut y = vec![Q::zero(); m];
    for (row, &orig_r) in kept_index.iter().enumerate() {
        y[orig_r] = yk[row].clone();
    }

    SimplexResult {
        status: SimplexStatus::Optimal,
        x,
        value: val,
        y,
    }
}

/// Exact Gaussian elimination on an augmented square system.
fn gauss_solve(aug: &mut [Vec<Q>]) -> Vec<Q> {
    let n = aug.len();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .expect("basis matrix is invertible");
        aug.swap(col, piv);
        let p = aug[col][col].clone();
        for v in aug[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let f = aug[r][col].clone();
            for j in 0..=n {
                let t = &f * &aug[col][j];
                aug[r][j] -= t;
            }
        }
    }
    (0..n).map(|r| aug[r][n].clone()).collect()
}
