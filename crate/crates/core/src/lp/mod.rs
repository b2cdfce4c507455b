//! Exact-rational linear programming over weight masses.
//!
//! The decisive modelling choice: variables are Hamming weights, never
//! strings. The extremal tail over all k-uniform distributions is achieved
//! by an exchangeable one (symmetrizing preserves k-uniformity and every
//! tail), so an LP with at most n+1 variables and k+1 equality rows is
//! lossless — and n = 900 stays tractable.
//!
//! Every problem here has the shape
//!
//!   normalization row   sum_w x_w           = 1
//!   moment rows         sum_w w^j x_w       = E[B^j]   (j = 1..k)
//!
//! over an admissible weight set, with an objective that is linear in the
//! masses. Solutions are vertices (support <= number of rows); for
//! `max_tail` the simplex multipliers of the rows form the upper
//! sandwiching polynomial q with E[q(B)] = optimum and q(w) >= 1[w >= t]
//! on every admissible weight.

mod simplex;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::Error;
use crate::pmf::{binomial_moments, weight_grid, WeightPMF};
use crate::poly::UnivariatePoly;
use crate::rat::{format_q, int_pow, Q};
use crate::Result;

use simplex::SimplexStatus;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// An equality-constrained LP over an ordered set of admissible weights.
#[derive(Debug, Clone)]
pub struct LPProblem {
    /// Ambient dimension the weights live in.
    pub n: i64,
    /// Variable labels: distinct admissible weights, increasing.
    pub weights: Vec<i64>,
    /// Equality rows (coefficients, right-hand side).
    pub constraints: Vec<(Vec<Q>, Q)>,
    /// Objective coefficients, one per weight.
    pub objective: Vec<Q>,
    pub sense: Sense,
}

impl LPProblem {
    fn validate(&self) -> Result<()> {
        if self.weights.is_empty() {
            return Err(Error::InvalidProgram("no variables".into()));
        }
        let mut sorted = self.weights.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.weights.len() {
            return Err(Error::InvalidProgram("duplicate weights".into()));
        }
        if self.objective.len() != self.weights.len() {
            return Err(Error::InvalidProgram("objective length mismatch".into()));
        }
        for (row, _) in &self.constraints {
            if row.len() != self.weights.len() {
                return Err(Error::InvalidProgram("row length mismatch".into()));
            }
        }
        Ok(())
    }
}

/// Solver output: exact optimum at a vertex plus certificates.
#[derive(Debug, Clone)]
pub struct LPSolution {
    pub status: LpStatus,
    /// Exact optimal objective value (None unless optimal).
    pub value: Option<Q>,
    /// The vertex as a weight PMF when the solution is a distribution.
    pub primal: Option<WeightPMF>,
    /// Raw vertex coordinates aligned with the problem's weights.
    pub primal_raw: Vec<Q>,
    /// Dual sandwiching polynomial (power basis) when applicable.
    pub dual: Option<UnivariatePoly>,
    /// Weights the problem ranged over (the "admissible" set).
    pub weights: Vec<i64>,
}

impl LPSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Serialize with value as "num/den", primal as a PMF record and dual
    /// as {"coeffs": [..]}.
    pub fn to_json(&self) -> Value {
        let status = match self.status {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        };
        let mut obj = json!({ "status": status });
        if let Some(v) = &self.value {
            obj["value"] = json!(format_q(v));
        }
        if let Some(p) = &self.primal {
            obj["primal"] = p.to_json();
        }
        if let Some(d) = &self.dual {
            obj["dual"] = json!({
                "coeffs": d.coeffs().iter().map(format_q).collect::<Vec<_>>()
            });
        }
        obj
    }
}

/// Objective kinds for [`extremal_tail`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailObjective {
    /// max Pr[W >= t]; returns the dual sandwiching certificate.
    MaxTail,
    /// max Pr[W = t].
    MaxPoint,
    /// max |Pr[W >= t] - Pr[B >= t]| over k-uniform PMFs.
    SignedGap,
    /// max Pr[|W| >= t].
    TwoSided,
}

/// Support filters over weights, composable via [`SupportFilter::admits`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportFilter {
    All,
    /// w congruent to `residue` mod `modulus`.
    ModClass { modulus: i64, residue: i64 },
    /// |w| <= half_width.
    Slab { half_width: i64 },
}

impl SupportFilter {
    pub fn admits(&self, w: i64) -> bool {
        match *self {
            SupportFilter::All => true,
            SupportFilter::ModClass { modulus, residue } => {
                w.rem_euclid(modulus) == residue.rem_euclid(modulus)
            }
            SupportFilter::Slab { half_width } => w.abs() <= half_width,
        }
    }
}

/// Generic entry point: solve an explicit [`LPProblem`] exactly.
///
/// Statuses are data, not errors; `Err` only signals a malformed problem.
pub fn solve_exact_lp(prob: &LPProblem) -> Result<LPSolution> {
    prob.validate()?;
    let (a, b): (Vec<Vec<Q>>, Vec<Q>) = prob.constraints.iter().cloned().unzip();
    let minimize: Vec<Q> = match prob.sense {
        Sense::Minimize => prob.objective.clone(),
        Sense::Maximize => prob.objective.iter().map(|c| -c).collect(),
    };
    let res = simplex::solve_min(&a, &b, &minimize);
    let status = match res.status {
        SimplexStatus::Optimal => LpStatus::Optimal,
        SimplexStatus::Infeasible => LpStatus::Infeasible,
        SimplexStatus::Unbounded => LpStatus::Unbounded,
    };
    if status != LpStatus::Optimal {
        return Ok(LPSolution {
            status,
            value: None,
            primal: None,
            primal_raw: vec![Q::zero(); prob.weights.len()],
            dual: None,
            weights: prob.weights.clone(),
        });
    }
    let value = match prob.sense {
        Sense::Minimize => res.value.clone(),
        Sense::Maximize => -res.value.clone(),
    };
    let primal = pmf_from_vertex(prob, &res.x);
    Ok(LPSolution {
        status,
        value: Some(value),
        primal,
        primal_raw: res.x,
        dual: None,
        weights: prob.weights.clone(),
    })
}

fn pmf_from_vertex(prob: &LPProblem, x: &[Q]) -> Option<WeightPMF> {
    let total: Q = x.iter().sum();
    if !total.is_one() || x.iter().any(|v| v.is_negative()) {
        return None;
    }
    let masses = prob
        .weights
        .iter()
        .zip(x)
        .filter(|(_, v)| !v.is_zero())
        .map(|(w, v)| (*w, v.clone()))
        .collect();
    WeightPMF::from_masses(prob.n, masses).ok()
}

/// Equality rows of a problem: (coefficients, right-hand side) pairs.
type Rows = Vec<(Vec<Q>, Q)>;

/// Moment-polytope problem over a filtered weight set.
fn moment_problem<F>(n: i64, k: i64, filter: F) -> Result<(Vec<i64>, Rows)>
where
    F: Fn(i64) -> bool,
{
    if n < 1 {
        return Err(Error::DegenerateDimension(n));
    }
    if k < 0 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} outside 0..=n")));
    }
    let weights: Vec<i64> = weight_grid(n).into_iter().filter(|&w| filter(w)).collect();
    if weights.is_empty() {
        return Err(Error::InvalidProgram(
            "support filter admits no admissible weight".into(),
        ));
    }
    let mut rows = Vec::with_capacity((k + 1) as usize);
    rows.push((vec![Q::one(); weights.len()], Q::one()));
    let rhs = binomial_moments(n, k);
    for j in 1..=k {
        let coeffs = weights
            .iter()
            .map(|&w| Q::from_integer(int_pow(w, j as u32)))
            .collect();
        rows.push((coeffs, rhs[(j - 1) as usize].clone()));
    }
    Ok((weights, rows))
}

/// Deterministic default objective: minimize E[|W|].
///
/// Among the vertices of the moment polytope this one keeps mass central,
/// paying for high moments with small masses on extreme weights; it is the
/// fixed vertex-selection rule for feasibility constructions and
/// sparsification.
fn central_mass_objective(weights: &[i64]) -> Vec<Q> {
    weights.iter().map(|&w| Q::from_integer(w.abs().into())).collect()
}

/// Build a k-uniform weight PMF supported inside a filter, if one exists.
///
/// Infeasibility is reported as a status. An optional objective (per-weight
/// coefficient, maximized) overrides the default central-mass rule.
pub fn construct_k_uniform<F>(
    n: i64,
    k: i64,
    filter: F,
    objective: Option<&dyn Fn(i64) -> Q>,
) -> Result<LPSolution>
where
    F: Fn(i64) -> bool,
{
    let (weights, constraints) = moment_problem(n, k, filter)?;
    let (objective, sense) = match objective {
        Some(f) => (weights.iter().map(|&w| f(w)).collect(), Sense::Maximize),
        None => (central_mass_objective(&weights), Sense::Minimize),
    };
    let prob = LPProblem {
        n,
        weights,
        constraints,
        objective,
        sense,
    };
    solve_exact_lp(&prob)
}

/// Exact extremal tail values over k-uniform weight PMFs.
///
/// `filter` restricts the admissible support ([`SupportFilter::All`] for
/// the unrestricted problem). For [`TailObjective::MaxTail`] the dual
/// certificate is extracted from the simplex multipliers and attached.
pub fn extremal_tail(
    n: i64,
    k: i64,
    t: i64,
    kind: TailObjective,
    filter: SupportFilter,
) -> Result<LPSolution> {
    let (weights, constraints) = moment_problem(n, k, |w| filter.admits(w))?;
    let indicator = |pred: &dyn Fn(i64) -> bool| -> Vec<Q> {
        weights
            .iter()
            .map(|&w| if pred(w) { Q::one() } else { Q::zero() })
            .collect()
    };
    match kind {
        TailObjective::MaxTail => {
            let prob = LPProblem {
                n,
                weights: weights.clone(),
                constraints: constraints.clone(),
                objective: indicator(&|w| w >= t),
                sense: Sense::Maximize,
            };
            let mut sol = solve_with_dual(&prob, k)?;
            sol.weights = weights;
            Ok(sol)
        }
        TailObjective::MaxPoint => {
            let objective = indicator(&|w| w == t);
            let prob = LPProblem {
                n,
                weights,
                constraints,
                objective,
                sense: Sense::Maximize,
            };
            solve_exact_lp(&prob)
        }
        TailObjective::TwoSided => {
            let objective = indicator(&|w| w.abs() >= t);
            let prob = LPProblem {
                n,
                weights,
                constraints,
                objective,
                sense: Sense::Maximize,
            };
            solve_exact_lp(&prob)
        }
        TailObjective::SignedGap => {
            let btail = WeightPMF::binomial(n)?.tail_mass(t);
            let obj = indicator(&|w| w >= t);
            let hi = solve_exact_lp(&LPProblem {
                n,
                weights: weights.clone(),
                constraints: constraints.clone(),
                objective: obj.clone(),
                sense: Sense::Maximize,
            })?;
            let lo = solve_exact_lp(&LPProblem {
                n,
                weights,
                constraints,
                objective: obj,
                sense: Sense::Minimize,
            })?;
            if hi.status != LpStatus::Optimal {
                return Ok(hi);
            }
            let up_gap = hi.value.clone().unwrap() - &btail;
            let down_gap = &btail - lo.value.clone().unwrap();
            if up_gap >= down_gap {
                Ok(LPSolution {
                    value: Some(up_gap),
                    dual: None,
                    ..hi
                })
            } else {
                Ok(LPSolution {
                    value: Some(down_gap),
                    dual: None,
                    ..lo
                })
            }
        }
    }
}

/// Solve and attach the dual polynomial from the row multipliers.
fn solve_with_dual(prob: &LPProblem, k: i64) -> Result<LPSolution> {
    prob.validate()?;
    let (a, b): (Vec<Vec<Q>>, Vec<Q>) = prob.constraints.iter().cloned().unzip();
    let minimize: Vec<Q> = prob.objective.iter().map(|c| -c).collect();
    let res = simplex::solve_min(&a, &b, &minimize);
    match res.status {
        SimplexStatus::Optimal => {}
        SimplexStatus::Infeasible => {
            return Ok(LPSolution {
                status: LpStatus::Infeasible,
                value: None,
                primal: None,
                primal_raw: vec![Q::zero(); prob.weights.len()],
                dual: None,
                weights: prob.weights.clone(),
            })
        }
        SimplexStatus::Unbounded => {
            return Ok(LPSolution {
                status: LpStatus::Unbounded,
                value: None,
                primal: None,
                primal_raw: vec![Q::zero(); prob.weights.len()],
                dual: None,
                weights: prob.weights.clone(),
            })
        }
    }
    // Max-form multipliers are the negated min-form ones. Rows are ordered
    // [normalization, moment 1, .., moment k], so the multipliers are the
    // power-basis coefficients of the sandwiching polynomial.
    let coeffs: Vec<Q> = res.y.iter().map(|v| -v).collect();
    debug_assert_eq!(coeffs.len(), (k + 1) as usize);
    let dual = UnivariatePoly::new(coeffs);
    let value = -res.value;
    let primal = pmf_from_vertex(prob, &res.x);
    Ok(LPSolution {
        status: LpStatus::Optimal,
        value: Some(value),
        primal,
        primal_raw: res.x,
        dual: Some(dual),
        weights: prob.weights.clone(),
    })
}

/// Check the sandwiching certificate of a `max_tail` solution exactly:
/// E[q(B)] equals the optimum and q(w) >= 1[w >= t] on every admissible
/// weight. Returns an error message on the first violation.
pub fn verify_tail_certificate(
    n: i64,
    t: i64,
    sol: &LPSolution,
) -> std::result::Result<(), String> {
    let dual = sol.dual.as_ref().ok_or("missing dual certificate")?;
    let value = sol.value.as_ref().ok_or("missing optimal value")?;
    let b = WeightPMF::binomial(n).map_err(|e| e.to_string())?;
    let mut expect = Q::zero();
    for (w, p) in b.iter() {
        expect += p * dual.eval_int(w);
    }
    if expect != *value {
        return Err(format!(
            "duality gap: E[q(B)] = {} but optimum = {}",
            format_q(&expect),
            format_q(value)
        ));
    }
    for &w in &sol.weights {
        let qw = dual.eval_int(w);
        let needed = if w >= t { Q::one() } else { Q::zero() };
        if qw < needed {
            return Err(format!("q({w}) = {} below indicator", format_q(&qw)));
        }
    }
    Ok(())
}

/// Moment-preserving sparsification to at most k+1 support points.
///
/// The input must be k-uniform; the output is the central-mass vertex of
/// the LP with k moment rows plus normalization over the input's support.
pub fn sparsify(p: &WeightPMF, k: i64) -> Result<WeightPMF> {
    if !p.is_k_uniform(k) {
        return Err(Error::NotKUniform(k));
    }
    let support: std::collections::BTreeSet<i64> = p.support().collect();
    let (weights, constraints) = moment_problem(p.n(), k, |w| support.contains(&w))?;
    let prob = LPProblem {
        n: p.n(),
        objective: central_mass_objective(&weights),
        sense: Sense::Minimize,
        weights,
        constraints,
    };
    let sol = solve_exact_lp(&prob)?;
    debug_assert!(sol.is_optimal(), "input distribution is itself feasible");
    let out = sol
        .primal
        .ok_or_else(|| Error::InvalidProgram("vertex is not a distribution".into()))?;
    // Vertex property: support fits in the number of equality rows.
    debug_assert!(out.support_len() as i64 <= k + 1);
    Ok(out)
}
