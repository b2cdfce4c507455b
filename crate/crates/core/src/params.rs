//! Scalar parameter bundle for experiments and analytic formulas.

use crate::rat::Q;

/// Optional scalar parameters shared by scenario runs, analytic bounds and
/// the CLI. Universal constants with unspecified values are never
/// hard-coded; they enter through `c` (and `beta`) as caller-supplied
/// knobs.
#[derive(Debug, Clone, Default)]
pub struct ParamSet {
    /// Dimension.
    pub n: Option<i64>,
    /// Uniformity / moment order.
    pub k: Option<i64>,
    /// Threshold.
    pub t: Option<i64>,
    /// Interval ends.
    pub a: Option<i64>,
    pub b: Option<i64>,
    /// Noise retention parameter in [0, 1].
    pub rho: Option<Q>,
    /// Residue modulus.
    pub m: Option<i64>,
    /// Bias bound.
    pub eps: Option<Q>,
    /// Extremal tail value.
    pub delta: Option<Q>,
    /// Normalized threshold.
    pub theta: Option<f64>,
    /// Gaussian variance.
    pub sigma2: Option<f64>,
    /// Exponent coefficient.
    pub alpha: Option<f64>,
    /// Vandermonde base.
    pub q: Option<Q>,
    /// Interval half-width coefficient.
    pub d_half: Option<f64>,
    /// Scale parameter of the integer-point inequality.
    pub big_l: Option<Q>,
    /// Caller-supplied universal constant.
    pub c: Option<f64>,
    /// Caller-supplied threshold coefficient.
    pub beta: Option<f64>,
    /// Higher uniformity order for the two-scale scenario.
    pub kprime: Option<i64>,
    /// Optimizer seed.
    pub seed: Option<u64>,
    /// Optimizer budget (function evaluations).
    pub budget: Option<u64>,
}

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn require_n(&self) -> crate::Result<i64> {
        self.n
            .ok_or_else(|| crate::Error::InvalidParameter("missing n".into()))
    }

    pub fn require_k(&self) -> crate::Result<i64> {
        self.k
            .ok_or_else(|| crate::Error::InvalidParameter("missing k".into()))
    }

    pub fn require_rho(&self) -> crate::Result<Q> {
        self.rho
            .clone()
            .ok_or_else(|| crate::Error::InvalidParameter("missing rho".into()))
    }
}
