//! Fixture builders shared by the benchmarks.

use hwlab_core::lp::{construct_k_uniform, SupportFilter};
use hwlab_core::pmf::WeightPMF;
use hwlab_core::rat::qr;
use hwlab_core::Q;

/// A k-uniform vertex on the full grid, the usual LP warm-up fixture.
pub fn vertex_fixture(n: i64, k: i64) -> WeightPMF {
    construct_k_uniform(n, k, |w| SupportFilter::All.admits(w), None)
        .expect("well-formed")
        .primal
        .expect("feasible")
}

/// The rho used across the smoothing benchmarks.
pub fn bench_rho() -> Q {
    qr(1, 2)
}
