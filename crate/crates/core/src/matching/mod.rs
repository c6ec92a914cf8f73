//! From ferromagnetic two-spin instances to perfect matchings: the lift, the
//! Fourier holant form, the triangle graph, exact and sampled matching counts.

mod estimator;
mod exact;
mod graph;
mod lift;

use num::{BigInt, Signed, Zero};

pub use estimator::{estimate_pm, EstimatorConfig, PmEstimate};
pub use exact::{count_npm_exact, count_pm_exact, MAX_DP_VERTICES};
pub use graph::{integerize, EdgeLabel, Multigraph, WeightedEdge, WeightedMultigraph};
pub use lift::{build_triangle_graph, holant_fourier_form, is_w_tilde, lift_instance, sdp3_lift, FourierForm};

use crate::error::{Error, Result};
use crate::funcs::{fourier, PBFunction, Q};
use crate::instances::{CspInstance, Table};

/// Estimate of `Z(inst)` for an instance over the single binary `f` with nonnegative spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZEstimate {
    pub value: Q,
    /// Whether no sampling took place.
    pub exact: bool,
    /// Vertices of the integerized triangle graph (0 when short-circuited).
    pub graph_vertices: usize,
    pub levels: usize,
    pub steps: u64,
}

impl ZEstimate {
    fn exact(value: Q) -> Self {
        ZEstimate { value, exact: true, graph_vertices: 0, levels: 0, steps: 0 }
    }
}

/// Runs lift, Fourier form, triangle graph, integerization and the matchings
/// estimator, then undoes every exact scaling on the way back.
pub fn estimate_z_fpras(f: &PBFunction, inst: &CspInstance, cfg: &EstimatorConfig) -> Result<ZEstimate> {
    cfg.validate()?;
    if f.arity() != 2 {
        return Err(Error::ArityMismatch { expected: 2, got: f.arity() });
    }
    if fourier(f).table().iter().any(|c| c.is_negative()) {
        return Err(Error::pre("f has a negative Fourier coefficient; use classify_two_spin to see which case applies"));
    }
    for name in inst.used_functions() {
        match inst.function(name) {
            Some(Table::Function(g)) if g == f => {}
            _ => return Err(Error::pre(format!("constraint function `{name}` is not f"))),
        }
    }
    let lifted = lift_instance(inst)?;
    let (holant, kappa) = match holant_fourier_form(&lifted)? {
        FourierForm::Zero => return Ok(ZEstimate::exact(Q::zero())),
        FourierForm::Holant { holant, kappa } => (holant, kappa),
    };
    let g = build_triangle_graph(&holant)?;
    let (mg, d) = integerize(&g)?;
    let n = mg.n_vertices();
    let pm = estimate_pm(&mg, cfg)?;
    let half = n / 2;
    let scale = kappa / (Q::from_integer(BigInt::from(2)) * Q::from_integer(num::pow(d, half)));
    Ok(ZEstimate { value: pm.value * scale, exact: pm.exact, graph_vertices: n, levels: pm.levels, steps: pm.steps })
}
