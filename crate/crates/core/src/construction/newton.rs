use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use super::{max_norm, residual, residual_generic, ConstructionParams, Dual4, TargetDeltas};
use crate::error::{Error, Result};

pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_ITER: usize = 50;

/// Relative pivot size below which the Jacobian is treated as singular.
const PIVOT_TOL: f64 = 1e-14;

/// Record of one Newton run.
///
/// `iterates[0]` is the starting point; `residual_norms[i]` is the max-norm
/// of the residual at `iterates[i]`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveTrace {
    pub iterates: Vec<[f64; 4]>,
    pub residual_norms: Vec<f64>,
    /// 2-norm condition number of the Jacobian at the last iterate.
    pub condition_estimate: Option<f64>,
    /// ∞-norm of the inverse Jacobian at the last iterate; together with the
    /// last residual these are the inputs of a Kantorovich-type bound.
    pub jacobian_inverse_norm: Option<f64>,
    pub converged: bool,
}

impl SolveTrace {
    /// Newton steps taken.
    pub fn iterations(&self) -> usize {
        self.iterates.len().saturating_sub(1)
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.residual_norms.last().copied()
    }
}

/// Exact Jacobian of the residual with respect to `(x, s, h, r)` via dual
/// numbers; row `i` is the gradient of residual `i`.
pub fn jacobian(q: [f64; 4], deltas: &TargetDeltas) -> Result<[[f64; 4]; 4]> {
    let vars = [
        Dual4::variable(q[0], 0),
        Dual4::variable(q[1], 1),
        Dual4::variable(q[2], 2),
        Dual4::variable(q[3], 3),
    ];
    let r = residual_generic(vars, deltas)?;
    Ok(r.map(|d| d.du))
}

fn to_matrix(j: &[[f64; 4]; 4]) -> Matrix4<f64> {
    Matrix4::from_fn(|r, c| j[r][c])
}

fn conditioning(j: &Matrix4<f64>) -> (Option<f64>, Option<f64>) {
    let sv = j.singular_values();
    let (hi, lo) = (sv.max(), sv.min());
    let cond = if lo > 0.0 { Some(hi / lo) } else { None };
    let inv_norm = j.try_inverse().map(|inv| {
        (0..4)
            .map(|r| (0..4).map(|c| inv[(r, c)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    });
    (cond, inv_norm)
}

/// Plain full-step Newton iteration on the four residual equations.
///
/// Stops once the residual max-norm is at most `tol`. Returns the
/// parameters with `t = δ1/2` and the full trace. A non-finite iterate or an
/// exhausted budget gives [`Error::NoConvergence`] carrying the trace; a
/// root with a non-positive parameter gives [`Error::InfeasibleRoot`].
pub fn newton_solve(
    deltas: &TargetDeltas,
    init: [f64; 4],
    tol: f64,
    max_iter: usize,
) -> Result<(ConstructionParams, SolveTrace)> {
    deltas.validate()?;
    let mut trace = SolveTrace::default();
    let mut q = init;
    for iteration in 0..=max_iter {
        let res = residual(q, deltas)?;
        let norm = max_norm(&res);
        trace.iterates.push(q);
        trace.residual_norms.push(norm);
        if !norm.is_finite() {
            return Err(Error::NoConvergence {
                trace: Box::new(trace),
            });
        }
        let j = to_matrix(&jacobian(q, deltas)?);
        if norm <= tol {
            let (cond, inv) = conditioning(&j);
            trace.condition_estimate = cond;
            trace.jacobian_inverse_norm = inv;
            trace.converged = true;
            return match ConstructionParams::from_unknowns(deltas.delta1 / 2.0, q) {
                Ok(params) => Ok((params, trace)),
                Err(e) => Err(Error::InfeasibleRoot {
                    reason: e.to_string(),
                    trace: Box::new(trace),
                }),
            };
        }
        if iteration == max_iter {
            break;
        }
        let lu = j.lu();
        let u = lu.u();
        let scale = j.amax();
        let pivot = (0..4)
            .map(|i| u[(i, i)].abs())
            .fold(f64::INFINITY, f64::min);
        // also catches a NaN pivot
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(pivot > PIVOT_TOL * scale) {
            return Err(Error::SingularJacobian { iteration, pivot });
        }
        let rhs = -Vector4::from(res);
        let step = lu
            .solve(&rhs)
            .ok_or(Error::SingularJacobian { iteration, pivot })?;
        for k in 0..4 {
            q[k] += step[k];
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::NoConvergence {
                trace: Box::new(trace),
            });
        }
    }
    let (cond, inv) = jacobian(q, deltas)
        .map(|j| conditioning(&to_matrix(&j)))
        .unwrap_or((None, None));
    trace.condition_estimate = cond;
    trace.jacobian_inverse_norm = inv;
    Err(Error::NoConvergence {
        trace: Box::new(trace),
    })
}
