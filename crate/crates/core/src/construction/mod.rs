//! The twelve-vertex reduced polytope family.
//!
//! Vertices are parametrized by `(t, x, s, h, r)`:
//!
//! ```text
//! v1 = ( r, 0,-t)  v2 = (-r, 0,-t)  v3 = ( 0, r, t)  v4 = ( 0,-r, t)
//! v5 = ( h, x, s)  v6 = (-h, x, s)  v7 = ( h,-x, s)  v8 = (-h,-x, s)
//! v9 = ( x, h,-s)  v10= ( x,-h,-s)  v11= (-x, h,-s)  v12= (-x,-h,-s)
//! ```
//!
//! The set is invariant under `(x,y,z) ↦ (−x,y,z)`, `(x,−y,z)` and
//! `(y,x,−z)`, so five distance conditions pin the whole shape:
//!
//! * `ρ(v1, v3 v11 v12 v4) = 1` and `ρ(v5, v2 v8 v12) = 1`,
//! * `ρ(v1 v2, v3 v4) = δ1`, `ρ(v1 v5, v4 v8) = δ2`, `ρ(v1 v9, v4 v8) = δ3`.
//!
//! The `δ1` condition is just `t = δ1/2`; the other four become polynomial
//! equations in `(x, s, h, r)` solved by Newton's method.

mod dual;
mod family;
mod newton;

pub use dual::{Dual4, Scalar};
pub use family::{
    build_family_member, defining_distances, sweep_family, DeltaRange, FamilyMember, StartMode,
    SweepOptions, SweepRow,
};
pub use newton::{jacobian, newton_solve, SolveTrace, DEFAULT_MAX_ITER, DEFAULT_RESIDUAL_TOL};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Target distances `(δ1, δ2, δ3)`; all at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetDeltas {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
}

impl TargetDeltas {
    pub const REFERENCE: TargetDeltas = TargetDeltas {
        delta1: 1.1,
        delta2: 1.003,
        delta3: 1.004,
    };

    pub fn new(delta1: f64, delta2: f64, delta3: f64) -> Result<Self> {
        let d = TargetDeltas {
            delta1,
            delta2,
            delta3,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("delta3", self.delta3),
        ] {
            if !v.is_finite() || v < 1.0 {
                return Err(Error::InvalidParams(format!("{name} = {v} must be >= 1")));
            }
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.delta1, self.delta2, self.delta3]
    }
}

/// Newton starting point `(x, s, h, r)` used for the reference solution.
pub const REFERENCE_INITIAL_GUESS: [f64; 4] = [0.62, 0.13, 0.09, 0.35];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub t: f64,
    pub x: f64,
    pub s: f64,
    pub h: f64,
    pub r: f64,
}

impl ConstructionParams {
    pub fn new(t: f64, x: f64, s: f64, h: f64, r: f64) -> Result<Self> {
        let p = ConstructionParams { t, x, s, h, r };
        p.validate()?;
        Ok(p)
    }

    pub fn from_unknowns(t: f64, q: [f64; 4]) -> Result<Self> {
        Self::new(t, q[0], q[1], q[2], q[3])
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("t", self.t),
            ("x", self.x),
            ("s", self.s),
            ("h", self.h),
            ("r", self.r),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParams(format!(
                    "{name} = {v} must be positive"
                )));
            }
        }
        if (self.h + self.r - self.x).abs() <= PREFACTOR_TOL {
            return Err(Error::InvalidParams("h + r - x vanishes".into()));
        }
        Ok(())
    }

    /// The solver unknowns `(x, s, h, r)`.
    pub fn unknowns(&self) -> [f64; 4] {
        [self.x, self.s, self.h, self.r]
    }
}

/// The twelve vertices `v1 … v12` (zero-based in the returned array).
pub fn vertices_from_params(p: &ConstructionParams) -> [Vec3; 12] {
    let v = vertices_generic([p.x, p.s, p.h, p.r], p.t);
    v.map(|c| Vec3::new(c[0], c[1], c[2]))
}

type V3<T> = [T; 3];

fn sub<T: Scalar>(a: V3<T>, b: V3<T>) -> V3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot<T: Scalar>(a: V3<T>, b: V3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross<T: Scalar>(a: V3<T>, b: V3<T>) -> V3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn vertices_generic<T: Scalar>(q: [T; 4], t: T) -> [V3<T>; 12] {
    let [x, s, h, r] = q;
    let z = T::constant(0.0);
    [
        [r, z, -t],
        [-r, z, -t],
        [z, r, t],
        [z, -r, t],
        [h, x, s],
        [-h, x, s],
        [h, -x, s],
        [-h, -x, s],
        [x, h, -s],
        [x, -h, -s],
        [-x, h, -s],
        [-x, -h, -s],
    ]
}

/// The five normals `n1 … n5` (zero-based in the returned array).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Normals {
    pub n: [Vec3; 5],
}

fn normals_generic<T: Scalar>(v: &[V3<T>; 12]) -> [V3<T>; 5] {
    let vi = |i: usize| v[i - 1];
    [
        cross(sub(vi(11), vi(3)), sub(vi(12), vi(3))),
        cross(sub(vi(8), vi(2)), sub(vi(12), vi(2))),
        cross(sub(vi(1), vi(2)), sub(vi(3), vi(4))),
        cross(sub(vi(1), vi(5)), sub(vi(4), vi(8))),
        cross(sub(vi(1), vi(9)), sub(vi(4), vi(8))),
    ]
}

pub fn normals(p: &ConstructionParams) -> Normals {
    let v = vertices_generic([p.x, p.s, p.h, p.r], p.t);
    Normals {
        n: normals_generic(&v).map(|c| Vec3::new(c[0], c[1], c[2])),
    }
}

/// Threshold below which `|h|` or `|h + r − x|` counts as zero.
pub const PREFACTOR_TOL: f64 = 1e-12;

/// The four distance equations before the prefactors are divided out.
fn equations_generic<T: Scalar>(q: [T; 4], deltas: &TargetDeltas) -> [T; 4] {
    let t = T::constant(deltas.delta1 / 2.0);
    let v = vertices_generic(q, t);
    let n = normals_generic(&v);
    let vi = |i: usize| v[i - 1];
    let sq = |a: T| a * a;
    let d2 = T::constant(deltas.delta2 * deltas.delta2);
    let d3 = T::constant(deltas.delta3 * deltas.delta3);
    [
        sq(dot(n[0], sub(vi(1), vi(3)))) - dot(n[0], n[0]),
        sq(dot(n[1], sub(vi(5), vi(2)))) - dot(n[1], n[1]),
        sq(dot(n[4], sub(vi(1), vi(4)))) - d3 * dot(n[4], n[4]),
        sq(dot(n[3], sub(vi(1), vi(4)))) - d2 * dot(n[3], n[3]),
    ]
}

/// Generic residual of the four polynomial equations at `q = (x, s, h, r)`
/// with `t = δ1/2`.
pub fn residual_generic<T: Scalar>(q: [T; 4], deltas: &TargetDeltas) -> Result<[T; 4]> {
    let [x, _s, h, r] = q;
    if h.value().abs() <= PREFACTOR_TOL {
        return Err(Error::PrefactorSingular(format!("h = {:e}", h.value())));
    }
    let g = h + r - x;
    if g.value().abs() <= PREFACTOR_TOL {
        return Err(Error::PrefactorSingular(format!(
            "h + r - x = {:e}",
            g.value()
        )));
    }
    let [e1, e2, e5, e4] = equations_generic(q, deltas);
    Ok([e1 / (h * h), e2, e5 / (g * g), e4])
}

/// Residual of the four equations, ordered
/// `[h⁻²·(n1 eq.), n2 eq., (h+r−x)⁻²·(n5 eq.), n4 eq.]`.
pub fn residual(q: [f64; 4], deltas: &TargetDeltas) -> Result<[f64; 4]> {
    residual_generic(q, deltas)
}

/// The same four equations without the `h⁻²` and `(h + r − x)⁻²` factors;
/// defined everywhere.
pub fn unfactored_residual(q: [f64; 4], deltas: &TargetDeltas) -> [f64; 4] {
    equations_generic(q, deltas)
}

/// Max-norm; NaN if any entry is NaN.
pub fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| {
        if x.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(x.abs())
        }
    })
}

/// Applies the three generating symmetries of the vertex set.
pub fn symmetry_maps() -> [fn(Vec3) -> Vec3; 3] {
    [
        |v| Vec3::new(-v.x, v.y, v.z),
        |v| Vec3::new(v.x, -v.y, v.z),
        |v| Vec3::new(v.y, v.x, -v.z),
    ]
}
