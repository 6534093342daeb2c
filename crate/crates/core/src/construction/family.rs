//! Solving, hulling and verifying members of the δ-family, individually or
//! on a grid.

use serde::{Deserialize, Serialize};

use super::{
    newton_solve, vertices_from_params, ConstructionParams, SolveTrace, TargetDeltas,
    DEFAULT_MAX_ITER, DEFAULT_RESIDUAL_TOL, REFERENCE_INITIAL_GUESS,
};
use crate::antipodal::minimum_width;
use crate::error::{Error, Result};
use crate::hull::convex_hull;
use crate::polytope::{affine_distance, Polytope, DEFAULT_TOLERANCE};
use crate::reduced::{is_reduced, ReducednessReport};
use crate::vec3::Vec3;

/// A solved and verified family member.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub deltas: TargetDeltas,
    pub params: ConstructionParams,
    pub trace: SolveTrace,
    pub polytope: Polytope,
    pub reducedness: ReducednessReport,
    /// ρ(v1 v9 v10, v11 v12).
    pub facet_edge_distance: f64,
    /// ρ(v5 v9, v8 v12).
    pub edge_edge_distance: f64,
    /// The five defining distances, in the order
    /// ρ(v1, v3v11v12v4), ρ(v5, v2v8v12), ρ(v1v2, v3v4), ρ(v1v5, v4v8), ρ(v1v9, v4v8).
    pub defining_distances: [f64; 5],
}

/// ρ between the affine hulls of two vertex lists given 1-based labels.
fn labelled_distance(v: &[Vec3; 12], a: &[usize], b: &[usize]) -> f64 {
    let pa: Vec<Vec3> = a.iter().map(|&i| v[i - 1]).collect();
    let pb: Vec<Vec3> = b.iter().map(|&i| v[i - 1]).collect();
    affine_distance(&pa, &pb, 1e-12)
}

/// The five defining distances computed directly from the geometry.
pub fn defining_distances(p: &ConstructionParams) -> [f64; 5] {
    let v = vertices_from_params(p);
    [
        labelled_distance(&v, &[1], &[3, 11, 12, 4]),
        labelled_distance(&v, &[5], &[2, 8, 12]),
        labelled_distance(&v, &[1, 2], &[3, 4]),
        labelled_distance(&v, &[1, 5], &[4, 8]),
        labelled_distance(&v, &[1, 9], &[4, 8]),
    ]
}

/// Solves for `deltas` from `warm_start` (default: the reference initial
/// guess), hulls the twelve points and checks reducedness.
pub fn build_family_member(
    deltas: &TargetDeltas,
    warm_start: Option<[f64; 4]>,
) -> Result<FamilyMember> {
    let init = warm_start.unwrap_or(REFERENCE_INITIAL_GUESS);
    let (params, trace) = newton_solve(deltas, init, DEFAULT_RESIDUAL_TOL, DEFAULT_MAX_ITER)?;
    let points = vertices_from_params(&params);
    let polytope = convex_hull(&points, DEFAULT_TOLERANCE)?;
    if polytope.num_vertices() != 12 {
        return Err(Error::VerificationFailed(format!(
            "only {} of the 12 points are vertices",
            polytope.num_vertices()
        )));
    }
    let reducedness = is_reduced(&polytope);
    if !reducedness.reduced {
        return Err(Error::VerificationFailed(format!(
            "{} of 12 vertices marked at width {}",
            reducedness.marked_count(),
            reducedness.omega
        )));
    }
    Ok(FamilyMember {
        deltas: *deltas,
        params,
        trace,
        facet_edge_distance: labelled_distance(&points, &[1, 9, 10], &[11, 12]),
        edge_edge_distance: labelled_distance(&points, &[5, 9], &[8, 12]),
        defining_distances: defining_distances(&params),
        polytope,
        reducedness,
    })
}

/// `n` evenly spaced values on `[lo, hi]`; a single value is the midpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl DeltaRange {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n == 0 || !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidParams(format!("bad range {lo}:{hi}:{n}")));
        }
        Ok(DeltaRange { lo, hi, n })
    }

    pub fn single(v: f64) -> Self {
        DeltaRange { lo: v, hi: v, n: 1 }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.n == 1 {
            0.5 * (self.lo + self.hi)
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartMode {
    /// Each cell starts from the nearest already-solved cell.
    Warm,
    /// Each cell starts from the reference initial guess.
    Cold,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub start: StartMode,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            start: StartMode::Warm,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: [usize; 3],
    pub deltas: TargetDeltas,
    /// Position in the traversal.
    pub solve_order: usize,
    pub solved: bool,
    pub params: Option<ConstructionParams>,
    pub reduced: Option<bool>,
    pub omega: Option<f64>,
    pub iterations: Option<usize>,
    pub warm_start_from: Option<[usize; 3]>,
    pub error: Option<String>,
}

fn index_distance(a: [usize; 3], b: [usize; 3]) -> usize {
    (0..3).map(|k| a[k].abs_diff(b[k])).sum()
}

/// Solves every cell of a δ grid.
///
/// Cells are visited outward from the cell nearest the reference deltas
/// (by index distance, ties lexicographic); in warm mode each cell starts
/// from the closest cell solved before it. Failures become rows. Rows are
/// returned in lexicographic index order.
pub fn sweep_family(ranges: &[DeltaRange; 3], options: &SweepOptions) -> Vec<SweepRow> {
    let target = TargetDeltas::REFERENCE.as_array();
    let centre: [usize; 3] = std::array::from_fn(|k| {
        (0..ranges[k].n)
            .min_by(|&a, &b| {
                (ranges[k].value(a) - target[k])
                    .abs()
                    .total_cmp(&(ranges[k].value(b) - target[k]).abs())
            })
            .unwrap_or(0)
    });
    let mut cells = Vec::new();
    for i in 0..ranges[0].n {
        for j in 0..ranges[1].n {
            for k in 0..ranges[2].n {
                cells.push([i, j, k]);
            }
        }
    }
    cells.sort_by_key(|&c| (index_distance(c, centre), c));

    let mut solved: Vec<([usize; 3], [f64; 4])> = Vec::new();
    let mut rows = Vec::with_capacity(cells.len());
    for (order, cell) in cells.iter().copied().enumerate() {
        let deltas = TargetDeltas {
            delta1: ranges[0].value(cell[0]),
            delta2: ranges[1].value(cell[1]),
            delta3: ranges[2].value(cell[2]),
        };
        let source = match options.start {
            StartMode::Cold => None,
            StartMode::Warm => solved
                .iter()
                .min_by_key(|(c, _)| index_distance(*c, cell))
                .copied(),
        };
        let mut row = SweepRow {
            index: cell,
            deltas,
            solve_order: order,
            solved: false,
            params: None,
            reduced: None,
            omega: None,
            iterations: None,
            warm_start_from: source.map(|(c, _)| c),
            error: None,
        };
        match newton_solve(
            &deltas,
            source.map_or(REFERENCE_INITIAL_GUESS, |(_, q)| q),
            DEFAULT_RESIDUAL_TOL,
            DEFAULT_MAX_ITER,
        ) {
            Ok((params, trace)) => {
                row.solved = true;
                row.params = Some(params);
                row.iterations = Some(trace.iterations());
                solved.push((cell, params.unknowns()));
                match convex_hull(&vertices_from_params(&params), DEFAULT_TOLERANCE) {
                    Ok(poly) => {
                        let rep = is_reduced(&poly);
                        row.reduced = Some(rep.reduced && poly.num_vertices() == 12);
                        row.omega = Some(minimum_width(&poly).omega);
                    }
                    Err(e) => row.error = Some(e.to_string()),
                }
            }
            Err(e) => {
                if let Error::NoConvergence { trace } | Error::InfeasibleRoot { trace, .. } = &e {
                    row.iterations = Some(trace.iterations());
                }
                row.error = Some(e.to_string());
            }
        }
        rows.push(row);
    }
    rows.sort_by_key(|r| r.index);
    rows
}
