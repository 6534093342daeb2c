//! Reducedness test for 3D polytopes.
//!
//! A polytope is reduced exactly when every vertex is the unique support
//! face opposite some facet at distance `ω(P)`. The check computes `ω` from
//! skew edge pairs and facet normals, then marks each vertex that is the
//! whole antipodal face of a facet attaining `ω`.

use serde::{Deserialize, Serialize};

use crate::antipodal::{antipodal_face_of_facet, skew_edge_directions};
use crate::error::{Error, Result};
use crate::polytope::{rho, support_value, width_direction, Face, FaceKind, Polytope};
use crate::vec3::Vec3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexStatus {
    pub vertex: usize,
    pub marked: bool,
    /// Facet at distance `ω` whose antipodal face is exactly this vertex.
    pub witness_facet: Option<Face>,
    /// ρ(v, facet) for the witness, or for the nearest-to-`ω` facet strictly
    /// antipodal to the vertex when unmarked; `None` when no facet is.
    pub distance: Option<f64>,
    /// Whether the orthogonal projection onto the witness facet is interior.
    pub projection_in_relint: Option<bool>,
    /// Unmarked, but a facet misses `ω` by at most ten tolerances.
    pub near_miss: bool,
}

/// One pass of the facet loop: the face opposite a facet and the width
/// across them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacetRecord {
    pub facet: Face,
    pub antipodal_face: Face,
    pub width: f64,
    /// Gap between the supporting plane and the closest vertex not in the
    /// antipodal face is under ten tolerances, so the antipode is fragile.
    pub near_tie: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducednessReport {
    pub omega: f64,
    pub reduced: bool,
    pub vertex_status: Vec<VertexStatus>,
    pub facets: Vec<FacetRecord>,
    /// Absolute tolerance used for every equality decision.
    pub eps: f64,
}

impl ReducednessReport {
    pub fn marked_count(&self) -> usize {
        self.vertex_status.iter().filter(|s| s.marked).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionRecord {
    pub facet: Face,
    pub projection: Vec3,
    pub in_relative_interior: bool,
    pub distance: f64,
}

/// Decides reducedness.
///
/// `ω` is the minimum over the same candidate directions as
/// [`crate::minimum_width`], so both report bitwise identical values.
/// Marking is then made against the final `ω`: a facet `F` marks vertex `v`
/// when its antipodal face is exactly `{v}` and `|ρ(F, v) − ω| ≤ eps`.
pub fn is_reduced(p: &Polytope) -> ReducednessReport {
    let eps = p.eps();
    let mut omega = skew_edge_directions(p)
        .into_iter()
        .map(|u| width_direction(p, u).expect("unit direction"))
        .fold(f64::INFINITY, f64::min);

    let mut facets = Vec::with_capacity(p.num_facets());
    for f in 0..p.num_facets() {
        let n = p.facet_normal(f);
        let antipode = antipodal_face_of_facet(p, f);
        // Both faces lie in the two supporting planes orthogonal to n, so
        // ρ(F, F̂) is the width along n.
        let width = width_direction(p, n).expect("unit direction");
        let top = support_value(p, -n);
        let gap = p
            .vertices()
            .iter()
            .enumerate()
            .filter(|(i, _)| !antipode.contains(*i))
            .map(|(_, v)| top - (-n).dot(v))
            .fold(f64::INFINITY, f64::min);
        omega = omega.min(width);
        facets.push(FacetRecord {
            facet: p.facet_face(f),
            antipodal_face: antipode,
            width,
            near_tie: gap <= 10.0 * eps,
        });
    }

    let mut vertex_status: Vec<VertexStatus> = (0..p.num_vertices())
        .map(|v| VertexStatus {
            vertex: v,
            marked: false,
            witness_facet: None,
            distance: None,
            projection_in_relint: None,
            near_miss: false,
        })
        .collect();

    for (f, rec) in facets.iter().enumerate() {
        let Some(v) = rec.antipodal_face.is_single_vertex() else {
            continue;
        };
        let status = &mut vertex_status[v];
        if status.marked {
            continue;
        }
        let d = rho(p, &Face::vertex(v), &rec.facet);
        if (rec.width - omega).abs() <= eps {
            status.marked = true;
            status.witness_facet = Some(rec.facet.clone());
            status.distance = Some(d);
            status.projection_in_relint = Some(projection_in_relint(p, f, v));
            status.near_miss = false;
        } else {
            if status
                .distance
                .is_none_or(|old| (d - omega).abs() < (old - omega).abs())
            {
                status.distance = Some(d);
            }
            if (rec.width - omega).abs() <= 10.0 * eps {
                status.near_miss = true;
            }
        }
    }

    let reduced = vertex_status.iter().all(|s| s.marked);
    ReducednessReport {
        omega,
        reduced,
        vertex_status,
        facets,
        eps,
    }
}

fn projection_onto_facet(p: &Polytope, f: usize, v: usize) -> Vec3 {
    let n = p.facet_normal(f);
    let x = p.vertex(v);
    x - n * (n.dot(&x) - p.facet_offset(f))
}

/// Strict point-in-convex-polygon test within the facet's plane.
fn point_in_facet_relint(p: &Polytope, f: usize, point: Vec3) -> bool {
    let n = p.facet_normal(f);
    let cycle = &p.facets()[f];
    let k = cycle.len();
    (0..k).all(|i| {
        let a = p.vertex(cycle[i]);
        let b = p.vertex(cycle[(i + 1) % k]);
        let edge = b - a;
        // signed distance of the point from the edge line, inward positive
        edge.cross(&(point - a)).dot(&n) / edge.norm() > p.eps()
    })
}

fn projection_in_relint(p: &Polytope, f: usize, v: usize) -> bool {
    point_in_facet_relint(p, f, projection_onto_facet(p, f, v))
}

/// For each facet strictly antipodal to vertex `v`: the orthogonal
/// projection of `v` onto the facet plane, whether it is interior to the
/// facet, and the distance.
pub fn projection_diagnostic(p: &Polytope, v: &Face) -> Result<Vec<ProjectionRecord>> {
    let idx = match (v.kind, v.vertices.as_slice()) {
        (FaceKind::Vertex, [i]) if *i < p.num_vertices() => *i,
        _ => return Err(Error::NotAVertex(v.vertices.clone())),
    };
    let mut out = Vec::new();
    for f in 0..p.num_facets() {
        if antipodal_face_of_facet(p, f).is_single_vertex() != Some(idx) {
            continue;
        }
        let projection = projection_onto_facet(p, f, idx);
        out.push(ProjectionRecord {
            facet: p.facet_face(f),
            projection,
            in_relative_interior: point_in_facet_relint(p, f, projection),
            distance: rho(p, v, &p.facet_face(f)),
        });
    }
    Ok(out)
}
