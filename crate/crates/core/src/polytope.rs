//! Convex polytopes with their vertex/edge/facet lattice, and the metric
//! primitives built on them: support function, directional width and the
//! distance between affine hulls of faces.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::{orthonormal_basis, Vec3};

/// Default relative tolerance for coplanarity, support-face membership and
/// distance equality.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceKind {
    Vertex,
    Edge,
    Facet,
}

/// A face of a polytope, identified by the sorted indices of its vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Face {
    pub kind: FaceKind,
    pub vertices: Vec<usize>,
}

impl Face {
    pub fn vertex(i: usize) -> Self {
        Face {
            kind: FaceKind::Vertex,
            vertices: vec![i],
        }
    }

    pub fn edge(a: usize, b: usize) -> Self {
        Face {
            kind: FaceKind::Edge,
            vertices: if a <= b { vec![a, b] } else { vec![b, a] },
        }
    }

    pub fn facet(indices: &[usize]) -> Self {
        let mut vertices = indices.to_vec();
        vertices.sort_unstable();
        Face {
            kind: FaceKind::Facet,
            vertices,
        }
    }

    /// Affine dimension implied by the kind.
    pub fn dimension(&self) -> usize {
        match self.kind {
            FaceKind::Vertex => 0,
            FaceKind::Edge => 1,
            FaceKind::Facet => 2,
        }
    }

    pub fn is_single_vertex(&self) -> Option<usize> {
        match self.vertices.as_slice() {
            [v] => Some(*v),
            _ => None,
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        !self.vertices.iter().any(|v| other.contains(*v))
    }
}

impl fmt::Display for Face {
    /// Vertices are printed 1-based, the way polytope faces are usually labelled.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            FaceKind::Vertex => "vertex",
            FaceKind::Edge => "edge",
            FaceKind::Facet => "facet",
        };
        write!(f, "{kind} ")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, "-")?;
            }
            write!(f, "v{}", v + 1)?;
        }
        Ok(())
    }
}

/// A bounded, three-dimensional convex polytope.
///
/// Facets are vertex cycles, counterclockwise when seen from outside, so the
/// Newell normal of every cycle points outward. Construction validates the
/// full lattice; a `Polytope` value is always consistent.
#[derive(Clone, Debug)]
pub struct Polytope {
    vertices: Vec<Vec3>,
    facets: Vec<Vec<usize>>,
    normals: Vec<Vec3>,
    offsets: Vec<f64>,
    edges: Vec<[usize; 2]>,
    vertex_facets: Vec<Vec<usize>>,
    facet_lookup: HashMap<Vec<usize>, usize>,
    tolerance: f64,
    eps: f64,
}

/// Absolute tolerance derived from a relative one and the size of a point set.
pub(crate) fn absolute_eps(points: &[Vec3], tolerance: f64) -> f64 {
    if points.is_empty() {
        return tolerance;
    }
    let centroid = points.iter().copied().sum::<Vec3>() / points.len() as f64;
    let radius = points
        .iter()
        .map(|p| p.distance(&centroid))
        .fold(0.0_f64, f64::max);
    tolerance * radius.max(1.0)
}

/// Outward normal of a polygon by Newell's method, unnormalized.
pub(crate) fn newell_normal(points: &[Vec3], cycle: &[usize]) -> Vec3 {
    let mut n = Vec3::ZERO;
    let k = cycle.len();
    for i in 0..k {
        let a = points[cycle[i]];
        let b = points[cycle[(i + 1) % k]];
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    n
}

impl Polytope {
    /// Builds a polytope from explicit vertices and counterclockwise facet
    /// cycles, checking every lattice and convexity invariant.
    pub fn from_lattice(
        vertices: Vec<Vec3>,
        facets: Vec<Vec<usize>>,
        tolerance: f64,
    ) -> Result<Self> {
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let dimension = affine_dimension(&vertices, absolute_eps(&vertices, tolerance));
        if dimension < 3 {
            return Err(Error::DegenerateInput { dimension });
        }
        let eps = absolute_eps(&vertices, tolerance);
        let nv = vertices.len();

        let mut normals = Vec::with_capacity(facets.len());
        let mut offsets = Vec::with_capacity(facets.len());
        let mut vertex_facets = vec![Vec::new(); nv];
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        let mut facet_lookup = HashMap::new();

        for (fi, cycle) in facets.iter().enumerate() {
            if cycle.len() < 3 {
                return Err(Error::InvalidLattice(format!(
                    "facet {fi} has only {} vertices",
                    cycle.len()
                )));
            }
            let mut sorted = cycle.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidLattice(format!(
                    "facet {fi} repeats a vertex"
                )));
            }
            if let Some(&bad) = sorted.iter().find(|&&i| i >= nv) {
                return Err(Error::InvalidLattice(format!(
                    "facet {fi} references vertex {bad}, only {nv} vertices"
                )));
            }
            let normal = newell_normal(&vertices, cycle)
                .normalized()
                .ok_or_else(|| Error::InvalidLattice(format!("facet {fi} has zero area")))?;
            let offset =
                cycle.iter().map(|&i| normal.dot(&vertices[i])).sum::<f64>() / cycle.len() as f64;
            for &i in cycle {
                let d = normal.dot(&vertices[i]) - offset;
                if d.abs() > eps {
                    return Err(Error::NotConvex(format!(
                        "facet {fi} is not planar (vertex {i} off by {d:e})"
                    )));
                }
            }
            for (i, v) in vertices.iter().enumerate() {
                let d = normal.dot(v) - offset;
                if d > eps {
                    return Err(Error::NotConvex(format!(
                        "vertex {i} lies {d:e} outside facet {fi}"
                    )));
                }
            }
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if directed.insert((a, b), fi).is_some() {
                    return Err(Error::InvalidLattice(format!(
                        "directed edge {a}->{b} used twice (inconsistent orientation)"
                    )));
                }
                vertex_facets[a].push(fi);
            }
            if facet_lookup.insert(sorted, fi).is_some() {
                return Err(Error::InvalidLattice(format!("facet {fi} is duplicated")));
            }
            normals.push(normal);
            offsets.push(offset);
        }

        let mut edges = Vec::new();
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) {
                return Err(Error::InvalidLattice(format!(
                    "edge {a}-{b} is not shared by exactly two facets"
                )));
            }
            if a < b {
                edges.push([a, b]);
            }
        }
        edges.sort_unstable();

        for (i, incident) in vertex_facets.iter().enumerate() {
            let ns: Vec<Vec3> = incident.iter().map(|&f| normals[f]).collect();
            if incident.len() < 3 || orthonormal_basis(&ns, 1e-9).len() < 3 {
                return Err(Error::NotConvex(format!("vertex {i} is not extreme")));
            }
        }

        let nf = facets.len();
        let ne = edges.len();
        if nv + nf != ne + 2 {
            return Err(Error::InvalidLattice(format!(
                "Euler relation fails: V={nv}, E={ne}, F={nf}"
            )));
        }

        Ok(Polytope {
            vertices,
            facets,
            normals,
            offsets,
            edges,
            vertex_facets,
            facet_lookup,
            tolerance,
            eps,
        })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Vec3 {
        self.vertices[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Facet cycles, counterclockwise from outside.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Outward unit normal of facet `f`.
    pub fn facet_normal(&self, f: usize) -> Vec3 {
        self.normals[f]
    }

    pub fn facet_offset(&self, f: usize) -> f64 {
        self.offsets[f]
    }

    pub fn facet_face(&self, f: usize) -> Face {
        Face::facet(&self.facets[f])
    }

    /// Index of the facet with exactly this vertex set.
    pub fn facet_index(&self, face: &Face) -> Option<usize> {
        self.facet_lookup.get(&face.vertices).copied()
    }

    /// Facets incident to vertex `v`, in no particular order.
    pub fn vertex_facets(&self, v: usize) -> &[usize] {
        &self.vertex_facets[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let e = if a < b { [a, b] } else { [b, a] };
        self.edges.binary_search(&e).is_ok()
    }

    /// Relative tolerance the polytope was built with.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Absolute tolerance in length units (relative tolerance times size).
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// All vertices, edges and facets, in that order.
    pub fn faces(&self) -> Vec<Face> {
        let mut faces: Vec<Face> = (0..self.num_vertices()).map(Face::vertex).collect();
        faces.extend(self.edges.iter().map(|e| Face::edge(e[0], e[1])));
        faces.extend((0..self.num_facets()).map(|f| self.facet_face(f)));
        faces
    }

    /// Classifies a vertex subset by its affine dimension.
    pub fn face_from_indices(&self, indices: &[usize]) -> Face {
        let mut vertices = indices.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let kind = match vertices.len() {
            1 => FaceKind::Vertex,
            2 => FaceKind::Edge,
            _ => {
                let pts: Vec<Vec3> = vertices.iter().map(|&i| self.vertices[i]).collect();
                match affine_dimension(&pts, self.eps) {
                    0 => FaceKind::Vertex,
                    1 => FaceKind::Edge,
                    _ => FaceKind::Facet,
                }
            }
        };
        Face { kind, vertices }
    }

    pub fn points_of(&self, face: &Face) -> Vec<Vec3> {
        face.vertices.iter().map(|&i| self.vertices[i]).collect()
    }

    pub fn centroid(&self) -> Vec3 {
        self.vertices.iter().copied().sum::<Vec3>() / self.vertices.len() as f64
    }

    /// Applies an affine map to every vertex and rebuilds the lattice.
    ///
    /// Orientation-reversing maps flip every facet cycle so the result stays
    /// counterclockwise from outside.
    pub fn map_vertices<F: Fn(Vec3) -> Vec3>(&self, f: F) -> Result<Polytope> {
        let vertices: Vec<Vec3> = self.vertices.iter().map(|&v| f(v)).collect();
        let mut facets = self.facets.clone();
        let probe = newell_normal(&vertices, &facets[0]);
        let inner = vertices.iter().copied().sum::<Vec3>() / vertices.len() as f64;
        if probe.dot(&(vertices[facets[0][0]] - inner)) < 0.0 {
            for c in &mut facets {
                c.reverse();
            }
        }
        Polytope::from_lattice(vertices, facets, self.tolerance)
    }
}

/// Affine dimension (0..=3) of a point set at absolute tolerance `eps`.
pub fn affine_dimension(points: &[Vec3], eps: f64) -> usize {
    match points.split_first() {
        None => 0,
        Some((p0, rest)) => {
            let dirs: Vec<Vec3> = rest.iter().map(|p| *p - *p0).collect();
            span_rank(&dirs, eps)
        }
    }
}

/// Rank of a set of direction vectors, judged against absolute tolerance `eps`.
pub(crate) fn span_rank(dirs: &[Vec3], eps: f64) -> usize {
    orthonormal_basis(dirs, eps).len()
}

/// Support function value `h(P,u)` together with the support face
/// `H(P,u) ∩ P`, i.e. all vertices within `eps` of the maximum.
pub fn support(p: &Polytope, u: Vec3) -> Result<(f64, Face)> {
    if u.norm_squared() == 0.0 || !u.is_finite() {
        return Err(Error::ZeroDirection);
    }
    let values: Vec<f64> = p.vertices.iter().map(|v| u.dot(v)).collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let band = p.eps * u.norm();
    let members: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, &h)| h >= max - band)
        .map(|(i, _)| i)
        .collect();
    Ok((max, p.face_from_indices(&members)))
}

/// Support function value only.
pub fn support_value(p: &Polytope, u: Vec3) -> f64 {
    p.vertices
        .iter()
        .map(|v| u.dot(v))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Width `h(P,u) + h(P,-u)` in the direction of `u`, normalized first.
pub fn width_direction(p: &Polytope, u: Vec3) -> Result<f64> {
    let u = u.normalized().ok_or(Error::ZeroDirection)?;
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    for v in &p.vertices {
        let h = u.dot(v);
        hi = hi.max(h);
        lo = lo.min(h);
    }
    Ok(hi - lo)
}

/// Distance between the affine hulls of two point sets.
///
/// Directions whose residual after orthogonalization is at most `threshold`
/// are treated as already spanned. Returns 0, up to rounding, whenever the
/// hulls meet.
pub fn affine_distance(a: &[Vec3], b: &[Vec3], threshold: f64) -> f64 {
    let (a0, b0) = (a[0], b[0]);
    let mut dirs: Vec<Vec3> = a[1..].iter().map(|p| *p - a0).collect();
    dirs.extend(b[1..].iter().map(|p| *p - b0));
    let basis = orthonormal_basis(&dirs, threshold);
    let mut d = b0 - a0;
    for _ in 0..2 {
        for e in &basis {
            d -= *e * d.dot(e);
        }
    }
    d.norm()
}

/// `ρ(A,B)`: distance between the affine hulls of faces `a` and `b` of `p`.
pub fn rho(p: &Polytope, a: &Face, b: &Face) -> f64 {
    affine_distance(&p.points_of(a), &p.points_of(b), p.eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::convex_hull;

    fn unit_cube() -> Polytope {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(Vec3::new(
                (i & 1) as f64,
                ((i >> 1) & 1) as f64,
                ((i >> 2) & 1) as f64,
            ));
        }
        convex_hull(&pts, DEFAULT_TOLERANCE).unwrap()
    }

    #[test]
    fn cube_support_along_x_is_a_facet() {
        let cube = unit_cube();
        let (h, face) = support(&cube, Vec3::X).unwrap();
        assert_eq!(h, 1.0);
        assert_eq!(face.kind, FaceKind::Facet);
        for &i in &face.vertices {
            assert_eq!(cube.vertex(i).x, 1.0);
        }
        assert_eq!(face.vertices.len(), 4);
    }

    #[test]
    fn zero_direction_rejected() {
        let cube = unit_cube();
        assert!(matches!(
            support(&cube, Vec3::ZERO),
            Err(Error::ZeroDirection)
        ));
        assert!(matches!(
            width_direction(&cube, Vec3::ZERO),
            Err(Error::ZeroDirection)
        ));
    }

    #[test]
    fn cube_width() {
        let cube = unit_cube();
        assert_eq!(width_direction(&cube, Vec3::X).unwrap(), 1.0);
        let d = Vec3::new(1.0, 1.0, 1.0);
        let w = width_direction(&cube, d).unwrap();
        assert!((w - 3.0_f64.sqrt()).abs() < 1e-15);
        assert_eq!(w, width_direction(&cube, -d).unwrap());
    }

    #[test]
    fn skew_segments_at_unit_offset() {
        let a = [Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0)];
        let b = [Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 1.0, 1.0)];
        assert!((affine_distance(&a, &b, 1e-12) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn affine_distance_cases() {
        let p = [Vec3::new(1.0, 2.0, 3.0)];
        let q = [Vec3::new(1.0, 2.0, 7.0)];
        assert_eq!(affine_distance(&p, &q, 1e-12), 4.0);
        // point to line
        let line = [Vec3::ZERO, Vec3::X];
        let pt = [Vec3::new(5.0, 3.0, 4.0)];
        assert!((affine_distance(&pt, &line, 1e-12) - 5.0).abs() < 1e-14);
        // parallel lines
        let l2 = [Vec3::new(0.0, 2.0, 0.0), Vec3::new(3.0, 2.0, 0.0)];
        assert!((affine_distance(&line, &l2, 1e-12) - 2.0).abs() < 1e-14);
        // point to plane
        let plane = [Vec3::ZERO, Vec3::X, Vec3::Y];
        assert!((affine_distance(&pt, &plane, 1e-12) - 4.0).abs() < 1e-14);
        // line parallel to plane
        let l3 = [Vec3::new(0.0, 0.0, 2.5), Vec3::new(1.0, 1.0, 2.5)];
        assert!((affine_distance(&l3, &plane, 1e-12) - 2.5).abs() < 1e-14);
        // non-parallel planes intersect
        let plane2 = [
            Vec3::new(0.0, 0.0, 5.0),
            Vec3::new(1.0, 0.0, 6.0),
            Vec3::new(0.0, 1.0, 5.0),
        ];
        assert!(affine_distance(&plane, &plane2, 1e-12) < 1e-15);
        // parallel planes
        let plane3 = [
            Vec3::new(0.0, 0.0, -2.0),
            Vec3::new(1.0, 0.0, -2.0),
            Vec3::new(0.0, 1.0, -2.0),
        ];
        assert!((affine_distance(&plane, &plane3, 1e-12) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn face_display_is_one_based() {
        assert_eq!(Face::edge(3, 0).to_string(), "edge v1-v4");
    }

    #[test]
    fn lattice_rejects_inconsistent_orientation() {
        let pts = vec![Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::Z];
        let good = vec![vec![0, 2, 1], vec![0, 1, 3], vec![1, 2, 3], vec![0, 3, 2]];
        assert!(Polytope::from_lattice(pts.clone(), good.clone(), 1e-9).is_ok());
        let mut bad = good;
        bad[0].reverse();
        assert!(Polytope::from_lattice(pts, bad, 1e-9).is_err());
    }
}
