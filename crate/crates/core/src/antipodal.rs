//! Strict antipodality of faces, minimum width and the difference body.
//!
//! Two faces `F1`, `F2` are strictly antipodal when some unit `u` has
//! `support(u) = F1` and `support(-u) = F2`. Such a `u` must be orthogonal
//! to every edge direction of `F1` and `F2`, and must separate each face from
//! the vertices outside it. Writing those separations as `<c_i, u> > 0`,
//! the best achievable margin over unit `u` is the distance from the origin
//! to the convex hull of the constraint vectors (projected onto the allowed
//! subspace), which is found with Wolfe's minimum-norm-point algorithm.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hull::convex_hull;
use crate::polytope::{span_rank, support, width_direction, Face, Polytope};
use crate::vec3::{orthonormal_basis, Vec3};

/// Two strictly antipodal faces with a witnessing direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntipodalPair {
    pub face1: Face,
    pub face2: Face,
    /// Unit vector with `support(direction) = face1`, `support(-direction) = face2`.
    pub direction: Vec3,
    /// Distance between the two parallel supporting planes orthogonal to `direction`.
    pub distance: f64,
}

impl AntipodalPair {
    /// The same pair seen from the other side.
    pub fn reversed(&self) -> AntipodalPair {
        AntipodalPair {
            face1: self.face2.clone(),
            face2: self.face1.clone(),
            direction: -self.direction,
            distance: self.distance,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WidthReport {
    pub omega: f64,
    pub attaining_pairs: Vec<AntipodalPair>,
    pub candidate_count: usize,
}

/// Outcome of the margin maximization for one face pair.
#[derive(Clone, Copy, Debug)]
pub struct WitnessSearch {
    /// Largest separation margin (length units), 0 when infeasible.
    pub slack: f64,
    /// Maximizing unit direction when the margin is positive.
    pub direction: Option<Vec3>,
}

/// Minimum-norm point of the convex hull of `points` (Wolfe, 1976).
pub(crate) fn min_norm_point(points: &[Vec3]) -> Vec3 {
    let scale2 = points.iter().map(Vec3::norm_squared).fold(0.0, f64::max);
    if points.is_empty() || scale2 == 0.0 {
        return Vec3::ZERO;
    }
    let opt_tol = 1e-12 * scale2;
    let start = (0..points.len())
        .min_by(|&a, &b| {
            points[a]
                .norm_squared()
                .total_cmp(&points[b].norm_squared())
        })
        .unwrap();
    let mut corral = vec![start];
    let mut weights = vec![1.0];
    let mut x = points[start];

    'major: for _ in 0..500 {
        if x.norm_squared() <= 1e-28 * scale2 {
            return Vec3::ZERO;
        }
        let (j, pj) = points
            .iter()
            .enumerate()
            .min_by(|a, b| x.dot(a.1).total_cmp(&x.dot(b.1)))
            .unwrap();
        if x.norm_squared() - x.dot(pj) <= opt_tol || corral.contains(&j) {
            break;
        }
        corral.push(j);
        weights.push(0.0);
        for _ in 0..64 {
            let Some(mu) = affine_min_weights(points, &corral) else {
                break 'major;
            };
            if mu.iter().all(|&m| m > 1e-15) {
                weights = mu;
                x = combine(points, &corral, &weights);
                continue 'major;
            }
            let mut theta = 1.0_f64;
            for (w, m) in weights.iter().zip(&mu) {
                if *m <= 1e-15 && *w - *m > 0.0 {
                    theta = theta.min(*w / (*w - *m));
                }
            }
            for (w, m) in weights.iter_mut().zip(&mu) {
                *w = (1.0 - theta) * *w + theta * *m;
            }
            let mut k = 0;
            while k < corral.len() {
                if weights[k] <= 1e-15 {
                    corral.remove(k);
                    weights.remove(k);
                } else {
                    k += 1;
                }
            }
            if corral.is_empty() {
                break 'major;
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            x = combine(points, &corral, &weights);
        }
        break;
    }
    x
}

fn combine(points: &[Vec3], idx: &[usize], w: &[f64]) -> Vec3 {
    idx.iter().zip(w).map(|(&i, &wi)| points[i] * wi).sum()
}

/// Affine weights of the minimum-norm point of the affine hull of the corral.
fn affine_min_weights(points: &[Vec3], corral: &[usize]) -> Option<Vec<f64>> {
    let q0 = points[corral[0]];
    let d: Vec<Vec3> = corral[1..].iter().map(|&i| points[i] - q0).collect();
    let n = d.len();
    if n == 0 {
        return Some(vec![1.0]);
    }
    // Normal equations (D^T D) a = -D^T q0, solved by partial pivoting.
    let mut m = [[0.0_f64; 4]; 3];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = d[i].dot(&d[j]);
        }
        m[i][n] = -d[i].dot(&q0);
    }
    let scale = (0..n).map(|i| m[i][i]).fold(0.0, f64::max);
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() <= 1e-13 * scale {
            return None;
        }
        m.swap(col, piv);
        let pivot_row = m[col];
        for (row, r) in m.iter_mut().enumerate() {
            if row != col {
                let f = r[col] / pivot_row[col];
                for (x, p) in r[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    let alpha: Vec<f64> = (0..n).map(|i| m[i][n] / m[i][i]).collect();
    let mut mu = Vec::with_capacity(n + 1);
    mu.push(1.0 - alpha.iter().sum::<f64>());
    mu.extend(alpha);
    Some(mu)
}

/// Maximizes the separation margin of a direction witnessing strict
/// antipodality of `f1` and `f2`.
pub fn witness_search(p: &Polytope, f1: &Face, f2: &Face) -> WitnessSearch {
    let none = WitnessSearch {
        slack: 0.0,
        direction: None,
    };
    if f1 == f2 || !f1.is_disjoint(f2) || f1.vertices.is_empty() || f2.vertices.is_empty() {
        return none;
    }
    let eps = p.eps();
    let a = p.vertex(f1.vertices[0]);
    let b = p.vertex(f2.vertices[0]);
    let mut dirs: Vec<Vec3> = f1.vertices[1..].iter().map(|&i| p.vertex(i) - a).collect();
    dirs.extend(f2.vertices[1..].iter().map(|&i| p.vertex(i) - b));
    let span = orthonormal_basis(&dirs, eps);
    if span.len() == 3 {
        return none;
    }
    let project = |mut c: Vec3| {
        for _ in 0..2 {
            for e in &span {
                c -= *e * c.dot(e);
            }
        }
        c
    };
    let mut constraints = Vec::with_capacity(2 * p.num_vertices());
    for (i, w) in p.vertices().iter().enumerate() {
        if !f1.contains(i) {
            constraints.push(project(a - *w));
        }
        if !f2.contains(i) {
            constraints.push(project(*w - b));
        }
    }
    let x = min_norm_point(&constraints);
    let slack = x.norm();
    // Margin is realized by x/|x|; confirm against every constraint.
    match x.normalized() {
        Some(u) => {
            let realized = constraints
                .iter()
                .map(|c| c.dot(&u))
                .fold(f64::INFINITY, f64::min);
            WitnessSearch {
                slack: realized.max(0.0).min(slack),
                direction: if realized > 0.0 { Some(u) } else { None },
            }
        }
        None => none,
    }
}

/// `Some(pair)` when `f1` and `f2` are strictly antipodal faces of `p`.
pub fn strictly_antipodal(p: &Polytope, f1: &Face, f2: &Face) -> Option<AntipodalPair> {
    let search = witness_search(p, f1, f2);
    let u = search.direction?;
    if search.slack <= p.eps() {
        return None;
    }
    let (_, s1) = support(p, u).ok()?;
    let (_, s2) = support(p, -u).ok()?;
    if s1.vertices != f1.vertices || s2.vertices != f2.vertices {
        return None;
    }
    Some(AntipodalPair {
        face1: s1,
        face2: s2,
        direction: u,
        distance: width_direction(p, u).ok()?,
    })
}

/// Every unordered pair of strictly antipodal faces, each listed once with
/// `face1 < face2`; the reversed orientation is implied.
pub fn strictly_antipodal_pairs(p: &Polytope) -> Vec<AntipodalPair> {
    let faces = p.faces();
    let eps = p.eps();
    let dirs_of = |f: &Face| -> Vec<Vec3> {
        let a = p.vertex(f.vertices[0]);
        f.vertices[1..].iter().map(|&i| p.vertex(i) - a).collect()
    };
    let mut pairs = Vec::new();
    for i in 0..faces.len() {
        for j in (i + 1)..faces.len() {
            let (f1, f2) = (&faces[i], &faces[j]);
            if !f1.is_disjoint(f2) || f1.dimension() + f2.dimension() > 4 {
                continue;
            }
            let mut dirs = dirs_of(f1);
            dirs.extend(dirs_of(f2));
            if span_rank(&dirs, eps) == 3 {
                continue;
            }
            let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
            if let Some(pair) = strictly_antipodal(p, lo, hi) {
                pairs.push(pair);
            }
        }
    }
    pairs.sort_by(|a, b| a.face1.cmp(&b.face1).then(a.face2.cmp(&b.face2)));
    pairs
}

/// Support face in direction `-n_F` for facet `f`: the face strictly
/// antipodal to it.
pub fn antipodal_face_of_facet(p: &Polytope, f: usize) -> Face {
    let (_, face) = support(p, -p.facet_normal(f)).expect("facet normals are unit vectors");
    face
}

/// Unit normals of skew edge pairs. Pairs sharing a vertex, parallel pairs
/// and coplanar pairs are skipped.
pub fn skew_edge_directions(p: &Polytope) -> Vec<Vec3> {
    let edges = p.edges();
    let tol = p.tolerance();
    let eps = p.eps();
    let mut out = Vec::new();
    for i in 0..edges.len() {
        let [a1, b1] = edges[i];
        let (pa1, e1) = (p.vertex(a1), p.vertex(b1) - p.vertex(a1));
        for &[a2, b2] in &edges[(i + 1)..] {
            if a2 == a1 || a2 == b1 || b2 == a1 || b2 == b1 {
                continue;
            }
            let e2 = p.vertex(b2) - p.vertex(a2);
            let n = e1.cross(&e2);
            let len = n.norm();
            if len < tol * e1.norm() * e2.norm() {
                continue;
            }
            if (n.dot(&(p.vertex(a2) - pa1)) / len).abs() <= eps {
                continue;
            }
            out.push(n / len);
        }
    }
    out
}

/// Candidate minimizing directions: facet normals, then skew edge normals.
pub fn width_candidates(p: &Polytope) -> Vec<Vec3> {
    let mut c: Vec<Vec3> = (0..p.num_facets()).map(|f| p.facet_normal(f)).collect();
    c.extend(skew_edge_directions(p));
    c
}

/// Minimum width over all candidate directions, with every attaining
/// direction resolved into its pair of support faces.
pub fn minimum_width(p: &Polytope) -> WidthReport {
    let candidates = width_candidates(p);
    let widths: Vec<f64> = candidates
        .iter()
        .map(|&u| width_direction(p, u).expect("candidates are unit vectors"))
        .collect();
    let omega = widths.iter().copied().fold(f64::INFINITY, f64::min);
    let eps = p.eps();

    let mut pairs: Vec<AntipodalPair> = Vec::new();
    for (&u, &w) in candidates.iter().zip(&widths) {
        if w > omega + eps {
            continue;
        }
        let (_, f1) = support(p, u).expect("unit direction");
        let (_, f2) = support(p, -u).expect("unit direction");
        let pair = if f1 <= f2 {
            AntipodalPair {
                face1: f1,
                face2: f2,
                direction: u,
                distance: w,
            }
        } else {
            AntipodalPair {
                face1: f2,
                face2: f1,
                direction: -u,
                distance: w,
            }
        };
        match pairs
            .iter_mut()
            .find(|q| q.face1 == pair.face1 && q.face2 == pair.face2)
        {
            Some(existing) => {
                if pair.direction.lex_cmp(&existing.direction).is_lt() {
                    *existing = pair;
                }
            }
            None => pairs.push(pair),
        }
    }
    pairs.sort_by(|a, b| a.direction.lex_cmp(&b.direction));
    WidthReport {
        omega,
        attaining_pairs: pairs,
        candidate_count: candidates.len(),
    }
}

/// Affine dimension of the Minkowski sum `F1 + F2`.
pub fn minkowski_sum_dimension(p: &Polytope, f1: &Face, f2: &Face) -> usize {
    let mut dirs = Vec::new();
    for f in [f1, f2] {
        let a = p.vertex(f.vertices[0]);
        dirs.extend(f.vertices[1..].iter().map(|&i| p.vertex(i) - a));
    }
    span_rank(&dirs, p.eps())
}

/// The difference body `P - P`, the hull of all pairwise vertex differences.
pub fn minkowski_difference(p: &Polytope) -> Result<Polytope> {
    let vs = p.vertices();
    let mut pts = Vec::with_capacity(vs.len() * vs.len());
    for (i, x) in vs.iter().enumerate() {
        for (j, y) in vs.iter().enumerate() {
            if i != j {
                pts.push(*x - *y);
            }
        }
    }
    convex_hull(&pts, p.tolerance())
}
