//! Incremental 3D convex hull with coplanar facet merging.
//!
//! Points are inserted farthest-first (quickhull order) into a triangulated
//! hull. Afterwards adjacent triangles lying in a common plane are merged
//! into polygonal facets and points which ended up inside a facet or on an
//! edge are dropped, so the result carries the true face lattice.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::polytope::{absolute_eps, affine_dimension, newell_normal, Polytope};
use crate::vec3::Vec3;

#[derive(Clone, Debug)]
struct Tri {
    v: [usize; 3],
    normal: Vec3,
    offset: f64,
    outside: Vec<usize>,
    alive: bool,
}

impl Tri {
    fn new(points: &[Vec3], v: [usize; 3]) -> Self {
        let (a, b, c) = (points[v[0]], points[v[1]], points[v[2]]);
        let n = (b - a).cross(&(c - a));
        let normal = n.normalized().unwrap_or(Vec3::ZERO);
        Tri {
            v,
            normal,
            offset: normal.dot(&a),
            outside: Vec::new(),
            alive: true,
        }
    }

    fn distance(&self, p: Vec3) -> f64 {
        self.normal.dot(&p) - self.offset
    }

    fn edges(&self) -> [(usize, usize); 3] {
        [
            (self.v[0], self.v[1]),
            (self.v[1], self.v[2]),
            (self.v[2], self.v[0]),
        ]
    }
}

struct Builder<'a> {
    points: &'a [Vec3],
    eps: f64,
    tris: Vec<Tri>,
    edge_owner: HashMap<(usize, usize), usize>,
}

impl<'a> Builder<'a> {
    fn add_tri(&mut self, v: [usize; 3]) -> usize {
        let id = self.tris.len();
        let tri = Tri::new(self.points, v);
        for e in tri.edges() {
            self.edge_owner.insert(e, id);
        }
        self.tris.push(tri);
        id
    }

    fn kill_tri(&mut self, id: usize) {
        self.tris[id].alive = false;
        for e in self.tris[id].edges() {
            if self.edge_owner.get(&e) == Some(&id) {
                self.edge_owner.remove(&e);
            }
        }
    }

    /// Gives each candidate point to the triangle it is farthest above.
    fn assign(&mut self, candidates: &[usize], targets: &[usize]) {
        for &p in candidates {
            let pt = self.points[p];
            let mut best: Option<(usize, f64)> = None;
            for &t in targets {
                let d = self.tris[t].distance(pt);
                if d > self.eps && best.is_none_or(|(_, bd)| d > bd) {
                    best = Some((t, d));
                }
            }
            if let Some((t, _)) = best {
                self.tris[t].outside.push(p);
            }
        }
    }

    fn insert(&mut self, seed: usize, p: usize) {
        let pt = self.points[p];
        // Visible region grown from the seed triangle across shared edges.
        let mut visible = vec![seed];
        let mut is_visible = HashMap::from([(seed, true)]);
        let mut queue = VecDeque::from([seed]);
        while let Some(t) = queue.pop_front() {
            for (a, b) in self.tris[t].edges() {
                if let Some(&n) = self.edge_owner.get(&(b, a)) {
                    if is_visible.contains_key(&n) {
                        continue;
                    }
                    let vis = self.tris[n].distance(pt) > self.eps;
                    is_visible.insert(n, vis);
                    if vis {
                        visible.push(n);
                        queue.push_back(n);
                    }
                }
            }
        }
        let mut horizon = Vec::new();
        for &t in &visible {
            for (a, b) in self.tris[t].edges() {
                let across = self.edge_owner.get(&(b, a)).copied();
                if !across.is_some_and(|n| is_visible.get(&n) == Some(&true)) {
                    horizon.push((a, b));
                }
            }
        }
        let mut orphans = Vec::new();
        for &t in &visible {
            orphans.extend(self.tris[t].outside.drain(..).filter(|&q| q != p));
            self.kill_tri(t);
        }
        let new: Vec<usize> = horizon
            .iter()
            .map(|&(a, b)| self.add_tri([a, b, p]))
            .collect();
        self.assign(&orphans, &new);
    }
}

fn union_find_root(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Convex hull of `points` with maximal (merged) polygonal facets.
///
/// Only extreme points survive as vertices; they keep their relative input
/// order. Fails with [`Error::DegenerateInput`] when the points do not span
/// three dimensions at the given relative tolerance.
pub fn convex_hull(points: &[Vec3], tolerance: f64) -> Result<Polytope> {
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite);
    }
    let eps = absolute_eps(points, tolerance);
    if points.len() < 4 {
        return Err(Error::DegenerateInput {
            dimension: affine_dimension(points, eps),
        });
    }

    // Initial simplex from well-separated extreme points.
    let i0 = (0..points.len())
        .min_by(|&a, &b| points[a].lex_cmp(&points[b]))
        .unwrap();
    let farthest = |score: &dyn Fn(Vec3) -> f64| -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, p) in points.iter().enumerate() {
            let s = score(*p);
            if s > best.1 {
                best = (i, s);
            }
        }
        best
    };
    let p0 = points[i0];
    let (i1, d1) = farthest(&|p| p.distance(&p0));
    if d1 <= eps {
        return Err(Error::DegenerateInput { dimension: 0 });
    }
    let p1 = points[i1];
    let axis = (p1 - p0) / d1;
    let (i2, d2) = farthest(&|p| {
        let r = p - p0;
        (r - axis * r.dot(&axis)).norm()
    });
    if d2 <= eps {
        return Err(Error::DegenerateInput { dimension: 1 });
    }
    let p2 = points[i2];
    let plane_n = (p1 - p0).cross(&(p2 - p0)).normalized().unwrap();
    let (i3, d3) = farthest(&|p| (p - p0).dot(&plane_n).abs());
    if d3 <= eps {
        return Err(Error::DegenerateInput { dimension: 2 });
    }
    let above = (points[i3] - p0).dot(&plane_n) > 0.0;
    let (i1, i2) = if above { (i2, i1) } else { (i1, i2) };

    let mut b = Builder {
        points,
        eps,
        tris: Vec::new(),
        edge_owner: HashMap::new(),
    };
    let init = [
        b.add_tri([i0, i1, i2]),
        b.add_tri([i0, i3, i1]),
        b.add_tri([i1, i3, i2]),
        b.add_tri([i2, i3, i0]),
    ];
    let rest: Vec<usize> = (0..points.len())
        .filter(|i| ![i0, i1, i2, i3].contains(i))
        .collect();
    b.assign(&rest, &init);

    loop {
        let next = b.tris.iter().position(|t| t.alive && !t.outside.is_empty());
        let Some(seed) = next else { break };
        let t = &b.tris[seed];
        let p = *t
            .outside
            .iter()
            .max_by(|&&x, &&y| t.distance(points[x]).total_cmp(&t.distance(points[y])))
            .unwrap();
        b.insert(seed, p);
    }

    merge_into_polytope(&b, tolerance)
}

fn merge_into_polytope(b: &Builder<'_>, tolerance: f64) -> Result<Polytope> {
    let points = b.points;
    let eps = b.eps;
    let alive: Vec<usize> = (0..b.tris.len()).filter(|&t| b.tris[t].alive).collect();
    let mut parent: Vec<usize> = (0..b.tris.len()).collect();

    for &t in &alive {
        let tri = &b.tris[t];
        for (x, y) in tri.edges() {
            let Some(&n) = b.edge_owner.get(&(y, x)) else {
                return Err(Error::InvalidLattice(
                    "hull triangulation is not closed".into(),
                ));
            };
            if n < t {
                continue;
            }
            let other = &b.tris[n];
            let apex_other = *other.v.iter().find(|&&v| v != x && v != y).unwrap();
            let apex_self = *tri.v.iter().find(|&&v| v != x && v != y).unwrap();
            let coplanar = tri.distance(points[apex_other]).abs() <= eps
                && other.distance(points[apex_self]).abs() <= eps
                && tri.normal.dot(&other.normal) > 0.0;
            if coplanar {
                let (ra, rb) = (
                    union_find_root(&mut parent, t),
                    union_find_root(&mut parent, n),
                );
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }

    // Boundary cycle of each group of coplanar triangles.
    let root: Vec<usize> = (0..b.tris.len())
        .map(|t| union_find_root(&mut parent, t))
        .collect();
    let mut groups: Vec<usize> = Vec::new();
    for &t in &alive {
        if !groups.contains(&root[t]) {
            groups.push(root[t]);
        }
    }
    let mut cycles: Vec<Vec<usize>> = Vec::with_capacity(groups.len());
    for &group in &groups {
        let members: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&t| root[t] == group)
            .collect();
        let mut next: HashMap<usize, usize> = HashMap::new();
        let mut start = usize::MAX;
        for &t in &members {
            for (x, y) in b.tris[t].edges() {
                let n = b.edge_owner[&(y, x)];
                if root[n] != group {
                    if next.insert(x, y).is_some() {
                        return Err(Error::InvalidLattice(format!(
                            "merged facet is pinched at point {x}"
                        )));
                    }
                    start = start.min(x);
                }
            }
        }
        let mut cycle = vec![start];
        let mut cur = next[&start];
        while cur != start {
            cycle.push(cur);
            cur = *next.get(&cur).ok_or_else(|| {
                Error::InvalidLattice("merged facet boundary is not a cycle".into())
            })?;
            if cycle.len() > next.len() {
                return Err(Error::InvalidLattice("merged facet boundary loops".into()));
            }
        }
        if cycle.len() != next.len() {
            return Err(Error::InvalidLattice("merged facet has holes".into()));
        }
        cycles.push(cycle);
    }

    // Drop points interior to a facet or an edge: extreme points lie on at
    // least three facets.
    let mut incidence = vec![0usize; points.len()];
    for c in &cycles {
        for &v in c {
            incidence[v] += 1;
        }
    }
    let keep: Vec<usize> = (0..points.len()).filter(|&i| incidence[i] >= 3).collect();
    let mut remap = vec![usize::MAX; points.len()];
    for (new, &old) in keep.iter().enumerate() {
        remap[old] = new;
    }
    let vertices: Vec<Vec3> = keep.iter().map(|&i| points[i]).collect();
    let mut facets: Vec<Vec<usize>> = cycles
        .iter()
        .map(|c| {
            c.iter()
                .filter(|&&v| remap[v] != usize::MAX)
                .map(|&v| remap[v])
                .collect::<Vec<usize>>()
        })
        .collect();
    for f in &mut facets {
        let k = f
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(i, _)| i)
            .unwrap_or(0);
        f.rotate_left(k);
    }
    facets.sort();
    debug_assert!(facets
        .iter()
        .all(|f| newell_normal(&vertices, f).norm() > 0.0));

    Polytope::from_lattice(vertices, facets, tolerance)
}
