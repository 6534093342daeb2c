//! Non-reducedness certificates from facet/vertex configurations.
//!
//! Given a facet `F = a_1 … a_k` and a vertex `v` whose incident edges are
//! split, clockwise, into `k` consecutive groups, a reduced polytope can
//! never satisfy all three of
//!
//! * (a) `F` and `v` are strictly antipodal and `ρ(v, F) = ω`;
//! * (b) the first edge of group `j` is strictly antipodal to `a_{j-1} a_j`
//!   (with `a_0 = a_k`);
//! * (c) every fan facet of group `j` is strictly antipodal to `a_j`, and at
//!   least one of them lies at distance `ω` from it.
//!
//! Finding such a configuration therefore certifies that `P` is NOT reduced.
//! The converse does not hold: when [`scan_certificate`] returns `None`
//! nothing follows about reducedness.
//!
//! Fans are walked clockwise as seen from outside at `v`, and `a_1 … a_k`
//! follows the stored facet cycle (counterclockwise from outside at `F`),
//! i.e. both orders are clockwise when looking from `v` through the body
//! towards `F`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::antipodal::{minimum_width, witness_search};
use crate::error::{Error, Result};
use crate::polytope::{rho, Face, FaceKind, Polytope};

/// Edges and facets around a vertex, in clockwise order from outside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexFan {
    pub vertex: usize,
    pub neighbors: Vec<usize>,
    /// `facets[i]` is the facet spanned by `neighbors[i]` and `neighbors[i+1]`.
    pub facets: Vec<usize>,
}

impl VertexFan {
    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }
}

/// Rotation of the fan plus a composition of its degree into `k` parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alignment {
    /// Fan position of the first edge of the first group.
    pub rotation: usize,
    pub groups: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairEvidence {
    pub face1: Face,
    pub face2: Face,
    pub strictly_antipodal: bool,
    /// Witness margin in length units (`0` when infeasible).
    pub slack: f64,
    pub rho: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupEvidence {
    /// `a_j`, as a vertex index.
    pub facet_vertex: usize,
    pub fan_facets: Vec<PairEvidence>,
    pub attains_width: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub facet: Face,
    /// `a_1 … a_k`.
    pub facet_cycle: Vec<usize>,
    pub vertex: usize,
    pub alignment: Alignment,
    pub omega: f64,
    pub holds_a: bool,
    pub holds_b: bool,
    pub holds_c: bool,
    pub evidence_a: PairEvidence,
    pub evidence_b: Vec<PairEvidence>,
    pub evidence_c: Vec<GroupEvidence>,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.holds_a && self.holds_b && self.holds_c
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub report: ConditionReport,
    pub omega: f64,
}

fn vertex_index(p: &Polytope, v: &Face) -> Result<usize> {
    match (v.kind, v.vertices.as_slice()) {
        (FaceKind::Vertex, [i]) if *i < p.num_vertices() => Ok(*i),
        _ => Err(Error::NotAVertex(v.vertices.clone())),
    }
}

/// Clockwise (from outside) fan of edges and facets around `v`.
pub fn vertex_fan(p: &Polytope, v: &Face) -> Result<VertexFan> {
    let v = vertex_index(p, v)?;
    Ok(fan_of(p, v))
}

fn fan_of(p: &Polytope, v: usize) -> VertexFan {
    // For each incident facet: (predecessor, successor) of v in its cycle.
    let around: Vec<(usize, usize, usize)> = p
        .vertex_facets(v)
        .iter()
        .map(|&f| {
            let c = &p.facets()[f];
            let k = c.len();
            let pos = c.iter().position(|&x| x == v).unwrap();
            (f, c[(pos + k - 1) % k], c[(pos + 1) % k])
        })
        .collect();
    let first = around.iter().min_by_key(|t| t.0).unwrap();
    let mut neighbors = Vec::with_capacity(around.len());
    let mut facets = Vec::with_capacity(around.len());
    let mut s = first.2;
    for _ in 0..around.len() {
        neighbors.push(s);
        let next = around
            .iter()
            .find(|t| t.1 == s)
            .expect("edge around a vertex has two facets");
        facets.push(next.0);
        s = next.2;
    }
    VertexFan {
        vertex: v,
        neighbors,
        facets,
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Compositions of `m` into `k` positive parts, lexicographic.
pub fn compositions(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 1..=(rest - (parts - 1)) {
            cur.push(first);
            rec(rest - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(m.saturating_sub(1), k.saturating_sub(1)));
    if k >= 1 && m >= k {
        rec(m, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// All `m · C(m−1, k−1)` alignments of a degree-`m` fan to a `k`-gon.
pub fn alignments(m: usize, k: usize) -> Vec<Alignment> {
    let comps = compositions(m, k);
    let mut out = Vec::with_capacity(m * comps.len());
    for rotation in 0..m {
        for groups in &comps {
            out.push(Alignment {
                rotation,
                groups: groups.clone(),
            });
        }
    }
    out
}

/// Evaluation context shared across many condition checks on one polytope.
struct Checker<'a> {
    p: &'a Polytope,
    omega: f64,
    eps: f64,
    fans: Vec<VertexFan>,
    cache: HashMap<(Face, Face), (bool, f64)>,
}

impl<'a> Checker<'a> {
    fn new(p: &'a Polytope) -> Self {
        Checker {
            p,
            omega: minimum_width(p).omega,
            eps: p.eps(),
            fans: (0..p.num_vertices()).map(|v| fan_of(p, v)).collect(),
            cache: HashMap::new(),
        }
    }

    fn antipodal(&mut self, f1: &Face, f2: &Face) -> (bool, f64) {
        let key = if f1 <= f2 {
            (f1.clone(), f2.clone())
        } else {
            (f2.clone(), f1.clone())
        };
        if let Some(&hit) = self.cache.get(&key) {
            return hit;
        }
        let search = witness_search(self.p, &key.0, &key.1);
        let ok = search.direction.is_some() && search.slack > self.eps;
        self.cache.insert(key, (ok, search.slack));
        (ok, search.slack)
    }

    fn evidence(&mut self, f1: Face, f2: Face) -> PairEvidence {
        let (strictly_antipodal, slack) = self.antipodal(&f1, &f2);
        let rho = rho(self.p, &f1, &f2);
        PairEvidence {
            face1: f1,
            face2: f2,
            strictly_antipodal,
            slack,
            rho,
        }
    }

    fn at_width(&self, d: f64) -> bool {
        (d - self.omega).abs() <= self.eps
    }

    fn condition_a(&mut self, f: usize, v: usize) -> PairEvidence {
        let facet = self.p.facet_face(f);
        self.evidence(Face::vertex(v), facet)
    }

    fn check(
        &mut self,
        f: usize,
        v: usize,
        alignment: &Alignment,
        full: bool,
    ) -> Result<ConditionReport> {
        let cycle = self.p.facets()[f].clone();
        let k = cycle.len();
        let fan = self.fans[v].clone();
        let m = fan.degree();
        if alignment.groups.len() != k {
            return Err(Error::BadAlignment(format!(
                "{} groups for a facet with {k} edges",
                alignment.groups.len()
            )));
        }
        if alignment.groups.contains(&0) {
            return Err(Error::BadAlignment("empty group".into()));
        }
        let total: usize = alignment.groups.iter().sum();
        if total != m {
            return Err(Error::BadAlignment(format!(
                "group sizes sum to {total}, fan degree is {m}"
            )));
        }
        if alignment.rotation >= m {
            return Err(Error::BadAlignment(format!(
                "rotation {} out of range for degree {m}",
                alignment.rotation
            )));
        }

        let evidence_a = self.condition_a(f, v);
        let holds_a = evidence_a.strictly_antipodal && self.at_width(evidence_a.rho);

        let mut evidence_b = Vec::with_capacity(k);
        let mut evidence_c = Vec::with_capacity(k);
        let mut holds_b = true;
        let mut holds_c = true;
        let mut pos = alignment.rotation;
        for (j, &size) in alignment.groups.iter().enumerate() {
            if !full && !(holds_a && holds_b && holds_c) {
                break;
            }
            // a_{j-1} a_j with a_0 = a_k, zero-based: cycle[j-1], cycle[j].
            let a_prev = cycle[(j + k - 1) % k];
            let a_j = cycle[j];
            let first_edge = Face::edge(v, fan.neighbors[pos % m]);
            let b = self.evidence(first_edge, Face::edge(a_prev, a_j));
            holds_b &= b.strictly_antipodal;
            evidence_b.push(b);

            let mut fan_facets = Vec::with_capacity(size);
            for l in 0..size {
                let facet = self.p.facet_face(fan.facets[(pos + l) % m]);
                fan_facets.push(self.evidence(Face::vertex(a_j), facet));
            }
            let all_antipodal = fan_facets.iter().all(|e| e.strictly_antipodal);
            let attains_width = fan_facets.iter().any(|e| self.at_width(e.rho));
            holds_c &= all_antipodal && attains_width;
            evidence_c.push(GroupEvidence {
                facet_vertex: a_j,
                fan_facets,
                attains_width,
            });
            pos += size;
        }

        Ok(ConditionReport {
            facet: self.p.facet_face(f),
            facet_cycle: cycle,
            vertex: v,
            alignment: alignment.clone(),
            omega: self.omega,
            holds_a,
            holds_b,
            holds_c,
            evidence_a,
            evidence_b,
            evidence_c,
        })
    }
}

/// Evaluates conditions (a), (b) and (c) for one facet, vertex and alignment.
pub fn check_conditions(
    p: &Polytope,
    facet: &Face,
    vertex: &Face,
    alignment: &Alignment,
) -> Result<ConditionReport> {
    let f = p
        .facet_index(facet)
        .ok_or_else(|| Error::NotAFacet(facet.vertices.clone()))?;
    let v = vertex_index(p, vertex)?;
    Checker::new(p).check(f, v, alignment, true)
}

/// Condition (a) alone; it does not depend on the alignment.
pub fn check_condition_a(
    p: &Polytope,
    facet: &Face,
    vertex: &Face,
) -> Result<(bool, PairEvidence)> {
    let f = p
        .facet_index(facet)
        .ok_or_else(|| Error::NotAFacet(facet.vertices.clone()))?;
    let v = vertex_index(p, vertex)?;
    let mut checker = Checker::new(p);
    let e = checker.condition_a(f, v);
    Ok((e.strictly_antipodal && checker.at_width(e.rho), e))
}

/// Searches all facets, vertices and alignments for a configuration
/// satisfying (a), (b) and (c).
///
/// Alignments with one edge per group (fan degree equal to the facet's edge
/// count) are tried first. A returned certificate proves `P` is not reduced;
/// `None` proves nothing.
pub fn scan_certificate(p: &Polytope) -> Option<Certificate> {
    let mut checker = Checker::new(p);
    let omega = checker.omega;
    // (a) depends only on the facet/vertex pair.
    let mut candidates = Vec::new();
    for f in 0..p.num_facets() {
        let k = p.facets()[f].len();
        for v in 0..p.num_vertices() {
            if checker.fans[v].degree() < k {
                continue;
            }
            let a = checker.condition_a(f, v);
            if a.strictly_antipodal && checker.at_width(a.rho) {
                candidates.push((f, v));
            }
        }
    }

    let found = |checker: &mut Checker<'_>, f: usize, v: usize, al: &Alignment| {
        let quick = checker.check(f, v, al, false).ok()?;
        if quick.all_hold() {
            checker.check(f, v, al, true).ok()
        } else {
            None
        }
    };

    for &(f, v) in &candidates {
        let k = p.facets()[f].len();
        if checker.fans[v].degree() != k {
            continue;
        }
        for rotation in 0..k {
            let al = Alignment {
                rotation,
                groups: vec![1; k],
            };
            if let Some(report) = found(&mut checker, f, v, &al) {
                return Some(Certificate { report, omega });
            }
        }
    }
    for &(f, v) in &candidates {
        let k = p.facets()[f].len();
        let m = checker.fans[v].degree();
        if m == k {
            continue;
        }
        for al in alignments(m, k) {
            if let Some(report) = found(&mut checker, f, v, &al) {
                return Some(Certificate { report, omega });
            }
        }
    }
    None
}
