//! Reading and writing polytopes in the OFF format.
//!
//! Grammar: a header token `OFF`, then the counts `V F E`, then `V` rows of
//! three coordinates and `F` rows `n i₁ … iₙ` of zero-based vertex indices.
//! `#` starts a comment running to the end of the line. Tokens may be split
//! across lines freely; the edge count is read but not checked.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hull::convex_hull;
use crate::polytope::Polytope;
use crate::vec3::Vec3;

/// The raw content of an OFF file.
#[derive(Clone, Debug, PartialEq)]
pub struct OffDocument {
    pub vertices: Vec<[f64; 3]>,
    pub facets: Vec<Vec<usize>>,
    pub edge_count: usize,
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut rest = line;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let tail = &rest[start..];
            let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
            out.push(Token {
                text: &tail[..len],
                line: li + 1,
                column: offset + start + 1,
            });
            offset += start + len;
            rest = &tail[len..];
        }
    }
    out
}

struct Cursor<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Cursor<'a> {
    fn error_at(line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<&Token<'a>> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(Self::error_at(
                self.last_line + 1,
                1,
                format!("unexpected end of file, expected {what}"),
            )),
        }
    }

    fn usize(&mut self, what: &str) -> Result<(usize, usize, usize)> {
        let t = self.next(what)?;
        t.text
            .parse::<usize>()
            .map(|v| (v, t.line, t.column))
            .map_err(|_| {
                Self::error_at(
                    t.line,
                    t.column,
                    format!("expected {what}, found '{}'", t.text),
                )
            })
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        let t = self.next(what)?;
        match t.text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => Err(Self::error_at(
                t.line,
                t.column,
                format!("{what} is not finite"),
            )),
            Err(_) => Err(Self::error_at(
                t.line,
                t.column,
                format!("expected {what}, found '{}'", t.text),
            )),
        }
    }
}

impl OffDocument {
    pub fn parse(text: &str) -> Result<OffDocument> {
        let tokens = tokenize(text);
        let last_line = text.lines().count();
        let mut cur = Cursor {
            tokens,
            pos: 0,
            last_line,
        };
        let head = cur.next("header 'OFF'")?;
        if head.text != "OFF" {
            return Err(Cursor::error_at(
                head.line,
                head.column,
                format!("expected header 'OFF', found '{}'", head.text),
            ));
        }
        let (nv, _, _) = cur.usize("vertex count")?;
        let (nf, _, _) = cur.usize("facet count")?;
        let (ne, _, _) = cur.usize("edge count")?;

        let mut vertices = Vec::with_capacity(nv);
        for i in 0..nv {
            let what = format!("coordinate of vertex {i}");
            vertices.push([cur.f64(&what)?, cur.f64(&what)?, cur.f64(&what)?]);
        }
        let mut facets = Vec::with_capacity(nf);
        for f in 0..nf {
            let (n, line, column) = cur.usize(&format!("size of facet {f}"))?;
            if n < 3 {
                return Err(Cursor::error_at(
                    line,
                    column,
                    format!("facet {f} has {n} < 3 vertices"),
                ));
            }
            let mut row = Vec::with_capacity(n);
            for _ in 0..n {
                let (idx, line, column) = cur.usize(&format!("vertex index of facet {f}"))?;
                if idx >= nv {
                    return Err(Cursor::error_at(
                        line,
                        column,
                        format!("facet {f} index {idx} out of range (V = {nv})"),
                    ));
                }
                row.push(idx);
            }
            facets.push(row);
        }
        if let Some(t) = cur.tokens.get(cur.pos) {
            return Err(Cursor::error_at(
                t.line,
                t.column,
                format!("trailing token '{}'", t.text),
            ));
        }
        Ok(OffDocument {
            vertices,
            facets,
            edge_count: ne,
        })
    }

    pub fn from_polytope(p: &Polytope) -> OffDocument {
        OffDocument {
            vertices: p.vertices().iter().map(|v| v.to_array()).collect(),
            facets: p.facets().to_vec(),
            edge_count: p.edges().len(),
        }
    }

    /// Serializes with 17 significant digits per coordinate.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("OFF\n");
        let _ = writeln!(
            s,
            "{} {} {}",
            self.vertices.len(),
            self.facets.len(),
            self.edge_count
        );
        for v in &self.vertices {
            let _ = writeln!(s, "{:.16e} {:.16e} {:.16e}", v[0], v[1], v[2]);
        }
        for f in &self.facets {
            let _ = write!(s, "{}", f.len());
            for i in f {
                let _ = write!(s, " {i}");
            }
            s.push('\n');
        }
        s
    }

    /// Validates the document as a convex polytope.
    ///
    /// The vertices are hulled; every listed vertex must be extreme and every
    /// listed facet must lie in a single facet of the hull (so triangulated
    /// input is accepted). With `F = 0` the hull alone defines the facets.
    /// Vertex indices are preserved.
    pub fn to_polytope(&self, tolerance: f64) -> Result<Polytope> {
        let points: Vec<Vec3> = self.vertices.iter().map(|&a| Vec3::from_array(a)).collect();
        let hull = convex_hull(&points, tolerance)?;
        if hull.num_vertices() != points.len() {
            let kept: Vec<Vec3> = hull.vertices().to_vec();
            let missing = points
                .iter()
                .position(|p| !kept.contains(p))
                .unwrap_or(points.len());
            return Err(Error::NotConvex(format!(
                "vertex {missing} is not an extreme point of the hull"
            )));
        }
        for (fi, f) in self.facets.iter().enumerate() {
            let inside = hull
                .facets()
                .iter()
                .any(|h| f.iter().all(|i| h.contains(i)));
            if !inside {
                return Err(Error::NotConvex(format!(
                    "facet {fi} {f:?} does not lie in a facet of the convex hull"
                )));
            }
        }
        Ok(hull)
    }
}

/// Parses OFF text into a validated polytope.
pub fn parse_off(text: &str, tolerance: f64) -> Result<Polytope> {
    OffDocument::parse(text)?.to_polytope(tolerance)
}

pub fn write_off(p: &Polytope) -> String {
    OffDocument::from_polytope(p).to_text()
}
