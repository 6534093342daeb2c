#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reducedpoly::{convex_hull, parse_off, Polytope, Vec3, DEFAULT_TOLERANCE};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> Polytope {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    parse_off(&text, DEFAULT_TOLERANCE).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points of a Fibonacci lattice on the unit sphere.
pub fn fibonacci_directions(n: usize) -> impl Iterator<Item = Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n).map(move |i| {
        let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
        let rad = (1.0 - z * z).sqrt();
        let phi = golden * i as f64;
        Vec3::new(rad * phi.cos(), rad * phi.sin(), z)
    })
}

/// Brute-force width in direction `u` straight from the vertex list.
pub fn raw_width(points: &[Vec3], u: Vec3) -> f64 {
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    for p in points {
        let d = p.x * u.x + p.y * u.y + p.z * u.z;
        hi = hi.max(d);
        lo = lo.min(d);
    }
    hi - lo
}

/// Minimum of the width over `n` sampled directions.
pub fn sampled_min_width(points: &[Vec3], n: usize) -> f64 {
    fibonacci_directions(n)
        .map(|u| raw_width(points, u))
        .fold(f64::INFINITY, f64::min)
}

pub fn random_unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Rotation matrix from a uniformly random unit quaternion.
pub fn random_rotation(rng: &mut impl Rng) -> [[f64; 3]; 3] {
    let (mut q, mut n);
    loop {
        q = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0f64),
        ];
        n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            break;
        }
    }
    let [w, x, y, z] = q.map(|v| v / n);
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

pub fn rotate(m: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    Vec3::new(
        m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
        m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
        m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
    )
}

/// Hull of `n` random points on the unit sphere (diameter ≤ 2).
pub fn random_sphere_hull(rng: &mut impl Rng, n: usize) -> Polytope {
    let pts: Vec<Vec3> = (0..n).map(|_| random_unit(rng)).collect();
    convex_hull(&pts, DEFAULT_TOLERANCE).unwrap()
}

pub fn fixtures() -> [(&'static str, Polytope); 5] {
    [
        ("cube.off", fixture("cube.off")),
        ("tetra.off", fixture("tetra.off")),
        ("prism.off", fixture("prism.off")),
        ("square_pyramid.off", fixture("square_pyramid.off")),
        ("reduced12.off", fixture("reduced12.off")),
    ]
}
