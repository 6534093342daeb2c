//! Forward-mode dual numbers carrying a gradient over the four unknowns.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic needed to evaluate the residual polynomials.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(v: f64) -> Self;
    fn value(self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn constant(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
}

/// `re + Σ du[i] ε_i` with `ε_i ε_j = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual4 {
    pub re: f64,
    pub du: [f64; 4],
}

impl Dual4 {
    /// The `i`-th independent variable with value `re`.
    pub fn variable(re: f64, i: usize) -> Self {
        let mut du = [0.0; 4];
        du[i] = 1.0;
        Dual4 { re, du }
    }
}

impl Scalar for Dual4 {
    #[inline]
    fn constant(v: f64) -> Self {
        Dual4 {
            re: v,
            du: [0.0; 4],
        }
    }
    #[inline]
    fn value(self) -> f64 {
        self.re
    }
}

#[inline]
fn zip(a: [f64; 4], b: [f64; 4], f: impl Fn(f64, f64) -> f64) -> [f64; 4] {
    [f(a[0], b[0]), f(a[1], b[1]), f(a[2], b[2]), f(a[3], b[3])]
}

impl Add for Dual4 {
    type Output = Dual4;
    #[inline]
    fn add(self, o: Dual4) -> Dual4 {
        Dual4 {
            re: self.re + o.re,
            du: zip(self.du, o.du, |a, b| a + b),
        }
    }
}

impl Sub for Dual4 {
    type Output = Dual4;
    #[inline]
    fn sub(self, o: Dual4) -> Dual4 {
        Dual4 {
            re: self.re - o.re,
            du: zip(self.du, o.du, |a, b| a - b),
        }
    }
}

impl Mul for Dual4 {
    type Output = Dual4;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)] // product rule
    fn mul(self, o: Dual4) -> Dual4 {
        Dual4 {
            re: self.re * o.re,
            du: zip(self.du, o.du, |a, b| a * o.re + self.re * b),
        }
    }
}

impl Div for Dual4 {
    type Output = Dual4;
    #[inline]
    fn div(self, o: Dual4) -> Dual4 {
        let inv = 1.0 / o.re;
        Dual4 {
            re: self.re * inv,
            du: zip(self.du, o.du, |a, b| (a * o.re - self.re * b) * inv * inv),
        }
    }
}

impl Neg for Dual4 {
    type Output = Dual4;
    #[inline]
    fn neg(self) -> Dual4 {
        Dual4 {
            re: -self.re,
            du: self.du.map(|d| -d),
        }
    }
}
