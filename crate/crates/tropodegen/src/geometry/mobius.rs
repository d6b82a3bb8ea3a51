//! Boundary points of H^3 as homogeneous coordinates on CP^1, cross-ratios,
//! and Moebius transformations as 2x2 complex matrices.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("degenerate triple: {0}")]
pub struct DegenerateTripleError(pub String);

/// A point of CP^1 = C u {inf} in homogeneous coordinates [a : b];
/// finite w is [w : 1], infinity is [1 : 0].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint(pub Complex64, pub Complex64);

impl BoundaryPoint {
    pub fn finite(w: Complex64) -> Self {
        Self(w, Complex64::new(1.0, 0.0))
    }

    pub fn infinity() -> Self {
        Self(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn is_infinite(&self, eps: f64) -> bool {
        self.1.norm() <= eps * self.0.norm()
    }

    /// Affine coordinate, or None for infinity.
    pub fn to_complex(&self) -> Option<Complex64> {
        if self.is_infinite(1e-14) {
            None
        } else {
            Some(self.0 / self.1)
        }
    }
}

impl std::fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.to_complex() {
            Some(w) => write!(f, "{w}"),
            None => write!(f, "inf"),
        }
    }
}

fn det2(p: &BoundaryPoint, q: &BoundaryPoint) -> Complex64 {
    p.0 * q.1 - p.1 * q.0
}

/// Cross ratio (a,b;c,d) = (a-c)(b-d) / ((a-d)(b-c)), projectively.
pub fn cross_ratio(
    a: &BoundaryPoint,
    b: &BoundaryPoint,
    c: &BoundaryPoint,
    d: &BoundaryPoint,
) -> Complex64 {
    (det2(a, c) * det2(b, d)) / (det2(a, d) * det2(b, c))
}

/// 2x2 complex matrix acting on CP^1 by `[a:b] -> [m00 a + m01 b : m10 a + m11 b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius(pub [[Complex64; 2]; 2]);

impl Mobius {
    pub fn identity() -> Self {
        Self([
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ])
    }

    pub fn apply(&self, p: &BoundaryPoint) -> BoundaryPoint {
        let m = &self.0;
        BoundaryPoint(m[0][0] * p.0 + m[0][1] * p.1, m[1][0] * p.0 + m[1][1] * p.1)
    }

    pub fn mul(&self, other: &Mobius) -> Mobius {
        let a = &self.0;
        let b = &other.0;
        Mobius([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn trace_squared(&self) -> Complex64 {
        let t = self.trace();
        t * t
    }

    pub fn inverse(&self) -> Mobius {
        let d = self.det();
        let m = &self.0;
        Mobius([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]])
    }

    /// Scale to determinant one (sign ambiguous: the output is projective).
    pub fn normalized(&self) -> Mobius {
        let s = self.det().sqrt();
        let m = &self.0;
        Mobius([[m[0][0] / s, m[0][1] / s], [m[1][0] / s, m[1][1] / s]])
    }
}

/// Matrix sending a -> 0, b -> 1, c -> infinity.
fn to_standard(
    a: &BoundaryPoint,
    b: &BoundaryPoint,
    c: &BoundaryPoint,
) -> Result<Mobius, DegenerateTripleError> {
    let scale = [a, b, c]
        .iter()
        .map(|p| p.0.norm() + p.1.norm())
        .fold(f64::MIN, f64::max);
    for (p, q, n1, n2) in [(a, b, "a", "b"), (a, c, "a", "c"), (b, c, "b", "c")] {
        if det2(p, q).norm() < 1e-13 * scale * scale {
            return Err(DegenerateTripleError(format!(
                "points {n1} and {n2} coincide"
            )));
        }
    }
    let dbc = det2(b, c);
    let dba = det2(b, a);
    Ok(Mobius([[a.1 * dbc, -a.0 * dbc], [c.1 * dba, -c.0 * dba]]))
}

/// The unique Moebius transformation carrying the ordered triple `src` to
/// `dst`, normalized to determinant one.
pub fn mobius_from_triples(
    src: &[BoundaryPoint; 3],
    dst: &[BoundaryPoint; 3],
) -> Result<Mobius, DegenerateTripleError> {
    let ms = to_standard(&src[0], &src[1], &src[2])?;
    let md = to_standard(&dst[0], &dst[1], &dst[2])?;
    Ok(md.inverse().mul(&ms).normalized())
}
