//! The Lobachevsky function and the Lobachevsky-Milnor volume.

use crate::equations::{parameter_residuals, DomainError, ShapeAssignment};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::PI;
use std::sync::OnceLock;

const TERMS: usize = 32;

/// zeta(2n)/pi^(2n) for n = 1..=TERMS, computed exactly from Bernoulli
/// numbers: zeta(2n) = (-1)^(n+1) B_{2n} (2 pi)^{2n} / (2 (2n)!).
fn zeta_coefficients() -> &'static [f64; TERMS] {
    static COEFFS: OnceLock<[f64; TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let m = 2 * TERMS;
        let mut bern: Vec<BigRational> = Vec::with_capacity(m + 1);
        bern.push(BigRational::one());
        let binom_row = |k: usize| -> Vec<BigInt> {
            // row k+1 of Pascal's triangle
            let mut row = vec![BigInt::one()];
            for j in 0..k {
                let next = &row[j] * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
                row.push(next);
            }
            row
        };
        for k in 1..=m {
            let row = binom_row(k);
            let mut s = BigRational::zero();
            for (j, b) in bern.iter().enumerate() {
                s += BigRational::from_integer(row[j].clone()) * b;
            }
            bern.push(-s / BigRational::from_integer(BigInt::from(k + 1)));
        }
        let mut out = [0.0f64; TERMS];
        let mut factorial = BigInt::one();
        let mut pow4 = BigInt::one();
        for n in 1..=TERMS {
            for f in (2 * n - 1)..=(2 * n) {
                factorial *= BigInt::from(f);
            }
            pow4 *= BigInt::from(4);
            // zeta(2n)/pi^{2n} = (-1)^{n+1} B_{2n} 2^{2n-1} / (2n)!
            let num = &bern[2 * n] * (&pow4 / BigInt::from(2));
            let q = num / BigRational::from_integer(factorial.clone());
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            out[n - 1] = sign * q.to_f64().expect("coefficient fits f64");
        }
        out
    })
}

/// Lobachevsky function: theta - theta ln|2 theta| plus the zeta-coefficient
/// tail, after reduction to |theta| <= pi/2 using period pi and oddness.
pub fn lobachevsky(theta: f64) -> f64 {
    let mut t = theta % PI;
    if t > PI / 2.0 {
        t -= PI;
    } else if t < -PI / 2.0 {
        t += PI;
    }
    if t == 0.0 {
        return 0.0;
    }
    let coeffs = zeta_coefficients();
    let t2 = t * t;
    let mut p = 1.0;
    let mut s = 0.0;
    for (n, &c) in coeffs.iter().enumerate() {
        let n = n + 1;
        p *= t2;
        s += c * p / ((n * (2 * n + 1)) as f64);
    }
    t - t * (2.0 * t.abs()).ln() + t * s
}

/// Lobachevsky-Milnor volume: the sum of Л(arg z) over all 3n shape
/// coordinates. Positively oriented tetrahedra contribute positive volume;
/// flat tetrahedra contribute zero.
pub fn volume(z: &ShapeAssignment) -> Result<f64, DomainError> {
    parameter_residuals(z)?; // domain check: nonzero coordinates
    Ok(z.triples
        .iter()
        .flatten()
        .map(|v| lobachevsky(v.arg()))
        .sum())
}
