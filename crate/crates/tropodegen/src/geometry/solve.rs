//! Newton solver for the gluing (and completeness) equations.
//!
//! One complex unknown per tetrahedron; the companions z' = 1/(1-z) and
//! z'' = (z-1)/z are substituted so the parameter equations hold exactly.
//! Equations are solved in logarithmic form with branch targets frozen at the
//! start point, by least-squares Newton on the normal equations; the result
//! is certified multiplicatively.

use super::GeometryError;
use crate::equations::{gluing_residuals, GluingSystem, ShapeAssignment};
use crate::triangulation::PeripheralCurve;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Initial guess, one z per tetrahedron.
    pub initial: Vec<Complex64>,
    /// Impose mu(M_i) = mu(L_i) = 1 for every supplied peripheral curve.
    pub complete: bool,
    /// Maximum multiplicative residual of the certified solution.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Restarts from perturbed initial guesses before giving up.
    pub retries: usize,
    /// Pin selected tetrahedron shapes to fixed values (index, value).
    pub fixed: Vec<(usize, Complex64)>,
}

impl SolveOptions {
    pub fn with_initial(initial: Vec<Complex64>) -> Self {
        Self {
            initial,
            complete: false,
            tolerance: 1e-12,
            max_iterations: 100,
            retries: 8,
            fixed: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub shapes: ShapeAssignment,
    pub iterations: usize,
    /// Maximum multiplicative residual over gluing and completeness rows.
    pub residual: f64,
}

struct LogSystem {
    /// Integer exponent rows over the flat coordinates.
    rows: Vec<Vec<i64>>,
    /// 2 pi i multiples fixing the branch of each row.
    targets: Vec<Complex64>,
}

fn exponent_rows(sys: &GluingSystem, curves: &[&PeripheralCurve], complete: bool) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = (0..sys.a.nrows()).map(|r| sys.a.row_i64(r)).collect();
    if complete {
        for c in curves {
            rows.push(c.mu_vector.iter().map(|v| v.to_i64().unwrap()).collect());
        }
    }
    rows
}

fn log_value(row: &[i64], flat: &[Complex64]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (v, &e) in flat.iter().zip(row) {
        if e != 0 {
            s += (e as f64) * v.ln();
        }
    }
    s
}

/// d/dz_i of sum_k row[3i+k] * log z_i^{(k)} with companions substituted.
fn log_derivative(row: &[i64], i: usize, z: Complex64) -> Complex64 {
    let a = row[3 * i] as f64;
    let b = row[3 * i + 1] as f64;
    let c = row[3 * i + 2] as f64;
    a / z + b / (1.0 - z) + c / (z * (z - 1.0))
}

fn check_domain(zs: &[Complex64]) -> Result<(), GeometryError> {
    for &z in zs {
        if !z.is_finite() || z.norm() < 1e-13 || (z - 1.0).norm() < 1e-13 {
            return Err(GeometryError::Domain(format!(
                "shape {z} is degenerate (0, 1 or infinite)"
            )));
        }
    }
    Ok(())
}

/// Solve the small complex least-squares system J d = -F via the normal
/// equations J^H J d = -J^H F with Gaussian elimination.
fn least_squares_step(
    jac: &[Vec<Complex64>],
    f: &[Complex64],
) -> Result<Vec<Complex64>, GeometryError> {
    let rows = jac.len();
    let cols = jac.first().map_or(0, |r| r.len());
    let mut h = vec![vec![Complex64::new(0.0, 0.0); cols + 1]; cols];
    for i in 0..cols {
        for j in 0..cols {
            let mut s = Complex64::new(0.0, 0.0);
            for r in 0..rows {
                s += jac[r][i].conj() * jac[r][j];
            }
            h[i][j] = s;
        }
        let mut s = Complex64::new(0.0, 0.0);
        for r in 0..rows {
            s += jac[r][i].conj() * f[r];
        }
        h[i][cols] = -s;
    }
    // partial-pivot elimination
    let scale: f64 = h
        .iter()
        .flat_map(|r| r.iter().take(cols))
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    for col in 0..cols {
        let (piv, mag) = (col..cols)
            .map(|r| (r, h[r][col].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if mag < 1e-14 * scale.max(1e-300) {
            return Err(GeometryError::SingularJacobian);
        }
        h.swap(col, piv);
        let d = h[col][col];
        for c in col..=cols {
            h[col][c] /= d;
        }
        for r in 0..cols {
            if r != col {
                let f = h[r][col];
                if f.norm() > 0.0 {
                    for c in col..=cols {
                        let sub = f * h[col][c];
                        h[r][c] -= sub;
                    }
                }
            }
        }
    }
    Ok(h.iter().map(|r| r[cols]).collect())
}

fn newton_once(
    log_sys: &LogSystem,
    free: &[usize],
    start: &[Complex64],
    opts: &SolveOptions,
) -> Result<(Vec<Complex64>, usize), GeometryError> {
    let mut zs = start.to_vec();
    check_domain(&zs)?;
    for it in 0..opts.max_iterations {
        let shapes = ShapeAssignment::from_tet_shapes(&zs)
            .map_err(|e| GeometryError::Domain(e.to_string()))?;
        let flat = shapes.flat();
        let f: Vec<Complex64> = log_sys
            .rows
            .iter()
            .zip(&log_sys.targets)
            .map(|(row, t)| log_value(row, &flat) - t)
            .collect();
        let maxres = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if maxres < opts.tolerance * 0.1 {
            return Ok((zs, it));
        }
        let jac: Vec<Vec<Complex64>> = log_sys
            .rows
            .iter()
            .map(|row| {
                free.iter()
                    .map(|&i| log_derivative(row, i, zs[i]))
                    .collect()
            })
            .collect();
        let step = least_squares_step(&jac, &f)?;
        let limit = 0.5_f64;
        let norm = step.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let damp = if norm > limit { limit / norm } else { 1.0 };
        for (k, &i) in free.iter().enumerate() {
            zs[i] += damp * step[k];
        }
        check_domain(&zs)?;
    }
    Ok((zs, opts.max_iterations))
}

/// Numeric point of the deformation variety; with `complete` set, the
/// completeness equations mu(gamma) = 1 are imposed for all supplied curves.
pub fn solve(
    sys: &GluingSystem,
    curves: &[&PeripheralCurve],
    opts: &SolveOptions,
) -> Result<SolveOutcome, GeometryError> {
    let n = sys.tet_count();
    if !(opts.tolerance > 0.0) {
        return Err(GeometryError::Domain("tolerance must be positive".into()));
    }
    if opts.initial.len() != n {
        return Err(GeometryError::Domain(format!(
            "initial guess has {} entries for {} tetrahedra",
            opts.initial.len(),
            n
        )));
    }
    if opts.complete && curves.is_empty() {
        return Err(GeometryError::Domain(
            "completeness requested but no peripheral curves supplied".into(),
        ));
    }
    let rows = exponent_rows(sys, curves, opts.complete);
    let mut start = opts.initial.clone();
    for &(i, v) in &opts.fixed {
        if i >= n {
            return Err(GeometryError::Domain(format!(
                "fixed index {i} out of range"
            )));
        }
        start[i] = v;
    }
    let free: Vec<usize> = (0..n)
        .filter(|i| !opts.fixed.iter().any(|(j, _)| j == i))
        .collect();
    if free.is_empty() {
        return Err(GeometryError::Domain("all shapes are fixed".into()));
    }

    // branch targets from the start point
    check_domain(&start)?;
    let flat0 = ShapeAssignment::from_tet_shapes(&start)
        .map_err(|e| GeometryError::Domain(e.to_string()))?
        .flat();
    let targets: Vec<Complex64> = rows
        .iter()
        .map(|row| {
            let v = log_value(row, &flat0);
            Complex64::new(0.0, 2.0 * PI * (v.im / (2.0 * PI)).round())
        })
        .collect();
    let log_sys = LogSystem { rows, targets };

    let mut rng = ChaCha8Rng::seed_from_u64(0x7d0_5eed);
    let mut last_err: Option<GeometryError> = None;
    for attempt in 0..=opts.retries {
        let guess: Vec<Complex64> = if attempt == 0 {
            start.clone()
        } else {
            start
                .iter()
                .enumerate()
                .map(|(i, &z)| {
                    if opts.fixed.iter().any(|(j, _)| *j == i) {
                        z
                    } else {
                        let dr = 1.0 + 0.3 * (rng.gen::<f64>() - 0.5);
                        let di = 0.3 * (rng.gen::<f64>() - 0.5);
                        z * Complex64::new(dr, di)
                    }
                })
                .collect()
        };
        match newton_once(&log_sys, &free, &guess, opts) {
            Ok((zs, iters)) => {
                let shapes = match ShapeAssignment::from_tet_shapes(&zs) {
                    Ok(s) => s,
                    Err(e) => {
                        last_err = Some(GeometryError::Domain(e.to_string()));
                        continue;
                    }
                };
                // multiplicative certificate
                let residual = certified_residual(sys, curves, opts.complete, &shapes)?;
                if residual < opts.tolerance {
                    return Ok(SolveOutcome {
                        shapes,
                        iterations: iters,
                        residual,
                    });
                }
                last_err = Some(GeometryError::NoConvergence {
                    residual,
                    attempts: attempt + 1,
                });
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or(GeometryError::NoConvergence {
        residual: f64::NAN,
        attempts: 0,
    }))
}

/// Max of |monomial - 1| over gluing rows and, when requested, the
/// completeness values |mu(gamma) - 1|.
pub fn certified_residual(
    sys: &GluingSystem,
    curves: &[&PeripheralCurve],
    complete: bool,
    shapes: &ShapeAssignment,
) -> Result<f64, GeometryError> {
    let g = gluing_residuals(sys, shapes).map_err(|e| GeometryError::Domain(e.to_string()))?;
    let mut res = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if complete {
        for c in curves {
            let mu = super::holonomy_eval(shapes, c)?;
            res = res.max((mu - 1.0).norm());
        }
    }
    Ok(res)
}
