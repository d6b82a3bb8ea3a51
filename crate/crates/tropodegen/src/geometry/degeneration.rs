//! Degeneration tracking: normalized logarithm vectors u(Z) log|Z| along a
//! path of deformation-variety points, and their convergence toward candidate
//! tropical ideal points.

use super::GeometryError;
use crate::equations::{gluing_residuals, GluingSystem, ShapeAssignment};
use crate::tropical::TropicalPoint;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct DegenerationSample {
    /// Path parameter (sample index when the path carries no parameter).
    pub parameter: f64,
    pub shapes: ShapeAssignment,
    /// u(Z) = 1 / sqrt(1 + sum log^2 |z|).
    pub u: f64,
    /// u(Z) * log|Z|, norm <= 1.
    pub normalized_log: Vec<f64>,
    /// Euclidean distance to each candidate's unit representative.
    pub distances: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DegenerationVerdict {
    /// Index of the candidate with final distance below threshold and
    /// strictly decreasing distances over the monotonicity window.
    Converged {
        candidate: usize,
        final_distance: f64,
    },
    None,
}

#[derive(Debug, Clone)]
pub struct DegenerationOptions {
    /// Gluing-residual bound for accepting samples as on-variety.
    pub variety_tolerance: f64,
    /// Final-distance threshold for the verdict.
    pub distance_threshold: f64,
    /// Number of trailing samples over which the distance must strictly
    /// decrease.
    pub window: usize,
}

impl Default for DegenerationOptions {
    fn default() -> Self {
        Self {
            variety_tolerance: 1e-9,
            distance_threshold: 1e-3,
            window: 5,
        }
    }
}

pub fn normalized_log_vector(z: &ShapeAssignment) -> (f64, Vec<f64>) {
    let logs: Vec<f64> = z.flat().iter().map(|v| v.norm().ln()).collect();
    let u = 1.0 / (1.0 + logs.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let vec = logs.iter().map(|x| u * x).collect();
    (u, vec)
}

/// Evaluate the path against the candidates, checking each sample is on the
/// deformation variety to tolerance.
pub fn track_degeneration(
    sys: &GluingSystem,
    path: &[(f64, ShapeAssignment)],
    candidates: &[TropicalPoint],
    opts: &DegenerationOptions,
) -> Result<(Vec<DegenerationSample>, DegenerationVerdict), GeometryError> {
    let unit: Vec<Vec<f64>> = candidates.iter().map(|c| c.normalized()).collect();
    let mut samples = Vec::with_capacity(path.len());
    for (param, z) in path {
        let g = gluing_residuals(sys, z).map_err(|e| GeometryError::Domain(e.to_string()))?;
        let worst = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if worst > opts.variety_tolerance {
            return Err(GeometryError::Domain(format!(
                "path sample at parameter {param} is off the variety (residual {worst:.3e})"
            )));
        }
        let (u, vec) = normalized_log_vector(z);
        let distances = unit
            .iter()
            .map(|c| {
                vec.iter()
                    .zip(c)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        samples.push(DegenerationSample {
            parameter: *param,
            shapes: z.clone(),
            u,
            normalized_log: vec,
            distances,
        });
    }

    let verdict = decide(&samples, opts);
    Ok((samples, verdict))
}

fn decide(samples: &[DegenerationSample], opts: &DegenerationOptions) -> DegenerationVerdict {
    if samples.len() <= opts.window || samples.is_empty() {
        return DegenerationVerdict::None;
    }
    let ncand = samples[0].distances.len();
    let last = samples.len() - 1;
    let mut best: Option<(usize, f64)> = None;
    for c in 0..ncand {
        let fin = samples[last].distances[c];
        if fin >= opts.distance_threshold {
            continue;
        }
        let monotone = (last - opts.window..last)
            .all(|k| samples[k + 1].distances[c] < samples[k].distances[c]);
        if monotone && best.map_or(true, |(_, d)| fin < d) {
            best = Some((c, fin));
        }
    }
    match best {
        Some((candidate, final_distance)) => DegenerationVerdict::Converged {
            candidate,
            final_distance,
        },
        None => DegenerationVerdict::None,
    }
}

/// The figure-eight degeneration path toward the ideal point with quad
/// coordinate (0,2,0,0,0,1): w(r) = r^2 w_0 with w_0 the complete shape, z
/// the positive-root solution of z(1-z)w(1-w) = 1, sampled at r = 2^-1 ..
/// 2^-samples.
pub fn fig8_builtin_path(samples: usize) -> Vec<(f64, ShapeAssignment)> {
    let w0 = Complex64::new(0.5, 3f64.sqrt() / 2.0);
    (1..=samples)
        .map(|e| {
            let r = 2f64.powi(-(e as i32));
            let w = r * r * w0;
            let c = 1.0 / (w * (1.0 - w));
            let z = (1.0 + (1.0 - 4.0 * c).sqrt()) / 2.0;
            (
                r,
                ShapeAssignment::from_tet_shapes(&[w, z]).expect("path stays nondegenerate"),
            )
        })
        .collect()
}
