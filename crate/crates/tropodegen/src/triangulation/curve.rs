//! Peripheral curves as transverse paths on a cusp triangulation, and their
//! holonomy exponent vector mu and Q-modulus coefficient vector nu.
//!
//! A step crosses one triangle, entering through side `in` and exiting
//! through side `out`; the corner shared by the two sides is cut off. Cutting
//! the corner off on the right contributes the inverse of the corner modulus
//! to mu (a z'-corner cut on the right enters as the modulus 1-z, which is
//! the monomial 1/z'); cutting on the left contributes the modulus itself.
//! This is the similarity-structure holonomy: developing the cusp triangles
//! along the path multiplies the edge vectors by exactly these factors. nu
//! takes the corner's Q-modulus (z -> q''-q', z' -> q-q'', z'' -> q'-q) with
//! the same sign, so nu = mu C_n^T holds step by step.

use super::cusp::TriangleId;
use super::IdealTriangulation;
use crate::exact::{c_n, row_vec_mul, Int};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("path error: {0}")]
pub struct PathError(pub String);

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
pub struct PathStep {
    /// (tetrahedron, ideal vertex) naming the cusp triangle.
    pub tri: [usize; 2],
    /// Entry side (the tetrahedron face crossed to enter).
    #[serde(rename = "in")]
    pub entry: usize,
    /// Exit side.
    #[serde(rename = "out")]
    pub exit: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CurveSpec {
    pub cusp: usize,
    pub name: String,
    pub path: Vec<PathStep>,
}

#[derive(Debug, Clone)]
pub struct PeripheralCurve {
    pub cusp: usize,
    pub name: String,
    pub steps: Vec<PathStep>,
    /// Number of 1-simplices traversed.
    pub length: usize,
    /// Exponents of the holonomy monomial in (z_1, z'_1, z''_1, ...).
    pub mu_vector: Vec<Int>,
    /// Coefficients of nu on (q_1, q'_1, q''_1, ...).
    pub nu_vector: Vec<Int>,
}

impl PeripheralCurve {
    /// Parity bit (-1)^{|gamma|} of the path length.
    pub fn sign(&self) -> i64 {
        if self.length % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Per-step cut corner and its exponent: (+1 cut on the left, -1 on the
/// right). The cut corner is the one shared by the entry and exit sides; it
/// lies to the right exactly when the exit side is the counterclockwise
/// successor of the entry side.
pub fn step_cut(tri: &IdealTriangulation, step: &PathStep) -> Result<(usize, i64), PathError> {
    let [tet, v] = step.tri;
    if tet >= tri.tet_count || v > 3 {
        return Err(PathError(format!(
            "step references nonexistent triangle ({tet},{v})"
        )));
    }
    let sides = super::cusp::ccw_sides(v);
    let (a, b) = (step.entry, step.exit);
    if a == b || !sides.contains(&a) || !sides.contains(&b) {
        return Err(PathError(format!(
            "step through ({tet},{v}) has invalid sides in={a} out={b}"
        )));
    }
    let cut = *sides.iter().find(|&&u| u != a && u != b).unwrap();
    let ia = sides.iter().position(|&u| u == a).unwrap();
    let eps = if sides[(ia + 1) % 3] == b { -1 } else { 1 };
    Ok((cut, eps))
}

/// Validate a closed transverse path and derive its mu and nu vectors.
pub fn validate_curve(
    tri: &IdealTriangulation,
    spec: &CurveSpec,
) -> Result<PeripheralCurve, PathError> {
    if spec.path.is_empty() {
        return Err(PathError("empty path".into()));
    }
    if spec.cusp >= tri.cusps.len() {
        return Err(PathError(format!("cusp {} does not exist", spec.cusp)));
    }
    let n = tri.tet_count;
    let mut mu = vec![Int::from(0); 3 * n];
    let mut nu = vec![Int::from(0); 3 * n];

    for (k, step) in spec.path.iter().enumerate() {
        let [tet, v] = step.tri;
        let (cut, eps) = step_cut(tri, step)?;
        if tri.cusp_of[tet][v] != spec.cusp {
            return Err(PathError(format!(
                "triangle ({tet},{v}) lies on cusp {}, not {}",
                tri.cusp_of[tet][v], spec.cusp
            )));
        }
        // adjacency with the next step
        let next = &spec.path[(k + 1) % spec.path.len()];
        let g = &tri.gluings[tet][step.exit];
        let expect_tri = [g.tet, g.perm.apply(v)];
        let expect_entry = g.perm.apply(step.exit);
        if next.tri != expect_tri || next.entry != expect_entry {
            return Err(PathError(format!(
                "step {k} exits into triangle ({},{}) side {} but step {} is ({},{}) side {}",
                expect_tri[0],
                expect_tri[1],
                expect_entry,
                (k + 1) % spec.path.len(),
                next.tri[0],
                next.tri[1],
                next.entry
            )));
        }
        let label = super::edge_label(v, cut);
        mu[3 * tet + label] += eps;
        // Q-modulus of the cut corner: label l contributes q^{(l+2)} - q^{(l+1)}
        nu[3 * tet + (label + 2) % 3] += eps;
        nu[3 * tet + (label + 1) % 3] -= eps;
    }

    Ok(PeripheralCurve {
        cusp: spec.cusp,
        name: spec.name.clone(),
        steps: spec.path.clone(),
        length: spec.path.len(),
        mu_vector: mu,
        nu_vector: nu,
    })
}

/// nu computed the other way, through Lemma nu&mu: mu * C_n^T.
pub fn nu_from_mu(mu: &[Int]) -> Vec<Int> {
    let n = mu.len() / 3;
    row_vec_mul(mu, &c_n(n).transpose())
}

/// Closed path encircling the cusp-triangulation vertex adjacent to corner
/// (tri0, corner) once, counterclockwise. Used by tests and by the built-in
/// homotopy-invariance checks: its nu vector is minus the B row of the
/// vertex's edge class.
pub fn vertex_link_path(
    tri: &IdealTriangulation,
    cusp: usize,
    tri0: TriangleId,
    corner: usize,
) -> CurveSpec {
    let c = &tri.cusps[cusp];
    let mut steps = Vec::new();
    let mut cur = tri0;
    let mut cur_corner = corner;
    // cut the corner off on the left at every step (exit through the
    // ccw-predecessor of the entry side), giving a counterclockwise loop
    loop {
        let sides = super::cusp::ccw_sides(cur.vertex);
        let ci = sides.iter().position(|&u| u == cur_corner).unwrap();
        let entry = sides[(ci + 2) % 3];
        let exit = sides[(ci + 1) % 3];
        steps.push(PathStep {
            tri: [cur.tet, cur.vertex],
            entry,
            exit,
        });
        let (next, next_entry) = c.neighbor(cur, exit);
        // the corner follows the gluing
        let g = &tri.gluings[cur.tet][exit];
        cur_corner = g.perm.apply(cur_corner);
        cur = next;
        let _ = next_entry;
        if cur == tri0 && cur_corner == corner {
            break;
        }
    }
    CurveSpec {
        cusp,
        name: "vertex-link".into(),
        path: steps,
    }
}

/// Best-effort search for two homologically independent closed curves on a
/// cusp: enumerate closed transverse paths by increasing length and keep the
/// first two whose mu vectors are independent modulo the row space of the
/// exponent matrix (vertex links and other null-homotopic paths have mu in
/// that row space). No canonicality or basis property is promised.
pub fn search_cusp_curves(
    tri: &IdealTriangulation,
    cusp: usize,
    max_len: usize,
) -> Vec<PeripheralCurve> {
    use crate::exact::{row_space, Rat};
    use num_traits::Zero;

    let a_rows: Vec<Vec<i64>> = tri
        .edge_classes
        .iter()
        .map(|c| c.label_counts.clone())
        .collect();
    let rowspace = row_space(&crate::exact::IntMat::from_rows(&a_rows));
    let reduced = |mu: &[Int]| -> Vec<Rat> {
        let v: Vec<Rat> = mu.iter().map(|x| Rat::from_integer(x.clone())).collect();
        rowspace.reduce(&v)
    };
    let parallel = |u: &[Rat], v: &[Rat]| -> bool {
        // u, v nonzero: parallel iff u_i v_j = u_j v_i for all i < j
        for i in 0..u.len() {
            for j in (i + 1)..u.len() {
                if &u[i] * &v[j] != &u[j] * &v[i] {
                    return false;
                }
            }
        }
        true
    };

    let c = &tri.cusps[cusp];
    let mut found: Vec<(PeripheralCurve, Vec<Rat>)> = Vec::new();
    for len in 2..=max_len {
        let mut starts: Vec<(super::cusp::TriangleId, usize)> = Vec::new();
        for t in &c.triangles {
            for f in 0..4 {
                if f != t.id.vertex {
                    starts.push((t.id, f));
                }
            }
        }
        for start in starts {
            let mut stack = vec![(start, Vec::new())];
            while let Some(((tid, entry), steps)) = stack.pop() {
                if steps.len() == len {
                    continue;
                }
                for exit in 0..4 {
                    if exit == tid.vertex || exit == entry {
                        continue;
                    }
                    let mut next_steps = steps.clone();
                    next_steps.push(PathStep {
                        tri: [tid.tet, tid.vertex],
                        entry,
                        exit,
                    });
                    let nxt = c.neighbor(tid, exit);
                    if nxt == start && next_steps.len() == len {
                        let spec = CurveSpec {
                            cusp,
                            name: format!("auto-{}", found.len() + 1),
                            path: next_steps.clone(),
                        };
                        if let Ok(curve) = validate_curve(tri, &spec) {
                            let red = reduced(&curve.mu_vector);
                            if red.iter().all(|x| x.is_zero()) {
                                continue;
                            }
                            let independent = found.iter().all(|(_, other)| !parallel(&red, other));
                            if independent {
                                found.push((curve, red));
                                if found.len() == 2 {
                                    return found.into_iter().map(|(c, _)| c).collect();
                                }
                            }
                        }
                    } else if nxt != start {
                        stack.push((nxt, next_steps));
                    }
                }
            }
        }
    }
    found.into_iter().map(|(c, _)| c).collect()
}
