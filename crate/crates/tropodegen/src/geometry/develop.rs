//! Developing map: place one copy of each tetrahedron in H^3 through a
//! spanning tree of the face-pairing graph, and return the Moebius matrices
//! identifying the developed copies across non-tree faces. Composing those
//! matrices along a peripheral curve gives its holonomy representative.

use super::mobius::{cross_ratio, mobius_from_triples, BoundaryPoint, Mobius};
use super::GeometryError;
use crate::equations::{gluing_residuals, GluingSystem, ShapeAssignment};
use crate::triangulation::{IdealTriangulation, PeripheralCurve, TET_EDGES};
use num_complex::Complex64;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct Developed {
    /// Ideal vertex positions per tetrahedron.
    pub placements: Vec<[BoundaryPoint; 4]>,
    /// Face pairings used as tree edges (crossing them is the identity).
    pub tree_faces: Vec<(usize, usize)>,
    /// Determinant-one matrix per non-tree face (i, f): crossing from
    /// tetrahedron i through face f applies this matrix; the partner face
    /// carries the inverse.
    pub face_matrices: BTreeMap<(usize, usize), Mobius>,
}

/// Edge invariant of the placed tetrahedron on edge {a,b}: (v_a, v_b; v_c, v_d)
/// with (a,b,c,d) an even permutation.
pub fn placed_edge_invariant(pos: &[BoundaryPoint; 4], a: usize, b: usize) -> Complex64 {
    let rest: Vec<usize> = (0..4).filter(|&v| v != a && v != b).collect();
    let (c, d) = (rest[0], rest[1]);
    let arr = [a, b, c, d];
    let mut sign = 1i32;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if arr[i] > arr[j] {
                sign = -sign;
            }
        }
    }
    let (c, d) = if sign == 1 { (c, d) } else { (d, c) };
    cross_ratio(&pos[a], &pos[b], &pos[c], &pos[d])
}

/// Solve the position of vertex `missing` of a tetrahedron with shape triple
/// `shapes`, given the other three positions.
fn place_fourth(
    pos: &mut [BoundaryPoint; 4],
    missing: usize,
    shapes: &[Complex64; 3],
) -> Result<(), GeometryError> {
    let placed: Vec<usize> = (0..4).filter(|&v| v != missing).collect();
    // choose an even ordering (a,b,c,missing) and solve (a,b;c,d) = V for d
    let orders = [
        [placed[0], placed[1], placed[2]],
        [placed[0], placed[2], placed[1]],
    ];
    for [a, b, c] in orders {
        let arr = [a, b, c, missing];
        let mut sign = 1i32;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if arr[i] > arr[j] {
                    sign = -sign;
                }
            }
        }
        if sign != 1 {
            continue;
        }
        let label = crate::triangulation::edge_label(a, b);
        let v = shapes[label];
        let det = |p: &BoundaryPoint, q: &BoundaryPoint| p.0 * q.1 - p.1 * q.0;
        let dac = det(&pos[a], &pos[c]);
        if dac.norm() == 0.0 {
            return Err(GeometryError::Consistency(
                "coincident developed vertices".into(),
            ));
        }
        // (a,b;c,d) = V  <=>  det(b,d)/det(a,d) = V det(b,c)/det(a,c) =: W,
        // solved by d = b - W a in homogeneous coordinates
        let w = v * det(&pos[b], &pos[c]) / dac;
        pos[missing] = BoundaryPoint(pos[b].0 - w * pos[a].0, pos[b].1 - w * pos[a].1);
        return Ok(());
    }
    unreachable!("one of the two orderings is even")
}

/// Develop the triangulation at Z. The base tetrahedron is placed at
/// [0, 1, inf, *] with the fourth vertex determined by its shape; the rest
/// are placed across a breadth-first spanning tree of the face pairings.
pub fn develop(
    tri: &IdealTriangulation,
    sys: &GluingSystem,
    z: &ShapeAssignment,
) -> Result<Developed, GeometryError> {
    if z.tet_count() != tri.tet_count {
        return Err(GeometryError::Domain(format!(
            "shape assignment has {} tetrahedra, triangulation has {}",
            z.tet_count(),
            tri.tet_count
        )));
    }
    let g = gluing_residuals(sys, z).map_err(|e| GeometryError::Domain(e.to_string()))?;
    let worst = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if worst > 1e-8 {
        return Err(GeometryError::Consistency(format!(
            "input is off the deformation variety: max gluing residual {worst:.3e}"
        )));
    }

    let n = tri.tet_count;
    let mut placements: Vec<Option<[BoundaryPoint; 4]>> = vec![None; n];
    let mut base = [
        BoundaryPoint::finite(Complex64::new(0.0, 0.0)),
        BoundaryPoint::finite(Complex64::new(1.0, 0.0)),
        BoundaryPoint::infinity(),
        BoundaryPoint::infinity(), // placeholder
    ];
    place_fourth(&mut base, 3, &z.triples[0])?;
    placements[0] = Some(base);

    let mut tree_faces = Vec::new();
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for f in 0..4 {
            let g = &tri.gluings[i][f];
            let j = g.tet;
            if placements[j].is_some() {
                continue;
            }
            let src = placements[i].unwrap();
            let mut pos = [BoundaryPoint::infinity(); 4];
            for v in 0..4 {
                if v != f {
                    pos[g.perm.apply(v)] = src[v];
                }
            }
            place_fourth(&mut pos, g.perm.apply(f), &z.triples[j])?;
            placements[j] = Some(pos);
            tree_faces.push((i, f));
            tree_faces.push((j, g.perm.apply(f)));
            queue.push_back(j);
        }
    }

    let placements: Vec<[BoundaryPoint; 4]> = placements
        .into_iter()
        .map(|p| p.expect("connected"))
        .collect();

    // cross-ratio consistency of every developed copy
    for (i, pos) in placements.iter().enumerate() {
        for &(a, b) in &TET_EDGES {
            let label = crate::triangulation::edge_label(a, b);
            let got = placed_edge_invariant(pos, a, b);
            let want = z.triples[i][label];
            if !got.is_finite() || (got - want).norm() > 1e-8 * want.norm().max(1.0) {
                return Err(GeometryError::Consistency(format!(
                    "developed tetrahedron {i} edge ({a},{b}) has invariant {got}, expected {want}"
                )));
            }
        }
    }

    let mut face_matrices = BTreeMap::new();
    for i in 0..n {
        for f in 0..4 {
            if tree_faces.contains(&(i, f)) || face_matrices.contains_key(&(i, f)) {
                continue;
            }
            let g = &tri.gluings[i][f];
            let (j, gf) = (g.tet, g.perm.apply(f));
            let vs: Vec<usize> = (0..4).filter(|&v| v != f).collect();
            let src = [
                placements[j][g.perm.apply(vs[0])],
                placements[j][g.perm.apply(vs[1])],
                placements[j][g.perm.apply(vs[2])],
            ];
            let dst = [
                placements[i][vs[0]],
                placements[i][vs[1]],
                placements[i][vs[2]],
            ];
            let m = mobius_from_triples(&src, &dst)
                .map_err(|e| GeometryError::Consistency(e.to_string()))?;
            face_matrices.insert((i, f), m);
            face_matrices.insert((j, gf), m.inverse());
        }
    }

    Ok(Developed {
        placements,
        tree_faces,
        face_matrices,
    })
}

impl Developed {
    /// Holonomy representative of a peripheral curve: the product of the
    /// face matrices crossed along the path (tree faces contribute the
    /// identity). Projective: defined up to sign.
    pub fn curve_holonomy(&self, curve: &PeripheralCurve) -> Mobius {
        let mut acc = Mobius::identity();
        for step in &curve.steps {
            let key = (step.tri[0], step.exit);
            if let Some(m) = self.face_matrices.get(&key) {
                acc = acc.mul(m);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::build_gluing_system;
    use crate::fixtures;
    use crate::geometry::{holonomy_eval, trace_squared};

    fn on_variety(w: Complex64) -> ShapeAssignment {
        let c = 1.0 / (w * (1.0 - w));
        let z = (1.0 + (1.0 - 4.0 * c).sqrt()) / 2.0;
        ShapeAssignment::from_tet_shapes(&[w, z]).unwrap()
    }

    #[test]
    fn develop_reproduces_cross_ratios() {
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let z = on_variety(Complex64::new(0.35, 0.95));
        let d = develop(&t, &sys, &z).unwrap();
        assert_eq!(d.placements.len(), 2);
        for m in d.face_matrices.values() {
            assert!((m.det() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn meridian_face_word_has_holonomy_trace() {
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let z = on_variety(Complex64::new(0.42, 1.05));
        let d = develop(&t, &sys, &z).unwrap();
        for name in ["meridian", "longitude"] {
            let c = t.curve(name).unwrap();
            let m = d.curve_holonomy(c).normalized();
            let t2 = m.trace_squared();
            let want = trace_squared(&z, c).unwrap();
            assert!(
                (t2 - want).norm() < 1e-8 * want.norm().max(1.0),
                "{name}: {t2} vs {want}"
            );
            let mu = holonomy_eval(&z, c).unwrap();
            let _ = mu;
        }
    }

    #[test]
    fn face_matrices_carry_the_three_pairing_traces() {
        // with one tree face, the two tetrahedra form a fundamental domain
        // with three face pairings: two are conjugates of the meridian
        // (parabolic at the complete structure) and the third has
        // trace^2 = (1 - wz)^2
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let w = Complex64::new(0.44, 0.92);
        let z = on_variety(w);
        let zz = z.triples[1][0];
        let d = develop(&t, &sys, &z).unwrap();
        let mut traces: Vec<Complex64> = d
            .face_matrices
            .iter()
            .filter(|((i, _), _)| *i == 0)
            .map(|(_, m)| m.trace_squared())
            .collect();
        assert_eq!(traces.len(), 3);
        let tr2_a = (1.0 - w * zz) * (1.0 - w * zz);
        let tr2_m = trace_squared(&z, t.curve("meridian").unwrap()).unwrap();
        let pos = traces
            .iter()
            .position(|t2| (t2 - tr2_a).norm() < 1e-9)
            .expect("one pairing has the trace of the non-peripheral generator");
        traces.remove(pos);
        for t2 in traces {
            assert!((t2 - tr2_m).norm() < 1e-9, "{t2} vs {tr2_m}");
        }
    }

    #[test]
    fn off_variety_input_is_consistency_error() {
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let mut z = on_variety(Complex64::new(0.35, 0.95));
        z.triples[0][0] += Complex64::new(0.1, 0.0);
        match develop(&t, &sys, &z) {
            Err(GeometryError::Consistency(_)) => {}
            other => panic!("expected ConsistencyError, got {other:?}"),
        }
    }
}
