//! Spun-normal surface side: the nu functionals, boundary slopes,
//! non-triviality certificates, integral representatives, and dual-spine
//! combinatorics.

use crate::equations::GluingSystem;
use crate::exact::{gcd, Int, Rat};
use crate::triangulation::{IdealTriangulation, PeripheralCurve};
use crate::tropical::{QuadCoordinate, TropicalError};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("matching error: {0}")]
    Matching(String),
    #[error("missing basis error: {0}")]
    MissingBasis(String),
    #[error(transparent)]
    Admissibility(#[from] TropicalError),
}

fn check_matching(sys: &GluingSystem, n: &QuadCoordinate) -> Result<(), SurfaceError> {
    if n.coords().len() != sys.b.ncols() {
        return Err(SurfaceError::Matching(format!(
            "N has {} entries, system expects {}",
            n.coords().len(),
            sys.b.ncols()
        )));
    }
    let bn = sys.b.mul_vec_rat(n.coords());
    if let Some(row) = bn.iter().position(|x| !x.is_zero()) {
        return Err(SurfaceError::Matching(format!(
            "B N != 0 (Q-matching row {row}); nu would not be homotopy invariant"
        )));
    }
    Ok(())
}

/// nu_N(gamma) = nu-vector(gamma) · N. Requires BN = 0.
pub fn nu_evaluate(
    sys: &GluingSystem,
    n: &QuadCoordinate,
    gamma: &PeripheralCurve,
) -> Result<Rat, SurfaceError> {
    check_matching(sys, n)?;
    Ok(gamma
        .nu_vector
        .iter()
        .zip(n.coords())
        .map(|(c, x)| Rat::from_integer(c.clone()) * x)
        .fold(Rat::zero(), |a, b| a + b))
}

#[derive(Debug, Clone)]
pub struct CuspSlope {
    pub cusp: usize,
    pub nu_meridian: Rat,
    pub nu_longitude: Rat,
    /// -nu(L)/nu(M) when nu(M) != 0.
    pub slope: Option<Rat>,
}

impl CuspSlope {
    pub fn slope_string(&self) -> String {
        match &self.slope {
            Some(s) if s.denom().is_one() => s.numer().to_string(),
            Some(s) => s.to_string(),
            None => "undefined (foliation near cusp is T^2 x (0,1))".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SlopeReport {
    pub cusps: Vec<CuspSlope>,
    /// (-nu(L_1), nu(M_1), ..., -nu(L_h), nu(M_h)) scaled to a minimal
    /// integer vector by a positive factor.
    pub boundary_vector: Vec<Int>,
}

/// Boundary slopes of the surface with quad coordinate N, one (meridian,
/// longitude) pair per cusp.
pub fn boundary_slopes(
    sys: &GluingSystem,
    n: &QuadCoordinate,
    bases: &[(&PeripheralCurve, &PeripheralCurve)],
) -> Result<SlopeReport, SurfaceError> {
    check_matching(sys, n)?;
    if bases.is_empty() {
        return Err(SurfaceError::MissingBasis(
            "no (meridian, longitude) pair supplied".into(),
        ));
    }
    let mut cusps = Vec::new();
    let mut boundary = Vec::new();
    for (m, l) in bases {
        if m.cusp != l.cusp {
            return Err(SurfaceError::MissingBasis(format!(
                "basis pair mixes cusps {} and {}",
                m.cusp, l.cusp
            )));
        }
        let nm = nu_evaluate(sys, n, m)?;
        let nl = nu_evaluate(sys, n, l)?;
        let slope = if nm.is_zero() {
            None
        } else {
            Some(-nl.clone() / nm.clone())
        };
        boundary.push(-nl.clone());
        boundary.push(nm.clone());
        cusps.push(CuspSlope {
            cusp: m.cusp,
            nu_meridian: nm,
            nu_longitude: nl,
            slope,
        });
    }
    // positive scaling to a primitive integer vector
    let mut lcm = Int::one();
    for x in &boundary {
        let g = gcd(&lcm, x.denom());
        lcm = &lcm / g * x.denom();
    }
    let mut ints: Vec<Int> = boundary
        .iter()
        .map(|x| x.numer() * &lcm / x.denom())
        .collect();
    let mut g = Int::zero();
    for x in &ints {
        g = gcd(&g, x);
    }
    if !g.is_zero() {
        for x in &mut ints {
            *x = &*x / &g;
        }
    }
    Ok(SlopeReport {
        cusps,
        boundary_vector: ints,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CertifiedNontrivial,
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::CertifiedNontrivial => write!(f, "CERTIFIED_NONTRIVIAL"),
            Verdict::Undetermined => write!(f, "UNDETERMINED"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub verdict: Verdict,
    /// Name of a peripheral curve with nu_N != 0, when certified.
    pub witness: Option<String>,
}

/// Sufficient criterion for a non-trivial action: some peripheral curve has
/// nu_N != 0. The converse direction is open, so nu == 0 on all supplied
/// curves yields UNDETERMINED.
pub fn nontriviality_certificate(
    sys: &GluingSystem,
    n: &QuadCoordinate,
    curves: &[&PeripheralCurve],
) -> Result<Certificate, SurfaceError> {
    check_matching(sys, n)?;
    for c in curves {
        if !nu_evaluate(sys, n, c)?.is_zero() {
            return Ok(Certificate {
                verdict: Verdict::CertifiedNontrivial,
                witness: Some(c.name.clone()),
            });
        }
    }
    Ok(Certificate {
        verdict: Verdict::Undetermined,
        witness: None,
    })
}

#[derive(Debug, Clone)]
pub struct IntegralSurface {
    /// r1 N: the minimal positive scaling with integer entries of content 1.
    pub minimal: Vec<Int>,
    /// 2 r1 N, the other candidate for the 2-sided representative.
    pub doubled: Vec<Int>,
    /// Whether N was zero (empty surface).
    pub empty: bool,
}

/// Minimal integral representative of N, plus its double; which of the two is
/// the 2-sided surface is not decided here.
pub fn integral_surface(n: &QuadCoordinate) -> IntegralSurface {
    let minimal = n.minimal_integer();
    let doubled = minimal.iter().map(|x| x * 2).collect();
    IntegralSurface {
        empty: n.is_zero(),
        minimal,
        doubled,
    }
}

/// Per-face spine gluing case: the two quad families meet the face's Y on the
/// same end or on different ends. Degenerate when either side has no quads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpineGluingCase {
    SameSide,
    OppositeSide,
    Cone,
}

#[derive(Debug, Clone)]
pub struct SpineFace {
    pub face: (usize, usize),
    pub partner: (usize, usize),
    pub p: Rat,
    pub q: Rat,
    pub r: Rat,
    pub s: Rat,
    pub case: SpineGluingCase,
}

#[derive(Debug, Clone)]
pub struct SpineDescriptor {
    /// Interval length k per tetrahedron: the maximum quad coordinate.
    pub interval_lengths: Vec<Rat>,
    /// Half-line ends per tetrahedron are labeled by ideal vertices 0..4.
    pub end_labels: Vec<[usize; 4]>,
    pub faces: Vec<SpineFace>,
}

/// Ideal vertex of face (tet, f) cut off by the arcs of quad type `quad`.
fn cut_vertex(f: usize, quad: usize) -> usize {
    // face f contains exactly one edge of the quad's dual pair; the arc cuts
    // off the face vertex opposite that edge
    let pair: [(usize, usize); 2] = match quad {
        0 => [(0, 1), (2, 3)],
        1 => [(0, 2), (1, 3)],
        _ => [(0, 3), (1, 2)],
    };
    let edge = pair
        .iter()
        .find(|&&(a, b)| a != f && b != f)
        .expect("one edge of the pair avoids the face vertex");
    (0..4)
        .find(|&v| v != f && v != edge.0 && v != edge.1)
        .expect("face has a vertex off the edge")
}

/// Dual-spine data for N: interval lengths per tetrahedron and per-face
/// gluing parameters (r, s) with r = max{p,q} - min{p,q}, s = min{p,q}.
pub fn spine_descriptor(
    tri: &IdealTriangulation,
    n: &QuadCoordinate,
) -> Result<SpineDescriptor, SurfaceError> {
    if n.coords().len() != 3 * tri.tet_count {
        return Err(SurfaceError::Matching(format!(
            "N has {} entries for {} tetrahedra",
            n.coords().len(),
            tri.tet_count
        )));
    }
    if !n.is_admissible() {
        return Err(SurfaceError::Admissibility(TropicalError::Admissibility(
            "spine needs at most one quad type per tetrahedron".into(),
        )));
    }
    let quad_of = |i: usize| -> Option<(usize, Rat)> {
        (0..3)
            .find(|&k| !n.coords()[3 * i + k].is_zero())
            .map(|k| (k, n.coords()[3 * i + k].clone()))
    };
    let interval_lengths = (0..tri.tet_count)
        .map(|i| quad_of(i).map(|(_, v)| v).unwrap_or_else(Rat::zero))
        .collect();
    let end_labels = vec![[0, 1, 2, 3]; tri.tet_count];

    let mut faces = Vec::new();
    for i in 0..tri.tet_count {
        for f in 0..4 {
            let g = &tri.gluings[i][f];
            let partner = (g.tet, g.perm.apply(f));
            if partner < (i, f) {
                continue; // emit each unordered face pairing once
            }
            let qp = quad_of(i);
            let qq = quad_of(g.tet);
            let p = qp.clone().map(|(_, v)| v).unwrap_or_else(Rat::zero);
            let q = qq.clone().map(|(_, v)| v).unwrap_or_else(Rat::zero);
            let (r, s) = if p >= q {
                (p.clone() - q.clone(), q.clone())
            } else {
                (q.clone() - p.clone(), p.clone())
            };
            let case = match (qp, qq) {
                (Some((kp, _)), Some((kq, _))) => {
                    let vi = cut_vertex(f, kp);
                    let vj = cut_vertex(g.perm.apply(f), kq);
                    if g.perm.apply(vi) == vj {
                        SpineGluingCase::SameSide
                    } else {
                        SpineGluingCase::OppositeSide
                    }
                }
                _ => SpineGluingCase::Cone,
            };
            faces.push(SpineFace {
                face: (i, f),
                partner,
                p,
                q,
                r,
                s,
                case,
            });
        }
    }
    Ok(SpineDescriptor {
        interval_lengths,
        end_labels,
        faces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::build_gluing_system;
    use crate::exact::{int, rat};
    use crate::fixtures;
    use crate::triangulation::curve::{validate_curve, CurveSpec};

    fn table1() -> Vec<(Vec<i64>, i64, i64, i64)> {
        vec![
            (vec![2, 0, 0, 0, 0, 1], 1, 4, -4),
            (vec![0, 2, 0, 0, 0, 1], -1, 4, 4),
            (vec![0, 0, 1, 2, 0, 0], -1, -4, -4),
            (vec![0, 0, 1, 0, 2, 0], 1, -4, 4),
        ]
    }

    #[test]
    fn nu_on_table_rows() {
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let m = t.curve("meridian").unwrap();
        let l = t.curve("longitude").unwrap();
        for (row, nm, nl, _) in table1() {
            let n = QuadCoordinate::from_ints(&row);
            assert_eq!(
                nu_evaluate(&sys, &n, m).unwrap(),
                rat(nm),
                "nu(M) of {row:?}"
            );
            assert_eq!(
                nu_evaluate(&sys, &n, l).unwrap(),
                rat(nl),
                "nu(L) of {row:?}"
            );
        }
    }

    #[test]
    fn nu_requires_matching() {
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let m = t.curve("meridian").unwrap();
        let n = QuadCoordinate::from_ints(&[1, 0, 0, 0, 0, 0]);
        match nu_evaluate(&sys, &n, m) {
            Err(SurfaceError::Matching(_)) => {}
            other => panic!("expected MatchingError, got {other:?}"),
        }
    }

    #[test]
    fn nu_vanishes_on_contractible_paths() {
        // vertex links are null-homotopic on the torus: nu_N = 0 when BN = 0
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let c = &t.cusps[0];
        for (row, _, _, _) in table1() {
            let n = QuadCoordinate::from_ints(&row);
            for tri0 in &c.triangles {
                let spec = crate::triangulation::curve::vertex_link_path(
                    &t,
                    0,
                    tri0.id,
                    tri0.ccw_sides[0],
                );
                let link = validate_curve(&t, &spec).unwrap();
                assert_eq!(nu_evaluate(&sys, &n, &link).unwrap(), rat(0));
            }
        }
    }

    #[test]
    fn nu_is_additive_under_concatenation() {
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let m = t.curve("meridian").unwrap();
        // traverse the meridian twice: nu doubles
        let mut steps = m.steps.clone();
        steps.extend(m.steps.clone());
        let double = validate_curve(
            &t,
            &CurveSpec {
                cusp: 0,
                name: "mm".into(),
                path: steps,
            },
        )
        .unwrap();
        for (row, nm, _, _) in table1() {
            let n = QuadCoordinate::from_ints(&row);
            assert_eq!(nu_evaluate(&sys, &n, &double).unwrap(), rat(2 * nm));
        }
    }

    #[test]
    fn nu_scaling_equivariance() {
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let m = t.curve("meridian").unwrap();
        let n = QuadCoordinate::from_ints(&[2, 0, 0, 0, 0, 1]);
        let scaled =
            QuadCoordinate::new(n.coords().iter().map(|x| x * rat(3) / rat(2)).collect()).unwrap();
        let a = nu_evaluate(&sys, &n, m).unwrap();
        let b = nu_evaluate(&sys, &scaled, m).unwrap();
        assert_eq!(b, a * rat(3) / rat(2));
    }

    #[test]
    fn slopes_match_table() {
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let m = t.curve("meridian").unwrap();
        let l = t.curve("longitude").unwrap();
        for (row, _, _, slope) in table1() {
            let n = QuadCoordinate::from_ints(&row);
            let rep = boundary_slopes(&sys, &n, &[(m, l)]).unwrap();
            assert_eq!(rep.cusps[0].slope, Some(rat(slope)), "slope of {row:?}");
        }
    }

    #[test]
    fn undefined_slope_reports_product_foliation() {
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let m = t.curve("meridian").unwrap();
        let l = t.curve("longitude").unwrap();
        let n = QuadCoordinate::from_ints(&[0; 6]);
        let rep = boundary_slopes(&sys, &n, &[(m, l)]).unwrap();
        assert_eq!(rep.cusps[0].slope, None);
        assert!(rep.cusps[0].slope_string().contains("T^2 x (0,1)"));
    }

    #[test]
    fn boundary_vector_is_projectivized() {
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let m = t.curve("meridian").unwrap();
        let l = t.curve("longitude").unwrap();
        let n = QuadCoordinate::from_ints(&[2, 0, 0, 0, 0, 1]);
        let rep = boundary_slopes(&sys, &n, &[(m, l)]).unwrap();
        assert_eq!(rep.boundary_vector, vec![int(-4), int(1)]);
        // doubling N scales nu but not the projectivized vector
        let n2 = QuadCoordinate::from_ints(&[4, 0, 0, 0, 0, 2]);
        let rep2 = boundary_slopes(&sys, &n2, &[(m, l)]).unwrap();
        assert_eq!(rep2.boundary_vector, rep.boundary_vector);
    }

    #[test]
    fn certificates_on_table_rows() {
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let m = t.curve("meridian").unwrap();
        let l = t.curve("longitude").unwrap();
        for (row, _, _, _) in table1() {
            let n = QuadCoordinate::from_ints(&row);
            let cert = nontriviality_certificate(&sys, &n, &[m, l]).unwrap();
            assert_eq!(cert.verdict, Verdict::CertifiedNontrivial);
            assert_eq!(cert.witness.as_deref(), Some("meridian"));
        }
    }

    #[test]
    fn zero_nu_is_undetermined() {
        let t = fixtures::fig8();
        let sys = build_gluing_system(&t);
        let m = t.curve("meridian").unwrap();
        let l = t.curve("longitude").unwrap();
        let n = QuadCoordinate::from_ints(&[0; 6]);
        let cert = nontriviality_certificate(&sys, &n, &[m, l]).unwrap();
        assert_eq!(cert.verdict, Verdict::Undetermined);
    }

    #[test]
    fn integral_surface_scales_minimally() {
        let n = QuadCoordinate::new(vec![
            rat(0),
            rat(1),
            rat(0),
            rat(0),
            rat(0),
            Rat::new(int(1), int(2)),
        ])
        .unwrap();
        let s = integral_surface(&n);
        assert_eq!(
            s.minimal,
            vec![int(0), int(2), int(0), int(0), int(0), int(1)]
        );
        assert_eq!(
            s.doubled,
            vec![int(0), int(4), int(0), int(0), int(0), int(2)]
        );
        let already = QuadCoordinate::from_ints(&[2, 0, 0, 0, 0, 1]);
        assert_eq!(
            integral_surface(&already).minimal,
            vec![int(2), int(0), int(0), int(0), int(0), int(1)]
        );
        let zero = QuadCoordinate::from_ints(&[0; 6]);
        assert!(integral_surface(&zero).empty);
    }

    #[test]
    fn spine_interval_lengths() {
        let t = fixtures::fig8();
        let n = QuadCoordinate::from_ints(&[0, 2, 0, 0, 0, 1]);
        let d = spine_descriptor(&t, &n).unwrap();
        assert_eq!(d.interval_lengths, vec![rat(2), rat(1)]);
        for face in &d.faces {
            // r = max - min, s = min with p, q in {2, 1}
            assert_eq!(face.r, rat(1));
            assert_eq!(face.s, rat(1));
            assert_ne!(face.case, SpineGluingCase::Cone);
        }
    }

    #[test]
    fn zero_n_gives_cone_gluings() {
        let t = fixtures::fig8();
        let n = QuadCoordinate::from_ints(&[0; 6]);
        let d = spine_descriptor(&t, &n).unwrap();
        assert!(d.interval_lengths.iter().all(|k| k.is_zero()));
        assert!(d.faces.iter().all(|f| f.case == SpineGluingCase::Cone));
    }

    #[test]
    fn face_parameters_r_s() {
        // p=3, q=1 -> (r,s) = (2,1), whatever the face
        let t = fixtures::fig8();
        let n = QuadCoordinate::new(vec![rat(3), rat(0), rat(0), rat(0), rat(1), rat(0)]).unwrap();
        let d = spine_descriptor(&t, &n).unwrap();
        for face in &d.faces {
            assert_eq!(face.r, rat(2));
            assert_eq!(face.s, rat(1));
        }
    }

    #[test]
    fn inadmissible_n_rejected_by_spine() {
        let t = fixtures::fig8();
        let n = QuadCoordinate::from_ints(&[1, 1, 0, 0, 0, 0]);
        assert!(matches!(
            spine_descriptor(&t, &n),
            Err(SurfaceError::Admissibility(_))
        ));
    }
}
