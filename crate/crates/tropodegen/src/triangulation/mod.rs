//! Ideal triangulations: face-pairing data model, JSON parser, derived edge
//! classes and cusp (vertex-link) triangulations.
//!
//! Conventions fixed throughout the crate:
//! - tetrahedron vertices are 0..4, face `f` is the face opposite vertex `f`;
//! - edge labels: `z` on {01} and {23}, `z'` on {02} and {13}, `z''` on {03}
//!   and {12} (label indices 0, 1, 2);
//! - a positively oriented tetrahedron is one whose vertex order agrees with
//!   an even permutation of (0,1,2,3); a coherently oriented triangulation has
//!   all face-pairing permutations odd.

pub mod curve;
pub mod cusp;

use serde::Deserialize;
use std::collections::BTreeMap;
use thiserror::Error;

pub use curve::{CurveSpec, PathError, PathStep, PeripheralCurve};
pub use cusp::CuspTriangulation;

/// Edge order within a tetrahedron, also used for deterministic ids.
pub const TET_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Shape label (0 = z, 1 = z', 2 = z'') of a tetrahedron edge.
pub fn edge_label(a: usize, b: usize) -> usize {
    match (a.min(b), a.max(b)) {
        (0, 1) | (2, 3) => 0,
        (0, 2) | (1, 3) => 1,
        (0, 3) | (1, 2) => 2,
        _ => panic!("not an edge: ({a},{b})"),
    }
}

#[derive(Debug, Error)]
pub enum TriangulationError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("gluing error: {0}")]
    Gluing(String),
    #[error("orientability error: {0}")]
    Orientability(String),
    #[error("topology error: {0}")]
    Topology(String),
}

/// A vertex permutation of {0,1,2,3}, stored as the image tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub struct Perm(pub [usize; 4]);

impl Perm {
    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = [0usize; 4];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Perm(inv)
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = [false; 4];
        for &v in &self.0 {
            if v > 3 || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    /// +1 for even permutations, -1 for odd.
    pub fn sign(&self) -> i32 {
        let p = self.0;
        let mut s = 1;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if p[i] > p[j] {
                    s = -s;
                }
            }
        }
        s
    }
}

/// One face pairing: face `f` of some tetrahedron is glued to tetrahedron
/// `tet` under the vertex correspondence `perm`.
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm,
}

/// One member incidence of an edge class: (tetrahedron, edge endpoints, label).
pub type EdgeIncidence = (usize, (usize, usize), usize);

#[derive(Debug, Clone)]
pub struct EdgeClass {
    pub id: usize,
    pub members: Vec<EdgeIncidence>,
    pub degree: usize,
    /// Label counts (a, a', a'') per tetrahedron; this is the class's row of
    /// the exponent matrix A.
    pub label_counts: Vec<i64>,
}

#[derive(Debug, Deserialize)]
struct RawDoc {
    tetrahedra: usize,
    #[serde(default)]
    names: Option<Vec<String>>,
    #[serde(default)]
    quad_names: Option<Vec<String>>,
    gluings: Vec<Vec<Gluing>>,
    #[serde(default)]
    peripheral_curves: Vec<CurveSpec>,
}

#[derive(Debug, Clone)]
pub struct IdealTriangulation {
    pub tet_count: usize,
    /// `gluings[i][f]` pairs face f of tetrahedron i.
    pub gluings: Vec<[Gluing; 4]>,
    pub edge_classes: Vec<EdgeClass>,
    /// `edge_class_of[i][edge index into TET_EDGES]` = edge class id.
    pub edge_class_of: Vec<[usize; 6]>,
    pub cusps: Vec<CuspTriangulation>,
    /// `cusp_of[i][v]` = cusp id of the ideal vertex v of tetrahedron i.
    pub cusp_of: Vec<[usize; 4]>,
    /// Display names for the shape variables, default z1..zn.
    pub shape_names: Vec<String>,
    /// Display names for the quad variables, default q1..qn.
    pub quad_names: Vec<String>,
    pub curves: Vec<PeripheralCurve>,
}

/// Parse and validate a triangulation document.
pub fn parse_triangulation(text: &str) -> Result<IdealTriangulation, TriangulationError> {
    let raw: RawDoc =
        serde_json::from_str(text).map_err(|e| TriangulationError::Schema(e.to_string()))?;
    let n = raw.tetrahedra;
    if n == 0 {
        return Err(TriangulationError::Schema(
            "tetrahedra must be positive".into(),
        ));
    }
    if raw.gluings.len() != n {
        return Err(TriangulationError::Schema(format!(
            "expected {n} gluing rows, got {}",
            raw.gluings.len()
        )));
    }
    let mut gluings = Vec::with_capacity(n);
    for (i, row) in raw.gluings.iter().enumerate() {
        if row.len() != 4 {
            return Err(TriangulationError::Schema(format!(
                "tetrahedron {i} must list 4 face gluings"
            )));
        }
        for (f, g) in row.iter().enumerate() {
            if g.tet >= n {
                return Err(TriangulationError::Schema(format!(
                    "face ({i},{f}) glued to nonexistent tetrahedron {}",
                    g.tet
                )));
            }
            if !g.perm.is_valid() {
                return Err(TriangulationError::Schema(format!(
                    "face ({i},{f}) has invalid permutation {:?}",
                    g.perm.0
                )));
            }
        }
        gluings.push([row[0], row[1], row[2], row[3]]);
    }

    validate_pairings(&gluings)?;
    let orientation = coherent_orientation(&gluings)?;
    let gluings = normalize_orientation(gluings, &orientation);

    let (edge_classes, edge_class_of) = derive_edge_classes(&gluings, n);
    let (cusps, cusp_of) = cusp::build_cusps(&gluings, n)?;

    // |Sigma^1| = |Sigma^3| whenever every vertex link is a torus.
    if cusps.iter().all(|c| c.genus() == 1) && edge_classes.len() != n {
        return Err(TriangulationError::Topology(format!(
            "all links are tori but found {} edge classes for {} tetrahedra",
            edge_classes.len(),
            n
        )));
    }

    let shape_names = match raw.names {
        Some(v) if v.len() == n => v,
        Some(_) => {
            return Err(TriangulationError::Schema(
                "names must list one entry per tetrahedron".into(),
            ))
        }
        None => (1..=n).map(|i| format!("z{i}")).collect(),
    };
    let quad_names = match raw.quad_names {
        Some(v) if v.len() == n => v,
        Some(_) => {
            return Err(TriangulationError::Schema(
                "quad_names must list one entry per tetrahedron".into(),
            ))
        }
        None => (1..=n).map(|i| format!("q{i}")).collect(),
    };

    let mut tri = IdealTriangulation {
        tet_count: n,
        gluings,
        edge_classes,
        edge_class_of,
        cusps,
        cusp_of,
        shape_names,
        quad_names,
        curves: Vec::new(),
    };
    let mut curves = Vec::new();
    for spec in &raw.peripheral_curves {
        curves.push(
            curve::validate_curve(&tri, spec)
                .map_err(|e| TriangulationError::Schema(format!("curve {:?}: {e}", spec.name)))?,
        );
    }
    tri.curves = curves;
    Ok(tri)
}

fn validate_pairings(gluings: &[[Gluing; 4]]) -> Result<(), TriangulationError> {
    for (i, row) in gluings.iter().enumerate() {
        for (f, g) in row.iter().enumerate() {
            let j = g.tet;
            let gf = g.perm.apply(f);
            if j == i && gf == f {
                return Err(TriangulationError::Gluing(format!(
                    "face ({i},{f}) is glued to itself"
                )));
            }
            let back = &gluings[j][gf];
            if back.tet != i || back.perm.0 != g.perm.inverse().0 || back.perm.apply(gf) != f {
                return Err(TriangulationError::Gluing(format!(
                    "face ({i},{f}) -> ({j},{gf}) is not matched by an inverse pairing"
                )));
            }
        }
    }
    Ok(())
}

/// Assign +-1 to each tetrahedron so that every pairing satisfies
/// sigma_i * sigma_j * sign(perm) = -1, or report failure.
fn coherent_orientation(gluings: &[[Gluing; 4]]) -> Result<Vec<i32>, TriangulationError> {
    let n = gluings.len();
    let mut sigma = vec![0i32; n];
    for start in 0..n {
        if sigma[start] != 0 {
            continue;
        }
        sigma[start] = 1;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for g in &gluings[i] {
                let want = -sigma[i] * g.perm.sign();
                if sigma[g.tet] == 0 {
                    sigma[g.tet] = want;
                    stack.push(g.tet);
                } else if sigma[g.tet] != want {
                    return Err(TriangulationError::Orientability(
                        "no coherent orientation exists".into(),
                    ));
                }
            }
        }
    }
    Ok(sigma)
}

/// Relabel vertices (swap 2 and 3) of negatively oriented tetrahedra so that
/// afterwards every tetrahedron is positively oriented. The swap exchanges the
/// z' and z'' edges of the relabeled tetrahedron.
fn normalize_orientation(mut gluings: Vec<[Gluing; 4]>, sigma: &[i32]) -> Vec<[Gluing; 4]> {
    if sigma.iter().all(|&s| s == 1) {
        return gluings;
    }
    let swap = |v: usize| -> usize {
        match v {
            2 => 3,
            3 => 2,
            v => v,
        }
    };
    let old = gluings.clone();
    for i in 0..gluings.len() {
        for f in 0..4 {
            let src_face = if sigma[i] == -1 { swap(f) } else { f };
            let g = old[i][src_face];
            let mut perm = [0usize; 4];
            for v in 0..4 {
                let pre = if sigma[i] == -1 { swap(v) } else { v };
                let img = g.perm.apply(pre);
                perm[v] = if sigma[g.tet] == -1 { swap(img) } else { img };
            }
            gluings[i][f] = Gluing {
                tet: g.tet,
                perm: Perm(perm),
            };
        }
    }
    gluings
}

fn derive_edge_classes(gluings: &[[Gluing; 4]], n: usize) -> (Vec<EdgeClass>, Vec<[usize; 6]>) {
    let eidx = |a: usize, b: usize| -> usize {
        TET_EDGES
            .iter()
            .position(|&(x, y)| (x, y) == (a.min(b), a.max(b)))
            .unwrap()
    };
    let mut parent: Vec<usize> = (0..6 * n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, row) in gluings.iter().enumerate() {
        for (f, g) in row.iter().enumerate() {
            for &(a, b) in &TET_EDGES {
                if a == f || b == f {
                    continue;
                }
                let x = find(&mut parent, i * 6 + eidx(a, b));
                let y = find(
                    &mut parent,
                    g.tet * 6 + eidx(g.perm.apply(a), g.perm.apply(b)),
                );
                if x != y {
                    parent[x] = y;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<EdgeIncidence>> = BTreeMap::new();
    for i in 0..n {
        for (k, &(a, b)) in TET_EDGES.iter().enumerate() {
            let root = find(&mut parent, i * 6 + k);
            groups
                .entry(root)
                .or_default()
                .push((i, (a, b), edge_label(a, b)));
        }
    }
    // canonical order: by label-count row (lex ascending), then first appearance
    let mut classes: Vec<(Vec<i64>, usize, Vec<EdgeIncidence>)> = groups
        .into_values()
        .map(|members| {
            let mut counts = vec![0i64; 3 * n];
            let mut first = usize::MAX;
            for &(i, (a, b), l) in &members {
                counts[3 * i + l] += 1;
                first = first.min(i * 6 + eidx(a, b));
            }
            (counts, first, members)
        })
        .collect();
    classes.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));

    let mut edge_class_of = vec![[usize::MAX; 6]; n];
    let mut out = Vec::new();
    for (id, (label_counts, _, members)) in classes.into_iter().enumerate() {
        for &(i, (a, b), _) in &members {
            edge_class_of[i][eidx(a, b)] = id;
        }
        out.push(EdgeClass {
            id,
            degree: members.len(),
            members,
            label_counts,
        });
    }
    (out, edge_class_of)
}

impl IdealTriangulation {
    /// Edge class of the edge {a,b} of tetrahedron `tet`.
    pub fn edge_class_at(&self, tet: usize, a: usize, b: usize) -> usize {
        let k = TET_EDGES
            .iter()
            .position(|&(x, y)| (x, y) == (a.min(b), a.max(b)))
            .unwrap();
        self.edge_class_of[tet][k]
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edge_classes
    }

    pub fn cusp_triangulation(&self, cusp: usize) -> Option<&CuspTriangulation> {
        self.cusps.get(cusp)
    }

    pub fn curve(&self, name: &str) -> Option<&PeripheralCurve> {
        self.curves.iter().find(|c| c.name == name)
    }

    /// Meridian/longitude pairs per cusp: the first two supplied curves of
    /// each cusp, in file order.
    pub fn cusp_bases(&self) -> Vec<Option<(&PeripheralCurve, &PeripheralCurve)>> {
        let mut out = vec![Vec::new(); self.cusps.len()];
        for c in &self.curves {
            out[c.cusp].push(c);
        }
        out.into_iter()
            .map(|v| {
                if v.len() >= 2 {
                    Some((v[0], v[1]))
                } else {
                    None
                }
            })
            .collect()
    }
}
