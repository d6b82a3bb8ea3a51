//! Vertex-link (cusp) triangulations induced by an ideal triangulation.
//!
//! Each ideal vertex (tet, v) contributes one cusp triangle. Its sides are
//! indexed by the faces u != v of the tetrahedron, and the corner opposite
//! side u is the tetrahedron edge {v,u}. Viewed from the cusp the corners of
//! a positively oriented tetrahedron run counterclockwise in the order given
//! by any (u1,u2,u3) with (v,u1,u2,u3) an even permutation; the corner labels
//! then read z, z', z'' counterclockwise.

use super::{edge_label, Gluing, TriangulationError};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TriangleId {
    pub tet: usize,
    pub vertex: usize,
}

#[derive(Debug, Clone)]
pub struct CuspTriangle {
    pub id: TriangleId,
    /// Side indices (faces containing the vertex) in counterclockwise order
    /// as seen from the cusp.
    pub ccw_sides: [usize; 3],
    /// `corner_edge_class[k]` = edge class of the corner opposite
    /// `ccw_sides[k]`, i.e. of the tetrahedron edge {vertex, `ccw_sides[k]`}.
    pub corner_edge_class: [usize; 3],
    /// `corner_label[k]` = shape label (0,1,2) of that corner.
    pub corner_label: [usize; 3],
}

/// Closed triangulated surface linking one ideal vertex class.
#[derive(Debug, Clone)]
pub struct CuspTriangulation {
    pub id: usize,
    pub triangles: Vec<CuspTriangle>,
    /// adjacency: (triangle id, side) -> (triangle id, side) across the face
    /// pairing; stored for sides of triangles in this cusp only.
    pub adjacency: BTreeMap<(TriangleId, usize), (TriangleId, usize)>,
    /// `vertex_of[(triangle, corner side index)]` = cusp-triangulation vertex id.
    pub vertex_of: BTreeMap<(TriangleId, usize), usize>,
    pub vertex_count: usize,
    /// edge class represented by each cusp-triangulation vertex.
    pub vertex_edge_class: Vec<usize>,
}

impl CuspTriangulation {
    pub fn triangle(&self, id: TriangleId) -> Option<&CuspTriangle> {
        self.triangles.iter().find(|t| t.id == id)
    }

    pub fn euler_characteristic(&self) -> i64 {
        let f = self.triangles.len() as i64;
        let e = 3 * f / 2;
        let v = self.vertex_count as i64;
        v - e + f
    }

    /// Genus assuming the link is a closed orientable surface.
    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    /// Side gluing: crossing side `f` of triangle (i,v) lands in triangle
    /// (j, perm(v)) through its side perm(f).
    pub fn neighbor(&self, tri: TriangleId, side: usize) -> (TriangleId, usize) {
        self.adjacency[&(tri, side)]
    }
}

/// Counterclockwise side order at vertex `v`: the unique cyclic order
/// (u1,u2,u3) with (v,u1,u2,u3) even, anchored at the smallest index.
pub fn ccw_sides(v: usize) -> [usize; 3] {
    let others: Vec<usize> = (0..4).filter(|&u| u != v).collect();
    let perms = [
        [others[0], others[1], others[2]],
        [others[0], others[2], others[1]],
    ];
    for p in perms {
        let arr = [v, p[0], p[1], p[2]];
        let mut s = 1i32;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if arr[i] > arr[j] {
                    s = -s;
                }
            }
        }
        if s == 1 {
            return p;
        }
    }
    unreachable!()
}

pub(super) fn build_cusps(
    gluings: &[[Gluing; 4]],
    n: usize,
) -> Result<(Vec<CuspTriangulation>, Vec<[usize; 4]>), TriangulationError> {
    // group ideal vertices into cusps
    let idx = |i: usize, v: usize| 4 * i + v;
    let mut parent: Vec<usize> = (0..4 * n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, row) in gluings.iter().enumerate() {
        for (f, g) in row.iter().enumerate() {
            for v in 0..4 {
                if v == f {
                    continue;
                }
                let a = find(&mut parent, idx(i, v));
                let b = find(&mut parent, idx(g.tet, g.perm.apply(v)));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut cusp_of = vec![[usize::MAX; 4]; n];
    for i in 0..n {
        for v in 0..4 {
            let r = find(&mut parent, idx(i, v));
            let id = match roots.iter().position(|&x| x == r) {
                Some(p) => p,
                None => {
                    roots.push(r);
                    roots.len() - 1
                }
            };
            cusp_of[i][v] = id;
        }
    }

    // cusp-triangulation vertices: corner (i,v,u) classes under side gluings
    let cidx = |i: usize, v: usize, u: usize| (4 * i + v) * 4 + u;
    let mut cparent: Vec<usize> = (0..16 * n).collect();
    for (i, row) in gluings.iter().enumerate() {
        for v in 0..4 {
            for u in 0..4 {
                if u == v {
                    continue;
                }
                for (f, g) in row.iter().enumerate() {
                    if f == v || f == u {
                        continue;
                    }
                    let a = find(&mut cparent, cidx(i, v, u));
                    let b = find(&mut cparent, cidx(g.tet, g.perm.apply(v), g.perm.apply(u)));
                    if a != b {
                        cparent[a] = b;
                    }
                }
            }
        }
    }

    // edge class lookup for corner labels
    let (edge_classes, edge_class_of) = super::derive_edge_classes(gluings, n);
    let _ = edge_classes;

    let mut cusps = Vec::new();
    for cusp_id in 0..roots.len() {
        let mut triangles = Vec::new();
        let mut adjacency = BTreeMap::new();
        let mut vertex_of = BTreeMap::new();
        let mut vertex_ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vertex_edge_class = Vec::new();
        for i in 0..n {
            for v in 0..4 {
                if cusp_of[i][v] != cusp_id {
                    continue;
                }
                let id = TriangleId { tet: i, vertex: v };
                let sides = ccw_sides(v);
                let mut corner_edge_class = [0usize; 3];
                let mut corner_label = [0usize; 3];
                for (k, &u) in sides.iter().enumerate() {
                    let eidx = super::TET_EDGES
                        .iter()
                        .position(|&(x, y)| (x, y) == (v.min(u), v.max(u)))
                        .unwrap();
                    corner_edge_class[k] = edge_class_of[i][eidx];
                    corner_label[k] = edge_label(v, u);
                    let root = find(&mut cparent, cidx(i, v, u));
                    let next = vertex_ids.len();
                    let vid = *vertex_ids.entry(root).or_insert(next);
                    if vid == vertex_edge_class.len() {
                        vertex_edge_class.push(corner_edge_class[k]);
                    } else if vertex_edge_class[vid] != corner_edge_class[k] {
                        return Err(TriangulationError::Topology(format!(
                            "corner labels around a link vertex of cusp {cusp_id} mix edge classes"
                        )));
                    }
                    vertex_of.insert((id, u), vid);
                }
                for f in 0..4 {
                    if f == v {
                        continue;
                    }
                    let g = &gluings[i][f];
                    adjacency.insert(
                        (id, f),
                        (
                            TriangleId {
                                tet: g.tet,
                                vertex: g.perm.apply(v),
                            },
                            g.perm.apply(f),
                        ),
                    );
                }
                triangles.push(CuspTriangle {
                    id,
                    ccw_sides: sides,
                    corner_edge_class,
                    corner_label,
                });
            }
        }
        // closed-surface check: every side is glued to a side in this cusp,
        // and the gluing is involutive
        for (&(t, s), &(t2, s2)) in &adjacency {
            let back = adjacency.get(&(t2, s2));
            if back != Some(&(t, s)) {
                return Err(TriangulationError::Topology(format!(
                    "cusp {cusp_id} link is not a closed surface at triangle {t:?} side {s}"
                )));
            }
        }
        cusps.push(CuspTriangulation {
            id: cusp_id,
            triangles,
            adjacency,
            vertex_count: vertex_ids.len(),
            vertex_of,
            vertex_edge_class,
        });
    }
    Ok((cusps, cusp_of))
}

#[cfg(test)]
mod tests {
    use crate::fixtures;
    use std::collections::BTreeMap;

    #[test]
    fn fig8_cusp_is_a_torus_with_eight_triangles() {
        let t = fixtures::fig8();
        assert_eq!(t.cusps.len(), 1);
        let c = &t.cusps[0];
        assert_eq!(c.triangles.len(), 8, "2 tetrahedra x 4 vertices");
        assert_eq!(c.euler_characteristic(), 0);
        assert_eq!(c.genus(), 1);
        assert_eq!(c.vertex_count, 4);
    }

    #[test]
    fn corner_census_matches_edge_class_incidences() {
        let t = fixtures::fig8();
        let c = &t.cusps[0];
        // around each link vertex, corners enumerate the incidences of a
        // single edge class; per-vertex label counts must match that class's
        // label counts
        let mut per_vertex: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
        for tri in &c.triangles {
            for (k, &u) in tri.ccw_sides.iter().enumerate() {
                let vid = c.vertex_of[&(tri.id, u)];
                let counts = per_vertex
                    .entry(vid)
                    .or_insert_with(|| vec![0; 3 * t.tet_count]);
                counts[3 * tri.id.tet + tri.corner_label[k]] += 1;
            }
        }
        for (vid, counts) in per_vertex {
            let class = c.vertex_edge_class[vid];
            assert_eq!(
                counts, t.edge_classes[class].label_counts,
                "vertex {vid} census vs class {class}"
            );
        }
    }

    #[test]
    fn total_corner_count_is_six_n() {
        let t = fixtures::fig8();
        let total: usize = t.cusps.iter().map(|c| 3 * c.triangles.len()).sum();
        assert_eq!(total, 12 * t.tet_count); // each tet edge has two ends
        let degree_sum: usize = t.edge_classes.iter().map(|e| e.degree).sum();
        assert_eq!(degree_sum, 6 * t.tet_count);
    }
}
