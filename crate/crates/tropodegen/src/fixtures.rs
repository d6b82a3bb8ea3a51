//! Built-in triangulation fixtures.

use crate::triangulation::{parse_triangulation, IdealTriangulation};

/// Figure-eight knot complement: two tetrahedra, one torus cusp, with
/// meridian and longitude paths supplied.
pub const FIG8_JSON: &str = include_str!("../fixtures/fig8.json");

/// One-tetrahedron gluing with even face-pairing permutations: a valid
/// pseudo-manifold (Klein-bottle vertex link) that admits no coherent
/// orientation.
pub const GIESEKING_JSON: &str = r#"{
  "tetrahedra": 1,
  "gluings": [
    [
      {"tet": 0, "perm": [1, 2, 0, 3]},
      {"tet": 0, "perm": [2, 0, 1, 3]},
      {"tet": 0, "perm": [0, 2, 3, 1]},
      {"tet": 0, "perm": [0, 3, 1, 2]}
    ]
  ]
}"#;

pub fn fig8() -> IdealTriangulation {
    parse_triangulation(FIG8_JSON).expect("fig8 fixture parses")
}
