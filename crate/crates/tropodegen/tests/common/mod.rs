//! Shared test oracles, independent of the implementation paths they check.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tropodegen::equations::ShapeAssignment;
use tropodegen::exact::IntMat;
use tropodegen::triangulation::curve::{CurveSpec, PathStep};
use tropodegen::triangulation::IdealTriangulation;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// double-description vertex enumeration oracle
// ---------------------------------------------------------------------------

type Rat = BigRational;

fn rat_i(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .fold(Rat::zero(), |s, v| s + v)
}

fn normalize_simplex(v: &mut [Rat]) {
    let s = v.iter().fold(Rat::zero(), |a, b| a + b);
    for x in v.iter_mut() {
        *x = &*x / &s;
    }
}

/// Rank of a rational matrix by Gaussian elimination.
fn rank(mut m: Vec<Vec<Rat>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let piv = (r..rows).find(|&i| !m[i][c].is_zero());
        let Some(piv) = piv else { continue };
        m.swap(r, piv);
        let inv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let sub = &f * &m[r][k];
                    m[i][k] = &m[i][k] - sub;
                }
            }
        }
        r += 1;
    }
    r
}

/// All vertices of {N >= 0, BN = 0, sum N = 1} by the double description
/// method: cut the standard simplex by each row of B, generating combination
/// points from every (+,-) pair, then keep exactly the generators whose
/// active constraints have full rank. Admissibility is applied as a final
/// filter. Returns minimal integer representatives, sorted descending.
pub fn dd_admissible_vertices(b: &IntMat) -> Vec<Vec<BigInt>> {
    let dim = b.ncols();
    let mut gens: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            let mut v = vec![Rat::zero(); dim];
            v[i] = Rat::one();
            v
        })
        .collect();
    for r in 0..b.nrows() {
        let row: Vec<Rat> = b
            .row(r)
            .iter()
            .map(|x| Rat::from_integer(x.clone()))
            .collect();
        let vals: Vec<Rat> = gens.iter().map(|g| dot(&row, g)).collect();
        let mut next: Vec<Vec<Rat>> = Vec::new();
        for (g, v) in gens.iter().zip(&vals) {
            if v.is_zero() {
                next.push(g.clone());
            }
        }
        for (i, u) in gens.iter().enumerate() {
            if !vals[i].is_positive() {
                continue;
            }
            for (j, w) in gens.iter().enumerate() {
                if !vals[j].is_negative() {
                    continue;
                }
                // (b.u) w - (b.w) u  has b-value 0 and nonnegative entries
                let mut x: Vec<Rat> = w
                    .iter()
                    .zip(u)
                    .map(|(wk, uk)| &vals[i] * wk - &vals[j] * uk)
                    .collect();
                normalize_simplex(&mut x);
                if !next.contains(&x) {
                    next.push(x);
                }
            }
        }
        gens = next;
    }

    // vertex test: active constraints (B rows, the simplex row, and the
    // coordinate hyperplanes off the support) must have rank = dim
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for g in &gens {
        let mut m: Vec<Vec<Rat>> = (0..b.nrows())
            .map(|r| {
                b.row(r)
                    .iter()
                    .map(|x| Rat::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        m.push(vec![Rat::one(); dim]);
        for (i, x) in g.iter().enumerate() {
            if x.is_zero() {
                let mut e = vec![Rat::zero(); dim];
                e[i] = Rat::one();
                m.push(e);
            }
        }
        if rank(m) != dim {
            continue;
        }
        // admissibility: at most one nonzero per coordinate triple
        let admissible = g
            .chunks(3)
            .all(|t| t.iter().filter(|x| !x.is_zero()).count() <= 1);
        if !admissible {
            continue;
        }
        let rep = minimal_integer(g);
        if !out.contains(&rep) {
            out.push(rep);
        }
    }
    out.sort();
    out.reverse();
    out
}

fn minimal_integer(v: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        let d = x.denom();
        let g = gcd(&lcm, d);
        lcm = &lcm / g * d;
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = gcd(&g, x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.iter().map(|x| x / &g).collect()
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

// ---------------------------------------------------------------------------
// Lobachevsky quadrature oracle
// ---------------------------------------------------------------------------

/// -int_0^theta ln(2 sin t) dt by splitting off the logarithmic endpoint
/// analytically and applying composite Simpson to the smooth remainder
/// ln(sin t / t).
pub fn lobachevsky_quadrature(theta: f64) -> f64 {
    use std::f64::consts::PI;
    let mut t = theta % PI;
    if t > PI / 2.0 {
        t -= PI;
    } else if t < -PI / 2.0 {
        t += PI;
    }
    if t == 0.0 {
        return 0.0;
    }
    let sign = if t < 0.0 { -1.0 } else { 1.0 };
    let t = t.abs();
    let g = |u: f64| -> f64 {
        if u < 1e-12 {
            0.0
        } else {
            (u.sin() / u).ln()
        }
    };
    let nseg = 4000;
    let h = t / nseg as f64;
    let mut s = g(0.0) + g(t);
    for k in 1..nseg {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * g(k as f64 * h);
    }
    let integral = s * h / 3.0;
    sign * -(t * ((2.0 * t).ln() - 1.0) + integral)
}

// ---------------------------------------------------------------------------
// randomized fixtures
// ---------------------------------------------------------------------------

/// Random closed transverse path on a cusp of the triangulation: a random
/// walk over (triangle, entry-side) states until it returns to the start.
pub fn random_closed_path(
    tri: &IdealTriangulation,
    cusp: usize,
    rng: &mut ChaCha8Rng,
    max_len: usize,
) -> Option<CurveSpec> {
    let c = &tri.cusps[cusp];
    let t0 = c.triangles[rng.gen_range(0..c.triangles.len())].id;
    let sides: Vec<usize> = (0..4).filter(|&f| f != t0.vertex).collect();
    let start = (t0, sides[rng.gen_range(0..3)]);
    let mut cur = start;
    let mut steps = Vec::new();
    for _ in 0..max_len {
        let (tri_id, entry) = cur;
        let options: Vec<usize> = (0..4)
            .filter(|&f| f != tri_id.vertex && f != entry)
            .collect();
        let exit = options[rng.gen_range(0..options.len())];
        steps.push(PathStep {
            tri: [tri_id.tet, tri_id.vertex],
            entry,
            exit,
        });
        let (next, next_entry) = c.neighbor(tri_id, exit);
        cur = (next, next_entry);
        if cur == start {
            return Some(CurveSpec {
                cusp,
                name: "random".into(),
                path: steps,
            });
        }
    }
    None
}

/// Random point on the figure-eight deformation variety: w free, z a root of
/// z(1-z) = 1/(w(1-w)).
pub fn random_fig8_point(rng: &mut ChaCha8Rng) -> ShapeAssignment {
    loop {
        let w = Complex64::new(rng.gen_range(0.1..0.9), rng.gen_range(0.3..1.3));
        let c = 1.0 / (w * (1.0 - w));
        let root = (1.0 - 4.0 * c).sqrt();
        let z = if rng.gen::<bool>() {
            (1.0 + root) / 2.0
        } else {
            (1.0 - root) / 2.0
        };
        if z.norm() < 1e-6 || (z - 1.0).norm() < 1e-6 {
            continue;
        }
        if let Ok(s) = ShapeAssignment::from_tet_shapes(&[w, z]) {
            return s;
        }
    }
}

/// Random admissible quad coordinate: per tetrahedron one quad type or none,
/// with a positive rational value.
pub fn random_admissible_n(n_tet: usize, rng: &mut ChaCha8Rng) -> Vec<Rat> {
    loop {
        let mut v = vec![Rat::zero(); 3 * n_tet];
        for i in 0..n_tet {
            let c = rng.gen_range(0..4usize);
            if c < 3 {
                let num = rng.gen_range(1..40i64);
                let den = rng.gen_range(1..8i64);
                v[3 * i + c] = rat_i(num) / rat_i(den);
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// Random small exponent matrix with nonnegative entries; rows of a gluing
/// exponent matrix for a synthetic system.
pub fn random_exponent_matrix(n_tet: usize, rows: usize, rng: &mut ChaCha8Rng) -> IntMat {
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..3 * n_tet).map(|_| rng.gen_range(0..3i64)).collect())
        .collect();
    IntMat::from_rows(&data)
}

// ---------------------------------------------------------------------------
// random valid triangulations
// ---------------------------------------------------------------------------

/// All odd permutations of {0,1,2,3}.
fn odd_perms() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    let items = [0usize, 1, 2, 3];
    let mut idx = [0, 1, 2, 3];
    // Heap's algorithm would do; small enough to enumerate via sorting ranks
    fn permute(arr: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
        if k == 4 {
            out.push(*arr);
            return;
        }
        for i in k..4 {
            arr.swap(k, i);
            permute(arr, k + 1, out);
            arr.swap(k, i);
        }
    }
    let mut all = Vec::new();
    permute(&mut idx, 0, &mut all);
    let _ = items;
    for p in all {
        let mut s = 1i32;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if p[i] > p[j] {
                    s = -s;
                }
            }
        }
        if s == -1 {
            out.push(p);
        }
    }
    out
}

/// Random valid oriented triangulation: pair the 4n faces randomly and glue
/// each pair by a random odd permutation. All-odd pairings always admit a
/// coherent orientation, so parsing succeeds.
pub fn random_triangulation(n_tet: usize, rng: &mut ChaCha8Rng) -> tropodegen::IdealTriangulation {
    use rand::seq::SliceRandom;
    let odd = odd_perms();
    loop {
        let mut faces: Vec<(usize, usize)> = (0..n_tet)
            .flat_map(|i| (0..4).map(move |f| (i, f)))
            .collect();
        faces.shuffle(rng);
        let mut gl = vec![vec![serde_json::Value::Null; 4]; n_tet];
        let mut ok = true;
        for pair in faces.chunks(2) {
            let ((i, f), (j, g)) = (pair[0], pair[1]);
            let candidates: Vec<&[usize; 4]> = odd.iter().filter(|p| p[f] == g).collect();
            let p = candidates[rng.gen_range(0..candidates.len())];
            let mut inv = [0usize; 4];
            for (a, &b) in p.iter().enumerate() {
                inv[b] = a;
            }
            if !gl[i][f].is_null() || !gl[j][g].is_null() {
                ok = false;
                break;
            }
            gl[i][f] = serde_json::json!({"tet": j, "perm": p.to_vec()});
            gl[j][g] = serde_json::json!({"tet": i, "perm": inv.to_vec()});
        }
        if !ok {
            continue;
        }
        let doc = serde_json::json!({"tetrahedra": n_tet, "gluings": gl});
        match tropodegen::parse_triangulation(&doc.to_string()) {
            Ok(t) => return t,
            Err(e) => panic!("all-odd gluing should parse: {e}"),
        }
    }
}
