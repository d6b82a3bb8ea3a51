//! Tropical side: the prevariety S_n ∩ null(A), spherical duals of Newton
//! polytopes, vertex enumeration of the projective admissible solution space,
//! and the C_n^T correspondence between tropical points and quad coordinates.

use crate::equations::GluingSystem;
use crate::exact::{minimal_integer_rep, rational_kernel, Int, Rat};
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TropicalError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("admissibility error: {0}")]
    Admissibility(String),
    #[error("form error: {0}")]
    Form(String),
}

/// A point of S_n ∩ null-candidate space: 3n rationals whose coordinate
/// triples are of the form (0,x,-x), (-x,0,x) or (x,-x,0) with x >= 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPoint {
    xi: Vec<Rat>,
}

impl TropicalPoint {
    pub fn new(xi: Vec<Rat>) -> Result<Self, TropicalError> {
        if xi.len() % 3 != 0 {
            return Err(TropicalError::Dimension(format!(
                "length {} is not a multiple of 3",
                xi.len()
            )));
        }
        if xi.iter().all(|x| x.is_zero()) {
            return Err(TropicalError::Form(
                "zero vector is not a projective point".into(),
            ));
        }
        if let Some(msg) = triple_form_violation(&xi) {
            return Err(TropicalError::Form(msg));
        }
        Ok(Self { xi })
    }

    pub fn coords(&self) -> &[Rat] {
        &self.xi
    }

    pub fn tet_count(&self) -> usize {
        self.xi.len() / 3
    }

    /// Unit Euclidean norm representative, as floats.
    pub fn normalized(&self) -> Vec<f64> {
        let v: Vec<f64> = self.xi.iter().map(|x| x.to_f64().unwrap()).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / norm).collect()
    }
}

/// Nonnegative quad coordinates (q, q', q'') per tetrahedron.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuadCoordinate {
    n: Vec<Rat>,
}

impl QuadCoordinate {
    pub fn new(n: Vec<Rat>) -> Result<Self, TropicalError> {
        if n.len() % 3 != 0 {
            return Err(TropicalError::Dimension(format!(
                "length {} is not a multiple of 3",
                n.len()
            )));
        }
        if n.iter().any(|x| x.is_negative()) {
            return Err(TropicalError::Admissibility(
                "quad coordinates must be nonnegative".into(),
            ));
        }
        Ok(Self { n })
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&x| Rat::from_integer(Int::from(x))).collect()).unwrap()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.n
    }

    pub fn tet_count(&self) -> usize {
        self.n.len() / 3
    }

    pub fn is_zero(&self) -> bool {
        self.n.iter().all(|x| x.is_zero())
    }

    /// At most one nonzero quad type per tetrahedron.
    pub fn is_admissible(&self) -> bool {
        self.n
            .chunks(3)
            .all(|t| t.iter().filter(|x| !x.is_zero()).count() <= 1)
    }

    pub fn minimal_integer(&self) -> Vec<Int> {
        minimal_integer_rep(&self.n)
    }
}

/// First violated prevariety condition, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipDiagnostic {
    Member,
    ZeroVector,
    TripleForm(String),
    NotInNullspace { row: usize },
}

impl MembershipDiagnostic {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipDiagnostic::Member)
    }
}

impl std::fmt::Display for MembershipDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Member => write!(f, "member of the tropical prevariety"),
            Self::ZeroVector => write!(f, "zero vector is not a projective point"),
            Self::TripleForm(m) => write!(f, "S_n triple form violated: {m}"),
            Self::NotInNullspace { row } => {
                write!(f, "A·xi != 0: gluing row {row} has nonzero pairing")
            }
        }
    }
}

fn triple_form_violation(xi: &[Rat]) -> Option<String> {
    for (i, t) in xi.chunks(3).enumerate() {
        let zero_at: Vec<usize> = (0..3).filter(|&k| t[k].is_zero()).collect();
        let ok = match zero_at.len() {
            3 => true,
            0 => false,
            _ => {
                // pattern with zero at position k: remaining two are (x,-x)
                // in cyclic order (0,x,-x) / (-x,0,x) / (x,-x,0), x > 0
                let k = zero_at[0];
                let (p, q) = ((k + 1) % 3, (k + 2) % 3);
                !t[p].is_negative() && t[p] == -t[q].clone()
            }
        };
        if !ok {
            return Some(format!(
                "triple {i} = ({}, {}, {}) is not of the form (0,x,-x), (-x,0,x) or (x,-x,0) with x >= 0",
                t[0], t[1], t[2]
            ));
        }
    }
    None
}

/// Test xi ∈ S_n ∩ null(A) with a named first-failure diagnostic.
pub fn prevariety_membership(
    sys: &GluingSystem,
    xi: &[Rat],
) -> Result<MembershipDiagnostic, TropicalError> {
    if xi.len() != sys.a.ncols() {
        return Err(TropicalError::Dimension(format!(
            "xi has {} entries, system expects {}",
            xi.len(),
            sys.a.ncols()
        )));
    }
    if xi.iter().all(|x| x.is_zero()) {
        return Ok(MembershipDiagnostic::ZeroVector);
    }
    if let Some(msg) = triple_form_violation(xi) {
        return Ok(MembershipDiagnostic::TripleForm(msg));
    }
    for (row, dot) in sys.a.mul_vec_rat(xi).into_iter().enumerate() {
        if !dot.is_zero() {
            return Ok(MembershipDiagnostic::NotInNullspace { row });
        }
    }
    Ok(MembershipDiagnostic::Member)
}

/// Spherical-dual membership: xi lies in the spherical dual of the Newton
/// polytope of a polynomial with exponent set `exponents` iff the maximum of
/// alpha·xi over the exponents is attained at least twice.
pub fn sphdual_membership(exponents: &[Vec<i64>], xi: &[Rat]) -> bool {
    assert!(!exponents.is_empty());
    let dots: Vec<Rat> = exponents
        .iter()
        .map(|alpha| {
            alpha
                .iter()
                .zip(xi)
                .map(|(&a, x)| Rat::from_integer(Int::from(a)) * x)
                .fold(Rat::zero(), |acc, v| acc + v)
        })
        .collect();
    let max = dots.iter().max().unwrap().clone();
    dots.iter().filter(|d| **d == max).count() >= 2
}

/// Exponent sets of the three parameter polynomials of tetrahedron `i` (of
/// `n`), in the flat coordinates: p = z(1-z'') - 1, p' = z'(1-z) - 1,
/// p'' = z''(1-z') - 1.
pub fn parameter_exponent_sets(i: usize, n: usize) -> [Vec<Vec<i64>>; 3] {
    let e = |offsets: &[(usize, i64)]| -> Vec<i64> {
        let mut v = vec![0i64; 3 * n];
        for &(k, val) in offsets {
            v[3 * i + k] = val;
        }
        v
    };
    [
        vec![e(&[(0, 1)]), e(&[(0, 1), (2, 1)]), e(&[])],
        vec![e(&[(1, 1)]), e(&[(1, 1), (0, 1)]), e(&[])],
        vec![e(&[(2, 1)]), e(&[(2, 1), (1, 1)]), e(&[])],
    ]
}

/// Complete list of admissible vertices of {N >= 0, BN = 0, sum N = 1},
/// as minimal integer representatives in lexicographically descending order.
///
/// Iterates over the 4^n admissible support patterns; a pattern supports a
/// vertex exactly when the restriction of B to the pattern's columns has a
/// one-dimensional kernel spanned by a sign-definite vector.
pub fn enumerate_pf_vertices(sys: &GluingSystem) -> Vec<QuadCoordinate> {
    let n = sys.tet_count();
    let mut found: Vec<Vec<Int>> = Vec::new();
    // choice per tetrahedron: 0..2 = quad type, 3 = no quad
    let mut choice = vec![0usize; n];
    loop {
        let cols: Vec<usize> = choice
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c < 3)
            .map(|(i, &c)| 3 * i + c)
            .collect();
        if !cols.is_empty() {
            let kernel = rational_kernel(&sys.b, &cols);
            if kernel.len() == 1 {
                let u = &kernel[0];
                let pos = u.iter().any(|x| x.is_positive());
                let neg = u.iter().any(|x| x.is_negative());
                if !(pos && neg) {
                    let mut full = vec![Rat::zero(); 3 * n];
                    for (k, &c) in cols.iter().enumerate() {
                        full[c] = if neg { -u[k].clone() } else { u[k].clone() };
                    }
                    let rep = minimal_integer_rep(&full);
                    if !found.contains(&rep) {
                        found.push(rep);
                    }
                }
            }
        }
        // advance the mixed-radix counter
        let mut i = 0;
        loop {
            if i == n {
                // done
                found.sort();
                found.reverse();
                return found
                    .into_iter()
                    .map(|v| {
                        QuadCoordinate::new(v.into_iter().map(Rat::from_integer).collect())
                            .expect("vertices are nonnegative")
                    })
                    .collect();
            }
            choice[i] += 1;
            if choice[i] <= 3 {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// xi = C_n^T N; the triple correspondence sends (x,0,0) -> (0,x,-x),
/// (0,x,0) -> (-x,0,x), (0,0,x) -> (x,-x,0).
pub fn quads_to_xi(sys: &GluingSystem, n: &QuadCoordinate) -> Result<TropicalPoint, TropicalError> {
    if n.coords().len() != sys.cn.ncols() {
        return Err(TropicalError::Dimension(format!(
            "N has {} entries, system expects {}",
            n.coords().len(),
            sys.cn.ncols()
        )));
    }
    if !n.is_admissible() {
        return Err(TropicalError::Admissibility(
            "more than one nonzero quad type in a tetrahedron".into(),
        ));
    }
    let xi = sys.cn.transpose().mul_vec_rat(n.coords());
    TropicalPoint::new(xi)
}

/// The unique admissible N with C_n^T N = xi: the inverse triple map.
pub fn xi_to_quads(xi: &TropicalPoint) -> Result<QuadCoordinate, TropicalError> {
    let mut n = Vec::with_capacity(xi.coords().len());
    for t in xi.coords().chunks(3) {
        // (0,x,-x) -> (x,0,0); (-x,0,x) -> (0,x,0); (x,-x,0) -> (0,0,x)
        let (a, b, c) = (t[0].clone(), t[1].clone(), t[2].clone());
        if a.is_zero() && b >= Rat::zero() {
            n.extend([b, Rat::zero(), Rat::zero()]);
        } else if b.is_zero() && c >= Rat::zero() {
            n.extend([Rat::zero(), c, Rat::zero()]);
        } else if c.is_zero() && a >= Rat::zero() {
            n.extend([Rat::zero(), Rat::zero(), a]);
        } else {
            return Err(TropicalError::Form(format!(
                "triple ({a}, {b}, {c}) fails the S_n pattern"
            )));
        }
    }
    QuadCoordinate::new(n)
}
