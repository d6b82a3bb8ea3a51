//! The hyperbolic gluing equation system: exponent matrix A, skew block
//! matrix C_n, Q-matching matrix B = A C_n, and numeric residual evaluators.

use crate::exact::{c_n, IntMat};
use crate::triangulation::IdealTriangulation;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("domain error: {0}")]
pub struct DomainError(pub String);

/// A, C_n and B for one triangulation. Rows of A and B are indexed by edge
/// classes; columns run (z_1, z'_1, z''_1, ..., z''_n).
#[derive(Debug, Clone)]
pub struct GluingSystem {
    pub a: IntMat,
    pub cn: IntMat,
    pub b: IntMat,
    pub shape_names: Vec<String>,
    pub quad_names: Vec<String>,
}

impl GluingSystem {
    pub fn tet_count(&self) -> usize {
        self.a.ncols() / 3
    }

    pub fn edge_count(&self) -> usize {
        self.a.nrows()
    }
}

pub fn build_gluing_system(tri: &IdealTriangulation) -> GluingSystem {
    let n = tri.tet_count;
    let rows: Vec<Vec<i64>> = tri
        .edge_classes
        .iter()
        .map(|c| c.label_counts.clone())
        .collect();
    let a = IntMat::from_rows(&rows);
    let cn = c_n(n);
    let b = a.mul(&cn);
    GluingSystem {
        a,
        cn,
        b,
        shape_names: tri.shape_names.clone(),
        quad_names: tri.quad_names.clone(),
    }
}

/// Build a system from a raw exponent matrix (used for synthetic systems in
/// enumeration tests); the number of columns must be a multiple of 3.
pub fn system_from_exponents(a: IntMat) -> GluingSystem {
    assert_eq!(a.ncols() % 3, 0);
    let n = a.ncols() / 3;
    let cn = c_n(n);
    let b = a.mul(&cn);
    GluingSystem {
        a,
        cn,
        b,
        shape_names: (1..=n).map(|i| format!("z{i}")).collect(),
        quad_names: (1..=n).map(|i| format!("q{i}")).collect(),
    }
}

/// n complex shape triples (z, z', z''), entries nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeAssignment {
    pub triples: Vec<[Complex64; 3]>,
}

impl ShapeAssignment {
    pub fn new(triples: Vec<[Complex64; 3]>) -> Result<Self, DomainError> {
        for (i, t) in triples.iter().enumerate() {
            for (k, z) in t.iter().enumerate() {
                if z.norm() == 0.0 || !z.is_finite() {
                    return Err(DomainError(format!(
                        "shape coordinate {k} of tetrahedron {i} is outside (C \\ {{0}})^3n"
                    )));
                }
            }
        }
        Ok(Self { triples })
    }

    /// Build triples from one shape per tetrahedron, with the companions
    /// z' = 1/(1-z) and z'' = (z-1)/z solved exactly from the parameter
    /// equations.
    pub fn from_tet_shapes(zs: &[Complex64]) -> Result<Self, DomainError> {
        let mut triples = Vec::with_capacity(zs.len());
        for (i, &z) in zs.iter().enumerate() {
            if !z.is_finite() || z.norm() == 0.0 || (z - 1.0).norm() == 0.0 {
                return Err(DomainError(format!(
                    "tetrahedron {i} shape {z} is degenerate (0, 1 or infinite)"
                )));
            }
            triples.push([z, 1.0 / (1.0 - z), (z - 1.0) / z]);
        }
        Ok(Self { triples })
    }

    pub fn tet_count(&self) -> usize {
        self.triples.len()
    }

    pub fn coord(&self, idx: usize) -> Complex64 {
        self.triples[idx / 3][idx % 3]
    }

    pub fn flat(&self) -> Vec<Complex64> {
        self.triples.iter().flatten().copied().collect()
    }
}

/// Residuals (p_i, p'_i, p''_i) of the parameter equations
/// z(1-z'') - 1, z'(1-z) - 1, z''(1-z') - 1 for each tetrahedron.
pub fn parameter_residuals(z: &ShapeAssignment) -> Result<Vec<Complex64>, DomainError> {
    let mut out = Vec::with_capacity(3 * z.tet_count());
    for (i, t) in z.triples.iter().enumerate() {
        for (k, v) in t.iter().enumerate() {
            if v.norm() == 0.0 {
                return Err(DomainError(format!(
                    "shape coordinate {k} of tetrahedron {i} is zero"
                )));
            }
        }
        let [a, b, c] = *t;
        out.push(a * (1.0 - c) - 1.0);
        out.push(b * (1.0 - a) - 1.0);
        out.push(c * (1.0 - b) - 1.0);
    }
    Ok(out)
}

/// Residuals g_j = (monomial of row j of A evaluated at Z) - 1.
pub fn gluing_residuals(
    sys: &GluingSystem,
    z: &ShapeAssignment,
) -> Result<Vec<Complex64>, DomainError> {
    if 3 * z.tet_count() != sys.a.ncols() {
        return Err(DomainError(format!(
            "shape assignment has {} tetrahedra, system expects {}",
            z.tet_count(),
            sys.a.ncols() / 3
        )));
    }
    let flat = z.flat();
    for (idx, v) in flat.iter().enumerate() {
        if v.norm() == 0.0 {
            return Err(DomainError(format!("shape coordinate {idx} is zero")));
        }
    }
    let mut out = Vec::with_capacity(sys.a.nrows());
    for r in 0..sys.a.nrows() {
        let mut acc = Complex64::new(1.0, 0.0);
        for (c, e) in sys.a.row(r).iter().enumerate() {
            let e = e.to_i64().expect("exponent fits i64");
            if e != 0 {
                acc *= flat[c].powi(e as i32);
            }
        }
        out.push(acc - 1.0);
    }
    Ok(out)
}

/// Evaluate a signed shape monomial (integer exponents over the flat
/// coordinates) at Z.
pub fn evaluate_monomial(
    exponents: &[crate::exact::Int],
    z: &ShapeAssignment,
) -> Result<Complex64, DomainError> {
    let flat = z.flat();
    if exponents.len() != flat.len() {
        return Err(DomainError(format!(
            "monomial has {} exponents for {} coordinates",
            exponents.len(),
            flat.len()
        )));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for (v, e) in flat.iter().zip(exponents) {
        let e = e.to_i64().expect("exponent fits i64");
        if e != 0 {
            if v.norm() == 0.0 {
                return Err(DomainError("zero shape in monomial".into()));
            }
            acc *= v.powi(e as i32);
        }
    }
    Ok(acc)
}

fn power_string(name: &str, e: i64) -> String {
    fn superscript(mut e: i64) -> String {
        const DIGITS: [&str; 10] = ["⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"];
        let neg = e < 0;
        if neg {
            e = -e;
        }
        let mut s: Vec<&str> = Vec::new();
        if e == 0 {
            s.push(DIGITS[0]);
        }
        while e > 0 {
            s.push(DIGITS[(e % 10) as usize]);
            e /= 10;
        }
        s.reverse();
        let mut out = String::new();
        if neg {
            out.push('⁻');
        }
        out.push_str(&s.concat());
        out
    }
    if e == 1 {
        name.to_string()
    } else if name.chars().count() > 1 && !name.ends_with('′') && !name.ends_with('″') {
        format!("{name}{}", superscript(e))
    } else {
        // parenthesize primed or multi-character names with exponents
        if name.chars().count() > 1 {
            format!("({name}){}", superscript(e))
        } else {
            format!("{name}{}", superscript(e))
        }
    }
}

impl GluingSystem {
    fn var_name(&self, col: usize) -> String {
        let base = &self.shape_names[col / 3];
        match col % 3 {
            0 => base.clone(),
            1 => format!("{base}′"),
            _ => format!("{base}″"),
        }
    }

    fn quad_var_name(&self, col: usize) -> String {
        let base = &self.quad_names[col / 3];
        match col % 3 {
            0 => base.clone(),
            1 => format!("{base}′"),
            _ => format!("{base}″"),
        }
    }

    /// Multiplicative display of the gluing equations, one per edge class,
    /// e.g. "1 = (w′)²w″(z′)²z″".
    pub fn equations_multiplicative(&self) -> Vec<String> {
        (0..self.a.nrows())
            .map(|r| {
                let mut s = String::from("1 = ");
                let mut any = false;
                for (c, e) in self.a.row(r).iter().enumerate() {
                    let e = e.to_i64().unwrap();
                    if e != 0 {
                        s.push_str(&power_string(&self.var_name(c), e));
                        any = true;
                    }
                }
                if !any {
                    s.push('1');
                }
                s
            })
            .collect()
    }

    /// Additive display of the Q-matching equations, e.g.
    /// "0 = -p - p′ + 2p″ - q - q′ + 2q″".
    pub fn q_matching_equations(&self) -> Vec<String> {
        (0..self.b.nrows())
            .map(|r| {
                let mut s = String::from("0 =");
                let mut first = true;
                for (c, e) in self.b.row(r).iter().enumerate() {
                    let e = e.to_i64().unwrap();
                    if e == 0 {
                        continue;
                    }
                    let mag = e.abs();
                    let sign = if e < 0 { "-" } else { "+" };
                    if first && e > 0 {
                        s.push(' ');
                    } else {
                        s.push_str(&format!(" {sign} "));
                    }
                    if mag != 1 {
                        s.push_str(&format!("{mag}"));
                    }
                    s.push_str(&self.quad_var_name(c));
                    first = false;
                }
                if first {
                    s.push_str(" 0");
                }
                s
            })
            .collect()
    }
}
