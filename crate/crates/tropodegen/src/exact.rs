//! Exact integer/rational linear algebra used by the combinatorial layer.
//!
//! Matrices here are small (rows and columns on the order of the number of
//! tetrahedra), so everything is plain dense arithmetic over `BigInt` and
//! `BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(int(v))
}

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let data = rows.iter().flatten().map(|&v| int(v)).collect();
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Int {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Int) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_i64(&self, r: usize) -> Vec<i64> {
        self.row(r)
            .iter()
            .map(|v| i64::try_from(v).expect("entry fits i64"))
            .collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * other.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Row vector (length = ncols) dotted against each row: returns self * v.
    pub fn mul_vec_rat(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Rat::zero();
                for c in 0..self.cols {
                    acc += Rat::from_integer(self.get(r, c).clone()) * &v[c];
                }
                acc
            })
            .collect()
    }

    pub fn mul_vec_int(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Int::zero();
                for c in 0..self.cols {
                    acc += self.get(r, c) * &v[c];
                }
                acc
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|v| v.to_string()).collect())
            .collect()
    }
}

/// Left-multiplication of a row vector: v * M.
pub fn row_vec_mul(v: &[Int], m: &IntMat) -> Vec<Int> {
    assert_eq!(v.len(), m.nrows());
    (0..m.ncols())
        .map(|c| {
            let mut acc = Int::zero();
            for r in 0..m.nrows() {
                acc += &v[r] * m.get(r, c);
            }
            acc
        })
        .collect()
}

/// The skew block matrix C_n: n diagonal copies of
/// [[0,1,-1],[-1,0,1],[1,-1,0]].
pub fn c_n(n: usize) -> IntMat {
    let c1 = [[0i64, 1, -1], [-1, 0, 1], [1, -1, 0]];
    let mut m = IntMat::zeros(3 * n, 3 * n);
    for i in 0..n {
        for a in 0..3 {
            for b in 0..3 {
                m.set(3 * i + a, 3 * i + b, int(c1[a][b]));
            }
        }
    }
    m
}

/// Basis of the rational nullspace of the matrix restricted to `cols`.
/// Returned vectors have length `cols.len()`.
pub fn rational_kernel(m: &IntMat, cols: &[usize]) -> Vec<Vec<Rat>> {
    let nr = m.nrows();
    let nc = cols.len();
    let mut a: Vec<Vec<Rat>> = (0..nr)
        .map(|r| {
            cols.iter()
                .map(|&c| Rat::from_integer(m.get(r, c).clone()))
                .collect()
        })
        .collect();

    // reduced row echelon form
    let mut pivot_cols = Vec::new();
    let mut lead = 0usize;
    for r in 0..nr {
        if lead >= nc {
            break;
        }
        let mut pr = r;
        while pr < nr && a[pr][lead].is_zero() {
            pr += 1;
        }
        if pr == nr {
            lead += 1;
            // retry this row with the next column
            let mut found = false;
            while lead < nc {
                pr = r;
                while pr < nr && a[pr][lead].is_zero() {
                    pr += 1;
                }
                if pr < nr {
                    found = true;
                    break;
                }
                lead += 1;
            }
            if !found {
                break;
            }
        }
        a.swap(r, pr);
        let inv = a[r][lead].clone();
        for c in 0..nc {
            a[r][c] = &a[r][c] / &inv;
        }
        for rr in 0..nr {
            if rr != r && !a[rr][lead].is_zero() {
                let f = a[rr][lead].clone();
                for c in 0..nc {
                    let sub = &f * &a[r][c];
                    a[rr][c] = &a[rr][c] - sub;
                }
            }
        }
        pivot_cols.push(lead);
        lead += 1;
    }

    let free: Vec<usize> = (0..nc).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![Rat::zero(); nc];
        v[fc] = Rat::one();
        for (ri, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[ri][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Reduced-row-echelon basis of the row space of an integer matrix, as
/// rational rows with recorded pivot columns.
pub struct RowSpace {
    pub rows: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
}

pub fn row_space(m: &IntMat) -> RowSpace {
    let nc = m.ncols();
    let mut a: Vec<Vec<Rat>> = (0..m.nrows())
        .map(|r| {
            m.row(r)
                .iter()
                .map(|x| Rat::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..nc {
        if r == a.len() {
            break;
        }
        let Some(pr) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..nc {
                    let sub = &f * &a[r][k];
                    a[i][k] = &a[i][k] - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    RowSpace { rows: a, pivots }
}

impl RowSpace {
    /// Reduce a vector modulo the row space: subtract the unique combination
    /// of basis rows clearing the pivot coordinates.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !out[p].is_zero() {
                let f = out[p].clone();
                for (x, b) in out.iter_mut().zip(row) {
                    let sub = &f * b;
                    *x = &*x - sub;
                }
            }
        }
        out
    }
}

/// Scale a rational vector to the minimal integer vector with the same
/// direction: clear denominators, divide by the gcd of the entries, and keep
/// the sign (so an all-nonnegative input stays nonnegative).
pub fn minimal_integer_rep(v: &[Rat]) -> Vec<Int> {
    if v.iter().all(|x| x.is_zero()) {
        return vec![Int::zero(); v.len()];
    }
    let mut lcm = Int::one();
    for x in v {
        let d = x.denom();
        let g = gcd(&lcm, d);
        lcm = &lcm / g * d;
    }
    let ints: Vec<Int> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let mut g = Int::zero();
    for x in &ints {
        g = gcd(&g, x);
    }
    ints.iter().map(|x| x / &g).collect()
}

pub fn gcd(a: &Int, b: &Int) -> Int {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}
