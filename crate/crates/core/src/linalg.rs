//! Exact integer and rational matrices: inverse, Smith and Hermite normal
//! forms, rational and integral linear systems.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("vector is not primitive (gcd of entries is {0})")]
    NotPrimitive(BigInt),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_from_int(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Fractional part in [0, 1).
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

pub fn lcm_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
}

pub fn gcd_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Least common denominator of a rational vector.
pub fn common_denominator(v: &[BigRational]) -> BigInt {
    lcm_all(v.iter().map(|x| x.denom()))
}

/// Dense matrix over a ring, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Submatrix of the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + std::ops::Mul<Output = T> + std::ops::Add<Output = T>,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    let cur = std::mem::replace(&mut out[(i, j)], T::zero());
                    out[(i, j)] = cur + p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, j| acc + &self[(i, j)] * &v[j])
            })
            .collect()
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn to_rational(&self) -> RatMatrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(rat_from_int).collect(),
        }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(p) => {
                        a.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(source, j)] * factor;
            self[(target, j)] += v;
        }
    }

    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, source)] * factor;
            self[(i, target)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl RatMatrix {
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_integer(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.to_integer()).collect(),
        })
    }

    pub fn scale(&self, c: &BigRational) -> RatMatrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn common_denominator(&self) -> BigInt {
        common_denominator(&self.data)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !a[(i, k)].is_zero()).ok_or(LinalgError::SingularMatrix)?;
            a.swap_rows(k, p);
            inv.swap_rows(k, p);
            let piv = a[(k, k)].clone();
            for j in 0..n {
                a[(k, j)] = &a[(k, j)] / &piv;
                inv[(k, j)] = &inv[(k, j)] / &piv;
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let da = &f * &a[(k, j)];
                    a[(i, j)] -= da;
                    let di = &f * &inv[(k, j)];
                    inv[(i, j)] -= di;
                }
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> BigRational {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let p = match (k..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(p) => p,
                None => return BigRational::zero(),
            };
            if p != k {
                a.swap_rows(k, p);
                det = -det;
            }
            let piv = a[(k, k)].clone();
            det *= &piv;
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &piv;
                for j in k..n {
                    let d = &f * &a[(k, j)];
                    a[(i, j)] -= d;
                }
            }
        }
        det
    }
}

/// Inverse of an integer matrix over the rationals.
pub fn invert(m: &IntMatrix) -> Result<RatMatrix, LinalgError> {
    m.to_rational().inverse()
}

/// Solution of `m x = b` for square nonsingular `m`.
pub fn solve_rational(m: &IntMatrix, b: &[BigRational]) -> Result<Vec<BigRational>, LinalgError> {
    if m.rows() != b.len() {
        return Err(LinalgError::DimensionMismatch("right-hand side length".into()));
    }
    let inv = invert(m)?;
    Ok(inv.mul_vec(b))
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d1 | d2 | ... ` (zeros last).
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries of `D`, `min(rows, cols)` of them.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Invariant factors different from one: the cyclic factors of the
    /// torsion part of the cokernel, together with zeros for free summands.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.invariant_factors().into_iter().filter(|x| !x.is_one()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let n = r.min(c);
    let mut t = 0;
    while t < n {
        // smallest nonzero pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if d[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let mut dirty = false;
        for i in t + 1..r {
            if d[(i, t)].is_zero() {
                continue;
            }
            let q = d[(i, t)].div_floor(&d[(t, t)]);
            d.add_row_multiple(i, t, &-&q);
            u.add_row_multiple(i, t, &-&q);
            if !d[(i, t)].is_zero() {
                dirty = true;
            }
        }
        for j in t + 1..c {
            if d[(t, j)].is_zero() {
                continue;
            }
            let q = d[(t, j)].div_floor(&d[(t, t)]);
            d.add_col_multiple(j, t, &-&q);
            v.add_col_multiple(j, t, &-&q);
            if !d[(t, j)].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // divisibility of the remaining block
        let mut fix = None;
        'outer: for i in t + 1..r {
            for j in t + 1..c {
                if !d[(i, j)].is_multiple_of(&d[(t, t)]) {
                    fix = Some(i);
                    break 'outer;
                }
            }
        }
        if let Some(i) = fix {
            d.add_row_multiple(t, i, &BigInt::one());
            u.add_row_multiple(t, i, &BigInt::one());
            continue;
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition { u, d, v }
}

/// Column Hermite normal form: a basis of the lattice spanned by the columns
/// of `m`, as a matrix in lower echelon form. Each pivot is positive and
/// the entries to its left in the same row lie in `[0, pivot)`.
pub fn column_hermite_form(m: &IntMatrix) -> IntMatrix {
    let (r, c) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut k = 0;
    for i in 0..r {
        if k == c {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in k..c {
                if !h[(i, j)].is_zero() && best.is_none_or(|b| h[(i, j)].abs() < h[(i, b)].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(k, b);
            let mut done = true;
            for j in k + 1..c {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = h[(i, j)].div_floor(&h[(i, k)]);
                h.add_col_multiple(j, k, &-&q);
                if !h[(i, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(i, k)].is_zero() {
            continue;
        }
        if h[(i, k)].is_negative() {
            h.negate_col(k);
        }
        for j in 0..k {
            let q = h[(i, j)].div_floor(&h[(i, k)]);
            h.add_col_multiple(j, k, &-&q);
        }
        k += 1;
    }
    let keep: Vec<usize> = (0..k).collect();
    let all_rows: Vec<usize> = (0..r).collect();
    h.select(&all_rows, &keep)
}

/// Unimodular `M` with `M w = e1`.
pub fn primitive_extension(w: &[BigInt]) -> Result<IntMatrix, LinalgError> {
    let n = w.len();
    if n == 0 {
        return Err(LinalgError::DimensionMismatch("empty vector".into()));
    }
    let g = gcd_all(w.iter());
    if !g.is_one() {
        return Err(LinalgError::NotPrimitive(g));
    }
    let mut m = IntMatrix::identity(n);
    let mut v: Vec<BigInt> = w.to_vec();
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| !v[i].is_zero()).collect();
        if nz.len() == 1 {
            let p = nz[0];
            m.swap_rows(0, p);
            v.swap(0, p);
            break;
        }
        let p = *nz.iter().min_by_key(|&&i| v[i].abs()).unwrap();
        for &i in &nz {
            if i == p {
                continue;
            }
            let q = v[i].div_floor(&v[p]);
            v[i] = &v[i] - &q * &v[p];
            m.add_row_multiple(i, p, &-&q);
        }
    }
    if v[0].is_negative() {
        m.negate_row(0);
    }
    Ok(m)
}

/// All integer solutions of `m x = b`: a particular solution and a basis of
/// the integer kernel (as columns), or `None` when no integer solution exists.
pub fn integer_solve(m: &IntMatrix, b: &[BigInt]) -> Option<(Vec<BigInt>, IntMatrix)> {
    assert_eq!(m.rows(), b.len(), "right-hand side length");
    let snf = smith_normal_form(m);
    let ub = snf.u.mul_vec(b);
    let n = m.cols();
    let mut y = vec![BigInt::zero(); n];
    for (i, ubi) in ub.iter().enumerate() {
        let di = if i < n { snf.d[(i, i)].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !ubi.is_zero() {
                return None;
            }
        } else {
            if !ubi.is_multiple_of(&di) {
                return None;
            }
            y[i] = ubi / &di;
        }
    }
    let x = snf.v.mul_vec(&y);
    let rank = snf.rank();
    let kernel_cols: Vec<Vec<BigInt>> = (rank..n).map(|j| snf.v.column(j)).collect();
    let kernel = IntMatrix::from_columns(n, &kernel_cols);
    Some((x, kernel))
}
