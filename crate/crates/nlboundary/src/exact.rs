//! Exact integer and rational linear algebra.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;
pub type IntVector = Vec<BigInt>;
pub type RatVector = Vec<BigRational>;

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        Matrix { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: &[Vec<T>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn row_vec(&self, i: usize) -> Vec<T> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> Self {
        let rows: Vec<Vec<T>> = idx.into_iter().map(|i| self.row_vec(i)).collect();
        Matrix::from_rows(&rows, self.cols)
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, T> Mul<&'a Matrix<T>> for &'a Matrix<T>
where
    T: Clone + Zero + One,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    type Output = Matrix<T>;
    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let p = a * &rhs[(k, j)];
                    out[(i, j)] = out[(i, j)].clone() + p;
                }
            }
        }
        out
    }
}

impl<'a, T> Add<&'a Matrix<T>> for &'a Matrix<T>
where
    T: Clone,
    for<'x> &'x T: Add<&'x T, Output = T>,
{
    type Output = Matrix<T>;
    fn add(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl<'a, T> Sub<&'a Matrix<T>> for &'a Matrix<T>
where
    T: Clone,
    for<'x> &'x T: Sub<&'x T, Output = T>,
{
    type Output = Matrix<T>;
    fn sub(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl<'a, T> Neg for &'a Matrix<T>
where
    for<'x> &'x T: Neg<Output = T>,
{
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a * c)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Bilinear pairing `x^T M y`.
    pub fn pair(&self, x: &[T], y: &[T]) -> T {
        let my = self.mul_vec(y);
        x.iter().zip(&my).fold(T::zero(), |acc, (a, b)| acc + a * b)
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Build an integer matrix from small literal rows.
pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    let cols = rows.first().map_or(0, |r| r.len());
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    Matrix::from_rows(&rows, cols)
}

pub fn int_vector(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_rat(m: &IntMatrix) -> RatMatrix {
    m.map(|x| BigRational::from_integer(x.clone()))
}

pub fn to_rat_vec(v: &[BigInt]) -> RatVector {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Integer matrix if every entry is integral.
pub fn to_int(m: &RatMatrix) -> Option<IntMatrix> {
    if m.data().iter().all(|x| x.is_integer()) {
        Some(m.map(|x| x.to_integer()))
    } else {
        None
    }
}

pub fn to_int_vec(v: &[BigRational]) -> Option<IntVector> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

/// Scale each row by the lcm of its denominators; the row space over Q is unchanged.
pub fn clear_row_denominators(m: &RatMatrix) -> IntMatrix {
    let rows: Vec<IntVector> = (0..m.rows()).map(|i| clear_denominators(m.row(i))).collect();
    Matrix::from_rows(&rows, m.cols())
}

pub fn clear_denominators(v: &[BigRational]) -> IntVector {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
}

pub fn rat_dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..m.cols {
        let v = &m[(src, j)] * q;
        m[(dst, j)] += v;
    }
}

fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.rows {
        let v = &m[(i, src)] * q;
        m[(i, dst)] += v;
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for j in 0..m.cols {
        let v = -&m[(i, j)];
        m[(i, j)] = v;
    }
}

/// Smith normal form: returns `(U, D, V)` with `U*M*V = D`.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &d[(i, j)];
                    if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..r {
                if !d[(i, t)].is_zero() {
                    let q = -d[(i, t)].div_floor(&d[(t, t)]);
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                    clean &= d[(i, t)].is_zero();
                }
            }
            for j in t + 1..c {
                if !d[(t, j)].is_zero() {
                    let q = -d[(t, j)].div_floor(&d[(t, t)]);
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                    clean &= d[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    row_axpy(&mut d, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    (u, d, v)
}

/// Diagonal of the Smith form.
pub fn elementary_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let (_, d, _) = smith_normal_form(m);
    (0..d.rows.min(d.cols)).map(|i| d[(i, i)].clone()).collect()
}

pub fn rank_int(m: &IntMatrix) -> usize {
    elementary_divisors(m).iter().filter(|x| !x.is_zero()).count()
}

/// Row Hermite normal form with positive pivots, zero rows dropped.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut h = m.clone();
    let (r, c) = (h.rows, h.cols);
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for j in 0..c {
        if pivot_row == r {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..r {
                if !h[(i, j)].is_zero() && best.map_or(true, |b| h[(i, j)].abs() < h[(b, j)].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..r {
                if !h[(i, j)].is_zero() {
                    let q = -h[(i, j)].div_floor(&h[(pivot_row, j)]);
                    row_axpy(&mut h, i, pivot_row, &q);
                    done &= h[(i, j)].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < r && !h[(pivot_row, j)].is_zero() {
            if h[(pivot_row, j)].is_negative() {
                negate_row(&mut h, pivot_row);
            }
            for i in 0..pivot_row {
                let q = -h[(i, j)].div_floor(&h[(pivot_row, j)]);
                row_axpy(&mut h, i, pivot_row, &q);
            }
            pivots.push(j);
            pivot_row += 1;
        }
    }
    h.select_rows(0..pivot_row)
}

/// Saturated Z-basis of the integer kernel `{x : M x = 0}`, rows in Hermite order.
pub fn kernel_saturated(m: &IntMatrix) -> IntMatrix {
    let (_, d, v) = smith_normal_form(m);
    let rank = (0..d.rows.min(d.cols)).filter(|&i| !d[(i, i)].is_zero()).count();
    let k = v.transpose().select_rows(rank..m.cols);
    if k.rows == 0 {
        return k;
    }
    hermite_normal_form(&k)
}

/// `Z^n` intersected with the rational row span of `m`.
pub fn saturate(m: &IntMatrix) -> IntMatrix {
    let k = kernel_saturated(m);
    kernel_saturated(&k)
}

pub fn saturate_rat(m: &RatMatrix) -> IntMatrix {
    saturate(&clear_row_denominators(m))
}

/// True when the rows are independent and span a saturated sublattice.
pub fn is_primitive(m: &IntMatrix) -> bool {
    let ed = elementary_divisors(m);
    ed.len() == m.rows && ed.iter().all(One::is_one)
}

pub fn det_int(m: &IntMatrix) -> BigInt {
    assert!(m.is_square());
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    // Bareiss fraction-free elimination.
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CokernelOrder {
    Finite(BigInt),
    Infinite,
}

/// Order of `Z^n / M Z^n` for square `M`.
pub fn cokernel_order(m: &IntMatrix) -> CokernelOrder {
    assert!(m.is_square(), "cokernel_order needs a square matrix");
    let det = det_int(m).abs();
    let prod = elementary_divisors(m).iter().fold(BigInt::one(), |a, d| a * d);
    assert_eq!(det, prod, "determinant and Smith diagonal disagree");
    if det.is_zero() {
        CokernelOrder::Infinite
    } else {
        CokernelOrder::Finite(det)
    }
}

/// Reduced row echelon form; returns pivot columns.
fn rref(a: &mut RatMatrix) -> Vec<usize> {
    let (r, c) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut row = 0;
    for j in 0..c {
        if row == r {
            break;
        }
        let Some(p) = (row..r).find(|&i| !a[(i, j)].is_zero()) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = a[(row, j)].recip();
        for k in 0..c {
            let v = &a[(row, k)] * &inv;
            a[(row, k)] = v;
        }
        for i in 0..r {
            if i != row && !a[(i, j)].is_zero() {
                let f = a[(i, j)].clone();
                for k in 0..c {
                    let v = &a[(row, k)] * &f;
                    a[(i, k)] -= v;
                }
            }
        }
        pivots.push(j);
        row += 1;
    }
    pivots
}

pub fn rank_rat(m: &RatMatrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Exact solution of `A x = b`, or `None` when inconsistent. Free variables are set to zero.
pub fn solve_rational(a: &RatMatrix, b: &[BigRational]) -> Option<RatVector> {
    assert_eq!(a.rows, b.len(), "solve_rational shape");
    let mut aug = RatMatrix::zeros(a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols)] = b[i].clone();
    }
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); a.cols];
    for (row, &j) in pivots.iter().enumerate() {
        x[j] = aug[(row, a.cols)].clone();
    }
    Some(x)
}

pub fn inverse_rat(m: &RatMatrix) -> Option<RatMatrix> {
    assert!(m.is_square());
    let n = m.rows;
    let mut aug = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = BigRational::one();
    }
    let pivots = rref(&mut aug);
    if n == 0 {
        return Some(RatMatrix::zeros(0, 0));
    }
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let mut inv = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = aug[(i, n + j)].clone();
        }
    }
    Some(inv)
}

/// Coordinates of `v` in the row basis `basis`, if `v` lies in its rational span.
pub fn coordinates(basis: &RatMatrix, v: &[BigRational]) -> Option<RatVector> {
    solve_rational(&basis.transpose(), v)
}

/// Integer solution of `M x = c`, if one exists.
pub fn solve_integer(m: &IntMatrix, c: &[BigInt]) -> Option<IntVector> {
    let (u, d, v) = smith_normal_form(m);
    let uc = u.mul_vec(c);
    let mut y = vec![BigInt::zero(); m.cols];
    for (i, val) in uc.iter().enumerate() {
        let di = if i < d.cols { d[(i, i)].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !val.is_zero() {
                return None;
            }
        } else {
            let (q, r) = val.div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(v.mul_vec(&y))
}

/// Given a saturated sublattice `sub` of the lattice spanned by the rows of `full`,
/// return rows of `full`'s lattice whose images form a basis of the quotient.
pub fn complement_basis(sub: &IntMatrix, full: &IntMatrix) -> IntMatrix {
    let f = full.rows;
    let fr = to_rat(full);
    let coords: Vec<IntVector> = (0..sub.rows)
        .map(|i| {
            let x = coordinates(&fr, &to_rat_vec(sub.row(i))).expect("sub lies in full span");
            to_int_vec(&x).expect("sub lies in full lattice")
        })
        .collect();
    let c = Matrix::from_rows(&coords, f);
    let mut chosen = c.clone();
    let mut picks: Vec<IntVector> = Vec::new();
    for j in 0..f {
        if chosen.rows == f {
            break;
        }
        let mut e = vec![BigInt::zero(); f];
        e[j] = BigInt::one();
        let cand = chosen.vstack(&Matrix::from_rows(&[e.clone()], f));
        if is_primitive(&cand) {
            chosen = cand;
            picks.push(e);
        }
    }
    if chosen.rows < f {
        // Greedy choice of standard vectors failed; fall back to the Smith complement.
        let (_, _, v) = smith_normal_form(&c);
        let vinv = inverse_rat(&to_rat(&v)).expect("unimodular");
        let vinv = to_int(&vinv).expect("unimodular inverse is integral");
        picks = (c.rows..f).map(|i| vinv.row_vec(i)).collect();
    }
    if picks.is_empty() {
        return IntMatrix::zeros(0, full.cols);
    }
    &Matrix::from_rows(&picks, f) * full
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn to_u64(x: &BigInt) -> Option<u64> {
    x.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_identity() {
        let m = int_matrix(&[&[1, 0], &[0, 1]]);
        let (u, d, v) = smith_normal_form(&m);
        assert_eq!(d, m);
        assert_eq!(&(&u * &m) * &v, d);
    }

    #[test]
    fn snf_diag_2_3() {
        let m = int_matrix(&[&[2, 0], &[0, 3]]);
        let (u, d, v) = smith_normal_form(&m);
        assert_eq!(d, int_matrix(&[&[1, 0], &[0, 6]]));
        assert_eq!(&(&u * &m) * &v, d);
        assert_eq!(det_int(&u).abs(), BigInt::one());
        assert_eq!(det_int(&v).abs(), BigInt::one());
    }

    #[test]
    fn snf_2468() {
        let m = int_matrix(&[&[2, 4], &[6, 8]]);
        let (u, d, v) = smith_normal_form(&m);
        assert_eq!(d, int_matrix(&[&[2, 0], &[0, 4]]));
        assert_eq!(&(&u * &m) * &v, d);
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel_saturated(&int_matrix(&[&[1, 1]])), int_matrix(&[&[1, -1]]));
        assert_eq!(kernel_saturated(&int_matrix(&[&[2, 4]])), int_matrix(&[&[2, -1]]));
        assert_eq!(kernel_saturated(&IntMatrix::identity(3)).rows(), 0);
        assert_eq!(kernel_saturated(&IntMatrix::zeros(2, 3)), IntMatrix::identity(3));
    }

    #[test]
    fn solve() {
        let x = solve_rational(&to_rat(&IntMatrix::identity(2)), &[rat(3, 2), rat(-1, 1)]);
        assert_eq!(x, Some(vec![rat(3, 2), rat(-1, 1)]));
        assert_eq!(solve_rational(&to_rat(&int_matrix(&[&[2]])), &[rat(1, 1)]), Some(vec![rat(1, 2)]));
        assert_eq!(solve_rational(&to_rat(&int_matrix(&[&[1], &[1]])), &[rat(0, 1), rat(1, 1)]), None);
    }

    #[test]
    fn cokernels() {
        assert_eq!(cokernel_order(&int_matrix(&[&[2]])), CokernelOrder::Finite(2.into()));
        assert_eq!(cokernel_order(&IntMatrix::identity(3)), CokernelOrder::Finite(1.into()));
        assert_eq!(cokernel_order(&int_matrix(&[&[2, 0], &[0, 3]])), CokernelOrder::Finite(6.into()));
        assert_eq!(cokernel_order(&int_matrix(&[&[1, 2], &[2, 4]])), CokernelOrder::Infinite);
    }

    #[test]
    fn saturation() {
        assert_eq!(saturate(&int_matrix(&[&[0, 0, 2, 0]])), int_matrix(&[&[0, 0, 1, 0]]));
        assert_eq!(saturate(&int_matrix(&[&[2, 4], &[3, 6]])), int_matrix(&[&[1, 2]]));
    }

    #[test]
    fn integer_solve() {
        let m = int_matrix(&[&[2, 4]]);
        assert!(solve_integer(&m, &int_vector(&[3])).is_none());
        let x = solve_integer(&m, &int_vector(&[6])).unwrap();
        assert_eq!(m.mul_vec(&x), int_vector(&[6]));
    }

    #[test]
    fn complement_prefers_standard_vectors() {
        let full = int_matrix(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let sub = int_matrix(&[&[0, 0, 1, 0]]);
        assert_eq!(complement_basis(&sub, &full), int_matrix(&[&[0, 1, 0, 0], &[0, 0, 0, 1]]));
    }

    #[test]
    fn bareiss_det() {
        assert_eq!(det_int(&int_matrix(&[&[0, 0, 1], &[0, -2, 0], &[1, 0, 0]])), BigInt::from(2));
        assert_eq!(det_int(&int_matrix(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
    }
}
