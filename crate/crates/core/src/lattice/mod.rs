//! Exact integer and rational linear algebra plus exterior-algebra
//! combinatorics. Everything downstream sits on these types.

mod snf;
mod solve;
mod wedge;

pub use snf::{smith_normal_form, SmithForm};
pub use solve::{kernel_basis_q, rank_q, solve_exact, RatSolver};
pub use wedge::{
    contraction_matrix, induced_wedge_map, wedge_basis, wedge_dim, wedge_rect,
    wedge_with_covector, WedgeBasis,
};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

/// Dense matrix over arbitrary-precision integers, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

/// Dense matrix over exact rationals, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = int(*v);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Int) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn column(v: &[Int]) -> Self {
        Self::from_fn(v.len(), 1, |i, _| v[i].clone())
    }

    pub fn col_vec(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn hstack(blocks: &[&IntMat]) -> Self {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zero(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for i in 0..rows {
                for j in 0..b.cols {
                    m[(i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[&IntMat]) -> Self {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zero(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            for i in 0..b.rows {
                for j in 0..cols {
                    m[(off + i, j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "IntMat::mul shape");
        let mut m = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        m[(i, j)] += prod;
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn neg(&self) -> IntMat {
        IntMat::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn to_rat(&self) -> RatMat {
        RatMat::from_fn(self.rows, self.cols, |i, j| rat_int(&self[(i, j)]))
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a: Vec<Vec<Int>> =
            (0..n).map(|i| (0..n).map(|j| self[(i, j)].clone()).collect()).collect();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Int::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = &num / &prev;
                }
            }
            for i in k + 1..n {
                a[i][k] = Int::zero();
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// Inverse of a matrix with determinant ±1.
    pub fn inv_unimodular(&self) -> IntMat {
        let inv = self.to_rat().inverse().expect("unimodular matrix is invertible");
        IntMat::from_fn(self.rows, self.cols, |i, j| {
            let x = &inv[(i, j)];
            assert!(x.denom().is_one(), "inverse of unimodular matrix must be integral");
            x.numer().clone()
        })
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

impl RatMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn column(v: &[Rat]) -> Self {
        Self::from_fn(v.len(), 1, |i, _| v[i].clone())
    }

    pub fn col_vec(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn hstack(blocks: &[&RatMat]) -> Self {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zero(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for i in 0..rows {
                for j in 0..b.cols {
                    m[(i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[&RatMat]) -> Self {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zero(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            for i in 0..b.rows {
                for j in 0..cols {
                    m[(off + i, j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "RatMat::mul shape");
        let mut m = RatMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        m[(i, j)] += prod;
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn sub(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMat::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&i| !a[(i, col)].is_zero())?;
            if piv != col {
                for j in 0..n {
                    let t = a[(piv, j)].clone();
                    a[(piv, j)] = a[(col, j)].clone();
                    a[(col, j)] = t;
                    let t = inv[(piv, j)].clone();
                    inv[(piv, j)] = inv[(col, j)].clone();
                    inv[(col, j)] = t;
                }
            }
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] / &p;
                inv[(col, j)] = &inv[(col, j)] / &p;
            }
            for i in 0..n {
                if i == col || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)].clone();
                for j in 0..n {
                    let sub = &f * &a[(col, j)];
                    a[(i, j)] = &a[(i, j)] - &sub;
                    let sub = &f * &inv[(col, j)];
                    inv[(i, j)] = &inv[(i, j)] - &sub;
                }
            }
        }
        Some(inv)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.denom().is_one())
    }

    pub fn to_int(&self) -> Option<IntMat> {
        if !self.is_integral() {
            return None;
        }
        Some(IntMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].numer().clone()))
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Divide a nonzero integer vector by the gcd of its entries.
pub fn primitive(v: &[Int]) -> Result<Vec<Int>> {
    let mut g = Int::zero();
    for x in v {
        g = num_integer::Integer::gcd(&g, x);
    }
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Content (gcd of entries), zero for the zero vector.
pub fn content(v: &[Int]) -> Int {
    let mut g = Int::zero();
    for x in v {
        g = num_integer::Integer::gcd(&g, x);
    }
    g
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add_vec(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(k: &Int, a: &[Int]) -> Vec<Int> {
    a.iter().map(|x| k * x).collect()
}

pub fn int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

/// Basis (columns) of `{x ∈ ℤ^n : M x = 0}`; always a saturated lattice.
pub fn integer_kernel(m: &IntMat) -> IntMat {
    let f = smith_normal_form(m);
    let rank = f.rank();
    let n = m.cols;
    IntMat::from_fn(n, n - rank, |i, j| f.v[(i, rank + j)].clone())
}

/// Basis (columns) of `span_ℚ(cols) ∩ ℤ^n` — the saturation of the column span.
pub fn saturated_span(cols: &IntMat) -> IntMat {
    if cols.cols == 0 {
        return IntMat::zero(cols.rows, 0);
    }
    // functionals vanishing on the span
    let d = integer_kernel(&cols.transpose());
    if d.cols == 0 {
        return IntMat::identity(cols.rows);
    }
    integer_kernel(&d.transpose())
}

/// Complete a primitive vector to a ℤ-basis: returns `M ∈ GL_n(ℤ)` with
/// `det M = +1` and last column `v` (needs n ≥ 2 for the sign fix).
pub fn complete_to_unimodular(v: &[Int]) -> Result<IntMat> {
    let n = v.len();
    if content(v).abs() != Int::one() {
        return Err(Error::Invalid("vector is not primitive".into()));
    }
    let m = IntMat::from_fn(n, 1, |i, _| v[i].clone());
    let f = smith_normal_form(&m);
    // u * v_col * v(1x1) = e_1  =>  columns of u^{-1}: first column = ±v
    let uinv = f.u.inv_unimodular();
    // permute so v ends up last
    let mut cols: Vec<Vec<Int>> = (1..n).map(|j| uinv.col_vec(j)).collect();
    // first column of uinv is v or -v depending on snf sign handling
    let first = uinv.col_vec(0);
    let v_scaled: Vec<Int> = {
        // f.d[(0,0)] is the content = 1; u * v = d e_1, so uinv e_1 = v / d
        first
    };
    let mut last = v_scaled;
    if last != v {
        // flipped sign
        let neg: Vec<Int> = last.iter().map(|x| -x.clone()).collect();
        assert_eq!(neg, v, "snf completion mismatch");
        last = neg;
        // compensate determinant by flipping one of the other columns
        if let Some(c0) = cols.first_mut() {
            for x in c0.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    cols.push(last);
    let mut out = IntMat::from_fn(n, n, |i, j| cols[j][i].clone());
    if out.det() == -Int::one() {
        for i in 0..n {
            out[(i, 0)] = -out[(i, 0)].clone();
        }
    }
    debug_assert!(out.det().is_one());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&int_vec(&[4, 6])).unwrap(), int_vec(&[2, 3]));
        assert_eq!(primitive(&int_vec(&[1, 0, 0])).unwrap(), int_vec(&[1, 0, 0]));
        assert_eq!(primitive(&int_vec(&[-2, -4])).unwrap(), int_vec(&[-1, -2]));
        assert!(matches!(primitive(&int_vec(&[0, 0])), Err(Error::ZeroVector)));
    }

    #[test]
    fn det_small() {
        let m = IntMat::from_rows(vec![vec![2, 4], vec![6, 8]]);
        assert_eq!(m.det(), int(-8));
        assert_eq!(IntMat::identity(3).det(), int(1));
    }

    #[test]
    fn unimodular_completion() {
        for v in [vec![1i64, 0], vec![0, -1], vec![2, 3], vec![3, -5, 7], vec![-1, -1, -1]] {
            let vi = int_vec(&v);
            let m = complete_to_unimodular(&vi).unwrap();
            assert!(m.det().is_one());
            assert_eq!(m.col_vec(m.cols - 1), vi);
        }
    }

    proptest! {
        #[test]
        fn saturated_span_contains_and_saturates(
            n in 2usize..5, k in 1usize..4, seed in 0u64..500
        ) {
            // deterministic pseudo-random small vectors
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) % 9) as i64 - 4
            };
            let cols = IntMat::from_fn(n, k, |_, _| int(next()));
            let sat = saturated_span(&cols);
            // every original column is an integer combination of sat columns
            if sat.cols > 0 {
                let satq = sat.to_rat();
                for j in 0..k {
                    let target: Vec<Rat> = cols.col_vec(j).iter().map(rat_int).collect();
                    let sol = solve_exact(&satq, &target);
                    if cols.col_vec(j).iter().any(|x| !x.is_zero()) {
                        let sol = sol.expect("column must be in saturation");
                        prop_assert!(sol.iter().all(|x| x.denom().is_one()));
                    }
                }
            }
        }
    }
}
