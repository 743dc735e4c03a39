//! Exact rank, kernel and solving over ℚ.
//!
//! Dense fraction-free style elimination; everything here is desk
//! scale, the big sparse complexes live in `cech::sparse`.

use super::{Rat, RatMat};
use num_traits::{One, Zero};

/// Rank over ℚ by Gaussian elimination.
pub fn rank_q(a: &RatMat) -> usize {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
        if p != r {
            for j in 0..cols {
                let t = m[(p, j)].clone();
                m[(p, j)] = m[(r, j)].clone();
                m[(r, j)] = t;
            }
        }
        let piv = m[(r, c)].clone();
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = &m[(i, c)] / &piv;
            for j in c..cols {
                let s = &f * &m[(r, j)];
                m[(i, j)] = &m[(i, j)] - &s;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Basis of ker(a) over ℚ, as columns; deterministic echelon form.
pub fn kernel_basis_q(a: &RatMat) -> RatMat {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
        if p != r {
            for j in 0..cols {
                let t = m[(p, j)].clone();
                m[(p, j)] = m[(r, j)].clone();
                m[(r, j)] = t;
            }
        }
        let piv = m[(r, c)].clone();
        for j in 0..cols {
            m[(r, j)] = &m[(r, j)] / &piv;
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in 0..cols {
                let s = &f * &m[(r, j)];
                m[(i, j)] = &m[(i, j)] - &s;
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut out = RatMat::zero(cols, free_cols.len());
    for (k, &fc) in free_cols.iter().enumerate() {
        out[(fc, k)] = Rat::one();
        for &(pr, pc) in &pivots {
            out[(pc, k)] = -m[(pr, fc)].clone();
        }
    }
    out
}

/// Solve `B x = w` for B with full column rank; `None` if inconsistent.
pub fn solve_exact(b: &RatMat, w: &[Rat]) -> Option<Vec<Rat>> {
    let mut solver = RatSolver::new(b.rows);
    for j in 0..b.cols {
        solver.push_column(b.col_vec(j));
    }
    solver.solve(w)
}

/// Incremental exact column-echelon solver: push spanning columns, then
/// express targets in that span with coefficients of the pushed columns.
pub struct RatSolver {
    dim: usize,
    // echelon columns with their pivot positions and coefficient tails
    columns: Vec<(Vec<Rat>, usize, Vec<Rat>)>,
    n_pushed: usize,
}

impl RatSolver {
    pub fn new(dim: usize) -> Self {
        RatSolver { dim, columns: Vec::new(), n_pushed: 0 }
    }

    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    /// Returns true when the column enlarged the span.
    pub fn push_column(&mut self, col: Vec<Rat>) -> bool {
        assert_eq!(col.len(), self.dim);
        let idx = self.n_pushed;
        self.n_pushed += 1;
        let mut tail = vec![Rat::zero(); idx + 1];
        tail[idx] = Rat::one();
        let mut col = col;
        for (ec, piv, et) in &self.columns {
            if col[*piv].is_zero() {
                continue;
            }
            let f = col[*piv].clone();
            for i in 0..self.dim {
                if !ec[i].is_zero() {
                    let s = &f * &ec[i];
                    col[i] = &col[i] - &s;
                }
            }
            for (i, t) in et.iter().enumerate() {
                if !t.is_zero() {
                    let s = &f * t;
                    if i < tail.len() {
                        tail[i] = &tail[i] - &s;
                    } else {
                        tail.resize(i + 1, Rat::zero());
                        tail[i] = -s;
                    }
                }
            }
        }
        let Some(piv) = (0..self.dim).find(|&i| !col[i].is_zero()) else {
            return false;
        };
        let p = col[piv].clone();
        for x in col.iter_mut() {
            *x = &*x / &p;
        }
        for x in tail.iter_mut() {
            *x = &*x / &p;
        }
        self.columns.push((col, piv, tail));
        true
    }

    /// Express `w` as a combination of the pushed columns. Coefficients
    /// are indexed by push order; `None` if `w` is outside the span.
    pub fn solve(&self, w: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(w.len(), self.dim);
        let mut col = w.to_vec();
        let mut coeff = vec![Rat::zero(); self.n_pushed];
        for (ec, piv, et) in &self.columns {
            if col[*piv].is_zero() {
                continue;
            }
            let f = col[*piv].clone();
            for i in 0..self.dim {
                if !ec[i].is_zero() {
                    let s = &f * &ec[i];
                    col[i] = &col[i] - &s;
                }
            }
            for (i, t) in et.iter().enumerate() {
                if !t.is_zero() {
                    let s = &f * t;
                    coeff[i] = &coeff[i] + &s;
                }
            }
        }
        if col.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(coeff)
    }

    pub fn contains(&self, w: &[Rat]) -> bool {
        let mut col = w.to_vec();
        for (ec, piv, _) in &self.columns {
            if col[*piv].is_zero() {
                continue;
            }
            let f = col[*piv].clone();
            for i in 0..self.dim {
                if !ec[i].is_zero() {
                    let s = &f * &ec[i];
                    col[i] = &col[i] - &s;
                }
            }
        }
        col.iter().all(|x| x.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{int, rat_int, IntMat};
    use proptest::prelude::*;

    fn ratmat(rows: Vec<Vec<i64>>) -> RatMat {
        IntMat::from_rows(rows).to_rat()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_q(&RatMat::identity(4)), 4);
        assert_eq!(rank_q(&RatMat::zero(3, 3)), 0);
        assert_eq!(rank_q(&ratmat(vec![vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis_q(&RatMat::identity(3)).cols, 0);
        let k = kernel_basis_q(&ratmat(vec![vec![1, 1]]));
        assert_eq!(k.cols, 1);
        // (1, -1) up to scale
        let ratio = &k[(0, 0)] / &k[(1, 0)];
        assert_eq!(ratio, -rat_int(&int(1)));
        let k = kernel_basis_q(&ratmat(vec![vec![1, 2], vec![2, 4]]));
        assert_eq!(k.cols, 1);
        let ratio = &k[(0, 0)] / &k[(1, 0)];
        assert_eq!(ratio, rat_int(&int(-2)));
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 1usize..6, cols in 1usize..6, seed in 0u64..300) {
            let mut state = seed.wrapping_mul(0x2545F4914F6CDD1D).wrapping_add(cols as u64);
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) % 7) as i64 - 3
            };
            let a = IntMat::from_fn(rows, cols, |_, _| int(next())).to_rat();
            let r = rank_q(&a);
            let k = kernel_basis_q(&a);
            prop_assert_eq!(r + k.cols, cols);
            // A * kernel = 0
            let prod = a.mul(&k);
            prop_assert!(prod.is_zero());
        }
    }
}
