//! Smith normal form over ℤ with unimodular transforms.

use super::{Int, IntMat};
use num_traits::{One, Signed, Zero};

/// `u * a * v = d`, with `d` diagonal, nonnegative, divisibility chain
/// `d_1 | d_2 | …`, and `|det u| = |det v| = 1`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMat,
    pub u: IntMat,
    pub v: IntMat,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        let k = self.d.rows.min(self.d.cols);
        (0..k).filter(|&i| !self.d[(i, i)].is_zero()).count()
    }

    pub fn invariant_factors(&self) -> Vec<Int> {
        let k = self.d.rows.min(self.d.cols);
        (0..k).map(|i| self.d[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }
}

fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (Int::one(), Int::zero());
    let (mut old_t, mut t) = (Int::zero(), Int::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let tmp = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, tmp);
        let tmp = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, tmp);
        let tmp = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, tmp);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

struct Work {
    a: Vec<Vec<Int>>,
    u: Vec<Vec<Int>>,
    v: Vec<Vec<Int>>,
    m: usize,
    n: usize,
}

impl Work {
    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap(x, y);
        self.u.swap(x, y);
    }
    fn swap_cols(&mut self, x: usize, y: usize) {
        for row in &mut self.a {
            row.swap(x, y);
        }
        for row in &mut self.v {
            row.swap(x, y);
        }
    }
    fn addmul_row(&mut self, dst: usize, src: usize, k: &Int) {
        for j in 0..self.n {
            let t = &self.a[src][j] * k;
            self.a[dst][j] += t;
        }
        for j in 0..self.m {
            let t = &self.u[src][j] * k;
            self.u[dst][j] += t;
        }
    }
    fn addmul_col(&mut self, dst: usize, src: usize, k: &Int) {
        for row in &mut self.a {
            let t = &row[src] * k;
            row[dst] += t;
        }
        for row in &mut self.v {
            let t = &row[src] * k;
            row[dst] += t;
        }
    }
    fn scale_row(&mut self, r: usize) {
        for x in &mut self.a[r] {
            *x = -x.clone();
        }
        for x in &mut self.u[r] {
            *x = -x.clone();
        }
    }
    /// replace rows (i, j) by (x·r_i + y·r_j, -(b/g)·r_i + (a/g)·r_j)
    fn gcd_rows(&mut self, i: usize, j: usize, col: usize) {
        let a = self.a[i][col].clone();
        let b = self.a[j][col].clone();
        let (g, x, y) = ext_gcd(&a, &b);
        let (p, q) = (-&b / &g, &a / &g);
        for c in 0..self.n {
            let ri = &x * &self.a[i][c] + &y * &self.a[j][c];
            let rj = &p * &self.a[i][c] + &q * &self.a[j][c];
            self.a[i][c] = ri;
            self.a[j][c] = rj;
        }
        for c in 0..self.m {
            let ri = &x * &self.u[i][c] + &y * &self.u[j][c];
            let rj = &p * &self.u[i][c] + &q * &self.u[j][c];
            self.u[i][c] = ri;
            self.u[j][c] = rj;
        }
    }
}

pub fn smith_normal_form(input: &IntMat) -> SmithForm {
    let (m, n) = (input.rows, input.cols);
    let mut w = Work {
        a: (0..m).map(|i| (0..n).map(|j| input[(i, j)].clone()).collect()).collect(),
        u: (0..m).map(|i| (0..m).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()).collect(),
        v: (0..n).map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()).collect(),
        m,
        n,
    };
    let k = m.min(n);
    let mut t = 0;
    while t < k {
        // smallest nonzero |entry| in the trailing block as pivot
        let mut piv: Option<(usize, usize)> = None;
        let mut best: Option<Int> = None;
        for i in t..m {
            for j in t..n {
                let x = w.a[i][j].abs();
                if !x.is_zero() && best.as_ref().map_or(true, |b| &x < b) {
                    best = Some(x);
                    piv = Some((i, j));
                }
            }
        }
        let Some((i0, j0)) = piv else { break };
        if i0 != t {
            w.swap_rows(t, i0);
        }
        if j0 != t {
            w.swap_cols(t, j0);
        }
        loop {
            let mut progress = false;
            for i in t + 1..m {
                if !w.a[i][t].is_zero() {
                    let q = -(&w.a[i][t] / &w.a[t][t]);
                    if !q.is_zero() {
                        w.addmul_row(i, t, &q);
                    }
                    if !w.a[i][t].is_zero() {
                        w.swap_rows(t, i);
                        progress = true;
                    }
                }
            }
            for j in t + 1..n {
                if !w.a[t][j].is_zero() {
                    let q = -(&w.a[t][j] / &w.a[t][t]);
                    if !q.is_zero() {
                        w.addmul_col(j, t, &q);
                    }
                    if !w.a[t][j].is_zero() {
                        w.swap_cols(t, j);
                        progress = true;
                    }
                }
            }
            if !progress {
                let row_clear = (t + 1..m).all(|i| w.a[i][t].is_zero());
                let col_clear = (t + 1..n).all(|j| w.a[t][j].is_zero());
                if row_clear && col_clear {
                    break;
                }
            }
        }
        t += 1;
    }
    // divisibility chain
    loop {
        let mut changed = false;
        for i in 0..k.saturating_sub(1) {
            let a = w.a[i][i].clone();
            let b = w.a[i + 1][i + 1].clone();
            if !a.is_zero() && !b.is_zero() && !(&b % &a).is_zero() {
                w.addmul_col(i, i + 1, &Int::one());
                w.gcd_rows(i, i + 1, i);
                // clear the (i, i+1) entry created by the row combination
                if !w.a[i][i + 1].is_zero() {
                    let q = -(&w.a[i][i + 1] / &w.a[i][i]);
                    w.addmul_col(i + 1, i, &q);
                    assert!(w.a[i][i + 1].is_zero(), "divisibility fix must clear entry");
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for i in 0..k {
        if w.a[i][i].is_negative() {
            w.scale_row(i);
        }
    }
    let d = IntMat::from_fn(m, n, |i, j| w.a[i][j].clone());
    let u = IntMat::from_fn(m, m, |i, j| w.u[i][j].clone());
    let v = IntMat::from_fn(n, n, |i, j| w.v[i][j].clone());
    SmithForm { d, u, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int;
    use proptest::prelude::*;

    fn check(a: &IntMat) {
        let f = smith_normal_form(a);
        assert_eq!(f.u.mul(a).mul(&f.v), f.d, "U A V = D");
        assert!(f.u.det().abs().is_one());
        assert!(f.v.det().abs().is_one());
        let k = a.rows.min(a.cols);
        for i in 0..k.saturating_sub(1) {
            let (x, y) = (&f.d[(i, i)], &f.d[(i + 1, i + 1)]);
            if !y.is_zero() {
                assert!(!x.is_zero() && (y % x).is_zero(), "divisibility chain");
            }
        }
        for i in 0..a.rows {
            for j in 0..a.cols {
                if i != j {
                    assert!(f.d[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_identity() {
        let f = smith_normal_form(&IntMat::identity(3));
        assert_eq!(f.invariant_factors(), vec![int(1), int(1), int(1)]);
    }

    #[test]
    fn snf_spec_example() {
        // d1 = gcd of entries = 2, d1*d2 = |det| = 8
        let a = IntMat::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let f = smith_normal_form(&a);
        assert_eq!(f.invariant_factors(), vec![int(2), int(4)]);
        check(&a);
    }

    #[test]
    fn snf_zero() {
        let a = IntMat::zero(2, 2);
        let f = smith_normal_form(&a);
        assert_eq!(f.rank(), 0);
        check(&a);
    }

    proptest! {
        #[test]
        fn snf_random(rows in 1usize..6, cols in 1usize..6, seed in 0u64..400) {
            let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(rows as u64);
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) % 19) as i64 - 9
            };
            let a = IntMat::from_fn(rows, cols, |_, _| int(next()));
            check(&a);
        }
    }
}
