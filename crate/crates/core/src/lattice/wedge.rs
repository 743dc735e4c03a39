//! Wedge-power bases, induced maps, contraction and wedging.
//!
//! Basis of `∧^r ℤ^n`: strictly increasing r-tuples from `{0..n-1}` in
//! lexicographic order; every module in the crate shares this
//! convention so matrices compose across module boundaries.

use crate::error::{Error, Result};
use crate::lattice::{Int, IntMat};
use num_traits::{One, Zero};

#[derive(Clone, Debug)]
pub struct WedgeBasis {
    pub n: usize,
    pub r: usize,
    tuples: Vec<Vec<usize>>,
}

pub fn wedge_dim(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    num_integer::binomial(n as u64, r as u64) as usize
}

pub fn wedge_basis(n: usize, r: usize) -> WedgeBasis {
    let mut tuples = Vec::new();
    if r <= n {
        let mut cur: Vec<usize> = (0..r).collect();
        loop {
            tuples.push(cur.clone());
            if r == 0 {
                break;
            }
            // next lexicographic combination
            let mut i = r;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if cur[i] != i + n - r {
                    cur[i] += 1;
                    for j in i + 1..r {
                        cur[j] = cur[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    cur.clear();
                    break;
                }
            }
            if cur.is_empty() {
                break;
            }
        }
    }
    WedgeBasis { n, r, tuples }
}

impl WedgeBasis {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuple(&self, i: usize) -> &[usize] {
        &self.tuples[i]
    }

    pub fn index_of(&self, t: &[usize]) -> Option<usize> {
        self.tuples.binary_search_by(|probe| probe.as_slice().cmp(t)).ok()
    }
}

/// Matrix of `∧^r T` on the lex wedge basis (entries are r×r minors).
pub fn induced_wedge_map(t: &IntMat, r: usize) -> IntMat {
    assert_eq!(t.rows, t.cols, "wedge power of a square matrix");
    let n = t.rows;
    let basis = wedge_basis(n, r);
    let d = basis.len();
    IntMat::from_fn(d, d, |i, j| {
        let bi = basis.tuple(i);
        let bj = basis.tuple(j);
        minor(t, bi, bj)
    })
}

/// Wedge power of a rectangular matrix `B: ℤ^l → ℤ^m` on lex bases:
/// the matrix of `∧^r B : ∧^r ℤ^l → ∧^r ℤ^m` (entries are r×r minors).
pub fn wedge_rect(b: &IntMat, r: usize) -> IntMat {
    let (m, l) = (b.rows, b.cols);
    let rows_basis = wedge_basis(m, r);
    let cols_basis = wedge_basis(l, r);
    IntMat::from_fn(rows_basis.len(), cols_basis.len(), |i, j| {
        minor(b, rows_basis.tuple(i), cols_basis.tuple(j))
    })
}

fn minor(t: &IntMat, rows: &[usize], cols: &[usize]) -> Int {
    let r = rows.len();
    if r == 0 {
        return Int::one();
    }
    let sub = IntMat::from_fn(r, r, |i, j| t[(rows[i], cols[j])].clone());
    sub.det()
}

/// Matrix of the interior product `ι(m): ∧^r (ℤ^n)^* → ∧^{r-1} (ℤ^n)^*`
/// with the standard pairing; Koszul sign from the position of the
/// contracted index in the tuple.
pub fn contraction_matrix(m: &[Int], n: usize, r: usize) -> Result<IntMat> {
    if r == 0 || r > n {
        return Err(Error::DegreeOutOfRange { r, n });
    }
    assert_eq!(m.len(), n);
    let src = wedge_basis(n, r);
    let dst = wedge_basis(n, r - 1);
    let mut out = IntMat::zero(dst.len(), src.len());
    for j in 0..src.len() {
        let tup = src.tuple(j);
        for (k, &jk) in tup.iter().enumerate() {
            if m[jk].is_zero() {
                continue;
            }
            let rest: Vec<usize> = tup.iter().copied().filter(|&x| x != jk).collect();
            let i = dst.index_of(&rest).expect("subtuple in basis");
            let sign = if k % 2 == 0 { m[jk].clone() } else { -m[jk].clone() };
            out[(i, j)] += sign;
        }
    }
    Ok(out)
}

/// Matrix of `n ↦ d ∧ n : ∧^r → ∧^{r+1}` for a covector/vector `d`.
pub fn wedge_with_covector(d: &[Int], n: usize, r: usize) -> Result<IntMat> {
    if r + 1 > n {
        // wedging into degree beyond top: the zero map to a rank-0 target
        return Ok(IntMat::zero(0, wedge_dim(n, r)));
    }
    assert_eq!(d.len(), n);
    let src = wedge_basis(n, r);
    let dst = wedge_basis(n, r + 1);
    let mut out = IntMat::zero(dst.len(), src.len());
    for j in 0..src.len() {
        let tup = src.tuple(j);
        for (idx, di) in d.iter().enumerate() {
            if di.is_zero() || tup.contains(&idx) {
                continue;
            }
            let mut merged: Vec<usize> = Vec::with_capacity(r + 1);
            merged.push(idx);
            merged.extend_from_slice(tup);
            // sort idx into place, tracking the sign
            let pos = tup.iter().filter(|&&x| x < idx).count();
            let mut sorted = tup.to_vec();
            sorted.insert(pos, idx);
            let i = dst.index_of(&sorted).expect("tuple in basis");
            let sign = if pos % 2 == 0 { di.clone() } else { -di.clone() };
            out[(i, j)] += sign;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{int, int_vec};
    use proptest::prelude::*;

    #[test]
    fn basis_order() {
        let b = wedge_basis(4, 2);
        assert_eq!(b.len(), 6);
        assert_eq!(b.tuple(0), &[0, 1]);
        assert_eq!(b.tuple(5), &[2, 3]);
        assert_eq!(b.index_of(&[1, 3]), Some(4));
    }

    #[test]
    fn contraction_spec_examples() {
        // iota(e1)(e1* ^ e2*) = e2*
        let c = contraction_matrix(&int_vec(&[1, 0]), 2, 2).unwrap();
        assert_eq!(c, IntMat::from_rows(vec![vec![0], vec![1]]).transpose().transpose());
        assert_eq!(c[(1, 0)], int(1));
        assert_eq!(c[(0, 0)], int(0));
        // m = 0 gives zero matrix
        let c = contraction_matrix(&int_vec(&[0, 0]), 2, 2).unwrap();
        assert!(c.is_zero());
        // m = e1 + e2: iota(m)(e1*^e2*) = e2* - e1*
        let c = contraction_matrix(&int_vec(&[1, 1]), 2, 2).unwrap();
        assert_eq!(c[(0, 0)], int(-1));
        assert_eq!(c[(1, 0)], int(1));
    }

    #[test]
    fn wedge_map_examples() {
        // wedge^2 of identity is identity
        assert!(induced_wedge_map(&IntMat::identity(3), 2).is_identity());
        // top wedge is det
        let t = IntMat::from_rows(vec![vec![1, 1], vec![0, 1]]);
        let top = induced_wedge_map(&t, 2);
        assert_eq!(top.rows, 1);
        assert_eq!(top[(0, 0)], int(1));
    }

    fn pseudo(seed: &mut u64) -> i64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 33) % 7) as i64 - 3
    }

    proptest! {
        #[test]
        fn wedge_multiplicative(n in 2usize..5, r in 1usize..4, seed0 in 0u64..200) {
            prop_assume!(r <= n);
            let mut seed = seed0.wrapping_add(17);
            let a = IntMat::from_fn(n, n, |_, _| int(pseudo(&mut seed)));
            let b = IntMat::from_fn(n, n, |_, _| int(pseudo(&mut seed)));
            let lhs = induced_wedge_map(&a.mul(&b), r);
            let rhs = induced_wedge_map(&a, r).mul(&induced_wedge_map(&b, r));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn contraction_squares_to_zero(n in 2usize..6, r in 2usize..5, seed0 in 0u64..200) {
            prop_assume!(r <= n);
            let mut seed = seed0.wrapping_add(3);
            let m: Vec<Int> = (0..n).map(|_| int(pseudo(&mut seed))).collect();
            let c1 = contraction_matrix(&m, n, r).unwrap();
            let c2 = contraction_matrix(&m, n, r - 1);
            if let Ok(c2) = c2 {
                prop_assert!(c2.mul(&c1).is_zero());
            }
        }

        #[test]
        fn wedge_squares_to_zero(n in 2usize..6, r in 0usize..4, seed0 in 0u64..200) {
            prop_assume!(r + 2 <= n);
            let mut seed = seed0.wrapping_add(29);
            let d: Vec<Int> = (0..n).map(|_| int(pseudo(&mut seed))).collect();
            let w1 = wedge_with_covector(&d, n, r).unwrap();
            let w2 = wedge_with_covector(&d, n, r + 1).unwrap();
            prop_assert!(w2.mul(&w1).is_zero());
        }

        #[test]
        fn contraction_is_derivation(n in 2usize..5, seed0 in 0u64..300) {
            // iota(m)(a ∧ b) = iota(m)a ∧ b + (-1)^{deg a} a ∧ iota(m)b
            // with deg a = 1, deg b = 1 on covectors.
            let mut seed = seed0.wrapping_add(7);
            let m: Vec<Int> = (0..n).map(|_| int(pseudo(&mut seed))).collect();
            let a: Vec<Int> = (0..n).map(|_| int(pseudo(&mut seed))).collect();
            let b: Vec<Int> = (0..n).map(|_| int(pseudo(&mut seed))).collect();
            // a ∧ b as element of wedge^2: wedge_with_covector(a)·b
            let ab = wedge_with_covector(&a, n, 1).unwrap().mul_vec(&b);
            let lhs = contraction_matrix(&m, n, 2).unwrap().mul_vec(&ab);
            let ia: Int = crate::lattice::dot(&m, &a);
            let ib: Int = crate::lattice::dot(&m, &b);
            // iota(m)a ∧ b - a ∧ iota(m)b  (degrees: iota(m)a scalar times b etc.)
            let rhs: Vec<Int> = (0..n)
                .map(|i| &ia * &b[i] - &ib * &a[i])
                .collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
