//! Sparse exact linear algebra over ℚ for the flag-Čech differentials.
//!
//! Rank uses destructive row elimination with a minimum-degree pivot
//! heuristic (prefer unit pivots, short rows, thin columns); the
//! complexes here are incidence-like, so fill-in stays tame and most
//! arithmetic is on small integers. The column reducer tracks
//! coefficients for the small quotient computations (cohomology
//! representatives, cup products).

use crate::lattice::Rat;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    /// row-major, each row sorted by column
    pub data: Vec<Vec<(u32, Rat)>>,
}

impl SparseMat {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn from_triplets(rows: usize, cols: usize, trips: Vec<(usize, usize, Rat)>) -> Self {
        let mut m = Self::new(rows, cols);
        let mut acc: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        for (i, j, v) in trips {
            if !v.is_zero() {
                *acc.entry((i, j)).or_insert_with(Rat::zero) += v;
            }
        }
        for ((i, j), v) in acc {
            if !v.is_zero() {
                m.data[i].push((j as u32, v));
            }
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn col(&self, j: usize) -> Vec<(u32, Rat)> {
        let mut out = Vec::new();
        for (i, row) in self.data.iter().enumerate() {
            if let Ok(k) = row.binary_search_by_key(&(j as u32), |e| e.0) {
                out.push((i as u32, row[k].1.clone()));
            }
        }
        out
    }

    pub fn mul_dense(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                let mut s = Rat::zero();
                for (j, v) in row {
                    if !x[*j as usize].is_zero() {
                        s += v * &x[*j as usize];
                    }
                }
                s
            })
            .collect()
    }

    /// Exact rank over ℚ.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Option<Vec<(u32, Rat)>>> =
            self.data.iter().map(|r| Some(r.clone())).collect();
        // column -> active row ids (regenerated lazily)
        let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, _) in r {
                col_rows[*j as usize].push(i as u32);
            }
        }
        let mut eliminated_row = vec![false; self.rows];
        let mut eliminated_col = vec![false; self.cols];
        let mut rank = 0;
        loop {
            // pick pivot column: fewest active rows
            let mut best: Option<(usize, usize)> = None; // (count, col)
            for j in 0..self.cols {
                if eliminated_col[j] {
                    continue;
                }
                col_rows[j].retain(|&i| {
                    !eliminated_row[i as usize]
                        && rows[i as usize]
                            .as_ref()
                            .map(|r| r.binary_search_by_key(&(j as u32), |e| e.0).is_ok())
                            .unwrap_or(false)
                });
                let c = col_rows[j].len();
                if c == 0 {
                    eliminated_col[j] = true;
                    continue;
                }
                if best.map_or(true, |(bc, _)| c < bc) {
                    best = Some((c, j));
                    if c == 1 {
                        break;
                    }
                }
            }
            let Some((_, pc)) = best else { break };
            // pick pivot row in that column: prefer ±1 entries, then short rows
            let mut prow: Option<(bool, usize, u32)> = None; // (is_unit, len, row)
            for &i in &col_rows[pc] {
                let r = rows[i as usize].as_ref().unwrap();
                let k = r.binary_search_by_key(&(pc as u32), |e| e.0).unwrap();
                let unit = r[k].1.numer().magnitude() == r[k].1.denom().magnitude();
                let len = r.len();
                let cand = (unit, len, i);
                let better = match &prow {
                    None => true,
                    Some((u0, l0, _)) => (!u0 && unit) || (*u0 == unit && len < *l0),
                };
                if better {
                    prow = Some(cand);
                }
            }
            let (_, _, pi) = prow.unwrap();
            let piv_row = rows[pi as usize].take().unwrap();
            eliminated_row[pi as usize] = true;
            eliminated_col[pc] = true;
            rank += 1;
            let k = piv_row.binary_search_by_key(&(pc as u32), |e| e.0).unwrap();
            let piv_val = piv_row[k].1.clone();
            let targets: Vec<u32> = col_rows[pc]
                .iter()
                .copied()
                .filter(|&i| i != pi && !eliminated_row[i as usize])
                .collect();
            // eliminate the pivot column from the target rows
            let updated: Vec<(u32, Vec<(u32, Rat)>)> = {
                #[cfg(feature = "parallel")]
                {
                    use rayon::prelude::*;
                    targets
                        .par_iter()
                        .map(|&i| {
                            let r = rows[i as usize].as_ref().unwrap();
                            (i, axpy_eliminate(r, &piv_row, pc as u32, &piv_val))
                        })
                        .collect()
                }
                #[cfg(not(feature = "parallel"))]
                {
                    targets
                        .iter()
                        .map(|&i| {
                            let r = rows[i as usize].as_ref().unwrap();
                            (i, axpy_eliminate(r, &piv_row, pc as u32, &piv_val))
                        })
                        .collect()
                }
            };
            for (i, new_row) in updated {
                for (j, _) in &new_row {
                    col_rows[*j as usize].push(i);
                }
                rows[i as usize] = Some(new_row);
            }
        }
        rank
    }
}

/// `row - (row[pc]/piv) * piv_row`, dropping column `pc`.
fn axpy_eliminate(
    row: &[(u32, Rat)],
    piv_row: &[(u32, Rat)],
    pc: u32,
    piv_val: &Rat,
) -> Vec<(u32, Rat)> {
    let k = row.binary_search_by_key(&pc, |e| e.0).expect("target contains pivot column");
    let factor = &row[k].1 / piv_val;
    let mut out = Vec::with_capacity(row.len() + piv_row.len());
    let (mut a, mut b) = (0usize, 0usize);
    while a < row.len() || b < piv_row.len() {
        match (row.get(a), piv_row.get(b)) {
            (Some((ja, va)), Some((jb, vb))) => {
                if ja < jb {
                    if *ja != pc {
                        out.push((*ja, va.clone()));
                    }
                    a += 1;
                } else if jb < ja {
                    if *jb != pc {
                        out.push((*jb, -(&factor * vb)));
                    }
                    b += 1;
                } else {
                    if *ja != pc {
                        let v = va - &factor * vb;
                        if !v.is_zero() {
                            out.push((*ja, v));
                        }
                    }
                    a += 1;
                    b += 1;
                }
            }
            (Some((ja, va)), None) => {
                if *ja != pc {
                    out.push((*ja, va.clone()));
                }
                a += 1;
            }
            (None, Some((jb, vb))) => {
                if *jb != pc {
                    out.push((*jb, -(&factor * vb)));
                }
                b += 1;
            }
            (None, None) => break,
        }
    }
    out
}

/// Incremental sparse column echelon with optional coefficient tracking
/// over the tracked columns. Used for membership in spans, quotient
/// coordinates (cohomology classes modulo coboundaries) and kernels.
pub struct ColumnReducer {
    dim: usize,
    /// (echelon column, pivot row, tracked tail) — column normalized to
    /// pivot value 1
    columns: Vec<(Vec<(u32, Rat)>, u32, Vec<(u32, Rat)>)>,
    n_tracked: usize,
    last_kernel: Option<Vec<(u32, Rat)>>,
}

impl ColumnReducer {
    pub fn new(dim: usize) -> Self {
        ColumnReducer { dim, columns: Vec::new(), n_tracked: 0, last_kernel: None }
    }

    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    fn reduce(
        &self,
        mut col: Vec<(u32, Rat)>,
        mut tail: Vec<(u32, Rat)>,
    ) -> (Vec<(u32, Rat)>, Vec<(u32, Rat)>) {
        for (ec, piv, et) in &self.columns {
            let Ok(k) = col.binary_search_by_key(piv, |e| e.0) else { continue };
            let f = col[k].1.clone();
            col = sparse_axpy(&col, ec, &f);
            if !et.is_empty() {
                tail = sparse_axpy(&tail, et, &f);
            }
        }
        (col, tail)
    }

    /// Push a column; when `tracked`, its coefficient is carried through
    /// later `solve` calls. Returns true when the span grew.
    pub fn push(&mut self, col: Vec<(u32, Rat)>, tracked: bool) -> bool {
        let tail = if tracked {
            let idx = self.n_tracked;
            self.n_tracked += 1;
            vec![(idx as u32, Rat::one())]
        } else {
            Vec::new()
        };
        let (mut col, mut tail) = self.reduce(col, tail);
        let Some(&(piv, _)) = col.first() else {
            // dependent: remember nothing; caller may query kernel via tail
            self.last_kernel = if tail.is_empty() { None } else { Some(tail) };
            return false;
        };
        let pval = col[0].1.clone();
        for e in col.iter_mut() {
            e.1 = &e.1 / &pval;
        }
        for e in tail.iter_mut() {
            e.1 = &e.1 / &pval;
        }
        self.columns.push((col, piv, tail));
        self.last_kernel = None;
        true
    }

    /// Coefficients (over tracked columns) expressing `w`; `None` when
    /// outside the span.
    pub fn solve(&self, w: &[(u32, Rat)]) -> Option<Vec<(u32, Rat)>> {
        let (col, tail) = self.reduce(w.to_vec(), Vec::new());
        if !col.is_empty() {
            return None;
        }
        // w - Σ f_i c_i = 0 with tails accumulated negatively; coefficients
        // are the negated tail
        Some(tail.into_iter().map(|(i, v)| (i, -v)).collect())
    }

    pub fn contains(&self, w: &[(u32, Rat)]) -> bool {
        let (col, _) = self.reduce(w.to_vec(), Vec::new());
        col.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dependency tail of the last dependent push (kernel combination).
    pub fn take_last_kernel(&mut self) -> Option<Vec<(u32, Rat)>> {
        self.last_kernel.take()
    }
}

/// `a - f * b` over sorted sparse vectors.
pub fn sparse_axpy(a: &[(u32, Rat)], b: &[(u32, Rat)], f: &Rat) -> Vec<(u32, Rat)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ja, va)), Some((jb, vb))) => {
                if ja < jb {
                    out.push((*ja, va.clone()));
                    i += 1;
                } else if jb < ja {
                    out.push((*jb, -(f * vb)));
                    j += 1;
                } else {
                    let v = va - f * vb;
                    if !v.is_zero() {
                        out.push((*ja, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some((ja, va)), None) => {
                out.push((*ja, va.clone()));
                i += 1;
            }
            (None, Some((jb, vb))) => {
                out.push((*jb, -(f * vb)));
                j += 1;
            }
            (None, None) => break,
        }
    }
    out
}

pub fn dense_to_sparse(v: &[Rat]) -> Vec<(u32, Rat)> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i as u32, x.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &[(u32, Rat)], dim: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); dim];
    for (i, x) in v {
        out[*i as usize] = x.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{rank_q, IntMat};

    fn to_sparse(m: &IntMat) -> SparseMat {
        let mut trips = Vec::new();
        for i in 0..m.rows {
            for j in 0..m.cols {
                if !num_traits::Zero::is_zero(&m[(i, j)]) {
                    trips.push((i, j, crate::lattice::rat_int(&m[(i, j)])));
                }
            }
        }
        SparseMat::from_triplets(m.rows, m.cols, trips)
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 5) as i64 - 2
        };
        for _ in 0..50 {
            let rows = 1 + (next().unsigned_abs() as usize % 7);
            let cols = 1 + (next().unsigned_abs() as usize % 7);
            let m = IntMat::from_fn(rows, cols, |_, _| crate::lattice::int(next()));
            assert_eq!(to_sparse(&m).rank(), rank_q(&m.to_rat()));
        }
    }

    #[test]
    fn reducer_solves() {
        let mut red = ColumnReducer::new(4);
        let one = Rat::one;
        // image column (untracked): e0 + e1
        red.push(vec![(0, one()), (1, one())], false);
        // tracked columns: e1, e2
        red.push(vec![(1, one())], true);
        red.push(vec![(2, one())], true);
        // target: e0 + 2 e1 + 3 e2 = (e0 + e1) + 1*e1 + 3*e2
        let sol = red
            .solve(&[(0, one()), (1, Rat::from_integer(2.into())), (2, Rat::from_integer(3.into()))])
            .unwrap();
        let dense = sparse_to_dense(&sol, 2);
        assert_eq!(dense[0], one());
        assert_eq!(dense[1], Rat::from_integer(3.into()));
        assert!(!red.contains(&[(3, one())]));
    }
}
