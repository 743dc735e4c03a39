//! Degreewise exactness of the barycentric complex
//! `0 → (Ω^r_k)_p → C⁰_p → C¹_p → …` over the chains of faces of τ.

use super::graded::{omega_face_graded_piece, omega_graded_piece};
use super::MonoidData;
use crate::error::Result;
use crate::exec::Exec;
use crate::lattice::{rank_q, RatMat, RatSolver, Int};
use num_traits::Zero;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub degree: Vec<String>,
    pub r: usize,
    pub k: usize,
    pub rel: bool,
    pub global_dim: usize,
    pub chain_dims: Vec<usize>,
    pub exact: bool,
}

/// Faces of τ as sorted vertex-index lists (including τ itself).
fn tau_faces(m: &MonoidData) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = m.tau.faces.iter().map(|f| f.vertices.clone()).collect();
    out.sort_by_key(|f| (f.len(), f.clone()));
    out
}

fn face_points(m: &MonoidData, face: &[usize]) -> Vec<Vec<Int>> {
    face.iter().map(|&i| m.tau.vertices[i].clone()).collect()
}

/// Build the degree-`p` slice and verify exactness by rank bookkeeping.
pub fn barycentric_resolution_check(
    m: &MonoidData,
    r: usize,
    k: usize,
    p: &[Int],
    rel: bool,
) -> Result<ExactnessReport> {
    let faces = tau_faces(m);
    let contains =
        |a: &Vec<usize>, b: &Vec<usize>| b.iter().all(|x| a.contains(x)) && a.len() > b.len();
    // chains of strictly increasing faces, grouped by length
    type FaceChain = Vec<Vec<usize>>;
    let level0: Vec<FaceChain> = faces.iter().map(|f| vec![f.clone()]).collect();
    let mut chains: Vec<Vec<FaceChain>> = vec![level0];
    loop {
        let prev = chains.last().unwrap();
        let mut next: Vec<FaceChain> = Vec::new();
        for ch in prev {
            let last = ch.last().unwrap();
            for f in &faces {
                if contains(f, last) {
                    let mut c2 = ch.clone();
                    c2.push(f.clone());
                    next.push(c2);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        chains.push(next);
    }
    // per chain: the piece of (ω₀, ω_last)
    let piece = |chain: &FaceChain| {
        let first = face_points(m, &chain[0]);
        let last = face_points(m, chain.last().unwrap());
        omega_face_graded_piece(m, &first, &last, p, r, k, rel)
    };
    let global = omega_graded_piece(m, p, r, k, rel);
    // dimensions and offsets
    let mut dims = Vec::new();
    let mut offsets: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut bases: Vec<Vec<RatMat>> = Vec::new();
    for level in &chains {
        let mut off = Vec::new();
        let mut bs = Vec::new();
        let mut pos = 0;
        for ch in level {
            let gp = piece(ch);
            off.push((pos, gp.dim()));
            pos += gp.dim();
            bs.push(gp.basis);
        }
        offsets.push(off);
        dims.push(pos);
        bases.push(bs);
    }
    // differentials: alternating sums of inclusions gated by membership
    let mut mats: Vec<RatMat> = Vec::new();
    for lev in 0..chains.len().saturating_sub(1) {
        let mut mtx = RatMat::zero(dims[lev + 1], dims[lev]);
        let src_index: std::collections::BTreeMap<&[Vec<usize>], usize> = chains[lev]
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_slice(), i))
            .collect();
        for (ti, target) in chains[lev + 1].iter().enumerate() {
            let (t_off, t_width) = offsets[lev + 1][ti];
            if t_width == 0 {
                continue;
            }
            let mut solver = RatSolver::new(bases[lev + 1][ti].rows);
            for j in 0..bases[lev + 1][ti].cols {
                solver.push_column(bases[lev + 1][ti].col_vec(j));
            }
            for drop in 0..target.len() {
                let mut chain = target.clone();
                chain.remove(drop);
                let Some(&si) = src_index.get(chain.as_slice()) else { continue };
                let (s_off, s_width) = offsets[lev][si];
                if s_width == 0 {
                    continue;
                }
                let sgn = if drop % 2 == 0 { 1i64 } else { -1 };
                for col in 0..s_width {
                    let w = bases[lev][si].col_vec(col);
                    let x = solver
                        .solve(&w)
                        .expect("face piece includes into the target piece");
                    for (kk, v) in x.iter().enumerate() {
                        if !v.is_zero() {
                            let val = crate::lattice::rat_int(&crate::lattice::int(sgn)) * v;
                            mtx[(t_off + kk, s_off + col)] = &mtx[(t_off + kk, s_off + col)] + &val;
                        }
                    }
                }
            }
        }
        mats.push(mtx);
    }
    // augmentation (Ω^r_k)_p → C⁰
    let mut aug = RatMat::zero(dims[0], global.dim());
    for (si, _) in chains[0].iter().enumerate() {
        let (off, width) = offsets[0][si];
        if width == 0 {
            continue;
        }
        let mut solver = RatSolver::new(bases[0][si].rows);
        for j in 0..width {
            solver.push_column(bases[0][si].col_vec(j));
        }
        for col in 0..global.dim() {
            let w = global.basis.col_vec(col);
            let x = solver.solve(&w).expect("global piece includes into every face piece");
            for (kk, v) in x.iter().enumerate() {
                if !v.is_zero() {
                    aug[(off + kk, col)] = v.clone();
                }
            }
        }
    }
    // exactness: injective augmentation, ker d⁰ = im aug, H^{>0} = 0
    let mut exact = true;
    let rank_aug = rank_q(&aug);
    if rank_aug != global.dim() {
        exact = false;
    }
    if !mats.is_empty() && !mats[0].mul(&aug).is_zero() {
        exact = false;
    }
    let ranks: Vec<usize> = mats.iter().map(rank_q).collect();
    for lev in 0..dims.len() {
        let rk_out = if lev < ranks.len() { ranks[lev] } else { 0 };
        let rk_in = if lev == 0 { rank_aug } else { ranks[lev - 1] };
        if dims[lev] != rk_out + rk_in {
            exact = false;
        }
    }
    Ok(ExactnessReport {
        degree: p.iter().map(|x| x.to_string()).collect(),
        r,
        k,
        rel,
        global_dim: global.dim(),
        chain_dims: dims,
        exact,
    })
}

/// Exactness over a whole box of degrees, in parallel.
pub fn check_box(
    m: &MonoidData,
    r: usize,
    k: usize,
    bound: i64,
    rel: bool,
    exec: Exec,
) -> Result<Vec<ExactnessReport>> {
    let degrees: Vec<Vec<Int>> = degree_box(m.rank, bound);
    let reports: Vec<Result<ExactnessReport>> =
        exec.map_slice(&degrees, |p| barycentric_resolution_check(m, r, k, p, rel));
    reports.into_iter().collect()
}

pub fn degree_box(rank: usize, bound: i64) -> Vec<Vec<Int>> {
    let mut out = Vec::new();
    let mut cur = vec![-bound; rank];
    'scan: loop {
        out.push(cur.iter().map(|&x| crate::lattice::int(x)).collect());
        let mut i = 0;
        loop {
            if i == rank {
                break 'scan;
            }
            cur[i] += 1;
            if cur[i] <= bound {
                break;
            }
            cur[i] = -bound;
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int_vec;
    use crate::localmodel::conifold_monoid;

    #[test]
    fn conifold_degree_zero_exact() {
        let m = conifold_monoid();
        let rep = barycentric_resolution_check(&m, 1, 0, &int_vec(&[0, 0, 0]), false).unwrap();
        assert!(rep.exact, "{rep:?}");
    }

    #[test]
    fn structure_sheaf_always_exact_small_box() {
        let m = conifold_monoid();
        for p in degree_box(3, 2) {
            let rep = barycentric_resolution_check(&m, 0, 0, &p, false).unwrap();
            assert!(rep.exact, "degree {:?}", rep.degree);
        }
    }
}
