//! Graded pieces of log derivations and log differentials, the graded
//! de Rham differential, the wedge-division solver and the smoothness
//! classifier.

use super::MonoidData;
use crate::error::{Error, Result};
use crate::lattice::{
    complete_to_unimodular, dot, int, integer_kernel, solve_exact, wedge_dim, wedge_rect,
    wedge_with_covector, Int, IntMat, RatMat,
};
use crate::polytope::{lifted_hull, LatticePolytope};
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    Theta,
    ThetaRel,
    OmegaAbs,
    OmegaRel,
}

/// A graded piece: a rational subspace with an explicit column basis.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub kind: PieceKind,
    pub degree: Vec<Int>,
    /// columns span the subspace; ambient is M⊗ℚ for Θ kinds and
    /// ∧^r N⊗ℚ (or ∧^r of the ρ-complement) for Ω kinds
    pub basis: RatMat,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.basis.cols
    }
}

/// Order-∞ absolute derivations: `M⊗k` for `p ∈ P`; `ℤw_i ⊗ k` when some
/// w-generator pairs to −1 and everything else is nonnegative; else 0.
pub fn theta_graded_piece(m: &MonoidData, p: &[Int]) -> GradedPiece {
    let basis = theta_basis(m, p, false);
    GradedPiece { kind: PieceKind::Theta, degree: p.to_vec(), basis }
}

/// Relative variant: `ρ^⊥ ⊗ k` in the interior case.
pub fn theta_rel_graded_piece(m: &MonoidData, p: &[Int]) -> Result<GradedPiece> {
    m.rho_interior_check()?;
    let basis = theta_basis(m, p, true);
    Ok(GradedPiece { kind: PieceKind::ThetaRel, degree: p.to_vec(), basis })
}

fn theta_basis(m: &MonoidData, p: &[Int], rel: bool) -> RatMat {
    let rank = m.rank;
    if m.contains(p) {
        if rel {
            // ρ^⊥ ⊂ M: kernel of the pairing with ρ
            let row = IntMat::from_fn(1, rank, |_, j| m.rho[j].clone());
            return integer_kernel(&row).to_rat();
        }
        return RatMat::identity(rank);
    }
    // pole case: a unique w-generator with pairing −1, all others ≥ 0
    for (wi, w) in m.w_generators.iter().enumerate() {
        if dot(p, w) == -Int::one() {
            let others_ok = m
                .k_generators()
                .iter()
                .enumerate()
                .all(|(j, g)| j == m.s_generators.len() + wi || !dot(p, g).is_negative());
            if others_ok {
                return IntMat::from_fn(rank, 1, |i, _| w[i].clone()).to_rat();
            }
        }
    }
    RatMat::zero(rank, 0)
}

/// Order-k derivations on the thickening: zero unless some s-generator
/// pairs into `[0, k]`, otherwise the order-∞ piece.
pub fn theta_xk_graded_piece(m: &MonoidData, p: &[Int], k: usize, rel: bool) -> Result<GradedPiece> {
    let survives = m.s_generators.iter().any(|v| {
        let t = dot(p, v);
        !t.is_negative() && t <= int(k as i64)
    });
    let kind = if rel { PieceKind::ThetaRel } else { PieceKind::Theta };
    if !survives {
        return Ok(GradedPiece { kind, degree: p.to_vec(), basis: RatMat::zero(m.rank, 0) });
    }
    if rel {
        theta_rel_graded_piece(m, p)
    } else {
        Ok(theta_graded_piece(m, p))
    }
}

/// `∧^r (⋂_{j : p ∈ Q_j} Q_j^{gp}) ⊗ k` for `p ∈ P ∖ ((k+1)ρ + P)`,
/// quotient by ℤρ in the relative case.
pub fn omega_graded_piece(
    m: &MonoidData,
    p: &[Int],
    r: usize,
    k: usize,
    rel: bool,
) -> GradedPiece {
    let kind = if rel { PieceKind::OmegaRel } else { PieceKind::OmegaAbs };
    if !m.is_monomial(p, k) {
        return GradedPiece {
            kind,
            degree: p.to_vec(),
            basis: RatMat::zero(wedge_dim(m.rank, r), 0),
        };
    }
    let walls: Vec<&Vec<Int>> =
        m.w_generators.iter().filter(|w| dot(p, w).is_zero()).collect();
    let basis = wedge_of_intersection(m, &walls, r, rel);
    GradedPiece { kind, degree: p.to_vec(), basis }
}

/// Basis of `∧^r (⋂ w^⊥ ∩ N)` (mod ℤρ if `rel`) inside `∧^r N ⊗ ℚ`.
fn wedge_of_intersection(
    m: &MonoidData,
    walls: &[&Vec<Int>],
    r: usize,
    rel: bool,
) -> RatMat {
    let rank = m.rank;
    let lattice: IntMat = if walls.is_empty() {
        IntMat::identity(rank)
    } else {
        let rows = IntMat::from_fn(walls.len(), rank, |i, j| walls[i][j].clone());
        integer_kernel(&rows)
    };
    let ambient_r = wedge_dim(rank, r);
    if rel {
        // quotient L / ℤρ realized on a complement of ρ inside L
        let lq = lattice.to_rat();
        let Some(rho_coords) = solve_exact(&lq, &m.rho.iter().map(crate::lattice::rat_int).collect::<Vec<_>>()) else {
            // ρ outside the intersection cannot happen: every Q_j contains ρ
            unreachable!("ρ lies in every wall intersection");
        };
        let rho_int: Vec<Int> = rho_coords
            .iter()
            .map(|x| {
                debug_assert!(x.denom().is_one());
                x.numer().clone()
            })
            .collect();
        let l = lattice.cols;
        if l == 0 {
            return RatMat::zero(ambient_r, 0);
        }
        let comp = complete_to_unimodular(&rho_int).expect("ρ primitive in the wall lattice");
        // complement = L · (first l−1 columns of comp)
        let mut cols = Vec::new();
        for j in 0..l - 1 {
            let c = comp.col_vec(j);
            let v = lattice.mul_vec(&c);
            cols.push(v);
        }
        let cm = IntMat::from_fn(rank, cols.len(), |i, j| cols[j][i].clone());
        wedge_rect(&cm, r).to_rat()
    } else {
        wedge_rect(&lattice, r).to_rat()
    }
}

/// `ω_i ⊆ Δ_i`: the largest face pairing minimally with the whole
/// normal cone of the face ω of τ.
pub fn omega_i_face(m: &MonoidData, omega_vertices: &[Vec<Int>], i: usize) -> Vec<Vec<Int>> {
    // normals of τ's facets containing ω
    let normals: Vec<&Vec<Int>> = m
        .tau
        .facets
        .iter()
        .filter(|f| {
            omega_vertices.iter().all(|v| dot(&f.normal, v) == f.offset)
        })
        .map(|f| &f.normal)
        .collect();
    let delta = &m.deltas[i];
    let mut verts: Vec<Vec<Int>> = delta.vertices.clone();
    for a in normals {
        // inner-normal convention: the face of Δ_i where the whole normal
        // cone of ω attains its minimum
        let vals: Vec<Int> = verts.iter().map(|v| dot(a, v)).collect();
        let mn = vals.iter().min().unwrap().clone();
        verts = verts
            .into_iter()
            .zip(vals)
            .filter(|(_, val)| *val == mn)
            .map(|(v, _)| v)
            .collect();
    }
    verts
}

/// Membership in `P_{ω,ω',k}`: the three inequality families over the
/// vertex lifts.
pub fn p_omega_set_member(
    m: &MonoidData,
    omega_vertices: &[Vec<Int>],
    omega_prime_vertices: &[Vec<Int>],
    p: &[Int],
    k: usize,
) -> bool {
    for i in 0..m.q {
        for v in omega_i_face(m, omega_vertices, i) {
            let vl = super::lift(&v, m.mprime, m.q, i + 1);
            if dot(p, &vl).is_negative() {
                return false;
            }
        }
    }
    for v in omega_prime_vertices {
        let vl = super::lift(v, m.mprime, m.q, 0);
        if dot(p, &vl) > int(k as i64) {
            return false;
        }
    }
    for v in &m.tau.vertices {
        let vl = super::lift(v, m.mprime, m.q, 0);
        if dot(p, &vl).is_negative() {
            return false;
        }
    }
    true
}

/// Degree-p piece of `Ω^r` on the thickened closed stratum of the pair
/// `ω ⊆ ω'`.
pub fn omega_face_graded_piece(
    m: &MonoidData,
    omega_vertices: &[Vec<Int>],
    omega_prime_vertices: &[Vec<Int>],
    p: &[Int],
    r: usize,
    k: usize,
    rel: bool,
) -> GradedPiece {
    let kind = if rel { PieceKind::OmegaRel } else { PieceKind::OmegaAbs };
    if !p_omega_set_member(m, omega_vertices, omega_prime_vertices, p, k) {
        return GradedPiece {
            kind,
            degree: p.to_vec(),
            basis: RatMat::zero(wedge_dim(m.rank, r), 0),
        };
    }
    let mut walls: Vec<Vec<Int>> = Vec::new();
    for i in 0..m.q {
        for v in omega_i_face(m, omega_vertices, i) {
            let vl = super::lift(&v, m.mprime, m.q, i + 1);
            if dot(p, &vl).is_zero() {
                walls.push(vl);
            }
        }
    }
    let wall_refs: Vec<&Vec<Int>> = walls.iter().collect();
    let basis = wedge_of_intersection(m, &wall_refs, r, rel);
    GradedPiece { kind, degree: p.to_vec(), basis }
}

/// Matrix of `z^p n ↦ z^p (p ∧ n)` on ambient wedge coordinates.
pub fn graded_differential(m: &MonoidData, p: &[Int], r: usize) -> Result<IntMat> {
    wedge_with_covector(p, m.rank, r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WedgeDivision {
    Solution(Vec<crate::lattice::Rat>),
    Unsolvable,
}

/// Solve `p ∧ τ = ω` for an (r−1)-form τ; solvable iff `p ∧ ω = 0`.
pub fn wedge_divide(
    p: &[Int],
    omega: &[crate::lattice::Rat],
    n: usize,
    r: usize,
) -> Result<WedgeDivision> {
    if p.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    if r == 0 || r > n {
        return Err(Error::DegreeOutOfRange { r, n });
    }
    assert_eq!(omega.len(), wedge_dim(n, r));
    // integrability: p ∧ ω = 0
    let up = wedge_with_covector(p, n, r)?.to_rat();
    let pw = up.mul_vec(omega);
    if pw.iter().any(|x| !x.is_zero()) {
        return Ok(WedgeDivision::Unsolvable);
    }
    let mat = wedge_with_covector(p, n, r - 1)?.to_rat();
    match solve_in_column_space(&mat, omega) {
        Some(tau) => Ok(WedgeDivision::Solution(tau)),
        None => Ok(WedgeDivision::Unsolvable),
    }
}

fn solve_in_column_space(a: &RatMat, w: &[crate::lattice::Rat]) -> Option<Vec<crate::lattice::Rat>> {
    let mut solver = crate::lattice::RatSolver::new(a.rows);
    let mut kept = Vec::new();
    for j in 0..a.cols {
        if solver.push_column(a.col_vec(j)) {
            kept.push(j);
        }
    }
    let coeff = solver.solve(w)?;
    // coefficients are indexed by push order over all columns; scatter back
    let mut x = vec![crate::lattice::Rat::zero(); a.cols];
    for (pushed_idx, v) in coeff.into_iter().enumerate() {
        x[pushed_idx] = v;
    }
    Some(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum FibreSmoothness {
    Smooth,
    OrbifoldCodim4,
    Neither,
}

/// Classify the generic fibre by the lifted hull `Conv(⋃ Δ_i × {e_i})`.
pub fn generic_fibre_smoothness(deltas: &[LatticePolytope]) -> Result<FibreSmoothness> {
    if deltas.is_empty() {
        return Ok(FibreSmoothness::Smooth);
    }
    let mprime = deltas[0].ambient_dim;
    let refs: Vec<&LatticePolytope> = deltas.iter().collect();
    let hull = lifted_hull(&refs, mprime)?;
    if hull.is_standard_simplex()? {
        Ok(FibreSmoothness::Smooth)
    } else if hull.is_elementary_simplex()? {
        Ok(FibreSmoothness::OrbifoldCodim4)
    } else {
        Ok(FibreSmoothness::Neither)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{int_vec, rat_int};
    use crate::localmodel::{conifold_monoid, l2_monoid};
    use crate::polytope::{point_polytope, segment};

    #[test]
    fn theta_spec_examples() {
        let m = conifold_monoid();
        // p = 0 → M ⊗ ℚ, dim 3
        assert_eq!(theta_graded_piece(&m, &int_vec(&[0, 0, 0])).dim(), 3);
        // p = (1,0,−1): pole along w₁, dim 1 spanned by w₁
        let gp = theta_graded_piece(&m, &int_vec(&[1, 0, -1]));
        assert_eq!(gp.dim(), 1);
        assert_eq!(
            gp.basis.col_vec(0),
            vec![rat_int(&int(0)), rat_int(&int(0)), rat_int(&int(1))]
        );
        // deep outside
        assert_eq!(theta_graded_piece(&m, &int_vec(&[-5, -1, -1])).dim(), 0);
    }

    #[test]
    fn theta_rel_and_orders() {
        let m = conifold_monoid();
        // p = 0, k = 0: ρ^⊥ ⊗ ℚ, dim 2
        let gp = theta_xk_graded_piece(&m, &int_vec(&[0, 0, 0]), 0, true).unwrap();
        assert_eq!(gp.dim(), 2);
        // p = ρ, k = 0: no s-generator pairs into [0,0]
        let rho = int_vec(&[0, 1, 0]);
        assert_eq!(theta_xk_graded_piece(&m, &rho, 0, false).unwrap().dim(), 0);
        // k = 1: survives, equals the order-∞ value
        let gp = theta_xk_graded_piece(&m, &rho, 1, false).unwrap();
        assert_eq!(gp.dim(), theta_graded_piece(&m, &rho).dim());
    }

    #[test]
    fn omega_spec_examples() {
        let m = conifold_monoid();
        // p = 0, r = 1, k = 0, abs: dim of {w₁,w₂}^⊥ = 1
        assert_eq!(omega_graded_piece(&m, &int_vec(&[0, 0, 0]), 1, 0, false).dim(), 1);
        // r = 0: structure sheaf, dim 1 wherever p ∈ P∖(ρ+P)
        assert_eq!(omega_graded_piece(&m, &int_vec(&[1, 0, 0]), 0, 0, false).dim(), 1);
        // p = (k+1)ρ: dies in the ideal
        assert_eq!(omega_graded_piece(&m, &int_vec(&[0, 1, 0]), 0, 0, false).dim(), 0);
    }

    #[test]
    fn omega_face_at_tau_matches_central_fibre_stalk() {
        // at ω = ω' = τ the subspace data coincides with the global graded
        // piece; the index set is the stricter stalk condition (≤ k on every
        // vertex of τ rather than on some vertex)
        let m = conifold_monoid();
        let tau_verts = m.tau.vertices.clone();
        for p in m.points_in_box(2) {
            for r in 0..=2usize {
                let a = omega_face_graded_piece(&m, &tau_verts, &tau_verts, &p, r, 0, false);
                let b = omega_graded_piece(&m, &p, r, 0, false);
                if a.dim() > 0 {
                    assert_eq!(a.dim(), b.dim(), "p={:?} r={}", p, r);
                }
                let stalk_alive = p_omega_set_member(&m, &tau_verts, &tau_verts, &p, 0);
                assert_eq!(a.dim() > 0, stalk_alive && b.dim() > 0, "p={:?} r={}", p, r);
            }
        }
    }

    #[test]
    fn face_membership_violation() {
        let m = conifold_monoid();
        let tau_verts = m.tau.vertices.clone();
        // p with ⟨p, v+e₀⟩ < 0 on a τ vertex
        let p = int_vec(&[0, -1, 0]);
        assert!(!p_omega_set_member(&m, &tau_verts, &tau_verts, &p, 0));
    }

    #[test]
    fn differential_squares_and_preserves() {
        let m = conifold_monoid();
        for p in m.points_in_box(2) {
            for r in 0..2usize {
                let d1 = graded_differential(&m, &p, r).unwrap();
                let d2 = graded_differential(&m, &p, r + 1).unwrap();
                assert!(d2.mul(&d1).is_zero());
                // preservation of the graded subspace
                let piece = omega_graded_piece(&m, &p, r, 1, false);
                let target = omega_graded_piece(&m, &p, r + 1, 1, false);
                let mut solver = crate::lattice::RatSolver::new(target.basis.rows);
                for j in 0..target.basis.cols {
                    solver.push_column(target.basis.col_vec(j));
                }
                for j in 0..piece.dim() {
                    let img = d1.to_rat().mul_vec(&piece.basis.col_vec(j));
                    if img.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    assert!(
                        solver.solve(&img).is_some(),
                        "d(z^p Ω^r) escapes the target piece at p={:?}, r={}",
                        p,
                        r
                    );
                }
            }
        }
    }

    #[test]
    fn wedge_divide_examples() {
        use crate::lattice::Rat;
        let one = Rat::one;
        // p = e1, ω = e1∧e2 → τ = e2
        let omega = vec![one(), Rat::zero(), Rat::zero()]; // e1∧e2 in lex basis of ∧²ℤ³
        let sol = wedge_divide(&int_vec(&[1, 0, 0]), &omega, 3, 2).unwrap();
        match sol {
            WedgeDivision::Solution(tau) => {
                let m = wedge_with_covector(&int_vec(&[1, 0, 0]), 3, 1).unwrap().to_rat();
                assert_eq!(m.mul_vec(&tau), omega);
            }
            WedgeDivision::Unsolvable => panic!("should divide"),
        }
        // p = e1, ω = e2∧e3 → unsolvable
        let omega = vec![Rat::zero(), Rat::zero(), one()];
        assert_eq!(
            wedge_divide(&int_vec(&[1, 0, 0]), &omega, 3, 2).unwrap(),
            WedgeDivision::Unsolvable
        );
        // p = e1+e2, ω = e1∧e2 solvable
        let omega = vec![one(), Rat::zero(), Rat::zero()];
        assert!(matches!(
            wedge_divide(&int_vec(&[1, 1, 0]), &omega, 3, 2).unwrap(),
            WedgeDivision::Solution(_)
        ));
        // zero vector rejected
        assert!(wedge_divide(&int_vec(&[0, 0]), &[one()], 2, 2).is_err());
    }

    #[test]
    fn smoothness_classifier() {
        // Δ₁ = [0,1], rest points → smooth
        let d1 = segment(vec![0, 0, 0], vec![1, 0, 0]);
        let pt = point_polytope(int_vec(&[0, 0, 0]));
        assert_eq!(
            generic_fibre_smoothness(&[d1.clone(), pt.clone()]).unwrap(),
            FibreSmoothness::Smooth
        );
        // Reeve-style elementary non-standard lift
        let reeve_a = segment(vec![0, 0, 0], vec![1, 0, 0]);
        let reeve_b = LatticePolytope::from_i64(vec![vec![0, 0, 0], vec![1, 1, 2]]).unwrap();
        // lifted hull conv{(0,e1),(e1,e1)... } needs a genuinely non-standard pair:
        let s = generic_fibre_smoothness(&[reeve_a, reeve_b]).unwrap();
        assert_ne!(s, FibreSmoothness::Neither);
        // Δ₁ = [0,2] → neither
        let wide = segment(vec![0], vec![2]);
        assert_eq!(generic_fibre_smoothness(&[wide]).unwrap(), FibreSmoothness::Neither);
    }
}
