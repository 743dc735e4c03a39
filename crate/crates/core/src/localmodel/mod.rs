//! The toric local models of the log singular locus: the monoid
//! `P = K^∨ ∩ N` built from a cell τ and monodromy polytopes Δ₁…Δ_q,
//! with graded pieces of log derivations and log differentials at every
//! order, the barycentric resolution check, the graded de Rham
//! differential and the wedge-division solver.

pub mod graded;
pub mod oracle;
pub mod resolution;

use crate::error::{Error, Result};
use crate::lattice::{
    dot, int, integer_kernel, Int, IntMat,
};
use crate::polytope::{dual_cone, Cone, LatticePolytope};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct MonoidData {
    /// rank of M′ (the tangent lattice of τ)
    pub mprime: usize,
    pub q: usize,
    /// rank of M = M′ ⊕ ℤ^{q+1}
    pub rank: usize,
    pub tau: LatticePolytope,
    pub deltas: Vec<LatticePolytope>,
    /// extremal generators of K ⊂ M, classified
    pub s_generators: Vec<Vec<Int>>,
    pub w_generators: Vec<Vec<Int>>,
    /// ρ = e₀* and ρ_K = Σ e_i* in N
    pub rho: Vec<Int>,
    pub rho_k: Vec<Int>,
    /// minimal generating set of P (Hilbert basis)
    pub hilbert_basis: Vec<Vec<Int>>,
    /// basis (columns) of the relation lattice among the Hilbert generators
    pub relations: IntMat,
}

/// `v ⊕ e_level` in `M = M′ ⊕ ℤ^{q+1}` (level 0 is τ's slot).
pub(crate) fn lift(v: &[Int], mprime: usize, q: usize, level: usize) -> Vec<Int> {
    let mut out = vec![Int::zero(); mprime + q + 1];
    out[..mprime].clone_from_slice(v);
    out[mprime + level] = Int::one();
    out
}

/// Construction of the monoid from τ and the Δ_i.
pub fn build_monoid(tau: LatticePolytope, deltas: Vec<LatticePolytope>) -> Result<MonoidData> {
    let mprime = tau.ambient_dim;
    if tau.dim != mprime {
        return Err(Error::DegeneratePolytope(
            "τ must be full-dimensional in M′".into(),
        ));
    }
    for d in &deltas {
        if d.ambient_dim != mprime {
            return Err(Error::DimMismatch("Δ_i ambient dimension".into()));
        }
    }
    let q = deltas.len();
    let rank = mprime + q + 1;
    let mut s_generators = Vec::new();
    for v in &tau.vertices {
        s_generators.push(lift(v, mprime, q, 0));
    }
    let mut w_generators = Vec::new();
    for (i, d) in deltas.iter().enumerate() {
        for v in &d.vertices {
            w_generators.push(lift(v, mprime, q, i + 1));
        }
    }
    let mut rho = vec![Int::zero(); rank];
    rho[mprime] = Int::one();
    let mut rho_k = vec![Int::zero(); rank];
    for i in 0..=q {
        rho_k[mprime + i] = Int::one();
    }
    // Gorenstein: ⟨ρ_K, g⟩ = 1 on every extremal generator
    for g in s_generators.iter().chain(&w_generators) {
        if dot(&rho_k, g) != Int::one() {
            return Err(Error::Invalid("Gorenstein degree check failed".into()));
        }
    }
    let data = MonoidData {
        mprime,
        q,
        rank,
        tau,
        deltas,
        s_generators,
        w_generators,
        rho,
        rho_k,
        hilbert_basis: Vec::new(),
        relations: IntMat::zero(0, 0),
    };
    let hilbert_basis = hilbert_basis(&data)?;
    let gen_mat = IntMat::from_fn(data.rank, hilbert_basis.len(), |i, j| {
        hilbert_basis[j][i].clone()
    });
    let relations = integer_kernel(&gen_mat);
    Ok(MonoidData { hilbert_basis, relations, ..data })
}

impl MonoidData {
    pub fn k_generators(&self) -> Vec<Vec<Int>> {
        let mut g = self.s_generators.clone();
        g.extend(self.w_generators.iter().cloned());
        g
    }

    /// `p ∈ P = K^∨ ∩ N`.
    pub fn contains(&self, p: &[Int]) -> bool {
        self.k_generators().iter().all(|g| !dot(p, g).is_negative())
    }

    /// `p ∈ (k+1)ρ + P`.
    pub fn in_ideal(&self, p: &[Int], k: usize) -> bool {
        let shift: Vec<Int> = p
            .iter()
            .zip(&self.rho)
            .map(|(a, b)| a - b * int((k + 1) as i64))
            .collect();
        self.contains(&shift)
    }

    /// Monomials of `k[P]/(z^{(k+1)ρ})`: `p ∈ P ∖ ((k+1)ρ + P)`.
    pub fn is_monomial(&self, p: &[Int], k: usize) -> bool {
        self.contains(p) && !self.in_ideal(p, k)
    }

    /// ρ lies in the interior of the face `F = ⟨w⟩^⊥ ∩ P`.
    pub fn rho_interior_check(&self) -> Result<()> {
        for w in &self.w_generators {
            if !dot(&self.rho, w).is_zero() {
                return Err(Error::RhoNotInterior);
            }
        }
        for v in &self.s_generators {
            if dot(&self.rho, v) != Int::one() {
                return Err(Error::RhoNotInterior);
            }
        }
        Ok(())
    }

    /// `x ∈ P_h` (the localization of P at `h`): some `x + t·h ∈ P`.
    pub fn contains_localized(&self, x: &[Int], h: &[Int], t_max: i64) -> bool {
        let mut cur = x.to_vec();
        for _ in 0..=t_max {
            if self.contains(&cur) {
                return true;
            }
            for i in 0..self.rank {
                cur[i] = &cur[i] + &h[i];
            }
        }
        false
    }

    /// Monomials of the localized thickening: `x ∈ P_h ∖ ((k+1)ρ + P_h)`.
    pub fn is_monomial_localized(&self, x: &[Int], h: &[Int], k: usize, t_max: i64) -> bool {
        if !self.contains_localized(x, h, t_max) {
            return false;
        }
        let shift: Vec<Int> = x
            .iter()
            .zip(&self.rho)
            .map(|(a, b)| a - b * int((k + 1) as i64))
            .collect();
        !self.contains_localized(&shift, h, t_max)
    }

    /// Lattice points of P in the box `|coords| ≤ bound`.
    pub fn points_in_box(&self, bound: i64) -> Vec<Vec<Int>> {
        let rank = self.rank;
        let mut out = Vec::new();
        let mut cur = vec![-bound; rank];
        'scan: loop {
            let p: Vec<Int> = cur.iter().map(|&x| int(x)).collect();
            if self.contains(&p) {
                out.push(p);
            }
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
}

/// Hilbert basis of `P = K^∨ ∩ N` by the Gordan bound: irreducible
/// points inside the sub-sum box of the extreme rays of the dual cone.
fn hilbert_basis(data: &MonoidData) -> Result<Vec<Vec<Int>>> {
    let rank = data.rank;
    let kcone = Cone::from_generators(rank, data.k_generators())?;
    let p_cone = dual_cone(&kcone)?;
    let rays = &p_cone.generators;
    if rays.is_empty() {
        return Ok(Vec::new());
    }
    let mut lo = vec![Int::zero(); rank];
    let mut hi = vec![Int::zero(); rank];
    for r in rays {
        for i in 0..rank {
            if r[i].is_positive() {
                hi[i] = &hi[i] + &r[i];
            } else {
                lo[i] = &lo[i] + &r[i];
            }
        }
    }
    let mut count: u128 = 1;
    for i in 0..rank {
        let w: u128 = (&hi[i] - &lo[i] + Int::one())
            .to_string()
            .parse()
            .unwrap_or(u128::MAX);
        count = count.saturating_mul(w);
    }
    if count > 2_000_000 {
        return Err(Error::BoxTooLarge(count));
    }
    // enumerate candidates in the box
    let mut candidates = Vec::new();
    let mut cur: Vec<Int> = lo.clone();
    'scan: loop {
        if cur.iter().any(|x| !x.is_zero()) && data.contains(&cur) {
            candidates.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == rank {
                break 'scan;
            }
            cur[i] += Int::one();
            if cur[i] <= hi[i] {
                break;
            }
            cur[i] = lo[i].clone();
            i += 1;
        }
    }
    // irreducible = cannot be written as sum of two nonzero elements
    let set: std::collections::BTreeSet<Vec<Int>> = candidates.iter().cloned().collect();
    let mut basis: Vec<Vec<Int>> = candidates
        .into_iter()
        .filter(|p| {
            !set.iter().any(|h| {
                if h == p {
                    return false;
                }
                let diff: Vec<Int> = p.iter().zip(h).map(|(a, b)| a - b).collect();
                diff.iter().any(|x| !x.is_zero()) && data.contains(&diff)
            })
        })
        .collect();
    basis.sort();
    Ok(basis)
}

/// Shape of the detected generator/relation presentation, used to
/// recognize the ordinary-double-point monoid `k[x,y,w,t]/(xy − wt)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationShape {
    pub generators: usize,
    pub relation_rank: usize,
    /// each relation as (positive support size, negative support size)
    pub relation_types: Vec<(usize, usize)>,
}

pub fn presentation_shape(data: &MonoidData) -> PresentationShape {
    let rels = &data.relations;
    let mut relation_types = Vec::new();
    for j in 0..rels.cols {
        let col = rels.col_vec(j);
        let pos = col.iter().filter(|x| x.is_positive()).count();
        let neg = col.iter().filter(|x| x.is_negative()).count();
        relation_types.push((pos.max(neg), pos.min(neg)));
    }
    relation_types.sort();
    PresentationShape {
        generators: data.hilbert_basis.len(),
        relation_rank: rels.cols,
        relation_types,
    }
}

/// The conifold monoid: τ = [0,1], Δ₁ = [0,1].
pub fn conifold_monoid() -> MonoidData {
    let tau = crate::polytope::segment(vec![0], vec![1]);
    let d1 = crate::polytope::segment(vec![0], vec![1]);
    build_monoid(tau, vec![d1]).expect("conifold monoid")
}

/// The order-two wall monoid: τ = [0,2], Δ₁ = [0,1].
pub fn l2_monoid() -> MonoidData {
    let tau = crate::polytope::segment(vec![0], vec![2]);
    let d1 = crate::polytope::segment(vec![0], vec![1]);
    build_monoid(tau, vec![d1]).expect("l = 2 monoid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int_vec;

    #[test]
    fn conifold_structure() {
        let m = conifold_monoid();
        assert_eq!(m.rank, 3);
        assert_eq!(m.s_generators.len(), 2);
        assert_eq!(m.w_generators.len(), 2);
        // K generated by (0,1,0),(1,1,0),(0,0,1),(1,0,1)
        let gens = m.k_generators();
        assert!(gens.contains(&int_vec(&[0, 1, 0])));
        assert!(gens.contains(&int_vec(&[1, 1, 0])));
        assert!(gens.contains(&int_vec(&[0, 0, 1])));
        assert!(gens.contains(&int_vec(&[1, 0, 1])));
        // k[P] ≅ k[x,y,w,t]/(xy − wt)
        let shape = presentation_shape(&m);
        assert_eq!(shape.generators, 4);
        assert_eq!(shape.relation_rank, 1);
        assert_eq!(shape.relation_types, vec![(2, 2)]);
        // the single relation pairs two generators against the other two
        let rel = m.relations.col_vec(0);
        let mut sum = vec![Int::zero(); 3];
        for (j, c) in rel.iter().enumerate() {
            for i in 0..3 {
                sum[i] = &sum[i] + c * &m.hilbert_basis[j][i];
            }
        }
        assert!(sum.iter().all(|x| x.is_zero()));
        // ρ = e0* = (0,1,0) is one of the generators (the deformation parameter)
        assert!(m.hilbert_basis.contains(&int_vec(&[0, 1, 0])));
    }

    #[test]
    fn l2_structure() {
        let m = l2_monoid();
        let gens = m.k_generators();
        assert!(gens.contains(&int_vec(&[0, 1, 0])));
        assert!(gens.contains(&int_vec(&[2, 1, 0])));
        assert!(gens.contains(&int_vec(&[0, 0, 1])));
        assert!(gens.contains(&int_vec(&[1, 0, 1])));
        assert!(m.rho_interior_check().is_ok());
    }

    #[test]
    fn free_monoid_when_q_zero() {
        let m = build_monoid(crate::polytope::standard_simplex(2), vec![]).unwrap();
        assert_eq!(m.s_generators.len(), 3);
        assert_eq!(m.w_generators.len(), 0);
        assert_eq!(m.relations.cols, 0, "free monoid has no relations");
    }

    #[test]
    fn ideal_membership_two_routes() {
        let m = conifold_monoid();
        for p in m.points_in_box(3) {
            for k in 0..3usize {
                let direct = m.in_ideal(&p, k);
                // route two: ⟨v, p − (k+1)ρ⟩ ≥ 0 for all generators
                let shift: Vec<Int> = p
                    .iter()
                    .zip(&m.rho)
                    .map(|(a, b)| a - b * int((k + 1) as i64))
                    .collect();
                let via_gens =
                    m.k_generators().iter().all(|g| !dot(&shift, g).is_negative());
                assert_eq!(direct, via_gens);
            }
        }
    }
}
