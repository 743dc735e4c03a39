//! Flag-Čech complexes for the local systems `i_* ∧^r Λ̌`, `i_* ∧^r Λ`
//! and `i_* ∧^r Aff(B,ℤ)`.
//!
//! The cover is the open-star cover of the barycentric subdivision:
//! opens intersect exactly along strict chains in the face poset, so
//! cochains live on flags `σ₀ ⊊ … ⊊ σ_p` with coefficients in the
//! monodromy-invariant subspace of the fiber at the base vertex of σ₀.
//! Invariants depend only on the flag's endpoints; the differential's
//! leading term transports through the designated maximal cell, with a
//! runtime independence assertion across the other choices.

pub mod cup;
pub mod hodge;
pub mod integral;
pub mod sparse;

use crate::complex::monodromy::loop_transport;
use crate::complex::transport::{fiber_rank, rep_of_transport, SystemKind};
use crate::complex::{ChartTransport, IntegralAffineComplex};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{kernel_basis_q, rat_int, Rat, RatMat};
use num_traits::Zero;
use sparse::SparseMat;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct Flag(pub Vec<usize>);

/// The assembled complex: flags per degree, one invariant basis per
/// flag-endpoint pair, and the sparse differentials over ℚ.
pub struct CechComplex {
    pub kind: SystemKind,
    pub r: usize,
    pub rank: usize,
    pub flags: Vec<Vec<Flag>>,
    /// (flag degree, flag index) -> column offset and width in C^p
    pub offsets: Vec<Vec<(usize, usize)>>,
    pub dims: Vec<usize>,
    /// invariant bases per (endpoint pair), columns in fiber coordinates
    pub pair_bases: BTreeMap<(usize, usize), RatMat>,
    pub differentials: Vec<SparseMat>,
}

/// Monodromy generators of the flag pair `(τ₁ ⊆ τ₂)`: loops based at
/// the base vertex of τ₁, around every codimension-one `ρ ⊇ τ₂`, to
/// every other vertex of τ₁.
pub fn pair_generators(
    cx: &IntegralAffineComplex,
    tau1: usize,
    tau2: usize,
) -> Result<Vec<ChartTransport>> {
    let base = cx.base_vertex(tau1);
    let mut gens = Vec::new();
    for rho in cx.codim1_containing(tau2) {
        if cx.maximal_containing(rho).len() != 2 {
            continue;
        }
        for &v2 in &cx.cells[&tau1].vertices {
            if v2 == base {
                continue;
            }
            gens.push(loop_transport(cx, rho, base, v2)?);
        }
    }
    Ok(gens)
}

/// Basis (columns) of the common fixed space of the generators.
pub fn invariant_sections(
    cx: &IntegralAffineComplex,
    kind: SystemKind,
    r: usize,
    tau1: usize,
    tau2: usize,
) -> Result<RatMat> {
    let rank = fiber_rank(kind, cx.n, r);
    let gens = pair_generators(cx, tau1, tau2)?;
    let nontrivial: Vec<RatMat> = gens
        .iter()
        .map(|g| rep_of_transport(kind, r, g).to_rat())
        .filter(|m| !m.sub(&RatMat::identity(rank)).is_zero())
        .collect();
    if nontrivial.is_empty() {
        return Ok(RatMat::identity(rank));
    }
    let stacked: Vec<RatMat> =
        nontrivial.iter().map(|m| m.sub(&RatMat::identity(rank))).collect();
    let refs: Vec<&RatMat> = stacked.iter().collect();
    let big = RatMat::vstack(&refs);
    Ok(kernel_basis_q(&big))
}

/// All strict chains in the face poset, grouped by length.
pub fn enumerate_flags(cx: &IntegralAffineComplex) -> Vec<Vec<Flag>> {
    let mut ids: Vec<usize> = cx.cells.keys().copied().collect();
    ids.sort();
    let mut by_len: Vec<Vec<Flag>> = vec![ids.iter().map(|&c| Flag(vec![c])).collect()];
    loop {
        let prev = by_len.last().unwrap();
        let mut next = Vec::new();
        for f in prev {
            let last = *f.0.last().unwrap();
            for &c in cx.cofaces(last) {
                if c != last && cx.cells[&c].dim > cx.cells[&last].dim {
                    let mut chain = f.0.clone();
                    chain.push(c);
                    next.push(Flag(chain));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        by_len.push(next);
    }
    by_len
}

impl CechComplex {
    pub fn build(
        cx: &IntegralAffineComplex,
        kind: SystemKind,
        r: usize,
        exec: Exec,
    ) -> Result<CechComplex> {
        let rank = fiber_rank(kind, cx.n, r);
        let flags = enumerate_flags(cx);
        // distinct endpoint pairs
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for fl in &flags {
            for f in fl {
                let p = (f.0[0], *f.0.last().unwrap());
                pairs.push(p);
            }
        }
        pairs.sort();
        pairs.dedup();
        let bases: Vec<Result<((usize, usize), RatMat)>> = exec.map_slice(&pairs, |&(a, b)| {
            Ok(((a, b), invariant_sections(cx, kind, r, a, b)?))
        });
        let mut pair_bases = BTreeMap::new();
        for b in bases {
            let (k, v) = b?;
            pair_bases.insert(k, v);
        }
        let mut offsets = Vec::new();
        let mut dims = Vec::new();
        for fl in &flags {
            let mut off = Vec::new();
            let mut pos = 0;
            for f in fl {
                let w = pair_bases[&(f.0[0], *f.0.last().unwrap())].cols;
                off.push((pos, w));
                pos += w;
            }
            offsets.push(off);
            dims.push(pos);
        }
        let mut complex = CechComplex {
            kind,
            r,
            rank,
            flags,
            offsets,
            dims,
            pair_bases,
            differentials: Vec::new(),
        };
        complex.assemble_differentials(cx, exec)?;
        Ok(complex)
    }

    fn pair_basis(&self, f: &Flag) -> &RatMat {
        &self.pair_bases[&(f.0[0], *f.0.last().unwrap())]
    }

    fn assemble_differentials(
        &mut self,
        cx: &IntegralAffineComplex,
        exec: Exec,
    ) -> Result<()> {
        let degrees = self.flags.len();
        let mut out = Vec::new();
        for p in 0..degrees.saturating_sub(1) {
            // index of source flags for O(1) lookup
            let src_index: BTreeMap<&[usize], usize> = self.flags[p]
                .iter()
                .enumerate()
                .map(|(i, f)| (f.0.as_slice(), i))
                .collect();
            let target_blocks: Vec<Result<Vec<(usize, usize, Rat)>>> =
                exec.map_indexed(self.flags[p + 1].len(), |ti| {
                    self.differential_block(cx, p, ti, &src_index)
                });
            let mut trips = Vec::new();
            for b in target_blocks {
                trips.extend(b?);
            }
            out.push(SparseMat::from_triplets(self.dims[p + 1], self.dims[p], trips));
        }
        self.differentials = out;
        Ok(())
    }

    /// All rows of d_p hitting one target flag.
    fn differential_block(
        &self,
        cx: &IntegralAffineComplex,
        p: usize,
        ti: usize,
        src_index: &BTreeMap<&[usize], usize>,
    ) -> Result<Vec<(usize, usize, Rat)>> {
        let target = &self.flags[p + 1][ti];
        let (t_off, t_width) = self.offsets[p + 1][ti];
        if t_width == 0 {
            return Ok(Vec::new());
        }
        let t_basis = self.pair_basis(target);
        let mut solver = crate::lattice::RatSolver::new(self.rank);
        for j in 0..t_basis.cols {
            solver.push_column(t_basis.col_vec(j));
        }
        let mut trips = Vec::new();
        for drop in 0..target.0.len() {
            let mut chain = target.0.clone();
            chain.remove(drop);
            let Some(&si) = src_index.get(chain.as_slice()) else {
                continue;
            };
            let (s_off, s_width) = self.offsets[p][si];
            if s_width == 0 {
                continue;
            }
            let source = &self.flags[p][si];
            let s_basis = self.pair_basis(source);
            let sign = if drop % 2 == 0 { Rat::from_integer(1.into()) } else { Rat::from_integer((-1).into()) };
            let mapped: RatMat = if drop == 0 {
                // transport base(σ₁) → base(σ₀) through the designated
                // maximal cell of the largest flag cell
                let v1 = cx.base_vertex(target.0[1]);
                let v0 = cx.base_vertex(target.0[0]);
                let top = *target.0.last().unwrap();
                let sigmas = cx.maximal_containing(top);
                let g = cx.transport(v1, v0, sigmas[0]);
                let rep = rep_of_transport(self.kind, self.r, &g).to_rat();
                let moved = rep.mul(s_basis);
                // independence of the maximal-cell choice on the invariants
                for &s2 in &sigmas[1..] {
                    let g2 = cx.transport(v1, v0, s2);
                    let rep2 = rep_of_transport(self.kind, self.r, &g2).to_rat();
                    if !rep2.mul(s_basis).sub(&moved).is_zero() {
                        return Err(Error::TransportAmbiguity(format!("{:?}", target.0)));
                    }
                }
                moved
            } else {
                s_basis.clone()
            };
            for col in 0..mapped.cols {
                let w = mapped.col_vec(col);
                let x = solver.solve(&w).ok_or_else(|| {
                    Error::TransportAmbiguity(format!(
                        "image leaves the invariant subspace at flag {:?}",
                        target.0
                    ))
                })?;
                for (k, v) in x.iter().enumerate() {
                    if !v.is_zero() {
                        trips.push((t_off + k, s_off + col, &sign * v));
                    }
                }
            }
        }
        Ok(trips)
    }

    /// `d ∘ d = 0`, checked exactly (cheap on the bundled fixtures).
    pub fn d_squared_is_zero(&self) -> bool {
        for w in self.differentials.windows(2) {
            let (d0, d1) = (&w[0], &w[1]);
            for j in 0..d0.cols {
                let col = d0.col(j);
                let x = sparse::sparse_to_dense(&col, d0.rows);
                let y = d1.mul_dense(&x);
                if y.iter().any(|v| !v.is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// Cohomology dimensions `h^p` via rank-nullity; ranks parallel.
    pub fn betti(&self, exec: Exec) -> Vec<usize> {
        let ranks: Vec<usize> =
            exec.map_slice(&self.differentials, |d| d.rank());
        let mut out = Vec::new();
        for p in 0..self.dims.len() {
            let rk_out = if p < ranks.len() { ranks[p] } else { 0 };
            let rk_in = if p == 0 { 0 } else { ranks[p - 1] };
            out.push(self.dims[p] - rk_out - rk_in);
        }
        out
    }

    /// Expand flag coefficients to fiber coordinates at the flag's base.
    pub fn to_fiber(&self, p: usize, flag_idx: usize, coeffs: &[Rat]) -> Vec<Rat> {
        let basis = self.pair_basis(&self.flags[p][flag_idx]);
        let mut out = vec![Rat::zero(); self.rank];
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for i in 0..self.rank {
                let t = &basis[(i, j)] * c;
                out[i] = &out[i] + &t;
            }
        }
        out
    }

    /// Coefficients of a fiber vector in a flag's invariant basis.
    pub fn from_fiber(&self, p: usize, flag_idx: usize, w: &[Rat]) -> Option<Vec<Rat>> {
        let basis = self.pair_basis(&self.flags[p][flag_idx]);
        let mut solver = crate::lattice::RatSolver::new(self.rank);
        for j in 0..basis.cols {
            solver.push_column(basis.col_vec(j));
        }
        solver.solve(w)
    }
}

/// A cochain presented per flag in fiber coordinates.
pub type FiberCochain = BTreeMap<Vec<usize>, Vec<Rat>>;

/// Assemble a global coordinate vector of C^p from fiber data.
pub fn cochain_to_vec(c: &CechComplex, p: usize, data: &FiberCochain) -> Result<Vec<Rat>> {
    let mut out = vec![Rat::zero(); c.dims[p]];
    for (fi, f) in c.flags[p].iter().enumerate() {
        let Some(w) = data.get(&f.0) else { continue };
        let coeffs = c
            .from_fiber(p, fi, w)
            .ok_or_else(|| Error::Invalid("cochain not invariant".into()))?;
        let (off, width) = c.offsets[p][fi];
        for (k, v) in coeffs.iter().enumerate().take(width) {
            out[off + k] = v.clone();
        }
    }
    Ok(out)
}

/// Trivial-monodromy sanity oracle used by tests: Betti numbers of the
/// constant system of a given rank (cellular cohomology tensored up).
pub fn constant_system_betti(cx: &IntegralAffineComplex, rank: usize, exec: Exec) -> Vec<usize> {
    let c = CechComplex::build(cx, SystemKind::WedgeCheck, 0, exec)
        .expect("constant system builds");
    c.betti(exec).into_iter().map(|b| b * rank).collect()
}

pub fn rat(x: i64) -> Rat {
    rat_int(&crate::lattice::int(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn torus_constant_sheaf() {
        let cx = fixtures::torus_2d();
        let c = CechComplex::build(&cx, SystemKind::WedgeCheck, 0, Exec::Sequential).unwrap();
        assert!(c.d_squared_is_zero());
        assert_eq!(c.betti(Exec::Sequential), vec![1, 2, 1]);
    }

    #[test]
    fn torus_rank_two_system() {
        let cx = fixtures::torus_2d();
        let c = CechComplex::build(&cx, SystemKind::WedgeCheck, 1, Exec::Sequential).unwrap();
        assert_eq!(c.betti(Exec::Sequential), vec![2, 4, 2]);
    }

    #[test]
    fn torus_lambda_and_aff() {
        let cx = fixtures::torus_2d();
        let c = CechComplex::build(&cx, SystemKind::WedgeLambda, 1, Exec::Sequential).unwrap();
        assert_eq!(c.betti(Exec::Sequential), vec![2, 4, 2]);
        let c = CechComplex::build(&cx, SystemKind::WedgeAff, 1, Exec::Sequential).unwrap();
        assert!(c.d_squared_is_zero());
        assert_eq!(c.betti(Exec::Sequential), vec![1, 3, 2]);
        let c = CechComplex::build(&cx, SystemKind::WedgeAff, 2, Exec::Sequential).unwrap();
        assert_eq!(c.betti(Exec::Sequential), vec![2, 3, 1]);
    }

    #[test]
    fn single_cell_contractible() {
        // one square with boundary: contractible nerve
        let cx = fixtures::shear_fixture(0);
        let c = CechComplex::build(&cx, SystemKind::WedgeCheck, 1, Exec::Sequential).unwrap();
        let b = c.betti(Exec::Sequential);
        assert_eq!(b[0], 2);
        assert!(b[1..].iter().all(|&x| x == 0));
    }

    #[test]
    fn shear_invariants() {
        // single shear: invariants of Λ = span{d}, of Λ̌ = span{ď},
        // of ∧²Λ̌ = everything
        let cx = fixtures::shear_fixture(1);
        let wall = fixtures::shear_fixture_wall(&cx);
        let inv =
            invariant_sections(&cx, SystemKind::WedgeLambda, 1, wall, wall).unwrap();
        assert_eq!(inv.cols, 1);
        assert_eq!((inv[(0, 0)].clone(), inv[(1, 0)].clone()), (rat(1), rat(0)));
        let inv = invariant_sections(&cx, SystemKind::WedgeCheck, 1, wall, wall).unwrap();
        assert_eq!(inv.cols, 1);
        assert_eq!((inv[(0, 0)].clone(), inv[(1, 0)].clone()), (rat(0), rat(1)));
        let inv = invariant_sections(&cx, SystemKind::WedgeCheck, 2, wall, wall).unwrap();
        assert_eq!(inv.cols, 1);
    }
}
