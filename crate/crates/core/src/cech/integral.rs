//! Integral flag-Čech cohomology: free ranks and torsion via Smith
//! normal form of the integral differentials on the invariant lattices.

use super::CechComplex;
use crate::complex::transport::SystemKind;
use crate::complex::IntegralAffineComplex;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{integer_kernel, smith_normal_form, Int, IntMat};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
pub struct IntegralCohomology {
    pub free_ranks: Vec<usize>,
    /// invariant factors > 1 of H^p, per degree
    pub torsion: Vec<Vec<String>>,
}

/// Rebuild the complex over ℤ (invariant sublattices, integral
/// differentials) and read off ranks and torsion from Smith forms.
pub fn integral_cohomology(
    cx: &IntegralAffineComplex,
    kind: SystemKind,
    r: usize,
    exec: Exec,
) -> Result<IntegralCohomology> {
    let c = CechComplex::build(cx, kind, r, exec)?;
    if c.dims.iter().any(|&d| d > 5000) {
        return Err(Error::BoundTooLarge(*c.dims.iter().max().unwrap()));
    }
    // integral invariant bases per pair: saturated kernels over ℤ
    let mut zbases: BTreeMap<(usize, usize), IntMat> = BTreeMap::new();
    for (&(a, b), _) in c.pair_bases.iter() {
        let gens = super::pair_generators(cx, a, b)?;
        let rank = c.rank;
        let mats: Vec<IntMat> = gens
            .iter()
            .map(|g| {
                crate::complex::transport::rep_of_transport(kind, r, g)
                    .sub(&IntMat::identity(rank))
            })
            .filter(|m| !m.is_zero())
            .collect();
        let basis = if mats.is_empty() {
            IntMat::identity(rank)
        } else {
            let refs: Vec<&IntMat> = mats.iter().collect();
            integer_kernel(&IntMat::vstack(&refs))
        };
        zbases.insert((a, b), basis);
    }
    // dimensions coincide with the rational ones (kernels are saturated)
    let mut offsets: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut dims: Vec<usize> = Vec::new();
    for (p, flags) in c.flags.iter().enumerate() {
        let mut off = Vec::new();
        let mut pos = 0;
        for f in flags {
            let w = zbases[&(f.0[0], *f.0.last().unwrap())].cols;
            assert_eq!(w, c.offsets[p][flags.iter().position(|x| x.0 == f.0).unwrap()].1);
            off.push((pos, w));
            pos += w;
        }
        offsets.push(off);
        dims.push(pos);
    }
    // integral differentials: same recipe as the rational assembly, but
    // solved in the ℤ-bases (solutions are integral because the lattices
    // are saturated and transports unimodular)
    let mut diffs: Vec<IntMat> = Vec::new();
    for p in 0..c.flags.len().saturating_sub(1) {
        let src_index: BTreeMap<&[usize], usize> = c.flags[p]
            .iter()
            .enumerate()
            .map(|(i, f)| (f.0.as_slice(), i))
            .collect();
        let mut d = IntMat::zero(dims[p + 1], dims[p]);
        for (ti, target) in c.flags[p + 1].iter().enumerate() {
            let (t_off, t_width) = offsets[p + 1][ti];
            if t_width == 0 {
                continue;
            }
            let t_basis = zbases[&(target.0[0], *target.0.last().unwrap())].to_rat();
            let mut solver = crate::lattice::RatSolver::new(c.rank);
            for j in 0..t_basis.cols {
                solver.push_column(t_basis.col_vec(j));
            }
            for drop in 0..target.0.len() {
                let mut chain = target.0.clone();
                chain.remove(drop);
                let Some(&si) = src_index.get(chain.as_slice()) else { continue };
                let (s_off, s_width) = offsets[p][si];
                if s_width == 0 {
                    continue;
                }
                let source = &c.flags[p][si];
                let s_basis = &zbases[&(source.0[0], *source.0.last().unwrap())];
                let sign = if drop % 2 == 0 { Int::one() } else { -Int::one() };
                let mapped: IntMat = if drop == 0 {
                    let v1 = cx.base_vertex(target.0[1]);
                    let v0 = cx.base_vertex(target.0[0]);
                    let sigma = cx.designated_maximal(*target.0.last().unwrap());
                    let g = cx.transport(v1, v0, sigma);
                    crate::complex::transport::rep_of_transport(kind, r, &g).mul(s_basis)
                } else {
                    s_basis.clone()
                };
                for col in 0..mapped.cols {
                    let w: Vec<crate::lattice::Rat> =
                        mapped.col_vec(col).iter().map(crate::lattice::rat_int).collect();
                    let x = solver
                        .solve(&w)
                        .ok_or_else(|| Error::TransportAmbiguity(format!("{:?}", target.0)))?;
                    for (k, v) in x.iter().enumerate() {
                        if !v.is_zero() {
                            if !v.denom().is_one() {
                                return Err(Error::Invalid(
                                    "integral differential has fractional entry".into(),
                                ));
                            }
                            d[(t_off + k, s_off + col)] = &sign * v.numer();
                        }
                    }
                }
            }
        }
        diffs.push(d);
    }
    // H^p = ker d_p / im d_{p-1}: free rank by rank-nullity, torsion from
    // the invariant factors of d_{p-1}
    let snfs: Vec<crate::lattice::SmithForm> =
        exec.map_slice(&diffs, smith_normal_form);
    let mut free_ranks = Vec::new();
    let mut torsion = Vec::new();
    for p in 0..dims.len() {
        let rk_out = if p < snfs.len() { snfs[p].rank() } else { 0 };
        let rk_in = if p == 0 { 0 } else { snfs[p - 1].rank() };
        free_ranks.push(dims[p] - rk_out - rk_in);
        let tors: Vec<String> = if p == 0 {
            Vec::new()
        } else {
            snfs[p - 1]
                .invariant_factors()
                .into_iter()
                .filter(|x| !x.is_one())
                .map(|x| x.to_string())
                .collect()
        };
        torsion.push(tors);
    }
    Ok(IntegralCohomology { free_ranks, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn torus_torsion_free() {
        let cx = fixtures::torus_2d();
        for r in 0..=2 {
            let h = integral_cohomology(&cx, SystemKind::WedgeCheck, r, Exec::Sequential)
                .unwrap();
            assert!(h.torsion.iter().all(|t| t.is_empty()), "r = {r}: {:?}", h.torsion);
        }
        // constant ℤ on T²: H² = ℤ, no torsion
        let h = integral_cohomology(&cx, SystemKind::WedgeCheck, 0, Exec::Sequential).unwrap();
        assert_eq!(h.free_ranks, vec![1, 2, 1]);
    }

    #[test]
    fn shear_quotient_torsion() {
        // the ℤ/2 shear-quotient system: a nil-torus with one loop acting
        // by [[1,2],[0,1]]; the Wang sequence forces 2-torsion
        let cx = fixtures::nil_torus(2);
        assert!(cx.validate().is_valid());
        let h = integral_cohomology(&cx, SystemKind::WedgeCheck, 1, Exec::Sequential).unwrap();
        assert_eq!(h.free_ranks, vec![1, 2, 1]);
        let all: Vec<&String> = h.torsion.iter().flatten().collect();
        assert!(!all.is_empty() && all.iter().all(|t| *t == "2"),
            "torsion {:?} ranks {:?}", h.torsion, h.free_ranks);
        // the untwisted torus sees none
        let cx1 = fixtures::torus_2d();
        let h1 = integral_cohomology(&cx1, SystemKind::WedgeCheck, 1, Exec::Sequential).unwrap();
        assert!(h1.torsion.iter().all(|t| t.is_empty()));
    }
}
