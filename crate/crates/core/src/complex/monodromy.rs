//! Loop transports around codimension-one cells and their shear data:
//! the vectors `d_ω`, `ď_ρ`, `m^ρ_{v⁺v⁻}`, `n^{σ⁺σ⁻}_ω` and the
//! integers `κ_{ωρ}`.

use super::{ChartTransport, IntegralAffineComplex};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{
    content, dot, integer_kernel, primitive, rank_q, sub_vec, Int, IntMat,
};
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

/// Loop from `v` into the lower-id maximal cell of `rho`, over to `v2`,
/// and back through the other side. The orientation (enter the lower-id
/// side first) pins the signs of all extracted monodromy data.
pub fn loop_transport(
    cx: &IntegralAffineComplex,
    rho: usize,
    v: usize,
    v2: usize,
) -> Result<ChartTransport> {
    let sides = cx.maximal_containing(rho);
    if sides.len() != 2 {
        return Err(Error::BadCell(rho, format!("{} adjacent maximal cells", sides.len())));
    }
    let (plus, minus) = (sides[0], sides[1]);
    let g1 = cx.transport(v, v2, plus);
    let g2 = cx.transport(v2, v, minus);
    Ok(g2.compose(&g1))
}

/// `T − id = u · w̃ᵀ` with `u` primitive; `κ = content(w̃)`, `ď = w̃/κ`.
fn shear_factor(t: &IntMat, rho: usize) -> Result<Option<(Vec<Int>, Vec<Int>, Int)>> {
    let n = t.rows;
    let d = t.sub(&IntMat::identity(n));
    if d.is_zero() {
        return Ok(None);
    }
    if rank_q(&d.to_rat()) > 1 || !d.mul(&d).is_zero() {
        return Err(Error::NotShear { rho, rank: rank_q(&d.to_rat()) });
    }
    let j0 = (0..n)
        .find(|&j| (0..n).any(|i| !d[(i, j)].is_zero()))
        .expect("nonzero matrix has a nonzero column");
    let u = primitive(&d.col_vec(j0))?;
    let iu = (0..n).find(|&i| !u[i].is_zero()).unwrap();
    let mut w = vec![Int::zero(); n];
    for (j, wj) in w.iter_mut().enumerate() {
        *wj = &d[(iu, j)] / &u[iu];
    }
    // verify exact rank-one factorization
    for i in 0..n {
        for j in 0..n {
            if &u[i] * &w[j] != d[(i, j)] {
                return Err(Error::NotShear { rho, rank: 2 });
            }
        }
    }
    let kappa = content(&w);
    let dcheck: Vec<Int> = w.iter().map(|x| x / &kappa).collect();
    Ok(Some((u, dcheck, kappa)))
}

/// Primitive annihilator of the tangent space of `rho` at the chart of
/// `v`, signed positive towards the lower-id adjacent maximal cell.
pub fn facet_covector(
    cx: &IntegralAffineComplex,
    rho: usize,
    v: usize,
) -> Result<Vec<Int>> {
    let sides = cx.maximal_containing(rho);
    if sides.len() != 2 {
        return Err(Error::BadCell(rho, "not a two-sided wall".into()));
    }
    let plus = sides[0];
    let rv = cx.cells[&rho].vertices.clone();
    let dirs: Vec<Vec<Int>> =
        rv.iter().filter(|&&x| x != v).map(|&x| cx.psi(v, plus, x)).collect();
    let m = IntMat::from_fn(dirs.len().max(1), cx.n, |i, j| {
        if dirs.is_empty() { Int::zero() } else { dirs[i][j].clone() }
    });
    let k = integer_kernel(&m);
    if k.cols != 1 {
        return Err(Error::BadCell(rho, "tangent space is not codimension one".into()));
    }
    let mut a = primitive(&k.col_vec(0))?;
    // orient towards the interior of the plus side
    let plus_vertex = cx.cells[&plus]
        .vertices
        .iter()
        .copied()
        .find(|x| !rv.contains(x))
        .ok_or_else(|| Error::BadCell(plus, "maximal cell equals its wall".into()))?;
    let val = dot(&a, &cx.psi(v, plus, plus_vertex));
    if val.is_negative() {
        a = a.iter().map(|x| -x.clone()).collect();
    } else if val.is_zero() {
        return Err(Error::BadCell(rho, "degenerate wall orientation".into()));
    }
    Ok(a)
}

/// Facet monodromy data `(ď_ρ, m^ρ_{v⁺v⁻})` at the chart of `v_plus`.
pub fn facet_monodromy(
    cx: &IntegralAffineComplex,
    rho: usize,
    v_plus: usize,
    v_minus: usize,
) -> Result<(Vec<Int>, Vec<Int>)> {
    let t = loop_transport(cx, rho, v_plus, v_minus)?;
    let dcheck_geom = facet_covector(cx, rho, v_plus)?;
    match shear_factor(&t.linear, rho)? {
        None => Ok((dcheck_geom, vec![Int::zero(); cx.n])),
        Some((u, w, kappa)) => {
            // T(m) = m + <w, m> κ u; normalize so the covector is the
            // geometrically oriented ď_ρ
            if w == dcheck_geom {
                Ok((dcheck_geom, crate::lattice::scale_vec(&kappa, &u)))
            } else if w.iter().map(|x| -x.clone()).collect::<Vec<_>>() == dcheck_geom {
                Ok((dcheck_geom, crate::lattice::scale_vec(&(-kappa), &u)))
            } else {
                Err(Error::NotShear { rho, rank: 1 })
            }
        }
    }
}

/// Edge monodromy `(d_ω, n^{σ⁺σ⁻}_ω)` for the loop through the ordered
/// pair of maximal cells, based at the lower-id vertex of `ω`.
pub fn edge_monodromy(
    cx: &IntegralAffineComplex,
    omega: usize,
    sigma_plus: usize,
    sigma_minus: usize,
) -> Result<(Vec<Int>, Vec<Int>)> {
    let vs = cx.cells[&omega].vertices.clone();
    if vs.len() != 2 {
        return Err(Error::BadCell(omega, "not an edge".into()));
    }
    let (v_plus, v_minus) = (vs[0].min(vs[1]), vs[0].max(vs[1]));
    let g1 = cx.transport(v_plus, v_minus, sigma_plus);
    let g2 = cx.transport(v_minus, v_plus, sigma_minus);
    let t = g2.compose(&g1);
    // d_ω: primitive tangent of ω pointing v_plus -> v_minus
    let d_omega = primitive(&cx.psi(v_plus, sigma_plus, v_minus))?;
    let n = cx.n;
    let dmat = t.linear.sub(&IntMat::identity(n));
    if dmat.is_zero() {
        return Ok((d_omega, vec![Int::zero(); n]));
    }
    match shear_factor(&t.linear, omega)? {
        None => Ok((d_omega, vec![Int::zero(); n])),
        Some((u, w, kappa)) => {
            // T - id = (κ' d_ω) wᵀ with u = ± d_ω
            if u == d_omega {
                Ok((d_omega, crate::lattice::scale_vec(&kappa, &w)))
            } else if u.iter().map(|x| -x.clone()).collect::<Vec<_>>() == d_omega {
                Ok((d_omega, crate::lattice::scale_vec(&(-kappa), &w)))
            } else {
                Err(Error::NotShear { rho: omega, rank: 1 })
            }
        }
    }
}

/// `κ_{ωρ}`: the integer with `T − id = κ · d_ω ⊗ ď_ρ` for the loop of
/// the pair `ω ⊆ ρ`.
pub fn kappa(cx: &IntegralAffineComplex, omega: usize, rho: usize) -> Result<Int> {
    if !cx.contains_cell(rho, omega) {
        return Err(Error::BadCell(omega, format!("not a face of {rho}")));
    }
    let vs = cx.cells[&omega].vertices.clone();
    if vs.len() != 2 {
        return Err(Error::BadCell(omega, "not an edge".into()));
    }
    let (v_plus, v_minus) = (vs[0].min(vs[1]), vs[0].max(vs[1]));
    let (dcheck, m) = facet_monodromy(cx, rho, v_plus, v_minus)?;
    if m.iter().all(|x| x.is_zero()) {
        return Ok(Int::zero());
    }
    let sigma_plus = cx.maximal_containing(rho)[0];
    let d_omega = primitive(&cx.psi(v_plus, sigma_plus, v_minus))?;
    // m = κ d_ω; exact divisibility required
    let i = (0..cx.n)
        .find(|&i| !d_omega[i].is_zero())
        .expect("primitive vector is nonzero");
    let k = &m[i] / &d_omega[i];
    if crate::lattice::scale_vec(&k, &d_omega) != m {
        return Err(Error::NotShear { rho, rank: 1 });
    }
    debug_assert!(dot(&dcheck, &d_omega).is_zero(), "shear direction tangent to the wall");
    Ok(k)
}

/// Full monodromy inventory of a complex.
#[derive(Clone, Debug, Default)]
pub struct MonodromyData {
    /// per codim-1 cell: ď_ρ and the m-vectors for each ordered vertex pair
    pub facets: BTreeMap<usize, (Vec<Int>, BTreeMap<(usize, usize), Vec<Int>>)>,
    /// per edge: d_ω and the n-covectors for each ordered pair of maximal cells
    pub edges: BTreeMap<usize, (Vec<Int>, BTreeMap<(usize, usize), Vec<Int>>)>,
    /// per pair (ω, ρ) with ω ⊆ ρ
    pub kappas: BTreeMap<(usize, usize), Int>,
}

pub fn extract_monodromy(cx: &IntegralAffineComplex, exec: Exec) -> Result<MonodromyData> {
    let mut data = MonodromyData::default();
    // one-sided walls (germ fixtures with boundary) carry no loop data
    let rhos: Vec<usize> = cx
        .cells_of_dim(cx.n.saturating_sub(1))
        .into_iter()
        .filter(|&rho| cx.maximal_containing(rho).len() == 2)
        .collect();
    let facet_results: Vec<Result<(usize, (Vec<Int>, BTreeMap<(usize, usize), Vec<Int>>))>> =
        exec.map_slice(&rhos, |&rho| {
            let verts = cx.cells[&rho].vertices.clone();
            let base = cx.base_vertex(rho);
            let dcheck = facet_covector(cx, rho, base)?;
            let mut ms = BTreeMap::new();
            for &v2 in &verts {
                if v2 == base {
                    continue;
                }
                let (_, m) = facet_monodromy(cx, rho, base, v2)?;
                ms.insert((base, v2), m);
            }
            Ok((rho, (dcheck, ms)))
        });
    for r in facet_results {
        let (rho, v) = r?;
        data.facets.insert(rho, v);
    }
    let omegas = cx.cells_of_dim(1);
    for omega in omegas {
        let sigmas = cx.maximal_containing(omega);
        let mut ns = BTreeMap::new();
        let mut d_omega = None;
        let s0 = *sigmas.first().expect("edge in a maximal cell");
        for &s in &sigmas {
            let (d, nvec) = edge_monodromy(cx, omega, s0, s)?;
            d_omega.get_or_insert(d);
            ns.insert((s0, s), nvec);
        }
        data.edges.insert(omega, (d_omega.expect("edge data"), ns));
        for rho in cx.codim1_containing(omega) {
            if cx.maximal_containing(rho).len() == 2 {
                let k = kappa(cx, omega, rho)?;
                data.kappas.insert((omega, rho), k);
            }
        }
    }
    Ok(data)
}

/// All κ nonnegative under the orientation convention.
pub fn check_positive(cx: &IntegralAffineComplex, exec: Exec) -> Result<bool> {
    let data = extract_monodromy(cx, exec)?;
    Ok(data.kappas.values().all(|k| !k.is_negative()))
}

/// `(T − id)² = 0` for every facet loop; used as a structural assertion.
pub fn all_loops_two_step_unipotent(cx: &IntegralAffineComplex) -> Result<bool> {
    for rho in cx.cells_of_dim(cx.n.saturating_sub(1)) {
        if cx.maximal_containing(rho).len() != 2 {
            continue;
        }
        let verts = cx.cells[&rho].vertices.clone();
        let base = cx.base_vertex(rho);
        for &v2 in &verts {
            let t = loop_transport(cx, rho, base, v2)?;
            let d = t.linear.sub(&IntMat::identity(cx.n));
            if !d.mul(&d).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The shear direction is tangent to the wall: `⟨ď_ρ, d_ω⟩ = 0`.
pub fn shear_tangency_holds(cx: &IntegralAffineComplex, data: &MonodromyData) -> bool {
    for ((omega, rho), _) in data.kappas.iter() {
        let (dcheck, _) = &data.facets[rho];
        let base = cx.base_vertex(*rho);
        let vs = cx.cells[omega].vertices.clone();
        let sigma = cx.maximal_containing(*rho)[0];
        // transport d_ω into the chart at the facet base vertex
        let (vp, vm) = (vs[0].min(vs[1]), vs[0].max(vs[1]));
        let d1 = sub_vec(&cx.psi(base, sigma, vm), &cx.psi(base, sigma, vp));
        if !dot(dcheck, &d1).is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::{int, int_vec};

    #[test]
    fn torus_monodromy_trivial() {
        let cx = fixtures::torus_2d();
        let data = extract_monodromy(&cx, Exec::Sequential).unwrap();
        assert!(data.kappas.values().all(|k| k.is_zero()));
        for (_, (_, ms)) in &data.facets {
            assert!(ms.values().all(|m| m.iter().all(|x| x.is_zero())));
        }
        assert!(check_positive(&cx, Exec::Sequential).unwrap());
    }

    #[test]
    fn shear_fixture_kappa_one() {
        let cx = fixtures::shear_fixture(1);
        let rho = fixtures::shear_fixture_wall(&cx);
        let vs = cx.cells[&rho].vertices.clone();
        let (vp, vm) = (vs[0].min(vs[1]), vs[0].max(vs[1]));
        let t = loop_transport(&cx, rho, vp, vm).unwrap();
        assert_eq!(t.linear, IntMat::from_rows(vec![vec![1, 1], vec![0, 1]]));
        let (dcheck, m) = facet_monodromy(&cx, rho, vp, vm).unwrap();
        assert_eq!(dcheck, int_vec(&[0, 1]));
        assert_eq!(m, int_vec(&[1, 0]));
        let omega = rho; // n = 2: the edge is the wall
        assert_eq!(kappa(&cx, omega, rho).unwrap(), int(1));
        assert!(check_positive(&cx, Exec::Sequential).unwrap());
    }

    #[test]
    fn shear_fixture_negative_kappa() {
        let cx = fixtures::shear_fixture(-1);
        let rho = fixtures::shear_fixture_wall(&cx);
        assert_eq!(kappa(&cx, rho, rho).unwrap(), int(-1));
        assert!(!check_positive(&cx, Exec::Sequential).unwrap());
    }

    #[test]
    fn not_shear_detected() {
        let cx = fixtures::not_shear_fixture();
        let rho = fixtures::shear_fixture_wall(&cx);
        let vs = cx.cells[&rho].vertices.clone();
        let err = facet_monodromy(&cx, rho, vs[0], vs[1]);
        assert!(matches!(err, Err(Error::NotShear { .. })));
    }

    #[test]
    fn unipotency_and_tangency_on_fixtures() {
        for cx in [fixtures::torus_2d(), fixtures::shear_fixture(1), fixtures::shear_fixture(2)] {
            assert!(all_loops_two_step_unipotent(&cx).unwrap());
            let data = extract_monodromy(&cx, Exec::Sequential).unwrap();
            assert!(shear_tangency_holds(&cx, &data));
        }
    }
}
