//! Cup products with degree-one classes in `i_*Λ`, the Gauss–Manin
//! residue `N = c_B ∪ ·`, the moduli connection matrices and flat
//! log-series sections, and the long-exact-sequence bookkeeping for the
//! `Aff` extension.

use super::sparse::{dense_to_sparse, ColumnReducer};
use super::{CechComplex, Flag};
use crate::complex::radiance;
use crate::complex::transport::{rep_of_transport, SystemKind};
use crate::complex::IntegralAffineComplex;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{rat_int, Rat, RatMat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Sign convention for the residue operator; fixed so that the torus
/// gives `N` equal to plus the contraction pairing (the minus sign that
/// the paper's cocycle carries is absorbed here).
pub const RESIDUE_SIGN: i64 = 1;

/// A basis of `H^p` with reusable quotient coordinates.
pub struct CohomologyBasis {
    pub degree: usize,
    pub reps: Vec<Vec<Rat>>,
    reducer: ColumnReducer,
}

impl CohomologyBasis {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Class coordinates of a cocycle; `None` if its class escapes the
    /// basis (never happens for honest cocycles).
    pub fn class_coords(&self, w: &[Rat]) -> Option<Vec<Rat>> {
        let sol = self.reducer.solve(&dense_to_sparse(w))?;
        let mut out = vec![Rat::zero(); self.reps.len()];
        for (i, v) in sol {
            out[i as usize] = v;
        }
        Some(out)
    }
}

/// Kernel/image quotient basis at one degree of a complex.
pub fn cohomology_basis(c: &CechComplex, p: usize) -> CohomologyBasis {
    let dim = c.dims[p];
    // kernel of d_p via tracked column reduction
    let kernel: Vec<Vec<(u32, Rat)>> = if p < c.differentials.len() {
        let d = &c.differentials[p];
        let mut red = ColumnReducer::new(d.rows);
        let mut out = Vec::new();
        for j in 0..d.cols {
            if !red.push(d.col(j), true) {
                if let Some(t) = red.take_last_kernel() {
                    out.push(t);
                }
            }
        }
        out
    } else {
        (0..dim).map(|j| vec![(j as u32, Rat::one())]).collect()
    };
    // quotient by the image of d_{p-1}
    let mut red = ColumnReducer::new(dim);
    if p > 0 {
        let d = &c.differentials[p - 1];
        for j in 0..d.cols {
            red.push(d.col(j), false);
        }
    }
    let mut reps = Vec::new();
    for k in kernel {
        if red.contains(&k) {
            continue;
        }
        let grew = red.push(k.clone(), true);
        debug_assert!(grew);
        reps.push(super::sparse::sparse_to_dense(&k, dim));
    }
    CohomologyBasis { degree: p, reps, reducer: red }
}

/// A one-cochain valued in `i_*Λ`: a fiber vector per strict flag pair,
/// at the base vertex of the smaller cell.
pub type OneCochainLambda = BTreeMap<(usize, usize), Vec<Rat>>;

pub fn radiance_as_cochain(cx: &IntegralAffineComplex) -> Result<OneCochainLambda> {
    let c = radiance::radiance_cocycle(cx)?;
    Ok(c
        .into_iter()
        .map(|(k, v)| (k, v.iter().map(rat_int).collect()))
        .collect())
}

/// `(η ∪ α)_{σ₀…σ_{q+1}} = ι(η_{σ₀σ₁}) · transport(α_{σ₁…σ_{q+1}})`,
/// from `C^q(∧^p Λ̌)` to `C^{q+1}(∧^{p-1} Λ̌)`.
pub fn cup_contract(
    cx: &IntegralAffineComplex,
    src: &CechComplex,
    tgt: &CechComplex,
    q: usize,
    eta: &OneCochainLambda,
    alpha: &[Rat],
) -> Result<Vec<Rat>> {
    assert_eq!(src.kind, SystemKind::WedgeCheck);
    assert_eq!(tgt.kind, SystemKind::WedgeCheck);
    if src.r == 0 {
        return Err(Error::DegreeOutOfRange { r: 0, n: cx.n });
    }
    assert_eq!(tgt.r + 1, src.r);
    assert_eq!(alpha.len(), src.dims[q]);
    let src_index: BTreeMap<&[usize], usize> =
        src.flags[q].iter().enumerate().map(|(i, f)| (f.0.as_slice(), i)).collect();
    let mut out = vec![Rat::zero(); tgt.dims[q + 1]];
    for (ti, target) in tgt.flags[q + 1].iter().enumerate() {
        let (off, width) = tgt.offsets[q + 1][ti];
        if width == 0 {
            continue;
        }
        let back: Vec<usize> = target.0[1..].to_vec();
        let Some(&si) = src_index.get(back.as_slice()) else { continue };
        let (s_off, s_width) = src.offsets[q][si];
        if s_width == 0 {
            continue;
        }
        let coeffs = &alpha[s_off..s_off + s_width];
        if coeffs.iter().all(|x| x.is_zero()) {
            continue;
        }
        let a_fiber = src.to_fiber(q, si, coeffs);
        // transport from base(σ₁) to base(σ₀) through the designated cell
        let v1 = cx.base_vertex(target.0[1]);
        let v0 = cx.base_vertex(target.0[0]);
        let top = *target.0.last().unwrap();
        let sigma = cx.designated_maximal(top);
        let g = cx.transport(v1, v0, sigma);
        let rep = rep_of_transport(SystemKind::WedgeCheck, src.r, &g).to_rat();
        let moved = rep.mul_vec(&a_fiber);
        // contract with η on the front edge
        let Some(e) = eta.get(&(target.0[0], target.0[1])) else { continue };
        let contracted = contract_rat(e, &moved, cx.n, src.r);
        let coords = tgt.from_fiber(q + 1, ti, &contracted).ok_or_else(|| {
            Error::TransportAmbiguity(format!(
                "cup image leaves the invariant subspace at {:?}",
                target.0
            ))
        })?;
        for (k, v) in coords.iter().enumerate().take(width) {
            out[off + k] = v.clone();
        }
    }
    Ok(out)
}

/// Rational interior product `ι(m): ∧^r → ∧^{r-1}` on wedge coordinates.
fn contract_rat(m: &[Rat], w: &[Rat], n: usize, r: usize) -> Vec<Rat> {
    let src = crate::lattice::wedge_basis(n, r);
    let dst = crate::lattice::wedge_basis(n, r - 1);
    let mut out = vec![Rat::zero(); dst.len()];
    for j in 0..src.len() {
        if w[j].is_zero() {
            continue;
        }
        let tup = src.tuple(j);
        for (k, &jk) in tup.iter().enumerate() {
            if m[jk].is_zero() {
                continue;
            }
            let rest: Vec<usize> = tup.iter().copied().filter(|&x| x != jk).collect();
            let i = dst.index_of(&rest).expect("subtuple");
            let term = &m[jk] * &w[j];
            if k % 2 == 0 {
                out[i] = &out[i] + &term;
            } else {
                out[i] = &out[i] - &term;
            }
        }
    }
    out
}

/// All the Čech data the residue and moduli computations reuse.
pub struct HodgeData {
    pub complexes: Vec<CechComplex>,
    /// bases[p][q] = basis of H^q(∧^p Λ̌)
    pub bases: Vec<Vec<CohomologyBasis>>,
}

pub fn hodge_data(cx: &IntegralAffineComplex, exec: Exec) -> Result<HodgeData> {
    let n = cx.n;
    let complexes: Vec<Result<CechComplex>> = exec.map_indexed(n + 1, |r| {
        CechComplex::build(cx, SystemKind::WedgeCheck, r, Exec::Sequential)
    });
    let mut cs = Vec::new();
    for c in complexes {
        cs.push(c?);
    }
    let mut bases = Vec::new();
    for c in &cs {
        let degs = c.dims.len();
        let per: Vec<CohomologyBasis> =
            exec.map_indexed(degs, |q| cohomology_basis(c, q));
        bases.push(per);
    }
    Ok(HodgeData { complexes: cs, bases })
}

/// Total-space residue: blocks `H^q(∧^p) → H^{q+1}(∧^{p-1})` of
/// `α ↦ RESIDUE_SIGN · (c_B ∪ α)`.
pub struct ResidueOperator {
    /// (p, q) -> dimension and offset in the total grading
    pub layout: BTreeMap<(usize, usize), (usize, usize)>,
    pub total_dim: usize,
    pub matrix: RatMat,
    pub nilpotency_index: usize,
}

pub fn residue_operator(cx: &IntegralAffineComplex, exec: Exec) -> Result<ResidueOperator> {
    let data = hodge_data(cx, exec)?;
    residue_from_data(cx, &data)
}

pub fn residue_from_data(
    cx: &IntegralAffineComplex,
    data: &HodgeData,
) -> Result<ResidueOperator> {
    let n = cx.n;
    let eta = radiance_as_cochain(cx)?;
    let mut layout = BTreeMap::new();
    let mut total = 0usize;
    for p in 0..=n {
        for q in 0..=n {
            let d = data
                .bases
                .get(p)
                .and_then(|b| b.get(q))
                .map(|b| b.dim())
                .unwrap_or(0);
            layout.insert((p, q), (total, d));
            total += d;
        }
    }
    let sign = rat_int(&crate::lattice::int(RESIDUE_SIGN));
    let mut m = RatMat::zero(total, total);
    for p in 1..=n {
        for q in 0..n {
            let (src_off, src_dim) = layout[&(p, q)];
            let (tgt_off, tgt_dim) = layout[&(p - 1, q + 1)];
            if src_dim == 0 || tgt_dim == 0 {
                continue;
            }
            let src_c = &data.complexes[p];
            let tgt_c = &data.complexes[p - 1];
            for (k, rep) in data.bases[p][q].reps.iter().enumerate() {
                let cup = cup_contract(cx, src_c, tgt_c, q, &eta, rep)?;
                assert_cocycle(tgt_c, q + 1, &cup)?;
                let coords = data.bases[p - 1][q + 1].class_coords(&cup).ok_or_else(|| {
                    Error::Invalid("cup image is not recognized in cohomology".into())
                })?;
                for (i, v) in coords.iter().enumerate() {
                    if !v.is_zero() {
                        m[(tgt_off + i, src_off + k)] = &sign * v;
                    }
                }
            }
        }
    }
    let nilpotency_index = nilpotency(&m);
    Ok(ResidueOperator { layout, total_dim: total, matrix: m, nilpotency_index })
}

fn assert_cocycle(c: &CechComplex, q: usize, w: &[Rat]) -> Result<()> {
    if q < c.differentials.len() {
        let img = c.differentials[q].mul_dense(w);
        if img.iter().any(|x| !x.is_zero()) {
            return Err(Error::Invalid("cup output is not closed".into()));
        }
    }
    Ok(())
}

fn nilpotency(m: &RatMat) -> usize {
    let n = m.rows;
    if n == 0 {
        return 0;
    }
    let mut pow = RatMat::identity(n);
    for k in 0..=n + 1 {
        if pow.is_zero() {
            return k;
        }
        pow = m.mul(&pow);
    }
    n + 2
}

/// Connection matrices `ι(η_i) ∪ ·` for a cohomology basis {η_i} of
/// `H^1(B, i_*Λ)`, acting on the total Hodge grading.
pub struct ModuliConnection {
    pub basis_dim: usize,
    pub matrices: Vec<RatMat>,
    pub layout: BTreeMap<(usize, usize), (usize, usize)>,
    pub total_dim: usize,
}

pub fn moduli_connection(cx: &IntegralAffineComplex, exec: Exec) -> Result<ModuliConnection> {
    let data = hodge_data(cx, exec)?;
    moduli_connection_from_data(cx, &data, exec)
}

pub fn moduli_connection_from_data(
    cx: &IntegralAffineComplex,
    data: &HodgeData,
    exec: Exec,
) -> Result<ModuliConnection> {
    let n = cx.n;
    // basis of H^1(i_*Λ)
    let lam = CechComplex::build(cx, SystemKind::WedgeLambda, 1, exec)?;
    let h1 = cohomology_basis(&lam, 1);
    let mut etas: Vec<OneCochainLambda> = Vec::new();
    for rep in &h1.reps {
        let mut map = OneCochainLambda::new();
        for (fi, f) in lam.flags[1].iter().enumerate() {
            let (off, width) = lam.offsets[1][fi];
            if width == 0 {
                continue;
            }
            let fiber = lam.to_fiber(1, fi, &rep[off..off + width]);
            map.insert((f.0[0], f.0[1]), fiber);
        }
        etas.push(map);
    }
    let mut layout = BTreeMap::new();
    let mut total = 0usize;
    for p in 0..=n {
        for q in 0..=n {
            let d = data.bases[p][q].dim();
            layout.insert((p, q), (total, d));
            total += d;
        }
    }
    let mut matrices = Vec::new();
    for eta in &etas {
        let mut m = RatMat::zero(total, total);
        for p in 1..=n {
            for q in 0..n {
                let (src_off, src_dim) = layout[&(p, q)];
                let (tgt_off, tgt_dim) = layout[&(p - 1, q + 1)];
                if src_dim == 0 || tgt_dim == 0 {
                    continue;
                }
                for (k, rep) in data.bases[p][q].reps.iter().enumerate() {
                    let cup =
                        cup_contract(cx, &data.complexes[p], &data.complexes[p - 1], q, eta, rep)?;
                    assert_cocycle(&data.complexes[p - 1], q + 1, &cup)?;
                    let coords = data.bases[p - 1][q + 1]
                        .class_coords(&cup)
                        .ok_or_else(|| Error::Invalid("moduli cup not recognized".into()))?;
                    for (i, v) in coords.iter().enumerate() {
                        if !v.is_zero() {
                            m[(tgt_off + i, src_off + k)] = v.clone();
                        }
                    }
                }
            }
        }
        matrices.push(m);
    }
    Ok(ModuliConnection { basis_dim: h1.dim(), matrices, layout, total_dim: total })
}

/// One term of the flat log-series: multi-index, target bigrade, class
/// coordinates, and the `1/k!` factor.
#[derive(Clone, Debug)]
pub struct FlatTerm {
    pub indices: Vec<usize>,
    pub bigrade: (usize, usize),
    pub coords: Vec<Rat>,
    pub factor: Rat,
}

/// The finite log-series whose total is flat for the moduli connection:
/// `α + Σ ι(η*_{i₁})…ι(η*_{i_k}) α · log q_{i₁}…log q_{i_k} / k!`.
pub fn flat_section(
    conn: &ModuliConnection,
    start: (usize, usize),
    class: &[Rat],
) -> Vec<FlatTerm> {
    let (p0, q0) = start;
    let mut out = Vec::new();
    let mut frontier: Vec<(Vec<usize>, Vec<Rat>)> = vec![(Vec::new(), {
        let (off, dim) = conn.layout[&start];
        let mut full = vec![Rat::zero(); conn.total_dim];
        for k in 0..dim {
            full[off + k] = class[k].clone();
        }
        full
    })];
    let mut factorial = Rat::one();
    let mut depth = 0usize;
    while !frontier.is_empty() {
        if depth > 0 {
            factorial = &factorial * &rat_int(&crate::lattice::int(depth as i64));
        }
        let p = p0.checked_sub(depth);
        let q = q0 + depth;
        if let Some(p) = p {
            let (off, dim) = *conn.layout.get(&(p, q)).unwrap_or(&(0, 0));
            for (idx, vec_full) in &frontier {
                let coords: Vec<Rat> = (0..dim).map(|k| vec_full[off + k].clone()).collect();
                if coords.iter().any(|x| !x.is_zero()) {
                    out.push(FlatTerm {
                        indices: idx.clone(),
                        bigrade: (p, q),
                        coords,
                        factor: Rat::one() / factorial.clone(),
                    });
                }
            }
        }
        // extend multi-indices by one more contraction
        let mut next = Vec::new();
        if p0 >= depth + 1 {
            for (idx, vec_full) in &frontier {
                for (i, m) in conn.matrices.iter().enumerate() {
                    let img = m.mul_vec(vec_full);
                    if img.iter().any(|x| !x.is_zero()) {
                        let mut idx2 = idx.clone();
                        idx2.push(i);
                        next.push((idx2, img));
                    }
                }
            }
        }
        frontier = next;
        depth += 1;
        if depth > p0 + 1 {
            break;
        }
    }
    out
}

/// Rank-exactness report of `0 → ℤ⊗∧^{r-1}Λ̌ → ∧^r Aff → ∧^r Λ̌ → 0`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LesReport {
    pub r: usize,
    pub exact: bool,
    pub detail: Vec<String>,
}

pub fn aff_les_check(cx: &IntegralAffineComplex, r: usize, exec: Exec) -> Result<LesReport> {
    let n = cx.n;
    let aff = CechComplex::build(cx, SystemKind::WedgeAff, r, exec)?;
    let top = CechComplex::build(cx, SystemKind::WedgeCheck, r, exec)?;
    let bot = CechComplex::build(cx, SystemKind::WedgeCheck, r.saturating_sub(1), exec)?;
    if r == 0 {
        return Ok(LesReport { r, exact: true, detail: vec!["r = 0 is the constant case".into()] });
    }
    let eta = radiance_as_cochain(cx)?;
    // cohomology bases for every degree
    let deg = n + 2;
    let mut b_aff = Vec::new();
    let mut b_top = Vec::new();
    let mut b_bot = Vec::new();
    for q in 0..deg {
        b_aff.push(if q < aff.dims.len() { Some(cohomology_basis(&aff, q)) } else { None });
        b_top.push(if q < top.dims.len() { Some(cohomology_basis(&top, q)) } else { None });
        b_bot.push(if q < bot.dims.len() { Some(cohomology_basis(&bot, q)) } else { None });
    }
    // induced maps per degree
    let wedge_top_dim = crate::lattice::wedge_dim(n, r);
    let incl = |q: usize| -> Result<RatMat> {
        // fiber map: w ↦ (0, w)
        induced_map(&bot, &aff, q, |flag_dims, w| {
            let _ = flag_dims;
            let mut out = vec![Rat::zero(); wedge_top_dim + w.len()];
            for (i, x) in w.iter().enumerate() {
                out[wedge_top_dim + i] = x.clone();
            }
            out
        }, &b_bot, &b_aff)
    };
    let proj = |q: usize| -> Result<RatMat> {
        induced_map(&aff, &top, q, |_, w| w[0..wedge_top_dim].to_vec(), &b_aff, &b_top)
    };
    let mut detail = Vec::new();
    let mut exact = true;
    for q in 0..deg - 1 {
        let (Some(ba), Some(bt), Some(bb)) = (&b_aff[q], &b_top[q], &b_bot[q]) else { continue };
        let _ = (ba, bt, bb);
        // connecting map δ = c_B ∪ · : H^q(top) → H^{q+1}(bot)
        let bt_next = b_bot[q + 1].as_ref();
        let delta = {
            let rows = bt_next.map(|b| b.dim()).unwrap_or(0);
            let cols = b_top[q].as_ref().map(|b| b.dim()).unwrap_or(0);
            let mut m = RatMat::zero(rows, cols);
            if rows > 0 && cols > 0 {
                for (k, rep) in b_top[q].as_ref().unwrap().reps.iter().enumerate() {
                    let cup = cup_contract(cx, &top, &bot, q, &eta, rep)?;
                    let coords = bt_next.unwrap().class_coords(&cup).ok_or_else(|| {
                        Error::Invalid("connecting map image not recognized".into())
                    })?;
                    for (i, v) in coords.iter().enumerate() {
                        m[(i, k)] = v.clone();
                    }
                }
            }
            m
        };
        let i_q = incl(q)?;
        let p_q = proj(q)?;
        let i_next = incl(q + 1)?;
        // exactness at H^q(aff): im(incl) = ker(proj)
        let ra = crate::lattice::rank_q(&i_q);
        let rb = crate::lattice::rank_q(&p_q);
        let da = b_aff[q].as_ref().map(|b| b.dim()).unwrap_or(0);
        if !p_q.mul(&i_q).is_zero() || ra + rb != da {
            exact = false;
            detail.push(format!("not exact at H^{q}(Aff^{r})"));
        }
        // exactness at H^q(top): im(proj) = ker(delta)
        let rd = crate::lattice::rank_q(&delta);
        let dt = b_top[q].as_ref().map(|b| b.dim()).unwrap_or(0);
        if !delta.mul(&p_q).is_zero() || rb + rd != dt {
            exact = false;
            detail.push(format!("not exact at H^{q}(Λ̌^{r})"));
        }
        // exactness at H^{q+1}(bot): im(delta) = ker(incl_{q+1})
        let ri = crate::lattice::rank_q(&i_next);
        let db = b_bot[q + 1].as_ref().map(|b| b.dim()).unwrap_or(0);
        if !i_next.mul(&delta).is_zero() || rd + ri != db {
            exact = false;
            detail.push(format!("not exact at H^{}(Λ̌^{})", q + 1, r - 1));
        }
        detail.push(format!(
            "q={q}: dims (aff,top,bot⁺) = ({da},{dt},{db}), ranks (ι,π,δ,ι⁺) = ({ra},{rb},{rd},{ri})"
        ));
    }
    Ok(LesReport { r, exact, detail })
}

/// Matrix on cohomology induced by a fiberwise cochain map.
fn induced_map(
    src: &CechComplex,
    tgt: &CechComplex,
    q: usize,
    fiber_map: impl Fn(&Flag, &[Rat]) -> Vec<Rat>,
    b_src: &[Option<CohomologyBasis>],
    b_tgt: &[Option<CohomologyBasis>],
) -> Result<RatMat> {
    let (Some(bs), Some(bt)) = (&b_src[q], &b_tgt[q]) else {
        return Ok(RatMat::zero(0, 0));
    };
    let mut m = RatMat::zero(bt.dim(), bs.dim());
    for (k, rep) in bs.reps.iter().enumerate() {
        let mut out = vec![Rat::zero(); tgt.dims[q]];
        for (fi, f) in src.flags[q].iter().enumerate() {
            let (off, width) = src.offsets[q][fi];
            if width == 0 {
                continue;
            }
            let fiber = src.to_fiber(q, fi, &rep[off..off + width]);
            let mapped = fiber_map(f, &fiber);
            let coords = tgt.from_fiber(q, fi, &mapped).ok_or_else(|| {
                Error::Invalid("induced map leaves the invariant subspace".into())
            })?;
            let (t_off, t_width) = tgt.offsets[q][fi];
            for (i, v) in coords.iter().enumerate().take(t_width) {
                out[t_off + i] = v.clone();
            }
        }
        let coords = bt
            .class_coords(&out)
            .ok_or_else(|| Error::Invalid("induced image not recognized".into()))?;
        for (i, v) in coords.iter().enumerate() {
            m[(i, k)] = v.clone();
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn torus_radiance_cup_is_iso() {
        // c_B ∪ : H^0(∧¹Λ̌) → H^1(ℚ) is an isomorphism of 2-dim spaces
        let cx = fixtures::torus_2d();
        let data = hodge_data(&cx, Exec::Sequential).unwrap();
        let eta = radiance_as_cochain(&cx).unwrap();
        assert_eq!(data.bases[1][0].dim(), 2);
        assert_eq!(data.bases[0][1].dim(), 2);
        let mut m = RatMat::zero(2, 2);
        for (k, rep) in data.bases[1][0].reps.iter().enumerate() {
            let cup =
                cup_contract(&cx, &data.complexes[1], &data.complexes[0], 0, &eta, rep).unwrap();
            let coords = data.bases[0][1].class_coords(&cup).unwrap();
            for (i, v) in coords.iter().enumerate() {
                m[(i, k)] = v.clone();
            }
        }
        assert_eq!(crate::lattice::rank_q(&m), 2);
    }

    #[test]
    fn torus_residue_maximal() {
        let cx = fixtures::torus_2d();
        let res = residue_operator(&cx, Exec::Sequential).unwrap();
        // N^{n+1} = 0 always; N^n ≠ 0 on the torus
        assert_eq!(res.nilpotency_index, 3);
        // bigrading shift: anything outside (p-1, q+1) blocks vanishes
        for ((p, q), (off, dim)) in &res.layout {
            for k in 0..*dim {
                for ((p2, q2), (off2, dim2)) in &res.layout {
                    if *dim2 == 0 {
                        continue;
                    }
                    let block_nonzero = (0..*dim2)
                        .any(|i| !res.matrix[(off2 + i, off + k)].is_zero());
                    if block_nonzero {
                        assert_eq!((*p2 + 1, *q2), (*p, *q + 1), "block shift");
                    }
                }
            }
        }
    }

    #[test]
    fn torus_zero_eta_gives_zero() {
        let cx = fixtures::torus_2d();
        let data = hodge_data(&cx, Exec::Sequential).unwrap();
        let eta = OneCochainLambda::new();
        let rep = &data.bases[1][0].reps[0];
        let cup =
            cup_contract(&cx, &data.complexes[1], &data.complexes[0], 0, &eta, rep).unwrap();
        assert!(cup.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn torus_les_exact() {
        let cx = fixtures::torus_2d();
        for r in 0..=2 {
            let rep = aff_les_check(&cx, r, Exec::Sequential).unwrap();
            assert!(rep.exact, "r = {r}: {:?}", rep.detail);
        }
    }

    #[test]
    fn torus_flat_section_terminates() {
        let cx = fixtures::torus_2d();
        let data = hodge_data(&cx, Exec::Sequential).unwrap();
        let conn = moduli_connection_from_data(&cx, &data, Exec::Sequential).unwrap();
        assert_eq!(conn.basis_dim, 4);
        // α the generator of H^0(∧²Λ̌): series terminates at k = 2 with a
        // top coefficient in H^2(∧⁰)
        let alpha = vec![Rat::one()];
        let terms = flat_section(&conn, (2, 0), &alpha);
        let max_k = terms.iter().map(|t| t.indices.len()).max().unwrap();
        assert_eq!(max_k, 2);
        assert!(terms
            .iter()
            .any(|t| t.indices.len() == 2 && t.bigrade == (0, 2)));
        // factor 1/2! on depth-2 terms
        for t in &terms {
            if t.indices.len() == 2 {
                assert_eq!(t.factor, Rat::new(1.into(), 2.into()));
            }
        }
        // zero class gives the empty series
        let z = flat_section(&conn, (2, 0), &[Rat::zero()]);
        assert!(z.is_empty());
        // a class in H^q(∧⁰) admits no contractions
        let h02 = data.bases[0][2].dim();
        assert_eq!(h02, 1);
        let terms = flat_section(&conn, (0, 2), &[Rat::one()]);
        assert_eq!(terms.len(), 1);
        assert!(terms[0].indices.is_empty());
    }
}
