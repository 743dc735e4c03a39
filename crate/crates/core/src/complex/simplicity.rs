//! Simplicity certificates: the partitions `Ω_i / R_i`, the monodromy
//! polytopes `Δ_i`, `Δ̌_i`, and the elementary / standard flags for each
//! interior cell.

use super::monodromy;
use super::IntegralAffineComplex;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{dot, Int};
use crate::polytope::{lifted_hull, LatticePolytope};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct SimplicityCertificate {
    pub tau: usize,
    /// parts: edges of τ in Ω_i, facets ⊇ τ in R_i
    pub omegas: Vec<Vec<usize>>,
    pub rs: Vec<Vec<usize>>,
    pub deltas: Vec<LatticePolytope>,
    pub delta_checks: Vec<LatticePolytope>,
    pub elementary_ok: bool,
    pub bigtheorem_ok: bool,
    /// reason simplicity fails; `None` means this cell is simple
    pub failure: Option<String>,
}

impl SimplicityCertificate {
    fn empty(tau: usize) -> Self {
        SimplicityCertificate {
            tau,
            omegas: Vec::new(),
            rs: Vec::new(),
            deltas: Vec::new(),
            delta_checks: Vec::new(),
            elementary_ok: true,
            bigtheorem_ok: true,
            failure: None,
        }
    }

    fn failed(tau: usize, reason: String) -> Self {
        SimplicityCertificate {
            tau,
            omegas: Vec::new(),
            rs: Vec::new(),
            deltas: Vec::new(),
            delta_checks: Vec::new(),
            elementary_ok: false,
            bigtheorem_ok: false,
            failure: Some(reason),
        }
    }
}

/// Certificates for all cells τ with 0 < dim τ < n. Failures are
/// recorded per cell; only structural errors (non-shear loops) abort.
pub fn check_simple(
    cx: &IntegralAffineComplex,
    exec: Exec,
) -> Result<BTreeMap<usize, SimplicityCertificate>> {
    let mut taus: Vec<usize> = cx
        .cells
        .values()
        .filter(|c| c.dim > 0 && c.dim < cx.n)
        .map(|c| c.id)
        .collect();
    taus.sort();
    let certs: Vec<Result<SimplicityCertificate>> =
        exec.map_slice(&taus, |&tau| certificate_for(cx, tau));
    let mut out = BTreeMap::new();
    for c in certs {
        let c = c?;
        out.insert(c.tau, c);
    }
    Ok(out)
}

fn certificate_for(cx: &IntegralAffineComplex, tau: usize) -> Result<SimplicityCertificate> {
    let edges: Vec<usize> = cx
        .subcells(tau)
        .iter()
        .copied()
        .filter(|e| cx.cells[e].dim == 1)
        .collect();
    let facets: Vec<usize> = cx
        .codim1_containing(tau)
        .into_iter()
        .filter(|r| cx.maximal_containing(*r).len() == 2)
        .collect();
    // κ matrix
    let mut kappas: BTreeMap<(usize, usize), Int> = BTreeMap::new();
    for &omega in &edges {
        for &rho in &facets {
            let k = monodromy::kappa(cx, omega, rho)?;
            if !k.is_zero() && !k.is_one() {
                return Ok(SimplicityCertificate::failed(
                    tau,
                    format!("kappa({omega},{rho}) = {k} is outside {{0,1}}"),
                ));
            }
            kappas.insert((omega, rho), k);
        }
    }
    // Δ̌(ω) polytopes: hulls of the n-covectors over maximal cells ⊇ τ
    let sigma0 = cx.designated_maximal(tau);
    let sigmas: Vec<usize> = cx.maximal_containing(tau);
    let mut delta_check_of: BTreeMap<usize, LatticePolytope> = BTreeMap::new();
    for &omega in &edges {
        let mut pts = Vec::new();
        for &s in &sigmas {
            let (_, nvec) = monodromy::edge_monodromy(cx, omega, sigma0, s)?;
            pts.push(nvec);
        }
        delta_check_of
            .insert(omega, LatticePolytope::from_points(pts).expect("hull of covectors"));
    }
    // group edges by (facet set, Δ̌ polytope)
    let mut groups: Vec<(BTreeSet<usize>, Vec<Int>, Vec<usize>)> = Vec::new();
    for &omega in &edges {
        let fs: BTreeSet<usize> = facets
            .iter()
            .copied()
            .filter(|&rho| kappas[&(omega, rho)].is_one())
            .collect();
        if fs.is_empty() {
            continue;
        }
        let key: Vec<Int> = polytope_key(&delta_check_of[&omega]);
        if let Some(g) = groups.iter_mut().find(|(s, k, _)| *s == fs && *k == key) {
            g.2.push(omega);
        } else {
            groups.push((fs, key, vec![omega]));
        }
    }
    // partition well-definedness: the κ=1 pairs must be exactly ⋃ Ω_i × R_i
    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (fs, _, oms) in &groups {
        for &omega in oms {
            for &rho in fs {
                covered.insert((omega, rho));
            }
        }
    }
    for (&(omega, rho), k) in &kappas {
        let c = covered.contains(&(omega, rho));
        if k.is_one() != c {
            return Ok(SimplicityCertificate::failed(
                tau,
                format!("ill-defined partition at pair ({omega},{rho})"),
            ));
        }
    }
    // facet sets of distinct groups must be disjoint
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            if groups[i].0.intersection(&groups[j].0).next().is_some() {
                return Ok(SimplicityCertificate::failed(
                    tau,
                    "ill-defined partition: facet classes overlap".into(),
                ));
            }
        }
    }
    if groups.is_empty() {
        return Ok(SimplicityCertificate::empty(tau));
    }
    // monodromy polytopes
    let base = cx.base_vertex(tau);
    let tau_vertices = cx.cells[&tau].vertices.clone();
    let mut deltas = Vec::new();
    let mut delta_checks = Vec::new();
    let mut omegas_out = Vec::new();
    let mut rs_out = Vec::new();
    for (fs, _, oms) in &groups {
        // Δ_i from any representative facet; verify independence of choice
        let mut delta_i: Option<LatticePolytope> = None;
        for &rho in fs {
            let mut pts = Vec::new();
            for &v2 in &tau_vertices {
                if v2 == base {
                    pts.push(vec![Int::zero(); cx.n]);
                    continue;
                }
                let (_, m) = monodromy::facet_monodromy(cx, rho, base, v2)?;
                pts.push(m);
            }
            let p = LatticePolytope::from_points(pts).expect("hull of shear vectors");
            match &delta_i {
                None => delta_i = Some(p),
                Some(q) => {
                    if polytope_key(q) != polytope_key(&p) {
                        return Ok(SimplicityCertificate::failed(
                            tau,
                            format!("Δ polytope depends on the facet choice in R ({rho})"),
                        ));
                    }
                }
            }
        }
        let delta_i = delta_i.expect("nonempty facet class");
        // Δ̌_i from any representative edge (classes share it by construction)
        let dcheck_i = delta_check_of[&oms[0]].clone();
        // Δ_i tangent to τ, Δ̌_i in the annihilator of the tangent space
        let sigma = sigma0;
        let tau_dirs: Vec<Vec<Int>> = tau_vertices
            .iter()
            .filter(|&&x| x != base)
            .map(|&x| cx.psi(base, sigma, x))
            .collect();
        for v in &delta_i.vertices {
            if !in_span_of(&tau_dirs, v, cx.n) {
                return Ok(SimplicityCertificate::failed(
                    tau,
                    "Δ polytope leaves the tangent space of τ".into(),
                ));
            }
        }
        for c in &dcheck_i.vertices {
            if tau_dirs.iter().any(|d| !dot(c, d).is_zero()) {
                return Ok(SimplicityCertificate::failed(
                    tau,
                    "Δ̌ polytope leaves the annihilator of τ".into(),
                ));
            }
        }
        deltas.push(delta_i);
        delta_checks.push(dcheck_i);
        omegas_out.push(oms.clone());
        rs_out.push(fs.iter().copied().collect());
    }
    // lifted hulls
    let refs: Vec<&LatticePolytope> = deltas.iter().collect();
    let hull = lifted_hull(&refs, cx.n)?;
    let refs_c: Vec<&LatticePolytope> = delta_checks.iter().collect();
    let hull_c = lifted_hull(&refs_c, cx.n)?;
    let elementary_ok = hull.is_elementary_simplex()? && hull_c.is_elementary_simplex()?;
    let bigtheorem_ok = hull_c.is_standard_simplex()?;
    let failure = if elementary_ok {
        None
    } else {
        Some("lifted monodromy hull is not an elementary simplex".into())
    };
    Ok(SimplicityCertificate {
        tau,
        omegas: omegas_out,
        rs: rs_out,
        deltas,
        delta_checks,
        elementary_ok,
        bigtheorem_ok,
        failure,
    })
}

fn polytope_key(p: &LatticePolytope) -> Vec<Int> {
    let mut flat = Vec::new();
    for v in &p.vertices {
        flat.extend(v.iter().cloned());
    }
    flat
}

fn in_span_of(dirs: &[Vec<Int>], v: &[Int], n: usize) -> bool {
    use crate::lattice::{rank_q, IntMat};
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    let m = IntMat::from_fn(n, dirs.len(), |i, j| dirs[j][i].clone());
    let mv = IntMat::from_fn(n, dirs.len() + 1, |i, j| {
        if j < dirs.len() {
            dirs[j][i].clone()
        } else {
            v[i].clone()
        }
    });
    rank_q(&m.to_rat()) == rank_q(&mv.to_rat())
}

/// True when every interior cell is simple.
pub fn all_simple(certs: &BTreeMap<usize, SimplicityCertificate>) -> bool {
    certs.values().all(|c| c.failure.is_none())
}

/// True when every certificate satisfies the standard-simplex hypothesis.
pub fn all_bigtheorem_ok(certs: &BTreeMap<usize, SimplicityCertificate>) -> bool {
    certs.values().all(|c| c.bigtheorem_ok)
}

/// Convenience gate matching the spec's `check_simple` precondition.
pub fn require_positive(cx: &IntegralAffineComplex, exec: Exec) -> Result<()> {
    if !monodromy::check_positive(cx, exec)? {
        return Err(Error::SimplicityFailure {
            tau: 0,
            reason: "complex is not positive".into(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn torus_trivially_simple() {
        let cx = fixtures::torus_2d();
        let certs = check_simple(&cx, Exec::Sequential).unwrap();
        assert!(all_simple(&certs));
        assert!(all_bigtheorem_ok(&certs));
        for c in certs.values() {
            assert!(c.omegas.is_empty());
            assert!(c.elementary_ok);
        }
    }

    #[test]
    fn shear_fixture_edge_is_simple() {
        let cx = fixtures::shear_fixture(1);
        let certs = check_simple(&cx, Exec::Sequential).unwrap();
        let wall = fixtures::shear_fixture_wall(&cx);
        let cert = &certs[&wall];
        assert!(cert.failure.is_none(), "{:?}", cert.failure);
        assert_eq!(cert.omegas.len(), 1);
        assert!(cert.elementary_ok);
    }

    #[test]
    fn kappa_two_breaks_simplicity() {
        let cx = fixtures::shear_fixture(2);
        let certs = check_simple(&cx, Exec::Sequential).unwrap();
        let wall = fixtures::shear_fixture_wall(&cx);
        assert!(certs[&wall].failure.is_some());
    }
}
