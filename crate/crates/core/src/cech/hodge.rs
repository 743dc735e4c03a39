//! Hodge diamonds `h[q][p] = dim H^q(B, i_* ∧^p Λ̌ ⊗ ℚ)` and the
//! holonomy-duality checks.

use super::CechComplex;
use crate::complex::simplicity::{self, SimplicityCertificate};
use crate::complex::transport::SystemKind;
use crate::complex::IntegralAffineComplex;
use crate::error::Result;
use crate::exec::Exec;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeDiamond {
    pub n: usize,
    /// h[q][p]
    pub h: Vec<Vec<usize>>,
    pub warnings: Vec<String>,
}

impl HodgeDiamond {
    pub fn entry(&self, q: usize, p: usize) -> usize {
        self.h[q][p]
    }
}

/// The full diamond; simplicity is certified first and failures of the
/// standard-simplex hypothesis are downgraded to warnings, with the
/// numbers still reported as cohomology of `B` (the Čech model).
pub fn hodge_numbers(cx: &IntegralAffineComplex, exec: Exec) -> Result<HodgeDiamond> {
    let mut warnings = Vec::new();
    match simplicity::check_simple(cx, exec) {
        Ok(certs) => attach_warnings(&mut warnings, &certs),
        Err(e) => warnings.push(format!("simplicity certification failed: {e}")),
    }
    let h = hodge_matrix(cx, SystemKind::WedgeCheck, exec)?;
    Ok(HodgeDiamond { n: cx.n, h, warnings })
}

/// Matrix of cohomology dimensions for a system kind, rows q, cols p.
pub fn hodge_matrix(
    cx: &IntegralAffineComplex,
    kind: SystemKind,
    exec: Exec,
) -> Result<Vec<Vec<usize>>> {
    let n = cx.n;
    let per_r: Vec<Result<Vec<usize>>> = exec.map_indexed(n + 1, |r| {
        let c = CechComplex::build(cx, kind, r, Exec::Sequential)?;
        debug_assert!(c.d_squared_is_zero(), "d² = 0 fails for r = {r}");
        Ok(c.betti(Exec::Sequential))
    });
    let mut cols = Vec::new();
    for r in per_r {
        cols.push(r?);
    }
    let mut h = vec![vec![0usize; n + 1]; n + 1];
    for (p, col) in cols.iter().enumerate() {
        for q in 0..=n {
            h[q][p] = col.get(q).copied().unwrap_or(0);
        }
    }
    Ok(h)
}

fn attach_warnings(
    warnings: &mut Vec<String>,
    certs: &BTreeMap<usize, SimplicityCertificate>,
) {
    for cert in certs.values() {
        if let Some(reason) = &cert.failure {
            warnings.push(format!(
                "cell {} is not simple ({reason}); numbers are the Čech model of B",
                cert.tau
            ));
        } else if !cert.bigtheorem_ok {
            warnings.push(format!(
                "cell {}: the lifted Δ̌ hull is elementary but not standard",
                cert.tau
            ));
        }
    }
}

/// `h[0][n] = 1` and `dim H^q(∧^p Λ) = h[q][n−p]` — the holonomy-duality
/// statement checked on the bundled special-linear examples.
pub fn sl_duality_holds(cx: &IntegralAffineComplex, exec: Exec) -> Result<bool> {
    let check = hodge_matrix(cx, SystemKind::WedgeCheck, exec)?;
    let lambda = hodge_matrix(cx, SystemKind::WedgeLambda, exec)?;
    let n = cx.n;
    if check[0][n] != 1 {
        return Ok(false);
    }
    for p in 0..=n {
        for q in 0..=n {
            if lambda[q][p] != check[q][n - p] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn binom(n: usize, k: usize) -> usize {
        crate::lattice::wedge_dim(n, k)
    }

    #[test]
    fn torus_2d_diamond() {
        let cx = fixtures::torus_2d();
        let d = hodge_numbers(&cx, Exec::Sequential).unwrap();
        for p in 0..=2 {
            for q in 0..=2 {
                assert_eq!(d.entry(q, p), binom(2, p) * binom(2, q), "({q},{p})");
            }
        }
        assert!(d.warnings.is_empty());
        assert!(sl_duality_holds(&cx, Exec::Sequential).unwrap());
    }

    #[test]
    fn torus_3d_diamond() {
        let cx = fixtures::torus_3d();
        let d = hodge_numbers(&cx, Exec::Parallel).unwrap();
        for p in 0..=3 {
            for q in 0..=3 {
                assert_eq!(d.entry(q, p), binom(3, p) * binom(3, q), "({q},{p})");
            }
        }
        assert!(sl_duality_holds(&cx, Exec::Parallel).unwrap());
    }

    #[test]
    fn square_boundary_diamond() {
        let (cx, _) =
            crate::complex::reflexive::from_reflexive_polytope(&fixtures::reflexive_square(), false)
                .unwrap();
        let d = hodge_numbers(&cx, Exec::Sequential).unwrap();
        assert_eq!(d.h, vec![vec![1, 1], vec![1, 1]]);
    }
}
