//! Affine chart-to-chart transports and their induced actions on the
//! local systems `∧^r Λ`, `∧^r Λ̌` and `∧^r Aff(B,ℤ)`.

use crate::lattice::{
    contraction_matrix, induced_wedge_map, wedge_dim, Int, IntMat,
};

/// An integral affine map `x ↦ L x + t` between two chart spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartTransport {
    pub linear: IntMat,
    pub translation: Vec<Int>,
}

impl ChartTransport {
    pub fn identity(n: usize) -> Self {
        ChartTransport { linear: IntMat::identity(n), translation: vec![Int::from(0); n] }
    }

    pub fn dim(&self) -> usize {
        self.linear.rows
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &ChartTransport) -> ChartTransport {
        ChartTransport {
            linear: self.linear.mul(&other.linear),
            translation: crate::lattice::add_vec(
                &self.linear.mul_vec(&other.translation),
                &self.translation,
            ),
        }
    }

    pub fn inverse(&self) -> ChartTransport {
        let li = self.linear.inv_unimodular();
        let t = li.mul_vec(&self.translation);
        ChartTransport { linear: li, translation: t.iter().map(|x| -x.clone()).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.translation.iter().all(|x| x == &Int::from(0))
    }

    /// Contragredient matrix pushing covectors along this transport.
    pub fn covector_push(&self) -> IntMat {
        self.linear.inv_unimodular().transpose()
    }
}

/// The coefficient systems computed by the flag-Čech machinery.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SystemKind {
    /// `∧^r Λ̌` — integral cotangent wedges
    WedgeCheck,
    /// `∧^r Λ` — integral tangent wedges
    WedgeLambda,
    /// `∧^r Aff(B,ℤ)` — wedges of integral affine functions
    WedgeAff,
}

pub fn fiber_rank(kind: SystemKind, n: usize, r: usize) -> usize {
    match kind {
        SystemKind::WedgeCheck | SystemKind::WedgeLambda => wedge_dim(n, r),
        SystemKind::WedgeAff => {
            wedge_dim(n, r) + if r >= 1 { wedge_dim(n, r - 1) } else { 0 }
        }
    }
}

/// Matrix of the push-forward of section values along `g`.
///
/// Vectors push by `∧^r L`; covectors by `∧^r L^{-T}`. An affine
/// function with value pair `(c, n)` (constant, linear part) pushes to
/// `(c − ⟨n', t⟩, n')` with `n' = L^{-T} n`, which on wedge powers is
/// block triangular over `∧^r Λ̌ ⊕ 1∧∧^{r-1} Λ̌`:
/// `(α₁, α₂) ↦ (W_r α₁, −ι(t) W_r α₁ + W_{r-1} α₂)`.
pub fn rep_of_transport(kind: SystemKind, r: usize, g: &ChartTransport) -> IntMat {
    let n = g.dim();
    match kind {
        SystemKind::WedgeLambda => induced_wedge_map(&g.linear, r),
        SystemKind::WedgeCheck => induced_wedge_map(&g.covector_push(), r),
        SystemKind::WedgeAff => {
            let lct = g.covector_push();
            let wr = induced_wedge_map(&lct, r);
            if r == 0 {
                return wr;
            }
            let wr1 = induced_wedge_map(&lct, r - 1);
            let iota = contraction_matrix(&g.translation, n, r)
                .expect("contraction in range");
            let corr = iota.mul(&wr).neg();
            let top = IntMat::hstack(&[&wr, &IntMat::zero(wr.rows, wr1.cols)]);
            let bot = IntMat::hstack(&[&corr, &wr1]);
            IntMat::vstack(&[&top, &bot])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{dot, int_vec};

    fn shear() -> ChartTransport {
        ChartTransport {
            linear: IntMat::from_rows(vec![vec![1, 1], vec![0, 1]]),
            translation: int_vec(&[2, -1]),
        }
    }

    #[test]
    fn compose_inverse() {
        let g = shear();
        assert!(g.compose(&g.inverse()).is_identity());
        assert!(g.inverse().compose(&g).is_identity());
    }

    #[test]
    fn covector_pairing_preserved() {
        let g = shear();
        let m = int_vec(&[3, -2]);
        let n = int_vec(&[1, 4]);
        let gm = g.linear.mul_vec(&m);
        let gn = g.covector_push().mul_vec(&n);
        assert_eq!(dot(&m, &n), dot(&gm, &gn));
    }

    #[test]
    fn rep_functorial() {
        let g = shear();
        let h = ChartTransport {
            linear: IntMat::from_rows(vec![vec![0, -1], vec![1, 0]]),
            translation: int_vec(&[1, 1]),
        };
        for kind in [SystemKind::WedgeCheck, SystemKind::WedgeLambda, SystemKind::WedgeAff] {
            for r in 0..=2 {
                let lhs = rep_of_transport(kind, r, &h.compose(&g));
                let rhs = rep_of_transport(kind, r, &h).mul(&rep_of_transport(kind, r, &g));
                assert_eq!(lhs, rhs, "kind {:?} r {}", kind, r);
            }
        }
    }

    #[test]
    fn aff_rank() {
        assert_eq!(fiber_rank(SystemKind::WedgeAff, 2, 1), 3);
        assert_eq!(fiber_rank(SystemKind::WedgeAff, 3, 2), 6);
        assert_eq!(fiber_rank(SystemKind::WedgeCheck, 3, 2), 3);
    }

    #[test]
    fn aff_action_on_affine_function() {
        // f(x) = c + <n, x>; push along g and check against evaluation:
        // (g_* f)(y) = f(g^{-1} y)
        let g = shear();
        let rep = rep_of_transport(SystemKind::WedgeAff, 1, &g);
        // basis order: wedge^1 check (n-part) first, then constant part
        let n = int_vec(&[5, 7]);
        let c = Int::from(3);
        let mut input = n.clone();
        input.push(c.clone());
        let out = rep.mul_vec(&input);
        let n_out = &out[0..2];
        let c_out = &out[2];
        let ginv = g.inverse();
        for y in [int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[4, -3])] {
            let x = crate::lattice::add_vec(&ginv.linear.mul_vec(&y), &ginv.translation);
            let lhs = &c + dot(&n, &x);
            let rhs = c_out + dot(n_out, &y);
            assert_eq!(lhs, rhs);
        }
    }
}
