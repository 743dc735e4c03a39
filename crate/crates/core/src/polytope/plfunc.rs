//! Integral piecewise linear functions on fans.

use super::cone::Cone;
use super::fan::Fan;
use super::LatticePolytope;
use crate::error::{Error, Result};
use crate::lattice::{dot, rat_int, Int, Rat};
use num_traits::Zero;

/// One integral linear functional per maximal cone of the fan.
#[derive(Clone, Debug)]
pub struct PLFunction {
    pub ambient_dim: usize,
    /// (cone index into the fan, functional)
    pub functionals: Vec<(usize, Vec<Int>)>,
}

impl PLFunction {
    pub fn eval(&self, fan: &Fan, x: &[Int]) -> Option<Int> {
        for (ci, f) in &self.functionals {
            if fan.cones[*ci].contains(x) {
                return Some(dot(f, x));
            }
        }
        None
    }

    /// Convexity: on each pair of maximal cones the difference of the two
    /// functionals is nonnegative on the other cone's generators.
    pub fn is_convex(&self, fan: &Fan) -> bool {
        for (ci, fi) in &self.functionals {
            for (cj, fj) in &self.functionals {
                if ci == cj {
                    continue;
                }
                let _ = &fan.cones[*ci];
                for g in &fan.cones[*cj].generators {
                    // convex (as a max of linear functions): f_j ≥ f_i on cone j
                    let diff = dot(fj, g) - dot(fi, g);
                    if diff < Int::zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `ψ̌(n) = −inf{⟨n, m⟩ : m ∈ Δ}`: on each maximal cone the functional is
/// minus the vertex of Δ realizing the infimum there.
pub fn newton_pl_function(delta: &LatticePolytope, fan: &Fan) -> Result<PLFunction> {
    if delta.ambient_dim != fan.ambient_dim {
        return Err(Error::DimMismatch("Newton polytope vs fan dimensions".into()));
    }
    if !fan.complete {
        return Err(Error::Invalid("newton_pl_function expects a complete fan".into()));
    }
    let maximal = fan.maximal_cones();
    let mut functionals = Vec::new();
    for ci in maximal {
        let cone = &fan.cones[ci];
        let m_star = minimizing_vertex(delta, cone)?;
        let f: Vec<Int> = m_star.iter().map(|x| -x.clone()).collect();
        functionals.push((ci, f));
    }
    Ok(PLFunction { ambient_dim: fan.ambient_dim, functionals })
}

/// The vertex of Δ minimizing `⟨·, m⟩` over the whole cone; errors when no
/// single vertex works (fan not refined enough for Δ).
fn minimizing_vertex(delta: &LatticePolytope, cone: &Cone) -> Result<Vec<Int>> {
    // interior direction: sum of generators
    let dim = cone.ambient_dim;
    let mut interior = vec![Int::zero(); dim];
    for g in &cone.generators {
        for i in 0..dim {
            interior[i] = &interior[i] + &g[i];
        }
    }
    let key = |m: &Vec<Int>| -> Rat { rat_int(&dot(&interior, m)) };
    let mut best = delta.vertices[0].clone();
    for v in &delta.vertices[1..] {
        if key(v) < key(&best) {
            best = v.clone();
        }
    }
    // verify: best minimizes on every generator
    for g in &cone.generators {
        let bg = dot(g, &best);
        for v in &delta.vertices {
            if dot(g, v) < bg {
                return Err(Error::Invalid(
                    "fan cone is not contained in a normal cone of the Newton polytope".into(),
                ));
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::fan::{fan_from_cones, normal_fan};
    use crate::polytope::{point_polytope, segment, LatticePolytope};
    use crate::lattice::int_vec;

    #[test]
    fn newton_of_point_is_zero() {
        let fan = fan_from_cones(
            1,
            vec![
                Cone::from_i64(1, vec![vec![1]]).unwrap(),
                Cone::from_i64(1, vec![vec![-1]]).unwrap(),
            ],
            true,
        );
        let delta = point_polytope(int_vec(&[0]));
        let f = newton_pl_function(&delta, &fan).unwrap();
        for (_, func) in &f.functionals {
            assert!(func.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn newton_of_segment() {
        // Δ = [0,1] ⊂ R, fan = {R≥0, R≤0}: ψ(1) = 0, ψ(−1) = 1
        let fan = fan_from_cones(
            1,
            vec![
                Cone::from_i64(1, vec![vec![1]]).unwrap(),
                Cone::from_i64(1, vec![vec![-1]]).unwrap(),
            ],
            true,
        );
        let delta = segment(vec![0], vec![1]);
        let f = newton_pl_function(&delta, &fan).unwrap();
        assert_eq!(f.eval(&fan, &int_vec(&[1])).unwrap(), crate::lattice::int(0));
        assert_eq!(f.eval(&fan, &int_vec(&[-1])).unwrap(), crate::lattice::int(1));
        assert!(f.is_convex(&fan));
    }

    #[test]
    fn newton_square_on_own_normal_fan() {
        let sq = LatticePolytope::from_i64(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
            .unwrap();
        let nf = normal_fan(&sq).unwrap();
        let f = newton_pl_function(&sq, &nf).unwrap();
        assert!(f.is_convex(&nf));
        // on each maximal cone the functional is minus the dual vertex
        for (ci, func) in &f.functionals {
            let cone = &nf.cones[*ci];
            if cone.dim() == 2 {
                let m: Vec<Int> = func.iter().map(|x| -x.clone()).collect();
                assert!(sq.vertices.contains(&m));
            }
        }
    }
}
