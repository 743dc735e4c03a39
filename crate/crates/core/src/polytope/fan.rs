//! Fans and normal fans.

use super::cone::{cone_span_basis, Cone};
use super::LatticePolytope;
use crate::error::{Error, Result};
use crate::lattice::{dot, sub_vec, Int};
use num_traits::Zero;

#[derive(Clone, Debug)]
pub struct Fan {
    pub ambient_dim: usize,
    pub cones: Vec<Cone>,
    /// (i, j) with cone i a face of cone j
    pub face_relations: Vec<(usize, usize)>,
    pub complete: bool,
}

impl Fan {
    pub fn maximal_cones(&self) -> Vec<usize> {
        let d = self.cones.iter().map(|c| c.dim()).max().unwrap_or(0);
        (0..self.cones.len()).filter(|&i| self.cones[i].dim() == d).collect()
    }
}

/// Normal fan of a full-dimensional polytope: one cone per face,
/// order-reversing; the cone of a face F is generated by the facet
/// normals of the facets containing F (inner normals, `⟨a,x⟩ ≥ b`).
pub fn normal_fan(p: &LatticePolytope) -> Result<Fan> {
    if p.dim != p.ambient_dim {
        return Err(Error::DegeneratePolytope(
            "normal fan requires a full-dimensional polytope".into(),
        ));
    }
    let mut cones = Vec::new();
    let mut dims = Vec::new();
    for face in &p.faces {
        let gens: Vec<Vec<Int>> = p
            .facets
            .iter()
            .filter(|f| face.vertices.iter().all(|v| f.vertices.contains(v)))
            .map(|f| f.normal.clone())
            .collect();
        cones.push(Cone::from_generators(p.ambient_dim, gens)?);
        dims.push(face.dim);
    }
    let mut face_relations = Vec::new();
    for i in 0..cones.len() {
        for j in 0..cones.len() {
            if i != j && dims[i] > dims[j] {
                // face i contains face j as a cell ⇒ cone i ⊆ cone j
                let fi = &p.faces[i];
                let fj = &p.faces[j];
                if fj.vertices.iter().all(|v| fi.vertices.contains(v)) {
                    face_relations.push((i, j));
                }
            }
        }
    }
    Ok(Fan { ambient_dim: p.ambient_dim, cones, face_relations, complete: true })
}

/// Fan from explicit maximal cones; completeness is asserted by the caller.
pub fn fan_from_cones(ambient_dim: usize, cones: Vec<Cone>, complete: bool) -> Fan {
    Fan { ambient_dim, cones, face_relations: Vec::new(), complete }
}

/// The tangent wedge `Cone(P - v)` of a polytope at one of its vertices.
pub fn tangent_wedge(p: &LatticePolytope, vertex: &[Int]) -> Result<Cone> {
    if !p.vertices.iter().any(|w| w == vertex) {
        return Err(Error::Invalid("tangent wedge at a non-vertex".into()));
    }
    let gens: Vec<Vec<Int>> = p
        .vertices
        .iter()
        .filter(|w| *w != vertex)
        .map(|w| sub_vec(w, vertex))
        .collect();
    Cone::from_generators(p.ambient_dim, gens)
}

/// Check that two cones share the wall where both their closures meet,
/// i.e. their intersection is a face of both (desk-scale test).
pub fn intersect_in_common_face(a: &Cone, b: &Cone) -> bool {
    // the intersection cone: generated by rays of each lying in the other
    let mut gens: Vec<Vec<Int>> = Vec::new();
    for g in &a.generators {
        if b.contains(g) {
            gens.push(g.clone());
        }
    }
    for g in &b.generators {
        if a.contains(g) {
            gens.push(g.clone());
        }
    }
    let Ok(cap) = Cone::from_generators(a.ambient_dim, gens) else {
        return false;
    };
    is_face_of(&cap, a) && is_face_of(&cap, b)
}

fn is_face_of(f: &Cone, c: &Cone) -> bool {
    // every generator of f in c, and f = c ∩ {supporting hyperplane}
    if !f.generators.iter().all(|g| c.contains(g)) {
        return false;
    }
    if f.set_eq(c) {
        return true;
    }
    // find a facet normal of c vanishing on f and positive elsewhere
    'outer: for a in c.facet_normals.iter().chain(c.span_equations.iter()) {
        if f.generators.iter().all(|g| dot(a, g).is_zero()) {
            // f ⊆ c ∩ a^⊥; equality iff every c-generator in a^⊥ is in f
            for g in &c.generators {
                if dot(a, g).is_zero() && !f.contains(g) {
                    continue 'outer;
                }
            }
            return true;
        }
    }
    // the zero cone is a face of every pointed cone
    f.generators.is_empty() && c.is_strictly_convex()
}

/// A wall check used by complex validation: the span basis of the cone,
/// canonically ordered, for set comparison.
pub fn wall_key(c: &Cone) -> Vec<Vec<String>> {
    let b = cone_span_basis(c);
    let mut gens: Vec<Vec<String>> = c
        .generators
        .iter()
        .map(|g| g.iter().map(|x| x.to_string()).collect())
        .collect();
    gens.sort();
    let _ = b;
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{segment, standard_simplex, LatticePolytope};

    #[test]
    fn normal_fan_counts() {
        let sq = LatticePolytope::from_i64(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
            .unwrap();
        let f = normal_fan(&sq).unwrap();
        let maximal: Vec<usize> =
            (0..f.cones.len()).filter(|&i| f.cones[i].dim() == 2).collect();
        assert_eq!(maximal.len(), 4);

        let s = standard_simplex(3);
        let f = normal_fan(&s).unwrap();
        let maximal: Vec<usize> =
            (0..f.cones.len()).filter(|&i| f.cones[i].dim() == 3).collect();
        assert_eq!(maximal.len(), 4);

        let seg = segment(vec![0], vec![4]);
        let f = normal_fan(&seg).unwrap();
        let rays: Vec<usize> = (0..f.cones.len()).filter(|&i| f.cones[i].dim() == 1).collect();
        assert_eq!(rays.len(), 2);
    }

    #[test]
    fn order_reversal_on_square() {
        let sq = LatticePolytope::from_i64(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
            .unwrap();
        let f = normal_fan(&sq).unwrap();
        // vertices (dim 0 faces) correspond to 2-dim cones and vice versa
        for (i, face) in sq.faces.iter().enumerate() {
            assert_eq!(f.cones[i].dim(), 2 - face.dim);
        }
    }
}
