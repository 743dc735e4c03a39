//! Rational polyhedral cones and exact dual-cone computation.

use crate::error::{Error, Result};
use crate::lattice::{
    dot, int, integer_kernel, primitive, rank_q, saturated_span, Int, IntMat,
};
use itertools::Itertools;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug)]
pub struct Cone {
    pub ambient_dim: usize,
    /// primitive generators of the extreme rays (plus ± pairs for lineality)
    pub generators: Vec<Vec<Int>>,
    /// inequalities ⟨a, x⟩ ≥ 0 cutting the cone out of its span,
    /// together with the equations of the span
    pub facet_normals: Vec<Vec<Int>>,
    pub span_equations: Vec<Vec<Int>>,
}

impl Cone {
    pub fn from_generators(ambient_dim: usize, gens: Vec<Vec<Int>>) -> Result<Self> {
        let mut generators: Vec<Vec<Int>> = Vec::new();
        for g in gens {
            if g.len() != ambient_dim {
                return Err(Error::DimMismatch("cone generator".into()));
            }
            if g.iter().all(|x| x.is_zero()) {
                continue;
            }
            let p = primitive(&g)?;
            if !generators.contains(&p) {
                generators.push(p);
            }
        }
        generators.sort();
        let (facet_normals, span_equations) = cone_inequalities(ambient_dim, &generators)?;
        let mut c = Cone { ambient_dim, generators, facet_normals, span_equations };
        c.reduce_to_extreme_rays();
        Ok(c)
    }

    pub fn from_i64(ambient_dim: usize, gens: Vec<Vec<i64>>) -> Result<Self> {
        Self::from_generators(
            ambient_dim,
            gens.into_iter().map(|g| g.iter().map(|&x| int(x)).collect()).collect(),
        )
    }

    fn reduce_to_extreme_rays(&mut self) {
        if self.generators.len() <= 1 {
            return;
        }
        if !self.is_strictly_convex() {
            // keep all generators for non-pointed cones
            return;
        }
        let kept: Vec<Vec<Int>> = self
            .generators
            .iter()
            .filter(|g| {
                // extreme ray: tight facet normals have rank dim-1 within the span
                let tight: Vec<&Vec<Int>> = self
                    .facet_normals
                    .iter()
                    .filter(|a| dot(a, g).is_zero())
                    .collect();
                let mut rows: Vec<Vec<Int>> =
                    tight.iter().map(|a| (*a).clone()).collect();
                rows.extend(self.span_equations.iter().cloned());
                if rows.is_empty() {
                    return self.dim() <= 1;
                }
                let m = IntMat::from_fn(rows.len(), self.ambient_dim, |i, j| rows[i][j].clone());
                rank_q(&m.to_rat()) == self.ambient_dim - 1
            })
            .cloned()
            .collect();
        if !kept.is_empty() {
            self.generators = kept;
        }
    }

    pub fn dim(&self) -> usize {
        if self.generators.is_empty() {
            return 0;
        }
        let m = IntMat::from_fn(self.ambient_dim, self.generators.len(), |i, j| {
            self.generators[j][i].clone()
        });
        rank_q(&m.to_rat())
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.span_equations.iter().all(|e| dot(e, x).is_zero())
            && self.facet_normals.iter().all(|a| !dot(a, x).is_negative())
    }

    /// No line through the origin.
    pub fn is_strictly_convex(&self) -> bool {
        // pointed iff some functional is strictly positive on all generators;
        // equivalently no generator's negative also lies in the cone
        self.generators.iter().all(|g| {
            let neg: Vec<Int> = g.iter().map(|x| -x.clone()).collect();
            !self.raw_contains(&neg)
        })
    }

    fn raw_contains(&self, x: &[Int]) -> bool {
        self.span_equations.iter().all(|e| dot(e, x).is_zero())
            && self.facet_normals.iter().all(|a| !dot(a, x).is_negative())
    }

    pub fn set_eq(&self, other: &Cone) -> bool {
        self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }
}

/// Inequalities and equations for the cone spanned by `gens`.
fn cone_inequalities(
    ambient: usize,
    gens: &[Vec<Int>],
) -> Result<(Vec<Vec<Int>>, Vec<Vec<Int>>)> {
    if gens.is_empty() {
        // the zero cone: cut out by all coordinate equations
        let mut eqs = Vec::new();
        for i in 0..ambient {
            let mut e = vec![Int::zero(); ambient];
            e[i] = Int::from(1);
            eqs.push(e);
        }
        return Ok((Vec::new(), eqs));
    }
    let gmat = IntMat::from_fn(ambient, gens.len(), |i, j| gens[j][i].clone());
    // span equations: integer kernel of gmat^T gives functionals vanishing on span
    let eqs_mat = integer_kernel(&gmat.transpose());
    let span_equations: Vec<Vec<Int>> =
        (0..eqs_mat.cols).map(|j| eqs_mat.col_vec(j)).collect();
    let d = ambient - span_equations.len();
    // facets: supporting hyperplanes within the span
    let mut facets: Vec<Vec<Int>> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    if d == 0 {
        return Ok((facets, span_equations));
    }
    if d == 1 {
        // one or two rays on a line
        let pos = &gens[0];
        let has_neg = gens.iter().any(|g| {
            let s = crate::lattice::add_vec(g, pos);
            g != pos && s.iter().all(|x| x.is_zero())
        });
        if !has_neg && gens.len() >= 1 {
            // halfline: facet normal = any functional positive on pos within span
            // use pos itself composed with a positive-definite pairing: a = pos
            facets.push(pos.clone());
        }
        return Ok((facets, span_equations));
    }
    for subset in (0..gens.len()).combinations(d - 1) {
        let rows: Vec<Vec<Int>> = subset.iter().map(|&i| gens[i].clone()).collect();
        let mut m_rows = rows.clone();
        // also require vanishing... kernel of [gens_subset; as rows] intersected with span-functionals:
        // functionals vanishing on the subset AND on span-complement directions:
        // work with functionals a ∈ Z^ambient: a ⊥ subset, a in span of
        // functionals not identically zero on span.
        let m = IntMat::from_fn(m_rows.len(), ambient, |i, j| m_rows[i][j].clone());
        let kern = integer_kernel(&m);
        // candidate normals: kernel vectors that pair nonneg/nonpos with all gens
        // kernel may have dimension > 1; restrict to those constant-sign
        for j in 0..kern.cols {
            let cand = kern.col_vec(j);
            try_candidate(&cand, gens, &mut facets, &mut seen);
        }
        if kern.cols > 1 {
            // also sums of pairs to catch normals not on kernel basis axes:
            // project properly instead: intersect kernel with span functionals
            // by quotienting out functionals vanishing on all gens
            let all_rows: Vec<Vec<Int>> = gens.to_vec();
            let gm = IntMat::from_fn(all_rows.len(), ambient, |i, j| all_rows[i][j].clone());
            let span_funcs = integer_kernel(&gm); // vanish on every generator
            // candidates = kernel(m) modulo span_funcs: enumerate small combos
            let _ = span_funcs;
            for a in 0..kern.cols {
                for b in a + 1..kern.cols {
                    let s = crate::lattice::add_vec(&kern.col_vec(a), &kern.col_vec(b));
                    try_candidate(&s, gens, &mut facets, &mut seen);
                    let dsub = crate::lattice::sub_vec(&kern.col_vec(a), &kern.col_vec(b));
                    try_candidate(&dsub, gens, &mut facets, &mut seen);
                }
            }
        }
        let _ = m_rows;
    }
    Ok((facets, span_equations))
}

fn try_candidate(
    cand: &[Int],
    gens: &[Vec<Int>],
    facets: &mut Vec<Vec<Int>>,
    seen: &mut std::collections::BTreeSet<Vec<String>>,
) {
    if cand.iter().all(|x| x.is_zero()) {
        return;
    }
    let vals: Vec<Int> = gens.iter().map(|g| dot(cand, g)).collect();
    let pos = vals.iter().any(|x| x.is_positive());
    let neg = vals.iter().any(|x| x.is_negative());
    if pos && neg {
        return;
    }
    if !pos && !neg {
        return; // vanishes identically: span functional, not a facet
    }
    let mut a = primitive(cand).expect("nonzero");
    if neg {
        a = a.iter().map(|x| -x.clone()).collect();
    }
    let key: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    if seen.insert(key) {
        facets.push(a);
    }
}

/// `{n : ⟨n, v⟩ ≥ 0 for all generators v}` of the input cone.
pub fn dual_cone(c: &Cone) -> Result<Cone> {
    let ambient = c.ambient_dim;
    if c.generators.is_empty() {
        // dual of {0} is everything
        let mut gens = Vec::new();
        for i in 0..ambient {
            let mut e = vec![Int::zero(); ambient];
            e[i] = Int::from(1);
            gens.push(e.clone());
            gens.push(e.iter().map(|x| -x.clone()).collect());
        }
        return Cone::from_generators(ambient, gens);
    }
    // dual generators: facet normals of C (within span) plus ± span equations
    let mut gens: Vec<Vec<Int>> = c.facet_normals.clone();
    for e in &c.span_equations {
        gens.push(e.clone());
        gens.push(e.iter().map(|x| -x.clone()).collect());
    }
    if gens.is_empty() {
        // C is full-dimensional with no facets: C = R^n, dual = {0}
        return Cone::from_generators(ambient, Vec::new());
    }
    Cone::from_generators(ambient, gens)
}

/// Primitive generators of the saturated lattice spanned by a cone's span.
pub fn cone_span_basis(c: &Cone) -> IntMat {
    if c.generators.is_empty() {
        return IntMat::zero(c.ambient_dim, 0);
    }
    let g = IntMat::from_fn(c.ambient_dim, c.generators.len(), |i, j| {
        c.generators[j][i].clone()
    });
    saturated_span(&g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_first_orthant() {
        let c = Cone::from_i64(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let d = dual_cone(&c).unwrap();
        assert!(d.set_eq(&c));
    }

    #[test]
    fn dual_spec_example() {
        let c = Cone::from_i64(2, vec![vec![1, 0], vec![1, 2]]).unwrap();
        let d = dual_cone(&c).unwrap();
        let expect = Cone::from_i64(2, vec![vec![0, 1], vec![2, -1]]).unwrap();
        assert!(d.set_eq(&expect));
    }

    #[test]
    fn dual_full_space_is_zero() {
        let c = Cone::from_i64(2, vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]])
            .unwrap();
        let d = dual_cone(&c).unwrap();
        assert_eq!(d.dim(), 0);
    }

    #[test]
    fn double_dual_small_cones() {
        for gens in [
            vec![vec![1, 0], vec![1, 2]],
            vec![vec![2, 1], vec![1, 3]],
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![1, 1, 1]],
            vec![vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1], vec![1, 0, 1]],
        ] {
            let dim = gens[0].len();
            let c = Cone::from_i64(dim, gens).unwrap();
            let dd = dual_cone(&dual_cone(&c).unwrap()).unwrap();
            assert!(dd.set_eq(&c), "double dual differs: {:?} vs {:?}", c, dd);
        }
    }

    #[test]
    fn pointedness() {
        let c = Cone::from_i64(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(c.is_strictly_convex());
        let c = Cone::from_i64(2, vec![vec![1, 0], vec![-1, 0], vec![0, 1]]).unwrap();
        assert!(!c.is_strictly_convex());
    }
}
