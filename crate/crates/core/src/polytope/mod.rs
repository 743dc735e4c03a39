//! Lattice polytopes with exact face lattices, lattice-point
//! enumeration, and the elementary / standard simplex predicates.
//!
//! Facet enumeration is brute force over affinely independent vertex
//! subsets with an all-points-on-one-side test; ambient dimensions stay
//! at most five here, so this is plenty.

mod cone;
mod fan;
mod minkowski;
mod plfunc;

pub use cone::{dual_cone, Cone};
pub use fan::{normal_fan, Fan};
pub use minkowski::{minkowski_face_split, minkowski_sum};
pub use plfunc::{newton_pl_function, PLFunction};

use crate::error::{Error, Result};
use crate::lattice::{
    self, content, dot, int, integer_kernel, primitive, rank_q, saturated_span, smith_normal_form,
    sub_vec, Int, IntMat,
};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A facet inequality `⟨a, x⟩ ≥ b` with primitive `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<Int>,
    pub offset: Int,
    /// indices into the vertex list of the vertices on this facet
    pub vertices: Vec<usize>,
}

/// A face, stored by the sorted list of vertex indices lying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct LatticePolytope {
    pub ambient_dim: usize,
    /// extreme points, deduplicated, sorted lexicographically
    pub vertices: Vec<Vec<Int>>,
    pub dim: usize,
    /// facet inequalities of the polytope inside its affine span,
    /// expressed in ambient coordinates (normals primitive, constant on
    /// the affine-span complement)
    pub facets: Vec<Facet>,
    /// all nonempty faces including the polytope itself
    pub faces: Vec<Face>,
    /// basis (columns) of the direction lattice `span(P - v0) ∩ ℤ^N`
    pub dir_basis: IntMat,
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    vertices: Vec<Vec<i64>>,
}

impl LatticePolytope {
    /// Convex hull of a finite point set; redundant points are dropped.
    pub fn from_points(points: Vec<Vec<Int>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::DegeneratePolytope("no points".into()));
        }
        let ambient = points[0].len();
        if points.iter().any(|p| p.len() != ambient) {
            return Err(Error::DimMismatch("inconsistent point dimensions".into()));
        }
        let mut pts: Vec<Vec<Int>> = points;
        pts.sort();
        pts.dedup();

        let base = pts[0].clone();
        let diffs: Vec<Vec<Int>> = pts.iter().map(|p| sub_vec(p, &base)).collect();
        let diff_mat = IntMat::from_fn(ambient, pts.len(), |i, j| diffs[j][i].clone());
        let dir_basis = saturated_span(&diff_mat);
        let dim = dir_basis.cols;

        let intr = intrinsic_coords(&dir_basis, &base, &pts)?;
        let (facet_idx, keep) = hull_facets(&intr, dim)?;

        let vertices: Vec<Vec<Int>> = keep.iter().map(|&i| pts[i].clone()).collect();
        // recompute intrinsic for the kept vertices and re-run to get clean facet data
        let intr: Vec<Vec<Int>> = keep.iter().map(|&i| intr[i].clone()).collect();
        let remap: std::collections::HashMap<usize, usize> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();

        let mut facets = Vec::new();
        for (normal_i, offset_i, on) in facet_idx {
            // lift intrinsic normal to ambient: n_amb(x) = n_i(coords(x)); since
            // coords(x) solves dir_basis * y = x - base, n_amb = n_i ∘ coords.
            let n_amb = lift_covector(&dir_basis, &normal_i)?;
            let b = dot(&n_amb, &vertices[*remap.get(&on[0]).unwrap()].clone());
            let vs: Vec<usize> = on.iter().filter_map(|i| remap.get(i).copied()).sorted().collect();
            let _ = offset_i;
            facets.push(Facet { normal: n_amb, offset: b, vertices: vs });
        }
        facets.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));

        let faces = face_lattice(&vertices, &facets, dim);
        Ok(LatticePolytope { ambient_dim: ambient, vertices, dim, facets, faces, dir_basis })
    }

    pub fn from_i64(points: Vec<Vec<i64>>) -> Result<Self> {
        Self::from_points(points.into_iter().map(|p| lattice::int_vec(&p)).collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.vertices.iter().map(|v| {
                v.iter().map(|x| x.to_string().parse::<i64>().unwrap_or_default()).collect::<Vec<_>>()
            }).collect::<Vec<_>>()
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let pj: PolytopeJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_i64(pj.vertices)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        // inside the affine span?
        let d = sub_vec(x, &self.vertices[0]);
        if !in_span(&self.dir_basis, &d) {
            return false;
        }
        self.facets.iter().all(|f| dot(&f.normal, x) >= f.offset)
    }

    /// All faces of a given dimension, as vertex-sharing sub-polytopes.
    pub fn faces_of_dim(&self, d: usize) -> Vec<LatticePolytope> {
        self.faces
            .iter()
            .filter(|f| f.dim == d)
            .map(|f| {
                LatticePolytope::from_points(
                    f.vertices.iter().map(|&i| self.vertices[i].clone()).collect(),
                )
                .expect("face of a polytope is a polytope")
            })
            .collect()
    }

    /// Exact lattice-point enumeration by intrinsic bounding-box scan.
    pub fn lattice_points(&self) -> Result<Vec<Vec<Int>>> {
        let base = &self.vertices[0];
        let intr = intrinsic_coords(&self.dir_basis, base, &self.vertices)?;
        let d = self.dim;
        if d == 0 {
            return Ok(vec![base.clone()]);
        }
        let mut lo = intr[0].clone();
        let mut hi = intr[0].clone();
        for p in &intr {
            for k in 0..d {
                if p[k] < lo[k] {
                    lo[k] = p[k].clone();
                }
                if p[k] > hi[k] {
                    hi[k] = p[k].clone();
                }
            }
        }
        let mut count: u128 = 1;
        for k in 0..d {
            let w = (&hi[k] - &lo[k] + Int::one()).to_string().parse::<u128>().unwrap_or(u128::MAX);
            count = count.saturating_mul(w);
            if count > 10_000_000 {
                return Err(Error::BoxTooLarge(count));
            }
        }
        // facet inequalities in intrinsic coordinates
        let intr_facets: Vec<(Vec<Int>, Int)> = self
            .facets
            .iter()
            .map(|f| {
                let n = restrict_covector(&self.dir_basis, &f.normal);
                let b = &f.offset - dot(&f.normal, base);
                (n, b)
            })
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        'scan: loop {
            if intr_facets.iter().all(|(n, b)| dot(n, &cur) >= *b) {
                // map back to ambient
                let mut amb = base.clone();
                for k in 0..d {
                    for i in 0..self.ambient_dim {
                        amb[i] = &amb[i] + &self.dir_basis[(i, k)] * &cur[k];
                    }
                }
                out.push(amb);
            }
            // advance odometer
            let mut k = 0;
            loop {
                if k == d {
                    break 'scan;
                }
                cur[k] += Int::one();
                if cur[k] <= hi[k] {
                    break;
                }
                cur[k] = lo[k].clone();
                k += 1;
            }
        }
        out.sort();
        Ok(out)
    }

    /// Vertices affinely independent and no lattice points besides them.
    pub fn is_elementary_simplex(&self) -> Result<bool> {
        if self.vertices.len() != self.dim + 1 {
            return Ok(false);
        }
        let pts = self.lattice_points()?;
        Ok(pts.len() == self.vertices.len())
    }

    /// Elementary and the edge-vector matrix from one vertex has all
    /// Smith invariant factors equal to one.
    pub fn is_standard_simplex(&self) -> Result<bool> {
        if !self.is_elementary_simplex()? {
            return Ok(false);
        }
        if self.dim == 0 {
            return Ok(true);
        }
        let base = &self.vertices[0];
        let edges = IntMat::from_fn(self.ambient_dim, self.dim, |i, j| {
            &self.vertices[j + 1][i] - &base[i]
        });
        let f = smith_normal_form(&edges);
        Ok(f.rank() == self.dim && f.invariant_factors().iter().all(|x| x.is_one()))
    }

    /// Normalized volume times dim! — determinant for simplices only.
    pub fn simplex_volume(&self) -> Option<Int> {
        if self.vertices.len() != self.dim + 1 {
            return None;
        }
        let base = &self.vertices[0];
        let intr =
            intrinsic_coords(&self.dir_basis, base, &self.vertices).ok()?;
        let m = IntMat::from_fn(self.dim, self.dim, |i, j| intr[j + 1][i].clone());
        Some(m.det().abs())
    }

    /// Translate by an integer vector.
    pub fn translate(&self, t: &[Int]) -> LatticePolytope {
        LatticePolytope::from_points(
            self.vertices.iter().map(|v| lattice::add_vec(v, t)).collect(),
        )
        .expect("translate preserves polytopes")
    }

    /// Intrinsic coordinates of a point of the polytope's affine lattice.
    pub fn intrinsic(&self, x: &[Int]) -> Option<Vec<Int>> {
        intrinsic_coords(&self.dir_basis, &self.vertices[0], std::slice::from_ref(&x.to_vec()))
            .ok()
            .map(|mut v| v.remove(0))
    }
}

/// Solve for intrinsic integer coordinates of points w.r.t. a saturated basis.
fn intrinsic_coords(
    dir_basis: &IntMat,
    base: &[Int],
    pts: &[Vec<Int>],
) -> Result<Vec<Vec<Int>>> {
    let d = dir_basis.cols;
    if d == 0 {
        return Ok(pts.iter().map(|_| Vec::new()).collect());
    }
    let bq = dir_basis.to_rat();
    let gram = bq.transpose().mul(&bq);
    let gram_inv = gram.inverse().ok_or_else(|| {
        Error::DegeneratePolytope("direction basis not independent".into())
    })?;
    let mut out = Vec::with_capacity(pts.len());
    for p in pts {
        let rhs: Vec<crate::lattice::Rat> = {
            let diff = sub_vec(p, base);
            let diff_r: Vec<crate::lattice::Rat> =
                diff.iter().map(lattice::rat_int).collect();
            bq.transpose().mul_vec(&diff_r)
        };
        let y = gram_inv.mul_vec(&rhs);
        // verify exactness and integrality
        let back = bq.mul_vec(&y);
        let diff = sub_vec(p, base);
        for i in 0..base.len() {
            if back[i] != lattice::rat_int(&diff[i]) {
                return Err(Error::DegeneratePolytope(
                    "point outside the affine lattice of the polytope".into(),
                ));
            }
        }
        let mut yi = Vec::with_capacity(d);
        for v in y {
            if !v.denom().is_one() {
                return Err(Error::DegeneratePolytope(
                    "point not in the saturated affine lattice".into(),
                ));
            }
            yi.push(v.numer().clone());
        }
        out.push(yi);
    }
    Ok(out)
}

/// Express an intrinsic covector as an ambient one (any extension).
fn lift_covector(dir_basis: &IntMat, n_intrinsic: &[Int]) -> Result<Vec<Int>> {
    // want a ∈ ℤ^N with a · dir_basis = n_intrinsic; solve the transposed system
    let bt = dir_basis.transpose().to_rat();
    let target: Vec<crate::lattice::Rat> = n_intrinsic.iter().map(lattice::rat_int).collect();
    // bt is d×N, full row rank; particular rational solution then clear to integers
    // via pseudo-inverse on the saturated lattice: since dir_basis is saturated an
    // integral solution exists.
    let btb = bt.mul(&bt.transpose());
    let inv = btb.inverse().ok_or_else(|| Error::DegeneratePolytope("rank".into()))?;
    let y = inv.mul_vec(&target);
    let a = bt.transpose().mul_vec(&y);
    // a may be rational; fix it up by rounding through the integer lattice:
    // solve exactly instead via Smith form of dir_basis^T.
    if a.iter().all(|x| x.denom().is_one()) {
        return Ok(a.into_iter().map(|x| x.numer().clone()).collect());
    }
    // Smith route: U (B^T) V = D  =>  solve B^T a = n by a = U^T-style transport
    let btm = dir_basis.transpose();
    let f = smith_normal_form(&btm);
    // B^T = U^{-1} D V^{-1}; a = V (D^+ (U n))
    let un = f.u.mul_vec(n_intrinsic);
    let d = &f.d;
    let mut y = vec![Int::zero(); btm.cols];
    for i in 0..d.rows.min(d.cols) {
        if !d[(i, i)].is_zero() {
            let q = &un[i] / &d[(i, i)];
            if &q * &d[(i, i)] != un[i] {
                return Err(Error::DegeneratePolytope("covector does not lift".into()));
            }
            y[i] = q;
        } else if !un[i].is_zero() {
            return Err(Error::DegeneratePolytope("covector does not lift".into()));
        }
    }
    Ok(f.v.mul_vec(&y))
}

/// Restrict an ambient covector to intrinsic coordinates.
fn restrict_covector(dir_basis: &IntMat, a: &[Int]) -> Vec<Int> {
    (0..dir_basis.cols)
        .map(|j| (0..dir_basis.rows).map(|i| &a[i] * &dir_basis[(i, j)]).sum())
        .collect()
}

fn in_span(dir_basis: &IntMat, v: &[Int]) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    let mut cols: Vec<&IntMat> = Vec::new();
    let vm = IntMat::from_fn(v.len(), 1, |i, _| v[i].clone());
    cols.push(dir_basis);
    cols.push(&vm);
    let stacked = IntMat::hstack(&cols);
    rank_q(&stacked.to_rat()) == rank_q(&dir_basis.to_rat())
}

/// Facets of the full-dimensional hull of `pts` (intrinsic coords, dim d).
/// Returns (normal, offset, supporting point indices) and the extreme point indices.
#[allow(clippy::type_complexity)]
fn hull_facets(
    pts: &[Vec<Int>],
    d: usize,
) -> Result<(Vec<(Vec<Int>, Int, Vec<usize>)>, Vec<usize>)> {
    let k = pts.len();
    if d == 0 {
        return Ok((Vec::new(), vec![0]));
    }
    let mut facets: Vec<(Vec<Int>, Int, Vec<usize>)> = Vec::new();
    let mut seen: std::collections::BTreeSet<(Vec<String>, String)> = Default::default();
    for subset in (0..k).combinations(d) {
        // affine span of the subset must have dim d-1
        let base = &pts[subset[0]];
        let diffs = IntMat::from_fn(d, subset.len() - 1, |i, j| {
            &pts[subset[j + 1]][i] - &base[i]
        });
        if subset.len() > 1 && rank_q(&diffs.to_rat()) != d - 1 {
            continue;
        }
        if subset.len() == 1 && d != 1 {
            continue;
        }
        let kern = integer_kernel(&diffs.transpose());
        if kern.cols != 1 {
            continue;
        }
        let mut normal = primitive(&kern.col_vec(0))?;
        let b0 = dot(&normal, base);
        let vals: Vec<Int> = pts.iter().map(|p| dot(&normal, p) - &b0).collect();
        let pos = vals.iter().any(|x| x.is_positive());
        let neg = vals.iter().any(|x| x.is_negative());
        if pos && neg {
            continue;
        }
        if pos {
            // normalize to ⟨a, x⟩ ≥ b
        } else if neg {
            normal = normal.iter().map(|x| -x.clone()).collect();
        } else {
            // all points on the hyperplane: polytope not full-dim (shouldn't happen)
            continue;
        }
        let b = dot(&normal, base);
        let on: Vec<usize> = (0..k).filter(|&i| dot(&normal, &pts[i]) == b).collect();
        let key = (
            normal.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            b.to_string(),
        );
        if seen.insert(key) {
            facets.push((normal, b, on));
        }
    }
    if facets.is_empty() {
        return Err(Error::DegeneratePolytope("no facets found".into()));
    }
    // extreme points: lie on facets whose normals span d dims
    let mut keep = Vec::new();
    for i in 0..k {
        let normals: Vec<&Vec<Int>> = facets
            .iter()
            .filter(|(_, _, on)| on.contains(&i))
            .map(|(nrm, _, _)| nrm)
            .collect();
        if normals.is_empty() {
            continue;
        }
        let m = IntMat::from_fn(normals.len(), d, |r, c| normals[r][c].clone());
        if rank_q(&m.to_rat()) == d {
            keep.push(i);
        }
    }
    Ok((facets, keep))
}

/// All nonempty faces by closing the facet sets under intersection.
fn face_lattice(vertices: &[Vec<Int>], facets: &[Facet], dim: usize) -> Vec<Face> {
    let full: Vec<usize> = (0..vertices.len()).collect();
    let mut sets: std::collections::BTreeSet<Vec<usize>> = Default::default();
    sets.insert(full.clone());
    let facet_sets: Vec<Vec<usize>> = facets.iter().map(|f| f.vertices.clone()).collect();
    for fs in &facet_sets {
        sets.insert(fs.clone());
    }
    let mut frontier: Vec<Vec<usize>> = facet_sets.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in &facet_sets {
                let c: Vec<usize> =
                    a.iter().copied().filter(|x| b.contains(x)).collect();
                if !c.is_empty() && !sets.contains(&c) {
                    sets.insert(c.clone());
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    let mut faces: Vec<Face> = sets
        .into_iter()
        .map(|vs| {
            let d = affine_dim(vertices, &vs);
            Face { vertices: vs, dim: d }
        })
        .collect();
    let _ = dim;
    faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
    faces
}

fn affine_dim(vertices: &[Vec<Int>], idx: &[usize]) -> usize {
    if idx.len() <= 1 {
        return 0;
    }
    let base = &vertices[idx[0]];
    let m = IntMat::from_fn(base.len(), idx.len() - 1, |i, j| {
        &vertices[idx[j + 1]][i] - &base[i]
    });
    rank_q(&m.to_rat())
}

/// `is_standard ⇒ is_elementary` gets its own helper used by tests.
pub fn simplex_flags(p: &LatticePolytope) -> Result<(bool, bool)> {
    let e = p.is_elementary_simplex()?;
    let s = p.is_standard_simplex()?;
    Ok((e, s))
}

/// Conv(∪ Δ_i × {e_i}) in `M'_ℝ × ℝ^q`; `deltas[i]` enters at level `e_{i+1}`
/// when `with_zero_level` is false, or Δ_0 at level e_0 when true.
pub fn lifted_hull(deltas: &[&LatticePolytope], dim_mprime: usize) -> Result<LatticePolytope> {
    let q = deltas.len();
    let mut pts = Vec::new();
    for (i, d) in deltas.iter().enumerate() {
        for v in &d.vertices {
            assert_eq!(v.len(), dim_mprime);
            let mut p = v.clone();
            for k in 0..q {
                p.push(if k == i { Int::one() } else { Int::zero() });
            }
            pts.push(p);
        }
    }
    LatticePolytope::from_points(pts)
}

pub fn point_polytope(p: Vec<Int>) -> LatticePolytope {
    LatticePolytope::from_points(vec![p]).expect("point polytope")
}

pub fn segment(a: Vec<i64>, b: Vec<i64>) -> LatticePolytope {
    LatticePolytope::from_i64(vec![a, b]).expect("segment")
}

pub fn standard_simplex(d: usize) -> LatticePolytope {
    let mut pts = vec![vec![0i64; d]];
    for i in 0..d {
        let mut e = vec![0i64; d];
        e[i] = 1;
        pts.push(e);
    }
    LatticePolytope::from_i64(pts).expect("standard simplex")
}

pub fn int_point(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> LatticePolytope {
        LatticePolytope::from_i64(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn faces_counts() {
        let sq = unit_square();
        assert_eq!(sq.faces_of_dim(0).len(), 4);
        assert_eq!(sq.faces_of_dim(1).len(), 4);
        let s3 = standard_simplex(3);
        assert_eq!(s3.faces_of_dim(2).len(), 4);
    }

    #[test]
    fn redundant_points_dropped() {
        let p = LatticePolytope::from_i64(vec![
            vec![0, 0], vec![2, 0], vec![0, 2], vec![1, 1], vec![1, 0],
        ])
        .unwrap();
        assert_eq!(p.vertex_count(), 3);
    }

    #[test]
    fn lattice_points_examples() {
        let tri = standard_simplex(2);
        assert_eq!(tri.lattice_points().unwrap().len(), 3);
        assert_eq!(unit_square().lattice_points().unwrap().len(), 4);
        let p = LatticePolytope::from_i64(vec![
            vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2],
        ])
        .unwrap();
        assert_eq!(p.lattice_points().unwrap().len(), 4);
    }

    #[test]
    fn elementary_standard_examples() {
        assert_eq!(simplex_flags(&standard_simplex(2)).unwrap(), (true, true));
        let p = LatticePolytope::from_i64(vec![
            vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2],
        ])
        .unwrap();
        // 4 lattice points; SNF of edge matrix = diag(1,1,2)
        assert_eq!(simplex_flags(&p).unwrap(), (true, false));
        let seg2 = segment(vec![0], vec![2]);
        assert_eq!(simplex_flags(&seg2).unwrap(), (false, false));
    }

    #[test]
    fn standard_implies_elementary_on_samples() {
        for pts in [
            vec![vec![0, 0], vec![1, 0], vec![0, 1]],
            vec![vec![0, 0], vec![2, 1], vec![1, 1]],
            vec![vec![0, 0], vec![1, 0], vec![1, 2]],
            vec![vec![0, 0], vec![3, 1], vec![2, 1]],
        ] {
            let p = LatticePolytope::from_i64(pts).unwrap();
            let (e, s) = simplex_flags(&p).unwrap();
            assert!(!s || e);
        }
    }

    #[test]
    fn lower_dimensional_polytope() {
        // segment embedded in 3-space, off-axis
        let p = LatticePolytope::from_i64(vec![vec![1, 2, 3], vec![3, 4, 5]]).unwrap();
        assert_eq!(p.dim, 1);
        assert_eq!(p.lattice_points().unwrap().len(), 3);
        assert!(p.contains(&int_point(&[2, 3, 4])));
        assert!(!p.contains(&int_point(&[2, 3, 5])));
    }
}
