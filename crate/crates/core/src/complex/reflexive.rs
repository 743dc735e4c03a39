//! Import of reflexive polytopes: `B = ∂Ξ` with charts at each vertex
//! given by projection along the vertex onto an integral complement,
//! and the boundary multi-valued piecewise linear function.
//!
//! Two modes: the coarse decomposition (cells = proper faces of Ξ) and
//! the grid refinement, which slices every facet by the integral
//! coordinate and diagonal hyperplanes. The refinement applies when the
//! facets are dilated unimodular simplices `kΔ^d` with `d ≤ 3` (the
//! anticanonical simplices used by the bundled fixtures all are).

use super::{Cell, IntegralAffineComplex, MPLFunction};
use crate::error::{Error, Result};
use crate::lattice::{
    add_vec, complete_to_unimodular, dot, scale_vec, sub_vec, Int, IntMat,
};
use crate::polytope::LatticePolytope;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Build `(B, P, φ)` from a reflexive polytope.
pub fn from_reflexive_polytope(
    xi: &LatticePolytope,
    refine: bool,
) -> Result<(IntegralAffineComplex, MPLFunction)> {
    let nn = xi.ambient_dim;
    if xi.dim != nn {
        return Err(Error::NotReflexive("polytope is not full-dimensional".into()));
    }
    for f in &xi.facets {
        if f.offset != -Int::one() {
            return Err(Error::NotReflexive(format!(
                "facet offset {} is not -1",
                f.offset
            )));
        }
    }
    let n = nn - 1;

    // maximal pieces: one per facet (coarse) or the grid slices (refined)
    let mut piece_points: Vec<(usize, Vec<Vec<Int>>)> = Vec::new();
    for (fi, facet) in xi.facets.iter().enumerate() {
        let pts: Vec<Vec<Int>> =
            facet.vertices.iter().map(|&i| xi.vertices[i].clone()).collect();
        if !refine {
            piece_points.push((fi, pts));
        } else {
            for piece in slice_simplex_facet(&pts)? {
                piece_points.push((fi, piece));
            }
        }
    }

    // collect every cell as a sorted set of ambient lattice points
    type Key = Vec<Vec<Int>>;
    let mut cell_key_dim: BTreeMap<Key, usize> = BTreeMap::new();
    let mut piece_of_key: BTreeMap<Key, usize> = BTreeMap::new();
    for (fi, pts) in &piece_points {
        let poly = LatticePolytope::from_points(pts.clone())?;
        if poly.dim != n {
            return Err(Error::NotReflexive("facet piece has wrong dimension".into()));
        }
        for face in &poly.faces {
            let mut key: Key =
                face.vertices.iter().map(|&i| poly.vertices[i].clone()).collect();
            key.sort();
            cell_key_dim.insert(key.clone(), face.dim);
            if face.dim == n {
                piece_of_key.insert(key, *fi);
            }
        }
    }

    // ids: vertices first in point order, then higher cells by (dim, key)
    let mut vertex_ids: BTreeMap<Vec<Int>, usize> = BTreeMap::new();
    for (key, dim) in &cell_key_dim {
        if *dim == 0 {
            let next = vertex_ids.len();
            vertex_ids.entry(key[0].clone()).or_insert(next);
        }
    }
    let mut cell_ids: BTreeMap<Key, usize> = BTreeMap::new();
    let mut next_id = vertex_ids.len();
    let mut ordered: Vec<(usize, Key)> =
        cell_key_dim.iter().map(|(k, d)| (*d, k.clone())).collect();
    ordered.sort();
    for (dim, key) in &ordered {
        if *dim == 0 {
            cell_ids.insert(key.clone(), vertex_ids[&key[0]]);
        } else {
            cell_ids.insert(key.clone(), next_id);
            next_id += 1;
        }
    }

    let mut cells = Vec::new();
    for (dim, key) in &ordered {
        let id = cell_ids[key];
        let vs: Vec<usize> = {
            let mut v: Vec<usize> = key.iter().map(|p| vertex_ids[p]).collect();
            v.sort();
            v
        };
        let mut faces = Vec::new();
        if *dim > 0 {
            let poly = LatticePolytope::from_points(key.clone())?;
            for face in &poly.faces {
                if face.dim + 1 == *dim {
                    let mut fk: Key =
                        face.vertices.iter().map(|&i| poly.vertices[i].clone()).collect();
                    fk.sort();
                    faces.push(cell_ids[&fk]);
                }
            }
            faces.sort();
        }
        cells.push(Cell { id, dim: *dim, vertices: vs, faces });
    }

    // geometry and charts for maximal cells
    let point_of: BTreeMap<usize, Vec<Int>> =
        vertex_ids.iter().map(|(p, id)| (*id, p.clone())).collect();
    let mut geometry = BTreeMap::new();
    let mut charts = BTreeMap::new();
    for (key, _) in &piece_of_key {
        let id = cell_ids[key];
        let poly = LatticePolytope::from_points(key.clone())?;
        let mut coords = BTreeMap::new();
        for p in key {
            let v = vertex_ids[p];
            let y = poly.intrinsic(p).ok_or_else(|| {
                Error::NotReflexive("vertex outside its own cell lattice".into())
            })?;
            coords.insert(v, y);
        }
        geometry.insert(id, coords);
        for p in key {
            let v = vertex_ids[p];
            let a = projection_chart(p, &poly.dir_basis)?;
            charts.insert((v, id), a);
        }
    }

    // gradient of the global convex function on each maximal cell
    let slabs = if refine { slab_functionals(xi) } else { Vec::new() };
    let mut grad: BTreeMap<usize, Vec<Int>> = BTreeMap::new();
    for (key, &fi) in &piece_of_key {
        let id = cell_ids[key];
        let mut g = xi.facets[fi].normal.clone();
        for (u, lo, hi) in &slabs {
            let mut c = lo.clone();
            while &c <= hi {
                let vals: Vec<Int> = key.iter().map(|p| dot(u, p) - &c).collect();
                let pos = vals.iter().any(|x| x.is_positive());
                let neg = vals.iter().any(|x| x.is_negative());
                if pos && !neg {
                    g = add_vec(&g, u);
                } else if neg && !pos {
                    g = sub_vec(&g, u);
                }
                c += Int::one();
            }
        }
        grad.insert(id, g);
    }

    let cx = IntegralAffineComplex::new(n, cells, geometry, charts, None)?;
    let mut reps: BTreeMap<usize, Vec<(usize, Vec<Int>)>> = BTreeMap::new();
    for v in cx.cells_of_dim(0) {
        let stars = cx.maximal_containing(v);
        let sigma0 = *stars.first().ok_or(Error::BadCell(v, "isolated vertex".into()))?;
        let f0 = cone_functional(&cx, &point_of, &grad, v, sigma0)?;
        let mut entries = Vec::new();
        for &s in &stars {
            let f = cone_functional(&cx, &point_of, &grad, v, s)?;
            entries.push((s, sub_vec(&f, &f0)));
        }
        reps.insert(v, entries);
    }
    let phi = MPLFunction { reps };
    let mut cx = cx;
    cx.phi = Some(phi.clone());
    Ok((cx, phi))
}

/// The chart matrix at a boundary vertex: intrinsic cell coordinates to
/// the integral complement of the (primitive) vertex ray.
fn projection_chart(vertex_point: &[Int], dir_basis: &IntMat) -> Result<IntMat> {
    let n = dir_basis.cols;
    let mv = complete_to_unimodular(vertex_point)?;
    let mvi = mv.inv_unimodular();
    let mut a = IntMat::zero(n, n);
    for j in 0..n {
        let col = mvi.mul_vec(&dir_basis.col_vec(j));
        for i in 0..n {
            a[(i, j)] = col[i].clone();
        }
    }
    if !a.is_unimodular() {
        return Err(Error::NotReflexive(
            "projection along a vertex is not unimodular".into(),
        ));
    }
    Ok(a)
}

/// Functional of the global convex function on the chart cone of σ at v:
/// `y ↦ ⟨g_σ, lift_σ(y)⟩` where `lift_σ = B_σ ∘ A_{v,σ}^{-1}`.
fn cone_functional(
    cx: &IntegralAffineComplex,
    point_of: &BTreeMap<usize, Vec<Int>>,
    grad: &BTreeMap<usize, Vec<Int>>,
    v: usize,
    sigma: usize,
) -> Result<Vec<Int>> {
    let key_pts: Vec<Vec<Int>> =
        cx.cells[&sigma].vertices.iter().map(|w| point_of[w].clone()).collect();
    let poly = LatticePolytope::from_points(key_pts)?;
    let a_inv = cx.chart(v, sigma).inv_unimodular();
    let g = &grad[&sigma];
    let b = &poly.dir_basis;
    Ok((0..cx.n)
        .map(|j| {
            let e = a_inv.col_vec(j);
            let lift: Vec<Int> = (0..b.rows)
                .map(|i| (0..b.cols).map(|k| &b[(i, k)] * &e[k]).sum())
                .collect();
            dot(g, &lift)
        })
        .collect())
}

/// Recognize `conv(pts) ≅ kΔ^d` and return the standard slab pieces.
fn slice_simplex_facet(pts: &[Vec<Int>]) -> Result<Vec<Vec<Vec<Int>>>> {
    let poly = LatticePolytope::from_points(pts.to_vec())?;
    let d = poly.dim;
    if poly.vertex_count() != d + 1 {
        return Err(Error::UnsupportedStructure(
            "grid refinement needs simplicial facets".into(),
        ));
    }
    if d > 3 {
        return Err(Error::UnsupportedStructure(
            "grid refinement implemented for facets of dimension ≤ 3".into(),
        ));
    }
    let base = poly.vertices[0].clone();
    let edges: Vec<Vec<Int>> =
        poly.vertices[1..].iter().map(|p| sub_vec(p, &base)).collect();
    let all: Vec<Int> = edges.iter().flatten().cloned().collect();
    let k = crate::lattice::content(&all);
    let k_i64: i64 = k.to_string().parse().map_err(|_| Error::BoundTooLarge(0))?;
    if k_i64 <= 0 {
        return Err(Error::UnsupportedStructure("degenerate facet".into()));
    }
    let units: Vec<Vec<Int>> = edges
        .iter()
        .map(|e| e.iter().map(|x| x / &k).collect::<Vec<Int>>())
        .collect();
    for (e, u) in edges.iter().zip(&units) {
        if &scale_vec(&k, u) != e {
            return Err(Error::UnsupportedStructure(
                "facet is not a dilated lattice simplex".into(),
            ));
        }
    }
    let frame_poly = LatticePolytope::from_points(
        std::iter::once(base.clone())
            .chain(units.iter().map(|u| add_vec(&base, u)))
            .collect(),
    )?;
    if !frame_poly.is_standard_simplex()? {
        return Err(Error::UnsupportedStructure(
            "facet frame is not unimodular; grid refinement unavailable".into(),
        ));
    }
    let pt = |y: &[i64]| -> Vec<Int> {
        let mut q = base.clone();
        for (i, u) in units.iter().enumerate() {
            q = add_vec(&q, &scale_vec(&Int::from(y[i]), u));
        }
        q
    };
    let k = k_i64;
    let mut pieces: Vec<Vec<Vec<Int>>> = Vec::new();
    match d {
        1 => {
            for a in 0..k {
                pieces.push(vec![pt(&[a]), pt(&[a + 1])]);
            }
        }
        2 => {
            for a in 0..k {
                for b in 0..(k - a) {
                    pieces.push(vec![pt(&[a, b]), pt(&[a + 1, b]), pt(&[a, b + 1])]);
                }
            }
            for a in 0..k - 1 {
                for b in 0..(k - 1 - a) {
                    pieces.push(vec![
                        pt(&[a + 1, b]),
                        pt(&[a, b + 1]),
                        pt(&[a + 1, b + 1]),
                    ]);
                }
            }
        }
        3 => {
            for a in 0..k {
                for b in 0..(k - a) {
                    for c in 0..(k - a - b) {
                        pieces.push(vec![
                            pt(&[a, b, c]),
                            pt(&[a + 1, b, c]),
                            pt(&[a, b + 1, c]),
                            pt(&[a, b, c + 1]),
                        ]);
                    }
                }
            }
            for a in 0..k {
                for b in 0..k - a {
                    for c in 0..k - a - b {
                        if a + b + c <= k - 2 {
                            pieces.push(vec![
                                pt(&[a + 1, b, c]),
                                pt(&[a, b + 1, c]),
                                pt(&[a, b, c + 1]),
                                pt(&[a + 1, b + 1, c]),
                                pt(&[a + 1, b, c + 1]),
                                pt(&[a, b + 1, c + 1]),
                            ]);
                        }
                        if a + b + c <= k - 3 {
                            pieces.push(vec![
                                pt(&[a + 1, b + 1, c]),
                                pt(&[a + 1, b, c + 1]),
                                pt(&[a, b + 1, c + 1]),
                                pt(&[a + 1, b + 1, c + 1]),
                            ]);
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(pieces)
}

/// Coordinate and all-ones functionals with their value ranges over Ξ.
fn slab_functionals(xi: &LatticePolytope) -> Vec<(Vec<Int>, Int, Int)> {
    let nn = xi.ambient_dim;
    let mut us: Vec<Vec<Int>> = Vec::new();
    for i in 0..nn {
        let mut e = vec![Int::zero(); nn];
        e[i] = Int::one();
        us.push(e);
    }
    us.push(vec![Int::one(); nn]);
    us.into_iter()
        .map(|u| {
            let vals: Vec<Int> = xi.vertices.iter().map(|v| dot(&u, v)).collect();
            let lo = vals.iter().min().unwrap().clone();
            let hi = vals.iter().max().unwrap().clone();
            (u, lo, hi)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::fixtures;

    #[test]
    fn square_import() {
        let (cx, phi) =
            from_reflexive_polytope(&fixtures::reflexive_square(), false).unwrap();
        assert_eq!(cx.n, 1);
        assert_eq!(cx.cells_of_dim(0).len(), 4);
        assert_eq!(cx.cells_of_dim(1).len(), 4);
        assert!(cx.validate().is_valid(), "{:?}", cx.validate().violations);
        assert!(crate::complex::monodromy::check_positive(&cx, Exec::Sequential).unwrap());
        assert_eq!(phi.reps.len(), 4);
    }

    #[test]
    fn k3_coarse_import_counts_and_kappa() {
        // the projective-space simplex: 4 vertices, 6 edges, 4 triangles
        let xi = fixtures::projective_space_simplex(3);
        let (cx, _) = from_reflexive_polytope(&xi, false).unwrap();
        assert_eq!(cx.cells_of_dim(0).len(), 4);
        assert_eq!(cx.cells_of_dim(1).len(), 6);
        assert_eq!(cx.cells_of_dim(2).len(), 4);
        assert!(cx.validate().is_valid(), "{:?}", cx.validate().violations);
        // the coarse model bunches the discriminant: κ = 4 on every edge
        for rho in cx.cells_of_dim(1) {
            let k = crate::complex::monodromy::kappa(&cx, rho, rho).unwrap();
            assert_eq!(k, crate::lattice::int(4));
        }
    }

    #[test]
    fn quintic_coarse_import_counts() {
        let xi = fixtures::projective_space_simplex(4);
        let (cx, _) = from_reflexive_polytope(&xi, false).unwrap();
        assert_eq!(cx.cells_of_dim(0).len(), 5);
        assert_eq!(cx.cells_of_dim(1).len(), 10);
        assert_eq!(cx.cells_of_dim(2).len(), 10);
        assert_eq!(cx.cells_of_dim(3).len(), 5);
        assert!(cx.validate().is_valid());
    }

    #[test]
    fn k3_fine_import() {
        let xi = fixtures::anticanonical_simplex(3);
        let (cx, _) = from_reflexive_polytope(&xi, true).unwrap();
        assert_eq!(cx.cells_of_dim(0).len(), 34);
        assert_eq!(cx.cells_of_dim(1).len(), 96);
        assert_eq!(cx.cells_of_dim(2).len(), 64);
        let report = cx.validate();
        assert!(report.is_valid(), "{:?}", report.violations);
        assert!(crate::complex::monodromy::check_positive(&cx, Exec::Parallel).unwrap());
        // the 24 singular points of the quartic model, all with κ = 1
        let mut ones = 0;
        for rho in cx.cells_of_dim(1) {
            let k = crate::complex::monodromy::kappa(&cx, rho, rho).unwrap();
            if k == crate::lattice::int(1) {
                ones += 1;
            } else {
                assert!(k.is_zero(), "unexpected kappa {k}");
            }
        }
        assert_eq!(ones, 24);
    }

    #[test]
    fn non_reflexive_rejected() {
        let p = LatticePolytope::from_i64(vec![
            vec![2, 0],
            vec![0, 2],
            vec![-2, 0],
            vec![0, -2],
        ])
        .unwrap();
        assert!(matches!(from_reflexive_polytope(&p, false), Err(Error::NotReflexive(_))));
    }
}
