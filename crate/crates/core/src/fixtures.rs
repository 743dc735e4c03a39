//! Bundled example complexes and polytopes. The acceptance suite and
//! the CLI fixtures are all generated from here, so everything stays
//! reproducible offline.

use crate::complex::{Cell, IntegralAffineComplex, MPLFunction};
use crate::lattice::{int, int_vec, Int, IntMat};
use crate::polytope::LatticePolytope;
use std::collections::BTreeMap;

fn id_chart(n: usize) -> IntMat {
    IntMat::identity(n)
}

/// 2×2 grid torus: 4 vertices, 8 edges, 4 squares, identity charts.
pub fn torus_2d() -> IntegralAffineComplex {
    let vid = |i: usize, j: usize| (i % 2) + 2 * (j % 2);
    let hid = |i: usize, j: usize| 4 + (i % 2) + 2 * (j % 2);
    let wid = |i: usize, j: usize| 8 + (i % 2) + 2 * (j % 2);
    let sid = |i: usize, j: usize| 12 + (i % 2) + 2 * (j % 2);
    let mut cells = Vec::new();
    for v in 0..4 {
        cells.push(Cell { id: v, dim: 0, vertices: vec![v], faces: vec![] });
    }
    for i in 0..2 {
        for j in 0..2 {
            cells.push(Cell {
                id: hid(i, j),
                dim: 1,
                vertices: sorted2(vid(i, j), vid(i + 1, j)),
                faces: sorted2(vid(i, j), vid(i + 1, j)),
            });
            cells.push(Cell {
                id: wid(i, j),
                dim: 1,
                vertices: sorted2(vid(i, j), vid(i, j + 1)),
                faces: sorted2(vid(i, j), vid(i, j + 1)),
            });
        }
    }
    let mut geometry = BTreeMap::new();
    let mut charts = BTreeMap::new();
    let mut phi_reps: BTreeMap<usize, Vec<(usize, Vec<Int>)>> = BTreeMap::new();
    for i in 0..2 {
        for j in 0..2 {
            let s = sid(i, j);
            let vs =
                vec![vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)];
            let mut sv = vs.clone();
            sv.sort();
            sv.dedup();
            let faces = vec![hid(i, j), hid(i, j + 1), wid(i, j), wid(i + 1, j)];
            cells.push(Cell { id: s, dim: 2, vertices: sv, faces });
            let mut coords = BTreeMap::new();
            coords.insert(vid(i, j), int_vec(&[0, 0]));
            coords.insert(vid(i + 1, j), int_vec(&[1, 0]));
            coords.insert(vid(i, j + 1), int_vec(&[0, 1]));
            coords.insert(vid(i + 1, j + 1), int_vec(&[1, 1]));
            geometry.insert(s, coords);
            for v in [vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)] {
                charts.insert((v, s), id_chart(2));
            }
        }
    }
    // the standard strictly convex multi-valued function of the cube
    // decomposition: at each vertex, functionals 0, x, y, x+y on the four
    // quadrant cones (the local model of (1/2)Σx_i²-style bending)
    for v in 0..4usize {
        let mut reps = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                let s = sid(i, j);
                if !cells.iter().any(|c| c.id == s && c.vertices.contains(&v)) {
                    continue;
                }
                // functional on the wedge of s at v: pick e_k where the wedge
                // direction is negative; equals max(0, -x) style bending
                let coords = &geometry[&s];
                let base = &coords[&v];
                let mut f = vec![Int::from(0); 2];
                for w in cells.iter().find(|c| c.id == s).unwrap().vertices.iter() {
                    let d = crate::lattice::sub_vec(&coords[w], base);
                    for k in 0..2 {
                        if d[k] < Int::from(0) {
                            f[k] = int(-1);
                        }
                    }
                }
                reps.push((s, f));
            }
        }
        reps.sort();
        reps.dedup();
        phi_reps.insert(v, reps);
    }
    IntegralAffineComplex::new(
        2,
        cells,
        geometry,
        charts,
        Some(MPLFunction { reps: phi_reps }),
    )
    .expect("torus_2d is well formed")
}

fn sorted2(a: usize, b: usize) -> Vec<usize> {
    let mut v = vec![a, b];
    v.sort();
    v.dedup();
    v
}

/// 2×2×2 grid torus in three dimensions.
pub fn torus_3d() -> IntegralAffineComplex {
    let vid = |i: usize, j: usize, k: usize| (i % 2) + 2 * (j % 2) + 4 * (k % 2);
    let idx = |i: usize, j: usize, k: usize| (i % 2) + 2 * (j % 2) + 4 * (k % 2);
    let e_id = |d: usize, i: usize, j: usize, k: usize| 8 + 8 * d + idx(i, j, k);
    let f_id = |d: usize, i: usize, j: usize, k: usize| 32 + 8 * d + idx(i, j, k);
    let c_id = |i: usize, j: usize, k: usize| 56 + idx(i, j, k);
    let step = |p: (usize, usize, usize), d: usize| match d {
        0 => (p.0 + 1, p.1, p.2),
        1 => (p.0, p.1 + 1, p.2),
        _ => (p.0, p.1, p.2 + 1),
    };
    let mut cells = Vec::new();
    for v in 0..8 {
        cells.push(Cell { id: v, dim: 0, vertices: vec![v], faces: vec![] });
    }
    for d in 0..3 {
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let a = (i, j, k);
                    let b = step(a, d);
                    let vs = sorted2(vid(a.0, a.1, a.2), vid(b.0, b.1, b.2));
                    cells.push(Cell {
                        id: e_id(d, i, j, k),
                        dim: 1,
                        vertices: vs.clone(),
                        faces: vs,
                    });
                }
            }
        }
    }
    // 2-faces: d is the orientation (0: yz, 1: xz, 2: xy spans the two
    // directions other than d)
    for d in 0..3 {
        let (d1, d2) = match d {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let a = (i, j, k);
                    let b = step(a, d1);
                    let c = step(a, d2);
                    let bc = step(b, d2);
                    let mut vs = vec![
                        vid(a.0, a.1, a.2),
                        vid(b.0, b.1, b.2),
                        vid(c.0, c.1, c.2),
                        vid(bc.0, bc.1, bc.2),
                    ];
                    vs.sort();
                    vs.dedup();
                    let faces = vec![
                        e_id(d1, a.0, a.1, a.2),
                        e_id(d1, c.0, c.1, c.2),
                        e_id(d2, a.0, a.1, a.2),
                        e_id(d2, b.0, b.1, b.2),
                    ];
                    cells.push(Cell { id: f_id(d, i, j, k), dim: 2, vertices: vs, faces });
                }
            }
        }
    }
    let mut geometry = BTreeMap::new();
    let mut charts = BTreeMap::new();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let cid = c_id(i, j, k);
                let mut vs = Vec::new();
                let mut coords = BTreeMap::new();
                for di in 0..2 {
                    for dj in 0..2 {
                        for dk in 0..2 {
                            let v = vid(i + di, j + dj, k + dk);
                            vs.push(v);
                            coords.insert(
                                v,
                                int_vec(&[di as i64, dj as i64, dk as i64]),
                            );
                        }
                    }
                }
                vs.sort();
                vs.dedup();
                let faces = vec![
                    f_id(0, i, j, k),
                    f_id(0, i + 1, j, k),
                    f_id(1, i, j, k),
                    f_id(1, i, j + 1, k),
                    f_id(2, i, j, k),
                    f_id(2, i, j, k + 1),
                ];
                cells.push(Cell { id: cid, dim: 3, vertices: vs.clone(), faces });
                geometry.insert(cid, coords);
                for v in vs {
                    charts.insert((v, cid), id_chart(3));
                }
            }
        }
    }
    IntegralAffineComplex::new(3, cells, geometry, charts, None)
        .expect("torus_3d is well formed")
}

/// Two unit squares sharing one edge; the chart of the far vertex
/// through the lower square is twisted so the loop around the shared
/// edge is the shear `[[1, κ], [0, 1]]`. A germ, not a closed manifold.
pub fn shear_fixture(kappa: i64) -> IntegralAffineComplex {
    let mut cells = Vec::new();
    for v in 0..6 {
        cells.push(Cell { id: v, dim: 0, vertices: vec![v], faces: vec![] });
    }
    let edge = |id: usize, a: usize, b: usize| Cell {
        id,
        dim: 1,
        vertices: sorted2(a, b),
        faces: sorted2(a, b),
    };
    cells.push(edge(6, 0, 1)); // the wall
    cells.push(edge(7, 0, 2));
    cells.push(edge(8, 1, 3));
    cells.push(edge(9, 2, 3));
    cells.push(edge(10, 0, 4));
    cells.push(edge(11, 1, 5));
    cells.push(edge(12, 4, 5));
    cells.push(Cell { id: 13, dim: 2, vertices: vec![0, 1, 2, 3], faces: vec![6, 7, 8, 9] });
    cells.push(Cell { id: 14, dim: 2, vertices: vec![0, 1, 4, 5], faces: vec![6, 10, 11, 12] });
    let mut geometry = BTreeMap::new();
    let mut up = BTreeMap::new();
    up.insert(0, int_vec(&[0, 0]));
    up.insert(1, int_vec(&[1, 0]));
    up.insert(2, int_vec(&[0, 1]));
    up.insert(3, int_vec(&[1, 1]));
    geometry.insert(13, up);
    let mut dn = BTreeMap::new();
    dn.insert(0, int_vec(&[0, 0]));
    dn.insert(1, int_vec(&[1, 0]));
    dn.insert(4, int_vec(&[0, -1]));
    dn.insert(5, int_vec(&[1, -1]));
    geometry.insert(14, dn);
    let mut charts = BTreeMap::new();
    for v in [0, 1, 2, 3] {
        charts.insert((v, 13), id_chart(2));
    }
    for v in [0, 1, 4, 5] {
        charts.insert((v, 14), id_chart(2));
    }
    charts.insert((1, 14), IntMat::from_rows(vec![vec![1, -kappa], vec![0, 1]]));
    charts.insert((5, 14), IntMat::from_rows(vec![vec![1, -kappa], vec![0, 1]]));
    IntegralAffineComplex::new(2, cells, geometry, charts, None)
        .expect("shear fixture is well formed")
}

/// The shared wall of the shear fixture.
pub fn shear_fixture_wall(_cx: &IntegralAffineComplex) -> usize {
    6
}

/// A fixture whose loop transport has rank-two `T − id`.
pub fn not_shear_fixture() -> IntegralAffineComplex {
    let mut cx = shear_fixture(0);
    cx.charts.insert((1, 14), IntMat::from_rows(vec![vec![0, -1], vec![1, 0]]));
    cx
}

/// Closed flat-in-pieces torus whose vertical holonomy is the shear
/// `[[1, k], [0, 1]]`: the charts of the top-row squares at the wrapped
/// vertices are twisted. No discriminant (all facet loops trivial), but
/// the global monodromy of Λ is the ℤ/k shear quotient.
pub fn nil_torus(k: i64) -> IntegralAffineComplex {
    let mut cx = torus_2d();
    let t = IntMat::from_rows(vec![vec![1, k], vec![0, 1]]);
    // squares 12 + i + 2j with j = 1 are the top row; their vertices at
    // y-level 0 (ids 0 and 1) wrap around
    for i in 0..2usize {
        let s = 12 + i + 2;
        for v in [0usize, 1] {
            cx.charts.insert((v, s), t.clone());
        }
    }
    cx
}

// ------------------------------------------------------- polytopes

/// conv{±e1, ±e2}: the reflexive square.
pub fn reflexive_square() -> LatticePolytope {
    LatticePolytope::from_i64(vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]])
        .expect("reflexive square")
}

/// conv{e1, …, e_n, −(e1+…+e_n)}: the "small" reflexive simplex whose
/// boundary fan is projective n-space.
pub fn projective_space_simplex(n: usize) -> LatticePolytope {
    let mut pts = Vec::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        pts.push(e);
    }
    pts.push(vec![-1i64; n]);
    LatticePolytope::from_i64(pts).expect("projective space simplex")
}

/// `(n+1)Δ^n − 𝟙`: the Newton polytope of the anticanonical hypersurface
/// of degree n+1, i.e. the polar dual of `projective_space_simplex(n)`.
pub fn anticanonical_simplex(n: usize) -> LatticePolytope {
    let k = (n + 1) as i64;
    let mut pts = vec![vec![-1i64; n]];
    for i in 0..n {
        let mut p = vec![-1i64; n];
        p[i] += k;
        pts.push(p);
    }
    LatticePolytope::from_i64(pts).expect("anticanonical simplex")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_3d_validates() {
        let cx = torus_3d();
        let report = cx.validate();
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(cx.cells_of_dim(0).len(), 8);
        assert_eq!(cx.cells_of_dim(1).len(), 24);
        assert_eq!(cx.cells_of_dim(2).len(), 24);
        assert_eq!(cx.cells_of_dim(3).len(), 8);
    }

    #[test]
    fn polytope_fixture_shapes() {
        assert_eq!(reflexive_square().vertex_count(), 4);
        let p3 = projective_space_simplex(3);
        assert_eq!(p3.vertex_count(), 4);
        assert_eq!(p3.lattice_points().unwrap().len(), 5);
        let a3 = anticanonical_simplex(3);
        assert_eq!(a3.vertex_count(), 4);
        assert_eq!(a3.lattice_points().unwrap().len(), 35);
    }
}
