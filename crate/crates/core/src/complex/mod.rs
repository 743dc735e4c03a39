//! The data model for `(B, P)`: cell poset, per-maximal-cell lattice
//! geometry, integral affine charts per (vertex, maximal cell), and the
//! structure validation report.

pub mod legendre;
pub mod monodromy;
pub mod radiance;
pub mod reflexive;
pub mod simplicity;
pub mod transport;

use crate::error::{Error, Result};
use crate::lattice::{int, Int, IntMat};
use crate::polytope::LatticePolytope;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub use transport::ChartTransport;

#[derive(Clone, Debug)]
pub struct Cell {
    pub id: usize,
    pub dim: usize,
    pub vertices: Vec<usize>,
    /// immediate (codimension-one) faces
    pub faces: Vec<usize>,
}

/// A multi-valued piecewise linear function: one local representative
/// per vertex, given as one functional per maximal cell at that vertex,
/// in the chart coordinates at the vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MPLFunction {
    pub reps: BTreeMap<usize, Vec<(usize, Vec<Int>)>>,
}

#[derive(Clone, Debug)]
pub struct IntegralAffineComplex {
    pub n: usize,
    pub cells: BTreeMap<usize, Cell>,
    /// per maximal cell: vertex id -> intrinsic coordinates in ℤ^n
    pub geometry: BTreeMap<usize, BTreeMap<usize, Vec<Int>>>,
    /// per (vertex, maximal cell): unimodular chart matrix
    pub charts: BTreeMap<(usize, usize), IntMat>,
    pub phi: Option<MPLFunction>,
    /// transitive closure: cell -> all subcells (including itself)
    subcells: BTreeMap<usize, BTreeSet<usize>>,
    /// cell -> all cells containing it (including itself)
    cofaces: BTreeMap<usize, BTreeSet<usize>>,
}

// ---------------------------------------------------------------- JSON

#[derive(Serialize, Deserialize)]
struct CellJson {
    id: usize,
    dim: usize,
    vertices: Vec<usize>,
    faces: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GeometryJson {
    vertex_coords: BTreeMap<String, Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct ChartJson {
    vertex: usize,
    cell: usize,
    matrix: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct PhiEntryJson {
    cell: usize,
    functional: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    dim: usize,
    cells: Vec<CellJson>,
    maximal_geometry: BTreeMap<String, GeometryJson>,
    charts: Vec<ChartJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<BTreeMap<String, Vec<PhiEntryJson>>>,
}

impl IntegralAffineComplex {
    pub fn new(
        n: usize,
        cells: Vec<Cell>,
        geometry: BTreeMap<usize, BTreeMap<usize, Vec<Int>>>,
        charts: BTreeMap<(usize, usize), IntMat>,
        phi: Option<MPLFunction>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for c in cells {
            if map.insert(c.id, c).is_some() {
                return Err(Error::Invalid("duplicate cell id".into()));
            }
        }
        let mut cx = IntegralAffineComplex {
            n,
            cells: map,
            geometry,
            charts,
            phi,
            subcells: BTreeMap::new(),
            cofaces: BTreeMap::new(),
        };
        cx.build_closure()?;
        Ok(cx)
    }

    fn build_closure(&mut self) -> Result<()> {
        for c in self.cells.values() {
            for f in &c.faces {
                if !self.cells.contains_key(f) {
                    return Err(Error::BadCell(c.id, format!("missing face id {f}")));
                }
            }
        }
        let ids: Vec<usize> = self.cells.keys().copied().collect();
        let mut sub: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        let mut by_dim = ids.clone();
        by_dim.sort_by_key(|id| self.cells[id].dim);
        for id in by_dim {
            let mut s: BTreeSet<usize> = BTreeSet::new();
            s.insert(id);
            for f in self.cells[&id].faces.clone() {
                if let Some(fs) = sub.get(&f) {
                    s.extend(fs.iter().copied());
                } else {
                    return Err(Error::BadCell(id, "face poset is not graded by dim".into()));
                }
            }
            sub.insert(id, s);
        }
        let mut cof: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for id in &ids {
            for s in &sub[id] {
                cof.entry(*s).or_default().insert(*id);
            }
        }
        self.subcells = sub;
        self.cofaces = cof;
        Ok(())
    }

    pub fn maximal_cells(&self) -> Vec<usize> {
        self.cells.values().filter(|c| c.dim == self.n).map(|c| c.id).collect()
    }

    pub fn cells_of_dim(&self, d: usize) -> Vec<usize> {
        self.cells.values().filter(|c| c.dim == d).map(|c| c.id).collect()
    }

    pub fn subcells(&self, id: usize) -> &BTreeSet<usize> {
        &self.subcells[&id]
    }

    pub fn contains_cell(&self, big: usize, small: usize) -> bool {
        self.subcells[&big].contains(&small)
    }

    pub fn cofaces(&self, id: usize) -> &BTreeSet<usize> {
        &self.cofaces[&id]
    }

    pub fn maximal_containing(&self, id: usize) -> Vec<usize> {
        self.cofaces[&id].iter().copied().filter(|c| self.cells[c].dim == self.n).collect()
    }

    pub fn codim1_containing(&self, id: usize) -> Vec<usize> {
        self.cofaces[&id]
            .iter()
            .copied()
            .filter(|c| self.cells[c].dim + 1 == self.n)
            .collect()
    }

    /// Deterministic base vertex of a cell: the minimal vertex id.
    pub fn base_vertex(&self, id: usize) -> usize {
        *self.cells[&id].vertices.iter().min().expect("cell has vertices")
    }

    /// The designated maximal cell for transports touching `id`: lowest id.
    pub fn designated_maximal(&self, id: usize) -> usize {
        *self.maximal_containing(id).iter().min().expect("cell lies in a maximal cell")
    }

    pub fn coord(&self, sigma: usize, vertex: usize) -> &Vec<Int> {
        &self.geometry[&sigma][&vertex]
    }

    pub fn chart(&self, vertex: usize, sigma: usize) -> &IntMat {
        &self.charts[&(vertex, sigma)]
    }

    /// ψ_{v,σ}(x) = A_{v,σ}(coord_σ(x) − coord_σ(v)) for a vertex x of σ.
    pub fn psi(&self, v: usize, sigma: usize, x: usize) -> Vec<Int> {
        let a = self.chart(v, sigma);
        let d = crate::lattice::sub_vec(self.coord(sigma, x), self.coord(sigma, v));
        a.mul_vec(&d)
    }

    /// Chart-to-chart transport from `v_from` to `v_to` through `sigma`.
    pub fn transport(&self, v_from: usize, v_to: usize, sigma: usize) -> ChartTransport {
        let af = self.chart(v_from, sigma);
        let at = self.chart(v_to, sigma);
        let linear = at.mul(&af.inv_unimodular());
        let translation = self.psi(v_to, sigma, v_from);
        ChartTransport { linear, translation }
    }

    /// Spec-facing operation: the unimodular linear part of the
    /// transition ψ_{v',σ}∘ψ_{v,σ}^{-1}.
    pub fn parallel_transport(&self, v: usize, v_prime: usize, sigma: usize) -> Result<IntMat> {
        let cell = self.cells.get(&sigma).ok_or(Error::BadCell(sigma, "no such cell".into()))?;
        if !cell.vertices.contains(&v) || !cell.vertices.contains(&v_prime) {
            return Err(Error::BadCell(sigma, format!("{v} or {v_prime} not a vertex")));
        }
        Ok(self.transport(v, v_prime, sigma).linear)
    }

    /// The polytope of a maximal cell in its intrinsic coordinates.
    pub fn cell_polytope(&self, sigma: usize) -> Result<LatticePolytope> {
        let coords: Vec<Vec<Int>> = self.geometry[&sigma].values().cloned().collect();
        LatticePolytope::from_points(coords)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<CellJson> = self
            .cells
            .values()
            .map(|c| CellJson {
                id: c.id,
                dim: c.dim,
                vertices: c.vertices.clone(),
                faces: c.faces.clone(),
            })
            .collect();
        let maximal_geometry: BTreeMap<String, GeometryJson> = self
            .geometry
            .iter()
            .map(|(cid, m)| {
                (
                    cid.to_string(),
                    GeometryJson {
                        vertex_coords: m
                            .iter()
                            .map(|(v, coords)| {
                                (v.to_string(), coords.iter().map(int_to_i64).collect())
                            })
                            .collect(),
                    },
                )
            })
            .collect();
        let charts: Vec<ChartJson> = self
            .charts
            .iter()
            .map(|((v, c), m)| ChartJson {
                vertex: *v,
                cell: *c,
                matrix: (0..m.rows)
                    .map(|i| (0..m.cols).map(|j| int_to_i64(&m[(i, j)])).collect())
                    .collect(),
            })
            .collect();
        let phi = self.phi.as_ref().map(|p| {
            p.reps
                .iter()
                .map(|(v, entries)| {
                    (
                        v.to_string(),
                        entries
                            .iter()
                            .map(|(c, f)| PhiEntryJson {
                                cell: *c,
                                functional: f.iter().map(int_to_i64).collect(),
                            })
                            .collect(),
                    )
                })
                .collect()
        });
        serde_json::to_value(ComplexJson { dim: self.n, cells, maximal_geometry, charts, phi })
            .expect("complex serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let cj: ComplexJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let cells: Vec<Cell> = cj
            .cells
            .into_iter()
            .map(|c| Cell { id: c.id, dim: c.dim, vertices: c.vertices, faces: c.faces })
            .collect();
        let mut geometry = BTreeMap::new();
        for (k, g) in cj.maximal_geometry {
            let cid: usize = k.parse().map_err(|_| Error::Parse(format!("bad cell key {k}")))?;
            let mut m = BTreeMap::new();
            for (vk, coords) in g.vertex_coords {
                let vid: usize =
                    vk.parse().map_err(|_| Error::Parse(format!("bad vertex key {vk}")))?;
                m.insert(vid, coords.iter().map(|&x| int(x)).collect());
            }
            geometry.insert(cid, m);
        }
        let mut charts = BTreeMap::new();
        for c in cj.charts {
            let rows = c.matrix.len();
            let cols = c.matrix.first().map_or(0, |r| r.len());
            let m = IntMat::from_fn(rows, cols, |i, j| int(c.matrix[i][j]));
            charts.insert((c.vertex, c.cell), m);
        }
        let phi = match cj.phi {
            None => None,
            Some(p) => {
                let mut reps = BTreeMap::new();
                for (vk, entries) in p {
                    let vid: usize =
                        vk.parse().map_err(|_| Error::Parse(format!("bad vertex key {vk}")))?;
                    reps.insert(
                        vid,
                        entries
                            .into_iter()
                            .map(|e| (e.cell, e.functional.iter().map(|&x| int(x)).collect()))
                            .collect(),
                    );
                }
                Some(MPLFunction { reps })
            }
        };
        Self::new(cj.dim, cells, geometry, charts, phi)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for c in self.cells.values() {
            if c.dim == 0 && (c.vertices.len() != 1 || c.vertices[0] != c.id) {
                violations.push(Violation::new(
                    "vertex-cell",
                    vec![c.id],
                    "dimension-zero cell must list exactly itself as vertex",
                ));
            }
            for f in &c.faces {
                let fc = &self.cells[f];
                if fc.dim + 1 != c.dim {
                    violations.push(Violation::new(
                        "face-grading",
                        vec![c.id, *f],
                        "immediate face is not of codimension one",
                    ));
                }
                if !fc.vertices.iter().all(|v| c.vertices.contains(v)) {
                    violations.push(Violation::new(
                        "face-vertices",
                        vec![c.id, *f],
                        "face has vertices outside its carrier",
                    ));
                }
            }
        }
        for rho in self.cells_of_dim(self.n.saturating_sub(1)) {
            let cnt = self.maximal_containing(rho).len();
            if cnt != 2 {
                violations.push(Violation::new(
                    "manifold",
                    vec![rho],
                    &format!("codimension-one cell lies in {cnt} maximal cells (expected 2)"),
                ));
            }
        }
        for sigma in self.maximal_cells() {
            let Some(geo) = self.geometry.get(&sigma) else {
                violations.push(Violation::new("geometry", vec![sigma], "missing vertex_coords"));
                continue;
            };
            let cell = &self.cells[&sigma];
            if geo.len() != cell.vertices.len()
                || !cell.vertices.iter().all(|v| geo.contains_key(v))
            {
                violations.push(Violation::new(
                    "geometry",
                    vec![sigma],
                    "vertex_coords do not match the vertex list",
                ));
                continue;
            }
            match self.cell_polytope(sigma) {
                Ok(p) => {
                    if p.dim != self.n {
                        violations.push(Violation::new(
                            "geometry",
                            vec![sigma],
                            "maximal cell is not full-dimensional",
                        ));
                    }
                    if p.vertex_count() != cell.vertices.len() {
                        violations.push(Violation::new(
                            "geometry",
                            vec![sigma],
                            "vertex coordinates are not in convex position",
                        ));
                    }
                }
                Err(e) => violations.push(Violation::new(
                    "geometry",
                    vec![sigma],
                    &format!("bad polytope: {e}"),
                )),
            }
            for v in &cell.vertices {
                match self.charts.get(&(*v, sigma)) {
                    None => violations.push(Violation::new(
                        "chart-missing",
                        vec![*v, sigma],
                        "missing chart",
                    )),
                    Some(a) => {
                        if !a.is_unimodular() {
                            violations.push(Violation::new(
                                "chart-determinant",
                                vec![*v, sigma],
                                &format!("chart determinant {} is not ±1", a.det()),
                            ));
                        }
                    }
                }
            }
        }
        if violations
            .iter()
            .any(|v| matches!(v.code.as_str(), "chart-missing" | "chart-determinant" | "geometry"))
        {
            return ValidationReport { violations };
        }
        // chart compatibility across shared faces at each vertex
        for v in self.cells_of_dim(0) {
            let stars: Vec<usize> = self.maximal_containing(v);
            for (i, &s1) in stars.iter().enumerate() {
                for &s2 in &stars[i + 1..] {
                    let shared: Vec<usize> = self
                        .cofaces(v)
                        .iter()
                        .copied()
                        .filter(|t| self.contains_cell(s1, *t) && self.contains_cell(s2, *t))
                        .collect();
                    for t in shared {
                        for x in self.cells[&t].vertices.clone() {
                            if self.psi(v, s1, x) != self.psi(v, s2, x) {
                                violations.push(Violation::new(
                                    "chart-compatibility",
                                    vec![v, s1, s2, t],
                                    "charts disagree on a shared face",
                                ));
                            }
                        }
                    }
                }
            }
        }
        // wall matching of the fan structure at each vertex
        for v in self.cells_of_dim(0) {
            for rho in self.codim1_containing(v) {
                let sides = self.maximal_containing(rho);
                if sides.len() != 2 {
                    continue;
                }
                let img = |sigma: usize| -> Vec<Vec<Int>> {
                    self.cells[&rho].vertices.iter().map(|&x| self.psi(v, sigma, x)).collect()
                };
                let a = img(sides[0]);
                let b = img(sides[1]);
                if a != b {
                    violations.push(Violation::new(
                        "fan-wall",
                        vec![v, rho],
                        "wedge of a codimension-one cell differs between its two sides",
                    ));
                }
            }
        }
        ValidationReport { violations }
    }
}

fn int_to_i64(x: &Int) -> i64 {
    x.to_string().parse::<i64>().expect("coordinate fits in i64")
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub code: String,
    pub cells: Vec<usize>,
    pub message: String,
}

impl Violation {
    fn new(code: &str, cells: Vec<usize>, message: &str) -> Self {
        Violation { code: code.into(), cells, message: message.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn torus_grid_validates() {
        let cx = fixtures::torus_2d();
        let report = cx.validate();
        assert!(report.is_valid(), "{:?}", report.violations);
    }

    #[test]
    fn bad_chart_determinant_flagged() {
        let mut cx = fixtures::torus_2d();
        let sigma = cx.maximal_cells()[0];
        let v = cx.cells[&sigma].vertices[0];
        cx.charts.insert((v, sigma), IntMat::from_rows(vec![vec![2, 0], vec![0, 1]]));
        let report = cx.validate();
        assert!(report.violations.iter().any(|x| x.code == "chart-determinant"));
    }

    #[test]
    fn manifold_violation_flagged() {
        let cx = fixtures::torus_2d();
        let sigma = cx.maximal_cells()[0];
        let cells: Vec<Cell> = cx.cells.values().filter(|c| c.id != sigma).cloned().collect();
        let mut geometry = cx.geometry.clone();
        geometry.remove(&sigma);
        let charts = cx
            .charts
            .iter()
            .filter(|((_, c), _)| *c != sigma)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        let cx2 = IntegralAffineComplex::new(2, cells, geometry, charts, None).unwrap();
        let report = cx2.validate();
        assert!(report.violations.iter().any(|x| x.code == "manifold"));
    }

    #[test]
    fn json_round_trip() {
        let cx = fixtures::torus_2d();
        let j = cx.to_json();
        let cx2 = IntegralAffineComplex::from_json(&j).unwrap();
        assert_eq!(cx2.to_json(), j);
        let text = serde_json::to_string_pretty(&j).unwrap();
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn parallel_transport_torus_identity() {
        let cx = fixtures::torus_2d();
        for sigma in cx.maximal_cells() {
            let vs = cx.cells[&sigma].vertices.clone();
            for &v in &vs {
                for &w in &vs {
                    assert!(cx.parallel_transport(v, w, sigma).unwrap().is_identity());
                }
            }
        }
    }
}
