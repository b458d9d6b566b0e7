//! Face-based polytopal meshes.
//!
//! Cells are arbitrary star-shaped polytopes with planar faces. Faces are
//! stored globally once and referenced by the one or two adjacent cells; the
//! stored unit normal points away from the first adjacent cell (the owner).
//! Non-matching interfaces (hanging nodes) are representable because a "face"
//! is any admissible planar sub-face, with no conformity requirement across a
//! cell's boundary.
//!
//! A mesh is immutable after construction; transforms return new meshes.

mod generate;
mod io;
mod transform;

pub use generate::{generate_structured, CellType};
pub use io::{export_mesh, import_mesh, MeshFormat};
pub use transform::{agglomerate, perturb_nodes};

use nalgebra::Vector3;
use thiserror::Error;

pub type Vec3 = Vector3<f64>;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("degenerate domain box on axis {axis}")]
    DegenerateBox { axis: usize },
    #[error("invalid divisions: every axis needs at least one cell")]
    InvalidDivisions,
    #[error("face {face} is non-planar (deviation {deviation:.3e} exceeds {limit:.3e})")]
    NonplanarFace {
        face: usize,
        deviation: f64,
        limit: f64,
    },
    #[error("face {face} referenced by {count} cells")]
    BadFaceAdjacency { face: usize, count: usize },
    #[error("cell {cell} has non-positive volume {volume:.3e}")]
    NonPositiveVolume { cell: usize, volume: f64 },
    #[error("face {face} has non-positive measure")]
    NonPositiveMeasure { face: usize },
    #[error("merge fraction {0} outside [0, 0.5]")]
    BadMergeFraction(f64),
    #[error("node perturbation is only supported for 2D meshes")]
    PerturbUnsupported,
    #[error("perturbation amplitude {amplitude:.3e} exceeds half the minimum edge length {limit:.3e}")]
    PerturbTooLarge { amplitude: f64, limit: f64 },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Unsupported(String),
}

/// Boundary classification of a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceTag {
    Interior,
    Dirichlet(u32),
    Neumann(u32),
}

impl FaceTag {
    pub fn is_boundary(self) -> bool {
        !matches!(self, FaceTag::Interior)
    }

    pub fn group(self) -> Option<u32> {
        match self {
            FaceTag::Interior => None,
            FaceTag::Dirichlet(g) | FaceTag::Neumann(g) => Some(g),
        }
    }
}

/// A planar face: a segment in 2D, a polygon loop in 3D.
#[derive(Debug, Clone)]
pub struct Face {
    /// Vertex loop; its orientation defines `normal` (outward for `cells[0]`).
    pub vertices: Vec<usize>,
    /// Adjacent cells; `cells[0]` is the owner, `cells[1]` is set for interfaces.
    pub cells: [Option<usize>; 2],
    pub normal: Vec3,
    pub barycenter: Vec3,
    /// Length in 2D, area in 3D.
    pub measure: f64,
    pub diameter: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellShape {
    Simplex,
    /// Axis-aligned rectangle or box; admits tensorized Gauss quadrature.
    AxisBox,
    Polytope,
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub faces: Vec<usize>,
    pub barycenter: Vec3,
    pub volume: f64,
    pub diameter: f64,
    pub shape: CellShape,
}

#[derive(Debug, Clone)]
pub struct Mesh {
    dim: usize,
    vertices: Vec<Vec3>,
    faces: Vec<Face>,
    cells: Vec<Cell>,
    tags: Vec<FaceTag>,
}

/// A simplex of the star decomposition of a cell: the apex together with
/// `dim` base vertices, oriented so that `signed_volume > 0` means the base
/// is outward-facing.
#[derive(Debug, Clone)]
pub struct FanSimplex {
    pub apex: Vec3,
    pub base: Vec<Vec3>,
    pub signed_volume: f64,
    /// Index of the face this base belongs to.
    pub face: usize,
}

impl Mesh {
    /// Assembles a mesh from raw topology, deriving all geometric caches.
    ///
    /// Face loops define face normals (2D: left-to-right segment normal
    /// `(t_y, -t_x)`; 3D: Newell right-hand rule). Owner/neighbor roles are
    /// resolved geometrically: the owner is the adjacent cell the normal
    /// points away from.
    pub fn assemble(
        dim: usize,
        vertices: Vec<Vec3>,
        face_loops: Vec<Vec<usize>>,
        cell_faces: Vec<Vec<usize>>,
        tags: Option<Vec<FaceTag>>,
    ) -> Result<Mesh, MeshError> {
        assert!(dim == 2 || dim == 3, "dim must be 2 or 3");
        let mut faces: Vec<Face> = Vec::with_capacity(face_loops.len());
        for (fid, loop_) in face_loops.iter().enumerate() {
            faces.push(face_geometry(dim, &vertices, fid, loop_)?);
        }

        // adjacency
        for (cid, cf) in cell_faces.iter().enumerate() {
            for &fid in cf {
                let face = &mut faces[fid];
                if face.cells[0].is_none() {
                    face.cells[0] = Some(cid);
                } else if face.cells[1].is_none() {
                    face.cells[1] = Some(cid);
                } else {
                    return Err(MeshError::BadFaceAdjacency { face: fid, count: 3 });
                }
            }
        }

        // owner resolution: the vertex mean of each cell sits on the inner
        // side of all its face planes for the star-shaped cells we support
        let mut cells: Vec<Cell> = Vec::with_capacity(cell_faces.len());
        for (cid, cf) in cell_faces.iter().enumerate() {
            let ref_point = vertex_mean(&vertices, cf, &faces);
            for &fid in cf {
                let f = &mut faces[fid];
                let outward = (f.barycenter - ref_point).dot(&f.normal) > 0.0;
                if !outward && f.cells[0] == Some(cid) {
                    // flip roles or flip the stored orientation
                    if let Some(other) = f.cells[1] {
                        f.cells = [Some(other), Some(cid)];
                    } else {
                        f.vertices.reverse();
                        f.normal = -f.normal;
                    }
                } else if outward && f.cells[1] == Some(cid) {
                    let first = f.cells[0].unwrap();
                    f.cells = [Some(cid), Some(first)];
                }
            }
        }

        for (cid, cf) in cell_faces.iter().enumerate() {
            let cell = cell_geometry(dim, &vertices, &faces, cid, cf)?;
            cells.push(cell);
        }

        let tags = match tags {
            Some(t) => {
                assert_eq!(t.len(), faces.len());
                t
            }
            None => faces
                .iter()
                .map(|f| {
                    if f.cells[1].is_some() {
                        FaceTag::Interior
                    } else {
                        FaceTag::Dirichlet(0)
                    }
                })
                .collect(),
        };

        Ok(Mesh {
            dim,
            vertices,
            faces,
            cells,
            tags,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn vertex(&self, v: usize) -> Vec3 {
        self.vertices[v]
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn cell(&self, c: usize) -> &Cell {
        &self.cells[c]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn tag(&self, f: usize) -> FaceTag {
        self.tags[f]
    }

    pub fn tags(&self) -> &[FaceTag] {
        &self.tags
    }

    pub fn interior_faces(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(|&f| self.faces[f].cells[1].is_some())
    }

    pub fn boundary_faces(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(|&f| self.faces[f].cells[1].is_none())
    }

    /// Largest cell diameter.
    pub fn mesh_size(&self) -> f64 {
        self.cells.iter().map(|c| c.diameter).fold(0.0, f64::max)
    }

    pub fn total_volume(&self) -> f64 {
        self.cells.iter().map(|c| c.volume).sum()
    }

    /// Outward unit normal of `face` as seen from `cell`.
    pub fn outward_normal(&self, face: usize, cell: usize) -> Vec3 {
        let f = &self.faces[face];
        if f.cells[0] == Some(cell) {
            f.normal
        } else {
            debug_assert_eq!(f.cells[1], Some(cell));
            -f.normal
        }
    }

    /// Face vertex loop oriented outward for `cell`.
    pub fn face_loop_for_cell(&self, face: usize, cell: usize) -> Vec<usize> {
        let f = &self.faces[face];
        if f.cells[0] == Some(cell) {
            f.vertices.clone()
        } else {
            let mut v = f.vertices.clone();
            v.reverse();
            v
        }
    }

    /// All vertex ids of a cell (deduplicated, ascending).
    pub fn cell_vertices(&self, cell: usize) -> Vec<usize> {
        let mut vs: Vec<usize> = self.cells[cell]
            .faces
            .iter()
            .flat_map(|&f| self.faces[f].vertices.iter().copied())
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Star decomposition of `cell` around `apex` into oriented simplices,
    /// one per face sub-simplex. All signed volumes are positive exactly when
    /// `cell` is star-shaped with respect to `apex`.
    pub fn fan_simplices(&self, cell: usize, apex: Vec3) -> Vec<FanSimplex> {
        let mut out = Vec::new();
        for &fid in &self.cells[cell].faces {
            let loop_ = self.face_loop_for_cell(fid, cell);
            if self.dim == 2 {
                let b0 = self.vertices[loop_[0]];
                let b1 = self.vertices[loop_[1]];
                let sv = cross2(b0 - apex, b1 - apex) / 2.0;
                out.push(FanSimplex {
                    apex,
                    base: vec![b0, b1],
                    signed_volume: sv,
                    face: fid,
                });
            } else if loop_.len() == 3 {
                let b: Vec<Vec3> = loop_.iter().map(|&v| self.vertices[v]).collect();
                let sv = (b[0] - apex).cross(&(b[1] - apex)).dot(&(b[2] - apex)) / 6.0;
                out.push(FanSimplex {
                    apex,
                    base: b,
                    signed_volume: sv,
                    face: fid,
                });
            } else {
                let fb = self.faces[fid].barycenter;
                for i in 0..loop_.len() {
                    let b0 = fb;
                    let b1 = self.vertices[loop_[i]];
                    let b2 = self.vertices[loop_[(i + 1) % loop_.len()]];
                    let sv = (b0 - apex).cross(&(b1 - apex)).dot(&(b2 - apex)) / 6.0;
                    out.push(FanSimplex {
                        apex,
                        base: vec![b0, b1, b2],
                        signed_volume: sv,
                        face: fid,
                    });
                }
            }
        }
        out
    }

    /// True when every simplex of the barycentric star decomposition has
    /// positive signed volume.
    pub fn is_star_shaped(&self, cell: usize) -> bool {
        let bc = self.cells[cell].barycenter;
        let vol = self.cells[cell].volume;
        self.fan_simplices(cell, bc)
            .iter()
            .all(|s| s.signed_volume > 1e-14 * vol.max(f64::MIN_POSITIVE))
    }

    /// Shortest face edge in the mesh (2D: face length; 3D: polygon edge).
    pub fn min_edge_length(&self) -> f64 {
        let mut m = f64::INFINITY;
        for f in &self.faces {
            if self.dim == 2 {
                m = m.min(f.measure);
            } else {
                for i in 0..f.vertices.len() {
                    let a = self.vertices[f.vertices[i]];
                    let b = self.vertices[f.vertices[(i + 1) % f.vertices.len()]];
                    m = m.min((a - b).norm());
                }
            }
        }
        m
    }

    /// Reclassifies boundary faces. The closure receives the face id and must
    /// return the new tag for every boundary face; interior faces are untouched.
    pub fn retag_boundary<F: Fn(usize, &Face) -> FaceTag>(&mut self, f: F) {
        for fid in 0..self.faces.len() {
            if self.faces[fid].cells[1].is_none() {
                let t = f(fid, &self.faces[fid]);
                assert!(t.is_boundary(), "boundary face must stay tagged");
                self.tags[fid] = t;
            }
        }
    }

    /// Runs all admissibility checks and returns the per-invariant report.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();

        // planarity (3D)
        let mut offenders = Vec::new();
        if self.dim == 3 {
            for (fid, f) in self.faces.iter().enumerate() {
                let lim = 1e-10 * f.diameter;
                let dev = f
                    .vertices
                    .iter()
                    .map(|&v| (self.vertices[v] - f.barycenter).dot(&f.normal).abs())
                    .fold(0.0, f64::max);
                if dev > lim {
                    offenders.push(fid);
                }
            }
        }
        report.push("face planarity", offenders);

        // adjacency: interior faces have two distinct cells, boundary one
        let mut offenders = Vec::new();
        for (fid, f) in self.faces.iter().enumerate() {
            let ok = match (f.cells[0], f.cells[1]) {
                (Some(a), Some(b)) => a != b,
                (Some(_), None) => true,
                _ => false,
            };
            let tagged_interior = self.tags[fid] == FaceTag::Interior;
            if !ok || tagged_interior != f.cells[1].is_some() {
                offenders.push(fid);
            }
        }
        report.push("face adjacency", offenders);

        // positive measures
        let offenders: Vec<usize> = (0..self.faces.len())
            .filter(|&f| !(self.faces[f].measure > 0.0))
            .collect();
        report.push("face measure positive", offenders);
        let offenders: Vec<usize> = (0..self.cells.len())
            .filter(|&c| !(self.cells[c].volume > 0.0))
            .collect();
        report.push("cell volume positive", offenders);

        // star-shapedness w.r.t. barycenter
        let offenders: Vec<usize> = (0..self.cells.len())
            .filter(|&c| !self.is_star_shaped(c))
            .collect();
        report.push("cell star-shaped", offenders);

        // boundary partition: every boundary face carries exactly one D/N tag
        let offenders: Vec<usize> = (0..self.faces.len())
            .filter(|&f| {
                let boundary = self.faces[f].cells[1].is_none();
                boundary != self.tags[f].is_boundary()
            })
            .collect();
        report.push("boundary partition", offenders);

        // shape-regularity proxy h_T / rho_T, reported as a diagnostic only
        let mut worst: f64 = 0.0;
        for (cid, c) in self.cells.iter().enumerate() {
            let rho = c
                .faces
                .iter()
                .map(|&f| (self.faces[f].barycenter - c.barycenter).dot(&self.outward_normal(f, cid)))
                .fold(f64::INFINITY, f64::min);
            if rho > 0.0 {
                worst = worst.max(c.diameter / rho);
            }
        }
        report.shape_regularity_ratio = worst;

        report
    }
}

/// Per-invariant validation outcome with offending entity ids.
#[derive(Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckEntry>,
    /// Worst h_T / rho_T over cells (rho_T = barycenter-to-face-plane distance).
    pub shape_regularity_ratio: f64,
}

#[derive(Debug)]
pub struct CheckEntry {
    pub name: &'static str,
    pub pass: bool,
    pub offenders: Vec<usize>,
}

impl ValidationReport {
    fn push(&mut self, name: &'static str, offenders: Vec<usize>) {
        self.checks.push(CheckEntry {
            name,
            pass: offenders.is_empty(),
            offenders,
        });
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn entry(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub(crate) fn cross2(a: Vec3, b: Vec3) -> f64 {
    a.x * b.y - a.y * b.x
}

fn vertex_mean(vertices: &[Vec3], cell_faces: &[usize], faces: &[Face]) -> Vec3 {
    let mut ids: Vec<usize> = cell_faces
        .iter()
        .flat_map(|&f| faces[f].vertices.iter().copied())
        .collect();
    ids.sort_unstable();
    ids.dedup();
    let mut p = Vec3::zeros();
    for &v in &ids {
        p += vertices[v];
    }
    p / ids.len() as f64
}

fn face_geometry(
    dim: usize,
    vertices: &[Vec3],
    fid: usize,
    loop_: &[usize],
) -> Result<Face, MeshError> {
    let pts: Vec<Vec3> = loop_.iter().map(|&v| vertices[v]).collect();
    let diameter = max_pairwise_distance(&pts);
    if dim == 2 {
        assert_eq!(loop_.len(), 2, "2D faces are segments");
        let t = pts[1] - pts[0];
        let len = t.norm();
        if !(len > 0.0) {
            return Err(MeshError::NonPositiveMeasure { face: fid });
        }
        Ok(Face {
            vertices: loop_.to_vec(),
            cells: [None, None],
            normal: Vec3::new(t.y, -t.x, 0.0) / len,
            barycenter: (pts[0] + pts[1]) / 2.0,
            measure: len,
            diameter,
        })
    } else {
        assert!(loop_.len() >= 3, "3D faces are polygon loops");
        // Newell normal
        let mut n = Vec3::zeros();
        for i in 0..pts.len() {
            let a = pts[i];
            let b = pts[(i + 1) % pts.len()];
            n += a.cross(&b);
        }
        let nn = n.norm();
        if !(nn > 0.0) {
            return Err(MeshError::NonPositiveMeasure { face: fid });
        }
        let normal = n / nn;
        // area centroid via fan around the vertex mean
        let q: Vec3 = pts.iter().sum::<Vec3>() / pts.len() as f64;
        let mut area = 0.0;
        let mut centroid = Vec3::zeros();
        for i in 0..pts.len() {
            let a = pts[i];
            let b = pts[(i + 1) % pts.len()];
            let tri = (a - q).cross(&(b - q)).dot(&normal) / 2.0;
            area += tri;
            centroid += tri * (q + a + b) / 3.0;
        }
        if !(area > 0.0) {
            return Err(MeshError::NonPositiveMeasure { face: fid });
        }
        let barycenter = centroid / area;
        // planarity within 1e-10 * h_F
        let lim = 1e-10 * diameter;
        let dev = pts
            .iter()
            .map(|p| (p - barycenter).dot(&normal).abs())
            .fold(0.0, f64::max);
        if dev > lim {
            return Err(MeshError::NonplanarFace {
                face: fid,
                deviation: dev,
                limit: lim,
            });
        }
        Ok(Face {
            vertices: loop_.to_vec(),
            cells: [None, None],
            normal,
            barycenter,
            measure: area,
            diameter,
        })
    }
}

fn cell_geometry(
    dim: usize,
    vertices: &[Vec3],
    faces: &[Face],
    cid: usize,
    cell_faces: &[usize],
) -> Result<Cell, MeshError> {
    // signed fan decomposition around the vertex mean: volume and centroid are
    // exact by the divergence theorem regardless of the apex location
    let apex = vertex_mean(vertices, cell_faces, faces);
    let mut volume = 0.0;
    let mut centroid = Vec3::zeros();
    for &fid in cell_faces {
        let f = &faces[fid];
        let sign = if f.cells[0] == Some(cid) { 1.0 } else { -1.0 };
        let loop_: Vec<usize> = f.vertices.clone();
        if dim == 2 {
            let (b0, b1) = (vertices[loop_[0]], vertices[loop_[1]]);
            let (b0, b1) = if sign > 0.0 { (b0, b1) } else { (b1, b0) };
            let sv = cross2(b0 - apex, b1 - apex) / 2.0;
            volume += sv;
            centroid += sv * (apex + b0 + b1) / 3.0;
        } else {
            let ordered: Vec<usize> = if sign > 0.0 {
                loop_
            } else {
                loop_.into_iter().rev().collect()
            };
            let bases: Vec<[Vec3; 3]> = if ordered.len() == 3 {
                vec![[
                    vertices[ordered[0]],
                    vertices[ordered[1]],
                    vertices[ordered[2]],
                ]]
            } else {
                (0..ordered.len())
                    .map(|i| {
                        [
                            f.barycenter,
                            vertices[ordered[i]],
                            vertices[ordered[(i + 1) % ordered.len()]],
                        ]
                    })
                    .collect()
            };
            for b in bases {
                let sv = (b[0] - apex).cross(&(b[1] - apex)).dot(&(b[2] - apex)) / 6.0;
                volume += sv;
                centroid += sv * (apex + b[0] + b[1] + b[2]) / 4.0;
            }
        }
    }
    if !(volume > 0.0) {
        return Err(MeshError::NonPositiveVolume { cell: cid, volume });
    }
    let barycenter = centroid / volume;

    let ids: Vec<usize> = {
        let mut v: Vec<usize> = cell_faces
            .iter()
            .flat_map(|&f| faces[f].vertices.iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let pts: Vec<Vec3> = ids.iter().map(|&v| vertices[v]).collect();
    let diameter = max_pairwise_distance(&pts);
    let shape = classify_shape(dim, cell_faces, faces, &ids, &pts);

    Ok(Cell {
        faces: cell_faces.to_vec(),
        barycenter,
        volume,
        diameter,
        shape,
    })
}

fn classify_shape(
    dim: usize,
    cell_faces: &[usize],
    faces: &[Face],
    vertex_ids: &[usize],
    pts: &[Vec3],
) -> CellShape {
    let simple_faces = cell_faces.iter().all(|&f| faces[f].vertices.len() == dim);
    if cell_faces.len() == dim + 1 && simple_faces {
        return CellShape::Simplex;
    }
    let expected_faces = 2 * dim;
    let expected_vertices = 1 << dim;
    if cell_faces.len() == expected_faces && vertex_ids.len() == expected_vertices {
        // axis-aligned box: every face normal lies along a coordinate axis
        let axis_aligned = cell_faces.iter().all(|&f| {
            let n = faces[f].normal;
            let a = [n.x.abs(), n.y.abs(), n.z.abs()];
            a.iter().filter(|&&v| v > 1e-12).count() == 1
        });
        // and vertex coordinates take exactly two values per axis
        if axis_aligned && is_box_vertex_set(dim, pts) {
            return CellShape::AxisBox;
        }
    }
    CellShape::Polytope
}

fn is_box_vertex_set(dim: usize, pts: &[Vec3]) -> bool {
    for axis in 0..dim {
        let mut vals: Vec<f64> = pts.iter().map(|p| p[axis]).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let lo = vals[0];
        let hi = vals[vals.len() - 1];
        if !(hi > lo) {
            return false;
        }
        let tol = 1e-12 * (hi - lo).max(1.0);
        if !vals.iter().all(|&v| (v - lo).abs() < tol || (v - hi).abs() < tol) {
            return false;
        }
    }
    true
}

fn max_pairwise_distance(pts: &[Vec3]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            d = d.max((pts[i] - pts[j]).norm());
        }
    }
    d
}

/// Builds a mesh from cells given as oriented vertex loops (2D, counter
/// clockwise) or as lists of outward-oriented face loops (3D). Shared faces
/// are deduplicated by their vertex set.
pub(crate) fn from_cell_loops(
    dim: usize,
    vertices: Vec<Vec3>,
    cells_3d: Option<Vec<Vec<Vec<usize>>>>,
    cells_2d: Option<Vec<Vec<usize>>>,
) -> Result<Mesh, MeshError> {
    use std::collections::HashMap;
    let mut face_loops: Vec<Vec<usize>> = Vec::new();
    let mut key_to_face: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut cell_faces: Vec<Vec<usize>> = Vec::new();

    let mut register = |loop_: Vec<usize>| -> usize {
        let mut key = loop_.clone();
        key.sort_unstable();
        *key_to_face.entry(key).or_insert_with(|| {
            face_loops.push(loop_);
            face_loops.len() - 1
        })
    };

    if dim == 2 {
        for loop_ in cells_2d.expect("2D cells") {
            let n = loop_.len();
            let mut cf = Vec::with_capacity(n);
            for i in 0..n {
                cf.push(register(vec![loop_[i], loop_[(i + 1) % n]]));
            }
            cell_faces.push(cf);
        }
    } else {
        for cell in cells_3d.expect("3D cells") {
            let cf: Vec<usize> = cell.into_iter().map(&mut register).collect();
            cell_faces.push(cf);
        }
    }
    Mesh::assemble(dim, vertices, face_loops, cell_faces, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_quad_counts() {
        let m = generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[2, 2], CellType::Quad).unwrap();
        assert_eq!(m.n_cells(), 4);
        assert_eq!(m.n_faces(), 12);
        assert_eq!(m.boundary_faces().count(), 8);
        assert!((m.total_volume() - 1.0).abs() < 1e-12);
        assert!(m.validate().pass());
    }

    #[test]
    fn unit_square_triangles() {
        let m =
            generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[1, 1], CellType::Triangle).unwrap();
        assert_eq!(m.n_cells(), 2);
        assert_eq!(m.n_faces(), 5);
        assert!(m.validate().pass());
    }

    #[test]
    fn unit_cube_hex() {
        let m = generate_structured(
            &[0.0, 0.0, 0.0],
            &[1.0, 1.0, 1.0],
            &[1, 1, 1],
            CellType::Hex,
        )
        .unwrap();
        assert_eq!(m.n_cells(), 1);
        assert_eq!(m.n_faces(), 6);
        assert_eq!(m.boundary_faces().count(), 6);
        assert_eq!(m.cell(0).shape, CellShape::AxisBox);
        assert!((m.total_volume() - 1.0).abs() < 1e-12);
        assert!(m.validate().pass());
    }

    #[test]
    fn tet_mesh_is_conforming_and_volume_exact() {
        let m = generate_structured(
            &[0.0, 0.0, 0.0],
            &[1.0, 1.0, 1.0],
            &[2, 2, 2],
            CellType::Tet,
        )
        .unwrap();
        assert_eq!(m.n_cells(), 48);
        assert!((m.total_volume() - 1.0).abs() < 1e-12);
        let report = m.validate();
        assert!(report.pass(), "{report:?}");
        for c in 0..m.n_cells() {
            assert_eq!(m.cell(c).shape, CellShape::Simplex);
        }
    }

    #[test]
    fn zero_measure_box_rejected() {
        let err = generate_structured(&[0.0, 0.0], &[0.0, 1.0], &[2, 2], CellType::Quad);
        assert!(matches!(err, Err(MeshError::DegenerateBox { axis: 0 })));
    }

    #[test]
    fn normals_point_away_from_owner() {
        let m = generate_structured(&[0.0, 0.0], &[2.0, 1.0], &[3, 2], CellType::Triangle).unwrap();
        for fid in 0..m.n_faces() {
            let f = m.face(fid);
            let owner = f.cells[0].unwrap();
            let d = (f.barycenter - m.cell(owner).barycenter).dot(&f.normal);
            assert!(d > 0.0, "face {fid} normal not outward for owner");
            if let Some(nb) = f.cells[1] {
                let d2 = (f.barycenter - m.cell(nb).barycenter).dot(&f.normal);
                assert!(d2 < 0.0);
            }
        }
    }

    #[test]
    fn interior_face_with_one_cell_fails_validation() {
        // hand-built: two squares sharing a face, but the shared face tagged interior
        // while referencing only one cell
        let vertices = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ];
        let face_loops = vec![
            vec![0, 1],
            vec![1, 2],
            vec![2, 3],
            vec![3, 0],
        ];
        let cell_faces = vec![vec![0, 1, 2, 3]];
        let tags = vec![
            FaceTag::Dirichlet(0),
            FaceTag::Interior, // wrong: boundary face tagged interior
            FaceTag::Dirichlet(0),
            FaceTag::Dirichlet(0),
        ];
        let m = Mesh::assemble(2, vertices, face_loops, cell_faces, Some(tags)).unwrap();
        let report = m.validate();
        assert!(!report.pass());
        let entry = report.entry("face adjacency").unwrap();
        assert!(entry.offenders.contains(&1));
    }
}
