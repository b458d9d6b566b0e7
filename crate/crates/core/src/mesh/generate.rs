//! Structured box meshes: quads/triangles in 2D, hexes/tets in 3D.
//!
//! Boundary faces are tagged `Dirichlet(side)` with side indices
//! `2*axis + {0: low, 1: high}`; callers reclassify afterwards.

use super::{from_cell_loops, FaceTag, Mesh, MeshError, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellType {
    Triangle,
    Quad,
    Tet,
    Hex,
}

impl CellType {
    pub fn dim(self) -> usize {
        match self {
            CellType::Triangle | CellType::Quad => 2,
            CellType::Tet | CellType::Hex => 3,
        }
    }
}

/// Generates a conforming structured mesh covering the box `[lo, hi]` with
/// `divisions` cells per axis. Quads/hexes are split into 2/6 simplices when
/// a simplicial type is requested (consistent diagonals keep the mesh
/// conforming).
pub fn generate_structured(
    lo: &[f64],
    hi: &[f64],
    divisions: &[usize],
    cell_type: CellType,
) -> Result<Mesh, MeshError> {
    let dim = cell_type.dim();
    assert_eq!(lo.len(), dim);
    assert_eq!(hi.len(), dim);
    assert_eq!(divisions.len(), dim);
    for axis in 0..dim {
        if !(hi[axis] - lo[axis] > 0.0) {
            return Err(MeshError::DegenerateBox { axis });
        }
        if divisions[axis] == 0 {
            return Err(MeshError::InvalidDivisions);
        }
    }

    let mut mesh = if dim == 2 {
        grid_2d(lo, hi, divisions, cell_type)?
    } else {
        grid_3d(lo, hi, divisions, cell_type)?
    };
    tag_box_sides(&mut mesh, lo, hi);
    Ok(mesh)
}

fn tag_box_sides(mesh: &mut Mesh, lo: &[f64], hi: &[f64]) {
    let dim = mesh.dim();
    let scale: f64 = (0..dim).map(|a| hi[a] - lo[a]).fold(0.0, f64::max);
    let tol = 1e-9 * scale;
    mesh.retag_boundary(|_, face| {
        for axis in 0..dim {
            if (face.barycenter[axis] - lo[axis]).abs() < tol {
                return FaceTag::Dirichlet(2 * axis as u32);
            }
            if (face.barycenter[axis] - hi[axis]).abs() < tol {
                return FaceTag::Dirichlet(2 * axis as u32 + 1);
            }
        }
        FaceTag::Dirichlet(0)
    });
}

fn grid_2d(
    lo: &[f64],
    hi: &[f64],
    div: &[usize],
    cell_type: CellType,
) -> Result<Mesh, MeshError> {
    let (nx, ny) = (div[0], div[1]);
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push(Vec3::new(
                lo[0] + (hi[0] - lo[0]) * i as f64 / nx as f64,
                lo[1] + (hi[1] - lo[1]) * j as f64 / ny as f64,
                0.0,
            ));
        }
    }
    let vid = |i: usize, j: usize| j * (nx + 1) + i;
    let mut cells = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1));
            match cell_type {
                CellType::Quad => cells.push(vec![a, b, c, d]),
                CellType::Triangle => {
                    // shared diagonal a-c keeps the split conforming
                    cells.push(vec![a, b, c]);
                    cells.push(vec![a, c, d]);
                }
                _ => unreachable!(),
            }
        }
    }
    from_cell_loops(2, vertices, None, Some(cells))
}

/// All six permutations of (0, 1, 2); each one yields one Kuhn tetrahedron.
const AXIS_PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn grid_3d(
    lo: &[f64],
    hi: &[f64],
    div: &[usize],
    cell_type: CellType,
) -> Result<Mesh, MeshError> {
    let (nx, ny, nz) = (div[0], div[1], div[2]);
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1) * (nz + 1));
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                vertices.push(Vec3::new(
                    lo[0] + (hi[0] - lo[0]) * i as f64 / nx as f64,
                    lo[1] + (hi[1] - lo[1]) * j as f64 / ny as f64,
                    lo[2] + (hi[2] - lo[2]) * k as f64 / nz as f64,
                ));
            }
        }
    }
    let vid = |i: usize, j: usize, k: usize| (k * (ny + 1) + j) * (nx + 1) + i;

    let mut cells: Vec<Vec<Vec<usize>>> = Vec::new();
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let corner = |di: usize, dj: usize, dk: usize| vid(i + di, j + dj, k + dk);
                match cell_type {
                    CellType::Hex => {
                        let v = [
                            corner(0, 0, 0),
                            corner(1, 0, 0),
                            corner(1, 1, 0),
                            corner(0, 1, 0),
                            corner(0, 0, 1),
                            corner(1, 0, 1),
                            corner(1, 1, 1),
                            corner(0, 1, 1),
                        ];
                        cells.push(vec![
                            vec![v[0], v[3], v[2], v[1]], // bottom, outward -z
                            vec![v[4], v[5], v[6], v[7]], // top, outward +z
                            vec![v[0], v[1], v[5], v[4]], // front, outward -y
                            vec![v[2], v[3], v[7], v[6]], // back, outward +y
                            vec![v[0], v[4], v[7], v[3]], // left, outward -x
                            vec![v[1], v[2], v[6], v[5]], // right, outward +x
                        ]);
                    }
                    CellType::Tet => {
                        // Kuhn split: all six tets share the main diagonal of
                        // the cube, so face diagonals match across cubes
                        for perm in AXIS_PERMS {
                            let mut steps = [[0usize; 3]; 4];
                            for s in 1..4 {
                                steps[s] = steps[s - 1];
                                steps[s][perm[s - 1]] += 1;
                            }
                            let vs: Vec<usize> = steps
                                .iter()
                                .map(|d| corner(d[0], d[1], d[2]))
                                .collect();
                            cells.push(tet_faces(&vertices, &vs));
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
    from_cell_loops(3, vertices, Some(cells), None)
}

/// Outward-oriented triangle loops of the tetrahedron `vs`.
pub(crate) fn tet_faces(vertices: &[Vec3], vs: &[usize]) -> Vec<Vec<usize>> {
    let mut faces = Vec::with_capacity(4);
    for omit in 0..4 {
        let tri: Vec<usize> = (0..4).filter(|&s| s != omit).map(|s| vs[s]).collect();
        let opposite = vertices[vs[omit]];
        let (a, b, c) = (vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
        let n = (b - a).cross(&(c - a));
        if n.dot(&(opposite - a)) > 0.0 {
            faces.push(vec![tri[0], tri[2], tri[1]]);
        } else {
            faces.push(tri);
        }
    }
    faces
}
