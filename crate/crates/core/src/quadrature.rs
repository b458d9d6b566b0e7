//! Positive-weight quadrature of arbitrary order on the entities the mesh
//! supports.
//!
//! Segments and axis-aligned boxes use (tensorized) Gauss-Legendre. Simplices
//! use closed-form symmetric rules up to order 2 and a collapsed-coordinate
//! (Duffy) tensor construction beyond, which stays positive at every order;
//! published symmetric tables of higher order either carry negative weights
//! or are not worth the transcription risk. Star-shaped polytopes are split
//! into (barycenter, face sub-simplex) simplices, each carrying its own rule.

use crate::mesh::{CellShape, FanSimplex, Mesh, Vec3};

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    /// Physical coordinates (z = 0 for 2D entities).
    pub points: Vec<Vec3>,
    /// Weights in the measure units of the entity; all strictly positive.
    pub weights: Vec<f64>,
    /// Declared polynomial exactness.
    pub order: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec3, f64)> + '_ {
        self.points
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    fn append(&mut self, other: QuadratureRule) {
        self.points.extend(other.points);
        self.weights.extend(other.weights);
    }
}

/// Gauss-Legendre nodes and weights on [0, 1], exact through degree 2n - 1.
///
/// Computed by Newton iteration on the Legendre recurrence; accurate to
/// machine precision for the orders used here.
pub fn gauss_legendre_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // initial guess (Chebyshev-like), then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        weights[i] = w;
        nodes[n - 1 - i] = -x;
        weights[n - 1 - i] = w;
    }
    // map from [-1, 1] to [0, 1]; reverse so nodes are ascending
    nodes.reverse();
    weights.reverse();
    let nodes = nodes.iter().map(|x| 0.5 * (x + 1.0)).collect();
    let weights = weights.iter().map(|w| 0.5 * w).collect();
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gauss_points_for_order(order: usize) -> usize {
    order / 2 + 1
}

/// Reference-triangle rule on x,y >= 0, x+y <= 1.
fn reference_triangle(order: usize) -> (Vec<[f64; 2]>, Vec<f64>) {
    match order {
        0 | 1 => (vec![[1.0 / 3.0, 1.0 / 3.0]], vec![0.5]),
        2 => {
            let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
            (
                vec![[b, b], [a, b], [b, a]],
                vec![1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0],
            )
        }
        q => {
            // Duffy: x = u, y = v (1 - u), jacobian (1 - u);
            // per-variable degrees: u up to q + 1, v up to q
            let (un, uw) = gauss_legendre_01(gauss_points_for_order(q + 1));
            let (vn, vw) = gauss_legendre_01(gauss_points_for_order(q));
            let mut pts = Vec::with_capacity(un.len() * vn.len());
            let mut wts = Vec::with_capacity(un.len() * vn.len());
            for (u, wu) in un.iter().zip(&uw) {
                for (v, wv) in vn.iter().zip(&vw) {
                    pts.push([*u, v * (1.0 - u)]);
                    wts.push(wu * wv * (1.0 - u));
                }
            }
            (pts, wts)
        }
    }
}

/// Reference-tetrahedron rule on x,y,z >= 0, x+y+z <= 1.
fn reference_tetrahedron(order: usize) -> (Vec<[f64; 3]>, Vec<f64>) {
    match order {
        0 | 1 => (vec![[0.25, 0.25, 0.25]], vec![1.0 / 6.0]),
        2 => {
            // symmetric 4-point rule: barycentric (a, b, b, b)
            let a = (5.0 + 3.0 * 5.0f64.sqrt()) / 20.0;
            let b = (5.0 - 5.0f64.sqrt()) / 20.0;
            let w = 1.0 / 24.0;
            (
                vec![[a, b, b], [b, a, b], [b, b, a], [b, b, b]],
                vec![w, w, w, w],
            )
        }
        q => {
            // Duffy: x = u, y = v (1-u), z = w (1-u)(1-v), jacobian (1-u)^2 (1-v);
            // per-variable degrees: u up to q + 2, v up to q + 1, w up to q
            let (un, uw) = gauss_legendre_01(gauss_points_for_order(q + 2));
            let (vn, vw) = gauss_legendre_01(gauss_points_for_order(q + 1));
            let (wn, ww) = gauss_legendre_01(gauss_points_for_order(q));
            let mut pts = Vec::new();
            let mut wts = Vec::new();
            for (u, cu) in un.iter().zip(&uw) {
                for (v, cv) in vn.iter().zip(&vw) {
                    for (w, cw) in wn.iter().zip(&ww) {
                        let x = *u;
                        let y = v * (1.0 - u);
                        let z = w * (1.0 - u) * (1.0 - v);
                        pts.push([x, y, z]);
                        wts.push(cu * cv * cw * (1.0 - u) * (1.0 - u) * (1.0 - v));
                    }
                }
            }
            (pts, wts)
        }
    }
}

/// Maps a reference simplex rule onto the physical simplex. `signed_volume`
/// must be positive.
fn map_simplex_rule(order: usize, vertices: &[Vec3], signed_volume: f64) -> QuadratureRule {
    debug_assert!(signed_volume > 0.0, "simplex must be positively oriented");
    match vertices.len() {
        3 => {
            let (pts, wts) = reference_triangle(order);
            let (a, b, c) = (vertices[0], vertices[1], vertices[2]);
            let scale = 2.0 * signed_volume; // reference weights sum to 1/2
            QuadratureRule {
                points: pts
                    .iter()
                    .map(|p| a + (b - a) * p[0] + (c - a) * p[1])
                    .collect(),
                weights: wts.iter().map(|w| w * scale).collect(),
                order,
            }
        }
        4 => {
            let (pts, wts) = reference_tetrahedron(order);
            let (a, b, c, d) = (vertices[0], vertices[1], vertices[2], vertices[3]);
            let scale = 6.0 * signed_volume; // reference weights sum to 1/6
            QuadratureRule {
                points: pts
                    .iter()
                    .map(|p| a + (b - a) * p[0] + (c - a) * p[1] + (d - a) * p[2])
                    .collect(),
                weights: wts.iter().map(|w| w * scale).collect(),
                order,
            }
        }
        n => panic!("unsupported simplex with {n} vertices"),
    }
}

fn tensor_box_rule(lo: &[f64], hi: &[f64], dim: usize, order: usize) -> QuadratureRule {
    let m = gauss_points_for_order(order);
    let (nodes, weights) = gauss_legendre_01(m);
    let mut points = Vec::new();
    let mut wts = Vec::new();
    let mut idx = vec![0usize; dim];
    loop {
        let mut p = Vec3::zeros();
        let mut w = 1.0;
        for a in 0..dim {
            p[a] = lo[a] + (hi[a] - lo[a]) * nodes[idx[a]];
            w *= weights[idx[a]] * (hi[a] - lo[a]);
        }
        points.push(p);
        wts.push(w);
        // odometer increment
        let mut a = 0;
        loop {
            idx[a] += 1;
            if idx[a] < m {
                break;
            }
            idx[a] = 0;
            a += 1;
            if a == dim {
                return QuadratureRule {
                    points,
                    weights: wts,
                    order,
                };
            }
        }
    }
}

/// Quadrature on a mesh cell, exact for polynomials of total degree `order`.
///
/// Simplices map a reference rule; axis-aligned quads/hexes tensorize 1D
/// Gauss; anything else is split into (barycenter, face sub-simplex)
/// simplices, which requires star-shapedness.
pub fn cell_rule(mesh: &Mesh, cell: usize, order: usize) -> QuadratureRule {
    let c = mesh.cell(cell);
    match c.shape {
        CellShape::Simplex => {
            let vs = mesh.cell_vertices(cell);
            let pts: Vec<Vec3> = vs.iter().map(|&v| mesh.vertex(v)).collect();
            let vol = if mesh.dim() == 2 {
                crate::mesh::cross2(pts[1] - pts[0], pts[2] - pts[0]) / 2.0
            } else {
                (pts[1] - pts[0])
                    .cross(&(pts[2] - pts[0]))
                    .dot(&(pts[3] - pts[0]))
                    / 6.0
            };
            let (pts, vol) = if vol > 0.0 {
                (pts, vol)
            } else {
                let mut p = pts;
                p.swap(1, 2);
                (p, -vol)
            };
            map_simplex_rule(order, &pts, vol)
        }
        CellShape::AxisBox => {
            let (lo, hi) = bounding_box(mesh, cell);
            tensor_box_rule(&lo, &hi, mesh.dim(), order)
        }
        CellShape::Polytope => {
            let mut rule = QuadratureRule {
                points: Vec::new(),
                weights: Vec::new(),
                order,
            };
            for fan in mesh.fan_simplices(cell, c.barycenter) {
                rule.append(simplex_from_fan(&fan, order));
            }
            rule
        }
    }
}

fn simplex_from_fan(fan: &FanSimplex, order: usize) -> QuadratureRule {
    let mut vertices = vec![fan.apex];
    vertices.extend(fan.base.iter().copied());
    map_simplex_rule(order, &vertices, fan.signed_volume)
}

fn bounding_box(mesh: &Mesh, cell: usize) -> (Vec<f64>, Vec<f64>) {
    let vs = mesh.cell_vertices(cell);
    let mut lo = vec![f64::INFINITY; mesh.dim()];
    let mut hi = vec![f64::NEG_INFINITY; mesh.dim()];
    for v in vs {
        let p = mesh.vertex(v);
        for a in 0..mesh.dim() {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    (lo, hi)
}

/// Quadrature on a mesh face (segment in 2D, planar polygon in 3D), exact for
/// polynomials of total degree `order` on the face plane.
pub fn face_rule(mesh: &Mesh, face: usize, order: usize) -> QuadratureRule {
    let f = mesh.face(face);
    if mesh.dim() == 2 {
        let (a, b) = (mesh.vertex(f.vertices[0]), mesh.vertex(f.vertices[1]));
        let m = gauss_points_for_order(order);
        let (nodes, weights) = gauss_legendre_01(m);
        QuadratureRule {
            points: nodes.iter().map(|&t| a + (b - a) * t).collect(),
            weights: weights.iter().map(|w| w * f.measure).collect(),
            order,
        }
    } else if f.vertices.len() == 3 {
        let vs: Vec<Vec3> = f.vertices.iter().map(|&v| mesh.vertex(v)).collect();
        let area = (vs[1] - vs[0]).cross(&(vs[2] - vs[0])).norm() / 2.0;
        map_triangle_in_3d(order, &vs, area)
    } else {
        let mut rule = QuadratureRule {
            points: Vec::new(),
            weights: Vec::new(),
            order,
        };
        let n = f.vertices.len();
        for i in 0..n {
            let tri = [
                f.barycenter,
                mesh.vertex(f.vertices[i]),
                mesh.vertex(f.vertices[(i + 1) % n]),
            ];
            let area = (tri[1] - tri[0]).cross(&(tri[2] - tri[0])).norm() / 2.0;
            if area > 0.0 {
                rule.append(map_triangle_in_3d(order, &tri, area));
            }
        }
        rule
    }
}

fn map_triangle_in_3d(order: usize, vertices: &[Vec3], area: f64) -> QuadratureRule {
    let (pts, wts) = reference_triangle(order);
    let (a, b, c) = (vertices[0], vertices[1], vertices[2]);
    let scale = 2.0 * area;
    QuadratureRule {
        points: pts
            .iter()
            .map(|p| a + (b - a) * p[0] + (c - a) * p[1])
            .collect(),
        weights: wts.iter().map(|w| w * scale).collect(),
        order,
    }
}
