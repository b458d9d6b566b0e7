//! Scaled translated monomial bases on cells and faces, their mass matrices
//! and local L2 projections.
//!
//! A basis function is `x -> prod_j xi_j^alpha_j` with `xi = (x - center) / h`
//! expressed in the entity frame: ambient coordinates for cells, an
//! orthonormal tangent frame for faces. Enumeration is graded (degree 0
//! first), so the degree-l basis is a prefix of any higher-degree basis on
//! the same entity.

use crate::mesh::{Face, Mesh, Vec3};
use crate::quadrature::QuadratureRule;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("mass matrix is not positive definite (bad basis or quadrature)")]
    IndefiniteMass,
}

/// Number of `vars`-variate monomials of total degree at most `degree`.
pub fn monomial_count(vars: usize, degree: usize) -> usize {
    // C(degree + vars, vars)
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 1..=vars {
        num *= degree + i;
        den *= i;
    }
    num / den
}

/// Multi-indices of total degree <= `degree` in graded lexicographic order.
fn graded_exponents(vars: usize, degree: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(monomial_count(vars, degree));
    for total in 0..=degree {
        match vars {
            1 => out.push([total, 0, 0]),
            2 => {
                for a in (0..=total).rev() {
                    out.push([a, total - a, 0]);
                }
            }
            3 => {
                for a in (0..=total).rev() {
                    for b in (0..=(total - a)).rev() {
                        out.push([a, b, total - a - b]);
                    }
                }
            }
            _ => unreachable!("vars in 1..=3"),
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct MonomialBasis {
    exponents: Vec<[usize; 3]>,
    center: Vec3,
    scale: f64,
    axes: [Vec3; 3],
    vars: usize,
    degree: usize,
}

impl MonomialBasis {
    /// Basis of d-variate monomials on a cell.
    pub fn cell(dim: usize, degree: usize, center: Vec3, diameter: f64) -> Self {
        MonomialBasis {
            exponents: graded_exponents(dim, degree),
            center,
            scale: diameter,
            axes: [Vec3::x(), Vec3::y(), Vec3::z()],
            vars: dim,
            degree,
        }
    }

    /// Basis of (d-1)-variate monomials in the tangent frame of a face.
    pub fn face(mesh: &Mesh, face: &Face, degree: usize) -> Self {
        let dim = mesh.dim();
        let a = mesh.vertex(face.vertices[0]);
        let b = mesh.vertex(face.vertices[1]);
        let t1 = (b - a).normalize();
        let axes = if dim == 2 {
            [t1, Vec3::zeros(), Vec3::zeros()]
        } else {
            let t1 = (t1 - face.normal * t1.dot(&face.normal)).normalize();
            let t2 = face.normal.cross(&t1);
            [t1, t2, Vec3::zeros()]
        };
        MonomialBasis {
            exponents: graded_exponents(dim - 1, degree),
            center: face.barycenter,
            scale: face.diameter,
            axes,
            vars: dim - 1,
            degree,
        }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn local(&self, x: Vec3) -> [f64; 3] {
        let d = x - self.center;
        let mut xi = [0.0; 3];
        for j in 0..self.vars {
            xi[j] = d.dot(&self.axes[j]) / self.scale;
        }
        xi
    }

    pub fn eval_one(&self, i: usize, x: Vec3) -> f64 {
        let xi = self.local(x);
        let e = self.exponents[i];
        xi[0].powi(e[0] as i32) * xi[1].powi(e[1] as i32) * xi[2].powi(e[2] as i32)
    }

    /// Values of all basis functions at `x`.
    pub fn eval(&self, x: Vec3) -> DVector<f64> {
        let xi = self.local(x);
        DVector::from_iterator(
            self.exponents.len(),
            self.exponents
                .iter()
                .map(|e| xi[0].powi(e[0] as i32) * xi[1].powi(e[1] as i32) * xi[2].powi(e[2] as i32)),
        )
    }

    /// Rows = quadrature points, columns = basis functions.
    pub fn eval_matrix(&self, points: &[Vec3]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(points.len(), self.len());
        for (r, &p) in points.iter().enumerate() {
            m.row_mut(r).copy_from_slice(self.eval(p).as_slice());
        }
        m
    }

    /// Physical-space gradient of basis function `i` at `x` (cell bases).
    pub fn grad_one(&self, i: usize, x: Vec3) -> Vec3 {
        let xi = self.local(x);
        let e = self.exponents[i];
        let mut g = Vec3::zeros();
        for j in 0..self.vars {
            if e[j] == 0 {
                continue;
            }
            let mut v = e[j] as f64 / self.scale;
            for l in 0..self.vars {
                let p = if l == j { e[l] - 1 } else { e[l] };
                v *= xi[l].powi(p as i32);
            }
            g += v * self.axes[j];
        }
        g
    }

    /// Gradients of all basis functions at `x`.
    pub fn grads(&self, x: Vec3) -> Vec<Vec3> {
        (0..self.len()).map(|i| self.grad_one(i, x)).collect()
    }
}

/// Gram matrix of the basis under the rule; symmetric by construction.
pub fn mass_matrix(basis: &MonomialBasis, rule: &QuadratureRule) -> DMatrix<f64> {
    let n = basis.len();
    let mut m = DMatrix::zeros(n, n);
    for (p, w) in rule.iter() {
        let phi = basis.eval(p);
        // rank-1 update on the lower triangle
        for i in 0..n {
            for j in 0..=i {
                m[(i, j)] += w * phi[i] * phi[j];
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            m[(i, j)] = m[(j, i)];
        }
    }
    m
}

/// Cholesky factorization of an SPD mass matrix; indefiniteness is fatal.
pub fn factorize_mass(m: DMatrix<f64>) -> Result<Cholesky<f64, Dyn>, BasisError> {
    Cholesky::new(m).ok_or(BasisError::IndefiniteMass)
}

/// Coefficients of the L2 projection of a scalar function.
pub fn l2_project_scalar<F: Fn(Vec3) -> f64>(
    basis: &MonomialBasis,
    mass: &Cholesky<f64, Dyn>,
    rule: &QuadratureRule,
    f: F,
) -> DVector<f64> {
    let mut rhs = DVector::zeros(basis.len());
    for (p, w) in rule.iter() {
        let phi = basis.eval(p);
        rhs.axpy(w * f(p), &phi, 1.0);
    }
    mass.solve(&rhs)
}

/// Component-wise L2 projection of a vector field; returns `dim` coefficient
/// vectors.
pub fn l2_project_vector<F: Fn(Vec3) -> Vec3>(
    dim: usize,
    basis: &MonomialBasis,
    mass: &Cholesky<f64, Dyn>,
    rule: &QuadratureRule,
    f: F,
) -> Vec<DVector<f64>> {
    let mut rhs = vec![DVector::zeros(basis.len()); dim];
    for (p, w) in rule.iter() {
        let phi = basis.eval(p);
        let v = f(p);
        for c in 0..dim {
            rhs[c].axpy(w * v[c], &phi, 1.0);
        }
    }
    rhs.into_iter().map(|r| mass.solve(&r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_structured, CellType};
    use crate::quadrature::cell_rule;

    #[test]
    fn counts_match_formulas() {
        assert_eq!(monomial_count(2, 0), 1);
        assert_eq!(monomial_count(2, 1), 3);
        assert_eq!(monomial_count(2, 2), 6);
        assert_eq!(monomial_count(2, 3), 10);
        assert_eq!(monomial_count(3, 1), 4);
        assert_eq!(monomial_count(3, 2), 10);
        assert_eq!(monomial_count(3, 3), 20);
        assert_eq!(monomial_count(1, 2), 3);
    }

    #[test]
    fn graded_enumeration_nests() {
        let lo = graded_exponents(3, 1);
        let hi = graded_exponents(3, 3);
        assert_eq!(&hi[..lo.len()], &lo[..]);
    }

    #[test]
    fn barycenter_values() {
        let m = generate_structured(&[0.0, 0.0], &[2.0, 1.0], &[2, 2], CellType::Quad).unwrap();
        let c = m.cell(0);
        let basis = MonomialBasis::cell(2, 3, c.barycenter, c.diameter);
        let vals = basis.eval(c.barycenter);
        assert_eq!(vals[0], 1.0);
        for i in 1..basis.len() {
            assert_eq!(vals[i], 0.0);
        }
    }

    #[test]
    fn mass_matrix_degree0_is_measure() {
        let m = generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[2, 2], CellType::Quad).unwrap();
        let c = m.cell(1);
        let basis = MonomialBasis::cell(2, 0, c.barycenter, c.diameter);
        let rule = cell_rule(&m, 1, 0);
        let mm = mass_matrix(&basis, &rule);
        assert_eq!(mm.nrows(), 1);
        assert!((mm[(0, 0)] - c.volume).abs() < 1e-14);
    }

    #[test]
    fn mass_matrix_unit_square_degree1() {
        let m = generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[1, 1], CellType::Quad).unwrap();
        let c = m.cell(0);
        let basis = MonomialBasis::cell(2, 1, c.barycenter, c.diameter);
        let rule = cell_rule(&m, 0, 2);
        let mm = mass_matrix(&basis, &rule);
        // (1,1) entry is the cell measure; centered odd monomials drop the
        // off-diagonal couplings to the constant
        assert!((mm[(0, 0)] - 1.0).abs() < 1e-14);
        assert!(mm[(0, 1)].abs() < 1e-15);
        assert!(mm[(0, 2)].abs() < 1e-15);
        // integral of ((x-1/2)/sqrt(2))^2 = (1/12)/2
        assert!((mm[(1, 1)] - 1.0 / 24.0).abs() < 1e-14);
        assert!(factorize_mass(mm).is_ok());
    }

    #[test]
    fn mass_matrix_degree2_triangle_spd() {
        let m =
            generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[1, 1], CellType::Triangle).unwrap();
        let c = m.cell(0);
        let basis = MonomialBasis::cell(2, 2, c.barycenter, c.diameter);
        let rule = cell_rule(&m, 0, 4);
        let mm = mass_matrix(&basis, &rule);
        let eig = mm.symmetric_eigenvalues();
        assert!(eig.iter().all(|&l| l > 0.0));
        assert!(factorize_mass(mm).is_ok());
    }

    #[test]
    fn projection_reproduces_polynomials() {
        let m = generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[2, 2], CellType::Quad).unwrap();
        let c = m.cell(3);
        let basis = MonomialBasis::cell(2, 1, c.barycenter, c.diameter);
        let rule = cell_rule(&m, 3, 2);
        let mass = factorize_mass(mass_matrix(&basis, &rule)).unwrap();
        // zero projects to zero
        let z = l2_project_scalar(&basis, &mass, &rule, |_| 0.0);
        assert!(z.norm() == 0.0);
        // f(x, y) = x reproduces exactly
        let coeffs = l2_project_scalar(&basis, &mass, &rule, |p| p.x);
        for probe in rule.points.iter().take(4) {
            let val: f64 = (0..basis.len())
                .map(|i| coeffs[i] * basis.eval_one(i, *probe))
                .sum();
            assert!((val - probe.x).abs() < 1e-13);
        }
    }

    #[test]
    fn projection_idempotent() {
        let m = generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[1, 1], CellType::Quad).unwrap();
        let c = m.cell(0);
        let basis = MonomialBasis::cell(2, 2, c.barycenter, c.diameter);
        let rule = cell_rule(&m, 0, 6);
        let mass = factorize_mass(mass_matrix(&basis, &rule)).unwrap();
        let c1 = l2_project_scalar(&basis, &mass, &rule, |p| (p.x).sin());
        let eval = |coeffs: &DVector<f64>, p: Vec3| -> f64 {
            (0..basis.len()).map(|i| coeffs[i] * basis.eval_one(i, p)).sum()
        };
        let c2 = l2_project_scalar(&basis, &mass, &rule, |p| eval(&c1, p));
        assert!((&c1 - &c2).norm() < 1e-12 * c1.norm().max(1.0));
    }

    #[test]
    fn projection_error_decays_under_refinement() {
        // project sin(x) onto degree-2 per cell; L2 error contracts by >= 6x
        // from a 1x1 to a 2x2 partition of the unit square
        let err = |n: usize| -> f64 {
            let m =
                generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[n, n], CellType::Quad).unwrap();
            let mut total = 0.0;
            for cid in 0..m.n_cells() {
                let c = m.cell(cid);
                let basis = MonomialBasis::cell(2, 2, c.barycenter, c.diameter);
                let rule = cell_rule(&m, cid, 4);
                let fine = cell_rule(&m, cid, 10);
                let mass = factorize_mass(mass_matrix(&basis, &rule)).unwrap();
                let coeffs = l2_project_scalar(&basis, &mass, &rule, |p| p.x.sin());
                for (p, w) in fine.iter() {
                    let val: f64 = (0..basis.len())
                        .map(|i| coeffs[i] * basis.eval_one(i, p))
                        .sum();
                    total += w * (val - p.x.sin()).powi(2);
                }
            }
            total.sqrt()
        };
        let e1 = err(1);
        let e2 = err(2);
        assert!(e1 / e2 >= 6.0, "contraction {}", e1 / e2);
    }

    #[test]
    fn face_basis_lives_in_the_tangent_frame() {
        let m = generate_structured(
            &[0.0, 0.0, 0.0],
            &[1.0, 1.0, 1.0],
            &[1, 1, 1],
            CellType::Hex,
        )
        .unwrap();
        let f = m
            .boundary_faces()
            .find(|&f| m.face(f).barycenter.z == 0.0)
            .unwrap();
        let face = m.face(f);
        let basis = MonomialBasis::face(&m, face, 2);
        assert_eq!(basis.len(), 6);
        // values are invariant under displacement along the normal
        let x = face.barycenter + Vec3::new(0.1, -0.2, 0.0);
        let v1 = basis.eval(x);
        let v2 = basis.eval(x + face.normal * 5.0);
        assert!((v1 - v2).norm() < 1e-14);
    }
}
