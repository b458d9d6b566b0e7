//! Per-cell HHO operator construction.
//!
//! For a cell T with face degree k and cell degree l, the local unknowns are
//! a vector polynomial of degree l in T plus one of degree k per face. This
//! module builds, once per cell:
//!
//! - the symmetric strain reconstruction `G` into degree-k symmetric tensor
//!   polynomials (Mandel components),
//! - the displacement reconstruction `D` into degree-(k+1) vector
//!   polynomials, pinned by mean-value and skew-moment conditions through a
//!   bordered saddle system,
//! - the face-based stabilization, both the per-face operators and the
//!   assembled bilinear matrix with the `1/h_F` weight,
//! - the behavior quadrature together with the strain interpolation matrices
//!   at its points,
//! - the face machinery (bases, masses, rules) used for boundary data,
//!   loads and tractions.
//!
//! Everything is material independent; the solver applies the elastic or
//! elastoplastic weights. Construction is pure per cell and runs in parallel
//! over cells.

use crate::basis::{
    factorize_mass, l2_project_vector, mass_matrix, monomial_count, BasisError, MonomialBasis,
};
use crate::mesh::{Mesh, Vec3};
use crate::quadrature::{cell_rule, face_rule, QuadratureRule};
use crate::tensor::{mandel_index_pairs, sym_components, SQRT_2};
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("invalid dof layout: face degree {k}, cell degree {l}")]
    InvalidLayout { k: usize, l: usize },
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error("singular displacement-reconstruction system on cell {cell}")]
    SingularNeumann { cell: usize },
}

/// Polynomial degrees of the local unknowns and the derived dof counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofLayout {
    pub dim: usize,
    /// Face polynomial degree k >= 1.
    pub face_degree: usize,
    /// Cell polynomial degree l in {k-1, k, k+1}, l >= 1.
    pub cell_degree: usize,
}

impl DofLayout {
    pub fn new(dim: usize, face_degree: usize, cell_degree: usize) -> Result<Self, OperatorError> {
        let (k, l) = (face_degree, cell_degree);
        let ok = (2..=3).contains(&dim) && k >= 1 && l >= 1 && l + 1 >= k && l <= k + 1;
        if !ok {
            return Err(OperatorError::InvalidLayout { k, l });
        }
        Ok(DofLayout {
            dim,
            face_degree,
            cell_degree,
        })
    }

    /// Scalar monomials per component on the cell.
    pub fn n_cell_scalar(&self) -> usize {
        monomial_count(self.dim, self.cell_degree)
    }

    /// Scalar monomials per component on one face.
    pub fn n_face_scalar(&self) -> usize {
        monomial_count(self.dim - 1, self.face_degree)
    }

    pub fn n_cell_dofs(&self) -> usize {
        self.dim * self.n_cell_scalar()
    }

    pub fn n_face_dofs(&self) -> usize {
        self.dim * self.n_face_scalar()
    }

    pub fn n_local_dofs(&self, n_faces: usize) -> usize {
        self.n_cell_dofs() + n_faces * self.n_face_dofs()
    }

    /// Quadrature order for operator construction; covers every product of
    /// basis functions that appears, including the degree-(k+1) masses.
    pub fn build_order(&self) -> usize {
        2 * (self.face_degree + 1).max(self.cell_degree)
    }

    /// Quadrature order for behavior integration (k_Q >= 2k).
    pub fn behavior_order(&self) -> usize {
        2 * self.face_degree.max(self.cell_degree)
    }
}

/// Per-face data cached for boundary conditions, loads and tractions.
#[derive(Debug, Clone)]
pub struct FaceOps {
    pub face: usize,
    pub basis: MonomialBasis,
    pub mass: Cholesky<f64, Dyn>,
    pub mass_mat: DMatrix<f64>,
    pub rule: QuadratureRule,
    /// Face basis values at the rule points (rows = points).
    pub psi: DMatrix<f64>,
    /// Cell basis (degree k+1) values at the rule points.
    pub phi: DMatrix<f64>,
    /// Outward unit normal as seen from the cell.
    pub normal: Vec3,
    pub diameter: f64,
    pub measure: f64,
}

/// The cached operator set of one cell.
#[derive(Debug, Clone)]
pub struct CellOperators {
    pub cell: usize,
    pub layout: DofLayout,
    /// Global face ids in cell-local order.
    pub faces: Vec<usize>,
    pub n_dofs: usize,
    /// Strain reconstruction: (n_sym * N_k) x n_dofs, row m * N_k + i.
    pub strain: DMatrix<f64>,
    /// Displacement reconstruction: (d * N_{k+1}) x n_dofs, row c * N_{k+1} + i.
    pub displacement: DMatrix<f64>,
    /// Assembled stabilization bilinear form (n_dofs x n_dofs), h_F^{-1} weighted.
    pub stabilization: DMatrix<f64>,
    /// Per-face stabilization operators S_F: (d * N_f) x n_dofs.
    pub face_stab: Vec<DMatrix<f64>>,
    /// Behavior quadrature.
    pub quad: QuadratureRule,
    /// Strain interpolation at each behavior point: n_sym x n_dofs.
    pub strain_at: Vec<DMatrix<f64>>,
    /// Cell scalar basis of degree k+1 (degree-l and -k bases are prefixes).
    pub cell_basis: MonomialBasis,
    /// Cell scalar mass Cholesky factors for degrees l and k.
    pub mass_l: Cholesky<f64, Dyn>,
    pub mass_k: Cholesky<f64, Dyn>,
    /// Body-force quadrature and degree-l basis values at its points.
    pub load_rule: QuadratureRule,
    pub load_phi: DMatrix<f64>,
    pub face_ops: Vec<FaceOps>,
}

impl CellOperators {
    pub fn n_cell_dofs(&self) -> usize {
        self.layout.n_cell_dofs()
    }

    pub fn face_offset(&self, local_face: usize) -> usize {
        self.layout.n_cell_dofs() + local_face * self.layout.n_face_dofs()
    }

    /// Builds the operator set for one cell.
    pub fn build(mesh: &Mesh, cell: usize, layout: DofLayout) -> Result<Self, OperatorError> {
        let d = layout.dim;
        let n_sym = sym_components(d);
        let (k, l) = (layout.face_degree, layout.cell_degree);
        let n_l = layout.n_cell_scalar();
        let n_k = monomial_count(d, k);
        let n_k1 = monomial_count(d, k + 1);
        let n_fs = layout.n_face_scalar();

        let c = mesh.cell(cell);
        let faces = c.faces.clone();
        let n_dofs = layout.n_local_dofs(faces.len());
        let cell_basis = MonomialBasis::cell(d, k + 1, c.barycenter, c.diameter);

        let build_rule = cell_rule(mesh, cell, layout.build_order());
        let face_order = layout.build_order();

        // cell masses: the degree-(k+1) Gram once, prefixes for degrees k, l
        let m_k1 = mass_matrix(&cell_basis, &build_rule);
        let mass_k = factorize_mass(m_k1.view((0, 0), (n_k, n_k)).into_owned())?;
        let mass_l = factorize_mass(m_k1.view((0, 0), (n_l, n_l)).into_owned())?;

        // face machinery
        let mut face_ops = Vec::with_capacity(faces.len());
        for &fid in &faces {
            let f = mesh.face(fid);
            let basis = MonomialBasis::face(mesh, f, k);
            let rule = face_rule(mesh, fid, face_order);
            let psi = basis.eval_matrix(&rule.points);
            let phi = cell_basis.eval_matrix(&rule.points);
            let mut mm = DMatrix::zeros(n_fs, n_fs);
            for (r, (_, w)) in rule.iter().enumerate() {
                for i in 0..n_fs {
                    for j in 0..=i {
                        mm[(i, j)] += w * psi[(r, i)] * psi[(r, j)];
                    }
                }
            }
            for i in 0..n_fs {
                for j in (i + 1)..n_fs {
                    mm[(i, j)] = mm[(j, i)];
                }
            }
            let mass = factorize_mass(mm.clone())?;
            face_ops.push(FaceOps {
                face: fid,
                basis,
                mass,
                mass_mat: mm,
                rule,
                psi,
                phi,
                normal: mesh.outward_normal(fid, cell),
                diameter: f.diameter,
                measure: f.measure,
            });
        }

        // ---- strain reconstruction -----------------------------------------
        // rhs_m[j, dof] = (grad_s(dof basis) : E_m, phi_j)_T
        //               + (v_F - v_T, (E_m n) phi_j)_dT
        let mut strain_rhs = vec![DMatrix::zeros(n_k, n_dofs); n_sym];
        for (p, w) in build_rule.iter() {
            let phi = cell_basis.eval(p);
            let grads = cell_basis.grads(p);
            for (m, rhs) in strain_rhs.iter_mut().enumerate() {
                for c_comp in 0..d {
                    for i in 0..n_l {
                        let v = mandel_apply(d, m, grads[i])[c_comp];
                        if v == 0.0 {
                            continue;
                        }
                        let col = c_comp * n_l + i;
                        for j in 0..n_k {
                            rhs[(j, col)] += w * v * phi[j];
                        }
                    }
                }
            }
        }
        for (lf, fo) in face_ops.iter().enumerate() {
            let off = layout.n_cell_dofs() + lf * layout.n_face_dofs();
            for (r, (_, w)) in fo.rule.iter().enumerate() {
                for (m, rhs) in strain_rhs.iter_mut().enumerate() {
                    let en = mandel_apply(d, m, fo.normal);
                    for c_comp in 0..d {
                        if en[c_comp] == 0.0 {
                            continue;
                        }
                        for q in 0..n_fs {
                            let col = off + c_comp * n_fs + q;
                            let v = w * en[c_comp] * fo.psi[(r, q)];
                            for j in 0..n_k {
                                rhs[(j, col)] += v * fo.phi[(r, j)];
                            }
                        }
                        for i in 0..n_l {
                            let col = c_comp * n_l + i;
                            let v = w * en[c_comp] * fo.phi[(r, i)];
                            for j in 0..n_k {
                                rhs[(j, col)] -= v * fo.phi[(r, j)];
                            }
                        }
                    }
                }
            }
        }
        let mut strain = DMatrix::zeros(n_sym * n_k, n_dofs);
        for (m, rhs) in strain_rhs.iter().enumerate() {
            let solved = mass_k.solve(rhs);
            strain
                .view_mut((m * n_k, 0), (n_k, n_dofs))
                .copy_from(&solved);
        }

        // ---- displacement reconstruction -----------------------------------
        let nd1 = d * n_k1;
        let n_rigid = d * (d + 1) / 2;
        let mut stiff = DMatrix::zeros(nd1, nd1);
        let mut rhs = DMatrix::zeros(nd1, n_dofs);
        for (p, w) in build_rule.iter() {
            let grads = cell_basis.grads(p);
            // (grad_s(phi_i e_c), grad_s(phi_j e_e))
            //   = 0.5 (delta_ce grad_i . grad_j + grad_i[e] grad_j[c])
            for e in 0..d {
                for j in 0..n_k1 {
                    let row = e * n_k1 + j;
                    for c_comp in 0..d {
                        for i in 0..n_k1 {
                            let v = 0.5
                                * (if c_comp == e {
                                    grads[i].dot(&grads[j])
                                } else {
                                    0.0
                                } + grads[i][e] * grads[j][c_comp]);
                            if v == 0.0 {
                                continue;
                            }
                            stiff[(row, c_comp * n_k1 + i)] += w * v;
                            if i < n_l {
                                rhs[(row, c_comp * n_l + i)] += w * v;
                            }
                        }
                    }
                }
            }
        }
        for (lf, fo) in face_ops.iter().enumerate() {
            let off = layout.n_cell_dofs() + lf * layout.n_face_dofs();
            let n = fo.normal;
            for (r, (_, w)) in fo.rule.iter().enumerate() {
                let p = fo.rule.points[r];
                let grads = cell_basis.grads(p);
                // component c of grad_s(phi_j e_e) n is
                // 0.5 (delta_ce grad_j . n + grad_j[c] n[e])
                for e in 0..d {
                    for j in 0..n_k1 {
                        let row = e * n_k1 + j;
                        let gn = grads[j].dot(&n);
                        for c_comp in 0..d {
                            let v = 0.5
                                * (if c_comp == e { gn } else { 0.0 } + grads[j][c_comp] * n[e]);
                            if v == 0.0 {
                                continue;
                            }
                            for q in 0..n_fs {
                                rhs[(row, off + c_comp * n_fs + q)] += w * v * fo.psi[(r, q)];
                            }
                            for i in 0..n_l {
                                rhs[(row, c_comp * n_l + i)] -= w * v * fo.phi[(r, i)];
                            }
                        }
                    }
                }
            }
        }
        // constraints: mean value per component, then skew moments (a < b)
        let mut cons = DMatrix::zeros(n_rigid, nd1);
        let mut cons_rhs = DMatrix::zeros(n_rigid, n_dofs);
        for (p, w) in build_rule.iter() {
            let phi = cell_basis.eval(p);
            let grads = cell_basis.grads(p);
            for c_comp in 0..d {
                for i in 0..n_k1 {
                    cons[(c_comp, c_comp * n_k1 + i)] += w * phi[i];
                    if i < n_l {
                        cons_rhs[(c_comp, c_comp * n_l + i)] += w * phi[i];
                    }
                }
            }
            let mut row = d;
            for a in 0..d {
                for b in (a + 1)..d {
                    // int_T (d_a u_b - d_b u_a) / 2
                    for i in 0..n_k1 {
                        cons[(row, b * n_k1 + i)] += w * 0.5 * grads[i][a];
                        cons[(row, a * n_k1 + i)] -= w * 0.5 * grads[i][b];
                    }
                    row += 1;
                }
            }
        }
        for (lf, fo) in face_ops.iter().enumerate() {
            let off = layout.n_cell_dofs() + lf * layout.n_face_dofs();
            let n = fo.normal;
            for (r, (_, w)) in fo.rule.iter().enumerate() {
                let mut row = d;
                for a in 0..d {
                    for b in (a + 1)..d {
                        // boundary counterpart 0.5 (v_b n_a - v_a n_b)
                        for q in 0..n_fs {
                            cons_rhs[(row, off + b * n_fs + q)] += w * 0.5 * n[a] * fo.psi[(r, q)];
                            cons_rhs[(row, off + a * n_fs + q)] -= w * 0.5 * n[b] * fo.psi[(r, q)];
                        }
                        row += 1;
                    }
                }
            }
        }
        // bordered system [[A, C^T], [C, 0]]
        let nb = nd1 + n_rigid;
        let mut bordered = DMatrix::zeros(nb, nb);
        bordered.view_mut((0, 0), (nd1, nd1)).copy_from(&stiff);
        bordered
            .view_mut((0, nd1), (nd1, n_rigid))
            .copy_from(&cons.transpose());
        bordered.view_mut((nd1, 0), (n_rigid, nd1)).copy_from(&cons);
        let mut bordered_rhs = DMatrix::zeros(nb, n_dofs);
        bordered_rhs.view_mut((0, 0), (nd1, n_dofs)).copy_from(&rhs);
        bordered_rhs
            .view_mut((nd1, 0), (n_rigid, n_dofs))
            .copy_from(&cons_rhs);
        let lu = bordered.lu();
        let solved = lu
            .solve(&bordered_rhs)
            .ok_or(OperatorError::SingularNeumann { cell })?;
        let displacement = solved.view((0, 0), (nd1, n_dofs)).into_owned();

        // ---- stabilization ---------------------------------------------------
        // cell-degree projection of degree-(k+1) coefficients: M_l^{-1} M_k1[..]
        // (the cell-degree projector keeps the correction consistent through
        // degree k+1 for the mixed-order l = k-1 variant; at l = k it is the
        // equal-order operator)
        let proj_l = mass_l.solve(&m_k1.view((0, 0), (n_l, n_k1)).into_owned());
        let simplified = l > k;

        // theta_F(v) = v_F - Pi_F(v_T|_F) and the dof map (0, theta)
        let mut z = DMatrix::zeros(n_dofs, n_dofs);
        let mut theta_all: Vec<DMatrix<f64>> = Vec::with_capacity(face_ops.len());
        let mut face_proj: Vec<DMatrix<f64>> = Vec::with_capacity(face_ops.len());
        for (lf, fo) in face_ops.iter().enumerate() {
            let off = layout.n_cell_dofs() + lf * layout.n_face_dofs();
            // scalar projection of the cell basis onto the face basis
            let mut rhs_pf = DMatrix::zeros(n_fs, n_k1);
            for (r, (_, w)) in fo.rule.iter().enumerate() {
                for q in 0..n_fs {
                    for i in 0..n_k1 {
                        rhs_pf[(q, i)] += w * fo.psi[(r, q)] * fo.phi[(r, i)];
                    }
                }
            }
            let pf = fo.mass.solve(&rhs_pf); // n_fs x n_k1

            let mut theta = DMatrix::zeros(d * n_fs, n_dofs);
            for c_comp in 0..d {
                for q in 0..n_fs {
                    let row = c_comp * n_fs + q;
                    theta[(row, off + c_comp * n_fs + q)] = 1.0;
                    for i in 0..n_l {
                        theta[(row, c_comp * n_l + i)] -= pf[(q, i)];
                    }
                }
            }
            for c_comp in 0..d {
                z.view_mut((off + c_comp * n_fs, 0), (n_fs, n_dofs))
                    .copy_from(&theta.view((c_comp * n_fs, 0), (n_fs, n_dofs)).into_owned());
            }
            theta_all.push(theta);
            face_proj.push(pf);
        }

        let face_stab: Vec<DMatrix<f64>> = if simplified {
            theta_all
        } else {
            // D(0, theta), then the (I - Pi_T^l) residual trace per face
            let d0 = &displacement * &z; // nd1 x n_dofs
            let mut residual = d0.clone();
            for c_comp in 0..d {
                let block = d0.view((c_comp * n_k1, 0), (n_k1, n_dofs)).into_owned();
                let low = &proj_l * &block; // n_l x n_dofs
                let mut r = block;
                for i in 0..n_l {
                    for col in 0..n_dofs {
                        r[(i, col)] -= low[(i, col)];
                    }
                }
                residual
                    .view_mut((c_comp * n_k1, 0), (n_k1, n_dofs))
                    .copy_from(&r);
            }
            theta_all
                .into_iter()
                .enumerate()
                .map(|(lf, mut s)| {
                    let pf = &face_proj[lf];
                    for c_comp in 0..d {
                        let block = residual.view((c_comp * n_k1, 0), (n_k1, n_dofs));
                        let corr = pf * block; // n_fs x n_dofs
                        for q in 0..n_fs {
                            for col in 0..n_dofs {
                                s[(c_comp * n_fs + q, col)] -= corr[(q, col)];
                            }
                        }
                    }
                    s
                })
                .collect()
        };

        // assembled bilinear matrix with gamma = 1/h_F
        let mut stabilization = DMatrix::zeros(n_dofs, n_dofs);
        for (lf, fo) in face_ops.iter().enumerate() {
            let s = &face_stab[lf];
            let w = 1.0 / fo.diameter;
            for c_comp in 0..d {
                let sc = s.view((c_comp * n_fs, 0), (n_fs, n_dofs)).into_owned();
                let msc = &fo.mass_mat * &sc;
                stabilization.gemm_tr(w, &sc, &msc, 1.0);
            }
        }

        // ---- behavior quadrature and strain interpolation --------------------
        let quad = cell_rule(mesh, cell, layout.behavior_order());
        let mut strain_at = Vec::with_capacity(quad.len());
        for p in &quad.points {
            let phi = cell_basis.eval(*p);
            let mut b = DMatrix::zeros(n_sym, n_dofs);
            for m in 0..n_sym {
                for i in 0..n_k {
                    let v = phi[i];
                    if v == 0.0 {
                        continue;
                    }
                    for col in 0..n_dofs {
                        b[(m, col)] += v * strain[(m * n_k + i, col)];
                    }
                }
            }
            strain_at.push(b);
        }

        let load_rule = build_rule;
        let load_phi = {
            let full = cell_basis.eval_matrix(&load_rule.points);
            full.view((0, 0), (load_rule.len(), n_l)).into_owned()
        };

        Ok(CellOperators {
            cell,
            layout,
            faces,
            n_dofs,
            strain,
            displacement,
            stabilization,
            face_stab,
            quad,
            strain_at,
            cell_basis,
            mass_l,
            mass_k,
            load_rule,
            load_phi,
            face_ops,
        })
    }

    /// Builds operator sets for every cell (parallel over cells).
    pub fn build_all(mesh: &Mesh, layout: DofLayout) -> Result<Vec<CellOperators>, OperatorError> {
        let results = crate::exec::map_indexed(mesh.n_cells(), |c| Self::build(mesh, c, layout));
        results.into_iter().collect()
    }

    /// Reduction I(v) = (Pi_T^l v, Pi_F^k v) of a smooth field into a local
    /// dof vector. `extra_order` raises the projection quadrature beyond the
    /// build order (polynomials of degree <= k+1 are already exact at 0).
    pub fn reduce<F: Fn(Vec3) -> Vec3>(&self, mesh: &Mesh, f: F, extra_order: usize) -> DVector<f64> {
        let d = self.layout.dim;
        let n_l = self.layout.n_cell_scalar();
        let n_fs = self.layout.n_face_scalar();
        let mut dofs = DVector::zeros(self.n_dofs);

        let basis_l = MonomialBasis::cell(
            d,
            self.layout.cell_degree,
            mesh.cell(self.cell).barycenter,
            mesh.cell(self.cell).diameter,
        );
        let coeffs = if extra_order == 0 {
            l2_project_vector(d, &basis_l, &self.mass_l, &self.load_rule, &f)
        } else {
            let rule = cell_rule(mesh, self.cell, self.layout.build_order() + extra_order);
            let mm = factorize_mass(mass_matrix(&basis_l, &rule)).expect("cell mass SPD");
            l2_project_vector(d, &basis_l, &mm, &rule, &f)
        };
        for c in 0..d {
            for i in 0..n_l {
                dofs[c * n_l + i] = coeffs[c][i];
            }
        }

        for (lf, fo) in self.face_ops.iter().enumerate() {
            let off = self.face_offset(lf);
            let coeffs = if extra_order == 0 {
                l2_project_vector(d, &fo.basis, &fo.mass, &fo.rule, &f)
            } else {
                let rule = face_rule(mesh, fo.face, self.layout.build_order() + extra_order);
                let mm = factorize_mass(mass_matrix(&fo.basis, &rule)).expect("face mass SPD");
                l2_project_vector(d, &fo.basis, &mm, &rule, &f)
            };
            for c in 0..d {
                for q in 0..n_fs {
                    dofs[off + c * n_fs + q] = coeffs[c][q];
                }
            }
        }
        dofs
    }

    /// Local discrete strain semi-norm
    /// `(|grad_s v_T|_T^2 + sum_F |v_T - v_F|_F^2 / h_F)^(1/2)`.
    pub fn strain_seminorm(&self, v: &DVector<f64>) -> f64 {
        let d = self.layout.dim;
        let n_l = self.layout.n_cell_scalar();
        let n_fs = self.layout.n_face_scalar();
        let mut total = 0.0;
        for (p, w) in self.load_rule.iter() {
            let grads = self.cell_basis.grads(p);
            let mut g = [[0.0f64; 3]; 3];
            for c in 0..d {
                for i in 0..n_l {
                    let coeff = v[c * n_l + i];
                    if coeff == 0.0 {
                        continue;
                    }
                    for a in 0..d {
                        g[c][a] += coeff * grads[i][a];
                    }
                }
            }
            let mut frob = 0.0;
            for a in 0..d {
                for b in 0..d {
                    let s = 0.5 * (g[a][b] + g[b][a]);
                    frob += s * s;
                }
            }
            total += w * frob;
        }
        for (lf, fo) in self.face_ops.iter().enumerate() {
            let off = self.face_offset(lf);
            let mut acc = 0.0;
            for (r, (_, w)) in fo.rule.iter().enumerate() {
                let mut diff2 = 0.0;
                for c in 0..d {
                    let mut vt = 0.0;
                    for i in 0..n_l {
                        vt += v[c * n_l + i] * fo.phi[(r, i)];
                    }
                    let mut vf = 0.0;
                    for q in 0..n_fs {
                        vf += v[off + c * n_fs + q] * fo.psi[(r, q)];
                    }
                    diff2 += (vt - vf) * (vt - vf);
                }
                acc += w * diff2;
            }
            total += acc / fo.diameter;
        }
        total.sqrt()
    }

    /// Strain (Mandel components) of a dof vector at behavior point `j`.
    pub fn strain_at_point(&self, j: usize, v: &DVector<f64>) -> DVector<f64> {
        &self.strain_at[j] * v
    }
}

/// Applies the orthonormal symmetric basis tensor E_m to a vector.
pub(crate) fn mandel_apply(dim: usize, m: usize, v: Vec3) -> Vec3 {
    let (a, b) = mandel_index_pairs(dim)[m];
    let mut out = Vec3::zeros();
    if a == b {
        out[a] = v[a];
    } else {
        out[a] = v[b] / SQRT_2;
        out[b] = v[a] / SQRT_2;
    }
    out
}
