//! Symmetric second-order tensors in an orthonormal (Mandel) component basis,
//! plus the isotropic elastic stiffness in that basis.
//!
//! A symmetric 3x3 tensor is stored as six components
//! `[t11, t22, t33, s*t23, s*t13, s*t12]` with `s = sqrt(2)`. The scaling
//! makes the component dot product equal to the Frobenius double contraction,
//! so fourth-order tensors with minor symmetries become plain 6x6 matrices
//! whose eigenvalues are the tensor eigenvalues.
//!
//! The 2D (plane-strain) counterpart uses three components
//! `[t11, t22, s*t12]`.

use nalgebra::{DMatrix, DVector, Matrix3, Matrix6, Vector6};

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Number of independent symmetric-tensor components in `d` dimensions.
pub fn sym_components(dim: usize) -> usize {
    dim * (dim + 1) / 2
}

/// Index pairs (i, j), i <= j, defining the Mandel component order for `d` in {2, 3}.
///
/// 3D order: (0,0), (1,1), (2,2), (1,2), (0,2), (0,1). 2D order: (0,0), (1,1), (0,1).
pub fn mandel_index_pairs(dim: usize) -> &'static [(usize, usize)] {
    match dim {
        2 => &[(0, 0), (1, 1), (0, 1)],
        3 => &[(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)],
        _ => panic!("unsupported dimension {dim}"),
    }
}

/// Converts a symmetric 3x3 matrix to its Mandel vector.
pub fn to_mandel(m: &Matrix3<f64>) -> Vector6<f64> {
    Vector6::new(
        m[(0, 0)],
        m[(1, 1)],
        m[(2, 2)],
        SQRT_2 * m[(1, 2)],
        SQRT_2 * m[(0, 2)],
        SQRT_2 * m[(0, 1)],
    )
}

/// Converts a Mandel vector back to the symmetric 3x3 matrix.
pub fn from_mandel(v: &Vector6<f64>) -> Matrix3<f64> {
    let h = 1.0 / SQRT_2;
    Matrix3::new(
        v[0],
        h * v[5],
        h * v[4],
        h * v[5],
        v[1],
        h * v[3],
        h * v[4],
        h * v[3],
        v[2],
    )
}

/// Trace of a Mandel-represented tensor.
pub fn trace(v: &Vector6<f64>) -> f64 {
    v[0] + v[1] + v[2]
}

/// Deviatoric part in Mandel components.
pub fn deviator(v: &Vector6<f64>) -> Vector6<f64> {
    let t = trace(v) / 3.0;
    let mut d = *v;
    d[0] -= t;
    d[1] -= t;
    d[2] -= t;
    d
}

/// Embeds in-plane 2D Mandel components `[t11, t22, s*t12]` into the 3D vector
/// with zero out-of-plane entries (plane-strain total-strain convention).
pub fn embed_plane_strain(v2: &DVector<f64>) -> Vector6<f64> {
    debug_assert_eq!(v2.len(), 3);
    Vector6::new(v2[0], v2[1], 0.0, 0.0, 0.0, v2[2])
}

/// Restricts a 3D Mandel vector to its in-plane components `[t11, t22, s*t12]`.
pub fn restrict_in_plane(v: &Vector6<f64>) -> DVector<f64> {
    DVector::from_vec(vec![v[0], v[1], v[5]])
}

/// Rows/columns of the 6x6 Mandel matrix that carry the in-plane block.
pub const IN_PLANE: [usize; 3] = [0, 1, 5];

/// Restricts a 6x6 Mandel modulus to the in-plane 3x3 block.
pub fn restrict_modulus(c: &Matrix6<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(3, 3);
    for (a, &ia) in IN_PLANE.iter().enumerate() {
        for (b, &ib) in IN_PLANE.iter().enumerate() {
            out[(a, b)] = c[(ia, ib)];
        }
    }
    out
}

/// Isotropic elastic stiffness `2 mu I + lambda m (x) m` as a Mandel 6x6 matrix,
/// with `m = [1, 1, 1, 0, 0, 0]`.
pub fn elastic_stiffness(mu: f64, lambda: f64) -> Matrix6<f64> {
    let mut c = Matrix6::identity() * (2.0 * mu);
    for i in 0..3 {
        for j in 0..3 {
            c[(i, j)] += lambda;
        }
    }
    c
}

/// Orthogonal projector onto deviatoric tensors, as a Mandel 6x6 matrix.
pub fn deviatoric_projector() -> Matrix6<f64> {
    let mut p = Matrix6::identity();
    for i in 0..3 {
        for j in 0..3 {
            p[(i, j)] -= 1.0 / 3.0;
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mandel_round_trip_preserves_frobenius_product() {
        let a = Matrix3::new(1.0, 0.5, -0.2, 0.5, 2.0, 0.7, -0.2, 0.7, -1.0);
        let b = Matrix3::new(0.3, -0.1, 0.9, -0.1, 1.1, 0.0, 0.9, 0.0, 0.4);
        let va = to_mandel(&a);
        let vb = to_mandel(&b);
        let frob: f64 = (a * b.transpose()).trace();
        assert!((va.dot(&vb) - frob).abs() < 1e-14);
        assert!((from_mandel(&va) - a).norm() < 1e-14);
    }

    #[test]
    fn elastic_stiffness_spectrum() {
        // E = 210e3, nu = 0.3: eigenvalues 2*mu (x5) and 3*lambda + 2*mu (x1).
        let e = 210e3;
        let nu = 0.3;
        let mu = e / (2.0 * (1.0 + nu));
        let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        let c = elastic_stiffness(mu, lambda);
        let mut eig: Vec<f64> = c.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for v in &eig[..5] {
            assert!((v - 2.0 * mu).abs() < 1e-9 * mu);
        }
        assert!((eig[5] - (3.0 * lambda + 2.0 * mu)).abs() < 1e-9 * (3.0 * lambda + 2.0 * mu));
    }

    #[test]
    fn deviator_is_trace_free_and_projector_matches() {
        let v = to_mandel(&Matrix3::new(
            3.0, 1.0, 0.0, 1.0, -2.0, 0.5, 0.0, 0.5, 4.0,
        ));
        let d = deviator(&v);
        assert!(trace(&d).abs() < 1e-14);
        let p = deviatoric_projector();
        assert!((p * v - d).norm() < 1e-14);
    }

    #[test]
    fn plane_strain_embedding_round_trip() {
        let v2 = DVector::from_vec(vec![1.0, -0.5, 0.3]);
        let v3 = embed_plane_strain(&v2);
        assert_eq!(v3[2], 0.0);
        assert_eq!(v3[3], 0.0);
        assert_eq!(v3[4], 0.0);
        assert!((restrict_in_plane(&v3) - v2).norm() < 1e-15);
    }
}
