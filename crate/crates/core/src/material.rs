//! J2 elastoplasticity with combined linear isotropic/kinematic hardening.
//!
//! The local state advances through an elastic trial step followed, when the
//! von Mises criterion is violated, by a closest-point (radial return)
//! projection back onto the yield surface. For linear hardening the plastic
//! multiplier has the closed form `dp = phi_trial / (3 mu + Hbar)` with the
//! generalized hardening modulus `Hbar = H + 1.5 K`; a bisection oracle
//! solving the consistency equation directly backs this up in the tests.
//!
//! Everything here works on full 3x3 symmetric tensors in Mandel components;
//! plane-strain callers embed/restrict (the plastic strain develops an
//! out-of-plane component even when the total strain does not).

use crate::tensor::{deviator, deviatoric_projector, elastic_stiffness, trace};
use nalgebra::{Matrix6, Vector6};

/// Elastic and hardening constants (stress units: MPa).
#[derive(Debug, Clone, Copy)]
pub struct MaterialParams {
    /// Young modulus.
    pub young: f64,
    /// Poisson ratio.
    pub poisson: f64,
    /// Initial yield stress.
    pub sigma_y0: f64,
    /// Isotropic hardening modulus.
    pub hardening_iso: f64,
    /// Kinematic hardening modulus.
    pub hardening_kin: f64,
}

impl MaterialParams {
    pub fn new(young: f64, poisson: f64, sigma_y0: f64, h_iso: f64, k_kin: f64) -> Self {
        let p = MaterialParams {
            young,
            poisson,
            sigma_y0,
            hardening_iso: h_iso,
            hardening_kin: k_kin,
        };
        assert!(p.mu() > 0.0, "shear modulus must be positive");
        assert!(
            3.0 * p.lambda() + 2.0 * p.mu() > 0.0,
            "bulk modulus must be positive"
        );
        assert!(sigma_y0 > 0.0, "initial yield stress must be positive");
        assert!(h_iso >= 0.0 && k_kin >= 0.0, "hardening moduli must be >= 0");
        p
    }

    /// Elastic-only parameters (yield never reached in practice).
    pub fn elastic(young: f64, poisson: f64) -> Self {
        MaterialParams::new(young, poisson, f64::MAX / 4.0, 0.0, 0.0)
    }

    pub fn mu(&self) -> f64 {
        self.young / (2.0 * (1.0 + self.poisson))
    }

    pub fn lambda(&self) -> f64 {
        self.young * self.poisson / ((1.0 + self.poisson) * (1.0 - 2.0 * self.poisson))
    }

    /// Generalized hardening modulus `H + 1.5 K`.
    pub fn hbar(&self) -> f64 {
        self.hardening_iso + 1.5 * self.hardening_kin
    }

    /// Elastic stiffness in Mandel form.
    pub fn stiffness(&self) -> Matrix6<f64> {
        elastic_stiffness(self.mu(), self.lambda())
    }

    pub fn is_perfectly_plastic(&self) -> bool {
        self.hardening_iso == 0.0 && self.hardening_kin == 0.0
    }
}

/// Per-quadrature-point internal variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialState {
    /// Plastic strain (Mandel components, trace-free).
    pub eps_p: Vector6<f64>,
    /// Equivalent plastic strain.
    pub p: f64,
}

impl Default for MaterialState {
    fn default() -> Self {
        MaterialState {
            eps_p: Vector6::zeros(),
            p: 0.0,
        }
    }
}

/// Outcome of one constitutive update.
#[derive(Debug, Clone)]
pub struct StepResult {
    pub state: MaterialState,
    /// Cauchy stress (Mandel).
    pub stress: Vector6<f64>,
    /// Consistent elastoplastic tangent (Mandel 6x6).
    pub tangent: Matrix6<f64>,
    /// Plastic multiplier increment (zero on the elastic branch).
    pub plastic_multiplier: f64,
}

/// Which linearization the plastic branch reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TangentKind {
    /// Continuum-form modulus evaluated at the returned state.
    #[default]
    Continuum,
    /// Algorithmically consistent modulus of the discrete return map
    /// (quadratic Newton convergence).
    Consistent,
}

/// Linear elastic stress `sigma = 2 mu eps_e + lambda tr(eps_e) I`.
pub fn elastic_stress(params: &MaterialParams, eps_e: &Vector6<f64>) -> Vector6<f64> {
    let mut s = 2.0 * params.mu() * eps_e;
    let t = params.lambda() * trace(eps_e);
    s[0] += t;
    s[1] += t;
    s[2] += t;
    s
}

/// Von Mises yield function `sqrt(3/2) |dev(sigma - beta)| - sigma_y0 - H p`
/// with back-stress `beta = K eps_p`.
pub fn yield_function(params: &MaterialParams, sigma: &Vector6<f64>, state: &MaterialState) -> f64 {
    let eta = deviator(&(sigma - params.hardening_kin * state.eps_p));
    (1.5f64).sqrt() * eta.norm() - params.sigma_y0 - params.hardening_iso * state.p
}

/// One incremental update: trial state, elastic/plastic branch, consistent
/// tangent. `eps` is the converged total strain of the previous step and
/// `deps` the strain increment, both full 3D Mandel vectors.
pub fn plasticity_step(
    params: &MaterialParams,
    state: &MaterialState,
    eps: &Vector6<f64>,
    deps: &Vector6<f64>,
    tangent_kind: TangentKind,
) -> StepResult {
    let mu = params.mu();
    let eps_e_trial = eps + deps - state.eps_p;
    let sigma_trial = elastic_stress(params, &eps_e_trial);
    let phi_trial = yield_function(params, &sigma_trial, state);

    let elastic = if phi_trial < 0.0 {
        true
    } else if phi_trial == 0.0 {
        // tie on the yield surface: elastic for neutral or unloading increments
        let eta = deviator(&(sigma_trial - params.hardening_kin * state.eps_p));
        let n = eta / eta.norm();
        let loading = (1.5f64).sqrt() * n.dot(&elastic_stress(params, deps));
        loading <= 0.0
    } else {
        false
    };

    if elastic {
        return StepResult {
            state: *state,
            stress: sigma_trial,
            tangent: params.stiffness(),
            plastic_multiplier: 0.0,
        };
    }

    let hbar = params.hbar();
    let eta_trial = deviator(&(sigma_trial - params.hardening_kin * state.eps_p));
    let q_trial = (1.5f64).sqrt() * eta_trial.norm();
    let n = eta_trial / eta_trial.norm();

    let dp = phi_trial / (3.0 * mu + hbar);
    let deps_p = dp * (1.5f64).sqrt() * n;
    let new_state = MaterialState {
        eps_p: state.eps_p + deps_p,
        p: state.p + dp,
    };
    let stress = sigma_trial - 2.0 * mu * (1.5f64).sqrt() * dp * n;

    let nn = n * n.transpose();
    let mut tangent = params.stiffness() - (6.0 * mu * mu / (3.0 * mu + hbar)) * nn;
    if tangent_kind == TangentKind::Consistent {
        tangent -= 6.0 * mu * mu * (dp / q_trial) * (deviatoric_projector() - nn);
    }

    debug_assert!(dp >= 0.0);
    debug_assert!(trace(&deps_p).abs() <= 1e-12 * deps_p.norm().max(1.0));
    debug_assert!(
        yield_function(params, &stress, &new_state) <= 1e-9 * params.sigma_y0,
        "return map must land on the yield surface"
    );

    StepResult {
        state: new_state,
        stress,
        tangent,
        plastic_multiplier: dp,
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("bisection bracket failure: phi({lo}) = {flo:.3e}, phi({hi}) = {fhi:.3e}")]
    Bracket { lo: f64, hi: f64, flo: f64, fhi: f64 },
}

use thiserror::Error;

/// Verification-only update: solves the scalar consistency equation
/// `phi(dp) = 0` by bisection on `dp in [0, phi_trial / (3 mu)]` instead of
/// using the closed form. Radial flow direction is shared with the production
/// path; the multiplier is not.
pub fn oracle_step(
    params: &MaterialParams,
    state: &MaterialState,
    eps: &Vector6<f64>,
    deps: &Vector6<f64>,
) -> Result<(MaterialState, Vector6<f64>), OracleError> {
    let mu = params.mu();
    let eps_e_trial = eps + deps - state.eps_p;
    let sigma_trial = elastic_stress(params, &eps_e_trial);
    let phi_trial = yield_function(params, &sigma_trial, state);
    if phi_trial <= 0.0 {
        return Ok((*state, sigma_trial));
    }

    let eta_trial = deviator(&(sigma_trial - params.hardening_kin * state.eps_p));
    let n = eta_trial / eta_trial.norm();
    let candidate = |dp: f64| -> (MaterialState, Vector6<f64>) {
        let deps_p = dp * (1.5f64).sqrt() * n;
        let s = MaterialState {
            eps_p: state.eps_p + deps_p,
            p: state.p + dp,
        };
        let sigma = sigma_trial - 2.0 * mu * (1.5f64).sqrt() * dp * n;
        (s, sigma)
    };
    let phi_at = |dp: f64| -> f64 {
        let (s, sigma) = candidate(dp);
        yield_function(params, &sigma, &s)
    };

    // for perfect plasticity the root sits exactly at the upper endpoint;
    // leave rounding headroom there
    let (mut lo, mut hi) = (0.0, phi_trial / (3.0 * mu) * (1.0 + 1e-9));
    let (flo, fhi) = (phi_at(lo), phi_at(hi));
    if !(flo >= 0.0 && fhi <= 0.0) {
        return Err(OracleError::Bracket { lo, hi, flo, fhi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi_at(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    let dp = 0.5 * (lo + hi);
    let (s, sigma) = candidate(dp);
    Ok((s, sigma))
}

/// Eigenvalues of a Mandel 6x6 modulus, ascending. The Mandel scaling makes
/// these the true fourth-order tensor eigenvalues.
pub fn tangent_spectrum(tangent: &Matrix6<f64>) -> [f64; 6] {
    debug_assert!((tangent - tangent.transpose()).norm() <= 1e-10 * tangent.norm());
    let sym = 0.5 * (tangent + tangent.transpose());
    let mut eig: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    [eig[0], eig[1], eig[2], eig[3], eig[4], eig[5]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector6;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Sphere benchmark parameters: perfect plasticity.
    fn sphere_params() -> MaterialParams {
        MaterialParams::new(210e3, 0.3, 240.0, 0.0, 0.0)
    }

    /// Strip benchmark parameters: combined hardening.
    fn strip_params() -> MaterialParams {
        MaterialParams::new(70.0, 0.3, 0.8, 10.0, 5.0)
    }

    fn cook_params() -> MaterialParams {
        MaterialParams::new(70.0, 0.4999, 0.243, 0.135, 0.0)
    }

    fn cube_params() -> MaterialParams {
        MaterialParams::new(200e3, 0.3, 150.0, 0.0, 0.0)
    }

    fn random_sym(rng: &mut ChaCha8Rng, scale: f64) -> Vector6<f64> {
        Vector6::from_fn(|_, _| rng.random_range(-scale..scale))
    }

    #[test]
    fn elastic_stress_closed_forms() {
        let p = sphere_params();
        let zero = elastic_stress(&p, &Vector6::zeros());
        assert_eq!(zero, Vector6::zeros());

        // identity strain: sigma = (2 mu + 3 lambda) I
        let id = Vector6::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0);
        let s = elastic_stress(&p, &id);
        let expect = 2.0 * p.mu() + 3.0 * p.lambda();
        for i in 0..3 {
            assert!((s[i] - expect).abs() < 1e-9 * expect);
        }
        for i in 3..6 {
            assert_eq!(s[i], 0.0);
        }

        // uniaxial strain e1 (x) e1: sigma11 = lambda + 2 mu, sigma22 = sigma33 = lambda
        let uni = Vector6::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let s = elastic_stress(&p, &uni);
        assert!((s[0] - (p.lambda() + 2.0 * p.mu())).abs() < 1e-9 * s[0]);
        assert!((s[1] - p.lambda()).abs() < 1e-9 * p.lambda());
        assert!((s[2] - p.lambda()).abs() < 1e-9 * p.lambda());
    }

    #[test]
    fn yield_function_closed_forms() {
        let p = sphere_params();
        let virgin = MaterialState::default();
        assert_eq!(yield_function(&p, &Vector6::zeros(), &virgin), -p.sigma_y0);
        // hydrostatic stress does not change the yield value
        let hydro = Vector6::new(57.0, 57.0, 57.0, 0.0, 0.0, 0.0);
        assert!((yield_function(&p, &hydro, &virgin) + p.sigma_y0).abs() < 1e-12 * p.sigma_y0);
        // uniaxial stress s e1 (x) e1: phi = |s| - sigma_y0
        for s in [100.0, -175.0] {
            let sigma = Vector6::new(s, 0.0, 0.0, 0.0, 0.0, 0.0);
            let phi = yield_function(&p, &sigma, &virgin);
            assert!((phi - (s.abs() - p.sigma_y0)).abs() < 1e-10 * p.sigma_y0);
        }
    }

    /// Numeric confirmation of `Hbar = H + 1.5 K` from its definition
    /// `dPhi/dA : d2Psi_p/dalpha2 : dPhi/dA` by finite differences.
    #[test]
    fn generalized_hardening_modulus_matches_definition() {
        let p = strip_params();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // a stressed state beyond yield
        let sigma = Vector6::new(1.4, -0.3, 0.1, 0.2, -0.1, 0.4);
        let state = MaterialState {
            eps_p: deviator(&random_sym(&mut rng, 0.01)),
            p: 0.02,
        };
        let h = 1e-6;
        // dPhi/dbeta (tensorial, Mandel) and dPhi/dr by central differences,
        // differentiating phi(sigma, beta, r) written in force variables
        let phi_forces = |beta: &Vector6<f64>, r: f64| -> f64 {
            (1.5f64).sqrt() * deviator(&(sigma - beta)).norm() - p.sigma_y0 - r
        };
        let beta0 = p.hardening_kin * state.eps_p;
        let r0 = p.hardening_iso * state.p;
        let mut dphi_dbeta = Vector6::zeros();
        for i in 0..6 {
            let mut bp = beta0;
            let mut bm = beta0;
            bp[i] += h;
            bm[i] -= h;
            dphi_dbeta[i] = (phi_forces(&bp, r0) - phi_forces(&bm, r0)) / (2.0 * h);
        }
        let dphi_dr = (phi_forces(&beta0, r0 + h) - phi_forces(&beta0, r0 - h)) / (2.0 * h);
        // d2 Psi_p / dalpha2 = diag(K * I, H) in the (eps_p, p) variables
        let hbar_numeric = p.hardening_kin * dphi_dbeta.norm_squared()
            + p.hardening_iso * dphi_dr * dphi_dr;
        assert!(
            (hbar_numeric - p.hbar()).abs() < 1e-5 * p.hbar(),
            "numeric {hbar_numeric} vs closed form {}",
            p.hbar()
        );
    }

    #[test]
    fn small_increment_stays_elastic() {
        let p = strip_params();
        let state = MaterialState::default();
        let eps = Vector6::zeros();
        let deps = Vector6::new(1e-4, 0.0, 0.0, 0.0, 0.0, 0.0);
        let r = plasticity_step(&p, &state, &eps, &deps, TangentKind::Continuum);
        assert_eq!(r.state, state);
        assert_eq!(r.plastic_multiplier, 0.0);
        assert!((r.tangent - p.stiffness()).norm() == 0.0);
    }

    #[test]
    fn plastic_multiplier_closed_form_vs_oracle() {
        // uniaxial strain increment driving phi_trial past zero
        let p = strip_params();
        let state = MaterialState::default();
        let eps = Vector6::zeros();
        // find a strain with phi_trial near 0.1 MPa
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let deps = Vector6::new(mid, 0.0, 0.0, 0.0, 0.0, 0.0);
            let s = elastic_stress(&p, &deps);
            if yield_function(&p, &s, &state) < 0.1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let deps = Vector6::new(0.5 * (lo + hi), 0.0, 0.0, 0.0, 0.0, 0.0);
        let r = plasticity_step(&p, &state, &eps, &deps, TangentKind::Continuum);
        let expect = 0.1 / (3.0 * p.mu() + p.hardening_iso + 1.5 * p.hardening_kin);
        assert!((r.plastic_multiplier - expect).abs() < 1e-10 * expect.max(1e-12));
        let (ostate, osigma) = oracle_step(&p, &state, &eps, &deps).unwrap();
        assert!((r.stress - osigma).norm() < 1e-10);
        assert!((r.state.p - ostate.p).abs() < 1e-12);
    }

    #[test]
    fn perfect_plasticity_lands_on_yield_surface() {
        let p = sphere_params();
        let state = MaterialState::default();
        let eps = Vector6::zeros();
        // radial overshoot
        let deps = Vector6::new(0.004, -0.001, -0.001, 0.0005, 0.0, 0.001);
        let r = plasticity_step(&p, &state, &eps, &deps, TangentKind::Continuum);
        let dev_norm = (1.5f64).sqrt() * deviator(&r.stress).norm();
        assert!((dev_norm - 240.0).abs() < 1e-8, "got {dev_norm}");
        let (_, osigma) = oracle_step(&p, &state, &eps, &deps).unwrap();
        assert!((r.stress - osigma).norm() < 1e-8);
    }

    #[test]
    fn oracle_equivalence_randomized_all_benchmark_parameter_sets() {
        let sets = [sphere_params(), cook_params(), strip_params(), cube_params()];
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut plastic = 0usize;
        for _ in 0..10_000 {
            let p = sets[rng.random_range(0..sets.len())];
            let scale = 2.0 * p.sigma_y0 / p.young;
            let eps_p = deviator(&random_sym(&mut rng, scale));
            let state = MaterialState {
                eps_p,
                p: rng.random_range(0.0..scale),
            };
            let eps = random_sym(&mut rng, scale) + eps_p;
            let deps = random_sym(&mut rng, scale);
            let r = plasticity_step(&p, &state, &eps, &deps, TangentKind::Continuum);
            let (ostate, osigma) = oracle_step(&p, &state, &eps, &deps).unwrap();
            let tol = 1e-10 * p.sigma_y0.max(1.0);
            assert!(
                (r.stress - osigma).norm() < tol,
                "stress mismatch {:.3e}",
                (r.stress - osigma).norm()
            );
            assert!((r.state.eps_p - ostate.eps_p).norm() < 1e-10);
            // post-state contracts
            assert!(r.plastic_multiplier >= 0.0);
            assert!(trace(&r.state.eps_p).abs() < 1e-12);
            assert!(
                yield_function(&p, &r.stress, &r.state) <= 1e-9 * p.sigma_y0,
                "admissibility violated"
            );
            if r.plastic_multiplier > 0.0 {
                plastic += 1;
                // incompressible correction: trace(sigma) unchanged
                let strial =
                    elastic_stress(&p, &(eps + deps - state.eps_p));
                assert!(
                    (trace(&r.stress) - trace(&strial)).abs()
                        <= 1e-10 * strial.norm().max(1.0)
                );
                // radial return: returned deviatoric direction equals the trial one
                let eta_new = deviator(&(r.stress - p.hardening_kin * r.state.eps_p));
                let eta_trial = deviator(&(strial - p.hardening_kin * state.eps_p));
                let cos = eta_new.dot(&eta_trial) / (eta_new.norm() * eta_trial.norm());
                assert!(cos >= 1.0 - 1e-12);
            }
        }
        assert!(plastic > 2000, "want a healthy plastic fraction, got {plastic}");
    }

    #[test]
    fn monotone_loading_keeps_p_nondecreasing() {
        let p = strip_params();
        let mut state = MaterialState::default();
        let mut eps = Vector6::zeros();
        let deps = Vector6::new(5e-3, -2e-3, 0.0, 0.0, 0.0, 1e-3);
        let mut last_p = 0.0;
        for _ in 0..20 {
            let r = plasticity_step(&p, &state, &eps, &deps, TangentKind::Continuum);
            assert!(r.state.p >= last_p);
            // consistency along the loading path
            assert!(yield_function(&p, &r.stress, &r.state) <= 1e-9 * p.sigma_y0);
            last_p = r.state.p;
            state = r.state;
            eps += deps;
        }
        assert!(last_p > 0.0);
    }

    #[test]
    fn elastic_spectrum_and_plastic_spectra() {
        let p = sphere_params();
        let eig = tangent_spectrum(&p.stiffness());
        for v in &eig[..5] {
            assert!((v - 2.0 * p.mu()).abs() < 1e-9 * p.mu());
        }
        assert!((eig[5] - (3.0 * p.lambda() + 2.0 * p.mu())).abs() < 1e-9 * p.young);

        // perfect plasticity: tangent is PSD with a zero eigenvalue along the flow
        let state = MaterialState::default();
        let deps = Vector6::new(0.01, -0.003, -0.002, 0.001, 0.0, 0.002);
        let r = plasticity_step(&p, &state, &Vector6::zeros(), &deps, TangentKind::Continuum);
        assert!(r.plastic_multiplier > 0.0);
        let eig = tangent_spectrum(&r.tangent);
        assert!(eig[0] >= -1e-9 * 2.0 * p.mu());
        assert!(eig[0].abs() <= 1e-9 * 2.0 * p.mu(), "flow direction is soft");

        // strain hardening: strictly positive spectrum; smallest eigenvalue
        // matches the continuum-form value 2 mu Hbar / (3 mu + Hbar)
        let c = cook_params();
        let deps = Vector6::new(0.05, -0.02, -0.01, 0.004, 0.0, 0.01);
        let r = plasticity_step(&c, &state, &Vector6::zeros(), &deps, TangentKind::Continuum);
        assert!(r.plastic_multiplier > 0.0);
        let eig = tangent_spectrum(&r.tangent);
        assert!(eig[0] > 0.0);
        let theory = 2.0 * c.mu() * c.hbar() / (3.0 * c.mu() + c.hbar());
        assert!(
            (eig[0] - theory).abs() < 1e-9 * theory.max(1.0),
            "theta_min {} vs {theory}",
            eig[0]
        );
    }

    #[test]
    fn consistent_tangent_matches_finite_differences() {
        let p = strip_params();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let state = MaterialState {
            eps_p: deviator(&random_sym(&mut rng, 0.005)),
            p: 0.01,
        };
        let eps = random_sym(&mut rng, 0.02);
        let deps = random_sym(&mut rng, 0.05);
        let r = plasticity_step(&p, &state, &eps, &deps, TangentKind::Consistent);
        assert!(r.plastic_multiplier > 0.0, "need the plastic branch");
        let dir = {
            let d = random_sym(&mut rng, 1.0);
            d / d.norm()
        };
        // sigma(eps, deps + h dir) differentiated in h
        let mut err_at = Vec::new();
        for h in [1e-4, 1e-5, 1e-6, 1e-7] {
            let rp = plasticity_step(
                &p,
                &state,
                &eps,
                &(deps + h * dir),
                TangentKind::Consistent,
            );
            let fd = (rp.stress - r.stress) / h;
            let lin = r.tangent * dir;
            err_at.push((fd - lin).norm() / lin.norm());
        }
        // first-order agreement: error shrinks roughly linearly in h
        assert!(err_at[0] < 1e-2, "{err_at:?}");
        assert!(err_at[2] < 1e-4, "{err_at:?}");
        // the continuum-form tangent does NOT match the discrete map to this
        // accuracy for finite increments
        let rc = plasticity_step(&p, &state, &eps, &deps, TangentKind::Continuum);
        let h = 1e-6;
        let rp = plasticity_step(&p, &state, &eps, &(deps + h * dir), TangentKind::Continuum);
        let fd = (rp.stress - rc.stress) / h;
        let lin_cont = rc.tangent * dir;
        let lin_cons = r.tangent * dir;
        assert!((fd - lin_cons).norm() < (fd - lin_cont).norm());
    }

    #[test]
    fn continuum_tangent_fd_agreement_is_first_order_in_the_increment() {
        // for shrinking TOTAL increments the continuum and consistent forms
        // coalesce; contract: relative error <= C h over a decade sweep
        let p = cook_params();
        let state = MaterialState::default();
        let eps = Vector6::zeros();
        let base = Vector6::new(0.02, -0.007, -0.002, 0.001, 0.0, 0.004);
        let mut prev = f64::INFINITY;
        for scale in [1.0, 0.1, 0.01] {
            let deps = scale * base;
            let r = plasticity_step(&p, &state, &eps, &deps, TangentKind::Continuum);
            if r.plastic_multiplier == 0.0 {
                break;
            }
            let rcons = plasticity_step(&p, &state, &eps, &deps, TangentKind::Consistent);
            let gap = (r.tangent - rcons.tangent).norm() / r.tangent.norm();
            assert!(gap < prev || gap < 1e-12);
            prev = gap;
        }
    }
}
