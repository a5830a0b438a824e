//! Dressed states of the non-Hermitian 2×2 potential matrix
//! `Ṽ = −½ [[0, Ω̃], [Ω̃, 2(δ̃ + iγ̃/2)]]`.
//!
//! Eigenvector `n` is column `n` of `U`; `U⁻¹` carries the normalisation
//! factor `f = 1/det U`. With `γ̃ = 0` the phase `β` vanishes and `U` is a
//! rotation.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::params::Kinematics;
use crate::principal_sqrt;

const DEGENERATE_REL: f64 = 1e-13;
const SINGULAR_DET: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedFrame {
    pub v_plus: Complex64,
    pub v_minus: Complex64,
    /// Mixing angle in `[0, π/2)`.
    pub phi: f64,
    /// `arg Ṽ₊`.
    pub beta: f64,
    pub u: Mat2,
    pub u_inv: Mat2,
    pub f: Complex64,
    /// Spatial rate of the `|+⟩` mode, `√(Ṽ₊ − k̃_x²)`.
    pub alpha1: Complex64,
    /// Spatial rate of the `|−⟩` mode, `√(Ṽ₋ − k̃_x²)`.
    pub alpha2: Complex64,
}

impl DressedFrame {
    /// Dresses the medium for the given kinematics.
    pub fn new(kin: &Kinematics, gamma: f64, omega: f64) -> Result<Self> {
        let (v_plus, v_minus) = eigenvalues(kin.delta_eff, gamma, omega);
        let (phi, beta) = mixing_angles(v_plus, omega, kin.delta_eff)?;
        let (u, u_inv, f) = transform_matrices(phi, beta)?;
        let (alpha1, alpha2) = decay_rates(v_plus, v_minus, kin.kx);
        Ok(Self { v_plus, v_minus, phi, beta, u, u_inv, f, alpha1, alpha2 })
    }

    /// The scaled potential matrix the frame diagonalises.
    pub fn potential(delta_eff: f64, gamma: f64, omega: f64) -> Mat2 {
        potential_matrix(delta_eff, gamma, omega)
    }

    pub fn alphas(&self) -> [Complex64; 2] {
        [self.alpha1, self.alpha2]
    }

    pub fn eigenvalues(&self) -> [Complex64; 2] {
        [self.v_plus, self.v_minus]
    }
}

pub fn potential_matrix(delta_eff: f64, gamma: f64, omega: f64) -> Mat2 {
    let off = Complex64::new(-0.5 * omega, 0.0);
    [
        [Complex64::new(0.0, 0.0), off],
        [off, -Complex64::new(delta_eff, 0.5 * gamma)],
    ]
}

/// `Ṽ± = ½[−a ± √(a² + Ω̃²)]`, `a = δ̃ + iγ̃/2`, principal root.
///
/// Labels follow the sign in front of the root. The member of the pair that
/// suffers cancellation is recovered from the product `Ṽ₊Ṽ₋ = −Ω̃²/4`.
pub fn eigenvalues(delta_eff: f64, gamma: f64, omega: f64) -> (Complex64, Complex64) {
    let a = Complex64::new(delta_eff, 0.5 * gamma);
    let root = (a * a + omega * omega).sqrt();
    let plus = 0.5 * (-a + root);
    let minus = 0.5 * (-a - root);
    let product = Complex64::new(-0.25 * omega * omega, 0.0);
    if plus.norm() >= minus.norm() {
        if plus == Complex64::new(0.0, 0.0) {
            return (plus, minus);
        }
        (plus, product / plus)
    } else {
        (product / minus, minus)
    }
}

/// Returns `(φ, β)` with `tan φ = Ω̃ / (2|Ṽ₊|)` and `β = arg Ṽ₊`.
///
/// `delta_eff` only sets the scale of the degeneracy test.
pub fn mixing_angles(v_plus: Complex64, omega: f64, delta_eff: f64) -> Result<(f64, f64)> {
    let modulus = v_plus.norm();
    let scale = 1.0_f64.max(omega).max(delta_eff.abs());
    if modulus < DEGENERATE_REL * scale {
        return Err(Error::DegenerateFrame { modulus });
    }
    Ok((omega.atan2(2.0 * modulus), v_plus.arg()))
}

/// `U`, `U⁻¹` and `f = (e^{−iβ} sin²φ + e^{iβ} cos²φ)⁻¹`.
pub fn transform_matrices(phi: f64, beta: f64) -> Result<(Mat2, Mat2, Complex64)> {
    let (s, c) = phi.sin_cos();
    let e_plus = Complex64::from_polar(1.0, beta);
    let e_minus = Complex64::from_polar(1.0, -beta);
    let det = e_minus * s * s + e_plus * c * c;
    if det.norm() < SINGULAR_DET {
        return Err(Error::SingularTransform { det: det.norm() });
    }
    let f = det.inv();
    let re = |x: f64| Complex64::new(x, 0.0);
    let u = [[re(s), re(c)], [-e_plus * c, e_minus * s]];
    let u_inv = [[f * e_minus * s, -f * c], [f * e_plus * c, f * s]];
    Ok((u, u_inv, f))
}

/// `α̃± = √(Ṽ± − k̃_x²)` on the principal branch.
pub fn decay_rates(v_plus: Complex64, v_minus: Complex64, kx: f64) -> (Complex64, Complex64) {
    let e = kx * kx;
    (principal_sqrt(v_plus - e), principal_sqrt(v_minus - e))
}
