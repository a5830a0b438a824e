//! Scaled parameter model and the kinematics of one incidence configuration.

use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::principal_sqrt;

/// Dimensionless description of one experiment.
///
/// Rates are in units of `γ`, wavenumbers in units of `k_γ`, the slab width
/// in `1/k_γ`. `theta` is the angle of incidence in radians, measured from
/// the slab normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledParams {
    /// Excited-state decay rate `γ̃` (1 in the usual scaling; 0 switches off
    /// absorption).
    pub gamma: f64,
    /// Laser detuning `Δ̃`.
    pub detuning: f64,
    /// Peak Rabi frequency `Ω̃`.
    pub omega: f64,
    /// Incident wavenumber magnitude `k̃`.
    pub k: f64,
    /// Laser wavenumber `k̃_L`.
    pub k_laser: f64,
    /// Slab width `L̃`.
    pub width: f64,
    /// Angle of incidence in radians.
    pub theta: f64,
}

impl Default for ScaledParams {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            detuning: -100.0,
            omega: 20.0,
            k: 3.0,
            k_laser: 8.1125,
            width: 6.0,
            theta: 0.0,
        }
    }
}

fn finite(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams { name, reason: "must be finite" })
    }
}

impl ScaledParams {
    pub fn with_theta(self, theta: f64) -> Self {
        Self { theta, ..self }
    }

    pub fn with_theta_deg(self, theta_deg: f64) -> Self {
        self.with_theta(theta_deg.to_radians())
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta.to_degrees()
    }

    /// Checks the ranges every other operation relies on.
    pub fn validate(&self) -> Result<()> {
        finite("gamma", self.gamma)?;
        finite("detuning", self.detuning)?;
        finite("omega", self.omega)?;
        finite("k", self.k)?;
        finite("k_laser", self.k_laser)?;
        finite("width", self.width)?;
        finite("theta", self.theta)?;
        if self.gamma < 0.0 {
            return Err(Error::InvalidParams { name: "gamma", reason: "must be >= 0" });
        }
        if self.k <= 0.0 {
            return Err(Error::InvalidParams { name: "k", reason: "must be > 0" });
        }
        if self.width < 0.0 {
            return Err(Error::InvalidParams { name: "width", reason: "must be >= 0" });
        }
        if self.omega < 0.0 {
            return Err(Error::InvalidParams { name: "omega", reason: "must be >= 0" });
        }
        if self.k_laser < 0.0 {
            return Err(Error::InvalidParams { name: "k_laser", reason: "must be >= 0" });
        }
        if !(0.0..FRAC_PI_2).contains(&self.theta) {
            return Err(Error::InvalidParams { name: "theta", reason: "must lie in [0, 90) degrees" });
        }
        Ok(())
    }

    /// Effective detuning `δ̃ = Δ̃ − 2 k̃_y k̃_L − k̃_L²` (Doppler and recoil
    /// corrected) for a given transverse wavenumber.
    pub fn effective_detuning(&self, ky: f64) -> f64 {
        self.detuning - 2.0 * ky * self.k_laser - self.k_laser * self.k_laser
    }
}

/// Wavevectors and detuning derived from an incidence configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub kx: f64,
    pub ky: f64,
    pub delta_eff: f64,
    /// Ground-state free wavenumber, identical to `kx`.
    pub k1: f64,
    /// Excited-state free wavenumber on the `Im ≥ 0` branch.
    pub k2: Complex64,
    /// Normal kinetic energy `k̃_x²` in units of `ħγ`.
    pub ex: f64,
}

impl Kinematics {
    /// Kinematics at an arbitrary Cartesian wavevector, reusing the medium
    /// described by `p` (its `k` and `theta` are ignored).
    pub fn at(p: &ScaledParams, kx: f64, ky: f64) -> Self {
        let delta_eff = p.effective_detuning(ky);
        let ex = kx * kx;
        let k2 = principal_sqrt(Complex64::new(delta_eff + ex, 0.5 * p.gamma));
        Self { kx, ky, delta_eff, k1: kx, k2, ex }
    }
}

/// Kinematics of the incidence configuration stored in `p`.
pub fn derive_kinematics(p: &ScaledParams) -> Kinematics {
    let (s, c) = p.theta.sin_cos();
    Kinematics::at(p, p.k * c, p.k * s)
}

/// Converts `(k, θ)` to `(k_x, k_y)`.
pub fn polar_to_cartesian(k: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (k * c, k * s)
}

/// Maps a Cartesian gradient `(∂/∂k_x, ∂/∂k_y)` to `(∂/∂k, ∂/∂θ)` at `(k, θ)`.
pub fn cartesian_gradient_to_polar(k: f64, theta: f64, d_dkx: f64, d_dky: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (c * d_dkx + s * d_dky, k * (-s * d_dkx + c * d_dky))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference(detuning: f64) -> ScaledParams {
        ScaledParams { detuning, ..ScaledParams::default() }
    }

    #[test]
    fn normal_incidence_detuning() {
        let kin = derive_kinematics(&reference(-100.0));
        assert_eq!(kin.kx, 3.0);
        assert_eq!(kin.ky, 0.0);
        assert!((kin.delta_eff - (-165.812_656_25)).abs() < 1e-10);
        assert_eq!(kin.k1, kin.kx);
    }

    #[test]
    fn grazing_limit_detuning() {
        let p = reference(-100.0).with_theta(FRAC_PI_2 - 1e-12);
        let kin = derive_kinematics(&p);
        assert!(kin.kx.abs() < 1e-11);
        assert!((kin.ky - 3.0).abs() < 1e-12);
        // -100 - 2*3*8.1125 - 8.1125^2
        assert!((kin.delta_eff - (-214.487_656_25)).abs() < 1e-9);
    }

    #[test]
    fn zero_laser_wavenumber_leaves_detuning() {
        for t in [0.0, 0.3, 1.2] {
            let p = ScaledParams { k_laser: 0.0, ..reference(37.5) }.with_theta(t);
            assert_eq!(derive_kinematics(&p).delta_eff, 37.5);
        }
    }

    #[test]
    fn closed_channel_is_evanescent() {
        let p = ScaledParams { gamma: 0.0, ..reference(-100.0) };
        let kin = derive_kinematics(&p);
        assert!(kin.delta_eff + kin.ex < 0.0);
        assert_eq!(kin.k2.re, 0.0);
        assert!(kin.k2.im > 0.0);
    }

    #[test]
    fn open_channel_without_decay_is_real() {
        let p = ScaledParams { gamma: 0.0, detuning: 200.0, ..reference(0.0) }.with_theta(0.4);
        let kin = derive_kinematics(&p);
        assert_eq!(kin.k2.im, 0.0);
        assert!(kin.k2.re > 0.0);
    }

    #[test]
    fn validation_rejects_bad_ranges() {
        assert!(reference(0.0).validate().is_ok());
        assert!(reference(0.0).with_theta(FRAC_PI_2).validate().is_err());
        assert!(reference(0.0).with_theta(-0.1).validate().is_err());
        assert!(ScaledParams { k: 0.0, ..reference(0.0) }.validate().is_err());
        assert!(ScaledParams { width: -1.0, ..reference(0.0) }.validate().is_err());
        assert!(ScaledParams { omega: f64::NAN, ..reference(0.0) }.validate().is_err());
    }

    #[test]
    fn polar_gradient_round_trip() {
        let (k, t) = (2.5, 0.7);
        // f = kx^2 + 3 ky  => df/dk, df/dθ by hand
        let (kx, ky) = polar_to_cartesian(k, t);
        let (dk, dt) = cartesian_gradient_to_polar(k, t, 2.0 * kx, 3.0);
        let exp_dk = 2.0 * k * t.cos().powi(2) + 3.0 * t.sin();
        let exp_dt = -2.0 * k * k * t.cos() * t.sin() + 3.0 * k * t.cos();
        assert!((dk - exp_dk).abs() < 1e-12);
        assert!((dt - exp_dt).abs() < 1e-12);
        assert!((kx.hypot(ky) - k).abs() < 1e-15);
    }
}
