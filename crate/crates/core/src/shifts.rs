//! Phases of the ground-state amplitudes, their wavevector gradients, the
//! resulting delays and lateral shifts, and the critical angle on the blue
//! side.
//!
//! Gradients are taken in Cartesian `(k̃_x, k̃_y)`. Moving `k̃_x` changes `k₁`,
//! `k₂` and both `α`; moving `k̃_y` only changes the effective detuning
//! through the Doppler term. The phase gradient is read off as
//! `Im[(1/S) ∂S/∂k]`, which never sees a `2π` wrap.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dressed::eigenvalues;
use crate::error::{Error, Result};
use crate::params::ScaledParams;
use crate::scattering::{scatter, scatter_at, Scattering};

const ZERO_AMPLITUDE: f64 = 1e-300;
const STENCIL_RATIO: f64 = 1e3;
const CRITICAL_SCAN: usize = 4096;
const CRITICAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Reflected,
    Transmitted,
}

impl Channel {
    pub const BOTH: [Channel; 2] = [Channel::Reflected, Channel::Transmitted];

    pub fn amplitude(self, s: &Scattering) -> Complex64 {
        match self {
            Channel::Reflected => s.coeffs.r1,
            Channel::Transmitted => s.coeffs.t1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Channel::Reflected => "R",
            Channel::Transmitted => "T",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftOptions {
    /// Central-difference step relative to `k̃`.
    pub rel_step: f64,
}

impl Default for ShiftOptions {
    fn default() -> Self {
        Self { rel_step: 1e-6 }
    }
}

/// Stationary-phase results for one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelShift {
    /// `Θ₁ˢ` in `(−π, π]`.
    pub phase: f64,
    pub dphase_dkx: f64,
    pub dphase_dky: f64,
    /// `Δt̃ₛ`, in units of `1/γ`.
    pub delay: f64,
    /// `ỹₛ`, in units of `1/k_γ`.
    pub shift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftResult {
    pub reflected: ChannelShift,
    pub transmitted: ChannelShift,
}

impl ShiftResult {
    pub fn channel(&self, c: Channel) -> &ChannelShift {
        match c {
            Channel::Reflected => &self.reflected,
            Channel::Transmitted => &self.transmitted,
        }
    }
}

/// Principal argument of an amplitude.
pub fn phase_of(s: Complex64) -> Result<f64> {
    let modulus = s.norm();
    if !(modulus > ZERO_AMPLITUDE) {
        return Err(Error::ZeroAmplitude { modulus });
    }
    let a = s.arg();
    // arg returns -π for negative reals with a -0.0 imaginary part
    Ok(if a <= -PI { PI } else { a })
}

fn amplitude_at(p: &ScaledParams, kx: f64, ky: f64, channel: Channel) -> Result<Complex64> {
    let s = channel.amplitude(&scatter_at(p, kx, ky)?);
    let modulus = s.norm();
    if !(modulus > ZERO_AMPLITUDE) {
        return Err(Error::ZeroAmplitude { modulus });
    }
    Ok(s)
}

/// `(∂Θ/∂k̃_x, ∂Θ/∂k̃_y)` at an arbitrary wavevector, with an absolute step.
///
/// The step is shrunk tenfold once if `|S|` varies by more than three
/// decades across the stencil.
pub fn phase_gradient_at(p: &ScaledParams, kx: f64, ky: f64, channel: Channel, step: f64) -> Result<(f64, f64)> {
    let mut h = step;
    let mut attempt = 0;
    loop {
        let s0 = amplitude_at(p, kx, ky, channel)?;
        let sxp = amplitude_at(p, kx + h, ky, channel)?;
        let sxm = amplitude_at(p, kx - h, ky, channel)?;
        let syp = amplitude_at(p, kx, ky + h, channel)?;
        let sym = amplitude_at(p, kx, ky - h, channel)?;
        let norms = [s0.norm(), sxp.norm(), sxm.norm(), syp.norm(), sym.norm()];
        let hi = norms.iter().copied().fold(f64::MIN, f64::max);
        let lo = norms.iter().copied().fold(f64::MAX, f64::min);
        let ratio = hi / lo;
        if ratio > STENCIL_RATIO {
            if attempt == 0 {
                attempt += 1;
                h *= 0.1;
                continue;
            }
            return Err(Error::StencilCrossesResonance { ratio });
        }
        let gx = ((sxp - sxm) / (2.0 * h * s0)).im;
        let gy = ((syp - sym) / (2.0 * h * s0)).im;
        return Ok((gx, gy));
    }
}

/// Phase gradient at the incidence configuration of `p`.
pub fn phase_gradient(p: &ScaledParams, channel: Channel, opts: &ShiftOptions) -> Result<(f64, f64)> {
    p.validate()?;
    let (s, c) = p.theta.sin_cos();
    phase_gradient_at(p, p.k * c, p.k * s, channel, opts.rel_step * p.k)
}

/// `(Δt̃, ỹ)` from a phase gradient:
/// `Δt̃ = (∂Θ/∂k̃_x + L̃)/(2k̃_x)`, `ỹ = 2k̃_y Δt̃ − ∂Θ/∂k̃_y`.
pub fn delay_and_shift(p: &ScaledParams, grad: (f64, f64)) -> (f64, f64) {
    let (s, c) = p.theta.sin_cos();
    let (kx, ky) = (p.k * c, p.k * s);
    let delay = (grad.0 + p.width) / (2.0 * kx);
    (delay, 2.0 * ky * delay - grad.1)
}

pub fn channel_shift(p: &ScaledParams, channel: Channel, opts: &ShiftOptions) -> Result<ChannelShift> {
    let s = scatter(p)?;
    let phase = phase_of(channel.amplitude(&s))?;
    let grad = phase_gradient(p, channel, opts)?;
    let (delay, shift) = delay_and_shift(p, grad);
    Ok(ChannelShift { phase, dphase_dkx: grad.0, dphase_dky: grad.1, delay, shift })
}

/// Both channels at once.
pub fn compute_shifts(p: &ScaledParams, opts: &ShiftOptions) -> Result<ShiftResult> {
    Ok(ShiftResult {
        reflected: channel_shift(p, Channel::Reflected, opts)?,
        transmitted: channel_shift(p, Channel::Transmitted, opts)?,
    })
}

/// `k̃² cos²θ − Re Ṽ₊(θ)`; the critical angle is its zero.
fn critical_residual(p: &ScaledParams, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let delta = p.effective_detuning(p.k * s);
    let (v_plus, _) = eigenvalues(delta, p.gamma, p.omega);
    p.k * p.k * c * c - v_plus.re
}

/// Angle (radians) at which the normal kinetic energy equals `Re Ṽ₊`.
///
/// `Ṽ₊` depends on `θ` through the effective detuning, so the condition is
/// solved by scanning `[0, π/2)` for sign changes and bisecting each one.
/// `Ok(None)` when no crossing exists (for instance on the red side, where
/// `Re Ṽ₊` exceeds the kinetic energy everywhere).
pub fn critical_angle(p: &ScaledParams) -> Result<Option<f64>> {
    let upper = FRAC_PI_2 * (1.0 - 1e-12);
    let grid = |i: usize| upper * i as f64 / CRITICAL_SCAN as f64;
    let mut roots = Vec::new();
    let mut a = 0.0;
    let mut fa = critical_residual(p, a);
    if fa == 0.0 {
        roots.push(a);
    }
    for i in 1..=CRITICAL_SCAN {
        let b = grid(i);
        let fb = critical_residual(p, b);
        if fb == 0.0 {
            roots.push(b);
        } else if fa != 0.0 && (fa < 0.0) != (fb < 0.0) {
            roots.push(bisect(|t| critical_residual(p, t), a, b, fa));
        }
        a = b;
        fa = fb;
    }
    match roots.len() {
        0 => Ok(None),
        1 => Ok(Some(roots[0])),
        _ => Err(Error::MultipleRoots { roots }),
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > CRITICAL_TOL {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Removes `2π` jumps between consecutive samples in place.
pub fn unwrap_phases(phases: &mut [f64]) {
    let mut offset = 0.0;
    for i in 1..phases.len() {
        let prev = phases[i - 1];
        let mut cur = phases[i] + offset;
        let jump = ((cur - prev) / TAU).round();
        if jump != 0.0 {
            offset -= jump * TAU;
            cur -= jump * TAU;
        }
        phases[i] = cur;
    }
}

#[cfg(test)]
mod tests {
    use core::f64::consts::FRAC_PI_4;

    use super::*;

    fn reference(detuning: f64) -> ScaledParams {
        ScaledParams { detuning, ..ScaledParams::default() }
    }

    #[test]
    fn phase_examples() {
        assert_eq!(phase_of(Complex64::new(1.0, 0.0)).unwrap(), 0.0);
        assert!((phase_of(Complex64::new(0.0, -1.0)).unwrap() + FRAC_PI_2).abs() < 1e-15);
        assert_eq!(phase_of(Complex64::new(-1.0, -0.0)).unwrap(), PI);
        assert!(matches!(phase_of(Complex64::new(0.0, 0.0)), Err(Error::ZeroAmplitude { .. })));
    }

    #[test]
    fn zero_width_transmission_has_flat_phase() {
        let p = ScaledParams { width: 0.0, ..reference(-100.0) }.with_theta_deg(30.0);
        let (gx, gy) = phase_gradient(&p, Channel::Transmitted, &ShiftOptions::default()).unwrap();
        assert!(gx.abs() < 1e-6 && gy.abs() < 1e-6, "{gx} {gy}");
        let s = channel_shift(&p, Channel::Transmitted, &ShiftOptions::default()).unwrap();
        assert!(s.phase.abs() < 1e-12);
    }

    #[test]
    fn no_doppler_means_no_transverse_gradient() {
        let p = ScaledParams { k_laser: 0.0, ..reference(-100.0) }.with_theta_deg(35.0);
        for ch in Channel::BOTH {
            let (_, gy) = phase_gradient(&p, ch, &ShiftOptions::default()).unwrap();
            assert_eq!(gy, 0.0);
            let s = channel_shift(&p, ch, &ShiftOptions::default()).unwrap();
            let ky = p.k * p.theta.sin();
            assert_eq!(s.shift, 2.0 * ky * s.delay);
        }
    }

    #[test]
    fn geometric_crossing() {
        let p = reference(-100.0).with_theta(FRAC_PI_4);
        let (dt, y) = delay_and_shift(&p, (0.0, 0.0));
        assert!((dt - 6.0 / (2.0 * 3.0 * FRAC_PI_4.cos())).abs() < 1e-12);
        assert!((dt - 1.414_213_562_373_095).abs() < 1e-12);
        assert!((y - 6.0).abs() < 1e-12);
    }

    #[test]
    fn critical_angle_blue_side() {
        let theta = critical_angle(&reference(200.0)).unwrap().unwrap();
        assert!((theta.to_degrees() - 69.4).abs() < 0.3, "{}", theta.to_degrees());
    }

    #[test]
    fn critical_angle_absent_on_red_side() {
        assert_eq!(critical_angle(&reference(-100.0)).unwrap(), None);
    }

    #[test]
    fn critical_angle_tends_to_grazing_for_fast_atoms() {
        let mut last = 0.0;
        for k in [10.0, 100.0, 1000.0] {
            let p = ScaledParams { k, k_laser: 0.0, detuning: 100.0, ..ScaledParams::default() };
            let th = critical_angle(&p).unwrap().unwrap();
            assert!(th > last);
            last = th;
        }
        assert!(last.to_degrees() > 89.9);
    }

    #[test]
    fn unwrap_removes_jumps() {
        let mut v = [3.0, -3.1, 3.0, 2.9];
        unwrap_phases(&mut v);
        for w in v.windows(2) {
            assert!((w[1] - w[0]).abs() < PI);
        }
        assert!((v[1] - (-3.1 + TAU)).abs() < 1e-15);
    }
}
