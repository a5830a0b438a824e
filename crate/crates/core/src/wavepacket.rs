//! Wavepacket synthesis by superposing stationary scattering solutions, and
//! peak tracking on the synthesised fields.
//!
//! This is an end-to-end check on the stationary-phase delays and shifts:
//! nothing here differentiates a phase. The reflected and transmitted
//! ground-state packets are
//!
//! ```text
//! Ψᴿ(x, y, t) = ∫ d²k' f(k'−k) R₁(k') exp[i(−k'ₓ(x + x₀) + k'ᵧ(y − y₀) − k'²t)]
//! Ψᵀ(x, y, t) = ∫ d²k' f(k'−k) T₁(k') exp[i( k'ₓ(x − x₀) + k'ᵧ(y − y₀) − k'²t)]
//! ```
//!
//! in scaled units (the free phase `ħk'²t/2m` becomes `k̃'²t̃`), with a
//! Gaussian `f` of amplitude width `σ̃_k` sampled on a tensor grid over
//! `±4σ̃_k`. The phase factors are separable, so the field on an `nx × ny`
//! lattice costs two small matrix products.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::ScaledParams;
use crate::scattering::scatter_at;
use crate::shifts::{channel_shift, Channel, ChannelShift, ShiftOptions};

const NODE_SPAN: f64 = 4.0;
const MIN_MODES: usize = 32;
const MAX_REL_WIDTH: f64 = 0.02;
const EDGE_MARGIN: usize = 3;
const MULTI_PEAK_RATIO: f64 = 0.8;
const ZERO_AMPLITUDE: f64 = 1e-300;
/// Default initial stand-off of the incident packet, in packet widths.
const STANDOFF_WIDTHS: f64 = 4.0;
/// Detection starts once the packet has left the slab by this many widths.
const CLEARANCE_WIDTHS: f64 = 3.0;

/// Shape and sampling of a Gaussian packet.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketSpec {
    /// Carrier wavenumber magnitude.
    pub k: f64,
    /// Carrier angle in radians; negative angles are allowed here.
    pub theta: f64,
    /// Amplitude width `σ̃_k` of the Gaussian weight.
    pub sigma_k: f64,
    /// Quadrature nodes per wavevector axis.
    pub modes: usize,
    /// Initial peak position `(x̃₀, ỹ₀)`, left of the slab.
    pub origin: (f64, f64),
    /// Observation times; [`shift_report`] uses the first two, or picks its
    /// own when fewer are given.
    pub times: Vec<f64>,
    /// Samples per spatial axis.
    pub samples: usize,
    /// Side of the square sampling window.
    pub extent: f64,
    /// Window centre; `None` follows the ray-optics position of the packet.
    pub grid_center: Option<(f64, f64)>,
}

impl PacketSpec {
    /// Defaults for the incidence configuration of `p`: `σ̃_k = 0.005 k̃`,
    /// 32 modes, a 256² window of side `12/σ̃_k`, and a start four packet
    /// widths before the slab.
    pub fn new(p: &ScaledParams) -> Self {
        Self::with_sigma(p, 0.005 * p.k)
    }

    pub fn with_sigma(p: &ScaledParams, sigma_k: f64) -> Self {
        let (s, c) = p.theta.sin_cos();
        let t0 = STANDOFF_WIDTHS / sigma_k / (2.0 * p.k);
        let origin = (-(0.5 * p.width + 2.0 * p.k * c * t0), -2.0 * p.k * s * t0);
        Self {
            k: p.k,
            theta: p.theta,
            sigma_k,
            modes: MIN_MODES,
            origin,
            times: Vec::new(),
            samples: 256,
            extent: 12.0 / sigma_k,
            grid_center: None,
        }
    }

    pub fn validate(&self, width: f64) -> Result<()> {
        let bad = |name, reason| Err(Error::InvalidParams { name, reason });
        if !(self.k > 0.0 && self.k.is_finite()) {
            return bad("k", "packet carrier must be > 0");
        }
        if !(self.theta.abs() < FRAC_PI_2) {
            return bad("theta", "packet carrier angle must satisfy |theta| < 90 degrees");
        }
        if !(self.sigma_k > 0.0 && self.sigma_k <= MAX_REL_WIDTH * self.k) {
            return bad("sigma_k", "must lie in (0, 0.02 k]");
        }
        if self.modes < MIN_MODES {
            return bad("modes", "need at least 32 nodes per axis");
        }
        if !(self.origin.0 < -0.5 * width) {
            return bad("origin", "packet must start left of the slab");
        }
        if self.samples < 2 * EDGE_MARGIN + 3 {
            return bad("samples", "window too coarse");
        }
        if !(self.extent > 0.0 && self.extent.is_finite()) {
            return bad("extent", "must be > 0");
        }
        if self.times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return bad("times", "must be finite and >= 0");
        }
        Ok(())
    }

    pub fn carrier(&self) -> (f64, f64) {
        let (s, c) = self.theta.sin_cos();
        (self.k * c, self.k * s)
    }

    fn offsets(&self) -> Vec<f64> {
        let n = self.modes;
        (0..n)
            .map(|i| self.sigma_k * NODE_SPAN * (2.0 * i as f64 / (n - 1) as f64 - 1.0))
            .collect()
    }

    /// Quadrature nodes in row-major `(k'ₓ index, k'ᵧ index)` order.
    pub fn node_wavevectors(&self) -> Vec<(f64, f64)> {
        let (kx, ky) = self.carrier();
        let q = self.offsets();
        q.iter().flat_map(|&qx| q.iter().map(move |&qy| (kx + qx, ky + qy))).collect()
    }

    /// Time at which the carrier ray reaches the front face.
    pub fn hit_time(&self, width: f64) -> f64 {
        let (kx, _) = self.carrier();
        (-self.origin.0 - 0.5 * width) / (2.0 * kx)
    }

    /// Ray-optics position of the packet peak, ignoring the scattering
    /// phase apart from the slab crossing.
    pub fn ray_position(&self, width: f64, channel: Channel, t: f64) -> (f64, f64) {
        let (kx, ky) = self.carrier();
        let y = self.origin.1 + 2.0 * ky * t;
        let x = match channel {
            Channel::Reflected => -self.origin.0 - 2.0 * kx * t - width,
            Channel::Transmitted => self.origin.0 + 2.0 * kx * t,
        };
        (x, y)
    }

    /// Two observation times after the packet has cleared the slab.
    pub fn default_times(&self, width: f64) -> [f64; 2] {
        let (kx, _) = self.carrier();
        let step = CLEARANCE_WIDTHS / self.sigma_k / (2.0 * self.k);
        let exit = self.hit_time(width) + width / (2.0 * kx);
        [exit + step, exit + 2.0 * step]
    }
}

/// Sampled ground-state field of one channel at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketField {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major, `values[iy * xs.len() + ix]`.
    pub values: Vec<Complex64>,
    pub channel: Channel,
    pub time: f64,
    /// Quadrature nodes whose amplitude vanished.
    pub zero_nodes: usize,
}

impl PacketField {
    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[iy * self.xs.len() + ix]
    }

    pub fn intensity(&self, ix: usize, iy: usize) -> f64 {
        self.at(ix, iy).norm_sqr()
    }

    /// Riemann sum of `|Ψ|²` over the window.
    pub fn norm(&self) -> f64 {
        let dx = self.xs[1] - self.xs[0];
        let dy = self.ys[1] - self.ys[0];
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx * dy
    }
}

/// Amplitudes of one channel at every quadrature node.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketNodes {
    channel: Channel,
    amplitudes: Vec<Complex64>,
}

impl PacketNodes {
    /// Evaluates every node in order.
    pub fn evaluate(p: &ScaledParams, spec: &PacketSpec, channel: Channel) -> Result<Self> {
        spec.validate(p.width)?;
        let amplitudes = spec
            .node_wavevectors()
            .into_iter()
            .map(|(kx, ky)| scatter_at(p, kx, ky).map(|s| channel.amplitude(&s)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { channel, amplitudes })
    }

    /// Wraps amplitudes computed elsewhere, in [`PacketSpec::node_wavevectors`]
    /// order.
    pub fn from_amplitudes(spec: &PacketSpec, channel: Channel, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != spec.modes * spec.modes {
            return Err(Error::InvalidParams { name: "amplitudes", reason: "one amplitude per node required" });
        }
        Ok(Self { channel, amplitudes })
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    /// Samples the packet at time `t` on the window described by `spec`.
    pub fn field(&self, p: &ScaledParams, spec: &PacketSpec, t: f64) -> PacketField {
        let n = spec.modes;
        let (kx, ky) = spec.carrier();
        let q = spec.offsets();
        let dq = q[1] - q[0];
        let inv_two_var = 0.5 / (spec.sigma_k * spec.sigma_k);
        let (x0, y0) = spec.origin;
        let sign = match self.channel {
            Channel::Reflected => -1.0,
            Channel::Transmitted => 1.0,
        };

        let center = spec.grid_center.unwrap_or_else(|| spec.ray_position(p.width, self.channel, t));
        let m = spec.samples;
        let axis = |c: f64| -> Vec<f64> {
            (0..m).map(|i| c - 0.5 * spec.extent + spec.extent * i as f64 / (m - 1) as f64).collect()
        };
        let xs = axis(center.0);
        let ys = axis(center.1);

        let mut zero_nodes = 0;
        let mut coef = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let kxi = kx + q[i];
            for j in 0..n {
                let kyj = ky + q[j];
                let s = self.amplitudes[i * n + j];
                if s.norm() <= ZERO_AMPLITUDE {
                    zero_nodes += 1;
                    continue;
                }
                let weight = (-(q[i] * q[i] + q[j] * q[j]) * inv_two_var).exp() * dq * dq;
                let phase = -kxi * x0 - kyj * y0 - (kxi * kxi + kyj * kyj) * t;
                coef[i * n + j] = s * Complex64::from_polar(weight, phase);
            }
        }

        // g[i][b] = Σ_j coef[i][j] e^{i k'ᵧ y_b}
        let mut g = vec![Complex64::new(0.0, 0.0); n * m];
        for j in 0..n {
            let kyj = ky + q[j];
            for (b, &y) in ys.iter().enumerate() {
                let e = Complex64::from_polar(1.0, kyj * y);
                for i in 0..n {
                    g[i * m + b] += coef[i * n + j] * e;
                }
            }
        }
        let mut values = vec![Complex64::new(0.0, 0.0); m * m];
        for i in 0..n {
            let kxi = kx + q[i];
            for (a, &x) in xs.iter().enumerate() {
                let e = Complex64::from_polar(1.0, sign * kxi * x);
                for b in 0..m {
                    values[b * m + a] += e * g[i * m + b];
                }
            }
        }
        PacketField { xs, ys, values, channel: self.channel, time: t, zero_nodes }
    }
}

/// Synthesises one channel's packet at time `t`.
pub fn synthesize(p: &ScaledParams, spec: &PacketSpec, channel: Channel, t: f64) -> Result<PacketField> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParams { name: "time", reason: "must be >= 0" });
    }
    Ok(PacketNodes::evaluate(p, spec, channel)?.field(p, spec, t))
}

/// Sub-cell location of the intensity maximum.
///
/// A quadratic (with cross term) is fitted to `ln|Ψ|²` on the 3×3
/// neighbourhood of the brightest sample; for a Gaussian peak this is exact.
pub fn measure_peak(field: &PacketField) -> Result<(f64, f64)> {
    let (nx, ny) = (field.xs.len(), field.ys.len());
    let mut best = (0, 0, f64::MIN);
    for iy in 0..ny {
        for ix in 0..nx {
            let v = field.intensity(ix, iy);
            if v > best.2 {
                best = (ix, iy, v);
            }
        }
    }
    let (ix, iy, peak) = best;
    if ix < EDGE_MARGIN || iy < EDGE_MARGIN || ix + EDGE_MARGIN >= nx || iy + EDGE_MARGIN >= ny || !(peak > 0.0) {
        return Err(Error::PeakOnBoundary { margin: EDGE_MARGIN });
    }
    let primary = (field.xs[ix], field.ys[iy]);

    for jy in 1..ny - 1 {
        for jx in 1..nx - 1 {
            if (jx, jy) == (ix, iy) {
                continue;
            }
            let v = field.intensity(jx, jy);
            if v < MULTI_PEAK_RATIO * peak {
                continue;
            }
            let is_max = (-1i64..=1).all(|dy| {
                (-1i64..=1).all(|dx| {
                    (dx == 0 && dy == 0)
                        || field.intensity((jx as i64 + dx) as usize, (jy as i64 + dy) as usize) < v
                })
            });
            if is_max {
                return Err(Error::MultiPeak { primary, secondary: (field.xs[jx], field.ys[jy]), ratio: v / peak });
            }
        }
    }

    let f = |dx: i64, dy: i64| field.intensity((ix as i64 + dx) as usize, (iy as i64 + dy) as usize).ln();
    let f0 = f(0, 0);
    let gx = 0.5 * (f(1, 0) - f(-1, 0));
    let gy = 0.5 * (f(0, 1) - f(0, -1));
    let hxx = f(1, 0) - 2.0 * f0 + f(-1, 0);
    let hyy = f(0, 1) - 2.0 * f0 + f(0, -1);
    let hxy = 0.25 * (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1));
    let det = hxx * hyy - hxy * hxy;
    let (mut dx, mut dy) = if hxx < 0.0 && det > 0.0 && det.is_finite() {
        ((-hyy * gx + hxy * gy) / det, (hxy * gx - hxx * gy) / det)
    } else {
        (0.0, 0.0)
    };
    dx = dx.clamp(-1.0, 1.0);
    dy = dy.clamp(-1.0, 1.0);
    let hx = field.xs[1] - field.xs[0];
    let hy = field.ys[1] - field.ys[0];
    Ok((primary.0 + dx * hx, primary.1 + dy * hy))
}

/// Measured against predicted delay and shift for one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftReport {
    pub channel: Channel,
    pub times: [f64; 2],
    pub peaks: [(f64, f64); 2],
    /// Peak velocity fitted from the two observations.
    pub velocity: (f64, f64),
    pub measured_delay: f64,
    pub measured_shift: f64,
    /// `∂Θ/∂k̃ᵧ` read off the first observation, `2k̃ᵧt̃ − (ỹ − ỹ₀)`.
    pub measured_dphase_dky: f64,
    pub analytic: ChannelShift,
}

impl ShiftReport {
    pub fn shift_rel_error(&self) -> f64 {
        (self.measured_shift - self.analytic.shift).abs() / self.analytic.shift.abs()
    }

    pub fn delay_rel_error(&self) -> f64 {
        (self.measured_delay - self.analytic.delay).abs() / self.analytic.delay.abs()
    }
}

/// Tracks the packet of `channel` at two times and compares the crossing
/// point with the stationary-phase prediction at the carrier.
pub fn shift_report(p: &ScaledParams, spec: &PacketSpec, channel: Channel) -> Result<ShiftReport> {
    let nodes = PacketNodes::evaluate(p, spec, channel)?;
    report_from_nodes(p, spec, &nodes, &ShiftOptions::default())
}

/// [`shift_report`] with node amplitudes supplied by the caller.
pub fn report_from_nodes(
    p: &ScaledParams,
    spec: &PacketSpec,
    nodes: &PacketNodes,
    opts: &ShiftOptions,
) -> Result<ShiftReport> {
    spec.validate(p.width)?;
    let channel = nodes.channel();
    let times = match spec.times.as_slice() {
        [a, b, ..] if a != b => [*a, *b],
        _ => spec.default_times(p.width),
    };
    let pa = measure_peak(&nodes.field(p, spec, times[0]))?;
    let pb = measure_peak(&nodes.field(p, spec, times[1]))?;
    let dt = times[1] - times[0];
    let velocity = ((pb.0 - pa.0) / dt, (pb.1 - pa.1) / dt);

    let (_, ky) = spec.carrier();
    let t0 = spec.hit_time(p.width);
    let y_hit = spec.origin.1 + 2.0 * ky * t0;
    let face = match channel {
        Channel::Reflected => -0.5 * p.width,
        Channel::Transmitted => 0.5 * p.width,
    };
    let t_face = times[0] + (face - pa.0) / velocity.0;
    let y_face = pa.1 + velocity.1 * (t_face - times[0]);

    let carrier = ScaledParams { k: spec.k, theta: spec.theta, ..*p };
    let analytic = channel_shift(&carrier, channel, opts)?;
    Ok(ShiftReport {
        channel,
        times,
        peaks: [pa, pb],
        velocity,
        measured_delay: t_face - t0,
        measured_shift: y_face - y_hit,
        measured_dphase_dky: 2.0 * ky * times[0] - (pa.1 - spec.origin.1),
        analytic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free() -> ScaledParams {
        ScaledParams { omega: 0.0, ..ScaledParams::default() }.with_theta_deg(40.0)
    }

    #[test]
    fn no_coupling_no_reflection() {
        let p = free();
        let spec = PacketSpec::new(&p);
        let f = synthesize(&p, &spec, Channel::Reflected, 10.0).unwrap();
        assert!(f.values.iter().all(|v| v.norm() == 0.0));
        assert_eq!(f.zero_nodes, spec.modes * spec.modes);
    }

    #[test]
    fn free_packet_starts_at_origin() {
        let p = free();
        let mut spec = PacketSpec::new(&p);
        spec.grid_center = Some(spec.origin);
        let f = synthesize(&p, &spec, Channel::Transmitted, 0.0).unwrap();
        let (x, y) = measure_peak(&f).unwrap();
        let cell = spec.extent / (spec.samples - 1) as f64;
        assert!((x - spec.origin.0).abs() < 0.05 * cell, "{x} vs {}", spec.origin.0);
        assert!((y - spec.origin.1).abs() < 0.05 * cell);
    }

    #[test]
    fn free_packet_moves_ballistically() {
        let p = free();
        let spec = PacketSpec::new(&p);
        let (kx, ky) = spec.carrier();
        for t in [0.0, 50.0, 120.0] {
            let f = synthesize(&p, &spec, Channel::Transmitted, t).unwrap();
            let (x, y) = measure_peak(&f).unwrap();
            assert!((x - (spec.origin.0 + 2.0 * kx * t)).abs() < 1e-3, "t={t} x={x}");
            assert!((y - (spec.origin.1 + 2.0 * ky * t)).abs() < 1e-3);
        }
    }

    #[test]
    fn mirror_symmetry_without_doppler() {
        let p = ScaledParams { k_laser: 0.0, ..ScaledParams::default() }.with_theta_deg(30.0);
        let spec = PacketSpec::new(&p);
        let mut mirrored = spec.clone();
        mirrored.theta = -spec.theta;
        mirrored.origin.1 = -spec.origin.1;
        let t = spec.default_times(p.width)[0];
        let a = measure_peak(&synthesize(&p, &spec, Channel::Reflected, t).unwrap()).unwrap();
        let b = measure_peak(&synthesize(&p, &mirrored, Channel::Reflected, t).unwrap()).unwrap();
        assert!(a.1 > 0.0 && b.1 < 0.0);
        assert!((a.1 + b.1).abs() < 1e-6 * a.1.abs());
        assert!((a.0 - b.0).abs() < 1e-6 * a.0.abs());
    }

    #[test]
    fn free_crossing_report() {
        let p = free();
        let r = shift_report(&p, &PacketSpec::new(&p), Channel::Transmitted).unwrap();
        let geometric = p.theta.tan() * p.width;
        assert!((r.measured_shift - geometric).abs() < 0.02 * geometric, "{r:?}");
        assert!((r.analytic.shift - geometric).abs() < 1e-9);
    }

    #[test]
    fn spec_validation() {
        let p = free();
        let mut s = PacketSpec::new(&p);
        s.modes = 16;
        assert!(s.validate(p.width).is_err());
        let mut s = PacketSpec::new(&p);
        s.sigma_k = 0.1 * p.k;
        assert!(s.validate(p.width).is_err());
        let mut s = PacketSpec::new(&p);
        s.origin.0 = 0.0;
        assert!(s.validate(p.width).is_err());
    }

    #[test]
    fn boundary_peak_is_rejected() {
        let p = free();
        let mut spec = PacketSpec::new(&p);
        spec.grid_center = Some((spec.origin.0 + 0.499 * spec.extent, spec.origin.1));
        let f = synthesize(&p, &spec, Channel::Transmitted, 0.0).unwrap();
        assert!(matches!(measure_peak(&f), Err(Error::PeakOnBoundary { .. })));
    }

    #[test]
    fn two_equal_peaks_are_flagged() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let ys = xs.clone();
        let mut values = vec![Complex64::new(0.0, 0.0); 400];
        for iy in 0..20 {
            for ix in 0..20 {
                let g = |cx: f64| (-((ix as f64 - cx).powi(2) + (iy as f64 - 10.0).powi(2)) / 4.0).exp();
                values[iy * 20 + ix] = Complex64::new(g(6.0) + 0.95 * g(14.0), 0.0);
            }
        }
        let f = PacketField { xs, ys, values, channel: Channel::Reflected, time: 0.0, zero_nodes: 0 };
        assert!(matches!(measure_peak(&f), Err(Error::MultiPeak { .. })));
    }
}
