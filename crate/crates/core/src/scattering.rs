//! Reflection and transmission amplitudes of the ground-state beam.
//!
//! Two independent routes are provided:
//!
//! * the closed form: transfer blocks `M⁽±⁾` built from the dressed frame,
//!   then `T₁ = 2M⁺₂₂/det M⁺·e^{−ik₁L}` and friends;
//! * [`coefficients_direct`]: continuity of both components and their
//!   derivatives at `x = ±L/2`, solved as one 8×8 dense system with its own
//!   eigen-decomposition of the potential matrix.
//!
//! When a dressed mode is strongly evanescent, the entries of `M⁽±⁾` grow
//! like `e^{|Re α|L}` while the 2×2 minors entering the ratios are much
//! smaller; forming the minors from the assembled entries loses every
//! significant digit. Each row of `M⁽±⁾` is therefore kept as a combination
//! of four fixed row vectors, one pair per dressed mode, with the growing
//! exponentials attached to the basis vectors instead of the coefficients.
//! Minors are then expanded pairwise (Cauchy-Binet) so the exponentials of
//! a mode never meet their own reciprocal in a subtraction.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dressed::DressedFrame;
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Lu, Mat2};
use crate::params::{Kinematics, ScaledParams};
use crate::principal_sqrt;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Below this modulus a free-space wavenumber is treated as zero.
const CHANNEL_EPS: f64 = 1e-13;
/// Above `|Re α| L` a dressed mode is split into growing/decaying parts.
const SPLIT_THRESHOLD: f64 = 1.0;
const SINHC_SERIES: f64 = 1e-4;
const RESONANCE_REL: f64 = 1e-12;
const MAX_CONDITION: f64 = 1e12;
/// Grazing-incidence cutoff for [`scatter`].
pub const MAX_THETA_DEG: f64 = 89.9;

/// Complex amplitudes of the four outgoing waves for unit ground-state
/// incidence from the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterCoeffs {
    pub r1: Complex64,
    pub r2: Complex64,
    pub t1: Complex64,
    pub t2: Complex64,
}

impl ScatterCoeffs {
    /// The amplitudes of a slab that does not couple the ground state.
    pub fn free() -> Self {
        Self { r1: ZERO, r2: ZERO, t1: ONE, t2: ZERO }
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.r1, self.r2, self.t1, self.t2]
    }
}

/// Row vectors spanning all rows of `M⁽±⁾`, each with an attached exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
struct RowBasis {
    vectors: [[Complex64; 2]; 4],
    exponents: [Complex64; 4],
    /// `plus[i][m]`: coefficient of basis vector `m` in row `i` of `M⁽⁺⁾`.
    plus: [[Complex64; 4]; 2],
    minus: [[Complex64; 4]; 2],
}

/// A 2×2 minor stored as `value · e^{shift}`.
#[derive(Debug, Clone, Copy)]
struct ScaledMinor {
    value: Complex64,
    shift: f64,
    /// Sum of the moduli of the expansion terms, on the same scale.
    magnitude: f64,
}

impl RowBasis {
    fn build(frame: &DressedFrame, k: [Complex64; 2], width: f64) -> Self {
        let mut vectors = [[ZERO; 2]; 4];
        let mut exponents = [ZERO; 4];
        let mut plus = [[ZERO; 4]; 2];
        let mut minus = [[ZERO; 4]; 2];
        for (n, alpha) in frame.alphas().into_iter().enumerate() {
            let e = [frame.u_inv[n][0], frame.u_inv[n][1]];
            let f = [frame.u_inv[n][0] * k[0], frame.u_inv[n][1] * k[1]];
            let (m0, m1) = (2 * n, 2 * n + 1);
            if (alpha.re * width).abs() > SPLIT_THRESHOLD {
                let ia = I / alpha;
                vectors[m0] = [e[0] - ia * f[0], e[1] - ia * f[1]];
                vectors[m1] = [e[0] + ia * f[0], e[1] + ia * f[1]];
                exponents[m0] = alpha * width;
                exponents[m1] = -alpha * width;
                for i in 0..2 {
                    let w = frame.u[i][n] / k[i] * 0.5;
                    plus[i][m0] = w * (k[i] + I * alpha);
                    plus[i][m1] = w * (k[i] - I * alpha);
                    minus[i][m0] = w * (k[i] - I * alpha);
                    minus[i][m1] = w * (k[i] + I * alpha);
                }
            } else {
                let c = (alpha * width).cosh();
                let s = sinh_over(alpha, width);
                let a2s = alpha * alpha * s;
                vectors[m0] = e;
                vectors[m1] = f;
                for i in 0..2 {
                    let w = frame.u[i][n] / k[i];
                    plus[i][m0] = w * (k[i] * c + I * a2s);
                    plus[i][m1] = w * (c - I * k[i] * s);
                    minus[i][m0] = w * (k[i] * c - I * a2s);
                    minus[i][m1] = w * (-c - I * k[i] * s);
                }
            }
        }
        Self { vectors, exponents, plus, minus }
    }

    fn row_shift(&self) -> f64 {
        self.exponents.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Entry `j` of the row with coefficients `c`, scaled by `e^{-row_shift}`.
    fn entry_scaled(&self, c: &[Complex64; 4], j: usize) -> Complex64 {
        let shift = self.row_shift();
        (0..4)
            .map(|m| c[m] * (self.exponents[m] - shift).exp() * self.vectors[m][j])
            .sum()
    }

    fn pair_shift(&self) -> f64 {
        let mut s = f64::NEG_INFINITY;
        for m in 0..4 {
            for l in m + 1..4 {
                s = s.max((self.exponents[m] + self.exponents[l]).re);
            }
        }
        s
    }

    /// `det [row p; row q]` expanded over pairs of basis vectors.
    fn minor(&self, p: &[Complex64; 4], q: &[Complex64; 4]) -> ScaledMinor {
        let shift = self.pair_shift();
        let mut value = ZERO;
        let mut magnitude = 0.0;
        for m in 0..4 {
            for l in m + 1..4 {
                let (vm, vl) = (self.vectors[m], self.vectors[l]);
                let basis_det = vm[0] * vl[1] - vm[1] * vl[0];
                let coef = p[m] * q[l] - p[l] * q[m];
                let term = coef * basis_det * (self.exponents[m] + self.exponents[l] - shift).exp();
                magnitude += term.norm();
                value += term;
            }
        }
        ScaledMinor { value, shift, magnitude }
    }

    fn assemble(&self, rows: &[[Complex64; 4]; 2]) -> Mat2 {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in rows.iter().enumerate() {
            for j in 0..2 {
                out[i][j] = (0..4).map(|m| row[m] * self.exponents[m].exp() * self.vectors[m][j]).sum();
            }
        }
        out
    }
}

/// The transfer blocks `M⁽⁺⁾` and `M⁽⁻⁾`.
///
/// `m_plus` and `m_minus` hold the assembled entries (these overflow to
/// infinity for extremely opaque slabs); the amplitudes are computed from an
/// internal factored form of the same rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferBlocks {
    pub m_plus: Mat2,
    pub m_minus: Mat2,
    rows: RowBasis,
}

/// `sinh(αL)/α`, continuous through `α = 0`.
pub fn sinh_over(alpha: Complex64, width: f64) -> Complex64 {
    let z = alpha * width;
    if z.norm() < SINHC_SERIES {
        let z2 = z * z;
        width * (ONE + z2 / 6.0 + z2 * z2 / 120.0)
    } else {
        z.sinh() / alpha
    }
}

fn check_channels(k1: f64, k2: Complex64) -> Result<()> {
    if k1.abs() < CHANNEL_EPS {
        return Err(Error::ChannelDegenerate { channel: 1, modulus: k1.abs() });
    }
    if k2.norm() < CHANNEL_EPS {
        return Err(Error::ChannelDegenerate { channel: 2, modulus: k2.norm() });
    }
    Ok(())
}

/// Builds `M⁽±⁾` for a slab of width `width`.
pub fn m_matrices(frame: &DressedFrame, k1: f64, k2: Complex64, width: f64) -> Result<TransferBlocks> {
    check_channels(k1, k2)?;
    let k = [Complex64::new(k1, 0.0), k2];
    let rows = RowBasis::build(frame, k, width);
    Ok(TransferBlocks { m_plus: rows.assemble(&rows.plus), m_minus: rows.assemble(&rows.minus), rows })
}

/// `M⁽±⁾ᵢⱼ = Σₙ Uᵢₙ(U⁻¹)ₙⱼ [(1 ± kⱼ/kᵢ) cosh(αₙL) − i(kᵢkⱼ ∓ αₙ²)/(kᵢαₙ) sinh(αₙL)]`,
/// summed term by term as written. Used for reporting and cross-checks.
pub fn m_matrices_explicit(frame: &DressedFrame, k1: f64, k2: Complex64, width: f64) -> Result<(Mat2, Mat2)> {
    check_channels(k1, k2)?;
    let k = [Complex64::new(k1, 0.0), k2];
    let mut plus = [[ZERO; 2]; 2];
    let mut minus = [[ZERO; 2]; 2];
    for (n, alpha) in frame.alphas().into_iter().enumerate() {
        let c = (alpha * width).cosh();
        let s = sinh_over(alpha, width);
        let a2 = alpha * alpha;
        for i in 0..2 {
            for j in 0..2 {
                let w = frame.u[i][n] * frame.u_inv[n][j];
                let ratio = k[j] / k[i];
                plus[i][j] += w * ((ONE + ratio) * c - I * (k[i] * k[j] - a2) / k[i] * s);
                minus[i][j] += w * ((ONE - ratio) * c - I * (k[i] * k[j] + a2) / k[i] * s);
            }
        }
    }
    Ok((plus, minus))
}

/// Transmission and reflection amplitudes from the transfer blocks.
pub fn coefficients(blocks: &TransferBlocks, k1: f64, k2: Complex64, width: f64) -> Result<ScatterCoeffs> {
    let rows = &blocks.rows;
    let det = rows.minor(&rows.plus[0], &rows.plus[1]);
    if !(det.value.norm() > RESONANCE_REL * det.magnitude) || !det.value.is_finite() {
        let relative = det.value.norm() / det.magnitude;
        return Err(Error::ResonanceSingular { relative });
    }
    let n1 = rows.minor(&rows.minus[0], &rows.plus[1]);
    let n2 = rows.minor(&rows.minus[1], &rows.plus[1]);
    let row_shift = rows.row_shift();
    let m22 = rows.entry_scaled(&rows.plus[1], 1);
    let m21 = rows.entry_scaled(&rows.plus[1], 0);

    let k1c = Complex64::new(k1, 0.0);
    let phase1 = -I * k1c * width;
    let phase12 = -I * (k1c + k2) * width * 0.5;
    let t_scale = row_shift - det.shift;
    let r_scale = n1.shift - det.shift;
    Ok(ScatterCoeffs {
        t1: 2.0 * m22 / det.value * (phase1 + t_scale).exp(),
        t2: -2.0 * m21 / det.value * (phase12 + t_scale).exp(),
        r1: n1.value / det.value * (phase1 + r_scale).exp(),
        r2: n2.value / det.value * (phase12 + r_scale).exp(),
    })
}

/// Flux bookkeeping `k₁(1 − |R₁|² − |T₁|²) − w(|R₂|² + |T₂|²)`, where `w = k₂`
/// for a real (propagating, lossless) excited wavenumber and 0 otherwise.
///
/// Vanishes without decay; positive when the slab absorbs.
pub fn flux_residual(c: &ScatterCoeffs, k1: f64, k2: Complex64) -> f64 {
    let w = if k2.im == 0.0 { k2.re } else { 0.0 };
    k1 * (1.0 - c.r1.norm_sqr() - c.t1.norm_sqr()) - w * (c.r2.norm_sqr() + c.t2.norm_sqr())
}

/// Probability flux lost inside the slab: incident minus every outgoing
/// current, with the excited currents taken at the slab faces.
pub fn absorbed_flux(c: &ScatterCoeffs, k1: f64, k2: Complex64, width: f64) -> f64 {
    let face = (-k2.im * width).exp();
    k1 * (1.0 - c.r1.norm_sqr() - c.t1.norm_sqr()) - k2.re * (c.r2.norm_sqr() + c.t2.norm_sqr()) * face
}

/// Everything computed for one incidence configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scattering {
    pub kin: Kinematics,
    /// `None` on the free-propagation path (`Ω̃ = 0` or a degenerate frame).
    pub frame: Option<DressedFrame>,
    pub coeffs: ScatterCoeffs,
}

impl Scattering {
    pub fn flux_residual(&self) -> f64 {
        flux_residual(&self.coeffs, self.kin.k1, self.kin.k2)
    }
}

/// Validates `p`, rejects grazing incidence and evaluates the closed form.
pub fn scatter(p: &ScaledParams) -> Result<Scattering> {
    p.validate()?;
    if p.theta_deg() >= MAX_THETA_DEG {
        return Err(Error::ChannelDegenerate { channel: 1, modulus: p.k * p.theta.cos() });
    }
    let (s, c) = p.theta.sin_cos();
    scatter_at(p, p.k * c, p.k * s)
}

/// Closed-form amplitudes at an arbitrary Cartesian wavevector, with the
/// medium taken from `p`.
pub fn scatter_at(p: &ScaledParams, kx: f64, ky: f64) -> Result<Scattering> {
    let kin = Kinematics::at(p, kx, ky);
    check_channels(kin.k1, kin.k2)?;
    if p.omega == 0.0 {
        return Ok(Scattering { kin, frame: None, coeffs: ScatterCoeffs::free() });
    }
    let frame = match DressedFrame::new(&kin, p.gamma, p.omega) {
        Ok(f) => f,
        Err(Error::DegenerateFrame { .. }) => {
            return Ok(Scattering { kin, frame: None, coeffs: ScatterCoeffs::free() });
        }
        Err(e) => return Err(e),
    };
    let blocks = m_matrices(&frame, kin.k1, kin.k2, p.width)?;
    let coeffs = coefficients(&blocks, kin.k1, kin.k2, p.width)?;
    Ok(Scattering { kin, frame: Some(frame), coeffs })
}

/// Eigenpairs of the potential matrix computed without the dressed-angle
/// parametrisation: stable quadratic roots and eigenvectors `(Ω̃/2, −λ)`.
fn raw_eigenpairs(delta_eff: f64, gamma: f64, omega: f64) -> [(Complex64, [Complex64; 2]); 2] {
    // λ² + aλ − Ω²/4 = 0
    let a = Complex64::new(delta_eff, 0.5 * gamma);
    let disc = (a * a + omega * omega).sqrt();
    let sum = if (-a + disc).norm() >= (-a - disc).norm() { -a + disc } else { -a - disc };
    let big = 0.5 * sum;
    let small = Complex64::new(-0.25 * omega * omega, 0.0) / big;
    let vec = |lam: Complex64| {
        let v = [Complex64::new(0.5 * omega, 0.0), -lam];
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        [v[0] / n, v[1] / n]
    };
    [(big, vec(big)), (small, vec(small))]
}

/// Ground-truth amplitudes from the raw boundary-matching system.
pub fn coefficients_direct(p: &ScaledParams) -> Result<ScatterCoeffs> {
    p.validate()?;
    let (s, c) = p.theta.sin_cos();
    coefficients_direct_at(p, p.k * c, p.k * s)
}

/// [`coefficients_direct`] at an arbitrary Cartesian wavevector.
///
/// Inside the slab each eigenmode is written as
/// `A e^{α(x−L/2)} + B e^{−α(x+L/2)}` with `Re α ≥ 0`, and the outer
/// amplitudes are solved for at the faces, so every matrix entry stays
/// bounded however opaque the slab is.
pub fn coefficients_direct_at(p: &ScaledParams, kx: f64, ky: f64) -> Result<ScatterCoeffs> {
    if !(p.omega > 0.0) {
        return Err(Error::InvalidParams { name: "omega", reason: "direct solve needs omega > 0" });
    }
    let kin = Kinematics::at(p, kx, ky);
    check_channels(kin.k1, kin.k2)?;
    let width = p.width;
    let k = [Complex64::new(kin.k1, 0.0), kin.k2];
    let modes = raw_eigenpairs(kin.delta_eff, p.gamma, p.omega);
    let alpha = [principal_sqrt(modes[0].0 - kin.ex), principal_sqrt(modes[1].0 - kin.ex)];
    let g = [(-alpha[0] * width).exp(), (-alpha[1] * width).exp()];

    // unknowns: ρ₁ ρ₂ τ₁ τ₂ A₁ A₂ B₁ B₂
    let mut m = DenseMatrix::zeros(8);
    let mut rhs = [ZERO; 8];
    let incident = (-I * k[0] * width * 0.5).exp();
    for comp in 0..2 {
        let (r_val, r_der, t_val, t_der) = (comp, 2 + comp, 4 + comp, 6 + comp);
        for n in 0..2 {
            let v = modes[n].1[comp];
            let (a_col, b_col) = (4 + n, 6 + n);
            m.set(r_val, a_col, v * g[n]);
            m.set(r_val, b_col, v);
            m.set(r_der, a_col, v * alpha[n] * g[n]);
            m.set(r_der, b_col, -v * alpha[n]);
            m.set(t_val, a_col, v);
            m.set(t_val, b_col, v * g[n]);
            m.set(t_der, a_col, v * alpha[n]);
            m.set(t_der, b_col, -v * alpha[n] * g[n]);
        }
        m.set(r_val, comp, -ONE);
        m.set(r_der, comp, I * k[comp]);
        m.set(t_val, 2 + comp, -ONE);
        m.set(t_der, 2 + comp, -I * k[comp]);
    }
    rhs[0] = incident;
    rhs[2] = I * k[0] * incident;

    let lu = Lu::factor(&m).ok_or(Error::IllConditioned { cond: f64::INFINITY })?;
    let cond = m.norm1() * lu.inverse_norm1();
    if !(cond <= MAX_CONDITION) {
        return Err(Error::IllConditioned { cond });
    }
    let x = lu.solve(&rhs);
    let back = |z: Complex64, kk: Complex64| z * (-I * kk * width * 0.5).exp();
    Ok(ScatterCoeffs {
        r1: back(x[0], k[0]),
        r2: back(x[1], k[1]),
        t1: back(x[2], k[0]),
        t2: back(x[3], k[1]),
    })
}
