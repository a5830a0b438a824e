//! Seeded random-draw comparisons: closed-form amplitudes against the direct
//! 8×8 boundary solve, flux balance without decay, and absorption with it.

use gh_atom_core::params::derive_kinematics;
use gh_atom_core::scattering::{absorbed_flux, coefficients_direct};
use gh_atom_core::{scatter, ScaledParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EQUIVALENCE_TOL: f64 = 1e-9;
pub const FLUX_TOL: f64 = 1e-10;

/// Ranges of the random draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrawRanges {
    pub detuning: (f64, f64),
    pub omega: (f64, f64),
    pub k: (f64, f64),
    pub k_laser: (f64, f64),
    pub width: (f64, f64),
    pub theta_deg: (f64, f64),
}

impl Default for DrawRanges {
    fn default() -> Self {
        Self {
            detuning: (-300.0, 300.0),
            omega: (1.0, 50.0),
            k: (0.5, 6.0),
            k_laser: (0.0, 10.0),
            width: (0.5, 10.0),
            theta_deg: (1.0, 85.0),
        }
    }
}

impl DrawRanges {
    pub fn draw(&self, rng: &mut impl Rng, gamma: f64) -> ScaledParams {
        let u = |rng: &mut dyn rand::RngCore, (lo, hi): (f64, f64)| lo + (hi - lo) * rng.gen::<f64>();
        ScaledParams {
            gamma,
            detuning: u(rng, self.detuning),
            omega: u(rng, self.omega),
            k: u(rng, self.k),
            k_laser: u(rng, self.k_laser),
            width: u(rng, self.width),
            theta: 0.0,
        }
        .with_theta_deg(u(rng, self.theta_deg))
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Largest value seen, with the configuration that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Worst {
    pub value: f64,
    pub params: Option<ScaledParams>,
}

impl Worst {
    fn new() -> Self {
        Self { value: 0.0, params: None }
    }

    fn offer(&mut self, value: f64, p: &ScaledParams) {
        if !(value <= self.value) {
            self.value = value;
            self.params = Some(*p);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: usize,
    pub worst: Worst,
    pub tolerance: f64,
    /// Draws that raised an error, with the error name.
    pub errors: Vec<(ScaledParams, &'static str)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.worst.value <= self.tolerance
    }
}

/// Largest relative deviation over the four amplitudes between the closed
/// form and the direct solve.
pub fn equivalence(trials: usize, seed: u64) -> SuiteReport {
    let ranges = DrawRanges::default();
    let mut rng = rng(seed);
    let mut worst = Worst::new();
    let mut errors = Vec::new();
    for i in 0..trials {
        let gamma = if i % 2 == 0 { 1.0 } else { 0.0 };
        let p = ranges.draw(&mut rng, gamma);
        match (scatter(&p), coefficients_direct(&p)) {
            (Ok(s), Ok(d)) => {
                let dev = s
                    .coeffs
                    .as_array()
                    .iter()
                    .zip(d.as_array())
                    .map(|(a, b)| (a - b).norm() / b.norm().max(f64::MIN_POSITIVE))
                    .fold(0.0, f64::max);
                worst.offer(dev, &p);
            }
            (Err(e), _) | (_, Err(e)) => errors.push((p, e.name())),
        }
    }
    SuiteReport { name: "analytic vs direct", trials, worst, tolerance: EQUIVALENCE_TOL, errors }
}

/// Lossless flux balance `|flux residual| / k₁` over draws whose excited
/// channel is open (`open = true`) or closed.
pub fn flux(trials: usize, seed: u64, open: bool) -> SuiteReport {
    let ranges = DrawRanges::default();
    let mut rng = rng(seed);
    let mut worst = Worst::new();
    let mut errors = Vec::new();
    let mut done = 0;
    while done < trials {
        let p = ranges.draw(&mut rng, 0.0);
        let kin = derive_kinematics(&p);
        if (kin.delta_eff + kin.ex > 0.0) != open {
            continue;
        }
        done += 1;
        match scatter(&p) {
            Ok(s) => worst.offer(s.flux_residual().abs() / kin.k1, &p),
            Err(e) => errors.push((p, e.name())),
        }
    }
    let name = if open { "flux, open excited channel" } else { "flux, closed excited channel" };
    SuiteReport { name, trials, worst, tolerance: FLUX_TOL, errors }
}

/// With decay the slab must absorb. The worst value is 1 if any draw gave a
/// non-positive absorbed flux and 0 otherwise.
pub fn absorption(trials: usize, seed: u64) -> SuiteReport {
    let ranges = DrawRanges::default();
    let mut rng = rng(seed);
    let mut worst = Worst::new();
    let mut errors = Vec::new();
    for _ in 0..trials {
        let p = ranges.draw(&mut rng, 1.0);
        match scatter(&p) {
            Ok(s) => {
                let a = absorbed_flux(&s.coeffs, s.kin.k1, s.kin.k2, p.width);
                if !(a > 0.0) {
                    worst.offer(1.0, &p);
                }
            }
            Err(e) => errors.push((p, e.name())),
        }
    }
    SuiteReport { name: "absorption positivity", trials, worst, tolerance: 0.0, errors }
}
