//! Acceptance criteria. Each check returns an [`Outcome`]; the `acceptance`
//! test target runs them all and prints one line per criterion.

use std::f64::consts::PI;
use std::time::Instant;

use gh_atom::oracle::{self, DrawRanges};
use gh_atom_core::dressed::potential_matrix;
use gh_atom_core::linalg::{identity2, max_abs2, max_abs_diff2, mul2};
use gh_atom_core::params::derive_kinematics;
use gh_atom_core::scattering::m_matrices_explicit;
use gh_atom_core::shifts::{compute_shifts, critical_angle, phase_gradient, phase_of, unwrap_phases, Channel};
use gh_atom_core::wavepacket::shift_report;
use gh_atom_core::{scatter, scatter_at, DressedFrame, PacketSpec, ScaledParams, ShiftOptions};

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn red() -> ScaledParams {
    ScaledParams { detuning: -100.0, ..ScaledParams::default() }
}

fn blue() -> ScaledParams {
    ScaledParams { detuning: 200.0, ..ScaledParams::default() }
}

/// Runs the command line in-process; returns exit code and stdout.
fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gh-atom").chain(args.iter().copied());
    let code = gh_atom::cli::main_with(argv, &mut out, &mut err);
    (code, out)
}

pub fn critical_angle_anchor() -> Outcome {
    let t = Instant::now();
    let (code, out) = cli(&["critical-angle", "--delta", "200"]);
    let secs = t.elapsed().as_secs_f64();
    let text = String::from_utf8_lossy(&out);
    let value = text.trim().strip_prefix("theta_c_deg = ").and_then(|v| v.parse::<f64>().ok());
    let lib = critical_angle(&blue()).ok().flatten().map(f64::to_degrees);
    match (value, lib) {
        (Some(v), Some(l)) => outcome(
            (v - 69.4).abs() <= 0.3 && v == l && code == 0 && secs < 1.0,
            format!("theta_c = {v:.4} deg (target 69.4 +- 0.3), {secs:.3} s"),
        ),
        _ => outcome(false, format!("no angle reported: {text}")),
    }
}

fn report_suite(r: &oracle::SuiteReport) -> String {
    format!("{}: max {:.3e} over {} draws, {} errors", r.name, r.worst.value, r.trials, r.errors.len())
}

pub fn oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let r = oracle::equivalence(200, 2024);
    let secs = t.elapsed().as_secs_f64();
    outcome(r.passed() && secs < 10.0, format!("{} (tol 1e-9), {secs:.2} s", report_suite(&r)))
}

pub fn flux_conservation() -> Outcome {
    let open = oracle::flux(100, 11, true);
    let closed = oracle::flux(100, 12, false);
    let absorb = oracle::absorption(200, 13);
    let pass = open.passed() && closed.passed() && absorb.passed();
    outcome(pass, format!("{}; {}; absorption > 0 in all {} lossy draws: {}", report_suite(&open), report_suite(&closed), absorb.trials, absorb.passed()))
}

pub fn trivial_slab() -> Outcome {
    let ranges = DrawRanges::default();
    let mut rng = oracle::rng(4);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let p = ScaledParams { width: 0.0, ..ranges.draw(&mut rng, (i % 2) as f64) };
        let c = match scatter(&p) {
            Ok(s) => s.coeffs,
            Err(e) => return outcome(false, format!("{} at {p:?}", e.name())),
        };
        worst = worst.max(c.r1.norm()).max(c.r2.norm()).max(c.t2.norm()).max((c.t1 - 1.0).norm());
    }
    outcome(worst <= 1e-12, format!("max |(R1,R2,T1,T2) - (0,0,1,0)| = {worst:.3e} over 100 draws"))
}

pub fn branch_invariance() -> Outcome {
    let ranges = DrawRanges::default();
    let mut rng = oracle::rng(5);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let p = ranges.draw(&mut rng, (i % 2) as f64);
        let kin = derive_kinematics(&p);
        let f = DressedFrame::new(&kin, p.gamma, p.omega).expect("frame");
        let (a_plus, a_minus) = m_matrices_explicit(&f, kin.k1, kin.k2, p.width).expect("blocks");
        for (s1, s2) in [(-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
            let mut g = f;
            g.alpha1 *= s1;
            g.alpha2 *= s2;
            let (b_plus, b_minus) = m_matrices_explicit(&g, kin.k1, kin.k2, p.width).expect("blocks");
            worst = worst
                .max(max_abs_diff2(&a_plus, &b_plus) / max_abs2(&a_plus))
                .max(max_abs_diff2(&a_minus, &b_minus) / max_abs2(&a_minus));
        }
    }
    outcome(worst <= 1e-12, format!("max relative change of M+/M- under rate sign flips = {worst:.3e} at 50 points"))
}

pub fn dressed_algebra() -> Outcome {
    let ranges = DrawRanges::default();
    let mut rng = oracle::rng(6);
    let (mut trace, mut det, mut inv): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..1000 {
        let p = ranges.draw(&mut rng, (i % 2) as f64);
        let kin = derive_kinematics(&p);
        let v = potential_matrix(kin.delta_eff, p.gamma, p.omega);
        let f = DressedFrame::new(&kin, p.gamma, p.omega).expect("frame");
        let scale = v[1][1].norm().max(p.omega);
        trace = trace.max((f.v_plus + f.v_minus - (v[0][0] + v[1][1])).norm() / scale);
        det = det.max((f.v_plus * f.v_minus - (v[0][0] * v[1][1] - v[0][1] * v[1][0])).norm() / (scale * scale));
        inv = inv.max(max_abs_diff2(&mul2(&f.u, &f.u_inv), &identity2()));
    }
    outcome(
        trace.max(det).max(inv) <= 1e-10,
        format!("1000 draws: trace {trace:.2e}, determinant {det:.2e}, |U U^-1 - I| {inv:.2e}"),
    )
}

/// Fourth-order difference of phases sampled on a 9-point line and unwrapped.
pub fn dense_gradient(p: &ScaledParams, channel: Channel) -> Option<(f64, f64)> {
    let (kx, ky) = (p.k * p.theta.cos(), p.k * p.theta.sin());
    let h = 1e-4 * p.k;
    let along = |dx: f64, dy: f64| -> Option<f64> {
        let mut ph = Vec::with_capacity(9);
        for j in -4..=4 {
            let s = scatter_at(p, kx + j as f64 * h * dx, ky + j as f64 * h * dy).ok()?;
            ph.push(phase_of(channel.amplitude(&s)).ok()?);
        }
        unwrap_phases(&mut ph);
        Some((8.0 * (ph[5] - ph[3]) - (ph[6] - ph[2])) / (12.0 * h))
    };
    Some((along(1.0, 0.0)?, along(0.0, 1.0)?))
}

pub fn gradient_consistency() -> Outcome {
    let ranges = DrawRanges::default();
    let mut rng = oracle::rng(7);
    let (mut dense_dev, mut halving): (f64, f64) = (0.0, 0.0);
    let mut accepted = 0;
    while accepted < 50 {
        let p = ranges.draw(&mut rng, 1.0);
        let s = match scatter(&p) {
            Ok(s) => s,
            Err(_) => continue,
        };
        if s.coeffs.r1.norm() < 1e-2 || s.coeffs.t1.norm() < 1e-2 {
            continue;
        }
        accepted += 1;
        for ch in Channel::BOTH {
            let base = ShiftOptions::default();
            let half = ShiftOptions { rel_step: 0.5 * base.rel_step };
            let (Ok(g), Ok(g2), Some(d)) = (phase_gradient(&p, ch, &base), phase_gradient(&p, ch, &half), dense_gradient(&p, ch))
            else {
                return outcome(false, format!("gradient failed at {p:?}"));
            };
            for (a, b, c) in [(g.0, g2.0, d.0), (g.1, g2.1, d.1)] {
                let scale = a.abs().max(1.0);
                dense_dev = dense_dev.max((a - c).abs() / scale);
                halving = halving.max((a - b).abs() / scale);
            }
        }
    }
    outcome(
        dense_dev <= 1e-6 && halving < 1e-7,
        format!("50 points: vs dense unwrapped difference {dense_dev:.2e} (tol 1e-6), step halving {halving:.2e} (tol 1e-7)"),
    )
}

fn r1_sq(p: &ScaledParams, theta_deg: f64) -> f64 {
    scatter(&p.with_theta_deg(theta_deg)).map(|s| s.coeffs.r1.norm_sqr()).unwrap_or(f64::NAN)
}

/// A dip of |R₁|²: refined location and the angles of the highest |R₁|²
/// separating it from its neighbouring dips.
pub struct Dip {
    pub theta: f64,
    pub barriers: (f64, f64),
}

/// Local minima of |R₁|² on `[lo, hi)` that sit at least a factor 10 below
/// the barrier to each neighbour (or to the sweep end).
pub fn resonance_dips(p: &ScaledParams, lo: f64, hi: f64) -> Vec<Dip> {
    let step = 0.01;
    let th: Vec<f64> = (0..).map(|i| lo + step * i as f64).take_while(|&t| t < hi).collect();
    let v: Vec<f64> = th.iter().map(|&t| r1_sq(p, t)).collect();
    let mins: Vec<usize> = (1..v.len() - 1).filter(|&i| v[i] < v[i - 1] && v[i] <= v[i + 1]).collect();
    let argmax = |a: usize, b: usize| (a..=b).max_by(|&x, &y| v[x].total_cmp(&v[y])).unwrap();
    let mut dips = Vec::new();
    for (j, &i) in mins.iter().enumerate() {
        let left = argmax(if j == 0 { 0 } else { mins[j - 1] }, i);
        let right = argmax(i, if j + 1 == mins.len() { v.len() - 1 } else { mins[j + 1] });
        if v[left] < 10.0 * v[i] || v[right] < 10.0 * v[i] {
            continue;
        }
        let (mut a, mut b) = (th[i - 1], th[i + 1]);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let (c, d) = (b - g * (b - a), a + g * (b - a));
            if r1_sq(p, c) < r1_sq(p, d) {
                b = d;
            } else {
                a = c;
            }
        }
        dips.push(Dip { theta: 0.5 * (a + b), barriers: (th[left], th[right]) });
    }
    dips
}

/// Unwrapped change of Θ₁ᴿ across `θ₀ ± w`, with `w` five resonance
/// half-widths (from the curvature of |R₁|² at the dip) or the distance to
/// the nearest barrier, whichever is smaller.
pub fn traversal(p: &ScaledParams, dip: &Dip) -> f64 {
    let t0 = dip.theta;
    let h = 1e-5;
    let f0 = r1_sq(p, t0);
    let curv = (r1_sq(p, t0 + h) - 2.0 * f0 + r1_sq(p, t0 - h)) / (h * h);
    let eps = (2.0 * f0 / curv).sqrt();
    let w = (5.0 * eps).min(t0 - dip.barriers.0).min(dip.barriers.1 - t0);
    let n = 2001;
    let mut ph: Vec<f64> = (0..n)
        .map(|i| {
            let t = t0 - w + 2.0 * w * i as f64 / (n - 1) as f64;
            phase_of(scatter(&p.with_theta_deg(t)).unwrap().coeffs.r1).unwrap()
        })
        .collect();
    unwrap_phases(&mut ph);
    ph[n - 1] - ph[0]
}

pub fn sign_structure() -> Outcome {
    let opts = ShiftOptions::default();
    let theta_c = critical_angle(&blue()).ok().flatten().map(f64::to_degrees).unwrap_or(90.0);
    let mut lines = Vec::new();
    let mut pass = true;
    let mut slopes = [Vec::new(), Vec::new()];
    for (idx, (p, hi, want_negative)) in [(red(), 89.5, true), (blue(), theta_c, false)].into_iter().enumerate() {
        let dips = resonance_dips(&p, 0.0, hi);
        pass &= !dips.is_empty();
        let mut parts = Vec::new();
        for d in &dips {
            let y = compute_shifts(&p.with_theta_deg(d.theta), &opts).map(|s| s.reflected.shift).unwrap_or(f64::NAN);
            let turn = traversal(&p, d) / PI;
            pass &= if want_negative { y < 0.0 } else { y > 0.0 };
            pass &= (turn.abs() - 1.0).abs() <= 0.15;
            slopes[idx].push(turn.signum());
            parts.push(format!("{:.2}deg yR={y:.1} dTheta={turn:+.3}pi", d.theta));
        }
        lines.push(format!("Delta={}: {}", p.detuning, parts.join(", ")));
    }
    let red_sign = slopes[0].first().copied().unwrap_or(0.0);
    let blue_sign = slopes[1].first().copied().unwrap_or(0.0);
    pass &= slopes[0].iter().all(|&s| s == red_sign) && slopes[1].iter().all(|&s| s == blue_sign) && red_sign == -blue_sign;
    outcome(pass, lines.join("; "))
}

fn wavepacket_case(p: &ScaledParams, label: &str) -> (bool, String) {
    let t = Instant::now();
    let mut errs = Vec::new();
    let mut text = Vec::new();
    for factor in [1.0, 0.5] {
        let spec = PacketSpec::with_sigma(p, 0.005 * p.k * factor);
        match shift_report(p, &spec, Channel::Reflected) {
            Ok(r) => {
                errs.push(r.shift_rel_error());
                text.push(format!(
                    "sigma={:.4}: measured {:.3} vs {:.3} ({:.1}%)",
                    spec.sigma_k,
                    r.measured_shift,
                    r.analytic.shift,
                    100.0 * r.shift_rel_error()
                ));
            }
            Err(e) => {
                errs.push(f64::INFINITY);
                text.push(format!("sigma={:.4}: {} ({e})", spec.sigma_k, e.name()));
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let pass = errs[0] <= 0.05 && errs[1] <= 0.025 && secs < 60.0;
    (pass, format!("{label} {:.2}deg: {} [{secs:.1} s]", p.theta_deg(), text.join(", ")))
}

pub fn wavepacket_end_to_end() -> Outcome {
    let red_dip = resonance_dips(&red(), 0.0, 89.5).into_iter().next();
    let theta_c = critical_angle(&blue()).ok().flatten().map(f64::to_degrees).unwrap_or(90.0);
    let blue_dip = resonance_dips(&blue(), 0.0, theta_c).into_iter().next();
    let (Some(r), Some(b)) = (red_dip, blue_dip) else {
        return outcome(false, "no resonance found");
    };
    let (rp, rt) = wavepacket_case(&red().with_theta_deg(r.theta), "red");
    let (bp, bt) = wavepacket_case(&blue().with_theta_deg(b.theta), "blue");
    outcome(rp && bp, format!("{rt}; {bt}"))
}

pub fn cli_determinism() -> Outcome {
    let run = |threads: &str| -> Option<Vec<u8>> {
        std::env::set_var("GH_ATOM_THREADS", threads);
        let (code, out) =
            cli(&["sweep", "--delta", "-100", "--theta-min", "1", "--theta-max", "80", "-n", "400", "--unwrap"]);
        (code == 0).then_some(out)
    };
    let runs = [run("1"), run("1"), run("4")];
    std::env::remove_var("GH_ATOM_THREADS");
    match runs {
        [Some(a), Some(b), Some(c)] => {
            let same = a == b && a == c;
            outcome(same, format!("3 sweeps of 400 rows ({} bytes, 1/1/4 threads), identical: {same}", a.len()))
        }
        _ => outcome(false, "sweep failed to run"),
    }
}

pub type Criterion = (u32, &'static str, fn() -> Outcome);

pub const CRITERIA: [Criterion; 10] = [
    (1, "critical angle", critical_angle_anchor),
    (2, "oracle equivalence", oracle_equivalence),
    (3, "flux conservation", flux_conservation),
    (4, "trivial slab", trivial_slab),
    (5, "branch invariance", branch_invariance),
    (6, "dressed algebra", dressed_algebra),
    (7, "gradient consistency", gradient_consistency),
    (8, "sign structure", sign_structure),
    (9, "wavepacket end-to-end", wavepacket_end_to_end),
    (10, "cli determinism", cli_determinism),
];
