//! Amplitudes frozen from an independent 60-digit boundary solve
//! (`tools/mp_oracle.py`), compared with both double-precision paths.

use gh_atom_core::scattering::coefficients_direct;
use gh_atom_core::{scatter, Complex64, ScaledParams};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

struct Case {
    params: (f64, f64, f64, f64, f64, f64, f64),
    /// R1, R2, T1, T2
    amps: [Complex64; 4],
}

fn cases() -> Vec<Case> {
    vec![
        Case {
            params: (1.0, -100.0, 20.0, 3.0, 8.1125, 6.0, 30.0),
            amps: [
                c(0.0058674100196860606, -0.0086760452754978896),
                c(2415498234625219.2, -11515813266795529.0),
                c(0.83093102785930122, 0.55357387559391972),
                c(-3318502173271446.1, 11287535967747541.0),
            ],
        },
        Case {
            params: (1.0, -100.0, 20.0, 3.0, 8.1125, 6.0, 31.8),
            amps: [
                c(2.4805636046007438e-5, 5.1581161236785277e-5),
                c(4598889081426945.8, -13105100928769014.0),
                c(0.82733139187567282, 0.55902808758413232),
                c(-2096987077934898.4, 13715804771701828.0),
            ],
        },
        Case {
            params: (1.0, 200.0, 20.0, 3.0, 8.1125, 6.0, 21.18),
            amps: [
                c(0.0026031590084961053, -0.0087282603880888972),
                c(-0.010287971028500561, -0.037796182721487272),
                c(0.59214576678578455, -0.78919912044324365),
                c(0.012696237502702092, 0.051179784966648791),
            ],
        },
        Case {
            params: (1.0, 200.0, 20.0, 3.0, 8.1125, 6.0, 80.0),
            amps: [
                c(0.48693854488870889, 0.80850412169762168),
                c(-0.037510980887590805, -0.04424646243026586),
                c(0.02062931353747701, 0.03916219281653653),
                c(0.037110336639248408, 0.031359656449520114),
            ],
        },
        Case {
            params: (0.0, 50.0, 10.0, 4.0, 2.0, 3.0, 45.0),
            amps: [
                c(0.0037340250335242279, -0.032631295728564452),
                c(0.0070099845981286927, 0.079877829790712891),
                c(0.90534914474042284, -0.38389317038680114),
                c(-0.0077509305795572173, -0.085533672926876353),
            ],
        },
        Case {
            params: (0.0, -20.0, 35.0, 1.5, 0.0, 8.0, 10.0),
            amps: [
                c(0.092667427879783166, -0.5582267528228059),
                c(3862797.2825359054, 729824.51950562705),
                c(-0.81336637254546319, -0.13502142146817273),
                c(-5267633.9664920934, 2757095.5895640393),
            ],
        },
    ]
}

fn params(c: &Case) -> ScaledParams {
    let (gamma, detuning, omega, k, k_laser, width, theta_deg) = c.params;
    ScaledParams { gamma, detuning, omega, k, k_laser, width, theta: 0.0 }.with_theta_deg(theta_deg)
}

fn max_rel(a: [Complex64; 4], b: [Complex64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm() / y.norm()).fold(0.0, f64::max)
}

#[test]
fn closed_form_matches_high_precision_solve() {
    for case in cases() {
        let got = scatter(&params(&case)).unwrap().coeffs.as_array();
        let dev = max_rel(got, case.amps);
        assert!(dev < 1e-10, "{:?}: {dev:e}", case.params);
    }
}

#[test]
fn direct_solve_matches_high_precision_solve() {
    for case in cases() {
        let got = coefficients_direct(&params(&case)).unwrap().as_array();
        let dev = max_rel(got, case.amps);
        assert!(dev < 1e-10, "{:?}: {dev:e}", case.params);
    }
}

/// Root of `k²cos²θ = Re V₊(θ)` found with a 30-digit secant solve.
#[test]
fn critical_angle_reference() {
    let p = ScaledParams { detuning: 200.0, ..ScaledParams::default() };
    let t = gh_atom_core::shifts::critical_angle(&p).unwrap().unwrap().to_degrees();
    assert!((t - 69.39835162804463).abs() < 1e-9, "{t}");
}

/// Eigenvalues of the 2×2 potential from a 40-digit dense eigensolve.
#[test]
fn blue_side_eigenvalues() {
    let (vp, vm) = gh_atom_core::dressed::eigenvalues(99.77, 1.0, 20.0);
    let want_p = c(0.99240962885781822678, -0.0048764748249629857847);
    let want_m = c(-100.76240962885781823, -0.49512352517503701422);
    assert!((vp - want_p).norm() <= 1e-12 * want_p.norm(), "{vp}");
    assert!((vm - want_m).norm() <= 1e-12 * want_m.norm(), "{vm}");
}
