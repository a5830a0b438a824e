use std::path::Path;
use std::process::{Command, Output};

use gh_atom::fmt_num;
use gh_atom_core::{scatter, ScaledParams};

fn gh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gh-atom")).args(args).output().expect("spawn gh-atom")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_string()
}

#[test]
fn coeffs_echo_library_values() {
    let o = gh(&["coeffs", "--delta", "-100", "--theta", "30"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let s = scatter(&ScaledParams::default().with_theta_deg(30.0)).unwrap();
    assert_eq!(field(&text, "R1"), format!("{} {}", fmt_num(s.coeffs.r1.re), fmt_num(s.coeffs.r1.im)));
    assert_eq!(field(&text, "T2"), format!("{} {}", fmt_num(s.coeffs.t2.re), fmt_num(s.coeffs.t2.im)));
}

#[test]
fn empty_slab_transmits() {
    let text = stdout(&gh(&["coeffs", "--width", "0", "--theta", "40"]));
    let t1: Vec<f64> = field(&text, "T1").split(' ').map(|v| v.parse().unwrap()).collect();
    assert!((t1[0] - 1.0).abs() < 1e-12 && t1[1].abs() < 1e-12);
}

#[test]
fn oracle_flag_appends_direct_columns() {
    let text = stdout(&gh(&["coeffs", "--theta", "30", "--oracle"]));
    for name in ["R1", "R2", "T1", "T2"] {
        let dev: f64 = field(&text, &format!("{name}_reldev")).parse().unwrap();
        assert!(dev < 1e-9, "{name}: {dev}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(gh(&["coeffs", "--theta", "95"]).status.code(), Some(2));
    assert_eq!(gh(&["coeffs", "--k", "-1"]).status.code(), Some(2));
    assert_eq!(gh(&["sweep", "--theta-min", "50", "--theta-max", "10"]).status.code(), Some(2));
    assert_eq!(gh(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(gh(&["coeffs", "--config", "/nonexistent/gh-atom.cfg"]).status.code(), Some(4));
    assert_eq!(gh(&["sweep", "-n", "3", "-o", "/nonexistent/dir/out.csv"]).status.code(), Some(4));
    let grazing = gh(&["coeffs", "--theta", "89.95"]);
    assert_eq!(grazing.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&grazing.stderr).contains("ChannelDegenerate"));
}

#[test]
fn critical_angle_reports() {
    let blue = stdout(&gh(&["critical-angle", "--delta", "200"]));
    let v: f64 = field(&blue, "theta_c_deg").parse().unwrap();
    assert!((v - 69.4).abs() < 0.3);
    let red = stdout(&gh(&["critical-angle", "--delta", "-100"]));
    assert!(red.contains("does not exist for the case of red detuning"));
    let fast = stdout(&gh(&["critical-angle", "--delta", "200", "--k", "1e7"]));
    let v: f64 = field(&fast, "theta_c_deg").parse().unwrap();
    assert!(v > 89.9, "{v}");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("blue.cfg");
    std::fs::write(&cfg, "# blue side\nDelta = 200\ntheta_deg = 30\nL = 4\n").unwrap();
    let a = stdout(&gh(&["coeffs", "--config", cfg.to_str().unwrap()]));
    let b = stdout(&gh(&["coeffs", "--delta", "200", "--theta", "30", "--width", "4"]));
    assert_eq!(a, b);
    let c = stdout(&gh(&["coeffs", "--config", cfg.to_str().unwrap(), "--delta", "-100"]));
    assert_ne!(a, c);
    std::fs::write(&cfg, "Detuning = 3\n").unwrap();
    assert_eq!(gh(&["coeffs", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn two_row_sweep_with_charts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = gh(&["sweep", "--theta-min", "10", "--theta-max", "20", "-n", "2", "--svg", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    let rows = gh_atom::sweep::read_csv(std::fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0].theta_deg, rows[1].theta_deg), (10.0, 20.0));
    for name in ["s_R.svg", "s_T.svg"] {
        let svg = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(svg.contains("<svg") && svg.contains("version=\"1.1\""));
    }
    let r = std::fs::read_to_string(dir.path().join("s_R.svg")).unwrap();
    assert!(r.contains(">absR1sq<") && r.contains(">ThetaR<") && r.contains(">yR<"));
}

#[test]
fn oracle_is_reproducible() {
    let a = gh(&["oracle", "--trials", "1", "--seed", "7"]);
    let b = gh(&["oracle", "--trials", "1", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let full = stdout(&gh(&["oracle"]));
    assert_eq!(full.lines().filter(|l| l.starts_with("PASS")).count(), 4, "{full}");
}

#[test]
fn wavepacket_table_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("field.csv");
    let o = gh(&[
        "wavepacket", "--delta", "200", "--theta", "17", "--channel", "r", "--time", "40", "--dump-field",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "R");
    let rel: f64 = row[3].parse().unwrap();
    assert!(rel < 0.05, "{rel}");
    assert_grid_csv(&path, 256 * 256);
}

fn assert_grid_csv(path: &Path, rows: usize) {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["x", "y", "re", "im", "abs2"]);
    let mut n = 0;
    for rec in r.records() {
        let rec = rec.unwrap();
        assert!(rec.iter().all(|v| v.parse::<f64>().unwrap().is_finite()));
        n += 1;
    }
    assert_eq!(n, rows);
}
