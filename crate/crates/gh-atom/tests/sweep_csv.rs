use std::f64::consts::PI;

use gh_atom::sweep::{self, read_csv, write_csv, SweepSpec, HEADER};
use gh_atom_core::{ScaledParams, ShiftOptions};

fn spec(detuning: f64, unwrap: bool) -> SweepSpec {
    SweepSpec {
        base: ScaledParams { detuning, ..ScaledParams::default() },
        theta_min: 0.0,
        theta_max: 85.0,
        n: 1701,
        unwrap,
        opts: ShiftOptions::default(),
    }
}

fn pool(n: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()
}

#[test]
fn header_is_exact() {
    let rows = sweep::run(&SweepSpec { n: 2, ..spec(-100.0, false) }, &pool(1)).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "theta_deg,delta_eff,Vp_re,Vp_im,Vm_re,Vm_im,ap_re,ap_im,am_re,am_im,absR1sq,absT1sq,ThetaR,ThetaT,yR,yT,dtR,dtT,flux,reason"
    );
    assert_eq!(HEADER.join(","), text.lines().next().unwrap());
}

#[test]
fn csv_round_trips_bit_for_bit() {
    for d in [-100.0, 200.0] {
        let rows = sweep::run(&spec(d, true), &pool(4)).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), rows.len());
        for (a, b) in rows.iter().zip(&back) {
            let (ra, rb) = (a.record(), b.record());
            assert_eq!(ra, rb);
        }
    }
}

#[test]
fn missing_values_are_marked() {
    let s = SweepSpec { base: ScaledParams { omega: 0.0, ..ScaledParams::default() }, n: 3, ..spec(-100.0, true) };
    let rows = sweep::run(&s, &pool(2)).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let line = text.lines().nth(1).unwrap();
    assert!(line.contains(",nan,") && line.ends_with(",ZeroAmplitude"), "{line}");
    assert_eq!(read_csv(text.as_bytes()).unwrap().len(), 3);
}

#[test]
fn unwrapped_phases_are_continuous() {
    for d in [-100.0, 200.0] {
        let rows = sweep::run(&spec(d, true), &pool(3)).unwrap();
        for w in rows.windows(2) {
            assert!((w[1].phase_r - w[0].phase_r).abs() < PI);
            assert!((w[1].phase_t - w[0].phase_t).abs() < PI);
        }
    }
}

#[test]
fn thread_count_does_not_change_rows() {
    let a = sweep::run(&spec(200.0, true), &pool(1)).unwrap();
    let b = sweep::run(&spec(200.0, true), &pool(5)).unwrap();
    assert_eq!(a, b);
}
