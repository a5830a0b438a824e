//! θ-sweeps and their CSV representation.

use std::io::{Read, Write};

use gh_atom_core::dressed::{decay_rates, eigenvalues};
use gh_atom_core::params::derive_kinematics;
use gh_atom_core::shifts::{compute_shifts, phase_of};
use gh_atom_core::{scatter, Complex64, Error, ScaledParams, ShiftOptions};
use rayon::prelude::*;

use crate::{fmt_num, CliError};

pub const HEADER: [&str; 20] = [
    "theta_deg", "delta_eff", "Vp_re", "Vp_im", "Vm_re", "Vm_im", "ap_re", "ap_im", "am_re", "am_im", "absR1sq",
    "absT1sq", "ThetaR", "ThetaT", "yR", "yT", "dtR", "dtT", "flux", "reason",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Medium and `k`; its angle is ignored.
    pub base: ScaledParams,
    pub theta_min: f64,
    pub theta_max: f64,
    pub n: usize,
    pub unwrap: bool,
    pub opts: ShiftOptions,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(0.0 <= self.theta_min && self.theta_min < self.theta_max && self.theta_max < 90.0) {
            return Err(CliError::Input("need 0 <= theta_min < theta_max < 90".into()));
        }
        if self.n < 2 {
            return Err(CliError::Input("need at least 2 samples".into()));
        }
        self.base.with_theta(0.0).validate()?;
        Ok(())
    }

    pub fn angles(&self) -> Vec<f64> {
        let span = self.theta_max - self.theta_min;
        (0..self.n).map(|i| self.theta_min + span * i as f64 / (self.n - 1) as f64).collect()
    }
}

/// One sampled angle. Quantities that could not be computed are NaN and the
/// first failure is named in `reason`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub theta_deg: f64,
    pub delta_eff: f64,
    pub v_plus: Complex64,
    pub v_minus: Complex64,
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
    pub abs_r1_sq: f64,
    pub abs_t1_sq: f64,
    pub phase_r: f64,
    pub phase_t: f64,
    pub y_r: f64,
    pub y_t: f64,
    pub dt_r: f64,
    pub dt_t: f64,
    pub flux: f64,
    pub reason: String,
}


impl SweepRow {
    pub fn compute(base: &ScaledParams, theta_deg: f64, opts: &ShiftOptions) -> Self {
        let p = base.with_theta_deg(theta_deg);
        let kin = derive_kinematics(&p);
        let (v_plus, v_minus) = eigenvalues(kin.delta_eff, p.gamma, p.omega);
        let (alpha_plus, alpha_minus) = decay_rates(v_plus, v_minus, kin.kx);
        let mut row = SweepRow {
            theta_deg,
            delta_eff: kin.delta_eff,
            v_plus,
            v_minus,
            alpha_plus,
            alpha_minus,
            abs_r1_sq: f64::NAN,
            abs_t1_sq: f64::NAN,
            phase_r: f64::NAN,
            phase_t: f64::NAN,
            y_r: f64::NAN,
            y_t: f64::NAN,
            dt_r: f64::NAN,
            dt_t: f64::NAN,
            flux: f64::NAN,
            reason: String::new(),
        };
        let mut note = |e: Error| {
            if row.reason.is_empty() {
                row.reason = e.name().to_string();
            }
        };
        let s = match scatter(&p) {
            Ok(s) => s,
            Err(e) => {
                note(e);
                return row;
            }
        };
        row.abs_r1_sq = s.coeffs.r1.norm_sqr();
        row.abs_t1_sq = s.coeffs.t1.norm_sqr();
        row.flux = s.flux_residual();
        match phase_of(s.coeffs.r1) {
            Ok(v) => row.phase_r = v,
            Err(e) => note(e),
        }
        match phase_of(s.coeffs.t1) {
            Ok(v) => row.phase_t = v,
            Err(e) => note(e),
        }
        match compute_shifts(&p, opts) {
            Ok(sh) => {
                row.y_r = sh.reflected.shift;
                row.y_t = sh.transmitted.shift;
                row.dt_r = sh.reflected.delay;
                row.dt_t = sh.transmitted.delay;
            }
            Err(e) => note(e),
        }
        row
    }

    pub fn record(&self) -> Vec<String> {
        let c = |z: Complex64| [fmt_num(z.re), fmt_num(z.im)];
        let [vpr, vpi] = c(self.v_plus);
        let [vmr, vmi] = c(self.v_minus);
        let [apr, api] = c(self.alpha_plus);
        let [amr, ami] = c(self.alpha_minus);
        vec![
            fmt_num(self.theta_deg),
            fmt_num(self.delta_eff),
            vpr,
            vpi,
            vmr,
            vmi,
            apr,
            api,
            amr,
            ami,
            fmt_num(self.abs_r1_sq),
            fmt_num(self.abs_t1_sq),
            fmt_num(self.phase_r),
            fmt_num(self.phase_t),
            fmt_num(self.y_r),
            fmt_num(self.y_t),
            fmt_num(self.dt_r),
            fmt_num(self.dt_t),
            fmt_num(self.flux),
            self.reason.clone(),
        ]
    }

    pub fn from_record(rec: &csv::StringRecord) -> Result<Self, CliError> {
        if rec.len() != HEADER.len() {
            return Err(CliError::Input(format!("expected {} fields, found {}", HEADER.len(), rec.len())));
        }
        let mut v = [0.0; 19];
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = rec[i]
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("column {}: not a number: {}", HEADER[i], &rec[i])))?;
        }
        Ok(SweepRow {
            theta_deg: v[0],
            delta_eff: v[1],
            v_plus: Complex64::new(v[2], v[3]),
            v_minus: Complex64::new(v[4], v[5]),
            alpha_plus: Complex64::new(v[6], v[7]),
            alpha_minus: Complex64::new(v[8], v[9]),
            abs_r1_sq: v[10],
            abs_t1_sq: v[11],
            phase_r: v[12],
            phase_t: v[13],
            y_r: v[14],
            y_t: v[15],
            dt_r: v[16],
            dt_t: v[17],
            flux: v[18],
            reason: rec[19].to_string(),
        })
    }
}

/// Evaluates every angle on `pool`; rows come back in θ order.
pub fn run(spec: &SweepSpec, pool: &rayon::ThreadPool) -> Result<Vec<SweepRow>, CliError> {
    spec.validate()?;
    let angles = spec.angles();
    let mut rows: Vec<SweepRow> =
        pool.install(|| angles.par_iter().map(|&t| SweepRow::compute(&spec.base, t, &spec.opts)).collect());
    if spec.unwrap {
        unwrap_column(&mut rows, |r| &mut r.phase_r);
        unwrap_column(&mut rows, |r| &mut r.phase_t);
    }
    Ok(rows)
}

/// Removes 2π jumps between consecutive finite entries of a column.
fn unwrap_column(rows: &mut [SweepRow], col: impl Fn(&mut SweepRow) -> &mut f64) {
    let mut finite: Vec<f64> = rows.iter_mut().map(|r| *col(r)).filter(|v| v.is_finite()).collect();
    gh_atom_core::shifts::unwrap_phases(&mut finite);
    let mut it = finite.into_iter();
    for r in rows.iter_mut() {
        let slot = col(r);
        if slot.is_finite() {
            *slot = it.next().expect("same count");
        }
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<(), std::io::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>, CliError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(|e| CliError::Input(e.to_string()))?;
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(CliError::Input("unexpected CSV header".into()));
    }
    r.records()
        .map(|rec| SweepRow::from_record(&rec.map_err(|e| CliError::Input(e.to_string()))?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_without_coupling_has_free_transmission() {
        let base = ScaledParams { omega: 0.0, ..ScaledParams::default() };
        let r = SweepRow::compute(&base, 20.0, &ShiftOptions::default());
        assert_eq!(r.abs_t1_sq, 1.0);
        assert_eq!(r.abs_r1_sq, 0.0);
        assert!(r.phase_r.is_nan());
        assert_eq!(r.reason, "ZeroAmplitude");
    }

    #[test]
    fn record_round_trip() {
        let r = SweepRow::compute(&ScaledParams::default(), 30.0, &ShiftOptions::default());
        let rec = csv::StringRecord::from(r.record());
        assert_eq!(SweepRow::from_record(&rec).unwrap(), r);
    }
}
