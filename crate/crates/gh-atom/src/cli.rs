//! The `gh-atom` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gh_atom_core::scattering::coefficients_direct;
use gh_atom_core::shifts::{compute_shifts, critical_angle, Channel};
use gh_atom_core::{scatter, Complex64, PacketSpec};

use crate::config::{Overrides, Settings};
use crate::sweep::{self, SweepSpec};
use crate::{fmt_num, oracle, packet, svg, thread_pool, CliError};

#[derive(Parser)]
#[command(name = "gh-atom", version, about = "Scattering and lateral shifts of two-level atoms at a square optical potential")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Amplitudes, dressed frame and shifts at one angle.
    Coeffs {
        #[command(flatten)]
        params: ParamArgs,
        /// Also solve the raw boundary system and print the deviation.
        #[arg(long)]
        oracle: bool,
    },
    /// θ-sweep written as CSV.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0.0)]
        theta_min: f64,
        #[arg(long, default_value_t = 85.0)]
        theta_max: f64,
        #[arg(long, short, default_value_t = 1701)]
        n: usize,
        /// Unwrap the phase columns.
        #[arg(long)]
        unwrap: bool,
        /// Output file; stdout when absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Also write `<out>_R.svg` and `<out>_T.svg` (requires --out).
        #[arg(long, requires = "out")]
        svg: bool,
    },
    /// Angle at which the |+> mode stops propagating.
    CriticalAngle {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Seeded random comparison of the closed form against the direct solve.
    Oracle {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Synthesise packets and compare measured shifts with the predictions.
    Wavepacket {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = ChannelArg::Both)]
        channel: ChannelArg,
        /// Write the field at this time to --dump-field.
        #[arg(long, requires = "dump_field")]
        time: Option<f64>,
        /// Field CSV path (x, y, re, im, abs2).
        #[arg(long, requires = "time")]
        dump_field: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    R,
    T,
    Both,
}

#[derive(Args, Default)]
struct ParamArgs {
    /// `key = value` parameter file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long = "delta", allow_hyphen_values = true)]
    delta: Option<f64>,
    #[arg(long = "omega")]
    omega: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long = "kl")]
    k_laser: Option<f64>,
    /// Slab width L.
    #[arg(long = "width")]
    width: Option<f64>,
    /// Incidence angle in degrees.
    #[arg(long = "theta")]
    theta_deg: Option<f64>,
    #[arg(long)]
    fd_rel_step: Option<f64>,
    #[arg(long)]
    sigma_k: Option<f64>,
    #[arg(long)]
    modes: Option<usize>,
}

impl ParamArgs {
    fn settings(&self) -> Result<Settings, CliError> {
        let flags = Overrides {
            gamma: self.gamma,
            delta: self.delta,
            omega: self.omega,
            k: self.k,
            k_laser: self.k_laser,
            width: self.width,
            theta_deg: self.theta_deg,
            fd_rel_step: self.fd_rel_step,
            sigma_k: self.sigma_k,
            modes: self.modes,
        };
        Settings::resolve(self.config.as_deref(), &flags)
    }
}

/// Parses `args` (program name first) and runs the subcommand, writing the
/// report to `out` and diagnostics to `err`. Returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(code) => code as i32,
        Err(e) => {
            let _ = out.flush();
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn run(cmd: Command, out: &mut dyn Write) -> Result<u8, CliError> {
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(|e| CliError::io("<stdout>", e));
    match cmd {
        Command::Coeffs { params, oracle } => {
            let st = params.settings()?;
            let p = st.params;
            let s = scatter(&p)?;
            let kin = s.kin;
            w(out, format!("theta_deg = {}", fmt_num(p.theta_deg())))?;
            w(out, format!("kx = {}", fmt_num(kin.kx)))?;
            w(out, format!("ky = {}", fmt_num(kin.ky)))?;
            w(out, format!("delta_eff = {}", fmt_num(kin.delta_eff)))?;
            w(out, format!("k2 = {}", cfmt(kin.k2)))?;
            match &s.frame {
                Some(f) => {
                    w(out, format!("Vp = {}", cfmt(f.v_plus)))?;
                    w(out, format!("Vm = {}", cfmt(f.v_minus)))?;
                    w(out, format!("phi = {}", fmt_num(f.phi)))?;
                    w(out, format!("beta = {}", fmt_num(f.beta)))?;
                    w(out, format!("alpha_p = {}", cfmt(f.alpha1)))?;
                    w(out, format!("alpha_m = {}", cfmt(f.alpha2)))?;
                }
                None => w(out, "frame = free".to_string())?,
            }
            let c = s.coeffs;
            for (name, v) in [("R1", c.r1), ("R2", c.r2), ("T1", c.t1), ("T2", c.t2)] {
                w(out, format!("{name} = {}", cfmt(v)))?;
            }
            w(out, format!("flux = {}", fmt_num(s.flux_residual())))?;
            match compute_shifts(&p, &st.shift_options()) {
                Ok(sh) => {
                    for ch in Channel::BOTH {
                        let r = sh.channel(ch);
                        let l = ch.label();
                        w(out, format!("Theta{l} = {}", fmt_num(r.phase)))?;
                        w(out, format!("dt{l} = {}", fmt_num(r.delay)))?;
                        w(out, format!("y{l} = {}", fmt_num(r.shift)))?;
                    }
                }
                Err(e) => w(out, format!("shifts = nan ({})", e.name()))?,
            }
            if oracle {
                let d = coefficients_direct(&p)?;
                for (name, a, b) in [("R1", c.r1, d.r1), ("R2", c.r2, d.r2), ("T1", c.t1, d.t1), ("T2", c.t2, d.t2)] {
                    w(out, format!("{name}_direct = {}", cfmt(b)))?;
                    w(out, format!("{name}_reldev = {}", fmt_num((a - b).norm() / b.norm().max(f64::MIN_POSITIVE))))?;
                }
            }
            Ok(0)
        }
        Command::Sweep { params, theta_min, theta_max, n, unwrap, out: path, svg: want_svg } => {
            let st = params.settings()?;
            let spec = SweepSpec { base: st.params, theta_min, theta_max, n, unwrap, opts: st.shift_options() };
            let rows = sweep::run(&spec, &thread_pool())?;
            match &path {
                Some(path) => {
                    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
                    sweep::write_csv(BufWriter::new(f), &rows).map_err(|e| CliError::io(path, e))?;
                    if want_svg {
                        let (r, t) = svg::sweep_charts(&rows);
                        write_file(&sibling(path, "_R.svg"), &r)?;
                        write_file(&sibling(path, "_T.svg"), &t)?;
                    }
                }
                None => sweep::write_csv(&mut *out, &rows).map_err(|e| CliError::io("<stdout>", e))?,
            }
            Ok(0)
        }
        Command::CriticalAngle { params } => {
            let p = params.settings()?.params;
            p.validate()?;
            match critical_angle(&p)? {
                Some(t) => w(out, format!("theta_c_deg = {}", fmt_num(t.to_degrees())))?,
                None if p.detuning < 0.0 => {
                    w(out, "theta_c_deg = none (the critical angle does not exist for the case of red detuning)".into())?
                }
                None => w(out, "theta_c_deg = none (the |+> mode propagates at every angle)".into())?,
            }
            Ok(0)
        }
        Command::Oracle { trials, seed } => {
            if trials == 0 {
                return Err(CliError::Input("need at least one trial".into()));
            }
            let reports = [
                oracle::equivalence(trials, seed),
                oracle::flux(trials.div_ceil(2), seed.wrapping_add(1), true),
                oracle::flux(trials.div_ceil(2), seed.wrapping_add(2), false),
                oracle::absorption(trials, seed.wrapping_add(3)),
            ];
            let mut ok = true;
            for r in &reports {
                ok &= r.passed();
                w(
                    out,
                    format!(
                        "{} {}: trials = {}, max = {}, tol = {}, errors = {}",
                        if r.passed() { "PASS" } else { "FAIL" },
                        r.name,
                        r.trials,
                        fmt_num(r.worst.value),
                        fmt_num(r.tolerance),
                        r.errors.len()
                    ),
                )?;
                for (p, e) in &r.errors {
                    w(out, format!("  {e} at {p:?}"))?;
                }
            }
            Ok(if ok { 0 } else { 3 })
        }
        Command::Wavepacket { params, channel, time, dump_field } => {
            let st = params.settings()?;
            let p = st.params;
            p.validate()?;
            let mut spec = PacketSpec::with_sigma(&p, st.sigma_k.unwrap_or(0.005 * p.k));
            spec.modes = st.modes;
            let channels: &[Channel] = match channel {
                ChannelArg::R => &[Channel::Reflected],
                ChannelArg::T => &[Channel::Transmitted],
                ChannelArg::Both => &Channel::BOTH,
            };
            let pool = thread_pool();
            w(out, "channel,measured_shift,analytic_shift,shift_rel_err,measured_delay,analytic_delay,delay_rel_err".into())?;
            for &ch in channels {
                let (nodes, r) = packet::report(&p, &spec, ch, &st.shift_options(), &pool)?;
                w(
                    out,
                    format!(
                        "{},{},{},{},{},{},{}",
                        ch.label(),
                        fmt_num(r.measured_shift),
                        fmt_num(r.analytic.shift),
                        fmt_num(r.shift_rel_error()),
                        fmt_num(r.measured_delay),
                        fmt_num(r.analytic.delay),
                        fmt_num(r.delay_rel_error())
                    ),
                )?;
                if let (Some(t), Some(path)) = (time, &dump_field) {
                    if !(t >= 0.0) {
                        return Err(CliError::Input("--time must be >= 0".into()));
                    }
                    let field = nodes.field(&p, &spec, t);
                    if field.zero_nodes > 0 {
                        log::warn!("{} of {} nodes have zero amplitude", field.zero_nodes, spec.modes * spec.modes);
                    }
                    let path = if channels.len() > 1 { sibling(path, &format!("_{}.csv", ch.label())) } else { path.clone() };
                    let f = File::create(&path).map_err(|e| CliError::io(&path, e))?;
                    packet::write_field_csv(BufWriter::new(f), &field).map_err(|e| CliError::io(&path, e))?;
                }
            }
            Ok(0)
        }
    }
}

fn cfmt(z: Complex64) -> String {
    format!("{} {}", fmt_num(z.re), fmt_num(z.im))
}

/// `dir/name.csv` + `_R.svg` -> `dir/name_R.svg`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
