//! `key = value` parameter files.
//!
//! Recognised keys: `gamma`, `Delta`, `Omega`, `k`, `kL`, `L`, `theta_deg`,
//! `fd_rel_step`, `sigma_k`, `modes`. Everything after `#` is ignored.
//! Command-line flags are applied on top with [`Settings::apply`].

use std::path::Path;

use gh_atom_core::{ScaledParams, ShiftOptions};

use crate::CliError;

/// Medium, incidence and numerical settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub params: ScaledParams,
    pub fd_rel_step: f64,
    /// Packet width; `None` means `0.005 k`.
    pub sigma_k: Option<f64>,
    pub modes: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self { params: ScaledParams::default(), fd_rel_step: ShiftOptions::default().rel_step, sigma_k: None, modes: 32 }
    }
}

/// Optional overrides, one per config key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub omega: Option<f64>,
    pub k: Option<f64>,
    pub k_laser: Option<f64>,
    pub width: Option<f64>,
    pub theta_deg: Option<f64>,
    pub fd_rel_step: Option<f64>,
    pub sigma_k: Option<f64>,
    pub modes: Option<usize>,
}

impl Overrides {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Input(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let num = || -> Result<f64, CliError> {
                value
                    .parse::<f64>()
                    .map_err(|_| CliError::Input(format!("line {}: `{key}` is not a number: {value}", lineno + 1)))
            };
            match key {
                "gamma" => o.gamma = Some(num()?),
                "Delta" => o.delta = Some(num()?),
                "Omega" => o.omega = Some(num()?),
                "k" => o.k = Some(num()?),
                "kL" => o.k_laser = Some(num()?),
                "L" => o.width = Some(num()?),
                "theta_deg" => o.theta_deg = Some(num()?),
                "fd_rel_step" => o.fd_rel_step = Some(num()?),
                "sigma_k" => o.sigma_k = Some(num()?),
                "modes" => {
                    o.modes = Some(value.parse::<usize>().map_err(|_| {
                        CliError::Input(format!("line {}: `modes` must be a non-negative integer", lineno + 1))
                    })?)
                }
                other => return Err(CliError::Input(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        Ok(o)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }
}

impl Settings {
    pub fn apply(&mut self, o: &Overrides) {
        let p = &mut self.params;
        if let Some(v) = o.gamma {
            p.gamma = v;
        }
        if let Some(v) = o.delta {
            p.detuning = v;
        }
        if let Some(v) = o.omega {
            p.omega = v;
        }
        if let Some(v) = o.k {
            p.k = v;
        }
        if let Some(v) = o.k_laser {
            p.k_laser = v;
        }
        if let Some(v) = o.width {
            p.width = v;
        }
        if let Some(v) = o.theta_deg {
            p.theta = v.to_radians();
        }
        if let Some(v) = o.fd_rel_step {
            self.fd_rel_step = v;
        }
        if o.sigma_k.is_some() {
            self.sigma_k = o.sigma_k;
        }
        if let Some(v) = o.modes {
            self.modes = v;
        }
    }

    /// Defaults, then the file (if any), then the flags.
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let mut s = Settings::default();
        if let Some(path) = file {
            s.apply(&Overrides::read(path)?);
        }
        s.apply(flags);
        if !(s.fd_rel_step > 0.0 && s.fd_rel_step < 1e-2) {
            return Err(CliError::Input("fd_rel_step must lie in (0, 0.01)".into()));
        }
        Ok(s)
    }

    pub fn shift_options(&self) -> ShiftOptions {
        ShiftOptions { rel_step: self.fd_rel_step }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let o = Overrides::parse("# blue\nDelta = 200 # detuning\n\nkL=8.1125\ntheta_deg = 30\nmodes = 48\n").unwrap();
        assert_eq!(o.delta, Some(200.0));
        assert_eq!(o.k_laser, Some(8.1125));
        assert_eq!(o.modes, Some(48));
        assert_eq!(o.gamma, None);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(Overrides::parse("delta = 3").is_err());
        assert!(Overrides::parse("Delta 3").is_err());
        assert!(Overrides::parse("Delta = x").is_err());
    }

    #[test]
    fn flags_override_file() {
        let mut s = Settings::default();
        s.apply(&Overrides::parse("Delta = 200\nL = 4").unwrap());
        s.apply(&Overrides { delta: Some(-50.0), ..Default::default() });
        assert_eq!(s.params.detuning, -50.0);
        assert_eq!(s.params.width, 4.0);
    }
}
