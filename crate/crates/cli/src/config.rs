//! Flag values and the `--config` file.
//!
//! A config file holds one `key = value` pair per line, where `key` is the
//! long name of a flag of the chosen subcommand (`preset = linear`,
//! `hbar = 0.1,0.05`). Blank lines and lines starting with `#` are skipped.
//! A flag without a value is written `key = true`. Flags given on the command
//! line take precedence over the file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;

use asymlat_core::{PlanckValue, Point2, SystemPreset, Window};

use crate::error::{CliError, Result};

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::input(format!("{what}: cannot parse {s:?} as a number")))?;
    if !v.is_finite() {
        return Err(CliError::input(format!("{what}: {s:?} is not finite")));
    }
    Ok(v)
}

pub fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',').map(|t| parse_f64(t, what)).collect()
}

pub fn parse_window(s: &str) -> Result<Window> {
    let v = parse_list(s, "window")?;
    if v.len() != 4 {
        return Err(CliError::input(format!(
            "window needs xmin,xmax,ymin,ymax, got {s:?}"
        )));
    }
    Window::new(v[0], v[1], v[2], v[3]).map_err(CliError::invalid)
}

pub fn parse_point(s: &str) -> Result<Point2> {
    let v = parse_list(s, "point")?;
    if v.len() != 2 {
        return Err(CliError::input(format!("point needs x,y, got {s:?}")));
    }
    Ok(Point2::new(v[0], v[1]))
}

pub fn planck(v: f64) -> Result<PlanckValue> {
    PlanckValue::new(v).map_err(CliError::invalid)
}

/// Strictly decreasing ħ values from `--hbar h1,h2,...` or `--schedule h1,n`
/// (the harmonic schedule `h1/j`, `j = 1..n`).
pub fn hbar_schedule(list: Option<&str>, schedule: Option<&str>) -> Result<Vec<PlanckValue>> {
    let hs = match (list, schedule) {
        (Some(l), None) => parse_list(l, "hbar")?,
        (None, Some(s)) => {
            let v = parse_list(s, "schedule")?;
            if v.len() != 2 || v[1] < 1.0 || v[1].fract() != 0.0 {
                return Err(CliError::input(format!(
                    "schedule needs h1,n with integer n >= 1, got {s:?}"
                )));
            }
            (1..=v[1] as usize).map(|j| v[0] / j as f64).collect()
        }
        (None, None) => return Err(CliError::input("one of --hbar or --schedule is required")),
        (Some(_), Some(_)) => {
            return Err(CliError::input(
                "--hbar and --schedule are mutually exclusive",
            ))
        }
    };
    let hs = hs.into_iter().map(planck).collect::<Result<Vec<_>>>()?;
    if hs.windows(2).any(|w| w[1].get() >= w[0].get()) {
        return Err(CliError::input("hbar values must be strictly decreasing"));
    }
    Ok(hs)
}

/// Preset parameters given as flags; unset ones take the preset's default.
#[derive(Debug, Clone, Default)]
pub struct PresetParams {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub kappa: Option<f64>,
    pub alpha: Option<f64>,
    pub mu: Option<f64>,
    pub beta: Option<f64>,
}

pub fn preset(name: &str, p: &PresetParams) -> Result<SystemPreset> {
    let preset = match name {
        "identity" => SystemPreset::Identity,
        "linear" => SystemPreset::Linear {
            a: p.a.unwrap_or(2.0),
            b: p.b.unwrap_or(3.0),
        },
        "shear_nonlinear" => SystemPreset::ShearNonlinear {
            kappa: p.kappa.unwrap_or(1.0),
        },
        "semitoric" => SystemPreset::Semitoric {
            alpha: p.alpha.unwrap_or(0.0),
            mu: p.mu.unwrap_or(0.25),
        },
        "pendulum_classical" => SystemPreset::PendulumClassical,
        "basis_flipping" => SystemPreset::BasisFlipping {
            beta: p.beta.unwrap_or(1.0),
        },
        "two_region" => SystemPreset::TwoRegion,
        other => return Err(CliError::input(format!("unknown preset {other:?}"))),
    };
    preset.validate().map_err(CliError::invalid)?;
    Ok(preset)
}

/// `preset:NAME[,key=value...]`, e.g. `preset:linear,a=2,b=3`.
pub fn chart_spec(s: &str) -> Result<SystemPreset> {
    let rest = s.strip_prefix("preset:").ok_or_else(|| {
        CliError::input(format!("chart must look like preset:NAME,..., got {s:?}"))
    })?;
    let mut parts = rest.split(',');
    let name = parts.next().unwrap_or_default();
    let mut p = PresetParams::default();
    for kv in parts {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("chart parameter {kv:?} needs key=value")))?;
        let v = Some(parse_f64(v, k)?);
        match k.trim() {
            "a" => p.a = v,
            "b" => p.b = v,
            "kappa" => p.kappa = v,
            "alpha" => p.alpha = v,
            "mu" => p.mu = v,
            "beta" => p.beta = v,
            other => {
                return Err(CliError::input(format!(
                    "unknown chart parameter {other:?}"
                )))
            }
        }
    }
    preset(name, &p)
}

fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::input(format!("config line {}: expected key = value", i + 1))
        })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Splices the pairs of a `--config` file into `args` right after the
/// subcommand, so that later command-line flags override them.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        let a = a.to_string_lossy();
        if a == "--config" {
            let v = args
                .get(i + 1)
                .ok_or_else(|| CliError::input("--config needs a file"))?;
            path = Some(v.to_string_lossy().into_owned());
            break;
        }
        if let Some(v) = a.strip_prefix("--config=") {
            path = Some(v.to_string());
            break;
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::input(format!("cannot read config {path}: {e}")))?;
    let pairs = parse_config_file(&text)?;
    let mut extra = Vec::new();
    for (k, v) in pairs {
        match v.as_str() {
            "true" => extra.push(format!("--{k}").into()),
            "false" => {}
            _ => extra.push(format!("--{k}={v}").into()),
        }
    }
    // args[0] is the program, args[1] the subcommand.
    let at = args.len().min(2);
    let mut out = args[..at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}
