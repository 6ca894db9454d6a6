use std::path::{Path, PathBuf};

use asymlat_core::chart::{classical_rotation, generate_family, PerturbationSpec};
use asymlat_core::fixed::{common_points, label_window, transition_between, WindowLabelling};
use asymlat_core::rotnum::{compare_convergence, local_oracle_matrix, rotation_field};
use asymlat_core::semitoric::{label_from_elliptic_boundary_with, label_semitoric, BoundarySide};
use asymlat_core::sequence::{
    correct_sequence, estimate_drift, monodromy_along_path, DriftConfig, SequenceState,
};
use asymlat_core::{
    mobius_apply, projective_distance, AlgoConfig, Labelling, LabellingKind, SpectrumFamily,
    SpectrumSnapshot, Window,
};
use rayon::prelude::*;

use crate::config::{self, parse_point, parse_window, PresetParams};
use crate::error::{CliError, Result};
use crate::io::{self, num, read_spectrum, SpectrumFile};
use crate::{
    CompareArgs, DriftArgs, GenArgs, LabelArgs, LabelOpts, Mode, MonodromyArgs, RotnumArgs, Side,
};

pub fn gen(a: &GenArgs) -> Result<()> {
    let p = &a.preset;
    let params = PresetParams {
        a: p.a,
        b: p.b,
        kappa: p.kappa,
        alpha: p.alpha,
        mu: p.mu,
        beta: p.beta,
    };
    let preset = config::preset(&p.preset, &params)?;
    let chart = preset.chart().map_err(CliError::invalid)?;
    let hs = config::hbar_schedule(a.hbar.as_deref(), a.schedule.as_deref())?;
    let window = match &a.window {
        Some(w) => parse_window(w)?,
        None => preset.default_window(),
    };
    let perturb = PerturbationSpec::new(a.perturb, a.seed).map_err(CliError::invalid)?;
    let (family, oracles) =
        generate_family(&chart, &hs, window, &perturb).map_err(CliError::invalid)?;
    io::write_spectrum(&mut io::writer(a.out.as_deref())?, family.snapshots())?;
    if let Some(path) = &a.oracle {
        let labellings = family
            .snapshots()
            .iter()
            .zip(&oracles)
            .map(|(s, o)| Labelling::new(s.hbar(), window, LabellingKind::FixedH, o.iter()))
            .collect::<asymlat_core::Result<Vec<_>>>()?;
        let rows: Vec<_> = family.snapshots().iter().zip(&labellings).collect();
        io::write_labelled(&mut io::writer(Some(path))?, &rows)?;
    }
    Ok(())
}

fn snapshot_window(file: &SpectrumFile, flag: Option<&str>) -> Result<Window> {
    match flag {
        Some(w) => parse_window(w),
        None => file.bounding_window(),
    }
}

fn algo_config(opts: &LabelOpts, window: &Window) -> Result<AlgoConfig> {
    let inner = match &opts.inner {
        Some(w) => parse_window(w)?,
        None => window
            .shrink(0.1 * window.width().min(window.height()))
            .map_err(CliError::invalid)?,
    };
    let center = match &opts.center {
        Some(c) => parse_point(c)?,
        None => window.center(),
    };
    let mut config = AlgoConfig::new(center, inner);
    if let Some(t) = opts.tie_tolerance {
        config = config.with_tie_tolerance(t);
    }
    config.validate(window).map_err(CliError::invalid)?;
    Ok(config)
}

struct Labelled {
    snapshots: Vec<SpectrumSnapshot>,
    labellings: Vec<Labelling>,
    sequence: Option<SequenceState>,
}

/// Labels every ħ group of a spectrum file; groups are independent and run
/// in parallel, except for the basis correction of `--mode sequence`.
fn label_file(file: &SpectrumFile, opts: &LabelOpts) -> Result<Labelled> {
    let window = snapshot_window(file, opts.window.as_deref())?;
    let snapshots = file.snapshots(window)?;
    let config = algo_config(opts, &window)?;
    let side = match opts.boundary {
        Side::Min => BoundarySide::Minimum,
        Side::Max => BoundarySide::Maximum,
    };
    let (labellings, sequence) = match opts.mode {
        Mode::Sequence => {
            let per: Vec<WindowLabelling> = snapshots
                .par_iter()
                .map(|s| label_window(s, &config))
                .collect::<asymlat_core::Result<_>>()?;
            let (ls, state) = correct_sequence(&per)?;
            (ls, Some(state))
        }
        mode => {
            let ls = snapshots
                .par_iter()
                .map(|s| match mode {
                    Mode::Fixed => label_window(s, &config).map(|o| o.labelling),
                    Mode::Semitoric => label_semitoric(s, &config),
                    _ => label_from_elliptic_boundary_with(s, opts.epsilon, side),
                })
                .collect::<asymlat_core::Result<Vec<_>>>()?;
            (ls, None)
        }
    };
    Ok(Labelled {
        snapshots,
        labellings,
        sequence,
    })
}

fn sidecar_path(a: &LabelArgs) -> Option<PathBuf> {
    if a.sidecar.is_some() {
        return a.sidecar.clone();
    }
    let out = a.out.as_deref().filter(|p| *p != Path::new("-"))?;
    let stem = out.file_stem()?.to_string_lossy();
    Some(out.with_file_name(format!("{stem}.sequence.csv")))
}

pub fn label(a: &LabelArgs) -> Result<()> {
    let file = read_spectrum(&a.input)?;
    let done = label_file(&file, &a.opts)?;
    let rows: Vec<_> = done.snapshots.iter().zip(&done.labellings).collect();
    io::write_labelled(&mut io::writer(a.out.as_deref())?, &rows)?;
    if let (Some(state), Some(path)) = (&done.sequence, sidecar_path(a)) {
        let mut w = io::writer(Some(&path))?;
        w.write_record(["hbar", "s11", "s12", "s21", "s22", "skipped"])?;
        for step in &state.steps {
            let [[s11, s12], [s21, s22]] = step.s.matrix().rows();
            w.write_record([
                num(step.hbar.get()),
                s11.to_string(),
                s12.to_string(),
                s21.to_string(),
                s22.to_string(),
                u8::from(step.skipped).to_string(),
            ])?;
        }
        w.flush()?;
    }
    Ok(())
}

pub fn rotnum(a: &RotnumArgs) -> Result<()> {
    let file = read_spectrum(&a.input)?;
    let (snapshots, labellings) = if file.labelled {
        let window = snapshot_window(&file, a.opts.window.as_deref())?;
        (file.snapshots(window)?, file.labellings(window)?)
    } else {
        let done = label_file(&file, &a.opts)?;
        (done.snapshots, done.labellings)
    };
    let chart = match &a.chart {
        Some(spec) => Some(
            config::chart_spec(spec)?
                .chart()
                .map_err(CliError::invalid)?,
        ),
        None => None,
    };
    let mut out = io::writer(a.out.as_deref())?;
    let mut header = vec!["hbar", "n", "m", "p", "q", "value_real"];
    if chart.is_some() {
        header.extend(["classical_p", "classical_q", "error"]);
    }
    out.write_record(&header)?;
    for l in &labellings {
        let h = num(l.hbar().get());
        for (k, s) in rotation_field(l) {
            let mut row = vec![
                h.clone(),
                k.n.to_string(),
                k.m.to_string(),
                num(s.value.p()),
                num(s.value.q()),
                num(s.value_real),
            ];
            if let Some(chart) = &chart {
                let point = l.point_of(k).expect("label of the field");
                let z = local_oracle_matrix(chart, l, k)?;
                let w = mobius_apply(&z, &classical_rotation(chart, point)?);
                row.extend([
                    num(w.p()),
                    num(w.q()),
                    num(projective_distance(&s.value, &w)),
                ]);
            }
            out.write_record(&row)?;
        }
    }
    out.flush()?;
    if let (Some(chart), Some(at)) = (&chart, &a.at) {
        let c = parse_point(at)?;
        let family = SpectrumFamily::new(snapshots).map_err(CliError::invalid)?;
        let report = compare_convergence(chart, &family, &labellings, c)?;
        match report.fitted_order {
            Some(order) => eprintln!("fitted order at ({}, {}): {order}", c.x, c.y),
            None if report.is_exact() => eprintln!("fitted order at ({}, {}): exact", c.x, c.y),
            None => eprintln!("fitted order at ({}, {}): too few values of hbar", c.x, c.y),
        }
    }
    Ok(())
}

pub fn drift(a: &DriftArgs) -> Result<()> {
    let file = read_spectrum(&a.input)?;
    let window = snapshot_window(&file, a.window.as_deref())?;
    let family = SpectrumFamily::new(file.snapshots(window)?).map_err(CliError::invalid)?;
    let config = DriftConfig {
        order: a.order,
        epsilon: a.epsilon,
    };
    let d = estimate_drift(&family, parse_point(&a.c)?, &config)?;
    let mut out = io::writer(a.out.as_deref())?;
    out.write_record(["h1", "h2", "dx", "dy"])?;
    out.write_record([
        num(d.h1.get()),
        num(d.h2.get()),
        num(d.value.x),
        num(d.value.y),
    ])?;
    out.flush()?;
    Ok(())
}

pub fn monodromy(a: &MonodromyArgs) -> Result<()> {
    let file = read_spectrum(&a.input)?;
    let window = snapshot_window(&file, a.window.as_deref())?;
    let snapshots = file.snapshots(window)?;
    let snapshot = match a.hbar {
        Some(h) => snapshots
            .iter()
            .find(|s| s.h() == h)
            .ok_or_else(|| CliError::input(format!("no rows with hbar = {h}")))?,
        None if snapshots.len() == 1 => &snapshots[0],
        None => return Err(CliError::input("multi-hbar input: choose one with --hbar")),
    };
    let windows = a
        .windows
        .split(';')
        .filter(|w| !w.trim().is_empty())
        .map(parse_window)
        .collect::<Result<Vec<_>>>()?;
    let m = monodromy_along_path(snapshot, &windows, a.tie_tolerance)?;
    let [[p, q], [r, s]] = m.matrix().rows();
    let mut out = io::writer(a.out.as_deref())?;
    out.write_record(["a", "b", "c", "d"])?;
    out.write_record([p, q, r, s].map(|v| v.to_string()))?;
    out.flush()?;
    Ok(())
}

pub fn compare(a: &CompareArgs) -> Result<()> {
    let read = |p: &Path| -> Result<Vec<Labelling>> {
        let f = read_spectrum(p)?;
        f.labellings(f.bounding_window()?)
    };
    let (left, right) = (read(&a.left)?, read(&a.right)?);
    let mut out = io::writer(a.out.as_deref())?;
    out.write_record(["hbar", "a", "b", "c", "d", "shift_n", "shift_m", "common"])?;
    let mut any = false;
    for l in &left {
        let Some(r) = right.iter().find(|r| r.hbar() == l.hbar()) else {
            continue;
        };
        let t = transition_between(l, r)?;
        let [[p, q], [u, v]] = t.linear.matrix().rows();
        out.write_record([
            num(l.hbar().get()),
            p.to_string(),
            q.to_string(),
            u.to_string(),
            v.to_string(),
            t.shift.n.to_string(),
            t.shift.m.to_string(),
            common_points(l, r).len().to_string(),
        ])?;
        any = true;
    }
    out.flush()?;
    if !any {
        return Err(CliError::input("the two files share no value of hbar"));
    }
    Ok(())
}
