//! CSV files.
//!
//! Spectra are `hbar,x,y`; labelled spectra add `n,m` (both empty for an
//! unlabelled point). Reals are written in shortest round-trip form, rows are
//! grouped by ħ in decreasing order and sorted by `(x, y)` within a group.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use asymlat_core::{
    Label2, Labelling, LabellingKind, PlanckValue, Point2, SpectrumSnapshot, Window,
};

use crate::config::planck;
use crate::error::{CliError, Result};

/// All rows of one ħ value.
#[derive(Debug, Clone)]
pub struct Group {
    pub hbar: PlanckValue,
    pub points: Vec<Point2>,
    pub labels: Vec<Option<Label2>>,
}

#[derive(Debug, Clone)]
pub struct SpectrumFile {
    /// Decreasing ħ.
    pub groups: Vec<Group>,
    pub labelled: bool,
}

fn open(path: &Path) -> Result<Box<dyn Read>> {
    if path == Path::new("-") {
        return Ok(Box::new(io::stdin()));
    }
    let f = File::open(path)
        .map_err(|e| CliError::input(format!("cannot open {}: {e}", path.display())))?;
    Ok(Box::new(f))
}

fn column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.trim() == name)
}

fn field(row: &csv::StringRecord, i: usize, line: u64) -> Result<&str> {
    row.get(i)
        .map(str::trim)
        .ok_or_else(|| CliError::input(format!("line {line}: missing field")))
}

fn real(s: &str, what: &str, line: u64) -> Result<f64> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::input(format!("line {line}: bad {what} {s:?}"))),
    }
}

pub fn read_spectrum(path: &Path) -> Result<SpectrumFile> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(open(path)?);
    let headers = rdr.headers()?.clone();
    let need = |name| {
        column(&headers, name)
            .ok_or_else(|| CliError::input(format!("{}: no {name:?} column", path.display())))
    };
    let (ih, ix, iy) = (need("hbar")?, need("x")?, need("y")?);
    let labels = column(&headers, "n").zip(column(&headers, "m"));
    let mut rows: Vec<(f64, Point2, Option<Label2>)> = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let h = real(field(&row, ih, line)?, "hbar", line)?;
        let p = Point2::new(
            real(field(&row, ix, line)?, "x", line)?,
            real(field(&row, iy, line)?, "y", line)?,
        );
        let label = match labels {
            Some((i_n, i_m)) => {
                let (n, m) = (field(&row, i_n, line)?, field(&row, i_m, line)?);
                match (n.is_empty(), m.is_empty()) {
                    (true, true) => None,
                    (false, false) => {
                        let int = |s: &str| {
                            s.parse::<i64>().map_err(|_| {
                                CliError::input(format!("line {line}: bad label {s:?}"))
                            })
                        };
                        Some(Label2::new(int(n)?, int(m)?))
                    }
                    _ => return Err(CliError::input(format!("line {line}: half a label"))),
                }
            }
            None => None,
        };
        rows.push((h, p, label));
    }
    if rows.is_empty() {
        return Err(CliError::input(format!("{}: no data rows", path.display())));
    }
    rows.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.lex_cmp(&b.1)));
    let mut groups: Vec<Group> = Vec::new();
    for (h, p, l) in rows {
        match groups.last_mut() {
            Some(g) if g.hbar.get() == h => {
                g.points.push(p);
                g.labels.push(l);
            }
            _ => groups.push(Group {
                hbar: planck(h)?,
                points: vec![p],
                labels: vec![l],
            }),
        }
    }
    Ok(SpectrumFile {
        groups,
        labelled: labels.is_some(),
    })
}

impl SpectrumFile {
    /// Bounding box of all points, padded by half the largest ħ.
    pub fn bounding_window(&self) -> Result<Window> {
        let pad = 0.5 * self.groups[0].hbar.get();
        let pts = self.groups.iter().flat_map(|g| &g.points);
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in pts {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
        Window::new(x0 - pad, x1 + pad, y0 - pad, y1 + pad).map_err(CliError::invalid)
    }

    pub fn snapshots(&self, window: Window) -> Result<Vec<SpectrumSnapshot>> {
        self.groups
            .iter()
            .map(|g| {
                SpectrumSnapshot::new(g.hbar, window, g.points.clone()).map_err(CliError::invalid)
            })
            .collect()
    }

    /// Labellings of a labelled file, one per ħ.
    pub fn labellings(&self, window: Window) -> Result<Vec<Labelling>> {
        if !self.labelled {
            return Err(CliError::input("input has no n,m columns"));
        }
        self.groups
            .iter()
            .map(|g| {
                let pairs = g
                    .points
                    .iter()
                    .zip(&g.labels)
                    .filter_map(|(p, l)| l.map(|l| (*p, l)));
                Labelling::new(g.hbar, window, LabellingKind::FixedH, pairs)
                    .map_err(CliError::invalid)
            })
            .collect()
    }
}

pub type CsvOut = csv::Writer<Box<dyn Write>>;

pub fn writer(path: Option<&Path>) -> Result<CsvOut> {
    let sink: Box<dyn Write> = match path {
        None => Box::new(BufWriter::new(io::stdout())),
        Some(p) if p == Path::new("-") => Box::new(BufWriter::new(io::stdout())),
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::input(format!("cannot create {}: {e}", p.display()))
        })?)),
    };
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink))
}

/// Shortest decimal that parses back to the same `f64`; very small or large
/// magnitudes use exponent notation.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_spectrum(out: &mut CsvOut, snapshots: &[SpectrumSnapshot]) -> Result<()> {
    out.write_record(["hbar", "x", "y"])?;
    for s in snapshots {
        let h = num(s.h());
        for p in s.points() {
            out.write_record([h.as_str(), &num(p.x), &num(p.y)])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Every point of each snapshot, with its label or empty `n,m`.
pub fn write_labelled(out: &mut CsvOut, rows: &[(&SpectrumSnapshot, &Labelling)]) -> Result<()> {
    out.write_record(["hbar", "x", "y", "n", "m"])?;
    for (s, l) in rows {
        let h = num(s.h());
        for &p in s.points() {
            let (n, m) = match l.label_of(p) {
                Some(l) => (l.n.to_string(), l.m.to_string()),
                None => (String::new(), String::new()),
            };
            out.write_record([h.as_str(), &num(p.x), &num(p.y), &n, &m])?;
        }
    }
    out.flush()?;
    Ok(())
}
