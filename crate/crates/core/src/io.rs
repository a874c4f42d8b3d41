//! CSV and JSON artifacts. Every float is written with 17 significant digits.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::analysis::SharpnessRow;
use crate::error::{Error, Result};
use crate::solitary::SolitonProfile;
use crate::spectral::{differentiate, GridSpec, StateField};
use crate::stepper::TraceRow;

/// Round-trip decimal form; non-finite values become `inf`, `-inf` or `nan`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Serializes an infinite time as the string `"infinite"` (JSON has no infinity).
pub fn serialize_time<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() && *v > 0.0 {
        s.serialize_str("infinite")
    } else {
        s.serialize_f64(*v)
    }
}

fn create_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(|e| Error::io(dir, e)),
        _ => Ok(()),
    }
}

fn write_rows(path: &Path, comment: Option<&str>, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    create_parent(path)?;
    let mut out = Vec::new();
    if let Some(c) = comment {
        out.extend_from_slice(format!("# {c}\n").as_bytes());
    }
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// `t,E,m,xi,max_u,dt`
pub fn write_trace(path: &Path, rows: &[TraceRow]) -> Result<()> {
    write_rows(
        path,
        None,
        &["t", "E", "m", "xi", "max_u", "dt"],
        rows.iter()
            .map(|r| [r.t, r.energy, r.m, r.xi, r.max_u, r.dt].iter().map(|v| fmt_f64(*v)).collect()),
    )
}

/// `x,u` with an optional `# t = ...` line.
pub fn write_field(path: &Path, field: &StateField, t: Option<f64>) -> Result<()> {
    let grid = field.grid();
    let comment = t.map(|t| format!("t = {}", fmt_f64(t)));
    write_rows(
        path,
        comment.as_deref(),
        &["x", "u"],
        field.values().iter().enumerate().map(|(i, v)| vec![fmt_f64(grid.x(i)), fmt_f64(*v)]),
    )
}

/// Reads an `x,u` table sampled on a uniform periodic grid and rebuilds that grid.
///
/// The first node fixes `-L`; the spacing must be uniform to `1e-9` relative.
pub fn read_field(path: &Path) -> Result<StateField> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("{}: missing column '{name}'", path.display())))
    };
    let (ix, iu) = (col("x")?, col("u")?);
    let mut xs = Vec::new();
    let mut us = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Error::Config(format!("{}: row {}: unreadable number", path.display(), line + 1)))
        };
        xs.push(parse(ix)?);
        us.push(parse(iu)?);
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::Config(format!("{}: need at least two rows", path.display())));
    }
    let half_width = -xs[0];
    let grid = GridSpec::new(half_width, n)?;
    let h = grid.spacing();
    if let Some(i) = (0..n).find(|&i| (xs[i] - grid.x(i)).abs() > 1e-9 * half_width.max(h)) {
        return Err(Error::Config(format!(
            "{}: x[{i}] = {} does not lie on the uniform grid over [{}, {})",
            path.display(),
            xs[i],
            -half_width,
            half_width
        )));
    }
    StateField::new(grid, us)
}

/// Profile table: a metadata comment, then `x,phi,phi_x`.
pub fn write_profile(path: &Path, profile: &SolitonProfile) -> Result<()> {
    let p = &profile.params;
    let meta = format!(
        "c = {}, omega = {}, gamma = {}, a = {}, kappa = {}",
        fmt_f64(p.speed),
        fmt_f64(p.params.omega),
        fmt_f64(p.params.gamma),
        fmt_f64(p.amplitude()),
        fmt_f64(p.decay_rate())
    );
    let grid: &Arc<GridSpec> = profile.grid();
    let phi = profile.field.values();
    let dphi = differentiate(&profile.field, 1)?;
    write_rows(
        path,
        Some(&meta),
        &["x", "phi", "phi_x"],
        (0..grid.len()).map(|i| vec![fmt_f64(grid.x(i)), fmt_f64(phi[i]), fmt_f64(dphi.values()[i])]),
    )
}

/// Sharpness comparison table.
pub fn write_comparison(path: &Path, rows: &[SharpnessRow]) -> Result<()> {
    write_rows(
        path,
        None,
        &[
            "family_id", "alpha", "E0", "m0", "gamma_case", "K", "T_lower", "t_star", "ratio", "censored", "status",
        ],
        rows.iter().map(|r| {
            let status = match (&r.error, r.censored) {
                (Some(e), _) => format!("failed: {e}"),
                (None, true) => "censored".to_string(),
                (None, false) => "ok".to_string(),
            };
            vec![
                r.family_id.clone(),
                fmt_f64(r.alpha),
                fmt_f64(r.e0),
                fmt_f64(r.m0),
                r.gamma_case.as_str().to_string(),
                fmt_f64(r.k),
                fmt_f64(r.t_lower),
                fmt_opt(r.t_star),
                fmt_opt(r.ratio),
                r.censored.to_string(),
                status,
            ]
        }),
    )
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    create_parent(path)?;
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, std::f64::consts::PI, 0.0] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn field_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let g = GridSpec::new(7.5, 64).unwrap();
        let f = StateField::from_fn(g, |x| (-x * x).exp() * x.sin()).unwrap();
        write_field(&path, &f, Some(0.25)).unwrap();
        let back = read_field(&path).unwrap();
        assert_eq!(back.grid().len(), 64);
        assert!((back.grid().half_width() - 7.5).abs() < 1e-15);
        assert_eq!(back.values(), f.values());
    }

    #[test]
    fn rejects_nonuniform_samples() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let mut text = String::from("x,u\n");
        for i in 0..16 {
            let x = -1.0 + 0.125 * i as f64 + if i == 5 { 0.01 } else { 0.0 };
            text.push_str(&format!("{x},0\n"));
        }
        fs::write(&path, text).unwrap();
        assert!(matches!(read_field(&path), Err(Error::Config(_))));
        assert!(matches!(read_field(&dir.path().join("missing.csv")), Err(Error::Io { .. })));
    }
}
