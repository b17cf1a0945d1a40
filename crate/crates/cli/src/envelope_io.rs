use std::path::Path;

use anyhow::{bail, Context};
use waveqc_core::memory::{FieldEnvelope, StorageTrace, TimeGrid};
use waveqc_core::Complex64;

use crate::output::{fmt_f, Cell};

/// Reads a field envelope from CSV with columns `t,re` or `t,re,im`.
/// '#'-prefixed lines and a textual header line are skipped; the time column
/// must form a uniform, strictly increasing grid.
pub fn read_envelope_csv(path: &Path) -> anyhow::Result<FieldEnvelope> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read envelope {}", path.display()))?;
    let mut times = Vec::new();
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if !(2..=3).contains(&fields.len()) {
            bail!("{}:{}: expected 2 or 3 columns", path.display(), lineno + 1);
        }
        if fields[0].parse::<f64>().is_err() && times.is_empty() {
            continue; // header line
        }
        let t: f64 = fields[0]
            .parse()
            .with_context(|| format!("{}:{}: bad time", path.display(), lineno + 1))?;
        let re: f64 = fields[1]
            .parse()
            .with_context(|| format!("{}:{}: bad amplitude", path.display(), lineno + 1))?;
        let im: f64 = if fields.len() == 3 {
            fields[2]
                .parse()
                .with_context(|| format!("{}:{}: bad amplitude", path.display(), lineno + 1))?
        } else {
            0.0
        };
        times.push(t);
        samples.push(Complex64::new(re, im));
    }
    if times.len() < 2 {
        bail!("{}: envelope needs at least two samples", path.display());
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) {
        bail!("{}: time column must increase", path.display());
    }
    for (k, w) in times.windows(2).enumerate() {
        if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt {
            bail!(
                "{}: non-uniform grid at row {} (step {} vs {})",
                path.display(),
                k + 1,
                w[1] - w[0],
                dt
            );
        }
    }
    let grid = TimeGrid::new(times[0], dt, times.len()).map_err(|e| anyhow::anyhow!("{e}"))?;
    FieldEnvelope::new(grid, samples).map_err(|e| anyhow::anyhow!("{e}"))
}

pub fn envelope_rows(envelope: &FieldEnvelope) -> Vec<Vec<Cell>> {
    envelope
        .samples
        .iter()
        .enumerate()
        .map(|(k, z)| {
            vec![
                Cell::F(envelope.grid.time(k)),
                Cell::F(z.re),
                Cell::F(z.im),
                Cell::F(z.norm_sqr()),
            ]
        })
        .collect()
}

/// Full storage trace rows: time, cavity quadratures, output flux and the
/// running energy fractions (normalized by the total input energy).
pub fn trace_rows(trace: &StorageTrace) -> Vec<Vec<Cell>> {
    let total_in = trace.input_energy.max(f64::MIN_POSITIVE);
    (0..trace.grid.len)
        .map(|k| {
            let stored = trace.cavity[k].norm_sqr() + trace.spin_population[k];
            vec![
                Cell::F(trace.grid.time(k)),
                Cell::F(trace.cavity[k].re),
                Cell::F(trace.cavity[k].im),
                Cell::F(trace.out_field.samples[k].norm_sqr()),
                Cell::F(stored / total_in),
                Cell::F(trace.cumulative_out[k] / total_in),
                Cell::F(trace.cumulative_lost[k] / total_in),
            ]
        })
        .collect()
}

/// Writes an envelope in the same dialect `read_envelope_csv` accepts.
pub fn write_envelope_csv(path: &Path, envelope: &FieldEnvelope) -> anyhow::Result<()> {
    let mut text = String::from("t,re,im\n");
    for (k, z) in envelope.samples.iter().enumerate() {
        text.push_str(&format!(
            "{},{},{}\n",
            fmt_f(envelope.grid.time(k)),
            fmt_f(z.re),
            fmt_f(z.im)
        ));
    }
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_an_envelope() {
        let grid = TimeGrid::new(0.0, 0.25, 9).unwrap();
        let env = FieldEnvelope::gaussian(grid, 1.0, 0.5, 1.0, 0.3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("env.csv");
        write_envelope_csv(&path, &env).unwrap();
        let back = read_envelope_csv(&path).unwrap();
        assert_eq!(back.grid.len, env.grid.len);
        for (a, b) in back.samples.iter().zip(env.samples.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_uniform_grid() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "t,re\n0.0,1.0\n1.0,1.0\n2.5,1.0\n").unwrap();
        assert!(read_envelope_csv(&path).is_err());
    }

    #[test]
    fn accepts_comments_and_two_column_form() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ok.csv");
        std::fs::write(&path, "# a comment\nt,re\n0.0,1.0\n0.5,2.0\n1.0,0.5\n").unwrap();
        let env = read_envelope_csv(&path).unwrap();
        assert_eq!(env.grid.len, 3);
        assert_eq!(env.samples[1], Complex64::new(2.0, 0.0));
    }
}
