use std::path::Path;

use anyhow::{anyhow, bail, Context};

use crate::config::{ConfigFile, Resolved};
use crate::output::{write_csv, Cell, RunReport};
use crate::scenarios;

/// Result of a sweep: one report per value, in input order, plus the path of
/// the collated CSV.
pub struct SweepOutcome {
    pub reports: Vec<RunReport>,
    pub all_passed: bool,
}

/// Parses a comma-separated value list; an empty string is an empty sweep.
pub fn parse_values(text: &str) -> anyhow::Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .with_context(|| format!("sweep value '{s}' is not numeric"))
        })
        .collect()
}

/// Runs the scenario once per axis value, overriding `axis` in the parameter
/// table. Runs execute concurrently; artifacts land in `run_NNN/` subdirs and
/// the summary rows are collated into `sweep.csv` in input order.
pub fn run_sweep(cfg: &ConfigFile, axis: &str, values: &[f64]) -> anyhow::Result<SweepOutcome> {
    // The axis must name a numeric scenario parameter: numeric override now,
    // schema check per run below.
    if let Some(existing) = cfg.params.get(axis) {
        if !matches!(existing, toml::Value::Integer(_) | toml::Value::Float(_)) {
            bail!("sweep axis '{axis}' is not a numeric parameter");
        }
    }

    let base_dir = match std::env::var_os("WAVEQC_OUTPUT_DIR") {
        Some(dir) => std::path::PathBuf::from(dir),
        None => cfg.output_dir.clone(),
    };
    std::fs::create_dir_all(&base_dir)?;

    // Resolve every run configuration up front so schema errors surface
    // before any work starts.
    let mut runs: Vec<Resolved> = Vec::with_capacity(values.len());
    for (idx, &value) in values.iter().enumerate() {
        let mut params = cfg.params.clone();
        let tv = if value.fract() == 0.0 && value.abs() < 9.0e15 {
            toml::Value::Integer(value as i64)
        } else {
            toml::Value::Float(value)
        };
        params.insert(axis.to_string(), tv);
        let scenario = crate::config::Scenario::from_table(&cfg.scenario, params)
            .with_context(|| format!("sweep value {value} for axis '{axis}'"))?;
        runs.push(Resolved {
            scenario,
            output_dir: base_dir.join(format!("run_{idx:03}")),
            seed: cfg.seed,
        });
    }

    let mut slots: Vec<Option<anyhow::Result<RunReport>>> = Vec::new();
    slots.resize_with(runs.len(), || None);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for resolved in &runs {
            handles.push(scope.spawn(move || scenarios::run(resolved)));
        }
        for (slot, handle) in slots.iter_mut().zip(handles) {
            *slot = Some(
                handle
                    .join()
                    .unwrap_or_else(|_| Err(anyhow!("run panicked"))),
            );
        }
    });

    let mut reports = Vec::with_capacity(values.len());
    for (idx, slot) in slots.into_iter().enumerate() {
        let report = slot
            .expect("every slot filled")
            .with_context(|| format!("sweep run {idx} (value {})", values[idx]))?;
        reports.push(report);
    }

    write_sweep_csv(&base_dir, &cfg.scenario, cfg.seed, axis, values, &reports)?;
    let all_passed = reports.iter().all(RunReport::all_passed);
    Ok(SweepOutcome {
        reports,
        all_passed,
    })
}

fn write_sweep_csv(
    dir: &Path,
    scenario: &str,
    seed: u64,
    axis: &str,
    values: &[f64],
    reports: &[RunReport],
) -> anyhow::Result<()> {
    let metric_names: Vec<String> = reports
        .first()
        .map(|r| r.summary.iter().map(|(k, _)| k.clone()).collect())
        .unwrap_or_default();
    let mut docs: Vec<(&str, &str)> = vec![(axis, "sweep axis value")];
    for name in &metric_names {
        docs.push((
            name.as_str(),
            "summary metric of the run at this axis value",
        ));
    }
    let rows: Vec<Vec<Cell>> = values
        .iter()
        .zip(reports.iter())
        .map(|(&v, report)| {
            let mut row = vec![Cell::F(v)];
            for name in &metric_names {
                row.push(Cell::F(report.summary_value(name).unwrap_or(f64::NAN)));
            }
            row
        })
        .collect();
    write_csv(&dir.join("sweep.csv"), scenario, seed, &docs, &rows)
}
