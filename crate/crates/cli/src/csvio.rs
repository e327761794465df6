//! CSV emission and parsing. The CSV files are the source of truth for
//! experiment results; floats are written in shortest round-trip form, so
//! parsing an emitted file reproduces the in-memory values exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::Result;
use crate::experiment::{PolicyCurve, RegretCurve, RunRow};

/// One row of the aggregate curve table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub policy: String,
    pub checkpoint_budget: f64,
    pub mean_regret_proxy: f64,
    pub stderr_regret_proxy: f64,
    pub replications: usize,
}

pub fn write_runs(path: &Path, rows: &[RunRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(crate::CliError::from)?;
    Ok(())
}

pub fn read_runs(path: &Path) -> Result<Vec<RunRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}

pub fn curve_rows(curve: &RegretCurve) -> Vec<CurveRow> {
    let mut rows = Vec::new();
    for series in &curve.series {
        for (k, &budget) in curve.checkpoint_budgets.iter().enumerate() {
            rows.push(CurveRow {
                policy: series.policy.clone(),
                checkpoint_budget: budget,
                mean_regret_proxy: series.mean[k],
                stderr_regret_proxy: series.stderr[k],
                replications: series.replications,
            });
        }
    }
    rows
}

pub fn write_curve(path: &Path, curve: &RegretCurve) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in curve_rows(curve) {
        w.serialize(row)?;
    }
    w.flush().map_err(crate::CliError::from)?;
    Ok(())
}

/// Rebuild a [`RegretCurve`] from its CSV form (series in file order).
pub fn read_curve(path: &Path) -> Result<RegretCurve> {
    let mut r = csv::Reader::from_path(path)?;
    let mut checkpoint_budgets: Vec<f64> = Vec::new();
    let mut series: Vec<PolicyCurve> = Vec::new();
    for rec in r.deserialize() {
        let row: CurveRow = rec?;
        let current = match series.last_mut() {
            Some(s) if s.policy == row.policy => s,
            _ => {
                series.push(PolicyCurve {
                    policy: row.policy.clone(),
                    replications: row.replications,
                    mean: Vec::new(),
                    stderr: Vec::new(),
                });
                series.last_mut().unwrap()
            }
        };
        current.mean.push(row.mean_regret_proxy);
        current.stderr.push(row.stderr_regret_proxy);
        if series.len() == 1 {
            checkpoint_budgets.push(row.checkpoint_budget);
        }
    }
    Ok(RegretCurve {
        checkpoint_budgets,
        series,
    })
}
