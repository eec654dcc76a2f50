//! Tabular serialization of experiment results.
//!
//! File layout: zero or more `#`-prefixed metadata lines echoing the run
//! configuration (never timestamps or machine state, so reruns are
//! byte-identical), then a mandatory header row, then data rows. Floats are
//! written as the shortest decimal that round-trips to the same double, so
//! parsing an emitted file recovers the table exactly.

use std::io::Write;

use anyhow::Result;
use num_complex::Complex64;
use serde::Serialize;

use cyclewalk::{EntropyRecord, SpectrumReport};

use crate::experiment::{SweepRow, ThresholdCell, TrajectoryRow};

/// Shortest round-trippable decimal form of a double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn write_metadata(w: &mut impl Write, meta: &[String]) -> Result<()> {
    for line in meta {
        writeln!(w, "# {line}")?;
    }
    Ok(())
}

/// `t, x0..x{N-1}, s_total, s_coin, s_walker, mutual_info, trace_distance`
/// plus `backend_discrepancy` when the rows carry one.
pub fn write_trajectory_csv(
    mut w: impl Write,
    meta: &[String],
    n_sites: usize,
    rows: &[TrajectoryRow],
) -> Result<()> {
    write_metadata(&mut w, meta)?;
    let with_discrepancy = rows.iter().any(|r| r.backend_discrepancy.is_some());
    let mut csv = csv::Writer::from_writer(w);
    let mut header = vec!["t".to_string()];
    header.extend((0..n_sites).map(|x| format!("x{x}")));
    header.extend(
        ["s_total", "s_coin", "s_walker", "mutual_info", "trace_distance"]
            .map(str::to_string),
    );
    if with_discrepancy {
        header.push("backend_discrepancy".to_string());
    }
    csv.write_record(&header)?;
    for row in rows {
        let mut record = vec![row.time.to_string()];
        record.extend(row.position.iter().map(|&p| fmt_f64(p)));
        record.push(fmt_f64(row.entropy.s_total));
        record.push(fmt_f64(row.entropy.s_coin));
        record.push(fmt_f64(row.entropy.s_walker));
        record.push(fmt_f64(row.entropy.mutual_info));
        record.push(fmt_f64(row.trace_distance));
        if with_discrepancy {
            record.push(row.backend_discrepancy.map(fmt_f64).unwrap_or_default());
        }
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonRow<'a> {
    t: usize,
    position: &'a [f64],
    s_total: f64,
    s_coin: f64,
    s_walker: f64,
    mutual_info: f64,
    trace_distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    backend_discrepancy: Option<f64>,
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    config: &'a [String],
    rows: Vec<JsonRow<'a>>,
}

pub fn write_trajectory_json(
    mut w: impl Write,
    meta: &[String],
    rows: &[TrajectoryRow],
) -> Result<()> {
    let doc = JsonDocument {
        config: meta,
        rows: rows
            .iter()
            .map(|r| JsonRow {
                t: r.time,
                position: &r.position,
                s_total: r.entropy.s_total,
                s_coin: r.entropy.s_coin,
                s_walker: r.entropy.s_walker,
                mutual_info: r.entropy.mutual_info,
                trace_distance: r.trace_distance,
                backend_discrepancy: r.backend_discrepancy,
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    Ok(())
}

/// `t, s_total, s_coin, s_walker, mutual_info`, one row per step.
pub fn write_entropy_csv(
    mut w: impl Write,
    meta: &[String],
    records: &[EntropyRecord],
) -> Result<()> {
    write_metadata(&mut w, meta)?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["t", "s_total", "s_coin", "s_walker", "mutual_info"])?;
    for r in records {
        csv.write_record(&[
            r.time.to_string(),
            fmt_f64(r.s_total),
            fmt_f64(r.s_coin),
            fmt_f64(r.s_walker),
            fmt_f64(r.mutual_info),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Unit-eigenvalue summary cell, e.g. `+1:1` or `+1:1;-1:1`; empty when the
/// block has none.
fn unit_eigenvalue_cell(unit: &[(Complex64, usize)]) -> String {
    unit.iter()
        .map(|(v, mult)| {
            let label = if v.re >= 0.0 { "+1" } else { "-1" };
            format!("{label}:{mult}")
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// One row per momentum pair: the four eigenvalues (descending modulus) as
/// re/im pairs, the largest modulus, the spectral gap, and which unit
/// eigenvalues appear.
pub fn write_spectrum_csv(
    mut w: impl Write,
    meta: &[String],
    reports: &[(usize, usize, SpectrumReport)],
) -> Result<()> {
    write_metadata(&mut w, meta)?;
    let mut csv = csv::Writer::from_writer(w);
    let mut header = vec!["k".to_string(), "kprime".to_string()];
    for i in 1..=4 {
        header.push(format!("ev{i}_re"));
        header.push(format!("ev{i}_im"));
    }
    header.extend(["max_modulus", "spectral_gap", "unit_eigenvalues"].map(str::to_string));
    csv.write_record(&header)?;
    for (k, k_prime, report) in reports {
        let mut record = vec![k.to_string(), k_prime.to_string()];
        for ev in &report.eigenvalues {
            record.push(fmt_f64(ev.re));
            record.push(fmt_f64(ev.im));
        }
        record.push(fmt_f64(report.max_modulus));
        record.push(fmt_f64(report.spectral_gap));
        record.push(unit_eigenvalue_cell(&report.unit_eigenvalues));
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}

/// One row per grid point. `d_epsilon` is an integer, `not_reached`, or
/// empty when undefined; failed points have empty numeric cells and the
/// error in `status`.
pub fn write_sweep_csv(mut w: impl Write, meta: &[String], rows: &[SweepRow]) -> Result<()> {
    write_metadata(&mut w, meta)?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record([
        "n_sites",
        "decoherence_rate",
        "coin_angle",
        "s_total",
        "s_coin",
        "s_walker",
        "mutual_info",
        "d_epsilon",
        "min_spectral_gap",
        "status",
    ])?;
    for row in rows {
        let entropy_cells = match &row.entropy {
            Some(e) => [
                fmt_f64(e.s_total),
                fmt_f64(e.s_coin),
                fmt_f64(e.s_walker),
                fmt_f64(e.mutual_info),
            ],
            None => Default::default(),
        };
        let d_epsilon = match row.d_epsilon {
            ThresholdCell::Time(tau) => tau.to_string(),
            ThresholdCell::NotReached => "not_reached".to_string(),
            ThresholdCell::Undefined => String::new(),
        };
        let mut record = vec![
            row.n_sites.to_string(),
            fmt_f64(row.decoherence_rate),
            fmt_f64(row.coin_angle),
        ];
        record.extend(entropy_cells);
        record.push(d_epsilon);
        record.push(row.min_spectral_gap.map(fmt_f64).unwrap_or_default());
        record.push(row.status.clone());
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}
