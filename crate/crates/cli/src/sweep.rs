//! `θ(s, σ)` tables for plotting, with both truncated expansions alongside.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use nonlocal_young::angle_solver::solve_theta;
use nonlocal_young::asymptotics::{expand_at_one, expand_at_zero};
use nonlocal_young::{AngleQuery, QuadratureSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{check_angle_args, CliError, CliResult};

pub const DEFAULT_S_LIST: [f64; 7] = [0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99];
pub const DEFAULT_SIGMA_COUNT: usize = 81;
pub const SIGMA_LIMIT: f64 = 0.975;

pub const CSV_HEADER: [&str; 5] = ["s", "sigma", "theta_exact", "theta_at1", "theta_at0"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub s: f64,
    pub sigma: f64,
    pub theta_exact: f64,
    /// Expansion about `s = 1`; `None` when it leaves `[0, pi]`.
    pub theta_at1: Option<f64>,
    /// Expansion about `s = 0`; `None` when it leaves `[0, pi]`.
    pub theta_at0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub version: String,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub s_list: Vec<f64>,
    pub sigma_count: usize,
    pub generated_unix: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub meta: SweepMeta,
    pub rows: Vec<SweepRow>,
}

/// Parses a comma-separated list of `s` values; sorted, duplicates dropped.
pub fn parse_s_list(text: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        if item.is_empty() {
            return Err(CliError::Usage("empty entry in --s-list".into()));
        }
        let s: f64 = item
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid s value in --s-list: {item:?}")))?;
        check_angle_args(s, 0.0)?;
        out.push(s);
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

/// `count` equally spaced values on `[-0.975, 0.975]`; a single value is `0`.
pub fn sigma_grid(count: usize) -> CliResult<Vec<f64>> {
    match count {
        0 => Err(CliError::Usage("--sigma-count must be at least 1".into())),
        1 => Ok(vec![0.0]),
        n => Ok((0..n)
            .map(|k| {
                // symmetric construction so that σ and -σ are exact negatives
                let j = 2 * k as i64 - (n as i64 - 1);
                SIGMA_LIMIT * j as f64 / (n - 1) as f64
            })
            .collect()),
    }
}

fn in_range(theta: f64) -> Option<f64> {
    (0.0..=std::f64::consts::PI).contains(&theta).then_some(theta)
}

fn row(s: f64, sigma: f64, spec: &QuadratureSpec) -> CliResult<SweepRow> {
    let theta_exact = solve_theta(AngleQuery::new(s, sigma)?, spec)?.theta;
    let at1 = expand_at_one(sigma)?.evaluate(s);
    let at0 = expand_at_zero(sigma, spec)?.evaluate(s);
    Ok(SweepRow {
        s,
        sigma,
        theta_exact,
        theta_at1: in_range(at1),
        theta_at0: in_range(at0),
    })
}

/// Solves every `(s, σ)` pair; rows come back sorted by `(s, σ)`.
pub fn build_table(s_list: &[f64], sigma_count: usize, spec: &QuadratureSpec) -> CliResult<SweepTable> {
    if s_list.is_empty() {
        return Err(CliError::Usage("--s-list is empty".into()));
    }
    let mut s_sorted = s_list.to_vec();
    s_sorted.sort_by(f64::total_cmp);
    s_sorted.dedup();
    for &s in &s_sorted {
        check_angle_args(s, 0.0)?;
    }
    let sigmas = sigma_grid(sigma_count)?;
    let pairs: Vec<(f64, f64)> = s_sorted
        .iter()
        .flat_map(|&s| sigmas.iter().map(move |&g| (s, g)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(s, g)| row(s, g, spec))
        .collect::<CliResult<Vec<_>>>()?;
    let generated_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(SweepTable {
        meta: SweepMeta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            abs_tol: spec.abs_tol,
            rel_tol: spec.rel_tol,
            max_subdivisions: spec.max_subdivisions,
            s_list: s_sorted,
            sigma_count,
            generated_unix,
        },
        rows,
    })
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

/// Writes the rows as CSV with the fixed header; empty fields mark missing
/// expansion values.
pub fn write_csv<W: Write>(table: &SweepTable, out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let to_err = |e: csv::Error| CliError::Format(e.to_string());
    w.write_record(CSV_HEADER).map_err(to_err)?;
    for r in &table.rows {
        w.write_record([
            fmt(r.s),
            fmt(r.sigma),
            fmt(r.theta_exact),
            fmt_opt(r.theta_at1),
            fmt_opt(r.theta_at0),
        ])
        .map_err(to_err)?;
    }
    w.flush().map_err(|e| CliError::Format(e.to_string()))
}

pub fn write_json<W: Write>(table: &SweepTable, out: W) -> CliResult<()> {
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, table).map_err(|e| CliError::Format(e.to_string()))?;
    writeln!(out).map_err(|e| CliError::Format(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Writes `table` to `path`, removing the file again if writing fails.
pub fn write_to_path(table: &SweepTable, format: TableFormat, path: &Path) -> CliResult<()> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    let file = File::create(path).map_err(io)?;
    let mut w = BufWriter::new(file);
    let written = match format {
        TableFormat::Csv => write_csv(table, &mut w),
        TableFormat::Json => write_json(table, &mut w),
    }
    .and_then(|_| w.flush().map_err(io));
    if let Err(e) = written {
        drop(w);
        let _ = std::fs::remove_file(path);
        return Err(match e {
            CliError::Format(msg) => CliError::Io {
                path: path.to_path_buf(),
                source: std::io::Error::other(msg),
            },
            other => other,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_grid_is_symmetric() {
        let g = sigma_grid(81).unwrap();
        assert_eq!(g.len(), 81);
        assert_eq!(g[0], -SIGMA_LIMIT);
        assert_eq!(g[80], SIGMA_LIMIT);
        assert_eq!(g[40], 0.0);
        for k in 0..81 {
            assert_eq!(g[k], -g[80 - k]);
        }
        assert_eq!(sigma_grid(1).unwrap(), vec![0.0]);
        assert!(sigma_grid(0).is_err());
    }

    #[test]
    fn s_list_parsing() {
        assert_eq!(parse_s_list("0.5, 0.1,0.5").unwrap(), vec![0.1, 0.5]);
        assert!(matches!(parse_s_list(""), Err(CliError::Usage(_))));
        assert!(matches!(parse_s_list("0.1,,0.2"), Err(CliError::Usage(_))));
        assert!(matches!(parse_s_list("0"), Err(CliError::Usage(_))));
        assert!(matches!(parse_s_list("abc"), Err(CliError::Usage(_))));
    }

    #[test]
    fn csv_uses_empty_fields_for_missing_values() {
        let table = SweepTable {
            meta: SweepMeta {
                version: "0".into(),
                abs_tol: 1e-10,
                rel_tol: 1e-10,
                max_subdivisions: 1,
                s_list: vec![0.5],
                sigma_count: 1,
                generated_unix: 0,
            },
            rows: vec![SweepRow {
                s: 0.5,
                sigma: 0.0,
                theta_exact: 1.5,
                theta_at1: None,
                theta_at0: Some(1.5),
            }],
        };
        let mut buf = Vec::new();
        write_csv(&table, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "s,sigma,theta_exact,theta_at1,theta_at0");
        assert!(lines[1].contains(",,"));
    }

    #[test]
    fn out_of_range_expansions_become_none() {
        assert_eq!(in_range(-0.1), None);
        assert_eq!(in_range(3.2), None);
        assert_eq!(in_range(1.0), Some(1.0));
    }
}
