//! CSV and JSON writers and the CSV reader used by `fit`.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use serde::Serialize;

use super::config::{ExperimentKind, RunConfig};
use crate::experiments::{FitResult, Monotone, ResourceSeries, SpreadGrid};
use crate::{Error, Result};

pub const GROWTH_HEADER: [&str; 6] = ["monotone", "L_A", "t", "mean", "stderr", "realizations"];
pub const SPREAD_HEADER: [&str; 6] = ["monotone", "L_A", "x_r", "t", "mean", "stderr"];

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Growth series as CSV, one row per `(L_A, t)`. Floats use the shortest
/// representation that parses back to the same value.
pub fn growth_csv(series: &ResourceSeries) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(GROWTH_HEADER).map_err(csv_error)?;
    let reps = series.realizations.to_string();
    for (i, size) in series.subsystem_sizes.iter().enumerate() {
        let size = size.to_string();
        for (k, t) in series.times.iter().enumerate() {
            let row = [
                series.monotone.name(),
                &size,
                &t.to_string(),
                &series.mean[i][k].to_string(),
                &series.stderr[i][k].to_string(),
                &reps,
            ];
            w.write_record(row).map_err(csv_error)?;
        }
    }
    finish(w)
}

/// Spreading grid as CSV, one row per `(x_r, t)`.
pub fn spread_csv(grid: &SpreadGrid) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SPREAD_HEADER).map_err(csv_error)?;
    let size = grid.subsystem_size.to_string();
    for (i, x) in grid.x_r.iter().enumerate() {
        let x = x.to_string();
        for (k, t) in grid.times.iter().enumerate() {
            let row = [
                grid.monotone.name(),
                &size,
                &x,
                &t.to_string(),
                &grid.mean[i][k].to_string(),
                &grid.stderr[i][k].to_string(),
            ];
            w.write_record(row).map_err(csv_error)?;
        }
    }
    finish(w)
}

fn is_gz(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "gz")
}

/// Writes `bytes`, gzip-compressed when `gzip` is set or the path ends in
/// `.gz`. The gzip header carries no timestamp, so output is reproducible.
pub fn write_bytes(path: &Path, bytes: &[u8], gzip: bool) -> Result<()> {
    let file = File::create(path)?;
    if gzip || is_gz(path) {
        let mut enc = GzEncoder::new(file, Compression::default());
        enc.write_all(bytes)?;
        enc.finish()?;
    } else {
        let mut f = file;
        f.write_all(bytes)?;
    }
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String> {
    let file = File::open(path)?;
    let mut out = String::new();
    if is_gz(path) {
        GzDecoder::new(BufReader::new(file)).read_to_string(&mut out)?;
    } else {
        BufReader::new(file).read_to_string(&mut out)?;
    }
    Ok(out)
}

/// `run.csv` → `run.fit.json`; `run.csv.gz` → `run.fit.json`.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut p = output.to_path_buf();
    if is_gz(&p) {
        p.set_extension("");
    }
    p.set_extension("fit.json");
    p
}

/// JSON written next to the CSV: fits plus the resolved config.
#[derive(Debug, Serialize)]
pub struct Sidecar<'a> {
    pub kind: &'static str,
    pub seed: u64,
    pub fits: &'a [FitResult],
    pub config: &'a RunConfig,
    /// The resolved config as TOML; feeding it back reproduces the CSV.
    pub config_toml: String,
}

pub fn sidecar_json(cfg: &RunConfig, fits: &[FitResult]) -> Result<String> {
    let s = Sidecar { kind: cfg.kind.name(), seed: cfg.spec.seed, fits, config: cfg, config_toml: cfg.to_toml()? };
    serde_json::to_string_pretty(&s).map_err(|e| Error::Parse(e.to_string()))
}

/// Result CSV read back for `fit`.
#[derive(Clone, Debug)]
pub enum ParsedResults {
    Growth(Vec<ResourceSeries>),
    Spread(Vec<SpreadGrid>),
}

impl ParsedResults {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            Self::Growth(_) => ExperimentKind::Growth,
            Self::Spread(_) => ExperimentKind::Spread,
        }
    }
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, line: u64) -> Result<T> {
    rec.get(i)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("line {line}: bad value in column {}", i + 1)))
}

/// Parses a growth or spread CSV, telling them apart by the header.
pub fn parse_results(text: &str) -> Result<ParsedResults> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(csv_error)?.iter().map(str::to_owned).collect();
    let growth = header == GROWTH_HEADER;
    if !growth && header != SPREAD_HEADER {
        return Err(Error::Parse(format!("unrecognized header {header:?}")));
    }
    // Keyed by (monotone, L_A[, x_r]) in order of first appearance.
    let mut keys: Vec<(Monotone, usize, f64)> = Vec::new();
    let mut rows: Vec<Vec<(usize, f64, f64, usize)>> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        let monotone: Monotone = field(&rec, 0, line)?;
        let size: usize = field(&rec, 1, line)?;
        let (x, t, mean, err, reps) = if growth {
            (0.0, field(&rec, 2, line)?, field(&rec, 3, line)?, field(&rec, 4, line)?, field(&rec, 5, line)?)
        } else {
            (field(&rec, 2, line)?, field(&rec, 3, line)?, field(&rec, 4, line)?, field(&rec, 5, line)?, 0)
        };
        let key = (monotone, size, x);
        let idx = match keys.iter().position(|k| *k == key) {
            Some(i) => i,
            None => {
                keys.push(key);
                rows.push(Vec::new());
                keys.len() - 1
            }
        };
        rows[idx].push((t, mean, err, reps));
    }
    for r in &mut rows {
        r.sort_by_key(|e| e.0);
    }
    let times_of = |r: &[(usize, f64, f64, usize)]| r.iter().map(|e| e.0).collect::<Vec<_>>();
    if growth {
        let mut out: Vec<ResourceSeries> = Vec::new();
        for ((m, size, _), r) in keys.iter().zip(&rows) {
            let series = match out.iter_mut().find(|s| s.monotone == *m) {
                Some(s) => s,
                None => {
                    out.push(ResourceSeries {
                        monotone: *m,
                        subsystem_sizes: Vec::new(),
                        times: times_of(r),
                        mean: Vec::new(),
                        stderr: Vec::new(),
                        realizations: r.first().map_or(0, |e| e.3),
                    });
                    out.last_mut().expect("just pushed")
                }
            };
            if times_of(r) != series.times {
                return Err(Error::Parse(format!("{m} L_A = {size}: times differ from the other sizes")));
            }
            series.subsystem_sizes.push(*size);
            series.mean.push(r.iter().map(|e| e.1).collect());
            series.stderr.push(r.iter().map(|e| e.2).collect());
        }
        Ok(ParsedResults::Growth(out))
    } else {
        let mut out: Vec<SpreadGrid> = Vec::new();
        for ((m, size, x), r) in keys.iter().zip(&rows) {
            let grid = match out.iter_mut().find(|g| g.monotone == *m && g.subsystem_size == *size) {
                Some(g) => g,
                None => {
                    out.push(SpreadGrid {
                        monotone: *m,
                        subsystem_size: *size,
                        x_r: Vec::new(),
                        times: times_of(r),
                        mean: Vec::new(),
                        stderr: Vec::new(),
                        realizations: 0,
                    });
                    out.last_mut().expect("just pushed")
                }
            };
            if times_of(r) != grid.times {
                return Err(Error::Parse(format!("{m} x_r = {x}: times differ from the other positions")));
            }
            grid.x_r.push(*x);
            grid.mean.push(r.iter().map(|e| e.1).collect());
            grid.stderr.push(r.iter().map(|e| e.2).collect());
        }
        Ok(ParsedResults::Spread(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_rows_and_round_trip() {
        let s = ResourceSeries {
            monotone: Monotone::Coherence,
            subsystem_sizes: vec![2, 4],
            times: vec![0, 1, 2],
            mean: vec![vec![0.0, 0.5, 0.1], vec![0.0, 1.25, 0.3]],
            stderr: vec![vec![0.0, 0.01, 0.02], vec![0.0, 0.1, 0.2]],
            realizations: 10,
        };
        let text = String::from_utf8(growth_csv(&s).unwrap()).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert_eq!(text.lines().nth(2).unwrap(), "coherence,2,1,0.5,0.01,10");
        let ParsedResults::Growth(back) = parse_results(&text).unwrap() else { panic!() };
        assert_eq!(back, vec![s]);
    }

    #[test]
    fn sidecar_names() {
        assert_eq!(sidecar_path(Path::new("out/run.csv")), PathBuf::from("out/run.fit.json"));
        assert_eq!(sidecar_path(Path::new("run.csv.gz")), PathBuf::from("run.fit.json"));
    }
}
