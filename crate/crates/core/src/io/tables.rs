//! CSV emission and loading of spectrum tables and experiment results.
//!
//! Floats are printed in scientific notation with a configurable number of
//! significant digits; the default of 17 round-trips every `f64` exactly.
//! Spectrum cells without samples are written as a single row holding the
//! cell key and empty result fields, so the grid survives a round trip.

use std::io::{Read, Write};

use thiserror::Error;

use crate::dynamics::TrajectoryRecord;
use crate::rigidity::{BoundaryEstimate, CoverageReport};
use crate::spectra::{
    Diagnostics, GridDescription, SlsSample, SpectrumKind, SpectrumTable, TravellingTimeSample,
};

pub const DEFAULT_PRECISION: usize = 17;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Format { line: u64, message: String },
}

pub fn format_float(x: f64, precision: usize) -> String {
    format!("{:.*e}", precision.max(1) - 1, x)
}

fn floats<'a, I: IntoIterator<Item = &'a f64>>(xs: I, precision: usize) -> impl Iterator<Item = String> + use<'a, I> {
    xs.into_iter().map(move |x| format_float(*x, precision))
}

fn numbered(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |i| format!("{prefix}_{i}"))
}

fn join_itinerary(it: &[usize]) -> String {
    it.iter().map(usize::to_string).collect::<Vec<_>>().join("-")
}

fn key_dimension(grid: &GridDescription, per_key: impl Fn(usize) -> usize) -> Option<usize> {
    let len = grid.keys.first()?.len();
    (2..=len).find(|&d| per_key(d) == len)
}

pub fn write_sls_csv<W: Write>(out: W, table: &SpectrumTable<SlsSample>, precision: usize) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    let d = table
        .samples()
        .next()
        .map(|s| s.omega.len())
        .or_else(|| key_dimension(&table.grid, |d| 2 * d - 1))
        .unwrap_or(2);
    let header: Vec<String> = numbered("omega", d)
        .chain(numbered("impact", d - 1))
        .chain(numbered("theta", d))
        .chain(["T", "reflections", "grazing", "itinerary"].map(String::from))
        .collect();
    w.write_record(&header)?;
    for (key, cell) in table.grid.keys.iter().zip(&table.cells) {
        if cell.is_empty() {
            let row: Vec<String> = floats(key, precision).chain(std::iter::repeat_n(String::new(), d + 4)).collect();
            w.write_record(&row)?;
        }
        for s in cell {
            let row: Vec<String> = floats(s.omega.iter(), precision)
                .chain(floats(&s.impact, precision))
                .chain(floats(s.theta.iter(), precision))
                .chain([
                    format_float(s.sojourn, precision),
                    s.reflections.to_string(),
                    s.grazing.to_string(),
                    join_itinerary(&s.itinerary),
                ])
                .collect();
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_travel_csv<W: Write>(
    out: W,
    table: &SpectrumTable<TravellingTimeSample>,
    precision: usize,
) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    let d = table
        .samples()
        .next()
        .map(|s| s.x.len())
        .or_else(|| key_dimension(&table.grid, |d| 2 * d))
        .unwrap_or(2);
    let header: Vec<String> = numbered("x", d)
        .chain(numbered("y", d))
        .chain(["t", "reflections", "residual", "itinerary"].map(String::from))
        .collect();
    w.write_record(&header)?;
    for (key, cell) in table.grid.keys.iter().zip(&table.cells) {
        if cell.is_empty() {
            let row: Vec<String> = floats(key, precision).chain(std::iter::repeat_n(String::new(), 4)).collect();
            w.write_record(&row)?;
        }
        for s in cell {
            let row: Vec<String> = floats(s.x.iter(), precision)
                .chain(floats(s.y.iter(), precision))
                .chain([
                    format_float(s.t, precision),
                    s.reflections.to_string(),
                    format_float(s.residual, precision),
                    join_itinerary(&s.itinerary),
                ])
                .collect();
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Loads the time sets of an SLS or travelling-time CSV. Consecutive rows
/// with the same key form one cell.
pub fn read_spectrum_csv<R: Read>(input: R) -> Result<SpectrumTable<f64>, CsvError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let position = |name: &str| header.iter().position(|h| h == name);
    let (kind, key_cols, time_col) = if let Some(t) = position("T") {
        let keys: Vec<usize> =
            (0..header.len()).filter(|&i| header[i].starts_with("omega_") || header[i].starts_with("impact_")).collect();
        (SpectrumKind::Sls, keys, t)
    } else if let Some(t) = position("t") {
        let keys: Vec<usize> =
            (0..header.len()).filter(|&i| header[i].starts_with("x_") || header[i].starts_with("y_")).collect();
        (SpectrumKind::Travel, keys, t)
    } else {
        return Err(CsvError::Format { line: 1, message: "no time column (expected `T` or `t`)".into() });
    };
    if key_cols.is_empty() {
        return Err(CsvError::Format { line: 1, message: "no key columns".into() });
    }

    let mut keys: Vec<Vec<f64>> = Vec::new();
    let mut cells: Vec<Vec<f64>> = Vec::new();
    let mut last_empty = false;
    for record in r.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let parse = |i: usize| -> Result<f64, CsvError> {
            record[i].parse::<f64>().map_err(|e| CsvError::Format {
                line,
                message: format!("column `{}`: {e}", &header[i]),
            })
        };
        let key = key_cols.iter().map(|&i| parse(i)).collect::<Result<Vec<f64>, _>>()?;
        let time = if record[time_col].is_empty() { None } else { Some(parse(time_col)?) };
        let same = keys.last().is_some_and(|k: &Vec<f64>| {
            k.len() == key.len() && k.iter().zip(&key).all(|(a, b)| a.to_bits() == b.to_bits())
        });
        if same && (last_empty || time.is_none()) {
            return Err(CsvError::Format { line, message: "empty-cell marker in a cell with samples".into() });
        }
        if !same {
            keys.push(key);
            cells.push(Vec::new());
        }
        if let Some(t) = time {
            cells.last_mut().expect("cell pushed above").push(t);
        }
        last_empty = time.is_none();
    }
    Ok(SpectrumTable {
        scene_digest: None,
        grid: GridDescription { kind, label: "csv".into(), keys },
        cells,
        diagnostics: Diagnostics::default(),
    })
}

/// One row for the start, one per event (with the surface normal) and one
/// for the final state.
pub fn write_trace_csv<W: Write>(out: W, record: &TrajectoryRecord, precision: usize) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    let d = record.initial.point.len();
    let header: Vec<String> = ["event", "obstacle", "arc"]
        .map(String::from)
        .into_iter()
        .chain(numbered("p", d))
        .chain(numbered("v", d))
        .chain(["length".to_string()])
        .collect();
    w.write_record(&header)?;
    let row = |event: &str, obstacle: String, arc: String, p: &crate::Vector, v: &crate::Vector, s: f64| {
        [event.to_string(), obstacle, arc]
            .into_iter()
            .chain(floats(p.iter(), precision))
            .chain(floats(v.iter(), precision))
            .chain([format_float(s, precision)])
            .collect::<Vec<String>>()
    };
    w.write_record(row("start", String::new(), String::new(), &record.initial.point, &record.initial.direction, 0.0))?;
    for e in &record.events {
        let kind = if e.grazing { "grazing" } else { "reflection" };
        let arc = e.arc.map(|a| a.to_string()).unwrap_or_default();
        w.write_record(row(kind, e.obstacle.to_string(), arc, &e.point, &e.normal, e.cumulative_length))?;
    }
    let end = if record.escaped() { "escaped" } else { "cutoff" };
    w.write_record(row(
        end,
        String::new(),
        String::new(),
        &record.final_state.point,
        &record.final_state.direction,
        record.total_length,
    ))?;
    w.flush()?;
    Ok(())
}

pub fn write_reconstruction_csv<W: Write>(
    out: W,
    estimate: &BoundaryEstimate,
    precision: usize,
) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    let d = estimate.points.first().map_or(2, |p| p.p.len());
    let header: Vec<String> = numbered("p", d)
        .chain(numbered("source_x", d))
        .chain(numbered("source_y", d))
        .chain(["t".to_string()])
        .collect();
    w.write_record(&header)?;
    for e in &estimate.points {
        let row: Vec<String> = floats(e.p.iter(), precision)
            .chain(floats(e.x.iter(), precision))
            .chain(floats(e.y.iter(), precision))
            .chain([format_float(e.t, precision)])
            .collect();
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_coverage_csv<W: Write>(out: W, report: &CoverageReport, precision: usize) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["obstacle", "arc", "tags", "samples", "covered", "coverage"])?;
    for e in &report.entries {
        w.write_record([
            e.obstacle.to_string(),
            e.arc.map(|a| a.to_string()).unwrap_or_default(),
            e.tags.join(";"),
            e.samples.to_string(),
            e.covered.to_string(),
            format_float(e.coverage, precision),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Boundary samples with no marked reflection point nearby.
pub fn write_atlas_csv<W: Write>(out: W, report: &CoverageReport, precision: usize) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    let d = report.unreached.first().map_or(2, |u| u.point.len());
    let header: Vec<String> = ["obstacle", "arc"].map(String::from).into_iter().chain(numbered("p", d)).collect();
    w.write_record(&header)?;
    for u in &report.unreached {
        let row: Vec<String> = [u.obstacle.to_string(), u.arc.map(|a| a.to_string()).unwrap_or_default()]
            .into_iter()
            .chain(floats(u.point.iter(), precision))
            .collect();
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
