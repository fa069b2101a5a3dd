//! Observation grid CSV: `dataset,d_p,m,d_f,teacher,metric,value`.

use std::io::{Read, Write};
use std::path::Path;

use tlscale_core::fitting::{Observation, ObservationGrid};
use tlscale_core::{Error, MetricKind};

use crate::error::{CliError, CliResult};
use crate::format::float;

pub const HEADER: [&str; 7] = ["dataset", "d_p", "m", "d_f", "teacher", "metric", "value"];

pub fn read_path(path: &Path) -> CliResult<ObservationGrid> {
    let file = std::fs::File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    read(file)
}

pub fn read<R: Read>(reader: R) -> CliResult<ObservationGrid> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        None => return Err(CliError::input("no data rows")),
        Some(r) => r.map_err(csv_error)?,
    };
    if header.iter().ne(HEADER) {
        return Err(CliError::input(format!(
            "line 1: expected header `{}`, found `{}`",
            HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut label = None;
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for record in records {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != HEADER.len() {
            return Err(CliError::input(format!("line {line}: expected {} fields, found {}", HEADER.len(), record.len())));
        }
        let number = |col: usize| -> CliResult<f64> {
            record[col].parse::<f64>().map_err(|_| {
                CliError::input(format!("line {line}, column {}: `{}` is not a number", HEADER[col], &record[col]))
            })
        };
        let teacher = if record[4].is_empty() { None } else { Some(number(4)?) };
        let metric = MetricKind::parse(&record[5]).ok_or_else(|| {
            CliError::input(format!("line {line}, column metric: `{}` is not `error` or `loss`", &record[5]))
        })?;
        label.get_or_insert_with(|| record[0].to_string());
        rows.push(Observation { d_p: number(1)?, m: number(2)?, d_f: number(3)?, teacher, metric, value: number(6)? });
        lines.push(line);
    }

    ObservationGrid::new(label.unwrap_or_default(), rows).map_err(|e| match e {
        Error::EmptyGrid => CliError::input("no data rows"),
        Error::MixedMetrics => CliError::input("mixed metrics in one grid"),
        Error::InvalidObservation { row, reason } => CliError::input(format!("line {}: {reason}", lines[row])),
        other => other.into(),
    })
}

fn csv_error(e: csv::Error) -> CliError {
    match e.position() {
        Some(p) => CliError::input(format!("line {}: {e}", p.line())),
        None => CliError::input(e.to_string()),
    }
}

pub fn write<W: Write>(grid: &ObservationGrid, writer: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| CliError::input(e.to_string());
    w.write_record(HEADER).map_err(io)?;
    for o in grid.rows() {
        w.write_record([
            grid.dataset_label().to_string(),
            float(o.d_p),
            float(o.m),
            float(o.d_f),
            o.teacher.map(float).unwrap_or_default(),
            o.metric.as_str().to_string(),
            float(o.value),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_path(grid: &ObservationGrid, path: &Path) -> CliResult<()> {
    let mut buf = Vec::new();
    write(grid, &mut buf)?;
    std::fs::write(path, buf).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}
