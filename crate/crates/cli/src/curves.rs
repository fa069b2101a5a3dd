//! Sweep curves: `sweep_var,sweep_value,prediction[,prediction_distilled,gap]`.

use std::io::Write;

use tlscale_core::{Law, LawInput};

use crate::error::{CliError, CliResult};
use crate::format::float;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepVar {
    /// Pretraining size.
    Dp,
    /// Model size.
    M,
    /// Fine-tuning size.
    Df,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Dp => "dp",
            SweepVar::M => "m",
            SweepVar::Df => "df",
        }
    }

    fn apply(self, mut input: LawInput, v: f64) -> LawInput {
        match self {
            SweepVar::Dp => input.d_p = v,
            SweepVar::M => input.m = v,
            SweepVar::Df => input.d_f = v,
        }
        input
    }
}

/// `points` log-spaced values from `lo` to `hi`; the endpoints are exact.
pub fn log_space(lo: f64, hi: f64, points: usize) -> CliResult<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(CliError::input(format!("sweep range must satisfy 0 < lo < hi, got [{lo}, {hi}]")));
    }
    if points < 2 {
        return Err(CliError::input("points must be at least 2"));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let last = points - 1;
    Ok((0..points)
        .map(|i| match i {
            0 => lo,
            i if i == last => hi,
            i => (a + (b - a) * i as f64 / last as f64).exp(),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub sweep_value: f64,
    pub prediction: f64,
    pub distilled: Option<f64>,
}

/// Evaluates `primary` (and `distilled`, if given) along the sweep.
pub fn sweep(primary: &Law, distilled: Option<&Law>, var: SweepVar, fixed: LawInput, values: &[f64]) -> CliResult<Vec<CurveRow>> {
    values
        .iter()
        .map(|&v| {
            let input = var.apply(fixed, v);
            let prediction = primary.eval(&input)?;
            let distilled = distilled.map(|d| d.eval(&input)).transpose()?;
            Ok(CurveRow { sweep_value: v, prediction, distilled })
        })
        .collect()
}

pub fn write<W: Write>(var: SweepVar, rows: &[CurveRow], writer: W) -> CliResult<()> {
    let io = |e: csv::Error| CliError::input(e.to_string());
    let mut w = csv::Writer::from_writer(writer);
    let with_gap = rows.first().is_some_and(|r| r.distilled.is_some());
    if with_gap {
        w.write_record(["sweep_var", "sweep_value", "prediction", "prediction_distilled", "gap"]).map_err(io)?;
    } else {
        w.write_record(["sweep_var", "sweep_value", "prediction"]).map_err(io)?;
    }
    for r in rows {
        let mut rec = vec![var.name().to_string(), float(r.sweep_value), float(r.prediction)];
        if let Some(d) = r.distilled {
            rec.push(float(d));
            rec.push(float(r.prediction - d));
        }
        w.write_record(rec).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
