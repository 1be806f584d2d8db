use std::fs::File;
use std::io::{self, Write};

use serde::Serialize;

use detsquare::experiments::ExperimentReport;

use crate::args::{Format, Output};

/// One CSV row: an estimate plus the report-level fields it belongs to.
#[derive(Serialize)]
struct CsvRow<'a> {
    experiment: &'a str,
    name: &'a str,
    value: f64,
    ci_low: Option<f64>,
    ci_high: Option<f64>,
    exact: Option<&'a str>,
    seed: u64,
    shards: usize,
    samples: u64,
    version: &'a str,
    /// The parameter map as compact JSON.
    params: String,
}

fn write_csv<W: Write>(report: &ExperimentReport, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let params = serde_json::to_string(&report.params).expect("params serialize");
    let p = &report.provenance;
    for e in &report.estimates {
        w.serialize(CsvRow {
            experiment: &report.experiment,
            name: &e.name,
            value: e.value,
            ci_low: e.ci_low,
            ci_high: e.ci_high,
            exact: e.exact.as_deref(),
            seed: p.seed,
            shards: p.shards,
            samples: p.samples,
            version: &p.version,
            params: params.clone(),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn render(report: &ExperimentReport, format: Format) -> io::Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(report, &mut buf).map_err(io::Error::other)?;
            Ok(buf)
        }
    }
}

pub fn emit(report: &ExperimentReport, output: &Output) -> io::Result<()> {
    let bytes = render(report, output.format)?;
    match &output.out {
        Some(path) => File::create(path)?.write_all(&bytes),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()
        }
    }
}
