use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::report::RunReport;
use crate::telemetry::StepRecord;

pub const CSV_HEADER: [&str; 10] = [
    "step",
    "f_value",
    "f_gap",
    "grad_norm",
    "stepsize",
    "effective_stepsize",
    "rbar",
    "v",
    "distance_to_opt",
    "avg_f_gap",
];

/// 17 significant digits, enough to round-trip every `f64`.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

/// Writes one header line and one row per record; absent fields are empty cells.
pub fn write_csv_to(records: &[StepRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.step.to_string(),
            fmt_float(r.f_value),
            fmt_opt(r.f_gap),
            fmt_float(r.grad_norm),
            fmt_float(r.stepsize),
            fmt_float(r.effective_stepsize),
            fmt_opt(r.rbar),
            fmt_opt(r.v),
            fmt_opt(r.distance_to_opt),
            fmt_opt(r.avg_f_gap),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(report: &RunReport, path: impl AsRef<Path>) -> Result<()> {
    write_csv_to(&report.records, BufWriter::new(File::create(path)?))
}

fn parse_float(s: &str, column: &str, line: usize) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Data(format!("line {line}: bad `{column}` value `{s}`")))
}

fn parse_opt(s: &str, column: &str, line: usize) -> Result<Option<f64>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_float(s, column, line).map(Some)
    }
}

/// Reads records written by [`write_csv_to`]; the header must match exactly.
pub fn read_csv_from(input: impl Read) -> Result<Vec<StepRecord>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Data(format!("unexpected CSV header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut records = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let cell = |k: usize| row.get(k).unwrap_or("");
        records.push(StepRecord {
            step: cell(0)
                .parse()
                .map_err(|_| Error::Data(format!("line {line}: bad step `{}`", cell(0))))?,
            f_value: parse_float(cell(1), CSV_HEADER[1], line)?,
            f_gap: parse_opt(cell(2), CSV_HEADER[2], line)?,
            grad_norm: parse_float(cell(3), CSV_HEADER[3], line)?,
            stepsize: parse_float(cell(4), CSV_HEADER[4], line)?,
            effective_stepsize: parse_float(cell(5), CSV_HEADER[5], line)?,
            rbar: parse_opt(cell(6), CSV_HEADER[6], line)?,
            v: parse_opt(cell(7), CSV_HEADER[7], line)?,
            distance_to_opt: parse_opt(cell(8), CSV_HEADER[8], line)?,
            avg_f_gap: parse_opt(cell(9), CSV_HEADER[9], line)?,
        });
    }
    Ok(records)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<StepRecord>> {
    read_csv_from(BufReader::new(File::open(path)?))
}

pub fn write_json_to(report: &RunReport, mut out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_json(report: &RunReport, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_json_to(report, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn read_json(path: impl AsRef<Path>) -> Result<RunReport> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

/// Records from a `.json` report or a telemetry `.csv`, by extension.
pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<StepRecord>> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        Ok(read_json(path)?.records)
    } else {
        read_csv(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OptimizerKind;
    use crate::problems::make_quadratic_1d;

    #[test]
    fn csv_round_trip_is_exact() {
        let p = make_quadratic_1d(100.0).unwrap();
        let report = p.run(&p.config(OptimizerKind::Dowg, 50)).unwrap();
        let mut buf = Vec::new();
        write_csv_to(&report.records, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("step,f_value,f_gap,grad_norm,stepsize,effective_stepsize,rbar,v,distance_to_opt,avg_f_gap\n"));
        let back = read_csv_from(buf.as_slice()).unwrap();
        assert_eq!(back, report.records);
        assert_eq!(back[0].rbar, Some(1e-6));
    }

    #[test]
    fn gd_rows_leave_dowg_columns_empty() {
        let p = make_quadratic_1d(100.0).unwrap();
        let report = p.run(&p.config(OptimizerKind::Gd, 2).with_eta(0.01)).unwrap();
        let mut buf = Vec::new();
        write_csv_to(&report.records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row.len(), 10);
        assert_eq!((row[6], row[7], row[9]), ("", "", ""));
        assert_eq!(row[1], "5.0000000000000000e1");
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(read_csv_from("a,b\n1,2\n".as_bytes()).is_err());
    }
}
