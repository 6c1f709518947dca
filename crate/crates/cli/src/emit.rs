//! Record, summary and plot files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Format;
use crate::error::{CliError, Result};
use crate::sweep::{SummaryRow, SweepOutput, TrialRecord, RECORD_COLUMNS};

pub const SUMMARY_COLUMNS: [&str; 14] =
    ["q", "group", "r", "n", "k", "delta", "trials", "exceeds", "p_hat", "ci_lo", "ci_hi", "mean_enum", "gv", "side"];

fn write_csv<W: Write, T: Serialize>(w: W, header: &[&str], rows: &[T]) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(header)?;
    for row in rows {
        out.serialize(row)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Header line plus one row per record.
pub fn write_records_csv<W: Write>(w: W, records: &[TrialRecord]) -> Result<()> {
    write_csv(w, &RECORD_COLUMNS, records)
}

pub fn write_summary_csv<W: Write>(w: W, summary: &[SummaryRow]) -> Result<()> {
    write_csv(w, &SUMMARY_COLUMNS, summary)
}

pub fn read_records_csv<R: std::io::Read>(r: R) -> Result<Vec<TrialRecord>> {
    let mut rdr = csv::Reader::from_reader(r);
    Ok(rdr.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// `# n p_hat` followed by one line per length.
pub fn write_plot<W: Write>(mut w: W, rows: &[&SummaryRow]) -> std::io::Result<()> {
    writeln!(w, "# n p_hat")?;
    for row in rows {
        writeln!(w, "{} {}", row.n, row.p_hat)?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

/// Writes `records.{csv,json}`, `summary.{csv,json}` and `phat_delta_<delta>.dat`
/// per `delta` into `dir`, returning the paths written.
pub fn emit(output: &SweepOutput, format: Format, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let records_path = dir.join(format!("records.{ext}"));
    let summary_path = dir.join(format!("summary.{ext}"));
    match format {
        Format::Csv => {
            write_records_csv(create(&records_path)?, &output.records)?;
            write_summary_csv(create(&summary_path)?, &output.summary)?;
        }
        Format::Json => {
            for (path, value) in [
                (&records_path, serde_json::to_value(&output.records)?),
                (&summary_path, serde_json::to_value(&output.summary)?),
            ] {
                let mut w = create(path)?;
                serde_json::to_writer_pretty(&mut w, &value)?;
                writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))?;
            }
        }
    }
    let mut written = vec![records_path, summary_path];
    let mut deltas: Vec<f64> = Vec::new();
    for row in &output.summary {
        if !deltas.contains(&row.delta) {
            deltas.push(row.delta);
        }
    }
    for delta in deltas {
        let path = dir.join(format!("phat_delta_{delta}.dat"));
        let mut w = create(&path)?;
        write_plot(&mut w, &output.series(delta)).and_then(|_| w.flush()).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn record(enum_value: BigUint) -> TrialRecord {
        TrialRecord {
            q: 2,
            group: "2x3".into(),
            r: 0.3,
            n: 4,
            k: 1,
            delta: 0.11,
            trial: 0,
            seed: 9,
            exceeds: false,
            enum_value,
            full_rank: true,
            exact: true,
            elapsed_ms: 0,
        }
    }

    #[test]
    fn empty_records_give_header_only() {
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "q,group,r,n,k,delta,trial,seed,exceeds,enum_value,full_rank,exact,elapsed_ms\n"
        );
    }

    #[test]
    fn json_round_trip_keeps_big_integers() {
        let big: BigUint = "123456789012345678901234567890".parse().unwrap();
        let rec = record(big.clone());
        let text = serde_json::to_string(&rec).unwrap();
        assert!(text.contains("\"enum_value\":\"123456789012345678901234567890\""));
        let back: TrialRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn csv_round_trip() {
        let recs = vec![record(BigUint::from(3u32)), record("99999999999999999999".parse().unwrap())];
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "2,2x3,0.3,4,1,0.11,0,9,false,3,true,true,0");
        assert_eq!(read_records_csv(&buf[..]).unwrap(), recs);
    }
}
