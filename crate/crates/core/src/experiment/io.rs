//! File formats.
//!
//! - stream: header `t,kind,v1,...,vk`; `kind` is `vec` or `val`, rows may
//!   have different widths.
//! - trajectory: header `seed,t,metric,monitor:<name>...`; a record without
//!   a given monitor leaves the field empty.
//! - summary: pretty-printed JSON.
//!
//! Numbers use Rust's shortest round-trip formatting, which never depends
//! on the locale.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::types::{ExperimentRecord, StreamEvent, ValueItem, VectorItem};

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Malformed {
            path: path.to_path_buf(),
            line,
            msg: format!("{other:?}"),
        },
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

pub fn write_stream(path: impl AsRef<Path>, events: &[StreamEvent]) -> Result<()> {
    let path = path.as_ref();
    let width = events
        .iter()
        .map(|e| match e {
            StreamEvent::Vector(v) => v.dim(),
            StreamEvent::Value(v) => v.n(),
        })
        .max()
        .unwrap_or(0);
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .from_writer(create(path)?);
    let mut header = vec!["t".to_string(), "kind".to_string()];
    header.extend((1..=width).map(|i| format!("v{i}")));
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    for (t, event) in events.iter().enumerate() {
        let (kind, values) = match event {
            StreamEvent::Vector(v) => ("vec", v.coords()),
            StreamEvent::Value(v) => ("val", v.values()),
        };
        let mut row = vec![(t + 1).to_string(), kind.to_string()];
        row.extend(values.iter().map(f64::to_string));
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_stream(path: impl AsRef<Path>) -> Result<Vec<StreamEvent>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::ReaderBuilder::new()
        .flexible(true)
        .has_headers(true)
        .from_reader(BufReader::new(file));
    let header = r.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.is_empty() {
        return Ok(Vec::new());
    }
    if header.get(0) != Some("t") || header.get(1) != Some("kind") {
        return Err(Error::Malformed {
            path: path.to_path_buf(),
            line: 1,
            msg: "header must start with t,kind".into(),
        });
    }
    let mut events = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let malformed = |msg: String| Error::Malformed {
            path: path.to_path_buf(),
            line,
            msg,
        };
        if record.len() < 3 {
            return Err(malformed("a row needs t, kind and at least one value".into()));
        }
        record[0]
            .trim()
            .parse::<u64>()
            .map_err(|e| malformed(format!("bad t {:?}: {e}", &record[0])))?;
        let values = record
            .iter()
            .skip(2)
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| malformed(format!("bad value {s:?}: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let event = match &record[1] {
            "vec" => StreamEvent::Vector(VectorItem::new(values).map_err(|e| malformed(e.to_string()))?),
            "val" => StreamEvent::Value(ValueItem::new(values).map_err(|e| malformed(e.to_string()))?),
            other => return Err(malformed(format!("unknown kind {other:?}"))),
        };
        events.push(event);
    }
    Ok(events)
}

/// Writes `(seed, record)` rows; monitor columns are the sorted union of
/// all monitor names.
pub fn emit_csv(records: &[(u64, ExperimentRecord)], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_writer(create(path)?);
    write_trajectory(&mut w, records).map_err(|e| csv_error(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Same as [`emit_csv`] into memory.
pub fn trajectory_bytes(records: &[(u64, ExperimentRecord)]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write_trajectory(&mut w, records).expect("writing to memory");
    w.into_inner().expect("writing to memory")
}

fn write_trajectory<W: Write>(w: &mut csv::Writer<W>, records: &[(u64, ExperimentRecord)]) -> csv::Result<()> {
    let names: BTreeSet<&str> = records
        .iter()
        .flat_map(|(_, r)| r.monitors.keys().map(String::as_str))
        .collect();
    let mut header = vec!["seed".to_string(), "t".to_string(), "metric".to_string()];
    header.extend(names.iter().map(|n| format!("monitor:{n}")));
    w.write_record(&header)?;
    for (seed, r) in records {
        let mut row = vec![seed.to_string(), r.t.to_string(), r.metric.to_string()];
        row.extend(
            names
                .iter()
                .map(|n| r.monitors.get(*n).map_or(String::new(), f64::to_string)),
        );
        w.write_record(&row)?;
    }
    Ok(())
}

pub fn read_trajectory(path: impl AsRef<Path>) -> Result<Vec<(u64, ExperimentRecord)>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(BufReader::new(file));
    let header = r.headers().map_err(|e| csv_error(path, e))?.clone();
    let mut out = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let malformed = |msg: String| Error::Malformed {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let field = |i: usize| record.get(i).unwrap_or("");
        let seed = field(0).parse::<u64>().map_err(|e| malformed(e.to_string()))?;
        let t = field(1).parse::<usize>().map_err(|e| malformed(e.to_string()))?;
        let metric = field(2).parse::<f64>().map_err(|e| malformed(e.to_string()))?;
        let mut rec = ExperimentRecord::new(t, metric);
        for (i, name) in header.iter().enumerate().skip(3) {
            let name = name.strip_prefix("monitor:").unwrap_or(name);
            if !field(i).is_empty() {
                let v = field(i).parse::<f64>().map_err(|e| malformed(e.to_string()))?;
                rec = rec.with(name, v);
            }
        }
        out.push((seed, rec));
    }
    Ok(out)
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn events() -> Vec<StreamEvent> {
        vec![
            StreamEvent::Vector(VectorItem::new(vec![0.1, -1.0 / 3.0, 1e-17]).unwrap()),
            StreamEvent::Value(ValueItem::new(vec![1.0, 0.0, 2.0f64.sqrt() / 2.0]).unwrap()),
            StreamEvent::Value(ValueItem::new(vec![0.25, 0.75]).unwrap()),
        ]
    }

    #[test]
    fn stream_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_stream(&path, &events()).unwrap();
        assert_eq!(read_stream(&path).unwrap(), events());
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("t,kind,v1,v2,v3\n1,vec,0.1,"));
        assert!(!text.contains(','.to_string().repeat(3).as_str()));
    }

    #[test]
    fn empty_and_header_only_streams() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_stream(&path, &[]).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "t,kind\n");
        assert!(read_stream(&path).unwrap().is_empty());
        std::fs::write(&path, "").unwrap();
        assert!(read_stream(&path).unwrap().is_empty());
    }

    #[test]
    fn malformed_rows_report_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        std::fs::write(&path, "t,kind,v1,v2\n1,val,0.5,0.5\n2,val,0.5,zz\n").unwrap();
        match read_stream(&path) {
            Err(Error::Malformed { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        std::fs::write(&path, "t,kind,v1\n1,foo,0.5\n").unwrap();
        assert!(matches!(read_stream(&path), Err(Error::Malformed { line: 2, .. })));
        std::fs::write(&path, "t,kind,v1,v2\n1,val,0.5,1.5\n").unwrap();
        assert!(matches!(read_stream(&path), Err(Error::Malformed { .. })));
        assert!(matches!(
            read_stream(dir.path().join("missing.csv")),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn trajectory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traj.csv");
        let records = vec![
            (1, ExperimentRecord::new(1, 0.5).with("running_max", 0.5)),
            (1, ExperimentRecord::new(2, 1.0 / 3.0).with("running_max", 0.5).with("extra", -2.5e-300)),
            (4, ExperimentRecord::new(1, 7.0)),
        ];
        emit_csv(&records, &path).unwrap();
        assert_eq!(read_trajectory(&path).unwrap(), records);
        assert_eq!(std::fs::read(&path).unwrap(), trajectory_bytes(&records));
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("seed,t,metric,monitor:extra,monitor:running_max\n"));
    }

    #[test]
    fn empty_trajectory_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traj.csv");
        emit_csv(&[], &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "seed,t,metric\n");
    }
}
