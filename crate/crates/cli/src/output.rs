//! Artifact writers. CSV numbers use 12 significant digits in scientific
//! notation so files are byte-stable; timestamps appear only in JSON.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::netpbm::{write_netpbm, Raster};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Pgm,
    Ppm,
}

/// Number formatting for every CSV cell.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Writes into one directory, honouring the selected formats.
pub struct Sink {
    dir: PathBuf,
    formats: BTreeSet<Format>,
    written: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: &Path, formats: &BTreeSet<Format>) -> CliResult<Self> {
        if formats.is_empty() {
            return Err(CliError::Usage(
                "at least one output format is required".into(),
            ));
        }
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            formats: formats.clone(),
            written: Vec::new(),
        })
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    fn wants_images(&self) -> bool {
        self.wants(Format::Pgm) || self.wants(Format::Ppm)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
        if !self.wants(Format::Csv) {
            return Ok(());
        }
        let path = self.dir.join(name);
        let io = |e: csv::Error| match e.into_kind() {
            csv::ErrorKind::Io(err) => CliError::io(&path, err),
            other => CliError::Data(format!("{}: {other:?}", path.display())),
        };
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(&path)
            .map_err(io)?;
        w.write_record(header).map_err(io)?;
        for row in rows {
            w.write_record(row).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    /// Writes `{config_hash, timestamp_unix, ...body}` as pretty JSON.
    pub fn json<T: Serialize>(&mut self, name: &str, config_hash: &str, body: &T) -> CliResult<()> {
        if !self.wants(Format::Json) {
            return Ok(());
        }
        let path = self.dir.join(name);
        let mut value = serde_json::to_value(body)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let mut doc = serde_json::Map::new();
        doc.insert("config_hash".into(), config_hash.into());
        doc.insert("timestamp_unix".into(), stamp.into());
        if let serde_json::Value::Object(fields) = &mut value {
            doc.append(fields);
        } else {
            doc.insert("data".into(), value);
        }
        let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(doc))
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    /// Writes a PGM for one channel or a PPM for three; `name` has no extension.
    pub fn image(&mut self, name: &str, raster: &Raster) -> CliResult<()> {
        if !self.wants_images() {
            return Ok(());
        }
        let ext = if raster.channels == 3 { "ppm" } else { "pgm" };
        let path = self.dir.join(format!("{name}.{ext}"));
        write_netpbm(&path, raster)?;
        self.written.push(path);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(1.0), "1.00000000000e0");
        assert_eq!(num(-0.000123456789012345), "-1.23456789012e-4");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(opt_num(None), "");
    }

    #[test]
    fn respects_formats() {
        let dir = tempfile::tempdir().unwrap();
        let formats: BTreeSet<Format> = [Format::Csv].into();
        let mut sink = Sink::new(dir.path(), &formats).unwrap();
        sink.csv("a.csv", &["x"], &[vec![num(2.0)]]).unwrap();
        sink.json("a.json", "h", &serde_json::json!({"k": 1}))
            .unwrap();
        sink.image("a", &Raster::from_values(1, 1, 1, &[0.0]).unwrap())
            .unwrap();
        assert_eq!(sink.written().len(), 1);
        let text = fs::read_to_string(dir.path().join("a.csv")).unwrap();
        assert_eq!(text, "x\n2.00000000000e0\n");
        assert!(Sink::new(dir.path(), &BTreeSet::new()).is_err());
    }

    #[test]
    fn json_envelope() {
        let dir = tempfile::tempdir().unwrap();
        let formats: BTreeSet<Format> = [Format::Json].into();
        let mut sink = Sink::new(dir.path(), &formats).unwrap();
        sink.json("s.json", "abc", &serde_json::json!({"k": 1}))
            .unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
        assert_eq!(v["config_hash"], "abc");
        assert_eq!(v["k"], 1);
        assert!(v["timestamp_unix"].as_u64().is_some());
    }

    #[test]
    fn unwritable_dir_is_io() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("f");
        fs::write(&file, b"").unwrap();
        let formats: BTreeSet<Format> = [Format::Csv].into();
        let err = Sink::new(&file.join("sub"), &formats).err().unwrap();
        assert_eq!(err.exit_code(), 2);
    }
}
