use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// One CSV cell; floats are printed with 17 significant digits.
pub enum Cell {
    Text(String),
    Num(f64),
    Int(u64),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(v) => format_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($crate::cli::output::Cell::from($x)),*] };
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// RFC-4180 body followed by a `#manifest` line carrying the config hash.
    pub fn to_csv(&self, stamp: &Stamp) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render)).expect("in-memory write");
        }
        w.write_record(stamp.fields()).expect("in-memory write");
        w.into_inner().expect("in-memory flush")
    }
}

/// What every output of a run is tagged with.
#[derive(Debug, Clone, Serialize)]
pub struct Stamp {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config_sha256: String,
}

impl Stamp {
    pub fn new(command: &str, seed: u64, config: &serde_json::Value) -> Self {
        // serde_json maps are ordered by key, so this encoding is canonical
        let canonical = serde_json::json!({ "command": command, "seed": seed, "config": config });
        let digest = Sha256::digest(serde_json::to_vec(&canonical).expect("json value"));
        Stamp {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            config_sha256: hex::encode(digest),
        }
    }

    fn fields(&self) -> Vec<String> {
        vec![
            "#manifest".into(),
            format!("tool={}", self.tool),
            format!("version={}", self.version),
            format!("seed={}", self.seed),
            format!("config_sha256={}", self.config_sha256),
        ]
    }
}

#[derive(Serialize)]
struct FileDigest {
    file: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    #[serde(flatten)]
    stamp: &'a Stamp,
    config: &'a serde_json::Value,
    threads: usize,
    wall_seconds: f64,
    outputs: Vec<FileDigest>,
}

/// Writes each file under `dir`, then `manifest.json` with their digests.
pub fn write_outputs(
    dir: &Path,
    files: &[(String, Vec<u8>)],
    stamp: &Stamp,
    config: &serde_json::Value,
    wall_seconds: f64,
) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut outputs = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        fs::write(dir.join(name), bytes)?;
        outputs.push(FileDigest { file: name.clone(), sha256: hex::encode(Sha256::digest(bytes)) });
    }
    let manifest = Manifest { stamp, config, threads: rayon::current_num_threads(), wall_seconds, outputs };
    let mut json = serde_json::to_vec_pretty(&manifest).expect("serializable");
    json.push(b'\n');
    fs::write(dir.join("manifest.json"), json)
}

pub fn json_bytes<T: Serialize>(v: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("serializable");
    out.push(b'\n');
    out
}
