//! Sweep results and their CSV/JSON encodings.
//!
//! CSV files start with `#` lines carrying the format version, the decimal
//! policy, the provenance block and the event lists as JSON. Every float is
//! written as `{:.16e}` (17 significant digits), which round-trips `f64`
//! exactly; missing values are empty cells.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;
pub const DECIMAL_POLICY: &str = "floats as {:.16e} (17 significant digits, exact f64 round trip); empty cell = missing";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// SHA-256 of the physics-relevant configuration.
    pub config_hash: String,
    pub code_version: String,
    pub preset: Option<String>,
    pub scenario: String,
    pub n_keep: usize,
    pub n_steps: usize,
    pub n_samples: usize,
    pub level_cut: usize,
    pub k_max: usize,
    pub time_points: usize,
    pub phase_points: usize,
    pub delta_eps_hz: f64,
    /// Seconds since the Unix epoch; the only field allowed to differ between identical runs.
    pub created_unix: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Ok,
    /// Tracked for continuity but below `eps_min`; no dissipative analysis.
    TrackedOnly,
    Failed,
}

impl RowStatus {
    fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::TrackedOnly => "tracked-only",
            RowStatus::Failed => "failed",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "ok" => Some(RowStatus::Ok),
            "tracked-only" => Some(RowStatus::TrackedOnly),
            "failed" => Some(RowStatus::Failed),
            _ => None,
        }
    }
}

/// One amplitude. Frequencies in Hz, rates in 1/s, times in s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub index: usize,
    pub eps_d_hz: f64,
    pub status: RowStatus,
    pub error: Option<String>,
    pub omega_d_hz: Option<f64>,
    pub tune_converged: Option<bool>,
    /// Quasienergies of the first branches, in `[-omega_d/2, omega_d/2)`.
    pub quasienergies_hz: Vec<f64>,
    pub photon_0: Option<f64>,
    pub photon_1: Option<f64>,
    pub min_fidelity: Option<f64>,
    pub gap: Option<f64>,
    pub tau_gap: Option<f64>,
    pub tau_dyn: Option<f64>,
    pub t_z: Option<f64>,
    pub alpha_abs: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KissRecord {
    pub pair: (usize, usize),
    pub eps_d_hz: f64,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingRecord {
    pub branch: usize,
    pub partner: Option<usize>,
    pub eps_d_hz: f64,
    pub index: usize,
    pub min_fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub provenance: Provenance,
    pub n_quasienergies: usize,
    pub rows: Vec<Row>,
    pub kiss_events: Vec<KissRecord>,
    pub crossing_events: Vec<CrossingRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (expected csv or json)")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ResultError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed result file: {0}")]
    Malformed(String),
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn columns(nq: usize) -> Vec<String> {
    let mut c: Vec<String> = [
        "index",
        "eps_d_hz",
        "status",
        "omega_d_hz",
        "tune_converged",
        "photon_0",
        "photon_1",
        "min_fidelity",
        "gap",
        "tau_gap",
        "tau_dyn",
        "t_z",
        "alpha_abs",
        "kisses",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    c.extend((0..nq).map(|k| format!("q{k}_hz")));
    c.push("error".into());
    c
}

impl SweepResult {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.status == RowStatus::Failed).count()
    }

    /// Rows with a completed dissipative analysis.
    pub fn analyzed(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.status == RowStatus::Ok)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), ResultError> {
        let mut head = String::new();
        writeln!(head, "# kerrcat sweep result, format {FORMAT_VERSION}").unwrap();
        writeln!(head, "# decimal policy: {DECIMAL_POLICY}").unwrap();
        writeln!(head, "# provenance: {}", serde_json::to_string(&self.provenance)?).unwrap();
        writeln!(head, "# kiss_events: {}", serde_json::to_string(&self.kiss_events)?).unwrap();
        writeln!(head, "# crossing_events: {}", serde_json::to_string(&self.crossing_events)?).unwrap();
        w.write_all(head.as_bytes())?;
        let mut out = csv::WriterBuilder::new().from_writer(w);
        out.write_record(columns(self.n_quasienergies))?;
        for r in &self.rows {
            let kisses: Vec<String> =
                self.kiss_events.iter().filter(|k| k.index == r.index).map(|k| format!("{}-{}", k.pair.0, k.pair.1)).collect();
            let mut rec = vec![
                r.index.to_string(),
                num(r.eps_d_hz),
                r.status.as_str().to_string(),
                opt(r.omega_d_hz),
                r.tune_converged.map(|b| b.to_string()).unwrap_or_default(),
                opt(r.photon_0),
                opt(r.photon_1),
                opt(r.min_fidelity),
                opt(r.gap),
                opt(r.tau_gap),
                opt(r.tau_dyn),
                opt(r.t_z),
                opt(r.alpha_abs),
                kisses.join(";"),
            ];
            for k in 0..self.n_quasienergies {
                rec.push(r.quasienergies_hz.get(k).copied().map(num).unwrap_or_default());
            }
            rec.push(r.error.clone().unwrap_or_default());
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self, ResultError> {
        let mut reader = BufReader::new(r);
        let mut provenance = None;
        let mut kiss_events = None;
        let mut crossing_events = None;
        let mut body = String::new();
        let mut line = String::new();
        while reader.read_line(&mut line)? > 0 {
            if let Some(rest) = line.strip_prefix("# ") {
                if let Some(j) = rest.strip_prefix("provenance: ") {
                    provenance = Some(serde_json::from_str(j.trim_end())?);
                } else if let Some(j) = rest.strip_prefix("kiss_events: ") {
                    kiss_events = Some(serde_json::from_str(j.trim_end())?);
                } else if let Some(j) = rest.strip_prefix("crossing_events: ") {
                    crossing_events = Some(serde_json::from_str(j.trim_end())?);
                }
            } else {
                body.push_str(&line);
                reader.read_to_string(&mut body)?;
                break;
            }
            line.clear();
        }
        let missing = |what: &str| ResultError::Malformed(format!("header has no {what} line"));
        let provenance = provenance.ok_or_else(|| missing("provenance"))?;
        let kiss_events = kiss_events.ok_or_else(|| missing("kiss_events"))?;
        let crossing_events = crossing_events.ok_or_else(|| missing("crossing_events"))?;
        let mut rd = csv::ReaderBuilder::new().from_reader(body.as_bytes());
        let headers = rd.headers()?.clone();
        let nq = headers.iter().filter(|h| h.starts_with('q') && h.ends_with("_hz")).count();
        if headers.iter().collect::<Vec<_>>() != columns(nq) {
            return Err(ResultError::Malformed("unexpected column layout".into()));
        }
        let mut rows = vec![];
        for rec in rd.records() {
            let rec = rec?;
            let bad = |c: &str| ResultError::Malformed(format!("bad value in column {c}: {:?}", rec.get(0)));
            let f = |i: usize, c: &str| -> Result<Option<f64>, ResultError> {
                let s = &rec[i];
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse::<f64>().map(Some).map_err(|_| bad(c))
                }
            };
            let req = |i: usize, c: &str| f(i, c)?.ok_or_else(|| bad(c));
            let quasienergies_hz = (0..nq).filter_map(|k| f(14 + k, "q").transpose()).collect::<Result<Vec<_>, _>>()?;
            let err = &rec[14 + nq];
            rows.push(Row {
                index: rec[0].parse().map_err(|_| bad("index"))?,
                eps_d_hz: req(1, "eps_d_hz")?,
                status: RowStatus::parse(&rec[2]).ok_or_else(|| bad("status"))?,
                error: (!err.is_empty()).then(|| err.to_string()),
                omega_d_hz: f(3, "omega_d_hz")?,
                tune_converged: match &rec[4] {
                    "" => None,
                    s => Some(s.parse().map_err(|_| bad("tune_converged"))?),
                },
                quasienergies_hz,
                photon_0: f(5, "photon_0")?,
                photon_1: f(6, "photon_1")?,
                min_fidelity: f(7, "min_fidelity")?,
                gap: f(8, "gap")?,
                tau_gap: f(9, "tau_gap")?,
                tau_dyn: f(10, "tau_dyn")?,
                t_z: f(11, "t_z")?,
                alpha_abs: f(12, "alpha_abs")?,
            });
        }
        Ok(SweepResult { provenance, n_quasienergies: nq, rows, kiss_events, crossing_events })
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<(), ResultError> {
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        Ok(())
    }

    pub fn read_json<R: Read>(r: R) -> Result<Self, ResultError> {
        Ok(serde_json::from_reader(BufReader::new(r))?)
    }

    /// Writes `sweep.<ext>` into `dir` and returns its path.
    pub fn export(&self, dir: &Path, format: Format) -> Result<PathBuf, ResultError> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("sweep.{}", format.extension()));
        let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
        match format {
            Format::Csv => self.write_csv(file)?,
            Format::Json => self.write_json(file)?,
        }
        Ok(path)
    }

    /// Reads a result file, choosing the decoder from its extension.
    pub fn import(path: &Path) -> Result<Self, ResultError> {
        let format = Format::from_path(path)
            .ok_or_else(|| ResultError::Malformed(format!("{} has no .csv or .json extension", path.display())))?;
        let file = std::fs::File::open(path)?;
        match format {
            Format::Csv => Self::read_csv(file),
            Format::Json => Self::read_json(file),
        }
    }
}
