use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::fit::SlopeFit;
use crate::error::{Error, Result};

/// Columns of equal length, written as CSV with 17 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// draw with logarithmic axes
    pub loglog: bool,
}

impl Series {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Series { name: name.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), loglog: false }
    }

    pub fn loglog(mut self) -> Self {
        self.loglog = true;
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width for series {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| fmt17(*v)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let columns: Vec<String> = r.headers()?.iter().map(|s| s.to_string()).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|s| s.parse::<f64>().map_err(|e| Error::Format(format!("{}: {e}", path.display()))))
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("series").to_string();
        Ok(Series { name, columns, rows, loglog: false })
    }
}

/// 17 significant digits, round-trippable.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// A named pass/fail measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    /// `value <= threshold`.
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, threshold, pass: value <= threshold, detail: format!("{value:.6e} <= {threshold:.6e}") }
    }

    /// `value >= threshold`.
    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, threshold, pass: value >= threshold, detail: format!("{value:.6e} >= {threshold:.6e}") }
    }

    pub fn flag(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), value: ok as u8 as f64, threshold: 1.0, pass: ok, detail: detail.into() }
    }
}

/// What a runner hands back.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub series: Vec<Series>,
    pub fits: Vec<SlopeFit>,
    pub checks: Vec<Check>,
    /// grid descriptions keyed by run label
    pub grids: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn all_pass(&self) -> bool {
        self.fits.iter().all(|f| f.pass) && self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self.fits.iter().filter(|f| !f.pass).map(|f| format!("fit {}", f.name)).collect();
        out.extend(self.checks.iter().filter(|c| !c.pass).map(|c| format!("check {} ({})", c.name, c.detail)));
        out
    }

    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn fit(&self, name: &str) -> Option<&SlopeFit> {
        self.fits.iter().find(|f| f.name == name)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub file: String,
    pub loglog: bool,
}

/// `manifest.json` of an output directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub preset: String,
    pub seed: u64,
    pub budget_mib: u64,
    pub params: serde_json::Value,
    pub version: String,
    pub grids: BTreeMap<String, String>,
    pub wall_seconds: f64,
    pub partial: bool,
    pub pass: bool,
    pub failures: Vec<String>,
    pub checks: Vec<Check>,
    pub series: Vec<SeriesEntry>,
    pub fits: Vec<String>,
    /// sha256 of every written file, keyed by path relative to the run directory
    pub checksums: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

impl RunManifest {
    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join("manifest.json");
        let text = fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(dir.join("manifest.json"), text + "\n")?;
        Ok(())
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    let d = Sha256::digest(&bytes);
    Ok(d.iter().map(|b| format!("{b:02x}")).collect())
}

/// Create `dir/{series,fits,plots}`.
pub fn prepare_dir(dir: &Path) -> Result<()> {
    for sub in ["series", "fits", "plots"] {
        fs::create_dir_all(dir.join(sub))?;
    }
    Ok(())
}

/// Write series and fits; returns their relative paths.
pub fn write_outcome(dir: &Path, out: &Outcome) -> Result<(Vec<SeriesEntry>, Vec<String>)> {
    let mut entries = Vec::new();
    for s in &out.series {
        let rel = format!("series/{}.csv", s.name);
        s.write(&dir.join(&rel))?;
        entries.push(SeriesEntry { file: rel, loglog: s.loglog });
    }
    let mut fits = Vec::new();
    for f in &out.fits {
        let rel = format!("fits/{}.json", f.name);
        fs::write(dir.join(&rel), serde_json::to_string_pretty(f)? + "\n")?;
        fits.push(rel);
    }
    Ok((entries, fits))
}

/// Checksums of the listed relative paths.
pub fn checksums(dir: &Path, files: impl IntoIterator<Item = String>) -> Result<BTreeMap<String, String>> {
    files.into_iter().map(|f| Ok((f.clone(), sha256_file(&dir.join(&f))?))).collect()
}

/// Default output root: `$DISPLAB_OUT` if set, else `./displab-out`.
pub fn default_root() -> PathBuf {
    std::env::var_os("DISPLAB_OUT").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("displab-out"))
}
