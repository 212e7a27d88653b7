//! Optional on-disk cache of series expansions.
//!
//! Entries live in `<dir>/<sha256>.json`, keyed by the formula name, its
//! parameters and truncation orders. A loaded entry is re-verified before
//! use; a corrupt entry is reported, recomputed and overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use delpezzo::series::TruncatedSeries;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    formula: String,
    params: Vec<u32>,
    series: TruncatedSeries,
}

#[derive(Debug, Clone, Default)]
pub struct SeriesCache {
    dir: Option<PathBuf>,
}

impl SeriesCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn key(formula: &str, params: &[u32]) -> String {
        let text = format!("{formula}:{}", params.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn path(&self, formula: &str, params: &[u32]) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.json", Self::key(formula, params))))
    }

    fn load(path: &Path, formula: &str, params: &[u32]) -> Option<TruncatedSeries> {
        let entry: Entry = serde_json::from_slice(&fs::read(path).ok()?).ok()?;
        (entry.formula == formula && entry.params == params).then_some(entry.series)
    }

    /// Returns the cached series if it passes `verify`, otherwise computes,
    /// verifies and stores it.
    pub fn series(
        &self,
        formula: &str,
        params: &[u32],
        compute: impl FnOnce() -> delpezzo::Result<TruncatedSeries>,
        verify: impl Fn(&TruncatedSeries) -> bool,
        warnings: &mut Vec<String>,
    ) -> Result<TruncatedSeries, CliError> {
        let path = self.path(formula, params);
        if let Some(p) = path.as_ref().filter(|p| p.exists()) {
            match Self::load(p, formula, params) {
                Some(s) if verify(&s) => return Ok(s),
                _ => warnings.push(format!("cache entry {} is corrupt; recomputed", p.display())),
            }
        }
        let series = compute()?;
        if !verify(&series) {
            return Err(CliError::Internal(format!("{formula} series failed its self-check")));
        }
        if let Some(p) = path {
            let entry = Entry { formula: formula.to_string(), params: params.to_vec(), series };
            let stored = p
                .parent()
                .map_or(Ok(()), fs::create_dir_all)
                .and_then(|_| fs::write(&p, serde_json::to_vec(&entry).expect("series serializes")));
            if let Err(e) = stored {
                warnings.push(format!("could not write cache entry {}: {e}", p.display()));
            }
            return Ok(entry.series);
        }
        Ok(series)
    }
}
