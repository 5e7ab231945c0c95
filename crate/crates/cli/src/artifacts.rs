//! Writing `<dir>/<command>-<timestamp>.{json,csv}` artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use crate::config::RunConfig;

pub struct Artifacts {
    dir: PathBuf,
    stem: String,
    pub written: Vec<PathBuf>,
}

impl Artifacts {
    pub fn new(config: &RunConfig) -> anyhow::Result<Self> {
        fs::create_dir_all(&config.output_dir)
            .with_context(|| format!("cannot create output directory {}", config.output_dir.display()))?;
        let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%3fZ");
        Ok(Self { dir: config.output_dir.clone(), stem: format!("{}-{stamp}", config.command), written: Vec::new() })
    }

    pub fn path(&self, ext: &str) -> PathBuf {
        self.dir.join(format!("{}.{ext}", self.stem))
    }

    pub fn file_name(&self, ext: &str) -> String {
        format!("{}.{ext}", self.stem)
    }

    pub fn write(&mut self, ext: &str, contents: &str) -> anyhow::Result<PathBuf> {
        let path = self.path(ext);
        write_file(&path, contents)?;
        self.written.push(path.clone());
        Ok(path)
    }
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

/// JSON envelope shared by every command.
#[derive(Serialize)]
pub struct Document<'a, R: Serialize> {
    pub command: &'a str,
    pub version: &'static str,
    pub params: &'a RunConfig,
    /// Companion CSV file name, if any.
    pub csv: Option<String>,
    pub result: R,
}

impl<'a, R: Serialize> Document<'a, R> {
    pub fn new(params: &'a RunConfig, csv: Option<String>, result: R) -> Self {
        Self { command: &params.command, version: env!("CARGO_PKG_VERSION"), params, csv, result }
    }
}
