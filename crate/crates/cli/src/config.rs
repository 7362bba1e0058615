use std::fs;
use std::path::{Path, PathBuf};

use canvas_a11y::{Norm, PipelineConfig};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Html,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Html => "html",
            Format::Json => "json",
        }
    }
}

pub fn parse_formats(list: &str) -> Result<Vec<Format>, String> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let f = match item.to_ascii_lowercase().as_str() {
            "html" => Format::Html,
            "json" => Format::Json,
            other => return Err(format!("unknown emit format {other:?} (expected html or json)")),
        };
        if !out.contains(&f) {
            out.push(f);
        }
    }
    if out.is_empty() {
        return Err("at least one emit format is required".into());
    }
    out.sort();
    Ok(out)
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub zero_crossing_threshold: Option<f64>,
    pub distance_p: Option<serde_json::Value>,
    pub rejection_cutoff: Option<f64>,
    pub feature_base_path: Option<PathBuf>,
    pub emit_formats: Option<Vec<String>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Everything one run needs; flags override the config file, which
/// overrides the defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub pipeline: PipelineConfig,
    pub feature_base_path: Option<PathBuf>,
    pub emit_formats: Vec<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            pipeline: PipelineConfig::default(),
            feature_base_path: None,
            emit_formats: vec![Format::Html, Format::Json],
        }
    }
}

#[derive(Debug, Default)]
pub struct Overrides {
    pub threshold: Option<f64>,
    pub p: Option<Norm>,
    pub cutoff: Option<f64>,
    pub base: Option<PathBuf>,
    pub emit: Option<Vec<Format>>,
}

impl RunConfig {
    pub fn resolve(file: Option<ConfigFile>, flags: Overrides) -> Result<Self, String> {
        let mut cfg = RunConfig::default();
        if let Some(file) = file {
            if let Some(t) = file.zero_crossing_threshold {
                cfg.pipeline.zero_crossing_threshold = t;
            }
            if let Some(p) = file.distance_p {
                let text = match p {
                    serde_json::Value::String(s) => s,
                    other => other.to_string(),
                };
                cfg.pipeline.distance_p = text.parse().map_err(|e: canvas_a11y::Error| e.to_string())?;
            }
            if let Some(c) = file.rejection_cutoff {
                cfg.pipeline.rejection_cutoff = c;
            }
            cfg.feature_base_path = file.feature_base_path;
            if let Some(list) = file.emit_formats {
                cfg.emit_formats = parse_formats(&list.join(","))?;
            }
        }
        if let Some(t) = flags.threshold {
            cfg.pipeline.zero_crossing_threshold = t;
        }
        if let Some(p) = flags.p {
            cfg.pipeline.distance_p = p;
        }
        if let Some(c) = flags.cutoff {
            cfg.pipeline.rejection_cutoff = c;
        }
        if flags.base.is_some() {
            cfg.feature_base_path = flags.base;
        }
        if let Some(e) = flags.emit {
            cfg.emit_formats = e;
        }
        cfg.pipeline.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}
