mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use canvas_a11y::pipeline::{build_feature_base, load_reference_scenes};
use canvas_a11y::{analyze, decode_image, emit_html, emit_json, parse_trace, Error, FeatureBase, Norm};
use clap::Parser;

use config::{parse_formats, ConfigFile, Format, Overrides, RunConfig};

const EXIT_FAILURE: u8 = 1;
const EXIT_IMAGE: u8 = 2;
const EXIT_TRACE: u8 = 3;
const EXIT_BASE: u8 = 4;

/// Recognize widgets painted on a canvas snapshot and write an accessible
/// HTML/JSON equivalent.
#[derive(Debug, Parser)]
#[command(name = "canvas-a11y", version)]
struct Cli {
    /// Canvas snapshot (PNG, 8-bit RGB or RGBA).
    #[arg(long, value_name = "PATH", required_unless_present = "build_base")]
    image: Option<PathBuf>,

    /// Draw-call trace recorded alongside the snapshot.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,

    /// Feature base file; the bundled base is used when absent.
    #[arg(long, value_name = "PATH")]
    base: Option<PathBuf>,

    /// Output directory (default: next to the input).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Comma-separated output formats.
    #[arg(long, value_name = "html,json")]
    emit: Option<String>,

    /// Zero-crossing strength threshold.
    #[arg(long, value_name = "R")]
    threshold: Option<f64>,

    /// Minkowski order: 1, 2 or inf.
    #[arg(long, value_name = "P", value_parser = parse_norm)]
    p: Option<Norm>,

    /// Distance above which a region is rejected.
    #[arg(long, value_name = "R")]
    cutoff: Option<f64>,

    /// JSON config file; flags take precedence over it.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Build a feature base from the reference scenes in DIR instead of
    /// recognizing an image.
    #[arg(long, value_name = "DIR", requires = "annotations", conflicts_with = "image")]
    build_base: Option<PathBuf>,

    /// Annotation index for --build-base.
    #[arg(long, value_name = "PATH")]
    annotations: Option<PathBuf>,
}

fn parse_norm(s: &str) -> Result<Norm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_FAILURE } else { 0 });
        }
    };
    match run(cli) {
        Ok(written) => {
            for path in written {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("canvas-a11y: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, Failure> {
    let file = match &cli.config {
        Some(p) => Some(ConfigFile::load(p).map_err(|m| Failure::new(EXIT_FAILURE, m))?),
        None => None,
    };
    let emit = cli.emit.as_deref().map(parse_formats).transpose().map_err(|m| Failure::new(EXIT_FAILURE, m))?;
    let overrides = Overrides { threshold: cli.threshold, p: cli.p, cutoff: cli.cutoff, base: cli.base, emit };
    let cfg = RunConfig::resolve(file, overrides).map_err(|m| Failure::new(EXIT_FAILURE, m))?;

    if let Some(dir) = &cli.build_base {
        let annotations = cli.annotations.as_deref().expect("clap enforces --annotations");
        return build_base(dir, annotations, cli.out.as_deref(), &cfg).map(|p| vec![p]);
    }
    let image = cli.image.as_deref().expect("clap enforces --image");
    recognize(image, cli.trace.as_deref(), cli.out.as_deref(), &cfg)
}

fn recognize(image: &Path, trace: Option<&Path>, out: Option<&Path>, cfg: &RunConfig) -> Result<Vec<PathBuf>, Failure> {
    let bytes = fs::read(image).map_err(|e| Failure::new(EXIT_IMAGE, format!("{}: {e}", image.display())))?;
    let pixels = decode_image(&bytes).map_err(|e| Failure::new(EXIT_IMAGE, format!("{}: {e}", image.display())))?;

    let trace = match trace {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::new(EXIT_TRACE, format!("{}: {e}", path.display())))?;
            Some(parse_trace(&text).map_err(|e| Failure::new(EXIT_TRACE, format!("{}: {e}", path.display())))?)
        }
        None => None,
    };

    let base = load_base(cfg.feature_base_path.as_deref())?;
    let analysis = analyze(&pixels, trace.as_ref(), &base, &cfg.pipeline)
        .map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;

    let dir = match out {
        Some(d) => d.to_path_buf(),
        None => image.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    fs::create_dir_all(&dir).map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", dir.display())))?;
    let stem = image.file_stem().and_then(|s| s.to_str()).unwrap_or("canvas");

    let mut written = Vec::new();
    for format in &cfg.emit_formats {
        let body = match format {
            Format::Html => emit_html(&analysis.document),
            Format::Json => emit_json(&analysis.document),
        };
        let path = dir.join(format!("{stem}.a11y.{}", format.extension()));
        fs::write(&path, body).map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

fn load_base(path: Option<&Path>) -> Result<FeatureBase, Failure> {
    let base = match path {
        None => FeatureBase::builtin(),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::new(EXIT_BASE, format!("{}: {e}", p.display())))?;
            FeatureBase::from_json(&text).map_err(|e| Failure::new(EXIT_BASE, format!("{}: {e}", p.display())))?
        }
    };
    base.check_coverage().map_err(|e| Failure::new(EXIT_BASE, e.to_string()))?;
    Ok(base)
}

fn build_base(dir: &Path, annotations: &Path, out: Option<&Path>, cfg: &RunConfig) -> Result<PathBuf, Failure> {
    let scenes = load_reference_scenes(dir, annotations).map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;
    let base = build_feature_base(&scenes, &cfg.pipeline).map_err(|e| match e {
        Error::MissingClasses(_) => Failure::new(EXIT_BASE, e.to_string()),
        other => Failure::new(EXIT_FAILURE, other.to_string()),
    })?;
    let target = out.unwrap_or(dir);
    fs::create_dir_all(target).map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", target.display())))?;
    let path = target.join("feature_base.json");
    fs::write(&path, base.to_json()).map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
    Ok(path)
}
