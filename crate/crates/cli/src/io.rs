//! File helpers shared by the subcommands.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rateladder::protograph::Protograph;
use serde::Serialize;
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Reads a protograph from JSON: a bare matrix of multiplicities, a
/// protograph object, or any object with a `protograph` field.
pub fn read_protograph(path: &Path) -> Result<Protograph> {
    let text = std::fs::read_to_string(path).map_err(rateladder::Error::from).with_context(|| path.display().to_string())?;
    let value: Value = serde_json::from_str(&text).map_err(rateladder::Error::from)?;
    protograph_from_value(value).with_context(|| format!("{} is not a protograph", path.display()))
}

pub fn protograph_from_value(value: Value) -> Result<Protograph> {
    let p = match value {
        Value::Array(_) => Protograph::new(serde_json::from_value(value).map_err(rateladder::Error::from)?)?,
        Value::Object(mut m) if m.contains_key("protograph") => protograph_from_value(m.remove("protograph").unwrap())?,
        v => serde_json::from_value(v).map_err(rateladder::Error::from)?,
    };
    Ok(p)
}

/// Reads a list of protographs, each in any form [`read_protograph`] accepts.
pub fn read_protograph_list(path: &Path) -> Result<Vec<Protograph>> {
    let text = std::fs::read_to_string(path).map_err(rateladder::Error::from).with_context(|| path.display().to_string())?;
    let value: Value = serde_json::from_str(&text).map_err(rateladder::Error::from)?;
    let Value::Array(items) = value else {
        return Err(rateladder::Error::InvalidArgument(format!("{} must hold a JSON list", path.display())).into());
    };
    items.into_iter().map(protograph_from_value).collect()
}

/// Output wrapper that records what is needed to regenerate a file.
#[derive(Serialize)]
pub struct Stamped<'a, T: Serialize> {
    pub version: &'a str,
    pub seed: u64,
    #[serde(flatten)]
    pub body: T,
}

pub fn stamped<T: Serialize>(seed: u64, body: T) -> Stamped<'static, T> {
    Stamped { version: VERSION, seed, body }
}

/// Pretty JSON to `path`, or to stdout when `path` is `None`.
pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(rateladder::Error::from)?;
    match path {
        Some(p) => {
            create_parent(p)?;
            std::fs::write(p, text + "\n").map_err(rateladder::Error::from).with_context(|| p.display().to_string())?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

pub fn create_file(path: &Path) -> Result<BufWriter<File>> {
    create_parent(path)?;
    let f = File::create(path).map_err(rateladder::Error::from).with_context(|| path.display().to_string())?;
    Ok(BufWriter::new(f))
}

fn create_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(rateladder::Error::from).with_context(|| dir.display().to_string())?;
    }
    Ok(())
}

/// `name.ext` becomes `name.<suffix>`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

