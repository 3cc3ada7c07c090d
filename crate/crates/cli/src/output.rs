use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::{CommandKind, RunConfig};

/// One output document. `name` is `None` for a command's single primary
/// output and the file name inside the output directory otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: Option<String>,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    /// False when a verification report contains a failure.
    pub success: bool,
}

impl Outcome {
    pub(crate) fn single(contents: String, success: bool) -> Self {
        Self {
            artifacts: vec![Artifact {
                name: None,
                contents,
            }],
            success,
        }
    }
}

/// Fixed 17-significant-digit rendering used in every CSV.
pub(crate) fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comma-separated, header row, `\n` line endings.
pub(crate) fn csv_document<R: AsRef<[String]>>(header: &[&str], rows: &[R]) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row.as_ref())?;
    }
    let bytes = writer.into_inner().context("flushing CSV buffer")?;
    Ok(String::from_utf8(bytes)?)
}

pub(crate) fn json_document<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes the outcome to `config.out` (a directory for `figures`) or stdout.
pub fn write_outcome(config: &RunConfig, outcome: &Outcome) -> Result<()> {
    let dir_mode = config.command == CommandKind::Figures && !config.self_test;
    if dir_mode {
        let dir = config
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from("figures"));
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for artifact in &outcome.artifacts {
            let name = artifact.name.as_deref().unwrap_or("output.txt");
            write_file(&dir.join(name), &artifact.contents)?;
        }
        return Ok(());
    }
    let contents: String = outcome
        .artifacts
        .iter()
        .map(|a| a.contents.as_str())
        .collect();
    match &config.out {
        Some(path) => write_file(path, &contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout
                .write_all(contents.as_bytes())
                .and_then(|()| stdout.flush())
            {
                // a closed pipe (`| head`) is not a failure of ours
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(e).context("writing to stdout")
                }
                _ => Ok(()),
            }
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_lf_and_header() {
        let doc = csv_document(&["a", "b"], &[vec![num(0.5), num(-1.0)]]).unwrap();
        assert_eq!(doc, "a,b\n5.0000000000000000e-1,-1.0000000000000000e0\n");
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 8.0 / 15.0, 1e-300, -2.5e17] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
