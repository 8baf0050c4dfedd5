use std::fs::{self, File};
use std::hash::Hasher;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use fnv::FnvHasher;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const ERROR_FILE: &str = "error.json";

#[derive(Debug, Clone, Serialize)]
pub struct InputRecord {
    pub path: PathBuf,
    pub bytes: usize,
    /// FNV-1a 64-bit digest of the file contents, hex encoded.
    pub fnv1a64: String,
}

/// Everything needed to rerun a command: arguments, resolved config, thread
/// count, input digests and the files produced.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    pub threads: usize,
    pub inputs: Vec<InputRecord>,
    pub outputs: Vec<String>,
    pub status: &'static str,
    pub exit_code: i32,
}

impl Manifest {
    pub fn new(argv: Vec<String>, config: serde_json::Value, threads: usize) -> Self {
        Self {
            tool: "chemtrotter",
            version: env!("CARGO_PKG_VERSION"),
            argv,
            config,
            threads,
            inputs: Vec::new(),
            outputs: Vec::new(),
            status: "running",
            exit_code: 0,
        }
    }
}

pub fn digest(bytes: &[u8]) -> String {
    let mut h = FnvHasher::default();
    h.write(bytes);
    format!("{:016x}", h.finish())
}

/// Output directory plus the run manifest that tracks what lands in it.
pub struct Run {
    dir: PathBuf,
    pub manifest: Manifest,
}

fn write_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::input(format!("cannot write {}: {e}", path.display()))
}

impl Run {
    pub fn new(dir: PathBuf, manifest: Manifest) -> CliResult<Self> {
        fs::create_dir_all(&dir).map_err(|e| write_error(&dir, e))?;
        Ok(Self { dir, manifest })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Reads an input file and records its digest in the manifest.
    pub fn read_input(&mut self, path: &Path) -> CliResult<String> {
        let bytes = fs::read(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        self.manifest.inputs.push(InputRecord {
            path: path.to_path_buf(),
            bytes: bytes.len(),
            fnv1a64: digest(&bytes),
        });
        String::from_utf8(bytes)
            .map_err(|_| CliError::input(format!("{} is not UTF-8 text", path.display())))
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> CliResult<()> {
        let path = self.path(name);
        fs::write(&path, text).map_err(|e| write_error(&path, e))?;
        self.manifest.outputs.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::internal(format!("serializing {name}: {e}")))?;
        text.push('\n');
        self.write_text(name, &text)
    }

    /// Opens `name` for streaming output through `fill`.
    pub fn write_with(
        &mut self,
        name: &str,
        fill: impl FnOnce(&mut BufWriter<File>) -> CliResult<()>,
    ) -> CliResult<()> {
        let path = self.path(name);
        let file = File::create(&path).map_err(|e| write_error(&path, e))?;
        let mut w = BufWriter::new(file);
        fill(&mut w)?;
        w.flush().map_err(|e| write_error(&path, e))?;
        self.manifest.outputs.push(name.to_string());
        Ok(())
    }

    pub fn write_csv<R, I>(&mut self, name: &str, header: &[&str], rows: I) -> CliResult<()>
    where
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
        I: IntoIterator<Item = R>,
    {
        let path = self.path(name);
        let mut w = csv::Writer::from_path(&path)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
        let io = |e: csv::Error| CliError::internal(format!("writing {name}: {e}"));
        w.write_record(header).map_err(io)?;
        for row in rows {
            w.write_record(row).map_err(io)?;
        }
        w.flush().map_err(|e| write_error(&path, e))?;
        self.manifest.outputs.push(name.to_string());
        Ok(())
    }

    /// Writes the manifest and, on failure, the error record.
    pub fn finish(mut self, outcome: &CliResult<()>) -> std::io::Result<()> {
        match outcome {
            Ok(()) => {
                self.manifest.status = "ok";
                self.manifest.exit_code = 0;
            }
            Err(e) => {
                self.manifest.status = "error";
                self.manifest.exit_code = e.kind.exit_code();
                let record = serde_json::to_string_pretty(&e.record())? + "\n";
                fs::write(self.path(ERROR_FILE), record)?;
            }
        }
        let text = serde_json::to_string_pretty(&self.manifest)? + "\n";
        fs::write(self.path(MANIFEST_FILE), text)
    }
}

/// Shortest round-trip form, for CSV cells.
pub fn num(x: f64) -> String {
    x.to_string()
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv1a_reference_vectors() {
        assert_eq!(digest(b""), "cbf29ce484222325");
        assert_eq!(digest(b"a"), "af63dc4c8601ec8c");
        assert_eq!(digest(b"foobar"), "85944171f73967e8");
    }

    #[test]
    fn manifest_tracks_outputs_and_errors() {
        let dir = std::env::temp_dir().join(format!("chemtrotter-output-{}", std::process::id()));
        let mut run =
            Run::new(dir.clone(), Manifest::new(vec![], serde_json::json!({}), 1)).unwrap();
        run.write_text("a.txt", "x").unwrap();
        run.finish(&Err(CliError::numerical("phase"))).unwrap();
        let m: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST_FILE)).unwrap()).unwrap();
        assert_eq!(m["outputs"][0], "a.txt");
        assert_eq!(m["exit_code"], 3);
        let e: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.join(ERROR_FILE)).unwrap()).unwrap();
        assert_eq!(e["error"], "numerical");
        fs::remove_dir_all(dir).unwrap();
    }
}
