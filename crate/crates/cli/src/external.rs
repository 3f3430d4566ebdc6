//! Adapters that shell out to third-party compressors for side-by-side
//! ratio reports. Commands are `sh -c` templates in which `{in}` and
//! `{out}` are replaced with file paths.

use std::fs;
use std::path::Path;
use std::process::Command;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ExternalCodec {
    pub name: String,
    pub compress: String,
    pub decompress: String,
}

impl ExternalCodec {
    pub fn new(name: impl Into<String>, compress: impl Into<String>, decompress: impl Into<String>) -> Self {
        ExternalCodec {
            name: name.into(),
            compress: compress.into(),
            decompress: decompress.into(),
        }
    }

    /// Reads a JSON array of `{name, compress, decompress}` objects.
    pub fn load_all(path: &Path) -> Result<Vec<ExternalCodec>> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Compresses `raw` and checks that decompression restores it. Returns
    /// the compressed size.
    pub fn measure(&self, raw: &[u8], scratch: &Path) -> Result<usize> {
        let input = scratch.join(format!("{}.in", self.file_stem()));
        let packed = scratch.join(format!("{}.packed", self.file_stem()));
        let restored = scratch.join(format!("{}.out", self.file_stem()));
        fs::write(&input, raw)?;
        run(&self.compress, &input, &packed)?;
        run(&self.decompress, &packed, &restored)?;
        let size = fs::metadata(&packed)?.len() as usize;
        let back = fs::read(&restored)?;
        for p in [&input, &packed, &restored] {
            let _ = fs::remove_file(p);
        }
        if digest(&back) != digest(raw) {
            bail!("round trip through {} changed the data", self.name);
        }
        Ok(size)
    }

    fn file_stem(&self) -> String {
        self.name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect()
    }
}

pub fn digest(bytes: &[u8]) -> [u8; 32] {
    Sha256::digest(bytes).into()
}

pub fn hex_digest(bytes: &[u8]) -> String {
    digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn run(template: &str, input: &Path, output: &Path) -> Result<()> {
    let cmd = template
        .replace("{in}", &shell_quote(input))
        .replace("{out}", &shell_quote(output));
    let result = Command::new("sh")
        .arg("-c")
        .arg(&cmd)
        .output()
        .with_context(|| format!("spawning `{cmd}`"))?;
    if !result.status.success() {
        bail!(
            "`{cmd}` failed ({}): {}",
            result.status,
            String::from_utf8_lossy(&result.stderr).trim()
        );
    }
    Ok(())
}

fn shell_quote(p: &Path) -> String {
    format!("'{}'", p.display().to_string().replace('\'', r"'\''"))
}
