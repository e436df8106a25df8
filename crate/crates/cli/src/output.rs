//! Outputs are assembled in memory and only written once the whole command
//! has succeeded; each file goes through a sibling temp file and a rename.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(PathBuf, Vec<u8>)>,
    stdout: Vec<u8>,
}

impl Outputs {
    pub fn file(&mut self, path: PathBuf, bytes: Vec<u8>) {
        self.files.push((path, bytes));
    }

    pub fn stdout(&mut self, bytes: &[u8]) {
        self.stdout.extend_from_slice(bytes);
    }

    /// File at `prefix.ext`, or stdout when there is no prefix.
    pub fn text(&mut self, prefix: Option<&Path>, ext: &str, bytes: Vec<u8>) {
        match prefix {
            Some(p) => self.file(with_extension(p, ext), bytes),
            None => self.stdout(&bytes),
        }
    }

    pub fn commit(self) -> Result<(), CliError> {
        for (path, bytes) in &self.files {
            write_atomic(path, bytes)?;
            log::info!("wrote {}", path.display());
        }
        let mut out = std::io::stdout().lock();
        out.write_all(&self.stdout)?;
        out.flush()?;
        Ok(())
    }
}

pub fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut builder = tempfile::Builder::new();
    builder.prefix(".subzurek-");
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        builder.permissions(std::fs::Permissions::from_mode(0o644));
    }
    let mut tmp = builder.tempfile_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
