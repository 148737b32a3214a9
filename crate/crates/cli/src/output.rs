use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

/// Full-precision float: 17 significant digits in scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV document with a one-line header.
pub struct Table {
    out: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        let mut out = header.join(",");
        out.push('\n');
        Table { out }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file. `None` means stdout.
pub fn write_atomic(path: Option<&Path>, contents: &str) -> Result<()> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(contents.as_bytes())?;
        return Ok(stdout.flush()?);
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
