use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use qps_core::generators::VerificationReport;

/// Writes `contents` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// The companion path for a second artifact, e.g. `run.csv` → `run.json`.
pub fn companion(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

pub fn report_csv(r: &VerificationReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "pass", "asserted", "lhs", "expected", "residual"])?;
    for e in &r.entries {
        w.write_record([
            e.id.as_str(),
            if e.pass { "true" } else { "false" },
            if e.asserted { "true" } else { "false" },
            e.lhs.as_str(),
            e.expected.as_str(),
            e.residual.as_str(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// One line per run on stderr, so stdout carries only the artifact.
pub fn summary_line(r: &VerificationReport) -> String {
    let mut s = format!("{}: {} passed, {} failed, {} recorded", r.suite, r.passed, r.failed, r.recorded);
    for e in r.failures().take(5) {
        s.push_str(&format!("\n  FAIL {}: {} (residual {})", e.id, e.lhs, e.residual));
    }
    if r.failed > 5 {
        s.push_str(&format!("\n  ... and {} more", r.failed - 5));
    }
    for w in &r.warnings {
        s.push_str(&format!("\n  warning: {w}"));
    }
    s
}
