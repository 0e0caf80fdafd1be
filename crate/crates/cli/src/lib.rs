//! Command-line front end for evotopo: presets, TOML run configs and the
//! simulate / analyze / classify / pipeline stages.

use std::fmt;
use std::io::Write;
use std::path::Path;

pub mod app;
pub mod config;
pub mod parse;
pub mod preset;
pub mod run;

/// A bad flag, preset name or config value. Maps to exit code 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// 1 for usage and configuration errors, 2 for unreadable or malformed
/// input, 3 for internal invariant violations.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    use evotopo_core::Error as E;
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return 1;
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Parse { .. }
                | E::NonMonotonicFrame { .. }
                | E::FrameDimensions { .. }
                | E::OutOfBounds { .. } => 2,
                E::Invariant(_) | E::EmptyMatrix => 3,
                E::Config(_)
                | E::IntervalOutOfRange { .. }
                | E::InvalidInterval { .. }
                | E::UnsupportedDimension(_)
                | E::OracleTooLarge { .. } => 1,
            };
        }
    }
    2
}

/// Writes `contents` next to `path` and renames it into place, so readers
/// never see a half-written artifact.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or("artifact");
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}
