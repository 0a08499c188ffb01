//! Atomic file output with a metadata sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use bouncer_core::{BouncerError, Result};
use serde_json::Value;

/// `<out>.meta.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    out.with_file_name(name)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| BouncerError::Io(e.error))?;
    Ok(())
}

/// Write `bytes` to `out` (or stdout). Files get a sidecar holding `meta`
/// plus the run time; the data file itself stays deterministic.
pub fn emit(out: Option<&Path>, bytes: &[u8], mut meta: Value) -> Result<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
        Some(path) => {
            write_atomic(path, bytes)?;
            let stamp = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            if let Value::Object(map) = &mut meta {
                map.insert("version".into(), env!("CARGO_PKG_VERSION").into());
                map.insert("unix_time".into(), stamp.into());
                map.insert("threads".into(), rayon::current_num_threads().into());
                map.insert("data_file".into(), path.display().to_string().into());
            }
            let mut text = serde_json::to_vec_pretty(&meta)?;
            text.push(b'\n');
            write_atomic(&sidecar_path(path), &text)?;
            log::info!("wrote {}", path.display());
        }
    }
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn json_bytes(value: &Value) -> Result<Vec<u8>> {
    let mut text = serde_json::to_vec_pretty(value)?;
    text.push(b'\n');
    Ok(text)
}
