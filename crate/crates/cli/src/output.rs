use std::io::Write;
use std::path::Path;

/// Writes `body` to `path` via a temporary file in the same directory and a
/// rename, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, body: &str) -> std::io::Result<()> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(body.as_bytes())?;
        return stdout.flush();
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(body.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
