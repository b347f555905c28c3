//! Writes that either complete or leave nothing behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use stabmap_core::cultures::MANIFEST_FILE;

fn parent_of(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

/// Writes `contents` to a temporary file next to `path`, then renames it.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let dir = parent_of(path);
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Builds a directory in a temporary sibling and moves it to `target` once
/// `build` succeeds. An existing target is replaced only if it is empty or
/// holds a dataset or pipeline output.
pub fn build_dir<T>(target: &Path, build: impl FnOnce(&Path) -> Result<T>) -> Result<T> {
    let parent = parent_of(target);
    fs::create_dir_all(&parent).with_context(|| format!("cannot create {}", parent.display()))?;
    if target.exists() {
        let replaceable = target.is_dir()
            && (fs::read_dir(target)?.next().is_none()
                || target.join(MANIFEST_FILE).is_file()
                || target.join("ds").join(MANIFEST_FILE).is_file());
        if !replaceable {
            bail!(
                "{} exists and does not look like previous output; refusing to replace it",
                target.display()
            );
        }
    }
    let tmp = tempfile::Builder::new().prefix(".stabmap-").tempdir_in(&parent)?;
    let out = build(tmp.path())?;
    if target.exists() {
        fs::remove_dir_all(target).with_context(|| format!("cannot replace {}", target.display()))?;
    }
    let tmp = tmp.keep();
    if let Err(e) = fs::rename(&tmp, target) {
        let _ = fs::remove_dir_all(&tmp);
        return Err(e).with_context(|| format!("cannot move output to {}", target.display()));
    }
    Ok(out)
}
