//! Text serialization of matrices and the on-disk cache.
//!
//! A cache file looks like
//!
//! ```text
//! totodd-matrix v1
//! E 12 2
//! 4 4
//! 1 0 0 0
//! ...
//! sha256 9f2c...
//! ```
//!
//! The trailing checksum covers every preceding byte. Readers accept files
//! without it.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::index::enumerate_s;
use crate::linalg::ExactMatrix;
use crate::matrices::MatrixKind;

pub const MAGIC: &str = "totodd-matrix v1";
pub const CACHE_ENV: &str = "TOTODD_CACHE";
pub const DEFAULT_CACHE_DIR: &str = "cache";

/// The canonical body: header, kind, shape and rows, each line `\n`-terminated.
pub fn matrix_body(kind: &MatrixKind, m: &ExactMatrix) -> String {
    let mut out = format!("{MAGIC}\n{kind}\n{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(BigInt::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn checksum_of(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// SHA-256 of the canonical body, hex encoded.
pub fn matrix_checksum(kind: &MatrixKind, m: &ExactMatrix) -> String {
    checksum_of(&matrix_body(kind, m))
}

/// Body plus the `sha256 <hex>` line.
pub fn write_matrix_text(kind: &MatrixKind, m: &ExactMatrix) -> String {
    let mut body = matrix_body(kind, m);
    let sum = checksum_of(&body);
    body.push_str("sha256 ");
    body.push_str(&sum);
    body.push('\n');
    body
}

/// Parses the text format, verifying the checksum line when present. `origin`
/// only labels errors.
pub fn read_matrix_text(text: &str, origin: &str) -> Result<(MatrixKind, ExactMatrix)> {
    let parse_err = |msg: String| Error::Parse(format!("{origin}: {msg}"));
    let lines: Vec<&str> = text.split_inclusive('\n').collect();
    let line = |i: usize, what: &str| -> Result<&str> {
        lines
            .get(i)
            .map(|l| l.trim_end_matches(['\n', '\r']))
            .ok_or_else(|| parse_err(format!("missing {what}")))
    };

    let magic = line(0, "header")?;
    if magic != MAGIC {
        return Err(parse_err(format!("unknown header {magic:?}")));
    }
    let kind: MatrixKind = line(1, "kind line")?.parse()?;
    let shape = line(2, "shape line")?;
    let dims: Vec<usize> = shape
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_err(format!("bad shape line {shape:?}")))?;
    let [rows, cols] = dims[..] else {
        return Err(parse_err(format!("bad shape line {shape:?}")));
    };

    let mut entries = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let before = entries.len();
        for word in line(3 + i, "matrix row")?.split_whitespace() {
            let v: BigInt = word
                .parse()
                .map_err(|_| parse_err(format!("bad integer {word:?} in row {i}")))?;
            entries.push(v);
        }
        if entries.len() - before != cols {
            return Err(parse_err(format!(
                "row {i} has {} entries, expected {cols}",
                entries.len() - before
            )));
        }
    }

    let body_lines = 3 + rows;
    if let Some(extra) = lines.get(body_lines + 1) {
        return Err(parse_err(format!("unexpected trailing line {extra:?}")));
    }
    if let Ok(last) = line(body_lines, "checksum") {
        let recorded = last
            .strip_prefix("sha256 ")
            .ok_or_else(|| parse_err(format!("unexpected trailing line {last:?}")))?;
        let body_len: usize = lines[..body_lines].iter().map(|l| l.len()).sum();
        let computed = checksum_of(&text[..body_len]);
        if recorded != computed {
            return Err(Error::ChecksumMismatch {
                path: origin.to_string(),
                recorded: recorded.to_string(),
                computed,
            });
        }
    }

    let table = Arc::new(enumerate_s(kind.n, kind.r));
    let m = ExactMatrix::from_entries(rows, cols, entries)?;
    let m = if rows == table.len() && cols == table.len() {
        m.with_index(table.clone(), table)?
    } else {
        return Err(Error::DimensionMismatch(format!(
            "{origin}: {rows}x{cols} matrix does not match |S({}, {})| = {}",
            kind.n,
            kind.r,
            table.len()
        )));
    };
    Ok((kind, m))
}

/// Cache directory from an explicit flag, then `TOTODD_CACHE`, then `cache`.
pub fn resolve_cache_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(CACHE_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(DEFAULT_CACHE_DIR),
    }
}

/// Writes via a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let dir = dir.unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Where a matrix handed out by [`MatrixStore`] came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Memory,
    Disk,
    Built,
}

/// Memoizes built matrices, optionally backed by a cache directory.
#[derive(Debug, Default)]
pub struct MatrixStore {
    dir: Option<PathBuf>,
    memo: Mutex<HashMap<MatrixKind, Arc<ExactMatrix>>>,
}

impl MatrixStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: Some(dir.into()),
            memo: Mutex::default(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path_for(&self, kind: &MatrixKind) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{}.mat", kind.file_stem())))
    }

    pub fn get(&self, kind: &MatrixKind) -> Result<Arc<ExactMatrix>> {
        self.fetch(kind).map(|(m, _)| m)
    }

    /// Memory first, then disk, then a fresh build that is written back.
    pub fn fetch(&self, kind: &MatrixKind) -> Result<(Arc<ExactMatrix>, Source)> {
        if let Some(m) = self.memo.lock().expect("store lock").get(kind) {
            return Ok((m.clone(), Source::Memory));
        }
        let (m, source) = match self.path_for(kind) {
            Some(path) if path.exists() => {
                let text = fs::read_to_string(&path)?;
                let (found, m) = read_matrix_text(&text, &path.display().to_string())?;
                if found != *kind {
                    return Err(Error::Parse(format!(
                        "{} holds {found}, expected {kind}",
                        path.display()
                    )));
                }
                (m, Source::Disk)
            }
            Some(path) => {
                let m = kind.build()?;
                write_atomic(&path, write_matrix_text(kind, &m).as_bytes())?;
                (m, Source::Built)
            }
            None => (kind.build()?, Source::Built),
        };
        let m = Arc::new(m);
        self.memo
            .lock()
            .expect("store lock")
            .insert(*kind, m.clone());
        Ok((m, source))
    }

    /// Ensures the matrix is on disk and returns its path.
    pub fn persist(&self, kind: &MatrixKind) -> Result<PathBuf> {
        let path = self
            .path_for(kind)
            .ok_or_else(|| Error::InvalidParameter("store has no cache directory".into()))?;
        let (m, _) = self.fetch(kind)?;
        if !path.exists() {
            write_atomic(&path, write_matrix_text(kind, &m).as_bytes())?;
        }
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let kind = MatrixKind::e(12, 2);
        let m = kind.build().unwrap();
        let text = write_matrix_text(&kind, &m);
        assert!(text.starts_with("totodd-matrix v1\nE 12 2\n4 4\n"));
        let (k2, m2) = read_matrix_text(&text, "mem").unwrap();
        assert_eq!(k2, kind);
        assert_eq!(m2, m);
        assert_eq!(write_matrix_text(&k2, &m2), text);
    }

    #[test]
    fn empty_and_ej_kinds() {
        let kind = MatrixKind::e(10, 3);
        let m = kind.build().unwrap();
        let text = write_matrix_text(&kind, &m);
        let (_, m2) = read_matrix_text(&text, "mem").unwrap();
        assert_eq!((m2.rows(), m2.cols()), (0, 0));

        let kind = MatrixKind::ej(15, 3, 2).unwrap();
        let text = write_matrix_text(&kind, &kind.build().unwrap());
        assert!(text.lines().nth(1) == Some("Ej 15 3 2"));
        read_matrix_text(&text, "mem").unwrap();
    }

    #[test]
    fn tampering_is_detected() {
        let kind = MatrixKind::e(12, 2);
        let text = write_matrix_text(&kind, &kind.build().unwrap());
        let mut lines: Vec<&str> = text.lines().collect();
        let row = format!("7{}", lines[3]);
        lines[3] = &row;
        let bad = lines.join("\n") + "\n";
        assert!(matches!(
            read_matrix_text(&bad, "mem"),
            Err(Error::ChecksumMismatch { .. })
        ));
        let body = matrix_body(&kind, &kind.build().unwrap());
        read_matrix_text(&body, "mem").unwrap();
        assert!(read_matrix_text("totodd-matrix v2\n", "mem").is_err());
        assert!(read_matrix_text(&body.replace("4 4", "4 5"), "mem").is_err());
    }

    #[test]
    fn store_hits_disk_then_memory() {
        let dir = tempfile::tempdir().unwrap();
        let kind = MatrixKind::c(15, 3);
        let cold = MatrixStore::at(dir.path());
        let (m, src) = cold.fetch(&kind).unwrap();
        assert_eq!(src, Source::Built);
        assert_eq!(cold.fetch(&kind).unwrap().1, Source::Memory);
        let path = dir.path().join("C_15_3.mat");
        assert!(path.exists());

        let warm = MatrixStore::at(dir.path());
        let (m2, src) = warm.fetch(&kind).unwrap();
        assert_eq!(src, Source::Disk);
        assert_eq!(m, m2);
        assert_eq!(matrix_checksum(&kind, &m), matrix_checksum(&kind, &m2));
        assert_eq!(warm.persist(&kind).unwrap(), path);
    }

    #[test]
    fn cache_dir_precedence() {
        let flag = PathBuf::from("/tmp/flagged");
        assert_eq!(resolve_cache_dir(Some(&flag)), flag);
    }
}
