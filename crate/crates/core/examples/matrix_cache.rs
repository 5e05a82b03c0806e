//! Writing matrices to a cache directory and reading them back.

use totodd::matrices::MatrixKind;
use totodd::store::{matrix_checksum, MatrixStore};

fn main() -> totodd::Result<()> {
    let dir = tempfile::tempdir()?;
    let kind: MatrixKind = "C 15 3".parse()?;

    let cold = MatrixStore::at(dir.path());
    let (m, source) = cold.fetch(&kind)?;
    println!("{kind}: {source:?}, sha256 {}", matrix_checksum(&kind, &m));

    let warm = MatrixStore::at(dir.path());
    let (again, source) = warm.fetch(&kind)?;
    println!(
        "{kind}: {source:?}, sha256 {}",
        matrix_checksum(&kind, &again)
    );
    assert_eq!(m, again);

    let path = warm.persist(&kind)?;
    print!("{}", std::fs::read_to_string(path)?);
    Ok(())
}
