//! Computed ranks of C(N, r) against the conjectured dimensions, as CSV.

use totodd::series::{compare_rank_to_conjecture, DEFAULT_SIZE_BUDGET};
use totodd::store::MatrixStore;

fn main() -> totodd::Result<()> {
    let store = MatrixStore::in_memory();
    let table = compare_rank_to_conjecture(24, 4, DEFAULT_SIZE_BUDGET, &store)?;
    table.write_csv(std::io::stdout().lock())?;
    for rec in table.records.iter().filter(|r| !r.is_pass()) {
        eprintln!("{rec}");
    }
    Ok(())
}
