//! Block structure of E^(j) and of the product E^(2) ... E^(r-1).

use totodd::index::enumerate_s;
use totodd::matrices::{first_coordinate_strata, verify_block_diagonal, verify_product_is_diag_c};

fn main() -> totodd::Result<()> {
    let table = enumerate_s(22, 4);
    for (m1, start, len) in first_coordinate_strata(&table) {
        println!("m_1 = {m1}: rows {start}..{}", start + len);
    }
    for j in 2..4 {
        println!("{}", verify_block_diagonal(22, 4, j)?);
    }
    println!("{}", verify_product_is_diag_c(22, 4)?);
    Ok(())
}
