//! The generating series O, S, the conjectured rank series and the T/B recursions.

use totodd::series::{
    conjectured_rank_series, recursion_b, recursion_t, series_o, series_s, verify_series_identity,
};

fn main() -> totodd::Result<()> {
    let bound = 30;
    println!("O = {}", series_o(bound));
    println!("S = {}", series_s(bound));
    for r in 2..=4 {
        println!(
            "rank C(N, {r}) predicted: {}",
            conjectured_rank_series(r, bound)
        );
        println!("T_{r} = {}", recursion_t(r, bound));
        println!("B_{r} = {}", recursion_b(r, bound)?);
    }
    println!("{}", verify_series_identity(35, 6)?);
    Ok(())
}
