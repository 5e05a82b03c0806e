//! Lists the totally odd index sets S(N, r) and checks their sizes.

use totodd::index::{count_s, enumerate_s};

fn main() -> totodd::Result<()> {
    for (n, r) in [(12, 2), (15, 3), (18, 4), (10, 3)] {
        let table = enumerate_s(n, r);
        let shown: Vec<String> = table.iter().map(ToString::to_string).collect();
        println!(
            "S({n}, {r}) has {} elements: {}",
            count_s(n, r),
            shown.join(" ")
        );
    }
    println!("{}", serde_json::to_string(&enumerate_s(12, 2))?);
    Ok(())
}
