//! Rank and kernels of C(15, 3) by fraction-free elimination.

use totodd::linalg::{left_kernel, rank, right_kernel};
use totodd::matrices::build_c;

fn main() {
    let c = build_c(15, 3);
    println!("C(15, 3):\n{c}");
    let rk = rank(&c);
    println!("rank {rk}, ker {}", c.rows() - rk);

    let table = c
        .row_index()
        .expect("built matrices carry their index table");
    for v in &right_kernel(&c).vectors {
        let terms: Vec<String> = v
            .iter()
            .zip(table.iter())
            .filter(|(x, _)| x.sign() != num_bigint::Sign::NoSign)
            .map(|(x, m)| format!("{x}*z{m}"))
            .collect();
        println!("relation candidate: {}", terms.join(" + "));
    }
    println!("left kernel dimension {}", left_kernel(&c).dim());
}
