//! Restricted even period polynomials and how they sit inside ker^T E.

use totodd::period::{injectivity_report, verify_baumard_schneps, w2_basis, w_basis};
use totodd::poly::pi;

fn main() -> totodd::Result<()> {
    let w = w2_basis(12);
    for p in &w.basis {
        println!("W(12, 2) basis: {}", serde_json::to_string(p)?);
        println!(
            "  coefficient vector {:?}",
            pi(p).iter().map(ToString::to_string).collect::<Vec<_>>()
        );
    }
    for n in (12..=28).step_by(2) {
        println!("{}", verify_baumard_schneps(n)?);
    }
    for (n, r) in [(15, 3), (18, 4), (24, 4)] {
        println!("dim W({n}, {r}) = {}", w_basis(n, r)?.dim());
    }
    let rep = injectivity_report(21, 3)?;
    println!(
        "(21, 3): dim W {}, image rank {}, dim ker^T E {}",
        rep.dim_w, rep.image_rank, rep.dim_left_kernel
    );
    Ok(())
}
