//! The Ihara action on monomials and the two ways of reading off e(m; n).

use num_rational::BigRational;
use num_traits::One;

use totodd::index::OddComposition;
use totodd::poly::{
    e_coefficient_expansion, e_coefficient_formula, ihara_circ, ihara_of_monomial,
    GeneralPolynomial,
};

fn main() -> totodd::Result<()> {
    let f = GeneralPolynomial::power(2);
    let g = GeneralPolynomial::monomial(vec![2], BigRational::one());
    let p = ihara_circ(&f, &g)?;
    println!("x^2 o x^2 =");
    for (exps, c) in p.terms() {
        println!("  {c} * x1^{} x2^{}", exps[0], exps[1]);
    }

    let m = OddComposition::new(vec![9, 3])?;
    let expansion = ihara_of_monomial(&m)?;
    println!("expansion of {m} has {} terms", expansion.terms().count());
    for n in [[9, 3], [7, 5], [5, 7], [3, 9]] {
        let a = e_coefficient_expansion(&m, &n)?;
        let b = e_coefficient_formula(&m, &n)?;
        println!("e({m}; {n:?}) = {a} (formula {b})");
    }
    Ok(())
}
