//! Restricted even period polynomials and their images under the E-matrices.
//!
//! `W(N, 2)` is computed by solving the period relation directly on `V(N, 2)`.
//! `W(N, r)` for `r > 2` is assembled from `W(n, 2) ⊗ V(N - n, r - 2)`.
//!
//! Checks backed by proved statements return [`Error::TheoremViolation`] on
//! failure; checks backed by conjectures return records with status `finding`.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::index::{count_s, enumerate_s};
use crate::linalg::{
    in_span, intersection_dim, left_kernel, rank, rank_of_vectors, span_equal, ExactMatrix,
    KernelBasis,
};
use crate::matrices::{build_e, build_e_prefix, build_ej, build_f, check_j};
use crate::poly::{period_defect, phi_j, pi, satisfies_period_relation, EvenPolynomial};
use crate::report::{Backing, ReportRecord};

/// A basis of `W(N, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSpaceBasis {
    pub weight: u32,
    pub depth: usize,
    pub basis: Vec<EvenPolynomial>,
}

impl PeriodSpaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `π` of every basis element.
    pub fn vectors(&self) -> Vec<Vec<BigRational>> {
        self.basis.iter().map(pi).collect()
    }

    pub fn ambient(&self) -> usize {
        count_s(self.weight, self.depth) as usize
    }

    pub fn contains(&self, q: &EvenPolynomial) -> bool {
        q.weight() == self.weight
            && q.depth() == self.depth
            && in_span(self.ambient(), &self.vectors(), &pi(q))
    }
}

/// Solves `P(x_1, x_2) - P(x_2 - x_1, x_2) + P(x_2 - x_1, x_1) = 0` on `V(N, 2)`.
pub fn w2_basis(n: u32) -> PeriodSpaceBasis {
    let table = enumerate_s(n, 2);
    let defects: Vec<_> = table
        .iter()
        .map(|m| {
            period_defect(&EvenPolynomial::monomial(m, BigRational::one()).to_general())
                .expect("two variables")
        })
        .collect();
    let columns: Vec<Vec<u32>> = defects
        .iter()
        .flat_map(|d| d.terms().map(|(e, _)| e.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .rev()
        .collect();
    // Row per monomial, column per exponent pair; coefficients are integers.
    let system = ExactMatrix::from_fn(table.len(), columns.len(), |a, b| {
        let c = defects[a].coefficient(&columns[b]);
        debug_assert!(c.is_integer());
        c.to_integer()
    });
    let kernel = left_kernel(&system);
    let basis = kernel
        .vectors
        .iter()
        .map(|v| {
            EvenPolynomial::from_terms(
                n,
                2,
                table
                    .iter()
                    .cloned()
                    .zip(v.iter().map(|x| BigRational::from_integer(x.clone()))),
            )
            .expect("terms indexed by S(N, 2)")
        })
        .collect();
    PeriodSpaceBasis {
        weight: n,
        depth: 2,
        basis,
    }
}

/// `W(N, r)` from products `w(x_1, x_2) * x_3^(a_3-1) ... x_r^(a_r-1)` with
/// `w ∈ W(n, 2)`, `n < N` even.
pub fn w_basis(n: u32, r: usize) -> Result<PeriodSpaceBasis> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "W(N, r) needs r >= 2, got {r}"
        )));
    }
    if r == 2 {
        return Ok(w2_basis(n));
    }
    let mut basis = Vec::new();
    for head in (2..n).step_by(2) {
        let tails = enumerate_s(n - head, r - 2);
        if tails.is_empty() {
            continue;
        }
        let w2 = w2_basis(head);
        for w in &w2.basis {
            for tail in tails.iter() {
                basis.push(w.times_monomial(tail));
            }
        }
    }
    Ok(PeriodSpaceBasis {
        weight: n,
        depth: r,
        basis,
    })
}

/// Re-checks the period relation on every basis element of `W(N, r)` and
/// that the basis is independent.
pub fn verify_w_basis(n: u32, r: usize) -> Result<ReportRecord> {
    let w = w_basis(n, r)?;
    let mut bad = None;
    for (i, p) in w.basis.iter().enumerate() {
        if !satisfies_period_relation(p)? {
            bad = Some(i);
            break;
        }
    }
    let independent = rank_of_vectors(w.ambient(), &w.vectors()) == w.dim();
    let ok = bad.is_none() && independent;
    let observed = match bad {
        Some(i) => format!("basis element {i} fails the period relation"),
        None if !independent => "dependent basis".to_string(),
        None => format!("{} independent solutions", w.dim()),
    };
    ReportRecord::new(
        "w-functional-equation",
        n,
        r,
        format!("{} independent solutions", w.dim()),
        observed,
        ok,
        Backing::Theorem,
    )
    .into_result()
}

fn violation(
    check: &str,
    n: u32,
    r: usize,
    expected: impl ToString,
    observed: impl ToString,
) -> Error {
    Error::TheoremViolation(Box::new(ReportRecord::new(
        check,
        n,
        r,
        expected,
        observed,
        false,
        Backing::Theorem,
    )))
}

fn is_zero_vec(v: &[BigRational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `[π(P) F(N, r)]` over a basis of `W(N, r)`, each checked to lie in the
/// left kernel of `E(N, r)`.
pub fn tasaka_image(n: u32, r: usize) -> Result<Vec<Vec<BigRational>>> {
    let w = w_basis(n, r)?;
    if w.is_empty() {
        return Ok(Vec::new());
    }
    let f = build_f(n, r);
    let e = build_e(n, r);
    let mut out = Vec::with_capacity(w.dim());
    for (i, v) in w.vectors().iter().enumerate() {
        let image = f.left_mul_vec(v)?;
        if !is_zero_vec(&e.left_mul_vec(&image)?) {
            return Err(violation(
                "tasaka-map",
                n,
                r,
                "image annihilates E from the left",
                format!("basis element {i} maps outside the left kernel"),
            ));
        }
        out.push(image);
    }
    Ok(out)
}

/// Theorem-backed record for the well-definedness of the Tasaka map.
pub fn verify_tasaka_map(n: u32, r: usize) -> Result<ReportRecord> {
    let image = tasaka_image(n, r)?;
    Ok(ReportRecord::new(
        "tasaka-map",
        n,
        r,
        "image in left kernel of E",
        format!("{} image vectors in left kernel of E", image.len()),
        true,
        Backing::Theorem,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityReport {
    pub n: u32,
    pub r: usize,
    pub dim_w: usize,
    pub image_rank: usize,
    pub dim_left_kernel: usize,
}

impl InjectivityReport {
    pub fn injective(&self) -> bool {
        self.image_rank == self.dim_w
    }

    pub fn surjective(&self) -> bool {
        self.image_rank == self.dim_left_kernel
    }

    pub fn records(&self) -> Vec<ReportRecord> {
        vec![
            ReportRecord::new(
                "tasaka-injective",
                self.n,
                self.r,
                self.dim_w,
                self.image_rank,
                self.injective(),
                Backing::Conjecture,
            ),
            ReportRecord::new(
                "tasaka-surjective",
                self.n,
                self.r,
                self.dim_left_kernel,
                self.image_rank,
                self.surjective(),
                Backing::Conjecture,
            ),
        ]
    }
}

/// Rank of the Tasaka image against `dim W(N, r)` and `dim ker^T E(N, r)`.
pub fn injectivity_report(n: u32, r: usize) -> Result<InjectivityReport> {
    let image = tasaka_image(n, r)?;
    let size = count_s(n, r) as usize;
    let e = build_e(n, r);
    Ok(InjectivityReport {
        n,
        r,
        dim_w: w_basis(n, r)?.dim(),
        image_rank: rank_of_vectors(size, &image),
        dim_left_kernel: size - rank(&e),
    })
}

/// `π(W(N, 2))` spans exactly the left kernel of `E(N, 2)`.
pub fn verify_baumard_schneps(n: u32) -> Result<ReportRecord> {
    let w = w2_basis(n);
    let size = count_s(n, 2) as usize;
    let lhs = KernelBasis::from_rational(size, &w.vectors());
    let rhs = left_kernel(&build_e(n, 2));
    let equal = span_equal(&lhs, &rhs)?;
    ReportRecord::new(
        "baumard-schneps",
        n,
        2,
        format!("span of dim {}", rhs.dim()),
        format!(
            "span of dim {}{}",
            lhs.dim(),
            if equal { "" } else { ", different" }
        ),
        equal,
        Backing::Theorem,
    )
    .into_result()
}

/// `π(-P) E^(r-1)(N, r) = π(P) F(N, r)` for every basis element `P` of `W(N, r)`.
pub fn verify_fnr_identity(n: u32, r: usize) -> Result<ReportRecord> {
    if r < 3 {
        return Err(Error::InvalidParameter(format!("needs r >= 3, got {r}")));
    }
    let w = w_basis(n, r)?;
    let f = build_f(n, r);
    let ej = build_ej(n, r, r - 1)?;
    let minus_one = -BigRational::one();
    for (i, v) in w.vectors().iter().enumerate() {
        let neg: Vec<BigRational> = v.iter().map(|x| x * &minus_one).collect();
        if ej.left_mul_vec(&neg)? != f.left_mul_vec(v)? {
            return Err(violation(
                "fnr-identity",
                n,
                r,
                "pi(-P) E^(r-1) == pi(P) F",
                format!("basis element {i} differs"),
            ));
        }
    }
    Ok(ReportRecord::new(
        "fnr-identity",
        n,
        r,
        "pi(-P) E^(r-1) == pi(P) F",
        format!("holds on {} basis elements", w.dim()),
        true,
        Backing::Theorem,
    ))
}

/// `φ_j` restricted to `W(N, r)`, with membership checks on input and output.
pub fn phi_restricted(q: &EvenPolynomial, j: usize) -> Result<EvenPolynomial> {
    let w = w_basis(q.weight(), q.depth())?;
    phi_restricted_in(q, j, &w)
}

/// As [`phi_restricted`] with a precomputed basis of `W(N, r)`.
pub fn phi_restricted_in(
    q: &EvenPolynomial,
    j: usize,
    w: &PeriodSpaceBasis,
) -> Result<EvenPolynomial> {
    let r = q.depth();
    if r < 4 {
        return Err(Error::JOutOfRange {
            j,
            r,
            lo: 2,
            hi: r.saturating_sub(2),
        });
    }
    check_j(j, r, 2, r - 2)?;
    if (q.weight(), q.depth()) != (w.weight, w.depth) {
        return Err(Error::DimensionMismatch(format!(
            "polynomial in V({}, {}) against W({}, {})",
            q.weight(),
            q.depth(),
            w.weight,
            w.depth
        )));
    }
    if !w.contains(q) {
        return Err(Error::NotInPeriodSpace(q.weight(), r));
    }
    let out = phi_j(q, j)?;
    if !w.contains(&out) {
        return Err(Error::TheoremViolation(Box::new(
            ReportRecord::new(
                "phi-restricted",
                q.weight(),
                r,
                "image in W",
                "image outside W",
                false,
                Backing::Theorem,
            )
            .with_j(j),
        )));
    }
    Ok(out)
}

fn dim_left_kernel(m: &ExactMatrix) -> usize {
    m.rows() - rank(m)
}

/// `dim ker(φ_j on V(N, r))` against `sum_n |S(N - n, r - j)| dim ker E(n, j)`.
pub fn verify_phi_kernel(n: u32, r: usize, j: usize) -> Result<ReportRecord> {
    check_j(j, r, 2, r.saturating_sub(1).max(1))?;
    let table = enumerate_s(n, r);
    let images: Vec<Vec<BigRational>> = table
        .iter()
        .map(|m| phi_j(&EvenPolynomial::monomial(m, BigRational::one()), j).map(|p| pi(&p)))
        .collect::<Result<_>>()?;
    let lhs = table.len() - rank_of_vectors(table.len(), &images);
    let rhs: u64 = (0..n)
        .map(|k| count_s(n - k, r - j) * dim_left_kernel(&build_e(k, j)) as u64)
        .sum();
    ReportRecord::new(
        "phi-kernel",
        n,
        r,
        rhs,
        lhs,
        lhs as u64 == rhs,
        Backing::Theorem,
    )
    .with_j(j)
    .into_result()
}

/// `dim ker(φ_j restricted to W(N, r))` against `sum_n dim W(N - n, r - j) dim ker E(n, j)`.
pub fn verify_restricted_kernel(n: u32, r: usize, j: usize) -> Result<ReportRecord> {
    if r < 4 {
        return Err(Error::JOutOfRange {
            j,
            r,
            lo: 2,
            hi: r.saturating_sub(2),
        });
    }
    check_j(j, r, 2, r - 2)?;
    let w = w_basis(n, r)?;
    let images: Vec<Vec<BigRational>> = w
        .basis
        .iter()
        .map(|q| phi_restricted_in(q, j, &w).map(|p| pi(&p)))
        .collect::<Result<_>>()?;
    let lhs = w.dim() - rank_of_vectors(w.ambient(), &images);
    let mut rhs = 0usize;
    for k in 0..n {
        let wd = w_basis(n - k, r - j)?.dim();
        if wd > 0 {
            rhs += wd * dim_left_kernel(&build_e(k, j));
        }
    }
    ReportRecord::new(
        "restricted-kernel",
        n,
        r,
        rhs,
        lhs,
        lhs == rhs,
        Backing::Theorem,
    )
    .with_j(j)
    .into_result()
}

/// Image of `W(N, r)` under `φ_{r-1} ∘ φ_{r-2}|_W ∘ ... ∘ φ_2|_W`, as coefficient vectors.
pub fn chain_image(n: u32, r: usize) -> Result<Vec<Vec<BigRational>>> {
    if r < 3 {
        return Err(Error::InvalidParameter(format!(
            "chain needs r >= 3, got {r}"
        )));
    }
    let w = w_basis(n, r)?;
    let mut current = w.basis.clone();
    for j in 2..r - 1 {
        current = current
            .iter()
            .map(|q| phi_restricted_in(q, j, &w))
            .collect::<Result<_>>()?;
    }
    current
        .iter()
        .map(|q| phi_j(q, r - 1).map(|p| pi(&p)))
        .collect()
}

/// `a(N, r) = dim Im(φ_{r-1} ∘ φ_{r-2}|_W ∘ ... ∘ φ_2|_W)`. Also checks that the
/// image sits inside `ker φ_r ∩ Im(φ_{r-1} ∘ ... ∘ φ_2)` via the matrices.
pub fn chain_image_dim(n: u32, r: usize) -> Result<usize> {
    let image = chain_image(n, r)?;
    if image.is_empty() {
        return Ok(0);
    }
    let size = count_s(n, r) as usize;
    let e = build_e(n, r);
    for (i, v) in image.iter().enumerate() {
        if !is_zero_vec(&e.left_mul_vec(v)?) {
            return Err(violation(
                "chain-inclusion",
                n,
                r,
                "chain image in ker phi_r",
                format!("image vector {i} not annihilated by E"),
            ));
        }
    }
    let prefix = build_e_prefix(n, r);
    let before = rank(&prefix);
    let mut rows: Vec<Vec<BigRational>> = prefix
        .to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(BigRational::from_integer).collect())
        .collect();
    rows.extend(image.iter().cloned());
    if rank_of_vectors(size, &rows) != before {
        return Err(violation(
            "chain-inclusion",
            n,
            r,
            "chain image in Im(phi_{r-1} ... phi_2)",
            "image leaves the row space of E^(2)...E^(r-1)",
        ));
    }
    Ok(rank_of_vectors(size, &image))
}

/// The same dimension through matrices only: `rank(π(W) E^(2) ... E^(r-1))`.
pub fn chain_image_dim_by_matrices(n: u32, r: usize) -> Result<usize> {
    let w = w_basis(n, r)?;
    if w.is_empty() {
        return Ok(0);
    }
    let prefix = build_e_prefix(n, r);
    let rows: Vec<Vec<BigRational>> = w
        .vectors()
        .iter()
        .map(|v| prefix.left_mul_vec(v))
        .collect::<Result<_>>()?;
    Ok(rank_of_vectors(w.ambient(), &rows))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlanoisReport {
    pub n: u32,
    pub r: usize,
    pub restricted_image_dim: usize,
    pub intersection_dim: usize,
}

impl GlanoisReport {
    pub fn holds(&self) -> bool {
        self.restricted_image_dim == self.intersection_dim
    }

    pub fn record(&self) -> ReportRecord {
        ReportRecord::new(
            "glanois",
            self.n,
            self.r,
            self.intersection_dim,
            self.restricted_image_dim,
            self.holds(),
            Backing::Conjecture,
        )
    }
}

/// Compares the restricted chain image with `Im^T(E^(2)...E^(r-1)) ∩ ker^T E(N, r)`.
pub fn glanois_report(n: u32, r: usize) -> Result<GlanoisReport> {
    let restricted_image_dim = chain_image_dim(n, r)?;
    let prefix = build_e_prefix(n, r);
    let e = build_e(n, r);
    Ok(GlanoisReport {
        n,
        r,
        restricted_image_dim,
        intersection_dim: intersection_dim(&prefix, &e)?,
    })
}

/// Candidate relations: the right kernel of `C(N, r)` as integer vectors.
pub fn relation_candidates(n: u32, r: usize) -> KernelBasis {
    crate::linalg::right_kernel(&crate::matrices::build_c(n, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::OddComposition;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn w2_weight_12() {
        let w = w2_basis(12);
        assert_eq!(w.dim(), 1);
        // proportional to x1^2 x2^8 - 3 x1^4 x2^6 + 3 x1^6 x2^4 - x1^8 x2^2
        assert_eq!(pi(&w.basis[0]), vec![q(1), q(-3), q(3), q(-1)]);
        assert!(satisfies_period_relation(&w.basis[0]).unwrap());
    }

    #[test]
    fn w2_dimensions() {
        assert_eq!(w2_basis(10).dim(), 0);
        assert_eq!(w2_basis(24).dim(), 2);
        assert_eq!(w2_basis(13).dim(), 0);
    }

    #[test]
    fn w_dimensions() {
        assert_eq!(w_basis(15, 3).unwrap().dim(), 1);
        assert_eq!(w_basis(12, 2).unwrap(), w2_basis(12));
        assert_eq!(w_basis(18, 4).unwrap().dim(), 1);
        assert!(w_basis(12, 1).is_err());
    }

    #[test]
    fn w_15_3_is_w12_times_square() {
        let w = w_basis(15, 3).unwrap();
        let expected = w2_basis(12).basis[0].times_monomial(&OddComposition::new(vec![3]).unwrap());
        assert_eq!(w.basis, vec![expected]);
        assert!(verify_w_basis(15, 3).unwrap().is_pass());
    }

    #[test]
    fn tasaka_small() {
        let img = tasaka_image(12, 2).unwrap();
        assert_eq!(img.len(), 1);
        assert_eq!(tasaka_image(15, 3).unwrap().len(), 1);
        assert!(tasaka_image(14, 2).unwrap().is_empty());
    }

    #[test]
    fn injectivity_small() {
        let rep = injectivity_report(12, 2).unwrap();
        assert!(rep.injective() && rep.surjective());
        let rep = injectivity_report(15, 3).unwrap();
        assert!(rep.injective() && rep.surjective());
        // x^21 coefficient of O(x) S(x) is S_18 + S_16 + S_12 = 3.
        let rep = injectivity_report(21, 3).unwrap();
        assert_eq!(rep.dim_left_kernel, 3);
        assert_eq!(rep.dim_w, 3);
    }

    #[test]
    fn baumard_schneps_small() {
        assert!(verify_baumard_schneps(12).unwrap().is_pass());
        assert!(verify_baumard_schneps(14).unwrap().is_pass());
        let rec = verify_baumard_schneps(24).unwrap();
        assert_eq!(rec.observed, "span of dim 2");
    }

    #[test]
    fn fnr_small() {
        assert!(verify_fnr_identity(15, 3).unwrap().is_pass());
        assert!(verify_fnr_identity(21, 4).unwrap().is_pass());
        assert!(verify_fnr_identity(24, 4).unwrap().is_pass());
        assert!(verify_fnr_identity(11, 3).unwrap().is_pass());
        assert!(verify_fnr_identity(12, 2).is_err());
    }

    #[test]
    fn restricted_phi() {
        // S(21, 4) is empty (parity), so use weight 24 where dim W = 7.
        assert_eq!(w_basis(21, 4).unwrap().dim(), 0);
        let w = w_basis(24, 4).unwrap();
        assert_eq!(w.dim(), 7);
        for p in &w.basis {
            let out = phi_restricted(p, 2).unwrap();
            assert!(w.contains(&out));
        }
        assert!(phi_restricted(&EvenPolynomial::zero(21, 4), 2)
            .unwrap()
            .is_zero());
        let outside =
            EvenPolynomial::monomial(&OddComposition::new(vec![9, 3, 3, 9]).unwrap(), q(1));
        assert!(matches!(
            phi_restricted(&outside, 2),
            Err(Error::NotInPeriodSpace(24, 4))
        ));
        assert!(matches!(
            phi_restricted(&w.basis[0], 3),
            Err(Error::JOutOfRange { .. })
        ));
    }

    #[test]
    fn kernel_decompositions() {
        assert!(verify_phi_kernel(15, 3, 2).unwrap().is_pass());
        assert!(verify_phi_kernel(21, 4, 3).unwrap().is_pass());
        assert!(verify_restricted_kernel(21, 4, 2).unwrap().is_pass());
        assert!(verify_restricted_kernel(24, 4, 2).unwrap().is_pass());
        assert!(verify_phi_kernel(24, 4, 2).unwrap().is_pass());
        assert!(verify_restricted_kernel(27, 5, 3).unwrap().is_pass());
    }

    #[test]
    fn chain_dims() {
        for n in [15u32, 17, 19, 21] {
            let w = w_basis(n, 3).unwrap();
            let images = chain_image(n, 3).unwrap();
            let ker = w.dim() - rank_of_vectors(w.ambient(), &images);
            assert_eq!(chain_image_dim(n, 3).unwrap(), w.dim() - ker);
            assert_eq!(
                chain_image_dim(n, 3).unwrap(),
                chain_image_dim_by_matrices(n, 3).unwrap()
            );
        }
        assert_eq!(chain_image_dim(18, 4).unwrap(), 1);
        assert_eq!(chain_image_dim(13, 3).unwrap(), 0);
    }

    #[test]
    fn glanois_small() {
        assert!(glanois_report(15, 3).unwrap().holds());
        assert!(glanois_report(21, 4).unwrap().holds());
        assert!(glanois_report(24, 4).unwrap().holds());
        let empty = glanois_report(10, 4).unwrap();
        assert_eq!((empty.restricted_image_dim, empty.intersection_dim), (0, 0));
    }
}
