//! The E, E^(j), C and F matrices over the canonical index tables, and checks
//! of their block structure.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::index::{enumerate_s, IndexTable};
use crate::linalg::{rank, ExactMatrix};
use crate::poly::e_formula_raw;
use crate::report::{Backing, ReportRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KindTag {
    E,
    Ej(usize),
    C,
    F,
}

/// Which matrix, at which weight and depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixKind {
    pub tag: KindTag,
    pub n: u32,
    pub r: usize,
}

impl MatrixKind {
    pub fn new(tag: KindTag, n: u32, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("depth must be at least 1".into()));
        }
        if let KindTag::Ej(j) = tag {
            check_j(j, r, 2, r)?;
        }
        Ok(Self { tag, n, r })
    }

    pub fn e(n: u32, r: usize) -> Self {
        Self {
            tag: KindTag::E,
            n,
            r,
        }
    }

    pub fn c(n: u32, r: usize) -> Self {
        Self {
            tag: KindTag::C,
            n,
            r,
        }
    }

    pub fn f(n: u32, r: usize) -> Self {
        Self {
            tag: KindTag::F,
            n,
            r,
        }
    }

    pub fn ej(n: u32, r: usize, j: usize) -> Result<Self> {
        Self::new(KindTag::Ej(j), n, r)
    }

    pub fn j(&self) -> Option<usize> {
        match self.tag {
            KindTag::Ej(j) => Some(j),
            _ => None,
        }
    }

    pub fn tag_name(&self) -> &'static str {
        match self.tag {
            KindTag::E => "E",
            KindTag::Ej(_) => "Ej",
            KindTag::C => "C",
            KindTag::F => "F",
        }
    }

    /// `<kind>_<N>_<r>[_<j>]`, the cache file stem.
    pub fn file_stem(&self) -> String {
        match self.tag {
            KindTag::Ej(j) => format!("Ej_{}_{}_{}", self.n, self.r, j),
            _ => format!("{}_{}_{}", self.tag_name(), self.n, self.r),
        }
    }

    /// Parses `kind N r [j]` from already split words.
    pub fn from_words(kind: &str, n: u32, r: usize, j: Option<usize>) -> Result<Self> {
        let tag = match (kind, j) {
            ("E", None) => KindTag::E,
            ("C", None) => KindTag::C,
            ("F", None) => KindTag::F,
            ("Ej", Some(j)) => KindTag::Ej(j),
            ("Ej", None) => return Err(Error::InvalidParameter("Ej needs a j parameter".into())),
            (k, Some(_)) if matches!(k, "E" | "C" | "F") => {
                return Err(Error::InvalidParameter(format!("{k} takes no j parameter")))
            }
            (k, _) => {
                return Err(Error::InvalidParameter(format!(
                    "unknown matrix kind {k:?}"
                )))
            }
        };
        Self::new(tag, n, r)
    }

    pub fn build(&self) -> Result<ExactMatrix> {
        match self.tag {
            KindTag::E => Ok(build_e(self.n, self.r)),
            KindTag::Ej(j) => build_ej(self.n, self.r, j),
            KindTag::C => Ok(build_c(self.n, self.r)),
            KindTag::F => Ok(build_f(self.n, self.r)),
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.tag_name(), self.n, self.r)?;
        if let KindTag::Ej(j) = self.tag {
            write!(f, " {j}")?;
        }
        Ok(())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let bad = || Error::Parse(format!("bad matrix kind line {s:?}"));
        if !(3..=4).contains(&words.len()) {
            return Err(bad());
        }
        let n = words[1].parse().map_err(|_| bad())?;
        let r = words[2].parse().map_err(|_| bad())?;
        let j = match words.get(3) {
            Some(w) => Some(w.parse().map_err(|_| bad())?),
            None => None,
        };
        Self::from_words(words[0], n, r, j)
    }
}

pub(crate) fn check_j(j: usize, r: usize, lo: usize, hi: usize) -> Result<()> {
    if j < lo || j > hi {
        return Err(Error::JOutOfRange { j, r, lo, hi });
    }
    Ok(())
}

fn indexed(m: ExactMatrix, table: &Arc<IndexTable>) -> ExactMatrix {
    m.with_index(table.clone(), table.clone())
        .expect("matrix built over its own index table")
}

/// `E(N, r)`: entry `(m, n)` is `e(m; n)`.
pub fn build_e(n: u32, r: usize) -> ExactMatrix {
    let table = Arc::new(enumerate_s(n, r));
    let e = &table.entries();
    let m = ExactMatrix::from_fn(table.len(), table.len(), |a, b| {
        e_formula_raw(e[a].parts(), e[b].parts())
    });
    indexed(m, &table)
}

/// `E^(j)(N, r)`: Kronecker delta on the first `r - j` coordinates times `e`
/// of the last `j`.
pub fn build_ej(n: u32, r: usize, j: usize) -> Result<ExactMatrix> {
    check_j(j, r, 2, r)?;
    let table = Arc::new(enumerate_s(n, r));
    let e = &table.entries();
    let head = r - j;
    let m = ExactMatrix::from_fn(table.len(), table.len(), |a, b| {
        let (ma, mb) = (e[a].parts(), e[b].parts());
        if ma[..head] != mb[..head] {
            return BigInt::default();
        }
        e_formula_raw(&ma[head..], &mb[head..])
    });
    Ok(indexed(m, &table))
}

/// `E^(2) E^(3) ... E^(r-1) E`; the prefix is empty for `r <= 2`.
pub fn build_c(n: u32, r: usize) -> ExactMatrix {
    let mut acc = build_e(n, r);
    for j in (2..r).rev() {
        let ej = build_ej(n, r, j).expect("2 <= j < r");
        acc = ej.mul(&acc).expect("square matrices of equal size");
    }
    acc
}

/// `E^(2) ... E^(r-1)`; identity for `r <= 2`.
pub fn build_e_prefix(n: u32, r: usize) -> ExactMatrix {
    let table = Arc::new(enumerate_s(n, r));
    let mut acc = indexed(ExactMatrix::identity(table.len()), &table);
    for j in 2..r {
        let ej = build_ej(n, r, j).expect("2 <= j < r");
        acc = acc.mul(&ej).expect("square matrices of equal size");
    }
    acc
}

/// `F(N, r) = E(N, r) - id`.
pub fn build_f(n: u32, r: usize) -> ExactMatrix {
    let e = build_e(n, r);
    let id = ExactMatrix::identity(e.rows());
    let mut f = e.sub(&id).expect("square");
    if let (Some(ri), Some(ci)) = (e.row_index().cloned(), e.col_index().cloned()) {
        f = f.with_index(ri, ci).expect("same shape");
    }
    f
}

/// Strata of `S(N, r)` by first coordinate, in table order: `(m_1, start, len)`.
pub fn first_coordinate_strata(table: &IndexTable) -> Vec<(u32, usize, usize)> {
    let mut out: Vec<(u32, usize, usize)> = Vec::new();
    for (i, c) in table.iter().enumerate() {
        let m1 = c.parts()[0];
        match out.last_mut() {
            Some((a, _, len)) if *a == m1 => *len += 1,
            _ => out.push((m1, i, 1)),
        }
    }
    out
}

/// Compares `m` with the block-diagonal matrix whose blocks are produced by
/// `block(weight)` for each first-coordinate stratum. Returns the first
/// mismatch as `(row, col, expected, observed)`.
fn compare_block_diagonal(
    m: &ExactMatrix,
    table: &IndexTable,
    mut block: impl FnMut(u32) -> ExactMatrix,
) -> Option<(usize, usize, BigInt, BigInt)> {
    let strata = first_coordinate_strata(table);
    let mut owner = vec![0usize; table.len()];
    for (s, &(_, start, len)) in strata.iter().enumerate() {
        owner[start..start + len].iter_mut().for_each(|o| *o = s);
    }
    let blocks: Vec<ExactMatrix> = strata
        .iter()
        .map(|&(m1, _, _)| block(table.weight() - m1))
        .collect();
    for a in 0..m.rows() {
        for b in 0..m.cols() {
            let (sa, sb) = (owner[a], owner[b]);
            let expected = if sa == sb {
                let start = strata[sa].1;
                let blk = &blocks[sa];
                if blk.rows() != strata[sa].2 {
                    return Some((a, b, BigInt::default(), m.get(a, b).clone()));
                }
                blk.get(a - start, b - start).clone()
            } else {
                BigInt::default()
            };
            if &expected != m.get(a, b) {
                return Some((a, b, expected, m.get(a, b).clone()));
            }
        }
    }
    None
}

fn strata_detail(table: &IndexTable) -> String {
    let strata = first_coordinate_strata(table);
    let m1: Vec<String> = strata.iter().map(|s| s.0.to_string()).collect();
    let w: Vec<String> = strata
        .iter()
        .map(|s| (table.weight() - s.0).to_string())
        .collect();
    format!(
        "blocks by m_1 = [{}], block weights [{}]",
        m1.join(","),
        w.join(",")
    )
}

/// Checks `E^(j)(N, r) = diag(E^(j)(k, r - 1))` over the first-coordinate strata.
pub fn verify_block_diagonal(n: u32, r: usize, j: usize) -> Result<ReportRecord> {
    if r < 3 {
        return Err(Error::JOutOfRange {
            j,
            r,
            lo: 2,
            hi: r.saturating_sub(1),
        });
    }
    check_j(j, r, 2, r - 1)?;
    let table = enumerate_s(n, r);
    let m = build_ej(n, r, j)?;
    let mismatch =
        compare_block_diagonal(&m, &table, |k| build_ej(k, r - 1, j).expect("j <= r - 1"));
    finish_block_report("block-diagonal", n, r, Some(j), &table, mismatch)
}

/// Checks `E^(2) ... E^(r-1) = diag(C(k, r - 1))` over the first-coordinate strata.
pub fn verify_product_is_diag_c(n: u32, r: usize) -> Result<ReportRecord> {
    if r < 3 {
        return Err(Error::InvalidParameter(format!(
            "product structure needs r >= 3, got {r}"
        )));
    }
    let table = enumerate_s(n, r);
    let m = build_e_prefix(n, r);
    let mismatch = compare_block_diagonal(&m, &table, |k| build_c(k, r - 1));
    finish_block_report("product-diag-c", n, r, None, &table, mismatch)
}

fn finish_block_report(
    check: &str,
    n: u32,
    r: usize,
    j: Option<usize>,
    table: &IndexTable,
    mismatch: Option<(usize, usize, BigInt, BigInt)>,
) -> Result<ReportRecord> {
    let mut rec = match &mismatch {
        None => ReportRecord::new(
            check,
            n,
            r,
            "block diagonal",
            "block diagonal",
            true,
            Backing::Theorem,
        )
        .with_detail(strata_detail(table)),
        Some((a, b, e, o)) => ReportRecord::new(
            check,
            n,
            r,
            format!("entry ({a},{b}) = {e}"),
            format!("entry ({a},{b}) = {o}"),
            false,
            Backing::Theorem,
        )
        .with_detail(strata_detail(table)),
    };
    if let Some(j) = j {
        rec = rec.with_j(j);
    }
    rec.into_result()
}

/// `dim ker(E^(2) ... E^(r-1))(N, r)` against `sum_{m odd >= 3} dim ker C(N - m, r-1)`,
/// both by independent rank computations.
pub fn verify_prefix_kernel_sum(n: u32, r: usize) -> Result<ReportRecord> {
    if r < 3 {
        return Err(Error::InvalidParameter(format!("needs r >= 3, got {r}")));
    }
    let p = build_e_prefix(n, r);
    let lhs = p.rows() - rank(&p);
    let rhs: usize = (3..=n)
        .step_by(2)
        .map(|m1| {
            let k = n - m1;
            let c = build_c(k, r - 1);
            c.rows() - rank(&c)
        })
        .sum();
    ReportRecord::new(
        "prefix-kernel-sum",
        n,
        r,
        rhs,
        lhs,
        lhs == rhs,
        Backing::Theorem,
    )
    .into_result()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_12_2_shape_and_rank() {
        let e = build_e(12, 2);
        assert_eq!((e.rows(), e.cols()), (4, 4));
        assert_eq!(rank(&e), 3);
    }

    #[test]
    fn e_12_2_entries_match_expansion() {
        use crate::poly::e_coefficient_expansion;
        let e = build_e(12, 2);
        let t = enumerate_s(12, 2);
        for (a, m) in t.iter().enumerate() {
            for (b, n) in t.iter().enumerate() {
                assert_eq!(e.get(a, b), &e_coefficient_expansion(m, n.parts()).unwrap());
            }
        }
    }

    #[test]
    fn degenerate_sizes() {
        let e = build_e(9, 3);
        assert_eq!((e.rows(), e.cols()), (1, 1));
        assert_eq!(
            e.get(0, 0),
            &crate::poly::e_coefficient_formula(
                &crate::index::OddComposition::new(vec![3, 3, 3]).unwrap(),
                &[3, 3, 3]
            )
            .unwrap()
        );
        let e = build_e(10, 3);
        assert_eq!((e.rows(), e.cols()), (0, 0));
    }

    #[test]
    fn ej_full_depth_is_e() {
        assert_eq!(build_ej(12, 2, 2).unwrap(), build_e(12, 2));
        assert_eq!(build_ej(15, 3, 3).unwrap(), build_e(15, 3));
        assert!(matches!(build_ej(15, 3, 5), Err(Error::JOutOfRange { .. })));
        assert!(build_ej(15, 3, 1).is_err());
    }

    #[test]
    fn c_and_f() {
        assert_eq!(build_c(12, 2), build_e(12, 2));
        let c = build_c(15, 3);
        assert_eq!(c, build_ej(15, 3, 2).unwrap().mul(&build_e(15, 3)).unwrap());
        assert_eq!(rank(&c), 8);
        let f = build_f(12, 2);
        assert_eq!(f.add(&ExactMatrix::identity(4)).unwrap(), build_e(12, 2));
        let f9 = build_f(9, 3);
        let e9 = build_e(9, 3);
        assert_eq!(f9.get(0, 0), &(e9.get(0, 0) - 1));
    }

    #[test]
    fn block_structure_small() {
        assert!(verify_block_diagonal(15, 3, 2).unwrap().is_pass());
        assert!(verify_block_diagonal(21, 4, 2).unwrap().is_pass());
        assert!(verify_block_diagonal(21, 4, 3).unwrap().is_pass());
        assert!(verify_block_diagonal(22, 4, 2).unwrap().is_pass());
        assert!(verify_block_diagonal(22, 4, 3).unwrap().is_pass());
        assert!(verify_product_is_diag_c(22, 4).unwrap().is_pass());
        assert!(verify_block_diagonal(10, 3, 2).unwrap().is_pass());
        assert!(verify_block_diagonal(15, 3, 3).is_err());
        assert!(verify_product_is_diag_c(15, 3).unwrap().is_pass());
        assert!(verify_product_is_diag_c(12, 3).unwrap().is_pass());
    }

    #[test]
    fn block_order_is_decreasing_m1() {
        let rec = verify_block_diagonal(15, 3, 2).unwrap();
        assert_eq!(
            rec.detail.as_deref(),
            Some("blocks by m_1 = [9,7,5,3], block weights [6,8,10,12]")
        );
    }

    #[test]
    fn mismatch_is_located() {
        let table = enumerate_s(15, 3);
        let mut m = build_ej(15, 3, 2).unwrap();
        m.set(0, 9, BigInt::from(7));
        let hit = compare_block_diagonal(&m, &table, |k| build_ej(k, 2, 2).unwrap());
        assert_eq!(hit, Some((0, 9, BigInt::default(), BigInt::from(7))));
    }

    #[test]
    fn kind_parsing() {
        let k: MatrixKind = "Ej 15 3 2".parse().unwrap();
        assert_eq!(k, MatrixKind::ej(15, 3, 2).unwrap());
        assert_eq!(k.to_string(), "Ej 15 3 2");
        assert_eq!(k.file_stem(), "Ej_15_3_2");
        assert_eq!(MatrixKind::e(12, 2).file_stem(), "E_12_2");
        assert!("Ej 15 3 5".parse::<MatrixKind>().is_err());
        assert!("E 15 3 2".parse::<MatrixKind>().is_err());
        assert!("Q 1 1".parse::<MatrixKind>().is_err());
    }
}
