//! Exact rank, kernels and subspace comparisons over the rationals.
//!
//! Everything runs on dense matrices of arbitrary-precision integers. Ranks and
//! kernels come out of fraction-free (Bareiss) elimination: every division
//! performed during elimination is exact, and the elimination asserts that.
//! Pivots are chosen by scanning columns left to right and taking the lowest
//! remaining row with a nonzero entry, so results are reproducible.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::IndexTable;

/// Row count above which elimination steps update rows in parallel.
const PAR_ROWS: usize = 48;

/// Dense row-major integer matrix, optionally labelled by index tables.
#[derive(Clone, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
    row_index: Option<Arc<IndexTable>>,
    col_index: Option<Arc<IndexTable>>,
}

impl PartialEq for ExactMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for ExactMatrix {}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
            row_index: None,
            col_index: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
            row_index: None,
            col_index: None,
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
            row_index: None,
            col_index: None,
        })
    }

    /// Builds from nested rows of anything convertible to `BigInt`.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let entries = rows.iter().flatten().cloned().map(Into::into).collect();
        Self::from_entries(n, m, entries)
    }

    /// Attaches index tables; their sizes must match the matrix shape.
    pub fn with_index(mut self, rows: Arc<IndexTable>, cols: Arc<IndexTable>) -> Result<Self> {
        if rows.len() != self.rows || cols.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "index tables {}x{} for a {}x{} matrix",
                rows.len(),
                cols.len(),
                self.rows,
                self.cols
            )));
        }
        self.row_index = Some(rows);
        self.col_index = Some(cols);
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row_index(&self) -> Option<&Arc<IndexTable>> {
        self.row_index.as_ref()
    }

    pub fn col_index(&self) -> Option<&Arc<IndexTable>> {
        self.col_index.as_ref()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone());
        t.row_index = self.col_index.clone();
        t.col_index = self.row_index.clone();
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let cols = other.cols;
        let entries: Vec<BigInt> = (0..self.rows)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut acc = vec![BigInt::zero(); cols];
                for (k, a) in self.row(i).iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (slot, b) in acc.iter_mut().zip(other.row(k)) {
                        if !b.is_zero() {
                            *slot += a * b;
                        }
                    }
                }
                acc
            })
            .collect();
        let mut out = Self::from_entries(self.rows, cols, entries)?;
        out.row_index = self.row_index.clone();
        out.col_index = other.col_index.clone();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot subtract {}x{} from {}x{}",
                other.rows, other.cols, self.rows, self.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} to {}x{}",
                other.rows, other.cols, self.rows, self.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
        Ok(out)
    }

    /// Row vector times matrix, `v * self`.
    pub fn left_mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![BigRational::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (slot, b) in out.iter_mut().zip(self.row(i)) {
                if !b.is_zero() {
                    *slot += a * BigRational::from_integer(b.clone());
                }
            }
        }
        Ok(out)
    }

    /// Integer row vector times matrix.
    pub fn left_mul_int(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (slot, b) in out.iter_mut().zip(self.row(i)) {
                *slot += a * b;
            }
        }
        Ok(out)
    }

    /// Matrix times integer column vector.
    pub fn right_mul_int(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Extracts the square block `[start, start + len)` on both axes.
    pub fn block(&self, row_start: usize, col_start: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| {
            self.get(row_start + i, col_start + j).clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Basis of a kernel, each vector primitive with a positive leading entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelBasis {
    pub ambient: usize,
    #[serde(with = "bigint_vecs")]
    pub vectors: Vec<Vec<BigInt>>,
}

impl KernelBasis {
    pub fn empty(ambient: usize) -> Self {
        Self {
            ambient,
            vectors: Vec::new(),
        }
    }

    /// Normalizes arbitrary rational vectors. The caller guarantees independence.
    pub fn from_rational(ambient: usize, vectors: &[Vec<BigRational>]) -> Self {
        Self {
            ambient,
            vectors: vectors.iter().map(|v| primitive_from_rational(v)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn as_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.vectors.len(), self.ambient, |i, j| {
            self.vectors[i][j].clone()
        })
    }

    pub fn rational_vectors(&self) -> Vec<Vec<BigRational>> {
        self.vectors
            .iter()
            .map(|v| v.iter().cloned().map(BigRational::from_integer).collect())
            .collect()
    }
}

mod bigint_vecs {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            let strs: Vec<String> = row.iter().map(ToString::to_string).collect();
            seq.serialize_element(&strs)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let raw: Vec<Vec<String>> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Scales to coprime integer entries with the first nonzero entry positive.
pub fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return;
    }
    let negate = v
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(Signed::is_negative);
    for x in v.iter_mut() {
        *x = &*x / &g;
        if negate {
            *x = -&*x;
        }
    }
}

/// Clears denominators of a rational vector, then makes it primitive.
pub fn primitive_from_rational(v: &[BigRational]) -> Vec<BigInt> {
    let mut out = clear_denominators(v);
    make_primitive(&mut out);
    out
}

/// Multiplies by the lcm of the denominators; the result is an integer vector.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Result of fraction-free elimination.
struct Echelon {
    /// `(row, col)` of each pivot in order; row `k` holds pivot `k`.
    pivots: Vec<usize>,
    work: Vec<Vec<BigInt>>,
    /// Common value of every pivot after full (Gauss-Jordan) reduction.
    last_pivot: BigInt,
}

fn exact_div(num: BigInt, den: &BigInt) -> BigInt {
    if den.is_one() {
        return num;
    }
    let (q, r) = num.div_rem(den);
    assert!(
        r.is_zero(),
        "fraction-free elimination produced an inexact division"
    );
    q
}

/// Bareiss elimination. With `reduce_above` set, rows above the pivot are
/// cleared too (fraction-free Gauss-Jordan), leaving every pivot equal to
/// `last_pivot`.
fn bareiss(m: &ExactMatrix, reduce_above: bool) -> Echelon {
    let mut work = m.to_rows();
    let rows = m.rows;
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    for c in 0..m.cols {
        let k = pivots.len();
        if k == rows {
            break;
        }
        let Some(p_row) = (k..rows).find(|&i| !work[i][c].is_zero()) else {
            continue;
        };
        work.swap(k, p_row);
        let (upper, rest) = work.split_at_mut(k);
        let (pivot_row, lower) = rest.split_first_mut().expect("pivot row exists");
        let pivot = pivot_row[c].clone();
        let pivot_row = &*pivot_row;
        let start = if reduce_above { 0 } else { c };
        let update = |row: &mut Vec<BigInt>| {
            let factor = row[c].clone();
            for l in start..row.len() {
                let mut v = &pivot * &row[l];
                if !factor.is_zero() && !pivot_row[l].is_zero() {
                    v -= &factor * &pivot_row[l];
                }
                row[l] = exact_div(v, &prev);
            }
        };
        if lower.len() >= PAR_ROWS {
            lower.par_iter_mut().for_each(update);
        } else {
            lower.iter_mut().for_each(update);
        }
        if reduce_above {
            if upper.len() >= PAR_ROWS {
                upper.par_iter_mut().for_each(update);
            } else {
                upper.iter_mut().for_each(update);
            }
        }
        prev = pivot;
        pivots.push(c);
    }
    Echelon {
        pivots,
        work,
        last_pivot: prev,
    }
}

/// Exact rank over the rationals.
pub fn rank(m: &ExactMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    // Eliminating along the shorter side keeps the work arrays small.
    if m.rows > m.cols {
        return bareiss(&m.transpose(), false).pivots.len();
    }
    bareiss(m, false).pivots.len()
}

/// Basis of `{ v : m * v^T = 0 }`.
pub fn right_kernel(m: &ExactMatrix) -> KernelBasis {
    let cols = m.cols;
    if m.rows == 0 {
        return KernelBasis {
            ambient: cols,
            vectors: (0..cols)
                .map(|j| {
                    let mut v = vec![BigInt::zero(); cols];
                    v[j] = BigInt::one();
                    v
                })
                .collect(),
        };
    }
    let ech = bareiss(m, true);
    let mut is_pivot = vec![None; cols];
    for (k, &c) in ech.pivots.iter().enumerate() {
        is_pivot[c] = Some(k);
    }
    let d = &ech.last_pivot;
    let mut vectors = Vec::with_capacity(cols - ech.pivots.len());
    for f in 0..cols {
        if is_pivot[f].is_some() {
            continue;
        }
        let mut v = vec![BigInt::zero(); cols];
        v[f] = d.clone();
        for (k, &c) in ech.pivots.iter().enumerate() {
            v[c] = -&ech.work[k][f];
        }
        make_primitive(&mut v);
        vectors.push(v);
    }
    KernelBasis {
        ambient: cols,
        vectors,
    }
}

/// Basis of `{ v : v * m = 0 }`.
pub fn left_kernel(m: &ExactMatrix) -> KernelBasis {
    right_kernel(&m.transpose())
}

/// `dim(rowspace(a) ∩ leftker(b))`, computed as `rank(a) - rank(a * b)`.
pub fn intersection_dim(a: &ExactMatrix, b: &ExactMatrix) -> Result<usize> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "row space of a {}x{} matrix against left kernel of a {}x{} matrix",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let ab = a.mul(b)?;
    Ok(rank(a) - rank(&ab))
}

/// Whether two bases span the same subspace.
pub fn span_equal(u: &KernelBasis, v: &KernelBasis) -> Result<bool> {
    if u.ambient != v.ambient {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {}",
            u.ambient, v.ambient
        )));
    }
    let ru = rank(&u.as_matrix());
    let rv = rank(&v.as_matrix());
    if ru != rv {
        return Ok(false);
    }
    let mut stacked = u.vectors.clone();
    stacked.extend(v.vectors.iter().cloned());
    let joint = rank(&ExactMatrix::from_fn(stacked.len(), u.ambient, |i, j| {
        stacked[i][j].clone()
    }));
    Ok(joint == ru)
}

/// Rank of a list of rational vectors of common length `ambient`.
pub fn rank_of_vectors(ambient: usize, vectors: &[Vec<BigRational>]) -> usize {
    let rows: Vec<Vec<BigInt>> = vectors.iter().map(|v| clear_denominators(v)).collect();
    rank(&ExactMatrix::from_fn(rows.len(), ambient, |i, j| {
        rows[i][j].clone()
    }))
}

/// Whether `v` lies in the span of `basis`, by comparing ranks.
pub fn in_span(ambient: usize, basis: &[Vec<BigRational>], v: &[BigRational]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    let before = rank_of_vectors(ambient, basis);
    let mut with = basis.to_vec();
    with.push(v.to_vec());
    rank_of_vectors(ambient, &with) == before
}

/// Whether `v` lies in the row space of `m`.
pub fn in_row_space(m: &ExactMatrix, v: &[BigRational]) -> bool {
    let mut rows: Vec<Vec<BigInt>> = m.to_rows();
    let before = rank(m);
    rows.push(clear_denominators(v));
    rank(&ExactMatrix::from_fn(rows.len(), m.cols, |i, j| {
        rows[i][j].clone()
    })) == before
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_rows(rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&ExactMatrix::identity(4)), 4);
        assert_eq!(rank(&mat(&[vec![2, 4], vec![1, 2]])), 1);
        assert_eq!(rank(&ExactMatrix::zeros(3, 5)), 0);
        assert_eq!(rank(&ExactMatrix::zeros(0, 0)), 0);
        assert_eq!(
            rank(&mat(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]])),
            2
        );
    }

    #[test]
    fn right_kernel_examples() {
        let k = right_kernel(&ExactMatrix::zeros(3, 3));
        assert_eq!(
            k.vectors,
            vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])]
        );
        assert!(right_kernel(&ExactMatrix::identity(5)).is_empty());
        let k = right_kernel(&mat(&[vec![1, 1], vec![0, 0]]));
        assert_eq!(k.vectors, vec![ints(&[1, -1])]);
    }

    #[test]
    fn kernel_of_rank_two() {
        let m = mat(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let k = right_kernel(&m);
        assert_eq!(k.vectors, vec![ints(&[1, -2, 1])]);
        let k = left_kernel(&m);
        assert_eq!(k.vectors, vec![ints(&[1, -2, 1])]);
    }

    #[test]
    fn left_kernel_identity_is_empty() {
        assert!(left_kernel(&ExactMatrix::identity(3)).is_empty());
    }

    #[test]
    fn intersection_examples() {
        let i = ExactMatrix::identity(4);
        assert_eq!(intersection_dim(&i, &i).unwrap(), 0);
        assert_eq!(intersection_dim(&i, &ExactMatrix::zeros(4, 4)).unwrap(), 4);
        assert!(matches!(
            intersection_dim(&ExactMatrix::zeros(2, 3), &ExactMatrix::zeros(2, 2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn span_examples() {
        let e1 = KernelBasis {
            ambient: 2,
            vectors: vec![ints(&[1, 0])],
        };
        let two_e1 = KernelBasis {
            ambient: 2,
            vectors: vec![ints(&[2, 0])],
        };
        let e2 = KernelBasis {
            ambient: 2,
            vectors: vec![ints(&[0, 1])],
        };
        assert!(span_equal(&e1, &two_e1).unwrap());
        assert!(!span_equal(&e1, &e2).unwrap());
        assert!(span_equal(&KernelBasis::empty(3), &KernelBasis::empty(3)).unwrap());
        assert!(span_equal(&e1, &KernelBasis::empty(3)).is_err());
    }

    #[test]
    fn primitive_normalization() {
        let mut v = ints(&[0, -4, 6, 2]);
        make_primitive(&mut v);
        assert_eq!(v, ints(&[0, 2, -3, -1]));
        let r = [
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-1).into(), 3.into()),
        ];
        assert_eq!(primitive_from_rational(&r), ints(&[3, -2]));
    }

    #[test]
    fn membership() {
        let m = mat(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let q = |x: i64| BigRational::from_integer(x.into());
        assert!(in_row_space(&m, &[q(1), q(2), q(1)]));
        assert!(!in_row_space(&m, &[q(1), q(0), q(0)]));
        assert!(in_span(3, &[vec![q(1), q(0), q(0)]], &[q(0), q(0), q(0)]));
    }

    #[test]
    fn kernel_basis_json() {
        let k = KernelBasis {
            ambient: 2,
            vectors: vec![ints(&[1, -1])],
        };
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(s, r#"{"ambient":2,"vectors":[["1","-1"]]}"#);
        assert_eq!(serde_json::from_str::<KernelBasis>(&s).unwrap(), k);
    }
}
