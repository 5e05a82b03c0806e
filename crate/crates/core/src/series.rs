//! Truncated integer power series and the generating functions around
//! `1 / (1 - O(x) y + S(x) y^2)`.
//!
//! Bivariate series are vectors of univariate series indexed by the `y`-degree,
//! with the `x`-bound and `y`-bound kept separately.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::count_s;
use crate::linalg::rank;
use crate::matrices::{build_e, MatrixKind};
use crate::period::{injectivity_report, w_basis};
use crate::report::{Backing, ReportRecord};
use crate::store::{matrix_checksum, MatrixStore};

/// `sum_{k=0}^{bound} c_k x^k`, exact up to and including `x^bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(bound: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); bound + 1],
        }
    }

    pub fn one(bound: usize) -> Self {
        Self::monomial(bound, 0, BigInt::one())
    }

    pub fn monomial(bound: usize, k: usize, c: BigInt) -> Self {
        let mut s = Self::zero(bound);
        if k <= bound {
            s.coeffs[k] = c;
        }
        s
    }

    /// Takes coefficients `c_0, c_1, ...`, padding or truncating to `bound`.
    pub fn from_coeffs(bound: usize, coeffs: impl IntoIterator<Item = BigInt>) -> Self {
        let mut s = Self::zero(bound);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^k`; zero above the bound is not meaningful, so this panics there.
    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.bound());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `1 / self`, defined when the constant term is `±1`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(Error::InvalidParameter(
                "series inverse needs constant term +1 or -1".into(),
            ));
        }
        let n = self.bound();
        let mut inv = Self::zero(n);
        inv.coeffs[0] = c0.clone();
        for k in 1..=n {
            let s: BigInt = (1..=k).map(|i| &self.coeffs[i] * &inv.coeffs[k - i]).sum();
            inv.coeffs[k] = -(s * c0);
        }
        Ok(inv)
    }

    fn check_bounds(&self, other: &Self) {
        assert_eq!(
            self.bound(),
            other.bound(),
            "combining series with different truncation bounds"
        );
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: Self) -> TruncatedSeries {
        self.check_bounds(rhs);
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: Self) -> TruncatedSeries {
        self.check_bounds(rhs);
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: Self) -> TruncatedSeries {
        self.check_bounds(rhs);
        let n = self.bound();
        let mut out = TruncatedSeries::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let coeff = if k > 0 && c.is_one() {
                String::new()
            } else if k > 0 && (-c).is_one() {
                "-".to_string()
            } else {
                c.to_string()
            };
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{coeff}x")?,
                _ => write!(f, "{coeff}x^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(x^{})", self.bound() + 1)
    }
}

/// `1 / (1 - x^step)` truncated.
fn geometric(bound: usize, step: usize) -> TruncatedSeries {
    TruncatedSeries::from_coeffs(
        bound,
        (0..=bound).map(|k| BigInt::from(u8::from(k % step == 0))),
    )
}

fn shifted(s: &TruncatedSeries, by: usize) -> TruncatedSeries {
    let bound = s.bound();
    let mut out = TruncatedSeries::zero(bound);
    for k in by..=bound {
        out.coeffs[k] = s.coeffs[k - by].clone();
    }
    out
}

/// `O(x) = x^3 / (1 - x^2)`.
pub fn series_o(bound: usize) -> TruncatedSeries {
    shifted(&geometric(bound, 2), 3)
}

/// `E(x) = x^2 / (1 - x^2)`.
pub fn series_e(bound: usize) -> TruncatedSeries {
    shifted(&geometric(bound, 2), 2)
}

/// `S(x) = x^12 / ((1 - x^4)(1 - x^6))`, the cusp form dimensions.
pub fn series_s(bound: usize) -> TruncatedSeries {
    shifted(&(&geometric(bound, 4) * &geometric(bound, 6)), 12)
}

/// Coefficient of `y^r` in `sum_k (O(x) y - S(x) y^2)^k`, i.e.
/// `sum_{a + 2b = r} C(a + b, b) O^a (-S)^b`.
pub fn conjectured_rank_series(r: usize, bound: usize) -> TruncatedSeries {
    let o = series_o(bound);
    let s = series_s(bound);
    let mut acc = TruncatedSeries::zero(bound);
    for b in 0..=r / 2 {
        let a = r - 2 * b;
        let mut term = &o.pow(a) * &s.pow(b);
        let mut c = binomial(BigInt::from(a + b), BigInt::from(b));
        if b % 2 == 1 {
            c = -c;
        }
        term = term.scale(&c);
        acc = &acc + &term;
    }
    acc
}

/// `T_0, ..., T_rmax` from `T_r = O T_{r-1} - S T_{r-2} + O^{r-2} S` with
/// `T_0 = T_1 = 0`.
pub fn recursion_t_all(rmax: usize, bound: usize) -> Vec<TruncatedSeries> {
    let o = series_o(bound);
    let s = series_s(bound);
    let mut t = vec![TruncatedSeries::zero(bound); 2.min(rmax + 1)];
    for r in 2..=rmax {
        let next = &(&(&o * &t[r - 1]) - &(&s * &t[r - 2])) + &(&o.pow(r - 2) * &s);
        t.push(next);
    }
    t
}

/// `T_r`, the predicted `sum_N dim ker C(N, r) x^N`.
pub fn recursion_t(r: usize, bound: usize) -> TruncatedSeries {
    recursion_t_all(r, bound).pop().expect("at least T_0")
}

/// `B_2, ..., B_rmax` (index `r - 2`) from
/// `B_r = O^{r-2} S - sum_{j=2}^{r-2} O^{r-j-2} S B_j` with `B_2 = S`.
pub fn recursion_b_all(rmax: usize, bound: usize) -> Vec<TruncatedSeries> {
    let o = series_o(bound);
    let s = series_s(bound);
    let mut b: Vec<TruncatedSeries> = Vec::new();
    for r in 2..=rmax {
        let mut next = &o.pow(r - 2) * &s;
        for j in 2..=r.saturating_sub(2) {
            let term = &(&o.pow(r - j - 2) * &s) * &b[j - 2];
            next = &next - &term;
        }
        b.push(next);
    }
    b
}

/// `B_r` for `r >= 2`.
pub fn recursion_b(r: usize, bound: usize) -> Result<TruncatedSeries> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "B_r needs r >= 2, got {r}"
        )));
    }
    Ok(recursion_b_all(r, bound).pop().expect("r >= 2"))
}

/// A power series in `x` and `y`, truncated separately in each variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateSeries {
    /// `by_y[r]` is the coefficient of `y^r`.
    pub by_y: Vec<TruncatedSeries>,
}

impl BivariateSeries {
    pub fn zero(x_bound: usize, y_bound: usize) -> Self {
        Self {
            by_y: vec![TruncatedSeries::zero(x_bound); y_bound + 1],
        }
    }

    pub fn y_bound(&self) -> usize {
        self.by_y.len() - 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        let yb = self.y_bound().min(other.y_bound());
        let xb = self.by_y[0].bound();
        let mut out = Self::zero(xb, yb);
        for (i, a) in self.by_y.iter().enumerate().take(yb + 1) {
            for (j, b) in other.by_y.iter().enumerate().take(yb + 1 - i) {
                out.by_y[i + j] = &out.by_y[i + j] + &(a * b);
            }
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.by_y.iter().enumerate().all(|(r, s)| {
            s.coeffs().iter().enumerate().all(|(k, c)| {
                if r == 0 && k == 0 {
                    c.is_one()
                } else {
                    c.is_zero()
                }
            })
        })
    }
}

/// `R_r = O^r - T_r` for `r = 0..=rmax`.
pub fn r_series(rmax: usize, bound: usize) -> Vec<TruncatedSeries> {
    let o = series_o(bound);
    recursion_t_all(rmax, bound)
        .iter()
        .enumerate()
        .map(|(r, t)| &o.pow(r) - t)
        .collect()
}

/// Checks `(1 - O y + S y^2) * sum_r R_r y^r == 1` up to `x^x_bound`, `y^y_bound`.
pub fn verify_series_identity(x_bound: usize, y_bound: usize) -> Result<ReportRecord> {
    let o = series_o(x_bound);
    let s = series_s(x_bound);
    let mut denom = BivariateSeries::zero(x_bound, y_bound);
    denom.by_y[0] = TruncatedSeries::one(x_bound);
    if y_bound >= 1 {
        denom.by_y[1] = -&o;
    }
    if y_bound >= 2 {
        denom.by_y[2] = s;
    }
    let sum = BivariateSeries {
        by_y: r_series(y_bound, x_bound),
    };
    let product = denom.mul(&sum);
    if !product.is_one() {
        let (r, k) = product
            .by_y
            .iter()
            .enumerate()
            .find_map(|(r, s)| {
                s.coeffs()
                    .iter()
                    .enumerate()
                    .find(|&(k, c)| {
                        if r == 0 && k == 0 {
                            !c.is_one()
                        } else {
                            !c.is_zero()
                        }
                    })
                    .map(|(k, _)| (r, k))
            })
            .expect("some coefficient is off");
        return Err(Error::IdentityViolation(format!(
            "coefficient of x^{k} y^{r} is {}",
            product.by_y[r].coeff(k)
        )));
    }
    Ok(ReportRecord::new(
        "series-identity",
        x_bound as u32,
        y_bound,
        "1",
        "1",
        true,
        Backing::Theorem,
    ))
}

/// Known lower bounds on `sum_N dim ker C(N, r) x^N`, under injectivity:
/// `S`, `2 O S`, `3 O^2 S - S^2`, `4 O^3 S - 3 O S^2` for `r = 2..=5`.
pub fn kernel_lower_bound(r: usize, bound: usize) -> Option<TruncatedSeries> {
    let o = series_o(bound);
    let s = series_s(bound);
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let four = BigInt::from(4);
    match r {
        2 => Some(s),
        3 => Some((&o * &s).scale(&two)),
        4 => Some(&(&o.pow(2) * &s).scale(&three) - &s.pow(2)),
        5 => Some(&(&o.pow(3) * &s).scale(&four) - &(&o * &s.pow(2)).scale(&three)),
        _ => None,
    }
}

/// `dim W(N, r)` against the `x^N` coefficient of `O^(r-2) S`.
pub fn verify_w_dimension(n: u32, r: usize) -> Result<ReportRecord> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "W(N, r) needs r >= 2, got {r}"
        )));
    }
    let bound = n as usize;
    let expected = (&series_o(bound).pow(r - 2) * &series_s(bound))
        .coeff(bound)
        .clone();
    let dim = w_basis(n, r)?.dim();
    ReportRecord::new(
        "w-dimension",
        n,
        r,
        &expected,
        dim,
        BigInt::from(dim) == expected,
        Backing::Theorem,
    )
    .into_result()
}

/// `dim ker^T E(N, 2)` against the `x^N` coefficient of `S`.
pub fn verify_cusp_dimension(n: u32) -> Result<ReportRecord> {
    let e = build_e(n, 2);
    let dim = e.rows() - rank(&e);
    let expected = series_s(n as usize).coeff(n as usize).clone();
    ReportRecord::new(
        "cusp-dimension",
        n,
        2,
        &expected,
        dim,
        BigInt::from(dim) == expected,
        Backing::Theorem,
    )
    .into_result()
}

/// Outcome of one `(N, r)` comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareStatus {
    Match,
    Mismatch,
    NotComputed,
}

impl fmt::Display for CompareStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompareStatus::Match => "match",
            CompareStatus::Mismatch => "mismatch",
            CompareStatus::NotComputed => "not-computed",
        })
    }
}

/// One row of the dimension table. `rank` and `dim_ker` are `None` when the
/// matrix exceeded the size budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRow {
    #[serde(rename = "N")]
    pub n: u32,
    pub r: usize,
    pub size: u64,
    pub rank: Option<usize>,
    pub dim_ker: Option<usize>,
    #[serde(with = "bigint_string")]
    pub conjectured: BigInt,
    pub status: CompareStatus,
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ComparisonTable {
    pub rows: Vec<RankRow>,
    /// One record per computed row, plus lower-bound and `r = 2` checks.
    pub records: Vec<ReportRecord>,
}

impl ComparisonTable {
    pub fn row(&self, n: u32, r: usize) -> Option<&RankRow> {
        self.rows.iter().find(|row| row.n == n && row.r == r)
    }

    /// CSV with header `N,r,size,rank,dim_ker,conjectured_rank,status`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "N",
            "r",
            "size",
            "rank",
            "dim_ker",
            "conjectured_rank",
            "status",
        ])?;
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        for row in &self.rows {
            w.write_record([
                row.n.to_string(),
                row.r.to_string(),
                row.size.to_string(),
                opt(row.rank),
                opt(row.dim_ker),
                row.conjectured.to_string(),
                row.status.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Default cap on `|S(N, r)|` for [`compare_rank_to_conjecture`].
pub const DEFAULT_SIZE_BUDGET: u64 = 1500;

/// Computes `rank C(N, r)` for `1 <= N <= nmax`, `1 <= r <= rmax` and compares
/// with the `y^r` coefficient of `1 / (1 - O y + S y^2)`.
///
/// Mismatches are findings. Two proved statements are checked on the side:
/// `rank C(N, 2) = |S(N, 2)| - dim S_N`, and `dim ker C(N, r) >= ` the known
/// lower bound for `3 <= r <= 5`. A failed lower bound only counts as a
/// violation when Tasaka injectivity was observed at every `(k, r')` with
/// `k <= N`, `3 <= r' <= r`; otherwise it is a finding.
pub fn compare_rank_to_conjecture(
    nmax: u32,
    rmax: usize,
    budget: u64,
    store: &MatrixStore,
) -> Result<ComparisonTable> {
    let bound = nmax as usize;
    let conj: Vec<TruncatedSeries> = (0..=rmax)
        .map(|r| conjectured_rank_series(r, bound))
        .collect();
    let lower: Vec<Option<TruncatedSeries>> =
        (0..=rmax).map(|r| kernel_lower_bound(r, bound)).collect();
    let s = series_s(bound);

    let cells: Vec<(u32, usize)> = (1..=rmax)
        .flat_map(|r| (1..=nmax).map(move |n| (n, r)))
        .collect();
    let computed: Vec<Result<(RankRow, Vec<ReportRecord>)>> = cells
        .par_iter()
        .map(|&(n, r)| compare_cell(n, r, budget, store, &conj[r], lower[r].as_ref(), &s))
        .collect();

    let mut table = ComparisonTable::default();
    for cell in computed {
        let (row, records) = cell?;
        table.rows.push(row);
        table.records.extend(records);
    }
    table.rows.sort_by_key(|row| (row.r, row.n));
    Ok(table)
}

fn compare_cell(
    n: u32,
    r: usize,
    budget: u64,
    store: &MatrixStore,
    conj: &TruncatedSeries,
    lower: Option<&TruncatedSeries>,
    s: &TruncatedSeries,
) -> Result<(RankRow, Vec<ReportRecord>)> {
    let size = count_s(n, r);
    let conjectured = conj.coeff(n as usize).clone();
    let mut row = RankRow {
        n,
        r,
        size,
        rank: None,
        dim_ker: None,
        conjectured,
        status: CompareStatus::NotComputed,
    };
    if size > budget {
        return Ok((row, Vec::new()));
    }

    let kind = MatrixKind::c(n, r);
    let c = store.get(&kind)?;
    let rk = rank(&c);
    let ker = c.rows() - rk;
    row.rank = Some(rk);
    row.dim_ker = Some(ker);
    let matches = BigInt::from(rk) == row.conjectured;
    row.status = if matches {
        CompareStatus::Match
    } else {
        CompareStatus::Mismatch
    };

    let provenance = || {
        format!(
            "{kind}, {}x{}, sha256 {}",
            c.rows(),
            c.cols(),
            matrix_checksum(&kind, &c)
        )
    };
    let mut records = Vec::new();
    let mut rec = ReportRecord::new(
        "rank-vs-conjecture",
        n,
        r,
        &row.conjectured,
        rk,
        matches,
        Backing::Conjecture,
    );
    if !matches {
        rec = rec.with_detail(provenance());
    }
    records.push(rec);

    if r == 2 {
        let expected = BigInt::from(size) - s.coeff(n as usize);
        let ok = expected == BigInt::from(rk);
        let mut rec =
            ReportRecord::new("rank-depth-two", n, r, &expected, rk, ok, Backing::Theorem);
        if !ok {
            rec = rec.with_detail(provenance());
        }
        records.push(rec);
    }

    if let Some(lb) = lower {
        let bound = lb.coeff(n as usize);
        let ok = BigInt::from(ker) >= *bound;
        let backing = if ok || injective_up_to(n, r)? {
            Backing::Theorem
        } else {
            Backing::Conjecture
        };
        let mut rec = ReportRecord::new(
            "kernel-lower-bound",
            n,
            r,
            format!(">= {bound}"),
            ker,
            ok,
            backing,
        );
        if !ok {
            rec = rec.with_detail(provenance());
        }
        records.push(rec);
    }
    Ok((row, records))
}

fn injective_up_to(n: u32, r: usize) -> Result<bool> {
    for depth in 3..=r {
        for k in 1..=n {
            if !injectivity_report(k, depth)?.injective() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn closed_forms() {
        let o = series_o(9);
        assert_eq!(o.coeffs(), &ints(&[0, 0, 0, 1, 0, 1, 0, 1, 0, 1])[..]);
        let e = series_e(6);
        assert_eq!(e.coeffs(), &ints(&[0, 0, 1, 0, 1, 0, 1])[..]);
        let s = series_s(28);
        let expect = [
            (12, 1),
            (14, 0),
            (16, 1),
            (18, 1),
            (20, 1),
            (22, 1),
            (24, 2),
            (26, 1),
            (28, 2),
        ];
        for (k, c) in expect {
            assert_eq!(s.coeff(k), &BigInt::from(c), "x^{k}");
        }
        for k in 0..12 {
            assert!(s.coeff(k).is_zero());
        }
    }

    #[test]
    fn products_truncate() {
        let x = TruncatedSeries::monomial(4, 3, BigInt::one());
        assert!((&x * &x).is_zero());
        let g = geometric(10, 1);
        let one_minus_x = TruncatedSeries::from_coeffs(10, ints(&[1, -1]));
        assert_eq!(&g * &one_minus_x, TruncatedSeries::one(10));
        assert_eq!(one_minus_x.inverse().unwrap(), g);
        assert!(series_o(5).inverse().is_err());
    }

    #[test]
    fn conjectured_small_depths() {
        let b = 40;
        let o = series_o(b);
        let s = series_s(b);
        assert_eq!(conjectured_rank_series(0, b), TruncatedSeries::one(b));
        assert_eq!(conjectured_rank_series(1, b), o);
        assert_eq!(conjectured_rank_series(2, b), &o.pow(2) - &s);
        let r3 = &o.pow(3) - &(&o * &s).scale(&BigInt::from(2));
        assert_eq!(conjectured_rank_series(3, b), r3);
        assert_eq!(r3.coeff(15), &BigInt::from(8));
        let r4 = &(&o.pow(4) - &(&o.pow(2) * &s).scale(&BigInt::from(3))) + &s.pow(2);
        assert_eq!(conjectured_rank_series(4, b), r4);
        assert_eq!(conjectured_rank_series(2, b).coeff(12), &BigInt::from(3));
    }

    #[test]
    fn t_recursion_examples() {
        let b = 40;
        let o = series_o(b);
        let s = series_s(b);
        assert_eq!(recursion_t(2, b), s);
        assert_eq!(recursion_t(3, b), (&o * &s).scale(&BigInt::from(2)));
        let t5 =
            &(&o.pow(3) * &s).scale(&BigInt::from(4)) - &(&o * &s.pow(2)).scale(&BigInt::from(3));
        assert_eq!(recursion_t(5, b), t5);
        assert!(recursion_t(0, b).is_zero() && recursion_t(1, b).is_zero());
    }

    #[test]
    fn b_recursion_examples() {
        let b = 40;
        let o = series_o(b);
        let s = series_s(b);
        assert_eq!(recursion_b(2, b).unwrap(), s);
        assert_eq!(recursion_b(3, b).unwrap(), &o * &s);
        assert_eq!(recursion_b(4, b).unwrap(), &(&o.pow(2) * &s) - &s.pow(2));
        assert!(recursion_b(1, b).is_err());
        let t = recursion_t_all(6, b);
        let bs = recursion_b_all(6, b);
        for r in 2..=6 {
            assert_eq!(t[r], &(&o * &t[r - 1]) + &bs[r - 2], "r = {r}");
        }
    }

    #[test]
    fn lower_bounds_match_t() {
        for r in 2..=5 {
            assert_eq!(kernel_lower_bound(r, 40).unwrap(), recursion_t(r, 40));
        }
        assert!(kernel_lower_bound(6, 40).is_none());
    }

    #[test]
    fn series_identity() {
        assert!(verify_series_identity(30, 6).unwrap().is_pass());
        assert!(verify_series_identity(35, 6).unwrap().is_pass());
        let r = r_series(1, 10);
        assert_eq!(r[0], TruncatedSeries::one(10));
        assert_eq!(r[1], series_o(10));
    }

    #[test]
    fn display() {
        assert_eq!(series_o(6).to_string(), "x^3 + x^5 + O(x^7)");
        assert_eq!(
            recursion_t(3, 19).to_string(),
            "2x^15 + 2x^17 + 4x^19 + O(x^20)"
        );
        assert_eq!((-&series_e(2)).to_string(), "-x^2 + O(x^3)");
        assert_eq!(TruncatedSeries::zero(2).to_string(), "0 + O(x^3)");
    }

    #[test]
    fn dimension_formulas() {
        for (n, r, d) in [(15, 3, 1), (18, 4, 1), (12, 2, 1), (24, 4, 7)] {
            assert_eq!(verify_w_dimension(n, r).unwrap().observed, d.to_string());
        }
        for n in [12, 14, 24, 28] {
            assert!(verify_cusp_dimension(n).unwrap().is_pass());
        }
        assert_eq!(verify_cusp_dimension(24).unwrap().observed, "2");
    }

    #[test]
    fn counts_match_o_powers() {
        let b = 40;
        let o = series_o(b);
        for r in 0..=5 {
            let p = o.pow(r);
            for n in 0..=b as u32 {
                assert_eq!(
                    p.coeff(n as usize),
                    &BigInt::from(count_s(n, r)),
                    "N={n} r={r}"
                );
            }
        }
    }

    #[test]
    fn conjecture_satisfies_recursion() {
        let b = 40;
        let o = series_o(b);
        let s = series_s(b);
        let c: Vec<_> = (0..=6).map(|r| conjectured_rank_series(r, b)).collect();
        let t = recursion_t_all(6, b);
        for r in 2..=6 {
            assert_eq!(c[r], &(&o * &c[r - 1]) - &(&s * &c[r - 2]));
        }
        for r in 0..=6 {
            assert_eq!(t[r], &o.pow(r) - &c[r]);
        }
    }

    #[test]
    fn small_comparison_table() {
        let store = MatrixStore::in_memory();
        let table = compare_rank_to_conjecture(16, 3, DEFAULT_SIZE_BUDGET, &store).unwrap();
        let row = table.row(15, 3).unwrap();
        assert_eq!((row.size, row.rank, row.dim_ker), (10, Some(8), Some(2)));
        assert_eq!(row.status, CompareStatus::Match);
        let row = table.row(12, 2).unwrap();
        assert_eq!((row.size, row.rank, row.dim_ker), (4, Some(3), Some(1)));
        let row = table.row(13, 2).unwrap();
        assert_eq!(
            (row.size, row.rank, &row.conjectured),
            (0, Some(0), &BigInt::zero())
        );
        assert!(table.records.iter().all(|r| r.is_pass()));
        assert_eq!(table.rows.len(), 16 * 3);

        let mut csv = Vec::new();
        table.write_csv(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.starts_with("N,r,size,rank,dim_ker,conjectured_rank,status\n"));
        assert!(csv.contains("\n15,3,10,8,2,8,match\n"));
        assert!(csv.contains("\n12,2,4,3,1,3,match\n"));

        let capped = compare_rank_to_conjecture(15, 3, 5, &store).unwrap();
        let row = capped.row(15, 3).unwrap();
        assert_eq!((row.rank, row.status), (None, CompareStatus::NotComputed));
    }

    #[test]
    fn empty_table_is_header_only() {
        let table =
            compare_rank_to_conjecture(0, 0, DEFAULT_SIZE_BUDGET, &MatrixStore::in_memory())
                .unwrap();
        let mut csv = Vec::new();
        table.write_csv(&mut csv).unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "N,r,size,rank,dim_ker,conjectured_rank,status\n"
        );
    }
}
