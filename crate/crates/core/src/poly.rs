//! Polynomials in the Ihara-action picture.
//!
//! [`GeneralPolynomial`] is a sparse multivariate polynomial with rational
//! coefficients and arbitrary exponents. [`EvenPolynomial`] is an element of the
//! space `V(N, r)` spanned by the monomials `x_1^(m_1-1) ... x_r^(m_r-1)` with
//! `(m_1, ..., m_r)` totally odd; it is keyed by the composition itself.
//! [`restricted_even_part`] is the only way from the former to the latter.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{enumerate_s, IndexTable, OddComposition};

pub type Exponents = Vec<u32>;

/// Sparse polynomial in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralPolynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl GeneralPolynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], BigRational::one())
    }

    pub fn monomial(exps: Exponents, c: BigRational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// `x^e` in one variable.
    pub fn power(e: u32) -> Self {
        Self::monomial(vec![e], BigRational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, exps: Exponents, c: BigRational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Total degree when every term shares it; `None` for zero or mixed degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.nvars, other.nvars,
            "multiplying polynomials of different arity"
        );
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Substitutes a linear form for every variable. `slots[k]` is what the
    /// `k`-th variable of `self` becomes, as a polynomial in `target_vars`
    /// variables. Each monomial is expanded binomially slot by slot.
    pub fn substitute(&self, slots: &[Slot], target_vars: usize) -> Result<Self> {
        if slots.len() != self.nvars {
            return Err(Error::ArityMismatch(format!(
                "{} substitution slots for a polynomial in {} variables",
                slots.len(),
                self.nvars
            )));
        }
        let mut out = Self::zero(target_vars);
        for (exps, c) in &self.terms {
            let mut partial: Vec<(Exponents, BigRational)> =
                vec![(vec![0; target_vars], c.clone())];
            for (slot, &e) in slots.iter().zip(exps) {
                if e == 0 {
                    continue;
                }
                partial = match *slot {
                    Slot::Var(a) => partial
                        .into_iter()
                        .map(|(mut ex, c)| {
                            ex[a] += e;
                            (ex, c)
                        })
                        .collect(),
                    Slot::Diff { plus, minus } => {
                        // (x_plus - x_minus)^e = sum_k C(e, k) x_plus^k (-x_minus)^(e-k)
                        let mut next = Vec::with_capacity(partial.len() * (e as usize + 1));
                        for (ex, c) in &partial {
                            for k in 0..=e {
                                let mut b = BigRational::from_integer(binomial(
                                    BigInt::from(e),
                                    BigInt::from(k),
                                ));
                                if (e - k) % 2 == 1 {
                                    b = -b;
                                }
                                let mut ex = ex.clone();
                                ex[plus] += k;
                                ex[minus] += e - k;
                                next.push((ex, c * b));
                            }
                        }
                        next
                    }
                };
            }
            for (ex, c) in partial {
                out.add_term(ex, c);
            }
        }
        Ok(out)
    }
}

/// Image of one variable under a linear substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// The target variable with this zero-based index.
    Var(usize),
    /// `x_plus - x_minus`, zero-based.
    Diff { plus: usize, minus: usize },
}

/// An element of `V(N, r)`: a combination of restricted totally even monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenPolynomial {
    weight: u32,
    depth: usize,
    coeffs: BTreeMap<OddComposition, BigRational>,
}

impl EvenPolynomial {
    pub fn zero(weight: u32, depth: usize) -> Self {
        Self {
            weight,
            depth,
            coeffs: BTreeMap::new(),
        }
    }

    /// The monomial `x_1^(m_1-1) ... x_r^(m_r-1)`.
    pub fn monomial(m: &OddComposition, c: BigRational) -> Self {
        let mut p = Self::zero(m.weight(), m.depth());
        if !c.is_zero() {
            p.coeffs.insert(m.clone(), c);
        }
        p
    }

    pub fn from_terms(
        weight: u32,
        depth: usize,
        terms: impl IntoIterator<Item = (OddComposition, BigRational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(weight, depth);
        for (m, c) in terms {
            if m.weight() != weight || m.depth() != depth {
                return Err(Error::NotAMember(m.into_parts(), weight, depth));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Terms in lex-decreasing order of their index.
    pub fn terms(&self) -> impl Iterator<Item = (&OddComposition, &BigRational)> {
        self.coeffs.iter().rev()
    }

    pub fn coefficient(&self, m: &OddComposition) -> BigRational {
        self.coeffs
            .get(m)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: OddComposition, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same_space(&self, other: &Self) {
        assert!(
            self.weight == other.weight && self.depth == other.depth,
            "polynomials from V({}, {}) and V({}, {})",
            self.weight,
            self.depth,
            other.weight,
            other.depth
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_space(other);
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero(self.weight, self.depth);
        }
        Self {
            weight: self.weight,
            depth: self.depth,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| (m.clone(), c * k))
                .collect(),
        }
    }

    /// Product with a monomial in further variables: `self(x_1..x_r) * x_{r+1}^(a_1-1) ...`.
    pub fn times_monomial(&self, tail: &OddComposition) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(m, c)| {
                let mut parts = m.parts().to_vec();
                parts.extend_from_slice(tail.parts());
                (OddComposition::from_parts_unchecked(parts), c.clone())
            })
            .collect();
        Self {
            weight: self.weight + tail.weight(),
            depth: self.depth + tail.depth(),
            coeffs,
        }
    }

    pub fn to_general(&self) -> GeneralPolynomial {
        let mut p = GeneralPolynomial::zero(self.depth);
        for (m, c) in &self.coeffs {
            p.add_term(m.parts().iter().map(|&k| k - 1).collect(), c.clone());
        }
        p
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    m: Vec<u32>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct EvenPolynomialJson {
    #[serde(rename = "N")]
    n: u32,
    r: usize,
    terms: Vec<TermJson>,
}

pub(crate) fn rational_to_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

impl Serialize for EvenPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EvenPolynomialJson {
            n: self.weight,
            r: self.depth,
            terms: self
                .terms()
                .map(|(m, c)| TermJson {
                    m: m.parts().to_vec(),
                    c: rational_to_string(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EvenPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = EvenPolynomialJson::deserialize(d)?;
        let terms = raw
            .terms
            .into_iter()
            .map(|t| {
                let m = OddComposition::new(t.m).map_err(D::Error::custom)?;
                let c = parse_rational(&t.c).map_err(D::Error::custom)?;
                Ok((m, c))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        EvenPolynomial::from_terms(raw.n, raw.r, terms).map_err(D::Error::custom)
    }
}

/// `f ∘ g` for `f` in one variable and `g` in `r - 1` variables:
///
/// `f(x_1) g(x_2..x_r) + sum_i [ f(x_{i+1} - x_i) g(.., x̂_{i+1}, ..)
///   - (-1)^deg f f(x_i - x_{i+1}) g(.., x̂_i, ..) ]`.
pub fn ihara_circ(f: &GeneralPolynomial, g: &GeneralPolynomial) -> Result<GeneralPolynomial> {
    if f.nvars() != 1 {
        return Err(Error::ArityMismatch(format!(
            "f must be univariate, got {} variables",
            f.nvars()
        )));
    }
    let r = g.nvars() + 1;
    if f.is_zero() || g.is_zero() {
        return Ok(GeneralPolynomial::zero(r));
    }
    let deg_f = f
        .homogeneous_degree()
        .ok_or_else(|| Error::InvalidParameter("f must be homogeneous".into()))?;

    let f_first = f.substitute(&[Slot::Var(0)], r)?;
    let g_tail: Vec<Slot> = (1..r).map(Slot::Var).collect();
    let mut out = f_first.mul(&g.substitute(&g_tail, r)?);

    let sign = if deg_f % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    for i in 0..r - 1 {
        // zero-based: x_{i+1} - x_i with x_{i+1} omitted from g, and
        // x_i - x_{i+1} with x_i omitted.
        let skip_next: Vec<Slot> = (0..r).filter(|&k| k != i + 1).map(Slot::Var).collect();
        let skip_this: Vec<Slot> = (0..r).filter(|&k| k != i).map(Slot::Var).collect();
        let a = f
            .substitute(
                &[Slot::Diff {
                    plus: i + 1,
                    minus: i,
                }],
                r,
            )?
            .mul(&g.substitute(&skip_next, r)?);
        let b = f
            .substitute(
                &[Slot::Diff {
                    plus: i,
                    minus: i + 1,
                }],
                r,
            )?
            .mul(&g.substitute(&skip_this, r)?);
        out = out.add(&a).sub(&b.scale(&sign));
    }
    Ok(out)
}

fn monomial_pair(m: &[u32]) -> Result<(GeneralPolynomial, GeneralPolynomial)> {
    let (first, rest) = m
        .split_first()
        .ok_or_else(|| Error::InvalidParameter("empty index".into()))?;
    let f = GeneralPolynomial::power(first - 1);
    let g = GeneralPolynomial::monomial(rest.iter().map(|k| k - 1).collect(), BigRational::one());
    Ok((f, g))
}

/// The full expansion `x_1^(m_1-1) ∘ (x_1^(m_2-1) ... x_{r-1}^(m_r-1))`.
pub fn ihara_of_monomial(m: &OddComposition) -> Result<GeneralPolynomial> {
    let (f, g) = monomial_pair(m.parts())?;
    ihara_circ(&f, &g)
}

/// `e(m; n)` read off the full Ihara expansion.
pub fn e_coefficient_expansion(m: &OddComposition, n: &[u32]) -> Result<BigInt> {
    check_n(m, n)?;
    if m.weight() != n.iter().sum::<u32>() {
        return Ok(BigInt::zero());
    }
    let p = ihara_of_monomial(m)?;
    let exps: Vec<u32> = n.iter().map(|k| k - 1).collect();
    let c = p.coefficient(&exps);
    debug_assert!(c.is_integer());
    Ok(c.to_integer())
}

fn check_n(m: &OddComposition, n: &[u32]) -> Result<()> {
    if n.len() != m.depth() {
        return Err(Error::ArityMismatch(format!(
            "m has depth {}, n has {} entries",
            m.depth(),
            n.len()
        )));
    }
    if n.contains(&0) {
        return Err(Error::InvalidParameter(format!(
            "n entries must be positive: {n:?}"
        )));
    }
    Ok(())
}

fn signed_binomial(sign_exp: i64, top: u32, bottom: u32) -> BigInt {
    if bottom > top {
        return BigInt::zero();
    }
    let b = binomial(BigInt::from(top), BigInt::from(bottom));
    if sign_exp.rem_euclid(2) == 1 {
        -b
    } else {
        b
    }
}

/// `e(m; n)` via the Kronecker-delta / binomial closed form.
pub fn e_coefficient_formula(m: &OddComposition, n: &[u32]) -> Result<BigInt> {
    check_n(m, n)?;
    Ok(e_formula_raw(m.parts(), n))
}

/// The closed form on raw slices. Both slices have the same length `r` and
/// positive entries; returns 0 on a weight mismatch.
pub(crate) fn e_formula_raw(m: &[u32], n: &[u32]) -> BigInt {
    let r = m.len();
    if m.iter().sum::<u32>() != n.iter().sum::<u32>() {
        return BigInt::zero();
    }
    let mut total = BigInt::from(u8::from(m == n));
    let m1 = m[0];
    // i runs 1..r-1 one-based; zero-based i0 = i - 1.
    for i0 in 0..r - 1 {
        // Surviving m: m_2..m_i, m_{i+2}..m_r. Surviving n: n_1..n_{i-1}, n_{i+2}..n_r.
        if m[1..=i0] != n[..i0] || m[i0 + 2..] != n[i0 + 2..] {
            continue;
        }
        let ni = n[i0];
        let nnext = n[i0 + 1];
        total += signed_binomial(i64::from(ni), m1 - 1, ni - 1);
        total += signed_binomial(i64::from(m1) - i64::from(nnext), m1 - 1, nnext - 1);
    }
    total
}

/// Coefficient vector of `p` over `S(N, r)` in lex-decreasing order.
pub fn pi(p: &EvenPolynomial) -> Vec<BigRational> {
    pi_over(p, &enumerate_s(p.weight, p.depth))
}

pub fn pi_over(p: &EvenPolynomial, table: &IndexTable) -> Vec<BigRational> {
    debug_assert_eq!((table.weight(), table.depth()), (p.weight, p.depth));
    table.iter().map(|m| p.coefficient(m)).collect()
}

pub fn pi_inverse(table: &IndexTable, v: &[BigRational]) -> Result<EvenPolynomial> {
    if v.len() != table.len() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} over S({}, {}) of size {}",
            v.len(),
            table.weight(),
            table.depth(),
            table.len()
        )));
    }
    EvenPolynomial::from_terms(
        table.weight(),
        table.depth(),
        table.iter().cloned().zip(v.iter().cloned()),
    )
}

/// Keeps the monomials whose exponents are all even and at least 2.
pub fn restricted_even_part(p: &GeneralPolynomial, weight: u32) -> EvenPolynomial {
    let depth = p.nvars();
    let mut out = EvenPolynomial::zero(weight, depth);
    for (exps, c) in &p.terms {
        if exps.iter().all(|&e| e >= 2 && e % 2 == 0)
            && exps.iter().sum::<u32>() + depth as u32 == weight
        {
            let parts = exps.iter().map(|e| e + 1).collect();
            out.coeffs
                .insert(OddComposition::from_parts_unchecked(parts), c.clone());
        }
    }
    out
}

/// The endomorphism `φ_j` of `V(N, r)`.
///
/// Restricted totally even part of `q(x) + sum_{i=r-j+1}^{r-1} [ q(x_1..x_{r-j},
/// x_{i+1} - x_i, x_{r-j+1}.., x̂_{i+1}, ..) - q(.., x_{i+1} - x_i, .., x̂_i, ..) ]`.
pub fn phi_j(q: &EvenPolynomial, j: usize) -> Result<EvenPolynomial> {
    let r = q.depth;
    if j < 1 || j > r {
        return Err(Error::JOutOfRange { j, r, lo: 1, hi: r });
    }
    if j == 1 || q.is_zero() {
        return Ok(q.clone());
    }
    let g = q.to_general();
    let mut acc = g.clone();
    let head = r - j;
    // One-based i in r-j+1..=r-1 is zero-based i0 = i - 1 in head..r-1.
    for i0 in head..r - 1 {
        let diff = Slot::Diff {
            plus: i0 + 1,
            minus: i0,
        };
        let tail_without = |skip: usize| -> Vec<Slot> {
            (0..head)
                .map(Slot::Var)
                .chain(std::iter::once(diff))
                .chain((head..r).filter(|&k| k != skip).map(Slot::Var))
                .collect()
        };
        let a = g.substitute(&tail_without(i0 + 1), r)?;
        let b = g.substitute(&tail_without(i0), r)?;
        acc = acc.add(&a).sub(&b);
    }
    Ok(restricted_even_part(&acc, q.weight))
}

/// Whether `p` satisfies `P(x_1, x_2, ..) = P(x_2 - x_1, x_2, ..) - P(x_2 - x_1, x_1, ..)`.
pub fn satisfies_period_relation(p: &EvenPolynomial) -> Result<bool> {
    let r = p.depth;
    if r < 2 {
        return Err(Error::InvalidParameter(
            "period relation needs depth >= 2".into(),
        ));
    }
    Ok(period_defect(&p.to_general())?.is_zero())
}

/// `P(x_1, x_2, ..) - P(x_2 - x_1, x_2, ..) + P(x_2 - x_1, x_1, ..)`.
pub(crate) fn period_defect(p: &GeneralPolynomial) -> Result<GeneralPolynomial> {
    let r = p.nvars();
    let d = Slot::Diff { plus: 1, minus: 0 };
    let rest = (2..r).map(Slot::Var);
    let s1: Vec<Slot> = [d, Slot::Var(1)].into_iter().chain(rest.clone()).collect();
    let s2: Vec<Slot> = [d, Slot::Var(0)].into_iter().chain(rest).collect();
    Ok(p.sub(&p.substitute(&s1, r)?).add(&p.substitute(&s2, r)?))
}

/// Sum of `|c|` over terms; a cheap size measure for tests and reports.
pub fn l1_norm(p: &EvenPolynomial) -> BigRational {
    p.coeffs
        .values()
        .map(Signed::abs)
        .fold(BigRational::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn oc(p: &[u32]) -> OddComposition {
        OddComposition::new(p.to_vec()).unwrap()
    }

    fn gp(nvars: usize, terms: &[(&[u32], i64)]) -> GeneralPolynomial {
        let mut p = GeneralPolynomial::zero(nvars);
        for (e, c) in terms {
            p.add_term(e.to_vec(), q(*c));
        }
        p
    }

    #[test]
    fn ihara_square_square() {
        // x1^2 x2^2 + (x2 - x1)^2 (x1^2 - x2^2), expanded by hand:
        // x1^2x2^2 + x1^4 - 2x1^3x2 + 2x1x2^3 - x2^4
        let out = ihara_circ(&GeneralPolynomial::power(2), &GeneralPolynomial::power(2)).unwrap();
        let expected = gp(
            2,
            &[
                (&[2, 2], 1),
                (&[4, 0], 1),
                (&[3, 1], -2),
                (&[1, 3], 2),
                (&[0, 4], -1),
            ],
        );
        assert_eq!(out, expected);
        assert_eq!(out.coefficient(&[2, 2]), q(1));
    }

    #[test]
    fn ihara_fourth_square() {
        let out = ihara_circ(&GeneralPolynomial::power(4), &GeneralPolynomial::power(2)).unwrap();
        assert_eq!(out.coefficient(&[2, 4]), q(-5));
        assert_eq!(out.homogeneous_degree(), Some(6));
    }

    #[test]
    fn ihara_constants() {
        let out = ihara_circ(&GeneralPolynomial::one(1), &GeneralPolynomial::one(1)).unwrap();
        assert_eq!(out, GeneralPolynomial::one(2));
    }

    #[test]
    fn ihara_arity_error() {
        let f = GeneralPolynomial::one(2);
        assert!(matches!(
            ihara_circ(&f, &GeneralPolynomial::one(1)),
            Err(Error::ArityMismatch(_))
        ));
    }

    #[test]
    fn e_coefficients_both_ways() {
        for (m, n, e) in [
            (vec![3, 3], vec![3, 3], 1),
            (vec![5, 3], vec![3, 5], -5),
            (vec![3, 5], vec![3, 5], 0),
        ] {
            let m = oc(&m);
            assert_eq!(e_coefficient_expansion(&m, &n).unwrap(), BigInt::from(e));
            assert_eq!(e_coefficient_formula(&m, &n).unwrap(), BigInt::from(e));
        }
        let m = oc(&[3, 3, 3]);
        assert_eq!(
            e_coefficient_expansion(&m, &[3, 3, 3]).unwrap(),
            e_coefficient_formula(&m, &[3, 3, 3]).unwrap()
        );
    }

    #[test]
    fn e_weight_mismatch_is_zero() {
        let m = oc(&[5, 3]);
        assert!(e_coefficient_expansion(&m, &[3, 3]).unwrap().is_zero());
        assert!(e_coefficient_formula(&m, &[3, 3]).unwrap().is_zero());
        assert!(e_coefficient_formula(&m, &[3]).is_err());
        assert!(e_coefficient_formula(&m, &[8, 0]).is_err());
    }

    #[test]
    fn pi_examples() {
        let t = enumerate_s(12, 2);
        let zero = EvenPolynomial::zero(12, 2);
        assert!(pi(&zero).iter().all(Zero::is_zero));
        let p = EvenPolynomial::monomial(&oc(&[3, 9]), q(1));
        let v = pi(&p);
        assert_eq!(v, vec![q(0), q(0), q(0), q(1)]);
        assert_eq!(pi_inverse(&t, &v).unwrap(), p);
        assert!(pi_inverse(&t, &v[..3]).is_err());
    }

    #[test]
    fn restricted_even_part_examples() {
        let p = gp(2, &[(&[2, 2], 1), (&[3, 1], -2), (&[4, 0], 1)]);
        let out = restricted_even_part(&p, 6);
        assert_eq!(out, EvenPolynomial::monomial(&oc(&[3, 3]), q(1)));
        assert!(restricted_even_part(&GeneralPolynomial::zero(2), 6).is_zero());
        assert!(restricted_even_part(&gp(2, &[(&[3, 3], 1)]), 8).is_zero());
    }

    #[test]
    fn phi_identity_and_range() {
        let p =
            EvenPolynomial::from_terms(12, 2, [(oc(&[9, 3]), q(2)), (oc(&[5, 7]), q(-1))]).unwrap();
        assert_eq!(phi_j(&p, 1).unwrap(), p);
        assert!(matches!(phi_j(&p, 3), Err(Error::JOutOfRange { .. })));
        assert!(matches!(phi_j(&p, 0), Err(Error::JOutOfRange { .. })));
    }

    #[test]
    fn phi_two_on_square_square() {
        let p = EvenPolynomial::monomial(&oc(&[3, 3]), q(1));
        let out = phi_j(&p, 2).unwrap();
        assert_eq!(out.coefficient(&oc(&[3, 3])), q(1));
    }

    #[test]
    fn json_form() {
        let p = EvenPolynomial::from_terms(
            12,
            2,
            [
                (oc(&[3, 9]), BigRational::new(1.into(), 2.into())),
                (oc(&[9, 3]), q(-3)),
            ],
        )
        .unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"N":12,"r":2,"terms":[{"m":[9,3],"c":"-3/1"},{"m":[3,9],"c":"1/2"}]}"#
        );
        assert_eq!(serde_json::from_str::<EvenPolynomial>(&s).unwrap(), p);
        assert!(serde_json::from_str::<EvenPolynomial>(
            r#"{"N":12,"r":2,"terms":[{"m":[9,5],"c":"1"}]}"#
        )
        .is_err());
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(
            parse_rational("-3/6").unwrap(),
            BigRational::new((-1).into(), 2.into())
        );
        assert_eq!(parse_rational("7").unwrap(), q(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
