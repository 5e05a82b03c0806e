//! Verification suites over a range of weights and depths.
//!
//! Every suite expands to a list of independent checks that run on the rayon
//! pool. Records come back in task order, so a report depends only on the
//! configuration and seed.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::{compositions, enumerate_s};
use crate::matrices::{
    verify_block_diagonal, verify_prefix_kernel_sum, verify_product_is_diag_c, MatrixKind,
};
use crate::period::{
    chain_image_dim, chain_image_dim_by_matrices, glanois_report, injectivity_report,
    verify_baumard_schneps, verify_fnr_identity, verify_phi_kernel, verify_restricted_kernel,
    verify_tasaka_map, verify_w_basis,
};
use crate::poly::{e_formula_raw, ihara_of_monomial, phi_j, pi, EvenPolynomial};
use crate::report::{Backing, ReportRecord, Status};
use crate::series::{
    compare_rank_to_conjecture, verify_cusp_dimension, verify_series_identity, verify_w_dimension,
    DEFAULT_SIZE_BUDGET,
};
use crate::store::MatrixStore;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    OracleE,
    BlockDiag,
    Commute,
    BaumardSchneps,
    TasakaMap,
    Fnr,
    Kernels,
    Glanois,
    SeriesIdentity,
    RankVsConjecture,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::OracleE,
        Suite::BlockDiag,
        Suite::Commute,
        Suite::BaumardSchneps,
        Suite::TasakaMap,
        Suite::Fnr,
        Suite::Kernels,
        Suite::Glanois,
        Suite::SeriesIdentity,
        Suite::RankVsConjecture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OracleE => "oracle-e",
            Suite::BlockDiag => "block-diag",
            Suite::Commute => "commute",
            Suite::BaumardSchneps => "baumard-schneps",
            Suite::TasakaMap => "tasaka-map",
            Suite::Fnr => "fnr",
            Suite::Kernels => "kernels",
            Suite::Glanois => "glanois",
            Suite::SeriesIdentity => "series-identity",
            Suite::RankVsConjecture => "rank-vs-conjecture",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_many(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            _ => Err(Error::InvalidParameter(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub nmax: u32,
    pub rmax: usize,
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
    pub suites: Vec<Suite>,
    pub seed: u64,
    /// Random polynomials per `(N, r, j)` in the commute suite.
    pub samples: usize,
    /// Largest `|S(N, r)|` the rank comparison will attempt.
    pub size_budget: u64,
}

impl RunConfig {
    pub fn new(nmax: u32, rmax: usize) -> Result<Self> {
        if rmax < 1 {
            return Err(Error::InvalidParameter("rmax must be at least 1".into()));
        }
        Ok(Self {
            nmax,
            rmax,
            cache_dir: None,
            format: OutputFormat::default(),
            suites: Suite::ALL.to_vec(),
            seed: 0,
            samples: 100,
            size_budget: DEFAULT_SIZE_BUDGET,
        })
    }

    pub fn with_suites(mut self, suites: Vec<Suite>) -> Self {
        self.suites = suites;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn store(&self) -> MatrixStore {
        match &self.cache_dir {
            Some(dir) => MatrixStore::at(dir),
            None => MatrixStore::in_memory(),
        }
    }
}

/// Aggregated records of one run.
#[derive(Clone, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct SuiteReport {
    pub records: Vec<ReportRecord>,
}

impl SuiteReport {
    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn violations(&self) -> impl Iterator<Item = &ReportRecord> {
        self.records
            .iter()
            .filter(|r| r.status == Status::Violation)
    }

    pub fn findings(&self) -> impl Iterator<Item = &ReportRecord> {
        self.records.iter().filter(|r| r.status == Status::Finding)
    }

    /// Zero unless a proved statement failed.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.count(Status::Violation) > 0)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.records)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out.push_str(&format!(
            "{} pass, {} finding, {} violation\n",
            self.count(Status::Pass),
            self.count(Status::Finding),
            self.count(Status::Violation)
        ));
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "check", "N", "r", "j", "expected", "observed", "status", "detail",
        ])?;
        for r in &self.records {
            w.write_record([
                r.check.clone(),
                r.n.to_string(),
                r.r.to_string(),
                r.j.map(|j| j.to_string()).unwrap_or_default(),
                r.expected.clone(),
                r.observed.clone(),
                r.status.to_string(),
                r.detail.clone().unwrap_or_default(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

type Task<'a> = Box<dyn Fn() -> Result<Vec<ReportRecord>> + Send + Sync + 'a>;

fn one(f: impl Fn() -> Result<ReportRecord> + Send + Sync + 'static) -> Task<'static> {
    Box::new(move || f().map(|r| vec![r]))
}

/// Runs every configured suite and collects the records in a fixed order.
pub fn run(config: &RunConfig) -> Result<SuiteReport> {
    let store = config.store();
    let mut report = SuiteReport::default();
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();
    for suite in suites {
        report.records.extend(run_suite(suite, config, &store)?);
    }
    Ok(report)
}

/// Runs one suite. Theorem violations become records; other errors abort.
pub fn run_suite(
    suite: Suite,
    config: &RunConfig,
    store: &MatrixStore,
) -> Result<Vec<ReportRecord>> {
    let tasks = tasks_for(suite, config, store);
    let results: Vec<Result<Vec<ReportRecord>>> = tasks
        .par_iter()
        .map(|task| {
            let start = Instant::now();
            let out = match task() {
                Err(Error::TheoremViolation(rec)) => Ok(vec![*rec]),
                other => other,
            };
            out.map(|mut recs| {
                let elapsed = start.elapsed();
                for r in &mut recs {
                    r.elapsed = elapsed;
                }
                recs
            })
        })
        .collect();
    let mut records = Vec::new();
    for r in results {
        for mut rec in r? {
            rec.seed = config.seed;
            records.push(rec);
        }
    }
    Ok(records)
}

fn tasks_for<'a>(suite: Suite, config: &RunConfig, store: &'a MatrixStore) -> Vec<Task<'a>> {
    let nmax = config.nmax;
    let rmax = config.rmax;
    let weights = move || 1..=nmax;
    let mut tasks: Vec<Task<'a>> = Vec::new();
    match suite {
        Suite::OracleE => {
            for r in 2..=rmax {
                for n in weights() {
                    if !enumerate_s(n, r).is_empty() {
                        tasks.push(one(move || check_e_oracle(n, r)));
                    }
                }
            }
        }
        Suite::BlockDiag => {
            for r in 3..=rmax {
                for n in weights() {
                    for j in 2..r {
                        tasks.push(one(move || verify_block_diagonal(n, r, j)));
                    }
                    tasks.push(one(move || verify_product_is_diag_c(n, r)));
                }
            }
        }
        Suite::Commute => {
            let samples = config.samples;
            let seed = config.seed;
            for r in 2..=rmax {
                for n in weights() {
                    if enumerate_s(n, r).is_empty() {
                        continue;
                    }
                    for j in 2..=r {
                        tasks.push(Box::new(move || {
                            check_commute(n, r, j, samples, seed, store).map(|r| vec![r])
                        }));
                    }
                }
            }
        }
        Suite::BaumardSchneps => {
            for n in weights().filter(|n| n % 2 == 0) {
                tasks.push(one(move || verify_baumard_schneps(n)));
                tasks.push(one(move || verify_cusp_dimension(n)));
            }
        }
        Suite::TasakaMap => {
            for r in 3..=rmax {
                for n in weights() {
                    tasks.push(Box::new(move || {
                        let mut out = vec![verify_tasaka_map(n, r)?];
                        out.extend(injectivity_report(n, r)?.records());
                        Ok(out)
                    }));
                }
            }
        }
        Suite::Fnr => {
            for r in 3..=rmax {
                for n in weights() {
                    tasks.push(one(move || verify_fnr_identity(n, r)));
                }
            }
        }
        Suite::Kernels => {
            for r in 2..=rmax {
                for n in weights() {
                    tasks.push(one(move || verify_w_basis(n, r)));
                    tasks.push(one(move || verify_w_dimension(n, r)));
                    if r >= 3 {
                        tasks.push(one(move || verify_prefix_kernel_sum(n, r)));
                        for j in 2..r {
                            tasks.push(one(move || verify_phi_kernel(n, r, j)));
                        }
                    }
                    for j in 2..=r.saturating_sub(2) {
                        tasks.push(one(move || verify_restricted_kernel(n, r, j)));
                    }
                }
            }
        }
        Suite::Glanois => {
            for r in 3..=rmax {
                for n in weights() {
                    tasks.push(Box::new(move || {
                        let by_phi = chain_image_dim(n, r)?;
                        let by_matrices = chain_image_dim_by_matrices(n, r)?;
                        let two_ways = ReportRecord::new(
                            "chain-image-two-ways",
                            n,
                            r,
                            by_matrices,
                            by_phi,
                            by_phi == by_matrices,
                            Backing::Theorem,
                        );
                        Ok(vec![two_ways, glanois_report(n, r)?.record()])
                    }));
                }
            }
        }
        Suite::SeriesIdentity => {
            let (xb, yb) = (nmax as usize, rmax);
            tasks.push(one(move || verify_series_identity(xb, yb)));
        }
        Suite::RankVsConjecture => {
            let budget = config.size_budget;
            tasks.push(Box::new(move || {
                Ok(compare_rank_to_conjecture(nmax, rmax, budget, store)?.records)
            }));
        }
    }
    tasks
}

/// Closed formula against the Ihara expansion for every `m ∈ S(N, r)` and
/// every composition `n` of `N` into `r` parts.
pub fn check_e_oracle(n: u32, r: usize) -> Result<ReportRecord> {
    let table = enumerate_s(n, r);
    let targets = compositions(n, r);
    let mut pairs = 0usize;
    for m in table.iter() {
        let expansion = ihara_of_monomial(m)?;
        for target in &targets {
            let exps: Vec<u32> = target.iter().map(|k| k - 1).collect();
            let by_expansion = expansion.coefficient(&exps);
            let by_formula = BigRational::from_integer(e_formula_raw(m.parts(), target));
            if by_expansion != by_formula {
                return ReportRecord::new(
                    "oracle-e",
                    n,
                    r,
                    by_expansion,
                    by_formula,
                    false,
                    Backing::Theorem,
                )
                .with_detail(format!("m = {m}, n = {target:?}"))
                .into_result();
            }
            pairs += 1;
        }
    }
    Ok(ReportRecord::new(
        "oracle-e",
        n,
        r,
        format!("{pairs} pairs agree"),
        format!("{pairs} pairs agree"),
        true,
        Backing::Theorem,
    ))
}

/// A random element of `V(N, r)` with integer coefficients in `-9..=9`.
pub fn random_even_polynomial(n: u32, r: usize, rng: &mut impl Rng) -> EvenPolynomial {
    let table = enumerate_s(n, r);
    let terms = table.iter().map(|m| {
        (
            m.clone(),
            BigRational::from_integer(BigInt::from(rng.gen_range(-9i32..=9))),
        )
    });
    EvenPolynomial::from_terms(n, r, terms).expect("terms drawn from S(N, r)")
}

/// Stream seed for one `(N, r, j)` cell, so cells are independent of scheduling.
pub fn cell_seed(seed: u64, n: u32, r: usize, j: usize) -> u64 {
    seed ^ (u64::from(n) << 32) ^ ((r as u64) << 16) ^ j as u64
}

/// `π(φ_j(q)) = π(q) E^(j)(N, r)` on `samples` random `q`.
pub fn check_commute(
    n: u32,
    r: usize,
    j: usize,
    samples: usize,
    seed: u64,
    store: &MatrixStore,
) -> Result<ReportRecord> {
    let ej = store.get(&MatrixKind::ej(n, r, j)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(seed, n, r, j));
    for sample in 0..samples {
        let q = random_even_polynomial(n, r, &mut rng);
        let lhs = pi(&phi_j(&q, j)?);
        let rhs = ej.left_mul_vec(&pi(&q))?;
        if lhs != rhs {
            return ReportRecord::new(
                "commute",
                n,
                r,
                "pi(phi_j(q)) == pi(q) E^(j)",
                format!("sample {sample} differs"),
                false,
                Backing::Theorem,
            )
            .with_j(j)
            .into_result();
        }
    }
    Ok(ReportRecord::new(
        "commute",
        n,
        r,
        format!("{samples} samples agree"),
        format!("{samples} samples agree"),
        true,
        Backing::Theorem,
    )
    .with_j(j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suites: &[Suite]) -> RunConfig {
        let mut c = RunConfig::new(16, 3)
            .unwrap()
            .with_suites(suites.to_vec())
            .with_seed(7);
        c.samples = 10;
        c
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(Suite::parse_many("all").unwrap().len(), 10);
        assert!("nope".parse::<Suite>().is_err());
        assert!(RunConfig::new(10, 0).is_err());
    }

    #[test]
    fn every_suite_passes_small() {
        let report = run(&small(&Suite::ALL)).unwrap();
        assert_eq!(report.exit_code(), 0);
        assert_eq!(report.count(Status::Violation), 0);
        assert!(report.records.iter().all(|r| r.seed == 7));
        let checks: std::collections::BTreeSet<&str> =
            report.records.iter().map(|r| r.check.as_str()).collect();
        for c in [
            "oracle-e",
            "commute",
            "baumard-schneps",
            "fnr-identity",
            "glanois",
            "series-identity",
        ] {
            assert!(checks.contains(c), "missing {c}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let config = small(&[Suite::Commute, Suite::RankVsConjecture]);
        let a = run(&config).unwrap().to_json().unwrap();
        let b = run(&config).unwrap().to_json().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn violation_sets_exit_code() {
        let mut report = SuiteReport::default();
        report.records.push(ReportRecord::new(
            "x",
            1,
            1,
            0,
            1,
            false,
            Backing::Conjecture,
        ));
        assert_eq!(report.exit_code(), 0);
        report
            .records
            .push(ReportRecord::new("x", 1, 1, 0, 1, false, Backing::Theorem));
        assert_eq!(report.exit_code(), 1);
        assert!(report
            .to_text()
            .ends_with("0 pass, 1 finding, 1 violation\n"));
        assert!(report.to_csv().unwrap().starts_with("check,N,r,j,"));
    }

    #[test]
    fn oracle_counts_pairs() {
        let rec = check_e_oracle(12, 2).unwrap();
        assert_eq!(rec.observed, "44 pairs agree");
    }
}
