//! Monte Carlo drivers for the rejection-rate tables, the multivariate rate
//! study and the portfolio identified-set check.
//!
//! Every world `w` of a cell draws its data from a generator derived from
//! `(seed, n, w)`, and results are collected in world order, so output does
//! not depend on the worker count.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::applications::{cara_constraint_scan, cara_identified_set, geometric_grid};
use crate::bootstrap::{bootstrap_etas, check_alpha, select_radius, selection_rank, MatchStrategy};
use crate::error::{invalid, Error, Result};
use crate::matching::{Norm, PointCloud};
use crate::model::ShiftModel;
use crate::region::{confidence_region_bisect, theta_grid};
use crate::seed::{derive_seed, task_rng};
use crate::subsampling::{cht_critical_value, cht_region_at, cht_subsample_sups, SubsampleConfig};
use crate::Interval;

/// Identified set of the shift design under standard normal data.
pub const SHIFT_IDENTIFIED_SET: Interval = Interval { lo: -1.0, hi: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Design {
    Table1,
    Table2,
    RateStudy,
    CaraCheck,
}

impl Design {
    pub fn tag(self) -> &'static str {
        match self {
            Design::Table1 => "table1",
            Design::Table2 => "table2",
            Design::RateStudy => "rate-study",
            Design::CaraCheck => "cara-check",
        }
    }
}

impl FromStr for Design {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => Ok(Design::Table1),
            "table2" => Ok(Design::Table2),
            "rate-study" => Ok(Design::RateStudy),
            "cara-check" => Ok(Design::CaraCheck),
            _ => Err(invalid(format!("unknown design `{s}`"))),
        }
    }
}

/// `lo:hi:step`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        theta_grid(self.lo, self.hi, self.step)
    }
}

impl FromStr for GridSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |p: &str| p.trim().parse::<f64>().map_err(|_| invalid(format!("bad grid `{s}`")));
        match parts.as_slice() {
            [lo, hi, step] => {
                let spec = GridSpec { lo: parse(lo)?, hi: parse(hi)?, step: parse(step)? };
                spec.values()?;
                Ok(spec)
            }
            _ => Err(invalid(format!("grid must be lo:hi:step, got `{s}`"))),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

/// Settings shared by all designs. Empty lists and `None` fall back to the
/// design defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub design: Design,
    pub sizes: Vec<usize>,
    pub mc_reps: Option<usize>,
    /// Bootstrap replicates, or the number of subsamples for `table2`.
    pub bootstrap_reps: Option<usize>,
    pub subsample_sizes: Vec<usize>,
    pub alphas: Vec<f64>,
    pub seed: u64,
    pub grid: Option<GridSpec>,
    pub dimension: Option<usize>,
    pub workers: Option<usize>,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub eta: f64,
}

impl ExperimentConfig {
    pub fn new(design: Design) -> Self {
        ExperimentConfig {
            design,
            sizes: Vec::new(),
            mc_reps: None,
            bootstrap_reps: None,
            subsample_sizes: Vec::new(),
            alphas: Vec::new(),
            seed: 20_240_601,
            grid: None,
            dimension: None,
            workers: None,
            lambda_lo: 0.5,
            lambda_hi: 2.0,
            eta: 0.0,
        }
    }

    pub fn sizes(&self) -> Vec<usize> {
        if !self.sizes.is_empty() {
            return self.sizes.clone();
        }
        match self.design {
            Design::RateStudy => vec![100, 400, 1600],
            _ => vec![50, 100, 500],
        }
    }

    pub fn mc_reps(&self) -> usize {
        self.mc_reps.unwrap_or(match self.design {
            Design::RateStudy => 4,
            _ => 500,
        })
    }

    pub fn bootstrap_reps(&self) -> usize {
        self.bootstrap_reps.unwrap_or(match self.design {
            Design::RateStudy => 50,
            _ => 500,
        })
    }

    pub fn alphas(&self) -> Vec<f64> {
        if self.alphas.is_empty() {
            vec![0.01, 0.05, 0.10]
        } else {
            self.alphas.clone()
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid.unwrap_or(match self.design {
            Design::CaraCheck => GridSpec { lo: 0.0, hi: 3.0, step: 0.001 },
            _ => GridSpec { lo: -3.0, hi: 3.0, step: 0.01 },
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension.unwrap_or(2)
    }

    /// Subsample sizes for sample size `n`: the configured list, or the
    /// reference sizes for `n` in {50, 100, 500}, or `0.9 n`.
    pub fn subsample_sizes_for(&self, n: usize) -> Vec<usize> {
        if !self.subsample_sizes.is_empty() {
            return self.subsample_sizes.clone();
        }
        match n {
            50 => vec![40, 45, 48],
            100 => vec![85, 92, 95],
            500 => vec![425, 450, 475],
            _ => vec![(n * 9 / 10).max(1)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let sizes = self.sizes();
        if sizes.contains(&0) {
            return Err(invalid("sample sizes must be positive"));
        }
        if self.mc_reps() == 0 || self.bootstrap_reps() == 0 {
            return Err(invalid("Monte Carlo and bootstrap counts must be positive"));
        }
        if self.workers == Some(0) {
            return Err(invalid("worker count must be positive"));
        }
        for &a in &self.alphas() {
            check_alpha(a)?;
        }
        self.grid().values()?;
        match self.design {
            Design::Table1 => {
                for &a in &self.alphas() {
                    selection_rank(self.bootstrap_reps(), a)?;
                }
            }
            Design::Table2 => {
                for &n in &sizes {
                    for b in self.subsample_sizes_for(n) {
                        if b == 0 || b >= n {
                            return Err(invalid(format!("subsample size {b} must lie in 1..{n}")));
                        }
                    }
                }
            }
            Design::RateStudy => {
                let d = self.dimension();
                if d < 2 {
                    return Err(invalid("rate study needs dimension >= 2; the univariate case is covered by table1"));
                }
                if sizes.iter().any(|&n| n < 2) {
                    return Err(invalid("rate study needs n >= 2"));
                }
            }
            Design::CaraCheck => {
                if !(self.lambda_lo > 0.0 && self.lambda_lo <= self.lambda_hi) {
                    return Err(invalid("need 0 < lambda_lo <= lambda_hi"));
                }
                if !(self.eta >= 0.0) {
                    return Err(invalid("eta must be >= 0"));
                }
            }
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(w) = self.workers {
            builder = builder.num_threads(w);
        }
        builder.build().map_err(|e| invalid(format!("cannot start worker pool: {e}")))
    }
}

/// A rendered result table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    /// Comma-separated with a header row and `\n` line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Column-aligned text for terminals.
    pub fn to_text(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| std::iter::once(&self.header).chain(&self.rows).map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = line.iter().zip(&widths).map(|(cell, &w)| format!("{cell:>w$}")).collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// One `(n, alpha, aux_size)` cell of a rejection table.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectionCell {
    pub n: usize,
    pub alpha: f64,
    /// `B` for the bootstrap table, `b` for the subsampling table.
    pub aux_size: usize,
    pub reps: usize,
    pub rejections: usize,
}

impl RejectionCell {
    pub fn rate(&self) -> f64 {
        self.rejections as f64 / self.reps as f64
    }

    /// `sqrt(r (1 - r) / reps)`
    pub fn mc_se(&self) -> f64 {
        let r = self.rate();
        (r * (1.0 - r) / self.reps as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RejectionTable {
    pub design: Design,
    pub seed: u64,
    pub cells: Vec<RejectionCell>,
}

impl RejectionTable {
    pub fn cell(&self, n: usize, alpha: f64, aux_size: usize) -> Option<&RejectionCell> {
        self.cells.iter().find(|c| c.n == n && c.aux_size == aux_size && (c.alpha - alpha).abs() < 1e-12)
    }

    pub fn table(&self) -> Table {
        let mut t =
            Table::new(&["design", "n", "alpha", "aux_size", "reps", "rejections", "rejection_rate", "mc_se", "seed"]);
        for c in &self.cells {
            t.rows.push(vec![
                self.design.tag().to_string(),
                c.n.to_string(),
                c.alpha.to_string(),
                c.aux_size.to_string(),
                c.reps.to_string(),
                c.rejections.to_string(),
                format!("{:.4}", c.rate()),
                format!("{:.4}", c.mc_se()),
                self.seed.to_string(),
            ]);
        }
        t
    }
}

fn world_seed(seed: u64, n: usize, world: usize) -> u64 {
    derive_seed(derive_seed(seed, n as u64), world as u64)
}

/// Sample draws use a stream index that bootstrap replicates never reach.
const SAMPLE_STREAM: u64 = u64::MAX;

fn normal_sample(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = task_rng(seed, SAMPLE_STREAM);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn count_rejections(outcomes: &[Vec<bool>], k: usize) -> usize {
    outcomes.iter().filter(|o| o[k]).count()
}

/// Bootstrap dilation rejection rates: a world rejects when some grid point
/// of `[-1, 1]` falls outside the confidence region.
pub fn run_table1(config: &ExperimentConfig) -> Result<RejectionTable> {
    if config.design != Design::Table1 {
        return Err(invalid("run_table1 needs design table1"));
    }
    config.validate()?;
    let grid = config.grid().values()?;
    let alphas = config.alphas();
    let reps = config.mc_reps();
    let big_b = config.bootstrap_reps();
    let model = ShiftModel::default();
    let mut cells = Vec::new();
    for n in config.sizes() {
        let outcomes: Vec<Vec<bool>> = config.pool()?.install(|| {
            (0..reps)
                .into_par_iter()
                .map(|w| {
                    let seed = world_seed(config.seed, n, w);
                    let y = normal_sample(n, seed);
                    let etas = bootstrap_etas(&PointCloud::univariate(&y)?, big_b, seed, MatchStrategy::Auto)?;
                    alphas
                        .iter()
                        .map(|&alpha| {
                            let radius = select_radius(&etas, alpha)?;
                            let region = confidence_region_bisect(&y, radius, &grid, &model, alpha)?;
                            Ok(!region.covers(SHIFT_IDENTIFIED_SET))
                        })
                        .collect::<Result<Vec<bool>>>()
                })
                .collect::<Result<Vec<_>>>()
        })?;
        for (k, &alpha) in alphas.iter().enumerate() {
            cells.push(RejectionCell { n, alpha, aux_size: big_b, reps, rejections: count_rejections(&outcomes, k) });
        }
    }
    Ok(RejectionTable { design: Design::Table1, seed: config.seed, cells })
}

/// Subsampling rejection rates with the identified set treated as known.
pub fn run_table2(config: &ExperimentConfig) -> Result<RejectionTable> {
    if config.design != Design::Table2 {
        return Err(invalid("run_table2 needs design table2"));
    }
    config.validate()?;
    let grid = config.grid().values()?;
    let alphas = config.alphas();
    let reps = config.mc_reps();
    let subsamples = config.bootstrap_reps();
    let model = ShiftModel::default();
    let mut cells = Vec::new();
    for n in config.sizes() {
        let sizes = config.subsample_sizes_for(n);
        // per world: one flag per (b, alpha), b-major
        let outcomes: Vec<Vec<bool>> = config.pool()?.install(|| {
            (0..reps)
                .into_par_iter()
                .map(|w| {
                    let seed = world_seed(config.seed, n, w);
                    let y = normal_sample(n, seed);
                    let mut flags = Vec::with_capacity(sizes.len() * alphas.len());
                    for &b in &sizes {
                        let sub = SubsampleConfig {
                            subsample_size: b,
                            num_subsamples: subsamples,
                            alpha: alphas[0],
                            seed: derive_seed(seed, b as u64),
                            known_identified_set: SHIFT_IDENTIFIED_SET,
                        };
                        let sups = cht_subsample_sups(&y, &sub, &grid, &model)?;
                        for &alpha in &alphas {
                            let critical = cht_critical_value(&sups, alpha)?;
                            let region = cht_region_at(&y, critical, &grid, &model, alpha)?;
                            flags.push(!region.covers(SHIFT_IDENTIFIED_SET));
                        }
                    }
                    Ok(flags)
                })
                .collect::<Result<Vec<_>>>()
        })?;
        for (i, &b) in sizes.iter().enumerate() {
            for (k, &alpha) in alphas.iter().enumerate() {
                let rejections = count_rejections(&outcomes, i * alphas.len() + k);
                cells.push(RejectionCell { n, alpha, aux_size: b, reps, rejections });
            }
        }
    }
    Ok(RejectionTable { design: Design::Table2, seed: config.seed, cells })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub n: usize,
    pub dimension: usize,
    pub median_eta: f64,
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateStudy {
    pub seed: u64,
    pub replicates: usize,
    pub rows: Vec<RateRow>,
}

impl RateStudy {
    /// Largest over smallest normalized statistic.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .rows
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.normalized), hi.max(r.normalized)));
        hi / lo
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["design", "n", "dimension", "aux_size", "median_eta", "normalized", "seed"]);
        for r in &self.rows {
            t.rows.push(vec![
                Design::RateStudy.tag().to_string(),
                r.n.to_string(),
                r.dimension.to_string(),
                self.replicates.to_string(),
                format!("{:.6}", r.median_eta),
                format!("{:.6}", r.normalized),
                self.seed.to_string(),
            ]);
        }
        t
    }
}

/// `eta sqrt(n) / (ln n)^(3/4)` for `d = 2`, `eta (n / ln n)^(1/d)` above.
pub fn rate_normalization(eta: f64, n: usize, d: usize) -> f64 {
    let nf = n as f64;
    if d == 2 {
        eta * nf.sqrt() / nf.ln().powf(0.75)
    } else {
        eta * (nf / nf.ln()).powf(1.0 / d as f64)
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        0.5 * (values[m / 2 - 1] + values[m / 2])
    }
}

/// Median bootstrap matching cost for uniform samples on `[0, 1]^d`, pooled
/// over `mc_reps` samples of `bootstrap_reps` replicates each, sup norm.
pub fn run_rate_study(config: &ExperimentConfig) -> Result<RateStudy> {
    if config.design != Design::RateStudy {
        return Err(invalid("run_rate_study needs design rate-study"));
    }
    config.validate()?;
    let d = config.dimension();
    let reps = config.mc_reps();
    let big_b = config.bootstrap_reps();
    let mut rows = Vec::new();
    for n in config.sizes() {
        let etas: Vec<Vec<f64>> = config.pool()?.install(|| {
            (0..reps)
                .into_par_iter()
                .map(|w| {
                    let seed = world_seed(config.seed, n, w);
                    let mut rng = task_rng(seed, SAMPLE_STREAM);
                    let coords: Vec<f64> = (0..n * d).map(|_| rng.random::<f64>()).collect();
                    let cloud = PointCloud::from_flat(coords, d, Norm::Sup)?;
                    bootstrap_etas(&cloud, big_b, seed, MatchStrategy::Auto)
                })
                .collect::<Result<Vec<_>>>()
        })?;
        let mut pooled: Vec<f64> = etas.into_iter().flatten().collect();
        let median_eta = median(&mut pooled);
        rows.push(RateRow { n, dimension: d, median_eta, normalized: rate_normalization(median_eta, n, d) });
    }
    Ok(RateStudy { seed: config.seed, replicates: big_b, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaraCheck {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub eta: f64,
    pub step: f64,
    pub analytic: Interval,
    pub scanned: Option<Interval>,
}

impl CaraCheck {
    pub fn passed(&self) -> bool {
        self.scanned.is_some_and(|s| intervals_agree(self.analytic, s, self.step))
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "design",
            "lambda_lo",
            "lambda_hi",
            "eta",
            "analytic_lo",
            "analytic_hi",
            "scan_lo",
            "scan_hi",
            "step",
            "pass",
        ]);
        let (slo, shi) = match self.scanned {
            Some(s) => (s.lo.to_string(), s.hi.to_string()),
            None => ("NA".to_string(), "NA".to_string()),
        };
        t.rows.push(vec![
            Design::CaraCheck.tag().to_string(),
            self.lambda_lo.to_string(),
            self.lambda_hi.to_string(),
            self.eta.to_string(),
            self.analytic.lo.to_string(),
            self.analytic.hi.to_string(),
            slo,
            shi,
            self.step.to_string(),
            self.passed().to_string(),
        ]);
        t
    }
}

/// Endpoints differ by at most one grid step (plus rounding).
pub fn intervals_agree(a: Interval, b: Interval, step: f64) -> bool {
    let tol = step * (1.0 + 1e-9);
    (a.lo - b.lo).abs() <= tol && (a.hi - b.hi).abs() <= tol
}

/// Closed-form identified set against the constraint scan over a geometric
/// risk-aversion grid.
pub fn run_cara_check(config: &ExperimentConfig) -> Result<CaraCheck> {
    if config.design != Design::CaraCheck {
        return Err(invalid("run_cara_check needs design cara-check"));
    }
    config.validate()?;
    let grid = config.grid();
    let analytic = cara_identified_set(config.lambda_lo, config.lambda_hi, config.eta)?;
    let us = geometric_grid(1e-9, 10.0, 400);
    let scanned = cara_constraint_scan(config.lambda_lo, config.lambda_hi, config.eta, &grid.values()?, &us)?;
    Ok(CaraCheck {
        lambda_lo: config.lambda_lo,
        lambda_hi: config.lambda_hi,
        eta: config.eta,
        step: grid.step,
        analytic,
        scanned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(design: Design) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(design);
        c.sizes = vec![30];
        c.mc_reps = Some(12);
        c.bootstrap_reps = Some(40);
        c.alphas = vec![0.05, 0.1];
        c
    }

    #[test]
    fn grid_spec_parses() {
        let g: GridSpec = "-3:3:0.01".parse().unwrap();
        assert_eq!(g, GridSpec { lo: -3.0, hi: 3.0, step: 0.01 });
        assert_eq!(g.values().unwrap().len(), 601);
        assert!("1:0:0.1".parse::<GridSpec>().is_err());
        assert!("0:1".parse::<GridSpec>().is_err());
        assert!("0:1:0".parse::<GridSpec>().is_err());
        assert!("a:1:0.1".parse::<GridSpec>().is_err());
    }

    #[test]
    fn design_round_trips() {
        for d in [Design::Table1, Design::Table2, Design::RateStudy, Design::CaraCheck] {
            assert_eq!(d.tag().parse::<Design>().unwrap(), d);
        }
        assert!("table3".parse::<Design>().is_err());
    }

    #[test]
    fn validation() {
        let mut c = small(Design::Table1);
        c.alphas = vec![1.5];
        assert!(c.validate().is_err());
        let mut c = small(Design::Table1);
        c.alphas = vec![0.001];
        assert!(c.validate().is_err(), "floor(40 * 0.001) = 0");
        let mut c = small(Design::Table2);
        c.subsample_sizes = vec![30];
        assert!(c.validate().is_err());
        let mut c = small(Design::RateStudy);
        c.dimension = Some(1);
        assert!(c.validate().is_err());
        let mut c = small(Design::Table1);
        c.workers = Some(0);
        assert!(c.validate().is_err());
        assert!(run_table2(&small(Design::Table1)).is_err());
    }

    #[test]
    fn csv_shape() {
        let t = run_table1(&small(Design::Table1)).unwrap().table();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("design,n,alpha,aux_size"));
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
        assert!(lines[1].starts_with("table1,30,0.05,40,12,"));
        assert!(!t.to_text().is_empty());
    }

    #[test]
    fn single_world_is_valid() {
        let mut c = small(Design::Table1);
        c.mc_reps = Some(1);
        let t = run_table1(&c).unwrap();
        for cell in &t.cells {
            assert!(cell.rejections <= 1);
            assert_eq!(cell.mc_se(), 0.0);
        }
    }

    #[test]
    fn worker_count_does_not_change_output() {
        for design in [Design::Table1, Design::Table2] {
            let mut c = small(design);
            c.workers = Some(1);
            let run = |c: &ExperimentConfig| match design {
                Design::Table1 => run_table1(c).unwrap().table().to_csv(),
                _ => run_table2(c).unwrap().table().to_csv(),
            };
            let one = run(&c);
            c.workers = Some(3);
            assert_eq!(one, run(&c));
        }
    }

    #[test]
    fn cara_check_passes_and_detects_mismatch() {
        let mut c = ExperimentConfig::new(Design::CaraCheck);
        for eta in [0.0, 0.1] {
            c.eta = eta;
            let r = run_cara_check(&c).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        c.lambda_lo = 1.0;
        c.lambda_hi = 1.0;
        let r = run_cara_check(&c).unwrap();
        assert!(r.passed());
        assert_eq!(r.analytic, Interval::new(1.0, 1.0));
        // a wrong closed form [λ_lo, λ_hi] is caught
        assert!(!intervals_agree(Interval::new(0.5, 2.0), Interval::new(2.0, 0.5), 0.001));
        assert!(!intervals_agree(Interval::new(0.5, 2.0), Interval::new(0.5, 2.01), 0.001));
    }

    #[test]
    fn rate_normalization_forms() {
        let n = 100usize;
        let ln = (n as f64).ln();
        assert!((rate_normalization(1.0, n, 2) - 10.0 / ln.powf(0.75)).abs() < 1e-12);
        assert!((rate_normalization(1.0, n, 3) - (100.0 / ln).cbrt()).abs() < 1e-12);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
