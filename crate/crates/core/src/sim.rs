//! Monte Carlo operating characteristics: rejection rate and interval
//! coverage under assumed true proportions.
//!
//! Replicate `i` draws from its own ChaCha8 stream, keyed by the config seed
//! and selected by stream id `i`, so results do not depend on thread count
//! or scheduling.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::ci::confidence_interval;
use crate::counts::{Margin, TrialCounts};
use crate::error::{Error, Result};
use crate::inference::{z_statistic, Alternative};
use crate::mle::CaseTag;

/// At most this many failing replicates are kept for diagnosis.
pub const FAILURE_LOG_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub n1: u64,
    pub n2: u64,
    pub p1_true: f64,
    pub p2_true: f64,
    pub s0: Margin,
    pub level: f64,
    pub alternative: Alternative,
    pub replicates: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_owned()));
        if self.n1 == 0 || self.n2 == 0 {
            return bad("group sizes must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.p1_true) || !(0.0..=1.0).contains(&self.p2_true) {
            return bad("true proportions must lie in [0, 1]");
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidLevel(self.level));
        }
        if self.replicates == 0 {
            return bad("replicates must be at least 1");
        }
        Ok(())
    }
}

/// A replicate that raised a numerical error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureRecord {
    pub replicate: u64,
    pub r1: u64,
    pub r2: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub replicates_run: u64,
    pub rejections: u64,
    pub ci_covered: u64,
    pub failures: u64,
    pub rejection_rate: f64,
    pub coverage_rate: f64,
    pub extreme_case_counts: BTreeMap<CaseTag, u64>,
    pub failure_log: Vec<FailureRecord>,
}

#[derive(Debug, Clone, Default)]
struct Tally {
    replicates: u64,
    rejections: u64,
    covered: u64,
    failures: u64,
    cases: [u64; CaseTag::ALL.len()],
    failure_log: Vec<FailureRecord>,
}

impl Tally {
    // Both sides are in replicate order, so concatenating keeps the log
    // sorted by replicate index.
    fn merge(mut self, other: Tally) -> Tally {
        self.replicates += other.replicates;
        self.rejections += other.rejections;
        self.covered += other.covered;
        self.failures += other.failures;
        for (a, b) in self.cases.iter_mut().zip(other.cases) {
            *a += b;
        }
        let room = FAILURE_LOG_CAP.saturating_sub(self.failure_log.len());
        self.failure_log
            .extend(other.failure_log.into_iter().take(room));
        self
    }
}

/// The random stream for replicate `index`.
pub fn replicate_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Exact Binomial(n, p) draw.
pub fn binomial_draw<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    if p <= 0.0 {
        0
    } else if p >= 1.0 {
        n
    } else {
        Binomial::new(n, p)
            .expect("p checked to lie in (0, 1)")
            .sample(rng)
    }
}

/// Runs the simulation on the global rayon pool.
pub fn simulate(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let tally = (0..config.replicates)
        .into_par_iter()
        .map(|i| run_replicate(config, i))
        .reduce(Tally::default, Tally::merge);
    Ok(finish(tally))
}

/// Runs the simulation on a dedicated pool of `threads` workers. The result
/// is identical to [`simulate`].
pub fn simulate_with_threads(config: &SimConfig, threads: usize) -> Result<SimResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    pool.install(|| simulate(config))
}

fn run_replicate(config: &SimConfig, index: u64) -> Tally {
    let mut rng = replicate_stream(config.seed, index);
    let r1 = binomial_draw(config.n1, config.p1_true, &mut rng);
    let r2 = binomial_draw(config.n2, config.p2_true, &mut rng);
    let counts = TrialCounts::new(r1, config.n1, r2, config.n2)
        .expect("binomial draws never exceed the group size");

    let mut tally = Tally {
        replicates: 1,
        ..Tally::default()
    };
    tally.cases[CaseTag::classify(&counts, config.s0) as usize] += 1;

    let alpha = 1.0 - config.level;
    let outcome = z_statistic(&counts, config.s0).and_then(|test| {
        let ci = confidence_interval(&counts, config.level)?;
        Ok((
            test.rejects(config.alternative, alpha),
            ci.contains(config.p1_true - config.p2_true),
        ))
    });
    match outcome {
        Ok((rejected, covered)) => {
            tally.rejections += rejected as u64;
            tally.covered += covered as u64;
        }
        Err(e) => {
            tally.failures = 1;
            tally.failure_log.push(FailureRecord {
                replicate: index,
                r1,
                r2,
                error: e.to_string(),
            });
        }
    }
    tally
}

fn finish(tally: Tally) -> SimResult {
    let n = tally.replicates as f64;
    SimResult {
        replicates_run: tally.replicates,
        rejections: tally.rejections,
        ci_covered: tally.covered,
        failures: tally.failures,
        rejection_rate: tally.rejections as f64 / n,
        coverage_rate: tally.covered as f64 / n,
        extreme_case_counts: CaseTag::ALL
            .into_iter()
            .map(|tag| (tag, tally.cases[tag as usize]))
            .collect(),
        failure_log: tally.failure_log,
    }
}
