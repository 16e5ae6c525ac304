//! Phase-transition experiments around the threshold statistic
//!
//! ```text
//! Θ(N, α) = log(α² (log N)^{log 4 − 1}) / sqrt(log log N)
//! ```
//!
//! Maximal product sets are expected exactly when Θ → −∞. At feasible N,
//! `log log N` stays below ~3.2, so experiments report Θ next to the
//! observed collision rates instead of trying to see the limit.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::MemoryBudget;
use crate::error::{LabError, Result};
use crate::model::{
    exact_expected_product_size, expected_trivial, sample_set, ModelParams, ProductCounter,
};
use crate::seed::trial_seed;
use crate::tau::TauNTable;

/// `log 4 − 1`.
pub const LOG4_MINUS_1: f64 = 0.386_294_361_119_890_6;

/// Default seed used whenever none is given.
pub const DEFAULT_SEED: u64 = 0x5EED;

fn log_log_checked(n: f64) -> Result<f64> {
    if !(n > std::f64::consts::E.powf(std::f64::consts::E)) {
        return Err(LabError::domain(format!("N = {n} must exceed e^e")));
    }
    Ok(n.ln().ln())
}

pub fn theta_statistic(n: f64, alpha: f64) -> Result<f64> {
    let ll = log_log_checked(n)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(LabError::domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    // log(α² L^c) = 2 log α + c log L, with L = log N.
    Ok((2.0 * alpha.ln() + LOG4_MINUS_1 * ll) / ll.sqrt())
}

/// The α with `Θ(N, α) = K`: `α = exp(K sqrt(log log N) / 2) (log N)^{(1 − log 4)/2}`.
pub fn theorem_alpha(n: f64, k: f64) -> Result<f64> {
    let ll = log_log_checked(n)?;
    let log_alpha = (k * ll.sqrt() - LOG4_MINUS_1 * ll) / 2.0;
    if !(log_alpha < 0.0) {
        return Err(LabError::domain(format!(
            "K = {k} at N = {n} gives alpha = {} >= 1",
            log_alpha.exp()
        )));
    }
    Ok(log_alpha.exp())
}

/// How α is derived from N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlphaSchedule {
    Fixed { value: f64 },
    /// `α = (log N)^{−exponent}`.
    LogPower { exponent: f64 },
    /// `α = theorem_alpha(N, K)`.
    TheoremScaled {
        #[serde(rename = "K")]
        k: f64,
    },
}

impl AlphaSchedule {
    pub fn alpha(&self, n: u64) -> Result<f64> {
        let nf = n as f64;
        log_log_checked(nf)?;
        match *self {
            AlphaSchedule::Fixed { value } => {
                if !(0.0..1.0).contains(&value) {
                    return Err(LabError::domain(format!("fixed alpha {value} outside [0, 1)")));
                }
                Ok(value)
            }
            AlphaSchedule::LogPower { exponent } => {
                let alpha = nf.ln().powf(-exponent);
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(LabError::domain(format!(
                        "log-power exponent {exponent} at N = {n} gives alpha = {alpha}"
                    )));
                }
                Ok(alpha)
            }
            AlphaSchedule::TheoremScaled { k } => theorem_alpha(nf, k),
        }
    }
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// A Monte Carlo sweep over `n_values`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_values: Vec<u64>,
    pub schedule: AlphaSchedule,
    pub trials: u64,
    pub delta: f64,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
    #[serde(default)]
    pub compute_exact: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(LabError::Config("n_values: must not be empty".into()));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 16) {
            return Err(LabError::Config(format!("n_values: every N must be >= 16, got {n}")));
        }
        if self.trials == 0 {
            return Err(LabError::Config("trials: must be >= 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(LabError::Config(format!("delta: must lie in (0, 1), got {}", self.delta)));
        }
        for &n in &self.n_values {
            self.schedule
                .alpha(n)
                .map_err(|e| LabError::Config(format!("schedule: {e}")))?;
        }
        Ok(())
    }
}

/// One aggregate row per `(N, α)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRecord {
    pub n: u64,
    pub alpha: f64,
    pub theta: Option<f64>,
    pub trials: u64,
    pub mean_set_size: f64,
    pub mean_product_size: f64,
    pub mean_deficiency: f64,
    /// Fraction of trials with `X_A >= δ(Nα)²/2`.
    pub empirical_tail_prob: f64,
    /// Markov bound clamped to `[0, 1]`.
    pub markov_bound: Option<f64>,
    pub markov_bound_raw: Option<f64>,
    pub exact_expectation: Option<f64>,
    /// Mean of `|AA| / ((|A|² + |A|)/2)` over trials with `|A| >= 2`.
    pub mean_ratio: Option<f64>,
}

/// Markov's inequality for the deficiency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkovBound {
    pub raw: f64,
    pub clamped: f64,
}

/// `P(X_A >= δ(Nα)²/2) <= 2 E[X_A] / (δ (Nα)²)`.
pub fn markov_bound(expected_deficiency: f64, n: u64, alpha: f64, delta: f64) -> Result<MarkovBound> {
    if !(delta > 0.0) {
        return Err(LabError::domain(format!("delta must be positive, got {delta}")));
    }
    let scale = n as f64 * alpha;
    if !(scale > 0.0) {
        return Err(LabError::domain("N * alpha must be positive"));
    }
    if !(expected_deficiency >= 0.0) {
        return Err(LabError::domain(format!(
            "expected deficiency must be non-negative, got {expected_deficiency}"
        )));
    }
    let raw = 2.0 * expected_deficiency / (delta * scale * scale);
    Ok(MarkovBound {
        raw,
        clamped: raw.clamp(0.0, 1.0),
    })
}

/// τ_N tables built so far, keyed by N.
#[derive(Debug, Default)]
pub struct TableCache {
    budget: MemoryBudget,
    tables: HashMap<u64, Arc<TauNTable>>,
}

impl TableCache {
    pub fn new(budget: MemoryBudget) -> Self {
        Self {
            budget,
            tables: HashMap::new(),
        }
    }

    pub fn get(&mut self, n: u64) -> Result<Arc<TauNTable>> {
        if let Some(t) = self.tables.get(&n) {
            return Ok(Arc::clone(t));
        }
        let t = Arc::new(TauNTable::build_with_budget(n, &self.budget)?);
        self.tables.insert(n, Arc::clone(&t));
        Ok(t)
    }
}

/// Outcome of a single trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub set_size: u64,
    pub product_set_size: u64,
    pub trivial: u64,
    pub deficiency: u64,
}

/// Runs `trials` seeded trials of `B(n, alpha)`, in trial order.
pub fn simulate_trials(n: u64, alpha: f64, trials: u64, master_seed: u64) -> Result<Vec<TrialOutcome>> {
    ModelParams::new(n, alpha, 0)?;
    Ok((0..trials)
        .into_par_iter()
        .map_init(ProductCounter::new, |counter, t| {
            let params = ModelParams {
                n_max: n,
                alpha,
                seed: trial_seed(master_seed, n, t),
            };
            let sample = sample_set(&params);
            let s = counter.stats(sample.elements());
            TrialOutcome {
                set_size: s.set_size,
                product_set_size: s.product_set_size,
                trivial: s.trivial,
                deficiency: s.deficiency,
            }
        })
        .collect())
}

/// Folds trial outcomes (in order) into a summary row.
pub fn summarize(
    n: u64,
    alpha: f64,
    delta: f64,
    outcomes: &[TrialOutcome],
    exact_expectation: Option<f64>,
    exact_deficiency: Option<f64>,
) -> Result<SummaryRecord> {
    let trials = outcomes.len() as u64;
    if trials == 0 {
        return Err(LabError::Config("trials: must be >= 1".into()));
    }
    let tf = trials as f64;
    let threshold = delta * (n as f64 * alpha).powi(2) / 2.0;
    let mut sum_size = 0.0;
    let mut sum_product = 0.0;
    let mut sum_def = 0.0;
    let mut tail = 0u64;
    let mut ratio_sum = 0.0;
    let mut ratio_count = 0u64;
    for o in outcomes {
        sum_size += o.set_size as f64;
        sum_product += o.product_set_size as f64;
        sum_def += o.deficiency as f64;
        // With α = 0 the threshold is 0 but no set has a deficiency, so the
        // event is only counted for a non-degenerate threshold.
        if threshold > 0.0 && o.deficiency as f64 >= threshold {
            tail += 1;
        }
        if o.set_size >= 2 {
            ratio_sum += o.product_set_size as f64 / o.trivial as f64;
            ratio_count += 1;
        }
    }
    let mean_deficiency = sum_def / tf;
    let markov = if n as f64 * alpha > 0.0 {
        let expected = exact_deficiency.unwrap_or(mean_deficiency).max(0.0);
        Some(markov_bound(expected, n, alpha, delta)?)
    } else {
        None
    };
    Ok(SummaryRecord {
        n,
        alpha,
        theta: theta_statistic(n as f64, alpha).ok(),
        trials,
        mean_set_size: sum_size / tf,
        mean_product_size: sum_product / tf,
        mean_deficiency,
        empirical_tail_prob: tail as f64 / tf,
        markov_bound: markov.map(|m| m.clamped),
        markov_bound_raw: markov.map(|m| m.raw),
        exact_expectation,
        mean_ratio: (ratio_count > 0).then(|| ratio_sum / ratio_count as f64),
    })
}

/// Runs the sweep, one record per N, sorted by `(N, α)`.
///
/// Trials may execute in any order on any number of threads; each trial's
/// seed is `trial_seed(master_seed, N, index)` and aggregation happens in
/// index order, so the records are identical for every execution plan.
/// The Markov column uses the exact `E[X_A]` when `compute_exact` is set and
/// the sample mean of `X_A` otherwise.
pub fn run_trials(config: &ExperimentConfig, cache: &mut TableCache) -> Result<Vec<SummaryRecord>> {
    config.validate()?;
    let mut records = Vec::with_capacity(config.n_values.len());
    for &n in &config.n_values {
        let alpha = config.schedule.alpha(n)?;
        let (exact, exact_def) = if config.compute_exact {
            let table = cache.get(n)?;
            let e = exact_expected_product_size(alpha, &table)?;
            (Some(e), Some(expected_trivial(n, alpha)? - e))
        } else {
            (None, None)
        };
        let outcomes = simulate_trials(n, alpha, config.trials, config.master_seed)?;
        records.push(summarize(n, alpha, config.delta, &outcomes, exact, exact_def)?);
    }
    records.sort_by(|a, b| a.n.cmp(&b.n).then(a.alpha.total_cmp(&b.alpha)));
    Ok(records)
}

/// Fraction of trials with `X_A >= 1`, i.e. with at least one collision.
pub fn equality_regime_frequency(n: u64, alpha: f64, trials: u64, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(LabError::domain("trials must be >= 1"));
    }
    let outcomes = simulate_trials(n, alpha, trials, seed)?;
    let hits = outcomes.iter().filter(|o| o.deficiency >= 1).count();
    Ok(hits as f64 / trials as f64)
}

/// Union bound `α⁴N²` on the probability of any collision.
pub fn collision_probability_bound(n: u64, alpha: f64) -> f64 {
    alpha.powi(4) * (n as f64).powi(2)
}
