//! The windowed divisor count τ_N(n) = #{(j, k) ∈ [N]² : jk = n} and the
//! multiplication-table count M(x).

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::MemoryBudget;
use crate::error::{LabError, Result};
use crate::seed::{combine, unit};
use crate::sieve::{PrimeCount, SieveTables};
use crate::stats::quantile_sorted;

/// τ_N(n) for every `n <= N²` (index 0 unused and zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauNTable {
    n_max: u64,
    counts: Vec<u16>,
}

impl TauNTable {
    pub fn build(n_max: u64) -> Result<Self> {
        Self::build_with_budget(n_max, &MemoryBudget::default())
    }

    /// Counts every ordered pair `(j, k) ∈ [N]²` into bucket `jk`.
    ///
    /// The output is cut into disjoint segments of consecutive `n`; each
    /// segment is filled independently by visiting, for every `j`, only the
    /// `k` whose product lands inside it.
    pub fn build_with_budget(n_max: u64, budget: &MemoryBudget) -> Result<Self> {
        if n_max == 0 {
            return Err(LabError::domain("N must be at least 1"));
        }
        let square = n_max
            .checked_mul(n_max)
            .filter(|&s| s < u64::MAX / 2)
            .ok_or(LabError::range("N", n_max, u32::MAX as u64))?;
        budget.check("tau_N table", square * 2)?;

        let len = (square + 1) as usize;
        let mut counts = vec![0u16; len];
        let seg = (1usize << 16).max(64 * n_max as usize);
        counts.par_chunks_mut(seg).enumerate().for_each(|(ci, chunk)| {
            let lo = (ci * seg) as u64;
            let hi = lo + chunk.len() as u64; // exclusive
            let j_first = lo.div_ceil(n_max).max(1);
            let j_last = n_max.min(hi - 1);
            for j in j_first..=j_last {
                let k_first = lo.div_ceil(j).max(1);
                let k_last = n_max.min((hi - 1) / j);
                let mut idx = j * k_first - lo;
                for _ in k_first..=k_last {
                    chunk[idx as usize] += 1;
                    idx += j;
                }
            }
        });
        Ok(Self { n_max, counts })
    }

    pub(crate) fn from_counts(n_max: u64, counts: Vec<u16>) -> Result<Self> {
        if n_max == 0 || counts.len() as u64 != n_max * n_max + 1 {
            return Err(LabError::Format(format!(
                "tau_N table for N = {n_max} must have N^2 + 1 entries, got {}",
                counts.len()
            )));
        }
        Ok(Self { n_max, counts })
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// Largest covered integer, `N²`.
    pub fn square(&self) -> u64 {
        self.n_max * self.n_max
    }

    /// Raw counts indexed by `n` (index 0 unused).
    pub fn counts(&self) -> &[u16] {
        &self.counts
    }

    pub fn get(&self, n: u64) -> Result<u32> {
        if n == 0 || n > self.square() {
            return Err(LabError::range("n", n, self.square()));
        }
        Ok(self.counts[n as usize] as u32)
    }

    /// `Σ τ_N(n)`, which is always `N²`.
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// `Σ τ_N(n)²`, the number of ordered quadruples in `[N]⁴` with `ab = cd`.
    pub fn second_moment(&self) -> u64 {
        self.counts.iter().map(|&c| (c as u64) * (c as u64)).sum()
    }

    /// `hist[v] = #{n <= N² : τ_N(n) = v}`, including `v = 0`.
    pub fn value_histogram(&self) -> Vec<u64> {
        let max = self.counts.iter().copied().max().unwrap_or(0) as usize;
        let mut hist = vec![0u64; max + 1];
        for &c in &self.counts[1..] {
            hist[c as usize] += 1;
        }
        hist
    }

    /// `Σ τ_N(n)^power` over `n <= N²` with `lo <= f(n) <= hi`.
    pub fn banded_moment(
        &self,
        sieve: &SieveTables,
        which: PrimeCount,
        lo: f64,
        hi: f64,
        power: u32,
    ) -> Result<u64> {
        if !(power == 1 || power == 2) {
            return Err(LabError::domain(format!("power must be 1 or 2, got {power}")));
        }
        if sieve.limit() < self.square() {
            return Err(LabError::range("N^2", self.square(), sieve.limit()));
        }
        let column = sieve.column(which);
        Ok(self.counts[1..]
            .iter()
            .zip(&column[1..])
            .filter(|&(_, &k)| lo <= k as f64 && k as f64 <= hi)
            .map(|(&c, _)| (c as u64).pow(power))
            .sum())
    }
}

/// τ_N(n) without building a table: divisors `d` of `n` with `d <= N` and
/// `n <= dN`.
pub fn tau_n_single(n_max: u64, n: u64, sieve: &SieveTables) -> Result<u64> {
    if n_max == 0 {
        return Err(LabError::domain("N must be at least 1"));
    }
    let square = n_max.saturating_mul(n_max);
    if n == 0 || n > square {
        return Err(LabError::range("n", n, square));
    }
    Ok(sieve
        .divisors(n)?
        .into_iter()
        .filter(|&d| d <= n_max && n <= d.saturating_mul(n_max))
        .count() as u64)
}

/// M(x): distinct products `m₁m₂` with `m₁, m₂ <= ⌊√x⌋`.
pub fn multiplication_table_count(x: u64) -> Result<u64> {
    multiplication_table_count_with_budget(x, &MemoryBudget::default())
}

pub fn multiplication_table_count_with_budget(x: u64, budget: &MemoryBudget) -> Result<u64> {
    if x == 0 {
        return Err(LabError::domain("x must be at least 1"));
    }
    let side = x.isqrt();
    let top = side * side;
    let words = (top / 64 + 1) as usize;
    budget.check("multiplication table bitmap", words as u64 * 8)?;
    let mut seen = vec![0u64; words];
    let mut distinct = 0u64;
    for a in 1..=side {
        for b in a..=side {
            let p = a * b;
            let (w, bit) = ((p / 64) as usize, p % 64);
            let mask = 1u64 << bit;
            if seen[w] & mask == 0 {
                seen[w] |= mask;
                distinct += 1;
            }
        }
    }
    Ok(distinct)
}

/// Quantiles (5%, 50%, 95%) of a diagnostic ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioQuantiles {
    pub q05: f64,
    pub q50: f64,
    pub q95: f64,
}

impl RatioQuantiles {
    fn from_values(mut values: Vec<f64>) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        values.sort_by(f64::total_cmp);
        Some(Self {
            q05: quantile_sorted(&values, 0.05),
            q50: quantile_sorted(&values, 0.50),
            q95: quantile_sorted(&values, 0.95),
        })
    }
}

/// How well τ(n)/log N and 2τ(n)(1 − log n / (2 log N)) track τ_N(n).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeuristicSummary {
    pub n_max: u64,
    pub range_max: u64,
    pub samples: usize,
    /// Quantiles of `τ_N(n) log N / τ(n)`.
    pub log_scaled: Option<RatioQuantiles>,
    /// Quantiles of `τ_N(n) / [2τ(n)(1 − log n / (2 log N))]`, over `n < N²`.
    pub refined: Option<RatioQuantiles>,
    pub refined_samples: usize,
}

/// Diagnostic only; draws `n` uniformly from `[1, N²]`.
pub fn heuristic_ratio_report(
    table: &TauNTable,
    sieve: &SieveTables,
    sample_size: usize,
    seed: u64,
) -> Result<HeuristicSummary> {
    heuristic_ratio_report_in(table, sieve, table.square(), sample_size, seed)
}

/// As [`heuristic_ratio_report`] with `n` drawn from `[1, range_max]`.
/// Draws with `τ_N(n) = 0` are rejected.
pub fn heuristic_ratio_report_in(
    table: &TauNTable,
    sieve: &SieveTables,
    range_max: u64,
    sample_size: usize,
    seed: u64,
) -> Result<HeuristicSummary> {
    if range_max == 0 || range_max > table.square() {
        return Err(LabError::range("range_max", range_max, table.square()));
    }
    if sieve.limit() < range_max {
        return Err(LabError::range("range_max", range_max, sieve.limit()));
    }
    let log_n = (table.n_max() as f64).ln();
    let mut plain = Vec::with_capacity(sample_size);
    let mut refined = Vec::with_capacity(sample_size);
    let max_draws = (sample_size as u64).saturating_mul(1000);
    let mut counter = 0u64;
    while plain.len() < sample_size && counter < max_draws {
        let u = unit(combine(seed, counter));
        counter += 1;
        let n = 1 + ((u * range_max as f64) as u64).min(range_max - 1);
        let tn = table.counts[n as usize] as f64;
        if tn == 0.0 {
            continue;
        }
        let tau = sieve.tau(n)? as f64;
        plain.push(tn * log_n / tau);
        if n < table.square() {
            let denom = 2.0 * tau * (1.0 - (n as f64).ln() / (2.0 * log_n));
            if denom > 0.0 {
                refined.push(tn / denom);
            }
        }
    }
    let samples = plain.len();
    let refined_samples = refined.len();
    Ok(HeuristicSummary {
        n_max: table.n_max(),
        range_max,
        samples,
        log_scaled: RatioQuantiles::from_values(plain),
        refined: RatioQuantiles::from_values(refined),
        refined_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enumerate(n_max: u64) -> Vec<u64> {
        let mut v = vec![0u64; (n_max * n_max + 1) as usize];
        for j in 1..=n_max {
            for k in 1..=n_max {
                v[(j * k) as usize] += 1;
            }
        }
        v
    }

    #[test]
    fn small_tables() {
        assert_eq!(TauNTable::build(1).unwrap().counts()[1..], [1]);
        assert_eq!(TauNTable::build(2).unwrap().counts()[1..], [1, 2, 0, 1]);
        assert_eq!(TauNTable::build(3).unwrap().get(6).unwrap(), 2);
    }

    #[test]
    fn segmented_build_matches_enumeration() {
        // Straddles several segments (seg = max(65536, 64 N)).
        for n_max in [1u64, 7, 100, 300, 1100] {
            let t = TauNTable::build(n_max).unwrap();
            let e = enumerate(n_max);
            assert!(t.counts().iter().zip(&e).all(|(&a, &b)| a as u64 == b), "N = {n_max}");
        }
    }

    #[test]
    fn totals_and_moments() {
        assert_eq!(TauNTable::build(4).unwrap().total(), 16);
        assert_eq!(TauNTable::build(100).unwrap().total(), 10_000);
        assert_eq!(TauNTable::build(1).unwrap().second_moment(), 1);
        assert_eq!(TauNTable::build(2).unwrap().second_moment(), 6);
        let mut quads = 0u64;
        for a in 1..=10u64 {
            for b in 1..=10 {
                for c in 1..=10 {
                    for d in 1..=10 {
                        quads += u64::from(a * b == c * d);
                    }
                }
            }
        }
        assert_eq!(TauNTable::build(10).unwrap().second_moment(), quads);
    }

    #[test]
    fn parity_marks_squares_in_window() {
        let n_max = 60u64;
        let t = TauNTable::build(n_max).unwrap();
        for n in 1..=n_max * n_max {
            let r = n.isqrt();
            let square_in_window = r * r == n && r <= n_max;
            assert_eq!(t.get(n).unwrap() % 2 == 1, square_in_window, "n = {n}");
        }
    }

    #[test]
    fn single_values() {
        let s = SieveTables::build(10_000).unwrap();
        assert_eq!(tau_n_single(5, 25, &s).unwrap(), 1);
        assert_eq!(tau_n_single(1, 1, &s).unwrap(), 1);
        assert_eq!(tau_n_single(77, 1, &s).unwrap(), 1);
        assert_eq!(tau_n_single(2, 3, &s).unwrap(), 0);
        assert!(tau_n_single(2, 5, &s).is_err());
        let t = TauNTable::build(100).unwrap();
        for n in 1..=10_000u64 {
            assert_eq!(tau_n_single(100, n, &s).unwrap(), t.get(n).unwrap() as u64);
        }
    }

    #[test]
    fn below_n_equals_tau() {
        let s = SieveTables::build(10_000).unwrap();
        let t = TauNTable::build(100).unwrap();
        for n in 1..=100u64 {
            assert_eq!(t.get(n).unwrap(), s.tau(n).unwrap());
        }
        for n in 1..=10_000u64 {
            assert!(t.get(n).unwrap() <= s.tau(n).unwrap());
        }
    }

    #[test]
    fn banded() {
        let s = SieveTables::build(65_536).unwrap();
        let t = TauNTable::build(16).unwrap();
        assert_eq!(t.banded_moment(&s, PrimeCount::Distinct, 0.0, 100.0, 1).unwrap(), 256);
        assert_eq!(t.banded_moment(&s, PrimeCount::Distinct, 3.0, 2.0, 2).unwrap(), 0);
        let direct: u64 = (1..=256u64)
            .filter(|&n| s.count(PrimeCount::WithMultiplicity, n).unwrap() <= 2)
            .map(|n| (t.get(n).unwrap() as u64).pow(2))
            .sum();
        assert_eq!(
            t.banded_moment(&s, PrimeCount::WithMultiplicity, 0.0, 2.0, 2).unwrap(),
            direct
        );
        let small = SieveTables::build(100).unwrap();
        assert!(t.banded_moment(&small, PrimeCount::Distinct, 0.0, 9.0, 1).is_err());
        assert!(t.banded_moment(&s, PrimeCount::Distinct, 0.0, 9.0, 3).is_err());
    }

    #[test]
    fn multiplication_table() {
        let brute = |x: u64| {
            let m = x.isqrt();
            let mut v: Vec<u64> = (1..=m).flat_map(|a| (1..=m).map(move |b| a * b)).collect();
            v.sort_unstable();
            v.dedup();
            v.len() as u64
        };
        assert_eq!(multiplication_table_count(2).unwrap(), 1);
        assert_eq!(multiplication_table_count(4).unwrap(), 3);
        assert_eq!(brute(100), 42);
        assert_eq!(multiplication_table_count(100).unwrap(), 42);
        let mut prev = 0;
        for x in 1..=3000u64 {
            let m = multiplication_table_count(x).unwrap();
            assert!(m <= x);
            assert!(m >= prev);
            prev = m;
            if x % 97 == 0 {
                assert_eq!(m, brute(x));
            }
        }
        assert!(matches!(
            multiplication_table_count_with_budget(1 << 30, &MemoryBudget::new(1024)),
            Err(LabError::Capacity { .. })
        ));
    }

    #[test]
    fn heuristic_report() {
        let s = SieveTables::build(40_000).unwrap();
        let t = TauNTable::build(200).unwrap();
        let a = heuristic_ratio_report(&t, &s, 500, 9).unwrap();
        let b = heuristic_ratio_report(&t, &s, 500, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 500);

        // Below N the window holds every divisor, so the first ratio is log N.
        let low = heuristic_ratio_report_in(&t, &s, 200, 100, 3).unwrap();
        let q = low.log_scaled.unwrap();
        let log_n = 200f64.ln();
        assert!((q.q05 - log_n).abs() < 1e-12 && (q.q95 - log_n).abs() < 1e-12);

        let empty = heuristic_ratio_report(&t, &s, 0, 1).unwrap();
        assert_eq!(empty.samples, 0);
        assert!(empty.log_scaled.is_none());
    }

    #[test]
    fn refined_ratio_at_two() {
        // N = 2, n = 2: τ_2(2) = 2 and 2·τ(2)·(1 − log 2 / (2 log 2)) = 2.
        let s = SieveTables::build(4).unwrap();
        let t = TauNTable::build(2).unwrap();
        let tn = t.get(2).unwrap() as f64;
        let denom = 2.0 * s.tau(2).unwrap() as f64 * (1.0 - 2f64.ln() / (2.0 * 2f64.ln()));
        assert_eq!(tn / denom, 1.0);
        let r = heuristic_ratio_report_in(&t, &s, 2, 50, 0).unwrap();
        // Draws are n = 1 (ratio 1/2) and n = 2 (ratio 1); n = 4 = N² is excluded.
        let q = r.refined.unwrap();
        assert_eq!(r.refined_samples, r.samples);
        assert_eq!((q.q05, q.q95), (0.5, 1.0));
    }

    #[test]
    fn capacity() {
        let err = TauNTable::build_with_budget(40_000, &MemoryBudget::default()).unwrap_err();
        assert!(matches!(err, LabError::Capacity { .. }));
        assert!(TauNTable::build_with_budget(32_768, &MemoryBudget::new(1 << 20)).is_err());
        // 32768² two-byte counts fill the default budget exactly.
        assert!(MemoryBudget::default().check("t", 32_768u64 * 32_768 * 2).is_ok());
    }
}
