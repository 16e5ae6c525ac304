//! Numerical checks of the auxiliary inequalities: Taylor truncations of
//! exp, Norton's partial exponential sums, Landau's bound on π_k, Erdős–Kac
//! and Turán–Kubilius statistics, the τ-tail bound and the dyadic partial
//! sum.
//!
//! Statements with unspecified implicit constants are turned into reported
//! ratios; where a ceiling or band is configured it is listed in
//! [`CheckConfig`].

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{LabError, Result};
use crate::sieve::{log_log, PrimeCount, SieveTables};
use crate::stats::CompensatedSum;

/// Largest term index in any truncated exponential series.
pub const MAX_SERIES_TERMS: u64 = 5000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Param {
    pub name: String,
    pub value: f64,
}

fn params(pairs: &[(&str, f64)]) -> Vec<Param> {
    pairs
        .iter()
        .map(|&(name, value)| Param {
            name: name.to_string(),
            value,
        })
        .collect()
}

/// One evaluated inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub parameters: Vec<Param>,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs` when `rhs > 0`.
    pub ratio: Option<f64>,
    /// Only set for checks with a configured ceiling or band.
    pub passed: Option<bool>,
}

impl BoundReport {
    fn new(name: &str, parameters: Vec<Param>, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.to_string(),
            parameters,
            lhs,
            rhs,
            ratio: (rhs > 0.0).then(|| lhs / rhs),
            passed: None,
        }
    }

    fn with_ceiling(mut self, ceiling: f64) -> Self {
        self.passed = Some(self.ratio.is_some_and(|r| r <= ceiling));
        self
    }

    fn with_band(mut self, (lo, hi): (f64, f64)) -> Self {
        self.passed = Some(self.ratio.is_some_and(|r| lo <= r && r <= hi));
        self
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.parameters.iter().find(|p| p.name == name).map(|p| p.value)
    }
}

/// Ceilings and bands standing in for unspecified implicit constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckConfig {
    /// Turán–Kubilius: `lhs · t²` ceiling.
    pub tk_ceiling: f64,
    /// Dyadic partial sum: ratio ceiling.
    pub dyadic_ceiling: f64,
    /// Norton: allowed ratio band.
    pub norton_band: (f64, f64),
    /// Landau: `k <= A log log N` counts as in regime.
    pub landau_a: f64,
    /// Erdős–Kac: band for the variance of the standardised count.
    pub ek_variance_band: (f64, f64),
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            tk_ceiling: 10.0,
            dyadic_ceiling: 20.0,
            norton_band: (1e-2, 1e2),
            landau_a: 3.0,
            ek_variance_band: (0.5, 1.5),
        }
    }
}

/// `T_n(x) = Σ_{k <= n} x^k / k!`, ascending in `k`, compensated.
pub fn truncated_exp(x: f64, n: u64) -> f64 {
    let mut sum = CompensatedSum::default();
    let mut term = 1.0;
    sum.add(term);
    for k in 1..=n {
        term *= x / k as f64;
        sum.add(term);
    }
    sum.value()
}

/// `exp(x) − T_n(x)` summed directly as the series tail, so that the sign
/// survives when the difference is far below the rounding error of `exp(x)`.
fn exp_tail(x: f64, n: u64) -> f64 {
    let mut term = 1.0;
    for k in 1..=n + 1 {
        term *= x / k as f64;
    }
    let mut sum = CompensatedSum::default();
    sum.add(term);
    let mut k = n + 1;
    loop {
        k += 1;
        term *= x / k as f64;
        sum.add(term);
        let past_peak = k as f64 > 2.0 * x.abs();
        if (past_peak && term.abs() <= 1e-30 * sum.value().abs()) || term == 0.0 || k > n + MAX_SERIES_TERMS {
            break;
        }
    }
    sum.value()
}

/// Checks `exp(x) > T_n(x)` for `x > 0`, and for `x < 0` the same when `n`
/// is odd and the reverse when `n` is even.
pub fn taylor_inequality_check(x: f64, n: u64) -> Result<BoundReport> {
    if x == 0.0 || !x.is_finite() {
        return Err(LabError::domain(format!("x must be finite and non-zero, got {x}")));
    }
    if x.abs() > 30.0 {
        return Err(LabError::domain(format!("|x| must be <= 30, got {x}")));
    }
    if n > MAX_SERIES_TERMS {
        return Err(LabError::domain(format!("n must be <= {MAX_SERIES_TERMS}")));
    }
    let lhs = x.exp();
    let rhs = truncated_exp(x, n);
    let margin = exp_tail(x, n);
    let expect_above = x > 0.0 || n % 2 == 1;
    let passed = if expect_above { margin > 0.0 } else { margin < 0.0 };
    let mut report = BoundReport::new(
        "taylor",
        params(&[("x", x), ("n", n as f64), ("margin", margin)]),
        lhs,
        rhs,
    );
    report.passed = Some(passed);
    Ok(report)
}

/// Norton: `Σ_{h<=k<=m} x^k/k!` against `min(√x, x/(x−m)) x^m / ⌊m⌋!`.
///
/// `x/(x−m)` is taken as `+∞` at `m = x`, so the minimum is `√x` there.
pub fn norton_ratio(x: f64, h: f64, m: f64) -> Result<BoundReport> {
    if !(0.0 <= h && h < m && m <= x) || m - h < x.sqrt() {
        return Err(LabError::domain(format!(
            "need 0 <= h < m <= x and m - h >= sqrt(x); got x={x}, h={h}, m={m}"
        )));
    }
    if m > MAX_SERIES_TERMS as f64 {
        return Err(LabError::domain(format!("m must be <= {MAX_SERIES_TERMS}")));
    }
    let k_lo = h.ceil() as u64;
    let k_hi = m.floor() as u64;
    let mut term = 1.0;
    let mut sum = CompensatedSum::default();
    for k in 0..=k_hi {
        if k > 0 {
            term *= x / k as f64;
        }
        if k >= k_lo {
            sum.add(term);
        }
    }
    // `term` is now x^⌊m⌋ / ⌊m⌋!.
    let peak = term * x.powf(m - k_hi as f64);
    let lhs = sum.value();
    if !lhs.is_finite() || !peak.is_finite() {
        return Err(LabError::domain(format!("x = {x} overflows the series")));
    }
    let factor = if m >= x { x.sqrt() } else { x.sqrt().min(x / (x - m)) };
    let report = BoundReport::new("norton", params(&[("x", x), ("h", h), ("m", m)]), lhs, factor * peak);
    Ok(report)
}

/// Norton ratios over the integer grid `0 <= h < m <= x`, `m − h >= √x`.
pub fn norton_grid(xs: &[u64], config: &CheckConfig) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for &x in xs {
        let xf = x as f64;
        for h in 0..x {
            for m in h + 1..=x {
                if ((m - h) as f64) < xf.sqrt() {
                    continue;
                }
                out.push(norton_ratio(xf, h as f64, m as f64)?.with_band(config.norton_band));
            }
        }
    }
    Ok(out)
}

fn check_square(sieve: &SieveTables, n: u64) -> Result<u64> {
    let square = n.saturating_mul(n);
    if square > sieve.limit() {
        return Err(LabError::range("N^2", square, sieve.limit()));
    }
    Ok(square)
}

fn ln_factorial(k: u64) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// `π_k(N²)` against `(N² / log N) (log log N)^{k−1} / (k−1)!`.
pub fn landau_ratio(sieve: &SieveTables, n: u64, k: u64, config: &CheckConfig) -> Result<BoundReport> {
    if n < 16 {
        return Err(LabError::domain(format!("N must be >= 16, got {n}")));
    }
    if k == 0 {
        return Err(LabError::domain("k must be >= 1"));
    }
    let square = check_square(sieve, n)?;
    let hist = sieve.prime_factor_histogram(square, PrimeCount::Distinct)?;
    let lhs = hist.get(k as usize).copied().unwrap_or(0) as f64;
    let nf = n as f64;
    let ll = log_log(nf);
    let rhs = (square as f64 / nf.ln()) * ((k - 1) as f64 * ll.ln() - ln_factorial(k - 1)).exp();
    let in_regime = (k as f64) <= config.landau_a * ll;
    Ok(BoundReport::new(
        "landau",
        params(&[("N", nf), ("k", k as f64), ("in_regime", f64::from(u8::from(in_regime)))]),
        lhs,
        rhs,
    ))
}

/// Empirical CDF of the standardised count at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdfPoint {
    pub t: f64,
    pub empirical: f64,
    pub normal: f64,
}

/// Distribution of `(f(n) − log log x) / sqrt(log log x)` over `n <= x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErdosKacReport {
    pub which: PrimeCount,
    pub x: u64,
    /// Number of integers summarised; equals `x`.
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub cdf: Vec<CdfPoint>,
}

impl ErdosKacReport {
    pub fn cdf_monotone(&self) -> bool {
        self.cdf.windows(2).all(|w| w[0].empirical <= w[1].empirical)
    }

    pub fn variance_in_band(&self, config: &CheckConfig) -> bool {
        let (lo, hi) = config.ek_variance_band;
        lo <= self.variance && self.variance <= hi
    }

    /// Rows for tabular output. The variance row is judged against the
    /// configured band and the CDF rows by monotonicity; the rest are
    /// informational.
    pub fn to_bound_reports(&self, config: &CheckConfig) -> Vec<BoundReport> {
        let base = format!("erdos_kac_{}", self.which);
        let x = self.x as f64;
        let mut rows = vec![
            BoundReport::new(&format!("{base}_mean"), params(&[("x", x)]), self.mean, 0.0),
            BoundReport::new(&format!("{base}_variance"), params(&[("x", x)]), self.variance, 1.0)
                .with_band(config.ek_variance_band),
            BoundReport::new(&format!("{base}_skewness"), params(&[("x", x)]), self.skewness, 0.0),
        ];
        for p in &self.cdf {
            rows.push(BoundReport::new(
                &format!("{base}_cdf"),
                params(&[("x", x), ("t", p.t)]),
                p.empirical,
                p.normal,
            ));
        }
        let mut mono = BoundReport::new(&format!("{base}_cdf_monotone"), params(&[("x", x)]), 0.0, 0.0);
        mono.passed = Some(self.cdf_monotone());
        rows.push(mono);
        rows
    }
}

pub const CDF_GRID: [f64; 7] = [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0];

pub fn erdos_kac_report(sieve: &SieveTables, x: u64, which: PrimeCount) -> Result<ErdosKacReport> {
    if x < 16 {
        return Err(LabError::domain(format!("x must be >= 16, got {x}")));
    }
    let hist = sieve.prime_factor_histogram(x, which)?;
    let count: u64 = hist.iter().sum();
    let ll = log_log(x as f64);
    let sd = ll.sqrt();
    let z = |k: usize| (k as f64 - ll) / sd;
    let n = count as f64;
    let mean = hist.iter().enumerate().map(|(k, &c)| c as f64 * z(k)).sum::<f64>() / n;
    let central = |p: i32| {
        hist.iter()
            .enumerate()
            .map(|(k, &c)| c as f64 * (z(k) - mean).powi(p))
            .sum::<f64>()
            / n
    };
    let variance = central(2);
    let skewness = central(3) / variance.powf(1.5);
    let normal = Normal::standard();
    let cdf = CDF_GRID
        .iter()
        .map(|&t| {
            let below: u64 = hist
                .iter()
                .enumerate()
                .filter(|&(k, _)| z(k) <= t)
                .map(|(_, &c)| c)
                .sum();
            CdfPoint {
                t,
                empirical: below as f64 / n,
                normal: normal.cdf(t),
            }
        })
        .collect();
    Ok(ErdosKacReport {
        which,
        x,
        count,
        mean,
        variance,
        skewness,
        cdf,
    })
}

/// Standard normal upper tail against `e^{−t²/2} / (t sqrt(2π))`.
pub fn gaussian_tail_check(t: f64) -> Result<BoundReport> {
    if !(t > 0.0) {
        return Err(LabError::domain(format!("t must be positive, got {t}")));
    }
    let lhs = Normal::standard().sf(t);
    let rhs = (-t * t / 2.0).exp() / (t * (2.0 * std::f64::consts::PI).sqrt());
    let mut r = BoundReport::new("gaussian_tail", params(&[("t", t)]), lhs, rhs);
    r.passed = Some(lhs <= rhs);
    Ok(r)
}

/// `(1/x) #{n <= x : |ω(n) − log log x| > t sqrt(log log x)}` against `1/t²`.
pub fn turan_kubilius_tail(sieve: &SieveTables, x: u64, t: f64, config: &CheckConfig) -> Result<BoundReport> {
    if x < 16 {
        return Err(LabError::domain(format!("x must be >= 16, got {x}")));
    }
    if !(t >= 1.0) {
        return Err(LabError::domain(format!("t must be >= 1, got {t}")));
    }
    let hist = sieve.prime_factor_histogram(x, PrimeCount::Distinct)?;
    let ll = log_log(x as f64);
    let width = t * ll.sqrt();
    let outside: u64 = hist
        .iter()
        .enumerate()
        .filter(|&(k, _)| (k as f64 - ll).abs() > width)
        .map(|(_, &c)| c)
        .sum();
    let lhs = outside as f64 / x as f64;
    Ok(BoundReport::new("turan_kubilius", params(&[("x", x as f64), ("t", t)]), lhs, 1.0 / (t * t))
        .with_ceiling(config.tk_ceiling))
}

/// `Σ_{2<=t<=N/2} 1 / (2^{Ω(t)} t sqrt(log t) log(N/t))` against
/// `log log N / log N`.
pub fn dyadic_partial_sum(sieve: &SieveTables, n: u64, config: &CheckConfig) -> Result<BoundReport> {
    if n < 12 {
        return Err(LabError::domain(format!("N must be >= 12, got {n}")));
    }
    let top = n / 2;
    if top > sieve.limit() {
        return Err(LabError::range("N/2", top, sieve.limit()));
    }
    let big_omega = sieve.column(PrimeCount::WithMultiplicity);
    let nf = n as f64;
    let mut sum = CompensatedSum::default();
    for t in 2..=top {
        let tf = t as f64;
        let weight = 0.5f64.powi(big_omega[t as usize] as i32);
        sum.add(weight / (tf * tf.ln().sqrt() * (nf / tf).ln()));
    }
    let rhs = log_log(nf) / nf.ln();
    Ok(BoundReport::new("dyadic_partial_sum", params(&[("N", nf)]), sum.value(), rhs)
        .with_ceiling(config.dyadic_ceiling))
}

/// `η(ε) = (1 + ε/2) log(1 + ε/2) − ε/2`.
pub fn tail_eta(eps: f64) -> f64 {
    let u = eps / 2.0;
    (1.0 + u) * u.ln_1p() - u
}

/// The τ-weighted ω-tail against `N² (log N)^{1 − 2η}`.
pub fn tail_tau_bound_check(sieve: &SieveTables, n: u64, eps: f64) -> Result<BoundReport> {
    let lhs = sieve.tail_tau_sum(n, eps)? as f64;
    let nf = n as f64;
    let eta = tail_eta(eps);
    let rhs = nf * nf * nf.ln().powf(1.0 - 2.0 * eta);
    Ok(BoundReport::new(
        "tail_tau",
        params(&[("N", nf), ("eps", eps), ("eta", eta)]),
        lhs,
        rhs,
    ))
}

/// Named groups of checks run by the `bounds` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Taylor,
    Norton,
    Landau,
    ErdosKac,
    TuranKubilius,
    Dyadic,
    TailTau,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Taylor,
        Suite::Norton,
        Suite::Landau,
        Suite::ErdosKac,
        Suite::TuranKubilius,
        Suite::Dyadic,
        Suite::TailTau,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Taylor => "taylor",
            Suite::Norton => "norton",
            Suite::Landau => "landau",
            Suite::ErdosKac => "ek",
            Suite::TuranKubilius => "tk",
            Suite::Dyadic => "dyadic",
            Suite::TailTau => "tailtau",
        }
    }

    pub fn needs_sieve(self) -> bool {
        !matches!(self, Suite::Taylor | Suite::Norton)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| LabError::Config(format!("unknown suite {s:?}")))
    }
}

/// The 200 midpoints of a uniform partition of `[−10, 10]`; none is zero.
pub fn taylor_grid() -> Vec<f64> {
    (0..200).map(|i| -10.0 + 20.0 * (i as f64 + 0.5) / 200.0).collect()
}

pub const NORTON_XS: [u64; 3] = [16, 64, 100];
pub const TK_TS: [f64; 4] = [1.0, 2.0, 4.0, 8.0];
pub const TAIL_TAU_EPS: [f64; 3] = [0.25, 0.5, 0.75];
pub const LANDAU_MAX_K: u64 = 6;

/// Runs one suite; suites that read arithmetic tables need `sieve`, whose
/// limit also bounds the grids.
pub fn run_suite(suite: Suite, sieve: Option<&SieveTables>, config: &CheckConfig) -> Result<Vec<BoundReport>> {
    let need = || sieve.ok_or_else(|| LabError::Config(format!("suite {suite} needs sieve tables")));
    let mut out = Vec::new();
    match suite {
        Suite::Taylor => {
            for x in taylor_grid() {
                for n in 0..=12 {
                    out.push(taylor_inequality_check(x, n)?);
                }
            }
        }
        Suite::Norton => out = norton_grid(&NORTON_XS, config)?,
        Suite::Landau => {
            let s = need()?;
            for n in [16u64, 64, 256, 1024, 4096, 10_000].into_iter().filter(|&n| n * n <= s.limit()) {
                for k in 1..=LANDAU_MAX_K {
                    out.push(landau_ratio(s, n, k, config)?);
                }
            }
        }
        Suite::ErdosKac => {
            let s = need()?;
            for which in PrimeCount::ALL {
                out.extend(erdos_kac_report(s, s.limit(), which)?.to_bound_reports(config));
            }
            for t in [1.0, 2.0, 3.0] {
                out.push(gaussian_tail_check(t)?);
            }
        }
        Suite::TuranKubilius => {
            let s = need()?;
            let mut xs = vec![10_000u64, 1_000_000, s.limit()];
            xs.retain(|&x| x >= 16 && x <= s.limit());
            xs.sort_unstable();
            xs.dedup();
            for x in xs {
                for t in TK_TS {
                    out.push(turan_kubilius_tail(s, x, t, config)?);
                }
            }
        }
        Suite::Dyadic => {
            let s = need()?;
            let ns = std::iter::once(12u64).chain((3..=9).map(|e| 10u64.pow(e)));
            for n in ns.filter(|&n| n / 2 <= s.limit()) {
                out.push(dyadic_partial_sum(s, n, config)?);
            }
        }
        Suite::TailTau => {
            let s = need()?;
            for n in [16u64, 64, 256, 1000, 4096, 10_000].into_iter().filter(|&n| n * n <= s.limit()) {
                for eps in TAIL_TAU_EPS {
                    out.push(tail_tau_bound_check(s, n, eps)?);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncations() {
        assert_eq!(truncated_exp(3.7, 0), 1.0);
        assert_eq!(truncated_exp(1.0, 2), 2.5);
        assert!((truncated_exp(-1.0, 3) - 1.0 / 3.0).abs() < 1e-15);
        for i in -100..=100 {
            let x = i as f64 / 10.0;
            assert!((truncated_exp(x, 50) - x.exp()).abs() <= 1e-12 * x.exp().max(1.0));
        }
    }

    #[test]
    fn taylor_directions() {
        assert_eq!(taylor_inequality_check(1.0, 5).unwrap().passed, Some(true));
        let even = taylor_inequality_check(-0.5, 2).unwrap();
        assert!(even.lhs < even.rhs);
        assert_eq!(even.passed, Some(true));
        let odd = taylor_inequality_check(-0.5, 3).unwrap();
        assert!(odd.lhs > odd.rhs);
        assert_eq!(odd.passed, Some(true));
        assert!(taylor_inequality_check(0.0, 3).is_err());
        assert!(taylor_inequality_check(31.0, 3).is_err());
        // The difference is ~1e-27 here, far below the rounding of exp.
        let tiny = taylor_inequality_check(-0.05, 12).unwrap();
        assert_eq!(tiny.passed, Some(true));
        assert!(tiny.param("margin").unwrap() < 0.0);
    }

    #[test]
    fn norton_examples() {
        let r = norton_ratio(4.0, 0.0, 2.0).unwrap();
        assert_eq!(r.lhs, 13.0);
        assert_eq!(r.rhs, 16.0);

        let r = norton_ratio(16.0, 4.0, 16.0).unwrap();
        let mut direct = 0.0;
        let mut fact = 1.0;
        for k in 1..=16u32 {
            fact *= k as f64;
            if k >= 4 {
                direct += 16f64.powi(k as i32) / fact;
            }
        }
        assert!((r.lhs - direct).abs() <= 1e-12 * direct);
        assert!((r.rhs - 4.0 * 16f64.powi(16) / fact).abs() <= 1e-12 * r.rhs);

        assert!(norton_ratio(16.0, 5.0, 5.0).is_err());
        assert!(norton_ratio(16.0, 4.0, 7.0).is_err());
    }

    #[test]
    fn norton_band_holds_on_grid() {
        let reports = norton_grid(&NORTON_XS, &CheckConfig::default()).unwrap();
        assert!(!reports.is_empty());
        assert!(reports.iter().all(|r| r.passed == Some(true)));
    }

    #[test]
    fn landau_small() {
        let s = SieveTables::build(65_536).unwrap();
        let r = landau_ratio(&s, 16, 1, &CheckConfig::default()).unwrap();
        let prime_powers = (2..=256u64)
            .filter(|&n| {
                let p = (2..=n).find(|p| n % p == 0).unwrap();
                let mut m = n;
                while m % p == 0 {
                    m /= p;
                }
                m == 1
            })
            .count();
        assert_eq!(r.lhs, prime_powers as f64);
        let far = landau_ratio(&s, 16, 40, &CheckConfig::default()).unwrap();
        assert_eq!(far.param("in_regime"), Some(0.0));
        assert_eq!(far.passed, None);
        assert!(landau_ratio(&s, 15, 1, &CheckConfig::default()).is_err());
        let grid = run_suite(Suite::Landau, Some(&s), &CheckConfig::default()).unwrap();
        assert!(grid.iter().all(|r| r.ratio.unwrap().is_finite()));
    }

    #[test]
    fn erdos_kac_shape() {
        let s = SieveTables::build(100_000).unwrap();
        for which in PrimeCount::ALL {
            let r = erdos_kac_report(&s, 100_000, which).unwrap();
            assert_eq!(r.count, 100_000);
            assert!(r.cdf_monotone());
            assert_eq!(r.cdf.len(), 7);
        }
        assert!(erdos_kac_report(&s, 15, PrimeCount::Distinct).is_err());
    }

    #[test]
    fn gaussian_tail() {
        let r = gaussian_tail_check(2.0).unwrap();
        assert_eq!(r.passed, Some(true));
        assert!((r.rhs - (-2f64).exp() / (2.0 * (2.0 * std::f64::consts::PI).sqrt())).abs() < 1e-16);
    }

    #[test]
    fn turan_kubilius() {
        let s = SieveTables::build(100_000).unwrap();
        let cfg = CheckConfig::default();
        let mut prev = f64::INFINITY;
        for t in [1.0, 1.5, 2.0, 3.0, 4.0, 8.0, 50.0] {
            let r = turan_kubilius_tail(&s, 100_000, t, &cfg).unwrap();
            assert!(r.lhs <= prev);
            prev = r.lhs;
            assert_eq!(r.passed, Some(true));
        }
        assert_eq!(prev, 0.0);
        assert!(turan_kubilius_tail(&s, 100_000, 0.5, &cfg).is_err());
    }

    #[test]
    fn dyadic_twelve() {
        let s = SieveTables::build(100).unwrap();
        let r = dyadic_partial_sum(&s, 12, &CheckConfig::default()).unwrap();
        let omega = [1, 1, 2, 1, 2]; // Ω(2..=6)
        let direct: f64 = (2..=6u32)
            .zip(omega)
            .map(|(t, o)| {
                let t = t as f64;
                1.0 / (2f64.powi(o) * t * t.ln().sqrt() * (12.0 / t).ln())
            })
            .sum();
        assert!((r.lhs - direct).abs() < 1e-14);
        assert!(r.lhs > 0.0);
        assert!(dyadic_partial_sum(&s, 11, &CheckConfig::default()).is_err());
        assert!(dyadic_partial_sum(&s, 202, &CheckConfig::default()).is_err());
    }

    #[test]
    fn eta_values() {
        let direct = 1.5 * 1.5f64.ln() - 0.5;
        assert!((tail_eta(1.0) - direct).abs() < 1e-15);
        assert!((tail_eta(1.0) - 0.108_197_66).abs() < 1e-8);
        assert!(tail_eta(0.01) < 1e-4);
        assert!(tail_eta(0.01) > 0.0);
    }

    #[test]
    fn tail_tau_report() {
        let s = SieveTables::build(65_536).unwrap();
        let r = tail_tau_bound_check(&s, 256, 0.5).unwrap();
        assert_eq!(r.lhs, s.tail_tau_sum(256, 0.5).unwrap() as f64);
        assert!(r.ratio.unwrap() > 0.0);
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
        assert!(run_suite(Suite::Dyadic, None, &CheckConfig::default()).is_err());
    }
}
