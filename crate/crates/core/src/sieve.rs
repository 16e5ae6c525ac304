//! Smallest-prime-factor sieve and the additive/multiplicative functions
//! derived from it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::budget::MemoryBudget;
use crate::error::{LabError, Result};

/// Which prime-factor counting function to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeCount {
    /// ω(n): distinct prime factors.
    Distinct,
    /// Ω(n): prime factors counted with multiplicity.
    WithMultiplicity,
    /// Ω₂(n): odd prime factors counted with multiplicity.
    OddWithMultiplicity,
}

impl PrimeCount {
    pub const ALL: [PrimeCount; 3] = [
        PrimeCount::Distinct,
        PrimeCount::WithMultiplicity,
        PrimeCount::OddWithMultiplicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PrimeCount::Distinct => "omega",
            PrimeCount::WithMultiplicity => "big_omega",
            PrimeCount::OddWithMultiplicity => "big_omega_2",
        }
    }
}

impl fmt::Display for PrimeCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-integer arithmetic data for every `n <= limit`.
///
/// Index 0 is unused. `spf[1]` is stored as 1.
#[derive(Clone, PartialEq, Eq)]
pub struct SieveTables {
    pub(crate) limit: u32,
    pub(crate) spf: Vec<u32>,
    pub(crate) omega: Vec<u8>,
    pub(crate) big_omega: Vec<u8>,
    pub(crate) big_omega_2: Vec<u8>,
    pub(crate) tau: Vec<u16>,
}

impl fmt::Debug for SieveTables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SieveTables").field("limit", &self.limit).finish_non_exhaustive()
    }
}

/// Bytes per covered integer in a published table.
pub(crate) const BYTES_PER_ENTRY: u64 = 4 + 1 + 1 + 1 + 2;

/// `log log n`, the normal order of ω.
#[inline]
pub(crate) fn log_log(n: f64) -> f64 {
    n.ln().ln()
}

impl SieveTables {
    /// Builds tables up to `limit` under the default 2 GiB budget.
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_budget(limit, &MemoryBudget::default())
    }

    /// Linear sieve: every composite is struck exactly once by its smallest
    /// prime factor, and all derived functions are filled in the same sweep
    /// from `n / spf(n)`.
    pub fn build_with_budget(limit: u64, budget: &MemoryBudget) -> Result<Self> {
        if limit == 0 {
            return Err(LabError::domain("sieve limit must be at least 1"));
        }
        if limit >= u32::MAX as u64 {
            return Err(LabError::range("sieve limit", limit, u32::MAX as u64 - 1));
        }
        let entries = limit + 1;
        // One scratch byte per entry for the exponent of the smallest prime,
        // plus the prime list (bounded by 1.26 x / ln x, rounded up).
        let primes_bound = if limit < 100 { 32 } else { (1.3 * limit as f64 / (limit as f64).ln()) as u64 };
        let required = entries * (BYTES_PER_ENTRY + 1) + 4 * primes_bound;
        budget.check("sieve tables", required)?;

        let len = entries as usize;
        let mut spf = vec![0u32; len];
        let mut omega = vec![0u8; len];
        let mut big_omega = vec![0u8; len];
        let mut big_omega_2 = vec![0u8; len];
        let mut tau = vec![0u16; len];
        let mut spf_exp = vec![0u8; len];
        let mut primes: Vec<u32> = Vec::with_capacity(primes_bound as usize);

        spf[1] = 1;
        tau[1] = 1;
        let lim = limit as usize;
        for n in 2..=lim {
            if spf[n] == 0 {
                spf[n] = n as u32;
                primes.push(n as u32);
            }
            let p = spf[n];
            for &q in &primes {
                if q > p {
                    break;
                }
                let m = n * q as usize;
                if m > lim {
                    break;
                }
                spf[m] = q;
            }

            let m = n / p as usize;
            big_omega[n] = big_omega[m] + 1;
            big_omega_2[n] = big_omega_2[m] + u8::from(p != 2);
            if spf[m] == p {
                let e = spf_exp[m] + 1;
                spf_exp[n] = e;
                omega[n] = omega[m];
                tau[n] = tau[m] / e as u16 * (e as u16 + 1);
            } else {
                spf_exp[n] = 1;
                omega[n] = omega[m] + 1;
                tau[n] = tau[m] * 2;
            }
        }

        Ok(Self {
            limit: limit as u32,
            spf,
            omega,
            big_omega,
            big_omega_2,
            tau,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit as u64
    }

    fn check_n(&self, what: &'static str, n: u64) -> Result<usize> {
        if n == 0 || n > self.limit as u64 {
            return Err(LabError::range(what, n, self.limit as u64));
        }
        Ok(n as usize)
    }

    /// Smallest prime factor; 1 for n = 1.
    pub fn spf(&self, n: u64) -> Result<u64> {
        Ok(self.spf[self.check_n("n", n)?] as u64)
    }

    pub fn tau(&self, n: u64) -> Result<u32> {
        Ok(self.tau[self.check_n("n", n)?] as u32)
    }

    pub fn count(&self, which: PrimeCount, n: u64) -> Result<u8> {
        Ok(self.column(which)[self.check_n("n", n)?])
    }

    /// The whole column for `which`, indexed by `n` (index 0 unused).
    pub fn column(&self, which: PrimeCount) -> &[u8] {
        match which {
            PrimeCount::Distinct => &self.omega,
            PrimeCount::WithMultiplicity => &self.big_omega,
            PrimeCount::OddWithMultiplicity => &self.big_omega_2,
        }
    }

    pub fn tau_column(&self) -> &[u16] {
        &self.tau
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit as u64 && self.spf[n as usize] as u64 == n
    }

    /// Prime factorisation as `(p, e)` pairs in increasing `p`.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        let mut n = self.check_n("n", n)?;
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        Ok(out)
    }

    /// All positive divisors of `n`, ascending.
    pub fn divisors(&self, n: u64) -> Result<Vec<u64>> {
        let factors = self.factorize(n)?;
        let mut divs = Vec::with_capacity(self.tau[n as usize] as usize);
        divs.push(1u64);
        for (p, e) in factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        Ok(divs)
    }

    fn check_x(&self, x: u64) -> Result<usize> {
        if x > self.limit as u64 {
            return Err(LabError::range("x", x, self.limit as u64));
        }
        Ok(x as usize)
    }

    /// `#{n <= x : f(n) = k}` for every `k`; the counts sum to `x`.
    pub fn prime_factor_histogram(&self, x: u64, which: PrimeCount) -> Result<Vec<u64>> {
        let x = self.check_x(x)?;
        let mut hist = vec![0u64; 40];
        for &k in &self.column(which)[1..=x] {
            hist[k as usize] += 1;
        }
        while hist.len() > 1 && *hist.last().unwrap() == 0 {
            hist.pop();
        }
        if x == 0 {
            hist.clear();
        }
        Ok(hist)
    }

    /// `Σ_{n <= x} y^{f(n)}`.
    pub fn weighted_power_sum(&self, y: f64, x: u64, which: PrimeCount) -> Result<f64> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(LabError::domain(format!("weight base y must be positive, got {y}")));
        }
        if x == 0 {
            return Err(LabError::domain("x must be at least 1"));
        }
        let hist = self.prime_factor_histogram(x, which)?;
        Ok(hist
            .iter()
            .enumerate()
            .map(|(k, &c)| c as f64 * y.powi(k as i32))
            .sum())
    }

    /// `Σ_{n <= x} τ(n²)`, using `τ(n²) = Π (2e + 1)` over the factorisation
    /// of `n`.
    pub fn tau_square_sum(&self, x: u64) -> Result<u64> {
        if x == 0 {
            return Err(LabError::domain("x must be at least 1"));
        }
        let x = self.check_x(x)?;
        let mut total = 0u64;
        for n in 1..=x {
            let mut rest = n;
            let mut t = 1u64;
            while rest > 1 {
                let p = self.spf[rest] as usize;
                let mut e = 0u64;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                t *= 2 * e + 1;
            }
            total += t;
        }
        Ok(total)
    }

    /// Count of `n <= x` with `lo <= f(n) <= hi`.
    pub fn banded_count(&self, x: u64, which: PrimeCount, lo: f64, hi: f64) -> Result<u64> {
        let x = self.check_x(x)?;
        Ok(self.column(which)[1..=x]
            .iter()
            .filter(|&&k| lo <= k as f64 && k as f64 <= hi)
            .count() as u64)
    }

    fn tail_window(&self, n_max: u64, eps: f64) -> Result<(usize, f64, f64)> {
        if n_max < 16 {
            return Err(LabError::domain(format!(
                "N = {n_max} < 16: log log N is too small for the omega band"
            )));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(LabError::domain(format!("eps must lie in (0, 1), got {eps}")));
        }
        let square = n_max
            .checked_mul(n_max)
            .ok_or(LabError::range("N^2", u64::MAX, self.limit as u64))?;
        if square > self.limit as u64 {
            return Err(LabError::range("N^2", square, self.limit as u64));
        }
        let ll = log_log(n_max as f64);
        Ok((square as usize, 2.0 * ll, eps * ll))
    }

    /// `Σ τ(n)` over `n <= N²` with `|ω(n) − 2 log log N| > ε log log N`.
    pub fn tail_tau_sum(&self, n_max: u64, eps: f64) -> Result<u64> {
        let (square, centre, width) = self.tail_window(n_max, eps)?;
        Ok((1..=square)
            .filter(|&n| (self.omega[n] as f64 - centre).abs() > width)
            .map(|n| self.tau[n] as u64)
            .sum())
    }

    /// Complement of [`Self::tail_tau_sum`]: the sum of `τ(n)` inside the band.
    pub fn band_tau_sum(&self, n_max: u64, eps: f64) -> Result<u64> {
        let (square, centre, width) = self.tail_window(n_max, eps)?;
        Ok((1..=square)
            .filter(|&n| (self.omega[n] as f64 - centre).abs() <= width)
            .map(|n| self.tau[n] as u64)
            .sum())
    }

    /// `Σ_{n <= x} τ(n)`.
    pub fn tau_sum(&self, x: u64) -> Result<u64> {
        let x = self.check_x(x)?;
        Ok(self.tau[1..=x].iter().map(|&t| t as u64).sum())
    }
}
