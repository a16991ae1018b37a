//! Deterministic prime sweeps: Frobenius traces for every good prime up to
//! a bound, and numerical moment estimates built from them.
//!
//! Reproducibility contract: moments are accumulated per fixed-width prime
//! range in ascending order and the per-range float sums are merged in
//! range order, so for a given `(m, bound, selector, max_moment)` the
//! output is bit-for-bit identical across runs on the same platform.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{CmError, FrobeniusError};
use crate::modq::Barrett;
use crate::stickelberger::torsion_free_test;

/// Width of one accumulation range.
pub const RANGE_SIZE: u64 = 1 << 16;

/// Largest sweep bound; a sweep is `O(bound * log)` with per-prime tables.
pub const MAX_SWEEP_BOUND: u64 = 1 << 24;

/// Largest numerical moment order.
pub const MAX_NUMERICAL_MOMENT: usize = 12;

/// Which primes enter a moment average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeSelector {
    /// Every good prime (coprime to 2m).
    All,
    /// Only split primes `p = 1 (mod m)`.
    CongruentOneModM,
    /// Split primes whose Frobenius-root group is torsion-free; the
    /// closest prime-by-prime stand-in for averaging over the splitting
    /// field implemented here.
    TorsionFree,
}

impl PrimeSelector {
    pub fn label(&self) -> &'static str {
        match self {
            PrimeSelector::All => "all",
            PrimeSelector::CongruentOneModM => "congruent-1-mod-m",
            PrimeSelector::TorsionFree => "torsion-free",
        }
    }
}

/// Traces `t_p` for every good prime `p <= bound`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSweep {
    pub m: u64,
    pub bound: u64,
    pub entries: Vec<(u64, i64)>,
}

fn validate_modulus(m: u64) -> Result<(), FrobeniusError> {
    if m < 3 {
        return Err(CmError::InvalidModulus { modulus: m }.into());
    }
    if m % 2 == 0 {
        return Err(CmError::OddModulusRequired { modulus: m }.into());
    }
    Ok(())
}

/// Simple sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; (n + 1) as usize];
    let mut out = Vec::new();
    for p in 2..=n {
        if composite[p as usize] {
            continue;
        }
        out.push(p);
        let mut k = p * p;
        while k <= n {
            composite[k as usize] = true;
            k += p;
        }
    }
    out
}

fn least_primitive_root(p: u64, barrett: &Barrett) -> u64 {
    let factors = crate::ff::distinct_prime_factors(p - 1);
    'candidate: for g in 2..p {
        for &ell in &factors {
            if barrett.powmod(g, (p - 1) / ell) == 1 {
                continue 'candidate;
            }
        }
        return g;
    }
    unreachable!("every prime field has a primitive root");
}

/// `t_p` for one prime by the d-fold symmetry of `x -> x^m`:
/// with `d = gcd(m, p-1)` the map ranges over the d-th powers `H`, so
/// `t_p = -(chi_2(-1) + d * sum over y in H of chi_2(y - 1))`, and `d = 1`
/// forces `t_p = 0` with no table at all.
pub fn trace_direct(m: u64, p: u64) -> Result<i64, FrobeniusError> {
    validate_modulus(m)?;
    if p < 3 || m % p == 0 {
        return Err(FrobeniusError::BadPrime { p, two_m: 2 * m });
    }
    let d = {
        let mut a = m;
        let mut b = p - 1;
        while b != 0 {
            let r = a % b;
            a = b;
            b = r;
        }
        a
    };
    if d == 1 {
        return Ok(0);
    }
    let barrett = Barrett::new(p);

    // chi_2 table of nonzero squares, built with additions only.
    let mut square = vec![false; p as usize];
    let mut v: u64 = 0;
    let mut step: u64 = 1;
    for _ in 0..(p + 1) / 2 {
        v += step;
        if v >= p {
            v -= p;
        }
        step += 2;
        if step >= p {
            step -= p;
        }
        square[v as usize] = true;
    }
    square[0] = false;

    let g = least_primitive_root(p, &barrett);
    let gd = barrett.powmod(g, d);
    let mut acc: i64 = 0;
    let mut y: u64 = 1;
    for _ in 0..(p - 1) / d {
        if y != 1 {
            acc += if square[(y - 1) as usize] { 1 } else { -1 };
        }
        y = barrett.mulmod(y, gd);
    }
    let chi2_neg1: i64 = if p % 4 == 1 { 1 } else { -1 };
    Ok(-(chi2_neg1 + d as i64 * acc))
}

/// Traces for every good prime up to `bound`.  The primes are split into
/// disjoint value ranges of width [`RANGE_SIZE`], swept in parallel, and
/// concatenated in ascending range order, so the result does not depend on
/// the number of workers.
pub fn sweep_traces(m: u64, bound: u64) -> Result<TraceSweep, FrobeniusError> {
    validate_modulus(m)?;
    if bound > MAX_SWEEP_BOUND {
        return Err(FrobeniusError::BoundExceeded { q: bound as u128, bound: MAX_SWEEP_BOUND });
    }
    let primes = primes_up_to(bound);
    let ranges: Vec<&[u64]> = primes.chunk_by(|a, b| a / RANGE_SIZE == b / RANGE_SIZE).collect();
    let swept = ranges
        .into_par_iter()
        .map(|range| {
            range
                .iter()
                .filter(|&&p| p != 2 && m % p != 0)
                .map(|&p| trace_direct(m, p).map(|t| (p, t)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TraceSweep { m, bound, entries: swept.concat() })
}

/// Moment sums over one prime range `[lo, lo + RANGE_SIZE)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeSummary {
    pub lo: u64,
    pub count: u64,
    /// `sum (t_p / sqrt(p))^n` for `n = 1..=max_moment`, accumulated in
    /// ascending prime order.
    pub float_sums: Vec<f64>,
    /// Exact `sum t_p^n` for the same primes.
    pub exact_sums: Vec<BigInt>,
}

/// Numerical moment estimates `M_n = (1/N) sum (t_p / sqrt(p))^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericalMoments {
    pub m: u64,
    pub bound: u64,
    pub selector: PrimeSelector,
    pub max_moment: usize,
    /// Number of primes in the average.
    pub count: u64,
    /// `moments[n-1] = M_n` for `n = 1..=max_moment`.
    pub moments: Vec<f64>,
    /// Exact integer trace power sums `sum t_p^n`, same indexing.
    pub exact_power_sums: Vec<BigInt>,
    pub ranges: Vec<RangeSummary>,
}

impl NumericalMoments {
    /// Tolerance band for an odd moment `M_n` around zero: four standard
    /// errors of the summand (estimated through `M_{2n}`) plus a small
    /// absolute floor for the slowly decaying equidistribution bias.
    pub fn odd_moment_band(&self, n: usize) -> Option<f64> {
        if n % 2 == 0 || 2 * n > self.max_moment || self.count == 0 {
            return None;
        }
        let second = self.moments[2 * n - 1].max(0.0);
        Some(0.05 + 4.0 * (second / self.count as f64).sqrt())
    }
}

/// Moments from precomputed traces.  `traces` must hold every good prime
/// up to `bound`, ascending; `torsion` must answer every split prime when
/// the selector is [`PrimeSelector::TorsionFree`] (pass cached results or
/// let [`numerical_moments`] compute them).
pub fn moments_from_traces(
    m: u64,
    bound: u64,
    selector: PrimeSelector,
    max_moment: usize,
    traces: &[(u64, i64)],
    torsion: &BTreeMap<u64, bool>,
) -> Result<NumericalMoments, FrobeniusError> {
    validate_modulus(m)?;
    if max_moment == 0 || max_moment > MAX_NUMERICAL_MOMENT {
        return Err(FrobeniusError::BoundExceeded {
            q: max_moment as u128,
            bound: MAX_NUMERICAL_MOMENT as u64,
        });
    }
    let mut ranges: Vec<RangeSummary> = Vec::new();
    let mut current: Option<RangeSummary> = None;
    let mut last_p = 0;
    for &(p, t) in traces {
        if p > bound {
            break;
        }
        if p <= last_p {
            return Err(FrobeniusError::Internal(
                "trace list is not strictly ascending".into(),
            ));
        }
        last_p = p;
        let selected = match selector {
            PrimeSelector::All => true,
            PrimeSelector::CongruentOneModM => p % m == 1,
            PrimeSelector::TorsionFree => {
                p % m == 1
                    && *torsion.get(&p).ok_or_else(|| {
                        FrobeniusError::Internal(format!(
                            "missing torsion-freeness result for split prime {p}"
                        ))
                    })?
            }
        };
        if !selected {
            continue;
        }
        let lo = p / RANGE_SIZE * RANGE_SIZE;
        if current.as_ref().map(|r| r.lo) != Some(lo) {
            if let Some(done) = current.take() {
                ranges.push(done);
            }
            current = Some(RangeSummary {
                lo,
                count: 0,
                float_sums: vec![0.0; max_moment],
                exact_sums: vec![BigInt::ZERO; max_moment],
            });
        }
        let range = current.as_mut().expect("range was just ensured");
        range.count += 1;
        let x = t as f64 / (p as f64).sqrt();
        let mut pw = 1.0f64;
        let mut pw_int = BigInt::from(1);
        let t_int = BigInt::from(t);
        for n in 0..max_moment {
            pw *= x;
            pw_int *= &t_int;
            range.float_sums[n] += pw;
            range.exact_sums[n] += &pw_int;
        }
    }
    if let Some(done) = current.take() {
        ranges.push(done);
    }

    // Merge in ascending range order.
    let mut count = 0u64;
    let mut float_totals = vec![0.0f64; max_moment];
    let mut exact_totals = vec![BigInt::ZERO; max_moment];
    for r in &ranges {
        count += r.count;
        for n in 0..max_moment {
            float_totals[n] += r.float_sums[n];
            exact_totals[n] += &r.exact_sums[n];
        }
    }
    let moments = float_totals
        .iter()
        .map(|s| if count == 0 { 0.0 } else { s / count as f64 })
        .collect();
    Ok(NumericalMoments {
        m,
        bound,
        selector,
        max_moment,
        count,
        moments,
        exact_power_sums: exact_totals,
        ranges,
    })
}

/// Sweeps traces and averages them in one call.
pub fn numerical_moments(
    m: u64,
    bound: u64,
    selector: PrimeSelector,
    max_moment: usize,
) -> Result<NumericalMoments, FrobeniusError> {
    let sweep = sweep_traces(m, bound)?;
    let mut torsion = BTreeMap::new();
    if selector == PrimeSelector::TorsionFree {
        for &(p, _) in &sweep.entries {
            if p % m == 1 {
                torsion.insert(p, torsion_free_test(m, p)?.torsion_free);
            }
        }
    }
    moments_from_traces(m, bound, selector, max_moment, &sweep.entries, &torsion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{point_count_trace, trace_via_jacobi_sums};
    use crate::stickelberger::split_density;

    #[test]
    fn direct_traces_match_brute_point_counts() {
        for m in [3u64, 9, 15] {
            for p in primes_up_to(200) {
                if p == 2 || m % p == 0 {
                    continue;
                }
                assert_eq!(
                    trace_direct(m, p).expect("trace"),
                    point_count_trace(m, p).expect("brute"),
                    "m = {m}, p = {p}"
                );
            }
        }
    }

    #[test]
    fn direct_traces_match_jacobi_sums_at_larger_primes() {
        for (m, p) in [(9u64, 10_009u64), (9, 10_039), (15, 9_931), (21, 10_093)] {
            assert_eq!(
                trace_direct(m, p).expect("trace"),
                trace_via_jacobi_sums(m, p, 1).expect("jacobi"),
                "m = {m}, p = {p}"
            );
        }
    }

    #[test]
    fn inert_directions_force_zero_traces() {
        // gcd(9, 5 - 1) = 1, so x^9 permutes F_5.
        assert_eq!(trace_direct(9, 5).expect("trace"), 0);
        assert_eq!(point_count_trace(9, 5).expect("brute"), 0);
    }

    #[test]
    fn sweeps_cover_exactly_the_good_primes() {
        let sweep = sweep_traces(15, 500).expect("sweep");
        let expected: Vec<u64> = primes_up_to(500)
            .into_iter()
            .filter(|&p| p != 2 && p != 3 && p != 5)
            .collect();
        let got: Vec<u64> = sweep.entries.iter().map(|&(p, _)| p).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn range_merge_tracks_naive_ascending_accumulation() {
        let sweep = sweep_traces(9, 1 << 17).expect("sweep");
        let torsion = BTreeMap::new();
        let via_ranges = moments_from_traces(
            9,
            1 << 17,
            PrimeSelector::All,
            6,
            &sweep.entries,
            &torsion,
        )
        .expect("moments");
        // One flat ascending pass groups the float additions differently,
        // so agreement is to rounding, not bit-for-bit; the fixed range
        // partition is what pins the reproducible order.
        let mut naive = vec![0.0f64; 6];
        let mut n = 0u64;
        for &(p, t) in &sweep.entries {
            let x = t as f64 / (p as f64).sqrt();
            let mut pw = 1.0;
            for slot in naive.iter_mut() {
                pw *= x;
                *slot += pw;
            }
            n += 1;
        }
        assert_eq!(via_ranges.count, n);
        for (a, b) in via_ranges.moments.iter().zip(&naive) {
            let b = b / n as f64;
            assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "{a} vs {b}");
        }
        // The exact integer power sums are order-independent and must
        // match a naive exact accumulation perfectly.
        let mut exact = vec![BigInt::ZERO; 6];
        for &(_, t) in &sweep.entries {
            let t_int = BigInt::from(t);
            let mut pw = BigInt::from(1);
            for slot in exact.iter_mut() {
                pw *= &t_int;
                *slot += &pw;
            }
        }
        assert_eq!(via_ranges.exact_power_sums, exact);
    }

    #[test]
    fn repeated_runs_are_bit_identical() {
        let a = numerical_moments(9, 1 << 16, PrimeSelector::All, 8).expect("run a");
        let b = numerical_moments(9, 1 << 16, PrimeSelector::All, 8).expect("run b");
        assert_eq!(a, b);
        let bits_a: Vec<u64> = a.moments.iter().map(|v| v.to_bits()).collect();
        let bits_b: Vec<u64> = b.moments.iter().map(|v| v.to_bits()).collect();
        assert_eq!(bits_a, bits_b);
    }

    #[test]
    fn split_selector_counts_split_primes() {
        let bound = 1 << 14;
        let moments =
            numerical_moments(9, bound, PrimeSelector::CongruentOneModM, 4).expect("moments");
        let split = primes_up_to(bound)
            .into_iter()
            .filter(|&p| p % 9 == 1)
            .count() as u64;
        assert_eq!(moments.count, split);
    }

    #[test]
    fn torsion_free_selector_matches_split_density() {
        let bound = 2_000;
        let moments =
            numerical_moments(15, bound, PrimeSelector::TorsionFree, 4).expect("moments");
        let density = split_density(15, bound).expect("density");
        assert_eq!(moments.count, density.torsion_free_count() as u64);
    }

    #[test]
    fn second_moment_approaches_the_component_average() {
        // At modest bounds the m = 9 average over all good primes already
        // sits near the six-component value 2.
        let moments = numerical_moments(9, 1 << 17, PrimeSelector::All, 4).expect("moments");
        assert!(
            (moments.moments[1] - 2.0).abs() < 0.4,
            "M_2 = {} too far from 2",
            moments.moments[1]
        );
        let band = moments.odd_moment_band(1).expect("band");
        assert!(
            moments.moments[0].abs() < band,
            "M_1 = {} outside band {band}",
            moments.moments[0]
        );
    }

    #[test]
    fn moment_order_is_capped() {
        assert!(matches!(
            numerical_moments(9, 1000, PrimeSelector::All, 13),
            Err(FrobeniusError::BoundExceeded { .. })
        ));
    }
}
