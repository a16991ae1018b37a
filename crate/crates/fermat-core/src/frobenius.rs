//! Frobenius arithmetic for the curves `y^2 = x^m - 1` over prime fields:
//! point-count traces, Jacobi sums, and characteristic polynomials.
//!
//! Conventions, recorded once here and used everywhere:
//!
//! * The multiplicative character of order `d` on `F_q` is
//!   `chi(g^k) = zeta_d^k`, where `g` is the canonical generator of
//!   [`SmallField`] (the least primitive root for prime fields).
//! * `J(chi^a, chi_2) = sum over x != 0, 1 of chi^a(x) chi_2(1 - x)`.
//! * Characteristic polynomials `P(x) = prod (x - lambda)` use the root
//!   normalization `|lambda| = sqrt(p)`, so that
//!   `#C(F_{p^k}) = p^k + 1 - sum lambda^k` and the trace of Frobenius is
//!   `t_p = sum lambda`.  Coefficients are stored ascending.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cyclotomic::{units_mod, CyclotomicElement};
use crate::error::{CmError, FrobeniusError};
use crate::ff::{is_prime, SmallField, MAX_EXTENSION_DEGREE};
use crate::modq::Barrett;

/// Default ceiling for brute-force point counts; a count costs `O(q)`.
pub const DEFAULT_POINT_COUNT_BOUND: u64 = 1_000_000;

/// Human-readable record of the character convention, echoed into reports
/// so stored Jacobi-sum data stays interpretable.
pub const CHARACTER_CONVENTION: &str =
    "chi(g^k) = zeta_m^k with g the least primitive root of F_p";

fn validate_modulus(m: u64) -> Result<(), FrobeniusError> {
    if m < 3 {
        return Err(CmError::InvalidModulus { modulus: m }.into());
    }
    if m % 2 == 0 {
        return Err(CmError::OddModulusRequired { modulus: m }.into());
    }
    Ok(())
}

/// Splits an odd prime power `q = p^e` with `e` within the field cap.
fn split_prime_power(q: u64) -> Result<(u64, u32), FrobeniusError> {
    if q < 3 || q % 2 == 0 {
        return Err(FrobeniusError::NotAPrimePower { q, max_exp: MAX_EXTENSION_DEGREE });
    }
    let mut p = q;
    let mut d = 3;
    while d * d <= q {
        if q % d == 0 {
            p = d;
            break;
        }
        d += 2;
    }
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 || e > MAX_EXTENSION_DEGREE {
        return Err(FrobeniusError::NotAPrimePower { q, max_exp: MAX_EXTENSION_DEGREE });
    }
    Ok((p, e))
}

fn weil_check(m: u64, q: u64, t: i64) -> Result<(), FrobeniusError> {
    let two_g = (m - 1) as i128;
    if (t as i128) * (t as i128) > two_g * two_g * q as i128 {
        return Err(FrobeniusError::Internal(format!(
            "trace {t} violates the Weil bound for m = {m}, q = {q}"
        )));
    }
    Ok(())
}

/// `t_q = q + 1 - #C(F_q)` for `C: y^2 = x^m - 1`, by direct enumeration.
pub fn point_count_trace(m: u64, q: u64) -> Result<i64, FrobeniusError> {
    point_count_trace_with_bound(m, q, DEFAULT_POINT_COUNT_BOUND)
}

/// As [`point_count_trace`] with an explicit enumeration ceiling.
pub fn point_count_trace_with_bound(m: u64, q: u64, bound: u64) -> Result<i64, FrobeniusError> {
    validate_modulus(m)?;
    if q > bound {
        return Err(FrobeniusError::BoundExceeded { q: q as u128, bound });
    }
    let (p, e) = split_prime_power(q)?;
    if m % p == 0 {
        return Err(FrobeniusError::BadPrime { p, two_m: 2 * m });
    }
    let t = if e == 1 {
        let barrett = Barrett::new(p);
        let square = squares_table(p);
        let mut sum: i64 = 0;
        for x in 0..p {
            let v = barrett.powmod(x, m);
            let v = if v == 0 { p - 1 } else { v - 1 };
            if v == 0 {
                continue;
            }
            sum += if square[v as usize] { 1 } else { -1 };
        }
        -sum
    } else {
        let field = SmallField::new(p, e)?;
        let table = field.quadratic_character_table();
        let one = field.one();
        let mut sum: i64 = 0;
        for idx in 0..q {
            let x = field.element_from_index(idx);
            let v = field.sub(field.pow(x, m), one);
            sum += table[field.index(v)] as i64;
        }
        -sum
    };
    weil_check(m, q, t)?;
    Ok(t)
}

/// Bit table of nonzero squares mod p, built with additions only.
fn squares_table(p: u64) -> Vec<bool> {
    let mut table = vec![false; p as usize];
    let mut v: u64 = 0;
    let mut step: u64 = 1;
    // (i+1)^2 = i^2 + (2i + 1), all mod p.
    for _ in 0..(p + 1) / 2 {
        v = (v + step) % p;
        step += 2;
        if step >= p {
            step -= p;
        }
        table[v as usize] = true;
    }
    table[0] = false;
    table
}

/// Signed counts `net[r] = #\{j : chi_2(1 - g^j) = +1, j = r (mod d)\} - #\{...= -1\}`,
/// the raw material for every Jacobi sum of conductor dividing `d`.
fn net_counts(field: &SmallField, d: u64) -> Result<Vec<i64>, FrobeniusError> {
    let q = field.size();
    if (q - 1) % d != 0 {
        return Err(FrobeniusError::CongruenceViolation { p: field.characteristic(), m: d });
    }
    let table = field.quadratic_character_table();
    let g = field.generator();
    let one = field.one();
    let mut net = vec![0i64; d as usize];
    let mut x = one;
    let mut r = 0usize;
    for _ in 0..q - 1 {
        let s = table[field.index(field.sub(one, x))];
        if s != 0 {
            net[r] += s as i64;
        }
        x = field.mul(x, g);
        r += 1;
        if r == d as usize {
            r = 0;
        }
    }
    Ok(net)
}

/// `J(chi^a, chi_2)` assembled from signed counts: `sum_r net[r] zeta_d^{a r}`.
fn assemble_jacobi(d: u64, net: &[i64], a: u64) -> CyclotomicElement {
    let mut poly = vec![BigInt::zero(); d as usize];
    for (r, &c) in net.iter().enumerate() {
        if c != 0 {
            poly[(a * r as u64 % d) as usize] += c;
        }
    }
    CyclotomicElement::from_poly(d, poly)
}

fn check_norm(value: &CyclotomicElement, p: u64, e: u32) -> Result<(), FrobeniusError> {
    let norm = value.mul(&value.conj());
    let expected = BigInt::from(p).pow(e);
    if norm.rational_value() != Some(expected) {
        return Err(FrobeniusError::Internal(format!(
            "Jacobi sum norm is not {p}^{e}: {value:?}"
        )));
    }
    Ok(())
}

/// A Jacobi sum `J(chi^a, chi_2)` over `F_{p^e}`, as an element of `Z[zeta_m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiSum {
    pub m: u64,
    pub p: u64,
    pub extension_degree: u32,
    pub character_index: u64,
    pub value: CyclotomicElement,
}

/// One Jacobi sum for split `p = 1 (mod m)`.  Shares a field pass with
/// nothing, so prefer [`jacobi_sums`] when several indices are needed.
pub fn jacobi_sum(m: u64, p: u64, a: u64) -> Result<JacobiSum, FrobeniusError> {
    if a == 0 || a >= m {
        return Err(FrobeniusError::BadCharacterIndex { index: a, m });
    }
    Ok(jacobi_sums(m, p)?.swap_remove((a - 1) as usize))
}

/// All Jacobi sums `J(chi^a, chi_2)`, `a = 1..m-1`, for split `p = 1 (mod m)`,
/// from a single pass over `F_p^*`.
pub fn jacobi_sums(m: u64, p: u64) -> Result<Vec<JacobiSum>, FrobeniusError> {
    validate_modulus(m)?;
    if !is_prime(p) || p == 2 {
        return Err(FrobeniusError::NotAPrimePower { q: p, max_exp: 1 });
    }
    if p % m != 1 {
        return Err(FrobeniusError::CongruenceViolation { p, m });
    }
    let field = SmallField::new(p, 1)?;
    let net = net_counts(&field, m)?;
    let mut out = Vec::with_capacity((m - 1) as usize);
    for a in 1..m {
        let value = assemble_jacobi(m, &net, a);
        check_norm(&value, p, 1)?;
        out.push(JacobiSum { m, p, extension_degree: 1, character_index: a, value });
    }
    Ok(out)
}

/// Trace of Frobenius over `F_{p^e}` from Jacobi sums alone:
/// `t_q = -chi_2(-1) * sum_{a=1}^{d-1} J(chi_d^a, chi_2)` with
/// `d = gcd(m, q - 1)`.  One pass over `F_q^*`; an empty sum gives 0.
pub fn trace_via_jacobi_sums(m: u64, p: u64, e: u32) -> Result<i64, FrobeniusError> {
    validate_modulus(m)?;
    if m % p == 0 || p == 2 {
        return Err(FrobeniusError::BadPrime { p, two_m: 2 * m });
    }
    let field = SmallField::new(p, e)?;
    let q = field.size();
    let d = m.gcd(&(q - 1));
    if d == 1 {
        return Ok(0);
    }
    let net = net_counts(&field, d)?;
    let mut total = CyclotomicElement::zero(d);
    for a in 1..d {
        total = total.add(&assemble_jacobi(d, &net, a));
    }
    let rational = total.rational_value().ok_or_else(|| {
        FrobeniusError::Internal("sum of conjugate Jacobi sums is irrational".into())
    })?;
    let sign: i64 = if q % 4 == 1 { 1 } else { -1 };
    let t = -sign * to_i64(&rational)?;
    weil_check(m, q, t)?;
    Ok(t)
}

fn to_i64(v: &BigInt) -> Result<i64, FrobeniusError> {
    i64::try_from(v).map_err(|_| FrobeniusError::Internal(format!("{v} overflows i64")))
}

/// One factor of the characteristic polynomial of Frobenius, collecting the
/// eigenvalues attached to characters of exact order `divisor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusFactor {
    pub divisor: u64,
    /// Ascending coefficients; degree `phi(divisor)`.
    pub coefficients: Vec<BigInt>,
}

/// Frobenius data at `p` for `y^2 = x^m - 1`: the trace, the full degree
/// `m - 1` characteristic polynomial, and its per-divisor factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusData {
    pub m: u64,
    pub p: u64,
    pub trace: i64,
    /// Ascending coefficients of `prod (x - lambda)`, `|lambda| = sqrt(p)`.
    pub polynomial: Vec<BigInt>,
    pub factors: Vec<FrobeniusFactor>,
}

impl FrobeniusData {
    /// Degrees of the per-divisor factors, ascending by divisor.
    pub fn factor_degrees(&self) -> Vec<(u64, usize)> {
        self.factors
            .iter()
            .map(|f| (f.divisor, f.coefficients.len() - 1))
            .collect()
    }
}

fn multiplicative_order(p: u64, d: u64) -> u32 {
    let mut x = p % d;
    let mut k = 1;
    while x != 1 {
        x = x * (p % d) % d;
        k += 1;
    }
    k
}

/// Orbit representatives (ascending minima) of the units mod `d` under
/// multiplication by `p`.
fn orbit_representatives(d: u64, p: u64) -> Vec<u64> {
    let mut seen = vec![false; d as usize];
    let mut reps = Vec::new();
    for u in units_mod(d) {
        if seen[u as usize] {
            continue;
        }
        reps.push(u);
        let mut v = u;
        loop {
            seen[v as usize] = true;
            v = v * (p % d) % d;
            if v == u {
                break;
            }
        }
    }
    reps
}

/// Characteristic polynomial of Frobenius at `p` on `y^2 = x^m - 1`.
///
/// Split `p = 1 (mod m)` needs a single pass over `F_p^*`; other primes
/// assemble eigenvalue orbits over `F_{p^e}` for the per-divisor orbit
/// degrees `e`, which must stay within [`MAX_EXTENSION_DEGREE`].
pub fn frobenius_polynomial(m: u64, p: u64) -> Result<FrobeniusData, FrobeniusError> {
    validate_modulus(m)?;
    if !is_prime(p) || p == 2 {
        return Err(FrobeniusError::NotAPrimePower { q: p, max_exp: 1 });
    }
    if m % p == 0 {
        return Err(FrobeniusError::BadPrime { p, two_m: 2 * m });
    }
    let f = multiplicative_order(p, m);
    if f > MAX_EXTENSION_DEGREE {
        return Err(FrobeniusError::OrbitDegreeTooLarge { degree: f, max: MAX_EXTENSION_DEGREE });
    }

    // Group the divisors d > 1 of m by the extension degree their
    // characters live over, so each field is swept exactly once.
    let mut by_degree: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
    for d in 2..=m {
        if m % d == 0 {
            by_degree.entry(multiplicative_order(p, d)).or_default().push(d);
        }
    }

    let mut factors = Vec::new();
    for (&e, ds) in &by_degree {
        let field = SmallField::new(p, e)?;
        let q = field.size();
        let modulus = ds.iter().fold(1u64, |acc, &d| acc.lcm(&d));
        let net = net_counts(&field, modulus)?;
        let sign: i64 = if q % 4 == 1 { 1 } else { -1 };
        for &d in ds {
            // Fold the master counts down to conductor d.
            let mut net_d = vec![0i64; d as usize];
            for (s, &c) in net.iter().enumerate() {
                net_d[s % d as usize] += c;
            }
            // One factor x^e - beta per orbit of units mod d, where beta is
            // the F_{p^e}-eigenvalue shared by the whole orbit.
            let mut poly = vec![CyclotomicElement::one(d)];
            for b in orbit_representatives(d, p) {
                let jval = assemble_jacobi(d, &net_d, b);
                check_norm(&jval, p, e)?;
                let beta = if sign == 1 { jval.neg() } else { jval };
                poly = mul_by_binomial(poly, e as usize, &beta, d);
            }
            let mut coefficients = Vec::with_capacity(poly.len());
            for c in poly {
                coefficients.push(c.rational_value().ok_or_else(|| {
                    FrobeniusError::Internal(format!(
                        "factor for divisor {d} of m = {m} at p = {p} has irrational coefficients"
                    ))
                })?);
            }
            factors.push(FrobeniusFactor { divisor: d, coefficients });
        }
    }
    factors.sort_by_key(|f| f.divisor);

    let mut polynomial = vec![BigInt::one()];
    for factor in &factors {
        polynomial = poly_mul_int(&polynomial, &factor.coefficients);
    }
    let two_g = (m - 1) as usize;
    if polynomial.len() != two_g + 1 {
        return Err(FrobeniusError::Internal(format!(
            "assembled polynomial has degree {} instead of {two_g}",
            polynomial.len() - 1
        )));
    }
    functional_equation_check(&polynomial, p)?;
    let trace = to_i64(&(-&polynomial[two_g - 1]))?;
    weil_check(m, p, trace)?;
    Ok(FrobeniusData { m, p, trace, polynomial, factors })
}

/// Multiplies a polynomial with cyclotomic coefficients by `x^e - beta`.
fn mul_by_binomial(
    poly: Vec<CyclotomicElement>,
    e: usize,
    beta: &CyclotomicElement,
    conductor: u64,
) -> Vec<CyclotomicElement> {
    let mut out = vec![CyclotomicElement::zero(conductor); poly.len() + e];
    for (i, c) in poly.iter().enumerate() {
        out[i + e] = out[i + e].add(c);
        out[i] = out[i].sub(&c.mul(beta));
    }
    out
}

fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Checks `asc[i] = p^{g-i} * asc[2g-i]` for `i = 0..=g`: the eigenvalue
/// multiset is stable under `lambda -> p / lambda`.
fn functional_equation_check(asc: &[BigInt], p: u64) -> Result<(), FrobeniusError> {
    let two_g = asc.len() - 1;
    let g = two_g / 2;
    for i in 0..=g {
        let expected = BigInt::from(p).pow((g - i) as u32) * &asc[two_g - i];
        if asc[i] != expected {
            return Err(FrobeniusError::Internal(format!(
                "functional equation fails at coefficient {i}"
            )));
        }
    }
    Ok(())
}

/// Power sums `sum lambda^k`, `k = 1..=up_to`, of the roots of an ascending
/// monic polynomial, by Newton's identities.  `p_k` is the trace of the
/// `k`-th power of Frobenius, so `#C(F_{p^k}) = p^k + 1 - p_k`.
pub fn power_sums(asc: &[BigInt], up_to: usize) -> Vec<BigInt> {
    let n = asc.len() - 1;
    // Elementary symmetric functions: asc[n - i] = (-1)^i e_i.
    let e = |i: usize| -> BigInt {
        if i > n {
            BigInt::zero()
        } else if i % 2 == 0 {
            asc[n - i].clone()
        } else {
            -asc[n - i].clone()
        }
    };
    let mut sums: Vec<BigInt> = Vec::with_capacity(up_to);
    for k in 1..=up_to {
        let mut pk = BigInt::zero();
        for i in 1..k {
            let term = e(i) * &sums[k - i - 1];
            if i % 2 == 1 {
                pk += term;
            } else {
                pk -= term;
            }
        }
        let last = e(k) * BigInt::from(k as u64);
        if k % 2 == 1 {
            pk += last;
        } else {
            pk -= last;
        }
        sums.push(pk);
    }
    sums
}

/// First `count` primes `p = 1 (mod m)`, ascending.
pub fn split_primes(m: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = m + 1;
    while out.len() < count {
        if is_prime(p) {
            out.push(p);
        }
        p += m;
    }
    out
}
