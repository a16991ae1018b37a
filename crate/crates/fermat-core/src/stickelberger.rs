//! Prime-ideal valuations of Jacobi sums and the torsion-freeness test for
//! the group generated by Frobenius roots at a split prime.
//!
//! For split `p = 1 (mod m)` the primes of `Z[zeta_m]` above `p` are
//! `P_t = (p, zeta_m - w^t)`, `t` a unit mod `m`, where `w = g^{(p-1)/m}`
//! is the canonical primitive m-th root of unity mod `p` (`g` the least
//! primitive root).  Valuations are decided by exact membership in the
//! Hermite-normal-form lattices of `P_t` and `P_t^2`, never by floating
//! point or by the closed-form digit formula (which the tests use as an
//! independent cross-check).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::{euler_phi, units_mod, CyclotomicElement};
use crate::error::FrobeniusError;
use crate::ff::SmallField;
use crate::frobenius::{jacobi_sums, JacobiSum};
use crate::lattice::Lattice;
use crate::matrix::IntegerMatrix;

/// The `Z`-lattice of the ideal `(p, zeta_m - w_t)^k` inside `Z[zeta_m]`
/// on the power basis, for `k = 1, 2`.
fn prime_ideal_power(m: u64, p: u64, w_t: u64, k: u32) -> Lattice {
    let phi = euler_phi(m) as usize;
    let zeta_minus_w = CyclotomicElement::root_power(m, 1)
        .sub(&CyclotomicElement::from_integer(m, BigInt::from(w_t)));
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity((k as usize + 1) * phi);
    for i in 0..=k {
        let gen = zeta_minus_w
            .pow((k - i) as u64)
            .scale(&BigInt::from(p).pow(i));
        for j in 0..phi {
            let shifted = gen.mul(&CyclotomicElement::root_power(m, j as u64));
            rows.push(shifted.coeffs().to_vec());
        }
    }
    Lattice::from_generators(&IntegerMatrix::from_rows(rows))
}

/// Valuation matrix `v_{P_t}(J_a)`: rows indexed by the units `t` mod `m`
/// ascending, columns by the given sums in order.  All sums must share the
/// same split `(m, p)`.  Verifies the column-sum and conjugate-pairing
/// invariants before returning.
pub fn valuation_matrix(sums: &[JacobiSum]) -> Result<IntegerMatrix, FrobeniusError> {
    let first = sums.first().ok_or_else(|| {
        FrobeniusError::Internal("valuation matrix needs at least one Jacobi sum".into())
    })?;
    let (m, p) = (first.m, first.p);
    if sums
        .iter()
        .any(|j| j.m != m || j.p != p || j.extension_degree != 1)
    {
        return Err(FrobeniusError::Internal(
            "valuation matrix needs Jacobi sums over a single prime field".into(),
        ));
    }
    if p % m != 1 {
        return Err(FrobeniusError::CongruenceViolation { p, m });
    }
    let field = SmallField::new(p, 1)?;
    let g = field.generator()[0];
    let barrett = crate::modq::Barrett::new(p);
    let w = barrett.powmod(g, (p - 1) / m);

    let units = units_mod(m);
    let phi = units.len();
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(phi);
    for &t in &units {
        let w_t = barrett.powmod(w, t);
        let ideal = prime_ideal_power(m, p, w_t, 1);
        let ideal_sq = prime_ideal_power(m, p, w_t, 2);
        let mut row = Vec::with_capacity(sums.len());
        for j in sums {
            let coeffs = j.value.coeffs();
            let v = if !ideal.contains(coeffs) {
                0
            } else if !ideal_sq.contains(coeffs) {
                1
            } else {
                return Err(FrobeniusError::Internal(format!(
                    "J_{} at p = {p} has valuation >= 2 at a prime above p",
                    j.character_index
                )));
            };
            row.push(BigInt::from(v));
        }
        rows.push(row);
    }
    let matrix = IntegerMatrix::from_rows(rows);

    // Column sums: |N(J_a)| = p^{phi/2} spread over {0,1} valuations.
    let half = BigInt::from(phi as u64 / 2);
    for c in 0..matrix.cols() {
        let sum: BigInt = (0..matrix.rows()).map(|r| matrix.row(r)[c].clone()).sum();
        if sum != half {
            return Err(FrobeniusError::Internal(format!(
                "column {c} of the valuation matrix sums to {sum}, expected {half}"
            )));
        }
    }
    // Conjugation swaps P_t and P_{-t}, and J J-bar = p has valuation 1.
    for (i, &t) in units.iter().enumerate() {
        let neg = units
            .iter()
            .position(|&u| u == m - t)
            .expect("units are closed under negation");
        for c in 0..matrix.cols() {
            let pair = &matrix.row(i)[c] + &matrix.row(neg)[c];
            if !pair.is_one() {
                return Err(FrobeniusError::Internal(format!(
                    "v_{t} + v_{}: expected 1 at column {c}",
                    m - t
                )));
            }
        }
    }
    Ok(matrix)
}

/// Outcome of the torsion-freeness test at a split prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitTestResult {
    pub m: u64,
    pub p: u64,
    pub torsion_free: bool,
    /// Rank of the saturated relation lattice among the 2g Frobenius roots.
    pub relation_rank: usize,
    /// A relation whose root product is a nontrivial root of unity, when
    /// one exists; exponents follow the column order `a = 1..m-1`.
    pub witness_relation: Option<Vec<i64>>,
    /// The value of the witness product as `(negative, k)` for `±zeta_m^k`.
    pub witness_root: Option<(bool, u64)>,
}

/// Evaluates `prod alpha_a^{e_a}` for a valuation-kernel vector `e` and
/// reports the root of unity it equals.  Positive and negative exponents
/// are cross-multiplied so everything stays in `Z[zeta_m]`:
/// `N / D = (N D-bar) / p^{s}` with `s` the total negative exponent.
fn evaluate_relation(
    roots: &[CyclotomicElement],
    exponents: &[BigInt],
    m: u64,
    p: u64,
) -> Result<(bool, u64), FrobeniusError> {
    let mut numerator = CyclotomicElement::one(m);
    let mut denominator = CyclotomicElement::one(m);
    let mut neg_total: u64 = 0;
    for (alpha, e) in roots.iter().zip(exponents) {
        let mag = e.magnitude().try_into().map_err(|_| {
            FrobeniusError::Internal("relation exponent overflows u64".into())
        })?;
        if e.is_positive() {
            numerator = numerator.mul(&alpha.pow(mag));
        } else if e.is_negative() {
            denominator = denominator.mul(&alpha.pow(mag));
            neg_total += mag;
        }
    }
    let ratio = numerator.mul(&denominator.conj());
    let scale = BigInt::from(p).pow(neg_total.try_into().map_err(|_| {
        FrobeniusError::Internal("relation exponent overflows u32".into())
    })?);
    let mut coeffs = Vec::with_capacity(ratio.coeffs().len());
    for c in ratio.coeffs() {
        let (q, r) = c.div_rem(&scale);
        if !r.is_zero() {
            return Err(FrobeniusError::Internal(
                "root product is not integral after clearing denominators".into(),
            ));
        }
        coeffs.push(q);
    }
    CyclotomicElement::from_coeffs(m, coeffs)
        .as_root_of_unity()
        .ok_or_else(|| {
            FrobeniusError::Internal(
                "root product with trivial valuations is not a root of unity".into(),
            )
        })
}

/// Tests whether the group generated by the `2g` Frobenius roots
/// `alpha_a = -chi_2(-1) J_a` at split `p` is torsion-free: every product
/// along the saturated kernel of the valuation matrix must equal 1 exactly.
pub fn torsion_free_test(m: u64, p: u64) -> Result<SplitTestResult, FrobeniusError> {
    let sums = jacobi_sums(m, p)?;
    let matrix = valuation_matrix(&sums)?;
    let kernel = matrix.right_kernel();
    let relation_rank = kernel.rows();

    let negate = p % 4 == 1;
    let roots: Vec<CyclotomicElement> = sums
        .iter()
        .map(|j| if negate { j.value.neg() } else { j.value.clone() })
        .collect();

    for r in 0..kernel.rows() {
        let exponents = kernel.row(r);
        let (negative, power) = evaluate_relation(&roots, exponents, m, p)?;
        if negative || power != 0 {
            let witness = exponents
                .iter()
                .map(|e| i64::try_from(e).map_err(|_| {
                    FrobeniusError::Internal("witness exponent overflows i64".into())
                }))
                .collect::<Result<Vec<i64>, _>>()?;
            return Ok(SplitTestResult {
                m,
                p,
                torsion_free: false,
                relation_rank,
                witness_relation: Some(witness),
                witness_root: Some((negative, power)),
            });
        }
    }
    Ok(SplitTestResult {
        m,
        p,
        torsion_free: true,
        relation_rank,
        witness_relation: None,
        witness_root: None,
    })
}

/// Share of split primes `p = 1 (mod m)`, `p <= bound`, whose Frobenius-root
/// group is torsion-free.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitDensity {
    pub m: u64,
    pub bound: u64,
    pub results: Vec<SplitTestResult>,
}

impl SplitDensity {
    pub fn total(&self) -> usize {
        self.results.len()
    }

    pub fn torsion_free_count(&self) -> usize {
        self.results.iter().filter(|r| r.torsion_free).count()
    }

    pub fn fraction(&self) -> f64 {
        if self.results.is_empty() {
            return 0.0;
        }
        self.torsion_free_count() as f64 / self.total() as f64
    }
}

/// Runs [`torsion_free_test`] over every split prime up to `bound`.
pub fn split_density(m: u64, bound: u64) -> Result<SplitDensity, FrobeniusError> {
    let mut results = Vec::new();
    let mut p = m + 1;
    while p <= bound {
        if crate::ff::is_prime(p) {
            results.push(torsion_free_test(m, p)?);
        }
        p += m;
    }
    Ok(SplitDensity { m, bound, results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::RationalCyclotomic;

    /// Digit-formula oracle for `v_{P_t}(J_a)`: with characters written as
    /// powers of one character of order 2m, the valuation is
    /// `<u 2a / 2m> + <u m / 2m> - <u (2a + m) / 2m>` for the orientation
    /// `u = -t` (odd lift mod 2m), frozen by the fixtures below.
    fn digit_formula(m: u64, t: u64, a: u64) -> u64 {
        let n = 2 * m;
        let lift = if t % 2 == 1 { t } else { t + m };
        let u = n - lift; // u = -t mod 2m
        let part = |r: u64| (u * r) % n;
        (part(2 * a) + part(m) - part((2 * a + m) % n)) / n
    }

    fn matrix_from_formula(m: u64, sums: &[JacobiSum]) -> IntegerMatrix {
        let rows = units_mod(m)
            .into_iter()
            .map(|t| {
                sums.iter()
                    .map(|j| BigInt::from(digit_formula(m, t, j.character_index)))
                    .collect()
            })
            .collect();
        IntegerMatrix::from_rows(rows)
    }

    #[test]
    fn valuations_match_the_digit_formula_m15_p31() {
        let sums = jacobi_sums(15, 31).expect("sums");
        let matrix = valuation_matrix(&sums).expect("valuations");
        assert_eq!(matrix, matrix_from_formula(15, &sums));
    }

    #[test]
    fn valuations_match_the_digit_formula_across_moduli() {
        for (m, p) in [(5u64, 11u64), (9, 19), (9, 37), (15, 61), (21, 43)] {
            let sums = jacobi_sums(m, p).expect("sums");
            let matrix = valuation_matrix(&sums).expect("valuations");
            assert_eq!(matrix, matrix_from_formula(m, &sums), "m = {m}, p = {p}");
        }
    }

    #[test]
    fn valuation_matrix_is_independent_of_the_split_prime() {
        // Stickelberger data depends only on (t, a), so two split primes
        // must give identical matrices.
        let a = valuation_matrix(&jacobi_sums(15, 31).expect("sums")).expect("v");
        let b = valuation_matrix(&jacobi_sums(15, 61).expect("sums")).expect("v");
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_non_split_primes() {
        let mut sums = jacobi_sums(5, 11).expect("sums");
        sums[0].m = 7;
        assert!(matches!(
            valuation_matrix(&sums),
            Err(FrobeniusError::Internal(_))
        ));
    }

    #[test]
    fn torsion_test_reports_rank_nine_relations_for_m15() {
        let result = torsion_free_test(15, 31).expect("test");
        assert_eq!(result.relation_rank, 9);
    }

    #[test]
    fn torsion_witnesses_reevaluate_to_nontrivial_roots_of_unity() {
        let mut seen_free = 0usize;
        let mut seen_torsion = 0usize;
        for p in crate::frobenius::split_primes(15, 24) {
            let result = torsion_free_test(15, p).expect("test");
            if result.torsion_free {
                seen_free += 1;
                assert!(result.witness_relation.is_none());
                continue;
            }
            seen_torsion += 1;
            let witness = result.witness_relation.expect("witness");
            let (negative, power) = result.witness_root.expect("root");
            assert!(negative || power != 0, "witness root must be nontrivial");

            // Re-evaluate through exact division in Q(zeta_15) rather than
            // the cross-multiplied integral path.
            let sums = jacobi_sums(15, p).expect("sums");
            let negate = p % 4 == 1;
            let mut value = RationalCyclotomic::from_integral(CyclotomicElement::one(15));
            for (j, &e) in sums.iter().zip(&witness) {
                let alpha = if negate { j.value.neg() } else { j.value.clone() };
                let power = alpha.pow(e.unsigned_abs());
                if e >= 0 {
                    value = value.mul_integral(&power);
                } else {
                    let inv = power.invert().expect("unit away from p");
                    value = value.mul(&inv);
                }
            }
            let mut expected = CyclotomicElement::root_power(15, power);
            if negative {
                expected = expected.neg();
            }
            assert_eq!(
                value,
                RationalCyclotomic::from_integral(expected),
                "witness product at p = {p}"
            );
        }
        assert!(seen_free > 0, "some split prime below the 24th is torsion-free");
        assert!(seen_torsion > 0, "some split prime below the 24th has torsion");
    }

    #[test]
    fn split_density_counts_are_consistent() {
        let density = split_density(15, 1500).expect("density");
        assert_eq!(
            density.total(),
            density.torsion_free_count()
                + density.results.iter().filter(|r| !r.torsion_free).count()
        );
        assert!(density.total() >= 5);
        for r in &density.results {
            assert_eq!(r.torsion_free, r.witness_relation.is_none());
        }
    }
}
