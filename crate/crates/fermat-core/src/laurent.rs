//! Multivariate Laurent polynomials with exact integer coefficients.
//!
//! The moment computations only need a small API: build a trace polynomial
//! from exponent vectors, raise it to a power, and extract constant terms.
//! Terms live in a `BTreeMap` keyed by exponent vector so that iteration
//! order — and therefore every downstream report — is deterministic.

use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolynomial {
    num_vars: usize,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(num_vars: usize) -> Self {
        LaurentPolynomial { num_vars, terms: BTreeMap::new() }
    }

    pub fn one(num_vars: usize) -> Self {
        let mut p = Self::zero(num_vars);
        p.terms.insert(vec![0; num_vars], BigInt::from(1));
        p
    }

    /// A single term c · z^v.
    pub fn monomial(num_vars: usize, exponents: Vec<i32>, coeff: BigInt) -> Self {
        assert_eq!(exponents.len(), num_vars);
        let mut p = Self::zero(num_vars);
        if !coeff.is_zero() {
            p.terms.insert(exponents, coeff);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exponents: Vec<i32>, coeff: &BigInt) {
        assert_eq!(exponents.len(), self.num_vars);
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponents).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            // Key needs removing; re-borrow immutably to find it is awkward,
            // so retain instead (cheap: at most one zero entry exists).
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = Self::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                let entry = out.terms.entry(e).or_insert_with(BigInt::zero);
                *entry += c;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.num_vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn coefficient(&self, exponents: &[i32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&vec![0; self.num_vars])
    }

    /// Constant term of `self * other` without forming the product:
    /// Σ_v self[v] · other[-v].
    pub fn constant_term_of_product(&self, other: &Self) -> BigInt {
        assert_eq!(self.num_vars, other.num_vars);
        let (small, large) =
            if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let mut acc = BigInt::zero();
        for (e, c) in &small.terms {
            let neg: Vec<i32> = e.iter().map(|x| -x).collect();
            if let Some(d) = large.terms.get(&neg) {
                acc += c * d;
            }
        }
        acc
    }

    /// Substitute every variable by 1 (total coefficient sum).
    pub fn evaluate_all_ones(&self) -> BigInt {
        self.terms.values().sum()
    }
}
