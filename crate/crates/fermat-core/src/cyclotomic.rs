//! Exact arithmetic in cyclotomic rings Z[ζ_m] = Z[x]/Φ_m(x).
//!
//! Elements are coefficient vectors of length φ(m) on the power basis
//! 1, ζ, ..., ζ^{φ(m)-1}.  Inversion lands in Q(ζ_m) and is returned with an
//! explicit positive denominator, never a float.

use crate::error::CyclotomicError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Euler totient.
pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Ascending list of the units of Z/mZ (residues in [1, m) coprime to m).
pub fn units_mod(m: u64) -> Vec<u64> {
    (1..m).filter(|&j| j.gcd(&m) == 1).collect()
}

/// Coefficients (ascending) of the m-th cyclotomic polynomial.
///
/// Computed by exact division: Φ_m = (x^m - 1) / Π_{d|m, d<m} Φ_d.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_exact_div(&num, &phi_d);
        }
    }
    num
}

/// Exact division of polynomials over Z (panics if not exact; internal use).
fn poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(dn >= dd);
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        // Cyclotomic divisors are monic.
        debug_assert!(den[dd].is_one());
        quot[k] = c.clone();
        for (i, d) in den.iter().enumerate() {
            let delta = &c * d;
            rem[k + i] -= delta;
        }
    }
    assert!(rem.iter().all(|x| x.is_zero()), "non-exact polynomial division");
    quot
}

/// An element of Z[ζ_m] on the power basis of Z[x]/Φ_m(x).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicElement {
    conductor: u64,
    coeffs: Vec<BigInt>,
}

impl std::fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Z[ζ_{}]({})", self.conductor, self.to_poly_string())
    }
}

impl CyclotomicElement {
    pub fn zero(m: u64) -> Self {
        CyclotomicElement { conductor: m, coeffs: vec![BigInt::zero(); euler_phi(m) as usize] }
    }

    pub fn one(m: u64) -> Self {
        let mut e = Self::zero(m);
        e.coeffs[0] = BigInt::one();
        e
    }

    pub fn from_integer(m: u64, n: BigInt) -> Self {
        let mut e = Self::zero(m);
        e.coeffs[0] = n;
        e
    }

    /// ζ_m^k, reduced to the power basis.
    pub fn root_power(m: u64, k: u64) -> Self {
        let k = (k % m) as usize;
        let phi = euler_phi(m) as usize;
        if k < phi {
            let mut e = Self::zero(m);
            e.coeffs[k] = BigInt::one();
            return e;
        }
        let mut poly = vec![BigInt::zero(); k + 1];
        poly[k] = BigInt::one();
        CyclotomicElement { conductor: m, coeffs: reduce_mod_cyclotomic(poly, m) }
    }

    pub fn from_coeffs(m: u64, coeffs: Vec<BigInt>) -> Self {
        assert_eq!(coeffs.len(), euler_phi(m) as usize, "coefficient length must be φ(m)");
        CyclotomicElement { conductor: m, coeffs }
    }

    /// Builds an element from coefficients of an arbitrary-degree
    /// polynomial in ζ_m, reducing modulo Φ_m.
    pub fn from_poly(m: u64, poly: Vec<BigInt>) -> Self {
        CyclotomicElement { conductor: m, coeffs: reduce_mod_cyclotomic(poly, m) }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn check_same(&self, other: &Self) -> Result<(), CyclotomicError> {
        if self.conductor != other.conductor {
            Err(CyclotomicError::ConductorMismatch { left: self.conductor, right: other.conductor })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other).expect("conductor mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicElement { conductor: self.conductor, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same(other).expect("conductor mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        CyclotomicElement { conductor: self.conductor, coeffs }
    }

    pub fn neg(&self) -> Self {
        CyclotomicElement {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CyclotomicElement {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other).expect("conductor mismatch");
        let n = self.coeffs.len();
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    let t = a * b;
                    prod[i + j] += t;
                }
            }
        }
        CyclotomicElement {
            conductor: self.conductor,
            coeffs: reduce_mod_cyclotomic(prod, self.conductor),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.conductor);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Galois action σ_t(ζ) = ζ^t for gcd(t, m) = 1.
    pub fn galois(&self, t: u64) -> Self {
        let m = self.conductor;
        assert_eq!(t.gcd(&m), 1, "galois index must be a unit");
        let mut poly = vec![BigInt::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let k = ((i as u64) * t % m) as usize;
                poly[k] += c;
            }
        }
        CyclotomicElement { conductor: m, coeffs: reduce_mod_cyclotomic(poly, m) }
    }

    /// Complex conjugation ζ -> ζ^{-1}.
    pub fn conj(&self) -> Self {
        self.galois(self.conductor - 1)
    }

    /// Is the element a rational integer?
    pub fn rational_value(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Map into Z[ζ_n] for m | n via ζ_m -> ζ_n^{n/m}.
    pub fn embed(&self, n: u64) -> Self {
        assert_eq!(n % self.conductor, 0, "target conductor must be a multiple");
        let step = (n / self.conductor) as usize;
        let mut poly = vec![BigInt::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        CyclotomicElement { conductor: n, coeffs: reduce_mod_cyclotomic(poly, n) }
    }

    /// Exact inverse in Q(ζ_m), with an explicit positive denominator.
    pub fn invert(&self) -> Result<RationalCyclotomic, CyclotomicError> {
        if self.is_zero() {
            return Err(CyclotomicError::DivisionByZero);
        }
        let n = self.coeffs.len();
        // Solve  (mul-by-self matrix) * x = e_0  over Q by exact elimination.
        // Columns of the matrix are self * ζ^j on the power basis.
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        let mut shifted = self.clone();
        cols.push(shifted.coeffs.clone());
        let zeta = Self::root_power(self.conductor, 1);
        for _ in 1..n {
            shifted = shifted.mul(&zeta);
            cols.push(shifted.coeffs.clone());
        }
        // Augmented system rows: row i = (M[i][0..n] | e0[i]) with fractions
        // avoided by tracking a common denominator per row pair (Bareiss).
        let mut a = vec![vec![BigInt::zero(); n + 1]; n];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                a[i][j] = col[i].clone();
            }
        }
        a[0][n] = BigInt::one();
        // Fraction-free forward elimination.
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(s) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return Err(CyclotomicError::DivisionByZero);
                };
                a.swap(k, s);
                // A sign flip does not matter: it cancels in back-substitution.
            }
            for i in k + 1..n {
                for j in k + 1..=n {
                    let t = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = &t / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        // Back substitution over rationals: x_i = (rhs - sum) / a[i][i].
        let mut num = vec![BigInt::zero(); n];
        let mut den = vec![BigInt::one(); n];
        for i in (0..n).rev() {
            let mut rn = a[i][n].clone();
            let mut rd = BigInt::one();
            for j in i + 1..n {
                // rn/rd -= a[i][j] * num[j]/den[j]
                let tn = &a[i][j] * &num[j];
                rn = &rn * &den[j] - &tn * &rd;
                rd *= &den[j];
                let g = rn.gcd(&rd);
                if !g.is_one() && !g.is_zero() {
                    rn /= &g;
                    rd /= &g;
                }
            }
            rd *= &a[i][i];
            let g = rn.gcd(&rd);
            if !g.is_zero() && !g.is_one() {
                rn /= &g;
                rd /= &g;
            }
            if rd.is_negative() {
                rn = -rn;
                rd = -rd;
            }
            num[i] = rn;
            den[i] = rd;
        }
        // Common positive denominator.
        let mut common = BigInt::one();
        for d in &den {
            common = common.lcm(d);
        }
        let coeffs: Vec<BigInt> = (0..n).map(|i| &num[i] * (&common / &den[i])).collect();
        let inv = RationalCyclotomic {
            numerator: CyclotomicElement { conductor: self.conductor, coeffs },
            denominator: common,
        }
        .normalized();
        debug_assert!({
            let prod = self.mul(&inv.numerator);
            prod.rational_value() == Some(inv.denominator.clone())
        });
        Ok(inv)
    }

    /// If the element is ±ζ_m^k, return `(negative, k)`.
    pub fn as_root_of_unity(&self) -> Option<(bool, u64)> {
        for k in 0..self.conductor {
            let z = Self::root_power(self.conductor, k);
            if *self == z {
                return Some((false, k));
            }
            if *self == z.neg() {
                return Some((true, k));
            }
        }
        None
    }

    pub fn to_poly_string(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match i {
                0 => c.to_string(),
                1 => format!("{}*z", c),
                _ => format!("{}*z^{}", c, i),
            };
            parts.push(term);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Reduce an integer polynomial modulo Φ_m to length φ(m).
fn reduce_mod_cyclotomic(mut poly: Vec<BigInt>, m: u64) -> Vec<BigInt> {
    let modulus = cyclotomic_polynomial(m);
    let phi = modulus.len() - 1;
    while poly.len() > phi {
        let lead = poly.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let shift = poly.len() - phi;
        for (i, c) in modulus[..phi].iter().enumerate() {
            let delta = &lead * c;
            poly[shift + i] -= delta;
        }
    }
    poly.resize(phi, BigInt::zero());
    poly
}

/// An element of Q(ζ_m) written as `numerator / denominator` with
/// `denominator > 0` and content-reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCyclotomic {
    pub numerator: CyclotomicElement,
    pub denominator: BigInt,
}

impl RationalCyclotomic {
    pub fn from_integral(e: CyclotomicElement) -> Self {
        RationalCyclotomic { numerator: e, denominator: BigInt::one() }
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_one()
    }

    fn normalized(mut self) -> Self {
        let mut g = self.denominator.clone();
        for c in self.numerator.coeffs() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if !g.is_one() && !g.is_zero() {
            self.numerator =
                CyclotomicElement {
                    conductor: self.numerator.conductor,
                    coeffs: self.numerator.coeffs.iter().map(|c| c / &g).collect(),
                };
            self.denominator /= &g;
        }
        if self.denominator.is_negative() {
            self.numerator = self.numerator.neg();
            self.denominator = -self.denominator.clone();
        }
        self
    }

    pub fn mul_integral(&self, e: &CyclotomicElement) -> Self {
        RationalCyclotomic {
            numerator: self.numerator.mul(e),
            denominator: self.denominator.clone(),
        }
        .normalized()
    }

    pub fn mul(&self, other: &RationalCyclotomic) -> Self {
        RationalCyclotomic {
            numerator: self.numerator.mul(&other.numerator),
            denominator: &self.denominator * &other.denominator,
        }
        .normalized()
    }
}
