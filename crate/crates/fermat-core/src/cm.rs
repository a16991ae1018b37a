//! Complex-multiplication combinatorics for the Prym factors of the
//! Jacobian of y² = xᵐ − 1.
//!
//! For odd m the Jacobian is isogenous to a product of Pryms X_d, one for
//! each divisor d > 1 of m, where X_d has dimension φ(d)/2 and CM by
//! Q(ζ_d) with CM type {j : 1 ≤ j ≤ (d−1)/2, gcd(j, d) = 1}.  For
//! m ≡ 2 (mod 4) the curve covers the odd-core curve twice and the whole
//! ledger is doubled; m ≡ 0 (mod 4) is outside the scope of this crate.

use crate::cyclotomic::{euler_phi, units_mod};
use crate::error::CmError;
use std::collections::BTreeMap;

/// Multiplicative structure of (Z/mZ)^×, with the ascending unit list that
/// fixes row order everywhere downstream.
#[derive(Clone, Debug)]
pub struct GaloisData {
    modulus: u64,
    units: Vec<u64>,
    index: BTreeMap<u64, usize>,
}

impl GaloisData {
    pub fn new(modulus: u64) -> Result<Self, CmError> {
        if modulus < 2 {
            return Err(CmError::InvalidModulus { modulus });
        }
        let units = units_mod(modulus);
        let index = units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        Ok(GaloisData { modulus, units, index })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn units(&self) -> &[u64] {
        &self.units
    }

    pub fn order(&self) -> usize {
        self.units.len()
    }

    pub fn unit_index(&self, j: u64) -> Option<usize> {
        self.index.get(&(j % self.modulus)).copied()
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.modulus as u128) as u64
    }

    pub fn inv(&self, a: u64) -> u64 {
        inv_mod(a % self.modulus, self.modulus).expect("inverse of a unit")
    }

    /// Kernel H_d of the reduction (Z/mZ)^× → (Z/dZ)^× for d | m:
    /// the units congruent to 1 modulo d.
    pub fn kernel_to_divisor(&self, d: u64) -> Vec<u64> {
        assert!(d > 0 && self.modulus % d == 0);
        self.units.iter().copied().filter(|&j| j % d == 1).collect()
    }
}

/// Modular inverse by extended Euclid; `None` when gcd(a, m) > 1.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// A CM type on Q(ζ_d): a set of units containing exactly one of {j, −j}
/// for every unit j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmType {
    modulus: u64,
    members: Vec<u64>, // ascending
}

impl CmType {
    pub fn new(modulus: u64, mut members: Vec<u64>) -> Result<Self, CmError> {
        if modulus < 3 {
            return Err(CmError::InvalidModulus { modulus });
        }
        members.sort_unstable();
        members.dedup();
        let t = CmType { modulus, members };
        if !t.axiom_holds() {
            return Err(CmError::NotACmType { modulus });
        }
        Ok(t)
    }

    /// The Prym CM type {j : 1 ≤ j ≤ (m−1)/2, gcd(j, m) = 1}.
    pub fn prym(modulus: u64) -> Result<Self, CmError> {
        if modulus < 3 {
            return Err(CmError::InvalidModulus { modulus });
        }
        if modulus % 2 == 0 {
            return Err(CmError::OddModulusRequired { modulus });
        }
        let members = units_mod(modulus).into_iter().filter(|&j| j <= (modulus - 1) / 2).collect();
        Ok(CmType { modulus, members })
    }

    fn axiom_holds(&self) -> bool {
        let units = units_mod(self.modulus);
        if self.members.iter().any(|j| units.binary_search(j).is_err()) {
            return false;
        }
        units.iter().all(|&j| self.contains(j) != self.contains(self.modulus - j))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, j: u64) -> bool {
        self.members.binary_search(&(j % self.modulus)).is_ok()
    }

    /// The translated set Φ·u (still a CM type).
    pub fn translated(&self, u: u64) -> Self {
        let mut members: Vec<u64> =
            self.members.iter().map(|&j| (j as u128 * u as u128 % self.modulus as u128) as u64).collect();
        members.sort_unstable();
        CmType { modulus: self.modulus, members }
    }

    /// A CM type is primitive when no unit other than 1 stabilizes it;
    /// primitivity of the type is exactly simplicity of the CM abelian
    /// variety it cuts out.
    pub fn is_primitive(&self) -> bool {
        units_mod(self.modulus)
            .into_iter()
            .filter(|&u| u != 1)
            .all(|u| self.translated(u).members != self.members)
    }

    /// The inverse set {j⁻¹ mod d : j ∈ Φ}, which for a primitive type is
    /// the CM type induced on the reflex field.
    pub fn reflex(&self) -> Self {
        let mut members: Vec<u64> =
            self.members.iter().map(|&j| inv_mod(j, self.modulus).expect("unit")).collect();
        members.sort_unstable();
        CmType { modulus: self.modulus, members }
    }
}

/// One isogeny factor of the Jacobian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrymFactor {
    /// Display label: `J<d>` for prime d, `X`/`X1`,`X2`,… for composite d.
    pub label: String,
    /// dim X_d = φ(d)/2.
    pub dimension: u64,
    /// The divisor d of the odd core with CM field Q(ζ_d).
    pub modulus: u64,
}

/// The full isogeny decomposition of Jac(y² = xᵐ − 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionLedger {
    /// The modulus that was asked about.
    pub modulus: u64,
    /// m itself for odd m; m/2 when m ≡ 2 (mod 4).
    pub odd_core: u64,
    /// Every factor occurs this often (2 exactly when m is even).
    pub multiplicity: u32,
    /// Genus of the curve.
    pub genus: u64,
    /// Factors of the odd-core Jacobian, sorted by descending modulus.
    pub factors: Vec<PrymFactor>,
}

impl DecompositionLedger {
    /// Σ multiplicity · dim over all factors; must equal the genus.
    pub fn total_dimension(&self) -> u64 {
        self.multiplicity as u64 * self.factors.iter().map(|f| f.dimension).sum::<u64>()
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Decompose the Jacobian of y² = xᵐ − 1 into Prym factors.
pub fn decompose_jacobian(m: u64) -> Result<DecompositionLedger, CmError> {
    if m < 3 {
        return Err(CmError::InvalidModulus { modulus: m });
    }
    if m % 4 == 0 {
        return Err(CmError::UnsupportedModulus { modulus: m });
    }
    let (odd_core, multiplicity) = if m % 2 == 0 { (m / 2, 2) } else { (m, 1) };
    if odd_core < 3 {
        // m = 2: genus 0, nothing to decompose.
        return Err(CmError::InvalidModulus { modulus: m });
    }
    let genus = (m - 1) / 2; // floor; the curve is hyperelliptic of degree m

    let mut divisors: Vec<u64> = (2..=odd_core).filter(|d| odd_core % d == 0).collect();
    let composites: Vec<u64> = divisors.iter().copied().filter(|&d| !is_prime(d)).collect();
    let mut labels: BTreeMap<u64, String> = BTreeMap::new();
    for &d in &divisors {
        if is_prime(d) {
            labels.insert(d, format!("J{d}"));
        }
    }
    if composites.len() == 1 {
        labels.insert(composites[0], "X".to_string());
    } else {
        for (i, &d) in composites.iter().enumerate() {
            labels.insert(d, format!("X{}", i + 1));
        }
    }

    divisors.sort_unstable_by(|a, b| b.cmp(a));
    let factors = divisors
        .into_iter()
        .map(|d| PrymFactor { label: labels[&d].clone(), dimension: euler_phi(d) / 2, modulus: d })
        .collect();

    let ledger = DecompositionLedger { modulus: m, odd_core, multiplicity, genus, factors };
    debug_assert_eq!(ledger.total_dimension(), ledger.genus);
    Ok(ledger)
}
