//! Monomial Hodge-class census for the Jacobian of y² = xᵐ − 1.
//!
//! Differential monomials of codimension d are indexed by ordered pairs of
//! d-element subsets of {1, …, g}; a pair is a Hodge class exactly when the
//! two subsets have the same Galois trace signature.  The census sorts every
//! codimension into diagonal, exceptional, and indecomposable classes, and
//! the indecomposable pairs cut out the diagonal subtorus in which the Hodge
//! group embeds.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclotomic::units_mod;
use crate::error::{CmError, HodgeError};
use crate::lattice::Lattice;
use crate::matrix::IntegerMatrix;

/// Largest genus the census will enumerate (2^genus subsets per run).
pub const MAX_CENSUS_GENUS: usize = 24;

/// Trace-signature tables for one modulus.
struct SignatureEngine {
    genus: usize,
    /// `rho[i][k]` is the least positive residue of `units[k] * (i + 1)` mod m.
    rho: Vec<Vec<u16>>,
}

impl SignatureEngine {
    fn new(m: u64) -> Result<Self, HodgeError> {
        if m < 3 {
            return Err(CmError::InvalidModulus { modulus: m }.into());
        }
        if m % 2 == 0 {
            return Err(CmError::OddModulusRequired { modulus: m }.into());
        }
        let genus = ((m - 1) / 2) as usize;
        if genus > MAX_CENSUS_GENUS {
            return Err(HodgeError::GenusTooLarge { genus, max: MAX_CENSUS_GENUS });
        }
        let units = units_mod(m);
        let rho = (1..=genus as u64)
            .map(|i| units.iter().map(|&t| ((t * i) % m) as u16).collect())
            .collect();
        Ok(SignatureEngine { genus, rho })
    }

    /// Visit every `size`-element subset of {0, …, genus−1} exactly once, in
    /// ascending bitmask order, with its signature maintained incrementally.
    fn for_each_subset(&self, size: usize, f: &mut impl FnMut(u64, &[u16])) {
        let mut sig = vec![0u16; self.rho[0].len()];
        let mut mask = 0u64;
        self.descend(0, size, &mut mask, &mut sig, f);
    }

    fn descend(
        &self,
        start: usize,
        remaining: usize,
        mask: &mut u64,
        sig: &mut [u16],
        f: &mut impl FnMut(u64, &[u16]),
    ) {
        if remaining == 0 {
            f(*mask, sig);
            return;
        }
        for i in start..=self.genus - remaining {
            for (acc, &v) in sig.iter_mut().zip(&self.rho[i]) {
                *acc += v;
            }
            *mask |= 1 << i;
            self.descend(i + 1, remaining - 1, mask, sig, f);
            *mask &= !(1 << i);
            for (acc, &v) in sig.iter_mut().zip(&self.rho[i]) {
                *acc -= v;
            }
        }
    }

    fn classes_at(&self, codim: usize) -> HashMap<Vec<u16>, Vec<u64>> {
        let mut classes: HashMap<Vec<u16>, Vec<u64>> = HashMap::new();
        self.for_each_subset(codim, &mut |mask, sig| {
            classes.entry(sig.to_vec()).or_default().push(mask);
        });
        classes
    }
}

/// Galois trace signature of a monomial: for each unit t of m (ascending),
/// the sum of the least positive residues of t·i over the given indices.
pub fn trace_signature(m: u64, indices: &[u16]) -> Result<Vec<u64>, HodgeError> {
    let engine = SignatureEngine::new(m)?;
    if indices.is_empty() || indices.len() > engine.genus {
        return Err(HodgeError::CodimOutOfRange { codim: indices.len(), genus: engine.genus });
    }
    let mut seen = vec![false; engine.genus];
    for &i in indices {
        if i == 0 || i as usize > engine.genus {
            return Err(HodgeError::MonomialIndexOutOfRange { index: i, genus: engine.genus });
        }
        if seen[i as usize - 1] {
            return Err(HodgeError::DuplicateMonomialIndex { index: i });
        }
        seen[i as usize - 1] = true;
    }
    let width = engine.rho[0].len();
    let mut sig = vec![0u64; width];
    for &i in indices {
        for (acc, &v) in sig.iter_mut().zip(&engine.rho[i as usize - 1]) {
            *acc += v as u64;
        }
    }
    Ok(sig)
}

/// One codimension's worth of census counts.  All counts are of ordered
/// pairs, so conjugate classes contribute separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimCensus {
    pub codim: usize,
    /// Pairs (a, b) with equal signatures, diagonal included.
    pub hodge_dimension: u64,
    /// Pairs with a ≠ b: classes outside the divisor-generated subring.
    pub exceptional: u64,
    /// Exceptional pairs that are not a product of lower-codimension classes.
    pub indecomposable: u64,
}

/// Census of the full Hodge ring for one modulus.
#[derive(Clone, Debug)]
pub struct HodgeCensus {
    modulus: u64,
    genus: usize,
    per_codim: Vec<CodimCensus>,
    /// Ordered indecomposable pairs over all codimensions, ascending codim,
    /// then ascending (a, b) bitmask order.
    indecomposable_pairs: Vec<(u64, u64)>,
}

impl HodgeCensus {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn per_codim(&self) -> &[CodimCensus] {
        &self.per_codim
    }

    pub fn codim(&self, d: usize) -> Result<&CodimCensus, HodgeError> {
        if d == 0 || d > self.genus {
            return Err(HodgeError::CodimOutOfRange { codim: d, genus: self.genus });
        }
        Ok(&self.per_codim[d - 1])
    }

    /// Dimension of codimension-d classes modulo products of lower ones.
    /// Codimension 1 has no products below it, so the quotient is everything.
    pub fn quotient_dimension(&self, d: usize) -> Result<u64, HodgeError> {
        let c = self.codim(d)?;
        if d == 1 {
            Ok(c.hodge_dimension)
        } else {
            Ok(c.indecomposable)
        }
    }

    pub fn total_exceptional(&self) -> u64 {
        self.per_codim.iter().map(|c| c.exceptional).sum()
    }

    pub fn is_degenerate(&self) -> bool {
        self.total_exceptional() > 0
    }

    /// Ordered indecomposable pairs as bitmasks over {0, …, genus−1}.
    pub fn indecomposable_pairs(&self) -> &[(u64, u64)] {
        &self.indecomposable_pairs
    }
}

/// Run the full census over every codimension 1..=genus.
pub fn census(m: u64) -> Result<HodgeCensus, HodgeError> {
    let engine = SignatureEngine::new(m)?;
    let genus = engine.genus;
    let mut per_codim = Vec::with_capacity(genus);
    let mut e_pairs: Vec<(u64, u64)> = Vec::new();
    for codim in 1..=genus {
        let classes = engine.classes_at(codim);
        let mut hodge = 0u64;
        let mut exceptional = 0u64;
        let mut fresh: Vec<(u64, u64)> = Vec::new();
        for members in classes.values() {
            let n = members.len() as u64;
            hodge += n * n;
            exceptional += n * (n - 1);
            if n < 2 {
                continue;
            }
            for &a in members {
                for &b in members {
                    if a == b || a & b != 0 {
                        // Shared indices always factor out: the complement
                        // pair inherits equal signatures by subtraction.
                        continue;
                    }
                    let contained = e_pairs
                        .iter()
                        .any(|&(e, f)| e & a == e && f & b == f);
                    if !contained {
                        fresh.push((a, b));
                    }
                }
            }
        }
        // Same-codimension pairs can never witness each other's
        // decomposability, so merging after the scan is sound.
        fresh.sort_unstable();
        per_codim.push(CodimCensus {
            codim,
            hodge_dimension: hodge,
            exceptional,
            indecomposable: fresh.len() as u64,
        });
        e_pairs.extend(fresh);
    }
    Ok(HodgeCensus { modulus: m, genus, per_codim, indecomposable_pairs: e_pairs })
}

/// An ordered pair of index sets, displayed as `(1,4 | 2,3)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialPair {
    pub left: Vec<u16>,
    pub right: Vec<u16>,
}

impl MonomialPair {
    pub fn new(left: Vec<u16>, right: Vec<u16>) -> Self {
        MonomialPair { left, right }
    }

    fn from_masks(a: u64, b: u64) -> Self {
        MonomialPair { left: mask_to_indices(a), right: mask_to_indices(b) }
    }
}

impl fmt::Display for MonomialPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u16]| {
            v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        };
        write!(f, "({} | {})", join(&self.left), join(&self.right))
    }
}

fn mask_to_indices(mask: u64) -> Vec<u16> {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i as u16 + 1)
        .collect()
}

/// All exceptional classes at one codimension, sorted by index lists.
pub fn exceptional_cycles(m: u64, codim: usize) -> Result<Vec<MonomialPair>, HodgeError> {
    let engine = SignatureEngine::new(m)?;
    if codim == 0 || codim > engine.genus {
        return Err(HodgeError::CodimOutOfRange { codim, genus: engine.genus });
    }
    let mut out = Vec::new();
    for members in engine.classes_at(codim).values() {
        for &a in members {
            for &b in members {
                if a != b {
                    out.push(MonomialPair::from_masks(a, b));
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Check that wedge products of the Hodge classes at codimensions d1 and d2
/// span all Hodge classes at codimension d1 + d2.  Each product of monomial
/// classes is ± a single monomial, so spanning reduces to set coverage.
pub fn product_span_equals_hodge_space(
    m: u64,
    d1: usize,
    d2: usize,
) -> Result<bool, HodgeError> {
    let engine = SignatureEngine::new(m)?;
    let d = d1 + d2;
    for part in [d1, d2, d] {
        if part == 0 || part > engine.genus {
            return Err(HodgeError::CodimOutOfRange { codim: part, genus: engine.genus });
        }
    }
    let pairs_at = |codim: usize| -> Vec<(u64, u64)> {
        let mut pairs = Vec::new();
        for members in engine.classes_at(codim).values() {
            for &a in members {
                for &b in members {
                    pairs.push((a, b));
                }
            }
        }
        pairs
    };
    let lo = pairs_at(d1);
    let hi = if d2 == d1 { lo.clone() } else { pairs_at(d2) };
    let target: HashSet<(u64, u64)> = pairs_at(d).into_iter().collect();
    let mut reached: HashSet<(u64, u64)> = HashSet::new();
    for &(a1, b1) in &lo {
        for &(a2, b2) in &hi {
            if a1 & a2 == 0 && b1 & b2 == 0 {
                reached.insert((a1 | a2, b1 | b2));
            }
        }
    }
    debug_assert!(reached.is_subset(&target));
    Ok(reached == target)
}

/// How the torus coordinates are presented.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParametrizationStyle {
    /// Free coordinates are literal parameters; dependent coordinates are
    /// integer monomials in them (possible when the dependent-pivot Hermite
    /// form is unimodular, which holds for every modulus exercised here).
    BackSubstitution,
    /// Fallback: columns of a saturated kernel basis, no identity sub-block.
    General,
}

/// The diagonal subtorus of U(1)^genus cut out by the indecomposable
/// exceptional classes: each class (a | b) forces ∏_{i∈a} U_i = ∏_{j∈b} U_j.
#[derive(Clone, Debug)]
pub struct HodgeTorus {
    modulus: u64,
    genus: usize,
    style: ParametrizationStyle,
    /// 1-based coordinates used as parameters (empty for `General`).
    free_indices: Vec<usize>,
    /// genus × free_rank exponent matrix: row i expresses U_{i+1}.
    exponents: IntegerMatrix,
    relation_lattice: Lattice,
}

impl HodgeTorus {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn style(&self) -> ParametrizationStyle {
        self.style
    }

    pub fn free_rank(&self) -> usize {
        self.exponents.cols()
    }

    pub fn free_indices(&self) -> &[usize] {
        &self.free_indices
    }

    pub fn dependent_indices(&self) -> Vec<usize> {
        let free: HashSet<usize> = self.free_indices.iter().copied().collect();
        (1..=self.genus).filter(|i| !free.contains(i)).collect()
    }

    pub fn exponents(&self) -> &IntegerMatrix {
        &self.exponents
    }

    pub fn relation_lattice(&self) -> &Lattice {
        &self.relation_lattice
    }

    /// Monomials fixed by this torus are exactly those whose two index sets
    /// have equal exponent-row sums.  Verify, codimension by codimension,
    /// that this partitions the subsets identically to the trace signature,
    /// i.e. the torus fixes precisely the Hodge classes.
    pub fn fixes_exactly_the_hodge_classes(&self) -> Result<bool, HodgeError> {
        let engine = SignatureEngine::new(self.modulus)?;
        let vrows: Vec<Vec<i64>> = (0..self.genus)
            .map(|i| {
                self.exponents
                    .row(i)
                    .iter()
                    .map(|x| i64::try_from(x).expect("torus exponent fits i64"))
                    .collect()
            })
            .collect();
        let width = self.free_rank();
        for codim in 1..=self.genus {
            let mut sig_to_v: HashMap<Vec<u16>, Vec<i64>> = HashMap::new();
            let mut v_to_sig: HashMap<Vec<i64>, Vec<u16>> = HashMap::new();
            let mut agree = true;
            engine.for_each_subset(codim, &mut |mask, sig| {
                let mut vkey = vec![0i64; width];
                for (i, row) in vrows.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        for (acc, &v) in vkey.iter_mut().zip(row) {
                            *acc += v;
                        }
                    }
                }
                match sig_to_v.get(sig) {
                    Some(existing) => {
                        if *existing != vkey {
                            agree = false;
                        }
                    }
                    None => {
                        sig_to_v.insert(sig.to_vec(), vkey.clone());
                    }
                }
                match v_to_sig.get(&vkey) {
                    Some(existing) => {
                        if existing.as_slice() != sig {
                            agree = false;
                        }
                    }
                    None => {
                        v_to_sig.insert(vkey, sig.to_vec());
                    }
                }
            });
            if !agree {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Compute the relation lattice and a parametrization of the subtorus fixed
/// by every indecomposable exceptional class.
pub fn hodge_torus(m: u64) -> Result<HodgeTorus, HodgeError> {
    let cen = census(m)?;
    let genus = cen.genus;
    let mut rel_rows: Vec<Vec<BigInt>> = Vec::new();
    for &(a, b) in cen.indecomposable_pairs() {
        if a > b {
            // (b, a) contributes the negated relation; one orientation is
            // enough to generate.
            continue;
        }
        let mut row = vec![BigInt::zero(); genus];
        for (i, entry) in row.iter_mut().enumerate() {
            if a >> i & 1 == 1 {
                *entry += 1;
            }
            if b >> i & 1 == 1 {
                *entry -= 1;
            }
        }
        rel_rows.push(row);
    }
    let relation_lattice = if rel_rows.is_empty() {
        Lattice::zero(genus)
    } else {
        Lattice::from_generators(&IntegerMatrix::from_rows(rel_rows))
    };

    let basis = relation_lattice.basis();
    let k = basis.rows();
    if k == 0 {
        return Ok(HodgeTorus {
            modulus: m,
            genus,
            style: ParametrizationStyle::BackSubstitution,
            free_indices: (1..=genus).collect(),
            exponents: IntegerMatrix::identity(genus),
            relation_lattice,
        });
    }

    // Re-echelonize with the column order reversed so pivots land on the
    // highest coordinates: those become the dependent ones.
    let reversed = IntegerMatrix::from_rows(
        (0..k)
            .map(|r| {
                let mut row = basis.row_vec(r);
                row.reverse();
                row
            })
            .collect(),
    );
    let (h, _) = reversed.hermite_normal_form();
    let h = h.drop_zero_rows();
    debug_assert_eq!(h.rows(), k);

    let mut pivot_rev_cols = Vec::with_capacity(k);
    let mut unit_pivots = true;
    for r in 0..k {
        let row = h.row(r);
        let j = row.iter().position(|v| !v.is_zero()).expect("zero basis row");
        if !row[j].is_one() {
            unit_pivots = false;
        }
        pivot_rev_cols.push(j);
    }

    if !unit_pivots {
        let kernel = basis.right_kernel();
        return Ok(HodgeTorus {
            modulus: m,
            genus,
            style: ParametrizationStyle::General,
            free_indices: Vec::new(),
            exponents: kernel.transpose(),
            relation_lattice,
        });
    }

    let dependent: HashSet<usize> = pivot_rev_cols.iter().map(|&j| genus - 1 - j).collect();
    let free: Vec<usize> = (0..genus).filter(|i| !dependent.contains(i)).collect();
    let free_rank = free.len();
    let mut expr: Vec<Option<Vec<BigInt>>> = vec![None; genus];
    for (c, &i) in free.iter().enumerate() {
        let mut unit = vec![BigInt::zero(); free_rank];
        unit[c] = BigInt::one();
        expr[i] = Some(unit);
    }
    // Pivot columns increase down the Hermite form, so original pivot
    // indices increase when the rows are walked bottom-up; every coordinate
    // a row references below its pivot is then already resolved.
    for r in (0..k).rev() {
        let p = genus - 1 - pivot_rev_cols[r];
        let row = h.row(r);
        let mut acc = vec![BigInt::zero(); free_rank];
        for (j, c) in row.iter().enumerate() {
            let orig = genus - 1 - j;
            if orig == p || c.is_zero() {
                continue;
            }
            let sub = expr[orig].as_ref().expect("unresolved coordinate");
            for (t, s) in acc.iter_mut().zip(sub) {
                *t -= c * s;
            }
        }
        expr[p] = Some(acc);
    }
    let exponents =
        IntegerMatrix::from_rows(expr.into_iter().map(|o| o.expect("unparametrized row")).collect());
    Ok(HodgeTorus {
        modulus: m,
        genus,
        style: ParametrizationStyle::BackSubstitution,
        free_indices: free.iter().map(|i| i + 1).collect(),
        exponents,
        relation_lattice,
    })
}

/// The relation lattice a given genus × rank exponent matrix imposes: all
/// integer vectors e with Σ e_i · row_i = 0.
pub fn relation_lattice_of_parametrization(exponents: &IntegerMatrix) -> Lattice {
    let kernel = exponents.transpose().right_kernel();
    if kernel.rows() == 0 {
        Lattice::zero(exponents.rows())
    } else {
        Lattice::from_generators(&kernel)
    }
}
