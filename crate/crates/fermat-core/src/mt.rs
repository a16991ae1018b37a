//! Projection matrices between Mumford–Tate tori and their classification.
//!
//! For odd m the Mumford–Tate group of Jac(y² = xᵐ − 1) is a subtorus of the
//! product of the CM tori of its Prym factors.  Its character lattice is the
//! image of an integral 0/1 matrix M whose rows are indexed by Gal(Q(ζ_m)/Q)
//! and whose columns are indexed by characters of the factor tori: the column
//! of a character b of (Z/dZ)^× has a 1 in row τ_j exactly when j mod d lies
//! in the translate (reflex type of X_d)·b.
//!
//! Restricting to a set of target factors is an isomorphism / isogeny /
//! neither according to the index of the projected kernel lattice in the
//! complement coordinates; see [`MtMatrix::classify`].
//!
//! Matrices stay small enough for exact integer elimination up to φ(m) of a
//! couple hundred.  Beyond that a modular fast path produces candidate kernel
//! vectors which are then re-verified exactly over Z — a verdict is only ever
//! issued from exact arithmetic; if verification fails the code falls back to
//! the generic exact route.

use crate::cm::{decompose_jacobian, CmType, DecompositionLedger};
use crate::cyclotomic::{euler_phi, units_mod};
use crate::error::{CmError, MtError};
use crate::lattice::{Lattice, LatticeIndex};
use crate::matrix::IntegerMatrix;
use crate::modq::{crt_balanced, rational_reconstruct, ModqEchelon, ELIMINATION_PRIMES};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Largest φ(m) that still goes through generic exact elimination directly.
const GENERIC_PATH_MAX_PHI: u64 = 200;

/// Column block of the projection matrix belonging to one Prym factor.
#[derive(Clone, Debug)]
pub struct MtBlock {
    pub label: String,
    pub modulus: u64,
    /// Units of `modulus` in ascending order; one column per unit.
    pub characters: Vec<u64>,
    pub col_start: usize,
}

/// The concatenated projection matrix for all factors of one Jacobian.
pub struct MtMatrix {
    ledger: DecompositionLedger,
    row_units: Vec<u64>,
    blocks: Vec<MtBlock>,
    entries: Vec<u8>, // row-major 0/1, n_rows × n_cols
    n_rows: usize,
    n_cols: usize,
}

/// Outcome of restricting the Mumford–Tate group to a set of factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectionVerdict {
    Isomorphism,
    Isogeny { index: BigInt },
    Neither,
}

impl std::fmt::Display for ProjectionVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProjectionVerdict::Isomorphism => write!(f, "isomorphism"),
            ProjectionVerdict::Isogeny { index } => write!(f, "isogeny of degree {index}"),
            ProjectionVerdict::Neither => write!(f, "neither"),
        }
    }
}

/// Build the projection matrix for odd m ≥ 3.
pub fn projection_matrix(m: u64) -> Result<MtMatrix, MtError> {
    if m % 2 == 0 {
        return Err(CmError::OddModulusRequired { modulus: m }.into());
    }
    let ledger = decompose_jacobian(m)?;
    let row_units = units_mod(m);
    let n_rows = row_units.len();

    let mut blocks = Vec::with_capacity(ledger.factors.len());
    let mut col_start = 0usize;
    for factor in &ledger.factors {
        let characters = units_mod(factor.modulus);
        let width = characters.len();
        blocks.push(MtBlock {
            label: factor.label.clone(),
            modulus: factor.modulus,
            characters,
            col_start,
        });
        col_start += width;
    }
    let n_cols = col_start;

    let mut entries = vec![0u8; n_rows * n_cols];
    for block in &blocks {
        let d = block.modulus;
        let reflex = CmType::prym(d)?.reflex();
        for (k, &b) in block.characters.iter().enumerate() {
            let translate = reflex.translated(b);
            let c = block.col_start + k;
            for (r, &j) in row_units.iter().enumerate() {
                if translate.contains(j % d) {
                    entries[r * n_cols + c] = 1;
                }
            }
        }
    }

    let matrix = MtMatrix { ledger, row_units, blocks, entries, n_rows, n_cols };
    debug_assert!(matrix.column_sums_are_balanced());
    Ok(matrix)
}

impl MtMatrix {
    pub fn ledger(&self) -> &DecompositionLedger {
        &self.ledger
    }

    pub fn row_units(&self) -> &[u64] {
        &self.row_units
    }

    pub fn blocks(&self) -> &[MtBlock] {
        &self.blocks
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn entry(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.n_cols + c]
    }

    pub fn to_integer_matrix(&self) -> IntegerMatrix {
        let rows = (0..self.n_rows)
            .map(|r| {
                (0..self.n_cols).map(|c| BigInt::from(self.entry(r, c))).collect::<Vec<_>>()
            })
            .collect();
        IntegerMatrix::from_rows(rows)
    }

    /// Every column carries φ(m)/2 ones and every row carries (Σφ(d))/2.
    fn column_sums_are_balanced(&self) -> bool {
        let half_units = self.n_rows / 2;
        let col_ok = (0..self.n_cols).all(|c| {
            (0..self.n_rows).map(|r| self.entry(r, c) as usize).sum::<usize>() == half_units
        });
        let half_cols = self.n_cols / 2;
        let row_ok = (0..self.n_rows).all(|r| {
            (0..self.n_cols).map(|c| self.entry(r, c) as usize).sum::<usize>() == half_cols
        });
        col_ok && row_ok
    }

    /// Columns of the blocks named by `target_labels`, ascending.
    pub fn target_columns(&self, target_labels: &[&str]) -> Result<Vec<usize>, MtError> {
        let mut cols = Vec::new();
        for &label in target_labels {
            let block = self
                .blocks
                .iter()
                .find(|b| b.label == label)
                .ok_or_else(|| MtError::UnknownFactor(label.to_string()))?;
            cols.extend(block.col_start..block.col_start + block.characters.len());
        }
        cols.sort_unstable();
        cols.dedup();
        Ok(cols)
    }

    /// Rank of the matrix over Q (dimension of the Mumford–Tate torus).
    pub fn rank(&self) -> usize {
        if euler_phi(self.ledger.odd_core) <= GENERIC_PATH_MAX_PHI {
            self.to_integer_matrix().rank()
        } else {
            self.certified_rank().expect("modular rank certificate failed on every prime")
        }
    }

    /// Classify the restriction of the Mumford–Tate group to the named
    /// factors.
    pub fn classify(&self, target_labels: &[&str]) -> Result<ProjectionVerdict, MtError> {
        let target_cols = self.target_columns(target_labels)?;
        if target_cols.len() == self.n_cols {
            // Restriction to all factors is the identity.
            return Ok(ProjectionVerdict::Isomorphism);
        }
        if euler_phi(self.ledger.odd_core) <= GENERIC_PATH_MAX_PHI {
            self.classify_exact(&target_cols)
        } else if let Some(verdict) = self.classify_via_modular_candidates(&target_cols) {
            Ok(verdict)
        } else {
            // The fast path could not assemble an exact certificate.
            self.classify_exact(&target_cols)
        }
    }

    /// Exact route: right kernel over Z, then the index of its projection to
    /// the non-target coordinates.
    fn classify_exact(&self, target_cols: &[usize]) -> Result<ProjectionVerdict, MtError> {
        let complement = self.complement_columns(target_cols);
        let kernel = self.to_integer_matrix().right_kernel();
        let projected = kernel.select_columns(&complement);
        let lat = Lattice::from_generators(&projected);
        if lat.rank() < complement.len() {
            return Ok(ProjectionVerdict::Neither);
        }
        match lat.index_in(&Lattice::standard(complement.len()))? {
            LatticeIndex::Finite(index) if index.is_one() => Ok(ProjectionVerdict::Isomorphism),
            LatticeIndex::Finite(index) => Ok(ProjectionVerdict::Isogeny { index }),
            LatticeIndex::Infinite => Ok(ProjectionVerdict::Neither),
        }
    }

    fn complement_columns(&self, target_cols: &[usize]) -> Vec<usize> {
        (0..self.n_cols).filter(|c| target_cols.binary_search(c).is_err()).collect()
    }

    /// Fast path: candidate kernel vectors from modular elimination, each
    /// re-verified exactly over Z.  Returns `None` whenever the certificate
    /// cannot be completed; never returns an unverified verdict.
    ///
    /// With the columns permuted so the target block comes first, pivots all
    /// landing inside the target block means every complement column is free;
    /// an exact integral kernel vector that is 1 at a free column f and 0 at
    /// the other free columns projects to the standard basis vector e_f, and
    /// a full set of those makes the projected kernel all of Z^complement —
    /// an isomorphism, proved without trusting anything modular.
    fn classify_via_modular_candidates(&self, target_cols: &[usize]) -> Option<ProjectionVerdict> {
        let complement = self.complement_columns(target_cols);
        let t = target_cols.len();
        // Column permutation: target block first, complement after.
        let perm: Vec<usize> = target_cols.iter().chain(complement.iter()).copied().collect();
        let permuted = self.permuted_entries(&perm);

        // A second pass with a shifted prime window guards against an unlucky
        // first prime distorting the pivot structure.
        for first_prime in 0..2 {
            let mut pool =
                EchelonPool::new(permuted.clone(), self.n_rows, self.n_cols, first_prime)?;
            if !pool.ensure(2) {
                continue;
            }
            if pool.pivot_cols().iter().any(|&p| p >= t) {
                // Rank of the target block is deficient modulo q.  Try to
                // certify `Neither`: the exact rank of the whole matrix is at
                // least the modular rank, and exhibiting enough exact kernel
                // vectors of the target block pins its rank strictly below.
                if let Some(v) = certify_neither(&permuted, self.n_rows, self.n_cols, t, &pool, first_prime) {
                    return Some(v);
                }
                continue;
            }
            // All pivots inside the target block: every complement column is
            // free.  Reconstruct one exact kernel vector per complement column.
            let all_verified = (0..complement.len()).all(|k| {
                matches!(
                    reconstruct_verified(&mut pool, t + k),
                    Some(rec) if rec.denominator.is_one()
                )
            });
            if all_verified {
                return Some(ProjectionVerdict::Isomorphism);
            }
        }
        None
    }

    fn permuted_entries(&self, perm: &[usize]) -> Vec<u8> {
        let mut out = vec![0u8; self.n_rows * self.n_cols];
        for r in 0..self.n_rows {
            let src = &self.entries[r * self.n_cols..(r + 1) * self.n_cols];
            let dst = &mut out[r * self.n_cols..(r + 1) * self.n_cols];
            for (new_c, &old_c) in perm.iter().enumerate() {
                dst[new_c] = src[old_c];
            }
        }
        out
    }

    /// Rank of the matrix certified without generic exact elimination: the
    /// modular rank is an exact lower bound, and one verified exact kernel
    /// vector per modular free column is an exact upper bound meeting it.
    fn certified_rank(&self) -> Option<usize> {
        for first_prime in 0..2 {
            let mut pool =
                EchelonPool::new(self.entries.clone(), self.n_rows, self.n_cols, first_prime)?;
            if !pool.ensure(2) {
                continue;
            }
            let rank = pool.pivot_cols().len();
            let free: Vec<usize> =
                (0..self.n_cols).filter(|&c| !pool.echelons[0].is_pivot(c)).collect();
            if free.iter().all(|&f| reconstruct_verified(&mut pool, f).is_some()) {
                return Some(rank);
            }
        }
        None
    }
}

/// Certify `Neither` from a modular elimination whose pivots escaped the
/// (leading) target block: exact kernel vectors of the target submatrix push
/// its rank strictly below the exact rank of the full matrix.
fn certify_neither(
    permuted: &[u8],
    nrows: usize,
    ncols: usize,
    t: usize,
    full_pool: &EchelonPool,
    first_prime: usize,
) -> Option<ProjectionVerdict> {
    let full_rank_lower = full_pool.pivot_cols().len(); // exact rank >= modular rank
    let target_entries: Vec<u8> = (0..nrows)
        .flat_map(|r| permuted[r * ncols..r * ncols + t].iter().copied())
        .collect();
    let mut pool = EchelonPool::new(target_entries, nrows, t, first_prime)?;
    if !pool.ensure(2) {
        return None;
    }
    let target_rank_mod = pool.pivot_cols().len();
    if target_rank_mod >= full_rank_lower {
        return None;
    }
    // Verify one exact kernel vector per free column of the target block;
    // success bounds the exact target rank above by its modular rank.
    let free: Vec<usize> = (0..t).filter(|&c| !pool.echelons[0].is_pivot(c)).collect();
    if free.iter().all(|&f| reconstruct_verified(&mut pool, f).is_some()) {
        Some(ProjectionVerdict::Neither)
    } else {
        None
    }
}

/// Echelon forms of one matrix modulo successive 31-bit primes, grown lazily
/// and shared by every kernel-vector reconstruction.  Later primes must agree
/// with the pivot structure of the first; disagreeing (unlucky) primes are
/// skipped.
struct EchelonPool {
    entries: Vec<u8>,
    nrows: usize,
    ncols: usize,
    echelons: Vec<ModqEchelon>,
    next_prime: usize,
}

const MAX_POOL_PRIMES: usize = 6;

impl EchelonPool {
    fn new(entries: Vec<u8>, nrows: usize, ncols: usize, first_prime: usize) -> Option<Self> {
        if first_prime >= ELIMINATION_PRIMES.len() {
            return None;
        }
        let echelon = ModqEchelon::new(&entries, nrows, ncols, ELIMINATION_PRIMES[first_prime]);
        Some(EchelonPool {
            entries,
            nrows,
            ncols,
            echelons: vec![echelon],
            next_prime: first_prime + 1,
        })
    }

    fn pivot_cols(&self) -> &[usize] {
        &self.echelons[0].pivot_cols
    }

    fn ensure(&mut self, count: usize) -> bool {
        while self.echelons.len() < count {
            if self.next_prime >= ELIMINATION_PRIMES.len() {
                return false;
            }
            let e = ModqEchelon::new(
                &self.entries,
                self.nrows,
                self.ncols,
                ELIMINATION_PRIMES[self.next_prime],
            );
            self.next_prime += 1;
            if e.pivot_cols == self.echelons[0].pivot_cols {
                self.echelons.push(e);
            }
        }
        true
    }
}

/// An integral kernel vector recovered from modular data and then verified
/// exactly: `denominator` at the free column, the reconstructed values at the
/// pivot columns, zero elsewhere.  Existence alone certifies a kernel element;
/// `denominator == 1` additionally makes its free-coordinate projection a
/// standard basis vector.
struct ReconstructedVector {
    denominator: BigInt,
}

/// CRT + rational reconstruction of the kernel vector that is 1 at `free_col`
/// and 0 at every other free column, re-verified exactly over Z.  Starts from
/// two primes and widens the CRT modulus until the exact check passes.
fn reconstruct_verified(pool: &mut EchelonPool, free_col: usize) -> Option<ReconstructedVector> {
    for count in 2..=MAX_POOL_PRIMES {
        if !pool.ensure(count) {
            return None;
        }
        let pivot_cols = pool.pivot_cols().to_vec();
        let mut residues: Vec<Vec<(u64, u64)>> = vec![Vec::new(); pivot_cols.len()];
        for e in &pool.echelons {
            for (i, v) in e.kernel_pivot_values(free_col).into_iter().enumerate() {
                residues[i].push((v, e.barrett.q));
            }
        }
        if let Some(rec) = assemble_and_verify(pool, &pivot_cols, free_col, &residues) {
            return Some(rec);
        }
    }
    None
}

fn assemble_and_verify(
    pool: &EchelonPool,
    pivot_cols: &[usize],
    free_col: usize,
    residues: &[Vec<(u64, u64)>],
) -> Option<ReconstructedVector> {
    // Balanced CRT lift per pivot coordinate, then try small-integer and
    // rational interpretations.
    let mut numerators = Vec::with_capacity(pivot_cols.len());
    let mut denominator = BigInt::one();
    for r in residues {
        let (lifted, modulus) = crt_balanced(r);
        // Prefer the balanced integer when clearly inside the safe zone.
        let margin = &modulus >> 20;
        if lifted.abs() * 2 < margin {
            numerators.push((lifted, BigInt::one()));
        } else {
            let a = if lifted.is_negative() { lifted + &modulus } else { lifted };
            let (n, d) = rational_reconstruct(&a, &modulus)?;
            numerators.push((n, d));
        }
    }
    for (_, d) in &numerators {
        denominator = num_integer::lcm(denominator.clone(), d.clone());
    }
    // Integer kernel vector: denominator at free_col, scaled values at pivots.
    let scaled: Vec<BigInt> = numerators.iter().map(|(n, d)| n * (&denominator / d)).collect();
    if !verify_kernel_vector(
        &pool.entries,
        pool.nrows,
        pool.ncols,
        pivot_cols,
        free_col,
        &scaled,
        &denominator,
    ) {
        return None;
    }
    Some(ReconstructedVector { denominator })
}

/// Exact check that the assembled vector annihilates every row.
fn verify_kernel_vector(
    entries: &[u8],
    nrows: usize,
    ncols: usize,
    pivot_cols: &[usize],
    free_col: usize,
    pivot_values: &[BigInt],
    free_value: &BigInt,
) -> bool {
    let fits_i64 = pivot_values.iter().all(|v| i64::try_from(v).is_ok())
        && i64::try_from(free_value).is_ok();
    if fits_i64 {
        // Row sums of at most ncols terms bounded by 2^63 cannot overflow i128.
        let vals: Vec<i128> =
            pivot_values.iter().map(|v| i64::try_from(v).unwrap() as i128).collect();
        let fv = i64::try_from(free_value).unwrap() as i128;
        for r in 0..nrows {
            let row = &entries[r * ncols..(r + 1) * ncols];
            let mut acc: i128 = if row[free_col] != 0 { fv } else { 0 };
            for (i, &c) in pivot_cols.iter().enumerate() {
                if row[c] != 0 {
                    acc += vals[i];
                }
            }
            if acc != 0 {
                return false;
            }
        }
        true
    } else {
        for r in 0..nrows {
            let row = &entries[r * ncols..(r + 1) * ncols];
            let mut acc = if row[free_col] != 0 { free_value.clone() } else { BigInt::zero() };
            for (i, &c) in pivot_cols.iter().enumerate() {
                if row[c] != 0 {
                    acc += &pivot_values[i];
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
        true
    }
}
