//! Exact trace-moment statistics for diagonally embedded torus groups and
//! their finite extensions inside USp(2g).
//!
//! A torus element is diag(u₁, ū₁, …), with each uᵢ a Laurent monomial in
//! the free parameters; averaging a trace power over the torus is taking a
//! constant term.  A component representative is a signed permutation matrix
//! normalizing the torus, and full-group moments average over its cosets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::MomentError;
use crate::hodge::HodgeTorus;
use crate::laurent::LaurentPolynomial;
use crate::matrix::IntegerMatrix;

/// Hard cap on the moment order; trace powers grow combinatorially.
pub const MAX_MOMENT: usize = 12;

/// Cap on the power search when measuring the component group.
const COMPONENT_SEARCH_CAP: usize = 64;

/// A matrix with exactly one entry ±1 in each row and column.  Column `j`
/// holds `sign[j]` at row `perm[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    sign: Vec<i64>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, sign: Vec<i64>) -> Result<Self, MomentError> {
        let n = perm.len();
        if sign.len() != n {
            return Err(MomentError::NotSymplectic(format!(
                "permutation has {} columns but {} signs",
                n,
                sign.len()
            )));
        }
        let mut seen = vec![false; n];
        for &r in &perm {
            if r >= n || seen[r] {
                return Err(MomentError::NotSymplectic(
                    "column images do not form a permutation".into(),
                ));
            }
            seen[r] = true;
        }
        if sign.iter().any(|&s| s != 1 && s != -1) {
            return Err(MomentError::NotSymplectic("signs must be ±1".into()));
        }
        Ok(SignedPermutation { perm, sign })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation { perm: (0..n).collect(), sign: vec![1; n] }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Row receiving column `j`.
    pub fn image_of(&self, j: usize) -> usize {
        self.perm[j]
    }

    pub fn sign_of(&self, j: usize) -> i64 {
        self.sign[j]
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let n = self.dim();
        let mut perm = vec![0usize; n];
        let mut sign = vec![0i64; n];
        for j in 0..n {
            perm[j] = self.perm[other.perm[j]];
            sign[j] = other.sign[j] * self.sign[other.perm[j]];
        }
        SignedPermutation { perm, sign }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = SignedPermutation::identity(self.dim());
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// If the permutation part is trivial, the diagonal sign vector.
    pub fn diagonal_signs(&self) -> Option<&[i64]> {
        if self.perm.iter().enumerate().all(|(j, &r)| j == r) {
            Some(&self.sign)
        } else {
            None
        }
    }

    pub fn to_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.dim();
        let mut m = vec![vec![0i64; n]; n];
        for j in 0..n {
            m[self.perm[j]][j] = self.sign[j];
        }
        m
    }

    /// Check γᵀ Ω γ = Ω for Ω = blockdiag([[0,1],[-1,0]], …).
    pub fn is_symplectic(&self) -> bool {
        let n = self.dim();
        if n % 2 != 0 {
            return false;
        }
        let omega = |i: usize, j: usize| -> i64 {
            if i / 2 == j / 2 {
                if i + 1 == j {
                    1
                } else if j + 1 == i {
                    -1
                } else {
                    0
                }
            } else {
                0
            }
        };
        // (γᵀ Ω γ)_{ab} = sign[a]·sign[b]·Ω_{perm[a],perm[b]}
        for a in 0..n {
            for b in 0..n {
                let lhs = self.sign[a] * self.sign[b] * omega(self.perm[a], self.perm[b]);
                if lhs != omega(a, b) {
                    return false;
                }
            }
        }
        true
    }
}

/// A product of U(1) blocks diag(uᵢ, ūᵢ) where uᵢ = z^{rowᵢ} in the free
/// parameters z; the rows are the coordinate exponents, with isogenous
/// copies already expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusEmbedding {
    coordinate_rows: Vec<Vec<i64>>,
    num_params: usize,
}

impl TorusEmbedding {
    pub fn new(coordinate_rows: Vec<Vec<i64>>, num_params: usize) -> Self {
        assert!(
            coordinate_rows.iter().all(|r| r.len() == num_params),
            "ragged exponent rows"
        );
        TorusEmbedding { coordinate_rows, num_params }
    }

    /// Embed a torus with the given multiplicity (copies of every block).
    pub fn from_torus(torus: &HodgeTorus, multiplicity: u32) -> Self {
        assert!(multiplicity >= 1, "multiplicity must be positive");
        let k = torus.free_rank();
        let one_copy: Vec<Vec<i64>> = (0..torus.genus())
            .map(|i| {
                torus
                    .exponents()
                    .row(i)
                    .iter()
                    .map(|x| i64::try_from(x).expect("torus exponent fits i64"))
                    .collect()
            })
            .collect();
        let mut rows = Vec::with_capacity(one_copy.len() * multiplicity as usize);
        for _ in 0..multiplicity {
            rows.extend(one_copy.iter().cloned());
        }
        TorusEmbedding { coordinate_rows: rows, num_params: k }
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn num_blocks(&self) -> usize {
        self.coordinate_rows.len()
    }

    /// Matrix dimension 2·(number of blocks).
    pub fn dimension(&self) -> usize {
        2 * self.coordinate_rows.len()
    }

    pub fn coordinate_rows(&self) -> &[Vec<i64>] {
        &self.coordinate_rows
    }

    /// Exponent vector of diagonal slot `s` (slot 2i is uᵢ, slot 2i+1 is ūᵢ).
    fn slot_exponent(&self, s: usize) -> Vec<i64> {
        let row = &self.coordinate_rows[s / 2];
        if s % 2 == 0 {
            row.clone()
        } else {
            row.iter().map(|&x| -x).collect()
        }
    }

    /// The trace of a generic element as a Laurent polynomial.
    pub fn trace_polynomial(&self) -> LaurentPolynomial {
        let mut f = LaurentPolynomial::zero(self.num_params);
        let one = BigInt::one();
        for row in &self.coordinate_rows {
            let pos: Vec<i32> = row.iter().map(|&x| x as i32).collect();
            let neg: Vec<i32> = row.iter().map(|&x| -x as i32).collect();
            f.add_term(pos, &one);
            f.add_term(neg, &one);
        }
        f
    }

    /// Exact moments M₁..M_max of the trace against Haar measure: constant
    /// terms of trace powers.
    pub fn moments(&self, max_n: usize) -> Result<Vec<BigInt>, MomentError> {
        if max_n > MAX_MOMENT {
            return Err(MomentError::MomentBoundExceeded { requested: max_n, bound: MAX_MOMENT });
        }
        Ok(moments_of_trace(&self.trace_polynomial(), max_n))
    }
}

fn moments_of_trace(f: &LaurentPolynomial, max_n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max_n);
    let mut power = LaurentPolynomial::one(f.num_vars());
    for _ in 1..=max_n {
        power = power.mul(f);
        out.push(power.constant_term());
    }
    out
}

/// A coset representative for a component of a group T ⋊ ⟨γ⟩ ⊆ USp(2g):
/// validated to be symplectic and to normalize the embedded torus, with the
/// component count measured by the first power falling back into the torus.
#[derive(Clone, Debug)]
pub struct ComponentRep {
    embedding: TorusEmbedding,
    gamma: SignedPermutation,
    component_count: usize,
}

impl ComponentRep {
    pub fn new(embedding: TorusEmbedding, gamma: SignedPermutation) -> Result<Self, MomentError> {
        if gamma.dim() != embedding.dimension() {
            return Err(MomentError::DimensionMismatch {
                left: gamma.dim(),
                right: embedding.dimension(),
            });
        }
        if !gamma.is_symplectic() {
            return Err(MomentError::NotSymplectic(
                "γᵀΩγ ≠ Ω for the block-diagonal symplectic form".into(),
            ));
        }
        Self::check_normalizes(&embedding, &gamma)?;
        let component_count = Self::measure_components(&embedding, &gamma)?;
        Ok(ComponentRep { embedding, gamma, component_count })
    }

    /// Conjugation by a signed permutation moves diagonal slot s to σ(s), so
    /// the conjugated torus has slot exponents w∘σ⁻¹.  It lands back inside
    /// the torus exactly when the coordinate rows transform by an integer
    /// matrix, and conjugation being invertible forces it to be unimodular.
    fn check_normalizes(
        embedding: &TorusEmbedding,
        gamma: &SignedPermutation,
    ) -> Result<(), MomentError> {
        let blocks = embedding.num_blocks();
        let k = embedding.num_params();
        let dim = embedding.dimension();
        let mut inv = vec![0usize; dim];
        for j in 0..dim {
            inv[gamma.image_of(j)] = j;
        }
        let mut conj_rows: Vec<Vec<i64>> = Vec::with_capacity(blocks);
        for i in 0..blocks {
            let even = embedding.slot_exponent(inv[2 * i]);
            let odd = embedding.slot_exponent(inv[2 * i + 1]);
            if even.iter().zip(&odd).any(|(a, b)| *a != -*b) {
                return Err(MomentError::NotNormalizing(format!(
                    "conjugation breaks the (uᵢ, ūᵢ) pairing at block {i}"
                )));
            }
            conj_rows.push(even);
        }
        // Solve V·A = C using parameter rows of V that are unit vectors.
        let mut param_row = vec![None; k];
        for (i, row) in embedding.coordinate_rows().iter().enumerate() {
            if let Some(c) = unit_coordinate(row) {
                if param_row[c].is_none() {
                    param_row[c] = Some(i);
                }
            }
        }
        let mut a = Vec::with_capacity(k);
        for (c, slot) in param_row.iter().enumerate() {
            match slot {
                Some(i) => a.push(conj_rows[*i].clone()),
                None => {
                    return Err(MomentError::NotNormalizing(format!(
                        "no coordinate row equals the parameter basis vector {c}"
                    )))
                }
            }
        }
        for (i, row) in embedding.coordinate_rows().iter().enumerate() {
            for t in 0..k {
                let val: i64 = (0..k).map(|j| row[j] * a[j][t]).sum();
                if val != conj_rows[i][t] {
                    return Err(MomentError::NotNormalizing(format!(
                        "coordinate row {i} does not transform integrally"
                    )));
                }
            }
        }
        let det = IntegerMatrix::from_i64_rows(&a).determinant();
        if !det.abs().is_one() {
            return Err(MomentError::NotNormalizing(format!(
                "induced parameter map has determinant {det}"
            )));
        }
        Ok(())
    }

    /// Smallest k ≥ 1 with γᵏ inside the torus: the permutation part must be
    /// trivial and the diagonal sign pattern attainable, i.e. solvable as
    /// V·x = b over F₂ (half-turn parameters realize exactly those signs).
    fn measure_components(
        embedding: &TorusEmbedding,
        gamma: &SignedPermutation,
    ) -> Result<usize, MomentError> {
        let mut power = gamma.clone();
        for k in 1..=COMPONENT_SEARCH_CAP {
            if let Some(signs) = power.diagonal_signs() {
                if let Some(b) = block_sign_bits(signs) {
                    if solvable_mod2(embedding.coordinate_rows(), &b) {
                        return Ok(k);
                    }
                }
            }
            power = gamma.compose(&power);
        }
        Err(MomentError::ComponentGroupNotClosed { cap: COMPONENT_SEARCH_CAP })
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn embedding(&self) -> &TorusEmbedding {
        &self.embedding
    }

    pub fn gamma(&self) -> &SignedPermutation {
        &self.gamma
    }

    /// Trace of γᵏ·t over the coset: only diagonal slots fixed by the
    /// permutation of γᵏ contribute.
    pub fn coset_trace(&self, k: usize) -> LaurentPolynomial {
        let power = self.gamma.pow(k);
        let mut f = LaurentPolynomial::zero(self.embedding.num_params());
        for s in 0..self.embedding.dimension() {
            if power.image_of(s) == s {
                let exps: Vec<i32> =
                    self.embedding.slot_exponent(s).iter().map(|&x| x as i32).collect();
                f.add_term(exps, &BigInt::from(power.sign_of(s)));
            }
        }
        f
    }

    /// Exact moments M₁..M_max over one coset γᵏT.
    pub fn coset_moments(&self, k: usize, max_n: usize) -> Result<Vec<BigInt>, MomentError> {
        if max_n > MAX_MOMENT {
            return Err(MomentError::MomentBoundExceeded { requested: max_n, bound: MAX_MOMENT });
        }
        Ok(moments_of_trace(&self.coset_trace(k), max_n))
    }

    /// Exact moments M₁..M_max over the full group: the average of the coset
    /// moments across all components.
    pub fn group_moments(&self, max_n: usize) -> Result<Vec<BigRational>, MomentError> {
        if max_n > MAX_MOMENT {
            return Err(MomentError::MomentBoundExceeded { requested: max_n, bound: MAX_MOMENT });
        }
        let n_comp = self.component_count;
        let mut sums = vec![BigInt::zero(); max_n];
        for k in 0..n_comp {
            for (acc, m) in sums.iter_mut().zip(moments_of_trace(&self.coset_trace(k), max_n)) {
                *acc += m;
            }
        }
        Ok(sums
            .into_iter()
            .map(|s| BigRational::new(s, BigInt::from(n_comp)))
            .collect())
    }
}

fn unit_coordinate(row: &[i64]) -> Option<usize> {
    let mut unit = None;
    for (c, &x) in row.iter().enumerate() {
        match x {
            0 => {}
            1 if unit.is_none() => unit = Some(c),
            _ => return None,
        }
    }
    unit
}

/// Per-block sign bits (1 for −1), or None if some block has mismatched
/// signs on its two slots.
fn block_sign_bits(signs: &[i64]) -> Option<Vec<u8>> {
    let mut bits = Vec::with_capacity(signs.len() / 2);
    for pair in signs.chunks(2) {
        if pair[0] != pair[1] {
            return None;
        }
        bits.push(if pair[0] == 1 { 0 } else { 1 });
    }
    Some(bits)
}

/// Solve rows·x = b over F₂ by Gaussian elimination (consistency only).
fn solvable_mod2(rows: &[Vec<i64>], b: &[u8]) -> bool {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<u8>> = rows
        .iter()
        .zip(b)
        .map(|(r, &bit)| {
            let mut row: Vec<u8> = r.iter().map(|&x| (x & 1) as u8).collect();
            row.push(bit & 1);
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if let Some(r) = (pivot_row..nrows).find(|&r| aug[r][col] == 1) {
            aug.swap(pivot_row, r);
            for other in 0..nrows {
                if other != pivot_row && aug[other][col] == 1 {
                    let (pr, or) = if other < pivot_row {
                        let (lo, hi) = aug.split_at_mut(pivot_row);
                        (&hi[0], &mut lo[other])
                    } else {
                        let (lo, hi) = aug.split_at_mut(other);
                        (&lo[pivot_row], &mut hi[0])
                    };
                    for (o, p) in or.iter_mut().zip(pr.iter()) {
                        *o ^= *p;
                    }
                }
            }
            pivot_row += 1;
        }
    }
    aug.iter().all(|row| row[..ncols].iter().any(|&x| x == 1) || row[ncols] == 0)
}

/// The order-6 outer representative for the m = 9 embedding, written as
/// 2×2 blocks over (I, J): rows of blocks (0 I 0 0 / 0 0 0 I / 0 0 J 0 /
/// J 0 0 0) with J = [[0,1],[-1,0]].
pub fn gamma_j9() -> SignedPermutation {
    SignedPermutation::new(
        vec![7, 6, 0, 1, 5, 4, 2, 3],
        vec![-1, 1, 1, 1, -1, 1, 1, 1],
    )
    .expect("fixed signed permutation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::hodge_torus;

    fn bigints(values: &[i64]) -> Vec<BigInt> {
        values.iter().map(|&v| BigInt::from(v)).collect()
    }

    fn even_entries(moments: &[BigInt]) -> Vec<BigInt> {
        moments.iter().skip(1).step_by(2).cloned().collect()
    }

    #[test]
    fn identity_moments_m9() {
        let emb = TorusEmbedding::from_torus(&hodge_torus(9).unwrap(), 1);
        let moments = emb.moments(12).unwrap();
        assert_eq!(
            even_entries(&moments),
            bigints(&[8, 216, 8000, 343000, 16003008, 788889024])
        );
        for odd in moments.iter().step_by(2) {
            assert!(odd.is_zero());
        }
    }

    #[test]
    fn identity_moments_m15() {
        let emb = TorusEmbedding::from_torus(&hodge_torus(15).unwrap(), 1);
        let moments = emb.moments(6).unwrap();
        assert_eq!(moments, bigints(&[0, 14, 0, 834, 0, 78260]));
    }

    #[test]
    fn doubled_embedding_scales_moments_by_powers_of_two() {
        let single = TorusEmbedding::from_torus(&hodge_torus(9).unwrap(), 1);
        let double = TorusEmbedding::from_torus(&hodge_torus(9).unwrap(), 2);
        let m1 = single.moments(12).unwrap();
        let m2 = double.moments(12).unwrap();
        for n in 1..=12 {
            assert_eq!(m2[n - 1], m1[n - 1].clone() << n, "n={n}");
        }
        assert_eq!(
            even_entries(&m2),
            bigints(&[32, 3456, 512000, 87808000, 16387080192, 3231289442304])
        );
    }

    #[test]
    fn moment_bound_is_enforced() {
        let emb = TorusEmbedding::from_torus(&hodge_torus(9).unwrap(), 1);
        assert!(matches!(
            emb.moments(13),
            Err(MomentError::MomentBoundExceeded { requested: 13, bound: 12 })
        ));
    }

    #[test]
    fn gamma_j9_is_order_six_in_the_component_group() {
        let emb = TorusEmbedding::from_torus(&hodge_torus(9).unwrap(), 1);
        let rep = ComponentRep::new(emb, gamma_j9()).unwrap();
        assert_eq!(rep.component_count(), 6);
        // γ⁶ = −Id as a matrix, which the torus attains.
        let minus_id = gamma_j9().pow(6);
        assert_eq!(minus_id.diagonal_signs(), Some(vec![-1i64; 8].as_slice()));
    }

    #[test]
    fn gamma_j9_coset_traces() {
        let emb = TorusEmbedding::from_torus(&hodge_torus(9).unwrap(), 1);
        let rep = ComponentRep::new(emb, gamma_j9()).unwrap();
        for k in [1usize, 3, 5] {
            assert_eq!(rep.coset_trace(k).num_terms(), 0, "k={k}");
        }
        // γ² fixes the third block and negates it: trace −(u₃ + ū₃).
        let f2 = rep.coset_trace(2);
        assert_eq!(f2.coefficient(&[0, 0, 1]), BigInt::from(-1));
        assert_eq!(f2.coefficient(&[0, 0, -1]), BigInt::from(-1));
        assert_eq!(f2.num_terms(), 2);
        let f4 = rep.coset_trace(4);
        assert_eq!(f4.coefficient(&[0, 0, 1]), BigInt::from(1));
        assert_eq!(f4.num_terms(), 2);
    }

    #[test]
    fn full_group_moments_m9() {
        let emb = TorusEmbedding::from_torus(&hodge_torus(9).unwrap(), 1);
        let rep = ComponentRep::new(emb, gamma_j9()).unwrap();
        let moments = rep.group_moments(12).unwrap();
        let expected = [2i64, 38, 1340, 57190, 2667252, 131481812];
        for (i, want) in expected.iter().enumerate() {
            let got = &moments[2 * i + 1];
            assert!(got.is_integer(), "M_{} not integral", 2 * (i + 1));
            assert_eq!(got.to_integer(), BigInt::from(*want), "M_{}", 2 * (i + 1));
        }
        for odd in moments.iter().step_by(2) {
            assert!(odd.is_zero());
        }
    }

    #[test]
    fn trace_squared_moment_counts_blocks_when_rows_are_free_of_collisions() {
        for m in [3u64, 5, 7, 9, 15, 21, 27] {
            let emb = TorusEmbedding::from_torus(&hodge_torus(m).unwrap(), 1);
            let m2 = &emb.moments(2).unwrap()[1];
            assert_eq!(*m2, BigInt::from(2 * emb.num_blocks() as i64), "m={m}");
        }
    }

    #[test]
    fn odd_moments_vanish_on_worked_moduli() {
        for m in [9u64, 15, 21, 27] {
            let emb = TorusEmbedding::from_torus(&hodge_torus(m).unwrap(), 1);
            let cap = if emb.num_params() > 6 { 6 } else { 8 };
            let moments = emb.moments(cap).unwrap();
            for (i, value) in moments.iter().enumerate() {
                if i % 2 == 0 {
                    assert!(value.is_zero(), "m={m} M_{}", i + 1);
                }
            }
        }
    }

    #[test]
    fn parameter_relabeling_preserves_moments() {
        let torus = hodge_torus(9).unwrap();
        let emb = TorusEmbedding::from_torus(&torus, 1);
        let swapped: Vec<Vec<i64>> = emb
            .coordinate_rows()
            .iter()
            .map(|r| vec![r[2], r[0], r[1]])
            .collect();
        let relabeled = TorusEmbedding::new(swapped, 3);
        assert_eq!(emb.moments(10).unwrap(), relabeled.moments(10).unwrap());
    }

    #[test]
    fn block_order_preserves_moments() {
        let emb = TorusEmbedding::from_torus(&hodge_torus(15).unwrap(), 1);
        let mut rows = emb.coordinate_rows().to_vec();
        rows.reverse();
        let reordered = TorusEmbedding::new(rows, emb.num_params());
        assert_eq!(emb.moments(6).unwrap(), reordered.moments(6).unwrap());
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let emb = TorusEmbedding::from_torus(&hodge_torus(15).unwrap(), 1);
        assert!(matches!(
            ComponentRep::new(emb, gamma_j9()),
            Err(MomentError::DimensionMismatch { left: 8, right: 14 })
        ));
    }

    #[test]
    fn rejects_non_symplectic_matrices() {
        // Swapping the two slots of a block with equal signs breaks Ω.
        let mut perm: Vec<usize> = (0..8).collect();
        perm.swap(0, 1);
        let gamma = SignedPermutation::new(perm, vec![1; 8]).unwrap();
        let emb = TorusEmbedding::from_torus(&hodge_torus(9).unwrap(), 1);
        assert!(matches!(
            ComponentRep::new(emb, gamma),
            Err(MomentError::NotSymplectic(_))
        ));
    }

    #[test]
    fn rejects_non_normalizing_matrices() {
        // Swapping the U₁ and U₂ blocks of the m = 15 embedding is
        // symplectic but does not respect the dependent-coordinate rows.
        let mut perm: Vec<usize> = (0..14).collect();
        perm.swap(0, 2);
        perm.swap(1, 3);
        let gamma = SignedPermutation::new(perm, vec![1; 14]).unwrap();
        assert!(gamma.is_symplectic());
        let emb = TorusEmbedding::from_torus(&hodge_torus(15).unwrap(), 1);
        assert!(matches!(
            ComponentRep::new(emb, gamma),
            Err(MomentError::NotNormalizing(_))
        ));
    }

    #[test]
    fn conjugation_flip_normalizes_every_embedding() {
        // blockdiag(J, …, J) sends every uᵢ to ūᵢ, an order-2 symmetry of
        // any of these tori: the induced parameter map is −Id.
        for m in [9u64, 15, 27] {
            let emb = TorusEmbedding::from_torus(&hodge_torus(m).unwrap(), 1);
            let blocks = emb.num_blocks();
            let perm: Vec<usize> =
                (0..2 * blocks).map(|s| if s % 2 == 0 { s + 1 } else { s - 1 }).collect();
            let sign: Vec<i64> = (0..2 * blocks).map(|s| if s % 2 == 0 { -1 } else { 1 }).collect();
            let gamma = SignedPermutation::new(perm, sign).unwrap();
            let rep = ComponentRep::new(emb, gamma).unwrap();
            assert_eq!(rep.component_count(), 2, "m={m}");
        }
    }

    #[test]
    fn signed_permutation_validation() {
        assert!(SignedPermutation::new(vec![0, 0], vec![1, 1]).is_err());
        assert!(SignedPermutation::new(vec![0, 1], vec![2, 1]).is_err());
        assert!(SignedPermutation::new(vec![1, 0], vec![1, -1]).is_ok());
    }

    #[test]
    fn composition_matches_matrix_product() {
        let a = gamma_j9();
        let b = gamma_j9().pow(2);
        let ab = a.compose(&b);
        let ma = a.to_matrix();
        let mb = b.to_matrix();
        let mut product = vec![vec![0i64; 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                product[i][j] = (0..8).map(|t| ma[i][t] * mb[t][j]).sum();
            }
        }
        assert_eq!(ab.to_matrix(), product);
        assert_eq!(ab, a.pow(3));
    }
}
