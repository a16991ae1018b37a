//! Sublattices of Z^n with canonical Hermite bases.
//!
//! A `Lattice` always stores the Hermite normal form of its basis, so
//! structural equality coincides with equality of lattices.

use crate::error::LatticeError;
use crate::matrix::IntegerMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// The result of comparing a lattice against an ambient lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    /// Finite index (1 means equality of lattices).
    Finite(BigInt),
    /// The sublattice has strictly smaller rank.
    Infinite,
}

/// A sublattice of Z^ambient_dim, stored via its canonical Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ambient_dim: usize,
    /// Hermite-form basis rows; `rank = basis.rows()`.
    basis: IntegerMatrix,
}

impl Lattice {
    /// Lattice spanned by the rows of `gens` inside Z^cols.
    pub fn from_generators(gens: &IntegerMatrix) -> Self {
        let (h, _) = gens.hermite_normal_form();
        Lattice { ambient_dim: gens.cols(), basis: h.drop_zero_rows() }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Lattice { ambient_dim, basis: IntegerMatrix::zero(0, ambient_dim) }
    }

    pub fn standard(ambient_dim: usize) -> Self {
        Lattice { ambient_dim, basis: IntegerMatrix::identity(ambient_dim) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        *self == Lattice::standard(self.ambient_dim)
    }

    /// Solve for integer coordinates of `v` in the Hermite basis staircase.
    pub fn coordinates_of(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_dim, "ambient dimension mismatch");
        let mut residue = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for r in 0..self.basis.rows() {
            let pivot_col = (0..self.ambient_dim).find(|&c| !self.basis[(r, c)].is_zero())?;
            let p = &self.basis[(r, pivot_col)];
            let (q, rem) = num_integer::div_rem(residue[pivot_col].clone(), p.clone());
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for c in pivot_col..self.ambient_dim {
                    let d = &q * &self.basis[(r, c)];
                    residue[c] -= d;
                }
            }
            coords.push(q);
        }
        if residue.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates_of(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.ambient_dim == self.ambient_dim
            && (0..other.basis.rows()).all(|r| self.contains(other.basis.row(r)))
    }

    /// Smallest lattice containing both summands.
    pub fn sum(&self, other: &Lattice) -> Result<Lattice, LatticeError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LatticeError::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for r in 0..self.basis.rows() {
            rows.push(self.basis.row_vec(r));
        }
        for r in 0..other.basis.rows() {
            rows.push(other.basis.row_vec(r));
        }
        if rows.is_empty() {
            return Ok(Lattice::zero(self.ambient_dim));
        }
        Ok(Lattice::from_generators(&IntegerMatrix::from_rows(rows)))
    }

    /// Index of `self` inside `ambient`.
    ///
    /// Errors unless `self` is contained in `ambient`; returns
    /// `LatticeIndex::Infinite` when the ranks differ, otherwise the finite
    /// index (product of the elementary divisors of the coordinate matrix).
    pub fn index_in(&self, ambient: &Lattice) -> Result<LatticeIndex, LatticeError> {
        if self.ambient_dim != ambient.ambient_dim {
            return Err(LatticeError::AmbientMismatch {
                left: self.ambient_dim,
                right: ambient.ambient_dim,
            });
        }
        // Express our basis in the ambient basis.
        let mut coord_rows = Vec::with_capacity(self.rank());
        for r in 0..self.basis.rows() {
            match ambient.coordinates_of(self.basis.row(r)) {
                Some(c) => coord_rows.push(c),
                None => return Err(LatticeError::NotSublattice),
            }
        }
        if self.rank() < ambient.rank() {
            return Ok(LatticeIndex::Infinite);
        }
        let coords = IntegerMatrix::from_rows(coord_rows);
        // Square matrix of full rank: |det| is the index.
        Ok(LatticeIndex::Finite(coords.determinant().abs()))
    }

    /// The saturation: `(self ⊗ Q) ∩ Z^n`, the smallest saturated lattice
    /// containing `self` (same rank, finite index over `self`).
    pub fn saturate(&self) -> Lattice {
        if self.rank() == 0 {
            return self.clone();
        }
        // Orthogonal-complement trick: sat(L) = ker(basis of ker(L^T acting)).
        let complement = self.basis.right_kernel();
        if complement.rows() == 0 {
            return Lattice::standard(self.ambient_dim);
        }
        let sat_basis = complement.right_kernel();
        Lattice { ambient_dim: self.ambient_dim, basis: sat_basis }
    }

    pub fn is_saturated(&self) -> bool {
        *self == self.saturate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(rows: &[Vec<i64>]) -> Lattice {
        Lattice::from_generators(&IntegerMatrix::from_i64_rows(rows))
    }

    #[test]
    fn membership_in_staircase_basis() {
        let l = lat(&[vec![2, 0, 1], vec![0, 3, 1]]);
        assert!(l.contains(&[BigInt::from(2), BigInt::from(3), BigInt::from(2)]));
        assert!(!l.contains(&[BigInt::from(1), BigInt::from(0), BigInt::from(0)]));
    }

    #[test]
    fn sum_of_index_two_sublattices() {
        // 2Z^2 + span{(1,1)} has index 2 in Z^2.
        let a = lat(&[vec![2, 0], vec![0, 2]]);
        let b = lat(&[vec![1, 1]]);
        let s = a.sum(&b).unwrap();
        match s.index_in(&Lattice::standard(2)).unwrap() {
            LatticeIndex::Finite(k) => assert_eq!(k, BigInt::from(2)),
            LatticeIndex::Infinite => panic!("expected finite index"),
        }
    }

    #[test]
    fn index_is_product_of_elementary_divisors() {
        let l = lat(&[vec![2, 0], vec![0, 3]]);
        match l.index_in(&Lattice::standard(2)).unwrap() {
            LatticeIndex::Finite(k) => assert_eq!(k, BigInt::from(6)),
            _ => panic!(),
        }
    }

    #[test]
    fn rank_deficient_sublattice_has_infinite_index() {
        let l = lat(&[vec![1, 1]]);
        assert_eq!(l.index_in(&Lattice::standard(2)).unwrap(), LatticeIndex::Infinite);
    }

    #[test]
    fn not_a_sublattice_is_an_error() {
        let l = lat(&[vec![1, 0]]);
        let ambient = lat(&[vec![2, 0], vec![0, 1]]);
        assert!(matches!(l.index_in(&ambient), Err(LatticeError::NotSublattice)));
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let l = lat(&[vec![1, 0]]);
        let ambient = lat(&[vec![1, 0, 0]]);
        assert!(matches!(l.index_in(&ambient), Err(LatticeError::AmbientMismatch { .. })));
    }

    #[test]
    fn saturation_divides_out_finite_index() {
        // span{(2,2)} saturates to span{(1,1)}.
        let l = lat(&[vec![2, 2]]);
        let s = l.saturate();
        assert_eq!(s, lat(&[vec![1, 1]]));
        assert!(s.is_saturated());
        assert!(!l.is_saturated());
    }

    #[test]
    fn equality_is_independent_of_generating_set() {
        let a = lat(&[vec![1, 2], vec![0, 5]]);
        let b = lat(&[vec![1, 7], vec![2, 4], vec![1, 2]]);
        assert_eq!(a, b);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn gens() -> impl Strategy<Value = Vec<Vec<i64>>> {
            (1usize..4, 2usize..5)
                .prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-6i64..7, c), r))
        }

        proptest! {
            #[test]
            fn saturation_contains_and_same_rank(rows in gens()) {
                let l = Lattice::from_generators(&IntegerMatrix::from_i64_rows(&rows));
                let s = l.saturate();
                prop_assert!(s.contains_lattice(&l));
                prop_assert_eq!(s.rank(), l.rank());
                prop_assert!(s.is_saturated());
                if l.rank() > 0 {
                    // index of l in its saturation is finite
                    prop_assert!(matches!(l.index_in(&s).unwrap(), LatticeIndex::Finite(_)));
                }
            }

            #[test]
            fn sum_contains_both_summands(a in gens(), b in gens()) {
                let c = a[0].len().min(b[0].len());
                let ta: Vec<Vec<i64>> = a.iter().map(|r| r[..c].to_vec()).collect();
                let tb: Vec<Vec<i64>> = b.iter().map(|r| r[..c].to_vec()).collect();
                let la = Lattice::from_generators(&IntegerMatrix::from_i64_rows(&ta));
                let lb = Lattice::from_generators(&IntegerMatrix::from_i64_rows(&tb));
                let s = la.sum(&lb).unwrap();
                prop_assert!(s.contains_lattice(&la));
                prop_assert!(s.contains_lattice(&lb));
            }
        }
    }
}
