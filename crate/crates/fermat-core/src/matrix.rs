//! Dense integer matrices with exact normal forms.
//!
//! Everything here is arbitrary-precision (`BigInt`); no floating point and no
//! unverified modular shortcuts.  The two normal forms are row-style Hermite
//! (upper staircase, positive pivots, entries above a pivot reduced into
//! `[0, pivot)`) and Smith (diagonal with a divisibility chain), both with
//! unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-major matrix over the integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntegerMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl IntegerMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        IntegerMatrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<BigInt> {
        self.row(r).to_vec()
    }

    pub fn is_zero_row(&self, r: usize) -> bool {
        self.row(r).iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(r, c)] += prod;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = std::mem::take(&mut self[(r, c)]);
            self[(r, c)] = -v;
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_scaled_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let delta = q * &self[(src, c)];
            self[(dst, c)] -= delta;
        }
    }

    /// Row-style Hermite normal form.
    ///
    /// Returns `(H, U)` with `H = U * self`, `U` unimodular.  `H` has the
    /// nonzero rows first, each pivot positive, pivot columns strictly
    /// increasing, and every entry above a pivot reduced into `[0, pivot)`.
    /// `H` is canonical: any two matrices with the same row span (and row
    /// count) produce the same `H`.
    pub fn hermite_normal_form(&self) -> (IntegerMatrix, IntegerMatrix) {
        let mut h = self.clone();
        let mut u = IntegerMatrix::identity(self.rows);
        let mut pivot_row = 0usize;
        for col in 0..self.cols {
            // Gcd-eliminate entries in `col` among rows >= pivot_row.
            loop {
                let mut best: Option<usize> = None;
                for r in pivot_row..h.rows {
                    if !h[(r, col)].is_zero() {
                        best = match best {
                            None => Some(r),
                            Some(b) if h[(r, col)].abs() < h[(b, col)].abs() => Some(r),
                            other => other,
                        };
                    }
                }
                let Some(b) = best else { break };
                h.swap_rows(pivot_row, b);
                u.swap_rows(pivot_row, b);
                let mut others = false;
                for r in pivot_row + 1..h.rows {
                    if h[(r, col)].is_zero() {
                        continue;
                    }
                    // Round-to-nearest quotient keeps intermediate growth down.
                    let q = rounded_div(&h[(r, col)], &h[(pivot_row, col)]);
                    h.sub_scaled_row(r, pivot_row, &q);
                    u.sub_scaled_row(r, pivot_row, &q);
                    if !h[(r, col)].is_zero() {
                        others = true;
                    }
                }
                if !others {
                    break;
                }
            }
            if h[(pivot_row, col)].is_zero() {
                continue;
            }
            if h[(pivot_row, col)].is_negative() {
                h.negate_row(pivot_row);
                u.negate_row(pivot_row);
            }
            // Reduce the entries above the pivot into [0, pivot).
            for r in 0..pivot_row {
                let q = h[(r, col)].div_floor(&h[(pivot_row, col)]);
                h.sub_scaled_row(r, pivot_row, &q);
                u.sub_scaled_row(r, pivot_row, &q);
            }
            pivot_row += 1;
            if pivot_row == h.rows {
                break;
            }
        }
        (h, u)
    }

    /// Rank of the matrix (number of nonzero rows of its Hermite form).
    pub fn rank(&self) -> usize {
        let (h, _) = self.hermite_normal_form();
        (0..h.rows).filter(|&r| !h.is_zero_row(r)).count()
    }

    /// Basis of the right kernel `{v : M v = 0}` as rows, in Hermite form.
    ///
    /// The kernel of an integer matrix is automatically saturated: the basis
    /// rows extend to a basis of the full ambient lattice.
    pub fn right_kernel(&self) -> IntegerMatrix {
        let (h, u) = self.transpose().hermite_normal_form();
        let mut rows = Vec::new();
        for r in 0..h.rows() {
            if h.is_zero_row(r) {
                rows.push(u.row_vec(r));
            }
        }
        if rows.is_empty() {
            return IntegerMatrix::zero(0, self.cols);
        }
        let (kh, _) = IntegerMatrix::from_rows(rows).hermite_normal_form();
        kh.drop_zero_rows()
    }

    /// Keep only the nonzero rows (they are already on top after HNF).
    pub fn drop_zero_rows(&self) -> IntegerMatrix {
        let rows: Vec<Vec<BigInt>> =
            (0..self.rows).filter(|&r| !self.is_zero_row(r)).map(|r| self.row_vec(r)).collect();
        if rows.is_empty() {
            IntegerMatrix::zero(0, self.cols)
        } else {
            IntegerMatrix::from_rows(rows)
        }
    }

    /// Restrict to a subset of columns (in the given order).
    pub fn select_columns(&self, cols: &[usize]) -> IntegerMatrix {
        let mut out = IntegerMatrix::zero(self.rows, cols.len());
        for r in 0..self.rows {
            for (i, &c) in cols.iter().enumerate() {
                out[(r, i)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Smith normal form: returns `(D, S, T)` with `D = S * self * T`,
    /// `S`, `T` unimodular, `D` diagonal with `d_1 | d_2 | ... | d_r > 0`.
    pub fn smith_normal_form(&self) -> (IntegerMatrix, IntegerMatrix, IntegerMatrix) {
        let mut d = self.clone();
        let mut s = IntegerMatrix::identity(self.rows);
        let mut t = IntegerMatrix::identity(self.cols);
        let n = self.rows.min(self.cols);
        let mut k = 0usize;
        while k < n {
            // Find a nonzero pivot in the trailing block.
            let mut found = None;
            'search: for r in k..d.rows {
                for c in k..d.cols {
                    if !d[(r, c)].is_zero() {
                        found = Some((r, c));
                        break 'search;
                    }
                }
            }
            let Some((pr, pc)) = found else { break };
            d.swap_rows(k, pr);
            s.swap_rows(k, pr);
            swap_cols(&mut d, k, pc);
            swap_cols(&mut t, k, pc);
            // Alternate row and column elimination until the pivot divides
            // everything in its row and column and the rest is zero.
            loop {
                let mut clean = true;
                for r in k + 1..d.rows {
                    if d[(r, k)].is_zero() {
                        continue;
                    }
                    let q = rounded_div(&d[(r, k)], &d[(k, k)]);
                    d.sub_scaled_row(r, k, &q);
                    s.sub_scaled_row(r, k, &q);
                    if !d[(r, k)].is_zero() {
                        d.swap_rows(k, r);
                        s.swap_rows(k, r);
                        clean = false;
                    }
                }
                for c in k + 1..d.cols {
                    if d[(k, c)].is_zero() {
                        continue;
                    }
                    let q = rounded_div(&d[(k, c)], &d[(k, k)]);
                    sub_scaled_col(&mut d, c, k, &q);
                    sub_scaled_col(&mut t, c, k, &q);
                    if !d[(k, c)].is_zero() {
                        swap_cols(&mut d, k, c);
                        swap_cols(&mut t, k, c);
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if d[(k, k)].is_negative() {
                d.negate_row(k);
                s.negate_row(k);
            }
            k += 1;
        }
        // Enforce the divisibility chain d_i | d_{i+1}.
        let r = (0..n).take_while(|&i| !d[(i, i)].is_zero()).count();
        let mut again = true;
        while again {
            again = false;
            for i in 0..r.saturating_sub(1) {
                let (a, b) = (d[(i, i)].clone(), d[(i + 1, i + 1)].clone());
                if (&b % &a).is_zero() {
                    continue;
                }
                again = true;
                // Col i += col i+1 puts b into position (i+1, i); one round of
                // elimination replaces the pivot with gcd(a, b).
                add_col(&mut d, i, i + 1);
                add_col(&mut t, i, i + 1);
                let g = a.gcd(&b);
                let (x, y) = half_extended_gcd(&a, &b);
                // row i <- x*row i + y*row i+1 ; row i+1 adjusted to keep S unimodular.
                combine_rows(&mut d, i, i + 1, &x, &y, &(-&b / &g), &(&a / &g));
                combine_rows(&mut s, i, i + 1, &x, &y, &(-&b / &g), &(&a / &g));
                // Clear the off-diagonal debris.
                let q = rounded_div(&d[(i + 1, i)].clone(), &d[(i, i)].clone());
                d.sub_scaled_row(i + 1, i, &q);
                s.sub_scaled_row(i + 1, i, &q);
                let q = rounded_div(&d[(i, i + 1)].clone(), &d[(i, i)].clone());
                sub_scaled_col(&mut d, i + 1, i, &q);
                sub_scaled_col(&mut t, i + 1, i, &q);
                // Any leftover entry means the 2x2 block needs full re-reduction.
                if !d[(i + 1, i)].is_zero() || !d[(i, i + 1)].is_zero() {
                    let (dd, ss, tt) = d.smith_normal_form();
                    let s2 = ss.mul(&s);
                    let t2 = t.mul(&tt);
                    return (dd, s2, t2);
                }
                if d[(i + 1, i + 1)].is_negative() {
                    d.negate_row(i + 1);
                    s.negate_row(i + 1);
                }
            }
        }
        (d, s, t)
    }

    /// Determinant via fraction-free (Bareiss) elimination; square matrices.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&r| !a[(r, k)].is_zero());
                match swap {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = &num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        let det = a[(n - 1, n - 1)].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// Exact elementary divisors (diagonal of the Smith form), zeros dropped.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        let (d, _, _) = self.smith_normal_form();
        let n = d.rows.min(d.cols);
        (0..n).map(|i| d[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }
}

fn swap_cols(m: &mut IntegerMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..m.rows {
        m.data.swap(r * m.cols + a, r * m.cols + b);
    }
}

/// col[dst] -= q * col[src]
fn sub_scaled_col(m: &mut IntegerMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for r in 0..m.rows {
        let delta = q * &m[(r, src)];
        m[(r, dst)] -= delta;
    }
}

fn add_col(m: &mut IntegerMatrix, dst: usize, src: usize) {
    for r in 0..m.rows {
        let v = m[(r, src)].clone();
        m[(r, dst)] += v;
    }
}

/// Simultaneously set row a <- x*row a + y*row b and row b <- u*row a + v*row b
/// (with the original row a), where the 2x2 matrix [[x, y], [u, v]] is unimodular.
fn combine_rows(m: &mut IntegerMatrix, a: usize, b: usize, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) {
    for c in 0..m.cols {
        let va = m[(a, c)].clone();
        let vb = m[(b, c)].clone();
        m[(a, c)] = x * &va + y * &vb;
        m[(b, c)] = u * &va + v * &vb;
    }
}

/// Bezout coefficients (x, y) with x*a + y*b = gcd(a, b).
fn half_extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.x, e.y)
}

/// Quotient rounded to the nearest integer (ties toward zero).
fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) ^ (b.is_negative()) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_i64_rows(rows)
    }

    /// Oracle: rank over Q by fraction-free elimination, fully independent of
    /// the Hermite code path.
    fn rational_rank(a: &IntegerMatrix) -> usize {
        let mut w: Vec<Vec<BigInt>> = (0..a.rows()).map(|r| a.row_vec(r)).collect();
        let mut rank = 0usize;
        let mut col = 0usize;
        while rank < w.len() && col < a.cols() {
            if let Some(p) = (rank..w.len()).find(|&r| !w[r][col].is_zero()) {
                w.swap(rank, p);
                for r in rank + 1..w.len() {
                    if w[r][col].is_zero() {
                        continue;
                    }
                    let (pv, cv) = (w[rank][col].clone(), w[r][col].clone());
                    for c in col..a.cols() {
                        let t = &w[r][c] * &pv - &w[rank][c] * &cv;
                        w[r][c] = t;
                    }
                }
                rank += 1;
            }
            col += 1;
        }
        rank
    }

    #[test]
    fn hermite_of_small_matrix() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let (h, u) = a.hermite_normal_form();
        assert_eq!(u.mul(&a), h);
        // Pivots positive, staircase shape, entries above pivots reduced.
        let mut last_pivot_col = None;
        for r in 0..h.rows() {
            if h.is_zero_row(r) {
                continue;
            }
            let pc = (0..h.cols()).find(|&c| !h[(r, c)].is_zero()).unwrap();
            assert!(h[(r, pc)].is_positive());
            if let Some(lp) = last_pivot_col {
                assert!(pc > lp);
            }
            for rr in 0..r {
                assert!(h[(rr, pc)] >= BigInt::zero() && h[(rr, pc)] < h[(r, pc)]);
            }
            last_pivot_col = Some(pc);
        }
    }

    #[test]
    fn hermite_is_canonical_for_row_span() {
        // Same row lattice, different generating sets.
        let a = m(&[vec![1, 2, 3], vec![4, 5, 6]]);
        let b = m(&[vec![5, 7, 9], vec![4, 5, 6]]);
        let (ha, _) = a.hermite_normal_form();
        let (hb, _) = b.hermite_normal_form();
        assert_eq!(ha, hb);
    }

    #[test]
    fn smith_normal_form_fixture() {
        // SNF of [[2, 4], [6, 8]] is diag(2, 4).
        let a = m(&[vec![2, 4], vec![6, 8]]);
        let (d, s, t) = a.smith_normal_form();
        assert_eq!(s.mul(&a).mul(&t), d);
        assert_eq!(d[(0, 0)], BigInt::from(2));
        assert_eq!(d[(1, 1)], BigInt::from(4));
        assert_eq!(s.determinant().abs(), BigInt::one());
        assert_eq!(t.determinant().abs(), BigInt::one());
    }

    #[test]
    fn smith_divisibility_chain() {
        let a = m(&[vec![6, 10, 0], vec![10, 6, 4], vec![0, 4, 2]]);
        let (d, s, t) = a.smith_normal_form();
        assert_eq!(s.mul(&a).mul(&t), d);
        let mut divisors = Vec::new();
        for i in 0..3 {
            if !d[(i, i)].is_zero() {
                divisors.push(d[(i, i)].clone());
            }
        }
        for w in divisors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "{} does not divide {}", w[0], w[1]);
        }
    }

    #[test]
    fn kernel_vectors_annihilate_and_are_saturated() {
        let a = m(&[vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 0]]);
        let k = a.right_kernel();
        assert_eq!(k.rows(), 2); // rank 2, ambient 4
        for r in 0..k.rows() {
            let prod = a.mul_vec(k.row(r));
            assert!(prod.iter().all(|x| x.is_zero()));
        }
        // Saturation: all elementary divisors of the kernel basis are 1.
        for d in k.elementary_divisors() {
            assert_eq!(d, BigInt::one());
        }
    }

    #[test]
    fn rank_matches_rational_oracle() {
        let cases = vec![
            m(&[vec![1, 2], vec![2, 4]]),
            m(&[vec![0, 0], vec![0, 0]]),
            m(&[vec![3, 1, 2], vec![1, 1, 1], vec![4, 2, 3]]),
            m(&[vec![2, 0, 0], vec![0, 3, 0]]),
        ];
        for a in cases {
            assert_eq!(a.rank(), rational_rank(&a));
        }
    }

    #[test]
    fn determinant_of_unimodular_transforms() {
        let a = m(&[vec![7, 3, 1], vec![2, 9, 4], vec![5, 5, 5]]);
        let (_, u) = a.hermite_normal_form();
        assert_eq!(u.determinant().abs(), BigInt::one());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix() -> impl Strategy<Value = IntegerMatrix> {
            (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
                proptest::collection::vec(proptest::collection::vec(-8i64..9, c), r)
                    .prop_map(|rows| IntegerMatrix::from_i64_rows(&rows))
            })
        }

        proptest! {
            #[test]
            fn hermite_preserves_row_span(a in small_matrix()) {
                let (h, u) = a.hermite_normal_form();
                prop_assert_eq!(u.mul(&a), h.clone());
                prop_assert_eq!(u.determinant().abs(), BigInt::one());
                // Same row span => same Hermite form, even after stacking the
                // matrix with itself (a different generating set).
                let mut doubled: Vec<Vec<BigInt>> = (0..a.rows()).map(|r| a.row_vec(r)).collect();
                doubled.extend((0..a.rows()).map(|r| a.row_vec(r)));
                let (h2, _) = IntegerMatrix::from_rows(doubled).hermite_normal_form();
                prop_assert_eq!(h.drop_zero_rows(), h2.drop_zero_rows());
            }

            #[test]
            fn smith_transforms_are_unimodular(a in small_matrix()) {
                let (d, s, t) = a.smith_normal_form();
                prop_assert_eq!(s.mul(&a).mul(&t), d.clone());
                prop_assert_eq!(s.determinant().abs(), BigInt::one());
                prop_assert_eq!(t.determinant().abs(), BigInt::one());
                let n = d.rows().min(d.cols());
                let diag: Vec<BigInt> = (0..n).map(|i| d[(i, i)].clone()).collect();
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            prop_assert!(d[(i, j)].is_zero());
                        }
                    }
                }
                let nonzero: Vec<&BigInt> = diag.iter().filter(|x| !x.is_zero()).collect();
                for w in nonzero.windows(2) {
                    prop_assert!((w[1] % w[0]).is_zero());
                }
                // Trailing zeros only.
                let first_zero = diag.iter().position(|x| x.is_zero());
                if let Some(fz) = first_zero {
                    prop_assert!(diag[fz..].iter().all(|x| x.is_zero()));
                }
            }

            #[test]
            fn kernel_is_saturated(a in small_matrix()) {
                let k = a.right_kernel();
                for r in 0..k.rows() {
                    let prod = a.mul_vec(k.row(r));
                    prop_assert!(prod.iter().all(|x| x.is_zero()));
                }
                prop_assert_eq!(k.rows() + a.rank(), a.cols());
                for d in k.elementary_divisors() {
                    prop_assert_eq!(d, BigInt::one());
                }
            }
        }
    }
}
