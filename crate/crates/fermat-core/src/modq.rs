//! Machine-prime Gaussian elimination with exact reconstruction helpers.
//!
//! Large projection matrices (thousands of rows) are too big for dense bignum
//! elimination, so kernel vectors are *searched* modulo 31-bit primes, lifted
//! by CRT + rational reconstruction, and then **verified exactly** over the
//! integers by the caller.  Nothing modular is ever trusted without an exact
//! integer re-check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// 31-bit primes used for modular elimination passes.
pub const ELIMINATION_PRIMES: [u64; 10] = [
    2_147_483_647,
    2_147_483_629,
    2_147_483_587,
    2_147_483_579,
    2_147_483_563,
    2_147_483_549,
    2_147_483_543,
    2_147_483_497,
    2_147_483_489,
    2_147_483_477,
];

/// Barrett reducer for a fixed modulus q < 2^31; reduces any u64.
#[derive(Clone, Copy, Debug)]
pub struct Barrett {
    pub q: u64,
    inv: u64, // floor(2^64 / q)
}

impl Barrett {
    pub fn new(q: u64) -> Self {
        assert!(q > 1 && q < (1 << 31));
        Barrett { q, inv: u64::MAX / q }
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        // Approximate quotient via the precomputed reciprocal, then fix up.
        // approx <= x/q and undershoots by less than 2 for x < 2^62.
        let approx = ((x as u128 * self.inv as u128) >> 64) as u64;
        let mut r = x - approx * self.q;
        while r >= self.q {
            r -= self.q;
        }
        r
    }

    #[inline]
    pub fn mulmod(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        self.reduce(a * b) // a*b < 2^62, cannot overflow
    }

    pub fn powmod(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(acc, base);
            }
            base = self.mulmod(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn invmod(&self, a: u64) -> u64 {
        // q is prime in all uses here.
        self.powmod(a, self.q - 2)
    }
}

/// Row echelon form of a 0/1 matrix modulo a prime.
///
/// Rows are stored pivot-normalized (leading entry 1); `pivot_cols` lists the
/// pivot column of each stored row in order.
pub struct ModqEchelon {
    pub barrett: Barrett,
    pub cols: usize,
    pub rows: Vec<Vec<u32>>,
    pub pivot_cols: Vec<usize>,
}

impl ModqEchelon {
    /// Eliminate `matrix` (row-major, `rows x cols`, entries arbitrary u8).
    pub fn new(matrix: &[u8], nrows: usize, ncols: usize, q: u64) -> Self {
        let b = Barrett::new(q);
        let mut work: Vec<Vec<u32>> = (0..nrows)
            .map(|r| matrix[r * ncols..(r + 1) * ncols].iter().map(|&x| x as u32).collect())
            .collect();
        let mut pivot_cols = Vec::new();
        let mut out_rows: Vec<Vec<u32>> = Vec::new();
        let mut row_start = 0usize;
        for col in 0..ncols {
            let Some(p) = (row_start..work.len()).find(|&r| work[r][col] != 0) else {
                continue;
            };
            work.swap(row_start, p);
            // Normalize the pivot row.
            let inv = b.invmod(work[row_start][col] as u64);
            if inv != 1 {
                for v in work[row_start][col..].iter_mut() {
                    *v = b.mulmod(*v as u64, inv) as u32;
                }
            }
            let (pivot_slice, rest) = work.split_at_mut(row_start + 1);
            let pivot_row = &pivot_slice[row_start];
            for r in rest.iter_mut() {
                let f = r[col] as u64;
                if f == 0 {
                    continue;
                }
                let neg = q - f;
                for (dst, src) in r[col..].iter_mut().zip(&pivot_row[col..]) {
                    *dst = b.reduce(*dst as u64 + neg * *src as u64) as u32;
                }
            }
            pivot_cols.push(col);
            out_rows.push(work[row_start].clone());
            row_start += 1;
            if row_start == work.len() {
                break;
            }
        }
        ModqEchelon { barrett: b, cols: ncols, rows: out_rows, pivot_cols }
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_cols.binary_search(&col).is_ok()
    }

    /// For a free column `f`, solve for the kernel vector that is 1 at `f`,
    /// 0 at every other free column; returns the values at the pivot columns.
    pub fn kernel_pivot_values(&self, f: usize) -> Vec<u64> {
        assert!(!self.is_pivot(f), "column {f} is a pivot column");
        let q = self.barrett.q;
        let r = self.rows.len();
        // Solve R_piv * x = -R_col(f) by back-substitution; v[pivot_i] = x_i.
        let mut x = vec![0u64; r];
        for i in (0..r).rev() {
            let row = &self.rows[i];
            let rhs = if f >= self.pivot_cols[i] { row[f] as u64 } else { 0 };
            let mut acc = (q - rhs) % q;
            for j in i + 1..r {
                let c = row[self.pivot_cols[j]] as u64;
                if c != 0 && x[j] != 0 {
                    acc = self.barrett.reduce(acc + (q - self.barrett.mulmod(c, x[j])));
                }
            }
            x[i] = acc % q;
        }
        x
    }
}

/// Combine residues `x = r_i mod q_i` into the balanced representative modulo
/// the product; returns `(x, modulus)`.
pub fn crt_balanced(residues: &[(u64, u64)]) -> (BigInt, BigInt) {
    let mut x = BigInt::from(residues[0].0);
    let mut modulus = BigInt::from(residues[0].1);
    for &(r, q) in &residues[1..] {
        let qb = BigInt::from(q);
        let r = BigInt::from(r);
        // x' = x + modulus * t where t = (r - x) / modulus mod q
        let inv = mod_inverse(&modulus, &qb).expect("co-prime CRT moduli");
        let t = ((&r - &x) * inv).mod_floor(&qb);
        x += &modulus * t;
        modulus *= qb;
    }
    let half = &modulus / 2;
    if x > half {
        x -= &modulus;
    }
    (x, modulus)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Rational reconstruction of `a mod m`: find n/d with `n = a*d mod m`,
/// `|n|, d <= sqrt(m/2)`, `gcd(d, m) = 1`.  Returns `(n, d)` with `d > 0`.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m / 2u32).sqrt();
    let mut r0 = m.clone();
    let mut r1 = a.mod_floor(m);
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (mut n, mut d) = (r1, t1);
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    if !n.gcd(&d).is_one() {
        return None;
    }
    Some((n, d))
}
