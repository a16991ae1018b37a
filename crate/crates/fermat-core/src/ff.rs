//! Small finite fields `F_{p^e}` sized for exhaustive character sums.
//!
//! Elements are polynomials over `F_p` reduced modulo a monic irreducible
//! of degree `e`, packed into a fixed coefficient array.  The construction
//! is deterministic: the modulus is the first irreducible polynomial in
//! counter order and the generator is the first element of maximal order,
//! so every run of a character-sum pass visits field elements in the same
//! sequence.

use crate::error::FrobeniusError;
use crate::modq::Barrett;

/// Largest supported extension degree.  Quartic extensions are enough to
/// assemble every Frobenius eigenvalue orbit this crate reasons about.
pub const MAX_EXTENSION_DEGREE: u32 = 4;

/// Largest supported field size; full passes over the field are `O(q)`.
pub const MAX_FIELD_SIZE: u64 = 1 << 27;

/// Field element: coefficients of `c0 + c1*x + c2*x^2 + c3*x^3`, each
/// reduced mod `p`.  Coefficients at or above the extension degree are zero.
pub type FieldElement = [u64; MAX_EXTENSION_DEGREE as usize];

/// Deterministic trial-division primality test, adequate for the sizes
/// accepted by [`SmallField::new`].
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2, 3, 5] {
        if n % d == 0 {
            return n == d;
        }
    }
    let mut d = 7;
    let mut step = [4, 2, 4, 2, 4, 6, 2, 6].iter().cycle();
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += step.next().expect("cycled iterator is infinite");
    }
    true
}

/// Ascending prime factors of `n`, without multiplicity.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The field `F_{p^e}` with a fixed modulus and multiplicative generator.
#[derive(Debug, Clone)]
pub struct SmallField {
    p: u64,
    e: u32,
    q: u64,
    barrett: Barrett,
    /// Monic modulus coefficients `f_0..f_e` (only meaningful for `e >= 2`).
    modulus: Vec<u64>,
    generator: FieldElement,
}

impl SmallField {
    /// Builds `F_{p^e}`.  Requires `p` an odd prime, `1 <= e <= 4`, and
    /// `p^e` within [`MAX_FIELD_SIZE`].
    pub fn new(p: u64, e: u32) -> Result<Self, FrobeniusError> {
        if p < 3 || !is_prime(p) {
            return Err(FrobeniusError::Internal(format!(
                "field characteristic {p} is not an odd prime"
            )));
        }
        if e == 0 || e > MAX_EXTENSION_DEGREE {
            return Err(FrobeniusError::Internal(format!(
                "extension degree {e} outside 1..={MAX_EXTENSION_DEGREE}"
            )));
        }
        let mut q: u64 = 1;
        for _ in 0..e {
            q = q.checked_mul(p).filter(|&v| v <= MAX_FIELD_SIZE).ok_or(
                FrobeniusError::BoundExceeded {
                    q: (p as u128).pow(e),
                    bound: MAX_FIELD_SIZE,
                },
            )?;
        }
        let barrett = Barrett::new(p);
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            find_irreducible(&barrett, p, e)
        };
        let mut field = SmallField {
            p,
            e,
            q,
            barrett,
            modulus,
            generator: [0; 4],
        };
        field.generator = field.find_generator()?;
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.e
    }

    pub fn size(&self) -> u64 {
        self.q
    }

    pub fn zero(&self) -> FieldElement {
        [0; 4]
    }

    pub fn one(&self) -> FieldElement {
        [1, 0, 0, 0]
    }

    pub fn from_u64(&self, c: u64) -> FieldElement {
        [c % self.p, 0, 0, 0]
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn is_zero(&self, a: FieldElement) -> bool {
        a == [0; 4]
    }

    /// Bijection onto `0..q` given by base-`p` digits.
    pub fn index(&self, a: FieldElement) -> usize {
        let mut idx = 0u64;
        for i in (0..self.e as usize).rev() {
            idx = idx * self.p + a[i];
        }
        idx as usize
    }

    pub fn element_from_index(&self, mut idx: u64) -> FieldElement {
        let mut a = [0; 4];
        for slot in a.iter_mut().take(self.e as usize) {
            *slot = idx % self.p;
            idx /= self.p;
        }
        a
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let mut out = [0; 4];
        for i in 0..self.e as usize {
            let s = a[i] + b[i];
            out[i] = if s >= self.p { s - self.p } else { s };
        }
        out
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let mut out = [0; 4];
        for i in 0..self.e as usize {
            out[i] = if a[i] == 0 { 0 } else { self.p - a[i] };
        }
        out
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let e = self.e as usize;
        if e == 1 {
            let mut out = [0; 4];
            out[0] = self.barrett.mulmod(a[0], b[0]);
            return out;
        }
        // Schoolbook product; coefficients stay below p^2 * e < 2^64 via
        // u128 accumulation, then reduction by the monic modulus.
        let mut prod = [0u128; 7];
        for i in 0..e {
            if a[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] += (a[i] as u128) * (b[j] as u128);
            }
        }
        let mut red = [0u64; 7];
        for (r, v) in red.iter_mut().zip(prod.iter()) {
            *r = (v % self.p as u128) as u64;
        }
        // Eliminate degrees 2e-2 down to e using x^e = -(f_0 + .. + f_{e-1} x^{e-1}).
        for d in (e..=2 * e - 2).rev() {
            let c = red[d];
            if c == 0 {
                continue;
            }
            red[d] = 0;
            for (k, &f) in self.modulus.iter().enumerate().take(e) {
                if f == 0 {
                    continue;
                }
                let sub = self.barrett.mulmod(c, f);
                let slot = &mut red[d - e + k];
                *slot = if *slot >= sub {
                    *slot - sub
                } else {
                    *slot + self.p - sub
                };
            }
        }
        let mut out = [0; 4];
        out[..e].copy_from_slice(&red[..e]);
        out
    }

    pub fn pow(&self, mut base: FieldElement, mut n: u64) -> FieldElement {
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// First element (in index order) generating the full multiplicative
    /// group.  For prime fields this is the smallest primitive root.
    fn find_generator(&self) -> Result<FieldElement, FrobeniusError> {
        let order = self.q - 1;
        let factors = distinct_prime_factors(order);
        for idx in 2..self.q {
            let g = self.element_from_index(idx);
            if factors
                .iter()
                .all(|&ell| self.pow(g, order / ell) != self.one())
            {
                return Ok(g);
            }
        }
        Err(FrobeniusError::Internal(format!(
            "no generator found for field of size {}",
            self.q
        )))
    }

    /// Quadratic-character table indexed by [`Self::index`]: `0` for the
    /// zero element, `+1` for nonzero squares, `-1` for nonsquares.
    /// Built by one generator walk, so it costs `q` multiplications.
    pub fn quadratic_character_table(&self) -> Vec<i8> {
        let mut table = vec![0i8; self.q as usize];
        let mut x = self.one();
        for j in 0..self.q - 1 {
            table[self.index(x)] = if j % 2 == 0 { 1 } else { -1 };
            x = self.mul(x, self.generator);
        }
        table
    }
}

/// First monic irreducible of degree `e` over `F_p` in counter order
/// (constant coefficient fastest).
fn find_irreducible(barrett: &Barrett, p: u64, e: u32) -> Vec<u64> {
    let e = e as usize;
    let mut counter = vec![0u64; e];
    loop {
        let mut f = counter.clone();
        f.push(1);
        if is_irreducible(barrett, p, &f) {
            return f;
        }
        // Increment the base-p counter; degree e has p^e candidates and
        // irreducibles exist for every (p, e), so this terminates.
        for digit in counter.iter_mut() {
            *digit += 1;
            if *digit < p {
                break;
            }
            *digit = 0;
        }
    }
}

fn poly_eval(barrett: &Barrett, f: &[u64], x: u64) -> u64 {
    let mut acc = 0;
    for &c in f.iter().rev() {
        acc = barrett.mulmod(acc, x);
        acc += c;
        if acc >= barrett.q {
            acc -= barrett.q;
        }
    }
    acc
}

/// Irreducibility over `F_p` for degree at most 4: a reducible polynomial
/// of degree 2 or 3 has a root, and a rootless quartic is reducible only
/// as a product of two quadratics, which `gcd(x^{p^2} - x, f) != 1` detects.
fn is_irreducible(barrett: &Barrett, p: u64, f: &[u64]) -> bool {
    let deg = f.len() - 1;
    for x in 0..p {
        if poly_eval(barrett, f, x) == 0 {
            return false;
        }
    }
    if deg <= 3 {
        return true;
    }
    // x^{p^2} mod f via two rounds of x^p, then gcd with f.
    let xp = poly_powmod_x(barrett, f, p);
    let xp2 = poly_powmod(barrett, f, &xp, p);
    // xp2 - x
    let mut g = xp2;
    if g.len() < 2 {
        g.resize(2, 0);
    }
    g[1] = if g[1] >= 1 { g[1] - 1 } else { p - 1 };
    poly_gcd_is_constant(barrett, f, &g)
}

/// `x^n mod f`.
fn poly_powmod_x(barrett: &Barrett, f: &[u64], n: u64) -> Vec<u64> {
    poly_powmod(barrett, f, &[0, 1], n)
}

/// `base^n mod f` by square and multiply.
fn poly_powmod(barrett: &Barrett, f: &[u64], base: &[u64], mut n: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    while n > 0 {
        if n & 1 == 1 {
            acc = poly_mulmod(barrett, f, &acc, &b);
        }
        b = poly_mulmod(barrett, f, &b, &b);
        n >>= 1;
    }
    acc
}

fn poly_mulmod(barrett: &Barrett, f: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let t = barrett.mulmod(ai, bj);
            let slot = &mut prod[i + j];
            *slot += t;
            if *slot >= barrett.q {
                *slot -= barrett.q;
            }
        }
    }
    poly_rem(barrett, &mut prod, f);
    prod
}

/// Reduces `a` modulo monic `f` in place (truncating to deg f - 1).
fn poly_rem(barrett: &Barrett, a: &mut Vec<u64>, f: &[u64]) {
    let df = f.len() - 1;
    while a.len() > df {
        let lead = *a.last().expect("nonempty by loop guard");
        let top = a.len() - 1;
        if lead != 0 {
            for (k, &fk) in f.iter().enumerate().take(df) {
                let sub = barrett.mulmod(lead, fk);
                let slot = &mut a[top - df + k];
                *slot = if *slot >= sub {
                    *slot - sub
                } else {
                    *slot + barrett.q - sub
                };
            }
        }
        a.pop();
        while a.len() > df && a.last() == Some(&0) {
            a.pop();
        }
    }
}

fn poly_gcd_is_constant(barrett: &Barrett, f: &[u64], g: &[u64]) -> bool {
    let mut a = f.to_vec();
    let mut b: Vec<u64> = g.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b with b made monic first.
        let lead = *b.last().expect("nonempty");
        let inv = barrett.invmod(lead);
        for c in b.iter_mut() {
            *c = barrett.mulmod(*c, inv);
        }
        poly_rem(barrett, &mut a, &b);
        trim(&mut a);
        std::mem::swap(&mut a, &mut b);
    }
    a.len() == 1
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_field_generator_is_smallest_primitive_root() {
        // (p, smallest primitive root)
        for (p, g) in [(3, 2), (5, 2), (7, 3), (11, 2), (13, 2), (19, 2), (31, 3), (41, 6)] {
            let f = SmallField::new(p, 1).expect("prime field");
            assert_eq!(f.generator(), f.from_u64(g), "p = {p}");
        }
    }

    #[test]
    fn quadratic_character_matches_squares_mod_seven() {
        let f = SmallField::new(7, 1).expect("F_7");
        let table = f.quadratic_character_table();
        let squares = [1u64, 2, 4];
        assert_eq!(table[0], 0);
        for v in 1..7 {
            let expected = if squares.contains(&v) { 1 } else { -1 };
            assert_eq!(table[v as usize], expected, "chi_2({v}) mod 7");
        }
    }

    #[test]
    fn quartic_extension_has_generator_of_full_order() {
        let f = SmallField::new(3, 4).expect("F_81");
        assert_eq!(f.size(), 81);
        let g = f.generator();
        assert_eq!(f.pow(g, 80), f.one());
        for ell in [2, 5] {
            assert_ne!(f.pow(g, 80 / ell), f.one(), "order divides 80/{ell}");
        }
    }

    #[test]
    fn character_table_splits_squares_evenly() {
        for (p, e) in [(7, 2), (5, 3), (11, 2), (3, 4)] {
            let f = SmallField::new(p, e).expect("field");
            let table = f.quadratic_character_table();
            let plus = table.iter().filter(|&&v| v == 1).count() as u64;
            let minus = table.iter().filter(|&&v| v == -1).count() as u64;
            assert_eq!(plus, (f.size() - 1) / 2);
            assert_eq!(minus, (f.size() - 1) / 2);
            // Frobenius fixes exactly the prime subfield.
            let fixed = (0..f.size())
                .filter(|&i| {
                    let x = f.element_from_index(i);
                    f.pow(x, p) == x
                })
                .count() as u64;
            assert_eq!(fixed, p, "fixed points of x -> x^p in F_{{{p}^{e}}}");
        }
    }

    #[test]
    fn rejects_oversized_and_composite_parameters() {
        assert!(SmallField::new(9, 1).is_err());
        assert!(SmallField::new(2, 1).is_err());
        assert!(SmallField::new(3, 5).is_err());
        assert!(SmallField::new(100_003, 2).is_err());
    }

    proptest! {
        #[test]
        fn field_axioms_hold_in_quadratic_extensions(
            p_pick in 0usize..4,
            ai in 0u64..200,
            bi in 0u64..200,
            ci in 0u64..200,
        ) {
            let p = [5u64, 7, 11, 13][p_pick];
            let f = SmallField::new(p, 2).expect("field");
            let q = f.size();
            let a = f.element_from_index(ai % q);
            let b = f.element_from_index(bi % q);
            let c = f.element_from_index(ci % q);
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            // Nonzero elements have order dividing q - 1.
            if !f.is_zero(a) {
                prop_assert_eq!(f.pow(a, q - 1), f.one());
            }
        }
    }
}
