use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{Backend, Field, FieldElement};

/// `F_p` for a prime `p < 2^63`. Residues are kept in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Primality is the caller's responsibility (see [`super::is_prime_u64`]).
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 63), "modulus out of range");
        Self { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = ((n % &m) + &m) % &m;
        r.to_u64().expect("residue fits")
    }

    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if self.p < (1 << 32) {
            (a * b) % self.p
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    #[inline]
    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn pow_raw(&self, mut a: u64, mut n: u64) -> u64 {
        let mut acc = 1 % self.p;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_raw(acc, a);
            }
            a = self.mul_raw(a, a);
            n >>= 1;
        }
        acc
    }

    pub fn inv_raw(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        // Extended Euclid on signed 128-bit values.
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.p as i128) as u64)
    }

    /// Legendre-symbol test via Euler's criterion.
    pub fn is_square(&self, a: u64) -> bool {
        a == 0 || self.p == 2 || self.pow_raw(a, (self.p - 1) / 2) == 1
    }

    /// Tonelli–Shanks.
    pub fn sqrt_raw(&self, a: u64) -> Option<u64> {
        let p = self.p;
        if a == 0 || p == 2 {
            return Some(a);
        }
        if !self.is_square(a) {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow_raw(a, (p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = 2;
        while self.is_square(z) {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow_raw(z, q);
        let mut t = self.pow_raw(a, q);
        let mut r = self.pow_raw(a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul_raw(t2, t2);
                i += 1;
            }
            let b = self.pow_raw(c, 1 << (m - i - 1));
            m = i;
            c = self.mul_raw(b, b);
            t = self.mul_raw(t, c);
            r = self.mul_raw(r, b);
        }
        Some(r)
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let num = self.reduce_bigint(q.numer());
        let den = self.reduce_bigint(q.denom());
        Some(self.mul_raw(num, self.inv_raw(den)?))
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.add_raw(*a, *b)
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.sub_raw(*a, *b)
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_raw(*a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        self.inv_raw(*a)
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn backend(&self) -> Backend {
        Backend::Prime { p: self.p }
    }
    fn to_element(&self, a: &u64) -> FieldElement {
        FieldElement::Prime { value: *a, p: self.p }
    }
    fn from_element(&self, e: &FieldElement) -> Option<u64> {
        match e {
            FieldElement::Prime { value, p } if *p == self.p => Some(*value),
            FieldElement::Rational(q) => self.from_rational(q),
            _ => None,
        }
    }
    fn sqrt(&self, a: &u64) -> Option<u64> {
        self.sqrt_raw(*a)
    }
    fn shadow(&self, a: &u64, p: &PrimeField) -> Option<u64> {
        (p.p == self.p).then_some(*a)
    }
    #[inline]
    fn sub_mul_assign(&self, a: &mut u64, c: &u64, b: &u64) {
        *a = self.sub_raw(*a, self.mul_raw(*c, *b));
    }
    fn pow(&self, a: &u64, n: u64) -> u64 {
        self.pow_raw(*a, n)
    }
}
