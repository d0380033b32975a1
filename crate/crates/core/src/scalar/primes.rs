use rand::Rng;

use super::ScalarError;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniformly drawn prime `p` with `2^(bits-1) < p < 2^bits`.
pub fn random_large_prime<R: Rng + ?Sized>(bits: u32, rng: &mut R) -> Result<u64, ScalarError> {
    if !(20..=62).contains(&bits) {
        return Err(ScalarError::PrimeBitsOutOfRange(bits));
    }
    let lo = 1u64 << (bits - 1);
    loop {
        let candidate = rng.gen_range(lo + 1..(lo << 1)) | 1;
        if is_prime_u64(candidate) {
            return Ok(candidate);
        }
    }
}
