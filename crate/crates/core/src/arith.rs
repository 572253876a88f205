//! Integer helpers: gcd, modular inverses, primality and factorization.
//!
//! Factorization is trial division up to [`TRIAL_DIVISION_BOUND`] followed by
//! Brent's variant of Pollard rho with a fixed seed sequence, so results and
//! running time are deterministic.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let eg = i128::from(a % m).extended_gcd(&i128::from(m));
    (eg.gcd == 1).then(|| eg.x.rem_euclid(i128::from(m)) as u64)
}

/// `x mod m` for a signed `x`, as a value in `[0, m)`.
pub fn reduce_mod(x: i64, m: u64) -> u64 {
    i128::from(x).rem_euclid(i128::from(m)) as u64
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
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

/// Brent's cycle-finding Pollard rho. `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    for seed in 1u64.. {
        let c = seed;
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (seed + 1, 1u64, 1u64);
        let (mut x, mut ys);
        let mut g;
        const BATCH: u64 = 128;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            if g != 1 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

/// An integer together with its prime factorization, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredInt {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInt {
    pub fn new(value: u64) -> Result<Self> {
        if value == 0 {
            return Err(Error::InvalidParameter("cannot factor 0".into()));
        }
        let mut primes = Vec::new();
        let mut n = value;
        let mut p = 2u64;
        while p <= TRIAL_DIVISION_BOUND && p * p <= n {
            while n.is_multiple_of(p) {
                primes.push(p);
                n /= p;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if n > 1 {
            let mut stack = vec![n];
            while let Some(m) = stack.pop() {
                if is_prime(m) {
                    primes.push(m);
                } else {
                    let f = pollard_rho(m);
                    stack.push(f);
                    stack.push(m / f);
                }
            }
        }
        primes.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((last, e)) if *last == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Ok(Self { value, factors })
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }
}

/// Splits `q = p^n` with `p` prime; `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = FactoredInt::new(q).ok()?;
    match f.factors.as_slice() {
        [(p, n)] => Some((*p, *n)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_gcd() {
        assert_eq!(mod_inverse(2, 11), Some(6));
        assert_eq!(mod_inverse(3, 9), None);
        assert_eq!(gcd(12, 9), 3);
        assert_eq!(reduce_mod(-9, 11), 2);
    }

    #[test]
    fn factors_reconstruct() {
        for n in 1..5000u64 {
            let f = FactoredInt::new(n).unwrap();
            let prod: u64 = f.factors.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.primes().all(is_prime));
        }
    }

    #[test]
    fn rho_splits_large_semiprimes() {
        let n = 1_000_003u64 * 1_000_033;
        let f = FactoredInt::new(n).unwrap();
        assert_eq!(f.factors, vec![(1_000_003, 1), (1_000_033, 1)]);
        let n = 1_000_003u64.pow(2) * 3;
        assert_eq!(FactoredInt::new(n).unwrap().factors, vec![(3, 1), (1_000_003, 2)]);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
