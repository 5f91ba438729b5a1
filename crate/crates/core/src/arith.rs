//! Exact elementary number theory on machine integers.
//!
//! Everything here is deterministic and sized for desk-scale inputs: integers
//! are factored by trial division and multiplicative orders are found by
//! scanning the divisors of the totient.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Prime factorization of a positive integer, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs in increasing prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of distinct primes.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    /// Multiplicity of `p`, zero when `p` does not divide the value.
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, k)| k)
    }

    pub fn is_square_free(&self) -> bool {
        self.factors.iter().all(|&(_, k)| k == 1)
    }

    /// Multiplies the prime powers back together.
    pub fn recompose(&self) -> u64 {
        self.factors.iter().map(|&(p, k)| p.pow(k)).product()
    }
}

/// Factors `n` by trial division over 2, 3 and numbers of the form 6k ± 1.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut pull = |d: u64, rest: &mut u64| {
        let mut k = 0;
        while *rest % d == 0 {
            *rest /= d;
            k += 1;
        }
        if k > 0 {
            factors.push((d, k));
        }
    };
    pull(2, &mut rest);
    pull(3, &mut rest);
    let mut d: u64 = 5;
    while d.checked_mul(d).is_some_and(|sq| sq <= rest) {
        pull(d, &mut rest);
        pull(d + 2, &mut rest);
        d += 6;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { value: n, factors })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d: u64 = 5;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

pub fn ensure_prime(p: u64) -> Result<u64> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Euler's totient from the product formula over the prime factorization.
pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(phi_of(&factorize(n)?))
}

pub(crate) fn phi_of(f: &Factorization) -> u64 {
    f.factors()
        .iter()
        .map(|&(p, k)| p.pow(k - 1) * (p - 1))
        .product()
}

/// All positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(divisors_of(&factorize(n)?))
}

pub(crate) fn divisors_of(f: &Factorization) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, k) in f.factors() {
        let current = out.len();
        let mut power = 1;
        for _ in 0..k {
            power *= p;
            for i in 0..current {
                out.push(out[i] * power);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// Smallest `k >= 1` with `a^k = 1 (mod n)`. The unit group modulo 1 is
/// trivial, so every order modulo 1 is 1.
pub fn mult_order(a: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Zero);
    }
    if n == 1 {
        return Ok(1);
    }
    if a.gcd(&n) != 1 {
        return Err(Error::NotCoprime { a, n });
    }
    let phi = euler_phi(n)?;
    let candidates = divisors(phi)?;
    Ok(candidates
        .into_iter()
        .find(|&k| pow_mod(a, k, n) == 1)
        .expect("a^phi(n) = 1 for units"))
}

pub fn is_primitive_root(a: u64, n: u64) -> Result<bool> {
    Ok(mult_order(a, n)? == euler_phi(n)?)
}

/// `n` with every factor of `p` divided out.
///
/// # Panics
/// If `n == 0` or `p < 2`.
pub fn coprime_part(mut n: u64, p: u64) -> u64 {
    assert!(n > 0 && p >= 2, "coprime_part needs n >= 1 and p >= 2");
    while n % p == 0 {
        n /= p;
    }
    n
}

/// Legendre symbol `(a/p)` for an odd prime `p`, via the Jacobi reciprocity
/// recursion.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    if p == 2 {
        return Err(Error::EvenModulus(p));
    }
    ensure_prime(p)?;
    let mut a = (a as i128).rem_euclid(p as i128) as u64;
    let mut n = p;
    let mut sign = 1i8;
    while a != 0 {
        let twos = a.trailing_zeros();
        a >>= twos;
        if twos % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn checked_lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Err(Error::Zero);
    }
    (a / a.gcd(&b))
        .checked_mul(b)
        .ok_or(Error::Overflow("lcm"))
}
