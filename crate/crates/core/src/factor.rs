//! Primality testing and integer factorization.
//!
//! Inputs that fit in a `u64` go through trial division by a small prime
//! table, a deterministic Miller-Rabin test and Brent's variant of Pollard
//! rho. Wider inputs use the same pipeline over `BigUint`; once a cofactor
//! drops below 2^64 it is handed to the fast path.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Result};
use crate::Natural;

/// Trial division runs over all primes below this bound.
const TRIAL_BOUND: u32 = 1 << 12;

/// The first thirteen primes. As Miller-Rabin bases they decide primality
/// exactly for every n < 3.317 * 10^24, which covers all of `u64`.
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        prime_flags(TRIAL_BOUND as usize)
            .iter()
            .enumerate()
            .filter_map(|(i, &p)| p.then_some(i as u32))
            .collect()
    })
}

/// Sieve of Eratosthenes: `flags[i]` is true exactly when `i` is prime,
/// for `0 <= i <= limit`.
pub fn prime_flags(limit: usize) -> Vec<bool> {
    let mut flags = vec![true; limit + 1];
    flags[0] = false;
    if limit >= 1 {
        flags[1] = false;
    }
    let mut i = 2;
    while i * i <= limit {
        if flags[i] {
            for m in (i * i..=limit).step_by(i) {
                flags[m] = false;
            }
        }
        i += 1;
    }
    flags
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
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

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primality test for arbitrary naturals.
///
/// Exact below 3.317 * 10^24; above that it is a strong probable-prime test
/// to the first thirteen prime bases.
pub fn is_prime(n: &Natural) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle-finding variant of Pollard rho. Returns a nontrivial
/// divisor of the odd composite `n`.
fn rho_u64(n: u64) -> u64 {
    for c in 1..n {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // the batch overshot; walk it again one step at a time
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("rho failed on composite {n}")
}

fn rho_big(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut r: u64 = 1;
        const BATCH: u64 = 128;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn push_prime_factors_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = rho_u64(n);
    push_prime_factors_u64(d, out);
    push_prime_factors_u64(n / d, out);
}

fn push_prime_factors_big(n: BigUint, out: &mut Vec<BigUint>) {
    if let Some(small) = n.to_u64() {
        let mut primes = Vec::new();
        push_prime_factors_u64(small, &mut primes);
        out.extend(primes.into_iter().map(BigUint::from));
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let d = rho_big(&n);
    let cofactor = &n / &d;
    push_prime_factors_big(d, out);
    push_prime_factors_big(cofactor, out);
}

fn collect_pairs<T: Ord + Clone>(mut primes: Vec<T>) -> Vec<(T, u32)> {
    primes.sort();
    let mut pairs: Vec<(T, u32)> = Vec::new();
    for p in primes {
        match pairs.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => pairs.push((p, 1)),
        }
    }
    pairs
}

/// Factors a nonzero `u64` into `(prime, exponent)` pairs, increasing by prime.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize_u64(0)");
    let mut pairs = Vec::new();
    for &p in small_primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
    }
    if n > 1 {
        let mut rest = Vec::new();
        push_prime_factors_u64(n, &mut rest);
        pairs.extend(collect_pairs(rest));
    }
    pairs
}

/// Prime factorization of a positive integer.
///
/// Pairs are strictly increasing by prime and every exponent is at least 1;
/// the factorization of 1 is empty.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factorization {
    pairs: Vec<(Natural, u32)>,
}

impl Factorization {
    /// The factorization of 1.
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a factorization from known prime powers, merging repeated
    /// primes and dropping zero exponents. Primality of every base is
    /// checked.
    pub fn from_prime_powers<I>(powers: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Natural, u32)>,
    {
        let mut pairs: Vec<(Natural, u32)> = Vec::new();
        for (p, e) in powers {
            if e == 0 {
                continue;
            }
            if !is_prime(&p) {
                return domain(format!("{p} is not prime"));
            }
            pairs.push((p, e));
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Natural, u32)> = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        Ok(Self { pairs: merged })
    }

    pub fn pairs(&self) -> &[(Natural, u32)] {
        &self.pairs
    }

    pub fn is_one(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Exponent of `p` in this factorization (`v_p`).
    pub fn exponent_of(&self, p: &Natural) -> u32 {
        self.pairs
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.pairs[i].1)
            .unwrap_or(0)
    }

    /// Reconstructs the factored integer.
    pub fn value(&self) -> Natural {
        self.pairs
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// All positive divisors, in increasing order.
    pub fn divisors(&self) -> Vec<Natural> {
        let mut divs = vec![BigUint::one()];
        for (p, e) in &self.pairs {
            let len = divs.len();
            let mut pk = BigUint::one();
            for _ in 0..*e {
                pk *= p;
                for i in 0..len {
                    let d = &divs[i] * &pk;
                    divs.push(d);
                }
            }
        }
        divs.sort();
        divs
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

impl From<Vec<(u64, u32)>> for Factorization {
    /// Wraps pairs already known to be a valid factorization, such as the
    /// output of [`factorize_u64`].
    fn from(pairs: Vec<(u64, u32)>) -> Self {
        Self {
            pairs: pairs.into_iter().map(|(p, e)| (BigUint::from(p), e)).collect(),
        }
    }
}

/// Factors `n >= 1`. Rejects zero.
pub fn factorize(n: &Natural) -> Result<Factorization> {
    if n.is_zero() {
        return domain("cannot factor 0");
    }
    if let Some(small) = n.to_u64() {
        return Ok(factorize_u64(small).into());
    }
    let mut m = n.clone();
    let mut pairs = Vec::new();
    for &p in small_primes() {
        if (&m % p).is_zero() {
            let mut e = 0;
            while (&m % p).is_zero() {
                m /= p;
                e += 1;
            }
            pairs.push((BigUint::from(p), e));
        }
    }
    if !m.is_one() {
        let mut rest = Vec::new();
        push_prime_factors_big(m, &mut rest);
        pairs.extend(collect_pairs(rest));
    }
    Ok(Factorization { pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_primality_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), brute_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn factor_examples() {
        assert!(factorize(&BigUint::from(1u32)).unwrap().is_one());
        let f = factorize(&BigUint::from(12u32)).unwrap();
        assert_eq!(f.pairs(), &[(BigUint::from(2u32), 2), (BigUint::from(3u32), 1)]);
        let m31 = BigUint::from((1u64 << 31) - 1);
        let f = factorize(&m31).unwrap();
        assert_eq!(f.pairs(), &[(m31.clone(), 1)]);
        assert!(factorize(&BigUint::zero()).is_err());
    }

    #[test]
    fn known_hard_cases() {
        // strong pseudoprimes to several small bases
        for n in [3_215_031_751u64, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321] {
            assert!(!is_prime_u64(n));
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        let semi = 4_294_967_291u64 * 4_294_967_279;
        assert_eq!(factorize_u64(semi), vec![(4_294_967_279, 1), (4_294_967_291, 1)]);
    }

    #[test]
    fn wide_inputs() {
        let m31 = (BigUint::one() << 31usize) - 1u32;
        let m89 = (BigUint::one() << 89usize) - 1u32;
        assert!(is_prime(&m89));
        let n = &m31 * &m89 * BigUint::from(9u32);
        let f = factorize(&n).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.pairs().len(), 3);
        assert_eq!(f.exponent_of(&BigUint::from(3u32)), 2);
        // 2^67 - 1 = 193707721 * 761838257287
        let m67 = (BigUint::one() << 67usize) - 1u32;
        assert!(!is_prime(&m67));
        let f = factorize(&m67).unwrap();
        assert_eq!(f.pairs()[0].0, BigUint::from(193_707_721u64));
    }

    #[test]
    fn divisors_of_twelve() {
        let f = factorize(&BigUint::from(12u32)).unwrap();
        let d: Vec<u32> = f.divisors().iter().map(|d| d.to_u32().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn from_prime_powers_validates() {
        assert!(Factorization::from_prime_powers([(BigUint::from(15u32), 1)]).is_err());
        let f = Factorization::from_prime_powers([
            (BigUint::from(7u32), 2),
            (BigUint::from(3u32), 1),
            (BigUint::from(3u32), 1),
            (BigUint::from(5u32), 0),
        ])
        .unwrap();
        assert_eq!(f.to_string(), "3^2 * 7^2");
        assert_eq!(f.value(), BigUint::from(441u32));
    }
}
