//! Lower bounds for B(k) from pairs of Mersenne primes.
//!
//! With 2^p - 1 and 2^q - 1 prime and p < q, every k >= (p-1)(q-1) has a
//! representation k = aq + bp with 0 <= b <= q - 1. The odd number
//! W = (2^q - 1)^a (2^p - 1)^b then lies in class k, so B(k) >= W, and W is
//! at least 2^k (1 - 2^-q)^((k - p(q-1))/q) (1 - 2^-p)^(q-1).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{big_d_factored, lambda_additive};
use crate::atlas::{largest_odd_b, SieveTable};
use crate::error::{domain, Error, Result};
use crate::factor::Factorization;
use crate::Natural;

/// Exponents of the first Mersenne primes.
pub const KNOWN_EXPONENTS: [u32; 8] = [2, 3, 5, 7, 13, 17, 19, 31];

/// 2^p - 1.
pub fn mersenne_number(p: u32) -> Natural {
    (BigUint::one() << p as usize) - 1u32
}

/// Lucas-Lehmer test for 2^p - 1.
pub fn is_mersenne_prime(p: u32) -> bool {
    match p {
        0 | 1 => false,
        2 => true,
        _ if !crate::factor::is_prime_u64(p as u64) => false,
        _ => {
            let m = mersenne_number(p);
            let mut s = BigUint::from(4u32);
            let two = BigUint::from(2u32);
            for _ in 0..p - 2 {
                s = (&s * &s + &m - &two) % &m;
            }
            s.is_zero()
        }
    }
}

/// Two Mersenne prime exponents p < q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MersennePair {
    p: u32,
    q: u32,
}

impl MersennePair {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p >= q {
            return domain(format!("need p < q, got p = {p}, q = {q}"));
        }
        for e in [p, q] {
            if !is_mersenne_prime(e) {
                return domain(format!("2^{e} - 1 is not prime"));
            }
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// (p - 1)(q - 1), the smallest k this pair covers.
    pub fn threshold(&self) -> u64 {
        (self.p as u64 - 1) * (self.q as u64 - 1)
    }
}

/// The representation k = aq + bp with a >= 0 and 0 <= b <= q - 1.
pub fn skupien_rep(k: u64, pair: MersennePair) -> Result<(u64, u64)> {
    if k < pair.threshold() {
        return domain(format!(
            "k = {k} is below (p-1)(q-1) = {}",
            pair.threshold()
        ));
    }
    let (p, q) = (pair.p as u64, pair.q as u64);
    // b = k p^-1 mod q
    let inv = (p as i64).extended_gcd(&(q as i64)).x.rem_euclid(q as i64) as u64;
    let b = ((k % q) as u128 * inv as u128 % q as u128) as u64;
    let rest = k - b * p;
    debug_assert_eq!(rest % q, 0);
    Ok((rest / q, b))
}

/// W = (2^q - 1)^a (2^p - 1)^b, kept in factored form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MersenneWitness {
    pub k: u64,
    pub a: u64,
    pub b: u64,
    pub factorization: Factorization,
    pub value: Natural,
    /// lambda(W), computed additively from the factorization.
    pub class: u64,
}

pub fn mersenne_witness(k: u64, pair: MersennePair) -> Result<MersenneWitness> {
    let (a, b) = skupien_rep(k, pair)?;
    let exp = |e: u64| {
        u32::try_from(e).map_err(|_| Error::Capacity(format!("exponent {e} too large")))
    };
    let factorization = Factorization::from_prime_powers([
        (mersenne_number(pair.q), exp(a)?),
        (mersenne_number(pair.p), exp(b)?),
    ])?;
    let value = factorization.value();
    // W is odd, so lambda(W) = D(W)
    let class = big_d_factored(&factorization);
    Ok(MersenneWitness { k, a, b, factorization, value, class })
}

/// (2^q - 1)^p > (2^p - 1)^q, exactly. Rejects p >= q and p = 0.
pub fn lemma24_check(p: u32, q: u32) -> Result<bool> {
    if p == 0 || p >= q {
        return domain(format!("need 0 < p < q, got p = {p}, q = {q}"));
    }
    Ok(mersenne_number(q).pow(p) > mersenne_number(p).pow(q))
}

fn as_decimal<S: Serializer>(n: &Natural, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub k: u64,
    pub p: u32,
    pub q: u32,
    pub a: u64,
    pub b: u64,
    /// q - 1 - b
    pub j: u64,
    #[serde(serialize_with = "as_decimal")]
    pub witness: Natural,
    pub witness_class: u64,
    /// W = 2^k (1 - 2^-q)^a (1 - 2^-p)^b, checked in exact rationals.
    pub identity_verified: bool,
    /// W >= L through the comparison (2^q - 1)^(pj) >= (2^p - 1)^(qj),
    /// with equality exactly when j = 0.
    pub chain_verified: bool,
    /// W^q >= L^q, checked directly in exact rationals.
    pub direct_verified: bool,
    /// B(k), when the supplied sieve reaches 2^k.
    pub sieve_b: Option<u64>,
    /// W <= B(k) < 2^k, when `sieve_b` is known.
    pub sandwich: Option<bool>,
    /// Floating-point rendering of L. For display only.
    pub bound_approx: f64,
}

impl BoundReport {
    pub fn verified(&self) -> bool {
        self.identity_verified
            && self.chain_verified
            && self.direct_verified
            && self.witness_class == self.k
            && self.sandwich != Some(false)
    }
}

fn one_minus_pow2(e: u32) -> BigRational {
    BigRational::one() - BigRational::new(BigInt::one(), BigInt::one() << e as usize)
}

fn rat_pow(x: &BigRational, e: i64) -> BigRational {
    Pow::pow(x, e)
}

/// Builds the witness for class `k` and checks the lower-bound chain for it.
pub fn bound_report(
    k: u64,
    pair: MersennePair,
    table: Option<&SieveTable>,
) -> Result<BoundReport> {
    let w = mersenne_witness(k, pair)?;
    let (p, q) = (pair.p, pair.q);
    let j = q as u64 - 1 - w.b;
    let kk = i64::try_from(k).map_err(|_| Error::Capacity(format!("k = {k}")))?;

    let two_k = BigRational::from_integer(BigInt::one() << k as usize);
    let w_rat = BigRational::from_integer(BigInt::from(w.value.clone()));
    let (rq, rp) = (one_minus_pow2(q), one_minus_pow2(p));
    let identity = &two_k * rat_pow(&rq, w.a as i64) * rat_pow(&rp, w.b as i64);

    // L^q = 2^(kq) (1 - 2^-q)^(k - p(q-1)) (1 - 2^-p)^(q(q-1))
    let l_pow_q = rat_pow(&two_k, q as i64)
        * rat_pow(&rq, kk - p as i64 * (q as i64 - 1))
        * rat_pow(&rp, q as i64 * (q as i64 - 1));
    let direct = rat_pow(&w_rat, q as i64) >= l_pow_q;

    let chain = if j == 0 {
        rat_pow(&w_rat, q as i64) == l_pow_q
    } else {
        lemma24_check(p, q)?
    };

    let bound_approx = 2f64.powi(k as i32)
        * (1.0 - 2f64.powi(-(q as i32))).powf((k as f64 - p as f64 * (q as f64 - 1.0)) / q as f64)
        * (1.0 - 2f64.powi(-(p as i32))).powi(q as i32 - 1);

    let sieve_b = match table {
        Some(t) if k < 63 && t.covers_pow2(k as u32) && k != 1 => Some(largest_odd_b(t, k)?),
        _ => None,
    };
    let sandwich = sieve_b.map(|b| {
        BigUint::from(b) >= w.value && k < 64 && b < 1u64 << k
    });

    Ok(BoundReport {
        k,
        p,
        q,
        a: w.a,
        b: w.b,
        j,
        witness_class: w.class,
        witness: w.value,
        identity_verified: identity == w_rat,
        chain_verified: chain,
        direct_verified: direct,
        sieve_b,
        sandwich,
        bound_approx,
    })
}

/// lambda of the witness recomputed from its value rather than its factors.
pub fn witness_class_direct(w: &MersenneWitness) -> Result<u64> {
    lambda_additive(&w.value)
}
