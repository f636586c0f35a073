//! Exact membership in V(c) = {n : n > 2^(lambda(n) - c)} and in T(c), the
//! odd primes q with eta(q) = lambda(q) - log2(q) > c + 1, for rational c.
//!
//! Every decision reduces to comparing A * 2^s with B * 2^t for naturals A,
//! B and integers s, t, after raising both sides to the denominator of c.
//! No floating point takes part in any of them.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::arith::{big_d, lambda_additive, lambda_factored};
use crate::atlas::{build_sieve, SieveTable};
use crate::error::{domain, Error, Result};
use crate::factor::{is_prime, prime_flags, Factorization};
use crate::rational::Rational;
use crate::Natural;

/// Largest power of two, in bits, that an exact comparison may materialize.
pub const MAX_EXACT_BITS: u64 = 1 << 26;

/// Largest x accepted by the density tables and closure checks.
pub const MAX_DENSITY_LIMIT: u64 = 1 << 28;

/// c = u / v with v > 0, not necessarily in lowest terms.
#[derive(Clone, Copy, Debug)]
struct Threshold {
    u: i128,
    v: i128,
}

impl From<Rational> for Threshold {
    fn from(c: Rational) -> Self {
        Self { u: c.numer() as i128, v: c.denom() as i128 }
    }
}

fn too_wide(bits: impl std::fmt::Display) -> Error {
    Error::Capacity(format!("exact comparison needs about {bits} bits"))
}

fn pow_checked(base: &Natural, exp: i128) -> Result<Natural> {
    let bits = base.bits() as i128 * exp;
    if bits > MAX_EXACT_BITS as i128 {
        return Err(too_wide(bits));
    }
    Ok(base.pow(exp as u32))
}

/// Orders a * 2^s against b * 2^t. Bit lengths settle most cases before any
/// shift is materialized.
fn cmp_scaled(a: &Natural, s: i128, b: &Natural, t: i128) -> Result<Ordering> {
    let la = a.bits() as i128 + s;
    let lb = b.bits() as i128 + t;
    if la != lb {
        return Ok(la.cmp(&lb));
    }
    let shift = s - t;
    if shift.unsigned_abs() > MAX_EXACT_BITS as u128 {
        return Err(too_wide(shift));
    }
    Ok(if shift >= 0 {
        (a << shift as usize).cmp(b)
    } else {
        a.cmp(&(b << (-shift) as usize))
    })
}

fn in_v_scaled(n: &Natural, lambda: u64, c: Threshold) -> Result<bool> {
    // n > 2^(lambda - u/v)  <=>  n^v > 2^(v lambda - u)
    let e = c.v * lambda as i128 - c.u;
    if e < 0 {
        return Ok(true);
    }
    Ok(cmp_scaled(&pow_checked(n, c.v)?, 0, &BigUint::one(), e)? == Ordering::Greater)
}

fn in_t_scaled(q: &Natural, lambda: u64, c: Threshold) -> Result<bool> {
    // lambda - log2 q > u/v + 1  <=>  2^(v lambda) > q^v 2^(u + v)
    let qv = pow_checked(q, c.v)?;
    Ok(cmp_scaled(&BigUint::one(), c.v * lambda as i128, &qv, c.u + c.v)? == Ordering::Greater)
}

fn odd_part_scaled(t: &Natural, lambda_sum: u64, c: Threshold) -> Result<bool> {
    // sum a_i eta(p_i) < c + 1  <=>  t^v 2^(u + v) > 2^(v sum a_i lambda(p_i))
    let tv = pow_checked(t, c.v)?;
    Ok(cmp_scaled(&tv, c.u + c.v, &BigUint::one(), c.v * lambda_sum as i128)? == Ordering::Greater)
}

fn k_max_scaled(q: &Natural, lambda: u64, c: Threshold) -> Result<u64> {
    if c.u <= -c.v {
        return Ok(0);
    }
    // largest j with j eta(q) <= c + 1, i.e. 2^(v j lambda) <= q^(v j) 2^(u + v)
    let qv = pow_checked(q, c.v)?;
    let mut qvj = BigUint::one();
    let mut j: u64 = 0;
    loop {
        let next = j + 1;
        qvj *= &qv;
        if qvj.bits() > MAX_EXACT_BITS {
            return Err(too_wide(qvj.bits()));
        }
        let lhs_exp = c.v * next as i128 * lambda as i128;
        if cmp_scaled(&BigUint::one(), lhs_exp, &qvj, c.u + c.v)? == Ordering::Greater {
            return Ok(j);
        }
        j = next;
    }
}

/// `n` in V(c), given lambda(n).
pub fn in_v_with_lambda(n: &Natural, lambda: u64, c: Rational) -> Result<bool> {
    in_v_scaled(n, lambda, c.into())
}

/// Whether n > 2^(lambda(n) - c).
pub fn in_v(n: &Natural, c: Rational) -> Result<bool> {
    in_v_with_lambda(n, lambda_additive(n)?, c)
}

/// Decides sum a_i eta(p_i) < c + 1 for the odd number t = prod p_i^a_i > 1.
///
/// For even n = 2^a t this is equivalent to n in V(c), whatever a is.
pub fn lemma25_lhs_compare(t: &Factorization, c: Rational) -> Result<bool> {
    if t.is_one() {
        return domain("t must exceed 1");
    }
    if t.exponent_of(&BigUint::from(2u32)) > 0 {
        return domain("t must be odd");
    }
    odd_part_scaled(&t.value(), lambda_factored(t), c.into())
}

fn require_odd_prime(q: &Natural) -> Result<()> {
    if !q.bit(0) || !is_prime(q) {
        return domain(format!("{q} is not an odd prime"));
    }
    Ok(())
}

/// `q` in T(c), given lambda(q). The caller vouches that q is an odd prime.
pub fn in_t_with_lambda(q: &Natural, lambda: u64, c: Rational) -> Result<bool> {
    in_t_scaled(q, lambda, c.into())
}

/// Whether the odd prime `q` has eta(q) > c + 1. Equality cannot occur
/// since log2(q) is irrational.
pub fn in_t(q: &Natural, c: Rational) -> Result<bool> {
    require_odd_prime(q)?;
    in_t_with_lambda(q, big_d(q)?, c)
}

/// floor((c + 1) / eta(q)) for an odd prime q; 0 when c <= -1.
///
/// 2^a q^b lies in V(c) exactly when b <= k_max(q, c).
pub fn k_max(q: &Natural, c: Rational) -> Result<u64> {
    require_odd_prime(q)?;
    k_max_scaled(q, big_d(q)?, c.into())
}

/// One row of a density table: b_c(x) odd primes of T(c) below x among the
/// pi(x) primes (2 included).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityRow {
    pub x: u64,
    pub b_c: u64,
    pub pi_x: u64,
}

impl DensityRow {
    /// The exact ratio as "b_c/pi".
    pub fn ratio(&self) -> String {
        format!("{}/{}", self.b_c, self.pi_x)
    }

    /// Display-only decimal rendering of the ratio.
    pub fn ratio_f64(&self) -> f64 {
        if self.pi_x == 0 {
            0.0
        } else {
            self.b_c as f64 / self.pi_x as f64
        }
    }
}

/// Primality flags and a D table over 1..=limit, shared by the bulk
/// queries below.
pub struct DensityContext {
    table: SieveTable,
    prime: Vec<bool>,
}

impl DensityContext {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > MAX_DENSITY_LIMIT {
            return Err(Error::Capacity(format!(
                "density limit {limit} exceeds {MAX_DENSITY_LIMIT}"
            )));
        }
        let limit = limit.max(2);
        Ok(Self {
            table: build_sieve(limit)?,
            prime: prime_flags(limit as usize),
        })
    }

    pub fn limit(&self) -> u64 {
        self.table.limit()
    }

    pub fn table(&self) -> &SieveTable {
        &self.table
    }

    pub fn is_prime(&self, n: u64) -> bool {
        self.prime.get(n as usize).copied().unwrap_or(false)
    }

    fn check_range(&self, x: u64) -> Result<()> {
        if x > self.limit() {
            return Err(Error::Capacity(format!("x = {x} exceeds the table limit {}", self.limit())));
        }
        Ok(())
    }

    /// In-T test for an odd prime within the table.
    pub fn in_t(&self, q: u64, c: Rational) -> Result<bool> {
        self.check_range(q)?;
        if q % 2 == 0 || !self.is_prime(q) {
            return domain(format!("{q} is not an odd prime"));
        }
        in_t_with_lambda(&BigUint::from(q), self.table.d(q).unwrap() as u64, c)
    }

    /// Odd primes of T(c) up to `x`, ascending.
    pub fn t_members(&self, c: Rational, x: u64) -> Result<Vec<u64>> {
        self.check_range(x)?;
        let mut out = Vec::new();
        for q in (3..=x).step_by(2).filter(|&q| self.is_prime(q)) {
            if self.in_t(q, c)? {
                out.push(q);
            }
        }
        Ok(out)
    }

    pub fn density_table(&self, c: Rational, xs: &[u64]) -> Result<Vec<DensityRow>> {
        if xs.windows(2).any(|w| w[0] > w[1]) {
            return domain("xs must be ascending");
        }
        let Some(&top) = xs.last() else {
            return Ok(Vec::new());
        };
        self.check_range(top)?;
        let mut rows = Vec::with_capacity(xs.len());
        let (mut b_c, mut pi_x) = (0u64, 0u64);
        let mut next = 1u64;
        for &x in xs {
            while next <= x {
                if self.is_prime(next) {
                    pi_x += 1;
                    if next > 2 && self.in_t(next, c)? {
                        b_c += 1;
                    }
                }
                next += 1;
            }
            rows.push(DensityRow { x, b_c, pi_x });
        }
        Ok(rows)
    }

    /// Checks that every prime p <= x with p = -1 (mod q) lies in T(c), for
    /// q the smallest element of T(c) and for every q in T(c) up to sqrt(x).
    pub fn closure_check(&self, c: Rational, x: u64) -> Result<ClosureReport> {
        self.check_range(x)?;
        let members = self.t_members(c, x)?;
        let mut report = ClosureReport {
            c,
            x,
            q0: members.first().copied(),
            moduli: 0,
            primes_checked: 0,
            violations: Vec::new(),
        };
        let Some(q0) = report.q0 else {
            return Ok(report);
        };
        let mut moduli: Vec<u64> = members
            .iter()
            .copied()
            .take_while(|&q| q.saturating_mul(q) <= x)
            .collect();
        if moduli.first() != Some(&q0) {
            moduli.insert(0, q0);
        }
        for &q in &moduli {
            report.moduli += 1;
            let mut p = 2 * q - 1;
            while p <= x {
                if self.is_prime(p) {
                    report.primes_checked += 1;
                    if !self.in_t(p, c)? {
                        report.violations.push((q, p));
                    }
                }
                p += 2 * q;
            }
        }
        Ok(report)
    }
}

/// b_c(x) and pi(x) for each x in the ascending list `xs`.
pub fn density_table(c: Rational, xs: &[u64]) -> Result<Vec<DensityRow>> {
    let top = xs.iter().copied().max().unwrap_or(2);
    DensityContext::new(top)?.density_table(c, xs)
}

/// Outcome of [`lemma26_closure_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub c: Rational,
    pub x: u64,
    /// Smallest element of T(c), if any lies below x.
    pub q0: Option<u64>,
    /// Number of moduli q examined.
    pub moduli: u64,
    pub primes_checked: u64,
    /// Pairs (q, p) with p = -1 (mod q) prime but outside T(c).
    pub violations: Vec<(u64, u64)>,
}

impl ClosureReport {
    /// False when T(c) has no element up to x.
    pub fn conclusive(&self) -> bool {
        self.q0.is_some()
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Primes congruent to -1 modulo an element of T(c) stay in T(c); checked
/// up to `x`.
pub fn lemma26_closure_check(c: Rational, x: u64) -> Result<ClosureReport> {
    DensityContext::new(x)?.closure_check(c, x)
}

/// A prime omega = 2 l 3^(k+1) - 1 in T(c), with k = k_max(3, c).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TWitness {
    pub k: u64,
    pub ell: u64,
    pub omega: Natural,
}

/// Searches l = 1, 2, ... for a prime 2 l 3^(k+1) - 1 not exceeding
/// `search_cap`, and confirms it lies in T(c).
pub fn t_witness(c: Rational, search_cap: &Natural) -> Result<TWitness> {
    let three = BigUint::from(3u32);
    let k = k_max(&three, c)?;
    let step = BigUint::from(2u32) * three.pow(k as u32 + 1);
    let mut omega = &step - 1u32;
    let mut ell = 1u64;
    while &omega <= search_cap {
        if is_prime(&omega) {
            if !in_t(&omega, c)? {
                return Err(Error::Inconsistent(format!("witness {omega} is not in T({c})")));
            }
            return Ok(TWitness { k, ell, omega });
        }
        omega += &step;
        ell += 1;
    }
    Err(Error::Exhausted(format!(
        "no prime 2l*3^{} - 1 up to {search_cap}",
        k + 1
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::lambda_additive_u64;
    use crate::factor::factorize_u64;

    fn n(x: u64) -> Natural {
        BigUint::from(x)
    }
    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn in_v_examples() {
        for k in 0..20u32 {
            assert!(in_v(&(n(1) << (k as usize + 1)), r("0")).unwrap());
        }
        assert!(!in_v(&n(3), r("0")).unwrap());
        assert!(in_v(&n(12), r("0")).unwrap());
        // right side below 1
        assert!(in_v(&n(3), r("5")).unwrap());
    }

    #[test]
    fn odd_part_examples() {
        let f = |x| Factorization::from(factorize_u64(x));
        assert!(lemma25_lhs_compare(&f(3), r("0")).unwrap());
        assert!(!lemma25_lhs_compare(&f(27), r("0")).unwrap());
        assert!(lemma25_lhs_compare(&f(9), r("0")).unwrap());
        assert!(matches!(lemma25_lhs_compare(&f(6), r("0")), Err(Error::Domain(_))));
        assert!(matches!(lemma25_lhs_compare(&f(1), r("0")), Err(Error::Domain(_))));
    }

    #[test]
    fn in_t_examples() {
        assert!(in_t(&n(3), r("-1")).unwrap());
        assert!(in_t(&n(29), r("0")).unwrap());
        assert!(!in_t(&n(31), r("0")).unwrap());
        assert!(matches!(in_t(&n(15), r("0")), Err(Error::Domain(_))));
        assert!(matches!(in_t(&n(2), r("0")), Err(Error::Domain(_))));
    }

    #[test]
    fn k_max_examples() {
        assert_eq!(k_max(&n(3), r("0")).unwrap(), 2);
        assert_eq!(k_max(&n(29), r("0")).unwrap(), 0);
        assert_eq!(k_max(&n(7), r("-1")).unwrap(), 0);
        assert_eq!(k_max(&n(3), r("-3")).unwrap(), 0);
    }

    #[test]
    fn k_max_agrees_with_v_membership() {
        for q in [3u64, 5, 7, 11, 13, 29, 53] {
            for c in ["0", "1/2", "2", "-1/2"] {
                let km = k_max(&n(q), r(c)).unwrap();
                for beta in 1..=km + 1 {
                    let m = n(2) * n(q).pow(beta as u32);
                    assert_eq!(in_v(&m, r(c)).unwrap(), beta <= km, "q={q} c={c} beta={beta}");
                }
            }
        }
    }

    #[test]
    fn scaled_representations_agree() {
        let cases = [(-1i128, 2i128), (0, 1), (1, 2), (2, 1), (7, 3), (-5, 4)];
        for (u, v) in cases {
            let base = Threshold { u, v };
            let scaled = Threshold { u: 3 * u, v: 3 * v };
            for x in 1..3000u64 {
                let lam = lambda_additive_u64(x);
                assert_eq!(
                    in_v_scaled(&n(x), lam, base).unwrap(),
                    in_v_scaled(&n(x), lam, scaled).unwrap()
                );
                if x % 2 == 1 && x > 1 {
                    assert_eq!(
                        odd_part_scaled(&n(x), lam, base).unwrap(),
                        odd_part_scaled(&n(x), lam, scaled).unwrap()
                    );
                    if crate::factor::is_prime_u64(x) {
                        assert_eq!(
                            in_t_scaled(&n(x), lam, base).unwrap(),
                            in_t_scaled(&n(x), lam, scaled).unwrap()
                        );
                        assert_eq!(
                            k_max_scaled(&n(x), lam, base).unwrap(),
                            k_max_scaled(&n(x), lam, scaled).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn density_examples() {
        let rows = density_table(r("0"), &[100]).unwrap();
        assert_eq!(rows, vec![DensityRow { x: 100, b_c: 4, pi_x: 25 }]);
        assert_eq!(rows[0].ratio(), "4/25");
        let ctx = DensityContext::new(100).unwrap();
        assert_eq!(ctx.t_members(r("0"), 100).unwrap(), vec![29, 53, 59, 89]);
        let rows = density_table(r("-2"), &[10, 100]).unwrap();
        assert_eq!(rows[1], DensityRow { x: 100, b_c: 24, pi_x: 25 });
        assert_eq!(rows[0], DensityRow { x: 10, b_c: 3, pi_x: 4 });
        assert!(matches!(density_table(r("0"), &[100, 10]), Err(Error::Domain(_))));
        assert!(matches!(density_table(r("0"), &[MAX_DENSITY_LIMIT + 1]), Err(Error::Capacity(_))));
    }

    #[test]
    fn closure_examples() {
        let rep = lemma26_closure_check(r("-1"), 100).unwrap();
        assert_eq!(rep.q0, Some(3));
        assert!(rep.holds());
        let rep = lemma26_closure_check(r("0"), 100_000).unwrap();
        assert_eq!(rep.q0, Some(29));
        assert!(rep.holds() && rep.primes_checked > 0);
        let rep = lemma26_closure_check(r("10"), 10_000).unwrap();
        assert!(rep.holds());
    }

    #[test]
    fn witness_examples() {
        let cap = n(1_000_000);
        let w = t_witness(r("0"), &cap).unwrap();
        assert_eq!((w.k, w.ell, w.omega.clone()), (2, 1, n(53)));
        let w = t_witness(r("-1/2"), &cap).unwrap();
        assert_eq!((w.k, w.omega.clone()), (1, n(17)));
        let w = t_witness(r("-1"), &cap).unwrap();
        assert_eq!((w.k, w.omega.clone()), (0, n(5)));
        assert!(matches!(t_witness(r("0"), &n(50)), Err(Error::Exhausted(_))));
    }
}
