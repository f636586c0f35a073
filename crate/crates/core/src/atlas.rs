//! Bulk lambda over 1..=N and the structure of the classes it induces.
//!
//! Class k is the set of n with lambda(n) = k. For k >= 2 its members lie
//! between g(k) and 2^(k+1), and each class splits into three sections at
//! the thresholds 2g(k) and 2^k.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::arith::lambda_additive;
use crate::error::{domain, Error, Result};
use crate::factor::{factorize_u64, is_prime_u64, Factorization};
use crate::report::{Claim, LargestOdd, VerificationReport};
use crate::Natural;

/// Largest sieve limit accepted by [`build_sieve`].
pub const MAX_SIEVE_LIMIT: u64 = u32::MAX as u64 - 1;

/// g(k) for k >= 2: 5^(k/3), 9 * 5^((k-4)/3) or 3 * 5^((k-2)/3) according
/// to k mod 3. The smallest odd number in class k.
pub fn g(k: u64) -> Result<Natural> {
    if k < 2 {
        return domain(format!("g is defined for k >= 2, got {k}"));
    }
    let five = BigUint::from(5u32);
    Ok(match k % 3 {
        0 => five.pow((k / 3) as u32),
        1 => BigUint::from(9u32) * five.pow(((k - 4) / 3) as u32),
        _ => BigUint::from(3u32) * five.pow(((k - 2) / 3) as u32),
    })
}

/// g(k) as a `u128`, `None` on overflow or k < 2.
pub fn g_u128(k: u64) -> Option<u128> {
    if k < 2 {
        return None;
    }
    let (mult, e) = match k % 3 {
        0 => (1u128, k / 3),
        1 => (9, (k - 4) / 3),
        _ => (3, (k - 2) / 3),
    };
    5u128.checked_pow(u32::try_from(e).ok()?)?.checked_mul(mult)
}

/// D(n) for every 1 <= n <= N.
#[derive(Clone, PartialEq, Eq)]
pub struct SieveTable {
    /// `d[n]` for `1 <= n <= limit`; slot 0 is unused and holds 0.
    d: Vec<u32>,
}

impl fmt::Debug for SieveTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SieveTable").field("limit", &self.limit()).finish()
    }
}

/// Computes D(n) for all n <= `limit` with a linear smallest-prime-factor
/// sieve. Composites use D(n) = D(spf) + D(n / spf); an odd prime p uses
/// D(p) = D(p + 1) = 1 + D((p + 1) / 2), already known since (p + 1) / 2 < p.
pub fn build_sieve(limit: u64) -> Result<SieveTable> {
    if limit < 2 {
        return domain(format!("sieve limit must be at least 2, got {limit}"));
    }
    if limit > MAX_SIEVE_LIMIT {
        return Err(Error::Capacity(format!(
            "sieve limit {limit} exceeds {MAX_SIEVE_LIMIT}"
        )));
    }
    let n = limit as usize;
    let alloc = |len: usize| -> Result<Vec<u32>> {
        let mut v = Vec::new();
        v.try_reserve_exact(len)
            .map_err(|e| Error::Capacity(format!("sieve of {limit} entries: {e}")))?;
        v.resize(len, 0);
        Ok(v)
    };
    let mut d = alloc(n + 1)?;
    let mut spf = alloc(n + 1)?;
    let mut primes: Vec<u32> = Vec::new();
    d[2] = 1;
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
            if i > 2 {
                d[i] = 1 + d[(i + 1) / 2];
            }
        } else {
            let p = spf[i] as usize;
            d[i] = d[p] + d[i / p];
        }
        let si = spf[i];
        for &p in &primes {
            if p > si || i * p as usize > n {
                break;
            }
            spf[i * p as usize] = p;
        }
    }
    Ok(SieveTable { d })
}

impl SieveTable {
    pub(crate) fn from_d_values(d_values: Vec<u32>) -> Result<Self> {
        if d_values.len() < 2 || d_values[0] != 0 || d_values[1] != 1 {
            return Err(Error::Format("D(1) = 0 and D(2) = 1 must hold".into()));
        }
        let mut d = Vec::with_capacity(d_values.len() + 1);
        d.push(0);
        d.extend(d_values);
        Ok(Self { d })
    }

    pub fn limit(&self) -> u64 {
        (self.d.len() - 1) as u64
    }

    /// D(n), or `None` outside 1..=limit.
    pub fn d(&self, n: u64) -> Option<u32> {
        if n == 0 {
            return None;
        }
        self.d.get(n as usize).copied()
    }

    /// lambda(n), or `None` outside 1..=limit.
    pub fn lambda(&self, n: u64) -> Option<u32> {
        self.d(n).map(|d| if n % 2 == 0 { d - 1 } else { d })
    }

    /// D(1), ..., D(limit).
    pub fn d_values(&self) -> &[u32] {
        &self.d[1..]
    }

    /// Sum of all D-values modulo 2^64.
    pub fn checksum(&self) -> u64 {
        self.d_values()
            .iter()
            .fold(0u64, |acc, &v| acc.wrapping_add(v as u64))
    }

    /// Whether the table covers 2^e.
    pub fn covers_pow2(&self, e: u32) -> bool {
        e < 64 && self.limit() >= 1u64 << e
    }

    fn require_pow2(&self, e: u32) -> Result<()> {
        if self.covers_pow2(e) {
            Ok(())
        } else {
            Err(Error::InsufficientSieve {
                limit: self.limit(),
                needed_log2: e,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SectionLabel {
    I,
    II,
    III,
}

impl fmt::Display for SectionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SectionLabel::I => "I",
            SectionLabel::II => "II",
            SectionLabel::III => "III",
        })
    }
}

fn impossible<T>(n: impl fmt::Display, k: u64) -> Result<T> {
    Err(Error::Inconsistent(format!("{n} cannot lie in class {k}")))
}

/// Section of `n` within its class `k = lambda(n)`.
///
/// Class 0 is {1, 2} with 1 in Section I and 2 in Section III; class 1 is
/// {4}, in Section III. For k >= 2, Section I is [g(k), 2g(k)), Section II
/// is [2g(k), 2^k) and Section III is (2^k, 2^(k+1)]. A value outside these
/// ranges, or equal to 2^k, contradicts `k = lambda(n)` and is reported as
/// an inconsistency.
pub fn section_of(n: &Natural, k: u64) -> Result<SectionLabel> {
    if let (Some(small), true) = (n.to_u64(), k < 127) {
        return section_of_u64(small, k);
    }
    match k {
        0 | 1 => impossible(n, k),
        _ => {
            let gk = g(k)?;
            let pow = BigUint::one() << k as usize;
            if n < &gk || n > &(&pow << 1usize) || n == &pow {
                impossible(n, k)
            } else if n < &(gk << 1usize) {
                Ok(SectionLabel::I)
            } else if n < &pow {
                Ok(SectionLabel::II)
            } else {
                Ok(SectionLabel::III)
            }
        }
    }
}

/// [`section_of`] for 64-bit `n` and `k < 127`.
pub fn section_of_u64(n: u64, k: u64) -> Result<SectionLabel> {
    match (k, n) {
        (0, 1) => Ok(SectionLabel::I),
        (0, 2) | (1, 4) => Ok(SectionLabel::III),
        (0 | 1, _) => impossible(n, k),
        _ if k >= 127 => section_of(&BigUint::from(n), k),
        _ => {
            let n = n as u128;
            let pow = 1u128 << k;
            match g_u128(k) {
                Some(gk) if n >= gk && n <= 2 * pow && n != pow => {
                    Ok(if n < 2 * gk {
                        SectionLabel::I
                    } else if n < pow {
                        SectionLabel::II
                    } else {
                        SectionLabel::III
                    })
                }
                _ => impossible(n, k),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassMember {
    pub n: u64,
    pub section: SectionLabel,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Extremes {
    pub min_odd: Option<u64>,
    pub min_even: Option<u64>,
    pub max_odd: Option<u64>,
    pub max_even: Option<u64>,
}

impl Extremes {
    fn observe(&mut self, n: u64) {
        let (min, max) = if n % 2 == 1 {
            (&mut self.min_odd, &mut self.max_odd)
        } else {
            (&mut self.min_even, &mut self.max_even)
        };
        if min.map_or(true, |m| n < m) {
            *min = Some(n);
        }
        if max.map_or(true, |m| n > m) {
            *max = Some(n);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassQueryResult {
    pub k: u64,
    /// Members up to the sieve limit, ascending.
    pub members: Vec<ClassMember>,
    pub extremes: Extremes,
    /// True when the sieve reaches 2^(k+1), so no member is missing.
    pub complete: bool,
}

/// All members of class `k` within the table, with section labels.
pub fn class_members(table: &SieveTable, k: u64) -> Result<ClassQueryResult> {
    let mut members = Vec::new();
    let mut extremes = Extremes::default();
    for n in 1..=table.limit() {
        if table.lambda(n) == Some(k as u32) && k <= u32::MAX as u64 {
            members.push(ClassMember {
                n,
                section: section_of_u64(n, k)?,
            });
            extremes.observe(n);
        }
    }
    let complete = k < 63 && table.covers_pow2(k as u32 + 1);
    Ok(ClassQueryResult {
        k,
        members,
        extremes,
        complete,
    })
}

/// B(k), the largest odd number in class k. Needs the table to reach 2^k,
/// beyond which no odd member of class k lies.
pub fn largest_odd_b(table: &SieveTable, k: u64) -> Result<u64> {
    if k == 1 {
        return domain("class 1 contains no odd numbers");
    }
    if k >= 63 {
        return Err(Error::InsufficientSieve {
            limit: table.limit(),
            needed_log2: k as u32,
        });
    }
    table.require_pow2(k as u32)?;
    let top = ((1u64 << k) - 1).max(1);
    (1..=top)
        .rev()
        .step_by(2)
        .find(|&n| table.lambda(n) == Some(k as u32))
        .ok_or_else(|| Error::Inconsistent(format!("no odd member of class {k} below 2^{k}")))
}

/// The smallest multiple of `a` in class `k`, from the closed form:
/// a * g(k - lambda(a)) when k > lambda(a) + 1, and 4a (a odd) or 2a
/// (a even) when k = lambda(a) + 1.
pub fn smallest_multiple_in_class(a: &Natural, k: u64) -> Result<Natural> {
    let la = lambda_additive(a)?;
    if k <= la {
        return domain(format!("no multiple of {a} lies in class {k} <= lambda(a) = {la}"));
    }
    if k == la + 1 {
        let factor = if a.bit(0) { 4u32 } else { 2 };
        return Ok(a * factor);
    }
    Ok(a * g(k - la)?)
}

/// Exact checks of the superadditivity g(m1) g(m2) >= g(m1 + m2) for
/// 2 <= m1, m2 <= `m_max`.
pub fn check_g_superadditive(m_max: u64) -> Claim {
    let mut claim = Claim::new(format!("g(m1) g(m2) >= g(m1 + m2) for 2 <= m1, m2 <= {m_max}"));
    let gs: Vec<Natural> = (0..=2 * m_max)
        .map(|k| g(k).unwrap_or_default())
        .collect();
    for m1 in 2..=m_max {
        for m2 in 2..=m_max {
            let lhs = &gs[m1 as usize] * &gs[m2 as usize];
            claim.check(lhs >= gs[(m1 + m2) as usize], || format!("m1 = {m1}, m2 = {m2}"));
        }
    }
    claim
}

/// The two inequalities on g used at class boundaries, for
/// 3 <= k <= `k_max`: 2g(k-1) >= g(k) + 1 and g(k-1) <= 2^(k-1).
pub fn check_g_boundaries(k_max: u64) -> Vec<Claim> {
    let mut step = Claim::new(format!("2g(k-1) >= g(k) + 1 for 3 <= k <= {k_max}"));
    let mut pow = Claim::new(format!("g(k-1) <= 2^(k-1) for 3 <= k <= {k_max}"));
    for k in 3..=k_max {
        let prev = g(k - 1).expect("k - 1 >= 2");
        let cur = g(k).expect("k >= 2");
        step.check(&prev * 2u32 >= cur + 1u32, || format!("k = {k}"));
        pow.check(prev <= BigUint::one() << (k - 1) as usize, || format!("k = {k}"));
    }
    vec![step, pow]
}

/// Brute-force check of the smallest-multiple formula for 1 <= a <= `a_max`
/// and lambda(a) + 1 <= k <= lambda(a) + `span`, scanning the table for the
/// first multiple of a in each class.
pub fn check_multiples_theorem(table: &SieveTable, a_max: u64, span: u64) -> Result<Claim> {
    let mut claim = Claim::new(format!(
        "smallest multiple of a in class k matches the closed form (a <= {a_max}, span {span})"
    ));
    for a in 1..=a_max {
        let la = table
            .lambda(a)
            .ok_or(Error::InsufficientSieve { limit: table.limit(), needed_log2: 0 })?
            as u64;
        let mut expected = Vec::with_capacity(span as usize);
        for k in la + 1..=la + span {
            let value = smallest_multiple_in_class(&BigUint::from(a), k)?;
            match value.to_u64().filter(|&v| v <= table.limit()) {
                Some(v) => expected.push((k, v)),
                None => {
                    return Err(Error::Capacity(format!(
                        "formula value {value} for a = {a}, k = {k} lies beyond the sieve"
                    )))
                }
            }
        }
        let bound = expected.iter().map(|&(_, v)| v).max().unwrap_or(a);
        let mut first = vec![None; span as usize];
        let mut m = a;
        while m <= bound {
            let lm = table.lambda(m).unwrap() as u64;
            if lm > la && lm <= la + span && first[(lm - la - 1) as usize].is_none() {
                first[(lm - la - 1) as usize] = Some(m);
            }
            m += a;
        }
        for (&(k, v), found) in expected.iter().zip(&first) {
            claim.check(*found == Some(v), || {
                format!("a = {a}, k = {k}: formula {v}, scan {found:?}")
            });
        }
    }
    Ok(claim)
}

fn divisors_u64(n: u64) -> Vec<u64> {
    let f: Factorization = factorize_u64(n).into();
    f.divisors().iter().map(|d| d.to_u64().unwrap()).collect()
}

/// Checks the class structure on a table covering 2^(k_max + 1):
/// extremes of every class 2..=k_max, the parity facts about classes 0
/// and 1, divisor closure of the largest odd members and of Section I,
/// and the inequalities on g.
pub fn verify_class_theorems(table: &SieveTable, k_max: u64) -> Result<VerificationReport> {
    if k_max < 2 {
        return domain("k_max must be at least 2");
    }
    if k_max >= 62 {
        return Err(Error::InsufficientSieve { limit: table.limit(), needed_log2: k_max as u32 + 1 });
    }
    table.require_pow2(k_max as u32 + 1)?;

    let classes = k_max as usize + 1;
    let mut extremes = vec![Extremes::default(); classes];
    let mut no_odd_in_one = Claim::new("no odd number lies in class 1");
    let mut v2_claim = Claim::new("even x in class m has v2(x) != m");
    let mut double = Claim::new("odd n and 2n share a class");
    for n in 1..=table.limit() {
        let lam = table.lambda(n).unwrap();
        if (lam as usize) < classes {
            extremes[lam as usize].observe(n);
        }
        if n % 2 == 1 {
            no_odd_in_one.check(lam != 1, || format!("lambda({n}) = 1"));
            if let Some(l2) = table.lambda(2 * n) {
                double.check(l2 == lam, || format!("lambda({n}) = {lam}, lambda({}) = {l2}", 2 * n));
            }
        } else {
            v2_claim.check(n.trailing_zeros() != lam, || format!("x = {n}, lambda = {lam}"));
        }
    }

    let mut min_odd = Claim::new(format!("smallest odd in class k is g(k), 2 <= k <= {k_max}"));
    let mut min_even = Claim::new(format!("smallest even in class k is 2g(k), 2 <= k <= {k_max}"));
    let mut max_even = Claim::new(format!("largest even in class k is 2^(k+1), 2 <= k <= {k_max}"));
    let mut max_odd = Claim::new(format!("largest odd in class k is below 2^k, 2 <= k <= {k_max}"));
    for k in 2..=k_max {
        let e = extremes[k as usize];
        let gk = g_u128(k).unwrap() as u64;
        min_odd.check(e.min_odd == Some(gk), || format!("k = {k}: {:?}", e.min_odd));
        min_even.check(e.min_even == Some(2 * gk), || format!("k = {k}: {:?}", e.min_even));
        max_even.check(e.max_even == Some(1 << (k + 1)), || format!("k = {k}: {:?}", e.max_even));
        max_odd.check(e.max_odd.is_some_and(|m| m < 1 << k), || format!("k = {k}: {:?}", e.max_odd));
    }

    // B(j) for j <= k_max; exact because the table reaches 2^k_max
    let mut largest_odd = Vec::new();
    let mut b_set = HashSet::new();
    for k in (0..=k_max).filter(|&k| k != 1) {
        let b = extremes[k as usize].max_odd.ok_or_else(|| {
            Error::Inconsistent(format!("class {k} has no odd member"))
        })?;
        b_set.insert(b);
        largest_odd.push(LargestOdd { k, b, prime: is_prime_u64(b) });
    }
    let mut b_closure = Claim::new(format!("every divisor of B(k) is some B(j), 2 <= k <= {k_max}"));
    for entry in largest_odd.iter().filter(|e| e.k >= 2) {
        for d in divisors_u64(entry.b) {
            b_closure.check(b_set.contains(&d), || format!("{d} divides B({}) = {}", entry.k, entry.b));
        }
    }

    let s1_bound = 2 * g_u128(k_max).unwrap() as u64;
    let mut s1_closure = Claim::new(format!("every divisor of an S1 element <= {s1_bound} is in S1"));
    for n in 1..=s1_bound.min(table.limit()) {
        let lam = table.lambda(n).unwrap() as u64;
        if section_of_u64(n, lam)? != SectionLabel::I {
            continue;
        }
        for d in divisors_u64(n) {
            let ld = table.lambda(d).unwrap() as u64;
            let in_s1 = section_of_u64(d, ld)? == SectionLabel::I;
            s1_closure.check(in_s1, || format!("{d} divides {n} but lies outside Section I"));
        }
    }

    let mut claims = vec![
        no_odd_in_one,
        v2_claim,
        double,
        min_odd,
        min_even,
        max_even,
        max_odd,
        b_closure,
        s1_closure,
        check_g_superadditive(2 * k_max),
    ];
    claims.extend(check_g_boundaries(k_max.max(60)));
    Ok(VerificationReport { claims, largest_odd })
}
