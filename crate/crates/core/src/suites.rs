//! Verification suites run by `psibar verify`.
//!
//! Each suite recomputes a family of statements about lambda, the classes,
//! the sets V(c) and T(c) or the Mersenne witnesses over a finite range and
//! reports one [`Claim`] per statement.

use num_bigint::BigUint;
use num_traits::{Pow, ToPrimitive};

use crate::arith::{
    check_white_conditions, lambda_additive_u64, lambda_trajectory, ArithFn, WhiteViolation,
};
use crate::atlas::{
    check_multiples_theorem, g_u128, section_of_u64, verify_class_theorems, SectionLabel,
    SieveTable,
};
use crate::density::{
    in_t_with_lambda, in_v, in_v_with_lambda, k_max, lemma25_lhs_compare, t_witness,
    DensityContext,
};
use crate::error::{Error, Result};
use crate::factor::{factorize_u64, is_prime_u64, Factorization};
use crate::mersenne::{
    bound_report, lemma24_check, mersenne_witness, skupien_rep, witness_class_direct,
    MersennePair,
};
use crate::rational::Rational;
use crate::report::{Claim, VerificationReport};

/// Exponent pairs of Mersenne primes checked by the Mersenne suite.
pub const MERSENNE_PAIRS: [(u32, u32); 5] = [(2, 3), (2, 5), (3, 5), (5, 7), (7, 13)];

/// The fixed values of c in the odd-part cross-check, before the
/// caller's own c is added.
pub fn equivalence_parameters(extra: Rational) -> Vec<Rational> {
    let mut cs: Vec<Rational> = ["-1/2", "0", "1/2", "2"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    if !cs.contains(&extra) {
        cs.push(extra);
    }
    cs
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn lambda_at(table: &SieveTable, n: u64) -> u64 {
    table.lambda(n).expect("n within the table") as u64
}

/// Section III of the class structure coincides with V(0), n <= limit.
pub fn s3_equals_v0(table: &SieveTable) -> Result<Claim> {
    let zero = Rational::integer(0);
    let mut claim = Claim::new(format!("Section III = V(0) for n <= {}", table.limit()));
    for n in 1..=table.limit() {
        let lam = lambda_at(table, n);
        let s3 = section_of_u64(n, lam)? == SectionLabel::III;
        let v0 = in_v_with_lambda(&big(n), lam, zero)?;
        claim.check(s3 == v0, || format!("n = {n}: section III {s3}, in V(0) {v0}"));
    }
    Ok(claim)
}

/// For even n = 2^a t <= limit: n in V(c) exactly when the sum of
/// a_i eta(p_i) over t = prod p_i^a_i is below c + 1.
pub fn odd_part_equivalence(table: &SieveTable, cs: &[Rational]) -> Result<Claim> {
    let list: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
    let mut claim = Claim::new(format!(
        "even n <= {}: n in V(c) iff sum a_i eta(p_i) < c + 1, c in {{{}}}",
        table.limit(),
        list.join(", ")
    ));
    for n in (2..=table.limit()).step_by(2) {
        let t = n >> n.trailing_zeros();
        let lam = lambda_at(table, n);
        let factors = (t > 1).then(|| Factorization::from(factorize_u64(t)));
        for &c in cs {
            let lhs = in_v_with_lambda(&big(n), lam, c)?;
            // empty sum when t = 1
            let rhs = match &factors {
                Some(f) => lemma25_lhs_compare(f, c)?,
                None => !c.at_most_minus_one(),
            };
            claim.check(lhs == rhs, || format!("n = {n}, c = {c}: in V {lhs}, sum test {rhs}"));
        }
    }
    Ok(claim)
}

/// Membership of 2^a t in V(c) does not depend on a, for odd t <= t_max
/// and 1 <= a <= a_max.
pub fn power_of_two_independence(t_max: u64, a_max: u32, cs: &[Rational]) -> Result<Claim> {
    let mut claim = Claim::new(format!(
        "2^a t in V(c) independent of a for odd t <= {t_max}, 1 <= a <= {a_max}"
    ));
    for t in (1..=t_max).step_by(2) {
        for &c in cs {
            let mut first = None;
            for a in 1..=a_max {
                let n = t << a;
                let member = in_v_with_lambda(&big(n), lambda_additive_u64(n), c)?;
                let expect = *first.get_or_insert(member);
                claim.check(member == expect, || format!("t = {t}, c = {c}: differs at a = {a}"));
            }
        }
    }
    Ok(claim)
}

/// Every even divisor of an even element of V(0) lies in V(0).
pub fn even_divisor_closure(table: &SieveTable, bound: u64) -> Result<Claim> {
    let zero = Rational::integer(0);
    let bound = bound.min(table.limit());
    let mut claim = Claim::new(format!("even divisors of even elements of V(0) <= {bound} stay in V(0)"));
    for n in (2..=bound).step_by(2) {
        if !in_v_with_lambda(&big(n), lambda_at(table, n), zero)? {
            continue;
        }
        let f = Factorization::from(factorize_u64(n));
        for d in f.divisors() {
            let d = d.to_u64().unwrap();
            if d % 2 == 0 {
                let ok = in_v_with_lambda(&big(d), lambda_at(table, d), zero)?;
                claim.check(ok, || format!("{d} divides {n} but is outside V(0)"));
            }
        }
    }
    Ok(claim)
}

/// eta(p) > 0 for odd primes p <= bound, that is, every odd prime lies in
/// T(-1).
pub fn eta_positive(ctx: &DensityContext, bound: u64) -> Result<Claim> {
    let bound = bound.min(ctx.limit());
    let mut claim = Claim::new(format!("every odd prime p <= {bound} has eta(p) > 0"));
    for p in (3..=bound).step_by(2).filter(|&p| ctx.is_prime(p)) {
        let ok = ctx.in_t(p, Rational::integer(-1))?;
        claim.check(ok, || format!("p = {p}"));
    }
    Ok(claim)
}

/// For odd primes q <= q_max: 2 q^b lies in V(c) exactly for b <= k_max,
/// and for q <= scan_q no even element of V(c) within the table is
/// divisible by q^(k_max + 1).
pub fn k_max_consistency(
    ctx: &DensityContext,
    cs: &[Rational],
    q_max: u64,
    scan_q: u64,
) -> Result<Claim> {
    let limit = ctx.limit();
    let mut claim = Claim::new(format!(
        "q^b divides an even element of V(c) iff b <= k_max(q, c), odd primes q <= {q_max}"
    ));
    for q in (3..=q_max).step_by(2).filter(|&q| is_prime_u64(q)) {
        let qb = big(q);
        for &c in cs {
            let k = k_max(&qb, c)?;
            for b in 1..=k + 1 {
                let n = Pow::pow(&qb, b as u32) << 1usize;
                let member = in_v(&n, c)?;
                claim.check(member == (b <= k), || {
                    format!("q = {q}, c = {c}, k_max = {k}: 2 q^{b} in V(c) is {member}")
                });
            }
            if q > scan_q {
                continue;
            }
            let Some(step) = q
                .checked_pow(k as u32 + 1)
                .and_then(|m| m.checked_mul(2))
                .filter(|&s| s <= limit)
            else {
                continue;
            };
            for m in (step..=limit).step_by(step as usize) {
                let member = in_v_with_lambda(&big(m), lambda_at(ctx.table(), m), c)?;
                claim.check(!member, || {
                    format!("{m} in V({c}) is divisible by {q}^{}", k + 1)
                });
            }
        }
    }
    Ok(claim)
}

/// Every prime p <= x with p = -1 (mod q) lies in T(c), for q the least
/// element of T(c) and every q in T(c) up to sqrt(x).
pub fn closure_claim(ctx: &DensityContext, c: Rational, x: u64) -> Result<Claim> {
    let report = ctx.closure_check(c, x)?;
    let mut claim = Claim::new(format!(
        "primes p <= {x} with p = -1 mod q, q in T({c}), lie in T({c})"
    ));
    match report.q0 {
        None => {
            claim = claim.with_note(format!("inconclusive: T({c}) has no element up to {x}"));
        }
        Some(q0) => {
            claim.checked = report.primes_checked;
            if let Some(&(q, p)) = report.violations.first() {
                claim.passed = false;
                claim.counterexample = Some(format!("q = {q}, p = {p}"));
            }
            claim = claim.with_note(format!(
                "least element of T({c}) is {q0}; {} moduli",
                report.moduli
            ));
        }
    }
    Ok(claim)
}

/// The prime omega = 2 l 3^(k+1) - 1 with k = k_max(3, c) lies in T(c).
pub fn witness_claim(c: Rational, max_ell: u64) -> Result<Claim> {
    let three = big(3);
    let k = k_max(&three, c)?;
    let step: BigUint = Pow::pow(&three, k as u32 + 1) << 1usize;
    let cap = &step * max_ell;
    let mut claim = Claim::new(format!("a prime 2 l 3^(k+1) - 1 with k = k_max(3, {c}) lies in T({c})"));
    match t_witness(c, &cap) {
        Ok(w) => {
            let form = (&w.omega + 1u32) % &step == BigUint::default();
            let prime = crate::factor::is_prime(&w.omega);
            let in_t = in_t_with_lambda(&w.omega, lambda_trajectory(&w.omega)?, c)?;
            claim.check(form && prime && in_t, || format!("omega = {}", w.omega));
            claim = claim.with_note(format!("omega = {}, k = {}, l = {}", w.omega, w.k, w.ell));
        }
        Err(Error::Exhausted(_)) => {
            claim = claim.with_note(format!("inconclusive: no prime found with l <= {max_ell}"));
        }
        Err(e) => return Err(e),
    }
    Ok(claim)
}

/// Density rows at powers of ten up to the table limit: b_c <= pi, both
/// counts nondecreasing, and both recounted independently.
pub fn density_rows_claim(ctx: &DensityContext, c: Rational) -> Result<Claim> {
    let limit = ctx.limit();
    let mut xs: Vec<u64> = std::iter::successors(Some(100u64), |x| x.checked_mul(10))
        .take_while(|&x| x < limit)
        .collect();
    xs.push(limit);
    let rows = ctx.density_table(c, &xs)?;
    let mut claim = Claim::new(format!("density rows for c = {c} are consistent and recountable"));
    let mut prev = (0, 0);
    for row in &rows {
        claim.check(row.b_c <= row.pi_x, || format!("x = {}: b_c > pi", row.x));
        claim.check(row.b_c >= prev.0 && row.pi_x >= prev.1, || format!("x = {}: counts decrease", row.x));
        prev = (row.b_c, row.pi_x);
    }
    let last = rows.last().unwrap();
    let pi = (2..=last.x).filter(|&n| is_prime_u64(n)).count() as u64;
    claim.check(pi == last.pi_x, || format!("pi({}) = {}, recount {pi}", last.x, last.pi_x));
    let b = ctx.t_members(c, last.x)?.len() as u64;
    claim.check(b == last.b_c, || format!("b_c({}) = {}, recount {b}", last.x, last.b_c));
    let data: Vec<String> = rows
        .iter()
        .map(|r| format!("{}: {} ({:.6})", r.x, r.ratio(), r.ratio_f64()))
        .collect();
    Ok(claim.with_note(data.join("; ")))
}

/// The V(c)/T(c) suite over 1..=limit.
pub fn density_suite(c: Rational, limit: u64) -> Result<VerificationReport> {
    let ctx = DensityContext::new(limit)?;
    let cs = equivalence_parameters(c);
    let mut pow2_cs = vec![Rational::integer(0), Rational::integer(1)];
    if !pow2_cs.contains(&c) {
        pow2_cs.push(c);
    }
    let claims = vec![
        s3_equals_v0(ctx.table())?,
        odd_part_equivalence(ctx.table(), &cs)?,
        power_of_two_independence(10_000.min(ctx.limit()), 10, &pow2_cs)?,
        even_divisor_closure(ctx.table(), 100_000)?,
        eta_positive(&ctx, 100_000)?,
        k_max_consistency(&ctx, &cs, 1000.min(ctx.limit()), 100)?,
        closure_claim(&ctx, c, ctx.limit())?,
        witness_claim(c, 100_000)?,
        density_rows_claim(&ctx, c)?,
    ];
    Ok(VerificationReport { claims, largest_odd: Vec::new() })
}

/// (2^q - 1)^p > (2^p - 1)^q for each pair in [`MERSENNE_PAIRS`].
pub fn mersenne_power_claim() -> Result<Claim> {
    let mut claim = Claim::new("(2^q - 1)^p > (2^p - 1)^q for the listed exponent pairs");
    for (p, q) in MERSENNE_PAIRS {
        claim.check(lemma24_check(p, q)?, || format!("(p, q) = ({p}, {q})"));
    }
    Ok(claim)
}

/// The representation k = aq + bp with 0 <= b <= q - 1 exists, is unique
/// and is the one returned, for threshold <= k <= k_max.
pub fn skupien_claim(pair: MersennePair, k_max: u64) -> Result<Claim> {
    let (p, q) = (pair.p() as u64, pair.q() as u64);
    let mut claim = Claim::new(format!(
        "k = aq + bp has exactly one solution with b < q, (p, q) = ({p}, {q}), k <= {k_max}"
    ));
    for k in pair.threshold()..=k_max {
        let rep = skupien_rep(k, pair)?;
        let all: Vec<(u64, u64)> = (0..q)
            .filter(|&b| b * p <= k && (k - b * p) % q == 0)
            .map(|b| ((k - b * p) / q, b))
            .collect();
        claim.check(all == [rep], || format!("k = {k}: returned {rep:?}, solutions {all:?}"));
    }
    Ok(claim)
}

/// lambda of the witness equals k from its factors, from its value, and
/// (below 2^64) along its trajectory.
pub fn witness_class_claim(pair: MersennePair, k_max: u64) -> Result<Claim> {
    let mut claim = Claim::new(format!(
        "lambda of the Mersenne witness is k, (p, q) = ({}, {}), k <= {k_max}",
        pair.p(),
        pair.q()
    ));
    for k in pair.threshold()..=k_max {
        let w = mersenne_witness(k, pair)?;
        let direct = witness_class_direct(&w)?;
        let walked = if w.value.bits() <= 64 { Some(lambda_trajectory(&w.value)?) } else { None };
        claim.check(w.class == k && direct == k && walked.map_or(true, |l| l == k), || {
            format!("k = {k}: factored {}, direct {direct}, trajectory {walked:?}", w.class)
        });
    }
    Ok(claim)
}

/// Every bound report for threshold <= k <= k_max verifies, and W <= B(k)
/// < 2^k against the table.
pub fn bound_chain_claim(pair: MersennePair, table: &SieveTable, k_max: u64) -> Result<Claim> {
    let mut claim = Claim::new(format!(
        "W = L exactly or W > L, lambda(W) = k and W <= B(k) < 2^k, (p, q) = ({}, {}), k <= {k_max}",
        pair.p(),
        pair.q()
    ));
    for k in pair.threshold().max(2)..=k_max {
        let r = bound_report(k, pair, Some(table))?;
        let ok = r.verified() && r.sandwich == Some(true);
        claim.check(ok, || format!("k = {k}: {r:?}"));
    }
    Ok(claim)
}

/// Mersenne witnesses and the lower bound for B(k), 2 <= k <= k_max.
pub fn mersenne_suite(table: &SieveTable, k_max: u64) -> Result<VerificationReport> {
    if k_max >= 63 || !table.covers_pow2(k_max as u32) {
        return Err(Error::InsufficientSieve { limit: table.limit(), needed_log2: k_max as u32 });
    }
    let base = MersennePair::new(2, 3)?;
    let mut claims = vec![
        mersenne_power_claim()?,
        skupien_claim(base, k_max.max(40))?,
        witness_class_claim(base, k_max.max(40))?,
        bound_chain_claim(base, table, k_max)?,
    ];
    for (p, q) in [(2, 5), (3, 5)] {
        let pair = MersennePair::new(p, q)?;
        claims.push(skupien_claim(pair, k_max.max(40))?);
        if pair.threshold() <= k_max {
            claims.push(bound_chain_claim(pair, table, k_max)?);
        }
    }
    Ok(VerificationReport { claims, largest_odd: Vec::new() })
}

/// White's conditions for psi-bar, phi and psi over p <= prime_bound,
/// alpha <= exponent_bound. psi is expected to fail condition (1) at
/// p = 2 only, through q = 3 dividing psi(2^alpha) = 3 2^(alpha-1).
pub fn white_suite(prime_bound: u64, exponent_bound: u32) -> Result<VerificationReport> {
    let mut claims = Vec::new();
    for f in [ArithFn::PsiBar, ArithFn::Phi] {
        let report = check_white_conditions(f, prime_bound, exponent_bound)?;
        let mut claim = Claim::new(format!(
            "{f} satisfies both conditions for p <= {prime_bound}, alpha <= {exponent_bound}"
        ));
        claim.checked = report.checked as u64;
        if let Some(v) = report.violations.first() {
            claim.passed = false;
            claim.counterexample = Some(format!("{v:?}"));
        }
        claims.push(claim);
    }
    let psi = check_white_conditions(ArithFn::Psi, prime_bound, exponent_bound)?;
    let mut claim = Claim::new(format!(
        "psi fails only condition (1), only at p = 2 with q = 3, for every alpha <= {exponent_bound}"
    ));
    claim.checked = psi.checked as u64;
    let expected: Vec<WhiteViolation> = (1..=exponent_bound)
        .map(|alpha| WhiteViolation::LargerPrime { p: 2, alpha, q: "3".into() })
        .collect();
    if psi.violations != expected {
        claim.passed = false;
        claim.counterexample = Some(format!("{:?}", psi.violations));
    }
    claims.push(claim.with_note(format!(
        "psi violates condition (1) at p = 2, q = 3 for alpha = 1..={exponent_bound}"
    )));
    Ok(VerificationReport { claims, largest_odd: Vec::new() })
}

/// Class extremes, divisor closure and the g inequalities through
/// `k_max`, plus the smallest-multiple formula when the table is wide
/// enough for a <= 100 and ten classes above lambda(a).
pub fn classes_suite(table: &SieveTable, k_max: u64) -> Result<VerificationReport> {
    let mut report = verify_class_theorems(table, k_max)?;
    let needed = 100 * g_u128(10).unwrap() as u64;
    if table.limit() >= needed {
        report.claims.push(check_multiples_theorem(table, 100, 10)?);
    }
    Ok(report)
}

/// 2^e as a sieve size.
pub fn pow2(e: u64) -> Result<u64> {
    if e < 63 {
        Ok(1 << e)
    } else {
        Err(Error::Capacity(format!("2^{e} is too large a sieve")))
    }
}
