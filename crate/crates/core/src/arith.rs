//! The arithmetic functions psi-bar, Dedekind psi and Euler phi, their
//! trajectories, and the class function lambda.
//!
//! lambda(n) is the number of psi-bar steps taking n to 2 (lambda(1) = 0).
//! Its companion D, equal to lambda on odd numbers and lambda + 1 on even
//! ones, is completely additive. D is evaluated through the recursion
//! D(2) = 1 and D(p) = D(p + 1) for odd primes p, since psi-bar(p) = p + 1
//! and every prime factor of p + 1 is smaller than p.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::factor::{factorize, factorize_u64, is_prime, Factorization};
use crate::Natural;

/// Upper bound on psi-bar steps in [`lambda_trajectory`]. Every trajectory
/// below 2^5000 reaches 2 well inside it.
pub const TRAJECTORY_CAP: usize = 10_000;

/// The three multiplicative functions that can be iterated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithFn {
    /// p^(a-1)(p+1) on odd prime powers, 2^(a-1) on powers of two.
    PsiBar,
    /// Dedekind psi: p^(a-1)(p+1) on every prime power.
    Psi,
    /// Euler totient.
    Phi,
}

impl ArithFn {
    pub const ALL: [ArithFn; 3] = [ArithFn::PsiBar, ArithFn::Psi, ArithFn::Phi];

    pub fn name(self) -> &'static str {
        match self {
            ArithFn::PsiBar => "psibar",
            ArithFn::Psi => "psi",
            ArithFn::Phi => "phi",
        }
    }

    /// Value on the prime power p^e (e >= 1).
    pub fn on_prime_power(self, p: &Natural, e: u32) -> Natural {
        let head = p.pow(e - 1);
        let two = p == &BigUint::from(2u32);
        match self {
            ArithFn::PsiBar if two => head,
            ArithFn::PsiBar | ArithFn::Psi => head * (p + 1u32),
            ArithFn::Phi => head * (p - 1u32),
        }
    }

    /// Evaluates the function on a factored argument.
    pub fn on_factorization(self, f: &Factorization) -> Natural {
        f.pairs()
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * self.on_prime_power(p, *e))
    }

    /// Evaluates the function at `n >= 1`.
    pub fn apply(self, n: &Natural) -> Result<Natural> {
        Ok(self.on_factorization(&factorize(n)?))
    }

    /// 64-bit evaluation; `None` if the result overflows.
    pub fn apply_u64(self, n: u64) -> Option<u64> {
        assert!(n > 0);
        let mut acc: u64 = 1;
        for (p, e) in factorize_u64(n) {
            let head = p.checked_pow(e - 1)?;
            let term = match self {
                ArithFn::PsiBar if p == 2 => head,
                ArithFn::PsiBar | ArithFn::Psi => head.checked_mul(p + 1)?,
                ArithFn::Phi => head * (p - 1),
            };
            acc = acc.checked_mul(term)?;
        }
        Some(acc)
    }
}

impl fmt::Display for ArithFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ArithFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psibar" | "psi_bar" => Ok(ArithFn::PsiBar),
            "psi" => Ok(ArithFn::Psi),
            "phi" => Ok(ArithFn::Phi),
            other => domain(format!("unknown function {other:?}")),
        }
    }
}

fn reject_zero(n: &Natural) -> Result<()> {
    if n.is_zero() {
        return domain("argument must be a positive integer");
    }
    Ok(())
}

pub fn psi_bar(n: &Natural) -> Result<Natural> {
    reject_zero(n)?;
    ArithFn::PsiBar.apply(n)
}

pub fn dedekind_psi(n: &Natural) -> Result<Natural> {
    reject_zero(n)?;
    ArithFn::Psi.apply(n)
}

pub fn euler_phi(n: &Natural) -> Result<Natural> {
    reject_zero(n)?;
    ArithFn::Phi.apply(n)
}

/// The iterates n, f(n), f^2(n), ... of one starting value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrajectoryReport {
    pub function: ArithFn,
    /// Computed iterates, starting with n itself.
    pub iterates: Vec<Natural>,
    /// Whether two consecutive iterates coincided within the cap.
    pub collapsed: bool,
    pub collapse_value: Option<Natural>,
    /// Smallest positive k with f^k(n) equal to the collapse value.
    pub iteration_length: Option<usize>,
    /// Index of the first iterate equal to 2. Under psi-bar this is lambda(n)
    /// for n >= 2.
    pub reaches_two_at: Option<usize>,
}

/// Iterates `function` from `n` for at most `cap` steps, stopping once two
/// consecutive iterates agree.
pub fn trajectory(n: &Natural, function: ArithFn, cap: usize) -> Result<TrajectoryReport> {
    reject_zero(n)?;
    if cap == 0 {
        return domain("trajectory cap must be positive");
    }
    let mut iterates = vec![n.clone()];
    let mut collapsed = false;
    for _ in 0..cap {
        let next = function.apply(iterates.last().unwrap())?;
        let done = &next == iterates.last().unwrap();
        iterates.push(next);
        if done {
            collapsed = true;
            break;
        }
    }
    let two = BigUint::from(2u32);
    let reaches_two_at = iterates.iter().position(|x| x == &two);
    let (collapse_value, iteration_length) = if collapsed {
        let c = iterates.last().unwrap().clone();
        let k = iterates.iter().skip(1).position(|x| x == &c).map(|i| i + 1);
        (Some(c), k)
    } else {
        (None, None)
    };
    Ok(TrajectoryReport {
        function,
        iterates,
        collapsed,
        collapse_value,
        iteration_length,
        reaches_two_at,
    })
}

/// The first psi iterate of the shape 2^a 3^b with a, b >= 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PsiTail {
    pub a: u32,
    pub b: u32,
    /// Number of psi applications that produced the iterate.
    pub step: usize,
}

fn two_three_shape(x: &Natural) -> Option<(u32, u32)> {
    if x.is_zero() {
        return None;
    }
    let a = x.trailing_zeros().unwrap_or(0) as u32;
    let mut rest = x >> a as usize;
    let three = BigUint::from(3u32);
    let mut b = 0;
    while (&rest % &three).is_zero() {
        rest /= &three;
        b += 1;
    }
    rest.is_one().then_some((a, b))
}

/// Finds the first iterate psi^k(n), k <= cap, equal to 2^a 3^b with
/// a, b >= 1, and confirms that the next iterate is 2^(a+1) 3^b.
pub fn psi_tail_detect(n: &Natural, cap: usize) -> Result<PsiTail> {
    if n < &BigUint::from(2u32) {
        return domain("psi tail needs n >= 2");
    }
    let mut x = n.clone();
    for step in 0..=cap {
        let next = dedekind_psi(&x)?;
        if let Some((a, b)) = two_three_shape(&x) {
            if a >= 1 && b >= 1 {
                if two_three_shape(&next) != Some((a + 1, b)) {
                    return Err(Error::Inconsistent(format!(
                        "psi({x}) = {next} breaks the 2^a 3^b tail"
                    )));
                }
                return Ok(PsiTail { a, b, step });
            }
        }
        x = next;
    }
    Err(Error::Exhausted(format!(
        "no 2^a 3^b iterate of {n} within {cap} psi steps"
    )))
}

/// Cache of D over primes. Append-only; every value is a pure function of
/// its key, so concurrent fills agree.
#[derive(Default)]
struct PrimeDCache {
    small: RwLock<HashMap<u64, u64>>,
    big: RwLock<HashMap<BigUint, u64>>,
}

fn cache() -> &'static PrimeDCache {
    static CACHE: OnceLock<PrimeDCache> = OnceLock::new();
    CACHE.get_or_init(PrimeDCache::default)
}

fn big_d_prime_u64(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    if let Some(&d) = cache().small.read().unwrap().get(&p) {
        return d;
    }
    // D(p) = D(p + 1) = 1 + D((p + 1) / 2)
    let d = 1 + big_d_u64(p / 2 + 1);
    cache().small.write().unwrap().insert(p, d);
    d
}

fn big_d_prime(p: &Natural) -> u64 {
    if let Some(small) = p.to_u64() {
        return big_d_prime_u64(small);
    }
    if let Some(&d) = cache().big.read().unwrap().get(p) {
        return d;
    }
    let up: BigUint = p + 1u32;
    let d = big_d_factored(&factorize(&up).expect("p + 1 > 0"));
    cache().big.write().unwrap().insert(p.clone(), d);
    d
}

/// D on a factored argument: the sum of e * D(p).
pub fn big_d_factored(f: &Factorization) -> u64 {
    f.pairs()
        .iter()
        .map(|(p, e)| *e as u64 * big_d_prime(p))
        .sum()
}

/// D on a 64-bit argument (n >= 1).
pub fn big_d_u64(n: u64) -> u64 {
    assert!(n > 0, "D(0) is undefined");
    factorize_u64(n)
        .into_iter()
        .map(|(p, e)| e as u64 * big_d_prime_u64(p))
        .sum()
}

/// The completely additive function D.
pub fn big_d(n: &Natural) -> Result<u64> {
    reject_zero(n)?;
    if let Some(small) = n.to_u64() {
        return Ok(big_d_u64(small));
    }
    Ok(big_d_factored(&factorize(n)?))
}

/// lambda(n) through D: D(n) for odd n, D(n) - 1 for even n.
pub fn lambda_additive(n: &Natural) -> Result<u64> {
    let d = big_d(n)?;
    Ok(if n.is_even() { d - 1 } else { d })
}

pub fn lambda_additive_u64(n: u64) -> u64 {
    let d = big_d_u64(n);
    if n % 2 == 0 {
        d - 1
    } else {
        d
    }
}

/// lambda of the odd or even number with factorization `f`.
pub fn lambda_factored(f: &Factorization) -> u64 {
    let d = big_d_factored(f);
    if f.exponent_of(&BigUint::from(2u32)) > 0 {
        d - 1
    } else {
        d
    }
}

/// lambda(n) by counting psi-bar steps until the iterate equals 2.
///
/// Independent of D; used as a cross-check on [`lambda_additive`].
pub fn lambda_trajectory(n: &Natural) -> Result<u64> {
    reject_zero(n)?;
    if n.is_one() {
        return Ok(0);
    }
    let mut steps = 0u64;
    if let Some(mut x) = n.to_u64() {
        while x != 2 {
            if steps as usize >= TRAJECTORY_CAP {
                return Err(Error::TrajectoryCap { cap: TRAJECTORY_CAP });
            }
            match ArithFn::PsiBar.apply_u64(x) {
                Some(next) => x = next,
                None => {
                    let rest = lambda_trajectory(&ArithFn::PsiBar.apply(&BigUint::from(x))?)?;
                    return Ok(steps + 1 + rest);
                }
            }
            if x == 1 {
                return Err(Error::Inconsistent(format!("psi-bar trajectory of {n} skipped 2")));
            }
            steps += 1;
        }
        return Ok(steps);
    }
    let two = BigUint::from(2u32);
    let mut x = n.clone();
    while x != two {
        if steps as usize >= TRAJECTORY_CAP {
            return Err(Error::TrajectoryCap { cap: TRAJECTORY_CAP });
        }
        x = psi_bar(&x)?;
        steps += 1;
    }
    Ok(steps)
}

/// 2-adic valuation of a positive integer.
pub fn v2(n: &Natural) -> u32 {
    n.trailing_zeros().unwrap_or(0) as u32
}

/// One failure of White's conditions at the prime power p^alpha.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum WhiteViolation {
    /// A prime q > p divides f(p^alpha).
    #[serde(rename = "1")]
    LargerPrime { p: u64, alpha: u32, q: String },
    /// p^alpha divides f(p^alpha).
    #[serde(rename = "2")]
    SelfDivides { p: u64, alpha: u32 },
}

#[derive(Clone, Debug, Serialize)]
pub struct WhiteReport {
    pub function: ArithFn,
    pub prime_bound: u64,
    pub exponent_bound: u32,
    /// Number of prime powers examined.
    pub checked: usize,
    pub violations: Vec<WhiteViolation>,
}

impl WhiteReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for every prime p <= `prime_bound` and 1 <= alpha <=
/// `exponent_bound`, that every prime factor q of f(p^alpha) satisfies
/// q <= p and that p^alpha does not divide f(p^alpha).
pub fn check_white_conditions(
    function: ArithFn,
    prime_bound: u64,
    exponent_bound: u32,
) -> Result<WhiteReport> {
    if prime_bound < 2 || exponent_bound < 1 {
        return domain("need prime_bound >= 2 and exponent_bound >= 1");
    }
    let mut violations = Vec::new();
    let mut checked = 0;
    for p in (2..=prime_bound).filter(|&p| is_prime(&BigUint::from(p))) {
        let pb = BigUint::from(p);
        for alpha in 1..=exponent_bound {
            checked += 1;
            let value = function.on_prime_power(&pb, alpha);
            for (q, _) in factorize(&value)?.pairs() {
                if q > &pb {
                    violations.push(WhiteViolation::LargerPrime {
                        p,
                        alpha,
                        q: q.to_string(),
                    });
                }
            }
            if (&value % pb.pow(alpha)).is_zero() {
                violations.push(WhiteViolation::SelfDivides { p, alpha });
            }
        }
    }
    Ok(WhiteReport {
        function,
        prime_bound,
        exponent_bound,
        checked,
        violations,
    })
}
