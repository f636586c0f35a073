//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Each criterion recomputes its facts through the public API, using brute
//! force where that is independent of the code under test, and must finish
//! inside its time budget.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use psibar::arith::{big_d_u64, lambda_additive_u64};
use psibar::atlas::{check_g_boundaries, check_g_superadditive, g_u128, section_of_u64};
use psibar::density::DensityContext;
use psibar::factor::{factorize_u64, is_prime_u64};
use psibar::mersenne::{witness_class_direct, MersennePair};
use psibar::suites::{
    even_divisor_closure, odd_part_equivalence, power_of_two_independence, s3_equals_v0,
    white_suite, MERSENNE_PAIRS,
};
use psibar::{
    bound_report, build_sieve, class_members, g, in_t, lambda_additive, lambda_trajectory,
    largest_odd_b, lemma24_check, mersenne_witness, psi_tail_detect, skupien_rep,
    smallest_multiple_in_class, t_witness, trajectory, ArithFn, Factorization, Natural, Rational,
    SectionLabel, SieveTable,
};

type Outcome = Result<String, String>;

fn n(x: u64) -> Natural {
    BigUint::from(x)
}

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: psibar::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn divisors(x: u64) -> Vec<u64> {
    let f = Factorization::from(factorize_u64(x));
    f.divisors().iter().map(|d| d.to_u64().unwrap()).collect()
}

fn known_values() -> Outcome {
    for (x, want) in [(3, 2), (5, 3), (9, 4), (1, 0)] {
        let a = lib(lambda_additive(&n(x)))?;
        let t = lib(lambda_trajectory(&n(x)))?;
        ensure(a == want && t == want, || format!("lambda({x}) = {a} / {t}, want {want}"))?;
    }
    let table = lib(build_sieve(64))?;
    let members = |k| -> Result<Vec<u64>, String> {
        Ok(lib(class_members(&table, k))?.members.iter().map(|m| m.n).collect())
    };
    ensure(members(1)? == [4], || format!("class 1 = {:?}", members(1)))?;
    ensure(members(0)? == [1, 2], || format!("class 0 = {:?}", members(0)))?;
    let phi = lib(trajectory(&n(100), ArithFn::Phi, 100))?;
    ensure(phi.iteration_length == Some(6), || format!("phi length {:?}", phi.iteration_length))?;
    for p in [2u32, 3, 5, 7, 13] {
        let m = (n(1) << p as usize) - 1u32;
        let a = lib(lambda_additive(&m))?;
        let t = lib(lambda_trajectory(&m))?;
        ensure(a == p as u64 && t == p as u64, || format!("lambda(2^{p} - 1) = {a} / {t}"))?;
    }
    Ok("lambda(3,5,9,1) = 2,3,4,0; classes 0, 1; phi length 6; Mersenne exponents".into())
}

fn dual_lambda() -> Outcome {
    for x in 1..=100_000u64 {
        let a = lambda_additive_u64(x);
        let t = lib(lambda_trajectory(&n(x)))?;
        ensure(a == t, || format!("n = {x}: additive {a}, trajectory {t}"))?;
    }
    Ok("n <= 10^5".into())
}

fn additivity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_d1a7);
    for _ in 0..10_000 {
        let x = rng.gen_range(1..=1_000_000u64);
        let y = rng.gen_range(1..=1_000_000u64);
        let (dx, dy, dxy) = (big_d_u64(x), big_d_u64(y), big_d_u64(x * y));
        ensure(dxy == dx + dy, || format!("D({x} * {y}) = {dxy}, D sum {}", dx + dy))?;
    }
    Ok("10^4 seeded pairs <= 10^6".into())
}

fn extremes_sweep(table: &SieveTable) -> Outcome {
    // [min_odd, min_even, max_odd, max_even] per class
    let mut ext = vec![[u64::MAX, u64::MAX, 0, 0]; 21];
    for x in 1..=table.limit() {
        let k = table.lambda(x).unwrap() as usize;
        if k <= 20 {
            let e = &mut ext[k];
            let odd = x % 2 == 1;
            let (lo, hi) = if odd { (0, 2) } else { (1, 3) };
            e[lo] = e[lo].min(x);
            e[hi] = e[hi].max(x);
        }
    }
    for k in 2..=20u64 {
        let gk = lib(g(k))?.to_u64().unwrap();
        let [min_odd, min_even, max_odd, max_even] = ext[k as usize];
        ensure(min_odd == gk, || format!("k = {k}: min odd {min_odd}, g = {gk}"))?;
        ensure(min_even == 2 * gk, || format!("k = {k}: min even {min_even}"))?;
        ensure(max_even == 1 << (k + 1), || format!("k = {k}: max even {max_even}"))?;
        ensure(max_odd < 1 << k, || format!("k = {k}: max odd {max_odd}"))?;
    }
    Ok("N = 2^21, 2 <= k <= 20".into())
}

fn g_inequalities() -> Outcome {
    let sup = check_g_superadditive(200);
    ensure(sup.passed, || format!("{:?}", sup.counterexample))?;
    for claim in check_g_boundaries(60) {
        ensure(claim.passed, || format!("{}: {:?}", claim.name, claim.counterexample))?;
    }
    Ok("m1, m2 <= 200; boundaries for 3 <= k <= 60 (g(1) is undefined, so k = 2 is vacuous)".into())
}

fn parity_facts(table: &SieveTable) -> Outcome {
    for x in (1..=1u64 << 21).step_by(2) {
        ensure(table.lambda(x) != Some(1), || format!("odd {x} in class 1"))?;
    }
    for x in (2..=1_000_000u64).step_by(2) {
        let lam = table.lambda(x).unwrap();
        ensure(x.trailing_zeros() != lam, || format!("x = {x}: v2 = lambda = {lam}"))?;
    }
    Ok("odd n <= 2^21; even x <= 10^6".into())
}

fn divisor_closure(table: &SieveTable) -> Outcome {
    let bs: Vec<u64> = (0..=20u64)
        .filter(|&k| k != 1)
        .map(|k| lib(largest_odd_b(table, k)))
        .collect::<Result<_, _>>()?;
    let set: HashSet<u64> = bs.iter().copied().collect();
    for (k, &b) in (2..=20u64).zip(&bs[1..]) {
        for d in divisors(b) {
            ensure(set.contains(&d), || format!("{d} divides B({k}) = {b}"))?;
        }
    }
    let bound = 2 * g_u128(20).unwrap() as u64;
    let in_s1 = |x: u64| -> Result<bool, String> {
        Ok(lib(section_of_u64(x, table.lambda(x).unwrap() as u64))? == SectionLabel::I)
    };
    let mut count = 0;
    for x in 1..=bound {
        if in_s1(x)? {
            count += 1;
            for d in divisors(x) {
                ensure(in_s1(d)?, || format!("{d} divides S1 element {x}"))?;
            }
        }
    }
    Ok(format!("B(2..=20); {count} S1 elements <= {bound}"))
}

fn multiples(table: &SieveTable) -> Outcome {
    let mut checked = 0;
    for a in 1..=100u64 {
        let la = table.lambda(a).unwrap() as u64;
        for k in la + 1..=la + 10 {
            let formula = lib(smallest_multiple_in_class(&n(a), k))?.to_u64().unwrap();
            let scan = (1..)
                .map(|m| a * m)
                .take_while(|&x| x <= table.limit())
                .find(|&x| table.lambda(x) == Some(k as u32));
            ensure(scan == Some(formula), || format!("a = {a}, k = {k}: {formula} vs {scan:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs (a, k)"))
}

fn v_equivalences() -> Outcome {
    let table = lib(build_sieve(1_000_000))?;
    let cs: Vec<Rational> = ["-1/2", "0", "1/2", "2"].iter().map(|s| r(s)).collect();
    let claims = [
        lib(odd_part_equivalence(&table, &cs))?,
        lib(power_of_two_independence(10_000, 10, &[r("0"), r("1")]))?,
        lib(even_divisor_closure(&table, 1_000_000))?,
        lib(s3_equals_v0(&table))?,
    ];
    for c in &claims {
        ensure(c.passed, || format!("{}: {:?}", c.name, c.counterexample))?;
    }
    Ok("even n <= 10^6, c in {-1/2, 0, 1/2, 2}; 2-power independence; closure; S3 = V(0)".into())
}

fn t_machinery() -> Outcome {
    let ctx = lib(DensityContext::new(1_000_000))?;
    let zero = r("0");
    let small = lib(ctx.t_members(zero, 100))?;
    ensure(small == [29, 53, 59, 89], || format!("T(0) to 100 = {small:?}"))?;
    let row = lib(ctx.density_table(zero, &[100]))?[0];
    ensure(row.b_c == 4 && row.pi_x == 25, || format!("{row:?}"))?;
    let mut count = 0;
    for p in (57..=1_000_000u64).step_by(58).filter(|&p| is_prime_u64(p)) {
        count += 1;
        ensure(lib(ctx.in_t(p, zero))?, || format!("{p} = -1 mod 29 is outside T(0)"))?;
    }
    let w = lib(t_witness(zero, &n(1_000_000)))?;
    ensure(w.omega == n(53), || format!("witness {}", w.omega))?;
    ensure(lib(in_t(&n(53), zero))?, || "53 outside T(0)".into())?;
    Ok(format!("min T(0) = 29; b_0(100) = 4; {count} primes = -1 mod 29; witness 53"))
}

fn mersenne_chain() -> Outcome {
    let table = lib(build_sieve(1 << 22))?;
    let pair = lib(MersennePair::new(2, 3))?;
    for k in 2..=21u64 {
        let rep = lib(skupien_rep(k, pair))?;
        let sols: Vec<(u64, u64)> = (0..3u64)
            .filter(|&b| 2 * b <= k && (k - 2 * b) % 3 == 0)
            .map(|b| ((k - 2 * b) / 3, b))
            .collect();
        ensure(sols == [rep], || format!("k = {k}: {rep:?} vs {sols:?}"))?;
        let w = lib(mersenne_witness(k, pair))?;
        let walked = lib(lambda_trajectory(&w.value))?;
        let direct = lib(witness_class_direct(&w))?;
        ensure(w.class == k && walked == k && direct == k, || format!("k = {k}: lambda(W)"))?;
        let b = lib(largest_odd_b(&table, k))?;
        let wv = w.value.to_u64().unwrap();
        ensure(wv <= b && b < 1 << k, || format!("k = {k}: W = {wv}, B = {b}"))?;
        let report = lib(bound_report(k, pair, Some(&table)))?;
        ensure(report.verified() && report.sieve_b == Some(b), || format!("{report:?}"))?;
    }
    for (p, q) in MERSENNE_PAIRS {
        ensure(lib(lemma24_check(p, q))?, || format!("Lemma fails at ({p}, {q})"))?;
    }
    Ok("(2, 3), 2 <= k <= 21, N = 2^22; five exponent pairs".into())
}

fn white() -> Outcome {
    let report = lib(white_suite(1000, 6))?;
    for c in &report.claims {
        ensure(c.passed, || format!("{}: {:?}", c.name, c.counterexample))?;
    }
    Ok("psibar and phi hold; psi fails only at p = 2, q = 3".into())
}

fn psi_tail() -> Outcome {
    for x in 2..=10_000u64 {
        let tail = lib(psi_tail_detect(&n(x), 200))?;
        let t = lib(trajectory(&n(x), ArithFn::Psi, tail.step + 1))?;
        let shape = |a: u32, b: u32| (n(1) << a as usize) * num_traits::pow(n(3), b as usize);
        ensure(
            t.iterates[tail.step] == shape(tail.a, tail.b)
                && t.iterates[tail.step + 1] == shape(tail.a + 1, tail.b),
            || format!("n = {x}: {tail:?}"),
        )?;
    }
    Ok("2 <= n <= 10^4 within 200 steps".into())
}

fn density_rows() -> Outcome {
    let xs = [1_000, 10_000, 100_000, 1_000_000];
    let ctx = lib(DensityContext::new(1_000_000))?;
    let rows = lib(ctx.density_table(r("0"), &xs))?;
    let mut shown = Vec::new();
    for row in &rows {
        ensure(row.b_c <= row.pi_x, || format!("{row:?}"))?;
        let pi = (2..=row.x).filter(|&q| is_prime_u64(q)).count() as u64;
        let b = lib(ctx.t_members(r("0"), row.x))?.len() as u64;
        ensure(pi == row.pi_x && b == row.b_c, || format!("{row:?}: recount {b}/{pi}"))?;
        shown.push(format!("{} -> {} ({:.6})", row.x, row.ratio(), row.ratio_f64()));
    }
    Ok(format!("rows recounted; no limit asserted: {}", shown.join(", ")))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
}

fn main() -> ExitCode {
    // criteria 4, 6, 7 and 8 share one sieve; its build time is charged to 4
    let mut shared: Option<SieveTable> = None;
    let mut failures = 0;
    let criteria = [
        (Criterion { id: 1, name: "known values", budget: Duration::from_secs(1) }, 0),
        (Criterion { id: 2, name: "dual lambda", budget: Duration::from_secs(30) }, 0),
        (Criterion { id: 3, name: "D additivity", budget: Duration::from_secs(10) }, 0),
        (Criterion { id: 4, name: "class extremes", budget: Duration::from_secs(60) }, 1),
        (Criterion { id: 5, name: "g inequalities", budget: Duration::from_secs(1) }, 0),
        (Criterion { id: 6, name: "class 1 and v2", budget: Duration::from_secs(10) }, 1),
        (Criterion { id: 7, name: "divisor closure", budget: Duration::from_secs(30) }, 1),
        (Criterion { id: 8, name: "smallest multiples", budget: Duration::from_secs(60) }, 1),
        (Criterion { id: 9, name: "V(c) equivalences", budget: Duration::from_secs(120) }, 0),
        (Criterion { id: 10, name: "T(c) machinery", budget: Duration::from_secs(60) }, 0),
        (Criterion { id: 11, name: "Mersenne chain", budget: Duration::from_secs(120) }, 0),
        (Criterion { id: 12, name: "White's conditions", budget: Duration::from_secs(10) }, 0),
        (Criterion { id: 13, name: "psi tail", budget: Duration::from_secs(60) }, 0),
        (Criterion { id: 14, name: "density rows", budget: Duration::from_secs(60) }, 0),
    ];
    for (c, needs_table) in criteria {
        let start = Instant::now();
        if needs_table == 1 && shared.is_none() {
            shared = Some(build_sieve(1 << 21).expect("sieve"));
        }
        let table = shared.as_ref();
        let outcome = match c.id {
            1 => known_values(),
            2 => dual_lambda(),
            3 => additivity(),
            4 => extremes_sweep(table.unwrap()),
            5 => g_inequalities(),
            6 => parity_facts(table.unwrap()),
            7 => divisor_closure(table.unwrap()),
            8 => multiples(table.unwrap()),
            9 => v_equivalences(),
            10 => t_machinery(),
            11 => mersenne_chain(),
            12 => white(),
            13 => psi_tail(),
            _ => density_rows(),
        };
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let (mark, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over budget; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if mark == "FAIL" {
            failures += 1;
        }
        println!(
            "{mark} {:>2} {:<20} {:>8.3}s / {:>3}s  {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    if failures == 0 {
        println!("acceptance: all 14 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria fail");
        ExitCode::FAILURE
    }
}
