//! Exact membership in V(c) and T(c), k_max, density rows and the T(c)
//! witness for a few rational c.

use psibar::{density_table, in_t, in_v, k_max, lemma26_closure_check, t_witness, Natural, Rational};

fn main() -> psibar::Result<()> {
    let zero: Rational = "0".parse()?;
    for n in [3u64, 12, 24, 27, 54, 64] {
        println!("{n:>3} in V(0): {}", in_v(&Natural::from(n), zero)?);
    }
    for q in [3u64, 29, 31, 53] {
        let q = Natural::from(q);
        println!("{q:>3} in T(0): {:<5}  k_max = {}", in_t(&q, zero)?, k_max(&q, zero)?);
    }

    let xs = [100, 1_000, 10_000, 100_000];
    for c in ["-2", "-1/2", "0", "1/2", "2"] {
        let c: Rational = c.parse()?;
        let rows = density_table(c, &xs)?;
        let shown: Vec<String> = rows.iter().map(|r| format!("{:.4}", r.ratio_f64())).collect();
        let w = t_witness(c, &Natural::from(10u64).pow(15))?;
        println!("c = {c:>4}: b/pi = {}  witness {} (k = {}, l = {})", shown.join(" "), w.omega, w.k, w.ell);
    }

    let closure = lemma26_closure_check(zero, 100_000)?;
    println!(
        "primes = -1 mod q for q in T(0): {} checked, {} outside T(0)",
        closure.primes_checked,
        closure.violations.len()
    );
    Ok(())
}
