//! Mersenne witnesses W = (2^q - 1)^a (2^p - 1)^b in class k, compared with
//! the largest odd member B(k) and the lower bound L.

use psibar::{bound_report, build_sieve, lemma24_check, MersennePair};

fn main() -> psibar::Result<()> {
    let table = build_sieve(1 << 22)?;
    let pair = MersennePair::new(2, 3)?;
    println!("{:>3} {:>5} {:>12} {:>12} {:>14}", "k", "(a,b)", "W", "B(k)", "L");
    for k in 2..=22 {
        let r = bound_report(k, pair, Some(&table))?;
        let b = r.sieve_b.map_or("-".to_string(), |b| b.to_string());
        println!(
            "{k:>3} {:>5} {:>12} {b:>12} {:>14.2}{}",
            format!("{},{}", r.a, r.b),
            r.witness,
            r.bound_approx,
            if r.verified() { "" } else { "  FAILED" }
        );
    }

    for (p, q) in [(2, 3), (5, 7), (13, 17), (19, 31)] {
        println!("(2^{q}-1)^{p} > (2^{p}-1)^{q}: {}", lemma24_check(p, q)?);
    }
    Ok(())
}
