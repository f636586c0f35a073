//! Tabulate lambda, list a few classes by section and check the class
//! theorems over the table.

use psibar::atlas::largest_odd_b;
use psibar::{build_sieve, class_members, g, verify_class_theorems};

fn main() -> psibar::Result<()> {
    let k_max = 16;
    let table = build_sieve(1 << (k_max + 1))?;

    for k in [0, 1, 2, 4, 6] {
        let class = class_members(&table, k)?;
        let shown: Vec<String> = class.members.iter().map(|m| format!("{}:{}", m.n, m.section)).collect();
        println!("class {k}: {}", shown.join(" "));
    }

    println!("\n{:>3} {:>8} {:>8} {:>8} {:>8}", "k", "g(k)", "B(k)", "2^k", "members");
    for k in 2..=k_max {
        let size = class_members(&table, k)?.members.len();
        println!("{k:>3} {:>8} {:>8} {:>8} {size:>8}", g(k)?, largest_odd_b(&table, k)?, 1u64 << k);
    }

    let report = verify_class_theorems(&table, k_max)?;
    println!();
    for claim in &report.claims {
        println!("{} {}", if claim.passed { "ok  " } else { "FAIL" }, claim.name);
    }
    Ok(())
}
