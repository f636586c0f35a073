//! Iterating psi-bar, phi and psi, and the 2^a 3^b tail of psi.

use psibar::{check_white_conditions, psi_tail_detect, trajectory, ArithFn, Natural};

fn main() -> psibar::Result<()> {
    let n = Natural::from(100u32);
    for f in ArithFn::ALL {
        let t = trajectory(&n, f, 12)?;
        let shown: Vec<String> = t.iterates.iter().map(|x| x.to_string()).collect();
        println!("{f:>6}: {}", shown.join(", "));
        match t.iteration_length {
            Some(len) => println!("        collapses to {} after {len} steps", t.collapse_value.unwrap()),
            None => println!("        still growing after 12 steps"),
        }
    }

    println!();
    for n in [2u64, 3, 5, 7, 97, 1000, 9973] {
        let tail = psi_tail_detect(&Natural::from(n), 200)?;
        println!("psi^{}({n}) = 2^{} 3^{}", tail.step, tail.a, tail.b);
    }

    println!();
    for f in ArithFn::ALL {
        let report = check_white_conditions(f, 100, 4)?;
        println!("{f:>6}: {} prime powers, {} violations", report.checked, report.violations.len());
        for v in report.violations.iter().take(2) {
            println!("        {v:?}");
        }
    }
    Ok(())
}
