//! lambda(n) by walking the psi-bar trajectory and by the additive
//! function D, side by side.

use psibar::{big_d, lambda_additive, lambda_trajectory, trajectory, ArithFn, Natural};

fn main() -> psibar::Result<()> {
    println!("{:>6} {:>4} {:>9} {:>8}  trajectory", "n", "D", "additive", "walked");
    for n in [1u64, 2, 3, 4, 9, 12, 100, 441, 8191] {
        let n = Natural::from(n);
        let path = trajectory(&n, ArithFn::PsiBar, 64)?;
        let shown: Vec<String> = path.iterates.iter().map(|x| x.to_string()).collect();
        println!(
            "{:>6} {:>4} {:>9} {:>8}  {}",
            n,
            big_d(&n)?,
            lambda_additive(&n)?,
            lambda_trajectory(&n)?,
            shown.join(" -> ")
        );
    }

    // 2^127 - 1 is prime; the additive route never walks its trajectory
    let m127 = (Natural::from(1u32) << 127usize) - 1u32;
    println!("lambda(2^127 - 1) = {}", lambda_additive(&m127)?);
    Ok(())
}
