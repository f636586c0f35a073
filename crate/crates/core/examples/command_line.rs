//! Drive the command-line front end in-process.

use psibar::cli::run;

fn main() {
    for args in [
        "eval --fn lambda --n 1..12 --format csv",
        "classes --k 4 --sections --extremes --format plain",
        "density --c 0 --xs 100,1000,10000 --witness --format plain",
        "verify --suite white --format plain",
        "bound --p 2 --q 3 --k 1",
    ] {
        let out = run(std::iter::once("psibar").chain(args.split_whitespace()));
        println!("$ psibar {args}   [exit {}]", out.exit_code);
        print!("{}{}", out.stdout, out.stderr);
        println!();
    }
}
