//! Save a D table to disk, read it back and answer a class query from it.

use psibar::{build_sieve, class_members, sieve_file};

fn main() -> psibar::Result<()> {
    let path = std::env::temp_dir().join("psibar-example.sieve");
    let table = build_sieve(1 << 20)?;
    sieve_file::save(&table, &path)?;
    let loaded = sieve_file::load(&path)?;
    assert_eq!(loaded, table);
    println!(
        "{}: limit {}, checksum {}, {} bytes",
        path.display(),
        loaded.limit(),
        loaded.checksum(),
        std::fs::metadata(&path)?.len()
    );
    let class = class_members(&loaded, 12)?;
    println!("class 12 has {} members, complete: {}", class.members.len(), class.complete);
    std::fs::remove_file(&path)?;
    Ok(())
}
