//! Elements with an all-horizontal domain tree and an all-vertical range
//! tree: brute-force counts, the closed form, and how fast n^n falls behind.

use nv_thompson::metrics::{count_mixed, enumerate_mixed, genericity_table};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for k in 1..=5 {
        println!("k = {k}: enumerated {}, formula {}", enumerate_mixed(k)?.len(), count_mixed(k));
    }
    println!();
    print!("{}", genericity_table(20).to_csv());
    Ok(())
}
