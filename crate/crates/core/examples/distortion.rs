//! g_n = C0^-n A0 C0^n has word length at most 2n+1 but 3·2^n blocks,
//! all of them vertical strips.

use nv_thompson::metrics::{distortion_csv, experiment_distortion};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = experiment_distortion(10)?;
    print!("{}", distortion_csv(&rows));
    let last = rows.last().expect("rows");
    println!("\nword length {} against {} blocks", last.word_length, last.blocks);
    Ok(())
}
