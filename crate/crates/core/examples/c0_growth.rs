//! Powers of C0: 2^n blocks, horizontal strips mapped to vertical strips
//! in bit-reversed order.

use nv_thompson::generators::{evaluate_word, parse_word};
use nv_thompson::metrics::{c0_csv, experiment_c0_growth};
use nv_thompson::render::{render_element, Format};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", c0_csv(&experiment_c0_growth(12)?));
    let c0_cubed = evaluate_word(&parse_word("C0 C0 C0")?, 2)?;
    println!("\n{}", render_element(&c0_cubed, Format::Ascii)?);
    Ok(())
}
