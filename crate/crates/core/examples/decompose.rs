//! Semi-normal form P · Π · Q⁻¹ of an element, the word over the infinite
//! families, and its rewriting over the finite generating set.

use nv_thompson::element::random_element;
use nv_thompson::generators::evaluate_word;
use nv_thompson::normal_form::{decompose, upper_bound_length, SemiNormalForm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let x = random_element(seed, 4, 2)?;
    println!("{x}");

    let snf = SemiNormalForm::of(&x)?;
    println!("P     = {}", snf.positive_p);
    println!("sigma = {:?} on {} strips", snf.sigma, snf.k);
    println!("Q     = {}", snf.positive_q);
    println!("monotone: {}", snf.is_monotone());

    let w = decompose(&x)?;
    println!("\nword ({} symbols): {w}", w.len());
    let (finite, n) = upper_bound_length(&x)?;
    println!("finite word ({n} symbols): {finite}");
    assert_eq!(evaluate_word(&finite, 2)?, x);
    Ok(())
}
