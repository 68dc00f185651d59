//! Multiply, invert and compare elements of 2V, and evaluate them at points.

use num_rational::BigRational;
use nv_thompson::element::{compose, conjugate, eval_point, invert, power, random_element};
use nv_thompson::generators::{evaluate_word, parse_word};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = evaluate_word(&parse_word("C0 A1 p0'")?, 2)?;
    let y = random_element(7, 4, 2)?;
    println!("x =\n{x}");
    println!("x has {} blocks, {} carets per tree, depth {}", x.block_count(), x.caret_count(), x.depth());

    let xy = compose(&x, &y)?;
    assert_eq!(compose(&xy, &invert(&y))?, x);
    assert!(compose(&x, &invert(&x))?.is_identity());

    let c0 = evaluate_word(&parse_word("C0")?, 2)?;
    println!("C0^3 has {} blocks", power(&c0, 3)?.block_count());
    println!("C0^-1 A0 C0 has {} blocks", conjugate(&evaluate_word(&parse_word("A0")?, 2)?, &c0)?.block_count());

    let p = vec![BigRational::new(1.into(), 3.into()), BigRational::new(5.into(), 7.into())];
    let image = eval_point(&x, &p)?;
    println!("x({}, {}) = ({}, {})", p[0], p[1], image[0], image[1]);
    Ok(())
}
