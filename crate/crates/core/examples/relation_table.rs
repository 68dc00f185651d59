//! The verified index-shift relations and the rewriting they drive.

use nv_thompson::generators::{evaluate_word, parse_word, RelationTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for dim in 1..=3 {
        print!("{}", RelationTable::build(dim)?);
    }
    let table = RelationTable::get(2)?;
    for text in ["A4", "B3.1'", "C5", "q4", "p3 A2"] {
        let w = parse_word(text)?;
        let r = table.shift_rewrite(&w)?;
        assert_eq!(evaluate_word(&r, 2)?, evaluate_word(&w, 2)?);
        println!("{text:>6} -> {r}");
    }
    Ok(())
}
