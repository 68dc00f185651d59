//! Two different tree pair diagrams for the identity: the quadrants are
//! enumerated column-first by one tree and row-first by the other, and a
//! permutation swapping the middle leaves reconciles them.

use nv_thompson::element::Element;
use nv_thompson::render::{render_diagram, Format};
use nv_thompson::tree::{diagram_to_element, element_to_diagram, TreePairDiagram};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for text in [
        "(0 (1 L L) (1 L L)) | [0,2,1,3] | (1 (0 L L) (0 L L))",
        "(0 (1 L L) (1 L L)) | [0,1,2,3] | (1 (0 L L) (0 L L))",
    ] {
        let d = TreePairDiagram::parse(text, 2)?;
        let e = diagram_to_element(&d)?;
        println!("{text}\n{}", render_diagram(&d, Format::Ascii)?);
        println!("identity: {}", e == Element::identity(2));
        println!("reduced: {}\n", element_to_diagram(&e));
    }
    Ok(())
}
