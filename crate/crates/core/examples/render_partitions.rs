//! ASCII and SVG pictures of caret trees, their partitions and diagrams.

use nv_thompson::render::{render_tree_ascii, render_tree_partition, render_tree_svg, Format};
use nv_thompson::tree::CaretTree;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tree: CaretTree = "(0 (1 L (0 L L)) (1 (1 L L) L))".parse()?;
    println!("{tree}\n");
    println!("{}", render_tree_ascii(&tree));
    println!("{}", render_tree_partition(&tree, 2, Format::Ascii, true)?);

    let dir = std::env::temp_dir();
    let (tree_svg, part_svg) = (dir.join("tree.svg"), dir.join("partition.svg"));
    std::fs::write(&tree_svg, render_tree_svg(&tree))?;
    std::fs::write(&part_svg, render_tree_partition(&tree, 2, Format::Svg, true)?)?;
    println!("wrote {} and {}", tree_svg.display(), part_svg.display());
    Ok(())
}
