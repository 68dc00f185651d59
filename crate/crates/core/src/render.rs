//! ASCII and SVG pictures of partitions, caret trees and tree-pair diagrams.
//!
//! Partitions are drawn with direction 0 horizontal and direction 1 pointing
//! up. One-dimensional partitions are drawn as strips of the unit square.

use std::fmt::Write as _;

use crate::dyadic::Block;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::tree::{element_to_diagram, tree_to_pattern, CaretTree, TreePairDiagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
}

/// Side length of the SVG drawing area of one partition, in user units.
const SVG_SIZE: f64 = 400.0;
const SVG_MARGIN: f64 = 10.0;

/// `(x0, x1, y0, y1)` in units of the finest grid `2^-lx × 2^-ly`.
fn extents(b: &Block, lx: u32, ly: u32) -> (u128, u128, u128, u128) {
    let x = b.interval(0);
    let sx = 1u128 << (lx - x.level());
    let (y0, y1) = if b.dim() > 1 {
        let y = b.interval(1);
        let sy = 1u128 << (ly - y.level());
        (y.num() * sy, (y.num() + 1) * sy)
    } else {
        (0, 1)
    };
    (x.num() * sx, (x.num() + 1) * sx, y0, y1)
}

fn levels(blocks: &[Block]) -> Result<(u32, u32)> {
    let dim = blocks.first().map(Block::dim).unwrap_or(1);
    if dim > 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    let lx = blocks.iter().map(|b| b.interval(0).level()).max().unwrap_or(0);
    let ly = if dim > 1 {
        blocks.iter().map(|b| b.interval(1).level()).max().unwrap_or(0)
    } else {
        0
    };
    Ok((lx, ly))
}

fn ascii_partition(blocks: &[Block], labels: Option<&[usize]>) -> Result<Vec<String>> {
    let (lx, ly) = levels(blocks)?;
    let digits = labels
        .and_then(|l| l.iter().max())
        .map(|m| m.to_string().len())
        .unwrap_or(0);
    let cw = digits.max(1) + 3;
    let ch = 2;
    let width = (1usize << lx) * cw + 1;
    let height = (1usize << ly) * ch + 1;
    let mut grid = vec![vec![b' '; width]; height];
    let top = (1u128 << ly) as usize;
    for (n, b) in blocks.iter().enumerate() {
        let (x0, x1, y0, y1) = extents(b, lx, ly);
        let (c0, c1) = (x0 as usize * cw, x1 as usize * cw);
        let (r0, r1) = ((top - y1 as usize) * ch, (top - y0 as usize) * ch);
        for r in [r0, r1] {
            for cell in &mut grid[r][c0..=c1] {
                *cell = match *cell {
                    b'|' | b'+' => b'+',
                    _ => b'-',
                };
            }
        }
        for row in &mut grid[r0..=r1] {
            for c in [c0, c1] {
                row[c] = match row[c] {
                    b'-' | b'+' => b'+',
                    _ => b'|',
                };
            }
        }
        for (r, c) in [(r0, c0), (r0, c1), (r1, c0), (r1, c1)] {
            grid[r][c] = b'+';
        }
        if let Some(labels) = labels {
            let text = labels[n].to_string();
            let row = (r0 + r1) / 2;
            let col = (c0 + c1 + 1 - text.len()) / 2;
            grid[row][col..col + text.len()].copy_from_slice(text.as_bytes());
        }
    }
    Ok(grid
        .into_iter()
        .map(|row| String::from_utf8(row).expect("ascii"))
        .collect())
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn svg_partition(out: &mut String, blocks: &[Block], labels: Option<&[usize]>, dx: f64) -> Result<()> {
    let (lx, ly) = levels(blocks)?;
    let (ux, uy) = (SVG_SIZE / (1u128 << lx) as f64, SVG_SIZE / (1u128 << ly) as f64);
    let top = (1u128 << ly) as f64;
    let font = 14.0;
    for (n, b) in blocks.iter().enumerate() {
        let (x0, x1, y0, y1) = extents(b, lx, ly);
        let x = dx + x0 as f64 * ux;
        let y = SVG_MARGIN + (top - y1 as f64) * uy;
        let (w, h) = ((x1 - x0) as f64 * ux, (y1 - y0) as f64 * uy);
        let _ = writeln!(
            out,
            r#"  <rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
            num(x),
            num(y),
            num(w),
            num(h)
        );
        if let Some(labels) = labels {
            let _ = writeln!(
                out,
                r#"  <text x="{}" y="{}" font-size="{}" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
                num(x + w / 2.0),
                num(y + h / 2.0),
                num(font),
                labels[n]
            );
        }
    }
    Ok(())
}

fn svg_document(panels: usize, body: &str) -> String {
    let w = SVG_MARGIN + panels as f64 * (SVG_SIZE + SVG_MARGIN * 4.0) - SVG_MARGIN * 3.0;
    let h = SVG_SIZE + 2.0 * SVG_MARGIN;
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n{body}</svg>\n",
        num(w),
        num(h),
        num(w),
        num(h)
    )
}

/// Draws the blocks of a partition, numbered by their position in `blocks`
/// when `numbered` is set.
pub fn render_partition(blocks: &[Block], format: Format, numbered: bool) -> Result<String> {
    let labels: Vec<usize> = (0..blocks.len()).collect();
    let labels = numbered.then_some(labels.as_slice());
    match format {
        Format::Ascii => Ok(ascii_partition(blocks, labels)?.join("\n") + "\n"),
        Format::Svg => {
            let mut body = String::new();
            svg_partition(&mut body, blocks, labels, SVG_MARGIN)?;
            Ok(svg_document(1, &body))
        }
    }
}

/// The partition cut out by `tree`, numbered in leaf order.
pub fn render_tree_partition(tree: &CaretTree, dim: usize, format: Format, numbered: bool) -> Result<String> {
    if dim > 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    let (_, leaves) = tree_to_pattern(tree, dim)?;
    render_partition(&leaves, format, numbered)
}

/// Domain and range partitions side by side. Domain leaf `i` and range
/// leaf `perm[i]` carry the same number.
pub fn render_diagram(d: &TreePairDiagram, format: Format) -> Result<String> {
    if d.dim > 2 {
        return Err(Error::UnsupportedDimension(d.dim));
    }
    let (_, dom) = tree_to_pattern(&d.domain, d.dim)?;
    let (_, ran) = tree_to_pattern(&d.range, d.dim)?;
    let dom_labels: Vec<usize> = (0..dom.len()).collect();
    let mut ran_labels = vec![0; ran.len()];
    for (i, &j) in d.perm.iter().enumerate() {
        ran_labels[j] = i;
    }
    match format {
        Format::Ascii => {
            let left = ascii_partition(&dom, Some(&dom_labels))?;
            let right = ascii_partition(&ran, Some(&ran_labels))?;
            let lw = left[0].len();
            let rows = left.len().max(right.len());
            let mid = rows / 2;
            let (lpad, rpad) = ((rows - left.len()) / 2, (rows - right.len()) / 2);
            let at = |panel: &[String], pad: usize, r: usize| {
                r.checked_sub(pad).and_then(|i| panel.get(i)).cloned().unwrap_or_default()
            };
            let mut out = String::new();
            for r in 0..rows {
                let l = at(&left, lpad, r);
                let sep = if r == mid { " --> " } else { "     " };
                let line = format!("{l:<lw$}{sep}{}", at(&right, rpad, r));
                out.push_str(line.trim_end());
                out.push('\n');
            }
            Ok(out)
        }
        Format::Svg => {
            let mut body = String::new();
            svg_partition(&mut body, &dom, Some(&dom_labels), SVG_MARGIN)?;
            let second = SVG_MARGIN * 5.0 + SVG_SIZE;
            svg_partition(&mut body, &ran, Some(&ran_labels), second)?;
            let y = num(SVG_MARGIN + SVG_SIZE / 2.0);
            let _ = writeln!(
                body,
                r#"  <line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="black" stroke-width="1"/>"#,
                num(SVG_MARGIN * 1.5 + SVG_SIZE),
                num(second - SVG_MARGIN * 0.5)
            );
            Ok(svg_document(2, &body))
        }
    }
}

/// The minimal diagram of `e`.
pub fn render_element(e: &Element, format: Format) -> Result<String> {
    render_diagram(&element_to_diagram(e), format)
}

/// One line per node in pre-order: `+ d` for a caret of direction `d`, `- i`
/// for leaf number `i`, indented by `| ` per level.
pub fn render_tree_ascii(tree: &CaretTree) -> String {
    fn walk(t: &CaretTree, depth: usize, next_leaf: &mut usize, out: &mut String) {
        out.push_str(&"| ".repeat(depth));
        match t {
            CaretTree::Leaf => {
                let _ = writeln!(out, "- {next_leaf}");
                *next_leaf += 1;
            }
            CaretTree::Caret { dir, low, high } => {
                let _ = writeln!(out, "+ {dir}");
                walk(low, depth + 1, next_leaf, out);
                walk(high, depth + 1, next_leaf, out);
            }
        }
    }
    let mut out = String::new();
    walk(tree, 0, &mut 0, &mut out);
    out
}

/// Node-link drawing: leaves evenly spaced left to right, carets above the
/// midpoint of their leaves, labelled with their direction.
pub fn render_tree_svg(tree: &CaretTree) -> String {
    fn place(t: &CaretTree, depth: usize, next_leaf: &mut usize, out: &mut Vec<(f64, usize, Option<usize>, Vec<usize>)>) -> usize {
        let me = out.len();
        out.push((0.0, depth, None, vec![]));
        match t {
            CaretTree::Leaf => {
                out[me].0 = *next_leaf as f64;
                *next_leaf += 1;
            }
            CaretTree::Caret { dir, low, high } => {
                let a = place(low, depth + 1, next_leaf, out);
                let b = place(high, depth + 1, next_leaf, out);
                out[me] = ((out[a].0 + out[b].0) / 2.0, depth, Some(*dir), vec![a, b]);
            }
        }
        me
    }
    let mut nodes = vec![];
    place(tree, 0, &mut 0, &mut nodes);
    let (sx, sy) = (40.0, 50.0);
    let at = |i: usize| (SVG_MARGIN * 2.0 + nodes[i].0 * sx, SVG_MARGIN * 2.0 + nodes[i].1 as f64 * sy);
    let mut body = String::new();
    for (i, node) in nodes.iter().enumerate() {
        let (x, y) = at(i);
        for &c in &node.3 {
            let (cx, cy) = at(c);
            let _ = writeln!(
                body,
                r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1"/>"#,
                num(x),
                num(y),
                num(cx),
                num(cy)
            );
        }
    }
    let mut leaf = 0;
    for (i, node) in nodes.iter().enumerate() {
        let (x, y) = at(i);
        let label = match node.2 {
            Some(d) => format!("{d}"),
            None => {
                leaf += 1;
                format!("{}", leaf - 1)
            }
        };
        let _ = writeln!(
            body,
            r#"  <circle cx="{}" cy="{}" r="9" fill="white" stroke="black" stroke-width="1"/>"#,
            num(x),
            num(y)
        );
        let _ = writeln!(
            body,
            r#"  <text x="{}" y="{}" font-size="11" text-anchor="middle" dominant-baseline="middle">{label}</text>"#,
            num(x),
            num(y)
        );
    }
    let w = SVG_MARGIN * 4.0 + (tree.leaves() - 1) as f64 * sx;
    let h = SVG_MARGIN * 4.0 + tree.depth() as f64 * sy;
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n{body}</svg>\n",
        num(w),
        num(h),
        num(w),
        num(h)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Block;

    fn t(s: &str) -> CaretTree {
        s.parse().unwrap()
    }

    #[test]
    fn cube_is_a_single_box() {
        let s = render_partition(&[Block::cube(2)], Format::Ascii, false).unwrap();
        assert_eq!(s, "+---+\n|   |\n+---+\n");
    }

    #[test]
    fn quadrants() {
        let tree = t("(0 (1 L L) (1 L L))");
        let ascii = render_tree_partition(&tree, 2, Format::Ascii, true).unwrap();
        assert_eq!(ascii, "+---+---+\n| 1 | 3 |\n+---+---+\n| 0 | 2 |\n+---+---+\n");
        let svg = render_tree_partition(&tree, 2, Format::Svg, true).unwrap();
        assert_eq!(svg.matches("<rect").count(), 4);
        assert!(ascii.bytes().all(|c| b"+-| \n0123456789".contains(&c)));
    }

    #[test]
    fn high_dimension_is_rejected() {
        assert!(matches!(
            render_partition(&[Block::cube(3)], Format::Svg, true),
            Err(Error::UnsupportedDimension(3))
        ));
        assert!(render_tree_ascii(&t("(2 L L)")).contains("+ 2"));
    }

    #[test]
    fn tree_ascii() {
        assert_eq!(render_tree_ascii(&t("(0 (1 L L) L)")), "+ 0\n| + 1\n| | - 0\n| | - 1\n| - 2\n");
    }

    #[test]
    fn diagram_ascii_has_two_panels() {
        let d = TreePairDiagram::parse("(1 L L) | [0,1] | (0 L L)", 2).unwrap();
        let s = render_diagram(&d, Format::Ascii).unwrap();
        assert!(s.contains("-->"));
        let svg = render_diagram(&d, Format::Svg).unwrap();
        assert_eq!(svg.matches("<rect").count(), 4);
    }
}
