//! Caret trees and tree-pair diagrams.
//!
//! Trees are an input/output layer only: distinct diagrams can present the
//! same element, so all group computations go through [`Element`].
//!
//! Text grammar:
//!
//! ```text
//! tree    := "L" | "(" dir tree tree ")"
//! perm    := "[" image ("," image)* "]"
//! diagram := tree "|" perm "|" tree
//! ```

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::dyadic::{partition_halves, root_direction, Block, Pattern};
use crate::element::{make_element, Element};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CaretTree {
    Leaf,
    Caret {
        dir: usize,
        low: Box<CaretTree>,
        high: Box<CaretTree>,
    },
}

impl CaretTree {
    pub fn caret(dir: usize, low: CaretTree, high: CaretTree) -> Self {
        CaretTree::Caret {
            dir,
            low: Box::new(low),
            high: Box::new(high),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            CaretTree::Leaf => 1,
            CaretTree::Caret { low, high, .. } => low.leaves() + high.leaves(),
        }
    }

    pub fn carets(&self) -> usize {
        self.leaves() - 1
    }

    pub fn depth(&self) -> usize {
        match self {
            CaretTree::Leaf => 0,
            CaretTree::Caret { low, high, .. } => 1 + low.depth().max(high.depth()),
        }
    }

    pub fn max_dir(&self) -> Option<usize> {
        match self {
            CaretTree::Leaf => None,
            CaretTree::Caret { dir, low, high } => Some(
                [Some(*dir), low.max_dir(), high.max_dir()]
                    .into_iter()
                    .flatten()
                    .max()
                    .unwrap_or(*dir),
            ),
        }
    }

    /// Directions of the carets along the rightmost (high-child) chain, root first.
    pub fn backbone(&self) -> Vec<usize> {
        let mut out = vec![];
        let mut node = self;
        while let CaretTree::Caret { dir, high, .. } = node {
            out.push(*dir);
            node = high;
        }
        out
    }
}

impl fmt::Display for CaretTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaretTree::Leaf => f.write_str("L"),
            CaretTree::Caret { dir, low, high } => write!(f, "({dir} {low} {high})"),
        }
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.base + self.pos, msg)
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {:?}", c as char)))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::parse(self.base + start, "number too large"))
    }

    fn tree(&mut self) -> Result<CaretTree> {
        match self.peek() {
            Some(b'L') => {
                self.pos += 1;
                Ok(CaretTree::Leaf)
            }
            Some(b'(') => {
                self.pos += 1;
                let dir = self.number()?;
                let low = self.tree()?;
                let high = self.tree()?;
                self.expect(b')')?;
                Ok(CaretTree::caret(dir, low, high))
            }
            _ => Err(self.err("expected 'L' or '('")),
        }
    }

    fn perm(&mut self) -> Result<Vec<usize>> {
        self.expect(b'[')?;
        let mut out = vec![];
        if self.peek() == Some(b']') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected ',' or ']'")),
            }
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.err("trailing input")),
        }
    }
}

impl FromStr for CaretTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor {
            src: s.as_bytes(),
            pos: 0,
            base: 0,
        };
        let t = c.tree()?;
        c.finish()?;
        Ok(t)
    }
}

/// Splits the cube along `t`; the second component lists the leaves
/// depth-first, low child before high child.
pub fn tree_to_pattern(t: &CaretTree, dim: usize) -> Result<(Pattern, Vec<Block>)> {
    if let Some(d) = t.max_dir() {
        if d >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: d + 1,
            });
        }
    }
    let mut leaves = Vec::with_capacity(t.leaves());
    fn walk(t: &CaretTree, region: Block, out: &mut Vec<Block>) -> Result<()> {
        match t {
            CaretTree::Leaf => {
                out.push(region);
                Ok(())
            }
            CaretTree::Caret { dir, low, high } => {
                let (lo, hi) = region.split(*dir)?;
                walk(low, lo, out)?;
                walk(high, hi, out)
            }
        }
    }
    walk(t, Block::cube(dim), &mut leaves)?;
    Ok((Pattern::from_blocks_unchecked(dim, leaves.clone()), leaves))
}

/// The tree that picks, at every node, the smallest direction in which all
/// blocks below it fall into one half.
pub fn pattern_to_canonical_tree(p: &Pattern) -> CaretTree {
    fn build(region: &Block, blocks: &mut [Block]) -> CaretTree {
        if blocks.len() <= 1 {
            return CaretTree::Leaf;
        }
        let d = root_direction(region, blocks).expect("pattern is hierarchical");
        let mid = partition_halves(region, d, blocks);
        let (lo, hi) = region.split(d).expect("pattern levels are in range");
        let (low, high) = blocks.split_at_mut(mid);
        CaretTree::caret(d, build(&lo, low), build(&hi, high))
    }
    let mut blocks = p.blocks().to_vec();
    build(&Block::cube(p.dim()), &mut blocks)
}

/// Leaf order of the canonical tree.
pub fn canonical_leaf_order(p: &Pattern) -> Vec<Block> {
    let t = pattern_to_canonical_tree(p);
    tree_to_pattern(&t, p.dim()).expect("canonical tree fits").1
}

/// Recovers the tree whose depth-first leaf order is exactly `leaves`, if
/// one exists. Such a tree is unique.
pub fn order_to_tree(dim: usize, leaves: &[Block]) -> Option<CaretTree> {
    fn build(region: &Block, leaves: &[Block]) -> Option<CaretTree> {
        match leaves.len() {
            0 => None,
            1 => (leaves[0] == *region).then_some(CaretTree::Leaf),
            _ => (0..region.dim()).find_map(|d| {
                let r = region.interval(d);
                let mid = leaves.iter().position(|b| b.interval(d).half_in(r) != Some(false))?;
                if mid == 0 || !leaves[mid..].iter().all(|b| b.interval(d).half_in(r) == Some(true)) {
                    return None;
                }
                let (lo, hi) = region.split(d).ok()?;
                Some(CaretTree::caret(d, build(&lo, &leaves[..mid])?, build(&hi, &leaves[mid..])?))
            }),
        }
    }
    build(&Block::cube(dim), leaves)
}

/// A random tree grown by splitting a uniformly chosen leaf `carets` times.
pub fn random_tree<R: Rng>(rng: &mut R, carets: usize, dim: usize) -> CaretTree {
    fn split_leaf<R: Rng>(t: &mut CaretTree, target: usize, dir: usize) {
        match t {
            CaretTree::Leaf => *t = CaretTree::caret(dir, CaretTree::Leaf, CaretTree::Leaf),
            CaretTree::Caret { low, high, .. } => {
                let n = low.leaves();
                if target < n {
                    split_leaf::<R>(low, target, dir)
                } else {
                    split_leaf::<R>(high, target - n, dir)
                }
            }
        }
    }
    let mut t = CaretTree::Leaf;
    for k in 0..carets {
        let target = rng.gen_range(0..=k);
        let dir = rng.gen_range(0..dim);
        split_leaf::<R>(&mut t, target, dir);
    }
    t
}

/// All tree shapes with `leaves` leaves, every caret in direction `dir`.
pub fn all_trees(leaves: usize, dir: usize) -> Vec<CaretTree> {
    if leaves == 1 {
        return vec![CaretTree::Leaf];
    }
    let mut out = vec![];
    for left in 1..leaves {
        let lows = all_trees(left, dir);
        let highs = all_trees(leaves - left, dir);
        for l in &lows {
            for h in &highs {
                out.push(CaretTree::caret(dir, l.clone(), h.clone()));
            }
        }
    }
    out
}

/// `(T₊, π, T₋)`: domain leaf `i` goes to range leaf `perm[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePairDiagram {
    pub dim: usize,
    pub domain: CaretTree,
    pub perm: Vec<usize>,
    pub range: CaretTree,
}

impl TreePairDiagram {
    pub fn new(dim: usize, domain: CaretTree, perm: Vec<usize>, range: CaretTree) -> Result<Self> {
        let k = domain.leaves();
        if range.leaves() != k || perm.len() != k {
            return Err(Error::NotBijective);
        }
        let mut seen = vec![false; k];
        for &j in &perm {
            if j >= k || std::mem::replace(&mut seen[j], true) {
                return Err(Error::NotBijective);
            }
        }
        for t in [&domain, &range] {
            if let Some(d) = t.max_dir() {
                if d >= dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: d + 1,
                    });
                }
            }
        }
        Ok(TreePairDiagram {
            dim,
            domain,
            perm,
            range,
        })
    }

    /// Parses `tree | perm | tree`.
    pub fn parse(s: &str, dim: usize) -> Result<Self> {
        let mut c = Cursor {
            src: s.as_bytes(),
            pos: 0,
            base: 0,
        };
        let domain = c.tree()?;
        c.expect(b'|')?;
        let perm = c.perm()?;
        c.expect(b'|')?;
        let range = c.tree()?;
        c.finish()?;
        TreePairDiagram::new(dim, domain, perm, range)
    }
}

impl fmt::Display for TreePairDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | [", self.domain)?;
        for (i, j) in self.perm.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "] | {}", self.range)
    }
}

pub fn diagram_to_element(d: &TreePairDiagram) -> Result<Element> {
    let (_, dom) = tree_to_pattern(&d.domain, d.dim)?;
    let (_, ran) = tree_to_pattern(&d.range, d.dim)?;
    let pairs = dom
        .into_iter()
        .zip(&d.perm)
        .map(|(b, &j)| (b, ran[j].clone()))
        .collect();
    make_element(pairs, d.dim)
}

pub fn element_to_diagram(e: &Element) -> TreePairDiagram {
    let domain = pattern_to_canonical_tree(&e.domain());
    let range = pattern_to_canonical_tree(&e.range());
    let dom = tree_to_pattern(&domain, e.dim()).expect("canonical tree fits").1;
    let ran = tree_to_pattern(&range, e.dim()).expect("canonical tree fits").1;
    let perm = dom
        .iter()
        .map(|b| {
            let (_, r) = &e.pairs()[e.pairs().binary_search_by(|p| p.0.cmp(b)).expect("domain block")];
            ran.iter().position(|x| x == r).expect("range block")
        })
        .collect();
    TreePairDiagram {
        dim: e.dim(),
        domain,
        perm,
        range,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> CaretTree {
        s.parse().unwrap()
    }

    fn blk(s: &str) -> Block {
        s.parse().unwrap()
    }

    #[test]
    fn grammar() {
        let tree = t("(0 (1 L L) L)");
        assert_eq!(tree.to_string(), "(0 (1 L L) L)");
        assert_eq!(tree.leaves(), 3);
        assert_eq!(t("  ( 0 L\nL ) ").to_string(), "(0 L L)");
        let err = "(0 L".parse::<CaretTree>().unwrap_err();
        assert!(matches!(err, Error::ParseError { pos: 4, .. }));
        assert!("(0 L L) L".parse::<CaretTree>().is_err());
        assert!("(x L L)".parse::<CaretTree>().is_err());
    }

    #[test]
    fn tree_to_pattern_examples() {
        let (p, order) = tree_to_pattern(&CaretTree::Leaf, 2).unwrap();
        assert_eq!(p, Pattern::cube(2));
        assert_eq!(order, vec![Block::cube(2)]);
        let (_, order) = tree_to_pattern(&t("(0 L L)"), 2).unwrap();
        assert_eq!(order, vec![blk("0/2^1 x 0/2^0"), blk("1/2^1 x 0/2^0")]);
        let (_, order) = tree_to_pattern(&t("(0 (1 L L) L)"), 2).unwrap();
        assert_eq!(
            order,
            vec![blk("0/2^1 x 0/2^1"), blk("0/2^1 x 1/2^1"), blk("1/2^1 x 0/2^0")]
        );
        assert!(tree_to_pattern(&t("(1 L L)"), 1).is_err());
    }

    #[test]
    fn canonical_tree_examples() {
        assert_eq!(pattern_to_canonical_tree(&Pattern::cube(2)), CaretTree::Leaf);
        let quads = tree_to_pattern(&t("(1 (0 L L) (0 L L))"), 2).unwrap().0;
        assert_eq!(pattern_to_canonical_tree(&quads), t("(0 (1 L L) (1 L L))"));
        let comb = Pattern::new(
            1,
            vec![blk("0/2^1"), blk("2/2^2"), blk("3/2^2")],
        )
        .unwrap();
        assert_eq!(pattern_to_canonical_tree(&comb), t("(0 L (0 L L))"));
    }

    #[test]
    fn order_to_tree_recovers_noncanonical_trees() {
        let tree = t("(1 (0 L L) (0 (1 L L) L))");
        let (_, order) = tree_to_pattern(&tree, 2).unwrap();
        assert_eq!(order_to_tree(2, &order), Some(tree));
        let mut swapped = order.clone();
        swapped.swap(0, 3);
        assert_eq!(order_to_tree(2, &swapped), None);
    }

    #[test]
    fn permuted_quadrant_diagram_is_identity() {
        let d = TreePairDiagram::parse("(0 (1 L L) (1 L L)) | [0,2,1,3] | (1 (0 L L) (0 L L))", 2).unwrap();
        assert!(diagram_to_element(&d).unwrap().is_identity());
        let d = TreePairDiagram::parse("(0 (1 L L) (1 L L)) | [0,1,2,3] | (1 (0 L L) (0 L L))", 2).unwrap();
        assert!(!diagram_to_element(&d).unwrap().is_identity());
    }

    #[test]
    fn diagram_examples() {
        let id = TreePairDiagram::parse("L | [0] | L", 2).unwrap();
        assert!(diagram_to_element(&id).unwrap().is_identity());
        assert_eq!(element_to_diagram(&Element::identity(2)), id);
        let c0 = TreePairDiagram::parse("(0 L L) | [0,1] | (1 L L)", 2).unwrap();
        let e = diagram_to_element(&c0).unwrap();
        // domain is the left/right halves: this diagram is C0's inverse
        assert_eq!(e.block_count(), 2);
        let back = element_to_diagram(&e);
        assert_eq!(back.to_string(), "(0 L L) | [0,1] | (1 L L)");
        assert!(TreePairDiagram::parse("L | [0,1] | L", 2).is_err());
        assert!(TreePairDiagram::parse("(0 L L) | [1,1] | (1 L L)", 2).is_err());
    }

    #[test]
    fn all_tree_counts_are_catalan() {
        let counts: Vec<usize> = (1..=7).map(|k| all_trees(k, 0).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132]);
    }
}
