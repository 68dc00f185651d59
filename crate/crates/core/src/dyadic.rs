//! Dyadic intervals, blocks and hierarchical partitions of the unit n-cube.
//!
//! A [`DyadicInterval`] `(num, level)` stands for `[num/2^level, (num+1)/2^level]`.
//! A [`Block`] is a product of one interval per coordinate and a [`Pattern`] is a
//! partition of the cube into blocks that can be reached by iterated halving.
//!
//! Direction `0` halves the first coordinate (a vertical cut), direction `1`
//! halves the second coordinate (a horizontal cut), and so on for higher
//! dimensions. In every split the lower half comes first.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU8, Ordering as AtomicOrdering};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, PatternFault, Result};

/// Levels are stored in `u8` and numerators in `u128`, so no configuration may
/// exceed this.
pub const LEVEL_CEILING: u8 = 127;

static MAX_LEVEL: AtomicU8 = AtomicU8::new(64);

/// The process-wide maximum interval level (default 64).
pub fn max_level() -> u8 {
    MAX_LEVEL.load(AtomicOrdering::Relaxed)
}

/// Sets the maximum interval level; values above [`LEVEL_CEILING`] are rejected.
pub fn set_max_level(level: u8) -> Result<()> {
    if level > LEVEL_CEILING {
        return Err(Error::OverflowLevel {
            level: level as u32,
            max: LEVEL_CEILING,
        });
    }
    MAX_LEVEL.store(level, AtomicOrdering::Relaxed);
    Ok(())
}

fn check_level(level: u32) -> Result<u8> {
    let max = max_level();
    if level > max as u32 {
        Err(Error::OverflowLevel { level, max })
    } else {
        Ok(level as u8)
    }
}

/// How two dyadic intervals sit relative to each other. Dyadic intervals never
/// partially overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalRelation {
    Equal,
    /// The first interval lies strictly inside the second.
    Inside,
    /// The second interval lies strictly inside the first.
    Contains,
    Disjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyadicInterval {
    num: u128,
    level: u8,
}

impl DyadicInterval {
    pub const UNIT: DyadicInterval = DyadicInterval { num: 0, level: 0 };

    pub fn new(num: u128, level: u32) -> Result<Self> {
        let level = check_level(level)?;
        if level < 128 && num >> level != 0 {
            return Err(Error::InvalidAddress);
        }
        Ok(DyadicInterval { num, level })
    }

    pub fn num(&self) -> u128 {
        self.num
    }

    pub fn level(&self) -> u32 {
        self.level as u32
    }

    pub fn is_unit(&self) -> bool {
        self.level == 0
    }

    /// Lower and upper halves.
    pub fn halves(&self) -> Result<(Self, Self)> {
        let level = check_level(self.level as u32 + 1)?;
        Ok((
            DyadicInterval {
                num: self.num << 1,
                level,
            },
            DyadicInterval {
                num: (self.num << 1) | 1,
                level,
            },
        ))
    }

    pub fn parent(&self) -> Option<Self> {
        (self.level > 0).then(|| DyadicInterval {
            num: self.num >> 1,
            level: self.level - 1,
        })
    }

    /// The other half of the parent interval.
    pub fn sibling(&self) -> Option<Self> {
        (self.level > 0).then_some(DyadicInterval {
            num: self.num ^ 1,
            level: self.level,
        })
    }

    /// `true` when this is the upper half of its parent.
    pub fn is_upper(&self) -> bool {
        self.num & 1 == 1
    }

    /// `self ⊆ other`.
    pub fn within(&self, other: &Self) -> bool {
        self.level >= other.level && self.num >> (self.level - other.level) == other.num
    }

    /// For `self` strictly inside `parent`, which half of `parent` it lies in
    /// (`false` = lower).
    pub fn half_in(&self, parent: &Self) -> Option<bool> {
        if self.level <= parent.level || !self.within(parent) {
            return None;
        }
        let shift = self.level - parent.level - 1;
        Some((self.num >> shift) & 1 == 1)
    }

    /// The finer of two nested intervals, or `None` when they are disjoint.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        match classify_intervals(self, other) {
            IntervalRelation::Equal | IntervalRelation::Inside => Some(*self),
            IntervalRelation::Contains => Some(*other),
            IntervalRelation::Disjoint => None,
        }
    }

    /// Position of `self` inside `sup` as a halving path.
    pub fn address_in(&self, sup: &Self) -> Result<BitPath> {
        if !self.within(sup) {
            return Err(Error::InvalidAddress);
        }
        let len = self.level - sup.level;
        let bits = if len == 0 {
            0
        } else {
            self.num & (u128::MAX >> (128 - len as u32))
        };
        Ok(BitPath { bits, len })
    }

    /// The sub-interval of `self` reached by following `path`.
    pub fn descend(&self, path: &BitPath) -> Result<Self> {
        let level = check_level(self.level as u32 + path.len as u32)?;
        Ok(DyadicInterval {
            num: (self.num << path.len) | path.bits,
            level,
        })
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.level)
    }
}

impl FromStr for DyadicInterval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (num, level) = s
            .split_once("/2^")
            .ok_or_else(|| Error::parse(0, format!("expected num/2^level, found {s:?}")))?;
        let num: u128 = num
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad numerator in {s:?}")))?;
        let level: u32 = level
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad level in {s:?}")))?;
        DyadicInterval::new(num, level)
    }
}

pub fn classify_intervals(a: &DyadicInterval, b: &DyadicInterval) -> IntervalRelation {
    match a.level.cmp(&b.level) {
        Ordering::Equal if a.num == b.num => IntervalRelation::Equal,
        Ordering::Equal => IntervalRelation::Disjoint,
        Ordering::Greater if a.within(b) => IntervalRelation::Inside,
        Ordering::Less if b.within(a) => IntervalRelation::Contains,
        _ => IntervalRelation::Disjoint,
    }
}

/// A halving path: `len` bits, most significant first; `0` = lower half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitPath {
    bits: u128,
    len: u8,
}

impl BitPath {
    pub const EMPTY: BitPath = BitPath { bits: 0, len: 0 };

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

impl fmt::Display for BitPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.len).rev() {
            f.write_str(if (self.bits >> i) & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dyadic box: one interval per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block(SmallVec<[DyadicInterval; 3]>);

impl Block {
    pub fn cube(dim: usize) -> Self {
        Block(SmallVec::from_elem(DyadicInterval::UNIT, dim))
    }

    pub fn new(intervals: impl IntoIterator<Item = DyadicInterval>) -> Self {
        Block(intervals.into_iter().collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn intervals(&self) -> &[DyadicInterval] {
        &self.0
    }

    pub fn interval(&self, d: usize) -> &DyadicInterval {
        &self.0[d]
    }

    pub(crate) fn with_interval(&self, d: usize, iv: DyadicInterval) -> Self {
        let mut b = self.clone();
        b.0[d] = iv;
        b
    }

    /// Sum of levels: the tree depth at which this block appears as a leaf.
    pub fn level_sum(&self) -> u32 {
        self.0.iter().map(|iv| iv.level as u32).sum()
    }

    /// `(lower, upper)` halves in direction `d`.
    pub fn split(&self, d: usize) -> Result<(Block, Block)> {
        if d >= self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: d + 1,
            });
        }
        let (lo, hi) = self.0[d].halves()?;
        Ok((self.with_interval(d, lo), self.with_interval(d, hi)))
    }

    /// `self ⊆ other`, coordinate-wise.
    pub fn within(&self, other: &Block) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a.within(b))
    }

    pub fn intersect(&self, other: &Block) -> Option<Block> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.intersect(b))
            .collect::<Option<SmallVec<_>>>()
            .map(Block)
    }

    pub fn disjoint(&self, other: &Block) -> bool {
        self.intersect(other).is_none()
    }

    /// Exact measure as `2^-level_sum`.
    pub fn measure_exponent(&self) -> u32 {
        self.level_sum()
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, iv) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

impl FromStr for Block {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ivs = s
            .split('x')
            .map(str::parse)
            .collect::<Result<SmallVec<[DyadicInterval; 3]>>>()?;
        Ok(Block(ivs))
    }
}

/// Per-coordinate halving paths from `sup` down to `sub`.
pub fn relative_address(sub: &Block, sup: &Block) -> Result<Vec<BitPath>> {
    if sub.dim() != sup.dim() {
        return Err(Error::DimensionMismatch {
            expected: sup.dim(),
            found: sub.dim(),
        });
    }
    sub.0
        .iter()
        .zip(&sup.0)
        .map(|(a, b)| a.address_in(b))
        .collect()
}

/// Pushes `sub ⊆ from` through the canonical affine map `from → to`.
pub fn transfer_subblock(sub: &Block, from: &Block, to: &Block) -> Result<Block> {
    if from.dim() != to.dim() {
        return Err(Error::DimensionMismatch {
            expected: from.dim(),
            found: to.dim(),
        });
    }
    sub.0
        .iter()
        .zip(&from.0)
        .zip(&to.0)
        .map(|((s, f), t)| t.descend(&s.address_in(f)?))
        .collect::<Result<SmallVec<_>>>()
        .map(Block)
}

/// A hierarchical dyadic partition of the unit cube, stored as a sorted block list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    dim: usize,
    blocks: Vec<Block>,
}

impl Pattern {
    pub fn cube(dim: usize) -> Self {
        Pattern {
            dim,
            blocks: vec![Block::cube(dim)],
        }
    }

    /// Validates `blocks` as a hierarchical partition of the `dim`-cube.
    pub fn new(dim: usize, blocks: Vec<Block>) -> Result<Self> {
        validate_pattern(dim, blocks)
    }

    /// Caller guarantees the blocks form a hierarchical partition.
    pub(crate) fn from_blocks_unchecked(dim: usize, mut blocks: Vec<Block>) -> Self {
        blocks.sort_unstable();
        Pattern { dim, blocks }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains_block(&self, b: &Block) -> bool {
        self.blocks.binary_search(b).is_ok()
    }

    /// Every block of `self` lies inside some block of `coarser`.
    pub fn refines(&self, coarser: &Pattern) -> bool {
        self.blocks
            .iter()
            .all(|b| coarser.blocks.iter().any(|c| b.within(c)))
    }

    /// Exact total measure `Σ 2^-level_sum` as a fraction over `2^denominator_exp`.
    pub fn measure(&self) -> (BigUint, u32) {
        total_measure(&self.blocks)
    }

    pub fn overlay(&self, other: &Pattern) -> Result<Pattern> {
        overlay(self, other)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            writeln!(f, "{b}")?;
        }
        Ok(())
    }
}

fn total_measure(blocks: &[Block]) -> (BigUint, u32) {
    let max = blocks.iter().map(Block::level_sum).max().unwrap_or(0);
    let mut sum = BigUint::zero();
    for b in blocks {
        sum += BigUint::one() << (max - b.level_sum());
    }
    (sum, max)
}

/// Accepts `blocks` iff they form a hierarchical partition of the `dim`-cube.
pub fn validate_pattern(dim: usize, mut blocks: Vec<Block>) -> Result<Pattern> {
    if blocks.is_empty() {
        return Err(Error::InvalidPattern(PatternFault::Empty));
    }
    if blocks.iter().any(|b| b.dim() != dim) {
        return Err(Error::InvalidPattern(PatternFault::WrongDimension));
    }
    if blocks.iter().any(|b| b.level_sum() > 0 && b.0.iter().any(|iv| iv.level > max_level())) {
        let level = blocks
            .iter()
            .flat_map(|b| b.0.iter().map(|iv| iv.level as u32))
            .max()
            .unwrap_or(0);
        return Err(Error::OverflowLevel {
            level,
            max: max_level(),
        });
    }
    let cube = Block::cube(dim);
    if hierarchical(&cube, &mut blocks) {
        blocks.sort_unstable();
        return Ok(Pattern { dim, blocks });
    }
    Err(Error::InvalidPattern(diagnose(&blocks)))
}

fn diagnose(blocks: &[Block]) -> PatternFault {
    let (sum, exp) = total_measure(blocks);
    let one = BigUint::one() << exp;
    if sum > one {
        return PatternFault::Overlap;
    }
    let mut sorted = blocks.to_vec();
    sorted.sort_unstable();
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            if !a.disjoint(b) {
                return PatternFault::Overlap;
            }
        }
    }
    if sum < one {
        PatternFault::MeasureDeficit
    } else {
        PatternFault::NonHierarchical
    }
}

/// The smallest direction in which every block of a multi-block partition of
/// `region` lies in one half, if any.
pub(crate) fn root_direction(region: &Block, blocks: &[Block]) -> Option<usize> {
    (0..region.dim()).find(|&d| {
        let r = region.interval(d);
        blocks.iter().all(|b| b.interval(d).level > r.level)
    })
}

/// Reorders `blocks` so those in the lower half of `region` along `d` come
/// first; returns the split index. Blocks must be strictly inside in `d`.
pub(crate) fn partition_halves(region: &Block, d: usize, blocks: &mut [Block]) -> usize {
    let r = *region.interval(d);
    let mut mid = 0;
    for i in 0..blocks.len() {
        if blocks[i].interval(d).half_in(&r) == Some(false) {
            blocks.swap(i, mid);
            mid += 1;
        }
    }
    mid
}

fn hierarchical(region: &Block, blocks: &mut [Block]) -> bool {
    match blocks.len() {
        0 => false,
        1 => blocks[0] == *region,
        _ => {
            if !blocks.iter().all(|b| b.within(region)) {
                return false;
            }
            let Some(d) = root_direction(region, blocks) else {
                return false;
            };
            let mid = partition_halves(region, d, blocks);
            let Ok((lo, hi)) = region.split(d) else {
                return false;
            };
            let (low, high) = blocks.split_at_mut(mid);
            hierarchical(&lo, low) && hierarchical(&hi, high)
        }
    }
}

const PAIRWISE_OVERLAY_LIMIT: usize = 1024;

/// Common refinement of two patterns, keeping a tag from each side on every
/// output block. Inputs are `(block, tag)` lists of hierarchical partitions.
pub(crate) fn overlay_tagged<T: Copy, U: Copy>(
    dim: usize,
    p: &[(Block, T)],
    q: &[(Block, U)],
) -> Result<Vec<(Block, T, U)>> {
    let mut out = Vec::with_capacity(p.len().max(q.len()));
    if p.len() * q.len() <= PAIRWISE_OVERLAY_LIMIT {
        // Pieces of the common refinement are exactly the nonempty intersections.
        for (a, t) in p {
            for (b, u) in q {
                if let Some(c) = a.intersect(b) {
                    out.push((c, *t, *u));
                }
            }
        }
        return Ok(out);
    }
    overlay_rec(&Block::cube(dim), p.to_vec(), q.to_vec(), &mut out)?;
    Ok(out)
}

fn overlay_rec<T: Copy, U: Copy>(
    region: &Block,
    p: Vec<(Block, T)>,
    q: Vec<(Block, U)>,
    out: &mut Vec<(Block, T, U)>,
) -> Result<()> {
    if p.len() == 1 {
        let t = p[0].1;
        out.extend(q.into_iter().map(|(b, u)| (b, t, u)));
        return Ok(());
    }
    if q.len() == 1 {
        let u = q[0].1;
        out.extend(p.into_iter().map(|(b, t)| (b, t, u)));
        return Ok(());
    }
    let d = (0..region.dim())
        .find(|&d| {
            let r = region.interval(d).level;
            p.iter().all(|(b, _)| b.interval(d).level > r)
        })
        .ok_or(Error::InvalidPattern(PatternFault::NonHierarchical))?;
    let (lo, hi) = region.split(d)?;
    let r = *region.interval(d);
    let (p_lo, p_hi): (Vec<_>, Vec<_>) = p
        .into_iter()
        .partition(|(b, _)| b.interval(d).half_in(&r) == Some(false));
    let mut q_lo = Vec::with_capacity(q.len());
    let mut q_hi = Vec::with_capacity(q.len());
    for (b, u) in q {
        match b.interval(d).half_in(&r) {
            Some(false) => q_lo.push((b, u)),
            Some(true) => q_hi.push((b, u)),
            None => {
                q_lo.push((b.with_interval(d, *lo.interval(d)), u));
                q_hi.push((b.with_interval(d, *hi.interval(d)), u));
            }
        }
    }
    overlay_rec(&lo, p_lo, q_lo, out)?;
    overlay_rec(&hi, p_hi, q_hi, out)
}

/// Coarsest common refinement of two patterns.
pub fn overlay(p: &Pattern, q: &Pattern) -> Result<Pattern> {
    if p.dim != q.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: q.dim,
        });
    }
    let pt: Vec<_> = p.blocks.iter().map(|b| (b.clone(), ())).collect();
    let qt: Vec<_> = q.blocks.iter().map(|b| (b.clone(), ())).collect();
    let blocks = overlay_tagged(p.dim, &pt, &qt)?
        .into_iter()
        .map(|(b, _, _)| b)
        .collect();
    Ok(Pattern::from_blocks_unchecked(p.dim, blocks))
}

/// Splits `b` in direction `d`; free function form.
pub fn split_block(b: &Block, d: usize) -> Result<(Block, Block)> {
    b.split(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(num: u128, level: u32) -> DyadicInterval {
        DyadicInterval::new(num, level).unwrap()
    }

    fn blk(s: &str) -> Block {
        s.parse().unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_intervals(&iv(0, 1), &iv(0, 1)), IntervalRelation::Equal);
        assert_eq!(classify_intervals(&iv(0, 2), &iv(0, 1)), IntervalRelation::Inside);
        assert_eq!(classify_intervals(&iv(1, 2), &iv(0, 1)), IntervalRelation::Inside);
        assert_eq!(classify_intervals(&iv(2, 2), &iv(0, 1)), IntervalRelation::Disjoint);
        assert_eq!(classify_intervals(&iv(0, 1), &iv(1, 2)), IntervalRelation::Contains);
    }

    #[test]
    fn classify_never_partial_overlap() {
        // rational endpoint comparison as an independent oracle
        let mut all = vec![];
        for level in 0..=4u32 {
            for num in 0..(1u128 << level) {
                all.push(iv(num, level));
            }
        }
        for a in &all {
            for b in &all {
                let (alo, ahi) = (a.num << (4 - a.level), (a.num + 1) << (4 - a.level));
                let (blo, bhi) = (b.num << (4 - b.level), (b.num + 1) << (4 - b.level));
                let expected = if alo == blo && ahi == bhi {
                    IntervalRelation::Equal
                } else if alo >= blo && ahi <= bhi {
                    IntervalRelation::Inside
                } else if blo >= alo && bhi <= ahi {
                    IntervalRelation::Contains
                } else {
                    assert!(ahi <= blo || bhi <= alo, "partial overlap {a} {b}");
                    IntervalRelation::Disjoint
                };
                assert_eq!(classify_intervals(a, b), expected);
            }
        }
    }

    #[test]
    fn split_examples() {
        let sq = Block::cube(2);
        assert_eq!(
            sq.split(0).unwrap(),
            (blk("0/2^1 x 0/2^0"), blk("1/2^1 x 0/2^0"))
        );
        assert_eq!(
            sq.split(1).unwrap(),
            (blk("0/2^0 x 0/2^1"), blk("0/2^0 x 1/2^1"))
        );
        assert_eq!(
            blk("1/2^1 x 0/2^0").split(1).unwrap(),
            (blk("1/2^1 x 0/2^1"), blk("1/2^1 x 1/2^1"))
        );
        assert!(matches!(sq.split(2), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn split_overflow() {
        let deep = Block::new([iv(0, max_level() as u32)]);
        assert!(matches!(deep.split(0), Err(Error::OverflowLevel { .. })));
    }

    #[test]
    fn addresses() {
        let sq = Block::cube(2);
        let a = relative_address(&sq, &sq).unwrap();
        assert!(a.iter().all(BitPath::is_empty));
        let a = relative_address(&blk("1/2^2 x 0/2^0"), &sq).unwrap();
        assert_eq!((a[0].to_string(), a[1].to_string()), ("01".into(), "".into()));
        let a = relative_address(&blk("2/2^2 x 1/2^1"), &blk("1/2^1 x 0/2^0")).unwrap();
        assert_eq!((a[0].to_string(), a[1].to_string()), ("0".into(), "1".into()));
        assert!(matches!(
            relative_address(&blk("0/2^1 x 0/2^0"), &blk("1/2^1 x 0/2^0")),
            Err(Error::InvalidAddress)
        ));
    }

    #[test]
    fn transfer_examples() {
        let bottom = blk("0/2^0 x 0/2^1");
        let left = blk("0/2^1 x 0/2^0");
        let q = blk("0/2^1 x 0/2^1");
        assert_eq!(transfer_subblock(&q, &bottom, &left).unwrap(), blk("0/2^2 x 0/2^0"));
        assert_eq!(transfer_subblock(&bottom, &bottom, &left).unwrap(), left);
        let back = transfer_subblock(&blk("0/2^2 x 0/2^0"), &left, &bottom).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn validate_examples() {
        assert!(Pattern::new(2, vec![Block::cube(2)]).is_ok());
        let quads = vec![
            blk("0/2^1 x 0/2^1"),
            blk("0/2^1 x 1/2^1"),
            blk("1/2^1 x 0/2^1"),
            blk("1/2^1 x 1/2^1"),
        ];
        assert!(Pattern::new(2, quads).is_ok());
        let bad = vec![blk("0/2^1 x 0/2^0"), blk("1/2^1 x 0/2^0"), blk("0/2^0 x 1/2^1")];
        assert!(matches!(
            Pattern::new(2, bad),
            Err(Error::InvalidPattern(PatternFault::Overlap))
        ));
        let gap = vec![blk("0/2^1 x 0/2^0")];
        assert!(matches!(
            Pattern::new(2, gap),
            Err(Error::InvalidPattern(PatternFault::MeasureDeficit))
        ));
    }

    #[test]
    fn every_disjoint_cover_of_the_square_is_hierarchical() {
        // any full-width and full-height block would intersect
        let b = |x: u128, xl: u32, y: u128, yl: u32| Block::new([iv(x, xl), iv(y, yl)]);
        let blocks = vec![
            b(0, 1, 0, 2),
            b(0, 2, 1, 2),
            b(1, 2, 1, 2),
            b(2, 2, 0, 1),
            b(3, 2, 0, 1),
            b(0, 2, 1, 1),
            b(1, 2, 1, 1),
            b(1, 1, 1, 1),
        ];
        assert!(Pattern::new(2, blocks).is_ok());
    }

    #[test]
    fn three_dimensional_pinwheel_is_rejected() {
        let b = |x: (u128, u32), y: (u128, u32), z: (u128, u32)| {
            Block::new([iv(x.0, x.1), iv(y.0, y.1), iv(z.0, z.1)])
        };
        let (full, lo, hi) = ((0, 0), (0, 1), (1, 1));
        let blocks = vec![
            b(full, lo, lo),
            b(lo, full, hi),
            b(hi, hi, full),
            b(lo, hi, lo),
            b(hi, lo, hi),
        ];
        assert!(matches!(
            Pattern::new(3, blocks),
            Err(Error::InvalidPattern(PatternFault::NonHierarchical))
        ));
    }

    #[test]
    fn overlay_examples() {
        let sq = Pattern::cube(2);
        let (l, r) = Block::cube(2).split(0).unwrap();
        let (bo, to) = Block::cube(2).split(1).unwrap();
        let vert = Pattern::new(2, vec![l, r]).unwrap();
        let horiz = Pattern::new(2, vec![bo, to]).unwrap();
        assert_eq!(overlay(&vert, &sq).unwrap(), vert);
        assert_eq!(overlay(&vert, &vert).unwrap(), vert);
        let quads = overlay(&vert, &horiz).unwrap();
        assert_eq!(quads.len(), 4);
        assert_eq!(quads, overlay(&horiz, &vert).unwrap());
        assert!(quads.refines(&vert) && quads.refines(&horiz));
    }

    #[test]
    fn text_forms() {
        let b = blk("0/2^1 x 1/2^1");
        assert_eq!(b.to_string(), "0/2^1 x 1/2^1");
        assert!("3/2^1".parse::<DyadicInterval>().is_err());
        assert!("1/3".parse::<DyadicInterval>().is_err());
    }
}
