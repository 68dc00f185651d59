//! Group elements of nV as reduced lists of `(domain block, range block)` pairs.
//!
//! Composition is written apply-left-first: `compose(f, g)` maps a point `p`
//! to `g(f(p))`. Every constructor returns a reduced, sorted form that
//! depends only on the map, so structural equality is group equality.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::dyadic::{overlay_tagged, transfer_subblock, validate_pattern, Block, DyadicInterval, Pattern};
use crate::error::{Error, Result};
use crate::tree::{random_tree, tree_to_pattern};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    dim: usize,
    pairs: Vec<(Block, Block)>,
}

impl Element {
    pub fn identity(dim: usize) -> Self {
        Element {
            dim,
            pairs: vec![(Block::cube(dim), Block::cube(dim))],
        }
    }

    /// Validates both patterns and the pairing, then reduces.
    pub fn new(dim: usize, pairs: Vec<(Block, Block)>) -> Result<Self> {
        make_element(pairs, dim)
    }

    /// Caller guarantees both sides are partitions and the pairing is a bijection.
    pub(crate) fn from_pairs_unchecked(dim: usize, pairs: Vec<(Block, Block)>) -> Self {
        reduce_pairs(dim, pairs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[(Block, Block)] {
        &self.pairs
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.len() == 1 && self.pairs[0].0 == self.pairs[0].1
    }

    pub fn domain(&self) -> Pattern {
        Pattern::from_blocks_unchecked(self.dim, self.pairs.iter().map(|p| p.0.clone()).collect())
    }

    pub fn range(&self) -> Pattern {
        Pattern::from_blocks_unchecked(self.dim, self.pairs.iter().map(|p| p.1.clone()).collect())
    }

    /// Number of pairs in the reduced form.
    pub fn block_count(&self) -> usize {
        self.pairs.len()
    }

    /// Carets per tree of the minimal diagram.
    pub fn caret_count(&self) -> usize {
        self.pairs.len() - 1
    }

    /// Largest level sum over all blocks on either side.
    pub fn depth(&self) -> u32 {
        self.pairs
            .iter()
            .flat_map(|(d, r)| [d.level_sum(), r.level_sum()])
            .max()
            .unwrap_or(0)
    }

    pub fn inverse(&self) -> Element {
        invert(self)
    }

    pub fn then(&self, g: &Element) -> Result<Element> {
        compose(self, g)
    }

    /// `true` when every block on both sides spans the full cube in every
    /// coordinate except the first.
    pub fn is_vertical_only(&self) -> bool {
        self.pairs.iter().all(|(d, r)| {
            d.intervals()[1..].iter().all(DyadicInterval::is_unit)
                && r.intervals()[1..].iter().all(DyadicInterval::is_unit)
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        canonical_serialize(self)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Element> {
        canonical_deserialize(bytes)
    }
}

/// Validates `pairs` as a bijection between two hierarchical patterns and
/// returns the reduced element.
pub fn make_element(pairs: Vec<(Block, Block)>, dim: usize) -> Result<Element> {
    for (d, r) in &pairs {
        for b in [d, r] {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: b.dim(),
                });
            }
        }
    }
    let domain = validate_pattern(dim, pairs.iter().map(|p| p.0.clone()).collect())?;
    let range = validate_pattern(dim, pairs.iter().map(|p| p.1.clone()).collect())?;
    if domain.len() != pairs.len() || range.len() != pairs.len() {
        return Err(Error::NotBijective);
    }
    Ok(reduce_pairs(dim, pairs))
}

/// Merges sibling pairs until no merge applies. Two pairs merge when their
/// domains are the lower and upper halves of a block in some direction and
/// their ranges are the lower and upper halves, in the same order, of a block
/// in the same direction.
///
/// In dimension 2 and above a map can have several such fixpoints, so the
/// result is rebuilt from a partition that depends only on the map (see
/// [`canonical_partition`]) and merged again.
pub fn reduce(e: &Element) -> Element {
    reduce_pairs(e.dim, e.pairs.clone())
}

fn merge_partner(map: &BTreeMap<Block, Block>, d: &Block, r: &Block) -> Option<(usize, Block, Block)> {
    for a in 0..d.dim() {
        let (di, ri) = (d.interval(a), r.interval(a));
        let (Some(ds), Some(rs)) = (di.sibling(), ri.sibling()) else {
            continue;
        };
        if di.is_upper() != ri.is_upper() {
            continue;
        }
        let d_sib = d.with_interval(a, ds);
        if let Some(r_other) = map.get(&d_sib) {
            if *r_other == r.with_interval(a, rs) {
                return Some((a, d_sib, r_other.clone()));
            }
        }
    }
    None
}

fn merge_pairs(pairs: Vec<(Block, Block)>) -> Vec<(Block, Block)> {
    let mut map: BTreeMap<Block, Block> = BTreeMap::new();
    let mut work: Vec<Block> = Vec::with_capacity(pairs.len());
    for (d, r) in pairs {
        work.push(d.clone());
        map.insert(d, r);
    }
    while let Some(d) = work.pop() {
        let Some(r) = map.get(&d).cloned() else {
            continue;
        };
        if let Some((a, d_sib, _)) = merge_partner(&map, &d, &r) {
            map.remove(&d);
            map.remove(&d_sib);
            let dp = d.with_interval(a, d.interval(a).parent().expect("sibling has parent"));
            let rp = r.with_interval(a, r.interval(a).parent().expect("sibling has parent"));
            map.insert(dp.clone(), rp);
            work.push(dp);
        }
    }
    map.into_iter().collect()
}

fn reduce_pairs(dim: usize, pairs: Vec<(Block, Block)>) -> Element {
    let merged = merge_pairs(pairs);
    if dim < 2 || merged.len() < 2 || (dim == 2 && distinct_maps(&merged)) {
        return Element { dim, pairs: merged };
    }
    let mut canon = canonical_partition(dim, &merged);
    canon.sort_unstable();
    let mut canon = merge_pairs(canon);
    if dim > 2 && !both_hierarchical(dim, &canon) {
        canon = hierarchize(dim, canon, 0);
        canon = hierarchize(dim, canon, 1);
        canon = merge_keeping_hierarchy(dim, canon);
    }
    Element { dim, pairs: canon }
}

/// In dimension 2 a reduced form in which no two pairs share a block map is
/// the only reduced form of its map.
fn distinct_maps(pairs: &[(Block, Block)]) -> bool {
    let mut maps: Vec<BlockMap> = pairs.iter().map(block_map).collect();
    maps.sort_unstable();
    maps.windows(2).all(|w| w[0] != w[1])
}

fn block_map((d, r): &(Block, Block)) -> BlockMap {
    (0..d.dim()).map(|a| AxisMap::of(d.interval(a), r.interval(a))).collect()
}

fn both_hierarchical(dim: usize, pairs: &[(Block, Block)]) -> bool {
    validate_pattern(dim, pairs.iter().map(|p| p.0.clone()).collect()).is_ok()
        && validate_pattern(dim, pairs.iter().map(|p| p.1.clone()).collect()).is_ok()
}

fn side(p: &(Block, Block), s: usize) -> &Block {
    if s == 0 {
        &p.0
    } else {
        &p.1
    }
}

/// Splits pairs until side `s` comes from a tree. From dimension 3 on, a
/// partition into dyadic blocks can cross every midline of the cube; the
/// blocks crossing the first one are halved, which refines the other side
/// without breaking its hierarchy.
fn hierarchize(dim: usize, pairs: Vec<(Block, Block)>, s: usize) -> Vec<(Block, Block)> {
    fn rec(dim: usize, b: &Block, mut pairs: Vec<(Block, Block)>, s: usize, out: &mut Vec<(Block, Block)>) {
        if pairs.len() == 1 {
            out.append(&mut pairs);
            return;
        }
        let full = |p: &(Block, Block), a: usize| side(p, s).interval(a) == b.interval(a);
        let a = match (0..dim).find(|&a| !pairs.iter().any(|p| full(p, a))) {
            Some(a) => a,
            None => {
                pairs = pairs
                    .into_iter()
                    .flat_map(|p| {
                        if full(&p, 0) {
                            let (dl, dh) = p.0.split(0).expect("split within level bound");
                            let (rl, rh) = p.1.split(0).expect("split within level bound");
                            vec![(dl, rl), (dh, rh)]
                        } else {
                            vec![p]
                        }
                    })
                    .collect();
                0
            }
        };
        let (lo, hi) = b.split(a).expect("split within level bound");
        let (low, high): (Vec<_>, Vec<_>) = pairs.into_iter().partition(|p| side(p, s).within(&lo));
        rec(dim, &lo, low, s, out);
        rec(dim, &hi, high, s, out);
    }
    let mut out = Vec::with_capacity(pairs.len());
    rec(dim, &Block::cube(dim), pairs, s, &mut out);
    out.sort_unstable();
    out
}

/// Like [`merge_pairs`], but skips any merge after which either side would no
/// longer come from a tree.
fn merge_keeping_hierarchy(dim: usize, mut pairs: Vec<(Block, Block)>) -> Vec<(Block, Block)> {
    'outer: loop {
        let map: BTreeMap<Block, Block> = pairs.iter().cloned().collect();
        for (d, r) in &pairs {
            let Some((a, d_sib, _)) = merge_partner(&map, d, r) else {
                continue;
            };
            let dp = d.with_interval(a, d.interval(a).parent().expect("sibling has parent"));
            let rp = r.with_interval(a, r.interval(a).parent().expect("sibling has parent"));
            let mut next: Vec<_> = pairs.iter().filter(|p| p.0 != *d && p.0 != d_sib).cloned().collect();
            next.push((dp, rp));
            if both_hierarchical(dim, &next) {
                next.sort_unstable();
                pairs = next;
                continue 'outer;
            }
        }
        return pairs;
    }
}

/// One coordinate of a block map: `x ↦ 2^s·x + tn/2^tv`, with `tn` odd or zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct AxisMap {
    s: i32,
    tn: i128,
    tv: u32,
}

impl AxisMap {
    fn of(d: &DyadicInterval, r: &DyadicInterval) -> Self {
        let (mut tn, mut tv) = (r.num() as i128 - d.num() as i128, r.level());
        if tn == 0 {
            tv = 0;
        }
        while tv > 0 && tn % 2 == 0 {
            tn /= 2;
            tv -= 1;
        }
        AxisMap {
            s: d.level() as i32 - r.level() as i32,
            tn,
            tv,
        }
    }

    /// Coarsest level at which a dyadic interval has a dyadic image.
    fn threshold(&self) -> u32 {
        (self.s + self.tv as i32).max(0) as u32
    }

    fn image(&self, iv: &DyadicInterval) -> DyadicInterval {
        let level = (iv.level() as i32 - self.s) as u32;
        let num = iv.num() as i128 + (self.tn << (level - self.tv));
        DyadicInterval::new(num as u128, level).expect("image of an admissible interval")
    }
}

type BlockMap = SmallVec<[AxisMap; 3]>;

struct Canonical<'a> {
    dim: usize,
    pairs: &'a [(Block, Block)],
    maps: Vec<BlockMap>,
    out: Vec<(Block, Block)>,
}

impl Canonical<'_> {
    fn visit(&mut self, b: Block, live: Vec<usize>) {
        let first = &self.maps[live[0]];
        if live.iter().all(|&i| self.maps[i] == *first) {
            match (0..self.dim).find(|&a| b.interval(a).level() < first[a].threshold()) {
                None => {
                    let image = Block::new((0..self.dim).map(|a| first[a].image(b.interval(a))));
                    self.out.push((b, image));
                }
                Some(a) => self.split(b, a, live),
            }
            return;
        }
        let a = (0..self.dim)
            .find(|&a| self.separated(&b, &live, a))
            .expect("distinct maps meet across some face");
        self.split(b, a, live);
    }

    fn split(&mut self, b: Block, a: usize, live: Vec<usize>) {
        let (lo, hi) = b.split(a).expect("split stays above the levels of the input");
        for c in [lo, hi] {
            let sub = live.iter().copied().filter(|&i| self.pairs[i].0.intersect(&c).is_some()).collect();
            self.visit(c, sub);
        }
    }

    /// Whether two pieces of `b` with different maps share a face normal to `a`.
    fn separated(&self, b: &Block, live: &[usize], a: usize) -> bool {
        let pieces: Vec<(Block, usize)> = live
            .iter()
            .map(|&i| (self.pairs[i].0.intersect(b).expect("live pieces meet the block"), i))
            .collect();
        let top = pieces.iter().map(|(p, _)| p.interval(a).level()).max().unwrap_or(0);
        let ends = |iv: &DyadicInterval| {
            let shift = top - iv.level();
            (iv.num() << shift, (iv.num() + 1) << shift)
        };
        let mut by_low: HashMap<u128, Vec<usize>> = HashMap::new();
        for (k, (p, _)) in pieces.iter().enumerate() {
            by_low.entry(ends(p.interval(a)).0).or_default().push(k);
        }
        pieces.iter().any(|(p, i)| {
            let high = ends(p.interval(a)).1;
            by_low.get(&high).is_some_and(|next| {
                next.iter().any(|&k| {
                    let (q, j) = &pieces[k];
                    self.maps[*i] != self.maps[*j]
                        && (0..self.dim).all(|c| c == a || p.interval(c).intersect(q.interval(c)).is_some())
                })
            })
        })
    }
}

/// Partition of the domain into blocks on which `pairs` acts as one block
/// map, built top-down from the cube. A block is split in the first direction
/// whose level is below what its map needs, or, when several maps meet inside
/// it, in the first direction normal to a face between two of them. Both
/// choices depend only on the map, not on `pairs`.
fn canonical_partition(dim: usize, pairs: &[(Block, Block)]) -> Vec<(Block, Block)> {
    let maps = pairs.iter().map(block_map).collect();
    let mut c = Canonical {
        dim,
        pairs,
        maps,
        out: Vec::with_capacity(pairs.len()),
    };
    c.visit(Block::cube(dim), (0..pairs.len()).collect());
    c.out
}

/// `f` first, then `g`.
pub fn compose(f: &Element, g: &Element) -> Result<Element> {
    let pairs = product_pairs(f, g)?;
    Ok(reduce_pairs(f.dim, pairs))
}

fn product_pairs(f: &Element, g: &Element) -> Result<Vec<(Block, Block)>> {
    if f.dim != g.dim {
        return Err(Error::DimensionMismatch {
            expected: f.dim,
            found: g.dim,
        });
    }
    if f.is_identity() {
        return Ok(g.pairs.clone());
    }
    if g.is_identity() {
        return Ok(f.pairs.clone());
    }
    let f_ranges: Vec<(Block, usize)> = f.pairs.iter().enumerate().map(|(i, p)| (p.1.clone(), i)).collect();
    let g_domains: Vec<(Block, usize)> = g.pairs.iter().enumerate().map(|(j, p)| (p.0.clone(), j)).collect();
    let common = overlay_tagged(f.dim, &f_ranges, &g_domains)?;
    let mut pairs = Vec::with_capacity(common.len());
    for (piece, i, j) in common {
        let (fd, fr) = &f.pairs[i];
        let (gd, gr) = &g.pairs[j];
        let from = transfer_subblock(&piece, fr, fd)?;
        let to = transfer_subblock(&piece, gd, gr)?;
        pairs.push((from, to));
    }
    Ok(pairs)
}

/// Product step for long chains: up to dimension 2 the result is only
/// merged, and [`finish`] brings it to the canonical form once at the end.
fn step(f: &Element, g: &Element) -> Result<Element> {
    if f.dim > 2 {
        return compose(f, g);
    }
    let pairs = product_pairs(f, g)?;
    Ok(Element {
        dim: f.dim,
        pairs: merge_pairs(pairs),
    })
}

fn finish(e: Element) -> Element {
    if e.dim > 2 {
        e
    } else {
        reduce_pairs(e.dim, e.pairs)
    }
}

/// Left-to-right product of `factors`, all of dimension `dim`.
pub fn product<I: IntoIterator<Item = Element>>(dim: usize, factors: I) -> Result<Element> {
    let mut acc = Element::identity(dim);
    for g in factors {
        acc = step(&acc, &g)?;
    }
    Ok(finish(acc))
}

pub fn invert(e: &Element) -> Element {
    let mut pairs: Vec<_> = e.pairs.iter().map(|(d, r)| (r.clone(), d.clone())).collect();
    pairs.sort_unstable();
    Element { dim: e.dim, pairs }
}

/// Group equality; elements are kept reduced so this is structural.
pub fn equals(e: &Element, f: &Element) -> bool {
    e == f
}

/// `e^m` for any integer `m`, by repeated squaring.
pub fn power(e: &Element, m: i64) -> Result<Element> {
    let mut base = if m < 0 { invert(e) } else { e.clone() };
    let mut n = m.unsigned_abs();
    let mut acc = Element::identity(e.dim);
    while n > 0 {
        if n & 1 == 1 {
            acc = step(&acc, &base)?;
        }
        n >>= 1;
        if n > 0 {
            base = step(&base, &base)?;
        }
    }
    Ok(finish(acc))
}

/// `g⁻¹ · e · g`: apply `g⁻¹`, then `e`, then `g`.
pub fn conjugate(e: &Element, g: &Element) -> Result<Element> {
    compose(&compose(&invert(g), e)?, g)
}

/// Two random caret trees with `size` carets each and a uniform leaf
/// permutation, reduced.
pub fn random_element(seed: u64, size: usize, dim: usize) -> Result<Element> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_element_with(&mut rng, size, dim)
}

pub fn random_element_with<R: Rng>(rng: &mut R, size: usize, dim: usize) -> Result<Element> {
    let t1 = random_tree(rng, size, dim);
    let t2 = random_tree(rng, size, dim);
    let (_, dom) = tree_to_pattern(&t1, dim)?;
    let (_, ran) = tree_to_pattern(&t2, dim)?;
    let mut perm: Vec<usize> = (0..dom.len()).collect();
    for i in (1..perm.len()).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let pairs = dom.into_iter().zip(perm.into_iter().map(|j| ran[j].clone())).collect();
    Ok(Element::from_pairs_unchecked(dim, pairs))
}

/// A point of the cube with exact rational coordinates.
pub type Point = Vec<BigRational>;

fn interval_holds(iv: &DyadicInterval, x: &BigRational) -> bool {
    let scale = BigInt::one() << iv.level();
    let lo = BigRational::new(BigInt::from(iv.num()), scale.clone());
    let hi = BigRational::new(BigInt::from(iv.num() + 1), scale);
    (&lo <= x && x < &hi) || (x.is_one() && hi.is_one())
}

/// Evaluates `e` at `p`. Blocks are half-open `[lo, hi)` per coordinate,
/// except that the upper boundary `1` of the cube is closed.
pub fn eval_point(e: &Element, p: &[BigRational]) -> Result<Point> {
    if p.len() != e.dim {
        return Err(Error::DimensionMismatch {
            expected: e.dim,
            found: p.len(),
        });
    }
    if p.iter().any(|x| x.is_negative_or_above_one()) {
        return Err(Error::InvalidAddress);
    }
    let (d, r) = e
        .pairs
        .iter()
        .find(|(d, _)| d.intervals().iter().zip(p).all(|(iv, x)| interval_holds(iv, x)))
        .ok_or(Error::InvalidAddress)?;
    Ok(d
        .intervals()
        .iter()
        .zip(r.intervals())
        .zip(p)
        .map(|((a, b), x)| {
            let lo_a = BigRational::new(BigInt::from(a.num()), BigInt::one() << a.level());
            let lo_b = BigRational::new(BigInt::from(b.num()), BigInt::one() << b.level());
            let scale = BigRational::new(BigInt::one() << a.level(), BigInt::one() << b.level());
            (x - lo_a) * scale + lo_b
        })
        .collect())
}

trait UnitRange {
    fn is_negative_or_above_one(&self) -> bool;
}

impl UnitRange for BigRational {
    fn is_negative_or_above_one(&self) -> bool {
        self < &BigRational::zero() || self > &BigRational::one()
    }
}

// Canonical bytes: LEB128 dim, LEB128 pair count, then for every pair the
// domain block followed by the range block, each as per-coordinate
// (level byte, LEB128 numerator). Pairs appear in the sorted reduced order.

fn put_varint(out: &mut Vec<u8>, mut v: u128) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn get_varint(bytes: &[u8], pos: &mut usize) -> Result<u128> {
    let mut v: u128 = 0;
    let mut shift = 0u32;
    loop {
        let byte = *bytes
            .get(*pos)
            .ok_or_else(|| Error::DecodeError("truncated varint".into()))?;
        *pos += 1;
        if shift >= 128 || (shift > 121 && (byte & 0x7f) >> (128 - shift) != 0) {
            return Err(Error::DecodeError("varint overflow".into()));
        }
        v |= ((byte & 0x7f) as u128) << shift;
        if byte & 0x80 == 0 {
            return Ok(v);
        }
        shift += 7;
    }
}

pub fn canonical_serialize(e: &Element) -> Vec<u8> {
    let mut out = Vec::with_capacity(2 + e.pairs.len() * e.dim * 6);
    put_varint(&mut out, e.dim as u128);
    put_varint(&mut out, e.pairs.len() as u128);
    for (d, r) in &e.pairs {
        for b in [d, r] {
            for iv in b.intervals() {
                out.push(iv.level() as u8);
                put_varint(&mut out, iv.num());
            }
        }
    }
    out
}

pub fn canonical_deserialize(bytes: &[u8]) -> Result<Element> {
    let mut pos = 0;
    let dim = get_varint(bytes, &mut pos)? as usize;
    let k = get_varint(bytes, &mut pos)? as usize;
    if dim == 0 || k == 0 || k > bytes.len() {
        return Err(Error::DecodeError("bad header".into()));
    }
    let read_block = |pos: &mut usize| -> Result<Block> {
        let mut ivs = Vec::with_capacity(dim);
        for _ in 0..dim {
            let level = *bytes
                .get(*pos)
                .ok_or_else(|| Error::DecodeError("truncated block".into()))?;
            *pos += 1;
            let num = get_varint(bytes, pos)?;
            ivs.push(DyadicInterval::new(num, level as u32).map_err(|e| Error::DecodeError(e.to_string()))?);
        }
        Ok(Block::new(ivs))
    };
    let mut pairs = Vec::with_capacity(k);
    for _ in 0..k {
        let d = read_block(&mut pos)?;
        let r = read_block(&mut pos)?;
        pairs.push((d, r));
    }
    if pos != bytes.len() {
        return Err(Error::DecodeError("trailing bytes".into()));
    }
    let e = make_element(pairs.clone(), dim).map_err(|e| Error::DecodeError(e.to_string()))?;
    if e.pairs != pairs {
        return Err(Error::DecodeError("not in reduced canonical order".into()));
    }
    Ok(e)
}

impl fmt::Display for Element {
    /// The element file format: a `dim` line, then one `from <block> -> to <block>`
    /// line per pair.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}", self.dim)?;
        for (d, r) in &self.pairs {
            writeln!(f, "from {d} -> to {r}")?;
        }
        Ok(())
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut dim = None;
        let mut pairs = vec![];
        let mut offset = 0;
        for line in s.split_inclusive('\n') {
            let pos = offset;
            offset += line.len();
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("dim") {
                if dim.is_some() {
                    return Err(Error::parse(pos, "duplicate dim line"));
                }
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(pos, "bad dim"))?;
                if n == 0 {
                    return Err(Error::parse(pos, "dim must be positive"));
                }
                dim = Some(n);
            } else if let Some(rest) = line.strip_prefix("from") {
                let (d, r) = rest
                    .split_once("->")
                    .ok_or_else(|| Error::parse(pos, "expected '->'"))?;
                let r = r
                    .trim()
                    .strip_prefix("to")
                    .ok_or_else(|| Error::parse(pos, "expected 'to'"))?;
                let d: Block = d.parse().map_err(|e: Error| relocate(e, pos))?;
                let r: Block = r.parse().map_err(|e: Error| relocate(e, pos))?;
                pairs.push((d, r));
            } else {
                return Err(Error::parse(pos, format!("unexpected line {line:?}")));
            }
        }
        let dim = dim.ok_or_else(|| Error::parse(0, "missing dim line"))?;
        make_element(pairs, dim)
    }
}

fn relocate(e: Error, pos: usize) -> Error {
    match e {
        Error::ParseError { pos: p, msg } => Error::ParseError { pos: pos + p, msg },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blk(s: &str) -> Block {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    pub(crate) fn c0() -> Element {
        make_element(
            vec![
                (blk("0/2^0 x 0/2^1"), blk("0/2^1 x 0/2^0")),
                (blk("0/2^0 x 1/2^1"), blk("1/2^1 x 0/2^0")),
            ],
            2,
        )
        .unwrap()
    }

    #[test]
    fn reduced_forms_of_one_map_agree() {
        let swap = [
            (blk("2/2^2 x 1/2^1"), blk("3/2^2 x 1/2^1")),
            (blk("3/2^2 x 1/2^1"), blk("2/2^2 x 1/2^1")),
        ];
        let a = [
            (blk("0/2^1 x 0/2^0"), blk("0/2^1 x 0/2^0")),
            (blk("1/2^1 x 0/2^1"), blk("1/2^1 x 0/2^1")),
        ];
        let b = [
            (blk("0/2^0 x 0/2^1"), blk("0/2^0 x 0/2^1")),
            (blk("0/2^1 x 1/2^1"), blk("0/2^1 x 1/2^1")),
        ];
        let ea = make_element([&a[..], &swap[..]].concat(), 2).unwrap();
        let eb = make_element([&b[..], &swap[..]].concat(), 2).unwrap();
        assert_eq!(ea, eb);
        assert_eq!(ea.block_count(), 4);
        assert_eq!(canonical_serialize(&ea), canonical_serialize(&eb));
    }

    #[test]
    fn identity_and_refined_identity() {
        let id = make_element(vec![(Block::cube(2), Block::cube(2))], 2).unwrap();
        assert!(id.is_identity());
        let quads = ["0/2^1 x 0/2^1", "0/2^1 x 1/2^1", "1/2^1 x 0/2^1", "1/2^1 x 1/2^1"];
        let e = make_element(quads.iter().map(|s| (blk(s), blk(s))).collect(), 2).unwrap();
        assert_eq!(e, id);
    }

    #[test]
    fn c0_is_irreducible() {
        let e = c0();
        assert_eq!(e.block_count(), 2);
        assert_eq!(e.caret_count(), 1);
        assert_eq!(e.depth(), 1);
        assert_ne!(e, invert(&e));
    }

    #[test]
    fn not_bijective() {
        let r = make_element(
            vec![
                (blk("0/2^0 x 0/2^1"), blk("0/2^1 x 0/2^0")),
                (blk("0/2^0 x 1/2^1"), blk("0/2^1 x 0/2^0")),
            ],
            2,
        );
        assert!(r.is_err());
    }

    #[test]
    fn c0_squared_is_bit_reversal() {
        let e = compose(&c0(), &c0()).unwrap();
        let strip_y = |j: u128| Block::new([DyadicInterval::UNIT, DyadicInterval::new(j, 2).unwrap()]);
        let strip_x = |j: u128| Block::new([DyadicInterval::new(j, 2).unwrap(), DyadicInterval::UNIT]);
        let expected = make_element(
            [0, 2, 1, 3].iter().enumerate().map(|(j, &t)| (strip_y(j as u128), strip_x(t))).collect(),
            2,
        )
        .unwrap();
        assert_eq!(e, expected);
        assert_eq!(power(&c0(), 2).unwrap(), expected);
    }

    #[test]
    fn inverse_of_c0() {
        let inv = invert(&c0());
        assert_eq!(
            inv.pairs(),
            &[
                (blk("0/2^1 x 0/2^0"), blk("0/2^0 x 0/2^1")),
                (blk("1/2^1 x 0/2^0"), blk("0/2^0 x 1/2^1")),
            ]
        );
        assert!(compose(&c0(), &inv).unwrap().is_identity());
    }

    #[test]
    fn eval_examples() {
        let e = c0();
        assert_eq!(eval_point(&e, &[q(1, 4), q(1, 8)]).unwrap(), vec![q(1, 8), q(1, 4)]);
        // (1/2, 0) lies in the bottom block; x=1/2 is interior there
        assert_eq!(eval_point(&e, &[q(1, 2), q(0, 1)]).unwrap(), vec![q(1, 4), q(0, 1)]);
        // y = 1/2 belongs to the top half
        assert_eq!(eval_point(&e, &[q(0, 1), q(1, 2)]).unwrap(), vec![q(1, 2), q(0, 1)]);
        assert_eq!(eval_point(&e, &[q(1, 1), q(1, 1)]).unwrap(), vec![q(1, 1), q(1, 1)]);
        let id = Element::identity(2);
        assert_eq!(eval_point(&id, &[q(3, 7), q(1, 3)]).unwrap(), vec![q(3, 7), q(1, 3)]);
    }

    #[test]
    fn power_and_conjugate() {
        assert!(power(&c0(), 0).unwrap().is_identity());
        assert!(conjugate(&Element::identity(2), &c0()).unwrap().is_identity());
        let m = power(&c0(), -3).unwrap();
        assert!(compose(&m, &power(&c0(), 3).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn identity_bytes() {
        assert_eq!(canonical_serialize(&Element::identity(2)), vec![2, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(canonical_serialize(&Element::identity(1)), vec![1, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn decode_rejects_garbage() {
        assert!(canonical_deserialize(&[]).is_err());
        assert!(canonical_deserialize(&[2, 1, 0, 0, 0, 0, 0, 0, 0]).is_err());
        assert!(canonical_deserialize(&[2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 9]).is_err());
        // refined identity is valid but not canonical
        let mut bytes = vec![1, 2];
        for n in [0u8, 1] {
            bytes.extend([1, n, 1, n]);
        }
        assert!(matches!(canonical_deserialize(&bytes), Err(Error::DecodeError(_))));
    }

    #[test]
    fn text_round_trip() {
        let e = c0();
        let text = e.to_string();
        assert_eq!(
            text,
            "dim 2\nfrom 0/2^0 x 0/2^1 -> to 0/2^1 x 0/2^0\nfrom 0/2^0 x 1/2^1 -> to 1/2^1 x 0/2^0\n"
        );
        assert_eq!(text.parse::<Element>().unwrap(), e);
        assert!("from 0/2^0 -> to 0/2^0\n".parse::<Element>().is_err());
    }
}
