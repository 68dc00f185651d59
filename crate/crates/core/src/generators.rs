//! Generator families, words, and the index-shift rewriting onto a finite set.
//!
//! All five families are built on the comb `R_k`: the partition of the cube
//! into direction-0 strips `[0,1/2], [1/2,3/4], …, [1-2^(1-k), 1]`.
//!
//! | symbol | domain | range |
//! |--------|--------|-------|
//! | `A_i` | `R_{i+2}` with strip `i` halved in direction 0 | `R_{i+3}` |
//! | `B_i.d` | `R_{i+2}` with strip `i` halved in direction `d` | `R_{i+3}` |
//! | `C_i.d` | `R_{i+1}` with strip `i` (the last) halved in direction `d` | `R_{i+2}` |
//! | `π_i` (`p`) | `R_{i+2}` | `R_{i+2}`, strips `i` and `i+1` swapped |
//! | `π̄_i` (`q`) | `R_{i+2}` | `R_{i+2}`, strip `j` sent to `j+1 mod i+2` |
//!
//! Pairings are order preserving except for the permutation families.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::dyadic::{Block, DyadicInterval, Pattern};
use crate::element::{compose, invert, make_element, product, Element};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    /// Adjacent transposition of the last two comb strips, written `p`.
    P,
    /// Full cycle of the comb strips, written `q`.
    Q,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::P => 'p',
            Family::Q => 'q',
        }
    }

    fn has_direction(self) -> bool {
        matches!(self, Family::B | Family::C)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSymbol {
    pub family: Family,
    pub index: usize,
    /// Split direction for `B` and `C`; always 0 for the other families.
    pub direction: usize,
    pub inverse: bool,
}

impl GeneratorSymbol {
    pub fn new(family: Family, index: usize) -> Self {
        GeneratorSymbol {
            family,
            index,
            direction: if family.has_direction() { 1 } else { 0 },
            inverse: false,
        }
    }

    pub fn with_direction(mut self, direction: usize) -> Self {
        self.direction = direction;
        self
    }

    pub fn inv(mut self) -> Self {
        self.inverse = !self.inverse;
        self
    }

    pub fn a(index: usize) -> Self {
        Self::new(Family::A, index)
    }

    pub fn b(index: usize) -> Self {
        Self::new(Family::B, index)
    }

    pub fn c(index: usize) -> Self {
        Self::new(Family::C, index)
    }

    pub fn p(index: usize) -> Self {
        Self::new(Family::P, index)
    }

    pub fn q(index: usize) -> Self {
        Self::new(Family::Q, index)
    }

    pub fn is_valid_for(&self, dim: usize) -> bool {
        if self.family.has_direction() {
            self.direction >= 1 && self.direction < dim
        } else {
            self.direction == 0
        }
    }

    /// Same generator with the index replaced.
    fn at(&self, index: usize) -> Self {
        GeneratorSymbol { index, ..*self }
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.index)?;
        if self.family.has_direction() && self.direction != 1 {
            write!(f, ".{}", self.direction)?;
        }
        if self.inverse {
            f.write_str("'")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<GeneratorSymbol>);

impl Word {
    pub fn empty() -> Self {
        Word(vec![])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[GeneratorSymbol] {
        &self.0
    }

    pub fn push(&mut self, s: GeneratorSymbol) {
        self.0.push(s);
    }

    pub fn extend(&mut self, w: &Word) {
        self.0.extend_from_slice(&w.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend(other);
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|s| s.inv()).collect())
    }

    /// Cancels adjacent `x x'` pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<GeneratorSymbol> = Vec::with_capacity(self.0.len());
        for &s in &self.0 {
            match out.last() {
                Some(&t) if t == s.inv() => {
                    out.pop();
                }
                _ => out.push(s),
            }
        }
        Word(out)
    }

    /// `A0^n` (negative `n` gives inverses).
    pub fn a0_power(n: i64) -> Word {
        let s = if n < 0 { GeneratorSymbol::a(0).inv() } else { GeneratorSymbol::a(0) };
        Word(vec![s; n.unsigned_abs() as usize])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_word(s)
    }
}

pub fn parse_word(text: &str) -> Result<Word> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut out = vec![];
    let digits = |pos: &mut usize| -> Result<usize> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::parse(start, "expected digits"));
        }
        text[start..*pos]
            .parse()
            .map_err(|_| Error::parse(start, "number too large"))
    };
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos == bytes.len() {
            break;
        }
        let family = match bytes[pos] {
            b'A' => Family::A,
            b'B' => Family::B,
            b'C' => Family::C,
            b'p' => Family::P,
            b'q' => Family::Q,
            _ => return Err(Error::parse(pos, "expected one of A B C p q")),
        };
        pos += 1;
        let mut sym = GeneratorSymbol::new(family, digits(&mut pos)?);
        if pos < bytes.len() && bytes[pos] == b'.' {
            if !family.has_direction() {
                return Err(Error::parse(pos, "only B and C take a direction"));
            }
            pos += 1;
            sym.direction = digits(&mut pos)?;
            if sym.direction == 0 {
                return Err(Error::parse(pos - 1, "B and C need a direction of at least 1"));
            }
        }
        if pos < bytes.len() && bytes[pos] == b'\'' {
            sym.inverse = true;
            pos += 1;
        }
        if pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            return Err(Error::parse(pos, "expected whitespace between symbols"));
        }
        out.push(sym);
    }
    Ok(Word(out))
}

pub fn format_word(w: &Word) -> String {
    w.to_string()
}

/// Comb strips left to right.
pub fn comb_leaves(k: usize, dim: usize) -> Result<Vec<Block>> {
    assert!(k >= 1, "a comb has at least one strip");
    let mut out = Vec::with_capacity(k);
    let strip = |iv: DyadicInterval| {
        let mut b = Block::cube(dim);
        b = b.with_interval(0, iv);
        b
    };
    for j in 0..k - 1 {
        let level = j as u32 + 1;
        out.push(strip(DyadicInterval::new((1u128 << level) - 2, level)?));
    }
    let last = k as u32 - 1;
    out.push(strip(DyadicInterval::new((1u128 << last) - 1, last)?));
    Ok(out)
}

/// The all-right direction-0 tree `R_k` as a pattern.
pub fn comb(k: usize, dim: usize) -> Result<Pattern> {
    Ok(Pattern::from_blocks_unchecked(dim, comb_leaves(k, dim)?))
}

/// `R_k` with strip `leaf` halved in direction `d`, in left-to-right order.
fn comb_with_split(k: usize, leaf: usize, d: usize, dim: usize) -> Result<Vec<Block>> {
    let mut leaves = comb_leaves(k, dim)?;
    let (lo, hi) = leaves[leaf].split(d)?;
    leaves.splice(leaf..=leaf, [lo, hi]);
    Ok(leaves)
}

fn check_perm(k: usize, sigma: &[usize]) -> Result<()> {
    if sigma.len() != k {
        return Err(Error::NotBijective);
    }
    let mut seen = vec![false; k];
    for &j in sigma {
        if j >= k || std::mem::replace(&mut seen[j], true) {
            return Err(Error::NotBijective);
        }
    }
    Ok(())
}

/// Comb strip `j` goes to strip `sigma[j]`.
pub fn perm_element(k: usize, sigma: &[usize], dim: usize) -> Result<Element> {
    check_perm(k, sigma)?;
    let leaves = comb_leaves(k, dim)?;
    let pairs = leaves
        .iter()
        .zip(sigma)
        .map(|(b, &j)| (b.clone(), leaves[j].clone()))
        .collect();
    Ok(Element::from_pairs_unchecked(dim, pairs))
}

pub fn generator(sym: &GeneratorSymbol, dim: usize) -> Result<Element> {
    thread_local! {
        static CACHE: std::cell::RefCell<HashMap<(GeneratorSymbol, usize), Element>> = Default::default();
    }
    if let Some(e) = CACHE.with(|c| c.borrow().get(&(*sym, dim)).cloned()) {
        return Ok(e);
    }
    let e = build_generator(sym, dim)?;
    CACHE.with(|c| c.borrow_mut().insert((*sym, dim), e.clone()));
    Ok(e)
}

/// `sym^n`, memoized per thread.
fn generator_power(sym: &GeneratorSymbol, n: usize, dim: usize) -> Result<Element> {
    if n == 1 {
        return generator(sym, dim);
    }
    thread_local! {
        static CACHE: std::cell::RefCell<HashMap<(GeneratorSymbol, usize, usize), Element>> = Default::default();
    }
    if let Some(e) = CACHE.with(|c| c.borrow().get(&(*sym, n, dim)).cloned()) {
        return Ok(e);
    }
    let e = compose(&generator_power(sym, n - 1, dim)?, &generator(sym, dim)?)?;
    CACHE.with(|c| c.borrow_mut().insert((*sym, n, dim), e.clone()));
    Ok(e)
}

fn build_generator(sym: &GeneratorSymbol, dim: usize) -> Result<Element> {
    if dim == 0 || !sym.is_valid_for(dim) {
        return Err(Error::InvalidSymbol {
            symbol: sym.to_string(),
            dim,
        });
    }
    let i = sym.index;
    let e = match sym.family {
        Family::A | Family::B => {
            let dom = comb_with_split(i + 2, i, sym.direction, dim)?;
            let ran = comb_leaves(i + 3, dim)?;
            Element::from_pairs_unchecked(dim, dom.into_iter().zip(ran).collect())
        }
        Family::C => {
            let dom = comb_with_split(i + 1, i, sym.direction, dim)?;
            let ran = comb_leaves(i + 2, dim)?;
            Element::from_pairs_unchecked(dim, dom.into_iter().zip(ran).collect())
        }
        Family::P => {
            let mut sigma: Vec<usize> = (0..i + 2).collect();
            sigma.swap(i, i + 1);
            perm_element(i + 2, &sigma, dim)?
        }
        Family::Q => {
            let k = i + 2;
            let sigma: Vec<usize> = (0..k).map(|j| (j + 1) % k).collect();
            perm_element(k, &sigma, dim)?
        }
    };
    Ok(if sym.inverse { invert(&e) } else { e })
}

/// Left-to-right product of the symbols; the empty word is the identity.
pub fn evaluate_word(w: &Word, dim: usize) -> Result<Element> {
    let factors = w
        .0
        .chunk_by(|a, b| a == b)
        .map(|run| generator_power(&run[0], run.len(), dim))
        .collect::<Result<Vec<_>>>()?;
    product(dim, factors)
}

pub fn verify_relation(lhs: &Word, rhs: &Word, dim: usize) -> Result<bool> {
    Ok(evaluate_word(lhs, dim)? == evaluate_word(rhs, dim)?)
}

/// The finite generating set: index 0 and 1 of every family that exists in
/// `dim`, without inverses.
pub fn finite_generating_set(dim: usize) -> Vec<GeneratorSymbol> {
    let mut out = vec![];
    for i in 0..2 {
        out.push(GeneratorSymbol::a(i));
    }
    for d in 1..dim {
        for i in 0..2 {
            out.push(GeneratorSymbol::b(i).with_direction(d));
        }
        for i in 0..2 {
            out.push(GeneratorSymbol::c(i).with_direction(d));
        }
    }
    for i in 0..2 {
        out.push(GeneratorSymbol::p(i));
    }
    for i in 0..2 {
        out.push(GeneratorSymbol::q(i));
    }
    out
}

/// [`finite_generating_set`] together with inverses.
pub fn symmetric_generating_set(dim: usize) -> Vec<GeneratorSymbol> {
    finite_generating_set(dim)
        .into_iter()
        .flat_map(|s| [s, s.inv()])
        .collect()
}

/// Highest index checked when the relation table is built.
pub const RELATION_CHECK_BOUND: usize = 10;

/// A word equal to `q2 · q1'`, so that `q2 = CYCLE_STEP q1`. Re-verified
/// whenever a relation table is built.
pub const CYCLE_STEP: &str = "A1'";

/// How a generator of index `i + 1` is rewritten through index `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftRule {
    /// `G(i+1) = A0^-e · G(i) · A0^e`.
    Conjugate { exponent: i64 },
    /// `G(i+1) = A0^-e(i-1) · step · A0^e(i-1) · G(i)`.
    Prefixed { exponent: i64, step: Word },
}

#[derive(Debug, Clone)]
pub struct RelationTable {
    dim: usize,
    rules: Vec<((Family, usize), ShiftRule)>,
}

fn family_keys(dim: usize) -> Vec<(Family, usize)> {
    let mut keys = vec![(Family::A, 0)];
    for d in 1..dim {
        keys.push((Family::B, d));
        keys.push((Family::C, d));
    }
    keys.push((Family::P, 0));
    keys.push((Family::Q, 0));
    keys
}

fn symbol_for(key: (Family, usize), index: usize) -> GeneratorSymbol {
    GeneratorSymbol::new(key.0, index).with_direction(key.1)
}

impl RelationTable {
    /// Builds and verifies the shift relations for indices `1..=RELATION_CHECK_BOUND`.
    pub fn build(dim: usize) -> Result<Self> {
        let mut rules = vec![];
        for key in family_keys(dim) {
            let rule = Self::calibrate(key, dim)?;
            rules.push((key, rule));
        }
        Ok(RelationTable { dim, rules })
    }

    /// Shared, lazily built table for `dim`.
    pub fn get(dim: usize) -> Result<Arc<RelationTable>> {
        static TABLES: OnceLock<Mutex<HashMap<usize, Arc<RelationTable>>>> = OnceLock::new();
        let tables = TABLES.get_or_init(Default::default);
        if let Some(t) = tables.lock().expect("relation table lock").get(&dim) {
            return Ok(t.clone());
        }
        let t = Arc::new(RelationTable::build(dim)?);
        tables.lock().expect("relation table lock").insert(dim, t.clone());
        Ok(t)
    }

    fn calibrate(key: (Family, usize), dim: usize) -> Result<ShiftRule> {
        let candidates: Vec<ShiftRule> = if key.0 == Family::Q {
            let step = parse_word(CYCLE_STEP)?;
            [1, -1]
                .into_iter()
                .map(|exponent| ShiftRule::Prefixed {
                    exponent,
                    step: step.clone(),
                })
                .collect()
        } else {
            [1, -1]
                .into_iter()
                .map(|exponent| ShiftRule::Conjugate { exponent })
                .collect()
        };
        'rules: for rule in candidates {
            for i in 1..RELATION_CHECK_BOUND {
                let lhs = Word(vec![symbol_for(key, i + 1)]);
                let rhs = Self::apply_rule(&rule, symbol_for(key, i), i);
                if !verify_relation(&lhs, &rhs, dim)? {
                    continue 'rules;
                }
            }
            return Ok(rule);
        }
        Err(Error::RelationTableFailure(format!(
            "no shift relation verified for family {} direction {} in dimension {dim}",
            key.0.letter(),
            key.1
        )))
    }

    /// The right-hand side expressing `G(i+1)` through `G(i)`.
    fn apply_rule(rule: &ShiftRule, lower: GeneratorSymbol, i: usize) -> Word {
        match rule {
            ShiftRule::Conjugate { exponent } => {
                let mut w = Word::a0_power(-exponent);
                w.push(lower);
                w.extend(&Word::a0_power(*exponent));
                w
            }
            ShiftRule::Prefixed { exponent, step } => {
                let shift = exponent * (i as i64 - 1);
                let mut w = Word::a0_power(-shift);
                w.extend(step);
                w.extend(&Word::a0_power(shift));
                w.push(lower);
                w
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rules(&self) -> &[((Family, usize), ShiftRule)] {
        &self.rules
    }

    fn rule(&self, sym: &GeneratorSymbol) -> Option<&ShiftRule> {
        self.rules
            .iter()
            .find(|(k, _)| *k == (sym.family, sym.direction))
            .map(|(_, r)| r)
    }

    /// Rewrites one non-inverted symbol to a word over indices 0 and 1.
    fn expand(&self, sym: GeneratorSymbol) -> Result<Word> {
        if sym.index <= 1 {
            return Ok(Word(vec![sym]));
        }
        let rule = self.rule(&sym).ok_or_else(|| Error::InvalidSymbol {
            symbol: sym.to_string(),
            dim: self.dim,
        })?;
        let i = sym.index - 1;
        Ok(match rule {
            ShiftRule::Conjugate { exponent } => {
                // G(i+1) = A0^-(e·i) G(1) A0^(e·i)
                let shift = exponent * i as i64;
                let mut w = Word::a0_power(-shift);
                w.push(sym.at(1));
                w.extend(&Word::a0_power(shift));
                w
            }
            ShiftRule::Prefixed { exponent, step } => {
                // G(i+1) = S(i) S(i-1) … S(1) G(1), S(j) = A0^-e(j-1) step A0^e(j-1)
                let mut w = Word::empty();
                for j in (1..=i).rev() {
                    let shift = exponent * (j as i64 - 1);
                    w.extend(&Word::a0_power(-shift));
                    w.extend(step);
                    w.extend(&Word::a0_power(shift));
                }
                w.push(sym.at(1));
                w.free_reduce()
            }
        })
    }

    /// Replaces every symbol of index at least 2 by an equal word over the
    /// finite set, then cancels adjacent inverse pairs.
    pub fn shift_rewrite(&self, w: &Word) -> Result<Word> {
        let mut out = Word::empty();
        for &s in &w.0 {
            if !s.is_valid_for(self.dim) {
                return Err(Error::InvalidSymbol {
                    symbol: s.to_string(),
                    dim: self.dim,
                });
            }
            let base = GeneratorSymbol { inverse: false, ..s };
            let expanded = self.expand(base)?;
            out.extend(&if s.inverse { expanded.inverse() } else { expanded });
        }
        Ok(out.free_reduce())
    }

    /// Upper bound on the number of symbols one symbol of the given family
    /// and index expands to.
    pub fn expansion_bound(&self, sym: &GeneratorSymbol) -> usize {
        if sym.index <= 1 {
            return 1;
        }
        match self.rule(sym) {
            Some(ShiftRule::Prefixed { step, .. }) => {
                let i = sym.index - 1;
                i * (i - 1) + i * step.len() + 1
            }
            _ => 2 * (sym.index - 1) + 1,
        }
    }
}

impl fmt::Display for RelationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# shift relations, dimension {}, verified for indices 1..={}", self.dim, RELATION_CHECK_BOUND)?;
        for (key, rule) in &self.rules {
            let g = |i: &str| {
                if key.0.has_direction() && key.1 != 1 {
                    format!("{}{i}.{}", key.0.letter(), key.1)
                } else {
                    format!("{}{i}", key.0.letter())
                }
            };
            let pair = |e: i64, n: &str| -> (String, String) {
                if e > 0 {
                    (format!("A0^-{n}"), format!("A0^{n}"))
                } else {
                    (format!("A0^{n}"), format!("A0^-{n}"))
                }
            };
            match rule {
                ShiftRule::Conjugate { exponent } => {
                    let (l, r) = pair(*exponent, "1");
                    writeln!(f, "{} = {l} {} {r}", g("(i+1)"), g("(i)"))?
                }
                ShiftRule::Prefixed { exponent, step } => {
                    let (l, r) = pair(*exponent, "(i-1)");
                    writeln!(f, "{} = {l} {step} {r} {}", g("(i+1)"), g("(i)"))?
                }
            }
        }
        Ok(())
    }
}

/// Rewrites `w` onto the finite generating set using the shared table.
pub fn shift_rewrite(w: &Word, dim: usize) -> Result<Word> {
    RelationTable::get(dim)?.shift_rewrite(w)
}

/// Builds `pairs` into an element after validating; used by tests and tools
/// that assemble generators by hand.
pub fn element_from_leaves(dim: usize, dom: Vec<Block>, ran: Vec<Block>) -> Result<Element> {
    if dom.len() != ran.len() {
        return Err(Error::NotBijective);
    }
    make_element(dom.into_iter().zip(ran).collect(), dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn blk(s: &str) -> Block {
        s.parse().unwrap()
    }

    #[test]
    fn word_grammar() {
        assert_eq!(w("A0").0, vec![GeneratorSymbol::a(0)]);
        let c = w("C0' A0 C0");
        assert_eq!(c.len(), 3);
        assert!(c.0[0].inverse && c.0[0].family == Family::C);
        let b = w("B3.2");
        assert_eq!((b.0[0].family, b.0[0].index, b.0[0].direction), (Family::B, 3, 2));
        assert_eq!(w("C0 A1' B2.1 p1").to_string(), "C0 A1' B2 p1");
        assert_eq!(w("B3.2 q4'").to_string(), "B3.2 q4'");
        assert!(w("").is_empty());
        for bad in ["X1", "A", "A0.1", "B1.0", "A0A1", "A0''"] {
            assert!(bad.parse::<Word>().is_err(), "{bad}");
        }
        assert!(matches!(parse_word("A0 Z1"), Err(Error::ParseError { pos: 3, .. })));
    }

    #[test]
    fn combs() {
        assert_eq!(comb(1, 2).unwrap(), Pattern::cube(2));
        let c3 = comb_leaves(3, 1).unwrap();
        assert_eq!(c3, vec![blk("0/2^1"), blk("2/2^2"), blk("3/2^2")]);
        assert!(Pattern::new(2, comb_leaves(6, 2).unwrap()).is_ok());
    }

    #[test]
    fn generator_tables() {
        let a0 = generator(&GeneratorSymbol::a(0), 1).unwrap();
        let sorted = |mut v: Vec<(Block, Block)>| {
            v.sort();
            v
        };
        assert_eq!(
            a0.pairs(),
            sorted(vec![
                (blk("0/2^2"), blk("0/2^1")),
                (blk("1/2^2"), blk("2/2^2")),
                (blk("1/2^1"), blk("3/2^2")),
            ])
        );
        assert_eq!((a0.block_count(), a0.depth()), (3, 2));
        let c0 = generator(&GeneratorSymbol::c(0), 2).unwrap();
        assert_eq!(
            c0.pairs(),
            &[
                (blk("0/2^0 x 0/2^1"), blk("0/2^1 x 0/2^0")),
                (blk("0/2^0 x 1/2^1"), blk("1/2^1 x 0/2^0")),
            ]
        );
        let b0 = generator(&GeneratorSymbol::b(0), 2).unwrap();
        assert_eq!(
            b0.pairs(),
            sorted(vec![
                (blk("0/2^1 x 0/2^1"), blk("0/2^1 x 0/2^0")),
                (blk("0/2^1 x 1/2^1"), blk("2/2^2 x 0/2^0")),
                (blk("1/2^1 x 0/2^0"), blk("3/2^2 x 0/2^0")),
            ])
        );
        let p0 = generator(&GeneratorSymbol::p(0), 1).unwrap();
        assert_eq!(p0.pairs(), &[(blk("0/2^1"), blk("1/2^1")), (blk("1/2^1"), blk("0/2^1"))]);
        assert!(generator(&GeneratorSymbol::b(0), 1).is_err());
        assert!(generator(&GeneratorSymbol::c(0).with_direction(2), 2).is_err());
    }

    #[test]
    fn generators_are_reduced() {
        for dim in 1..=3 {
            for s in symmetric_generating_set(dim) {
                for i in 0..6 {
                    let g = generator(&s.at(i), dim).unwrap();
                    let rebuilt = make_element(g.pairs().to_vec(), dim).unwrap();
                    assert_eq!(g, rebuilt);
                    let expected = match s.family {
                        Family::A | Family::B => i + 3,
                        Family::C => i + 2,
                        Family::P | Family::Q => i + 2,
                    };
                    assert_eq!(g.block_count(), expected, "{}", s.at(i));
                }
            }
        }
    }

    #[test]
    fn perm_elements() {
        assert!(perm_element(4, &[0, 1, 2, 3], 2).unwrap().is_identity());
        assert_eq!(perm_element(2, &[1, 0], 2).unwrap(), generator(&GeneratorSymbol::p(0), 2).unwrap());
        assert!(matches!(perm_element(3, &[0, 0, 1], 2), Err(Error::NotBijective)));
    }

    #[test]
    fn evaluation() {
        assert!(evaluate_word(&Word::empty(), 2).unwrap().is_identity());
        let c0sq = evaluate_word(&w("C0 C0"), 2).unwrap();
        assert_eq!(c0sq, crate::element::power(&generator(&GeneratorSymbol::c(0), 2).unwrap(), 2).unwrap());
        let word = w("A0 B1 C0' q1 p0 A1'");
        assert!(evaluate_word(&word.concat(&word.inverse()), 2).unwrap().is_identity());
        assert!(!verify_relation(&w("A0"), &w("B0"), 2).unwrap());
    }

    #[test]
    fn relation_table_dims() {
        for dim in 1..=3 {
            let t = RelationTable::build(dim).unwrap();
            assert_eq!(t.rules().len(), 3 + 2 * (dim - 1));
        }
    }

    #[test]
    fn rewrite_examples() {
        let t = RelationTable::get(2).unwrap();
        assert_eq!(t.shift_rewrite(&w("A0")).unwrap(), w("A0"));
        let a3 = t.shift_rewrite(&w("A3")).unwrap();
        assert!(a3.symbols().iter().all(|s| s.index <= 1));
        assert!(a3.symbols().iter().any(|s| *s == GeneratorSymbol::a(1)));
        assert_eq!(evaluate_word(&a3, 2).unwrap(), evaluate_word(&w("A3"), 2).unwrap());
        for s in ["q2", "q5'", "C4 B3' p7", "q3 q3'"] {
            let r = t.shift_rewrite(&w(s)).unwrap();
            assert!(r.symbols().iter().all(|s| s.index <= 1), "{s} -> {r}");
            let bound: usize = w(s).symbols().iter().map(|x| t.expansion_bound(x)).sum();
            assert!(r.len() <= bound, "{s}");
            assert_eq!(evaluate_word(&r, 2).unwrap(), evaluate_word(&w(s), 2).unwrap(), "{s}");
        }
    }
}
