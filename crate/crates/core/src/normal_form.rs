//! Semi-normal form `P · Π · Q⁻¹` and the decomposition of elements into
//! generator words.
//!
//! Every word produced here is evaluated and compared with its source before
//! it is returned; a mismatch is reported as
//! [`Error::UnverifiedDecomposition`] instead of an answer.

use crate::dyadic::Block;
use crate::element::{invert, Element};
use crate::error::{Error, Result};
use crate::generators::{comb, comb_leaves, evaluate_word, perm_element, Family, GeneratorSymbol, RelationTable, Word};
use crate::tree::{canonical_leaf_order, order_to_tree, CaretTree};

/// Side on which a caret-attaching generator multiplies a positive element
/// while it is being built: `P' = P · G`, with `P` applied first.
pub const ATTACH_ON_RIGHT: bool = true;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiNormalForm {
    pub positive_p: Word,
    pub k: usize,
    pub sigma: Vec<usize>,
    pub positive_q: Word,
}

impl SemiNormalForm {
    pub fn of(x: &Element) -> Result<Self> {
        let (p, (k, sigma), q) = split_ppiq(x)?;
        Ok(SemiNormalForm {
            positive_p: decompose_positive(&p)?,
            k,
            sigma,
            positive_q: decompose_positive(&q)?,
        })
    }

    /// `P`, then the permutation word, then `Q⁻¹`.
    pub fn word(&self) -> Result<Word> {
        let mut w = self.positive_p.clone();
        w.extend(&decompose_permutation(self.k, &self.sigma)?);
        w.extend(&self.positive_q.inverse());
        Ok(w)
    }

    /// Both positive words use no inverses, list their `C` symbols first with
    /// strictly increasing index, and then their `A`/`B` symbols grouped by
    /// strictly increasing leaf index.
    pub fn is_monotone(&self) -> bool {
        is_semi_normal_positive(&self.positive_p) && is_semi_normal_positive(&self.positive_q)
    }
}

/// Structural check on a positive word.
pub fn is_semi_normal_positive(w: &Word) -> bool {
    let syms = w.symbols();
    if syms.iter().any(|s| s.inverse) {
        return false;
    }
    let split = syms.iter().position(|s| s.family != Family::C).unwrap_or(syms.len());
    let (cs, rest) = syms.split_at(split);
    cs.windows(2).all(|p| p[0].index < p[1].index)
        && rest.iter().all(|s| matches!(s.family, Family::A | Family::B))
        && rest.windows(2).all(|p| p[0].index <= p[1].index)
}

/// Splits `x` into `P`, a comb permutation `(k, σ)` and `Q` with
/// `x = P · perm_element(k, σ) · Q⁻¹`. `P` sends the domain leaves of `x`,
/// in canonical tree order, to the strips of `R_k`; `Q` does the same for
/// the range.
pub fn split_ppiq(x: &Element) -> Result<(Element, (usize, Vec<usize>), Element)> {
    let dim = x.dim();
    let dom = canonical_leaf_order(&x.domain());
    let ran = canonical_leaf_order(&x.range());
    let k = dom.len();
    let strips = comb_leaves(k, dim)?;
    let sigma: Vec<usize> = dom
        .iter()
        .map(|d| {
            let (_, r) = x.pairs().iter().find(|(a, _)| a == d).expect("leaf belongs to the domain");
            ran.iter().position(|b| b == r).expect("leaf belongs to the range")
        })
        .collect();
    let p = Element::new(dim, dom.into_iter().zip(strips.iter().cloned()).collect())?;
    let q = Element::new(dim, ran.into_iter().zip(strips).collect())?;
    Ok((p, (k, sigma), q))
}

/// The tree whose leaves, in order, are the preimages of the strips of the
/// comb range of `p`.
fn positive_tree(p: &Element) -> Result<CaretTree> {
    let k = p.block_count();
    let strips = comb_leaves(k, p.dim())?;
    if p.range() != comb(k, p.dim())? {
        return Err(Error::NotPositive);
    }
    let order: Vec<Block> = strips
        .iter()
        .map(|s| p.pairs().iter().find(|(_, r)| r == s).map(|(d, _)| d.clone()))
        .collect::<Option<_>>()
        .ok_or(Error::NotPositive)?;
    order_to_tree(p.dim(), &order).ok_or(Error::NotPositive)
}

/// Backbone carets first as `C` symbols, then the remaining carets in
/// pre-order as `A`/`B` symbols indexed by the number of leaves to their left.
fn positive_word(t: &CaretTree) -> Word {
    fn attach(t: &CaretTree, left: usize, out: &mut Word) {
        if let CaretTree::Caret { dir, low, high } = t {
            let sym = if *dir == 0 {
                GeneratorSymbol::a(left)
            } else {
                GeneratorSymbol::b(left).with_direction(*dir)
            };
            out.push(sym);
            attach(low, left, out);
            attach(high, left + low.leaves(), out);
        }
    }
    let mut w = Word::empty();
    let mut node = t;
    let mut m = 0;
    while let CaretTree::Caret { dir, high, .. } = node {
        if *dir != 0 {
            w.push(GeneratorSymbol::c(m).with_direction(*dir));
        }
        m += 1;
        node = high;
    }
    let mut node = t;
    let mut left = 0;
    while let CaretTree::Caret { low, high, .. } = node {
        attach(low, left, &mut w);
        left += low.leaves();
        node = high;
    }
    w
}

fn verified(w: Word, target: &Element, what: &str) -> Result<Word> {
    let got = evaluate_word(&w, target.dim())?;
    if got != *target {
        return Err(Error::UnverifiedDecomposition(format!("{what}: word {w} does not evaluate to its source")));
    }
    Ok(w)
}

/// Word without inverses for a positive element.
pub fn decompose_positive(p: &Element) -> Result<Word> {
    if p.is_identity() {
        return Ok(Word::empty());
    }
    let t = positive_tree(p)?;
    let w = positive_word(&t);
    let w = if ATTACH_ON_RIGHT { w } else { Word(w.0.into_iter().rev().collect()) };
    verified(w, p, "positive part")
}

/// Word over `p` and `q` for the comb permutation sending strip `j` to `sigma[j]`.
///
/// Bubble sort by adjacent transpositions. The transposition of strips `t`
/// and `t+1` of `R_k` is `c^-r s c^r` with `s = p_{k-2}`, `c = q_{k-2}` and
/// `r = k-2-t (mod k)`; consecutive conjugators are merged, so the word keeps
/// track of the current rotation `r` and moves it the short way round.
pub fn decompose_permutation(k: usize, sigma: &[usize]) -> Result<Word> {
    let target = perm_element(k, sigma, 1)?;
    let mut w = Word::empty();
    if k < 2 {
        return verified(w, &target, "permutation");
    }
    let s = GeneratorSymbol::p(k - 2);
    let c = GeneratorSymbol::q(k - 2);
    let mut rot = 0usize;
    let mut turn_to = |w: &mut Word, r: usize| {
        let fwd = (r + k - rot) % k;
        let sym = if fwd <= k - fwd { c } else { c.inv() };
        for _ in 0..fwd.min(k - fwd) {
            w.push(sym);
        }
        rot = r;
    };
    // contents[t] is the strip currently at logical position t
    let mut contents: Vec<usize> = (0..k).collect();
    let mut swapped = true;
    while swapped {
        swapped = false;
        for t in 0..k - 1 {
            if sigma[contents[t]] > sigma[contents[t + 1]] {
                contents.swap(t, t + 1);
                turn_to(&mut w, (2 * k - 2 - t) % k);
                w.push(s);
                swapped = true;
            }
        }
    }
    turn_to(&mut w, 0);
    verified(w.free_reduce(), &target, "permutation")
}

/// Word over the infinite families equal to `x`.
pub fn decompose(x: &Element) -> Result<Word> {
    let w = SemiNormalForm::of(x)?.word()?.free_reduce();
    verified(w, x, "decomposition")
}

/// Word over the finite generating set equal to `x`, with its length. The
/// length bounds the word length of `x` from above.
pub fn upper_bound_length(x: &Element) -> Result<(Word, usize)> {
    let table = RelationTable::get(x.dim())?;
    let w = table.shift_rewrite(&decompose(x)?)?;
    let w = verified(w, x, "finite rewriting")?;
    let n = w.len();
    Ok((w, n))
}

/// `Q` as built by [`split_ppiq`], inverted; convenience for callers that
/// want the three factors as elements.
pub fn factors(x: &Element) -> Result<[Element; 3]> {
    let (p, (k, sigma), q) = split_ppiq(x)?;
    Ok([p, perm_element(k, &sigma, x.dim())?, invert(&q)])
}
