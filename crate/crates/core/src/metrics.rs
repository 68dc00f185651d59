//! Word lengths from Cayley-ball searches, the size bounds they satisfy, the
//! `C0^n` growth and distortion experiments, and the mixed-diagram counts.

use std::collections::HashSet;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::element::{canonical_serialize, compose, conjugate, power, Element};
use crate::error::{Error, Result};
use crate::generators::{generator, symmetric_generating_set, GeneratorSymbol};
use crate::normal_form::upper_bound_length;
use crate::tree::{all_trees, tree_to_pattern};

/// Default cap on the number of elements a ball may hold.
pub const DEFAULT_BALL_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallRecord {
    /// Canonical bytes of the element.
    pub key: Vec<u8>,
    pub length: usize,
    pub blocks: usize,
    pub depth: u32,
    /// Length of the certified word from the normal-form pipeline.
    pub upper_bound: usize,
}

#[derive(Debug, Clone)]
pub struct Ball {
    pub dim: usize,
    pub radius: usize,
    /// Sorted by length, then key.
    pub records: Vec<BallRecord>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Number of elements of each exact length `0..=radius`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.radius + 1];
        for r in &self.records {
            out[r.length] += 1;
        }
        out
    }

    pub fn get(&self, key: &[u8]) -> Option<&BallRecord> {
        self.records.iter().find(|r| r.key == key)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("key,length,blocks,depth,upper_bound\n");
        for r in &self.records {
            let hex: String = r.key.iter().map(|b| format!("{b:02x}")).collect();
            let _ = writeln!(s, "{hex},{},{},{},{}", r.length, r.blocks, r.depth, r.upper_bound);
        }
        s
    }
}

/// Breadth-first ball of `radius` around the identity under right
/// multiplication by `gens`. The result does not depend on thread scheduling.
pub fn bfs_ball(radius: usize, dim: usize, gens: &[GeneratorSymbol], budget: usize) -> Result<Ball> {
    let gen_elems: Vec<Element> = gens.iter().map(|g| generator(g, dim)).collect::<Result<_>>()?;
    let id = Element::identity(dim);
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    seen.insert(canonical_serialize(&id));
    let mut layers: Vec<Vec<(Vec<u8>, Element)>> = vec![vec![(canonical_serialize(&id), id)]];
    for _ in 0..radius {
        let frontier = layers.last().expect("at least one layer");
        let products: Vec<Element> = frontier
            .par_iter()
            .flat_map_iter(|(_, e)| gen_elems.iter().map(move |g| compose(e, g)))
            .collect::<Result<_>>()?;
        let mut next: Vec<(Vec<u8>, Element)> = products
            .into_iter()
            .map(|e| (canonical_serialize(&e), e))
            .filter(|(k, _)| !seen.contains(k))
            .collect();
        next.sort_by(|a, b| a.0.cmp(&b.0));
        next.dedup_by(|a, b| a.0 == b.0);
        for (k, _) in &next {
            seen.insert(k.clone());
        }
        if seen.len() > budget {
            return Err(Error::BallTooLarge { budget });
        }
        layers.push(next);
    }
    let flat: Vec<(usize, Vec<u8>, Element)> = layers
        .into_iter()
        .enumerate()
        .flat_map(|(len, layer)| layer.into_iter().map(move |(k, e)| (len, k, e)))
        .collect();
    let records = flat
        .into_par_iter()
        .map(|(length, key, e)| {
            Ok(BallRecord {
                key,
                length,
                blocks: e.block_count(),
                depth: e.depth(),
                upper_bound: upper_bound_length(&e)?.1,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ball { dim, radius, records })
}

/// Ball over the symmetric finite generating set with the default budget.
pub fn standard_ball(radius: usize, dim: usize) -> Result<Ball> {
    bfs_ball(radius, dim, &symmetric_generating_set(dim), DEFAULT_BALL_BUDGET)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spread {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

fn spread(values: impl Iterator<Item = f64>) -> Option<Spread> {
    let (mut min, mut max, mut sum, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
    for v in values {
        min = min.min(v);
        max = max.max(v);
        sum += v;
        n += 1;
    }
    (n > 0).then(|| Spread { min, max, mean: sum / n as f64 })
}

#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub dim: usize,
    pub checked: usize,
    /// Whether `blocks <= 4^length` was asserted (dimension 2 only).
    pub block_bound_asserted: bool,
    /// Largest `blocks^(1/length)` seen.
    pub max_block_growth: f64,
    /// `length / log2(blocks)` over elements with more than one block.
    pub vs_log: Option<Spread>,
    /// `length / (blocks · log2(blocks))` over the same elements.
    pub vs_nlogn: Option<Spread>,
}

impl std::fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "dim {}: {} elements checked", self.dim, self.checked)?;
        writeln!(
            f,
            "blocks <= 4^length: {}",
            if self.block_bound_asserted { "asserted" } else { "not asserted" }
        )?;
        writeln!(f, "max blocks^(1/length): {:.4}", self.max_block_growth)?;
        for (name, s) in [("length / log2(blocks)", self.vs_log), ("length / (blocks log2 blocks)", self.vs_nlogn)] {
            if let Some(s) = s {
                writeln!(f, "{name}: min {:.4} max {:.4} mean {:.4}", s.min, s.max, s.mean)?;
            }
        }
        Ok(())
    }
}

fn key_hex(key: &[u8]) -> String {
    key.iter().map(|b| format!("{b:02x}")).collect()
}

/// Checks every record against `depth <= 3·length`, `length <= upper_bound`
/// and, in dimension 2, `blocks <= 4^length`.
pub fn check_bounds(ball: &Ball) -> Result<BoundsReport> {
    let assert_blocks = ball.dim == 2;
    let mut max_growth: f64 = 0.0;
    for r in &ball.records {
        let violation = |what: String| Error::BoundViolation {
            key: key_hex(&r.key),
            what,
        };
        if assert_blocks && r.length < 32 && r.blocks as u64 > 4u64.pow(r.length as u32) {
            return Err(violation(format!("{} blocks at length {}", r.blocks, r.length)));
        }
        if r.depth as usize > 3 * r.length {
            return Err(violation(format!("depth {} at length {}", r.depth, r.length)));
        }
        if r.length > r.upper_bound {
            return Err(violation(format!("length {} above upper bound {}", r.length, r.upper_bound)));
        }
        if r.length > 0 {
            max_growth = max_growth.max((r.blocks as f64).powf(1.0 / r.length as f64));
        }
    }
    let big = || ball.records.iter().filter(|r| r.blocks > 1);
    Ok(BoundsReport {
        dim: ball.dim,
        checked: ball.records.len(),
        block_bound_asserted: assert_blocks,
        max_block_growth: max_growth,
        vs_log: spread(big().map(|r| r.length as f64 / (r.blocks as f64).log2())),
        vs_nlogn: spread(big().map(|r| r.length as f64 / (r.blocks as f64 * (r.blocks as f64).log2()))),
    })
}

fn c0(dim: usize) -> Result<Element> {
    generator(&GeneratorSymbol::c(0), dim)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C0Row {
    pub n: usize,
    pub blocks: usize,
    pub depth: u32,
    pub domain_horizontal_only: bool,
    pub range_vertical_only: bool,
    pub bit_reversal: bool,
}

fn reverse_bits(j: u128, n: usize) -> u128 {
    if n == 0 {
        0
    } else {
        j.reverse_bits() >> (128 - n)
    }
}

fn is_bit_reversal(e: &Element, n: usize) -> bool {
    e.pairs().iter().all(|(d, r)| {
        let (dy, rx) = (d.interval(1), r.interval(0));
        d.interval(0).is_unit()
            && r.interval(1).is_unit()
            && dy.level() as usize == n
            && rx.level() as usize == n
            && rx.num() == reverse_bits(dy.num(), n)
    })
}

/// `C0^n` for `n = 0..=n_max` in dimension 2.
pub fn experiment_c0_growth(n_max: usize) -> Result<Vec<C0Row>> {
    let c = c0(2)?;
    let mut e = Element::identity(2);
    let mut rows = vec![];
    for n in 0..=n_max {
        if n > 0 {
            e = compose(&e, &c)?;
        }
        rows.push(C0Row {
            n,
            blocks: e.block_count(),
            depth: e.depth(),
            domain_horizontal_only: e.pairs().iter().all(|(d, _)| d.interval(0).is_unit()),
            range_vertical_only: e.pairs().iter().all(|(_, r)| r.interval(1).is_unit()),
            bit_reversal: is_bit_reversal(&e, n),
        });
    }
    Ok(rows)
}

pub fn c0_csv(rows: &[C0Row]) -> String {
    let mut s = String::from("n,blocks,depth,domain_horizontal_only,range_vertical_only,bit_reversal\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.n, r.blocks, r.depth, r.domain_horizontal_only, r.range_vertical_only, r.bit_reversal
        );
    }
    s
}

/// Block counts of `C0^-n A0 C0^n` for `n = 0..=10`, pinned from the engine.
pub const DISTORTION_FIXTURE: [usize; 11] = [3, 6, 12, 24, 48, 96, 192, 384, 768, 1536, 3072];

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionRow {
    pub n: usize,
    /// Length of the word `C0'^n A0 C0^n`.
    pub word_length: usize,
    pub blocks: usize,
    pub vertical_only: bool,
    /// `blocks(n) / blocks(n-1)`; absent for `n = 0`.
    pub ratio: Option<f64>,
}

/// `g_n = C0^-n A0 C0^n` in dimension 2 for `n = 0..=n_max`.
pub fn experiment_distortion(n_max: usize) -> Result<Vec<DistortionRow>> {
    let a0 = generator(&GeneratorSymbol::a(0), 2)?;
    let c = c0(2)?;
    let mut rows: Vec<DistortionRow> = vec![];
    for n in 0..=n_max {
        let g = conjugate(&a0, &power(&c, n as i64)?)?;
        let blocks = g.block_count();
        rows.push(DistortionRow {
            n,
            word_length: 2 * n + 1,
            blocks,
            vertical_only: g.is_vertical_only(),
            ratio: rows.last().map(|p| blocks as f64 / p.blocks as f64),
        });
    }
    Ok(rows)
}

pub fn distortion_csv(rows: &[DistortionRow]) -> String {
    let mut s = String::from("n,word_length,blocks,vertical_only,ratio\n");
    for r in rows {
        let ratio = r.ratio.map(|x| format!("{x:.6}")).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{},{}", r.n, r.word_length, r.blocks, r.vertical_only, ratio);
    }
    s
}

pub fn catalan(m: usize) -> BigUint {
    let mut c = vec![BigUint::one()];
    for i in 1..=m {
        let next = (0..i).map(|j| &c[j] * &c[i - 1 - j]).sum();
        c.push(next);
    }
    c.swap_remove(m)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// Number of elements of `2V` with `k` leaves whose domain tree splits only
/// horizontally and whose range tree splits only vertically: `C_{k-1}^2 · k!`.
pub fn count_mixed(k: usize) -> BigUint {
    assert!(k >= 1, "at least one leaf");
    let c = catalan(k - 1);
    &c * &c * factorial(k)
}

/// Largest `k` accepted by [`enumerate_mixed`].
pub const ENUMERATE_LIMIT: usize = 6;

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Every element counted by [`count_mixed`], deduplicated, in canonical byte order.
pub fn enumerate_mixed(k: usize) -> Result<Vec<Element>> {
    if k == 0 || k > ENUMERATE_LIMIT {
        return Err(Error::TooLarge(k));
    }
    let doms: Vec<_> = all_trees(k, 1).iter().map(|t| tree_to_pattern(t, 2).map(|p| p.1)).collect::<Result<_>>()?;
    let rans: Vec<_> = all_trees(k, 0).iter().map(|t| tree_to_pattern(t, 2).map(|p| p.1)).collect::<Result<_>>()?;
    let perms = permutations(k);
    let (nr, np) = (rans.len(), perms.len());
    let triples: Vec<(usize, usize, usize)> = (0..doms.len())
        .flat_map(|a| (0..nr).flat_map(move |b| (0..np).map(move |c| (a, b, c))))
        .collect();
    let mut out: Vec<(Vec<u8>, Element)> = triples
        .into_par_iter()
        .map(|(a, b, c)| {
            let pairs = doms[a].iter().zip(&perms[c]).map(|(x, &j)| (x.clone(), rans[b][j].clone())).collect();
            Element::new(2, pairs).map(|e| (canonical_serialize(&e), e))
        })
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.dedup_by(|a, b| a.0 == b.0);
    Ok(out.into_iter().map(|(_, e)| e).collect())
}

#[derive(Debug, Clone)]
pub struct CountRow {
    pub n: usize,
    pub catalan: BigUint,
    /// `C_n^2 · n!`.
    pub count: BigUint,
    /// Stirling's formula applied to every factorial of `C_n^2 · n!`.
    pub stirling: f64,
    /// `count / stirling`.
    pub stirling_ratio: f64,
    /// Leading asymptotic term `sqrt(2/π) · 16^n · e^-n · n^(n - 5/2)`.
    pub leading: f64,
    /// `n^n / count`, exact.
    pub genericity: BigRational,
}

#[derive(Debug, Clone)]
pub struct CountTable {
    pub rows: Vec<CountRow>,
}

fn ln_stirling_factorial(n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    0.5 * (2.0 * std::f64::consts::PI * n).ln() + n * n.ln() - n
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 900;
    (x >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Rows `1..=n_max` of the mixed-diagram count and its asymptotics.
pub fn genericity_table(n_max: usize) -> CountTable {
    let rows = (1..=n_max)
        .map(|n| {
            let c = catalan(n);
            let count = &c * &c * factorial(n);
            // C_n = (2n)! / ((n+1)! n!)
            let ln_c = ln_stirling_factorial(2 * n) - ln_stirling_factorial(n + 1) - ln_stirling_factorial(n);
            let ln_stirling = 2.0 * ln_c + ln_stirling_factorial(n);
            let nf = n as f64;
            let ln_leading =
                0.5 * (2.0 / std::f64::consts::PI).ln() + nf * 16f64.ln() - nf + (nf - 2.5) * nf.ln();
            let nn = BigInt::from(n).pow(n as u32);
            CountRow {
                n,
                catalan: c,
                stirling: ln_stirling.exp(),
                stirling_ratio: (ln_big(&count) - ln_stirling).exp(),
                leading: ln_leading.exp(),
                genericity: BigRational::new(nn, BigInt::from(count.clone())),
                count,
            }
        })
        .collect();
    CountTable { rows }
}

impl CountTable {
    /// Row `n` counts `C_n` shapes per tree and `n!` permutations. This is
    /// [`count_mixed`] shifted by one in the Catalan index.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,catalan,count,stirling,stirling_ratio,leading,genericity\n");
        for r in &self.rows {
            let g = r.genericity.to_f64().unwrap_or(0.0);
            let _ = writeln!(
                s,
                "{},{},{},{:.9e},{:.9},{:.9e},{:.9e}",
                r.n, r.catalan, r.count, r.stirling, r.stirling_ratio, r.leading, g
            );
        }
        s
    }
}
