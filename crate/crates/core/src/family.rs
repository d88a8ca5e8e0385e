//! `(N; n, m)` hash families and exhaustive measurement of ε.
//!
//! A family is stored column-major: column `a` is the word
//! `(h_1(a), …, h_N(a))`, so the family doubles as a length-N code whose
//! codewords are indexed by the domain.
//!
//! Two exact strategies compute the worst-case count behind ε:
//!
//! * **pairwise**: visit every pair of distinct domain points and count.
//!   Cost ≈ n(n−1)/2 · N.
//! * **subsets**: for t = N, N−1, … and every t-subset S of the functions,
//!   bucket the domain by its restriction to S (normalised by a common
//!   shift for ΔU, or constant on S for SU). The first t with a bucket
//!   collision is the worst-case count. Cost ≤ 2^N · n.
//!
//! [`Strategy::Auto`] picks the cheaper one. Both break witness ties towards
//! the lexicographically smallest `(a1, a2)` and then the smallest group
//! element(s), so reports do not depend on the strategy or on scheduling.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{GenericCode, LinearCode, DEFAULT_CODEWORD_BUDGET};
use crate::error::{bad, Error, Result};
use crate::field::{prime_power, FiniteField};
use crate::Kind;

/// Default cap on elementary counting events per measurement.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Additive group structure on the range `0..m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RangeGroup {
    /// Z_m with labels as residues.
    #[serde(rename = "zm")]
    Cyclic,
    /// Additive group of GF(m), labels as base-p coefficient vectors.
    #[serde(rename = "gf")]
    Field,
}

impl RangeGroup {
    pub fn as_str(self) -> &'static str {
        match self {
            RangeGroup::Cyclic => "zm",
            RangeGroup::Field => "gf",
        }
    }
}

/// Subtraction in the range group.
#[derive(Clone, Copy, Debug)]
enum GroupSub {
    Cyclic(u32),
    /// Digit-wise subtraction modulo p.
    Field(u32),
}

impl GroupSub {
    fn new(group: RangeGroup, m: u32) -> Result<Self> {
        match group {
            RangeGroup::Cyclic => Ok(GroupSub::Cyclic(m)),
            RangeGroup::Field => prime_power(m as u64)
                .map(|(p, _)| GroupSub::Field(p))
                .ok_or(Error::NoGroup(m)),
        }
    }

    #[inline]
    fn sub(self, a: u32, b: u32) -> u32 {
        match self {
            GroupSub::Cyclic(m) => (a + m - b) % m,
            GroupSub::Field(p) => {
                if p == 2 {
                    return a ^ b;
                }
                let (mut a, mut b) = (a, b);
                let (mut out, mut scale) = (0, 1);
                while a > 0 || b > 0 {
                    out += ((a % p + p - b % p) % p) * scale;
                    a /= p;
                    b /= p;
                    scale *= p;
                }
                out
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashFamily {
    funcs: usize,
    domain: usize,
    range: u32,
    group: Option<RangeGroup>,
    cols: Vec<u32>,
}

impl HashFamily {
    /// Builds a family from its N×n table (row i is function h_i).
    pub fn from_rows(rows: &[Vec<u32>], range: u32, group: Option<RangeGroup>) -> Result<Self> {
        let funcs = rows.len();
        let domain = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != domain) {
            return Err(bad("family rows must have equal length"));
        }
        let mut cols = vec![0u32; funcs * domain];
        for (i, row) in rows.iter().enumerate() {
            for (a, &v) in row.iter().enumerate() {
                cols[a * funcs + i] = v;
            }
        }
        Self::from_columns(funcs, domain, range, group, cols)
    }

    /// Builds a family from its columns; `words[a] = (h_1(a), …, h_N(a))`.
    pub fn from_words(words: &[Vec<u32>], range: u32, group: Option<RangeGroup>) -> Result<Self> {
        let funcs = words.first().map_or(0, Vec::len);
        if words.iter().any(|w| w.len() != funcs) {
            return Err(bad("family columns must have equal length"));
        }
        Self::from_columns(funcs, words.len(), range, group, words.concat())
    }

    fn from_columns(
        funcs: usize,
        domain: usize,
        range: u32,
        group: Option<RangeGroup>,
        cols: Vec<u32>,
    ) -> Result<Self> {
        if funcs < 1 {
            return Err(bad("family needs at least one function"));
        }
        if range < 2 {
            return Err(bad(format!("range size m = {range} must be at least 2")));
        }
        if (domain as u64) < range as u64 {
            return Err(bad(format!(
                "domain size n = {domain} smaller than range size m = {range}"
            )));
        }
        if let Some(pos) = cols.iter().position(|&v| v >= range) {
            return Err(bad(format!(
                "entry h_{}({}) = {} not below m = {range}",
                pos % funcs,
                pos / funcs,
                cols[pos]
            )));
        }
        if let Some(g) = group {
            GroupSub::new(g, range)?;
        }
        Ok(HashFamily {
            funcs,
            domain,
            range,
            group,
            cols,
        })
    }

    /// N, the number of functions.
    pub fn funcs(&self) -> usize {
        self.funcs
    }

    /// n, the domain size.
    pub fn domain(&self) -> usize {
        self.domain
    }

    /// m, the range size.
    pub fn range(&self) -> u32 {
        self.range
    }

    pub fn group(&self) -> Option<RangeGroup> {
        self.group
    }

    /// The group used for ΔU measurements: the attached one, else Z_m.
    pub fn effective_group(&self) -> RangeGroup {
        self.group.unwrap_or(RangeGroup::Cyclic)
    }

    pub fn with_group(mut self, group: Option<RangeGroup>) -> Result<Self> {
        if let Some(g) = group {
            GroupSub::new(g, self.range)?;
        }
        self.group = group;
        Ok(self)
    }

    #[inline]
    pub fn value(&self, func: usize, point: usize) -> u32 {
        self.cols[point * self.funcs + func]
    }

    /// `(h_1(a), …, h_N(a))`.
    #[inline]
    pub fn column(&self, point: usize) -> &[u32] {
        &self.cols[point * self.funcs..(point + 1) * self.funcs]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.funcs)
            .map(|i| (0..self.domain).map(|a| self.value(i, a)).collect())
            .collect()
    }

    /// Condition 1 of strong universality: every value is taken by exactly
    /// N/m functions at every point.
    pub fn is_balanced(&self) -> bool {
        if !self.funcs.is_multiple_of(self.range as usize) {
            return false;
        }
        let target = self.funcs / self.range as usize;
        (0..self.domain).into_par_iter().all(|a| {
            let mut hist = vec![0usize; self.range as usize];
            for &v in self.column(a) {
                hist[v as usize] += 1;
            }
            hist.iter().all(|&c| c == target)
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Auto,
    Pairwise,
    Subsets,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasureOptions {
    pub budget: u128,
    pub strategy: Strategy,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            budget: DEFAULT_BUDGET,
            strategy: Strategy::Auto,
        }
    }
}

/// Pair of domain points (and range values) achieving the worst case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub a1: usize,
    pub a2: usize,
    /// Difference `h(a1) − h(a2)` for ΔU.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
    /// Output pair `(h(a1), h(a2))` for SU.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_pair: Option<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonReport {
    pub kind: Kind,
    /// count/N for U and ΔU, count·m/N for SU.
    #[serde(serialize_with = "crate::rational::serde_ratio::serialize")]
    pub epsilon: BigRational,
    /// Worst-case number of functions.
    pub count: usize,
    pub funcs: usize,
    pub domain: usize,
    pub range: u32,
    pub witness: Witness,
    /// SU condition 1; `None` for the other kinds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balanced: Option<bool>,
    /// Group used for ΔU.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<RangeGroup>,
}

pub fn measure_epsilon_u(fam: &HashFamily) -> Result<EpsilonReport> {
    measure(fam, Kind::U, &MeasureOptions::default())
}

pub fn measure_epsilon_delta(fam: &HashFamily) -> Result<EpsilonReport> {
    measure(fam, Kind::DeltaU, &MeasureOptions::default())
}

pub fn measure_epsilon_su(fam: &HashFamily) -> Result<EpsilonReport> {
    measure(fam, Kind::SU, &MeasureOptions::default())
}

/// Exact worst-case ε of `fam` for the given notion.
///
/// ΔU uses [`HashFamily::effective_group`]. SU reports ε even when the
/// family is unbalanced; then it can exceed 1.
pub fn measure(fam: &HashFamily, kind: Kind, opts: &MeasureOptions) -> Result<EpsilonReport> {
    let sub = GroupSub::new(fam.effective_group(), fam.range)?;
    let (n, big_n) = (fam.domain as u128, fam.funcs as u128);
    let pair_cost = (n * (n - 1) / 2).saturating_mul(big_n);
    let subset_cost = if fam.funcs >= 100 {
        u128::MAX
    } else {
        (1u128 << fam.funcs).saturating_mul(n)
    };
    let strategy = match opts.strategy {
        Strategy::Auto if subset_cost < pair_cost && fam.funcs < 64 => Strategy::Subsets,
        Strategy::Auto => Strategy::Pairwise,
        Strategy::Subsets if fam.funcs >= 64 => return Err(bad("subset strategy needs N < 64")),
        s => s,
    };
    let cost = if strategy == Strategy::Subsets {
        subset_cost
    } else {
        pair_cost
    };
    if cost > opts.budget {
        return Err(Error::TooLarge {
            needed: cost,
            budget: opts.budget,
        });
    }

    let (a1, a2) = match strategy {
        Strategy::Subsets => worst_pair_by_subsets(fam, kind, sub).1,
        _ => worst_pair_pairwise(fam, kind, sub).1,
    };
    let (count, b, b_pair) = pair_detail(fam, kind, sub, a1, a2);
    let epsilon = match kind {
        Kind::SU => BigRational::new(
            (count as u64 * fam.range as u64).into(),
            (fam.funcs as u64).into(),
        ),
        _ => BigRational::new((count as u64).into(), (fam.funcs as u64).into()),
    };
    Ok(EpsilonReport {
        kind,
        epsilon,
        count,
        funcs: fam.funcs,
        domain: fam.domain,
        range: fam.range,
        witness: Witness { a1, a2, b, b_pair },
        balanced: (kind == Kind::SU).then(|| fam.is_balanced()),
        group: (kind == Kind::DeltaU).then(|| fam.effective_group()),
    })
}

/// Worst count for a single pair plus the smallest value(s) achieving it.
fn pair_detail(
    fam: &HashFamily,
    kind: Kind,
    sub: GroupSub,
    a1: usize,
    a2: usize,
) -> (usize, Option<u32>, Option<(u32, u32)>) {
    let (x, y) = (fam.column(a1), fam.column(a2));
    match kind {
        Kind::U => (x.iter().zip(y).filter(|(u, v)| u == v).count(), None, None),
        Kind::DeltaU => {
            let mut diffs: Vec<u32> = x.iter().zip(y).map(|(&u, &v)| sub.sub(u, v)).collect();
            let (c, b) = most_common(&mut diffs);
            (c, Some(b), None)
        }
        Kind::SU => {
            let mut joint: Vec<(u32, u32)> = x.iter().zip(y).map(|(&u, &v)| (u, v)).collect();
            let (c, b) = most_common(&mut joint);
            (c, None, Some(b))
        }
    }
}

/// Highest multiplicity and the smallest value having it.
fn most_common<T: Ord + Copy>(items: &mut [T]) -> (usize, T) {
    items.sort_unstable();
    let mut best = (0usize, items[0]);
    let mut i = 0;
    while i < items.len() {
        let j = i + items[i..].iter().take_while(|&&v| v == items[i]).count();
        if j - i > best.0 {
            best = (j - i, items[i]);
        }
        i = j;
    }
    best
}

fn pair_count(x: &[u32], y: &[u32], kind: Kind, sub: GroupSub, scratch: &mut Vec<u64>) -> usize {
    match kind {
        Kind::U => x.iter().zip(y).filter(|(u, v)| u == v).count(),
        Kind::DeltaU => {
            scratch.clear();
            scratch.extend(x.iter().zip(y).map(|(&u, &v)| sub.sub(u, v) as u64));
            multiplicity(scratch)
        }
        Kind::SU => {
            scratch.clear();
            scratch.extend(
                x.iter()
                    .zip(y)
                    .map(|(&u, &v)| ((u as u64) << 32) | v as u64),
            );
            multiplicity(scratch)
        }
    }
}

fn multiplicity(items: &mut [u64]) -> usize {
    items.sort_unstable();
    let mut best = 0;
    let mut i = 0;
    while i < items.len() {
        let j = i + items[i..].iter().take_while(|&&v| v == items[i]).count();
        best = best.max(j - i);
        i = j;
    }
    best
}

/// Reduction key: larger count wins, then the smaller pair.
fn better(a: (usize, (usize, usize)), b: (usize, (usize, usize))) -> (usize, (usize, usize)) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 <= b.1) {
        a
    } else {
        b
    }
}

fn worst_pair_pairwise(fam: &HashFamily, kind: Kind, sub: GroupSub) -> (usize, (usize, usize)) {
    (0..fam.domain - 1)
        .into_par_iter()
        .map_init(Vec::new, |scratch, a1| {
            let x = fam.column(a1);
            let mut best = (0usize, (a1, a1 + 1));
            let mut first = true;
            for a2 in a1 + 1..fam.domain {
                let c = pair_count(x, fam.column(a2), kind, sub, scratch);
                if first || c > best.0 {
                    best = (c, (a1, a2));
                    first = false;
                }
            }
            best
        })
        .reduce(|| (0, (usize::MAX, usize::MAX)), better)
}

fn worst_pair_by_subsets(fam: &HashFamily, kind: Kind, sub: GroupSub) -> (usize, (usize, usize)) {
    let big_n = fam.funcs;
    for t in (1..=big_n).rev() {
        let found = combinations(big_n, t)
            .into_par_iter()
            .filter_map(|s| first_collision(fam, kind, sub, &s))
            .min();
        if let Some(pair) = found {
            return (t, pair);
        }
    }
    (0, (0, 1))
}

fn combinations(n: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..t).rev().find(|&i| idx[i] < n - t + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Smallest pair of points whose restrictions to `subset` collide, where
/// collision means equal (U), equal up to a common shift (ΔU), or both
/// constant (SU).
fn first_collision(
    fam: &HashFamily,
    kind: Kind,
    sub: GroupSub,
    subset: &[usize],
) -> Option<(usize, usize)> {
    if kind == Kind::SU {
        let mut found = None;
        for a in 0..fam.domain {
            let col = fam.column(a);
            let v0 = col[subset[0]];
            if subset.iter().all(|&i| col[i] == v0) {
                match found {
                    None => found = Some(a),
                    Some(f) => return Some((f, a)),
                }
            }
        }
        return None;
    }
    let bits = 32 - (fam.range - 1).leading_zeros().min(31);
    let key_len = match kind {
        Kind::DeltaU => subset.len() - 1,
        _ => subset.len(),
    };
    let key_of = |a: usize, out: &mut Vec<u32>| {
        let col = fam.column(a);
        out.clear();
        match kind {
            Kind::DeltaU => {
                let base = col[subset[0]];
                out.extend(subset[1..].iter().map(|&i| sub.sub(col[i], base)));
            }
            _ => out.extend(subset.iter().map(|&i| col[i])),
        }
    };
    if key_len as u32 * bits <= 128 {
        let pack = |k: &[u32]| k.iter().fold(0u128, |acc, &v| (acc << bits) | v as u128);
        let mut buf = Vec::with_capacity(key_len);
        scan_buckets((0..fam.domain).map(|a| {
            key_of(a, &mut buf);
            pack(&buf)
        }))
    } else {
        scan_buckets((0..fam.domain).map(|a| {
            let mut buf = Vec::with_capacity(key_len);
            key_of(a, &mut buf);
            buf
        }))
    }
}

/// Points arrive in increasing order; returns the smallest `(first, second)`
/// pair sharing a key.
fn scan_buckets<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Option<(usize, usize)> {
    let mut seen: HashMap<K, (usize, bool)> = HashMap::new();
    let mut best: Option<(usize, usize)> = None;
    for (a, key) in keys.enumerate() {
        match seen.get_mut(&key) {
            Some((first, paired)) => {
                if !*paired {
                    *paired = true;
                    let cand = (*first, a);
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
            None => {
                if best.is_some_and(|b| b.0 < a) {
                    // later first elements cannot beat the current best
                    continue;
                }
                seen.insert(key, (a, false));
            }
        }
    }
    best
}

/// Family whose functions are the coordinates and whose domain points are
/// the codewords (message order for linear codes).
pub fn code_to_family(code: &GenericCode) -> Result<HashFamily> {
    let group = prime_power(code.q() as u64)
        .is_some()
        .then_some(RangeGroup::Field);
    HashFamily::from_words(code.words(), code.q(), group)
}

pub fn linear_code_to_family(code: &LinearCode) -> Result<HashFamily> {
    let words = code.codewords(DEFAULT_CODEWORD_BUDGET)?;
    HashFamily::from_words(&words, code.q(), Some(RangeGroup::Field))
}

/// Result of reading a family back as a code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCode {
    pub code: GenericCode,
    /// Domain points dropped because their column repeats an earlier one.
    pub duplicates: Vec<usize>,
}

impl FamilyCode {
    pub fn has_duplicates(&self) -> bool {
        !self.duplicates.is_empty()
    }
}

/// Inverse of [`code_to_family`]: word(a) = (h_1(a), …, h_N(a)).
pub fn family_to_code(fam: &HashFamily) -> Result<FamilyCode> {
    let mut seen = std::collections::HashSet::new();
    let mut words = Vec::new();
    let mut duplicates = Vec::new();
    for a in 0..fam.domain {
        let col = fam.column(a);
        if seen.insert(col) {
            words.push(col.to_vec());
        } else {
            duplicates.push(a);
        }
    }
    let code = GenericCode::new_unchecked_size(fam.range, words)?;
    Ok(FamilyCode { code, duplicates })
}

/// Cosets of `{λe}` inside a code that contains the all-ones word `e`,
/// each given by its lexicographically smallest member, in ascending order.
pub fn allones_coset_representatives(code: &LinearCode) -> Result<Vec<Vec<u32>>> {
    if !code.contains_all_ones() {
        return Err(Error::AllOnesNotInCode);
    }
    let field: &Arc<FiniteField> = code.field();
    let total = code.size().unwrap_or(u128::MAX);
    let needed = total.saturating_mul(code.q() as u128);
    if needed > DEFAULT_BUDGET {
        return Err(Error::TooLarge {
            needed,
            budget: DEFAULT_BUDGET,
        });
    }
    let mut reps: Vec<Vec<u32>> = (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let c = code.codeword(i);
            let smallest = (1..field.order())
                .map(|l| c.iter().map(|&x| field.add(x, l)).collect::<Vec<u32>>())
                .all(|shifted| shifted > c);
            smallest.then_some(c)
        })
        .collect();
    reps.sort();
    Ok(reps)
}

/// ΔU family over GF(q) from a linear code containing `e`: the domain is the
/// q^(k−1) cosets of `{λe}`, `h_i(coset)` is coordinate i of its
/// representative.
pub fn code_to_delta_family(code: &LinearCode) -> Result<HashFamily> {
    let reps = allones_coset_representatives(code)?;
    HashFamily::from_words(&reps, code.q(), Some(RangeGroup::Field))
}
