//! q-ary codes: generator-matrix linear codes and explicit codeword lists.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{bad, Error, Result};
use crate::field::FiniteField;

/// Default enumeration caps for distance computations.
pub const DEFAULT_PAIR_BUDGET: u128 = 1 << 20;
pub const DEFAULT_CODEWORD_BUDGET: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceBudget {
    /// Pairwise comparisons allowed for explicit codeword lists.
    pub pairs: u128,
    /// Codewords allowed in a minimum-weight scan of a linear code.
    pub codewords: u128,
}

impl Default for DistanceBudget {
    fn default() -> Self {
        DistanceBudget {
            pairs: DEFAULT_PAIR_BUDGET,
            codewords: DEFAULT_CODEWORD_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub length: usize,
    pub size: u128,
    pub distance: usize,
    pub q: u32,
}

impl CodeParams {
    pub fn singleton_bound(&self) -> BigUint {
        singleton_max_size(self.length, self.distance, self.q)
    }

    pub fn is_mds(&self) -> bool {
        BigUint::from(self.size) == self.singleton_bound()
    }
}

/// Largest size q^(N−D+1) a length-N code with minimum distance D can have.
pub fn singleton_max_size(length: usize, distance: usize, q: u32) -> BigUint {
    assert!(distance >= 1 && distance <= length, "need 1 <= D <= N");
    BigUint::from(q).pow((length - distance + 1) as u32)
}

pub fn hamming_distance(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Decomposes `index` into `k` base-`q` digits, most significant first.
pub(crate) fn index_digits(mut index: u128, q: u32, k: usize) -> Vec<u32> {
    let mut d = vec![0u32; k];
    for slot in d.iter_mut().rev() {
        *slot = (index % q as u128) as u32;
        index /= q as u128;
    }
    d
}

#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Arc<FiniteField>,
    generator: Vec<Vec<u32>>,
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order() && self.generator == other.generator
    }
}

impl LinearCode {
    /// Builds a code from a k×N generator matrix; rows must be independent.
    pub fn new(field: Arc<FiniteField>, generator: Vec<Vec<u32>>) -> Result<Self> {
        let k = generator.len();
        if k == 0 {
            return Err(bad("generator has no rows"));
        }
        let n = generator[0].len();
        if n == 0 || generator.iter().any(|r| r.len() != n) {
            return Err(bad("generator rows must have equal nonzero length"));
        }
        for &x in generator.iter().flatten() {
            field.check(x)?;
        }
        if rank(&field, generator.clone()) != k {
            return Err(bad("generator rows are linearly dependent"));
        }
        Ok(LinearCode { field, generator })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn length(&self) -> usize {
        self.generator[0].len()
    }

    pub fn dim(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &[Vec<u32>] {
        &self.generator
    }

    /// q^k, or `None` on overflow.
    pub fn size(&self) -> Option<u128> {
        (self.q() as u128).checked_pow(self.dim() as u32)
    }

    pub fn encode(&self, message: &[u32]) -> Vec<u32> {
        let f = &*self.field;
        let mut word = vec![0u32; self.length()];
        for (&c, row) in message.iter().zip(&self.generator) {
            if c == 0 {
                continue;
            }
            for (w, &g) in word.iter_mut().zip(row) {
                *w = f.add(*w, f.mul(c, g));
            }
        }
        word
    }

    /// The codeword of the `index`-th message in lexicographic label order.
    pub fn codeword(&self, index: u128) -> Vec<u32> {
        self.encode(&index_digits(index, self.q(), self.dim()))
    }

    /// All codewords in message order, subject to `limit`.
    pub fn codewords(&self, limit: u128) -> Result<Vec<Vec<u32>>> {
        let size = self.size().filter(|&s| s <= limit).ok_or(Error::TooLarge {
            needed: self.size().unwrap_or(u128::MAX),
            budget: limit,
        })?;
        Ok((0..size)
            .into_par_iter()
            .map(|i| self.codeword(i))
            .collect())
    }

    pub fn contains(&self, word: &[u32]) -> bool {
        if word.len() != self.length() || word.iter().any(|&x| x >= self.q()) {
            return false;
        }
        let mut rows = self.generator.clone();
        rows.push(word.to_vec());
        rank(&self.field, rows) == self.dim()
    }

    pub fn contains_all_ones(&self) -> bool {
        self.contains(&vec![1; self.length()])
    }

    pub fn min_distance(&self) -> Result<usize> {
        self.min_distance_with(&DistanceBudget::default())
    }

    /// Minimum nonzero weight over all q^k codewords.
    pub fn min_distance_with(&self, budget: &DistanceBudget) -> Result<usize> {
        let size = self
            .size()
            .filter(|&s| s <= budget.codewords)
            .ok_or(Error::TooLarge {
                needed: self.size().unwrap_or(u128::MAX),
                budget: budget.codewords,
            })?;
        let d = (1..size)
            .into_par_iter()
            .map(|i| self.codeword(i).iter().filter(|&&x| x != 0).count())
            .min()
            .expect("dimension >= 1 gives a nonzero codeword");
        Ok(d)
    }

    pub fn params(&self) -> Result<CodeParams> {
        let size = self.size().ok_or(Error::TooLarge {
            needed: u128::MAX,
            budget: u128::MAX,
        })?;
        Ok(CodeParams {
            length: self.length(),
            size,
            distance: self.min_distance()?,
            q: self.q(),
        })
    }

    pub fn is_mds(&self) -> Result<bool> {
        Ok(self.params()?.is_mds())
    }
}

/// Rank by Gaussian elimination over the field.
fn rank(f: &FiniteField, mut rows: Vec<Vec<u32>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let c = row[col];
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(*x, f.mul(c, p));
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Explicit list of distinct codewords over an alphabet of size q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericCode {
    q: u32,
    words: Vec<Vec<u32>>,
}

impl GenericCode {
    pub fn new(q: u32, words: Vec<Vec<u32>>) -> Result<Self> {
        if words.len() < 2 {
            return Err(Error::TooSmall {
                got: words.len(),
                min: 2,
            });
        }
        Self::new_unchecked_size(q, words)
    }

    /// Same validation as [`GenericCode::new`] but admits a single word.
    pub(crate) fn new_unchecked_size(q: u32, words: Vec<Vec<u32>>) -> Result<Self> {
        if q < 2 {
            return Err(bad("alphabet size must be at least 2"));
        }
        let n = words.first().map_or(0, Vec::len);
        if n == 0 || words.iter().any(|w| w.len() != n) {
            return Err(bad("codewords must have equal nonzero length"));
        }
        if words.iter().flatten().any(|&x| x >= q) {
            return Err(bad(format!("codeword symbol out of range for q = {q}")));
        }
        let mut seen = HashSet::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if !seen.insert(w.as_slice()) {
                return Err(Error::DuplicateCodeword(i));
            }
        }
        Ok(GenericCode { q, words })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn length(&self) -> usize {
        self.words[0].len()
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Vec<u32>] {
        &self.words
    }

    pub fn into_words(self) -> Vec<Vec<u32>> {
        self.words
    }

    pub fn min_distance(&self) -> Result<usize> {
        self.min_distance_with(&DistanceBudget::default())
    }

    pub fn min_distance_with(&self, budget: &DistanceBudget) -> Result<usize> {
        let k = self.words.len() as u128;
        if k < 2 {
            return Err(Error::TooSmall {
                got: self.words.len(),
                min: 2,
            });
        }
        let pairs = k * (k - 1) / 2;
        if pairs > budget.pairs {
            return Err(Error::TooLarge {
                needed: pairs,
                budget: budget.pairs,
            });
        }
        let words = &self.words;
        let d = (0..words.len())
            .into_par_iter()
            .filter_map(|i| {
                words[i + 1..]
                    .iter()
                    .map(|w| hamming_distance(&words[i], w))
                    .min()
            })
            .min()
            .expect("at least one pair");
        Ok(d)
    }

    pub fn params(&self) -> Result<CodeParams> {
        Ok(CodeParams {
            length: self.length(),
            size: self.size() as u128,
            distance: self.min_distance()?,
            q: self.q,
        })
    }

    pub fn is_mds(&self) -> Result<bool> {
        Ok(self.params()?.is_mds())
    }

    pub fn word_set(&self) -> HashSet<&[u32]> {
        self.words.iter().map(Vec::as_slice).collect()
    }
}

impl TryFrom<&LinearCode> for GenericCode {
    type Error = Error;

    fn try_from(code: &LinearCode) -> Result<Self> {
        GenericCode::new(code.q(), code.codewords(DEFAULT_CODEWORD_BUDGET)?)
    }
}

/// Reed–Solomon code evaluating polynomials of degree < k at the first n
/// field elements.
pub fn rs_code(q: u32, k: usize, n: usize) -> Result<LinearCode> {
    let field = Arc::new(FiniteField::new(q as u64)?);
    if !(1 < k && k < n) {
        return Err(bad(format!(
            "Reed-Solomon needs 1 < k < n, got k = {k}, n = {n}"
        )));
    }
    if n > q as usize {
        return Err(bad(format!(
            "Reed-Solomon length {n} exceeds field order {q}"
        )));
    }
    let generator = (0..k)
        .map(|j| (0..n as u32).map(|x| field.pow(x, j as u64)).collect())
        .collect();
    LinearCode::new(field, generator)
}

/// The code `{x : Σ v_i x_i = 0}`; every `v_i` must be nonzero.
pub fn parity_check_code(field: Arc<FiniteField>, v: &[u32]) -> Result<LinearCode> {
    let n = v.len();
    if n < 2 {
        return Err(bad("parity-check code needs length >= 2"));
    }
    if v.contains(&0) {
        return Err(bad("parity-check vector must be all nonzero"));
    }
    let last_inv = field.inv(v[n - 1])?;
    let generator = (0..n - 1)
        .map(|j| {
            let mut row = vec![0u32; n];
            row[j] = 1;
            row[n - 1] = field.neg(field.mul(v[j], last_inv));
            row
        })
        .collect();
    LinearCode::new(field, generator)
}

/// The [n, n−1, 2, q] sum-zero code.
pub fn parity_code(q: u32, n: usize) -> Result<LinearCode> {
    let field = Arc::new(FiniteField::new(q as u64)?);
    parity_check_code(field, &vec![1; n])
}

/// Lexicographically first all-nonzero `v` with `Σ v_i = 0`, if any.
pub fn allones_check_vector(field: &FiniteField, n: usize) -> Option<Vec<u32>> {
    if n < 2 {
        return None;
    }
    let q = field.order();
    // The last coordinate is forced by the prefix, so lexicographic order
    // over full vectors is lexicographic order over prefixes.
    let mut prefix = vec![1u32; n - 1];
    loop {
        let sum = prefix.iter().fold(0, |acc, &x| field.add(acc, x));
        let last = field.neg(sum);
        if last != 0 {
            let mut v = prefix;
            v.push(last);
            return Some(v);
        }
        // odometer over (F_q \ {0})^(n-1)
        let mut i = n - 1;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if prefix[i] + 1 < q {
                prefix[i] += 1;
                break;
            }
            prefix[i] = 1;
        }
    }
}

/// An [n, n−1, 2, q] MDS code containing the all-ones word.
pub fn parity_mds_with_allones(q: u32, n: usize) -> Result<(LinearCode, Vec<u32>)> {
    let field = Arc::new(FiniteField::new(q as u64)?);
    let v = allones_check_vector(&field, n).ok_or(Error::NoSuchVector { q, n })?;
    let code = parity_check_code(field, &v)?;
    debug_assert!(code.contains_all_ones());
    Ok((code, v))
}

/// The first `size` codewords in message order.
pub fn subcode_select(code: &LinearCode, size: u128) -> Result<GenericCode> {
    let total = code.size().unwrap_or(u128::MAX);
    if size > total {
        return Err(Error::TooLarge {
            needed: size,
            budget: total,
        });
    }
    if size < 2 {
        return Err(Error::TooSmall {
            got: size as usize,
            min: 2,
        });
    }
    let words = (0..size)
        .into_par_iter()
        .map(|i| code.codeword(i))
        .collect();
    GenericCode::new(code.q(), words)
}

/// Subcode size used for the minimum-N universal family: (2q−1)·q^(q^(i+1)−3).
pub fn smallest_n_subcode_size(q: u32, i: u32) -> Option<u128> {
    let len = (q as u128).checked_pow(i + 1)?;
    let exp = u32::try_from(len.checked_sub(3)?).ok()?;
    (2 * q as u128 - 1).checked_mul((q as u128).checked_pow(exp)?)
}
