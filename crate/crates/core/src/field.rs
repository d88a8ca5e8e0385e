//! Table-backed arithmetic over GF(q) for prime powers q ≤ 1024.
//!
//! Element labels are integers `0..q`. For q = p^e the label of the element
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` is `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`,
//! reduced modulo the smallest monic irreducible polynomial of degree e
//! (candidates ordered by the integer encoding of their lower coefficients).

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 1024;

/// Returns `(p, e)` with `q = p^e` and `p` prime, or `None`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteField {
    q: u32,
    p: u32,
    e: u32,
    /// Monic modulus, coefficients low to high (length e + 1).
    modulus: Vec<u32>,
    add: Vec<u16>,
    neg: Vec<u16>,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("q", &self.q)
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl FiniteField {
    pub fn new(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_ORDER as u64 {
            return Err(Error::FieldOrderOutOfRange(q));
        }
        let q = q as u32;
        let modulus = smallest_irreducible(p, e);
        let digits = |mut v: u32| {
            let mut d = vec![0u32; e as usize];
            for slot in d.iter_mut() {
                *slot = v % p;
                v /= p;
            }
            d
        };
        let label = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);

        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut neg = vec![0u16; qs];
        for a in 0..q {
            let da = digits(a);
            let na: Vec<u32> = da.iter().map(|&c| (p - c) % p).collect();
            neg[a as usize] = label(&na) as u16;
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = label(&s) as u16;
            }
        }

        // Find the smallest primitive element and build exp/log tables.
        let mul_slow = |a: u32, b: u32| label(&poly_mulmod(&digits(a), &digits(b), &modulus, p));
        let mut exp = vec![0u16; qs - 1];
        let mut log = vec![0u16; qs];
        'search: for g in 1..q {
            let mut x = 1u32;
            for (i, slot) in exp.iter_mut().enumerate() {
                if i > 0 && x == 1 {
                    continue 'search;
                }
                *slot = x as u16;
                x = mul_slow(x, g);
            }
            if x != 1 {
                continue;
            }
            break;
        }
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u16;
        }

        Ok(FiniteField {
            q,
            p,
            e,
            modulus,
            add,
            neg,
            exp,
            log,
        })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Coefficients of the defining polynomial, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q as usize + b as usize] as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize] as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q as usize - 1;
        let s = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[s % n] as u32
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.q as usize - 1;
        Ok(self.exp[(n - self.log[a as usize] as usize) % n] as u32)
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.q as u64 - 1;
        self.exp[((self.log[a as usize] as u64 * (k % n)) % n) as usize] as u32
    }

    /// Checked arithmetic entry point; `b` is ignored for `Inv`.
    pub fn arith(&self, op: FieldOp, a: u32, b: Option<u32>) -> Result<u32> {
        self.check(a)?;
        if op == FieldOp::Inv {
            return self.inv(a);
        }
        let b = b.ok_or_else(|| crate::error::bad("binary field op needs two operands"))?;
        self.check(b)?;
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Inv => unreachable!(),
        })
    }

    pub fn check(&self, a: u32) -> Result<()> {
        if a < self.q {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                value: a,
                order: self.q,
            })
        }
    }
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * e.max(1)];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&mut prod, modulus, p);
    prod.truncate(e);
    prod.resize(e, 0);
    prod
}

/// Reduces `a` in place modulo the monic polynomial `m`.
fn poly_rem(a: &mut [u32], m: &[u32], p: u32) {
    let d = m.len() - 1;
    for top in (d..a.len()).rev() {
        let c = a[top];
        if c == 0 {
            continue;
        }
        for (k, &mk) in m.iter().enumerate() {
            let idx = top - d + k;
            a[idx] = (a[idx] + (p - c) * mk) % p;
        }
    }
}

fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let e = e as usize;
    let count = (p as u64).pow(e as u32);
    (0..count)
        .map(|r| monic_from_index(r, p, e))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn monic_from_index(mut r: u64, p: u32, deg: usize) -> Vec<u32> {
    let mut f = vec![0u32; deg + 1];
    for c in f.iter_mut().take(deg) {
        *c = (r % p as u64) as u32;
        r /= p as u64;
    }
    f[deg] = 1;
    f
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for r in 0..(p as u64).pow(d as u32) {
            let g = monic_from_index(r, p, d);
            let mut rem = f.to_vec();
            poly_rem(&mut rem, &g, p);
            if rem[..d].iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}
