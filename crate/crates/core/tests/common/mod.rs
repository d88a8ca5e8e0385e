//! Naive ε oracles written straight from the definitions: every pair of
//! distinct points, every range value (or pair of values), count functions.
#![allow(dead_code)]

use mdshash_core::family::HashFamily;
use mdshash_core::field::FiniteField;
use num_rational::BigRational;

pub fn rows_of(fam: &HashFamily) -> Vec<Vec<u32>> {
    fam.rows()
}

pub fn naive_u_count(rows: &[Vec<u32>]) -> usize {
    let n = rows[0].len();
    let mut best = 0;
    for a1 in 0..n {
        for a2 in a1 + 1..n {
            best = best.max(rows.iter().filter(|h| h[a1] == h[a2]).count());
        }
    }
    best
}

pub fn naive_delta_count(rows: &[Vec<u32>], m: u32, sub: impl Fn(u32, u32) -> u32) -> usize {
    let n = rows[0].len();
    let mut best = 0;
    for a1 in 0..n {
        for a2 in a1 + 1..n {
            for b in 0..m {
                best = best.max(rows.iter().filter(|h| sub(h[a1], h[a2]) == b).count());
            }
        }
    }
    best
}

pub fn cyclic_sub(m: u32) -> impl Fn(u32, u32) -> u32 {
    move |x, y| (x + m - y) % m
}

pub fn field_sub(f: &FiniteField) -> impl Fn(u32, u32) -> u32 + '_ {
    move |x, y| f.sub(x, y)
}

pub fn naive_su(rows: &[Vec<u32>], m: u32) -> (usize, bool) {
    let n = rows[0].len();
    let big_n = rows.len();
    let mut balanced = big_n.is_multiple_of(m as usize);
    for a in 0..n {
        for b in 0..m {
            if rows.iter().filter(|h| h[a] == b).count() * m as usize != big_n {
                balanced = false;
            }
        }
    }
    let mut best = 0;
    for a1 in 0..n {
        for a2 in a1 + 1..n {
            for b1 in 0..m {
                for b2 in 0..m {
                    best = best.max(rows.iter().filter(|h| h[a1] == b1 && h[a2] == b2).count());
                }
            }
        }
    }
    (best, balanced)
}

pub fn frac(num: usize, den: usize) -> BigRational {
    BigRational::new((num as i64).into(), (den as i64).into())
}
