//! Lower bounds on the number of functions N of an ε-U, ε-ΔU or ε-SU
//! `(N; n, m)` family, and where the Singleton-derived bounds overtake the
//! classical ones.
//!
//! | kind | classical ("old")                            | Singleton-derived ("new")     |
//! |------|----------------------------------------------|-------------------------------|
//! | U    | n(m−1) / (n(εm−1) + m²(1−ε))                 | (log_m n − 1) / ε             |
//! | ΔU   | n(m−1) / (m − n + mε(n−1))                   | (log₂ n + m − 1) / (m − 2 + 2ε) |
//! | SU   | 1 + n(m−1)² / (mε(n−1) + m − n)              | m log₂ n / (m − 2(1 − ε))     |
//!
//! Classical bounds are exact rationals. Singleton-derived ones involve a
//! logarithm and are exact only when n is a power of the base.
//!
//! Verdicts compare raw (unrounded) bound values; the integrality-adjusted
//! N is reported next to them but never decides anything.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{bad, Error, Result};
use crate::rational::{format_ratio, from_int, to_f64};
use crate::Kind;

/// Relative tolerance under which two raw bounds count as equal.
pub const EQUAL_TOL: f64 = 1e-9;
/// Slack for comparing a rational ε against a real threshold.
pub const THRESHOLD_SLACK: f64 = 1e-12;
/// Maximum number of rows a sweep may produce.
pub const MAX_SWEEP_ROWS: u128 = 1_000_000;

/// A raw bound value, with its exact rational form when one exists.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    #[serde(serialize_with = "crate::rational::serde_ratio::serialize_opt")]
    pub exact: Option<BigRational>,
}

impl BoundValue {
    pub fn exact(r: BigRational) -> Self {
        BoundValue {
            value: to_f64(&r),
            exact: Some(r),
        }
    }

    pub fn approx(value: f64) -> Self {
        BoundValue { value, exact: None }
    }

    /// Smallest integer ≥ the value; float values get [`EQUAL_TOL`] slack so
    /// that e.g. 3.0000000000004 rounds to 3.
    pub fn ceil(&self) -> i64 {
        match &self.exact {
            Some(r) => r.ceil().to_integer().to_i64().unwrap_or(i64::MAX),
            None => (self.value - EQUAL_TOL * self.value.abs().max(1.0)).ceil() as i64,
        }
    }
}

/// `t` with `base^t = n`, if n is an exact power.
pub fn exact_log(n: u64, base: u64) -> Option<u32> {
    if base < 2 || n == 0 {
        return None;
    }
    let (mut x, mut t) = (n, 0);
    while x % base == 0 {
        x /= base;
        t += 1;
    }
    (x == 1).then_some(t)
}

pub fn log_base(n: u64, base: u64) -> f64 {
    match exact_log(n, base) {
        Some(t) => t as f64,
        None if base == 2 => (n as f64).log2(),
        None => (n as f64).ln() / (base as f64).ln(),
    }
}

fn check_eps(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() || *eps > BigRational::one() {
        return Err(bad(format!("epsilon {} not in (0, 1]", format_ratio(eps))));
    }
    Ok(())
}

fn check_nm(n: u64, m: u64) -> Result<()> {
    if m < 2 || n < 2 {
        return Err(bad(format!("need n >= 2 and m >= 2, got n = {n}, m = {m}")));
    }
    Ok(())
}

/// (n − m) / (m(n − 1)), the least ε an ε-U family can have.
pub fn plotkin_eps_floor(n: u64, m: u64) -> Result<BigRational> {
    if !(n > m && m >= 2) {
        return Err(bad(format!("need n > m >= 2, got n = {n}, m = {m}")));
    }
    Ok(BigRational::new(
        BigInt::from(n - m),
        BigInt::from(m) * BigInt::from(n - 1),
    ))
}

/// Least admissible ε for the kind: the Plotkin floor for U, 1/m otherwise.
pub fn eps_floor(kind: Kind, n: u64, m: u64) -> Result<BigRational> {
    match kind {
        Kind::U => plotkin_eps_floor(n, m),
        _ => {
            check_nm(n, m)?;
            Ok(BigRational::new(1.into(), m.into()))
        }
    }
}

/// Classical bound, exact.
pub fn bound_old(kind: Kind, n: u64, m: u64, eps: &BigRational) -> Result<BigRational> {
    check_nm(n, m)?;
    check_eps(eps)?;
    let (nr, mr) = (from_int(n), from_int(m));
    let one = BigRational::one();
    let (num, den) = match kind {
        Kind::U => (
            &nr * (&mr - &one),
            &nr * (eps * &mr - &one) + &mr * &mr * (&one - eps),
        ),
        Kind::DeltaU => (&nr * (&mr - &one), &mr - &nr + &mr * eps * (&nr - &one)),
        Kind::SU => (
            &nr * (&mr - &one) * (&mr - &one),
            &mr * eps * (&nr - &one) + &mr - &nr,
        ),
    };
    if !den.is_positive() {
        return Err(Error::Inapplicable(format!(
            "classical {kind} bound denominator {} is not positive",
            format_ratio(&den)
        )));
    }
    let v = num / den;
    Ok(if kind == Kind::SU { v + one } else { v })
}

/// Classical bound at a real ε.
pub fn bound_old_real(kind: Kind, n: u64, m: u64, eps: f64) -> Result<f64> {
    check_nm(n, m)?;
    let (n, m) = (n as f64, m as f64);
    let (num, den) = match kind {
        Kind::U => (n * (m - 1.0), n * (eps * m - 1.0) + m * m * (1.0 - eps)),
        Kind::DeltaU => (n * (m - 1.0), m - n + m * eps * (n - 1.0)),
        Kind::SU => (n * (m - 1.0) * (m - 1.0), m * eps * (n - 1.0) + m - n),
    };
    if den <= 0.0 {
        return Err(Error::Inapplicable(format!(
            "classical {kind} bound denominator {den} is not positive"
        )));
    }
    Ok(if kind == Kind::SU {
        1.0 + num / den
    } else {
        num / den
    })
}

/// Singleton-derived bound; exact when the logarithm is an integer.
pub fn bound_new(kind: Kind, n: u64, m: u64, eps: &BigRational) -> Result<BoundValue> {
    check_nm(n, m)?;
    check_eps(eps)?;
    let base = if kind == Kind::U { m } else { 2 };
    let mr = from_int(m);
    let one = BigRational::one();
    let two = from_int(2);
    let den = match kind {
        Kind::U => eps.clone(),
        Kind::DeltaU => &mr - &two + &two * eps,
        Kind::SU => &mr - &two * (&one - eps),
    };
    if !den.is_positive() {
        return Err(Error::Inapplicable(format!(
            "Singleton {kind} bound denominator {} is not positive",
            format_ratio(&den)
        )));
    }
    match exact_log(n, base) {
        Some(t) => {
            let t = from_int(t as u64);
            let num = match kind {
                Kind::U => t - one,
                Kind::DeltaU => t + &mr - one,
                Kind::SU => &mr * t,
            };
            Ok(BoundValue::exact(num / den))
        }
        None => Ok(BoundValue::approx(bound_new_real(kind, n, m, to_f64(eps))?)),
    }
}

/// Singleton-derived bound at a real ε.
pub fn bound_new_real(kind: Kind, n: u64, m: u64, eps: f64) -> Result<f64> {
    check_nm(n, m)?;
    let mf = m as f64;
    let (num, den) = match kind {
        Kind::U => (log_base(n, m) - 1.0, eps),
        Kind::DeltaU => (log_base(n, 2) + mf - 1.0, mf - 2.0 + 2.0 * eps),
        Kind::SU => (mf * log_base(n, 2), mf - 2.0 * (1.0 - eps)),
    };
    if den <= 0.0 {
        return Err(Error::Inapplicable(format!(
            "Singleton {kind} bound denominator {den} is not positive"
        )));
    }
    Ok(num / den)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Threshold {
    /// `None` when the value itself cannot be computed.
    pub value: Option<f64>,
    /// Whether the ordering lemma's hypothesis holds for (n, m).
    pub applicable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdSet {
    pub n: u64,
    pub m: u64,
    /// U crossover, hypothesis n > m².
    pub eps1: Threshold,
    /// Plotkin floor, always defined for n > m.
    pub eps2: Threshold,
    /// ΔU crossover, hypothesis n > m.
    pub eps3: Threshold,
    /// SU crossover (smaller root of a x² − b x + c), hypothesis n > 2^m.
    pub eps4: Threshold,
    pub quad_coeffs: (f64, f64, f64),
    pub discriminant: f64,
}

impl ThresholdSet {
    /// The crossover threshold for the kind, if applicable.
    pub fn for_kind(&self, kind: Kind) -> Option<f64> {
        let t = match kind {
            Kind::U => self.eps1,
            Kind::DeltaU => self.eps3,
            Kind::SU => self.eps4,
        };
        t.applicable.then_some(t.value).flatten()
    }
}

pub fn eps1(n: u64, m: u64) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    let l = log_base(n, m);
    (nf - mf * mf) * (l - 1.0) / ((mf * nf - mf * mf) * l + mf * mf + nf - 2.0 * mf * nf)
}

pub fn eps3(n: u64, m: u64) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    let l = log_base(n, 2);
    (nf * (mf - 1.0) * (mf - 2.0) + (l + mf - 1.0) * (nf - mf))
        / (mf * (nf - 1.0) * (l + mf - 1.0) - 2.0 * nf * (mf - 1.0))
}

/// Coefficients `(a, b, c)` of `a x² − b x + c = 0` whose smaller root is ε₄.
pub fn eps4_coeffs(n: u64, m: u64) -> (f64, f64, f64) {
    let (nf, mf) = (n as f64, m as f64);
    let l = log_base(n, 2);
    let a = 2.0 * (nf - 1.0);
    let b = mf * (nf - 1.0) * (l - 3.0) + 6.0 * nf - 2.0 * mf - 4.0;
    let c = (mf - 2.0) * (nf * mf - 2.0 * nf + 1.0) + (nf - mf) * l;
    (a, b, c)
}

/// Smaller root `(b − √(b² − 4ac)) / 2a`.
pub fn eps4(n: u64, m: u64) -> Result<f64> {
    let (a, b, c) = eps4_coeffs(n, m);
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant(disc));
    }
    Ok((b - disc.sqrt()) / (2.0 * a))
}

pub fn thresholds(n: u64, m: u64) -> Result<ThresholdSet> {
    if !(n > m && m >= 2) {
        return Err(bad(format!("need n > m >= 2, got n = {n}, m = {m}")));
    }
    let (a, b, c) = eps4_coeffs(n, m);
    let discriminant = b * b - 4.0 * a * c;
    let su_applicable = m < 64 && n > (1u64 << m);
    if su_applicable && discriminant < 0.0 {
        return Err(Error::NegativeDiscriminant(discriminant));
    }
    let value = |f: f64| f.is_finite().then_some(f);
    Ok(ThresholdSet {
        n,
        m,
        eps1: Threshold {
            value: value(eps1(n, m)),
            applicable: m.checked_mul(m).is_some_and(|mm| n > mm),
        },
        eps2: Threshold {
            value: Some(to_f64(&plotkin_eps_floor(n, m)?)),
            applicable: true,
        },
        eps3: Threshold {
            value: value(eps3(n, m)),
            applicable: true,
        },
        eps4: Threshold {
            value: eps4(n, m).ok().and_then(value),
            applicable: su_applicable,
        },
        quad_coeffs: (a, b, c),
        discriminant,
    })
}

/// Smallest N ≥ raw such that εN (U, ΔU) or εN/m (SU) is an integer.
pub fn integral_adjust(raw: &BoundValue, eps: &BigRational, kind: Kind, m: u64) -> u64 {
    let start = raw.ceil().max(1) as u64;
    let modulus = match kind {
        Kind::SU => eps / from_int(m),
        _ => eps.clone(),
    };
    // eps·N is integral once N is a multiple of the reduced denominator,
    // so the scan stops within that many steps.
    (start..)
        .find(|&n| (&modulus * from_int(n)).is_integer())
        .expect("a multiple of the denominator exists")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominant {
    Old,
    New,
    Equal,
    OldInapplicable,
    NewInapplicable,
}

impl Dominant {
    pub fn as_str(self) -> &'static str {
        match self {
            Dominant::Old => "old",
            Dominant::New => "new",
            Dominant::Equal => "equal",
            Dominant::OldInapplicable => "old_inapplicable",
            Dominant::NewInapplicable => "new_inapplicable",
        }
    }
}

/// Which side of the crossover threshold ε lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// ε ≥ threshold: the Singleton-derived bound is the better one.
    New,
    /// floor ≤ ε < threshold: the classical bound is the better one.
    Old,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: Kind,
    pub n: u64,
    pub m: u64,
    #[serde(serialize_with = "crate::rational::serde_ratio::serialize")]
    pub eps: BigRational,
    pub old_raw: Option<BoundValue>,
    pub new_raw: Option<BoundValue>,
    pub old_n: Option<u64>,
    pub new_n: Option<u64>,
    pub threshold: Option<f64>,
    #[serde(serialize_with = "crate::rational::serde_ratio::serialize")]
    pub floor: BigRational,
    pub dominant: Dominant,
    pub regime: Option<Regime>,
    /// ε within [`THRESHOLD_SLACK`] of the threshold.
    pub boundary: bool,
}

fn classify(old: Option<&BoundValue>, new: Option<&BoundValue>) -> Dominant {
    match (old, new) {
        (None, _) => Dominant::OldInapplicable,
        (_, None) => Dominant::NewInapplicable,
        (Some(o), Some(n)) => {
            if let (Some(eo), Some(en)) = (&o.exact, &n.exact) {
                return match en.cmp(eo) {
                    std::cmp::Ordering::Equal => Dominant::Equal,
                    std::cmp::Ordering::Greater => Dominant::New,
                    std::cmp::Ordering::Less => Dominant::Old,
                };
            }
            classify_real(o.value, n.value)
        }
    }
}

/// Larger lower bound wins; values within [`EQUAL_TOL`] relative are equal.
pub fn classify_real(old: f64, new: f64) -> Dominant {
    if (old - new).abs() <= EQUAL_TOL * old.abs().max(new.abs()) {
        Dominant::Equal
    } else if new > old {
        Dominant::New
    } else {
        Dominant::Old
    }
}

fn inapplicable_to_none<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Inapplicable(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Evaluates both bounds for a query and decides which dominates.
///
/// Requires n > m ≥ 2 and floor ≤ ε ≤ 1. The threshold and regime are
/// `None` when the kind's ordering hypothesis fails for (n, m); the verdict
/// is still computed from the raw values.
pub fn compare(kind: Kind, n: u64, m: u64, eps: &BigRational) -> Result<BoundReport> {
    if !(n > m && m >= 2) {
        return Err(bad(format!("need n > m >= 2, got n = {n}, m = {m}")));
    }
    check_eps(eps)?;
    let floor = eps_floor(kind, n, m)?;
    if *eps < floor {
        return Err(Error::OutOfRange {
            eps: format_ratio(eps),
            floor: format_ratio(&floor),
        });
    }
    let old_raw = inapplicable_to_none(bound_old(kind, n, m, eps))?.map(BoundValue::exact);
    let new_raw = inapplicable_to_none(bound_new(kind, n, m, eps))?;
    let adjust = |b: &BoundValue| integral_adjust(b, eps, kind, m);
    let threshold = thresholds(n, m)?.for_kind(kind);
    let e = to_f64(eps);
    let (regime, boundary) = match threshold {
        Some(t) => {
            let boundary = (e - t).abs() <= THRESHOLD_SLACK;
            (
                Some(if boundary || e >= t {
                    Regime::New
                } else {
                    Regime::Old
                }),
                boundary,
            )
        }
        None => (None, false),
    };
    Ok(BoundReport {
        kind,
        n,
        m,
        eps: eps.clone(),
        old_n: old_raw.as_ref().map(adjust),
        new_n: new_raw.as_ref().map(adjust),
        dominant: classify(old_raw.as_ref(), new_raw.as_ref()),
        old_raw,
        new_raw,
        threshold,
        floor,
        regime,
        boundary,
    })
}

/// Both raw bounds at a real ε (used at irrational thresholds).
pub fn compare_real(kind: Kind, n: u64, m: u64, eps: f64) -> Result<(f64, f64, Dominant)> {
    let old = bound_old_real(kind, n, m, eps)?;
    let new = bound_new_real(kind, n, m, eps)?;
    Ok((old, new, classify_real(old, new)))
}

/// Outcome of checking one bound against an actual family size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub kind: Kind,
    /// `"old"` (classical) or `"new"` (Singleton-derived).
    pub bound: &'static str,
    pub raw: f64,
    pub satisfied: bool,
}

/// Every applicable raw bound for an ε-`kind` (N; n, m) family and whether
/// N meets it.
pub fn check_family_size(
    kind: Kind,
    funcs: u64,
    n: u64,
    m: u64,
    eps: &BigRational,
) -> Vec<BoundCheck> {
    if !eps.is_positive() || *eps > BigRational::one() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut push = |bound, raw: f64| {
        let satisfied = funcs as f64 >= raw - EQUAL_TOL * raw.abs().max(1.0);
        out.push(BoundCheck {
            kind,
            bound,
            raw,
            satisfied,
        });
    };
    if let Ok(v) = bound_old(kind, n, m, eps) {
        push("old", to_f64(&v));
    }
    if let Ok(v) = bound_new(kind, n, m, eps) {
        push("new", v.value);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub kind: Kind,
    pub n: u64,
    pub m: u64,
    #[serde(serialize_with = "crate::rational::serde_ratio::serialize")]
    pub eps: BigRational,
    /// `None` when ε is below the kind's floor.
    pub report: Option<BoundReport>,
}

pub const SWEEP_HEADER: &str = "kind,n,m,eps,old_raw,new_raw,old_N,new_N,threshold,dominant";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        match &self.report {
            Some(r) => format!(
                "{},{},{},{},{},{},{},{},{},{}",
                self.kind,
                self.n,
                self.m,
                format_ratio(&self.eps),
                opt(r.old_raw.as_ref().map(|b| b.value.to_string())),
                opt(r.new_raw.as_ref().map(|b| b.value.to_string())),
                opt(r.old_n.map(|v| v.to_string())),
                opt(r.new_n.map(|v| v.to_string())),
                opt(r.threshold.map(|v| v.to_string())),
                r.dominant.as_str()
            ),
            None => format!(
                "{},{},{},{},,,,,,out_of_range",
                self.kind,
                self.n,
                self.m,
                format_ratio(&self.eps)
            ),
        }
    }
}

/// Bound comparison over a grid, ordered by n, then m, then ε.
/// Pairs with n ≤ m are skipped; ε outside [floor, 1] yields an
/// `out_of_range` row.
pub fn sweep(
    kind: Kind,
    ns: &[u64],
    ms: &[u64],
    eps_grid: &[BigRational],
) -> Result<Vec<SweepRow>> {
    let rows = ns.len() as u128 * ms.len() as u128 * eps_grid.len() as u128;
    if rows > MAX_SWEEP_ROWS {
        return Err(Error::TooLarge {
            needed: rows,
            budget: MAX_SWEEP_ROWS,
        });
    }
    if let Some(&m) = ms.iter().find(|&&m| m < 2) {
        return Err(bad(format!("m = {m} must be at least 2")));
    }
    let per_n: Vec<Result<Vec<SweepRow>>> = ns
        .par_iter()
        .map(|&n| {
            let mut out = Vec::new();
            for &m in ms.iter().filter(|&&m| n > m) {
                for eps in eps_grid {
                    let report = match compare(kind, n, m, eps) {
                        Ok(r) => Some(r),
                        Err(Error::OutOfRange { .. }) => None,
                        Err(Error::BadParams(_))
                            if !eps.is_positive() || *eps > BigRational::one() =>
                        {
                            None
                        }
                        Err(e) => return Err(e),
                    };
                    out.push(SweepRow {
                        kind,
                        n,
                        m,
                        eps: eps.clone(),
                        report,
                    });
                }
            }
            Ok(out)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_n {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn plotkin_examples() {
        assert_eq!(plotkin_eps_floor(9, 3).unwrap(), ratio(1, 4));
        assert_eq!(plotkin_eps_floor(27, 3).unwrap(), ratio(4, 13));
        for m in 2..10 {
            assert_eq!(
                plotkin_eps_floor(m + 1, m).unwrap(),
                ratio(1, (m * m) as i64)
            );
        }
        assert!(plotkin_eps_floor(3, 3).is_err());
    }

    #[test]
    fn old_bound_examples() {
        assert_eq!(bound_old(Kind::U, 9, 3, &ratio(1, 3)).unwrap(), ratio(3, 1));
        assert_eq!(
            bound_old(Kind::DeltaU, 4, 2, &ratio(3, 5)).unwrap(),
            ratio(5, 2)
        );
        let floor = plotkin_eps_floor(8, 2).unwrap();
        assert!(matches!(
            bound_old(Kind::SU, 8, 2, &floor),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn new_bound_examples() {
        let b = bound_new(Kind::U, 9, 3, &ratio(1, 3)).unwrap();
        assert_eq!(b.exact, Some(ratio(3, 1)));
        let b = bound_new(Kind::U, 6, 2, &ratio(1, 2)).unwrap();
        assert!(b.exact.is_none());
        assert!(close(b.value, 2.0 * (6f64.log2() - 1.0), 1e-12));
        assert!(close(b.value, 3.1699, 1e-4));
        let b = bound_new(Kind::DeltaU, 2187, 3, &ratio(3, 4)).unwrap();
        assert!(close(b.value, (2187f64.log2() + 2.0) / 2.5, 1e-12));
        assert!(close(b.value, 5.2379, 1e-4));
    }

    #[test]
    fn threshold_examples() {
        let t = thresholds(27, 3).unwrap();
        assert!(close(t.eps1.value.unwrap(), 0.4, 1e-15));
        assert!(close(t.eps2.value.unwrap(), 4.0 / 13.0, 1e-15));
        assert!(t.eps1.applicable);

        let t = thresholds(4, 2).unwrap();
        assert!(close(t.eps3.value.unwrap(), 0.6, 1e-15));
        assert!(!t.eps1.applicable);
        assert!(!t.eps4.applicable);

        let t = thresholds(8, 2).unwrap();
        assert_eq!(t.quad_coeffs, (14.0, 40.0, 18.0));
        assert!(close(
            t.eps4.value.unwrap(),
            (40.0 - 592f64.sqrt()) / 28.0,
            1e-15
        ));
        assert!(close(t.eps4.value.unwrap(), 0.55960, 1e-5));
        assert!(t.eps4.applicable);
    }

    #[test]
    fn integral_adjust_examples() {
        let raw = BoundValue::approx(2.0 * (6f64.log2() - 1.0));
        assert_eq!(integral_adjust(&raw, &ratio(1, 2), Kind::U, 2), 4);
        let raw = BoundValue::approx((2187f64.log2() + 2.0) / 2.5);
        assert_eq!(integral_adjust(&raw, &ratio(3, 4), Kind::DeltaU, 3), 8);
        assert_eq!(
            integral_adjust(&BoundValue::exact(ratio(3, 1)), &ratio(1, 3), Kind::U, 3),
            3
        );
        assert_eq!(
            integral_adjust(&BoundValue::approx(3.0 + 1e-13), &ratio(1, 3), Kind::U, 3),
            3
        );
        // SU: eps N / m integral, eps = 1/2, m = 2 -> N multiple of 4
        assert_eq!(
            integral_adjust(&BoundValue::approx(4.5), &ratio(1, 2), Kind::SU, 2),
            8
        );
    }

    #[test]
    fn compare_examples() {
        let r = compare(Kind::U, 27, 3, &ratio(2, 5)).unwrap();
        assert_eq!(r.dominant, Dominant::Equal);
        assert_eq!(r.old_raw.unwrap().exact, Some(ratio(5, 1)));
        assert_eq!(r.new_raw.unwrap().exact, Some(ratio(5, 1)));
        assert!(r.boundary);
        assert_eq!(r.regime, Some(Regime::New));

        let r = compare(Kind::U, 6, 2, &ratio(1, 2)).unwrap();
        assert_eq!(r.dominant, Dominant::New);
        assert_eq!(r.regime, Some(Regime::New));
        assert_eq!(r.new_n, Some(4));

        let r = compare(Kind::U, 9, 3, &ratio(1, 3)).unwrap();
        assert_eq!(r.dominant, Dominant::Equal);
        assert_eq!(r.threshold, None);

        let r = compare(Kind::DeltaU, 2187, 3, &ratio(3, 4)).unwrap();
        assert_eq!(r.dominant, Dominant::New);
        assert_eq!(r.new_n, Some(8));

        assert!(matches!(
            compare(Kind::SU, 8, 2, &ratio(1, 4)),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            compare(Kind::U, 27, 3, &ratio(1, 4)),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn su_crossover_at_eps4() {
        let e4 = eps4(8, 2).unwrap();
        let (old, new, d) = compare_real(Kind::SU, 8, 2, e4).unwrap();
        assert!(close(old, 5.3610, 1e-3));
        assert!(close(new, 5.3610, 1e-3));
        assert_eq!(d, Dominant::Equal);
    }

    #[test]
    fn regime_matches_raw_verdict() {
        for (kind, n, m) in [(Kind::U, 27, 3), (Kind::DeltaU, 50, 3), (Kind::SU, 40, 3)] {
            let t = thresholds(n, m).unwrap().for_kind(kind).unwrap();
            for k in 1..100 {
                let eps = ratio(k, 100);
                let Ok(r) = compare(kind, n, m, &eps) else {
                    continue;
                };
                if r.boundary || r.dominant == Dominant::OldInapplicable {
                    continue;
                }
                let expect = if to_f64(&eps) >= t {
                    Dominant::New
                } else {
                    Dominant::Old
                };
                assert_eq!(r.dominant, expect, "{kind} n={n} m={m} eps={k}/100");
            }
        }
    }

    #[test]
    fn sweep_rows_and_order() {
        let grid: Vec<_> = (0..3).map(|k| ratio(3 + k, 10)).collect();
        let rows = sweep(Kind::U, &[10, 11], &[3], &grid).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!((rows[0].n, rows[3].n), (10, 11));
        assert_eq!(
            sweep_csv(&sweep(Kind::U, &[10], &[3], &[]).unwrap()),
            format!("{SWEEP_HEADER}\n")
        );
        assert!(matches!(
            sweep(
                Kind::U,
                &(0..2000).collect::<Vec<_>>(),
                &(2..1000).collect::<Vec<_>>(),
                &grid
            ),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn exact_logs() {
        assert_eq!(exact_log(27, 3), Some(3));
        assert_eq!(exact_log(1, 3), Some(0));
        assert_eq!(exact_log(6, 2), None);
        assert_eq!(log_base(2187, 3), 7.0);
    }
}
