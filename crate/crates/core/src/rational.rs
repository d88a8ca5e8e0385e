//! Helpers around `BigRational` for parsing and display.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{bad, Result};

/// Parses `"p/q"` or an integer `"p"`.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| bad(format!("invalid fraction `{s}`")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| bad(format!("invalid fraction `{s}`")))?;
    if den.is_zero() {
        return Err(bad(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(num, den))
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn from_int(x: u64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Always `p/q`, even for integers, so output is uniform.
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_positive(r: &BigRational) -> bool {
    r.is_positive()
}

pub fn one() -> BigRational {
    BigRational::one()
}

pub(crate) mod serde_ratio {
    use num_rational::BigRational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_ratio(r))
    }

    pub fn serialize_opt<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&super::format_ratio(r)),
            None => s.serialize_none(),
        }
    }
}
