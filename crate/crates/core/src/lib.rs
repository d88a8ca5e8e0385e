//! Universal hash families built from MDS codes.
//!
//! The crate covers four pieces:
//!
//! * [`field`]: table-backed GF(q) arithmetic for q ≤ 1024.
//! * [`code`]: Reed–Solomon and parity-check MDS codes, subcodes, and exact
//!   minimum-distance computation.
//! * [`family`]: the `(N; n, m)` hash-family table, exhaustive measurement of
//!   the universality constant ε for the U, ΔU and SU notions, and the
//!   conversions between codes and families.
//! * [`bounds`]: lower bounds on N, the thresholds where the Singleton-derived
//!   bounds overtake the classical ones, and the integrality adjustment.
//!
//! [`io`] holds the plain-text code and family file formats.

pub mod bounds;
pub mod code;
pub mod error;
pub mod family;
pub mod field;
pub mod io;
pub mod rational;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use error::{Error, Result};
pub use num_rational::BigRational;

/// Which universality notion a family, bound or query refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    #[serde(rename = "u")]
    U,
    #[serde(rename = "du")]
    DeltaU,
    #[serde(rename = "su")]
    SU,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::U, Kind::DeltaU, Kind::SU];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::U => "u",
            Kind::DeltaU => "du",
            Kind::SU => "su",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "u" => Ok(Kind::U),
            "du" | "deltau" | "delta" => Ok(Kind::DeltaU),
            "su" => Ok(Kind::SU),
            other => Err(error::bad(format!(
                "unknown kind `{other}` (expected u, du or su)"
            ))),
        }
    }
}
