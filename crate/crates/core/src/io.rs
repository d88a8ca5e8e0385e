//! Plain-text file formats.
//!
//! Family file:
//!
//! ```text
//! N n m [zm|gf]
//! h_1(0) h_1(1) ... h_1(n-1)
//! ...
//! h_N(0) ... h_N(n-1)
//! ```
//!
//! Code file, linear (generator matrix):
//!
//! ```text
//! q k N
//! <k rows of N symbols>
//! ```
//!
//! Code file, explicit codewords (the fourth header token tells them apart):
//!
//! ```text
//! q K N words
//! <K rows of N symbols>
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use crate::code::{GenericCode, LinearCode};
use crate::error::{Error, Result};
use crate::family::{HashFamily, RangeGroup};
use crate::field::FiniteField;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_ints(line: usize, s: &str) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| parse_err(line, format!("`{t}` is not a non-negative integer")))
        })
        .collect()
}

/// Reads `count` rows of exactly `width` integers each.
fn read_rows<'a>(
    it: &mut impl Iterator<Item = (usize, &'a str)>,
    count: usize,
    width: usize,
    header_line: usize,
) -> Result<Vec<Vec<u32>>> {
    let mut rows = Vec::with_capacity(count);
    let mut last = header_line;
    for r in 0..count {
        let (ln, text) = it
            .next()
            .ok_or_else(|| parse_err(last + 1, format!("expected {count} rows, found {r}")))?;
        last = ln;
        let vals = parse_ints(ln, text)?;
        if vals.len() != width {
            return Err(parse_err(
                ln,
                format!("expected {width} values, found {}", vals.len()),
            ));
        }
        let vals = vals
            .into_iter()
            .map(|v| u32::try_from(v).map_err(|_| parse_err(ln, format!("value {v} too large"))))
            .collect::<Result<Vec<u32>>>()?;
        rows.push(vals);
    }
    if let Some((ln, _)) = it.next() {
        return Err(parse_err(ln, "unexpected trailing content"));
    }
    Ok(rows)
}

pub fn write_family(fam: &HashFamily) -> String {
    let mut s = format!("{} {} {}", fam.funcs(), fam.domain(), fam.range());
    if let Some(g) = fam.group() {
        write!(s, " {}", g.as_str()).unwrap();
    }
    s.push('\n');
    for i in 0..fam.funcs() {
        let row: Vec<String> = (0..fam.domain())
            .map(|a| fam.value(i, a).to_string())
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn read_family(text: &str) -> Result<HashFamily> {
    let mut it = lines(text);
    let (hl, header) = it.next().ok_or_else(|| parse_err(1, "empty family file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if !(3..=4).contains(&toks.len()) {
        return Err(parse_err(hl, "header must be `N n m [zm|gf]`"));
    }
    let nums = parse_ints(hl, &toks[..3].join(" "))?;
    let group = match toks.get(3) {
        None => None,
        Some(&"zm") => Some(RangeGroup::Cyclic),
        Some(&"gf") => Some(RangeGroup::Field),
        Some(g) => {
            return Err(parse_err(
                hl,
                format!("unknown group `{g}` (expected zm or gf)"),
            ))
        }
    };
    let (funcs, domain) = (nums[0] as usize, nums[1] as usize);
    let range = u32::try_from(nums[2]).map_err(|_| parse_err(hl, "m too large"))?;
    let rows = read_rows(&mut it, funcs, domain, hl)?;
    HashFamily::from_rows(&rows, range, group).map_err(|e| match e {
        Error::BadParams(msg) => parse_err(hl, msg),
        other => other,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum CodeFile {
    Linear(LinearCode),
    Generic(GenericCode),
}

impl CodeFile {
    pub fn to_generic(&self) -> Result<GenericCode> {
        match self {
            CodeFile::Linear(c) => GenericCode::try_from(c),
            CodeFile::Generic(c) => Ok(c.clone()),
        }
    }
}

pub fn write_linear_code(code: &LinearCode) -> String {
    write_matrix(
        format!("{} {} {}", code.q(), code.dim(), code.length()),
        code.generator(),
    )
}

pub fn write_generic_code(code: &GenericCode) -> String {
    write_matrix(
        format!("{} {} {} words", code.q(), code.size(), code.length()),
        code.words(),
    )
}

fn write_matrix(header: String, rows: &[Vec<u32>]) -> String {
    let mut s = header;
    s.push('\n');
    for r in rows {
        let r: Vec<String> = r.iter().map(u32::to_string).collect();
        s.push_str(&r.join(" "));
        s.push('\n');
    }
    s
}

pub fn read_code(text: &str) -> Result<CodeFile> {
    let mut it = lines(text);
    let (hl, header) = it.next().ok_or_else(|| parse_err(1, "empty code file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if !(3..=4).contains(&toks.len()) {
        return Err(parse_err(hl, "header must be `q k N` or `q K N words`"));
    }
    let nums = parse_ints(hl, &toks[..3].join(" "))?;
    let (q, rows, len) = (nums[0], nums[1] as usize, nums[2] as usize);
    let wrap = |e: Error| match e {
        Error::BadParams(msg) => parse_err(hl, msg),
        other => other,
    };
    match toks.get(3) {
        None | Some(&"linear") => {
            let field = Arc::new(FiniteField::new(q).map_err(wrap)?);
            let gen = read_rows(&mut it, rows, len, hl)?;
            Ok(CodeFile::Linear(LinearCode::new(field, gen).map_err(wrap)?))
        }
        Some(&"words") => {
            let q = u32::try_from(q).map_err(|_| parse_err(hl, "q too large"))?;
            let words = read_rows(&mut it, rows, len, hl)?;
            Ok(CodeFile::Generic(GenericCode::new(q, words).map_err(wrap)?))
        }
        Some(t) => Err(parse_err(
            hl,
            format!("unknown code type `{t}` (expected words)"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{rs_code, subcode_select};
    use crate::family::linear_code_to_family;

    #[test]
    fn family_round_trip() {
        let fam = linear_code_to_family(&rs_code(3, 2, 3).unwrap()).unwrap();
        let text = write_family(&fam);
        assert!(text.starts_with("3 9 3 gf\n0 0 0 1 1 1 2 2 2\n"));
        assert_eq!(read_family(&text).unwrap(), fam);
    }

    #[test]
    fn code_round_trip() {
        let c = rs_code(5, 2, 4).unwrap();
        let text = write_linear_code(&c);
        assert_eq!(text, "5 2 4\n1 1 1 1\n0 1 2 3\n");
        assert_eq!(read_code(&text).unwrap(), CodeFile::Linear(c.clone()));
        let g = subcode_select(&c, 7).unwrap();
        assert_eq!(
            read_code(&write_generic_code(&g)).unwrap(),
            CodeFile::Generic(g)
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            read_family("2 3 2\n0 1 0\n"),
            Err(Error::Parse {
                line: 3,
                msg: "expected 2 rows, found 1".into()
            })
        );
        assert_eq!(
            read_family("1 3 2\n0 1\n"),
            Err(Error::Parse {
                line: 2,
                msg: "expected 3 values, found 2".into()
            })
        );
        assert!(matches!(
            read_family("1 2 2\n0 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_family("1 2 2 foo\n0 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            read_family("1 2 2\n0 5\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            read_family("1 2 2\n0 1\n1 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(read_family(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            read_code("6 1 2\n1 1\n"),
            Err(Error::NotPrimePower(6))
        ));
        assert!(matches!(
            read_code("3 2 2 words\n0 0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}
