//! Line-oriented text formats for paths and homotopy fields.
//!
//! ```text
//! plpath v1
//! 0 1
//! 1/2 0
//! 1 1
//! ```
//!
//! ```text
//! plfield v1
//! 3 2          # ns nt
//! 0 1/2 1      # s grid
//! 0 1          # t grid
//! 1 0 -1       # values at t = 0
//! 1 1 1        # values at t = 1
//! ```
//! Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lifting::{HomotopyField, PLPathY};
use crate::rational::Q;

const PATH_HEADER: &str = "plpath v1";
const FIELD_HEADER: &str = "plfield v1";

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(n, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((n + 1, l))
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn numbers(line: usize, l: &str) -> Result<Vec<Q>> {
    l.split_whitespace()
        .map(|w| w.parse::<Q>().map_err(|e| parse_err(line, e.0)))
        .collect()
}

fn header<'a>(it: &mut impl Iterator<Item = (usize, &'a str)>, expected: &str) -> Result<()> {
    match it.next() {
        Some((_, h)) if h == expected => Ok(()),
        Some((n, h)) => Err(parse_err(n, format!("expected header {expected:?}, found {h:?}"))),
        None => Err(parse_err(0, format!("empty input, expected {expected:?}"))),
    }
}

pub fn parse_plpath(text: &str) -> Result<PLPathY> {
    let mut it = lines(text);
    header(&mut it, PATH_HEADER)?;
    let mut points = Vec::new();
    for (n, l) in it {
        match numbers(n, l)?.as_slice() {
            [t, x] => points.push((t.clone(), x.clone())),
            other => return Err(parse_err(n, format!("expected `t x`, found {} numbers", other.len()))),
        }
    }
    PLPathY::new(points)
}

pub fn write_plpath(path: &PLPathY) -> String {
    let mut out = format!("{PATH_HEADER}\n");
    for (t, x) in path.breakpoints() {
        let _ = writeln!(out, "{t} {x}");
    }
    out
}

pub fn parse_plfield(text: &str) -> Result<HomotopyField> {
    let mut it = lines(text);
    header(&mut it, FIELD_HEADER)?;
    let mut next = |what: &str| -> Result<(usize, Vec<Q>)> {
        let (n, l) = it.next().ok_or_else(|| parse_err(0, format!("missing {what}")))?;
        Ok((n, numbers(n, l)?))
    };
    let (n, dims) = next("dimensions")?;
    let (ns, nt) = match dims.as_slice() {
        [a, b] => (as_count(n, a)?, as_count(n, b)?),
        _ => return Err(parse_err(n, "expected `ns nt`")),
    };
    let (n, s) = next("s grid")?;
    if s.len() != ns {
        return Err(parse_err(n, format!("s grid has {} entries, expected {ns}", s.len())));
    }
    let (n, t) = next("t grid")?;
    if t.len() != nt {
        return Err(parse_err(n, format!("t grid has {} entries, expected {nt}", t.len())));
    }
    let mut values = Vec::with_capacity(nt);
    for row in 0..nt {
        let (n, v) = next(&format!("value row {row}"))?;
        if v.len() != ns {
            return Err(parse_err(n, format!("value row has {} entries, expected {ns}", v.len())));
        }
        values.push(v);
    }
    if let Some((n, _)) = it.next() {
        return Err(parse_err(n, "trailing data after the last value row"));
    }
    HomotopyField::new(s, t, values)
}

fn as_count(line: usize, v: &Q) -> Result<usize> {
    v.to_string()
        .parse()
        .map_err(|_| parse_err(line, format!("{v} is not a count")))
}

fn join(row: &[Q]) -> String {
    row.iter().map(Q::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_plfield(field: &HomotopyField) -> String {
    let mut out = format!("{FIELD_HEADER}\n");
    let _ = writeln!(out, "{} {}", field.s_grid().len(), field.t_grid().len());
    let _ = writeln!(out, "{}", join(field.s_grid()));
    let _ = writeln!(out, "{}", join(field.t_grid()));
    for row in field.values() {
        let _ = writeln!(out, "{}", join(row));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::{make_gamma, make_merging_field};
    use crate::rational::q;

    #[test]
    fn path_round_trip() {
        let g = make_gamma(&q(3, 2)).unwrap();
        assert_eq!(parse_plpath(&write_plpath(&g)).unwrap(), g);
    }

    #[test]
    fn field_round_trip() {
        let f = make_merging_field();
        assert_eq!(parse_plfield(&write_plfield(&f)).unwrap(), f);
    }

    #[test]
    fn comments_and_errors() {
        let p = parse_plpath("# hi\nplpath v1\n0 1 # start\n\n1 -1\n").unwrap();
        assert_eq!(p.breakpoints().len(), 3);
        assert!(matches!(parse_plpath("plpath v2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_plpath("plpath v1\n0 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(
            parse_plfield("plfield v1\n2 2\n0 1\n0 1\n1 1\n"),
            Err(Error::Parse { .. })
        ));
    }
}
