//! Line-oriented text formats: `posetfile v1`, `lambdafile v1` and
//! `censusfile v1`. Blank lines and `#` comments are ignored everywhere.

use std::fmt::Write as _;
use std::sync::Arc;

use incibraid::braiding::{LambdaTensor, Quad};
use incibraid::coalgebra::IntervalBasis;
use incibraid::poset::Poset;
use incibraid::scalars::{Field, Scalar};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Content lines as `(1-based number, text without comment)`.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        (!l.trim().is_empty()).then_some((i + 1, l))
    })
}

/// 1-based column of `needle` inside `line`, which must be a subslice.
fn col(line: &str, needle: &str) -> usize {
    needle.as_ptr() as usize - line.as_ptr() as usize + 1
}

fn expect_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, name: &str) -> Result<(), ParseError> {
    match lines.next() {
        Some((_, l)) if l.trim() == format!("{name} v1") => Ok(()),
        Some((n, l)) => Err(err(n, 1, format!("expected header `{name} v1`, found `{}`", l.trim()))),
        None => Err(err(1, 1, format!("empty file, expected header `{name} v1`"))),
    }
}

fn keyed<'a>(n: usize, line: &'a str, key: &str) -> Result<&'a str, ParseError> {
    let t = line.trim_start();
    t.strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| err(n, col(line, t), format!("expected `{key}:`")))
}

pub fn parse_poset(text: &str) -> Result<Poset, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "posetfile")?;
    let (n, l) = lines.next().ok_or_else(|| err(2, 1, "missing `elements:` line"))?;
    let elements: Vec<&str> = keyed(n, l, "elements")?.split_whitespace().collect();
    let mut covers = Vec::new();
    let mut cover_line = n;
    if let Some((n, l)) = lines.next() {
        cover_line = n;
        for tok in keyed(n, l, "covers")?.split_whitespace() {
            let (a, b) = tok
                .split_once('<')
                .ok_or_else(|| err(n, col(l, tok), format!("cover `{tok}` is not of the form a<b")))?;
            for x in [a, b] {
                if !elements.contains(&x) {
                    return Err(err(n, col(l, tok), format!("unknown element `{x}`")));
                }
            }
            covers.push((a, b));
        }
    }
    if let Some((n, _)) = lines.next() {
        return Err(err(n, 1, "unexpected line after `covers:`"));
    }
    Poset::from_cover_relations(&elements, &covers).map_err(|e| err(cover_line, 1, e.to_string()))
}

pub fn write_poset(p: &Poset) -> String {
    let mut s = String::from("posetfile v1\n");
    let _ = writeln!(s, "elements: {}", p.labels().join(" "));
    let covers: Vec<String> = p.covers().iter().map(|&(a, b)| format!("{}<{}", p.label(a), p.label(b))).collect();
    let _ = writeln!(s, "covers: {}", covers.join(" "));
    s
}

fn parse_quad(p: &Poset, n: usize, line: &str, part: &str) -> Result<Quad, ParseError> {
    let toks: Vec<&str> = part.split_whitespace().collect();
    if toks.len() != 4 {
        return Err(err(n, col(line, part), format!("expected 4 labels, found {}", toks.len())));
    }
    let mut q = [0; 4];
    for (k, t) in toks.iter().enumerate() {
        q[k] = p.index_of(t).map_err(|_| err(n, col(line, t), format!("unknown element `{t}`")))?;
    }
    Ok(q)
}

/// Records between the current position and `end` (or end of input).
fn parse_records<'a>(
    p: &Poset,
    field: Field,
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    end: Option<&str>,
    transpose: bool,
) -> Result<Vec<(Quad, Quad, Scalar)>, ParseError> {
    let mut out = Vec::new();
    for (n, l) in lines.by_ref() {
        if end == Some(l.trim()) {
            return Ok(out);
        }
        let (lhs, value) = l.split_once('=').ok_or_else(|| err(n, 1, "expected `a b c d | e f g h = value`"))?;
        let (i, o) = lhs.split_once('|').ok_or_else(|| err(n, 1, "expected `|` between quadruples"))?;
        let (i, o) = (parse_quad(p, n, l, i)?, parse_quad(p, n, l, o)?);
        let v = field
            .parse(value)
            .map_err(|_| err(n, col(l, value.trim()), format!("malformed scalar `{}` for {field}", value.trim())))?;
        out.push(if transpose { (o, i, v) } else { (i, o, v) });
    }
    match end {
        Some(e) => Err(err(0, 0, format!("missing `{e}`"))),
        None => Ok(out),
    }
}

fn build(p: &Poset, field: Field, recs: Vec<(Quad, Quad, Scalar)>, n: usize) -> Result<LambdaTensor, ParseError> {
    let basis = Arc::new(IntervalBasis::new(p.clone()));
    LambdaTensor::new(basis, field, recs).map_err(|e| err(n, 1, e.to_string()))
}

/// Reads a lambda file against a poset. With `transpose`, each record is
/// read as `output | input`.
pub fn parse_lambda(p: &Poset, text: &str, transpose: bool) -> Result<LambdaTensor, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "lambdafile")?;
    let (n, l) = lines.next().ok_or_else(|| err(2, 1, "missing `field:` line"))?;
    let f = keyed(n, l, "field")?;
    let field: Field = f.parse().map_err(|_| err(n, col(l, f.trim()), format!("unknown field `{}`", f.trim())))?;
    let recs = parse_records(p, field, &mut lines, None, transpose)?;
    build(p, field, recs, n)
}

fn write_records(s: &mut String, t: &LambdaTensor) {
    let p = t.poset();
    let q = |q: Quad| q.iter().map(|&x| p.label(x)).collect::<Vec<_>>().join(" ");
    for (i, o, v) in t.entries() {
        let _ = writeln!(s, "{} | {} = {}", q(i), q(o), v.plain());
    }
}

pub fn write_lambda(t: &LambdaTensor) -> String {
    let mut s = String::from("lambdafile v1\n");
    let _ = writeln!(s, "field: {}", t.field());
    write_records(&mut s, t);
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusBlock {
    pub tensor: LambdaTensor,
    pub matches: Vec<String>,
}

pub fn write_census(p: &Poset, field: Field, blocks: &[CensusBlock]) -> String {
    let mut s = String::from("censusfile v1\n");
    let _ = writeln!(s, "field: {field}");
    let _ = writeln!(s, "solutions: {}", blocks.len());
    let _ = write!(s, "{}", write_poset(p).trim_start_matches("posetfile v1\n"));
    for (k, b) in blocks.iter().enumerate() {
        let _ = writeln!(s, "\nsolution {}", k + 1);
        if b.matches.is_empty() {
            let _ = writeln!(s, "matches: none");
        }
        for m in &b.matches {
            let _ = writeln!(s, "matches: {m}");
        }
        write_records(&mut s, &b.tensor);
        let _ = writeln!(s, "end");
    }
    s
}

pub fn parse_census(text: &str) -> Result<(Poset, Field, Vec<CensusBlock>), ParseError> {
    let mut lines = content_lines(text).peekable();
    expect_header(&mut lines, "censusfile")?;
    let (n, l) = lines.next().ok_or_else(|| err(2, 1, "missing `field:` line"))?;
    let field: Field = keyed(n, l, "field")?.parse().map_err(|_| err(n, 1, "unknown field"))?;
    let (n, l) = lines.next().ok_or_else(|| err(n + 1, 1, "missing `solutions:` line"))?;
    let count: usize = keyed(n, l, "solutions")?.trim().parse().map_err(|_| err(n, 1, "bad solution count"))?;
    let mut poset_text = String::from("posetfile v1\n");
    for _ in 0..2 {
        let (_, l) = lines.next().ok_or_else(|| err(n + 1, 1, "missing poset lines"))?;
        poset_text.push_str(l);
        poset_text.push('\n');
    }
    let p = parse_poset(&poset_text)?;
    let mut blocks = Vec::new();
    while let Some((n, l)) = lines.next() {
        if !l.trim().starts_with("solution ") {
            return Err(err(n, 1, "expected `solution k`"));
        }
        let mut matches = Vec::new();
        while let Some(&(n, l)) = lines.peek() {
            let Ok(m) = keyed(n, l, "matches") else { break };
            if m.trim() != "none" {
                matches.push(m.trim().to_string());
            }
            lines.next();
        }
        let recs = parse_records(&p, field, &mut lines, Some("end"), false)?;
        blocks.push(CensusBlock {
            tensor: build(&p, field, recs, n)?,
            matches,
        });
    }
    if blocks.len() != count {
        return Err(err(0, 0, format!("header announces {count} solutions, found {}", blocks.len())));
    }
    Ok((p, field, blocks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_errors_carry_positions() {
        let e = parse_poset("posetfile v1\nelements: x y\ncovers: x<z\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 9));
        let e = parse_poset("posetfile v2\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn lambda_records_round_trip() {
        let p = Poset::two_chain();
        let text = "lambdafile v1\nfield: Q\nx x x x | x x x x = 1\nx x x y | x y x x = -1/2\n";
        let t = parse_lambda(&p, text, false).unwrap();
        assert_eq!(write_lambda(&t), text);
        let e = parse_lambda(&p, "lambdafile v1\nfield: Q\nx x x q | x x x x = 1\n", false).unwrap_err();
        assert_eq!((e.line, e.column), (3, 7));
        let e = parse_lambda(&p, "lambdafile v1\nfield: GF(5)\nx x x x | x x x x = 1/5\n", false).unwrap_err();
        assert_eq!(e.line, 3);
    }
}
