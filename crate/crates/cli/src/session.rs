//! The session text format.
//!
//! ```text
//! char 2;
//! vars x0..x1, y0..y1;     # ranges expand by numeric suffix or letter
//! segre r=1 s=1;
//! quotient { a*d - b*c };
//! ideal P { a, b };
//! map phi { e=1, g = x1*y1 };
//! param n = 2;
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use charp::{IdealHandle, Polynomial, Ring};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSpec {
    pub name: String,
    pub e: u32,
    /// Canonical form of the multiplier.
    pub g: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionSpec {
    pub p: u64,
    pub vars: Vec<String>,
    pub segre: Option<(u32, u32)>,
    /// Canonical forms of the quotient generators.
    pub quotient: Vec<String>,
    pub ideals: Vec<(String, Vec<String>)>,
    pub maps: Vec<MapSpec>,
    pub params: BTreeMap<String, String>,
}

impl SessionSpec {
    /// The polynomial ring of the session. Segre sessions use the ring with
    /// `x`/`y` blocks.
    pub fn ring(&self) -> Result<Arc<Ring>, CliError> {
        Ok(match self.segre {
            Some((r, s)) => Ring::segre_ambient(self.p, r, s)?,
            None => Ring::new(self.p, &self.vars)?,
        })
    }

    pub fn poly(&self, ring: &Arc<Ring>, text: &str) -> Result<Polynomial, CliError> {
        Ok(Polynomial::parse(ring, text)?)
    }

    pub fn ideal(&self, ring: &Arc<Ring>, name: &str) -> Result<IdealHandle, CliError> {
        let (_, gens) = self
            .ideals
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| CliError::Usage(format!("no ideal named {name:?}")))?;
        Ok(IdealHandle::parse(ring, gens)?)
    }

    pub fn map(&self, name: &str) -> Result<&MapSpec, CliError> {
        self.maps
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| CliError::Usage(format!("no map named {name:?}")))
    }

    pub fn param(&self, name: &str) -> Option<&str> {
        self.params.get(name).map(String::as_str)
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.chars().count(), |nl| before[nl + 1..].chars().count()) + 1;
    (line, col)
}

struct Parser<'a> {
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, offset: usize, message: impl Into<String>) -> CliError {
        let (line, column) = line_col(self.text, offset);
        CliError::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Statements as `(offset, text)`, with comments blanked out.
    fn statements(&self) -> Result<Vec<(usize, String)>, CliError> {
        let cleaned: String = self
            .text
            .split_inclusive('\n')
            .map(|line| match line.find('#') {
                Some(i) => {
                    let mut l = line[..i].to_string();
                    for c in line[i..].chars() {
                        if c == '\n' {
                            l.push('\n');
                        } else {
                            l.extend(std::iter::repeat(' ').take(c.len_utf8()));
                        }
                    }
                    l
                }
                None => line.to_string(),
            })
            .collect();
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, c) in cleaned.char_indices() {
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(self.err(i, "unbalanced '}'"));
                    }
                }
                ';' if depth == 0 => {
                    out.push((start, cleaned[start..i].to_string()));
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(self.err(start, "unclosed '{'"));
        }
        if !cleaned[start..].trim().is_empty() {
            return Err(self.err(start, "statement is missing its ';'"));
        }
        Ok(out)
    }
}

/// Offset of `part` inside `whole` (both from the same allocation).
fn offset_in(whole: &str, part: &str) -> usize {
    part.as_ptr() as usize - whole.as_ptr() as usize
}

fn split_braces<'s>(p: &Parser, at: usize, stmt: &'s str) -> Result<(&'s str, &'s str), CliError> {
    let open = stmt.find('{').ok_or_else(|| p.err(at, "expected '{'"))?;
    let close = stmt.rfind('}').ok_or_else(|| p.err(at, "expected '}'"))?;
    if !stmt[close + 1..].trim().is_empty() {
        return Err(p.err(at + close + 1, "unexpected text after '}'"));
    }
    Ok((&stmt[..open], &stmt[open + 1..close]))
}

fn expand_vars(p: &Parser, at: usize, list: &str) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    for item in list.split(',') {
        let item_at = at + offset_in(list, item);
        let item = item.trim();
        if item.is_empty() {
            return Err(p.err(item_at, "empty variable name"));
        }
        if let Some((lo, hi)) = item.split_once("..") {
            let (lo, hi) = (lo.trim(), hi.trim());
            let single = |s: &str| {
                let mut cs = s.chars();
                cs.next().filter(|c| c.is_ascii_alphabetic() && cs.next().is_none())
            };
            if let (Some(a), Some(b)) = (single(lo), single(hi)) {
                if a > b || a.is_ascii_lowercase() != b.is_ascii_lowercase() {
                    return Err(p.err(item_at, format!("bad variable range {item:?}")));
                }
                out.extend((a..=b).map(String::from));
                continue;
            }
            let split = |s: &str| {
                let digits = s.len() - s.trim_start_matches(|c: char| !c.is_ascii_digit()).len();
                let (prefix, num) = s.split_at(digits);
                num.parse::<u32>().ok().map(|n| (prefix.to_string(), n))
            };
            let (Some((pa, a)), Some((pb, b))) = (split(lo), split(hi)) else {
                return Err(p.err(item_at, format!("bad variable range {item:?}")));
            };
            if pa != pb || a > b {
                return Err(p.err(item_at, format!("bad variable range {item:?}")));
            }
            out.extend((a..=b).map(|i| format!("{pa}{i}")));
        } else {
            if !item.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || item.starts_with(|c: char| c.is_ascii_digit()) {
                return Err(p.err(item_at, format!("bad variable name {item:?}")));
            }
            out.push(item.to_string());
        }
    }
    Ok(out)
}

fn key_value<'s>(p: &Parser, at: usize, s: &'s str) -> Result<(&'s str, &'s str), CliError> {
    let (k, v) = s.split_once('=').ok_or_else(|| p.err(at, format!("expected key=value, found {:?}", s.trim())))?;
    Ok((k.trim(), v.trim()))
}

fn parse_number<T: std::str::FromStr>(p: &Parser, at: usize, s: &str, what: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| p.err(at, format!("expected a number for {what}, found {:?}", s.trim())))
}

/// Parses a session. Polynomials are validated and stored in canonical form.
pub fn parse_session(text: &str) -> Result<SessionSpec, CliError> {
    let p = Parser { text };
    let mut spec = SessionSpec {
        p: 0,
        vars: vec![],
        segre: None,
        quotient: vec![],
        ideals: vec![],
        maps: vec![],
        params: BTreeMap::new(),
    };
    #[derive(Clone, Copy)]
    enum Target {
        Quotient,
        Ideal(usize),
        Map(usize),
    }
    let stmts = p.statements()?;
    let mut pending_polys: Vec<(usize, String, Target)> = Vec::new();
    for (at, raw) in &stmts {
        let body = raw.trim_start();
        let at = at + (raw.len() - body.len());
        let body = body.trim_end();
        if body.is_empty() {
            continue;
        }
        let (kw, rest) = body.split_once(|c: char| c.is_whitespace() || c == '{').map_or((body, ""), |(k, _)| (k, &body[k.len()..]));
        let rest_at = at + kw.len();
        match kw {
            "char" => {
                spec.p = parse_number(&p, rest_at, rest, "the characteristic")?;
            }
            "vars" => spec.vars.extend(expand_vars(&p, rest_at, rest)?),
            "segre" => {
                let mut r = None;
                let mut s = None;
                for part in rest.split_whitespace() {
                    let (k, v) = key_value(&p, rest_at, part)?;
                    let v: u32 = parse_number(&p, rest_at, v, k)?;
                    match k {
                        "r" => r = Some(v),
                        "s" => s = Some(v),
                        _ => return Err(p.err(rest_at, format!("unknown segre key {k:?}"))),
                    }
                }
                match (r, s) {
                    (Some(r), Some(s)) => spec.segre = Some((r, s)),
                    _ => return Err(p.err(rest_at, "segre needs r= and s=")),
                }
            }
            "quotient" | "ideal" => {
                let (head, inner) = split_braces(&p, rest_at, rest)?;
                let inner_at = rest_at + offset_in(rest, inner);
                let target = if kw == "quotient" {
                    if !head.trim().is_empty() {
                        return Err(p.err(rest_at, "quotient takes no name"));
                    }
                    Target::Quotient
                } else {
                    let name = head.trim();
                    if name.is_empty() {
                        return Err(p.err(rest_at, "ideal needs a name"));
                    }
                    if spec.ideals.iter().any(|(n, _)| n == name) {
                        return Err(p.err(rest_at, format!("ideal {name:?} declared twice")));
                    }
                    spec.ideals.push((name.to_string(), vec![]));
                    Target::Ideal(spec.ideals.len() - 1)
                };
                for g in inner.split(',') {
                    if g.trim().is_empty() {
                        continue;
                    }
                    let g_at = inner_at + offset_in(inner, g);
                    pending_polys.push((g_at, g.to_string(), target));
                }
            }
            "map" => {
                let (head, inner) = split_braces(&p, rest_at, rest)?;
                let inner_at = rest_at + offset_in(rest, inner);
                let name = head.trim();
                if name.is_empty() {
                    return Err(p.err(rest_at, "map needs a name"));
                }
                let mut e = None;
                let mut g = None;
                for part in inner.split(',') {
                    let part_at = inner_at + offset_in(inner, part);
                    let (k, v) = key_value(&p, part_at, part)?;
                    match k {
                        "e" => e = Some(parse_number::<u32>(&p, part_at, v, "e")?),
                        "g" => g = Some((part_at + offset_in(part, v), v.to_string())),
                        _ => return Err(p.err(part_at, format!("unknown map key {k:?}"))),
                    }
                }
                let e = e.ok_or_else(|| p.err(rest_at, format!("map {name:?} needs e")))?;
                if e < 1 {
                    return Err(p.err(rest_at, format!("map {name:?}: e >= 1 required")));
                }
                let (g_at, g) = g.unwrap_or((rest_at, "1".to_string()));
                spec.maps.push(MapSpec {
                    name: name.to_string(),
                    e,
                    g: String::new(),
                });
                pending_polys.push((g_at, g, Target::Map(spec.maps.len() - 1)));
            }
            "param" => {
                let (k, v) = key_value(&p, rest_at, rest)?;
                if k.is_empty() || v.is_empty() {
                    return Err(p.err(rest_at, "param needs name = value"));
                }
                spec.params.insert(k.to_string(), v.to_string());
            }
            other => return Err(p.err(at, format!("unknown statement {other:?}"))),
        }
    }
    if spec.p == 0 {
        return Err(p.err(0, "missing 'char <p>;'"));
    }
    if let Some((r, s)) = spec.segre {
        let expected: Vec<String> = (0..=r).map(|i| format!("x{i}")).chain((0..=s).map(|j| format!("y{j}"))).collect();
        if spec.vars.is_empty() {
            spec.vars = expected;
        } else if spec.vars != expected {
            return Err(p.err(0, format!("segre r={r} s={s} needs vars {}", expected.join(", "))));
        }
    }
    let ring = spec.ring().map_err(|e| match e {
        CliError::Core(charp::Error::NotPrime(n)) => p.err(0, format!("characteristic {n} is not prime")),
        other => other,
    })?;
    for (at, text, target) in pending_polys {
        let poly = Polynomial::parse(&ring, &text).map_err(|e| match e {
            charp::Error::Parse { offset, message } => {
                let lead = text.len() - text.trim_start().len();
                p.err(at + lead + offset, message)
            }
            charp::Error::UnknownVariable(v) => p.err(at, format!("unknown variable {v:?}")),
            other => CliError::Core(other),
        })?;
        let canonical = poly.to_string();
        match target {
            Target::Quotient => spec.quotient.push(canonical),
            Target::Ideal(i) => spec.ideals[i].1.push(canonical),
            Target::Map(i) => {
                if poly.is_zero() {
                    return Err(p.err(at, "map multiplier must be nonzero"));
                }
                spec.maps[i].g = canonical
            }
        }
    }
    Ok(spec)
}

impl fmt::Display for SessionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "char {};", self.p)?;
        writeln!(f, "vars {};", self.vars.join(", "))?;
        if let Some((r, s)) = self.segre {
            writeln!(f, "segre r={r} s={s};")?;
        }
        if !self.quotient.is_empty() {
            writeln!(f, "quotient {{ {} }};", self.quotient.join(", "))?;
        }
        for (name, gens) in &self.ideals {
            writeln!(f, "ideal {name} {{ {} }};", gens.join(", "))?;
        }
        for m in &self.maps {
            writeln!(f, "map {} {{ e={}, g = {} }};", m.name, m.e, m.g)?;
        }
        for (k, v) in &self.params {
            writeln!(f, "param {k} = {v};")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_session() {
        let s = parse_session("char 2; vars x0,x1,y0,y1;").unwrap();
        assert_eq!(s.p, 2);
        assert_eq!(s.vars.len(), 4);
    }

    #[test]
    fn full_session_round_trips() {
        let text = "# the quadric cone\nchar 5;\nvars a..d;\nquotient { a*d - b*c };\nideal P { a, b };\nmap phi { e=1, g = a*b^4 };\nparam s = d;\n";
        let s = parse_session(text).unwrap();
        assert_eq!(s.vars, ["a", "b", "c", "d"]);
        assert_eq!(s.ideals[0], ("P".to_string(), vec!["a".to_string(), "b".to_string()]));
        let again = parse_session(&s.to_string()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn segre_vars_default() {
        let s = parse_session("char 3; segre r=2 s=1;").unwrap();
        assert_eq!(s.vars, ["x0", "x1", "x2", "y0", "y1"]);
        assert!(parse_session("char 3; vars a,b; segre r=1 s=1;").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_session("char 2;\nvars x;\nmap phi { e=0 };").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }), "{err}");
        assert!(err.to_string().contains("e >= 1"));
        let err = parse_session("char 2;\nvars x;\nideal I { x + z };").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }), "{err}");
        assert!(matches!(parse_session("char 4; vars x;").unwrap_err(), CliError::Parse { .. }));
        assert!(parse_session("char 2; vars x").is_err());
        assert!(parse_session("char 2; vars x; bogus;").is_err());
    }
}
