//! The instance text format.
//!
//! ```text
//! # optional comments
//! sr 4
//! 0: 1 2 3
//! 1: 2 0 3
//! 2: 1 3 0
//! 3: 0 2 1
//! ```
//!
//! The header is `sr <agents>` or `sm <n>`; SM files then list men `0..n`
//! followed by women `n..2n`, all with global ids.

use std::fmt::Write;

use super::{Instance, SmInstance, SrInstance};
use crate::error::{parse_err, Result};

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Sr,
    Sm,
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let mut tok = header.split_whitespace();
    let kind = match tok.next() {
        Some("sr") => Kind::Sr,
        Some("sm") => Kind::Sm,
        _ => return Err(parse_err(hline, "malformed header, expected `sr <agents>` or `sm <n>`")),
    };
    let count: usize = tok
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(hline, "malformed header, missing agent count"))?;
    if tok.next().is_some() {
        return Err(parse_err(hline, "malformed header, trailing tokens"));
    }
    if count == 0 {
        return Err(parse_err(hline, "empty instance"));
    }
    let m = match kind {
        Kind::Sr if count % 2 != 0 => {
            return Err(parse_err(hline, format!("odd SR agent count {count}")));
        }
        Kind::Sr => count,
        Kind::Sm => 2 * count,
    };
    let half = m / 2;

    let mut last_line = hline;
    let mut lists = Vec::with_capacity(m);
    let mut seen = vec![usize::MAX; m];
    for a in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| parse_err(last_line + 1, format!("missing line for agent {a}")))?;
        last_line = ln;
        let (id, rest) = line
            .split_once(':')
            .ok_or_else(|| parse_err(ln, "expected `<id>: <ranking>`"))?;
        match id.trim().parse::<usize>() {
            Ok(x) if x == a => {}
            _ => return Err(parse_err(ln, format!("expected agent {a}, found `{}`", id.trim()))),
        }
        let mut list = Vec::with_capacity(m);
        for t in rest.split_whitespace() {
            let b: usize = t
                .parse()
                .map_err(|_| parse_err(ln, format!("invalid agent id `{t}`")))?;
            if b >= m {
                return Err(parse_err(ln, format!("agent id {b} out of range")));
            }
            if b == a {
                return Err(parse_err(ln, "self-ranking"));
            }
            if kind == Kind::Sm && (a < half) == (b < half) {
                return Err(parse_err(ln, format!("agent {b} is on the same side")));
            }
            if seen[b] == a {
                return Err(parse_err(ln, format!("duplicate agent {b}")));
            }
            seen[b] = a;
            list.push(b);
        }
        let expected = if kind == Kind::Sr { m - 1 } else { half };
        if list.len() != expected {
            let missing = (0..m)
                .find(|&b| {
                    b != a && seen[b] != a && (kind == Kind::Sr || (a < half) != (b < half))
                })
                .unwrap_or(a);
            return Err(parse_err(ln, format!("ranking is missing agent {missing}")));
        }
        lists.push(list);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "unexpected content after the last agent"));
    }

    // Every list was checked line by line above, so construction cannot fail
    // on content; map any residual error to the header line.
    let inst = match kind {
        Kind::Sr => Instance::Sr(SrInstance::new(lists).map_err(|e| parse_err(hline, e.to_string()))?),
        Kind::Sm => {
            Instance::Sm(SmInstance::from_global(lists).map_err(|e| parse_err(hline, e.to_string()))?)
        }
    };
    Ok(inst)
}

/// Canonical text: header, one line per agent, single spaces, final newline.
pub fn serialize_instance(inst: &Instance) -> String {
    let (head, count) = match inst {
        Instance::Sr(i) => ("sr", i.num_agents()),
        Instance::Sm(i) => ("sm", i.n()),
    };
    let p = inst.profile();
    let mut out = String::with_capacity(p.num_agents() * p.num_agents() * 3 + 8);
    writeln!(out, "{head} {count}").unwrap();
    for a in 0..p.num_agents() {
        write!(out, "{a}:").unwrap();
        for b in p.list(a) {
            write!(out, " {b}").unwrap();
        }
        out.push('\n');
    }
    out
}

impl SrInstance {
    pub fn to_text(&self) -> String {
        serialize_instance(&Instance::Sr(self.clone()))
    }
}

impl SmInstance {
    pub fn to_text(&self) -> String {
        serialize_instance(&Instance::Sm(self.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    const EX2: &str = "sr 4\n0: 1 2 3\n1: 0 2 3\n2: 0 1 3\n3: 0 1 2\n";

    fn line_of(text: &str) -> (usize, String) {
        match parse_instance(text) {
            Err(Error::Parse { line, msg }) => (line, msg),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_sr() {
        let inst = parse_instance(EX2).unwrap();
        let Instance::Sr(sr) = &inst else { panic!() };
        assert_eq!(sr.prefs(0), &[1, 2, 3]);
        assert_eq!(sr.prefs(3), &[0, 1, 2]);
        assert_eq!(serialize_instance(&inst), EX2);
    }

    #[test]
    fn smallest_sm() {
        let inst = parse_instance("sm 1\n0: 1\n1: 0\n").unwrap();
        let Instance::Sm(sm) = &inst else { panic!() };
        assert_eq!(sm.n(), 1);
        assert_eq!(serialize_instance(&inst), "sm 1\n0: 1\n1: 0\n");
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# made by hand\nsr 4\n\n0: 1 2 3\n# mid\n1: 0 2 3  \n2: 0 1 3\n3: 0 1 2";
        assert_eq!(serialize_instance(&parse_instance(text).unwrap()), EX2);
    }

    #[test]
    fn self_ranking_reports_line() {
        let err = parse_instance("sr 4\n0: 0 2 3\n1: 0 2 3\n2: 0 1 3\n3: 0 1 2\n").unwrap_err();
        assert_eq!(err.to_string(), "self-ranking at line 2");
    }

    #[test]
    fn error_lines() {
        assert_eq!(line_of("sr 3\n0: 1 2\n1: 0 2\n2: 0 1\n").0, 1);
        assert_eq!(line_of("xx 4\n").0, 1);
        assert_eq!(line_of("sr 4\n0: 1 2 3\n1: 0 0 3\n2: 0 1 3\n3: 0 1 2\n"), (3, "duplicate agent 0".into()));
        assert_eq!(line_of("sr 4\n0: 1 2 3\n1: 0 2 3\n2: 0 1 9\n3: 0 1 2\n").0, 4);
        assert_eq!(line_of("sr 4\n0: 1 2 3\n1: 0 2 3\n2: 0 1 3\n3: 0 1\n"), (5, "ranking is missing agent 2".into()));
        assert_eq!(line_of("sr 4\n0: 1 2 3\n1: 0 2 3\n2: 0 1 3\n").0, 5);
        assert_eq!(line_of("sr 4\n0: 1 2 3\n2: 0 2 3\n").0, 3);
        assert_eq!(line_of("sm 2\n0: 2 3\n1: 3 0\n2: 0 1\n3: 1 0\n").0, 3);
        assert_eq!(line_of(&format!("{EX2}4: 1\n")).0, 6);
    }
}
