use super::{is_prime, PcPresentation};

/// Where and why a presentation file failed to parse. Lines and columns are
/// 1-based.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("generator index {index} out of range 1..={ngens}")]
    IndexOutOfRange { index: usize, ngens: usize },
    #[error("right hand side of {relation} must be supported on generators above {bound}")]
    NotSupportedAbove { relation: String, bound: usize },
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("duplicate directive: {0}")]
    Duplicate(String),
    #[error("missing `{0}` directive")]
    Missing(&'static str),
}

struct Cursor<'a> {
    line_no: usize,
    tokens: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line_no: usize, line: &'a str) -> Self {
        let mut tokens = Vec::new();
        let mut start = None;
        for (idx, ch) in line.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push((s, &line[s..idx]));
                }
            } else if start.is_none() {
                start = Some(idx);
            }
        }
        if let Some(s) = start {
            tokens.push((s, &line[s..]));
        }
        Cursor {
            line_no,
            tokens,
            pos: 0,
        }
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or(self.tokens.last())
            .map_or(1, |(c, t)| if self.pos < self.tokens.len() { c + 1 } else { c + t.len() + 1 })
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line_no,
            column: self.column(),
            kind,
        }
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        self.err(ParseErrorKind::Syntax(msg.into()))
    }

    fn next(&mut self, what: &str) -> Result<&'a str, ParseError> {
        match self.tokens.get(self.pos) {
            Some((_, t)) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(self.syntax(format!("expected {what}"))),
        }
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let tok = self.next(what)?;
        tok.parse().map_err(|_| {
            self.pos -= 1;
            self.syntax(format!("expected {what}, found `{tok}`"))
        })
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        let tok = self.next(&format!("`{lit}`"))?;
        if tok != lit {
            self.pos -= 1;
            return Err(self.syntax(format!("expected `{lit}`, found `{tok}`")));
        }
        Ok(())
    }

    fn done(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.done() {
            Ok(())
        } else {
            Err(self.syntax(format!("unexpected `{}`", self.tokens[self.pos].1)))
        }
    }
}

fn index(cur: &mut Cursor<'_>, ngens: usize) -> Result<usize, ParseError> {
    let i: usize = cur.number("generator index")?;
    if i == 0 || i > ngens {
        cur.pos -= 1;
        return Err(cur.err(ParseErrorKind::IndexOutOfRange { index: i, ngens }));
    }
    Ok(i - 1)
}

/// Parses `k:e` pairs into an exponent vector, reducing mod `p`.
fn rhs(cur: &mut Cursor<'_>, p: u32, ngens: usize, bound: usize, relation: &str) -> Result<Vec<u32>, ParseError> {
    let mut exps = vec![0u32; ngens];
    let mut seen = vec![false; ngens];
    while !cur.done() {
        let tok = cur.next("`k:e`")?;
        let bad = |cur: &mut Cursor<'_>| {
            cur.pos -= 1;
            cur.syntax(format!("expected `k:e`, found `{tok}`"))
        };
        let Some((k, e)) = tok.split_once(':') else {
            return Err(bad(cur));
        };
        let (Ok(k), Ok(e)) = (k.parse::<usize>(), e.parse::<i64>()) else {
            return Err(bad(cur));
        };
        cur.pos -= 1;
        if k == 0 || k > ngens {
            return Err(cur.err(ParseErrorKind::IndexOutOfRange { index: k, ngens }));
        }
        if seen[k - 1] {
            return Err(cur.syntax(format!("generator {k} repeated in right hand side")));
        }
        let e = e.rem_euclid(p as i64) as u32;
        if k - 1 <= bound && e != 0 {
            return Err(cur.err(ParseErrorKind::NotSupportedAbove {
                relation: relation.to_string(),
                bound: bound + 1,
            }));
        }
        cur.pos += 1;
        seen[k - 1] = true;
        exps[k - 1] = e;
    }
    Ok(exps)
}

pub(super) fn parse_presentation(text: &str) -> Result<PcPresentation, ParseError> {
    let mut prime: Option<u32> = None;
    let mut pres: Option<PcPresentation> = None;
    let mut seen_pow = std::collections::HashSet::new();
    let mut seen_comm = std::collections::HashSet::new();
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor::new(line_no, line);
        if cur.done() {
            continue;
        }
        let directive = cur.next("directive")?;
        match directive {
            "p" => {
                if prime.is_some() {
                    cur.pos -= 1;
                    return Err(cur.err(ParseErrorKind::Duplicate("p".into())));
                }
                let p: u32 = cur.number("prime")?;
                if !is_prime(p) {
                    cur.pos -= 1;
                    return Err(cur.err(ParseErrorKind::NotPrime(p)));
                }
                cur.finish()?;
                prime = Some(p);
            }
            "n" => {
                if pres.is_some() {
                    cur.pos -= 1;
                    return Err(cur.err(ParseErrorKind::Duplicate("n".into())));
                }
                let Some(p) = prime else {
                    return Err(cur.syntax("`p` must precede `n`"));
                };
                let n: usize = cur.number("generator count")?;
                if n == 0 {
                    cur.pos -= 1;
                    return Err(cur.syntax("generator count must be at least 1"));
                }
                cur.finish()?;
                pres = Some(PcPresentation::new(p, n).expect("prime and count validated"));
            }
            "pow" => {
                let Some(pr) = pres.as_mut() else {
                    return Err(cur.syntax("`p` and `n` must precede relations"));
                };
                let n = pr.ngens();
                let i = index(&mut cur, n)?;
                if !seen_pow.insert(i) {
                    return Err(cur.err(ParseErrorKind::Duplicate(format!("pow {}", i + 1))));
                }
                cur.expect("=")?;
                let exps = rhs(&mut cur, pr.prime(), n, i, &format!("pow {}", i + 1))?;
                pr.set_power(i, &exps).expect("support validated");
            }
            "comm" => {
                let Some(pr) = pres.as_mut() else {
                    return Err(cur.syntax("`p` and `n` must precede relations"));
                };
                let n = pr.ngens();
                let j = index(&mut cur, n)?;
                let i = index(&mut cur, n)?;
                if j <= i {
                    cur.pos -= 1;
                    return Err(cur.syntax(format!("commutator needs j > i, got comm {} {}", j + 1, i + 1)));
                }
                if !seen_comm.insert((j, i)) {
                    return Err(cur.err(ParseErrorKind::Duplicate(format!("comm {} {}", j + 1, i + 1))));
                }
                cur.expect("=")?;
                let exps = rhs(&mut cur, pr.prime(), n, j, &format!("comm {} {}", j + 1, i + 1))?;
                pr.set_commutator(j, i, &exps).expect("support validated");
            }
            other => {
                cur.pos -= 1;
                return Err(cur.syntax(format!("unknown directive `{other}`")));
            }
        }
    }
    let missing = |what| ParseError {
        line: last_line,
        column: 1,
        kind: ParseErrorKind::Missing(what),
    };
    if prime.is_none() {
        return Err(missing("p"));
    }
    pres.ok_or_else(|| missing("n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg() {
        let p = PcPresentation::parse("p 3\nn 3\ncomm 2 1 = 3:1\n").unwrap();
        assert_eq!(p.prime(), 3);
        assert_eq!(p.ngens(), 3);
        assert_eq!(p.comm_rhs(1, 0).exps(), &[0, 0, 1]);
        assert!(p.power_rhs(0).is_identity());
    }

    #[test]
    fn cyclic_and_comments() {
        let p = PcPresentation::parse("# C3\np 3   # prime\nn 1\n").unwrap();
        assert_eq!(p.group_order(), 3);
        let c9 = PcPresentation::parse("p 3\nn 2\npow 1 = 2:1").unwrap();
        assert_eq!(c9.power_rhs(0).exps(), &[0, 1]);
    }

    #[test]
    fn exponents_reduced_mod_p() {
        let p = PcPresentation::parse("p 3\nn 3\ncomm 2 1 = 3:-1").unwrap();
        assert_eq!(p.comm_rhs(1, 0).exps(), &[0, 0, 2]);
        // reduces to zero, so allowed even on a low index
        let q = PcPresentation::parse("p 3\nn 2\npow 2 = 1:3").unwrap();
        assert!(q.power_rhs(1).is_identity());
    }

    #[test]
    fn rejects_low_support() {
        let err = PcPresentation::parse("p 3\nn 2\ncomm 2 1 = 2:1").unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.column, 12);
        assert!(matches!(err.kind, ParseErrorKind::NotSupportedAbove { .. }));
    }

    #[test]
    fn rejects_out_of_range() {
        let err = PcPresentation::parse("p 3\nn 2\npow 3 = 2:1").unwrap_err();
        assert_eq!((err.line, err.column), (3, 5));
        assert!(matches!(err.kind, ParseErrorKind::IndexOutOfRange { index: 3, ngens: 2 }));
        let err = PcPresentation::parse("p 3\nn 2\npow 1 = 7:1").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::IndexOutOfRange { index: 7, .. }));
    }

    #[test]
    fn syntax_errors() {
        for (text, line) in [
            ("p x\nn 1", 1),
            ("p 4\nn 1", 1),
            ("n 1", 1),
            ("p 3\nn 2\npow 1 2:1", 3),
            ("p 3\nn 2\npow 1 = 2-1", 3),
            ("p 3\nn 2\nfoo", 3),
            ("p 3\nn 2\ncomm 1 2 = ", 3),
            ("p 3\nn 2\npow 1 = 2:1\npow 1 = 2:2", 4),
            ("p 3\n", 1),
            ("p 3\nn 2 3", 2),
        ] {
            let err = PcPresentation::parse(text).unwrap_err();
            assert_eq!(err.line, line, "{text:?}: {err}");
        }
    }
}
