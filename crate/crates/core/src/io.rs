//! Edge-list and adjacency-matrix text formats.
//!
//! Both formats ignore blank lines and everything after `#`.
//! Edge list: header `n m`, then `m` lines `u v` (0-based arc `u -> v`).
//! Adjacency matrix: header `n`, then `n` rows of `n` entries in {0, 1}.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::digraph::Digraph;
use crate::error::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    AdjMatrix,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "edgelist" => Ok(Format::EdgeList),
            "adjmatrix" => Ok(Format::AdjMatrix),
            other => Err(format!("unknown format {other:?} (expected edgelist or adjmatrix)")),
        }
    }
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::EdgeList => "edgelist",
            Format::AdjMatrix => "adjmatrix",
        }
    }
}

/// Non-empty content lines as `(line number, tokens)`.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn number(line: usize, token: &str, expected: &'static str) -> Result<usize, ParseError> {
    token.parse().map_err(|_| ParseError::Token {
        line,
        expected,
        found: token.to_owned(),
    })
}

fn trailing(line: usize, tokens: &[&str]) -> ParseError {
    ParseError::Trailing {
        line,
        found: tokens.join(" "),
    }
}

/// Places arcs one at a time so each failure keeps its line number.
struct ArcCollector {
    n: usize,
    seen: Vec<bool>,
    arcs: Vec<(usize, usize)>,
}

impl ArcCollector {
    fn new(n: usize) -> Self {
        ArcCollector {
            n,
            seen: vec![false; n * n],
            arcs: Vec::new(),
        }
    }

    fn push(&mut self, line: usize, u: usize, v: usize) -> Result<(), ParseError> {
        for vertex in [u, v] {
            if vertex >= self.n {
                return Err(ParseError::VertexOutOfRange { line, vertex, n: self.n });
            }
        }
        if u == v {
            return Err(ParseError::Loop { line, vertex: u });
        }
        if std::mem::replace(&mut self.seen[u * self.n + v], true) {
            return Err(ParseError::DuplicateArc { line, from: u, to: v });
        }
        self.arcs.push((u, v));
        Ok(())
    }

    fn finish(self) -> Digraph {
        Digraph::new(self.n, &self.arcs).expect("arcs validated on insertion")
    }
}

fn header_n(line: usize, n: usize) -> Result<usize, ParseError> {
    if n == 0 {
        Err(ParseError::Header {
            line,
            reason: "n must be positive".into(),
        })
    } else {
        Ok(n)
    }
}

pub fn parse_edgelist(text: &str) -> Result<Digraph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(ParseError::Empty)?;
    if header.len() != 2 {
        return Err(ParseError::Header {
            line: hline,
            reason: format!("expected \"n m\", found {:?}", header.join(" ")),
        });
    }
    let n = header_n(hline, number(hline, header[0], "vertex count n")?)?;
    let m = number(hline, header[1], "arc count m")?;
    let mut arcs = ArcCollector::new(n);
    let mut last = hline;
    for k in 0..m {
        let (line, tokens) = lines.next().ok_or(ParseError::Truncated {
            line: last + 1,
            expected: m - k,
        })?;
        last = line;
        if tokens.len() > 2 {
            return Err(trailing(line, &tokens[2..]));
        }
        if tokens.len() < 2 {
            return Err(ParseError::Token {
                line,
                expected: "arc \"u v\"",
                found: tokens.join(" "),
            });
        }
        let u = number(line, tokens[0], "vertex")?;
        let v = number(line, tokens[1], "vertex")?;
        arcs.push(line, u, v)?;
    }
    if let Some((line, tokens)) = lines.next() {
        return Err(trailing(line, &tokens));
    }
    Ok(arcs.finish())
}

pub fn parse_adjmatrix(text: &str) -> Result<Digraph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(ParseError::Empty)?;
    if header.len() != 1 {
        return Err(ParseError::Header {
            line: hline,
            reason: format!("expected \"n\", found {:?}", header.join(" ")),
        });
    }
    let n = header_n(hline, number(hline, header[0], "vertex count n")?)?;
    let mut arcs = ArcCollector::new(n);
    let mut last = hline;
    for u in 0..n {
        let (line, tokens) = lines.next().ok_or(ParseError::Truncated {
            line: last + 1,
            expected: n - u,
        })?;
        last = line;
        if tokens.len() > n {
            return Err(trailing(line, &tokens[n..]));
        }
        if tokens.len() < n {
            return Err(ParseError::Token {
                line,
                expected: "a row of n entries",
                found: tokens.join(" "),
            });
        }
        for (v, t) in tokens.iter().enumerate() {
            match *t {
                "0" => {}
                "1" => arcs.push(line, u, v)?,
                other => {
                    return Err(ParseError::Entry {
                        line,
                        found: other.to_owned(),
                    })
                }
            }
        }
    }
    if let Some((line, tokens)) = lines.next() {
        return Err(trailing(line, &tokens));
    }
    Ok(arcs.finish())
}

pub fn parse(text: &str, format: Format) -> Result<Digraph, ParseError> {
    match format {
        Format::EdgeList => parse_edgelist(text),
        Format::AdjMatrix => parse_adjmatrix(text),
    }
}

/// Edge list with arcs in lexicographic order.
pub fn write_edgelist(g: &Digraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.arc_count());
    for (u, v) in g.arcs() {
        writeln!(out, "{u} {v}").expect("writing to a String cannot fail");
    }
    out
}

pub fn write_adjmatrix(g: &Digraph) -> String {
    let mut out = format!("{}\n", g.n());
    for u in 0..g.n() {
        let row: Vec<&str> = (0..g.n()).map(|v| if g.has_arc(u, v) { "1" } else { "0" }).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_edgelist() {
        let g = parse_edgelist("3 3\n0 1\n1 2\n2 0").unwrap();
        assert_eq!(g, Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap());
    }

    #[test]
    fn digon_adjmatrix() {
        let g = parse_adjmatrix("2\n0 1\n1 0").unwrap();
        assert_eq!(g, Digraph::new(2, &[(0, 1), (1, 0)]).unwrap());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a triangle\n\n3 3  # header\n0 1\n1 2 # middle\n\n2 0\n# done\n";
        assert_eq!(parse_edgelist(text).unwrap().arc_count(), 3);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse_edgelist("2 1\n0 0"), Err(ParseError::Loop { line: 2, vertex: 0 }));
        assert_eq!(
            parse_edgelist("2 2\n0 1\n\n0 1"),
            Err(ParseError::DuplicateArc { line: 4, from: 0, to: 1 })
        );
        assert!(matches!(parse_edgelist("2\n0 1"), Err(ParseError::Header { line: 1, .. })));
        assert!(matches!(parse_edgelist("2 1\n0 1\n1 0"), Err(ParseError::Trailing { line: 3, .. })));
        assert!(matches!(parse_edgelist("2 1\n0 1 5"), Err(ParseError::Trailing { line: 2, .. })));
        assert!(matches!(parse_edgelist("3 2\n0 1"), Err(ParseError::Truncated { line: 3, expected: 1 })));
        assert!(matches!(parse_edgelist("2 1\n0 x"), Err(ParseError::Token { line: 2, .. })));
        assert!(matches!(parse_edgelist("2 1\n0 2"), Err(ParseError::VertexOutOfRange { line: 2, .. })));
        assert!(matches!(parse_adjmatrix("2\n0 2\n1 0"), Err(ParseError::Entry { line: 2, .. })));
        assert!(matches!(parse_adjmatrix("2\n1 0\n1 0"), Err(ParseError::Loop { line: 2, vertex: 0 })));
        assert!(matches!(parse_adjmatrix("0"), Err(ParseError::Header { .. })));
        assert_eq!(parse_adjmatrix("# nothing\n"), Err(ParseError::Empty));
    }

    #[test]
    fn writers_round_trip() {
        let g = Digraph::new(4, &[(3, 0), (0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(write_edgelist(&g), "4 4\n0 1\n0 2\n1 2\n3 0\n");
        assert_eq!(parse_adjmatrix(&write_adjmatrix(&g)).unwrap(), g);
    }
}
