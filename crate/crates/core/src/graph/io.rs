//! Edge-list text format.
//!
//! ```text
//! # comment
//! 4          <- vertex count
//! 0 1        <- DAG edge 0 -> 1
//! 2 3 d      <- PDAG directed edge 2 -> 3
//! 1 2 u      <- PDAG undirected edge 1 - 2
//! ```
//!
//! Indices are 0-based. Everything after `#` on a line is ignored.

use std::fmt::Write;

use super::{Dag, GraphError, Pdag};

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn parse_index(line: usize, tok: &str) -> Result<usize, GraphError> {
    tok.parse().map_err(|_| GraphError::Parse {
        line,
        msg: format!("expected a vertex index, found `{tok}`"),
    })
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
) -> Result<usize, GraphError> {
    match lines.next() {
        Some((line, f)) if f.len() == 1 => parse_index(line, f[0]),
        Some((line, _)) => Err(GraphError::Parse {
            line,
            msg: "first line must hold the vertex count".into(),
        }),
        None => Err(GraphError::Parse { line: 0, msg: "empty input".into() }),
    }
}

pub fn parse_dag(text: &str) -> Result<Dag, GraphError> {
    let mut lines = data_lines(text);
    let p = header(&mut lines)?;
    let mut edges = Vec::new();
    for (line, f) in lines {
        if f.len() != 2 {
            return Err(GraphError::Parse { line, msg: "expected `i j`".into() });
        }
        edges.push((parse_index(line, f[0])?, parse_index(line, f[1])?));
    }
    Dag::from_edges(p, edges)
}

pub fn parse_pdag(text: &str) -> Result<Pdag, GraphError> {
    let mut lines = data_lines(text);
    let p = header(&mut lines)?;
    let (mut directed, mut undirected) = (Vec::new(), Vec::new());
    for (line, f) in lines {
        let edge = match f.as_slice() {
            [a, b, _] | [a, b] => (parse_index(line, a)?, parse_index(line, b)?),
            _ => return Err(GraphError::Parse { line, msg: "expected `i j d|u`".into() }),
        };
        match f.get(2).copied().unwrap_or("d") {
            "d" => directed.push(edge),
            "u" => undirected.push(edge),
            other => {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("unknown edge mark `{other}`"),
                })
            }
        }
    }
    Pdag::from_edges(p, directed, undirected)
}

pub fn write_dag(g: &Dag) -> String {
    let mut out = format!("{}\n", g.p());
    for (a, b) in g.edges() {
        writeln!(out, "{a} {b}").unwrap();
    }
    out
}

pub fn write_pdag(g: &Pdag) -> String {
    let mut out = format!("{}\n", g.p());
    for (a, b) in g.directed_edges() {
        writeln!(out, "{a} {b} d").unwrap();
    }
    for (a, b) in g.undirected_edges() {
        writeln!(out, "{a} {b} u").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dag_with_comments() {
        let g = parse_dag("# chain\n3\n0 1  # first\n\n1 2\n").unwrap();
        assert_eq!(g, Dag::from_edges(3, [(0, 1), (1, 2)]).unwrap());
        assert_eq!(parse_dag(&write_dag(&g)).unwrap(), g);
    }

    #[test]
    fn pdag_round_trip() {
        let g = Pdag::from_edges(4, [(0, 1), (2, 1)], [(1, 3)]).unwrap();
        let text = write_pdag(&g);
        assert_eq!(text, "4\n0 1 d\n2 1 d\n1 3 u\n");
        assert_eq!(parse_pdag(&text).unwrap(), g);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            parse_dag("3\n0 x\n"),
            Err(GraphError::Parse { line: 2, msg: "expected a vertex index, found `x`".into() })
        );
        assert!(matches!(parse_dag(""), Err(GraphError::Parse { .. })));
        assert!(matches!(parse_dag("3\n0 1 2 3\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(parse_pdag("3\n0 1 q\n"), Err(GraphError::Parse { line: 2, .. })));
        assert_eq!(parse_dag("2\n0 1\n1 0\n"), Err(GraphError::Cycle));
    }
}
