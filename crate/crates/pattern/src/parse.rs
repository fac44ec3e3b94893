//! Parser for the ASCII pattern syntax:
//!
//! ```text
//! pattern := vertex (edge vertex)*
//! vertex  := "(" ident ")"
//! edge    := "-" ident "->" | "<-" ident "-"
//! ident   := [a-zA-Z][a-zA-Z0-9]*
//! ```
//!
//! Whitespace is insignificant. Reusing a vertex variable refers back to the
//! same pattern vertex (so `(a)-x->(a)` is a loop); edge variables must be
//! unique.

use crate::{PatternEdge, PatternError, PatternGraph};

struct Scanner<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<(), PatternError> {
        self.skip_ws();
        match self.text.get(self.pos) {
            Some(&b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(PatternError::Syntax {
                position: self.pos,
                expected: (byte as char).to_string(),
            }),
        }
    }

    fn ident(&mut self) -> Result<String, PatternError> {
        self.skip_ws();
        let start = self.pos;
        match self.text.get(self.pos) {
            Some(b) if b.is_ascii_alphabetic() => self.pos += 1,
            _ => {
                return Err(PatternError::Syntax {
                    position: self.pos,
                    expected: "identifier".to_string(),
                })
            }
        }
        while self
            .text
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric())
        {
            self.pos += 1;
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos])
            .expect("ascii")
            .to_string())
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }
}

/// Parse a pattern string into a [`PatternGraph`] with directions normalized
/// to (source -> target).
pub fn parse_pattern(text: &str) -> Result<PatternGraph, PatternError> {
    let mut scanner = Scanner::new(text);
    let mut graph = PatternGraph::default();

    let parse_vertex = |scanner: &mut Scanner, graph: &mut PatternGraph| {
        scanner.expect(b'(')?;
        let name = scanner.ident()?;
        scanner.expect(b')')?;
        Ok::<usize, PatternError>(graph.intern_vertex(name))
    };

    let mut current = parse_vertex(&mut scanner, &mut graph)?;
    while !scanner.at_end() {
        match scanner.peek() {
            // -name-> : edge from the current vertex to the next one
            Some(b'-') => {
                scanner.expect(b'-')?;
                let name = scanner.ident()?;
                scanner.expect(b'-')?;
                scanner.expect(b'>')?;
                let next = parse_vertex(&mut scanner, &mut graph)?;
                graph.add_edge(name, current, next, scanner.pos)?;
                current = next;
            }
            // <-name- : edge from the next vertex back to the current one
            Some(b'<') => {
                scanner.expect(b'<')?;
                scanner.expect(b'-')?;
                let name = scanner.ident()?;
                scanner.expect(b'-')?;
                let next = parse_vertex(&mut scanner, &mut graph)?;
                graph.add_edge(name, next, current, scanner.pos)?;
                current = next;
            }
            _ => {
                return Err(PatternError::Syntax {
                    position: scanner.pos,
                    expected: "edge ('-' or '<-') or end of pattern".to_string(),
                })
            }
        }
    }
    Ok(graph)
}

impl PatternGraph {
    fn intern_vertex(&mut self, name: String) -> usize {
        if let Some(idx) = self.vertex_vars.iter().position(|v| *v == name) {
            idx
        } else {
            self.vertex_vars.push(name);
            self.vertex_vars.len() - 1
        }
    }

    fn add_edge(
        &mut self,
        var: String,
        source: usize,
        target: usize,
        position: usize,
    ) -> Result<(), PatternError> {
        if self.edges.iter().any(|e| e.var == var) {
            return Err(PatternError::DuplicateEdgeVariable { var, position });
        }
        self.edges.push(PatternEdge {
            var,
            source,
            target,
        });
        Ok(())
    }
}
