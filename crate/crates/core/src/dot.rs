//! Graphviz export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::automaton::{Automaton, Component};
use crate::whitehead::Certificate;

/// 64-bit FNV-1a, used to shorten state keys in labels.
fn digest(s: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("{h:016x}")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per state, in key order, and one edge per fold. With
/// `only`, states and edges outside the component are left out.
pub fn automaton_dot(a: &Automaton, only: Option<&Component>) -> String {
    let keys: Vec<&String> = a
        .states
        .keys()
        .filter(|k| only.is_none_or(|c| c.contains(k)))
        .collect();
    if keys.is_empty() {
        return "digraph { }\n".to_string();
    }
    let ids: BTreeMap<&str, usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| (k.as_str(), i))
        .collect();
    let mut out = String::from("digraph {\n");
    for (i, k) in keys.iter().enumerate() {
        let s = &a.states[*k];
        let label = format!("{}\\n{}", digest(k), s.summary());
        let _ = writeln!(out, "  s{i} [label={}];", quote(&label));
    }
    for e in &a.edges {
        let (Some(x), Some(y)) = (ids.get(e.from.as_str()), ids.get(e.to.as_str())) else {
            continue;
        };
        let g = &a.states[&e.from].graph;
        let label = format!("{}/{}", g.fmt_turn(e.fold.turn), g.dir_token(e.fold.longer));
        let _ = writeln!(out, "  s{x} -> s{y} [label={}];", quote(&label));
    }
    out.push_str("}\n");
    out
}

/// The local Whitehead graphs of a certificate, one cluster per vertex.
/// Turns are drawn as undirected edges.
pub fn certificate_dot(c: &Certificate) -> String {
    if c.local_whitehead.is_empty() {
        return "digraph { }\n".to_string();
    }
    let mut out = String::from("digraph {\n");
    for (i, w) in c.local_whitehead.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{i} {{");
        let _ = writeln!(out, "    label={};", quote(&w.vertex));
        for d in &w.directions {
            let _ = writeln!(
                out,
                "    {} [label={}];",
                quote(&format!("{}:{d}", w.vertex)),
                quote(d)
            );
        }
        for [x, y] in &w.edges {
            let _ = writeln!(
                out,
                "    {} -> {} [dir=none];",
                quote(&format!("{}:{x}", w.vertex)),
                quote(&format!("{}:{y}", w.vertex))
            );
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
pub(crate) mod grammar {
    //! A checker for the subset of the DOT language that the exporters use.

    #[derive(Debug, PartialEq)]
    enum Tok {
        Id(String),
        Punct(&'static str),
    }

    fn lex(s: &str) -> Result<Vec<Tok>, String> {
        let mut out = Vec::new();
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c == '"' {
                let mut j = i + 1;
                let mut text = String::new();
                loop {
                    match chars.get(j) {
                        None => return Err("unterminated string".into()),
                        Some('\\') => {
                            text.push(*chars.get(j + 1).ok_or("dangling escape")?);
                            j += 2;
                        }
                        Some('"') => break,
                        Some(&ch) => {
                            text.push(ch);
                            j += 1;
                        }
                    }
                }
                out.push(Tok::Id(text));
                i = j + 1;
            } else if c.is_ascii_alphanumeric() || c == '_' {
                let j = (i..chars.len())
                    .find(|&j| !(chars[j].is_ascii_alphanumeric() || chars[j] == '_'))
                    .unwrap_or(chars.len());
                out.push(Tok::Id(chars[i..j].iter().collect()));
                i = j;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(Tok::Punct("->"));
                i += 2;
            } else {
                let p = match c {
                    '{' => "{",
                    '}' => "}",
                    '[' => "[",
                    ']' => "]",
                    ';' => ";",
                    ',' => ",",
                    '=' => "=",
                    _ => return Err(format!("unexpected character {c:?}")),
                };
                out.push(Tok::Punct(p));
                i += 1;
            }
        }
        Ok(out)
    }

    struct Parser {
        toks: Vec<Tok>,
        pos: usize,
    }

    impl Parser {
        fn punct(&mut self, p: &str) -> bool {
            if matches!(self.toks.get(self.pos), Some(Tok::Punct(q)) if *q == p) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        fn id(&mut self) -> Option<String> {
            match self.toks.get(self.pos) {
                Some(Tok::Id(s)) => {
                    self.pos += 1;
                    Some(s.clone())
                }
                _ => None,
            }
        }

        fn attrs(&mut self) -> Result<(), String> {
            while self.punct("[") {
                while !self.punct("]") {
                    self.id().ok_or("attribute name")?;
                    if !self.punct("=") {
                        return Err("expected =".into());
                    }
                    self.id().ok_or("attribute value")?;
                    self.punct(",");
                    self.punct(";");
                }
            }
            Ok(())
        }

        fn stmts(&mut self) -> Result<(), String> {
            while !self.punct("}") {
                if self.pos >= self.toks.len() {
                    return Err("unclosed brace".into());
                }
                if self.punct(";") {
                    continue;
                }
                let first = self.id().ok_or("expected a statement")?;
                if first == "subgraph" {
                    self.id();
                    if !self.punct("{") {
                        return Err("expected { after subgraph".into());
                    }
                    self.stmts()?;
                } else if self.punct("=") {
                    self.id().ok_or("expected a value")?;
                } else {
                    while self.punct("->") {
                        self.id().ok_or("expected an edge target")?;
                    }
                    self.attrs()?;
                }
                self.punct(";");
            }
            Ok(())
        }
    }

    /// Accepts `digraph [id] { stmt* }`.
    pub fn check(s: &str) -> Result<(), String> {
        let mut p = Parser {
            toks: lex(s)?,
            pos: 0,
        };
        if p.id().as_deref() != Some("digraph") {
            return Err("expected digraph".into());
        }
        if !p.punct("{") {
            p.id();
            if !p.punct("{") {
                return Err("expected {".into());
            }
        }
        p.stmts()?;
        if p.pos != p.toks.len() {
            return Err("trailing input".into());
        }
        Ok(())
    }

    #[test]
    fn checker_rejects_garbage() {
        assert!(check("digraph { }").is_ok());
        assert!(check("digraph { a -> b [label=\"x\"]; }").is_ok());
        assert!(check("graph { }").is_err());
        assert!(check("digraph { a -> }").is_err());
        assert!(check("digraph { a [label=] }").is_err());
        assert!(check("digraph { ").is_err());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{AutomatonEdge, AutomatonState};
    use crate::folds::FoldDescriptor;
    use crate::graph::fixtures::{gamma_star, t_star};

    #[test]
    fn empty_automaton() {
        assert_eq!(automaton_dot(&Automaton::default(), None), "digraph { }\n");
    }

    #[test]
    fn single_self_loop() {
        let g = gamma_star();
        let (state, _) = AutomatonState::from_parts(&g, &t_star(&g));
        let f = state.folds()[0];
        let mut a = Automaton::default();
        a.edges.insert(AutomatonEdge {
            from: state.key.clone(),
            fold: f,
            to: state.key.clone(),
        });
        a.states.insert(state.key.clone(), state);
        let dot = automaton_dot(&a, None);
        grammar::check(&dot).unwrap();
        assert_eq!(dot.matches("[label=").count(), 2);
        assert!(dot.contains("s0 -> s0"));
        let label = FoldDescriptor::display(&f, &a.states.values().next().unwrap().graph);
        assert!(dot.contains(&label));
    }

    #[test]
    fn digests_are_stable() {
        assert_eq!(digest(""), "cbf29ce484222325");
        assert_eq!(digest("a"), "af63dc4c8601ec8c");
    }
}
