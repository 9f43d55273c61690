//! Line-oriented proof files.
//!
//! ```text
//! # comment
//! hyp: p
//! hyp: q
//! 1. q & p -> p & q ; axiom A3 [phi:=q, psi:=p]
//! 2. q ; hyp
//! 3. ... ; mp 2,1
//! ```
//!
//! `mp i,j` cites the premise first and the implication second.

use std::fmt;

use thiserror::Error;

use super::derivations::Fixture;
use super::{Justification, Line, Proof, SchemeId};
use crate::formula::{is_identifier, parse, Binding, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProofFileError {
    #[error("file line {line}: {source}")]
    Formula {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("file line {line}: unknown scheme `{name}`")]
    UnknownScheme { line: usize, name: String },
    #[error("file line {line}: expected proof line {expected}")]
    Numbering { line: usize, expected: usize },
    #[error("file line {line}: {message}")]
    Syntax { line: usize, message: String },
}

fn syntax(line: usize, message: impl Into<String>) -> ProofFileError {
    ProofFileError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_binding(text: &str, line: usize) -> Result<Binding, ProofFileError> {
    let mut b = Binding::new();
    let inner = text.trim();
    if inner.is_empty() {
        return Ok(b);
    }
    for item in inner.split(',') {
        let (name, value) = item
            .split_once(":=")
            .ok_or_else(|| syntax(line, format!("binding `{}` lacks `:=`", item.trim())))?;
        let name = name.trim();
        if !is_identifier(name) {
            return Err(syntax(line, format!("bad metavariable `{name}`")));
        }
        let f = parse(value).map_err(|source| ProofFileError::Formula { line, source })?;
        if b.insert(name.to_string(), f).is_some() {
            return Err(syntax(line, format!("`{name}` bound twice")));
        }
    }
    Ok(b)
}

fn parse_justification(text: &str, line: usize) -> Result<Justification, ProofFileError> {
    let text = text.trim();
    let (word, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    match word {
        "hyp" if rest.trim().is_empty() => Ok(Justification::Hyp),
        "mp" => {
            let (i, j) = rest
                .split_once(',')
                .ok_or_else(|| syntax(line, "mp needs two line numbers `i,j`"))?;
            let num = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| syntax(line, format!("`{}` is not a line number", s.trim())))
            };
            Ok(Justification::Mp(num(i)?, num(j)?))
        }
        "axiom" | "lemma" => {
            let rest = rest.trim();
            let (name, binding) = match rest.split_once('[') {
                Some((name, tail)) => {
                    let inside = tail
                        .trim_end()
                        .strip_suffix(']')
                        .ok_or_else(|| syntax(line, "binding list lacks `]`"))?;
                    (name.trim(), parse_binding(inside, line)?)
                }
                None => (rest, Binding::new()),
            };
            let id = SchemeId::from_name(name).ok_or_else(|| ProofFileError::UnknownScheme {
                line,
                name: name.to_string(),
            })?;
            Ok(if word == "axiom" {
                Justification::Axiom(id, binding)
            } else {
                Justification::Lemma(id, binding)
            })
        }
        _ => Err(syntax(line, format!("unknown justification `{text}`"))),
    }
}

/// Parses a proof file. Scheme kinds and line references are left for
/// `check_proof`; this only checks the layout.
pub fn parse_proof(text: &str) -> Result<Proof, ProofFileError> {
    let mut proof = Proof::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(h) = content.strip_prefix("hyp:") {
            if !proof.lines.is_empty() {
                return Err(syntax(line, "hypotheses must precede the numbered lines"));
            }
            let f = parse(h).map_err(|source| ProofFileError::Formula { line, source })?;
            proof.hypotheses.push(f);
            continue;
        }
        let expected = proof.lines.len() + 1;
        let (num, rest) = content
            .split_once('.')
            .ok_or_else(|| syntax(line, "expected `hyp:` or a numbered line"))?;
        if num.trim().parse::<usize>().ok() != Some(expected) {
            return Err(ProofFileError::Numbering { line, expected });
        }
        let (formula, just) = rest
            .split_once(';')
            .ok_or_else(|| syntax(line, "missing `;` before the justification"))?;
        let formula = parse(formula).map_err(|source| ProofFileError::Formula { line, source })?;
        let just = parse_justification(just, line)?;
        proof.lines.push(Line { formula, just });
    }
    Ok(proof)
}

fn write_binding(f: &mut fmt::Formatter<'_>, b: &Binding) -> fmt::Result {
    if b.is_empty() {
        return Ok(());
    }
    f.write_str(" [")?;
    for (i, (k, v)) in b.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{k}:={v}")?;
    }
    f.write_str("]")
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Hyp => f.write_str("hyp"),
            Justification::Axiom(id, b) => {
                write!(f, "axiom {id}")?;
                write_binding(f, b)
            }
            Justification::Lemma(id, b) => {
                write!(f, "lemma {id}")?;
                write_binding(f, b)
            }
            Justification::Mp(i, j) => write!(f, "mp {i},{j}"),
        }
    }
}

impl Proof {
    fn write_with(&self, f: &mut fmt::Formatter<'_>, note: impl Fn(usize) -> Option<String>) -> fmt::Result {
        for h in &self.hypotheses {
            writeln!(f, "hyp: {h}")?;
        }
        for (i, line) in self.lines.iter().enumerate() {
            write!(f, "{}. {} ; {}", i + 1, line.formula, line.just)?;
            if let Some(n) = note(i + 1) {
                write!(f, "  # {n}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, |_| None)
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.name)?;
        self.proof.write_with(f, |line| {
            let labels: Vec<&str> = self
                .milestones
                .iter()
                .filter(|(_, l)| *l == line)
                .map(|(s, _)| s.as_str())
                .collect();
            (!labels.is_empty()).then(|| format!("step {}", labels.join(" ")))
        })
    }
}
