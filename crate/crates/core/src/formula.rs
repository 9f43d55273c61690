//! Formula syntax: the primitive-only AST, the surface parser and printer,
//! schematic templates, and structural utilities.
//!
//! The stored tree only ever contains `⊥`, propositions, `¬`, `&` and `→`.
//! Derived connectives are expanded while parsing:
//!
//! | surface     | expansion                              |
//! |-------------|----------------------------------------|
//! | `a (+) b`   | `!a -> b`                              |
//! | `a /\ b`    | `a & (a -> b)`                         |
//! | `a \/ b`    | `((a -> b) -> b) /\ ((b -> a) -> a)`   |
//! | `a <-> b`   | `(a -> b) & (b -> a)`                  |
//!
//! Precedence, tightest first: `!`, `&`, `(+)`, `/\`, `\/`, `->` (right
//! associative), `<->`. All other binary operators associate to the left.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A propositional formula over the primitive connectives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bottom,
    Prop(String),
    Not(Box<Formula>),
    StrongConj(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

/// Returns true if `name` is a legal proposition identifier.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("power exponent must be at least 1")]
    ZeroPower,
    #[error("missing binding for metavariable `{0}`")]
    MissingBinding(String),
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
}

impl Formula {
    /// Builds a proposition. Panics if `name` is not an identifier.
    pub fn prop(name: impl Into<String>) -> Formula {
        let name = name.into();
        assert!(is_identifier(&name), "invalid proposition name {name:?}");
        Formula::Prop(name)
    }

    pub fn try_prop(name: impl Into<String>) -> Result<Formula, FormulaError> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Formula::Prop(name))
        } else {
            Err(FormulaError::BadIdentifier(name))
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn conj(a: Formula, b: Formula) -> Formula {
        Formula::StrongConj(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// `⊤`, written as `¬⊥`.
    pub fn top() -> Formula {
        Formula::not(Formula::Bottom)
    }

    /// Strong disjunction `a ⊻ b = ¬a → b`.
    pub fn strong_disj(a: Formula, b: Formula) -> Formula {
        Formula::implies(Formula::not(a), b)
    }

    /// Weak conjunction `a ∧ b = a & (a → b)`.
    pub fn weak_conj(a: Formula, b: Formula) -> Formula {
        Formula::conj(a.clone(), Formula::implies(a, b))
    }

    /// Weak disjunction `a ∨ b = ((a → b) → b) ∧ ((b → a) → a)`.
    pub fn weak_disj(a: Formula, b: Formula) -> Formula {
        let left = Formula::implies(Formula::implies(a.clone(), b.clone()), b.clone());
        let right = Formula::implies(Formula::implies(b, a.clone()), a);
        Formula::weak_conj(left, right)
    }

    /// Equivalence `a ↔ b = (a → b) & (b → a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::conj(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// Left-associated strong conjunction of a nonempty list.
    /// An empty list yields `⊤`.
    pub fn conj_all<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut iter = items.into_iter();
        match iter.next() {
            None => Formula::top(),
            Some(first) => iter.fold(first, Formula::conj),
        }
    }

    /// Left-associated strong disjunction of a nonempty list. Empty yields `⊥`.
    pub fn strong_disj_all<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut iter = items.into_iter();
        match iter.next() {
            None => Formula::Bottom,
            Some(first) => iter.fold(first, Formula::strong_disj),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Prop(_) => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::StrongConj(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Prop(_) => 0,
            Formula::Not(a) => 1 + a.depth(),
            Formula::StrongConj(a, b) | Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Number of `&` and `→` nodes.
    pub fn binary_count(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Prop(_) => 0,
            Formula::Not(a) => a.binary_count(),
            Formula::StrongConj(a, b) | Formula::Implies(a, b) => {
                1 + a.binary_count() + b.binary_count()
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    pub(crate) fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Bottom => {}
            Formula::Prop(p) => {
                if !out.contains(p) {
                    out.insert(p.clone());
                }
            }
            Formula::Not(a) => a.collect_variables(out),
            Formula::StrongConj(a, b) | Formula::Implies(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
        }
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.contains(self) {
            return;
        }
        match self {
            Formula::Bottom | Formula::Prop(_) => {}
            Formula::Not(a) => a.collect_subformulas(out),
            Formula::StrongConj(a, b) | Formula::Implies(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
        out.insert(self.clone());
    }
}

/// Left-associated `n`-fold strong conjunction of `f` with itself.
pub fn power(f: &Formula, n: usize) -> Result<Formula, FormulaError> {
    if n == 0 {
        return Err(FormulaError::ZeroPower);
    }
    let mut acc = f.clone();
    for _ in 1..n {
        acc = Formula::conj(acc, f.clone());
    }
    Ok(acc)
}

/// All formulas over `atoms` with at most `max_size` nodes, ordered by size
/// and then by printed form.
pub fn enumerate_up_to_size(atoms: &[Formula], max_size: usize) -> Vec<Formula> {
    let mut buckets: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
    for size in 1..=max_size {
        let mut bucket = Vec::new();
        if size == 1 {
            bucket.extend(atoms.iter().cloned());
        } else {
            for f in &buckets[size - 1] {
                bucket.push(Formula::not(f.clone()));
            }
            for left in 1..size - 1 {
                let right = size - 1 - left;
                for a in &buckets[left] {
                    for b in &buckets[right] {
                        bucket.push(Formula::conj(a.clone(), b.clone()));
                        bucket.push(Formula::implies(a.clone(), b.clone()));
                    }
                }
            }
        }
        sort_by_print(&mut bucket);
        bucket.dedup();
        buckets[size] = bucket;
    }
    buckets.into_iter().flatten().collect()
}

pub(crate) fn sort_by_print(items: &mut [Formula]) {
    items.sort_by_cached_key(|f| f.to_string());
}

// ---------------------------------------------------------------------------
// Printing

const PREC_IMPLIES: u8 = 1;
const PREC_CONJ: u8 = 2;
const PREC_UNARY: u8 = 3;

fn write_formula(f: &Formula, ctx: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::Bottom => out.write_str("0"),
        Formula::Prop(p) => out.write_str(p),
        Formula::Not(a) => {
            out.write_str("!")?;
            write_formula(a, PREC_UNARY, out)
        }
        Formula::StrongConj(a, b) => {
            let paren = ctx > PREC_CONJ;
            if paren {
                out.write_str("(")?;
            }
            write_formula(a, PREC_CONJ, out)?;
            out.write_str(" & ")?;
            write_formula(b, PREC_UNARY, out)?;
            if paren {
                out.write_str(")")?;
            }
            Ok(())
        }
        Formula::Implies(a, b) => {
            let paren = ctx > PREC_IMPLIES;
            if paren {
                out.write_str("(")?;
            }
            write_formula(a, PREC_CONJ, out)?;
            out.write_str(" -> ")?;
            write_formula(b, PREC_IMPLIES, out)?;
            if paren {
                out.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, PREC_IMPLIES, f)
    }
}

/// Prints `f` in surface syntax; `parse(&print(f)) == f`.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {expected}, found `{found}`")]
    Unexpected {
        offset: usize,
        found: String,
        expected: &'static str,
    },
    #[error("syntax error at offset {offset}: unexpected end of input, expected {expected}")]
    UnexpectedEnd {
        offset: usize,
        expected: &'static str,
    },
    #[error("unbalanced parenthesis at offset {offset}")]
    Unbalanced { offset: usize },
    #[error("unknown token `{token}` at offset {offset}")]
    UnknownToken { offset: usize, token: String },
}

impl ParseError {
    /// Byte offset into the input where the error was detected.
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Unexpected { offset, .. }
            | ParseError::UnexpectedEnd { offset, .. }
            | ParseError::Unbalanced { offset }
            | ParseError::UnknownToken { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Zero,
    Ident(String),
    Bang,
    Amp,
    Arrow,
    Oplus,
    Wedge,
    Vee,
    Iff,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Zero => "0".into(),
            Tok::Ident(s) => s.clone(),
            Tok::Bang => "!".into(),
            Tok::Amp => "&".into(),
            Tok::Arrow => "->".into(),
            Tok::Oplus => "(+)".into(),
            Tok::Wedge => "/\\".into(),
            Tok::Vee => "\\/".into(),
            Tok::Iff => "<->".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    const SYMBOLS: &[(&str, Tok)] = &[
        ("<->", Tok::Iff),
        ("(+)", Tok::Oplus),
        ("->", Tok::Arrow),
        ("/\\", Tok::Wedge),
        ("\\/", Tok::Vee),
        ("!", Tok::Bang),
        ("&", Tok::Amp),
        ("(", Tok::LParen),
        (")", Tok::RParen),
        ("⊥", Tok::Zero),
        ("¬", Tok::Bang),
        ("→", Tok::Arrow),
        ("↔", Tok::Iff),
        ("⊻", Tok::Oplus),
        ("∧", Tok::Wedge),
        ("∨", Tok::Vee),
    ];

    let mut out = Vec::new();
    let mut pos = 0;
    'outer: while pos < text.len() {
        let rest = &text[pos..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        for (sym, tok) in SYMBOLS {
            if rest.starts_with(sym) {
                out.push((pos, tok.clone()));
                pos += sym.len();
                continue 'outer;
            }
        }
        if c.is_ascii_alphabetic() {
            let len = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            out.push((pos, Tok::Ident(rest[..len].to_string())));
            pos += len;
            continue;
        }
        if c.is_ascii_digit() {
            let len = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            let word = &rest[..len];
            if word == "0" {
                out.push((pos, Tok::Zero));
                pos += len;
                continue;
            }
            return Err(ParseError::UnknownToken {
                offset: pos,
                token: word.to_string(),
            });
        }
        return Err(ParseError::UnknownToken {
            offset: pos,
            token: c.to_string(),
        });
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    open: Vec<usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].1.clone();
        if tok != Tok::Eof {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Tok::Eof => match self.open.last() {
                Some(&offset) if expected == "`)`" => ParseError::Unbalanced { offset },
                _ => ParseError::UnexpectedEnd {
                    offset: self.offset(),
                    expected,
                },
            },
            Tok::RParen if self.open.is_empty() => ParseError::Unbalanced {
                offset: self.offset(),
            },
            tok => ParseError::Unexpected {
                offset: self.offset(),
                found: tok.describe(),
                expected,
            },
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.weak_disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn weak_disj(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.weak_conj()?;
        while *self.peek() == Tok::Vee {
            self.bump();
            let right = self.weak_conj()?;
            left = Formula::weak_disj(left, right);
        }
        Ok(left)
    }

    fn weak_conj(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.strong_disj()?;
        while *self.peek() == Tok::Wedge {
            self.bump();
            let right = self.strong_disj()?;
            left = Formula::weak_conj(left, right);
        }
        Ok(left)
    }

    fn strong_disj(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.strong_conj()?;
        while *self.peek() == Tok::Oplus {
            self.bump();
            let right = self.strong_conj()?;
            left = Formula::strong_disj(left, right);
        }
        Ok(left)
    }

    fn strong_conj(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let right = self.unary()?;
            left = Formula::conj(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Zero => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Ident(_) => match self.bump() {
                Tok::Ident(name) => Ok(Formula::Prop(name)),
                _ => unreachable!(),
            },
            Tok::LParen => {
                let at = self.offset();
                self.bump();
                self.open.push(at);
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("`)`"));
                }
                self.bump();
                self.open.pop();
                Ok(inner)
            }
            _ => Err(self.error("a formula")),
        }
    }
}

/// Parses surface syntax into a primitive-only formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        open: Vec::new(),
    };
    let f = parser.iff()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error("an operator or end of input"));
    }
    Ok(f)
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

// ---------------------------------------------------------------------------
// Templates

/// Metavariable assignment produced by matching and consumed by instantiation.
pub type Binding = BTreeMap<String, Formula>;

/// A formula with schematic holes. Metavariables live in their own
/// namespace, so `Meta("p")` and `Prop("p")` never collide.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Template {
    Bottom,
    Prop(String),
    Meta(String),
    Not(Box<Template>),
    StrongConj(Box<Template>, Box<Template>),
    Implies(Box<Template>, Box<Template>),
}

impl Template {
    pub fn meta(name: impl Into<String>) -> Template {
        Template::Meta(name.into())
    }

    /// Reads every proposition of `f` as a metavariable of the same name.
    pub fn schematic(f: &Formula) -> Template {
        match f {
            Formula::Bottom => Template::Bottom,
            Formula::Prop(p) => Template::Meta(p.clone()),
            Formula::Not(a) => Template::Not(Box::new(Template::schematic(a))),
            Formula::StrongConj(a, b) => Template::StrongConj(
                Box::new(Template::schematic(a)),
                Box::new(Template::schematic(b)),
            ),
            Formula::Implies(a, b) => Template::Implies(
                Box::new(Template::schematic(a)),
                Box::new(Template::schematic(b)),
            ),
        }
    }

    /// Parses surface syntax, treating every identifier as a metavariable.
    pub fn parse_schematic(text: &str) -> Result<Template, ParseError> {
        parse(text).map(|f| Template::schematic(&f))
    }

    pub fn metavars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_metavars(&mut out);
        out
    }

    fn collect_metavars(&self, out: &mut BTreeSet<String>) {
        match self {
            Template::Bottom | Template::Prop(_) => {}
            Template::Meta(m) => {
                out.insert(m.clone());
            }
            Template::Not(a) => a.collect_metavars(out),
            Template::StrongConj(a, b) | Template::Implies(a, b) => {
                a.collect_metavars(out);
                b.collect_metavars(out);
            }
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Metavariables print as `?name` to keep the namespaces apart.
        fn go(t: &Template, ctx: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Template::Bottom => out.write_str("0"),
                Template::Prop(p) => out.write_str(p),
                Template::Meta(m) => write!(out, "?{m}"),
                Template::Not(a) => {
                    out.write_str("!")?;
                    go(a, PREC_UNARY, out)
                }
                Template::StrongConj(a, b) => {
                    if ctx > PREC_CONJ {
                        out.write_str("(")?;
                    }
                    go(a, PREC_CONJ, out)?;
                    out.write_str(" & ")?;
                    go(b, PREC_UNARY, out)?;
                    if ctx > PREC_CONJ {
                        out.write_str(")")?;
                    }
                    Ok(())
                }
                Template::Implies(a, b) => {
                    if ctx > PREC_IMPLIES {
                        out.write_str("(")?;
                    }
                    go(a, PREC_CONJ, out)?;
                    out.write_str(" -> ")?;
                    go(b, PREC_IMPLIES, out)?;
                    if ctx > PREC_IMPLIES {
                        out.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, PREC_IMPLIES, f)
    }
}

/// Structural matching of a ground formula against a template.
///
/// Repeated metavariables must match equal subformulas. Note that
/// `match_template(t, instantiate(t, b))` recovers `b` only when the
/// template has no repeated metavariable bound to colliding values; when
/// two distinct metavariables are bound to equal formulas the recovered
/// binding is still the same map, since matching records what each hole
/// holds, but different templates may then coincide on the instance.
pub fn match_template(t: &Template, f: &Formula) -> Option<Binding> {
    let mut binding = Binding::new();
    if match_into(t, f, &mut binding) {
        Some(binding)
    } else {
        None
    }
}

fn match_into(t: &Template, f: &Formula, b: &mut Binding) -> bool {
    match (t, f) {
        (Template::Bottom, Formula::Bottom) => true,
        (Template::Prop(x), Formula::Prop(y)) => x == y,
        (Template::Meta(m), _) => match b.get(m) {
            Some(bound) => bound == f,
            None => {
                b.insert(m.clone(), f.clone());
                true
            }
        },
        (Template::Not(ta), Formula::Not(fa)) => match_into(ta, fa, b),
        (Template::StrongConj(ta, tb), Formula::StrongConj(fa, fb))
        | (Template::Implies(ta, tb), Formula::Implies(fa, fb)) => {
            match_into(ta, fa, b) && match_into(tb, fb, b)
        }
        _ => false,
    }
}

/// Replaces every metavariable of `t` by its bound formula.
pub fn instantiate(t: &Template, b: &Binding) -> Result<Formula, FormulaError> {
    Ok(match t {
        Template::Bottom => Formula::Bottom,
        Template::Prop(p) => Formula::Prop(p.clone()),
        Template::Meta(m) => b
            .get(m)
            .cloned()
            .ok_or_else(|| FormulaError::MissingBinding(m.clone()))?,
        Template::Not(a) => Formula::not(instantiate(a, b)?),
        Template::StrongConj(x, y) => Formula::conj(instantiate(x, b)?, instantiate(y, b)?),
        Template::Implies(x, y) => Formula::implies(instantiate(x, b)?, instantiate(y, b)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::prop("p")
    }
    fn q() -> Formula {
        Formula::prop("q")
    }

    #[test]
    fn parses_implication_chain() {
        assert_eq!(
            parse("p -> (q -> p)").unwrap(),
            Formula::implies(p(), Formula::implies(q(), p()))
        );
        assert_eq!(
            parse("p -> q -> p").unwrap(),
            parse("p -> (q -> p)").unwrap()
        );
    }

    #[test]
    fn expands_strong_disjunction() {
        assert_eq!(
            parse("p (+) q").unwrap(),
            Formula::implies(Formula::not(p()), q())
        );
    }

    #[test]
    fn expands_weak_connectives() {
        let ab = Formula::implies(p(), q());
        assert_eq!(
            parse("p /\\ q").unwrap(),
            Formula::conj(p(), ab.clone())
        );
        let left = Formula::implies(ab, q());
        let right = Formula::implies(Formula::implies(q(), p()), p());
        let expected = Formula::conj(left.clone(), Formula::implies(left, right));
        assert_eq!(parse("p \\/ q").unwrap(), expected);
        assert_eq!(
            parse("p <-> q").unwrap(),
            Formula::conj(Formula::implies(p(), q()), Formula::implies(q(), p()))
        );
    }

    #[test]
    fn precedence_ladder() {
        // ! binds tighter than &, & tighter than (+), and so on down to <->.
        assert_eq!(parse("!p & q").unwrap(), Formula::conj(Formula::not(p()), q()));
        assert_eq!(
            parse("p & q (+) p").unwrap(),
            Formula::strong_disj(Formula::conj(p(), q()), p())
        );
        assert_eq!(
            parse("p (+) q /\\ p").unwrap(),
            Formula::weak_conj(Formula::strong_disj(p(), q()), p())
        );
        assert_eq!(
            parse("p -> q <-> q").unwrap(),
            Formula::iff(Formula::implies(p(), q()), q())
        );
        assert_eq!(parse("p & q & p").unwrap(), Formula::conj(Formula::conj(p(), q()), p()));
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(parse("¬⊥ → p").unwrap(), parse("!0 -> p").unwrap());
        assert_eq!(parse("p ⊻ q").unwrap(), parse("p (+) q").unwrap());
        assert_eq!(parse("p ↔ q").unwrap(), parse("p <-> q").unwrap());
    }

    #[test]
    fn incomplete_input_reports_end_offset() {
        let err = parse("p ->").unwrap_err();
        assert_eq!(err.offset(), 4);
        assert!(matches!(err, ParseError::UnexpectedEnd { .. }));
    }

    #[test]
    fn parenthesis_errors() {
        assert_eq!(parse("(p & q").unwrap_err(), ParseError::Unbalanced { offset: 0 });
        assert_eq!(parse("p & q)").unwrap_err(), ParseError::Unbalanced { offset: 5 });
        assert_eq!(parse("").unwrap_err().offset(), 0);
    }

    #[test]
    fn unknown_tokens() {
        assert!(matches!(
            parse("p $ q").unwrap_err(),
            ParseError::UnknownToken { offset: 2, .. }
        ));
        assert!(matches!(
            parse("p & 12").unwrap_err(),
            ParseError::UnknownToken { offset: 4, .. }
        ));
        assert!(matches!(parse("p - q").unwrap_err(), ParseError::UnknownToken { .. }));
    }

    #[test]
    fn prints_minimal_parentheses() {
        assert_eq!(print(&Formula::implies(p(), q())), "p -> q");
        assert_eq!(print(&Formula::not(Formula::Bottom)), "!0");
        assert_eq!(print(&Formula::conj(p(), p())), "p & p");
        assert_eq!(
            print(&Formula::implies(Formula::implies(p(), q()), p())),
            "(p -> q) -> p"
        );
        assert_eq!(
            print(&Formula::conj(p(), Formula::conj(q(), p()))),
            "p & (q & p)"
        );
        assert_eq!(print(&Formula::not(Formula::conj(p(), q()))), "!(p & q)");
    }

    #[test]
    fn matching_and_instantiation() {
        let x = Template::meta("X");
        let f = parse("p & !q").unwrap();
        let b = match_template(&x, &f).unwrap();
        assert_eq!(b.get("X"), Some(&f));

        let a2 = Template::parse_schematic("(phi & psi) -> phi").unwrap();
        let b = match_template(&a2, &parse("(p & q) -> p").unwrap()).unwrap();
        assert_eq!(b["phi"], p());
        assert_eq!(b["psi"], q());
        assert!(match_template(&a2, &parse("(p & q) -> q").unwrap()).is_none());

        let a7 = Template::parse_schematic("0 -> phi").unwrap();
        let b: Binding = [("phi".to_string(), q())].into_iter().collect();
        assert_eq!(
            instantiate(&a7, &b).unwrap(),
            Formula::implies(Formula::Bottom, q())
        );

        let b: Binding = [("X".to_string(), Formula::Bottom)].into_iter().collect();
        assert_eq!(instantiate(&x, &b).unwrap(), Formula::Bottom);

        let l1 = Template::parse_schematic("phi -> (psi -> phi)").unwrap();
        let b: Binding = [("phi".to_string(), p()), ("psi".to_string(), p())]
            .into_iter()
            .collect();
        assert_eq!(instantiate(&l1, &b).unwrap(), parse("p -> (p -> p)").unwrap());
    }

    #[test]
    fn instantiation_requires_total_binding() {
        let l1 = Template::parse_schematic("phi -> (psi -> phi)").unwrap();
        let b: Binding = [("phi".to_string(), p())].into_iter().collect();
        assert_eq!(
            instantiate(&l1, &b).unwrap_err(),
            FormulaError::MissingBinding("psi".into())
        );
    }

    #[test]
    fn template_props_are_not_metavars() {
        let mut t = Template::parse_schematic("phi -> phi").unwrap();
        if let Template::Implies(_, rhs) = &mut t {
            **rhs = Template::Prop("phi".into());
        }
        assert!(match_template(&t, &parse("phi -> phi").unwrap()).is_some());
        assert!(match_template(&t, &parse("q -> q").unwrap()).is_none());
        assert_eq!(t.to_string(), "?phi -> phi");
    }

    #[test]
    fn repeated_metavars_must_agree() {
        let t = Template::parse_schematic("phi -> phi").unwrap();
        assert!(match_template(&t, &parse("p -> p").unwrap()).is_some());
        assert!(match_template(&t, &parse("p -> q").unwrap()).is_none());
    }

    #[test]
    fn powers() {
        assert_eq!(power(&p(), 1).unwrap(), p());
        assert_eq!(power(&p(), 2).unwrap(), Formula::conj(p(), p()));
        assert_eq!(
            power(&p(), 3).unwrap(),
            Formula::conj(Formula::conj(p(), p()), p())
        );
        assert_eq!(power(&p(), 0).unwrap_err(), FormulaError::ZeroPower);
    }

    #[test]
    fn structural_utilities() {
        let f = parse("p -> (q -> p)").unwrap();
        assert_eq!(
            f.variables().into_iter().collect::<Vec<_>>(),
            vec!["p".to_string(), "q".to_string()]
        );
        assert_eq!(p().size(), 1);
        assert_eq!(f.size(), 5);
        assert_eq!(Formula::Bottom.variables().len(), 0);
        let subs = Formula::not(p()).subformulas();
        assert_eq!(subs.len(), 2);
        assert!(subs.contains(&p()) && subs.contains(&Formula::not(p())));
    }

    #[test]
    fn size_enumeration_counts() {
        // Leaves {0, p, q}: 3, 3, 21, 57, 327 formulas of sizes 1..=5.
        let atoms = [Formula::Bottom, p(), q()];
        let all = enumerate_up_to_size(&atoms, 5);
        assert_eq!(all.len(), 3 + 3 + 21 + 57 + 327);
        let distinct: BTreeSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.windows(2).all(|w| w[0].size() <= w[1].size()));
    }

    #[test]
    fn conj_all_is_left_associated() {
        assert_eq!(Formula::conj_all(vec![]), Formula::top());
        assert_eq!(
            Formula::conj_all(vec![p(), q(), p()]),
            parse("p & q & p").unwrap()
        );
    }
}
