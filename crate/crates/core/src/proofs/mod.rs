//! Hilbert-style proofs with modus ponens as the only rule.

mod build;
mod derivations;
mod text;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::decision::{entails, is_tautology, Verdict};
use crate::formula::{instantiate, match_template, Binding, Formula, FormulaError, Template};

pub use build::{contraposition_step, derive_conjunction, ProofBuilder};
pub use derivations::{
    fixture_suite, inconsistency_chain, lemma3_ii3, theorem3_chain, Fixture,
};
pub use text::{parse_proof, ProofFileError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    L1,
    L2,
    L3,
    L4,
    Dne,
    L5,
    L6,
    L7,
    L8,
    L9,
    L10,
    L11,
    L12,
    L13,
    L14,
    L15,
    IffElimL,
    IffElimR,
}

use SchemeId::*;

impl SchemeId {
    pub const ALL: [SchemeId; 25] = [
        A1, A2, A3, A4, A5, A6, A7, L1, L2, L3, L4, Dne, L5, L6, L7, L8, L9, L10, L11, L12, L13,
        L14, L15, IffElimL, IffElimR,
    ];

    /// The primitive axioms; everything else is a cited lemma.
    pub fn is_axiom(self) -> bool {
        matches!(self, A1 | A2 | A3 | A4 | A5 | A6 | A7 | L1 | L2 | L3 | L4 | Dne)
    }

    pub fn name(self) -> &'static str {
        match self {
            A1 => "A1",
            A2 => "A2",
            A3 => "A3",
            A4 => "A4",
            A5 => "A5",
            A6 => "A6",
            A7 => "A7",
            L1 => "L1",
            L2 => "L2",
            L3 => "L3",
            L4 => "L4",
            Dne => "DNE",
            L5 => "L5",
            L6 => "L6",
            L7 => "L7",
            L8 => "L8",
            L9 => "L9",
            L10 => "L10",
            L11 => "L11",
            L12 => "L12",
            L13 => "L13",
            L14 => "L14",
            L15 => "L15",
            IffElimL => "IFF-ELIM-L",
            IffElimR => "IFF-ELIM-R",
        }
    }

    /// Accepts `L5` and `Ł5` alike.
    pub fn from_name(name: &str) -> Option<SchemeId> {
        let name = name.replace('Ł', "L");
        SchemeId::ALL.into_iter().find(|id| id.name() == name)
    }

    fn source(self) -> &'static str {
        match self {
            A1 | L2 => "(phi -> psi) -> ((psi -> chi) -> (phi -> chi))",
            A2 => "(phi & psi) -> phi",
            A3 => "(phi & psi) -> (psi & phi)",
            A4 => "(phi & (phi -> psi)) -> (psi & (psi -> phi))",
            A5 => "(phi -> (psi -> chi)) <-> ((phi & psi) -> chi)",
            A6 => "((phi -> psi) -> chi) -> (((psi -> phi) -> chi) -> chi)",
            A7 => "0 -> phi",
            L1 => "phi -> (psi -> phi)",
            L3 => "(!phi -> !psi) -> (psi -> phi)",
            L4 => "((phi -> psi) -> psi) -> ((psi -> phi) -> phi)",
            Dne => "!!phi -> phi",
            L5 => "!(phi & psi) <-> (!phi (+) !psi)",
            L6 => "!(phi (+) psi) <-> (!phi & !psi)",
            L7 => "(phi (+) psi) <-> (!phi -> psi)",
            L8 => "!!phi <-> phi",
            L9 => "(phi -> 0) <-> !phi",
            L10 => "(phi & (phi -> psi)) -> psi",
            L11 => "((phi1 -> psi1) & (phi2 -> psi2)) -> ((phi1 & phi2) -> (psi1 & psi2))",
            L12 => "phi -> phi (+) psi",
            L13 => "(phi <-> psi) -> ((phi -> chi) <-> (psi -> chi))",
            L14 => "(phi <-> psi) -> ((chi -> phi) <-> (chi -> psi))",
            L15 => "(phi <-> psi) -> ((phi & chi) <-> (psi & chi))",
            IffElimL => "(phi <-> psi) -> (phi -> psi)",
            IffElimR => "(phi <-> psi) -> (psi -> phi)",
        }
    }

    pub fn template(self) -> &'static Template {
        static TEMPLATES: OnceLock<Vec<Template>> = OnceLock::new();
        let all = TEMPLATES.get_or_init(|| {
            SchemeId::ALL
                .iter()
                .map(|id| Template::parse_schematic(id.source()).expect("registry template parses"))
                .collect()
        });
        &all[self as usize]
    }

    /// Instance with the metavariables replaced by `p`, `q`, `r`, ...
    pub fn fresh_instance(self) -> Formula {
        const ORDER: [&str; 7] = ["phi", "psi", "chi", "phi1", "psi1", "phi2", "psi2"];
        const FRESH: [&str; 7] = ["p", "q", "r", "s", "t", "u", "v"];
        let metas = self.template().metavars();
        let b: Binding = ORDER
            .iter()
            .filter(|m| metas.contains(**m))
            .zip(FRESH)
            .map(|(m, p)| (m.to_string(), Formula::prop(p)))
            .collect();
        instantiate(self.template(), &b).expect("binding is total")
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Hyp,
    /// An empty binding asks the checker to infer it by matching.
    Axiom(SchemeId, Binding),
    Lemma(SchemeId, Binding),
    /// 1-based line numbers of the premise `X` and the implication `X → this`.
    Mp(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub hypotheses: Vec<Formula>,
    pub lines: Vec<Line>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

/// A checked proof: what it proves and which derived schemes it leaned on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checked {
    pub conclusion: Formula,
    pub cited: BTreeSet<SchemeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Reason {
    #[error("proof has no lines")]
    Empty,
    #[error("formula is not among the hypotheses")]
    NotAHypothesis,
    #[error("{0} is a derived scheme; cite it as a lemma")]
    NotAnAxiom(SchemeId),
    #[error("{0} is an axiom; cite it as an axiom")]
    NotALemma(SchemeId),
    #[error("formula is not an instance of {0}")]
    NoMatch(SchemeId),
    #[error("binding names `{1}`, which {0} does not use")]
    UnknownMetavar(SchemeId, String),
    #[error(transparent)]
    Binding(#[from] FormulaError),
    #[error("mp cites line {0}, which does not precede this line")]
    ForwardReference(usize),
    #[error("line {implication} is not an implication from line {premise} to this line")]
    ShapeMismatch { premise: usize, implication: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct ProofError {
    /// 1-based; 0 refers to the proof as a whole.
    pub line: usize,
    pub reason: Reason,
}

fn check_instance(id: SchemeId, b: &Binding, f: &Formula) -> Result<(), Reason> {
    let t = id.template();
    if b.is_empty() {
        return match_template(t, f).map(|_| ()).ok_or(Reason::NoMatch(id));
    }
    let metas = t.metavars();
    if let Some(extra) = b.keys().find(|k| !metas.contains(*k)) {
        return Err(Reason::UnknownMetavar(id, extra.clone()));
    }
    if &instantiate(t, b)? == f {
        Ok(())
    } else {
        Err(Reason::NoMatch(id))
    }
}

fn check_line(p: &Proof, k: usize) -> Result<Option<SchemeId>, Reason> {
    let line = &p.lines[k - 1];
    match &line.just {
        Justification::Hyp => {
            if p.hypotheses.contains(&line.formula) {
                Ok(None)
            } else {
                Err(Reason::NotAHypothesis)
            }
        }
        Justification::Axiom(id, b) => {
            if !id.is_axiom() {
                return Err(Reason::NotAnAxiom(*id));
            }
            check_instance(*id, b, &line.formula).map(|_| None)
        }
        Justification::Lemma(id, b) => {
            if id.is_axiom() {
                return Err(Reason::NotALemma(*id));
            }
            check_instance(*id, b, &line.formula).map(|_| Some(*id))
        }
        Justification::Mp(i, j) => {
            for &r in [i, j] {
                if r == 0 || r >= k {
                    return Err(Reason::ForwardReference(r));
                }
            }
            let premise = &p.lines[i - 1].formula;
            match &p.lines[j - 1].formula {
                Formula::Implies(x, y) if **x == *premise && **y == line.formula => Ok(None),
                _ => Err(Reason::ShapeMismatch {
                    premise: *i,
                    implication: *j,
                }),
            }
        }
    }
}

/// Checks every line; the first failing line is reported.
pub fn check_proof(p: &Proof) -> Result<Checked, ProofError> {
    if p.lines.is_empty() {
        return Err(ProofError {
            line: 0,
            reason: Reason::Empty,
        });
    }
    let mut cited = BTreeSet::new();
    for k in 1..=p.lines.len() {
        match check_line(p, k) {
            Ok(Some(id)) => {
                cited.insert(id);
            }
            Ok(None) => {}
            Err(reason) => return Err(ProofError { line: k, reason }),
        }
    }
    Ok(Checked {
        conclusion: p.lines[p.lines.len() - 1].formula.clone(),
        cited,
    })
}

/// True when every valuation giving all hypotheses value 1 gives the
/// conclusion value 1.
pub fn semantically_sound(p: &Proof) -> bool {
    match p.conclusion() {
        Some(c) => entails(&p.hypotheses, c),
        None => false,
    }
}

/// Result of checking one scheme's fresh instance with the decision procedure.
#[derive(Clone, Debug)]
pub struct SchemeReport {
    pub id: SchemeId,
    pub instance: Formula,
    pub verdict: Verdict,
}

/// Decides a fresh instance of every registered scheme.
pub fn verify_registry() -> Vec<SchemeReport> {
    SchemeId::ALL
        .iter()
        .map(|&id| {
            let instance = id.fresh_instance();
            let verdict = is_tautology(&instance);
            SchemeReport {
                id,
                instance,
                verdict,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn bind(pairs: &[(&str, &str)]) -> Binding {
        pairs.iter().map(|(k, v)| (k.to_string(), f(v))).collect()
    }

    #[test]
    fn names_round_trip() {
        for id in SchemeId::ALL {
            assert_eq!(SchemeId::from_name(id.name()), Some(id));
        }
        assert_eq!(SchemeId::from_name("Ł8"), Some(L8));
        assert_eq!(SchemeId::from_name("A8"), None);
    }

    #[test]
    fn single_axiom_line() {
        let p = Proof {
            hypotheses: vec![],
            lines: vec![Line {
                formula: f("0 -> p"),
                just: Justification::Axiom(A7, bind(&[("phi", "p")])),
            }],
        };
        let ok = check_proof(&p).unwrap();
        assert_eq!(ok.conclusion, f("0 -> p"));
        assert!(ok.cited.is_empty());
    }

    #[test]
    fn missing_hypothesis_fails_at_line_one() {
        let p = Proof {
            hypotheses: vec![],
            lines: vec![Line {
                formula: f("p"),
                just: Justification::Hyp,
            }],
        };
        let err = check_proof(&p).unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.reason, Reason::NotAHypothesis);
    }

    #[test]
    fn lemma_lines_are_cited() {
        let p = Proof {
            hypotheses: vec![],
            lines: vec![Line {
                formula: f("!!p <-> p"),
                just: Justification::Lemma(L8, Binding::new()),
            }],
        };
        assert_eq!(check_proof(&p).unwrap().cited, [L8].into());
        let wrong_kind = Proof {
            lines: vec![Line {
                formula: f("!!p <-> p"),
                just: Justification::Axiom(L8, Binding::new()),
            }],
            ..p
        };
        assert_eq!(check_proof(&wrong_kind).unwrap_err().reason, Reason::NotAnAxiom(L8));
    }

    #[test]
    fn mp_order_and_shape() {
        let hyps = vec![f("p"), f("p -> q")];
        let line = |s: &str, just| Line {
            formula: f(s),
            just,
        };
        let good = Proof {
            hypotheses: hyps.clone(),
            lines: vec![
                line("p", Justification::Hyp),
                line("p -> q", Justification::Hyp),
                line("q", Justification::Mp(1, 2)),
            ],
        };
        assert_eq!(check_proof(&good).unwrap().conclusion, f("q"));

        let mut swapped = good.clone();
        swapped.lines[2].just = Justification::Mp(2, 1);
        let err = check_proof(&swapped).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(matches!(err.reason, Reason::ShapeMismatch { .. }));

        let mut forward = good;
        forward.lines[2].just = Justification::Mp(1, 3);
        assert_eq!(check_proof(&forward).unwrap_err().reason, Reason::ForwardReference(3));
    }

    #[test]
    fn binding_must_fit() {
        let mk = |b| Proof {
            hypotheses: vec![],
            lines: vec![Line {
                formula: f("(p & q) -> p"),
                just: Justification::Axiom(A2, b),
            }],
        };
        assert!(check_proof(&mk(bind(&[("phi", "p"), ("psi", "q")]))).is_ok());
        assert_eq!(
            check_proof(&mk(bind(&[("phi", "q"), ("psi", "p")]))).unwrap_err().reason,
            Reason::NoMatch(A2)
        );
        assert!(matches!(
            check_proof(&mk(bind(&[("phi", "p")]))).unwrap_err().reason,
            Reason::Binding(FormulaError::MissingBinding(_))
        ));
        assert!(matches!(
            check_proof(&mk(bind(&[("phi", "p"), ("psi", "q"), ("chi", "r")]))).unwrap_err().reason,
            Reason::UnknownMetavar(A2, _)
        ));
    }

    #[test]
    fn registry_is_valid() {
        for r in verify_registry() {
            assert_eq!(r.verdict, Verdict::Tautology, "{} gives {}", r.id, r.instance);
        }
    }

    #[test]
    fn fresh_instances() {
        assert_eq!(A1.fresh_instance(), f("(p -> q) -> ((q -> r) -> (p -> r))"));
        assert_eq!(L11.fresh_instance(), f("((p -> q) & (r -> s)) -> ((p & r) -> (q & s))"));
    }
}
