//! Infinite-valued Łukasiewicz propositional logic.
//!
//! Formulas over ⊥, propositions, ¬, & and → are evaluated exactly over
//! rationals in [0,1]. On top of that sit a complete decision procedure, a
//! Hilbert-style proof checker and tools for building consistent extensions
//! of finite formula sets.

pub mod decision;
pub mod formula;
pub mod gen;
pub mod maximal;
pub mod proofs;
pub mod semantics;

pub use decision::{is_tautology, max_value, min_value, positively_satisfiable, sat_at_one, Verdict};
pub use formula::{parse, Formula, ParseError};
pub use semantics::{eval, Rat, Valuation};
