//! Programmatic proof construction.
//!
//! Every method appends lines and returns the 1-based number of the line
//! holding its result. The derived steps (syllogism, biconditional
//! handling, replacement under a context) expand into plain axiom, lemma
//! and MP lines, so the output is always checkable by `check_proof`.
//! Misuse (asking for MP on lines of the wrong shape) is a programming
//! error and panics.

use super::{Justification, Line, Proof, SchemeId};
use crate::formula::{instantiate, Binding, Formula};

use SchemeId::*;

#[derive(Clone, Debug, Default)]
pub struct ProofBuilder {
    proof: Proof,
}

/// Splits `(a → b) & (b → a)` into `(a, b)`.
fn split_iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::StrongConj(l, r) => match (&**l, &**r) {
            (Formula::Implies(a, b), Formula::Implies(b2, a2)) if a == a2 && b == b2 => Some((a, b)),
            _ => None,
        },
        _ => None,
    }
}

impl ProofBuilder {
    pub fn new() -> ProofBuilder {
        ProofBuilder::default()
    }

    pub fn finish(self) -> Proof {
        self.proof
    }

    pub fn len(&self) -> usize {
        self.proof.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proof.lines.is_empty()
    }

    pub fn formula(&self, line: usize) -> &Formula {
        &self.proof.lines[line - 1].formula
    }

    fn push(&mut self, formula: Formula, just: Justification) -> usize {
        self.proof.lines.push(Line { formula, just });
        self.proof.lines.len()
    }

    /// Cites `f` as a hypothesis, registering it if new.
    pub fn assume(&mut self, f: Formula) -> usize {
        if !self.proof.hypotheses.contains(&f) {
            self.proof.hypotheses.push(f.clone());
        }
        self.push(f, Justification::Hyp)
    }

    fn scheme(&mut self, id: SchemeId, binding: &[(&str, &Formula)]) -> usize {
        let b: Binding = binding
            .iter()
            .map(|(k, v)| (k.to_string(), (*v).clone()))
            .collect();
        let f = instantiate(id.template(), &b).expect("builder supplies every metavariable");
        let just = if id.is_axiom() {
            Justification::Axiom(id, b)
        } else {
            Justification::Lemma(id, b)
        };
        self.push(f, just)
    }

    pub fn axiom(&mut self, id: SchemeId, binding: &[(&str, &Formula)]) -> usize {
        assert!(id.is_axiom(), "{id} is not an axiom");
        self.scheme(id, binding)
    }

    pub fn lemma(&mut self, id: SchemeId, binding: &[(&str, &Formula)]) -> usize {
        assert!(!id.is_axiom(), "{id} is not a lemma");
        self.scheme(id, binding)
    }

    /// From `x` (line `premise`) and `x → y` (line `implication`), infer `y`.
    pub fn mp(&mut self, premise: usize, implication: usize) -> usize {
        let y = match self.formula(implication) {
            Formula::Implies(x, y) if **x == *self.formula(premise) => (**y).clone(),
            other => panic!("line {implication} ({other}) does not fit line {premise}"),
        };
        self.push(y, Justification::Mp(premise, implication))
    }

    fn implication_parts(&self, line: usize) -> (Formula, Formula) {
        match self.formula(line) {
            Formula::Implies(a, b) => ((**a).clone(), (**b).clone()),
            other => panic!("line {line} ({other}) is not an implication"),
        }
    }

    fn iff_parts(&self, line: usize) -> (Formula, Formula) {
        let f = self.formula(line);
        let (a, b) = split_iff(f).unwrap_or_else(|| panic!("line {line} ({f}) is not a biconditional"));
        (a.clone(), b.clone())
    }

    /// From `a → b` and `b → c`, infer `a → c` (A1 twice MP).
    pub fn syllogism(&mut self, ab: usize, bc: usize) -> usize {
        let (a, b) = self.implication_parts(ab);
        let (b2, c) = self.implication_parts(bc);
        assert_eq!(b, b2, "syllogism middle terms differ");
        let a1 = self.axiom(A1, &[("phi", &a), ("psi", &b), ("chi", &c)]);
        let step = self.mp(ab, a1);
        self.mp(bc, step)
    }

    /// From `a ↔ b`, infer `a → b`.
    pub fn iff_l(&mut self, line: usize) -> usize {
        let (a, b) = self.iff_parts(line);
        let elim = self.lemma(IffElimL, &[("phi", &a), ("psi", &b)]);
        self.mp(line, elim)
    }

    /// From `a ↔ b`, infer `b → a`.
    pub fn iff_r(&mut self, line: usize) -> usize {
        let (a, b) = self.iff_parts(line);
        let elim = self.lemma(IffElimR, &[("phi", &a), ("psi", &b)]);
        self.mp(line, elim)
    }

    /// From `x` and `y`, infer `x & y`. Uses the A3/A5 template:
    /// `(y & x) → (x & y)`, then `y → (x → x & y)` by A5, then MP twice.
    pub fn conj_intro(&mut self, x_line: usize, y_line: usize) -> usize {
        let x = self.formula(x_line).clone();
        let y = self.formula(y_line).clone();
        let xy = Formula::conj(x.clone(), y.clone());
        let swap = self.axiom(A3, &[("phi", &y), ("psi", &x)]);
        let curry = self.axiom(A5, &[("phi", &y), ("psi", &x), ("chi", &xy)]);
        let back = self.iff_r(curry);
        let curried = self.mp(swap, back);
        let partial = self.mp(y_line, curried);
        self.mp(x_line, partial)
    }

    /// From `a ↔ b`, infer `b ↔ a` (A3 and MP).
    pub fn iff_sym(&mut self, line: usize) -> usize {
        let (a, b) = self.iff_parts(line);
        let ab = Formula::implies(a.clone(), b.clone());
        let ba = Formula::implies(b, a);
        let swap = self.axiom(A3, &[("phi", &ab), ("psi", &ba)]);
        self.mp(line, swap)
    }

    /// From `a ↔ b` and `b ↔ c`, infer `a ↔ c`.
    pub fn iff_trans(&mut self, ab: usize, bc: usize) -> usize {
        let a_b = self.iff_l(ab);
        let b_c = self.iff_l(bc);
        let a_c = self.syllogism(a_b, b_c);
        let c_b = self.iff_r(bc);
        let b_a = self.iff_r(ab);
        let c_a = self.syllogism(c_b, b_a);
        self.conj_intro(a_c, c_a)
    }

    /// From `a` and `a ↔ b`, infer `b`.
    pub fn mp_iff(&mut self, a_line: usize, iff: usize) -> usize {
        let imp = self.iff_l(iff);
        self.mp(a_line, imp)
    }

    /// `(x & y) ↔ (y & x)` from two A3 instances.
    fn conj_swap(&mut self, x: &Formula, y: &Formula) -> usize {
        let there = self.axiom(A3, &[("phi", x), ("psi", y)]);
        let back = self.axiom(A3, &[("phi", y), ("psi", x)]);
        self.conj_intro(there, back)
    }

    /// From `x ↔ y`, infer `¬x ↔ ¬y` via L13 with ⊥ and L9 on both sides.
    fn not_congruence(&mut self, xy: usize) -> usize {
        let (x, y) = self.iff_parts(xy);
        let bot = Formula::Bottom;
        let l13 = self.lemma(L13, &[("phi", &x), ("psi", &y), ("chi", &bot)]);
        let via_bottom = self.mp(xy, l13);
        let l9x = self.lemma(L9, &[("phi", &x)]);
        let nx = self.iff_sym(l9x);
        let left = self.iff_trans(nx, via_bottom);
        let l9y = self.lemma(L9, &[("phi", &y)]);
        self.iff_trans(left, l9y)
    }

    /// Derives `lhs ↔ rhs`, where `rhs` is `lhs` with some occurrences of
    /// `a` replaced by `b` and `iff` is a line holding `a ↔ b`. Returns
    /// `None` when the two sides are identical.
    pub fn congruence(
        &mut self,
        lhs: &Formula,
        rhs: &Formula,
        a: &Formula,
        b: &Formula,
        iff: usize,
    ) -> Option<usize> {
        if lhs == rhs {
            return None;
        }
        if lhs == a && rhs == b {
            return Some(iff);
        }
        match (lhs, rhs) {
            (Formula::Not(x), Formula::Not(y)) => {
                let inner = self.congruence(x, y, a, b, iff)?;
                Some(self.not_congruence(inner))
            }
            (Formula::Implies(x1, y1), Formula::Implies(x2, y2)) => {
                let left = self.congruence(x1, x2, a, b, iff).map(|xs| {
                    let l13 = self.lemma(L13, &[("phi", x1), ("psi", x2), ("chi", y1)]);
                    self.mp(xs, l13)
                });
                let right = self.congruence(y1, y2, a, b, iff).map(|ys| {
                    let l14 = self.lemma(L14, &[("phi", y1), ("psi", y2), ("chi", x2)]);
                    self.mp(ys, l14)
                });
                self.chain(left, right)
            }
            (Formula::StrongConj(x1, y1), Formula::StrongConj(x2, y2)) => {
                let left = self.congruence(x1, x2, a, b, iff).map(|xs| {
                    let l15 = self.lemma(L15, &[("phi", x1), ("psi", x2), ("chi", y1)]);
                    self.mp(xs, l15)
                });
                let right = self.congruence(y1, y2, a, b, iff).map(|ys| {
                    // x2 & y1 ↔ y1 & x2 ↔ y2 & x2 ↔ x2 & y2
                    let s1 = self.conj_swap(x2, y1);
                    let l15 = self.lemma(L15, &[("phi", y1), ("psi", y2), ("chi", x2)]);
                    let mid = self.mp(ys, l15);
                    let s2 = self.conj_swap(y2, x2);
                    let t = self.iff_trans(s1, mid);
                    self.iff_trans(t, s2)
                });
                self.chain(left, right)
            }
            _ => panic!("`{rhs}` is not `{lhs}` with `{a}` replaced by `{b}`"),
        }
    }

    fn chain(&mut self, first: Option<usize>, second: Option<usize>) -> Option<usize> {
        match (first, second) {
            (Some(f), Some(s)) => Some(self.iff_trans(f, s)),
            (f, s) => f.or(s),
        }
    }

    /// From `line`, infer `target`, which differs from it by replacing
    /// occurrences of `a` with `b` given `a ↔ b` at `iff`.
    pub fn rewrite(&mut self, line: usize, target: &Formula, a: &Formula, b: &Formula, iff: usize) -> usize {
        let lhs = self.formula(line).clone();
        match self.congruence(&lhs, target, a, b, iff) {
            None => line,
            Some(c) => self.mp_iff(line, c),
        }
    }

    /// Line numbers of `¬φ ↔ ⊥`, given a line holding `φ`: L8 gives `¬¬φ`,
    /// L9 turns it into `¬φ → ⊥`, and A7 supplies `⊥ → ¬φ`.
    pub fn negation_is_bottom(&mut self, phi_line: usize) -> usize {
        let phi = self.formula(phi_line).clone();
        let nphi = Formula::not(phi.clone());
        let l8 = self.lemma(L8, &[("phi", &phi)]);
        let intro = self.iff_r(l8);
        let nn = self.mp(phi_line, intro);
        let l9 = self.lemma(L9, &[("phi", &nphi)]);
        let to_bottom = self.iff_r(l9);
        let there = self.mp(nn, to_bottom);
        let back = self.axiom(A7, &[("phi", &nphi)]);
        self.conj_intro(there, back)
    }
}

/// Proof of `γ1 & ... & γn` (left-associated) from hypotheses `gamma`, by
/// repeating the A3/A5 template once per extra conjunct. Returns `None`
/// for an empty list.
pub fn derive_conjunction(gamma: &[Formula]) -> Option<Proof> {
    let (first, rest) = gamma.split_first()?;
    let mut b = ProofBuilder::new();
    for g in gamma {
        if !b.proof.hypotheses.contains(g) {
            b.proof.hypotheses.push(g.clone());
        }
    }
    if rest.is_empty() {
        b.push(first.clone(), Justification::Hyp);
        return Some(b.finish());
    }
    let mut acc: Option<usize> = None;
    let mut x = first.clone();
    for y in rest {
        let xy = Formula::conj(x.clone(), y.clone());
        let swap = b.axiom(A3, &[("phi", y), ("psi", &x)]);
        let curry = b.axiom(A5, &[("phi", y), ("psi", &x), ("chi", &xy)]);
        let back = b.iff_r(curry);
        let curried = b.mp(swap, back);
        let y_line = b.push(y.clone(), Justification::Hyp);
        let x_line = match acc {
            Some(l) => l,
            None => b.push(x.clone(), Justification::Hyp),
        };
        let partial = b.mp(y_line, curried);
        acc = Some(b.mp(x_line, partial));
        x = xy;
    }
    Some(b.finish())
}

/// Proof of `(a → b) → (¬b → ¬a)` from no hypotheses.
pub fn contraposition_step(a: &Formula, b: &Formula) -> Proof {
    let mut pb = ProofBuilder::new();
    let na = Formula::not(a.clone());
    let nb = Formula::not(b.clone());
    let nna = Formula::not(na.clone());
    let nnb = Formula::not(nb.clone());

    // (a → b) → (¬¬a → b)
    let dne = pb.axiom(Dne, &[("phi", a)]);
    let a1 = pb.axiom(A1, &[("phi", &nna), ("psi", a), ("chi", b)]);
    let weaken = pb.mp(dne, a1);

    // (¬¬a → b) → (¬¬a → ¬¬b)
    let l8 = pb.lemma(L8, &[("phi", b)]);
    let b_nnb = pb.iff_sym(l8);
    let l14 = pb.lemma(L14, &[("phi", b), ("psi", &nnb), ("chi", &nna)]);
    let lifted = pb.mp(b_nnb, l14);
    let strengthen = pb.iff_l(lifted);

    let both = pb.syllogism(weaken, strengthen);

    // (¬¬a → ¬¬b) → (¬b → ¬a)
    let l3 = pb.axiom(L3, &[("phi", &na), ("psi", &nb)]);
    pb.syllogism(both, l3);
    pb.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{is_tautology, Verdict};
    use crate::formula::parse;
    use crate::proofs::{check_proof, semantically_sound};

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn conjunction_of_one() {
        let p = derive_conjunction(&[f("p")]).unwrap();
        assert_eq!(p.lines.len(), 1);
        assert_eq!(check_proof(&p).unwrap().conclusion, f("p"));
        assert!(derive_conjunction(&[]).is_none());
    }

    #[test]
    fn conjunction_of_two_follows_template() {
        let p = derive_conjunction(&[f("p"), f("q")]).unwrap();
        let shown: Vec<String> = p.lines.iter().map(|l| l.formula.to_string()).collect();
        assert_eq!(shown[0], "q & p -> p & q");
        assert_eq!(shown[4], "q -> p -> p & q");
        assert_eq!(shown[5], "q");
        assert_eq!(shown[6], "p");
        assert_eq!(shown[7], "p -> p & q");
        assert_eq!(shown[8], "p & q");
        assert_eq!(check_proof(&p).unwrap().conclusion, f("p & q"));
    }

    #[test]
    fn conjunction_of_three() {
        let p = derive_conjunction(&[f("p"), f("q"), f("r")]).unwrap();
        assert_eq!(check_proof(&p).unwrap().conclusion, f("(p & q) & r"));
        assert!(semantically_sound(&p));
    }

    #[test]
    fn contraposition() {
        for (a, b) in [("p", "q"), ("p", "p"), ("0", "q"), ("p & q", "!r")] {
            let proof = contraposition_step(&f(a), &f(b));
            let ok = check_proof(&proof).unwrap();
            let expected = f(&format!("({a} -> {b}) -> (!({b}) -> !({a}))"));
            assert_eq!(ok.conclusion, expected);
            assert_eq!(is_tautology(&ok.conclusion), Verdict::Tautology);
        }
    }

    #[test]
    fn rewriting_under_context() {
        // from !!p & q -> r, replace !!p by p
        let mut b = ProofBuilder::new();
        let start = b.assume(f("!!p & q -> r"));
        let l8 = b.lemma(L8, &[("phi", &f("p"))]);
        let end = b.rewrite(start, &f("p & q -> r"), &f("!!p"), &f("p"), l8);
        assert_eq!(b.formula(end), &f("p & q -> r"));
        // replacement on the right of & and under negation
        let start = b.assume(f("!(q & !!p)"));
        let end = b.rewrite(start, &f("!(q & p)"), &f("!!p"), &f("p"), l8);
        assert_eq!(b.formula(end), &f("!(q & p)"));
        let proof = b.finish();
        check_proof(&proof).unwrap();
        assert!(semantically_sound(&proof));
    }

    #[test]
    fn negation_of_hypothesis_is_bottom() {
        let mut b = ProofBuilder::new();
        let r = b.assume(f("r"));
        let line = b.negation_is_bottom(r);
        assert_eq!(b.formula(line), &f("!r <-> 0"));
        check_proof(&b.finish()).unwrap();
    }
}
