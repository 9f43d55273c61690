//! Multi-step derivations used by the completeness argument, at two
//! conjuncts. Each records which proof line carries each numbered step of
//! the written derivation, since one written step ("by L8 and
//! replacement") usually expands to many checker lines.

use super::build::{derive_conjunction, ProofBuilder};
use super::{Proof, SchemeId};
use crate::formula::{power, Formula};

use SchemeId::*;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub proof: Proof,
    /// `(step label, 1-based line)` pairs.
    pub milestones: Vec<(String, usize)>,
}

fn neg(f: &Formula) -> Formula {
    Formula::not(f.clone())
}

fn and(a: &Formula, b: &Formula) -> Formula {
    Formula::conj(a.clone(), b.clone())
}

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::implies(a.clone(), b.clone())
}

fn ovee(a: &Formula, b: &Formula) -> Formula {
    Formula::strong_disj(a.clone(), b.clone())
}

/// Steps shared by every chain that starts from `¬((ψ1 & ψ2) & x)`:
/// (1) the hypothesis, (2) `¬ψ1 ⊻ ¬ψ2 ⊻ ¬x` by L5, (3) `¬(¬ψ1 ⊻ ¬ψ2) → ¬x`
/// by L7.
fn opening(b: &mut ProofBuilder, psi1: &Formula, psi2: &Formula, x: &Formula) -> [usize; 3] {
    let g = and(psi1, psi2);
    let start = b.assume(neg(&and(&g, x)));

    let split = b.lemma(L5, &[("phi", &g), ("psi", x)]);
    let outer = b.mp_iff(start, split);
    let inner = b.lemma(L5, &[("phi", psi1), ("psi", psi2)]);
    let disj = ovee(&neg(psi1), &neg(psi2));
    let step2 = b.rewrite(outer, &ovee(&disj, &neg(x)), &neg(&g), &disj, inner);

    let l7 = b.lemma(L7, &[("phi", &disj), ("psi", &neg(x))]);
    let step3 = b.mp_iff(step2, l7);
    [start, step2, step3]
}

/// From `¬(¬ψ1 ⊻ ¬ψ2) → y` at `line`, derive `(¬¬ψ1 & ¬¬ψ2) → y` by L6 and
/// then `(ψ1 & ψ2) → y` by L8 twice.
fn close(b: &mut ProofBuilder, line: usize, psi1: &Formula, psi2: &Formula, y: &Formula) -> [usize; 2] {
    let (n1, n2) = (neg(psi1), neg(psi2));
    let (nn1, nn2) = (neg(&n1), neg(&n2));
    let l6 = b.lemma(L6, &[("phi", &n1), ("psi", &n2)]);
    let step_l6 = b.rewrite(
        line,
        &imp(&and(&nn1, &nn2), y),
        &neg(&ovee(&n1, &n2)),
        &and(&nn1, &nn2),
        l6,
    );
    let first = b.lemma(L8, &[("phi", psi1)]);
    let half = b.rewrite(step_l6, &imp(&and(psi1, &nn2), y), &nn1, psi1, first);
    let second = b.lemma(L8, &[("phi", psi2)]);
    let step_l8 = b.rewrite(half, &imp(&and(psi1, psi2), y), &nn2, psi2, second);
    [step_l6, step_l8]
}

fn labelled(lines: &[usize]) -> Vec<(String, usize)> {
    lines
        .iter()
        .enumerate()
        .map(|(i, &l)| (format!("({})", i + 1), l))
        .collect()
}

/// `(ψ1 & ψ2) → ¬x` from `¬((ψ1 & ψ2) & x)`, in five steps.
pub fn inconsistency_chain(psi1: &Formula, psi2: &Formula, x: &Formula) -> (Proof, Vec<(String, usize)>) {
    let mut b = ProofBuilder::new();
    let [s1, s2, s3] = opening(&mut b, psi1, psi2, x);
    let [s4, s5] = close(&mut b, s3, psi1, psi2, &neg(x));
    (b.finish(), labelled(&[s1, s2, s3, s4, s5]))
}

/// `¬(ψ1 & ψ2)` from `¬((ψ1 & ψ2) & φ)` and `φ`, in seven steps.
pub fn lemma3_ii3(psi1: &Formula, psi2: &Formula, phi: &Formula) -> (Proof, Vec<(String, usize)>) {
    let mut b = ProofBuilder::new();
    let [s1, s2, s3] = opening(&mut b, psi1, psi2, phi);

    let phi_line = b.assume(phi.clone());
    let to_bottom = b.negation_is_bottom(phi_line);
    let disj = ovee(&neg(psi1), &neg(psi2));
    let bottom = Formula::Bottom;
    let s4 = b.rewrite(s3, &imp(&neg(&disj), &bottom), &neg(phi), &bottom, to_bottom);

    let [s5, s6] = close(&mut b, s4, psi1, psi2, &bottom);
    let l9 = b.lemma(L9, &[("phi", &and(psi1, psi2))]);
    let s7 = b.mp_iff(s6, l9);
    (b.finish(), labelled(&[s1, s2, s3, s4, s5, s6, s7]))
}

/// `(φ1 & φ2) → φ` from `¬((φ1 & φ2) & ¬φ)`.
pub fn theorem3_chain(phi1: &Formula, phi2: &Formula, phi: &Formula) -> (Proof, Vec<(String, usize)>) {
    let mut b = ProofBuilder::new();
    let nphi = neg(phi);
    let [s1, s2, with_nn] = opening(&mut b, phi1, phi2, &nphi);
    let l8 = b.lemma(L8, &[("phi", phi)]);
    let disj = ovee(&neg(phi1), &neg(phi2));
    let s3 = b.rewrite(with_nn, &imp(&neg(&disj), phi), &neg(&nphi), phi, l8);
    let [_, s4] = close(&mut b, s3, phi1, phi2, phi);
    (b.finish(), labelled(&[s1, s2, s3, s4]))
}

/// The bundled derivations over `p`, `q`, `r` and `s`.
pub fn fixture_suite() -> Vec<Fixture> {
    let (p, q, r, s) = (
        Formula::prop("p"),
        Formula::prop("q"),
        Formula::prop("r"),
        Formula::prop("s"),
    );
    let lemma2 = derive_conjunction(&[p.clone(), q.clone()]).expect("nonempty");
    // A3, A5, IFF-ELIM-R, MP, MP, hyp q, hyp p, MP, MP
    let lemma2_steps = labelled(&[1, 5, 6, 7, 8, 9]);
    let (ii3, ii3_steps) = lemma3_ii3(&p, &q, &r);
    let square = power(&r, 2).expect("positive power");
    let (ii4, ii4_steps) = inconsistency_chain(&p, &q, &square);
    let (th3, th3_steps) = theorem3_chain(&p, &q, &r);
    let (case3, case3_steps) = inconsistency_chain(&p, &q, &imp(&r, &s));
    vec![
        Fixture {
            name: "lemma2",
            proof: lemma2,
            milestones: lemma2_steps,
        },
        Fixture {
            name: "lemma3-ii3",
            proof: ii3,
            milestones: ii3_steps,
        },
        Fixture {
            name: "lemma3-ii4",
            proof: ii4,
            milestones: ii4_steps,
        },
        Fixture {
            name: "theorem3-chain",
            proof: th3,
            milestones: th3_steps,
        },
        Fixture {
            name: "theorem4-case3",
            proof: case3,
            milestones: case3_steps,
        },
    ]
}
