//! Finite consistent sets and their extension over an enumerated fragment.
//!
//! Consistency is decided semantically. A finite set is consistent exactly
//! when the negation of its strong conjunction is not provable, and by
//! soundness and completeness that holds exactly when the conjunction takes
//! a positive value somewhere. The empty set is consistent (its
//! conjunction is `¬⊥`).

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::decision::{is_tautology, min_value_under, partition_maximum, Partition, Verdict};
use crate::formula::{power, Formula};
use crate::proofs::{check_proof, derive_conjunction};
use crate::semantics::{eval, Rat, Valuation};

/// Insertion-ordered set of formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormulaSet {
    items: Vec<Formula>,
    index: HashSet<Formula>,
}

impl FormulaSet {
    pub fn new() -> FormulaSet {
        FormulaSet::default()
    }

    /// Returns false if `f` was already present.
    pub fn insert(&mut self, f: Formula) -> bool {
        if self.index.contains(&f) {
            return false;
        }
        self.index.insert(f.clone());
        self.items.push(f);
        true
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains(f)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.items
    }

    /// Left-associated strong conjunction; `¬⊥` when empty.
    pub fn conjunction(&self) -> Formula {
        Formula::conj_all(self.items.iter().cloned())
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.items.iter().flat_map(|f| f.variables()).collect()
    }
}

impl FromIterator<Formula> for FormulaSet {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> FormulaSet {
        let mut s = FormulaSet::new();
        for f in iter {
            s.insert(f);
        }
        s
    }
}

impl<'a> IntoIterator for &'a FormulaSet {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// Every ⊥-free formula over `vars` of depth at most `depth`, ordered by
/// size and then printed form. Closed under subformulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment {
    pub vars: BTreeSet<String>,
    pub depth: usize,
    pub formulas: Vec<Formula>,
}

impl Fragment {
    pub fn new(vars: &BTreeSet<String>, depth: usize) -> Fragment {
        let atoms: Vec<Formula> = vars.iter().map(Formula::prop).collect();
        let mut all: BTreeSet<Formula> = atoms.iter().cloned().collect();
        for _ in 0..depth {
            let prev: Vec<Formula> = all.iter().cloned().collect();
            for a in &prev {
                all.insert(Formula::not(a.clone()));
                for b in &prev {
                    all.insert(Formula::conj(a.clone(), b.clone()));
                    all.insert(Formula::implies(a.clone(), b.clone()));
                }
            }
        }
        let mut formulas: Vec<Formula> = all.into_iter().collect();
        formulas.sort_by_cached_key(|f| (f.size(), f.to_string()));
        Fragment {
            vars: vars.clone(),
            depth,
            formulas,
        }
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConsistencyVerdict {
    /// `witness` maximises the conjunction, whose maximum is `value > 0`.
    Consistent { witness: Valuation, value: Rat },
    Inconsistent,
}

impl ConsistencyVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ConsistencyVerdict::Consistent { .. })
    }
}

fn verdict_of(p: &Partition) -> ConsistencyVerdict {
    match partition_maximum(p) {
        Some((value, witness)) => ConsistencyVerdict::Consistent { witness, value },
        None => ConsistencyVerdict::Inconsistent,
    }
}

pub fn is_consistent<'a, I: IntoIterator<Item = &'a Formula>>(gamma: I) -> ConsistencyVerdict {
    verdict_of(&Partition::of_all(gamma))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepReason {
    Seed,
    /// Already in the set when its turn came.
    Member,
    Consistent,
    Inconsistent,
}

impl StepReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StepReason::Seed => "seed",
            StepReason::Member => "member",
            StepReason::Consistent => "consistent",
            StepReason::Inconsistent => "inconsistent",
        }
    }

    pub fn parse(s: &str) -> Option<StepReason> {
        [
            StepReason::Seed,
            StepReason::Member,
            StepReason::Consistent,
            StepReason::Inconsistent,
        ]
        .into_iter()
        .find(|r| r.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub accepted: bool,
    pub reason: StepReason,
    /// Maximiser of the accepted conjunction after an acceptance.
    pub witness: Option<(Rat, Valuation)>,
}

#[derive(Clone, Debug)]
pub struct FragmentExtension {
    pub seed: FormulaSet,
    pub fragment: Fragment,
    pub accepted: FormulaSet,
    pub trace: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MaximalError {
    #[error("seed set is inconsistent")]
    InconsistentSeed,
    #[error("both `{0}` and its negation are accepted")]
    BothAccepted(String),
}

impl FragmentExtension {
    /// Rebuilds an extension from a recorded trace; the accepted set is the
    /// accepted entries in trace order.
    pub fn from_trace(seed: FormulaSet, fragment: Fragment, trace: Vec<Step>) -> FragmentExtension {
        let accepted = trace
            .iter()
            .filter(|s| s.accepted)
            .map(|s| s.formula.clone())
            .chain(seed.iter().cloned())
            .collect();
        FragmentExtension {
            seed,
            fragment,
            accepted,
            trace,
        }
    }
}

/// Walks the fragment once, keeping each formula whose addition leaves the
/// set consistent.
pub fn lindenbaum_extend(seed: &FormulaSet, frag: &Fragment) -> Result<FragmentExtension, MaximalError> {
    let mut part = Partition::of_all(seed);
    if part.is_zero() {
        return Err(MaximalError::InconsistentSeed);
    }
    let mut accepted = seed.clone();
    let mut trace: Vec<Step> = seed
        .iter()
        .map(|f| Step {
            formula: f.clone(),
            accepted: true,
            reason: StepReason::Seed,
            witness: None,
        })
        .collect();
    if let Some(last) = trace.last_mut() {
        last.witness = partition_maximum(&part);
    }
    for f in &frag.formulas {
        if accepted.contains(f) {
            trace.push(Step {
                formula: f.clone(),
                accepted: true,
                reason: StepReason::Member,
                witness: None,
            });
            continue;
        }
        let next = part.conjoin(f);
        if next.is_zero() {
            trace.push(Step {
                formula: f.clone(),
                accepted: false,
                reason: StepReason::Inconsistent,
                witness: None,
            });
        } else {
            accepted.insert(f.clone());
            trace.push(Step {
                formula: f.clone(),
                accepted: true,
                reason: StepReason::Consistent,
                witness: partition_maximum(&next),
            });
            part = next;
        }
    }
    Ok(FragmentExtension {
        seed: seed.clone(),
        fragment: frag.clone(),
        accepted,
        trace,
    })
}

/// Membership in the (unbuilt) maximal set. Inside the fragment it is
/// membership in the accepted set; outside it is approximated by whether
/// the formula could still be consistently added.
struct Oracle<'a> {
    ext: &'a FragmentExtension,
    in_fragment: HashSet<&'a Formula>,
    part: Partition,
}

impl<'a> Oracle<'a> {
    fn new(ext: &'a FragmentExtension) -> Oracle<'a> {
        Oracle {
            ext,
            in_fragment: ext.fragment.formulas.iter().collect(),
            part: Partition::of_all(&ext.accepted),
        }
    }

    fn in_fragment(&self, f: &Formula) -> bool {
        self.in_fragment.contains(f)
    }

    fn member(&self, f: &Formula) -> bool {
        if self.ext.accepted.contains(f) {
            return true;
        }
        if self.in_fragment(f) {
            return false;
        }
        !self.part.conjoin(f).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerWitness {
    Power(usize),
    NegatedPower(usize),
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    /// `a & b` whose membership disagrees with that of `a` and `b`.
    pub conjunction: Vec<Formula>,
    /// `(a, a → b)` both accepted with `b` in the fragment but rejected.
    pub modus_ponens: Vec<(Formula, Formula)>,
    /// Fragment formulas derivable from the accepted set (tautologies, and
    /// conjunctions of accepted pairs via a checked proof) that were rejected.
    pub derivable: Vec<Formula>,
    /// Smallest `k` with `a^k` or `¬a^k` a member, per fragment formula.
    pub powers: Vec<(Formula, PowerWitness)>,
    /// Fragment formulas with no witness up to the cap.
    pub undecided: Vec<Formula>,
    /// Rejected formulas that the final set could still absorb.
    pub not_maximal: Vec<Formula>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.conjunction.is_empty()
            && self.modus_ponens.is_empty()
            && self.derivable.is_empty()
            && self.undecided.is_empty()
            && self.not_maximal.is_empty()
    }
}

pub fn audit_maximality(ext: &FragmentExtension, n_max: usize) -> AuditReport {
    let oracle = Oracle::new(ext);
    let acc = &ext.accepted;
    let mut report = AuditReport::default();

    for f in &ext.fragment.formulas {
        if let Formula::StrongConj(a, b) = f {
            if oracle.in_fragment(a) && oracle.in_fragment(b) {
                let both = acc.contains(a) && acc.contains(b);
                if acc.contains(f) != both {
                    report.conjunction.push(f.clone());
                }
            }
        }
    }

    for f in acc {
        if let Formula::Implies(a, b) = f {
            if acc.contains(a) && oracle.in_fragment(b) && !acc.contains(b) {
                report.modus_ponens.push(((**a).clone(), f.clone()));
            }
        }
    }

    for f in &ext.fragment.formulas {
        if acc.contains(f) {
            continue;
        }
        let derivable = match f {
            _ if is_tautology(f) == Verdict::Tautology => true,
            Formula::StrongConj(a, b) if acc.contains(a) && acc.contains(b) => {
                let proof = derive_conjunction(&[(**a).clone(), (**b).clone()]).expect("two hypotheses");
                check_proof(&proof).is_ok_and(|ok| &ok.conclusion == f)
            }
            _ => false,
        };
        if derivable {
            report.derivable.push(f.clone());
        }
    }

    for f in &ext.fragment.formulas {
        let found = (1..=n_max).find_map(|k| {
            let pk = power(f, k).expect("k >= 1");
            if oracle.member(&pk) {
                Some(PowerWitness::Power(k))
            } else if oracle.member(&Formula::not(pk)) {
                Some(PowerWitness::NegatedPower(k))
            } else {
                None
            }
        });
        match found {
            Some(w) => report.powers.push((f.clone(), w)),
            None => report.undecided.push(f.clone()),
        }
    }

    for step in &ext.trace {
        if !step.accepted && !oracle.part.conjoin(&step.formula).is_zero() {
            report.not_maximal.push(step.formula.clone());
        }
    }
    report
}

/// Reads a {0, 1/2, 1} valuation off the accepted set: 1 if `p` is
/// accepted, 0 if `¬p` is, 1/2 otherwise.
pub fn canonical_valuation(ext: &FragmentExtension) -> Result<Valuation, MaximalError> {
    let mut v = Valuation::new();
    for name in &ext.fragment.vars {
        let p = Formula::prop(name.as_str());
        let yes = ext.accepted.contains(&p);
        let no = ext.accepted.contains(&Formula::not(p));
        let value = match (yes, no) {
            (true, true) => return Err(MaximalError::BothAccepted(name.clone())),
            (true, false) => Rat::one(),
            (false, true) => Rat::zero(),
            (false, false) => Rat::half(),
        };
        v.set(name.clone(), value).expect("value in range");
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    Atom,
    Not,
    Conj,
    Implies,
}

impl Connective {
    pub fn of(f: &Formula) -> Connective {
        match f {
            Formula::Bottom | Formula::Prop(_) => Connective::Atom,
            Formula::Not(_) => Connective::Not,
            Formula::StrongConj(..) => Connective::Conj,
            Formula::Implies(..) => Connective::Implies,
        }
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connective::Atom => "atom",
            Connective::Not => "not",
            Connective::Conj => "and",
            Connective::Implies => "implies",
        })
    }
}

/// One fragment formula under the canonical valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeEntry {
    pub formula: Formula,
    pub value: Rat,
    pub accepted: bool,
    /// Membership of `¬formula`, through the same proxy as the audit when
    /// the negation lies outside the fragment.
    pub negation_member: bool,
    /// value = 1 iff accepted
    pub one: bool,
    /// value = 0 iff negation is a member
    pub zero: bool,
    /// value = 1/2 iff neither
    pub half: bool,
}

impl ProbeEntry {
    pub fn all_hold(&self) -> bool {
        self.one && self.zero && self.half
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub holds: usize,
    pub fails: usize,
}

#[derive(Clone, Debug)]
pub struct TruthProbe {
    pub valuation: Valuation,
    pub entries: Vec<ProbeEntry>,
    pub by_connective: BTreeMap<Connective, Tally>,
}

/// Compares value classes under the canonical valuation with membership,
/// formula by formula. Nothing is asserted; failures are counted.
pub fn probe_truth_lemma(ext: &FragmentExtension) -> Result<TruthProbe, MaximalError> {
    let valuation = canonical_valuation(ext)?;
    let oracle = Oracle::new(ext);
    let mut entries = Vec::new();
    let mut by_connective: BTreeMap<Connective, Tally> = BTreeMap::new();
    for f in &ext.fragment.formulas {
        let value = eval(f, &valuation).expect("fragment formulas use generator variables");
        let accepted = ext.accepted.contains(f);
        let negation_member = oracle.member(&Formula::not(f.clone()));
        let entry = ProbeEntry {
            one: value.is_one() == accepted,
            zero: value.is_zero() == negation_member,
            half: (value == Rat::half()) == (!accepted && !negation_member),
            formula: f.clone(),
            value,
            accepted,
            negation_member,
        };
        let tally = by_connective.entry(Connective::of(f)).or_default();
        if entry.all_hold() {
            tally.holds += 1;
        } else {
            tally.fails += 1;
        }
        entries.push(entry);
    }
    Ok(TruthProbe {
        valuation,
        entries,
        by_connective,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionOutcome {
    /// Every valuation giving the set value 1 also gives the target value 1.
    PremiseNotMet,
    /// `witness` gives the set value 1 and the target `value < 1`, so it
    /// gives `¬target` and the extended conjunction `1 − value > 0`.
    Consistent {
        witness: Valuation,
        value: Rat,
        extension: ConsistencyVerdict,
    },
    /// Premise holds yet the extension is inconsistent. Never expected.
    Violation { witness: Valuation, value: Rat },
}

/// If some valuation makes every member of `phi` true but not `target`,
/// checks that `phi ∪ {¬target}` is consistent.
pub fn check_extension_lemma(phi: &FormulaSet, target: &Formula) -> ExtensionOutcome {
    let (value, witness) = match min_value_under(target, phi.as_slice()) {
        Some((v, w)) if !v.is_one() => (v, w),
        _ => return ExtensionOutcome::PremiseNotMet,
    };
    let extended: Vec<Formula> = phi
        .iter()
        .cloned()
        .chain(std::iter::once(Formula::not(target.clone())))
        .collect();
    match is_consistent(&extended) {
        ConsistencyVerdict::Inconsistent => ExtensionOutcome::Violation { witness, value },
        extension => ExtensionOutcome::Consistent {
            witness,
            value,
            extension,
        },
    }
}
