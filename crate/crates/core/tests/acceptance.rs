//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
//!
//! Pinned parameters: all value comparisons are exact (zero tolerance);
//! random inputs come from ChaCha8 with the fixed seeds below; the scheme
//! sweep must finish within `SCHEME_BUDGET`.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::rc::Rc;
use std::time::{Duration, Instant};

use lukasiewicz::decision::{max_value, min_value, Partition, Verdict};
use lukasiewicz::formula::{enumerate_up_to_size, instantiate, parse, Binding, Formula};
use lukasiewicz::gen::random_formula;
use lukasiewicz::maximal::{
    audit_maximality, check_extension_lemma, is_consistent, lindenbaum_extend, probe_truth_lemma,
    ConsistencyVerdict, ExtensionOutcome, FormulaSet, Fragment, FragmentExtension,
};
use lukasiewicz::proofs::{check_proof, derive_conjunction, fixture_suite, parse_proof, semantically_sound, SchemeId};
use lukasiewicz::semantics::{eval, grid_min, Rat, Valuation};
use lukasiewicz::is_tautology;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SCHEME_BUDGET: Duration = Duration::from_secs(60);
const SCHEME_TUPLES: usize = 5;
const SCHEME_DEPTH: usize = 3;
const ORACLE_NODES: usize = 7;
const ORACLE_GRIDS: std::ops::RangeInclusive<u32> = 1..=6;
const CONJ_TRIALS: usize = 100;
const MONOTONE_TRIALS: usize = 200;
const EXTENSION_TRIALS: usize = 100;
const POWER_CAP: usize = 8;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Lab) -> Outcome);
type SeedKey = (Vec<String>, usize);

fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

fn set(items: &[&str]) -> FormulaSet {
    items.iter().map(|s| f(s)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Extensions of single-variable fragments, computed once per (seed, depth).
#[derive(Default)]
struct Lab {
    cache: RefCell<HashMap<SeedKey, Rc<FragmentExtension>>>,
}

impl Lab {
    fn extension(&self, seed: &[&str], depth: usize) -> Result<Rc<FragmentExtension>, String> {
        let key = (seed.iter().map(|s| s.to_string()).collect(), depth);
        if let Some(ext) = self.cache.borrow().get(&key) {
            return Ok(ext.clone());
        }
        let vars: BTreeSet<String> = ["p".to_string()].into();
        let ext = lindenbaum_extend(&set(seed), &Fragment::new(&vars, depth))
            .map_err(|e| format!("seed {seed:?}: {e}"))?;
        let ext = Rc::new(ext);
        self.cache.borrow_mut().insert(key, ext.clone());
        Ok(ext)
    }
}

fn scheme_validity(_: &Lab) -> Outcome {
    let schemes: Vec<SchemeId> = SchemeId::ALL
        .iter()
        .copied()
        .filter(|id| !matches!(id, SchemeId::IffElimL | SchemeId::IffElimR))
        .collect();
    ensure(schemes.len() == 23, || format!("expected 23 schemes, have {}", schemes.len()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    for &id in &schemes {
        for _ in 0..SCHEME_TUPLES {
            let b: Binding = id
                .template()
                .metavars()
                .into_iter()
                .map(|m| (m, random_formula(&mut rng, &["p", "q", "r"], SCHEME_DEPTH)))
                .collect();
            let inst = instantiate(id.template(), &b).unwrap();
            let verdict = is_tautology(&inst);
            ensure(verdict == Verdict::Tautology, || format!("{id}: {inst} gave {verdict:?}"))?;
        }
    }
    let took = start.elapsed();
    ensure(took < SCHEME_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("{} instances of 23 schemes TAUT in {took:.2?}", 23 * SCHEME_TUPLES))
}

fn excluded_middle(_: &Lab) -> Outcome {
    let lem = f(r"p \/ !p");
    let half: Valuation = "p=1/2".parse().unwrap();
    let (lo, at) = min_value(&lem);
    ensure(lo == Rat::half() && at == half, || format!("min {lo} at {at}"))?;
    let (g, gat) = grid_min(&lem, 2);
    ensure(g == Rat::half() && gat == half, || format!("grid min {g} at {gat}"))?;
    Ok(format!("min {lo} at {at}, grid n=2 agrees"))
}

fn oracle_equivalence(_: &Lab) -> Outcome {
    let atoms = [Formula::Bottom, Formula::prop("p"), Formula::prop("q")];
    let all = enumerate_up_to_size(&atoms, ORACLE_NODES);
    let mut taut = 0;
    for g in &all {
        let (lo, _) = min_value(g);
        let grids: Vec<Rat> = ORACLE_GRIDS.map(|n| grid_min(g, n).0).collect();
        ensure(grids.iter().all(|x| *x >= lo), || format!("{g}: grid below min {lo}"))?;
        match is_tautology(g) {
            Verdict::Tautology => {
                taut += 1;
                ensure(grids.iter().all(Rat::is_one), || format!("{g}: TAUT but a grid fails"))?;
            }
            Verdict::Counterexample { witness, value } => {
                let actual = eval(g, &witness).unwrap();
                ensure(actual == value && !value.is_one(), || {
                    format!("{g}: CEX {value} at {witness} re-evaluates to {actual}")
                })?;
            }
            other => return Err(format!("{g}: {other:?}")),
        }
    }
    Ok(format!("{} formulas (0, p, q; <= {ORACLE_NODES} nodes), {taut} TAUT, 0 disagreements", all.len()))
}

fn derivation_fixtures(_: &Lab) -> Outcome {
    let expected_steps = [
        ("lemma2", 6),
        ("lemma3-ii3", 7),
        ("lemma3-ii4", 5),
        ("theorem3-chain", 4),
        ("theorem4-case3", 5),
    ];
    let suite = fixture_suite();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for (name, steps) in expected_steps {
        let fx = suite
            .iter()
            .find(|fx| fx.name == name)
            .ok_or_else(|| format!("missing fixture {name}"))?;
        ensure(fx.milestones.len() == steps, || format!("{name}: {} steps", fx.milestones.len()))?;
        let text = fs::read_to_string(dir.join(format!("{name}.proof"))).map_err(|e| format!("{name}: {e}"))?;
        let on_disk = parse_proof(&text).map_err(|e| format!("{name}: {e}"))?;
        ensure(on_disk == fx.proof, || format!("{name}: bundled file differs from builder"))?;
        let ok = check_proof(&on_disk).map_err(|e| format!("{name}: {e}"))?;
        ensure(Some(&ok.conclusion) == on_disk.conclusion(), || format!("{name}: conclusion"))?;
        ensure(semantically_sound(&on_disk), || format!("{name}: not semantically sound"))?;
    }
    Ok(format!("{} fixtures check and are sound under their hypotheses", expected_steps.len()))
}

fn conjunction_round_trip(_: &Lab) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..CONJ_TRIALS {
        let n = rng.gen_range(1..=5);
        let gamma: Vec<Formula> = (0..n).map(|_| random_formula(&mut rng, &["p", "q", "r"], 3)).collect();
        let proof = derive_conjunction(&gamma).ok_or("empty list")?;
        let ok = check_proof(&proof).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(ok.conclusion == Formula::conj_all(gamma), || format!("trial {trial}: wrong conclusion"))?;
    }
    Ok(format!("{CONJ_TRIALS} random lists of length 1-5 checked"))
}

fn consistency_lab(_: &Lab) -> Outcome {
    ensure(is_consistent(&set(&["p", "!p"])) == ConsistencyVerdict::Inconsistent, || {
        "{p, !p} reported consistent".into()
    })?;
    let (hi, _) = max_value(&f("p & !p"));
    ensure(hi.is_zero(), || format!("p & !p reaches {hi}"))?;
    let one: Valuation = "p=1".parse().unwrap();
    match is_consistent(&set(&["p & p", "!(!p & !p)"])) {
        ConsistencyVerdict::Consistent { witness, value } if value.is_one() && witness == one => {}
        other => return Err(format!("{{p & p, !(!p & !p)}}: {other:?}")),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut trials, mut attempts) = (0, 0);
    while trials < MONOTONE_TRIALS {
        attempts += 1;
        ensure(attempts <= 100_000, || format!("only {trials} inconsistent sets found"))?;
        let n = rng.gen_range(1..=4);
        let s: Vec<Formula> = (0..n).map(|_| random_formula(&mut rng, &["p", "q"], 2)).collect();
        if is_consistent(&s).is_consistent() {
            continue;
        }
        trials += 1;
        let mut bigger = s;
        bigger.push(random_formula(&mut rng, &["p", "q"], 2));
        ensure(!is_consistent(&bigger).is_consistent(), || {
            let shown: Vec<String> = bigger.iter().map(|g| g.to_string()).collect();
            format!("superset became consistent: {shown:?}")
        })?;
    }
    Ok(format!("base cases hold, {MONOTONE_TRIALS} supersets of inconsistent sets stay inconsistent"))
}

fn lindenbaum_audit(lab: &Lab) -> Outcome {
    let mut notes = Vec::new();
    for seed in [&["p"][..], &["p & p"]] {
        let ext = lab.extension(seed, 3)?;
        let report = audit_maximality(&ext, POWER_CAP);
        ensure(report.conjunction.is_empty(), || format!("{seed:?}: conjunction {:?}", report.conjunction))?;
        ensure(report.modus_ponens.is_empty(), || format!("{seed:?}: modus ponens {:?}", report.modus_ponens))?;
        ensure(report.undecided.is_empty(), || format!("{seed:?}: powers undecided {:?}", report.undecided))?;
        let p_in = ext.accepted.contains(&f("p"));
        notes.push(format!("{seed:?}: {} of {} accepted, p accepted={p_in}", ext.accepted.len(), ext.fragment.len()));
    }
    Ok(notes.join("; "))
}

fn extension_property(_: &Lab) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut premise = 0;
    for trial in 0..EXTENSION_TRIALS {
        let n = rng.gen_range(0..=3);
        let phi: FormulaSet = (0..n).map(|_| random_formula(&mut rng, &["p", "q"], 3)).collect();
        let target = random_formula(&mut rng, &["p", "q"], 3);
        match check_extension_lemma(&phi, &target) {
            ExtensionOutcome::PremiseNotMet => {}
            ExtensionOutcome::Consistent { witness, value, extension } => {
                premise += 1;
                ensure(extension.is_consistent() && !value.is_one(), || format!("trial {trial}"))?;
                ensure(phi.iter().all(|g| eval(g, &witness).unwrap().is_one()), || {
                    format!("trial {trial}: witness {witness} misses the premise")
                })?;
                ensure(eval(&target, &witness).unwrap() == value, || format!("trial {trial}: value"))?;
            }
            ExtensionOutcome::Violation { witness, value } => {
                return Err(format!("trial {trial}: {target} = {value} at {witness} but extension inconsistent"));
            }
        }
    }
    Ok(format!("{EXTENSION_TRIALS} pairs, premise held in {premise}, 0 counterexamples"))
}

fn truth_probe(lab: &Lab) -> Outcome {
    let seeds: [&[&str]; 5] = [&[], &["p"], &["!p"], &["p & p", "!(!p & !p)"], &["p <-> !p"]];
    let (mut runs, mut holds, mut fails) = (0, 0, 0);
    for seed in seeds {
        for depth in 0..=3 {
            let ext = lab.extension(seed, depth)?;
            let probe = probe_truth_lemma(&ext).map_err(|e| format!("{seed:?} depth {depth}: {e}"))?;
            let base = Partition::of_all(ext.accepted.iter());
            let member = |g: &Formula| {
                if ext.fragment.formulas.contains(g) {
                    ext.accepted.contains(g)
                } else {
                    !base.conjoin(g).is_zero()
                }
            };
            runs += 1;
            for e in &probe.entries {
                if !e.all_hold() {
                    fails += 1;
                    continue;
                }
                holds += 1;
                let value = eval(&e.formula, &probe.valuation).unwrap();
                let accepted = ext.accepted.contains(&e.formula);
                let neg = member(&Formula::not(e.formula.clone()));
                let confirmed = value == e.value
                    && accepted == e.accepted
                    && neg == e.negation_member
                    && value.is_one() == accepted
                    && value.is_zero() == neg
                    && (value == Rat::half()) == (!accepted && !neg);
                ensure(confirmed, || format!("{seed:?} depth {depth}: {} not confirmed", e.formula))?;
            }
        }
    }
    Ok(format!("{runs} probes, {holds} holds entries confirmed by eval, {fails} entries fail (reported)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("scheme validity", scheme_validity),
        ("excluded-middle gap", excluded_middle),
        ("oracle equivalence", oracle_equivalence),
        ("derivation fixtures", derivation_fixtures),
        ("conjunction proofs", conjunction_round_trip),
        ("consistency laboratory", consistency_lab),
        ("lindenbaum audit", lindenbaum_audit),
        ("countermodel extension", extension_property),
        ("truth-lemma probe", truth_probe),
    ];
    let lab = Lab::default();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| run(&lab)))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}) [{took:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail}) [{took:.1?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
