//! `luka`: command-line front end.
//!
//! Exit status: 0 for an affirmative answer (tautology, proof ok,
//! consistent, value 1 under the valuation, clean audit), 1 for a negative
//! one, 2 for bad usage or unreadable input.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use lukasiewicz::decision::{is_tautology, max_value, min_value, Verdict};
use lukasiewicz::formula::{parse, Formula};
use lukasiewicz::maximal::{
    audit_maximality, is_consistent, lindenbaum_extend, probe_truth_lemma, ConsistencyVerdict,
    FormulaSet, Fragment, FragmentExtension, PowerWitness, Step, StepReason,
};
use lukasiewicz::proofs::{check_proof, parse_proof, semantically_sound, verify_registry};
use lukasiewicz::semantics::{eval, Rat, Valuation};

const BUNDLED_FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures");

const SEMANTIC_NOTE: &str =
    "consistency is decided semantically: a finite set is consistent iff its strong conjunction takes a positive value";

#[derive(Parser)]
#[command(name = "luka", version, about = "Łukasiewicz logic toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula under a valuation
    Eval {
        formula: String,
        /// e.g. p=1/2,q=1
        #[arg(long = "val", default_value = "")]
        valuation: String,
    },
    /// Decide whether a formula is a tautology
    Decide { formula: String },
    /// Exact minimum and maximum value with witnesses
    Minmax { formula: String },
    /// Check a proof file
    Check { file: PathBuf },
    /// Decide a fresh instance of every registered scheme
    VerifyRegistry,
    /// Decide consistency of a set file (one formula per line)
    Consistent { file: PathBuf },
    /// Extend a seed set over an enumerated fragment; prints a JSON-lines trace
    Extend {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<String>,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
    /// Audit the maximality properties of a recorded extension
    Audit {
        trace: PathBuf,
        /// Overrides the cap recorded in the trace
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Compare canonical-valuation values with membership in a recorded extension
    Probe { trace: PathBuf },
    /// Check the bundled derivation fixtures and the scheme registry
    Fixtures {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn formula_arg(text: &str) -> Result<Formula> {
    parse(text).with_context(|| format!("cannot parse `{text}`"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// One formula per nonblank line; `#` starts a comment.
fn read_set(path: &Path) -> Result<FormulaSet> {
    let mut set = FormulaSet::new();
    for (i, line) in read(path)?.lines().enumerate() {
        let text = line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let f = parse(text).map_err(|e| anyhow!("{}:{}: {e}", path.display(), i + 1))?;
        set.insert(f);
    }
    Ok(set)
}

fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Eval { formula, valuation } => {
            let f = formula_arg(&formula)?;
            let v: Valuation = valuation.parse().context("bad --val")?;
            let value = eval(&f, &v)?;
            println!("{value}");
            Ok(value.is_one())
        }
        Command::Decide { formula } => {
            let f = formula_arg(&formula)?;
            match is_tautology(&f) {
                Verdict::Tautology => {
                    println!("TAUT");
                    Ok(true)
                }
                Verdict::Counterexample { witness, value } => {
                    println!("CEX value={value} at {witness}");
                    Ok(false)
                }
                other => unreachable!("is_tautology gave {other:?}"),
            }
        }
        Command::Minmax { formula } => {
            let f = formula_arg(&formula)?;
            let (lo, lo_at) = min_value(&f);
            let (hi, hi_at) = max_value(&f);
            println!("min={lo} at {lo_at}");
            println!("max={hi} at {hi_at}");
            Ok(true)
        }
        Command::Check { file } => {
            let proof = parse_proof(&read(&file)?)?;
            match check_proof(&proof) {
                Ok(ok) => {
                    println!("ok: {}", ok.conclusion);
                    if !ok.cited.is_empty() {
                        let cited: Vec<&str> = ok.cited.iter().map(|id| id.name()).collect();
                        println!("cited: {}", cited.join(" "));
                    }
                    Ok(true)
                }
                Err(e) => {
                    println!("{e}");
                    Ok(false)
                }
            }
        }
        Command::VerifyRegistry => {
            let mut all = true;
            for r in verify_registry() {
                let status = match &r.verdict {
                    Verdict::Tautology => "TAUT".to_string(),
                    Verdict::Counterexample { witness, value } => {
                        all = false;
                        format!("CEX value={value} at {witness}")
                    }
                    other => unreachable!("is_tautology gave {other:?}"),
                };
                println!("{:<11} {status:<6} {}", r.id.name(), r.instance);
            }
            Ok(all)
        }
        Command::Consistent { file } => {
            let set = read_set(&file)?;
            eprintln!("note: {SEMANTIC_NOTE}");
            match is_consistent(&set) {
                ConsistencyVerdict::Consistent { witness, value } => {
                    println!("CONSISTENT value={value} at {witness}");
                    Ok(true)
                }
                ConsistencyVerdict::Inconsistent => {
                    println!("INCONSISTENT");
                    Ok(false)
                }
            }
        }
        Command::Extend {
            seed,
            vars,
            depth,
            nmax,
        } => extend(&seed, vars, depth, nmax),
        Command::Audit { trace, nmax } => audit(&trace, nmax),
        Command::Probe { trace } => probe(&trace),
        Command::Fixtures { dir } => fixtures(dir.as_deref().unwrap_or(Path::new(BUNDLED_FIXTURES))),
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    vars: Vec<String>,
    depth: usize,
    nmax: usize,
    seed: Vec<String>,
    fragment_size: usize,
    note: String,
}

#[derive(Serialize, Deserialize)]
struct Record {
    formula: String,
    accepted: bool,
    reason: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    value: Option<String>,
}

fn extend(seed: &Path, vars: Vec<String>, depth: usize, nmax: usize) -> Result<bool> {
    let seed = read_set(seed)?;
    let mut names = BTreeSet::new();
    for v in vars {
        let f = Formula::try_prop(v.trim())?;
        names.extend(f.variables());
    }
    let frag = Fragment::new(&names, depth);
    let ext = match lindenbaum_extend(&seed, &frag) {
        Ok(ext) => ext,
        Err(e) => {
            eprintln!("{e}");
            return Ok(false);
        }
    };
    let header = Header {
        vars: names.into_iter().collect(),
        depth,
        nmax,
        seed: seed.iter().map(|f| f.to_string()).collect(),
        fragment_size: frag.len(),
        note: SEMANTIC_NOTE.to_string(),
    };
    let mut out = io::stdout().lock();
    let mut emit = |line: String| match writeln!(out, "{line}") {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => other,
    };
    emit(serde_json::to_string(&header)?)?;
    for step in &ext.trace {
        let record = Record {
            formula: step.formula.to_string(),
            accepted: step.accepted,
            reason: step.reason.as_str().to_string(),
            witness: step.witness.as_ref().map(|(_, w)| w.to_string()),
            value: step.witness.as_ref().map(|(v, _)| v.to_string()),
        };
        emit(serde_json::to_string(&record)?)?;
    }
    Ok(true)
}

fn load_trace(path: &Path) -> Result<(FragmentExtension, usize)> {
    let text = read(path)?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| anyhow!("{}: empty trace", path.display()))?;
    let header: Header = serde_json::from_str(first).with_context(|| format!("{}:1: bad header", path.display()))?;
    let mut seed = FormulaSet::new();
    for s in &header.seed {
        seed.insert(parse(s).map_err(|e| anyhow!("{}:1: seed `{s}`: {e}", path.display()))?);
    }
    let mut trace = Vec::new();
    for (i, line) in lines {
        let at = || format!("{}:{}", path.display(), i + 1);
        let r: Record = serde_json::from_str(line).with_context(|| format!("{}: bad record", at()))?;
        let formula = parse(&r.formula).map_err(|e| anyhow!("{}: {e}", at()))?;
        let reason = StepReason::parse(&r.reason).ok_or_else(|| anyhow!("{}: unknown reason `{}`", at(), r.reason))?;
        let witness = match (r.value, r.witness) {
            (Some(v), Some(w)) => {
                let v: Rat = v.parse().map_err(|e| anyhow!("{}: {e}", at()))?;
                let w: Valuation = w.parse().map_err(|e| anyhow!("{}: {e}", at()))?;
                Some((v, w))
            }
            _ => None,
        };
        trace.push(Step {
            formula,
            accepted: r.accepted,
            reason,
            witness,
        });
    }
    let vars: BTreeSet<String> = header.vars.into_iter().collect();
    let frag = Fragment::new(&vars, header.depth);
    Ok((FragmentExtension::from_trace(seed, frag, trace), header.nmax))
}

fn audit(path: &Path, nmax: Option<usize>) -> Result<bool> {
    let (ext, recorded) = load_trace(path)?;
    let nmax = nmax.unwrap_or(recorded);
    let report = audit_maximality(&ext, nmax);
    println!("fragment: {} formulas, {} accepted", ext.fragment.len(), ext.accepted.len());
    println!("conjunction violations: {}", report.conjunction.len());
    for f in &report.conjunction {
        println!("  {f}");
    }
    println!("modus ponens violations: {}", report.modus_ponens.len());
    for (a, imp) in &report.modus_ponens {
        println!("  {a} ; {imp}");
    }
    println!("derivable but rejected: {}", report.derivable.len());
    for f in &report.derivable {
        println!("  {f}");
    }
    let powers = report.powers.iter().filter(|(_, w)| matches!(w, PowerWitness::Power(_))).count();
    println!(
        "powers decided: {} ({} by a power, {} by a negated power), undecided up to n={nmax}: {}",
        report.powers.len(),
        powers,
        report.powers.len() - powers,
        report.undecided.len()
    );
    for f in &report.undecided {
        println!("  {f}");
    }
    println!("post-hoc maximality violations: {}", report.not_maximal.len());
    for f in &report.not_maximal {
        println!("  {f}");
    }
    Ok(report.is_clean())
}

fn probe(path: &Path) -> Result<bool> {
    let (ext, _) = load_trace(path)?;
    let probe = probe_truth_lemma(&ext)?;
    println!("valuation: {}", probe.valuation);
    for e in &probe.entries {
        let mark = |b: bool| if b { "holds" } else { "FAILS" };
        println!(
            "{} value={} accepted={} neg={} one:{} zero:{} half:{}",
            e.formula,
            e.value,
            e.accepted,
            e.negation_member,
            mark(e.one),
            mark(e.zero),
            mark(e.half)
        );
    }
    for (c, t) in &probe.by_connective {
        println!("{c}: {} hold, {} fail", t.holds, t.fails);
    }
    Ok(probe.entries.iter().all(|e| e.all_hold()))
}

fn fixtures(dir: &Path) -> Result<bool> {
    if !dir.is_dir() {
        bail!("fixture directory {} not found", dir.display());
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "proof"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no .proof files in {}", dir.display());
    }
    let mut all = true;
    for file in &files {
        let name = file.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default();
        let status = match parse_proof(&read(file)?) {
            Err(e) => format!("FAIL {e}"),
            Ok(proof) => match check_proof(&proof) {
                Err(e) => format!("FAIL {e}"),
                Ok(_) if !semantically_sound(&proof) => "FAIL conclusion does not follow semantically".into(),
                Ok(ok) => format!("ok   {} lines, proves {}", proof.lines.len(), ok.conclusion),
            },
        };
        all &= status.starts_with("ok");
        println!("{name:<16} {status}");
    }
    let failed: Vec<String> = verify_registry()
        .into_iter()
        .filter(|r| r.verdict != Verdict::Tautology)
        .map(|r| r.id.name().to_string())
        .collect();
    if failed.is_empty() {
        println!("{:<16} ok   all schemes valid", "registry");
    } else {
        all = false;
        println!("{:<16} FAIL {}", "registry", failed.join(" "));
    }
    Ok(all)
}
