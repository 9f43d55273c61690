//! Exact decision procedure: the value function of a formula is split into
//! affine pieces over convex cells of the unit cube, and each piece is
//! optimised exactly.

pub mod fm;
pub mod linear;
mod regions;

use std::collections::BTreeSet;

pub use fm::{lp_feasible, minimize, Optimum};
pub use linear::{Assignment, Constraint, LinExpr, Point, Relation};
pub use regions::Partition;

use regions::{pieces, refine, Cell, Piece};

use crate::formula::Formula;
use crate::semantics::{Rat, Valuation};

/// One affine piece of a formula's value function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub constraints: Vec<Constraint>,
    pub value: LinExpr,
}

impl Region {
    pub fn contains<A: Assignment>(&self, v: &A) -> bool {
        self.constraints.iter().all(|c| c.holds_at(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Tautology,
    Counterexample { witness: Valuation, value: Rat },
    Satisfiable { witness: Valuation, value: Rat },
    Unsatisfiable,
}

impl Verdict {
    /// Tautology or Satisfiable.
    pub fn is_affirmative(&self) -> bool {
        matches!(self, Verdict::Tautology | Verdict::Satisfiable { .. })
    }
}

fn to_valuation(p: &Point, vars: &BTreeSet<String>) -> Valuation {
    let mut v = Valuation::new();
    for name in vars {
        let x = p.get(name).cloned().unwrap_or_else(Rat::zero);
        v.set(name.clone(), x).expect("cell points stay inside the unit cube");
    }
    v
}

/// Pieces covering `[0,1]^vars`, each with its constraints and value.
/// Every & and → contributes one split; splits that leave a side empty
/// are pruned.
pub fn linearize(f: &Formula) -> Vec<Region> {
    pieces(f, &BTreeSet::new())
        .into_iter()
        .map(|p| Region {
            constraints: p.cell.constraints(),
            value: p.value,
        })
        .collect()
}

fn min_over(ps: &[Piece]) -> (Rat, Point) {
    let mut best: Option<(Rat, Point)> = None;
    for piece in ps {
        let (value, point) = piece.cell.minimum(&piece.value);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            let done = value.is_zero();
            best = Some((value, point));
            if done {
                break;
            }
        }
    }
    best.expect("refinement yields at least one piece")
}

/// Global minimum of the value of `f` over all valuations, with a witness
/// over exactly the variables of `f`.
pub fn min_value(f: &Formula) -> (Rat, Valuation) {
    let (value, point) = min_over(&pieces(f, &BTreeSet::new()));
    (value, to_valuation(&point, &f.variables()))
}

pub fn max_value(f: &Formula) -> (Rat, Valuation) {
    let (value, witness) = min_value(&Formula::not(f.clone()));
    (Rat::one() - value, witness)
}

/// Minimum of `f` over the valuations giving every hypothesis value 1, or
/// `None` when no valuation does.
pub fn min_value_under(f: &Formula, hyps: &[Formula]) -> Option<(Rat, Valuation)> {
    let mut vars = f.variables();
    for h in hyps {
        vars.extend(h.variables());
    }
    let mut cells = vec![Cell::unit_box(&vars)];
    for h in hyps {
        let mut next = Vec::new();
        for cell in cells {
            for piece in refine(h, cell) {
                let gap = piece.value.add_const(&-Rat::one());
                if let (Some(cell), _) = piece.cell.branch(&gap) {
                    next.push(cell);
                }
            }
        }
        cells = next;
    }
    if cells.is_empty() {
        return None;
    }
    let ps: Vec<Piece> = cells.into_iter().flat_map(|c| refine(f, c)).collect();
    let (value, point) = min_over(&ps);
    Some((value, to_valuation(&point, &vars)))
}

/// True when every valuation giving all of `hyps` value 1 gives `f` value 1.
pub fn entails(hyps: &[Formula], f: &Formula) -> bool {
    min_value_under(f, hyps).is_none_or(|(v, _)| v.is_one())
}

pub fn is_tautology(f: &Formula) -> Verdict {
    let (value, witness) = min_value(f);
    if value.is_one() {
        Verdict::Tautology
    } else {
        Verdict::Counterexample { witness, value }
    }
}

/// Is there a valuation giving `f` value 1?
pub fn sat_at_one(f: &Formula) -> Verdict {
    let (value, witness) = max_value(f);
    if value.is_one() {
        Verdict::Satisfiable { witness, value }
    } else {
        Verdict::Unsatisfiable
    }
}

/// Is there a valuation giving `f` a positive value? The witness maximises `f`.
pub fn positively_satisfiable(f: &Formula) -> Verdict {
    match Partition::top().conjoin(f).maximum() {
        Some((value, point)) => Verdict::Satisfiable {
            witness: to_valuation(&point, &f.variables()),
            value,
        },
        None => Verdict::Unsatisfiable,
    }
}

/// Witness maximising the conjunction recorded in `partition`, if positive.
pub fn partition_maximum(partition: &Partition) -> Option<(Rat, Valuation)> {
    partition
        .maximum()
        .map(|(value, point)| (value, to_valuation(&point, partition.variables())))
}
