//! Case-splitting of the piecewise-linear value function into affine pieces.
//!
//! Refinement walks the formula top-down carrying a cell (a conjunction of
//! linear constraints together with a point known to satisfy them). Each
//! `&` and `→` node splits its cell along one hyperplane: the clamped side
//! is closed, the affine side is open, so the two sides partition the cell.
//! The carried point settles one side for free; the other side is settled
//! syntactically when a parallel constraint decides it, and by the
//! feasibility core otherwise. Empty sides are dropped immediately.

use std::collections::BTreeSet;
use std::rc::Rc;

use super::fm::{lp_feasible, minimize, Optimum};
use super::linear::{Constraint, LinExpr, Point, Relation};
use crate::formula::Formula;
use crate::semantics::Rat;

struct Link {
    constraint: Constraint,
    normal: LinExpr,
    next: Option<Rc<Link>>,
}

/// A convex cell with a point inside it. Constraint lists are shared
/// between cells through a persistent linked list.
#[derive(Clone)]
pub(crate) struct Cell {
    head: Option<Rc<Link>>,
    pub(crate) point: Point,
}

enum Sign {
    NonNegative,
    Negative,
    Unknown,
}

impl Cell {
    pub(crate) fn unconstrained() -> Cell {
        Cell {
            head: None,
            point: Point::new(),
        }
    }

    /// The unit box over `vars`, with the origin as its point.
    pub(crate) fn unit_box<'a, I: IntoIterator<Item = &'a String>>(vars: I) -> Cell {
        Cell::unconstrained().with_bounds(vars)
    }

    /// Adds `0 ≤ x ≤ 1` for each new variable, placing the point at 0 there.
    pub(crate) fn with_bounds<'a, I: IntoIterator<Item = &'a String>>(&self, vars: I) -> Cell {
        let mut cell = self.clone();
        for v in vars {
            if cell.point.get(v).is_some() {
                continue;
            }
            let x = LinExpr::var(v);
            cell.point.insert(v.clone(), Rat::zero());
            let point = cell.point.clone();
            cell = cell.push(Constraint::ge(x.clone()), point.clone());
            cell = cell.push(Constraint::ge(&LinExpr::one() - &x), point);
        }
        cell
    }

    /// Adds a constraint, dropping stored parallel ones it makes redundant.
    fn push(&self, constraint: Constraint, point: Point) -> Cell {
        let normal = constraint.expr.normalized();
        let subsumes = |link: &Link| {
            if constraint.relation == Relation::Eq
                || link.constraint.relation == Relation::Eq
                || !link.normal.same_direction(&normal)
            {
                return false;
            }
            let (new_c, old_c) = (normal.constant_term(), link.normal.constant_term());
            new_c < old_c
                || (new_c == old_c
                    && (constraint.relation == Relation::Gt || link.constraint.relation == Relation::Ge))
        };
        let mut head = self.head.clone();
        if self.links().any(&subsumes) {
            let kept: Vec<&Link> = self.links().filter(|l| !subsumes(l)).collect();
            head = None;
            for link in kept.into_iter().rev() {
                head = Some(Rc::new(Link {
                    constraint: link.constraint.clone(),
                    normal: link.normal.clone(),
                    next: head,
                }));
            }
        }
        Cell {
            head: Some(Rc::new(Link {
                constraint,
                normal,
                next: head,
            })),
            point,
        }
    }

    fn links(&self) -> impl Iterator<Item = &Link> {
        std::iter::successors(self.head.as_deref(), |l| l.next.as_deref())
    }

    /// Constraints in insertion order.
    pub(crate) fn constraints(&self) -> Vec<Constraint> {
        let mut out: Vec<Constraint> = self.links().map(|l| l.constraint.clone()).collect();
        out.reverse();
        out
    }

    /// Sign of `e` on the cell as far as parallel stored constraints tell.
    fn sign_of(&self, e: &LinExpr) -> Sign {
        let n = e.normalized();
        let neg = -&n;
        for link in self.links() {
            let stored = &link.normal;
            let rel = link.constraint.relation;
            if stored.same_direction(&n) {
                // n = stored + (c − c')
                let gap = n.constant_term() - stored.constant_term();
                match rel {
                    Relation::Eq => {
                        return if gap.is_negative() {
                            Sign::Negative
                        } else {
                            Sign::NonNegative
                        };
                    }
                    _ if !gap.is_negative() => return Sign::NonNegative,
                    _ => {}
                }
            } else if stored.same_direction(&neg) {
                // stored = −n + c'' with c'' = stored const + n const, so n ≤ c''
                let bound = stored.constant_term() + n.constant_term();
                match rel {
                    Relation::Eq => {
                        return if bound.is_negative() {
                            Sign::Negative
                        } else {
                            Sign::NonNegative
                        };
                    }
                    Relation::Gt if !bound.is_positive() => return Sign::Negative,
                    Relation::Ge if bound.is_negative() => return Sign::Negative,
                    _ => {}
                }
            }
        }
        Sign::Unknown
    }

    fn feasible_with(&self, extra: &Constraint) -> Option<Point> {
        let mut cs = self.constraints();
        cs.push(extra.clone());
        lp_feasible(&cs)
    }

    /// Splits into the parts where `e ≥ 0` and where `e < 0`; empty parts
    /// are `None`.
    pub(crate) fn branch(&self, e: &LinExpr) -> (Option<Cell>, Option<Cell>) {
        if e.is_constant() {
            return if e.constant_term().is_negative() {
                (None, Some(self.clone()))
            } else {
                (Some(self.clone()), None)
            };
        }
        match self.sign_of(e) {
            Sign::NonNegative => return (Some(self.clone()), None),
            Sign::Negative => return (None, Some(self.clone())),
            Sign::Unknown => {}
        }
        let closed = Constraint::ge(e.clone());
        let open = Constraint::gt(-e);
        if e.eval_at(&self.point).is_negative() {
            let open_cell = self.push(open, self.point.clone());
            match self.feasible_with(&closed) {
                Some(w) => (Some(self.push(closed, w)), Some(open_cell)),
                None => (None, Some(self.clone())),
            }
        } else {
            let closed_cell = self.push(closed, self.point.clone());
            match self.feasible_with(&open) {
                Some(w) => (Some(closed_cell), Some(self.push(open, w))),
                None => (Some(self.clone()), None),
            }
        }
    }

    /// Minimum of `value` over the closure of the cell.
    pub(crate) fn minimum(&self, value: &LinExpr) -> (Rat, Point) {
        if value.is_constant() {
            return (value.constant_term().clone(), self.point.clone());
        }
        match minimize(&self.constraints(), value) {
            Optimum::Finite(v, p) => (v, p),
            other => unreachable!("nonempty bounded cell gave {other:?}"),
        }
    }
}

/// A cell together with the affine value of the formula on it.
#[derive(Clone)]
pub(crate) struct Piece {
    pub(crate) cell: Cell,
    pub(crate) value: LinExpr,
}

/// Splits `cell` into pieces on which `f` is affine.
pub(crate) fn refine(f: &Formula, cell: Cell) -> Vec<Piece> {
    match f {
        Formula::Bottom => vec![Piece {
            cell,
            value: LinExpr::zero(),
        }],
        Formula::Prop(p) => vec![Piece {
            cell,
            value: LinExpr::var(p),
        }],
        Formula::Not(a) => refine(a, cell)
            .into_iter()
            .map(|piece| Piece {
                value: &LinExpr::one() - &piece.value,
                cell: piece.cell,
            })
            .collect(),
        Formula::StrongConj(a, b) => {
            let mut out = Vec::new();
            for pa in refine(a, cell) {
                for pb in refine(b, pa.cell) {
                    // max{0, a + b − 1}: clamped where 1 − a − b ≥ 0
                    let sum = (&pa.value + &pb.value).add_const(&-Rat::one());
                    let (clamped, affine) = pb.cell.branch(&-&sum);
                    if let Some(cell) = clamped {
                        out.push(Piece {
                            cell,
                            value: LinExpr::zero(),
                        });
                    }
                    if let Some(cell) = affine {
                        out.push(Piece { cell, value: sum });
                    }
                }
            }
            out
        }
        Formula::Implies(a, b) => {
            let mut out = Vec::new();
            for pa in refine(a, cell) {
                for pb in refine(b, pa.cell) {
                    // min{1, 1 − a + b}: clamped where b − a ≥ 0
                    let diff = &pb.value - &pa.value;
                    let (clamped, affine) = pb.cell.branch(&diff);
                    if let Some(cell) = clamped {
                        out.push(Piece {
                            cell,
                            value: LinExpr::one(),
                        });
                    }
                    if let Some(cell) = affine {
                        out.push(Piece {
                            cell,
                            value: diff.add_const(&Rat::one()),
                        });
                    }
                }
            }
            out
        }
    }
}

/// Pieces of `f` over the unit box of its variables (plus `extra_vars`).
pub(crate) fn pieces(f: &Formula, extra_vars: &BTreeSet<String>) -> Vec<Piece> {
    let mut vars = f.variables();
    vars.extend(extra_vars.iter().cloned());
    refine(f, Cell::unit_box(&vars))
}

/// Affine pieces of the strong conjunction of a growing list of formulas,
/// restricted to where that conjunction is positive. Regions where it is
/// zero are discarded, since conjoining more formulas keeps them at zero.
#[derive(Clone)]
pub struct Partition {
    pieces: Vec<Piece>,
    vars: BTreeSet<String>,
}

impl Partition {
    /// The empty conjunction, constantly 1.
    pub fn top() -> Partition {
        Partition {
            pieces: vec![Piece {
                cell: Cell::unconstrained(),
                value: LinExpr::one(),
            }],
            vars: BTreeSet::new(),
        }
    }

    pub fn of_all<'a, I: IntoIterator<Item = &'a Formula>>(items: I) -> Partition {
        items
            .into_iter()
            .fold(Partition::top(), |acc, f| acc.conjoin(f))
    }

    pub fn conjoin(&self, f: &Formula) -> Partition {
        let fresh: Vec<String> = f
            .variables()
            .into_iter()
            .filter(|v| !self.vars.contains(v))
            .collect();
        let mut vars = self.vars.clone();
        vars.extend(fresh.iter().cloned());
        let mut out = Vec::new();
        for piece in &self.pieces {
            let cell = piece.cell.with_bounds(&fresh);
            for pf in refine(f, cell) {
                let sum = (&piece.value + &pf.value).add_const(&-Rat::one());
                let (_, positive) = pf.cell.branch(&-&sum);
                if let Some(cell) = positive {
                    out.push(Piece { cell, value: sum });
                }
            }
        }
        Partition { pieces: out, vars }
    }

    /// True when the conjunction is identically zero.
    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn variables(&self) -> &BTreeSet<String> {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Maximum of the conjunction with a maximising point, if positive.
    pub fn maximum(&self) -> Option<(Rat, Point)> {
        let mut best: Option<(Rat, Point)> = None;
        for piece in &self.pieces {
            let (neg_min, point) = piece.cell.minimum(&-&piece.value);
            let value = -neg_min;
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                let done = value.is_one();
                best = Some((value, point));
                if done {
                    break;
                }
            }
        }
        best
    }
}
