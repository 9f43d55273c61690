//! Exact Fourier–Motzkin elimination with strictness tracking.
//!
//! Equalities are removed first by substitution. The remaining inequalities
//! are projected one variable at a time in lexicographic order, keeping the
//! rows that mention the eliminated variable so a witness can be rebuilt by
//! back-substitution. Back-substitution prefers the lower bound.
//!
//! Projection uses Chernikov's history rule and drops parallel rows that are
//! looser than a kept one. Both only ever remove rows, so an infeasible
//! projection is conclusive. A feasible answer is only reported after the
//! rebuilt point has been checked against every input constraint; if that
//! check fails the solve is repeated without pruning.

use std::collections::{BTreeSet, HashMap};

use super::linear::{Constraint, LinExpr, Point, Relation};
use crate::semantics::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
struct History(Vec<u64>);

impl History {
    fn single(i: usize, len: usize) -> History {
        let mut words = vec![0u64; len.div_ceil(64).max(1)];
        words[i / 64] |= 1 << (i % 64);
        History(words)
    }

    fn widened(&self, len: usize) -> History {
        let mut words = self.0.clone();
        words.resize(len.div_ceil(64).max(1), 0);
        History(words)
    }

    fn union(&self, other: &History) -> History {
        History(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// `Σ coeffs[i]·x_i + constant  (≥ | >)  0`
#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<Rat>,
    constant: Rat,
    strict: bool,
    history: History,
}

impl Row {
    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// Holds when every coefficient is zero.
    fn constant_holds(&self) -> bool {
        if self.strict {
            self.constant.is_positive()
        } else {
            !self.constant.is_negative()
        }
    }

    fn normalize(mut self) -> Row {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()) {
            let k = lead.abs().recip();
            if !k.is_one() {
                for c in &mut self.coeffs {
                    *c = &*c * &k;
                }
                self.constant = &self.constant * &k;
            }
        }
        self
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pruning {
    On,
    Off,
}

/// Projects out columns `0..ncols` in order. `None` means infeasible.
fn eliminate(ncols: usize, rows: Vec<Row>, pruning: Pruning) -> Option<Vec<Vec<Row>>> {
    let mut rows = tidy(rows, pruning)?;
    let mut stages = Vec::with_capacity(ncols);
    for k in 0..ncols {
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut next = Vec::new();
        for row in rows {
            if row.coeffs[k].is_positive() {
                lower.push(row);
            } else if row.coeffs[k].is_negative() {
                upper.push(row);
            } else {
                next.push(row);
            }
        }
        for lo in &lower {
            for up in &upper {
                let history = lo.history.union(&up.history);
                if pruning == Pruning::On && history.count() > k + 2 {
                    continue;
                }
                let a = -&up.coeffs[k];
                let b = lo.coeffs[k].clone();
                let coeffs = lo
                    .coeffs
                    .iter()
                    .zip(&up.coeffs)
                    .map(|(x, y)| x * &a + y * &b)
                    .collect();
                next.push(Row {
                    coeffs,
                    constant: &lo.constant * &a + &up.constant * &b,
                    strict: lo.strict || up.strict,
                    history,
                });
            }
        }
        lower.extend(upper);
        stages.push(lower);
        rows = tidy(next, pruning)?;
    }
    Some(stages)
}

/// Drops satisfied constant rows, detects violated ones, and (when pruning)
/// keeps only the tightest row of each direction.
fn tidy(rows: Vec<Row>, pruning: Pruning) -> Option<Vec<Row>> {
    let mut out: Vec<Row> = Vec::with_capacity(rows.len());
    let mut by_direction: HashMap<Vec<Rat>, usize> = HashMap::new();
    for row in rows {
        if row.is_trivial() {
            if row.constant_holds() {
                continue;
            }
            return None;
        }
        if pruning == Pruning::Off {
            out.push(row);
            continue;
        }
        let row = row.normalize();
        match by_direction.get(&row.coeffs) {
            Some(&i) => {
                let kept = &out[i];
                let tighter = row.constant < kept.constant
                    || (row.constant == kept.constant && row.strict && !kept.strict);
                if tighter {
                    out[i] = row;
                }
            }
            None => {
                by_direction.insert(row.coeffs.clone(), out.len());
                out.push(row);
            }
        }
    }
    Some(out)
}

/// Bound on `x_k` implied by `row` given values for columns after `k`.
fn bound_for(row: &Row, k: usize, values: &[Option<Rat>]) -> Rat {
    let mut rest = row.constant.clone();
    for (j, c) in row.coeffs.iter().enumerate().skip(k + 1) {
        if !c.is_zero() {
            rest = rest + c * values[j].as_ref().expect("later columns assigned first");
        }
    }
    // a·x + rest ⋈ 0  ⇒  x ⋈' −rest/a
    -rest / &row.coeffs[k]
}

struct Bounds {
    lower: Option<(Rat, bool)>,
    upper: Option<(Rat, bool)>,
}

fn bounds_at(stage: &[Row], k: usize, values: &[Option<Rat>]) -> Bounds {
    let mut lower: Option<(Rat, bool)> = None;
    let mut upper: Option<(Rat, bool)> = None;
    for row in stage {
        let b = bound_for(row, k, values);
        if row.coeffs[k].is_positive() {
            lower = Some(match lower {
                None => (b, row.strict),
                Some((cur, s)) => {
                    if b > cur {
                        (b, row.strict)
                    } else if b == cur {
                        (cur, s || row.strict)
                    } else {
                        (cur, s)
                    }
                }
            });
        } else {
            upper = Some(match upper {
                None => (b, row.strict),
                Some((cur, s)) => {
                    if b < cur {
                        (b, row.strict)
                    } else if b == cur {
                        (cur, s || row.strict)
                    } else {
                        (cur, s)
                    }
                }
            });
        }
    }
    Bounds { lower, upper }
}

fn pick(bounds: &Bounds) -> Rat {
    match (&bounds.lower, &bounds.upper) {
        (Some((lo, false)), _) => lo.clone(),
        (Some((lo, true)), Some((hi, _))) => (lo + hi) / &Rat::int(2),
        (Some((lo, true)), None) => lo + &Rat::one(),
        (None, Some((hi, false))) => hi.clone(),
        (None, Some((hi, true))) => hi - &Rat::one(),
        (None, None) => Rat::zero(),
    }
}

fn back_substitute(stages: &[Vec<Row>], ncols: usize) -> Vec<Rat> {
    let mut values: Vec<Option<Rat>> = vec![None; ncols];
    for k in (0..ncols).rev() {
        let b = bounds_at(&stages[k], k, &values);
        values[k] = Some(pick(&b));
    }
    values.into_iter().map(|v| v.unwrap()).collect()
}

/// Inequalities left after substituting away the equalities, plus the
/// substitutions to replay (in reverse) when building a witness.
struct Reduced {
    inequalities: Vec<(LinExpr, bool)>,
    substitutions: Vec<(String, LinExpr)>,
    names: BTreeSet<String>,
}

fn reduce(cs: &[Constraint]) -> Option<Reduced> {
    let mut names = BTreeSet::new();
    let mut inequalities = Vec::new();
    let mut equalities = Vec::new();
    for c in cs {
        for (n, _) in c.expr.terms() {
            names.insert(n.clone());
        }
        match c.relation {
            Relation::Ge => inequalities.push((c.expr.clone(), false)),
            Relation::Gt => inequalities.push((c.expr.clone(), true)),
            Relation::Eq => equalities.push(c.expr.clone()),
        }
    }
    let mut substitutions = Vec::new();
    let mut i = 0;
    while i < equalities.len() {
        let e = equalities[i].clone();
        i += 1;
        let Some((name, a)) = e.terms().next().map(|(n, a)| (n.clone(), a.clone())) else {
            if e.constant_term().is_zero() {
                continue;
            }
            return None;
        };
        // a·x + rest = 0  ⇒  x = −rest/a
        let rest = &e - &LinExpr::var(&name).scale(&a);
        let replacement = rest.scale(&-(a.recip()));
        for later in equalities.iter_mut().skip(i) {
            *later = later.substitute(&name, &replacement);
        }
        for (ineq, _) in inequalities.iter_mut() {
            *ineq = ineq.substitute(&name, &replacement);
        }
        substitutions.push((name, replacement));
    }
    Some(Reduced {
        inequalities,
        substitutions,
        names,
    })
}

fn to_rows(ineqs: &[(LinExpr, bool)], columns: &[String]) -> Vec<Row> {
    let index: HashMap<&str, usize> = columns
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let total = ineqs.len();
    ineqs
        .iter()
        .enumerate()
        .map(|(i, (e, strict))| {
            let mut coeffs = vec![Rat::zero(); columns.len()];
            for (n, c) in e.terms() {
                coeffs[index[n.as_str()]] = c.clone();
            }
            Row {
                coeffs,
                constant: e.constant_term().clone(),
                strict: *strict,
                history: History::single(i, total),
            }
        })
        .collect()
}

fn columns_of(ineqs: &[(LinExpr, bool)]) -> Vec<String> {
    let mut cols = BTreeSet::new();
    for (e, _) in ineqs {
        for (n, _) in e.terms() {
            cols.insert(n.clone());
        }
    }
    cols.into_iter().collect()
}

/// Completes a point on the reduced columns to all constraint variables.
fn complete(reduced: &Reduced, columns: &[String], values: &[Rat]) -> Point {
    let mut point: HashMap<String, Rat> = columns
        .iter()
        .cloned()
        .zip(values.iter().cloned())
        .collect();
    let substituted: BTreeSet<&String> = reduced.substitutions.iter().map(|(n, _)| n).collect();
    for n in &reduced.names {
        if !point.contains_key(n) && !substituted.contains(n) {
            point.insert(n.clone(), Rat::zero());
        }
    }
    for (name, repl) in reduced.substitutions.iter().rev() {
        let mut v = repl.constant_term().clone();
        for (n, c) in repl.terms() {
            v = v + c * point.get(n).expect("replacement variables assigned");
        }
        point.insert(name.clone(), v);
    }
    let mut out = Point::new();
    for (n, v) in point {
        out.insert(n, v);
    }
    out
}

/// Finds an exact rational point satisfying every constraint, or `None` if
/// the system is infeasible. Strict inequalities are honoured.
pub fn lp_feasible(cs: &[Constraint]) -> Option<Point> {
    let reduced = reduce(cs)?;
    let columns = columns_of(&reduced.inequalities);
    let rows = to_rows(&reduced.inequalities, &columns);
    for pruning in [Pruning::On, Pruning::Off] {
        let stages = eliminate(columns.len(), rows.clone(), pruning)?;
        let values = back_substitute(&stages, columns.len());
        let point = complete(&reduced, &columns, &values);
        if cs.iter().all(|c| c.holds_at(&point)) {
            return Some(point);
        }
    }
    unreachable!("unpruned elimination always yields a valid witness")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Optimum {
    Infeasible,
    Unbounded,
    Finite(Rat, Point),
}

/// Minimises `objective` over the closure of the constraint set (strict
/// inequalities relaxed). The returned point attains the minimum exactly.
pub fn minimize(cs: &[Constraint], objective: &LinExpr) -> Optimum {
    let closed: Vec<Constraint> = cs.iter().map(Constraint::closure).collect();
    let Some(reduced) = reduce(&closed) else {
        return Optimum::Infeasible;
    };
    let mut objective = objective.clone();
    for (name, repl) in &reduced.substitutions {
        objective = objective.substitute(name, repl);
    }
    let mut columns = columns_of(&reduced.inequalities);
    for (n, _) in objective.terms() {
        if !columns.contains(n) {
            columns.push(n.clone());
        }
    }
    columns.sort();
    // The bound variable t sits in the last column and is eliminated last;
    // t − objective ≥ 0.
    let t_col = columns.len();
    let mut rows = to_rows(&reduced.inequalities, &columns);
    let total = rows.len() + 1;
    for row in &mut rows {
        row.coeffs.push(Rat::zero());
        row.history = row.history.widened(total);
    }
    let mut t_row = vec![Rat::zero(); t_col + 1];
    for (n, c) in objective.terms() {
        let i = columns.binary_search(n).unwrap();
        t_row[i] = -c;
    }
    t_row[t_col] = Rat::one();
    rows.push(Row {
        coeffs: t_row,
        constant: -objective.constant_term(),
        strict: false,
        history: History::single(total - 1, total),
    });

    for pruning in [Pruning::On, Pruning::Off] {
        let Some(stages) = eliminate(t_col + 1, rows.clone(), pruning) else {
            return Optimum::Infeasible;
        };
        let has_lower = stages[t_col].iter().any(|r| r.coeffs[t_col].is_positive());
        if !has_lower {
            return Optimum::Unbounded;
        }
        let values = back_substitute(&stages, t_col + 1);
        let min = values[t_col].clone();
        let point = complete(&reduced, &columns, &values[..t_col]);
        let original = point_with_objective_vars(point, &objective);
        if closed.iter().all(|c| c.holds_at(&original)) && objective.eval_at(&original) == min {
            return Optimum::Finite(min, original);
        }
    }
    unreachable!("unpruned elimination always yields an optimal witness")
}

fn point_with_objective_vars(mut point: Point, objective: &LinExpr) -> Point {
    for (n, _) in objective.terms() {
        if point.get(n).is_none() {
            point.insert(n.clone(), Rat::zero());
        }
    }
    point
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> LinExpr {
        LinExpr::var("x")
    }
    fn y() -> LinExpr {
        LinExpr::var("y")
    }
    fn c(n: i64, d: i64) -> LinExpr {
        LinExpr::constant(Rat::new(n, d))
    }

    #[test]
    fn forced_point() {
        let cs = vec![
            Constraint::ge(x()),
            Constraint::ge(&c(1, 1) - &x()),
            Constraint::eq(&x() - &c(1, 2)),
        ];
        let w = lp_feasible(&cs).unwrap();
        assert_eq!(w.get("x"), Some(&Rat::half()));
    }

    #[test]
    fn strict_contradiction() {
        let cs = vec![Constraint::gt(x()), Constraint::gt(-&x())];
        assert!(lp_feasible(&cs).is_none());
        // x ≥ 0 and −x ≥ 0 is the single point 0.
        let cs = vec![Constraint::ge(x()), Constraint::ge(-&x())];
        assert_eq!(lp_feasible(&cs).unwrap().get("x"), Some(&Rat::zero()));
        let cs = vec![Constraint::ge(x()), Constraint::gt(-&x())];
        assert!(lp_feasible(&cs).is_none());
    }

    #[test]
    fn strict_corner_of_the_square() {
        let cs = vec![
            Constraint::ge(x()),
            Constraint::ge(y()),
            Constraint::gt(&(&x() + &y()) - &c(1, 1)),
            Constraint::ge(&c(1, 1) - &x()),
            Constraint::ge(&c(1, 1) - &y()),
        ];
        let w = lp_feasible(&cs).unwrap();
        assert!(cs.iter().all(|k| k.holds_at(&w)));
        // Deterministic choice: y from the projected open interval (0,1],
        // then x from (1-y, 1].
        assert_eq!(w.to_string(), "x=3/4,y=1/2");
    }

    #[test]
    fn constant_constraints() {
        assert!(lp_feasible(&[Constraint::gt(c(-1, 2))]).is_none());
        assert!(lp_feasible(&[Constraint::eq(c(1, 2))]).is_none());
        assert!(lp_feasible(&[Constraint::ge(LinExpr::zero())]).unwrap().is_empty());
        assert!(lp_feasible(&[]).unwrap().is_empty());
    }

    #[test]
    fn equalities_chain() {
        // x = y, y = 1/3, free z bounded below by x
        let z = LinExpr::var("z");
        let cs = vec![
            Constraint::eq(&x() - &y()),
            Constraint::eq(&y() - &c(1, 3)),
            Constraint::gt(&z - &x()),
        ];
        let w = lp_feasible(&cs).unwrap();
        assert_eq!(w.get("x"), Some(&Rat::new(1, 3)));
        assert_eq!(w.get("y"), Some(&Rat::new(1, 3)));
        assert!(cs.iter().all(|k| k.holds_at(&w)));
    }

    #[test]
    fn minimisation_over_closure() {
        // minimise x + y over {x ≥ 0, y ≥ 0, x + y > 1/2, x ≤ 1, y ≤ 1}
        let cs = vec![
            Constraint::ge(x()),
            Constraint::ge(y()),
            Constraint::gt(&(&x() + &y()) - &c(1, 2)),
            Constraint::ge(&c(1, 1) - &x()),
            Constraint::ge(&c(1, 1) - &y()),
        ];
        match minimize(&cs, &(&x() + &y())) {
            Optimum::Finite(v, w) => {
                assert_eq!(v, Rat::half());
                assert_eq!((&x() + &y()).eval_at(&w), Rat::half());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(minimize(&[Constraint::ge(x())], &-&x()), Optimum::Unbounded);
        assert_eq!(
            minimize(&[Constraint::ge(x()), Constraint::ge(&c(-1, 1) - &x())], &x()),
            Optimum::Infeasible
        );
    }

    #[test]
    fn minimise_constant_objective() {
        let cs = vec![Constraint::ge(x()), Constraint::ge(&c(1, 1) - &x())];
        match minimize(&cs, &c(2, 3)) {
            Optimum::Finite(v, w) => {
                assert_eq!(v, Rat::new(2, 3));
                assert!(w.get("x").is_some());
            }
            other => panic!("{other:?}"),
        }
    }
}
