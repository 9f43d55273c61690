use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::semantics::{Rat, Valuation, ValueError};

/// Anything that can supply values for named variables.
pub trait Assignment {
    fn value_of(&self, name: &str) -> Option<&Rat>;
}

impl Assignment for Valuation {
    fn value_of(&self, name: &str) -> Option<&Rat> {
        self.get(name)
    }
}

/// Unrestricted rational point, as produced by the feasibility core.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Point(BTreeMap<String, Rat>);

impl Point {
    pub fn new() -> Point {
        Point::default()
    }

    pub fn get(&self, name: &str) -> Option<&Rat> {
        self.0.get(name)
    }

    pub fn insert(&mut self, name: String, value: Rat) {
        self.0.insert(name, value);
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rat)> {
        self.0.iter()
    }

    /// Fails if some coordinate lies outside [0,1].
    pub fn to_valuation(&self) -> Result<Valuation, ValueError> {
        let mut v = Valuation::new();
        for (n, x) in &self.0 {
            v.set(n.clone(), x.clone())?;
        }
        Ok(v)
    }
}

impl Assignment for Point {
    fn value_of(&self, name: &str) -> Option<&Rat> {
        self.get(name)
    }
}

impl From<&Valuation> for Point {
    fn from(v: &Valuation) -> Point {
        Point(v.iter().map(|(n, x)| (n.clone(), x.clone())).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("{}");
        }
        for (i, (name, value)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

/// Affine expression `constant + Σ coeff·var` over proposition names.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinExpr {
    constant: Rat,
    coeffs: BTreeMap<String, Rat>,
}

impl LinExpr {
    pub fn constant(c: Rat) -> LinExpr {
        LinExpr {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn zero() -> LinExpr {
        LinExpr::constant(Rat::zero())
    }

    pub fn one() -> LinExpr {
        LinExpr::constant(Rat::one())
    }

    pub fn var(name: &str) -> LinExpr {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), Rat::one());
        LinExpr {
            constant: Rat::zero(),
            coeffs,
        }
    }

    /// Builds from raw parts, dropping zero coefficients.
    pub fn from_parts<I: IntoIterator<Item = (String, Rat)>>(constant: Rat, coeffs: I) -> LinExpr {
        let mut out = LinExpr::constant(constant);
        for (name, c) in coeffs {
            out.add_term(&name, &c);
        }
        out
    }

    pub fn constant_term(&self) -> &Rat {
        &self.constant
    }

    pub fn coeff(&self, name: &str) -> Option<&Rat> {
        self.coeffs.get(name)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&String, &Rat)> {
        self.coeffs.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, name: &str, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(name) {
            Some(existing) => existing + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(name);
        } else {
            self.coeffs.insert(name.to_string(), sum);
        }
    }

    pub fn scale(&self, k: &Rat) -> LinExpr {
        if k.is_zero() {
            return LinExpr::zero();
        }
        LinExpr {
            constant: &self.constant * k,
            coeffs: self
                .coeffs
                .iter()
                .map(|(n, c)| (n.clone(), c * k))
                .collect(),
        }
    }

    pub fn add_const(&self, c: &Rat) -> LinExpr {
        LinExpr {
            constant: &self.constant + c,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Value at a point; panics if a variable of the expression is unassigned.
    pub fn eval_at<A: Assignment>(&self, v: &A) -> Rat {
        let mut acc = self.constant.clone();
        for (name, c) in &self.coeffs {
            let x = v
                .value_of(name)
                .unwrap_or_else(|| panic!("no value for `{name}`"));
            acc = acc + c * x;
        }
        acc
    }

    /// Substitutes `replacement` for `name`.
    pub fn substitute(&self, name: &str, replacement: &LinExpr) -> LinExpr {
        match self.coeffs.get(name) {
            None => self.clone(),
            Some(c) => {
                let mut rest = self.clone();
                rest.coeffs.remove(name);
                &rest + &replacement.scale(c)
            }
        }
    }

    /// Divides by the absolute value of the first coefficient, so the
    /// leading coefficient becomes ±1. Constant expressions are returned as is.
    pub fn normalized(&self) -> LinExpr {
        match self.coeffs.values().next() {
            None => self.clone(),
            Some(lead) => self.scale(&lead.abs().recip()),
        }
    }

    /// True if both expressions have the same variable part.
    pub fn same_direction(&self, other: &LinExpr) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<'a> Add<&'a LinExpr> for &'a LinExpr {
    type Output = LinExpr;
    fn add(self, rhs: &'a LinExpr) -> LinExpr {
        let mut out = self.clone();
        out.constant = &out.constant + &rhs.constant;
        for (n, c) in &rhs.coeffs {
            out.add_term(n, c);
        }
        out
    }
}

impl<'a> Sub<&'a LinExpr> for &'a LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: &'a LinExpr) -> LinExpr {
        self + &(-rhs)
    }
}

impl Neg for &LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        LinExpr {
            constant: -&self.constant,
            coeffs: self.coeffs.iter().map(|(n, c)| (n.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, c) in &self.coeffs {
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if mag.is_one() {
                f.write_str(name)?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
            first = false;
        }
        if first {
            return write!(f, "{}", self.constant);
        }
        if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            write!(f, " {sign} {}", self.constant.abs())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `expr ≥ 0`
    Ge,
    /// `expr > 0`
    Gt,
    /// `expr = 0`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub expr: LinExpr,
    pub relation: Relation,
}

impl Constraint {
    pub fn ge(expr: LinExpr) -> Constraint {
        Constraint {
            expr,
            relation: Relation::Ge,
        }
    }

    pub fn gt(expr: LinExpr) -> Constraint {
        Constraint {
            expr,
            relation: Relation::Gt,
        }
    }

    pub fn eq(expr: LinExpr) -> Constraint {
        Constraint {
            expr,
            relation: Relation::Eq,
        }
    }

    pub fn holds_at<A: Assignment>(&self, v: &A) -> bool {
        let x = self.expr.eval_at(v);
        match self.relation {
            Relation::Ge => !x.is_negative(),
            Relation::Gt => x.is_positive(),
            Relation::Eq => x.is_zero(),
        }
    }

    /// Strict inequalities relaxed to non-strict ones.
    pub fn closure(&self) -> Constraint {
        match self.relation {
            Relation::Gt => Constraint::ge(self.expr.clone()),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "=",
        };
        write!(f, "{} {rel} 0", self.expr)
    }
}
