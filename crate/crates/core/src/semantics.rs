//! Exact [0,1] semantics: rational truth values, valuations, evaluation,
//! and the finite grid used as a brute-force oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::formula::{is_identifier, Formula};

/// Exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn half() -> Rat {
        Rat::new(1, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn max(self, other: Rat) -> Rat {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Rat) -> Rat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn in_unit_interval(&self) -> bool {
        !self.is_negative() && self.0 <= BigRational::one()
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("`{0}` is not a rational number")]
    BadNumber(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("value {value} for `{name}` lies outside [0,1]")]
    OutOfRange { name: String, value: Rat },
    #[error("malformed assignment `{0}`, expected name=num/den")]
    BadAssignment(String),
    #[error("`{0}` is not a valid proposition name")]
    BadName(String),
    #[error("proposition `{0}` assigned twice")]
    Duplicate(String),
}

impl FromStr for Rat {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Rat, ValueError> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| ValueError::BadNumber(s.to_string()))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(ValueError::ZeroDenominator(s.to_string()));
                }
                Ok(Rat(BigRational::new(parse_int(n)?, den)))
            }
            None => Ok(Rat(BigRational::from_integer(parse_int(s)?))),
        }
    }
}

/// Assignment of truth values in [0,1] to proposition names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Valuation(BTreeMap<String, Rat>);

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    /// Sets `name` to `value`, rejecting values outside [0,1].
    pub fn set(&mut self, name: impl Into<String>, value: Rat) -> Result<(), ValueError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(ValueError::BadName(name));
        }
        if !value.in_unit_interval() {
            return Err(ValueError::OutOfRange { name, value });
        }
        self.0.insert(name, value);
        Ok(())
    }

    pub fn with(mut self, name: &str, value: Rat) -> Result<Valuation, ValueError> {
        self.set(name, value)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Rat> {
        self.0.get(name)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rat)> {
        self.0.iter()
    }

    /// Keeps only the listed names.
    pub fn restrict(&self, names: &BTreeSet<String>) -> Valuation {
        Valuation(
            self.0
                .iter()
                .filter(|(k, _)| names.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        )
    }
}

/// `p=1/2,q=1`; the empty valuation prints as `{}`.
impl fmt::Display for Valuation {
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

impl FromStr for Valuation {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Valuation, ValueError> {
        let s = s.trim();
        let mut val = Valuation::new();
        if s.is_empty() || s == "{}" {
            return Ok(val);
        }
        for part in s.split(',') {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| ValueError::BadAssignment(part.to_string()))?;
            let name = name.trim();
            if val.0.contains_key(name) {
                return Err(ValueError::Duplicate(name.to_string()));
            }
            val.set(name, value.parse()?)?;
        }
        Ok(val)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("proposition `{0}` has no value")]
    Unbound(String),
}

/// Value of `f` under `v`.
pub fn eval(f: &Formula, v: &Valuation) -> Result<Rat, EvalError> {
    Ok(match f {
        Formula::Bottom => Rat::zero(),
        Formula::Prop(p) => v
            .get(p)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(p.clone()))?,
        Formula::Not(a) => Rat::one() - eval(a, v)?,
        Formula::StrongConj(a, b) => {
            let s = eval(a, v)? + eval(b, v)? - Rat::one();
            s.max(Rat::zero())
        }
        Formula::Implies(a, b) => {
            let t = Rat::one() - eval(a, v)? + eval(b, v)?;
            t.min(Rat::one())
        }
    })
}

pub fn is_true_under(f: &Formula, v: &Valuation) -> Result<bool, EvalError> {
    Ok(eval(f, v)?.is_one())
}

/// Odometer over `{0, 1/n, …, 1}^vars`; the last variable varies fastest.
#[derive(Debug, Clone)]
pub struct GridValuations {
    names: Vec<String>,
    n: u32,
    digits: Vec<u32>,
    done: bool,
}

impl Iterator for GridValuations {
    type Item = Valuation;

    fn next(&mut self) -> Option<Valuation> {
        if self.done {
            return None;
        }
        let mut val = Valuation::new();
        for (name, &d) in self.names.iter().zip(&self.digits) {
            val.0
                .insert(name.clone(), Rat::new(d as i64, self.n as i64));
        }
        // advance
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.digits[i] < self.n {
                self.digits[i] += 1;
                for d in &mut self.digits[i + 1..] {
                    *d = 0;
                }
                break;
            }
        }
        Some(val)
    }
}

/// All `(n+1)^|vars|` valuations with values in `{k/n}`. Panics if `n == 0`.
pub fn grid_valuations(vars: &BTreeSet<String>, n: u32) -> GridValuations {
    assert!(n >= 1, "grid resolution must be positive");
    GridValuations {
        names: vars.iter().cloned().collect(),
        n,
        digits: vec![0; vars.len()],
        done: false,
    }
}

/// Exact minimum of `f` over the `{k/n}` grid with the first minimising point.
pub fn grid_min(f: &Formula, n: u32) -> (Rat, Valuation) {
    let mut best: Option<(Rat, Valuation)> = None;
    for v in grid_valuations(&f.variables(), n) {
        let value = eval(f, &v).expect("grid assigns every variable");
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, v));
        }
    }
    best.expect("grid is never empty")
}

/// Exact maximum of `f` over the `{k/n}` grid.
pub fn grid_max(f: &Formula, n: u32) -> (Rat, Valuation) {
    let mut best: Option<(Rat, Valuation)> = None;
    for v in grid_valuations(&f.variables(), n) {
        let value = eval(f, &v).expect("grid assigns every variable");
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, v));
        }
    }
    best.expect("grid is never empty")
}
