//! Sparse Laurent polynomials in the variables `x_n` (n ∈ ℤ) and `y_m`
//! (m ≥ 1) with exact rational coefficients.
//!
//! An [`Element`] is a finitely supported map from [`Monomial`] to nonzero
//! [`Rational`]. Every constructor and operation returns the canonical
//! form, so structural equality is mathematical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact coefficient field.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `num/den`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `Some(n)` when `r` is an integer that fits in an `i64`.
pub fn as_integer(r: &Rational) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    i64::try_from(r.to_integer()).ok()
}

/// A variable of the polynomial ring. Ordering puts every `X` before every
/// `Y`, then sorts by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(i64),
    /// Index is strictly positive.
    Y(i64),
}

impl Var {
    pub fn index(self) -> i64 {
        match self {
            Var::X(n) | Var::Y(n) => n,
        }
    }

    pub fn is_x(self) -> bool {
        matches!(self, Var::X(_))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(n) => write!(f, "x[{n}]"),
            Var::Y(m) => write!(f, "y[{m}]"),
        }
    }
}

/// A Laurent monomial: sorted list of `(variable, nonzero exponent)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<(Var, i64)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: Var, e: i64) -> Self {
        Monomial::one().times(v, e)
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs; repeated
    /// variables are merged.
    pub fn from_pairs<I: IntoIterator<Item = (Var, i64)>>(pairs: I) -> Self {
        pairs
            .into_iter()
            .fold(Monomial::one(), |m, (v, e)| m.times(v, e))
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exp(&self, v: Var) -> i64 {
        match self.exps.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(pos) => self.exps[pos].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i64)> + '_ {
        self.exps.iter().copied()
    }

    /// Multiplies by `v^k`.
    pub fn times(mut self, v: Var, k: i64) -> Self {
        if k == 0 {
            return self;
        }
        match self.exps.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(pos) => {
                let e = self.exps[pos].1 + k;
                if e == 0 {
                    self.exps.remove(pos);
                } else {
                    self.exps[pos].1 = e;
                }
            }
            Err(pos) => self.exps.insert(pos, (v, k)),
        }
        self
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        other.iter().fold(self.clone(), |m, (v, e)| m.times(v, e))
    }

    /// Sum of the exponents of the `x` variables.
    pub fn deg_x(&self) -> i64 {
        self.iter().filter(|(v, _)| v.is_x()).map(|(_, e)| e).sum()
    }

    /// Sum of the exponents of the `y` variables.
    pub fn deg_y(&self) -> i64 {
        self.iter().filter(|(v, _)| !v.is_x()).map(|(_, e)| e).sum()
    }

    pub fn has_y(&self) -> bool {
        self.iter().any(|(v, _)| !v.is_x())
    }

    /// Total absolute exponent weighted by `max(1, |index|)`.
    pub fn size(&self) -> i64 {
        self.iter()
            .map(|(v, e)| e.abs() * v.index().abs().max(1))
            .sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A finite linear combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Element::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Element::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut out = Element::zero();
        out.add_term(m, c);
        out
    }

    pub fn monomial(m: Monomial) -> Self {
        Element::term(m, Rational::one())
    }

    pub fn var(v: Var) -> Self {
        Element::monomial(Monomial::var(v, 1))
    }

    pub fn x(n: i64) -> Self {
        Element::var(Var::X(n))
    }

    pub fn y(m: i64) -> Self {
        Element::var(Var::Y(m))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c·m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Keeps only the terms whose monomial satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Partial derivative in `v`, where the stored exponent `e` of `v` is
    /// read as `e + shift`. Terms whose effective exponent is zero vanish.
    pub fn diff(&self, v: Var, shift: &Rational) -> Element {
        let mut out = Element::zero();
        for (m, c) in self.terms() {
            let eff = qi(m.exp(v)) + shift;
            if eff.is_zero() {
                continue;
            }
            out.add_term(m.clone().times(v, -1), c * eff);
        }
        out
    }

    /// Multiplication by `v^k`.
    pub fn scale_var(&self, v: Var, k: i64) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone().times(v, k), c.clone()))
                .collect(),
        }
    }

    pub fn max_abs_index(&self) -> i64 {
        self.monomials()
            .flat_map(|m| m.iter().map(|(v, _)| v.index().abs()))
            .max()
            .unwrap_or(0)
    }
}

impl From<Monomial> for Element {
    fn from(m: Monomial) -> Self {
        Element::monomial(m)
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        for (m, c) in rhs.terms() {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        for (m, c) in rhs.terms() {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, rhs: Element) -> Element {
        self += &rhs;
        self
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(mut self, rhs: Element) -> Element {
        self -= &rhs;
        self
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&-Rational::one())
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl Mul<&Element> for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        let mut out = Element::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in rhs.terms() {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for Element {
    type Output = Element;
    fn mul(self, rhs: Element) -> Element {
        &self * &rhs
    }
}

fn fmt_rational(c: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                fmt_rational(&mag, f)?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                fmt_rational(&mag, f)?;
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

/// Canonical string for a rational: `p` or `p/q`.
pub fn rational_string(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}
