//! Words in the enveloping algebra (localized at a single `f_i`), brackets,
//! the twisting series `Θ_z`, and the action of such words on elements.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::modspace::{is_member, project, ModuleContext};
use crate::realization::{act_raw, apply_generator, Generator};
use crate::ring::{qi, rational_string, Element, Rational, Var};

/// Default bound on the length of `ad f_i` chains in [`theta`].
pub const AD_NILPOTENCY_BOUND: usize = 6;

/// Ordered product of generator powers. Adjacent equal generators are
/// merged; zero powers are removed.
pub type Factors = Vec<(Generator, i64)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UWord {
    pub coeff: Rational,
    pub factors: Factors,
}

/// Finite sum of words. Words with identical factor lists are collected;
/// no PBW rewriting happens, so equality here is only syntactic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UElement {
    words: BTreeMap<Factors, Rational>,
}

fn push_factor(fs: &mut Factors, g: Generator, p: i64) {
    if p == 0 {
        return;
    }
    if let Some(last) = fs.last_mut() {
        if last.0 == g {
            last.1 += p;
            if last.1 == 0 {
                fs.pop();
            }
            return;
        }
    }
    fs.push((g, p));
}

fn concat(a: &Factors, b: &Factors) -> Factors {
    let mut out = a.clone();
    for &(g, p) in b {
        push_factor(&mut out, g, p);
    }
    out
}

impl UElement {
    pub fn zero() -> Self {
        UElement::default()
    }

    pub fn scalar(c: Rational) -> Self {
        UElement::word(c, Vec::new())
    }

    pub fn one() -> Self {
        UElement::scalar(Rational::one())
    }

    pub fn gen(g: Generator) -> Self {
        UElement::word(Rational::one(), vec![(g, 1)])
    }

    pub fn pow(g: Generator, p: i64) -> Self {
        UElement::word(Rational::one(), vec![(g, p)])
    }

    pub fn word(c: Rational, factors: Factors) -> Self {
        let mut fs = Vec::new();
        for (g, p) in factors {
            push_factor(&mut fs, g, p);
        }
        let mut out = UElement::zero();
        out.add_word(fs, c);
        out
    }

    fn add_word(&mut self, fs: Factors, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.words.entry(fs).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.words.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = UWord> + '_ {
        self.words.iter().map(|(f, c)| UWord {
            coeff: c.clone(),
            factors: f.clone(),
        })
    }

    pub fn add(&self, other: &UElement) -> UElement {
        let mut out = self.clone();
        for (f, c) in &other.words {
            out.add_word(f.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &UElement) -> UElement {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> UElement {
        let mut out = UElement::zero();
        for (f, a) in &self.words {
            out.add_word(f.clone(), a * c);
        }
        out
    }

    /// Product `self · other` (apply `other` first).
    pub fn mul(&self, other: &UElement) -> UElement {
        let mut out = UElement::zero();
        for (f1, c1) in &self.words {
            for (f2, c2) in &other.words {
                out.add_word(concat(f1, f2), c1 * c2);
            }
        }
        out
    }

    pub fn powi(&self, n: u32) -> UElement {
        (0..n).fold(UElement::one(), |acc, _| acc.mul(self))
    }

    /// Largest absolute loop-degree among the factors.
    pub fn max_abs_degree(&self) -> i64 {
        self.words
            .keys()
            .flat_map(|f| f.iter().map(|(g, _)| g.degree().abs()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (fs, c)) in self.words.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let body: Vec<String> = fs
                .iter()
                .map(|(g, p)| {
                    if *p == 1 {
                        g.to_string()
                    } else {
                        format!("{g}^{p}")
                    }
                })
                .collect();
            if body.is_empty() {
                write!(f, "{}", rational_string(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", body.join("*"))?;
            } else {
                write!(f, "{}*{}", rational_string(&mag), body.join("*"))?;
            }
        }
        Ok(())
    }
}

/// The Lie bracket `[a, b]` with `(e,f) = 1`, `(h,h) = 2`.
pub fn bracket(a: Generator, b: Generator) -> UElement {
    use Generator::*;
    let central = |c: i64| UElement::gen(C).scale(&qi(c));
    let g = |x: Generator, c: i64| UElement::gen(x).scale(&qi(c));
    match (a, b) {
        (C, _) | (_, C) | (Dg, Dg) => UElement::zero(),
        (Dg, x) => g(x, x.degree()),
        (x, Dg) => g(x, -x.degree()),
        (E(m), F(n)) => {
            let base = UElement::gen(H(m + n));
            if m == -n {
                base.add(&central(m))
            } else {
                base
            }
        }
        (F(n), E(m)) => bracket(E(m), F(n)).scale(&-Rational::one()),
        (H(m), E(n)) => g(E(m + n), 2),
        (E(n), H(m)) => g(E(m + n), -2),
        (H(m), F(n)) => g(F(m + n), -2),
        (F(n), H(m)) => g(F(m + n), 2),
        (H(m), H(n)) => {
            if m == -n {
                central(2 * m)
            } else {
                UElement::zero()
            }
        }
        (E(_), E(_)) | (F(_), F(_)) => UElement::zero(),
    }
}

fn apply_factors(fs: &Factors, v: &Element, ctx: &ModuleContext) -> Result<Element> {
    let mut cur = v.clone();
    for &(g, p) in fs.iter().rev() {
        if cur.is_zero() {
            break;
        }
        match g {
            Generator::F(n) => {
                if p < 0 && ctx.localized_index() != Some(n) {
                    return Err(Error::ContextMismatch(format!(
                        "{g}^{p} needs x[{n}] to be invertible"
                    )));
                }
                cur = project(&cur.scale_var(Var::X(n), p), ctx);
            }
            _ if p < 0 => {
                return Err(Error::ContextMismatch(format!("negative power of {g}")));
            }
            _ => {
                for _ in 0..p {
                    cur = project(&act_raw(g, &cur, ctx), ctx);
                }
            }
        }
    }
    Ok(cur)
}

/// `u · v`, applying each word's factors right to left.
pub fn apply_uelement(u: &UElement, v: &Element, ctx: &ModuleContext) -> Result<Element> {
    if !is_member(v, ctx) {
        return Err(Error::ContextMismatch(format!("{v} is not in {ctx}")));
    }
    let mut out = Element::zero();
    for (fs, c) in &u.words {
        out += &apply_factors(fs, v, ctx)?.scale(c);
    }
    Ok(out)
}

/// `[Φ(a), Φ(b)] v − Φ([a, b]) v`.
pub fn commutator_residual(
    a: Generator,
    b: Generator,
    v: &Element,
    ctx: &ModuleContext,
) -> Result<Element> {
    let ab = apply_generator(a, &apply_generator(b, v, ctx)?, ctx)?;
    let ba = apply_generator(b, &apply_generator(a, v, ctx)?, ctx)?;
    let rhs = apply_uelement(&bracket(a, b), v, ctx)?;
    Ok(&(&ab - &ba) - &rhs)
}

/// `[g, u]` for a generator `g`, by the Leibniz rule on each word.
/// Negative powers are only allowed on generators commuting with `g`.
pub fn ad(g: Generator, u: &UElement) -> Result<UElement> {
    let mut out = UElement::zero();
    for (fs, c) in &u.words {
        for (t, &(h, p)) in fs.iter().enumerate() {
            let br = bracket(g, h);
            if br.is_zero() {
                continue;
            }
            if p < 0 {
                return Err(Error::ContextMismatch(format!(
                    "cannot differentiate negative power of {h}"
                )));
            }
            let prefix: Factors = fs[..t].to_vec();
            let suffix: Factors = fs[t + 1..].to_vec();
            for r in 0..p {
                let left = UElement::word(c.clone(), concat(&prefix, &vec![(h, r)]));
                let right = UElement::word(Rational::one(), concat(&vec![(h, p - 1 - r)], &suffix));
                out = out.add(&left.mul(&br).mul(&right));
            }
        }
    }
    Ok(out)
}

/// `binom(z, j)` for rational `z`.
pub fn binomial(z: &Rational, j: u32) -> Rational {
    let mut out = Rational::one();
    for t in 0..j {
        out = out * (z - qi(t as i64)) / qi(t as i64 + 1);
    }
    out
}

/// `Θ_z(u) = Σ_j binom(z, j) (ad f_i)^j(u) f_i^{−j}`.
pub fn theta(z: &Rational, u: &UElement, i: i64) -> Result<UElement> {
    theta_with_bound(z, u, i, AD_NILPOTENCY_BOUND)
}

pub fn theta_with_bound(z: &Rational, u: &UElement, i: i64, bound: usize) -> Result<UElement> {
    let f = Generator::F(i);
    let mut out = UElement::zero();
    let mut term = u.clone();
    let mut j = 0usize;
    while !term.is_zero() {
        if j > bound {
            return Err(Error::NonNilpotent { bound });
        }
        let b = binomial(z, j as u32);
        if !b.is_zero() {
            let tail = UElement::pow(f, -(j as i64));
            out = out.add(&term.mul(&tail).scale(&b));
        }
        term = ad(f, &term)?;
        j += 1;
    }
    Ok(out)
}
