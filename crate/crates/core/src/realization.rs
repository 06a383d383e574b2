//! The differential-operator realization of the affine generators.
//!
//! With `x_n` (n ∈ ℤ) and `y_m` (m ≥ 1):
//!
//! ```text
//! f_n ↦ x_n
//! h_n ↦ −2 Σ_m x_{m+n} ∂x_m + [n<0] y_{−n} + [n>0] 2nK ∂y_n + [n=0] J
//! e_n ↦ −Σ_{k,m} x_{k+m+n} ∂x_k ∂x_m + Σ_{k>0} y_k ∂x_{−k−n}
//!       + 2K Σ_{m>0} m ∂y_m ∂x_{m−n} + (Kn + J) ∂x_{−n}
//! c   ↦ K
//! d   ↦ D + Σ_n n x_n ∂x_n − Σ_m m y_m ∂y_m
//! ```
//!
//! The zero-charge contexts use the same formulas with `K = 0`, followed by
//! dropping every monomial containing a `y`. All sums are evaluated only
//! over the variables present in each monomial.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modspace::{is_member, project, ModuleContext};
use crate::ring::{qi, Element, Monomial, Rational, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    E(i64),
    F(i64),
    H(i64),
    C,
    Dg,
}

impl Generator {
    /// Loop-degree `n` (0 for `C`, `Dg`).
    pub fn degree(self) -> i64 {
        match self {
            Generator::E(n) | Generator::F(n) | Generator::H(n) => n,
            _ => 0,
        }
    }

    /// All `E(n), F(n), H(n)` with `|n| ≤ range`, then `C`, `Dg`.
    pub fn all_up_to(range: i64) -> Vec<Generator> {
        let mut out = Vec::new();
        for n in -range..=range {
            out.extend([Generator::E(n), Generator::F(n), Generator::H(n)]);
        }
        out.extend([Generator::C, Generator::Dg]);
        out
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::E(n) => write!(f, "e[{n}]"),
            Generator::F(n) => write!(f, "f[{n}]"),
            Generator::H(n) => write!(f, "h[{n}]"),
            Generator::C => write!(f, "c"),
            Generator::Dg => write!(f, "d"),
        }
    }
}

/// `x` variables of `m` with their effective exponents (twist included).
fn x_support(m: &Monomial, ctx: &ModuleContext) -> Vec<(i64, Rational)> {
    let mut out: Vec<(i64, Rational)> = m
        .iter()
        .filter_map(|(v, e)| match v {
            Var::X(n) => Some((n, qi(e) + ctx.shift(v))),
            Var::Y(_) => None,
        })
        .filter(|(_, a)| !a.is_zero())
        .collect();
    if let Some(i) = ctx.i {
        let z = ctx.shift(Var::X(i));
        if !z.is_zero() && m.exp(Var::X(i)) == 0 {
            out.push((i, z));
        }
    }
    out
}

fn eff_x(xs: &[(i64, Rational)], n: i64) -> Option<&Rational> {
    xs.iter().find(|(k, _)| *k == n).map(|(_, a)| a)
}

fn y_support(m: &Monomial) -> impl Iterator<Item = (i64, i64)> + '_ {
    m.iter().filter_map(|(v, e)| match v {
        Var::Y(n) => Some((n, e)),
        Var::X(_) => None,
    })
}

fn act_monomial(g: Generator, m: &Monomial, c: &Rational, ctx: &ModuleContext, out: &mut Element) {
    let p = &ctx.params;
    let k_eff = if ctx.zero_charge() {
        Rational::zero()
    } else {
        p.k.clone()
    };
    match g {
        Generator::F(n) => out.add_term(m.clone().times(Var::X(n), 1), c.clone()),
        Generator::C => out.add_term(m.clone(), c * &k_eff),
        Generator::Dg => {
            let mut ev = p.d.clone();
            for (n, a) in x_support(m, ctx) {
                ev += qi(n) * a;
            }
            for (n, b) in y_support(m) {
                ev -= qi(n * b);
            }
            out.add_term(m.clone(), c * ev);
        }
        Generator::H(n) => {
            for (k, a) in x_support(m, ctx) {
                let t = m.clone().times(Var::X(k), -1).times(Var::X(k + n), 1);
                out.add_term(t, c * qi(-2) * a);
            }
            if n < 0 {
                out.add_term(m.clone().times(Var::Y(-n), 1), c.clone());
            } else if n > 0 {
                let b = m.exp(Var::Y(n));
                if b != 0 {
                    out.add_term(m.clone().times(Var::Y(n), -1), c * qi(2 * n * b) * &k_eff);
                }
            } else {
                out.add_term(m.clone(), c * &p.j);
            }
        }
        Generator::E(n) => {
            let xs = x_support(m, ctx);
            for (k, a) in &xs {
                for (l, b) in &xs {
                    let (t, coef) = if k == l {
                        let t = m.clone().times(Var::X(*k), -2).times(Var::X(2 * k + n), 1);
                        (t, a * (a - Rational::one()))
                    } else {
                        let t = m
                            .clone()
                            .times(Var::X(*k), -1)
                            .times(Var::X(*l), -1)
                            .times(Var::X(k + l + n), 1);
                        (t, a * b)
                    };
                    out.add_term(t, -(c * coef));
                }
            }
            for (j, a) in &xs {
                let kk = -j - n;
                if kk > 0 {
                    let t = m.clone().times(Var::X(*j), -1).times(Var::Y(kk), 1);
                    out.add_term(t, c * a);
                }
            }
            if !k_eff.is_zero() {
                for (ym, b) in y_support(m) {
                    if let Some(a) = eff_x(&xs, ym - n) {
                        let t = m.clone().times(Var::Y(ym), -1).times(Var::X(ym - n), -1);
                        out.add_term(t, c * qi(2 * ym * b) * &k_eff * a);
                    }
                }
            }
            if let Some(a) = eff_x(&xs, -n) {
                let lead = &k_eff * qi(n) + &p.j;
                out.add_term(m.clone().times(Var::X(-n), -1), c * lead * a);
            }
        }
    }
}

fn check_member(v: &Element, ctx: &ModuleContext) -> Result<()> {
    if is_member(v, ctx) {
        Ok(())
    } else {
        Err(Error::ContextMismatch(format!("{v} is not in {ctx}")))
    }
}

/// Action without membership check or projection.
pub(crate) fn act_raw(g: Generator, v: &Element, ctx: &ModuleContext) -> Element {
    let mut out = Element::zero();
    for (m, c) in v.terms() {
        act_monomial(g, m, c, ctx, &mut out);
    }
    out
}

/// `g · v` in `ctx`.
pub fn apply_generator(g: Generator, v: &Element, ctx: &ModuleContext) -> Result<Element> {
    check_member(v, ctx)?;
    Ok(project(&act_raw(g, v, ctx), ctx))
}

/// `ℰ_i = Σ_{s1,s2 > i} x_{s1+s2−i} ∂x_{s1} ∂x_{s2}` on polynomials in the `x_n`.
pub fn apply_script_e(i: i64, v: &Element) -> Element {
    let mut out = Element::zero();
    for (m, c) in v.terms() {
        let xs: Vec<(i64, i64)> = m
            .iter()
            .filter_map(|(v, e)| match v {
                Var::X(n) if n > i => Some((n, e)),
                _ => None,
            })
            .collect();
        for &(k, a) in &xs {
            for &(l, b) in &xs {
                let (t, coef) = if k == l {
                    (m.clone().times(Var::X(k), -2), a * (a - 1))
                } else {
                    (m.clone().times(Var::X(k), -1).times(Var::X(l), -1), a * b)
                };
                out.add_term(t.times(Var::X(k + l - i), 1), c * qi(coef));
            }
        }
    }
    out
}

/// The three pieces of `e_{−i}`:
///
/// ```text
/// part 0: −x_i ∂x_i² − 2 (Σ_{s≠i} x_s ∂x_s) ∂x_i + (J − iK) ∂x_i
/// part 1: −Σ_{s1,s2≠i, s1+s2≠2i} x_{s1+s2−i} ∂x_{s1} ∂x_{s2}
///         + Σ_{s>0} y_s ∂x_{i−s} + 2K Σ_{t>0} t ∂y_t ∂x_{t+i}
/// part 2: −Σ_{s≠i} ∂x_{2i−s} ∂x_s
/// ```
///
/// so that `e_{−i} = part0 + part1 + x_i·part2`. Results are not projected.
pub fn e_minus_i_part(i: i64, part: u8, v: &Element, ctx: &ModuleContext) -> Result<Element> {
    if ctx.i.is_none() {
        return Err(Error::ContextMismatch("context has no index i".into()));
    }
    if part > 2 {
        return Err(Error::ContextMismatch(format!("no part {part}")));
    }
    check_member(v, ctx)?;
    let k_eff = if ctx.zero_charge() {
        Rational::zero()
    } else {
        ctx.params.k.clone()
    };
    let mut out = Element::zero();
    for (m, c) in v.terms() {
        let xs = x_support(m, ctx);
        let a_i = eff_x(&xs, i).cloned().unwrap_or_else(Rational::zero);
        let others: Vec<&(i64, Rational)> = xs.iter().filter(|(n, _)| *n != i).collect();
        match part {
            0 => {
                if a_i.is_zero() {
                    continue;
                }
                let sum_others: Rational = others.iter().map(|(_, a)| a.clone()).sum();
                let l = &ctx.params.j - &k_eff * qi(i);
                let coef = -(&a_i - Rational::one()) - qi(2) * sum_others + l;
                out.add_term(m.clone().times(Var::X(i), -1), c * &a_i * coef);
            }
            1 => {
                for (k, a) in &others {
                    for (l, b) in &others {
                        if k + l == 2 * i {
                            continue;
                        }
                        let (t, coef) = if k == l {
                            let t = m.clone().times(Var::X(*k), -2);
                            (t, a * (a - Rational::one()))
                        } else {
                            let t = m.clone().times(Var::X(*k), -1).times(Var::X(*l), -1);
                            (t, a * b)
                        };
                        out.add_term(t.times(Var::X(k + l - i), 1), -(c * coef));
                    }
                }
                for (j, a) in &xs {
                    let s = i - j;
                    if s > 0 {
                        let t = m.clone().times(Var::X(*j), -1).times(Var::Y(s), 1);
                        out.add_term(t, c * a);
                    }
                }
                if !k_eff.is_zero() {
                    for (t_idx, b) in y_support(m) {
                        if let Some(a) = eff_x(&xs, t_idx + i) {
                            let t = m
                                .clone()
                                .times(Var::Y(t_idx), -1)
                                .times(Var::X(t_idx + i), -1);
                            out.add_term(t, c * qi(2 * t_idx * b) * &k_eff * a);
                        }
                    }
                }
            }
            _ => {
                for (k, a) in &others {
                    if let Some(b) = eff_x(&xs, 2 * i - k) {
                        if 2 * i - k == i {
                            continue;
                        }
                        let t = m.clone().times(Var::X(*k), -1).times(Var::X(2 * i - k), -1);
                        out.add_term(t, -(c * a * b));
                    }
                }
            }
        }
    }
    Ok(out)
}
