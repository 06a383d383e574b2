//! Constructive cyclicity: from any nonzero vector down to a multiple of the
//! generator, and from the generator up to any basis monomial. Every step
//! is recorded as a U-element so the trace can be replayed.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modspace::{is_member, Kind, ModuleContext};
use crate::par::{self, Exec};
use crate::realization::{apply_generator, Generator};
use crate::ring::{qi, Element, Monomial, Rational, Var};
use crate::ualgebra::{apply_uelement, UElement};

use super::{coeff_a, coeff_c_s, h0_eigenvalue, irreducibility_criterion};

use Generator::{E, F, H};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StepTag {
    EProbe,
    ETilde,
    HLower,
    HRaise,
    FPower,
    H0Project,
    U123,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub op: UElement,
    pub result: Element,
    pub tag: StepTag,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub context: ModuleContext,
    pub initial: Element,
    pub steps: Vec<Step>,
    pub final_vector: Element,
    /// `final_vector = scalar · generator`.
    pub scalar: Rational,
}

impl ReductionTrace {
    /// Re-applies every step from the initial vector and checks each
    /// snapshot and the final generator multiple.
    pub fn replay(&self) -> Result<bool> {
        let mut cur = self.initial.clone();
        for step in &self.steps {
            cur = apply_uelement(&step.op, &cur, &self.context)?;
            if cur != step.result {
                return Ok(false);
            }
        }
        Ok(cur == self.final_vector
            && !self.scalar.is_zero()
            && cur == self.context.generator().scale(&self.scalar))
    }
}

struct Recorder<'a> {
    ctx: &'a ModuleContext,
    cur: Element,
    steps: Vec<Step>,
}

impl<'a> Recorder<'a> {
    fn try_op(&self, op: &UElement) -> Result<Element> {
        apply_uelement(op, &self.cur, self.ctx)
    }

    fn commit(&mut self, op: UElement, result: Element, tag: StepTag) {
        self.steps.push(Step {
            op,
            result: result.clone(),
            tag,
        });
        self.cur = result;
    }

    fn apply(&mut self, op: UElement, tag: StepTag) -> Result<()> {
        let r = self.try_op(&op)?;
        if r.is_zero() {
            return Err(Error::Stuck(format!("{op} annihilated {}", self.cur)));
        }
        self.commit(op, r, tag);
        Ok(())
    }
}

fn scalar(c: Rational) -> UElement {
    UElement::scalar(c)
}

fn gen(g: Generator) -> UElement {
    UElement::gen(g)
}

/// `(H(0) − λ_b)/(λ_t − λ_b)` factors keeping the lowest-degree component.
fn h0_project(rec: &mut Recorder) -> Result<()> {
    let degs: BTreeSet<i64> = rec.cur.monomials().map(|m| m.deg_x()).collect();
    let target = *degs.iter().next().expect("nonzero");
    let lt = h0_eigenvalue(target, rec.ctx);
    for &b in degs.iter().skip(1) {
        let lb = h0_eigenvalue(b, rec.ctx);
        let op = gen(H(0))
            .sub(&scalar(lb.clone()))
            .scale(&(Rational::one() / (&lt - &lb)));
        rec.apply(op, StepTag::H0Project)?;
    }
    Ok(())
}

fn x_exp_range(v: &Element, i: i64) -> (i64, i64) {
    let es = v.monomials().map(|m| m.exp(Var::X(i)));
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for e in es {
        lo = lo.min(e);
        hi = hi.max(e);
    }
    (lo, hi)
}

/// Multiplies by `x_i^{p−1}` where `x_i^{−p}` is the most negative power,
/// leaving only `x_i^{−1}` terms.
fn f_normalize(rec: &mut Recorder, i: i64) -> Result<()> {
    let (lo, _) = x_exp_range(&rec.cur, i);
    if lo < -1 {
        rec.apply(UElement::pow(F(i), -lo - 1), StepTag::FPower)?;
    }
    Ok(())
}

/// Degree in the `x` variables other than `x_i` (largest over monomials).
fn other_x_degree(v: &Element, i: Option<i64>) -> i64 {
    v.monomials()
        .map(|m| {
            m.iter()
                .filter(|(var, _)| matches!(var, Var::X(n) if Some(*n) != i))
                .map(|(_, e)| e)
                .sum::<i64>()
        })
        .max()
        .unwrap_or(0)
}

fn support_x(v: &Element, i: Option<i64>) -> Vec<i64> {
    let set: BTreeSet<i64> = v
        .monomials()
        .flat_map(|m| m.iter())
        .filter_map(|(var, _)| match var {
            Var::X(n) if Some(n) != i => Some(n),
            _ => None,
        })
        .collect();
    set.into_iter().collect()
}

const RETRIES: i64 = 10;

/// `n = 3B + 3, …, 3B + 13`, then the support indices as a fallback.
fn probe_candidates(v: &Element, ctx: &ModuleContext, j: i64) -> Vec<i64> {
    let mut b = v.max_abs_index().max(j.abs());
    if let Some(i) = ctx.i {
        b = b.max(i.abs());
    }
    if let Some(&s) = ctx.s.iter().max() {
        b = b.max(s);
    }
    let start = 3 * b + 3;
    let mut out: Vec<i64> = (start..=start + RETRIES).collect();
    out.extend(support_x(v, ctx.i));
    out
}

/// Checks `e_{−n}(v) = y_{n−j} ∂x_j(v) + v'` with `v'` free of `y_{n−j}`.
pub fn probe_identity_holds(v: &Element, n: i64, j: i64, ctx: &ModuleContext) -> Result<bool> {
    let w = apply_generator(E(-n), v, ctx)?;
    let lead = v
        .diff(Var::X(j), &ctx.shift(Var::X(j)))
        .scale_var(Var::Y(n - j), 1);
    let rest = &w - &lead;
    Ok(n - j > 0 && rest.monomials().all(|m| m.exp(Var::Y(n - j)) == 0))
}

/// `y`-degree reduction for vectors with no `x` besides `x_i`: first raise
/// each `y_k` (k ∈ S) to exponent −1 with `raise(k)`, then differentiate
/// away every other `y_s` with `lower(s)`.
fn clear_y(
    rec: &mut Recorder,
    raise: impl Fn(i64) -> UElement,
    lower: impl Fn(i64) -> UElement,
) -> Result<()> {
    let s = rec.ctx.s.clone();
    for &k in &s {
        let gmax = rec
            .cur
            .monomials()
            .map(|m| -m.exp(Var::Y(k)))
            .max()
            .unwrap_or(1);
        for _ in 1..gmax {
            rec.apply(raise(k), StepTag::HRaise)?;
        }
    }
    loop {
        let next = rec
            .cur
            .monomials()
            .flat_map(|m| m.iter())
            .find_map(|(v, e)| match v {
                Var::Y(n) if e > 0 && !s.contains(&n) => Some(n),
                _ => None,
            });
        match next {
            Some(n) => rec.apply(lower(n), StepTag::HLower)?,
            None => return Ok(()),
        }
    }
}

fn finish(rec: Recorder, initial: &Element) -> Result<ReductionTrace> {
    let g = rec.ctx.generator();
    let (gm, _) = g.terms().next().expect("generator is a monomial");
    let c = rec.cur.coeff(gm);
    if c.is_zero() || rec.cur != g.scale(&c) {
        return Err(Error::Stuck(format!(
            "ended at {} instead of a generator multiple",
            rec.cur
        )));
    }
    Ok(ReductionTrace {
        context: rec.ctx.clone(),
        initial: initial.clone(),
        steps: rec.steps,
        final_vector: rec.cur,
        scalar: c,
    })
}

/// Reduces `v` to a nonzero multiple of the module generator.
pub fn reduce_to_generator(v: &Element, ctx: &ModuleContext) -> Result<ReductionTrace> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !is_member(v, ctx) {
        return Err(Error::ContextMismatch(format!("{v} is not in {ctx}")));
    }
    let crit = irreducibility_criterion(ctx);
    if !crit.irreducible {
        return Err(Error::HypothesisFail(crit.reason));
    }
    let mut rec = Recorder {
        ctx,
        cur: v.clone(),
        steps: Vec::new(),
    };
    h0_project(&mut rec)?;
    match ctx.kind {
        Kind::Verma | Kind::QuotMs => reduce_polynomial_y(&mut rec)?,
        Kind::ZeroChargePoly => reduce_zero_charge(&mut rec)?,
        Kind::QuotMis | Kind::QuotMi => reduce_localized(&mut rec)?,
        Kind::Twisted => reduce_twisted(&mut rec)?,
        Kind::LocFull => unreachable!("never irreducible"),
    }
    finish(rec, v)
}

/// Runs [`reduce_to_generator`] on many vectors.
pub fn reduce_many(vs: &[Element], ctx: &ModuleContext, exec: Exec) -> Vec<Result<ReductionTrace>> {
    par::map(exec, vs, |v| reduce_to_generator(v, ctx))
}

fn reduce_polynomial_y(rec: &mut Recorder) -> Result<()> {
    let ctx = rec.ctx;
    loop {
        let d = rec.cur.monomials().map(|m| m.deg_x()).max().unwrap_or(0);
        if d == 0 {
            break;
        }
        let j = support_x(&rec.cur, None)[0];
        let mut done = false;
        for n in probe_candidates(&rec.cur, ctx, j) {
            let op = gen(E(-n));
            let w = rec.try_op(&op)?;
            let large = n - j
                > rec
                    .cur
                    .max_abs_index()
                    .max(ctx.s.iter().copied().max().unwrap_or(0));
            let lemma_ok = !large || probe_identity_holds(&rec.cur, n, j, ctx)?;
            if !w.is_zero() && lemma_ok {
                rec.commit(op, w, StepTag::EProbe);
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::Stuck("no probe index lowers the x-degree".into()));
        }
    }
    let k = ctx.params.k.clone();
    clear_y(
        rec,
        |s| gen(H(-s)),
        |s| gen(H(s)).scale(&(Rational::one() / qi(2 * s) / &k)),
    )
}

fn reduce_zero_charge(rec: &mut Recorder) -> Result<()> {
    loop {
        let d = rec.cur.monomials().map(|m| m.deg_x()).max().unwrap_or(0);
        if d == 0 {
            return Ok(());
        }
        let j = support_x(&rec.cur, None)[0];
        let mut done = false;
        for n in probe_candidates(&rec.cur, rec.ctx, j) {
            let op = gen(E(-n));
            let w = rec.try_op(&op)?;
            if !w.is_zero() {
                rec.commit(op, w, StepTag::EProbe);
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::Stuck("no probe index lowers the x-degree".into()));
        }
    }
}

/// `(e_{−i} f_i − A_{α,1})(e_{−i} f_i − A_{α+1,2}) e_{−n}`.
fn e_tilde(n: i64, alpha: i64, ctx: &ModuleContext) -> UElement {
    let i = ctx.i.unwrap();
    let t = UElement::word(Rational::one(), vec![(E(-i), 1), (F(i), 1)]);
    let a1 = coeff_a(alpha, &qi(1), i, &ctx.params);
    let a2 = coeff_a(alpha + 1, &qi(2), i, &ctx.params);
    t.sub(&scalar(a1)).mul(&t.sub(&scalar(a2))).mul(&gen(E(-n)))
}

/// `e_{−i}` rescaled to multiply `x_i^{−p} g(y)` by `x_i^{−1}`.
fn u1(p: &Rational, ctx: &ModuleContext) -> UElement {
    let i = ctx.i.unwrap();
    let a = coeff_a(0, p, i, &ctx.params);
    gen(E(-i)).scale(&(Rational::one() / a))
}

/// `h_{−k} + 2/(p+1+J−iK) f_{i−k} e_{−i}`: multiplication by `y_k` on
/// `x_i^{−p} g(y)`.
fn u2(k: i64, p: &Rational, ctx: &ModuleContext) -> UElement {
    let i = ctx.i.unwrap();
    let c = qi(2) / (p + qi(1) + ctx.l_param());
    gen(H(-k)).add(&UElement::word(c, vec![(F(i - k), 1), (E(-i), 1)]))
}

/// `h_s + 2/(p+1+J−iK) f_{i+s} e_{−i}`: acts as `2sK ∂y_s` on
/// `x_i^{−p} g(y)`.
fn d_s(s: i64, p: &Rational, ctx: &ModuleContext) -> UElement {
    let i = ctx.i.unwrap();
    let c = qi(2) / (p + qi(1) + ctx.l_param());
    gen(H(s)).add(&UElement::word(c, vec![(F(i + s), 1), (E(-i), 1)]))
}

fn reduce_localized(rec: &mut Recorder) -> Result<()> {
    let ctx = rec.ctx;
    let i = ctx.i.unwrap();
    f_normalize(rec, i)?;
    loop {
        let alpha = other_x_degree(&rec.cur, Some(i));
        if alpha == 0 {
            break;
        }
        let j = support_x(&rec.cur, Some(i))[0];
        let mut done = false;
        for n in probe_candidates(&rec.cur, ctx, j) {
            let op = e_tilde(n, alpha, ctx);
            let w = rec.try_op(&op)?;
            let ok = !w.is_zero()
                && w.monomials().all(|m| m.exp(Var::X(i)) == -1)
                && other_x_degree(&w, Some(i)) < alpha;
            if ok {
                rec.commit(op, w, StepTag::ETilde);
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::Stuck(format!(
                "no probe lowers the degree of {}",
                rec.cur
            )));
        }
    }
    if ctx.kind == Kind::QuotMi {
        return Ok(());
    }
    let one = qi(1);
    let k = ctx.params.k.clone();
    clear_y(
        rec,
        |s| u2(s, &one, ctx),
        |s| d_s(s, &one, ctx).scale(&(Rational::one() / qi(2 * s) / &k)),
    )
}

/// Twisted module: `x_i^{z+e} Z` with `Z` free of `x_i`. The operator
/// `T = f_i e_{−i}` is triangular for the level `e` (raising it) with
/// diagonal `A_{α, −(z+e)}` where `α = d − e`.
fn reduce_twisted(rec: &mut Recorder) -> Result<()> {
    let ctx = rec.ctx;
    let i = ctx.i.unwrap();
    let z = ctx.z.clone();
    let level_value = |d: i64, e: i64| coeff_a(d - e, &-(&z + qi(e)), i, &ctx.params);
    let t_op = UElement::word(Rational::one(), vec![(F(i), 1), (E(-i), 1)]);
    loop {
        let d = rec.cur.monomials().map(|m| m.deg_x()).max().unwrap();
        let (lo, _) = x_exp_range(&rec.cur, i);
        if d == lo {
            break;
        }
        let j = support_x(&rec.cur, Some(i))[0];
        let mut done = false;
        for n in probe_candidates(&rec.cur, ctx, j) {
            let probe = gen(E(-n));
            let w = rec.try_op(&probe)?;
            if w.is_zero() {
                continue;
            }
            // strip levels below `lo`: the diagonal of T on the lowest level
            // is removed by one factor, which leaves only higher levels
            let mut factors = Vec::new();
            let mut snaps = Vec::new();
            let mut cur = w.clone();
            while !cur.is_zero() {
                let (clo, _) = x_exp_range(&cur, i);
                if clo >= lo {
                    break;
                }
                let f = t_op.sub(&scalar(level_value(d - 1, clo)));
                cur = apply_uelement(&f, &cur, ctx)?;
                factors.push(f);
                snaps.push(cur.clone());
            }
            let progress = !cur.is_zero();
            if progress {
                rec.commit(probe, w, StepTag::EProbe);
                for (f, s) in factors.into_iter().zip(snaps) {
                    rec.commit(f, s, StepTag::ETilde);
                }
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::Stuck(format!(
                "no probe lowers the degree of {}",
                rec.cur
            )));
        }
    }
    // Single level x_i^{z+e} g(y): bring e to 0, then clear g.
    let (mut e, _) = x_exp_range(&rec.cur, i);
    while e > 0 {
        rec.apply(u1(&-(&z + qi(e)), ctx), StepTag::U123)?;
        e -= 1;
    }
    if e < 0 {
        rec.apply(UElement::pow(F(i), -e), StepTag::FPower)?;
    }
    let p = -z.clone();
    let k = ctx.params.k.clone();
    clear_y(
        rec,
        |s| u2(s, &p, ctx),
        |s| d_s(s, &p, ctx).scale(&(Rational::one() / qi(2 * s) / &k)),
    )
}

/// A U-element carrying the module generator to a nonzero multiple of
/// `target`; returns it with the multiple.
pub fn generate_from_generator(
    target: &Monomial,
    ctx: &ModuleContext,
) -> Result<(UElement, Rational)> {
    let t = Element::monomial(target.clone());
    if !is_member(&t, ctx) {
        return Err(Error::ContextMismatch(format!(
            "{t} is not a basis vector of {ctx}"
        )));
    }
    let crit = irreducibility_criterion(ctx);
    if !crit.irreducible {
        return Err(Error::HypothesisFail(crit.reason));
    }
    let i = ctx.i;
    // factors are collected in application order, then reversed
    let mut ops: Vec<UElement> = Vec::new();
    let ys: Vec<(i64, i64)> = target
        .iter()
        .filter_map(|(v, e)| match v {
            Var::Y(n) => Some((n, e)),
            _ => None,
        })
        .collect();
    let xs: Vec<(i64, i64)> = target
        .iter()
        .filter_map(|(v, e)| match v {
            Var::X(n) if Some(n) != i => Some((n, e)),
            _ => None,
        })
        .collect();
    let xi = i.map(|i| target.exp(Var::X(i))).unwrap_or(0);
    let k = ctx.params.k.clone();
    match ctx.kind {
        Kind::Verma | Kind::QuotMs => {
            for &(n, e) in &ys {
                if e < 0 {
                    for g in 1..-e {
                        ops.push(gen(H(n)).scale(&(Rational::one() / coeff_c_s(n, -g, &k))));
                    }
                } else {
                    ops.push(UElement::pow(H(-n), e));
                }
            }
        }
        Kind::QuotMis => {
            let one = qi(1);
            for &(n, e) in &ys {
                if e < 0 {
                    for g in 1..-e {
                        ops.push(
                            d_s(n, &one, ctx).scale(&(Rational::one() / coeff_c_s(n, -g, &k))),
                        );
                    }
                } else {
                    for _ in 0..e {
                        ops.push(u2(n, &one, ctx));
                    }
                }
            }
            for p in 1..-xi {
                ops.push(u1(&qi(p), ctx));
            }
        }
        Kind::QuotMi => {
            for p in 1..-xi {
                ops.push(u1(&qi(p), ctx));
            }
        }
        Kind::Twisted => {
            let p = -ctx.z.clone();
            for &(n, e) in &ys {
                for _ in 0..e {
                    ops.push(u2(n, &p, ctx));
                }
            }
            if xi > 0 {
                ops.push(UElement::pow(F(i.unwrap()), xi));
            }
            for e in 0..-xi {
                ops.push(u1(&(&p + qi(e)), ctx));
            }
        }
        Kind::ZeroChargePoly => {}
        Kind::LocFull => unreachable!("never irreducible"),
    }
    for &(n, e) in &xs {
        ops.push(UElement::pow(F(n), e));
    }
    let u = ops.iter().fold(UElement::one(), |acc, op| op.mul(&acc));
    let image = apply_uelement(&u, &ctx.generator(), ctx)?;
    let c = image.coeff(target);
    if c.is_zero() || image != t.scale(&c) {
        return Err(Error::Stuck(format!(
            "reached {image} instead of a multiple of {t}"
        )));
    }
    Ok((u, c))
}
