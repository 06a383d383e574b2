//! Module contexts: which space an [`Element`] lives in, membership and
//! quotient projection, weights, and truncated support censuses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::ring::{qi, Element, Monomial, Rational, Var};

/// Highest-weight data: `J = λ(h_0)`, `K = λ(c)`, `D = λ(d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    pub j: Rational,
    pub k: Rational,
    pub d: Rational,
}

impl Params {
    pub fn new(j: Rational, k: Rational) -> Self {
        Params {
            j,
            k,
            d: Rational::zero(),
        }
    }

    pub fn with_d(mut self, d: Rational) -> Self {
        self.d = d;
        self
    }

    /// `J − iK`, the parameter governing the localized quotients.
    pub fn shifted(&self, i: i64) -> Rational {
        &self.j - qi(i) * &self.k
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Kind {
    /// Polynomials in all `x_n`, `y_m`.
    Verma,
    /// Polynomials in the `x_n` only, acted on with `K = 0`.
    ZeroChargePoly,
    /// `x_i` and `y_s` (s ∈ S) inverted.
    LocFull,
    /// `y_S^{-1}` times polynomials.
    QuotMs,
    /// `x_i^{-1} y_S^{-1}` times polynomials, with `x_i` exponents ≤ −1.
    QuotMis,
    /// `x_i^{-1}` times polynomials in the `x_n`, acted on with `K = 0`.
    QuotMi,
    /// `x_i^z` times Laurent polynomials in `x_i`, polynomial elsewhere.
    Twisted,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::Verma,
        Kind::ZeroChargePoly,
        Kind::LocFull,
        Kind::QuotMs,
        Kind::QuotMis,
        Kind::QuotMi,
        Kind::Twisted,
    ];

    fn needs_i(self) -> bool {
        matches!(
            self,
            Kind::LocFull | Kind::QuotMis | Kind::QuotMi | Kind::Twisted
        )
    }

    fn allows_s(self) -> bool {
        matches!(self, Kind::LocFull | Kind::QuotMs | Kind::QuotMis)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleContext {
    pub kind: Kind,
    pub i: Option<i64>,
    pub s: BTreeSet<i64>,
    /// Twist; nonzero only for [`Kind::Twisted`]. Stored `x_i` exponents
    /// are offsets from it.
    pub z: Rational,
    pub params: Params,
}

/// Validated constructor.
pub fn make_context(
    kind: Kind,
    i: Option<i64>,
    s: BTreeSet<i64>,
    z: Rational,
    params: Params,
) -> Result<ModuleContext> {
    let bad = |msg: &str| Err(Error::InvalidContext(msg.to_string()));
    if kind.needs_i() && i.is_none() {
        return bad("this module needs an index i");
    }
    if !kind.needs_i() && i.is_some() {
        return bad("this module takes no index i");
    }
    if s.iter().any(|&m| m < 1) {
        return bad("indices in S must be positive");
    }
    if !s.is_empty() && !kind.allows_s() {
        return bad("S must be empty for this module");
    }
    if kind != Kind::Twisted && !z.is_zero() {
        return bad("z must be 0 outside the twisted module");
    }
    if matches!(kind, Kind::ZeroChargePoly | Kind::QuotMi) && !params.k.is_zero() {
        return bad("the zero-charge realization needs K = 0");
    }
    Ok(ModuleContext {
        kind,
        i,
        s,
        z,
        params,
    })
}

impl ModuleContext {
    pub fn verma(params: Params) -> Self {
        make_context(Kind::Verma, None, BTreeSet::new(), Rational::zero(), params).expect("valid")
    }

    /// True for the contexts using the `K = 0` realization restricted to
    /// `x` variables.
    pub fn zero_charge(&self) -> bool {
        matches!(self.kind, Kind::ZeroChargePoly | Kind::QuotMi)
    }

    /// Index `i` such that `x_i` is invertible here, if any.
    pub fn localized_index(&self) -> Option<i64> {
        match self.kind {
            Kind::LocFull | Kind::QuotMis | Kind::QuotMi | Kind::Twisted => self.i,
            _ => None,
        }
    }

    /// Exponent offset of `v`: `z` for the twisted variable, else 0.
    pub fn shift(&self, v: Var) -> Rational {
        match (self.kind, v) {
            (Kind::Twisted, Var::X(n)) if Some(n) == self.i => self.z.clone(),
            _ => Rational::zero(),
        }
    }

    /// `J − iK` (with `i = 0` when absent).
    pub fn l_param(&self) -> Rational {
        self.params.shifted(self.i.unwrap_or(0))
    }

    pub fn is_member_monomial(&self, m: &Monomial) -> bool {
        let i = self.i;
        let in_s = |n: i64| self.s.contains(&n);
        let mandatory_ok = match self.kind {
            Kind::QuotMs | Kind::QuotMis => self.s.iter().all(|&n| m.exp(Var::Y(n)) <= -1),
            _ => true,
        } && match self.kind {
            Kind::QuotMis | Kind::QuotMi => m.exp(Var::X(i.unwrap())) <= -1,
            _ => true,
        };
        if !mandatory_ok {
            return false;
        }
        m.iter().all(|(v, e)| match (self.kind, v) {
            (Kind::ZeroChargePoly | Kind::QuotMi, Var::Y(_)) => false,
            (Kind::LocFull | Kind::Twisted | Kind::QuotMis | Kind::QuotMi, Var::X(n))
                if Some(n) == i =>
            {
                true
            }
            (Kind::LocFull | Kind::QuotMs | Kind::QuotMis, Var::Y(n)) if in_s(n) => true,
            _ => e >= 0,
        })
    }

    /// The canonical cyclic generator where one is defined.
    pub fn generator(&self) -> Element {
        let mut m = Monomial::one();
        for &n in &self.s {
            m = m.times(Var::Y(n), -1);
        }
        if matches!(self.kind, Kind::QuotMis | Kind::QuotMi) {
            m = m.times(Var::X(self.i.unwrap()), -1);
        }
        Element::monomial(m)
    }
}

impl fmt::Display for ModuleContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind)?;
        if let Some(i) = self.i {
            write!(f, " i={i}")?;
        }
        if !self.s.is_empty() {
            let s: Vec<String> = self.s.iter().map(|n| n.to_string()).collect();
            write!(f, " S={{{}}}", s.join(","))?;
        }
        if !self.z.is_zero() {
            write!(f, " z={}", self.z)?;
        }
        write!(
            f,
            " J={} K={} D={}",
            self.params.j, self.params.k, self.params.d
        )
    }
}

pub fn is_member(v: &Element, ctx: &ModuleContext) -> bool {
    v.monomials().all(|m| ctx.is_member_monomial(m))
}

/// Drops every monomial outside the context (the quotient map).
pub fn project(v: &Element, ctx: &ModuleContext) -> Element {
    v.filter(|m| ctx.is_member_monomial(m))
}

/// Eigenvalues of `h_0`, `c`, `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub h0: Rational,
    pub c: Rational,
    pub d: Rational,
}

pub fn weight_of_monomial(m: &Monomial, ctx: &ModuleContext) -> Weight {
    let p = &ctx.params;
    let mut deg = qi(m.deg_x());
    let mut d = p.d.clone();
    if ctx.kind == Kind::Twisted {
        deg += &ctx.z;
        d += &ctx.z * qi(ctx.i.unwrap());
    }
    for (v, e) in m.iter() {
        match v {
            Var::X(n) => d += qi(n * e),
            Var::Y(n) => d -= qi(n * e),
        }
    }
    Weight {
        h0: &p.j - qi(2) * deg,
        c: p.k.clone(),
        d,
    }
}

pub fn weight_of(v: &Element, ctx: &ModuleContext) -> Result<Weight> {
    let mut ws = v.monomials().map(|m| weight_of_monomial(m, ctx));
    let first = ws.next().ok_or(Error::ZeroVector)?;
    if ws.all(|w| w == first) {
        Ok(first)
    } else {
        Err(Error::NotHomogeneous)
    }
}

/// Counts the basis monomials of `ctx` with
/// `Σ |exp|·max(1, |index|) ≤ max_depth`, grouped by weight.
pub fn support_census(ctx: &ModuleContext, max_depth: u32) -> BTreeMap<Weight, u64> {
    support_census_with(ctx, max_depth, Exec::default())
}

pub fn support_census_with(
    ctx: &ModuleContext,
    max_depth: u32,
    exec: Exec,
) -> BTreeMap<Weight, u64> {
    let depth = max_depth as i64;
    let mut slots: Vec<(Var, i64, i64)> = Vec::new();
    let mut vars: Vec<Var> = (-depth..=depth).map(Var::X).collect();
    if !ctx.zero_charge() {
        vars.extend((1..=depth).map(Var::Y));
    }
    for v in vars {
        let w = v.index().abs().max(1);
        let cap = depth / w;
        let (lo, hi) = exponent_range(ctx, v, cap);
        if lo <= hi {
            slots.push((v, lo, hi));
        }
    }
    // Mandatory variables first keeps the cheap infeasible branches short.
    slots.sort_by_key(|&(_, lo, hi)| (lo <= 0 && hi >= 0) as u8);
    let Some(&(v0, lo0, hi0)) = slots.first() else {
        let mut out = BTreeMap::new();
        if ctx.is_member_monomial(&Monomial::one()) {
            out.insert(weight_of_monomial(&Monomial::one(), ctx), 1);
        }
        return out;
    };
    let rest = &slots[1..];
    let firsts: Vec<i64> = (lo0..=hi0).collect();
    let parts = par::map(exec, &firsts, |&e| {
        let mut out = BTreeMap::new();
        let w = v0.index().abs().max(1);
        let budget = depth - e.abs() * w;
        if budget >= 0 {
            enumerate(ctx, rest, Monomial::var(v0, e), budget, &mut out);
        }
        out
    });
    let mut total = BTreeMap::new();
    for part in parts {
        for (w, n) in part {
            *total.entry(w).or_insert(0) += n;
        }
    }
    total
}

fn exponent_range(ctx: &ModuleContext, v: Var, cap: i64) -> (i64, i64) {
    let is_i = matches!(v, Var::X(n) if Some(n) == ctx.i);
    let in_s = matches!(v, Var::Y(n) if ctx.s.contains(&n));
    match ctx.kind {
        Kind::Verma | Kind::ZeroChargePoly => (0, cap),
        Kind::LocFull if is_i || in_s => (-cap, cap),
        Kind::Twisted if is_i => (-cap, cap),
        Kind::QuotMs | Kind::QuotMis if in_s => (-cap, -1),
        Kind::QuotMis | Kind::QuotMi if is_i => (-cap, -1),
        _ => (0, cap),
    }
}

fn enumerate(
    ctx: &ModuleContext,
    slots: &[(Var, i64, i64)],
    m: Monomial,
    budget: i64,
    out: &mut BTreeMap<Weight, u64>,
) {
    let Some((&(v, lo, hi), rest)) = slots.split_first() else {
        if ctx.is_member_monomial(&m) {
            *out.entry(weight_of_monomial(&m, ctx)).or_insert(0) += 1;
        }
        return;
    };
    let w = v.index().abs().max(1);
    for e in lo..=hi {
        let cost = e.abs() * w;
        if cost > budget {
            continue;
        }
        enumerate(ctx, rest, m.clone().times(v, e), budget - cost, out);
    }
}

/// Census counts at `λ − kδ` for `k = 1..=depth`.
pub fn imaginary_counts(
    census: &BTreeMap<Weight, u64>,
    ctx: &ModuleContext,
    depth: u32,
) -> Vec<u64> {
    let top = weight_of_monomial(&Monomial::one(), ctx);
    (1..=depth as i64)
        .map(|k| {
            let w = Weight {
                d: &top.d - qi(k),
                ..top.clone()
            };
            census.get(&w).copied().unwrap_or(0)
        })
        .collect()
}
