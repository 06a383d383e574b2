//! Test-side oracles, written directly from the differential-operator
//! formulas with `Element::diff` instead of the library's monomial kernels.

#![allow(dead_code)]

use std::collections::BTreeSet;

use ffr_core::modspace::project;
use ffr_core::random::Shape;
use ffr_core::{make_context, qi, Element, Generator, Kind, ModuleContext, Params, Rational, Var};
use num_traits::Zero;

fn d(v: &Element, var: Var, ctx: &ModuleContext) -> Element {
    v.diff(var, &ctx.shift(var))
}

fn window(v: &Element, n: i64) -> i64 {
    v.max_abs_index() + n.abs() + 2
}

/// `Φ(g)` (or `Φ′(g)` in zero-charge contexts) by summing over a window of
/// indices large enough to cover every nonzero derivative, then projecting.
pub fn oracle_apply(g: Generator, v: &Element, ctx: &ModuleContext) -> Element {
    let k = if ctx.zero_charge() {
        Rational::zero()
    } else {
        ctx.params.k.clone()
    };
    let j = &ctx.params.j;
    let mut out = Element::zero();
    match g {
        Generator::F(n) => out = &Element::x(n) * v,
        Generator::C => out = v.scale(&k),
        Generator::Dg => {
            out = v.scale(&ctx.params.d);
            let w = window(v, 0);
            for n in -w..=w {
                out += &(&Element::x(n) * &d(v, Var::X(n), ctx)).scale(&qi(n));
                if n > 0 {
                    out -= &(&Element::y(n) * &d(v, Var::Y(n), ctx)).scale(&qi(n));
                }
            }
        }
        Generator::H(n) => {
            let w = window(v, n);
            for m in -w..=w {
                out -= &(&Element::x(m + n) * &d(v, Var::X(m), ctx)).scale(&qi(2));
            }
            if n < 0 {
                out += &(&Element::y(-n) * v);
            } else if n > 0 {
                out += &d(v, Var::Y(n), ctx).scale(&(qi(2 * n) * &k));
            } else {
                out += &v.scale(j);
            }
        }
        Generator::E(n) => {
            let w = window(v, n);
            for a in -w..=w {
                let da = d(v, Var::X(a), ctx);
                if da.is_zero() {
                    continue;
                }
                for b in -w..=w {
                    out -= &(&Element::x(a + b + n) * &d(&da, Var::X(b), ctx));
                }
            }
            for s in 1..=w {
                out += &(&Element::y(s) * &d(v, Var::X(-s - n), ctx));
            }
            for m in 1..=w {
                let dy = d(v, Var::Y(m), ctx);
                out += &d(&dy, Var::X(m - n), ctx).scale(&(qi(2 * m) * &k));
            }
            out += &d(v, Var::X(-n), ctx).scale(&(&k * qi(n) + j));
        }
    }
    project(&out, ctx)
}

/// `ℰ_i` from its defining double sum.
pub fn oracle_script_e(i: i64, v: &Element) -> Element {
    let w = window(v, i) + i.abs();
    let mut out = Element::zero();
    for a in i + 1..=w {
        let da = v.diff(Var::X(a), &qi(0));
        for b in i + 1..=w {
            out += &(&Element::x(a + b - i) * &da.diff(Var::X(b), &qi(0)));
        }
    }
    out
}

/// Partition numbers by Euler's pentagonal recurrence.
pub fn partitions(n: usize) -> Vec<u64> {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut acc = 0i64;
        for k in 1.. {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let g1 = k * (3 * k - 1) / 2;
            let g2 = k * (3 * k + 1) / 2;
            if g1 > m {
                break;
            }
            acc += sign * p[m - g1];
            if g2 <= m {
                acc += sign * p[m - g2];
            }
        }
        p[m] = acc;
    }
    p.into_iter().map(|x| x as u64).collect()
}

pub fn set(xs: &[i64]) -> BTreeSet<i64> {
    xs.iter().copied().collect()
}

pub fn ctx(
    kind: Kind,
    i: Option<i64>,
    s: &[i64],
    z: Rational,
    j: Rational,
    k: Rational,
) -> ModuleContext {
    make_context(kind, i, set(s), z, Params::new(j, k)).unwrap()
}

pub fn small_shape() -> Shape {
    Shape {
        x_range: 4,
        y_max: 3,
        max_degree: 3,
        max_terms: 3,
    }
}

/// One context of every kind, with generic parameters.
pub fn sample_contexts() -> Vec<ModuleContext> {
    use ffr_core::q;
    vec![
        ctx(Kind::Verma, None, &[], qi(0), q(1, 2), qi(1)),
        ctx(Kind::ZeroChargePoly, None, &[], qi(0), qi(2), qi(0)),
        ctx(Kind::LocFull, Some(1), &[2], qi(0), q(1, 3), qi(2)),
        ctx(Kind::QuotMs, None, &[1, 3], qi(0), qi(0), qi(1)),
        ctx(Kind::QuotMis, Some(0), &[1], qi(0), q(1, 2), qi(1)),
        ctx(Kind::QuotMi, Some(-1), &[], qi(0), q(1, 3), qi(0)),
        ctx(Kind::Twisted, Some(1), &[], q(2, 7), q(1, 3), qi(2)),
    ]
}
