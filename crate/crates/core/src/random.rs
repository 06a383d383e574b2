//! Seeded random inputs for fuzzing and property checks.

use rand::Rng;

use crate::modspace::{project, Kind, ModuleContext};
use crate::realization::Generator;
use crate::ring::{q, Element, Monomial, Rational, Var};
use crate::ualgebra::UElement;

/// Support and size limits for random polynomials.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    /// `x_n` with `|n| ≤ x_range`.
    pub x_range: i64,
    /// `y_m` with `1 ≤ m ≤ y_max`; 0 disables `y`.
    pub y_max: i64,
    pub max_degree: u32,
    pub max_terms: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            x_range: 6,
            y_max: 6,
            max_degree: 4,
            max_terms: 4,
        }
    }
}

pub fn coefficient<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let num = rng.gen_range(-4i64..=4);
        if num != 0 {
            return q(num, rng.gen_range(1i64..=3));
        }
    }
}

pub fn monomial<R: Rng>(rng: &mut R, shape: &Shape) -> Monomial {
    let deg = rng.gen_range(0..=shape.max_degree);
    let mut m = Monomial::one();
    for _ in 0..deg {
        let v = if shape.y_max > 0 && rng.gen_bool(0.3) {
            Var::Y(rng.gen_range(1..=shape.y_max))
        } else {
            Var::X(rng.gen_range(-shape.x_range..=shape.x_range))
        };
        m = m.times(v, 1);
    }
    m
}

/// Nonzero polynomial with all exponents ≥ 0.
pub fn polynomial<R: Rng>(rng: &mut R, shape: &Shape) -> Element {
    loop {
        let mut v = Element::zero();
        for _ in 0..rng.gen_range(1..=shape.max_terms) {
            v.add_term(monomial(rng, shape), coefficient(rng));
        }
        if !v.is_zero() {
            return v;
        }
    }
}

/// Random nonzero member of `ctx`: a random polynomial whose terms get
/// the mandatory (or allowed) negative powers of `x_i` and `y_S`.
pub fn member<R: Rng>(rng: &mut R, ctx: &ModuleContext, shape: &Shape) -> Element {
    let mut shape = *shape;
    if ctx.zero_charge() {
        shape.y_max = 0;
    }
    loop {
        let base = polynomial(rng, &shape);
        let mut v = Element::zero();
        for (m, c) in base.terms() {
            let mut m = m.clone();
            match ctx.kind {
                Kind::Verma | Kind::ZeroChargePoly => {}
                Kind::LocFull => {
                    m = m.times(Var::X(ctx.i.unwrap()), rng.gen_range(-3..=2));
                    for &s in &ctx.s {
                        m = m.times(Var::Y(s), rng.gen_range(-2..=1));
                    }
                }
                Kind::Twisted => {
                    m = m.times(Var::X(ctx.i.unwrap()), rng.gen_range(-3..=2));
                }
                Kind::QuotMs | Kind::QuotMis | Kind::QuotMi => {
                    if matches!(ctx.kind, Kind::QuotMis | Kind::QuotMi) {
                        let i = ctx.i.unwrap();
                        let e = m.exp(Var::X(i));
                        m = m.times(Var::X(i), -e - rng.gen_range(1..=3));
                    }
                    for &s in &ctx.s {
                        let e = m.exp(Var::Y(s));
                        m = m.times(Var::Y(s), -e - rng.gen_range(1..=2));
                    }
                }
            }
            v.add_term(m, c.clone());
        }
        let v = project(&v, ctx);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn generator<R: Rng>(rng: &mut R, range: i64) -> Generator {
    let n = rng.gen_range(-range..=range);
    match rng.gen_range(0..5) {
        0 => Generator::E(n),
        1 => Generator::F(n),
        2 => Generator::H(n),
        3 => Generator::C,
        _ => Generator::Dg,
    }
}

/// Random combination of short words with nonnegative powers.
pub fn uelement<R: Rng>(rng: &mut R, range: i64, max_len: usize, max_words: usize) -> UElement {
    let mut u = UElement::zero();
    while u.is_zero() {
        for _ in 0..rng.gen_range(1..=max_words) {
            let len = rng.gen_range(1..=max_len);
            let fs = (0..len).map(|_| (generator(rng, range), 1)).collect();
            u = u.add(&UElement::word(coefficient(rng), fs));
        }
    }
    u
}
