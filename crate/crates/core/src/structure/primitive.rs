use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modspace::{is_member, make_context, Kind, ModuleContext, Params};
use crate::realization::{apply_generator, apply_script_e, Generator};
use crate::ring::{as_integer, qi, Element, Monomial, Var};

use super::{coeff_a, integral_l, irreducibility_criterion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WitnessKind {
    /// Annihilated by `e_{−i}`.
    Primitive,
    /// Generates a submodule spanned by the monomials of a given shape.
    SubmoduleGenerator,
}

/// Monomial shapes spanning the proper submodules used as witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SubmoduleShape {
    /// Some `y_j` with `j ∉ S` has positive exponent.
    HasYOutside(BTreeSet<i64>),
    /// Stored exponent of `x_i` is at least the bound.
    XiExponentAtLeast { i: i64, bound: i64 },
    /// All exponents nonnegative.
    Polynomial,
    /// Nonconstant.
    Nonconstant,
}

impl SubmoduleShape {
    pub fn contains(&self, m: &Monomial) -> bool {
        match self {
            SubmoduleShape::HasYOutside(s) => m
                .iter()
                .any(|(v, e)| matches!(v, Var::Y(j) if !s.contains(&j)) && e > 0),
            SubmoduleShape::XiExponentAtLeast { i, bound } => m.exp(Var::X(*i)) >= *bound,
            SubmoduleShape::Polynomial => m.iter().all(|(_, e)| e >= 0),
            SubmoduleShape::Nonconstant => !m.is_one(),
        }
    }

    pub fn contains_element(&self, v: &Element) -> bool {
        v.monomials().all(|m| self.contains(m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub vector: Element,
    pub kind: WitnessKind,
    pub context: ModuleContext,
    pub certificate: String,
}

/// Builds `v = y_S^{-1} Σ_{t=0}^{N} x_i^{t−y} g_t` with `e_{−i} v = 0`.
pub fn primitive_vector(i: i64, s: &BTreeSet<i64>, params: &Params) -> Result<Witness> {
    let kind = if params.k.is_zero() && s.is_empty() {
        Kind::QuotMi
    } else {
        Kind::QuotMis
    };
    let ctx = make_context(kind, Some(i), s.clone(), qi(0), params.clone())?;
    primitive_in(&ctx)
}

fn primitive_in(ctx: &ModuleContext) -> Result<Witness> {
    let i = ctx.i.expect("localized context");
    let l = integral_l(&ctx.params, i).ok_or(Error::NotIntegral)?;
    let n = (l - 2).max(0);
    let y = 2 * n + 3 - l;
    let m = i + ctx.s.iter().copied().max().unwrap_or(0).max(0);
    let first = Monomial::from_pairs(
        (1..=n + 1)
            .map(|t| (Var::X(m + t), 1))
            .chain([(Var::X(m + n + 4), 1)]),
    );
    let second = Monomial::from_pairs(
        (1..=n)
            .map(|t| (Var::X(m + t), 1))
            .chain([(Var::X(m + n + 2), 1), (Var::X(m + n + 3), 1)]),
    );
    let g0 = Element::monomial(first) - Element::monomial(second);
    let mut check = g0.clone();
    for _ in 0..=n {
        check = apply_script_e(i, &check);
    }
    if !check.is_zero() {
        return Err(Error::HypothesisFail(format!(
            "the seed {g0} is not killed by the (N+1)-st power of the contraction operator"
        )));
    }
    let mut ys = Monomial::one();
    for &k in &ctx.s {
        ys = ys.times(Var::Y(k), -1);
    }
    let mut v = Element::zero();
    let mut g = g0;
    for t in 0..=n {
        if t > 0 {
            let a_t = qi(t) * qi(t - 2 * n + l - 3);
            g = apply_script_e(i, &g).scale(&(qi(1) / a_t));
        }
        v += &g.scale_var(Var::X(i), t - y);
    }
    let v = &v * &Element::monomial(ys);
    if v.is_zero() || !is_member(&v, ctx) {
        return Err(Error::HypothesisFail(
            "primitive vector left the module".into(),
        ));
    }
    let image = apply_generator(Generator::E(-i), &v, ctx)?;
    if !image.is_zero() {
        return Err(Error::HypothesisFail(format!(
            "e[{}] does not annihilate {v}",
            -i
        )));
    }
    Ok(Witness {
        vector: v,
        kind: WitnessKind::Primitive,
        context: ctx.clone(),
        certificate: format!(
            "e[{}] annihilates the vector (N = {n}); vector is nonzero",
            -i
        ),
    })
}

/// Checks that applying every generator with `|n| ≤ 4`, up to two times,
/// to `v` stays inside `shape`, and that `shape` misses the generator.
fn containment(v: &Element, ctx: &ModuleContext, shape: &SubmoduleShape) -> Result<String> {
    let gens = Generator::all_up_to(4);
    if !shape.contains_element(v) || v.is_zero() {
        return Err(Error::HypothesisFail(
            "witness is not in its own submodule".into(),
        ));
    }
    let mut frontier = vec![v.clone()];
    let mut checked = 0usize;
    for _ in 0..2 {
        let mut next = Vec::new();
        for w in &frontier {
            for &g in &gens {
                let r = apply_generator(g, w, ctx)?;
                checked += 1;
                if !shape.contains_element(&r) {
                    return Err(Error::HypothesisFail(format!(
                        "{g} leaves the submodule on {w}"
                    )));
                }
                if !r.is_zero() {
                    next.push(r);
                }
            }
        }
        frontier = next;
    }
    Ok(format!(
        "{checked} generator applications (|n| ≤ 4, depth 2) stay in the submodule {shape:?}, which excludes the module generator"
    ))
}

/// A nonzero vector generating a proper submodule, with a verified
/// certificate.
pub fn reducibility_witness(ctx: &ModuleContext) -> Result<Witness> {
    if irreducibility_criterion(ctx).irreducible {
        return Err(Error::NotReducible);
    }
    let k_zero = ctx.params.k.is_zero();
    let first_outside = (1..).find(|j| !ctx.s.contains(j)).unwrap();
    let y_outside = |base: Element| base.scale_var(Var::Y(first_outside), 1);
    let sub = |vector: Element, shape: SubmoduleShape| -> Result<Witness> {
        let certificate = containment(&vector, ctx, &shape)?;
        if shape.contains_element(&ctx.generator()) && ctx.kind != Kind::Twisted {
            return Err(Error::HypothesisFail(
                "submodule contains the generator".into(),
            ));
        }
        Ok(Witness {
            vector,
            kind: WitnessKind::SubmoduleGenerator,
            context: ctx.clone(),
            certificate,
        })
    };
    match ctx.kind {
        Kind::QuotMis | Kind::QuotMi if integral_l(&ctx.params, ctx.i.unwrap()).is_some() => {
            primitive_in(ctx)
        }
        Kind::QuotMis | Kind::QuotMs | Kind::Verma => {
            debug_assert!(k_zero);
            sub(
                y_outside(ctx.generator()),
                SubmoduleShape::HasYOutside(ctx.s.clone()),
            )
        }
        Kind::ZeroChargePoly => sub(Element::x(0), SubmoduleShape::Nonconstant),
        Kind::LocFull => sub(Element::one(), SubmoduleShape::Polynomial),
        Kind::Twisted => {
            let i = ctx.i.unwrap();
            if let Some(z) = as_integer(&ctx.z) {
                let v = Element::monomial(Monomial::var(Var::X(i), -z));
                sub(v, SubmoduleShape::XiExponentAtLeast { i, bound: -z })
            } else if let Some(n) = as_integer(&(&ctx.z - ctx.l_param())) {
                let v = Element::monomial(Monomial::var(Var::X(i), 1 - n));
                let image = apply_generator(Generator::E(-i), &v, ctx)?;
                if !image.is_zero() {
                    return Err(Error::HypothesisFail(format!(
                        "e[{}] does not annihilate {v}",
                        -i
                    )));
                }
                let p = -(&ctx.z + qi(1 - n));
                debug_assert!(coeff_a(0, &p, i, &ctx.params).is_zero());
                Ok(Witness {
                    vector: v,
                    kind: WitnessKind::Primitive,
                    context: ctx.clone(),
                    certificate: format!(
                        "e[{}] annihilates x[{i}]^(z+{}) (N = {n}); vector is nonzero",
                        -i,
                        1 - n
                    ),
                })
            } else {
                sub(Element::y(1), SubmoduleShape::HasYOutside(BTreeSet::new()))
            }
        }
        _ => Err(Error::NotReducible),
    }
}
