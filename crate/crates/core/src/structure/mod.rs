//! Degrees, closed-form constants, primitive vectors, constructive
//! reductions to the cyclic generator, reducibility witnesses and
//! local-nilpotency probes.

mod primitive;
mod reduce;

pub use primitive::{primitive_vector, reducibility_witness, SubmoduleShape, Witness, WitnessKind};
pub use reduce::{
    generate_from_generator, probe_identity_holds, reduce_many, reduce_to_generator,
    ReductionTrace, Step, StepTag,
};

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modspace::{Kind, ModuleContext, Params};
use crate::realization::{apply_generator, Generator};
use crate::ring::{as_integer, qi, Element, Rational};
use crate::ualgebra::binomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub deg_x: i64,
    pub deg_x_plus: i64,
    pub deg_y: i64,
    pub deg_y_plus: i64,
    pub homogeneous_x: bool,
    pub homogeneous_x_plus: bool,
}

fn positive_part(m: &crate::ring::Monomial, x: bool) -> i64 {
    m.iter()
        .filter(|(v, e)| v.is_x() == x && *e > 0)
        .map(|(_, e)| e)
        .sum()
}

/// `x`/`y` degrees (plain and positive-part), maximized over monomials.
pub fn degrees(v: &Element) -> Result<DegreeReport> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let dx: Vec<i64> = v.monomials().map(|m| m.deg_x()).collect();
    let dxp: Vec<i64> = v.monomials().map(|m| positive_part(m, true)).collect();
    let same = |xs: &[i64]| xs.iter().all(|&a| a == xs[0]);
    Ok(DegreeReport {
        deg_x: *dx.iter().max().unwrap(),
        deg_x_plus: *dxp.iter().max().unwrap(),
        deg_y: v.monomials().map(|m| m.deg_y()).max().unwrap(),
        deg_y_plus: v
            .monomials()
            .map(|m| positive_part(m, false))
            .max()
            .unwrap(),
        homogeneous_x: same(&dx),
        homogeneous_x_plus: same(&dxp),
    })
}

/// Eigenvalue of `h_s` on `y_s` of the given exponent (in a vector with no
/// `x` dependence): `2·s·exponent·K`.
pub fn coeff_c_s(s: i64, exponent: i64, k: &Rational) -> Rational {
    qi(2 * s * exponent) * k
}

/// `A_{α,p} = −p(p + 1 − 2α + J − iK)`.
pub fn coeff_a(alpha: i64, p: &Rational, i: i64, params: &Params) -> Rational {
    -(p * (p + qi(1 - 2 * alpha) + params.shifted(i)))
}

/// `C_α = 2(2 − 2α + J − iK)(3 − 2α + J − iK)`.
pub fn coeff_c(alpha: i64, i: i64, params: &Params) -> Rational {
    let l = params.shifted(i);
    qi(2) * (qi(2 - 2 * alpha) + &l) * (qi(3 - 2 * alpha) + &l)
}

/// `A_{α,1} A_{α+1,2} − 2 A_{α+1,2} + 4`, equal to [`coeff_c`].
pub fn coeff_c_from_a(alpha: i64, i: i64, params: &Params) -> Rational {
    let a1 = coeff_a(alpha, &qi(1), i, params);
    let a2 = coeff_a(alpha + 1, &qi(2), i, params);
    &a1 * &a2 - qi(2) * &a2 + qi(4)
}

/// `c_N = 2^N ∏_{s=2}^{N+1} binom(s, 2)`, the constant in
/// `ℰ_i^N(x_{i_1}⋯x_{i_{N+1}}) = c_N x_{Σ i_t − N i}`.
pub fn script_e_constant(n: u32) -> Rational {
    (2..=n as i64 + 1).fold(qi(1i64 << n), |acc, s| acc * binomial(&qi(s), 2))
}

/// Splits `v` into `h_0`-eigencomponents, ordered by increasing `x`-degree.
pub fn h0_components(v: &Element, _ctx: &ModuleContext) -> Result<Vec<Element>> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut parts: BTreeMap<i64, Element> = BTreeMap::new();
    for (m, c) in v.terms() {
        parts
            .entry(m.deg_x())
            .or_default()
            .add_term(m.clone(), c.clone());
    }
    Ok(parts.into_values().collect())
}

/// `h_0` eigenvalue of stored `x`-degree `deg`.
pub(crate) fn h0_eigenvalue(deg: i64, ctx: &ModuleContext) -> Rational {
    &ctx.params.j - qi(2) * (qi(deg) + &ctx.z)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub irreducible: bool,
    pub reason: String,
}

fn is_int(r: &Rational) -> bool {
    r.is_integer()
}

/// Decides irreducibility from the parameters, exactly.
pub fn irreducibility_criterion(ctx: &ModuleContext) -> Criterion {
    let k_zero = ctx.params.k.is_zero();
    let l = ctx.l_param();
    let (irreducible, reason) = match ctx.kind {
        Kind::Verma => (
            !k_zero,
            if k_zero {
                "K = 0: the y-ideal is a proper submodule"
            } else {
                "K ≠ 0"
            },
        ),
        Kind::ZeroChargePoly => {
            let j0 = ctx.params.j.is_zero();
            (
                !j0,
                if j0 {
                    "J = 0: nonconstant polynomials form a submodule"
                } else {
                    "J ≠ 0"
                },
            )
        }
        Kind::LocFull => (false, "polynomials form a proper submodule"),
        Kind::QuotMs => (!k_zero, if k_zero { "K = 0" } else { "K ≠ 0" }),
        Kind::QuotMis => {
            if k_zero {
                (false, "K = 0")
            } else if is_int(&l) {
                (false, "J − iK is an integer")
            } else {
                (true, "K ≠ 0 and J − iK is not an integer")
            }
        }
        Kind::QuotMi => {
            if is_int(&ctx.params.j) {
                (false, "J is an integer")
            } else {
                (true, "J is not an integer")
            }
        }
        Kind::Twisted => {
            if is_int(&ctx.z) {
                (
                    false,
                    "z is an integer: the untwisted module contains the Verma module",
                )
            } else if is_int(&(&ctx.z - &l)) {
                (false, "z − J + iK is an integer")
            } else if k_zero {
                (false, "K = 0: the y-ideal is a proper submodule")
            } else {
                (true, "K ≠ 0, z and z − J + iK are not integers")
            }
        }
    };
    Criterion {
        irreducible,
        reason: reason.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Probe {
    Nilpotent(u32),
    Survives(u32),
}

/// Least `k ≤ max_iter` with `g^k v = 0`.
pub fn local_nilpotency_probe(
    g: Generator,
    v: &Element,
    ctx: &ModuleContext,
    max_iter: u32,
) -> Result<Probe> {
    let mut cur = v.clone();
    for k in 0..=max_iter {
        if cur.is_zero() {
            return Ok(Probe::Nilpotent(k));
        }
        if k < max_iter {
            cur = apply_generator(g, &cur, ctx)?;
        }
    }
    Ok(Probe::Survives(max_iter))
}

/// `J − iK` as an integer, if it is one.
pub(crate) fn integral_l(params: &Params, i: i64) -> Option<i64> {
    as_integer(&params.shifted(i))
}
