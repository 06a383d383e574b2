//! Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic
//! throughout. Runs without the libtest harness so the report is always
//! printed; the process exits nonzero if any criterion fails.

use std::collections::BTreeSet;

use ffr_cli::{parse_element, run};
use ffr_core::batch::bracket_fidelity;
use ffr_core::modspace::{imaginary_counts, project, support_census};
use ffr_core::random::{self, Shape};
use ffr_core::realization::{apply_generator, apply_script_e};
use ffr_core::structure::{
    coeff_a, coeff_c, coeff_c_from_a, generate_from_generator, local_nilpotency_probe,
    primitive_vector, reduce_to_generator, reducibility_witness, script_e_constant, Probe,
    WitnessKind,
};
use ffr_core::ualgebra::{apply_uelement, theta};
use ffr_core::{
    make_context, q, qi, Element, Exec, Generator, Kind, ModuleContext, Monomial, Params, Rational,
    Var,
};
use ffr_validation::{ensure, run_all, Check, Outcome};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx(
    kind: Kind,
    i: Option<i64>,
    s: &[i64],
    z: Rational,
    j: Rational,
    k: Rational,
) -> ModuleContext {
    make_context(kind, i, s.iter().copied().collect(), z, Params::new(j, k)).unwrap()
}

fn small_shape() -> Shape {
    Shape {
        x_range: 3,
        y_max: 3,
        max_degree: 3,
        max_terms: 3,
    }
}

fn bracket_fidelity_suite() -> Outcome {
    let shape = Shape {
        x_range: 6,
        y_max: 6,
        max_degree: 4,
        max_terms: 4,
    };
    let cases = [
        ModuleContext::verma(Params::new(qi(0), qi(1))),
        ModuleContext::verma(Params::new(q(1, 2), qi(1))),
        ctx(Kind::ZeroChargePoly, None, &[], qi(0), qi(2), qi(0)),
    ];
    let mut checks = 0;
    for (n, c) in cases.iter().enumerate() {
        let r = bracket_fidelity(c, 4, 50, 100 + n as u64, &shape, Exec::default())
            .map_err(|e| e.to_string())?;
        if let Some(v) = r.violations.first() {
            return Err(format!(
                "{c}: {} violations, first [{}, {}] on {}",
                r.violations.len(),
                v.a,
                v.b,
                v.v
            ));
        }
        checks += r.checks;
    }
    Ok(format!(
        "{checks} commutators, 0 violations in 3 parameter sets"
    ))
}

/// Partition numbers by direct enumeration of nonincreasing part lists.
fn partitions_brute(n: u64, max_part: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=max_part.min(n))
        .map(|p| partitions_brute(n - p, p))
        .sum()
}

fn census_suite() -> Outcome {
    let c = ModuleContext::verma(Params::new(qi(0), qi(1)));
    let counts = imaginary_counts(&support_census(&c, 8), &c, 8);
    let oracle: Vec<u64> = (1..=8).map(|k| partitions_brute(k, k)).collect();
    ensure(counts == oracle, || {
        format!("census {counts:?}, partitions {oracle:?}")
    })?;
    ensure(counts == [1, 2, 3, 5, 7, 11, 15, 22], || {
        format!("census {counts:?}")
    })?;
    Ok(format!("{counts:?}"))
}

fn primitive_suite() -> Outcome {
    let cases: [(i64, &[i64], i64); 4] = [(0, &[], 1), (0, &[1], 1), (1, &[], 2), (2, &[1, 3], 3)];
    for (i, s, j) in cases {
        let set: BTreeSet<i64> = s.iter().copied().collect();
        let w = primitive_vector(i, &set, &Params::new(qi(j), qi(1))).map_err(|e| e.to_string())?;
        let image =
            apply_generator(Generator::E(-i), &w.vector, &w.context).map_err(|e| e.to_string())?;
        ensure(image.is_zero(), || {
            format!("e[{}] {} = {image}", -i, w.vector)
        })?;
        ensure(!project(&w.vector, &w.context).is_zero(), || {
            "projects to zero".into()
        })?;
    }
    Ok("4 vectors annihilated by e_{-i}, all nonzero".into())
}

fn cyclicity_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let contexts = [
        ctx(Kind::QuotMs, None, &[1], qi(0), qi(0), qi(1)),
        ctx(Kind::QuotMis, Some(0), &[1], qi(0), q(1, 2), qi(1)),
        ctx(Kind::QuotMi, Some(0), &[], qi(0), q(1, 3), qi(0)),
    ];
    let mut steps = 0;
    for c in &contexts {
        for _ in 0..20 {
            let v = random::member(&mut rng, c, &small_shape());
            let t = reduce_to_generator(&v, c).map_err(|e| format!("{c}: {v}: {e}"))?;
            ensure(t.replay() == Ok(true), || {
                format!("{c}: trace of {v} does not replay")
            })?;
            ensure(
                !t.scalar.is_zero() && t.final_vector == c.generator().scale(&t.scalar),
                || format!("{c}: {v} ended at {}", t.final_vector),
            )?;
            steps += t.steps.len();
        }
        for _ in 0..20 {
            let v = random::member(&mut rng, c, &small_shape());
            let target = v.monomials().next().unwrap().clone();
            let (u, s) =
                generate_from_generator(&target, c).map_err(|e| format!("{c}: {target}: {e}"))?;
            let image = apply_uelement(&u, &c.generator(), c).map_err(|e| e.to_string())?;
            ensure(
                !s.is_zero() && image == Element::monomial(target.clone()).scale(&s),
                || format!("{c}: generator maps to {image}, not a multiple of {target}"),
            )?;
        }
    }
    Ok(format!(
        "60 reductions ({steps} replayed steps), 60 targets generated"
    ))
}

fn twisted_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    // (a) integral twist is an exponent shift
    let mut compared = 0;
    for (i, z) in [(0, 2), (1, -1)] {
        let tw = ctx(Kind::Twisted, Some(i), &[], qi(z), q(1, 3), qi(2));
        let loc = ctx(Kind::LocFull, Some(i), &[], qi(0), q(1, 3), qi(2));
        for _ in 0..10 {
            let v = random::member(&mut rng, &tw, &small_shape());
            for g in Generator::all_up_to(4) {
                let lhs = apply_generator(g, &v, &tw).unwrap().scale_var(Var::X(i), z);
                let rhs = apply_generator(g, &v.scale_var(Var::X(i), z), &loc).unwrap();
                ensure(lhs == rhs, || format!("(a) {g} on {v}: {lhs} vs {rhs}"))?;
                compared += 1;
            }
        }
    }
    // (b) the x_i^{-z} twist of u equals Θ_z(u) on the localization
    let (i, z) = (1, q(2, 7));
    let tw = ctx(Kind::Twisted, Some(i), &[], -z.clone(), q(1, 3), qi(2));
    let loc = ctx(Kind::LocFull, Some(i), &[], qi(0), q(1, 3), qi(2));
    for _ in 0..50 {
        let u = random::uelement(&mut rng, 3, 2, 2);
        let v = random::member(&mut rng, &tw, &small_shape());
        let th = theta(&z, &u, i).map_err(|e| e.to_string())?;
        let lhs = apply_uelement(&u, &v, &tw).unwrap();
        let rhs = apply_uelement(&th, &v, &loc).unwrap();
        ensure(lhs == rhs, || format!("(b) u = {u}, v = {v}"))?;
    }
    // (c) e_{-i}^k on x_i^z Z(y)-type vectors
    let mut chains = 0;
    // hit: the integral z − L that lands in the k ≤ 4 window for this α
    for (alpha, hit) in [2, 0, -2].into_iter().enumerate() {
        for (zz, l) in [
            (q(1, 3), q(1, 7)),
            (qi(1), q(1, 7)),
            (q(1, 3), q(1, 3) - qi(hit)),
        ] {
            let c = ctx(Kind::Twisted, Some(0), &[], zz.clone(), l, qi(1));
            let g =
                Element::y(1) + Element::y(2).scale(&q(-2, 3)) + &Element::y(1) * &Element::y(1);
            let v = match alpha {
                0 => g,
                1 => &Element::x(3) * &g,
                _ => {
                    &(&(&Element::x(3) * &Element::x(6)) - &(&Element::x(4) * &Element::x(5))) * &g
                }
            };
            let mut cur = v.clone();
            let mut product = qi(1);
            for k in 1..=4i64 {
                cur = apply_generator(Generator::E(0), &cur, &c).unwrap();
                product *= coeff_a(alpha as i64, &(qi(k - 1) - &zz), 0, &c.params);
                ensure(cur == v.scale_var(Var::X(0), -k).scale(&product), || {
                    format!("(c) α={alpha} z={zz} k={k}: {cur}")
                })?;
            }
            let integral = zz.is_integer() || (&zz - c.l_param()).is_integer();
            ensure(product.is_zero() == integral, || {
                format!("(c) α={alpha} z={zz}: product {product}")
            })?;
            chains += 1;
        }
    }
    // (d) z − J + iK ∈ ℤ gives a vector killed by e_{-i}
    for (i, zz, j, k) in [
        (0, q(1, 3), q(1, 3), qi(1)),
        (0, q(1, 3), q(-5, 3), qi(1)),
        (1, q(1, 2), q(3, 2), qi(-2)),
    ] {
        let c = ctx(Kind::Twisted, Some(i), &[], zz, j, k);
        let w = reducibility_witness(&c).map_err(|e| e.to_string())?;
        ensure(w.kind == WitnessKind::Primitive, || {
            format!("(d) {c}: {:?}", w.kind)
        })?;
        let image = apply_generator(Generator::E(-i), &w.vector, &c).unwrap();
        ensure(image.is_zero() && !w.vector.is_zero(), || {
            format!("(d) {c}: e[{}] {} = {image}", -i, w.vector)
        })?;
    }
    Ok(format!(
        "(a) {compared} actions, (b) 50 pairs, (c) {chains} chains, (d) 3 witnesses"
    ))
}

fn constants_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 0..=4u32 {
        let closed: Rational = (2..=n as i64 + 1).map(|t| qi(t * (t - 1))).product();
        ensure(script_e_constant(n) == closed, || format!("c_{n}"))?;
        for _ in 0..5 {
            let i = rng.gen_range(-2..=2);
            let idx: Vec<i64> = (0..=n).map(|_| rng.gen_range(i + 1..=i + 6)).collect();
            let mut v = idx
                .iter()
                .fold(Element::one(), |acc, &t| &acc * &Element::x(t));
            for _ in 0..n {
                v = apply_script_e(i, &v);
            }
            let m = idx.iter().sum::<i64>() - n as i64 * i;
            ensure(v == Element::x(m).scale(&closed), || {
                format!("c_{n} on {idx:?}: {v}")
            })?;
        }
    }
    for _ in 0..20 {
        let p = Params::new(random::coefficient(&mut rng), random::coefficient(&mut rng));
        for alpha in 0..=6 {
            ensure(
                coeff_c(alpha, 0, &p) == coeff_c_from_a(alpha, 0, &p),
                || format!("C_{alpha} at {p:?}"),
            )?;
        }
    }
    let c = ctx(Kind::QuotMis, Some(0), &[1], qi(0), q(1, 2), qi(1));
    let mut done = 0;
    while done < 20 {
        let v = random::member(&mut rng, &c, &small_shape()).filter(|m| m.exp(Var::X(0)) == -1);
        let Some(alpha) = v.monomials().next().map(|m| m.deg_x() + 1) else {
            continue;
        };
        let v = v.filter(|m| m.deg_x() + 1 == alpha);
        let fe = apply_generator(
            Generator::F(0),
            &apply_generator(Generator::E(0), &v, &c).unwrap(),
            &c,
        )
        .unwrap();
        let a = coeff_a(alpha, &qi(1), 0, &c.params);
        ensure(fe == v.scale(&a), || format!("f_0 e_0 on {v}: {fe}"))?;
        done += 1;
    }
    Ok("c_N (N ≤ 4), C_α (α ≤ 6, 20 parameters), A_{α,1} on 20 vectors".into())
}

fn basis_monomials(c: &ModuleContext, n: usize) -> Vec<Element> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    while seen.len() < n {
        let v = random::member(&mut rng, c, &small_shape());
        seen.extend(v.monomials().cloned());
    }
    seen.into_iter().take(n).map(Element::monomial).collect()
}

fn probe(g: Generator, v: &Element, c: &ModuleContext) -> Probe {
    local_nilpotency_probe(g, v, c, 10).unwrap()
}

fn nilpotency_context() -> ModuleContext {
    ctx(Kind::QuotMis, Some(0), &[], qi(0), q(1, 2), qi(1))
}

/// As stated: `E(−i)` nilpotent on basis monomials, every `F(n)` and
/// `E(m)`, `m ≠ −i`, surviving on the generator.
fn nilpotency_literal() -> Outcome {
    let c = nilpotency_context();
    let i = 0;
    let mut bad = Vec::new();
    for m in basis_monomials(&c, 10) {
        if let p @ Probe::Survives(_) = probe(Generator::E(-i), &m, &c) {
            bad.push(format!("E({}) on {m}: {p:?}", -i));
        }
    }
    let g = c.generator();
    for n in -3..=3 {
        for gen in [Generator::F(n), Generator::E(n)] {
            if gen == Generator::E(-i) {
                continue;
            }
            if let p @ Probe::Nilpotent(_) = probe(gen, &g, &c) {
                bad.push(format!("{gen:?} on {g}: {p:?}"));
            }
        }
    }
    if bad.is_empty() {
        Ok("all probes as stated".into())
    } else {
        Err(format!(
            "{} probes differ, e.g. {}",
            bad.len(),
            bad[..bad.len().min(2)].join("; ")
        ))
    }
}

/// With `f_i` acting as multiplication by `x_i` and only `x_i^{≤ −1}` kept,
/// `F(i)` is the locally nilpotent element; every `E(m)` and every other
/// `F(n)` acts injectively.
fn nilpotency_corrected() -> Outcome {
    let c = nilpotency_context();
    let i = 0;
    for m in basis_monomials(&c, 10) {
        let p = probe(Generator::F(i), &m, &c);
        ensure(matches!(p, Probe::Nilpotent(_)), || {
            format!("F({i}) on {m}: {p:?}")
        })?;
    }
    let g = c.generator();
    for n in -3..=3 {
        for gen in [Generator::F(n), Generator::E(n)] {
            if gen == Generator::F(i) {
                continue;
            }
            let p = probe(gen, &g, &c);
            ensure(p == Probe::Survives(10), || {
                format!("{gen:?} on {g}: {p:?}")
            })?;
        }
    }
    Ok("F(i) nilpotent on 10 monomials; 13 other generators survive 10 steps".into())
}

/// Runs the `ffr` entry point in-process; its stdout is exactly what the
/// binary prints.
fn cli(args: &[&str]) -> (u8, String) {
    let out = run(std::iter::once("ffr").chain(args.iter().copied()));
    (out.code, out.stdout)
}

fn cli_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let v = random::polynomial(&mut rng, &Shape::default())
            .scale_var(Var::X(0), -rng.gen_range(0..3))
            .scale_var(Var::Y(1), -rng.gen_range(0..3));
        let text = v.to_string();
        let back = parse_element(&text).map_err(|e| format!("{text}: {e}"))?;
        ensure(back == v, || format!("{text} parsed as {back}"))?;
    }
    let goldens: [(&[&str], &str); 3] = [
        (
            &["act", "--gen", "e[-0]", "--on", "x[0]^-2*(x[1]*x[4]-x[2]*x[3])", "--module", "mis", "--i", "0", "--J", "1", "--K", "1", "--json"],
            "{\"status\":\"ok\",\"result\":\"0\"}\n",
        ),
        (
            &["census", "--module", "verma", "--J", "0", "--K", "1", "--depth", "6", "--json"],
            "{\"status\":\"ok\",\"result\":{\"depth\":6,\"lambda_minus_k_delta\":[{\"k\":1,\"count\":1},{\"k\":2,\"count\":2},{\"k\":3,\"count\":3},{\"k\":4,\"count\":5},{\"k\":5,\"count\":7},{\"k\":6,\"count\":11}]}}\n",
        ),
        (
            &["bracket-check", "--range", "3", "--trials", "50", "--seed", "7", "--json"],
            "{\"status\":\"ok\",\"result\":{\"summary\":\"OK: 0 violations\",\"pairs\":276,\"trials\":50,\"checks\":13800,\"violations\":[]}}\n",
        ),
    ];
    for (args, expected) in goldens {
        let (code, out) = cli(args);
        ensure(code == 0 && out == expected, || {
            format!("{} -> exit {code}: {out}", args[0])
        })?;
    }
    Ok("100 round trips, 3 goldens byte-for-byte".into())
}

fn main() {
    let criteria: [Check; 9] = [
        ("1 bracket fidelity", bracket_fidelity_suite),
        ("2 imaginary multiplicities", census_suite),
        ("3 primitive vectors", primitive_suite),
        ("4 constructive irreducibility", cyclicity_suite),
        ("5 twisted localization", twisted_suite),
        ("6 constant cross-checks", constants_suite),
        ("7 nilpotency census (as stated)", nilpotency_literal),
        ("7' nilpotency census (f_i nilpotent)", nilpotency_corrected),
        ("8 CLI contract", cli_suite),
    ];
    if run_all(&criteria) > 0 {
        std::process::exit(1);
    }
}
