//! Batch workloads that fan out over [`Exec`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::modspace::ModuleContext;
use crate::par::{self, Exec};
use crate::random::{self, Shape};
use crate::realization::Generator;
use crate::ring::Element;
use crate::ualgebra::commutator_residual;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub a: Generator,
    pub b: Generator,
    pub v: Element,
    pub residual: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketReport {
    pub pairs: usize,
    pub trials: usize,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

/// Checks `[Φ(a), Φ(b)] = Φ([a, b])` on `trials` random members of `ctx`
/// for every unordered pair of generators with `|n| ≤ range`.
pub fn bracket_fidelity(
    ctx: &ModuleContext,
    range: i64,
    trials: usize,
    seed: u64,
    shape: &Shape,
    exec: Exec,
) -> Result<BracketReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vs: Vec<Element> = (0..trials)
        .map(|_| random::member(&mut rng, ctx, shape))
        .collect();
    let gens = Generator::all_up_to(range);
    let mut pairs = Vec::new();
    for (k, &a) in gens.iter().enumerate() {
        for &b in &gens[k..] {
            pairs.push((a, b));
        }
    }
    let found = par::map(exec, &pairs, |&(a, b)| -> Result<Vec<Violation>> {
        let mut bad = Vec::new();
        for v in &vs {
            let residual = commutator_residual(a, b, v, ctx)?;
            if !residual.is_zero() {
                bad.push(Violation {
                    a,
                    b,
                    v: v.clone(),
                    residual,
                });
            }
        }
        Ok(bad)
    });
    let mut violations = Vec::new();
    for r in found {
        violations.extend(r?);
    }
    Ok(BracketReport {
        pairs: pairs.len(),
        trials,
        checks: pairs.len() * trials,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modspace::Params;
    use crate::ring::{q, qi};

    #[test]
    fn small_bracket_run_is_clean() {
        let ctx = ModuleContext::verma(Params::new(q(1, 2), qi(1)));
        let r = bracket_fidelity(&ctx, 2, 5, 3, &Shape::default(), Exec::default()).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations.first());
    }
}
