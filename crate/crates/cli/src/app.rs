use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ffr_core::batch::bracket_fidelity;
use ffr_core::modspace::{imaginary_counts, support_census_with, weight_of};
use ffr_core::random::Shape;
use ffr_core::realization::apply_generator;
use ffr_core::structure::{
    degrees, generate_from_generator, irreducibility_criterion, local_nilpotency_probe,
    primitive_vector, reduce_to_generator, reducibility_witness, Probe,
};
use ffr_core::ualgebra::{apply_uelement, theta};
use ffr_core::{make_context, Exec, Kind, ModuleContext, Params, Rational};
use serde_json::{json, Value};

use crate::parse::{parse_element, parse_generator, parse_uelement, ParseError};

#[derive(Parser, Debug)]
#[command(
    name = "ffr",
    version,
    about = "Exact computations in free-field modules over affine sl2"
)]
struct Cli {
    /// Emit {status, result, trace?} JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModuleArg {
    Verma,
    Poly,
    Loc,
    Ms,
    Mis,
    Mi,
    Twisted,
}

impl ModuleArg {
    fn kind(self) -> Kind {
        match self {
            ModuleArg::Verma => Kind::Verma,
            ModuleArg::Poly => Kind::ZeroChargePoly,
            ModuleArg::Loc => Kind::LocFull,
            ModuleArg::Ms => Kind::QuotMs,
            ModuleArg::Mis => Kind::QuotMis,
            ModuleArg::Mi => Kind::QuotMi,
            ModuleArg::Twisted => Kind::Twisted,
        }
    }
}

fn rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let r: Rational = s
        .parse()
        .map_err(|_| format!("not a rational number: {s}"))?;
    Ok(r)
}

fn index_list(s: &str) -> Result<BTreeSet<i64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| format!("not an integer: {t}")))
        .collect()
}

#[derive(Args, Debug, Clone)]
struct ModuleOpts {
    #[arg(long, value_enum, default_value = "verma")]
    module: ModuleArg,
    /// Localized index.
    #[arg(long, allow_hyphen_values = true)]
    i: Option<i64>,
    /// Inverted y indices, comma separated.
    #[arg(long = "S", value_parser = index_list)]
    s: Option<BTreeSet<i64>>,
    #[arg(long = "J", value_parser = rational, default_value = "0", allow_hyphen_values = true)]
    j: Rational,
    /// Defaults to 0 for the zero-charge modules (poly, mi), 1 otherwise.
    #[arg(long = "K", value_parser = rational, allow_hyphen_values = true)]
    k: Option<Rational>,
    #[arg(long = "D", value_parser = rational, default_value = "0", allow_hyphen_values = true)]
    d: Rational,
    /// Twist exponent.
    #[arg(long, value_parser = rational, default_value = "0", allow_hyphen_values = true)]
    z: Rational,
}

impl ModuleOpts {
    fn context(&self) -> Result<ModuleContext, Failure> {
        let kind = self.module.kind();
        let k = self.k.clone().unwrap_or_else(|| {
            let zero_charge = matches!(kind, Kind::ZeroChargePoly | Kind::QuotMi);
            Rational::from_integer((!zero_charge as i64).into())
        });
        let params = Params::new(self.j.clone(), k).with_d(self.d.clone());
        make_context(
            kind,
            self.i,
            self.s.clone().unwrap_or_default(),
            self.z.clone(),
            params,
        )
        .map_err(|e| Failure::usage(e.code(), e.to_string()))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply a U-element to a vector.
    Act {
        #[arg(long = "gen", allow_hyphen_values = true)]
        gen: String,
        #[arg(long, allow_hyphen_values = true)]
        on: String,
        #[command(flatten)]
        m: ModuleOpts,
    },
    /// Check the bracket relations on random vectors.
    BracketCheck {
        #[arg(long, default_value_t = 4)]
        range: i64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        m: ModuleOpts,
    },
    /// Twist a U-element by the binomial series in f_i.
    Theta {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        z: Rational,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
    },
    /// Build the vector killed by e_{-i} for integral J - iK.
    Primitive {
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        #[arg(long = "S", value_parser = index_list)]
        s: Option<BTreeSet<i64>>,
        #[arg(long = "J", value_parser = rational, allow_hyphen_values = true)]
        j: Rational,
        #[arg(long = "K", value_parser = rational, default_value = "1", allow_hyphen_values = true)]
        k: Rational,
    },
    /// Reduce a vector to a multiple of the module generator.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        on: String,
        #[command(flatten)]
        m: ModuleOpts,
    },
    /// Reach a basis monomial from the module generator.
    Generate {
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[command(flatten)]
        m: ModuleOpts,
    },
    /// Vector generating a proper submodule.
    Witness {
        #[command(flatten)]
        m: ModuleOpts,
    },
    /// Decide irreducibility from the parameters.
    Criterion {
        #[command(flatten)]
        m: ModuleOpts,
    },
    /// Weight multiplicities at λ - kδ from a truncated support census.
    Census {
        #[arg(long, default_value_t = 6)]
        depth: u32,
        #[command(flatten)]
        m: ModuleOpts,
    },
    /// Weight of a homogeneous vector.
    Weight {
        #[arg(long, allow_hyphen_values = true)]
        on: String,
        #[command(flatten)]
        m: ModuleOpts,
    },
    /// x/y degree statistics of a vector.
    Degrees {
        #[arg(long, allow_hyphen_values = true)]
        on: String,
    },
    /// Least k with g^k v = 0, up to a bound.
    Probe {
        #[arg(long = "gen", allow_hyphen_values = true)]
        gen: String,
        #[arg(long, allow_hyphen_values = true)]
        on: String,
        #[arg(long, default_value_t = 10)]
        max_iter: u32,
        #[command(flatten)]
        m: ModuleOpts,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    exit: u8,
    code: &'static str,
    message: String,
    pos: Option<usize>,
}

impl Failure {
    fn usage(code: &'static str, message: String) -> Self {
        Failure {
            exit: 2,
            code,
            message,
            pos: None,
        }
    }
}

impl From<ffr_core::Error> for Failure {
    fn from(e: ffr_core::Error) -> Self {
        Failure {
            exit: 1,
            code: e.code(),
            message: e.to_string(),
            pos: None,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure {
            exit: 2,
            code: e.code(),
            message: e.to_string(),
            pos: Some(e.pos()),
        }
    }
}

struct Report {
    text: String,
    result: Value,
    trace: Option<Value>,
}

impl Report {
    fn plain(text: String) -> Self {
        Report {
            result: Value::String(text.clone()),
            text,
            trace: None,
        }
    }
}

fn s<T: ToString>(x: T) -> Value {
    Value::String(x.to_string())
}

fn execute(cmd: Command) -> Result<Report, Failure> {
    match cmd {
        Command::Act { gen, on, m } => {
            let ctx = m.context()?;
            let u = parse_uelement(&gen)?;
            let v = parse_element(&on)?;
            Ok(Report::plain(apply_uelement(&u, &v, &ctx)?.to_string()))
        }
        Command::BracketCheck {
            range,
            trials,
            seed,
            sequential,
            m,
        } => {
            let ctx = m.context()?;
            let exec = if sequential {
                Exec::Sequential
            } else {
                Exec::default()
            };
            let r = bracket_fidelity(&ctx, range, trials, seed, &Shape::default(), exec)?;
            let summary = if r.violations.is_empty() {
                "OK: 0 violations".to_string()
            } else {
                format!("FAIL: {} violations", r.violations.len())
            };
            let mut text = summary.clone();
            for v in r.violations.iter().take(5) {
                let _ = write!(
                    text,
                    "\n[{}, {}] on {}: residual {}",
                    v.a, v.b, v.v, v.residual
                );
            }
            let violations: Vec<Value> = r
                .violations
                .iter()
                .map(|v| json!({"a": s(v.a), "b": s(v.b), "vector": s(&v.v), "residual": s(&v.residual)}))
                .collect();
            let failed = !violations.is_empty();
            let result = json!({
                "summary": summary,
                "pairs": r.pairs,
                "trials": r.trials,
                "checks": r.checks,
                "violations": violations,
            });
            if failed {
                return Err(Failure {
                    exit: 1,
                    code: "BRACKET_VIOLATION",
                    message: text,
                    pos: None,
                });
            }
            Ok(Report {
                text,
                result,
                trace: None,
            })
        }
        Command::Theta { z, u, i } => {
            let u = parse_uelement(&u)?;
            Ok(Report::plain(theta(&z, &u, i)?.to_string()))
        }
        Command::Primitive { i, s: set, j, k } => {
            let w = primitive_vector(i, &set.unwrap_or_default(), &Params::new(j, k))?;
            Ok(Report {
                text: format!("{}\nmodule: {}\n{}", w.vector, w.context, w.certificate),
                result: json!({"vector": s(&w.vector), "module": s(&w.context), "certificate": w.certificate}),
                trace: None,
            })
        }
        Command::Reduce { on, m } => {
            let ctx = m.context()?;
            let v = parse_element(&on)?;
            let t = reduce_to_generator(&v, &ctx)?;
            let mut text = String::new();
            let mut trace = Vec::new();
            for st in &t.steps {
                let tag = serde_json::to_value(st.tag).expect("tag");
                let tag = tag.as_str().unwrap_or_default().to_string();
                let _ = writeln!(text, "{tag:<11} {}  =>  {}", st.op, st.result);
                trace.push(json!({"tag": tag, "op": s(&st.op), "result": s(&st.result)}));
            }
            let _ = write!(text, "final: {} = {} * generator", t.final_vector, t.scalar);
            Ok(Report {
                text,
                result: json!({
                    "final": s(&t.final_vector),
                    "scalar": s(&t.scalar),
                    "generator": s(ctx.generator()),
                    "replayed": t.replay()?,
                }),
                trace: Some(Value::Array(trace)),
            })
        }
        Command::Generate { target, m } => {
            let ctx = m.context()?;
            let v = parse_element(&target)?;
            let mut terms = v.terms();
            let mono = match (terms.next(), terms.next()) {
                (Some((m, _)), None) => m.clone(),
                _ => {
                    return Err(Failure::usage(
                        "SYNTAX_ERROR",
                        "target must be a single monomial".into(),
                    ))
                }
            };
            let (u, c) = generate_from_generator(&mono, &ctx)?;
            Ok(Report {
                text: format!("{u}\nmaps the generator to {c} * {mono}"),
                result: json!({"operator": s(&u), "scalar": s(&c), "target": s(&mono)}),
                trace: None,
            })
        }
        Command::Witness { m } => {
            let ctx = m.context()?;
            let w = reducibility_witness(&ctx)?;
            let kind = serde_json::to_value(w.kind).expect("kind");
            Ok(Report {
                text: format!(
                    "{}\n{}\n{}",
                    w.vector,
                    kind.as_str().unwrap_or_default(),
                    w.certificate
                ),
                result: json!({"vector": s(&w.vector), "kind": kind, "certificate": w.certificate}),
                trace: None,
            })
        }
        Command::Criterion { m } => {
            let ctx = m.context()?;
            let c = irreducibility_criterion(&ctx);
            let word = if c.irreducible {
                "irreducible"
            } else {
                "reducible"
            };
            Ok(Report {
                text: format!("{word}: {}", c.reason),
                result: json!({"irreducible": c.irreducible, "reason": c.reason}),
                trace: None,
            })
        }
        Command::Census { depth, m } => {
            let ctx = m.context()?;
            let census = support_census_with(&ctx, depth, Exec::default());
            let counts = imaginary_counts(&census, &ctx, depth);
            let mut text = String::from("k\tdim");
            let mut rows = Vec::new();
            for (k, n) in counts.iter().enumerate() {
                let _ = write!(text, "\n{}\t{n}", k + 1);
                rows.push(json!({"k": k + 1, "count": n}));
            }
            Ok(Report {
                text,
                result: json!({"depth": depth, "lambda_minus_k_delta": rows}),
                trace: None,
            })
        }
        Command::Weight { on, m } => {
            let ctx = m.context()?;
            let w = weight_of(&parse_element(&on)?, &ctx)?;
            Ok(Report {
                text: format!("h0 = {}\nc = {}\nd = {}", w.h0, w.c, w.d),
                result: json!({"h0": s(&w.h0), "c": s(&w.c), "d": s(&w.d)}),
                trace: None,
            })
        }
        Command::Degrees { on } => {
            let r = degrees(&parse_element(&on)?)?;
            Ok(Report {
                text: format!(
                    "deg_x = {}\ndeg_x+ = {}\ndeg_y = {}\ndeg_y+ = {}",
                    r.deg_x, r.deg_x_plus, r.deg_y, r.deg_y_plus
                ),
                result: serde_json::to_value(&r).expect("report"),
                trace: None,
            })
        }
        Command::Probe {
            gen,
            on,
            max_iter,
            m,
        } => {
            let ctx = m.context()?;
            let g = parse_generator(&gen)?;
            let v = parse_element(&on)?;
            // check membership first so a bad vector is not reported as nilpotent
            apply_generator(g, &v, &ctx)?;
            let (outcome, k) = match local_nilpotency_probe(g, &v, &ctx, max_iter)? {
                Probe::Nilpotent(k) => ("NILPOTENT", k),
                Probe::Survives(k) => ("SURVIVES", k),
            };
            Ok(Report {
                text: format!("{outcome}({k})"),
                result: json!({"outcome": outcome, "k": k}),
                trace: None,
            })
        }
    }
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    let json_mode = cli.json;
    match execute(cli.cmd) {
        Ok(r) => {
            let stdout = if json_mode {
                let mut env = json!({"status": "ok", "result": r.result});
                if let Some(t) = r.trace {
                    env["trace"] = t;
                }
                format!("{env}\n")
            } else {
                format!("{}\n", r.text)
            };
            Outcome {
                code: 0,
                stdout,
                stderr: String::new(),
            }
        }
        Err(f) => {
            if json_mode {
                let mut err = json!({"code": f.code, "message": f.message});
                if let Some(p) = f.pos {
                    err["position"] = json!(p);
                }
                Outcome {
                    code: f.exit,
                    stdout: format!("{}\n", json!({"status": "error", "error": err})),
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: f.exit,
                    stdout: String::new(),
                    stderr: format!("error[{}]: {}\n", f.code, f.message),
                }
            }
        }
    }
}
