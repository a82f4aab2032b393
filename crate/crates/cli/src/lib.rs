//! Command-line front end for `stochgamma-core`: strict JSON inputs, one
//! subcommand per capability, canonical JSON reports.
//!
//! Exit codes: 0 on success, 1 on a domain error (reported as JSON), 2 on a
//! usage or input-format error.

pub mod report;
pub mod schema;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use stochgamma_core::cubical::{self, TruncatedCubicalSet, DEFAULT_EXPLOSION_BOUND};
use stochgamma_core::fincat::FiniteCategory;
use stochgamma_core::finprob::{self, FiniteProbability};
use stochgamma_core::gapped::{self, GapLocus};
use stochgamma_core::infoloss::{self, LossFunctional, SuiteConfig};
use stochgamma_core::pointed::PointedSet;
use stochgamma_core::quantum::{self, QuantumChannel, QuantumSummingFunctor};
use stochgamma_core::summing::{self, ClassicalSummingFunctor, RealizationDescriptor, RealizationParams};

use report::{real, reals, Failure};

#[derive(Debug, Parser)]
#[command(name = "stochgamma", version, about = "Probabilistic and quantum summing functors, losses, nerves and gap loci")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a typed object given by its `kind` field.
    Validate {
        /// Path to a JSON file, or inline JSON.
        #[arg(long)]
        input: String,
    },
    /// Information loss along a chain of stochastic morphisms.
    Loss {
        #[arg(long, alias = "input")]
        pipeline: String,
        #[arg(long, value_enum, default_value_t = LossChoice::Shannon)]
        loss: LossChoice,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Coproduct of the sources of two morphisms and their copairing.
    Coproduct {
        #[arg(long)]
        input: String,
    },
    /// Truncated cubical nerve of a finite category.
    Nerve(NerveArgs),
    /// Values of a classical or quantum summing functor on every subset.
    Summing {
        #[arg(long)]
        input: String,
    },
    /// Stratification of a geometric realization.
    Strata(StrataArgs),
    /// Feasibility locus for gapped two-level data.
    GapLocus {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Whether a channel maps one Gibbs state to another.
    GapCheck {
        #[arg(long)]
        input: String,
    },
    /// Seeded axiom checks for an information loss functional.
    AxiomSuite {
        #[arg(long, value_enum, default_value_t = LossChoice::Shannon)]
        loss: LossChoice,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        instances: usize,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Write cell-complex or descriptor data to a file.
    Export {
        #[command(subcommand)]
        what: ExportWhat,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExportWhat {
    Nerve {
        #[command(flatten)]
        nerve: NerveArgs,
        #[arg(long)]
        out: PathBuf,
    },
    Strata {
        #[command(flatten)]
        strata: StrataArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct NerveArgs {
    /// Category JSON file or inline JSON.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub category: Option<String>,
    /// `terminal`, `discrete:N`, `cyclic:N` or `pointed:N` (N ≤ 3).
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub nmax: usize,
    #[arg(long, default_value_t = DEFAULT_EXPLOSION_BOUND)]
    pub bound: u64,
}

#[derive(Debug, Clone, Args)]
pub struct StrataArgs {
    #[arg(long, value_enum)]
    pub kind: StrataKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Optional parameter point to classify, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LossChoice {
    Shannon,
    SquaredEntropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrataKind {
    Classical,
    Quantum,
    Gapped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments (including the program name) and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    execute(&cli.command)
}

pub fn execute(command: &Command) -> Outcome {
    let name = command_name(command);
    let result = dispatch(command);
    let code = result.as_ref().map_or_else(Failure::exit_code, |_| 0);
    let stdout = report::render(&report::envelope(name, result.as_ref()));
    Outcome { code, stdout, stderr: String::new() }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Loss { .. } => "loss",
        Command::Coproduct { .. } => "coproduct",
        Command::Nerve(_) => "nerve",
        Command::Summing { .. } => "summing",
        Command::Strata(_) => "strata",
        Command::GapLocus { .. } => "gap-locus",
        Command::GapCheck { .. } => "gap-check",
        Command::AxiomSuite { .. } => "axiom-suite",
        Command::Export { .. } => "export",
    }
}

fn dispatch(command: &Command) -> Result<Value, Failure> {
    match command {
        Command::Validate { input } => validate(&read_input(input)?),
        Command::Loss { pipeline, loss, scale } => loss_pipeline(parse_input(pipeline)?, *loss, *scale),
        Command::Coproduct { input } => coproduct(parse_input(input)?),
        Command::Nerve(args) => Ok(nerve_report(&nerve_complex(args)?, args)),
        Command::Summing { input } => summing_report(parse_input(input)?),
        Command::Strata(args) => strata_report(args),
        Command::GapLocus { beta, delta } => {
            let locus = gapped::gap_locus(*beta, *delta).map_err(|e| Failure::domain("gapped", e))?;
            Ok(locus_value(&locus))
        }
        Command::GapCheck { input } => gap_check(parse_input(input)?),
        Command::AxiomSuite { loss, seed, instances, tolerance, scale } => {
            axiom_suite(*loss, *scale, SuiteConfig { seed: *seed, instances: *instances, tolerance: *tolerance, ..SuiteConfig::default() })
        }
        Command::Export { what } => export(what),
    }
}

/// Reads a file, or takes the argument itself when it starts with `{`.
pub fn read_input(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg)
        .map_err(|e| Failure::usage("IoError", format!("cannot read {arg}: {e}"), json!({ "path": arg })))
}

pub fn parse_text<T: DeserializeOwned>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| {
        Failure::usage("ParseError", e.to_string(), json!({ "line": e.line(), "column": e.column() }))
    })
}

pub fn parse_input<T: DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    parse_text(&read_input(arg)?)
}

fn fp_value(p: &FiniteProbability) -> Value {
    json!({
        "labels": p.labels(),
        "probs": report::rats(p.probs()),
    })
}

fn loss_functional(choice: LossChoice, scale: f64) -> LossFunctional {
    match choice {
        LossChoice::Shannon => LossFunctional::shannon(scale),
        LossChoice::SquaredEntropy => LossFunctional::squared_entropy(),
    }
}

fn validate(text: &str) -> Result<Value, Failure> {
    let fp = |e| Failure::domain("finprob", e);
    let q = |e| Failure::domain("quantum", e);
    let tag: schema::KindTag = parse_text(text)?;
    Ok(match tag.kind.as_str() {
        "finite-probability" => {
            let v: schema::FpKind = parse_text(text)?;
            let p = schema::FpInput { labels: v.labels, probs: v.probs }.build().map_err(fp)?;
            json!({
                "kind": tag.kind,
                "value": fp_value(&p),
                "support": p.support(),
                "entropy": real(infoloss::shannon(&p)),
            })
        }
        "morphism" => {
            let v: schema::MorphismKind = parse_text(text)?;
            let s = schema::MorphismInput { source: v.source, target: v.target, matrix: v.matrix }.build().map_err(fp)?;
            json!({
                "kind": tag.kind,
                "shape": [s.target().len(), s.source().len()],
                "isomorphism": s.is_isomorphism(),
                "shannon_loss": real(infoloss::loss_fp(&s, 1.0)),
            })
        }
        "density" => {
            let v: schema::DensityKind = parse_text(text)?;
            let d = quantum::validate_density(&schema::cmatrix(&v.matrix).map_err(q)?).map_err(q)?;
            json!({
                "kind": tag.kind,
                "dim": d.dim(),
                "eigenvalues": reals(d.eigenvalues()),
                "pure": d.is_pure(),
                "hermitization": real(d.hermitization()),
            })
        }
        "channel" => {
            let v: schema::ChannelKind = parse_text(text)?;
            let map = schema::ChannelInput { dims: v.dims, choi: v.choi, kraus: v.kraus }.build().map_err(q)?;
            let ch = QuantumChannel::new(map).map_err(q)?;
            let (din, dout) = ch.map().dims();
            json!({
                "kind": tag.kind,
                "dims": [din, dout],
                "min_choi_eigenvalue": real(ch.map().min_choi_eigenvalue()),
                "tp_defect": real(ch.map().tp_defect()),
                "kraus_rank": ch.kraus_from_choi().len(),
            })
        }
        "hamiltonian" => {
            let v: schema::HamiltonianKind = parse_text(text)?;
            let h = gapped::validate_gapped(&schema::cmatrix(&v.matrix).map_err(q)?, v.delta)
                .map_err(|e| Failure::domain("gapped", e))?;
            json!({
                "kind": tag.kind,
                "delta": real(h.delta()),
                "spectrum": reals(h.spectrum()),
                "ground_degeneracy": h.ground_degeneracy(),
            })
        }
        "category" => {
            let v: schema::CategoryKind = parse_text(text)?;
            let c = schema::CategoryInput::from(v).build().map_err(|e| Failure::domain("fincat", e))?;
            let isos = (0..c.morphisms().len()).filter(|&f| c.is_iso(f)).count();
            json!({
                "kind": tag.kind,
                "objects": c.objects().len(),
                "morphisms": c.morphisms().len(),
                "isomorphisms": isos,
                "zero": c.zero_object(),
                "sums": c.sums().len(),
            })
        }
        other => {
            return Err(Failure::usage(
                "UnknownKind",
                format!("unknown kind `{other}`"),
                json!({ "expected": schema::KINDS }),
            ))
        }
    })
}

fn loss_pipeline(input: schema::PipelineInput, choice: LossChoice, scale: f64) -> Result<Value, Failure> {
    let steps = input.build().map_err(|e| Failure::domain("finprob", e))?;
    let loss = loss_functional(choice, scale);
    let il = |e| Failure::domain("infoloss", e);
    let mut per_step = Vec::with_capacity(steps.len());
    let mut total = 0.0;
    for (k, s) in steps.iter().enumerate() {
        let v = loss.eval(s).map_err(il)?;
        total += v;
        per_step.push(json!({ "index": k, "loss": real(v), "shape": [s.target().len(), s.source().len()] }));
    }
    let composite = match steps.split_first() {
        None => None,
        Some((first, rest)) => {
            let mut acc = first.clone();
            for s in rest {
                acc = finprob::compose(s, &acc).map_err(|e| Failure::domain("finprob", e))?;
            }
            Some(loss.eval(&acc).map_err(il)?)
        }
    };
    Ok(json!({
        "loss": match choice { LossChoice::Shannon => "shannon", LossChoice::SquaredEntropy => "squared-entropy" },
        "scale": real(scale),
        "steps": per_step,
        "total": real(total),
        "composite": composite.map(real),
        "additivity_residual": composite.map(|c| real((c - total).abs())),
    }))
}

fn coproduct(input: schema::CoproductInput) -> Result<Value, Failure> {
    let fp = |e| Failure::domain("finprob", e);
    let s = input.left.build().map_err(fp)?;
    let s2 = input.right.build().map_err(fp)?;
    let d = finprob::coproduct_morphisms(&s, &s2).map_err(fp)?;
    let zero_rows = s.target().probs().iter().filter(|p| *p == &stochgamma_core::rational::zero()).count();
    let left_ok = d.copair.compose_after(&d.left).map(|m| m == s).unwrap_or(false);
    let right_ok = d.copair.compose_after(&d.right).map(|m| m == s2).unwrap_or(false);
    Ok(json!({
        "object": fp_value(&d.object),
        "left": report::rat_matrix(d.left.matrix()),
        "right": report::rat_matrix(d.right.matrix()),
        "copair": report::rat_matrix(d.copair.matrix()),
        "copair_stochastic": d.copair.is_stochastic(),
        "copair_transports_measure": d.copair.transports_measure(),
        "zero_branch_rows": zero_rows,
        "triangles_commute": left_ok && right_ok,
    }))
}

fn nerve_category(args: &NerveArgs) -> Result<FiniteCategory, Failure> {
    match (&args.category, &args.builtin) {
        (Some(path), _) => {
            let c: schema::CategoryInput = parse_input(path)?;
            c.build().map_err(|e| Failure::domain("fincat", e))
        }
        (None, Some(name)) => schema::builtin_category(name)
            .ok_or_else(|| Failure::usage("UnknownBuiltin", format!("unknown built-in category `{name}`"), json!(name))),
        (None, None) => Err(Failure::usage("MissingCategory", "give --category or --builtin", Value::Null)),
    }
}

fn nerve_complex(args: &NerveArgs) -> Result<TruncatedCubicalSet, Failure> {
    let c = nerve_category(args)?;
    schema::nerve_of(&c, args.nmax, args.bound).map_err(|e| Failure::domain("cubical", e))
}

fn nerve_report(k: &TruncatedCubicalSet, args: &NerveArgs) -> Value {
    json!({
        "nmax": args.nmax,
        "bound": args.bound,
        "sizes": k.sizes(),
        "nondegenerate": k.nondegenerate_count(),
        "reduced_euler": k.reduced_euler(),
        "euler_stable": k.euler_is_stable(),
    })
}

fn subset_of(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect()
}

fn summing_report(input: schema::SummingInput) -> Result<Value, Failure> {
    let sm = |e| Failure::domain("summing", e);
    let q = |e| Failure::domain("quantum", e);
    match (input.lambda, input.alpha, input.theta) {
        (Some(lambda), None, None) => {
            let n = lambda.len();
            let base = PointedSet::new(n + 1, 0).map_err(|e| Failure::domain("pointed", e))?;
            let phi = ClassicalSummingFunctor::new(base, schema::rats(lambda)).map_err(sm)?;
            let mut values = Vec::with_capacity(1 << n);
            for mask in 0..(1u32 << n) {
                let v = phi.evaluate(mask).map_err(sm)?;
                let terms: Vec<Value> = v
                    .terms()
                    .iter()
                    .map(|(w, x)| json!({ "weight": report::rat(w), "size": x.size(), "base": x.base() }))
                    .collect();
                values.push(json!({ "subset": subset_of(mask, n), "terms": terms }));
            }
            let check = summing::verify_summing(&phi.table());
            let failures: Vec<Value> =
                check.failures.iter().map(|f| json!({ "a": f.a, "b": f.b, "reason": f.reason })).collect();
            Ok(json!({
                "kind": "classical",
                "points": n,
                "values": values,
                "summing_law": { "pass": check.pass(), "pairs_checked": check.pairs_checked, "zero_ok": check.zero_ok, "failures": failures },
                // Undefined when some λ vanishes.
                "ainex": match summing::ainex_holds(&phi) {
                    Ok(b) => Some(b),
                    Err(summing::SummingError::ZeroLambda) => None,
                    Err(e) => return Err(sm(e)),
                },
            }))
        }
        (None, Some(alpha), Some(theta)) => {
            let f = QuantumSummingFunctor::new(schema::rats(alpha), theta.iter().map(schema::ExactCNum::value).collect())
                .map_err(q)?;
            let n = f.points();
            let classical = f.classical();
            let mut values = Vec::with_capacity(1 << n);
            let mut diagonal_ok = true;
            for mask in 0..(1u32 << n) {
                let obj = f.evaluate(mask).map_err(q)?;
                let diag = f.diagonal(mask).map_err(q)?;
                diagonal_ok &= diag == classical.evaluate(mask).map_err(sm)?.weights();
                values.push(json!({
                    "subset": subset_of(mask, n),
                    "dim": obj.rho.dim(),
                    "diagonal": report::rats(&diag),
                    "eigenvalues": reals(obj.rho.eigenvalues()),
                    "pure": obj.rho.is_pure(),
                }));
            }
            Ok(json!({ "kind": "quantum", "points": n, "values": values, "diagonal_matches_classical": diagonal_ok }))
        }
        _ => Err(Failure::usage("BadSummingInput", "give either `lambda`, or both `alpha` and `theta`", Value::Null)),
    }
}

fn descriptor(args: &StrataArgs) -> Result<RealizationDescriptor, Failure> {
    if args.n == 0 {
        return Err(Failure::usage("BadDimension", "--n must be at least 1", json!(args.n)));
    }
    match args.kind {
        StrataKind::Classical => {
            Ok(summing::classical_realization_descriptor(PointedSet::new(args.n + 1, 0).expect("non-empty")))
        }
        StrataKind::Quantum => Ok(quantum::quantum_strata_descriptor(args.n)),
        StrataKind::Gapped => {
            let (Some(beta), Some(delta)) = (args.beta, args.delta) else {
                return Err(Failure::usage("MissingParameter", "gapped strata need --beta and --delta", Value::Null));
            };
            let locus = gapped::gap_locus(beta, delta).map_err(|e| Failure::domain("gapped", e))?;
            gapped::gapped_realization_descriptor(args.n, &locus).map_err(|e| Failure::domain("gapped", e))
        }
    }
}

fn descriptor_value(d: &RealizationDescriptor) -> Value {
    let params = match d.params {
        RealizationParams::ClassicalCube => json!({ "range": [0.0, 1.0] }),
        RealizationParams::QuantumAnnulus => json!({ "range": [0.0, 1.0], "theta": "|θ|² ≤ α(1-α)" }),
        RealizationParams::GappedTorus { beta, delta, t, c, a, b } => json!({
            "beta": real(beta), "delta": real(delta), "t": real(t), "c": real(c), "range": [real(a), real(b)],
            "theta": "|θ|² = α(1-α) - c",
        }),
    };
    let strata: Vec<Value> = d
        .strata
        .iter()
        .map(|s| json!({ "j": s.j, "stabilizer": s.stabilizer, "base_set": s.base_set }))
        .collect();
    json!({ "kind": d.kind.name(), "n": d.n, "params": params, "strata": strata })
}

fn strata_report(args: &StrataArgs) -> Result<Value, Failure> {
    let d = descriptor(args)?;
    let mut v = descriptor_value(&d);
    if !args.alpha.is_empty() {
        let radii: Vec<Value> = args.alpha.iter().map(|&a| real(d.radius_sq(a))).collect();
        let regions: Vec<Value> = args
            .alpha
            .iter()
            .map(|&a| match quantum::theta_region(a) {
                quantum::Region::Disk { .. } => Value::from("disk"),
                quantum::Region::Annulus { .. } => Value::from("annulus"),
            })
            .collect();
        v["query"] = json!({
            "alpha": reals(&args.alpha),
            "stratum": d.stratum_of(&args.alpha),
            "radius_sq": radii,
            "region": regions,
        });
    }
    Ok(v)
}

fn locus_value(l: &GapLocus) -> Value {
    json!({
        "beta": real(l.beta),
        "delta": real(l.delta),
        "t": real(l.t),
        "c": real(l.c),
        "feasible": l.feasible,
        "interval": l.interval.map(|(a, b)| vec![real(a), real(b)]),
        "radius_sq_at_half": l.feasible.then(|| real(l.radius_sq(0.5))),
        "threshold_t": real(gapped::threshold_t()),
        "threshold_beta_delta": real(gapped::threshold_beta_delta()),
    })
}

fn gap_check(input: schema::GapCheckInput) -> Result<Value, Failure> {
    let q = |e| Failure::domain("quantum", e);
    let g = |e| Failure::domain("gapped", e);
    let ch = QuantumChannel::new(input.channel.build().map_err(q)?).map_err(q)?;
    let h = gapped::validate_gapped(&schema::cmatrix(&input.h).map_err(q)?, input.delta).map_err(g)?;
    let h2 = gapped::validate_gapped(&schema::cmatrix(&input.h_prime).map_err(q)?, input.delta).map_err(g)?;
    let verdict = gapped::is_gap_preserving(&ch, &h, &h2, input.beta).map_err(g)?;
    let image = ch.apply(gapped::gibbs(&h, input.beta).map_err(g)?.matrix()).map_err(q)?;
    let target = gapped::gibbs(&h2, input.beta).map_err(g)?;
    let deviation = stochgamma_core::linalg::max_abs(&(image - target.matrix()));
    Ok(json!({
        "gap_preserving": verdict,
        "deviation": real(deviation),
        "beta": real(input.beta),
        "delta": real(input.delta),
        "spectrum_h": reals(h.spectrum()),
        "spectrum_h_prime": reals(h2.spectrum()),
    }))
}

fn axiom_suite(choice: LossChoice, scale: f64, config: SuiteConfig) -> Result<Value, Failure> {
    let loss = loss_functional(choice, scale);
    let reports = infoloss::axiom_suite(&loss, &config).map_err(|e| Failure::domain("infoloss", e))?;
    let axioms: Vec<Value> = reports
        .iter()
        .map(|r| json!({ "axiom": r.axiom, "max_residual": real(r.max_residual), "instances": r.instances, "pass": r.pass }))
        .collect();
    Ok(json!({
        "seed": config.seed,
        "instances": config.instances,
        "tolerance": real(config.tolerance),
        "all_pass": reports.iter().all(|r| r.pass),
        "axioms": axioms,
    }))
}

fn complex_value(k: &TruncatedCubicalSet) -> Value {
    let raw = k.raw();
    json!({
        "sizes": raw.sizes,
        "base": raw.base,
        "faces": raw.faces,
        "degeneracies": raw.degens,
        "connections": raw.conns,
        "degenerate": k.degenerate_flags(),
    })
}

fn export(what: &ExportWhat) -> Result<Value, Failure> {
    let (doc, out) = match what {
        ExportWhat::Nerve { nerve, out } => {
            let k = nerve_complex(nerve)?;
            let mut doc = nerve_report(&k, nerve);
            doc["complex"] = complex_value(&k);
            (doc, out)
        }
        ExportWhat::Strata { strata, out } => (descriptor_value(&descriptor(strata)?), out),
    };
    let text = report::render(&report::envelope("export", Ok(&doc)));
    std::fs::write(out, &text)
        .map_err(|e| Failure::usage("IoError", format!("cannot write {}: {e}", out.display()), json!(out)))?;
    Ok(json!({ "written": out, "bytes": text.len() }))
}

/// The standard examples used by `export` consumers and the tests.
pub fn reference_categories() -> Vec<(&'static str, FiniteCategory)> {
    vec![
        ("terminal", FiniteCategory::terminal()),
        ("discrete:2", FiniteCategory::discrete(2)),
        ("cyclic:2", FiniteCategory::cyclic_group(2)),
    ]
}

/// Nerves of the reference categories and their pairwise smashes.
pub fn reference_complexes(nmax: usize) -> Vec<(String, TruncatedCubicalSet)> {
    let base: Vec<(String, TruncatedCubicalSet)> = reference_categories()
        .into_iter()
        .map(|(n, c)| (n.to_string(), cubical::cubical_nerve(&c, nmax, DEFAULT_EXPLOSION_BOUND).expect("small").complex))
        .collect();
    let mut out = base.clone();
    for (a, ka) in &base {
        for (b, kb) in &base {
            out.push((format!("{a} ∧ {b}"), cubical::smash_cubical(ka, kb)));
        }
    }
    out
}
