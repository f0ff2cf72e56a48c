//! Command-line front end. Every command writes one JSON report to stdout (or
//! `--out`) and a short summary to stderr.
//!
//! Exit codes: 0 pass/accept, 1 fail/reject, 2 usage or parse error,
//! 3 budget or resource error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::certify::{certify_free_product, certify_main_theorem, CertifyOptions};
use crate::channels::{
    self, complementary_output, l2_deviation_check, minimize_output_entropy, moe_sweep, tuple_window, DensityState,
    MoeOptions,
};
use crate::combinatorics::{
    ball2_has_involution, girth, is_minimal_generating_set, pair_multiplicity, MINIMALITY_LIMIT,
};
use crate::groups::{format_bigint, parse_bigint, DEFAULT_BUDGET};
use crate::harmonic::{
    ball2_constant, operator_norm, verify_freeprod_inequality, verify_power_inequality, verify_product_inequality,
    AlgebraElement, NormBound, NormOptions, VerifyOptions,
};
use crate::{sampling, Error, GroupSpec, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable that overrides `--budget`.
pub const BUDGET_ENV: &str = "MOELAB_BUDGET";

const GIRTH_CUTOFF: u64 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "moelab",
    version,
    about = "Group-algebra channels, norm inequalities and MOE certificates"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalArgs {
    /// Window radius R.
    #[arg(long, global = true, default_value_t = 3)]
    radius: usize,
    /// Tensor power k.
    #[arg(long, global = true, default_value_t = 1)]
    power: usize,
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long = "precision-bits", global = true, default_value_t = 256)]
    precision_bits: u32,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest basis or enumeration size.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe a group spec and its generating set.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Pair multiplicity, girth, minimality and the B₂ involution test.
    Constants(GroupArg),
    /// Norm bounds for the normalized uniform function on a ball.
    Norm {
        #[command(flatten)]
        group: GroupArg,
        /// Radius of the positive ball carrying the function.
        #[arg(long, default_value_t = 2)]
        ball: usize,
    },
    /// Seeded checks of the Haagerup-type inequalities.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
    /// Channel outputs and their entropies.
    Channel {
        #[command(subcommand)]
        command: ChannelCommand,
    },
    /// Minimize the complementary output entropy over pure states on a window.
    Moe {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Comma-separated radii run in order with warm starts (overrides --radius).
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<usize>,
        #[arg(long = "max-iterations", default_value_t = 2000)]
        max_iterations: usize,
    },
    /// Interval-arithmetic certificates.
    Certify {
        #[command(subcommand)]
        command: CertifyCommand,
    },
}

#[derive(Args, Debug)]
struct GroupArg {
    /// Group spec, e.g. `Z5`, `F2`, `Z3*Z4`, `freepow(Z5,10^84)`.
    #[arg(long = "G")]
    g: String,
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    Info(GroupArg),
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// `‖λ(φ)‖ ≤ pq‖φ‖₂` on `B₂^G × B₂^H`.
    Srd {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long = "H")]
        h: String,
    },
    /// `‖λ(φ)‖ ≤ C(n,m)^{1/2} p^m ‖φ‖₂` on `(B₂^G)ⁿ ∩ 𝒫_m^n`.
    Power {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        n: usize,
        /// Single value of m; all of 0..=n when omitted.
        #[arg(long)]
        m: Option<usize>,
    },
    /// `‖λ(φ)‖ ≤ 5√2 max p_i ‖φ‖₂` on `B₂` of a free product.
    Freeprod {
        /// Comma-separated factor specs.
        #[arg(long)]
        factors: String,
    },
}

#[derive(Subcommand, Debug)]
enum ChannelCommand {
    /// Entropy of `Φ_l^{⊗k}(ρ)`, or of `(Φ_l∘Φ_r)^{⊗k}(ρ)` with `--composed`.
    Entropy {
        #[command(flatten)]
        group: GroupArg,
        /// `delta_e` or `random`.
        #[arg(long, default_value = "delta_e")]
        input: String,
        #[arg(long)]
        composed: bool,
        /// Rank of random inputs.
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
    /// ℓ₂ deviation of `(Φ_l^c)^{⊗k}(ρ)` from `I/N^k` on random states.
    Deviation {
        #[command(flatten)]
        group: GroupArg,
        /// Constant for `B₂`: a number or `sqrt(K)`.
        #[arg(long)]
        q: String,
        /// Pair multiplicity; computed when omitted.
        #[arg(long)]
        multiplicity: Option<u64>,
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CertifyCommand {
    /// Hypothesis of the main theorem: `q·√𝔑 < κ_|S|` and a positive gap.
    Main {
        #[command(flatten)]
        group: GroupArg,
        /// Haagerup constant for `B₂`: a number or `sqrt(K)`. Registered value when omitted.
        #[arg(long)]
        q: Option<String>,
    },
    /// Free-product corollary.
    Freeprod {
        #[arg(long = "M")]
        m: u64,
        /// Comma-separated factor specs.
        #[arg(long)]
        factors: String,
        /// Comma-separated multiplicities, one per factor or a single shared value.
        #[arg(long)]
        copies: String,
    },
}

/// Resolved global options.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub radius: usize,
    pub power: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub precision_bits: u32,
    pub out: Option<PathBuf>,
    pub budget: usize,
}

impl RunConfig {
    fn resolve(args: GlobalArgs) -> std::result::Result<Self, String> {
        let budget = match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| format!("{BUDGET_ENV}={v} is not a nonnegative integer"))?,
            Err(_) => args.budget,
        };
        Ok(RunConfig {
            radius: args.radius,
            power: args.power,
            trials: args.trials,
            seed: args.seed,
            tol: args.tol,
            precision_bits: args.precision_bits,
            out: args.out,
            budget,
        })
    }

    fn norm(&self) -> NormOptions {
        NormOptions {
            radius: self.radius,
            tol: self.tol.min(NormOptions::default().tol),
            budget: self.budget,
            ..NormOptions::default()
        }
    }

    fn verify(&self) -> VerifyOptions {
        VerifyOptions {
            trials: self.trials,
            seed: self.seed,
            norm: self.norm(),
        }
    }
}

/// Report plus the exit status it implies and a one-line summary.
struct Outcome {
    report: Value,
    passed: bool,
    summary: String,
}

impl Outcome {
    fn new(report: impl Serialize, passed: bool, summary: String) -> Result<Self> {
        Ok(Outcome {
            report: serde_json::to_value(report)?,
            passed,
            summary,
        })
    }

    fn info(report: impl Serialize, summary: String) -> Result<Self> {
        Self::new(report, true, summary)
    }
}

/// Runs the CLI on `argv` (program name first) with the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI on `argv`, writing the report to `out` (unless `--out` is
/// given) and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let cfg = match RunConfig::resolve(cli.global) {
        Ok(cfg) => cfg,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let outcome = match dispatch(cli.command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let mut text = match serde_json::to_string_pretty(&outcome.report) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    text.push('\n');
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &text),
        None => out.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return EXIT_BUDGET;
    }
    let _ = writeln!(err, "{}", outcome.summary);
    if outcome.passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } | Error::Io(_) => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn dispatch(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Group {
            command: GroupCommand::Info(g),
        } => group_info(&GroupSpec::parse(&g.g)?, cfg),
        Command::Constants(g) => constants(&GroupSpec::parse(&g.g)?, cfg),
        Command::Norm { group, ball } => norm(&GroupSpec::parse(&group.g)?, ball, cfg),
        Command::Verify { command } => verify(command, cfg),
        Command::Channel { command } => channel(command, cfg),
        Command::Moe {
            group,
            restarts,
            sweep,
            max_iterations,
        } => moe(&GroupSpec::parse(&group.g)?, restarts, &sweep, max_iterations, cfg),
        Command::Certify { command } => certify(command, cfg),
    }
}

/// Splits at commas outside parentheses and brackets.
fn split_top_level(list: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in list.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(list[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(list[start..].trim());
    parts
}

fn parse_factors(list: &str) -> Result<Vec<GroupSpec>> {
    let parts = split_top_level(list);
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Validation(format!("empty factor in `{list}`")));
    }
    parts.into_iter().map(GroupSpec::parse).collect()
}

/// `sqrt(K)` with integer `K`, or a nonnegative decimal.
fn parse_q(s: &str) -> Result<NormBound> {
    let t = s.trim();
    if let Some(inner) = t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let k: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::Validation(format!("`{s}`: expected sqrt(INTEGER)")))?;
        let v = (k as f64).sqrt();
        return Ok(NormBound {
            lower: 0.0,
            upper: v,
            lower_method: "none".into(),
            upper_method: "user".into(),
            exact_upper_squared: Some(k),
        });
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(NormBound {
            lower: 0.0,
            upper: v,
            lower_method: "none".into(),
            upper_method: "user".into(),
            exact_upper_squared: None,
        }),
        _ => Err(Error::Validation(format!(
            "`{s}`: expected a nonnegative number or sqrt(INTEGER)"
        ))),
    }
}

fn group_info(g: &GroupSpec, cfg: &RunConfig) -> Result<Outcome> {
    let mut ball_sizes = Vec::new();
    for m in 0..=cfg.radius {
        match g.ball(m, cfg.budget) {
            Ok(b) => ball_sizes.push(b.len()),
            Err(Error::Budget { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let generators = match g.generators(cfg.budget) {
        Ok(gens) => Some(gens.iter().map(|s| g.format_element(s)).collect::<Vec<_>>()),
        Err(Error::Budget { .. }) => None,
        Err(e) => return Err(e),
    };
    let report = json!({
        "command": "group info",
        "group_spec": g.canonical(),
        "finite": g.is_finite(),
        "order": g.order().map(|n| format_bigint(&n)),
        "generator_count": format_bigint(&g.generator_count()),
        "generators": generators,
        "ball_sizes": ball_sizes,
    });
    let summary = format!("{}: {} generators", g.canonical(), format_bigint(&g.generator_count()));
    Outcome::info(report, summary)
}

/// Runs `f`, turning a budget overrun into a JSON note.
fn or_budget<T: Serialize>(f: impl FnOnce() -> Result<T>) -> Result<Value> {
    match f() {
        Ok(v) => Ok(serde_json::to_value(v)?),
        Err(e @ (Error::Budget { .. } | Error::Unsupported { .. })) => Ok(json!({ "unavailable": e.to_string() })),
        Err(e) => Err(e),
    }
}

fn constants(g: &GroupSpec, cfg: &RunConfig) -> Result<Outcome> {
    let pm = or_budget(|| pair_multiplicity(g, cfg.budget))?;
    let gi = or_budget(|| girth(g, GIRTH_CUTOFF, cfg.budget))?;
    let minimal = or_budget(|| is_minimal_generating_set(g, cfg.budget))?;
    let involution = or_budget(|| ball2_has_involution(g, cfg.budget))?;
    let p = or_budget(|| ball2_constant(g, &cfg.norm()))?;
    let summary = format!("{}: 𝔑 = {}, girth = {}", g.canonical(), pm["value"], gi["value"]);
    let report = json!({
        "command": "constants",
        "group_spec": g.canonical(),
        "pair_multiplicity": pm,
        "girth": gi,
        "girth_cutoff": GIRTH_CUTOFF,
        "minimal_generating_set": minimal,
        "minimality_limit": MINIMALITY_LIMIT,
        "ball2_has_involution": involution,
        "ball2_constant": p,
    });
    Outcome::info(report, summary)
}

fn norm(g: &GroupSpec, ball: usize, cfg: &RunConfig) -> Result<Outcome> {
    let support = g.ball(ball, cfg.budget)?;
    let f = AlgebraElement::indicator(g, &support)?.normalized();
    let opts = cfg.norm();
    let bound = operator_norm(&f, &opts)?;
    let registered = or_budget(|| ball2_constant(g, &opts))?;
    let passed = bound.lower <= bound.upper + cfg.tol;
    let summary = format!(
        "‖λ(f)‖ ∈ [{:.10}, {:.10}] for uniform f on B_{ball}",
        bound.lower, bound.upper
    );
    let report = json!({
        "command": "norm",
        "group_spec": g.canonical(),
        "function": format!("uniform on B_{ball}, normalized"),
        "support_size": support.len(),
        "radius": cfg.radius,
        "bound": bound,
        "ball2_constant": registered,
    });
    Outcome::new(report, passed, summary)
}

fn verify(command: VerifyCommand, cfg: &RunConfig) -> Result<Outcome> {
    let opts = cfg.verify();
    match command {
        VerifyCommand::Srd { group, h } => {
            let g = GroupSpec::parse(&group.g)?;
            let h = GroupSpec::parse(&h)?;
            let e = g.ball(2, cfg.budget)?;
            let f = h.ball(2, cfg.budget)?;
            let p = ball2_constant(&g, &opts.norm)?.upper;
            let q = ball2_constant(&h, &opts.norm)?.upper;
            let r = verify_product_inequality(&g, &h, &e, &f, p, q, &opts)?;
            let summary = verdict_line(r.lemma, r.passed, r.max_ratio, r.bound);
            let passed = r.passed;
            Outcome::new(r, passed, summary)
        }
        VerifyCommand::Power { group, n, m } => {
            let g = GroupSpec::parse(&group.g)?;
            let p = ball2_constant(&g, &opts.norm)?.upper;
            let ms: Vec<usize> = m.map_or_else(|| (0..=n).collect(), |m| vec![m]);
            let reports = ms
                .iter()
                .map(|&m| verify_power_inequality(&g, n, m, p, &opts))
                .collect::<Result<Vec<_>>>()?;
            let passed = reports.iter().all(|r| r.passed);
            let worst = reports.iter().map(|r| r.max_ratio / r.bound).fold(0.0f64, f64::max);
            let summary = format!(
                "cor:SRD {} (n = {n}, worst ratio/bound = {worst:.12})",
                if passed { "PASS" } else { "FAIL" }
            );
            let report = json!({
                "lemma": "cor:SRD",
                "group_spec": g.canonical(),
                "n": n,
                "p": p,
                "reports": reports,
                "passed": passed,
            });
            Outcome::new(report, passed, summary)
        }
        VerifyCommand::Freeprod { factors } => {
            let fs = parse_factors(&factors)?;
            let r = verify_freeprod_inequality(&fs, &opts)?;
            let summary = verdict_line(r.lemma, r.passed, r.max_ratio, r.bound);
            let passed = r.passed;
            Outcome::new(r, passed, summary)
        }
    }
}

fn verdict_line(lemma: &str, passed: bool, max_ratio: f64, bound: f64) -> String {
    format!(
        "{lemma} {}: max ratio {max_ratio:.12} vs bound {bound:.12}",
        if passed { "PASS" } else { "FAIL" }
    )
}

fn channel(command: ChannelCommand, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        ChannelCommand::Entropy {
            group,
            input,
            composed,
            rank,
        } => {
            let g = GroupSpec::parse(&group.g)?;
            let rho = match input.as_str() {
                "delta_e" => DensityState::identity_delta(&g, cfg.power)?,
                "random" => {
                    let basis = tuple_window(&g, cfg.power, cfg.radius, cfg.budget)?;
                    let mut rng = sampling::stream(cfg.seed, 0);
                    DensityState::random(&g, cfg.power, basis, rank, &mut rng)?
                }
                other => {
                    return Err(Error::Validation(format!(
                        "unknown input `{other}`; expected delta_e or random"
                    )))
                }
            };
            let output = if composed {
                channels::compose_left_right(&rho, cfg.budget)?
            } else {
                channels::apply_left(&rho, cfg.budget)?
            };
            let entropy = output.entropy()?;
            let complementary = if composed {
                None
            } else {
                Some(channels::von_neumann_entropy(&complementary_output(&rho, cfg.budget)?)?)
            };
            let channel = if composed { "Φ_l∘Φ_r" } else { "Φ_l" };
            let summary = format!("H({channel}(ρ)) = {entropy:.10} nats");
            let report = json!({
                "command": "channel entropy",
                "group_spec": g.canonical(),
                "channel": channel,
                "input": input,
                "k": cfg.power,
                "seed": cfg.seed,
                "input_dim": rho.dim(),
                "output_dim": output.dim(),
                "output_trace": output.trace(),
                "entropy": entropy,
                "complementary_entropy": complementary,
                "units": "nats",
            });
            Outcome::info(report, summary)
        }
        ChannelCommand::Deviation {
            group,
            q,
            multiplicity,
            rank,
        } => {
            let g = GroupSpec::parse(&group.g)?;
            let q = parse_q(&q)?.upper;
            let mult = match multiplicity {
                Some(m) => m,
                None => pair_multiplicity(&g, cfg.budget)?.value,
            };
            let basis = tuple_window(&g, cfg.power, cfg.radius, cfg.budget)?;
            let mut reports = Vec::with_capacity(cfg.trials);
            for t in 0..cfg.trials {
                let mut rng = sampling::stream(cfg.seed, t as u64);
                let rho = DensityState::random(&g, cfg.power, basis.clone(), rank, &mut rng)?;
                reports.push(l2_deviation_check(&rho, q, mult, cfg.tol, cfg.budget)?);
            }
            let failures = reports.iter().filter(|r| !r.passed).count();
            let worst = reports.iter().map(|r| r.deviation / r.bound).fold(0.0f64, f64::max);
            let passed = failures == 0;
            let summary = format!(
                "ℓ₂ deviation {}: {failures} failures in {} trials, worst deviation/bound = {worst:.6}",
                if passed { "PASS" } else { "FAIL" },
                cfg.trials
            );
            let report = json!({
                "command": "channel deviation",
                "group_spec": g.canonical(),
                "k": cfg.power,
                "q": q,
                "pair_multiplicity": mult,
                "trials": cfg.trials,
                "seed": cfg.seed,
                "window_size": basis.len(),
                "bound": reports.first().map(|r| r.bound),
                "worst_ratio": worst,
                "failures": failures,
                "passed": passed,
            });
            Outcome::new(report, passed, summary)
        }
    }
}

fn moe(g: &GroupSpec, restarts: usize, sweep: &[usize], max_iterations: usize, cfg: &RunConfig) -> Result<Outcome> {
    let opts = MoeOptions {
        restarts,
        seed: cfg.seed,
        tol: cfg.tol,
        max_iterations,
        budget: cfg.budget,
    };
    let results = if sweep.is_empty() {
        vec![minimize_output_entropy(g, cfg.radius, cfg.power, &opts)?]
    } else {
        moe_sweep(g, sweep, cfg.power, &opts)?
    };
    let n = g.generators(cfg.budget)?.len() as f64;
    let ceiling = cfg.power as f64 * n.ln();
    let in_range = results
        .iter()
        .all(|r| r.best_value >= -cfg.tol && r.best_value <= ceiling + cfg.tol);
    let monotone = results.windows(2).all(|w| w[1].best_value <= w[0].best_value + cfg.tol);
    let passed = in_range && monotone;
    let last = results.last().expect("at least one radius");
    let summary = format!(
        "MOE upper bound {:.10} nats at R = {} (k = {}, window {})",
        last.best_value, last.radius, last.k, last.window_size
    );
    let report = json!({
        "command": "moe",
        "group_spec": g.canonical(),
        "units": "nats",
        "ceiling": ceiling,
        "monotone": monotone,
        "results": results,
        "passed": passed,
    });
    Outcome::new(report, passed, summary)
}

fn certify(command: CertifyCommand, cfg: &RunConfig) -> Result<Outcome> {
    let opts = CertifyOptions {
        precision: cfg.precision_bits,
        budget: cfg.budget,
    };
    let cert = match command {
        CertifyCommand::Main { group, q } => {
            let g = GroupSpec::parse(&group.g)?;
            let q = match q {
                Some(q) => parse_q(&q)?,
                None => ball2_constant(&g, &cfg.norm())?,
            };
            certify_main_theorem(&g, &q, &opts)?
        }
        CertifyCommand::Freeprod { m, factors, copies } => {
            let fs = parse_factors(&factors)?;
            let cs = split_top_level(&copies)
                .into_iter()
                .map(parse_bigint)
                .collect::<Result<Vec<BigUint>>>()?;
            let cs = match cs.len() {
                1 => vec![cs[0].clone(); fs.len()],
                n if n == fs.len() => cs,
                n => {
                    return Err(Error::Validation(format!(
                        "{n} multiplicities for {} factors",
                        fs.len()
                    )))
                }
            };
            certify_free_product(m, &fs.into_iter().zip(cs).collect::<Vec<_>>(), &opts)?
        }
    };
    let summary = match (&cert.gap, &cert.failed_check) {
        (Some(gap), None) => format!("{:?}: gap ∈ {gap} nats", cert.verdict),
        (_, Some(check)) => format!("{:?} at check `{check}`", cert.verdict),
        (None, None) => format!("{:?}", cert.verdict),
    };
    let passed = cert.accepted();
    Outcome::new(cert, passed, summary.to_uppercase_first())
}

trait UpperFirst {
    fn to_uppercase_first(self) -> String;
}

impl UpperFirst for String {
    /// `Accept: ...` → `ACCEPT: ...`
    fn to_uppercase_first(self) -> String {
        match self.split_once(|c: char| !c.is_alphabetic()) {
            Some((head, _)) => format!("{}{}", head.to_uppercase(), &self[head.len()..]),
            None => self.to_uppercase(),
        }
    }
}
