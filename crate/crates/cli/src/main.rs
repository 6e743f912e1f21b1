//! `brieskorn`: invariants of plane-curve singularities, their suspensions and
//! truncated (a,b)-modules, reported as deterministic JSON or plain text.
//!
//! Exit codes: 0 success, 1 invalid input, 2 inconclusive at the configured
//! caps.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use brieskorn_core::ab_module::{
    check_commutation, is_simple_pole, lemma22_identity, regularity_index, tensor, ABModule, ABModuleRecord,
};
use brieskorn_core::curve::{invariants, FactoredCurve, InvariantReport};
use brieskorn_core::rational::{fmt_q, parse_q};
use brieskorn_core::suspension::{milnor_isolated, suspend, verify_suspension_direct, DirectCheck, SuspensionReport};
use brieskorn_core::{Caps, Error, Poly, Vars, Q};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "brieskorn", version, about = "Exact invariants of plane-curve singularities and (a,b)-modules")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Jet order cap M (results are compared at M and M + 2).
    #[arg(long, global = true, env = "BRIESKORN_JET_ORDER", default_value_t = 24)]
    jet_order: usize,
    /// Consecutive empty graded pieces that end a graded scan
    /// (default: largest multiplicity + 2).
    #[arg(long, global = true, env = "BRIESKORN_WINDOW")]
    window: Option<usize>,
    /// Truncation order N of (a,b)-module models.
    #[arg(long, global = true, env = "BRIESKORN_TRUNC_ORDER", default_value_t = 16)]
    trunc_order: usize,
    #[arg(long, global = true, value_enum, env = "BRIESKORN_FORMAT", default_value_t = Format::Json)]
    format: Format,
    /// Include wall-clock timing in the envelope (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// μ, ν, rank, quotient basis and a-action of a factored plane curve.
    Invariants(CurveArgs),
    /// Invariants of f(z) + g(x, y) for an isolated germ f and a curve g.
    Suspend {
        /// The isolated germ f.
        #[arg(long)]
        isolated: String,
        /// Variables of f (default: the identifiers of f in sorted order).
        #[arg(long)]
        isolated_vars: Option<String>,
        /// Weights of f, enabling the a-action and the tensor model.
        #[arg(long)]
        isolated_weights: Option<String>,
        #[command(flatten)]
        curve: CurveArgs,
        /// Recompute μ(F) directly in the joined ring.
        #[arg(long)]
        verify_direct: bool,
    },
    /// Truncated (a,b)-module utilities.
    Abmod {
        #[command(subcommand)]
        command: AbCommand,
    },
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// Branches and multiplicities, e.g. "x:3" or "x:2,y:2".
    #[arg(long)]
    factors: String,
    /// Residual factor ψ (default 1).
    #[arg(long, default_value = "1")]
    residual: String,
    #[arg(long, default_value = "x,y")]
    vars: String,
    /// Weight certificate, e.g. "1,1" or "3/2,1".
    #[arg(long)]
    weights: Option<String>,
    /// The unfactored polynomial; must equal the expanded factored form.
    #[arg(long)]
    poly: Option<String>,
}

#[derive(Subcommand, Debug)]
enum AbCommand {
    /// Checks N!·b^{2N} = Σ (−1)^j C(N,j) b^j a^N b^{N−j}.
    Lemma22 {
        #[arg(long)]
        n: u32,
    },
    /// Tensor product of two module files.
    Tensor {
        left: PathBuf,
        right: PathBuf,
        /// Output file (default: standard output).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Commutation, simple-pole and regularity flags of a module file.
    Check { path: PathBuf },
}

/// Structured output of every command.
#[derive(Serialize)]
struct ReportEnvelope {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    input: Value,
    report: Value,
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
}

struct Outcome {
    command: &'static str,
    input: Value,
    report: Value,
    text: String,
    warnings: Vec<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    match run(&cli) {
        Ok(out) => {
            let timing_ms = cli.config.timing.then(|| start.elapsed().as_millis());
            match cli.config.format {
                Format::Json => {
                    let env = ReportEnvelope {
                        tool: "brieskorn",
                        version: env!("CARGO_PKG_VERSION"),
                        command: out.command,
                        input: out.input,
                        report: out.report,
                        warnings: out.warnings,
                        timing_ms,
                    };
                    emit(&format!("{}\n", serde_json::to_string_pretty(&env).expect("serializable")));
                }
                Format::Text => {
                    let mut body = out.text;
                    for w in &out.warnings {
                        body.push_str(&format!("warning: {w}\n"));
                    }
                    if let Some(t) = timing_ms {
                        body.push_str(&format!("time: {t} ms\n"));
                    }
                    emit(&body);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_inconclusive() { 2 } else { 1 })
        }
    }
}

/// Writes to standard output; a closed pipe (e.g. `| head`) is not an error.
fn emit(body: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(body.as_bytes()).and_then(|()| out.flush());
}

fn caps(cfg: &RunConfig) -> Result<Caps, Error> {
    let caps = Caps {
        jet_order: cfg.jet_order,
        window: cfg.window,
        trunc_order: cfg.trunc_order,
    };
    caps.validate()?;
    Ok(caps)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let caps = caps(&cli.config)?;
    match &cli.command {
        Command::Invariants(args) => cmd_invariants(args, &caps),
        Command::Suspend {
            isolated,
            isolated_vars,
            isolated_weights,
            curve,
            verify_direct,
        } => cmd_suspend(
            isolated,
            isolated_vars.as_deref(),
            isolated_weights.as_deref(),
            curve,
            *verify_direct,
            &caps,
        ),
        Command::Abmod { command } => cmd_abmod(command, &caps),
    }
}

fn parse_weights(src: &str) -> Result<Vec<Q>, Error> {
    src.split(',').map(|s| parse_q(s.trim())).collect()
}

/// `"u1:p1,u2:p2"`.
fn parse_factors(src: &str, vars: &Vars) -> Result<Vec<(Poly, u32)>, Error> {
    if src.trim().is_empty() {
        return Ok(Vec::new());
    }
    src.split(',')
        .map(|item| {
            let (u, p) = item
                .rsplit_once(':')
                .ok_or_else(|| Error::invalid(format!("factor `{item}` must look like `u:p`")))?;
            let p: u32 = p
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad multiplicity in `{item}`")))?;
            Ok((Poly::parse(u.trim(), vars)?, p))
        })
        .collect()
}

/// Identifiers of an expression, sorted.
fn infer_vars(src: &str) -> Result<Vars, Error> {
    let mut names: Vec<String> = Vec::new();
    let mut cur = String::new();
    for ch in src.chars().chain(std::iter::once(' ')) {
        if ch.is_ascii_alphanumeric() || ch == '_' {
            if cur.is_empty() && ch.is_ascii_digit() {
                continue;
            }
            cur.push(ch);
        } else if !cur.is_empty() {
            if !names.contains(&cur) {
                names.push(cur.clone());
            }
            cur.clear();
        }
    }
    names.sort();
    if names.is_empty() {
        return Err(Error::invalid(format!("no variables in `{src}`")));
    }
    Vars::new(&names)
}

struct ParsedCurve {
    curve: FactoredCurve,
    weights: Option<Vec<Q>>,
}

fn parse_curve(args: &CurveArgs) -> Result<ParsedCurve, Error> {
    let vars = Vars::parse(&args.vars)?;
    let factors = parse_factors(&args.factors, &vars)?;
    let residual = Poly::parse(&args.residual, &vars)?;
    let curve = FactoredCurve::new(factors, residual)?;
    if let Some(p) = &args.poly {
        curve.ensure_expands_to(&Poly::parse(p, &vars)?)?;
    }
    let weights = args.weights.as_deref().map(parse_weights).transpose()?;
    Ok(ParsedCurve { curve, weights })
}

fn curve_echo(p: &ParsedCurve) -> Value {
    json!({
        "vars": p.curve.vars().names(),
        "factors": p.curve.factors().iter().map(|(u, m)| json!({"branch": u.to_string(), "multiplicity": m})).collect::<Vec<_>>(),
        "residual": p.curve.residual().to_string(),
        "expanded": p.curve.expand().to_string(),
        "weights": p.weights.as_ref().map(|w| w.iter().map(fmt_q).collect::<Vec<_>>()),
    })
}

fn heuristic_warnings(r: &InvariantReport) -> Vec<String> {
    if r.assumptions.heuristic_jets.is_empty() {
        Vec::new()
    } else {
        vec![format!(
            "heuristic: results accepted by jet stabilization at orders {:?}, not certified by weights",
            r.assumptions.heuristic_jets
        )]
    }
}

fn invariants_text(r: &InvariantReport) -> String {
    let mut s = format!("mu = {}\nnu = {}\nrank = {}\n", r.mu, r.nu, r.rank);
    s += &format!("saturated jacobian = ({})\n", r.saturated_jacobian.join(", "));
    s += &format!("basis = {{{}}}\n", r.basis.join(", "));
    if let Some(a) = &r.a_action {
        for e in a {
            s += &format!("a[{}] = {} b[{}]\n", e.element, fmt_q(&e.coefficient), e.element);
        }
    }
    s
}

fn cmd_invariants(args: &CurveArgs, caps: &Caps) -> Result<Outcome, Error> {
    let parsed = parse_curve(args)?;
    let report = invariants(&parsed.curve, parsed.weights.as_deref(), caps)?;
    Ok(Outcome {
        command: "invariants",
        input: curve_echo(&parsed),
        text: invariants_text(&report),
        warnings: heuristic_warnings(&report),
        report: serde_json::to_value(&report).expect("serializable"),
    })
}

fn cmd_suspend(
    isolated: &str,
    isolated_vars: Option<&str>,
    isolated_weights: Option<&str>,
    curve: &CurveArgs,
    verify_direct: bool,
    caps: &Caps,
) -> Result<Outcome, Error> {
    let fvars = match isolated_vars {
        Some(v) => Vars::parse(v)?,
        None => infer_vars(isolated)?,
    };
    let f = Poly::parse(isolated, &fvars)?;
    let fw = isolated_weights.map(parse_weights).transpose()?;
    let germ = milnor_isolated(&f, fw.as_deref(), caps)?;
    let parsed = parse_curve(curve)?;
    let g = invariants(&parsed.curve, parsed.weights.as_deref(), caps)?;
    let report: SuspensionReport = suspend(&germ, &g, caps.trunc_order)?;
    let mut warnings = heuristic_warnings(&g);
    let direct: Option<DirectCheck> = if verify_direct {
        let d = verify_suspension_direct(&germ, &parsed.curve, parsed.weights.as_deref(), report.mu, caps)?;
        if !d.exact {
            warnings.push(format!(
                "heuristic: direct mu(F) accepted by jet stabilization at orders {:?}",
                d.orders
            ));
        }
        if !d.agrees {
            return Err(Error::Invariant(format!(
                "direct mu(F) = {} disagrees with transported {}",
                d.mu_direct, d.mu_transported
            )));
        }
        Some(d)
    } else {
        None
    };
    let mut text = format!(
        "milnor(f) = {}\nmu = {}\nnu = {}\nrank = {}\n",
        report.milnor_f, report.mu, report.nu, report.rank
    );
    if let Some(d) = &direct {
        text += &format!("direct mu(F) = {} (agrees)\n", d.mu_direct);
    }
    let input = json!({
        "isolated": f.to_string(),
        "isolated_vars": fvars.names(),
        "isolated_weights": fw.as_ref().map(|w| w.iter().map(fmt_q).collect::<Vec<_>>()),
        "curve": curve_echo(&parsed),
    });
    let mut value = serde_json::to_value(&report).expect("serializable");
    if let Some(d) = direct {
        value["direct_check"] = serde_json::to_value(d).expect("serializable");
    }
    Ok(Outcome {
        command: "suspend",
        input,
        report: value,
        text,
        warnings,
    })
}

fn read_module(path: &PathBuf) -> Result<ABModule, Error> {
    let src = fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    let rec: ABModuleRecord = serde_json::from_str(&src)
        .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    ABModule::from_record(&rec)
}

fn cmd_abmod(cmd: &AbCommand, caps: &Caps) -> Result<Outcome, Error> {
    match cmd {
        AbCommand::Lemma22 { n } => {
            if *n == 0 {
                return Err(Error::invalid("N must be at least 1"));
            }
            let holds = lemma22_identity(*n);
            if !holds {
                return Err(Error::Invariant(format!("operator identity fails for N = {n}")));
            }
            Ok(Outcome {
                command: "abmod lemma22",
                input: json!({ "n": n }),
                report: json!({ "holds": holds }),
                text: "OK\n".into(),
                warnings: Vec::new(),
            })
        }
        AbCommand::Tensor { left, right, output } => {
            let (e, f) = (read_module(left)?, read_module(right)?);
            let t = tensor(&e, &f)?;
            let rec = serde_json::to_value(t.to_record()).expect("serializable");
            let text = match output {
                Some(path) => {
                    let body = serde_json::to_string_pretty(&rec).expect("serializable");
                    fs::write(path, body + "\n")
                        .map_err(|err| Error::invalid(format!("cannot write {}: {err}", path.display())))?;
                    format!("wrote rank {} module to {}\n", t.rank(), path.display())
                }
                None => format!("rank = {}\n{}\n", t.rank(), t),
            };
            Ok(Outcome {
                command: "abmod tensor",
                input: json!({ "left": left, "right": right }),
                report: json!({ "rank": t.rank(), "module": rec }),
                text,
                warnings: Vec::new(),
            })
        }
        AbCommand::Check { path } => {
            let e = read_module(path)?;
            let comm = check_commutation(&e);
            let simple = is_simple_pole(&e);
            let max_k = e.trunc_order().saturating_sub(2).min(4);
            let (index, mut warnings) = match regularity_index(&e, max_k) {
                Ok(k) => (k, Vec::new()),
                Err(err) if err.is_inconclusive() => (None, vec![format!("regularity undecided: {err}")]),
                Err(err) => return Err(err),
            };
            if index.is_none() && warnings.is_empty() {
                warnings.push(format!("not regular with index ≤ {max_k} modulo b^{}", e.trunc_order()));
            }
            let _ = caps;
            Ok(Outcome {
                command: "abmod check",
                input: json!({ "path": path }),
                report: json!({
                    "rank": e.rank(),
                    "trunc_order": e.trunc_order(),
                    "commutation": comm.holds,
                    "simple_pole": simple,
                    "regular": index.is_some(),
                    "regularity_index": index,
                    "window": comm.window,
                }),
                text: format!(
                    "commutation = {}\nsimple_pole = {}\nregular = {}\n",
                    comm.holds,
                    simple,
                    index.is_some()
                ),
                warnings,
            })
        }
    }
}
