//! `synergy`: validate, evaluate, classify, unravel and translate models of
//! synergistic knowledge.
//!
//! Exit status is 0 on success, 1 when a checked property or formula fails,
//! and 2 on usage, input or I/O errors.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use synergy::corpus::{example_names, example_text};
use synergy::io::{kripke_to_json, parse_model, simplicial_to_json, AnyModel, IoError};
use synergy::kripke::{check_frame, quotient, render_witness, Level, PreModel};
use synergy::semantics::{Evaluator, Frame};
use synergy::translate::{delta_translate_with, render_complex, verify_translation, TranslateOptions};
use synergy::unravel::{unravel_model, DEFAULT_DEPTH};
use synergy::verify::axioms::{axiom_scan, ScanLevel, Scheme};
use synergy::{parse_formula, print_formula};

/// Writes to stdout; a closed pipe (`synergy ... | head`) ends the process
/// quietly instead of panicking.
fn emit(args: fmt::Arguments) {
    if let Err(e) = io::stdout().lock().write_fmt(args) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

macro_rules! out {
    ($($t:tt)*) => { emit(format_args!($($t)*)) };
}

macro_rules! outln {
    ($($t:tt)*) => { emit(format_args!("{}\n", format_args!($($t)*))) };
}

#[derive(Parser)]
#[command(name = "synergy", version, about = "Model checking for synergistic knowledge")]
struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    /// Depth for unravelling and for formula suites.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArg {
    /// Model file (simplicial or Kripke JSON).
    #[arg(long, conflicts_with = "example", required_unless_present = "example")]
    model: Option<PathBuf>,
    /// Built-in example instead of a file.
    #[arg(long)]
    example: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Kappa,
    Delta,
    Proper,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Level {
        match l {
            LevelArg::Kappa => Level::Kappa,
            LevelArg::Delta => Level::Delta,
            LevelArg::Proper => Level::Proper,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanLevelArg {
    Simplicial,
    Kappa,
}

#[derive(Subcommand)]
enum Command {
    /// Load a model and report whether it is well formed.
    Validate(ModelArg),
    /// Evaluate a formula.
    Check {
        #[command(flatten)]
        model: ModelArg,
        /// Formula text, e.g. `[ab,c]p -> p`.
        #[arg(long)]
        formula: String,
        /// World to evaluate at; all worlds when absent.
        #[arg(long, conflicts_with = "all_worlds")]
        world: Option<String>,
        /// Require the formula at every world (the default without --world).
        #[arg(long)]
        all_worlds: bool,
    },
    /// Check Kripke frame conditions.
    Props {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, value_enum, default_value = "proper")]
        level: LevelArg,
    },
    /// Translate a proper delta-model into a simplicial model.
    Translate {
        #[command(flatten)]
        model: ModelArg,
        /// Certify the result with a formula suite of this depth.
        #[arg(long)]
        verify: Option<usize>,
        /// World enumeration, comma separated.
        #[arg(long)]
        order: Option<String>,
        /// Write the simplicial model here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the world-to-simplex mapping here.
        #[arg(long)]
        mapping: Option<PathBuf>,
    },
    /// Emit the depth-bounded unravelling of a kappa-model.
    Unravel(ModelArg),
    /// Collapse worlds that agree on their alive patterns.
    Quotient(ModelArg),
    /// Search for counterexamples to axiom schemes on generated models.
    Soundness {
        /// Scheme name, or `all`.
        #[arg(long, default_value = "all")]
        scheme: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, value_enum, default_value = "simplicial")]
        level: ScanLevelArg,
    },
    /// Print a built-in example, or list them.
    Example { name: Option<String> },
}

/// Outcome of a command: whether the checked property held.
type Outcome = anyhow::Result<bool>;

/// Input was fine but is rejected as a model; exit 1 rather than 2.
#[derive(Debug)]
struct Rejected(String);

impl std::fmt::Display for Rejected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Rejected {}

fn read_model(arg: &ModelArg) -> anyhow::Result<AnyModel> {
    let (text, origin) = match (&arg.model, &arg.example) {
        (Some(path), _) => (
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?,
            path.display().to_string(),
        ),
        (None, Some(name)) => (example_text(name)?.to_string(), name.clone()),
        (None, None) => bail!("no model given"),
    };
    parse_model(&text).map_err(|e| match e {
        IoError::Simplicial(_) | IoError::Kripke(_) => anyhow!(Rejected(format!("{origin}: {e}"))),
        other => anyhow!("{origin}: {other}"),
    })
}

fn read_kripke(arg: &ModelArg) -> anyhow::Result<PreModel> {
    match read_model(arg)? {
        AnyModel::Kripke(m) => Ok(m),
        AnyModel::Simplicial(_) => bail!("this command needs a Kripke model"),
    }
}

fn print_json(v: &Value) {
    outln!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn validate(cli: &Cli, arg: &ModelArg) -> Outcome {
    let (kind, worlds) = match read_model(arg)? {
        AnyModel::Simplicial(m) => ("simplicial", m.world_count()),
        AnyModel::Kripke(m) => ("kripke", m.world_count()),
    };
    if cli.json {
        print_json(&json!({"valid": true, "kind": kind, "worlds": worlds}));
    } else {
        outln!("valid {kind} model, {worlds} worlds");
    }
    Ok(true)
}

fn check_on<F: Frame>(cli: &Cli, m: &F, formula: &str, world: Option<&str>) -> Outcome {
    let u = m.universe();
    let f = parse_formula(formula, u).map_err(|e| anyhow!("formula: {e}"))?;
    if f.uses_empty_pattern() {
        eprintln!("note: [] relates every pair of worlds");
    }
    let worlds: Vec<usize> = match world {
        Some(name) => vec![m.world_index(name).ok_or_else(|| anyhow!("unknown world {name:?}"))?],
        None => (0..m.world_count()).collect(),
    };
    let mut ev = Evaluator::new(m);
    let truth = ev.truth_set(&f)?;
    let holds = worlds.iter().all(|&w| truth[w]);
    if cli.json {
        let per: serde_json::Map<String, Value> = worlds
            .iter()
            .map(|&w| (m.world_name(w).to_string(), Value::Bool(truth[w])))
            .collect();
        print_json(&json!({"formula": print_formula(&f, u), "holds": holds, "worlds": per}));
    } else {
        outln!("{}", print_formula(&f, u));
        for &w in &worlds {
            outln!("  {:<12} {}", m.world_name(w), if truth[w] { "true" } else { "false" });
        }
        outln!("{}", if holds { "holds" } else { "fails" });
    }
    Ok(holds)
}

fn props(cli: &Cli, arg: &ModelArg, level: LevelArg) -> Outcome {
    let m = read_kripke(arg)?;
    let r = check_frame(&m, level.into());
    if cli.json {
        let verdicts: Vec<Value> = r
            .verdicts
            .iter()
            .map(|v| {
                json!({
                    "property": v.property.name(),
                    "holds": v.witness.is_none(),
                    "witness": v.witness.as_ref().map(|w| render_witness(&m, w)),
                })
            })
            .collect();
        print_json(&json!({
            "passes": r.passes(),
            "exhaustive": r.exhaustive,
            "verdicts": verdicts,
            "warnings": r.warnings,
        }));
    } else {
        out!("{}", r.render(&m));
    }
    Ok(r.passes())
}

fn translate(
    cli: &Cli,
    arg: &ModelArg,
    verify: Option<usize>,
    order: Option<&str>,
    out: Option<&Path>,
    mapping: Option<&Path>,
) -> Outcome {
    let m = read_kripke(arg)?;
    let order = order
        .map(|o| {
            o.split(',')
                .map(|w| m.index(w.trim()).map_err(|e| anyhow!("--order: {e}")))
                .collect::<anyhow::Result<Vec<usize>>>()
        })
        .transpose()?;
    let t = match delta_translate_with(&m, &TranslateOptions { order, require_proper: true }) {
        Ok(t) => t,
        Err(e) => {
            if cli.json {
                print_json(&json!({"translated": false, "error": e.to_string()}));
            } else {
                outln!("{e}");
            }
            return Ok(false);
        }
    };
    let map: serde_json::Map<String, Value> = t
        .mapping_names()
        .into_iter()
        .map(|(w, s)| (w.to_string(), Value::String(s.to_string())))
        .collect();
    let model_json = simplicial_to_json(&t.target);
    if let Some(p) = mapping {
        write_out(Some(p), &format!("{}\n", serde_json::to_string_pretty(&map)?))?;
    }
    let report = verify.map(|d| verify_translation(&t, d)).transpose()?;
    let ok = report.as_ref().is_none_or(|r| r.passed());
    if cli.json {
        let checks: Option<Vec<Value>> = report.as_ref().map(|r| {
            r.checks
                .iter()
                .map(|c| json!({"id": c.id, "description": c.description, "witness": c.witness}))
                .collect()
        });
        if let Some(p) = out {
            write_out(Some(p), &model_json)?;
        }
        let model: Value = serde_json::from_str(&model_json)?;
        print_json(&json!({
            "translated": true,
            "model": if out.is_some() { Value::Null } else { model },
            "mapping": map,
            "certified": report.as_ref().map(|r| r.passed()),
            "checks": checks,
        }));
    } else {
        match out {
            Some(p) => {
                write_out(Some(p), &model_json)?;
                out!("{}", render_complex(&t.target.complex));
            }
            None => out!("{model_json}"),
        }
        if let Some(r) = &report {
            eprint!("{r}");
            eprintln!("{}", if r.passed() { "certified" } else { "NOT certified" });
        }
    }
    Ok(ok)
}

fn unravel(cli: &Cli, arg: &ModelArg) -> Outcome {
    let m = read_kripke(arg)?;
    let d = cli.depth.unwrap_or(DEFAULT_DEPTH);
    match unravel_model(&m, d) {
        Ok(u) => {
            out!("{}", kripke_to_json(&u.model));
            Ok(true)
        }
        Err(e) => Err(anyhow!(Rejected(e.to_string()))),
    }
}

fn quotient_cmd(cli: &Cli, arg: &ModelArg) -> Outcome {
    let m = read_kripke(arg)?;
    match quotient(&m) {
        Ok(q) => {
            if cli.json {
                let classes: serde_json::Map<String, Value> = (0..m.len())
                    .map(|w| (m.worlds[w].clone(), Value::String(q.model.worlds[q.class_of[w]].clone())))
                    .collect();
                let model: Value = serde_json::from_str(&kripke_to_json(&q.model))?;
                print_json(&json!({"model": model, "classes": classes}));
            } else {
                out!("{}", kripke_to_json(&q.model));
            }
            Ok(true)
        }
        Err(e) => {
            let detail = match &e {
                synergy::kripke::QuotientError::IllDefined { w, v, prop } => {
                    format!("{e}: ({},{}) on {}", m.worlds[*w], m.worlds[*v], prop.as_str())
                }
                synergy::kripke::QuotientError::RepresentativeDependent { pattern, w, v } => format!(
                    "{e}: ({},{}) under {}",
                    m.worlds[*w],
                    m.worlds[*v],
                    m.universe.fmt_pattern(pattern)
                ),
                synergy::kripke::QuotientError::NotDelta { witness, .. } => {
                    format!("{e} at {}", render_witness(&m, witness))
                }
            };
            if cli.json {
                print_json(&json!({"error": detail}));
            } else {
                outln!("{detail}");
            }
            Ok(false)
        }
    }
}

fn soundness(cli: &Cli, scheme: &str, trials: u64, level: ScanLevelArg) -> Outcome {
    let level = match level {
        ScanLevelArg::Simplicial => ScanLevel::Simplicial,
        ScanLevelArg::Kappa => ScanLevel::Kappa,
    };
    let schemes: Vec<Scheme> = if scheme.eq_ignore_ascii_case("all") {
        match level {
            ScanLevel::Simplicial => Scheme::AXIOMS.to_vec(),
            ScanLevel::Kappa => Scheme::KAPPA_AXIOMS.to_vec(),
        }
    } else {
        vec![scheme.parse::<Scheme>().map_err(|e| anyhow!(e))?]
    };
    let mut clean = true;
    let mut rows = Vec::new();
    for s in schemes {
        let r = axiom_scan(s, level, cli.seed, trials);
        clean &= r.counterexample.is_none();
        let cx = r.counterexample.as_ref().map(|c| {
            let u = synergy::Universe::letters(c.params.agents);
            json!({
                "trial": c.trial,
                "agents": c.params.agents,
                "worlds": c.params.worlds,
                "model_seed": c.params.seed,
                "world": c.world,
                "instance": print_formula(&c.instance, &u),
            })
        });
        if !cli.json {
            match &cx {
                None => outln!("{:<6} {} trials, no counterexample", s.name(), r.trials),
                Some(c) => outln!(
                    "{:<6} counterexample on trial {} at {}: {}",
                    s.name(),
                    c["trial"],
                    c["world"].as_str().unwrap_or_default(),
                    c["instance"].as_str().unwrap_or_default()
                ),
            }
        }
        rows.push(json!({"scheme": s.name(), "trials": r.trials, "counterexample": cx}));
    }
    if cli.json {
        print_json(&json!({"seed": cli.seed, "results": rows}));
    }
    Ok(clean)
}

fn example(name: Option<&str>) -> Outcome {
    match name {
        Some(n) => out!("{}", example_text(n)?),
        None => {
            for n in example_names() {
                outln!("{n}");
            }
        }
    }
    Ok(true)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate(m) => validate(cli, m),
        Command::Check {
            model,
            formula,
            world,
            all_worlds: _,
        } => match read_model(model)? {
            AnyModel::Simplicial(m) => check_on(cli, &m, formula, world.as_deref()),
            AnyModel::Kripke(m) => check_on(cli, &m, formula, world.as_deref()),
        },
        Command::Props { model, level } => props(cli, model, *level),
        Command::Translate {
            model,
            verify,
            order,
            out,
            mapping,
        } => translate(
            cli,
            model,
            *verify,
            order.as_deref(),
            out.as_deref(),
            mapping.as_deref(),
        ),
        Command::Unravel(m) => unravel(cli, m),
        Command::Quotient(m) => quotient_cmd(cli, m),
        Command::Soundness { scheme, trials, level } => soundness(cli, scheme, *trials, *level),
        Command::Example { name } => example(name.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<Rejected>() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
