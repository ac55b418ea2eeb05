//! The `conebound` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::corpus::BUNDLED;
use crate::engine::{explain, saturate_with, Limits, Options, SaturationResult, Status};
use crate::key::{InvariantKey, Side};
use crate::report::{json_report, report_keys, text_report};
use crate::rules::rules_markdown;
use crate::scene::{elaborate, parse_inv, parse_scene, Elaborated};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONTRADICTION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "conebound", version, about = "Derive cone length and category bounds for a scene of maps and spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Saturate a scene and print its status and queried bounds.
    Check(SceneArgs),
    /// Print the bounds of one invariant.
    Query {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, value_name = "INVARIANT")]
        target: String,
    },
    /// Print the derivation of one side of an invariant.
    Explain {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, value_name = "INVARIANT[:lo|hi]")]
        target: String,
    },
    /// Run every bundled scene (or every scene in a directory) against its golden report.
    Corpus {
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Rewrite the golden reports instead of comparing.
        #[arg(long, requires = "dir")]
        bless: bool,
    },
    /// Print the rule catalog as a markdown table.
    Rules,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct SceneArgs {
    scene: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long)]
    max_finite: Option<u64>,
    /// Only derive lower bounds stated directly by a rule.
    #[arg(long)]
    no_rearrange: bool,
    /// Also print the derivation of this bound.
    #[arg(long = "explain", value_name = "INVARIANT[:lo|hi]")]
    explain: Vec<String>,
}

impl SceneArgs {
    fn options(&self) -> Options {
        let defaults = Limits::default();
        Options {
            limits: Limits {
                max_rounds: self.max_rounds.unwrap_or(defaults.max_rounds),
                max_finite: self.max_finite.unwrap_or(defaults.max_finite),
            },
            rearrange: !self.no_rearrange,
            order: None,
        }
    }
}

/// Exit code for a finished run.
pub fn status_code(status: &Status) -> i32 {
    match status {
        Status::Fixpoint => EXIT_OK,
        Status::Contradiction(_) => EXIT_CONTRADICTION,
        Status::BudgetExhausted(_) => EXIT_BUDGET,
    }
}

/// Parse and elaborate, with diagnostics as one string per line.
pub fn load_scene(text: &str) -> Result<Elaborated, Vec<String>> {
    let scene = parse_scene(text).map_err(|e| e.0.iter().map(ToString::to_string).collect::<Vec<_>>())?;
    elaborate(&scene).map_err(|e| vec![e.to_string()])
}

/// The JSON report for a scene under default options, as written to goldens.
pub fn golden_report(text: &str) -> Result<String, Vec<String>> {
    let elab = load_scene(text)?;
    let result = saturate_with(&elab, &Options::default());
    let report = json_report(&elab, &result, &report_keys(&elab, &result));
    Ok(pretty(&report))
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn resolve(elab: &Elaborated, text: &str) -> Result<(InvariantKey, Side), String> {
    let (inv, side) = match text.rsplit_once(':') {
        Some((inv, "lo")) => (inv, Side::Lo),
        Some((inv, "hi")) => (inv, Side::Hi),
        _ => (text, Side::Hi),
    };
    let parsed = parse_inv(inv.trim()).map_err(|d| format!("target '{text}': {}", d.message))?;
    let key = elab
        .resolve(&parsed)
        .ok_or_else(|| format!("target '{text}': unknown map or space"))?;
    Ok((key, side))
}

/// Run the command line with `args` (program name first), writing to `out`
/// and `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Check(args) => check(&args, None, out),
        Command::Query { scene, target } => check(&scene, Some(&target), out),
        Command::Explain { scene, target } => explain_cmd(&scene, &target, out),
        Command::Corpus { dir, bless } => run_corpus(dir.as_deref(), bless, out),
        Command::Rules => {
            let _ = out.write_all(rules_markdown().as_bytes());
            Ok(EXIT_OK)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(lines) => {
            for line in lines {
                let _ = writeln!(err, "{line}");
            }
            EXIT_INPUT
        }
    }
}

fn saturate_file(args: &SceneArgs) -> Result<(Elaborated, SaturationResult), Vec<String>> {
    let path = args.scene.display();
    let text = fs::read_to_string(&args.scene).map_err(|e| vec![format!("{path}: {e}")])?;
    let elab = load_scene(&text).map_err(|lines| lines.into_iter().map(|l| format!("{path}: {l}")).collect::<Vec<_>>())?;
    let result = saturate_with(&elab, &args.options());
    Ok((elab, result))
}

fn check(args: &SceneArgs, target: Option<&str>, out: &mut dyn Write) -> Result<i32, Vec<String>> {
    let (elab, result) = saturate_file(args)?;
    let keys = match target {
        Some(t) => vec![resolve(&elab, t).map_err(|e| vec![e])?.0],
        None => report_keys(&elab, &result),
    };
    let explains = args
        .explain
        .iter()
        .map(|t| resolve(&elab, t).map(|ks| (t.as_str(), ks)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| vec![e])?;
    match args.format {
        Format::Json => {
            let mut report = json_report(&elab, &result, &keys);
            if !explains.is_empty() {
                let mut trees = Map::new();
                for (text, (key, side)) in &explains {
                    let tree = explain(&result, *key, *side).map_err(|e| vec![e.to_string()])?;
                    trees.insert(text.to_string(), tree.to_json(&elab));
                }
                report["explain"] = Value::Object(trees);
            }
            let _ = out.write_all(pretty(&report).as_bytes());
        }
        Format::Text => {
            let _ = out.write_all(text_report(&elab, &result, &keys).as_bytes());
            for (text, (key, side)) in &explains {
                let tree = explain(&result, *key, *side).map_err(|e| vec![e.to_string()])?;
                let _ = writeln!(out, "derivation of {text}:");
                let _ = out.write_all(tree.render(&elab).as_bytes());
            }
        }
    }
    Ok(status_code(&result.status))
}

fn explain_cmd(args: &SceneArgs, target: &str, out: &mut dyn Write) -> Result<i32, Vec<String>> {
    let (elab, result) = saturate_file(args)?;
    let (key, side) = resolve(&elab, target).map_err(|e| vec![e])?;
    let tree = match explain(&result, key, side) {
        Ok(tree) => tree,
        Err(e) => {
            let _ = writeln!(out, "{e}");
            return Ok(EXIT_BUDGET);
        }
    };
    match args.format {
        Format::Json => {
            let _ = out.write_all(pretty(&tree.to_json(&elab)).as_bytes());
        }
        Format::Text => {
            let _ = out.write_all(tree.render(&elab).as_bytes());
        }
    }
    Ok(status_code(&result.status))
}

fn run_corpus(dir: Option<&Path>, bless: bool, out: &mut dyn Write) -> Result<i32, Vec<String>> {
    let scenes: Vec<(String, String, Option<String>, Option<PathBuf>)> = match dir {
        None => BUNDLED
            .iter()
            .map(|s| (s.name.to_string(), s.scene.to_string(), Some(s.golden.to_string()), None))
            .collect(),
        Some(dir) => {
            let mut paths: Vec<PathBuf> = fs::read_dir(dir)
                .map_err(|e| vec![format!("{}: {e}", dir.display())])?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "scene"))
                .collect();
            paths.sort();
            paths
                .into_iter()
                .map(|p| {
                    let name = p.file_name().unwrap().to_string_lossy().into_owned();
                    let text = fs::read_to_string(&p).map_err(|e| vec![format!("{}: {e}", p.display())])?;
                    let golden_path = p.with_extension("json");
                    let golden = fs::read_to_string(&golden_path).ok();
                    Ok((name, text, golden, Some(golden_path)))
                })
                .collect::<Result<_, Vec<String>>>()?
        }
    };
    let mut code = EXIT_OK;
    for (name, text, golden, golden_path) in scenes {
        let report = golden_report(&text).map_err(|lines| lines.into_iter().map(|l| format!("{name}: {l}")).collect::<Vec<_>>())?;
        if bless {
            let path = golden_path.expect("bless requires a directory");
            fs::write(&path, &report).map_err(|e| vec![format!("{}: {e}", path.display())])?;
            let _ = writeln!(out, "blessed {name}");
            continue;
        }
        match golden {
            Some(g) if g == report => {
                let _ = writeln!(out, "ok       {name}");
            }
            Some(g) => {
                code = EXIT_MISMATCH;
                let line = g.lines().zip(report.lines()).position(|(a, b)| a != b).map_or_else(
                    || g.lines().count().min(report.lines().count()) + 1,
                    |i| i + 1,
                );
                let _ = writeln!(out, "mismatch {name}: golden differs at line {line}");
            }
            None => {
                code = EXIT_MISMATCH;
                let _ = writeln!(out, "mismatch {name}: no golden report");
            }
        }
    }
    Ok(code)
}
