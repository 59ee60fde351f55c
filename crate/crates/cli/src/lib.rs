//! `exactcat`: samples exact-structure axioms and lemma suites; failures
//! leave witness files that `replay` re-runs.
//!
//! Exit codes: 0 when every check comes out as expected, 1 on an unexpected
//! verdict, 2 on usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use exactcat::exactstruct::{
    check_axiom, Axiom, AxiomReport, CheckConfig, ExactStructure, Outcome, Side, StructureKind, Verdict, Witness,
    WitnessBlob,
};
use exactcat::fgab::Bounds;
use exactcat::suites::{check_lemma, replay_lemma, Lemma};

pub const DEFAULT_SEED: u64 = 1729;
pub const SEED_ENV: &str = "EXACTCAT_SEED";
pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNEXPECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "exactcat", version, about = "Verify one-sided exact structures on finitely generated abelian groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the axioms of a structure.
    CheckAxioms(CheckArgs),
    /// Run the seeded suite of one lemma.
    VerifyLemma(LemmaArgs),
    /// Re-run the instance stored in a witness file.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// split, max, isbell:<p>, all-isos or ext-closed:<free|finite|all>[@base]
    #[arg(long, default_value = "max")]
    pub structure: String,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Defaults to $EXACTCAT_SEED, then 1729.
    #[arg(long)]
    pub seed: Option<u64>,
    /// max rank, max torsion factors, max exponent
    #[arg(long, default_value = "2,2,16", value_parser = parse_bounds)]
    pub bounds: Bounds,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory for witness files of failing checks.
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Comma-separated, e.g. R1,R2,R0*. Defaults to the axioms of the structure's side.
    #[arg(long, value_delimiter = ',')]
    pub axioms: Vec<String>,
    /// Pass when the registered counterexample structures fail exactly the expected axioms.
    #[arg(long)]
    pub expect_paper: bool,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    /// five, nine, double, three-by-three, pushout-equiv, defl-sum, obscure,
    /// cone-acyclic, section-decomp or injective
    pub name: String,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

pub fn parse_bounds(s: &str) -> Result<Bounds, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [r, t, e] = parts.as_slice() else { return Err(format!("expected r,t,e, got `{s}`")) };
    let num = |x: &str| x.parse::<u64>().map_err(|_| format!("`{x}` is not a non-negative integer"));
    let (r, t, e) = (num(r)?, num(t)?, num(e)?);
    if r + t == 0 {
        return Err("rank and torsion bounds cannot both be zero".into());
    }
    if t > 0 && e < 2 {
        return Err("the exponent bound must be at least 2".into());
    }
    if r > 6 || t > 6 || e > 1 << 20 {
        return Err("bounds too large".into());
    }
    Ok(Bounds::new(r as usize, t as usize, e))
}

/// Axioms that the registered counterexample structures are known to fail.
pub fn expected_failures(s: &ExactStructure) -> Vec<Axiom> {
    match s.kind() {
        StructureKind::Isbell { .. } => vec![Axiom::R1, Axiom::R2, Axiom::R3],
        StructureKind::AllIsos => vec![Axiom::R0Star, Axiom::R3],
        _ => Vec::new(),
    }
}

pub fn default_axioms(s: &ExactStructure) -> Vec<Axiom> {
    match s.side() {
        Side::Right => Axiom::RIGHT.to_vec(),
        Side::Left => Axiom::LEFT.to_vec(),
        Side::TwoSided => Axiom::ALL.to_vec(),
    }
}

#[derive(Debug, Serialize)]
struct CheckEntry {
    check: String,
    verdict: Verdict,
    expected: Verdict,
    samples: usize,
    fixtures: usize,
    vacuous: usize,
    witness: Option<WitnessBlob>,
}

#[derive(Debug, Serialize)]
struct RunReport {
    schema_version: u32,
    command: String,
    structure: String,
    samples: u64,
    seed: u64,
    bounds: Bounds,
    expect_paper: bool,
    status: &'static str,
    checks: Vec<CheckEntry>,
}

struct Timed {
    report: AxiomReport,
    expected: Verdict,
    millis: u128,
}

/// Seed precedence: flag, then the environment, then the default.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, String> {
    match (flag, env) {
        (Some(s), _) => Ok(s),
        (None, Some(v)) => v.trim().parse().map_err(|_| format!("{SEED_ENV}=`{v}` is not a 64-bit seed")),
        (None, None) => Ok(DEFAULT_SEED),
    }
}

fn witness_file_name(w: &Witness) -> String {
    let clean = |s: &str| s.replace('*', "star").replace([':', '@', '/'], "-");
    format!("{}_{}.json", clean(&w.structure), clean(&w.check))
}

fn write_witnesses(dir: &Path, runs: &[Timed]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for w in runs.iter().filter_map(|t| t.report.witness.as_ref()) {
        std::fs::write(dir.join(witness_file_name(w)), w.to_json() + "\n")?;
    }
    Ok(())
}

fn emit(
    command: &str,
    run: &RunArgs,
    seed: u64,
    expect_paper: bool,
    runs: &[Timed],
    started: Instant,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let ok = runs.iter().all(|t| t.report.verdict == t.expected);
    if let Some(dir) = &run.witness_out {
        if let Err(e) = write_witnesses(dir, runs) {
            let _ = writeln!(err, "error: cannot write witnesses to {}: {e}", dir.display());
            return EXIT_USAGE;
        }
    }
    let status = if ok { "pass" } else { "fail" };
    match run.format {
        Format::Json => {
            let report = RunReport {
                schema_version: REPORT_SCHEMA_VERSION,
                command: command.into(),
                structure: runs.first().map_or_else(|| run.structure.clone(), |t| t.report.structure.clone()),
                samples: run.samples,
                seed,
                bounds: run.bounds,
                expect_paper,
                status,
                checks: runs
                    .iter()
                    .map(|t| CheckEntry {
                        check: t.report.check.clone(),
                        verdict: t.report.verdict,
                        expected: t.expected,
                        samples: t.report.samples,
                        fixtures: t.report.fixtures,
                        vacuous: t.report.vacuous,
                        witness: t.report.witness.as_ref().map(Witness::to_blob),
                    })
                    .collect(),
            };
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            // timings stay out of the JSON so reports are reproducible
            let _ = writeln!(err, "{command}: {status} in {} ms", started.elapsed().as_millis());
        }
        Format::Text => {
            for t in runs {
                let r = &t.report;
                let mark = if r.verdict == t.expected { "ok" } else { "UNEXPECTED" };
                let _ = writeln!(
                    out,
                    "{:<16} {:<5} expected {:<5} {:<10} {} [{} ms]",
                    r.check,
                    r.verdict.to_string(),
                    t.expected.to_string(),
                    mark,
                    r.summary(),
                    t.millis
                );
                if let Some(w) = &r.witness {
                    for (name, h) in &w.morphisms {
                        let _ = writeln!(
                            out,
                            "    {name}: {} -> {}  {}",
                            h.source().describe(),
                            h.target().describe(),
                            inline_matrix(h)
                        );
                    }
                }
            }
            let _ = writeln!(
                out,
                "{command} {} seed={seed} samples={}: {status} ({} ms)",
                runs.first().map_or(run.structure.as_str(), |t| t.report.structure.as_str()),
                run.samples,
                started.elapsed().as_millis()
            );
        }
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_UNEXPECTED
    }
}

/// `[a b; c d]`, rows of the action matrix.
fn inline_matrix(h: &exactcat::fgab::Hom) -> String {
    let rows: Vec<String> = h.action().to_text().lines().skip(1).map(str::to_string).collect();
    format!("[{}]", rows.join("; "))
}

fn config(run: &RunArgs, seed: u64) -> CheckConfig {
    CheckConfig::new(run.samples as usize, seed).with_bounds(run.bounds)
}

fn usage(err: &mut dyn Write, msg: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "error: {msg}");
    EXIT_USAGE
}

fn timed(f: impl FnOnce() -> AxiomReport, expected: Verdict) -> Timed {
    let t = Instant::now();
    let report = f();
    Timed { report, expected, millis: t.elapsed().as_millis() }
}

pub fn cmd_check_axioms(args: &CheckArgs, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let started = Instant::now();
    let seed = match resolve_seed(args.run.seed, env_seed) {
        Ok(s) => s,
        Err(e) => return usage(err, e),
    };
    let s = match ExactStructure::from_name(&args.run.structure) {
        Ok(s) => s,
        Err(e) => return usage(err, e),
    };
    let mut axioms = if args.axioms.is_empty() {
        default_axioms(&s)
    } else {
        match args.axioms.iter().map(|a| a.parse::<Axiom>()).collect::<Result<Vec<_>, _>>() {
            Ok(a) => a,
            Err(e) => return usage(err, e),
        }
    };
    // report order is fixed by the axiom, not by the command line
    axioms.sort();
    axioms.dedup();
    let failing = expected_failures(&s);
    let cfg = config(&args.run, seed);
    let runs: Vec<Timed> = axioms
        .iter()
        .map(|&a| {
            let expected =
                if args.expect_paper && failing.contains(&a) { Verdict::Fail } else { Verdict::Pass };
            timed(|| check_axiom(&s, a, &cfg), expected)
        })
        .collect();
    emit("check-axioms", &args.run, seed, args.expect_paper, &runs, started, out, err)
}

pub fn cmd_verify_lemma(args: &LemmaArgs, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let started = Instant::now();
    let seed = match resolve_seed(args.run.seed, env_seed) {
        Ok(s) => s,
        Err(e) => return usage(err, e),
    };
    let lemma: Lemma = match args.name.parse() {
        Ok(l) => l,
        Err(_) => return usage(err, format!("unknown lemma `{}`", args.name)),
    };
    let s = match ExactStructure::from_name(&args.run.structure) {
        Ok(s) => s,
        Err(e) => return usage(err, e),
    };
    let cfg = config(&args.run, seed);
    let runs = vec![timed(|| check_lemma(&s, lemma, &cfg), Verdict::Pass)];
    emit("verify-lemma", &args.run, seed, false, &runs, started, out, err)
}

#[derive(Serialize)]
struct ReplayReport<'a> {
    check: &'a str,
    structure: &'a str,
    outcome: &'static str,
    note: Option<String>,
}

pub fn cmd_replay(args: &ReplayArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => return usage(err, format!("cannot read {}: {e}", args.file.display())),
    };
    let w = match Witness::from_json(&text) {
        Ok(w) => w,
        Err(e) => return usage(err, e),
    };
    let outcome = if w.check.parse::<Axiom>().is_ok() { w.replay() } else { replay_lemma(&w) };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => return usage(err, e),
    };
    let (label, note) = match &outcome {
        Outcome::Holds => ("holds", None),
        Outcome::Vacuous => ("vacuous", None),
        Outcome::Fails { note, .. } => ("fails", Some(note.clone())),
    };
    match args.format {
        Format::Json => {
            let r = ReplayReport { check: &w.check, structure: &w.structure, outcome: label, note };
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("report serializes"));
        }
        Format::Text => {
            let _ = writeln!(out, "{} {} ({})", w.structure, w.check, w.note);
            for (name, h) in &w.morphisms {
                let _ = writeln!(out, "  {name}: {} -> {}", h.source().describe(), h.target().describe());
                for row in h.action().to_text().lines().skip(1) {
                    let _ = writeln!(out, "      [{row}]");
                }
            }
            match &note {
                Some(n) => {
                    let _ = writeln!(out, "replay: fails: {n}");
                }
                None => {
                    let _ = writeln!(out, "replay: {label}");
                }
            }
        }
    }
    if matches!(outcome, Outcome::Fails { .. }) {
        EXIT_UNEXPECTED
    } else {
        EXIT_OK
    }
}

/// Parses `argv` and runs; help and version requests exit 0, parse errors 2.
pub fn run_from<I, T>(argv: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match &cli.command {
        Command::CheckAxioms(a) => cmd_check_axioms(a, env_seed, out, err),
        Command::VerifyLemma(a) => cmd_verify_lemma(a, env_seed, out, err),
        Command::Replay(a) => cmd_replay(a, out, err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_from(std::iter::once("exactcat").chain(args.iter().copied()), None, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bounds_parse() {
        assert_eq!(parse_bounds("2,2,16").unwrap(), Bounds::default());
        assert!(parse_bounds("0,0,5").is_err());
        assert!(parse_bounds("1,2").is_err());
        assert!(parse_bounds("1,x,3").is_err());
    }

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(Some(3), Some("9")).unwrap(), 3);
        assert_eq!(resolve_seed(None, Some("9")).unwrap(), 9);
        assert_eq!(resolve_seed(None, None).unwrap(), DEFAULT_SEED);
        assert!(resolve_seed(None, Some("nine")).is_err());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&["check-axioms", "--structure", "bogus"]).0, EXIT_USAGE);
        assert_eq!(run(&["check-axioms", "--axioms", "R9"]).0, EXIT_USAGE);
        assert_eq!(run(&["check-axioms", "--samples", "0"]).0, EXIT_USAGE);
        assert_eq!(run(&["verify-lemma", "seven"]).0, EXIT_USAGE);
        assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn witness_names() {
        let w = Witness { check: "R0*".into(), structure: "isbell:2".into(), morphisms: Vec::new(), note: String::new(), origin: None };
        assert_eq!(witness_file_name(&w), "isbell-2_R0star.json");
    }
}
