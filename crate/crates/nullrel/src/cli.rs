//! Command-line front end: parse, compile, solve, and cross-check.
//!
//! Subcommands: `translate` and `emit-asp` print compiled program text,
//! `solve` enumerates stable models and their diagrams, `oracle` enumerates
//! models with the first-order brute-force route, and `check` diffs the two
//! model sets (optionally over seeded random theories).  Models go to the
//! output stream, diagnostics to the error stream, so golden files capture
//! models only.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagrams::{answer_sets_to_diagrams, DiagramError};
use crate::fo::{enumerate_dca_models_with_una, Diagram, OracleError, OracleLimits};
use crate::solver::{enumerate_stable_models, SolveError, SolveLimits};
use crate::theory::{
    parse_theory, print_theory, Clause, ConstKind, ParseError, Signature, TheoryError, TheorySpec,
};
use crate::translate::{
    compile_with_mode, emit_asp_text, parse_program, rewrite_with_mode, una_pairs, EmitStyle,
    GroundProgram, TranslateError, UnaMode,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_GUARDRAIL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Translate,
    Solve,
    Oracle,
    Check,
    EmitAsp,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    /// Read the input as a ground program instead of a theory.
    pub program_input: bool,
    pub una_mode: UnaMode,
    pub style: EmitStyle,
    /// Cap on reported models; 0 means all.
    pub models: usize,
    pub force: bool,
    pub random: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT_ERROR, message: message.into() }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<TheoryError> for Failure {
    fn from(e: TheoryError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<TranslateError> for Failure {
    fn from(e: TranslateError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let code = match e {
            SolveError::GuardrailExceeded { .. } => EXIT_GUARDRAIL,
            SolveError::NotChoiceFree => EXIT_INPUT_ERROR,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::GuardrailExceeded { .. } => EXIT_GUARDRAIL,
            _ => EXIT_INPUT_ERROR,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Bounds for the random theory generator.
#[derive(Debug, Clone, Copy)]
pub struct TheoryBounds {
    pub max_constants: usize,
    pub max_null_values: usize,
    pub max_predicates: usize,
    pub max_arity: usize,
    pub max_clauses: usize,
    pub max_clause_width: usize,
}

impl Default for TheoryBounds {
    fn default() -> Self {
        TheoryBounds {
            max_constants: 4,
            max_null_values: 2,
            max_predicates: 3,
            max_arity: 2,
            max_clauses: 5,
            max_clause_width: 3,
        }
    }
}

/// A uniformly random theory within the bounds: database constants first,
/// then null values, predicates of random arity, random clauses, and a
/// random subset of the optional unique name axioms as Σ.
pub fn random_theory<R: Rng>(rng: &mut R, b: &TheoryBounds) -> TheorySpec {
    let n_consts = rng.gen_range(1..=b.max_constants.max(1));
    let n_nulls = rng.gen_range(0..=b.max_null_values.min(n_consts));
    let mut sig = Signature::new();
    for i in 0..n_consts - n_nulls {
        sig.add_const(&format!("c{}", i + 1), ConstKind::Database).unwrap();
    }
    for i in 0..n_nulls {
        sig.add_const(&format!("w{}", i + 1), ConstKind::Null).unwrap();
    }
    let n_preds = rng.gen_range(1..=b.max_predicates.max(1));
    for i in 0..n_preds {
        let arity = rng.gen_range(0..=b.max_arity);
        sig.add_pred(&format!("p{}", i + 1), arity).unwrap();
    }

    let mut delta = Vec::new();
    for _ in 0..rng.gen_range(0..=b.max_clauses) {
        let width = rng.gen_range(1..=b.max_clause_width.max(1));
        let atoms = (0..width)
            .map(|_| {
                let pred = crate::theory::PredId(rng.gen_range(0..n_preds) as u32);
                let args = (0..sig.pred_arity(pred))
                    .map(|_| crate::theory::ConstId(rng.gen_range(0..n_consts) as u32))
                    .collect();
                crate::theory::Atom { pred, args }
            })
            .collect();
        delta.push(Clause::new(atoms).unwrap());
    }

    let mut sigma = BTreeSet::new();
    for a in sig.const_ids() {
        for bb in sig.const_ids() {
            if a < bb && (sig.is_null(a) || sig.is_null(bb)) && rng.gen_bool(0.5) {
                sigma.insert((a, bb));
            }
        }
    }
    TheorySpec::new(sig, delta, sigma).unwrap()
}

/// Solver diagrams next to oracle diagrams for the same theory and mode.
pub struct CheckOutcome {
    pub solver: Vec<Diagram>,
    pub oracle: Vec<Diagram>,
}

impl CheckOutcome {
    pub fn matches(&self) -> bool {
        self.solver == self.oracle
    }
}

/// Compile-and-solve versus the first-order oracle, with the same unique
/// name axioms on both sides.
pub fn check_theory(t: &TheorySpec, mode: &UnaMode, force: bool) -> Result<CheckOutcome, CheckError> {
    let prog = compile_with_mode(t, mode)?;
    let models = enumerate_stable_models(&prog, &SolveLimits { force, ..SolveLimits::default() })?;
    let solver = answer_sets_to_diagrams(&models, prog.signature())?;
    let una = una_pairs(t, mode)?;
    let oracle = enumerate_dca_models_with_una(
        t.signature(),
        t.delta(),
        &una,
        &OracleLimits { force, ..OracleLimits::default() },
    )?;
    Ok(CheckOutcome { solver, oracle })
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Translate(e) => e.into(),
            CheckError::Solve(e) => e.into(),
            CheckError::Oracle(e) => e.into(),
            CheckError::Diagram(e) => e.into(),
        }
    }
}

fn validate_mode(mode: &UnaMode) -> Result<(), Failure> {
    match mode {
        UnaMode::Una(l) | UnaMode::NoUna(l) if l.is_empty() => {
            Err(Failure::input("--una and --no-una need at least one constant"))
        }
        _ => Ok(()),
    }
}

fn load_program(cfg: &RunConfig, src: &str) -> Result<GroundProgram, Failure> {
    if cfg.program_input {
        let p = parse_program(src)?;
        Ok(rewrite_with_mode(&p, &cfg.una_mode)?)
    } else {
        let t = parse_theory(src)?;
        Ok(compile_with_mode(&t, &cfg.una_mode)?)
    }
}

fn answer_blocks(models: &[crate::solver::CandidateModel], sig: &Signature) -> String {
    let mut text = String::new();
    for (i, m) in models.iter().enumerate() {
        let _ = writeln!(text, "Answer: {}", i + 1);
        let atoms: Vec<String> = m.iter().map(|a| a.display(sig).to_string()).collect();
        let _ = writeln!(text, "{}", atoms.join(" "));
    }
    text
}

fn diagram_blocks(diagrams: &[Diagram], sig: &Signature) -> String {
    let mut text = String::new();
    for (i, d) in diagrams.iter().enumerate() {
        let _ = writeln!(text, "Diagram: {}", i + 1);
        let _ = write!(text, "{}", d.display(sig));
    }
    text
}

fn truncated<T: Clone>(items: &[T], limit: usize) -> Vec<T> {
    if limit == 0 || items.len() <= limit {
        items.to_vec()
    } else {
        items[..limit].to_vec()
    }
}

fn mismatch_failure(outcome: &CheckOutcome, sig: &Signature, context: &str) -> Failure {
    let mut message = format!(
        "{context}: solver found {} models, oracle found {}\n",
        outcome.solver.len(),
        outcome.oracle.len()
    );
    for d in outcome.solver.iter().filter(|d| !outcome.oracle.contains(d)) {
        let _ = writeln!(message, "only the solver produced:\n{}", d.display(sig));
    }
    for d in outcome.oracle.iter().filter(|d| !outcome.solver.contains(d)) {
        let _ = writeln!(message, "only the oracle produced:\n{}", d.display(sig));
    }
    Failure { code: EXIT_MISMATCH, message }
}

fn execute(cfg: &RunConfig) -> Result<String, Failure> {
    validate_mode(&cfg.una_mode)?;
    if cfg.command == Command::Check {
        if let Some(n) = cfg.random {
            return check_random(cfg, n);
        }
    }
    let path = cfg.input.as_ref().ok_or_else(|| Failure::input("an input file is required"))?;
    let src = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;

    match cfg.command {
        Command::Translate | Command::EmitAsp => {
            let prog = load_program(cfg, &src)?;
            Ok(emit_asp_text(&prog, cfg.style))
        }
        Command::Solve => {
            let prog = load_program(cfg, &src)?;
            let limits = SolveLimits { force: cfg.force, ..SolveLimits::default() };
            let models = truncated(&enumerate_stable_models(&prog, &limits)?, cfg.models);
            // diagram k belongs to answer k
            let diagrams = models
                .iter()
                .map(|m| crate::diagrams::answer_set_to_diagram(m, prog.signature()))
                .collect::<Result<Vec<_>, _>>()?;
            let mut text = answer_blocks(&models, prog.signature());
            text.push_str(&diagram_blocks(&diagrams, prog.signature()));
            Ok(text)
        }
        Command::Oracle => {
            if cfg.program_input {
                return Err(Failure::input("the oracle runs on theories, not on ground programs"));
            }
            let t = parse_theory(&src)?;
            let una = una_pairs(&t, &cfg.una_mode)?;
            let limits = OracleLimits { force: cfg.force, ..OracleLimits::default() };
            let diagrams =
                truncated(&enumerate_dca_models_with_una(t.signature(), t.delta(), &una, &limits)?, cfg.models);
            Ok(diagram_blocks(&diagrams, t.signature()))
        }
        Command::Check => {
            if cfg.program_input {
                return Err(Failure::input("check runs on theories, not on ground programs"));
            }
            let t = parse_theory(&src)?;
            let outcome = check_theory(&t, &cfg.una_mode, cfg.force)?;
            if outcome.matches() {
                Ok(format!("check ok: {} models\n", outcome.solver.len()))
            } else {
                Err(mismatch_failure(&outcome, t.signature(), "check failed"))
            }
        }
    }
}

fn check_random(cfg: &RunConfig, n: usize) -> Result<String, Failure> {
    let seed = cfg.seed.ok_or_else(|| Failure::input("--random needs --seed"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bounds = TheoryBounds::default();
    for i in 0..n {
        let t = random_theory(&mut rng, &bounds);
        let outcome = check_theory(&t, &UnaMode::Theory, true)?;
        if !outcome.matches() {
            let mut f = mismatch_failure(&outcome, t.signature(), &format!("random check {} failed", i + 1));
            let _ = write!(f.message, "theory was:\n{}", print_theory(&t));
            return Err(f);
        }
    }
    Ok(format!("check ok: {n} random theories agree\n"))
}

/// Run a command, writing models to `out` and diagnostics to `err`; returns
/// the process exit code.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cfg) {
        Ok(text) => {
            let result = match &cfg.output {
                Some(path) => fs::write(path, text).map_err(|e| Failure::input(e.to_string())),
                None => out.write_all(text.as_bytes()).map_err(|e| Failure::input(e.to_string())),
            };
            match result {
                Ok(()) => EXIT_OK,
                Err(f) => {
                    let _ = writeln!(err, "error: {}", f.message);
                    f.code
                }
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[derive(Parser)]
#[command(
    name = "nullrel",
    version,
    about = "Compile relational theories with null values to ground answer set programs, enumerate their stable models as diagrams, and cross-check against a first-order oracle"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct IoArgs {
    /// Input file
    input: PathBuf,
    /// Read the input as a ground program instead of a theory
    #[arg(long)]
    program: bool,
    /// Write to a file instead of standard output
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct UnaArgs {
    /// Unique name axioms for all pairs of distinct constants in this list
    #[arg(long, num_args = 1.., value_name = "CONST", conflicts_with = "no_una")]
    una: Vec<String>,
    /// Unique name axioms for all pairs with a member outside this list
    #[arg(long = "no-una", num_args = 1.., value_name = "CONST")]
    no_una: Vec<String>,
}

impl UnaArgs {
    fn mode(&self) -> UnaMode {
        if !self.una.is_empty() {
            UnaMode::Una(self.una.clone())
        } else if !self.no_una.is_empty() {
            UnaMode::NoUna(self.no_una.clone())
        } else {
            UnaMode::Theory
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Modern,
    Legacy,
}

impl From<StyleArg> for EmitStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Modern => EmitStyle::Modern,
            StyleArg::Legacy => EmitStyle::Legacy,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile the input and print the resulting ground program
    Translate {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        una: UnaArgs,
        #[arg(long, value_enum, default_value = "modern")]
        style: StyleArg,
    },
    /// Enumerate stable models and print them with their diagrams
    Solve {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        una: UnaArgs,
        /// Report at most this many models (0 = all)
        #[arg(long, default_value_t = 0)]
        models: usize,
        /// Override the size guardrails
        #[arg(long)]
        force: bool,
    },
    /// Enumerate models with the brute-force first-order oracle
    Oracle {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        una: UnaArgs,
        /// Report at most this many models (0 = all)
        #[arg(long, default_value_t = 0)]
        models: usize,
        /// Override the size guardrails
        #[arg(long)]
        force: bool,
    },
    /// Compare solver and oracle model sets; exit 2 on mismatch
    Check {
        /// Input file (omit with --random)
        #[arg(required_unless_present = "random")]
        input: Option<PathBuf>,
        #[command(flatten)]
        una: UnaArgs,
        /// Override the size guardrails
        #[arg(long)]
        force: bool,
        /// Check this many seeded random theories instead of a file
        #[arg(long, value_name = "N", requires = "seed")]
        random: Option<usize>,
        /// Seed for --random
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print text for external grounders
    EmitAsp {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        una: UnaArgs,
        #[arg(long, value_enum, default_value = "modern")]
        style: StyleArg,
    },
}

/// Parse process arguments into a run configuration.
pub fn parse_args() -> RunConfig {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Translate { io, una, style } => RunConfig {
            command: Command::Translate,
            input: Some(io.input),
            program_input: io.program,
            una_mode: una.mode(),
            style: style.into(),
            models: 0,
            force: false,
            random: None,
            seed: None,
            output: io.output,
        },
        Cmd::Solve { io, una, models, force } => RunConfig {
            command: Command::Solve,
            input: Some(io.input),
            program_input: io.program,
            una_mode: una.mode(),
            style: EmitStyle::Modern,
            models,
            force,
            random: None,
            seed: None,
            output: io.output,
        },
        Cmd::Oracle { io, una, models, force } => RunConfig {
            command: Command::Oracle,
            input: Some(io.input),
            program_input: io.program,
            una_mode: una.mode(),
            style: EmitStyle::Modern,
            models,
            force,
            random: None,
            seed: None,
            output: io.output,
        },
        Cmd::Check { input, una, force, random, seed } => RunConfig {
            command: Command::Check,
            input,
            program_input: false,
            una_mode: una.mode(),
            style: EmitStyle::Modern,
            models: 0,
            force,
            random,
            seed,
            output: None,
        },
        Cmd::EmitAsp { io, una, style } => RunConfig {
            command: Command::EmitAsp,
            input: Some(io.input),
            program_input: io.program,
            una_mode: una.mode(),
            style: style.into(),
            models: 0,
            force: false,
            random: None,
            seed: None,
            output: io.output,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_theories_are_valid_and_reproducible() {
        let bounds = TheoryBounds::default();
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let ta = random_theory(&mut a, &bounds);
            let tb = random_theory(&mut b, &bounds);
            assert_eq!(ta, tb);
            assert!(ta.signature().num_consts() <= bounds.max_constants);
            assert!(ta.delta().len() <= bounds.max_clauses);
            for &(x, y) in ta.sigma() {
                assert!(ta.signature().is_null(x) || ta.signature().is_null(y));
            }
        }
    }

    #[test]
    fn generator_without_nulls_leaves_sigma_empty() {
        let bounds = TheoryBounds { max_null_values: 0, ..TheoryBounds::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let t = random_theory(&mut rng, &bounds);
            assert!(t.sigma().is_empty());
            assert_eq!(t.signature().database_consts().count(), t.signature().num_consts());
        }
    }
}
