mod human;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use cl_core::cl2::{check_cl2_proof, is_cl2, prove, Cl2Proof, ProveConfig};
use cl_core::epm::{check_fairness, simulate, wins_against_all, RandomEnv, ScriptEnv, SearchConfig};
use cl_core::formula::{parse_formula, Formula};
use cl_core::game::{GameRef, Interpretation, MoveCaps, Player, Signature, Valuation};
use cl_core::int::{check_proof, compile, curated_theorem_corpus, proof_from_json, proof_to_json};
use cl_core::par::Exec;
use cl_core::strategies::{BuildCtx, StrategyExpr};
use cl_core::suites::{self, ProbeConfig, Tally};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cl", version, about = "Play, check and compile computability-logic games and proofs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and report its classification
    CheckFormula { formula: String },
    /// Validate a proof file
    CheckProof {
        #[arg(long, value_enum)]
        kind: ProofKind,
        file: PathBuf,
    },
    /// Search for a CL2 proof
    ProveCl2 {
        formula: String,
        #[arg(long, default_value_t = ProveConfig::default().max_goals)]
        max_goals: usize,
        /// Write the proof here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile an INT proof file to a strategy expression
    Compile { file: PathBuf },
    /// Play a strategy against an environment
    Play(PlayArgs),
    /// Run a verification suite
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        probe: ProbeArgs,
    },
    /// List the built-in INT corpus, optionally writing each proof as JSON
    Corpus {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProofKind {
    Int,
    Cl2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    #[value(name = "lemma10")]
    Colored,
    Cl2Schemata,
    Corpus,
    Named,
}

#[derive(clap::Args)]
struct PlayArgs {
    #[arg(long)]
    game: String,
    /// Registry id or expression, e.g. `l6a` or `mp(l6a; ccs)`
    #[arg(long)]
    strategy: String,
    /// random | script:FILE | exhaustive | human
    #[arg(long, default_value = "random")]
    env: String,
    #[arg(long, env = "CL_SEED")]
    seed: Option<u64>,
    /// Interpretation file; a seeded random interpretation otherwise
    #[arg(long)]
    interp: Option<PathBuf>,
    /// Valuation, e.g. `x=3,y=5,default=1`
    #[arg(long, default_value = "")]
    val: String,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    #[arg(long, default_value_t = 50)]
    window: usize,
    /// Environment moves per branch for `exhaustive`; move cap for `random`
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long, default_value_t = 6)]
    max_moves: usize,
    /// Largest constant offered for quantifier choices
    #[arg(long, default_value_t = 3)]
    constants: u64,
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ProbeArgs {
    #[arg(long)]
    plays: Option<usize>,
    #[arg(long)]
    interps: Option<usize>,
    #[arg(long, env = "CL_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    sequential: bool,
}

impl ProbeArgs {
    fn config(&self, plays: usize, interps: usize) -> ProbeConfig {
        ProbeConfig {
            plays: self.plays.unwrap_or(plays),
            interps: self.interps.unwrap_or(interps),
            seed: self.seed,
            exec: if self.sequential { Exec::Sequential } else { Exec::Parallel },
            ..ProbeConfig::default()
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn formula(text: &str) -> Result<Formula> {
    parse_formula(text).with_context(|| format!("parsing formula {text:?}"))
}

fn check_formula(text: &str) -> Result<ExitCode> {
    let f = formula(text)?;
    println!("formula: {f}");
    let free: Vec<String> = f.free_vars().into_iter().collect();
    println!("free variables: {}", if free.is_empty() { "none".to_string() } else { free.join(", ") });
    let letters: Vec<String> = f.letters().iter().map(|l| l.to_string()).collect();
    println!("letters: {}", if letters.is_empty() { "none".to_string() } else { letters.join(", ") });
    println!("INT: {}", f.is_int());
    println!("CL2: {}", is_cl2(&f));
    Ok(ExitCode::SUCCESS)
}

fn check_proof_file(kind: ProofKind, file: &Path) -> Result<ExitCode> {
    let text = read(file)?;
    let verdict = match kind {
        ProofKind::Int => {
            let p = proof_from_json(&text)?;
            check_proof(&p).map(|_| p.sequent.to_string()).map_err(|e| e.to_string())
        }
        ProofKind::Cl2 => {
            let p = Cl2Proof::from_text(&text)?;
            let root = p.conclusion().map(|f| f.to_string()).unwrap_or_default();
            check_cl2_proof(&p).map(|_| root).map_err(|e| e.to_string())
        }
    };
    Ok(match verdict {
        Ok(root) => {
            println!("valid: {root}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("invalid: {e}");
            ExitCode::from(1)
        }
    })
}

fn prove_cl2(text: &str, max_goals: usize, out: Option<&Path>) -> Result<ExitCode> {
    let f = formula(text)?;
    match prove(&f, &ProveConfig { max_goals })? {
        Some(p) => {
            let (a, b, c) = p.rule_counts();
            let text = p.to_text();
            match out {
                Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            eprintln!("proved in {} steps: {a} (a), {b} (b), {c} (c)", p.steps.len());
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("unprovable: {f}");
            Ok(ExitCode::from(1))
        }
    }
}

fn compile_file(file: &Path) -> Result<ExitCode> {
    let p = proof_from_json(&read(file)?)?;
    let s = compile(&p)?;
    println!("game: {}", s.game);
    println!("strategy: {}", s.expr);
    Ok(ExitCode::SUCCESS)
}

fn play(a: &PlayArgs) -> Result<ExitCode> {
    let game = formula(&a.game)?;
    let expr: StrategyExpr = a.strategy.parse()?;
    let val = Valuation::parse(&a.val).map_err(anyhow::Error::msg)?;
    let interp = match &a.interp {
        Some(path) => {
            let v: serde_json::Value = serde_json::from_str(&read(path)?).context("interpretation is not JSON")?;
            Interpretation::from_json(&v)?
        }
        None => Interpretation::random(&Signature::of_formula(&game), a.seed.unwrap_or(0)),
    };
    let ctx = BuildCtx::new(interp.signature().clone());
    let g = GameRef::new(game, interp, val)?;
    let strategy = expr.build(&ctx)?;
    let caps = MoveCaps { constants: a.constants, ..MoveCaps::default() };

    let transcript = match a.env.as_str() {
        "random" => {
            let Some(seed) = a.seed else { bail!("--env random needs --seed or CL_SEED") };
            simulate(strategy, &mut RandomEnv::new(seed, a.max_moves).with_caps(caps), &g, a.budget)
        }
        "human" => simulate(strategy, &mut human::HumanEnv::stdio(caps), &g, a.budget),
        "exhaustive" => {
            let cfg = SearchConfig { depth: a.depth, caps, budget: a.budget, ..SearchConfig::default() };
            let report = wins_against_all(strategy, &g, &cfg)?;
            println!("#branches {}", report.leaves);
            return Ok(match report.counterexample {
                None => {
                    println!("#verdict T on every branch");
                    ExitCode::SUCCESS
                }
                Some(t) => {
                    print!("{}", t.to_text(&g));
                    ExitCode::from(1)
                }
            });
        }
        other => match other.strip_prefix("script:") {
            Some(path) => {
                let mut env = ScriptEnv::parse(&read(Path::new(path))?).map_err(anyhow::Error::msg)?;
                simulate(strategy, &mut env, &g, a.budget)
            }
            None => bail!("unknown environment {other:?}; expected random, script:FILE, exhaustive or human"),
        },
    };
    let text = format!("{}#fair {}\n", transcript.to_text(&g), check_fairness(&transcript, a.window));
    print!("{text}");
    if let Some(path) = &a.transcript {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if transcript.verdict == Player::Machine { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn print_tallies(tallies: &[Tally]) -> bool {
    for t in tallies {
        println!("{t}");
    }
    let plays: usize = tallies.iter().map(|t| t.plays).sum();
    let wins: usize = tallies.iter().map(|t| t.wins).sum();
    let failing = tallies.iter().filter(|t| !t.passed()).count();
    println!("total: {} games, {wins}/{plays} random wins, {failing} failing", tallies.len());
    failing == 0
}

fn verify(suite: Suite, p: &ProbeArgs) -> Result<ExitCode> {
    let ok = match suite {
        Suite::Colored => {
            let r = suites::colored_suite(&p.config(500, 5));
            println!(
                "colored trees: {} trees, {} branch pairs, {} violations",
                r.prefix.trees, r.prefix.pairs, r.prefix.violations
            );
            let audits: usize = r.l5.iter().map(|t| t.audits).sum();
            println!("l5 audits: {audits} iterations checked");
            print_tallies(&r.l5) && r.passed()
        }
        Suite::Cl2Schemata => print_tallies(&suites::cl2_schemata(&p.config(200, 5))),
        Suite::Named => print_tallies(&suites::named_suite(&p.config(500, 5))),
        Suite::Corpus => {
            let r = suites::corpus_suite(&p.config(1000, 10));
            println!("rules covered: {}/15", r.rules.len());
            print_tallies(&r.tallies) && r.passed()
        }
    };
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn corpus(dir: Option<&Path>) -> Result<ExitCode> {
    if let Some(d) = dir {
        fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
    }
    for (name, p) in curated_theorem_corpus() {
        let rules: Vec<&str> = p.rules_used().into_iter().collect();
        println!("{name}: {} [{}]", p.sequent, rules.join(", "));
        if let Some(d) = dir {
            let path = d.join(format!("{name}.json"));
            fs::write(&path, proof_to_json(&p)).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::CheckFormula { formula } => check_formula(&formula),
        Command::CheckProof { kind, file } => check_proof_file(kind, &file),
        Command::ProveCl2 { formula, max_goals, out } => prove_cl2(&formula, max_goals, out.as_deref()),
        Command::Compile { file } => compile_file(&file),
        Command::Play(a) => play(&a),
        Command::Verify { suite, probe } => verify(suite, &probe),
        Command::Corpus { dir } => corpus(dir.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
