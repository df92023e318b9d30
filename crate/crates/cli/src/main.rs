use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use census_qa::braid::{BraidError, BraidWord, WordProblem, WordProblemMethod, DEFAULT_STEP_CAP};
use census_qa::exec::Execution;
use census_qa::invariants::{alexander, closure_component_count, determinant, genus_positive_braid, jones};
use census_qa::surgery::{orientation_classes, run_script, SurgeryError, TwistScript};
use census_qa::tangle::{cf_expand, ContinuedFraction, ExtendedRational, MontesinosPresentation};
use census_qa::verify::{self, Corpus, Report, VerifyOptions};

const FAIL: u8 = 1;
const INPUT: u8 = 2;
const UNDECIDED: u8 = 3;

#[derive(Parser)]
#[command(name = "verify", version, about = "Checks the quasi-alternating surgery corpus and its arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every case and knot check of the corpus.
    All {
        #[command(flatten)]
        run: RunArgs,
        /// Also write the per-check report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run one case together with its knot's checks.
    Case {
        id: String,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Braid word utilities.
    Braid {
        #[command(subcommand)]
        command: BraidCommand,
    },
    /// Rational tangle arithmetic.
    Tangle {
        #[command(subcommand)]
        command: TangleCommand,
    },
    /// Surgery scripts.
    Surgery {
        #[command(subcommand)]
        command: SurgeryCommand,
    },
    /// Search linking matrices consistent with every case on a link.
    FitLinking {
        link: String,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        bound: i64,
        #[arg(long)]
        sequential: bool,
        /// Print the solutions as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Corpus file; the built-in corpus when omitted.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Per-case limit in seconds; 0 disables it.
    #[arg(long, default_value_t = 120)]
    timeout: u64,
    #[arg(long, default_value_t = DEFAULT_STEP_CAP)]
    step_cap: u64,
    /// Confirm every group equality with the Garside normal form.
    #[arg(long)]
    cross_check: bool,
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Handle,
    NormalForm,
}

#[derive(Subcommand)]
enum BraidCommand {
    /// Decide whether two words are equal in B_n.
    Eq {
        #[arg(long = "n")]
        n: usize,
        #[arg(allow_hyphen_values = true)]
        w1: String,
        #[arg(allow_hyphen_values = true)]
        w2: String,
        #[arg(long, value_enum, default_value = "handle")]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_STEP_CAP)]
        step_cap: u64,
    },
    /// Closure invariants of a word.
    Inv {
        #[arg(long = "n")]
        n: usize,
        #[arg(allow_hyphen_values = true)]
        w: String,
    },
}

#[derive(Subcommand)]
enum TangleCommand {
    /// Value of a continued fraction `[a1,...,ak]`, or an expansion of `p/q`.
    Cf {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Determinant of a Montesinos link given as `b1/a1,b2/a2,...`.
    Mdet {
        #[arg(allow_hyphen_values = true)]
        fractions: String,
    },
}

#[derive(Subcommand)]
enum SurgeryCommand {
    /// Apply a JSON twist script and check its assertions.
    Run { file: PathBuf },
}

fn load(path: &Option<PathBuf>) -> Result<Corpus> {
    Ok(match path {
        Some(p) => verify::load_corpus(p)?,
        None => Corpus::shipped(),
    })
}

fn options(run: &RunArgs) -> VerifyOptions {
    VerifyOptions {
        exec: if run.sequential { Execution::Sequential } else { Execution::default() },
        word_problem: WordProblem { method: WordProblemMethod::HandleReduction, step_cap: run.step_cap },
        cross_check: run.cross_check,
        timeout: (run.timeout > 0).then(|| Duration::from_secs(run.timeout)),
    }
}

fn finish(report: &Report, json: &Option<PathBuf>) -> Result<u8> {
    print!("{}", report.to_text());
    if let Some(path) = json {
        std::fs::write(path, report.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report.exit_code() as u8)
}

fn word(n: usize, text: &str) -> Result<BraidWord> {
    BraidWord::parse(n, text).with_context(|| format!("word {text:?} in B_{n}"))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::All { run, json } => {
            let corpus = load(&run.corpus)?;
            finish(&verify::verify_corpus(&corpus, &options(&run)), &json)
        }
        Command::Case { id, run, json } => {
            let corpus = load(&run.corpus)?;
            finish(&verify::verify_case(&corpus, &id, &options(&run))?, &json)
        }
        Command::Braid { command: BraidCommand::Eq { n, w1, w2, method, step_cap } } => {
            let (u, v) = (word(n, &w1)?, word(n, &w2)?);
            let method = match method {
                Method::Handle => WordProblemMethod::HandleReduction,
                Method::NormalForm => WordProblemMethod::NormalForm,
            };
            match (WordProblem { method, step_cap }).equals(&u, &v) {
                Ok(true) => {
                    println!("equal");
                    Ok(0)
                }
                Ok(false) => {
                    println!("not equal");
                    Ok(FAIL)
                }
                Err(e @ BraidError::StepCapExceeded(_)) => {
                    println!("undecided: {e}");
                    Ok(UNDECIDED)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Braid { command: BraidCommand::Inv { n, w } } => {
            let w = word(n, &w)?;
            println!("strands: {}", w.strands());
            println!("length: {}", w.len());
            println!("exponent sum: {}", w.exponent_sum());
            println!("permutation: {}", w.permutation());
            println!("components: {}", closure_component_count(&w));
            println!("jones: {}", jones(&w));
            if let Ok(delta) = alexander(&w) {
                println!("alexander: {delta}");
                println!("determinant: {}", determinant(&w)?);
            }
            if let Ok(g) = genus_positive_braid(&w) {
                println!("genus: {g}");
            }
            Ok(0)
        }
        Command::Tangle { command: TangleCommand::Cf { input } } => {
            let input = input.trim();
            if input.starts_with('[') {
                let cf: ContinuedFraction = input.parse()?;
                println!("{}", cf.value()?);
            } else {
                let r: ExtendedRational = input.parse()?;
                println!("{}", cf_expand(r)?);
            }
            Ok(0)
        }
        Command::Tangle { command: TangleCommand::Mdet { fractions } } => {
            let m: MontesinosPresentation = fractions.parse()?;
            println!("{}", m.determinant());
            Ok(0)
        }
        Command::Surgery { command: SurgeryCommand::Run { file } } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let script: TwistScript =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", file.display()))?;
            match run_script(&script) {
                Ok(run) => {
                    print!("{}", run.report());
                    Ok(0)
                }
                Err(e @ SurgeryError::AssertionFailed { .. }) => {
                    println!("FAIL {e}");
                    Ok(FAIL)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::FitLinking { link, corpus, bound, sequential, json } => {
            if bound < 0 {
                bail!("bound must be nonnegative");
            }
            let corpus = load(&corpus)?;
            let exec = if sequential { Execution::Sequential } else { Execution::default() };
            let solutions = verify::fit_link(&corpus, &link, bound, exec)?;
            let classes = orientation_classes(&solutions);
            let stored = &corpus.link(&link).expect("fit_link found the link").linking;
            if json {
                println!("{}", serde_json::to_string(&solutions)?);
            } else {
                println!("{link}: {} solutions within ±{bound}, {} up to orientation", solutions.len(), classes.len());
                for m in &classes {
                    println!("  {m:?}");
                }
                println!("stored matrix {}", if solutions.contains(stored) { "fits" } else { "does not fit" });
            }
            Ok(if !solutions.is_empty() && solutions.contains(stored) { 0 } else { FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT)
        }
    }
}
