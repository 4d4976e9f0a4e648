//! Command-line entry point. Every subcommand reads JSON files, writes a
//! JSON (or plain text) report to stdout, and encodes its outcome in the
//! exit status:
//!
//! * 0 — all checks passed / affirmative result
//! * 1 — definitive negative result (condition not satisfied, element
//!   certified not a square)
//! * 2 — an exact-identity assertion failed
//! * 3 — resource limits hit (enumeration or closure cap, degree bound)
//! * 64 — usage errors, unreadable or malformed input
//!
//! Reports depend only on the arguments and the seed, never on wall
//! time, so identical invocations produce byte-identical output.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use minigen_core::construct::{self, ConstructError, Instance, LConditionData, LemmaKind};
use minigen_core::perm::PermError;
use minigen_core::portrait::SquareObstruction;
use minigen_core::pscert::{self, PsError};
use minigen_core::suite;
use minigen_core::wreath::WreathError;
use minigen_core::{MealyAutomorphism, PermutationGroup, Portrait};

#[derive(Parser)]
#[command(
    name = "minigen",
    about = "PS-condition checking, wreath-product element constructions, \
             and tree-automorphism analysis",
    version
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the PS condition for a permutation group file.
    PsCheck {
        group: PathBuf,
        /// Cap on group enumeration.
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
    /// Replay one element construction over an instance file.
    LemmaReplay {
        instance: PathBuf,
        /// Which construction to replay: t, u, comm, power, closure, minimal.
        #[arg(long)]
        lemma: String,
        /// Number of random inputs for the randomized constructions.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cap on closure sizes.
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
    /// Activity counts of a machine, level by level.
    Theta {
        machine: PathBuf,
        /// Deepest level to count.
        #[arg(short = 'N', long = "levels", default_value_t = 20)]
        levels: usize,
    },
    /// Classify the activity growth of a machine.
    Classify { machine: PathBuf },
    /// Level parities and the square obstruction of a portrait.
    Parity { portrait: PathBuf },
    /// Split a portrait into its part above a level and a level stabilizer.
    Decompose {
        portrait: PathBuf,
        #[arg(short = 'k', long = "level")]
        level: usize,
    },
    /// Compose two machines (the first applied after the second) and
    /// write the canonical product machine.
    Compose {
        a: PathBuf,
        b: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Run the full verification battery.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

const EXIT_NEGATIVE: u8 = 1;
const EXIT_ASSERTION: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_USAGE: u8 = 64;

fn fail(code: u8, message: String) -> u8 {
    eprintln!("error: {message}");
    code
}

fn perm_error_code(err: &PermError) -> u8 {
    match err {
        PermError::GroupTooLarge { .. } | PermError::DegreeOverflow { .. } => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

fn construct_error_code(err: &ConstructError) -> u8 {
    match err {
        ConstructError::AssertionFailure { .. } => EXIT_ASSERTION,
        ConstructError::NotExpressible(_) | ConstructError::SearchFailed(_) => EXIT_ASSERTION,
        ConstructError::InvalidData(_) => EXIT_USAGE,
        ConstructError::Perm(e) => perm_error_code(e),
        ConstructError::Ps(e) => ps_error_code(e),
        ConstructError::Wreath(WreathError::ClosureTooLarge { .. }) => EXIT_RESOURCE,
        ConstructError::Wreath(WreathError::BaseTooLarge { .. }) => EXIT_RESOURCE,
        ConstructError::Wreath(WreathError::Perm(e)) => perm_error_code(e),
        ConstructError::Wreath(_) => EXIT_USAGE,
    }
}

fn ps_error_code(err: &PsError) -> u8 {
    match err {
        PsError::NotSatisfied(_) => EXIT_NEGATIVE,
        PsError::SteeringNotFound(_) => EXIT_NEGATIVE,
        PsError::DegreeTooLarge { .. } => EXIT_RESOURCE,
        PsError::Perm(e) => perm_error_code(e),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::PsCheck { group, cap } => {
            let group: PermutationGroup = match read_json(&group) {
                Ok(g) => g,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            let group = group.with_cap(cap);
            match pscert::find_witness(&group) {
                Ok(witness) => {
                    let file = witness.to_file();
                    match cli.format {
                        Format::Json => {
                            println!("{}", serde_json::to_string(&file).unwrap())
                        }
                        Format::Text => println!(
                            "PS satisfied: x1 = {:?}, x2 = {:?}, special = {:?}",
                            file.x1, file.x2, file.a_special
                        ),
                    }
                    0
                }
                Err(PsError::NotSatisfied(reason)) => {
                    match cli.format {
                        Format::Json => println!(
                            "{}",
                            serde_json::json!({
                                "satisfied": false,
                                "reason": reason.to_string(),
                            })
                        ),
                        Format::Text => println!("PS not satisfied: {reason}"),
                    }
                    EXIT_NEGATIVE
                }
                Err(err) => fail(ps_error_code(&err), err.to_string()),
            }
        }
        Command::LemmaReplay {
            instance,
            lemma,
            trials,
            seed,
            cap,
        } => {
            let kind = match LemmaKind::parse(&lemma) {
                Some(k) => k,
                None => {
                    return fail(
                        EXIT_USAGE,
                        format!("unknown lemma {lemma:?}; use t|u|comm|power|closure|minimal"),
                    )
                }
            };
            let data: LConditionData = match read_json(&instance) {
                Ok(d) => d,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            let inst = match Instance::prepare(data) {
                Ok(i) => i,
                Err(err) => return fail(construct_error_code(&err), err.to_string()),
            };
            let validation = construct::validate(&inst);
            match construct::run_lemma(&inst, kind, trials, seed, cap) {
                Ok(report) => {
                    let all_passed = report.all_passed;
                    match cli.format {
                        Format::Json => println!(
                            "{}",
                            serde_json::json!({
                                "validation": validation,
                                "lemmas": [report],
                            })
                        ),
                        Format::Text => {
                            println!(
                                "validation: {} (branch {:?})",
                                if validation.essential_passed {
                                    "ok"
                                } else {
                                    "FAILED"
                                },
                                validation.branch
                            );
                            println!(
                                "{}: {} over {} instances{}",
                                report.lemma,
                                if report.all_passed { "ok" } else { "FAILED" },
                                report.instances_checked,
                                report
                                    .first_failure
                                    .map(|f| format!(" ({f})"))
                                    .unwrap_or_default()
                            );
                        }
                    }
                    if all_passed {
                        0
                    } else {
                        EXIT_ASSERTION
                    }
                }
                Err(err) => fail(construct_error_code(&err), err.to_string()),
            }
        }
        Command::Theta { machine, levels } => {
            let machine: MealyAutomorphism = match read_json(&machine) {
                Ok(m) => m,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            let profile = machine.activity_profile(levels);
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "levels": levels,
                        "counts": profile.counts,
                    })
                ),
                Format::Text => {
                    for (n, c) in profile.counts.iter().enumerate() {
                        println!("level {n}: {c}");
                    }
                }
            }
            0
        }
        Command::Classify { machine } => {
            let machine: MealyAutomorphism = match read_json(&machine) {
                Ok(m) => m,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            let class = machine.classify_activity();
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "classification": class,
                        "states": machine.state_count(),
                        "finitary_depth": machine.finitary_depth(),
                    })
                ),
                Format::Text => println!("{class:?}"),
            }
            0
        }
        Command::Parity { portrait } => {
            let portrait: Portrait = match read_json(&portrait) {
                Ok(p) => p,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            let parities: Vec<i32> = (0..portrait.depth())
                .map(|n| portrait.level_parity(n).unwrap())
                .collect();
            let obstruction = portrait.square_obstruction();
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "parities": parities,
                        "obstruction": obstruction,
                    })
                ),
                Format::Text => match obstruction {
                    SquareObstruction::NotASquare(n) => {
                        println!("not a square: level {n} has parity -1")
                    }
                    SquareObstruction::Inconclusive => println!("inconclusive: all parities +1"),
                },
            }
            match obstruction {
                SquareObstruction::NotASquare(_) => EXIT_NEGATIVE,
                SquareObstruction::Inconclusive => 0,
            }
        }
        Command::Decompose { portrait, level } => {
            let portrait: Portrait = match read_json(&portrait) {
                Ok(p) => p,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            match portrait.decompose_at(level) {
                Ok((top, rest)) => {
                    match cli.format {
                        Format::Json => {
                            println!("{}", serde_json::json!({ "top": top, "rest": rest }))
                        }
                        Format::Text => println!(
                            "split at level {level}: top acts above, rest fixes {level} levels"
                        ),
                    }
                    0
                }
                Err(err) => fail(EXIT_USAGE, err.to_string()),
            }
        }
        Command::Compose { a, b, out } => {
            let a: MealyAutomorphism = match read_json(&a) {
                Ok(m) => m,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            let b: MealyAutomorphism = match read_json(&b) {
                Ok(m) => m,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            match a.product(&b) {
                Ok(product) => {
                    let json = serde_json::to_string(&product).unwrap();
                    if let Err(e) = fs::write(&out, &json) {
                        return fail(EXIT_USAGE, format!("cannot write {}: {e}", out.display()));
                    }
                    match cli.format {
                        Format::Json => println!(
                            "{}",
                            serde_json::json!({
                                "states": product.state_count(),
                                "alphabet": product.alphabet(),
                                "identity": product.is_identity(),
                            })
                        ),
                        Format::Text => println!(
                            "wrote product with {} states to {}",
                            product.state_count(),
                            out.display()
                        ),
                    }
                    0
                }
                Err(err) => fail(EXIT_USAGE, err.to_string()),
            }
        }
        Command::Suite { seed } => {
            let report = suite::run_all(seed);
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&report).unwrap()),
                Format::Text => {
                    for c in &report.criteria {
                        println!(
                            "criterion {} ({}): {}",
                            c.id,
                            c.name,
                            if c.passed { "PASS" } else { "FAIL" }
                        );
                        for line in &c.details {
                            println!("  {line}");
                        }
                    }
                }
            }
            if report.all_passed {
                0
            } else {
                EXIT_ASSERTION
            }
        }
    }
}

fn main() -> ExitCode {
    // die quietly when the consumer closes the pipe
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help and version requests are not usage errors
            use clap::error::ErrorKind;
            let benign = matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            err.print().expect("stderr is writable");
            return if benign {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_USAGE)
            };
        }
    };
    ExitCode::from(run(cli))
}
