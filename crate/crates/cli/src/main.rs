//! `hyloc` - command-line front door for the hybrid-logic workbench.
//!
//! Exit codes: 0 success / property holds; 1 definitive negative (an axiom
//! fails, a goal is counter-satisfiable, a file is malformed); 2 usage or
//! file errors; 3 unknown / timeout / prover trouble.

use clap::{Args, Parser, Subcommand};
use hyloc_core::fol::encode_task;
use hyloc_core::kripke::{
    check_constraints, check_theory, find_countermodel, SearchBounds, SearchError, SearchOutcome,
};
use hyloc_core::prover::{prove_goal, ProverConfig, ProverRegistry, Strategy, VerdictStatus};
use hyloc_core::syntax::{
    parse_goal, parse_model_named, parse_spec_named, print_model, HybridBlock, ParseOptions,
    SpecFile,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hyloc",
    version,
    about = "Workbench for hybridized specification logics: parse, model-check, encode to TPTP, prove"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpecSelector {
    /// Specification file (.hspec)
    spec_path: PathBuf,
    /// Name of the hlogic block to use (defaults to the only one)
    #[arg(long = "spec")]
    spec_name: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse specification files and report diagnostics
    Parse {
        /// Files to parse
        paths: Vec<PathBuf>,
        /// Report only the first diagnostic per file
        #[arg(long)]
        first_error_only: bool,
    },
    /// Check a Kripke model against a spec: constraints, then every axiom
    Check {
        #[command(flatten)]
        selector: SpecSelector,
        /// Model file (.hmodel)
        model_path: PathBuf,
    },
    /// Encode a spec (and optional goal) into an unsorted TPTP FOF problem
    Encode {
        #[command(flatten)]
        selector: SpecSelector,
        /// Goal sentence to encode as the conjecture
        #[arg(long, conflicts_with = "all_axioms")]
        goal: Option<String>,
        /// Emit the axioms only, with no conjecture
        #[arg(long)]
        all_axioms: bool,
        /// Output path for the TPTP problem
        #[arg(long)]
        out: PathBuf,
        /// Also write the many-sorted intermediate next to the output
        #[arg(long)]
        dump_sorted: bool,
    },
    /// Prove goals against a spec via an external prover and/or bounded search
    Prove {
        #[command(flatten)]
        selector: SpecSelector,
        /// Goal sentence (repeatable)
        #[arg(long, required = true)]
        goal: Vec<String>,
        /// external, bounded, or both
        #[arg(long, default_value = "both")]
        strategy: String,
        /// Prover id from the registry (default: first configured)
        #[arg(long)]
        prover: Option<String>,
        /// Per-goal prover timeout in seconds
        #[arg(long)]
        timeout: Option<u64>,
        /// Bounded-search world limit
        #[arg(long, default_value_t = 2)]
        max_worlds: usize,
        /// Bounded-search carrier limit
        #[arg(long, default_value_t = 1)]
        max_carrier: u32,
        /// Goals proved concurrently
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Search for a bounded countermodel of a goal under the spec's axioms
    Countermodel {
        #[command(flatten)]
        selector: SpecSelector,
        /// Goal sentence to refute
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 2)]
        max_worlds: usize,
        #[arg(long, default_value_t = 1)]
        max_carrier: u32,
        /// Write the found model here (stdout otherwise)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Parse {
            paths,
            first_error_only,
        } => cmd_parse(&paths, first_error_only),
        Command::Check {
            selector,
            model_path,
        } => cmd_check(&selector, &model_path),
        Command::Encode {
            selector,
            goal,
            all_axioms,
            out,
            dump_sorted,
        } => cmd_encode(&selector, goal.as_deref(), all_axioms, &out, dump_sorted),
        Command::Prove {
            selector,
            goal,
            strategy,
            prover,
            timeout,
            max_worlds,
            max_carrier,
            jobs,
        } => cmd_prove(
            &selector,
            &goal,
            &strategy,
            prover.as_deref(),
            timeout,
            max_worlds,
            max_carrier,
            jobs,
        ),
        Command::Countermodel {
            selector,
            goal,
            max_worlds,
            max_carrier,
            out,
        } => cmd_countermodel(&selector, &goal, max_worlds, max_carrier, out.as_deref()),
    };
    ExitCode::from(code)
}

fn read_file(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_USAGE
    })
}

fn load_spec(path: &Path, opts: &ParseOptions) -> Result<SpecFile, u8> {
    let text = read_file(path)?;
    match parse_spec_named(&text, &path.display().to_string(), opts) {
        Ok(spec) => Ok(spec),
        Err(diagnostics) => {
            for d in diagnostics {
                eprintln!("{d}");
            }
            Err(EXIT_NEGATIVE)
        }
    }
}

fn select_block<'a>(spec: &'a SpecFile, selector: &SpecSelector) -> Result<&'a HybridBlock, u8> {
    match &selector.spec_name {
        Some(name) => spec.find_hybrid(name).ok_or_else(|| {
            eprintln!(
                "error: no hlogic spec named `{name}` in {}",
                selector.spec_path.display()
            );
            EXIT_USAGE
        }),
        None => {
            let blocks: Vec<&HybridBlock> = spec.hybrid_blocks().collect();
            match blocks.len() {
                1 => Ok(blocks[0]),
                0 => {
                    eprintln!(
                        "error: {} contains no hlogic spec",
                        selector.spec_path.display()
                    );
                    Err(EXIT_USAGE)
                }
                n => {
                    eprintln!(
                        "error: {} contains {n} hlogic specs; pick one with --spec",
                        selector.spec_path.display()
                    );
                    Err(EXIT_USAGE)
                }
            }
        }
    }
}

fn parse_goal_or_exit(
    text: &str,
    block: &HybridBlock,
) -> Result<hyloc_core::hybrid::HybridSentence, u8> {
    parse_goal(text, &block.theory.signature).map_err(|diagnostics| {
        for d in diagnostics {
            eprintln!("{d}");
        }
        EXIT_USAGE
    })
}

fn cmd_parse(paths: &[PathBuf], first_error_only: bool) -> u8 {
    if paths.is_empty() {
        eprintln!("error: no input files");
        return EXIT_USAGE;
    }
    let opts = ParseOptions {
        stop_at_first_error: first_error_only,
    };
    let mut worst = EXIT_OK;
    for path in paths {
        let text = match read_file(path) {
            Ok(t) => t,
            Err(code) => {
                worst = worst.max(code);
                continue;
            }
        };
        match parse_spec_named(&text, &path.display().to_string(), &opts) {
            Ok(spec) => {
                println!(
                    "{}: ok: {} specs, {} axioms",
                    path.display(),
                    spec.blocks.len(),
                    spec.axiom_count()
                );
            }
            Err(diagnostics) => {
                for d in &diagnostics {
                    println!("{d}");
                }
                worst = worst.max(EXIT_NEGATIVE);
            }
        }
    }
    worst
}

fn cmd_check(selector: &SpecSelector, model_path: &Path) -> u8 {
    let spec = match load_spec(&selector.spec_path, &ParseOptions::default()) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let block = match select_block(&spec, selector) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let model_text = match read_file(model_path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let model = match parse_model_named(
        &model_text,
        &model_path.display().to_string(),
        &block.theory.signature,
    ) {
        Ok(m) => m,
        Err(diagnostics) => {
            for d in diagnostics {
                eprintln!("{d}");
            }
            return EXIT_USAGE;
        }
    };
    let violations = check_constraints(&model, &block.constraints);
    if !violations.is_empty() {
        for v in &violations {
            println!("constraint violation: {v}");
        }
        return EXIT_NEGATIVE;
    }
    println!("constraints: ok");
    let report = match check_theory(&model, &block.theory) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    for axiom in &report.axioms {
        if axiom.holds {
            println!("axiom {}: ok", axiom.index + 1);
        } else {
            let witness = axiom
                .witness
                .as_ref()
                .map(|w| format!(" (witness: {w})"))
                .unwrap_or_default();
            println!("axiom {}: FAIL{witness}", axiom.index + 1);
        }
    }
    let passed = report.axioms.iter().filter(|a| a.holds).count();
    println!("{passed}/{} axioms hold", report.axioms.len());
    if report.all_hold() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn cmd_encode(
    selector: &SpecSelector,
    goal: Option<&str>,
    all_axioms: bool,
    out: &Path,
    dump_sorted: bool,
) -> u8 {
    if goal.is_none() && !all_axioms {
        eprintln!("error: pass --goal <sentence> or --all-axioms");
        return EXIT_USAGE;
    }
    let spec = match load_spec(&selector.spec_path, &ParseOptions::default()) {
        Ok(s) => s,
        Err(code) => return code.max(EXIT_USAGE),
    };
    let block = match select_block(&spec, selector) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let goal_sentence = match goal {
        Some(text) => match parse_goal_or_exit(text, block) {
            Ok(g) => Some(g),
            Err(code) => return code,
        },
        None => None,
    };
    let task = encode_task(&block.theory, &block.constraints, goal_sentence.as_ref());
    let tptp = match hyloc_core::fol::emit_tptp(&task) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = std::fs::write(out, &tptp) {
        eprintln!("error: cannot write {}: {e}", out.display());
        return EXIT_USAGE;
    }
    println!(
        "wrote {} ({} axioms{})",
        out.display(),
        task.unsorted.axioms.len(),
        if task.unsorted_goal.is_some() {
            " + conjecture"
        } else {
            ""
        }
    );
    if dump_sorted {
        let mut dump = task.sorted.to_string();
        if let Some(goal) = &task.sorted_goal {
            dump.push_str(&format!("goal {}: {}\n", goal.name, goal.formula));
        }
        let sorted_path = out.with_extension("sorted.txt");
        if let Err(e) = std::fs::write(&sorted_path, dump) {
            eprintln!("error: cannot write {}: {e}", sorted_path.display());
            return EXIT_USAGE;
        }
        println!("wrote {}", sorted_path.display());
    }
    EXIT_OK
}

fn resolve_prover(requested: Option<&str>, timeout: Option<u64>) -> Result<ProverConfig, String> {
    let registry = ProverRegistry::from_env().map_err(|e| e.to_string())?;
    let cfg = match requested {
        Some(id) => registry.get(id).cloned().ok_or_else(|| {
            format!(
                "prover `{id}` is not configured (set {})",
                hyloc_core::prover::PROVERS_ENV
            )
        })?,
        None => registry.default_prover().cloned().ok_or_else(|| {
            format!(
                "no prover configured: set {} or install one of eprover/vampire/meancop on PATH",
                hyloc_core::prover::PROVERS_ENV
            )
        })?,
    };
    Ok(match timeout {
        Some(secs) => ProverConfig {
            timeout: Duration::from_secs(secs.max(1)),
            ..cfg
        },
        None => cfg,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_prove(
    selector: &SpecSelector,
    goals: &[String],
    strategy: &str,
    prover: Option<&str>,
    timeout: Option<u64>,
    max_worlds: usize,
    max_carrier: u32,
    jobs: usize,
) -> u8 {
    let spec = match load_spec(&selector.spec_path, &ParseOptions::default()) {
        Ok(s) => s,
        Err(code) => return code.max(EXIT_USAGE),
    };
    let block = match select_block(&spec, selector) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let bounds = SearchBounds::new(max_worlds, max_carrier);
    let strategy = match strategy {
        "bounded" => Strategy::Bounded(bounds),
        "external" | "both" => {
            let cfg = match resolve_prover(prover, timeout) {
                Ok(c) => c,
                Err(message) => {
                    eprintln!("error: {message}");
                    return EXIT_UNKNOWN;
                }
            };
            if strategy == "external" {
                Strategy::External(cfg)
            } else {
                Strategy::Both {
                    prover: cfg,
                    bounds,
                    parallel: false,
                }
            }
        }
        other => {
            eprintln!("error: unknown strategy `{other}` (external, bounded, both)");
            return EXIT_USAGE;
        }
    };
    let mut parsed_goals = Vec::new();
    for text in goals {
        match parse_goal_or_exit(text, block) {
            Ok(g) => parsed_goals.push((text.clone(), g)),
            Err(code) => return code,
        }
    }
    let jobs = jobs.max(1);
    let mut verdicts: Vec<Option<hyloc_core::prover::ProverVerdict>> =
        (0..parsed_goals.len()).map(|_| None).collect();
    for chunk_start in (0..parsed_goals.len()).step_by(jobs) {
        let chunk_end = (chunk_start + jobs).min(parsed_goals.len());
        let results: Vec<_> = std::thread::scope(|scope| {
            let handles: Vec<_> = parsed_goals[chunk_start..chunk_end]
                .iter()
                .map(|(_, goal)| {
                    let strategy = &strategy;
                    scope.spawn(move || {
                        prove_goal(&block.theory, &block.constraints, goal, strategy)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("prover thread panicked"))
                .collect()
        });
        for (offset, result) in results.into_iter().enumerate() {
            match result {
                Ok(v) => verdicts[chunk_start + offset] = Some(v),
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            }
        }
    }
    let mut worst = EXIT_OK;
    for ((text, _), verdict) in parsed_goals.iter().zip(verdicts) {
        let v = verdict.expect("verdict recorded");
        let detail = if v.detail.is_empty() {
            String::new()
        } else {
            format!(" -- {}", v.detail)
        };
        println!(
            "{} {:.3}s {}{}{}",
            v.status.label(),
            v.wall_time.as_secs_f64(),
            v.prover,
            if goals.len() > 1 {
                format!(" [{text}]")
            } else {
                String::new()
            },
            detail
        );
        worst = worst.max(match v.status {
            VerdictStatus::Proved => EXIT_OK,
            VerdictStatus::CounterSatisfiable => EXIT_NEGATIVE,
            VerdictStatus::Timeout | VerdictStatus::Unknown | VerdictStatus::ProverError => {
                EXIT_UNKNOWN
            }
        });
    }
    worst
}

fn cmd_countermodel(
    selector: &SpecSelector,
    goal: &str,
    max_worlds: usize,
    max_carrier: u32,
    out: Option<&Path>,
) -> u8 {
    if max_worlds == 0 || max_carrier == 0 {
        eprintln!("error: bounds must be at least 1");
        return EXIT_USAGE;
    }
    let spec = match load_spec(&selector.spec_path, &ParseOptions::default()) {
        Ok(s) => s,
        Err(code) => return code.max(EXIT_USAGE),
    };
    let block = match select_block(&spec, selector) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let goal_sentence = match parse_goal_or_exit(goal, block) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let bounds = SearchBounds::new(max_worlds, max_carrier);
    match find_countermodel(
        &block.theory.signature,
        &block.constraints,
        &block.theory.axioms,
        &goal_sentence,
        &bounds,
    ) {
        Ok(SearchOutcome::Found { model, world }) => {
            let text = print_model("countermodel", &model);
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return EXIT_USAGE;
                    }
                    println!(
                        "countermodel with {} worlds written to {} (goal fails at `{}`)",
                        model.worlds.len(),
                        path.display(),
                        model.worlds[world]
                    );
                }
                None => {
                    println!("-- countermodel (goal fails at `{}`)", model.worlds[world]);
                    print!("{text}");
                }
            }
            EXIT_OK
        }
        Ok(SearchOutcome::NoneWithinBounds) => {
            println!("none within bounds");
            EXIT_UNKNOWN
        }
        Err(SearchError::BadBounds) => {
            eprintln!("error: bounds must be at least 1");
            EXIT_USAGE
        }
        Err(e @ SearchError::BoundsTooLarge { .. }) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(SearchError::Eval(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
