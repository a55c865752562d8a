//! `morphfst`: compile, look up, test and inspect finite-state morphologies.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use morphfst::fst::att::{read_att, write_att};
use morphfst::fst::Transducer;
use morphfst::lexc::{GlossTable, LexiconAst};
use morphfst::lookup::{compile_sources, parse_mapping, LookupError, Mode, Pipeline, PipelineConfig};
use morphfst::symtab::SymbolTable;
use morphfst::testkit::{coverage_stats, parse_suite, run_suite, Directions, StatsBounds};
use morphfst::twol::Strategy;

const GENERATOR: &str = "generator.att";
const ANALYZER: &str = "analyzer.att";
const SYMBOLS: &str = "symbols.tsv";
const GLOSSES: &str = "glosses.tsv";

#[derive(Parser)]
#[command(name = "morphfst", version, about = "Finite-state morphology toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile lexicon and rules into AT&T artifacts.
    Compile {
        #[command(flatten)]
        sources: Sources,
        #[command(flatten)]
        build: BuildOpts,
        /// Output directory.
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Read words or analyses from stdin, one per line.
    Lookup {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: BuildOpts,
        /// `up` analyzes surface forms, `down` generates from analyses.
        #[arg(long, short, value_enum, default_value = "up")]
        direction: LookupDirection,
        #[arg(long)]
        json: bool,
    },
    /// Run a paradigm test suite.
    Test {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: BuildOpts,
        #[arg(long)]
        suite: PathBuf,
        #[arg(long, default_value = "both")]
        direction: Directions,
        #[arg(long)]
        json: bool,
    },
    /// Per part-of-speech coverage table.
    Stats {
        #[command(flatten)]
        sources: Sources,
        #[command(flatten)]
        build: BuildOpts,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Write one machine in AT&T format.
    ExportAtt {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: BuildOpts,
        #[arg(long, value_enum, default_value = "generator")]
        machine: Machine,
        /// Output file; stdout when absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Read an AT&T file and write it back in canonical form.
    ImportAtt {
        file: PathBuf,
        /// Symbol table to resolve against; a fresh one otherwise.
        #[arg(long)]
        symbols: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Also write the (possibly extended) symbol table here.
        #[arg(long)]
        out_symbols: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct Sources {
    /// Lexicon source files, in order.
    #[arg(long, required = true, num_args = 1..)]
    lexc: Vec<PathBuf>,
    #[arg(long, required = true)]
    twol: PathBuf,
}

/// Either sources or a directory written by `compile`.
#[derive(Args, Clone)]
struct Input {
    #[arg(long, num_args = 1.., conflicts_with = "artifacts", requires = "twol")]
    lexc: Vec<PathBuf>,
    #[arg(long, conflicts_with = "artifacts", requires = "lexc")]
    twol: Option<PathBuf>,
    #[arg(long, required_unless_present = "lexc")]
    artifacts: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct BuildOpts {
    #[arg(long, default_value = "pedagogical")]
    mode: Mode,
    #[arg(long, default_value = "direct")]
    strategy: Strategy,
    /// Orthography map, `pedagogical -> normative` per line.
    #[arg(long)]
    ortho: Option<PathBuf>,
    /// Tolerated spellings for analysis, `strict -> variant` per line.
    #[arg(long)]
    relax: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Bounds {
    /// Longest analysis, in symbols, that enumeration visits.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    max_len: u64,
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_count: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum LookupDirection {
    Up,
    Down,
}

#[derive(Clone, Copy, ValueEnum)]
enum Machine {
    Generator,
    Analyzer,
    Lexicon,
    Rules,
}

enum Failure {
    /// Semantic failure: failing tests, bad sources, empty pipeline.
    Semantic(String),
    /// Usage or I/O problem.
    Usage(String),
}

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn mapping(path: &Option<PathBuf>) -> Result<Vec<(String, String)>, Failure> {
    match path {
        None => Ok(Vec::new()),
        Some(p) => parse_mapping(&read(p)?).map_err(|e| Failure::Semantic(format!("{}: {e}", p.display()))),
    }
}

fn config(build: &BuildOpts) -> Result<PipelineConfig, Failure> {
    Ok(PipelineConfig {
        mode: build.mode,
        strategy: build.strategy,
        ortho: mapping(&build.ortho)?,
        relax: mapping(&build.relax)?,
    })
}

fn semantic(e: impl std::fmt::Display) -> Failure {
    Failure::Semantic(e.to_string())
}

fn from_sources(lexc: &[PathBuf], twol: &Path, build: &BuildOpts) -> Result<(Pipeline, LexiconAst), Failure> {
    let texts: Vec<(String, String)> = lexc
        .iter()
        .map(|p| Ok((p.display().to_string(), read(p)?)))
        .collect::<Result<_, Failure>>()?;
    let files: Vec<(&str, &str)> = texts.iter().map(|(n, t)| (n.as_str(), t.as_str())).collect();
    let rules = read(twol)?;
    compile_sources(&files, &rules, &config(build)?).map_err(|e| match e {
        LookupError::Twol(e) => Failure::Semantic(format!("{}: {e}", twol.display())),
        e => semantic(e),
    })
}

fn from_artifacts(dir: &Path, build: &BuildOpts) -> Result<Pipeline, Failure> {
    let mut table = SymbolTable::from_tsv(&read(&dir.join(SYMBOLS))?).map_err(semantic)?;
    let mut load = |name: &str| -> Result<Transducer, Failure> {
        let path = dir.join(name);
        read_att(&read(&path)?, &mut table).map_err(|e| Failure::Semantic(format!("{}: {e}", path.display())))
    };
    let generator = load(GENERATOR)?;
    let recognizer = load(ANALYZER)?;
    let glosses = GlossTable::from_tsv(&read(&dir.join(GLOSSES))?).map_err(semantic)?;
    let mut p = Pipeline::from_parts(table, generator, recognizer, glosses, build.mode);
    p.set_relax(&mapping(&build.relax)?).map_err(semantic)?;
    Ok(p)
}

fn load(input: &Input, build: &BuildOpts) -> Result<Pipeline, Failure> {
    match (&input.artifacts, &input.twol) {
        (Some(dir), _) => from_artifacts(dir, build),
        (None, Some(twol)) => Ok(from_sources(&input.lexc, twol, build)?.0),
        (None, None) => Err(Failure::Usage("either --artifacts or --lexc/--twol is required".into())),
    }
}

fn warn(p: &Pipeline) {
    for d in &p.diagnostics {
        eprintln!("warning: {d}");
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write(path, text),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn cmd_compile(sources: &Sources, build: &BuildOpts, out: &Path) -> Outcome {
    let (p, _) = from_sources(&sources.lexc, &sources.twol, build)?;
    warn(&p);
    fs::create_dir_all(out).map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
    write(&out.join(GENERATOR), &write_att(&p.generator, &p.table))?;
    write(&out.join(ANALYZER), &write_att(&p.recognizer, &p.table))?;
    write(&out.join(SYMBOLS), &p.table.to_tsv())?;
    write(&out.join(GLOSSES), &p.glosses.to_tsv())?;
    Ok(ExitCode::SUCCESS)
}

fn lookup_line(p: &Pipeline, line: &str, direction: LookupDirection, json: bool) -> String {
    let word = line.trim_end_matches('\r');
    let results: Vec<(String, bool, Vec<String>)> = match direction {
        LookupDirection::Down => p
            .generate(word)
            .map(|v| v.into_iter().map(|s| (s, false, Vec::new())).collect())
            .unwrap_or_default(),
        LookupDirection::Up => p
            .analyze(word)
            .map(|v| v.into_iter().map(|a| (a.text, a.relaxed, a.glosses)).collect())
            .unwrap_or_default(),
    };
    if json {
        let items: Vec<serde_json::Value> = results
            .iter()
            .map(|(r, relaxed, glosses)| serde_json::json!({"result": r, "relaxed": relaxed, "glosses": glosses}))
            .collect();
        return serde_json::json!({"input": word, "results": items}).to_string() + "\n";
    }
    if results.is_empty() {
        return format!("{word}\t+?\n");
    }
    results
        .iter()
        .map(|(r, relaxed, _)| {
            if *relaxed {
                format!("{word}\t{r}\trelaxed\n")
            } else {
                format!("{word}\t{r}\n")
            }
        })
        .collect()
}

fn cmd_lookup(input: &Input, build: &BuildOpts, direction: LookupDirection, json: bool) -> Outcome {
    let p = load(input, build)?;
    let lines: Vec<String> = io::stdin()
        .lock()
        .lines()
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let outputs: Vec<String> = lines.par_iter().map(|l| lookup_line(&p, l, direction, json)).collect();
    let mut stdout = io::stdout().lock();
    for o in outputs {
        stdout.write_all(o.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_test(input: &Input, build: &BuildOpts, suite: &Path, directions: Directions, json: bool) -> Outcome {
    let source = read(suite)?;
    let cases = parse_suite(&source).map_err(|e| Failure::Usage(format!("{}: {e}", suite.display())))?;
    let p = load(input, build)?;
    let report = run_suite(&p, &cases, directions);
    let text = if json { report.to_json_lines() } else { report.to_text() };
    emit(&None, &text)?;
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_stats(sources: &Sources, build: &BuildOpts, bounds: &Bounds) -> Outcome {
    let (p, ast) = from_sources(&sources.lexc, &sources.twol, build)?;
    let bounds = StatsBounds {
        max_len: bounds.max_len as usize,
        max_count: bounds.max_count as usize,
    };
    emit(&None, &coverage_stats(&ast, &p, bounds).to_string())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(input: &Input, build: &BuildOpts, machine: Machine, out: &Option<PathBuf>) -> Outcome {
    let p = load(input, build)?;
    let t = match machine {
        Machine::Generator => &p.generator,
        Machine::Analyzer => &p.recognizer,
        Machine::Lexicon | Machine::Rules if input.artifacts.is_some() => {
            return Err(Failure::Usage("lexicon and rules machines need --lexc/--twol sources".into()))
        }
        Machine::Lexicon => &p.lexicon,
        Machine::Rules => &p.rules,
    };
    emit(out, &write_att(t, &p.table))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_import(file: &Path, symbols: &Option<PathBuf>, out: &Option<PathBuf>, out_symbols: &Option<PathBuf>) -> Outcome {
    let mut table = match symbols {
        Some(path) => SymbolTable::from_tsv(&read(path)?).map_err(semantic)?,
        None => SymbolTable::new(),
    };
    let t = read_att(&read(file)?, &mut table).map_err(|e| Failure::Semantic(format!("{}: {e}", file.display())))?;
    emit(out, &write_att(&t, &table))?;
    if let Some(path) = out_symbols {
        write(path, &table.to_tsv())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Compile { sources, build, out } => cmd_compile(sources, build, out),
        Command::Lookup { input, build, direction, json } => cmd_lookup(input, build, *direction, *json),
        Command::Test { input, build, suite, direction, json } => cmd_test(input, build, suite, *direction, *json),
        Command::Stats { sources, build, bounds } => cmd_stats(sources, build, bounds),
        Command::ExportAtt { input, build, machine, out } => cmd_export(input, build, *machine, out),
        Command::ImportAtt { file, symbols, out, out_symbols } => cmd_import(file, symbols, out, out_symbols),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Semantic(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
