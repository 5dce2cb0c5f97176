//! The `punkt` command-line front end.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{self, Analysis, AnalysisOptions, AnalysisReport, Outcome};
use crate::config::Config;
use crate::corpus;
use crate::exec::Execution;
use crate::fitting::{FitRecord, FitWindow};
use crate::output::{self, DumpOptions};
use crate::segmentation::MarkClass;

#[derive(Debug, Parser)]
#[command(
    name = "punkt",
    version,
    about = "Punctuation segment statistics and rank-size fits for plain text"
)]
pub struct Cli {
    /// Configuration file (TOML); defaults to $PUNKT_CONFIG when set.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    pub show_config: bool,

    /// Disable data-parallel execution.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segment one file by punctuation class, rank the lengths and fit them.
    Analyze(AnalyzeArgs),
    /// Analyze several files and tabulate them side by side.
    Compare(CompareArgs),
    /// Word frequency-rank analysis only.
    Zipf(ZipfArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Dot,
    Comma,
    Colon,
    Semicolon,
    Exclam,
    Question,
    Unit,
    All,
}

impl ClassArg {
    fn classes(self) -> Vec<MarkClass> {
        match self {
            ClassArg::Dot => vec![MarkClass::Dot],
            ClassArg::Comma => vec![MarkClass::Comma],
            ClassArg::Colon => vec![MarkClass::Colon],
            ClassArg::Semicolon => vec![MarkClass::Semicolon],
            ClassArg::Exclam => vec![MarkClass::Exclamation],
            ClassArg::Question => vec![MarkClass::Question],
            ClassArg::Unit => vec![MarkClass::UnitOfThought],
            ClassArg::All => MarkClass::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub file: Option<PathBuf>,
    #[arg(long, default_value = "punkt-out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = ClassArg::All)]
    pub class: ClassArg,
    /// Override the lower fit rank for the selected classes.
    #[arg(long)]
    pub fit_min: Option<usize>,
    /// Override the upper fit rank for the selected classes.
    #[arg(long)]
    pub fit_max: Option<usize>,
    #[arg(long)]
    pub no_strip_heads: bool,
    #[arg(long)]
    pub no_boilerplate: bool,
    /// Also fit a stretched exponential per class.
    #[arg(long)]
    pub stretched: bool,
    /// Also locate the large-rank break per class.
    #[arg(long)]
    pub breaks: bool,
    /// Write <class>.segments.csv files.
    #[arg(long)]
    pub dump_segments: bool,
    /// Write <class>.lts.csv and words.fts.csv files.
    #[arg(long)]
    pub dump_series: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub files: Vec<PathBuf>,
    #[arg(long, default_value = "punkt-out")]
    pub out: PathBuf,
    #[arg(long)]
    pub no_strip_heads: bool,
    #[arg(long)]
    pub no_boilerplate: bool,
}

#[derive(Debug, Args)]
pub struct ZipfArgs {
    pub file: Option<PathBuf>,
    #[arg(long, default_value = "punkt-out")]
    pub out: PathBuf,
    #[arg(long)]
    pub fit_min: Option<usize>,
    #[arg(long)]
    pub fit_max: Option<usize>,
    #[arg(long)]
    pub no_strip_heads: bool,
    #[arg(long)]
    pub no_boilerplate: bool,
}

/// Parse arguments, run, and map errors to a non-zero exit status.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("punkt: error: {}", error_chain(&e));
            ExitCode::FAILURE
        }
    }
}

/// Join the cause chain, skipping causes the previous message already ends with.
fn error_chain(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if out.ends_with(&text) {
            continue;
        }
        if !out.is_empty() {
            out.push_str(": ");
        }
        out.push_str(&text);
    }
    out
}

/// Execute a parsed command line, returning what would go to stdout.
pub fn run(cli: &Cli) -> anyhow::Result<String> {
    let mut config = Config::resolve(cli.config.as_deref()).context("config")?;
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    if let Some(cmd) = &cli.command {
        apply_flags(&mut config, cmd);
    }
    config.validate().context("config")?;
    if cli.show_config {
        return Ok(config.to_toml());
    }
    match &cli.command {
        Some(Command::Analyze(args)) => {
            let file = args
                .file
                .as_deref()
                .context("analyze: an input file is required")?;
            let mut options = AnalysisOptions::from_config(&config);
            options.classes = args.class.classes();
            let dumps = DumpOptions {
                segments: args.dump_segments,
                series: args.dump_series,
            };
            let analysis = cmd_analyze(file, &args.out, &config, &options, dumps, exec)?;
            Ok(analysis_summary(&analysis.report))
        }
        Some(Command::Compare(args)) => {
            let comparison = cmd_compare(&args.files, &args.out, &config, exec)?;
            Ok(comparison_summary(&comparison))
        }
        Some(Command::Zipf(args)) => {
            let file = args
                .file
                .as_deref()
                .context("zipf: an input file is required")?;
            let report = cmd_zipf(file, &args.out, &config)?;
            Ok(zipf_summary(&report))
        }
        None => bail!("no command given (try `punkt --help`)"),
    }
}

fn override_window(window: &mut FitWindow, fit_min: Option<usize>, fit_max: Option<usize>) {
    if let Some(r_min) = fit_min {
        window.r_min = r_min;
    }
    if let Some(r_max) = fit_max {
        window.r_max = r_max;
    }
}

/// Flags win over the configuration file.
fn apply_flags(config: &mut Config, command: &Command) {
    let (no_heads, no_boilerplate) = match command {
        Command::Analyze(a) => (a.no_strip_heads, a.no_boilerplate),
        Command::Compare(a) => (a.no_strip_heads, a.no_boilerplate),
        Command::Zipf(a) => (a.no_strip_heads, a.no_boilerplate),
    };
    if no_heads {
        config.strip_heads = false;
    }
    if no_boilerplate {
        config.strip_boilerplate = false;
    }
    match command {
        Command::Analyze(a) => {
            config.stretched |= a.stretched;
            config.breaks |= a.breaks;
            for class in a.class.classes() {
                override_window(config.windows.get_mut(class), a.fit_min, a.fit_max);
            }
        }
        Command::Zipf(a) => override_window(&mut config.windows.words, a.fit_min, a.fit_max),
        Command::Compare(_) => {}
    }
}

fn load_clean(
    path: &Path,
    source_id: Option<&str>,
    config: &Config,
) -> anyhow::Result<corpus::CleanDocument> {
    let raw = corpus::load_document(path, source_id)
        .with_context(|| format!("load {}", path.display()))?;
    analysis::load_and_clean(&raw, config).with_context(|| format!("{}", path.display()))
}

/// Full pipeline for one file; outputs land in `<out>/<source_id>/`.
pub fn cmd_analyze(
    file: &Path,
    out: &Path,
    config: &Config,
    options: &AnalysisOptions,
    dumps: DumpOptions,
    exec: Execution,
) -> anyhow::Result<Analysis> {
    analyze_as(file, None, out, config, options, dumps, exec)
}

fn analyze_as(
    file: &Path,
    source_id: Option<&str>,
    out: &Path,
    config: &Config,
    options: &AnalysisOptions,
    dumps: DumpOptions,
    exec: Execution,
) -> anyhow::Result<Analysis> {
    let doc = load_clean(file, source_id, config)?;
    let analysis = analysis::analyze_document(&doc, options, exec)
        .with_context(|| format!("analyze {}", file.display()))?;
    let files = output::analysis_files(&analysis, dumps);
    output::write_document_dir(out, &doc.source_id, &files)
        .with_context(|| format!("write outputs for {}", doc.source_id))?;
    Ok(analysis)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceEntry {
    pub source_id: String,
    pub exponent: Option<f64>,
    pub rank1_length: f64,
    pub mark_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDifference {
    pub first: String,
    pub second: String,
    /// `exponent(first) - exponent(second)`.
    pub exponent_difference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassComparison {
    pub class: MarkClass,
    pub entries: Vec<SourceEntry>,
    pub differences: Vec<PairDifference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub sources: Vec<String>,
    pub classes: Vec<ClassComparison>,
    pub zipf_exponents: Vec<Option<f64>>,
}

/// Source ids from file stems, suffixed `-2`, `-3`, ... on collisions.
fn unique_ids(files: &[PathBuf]) -> Vec<String> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    files
        .iter()
        .map(|f| {
            let stem = f
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "document".into());
            let n = seen.entry(stem.clone()).or_default();
            *n += 1;
            if *n == 1 {
                stem
            } else {
                format!("{stem}-{n}")
            }
        })
        .collect()
}

pub fn compare_reports(reports: &[&AnalysisReport]) -> Comparison {
    let sources: Vec<String> = reports.iter().map(|r| r.source_id.clone()).collect();
    let classes = MarkClass::ALL
        .iter()
        .filter(|&&class| reports.iter().all(|r| r.class(class).is_some()))
        .map(|&class| {
            let entries: Vec<SourceEntry> = reports
                .iter()
                .map(|r| {
                    let c = r.class(class).expect("filtered above");
                    SourceEntry {
                        source_id: r.source_id.clone(),
                        exponent: c.exponent(),
                        rank1_length: c.rank1_length,
                        mark_count: c.mark_count,
                    }
                })
                .collect();
            let mut differences = Vec::new();
            for (i, a) in entries.iter().enumerate() {
                for b in &entries[i + 1..] {
                    differences.push(PairDifference {
                        first: a.source_id.clone(),
                        second: b.source_id.clone(),
                        exponent_difference: a.exponent.zip(b.exponent).map(|(x, y)| x - y),
                    });
                }
            }
            ClassComparison {
                class,
                entries,
                differences,
            }
        })
        .collect();
    Comparison {
        sources,
        zipf_exponents: reports.iter().map(|r| r.words.zeta()).collect(),
        classes,
    }
}

fn comparison_csv(comparison: &Comparison) -> String {
    let mut out = String::from("class,source_id,exponent,rank1_length,mark_count\n");
    for c in &comparison.classes {
        for e in &c.entries {
            let exponent = e.exponent.map(|x| x.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.class, e.source_id, exponent, e.rank1_length, e.mark_count
            );
        }
    }
    out
}

/// Analyze every file (in parallel under `exec`) and tabulate. Outputs go to
/// `<out>/<source_id>/` per file plus `<out>/comparison.{json,csv}`.
pub fn cmd_compare(
    files: &[PathBuf],
    out: &Path,
    config: &Config,
    exec: Execution,
) -> anyhow::Result<Comparison> {
    if files.len() < 2 {
        bail!("compare: at least two input files are required");
    }
    let ids = unique_ids(files);
    let options = AnalysisOptions::from_config(config);
    let jobs: Vec<(&PathBuf, &String)> = files.iter().zip(&ids).collect();
    let analyses = exec
        .map(&jobs, |(file, id)| {
            analyze_as(
                file,
                Some(id),
                out,
                config,
                &options,
                DumpOptions::default(),
                exec,
            )
        })
        .into_iter()
        .collect::<anyhow::Result<Vec<_>>>()?;
    let reports: Vec<&AnalysisReport> = analyses.iter().map(|a| &a.report).collect();
    let comparison = compare_reports(&reports);
    let json = serde_json::to_string_pretty(&comparison)? + "\n";
    std::fs::write(out.join("comparison.json"), json).context("write comparison.json")?;
    std::fs::write(out.join("comparison.csv"), comparison_csv(&comparison))
        .context("write comparison.csv")?;
    Ok(comparison)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZipfReport {
    pub source_id: String,
    pub token_count: usize,
    pub vocabulary_size: usize,
    pub top_words: Vec<analysis::WordCount>,
    pub fit: FitRecord,
}

/// Word-only pipeline. Unlike `analyze`, a failed fit is an error here.
pub fn cmd_zipf(file: &Path, out: &Path, config: &Config) -> anyhow::Result<ZipfReport> {
    let doc = load_clean(file, None, config)?;
    let (words, data) = analysis::analyze_words(&doc, config.windows.words).context("zipf")?;
    let fit = match &words.zipf {
        Outcome::Fitted(fit) => fit.clone(),
        Outcome::Unavailable(reason) => bail!("zipf fit: {reason}"),
    };
    let report = ZipfReport {
        source_id: doc.source_id.clone(),
        token_count: words.token_count,
        vocabulary_size: words.vocabulary_size,
        top_words: words.top_words,
        fit,
    };
    let files = vec![
        ("words.csv".to_owned(), output::rank_csv(&data.ranked)),
        (
            "words.loglog.dat".to_owned(),
            output::loglog_dat(&data.ranked),
        ),
        (
            "words.vocab.csv".to_owned(),
            output::vocabulary_csv(&data.ranked, &data.table),
        ),
        (
            "zipf.json".to_owned(),
            serde_json::to_string_pretty(&report)? + "\n",
        ),
    ];
    output::write_document_dir(out, &doc.source_id, &files).context("write zipf outputs")?;
    Ok(report)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into())
}

pub fn analysis_summary(report: &AnalysisReport) -> String {
    let mut s = format!(
        "source: {}  chars: {}  tokens: {}  vocabulary: {}\n",
        report.source_id,
        report.document_chars,
        report.words.token_count,
        report.words.vocabulary_size
    );
    let _ = writeln!(
        s,
        "{:<10} {:>8} {:>7} {:>5} {:>7} {:>9} {:>7} {:>7} {:>6}  window",
        "class", "segments", "marks", "min", "max", "total", "rank1", "eta", "r2"
    );
    for c in &report.classes {
        let fit = c.power_law.ok();
        let window = fit
            .map(|f| format!("[{}, {}]", f.window.r_min, f.window.r_max))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            s,
            "{:<10} {:>8} {:>7} {:>5} {:>7} {:>9} {:>7} {:>7} {:>6}  {}",
            c.class.name(),
            c.segment_count,
            c.mark_count,
            c.min_length,
            c.max_length,
            c.total_length,
            c.rank1_length,
            fmt_opt(c.exponent()),
            fmt_opt(fit.and_then(|f| f.r_squared)),
            window
        );
        if let Some(Outcome::Fitted(se)) = &c.stretched_exponential {
            let _ = writeln!(
                s,
                "{:<10} stretched exp: amplitude {:.4} rate {:.4} stretch {:.4} residual {:.4e} (power law {:.4e})",
                "",
                se.params["amplitude"],
                se.params["rate"],
                se.params["stretch_exponent"],
                se.residual_sum,
                fit.map(|f| f.residual_sum).unwrap_or(f64::NAN)
            );
        }
        if let Some(Outcome::Fitted(b)) = &c.break_estimate {
            let _ = writeln!(
                s,
                "{:<10} break: rank {} length {} slopes {:.3} -> {:.3} improvement {:.1}%{}",
                "",
                b.break_rank,
                b.break_length,
                b.slope_before,
                b.slope_after,
                100.0 * b.relative_improvement,
                if b.material {
                    ""
                } else {
                    " (no material break)"
                }
            );
        }
    }
    if let Some(r) = report.major_to_minor_ratio {
        let _ = writeln!(s, "(dot+comma)/(colon+semicolon+exclam+question) = {r:.3}");
    }
    let _ = writeln!(s, "zipf zeta: {}", fmt_opt(report.words.zeta()));
    s
}

pub fn comparison_summary(comparison: &Comparison) -> String {
    let mut s = String::new();
    let _ = write!(s, "{:<10} {:<9}", "class", "");
    for src in &comparison.sources {
        let _ = write!(s, " {src:>14}");
    }
    s.push('\n');
    for c in &comparison.classes {
        let row =
            |s: &mut String, label: &str, name: &str, cell: &dyn Fn(&SourceEntry) -> String| {
                let _ = write!(s, "{label:<10} {name:<9}");
                for e in &c.entries {
                    let _ = write!(s, " {:>14}", cell(e));
                }
                s.push('\n');
            };
        row(&mut s, c.class.name(), "eta", &|e| fmt_opt(e.exponent));
        row(&mut s, "", "rank1", &|e| e.rank1_length.to_string());
        row(&mut s, "", "marks", &|e| e.mark_count.to_string());
        for d in &c.differences {
            let _ = writeln!(
                s,
                "{:<10} d_eta {} - {}: {}",
                "",
                d.first,
                d.second,
                d.exponent_difference
                    .map(|x| format!("{x:+.4}"))
                    .unwrap_or_else(|| "-".into())
            );
        }
    }
    let _ = write!(s, "{:<10} {:<9}", "words", "zeta");
    for z in &comparison.zipf_exponents {
        let _ = write!(s, " {:>14}", fmt_opt(*z));
    }
    s.push('\n');
    s
}

pub fn zipf_summary(report: &ZipfReport) -> String {
    let mut s = format!(
        "source: {}  tokens: {}  vocabulary: {}\nzeta: {:.4}  amplitude: {:.4}  r2: {}  window: [{}, {}]  points: {}\n",
        report.source_id,
        report.token_count,
        report.vocabulary_size,
        report.fit.params["exponent"],
        report.fit.params["amplitude"],
        fmt_opt(report.fit.r_squared),
        report.fit.window.r_min,
        report.fit.window.r_max,
        report.fit.n_points
    );
    for (i, w) in report.top_words.iter().enumerate() {
        let _ = writeln!(s, "{:>4}  {:<16} {}", i + 1, w.word, w.frequency);
    }
    s
}
