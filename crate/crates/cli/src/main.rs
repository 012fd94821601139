use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use nafi_core::defaults;
use nafi_core::evaluation::{evaluate, sample_words, write_skeleton, GoldSample};
use nafi_core::extraction::{
    diff_wordlists, emit_partition, run_pipeline, Threshold, UnigramModel,
};
use nafi_core::lexicon::{load_wordlist, ExceptionList, PolarityLexicon, PrefixTable};
use nafi_core::textnorm::{normalize, stem, SuffixRules};
use nafi_core::{BatchRecord, Detector};

/// Rule-based detection of negative-polarity Persian words.
#[derive(Debug, Parser)]
#[command(name = "nafi", version)]
struct Cli {
    #[command(flatten)]
    stores: StoreArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct StoreArgs {
    /// Directory holding prefixes.txt, lexicon.txt, exceptions.txt and
    /// suffix_rules.txt. Without it the bundled files are used.
    #[arg(long, global = true, value_name = "DIR")]
    data_dir: Option<PathBuf>,

    /// Negative prefix file.
    #[arg(long, global = true, value_name = "FILE")]
    prefixes: Option<PathBuf>,

    /// Negative polarity lexicon.
    #[arg(long, global = true, value_name = "FILE")]
    lexicon: Option<PathBuf>,

    /// Exceptions list.
    #[arg(long, global = true, value_name = "FILE")]
    exceptions: Option<PathBuf>,

    /// Suffix rule file for the stemmer.
    #[arg(long, global = true, value_name = "FILE")]
    suffix_rules: Option<PathBuf>,

    /// Base-frequency threshold; bases seen more often than this are valid.
    #[arg(long, global = true, default_value_t = 5)]
    threshold: u64,

    /// Drop a prefix from the table for this run (repeatable).
    #[arg(long = "exclude-prefix", global = true, value_name = "PREFIX")]
    exclude_prefixes: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split prefix-led words into exceptions and validly prefixed words.
    BuildExceptions {
        /// Plain-text corpus, whitespace tokenized.
        #[arg(long)]
        corpus: PathBuf,
        /// Word database, one word per line.
        #[arg(long)]
        words: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Classify words given as arguments, or one per line on stdin.
    Detect { words: Vec<String> },
    /// Score the detector against a `word<TAB>label` gold file.
    Evaluate { gold: PathBuf },
    /// Print the canonical form of each word.
    Normalize {
        /// Also strip noun postfixes.
        #[arg(long)]
        stem: bool,
        words: Vec<String>,
    },
    /// Draw a seeded random sample from a wordlist for labelling.
    Sample {
        #[arg(long)]
        pool: PathBuf,
        #[arg(short = 'k', long = "size")]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the skeleton here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a generated wordlist with its hand-edited version.
    Diff { generated: PathBuf, edited: PathBuf },
}

enum Status {
    Ok,
    EmptyResult,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(file))
}

impl StoreArgs {
    /// Explicit flag, then the data directory, then the bundled file.
    fn source(&self, explicit: &Option<PathBuf>, file_name: &str) -> Option<PathBuf> {
        explicit
            .clone()
            .or_else(|| self.data_dir.as_ref().map(|d| d.join(file_name)))
    }

    fn prefix_table(&self) -> Result<PrefixTable> {
        let table = match self.source(&self.prefixes, defaults::PREFIXES_FILE) {
            Some(path) => PrefixTable::load(open(&path)?)
                .with_context(|| format!("cannot load prefixes from {}", path.display()))?,
            None => defaults::prefix_table(),
        };
        if self.exclude_prefixes.is_empty() {
            return Ok(table);
        }
        table
            .without(&self.exclude_prefixes)
            .context("every prefix was excluded")
    }

    fn suffix_rules(&self) -> Result<SuffixRules> {
        match self.source(&self.suffix_rules, defaults::SUFFIX_RULES_FILE) {
            Some(path) => SuffixRules::read(open(&path)?)
                .with_context(|| format!("cannot load suffix rules from {}", path.display())),
            None => Ok(defaults::suffix_rules()),
        }
    }

    fn lexicon(&self) -> Result<PolarityLexicon> {
        match self.source(&self.lexicon, defaults::LEXICON_FILE) {
            Some(path) => PolarityLexicon::load(open(&path)?)
                .with_context(|| format!("cannot load lexicon from {}", path.display())),
            None => Ok(defaults::lexicon()),
        }
    }

    fn exceptions(&self) -> Result<ExceptionList> {
        match self.source(&self.exceptions, defaults::EXCEPTIONS_FILE) {
            Some(path) => ExceptionList::load(open(&path)?)
                .with_context(|| format!("cannot load exceptions from {}", path.display())),
            None => Ok(defaults::exceptions()),
        }
    }

    fn threshold(&self) -> Result<Threshold> {
        Threshold::new(self.threshold).context("invalid --threshold")
    }

    fn detector(&self) -> Result<Detector> {
        let detector = Detector::new(
            self.lexicon()?,
            self.exceptions()?,
            self.prefix_table()?,
            self.suffix_rules()?,
        );
        let irregular = detector.exceptions.irregular_entries(&detector.prefixes);
        if !irregular.is_empty() {
            eprintln!(
                "warning: {} exception entries are not led by any active prefix (first: {})",
                irregular.len(),
                irregular[0]
            );
        }
        Ok(detector)
    }
}

fn build_exceptions(
    stores: &StoreArgs,
    corpus: &Path,
    words: &Path,
    out_dir: &Path,
) -> Result<Status> {
    let table = stores.prefix_table()?;
    let threshold = stores.threshold()?;
    let corpus_reader = open(corpus)?;
    let words_reader = open(words)?;

    let words = load_wordlist(words_reader)
        .with_context(|| format!("cannot read {}", words.display()))?
        .entries;
    let model = UnigramModel::build(corpus_reader)
        .with_context(|| format!("cannot read {}", corpus.display()))?;
    let vocabulary = model.vocabulary();
    let output = run_pipeline(
        [("words", &words), ("corpus", &vocabulary)],
        &model,
        &table,
        threshold,
    )?;

    fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    emit_partition(
        &output.merged,
        &out_dir.join("valid_affixed.txt"),
        &out_dir.join("exceptions.txt"),
        &out_dir.join("evidence.tsv"),
    )?;
    let summary_path = out_dir.join("summary.tsv");
    let summary = File::create(&summary_path)
        .with_context(|| format!("cannot write {}", summary_path.display()))?;
    output
        .write_summary(BufWriter::new(summary))
        .with_context(|| format!("cannot write {}", summary_path.display()))?;

    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(
        out,
        "corpus: {} tokens, {} distinct; threshold {}",
        model.total_tokens(),
        model.len(),
        threshold.get()
    )?;
    writeln!(out, "{:<10} {:<15} {:>8}", "source", "file", "words")?;
    for s in output.summary() {
        writeln!(
            out,
            "{:<10} {:<15} {:>8}",
            s.source, "exceptions", s.exceptions
        )?;
        writeln!(
            out,
            "{:<10} {:<15} {:>8}",
            s.source, "valid_affixed", s.valid_affixed
        )?;
    }
    writeln!(
        out,
        "{:<10} {:<15} {:>8}",
        "merged",
        "exceptions",
        output.merged.exceptions.len()
    )?;
    writeln!(
        out,
        "{:<10} {:<15} {:>8}",
        "merged",
        "valid_affixed",
        output.merged.valid_affixed.len()
    )?;

    if output.merged.candidate_count() == 0 {
        eprintln!("warning: no prefix-led words found; output files are empty");
        return Ok(Status::EmptyResult);
    }
    Ok(Status::Ok)
}

fn detect(stores: &StoreArgs, words: &[String]) -> Result<Status> {
    let detector = stores.detector()?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    if !words.is_empty() {
        for word in words {
            match detector.detect(word) {
                Ok(v) => writeln!(out, "{}", v.to_tsv())?,
                Err(e) => eprintln!("skipped: {e}"),
            }
        }
    } else {
        let stdin = io::stdin();
        for record in detector.detect_batch(stdin.lock()) {
            match record.context("cannot read stdin")? {
                BatchRecord::Verdict { verdict, .. } => writeln!(out, "{}", verdict.to_tsv())?,
                BatchRecord::Skipped { line, surface } => {
                    eprintln!("line {line}: skipped degenerate input {surface:?}")
                }
            }
        }
    }
    out.flush()?;
    Ok(Status::Ok)
}

fn run_evaluate(stores: &StoreArgs, gold: &Path) -> Result<Status> {
    let detector = stores.detector()?;
    let sample = GoldSample::read(open(gold)?)
        .with_context(|| format!("cannot read gold file {}", gold.display()))?;
    let report = evaluate(&sample, &detector);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    report.write_human(&mut out)?;
    writeln!(out)?;
    report.write_key_values(&mut out)?;
    Ok(Status::Ok)
}

fn run_normalize(stores: &StoreArgs, with_stem: bool, words: &[String]) -> Result<Status> {
    let rules = if with_stem {
        Some(stores.suffix_rules()?)
    } else {
        None
    };
    let canonical = |w: &str| {
        let t = normalize(w);
        match &rules {
            Some(r) => stem(&t, r),
            None => t,
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    if !words.is_empty() {
        for w in words {
            writeln!(out, "{}", canonical(w))?;
        }
    } else {
        for line in nafi_core::io::TextLines::new(io::stdin().lock()) {
            let (_, line) = line.context("cannot read stdin")?;
            writeln!(out, "{}", canonical(&line))?;
        }
    }
    out.flush()?;
    Ok(Status::Ok)
}

fn sample(pool: &Path, k: usize, seed: u64, out_path: Option<&Path>) -> Result<Status> {
    let pool = load_wordlist(open(pool)?)
        .with_context(|| format!("cannot read {}", pool.display()))?
        .entries;
    let words = sample_words(&pool, k, seed)?;
    match out_path {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            write_skeleton(BufWriter::new(file), &words)?;
        }
        None => write_skeleton(io::stdout().lock(), &words)?,
    }
    Ok(Status::Ok)
}

fn diff(generated: &Path, edited: &Path) -> Result<Status> {
    let load = |p: &Path| -> Result<_> {
        Ok(load_wordlist(open(p)?)
            .with_context(|| format!("cannot read {}", p.display()))?
            .entries)
    };
    let d = diff_wordlists(&load(generated)?, &load(edited)?);
    d.write(io::stdout().lock())?;
    eprintln!("{} removed, {} added", d.removed.len(), d.added.len());
    Ok(Status::Ok)
}

fn run(cli: Cli) -> Result<Status> {
    let stores = &cli.stores;
    match &cli.command {
        Command::BuildExceptions {
            corpus,
            words,
            out_dir,
        } => build_exceptions(stores, corpus, words, out_dir),
        Command::Detect { words } => detect(stores, words),
        Command::Evaluate { gold } => run_evaluate(stores, gold),
        Command::Normalize { stem, words } => run_normalize(stores, *stem, words),
        Command::Sample { pool, k, seed, out } => sample(pool, *k, *seed, out.as_deref()),
        Command::Diff { generated, edited } => diff(generated, edited),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::EmptyResult) => ExitCode::from(2),
        Err(e) => {
            if let Some(io_err) = e.downcast_ref::<io::Error>() {
                if io_err.kind() == io::ErrorKind::BrokenPipe {
                    return ExitCode::SUCCESS;
                }
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn zero_threshold_is_rejected() {
        let cli = Cli::parse_from(["nafi", "--threshold", "0", "detect"]);
        assert!(cli.stores.threshold().is_err());
    }

    #[test]
    fn bundled_stores_without_data_dir() {
        let cli = Cli::parse_from(["nafi", "detect"]);
        assert_eq!(cli.stores.prefix_table().unwrap(), defaults::prefix_table());
    }
}
