//! `bwlf` command-line front end.
//!
//! Exit status: 0 on success, 1 on an operational error (bad input file,
//! mismatched join, ...), 2 on a usage error. Any file written by a failing
//! invocation is removed before returning.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Warning};
use crate::ingest;
use crate::integrate::{self, Delimiter};
use crate::lexicon::{self, LexiconDictionary};
use crate::matrix::{self, BwlfRecord};
use crate::recurrence::{self, DEFAULT_LMIN};
use crate::rules::CleanupRules;
use crate::util;

#[derive(Debug, Parser)]
#[command(
    name = "bwlf",
    version,
    about = "Build by-word long-form matrices from text and run categorical RQA over their columns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Clean a raw text file into a marked token file.
    Clean {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        rules: RulesArg,
    },
    /// Turn a marked token file into the matrix (and optional word list).
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        wordlist: Option<PathBuf>,
        #[command(flatten)]
        rules: RulesArg,
    },
    /// Score matrix words against a category dictionary.
    Analyze {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        dict: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        rules: RulesArg,
    },
    /// Join an external per-word analysis table onto the matrix by row.
    Join {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        external: PathBuf,
        #[arg(long, value_enum, default_value_t = DelimiterArg::Tab)]
        delimiter: DelimiterArg,
        #[arg(long)]
        out: PathBuf,
        /// Warn when the identifier column disagrees with the word column.
        #[arg(long)]
        verify: bool,
    },
    /// Recurrence plot and RQA metrics for one column of a table.
    Recur {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "word")]
        column: String,
        #[arg(long, default_value_t = DEFAULT_LMIN)]
        lmin: usize,
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long)]
        metrics: Option<PathBuf>,
        #[command(flatten)]
        rules: RulesArg,
    },
    /// Run clean, build, analyze and join (and optionally recur) for each
    /// input, writing everything into one directory.
    Pipeline {
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dict: Option<PathBuf>,
        /// Column to run recurrence analysis on.
        #[arg(long)]
        recur_column: Option<String>,
        #[arg(long, default_value_t = DEFAULT_LMIN)]
        lmin: usize,
        /// Files processed concurrently.
        #[arg(long)]
        jobs: Option<NonZeroUsize>,
        #[command(flatten)]
        rules: RulesArg,
    },
}

#[derive(Debug, Args)]
struct RulesArg {
    /// Cleanup rules file; built-in defaults when omitted.
    #[arg(long = "rules")]
    path: Option<PathBuf>,
}

impl RulesArg {
    fn load(&self) -> Result<CleanupRules, Error> {
        match &self.path {
            Some(p) => CleanupRules::load(p),
            None => Ok(CleanupRules::default()),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DelimiterArg {
    Tab,
    Comma,
}

impl From<DelimiterArg> for Delimiter {
    fn from(d: DelimiterArg) -> Self {
        match d {
            DelimiterArg::Tab => Delimiter::Tab,
            DelimiterArg::Comma => Delimiter::Comma,
        }
    }
}

enum Failure {
    Usage(String),
    Op(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Op(e)
    }
}

/// Files written so far by one invocation; removed unless committed.
#[derive(Default)]
struct Outputs {
    written: Vec<PathBuf>,
}

impl Outputs {
    fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<(), Error> {
        util::write_atomic(path, bytes)?;
        self.written.push(path.to_path_buf());
        Ok(())
    }

    fn discard(&mut self) {
        for path in self.written.drain(..) {
            let _ = fs::remove_file(path);
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };
    let mut outputs = Outputs::default();
    let mut warnings = Vec::new();
    let result = dispatch(cli.command, &mut outputs, &mut warnings, stdout);
    for w in &warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    match result {
        Ok(()) => 0,
        Err(failure) => {
            outputs.discard();
            match failure {
                Failure::Usage(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    2
                }
                Failure::Op(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    1
                }
            }
        }
    }
}

fn dispatch(
    command: Command,
    outputs: &mut Outputs,
    warnings: &mut Vec<String>,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let mut note = |ws: Vec<Warning>| warnings.extend(ws.iter().map(Warning::to_string));
    match command {
        Command::Clean { input, out, rules } => {
            distinct(&[&input], &[&out])?;
            let rules = rules.load()?;
            let text = util::read_to_string(&input)?;
            let stream = ingest::mark_structure(&text, &rules);
            outputs.write(&out, ingest::cleaned_to_string(&stream)?.as_bytes())?;
        }
        Command::Build {
            input,
            matrix: matrix_path,
            wordlist,
            rules,
        } => {
            let outs: Vec<&Path> = std::iter::once(matrix_path.as_path())
                .chain(wordlist.as_deref())
                .collect();
            distinct(&[&input], &outs)?;
            let rules = rules.load()?;
            let stream = ingest::read_cleaned(&input)?;
            let built = matrix::build_matrix(&stream, &rules);
            note(built.warnings);
            outputs.write(
                &matrix_path,
                matrix::matrix_to_string(&built.records)?.as_bytes(),
            )?;
            if let Some(path) = wordlist {
                outputs.write(&path, matrix::wordlist_to_string(&built.records).as_bytes())?;
            }
        }
        Command::Analyze {
            matrix: matrix_path,
            dict,
            out,
            rules,
        } => {
            let mut ins: Vec<&Path> = vec![&matrix_path];
            ins.extend(dict.as_deref());
            distinct(&ins, &[&out])?;
            let rules = rules.load()?;
            let dict = load_dict(dict.as_deref())?;
            let records = matrix::import_matrix(&matrix_path)?;
            outputs.write(&out, analysis_text(&records, &dict, &rules)?.as_bytes())?;
        }
        Command::Join {
            matrix: matrix_path,
            external,
            delimiter,
            out,
            verify,
        } => {
            distinct(&[&matrix_path, &external], &[&out])?;
            let records = matrix::import_matrix(&matrix_path)?;
            let table = integrate::import_external(&external, delimiter.into())?;
            let joined = integrate::join_rows(&records, &table)?;
            if verify {
                note(integrate::verify_identifiers(&records, &table));
            }
            outputs.write(&out, integrate::integrated_to_string(&joined)?.as_bytes())?;
        }
        Command::Recur {
            input,
            column,
            lmin,
            plot,
            metrics,
            rules,
        } => {
            let outs: Vec<&Path> = plot
                .iter()
                .chain(metrics.iter())
                .map(|p| p.as_path())
                .collect();
            distinct(&[&input], &outs)?;
            if lmin < 2 {
                return Err(Failure::Usage(format!(
                    "--lmin must be at least 2, got {lmin}"
                )));
            }
            let rules = rules.load()?;
            let values = recurrence::load_column(&input, &column, &rules)?;
            let rp = recurrence::recurrence_matrix(&values, &column)?;
            let m = recurrence::rqa(&rp, lmin)?;
            if let Some(path) = plot {
                outputs.write(&path, recurrence::plot_to_string(&rp).as_bytes())?;
            }
            if let Some(path) = metrics {
                outputs.write(&path, recurrence::metrics_to_string(&rp, &m)?.as_bytes())?;
            }
            let _ = write!(stdout, "n={}\n{}", rp.n(), m.to_name_value());
        }
        Command::Pipeline {
            input,
            out,
            dict,
            recur_column,
            lmin,
            jobs,
            rules,
        } => {
            if lmin < 2 {
                return Err(Failure::Usage(format!(
                    "--lmin must be at least 2, got {lmin}"
                )));
            }
            let stems = pipeline_stems(&input)?;
            let rules = rules.load()?;
            let dict = load_dict(dict.as_deref())?;
            fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
            let config = PipelineConfig {
                rules: &rules,
                dict: &dict,
                recur_column: recur_column.as_deref(),
                lmin,
            };
            let jobs = jobs
                .or_else(|| std::thread::available_parallelism().ok())
                .map_or(1, NonZeroUsize::get);
            let results = run_parallel(&input, jobs, |i| {
                let mut local = Outputs::default();
                let mut ws = Vec::new();
                let r = pipeline_one(&input[i], &out, &stems[i], &config, &mut local, &mut ws);
                (r, local, ws)
            });
            let mut first_err = None;
            for (r, mut local, ws) in results {
                outputs.written.append(&mut local.written);
                warnings.extend(ws);
                if let Err(e) = r {
                    first_err.get_or_insert(e);
                }
            }
            if let Some(e) = first_err {
                return Err(e.into());
            }
        }
    }
    Ok(())
}

fn load_dict(path: Option<&Path>) -> Result<LexiconDictionary, Error> {
    path.map_or_else(
        || Ok(LexiconDictionary::default()),
        lexicon::load_dictionary,
    )
}

fn analysis_text(
    records: &[BwlfRecord],
    dict: &LexiconDictionary,
    rules: &CleanupRules,
) -> Result<String, Error> {
    let rows = lexicon::analyze(records, dict, rules);
    lexicon::analysis_to_string(records, &rows, dict)
}

struct PipelineConfig<'a> {
    rules: &'a CleanupRules,
    dict: &'a LexiconDictionary,
    recur_column: Option<&'a str>,
    lmin: usize,
}

fn pipeline_one(
    input: &Path,
    dir: &Path,
    stem: &str,
    cfg: &PipelineConfig<'_>,
    outputs: &mut Outputs,
    warnings: &mut Vec<String>,
) -> Result<(), Error> {
    let prefix = |w: &dyn std::fmt::Display| format!("{}: {w}", input.display());
    let path = |suffix: &str| dir.join(format!("{stem}.{suffix}"));

    let text = util::read_to_string(input)?;
    let stream = ingest::mark_structure(&text, cfg.rules);
    let cleaned = ingest::cleaned_to_string(&stream)?;
    outputs.write(&path("cleaned.csv"), cleaned.as_bytes())?;

    // continue from the serialized form so results match the staged commands
    let stream = ingest::cleaned_from_str(&cleaned)?;
    let built = matrix::build_matrix(&stream, cfg.rules);
    warnings.extend(built.warnings.iter().map(|w| prefix(w)));
    let matrix_text = matrix::matrix_to_string(&built.records)?;
    outputs.write(&path("matrix.csv"), matrix_text.as_bytes())?;
    outputs.write(
        &path("words.txt"),
        matrix::wordlist_to_string(&built.records).as_bytes(),
    )?;

    let records = matrix::matrix_from_str(&matrix_text)?;
    let analysis = analysis_text(&records, cfg.dict, cfg.rules)?;
    outputs.write(&path("analysis.tsv"), analysis.as_bytes())?;

    let table = integrate::external_from_str(&analysis, Delimiter::Tab)?;
    let joined = integrate::join_rows(&records, &table)?;
    let integrated = integrate::integrated_to_string(&joined)?;
    outputs.write(&path("integrated.csv"), integrated.as_bytes())?;

    if let Some(column) = cfg.recur_column {
        let values = recurrence::column_from_str(&integrated, b',', column, cfg.rules)?;
        if values.is_empty() {
            warnings.push(prefix(&"no words, recurrence analysis skipped"));
            return Ok(());
        }
        let rp = recurrence::recurrence_matrix(&values, column)?;
        let m = recurrence::rqa(&rp, cfg.lmin)?;
        outputs.write(
            &path(&format!("{column}.rp.csv")),
            recurrence::plot_to_string(&rp).as_bytes(),
        )?;
        outputs.write(
            &path(&format!("{column}.rqa.csv")),
            recurrence::metrics_to_string(&rp, &m)?.as_bytes(),
        )?;
    }
    Ok(())
}

fn pipeline_stems(inputs: &[PathBuf]) -> Result<Vec<String>, Failure> {
    let mut stems = Vec::with_capacity(inputs.len());
    for input in inputs {
        let stem = input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .ok_or_else(|| Failure::Usage(format!("{}: not a file name", input.display())))?;
        if stems.contains(&stem) {
            return Err(Failure::Usage(format!(
                "two inputs share the output name `{stem}`"
            )));
        }
        stems.push(stem);
    }
    Ok(stems)
}

/// Runs `task` for every index with at most `jobs` threads; results come
/// back in input order.
fn run_parallel<T, F>(items: &[PathBuf], jobs: usize, task: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<T>>> = items.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(items.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let value = task(i);
                *slots[i].lock().expect("result slot poisoned") = Some(value);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| {
            s.into_inner()
                .expect("result slot poisoned")
                .expect("task ran")
        })
        .collect()
}

fn distinct(inputs: &[&Path], outputs: &[&Path]) -> Result<(), Failure> {
    let key = |p: &Path| -> PathBuf {
        if let Ok(c) = p.canonicalize() {
            return c;
        }
        match (p.parent(), p.file_name()) {
            (Some(parent), Some(name)) => {
                let parent = if parent.as_os_str().is_empty() {
                    Path::new(".")
                } else {
                    parent
                };
                parent
                    .canonicalize()
                    .map(|c| c.join(name))
                    .unwrap_or_else(|_| p.to_path_buf())
            }
            _ => p.to_path_buf(),
        }
    };
    let ins: Vec<PathBuf> = inputs.iter().map(|p| key(p)).collect();
    let mut seen: Vec<PathBuf> = Vec::new();
    for out in outputs {
        let k = key(out);
        if ins.contains(&k) || seen.contains(&k) {
            return Err(Failure::Usage(format!(
                "output path {} collides with another path of this command",
                out.display()
            )));
        }
        seen.push(k);
    }
    Ok(())
}
