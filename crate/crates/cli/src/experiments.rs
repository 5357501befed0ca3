//! CSV experiment harness.
//!
//! Schema v1 header: `family,n,k_alphabet,seed,sample,quantity,value,bound,pass`.
//! Rows append in a fixed deterministic order, one flush per row, so sweeps
//! are resumable: rerunning the same command on an existing file recomputes
//! only the missing tail (and a complete file is left untouched byte for
//! byte).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use synchro_core::generators::{cerny, random_automaton, Family, GeneratorSpec};
use synchro_core::oracle::{self, AvoidMode, OracleLimits};
use synchro_core::pipeline;
use synchro_core::{Error, StateSet};

use crate::{CliError, CliResult, ExperimentFamily};

pub const CSV_HEADER: &str = "family,n,k_alphabet,seed,sample,quantity,value,bound,pass";

/// Append-only CSV writer that skips over rows already present.
struct CsvAppender {
    path: PathBuf,
    file: fs::File,
    already_done: usize,
    seen: usize,
    appended: usize,
}

impl CsvAppender {
    fn open(path: &Path) -> Result<Self, CliError> {
        let io = |e| CliError::Io(path.to_path_buf(), e);
        let already_done = match fs::read_to_string(path) {
            Ok(existing) => {
                let mut lines = existing.lines();
                match lines.next() {
                    Some(header) if header == CSV_HEADER => {}
                    Some(other) => {
                        return Err(CliError::Usage(format!(
                            "{}: existing header {other:?} does not match schema v1",
                            path.display()
                        )))
                    }
                    None => {}
                }
                lines.filter(|l| !l.trim().is_empty()).count()
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => 0,
            Err(e) => return Err(io(e)),
        };
        let mut file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(io)?;
        if already_done == 0 && file.metadata().map_err(io)?.len() == 0 {
            writeln!(file, "{CSV_HEADER}").map_err(io)?;
        }
        Ok(CsvAppender {
            path: path.to_path_buf(),
            file,
            already_done,
            seen: 0,
            appended: 0,
        })
    }

    /// Emits one row; `compute` runs only when the row is not already on
    /// disk. Fields are written in schema order.
    fn row<F: FnOnce() -> [String; 9]>(&mut self, compute: F) -> Result<(), CliError> {
        self.seen += 1;
        if self.seen <= self.already_done {
            return Ok(());
        }
        let fields = compute();
        let line = fields.join(",");
        writeln!(self.file, "{line}").map_err(|e| CliError::Io(self.path.clone(), e))?;
        self.file
            .flush()
            .map_err(|e| CliError::Io(self.path.clone(), e))?;
        self.appended += 1;
        Ok(())
    }

    fn finish(self) -> Result<ExitCode, CliError> {
        if self.already_done > self.seen {
            return Err(CliError::Usage(format!(
                "{}: has {} data rows but this sweep produces only {}; \
                 was it written with different flags?",
                self.path.display(),
                self.already_done,
                self.seen
            )));
        }
        println!("rows={} appended={} out={}", self.seen, self.appended, self.path.display());
        Ok(ExitCode::SUCCESS)
    }
}

fn s(v: impl ToString) -> String {
    v.to_string()
}

/// Max over single states of the oracle's shortest avoiding length, against
/// the conjectured `2n − 2`. Exceedances are reported loudly and recorded
/// with `pass=false`, never hidden.
pub fn avoiding(
    n_min: usize,
    n_max: usize,
    samples: usize,
    seed: u64,
    family: ExperimentFamily,
    out: &Path,
    limits: OracleLimits,
) -> CliResult {
    if n_min < 2 && n_min <= n_max {
        return Err(CliError::Usage("--n-min: need n-min >= 2".into()));
    }
    // An empty range is fine: it leaves a header-only file.
    let mut csv = CsvAppender::open(out)?;
    for n in n_min..=n_max {
        let per_n = match family {
            ExperimentFamily::Cerny => 1,
            ExperimentFamily::Random => samples,
        };
        for sample in 0..per_n {
            csv.row(|| {
                let (name, seed_field, aut) = match family {
                    ExperimentFamily::Cerny => {
                        ("cerny", String::new(), Ok(cerny(n).expect("n >= 2")))
                    }
                    ExperimentFamily::Random => {
                        let derived = seed + sample as u64;
                        let spec = GeneratorSpec::new(Family::Random, n, 2, derived)
                            .requiring(true, true);
                        ("random", s(derived), random_automaton(&spec))
                    }
                };
                let bound = 2 * n - 2;
                let base = [name.to_string(), s(n), s(2), seed_field, s(sample)];
                let aut = match aut {
                    Ok(aut) => aut,
                    Err(err) => {
                        eprintln!("n={n} sample={sample}: generation failed: {err}");
                        return row_fields(&base, "max_shortest_avoiding", "", &s(bound), "skipped");
                    }
                };
                let mut max_len: Option<usize> = None;
                for q in 0..n {
                    let single = StateSet::singleton(n, q);
                    match oracle::exact_shortest_avoiding(&aut, &single, AvoidMode::SomeState, &limits)
                    {
                        Ok(res) => match res.length() {
                            Some(len) => max_len = Some(max_len.unwrap_or(0).max(len)),
                            None => {
                                eprintln!(
                                    "n={n} sample={sample}: state {q} unavoidable in a \
                                     strongly connected synchronizing automaton"
                                );
                                return row_fields(
                                    &base,
                                    "max_shortest_avoiding",
                                    "",
                                    &s(bound),
                                    "false",
                                );
                            }
                        },
                        Err(Error::OracleRefused(reason)) => {
                            eprintln!("n={n} sample={sample}: {reason}");
                            return row_fields(&base, "max_shortest_avoiding", "", &s(bound), "skipped");
                        }
                        Err(err) => {
                            eprintln!("n={n} sample={sample}: {err}");
                            return row_fields(&base, "max_shortest_avoiding", "", &s(bound), "skipped");
                        }
                    }
                }
                let value = max_len.expect("n >= 2 yields at least one state");
                if value > bound {
                    eprintln!(
                        "CONJECTURE EXCEEDED: n={n} sample={sample} family={name}: \
                         max shortest avoiding length {value} > 2n-2 = {bound}"
                    );
                }
                row_fields(
                    &base,
                    "max_shortest_avoiding",
                    &s(value),
                    &s(bound),
                    if value <= bound { "true" } else { "false" },
                )
            })?;
        }
    }
    csv.finish()
}

fn row_fields(
    base: &[String; 5],
    quantity: &str,
    value: &str,
    bound: &str,
    pass: &str,
) -> [String; 9] {
    [
        base[0].clone(),
        base[1].clone(),
        base[2].clone(),
        base[3].clone(),
        base[4].clone(),
        quantity.to_string(),
        value.to_string(),
        bound.to_string(),
        pass.to_string(),
    ]
}

/// Exact bound values per `n` plus the first crossover below the cubic.
pub fn bounds(n_max: usize, out: &Path) -> CliResult {
    if n_max < 1 {
        return Err(CliError::Usage("--n-max: need n-max >= 1".into()));
    }
    let mut csv = CsvAppender::open(out)?;
    for n in 1..=n_max {
        let base = ["formula".to_string(), s(n), String::new(), String::new(), s(0)];
        let pin = pipeline::pin_bound(n);
        let new = pipeline::new_bound(n);
        csv.row(|| row_fields(&base, "pin_bound", &s(&pin), "", ""))?;
        csv.row(|| row_fields(&base, "new_bound", &s(&new), "", ""))?;
        csv.row(|| {
            row_fields(
                &base,
                "new_bound_decimal",
                &s(pipeline::ratio_to_f64(&new)),
                "",
                "",
            )
        })?;
        csv.row(|| {
            let delta = new.clone() - pipeline::BigRational::from_integer(pin.clone());
            row_fields(&base, "new_minus_pin", &s(delta), "", "")
        })?;
        csv.row(|| row_fields(&base, "k_choice", &s(pipeline::choose_k(n)), "", ""))?;
    }
    csv.row(|| {
        let base = [
            "formula".to_string(),
            String::new(),
            String::new(),
            String::new(),
            s(0),
        ];
        match pipeline::new_bound_crossover(n_max) {
            Some(n) => row_fields(&base, "crossover_n", &s(n), "", "true"),
            None => row_fields(&base, "crossover_n", "none", "", "false"),
        }
    })?;
    csv.finish()
}

/// Max over states of the shortest word merging that state with another,
/// against the trivial quadratic bound `n(n−1)/2`.
pub fn pair(n_min: usize, n_max: usize, samples: usize, seed: u64, out: &Path) -> CliResult {
    if n_min < 2 && n_min <= n_max {
        return Err(CliError::Usage("--n-min: need n-min >= 2".into()));
    }
    let mut csv = CsvAppender::open(out)?;
    for n in n_min..=n_max {
        for sample in 0..samples {
            csv.row(|| {
                let derived = seed + sample as u64;
                let base = ["random".to_string(), s(n), s(2), s(derived), s(sample)];
                let bound = n * (n - 1) / 2;
                let spec =
                    GeneratorSpec::new(Family::Random, n, 2, derived).requiring(true, true);
                let aut = match random_automaton(&spec) {
                    Ok(aut) => aut,
                    Err(err) => {
                        eprintln!("n={n} sample={sample}: generation failed: {err}");
                        return row_fields(&base, "max_state_pair_merge", "", &s(bound), "skipped");
                    }
                };
                let mut value = 0usize;
                for q in 0..n {
                    let res = oracle::min_pair_merge_for_state(&aut, q)
                        .expect("n >= 2 checked above");
                    match res.length() {
                        Some(len) => value = value.max(len),
                        None => {
                            eprintln!(
                                "n={n} sample={sample}: state {q} merges with no other state"
                            );
                            return row_fields(&base, "max_state_pair_merge", "", &s(bound), "false");
                        }
                    }
                }
                row_fields(
                    &base,
                    "max_state_pair_merge",
                    &s(value),
                    &s(bound),
                    if value <= bound { "true" } else { "false" },
                )
            })?;
        }
    }
    csv.finish()
}
