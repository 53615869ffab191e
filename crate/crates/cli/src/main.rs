//! `antisph`: parabolic KL tables, invariant checks and p-canonical
//! multiplicities from the command line.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage error, 3 resource or cap.

mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use antispherical::coxeter::format_word;
use antispherical::{CoxeterMatrix, Error, GroupBall, ParabolicSubset};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cache::{Cache, CacheKey};
use commands::{CheckReport, PcanResult, Row, TableKind};

const DEFAULT_CAP: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "antisph", version, about = "Parabolic Kazhdan-Lusztig tables, checks and p-canonical multiplicities")]
struct Cli {
    /// Built-in Coxeter type such as A3, B3, D4, H3, "I2 5" or affA1.
    #[arg(long = "type", global = true)]
    ty: Option<String>,
    /// JSON Coxeter matrix file `{"rank": r, "entries": [[..]]}` with "inf" for ∞.
    #[arg(long, global = true)]
    matrix: Option<PathBuf>,
    /// Parabolic subset, e.g. `--I s1 s2` or `--I 1,2`.
    #[arg(long = "I", global = true, num_args = 0.., value_delimiter = ',')]
    subset: Vec<String>,
    /// Length cap of the group ball (default 6; pcan defaults to the word length).
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Directory for cached tables.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Seed for random-word suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Characteristic of the coefficient field (0 or a prime).
    #[arg(long = "char", global = true, default_value_t = 0)]
    characteristic: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Positivity,
    Deodhar,
    Finitary,
    Monotonicity,
    Gradedrank,
    Localization,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Antispherical polynomials n_{y,x} over ^IW.
    Npoly,
    /// Spherical polynomials m_{y,x} over ^IW.
    Mpoly,
    /// Ordinary KL polynomials h_{y,x} (ignores --I).
    Klpoly,
    /// Runs an invariant suite; exits 1 on any counterexample.
    Check {
        #[arg(value_enum)]
        which: Check,
        /// Number of random words for `gradedrank`.
        #[arg(long, default_value_t = 100)]
        words: usize,
        /// Prefix length for the relation oracle in `localization`.
        #[arg(long, default_value_t = 2)]
        prefix: usize,
    },
    /// Indecomposable multiplicities of the Bott-Samelson object of a word.
    Pcan {
        /// Word such as `sts`, `s1s2s1`, `1,2,1` or `e`.
        #[arg(default_value = "")]
        word: String,
    },
}

/// A failure already reported on stderr, carrying its exit code.
struct Failure(u8);

fn error_kind(e: &Error) -> (&'static str, u8) {
    match e {
        Error::CapExceeded { .. } => ("cap_exceeded", 3),
        Error::Resource(_) => ("resource", 3),
        Error::Parse(_) => ("parse", 2),
        Error::InvalidMatrix(_) => ("invalid_matrix", 2),
        Error::RingMismatch(..) | Error::RingParameter { .. } => ("ring_parameter", 2),
        Error::NotFinitary => ("not_finitary", 2),
        Error::NotMinRep => ("not_min_rep", 2),
        Error::UnsupportedBraid(_) => ("unsupported_braid", 2),
        Error::UnsupportedCharacteristic(_) => ("unsupported_characteristic", 2),
        Error::NotInvertible(_) => ("not_invertible", 1),
        Error::Internal(_) => ("internal", 1),
    }
}

fn report(e: Error) -> Failure {
    let (kind, code) = error_kind(&e);
    eprintln!("{}", json!({ "error": kind, "message": e.to_string() }));
    Failure(code)
}

fn usage(message: String) -> Failure {
    report(Error::Parse(message))
}

fn matrix(cli: &Cli) -> Result<CoxeterMatrix, Failure> {
    match (&cli.ty, &cli.matrix) {
        (Some(t), None) => CoxeterMatrix::builtin(t).map_err(report),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            CoxeterMatrix::from_json(&text).map_err(report)
        }
        _ => Err(usage("exactly one of --type and --matrix is required".into())),
    }
}

fn subset_order(cli: &Cli, rank: usize) -> Result<Vec<usize>, Failure> {
    let mut order = Vec::new();
    for tok in cli.subset.iter().flat_map(|t| t.split_whitespace()) {
        let k = match LETTERS.iter().position(|&l| tok.as_bytes() == [l]) {
            Some(k) if k < rank => k,
            Some(_) => return Err(usage(format!("generator {tok:?} out of range for rank {rank}"))),
            None => {
                let s = ParabolicSubset::parse(tok, rank).map_err(report)?;
                s.iter().next().ok_or_else(|| usage(format!("bad generator {tok:?}")))?
            }
        };
        if !order.contains(&k) {
            order.push(k);
        }
    }
    Ok(order)
}

/// How words were spelled on input, reused for output.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Alphabet {
    Letters,
    Indices,
}

const LETTERS: &[u8] = b"stu";

fn parse_word(text: &str, rank: usize) -> Result<(Vec<u8>, Alphabet), Error> {
    let t = text.trim();
    if t.is_empty() || t == "e" {
        return Ok((vec![], Alphabet::Letters));
    }
    let bad = || Error::Parse(format!("bad word {text:?}"));
    let letters = t.bytes().all(|c| LETTERS.contains(&c));
    let word: Vec<u8> = if letters {
        t.bytes().map(|c| LETTERS.iter().position(|&l| l == c).unwrap() as u8).collect()
    } else if t.contains('s') {
        t.split('s').filter(|p| !p.is_empty()).map(|p| p.trim_matches(|c| c == ',' || c == ' ').parse::<u8>().map_err(|_| bad())).collect::<Result<_, _>>()?
    } else if t.contains([',', ' ']) {
        t.split([',', ' ']).filter(|p| !p.is_empty()).map(|p| p.parse::<u8>().map_err(|_| bad())).collect::<Result<_, _>>()?
    } else {
        t.chars().map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad)).collect::<Result<_, _>>()?
    };
    let word = if letters { word } else { word.into_iter().map(|k| k.wrapping_sub(1)).collect() };
    if let Some(&s) = word.iter().find(|&&s| s as usize >= rank) {
        return Err(Error::Parse(format!("generator {} out of range for rank {rank}", s.wrapping_add(1))));
    }
    let alphabet = if letters && rank <= LETTERS.len() { Alphabet::Letters } else { Alphabet::Indices };
    Ok((word, alphabet))
}

fn spell(word: &[u8], alphabet: Alphabet) -> String {
    match alphabet {
        Alphabet::Indices => format_word(word),
        Alphabet::Letters if word.is_empty() => "e".into(),
        Alphabet::Letters => word.iter().map(|&s| LETTERS[s as usize] as char).collect(),
    }
}

fn ball(m: CoxeterMatrix, cap: usize) -> Result<GroupBall, Failure> {
    GroupBall::new(m, cap).map_err(report)
}

fn cached_table(cli: &Cli, b: &GroupBall, i: ParabolicSubset, kind: TableKind) -> Result<Vec<Row>, Failure> {
    let Some(dir) = &cli.cache_dir else {
        return commands::table(b, i, kind).map_err(report);
    };
    let cache = Cache::new(dir).map_err(|e| report(Error::Resource(format!("cache dir: {e}"))))?;
    let bits = if kind == TableKind::Kl { 0 } else { i.bits() };
    let key = CacheKey::new(kind.name(), b.matrix().to_json(), bits, b.cap());
    if let Some(rows) = cache.load(&key) {
        return Ok(rows);
    }
    let rows = commands::table(b, i, kind).map_err(report)?;
    if let Err(e) = cache.store(&key, &rows) {
        eprintln!("warning: cache write failed: {e}");
    }
    Ok(rows)
}

fn render_table(kind: TableKind, i: ParabolicSubset, cap: usize, rows: &[Row], format: Format) -> String {
    let cells: Vec<[String; 3]> = rows.iter().map(|r| [format_word(&r.y), format_word(&r.x), r.poly.to_string()]).collect();
    match format {
        Format::Csv => {
            let mut out = String::from("y,x,poly\n");
            for c in &cells {
                out.push_str(&format!("{},{},{}\n", c[0], c[1], c[2]));
            }
            out
        }
        Format::Json => {
            let rows: Vec<_> = cells.iter().map(|c| json!({ "y": c[0], "x": c[1], "poly": c[2] })).collect();
            let subset = if kind == TableKind::Kl { ParabolicSubset::empty() } else { i };
            format!("{}\n", json!({ "table": kind.name(), "I": subset.to_string(), "cap": cap, "rows": rows }))
        }
        Format::Pretty => {
            let wy = cells.iter().map(|c| c[0].len()).max().unwrap_or(0).max(1);
            let wx = cells.iter().map(|c| c[1].len()).max().unwrap_or(0).max(1);
            let mut out = format!("{:<wy$}  {:<wx$}  poly\n", "y", "x");
            for c in &cells {
                out.push_str(&format!("{:<wy$}  {:<wx$}  {}\n", c[0], c[1], c[2]));
            }
            out
        }
    }
}

fn render_check(rep: &CheckReport, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string(rep).expect("report serializes")),
        Format::Csv => {
            let mut out = String::from("check,passed,checked,counterexample\n");
            if rep.counterexamples.is_empty() {
                out.push_str(&format!("{},{},{},\n", rep.check, rep.passed, rep.checked));
            }
            for c in &rep.counterexamples {
                out.push_str(&format!("{},{},{},\"{}\"\n", rep.check, rep.passed, rep.checked, c.replace('"', "\"\"")));
            }
            out
        }
        Format::Pretty => {
            let verdict = if rep.passed { "PASS" } else { "FAIL" };
            let mut out = format!("{}: {verdict} ({} checked)\n", rep.check, rep.checked);
            for c in &rep.counterexamples {
                out.push_str(&format!("  counterexample: {c}\n"));
            }
            out
        }
    }
}

fn render_pcan(word: &str, char: u64, res: &PcanResult, alphabet: Alphabet, format: Format) -> String {
    let terms: Vec<(String, String)> = res.terms.iter().map(|(w, p)| (spell(w, alphabet), p.to_string())).collect();
    match format {
        Format::Json => {
            let terms: Vec<_> = terms.iter().map(|(x, p)| json!({ "element": x, "multiplicity": p })).collect();
            format!("{}\n", json!({ "word": word, "char": char, "terms": terms, "cross_check": res.cross_check }))
        }
        Format::Csv => {
            let mut out = String::from("element,multiplicity\n");
            for (x, p) in &terms {
                out.push_str(&format!("{x},{p}\n"));
            }
            out
        }
        Format::Pretty => terms.iter().map(|(x, p)| format!("{x}:{p}\n")).collect(),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let m = matrix(cli)?;
    let rank = m.rank();
    let order = subset_order(cli, rank)?;
    let i = ParabolicSubset::from_indices(order.iter().copied());
    let cap = cli.cap.unwrap_or(DEFAULT_CAP);
    let (out, failed) = match &cli.command {
        Command::Npoly | Command::Mpoly | Command::Klpoly => {
            let kind = match cli.command {
                Command::Npoly => TableKind::N,
                Command::Mpoly => TableKind::M,
                _ => TableKind::Kl,
            };
            let b = ball(m, cap)?;
            let rows = cached_table(cli, &b, i, kind)?;
            (render_table(kind, i, cap, &rows, cli.format), false)
        }
        Command::Check { which, words, prefix } => {
            let b = ball(m, cap)?;
            let rep = match which {
                Check::Positivity => commands::check_positivity(&b, i),
                Check::Deodhar => commands::check_deodhar_all(&b, i),
                Check::Finitary => commands::check_finitary_all(&b, i),
                Check::Monotonicity => commands::check_monotonicity_chain(&b, &order),
                Check::Gradedrank => commands::check_gradedrank(&b, i, *words, cli.seed),
                Check::Localization => commands::check_localization(&b, i, *prefix),
            }
            .map_err(report)?;
            (render_check(&rep, cli.format), !rep.passed)
        }
        Command::Pcan { word } => {
            let (w, alphabet) = parse_word(word, rank).map_err(report)?;
            let b = ball(m, cli.cap.unwrap_or(w.len()))?;
            let res = commands::pcan(&b, i, &w, cli.characteristic).map_err(report)?;
            if res.cross_check == Some(false) {
                eprintln!("cross-check failed: multiplicities disagree with the parabolic KL decomposition");
            }
            (render_pcan(&spell(&w, alphabet), cli.characteristic, &res, alphabet, cli.format), res.cross_check == Some(false))
        }
    };
    print!("{out}");
    if failed {
        Err(Failure(1))
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code)) => ExitCode::from(code),
    }
}
