//! `nilfactor`: factor singular matrices into two nilpotent matrices, rerun
//! the property suites, and run the forensic checks.
//!
//! Exit codes: 0 success, 1 parse/IO/usage error, 2 invertible input,
//! 3 nonzero nilpotent 2x2 input, 4 failed verification or check.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use nilfactor::forensics::{check_sourour_projection_flaw, check_wu_counterexample, ForensicReport};
use nilfactor::lu_similarity::DEFAULT_SEED;
use nilfactor::suites::{lemma1_suite, lemma2_suite, roth_suite, sourour_suite, SuiteReport};
use nilfactor::{factor_seeded, Error, ExactMatrix, FieldSpec, MatrixFile};

/// `println!` that stops quietly when stdout is closed (e.g. piped to `head`).
macro_rules! outln {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

const EXIT_INPUT: u8 = 1;
const EXIT_INVERTIBLE: u8 = 2;
const EXIT_EXCEPTIONAL: u8 = 3;
const EXIT_FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "nilfactor", version, about = "Exact factorization of singular matrices into two nilpotent factors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor the matrix in FILE as N1·N2 with N1, N2 nilpotent.
    Factor {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Recheck product and nilpotency before printing.
        #[arg(long, value_enum, default_value_t = Switch::On)]
        verify: Switch,
        #[arg(long, env = "NILFACTOR_SEED")]
        seed: Option<u64>,
    },
    /// Rerun a property suite.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest k for lemma1; largest matrix size for lemma2.
        #[arg(long)]
        max_k: Option<usize>,
        /// Comma-separated fields, e.g. `GF(5),QQ`.
        #[arg(long, value_delimiter = ',')]
        fields: Option<Vec<FieldSpec>>,
        #[arg(long, env = "NILFACTOR_SEED")]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Rerun the two forensic checks.
    Forensics {
        /// Odd block size for the right-factor check.
        #[arg(long, default_value_t = 7)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Lemma1,
    Lemma2,
    Sourour,
    Roth,
    All,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let code = match cli.command {
        Command::Factor {
            file,
            json,
            verify,
            seed,
        } => cmd_factor(&file, json, verify == Switch::On, seed.unwrap_or(DEFAULT_SEED)),
        Command::Check {
            suite,
            max_k,
            fields,
            seed,
            json,
        } => cmd_check(suite, max_k, fields, seed.unwrap_or(DEFAULT_SEED), json),
        Command::Forensics { k, json } => cmd_forensics(k, json),
    };
    ExitCode::from(code)
}

fn read_matrix(path: &PathBuf) -> Result<ExactMatrix, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    nilfactor::parse_matrix(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn matrix_text(m: &ExactMatrix) -> String {
    MatrixFile::from_matrix(m).expect("square").to_text()
}

fn cmd_factor(path: &PathBuf, json: bool, verify: bool, seed: u64) -> u8 {
    let a = match read_matrix(path) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    };
    let fac = match factor_seeded(&a, seed) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                Error::NotSingular => EXIT_INVERTIBLE,
                Error::ExceptionalCase => EXIT_EXCEPTIONAL,
                Error::NotSquare(..) | Error::Parse(_) => EXIT_INPUT,
                _ => EXIT_FAILED,
            };
        }
    };
    let verified = verify.then(|| fac.verify(&a));
    let cert = &fac.certificate;
    if json {
        let out = json!({
            "input": MatrixFile::from_matrix(&a).expect("square"),
            "n1": MatrixFile::from_matrix(&fac.n1).expect("square"),
            "n2": MatrixFile::from_matrix(&fac.n2).expect("square"),
            "certificate": cert,
            "verified": verified,
        });
        outln!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
    } else {
        outln!("N1:\n{}", matrix_text(&fac.n1));
        outln!("N2:\n{}", matrix_text(&fac.n2));
        outln!("route: {:?}", cert.route);
        outln!("nilpotent part size: {}", cert.nilpotent_size);
        outln!("coupling block removed: {}", if cert.roth_correction { "yes" } else { "no" });
        outln!("product N1·N2 = A: {}", if cert.product_ok { "OK" } else { "FAILED" });
        outln!("nilpotency index: N1 {}, N2 {}", cert.nilpotency_index_1, cert.nilpotency_index_2);
        outln!("rank: N1 {}, N2 {}, A {}", cert.rank_1, cert.rank_2, a.rank());
        match verified {
            Some(true) => outln!("verification: OK"),
            Some(false) => outln!("verification: FAILED"),
            None => outln!("verification: skipped"),
        }
    }
    if verified == Some(false) {
        eprintln!("error: verification failed");
        return EXIT_FAILED;
    }
    0
}

fn print_suite(r: &SuiteReport) {
    outln!("suite {}: {}", r.suite, if r.passed() { "PASS" } else { "FAIL" });
    for c in &r.checks {
        let status = if c.failures == 0 { "ok  " } else { "FAIL" };
        outln!(
            "  {status} [{}] {} ({} instances, {} failures)",
            c.field, c.identity, c.instances, c.failures
        );
        if let Some(first) = &c.first_failure {
            outln!("       first failure: {first}");
        }
    }
}

fn cmd_check(
    suite: Suite,
    max_k: Option<usize>,
    fields: Option<Vec<FieldSpec>>,
    seed: u64,
    json: bool,
) -> u8 {
    let fields = fields.unwrap_or_else(|| {
        vec![FieldSpec::Rationals, FieldSpec::PrimeField(2), FieldSpec::PrimeField(5)]
    });
    let wanted = |s: Suite| suite == s || suite == Suite::All;
    let mut runs: Vec<nilfactor::Result<SuiteReport>> = Vec::new();
    if wanted(Suite::Lemma1) {
        runs.push(lemma1_suite(max_k.unwrap_or(11), &fields));
    }
    if wanted(Suite::Lemma2) {
        let sizes: Vec<usize> = (1..=max_k.unwrap_or(12)).collect();
        runs.push(lemma2_suite(&sizes, &fields));
    }
    if wanted(Suite::Sourour) {
        runs.push(sourour_suite(25, &[3, 4, 5, 6], &fields, seed));
    }
    if wanted(Suite::Roth) {
        runs.push(roth_suite(100, &fields, seed));
    }
    let reports = match runs.into_iter().collect::<nilfactor::Result<Vec<_>>>() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILED;
        }
    };
    if json {
        outln!("{}", serde_json::to_string_pretty(&reports).expect("serializes"));
    } else {
        reports.iter().for_each(print_suite);
    }
    if reports.iter().all(SuiteReport::passed) {
        0
    } else {
        EXIT_FAILED
    }
}

fn print_forensic(r: &ForensicReport) {
    outln!("{}: {:?}", r.check_name, r.verdict);
    outln!("  claim: {}", r.claim);
    for (k, v) in &r.measurements {
        outln!("  {k}: {v}");
    }
}

fn cmd_forensics(k: usize, json: bool) -> u8 {
    let reports = match check_wu_counterexample(k)
        .and_then(|w| Ok(vec![w, check_sourour_projection_flaw()?]))
    {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    if json {
        outln!("{}", serde_json::to_string_pretty(&reports).expect("serializes"));
    } else {
        reports.iter().for_each(print_forensic);
    }
    if reports.iter().all(ForensicReport::confirms) {
        0
    } else {
        EXIT_FAILED
    }
}
