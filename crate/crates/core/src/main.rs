use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use tga_core::algebra::AlgebraSpec;
use tga_core::builder::{build_with, BuildOptions};
use tga_core::classify::classify;
use tga_core::field::Involution;
use tga_core::oracle::{conjugate_pairing_check, cross_check, verify_family, DEFAULT_BUDGET};
use tga_core::parse::{parse_element, parse_field};
use tga_core::report;
use tga_core::selftest::{self, Fault, SelftestOptions};
use tga_core::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Primitive idempotents of K_t<g> with g^(2^n) = a, computed exactly.
#[derive(Parser)]
#[command(name = "tga", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Field type, the constant m and (given n) the emulation annotation.
    Classify {
        /// Q, QC:L, QR:L, QE:L or F:q
        field: String,
        /// Order exponent of the group, for the emulation annotation.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Build the minimal idempotents of K_t<g> with g^(2^n) = a.
    Idempotents {
        field: String,
        n: u32,
        /// Comma-separated coordinates over the ambient power basis.
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        json: bool,
        /// Append the verification report.
        #[arg(long)]
        verify: bool,
        /// Skip the self-verification done before returning.
        #[arg(long)]
        unchecked: bool,
    },
    /// Verify the built family, the conjugate pairing and, for small finite
    /// fields, agreement with brute-force enumeration.
    Verify {
        field: String,
        n: u32,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        json: bool,
        /// Largest algebra (in elements) to enumerate.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        max_enum: u128,
    },
    /// Run the case-coverage matrix, structure laws and finite cross-checks.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        max_enum: u128,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    DropItem,
    FlipLambda,
    SkipR0,
    NegatedFromOne,
}

impl From<FaultArg> for Fault {
    fn from(f: FaultArg) -> Self {
        match f {
            FaultArg::DropItem => Fault::DropItem,
            FaultArg::FlipLambda => Fault::FlipLambda,
            FaultArg::SkipR0 => Fault::SkipR0,
            FaultArg::NegatedFromOne => Fault::NegatedFromOne,
        }
    }
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::Verification(_) | Error::Internal(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_for(&err))
}

fn spec_from(field: &str, n: u32, a: &str) -> tga_core::Result<std::sync::Arc<AlgebraSpec>> {
    let k = parse_field(field)?;
    let a = parse_element(&k, a)?;
    AlgebraSpec::new(k, n, a)
}

fn emit(text: &str) -> ExitCode {
    let mut out = io::stdout().lock();
    if out
        .write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .is_err()
    {
        return ExitCode::from(EXIT_FAIL);
    }
    ExitCode::SUCCESS
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Classify { field, n, json } => {
            let k = match parse_field(&field) {
                Ok(k) => k,
                Err(e) => return fail(e),
            };
            let mut c = classify(&k);
            if let Some(n) = n {
                c = c.for_order(n);
            }
            let text = if json {
                report::classify_json(&k, &c)
            } else {
                report::classify_text(&k, &c)
            };
            emit(&text)
        }
        Command::Idempotents {
            field,
            n,
            a,
            json,
            verify,
            unchecked,
        } => {
            let spec = match spec_from(&field, n, &a) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let opts = BuildOptions {
                checked: !unchecked,
                ..BuildOptions::default()
            };
            let family = match build_with(&spec, &opts) {
                Ok(f) => f,
                Err(e) => return fail(e),
            };
            let report = verify.then(|| verify_family(&family));
            let text = if json {
                report::family_json(&family, report.as_ref())
            } else {
                report::family_text(&family, report.as_ref())
            };
            let code = emit(&text);
            match report {
                Some(r) if !r.overall => ExitCode::from(EXIT_FAIL),
                _ => code,
            }
        }
        Command::Verify {
            field,
            n,
            a,
            json,
            max_enum,
        } => {
            let spec = match spec_from(&field, n, &a) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let opts = BuildOptions {
                checked: false,
                ..BuildOptions::default()
            };
            let family = match build_with(&spec, &opts) {
                Ok(f) => f,
                Err(e) => return fail(e),
            };
            let report = verify_family(&family);
            let mut ok = report.overall;
            let mut text = if json {
                report::family_json(&family, Some(&report))
            } else {
                report::family_text(&family, Some(&report))
            };
            let mut extra = String::new();
            if spec.field().involution() != Involution::Identity {
                let pairing = conjugate_pairing_check(&family);
                ok &= matches!(pairing, Ok(true));
                extra += &format!("conjugate pairing: {}\n", verdict(&pairing));
            }
            if spec.field().is_finite() {
                match cross_check(&spec, max_enum) {
                    Err(Error::BudgetExceeded { size, budget }) => {
                        extra +=
                            &format!("cross-check: skipped ({size} elements > budget {budget})\n")
                    }
                    other => {
                        ok &= matches!(other, Ok(true));
                        extra += &format!("cross-check: {}\n", verdict(&other));
                    }
                }
            }
            if json {
                eprint!("{extra}");
            } else {
                text += &extra;
            }
            let code = emit(&text);
            if ok {
                code
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Command::Selftest {
            max_enum,
            inject_fault,
        } => {
            let opts = SelftestOptions {
                max_enum,
                fault: inject_fault.map(Fault::from),
            };
            let start = Instant::now();
            let mut out = io::stdout().lock();
            match selftest::run(&opts, &mut out) {
                Ok(None) => {
                    let _ = writeln!(
                        out,
                        "selftest passed in {:.2} s",
                        start.elapsed().as_secs_f64()
                    );
                    ExitCode::SUCCESS
                }
                Ok(Some(failure)) => {
                    let _ = out.flush();
                    eprintln!("selftest failed: {}", failure.check);
                    eprintln!("invariant: {}", failure.invariant);
                    eprintln!("reproduce with: {}", failure.repro);
                    ExitCode::from(EXIT_FAIL)
                }
                Err(_) => ExitCode::from(EXIT_FAIL),
            }
        }
    }
}

fn verdict(r: &tga_core::Result<bool>) -> String {
    match r {
        Ok(true) => "pass".into(),
        Ok(false) => "FAIL".into(),
        Err(e) => format!("FAIL ({e})"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    run(cli)
}
