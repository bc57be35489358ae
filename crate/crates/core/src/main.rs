//! Command-line front end: every operation of the toolkit behind a
//! subcommand, JSON in/out, and stable exit codes for scripting:
//! 0 = computed, 1 = non-discreteness witness found (scan only),
//! 2 = invalid input, 3 = internal tolerance failure.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use testmap::classify::{classify, is_elementary_pair};
use testmap::conjugate::{conj_kill, decay_regime, midpoint_conjugation_check};
use testmap::embed::{detect_form, embed, re_trace_invariance_check, sl2c_trace_type};
use testmap::jorgensen::{commutator_trace_identity_check, jorgensen_value, TestMap};
use testmap::matrix2::{Mat2C, Mat2H};
use testmap::sample::{random_eigenvalue, random_sl2c, random_unitary};
use testmap::scanner::{scan, GroupSpec, ScanConfig, ScanReport};
use testmap::{tol, Error};

#[derive(Parser)]
#[command(
    name = "testmap",
    version,
    about = "Discreteness probes for subgroups of SL(2,C) driven by a fixed test map"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

#[derive(Args)]
struct InputArg {
    /// Path to the JSON input, or '-' for standard input.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    output: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an SL(2,C) matrix as identity, elliptic, parabolic or
    /// loxodromic
    Classify {
        #[command(flatten)]
        io: InputArg,
        /// Boundary band around the class boundaries.
        #[arg(long, default_value_t = tol::CLASSIFY_EPS)]
        eps: f64,
    },
    /// Evaluate Jorgensen's inequality on a pair {"f": matrix, "g": matrix}
    Jorgensen {
        #[command(flatten)]
        io: InputArg,
    },
    /// Embed an SL(2,C) matrix into U(1,1;H) by conjugation with T
    Embed {
        #[command(flatten)]
        io: InputArg,
    },
    /// Detect the invariant-submanifold stabilizer form of a list of
    /// quaternionic matrices {"matrices": [...]}
    DetectForm {
        #[command(flatten)]
        io: InputArg,
        #[arg(long, default_value_t = tol::FORM)]
        tol: f64,
    },
    /// Report the trace-restriction type (type_i / type_ii / neither)
    TraceType {
        #[command(flatten)]
        io: InputArg,
        #[arg(long, default_value_t = tol::FORM)]
        tol: f64,
    },
    /// Conjugate a matrix to lower-triangular form by solving the
    /// off-diagonal quadratic
    ConjKill {
        #[command(flatten)]
        io: InputArg,
    },
    /// Run randomized self-checks of the core identities and print the
    /// maximal residuals
    CheckIdentities {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Scan a group spec for non-discreteness witnesses against a fixed
    /// test map
    Scan {
        #[command(flatten)]
        io: InputArg,
        /// Build the test map diag(r, 1/r) from r given as 're' or 're,im'.
        #[arg(long, conflicts_with = "test_map")]
        diag_r: Option<String>,
        /// Read the test-map matrix from a JSON file.
        #[arg(long)]
        test_map: Option<PathBuf>,
        /// Maximum word length L.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Near-identity cutoff for elliptic witnesses.
        #[arg(long, default_value_t = tol::NEAR_IDENTITY_DELTA)]
        delta: f64,
        /// Classification tolerance.
        #[arg(long, default_value_t = tol::CLASSIFY_EPS)]
        eps: f64,
        /// Enumeration cap.
        #[arg(long, default_value_t = tol::WORD_CAP)]
        cap: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Lib(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Input(String),
}

fn exit_code_for(err: &CliError) -> u8 {
    match err {
        CliError::Lib(Error::ToleranceFailure(_)) => 3,
        _ => 2,
    }
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|source| CliError::Io {
                path: "<stdin>".into(),
                source,
            })?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

fn parse<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = read_input(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn emit<T: Serialize>(value: &T, format: OutputFormat, table: String) -> Result<(), CliError> {
    match format {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(value)?);
        }
        OutputFormat::Table => {
            print!("{table}");
        }
    }
    Ok(())
}

fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = |s: &str| CliError::Input(format!("cannot parse '{s}' as a real number"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.trim().parse().map_err(|_| bad(re))?, 0.0)),
        [re, im] => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad(re))?,
            im.trim().parse().map_err(|_| bad(im))?,
        )),
        _ => Err(CliError::Input(format!(
            "expected 're' or 're,im', got '{text}'"
        ))),
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Classify { io, eps } => {
            let g: Mat2C = parse(&io.input)?;
            let class = classify(&g, eps);
            let mut table = String::new();
            let _ = writeln!(table, "kind       {}", class.kind);
            let _ = writeln!(table, "borderline {}", class.borderline);
            let _ = writeln!(
                table,
                "trace_sq   {} {}",
                class.trace_sq.re, class.trace_sq.im
            );
            emit(&class, io.output, table)?;
            Ok(0)
        }
        Command::Jorgensen { io } => {
            #[derive(serde::Deserialize)]
            struct Pair {
                f: Mat2C,
                g: Mat2C,
            }
            let pair: Pair = parse(&io.input)?;
            let report = jorgensen_value(&pair.f, &pair.g);
            let elementary = is_elementary_pair(&pair.f, &pair.g, tol::CLASSIFY_EPS);
            let mut table = String::new();
            let _ = writeln!(table, "value           {}", report.value);
            let _ = writeln!(table, "term_trace      {}", report.term_trace);
            let _ = writeln!(table, "term_comm       {}", report.term_comm);
            let _ = writeln!(table, "violated        {}", report.violated);
            let _ = writeln!(table, "pair_elementary {}", report.pair_elementary);
            if let Some(reason) = elementary.reason {
                let _ = writeln!(
                    table,
                    "reason          {}",
                    serde_json::to_string(&reason)?.trim_matches('"')
                );
            }
            let _ = writeln!(table, "tight           {}", report.tight);
            if report.value < 1.0 && report.pair_elementary {
                let _ = writeln!(table, "note            inconclusive (elementary pair)");
            }
            emit(&report, io.output, table)?;
            Ok(0)
        }
        Command::Embed { io } => {
            let g: Mat2C = parse(&io.input)?;
            let e = embed(&g);
            let report = e.unitarity_report();
            if report.gram_residual > tol::UNITARY {
                return Err(Error::ToleranceFailure(format!(
                    "embedding left the unitary group: residual {:.3e}",
                    report.gram_residual
                ))
                .into());
            }
            #[derive(Serialize)]
            struct EmbedOutput {
                matrix: Mat2H,
                gram_residual: f64,
                relation_residuals: [f64; 5],
            }
            let out = EmbedOutput {
                matrix: e,
                gram_residual: report.gram_residual,
                relation_residuals: report.relation_residuals,
            };
            let mut table = String::new();
            for (label, q) in [("a", e.a), ("b", e.b), ("c", e.c), ("d", e.d)] {
                let _ = writeln!(table, "{label} {q}");
            }
            let _ = writeln!(table, "gram_residual {}", report.gram_residual);
            emit(&out, io.output, table)?;
            Ok(0)
        }
        Command::DetectForm { io, tol: tolerance } => {
            #[derive(serde::Deserialize)]
            struct Matrices {
                matrices: Vec<Mat2H>,
            }
            let input: Matrices = parse(&io.input)?;
            let result = detect_form(&input.matrices, tolerance);
            let mut table = String::new();
            let _ = writeln!(table, "tag     {}", serde_json::to_string(&result.tag)?);
            if let Some(eps) = result.epsilon {
                let _ = writeln!(table, "epsilon {eps}");
            }
            if let Some(lambda) = result.lambda {
                let _ = writeln!(table, "lambda  {lambda}");
            }
            if !result.also_fits.is_empty() {
                let _ = writeln!(
                    table,
                    "also    {}",
                    serde_json::to_string(&result.also_fits)?
                );
            }
            emit(&result, io.output, table)?;
            Ok(0)
        }
        Command::TraceType { io, tol: tolerance } => {
            let g: Mat2C = parse(&io.input)?;
            let t = sl2c_trace_type(&g, tolerance);
            #[derive(Serialize)]
            struct TraceTypeOutput {
                trace_type: testmap::embed::TraceType,
            }
            let out = TraceTypeOutput { trace_type: t };
            emit(&out, io.output, format!("trace_type {t}\n"))?;
            Ok(0)
        }
        Command::ConjKill { io } => {
            let g: Mat2C = parse(&io.input)?;
            let result = conj_kill(&g)?;
            let midpoint = if g.c.norm() > 0.0 {
                Some(midpoint_conjugation_check(&g)?)
            } else {
                None
            };
            #[derive(Serialize)]
            struct ConjOutput {
                #[serde(flatten)]
                result: testmap::conjugate::ConjugationResult,
                regime: testmap::conjugate::DecayRegime,
                #[serde(skip_serializing_if = "Option::is_none")]
                midpoint_residual: Option<f64>,
            }
            let regime = decay_regime(&g, result.beta);
            let mut table = String::new();
            let _ = writeln!(table, "beta        {} {}", result.beta.re, result.beta.im);
            let _ = writeln!(table, "residual_12 {}", result.residual_12);
            let _ = writeln!(table, "pre_swapped {}", result.pre_swapped);
            let _ = writeln!(table, "regime      {}", serde_json::to_string(&regime)?);
            if let Some(m) = midpoint {
                let _ = writeln!(table, "midpoint_residual {m}");
            }
            let out = ConjOutput {
                result,
                regime,
                midpoint_residual: midpoint,
            };
            emit(&out, io.output, table)?;
            Ok(0)
        }
        Command::CheckIdentities { n, seed } => check_identities(n, seed),
        Command::Scan {
            io,
            diag_r,
            test_map,
            depth,
            delta,
            eps,
            cap,
        } => {
            let spec: GroupSpec = parse(&io.input)?;
            spec.validate()?;
            let tm = match (diag_r, test_map) {
                (Some(r_text), None) => TestMap::diagonal(parse_complex(&r_text)?)?,
                (None, Some(path)) => {
                    let m: Mat2C = parse(&path)?;
                    TestMap::from_matrix(m)?
                }
                _ => {
                    return Err(CliError::Input(
                        "provide exactly one of --diag-r and --test-map".into(),
                    ))
                }
            };
            let config = ScanConfig {
                depth,
                delta,
                eps,
                cap,
            };
            let report = scan(&spec, &tm, &config)?;
            emit(&report, io.output, scan_table(&report))?;
            Ok(if report.has_witness() { 1 } else { 0 })
        }
    }
}

fn scan_table(report: &ScanReport) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "config: depth={} delta={} eps={} cap={}",
        report.config.depth, report.config.delta, report.config.eps, report.config.cap
    );
    let _ = writeln!(
        t,
        "test map: r = {} {} (diagonal input: {})",
        report.test_map.r.re, report.test_map.r.im, report.test_map.was_diagonal
    );
    let _ = writeln!(
        t,
        "elements: {} retained of {} reduced words",
        report.elements_seen, report.words_examined
    );
    let _ = writeln!(
        t,
        "trace types: type_i={} type_ii={} neither={}",
        report.trace_types.type_i, report.trace_types.type_ii, report.trace_types.neither
    );
    let _ = writeln!(
        t,
        "trace spread: real={} nonreal={}",
        report.trace_spread.real_traces, report.trace_spread.nonreal_traces
    );
    let _ = writeln!(t, "elliptic elements: {}", report.elliptic_inventory.len());
    let _ = writeln!(t, "all elliptics order 2: {}", report.all_elliptic_order2);
    if let Some(note) = &report.order2_note {
        let _ = writeln!(t, "note: {note}");
    }
    let _ = writeln!(t, "violations: {}", report.violations.len());
    for v in &report.violations {
        let _ = writeln!(
            t,
            "  {}  value={} diag_form={}",
            v.word, v.report.value, v.diag_form_value
        );
    }
    let _ = writeln!(
        t,
        "near-identity elliptics: {}",
        report.near_identity_elliptics.len()
    );
    for e in &report.near_identity_elliptics {
        let _ = writeln!(t, "  {}  distance={}", e.word, e.distance);
    }
    let _ = writeln!(
        t,
        "verdict: {}",
        serde_json::to_string(&report.verdict)
            .unwrap_or_default()
            .trim_matches('"')
    );
    t
}

fn check_identities(n: usize, seed: u64) -> Result<u8, CliError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut max_comm = 0.0f64;
    let mut max_retrace = 0.0f64;
    let mut max_hom = 0.0f64;
    let mut max_gram = 0.0f64;

    for _ in 0..n {
        // commutator trace identity against diag(r, 1/r)
        let g = random_sl2c(&mut rng);
        let r = random_eigenvalue(&mut rng);
        let rdiff = r - r.inv();
        let bound_scale = 1.0 + (g.b * g.c).norm() * rdiff.norm_sqr();
        let res = commutator_trace_identity_check(&g, r)?;
        max_comm = max_comm.max(res / bound_scale);

        // real-trace invariance under unitary conjugation
        let gq = random_unitary(&mut rng);
        let fq = random_unitary(&mut rng);
        let res = re_trace_invariance_check(&gq, &fq)?;
        max_retrace = max_retrace.max(res / (1.0 + gq.trace().norm()));

        // embedding is a homomorphism into the unitary group
        let a = random_sl2c(&mut rng);
        let b = random_sl2c(&mut rng);
        let lhs = embed(&(a * b));
        let rhs = embed(&a) * embed(&b);
        max_hom = max_hom.max(lhs.dist(&rhs));
        max_gram = max_gram.max(embed(&a).unitarity_report().gram_residual);
    }

    println!("checks over {n} random trials (seed {seed}):");
    println!("  commutator-identity residual (scaled)  {max_comm:e}  bound 1e-9");
    println!("  re-trace invariance residual (scaled)  {max_retrace:e}  bound 1e-9");
    println!("  embedding homomorphism residual        {max_hom:e}  bound 1e-10");
    println!("  embedding unitarity residual           {max_gram:e}  bound 1e-9");

    if max_comm <= 1e-9 && max_retrace <= 1e-9 && max_hom <= 1e-10 && max_gram <= 1e-9 {
        Ok(0)
    } else {
        Err(Error::ToleranceFailure("identity residual exceeded its bound".into()).into())
    }
}
