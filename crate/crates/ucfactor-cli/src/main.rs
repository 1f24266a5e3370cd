//! Command-line surface: problem-file ingestion, factorization and splitting
//! commands, and oracle-backed verification of previously emitted reports.
//!
//! Exit codes: 0 success, 2 input error, 3 numeric non-certification,
//! 4 verification failure.

mod problem;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ucfactor::pietsch::PietschSolution;
use ucfactor::{Error as LibError, Scalar};

use problem::{matrix_rows, sequence_entries, InputError, ProblemFile};
use report::{
    digest_of, write_csv, CertificateSection, CheckSection, ErrorSection, FactorizationSection,
    Report, SplitSection,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NOT_CERTIFIED: u8 = 3;
pub const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SplitKind {
    Weak,
    Absolute,
    Measure,
}

impl SplitKind {
    fn as_str(&self) -> &'static str {
        match self {
            SplitKind::Weak => "weak",
            SplitKind::Absolute => "absolute",
            SplitKind::Measure => "measure",
        }
    }
}

/// Factorization and symbol-splitting reports with verifiable certificates.
#[derive(Parser)]
#[command(name = "ucfactor", version, about)]
struct Cli {
    /// Duality-gap tolerance, relative to max(1, pi2_sq)
    #[arg(long, global = true, default_value_t = ucfactor::pietsch::DEFAULT_GAP_TOL)]
    tol: f64,
    /// Sign-pattern search mode used by `verify` beyond the exact cap
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Trials for sampled sign searches
    #[arg(long, global = true, default_value_t = 10_000)]
    trials: u64,
    /// Seed for sampled sign searches
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on N for exhaustive sign enumeration
    /// (overrides the UCFACTOR_MAX_ENUM environment variable)
    #[arg(long, global = true)]
    max_enum: Option<usize>,
    /// Write a per-index CSV (n, alpha_n, |a_n|, |b_n|) to this path
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal weighted factorization of the sequence `phi`
    Factorize { path: PathBuf },
    /// Symbol splitting of the multiplier `(m, phi, psi)`
    Split {
        #[arg(value_enum)]
        kind: SplitKind,
        path: PathBuf,
    },
    /// Re-check a previously emitted report against the oracles
    Verify { path: PathBuf },
}

pub struct Flags {
    pub tol: f64,
    pub exact_mode: bool,
    pub trials: u64,
    pub seed: u64,
    pub max_enum: usize,
    pub csv: Option<PathBuf>,
}

fn resolve_max_enum(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("UCFACTOR_MAX_ENUM")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(ucfactor::space::DEFAULT_SIGN_ENUM_CAP)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = Flags {
        tol: cli.tol,
        exact_mode: cli.mode == Mode::Exact,
        trials: cli.trials,
        seed: cli.seed,
        max_enum: resolve_max_enum(cli.max_enum),
        csv: cli.csv,
    };
    let started = Instant::now();
    let code = match &cli.command {
        Command::Factorize { path } => cmd_factorize(path, &flags),
        Command::Split { kind, path } => cmd_split(path, *kind, &flags),
        Command::Verify { path } => verify::cmd_verify(path, &flags),
    };
    eprintln!("elapsed: {:.1?}", started.elapsed());
    ExitCode::from(code)
}

fn read_problem(path: &PathBuf) -> Result<(ProblemFile, String), InputError> {
    let bytes =
        std::fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let digest = digest_of(&bytes);
    let file = ProblemFile::parse(&bytes)?;
    Ok((file, digest))
}

/// Numeric errors (solver, preconditions discovered at solve time) exit 3;
/// everything else about the input shape exits 2.
fn classify(err: &LibError) -> u8 {
    match err {
        LibError::NotCertified { .. }
        | LibError::WitnessMarginTooSmall { .. }
        | LibError::ZeroVector(_)
        | LibError::ZeroVectorWithNonzeroSymbol { .. }
        | LibError::DegenerateMeasure { .. }
        | LibError::ZeroWeight { .. } => EXIT_NOT_CERTIFIED,
        _ => EXIT_INPUT,
    }
}

fn error_section(err: &LibError) -> ErrorSection {
    let index = match err {
        LibError::ZeroVector(i) => Some(*i),
        LibError::ZeroVectorWithNonzeroSymbol { index }
        | LibError::DegenerateMeasure { index }
        | LibError::ZeroWeight { index } => Some(*index),
        _ => None,
    };
    let kind = match err {
        LibError::NotCertified { .. } => "not_certified",
        LibError::WitnessMarginTooSmall { .. } => "witness_margin",
        LibError::DegenerateMeasure { .. } => "degenerate_measure",
        LibError::ZeroVector(_) => "zero_vector",
        LibError::ZeroVectorWithNonzeroSymbol { .. } => "zero_vector_with_symbol",
        LibError::ZeroWeight { .. } => "zero_weight",
        _ => "input",
    };
    ErrorSection {
        kind: kind.to_string(),
        message: err.to_string(),
        index,
    }
}

fn certificate_section(sol: &PietschSolution, tol: f64, certified: bool) -> CertificateSection {
    CertificateSection {
        v: sol.v.clone(),
        pi2_sq: sol.pi2_sq,
        dual_x: matrix_rows(&sol.dual_x),
        gap: sol.gap,
        certified: certified && sol.gap <= tol * sol.pi2_sq.max(1.0),
        iterations: sol.iterations as u64,
    }
}

fn cmd_factorize(path: &PathBuf, flags: &Flags) -> u8 {
    let (file, digest) = match read_problem(path) {
        Ok(ok) => ok,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_INPUT;
        }
    };
    let seq = match file.phi_sequence() {
        Ok(seq) => seq,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_INPUT;
        }
    };
    let mut report = Report::new("factorize", digest, flags.tol, file);

    match ucfactor::factorize(&seq, flags.tol) {
        Ok(f) => {
            let max_norm = seq.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
            let residual = (0..seq.len())
                .map(|i| (f.frame.vector(i) * Scalar::new(f.alpha[i], 0.0) - seq.vector(i)).norm())
                .fold(0.0f64, f64::max);
            report.checks.push(CheckSection::outcome(
                "reconstruction_residual",
                residual,
                1e-10 * max_norm.max(1e-300),
            ));
            report
                .checks
                .push(CheckSection::outcome("frame_bessel", f.bessel, 1.0 + 1e-8));
            report.checks.push(CheckSection::outcome(
                "duality_gap",
                f.certificate.gap,
                flags.tol * f.certificate.pi2_sq.max(1.0),
            ));
            report.factorization = Some(FactorizationSection {
                alpha: f.alpha.clone(),
                frame: sequence_entries(&f.frame),
                bessel: f.bessel,
                cost: f.cost,
                reconstruction_residual: residual,
            });
            report.certificate = Some(certificate_section(&f.certificate, flags.tol, true));
            if let Some(csv) = &flags.csv {
                if let Err(e) = write_csv(csv, &f.alpha, None, None) {
                    eprintln!("csv: {e}");
                    return EXIT_INPUT;
                }
            }
            let ok = report.all_checks_pass();
            report.emit();
            eprintln!(
                "factorize: N={} d={} pi2_sq={:.6} gap={:.3e} bessel={:.12}",
                seq.len(),
                seq.dim(),
                f.certificate.pi2_sq,
                f.certificate.gap,
                f.bessel
            );
            if ok {
                EXIT_OK
            } else {
                EXIT_NOT_CERTIFIED
            }
        }
        Err(LibError::NotCertified { gap, solution }) => {
            report.certificate = Some(certificate_section(&solution, flags.tol, false));
            report.error = Some(ErrorSection {
                kind: "not_certified".to_string(),
                message: format!("duality gap {gap:.3e} above tolerance"),
                index: None,
            });
            report.emit();
            eprintln!("factorize: solver did not certify (gap {gap:.3e})");
            EXIT_NOT_CERTIFIED
        }
        Err(e) => {
            eprintln!("factorize: {e}");
            classify(&e)
        }
    }
}

fn complex_entries(values: &[Scalar]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn cmd_split(path: &PathBuf, kind: SplitKind, flags: &Flags) -> u8 {
    let (file, digest) = match read_problem(path) {
        Ok(ok) => ok,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_INPUT;
        }
    };
    let spec = match file.multiplier_spec() {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_INPUT;
        }
    };
    let command = format!("split:{}", kind.as_str());
    let mut report = Report::new(&command, digest, flags.tol, file.clone());
    let m_scale = spec
        .symbol()
        .iter()
        .map(|z| z.norm())
        .fold(1.0f64, f64::max);

    let outcome: Result<(SplitSection, PietschSolution, Vec<f64>), LibError> = match kind {
        SplitKind::Weak => file
            .witness_vectors()
            .map_err(|e| {
                eprintln!("{e}");
                e
            })
            .map_or(Err(LibError::EmptySequence), |witness| {
                if witness.is_empty() {
                    eprintln!("input error: witness must contain at least one vector");
                    return Err(LibError::EmptySequence);
                }
                ucfactor::splitting::split_weak(&spec, &witness, flags.tol).map(|out| {
                    let section = SplitSection {
                        kind: kind.as_str().to_string(),
                        a: complex_entries(&out.split.a),
                        b: complex_entries(&out.split.b),
                        bessel_a_phi: out.split.bessel_a_phi,
                        bessel_b_psi: out.split.bessel_b_psi,
                        max_residual: out.split.max_residual,
                        beta: Some(out.beta.clone()),
                        margin: Some(out.witness.margin),
                        scale: None,
                        alpha: None,
                        bessel_a_psi: None,
                        frobenius_bessel: None,
                        identity_lhs: None,
                        identity_rhs: None,
                    };
                    (section, out.certificate, out.beta)
                })
            }),
        SplitKind::Absolute => {
            ucfactor::splitting::split_absolute(&spec, flags.tol).map(|out| {
                let section = SplitSection {
                    kind: kind.as_str().to_string(),
                    a: complex_entries(&out.split.a),
                    b: complex_entries(&out.split.b),
                    bessel_a_phi: out.split.bessel_a_phi,
                    bessel_b_psi: out.split.bessel_b_psi,
                    max_residual: out.split.max_residual,
                    beta: None,
                    margin: None,
                    scale: Some(out.scale.clone()),
                    alpha: None,
                    bessel_a_psi: None,
                    frobenius_bessel: None,
                    identity_lhs: None,
                    identity_rhs: None,
                };
                (section, out.certificate, out.scale)
            })
        }
        SplitKind::Measure => file
            .discrete_measure()
            .map_err(|e| {
                eprintln!("{e}");
                e
            })
            .map_or(Err(LibError::EmptySequence), |mu| {
                ucfactor::splitting::split_measure(&spec, &mu, flags.tol).map(|out| {
                    let section = SplitSection {
                        kind: kind.as_str().to_string(),
                        a: complex_entries(&out.split.a),
                        b: complex_entries(&out.split.b),
                        bessel_a_phi: out.split.bessel_a_phi,
                        bessel_b_psi: out.split.bessel_b_psi,
                        max_residual: out.split.max_residual,
                        beta: None,
                        margin: None,
                        scale: None,
                        alpha: Some(out.alpha.clone()),
                        bessel_a_psi: Some(out.bessel_a_psi),
                        frobenius_bessel: Some(out.frobenius_bessel),
                        identity_lhs: Some(out.identity_lhs),
                        identity_rhs: Some(out.identity_rhs),
                    };
                    (section, out.certificate, out.alpha)
                })
            }),
    };

    match outcome {
        Ok((section, certificate, weights)) => {
            report.checks.push(CheckSection::outcome(
                "split_residual",
                section.max_residual,
                1e-10 * m_scale,
            ));
            match kind {
                SplitKind::Weak => {
                    let beta_sq: f64 =
                        weights.iter().map(|b| b * b).sum::<f64>();
                    report.checks.push(CheckSection::outcome(
                        "witness_margin_deficit",
                        (1.0 - section.margin.unwrap()).max(0.0),
                        1e-10,
                    ));
                    report.checks.push(CheckSection::outcome(
                        "bessel_a_phi",
                        section.bessel_a_phi,
                        1.0 + 1e-8,
                    ));
                    report.checks.push(CheckSection::outcome(
                        "bessel_b_psi",
                        section.bessel_b_psi,
                        beta_sq + 1e-8 * beta_sq.max(1.0),
                    ));
                }
                SplitKind::Absolute => {
                    let c_sq: f64 = weights.iter().map(|c| c * c).sum::<f64>();
                    report.checks.push(CheckSection::outcome(
                        "bessel_b_psi",
                        section.bessel_b_psi,
                        1.0 + 1e-8,
                    ));
                    report.checks.push(CheckSection::outcome(
                        "bessel_a_phi",
                        section.bessel_a_phi,
                        c_sq + 1e-8 * c_sq.max(1.0),
                    ));
                }
                SplitKind::Measure => {
                    let lhs = section.identity_lhs.unwrap();
                    let rhs = section.identity_rhs.unwrap();
                    report.checks.push(CheckSection::outcome(
                        "measure_identity_relative",
                        (lhs - rhs).abs() / rhs.max(1e-300),
                        1e-8,
                    ));
                    report.checks.push(CheckSection::outcome(
                        "frobenius_bessel",
                        section.frobenius_bessel.unwrap(),
                        1.0 + 1e-8,
                    ));
                }
            }
            report.checks.push(CheckSection::outcome(
                "duality_gap",
                certificate.gap,
                flags.tol * certificate.pi2_sq.max(1.0),
            ));
            if let Some(csv) = &flags.csv {
                if let Err(e) = write_csv(csv, &weights, Some(&section.a), Some(&section.b)) {
                    eprintln!("csv: {e}");
                    return EXIT_INPUT;
                }
            }
            report.split = Some(section);
            report.certificate = Some(certificate_section(&certificate, flags.tol, true));
            let ok = report.all_checks_pass();
            report.emit();
            eprintln!(
                "split {}: N={} max residual {:.3e}, certificate gap {:.3e}",
                kind.as_str(),
                spec.len(),
                report
                    .split
                    .as_ref()
                    .map(|s| s.max_residual)
                    .unwrap_or(f64::NAN),
                certificate.gap
            );
            if ok {
                EXIT_OK
            } else {
                EXIT_NOT_CERTIFIED
            }
        }
        Err(LibError::EmptySequence) => EXIT_INPUT,
        Err(LibError::NotCertified { gap, solution }) => {
            report.certificate = Some(certificate_section(&solution, flags.tol, false));
            report.error = Some(ErrorSection {
                kind: "not_certified".to_string(),
                message: format!("duality gap {gap:.3e} above tolerance"),
                index: None,
            });
            report.emit();
            eprintln!("split {}: solver did not certify", kind.as_str());
            EXIT_NOT_CERTIFIED
        }
        Err(e) => {
            report.error = Some(error_section(&e));
            report.emit();
            eprintln!("split {}: {e}", kind.as_str());
            classify(&e)
        }
    }
}
