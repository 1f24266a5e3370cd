//! Oracle-backed verification of emitted reports.
//!
//! `verify` re-derives everything it can from the report's input echo and
//! cross-checks the recorded results: dual feasibility and value of the
//! certificate, primal feasibility of the weights, reconstruction residuals,
//! and, within the size caps, brute-force grid and sign-enumeration
//! oracles.  Checks outside a cap are reported as skipped, not failed.

use std::path::PathBuf;

use ucfactor::eigen::hermitian_lambda_min;
use ucfactor::oracle::{brute_pietsch, brute_sign_norm, dual_value, MAX_BRUTE_PIETSCH_DIM};
use ucfactor::space::{c0_operator_norm_exact, c0_operator_norm_sampled};
use ucfactor::splitting::verify_witness;
use ucfactor::{CMatrix, Scalar, VectorSequence};

use crate::problem::{rows_to_matrix, to_symbol, InputError};
use crate::report::{CheckSection, Report};
use crate::{Flags, EXIT_INPUT, EXIT_OK, EXIT_VERIFY_FAILED};

fn load_report(path: &PathBuf) -> Result<Report, InputError> {
    let bytes =
        std::fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_slice(&bytes).map_err(|e| InputError(format!("malformed report: {e}")))
}

/// Checks a certificate (v, X, pi2_sq, gap) against the Gram matrix it
/// claims to dominate.
fn certificate_checks(
    g: &CMatrix,
    cert: &crate::report::CertificateSection,
    tol: f64,
    checks: &mut Vec<CheckSection>,
) -> Result<(), InputError> {
    let n = g.nrows();
    if cert.v.len() != n {
        return Err(InputError(format!(
            "certificate has {} weights for an N = {n} problem",
            cert.v.len()
        )));
    }
    let x = rows_to_matrix(&cert.dual_x, "certificate.dual_x")?;
    if x.nrows() != n {
        return Err(InputError("certificate.dual_x has the wrong size".into()));
    }

    let dual = dual_value(g, &x).map_err(|e| InputError(e.to_string()))?;
    checks.push(CheckSection::outcome(
        "dual_unit_diagonal",
        dual.max_diag_deviation,
        1e-12,
    ));
    checks.push(CheckSection::outcome(
        "dual_psd",
        (-dual.min_eigenvalue).max(0.0),
        1e-10 * (n as f64),
    ));

    let mut slack = -g.clone();
    let mut sum_v = 0.0;
    let mut min_v = f64::INFINITY;
    for (i, &vi) in cert.v.iter().enumerate() {
        slack[(i, i)] += Scalar::new(vi, 0.0);
        sum_v += vi;
        min_v = min_v.min(vi);
    }
    checks.push(CheckSection::outcome("primal_nonnegative", (-min_v).max(0.0), 0.0));
    let g_norm = ucfactor::eigen::hermitian_eigenvalues(g)
        .iter()
        .fold(0.0f64, |m, &l| m.max(l.abs()));
    checks.push(CheckSection::outcome(
        "primal_feasibility",
        (-hermitian_lambda_min(&slack)).max(0.0),
        1e-10 * g_norm.max(1e-300),
    ));
    checks.push(CheckSection::outcome(
        "objective_consistency",
        (sum_v - cert.pi2_sq).abs(),
        1e-12 * cert.pi2_sq.max(1.0),
    ));
    checks.push(CheckSection::outcome(
        "gap_consistency",
        ((cert.pi2_sq - dual.value) - cert.gap).abs(),
        1e-9 * cert.pi2_sq.max(1.0),
    ));
    checks.push(CheckSection::outcome(
        "gap_within_tolerance",
        cert.gap,
        tol * cert.pi2_sq.max(1.0),
    ));

    // brute-force grid oracle, when small enough
    if n <= MAX_BRUTE_PIETSCH_DIM {
        let brute = brute_pietsch(g, 2000).map_err(|e| InputError(e.to_string()))?;
        checks.push(CheckSection::outcome(
            "brute_pietsch_agreement",
            (cert.pi2_sq - brute).abs(),
            3.0 / 2000.0 * cert.pi2_sq.max(1.0),
        ));
    } else {
        checks.push(CheckSection::skipped(
            "brute_pietsch_agreement",
            &format!("N = {n} exceeds the oracle cap {MAX_BRUTE_PIETSCH_DIM}"),
        ));
    }
    Ok(())
}

fn sign_sandwich_checks(
    seq: &VectorSequence,
    pi2_sq: f64,
    flags: &Flags,
    checks: &mut Vec<CheckSection>,
) {
    let n = seq.len();
    let slack = 1e-8 * pi2_sq.max(1.0);
    let exact_cap = flags.max_enum.min(12);
    if n <= exact_cap {
        let c0 = brute_sign_norm(seq).expect("within cap");
        let bessel = seq.bessel_bound();
        checks.push(CheckSection::outcome(
            "bessel_below_c0_squared",
            bessel - c0 * c0,
            slack,
        ));
        checks.push(CheckSection::outcome(
            "c0_squared_below_pi2",
            c0 * c0 - pi2_sq,
            slack,
        ));
        let exact_check = c0_operator_norm_exact(seq, exact_cap).expect("within cap");
        checks.push(CheckSection::outcome(
            "sign_enumeration_agreement",
            (exact_check - c0).abs(),
            0.0,
        ));
    } else if !flags.exact_mode {
        let c0 = c0_operator_norm_sampled(seq, flags.trials, flags.seed);
        checks.push(CheckSection::outcome(
            "sampled_c0_squared_below_pi2",
            c0 * c0 - pi2_sq,
            slack,
        ));
    } else {
        checks.push(CheckSection::skipped(
            "sign_sandwich",
            &format!("N = {n} exceeds the enumeration cap {exact_cap}; rerun with --mode sampled"),
        ));
    }
}

pub fn cmd_verify(path: &PathBuf, flags: &Flags) -> u8 {
    let loaded = match load_report(path) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_INPUT;
        }
    };

    let mut out = Report::new(
        "verify",
        loaded.input_digest.clone(),
        loaded.tol,
        loaded.input.clone(),
    );
    match run_checks(&loaded, flags, &mut out.checks) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("{e}");
            return EXIT_INPUT;
        }
    }

    let all_pass = out.all_checks_pass();
    out.emit();
    for check in &out.checks {
        eprintln!(
            "verify: {:<32} {}{}",
            check.name,
            check.status,
            check
                .measured
                .map(|m| format!(" (measured {m:.3e})"))
                .unwrap_or_default()
        );
    }
    if all_pass {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

fn run_checks(
    loaded: &Report,
    flags: &Flags,
    checks: &mut Vec<CheckSection>,
) -> Result<(), InputError> {
    let cert = loaded
        .certificate
        .as_ref()
        .ok_or_else(|| InputError("report carries no certificate to verify".into()))?;

    if loaded.command == "factorize" {
        let seq = loaded.input.phi_sequence()?;
        certificate_checks(&seq.gram(), cert, loaded.tol, checks)?;
        if let Some(fact) = &loaded.factorization {
            let frame = crate::problem::to_sequence(&fact.frame, seq.dim(), "factorization.frame")?;
            if fact.alpha.len() != seq.len() {
                return Err(InputError("factorization.alpha length mismatch".into()));
            }
            let max_norm = seq.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
            let residual = (0..seq.len())
                .map(|i| {
                    (frame.vector(i) * Scalar::new(fact.alpha[i], 0.0) - seq.vector(i)).norm()
                })
                .fold(0.0f64, f64::max);
            checks.push(CheckSection::outcome(
                "reconstruction_residual",
                residual,
                1e-10 * max_norm.max(1e-300),
            ));
            checks.push(CheckSection::outcome(
                "frame_bessel_recomputed",
                (frame.bessel_bound() - fact.bessel).abs(),
                1e-8 * fact.bessel.max(1.0),
            ));
        }
        sign_sandwich_checks(&seq, cert.pi2_sq, flags, checks);
        return Ok(());
    }

    if let Some(kind) = loaded.command.strip_prefix("split:") {
        let spec = loaded.input.multiplier_spec()?;
        let split = loaded
            .split
            .as_ref()
            .ok_or_else(|| InputError("split report carries no split section".into()))?;
        let a = to_symbol(&split.a, spec.len(), "split.a")?;
        let b = to_symbol(&split.b, spec.len(), "split.b")?;
        let m_scale = spec
            .symbol()
            .iter()
            .map(|z| z.norm())
            .fold(1.0f64, f64::max);
        let residual = spec
            .symbol()
            .iter()
            .zip(a.iter().zip(&b))
            .map(|(m, (ai, bi))| (*m - *ai * bi.conj()).norm())
            .fold(0.0f64, f64::max);
        checks.push(CheckSection::outcome(
            "split_residual",
            residual,
            1e-10 * m_scale,
        ));

        let a_phi = spec
            .phi()
            .scaled(&a)
            .map_err(|e| InputError(e.to_string()))?;
        let b_psi = spec
            .psi()
            .scaled(&b)
            .map_err(|e| InputError(e.to_string()))?;
        checks.push(CheckSection::outcome(
            "bessel_a_phi_recomputed",
            (a_phi.bessel_bound() - split.bessel_a_phi).abs(),
            1e-8 * split.bessel_a_phi.max(1.0),
        ));
        checks.push(CheckSection::outcome(
            "bessel_b_psi_recomputed",
            (b_psi.bessel_bound() - split.bessel_b_psi).abs(),
            1e-8 * split.bessel_b_psi.max(1.0),
        ));

        // the auxiliary sequence whose factorization the certificate covers
        let auxiliary: VectorSequence = match kind {
            "weak" => {
                let witness = loaded.input.witness_vectors()?;
                let w = verify_witness(spec.psi(), &witness)
                    .map_err(|e| InputError(e.to_string()))?;
                checks.push(CheckSection::outcome(
                    "witness_margin_deficit",
                    (1.0 - w.margin).max(0.0),
                    1e-10,
                ));
                let weights: Vec<Scalar> = spec
                    .symbol()
                    .iter()
                    .zip(spec.psi().iter())
                    .map(|(m, psi)| *m * Scalar::new(psi.norm(), 0.0))
                    .collect();
                spec.phi()
                    .scaled(&weights)
                    .map_err(|e| InputError(e.to_string()))?
            }
            "absolute" => {
                let weights: Vec<Scalar> = spec
                    .symbol()
                    .iter()
                    .zip(spec.phi().iter())
                    .map(|(m, phi)| (*m * Scalar::new(phi.norm(), 0.0)).conj())
                    .collect();
                spec.psi()
                    .scaled(&weights)
                    .map_err(|e| InputError(e.to_string()))?
            }
            "measure" => {
                let mu = loaded.input.discrete_measure()?;
                if let (Some(lhs), Some(rhs)) = (split.identity_lhs, split.identity_rhs) {
                    let b_phi = spec
                        .phi()
                        .scaled(&b)
                        .map_err(|e| InputError(e.to_string()))?;
                    let recomputed: f64 = b_phi
                        .iter()
                        .map(|v| mu.second_moment(v).expect("dims checked"))
                        .sum();
                    checks.push(CheckSection::outcome(
                        "measure_identity_recomputed",
                        (recomputed - lhs).abs(),
                        1e-8 * lhs.max(1.0),
                    ));
                    checks.push(CheckSection::outcome(
                        "measure_identity_relative",
                        (lhs - rhs).abs(),
                        1e-8 * rhs.max(1e-300),
                    ));
                }
                ucfactor::splitting::hs_tensor_sequence(&spec).flattened()
            }
            other => {
                return Err(InputError(format!("unknown split kind: {other}")));
            }
        };
        certificate_checks(&auxiliary.gram(), cert, loaded.tol, checks)?;
        return Ok(());
    }

    Err(InputError(format!(
        "cannot verify a '{}' report",
        loaded.command
    )))
}
