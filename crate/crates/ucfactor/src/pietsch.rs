//! The finite 2-summing norm and the weighted factorizations built on it.
//!
//! For a sequence with Gram matrix `G`, the squared 2-summing norm of its
//! synthesis operator (acting from the sup-norm space) is the value of the
//! semidefinite program
//!
//! ```text
//!   minimize  sum_i v_i   subject to  diag(v) >= G,  v >= 0,
//! ```
//!
//! whose dual maximizes `<G, X>` over Hermitian `X >= 0` with unit diagonal.
//! Both sides are computed and returned together, so every optimum carries a
//! certificate: primal feasibility, dual feasibility and the duality gap can
//! all be checked a posteriori without trusting the solver.
//!
//! The solver follows the central path of the log-det barrier
//! `sum_i v_i - tau log det(diag(v) - G)`.  At an exactly centered point the
//! scaled inverse slack `tau (diag(v) - G)^{-1}` has unit diagonal, which is
//! precisely a dual-feasible matrix, and the duality gap equals `tau N`.
//! A final primal polish rescales `v` onto the boundary of the feasible set
//! (up to a tiny safety inflation), which is what makes the frame produced by
//! [`factorize`] attain a Bessel bound of 1 to near machine precision.

use nalgebra::DMatrix;

use crate::eigen;
use crate::error::{Error, Result};
use crate::space::{CMatrix, CVector, Scalar, VectorSequence};

/// Largest `N` accepted by [`min_dominating_diagonal`].
pub const MAX_SDP_DIM: usize = 512;

/// Default duality-gap tolerance, relative to `max(1, sum v)`.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;

/// Primal weights, dual certificate and duality gap of the minimal-trace
/// dominating-diagonal program.
#[derive(Debug, Clone)]
pub struct PietschSolution {
    /// Nonnegative weights with `diag(v) >= G`.
    pub v: Vec<f64>,
    /// `sum_i v_i`, the certified squared 2-summing norm.
    pub pi2_sq: f64,
    /// Hermitian dual feasible matrix: PSD with diagonal exactly 1.
    pub dual_x: CMatrix,
    /// `pi2_sq - Re <G, dual_x>`, nonnegative by weak duality.
    pub gap: f64,
    /// Total Newton iterations spent.
    pub iterations: usize,
}

impl PietschSolution {
    /// `sqrt(v_i)`, the diagonal weights of the nuclear factorization.
    pub fn lambda(&self) -> Vec<f64> {
        self.v.iter().map(|&vi| vi.sqrt()).collect()
    }
}

/// Finite nuclear factorization `synthesis = S . diag(lambda) . B` with
/// `||S|| <= 1` and rows of `B` of l1 norm at most 1.
#[derive(Debug, Clone)]
pub struct NuclearFactorization {
    pub b_matrix: CMatrix,
    pub lambda: Vec<f64>,
    pub s_matrix: CMatrix,
}

/// Output of [`factorize`]: `Phi_n = alpha_n f_n` with `alpha` square-summable
/// as cheaply as possible and `(f_n)` a Bessel sequence with bound at most 1.
#[derive(Debug, Clone)]
pub struct Factorization {
    /// Nonnegative weights; `alpha_n = 0` exactly when `Phi_n = 0`.
    pub alpha: Vec<f64>,
    /// The frame vectors `f_n = Phi_n / alpha_n` (zero where `alpha_n = 0`).
    pub frame: VectorSequence,
    /// Recomputed optimal Bessel bound of the frame.
    pub bessel: f64,
    /// `||alpha||_2^2 * bessel`; equals `pi2_sq` at the optimum.
    pub cost: f64,
    /// The certificate of optimality.
    pub certificate: PietschSolution,
}

fn hermitian_asymmetry(g: &CMatrix) -> f64 {
    let n = g.nrows();
    let mut asym = 0.0f64;
    for j in 0..n {
        for k in j..n {
            asym = asym.max((g[(j, k)] - g[(k, j)].conj()).norm());
        }
    }
    asym
}

fn hermitian_average(g: &CMatrix) -> CMatrix {
    let n = g.nrows();
    let mut h = CMatrix::zeros(n, n);
    for j in 0..n {
        for k in j..n {
            let e = (g[(j, k)] + g[(k, j)].conj()) * Scalar::new(0.5, 0.0);
            h[(j, k)] = e;
            if k != j {
                h[(k, j)] = e.conj();
            } else {
                h[(j, j)] = Scalar::new(e.re, 0.0);
            }
        }
    }
    h
}

// Pivot-checked Cholesky factorizations.  nalgebra's complex Cholesky
// accepts indefinite Hermitian matrices (it takes complex square roots of
// negative pivots), so positive definiteness is verified here by hand; the
// line search below leans on that rejection.
fn cholesky_lower(a: &CMatrix) -> Option<CMatrix> {
    let n = a.nrows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        l[(j, j)] = Scalar::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / Scalar::new(djj, 0.0);
        }
    }
    Some(l)
}

/// Inverse from the Cholesky factor: `A^{-1} = L^{-H} L^{-1}`, assembled as a
/// Gram matrix so the result is Hermitian PSD by construction.
fn cholesky_inverse(l: &CMatrix) -> CMatrix {
    let n = l.nrows();
    let mut linv = CMatrix::zeros(n, n);
    for col in 0..n {
        for i in col..n {
            let mut s = if i == col {
                Scalar::new(1.0, 0.0)
            } else {
                Scalar::new(0.0, 0.0)
            };
            for k in col..i {
                s -= l[(i, k)] * linv[(k, col)];
            }
            linv[(i, col)] = s / l[(i, i)];
        }
    }
    let mut w = CMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let mut s = Scalar::new(0.0, 0.0);
            for k in b..n {
                s += linv[(k, a)].conj() * linv[(k, b)];
            }
            if b == a {
                w[(a, a)] = Scalar::new(s.re, 0.0);
            } else {
                w[(a, b)] = s;
                w[(b, a)] = s.conj();
            }
        }
    }
    w
}

fn cholesky_lower_real(a: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = a.nrows();
    let mut l = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Some(l)
}

fn cholesky_solve_real(l: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    let n = l.nrows();
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l[(i, k)] * y[k];
        }
        y[i] /= l[(i, i)];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            y[i] -= l[(k, i)] * y[k];
        }
        y[i] /= l[(i, i)];
    }
    y
}

struct CentralPathOutcome {
    v: Vec<f64>,
    slack_inverse: CMatrix,
    tau: f64,
    iterations: usize,
}

/// Follows the central path of `t * sum(v) - log det(diag(v) - G)` with
/// damped Newton centering steps, reducing `tau = 1/t` until `tau * n` sits
/// comfortably below the requested gap.
///
/// Rounds that fail to center (the conditioning floor of the inverse slack,
/// or an exhausted budget) are discarded: the outcome is always the deepest
/// snapshot whose centering defect was actually verified, so the dual
/// candidate derived from it is trustworthy.
fn follow_central_path(g: &CMatrix, tol: f64, budget: usize) -> CentralPathOutcome {
    let n = g.nrows();
    // Strictly feasible start: diagonal dominance makes diag(v) - G PD.
    let mut v: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| g[(i, j)].norm()).sum::<f64>() + 0.5)
        .collect();

    let slack = |v: &[f64]| -> CMatrix {
        let mut z = -g;
        for i in 0..n {
            z[(i, i)] += Scalar::new(v[i], 0.0);
        }
        z
    };

    let z = slack(&v);
    let mut tau: f64 = (0..n).map(|i| z[(i, i)].re).sum::<f64>() / n as f64;
    // Aim well under the contract so polish and rounding keep their margin.
    let gap_fraction = 0.02;
    let tau_floor = 1e-13;

    let mut iterations = 0usize;
    let mut w = cholesky_inverse(&cholesky_lower(&z).expect("start point is PD"));
    let mut snapshot: Option<CentralPathOutcome> = None;

    'outer: loop {
        let t = 1.0 / tau;
        let mut prev_decrement = f64::INFINITY;
        let mut centered = false;
        for _ in 0..80 {
            let grad: Vec<f64> = (0..n).map(|i| t - w[(i, i)].re).collect();
            // |1 - tau * W_ii| is the centering defect that the final diagonal
            // rescale of the dual candidate has to absorb.
            let defect = grad.iter().fold(0.0f64, |m, gi| m.max((tau * gi).abs()));
            if defect <= 1e-10 {
                centered = true;
                break;
            }
            iterations += 1;
            if iterations > budget {
                break 'outer;
            }
            let hess = DMatrix::<f64>::from_fn(n, n, |i, j| w[(i, j)].norm_sqr());
            let hl = match cholesky_lower_real(&hess) {
                Some(hl) => hl,
                None => break 'outer,
            };
            let neg: Vec<f64> = grad.iter().map(|gi| -gi).collect();
            let dir = cholesky_solve_real(&hl, &neg);
            let decrement_sq: f64 = grad.iter().zip(&dir).map(|(gi, di)| -gi * di).sum();
            let decrement = decrement_sq.max(0.0).sqrt();
            // Newton stops making progress once rounding floors the
            // decrement.  The diagonal rescale of the dual candidate absorbs
            // a defect of this size with at most a comparable relative
            // distortion of the (already tiny) gap, so anything clearly
            // below 1 is still a trustworthy round; a defect near or above 1
            // means the inverse slack has degenerated into noise.
            if decrement <= 1e-9 || (decrement < 1e-3 && decrement > 0.5 * prev_decrement) {
                centered = defect <= 0.5;
                break;
            }
            prev_decrement = decrement;
            // Damped Newton for the self-concordant objective.
            let mut step = if decrement <= 0.25 {
                1.0
            } else {
                1.0 / (1.0 + decrement)
            };
            let mut moved = false;
            for _ in 0..60 {
                let v_try: Vec<f64> = v.iter().zip(&dir).map(|(vi, di)| vi + step * di).collect();
                let z_try = slack(&v_try);
                if let Some(l_try) = cholesky_lower(&z_try) {
                    v = v_try;
                    w = cholesky_inverse(&l_try);
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break 'outer;
            }
        }

        if !centered {
            break;
        }
        snapshot = Some(CentralPathOutcome {
            v: v.clone(),
            slack_inverse: w.clone(),
            tau,
            iterations,
        });
        let sum_v: f64 = v.iter().sum();
        if tau * n as f64 <= gap_fraction * tol * sum_v || tau <= tau_floor {
            break;
        }
        tau *= 0.125;
    }

    snapshot.unwrap_or(CentralPathOutcome {
        v,
        slack_inverse: w,
        tau,
        iterations,
    })
}

/// Solves `minimize sum_i v_i` over `diag(v) >= G`, `v >= 0`, returning the
/// optimal weights together with a dual certificate.
///
/// `G` must be Hermitian and PSD up to tolerance, with `N <= MAX_SDP_DIM`.
/// The returned solution satisfies `gap <= tol * max(1, pi2_sq)`; when the
/// iteration budget runs out first, the best iterate is attached to the
/// [`Error::NotCertified`] error instead.
pub fn min_dominating_diagonal(gram: &CMatrix, tol: f64) -> Result<PietschSolution> {
    let n = gram.nrows();
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    if gram.ncols() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: gram.ncols(),
        });
    }
    if n > MAX_SDP_DIM {
        return Err(Error::TooLarge { n, max: MAX_SDP_DIM });
    }
    if !gram.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite);
    }

    let abs_max = gram.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let asymmetry = hermitian_asymmetry(gram);
    if asymmetry > 1e-10 * abs_max.max(1.0) {
        return Err(Error::NotHermitian { asymmetry });
    }
    let g = hermitian_average(gram);

    let evals = eigen::hermitian_eigenvalues(&g);
    let lambda_min = evals[0];
    let lambda_max = evals[n - 1];
    let norm = lambda_min.abs().max(lambda_max.abs());
    if lambda_min < -1e-10 * norm {
        return Err(Error::NotPositiveSemidefinite { lambda_min });
    }

    // Indices with an exactly zero diagonal carry v_i = 0 and are excluded
    // from the interior solve; the dual block there is the identity.
    let support: Vec<usize> = (0..n).filter(|&i| g[(i, i)].re > 0.0).collect();
    let mut v_full = vec![0.0f64; n];
    let mut x_full = CMatrix::identity(n, n);

    if support.is_empty() {
        return Ok(PietschSolution {
            v: v_full,
            pi2_sq: 0.0,
            dual_x: x_full,
            gap: 0.0,
            iterations: 0,
        });
    }

    let ns = support.len();
    let scale = support
        .iter()
        .map(|&i| g[(i, i)].re)
        .fold(0.0f64, f64::max);
    let gs = CMatrix::from_fn(ns, ns, |a, b| g[(support[a], support[b])] / scale);

    // 10 N^2 Newton steps, floored so small problems can walk the whole path
    let budget = 10 * ns * ns + 400;
    let outcome = follow_central_path(&gs, tol.max(1e-12), budget);

    // Dual candidate: rescale tau * Z^{-1} to unit diagonal, exactly.
    let w = &outcome.slack_inverse;
    let diag: Vec<f64> = (0..ns).map(|i| (outcome.tau * w[(i, i)].re).max(1e-300)).collect();
    let mut x = CMatrix::zeros(ns, ns);
    for a in 0..ns {
        x[(a, a)] = Scalar::new(1.0, 0.0);
        for b in (a + 1)..ns {
            let e = w[(a, b)] * Scalar::new(outcome.tau / (diag[a] * diag[b]).sqrt(), 0.0);
            x[(a, b)] = e;
            x[(b, a)] = e.conj();
        }
    }

    // Primal polish: pull v onto the feasible boundary, then inflate by a
    // hair so the reported gap stays nonnegative under rounding.
    let mut v = outcome.v.clone();
    let dinv = CMatrix::from_fn(ns, ns, |a, b| {
        if a == b {
            Scalar::new(1.0 / v[a].sqrt(), 0.0)
        } else {
            Scalar::new(0.0, 0.0)
        }
    });
    let sandwich = hermitian_average(&(&dinv * &gs * &dinv));
    let mu = eigen::hermitian_lambda_max(&sandwich).max(0.0);
    let inflation = 1e-12 + (ns as f64) * (ns as f64) * 4e-16;
    if mu > 0.0 {
        let factor = mu * (1.0 + inflation);
        for vi in &mut v {
            *vi *= factor;
        }
    }

    let pi2_scaled: f64 = v.iter().sum();
    let mut dual_scaled = 0.0f64;
    for a in 0..ns {
        for b in 0..ns {
            dual_scaled += (gs[(a, b)] * x[(b, a)]).re;
        }
    }
    let gap_scaled = pi2_scaled - dual_scaled;

    for (a, &i) in support.iter().enumerate() {
        v_full[i] = scale * v[a];
        for (b, &j) in support.iter().enumerate() {
            x_full[(i, j)] = x[(a, b)];
        }
    }
    let pi2_sq: f64 = v_full.iter().sum();
    let gap = scale * gap_scaled;

    let solution = PietschSolution {
        v: v_full,
        pi2_sq,
        dual_x: x_full,
        gap,
        iterations: outcome.iterations,
    };

    if gap >= 0.0 && gap <= tol * pi2_sq.max(1.0) {
        Ok(solution)
    } else {
        Err(Error::NotCertified {
            gap,
            solution: Box::new(solution),
        })
    }
}

/// Nuclear factorization of the synthesis operator with `B = I`:
/// `lambda_i = sqrt(v_i)` and `S` the synthesis of the normalized columns.
pub fn pietsch_factorize(seq: &VectorSequence, tol: f64) -> Result<NuclearFactorization> {
    let solution = min_dominating_diagonal(&seq.gram(), tol)?;
    let lambda = solution.lambda();
    let d = seq.dim();
    let n = seq.len();
    let s_matrix = CMatrix::from_fn(d, n, |i, k| {
        if lambda[k] > 0.0 {
            seq.vector(k)[i] / Scalar::new(lambda[k], 0.0)
        } else {
            Scalar::new(0.0, 0.0)
        }
    });
    Ok(NuclearFactorization {
        b_matrix: CMatrix::identity(n, n),
        lambda,
        s_matrix,
    })
}

/// The general weighted construction: given nonnegative `lambda` and a matrix
/// `B` whose rows have l1 norm at most 1, produces weights
/// `alpha_k^2 = sum_i lambda_i^2 |B_ik|` and vectors
/// `f_k = (lambda_i B_ik)_i / alpha_k`.
///
/// `sum_k alpha_k^2 = sum_i lambda_i^2 ||b^i||_1` holds by rearrangement, and
/// the resulting `(f_k)` is a Bessel sequence with bound at most 1.
pub fn construct_alpha_f(lambda: &[f64], b: &CMatrix) -> Result<(Vec<f64>, VectorSequence)> {
    let rows = b.nrows();
    let cols = b.ncols();
    if lambda.len() != rows {
        return Err(Error::LengthMismatch {
            left: lambda.len(),
            right: rows,
        });
    }
    for (i, &li) in lambda.iter().enumerate() {
        if li < 0.0 || !li.is_finite() {
            return Err(Error::NegativeWeight { index: i, value: li });
        }
    }
    for i in 0..rows {
        let l1: f64 = (0..cols).map(|k| b[(i, k)].norm()).sum();
        if l1 > 1.0 + 1e-12 {
            return Err(Error::RowNormViolation { row: i, norm: l1 });
        }
    }

    let mut alpha = Vec::with_capacity(cols);
    let mut vectors = Vec::with_capacity(cols);
    for k in 0..cols {
        let alpha_sq: f64 = (0..rows)
            .map(|i| lambda[i] * lambda[i] * b[(i, k)].norm())
            .sum();
        let a = alpha_sq.sqrt();
        alpha.push(a);
        if a > 0.0 {
            vectors.push(CVector::from_fn(rows, |i, _| {
                b[(i, k)] * Scalar::new(lambda[i] / a, 0.0)
            }));
        } else {
            vectors.push(CVector::zeros(rows));
        }
    }
    Ok((alpha, VectorSequence::new(vectors)?))
}

/// Optimal factorization `Phi_n = alpha_n f_n`: the specialization of the
/// nuclear construction with `B = I`, so `alpha_k = sqrt(v_k)` and
/// `f_k = Phi_k / alpha_k`.
pub fn factorize(seq: &VectorSequence, tol: f64) -> Result<Factorization> {
    let certificate = min_dominating_diagonal(&seq.gram(), tol)?;
    let alpha = certificate.lambda();
    let vectors: Vec<CVector> = seq
        .iter()
        .zip(&alpha)
        .map(|(phi, &a)| {
            if a > 0.0 {
                phi.unscale(a)
            } else {
                CVector::zeros(seq.dim())
            }
        })
        .collect();
    let frame = VectorSequence::new(vectors)?;
    let bessel = frame.bessel_bound();
    let alpha_norm_sq: f64 = alpha.iter().map(|a| a * a).sum();
    Ok(Factorization {
        alpha,
        frame,
        bessel,
        cost: alpha_norm_sq * bessel,
        certificate,
    })
}

/// `||alpha||_2^2 * bessel_bound(f)`: the objective that any factorization
/// `Phi_n = alpha_n f_n` pays, which the optimal one pushes down to `pi2_sq`.
pub fn factorization_cost(alpha: &[f64], f: &VectorSequence) -> Result<f64> {
    if alpha.len() != f.len() {
        return Err(Error::LengthMismatch {
            left: alpha.len(),
            right: f.len(),
        });
    }
    let alpha_norm_sq: f64 = alpha.iter().map(|a| a * a).sum();
    Ok(alpha_norm_sq * f.bessel_bound())
}
