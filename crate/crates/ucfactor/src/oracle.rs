//! Independent brute-force references.
//!
//! These are deliberately naive: grid search over the weight simplex for the
//! dominating-diagonal program, exhaustive sign enumeration for sup-norm-ball
//! operator norms, direct evaluation of dual certificates, and random
//! sampling of the factorization cost envelope.  They exist so that every
//! optimizer answer in this crate can be cross-checked by code that shares
//! none of its machinery, and they back the CLI's `verify` command.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pietsch::factorization_cost;
use crate::space::{CMatrix, CVector, Scalar, VectorSequence};

/// Largest `N` accepted by [`brute_pietsch`].
pub const MAX_BRUTE_PIETSCH_DIM: usize = 3;

/// Largest `N` accepted by [`brute_sign_norm`].
pub const MAX_BRUTE_SIGN_DIM: usize = 20;

/// Largest eigenvalue of a Hermitian matrix of size at most 3, by closed
/// form (trigonometric resolution of the characteristic cubic).
fn eig_max_small(a: &CMatrix) -> f64 {
    match a.nrows() {
        1 => a[(0, 0)].re,
        2 => {
            let half_tr = 0.5 * (a[(0, 0)].re + a[(1, 1)].re);
            let half_diff = 0.5 * (a[(0, 0)].re - a[(1, 1)].re);
            half_tr + (half_diff * half_diff + a[(0, 1)].norm_sqr()).sqrt()
        }
        3 => {
            let p1 = a[(0, 1)].norm_sqr() + a[(0, 2)].norm_sqr() + a[(1, 2)].norm_sqr();
            let d = [a[(0, 0)].re, a[(1, 1)].re, a[(2, 2)].re];
            if p1 == 0.0 {
                return d[0].max(d[1]).max(d[2]);
            }
            let q = (d[0] + d[1] + d[2]) / 3.0;
            let p2 = (d[0] - q).powi(2) + (d[1] - q).powi(2) + (d[2] - q).powi(2) + 2.0 * p1;
            let p = (p2 / 6.0).sqrt();
            let b = CMatrix::from_fn(3, 3, |i, j| {
                let shift = if i == j { Scalar::new(q, 0.0) } else { Scalar::new(0.0, 0.0) };
                (a[(i, j)] - shift) / Scalar::new(p, 0.0)
            });
            let det = (b[(0, 0)] * (b[(1, 1)] * b[(2, 2)] - b[(1, 2)] * b[(2, 1)])
                - b[(0, 1)] * (b[(1, 0)] * b[(2, 2)] - b[(1, 2)] * b[(2, 0)])
                + b[(0, 2)] * (b[(1, 0)] * b[(2, 1)] - b[(1, 1)] * b[(2, 0)]))
                .re;
            let r = (det / 2.0).clamp(-1.0, 1.0);
            let phi = r.acos() / 3.0;
            q + 2.0 * p * phi.cos()
        }
        _ => unreachable!("eig_max_small is only used for N <= 3"),
    }
}

/// Feasible objective value for a point of the weight simplex: the least `t`
/// with `t * diag(mu) >= G`, i.e. the top eigenvalue of the sandwich
/// `diag(mu)^{-1/2} G diag(mu)^{-1/2}`.
fn simplex_value(g: &CMatrix, mu: &[f64]) -> f64 {
    let n = g.nrows();
    let s = CMatrix::from_fn(n, n, |i, j| g[(i, j)] / Scalar::new((mu[i] * mu[j]).sqrt(), 0.0));
    eig_max_small(&s)
}

/// Approximate squared 2-summing norm by grid search over the weight simplex
/// followed by a pattern-search refinement around the best cell.
///
/// Every evaluation is primal feasible, so the result is an upper bound on
/// the true optimum; refinement along divisor chains of the resolution is
/// monotone non-increasing.  Only `N <= 3` is supported.
pub fn brute_pietsch(g: &CMatrix, resolution: usize) -> Result<f64> {
    let n = g.nrows();
    if g.ncols() != n {
        return Err(Error::DimensionMismatch { left: n, right: g.ncols() });
    }
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    if n > MAX_BRUTE_PIETSCH_DIM {
        return Err(Error::TooLarge { n, max: MAX_BRUTE_PIETSCH_DIM });
    }
    let resolution = resolution.max(2);

    // Exactly zero diagonal forces weight zero; search only the support.
    let support: Vec<usize> = (0..n).filter(|&i| g[(i, i)].re > 0.0).collect();
    if support.is_empty() {
        return Ok(0.0);
    }
    let ns = support.len();
    let gs = CMatrix::from_fn(ns, ns, |a, b| g[(support[a], support[b])]);

    if ns == 1 {
        return Ok(gs[(0, 0)].re);
    }

    let res = resolution;
    let mut best = f64::INFINITY;
    let mut best_mu = vec![1.0 / ns as f64; ns];
    let eval = |mu: &[f64], best: &mut f64, best_mu: &mut Vec<f64>| {
        let t = simplex_value(&gs, mu);
        if t < *best {
            *best = t;
            best_mu.copy_from_slice(mu);
        }
    };

    // Interior grid pass.
    match ns {
        2 => {
            for k in 1..res {
                let mu = [k as f64 / res as f64, (res - k) as f64 / res as f64];
                eval(&mu, &mut best, &mut best_mu);
            }
        }
        3 => {
            for k1 in 1..(res - 1) {
                for k2 in 1..(res - k1) {
                    let k3 = res - k1 - k2;
                    let mu = [
                        k1 as f64 / res as f64,
                        k2 as f64 / res as f64,
                        k3 as f64 / res as f64,
                    ];
                    eval(&mu, &mut best, &mut best_mu);
                }
            }
        }
        _ => unreachable!(),
    }

    // Pattern-search polish inside the winning cell.
    let mut radius = 2.0 / res as f64;
    while radius > 1e-13 {
        let mut improved = false;
        for i in 0..ns {
            for j in 0..ns {
                if i == j {
                    continue;
                }
                let mut mu = best_mu.clone();
                mu[i] += radius;
                mu[j] -= radius;
                if mu[j] <= 0.0 {
                    continue;
                }
                let t = simplex_value(&gs, &mu);
                if t < best {
                    best = t;
                    best_mu = mu;
                    improved = true;
                }
            }
        }
        if !improved {
            radius *= 0.5;
        }
    }

    Ok(best)
}

/// Exhaustive `max over all eps in {+-1}^N of ||sum_n eps_n Phi_n||`.
pub fn brute_sign_norm(seq: &VectorSequence) -> Result<f64> {
    let n = seq.len();
    if n > MAX_BRUTE_SIGN_DIM {
        return Err(Error::TooLarge { n, max: MAX_BRUTE_SIGN_DIM });
    }
    let mut best = 0.0f64;
    for mask in 0u64..(1u64 << n) {
        let mut acc = CVector::zeros(seq.dim());
        for (i, v) in seq.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                acc -= v;
            } else {
                acc += v;
            }
        }
        best = best.max(acc.norm_squared());
    }
    Ok(best.sqrt())
}

/// Outcome of checking a dual certificate against a Gram matrix.
#[derive(Debug, Clone)]
pub struct DualCheck {
    /// `Re <G, X>`, the dual objective.
    pub value: f64,
    /// Smallest eigenvalue of the Hermitian part of `X`.
    pub min_eigenvalue: f64,
    /// Largest deviation of `diag(X)` from 1 (includes imaginary parts).
    pub max_diag_deviation: f64,
    /// `X >= -1e-10 * max(1, ||X||)` holds.
    pub psd: bool,
    /// Diagonal is 1 up to 1e-12.
    pub unit_diagonal: bool,
}

impl DualCheck {
    pub fn feasible(&self) -> bool {
        self.psd && self.unit_diagonal
    }
}

/// Evaluates the Frobenius pairing `Re <G, X>` and checks dual feasibility
/// (`X` PSD up to tolerance with unit diagonal).
pub fn dual_value(g: &CMatrix, x: &CMatrix) -> Result<DualCheck> {
    let n = g.nrows();
    if g.ncols() != n || x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch { left: g.nrows() * g.ncols(), right: x.nrows() * x.ncols() });
    }
    let mut value = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            value += (g[(a, b)] * x[(b, a)]).re;
        }
    }
    let herm = CMatrix::from_fn(n, n, |a, b| (x[(a, b)] + x[(b, a)].conj()) * Scalar::new(0.5, 0.0));
    let evals = crate::eigen::hermitian_eigenvalues(&herm);
    let min_eigenvalue = evals[0];
    let max_abs = evals.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    let max_diag_deviation = (0..n)
        .map(|i| (x[(i, i)] - Scalar::new(1.0, 0.0)).norm())
        .fold(0.0f64, f64::max);
    Ok(DualCheck {
        value,
        min_eigenvalue,
        max_diag_deviation,
        psd: min_eigenvalue >= -1e-10 * max_abs.max(1.0),
        unit_diagonal: max_diag_deviation <= 1e-12,
    })
}

/// Empirical upper envelope for the optimal factorization cost: the minimum
/// of [`factorization_cost`] over random positive column scalings.  Returns
/// infinity when `trials == 0`; deterministic in `(trials, seed)`.
pub fn random_factorization_cost(seq: &VectorSequence, trials: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    let n = seq.len();
    for _ in 0..trials {
        let mut alpha = Vec::with_capacity(n);
        let mut vectors = Vec::with_capacity(n);
        for v in seq.iter() {
            let a: f64 = rng.gen_range(-1.5f64..1.5).exp();
            if v.norm_squared() > 0.0 {
                alpha.push(a);
                vectors.push(v.unscale(a));
            } else {
                alpha.push(0.0);
                vectors.push(CVector::zeros(seq.dim()));
            }
        }
        let f = VectorSequence::new(vectors).expect("scaled copy of a valid sequence");
        let cost = factorization_cost(&alpha, &f).expect("lengths match");
        best = best.min(cost);
    }
    best
}
