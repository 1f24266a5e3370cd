//! Symbol splitting: writing `m_n = a_n conj(b_n)` so that `(a_n Phi_n)` and
//! `(b_n Psi_n)` are Bessel sequences with certified bounds.
//!
//! Three constructions are provided, each reducing to the weighted
//! factorization of module [`pietsch`](crate::pietsch) applied to a different
//! auxiliary sequence:
//!
//! * [`split_weak`] assumes a finite witness family keeping the normalized
//!   `Psi_n` away from zero weakly, and factorizes `(m_n ||Psi_n|| Phi_n)`;
//! * [`split_absolute`] folds `||Phi_n||` into the symbol and factorizes
//!   `(conj(m_n ||Phi_n||) Psi_n)`;
//! * [`split_measure`] factorizes the rank-one tensors `m_n Psi_n (x) Phi_n`
//!   in Frobenius geometry and converts the weights through a discrete
//!   probability measure on the unit ball.
//!
//! All scale factors produced by the factorization are real nonnegative;
//! complex phase lives entirely in `a` and `b`.

use crate::error::{Error, Result};
use crate::multiplier::MultiplierSpec;
use crate::pietsch::{factorize, PietschSolution};
use crate::space::{check_finite_vector, inner, CMatrix, CVector, Scalar, VectorSequence};

/// A verified symbol splitting `m_n = a_n conj(b_n)`.
#[derive(Debug, Clone)]
pub struct SymbolSplit {
    pub a: Vec<Scalar>,
    pub b: Vec<Scalar>,
    /// Optimal Bessel bound of `(a_n Phi_n)`.
    pub bessel_a_phi: f64,
    /// Optimal Bessel bound of `(b_n Psi_n)`.
    pub bessel_b_psi: f64,
    /// `max_n |m_n - a_n conj(b_n)|`.
    pub max_residual: f64,
}

/// Finitely many vectors witnessing that the normalized `Psi_n` stay away
/// from zero weakly: `margin = min_n sum_k |<f_k, Psi_n / ||Psi_n||>|`.
#[derive(Debug, Clone)]
pub struct WeakWitness {
    pub vectors: Vec<CVector>,
    pub margin: f64,
}

/// A finitely supported probability measure on the closed unit ball.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    points: Vec<CVector>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(points: Vec<CVector>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySequence);
        }
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch {
                left: points.len(),
                right: weights.len(),
            });
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut sum = 0.0;
        for (j, w) in weights.iter().enumerate() {
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::NegativeWeight { index: j, value: *w });
            }
            sum += w;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMeasureWeights { sum });
        }
        for (j, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.len(),
                });
            }
            check_finite_vector(p)?;
            let norm = p.norm();
            if norm > 1.0 + 1e-12 {
                return Err(Error::PointOutsideUnitBall { index: j, norm });
            }
        }
        Ok(Self { points, weights })
    }

    pub fn points(&self) -> &[CVector] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // J >= 1 by construction
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// `sum_j w_j |<x, g_j>|^2`, the discrete second moment against `x`.
    pub fn second_moment(&self, x: &CVector) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: x.len(),
            });
        }
        Ok(self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(g, w)| w * g.dotc(x).norm_sqr())
            .sum())
    }
}

/// The rank-one tensors `m_n Psi_n (x) Phi_n`, with the convention
/// `(psi (x) phi) h = <h, phi> psi`, i.e. the matrix `psi phi^H`.
#[derive(Debug, Clone)]
pub struct HSSequence {
    tensors: Vec<CMatrix>,
}

impl HSSequence {
    pub fn tensors(&self) -> &[CMatrix] {
        &self.tensors
    }

    /// Row-major flattening into vectors of `C^{d^2}`; the standard inner
    /// product of the flattenings is the Frobenius pairing of the tensors.
    pub fn flattened(&self) -> VectorSequence {
        let d = self.tensors[0].nrows();
        VectorSequence::new(
            self.tensors
                .iter()
                .map(|t| CVector::from_fn(d * d, |idx, _| t[(idx / d, idx % d)]))
                .collect(),
        )
        .expect("tensors are finite and uniformly sized")
    }
}

/// Builds the Hilbert-Schmidt tensor sequence of a multiplier.
pub fn hs_tensor_sequence(spec: &MultiplierSpec) -> HSSequence {
    let d = spec.dim();
    let tensors = (0..spec.len())
        .map(|n| {
            let m = spec.symbol()[n];
            let psi = spec.psi().vector(n);
            let phi = spec.phi().vector(n);
            CMatrix::from_fn(d, d, |i, j| m * psi[i] * phi[j].conj())
        })
        .collect();
    HSSequence { tensors }
}

/// Checks a witness family against `(Psi_n)`: every `Psi_n` must be nonzero,
/// and the margin `min_n sum_k |<f_k, Psi_n/||Psi_n||>|` is recomputed here.
pub fn verify_witness(psi: &VectorSequence, witness: &[CVector]) -> Result<WeakWitness> {
    for f in witness {
        if f.len() != psi.dim() {
            return Err(Error::DimensionMismatch {
                left: psi.dim(),
                right: f.len(),
            });
        }
        check_finite_vector(f)?;
    }
    let mut margin = f64::INFINITY;
    for (n, v) in psi.iter().enumerate() {
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector(n));
        }
        let total: f64 = witness.iter().map(|f| v.dotc(f).norm() / norm).sum();
        margin = margin.min(total);
    }
    Ok(WeakWitness {
        vectors: witness.to_vec(),
        margin,
    })
}

/// [`SymbolSplit`] plus the data produced along the way by [`split_weak`].
#[derive(Debug, Clone)]
pub struct WeakSplit {
    pub split: SymbolSplit,
    /// Factorization weights of `(m_n ||Psi_n|| Phi_n)`.
    pub beta: Vec<f64>,
    pub witness: WeakWitness,
    pub certificate: PietschSolution,
}

/// [`SymbolSplit`] plus the data produced along the way by [`split_absolute`].
#[derive(Debug, Clone)]
pub struct AbsoluteSplit {
    pub split: SymbolSplit,
    /// Factorization weights of `(conj(m_n ||Phi_n||) Psi_n)`.
    pub scale: Vec<f64>,
    pub certificate: PietschSolution,
}

/// [`SymbolSplit`] plus the measure-side report of [`split_measure`].
#[derive(Debug, Clone)]
pub struct MeasureSplit {
    pub split: SymbolSplit,
    /// Factorization weights of the tensors in Frobenius geometry.
    pub alpha: Vec<f64>,
    /// Optimal Bessel bound of `(a_n Psi_n)`, the side the measure
    /// construction controls directly.
    pub bessel_a_psi: f64,
    /// Certified Bessel bound of the Frobenius-space frame.
    pub frobenius_bessel: f64,
    /// `sum_n sum_j w_j |<g_j, b_n Phi_n>|^2`, which must equal `sum alpha^2`.
    pub identity_lhs: f64,
    pub identity_rhs: f64,
    pub certificate: PietschSolution,
}

fn max_residual(symbol: &[Scalar], a: &[Scalar], b: &[Scalar]) -> f64 {
    symbol
        .iter()
        .zip(a.iter().zip(b))
        .map(|(m, (ai, bi))| (*m - *ai * bi.conj()).norm())
        .fold(0.0, f64::max)
}

fn split_from(
    spec: &MultiplierSpec,
    a: Vec<Scalar>,
    b: Vec<Scalar>,
) -> Result<SymbolSplit> {
    let a_phi = spec.phi().scaled(&a)?;
    let b_psi = spec.psi().scaled(&b)?;
    Ok(SymbolSplit {
        max_residual: max_residual(spec.symbol(), &a, &b),
        bessel_a_phi: a_phi.bessel_bound(),
        bessel_b_psi: b_psi.bessel_bound(),
        a,
        b,
    })
}

/// Splitting under a weak non-accumulation witness: factorizes
/// `Theta_n = m_n ||Psi_n|| Phi_n = beta_n g_n` and sets
/// `a_n = m_n ||Psi_n|| / beta_n`, `b_n = beta_n / ||Psi_n||`.
///
/// `(a_n Phi_n)` is then exactly the factorization frame (Bessel bound at
/// most 1), while `(b_n Psi_n)` consists of unit vectors scaled by `beta`,
/// so its Bessel bound is at most `||beta||_2^2`.
pub fn split_weak(
    spec: &MultiplierSpec,
    witness: &[CVector],
    tol: f64,
) -> Result<WeakSplit> {
    let witness = verify_witness(spec.psi(), witness)?;
    if witness.margin < 1.0 - 1e-10 {
        return Err(Error::WitnessMarginTooSmall {
            margin: witness.margin,
        });
    }
    let psi_norms: Vec<f64> = spec.psi().iter().map(|v| v.norm()).collect();
    let theta_weights: Vec<Scalar> = spec
        .symbol()
        .iter()
        .zip(&psi_norms)
        .map(|(m, &w)| *m * Scalar::new(w, 0.0))
        .collect();
    let theta = spec.phi().scaled(&theta_weights)?;
    let factorization = factorize(&theta, tol)?;
    let beta = factorization.alpha.clone();

    let mut a = Vec::with_capacity(spec.len());
    let mut b = Vec::with_capacity(spec.len());
    for n in 0..spec.len() {
        let m = spec.symbol()[n];
        if beta[n] > 0.0 {
            a.push(m * Scalar::new(psi_norms[n] / beta[n], 0.0));
            b.push(Scalar::new(beta[n] / psi_norms[n], 0.0));
        } else if m == Scalar::new(0.0, 0.0) {
            a.push(Scalar::new(0.0, 0.0));
            b.push(Scalar::new(0.0, 0.0));
        } else {
            // Theta_n vanished with m_n != 0, so Phi_n = 0: the index carries
            // no mass on the a-side and the identity m = a conj(b) picks a.
            a.push(m);
            b.push(Scalar::new(1.0, 0.0));
        }
    }

    Ok(WeakSplit {
        split: split_from(spec, a, b)?,
        beta,
        witness,
        certificate: factorization.certificate,
    })
}

/// Splitting under absolute convergence: folds `||Phi_n||` into the symbol,
/// factorizes `Xi_n = conj(m_n ||Phi_n||) Psi_n = c_n h_n` and sets
/// `b_n = conj(m_n ||Phi_n||) / c_n`, `a_n = c_n / ||Phi_n||`.
///
/// `(b_n Psi_n)` is exactly the factorization frame; `(a_n Phi_n)` is the
/// normalized `Phi` scaled by `c`, so its Bessel bound is at most
/// `sum_n c_n^2`.
pub fn split_absolute(spec: &MultiplierSpec, tol: f64) -> Result<AbsoluteSplit> {
    let zero = Scalar::new(0.0, 0.0);
    for n in 0..spec.len() {
        if spec.symbol()[n] != zero
            && (spec.phi().vector(n).norm() == 0.0 || spec.psi().vector(n).norm() == 0.0)
        {
            return Err(Error::ZeroVectorWithNonzeroSymbol { index: n });
        }
    }
    let phi_norms: Vec<f64> = spec.phi().iter().map(|v| v.norm()).collect();
    let folded: Vec<Scalar> = spec
        .symbol()
        .iter()
        .zip(&phi_norms)
        .map(|(m, &w)| (*m * Scalar::new(w, 0.0)).conj())
        .collect();
    let xi = spec.psi().scaled(&folded)?;
    let factorization = factorize(&xi, tol)?;
    let scale = factorization.alpha.clone();

    let mut a = Vec::with_capacity(spec.len());
    let mut b = Vec::with_capacity(spec.len());
    for n in 0..spec.len() {
        let m = spec.symbol()[n];
        if m == zero {
            a.push(zero);
            b.push(zero);
        } else if scale[n] > 0.0 {
            a.push(Scalar::new(scale[n] / phi_norms[n], 0.0));
            b.push(folded[n] / Scalar::new(scale[n], 0.0));
        } else {
            return Err(Error::ZeroWeight { index: n });
        }
    }

    Ok(AbsoluteSplit {
        split: split_from(spec, a, b)?,
        scale,
        certificate: factorization.certificate,
    })
}

/// Splitting through a discrete measure: factorizes the tensors
/// `m_n Psi_n (x) Phi_n = alpha_n F_n` in Frobenius geometry, then sets
/// `a_n^2 = |m_n / alpha_n|^2 sum_j w_j |<g_j, Phi_n>|^2` and
/// `b_n = conj(m_n) / a_n`.
///
/// Requires `sum_j w_j |<g_j, Phi_n>|^2 > 0` wherever `m_n != 0`; the
/// measure-side identity `sum_n sum_j w_j |<g_j, b_n Phi_n>|^2 = sum alpha^2`
/// is recomputed and reported.
pub fn split_measure(
    spec: &MultiplierSpec,
    mu: &DiscreteMeasure,
    tol: f64,
) -> Result<MeasureSplit> {
    if mu.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            left: spec.dim(),
            right: mu.dim(),
        });
    }
    let tensors = hs_tensor_sequence(spec);
    let factorization = factorize(&tensors.flattened(), tol)?;
    let alpha = factorization.alpha.clone();
    let zero = Scalar::new(0.0, 0.0);

    let mut a = Vec::with_capacity(spec.len());
    let mut b = Vec::with_capacity(spec.len());
    for (n, &alpha_n) in alpha.iter().enumerate() {
        let m = spec.symbol()[n];
        if m == zero {
            a.push(zero);
            b.push(zero);
            continue;
        }
        if alpha_n == 0.0 {
            return Err(Error::ZeroWeight { index: n });
        }
        let moment = mu.second_moment(spec.phi().vector(n))?;
        if moment == 0.0 {
            return Err(Error::DegenerateMeasure { index: n });
        }
        let a_n = m.norm() / alpha_n * moment.sqrt();
        a.push(Scalar::new(a_n, 0.0));
        b.push(m.conj() / Scalar::new(a_n, 0.0));
    }

    let b_phi = spec.phi().scaled(&b)?;
    let identity_lhs: f64 = b_phi
        .iter()
        .map(|v| mu.second_moment(v).expect("dimensions checked"))
        .sum();
    let identity_rhs: f64 = alpha.iter().map(|x| x * x).sum();
    let a_psi = spec.psi().scaled(&a)?;

    Ok(MeasureSplit {
        split: split_from(spec, a, b)?,
        alpha,
        bessel_a_psi: a_psi.bessel_bound(),
        frobenius_bessel: factorization.bessel,
        identity_lhs,
        identity_rhs,
        certificate: factorization.certificate,
    })
}

/// The discrete embedding against a measure: component `j` is
/// `sqrt(w_j) <x, g_j>`, so the squared norm is the second moment.
pub fn jmu_embed(mu: &DiscreteMeasure, x: &CVector) -> Result<CVector> {
    if x.len() != mu.dim() {
        return Err(Error::DimensionMismatch {
            left: mu.dim(),
            right: x.len(),
        });
    }
    Ok(CVector::from_fn(mu.len(), |j, _| {
        inner(x, &mu.points()[j]).unwrap() * Scalar::new(mu.weights()[j].sqrt(), 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::standard_basis_vector;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(dim: usize, k: usize) -> CVector {
        standard_basis_vector(dim, k)
    }

    fn seq(vs: Vec<CVector>) -> VectorSequence {
        VectorSequence::new(vs).unwrap()
    }

    fn sc(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn ones(n: usize) -> Vec<Scalar> {
        vec![sc(1.0, 0.0); n]
    }

    #[test]
    fn witness_constant_psi() {
        let psi = seq(vec![e(2, 0), e(2, 0), e(2, 0)]);
        let w = verify_witness(&psi, &[e(2, 0)]).unwrap();
        assert!((w.margin - 1.0).abs() < 1e-14);
    }

    #[test]
    fn witness_orthogonal_gives_zero_margin() {
        let psi = seq(vec![e(2, 0), e(2, 1)]);
        let w = verify_witness(&psi, &[e(2, 0)]).unwrap();
        assert_eq!(w.margin, 0.0);
    }

    #[test]
    fn witness_mixed_example() {
        let u = (e(2, 0) + e(2, 1)).unscale(2.0f64.sqrt());
        let psi = seq(vec![e(2, 0), u]);
        let w = verify_witness(&psi, &[e(2, 0), e(2, 1)]).unwrap();
        // n = 1 contributes 1, n = 2 contributes sqrt(2); the margin is 1
        assert!((w.margin - 1.0).abs() < 1e-14);
    }

    #[test]
    fn witness_rejects_zero_psi() {
        let psi = seq(vec![e(2, 0), CVector::zeros(2)]);
        assert!(matches!(
            verify_witness(&psi, &[e(2, 0)]),
            Err(Error::ZeroVector(1))
        ));
    }

    #[test]
    fn witness_scale_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = seq((0..5)
            .map(|_| {
                CVector::from_fn(3, |_, _| sc(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            })
            .collect());
        let witness = vec![e(3, 0), e(3, 1), e(3, 2)];
        let m1 = verify_witness(&psi, &witness).unwrap().margin;
        let scales: Vec<Scalar> = (0..5).map(|_| sc(rng.gen_range(0.1..5.0), 0.0)).collect();
        let m2 = verify_witness(&psi.scaled(&scales).unwrap(), &witness)
            .unwrap()
            .margin;
        assert!((m1 - m2).abs() < 1e-12);
    }

    #[test]
    fn split_weak_diagonal_case() {
        let spec = MultiplierSpec::new(
            ones(2),
            seq(vec![e(2, 0), e(2, 1)]),
            seq(vec![e(2, 0), e(2, 0)]),
        )
        .unwrap();
        let out = split_weak(&spec, &[e(2, 0)], 1e-8).unwrap();
        for n in 0..2 {
            assert!((out.beta[n] - 1.0).abs() < 1e-7);
            assert!((out.split.a[n] - sc(1.0, 0.0)).norm() < 1e-7);
            assert!((out.split.b[n] - sc(1.0, 0.0)).norm() < 1e-7);
        }
        assert!(out.split.max_residual <= 1e-10);
    }

    #[test]
    fn split_weak_zero_symbol_index() {
        let spec = MultiplierSpec::new(
            vec![sc(0.0, 0.0), sc(1.0, 0.0)],
            seq(vec![e(2, 0), e(2, 1)]),
            seq(vec![e(2, 0), e(2, 0)]),
        )
        .unwrap();
        let out = split_weak(&spec, &[e(2, 0)], 1e-8).unwrap();
        assert_eq!(out.split.a[0], sc(0.0, 0.0));
        assert_eq!(out.split.b[0], sc(0.0, 0.0));
        assert!(out.split.max_residual <= 1e-10);
    }

    #[test]
    fn split_weak_scaled_psi_example() {
        // m = (1,1), Phi = (e1,e1), Psi = (2e1,2e1): Theta = (2e1,2e1),
        // beta = (2 sqrt2, 2 sqrt2), a = 1/sqrt2, b = sqrt2
        let spec = MultiplierSpec::new(
            ones(2),
            seq(vec![e(2, 0), e(2, 0)]),
            seq(vec![e(2, 0) * sc(2.0, 0.0), e(2, 0) * sc(2.0, 0.0)]),
        )
        .unwrap();
        let out = split_weak(&spec, &[e(2, 0)], 1e-8).unwrap();
        let s2 = 2.0f64.sqrt();
        for n in 0..2 {
            assert!((out.beta[n] - 2.0 * s2).abs() < 1e-6);
            assert!((out.split.a[n] - sc(1.0 / s2, 0.0)).norm() < 1e-6);
            assert!((out.split.b[n] - sc(s2, 0.0)).norm() < 1e-6);
        }
        assert!(out.split.max_residual <= 1e-10);
        assert!(out.split.bessel_a_phi <= 1.0 + 1e-8);
        let beta_sq: f64 = out.beta.iter().map(|b| b * b).sum();
        assert!(out.split.bessel_b_psi <= beta_sq + 1e-8);
    }

    #[test]
    fn split_weak_rejects_poor_witness() {
        let spec = MultiplierSpec::new(
            ones(2),
            seq(vec![e(2, 0), e(2, 1)]),
            seq(vec![e(2, 0), e(2, 1)]),
        )
        .unwrap();
        assert!(matches!(
            split_weak(&spec, &[e(2, 0)], 1e-8),
            Err(Error::WitnessMarginTooSmall { .. })
        ));
    }

    #[test]
    fn split_absolute_spec_example() {
        let spec = MultiplierSpec::new(
            ones(2),
            seq(vec![e(2, 0), e(2, 1)]),
            seq(vec![e(2, 0), e(2, 0)]),
        )
        .unwrap();
        let out = split_absolute(&spec, 1e-8).unwrap();
        let s2 = 2.0f64.sqrt();
        for n in 0..2 {
            assert!((out.scale[n] - s2).abs() < 1e-6, "c = {:?}", out.scale);
            assert!((out.split.b[n] - sc(1.0 / s2, 0.0)).norm() < 1e-6);
            assert!((out.split.a[n] - sc(s2, 0.0)).norm() < 1e-6);
        }
        assert!(out.split.max_residual <= 1e-10);
        assert!(out.split.bessel_b_psi <= 1.0 + 1e-8);
        assert!((out.split.bessel_a_phi - 2.0).abs() < 1e-6);
    }

    #[test]
    fn split_absolute_zero_symbol() {
        let spec = MultiplierSpec::new(
            vec![sc(0.0, 0.0), sc(1.0, 0.0)],
            seq(vec![e(2, 1), e(2, 1)]),
            seq(vec![CVector::zeros(2), e(2, 0)]),
        )
        .unwrap();
        let out = split_absolute(&spec, 1e-8).unwrap();
        assert_eq!(out.split.a[0], sc(0.0, 0.0));
        assert_eq!(out.split.b[0], sc(0.0, 0.0));
        assert!(out.split.max_residual <= 1e-10);
    }

    #[test]
    fn split_absolute_folds_phi_norm() {
        let spec = MultiplierSpec::new(
            ones(1),
            seq(vec![e(2, 0) * sc(2.0, 0.0)]),
            seq(vec![e(2, 0)]),
        )
        .unwrap();
        let out = split_absolute(&spec, 1e-8).unwrap();
        // Xi = (2 e1): c = 2, b = 1, a = 1
        assert!((out.scale[0] - 2.0).abs() < 1e-6);
        assert!((out.split.b[0] - sc(1.0, 0.0)).norm() < 1e-6);
        assert!((out.split.a[0] - sc(1.0, 0.0)).norm() < 1e-6);
        assert!(out.split.max_residual <= 1e-10);
        assert!(out.split.bessel_b_psi <= 1.0 + 1e-8);
    }

    #[test]
    fn split_absolute_rejects_zero_vectors_with_symbol() {
        let spec = MultiplierSpec::new(
            ones(2),
            seq(vec![e(2, 0), CVector::zeros(2)]),
            seq(vec![e(2, 0), e(2, 0)]),
        )
        .unwrap();
        assert!(matches!(
            split_absolute(&spec, 1e-8),
            Err(Error::ZeroVectorWithNonzeroSymbol { index: 1 })
        ));
    }

    #[test]
    fn hs_tensor_convention() {
        // m = (1), Psi = (e1), Phi = (e2): the matrix has a single 1 in
        // row 1, column 2
        let spec =
            MultiplierSpec::new(ones(1), seq(vec![e(2, 1)]), seq(vec![e(2, 0)])).unwrap();
        let hs = hs_tensor_sequence(&spec);
        let t = &hs.tensors()[0];
        assert_eq!(t[(0, 1)], sc(1.0, 0.0));
        assert_eq!(t[(0, 0)], sc(0.0, 0.0));
        assert_eq!(t[(1, 0)], sc(0.0, 0.0));
        assert_eq!(t[(1, 1)], sc(0.0, 0.0));
    }

    #[test]
    fn hs_tensor_frobenius_norm() {
        let spec = MultiplierSpec::new(
            vec![sc(2.0, 0.0)],
            seq(vec![e(2, 0)]),
            seq(vec![e(2, 0)]),
        )
        .unwrap();
        let hs = hs_tensor_sequence(&spec);
        assert!((hs.tensors()[0].norm() - 2.0).abs() < 1e-14);
        assert_eq!(hs.tensors()[0][(0, 0)], sc(2.0, 0.0));
    }

    #[test]
    fn hs_tensor_gram_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = 5;
        let d = 3;
        let rnd = |rng: &mut ChaCha8Rng| {
            seq((0..n)
                .map(|_| {
                    CVector::from_fn(d, |_, _| {
                        sc(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    })
                })
                .collect())
        };
        let phi = rnd(&mut rng);
        let psi = rnd(&mut rng);
        let m: Vec<Scalar> = (0..n)
            .map(|_| sc(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let spec = MultiplierSpec::new(m.clone(), phi.clone(), psi.clone()).unwrap();
        let hs = hs_tensor_sequence(&spec);
        let gram = hs.flattened().gram();
        for j in 0..n {
            for k in 0..n {
                // <T_k, T_j>_F = m_k conj(m_j) <Psi_k, Psi_j> <Phi_j, Phi_k>
                let expected = m[k]
                    * m[j].conj()
                    * inner(psi.vector(k), psi.vector(j)).unwrap()
                    * inner(phi.vector(j), phi.vector(k)).unwrap();
                assert!((gram[(j, k)] - expected).norm() < 1e-12);
            }
        }
        // Frobenius norms match |m_n| ||Psi_n|| ||Phi_n||
        for (t, (mn, n_idx)) in hs.tensors().iter().zip(m.iter().zip(0..n)) {
            let expected = mn.norm() * psi.vector(n_idx).norm() * phi.vector(n_idx).norm();
            assert!((t.norm() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn split_measure_single_index() {
        let spec =
            MultiplierSpec::new(ones(1), seq(vec![e(2, 0)]), seq(vec![e(2, 0)])).unwrap();
        let mu = DiscreteMeasure::new(vec![e(2, 0), e(2, 1)], vec![0.5, 0.5]).unwrap();
        let out = split_measure(&spec, &mu, 1e-8).unwrap();
        let s2 = 2.0f64.sqrt();
        assert!((out.alpha[0] - 1.0).abs() < 1e-6);
        assert!((out.split.a[0] - sc(1.0 / s2, 0.0)).norm() < 1e-6);
        assert!((out.split.b[0] - sc(s2, 0.0)).norm() < 1e-6);
        assert!((out.identity_lhs - 1.0).abs() < 1e-6);
        assert!((out.identity_rhs - 1.0).abs() < 1e-6);
        assert!(out.split.max_residual <= 1e-10);
    }

    #[test]
    fn split_measure_orthonormal_pair() {
        let basis = seq(vec![e(2, 0), e(2, 1)]);
        let spec = MultiplierSpec::new(ones(2), basis.clone(), basis).unwrap();
        let mu = DiscreteMeasure::new(vec![e(2, 0), e(2, 1)], vec![0.5, 0.5]).unwrap();
        let out = split_measure(&spec, &mu, 1e-8).unwrap();
        let s2 = 2.0f64.sqrt();
        for n in 0..2 {
            assert!((out.alpha[n] - 1.0).abs() < 1e-6);
            assert!((out.split.a[n] - sc(1.0 / s2, 0.0)).norm() < 1e-6);
            assert!((out.split.b[n] - sc(s2, 0.0)).norm() < 1e-6);
        }
        let rel = (out.identity_lhs - out.identity_rhs).abs() / out.identity_rhs.max(1.0);
        assert!(rel < 1e-8);
    }

    #[test]
    fn split_measure_degenerate() {
        let spec =
            MultiplierSpec::new(ones(1), seq(vec![e(2, 0)]), seq(vec![e(2, 0)])).unwrap();
        let mu = DiscreteMeasure::new(vec![e(2, 1)], vec![1.0]).unwrap();
        assert!(matches!(
            split_measure(&spec, &mu, 1e-8),
            Err(Error::DegenerateMeasure { index: 0 })
        ));
    }

    #[test]
    fn split_measure_zero_psi_with_live_symbol() {
        // a live symbol with a vanishing tensor cannot receive a weight
        let spec = MultiplierSpec::new(
            ones(1),
            seq(vec![e(2, 0)]),
            seq(vec![CVector::zeros(2)]),
        )
        .unwrap();
        let mu = DiscreteMeasure::new(vec![e(2, 0)], vec![1.0]).unwrap();
        assert!(matches!(
            split_measure(&spec, &mu, 1e-8),
            Err(Error::ZeroWeight { index: 0 })
        ));
    }

    #[test]
    fn measure_constructor_validations() {
        assert!(matches!(
            DiscreteMeasure::new(vec![e(2, 0)], vec![0.5]),
            Err(Error::InvalidMeasureWeights { .. })
        ));
        assert!(matches!(
            DiscreteMeasure::new(vec![e(2, 0) * sc(2.0, 0.0)], vec![1.0]),
            Err(Error::PointOutsideUnitBall { .. })
        ));
        assert!(matches!(
            DiscreteMeasure::new(vec![e(2, 0)], vec![-1.0]),
            Err(Error::NegativeWeight { .. })
        ));
    }

    #[test]
    fn jmu_embed_cases() {
        let mu = DiscreteMeasure::new(vec![e(2, 0)], vec![1.0]).unwrap();
        let v = jmu_embed(&mu, &e(2, 0)).unwrap();
        assert_eq!(v.len(), 1);
        assert!((v[0] - sc(1.0, 0.0)).norm() < 1e-15);

        let mu = DiscreteMeasure::new(vec![e(2, 0), e(2, 1)], vec![0.5, 0.5]).unwrap();
        let v = jmu_embed(&mu, &e(2, 0)).unwrap();
        assert!((v[0] - sc(1.0 / 2.0f64.sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(v[1], sc(0.0, 0.0));
    }

    #[test]
    fn jmu_embed_contraction_and_moment() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let d = 3;
            let j = 1 + rng.gen_range(0..4);
            let points: Vec<CVector> = (0..j)
                .map(|_| {
                    let v = CVector::from_fn(d, |_, _| {
                        sc(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    });
                    let n = v.norm();
                    if n > 1.0 {
                        v.unscale(n * (1.0 + 1e-15))
                    } else {
                        v
                    }
                })
                .collect();
            let raw: Vec<f64> = (0..j).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let mu = DiscreteMeasure::new(points, weights).unwrap();
            let x = CVector::from_fn(d, |_, _| {
                sc(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let emb = jmu_embed(&mu, &x).unwrap();
            assert!(emb.norm() <= x.norm() + 1e-12);
            let moment = mu.second_moment(&x).unwrap();
            assert!((emb.norm_squared() - moment).abs() <= 1e-12 * moment.max(1.0));
        }
    }
}
