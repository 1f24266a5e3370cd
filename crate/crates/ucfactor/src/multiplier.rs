//! Multipliers `f -> sum_n m_n <f, Psi_n> Phi_n` and their diagnostics.
//!
//! [`MultiplierSpec::assemble`] materializes the operator as a `d x d`
//! matrix for norm computations; [`MultiplierSpec::apply`] evaluates the sum
//! directly and never builds the matrix.  The finite stand-in for
//! unconditional convergence is [`uc_constant_exact`]: the largest operator
//! norm over all real sign twists of the symbol.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::space::{
    check_finite_vector, inner, spectral_norm, CMatrix, CVector, Scalar, VectorSequence,
};

/// Default cap on `N` for exhaustive sign enumeration in [`uc_constant_exact`]
/// (each pattern costs a dense spectral norm).
pub const DEFAULT_UC_ENUM_CAP: usize = 16;

/// The triple `(m, Phi, Psi)` defining a multiplier.
#[derive(Debug, Clone)]
pub struct MultiplierSpec {
    symbol: Vec<Scalar>,
    phi: VectorSequence,
    psi: VectorSequence,
}

impl MultiplierSpec {
    pub fn new(symbol: Vec<Scalar>, phi: VectorSequence, psi: VectorSequence) -> Result<Self> {
        if symbol.len() != phi.len() {
            return Err(Error::LengthMismatch {
                left: symbol.len(),
                right: phi.len(),
            });
        }
        if phi.len() != psi.len() {
            return Err(Error::LengthMismatch {
                left: phi.len(),
                right: psi.len(),
            });
        }
        if phi.dim() != psi.dim() {
            return Err(Error::DimensionMismatch {
                left: phi.dim(),
                right: psi.dim(),
            });
        }
        if !symbol.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { symbol, phi, psi })
    }

    pub fn symbol(&self) -> &[Scalar] {
        &self.symbol
    }

    pub fn phi(&self) -> &VectorSequence {
        &self.phi
    }

    pub fn psi(&self) -> &VectorSequence {
        &self.psi
    }

    pub fn len(&self) -> usize {
        self.symbol.len()
    }

    pub fn is_empty(&self) -> bool {
        false // N >= 1 via VectorSequence
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }

    /// The `d x d` matrix of the multiplier:
    /// `sum_n m_n Phi_n Psi_n^H = synthesis(Phi) diag(m) analysis(Psi)`.
    pub fn assemble(&self) -> CMatrix {
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for (n, m_n) in self.symbol.iter().enumerate() {
            let phi = self.phi.vector(n);
            let psi = self.psi.vector(n);
            for j in 0..d {
                let w = *m_n * psi[j].conj();
                for i in 0..d {
                    out[(i, j)] += phi[i] * w;
                }
            }
        }
        out
    }

    /// Applies the multiplier to `f` by direct summation.
    pub fn apply(&self, f: &CVector) -> Result<CVector> {
        if f.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: f.len(),
            });
        }
        let mut out = CVector::zeros(self.dim());
        for (n, m_n) in self.symbol.iter().enumerate() {
            let coeff = *m_n * self.psi.vector(n).dotc(f);
            out += self.phi.vector(n) * coeff;
        }
        Ok(out)
    }

    /// The adjoint multiplier `(conj(m), Psi, Phi)`.
    pub fn adjoint(&self) -> MultiplierSpec {
        MultiplierSpec {
            symbol: self.symbol.iter().map(|z| z.conj()).collect(),
            phi: self.psi.clone(),
            psi: self.phi.clone(),
        }
    }

    /// The spec with the symbol twisted by real signs.
    fn sign_twisted(&self, signs_mask: u64) -> Vec<Scalar> {
        self.symbol
            .iter()
            .enumerate()
            .map(|(i, m)| {
                if i > 0 && (signs_mask >> (i - 1)) & 1 == 1 {
                    -*m
                } else {
                    *m
                }
            })
            .collect()
    }

    fn twisted_norm(&self, signs_mask: u64) -> f64 {
        let twisted = MultiplierSpec {
            symbol: self.sign_twisted(signs_mask),
            phi: self.phi.clone(),
            psi: self.psi.clone(),
        };
        spectral_norm(&twisted.assemble())
    }
}

/// Writes a bounded operator as a multiplier over an orthonormal basis:
/// `Phi_n = T u_n`, `Psi_n = u_n`, `m_n = 1`.
///
/// The basis must be orthonormal to 1e-10 (Gram within that of the identity).
pub fn from_operator(t: &CMatrix, basis: &VectorSequence) -> Result<MultiplierSpec> {
    let d = basis.dim();
    if t.nrows() != d || t.ncols() != d {
        return Err(Error::DimensionMismatch {
            left: t.nrows().max(t.ncols()),
            right: d,
        });
    }
    if basis.len() != d {
        return Err(Error::LengthMismatch {
            left: basis.len(),
            right: d,
        });
    }
    let gram = basis.gram();
    let mut deviation = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j {
                Scalar::new(1.0, 0.0)
            } else {
                Scalar::new(0.0, 0.0)
            };
            deviation = deviation.max((gram[(i, j)] - target).norm());
        }
    }
    if deviation > 1e-10 {
        return Err(Error::NotOrthonormal { deviation });
    }
    let phi = VectorSequence::new(basis.iter().map(|u| t * u).collect())?;
    MultiplierSpec::new(vec![Scalar::new(1.0, 0.0); d], phi, basis.clone())
}

/// How a UC constant was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignMethod {
    Exact,
    Sampled { trials: u64, seed: u64 },
}

/// Finite unconditional-convergence constant: the maximum of
/// `||assemble((eps_n m_n), Phi, Psi)||` over sign patterns `eps`.
#[derive(Debug, Clone)]
pub struct UCReport {
    pub constant: f64,
    /// Signs attaining `constant` (in exact mode, the true maximizer).
    pub witness_signs: Vec<i8>,
    pub method: SignMethod,
}

fn mask_to_signs(n: usize, mask: u64) -> Vec<i8> {
    (0..n)
        .map(|i| {
            if i > 0 && (mask >> (i - 1)) & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .collect()
}

/// Exact UC constant by enumeration of `2^(N-1)` sign patterns (the first
/// sign is fixed by symmetry).  Errors when `N > cap`.
pub fn uc_constant_exact(spec: &MultiplierSpec, cap: usize) -> Result<UCReport> {
    let n = spec.len();
    let cap = cap.min(62);
    if n > cap {
        return Err(Error::EnumerationCapExceeded { n, cap });
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_mask = 0u64;
    for mask in 0u64..(1u64 << (n - 1)) {
        let norm = spec.twisted_norm(mask);
        if norm > best {
            best = norm;
            best_mask = mask;
        }
    }
    Ok(UCReport {
        constant: best,
        witness_signs: mask_to_signs(n, best_mask),
        method: SignMethod::Exact,
    })
}

/// Sampled lower bound of the UC constant; always includes the all-plus
/// pattern, so it dominates `||assemble(spec)||`.  Deterministic in
/// `(trials, seed)` and monotone non-decreasing in `trials`.
pub fn uc_constant_sampled(spec: &MultiplierSpec, trials: u64, seed: u64) -> UCReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.len();
    let mut best = spec.twisted_norm(0);
    let mut best_signs = vec![1i8; n];
    for _ in 0..trials {
        let signs: Vec<i8> = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        let twisted = MultiplierSpec {
            symbol: spec
                .symbol
                .iter()
                .zip(&signs)
                .map(|(m, &s)| *m * Scalar::new(s as f64, 0.0))
                .collect(),
            phi: spec.phi.clone(),
            psi: spec.psi.clone(),
        };
        let norm = spectral_norm(&twisted.assemble());
        if norm > best {
            best = norm;
            best_signs = signs;
        }
    }
    UCReport {
        constant: best,
        witness_signs: best_signs,
        method: SignMethod::Sampled { trials, seed },
    }
}

/// Per-probe absolute-convergence diagnostics:
/// `sum_n |m_n| |inner(f, Psi_n)| ||Phi_n||` for each probe `f`.
pub fn absolute_profile(spec: &MultiplierSpec, probes: &[CVector]) -> Result<Vec<f64>> {
    let norms: Vec<f64> = spec.phi.iter().map(|v| v.norm()).collect();
    probes
        .iter()
        .map(|f| {
            check_finite_vector(f)?;
            if f.len() != spec.dim() {
                return Err(Error::DimensionMismatch {
                    left: spec.dim(),
                    right: f.len(),
                });
            }
            Ok(spec
                .symbol
                .iter()
                .enumerate()
                .map(|(n, m)| m.norm() * inner(f, spec.psi.vector(n)).unwrap().norm() * norms[n])
                .sum())
        })
        .collect()
}
