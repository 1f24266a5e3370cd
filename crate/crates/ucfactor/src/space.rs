//! Complex inner-product space primitives.
//!
//! Everything downstream works with finite truncations: a sequence is `N`
//! vectors in `C^d`, its synthesis operator is the `d x N` matrix with the
//! vectors as columns, and the optimal Bessel bound is the largest eigenvalue
//! of the Gram matrix.  The sup-norm-ball operator norm (the finite stand-in
//! for the `c0 -> H` norm) is computed over real sign patterns, which is
//! exact for real data and a lower bound within a factor pi/2 for complex
//! data.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eigen;
use crate::error::{Error, Result};

pub type Scalar = Complex<f64>;
pub type CVector = DVector<Scalar>;
pub type CMatrix = DMatrix<Scalar>;

/// Default cap on `N` for exhaustive sign enumeration (`2^(N-1)` patterns).
pub const DEFAULT_SIGN_ENUM_CAP: usize = 20;

/// Standard basis vector `e_k` of `C^dim`.
pub fn standard_basis_vector(dim: usize, k: usize) -> CVector {
    assert!(k < dim, "basis index out of range");
    CVector::from_fn(dim, |i, _| {
        if i == k {
            Scalar::new(1.0, 0.0)
        } else {
            Scalar::new(0.0, 0.0)
        }
    })
}

fn is_finite_scalar(z: &Scalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub(crate) fn check_finite_vector(v: &CVector) -> Result<()> {
    if v.iter().all(is_finite_scalar) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Inner product, linear in the first argument and conjugate-linear in the
/// second: `inner(f, g) = sum_t f_t * conj(g_t)`.
pub fn inner(f: &CVector, g: &CVector) -> Result<Scalar> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch {
            left: f.len(),
            right: g.len(),
        });
    }
    Ok(g.dotc(f))
}

/// Largest singular value, via a dense Hermitian eigensolve of the smaller
/// of `M^H M` and `M M^H`.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    let small = if m.ncols() <= m.nrows() {
        m.adjoint() * m
    } else {
        m * m.adjoint()
    };
    eigen::hermitian_lambda_max(&small).max(0.0).sqrt()
}

/// A finite sequence of vectors of uniform dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSequence {
    vectors: Vec<CVector>,
    dim: usize,
}

impl VectorSequence {
    /// Validates `N >= 1`, uniform dimension `d >= 1` and finite entries.
    pub fn new(vectors: Vec<CVector>) -> Result<Self> {
        let first = vectors.first().ok_or(Error::EmptySequence)?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: v.len(),
                });
            }
            check_finite_vector(v)?;
        }
        Ok(Self { vectors, dim })
    }

    /// Sequence formed by the columns of a matrix.
    pub fn from_matrix_columns(m: &CMatrix) -> Result<Self> {
        Self::new(m.column_iter().map(|c| c.into_owned()).collect())
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false // N >= 1 by construction
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self, n: usize) -> &CVector {
        &self.vectors[n]
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CVector> {
        self.vectors.iter()
    }

    /// The entrywise-scaled sequence `(w_n Phi_n)_n`.
    pub fn scaled(&self, weights: &[Scalar]) -> Result<VectorSequence> {
        if weights.len() != self.len() {
            return Err(Error::LengthMismatch {
                left: weights.len(),
                right: self.len(),
            });
        }
        VectorSequence::new(
            self.vectors
                .iter()
                .zip(weights)
                .map(|(v, w)| v * *w)
                .collect(),
        )
    }

    /// The `d x N` matrix whose column `n` is `Phi_n`.
    pub fn synthesis_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, self.len(), |i, n| self.vectors[n][i])
    }

    /// Gram matrix `G_{jk} = inner(Phi_k, Phi_j)`, Hermitian by construction:
    /// the lower triangle is the exact conjugate of the computed upper one.
    pub fn gram(&self) -> CMatrix {
        let n = self.len();
        let mut g = CMatrix::zeros(n, n);
        for j in 0..n {
            for k in j..n {
                let e = self.vectors[j].dotc(&self.vectors[k]);
                g[(j, k)] = e;
                if k != j {
                    g[(k, j)] = e.conj();
                }
            }
        }
        g
    }

    /// Optimal Bessel bound: the smallest `B` with
    /// `sum_n |inner(f, Phi_n)|^2 <= B ||f||^2` for every `f`, i.e. the
    /// largest eigenvalue of the Gram matrix.
    pub fn bessel_bound(&self) -> f64 {
        let a = self.synthesis_matrix();
        let small = if self.len() <= self.dim {
            a.adjoint() * &a
        } else {
            &a * a.adjoint()
        };
        eigen::hermitian_lambda_max(&small).max(0.0)
    }

    /// A probe vector attaining the optimal Bessel bound (a top eigenvector
    /// of the frame operator), returned with the bound itself.
    pub fn bessel_bound_with_probe(&self) -> (f64, CVector) {
        let a = self.synthesis_matrix();
        let frame_op = &a * a.adjoint();
        let (lam, u) = eigen::hermitian_top_eigenpair(&frame_op);
        (lam.max(0.0), u)
    }

    /// `sum_n ||Phi_n||^2`, the trace of the Gram matrix.
    pub fn orlicz_sum(&self) -> f64 {
        self.vectors.iter().map(|v| v.norm_squared()).sum()
    }

    /// `sum_n |inner(Phi_n, g)|`.
    pub fn weak_l1_sum(&self, g: &CVector) -> Result<f64> {
        if g.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: g.len(),
            });
        }
        Ok(self.vectors.iter().map(|v| g.dotc(v).norm()).sum())
    }
}

impl<'a> IntoIterator for &'a VectorSequence {
    type Item = &'a CVector;
    type IntoIter = std::slice::Iter<'a, CVector>;
    fn into_iter(self) -> Self::IntoIter {
        self.vectors.iter()
    }
}

fn signed_sum_norm_sq(vectors: &[CVector], dim: usize, mask: u64) -> f64 {
    let mut acc = CVector::zeros(dim);
    for (i, v) in vectors.iter().enumerate() {
        if i > 0 && (mask >> (i - 1)) & 1 == 1 {
            acc -= v;
        } else {
            acc += v;
        }
    }
    acc.norm_squared()
}

/// Exact sup-norm-ball operator norm over real sign patterns:
/// `max over eps in {+-1}^N of ||sum_n eps_n Phi_n||`.
///
/// The first sign is fixed to `+1` (a global flip leaves the norm unchanged),
/// so the enumeration visits `2^(N-1)` patterns.  Errors when `N > cap`.
pub fn c0_operator_norm_exact(seq: &VectorSequence, cap: usize) -> Result<f64> {
    let n = seq.len();
    let cap = cap.min(62);
    if n > cap {
        return Err(Error::EnumerationCapExceeded { n, cap });
    }
    let mut best = 0.0f64;
    for mask in 0u64..(1u64 << (n - 1)) {
        best = best.max(signed_sum_norm_sq(seq.vectors(), seq.dim(), mask));
    }
    Ok(best.sqrt())
}

/// Sampled lower bound of [`c0_operator_norm_exact`], deterministic in
/// `(trials, seed)` and monotone non-decreasing in `trials`.  The all-plus
/// pattern is always included.
pub fn c0_operator_norm_sampled(seq: &VectorSequence, trials: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = signed_sum_norm_sq(seq.vectors(), seq.dim(), 0);
    for _ in 0..trials {
        let mut acc = CVector::zeros(seq.dim());
        for v in seq.iter() {
            if rng.gen::<bool>() {
                acc += v;
            } else {
                acc -= v;
            }
        }
        best = best.max(acc.norm_squared());
    }
    best.sqrt()
}
