//! Weighted factorization of finite vector sequences through 2-summing
//! norms, with the multiplier symbol-splitting constructions built on top.
//!
//! The central computation: given vectors `Phi_1 .. Phi_N` in `C^d`, find
//! nonnegative weights `alpha` and a frame `(f_n)` with `Phi_n = alpha_n f_n`
//! such that `||alpha||_2^2` is as small as possible while `(f_n)` keeps an
//! optimal Bessel bound of 1.  That minimum is the squared 2-summing norm of
//! the synthesis operator, computed here as the semidefinite program
//! `min { sum v_i : diag(v) >= Gram }` together with a dual certificate
//! (`X >= 0`, unit diagonal) so results are auditable.
//!
//! ```
//! use ucfactor::{factorize, CVector, Scalar, VectorSequence};
//!
//! let e1 = CVector::from_vec(vec![Scalar::new(1.0, 0.0), Scalar::new(0.0, 0.0)]);
//! let seq = VectorSequence::new(vec![e1.clone(), e1]).unwrap();
//! let f = factorize(&seq, 1e-8).unwrap();
//!
//! // two copies of a unit vector cost pi2^2 = 4: alpha = (sqrt2, sqrt2)
//! assert!((f.certificate.pi2_sq - 4.0).abs() < 1e-6);
//! assert!(f.bessel <= 1.0 + 1e-8);
//! assert!(f.certificate.gap <= 1e-8 * 4.0);
//! ```
//!
//! Modules:
//! * [`space`]: vectors, sequences, Gram matrices, Bessel bounds, sign-pattern norms.
//! * [`pietsch`]: the dominating-diagonal program and the factorizations.
//! * [`multiplier`]: multiplier assembly, adjoints, UC-constant diagnostics.
//! * [`splitting`]: the three symbol-splitting constructions.
//! * [`oracle`]: brute-force references used by tests and the CLI verifier.

mod error;

pub mod eigen;
pub mod multiplier;
pub mod oracle;
pub mod pietsch;
pub mod space;
pub mod splitting;

pub use error::{Error, Result};
pub use multiplier::MultiplierSpec;
pub use pietsch::{factorize, Factorization, PietschSolution};
pub use space::{CMatrix, CVector, Scalar, VectorSequence};
pub use splitting::{DiscreteMeasure, SymbolSplit};

// The guide's code blocks run as doc-tests, which keeps the book and the
// library from drifting apart.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/bessel.md")]
    mod bessel {}
    #[doc = include_str!("../../../book/src/two-summing.md")]
    mod two_summing {}
    #[doc = include_str!("../../../book/src/factorization.md")]
    mod factorization {}
    #[doc = include_str!("../../../book/src/multipliers.md")]
    mod multipliers {}
    #[doc = include_str!("../../../book/src/splitting.md")]
    mod splitting {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
