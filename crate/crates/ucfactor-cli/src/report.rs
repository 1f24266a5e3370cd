//! Report emission: canonical JSON on stdout (byte-identical for identical
//! inputs, flags and seeds), a short human summary on stderr.  Timing never
//! enters the canonical report; it is printed on stderr only.

use serde::{Deserialize, Serialize};

use crate::problem::{ComplexEntry, ProblemFile, VectorEntry};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorizationSection {
    pub alpha: Vec<f64>,
    pub frame: Vec<VectorEntry>,
    pub bessel: f64,
    pub cost: f64,
    pub reconstruction_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateSection {
    pub v: Vec<f64>,
    pub pi2_sq: f64,
    pub dual_x: Vec<VectorEntry>,
    pub gap: f64,
    pub certified: bool,
    pub iterations: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitSection {
    pub kind: String,
    pub a: Vec<ComplexEntry>,
    pub b: Vec<ComplexEntry>,
    pub bessel_a_phi: f64,
    pub bessel_b_psi: f64,
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bessel_a_psi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frobenius_bessel: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity_lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity_rhs: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckSection {
    pub name: String,
    /// "pass", "fail" or "skipped".
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub allowed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckSection {
    pub fn outcome(name: &str, measured: f64, allowed: f64) -> Self {
        CheckSection {
            name: name.to_string(),
            status: if measured <= allowed { "pass" } else { "fail" }.to_string(),
            measured: Some(measured),
            allowed: Some(allowed),
            note: None,
        }
    }

    pub fn skipped(name: &str, note: &str) -> Self {
        CheckSection {
            name: name.to_string(),
            status: "skipped".to_string(),
            measured: None,
            allowed: None,
            note: Some(note.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != "fail"
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorSection {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

/// The canonical report: the command echo, an input digest, the parsed input
/// itself (so `verify` can re-derive everything), numeric results with their
/// certificates, and per-invariant check outcomes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub tol: f64,
    pub input: ProblemFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization: Option<FactorizationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSection>,
    pub checks: Vec<CheckSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorSection>,
}

impl Report {
    pub fn new(command: &str, digest: String, tol: f64, input: ProblemFile) -> Self {
        Report {
            command: command.to_string(),
            input_digest: digest,
            tol,
            input,
            factorization: None,
            split: None,
            certificate: None,
            checks: Vec::new(),
            error: None,
        }
    }

    pub fn emit(&self) {
        let json = serde_json::to_string_pretty(self).expect("report serialization");
        println!("{json}");
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }
}

pub fn digest_of(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    let hex: String = out.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Optional CSV emission: one row per index with the factorization weight
/// and the split magnitudes that exist for the command at hand.
pub fn write_csv(
    path: &std::path::Path,
    weights: &[f64],
    a: Option<&[ComplexEntry]>,
    b: Option<&[ComplexEntry]>,
) -> std::io::Result<()> {
    let mut out = String::from("n,alpha,abs_a,abs_b\n");
    for (n, w) in weights.iter().enumerate() {
        let abs = |entry: Option<&[ComplexEntry]>| -> String {
            entry
                .and_then(|e| e.get(n))
                .map(|c| format!("{}", (c[0] * c[0] + c[1] * c[1]).sqrt()))
                .unwrap_or_default()
        };
        out.push_str(&format!("{n},{w},{},{}\n", abs(a), abs(b)));
    }
    std::fs::write(path, out)
}
