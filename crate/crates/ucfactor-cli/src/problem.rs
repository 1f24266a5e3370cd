//! Problem-file ingestion: a single self-describing JSON document in which
//! every complex number is a two-element array `[re, im]`.

use serde::{Deserialize, Serialize};
use ucfactor::multiplier::MultiplierSpec;
use ucfactor::splitting::DiscreteMeasure;
use ucfactor::{CMatrix, CVector, Scalar, VectorSequence};

pub type ComplexEntry = [f64; 2];
pub type VectorEntry = Vec<ComplexEntry>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureSection {
    pub points: Vec<VectorEntry>,
    pub weights: Vec<f64>,
}

/// The on-disk problem document.  Arrays are optional; each command states
/// which ones it needs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<VectorEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<VectorEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<ComplexEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<VectorEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<VectorEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<Vec<VectorEntry>>,
}

#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "input error: {}", self.0)
    }
}

pub fn to_vector(entry: &VectorEntry, dim: usize, what: &str) -> Result<CVector, InputError> {
    if entry.len() != dim {
        return Err(InputError(format!(
            "{what}: expected dimension {dim}, found {}",
            entry.len()
        )));
    }
    let v = CVector::from_fn(dim, |i, _| Scalar::new(entry[i][0], entry[i][1]));
    if !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(InputError(format!("{what}: non-finite entry")));
    }
    Ok(v)
}

pub fn to_sequence(
    entries: &[VectorEntry],
    dim: usize,
    what: &str,
) -> Result<VectorSequence, InputError> {
    if entries.is_empty() {
        return Err(InputError(format!("{what}: empty array")));
    }
    let vectors = entries
        .iter()
        .enumerate()
        .map(|(i, e)| to_vector(e, dim, &format!("{what}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    VectorSequence::new(vectors).map_err(|e| InputError(format!("{what}: {e}")))
}

pub fn to_symbol(entries: &[ComplexEntry], len: usize, what: &str) -> Result<Vec<Scalar>, InputError> {
    if entries.len() != len {
        return Err(InputError(format!(
            "{what}: expected {len} entries, found {}",
            entries.len()
        )));
    }
    let m: Vec<Scalar> = entries.iter().map(|e| Scalar::new(e[0], e[1])).collect();
    if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(InputError(format!("{what}: non-finite entry")));
    }
    Ok(m)
}

pub fn vector_entry(v: &CVector) -> VectorEntry {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn sequence_entries(seq: &VectorSequence) -> Vec<VectorEntry> {
    seq.iter().map(vector_entry).collect()
}

pub fn matrix_rows(m: &CMatrix) -> Vec<VectorEntry> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn rows_to_matrix(rows: &[VectorEntry], what: &str) -> Result<CMatrix, InputError> {
    if rows.is_empty() {
        return Err(InputError(format!("{what}: empty matrix")));
    }
    let ncols = rows[0].len();
    if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(InputError(format!("{what}: ragged rows")));
    }
    Ok(CMatrix::from_fn(rows.len(), ncols, |i, j| {
        Scalar::new(rows[i][j][0], rows[i][j][1])
    }))
}

impl ProblemFile {
    pub fn parse(bytes: &[u8]) -> Result<Self, InputError> {
        let file: ProblemFile = serde_json::from_slice(bytes)
            .map_err(|e| InputError(format!("malformed JSON: {e}")))?;
        if file.dim == 0 {
            return Err(InputError("dim must be at least 1".into()));
        }
        if let Some(measure) = &file.measure {
            if measure.points.len() != measure.weights.len() {
                return Err(InputError("measure: points/weights length mismatch".into()));
            }
            let sum: f64 = measure.weights.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(InputError(format!(
                    "measure: weights sum to {sum}, expected 1"
                )));
            }
        }
        if let Some(basis) = &file.basis {
            to_sequence(basis, file.dim, "basis")?;
        }
        if let Some(operator) = &file.operator {
            if operator.len() != file.dim {
                return Err(InputError(format!(
                    "operator: expected {} rows, found {}",
                    file.dim,
                    operator.len()
                )));
            }
            rows_to_matrix(operator, "operator")?;
            if operator.iter().any(|row| row.len() != file.dim) {
                return Err(InputError("operator: rows must have length dim".into()));
            }
        }
        Ok(file)
    }

    pub fn phi_sequence(&self) -> Result<VectorSequence, InputError> {
        let phi = self
            .phi
            .as_ref()
            .ok_or_else(|| InputError("missing field: phi".into()))?;
        to_sequence(phi, self.dim, "phi")
    }

    pub fn psi_sequence(&self) -> Result<VectorSequence, InputError> {
        let psi = self
            .psi
            .as_ref()
            .ok_or_else(|| InputError("missing field: psi".into()))?;
        to_sequence(psi, self.dim, "psi")
    }

    pub fn multiplier_spec(&self) -> Result<MultiplierSpec, InputError> {
        let phi = self.phi_sequence()?;
        let psi = self.psi_sequence()?;
        let m = self
            .m
            .as_ref()
            .ok_or_else(|| InputError("missing field: m".into()))?;
        let symbol = to_symbol(m, phi.len(), "m")?;
        MultiplierSpec::new(symbol, phi, psi).map_err(|e| InputError(e.to_string()))
    }

    pub fn witness_vectors(&self) -> Result<Vec<CVector>, InputError> {
        let witness = self
            .witness
            .as_ref()
            .ok_or_else(|| InputError("missing field: witness".into()))?;
        witness
            .iter()
            .enumerate()
            .map(|(i, e)| to_vector(e, self.dim, &format!("witness[{i}]")))
            .collect()
    }

    /// Weights are renormalized to sum exactly to 1 (the file is accepted at
    /// 1e-9), matching the stricter tolerance of the library type.
    pub fn discrete_measure(&self) -> Result<DiscreteMeasure, InputError> {
        let section = self
            .measure
            .as_ref()
            .ok_or_else(|| InputError("missing field: measure".into()))?;
        let points = section
            .points
            .iter()
            .enumerate()
            .map(|(i, e)| to_vector(e, self.dim, &format!("measure.points[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let total: f64 = section.weights.iter().sum();
        let weights: Vec<f64> = section.weights.iter().map(|w| w / total).collect();
        DiscreteMeasure::new(points, weights).map_err(|e| InputError(format!("measure: {e}")))
    }
}
