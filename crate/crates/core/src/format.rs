//! The algebra file format: JSON with expression-string coefficients.
//!
//! ```json
//! {
//!   "dim": 4,
//!   "basis": ["e0", "e1", "e2", "e3"],
//!   "params": ["lambda"],
//!   "constants": [ {"m": 1, "n": 2, "l": 3, "coeff": "i"} ],
//!   "transform": {
//!     "param": "lambda",
//!     "critical": "0",
//!     "matrix": [["1","0","0","0"], ["0","lambda","0","0"], ...]
//!   }
//! }
//! ```
//!
//! Omitted constants are zero, `transform` is optional, and coefficients are
//! written with the canonical printer so a save/load cycle is the identity.

use crate::contraction::{ContractionError, TransformFamily};
use crate::expr::{CoeffError, Params};
use crate::gauss::GaussRat;
use crate::parse::{parse_expr, print_expr};
use crate::tensor::{AlgebraError, StructureTensor};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug)]
pub enum FormatError {
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("constant entry ({m}, {n}, {l}) out of range for dim {dim}")]
    IndexOutOfRange { m: usize, n: usize, l: usize, dim: usize },
    #[error("bad coefficient at constant ({m}, {n}, {l}): {source}")]
    BadCoefficient { m: usize, n: usize, l: usize, source: CoeffError },
    #[error("bad transform entry ({r}, {c}): {source}")]
    BadTransformEntry { r: usize, c: usize, source: CoeffError },
    #[error("bad critical value `{text}`: must be a parameter-free expression")]
    BadCritical { text: String },
    #[error("transform matrix must be {dim}x{dim}")]
    BadTransformShape { dim: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Contraction(#[from] ContractionError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ConstantEntry {
    pub m: usize,
    pub n: usize,
    pub l: usize,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TransformSpec {
    pub param: String,
    pub critical: String,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct AlgebraFile {
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub params: Vec<String>,
    pub constants: Vec<ConstantEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformSpec>,
}

impl AlgebraFile {
    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn read(path: &std::path::Path) -> Result<Self, FormatError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &std::path::Path) -> Result<(), FormatError> {
        Ok(std::fs::write(path, self.to_json() + "\n")?)
    }

    pub fn params(&self) -> Params {
        Params::new(self.params.iter().cloned())
    }

    pub fn tensor(&self) -> Result<StructureTensor, FormatError> {
        let params = self.params();
        let mut t = StructureTensor::zero(self.dim, self.basis.clone(), params.clone())?;
        for e in &self.constants {
            if e.m >= self.dim || e.n >= self.dim || e.l >= self.dim {
                return Err(FormatError::IndexOutOfRange {
                    m: e.m,
                    n: e.n,
                    l: e.l,
                    dim: self.dim,
                });
            }
            let coeff = parse_expr(&e.coeff, &params).map_err(|source| {
                FormatError::BadCoefficient { m: e.m, n: e.n, l: e.l, source }
            })?;
            t.set(e.m, e.n, e.l, coeff);
        }
        Ok(t)
    }

    /// The serialized transform, when present, together with its critical value.
    pub fn transform(&self) -> Result<Option<(TransformFamily, GaussRat)>, FormatError> {
        let Some(spec) = &self.transform else {
            return Ok(None);
        };
        let params = self.params();
        if spec.matrix.len() != self.dim || spec.matrix.iter().any(|row| row.len() != self.dim) {
            return Err(FormatError::BadTransformShape { dim: self.dim });
        }
        let mut entries = Vec::with_capacity(self.dim * self.dim);
        for (r, row) in spec.matrix.iter().enumerate() {
            for (c, text) in row.iter().enumerate() {
                let e = parse_expr(text, &params)
                    .map_err(|source| FormatError::BadTransformEntry { r, c, source })?;
                entries.push(e);
            }
        }
        let family = TransformFamily::new(self.dim, &spec.param, params.clone(), entries)?;
        let critical = parse_expr(&spec.critical, &Params::empty())
            .ok()
            .and_then(|e| e.as_constant())
            .ok_or_else(|| FormatError::BadCritical { text: spec.critical.clone() })?;
        Ok(Some((family, critical)))
    }

    /// Serializes a tensor (and optional transform) with canonical
    /// coefficient strings, zero entries omitted, entries sorted by (m, n, l).
    pub fn from_tensor(tensor: &StructureTensor, transform: Option<&TransformSpec>) -> Self {
        let mut constants = Vec::new();
        for (m, n, l, e) in tensor.entries() {
            if !e.is_zero() {
                constants.push(ConstantEntry { m, n, l, coeff: print_expr(e) });
            }
        }
        AlgebraFile {
            dim: tensor.dim(),
            basis: tensor.basis().to_vec(),
            params: tensor.params().names().to_vec(),
            constants,
            transform: transform.cloned(),
        }
    }
}

/// The serialized form of a transform family (used when exporting fixtures).
pub fn transform_spec(t: &TransformFamily, critical: &GaussRat) -> TransformSpec {
    let dim = t.dim();
    let matrix = (0..dim)
        .map(|r| (0..dim).map(|c| print_expr(t.get(r, c))).collect())
        .collect();
    TransformSpec { param: t.param().to_string(), critical: critical.to_string(), matrix }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn roundtrip_u2_with_transform() {
        let demo = crate::catalog::fixture("u2", &BTreeMap::new())
            .unwrap()
            .tensor()
            .unwrap();
        let lp = Params::new(["lambda"]);
        let promoted = demo.promote(&lp).unwrap();
        let t = crate::catalog::u2_transform(&lp);
        let spec = transform_spec(&t, &GaussRat::zero());
        let file = AlgebraFile::from_tensor(&promoted, Some(&spec));
        let json = file.to_json();
        let back = AlgebraFile::from_json(&json).unwrap();
        assert_eq!(back.tensor().unwrap(), promoted);
        let (family, critical) = back.transform().unwrap().unwrap();
        assert_eq!(family, t);
        assert_eq!(critical, GaussRat::zero());
        // Serialization round-trip is the identity byte-wise too.
        assert_eq!(AlgebraFile::from_tensor(&promoted, Some(&spec)).to_json(), json);
    }

    #[test]
    fn bad_coefficient_reports_entry() {
        let json = r#"{
            "dim": 2, "basis": ["a", "b"], "params": [],
            "constants": [{"m": 0, "n": 0, "l": 1, "coeff": "nu + 1"}]
        }"#;
        let file = AlgebraFile::from_json(json).unwrap();
        match file.tensor() {
            Err(FormatError::BadCoefficient { m: 0, n: 0, l: 1, source }) => {
                assert!(matches!(source, CoeffError::UndeclaredParameter { .. }));
            }
            other => panic!("expected BadCoefficient, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_index_rejected() {
        let json = r#"{
            "dim": 2, "basis": ["a", "b"], "params": [],
            "constants": [{"m": 0, "n": 5, "l": 1, "coeff": "1"}]
        }"#;
        let file = AlgebraFile::from_json(json).unwrap();
        assert!(matches!(file.tensor(), Err(FormatError::IndexOutOfRange { .. })));
    }

    #[test]
    fn json_syntax_errors_carry_position() {
        let err = AlgebraFile::from_json("{ \"dim\": ").unwrap_err();
        match err {
            FormatError::Json(e) => {
                assert!(e.line() >= 1);
                assert!(e.column() >= 1);
            }
            other => panic!("expected Json, got {other:?}"),
        }
    }
}
