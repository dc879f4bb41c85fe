//! JSON artifacts (schema `wsuper/1`) and atomic file output.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraKind, BasisVector, LieSuperalgebra, Parity, Realization};
use crate::frame::{Frame, Generator};
use crate::nilpotent::NilpotentData;
use crate::pbw::TermRecord;
use crate::scalar::{Field, Rationals, Scalar, ScalarError};
use crate::w::{RelationRecord, TableReport, WGenerator, WPresentation};
use crate::wchar0::GradedReport;

pub const SCHEMA: &str = "wsuper/1";

type Q = BigRational;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("schema mismatch: expected {SCHEMA}, found {0:?}")]
    Schema(String),
    #[error("malformed artifact: {0}")]
    Malformed(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn rational(s: &Scalar) -> Result<Q, IoError> {
    s.as_rational().cloned().ok_or_else(|| IoError::Malformed(format!("expected a rational, got {s}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketRecord {
    pub i: usize,
    pub j: usize,
    /// `(k, c)`: `[b_i, b_j]` has coefficient `c` on `b_k`.
    pub terms: Vec<(usize, Scalar)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationRecord {
    pub row_parity: Vec<Parity>,
    pub matrices: Vec<Vec<Vec<Scalar>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraArtifact {
    pub schema: String,
    pub kind: AlgebraKind,
    pub basis: Vec<BasisVector>,
    /// Nonzero brackets in row-major order of `(i, j)`.
    pub brackets: Vec<BracketRecord>,
    pub gram: Vec<Vec<Scalar>>,
    pub realization: Option<RealizationRecord>,
}

impl AlgebraArtifact {
    pub fn from_algebra(alg: &LieSuperalgebra<Rationals>) -> Self {
        let f = Rationals;
        let mut brackets = Vec::new();
        for (i, row) in alg.brackets.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_empty() {
                    brackets.push(BracketRecord { i, j, terms: v.iter().map(|(k, c)| (*k, f.to_scalar(c))).collect() });
                }
            }
        }
        let realization = alg.realization.as_ref().map(|r| RealizationRecord {
            row_parity: r.row_parity.clone(),
            matrices: r
                .matrices
                .iter()
                .map(|m| m.iter().map(|row| row.iter().map(|c| f.to_scalar(c)).collect()).collect())
                .collect(),
        });
        AlgebraArtifact {
            schema: SCHEMA.into(),
            kind: alg.kind,
            basis: alg.basis.clone(),
            brackets,
            gram: alg.gram.iter().map(|r| r.iter().map(|c| f.to_scalar(c)).collect()).collect(),
            realization,
        }
    }

    pub fn to_algebra(&self) -> Result<LieSuperalgebra<Rationals>, IoError> {
        check_schema(&self.schema)?;
        let dim = self.basis.len();
        let mut brackets = vec![vec![Vec::new(); dim]; dim];
        for b in &self.brackets {
            if b.i >= dim || b.j >= dim || b.terms.iter().any(|(k, _)| *k >= dim) {
                return Err(IoError::Malformed(format!("bracket index out of range at ({}, {})", b.i, b.j)));
            }
            brackets[b.i][b.j] = b.terms.iter().map(|(k, c)| Ok((*k, rational(c)?))).collect::<Result<_, IoError>>()?;
        }
        let gram = self
            .gram
            .iter()
            .map(|r| r.iter().map(rational).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let realization = match &self.realization {
            None => None,
            Some(r) => {
                let mats = r
                    .matrices
                    .iter()
                    .map(|m| {
                        m.iter().map(|row| row.iter().map(rational).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some(
                    Realization::new(&Rationals, r.row_parity.clone(), mats)
                        .ok_or_else(|| IoError::Malformed("realization matrices are dependent".into()))?,
                )
            }
        };
        Ok(LieSuperalgebra { field: Rationals, kind: self.kind, basis: self.basis.clone(), brackets, gram, realization })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NilpotentArtifact {
    pub schema: String,
    pub nilpotent: NilpotentData,
    /// The adapted basis used for every module computation.
    pub frame: Vec<Generator>,
}

impl NilpotentArtifact {
    pub fn new(nd: &NilpotentData, frame: &Frame<Rationals>) -> Self {
        NilpotentArtifact { schema: SCHEMA.into(), nilpotent: nd.clone(), frame: frame.gens.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub index: usize,
    pub lead: usize,
    pub lead_label: String,
    pub parity: Parity,
    pub weight: i32,
    pub filtration_degree: i32,
    pub value: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WPresentationArtifact {
    pub schema: String,
    pub kind: AlgebraKind,
    pub e_label: String,
    /// Labels of the module generators, aligned with monomial exponents.
    pub frame_labels: Vec<String>,
    pub middle_norm: Option<Scalar>,
    pub generators: Vec<GeneratorRecord>,
    pub relations: Vec<RelationRecord>,
    pub report: TableReport,
    pub graded: Option<GradedReport>,
}

fn records(terms: &BTreeMap<Vec<u16>, Q>) -> Vec<TermRecord> {
    terms.iter().map(|(m, c)| TermRecord { exponents: m.clone(), coeff: Rationals.to_scalar(c) }).collect()
}

fn from_records(rs: &[TermRecord]) -> Result<BTreeMap<Vec<u16>, Q>, IoError> {
    rs.iter().map(|r| Ok((r.exponents.clone(), rational(&r.coeff)?))).collect()
}

impl WPresentationArtifact {
    pub fn new(
        nd: &NilpotentData,
        frame: &Frame<Rationals>,
        pres: &WPresentation<Q>,
        graded: Option<GradedReport>,
    ) -> Self {
        WPresentationArtifact {
            schema: SCHEMA.into(),
            kind: nd.kind,
            e_label: nd.e_label.clone(),
            frame_labels: frame.labels(),
            middle_norm: frame.middle_norm.as_ref().map(|c| Rationals.to_scalar(c)),
            generators: pres
                .generators
                .iter()
                .map(|g| GeneratorRecord {
                    index: g.index,
                    lead: g.lead,
                    lead_label: g.lead_label.clone(),
                    parity: g.parity,
                    weight: g.weight,
                    filtration_degree: g.filtration_degree(),
                    value: records(&g.value),
                })
                .collect(),
            relations: pres
                .relations
                .iter()
                .map(|(&(i, j), p)| RelationRecord { i, j, terms: records(p) })
                .collect(),
            report: pres.report.clone(),
            graded,
        }
    }

    pub fn to_presentation(&self) -> Result<WPresentation<Q>, IoError> {
        check_schema(&self.schema)?;
        let generators = self
            .generators
            .iter()
            .map(|g| {
                Ok(WGenerator {
                    index: g.index,
                    lead: g.lead,
                    lead_label: g.lead_label.clone(),
                    parity: g.parity,
                    weight: g.weight,
                    value: from_records(&g.value)?,
                })
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        let relations = self
            .relations
            .iter()
            .map(|r| Ok(((r.i, r.j), from_records(&r.terms)?)))
            .collect::<Result<BTreeMap<_, _>, IoError>>()?;
        Ok(WPresentation { generators, relations, report: self.report.clone() })
    }
}

fn check_schema(s: &str) -> Result<(), IoError> {
    if s == SCHEMA {
        Ok(())
    } else {
        Err(IoError::Schema(s.to_string()))
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(x: &T) -> Result<String, IoError> {
    let mut s = serde_json::to_string_pretty(x)?;
    s.push('\n');
    Ok(s)
}

/// Parses an artifact after checking its `schema` field.
pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T, IoError> {
    let v: serde_json::Value = serde_json::from_str(s)?;
    match v.get("schema").and_then(|x| x.as_str()) {
        Some(SCHEMA) => Ok(serde_json::from_value(v)?),
        Some(other) => Err(IoError::Schema(other.to_string())),
        None => Err(IoError::Schema(String::new())),
    }
}

/// Writes to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), IoError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("artifact");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(contents)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, Family};

    #[test]
    fn algebra_round_trip() {
        let alg = build_algebra(Family::Osp, 1, 2).unwrap();
        let art = AlgebraArtifact::from_algebra(&alg);
        let json = to_json(&art).unwrap();
        let back: AlgebraArtifact = from_json(&json).unwrap();
        assert_eq!(back, art);
        assert_eq!(back.to_algebra().unwrap(), alg);
    }

    #[test]
    fn schema_and_scalar_rejections() {
        let alg = build_algebra(Family::Gl, 1, 1).unwrap();
        let json = to_json(&AlgebraArtifact::from_algebra(&alg)).unwrap();
        let wrong = json.replace("wsuper/1", "wsuper/0");
        assert!(matches!(from_json::<AlgebraArtifact>(&wrong), Err(IoError::Schema(_))));
        let corrupt = json.replacen("\"1/1\"", "\"1/0\"", 1);
        assert!(from_json::<AlgebraArtifact>(&corrupt).is_err());
    }
}
