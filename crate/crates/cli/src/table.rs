//! GW table files: a model plus invariants at the origin, all rationals as
//! `"p/q"` strings.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use bigphase_core::genfun::genfun_from_records;
use bigphase_core::model::Mat;
use bigphase_core::{GenFunSet, GenusDegrees, GwRecord, ManifoldModel, VarId, VarWindow, Q};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    #[serde(rename = "N")]
    pub n: usize,
    /// Row-major `N×N`.
    pub eta: Vec<String>,
    pub b: Vec<String>,
    /// Row-major `N×N`, `chern[α][β] = C_α^β`.
    pub chern: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1_cdm1: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordJson {
    pub genus: u32,
    /// `[level, class]` pairs, class 1-based.
    pub insertions: Vec<[u32; 2]>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableJson {
    /// Genus-2 target degree the records are complete for, if declared.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    pub model: ModelJson,
    pub records: Vec<RecordJson>,
}

/// A parsed table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwTable {
    pub degree: Option<u32>,
    pub model: ManifoldModel,
    pub records: Vec<GwRecord>,
}

/// Always `p/q`, including integers.
pub fn fmt_pq(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(s: &str) -> Result<Q, CliError> {
    let t = s.trim();
    if t.contains(['.', 'e', 'E']) {
        return Err(CliError::input(format!("'{s}' is not an exact fraction")));
    }
    Q::from_str(t).map_err(|e| CliError::input(format!("bad rational '{s}': {e}")))
}

fn parse_mat(name: &str, flat: &[String], n: usize) -> Result<Mat, CliError> {
    if flat.len() != n * n {
        return Err(CliError::input(format!("{name} has {} entries, expected {}", flat.len(), n * n)));
    }
    flat.chunks(n).map(|row| row.iter().map(|s| parse_q(s)).collect()).collect()
}

fn flat(m: &Mat) -> Vec<String> {
    m.iter().flat_map(|row| row.iter().map(fmt_pq)).collect()
}

impl ModelJson {
    pub fn to_model(&self) -> Result<ManifoldModel, CliError> {
        let n = self.n;
        if self.b.len() != n {
            return Err(CliError::input(format!("b has {} entries, expected {n}", self.b.len())));
        }
        let eta = parse_mat("eta", &self.eta, n)?;
        let chern = parse_mat("chern", &self.chern, n)?;
        let b = self.b.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>, _>>()?;
        let chi = self.chi.as_deref().map(parse_q).transpose()?;
        let c1 = self.c1_cdm1.as_deref().map(parse_q).transpose()?;
        Ok(ManifoldModel::new(eta, b, chern, chi, c1)?)
    }

    pub fn from_model(m: &ManifoldModel) -> Self {
        ModelJson {
            n: m.num_classes,
            eta: flat(&m.eta),
            b: m.b.iter().map(fmt_pq).collect(),
            chern: flat(&m.chern),
            chi: Some(fmt_pq(&m.chi)),
            c1_cdm1: Some(fmt_pq(&m.c1_cdm1)),
        }
    }
}

impl GwTable {
    pub fn from_json(j: &TableJson) -> Result<Self, CliError> {
        let model = j.model.to_model()?;
        let mut records = Vec::with_capacity(j.records.len());
        for (i, r) in j.records.iter().enumerate() {
            let mut insertions = Vec::with_capacity(r.insertions.len());
            for &[level, class] in &r.insertions {
                if class == 0 || class as usize > model.num_classes {
                    return Err(CliError::input(format!("record {i}: class {class} out of range")));
                }
                insertions.push(VarId::new(level, class));
            }
            insertions.sort();
            records.push(GwRecord { genus: r.genus, insertions, value: parse_q(&r.value)? });
        }
        Ok(GwTable { degree: j.degree, model, records })
    }

    pub fn to_json(&self) -> TableJson {
        TableJson {
            degree: self.degree,
            model: ModelJson::from_model(&self.model),
            records: self
                .records
                .iter()
                .map(|r| RecordJson {
                    genus: r.genus,
                    insertions: r.insertions.iter().map(|v| [v.level, v.class]).collect(),
                    value: fmt_pq(&r.value),
                })
                .collect(),
        }
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        let j: TableJson = serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("malformed GW table {}: {e}", path.display())))?;
        Self::from_json(&j)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("table serializes");
        std::fs::write(path, text + "\n").map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
    }

    /// Rejects degrees beyond the declared coverage.
    pub fn check_degree(&self, degree: u32) -> Result<(), CliError> {
        match self.degree {
            Some(d) if degree > d => Err(CliError::input(format!(
                "degree {degree} requested but the table is only complete through degree {d}"
            ))),
            _ => Ok(()),
        }
    }

    /// Generating functions around `t_{0,1} = shift`, with ingest warnings.
    pub fn genfun(
        &self,
        window: VarWindow,
        degrees: GenusDegrees,
        shift: &Q,
    ) -> Result<(GenFunSet, Vec<String>), CliError> {
        let mut base = BTreeMap::new();
        base.insert(VarId::new(0, 1), shift.clone());
        Ok(genfun_from_records(window, degrees, &base, &self.records)?)
    }
}
