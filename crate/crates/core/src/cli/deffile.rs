//! JSON definition files. Indices are 1-based in files and 0-based in memory.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::expr::{parse_expression, parse_multivector};
use crate::algebroid::{fixtures, Multivector, OneCochain, Presentation};
use crate::differentials::{KDifferential, RhoTensor};
use crate::error::{Error, Result};
use crate::exactcore::Poly;
use crate::jet::CharPair;
use crate::transitive::{Connection, PrimaryPair};

/// `components` maps a coordinate name to the ∧^{k−1}A factor of its ∂ leg.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoTensorDef {
    pub k: usize,
    #[serde(default)]
    pub components: BTreeMap<String, String>,
}

/// Values on frame sections and coordinate functions; omitted entries are 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialDef {
    pub k: usize,
    #[serde(default)]
    pub sections: BTreeMap<String, String>,
    #[serde(default)]
    pub coords: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharPairDef {
    pub k: usize,
    #[serde(default)]
    pub chi: BTreeMap<String, String>,
    #[serde(default)]
    pub pi: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimaryPairDef {
    pub k: usize,
    #[serde(default)]
    pub omega: BTreeMap<String, String>,
    pub lambda: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefinitionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub base: Vec<String>,
    pub frame: Vec<String>,
    /// One row per frame section, one entry per coordinate.
    #[serde(default)]
    pub anchor: Vec<Vec<String>>,
    /// "i,j" with i < j ↦ {"k": c_ij^k}.
    #[serde(default)]
    pub brackets: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_frame: Option<Vec<String>>,
    /// Coordinate name ↦ λ(∂x) as a section expression.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tensors: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rho_tensors: BTreeMap<String, RhoTensorDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differentials: BTreeMap<String, DifferentialDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub char_pairs: BTreeMap<String, CharPairDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub primary_pairs: BTreeMap<String, PrimaryPairDef>,
}

/// A parsed definition file.
#[derive(Clone, Debug)]
pub struct Definition {
    pub presentation: Presentation,
    pub kernel_frame: Option<Vec<Multivector>>,
    pub connection: Option<Connection>,
    pub tensors: BTreeMap<String, Multivector>,
    pub rho_tensors: BTreeMap<String, RhoTensor>,
    pub differentials: BTreeMap<String, KDifferential>,
    pub char_pairs: BTreeMap<String, CharPair>,
    pub primary_pairs: BTreeMap<String, PrimaryPair>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

fn check_name(kind: &str, name: &str) -> Result<()> {
    let mut chars = name.chars();
    let ok = chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(malformed(format!(
            "{kind} name '{name}' is not an identifier"
        )))
    }
}

fn index(s: &str, n: usize, what: &str) -> Result<usize> {
    let i: usize = s
        .trim()
        .parse()
        .map_err(|_| malformed(format!("{what} index '{s}' is not a positive integer")))?;
    if i == 0 || i > n {
        return Err(malformed(format!("{what} index {i} outside 1..={n}")));
    }
    Ok(i - 1)
}

fn position(names: &[String], key: &str, what: &str) -> Result<usize> {
    names
        .iter()
        .position(|s| s == key)
        .ok_or_else(|| malformed(format!("unknown {what} '{key}'")))
}

impl DefinitionFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| malformed(format!("definition file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    /// The structure data of a presentation, with the fixture kernel frame and
    /// connection when there are ones.
    pub fn from_presentation(p: &Presentation) -> Self {
        let render = |f: &Poly| p.render_poly(f);
        let mut brackets = BTreeMap::new();
        for i in 0..p.n() {
            for j in i + 1..p.n() {
                let row: BTreeMap<String, String> = p
                    .structure(i, j)
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| ((k + 1).to_string(), render(c)))
                    .collect();
                if !row.is_empty() {
                    brackets.insert(format!("{},{}", i + 1, j + 1), row);
                }
            }
        }
        DefinitionFile {
            name: Some(p.name.clone()),
            base: p.coords().to_vec(),
            frame: p.frame().to_vec(),
            anchor: (0..p.n())
                .map(|i| p.anchor(i).iter().map(render).collect())
                .collect(),
            brackets,
            kernel_frame: fixtures::kernel_frame(p)
                .map(|f| f.iter().map(|u| p.render(u)).collect()),
            connection: fixtures::connection(p).map(|rows| {
                rows.iter()
                    .enumerate()
                    .map(|(a, row)| {
                        let img = row
                            .iter()
                            .enumerate()
                            .fold(p.zero_mv(), |acc, (i, f)| acc + p.e(i).mul_poly(f));
                        (p.coords()[a].clone(), p.render(&img))
                    })
                    .collect()
            }),
            ..Default::default()
        }
    }

    pub fn build(&self, default_name: &str) -> Result<Definition> {
        let mut seen = BTreeSet::new();
        for (kind, name) in self
            .base
            .iter()
            .map(|s| ("coordinate", s))
            .chain(self.frame.iter().map(|s| ("frame", s)))
        {
            check_name(kind, name)?;
            if !seen.insert(name.clone()) {
                return Err(malformed(format!("name '{name}' is declared twice")));
            }
        }
        let (m, n) = (self.base.len(), self.frame.len());
        let coords = &self.base;
        let frame = &self.frame;
        let poly = |s: &str| parse_expression(s, coords);
        let mv = |s: &str| parse_multivector(s, coords, frame);

        let anchor = if self.anchor.is_empty() && m == 0 {
            vec![Vec::new(); n]
        } else {
            if self.anchor.len() != n {
                return Err(malformed(format!(
                    "anchor has {} rows, frame has {n} sections",
                    self.anchor.len()
                )));
            }
            self.anchor
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    if row.len() != m {
                        return Err(malformed(format!(
                            "anchor row {} has {} entries, base has {m} coordinates",
                            i + 1,
                            row.len()
                        )));
                    }
                    row.iter().map(|s| poly(s)).collect()
                })
                .collect::<Result<Vec<Vec<Poly>>>>()?
        };
        let mut brackets = Vec::new();
        for (key, row) in &self.brackets {
            let (si, sj) = key
                .split_once(',')
                .ok_or_else(|| malformed(format!("bracket key '{key}' is not \"i,j\"")))?;
            let (i, j) = (index(si, n, "bracket")?, index(sj, n, "bracket")?);
            if i >= j {
                return Err(malformed(format!("bracket key '{key}' needs i < j")));
            }
            let mut coeffs = vec![Poly::zero(m); n];
            for (sk, expr) in row {
                coeffs[index(sk, n, "bracket")?] = poly(expr)?;
            }
            brackets.push(((i, j), coeffs));
        }
        let name = self
            .name
            .clone()
            .unwrap_or_else(|| default_name.to_string());
        let p = Presentation::new(name, coords.clone(), frame.clone(), anchor, brackets)?;

        let kernel_frame = self
            .kernel_frame
            .as_ref()
            .map(|v| v.iter().map(|s| mv(s)).collect::<Result<Vec<_>>>())
            .transpose()?;
        let connection = match &self.connection {
            None => None,
            Some(map) => {
                let mut lambda = vec![vec![Poly::zero(m); n]; m];
                for (c, expr) in map {
                    let a = position(coords, c, "coordinate")?;
                    let w = mv(expr)?;
                    if !w.is_zero() && w.homogeneous_degree() != Some(1) {
                        return Err(malformed(format!(
                            "connection value at {c} is not a section"
                        )));
                    }
                    for (i, slot) in lambda[a].iter_mut().enumerate() {
                        *slot = w.coeff(&[i]);
                    }
                }
                Some(Connection::new(&p, lambda)?)
            }
        };

        let tensors = self
            .tensors
            .iter()
            .map(|(k, s)| Ok((k.clone(), mv(s)?)))
            .collect::<Result<_>>()?;
        let rho_tensor = |k: usize, comps: &BTreeMap<String, String>| -> Result<RhoTensor> {
            let mut out = RhoTensor::zero(&p, k);
            for (c, expr) in comps {
                out.comps[position(coords, c, "coordinate")?] = mv(expr)?;
            }
            Ok(out)
        };
        let rho_tensors = self
            .rho_tensors
            .iter()
            .map(|(name, d)| Ok((name.clone(), rho_tensor(d.k, &d.components)?)))
            .collect::<Result<_>>()?;
        let differentials = self
            .differentials
            .iter()
            .map(|(name, d)| {
                let mut out = KDifferential::zero(&p, d.k);
                for (s, expr) in &d.sections {
                    out.delta0[position(frame, s, "frame section")?] = mv(expr)?;
                }
                for (c, expr) in &d.coords {
                    let a = position(coords, c, "coordinate")?;
                    if d.k == 0 {
                        return Err(malformed(format!(
                            "{name}: a 0-differential kills functions"
                        )));
                    }
                    out.delta1[a] = mv(expr)?;
                }
                Ok((name.clone(), out))
            })
            .collect::<Result<_>>()?;
        let char_pairs = self
            .char_pairs
            .iter()
            .map(|(name, d)| {
                let mut chi = vec![p.zero_mv(); n];
                for (s, expr) in &d.chi {
                    chi[position(frame, s, "frame section")?] = mv(expr)?;
                }
                Ok((
                    name.clone(),
                    CharPair::new(d.k, chi, rho_tensor(d.k, &d.pi)?),
                ))
            })
            .collect::<Result<_>>()?;
        let primary_pairs = self
            .primary_pairs
            .iter()
            .map(|(name, d)| {
                let mut values = vec![p.zero_mv(); n];
                for (s, expr) in &d.omega {
                    values[position(frame, s, "frame section")?] = mv(expr)?;
                }
                Ok((
                    name.clone(),
                    PrimaryPair {
                        k: d.k,
                        omega: OneCochain { values },
                        lambda: mv(&d.lambda)?,
                    },
                ))
            })
            .collect::<Result<_>>()?;
        Ok(Definition {
            presentation: p,
            kernel_frame,
            connection,
            tensors,
            rho_tensors,
            differentials,
            char_pairs,
            primary_pairs,
        })
    }
}

/// Read and build a definition file; the file stem is the default name.
pub fn load(path: &std::path::Path) -> Result<Definition> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| malformed(format!("cannot read {}: {e}", path.display())))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    DefinitionFile::from_json(&text)?.build(&stem)
}
