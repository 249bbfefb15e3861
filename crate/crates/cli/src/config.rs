//! TOML run configuration. Every number that enters a computation is a
//! rational string (`"p"` or `"p/q"`); floats are rejected by type.

use std::path::Path;

use moprl::criteria::{AndreiefInput, CriterionParams, PolyType};
use moprl::families::FamilyRegistry;
use moprl::measures::{DiscreteMeasure, Interval, MeasureSystem, SystemKind};
use moprl::rational::{format_rational, parse_rational};
use moprl::{MultiIndex, Polynomial, Rational};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

fn field_err(field: impl Into<String>, message: impl ToString) -> ConfigError {
    ConfigError::Field { field: field.into(), message: message.to_string() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<IndexSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    /// `explicit`, `angelesco`, `at`, `nikishin` or `random`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub measures: Vec<MeasureSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub poles: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sigmas: Vec<MeasureSpec>,
    /// Generator name for `kind = "random"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    /// `[point, weight]` pairs.
    pub atoms: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexSpec {
    List(Vec<Vec<usize>>),
    Grid(GridSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Inclusive upper bound per component.
    pub grid: Vec<usize>,
}

/// Criterion parameters. Component numbers are 1-based here.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    #[serde(default)]
    pub criterion: Option<String>,
    #[serde(default)]
    pub j: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    /// Second slot of the type I interlacing pair.
    #[serde(default)]
    pub l: Option<usize>,
    /// Path directions for the Wronskian criteria.
    #[serde(default)]
    pub steps: Vec<usize>,
    #[serde(default, rename = "type")]
    pub poly_type: Option<String>,
    /// Ascending coefficients.
    #[serde(default)]
    pub q: Option<Vec<String>>,
    #[serde(default)]
    pub p: Option<Vec<String>>,
    #[serde(default)]
    pub n_conditions: Option<usize>,
    #[serde(default)]
    pub measure: Option<usize>,
    #[serde(default)]
    pub andreief: Option<AndreiefSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AndreiefSpec {
    /// Defaults to the system measure selected by `verify.measure`.
    #[serde(default)]
    pub atoms: Vec<[String; 2]>,
    pub phis: Vec<Vec<String>>,
    pub psis: Vec<Vec<String>>,
    #[serde(default)]
    pub matrix: Vec<Vec<String>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        RunConfig::parse(&text)
    }

    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        Ok(toml::from_str(text)?)
    }
}

fn rational(field: &str, s: &str) -> Result<Rational, ConfigError> {
    parse_rational(s).map_err(|e| field_err(field, e))
}

fn coefficients(field: &str, cs: &[String]) -> Result<Polynomial, ConfigError> {
    let c = cs.iter().enumerate().map(|(i, s)| rational(&format!("{field}[{i}]"), s)).collect::<Result<Vec<_>, _>>()?;
    Ok(Polynomial::new(c))
}

fn atoms(field: &str, pairs: &[[String; 2]]) -> Result<Vec<(Rational, Rational)>, ConfigError> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, [x, w])| Ok((rational(&format!("{field}[{i}][0]"), x)?, rational(&format!("{field}[{i}][1]"), w)?)))
        .collect()
}

impl MeasureSpec {
    fn build(&self, field: &str) -> Result<DiscreteMeasure, ConfigError> {
        let support = match &self.interval {
            Some([a, b]) => Some(
                Interval::new(rational(&format!("{field}.interval[0]"), a)?, rational(&format!("{field}.interval[1]"), b)?)
                    .map_err(|e| field_err(format!("{field}.interval"), e))?,
            ),
            None => None,
        };
        DiscreteMeasure::new(atoms(&format!("{field}.atoms"), &self.atoms)?, support).map_err(|e| field_err(field, e))
    }

    fn from_measure(m: &DiscreteMeasure) -> MeasureSpec {
        MeasureSpec {
            atoms: m.atoms().iter().map(|(x, w)| [format_rational(x), format_rational(w)]).collect(),
            interval: m.support().map(|iv| [format_rational(&iv.lo), format_rational(&iv.hi)]),
        }
    }
}

impl SystemSpec {
    /// `seed` drives `kind = "random"`.
    pub fn build(&self, seed: u64) -> Result<MeasureSystem, ConfigError> {
        let measures = || {
            self.measures.iter().enumerate().map(|(i, m)| m.build(&format!("system.measures[{i}]"))).collect::<Result<Vec<_>, _>>()
        };
        let err = |e: moprl::MeasureError| field_err("system", e);
        match self.kind.as_str() {
            "explicit" => MeasureSystem::explicit(measures()?).map_err(err),
            "angelesco" => MeasureSystem::angelesco(measures()?).map_err(err),
            "at" => {
                let mut ms = measures()?;
                if ms.len() != 1 {
                    return Err(field_err("system.measures", "an AT system takes exactly one base measure"));
                }
                let poles = self
                    .poles
                    .iter()
                    .enumerate()
                    .map(|(i, p)| rational(&format!("system.poles[{i}]"), p))
                    .collect::<Result<Vec<_>, _>>()?;
                MeasureSystem::at_cauchy(ms.remove(0), poles).map_err(err)
            }
            "nikishin" => {
                let sigmas = self
                    .sigmas
                    .iter()
                    .enumerate()
                    .map(|(i, m)| m.build(&format!("system.sigmas[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                MeasureSystem::nikishin(sigmas).map_err(err)
            }
            "random" => {
                let name = self.family.as_deref().ok_or_else(|| field_err("system.family", "required for kind = \"random\""))?;
                let registry = FamilyRegistry::default();
                let family = registry
                    .get(name)
                    .ok_or_else(|| field_err("system.family", format!("unknown family {name:?}; known: {}", registry.names().join(", "))))?;
                Ok(family.generate(seed))
            }
            other => Err(field_err("system.kind", format!("unknown kind {other:?}"))),
        }
    }

    /// Canonical spec of a built system: random systems resolve to their
    /// concrete kind, atoms are sorted, rationals in lowest terms.
    pub fn canonical(system: &MeasureSystem) -> SystemSpec {
        let mut spec =
            SystemSpec { kind: String::new(), measures: vec![], poles: vec![], sigmas: vec![], family: None };
        match system.kind() {
            SystemKind::Explicit | SystemKind::Angelesco => {
                spec.kind = if matches!(system.kind(), SystemKind::Explicit) { "explicit" } else { "angelesco" }.into();
                spec.measures = system.measures().iter().map(MeasureSpec::from_measure).collect();
            }
            SystemKind::AtCauchy { poles, base } => {
                spec.kind = "at".into();
                spec.measures = vec![MeasureSpec::from_measure(base)];
                spec.poles = poles.iter().map(format_rational).collect();
            }
            SystemKind::Nikishin { sigmas } => {
                spec.kind = "nikishin".into();
                spec.sigmas = sigmas.iter().map(MeasureSpec::from_measure).collect();
            }
        }
        spec
    }
}

/// Canonical TOML text of a built system.
pub fn canonical_text(system: &MeasureSystem) -> String {
    #[derive(Serialize)]
    struct Wrapper {
        system: SystemSpec,
    }
    toml::to_string(&Wrapper { system: SystemSpec::canonical(system) }).expect("system specs always serialize")
}

/// Hex SHA-256 of [`canonical_text`].
pub fn fingerprint(system: &MeasureSystem) -> String {
    let digest = Sha256::digest(canonical_text(system).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl IndexSpec {
    /// Indices and whether they came from a grid expansion.
    pub fn expand(&self, r: usize) -> Result<(Vec<MultiIndex>, bool), ConfigError> {
        match self {
            IndexSpec::List(list) => {
                let out = list.iter().map(|p| MultiIndex::new(p.clone())).collect::<Vec<_>>();
                if let Some(bad) = out.iter().find(|n| n.r() != r) {
                    return Err(field_err("indices", format!("{bad} has {} components, system has {r}", bad.r())));
                }
                Ok((out, false))
            }
            IndexSpec::Grid(g) => {
                if g.grid.len() != r {
                    return Err(field_err("indices.grid", format!("{} bounds for a system with {r} measures", g.grid.len())));
                }
                Ok((MultiIndex::grid(&g.grid), true))
            }
        }
    }
}

fn slot(field: &str, one_based: Option<usize>) -> Result<Option<usize>, ConfigError> {
    match one_based {
        Some(0) => Err(field_err(field, "components are numbered from 1")),
        Some(v) => Ok(Some(v - 1)),
        None => Ok(None),
    }
}

pub fn parse_poly_type(s: &str) -> Result<PolyType, ConfigError> {
    PolyType::parse(s).ok_or_else(|| field_err("type", format!("expected i or ii, got {s:?}")))
}

impl VerifySpec {
    pub fn params(&self) -> Result<CriterionParams, ConfigError> {
        let mut p = CriterionParams {
            j: slot("verify.j", self.j)?,
            k: slot("verify.k", self.k)?,
            ell: slot("verify.l", self.l)?,
            n_conditions: self.n_conditions,
            measure: slot("verify.measure", self.measure)?.unwrap_or(0),
            ..Default::default()
        };
        p.steps = self
            .steps
            .iter()
            .map(|&s| slot("verify.steps", Some(s)).map(Option::unwrap))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(t) = &self.poly_type {
            p.poly_type = parse_poly_type(t)?;
        }
        if let Some(q) = &self.q {
            p.q = Some(coefficients("verify.q", q)?);
        }
        if let Some(pp) = &self.p {
            p.p = Some(coefficients("verify.p", pp)?);
        }
        if let Some(a) = &self.andreief {
            let polys = |field: &str, list: &[Vec<String>]| {
                list.iter().enumerate().map(|(i, c)| coefficients(&format!("{field}[{i}]"), c)).collect::<Result<Vec<_>, _>>()
            };
            let matrix = a
                .matrix
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter().enumerate().map(|(k, s)| rational(&format!("verify.andreief.matrix[{i}][{k}]"), s)).collect()
                })
                .collect::<Result<Vec<Vec<Rational>>, _>>()?;
            let measure = if a.atoms.is_empty() {
                DiscreteMeasure::new(Vec::new(), None).expect("empty measure is valid")
            } else {
                DiscreteMeasure::new(atoms("verify.andreief.atoms", &a.atoms)?, None)
                    .map_err(|e| field_err("verify.andreief.atoms", e))?
            };
            p.andreief = Some(AndreiefInput {
                measure,
                phis: polys("verify.andreief.phis", &a.phis)?,
                psis: polys("verify.andreief.psis", &a.psis)?,
                matrix,
            });
        }
        Ok(p)
    }
}
