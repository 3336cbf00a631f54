//! JSON experiment configuration.

use std::path::{Path, PathBuf};

use copylink_core::experiments::{JfChoice, Linking, SweepSpec};
use copylink_core::ground::Solver;
use copylink_core::precision::{ErrorModel, PrecisionGrid};
use copylink_core::replication::{CopyTopology, LinkNoise};
use copylink_core::{seed, Family, DEFAULT_DEG_TOL};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: String,
    pub n: usize,
    pub instances: u64,
    #[serde(default)]
    pub seed: u64,
    pub precisions: Vec<u32>,
    #[serde(default)]
    pub error_model: ErrorModelSpec,
    #[serde(default)]
    pub topology: Option<TopologySpec>,
    #[serde(default)]
    pub jf: Option<JfSpec>,
    #[serde(default)]
    pub link_noise: LinkNoiseSpec,
    #[serde(default = "default_deg_tol")]
    pub deg_tol: f64,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub threads: Option<usize>,
    /// Read instances from this file instead of generating them.
    #[serde(default)]
    pub instance_file: Option<PathBuf>,
}

fn default_deg_tol() -> f64 {
    DEFAULT_DEG_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ErrorModelSpec {
    #[default]
    Midpoint,
    DetRandom {
        #[serde(default)]
        seed: Option<u64>,
    },
    UniformRandom {
        #[serde(default = "default_samples")]
        samples: u32,
        #[serde(default)]
        seed: Option<u64>,
    },
}

fn default_samples() -> u32 {
    10
}

impl ErrorModelSpec {
    /// Model seeds default to one derived from the master seed.
    pub fn build(&self, master_seed: u64) -> CliResult<ErrorModel> {
        let derived = |s: Option<u64>| s.unwrap_or_else(|| seed::derive(master_seed, "error-model", 0));
        Ok(match *self {
            ErrorModelSpec::Midpoint => ErrorModel::midpoint(),
            ErrorModelSpec::DetRandom { seed } => ErrorModel::deterministic_random(derived(seed)),
            ErrorModelSpec::UniformRandom { samples, seed } => {
                ErrorModel::uniform_random(derived(seed), samples).map_err(schema)?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TopologySpec {
    /// `pair`, `chain3`, `triangle`, `chain<k>` or `cycle<k>`.
    Named(String),
    Shape(ShapeSpec),
}

/// `{"copies": C, "shape": "pair"|"chain"|"triangle"|"cycle"|"custom",
/// "cycle_len": k, "edges": [[c, c'], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeSpec {
    #[serde(default)]
    pub copies: Option<usize>,
    pub shape: String,
    #[serde(default)]
    pub cycle_len: Option<usize>,
    #[serde(default)]
    pub edges: Option<Vec<(usize, usize)>>,
}

impl TopologySpec {
    pub fn build(&self) -> CliResult<CopyTopology> {
        let s = match self {
            TopologySpec::Named(name) => return parse_topology(name),
            TopologySpec::Shape(s) => s,
        };
        let topo = match (s.shape.as_str(), s.copies, s.cycle_len, &s.edges) {
            ("pair", None | Some(2), None, None) => CopyTopology::pair(),
            ("triangle", None | Some(3), None, None) => CopyTopology::triangle(),
            ("chain", c, None, None) => CopyTopology::chain(c.unwrap_or(3)).map_err(schema)?,
            ("cycle", c, k, None) if c.is_none() || k.is_none() || c == k => {
                let len = k.or(c).ok_or_else(|| CliError::Schema("cycle needs cycle_len".into()))?;
                CopyTopology::cycle(len).map_err(schema)?
            }
            ("custom", Some(c), None, Some(edges)) => CopyTopology::new(c, edges.iter().copied()).map_err(schema)?,
            _ => return Err(CliError::Schema(format!("inconsistent topology spec {s:?}"))),
        };
        Ok(topo)
    }
}

/// `pair`, `triangle`, `chain<k>` or `cycle<k>`.
pub fn parse_topology(name: &str) -> CliResult<CopyTopology> {
    let lower = name.to_ascii_lowercase();
    let counted = |prefix: &str| lower.strip_prefix(prefix).and_then(|k| k.parse::<usize>().ok());
    match lower.as_str() {
        "pair" => Ok(CopyTopology::pair()),
        "triangle" => Ok(CopyTopology::triangle()),
        _ => {
            if let Some(k) = counted("chain") {
                CopyTopology::chain(k).map_err(schema)
            } else if let Some(k) = counted("cycle") {
                CopyTopology::cycle(k).map_err(schema)
            } else {
                Err(CliError::Schema(format!("unknown topology {name:?}")))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JfSpec {
    Value(f64),
    Grid(Vec<f64>),
    /// `min` for `-2^(1-p)`, `midpoints` for every grid midpoint in `[-1, 0]`.
    Named(String),
    Mode(JfModeSpec),
}

/// `{"mode": "min"|"fixed"|"sweep", "value": v, "grid": [...]}`; a sweep
/// without a grid uses every non-positive midpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JfModeSpec {
    pub mode: String,
    #[serde(default)]
    pub value: Option<f64>,
    #[serde(default)]
    pub grid: Option<Vec<f64>>,
}

impl JfSpec {
    pub fn build(&self) -> CliResult<JfChoice> {
        match self {
            JfSpec::Value(v) => Ok(JfChoice::Fixed(*v)),
            JfSpec::Grid(vs) => Ok(JfChoice::Grid(vs.clone())),
            JfSpec::Named(s) => match s.as_str() {
                "min" => Ok(JfChoice::Min),
                "midpoints" => Ok(JfChoice::NonPositiveMidpoints),
                other => Err(CliError::Schema(format!("unknown jf spec {other:?}"))),
            },
            JfSpec::Mode(m) => match (m.mode.as_str(), m.value, &m.grid) {
                ("min", None, None) => Ok(JfChoice::Min),
                ("fixed", Some(v), None) => Ok(JfChoice::Fixed(v)),
                ("sweep", None, Some(g)) => Ok(JfChoice::Grid(g.clone())),
                ("sweep", None, None) => Ok(JfChoice::NonPositiveMidpoints),
                _ => Err(CliError::Schema(format!("inconsistent jf spec {m:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkNoiseSpec {
    #[serde(default)]
    pub noisy_links: bool,
    #[serde(default)]
    pub independent_copies: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverSpec {
    #[default]
    Auto,
    BruteForce,
    BranchAndBound,
}

impl From<SolverSpec> for Solver {
    fn from(s: SolverSpec) -> Self {
        match s {
            SolverSpec::Auto => Solver::Auto,
            SolverSpec::BruteForce => Solver::BruteForce,
            SolverSpec::BranchAndBound => Solver::BranchAndBound,
        }
    }
}

pub(crate) fn schema(e: impl std::fmt::Display) -> CliError {
    CliError::Schema(e.to_string())
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(schema)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        let family: Family = self.family.parse().map_err(schema)?;
        if family == Family::Custom && self.instance_file.is_none() {
            return Err(CliError::Schema("custom family needs an instance_file".into()));
        }
        if self.n == 0 {
            return Err(CliError::Schema("n must be at least 1".into()));
        }
        if self.instances == 0 {
            return Err(CliError::Schema("instances must be at least 1".into()));
        }
        if self.precisions.is_empty() {
            return Err(CliError::Schema("precisions must not be empty".into()));
        }
        for &p in &self.precisions {
            PrecisionGrid::new(p).map_err(schema)?;
        }
        if !(self.deg_tol >= 0.0 && self.deg_tol.is_finite()) {
            return Err(CliError::Schema("deg_tol must be finite and non-negative".into()));
        }
        if self.threads == Some(0) {
            return Err(CliError::Schema("threads must be at least 1".into()));
        }
        if self.topology.is_some() != self.jf.is_some() {
            return Err(CliError::Schema("topology and jf must be given together".into()));
        }
        self.sweep_spec()?.cells().map_err(schema)?;
        Ok(())
    }

    pub fn family(&self) -> Family {
        self.family.parse().expect("validated")
    }

    pub fn topology(&self) -> CliResult<Option<CopyTopology>> {
        self.topology.as_ref().map(TopologySpec::build).transpose()
    }

    pub fn sweep_spec(&self) -> CliResult<SweepSpec> {
        let linking = match (&self.topology, &self.jf) {
            (Some(t), Some(jf)) => Some(Linking {
                topology: t.build()?,
                jf: jf.build()?,
                noise: LinkNoise {
                    noisy_links: self.link_noise.noisy_links,
                    independent_copies: self.link_noise.independent_copies,
                },
            }),
            _ => None,
        };
        Ok(SweepSpec {
            precisions: self.precisions.clone(),
            model: self.error_model.build(self.seed)?,
            linking,
            deg_tol: self.deg_tol,
            solver: self.solver.into(),
        })
    }

    /// Qubits of the largest system solved per trial.
    pub fn qubits(&self) -> CliResult<usize> {
        Ok(self.n * self.topology()?.map_or(1, |t| t.copies()))
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex(&Sha256::digest(json.as_bytes()))
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"family":"sk","n":5,"instances":10,"precisions":[3,4]}"#).unwrap();
        assert_eq!(cfg.error_model, ErrorModelSpec::Midpoint);
        assert_eq!(cfg.deg_tol, DEFAULT_DEG_TOL);
        assert!(cfg.sweep_spec().unwrap().linking.is_none());
        assert_eq!(cfg.qubits().unwrap(), 5);
    }

    #[test]
    fn linked_config() {
        let cfg = ExperimentConfig::from_json(
            r#"{"family":"sk","n":5,"instances":10,"seed":4,"precisions":[3],
                "error_model":{"kind":"uniform_random"},"topology":"triangle","jf":"min"}"#,
        )
        .unwrap();
        let spec = cfg.sweep_spec().unwrap();
        assert_eq!(spec.model.samples(), 10);
        assert_eq!(spec.cells().unwrap()[0].jf, Some(-0.25));
        assert_eq!(cfg.qubits().unwrap(), 15);
        let cycle = ExperimentConfig::from_json(
            r#"{"family":"sk","n":3,"instances":1,"precisions":[3],"topology":{"shape":"cycle","cycle_len":5},"jf":[0.0,-0.25]}"#,
        )
        .unwrap();
        assert_eq!(cycle.qubits().unwrap(), 15);
    }

    #[test]
    fn object_forms() {
        let cfg = ExperimentConfig::from_json(
            r#"{"family":"sk","n":4,"instances":2,"precisions":[3,4],
                "topology":{"copies":3,"shape":"triangle"},"jf":{"mode":"sweep"}}"#,
        )
        .unwrap();
        assert_eq!(cfg.sweep_spec().unwrap().cells().unwrap().len(), 5 + 9);
        let fixed = ExperimentConfig::from_json(
            r#"{"family":"sk","n":4,"instances":2,"precisions":[3],
                "topology":{"copies":4,"shape":"chain"},"jf":{"mode":"fixed","value":-0.5}}"#,
        )
        .unwrap();
        assert_eq!(fixed.qubits().unwrap(), 16);
        assert_eq!(fixed.sweep_spec().unwrap().cells().unwrap()[0].jf, Some(-0.5));
    }

    #[test]
    fn schema_violations() {
        for bad in [
            r#"{"family":"sk","n":5,"instances":0,"precisions":[3]}"#,
            r#"{"family":"sk","n":5,"instances":1,"precisions":[0]}"#,
            r#"{"family":"sk","n":5,"instances":1,"precisions":[]}"#,
            r#"{"family":"spin","n":5,"instances":1,"precisions":[3]}"#,
            r#"{"family":"sk","n":5,"instances":1,"precisions":[3],"bogus":1}"#,
            r#"{"family":"sk","n":5,"instances":1,"precisions":[3],"topology":"triangle"}"#,
            r#"{"family":"sk","n":5,"instances":1,"precisions":[3],"topology":"square","jf":"min"}"#,
            r#"{"family":"sk","n":5,"instances":1,"precisions":[3],"topology":"pair","jf":[-0.5]}"#,
            r#"{"family":"sk","n":5,"instances":1,"precisions":[3],"error_model":{"kind":"gauss"}}"#,
            r#"{"family":"sk","n":"5","instances":1,"precisions":[3]}"#,
            r#"{"family":"sk","n":5,"instances":1,"precisions":[3],"topology":{"shape":"triangle","copies":4},"jf":"min"}"#,
            r#"{"family":"sk","n":5,"instances":1,"precisions":[3],"topology":"pair","jf":{"mode":"fixed"}}"#,
        ] {
            let err = ExperimentConfig::from_json(bad).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{bad}: {err}");
        }
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::from_json(r#"{"family":"sk","n":5,"instances":10,"precisions":[3]}"#).unwrap();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.seed = 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
