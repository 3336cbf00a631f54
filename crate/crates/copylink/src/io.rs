//! Instance files: a JSON list of instances, or a single instance object.

use std::path::Path;

use copylink_core::{Family, IsingInstance};
use serde::{Deserialize, Serialize};

use crate::config::schema;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceRecord {
    pub id: String,
    pub n: usize,
    pub family: String,
    #[serde(default)]
    pub seed: Option<u64>,
    pub h: Vec<f64>,
    #[serde(default)]
    pub couplings: Vec<(usize, usize, f64)>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    Many(Vec<InstanceRecord>),
    One(InstanceRecord),
}

impl From<&IsingInstance> for InstanceRecord {
    fn from(inst: &IsingInstance) -> Self {
        Self {
            id: inst.id().into(),
            n: inst.n(),
            family: inst.family().as_str().into(),
            seed: inst.seed(),
            h: inst.h().to_vec(),
            couplings: inst.couplings().iter().map(|c| (c.j, c.k, c.value)).collect(),
        }
    }
}

impl InstanceRecord {
    pub fn to_instance(&self) -> CliResult<IsingInstance> {
        if self.h.len() != self.n {
            return Err(CliError::Schema(format!(
                "instance {}: n = {} but {} fields given",
                self.id,
                self.n,
                self.h.len()
            )));
        }
        let family: Family = self.family.parse().map_err(schema)?;
        let inst = IsingInstance::new(self.id.clone(), family, self.seed, self.h.clone(), self.couplings.iter().copied())
            .and_then(|i| i.check_unit_range().map(|_| i))
            .map_err(|e| CliError::Schema(format!("instance {}: {e}", self.id)))?;
        Ok(inst)
    }
}

pub fn parse_instances(text: &str) -> CliResult<Vec<IsingInstance>> {
    let records = match serde_json::from_str::<OneOrMany>(text).map_err(schema)? {
        OneOrMany::Many(v) => v,
        OneOrMany::One(r) => vec![r],
    };
    if records.is_empty() {
        return Err(CliError::Schema("instance file is empty".into()));
    }
    records.iter().map(InstanceRecord::to_instance).collect()
}

pub fn read_instances(path: &Path) -> CliResult<Vec<IsingInstance>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_instances(&text).map_err(|e| match e {
        CliError::Schema(msg) => CliError::Schema(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn instances_json(instances: &[IsingInstance]) -> String {
    let records: Vec<InstanceRecord> = instances.iter().map(InstanceRecord::from).collect();
    let mut s = serde_json::to_string_pretty(&records).expect("records serialize");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
