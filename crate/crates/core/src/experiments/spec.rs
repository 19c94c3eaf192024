use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ExperimentError;
use crate::algos::registry;
use crate::graph::{
    assign_ids, assign_ports, complete, cycle, gen_gnp, mobius_ladder, path, read_graph, star, PortGraph,
};
use crate::lb::{self, Family};
use crate::rng::derive;
use crate::sim::{BandwidthModel, KnowledgeModel, SimConfig};

const ID_TAG: u64 = 0x6964;
const PORT_TAG: u64 = 0x706f;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bandwidth {
    #[default]
    Congest,
    Local,
}

/// Instance source. Sized generators yield one graph per `(n, seed)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Generator {
    /// `G(n, p)` with either a fixed `p` or `p = p_log_factor·ln n / n`,
    /// clipped to 1.
    Gnp {
        n: Vec<usize>,
        p: Option<f64>,
        p_log_factor: Option<f64>,
    },
    Mobius {
        n: Vec<usize>,
    },
    Cycle {
        n: Vec<usize>,
    },
    Path {
        n: Vec<usize>,
    },
    Complete {
        n: Vec<usize>,
    },
    Star {
        n: Vec<usize>,
    },
    File {
        path: PathBuf,
    },
    Family {
        family: Family,
        #[serde(default)]
        params: lb::Params,
    },
}

impl Generator {
    pub fn scales(&self) -> Vec<Option<usize>> {
        match self {
            Generator::Gnp { n, .. }
            | Generator::Mobius { n }
            | Generator::Cycle { n }
            | Generator::Path { n }
            | Generator::Complete { n }
            | Generator::Star { n } => n.iter().map(|&x| Some(x)).collect(),
            Generator::File { .. } | Generator::Family { .. } => vec![None],
        }
    }

    /// Edge probability at scale `n`, for `G(n, p)` only.
    pub fn p_at(&self, n: usize) -> Option<f64> {
        match self {
            Generator::Gnp { p: Some(p), .. } => Some(*p),
            Generator::Gnp { p_log_factor: Some(c), .. } => Some((c * (n.max(2) as f64).ln() / n as f64).min(1.0)),
            _ => None,
        }
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Spec(m.into()));
        match self {
            Generator::Gnp { p, p_log_factor, n } => {
                if p.is_some() == p_log_factor.is_some() {
                    return bad("gnp needs exactly one of p and p_log_factor");
                }
                if n.is_empty() {
                    return bad("generator needs at least one n");
                }
            }
            Generator::Mobius { n }
            | Generator::Cycle { n }
            | Generator::Path { n }
            | Generator::Complete { n }
            | Generator::Star { n }
                if n.is_empty() =>
            {
                return bad("generator needs at least one n");
            }
            _ => {}
        }
        Ok(())
    }

    /// The graph for one scale and seed. Deterministic shapes get IDs and
    /// ports shuffled by the seed.
    pub fn build(&self, n: Option<usize>, seed: u64, base: &Path) -> Result<PortGraph, ExperimentError> {
        let err = |e: String| ExperimentError::Spec(e);
        let shuffle = |g: PortGraph| assign_ports(&assign_ids(&g, derive(seed, ID_TAG)), derive(seed, PORT_TAG));
        let n = n.unwrap_or(0);
        Ok(match self {
            Generator::Gnp { .. } => gen_gnp(n, self.p_at(n).expect("gnp"), seed).map_err(|e| err(e.to_string()))?,
            Generator::Mobius { .. } => shuffle(mobius_ladder(n).map_err(|e| err(e.to_string()))?),
            Generator::Cycle { .. } => shuffle(cycle(n)),
            Generator::Path { .. } => shuffle(path(n)),
            Generator::Complete { .. } => shuffle(complete(n)),
            Generator::Star { .. } => shuffle(star(n.saturating_sub(1))),
            Generator::File { path } => {
                let p = if path.is_absolute() { path.clone() } else { base.join(path) };
                read_graph(&p).map_err(|e| err(e.to_string()))?
            }
            Generator::Family { family, params } => {
                let mut params = params.clone();
                params.seed = params.seed.or(Some(seed));
                lb::build(*family, &params, None, None).map_err(|e| err(e.to_string()))?.randomized(seed).graph
            }
        })
    }
}

fn default_round_cap() -> u64 {
    1_000_000
}

fn default_c() -> u32 {
    8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub algorithm: String,
    #[serde(default)]
    pub params: BTreeMap<String, toml::Value>,
    pub generator: Generator,
    pub seeds: Vec<u64>,
    #[serde(default = "default_round_cap")]
    pub round_cap: u64,
    #[serde(default = "kt0")]
    pub knowledge: KnowledgeModel,
    #[serde(default)]
    pub bandwidth: Bandwidth,
    #[serde(default = "default_c")]
    pub congest_c: u32,
    /// Solve every instance exactly and report the ratio.
    #[serde(default)]
    pub oracle: bool,
    pub output: Option<PathBuf>,
}

fn kt0() -> KnowledgeModel {
    KnowledgeModel::Kt0
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        let spec: ExperimentSpec = toml::from_str(text).map_err(|e| ExperimentError::Spec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, crate::Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| crate::Error::Io { path: path.display().to_string(), source })?;
        Ok(Self::from_toml(&text)?)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Spec(m));
        if self.seeds.is_empty() {
            return bad("seed list is empty".into());
        }
        if self.seeds.iter().collect::<BTreeSet<_>>().len() != self.seeds.len() {
            return bad("seeds must be distinct".into());
        }
        if registry::info(&self.algorithm).is_none() {
            return bad(registry::unknown(&self.algorithm));
        }
        if self.round_cap == 0 {
            return bad("round_cap must be at least 1".into());
        }
        self.generator.validate()
    }

    /// Algorithm parameters as strings, the form the registry parses.
    pub fn algo_params(&self) -> registry::AlgoParams {
        self.params
            .iter()
            .map(|(k, v)| {
                let s = match v {
                    toml::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                (k.clone(), s)
            })
            .collect()
    }

    pub fn sim_config(&self, seed: u64) -> SimConfig {
        let bandwidth = match self.bandwidth {
            Bandwidth::Congest => BandwidthModel::Congest { c: self.congest_c },
            Bandwidth::Local => BandwidthModel::Local,
        };
        SimConfig::default()
            .with_seed(seed)
            .with_knowledge(self.knowledge)
            .with_bandwidth(bandwidth)
            .with_round_cap(self.round_cap)
    }

    /// Hash of everything that shapes a row except the seed list and the
    /// output path.
    pub fn config_hash(&self) -> String {
        let mut canon = self.clone();
        canon.seeds.clear();
        canon.output = None;
        canon.name.clear();
        let json = serde_json::to_string(&canon).expect("spec serializes");
        hex::encode(&Sha256::digest(json.as_bytes())[..6])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MIS: &str = r#"
name = "mis"
algorithm = "greedy-mis"
seeds = [1, 2]
[generator]
kind = "gnp"
n = [64, 128]
p_log_factor = 40.0
"#;

    #[test]
    fn parses_and_defaults() {
        let s = ExperimentSpec::from_toml(MIS).unwrap();
        assert_eq!(s.round_cap, 1_000_000);
        assert_eq!(s.bandwidth, Bandwidth::Congest);
        assert_eq!(s.generator.scales(), vec![Some(64), Some(128)]);
        assert_eq!(s.generator.p_at(128), Some(1.0));
        assert!(s.generator.p_at(64).unwrap() <= 1.0);
    }

    #[test]
    fn rejects_empty_and_duplicate_seeds() {
        let e = ExperimentSpec::from_toml(&MIS.replace("[1, 2]", "[]")).unwrap_err();
        assert!(e.to_string().contains("empty"));
        assert!(ExperimentSpec::from_toml(&MIS.replace("[1, 2]", "[3, 3]")).is_err());
        assert!(ExperimentSpec::from_toml(&MIS.replace("greedy-mis", "nope")).is_err());
    }

    #[test]
    fn hash_ignores_seeds_and_output() {
        let a = ExperimentSpec::from_toml(MIS).unwrap();
        let mut b = a.clone();
        b.seeds = vec![9];
        b.output = Some("x.csv".into());
        assert_eq!(a.config_hash(), b.config_hash());
        b.round_cap = 5;
        assert_ne!(a.config_hash(), b.config_hash());
    }

    #[test]
    fn family_generator() {
        let text = r#"
name = "f"
algorithm = "ball-growing"
seeds = [4]
[params]
problem = "mds"
[generator]
kind = "family"
family = "mds-exact"
params = { k = 2, l = 2 }
"#;
        let s = ExperimentSpec::from_toml(text).unwrap();
        let g = s.generator.build(None, 4, Path::new(".")).unwrap();
        assert_eq!(g.n(), 20);
    }
}
