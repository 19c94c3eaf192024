//! Algorithms by name, for the CLI and the batch driver.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;

use super::ball::{ball_solution, BallGrowConfig, BallGrowing};
use super::gather::{GatherAll, GatherConfig};
use super::greedy_mis::{mis_members, GreedyMis, MisPhaseConfig};
use super::propose::{matching_from_mates, ProposeConfig, ProposeMatching};
use super::rotation::{RotationConfig, RotationMatching};
use crate::graph::PortGraph;
use crate::oracle::{is_maximal_independent_set, Problem, Solution};
use crate::ratio::Ratio;
use crate::sim::{run, KnowledgeModel, SimConfig, SimError, SimResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlgoInfo {
    pub name: &'static str,
    pub knowledge: KnowledgeModel,
    /// Whether the program fits CONGEST messages.
    pub congest: bool,
    pub required: &'static [&'static str],
    pub optional: &'static [&'static str],
}

pub const ALGORITHMS: &[AlgoInfo] = &[
    AlgoInfo {
        name: "ball-growing",
        knowledge: KnowledgeModel::Kt0,
        congest: true,
        required: &["problem"],
        optional: &["eps", "radius-cap"],
    },
    AlgoInfo {
        name: "greedy-mis",
        knowledge: KnowledgeModel::Kt0,
        congest: true,
        required: &[],
        optional: &["p", "q-constant"],
    },
    AlgoInfo {
        name: "propose-matching",
        knowledge: KnowledgeModel::Kt0,
        congest: true,
        required: &[],
        optional: &["alpha", "degree-exchange"],
    },
    AlgoInfo {
        name: "rotation-matching",
        knowledge: KnowledgeModel::Kt0,
        congest: true,
        required: &[],
        optional: &["c", "start"],
    },
    AlgoInfo {
        name: "gather-all",
        knowledge: KnowledgeModel::Kt0,
        congest: true,
        required: &[],
        optional: &["problem"],
    },
];

/// Default step-budget constant of the rotation algorithm.
pub const ROTATION_C: f64 = 4.0;

pub fn unknown(name: &str) -> String {
    let known: Vec<&str> = ALGORITHMS.iter().map(|a| a.name).collect();
    format!("unknown algorithm {name:?} (known: {})", known.join(", "))
}

pub fn info(name: &str) -> Option<&'static AlgoInfo> {
    ALGORITHMS.iter().find(|a| a.name == name)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgoRun {
    pub problem: Problem,
    pub solution: Solution,
    pub valid: bool,
    /// Flagged failure: timeout, solver refusal or an unsuccessful rotation walk.
    pub failed: bool,
    pub rounds: u64,
    pub messages: u64,
    pub bits: u64,
    pub timed_out: bool,
}

pub type AlgoParams = BTreeMap<String, String>;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    /// The run itself broke a model rule, e.g. a bandwidth violation.
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl From<String> for RunError {
    fn from(s: String) -> Self {
        RunError::Config(s)
    }
}

fn param<T: FromStr>(params: &AlgoParams, key: &str) -> Result<Option<T>, String>
where
    T::Err: std::fmt::Display,
{
    params.get(key).map(|s| s.parse::<T>().map_err(|e| format!("bad value {s:?} for {key}: {e}"))).transpose()
}

fn finish<O>(problem: Problem, g: &PortGraph, res: &SimResult<O>, solution: Solution, failed: bool) -> AlgoRun {
    let valid = solution.check(g).is_ok();
    AlgoRun {
        problem,
        solution,
        valid,
        failed: failed || res.timed_out,
        rounds: res.rounds,
        messages: res.messages,
        bits: res.bits,
        timed_out: res.timed_out,
    }
}

/// Edge density of `g`, the `p` estimate used when none is given.
pub fn density(g: &PortGraph) -> f64 {
    let n = g.n() as f64;
    if n < 2.0 {
        1.0
    } else {
        2.0 * g.m() as f64 / (n * (n - 1.0))
    }
}

/// Runs algorithm `name` on `g`; unknown names, unknown keys, missing keys
/// and unparsable values are errors.
pub fn run_named(name: &str, g: &PortGraph, params: &AlgoParams, cfg: &SimConfig) -> Result<AlgoRun, RunError> {
    let a = info(name).ok_or_else(|| unknown(name))?;
    for key in params.keys() {
        if !a.required.contains(&key.as_str()) && !a.optional.contains(&key.as_str()) {
            return Err(format!("{name} does not take parameter {key:?}").into());
        }
    }
    for key in a.required {
        if !params.contains_key(*key) {
            return Err(format!("{name} needs parameter {key:?}").into());
        }
    }
    match name {
        "ball-growing" => {
            let problem: Problem = param(params, "problem")?.expect("required");
            let eps: Ratio = param(params, "eps")?.unwrap_or(Ratio::new(1, 2).expect("1/2"));
            let mut bc = BallGrowConfig::new(problem, eps)?;
            if let Some(cap) = param::<u32>(params, "radius-cap")? {
                bc = bc.with_radius_cap(cap);
            }
            let res = run(g, |k, _| BallGrowing::new(k, bc.clone()), cfg)?;
            let sol = ball_solution(problem, g, &res.outputs);
            Ok(finish(problem, g, &res, sol, false))
        }
        "greedy-mis" => {
            let p = param::<f64>(params, "p")?.unwrap_or_else(|| density(g));
            let c = param::<f64>(params, "q-constant")?.unwrap_or(100.0);
            let mc = MisPhaseConfig::with_constant(g.n(), p, c);
            let res = run(g, |k, seed| GreedyMis::new(k, seed, mc.clone()), cfg)?;
            let mis = mis_members(&res.outputs);
            let maximal = is_maximal_independent_set(g, &mis);
            let sol = Solution::from_vertices(Problem::MaxIs, mis);
            let mut run = finish(Problem::MaxIs, g, &res, sol, false);
            run.valid &= maximal;
            Ok(run)
        }
        "propose-matching" => {
            let mut pc = match param::<f64>(params, "alpha")? {
                Some(a) => ProposeConfig::new(a),
                None => ProposeConfig::for_graph(g),
            };
            pc.degree_exchange = param::<bool>(params, "degree-exchange")?.unwrap_or(false);
            let res = run(g, |k, seed| ProposeMatching::new(k, seed, pc.clone()), cfg)?;
            let mates: Vec<_> = res.outputs.iter().map(|o| o.mate).collect();
            let sol = matching_from_mates(g, &mates);
            Ok(finish(Problem::MaxM, g, &res, sol, false))
        }
        "rotation-matching" => {
            let c = param::<f64>(params, "c")?.unwrap_or(ROTATION_C);
            let start = match param(params, "start")? {
                Some(s) => s,
                None => g.ids().iter().copied().min().unwrap_or(1),
            };
            let rc = RotationConfig { c, start };
            let res = run(g, |k, seed| RotationMatching::new(k, seed, &rc), cfg)?;
            let mates: Vec<_> = res.outputs.iter().map(|o| o.mate).collect();
            let sol = matching_from_mates(g, &mates);
            let ok = res.outputs.iter().any(|o| o.success == Some(true));
            Ok(finish(Problem::MaxM, g, &res, sol, !ok))
        }
        "gather-all" => {
            let problem: Problem = param(params, "problem")?.unwrap_or(Problem::Mvc);
            let gc = GatherConfig { problems: vec![problem], ..GatherConfig::default() };
            let res = run(g, |k, _| GatherAll::new(k, gc.clone()), cfg)?;
            let refused = res.outputs.iter().any(|o| o.refused);
            let sol = gathered_solution(problem, g, &res.outputs);
            Ok(finish(problem, g, &res, sol, refused))
        }
        _ => unreachable!("registered above"),
    }
}

/// Union over components of the solutions each component's nodes received.
fn gathered_solution(problem: Problem, g: &PortGraph, outputs: &[super::gather::GatherOutput]) -> Solution {
    let mut ids = Vec::new();
    let mut pairs = Vec::new();
    for o in outputs {
        for s in o.solutions.iter().filter(|s| s.problem == problem) {
            ids.extend(s.ids.iter().copied());
            pairs.extend(s.pairs.iter().copied());
        }
    }
    let idx = |id| g.index_of(id).expect("known id");
    match problem {
        Problem::MaxM => {
            let mut es: Vec<(usize, usize)> =
                pairs.into_iter().map(|(a, b)| (idx(a).min(idx(b)), idx(a).max(idx(b)))).collect();
            es.sort_unstable();
            es.dedup();
            Solution::from_edges(es)
        }
        _ => {
            let mut vs: Vec<usize> = ids.into_iter().map(idx).collect();
            vs.sort_unstable();
            vs.dedup();
            Solution::from_vertices(problem, vs)
        }
    }
}
