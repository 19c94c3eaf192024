use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spec::ExperimentSpec;
use super::ExperimentError;
use crate::algos::{run_named, RunError};
use crate::oracle::{optimum, SizeGuard};

pub const SCHEMA: u32 = 1;
pub const CSV_COLUMNS: [&str; 13] =
    ["name", "seed", "n", "m", "params", "messages", "bits", "rounds", "size", "opt", "ratio", "valid", "failed"];

/// Env var holding the worker count for seed-level parallelism.
pub const WORKERS_ENV: &str = "CONGEST_WORKERS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub name: String,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub params: String,
    pub messages: u64,
    pub bits: u64,
    pub rounds: u64,
    pub size: usize,
    pub opt: Option<usize>,
    pub ratio: Option<f64>,
    pub valid: bool,
    pub failed: bool,
}

fn params_field(spec: &ExperimentSpec, n: Option<usize>) -> String {
    let mut parts = vec![format!("alg={}", spec.algorithm)];
    for (k, v) in spec.algo_params() {
        parts.push(format!("{k}={v}"));
    }
    if let Some(p) = n.and_then(|n| spec.generator.p_at(n)) {
        parts.push(format!("p={p}"));
    }
    parts.push(format!("cfg={}", spec.config_hash()));
    parts.push(format!("schema={SCHEMA}"));
    parts.join(";")
}

/// One run; model violations and timeouts become flagged rows.
pub fn run_one(spec: &ExperimentSpec, n: Option<usize>, seed: u64, base: &Path) -> Result<ResultRow, ExperimentError> {
    let g = spec.generator.build(n, seed, base)?;
    let mut params = spec.algo_params();
    if spec.algorithm == "greedy-mis" && !params.contains_key("p") {
        if let Some(p) = spec.generator.p_at(g.n()) {
            params.insert("p".into(), p.to_string());
        }
    }
    let mut row = ResultRow {
        name: spec.name.clone(),
        seed,
        n: g.n(),
        m: g.m(),
        params: params_field(spec, n),
        messages: 0,
        bits: 0,
        rounds: 0,
        size: 0,
        opt: None,
        ratio: None,
        valid: false,
        failed: true,
    };
    match run_named(&spec.algorithm, &g, &params, &spec.sim_config(seed)) {
        Ok(r) => {
            row.messages = r.messages;
            row.bits = r.bits;
            row.rounds = r.rounds;
            row.size = r.solution.size;
            row.valid = r.valid;
            row.failed = r.failed;
            if spec.oracle {
                if let Ok(opt) = optimum(r.problem, &g, SizeGuard::default()) {
                    row.opt = Some(opt);
                    row.ratio = Some(if opt == 0 { 1.0 } else { r.solution.size as f64 / opt as f64 });
                }
            }
        }
        Err(RunError::Sim(_)) => {}
        Err(RunError::Config(e)) => return Err(ExperimentError::Spec(e)),
    }
    Ok(row)
}

pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok().and_then(|s| s.trim().parse().ok()).filter(|&w| w > 0)
}

/// All rows of the spec, ordered by scale then seed as listed; the order
/// does not depend on the worker count.
pub fn run_experiment(spec: &ExperimentSpec, base: &Path) -> Result<Vec<ResultRow>, ExperimentError> {
    run_experiment_with(spec, base, workers_from_env())
}

/// As [`run_experiment`] with an explicit worker count.
pub fn run_experiment_with(
    spec: &ExperimentSpec,
    base: &Path,
    workers: Option<usize>,
) -> Result<Vec<ResultRow>, ExperimentError> {
    spec.validate()?;
    let jobs: Vec<(Option<usize>, u64)> =
        spec.generator.scales().into_iter().flat_map(|n| spec.seeds.iter().map(move |&s| (n, s))).collect();
    let go = || jobs.par_iter().map(|&(n, s)| run_one(spec, n, s, base)).collect::<Result<Vec<_>, _>>();
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| ExperimentError::Spec(e.to_string()))?
            .install(go),
        None => go(),
    }
}

pub fn run_serial(spec: &ExperimentSpec, base: &Path) -> Result<Vec<ResultRow>, ExperimentError> {
    spec.validate()?;
    let mut rows = Vec::new();
    for n in spec.generator.scales() {
        for &s in &spec.seeds {
            rows.push(run_one(spec, n, s, base)?);
        }
    }
    Ok(rows)
}

pub fn write_rows<W: Write>(rows: &[ResultRow], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    if rows.is_empty() {
        out.write_record(CSV_COLUMNS)?;
    }
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

/// Writes the CSV through a temporary file and a rename.
pub fn write_rows_file(rows: &[ResultRow], path: &Path) -> Result<(), crate::Error> {
    let io = |source| crate::Error::Io { path: path.display().to_string(), source };
    let tmp = path.with_extension("csv.tmp");
    {
        let f = std::fs::File::create(&tmp).map_err(io)?;
        write_rows(rows, std::io::BufWriter::new(f)).map_err(|e| io(e.into()))?;
    }
    std::fs::rename(&tmp, path).map_err(io)
}

pub fn read_rows<R: std::io::Read>(r: R) -> Result<Vec<ResultRow>, ExperimentError> {
    let mut rd = csv::Reader::from_reader(r);
    let header: Vec<String> =
        rd.headers().map_err(|e| ExperimentError::Spec(e.to_string()))?.iter().map(str::to_string).collect();
    if header != CSV_COLUMNS {
        return Err(ExperimentError::Spec(format!("unexpected CSV header {header:?}")));
    }
    rd.deserialize().collect::<Result<Vec<ResultRow>, _>>().map_err(|e| ExperimentError::Spec(e.to_string()))
}
