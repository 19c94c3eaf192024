use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use congest_core::experiments::{
    fit_rows, read_rows, run_experiment_with, write_rows, write_rows_file, Bandwidth, ExperimentSpec, Generator, Model,
};
use congest_core::graph::read_graph;
use congest_core::lb::{self, read_instance, write_instance, Bits, Family, LbInstance};
use congest_core::oracle::{exact_with, verify_instance, OracleError, Problem, SizeGuard, Verdict};
use congest_core::ratio::Ratio;
use congest_core::sim::KnowledgeModel;

/// Message-complexity experiments for distributed graph algorithms.
#[derive(Parser, Debug)]
#[command(name = "congest", version, args_override_self = true)]
struct Cli {
    /// TOML file with one table per subcommand; its keys mirror the long
    /// flags and command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Write a lower-bound instance and its JSON sidecar.
    Generate(GenerateArgs),
    /// Check instances against their predicted optima.
    Verify(VerifyArgs),
    /// Run an experiment and emit CSV rows.
    Run(RunArgs),
    /// Fit message counts from a result CSV against n.
    ScalingReport(ScalingArgs),
    /// Solve a graph file exactly.
    Solve(SolveArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    family: Family,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    eps: Option<Ratio>,
    #[arg(long)]
    seed: Option<u64>,
    /// Bit vector in hex, MSB first.
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    /// Shuffle IDs and ports with this seed.
    #[arg(long)]
    randomize: Option<u64>,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GuardArgs {
    #[arg(long, default_value_t = SizeGuard::default().mvc_maxis)]
    guard_mvc: usize,
    #[arg(long, default_value_t = SizeGuard::default().mds)]
    guard_mds: usize,
}

impl GuardArgs {
    fn guard(&self) -> SizeGuard {
        SizeGuard { mvc_maxis: self.guard_mvc, mds: self.guard_mds }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Treat size-guard refusals as failures.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    guard: GuardArgs,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Experiment spec; the flags below override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    algorithm: Option<String>,
    /// Algorithm parameter as key=value; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// gnp, mobius, cycle, path, complete or star.
    #[arg(long)]
    generator: Option<String>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    p_log_factor: Option<f64>,
    /// Graph file instead of a generator.
    #[arg(long, conflicts_with = "generator")]
    graph: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    #[arg(long)]
    round_cap: Option<u64>,
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    knowledge: Option<String>,
    /// congest or local.
    #[arg(long)]
    bandwidth: Option<String>,
    #[arg(long)]
    congest_c: Option<u32>,
    /// CSV destination; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, env = "CONGEST_WORKERS")]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct ScalingArgs {
    csv: PathBuf,
    /// n, n*log^2, n^2 or n^3.
    #[arg(long, default_value = "n")]
    model: Model,
    /// Keep only rows with this experiment name.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SolveArgs {
    graph: PathBuf,
    /// mvc, mds, maxis or maxm; all four when absent.
    #[arg(long)]
    problem: Option<Problem>,
    #[command(flatten)]
    guard: GuardArgs,
}

/// Splices `[subcommand]` keys from the config file in front of the
/// explicit arguments. Keys whose flag is given explicitly are dropped.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let pos = args.iter().position(|a| a == "--config");
    let inline = args.iter().find_map(|a| a.to_str().and_then(|s| s.strip_prefix("--config=")).map(PathBuf::from));
    let path = match (pos, inline) {
        (Some(i), _) => PathBuf::from(args.get(i + 1).ok_or_else(|| anyhow!("--config needs a file"))?),
        (None, Some(p)) => p,
        (None, None) => return Ok(args),
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let table: toml::Table = text.parse().with_context(|| format!("parsing {}", path.display()))?;
    let names = ["generate", "verify", "run", "scaling-report", "solve"];
    let Some(sub_at) = args.iter().position(|a| a.to_str().is_some_and(|s| names.contains(&s))) else {
        return Ok(args);
    };
    let sub = args[sub_at].to_str().expect("matched").to_string();
    let mut extra = Vec::new();
    if let Some(section) = table.get(&sub) {
        let section = section.as_table().ok_or_else(|| anyhow!("[{sub}] in {} must be a table", path.display()))?;
        let given = |flag: &str| {
            args[sub_at + 1..]
                .iter()
                .any(|a| a.to_str().is_some_and(|s| s == flag || s.starts_with(&format!("{flag}="))))
        };
        for (key, value) in section {
            let flag = format!("--{}", key.replace('_', "-"));
            if given(&flag) {
                continue;
            }
            match value {
                toml::Value::Boolean(true) => extra.push(flag.into()),
                toml::Value::Boolean(false) => {}
                toml::Value::Array(items) => {
                    for item in items {
                        extra.push(flag.clone().into());
                        extra.push(scalar(item)?.into());
                    }
                }
                other => {
                    extra.push(flag.into());
                    extra.push(scalar(other)?.into());
                }
            }
        }
    }
    let mut out: Vec<OsString> = args[..=sub_at].to_vec();
    out.extend(extra);
    out.extend(args[sub_at + 1..].iter().cloned());
    Ok(out)
}

fn scalar(v: &toml::Value) -> Result<String> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Boolean(b) => b.to_string(),
        other => bail!("unsupported config value {other}"),
    })
}

fn usage_hint(family: Family) -> &'static str {
    match family {
        Family::MvcExact | Family::MdsExact => {
            "needs --k (power of 2), --l and either --x/--y (hex, k² bits) or --seed"
        }
        Family::MdsCrossing => "needs --n and either --x/--y (hex, n² bits) or --seed",
        Family::MdsFixed => "needs an even --n of at least 4",
        Family::MvcBase => "needs --t and --c with t a multiple of 4c",
        Family::MaxisBase => "needs --t and --eps with eps·t a positive integer",
        Family::MaxmLb => "needs --n and --eps with floor(eps·n/7) at least 1; --seed picks IDs and ports",
    }
}

fn bits_len(family: Family, a: &GenerateArgs) -> Option<usize> {
    match family {
        Family::MvcExact | Family::MdsExact => a.k.map(|k| k * k),
        Family::MdsCrossing => a.n.map(|n| n * n),
        _ => None,
    }
}

fn build_instance(a: &GenerateArgs) -> Result<LbInstance> {
    let params = lb::Params { k: a.k, l: a.l, n: a.n, t: a.t, c: a.c, eps: a.eps, seed: a.seed };
    let hint = |e: String| anyhow!("{e}\n{} {}", a.family, usage_hint(a.family));
    let parse = |h: &Option<String>| -> Result<Option<Bits>> {
        match (h, bits_len(a.family, a)) {
            (Some(h), Some(len)) => Ok(Some(Bits::from_hex(h, len).map_err(|e| hint(e.to_string()))?)),
            (Some(_), None) => Err(hint("--x/--y do not apply here".into())),
            (None, _) => Ok(None),
        }
    };
    let inst = lb::build(a.family, &params, parse(&a.x)?, parse(&a.y)?).map_err(|e| hint(e.to_string()))?;
    Ok(match a.randomize {
        Some(s) => inst.randomized(s),
        None => inst,
    })
}

fn cmd_generate(a: &GenerateArgs) -> Result<ExitCode> {
    let inst = build_instance(a)?;
    write_instance(&inst, &a.out)?;
    println!("{}: {} nodes, {} edges, predicted {}", a.out.display(), inst.graph.n(), inst.graph.m(), inst.predicted);
    Ok(ExitCode::SUCCESS)
}

/// Differences between a stored instance and a fresh build from its own
/// sidecar parameters.
fn regeneration_diff(inst: &LbInstance) -> Vec<String> {
    let fresh = match lb::build(inst.family, &inst.params, inst.x.clone(), inst.y.clone()) {
        Ok(f) => f,
        Err(e) => return vec![format!("cannot rebuild from sidecar: {e}")],
    };
    let mut diff = Vec::new();
    if fresh.predicted != inst.predicted {
        diff.push(format!("predicted: stored {} vs rebuilt {}", inst.predicted, fresh.predicted));
    }
    let (a, b) = (&inst.graph, &fresh.graph);
    if (a.n(), a.m()) != (b.n(), b.m()) {
        diff.push(format!("graph: stored {}/{} vs rebuilt {}/{} (nodes/edges)", a.n(), a.m(), b.n(), b.m()));
        return diff;
    }
    let named = |i: &LbInstance| -> Vec<(String, String)> {
        sorted(
            i.graph
                .edge_pairs()
                .into_iter()
                .map(|(u, v)| {
                    let (p, q) = (i.names[u].clone(), i.names[v].clone());
                    if p <= q {
                        (p, q)
                    } else {
                        (q, p)
                    }
                })
                .collect(),
        )
    };
    let (mine, theirs) = (named(inst), named(&fresh));
    let extra: Vec<_> = mine.iter().filter(|e| theirs.binary_search(e).is_err()).collect();
    let missing: Vec<_> = theirs.iter().filter(|e| mine.binary_search(e).is_err()).collect();
    if !extra.is_empty() || !missing.is_empty() {
        let show =
            |es: &[&(String, String)]| es.iter().take(4).map(|(p, q)| format!("{p}-{q}")).collect::<Vec<_>>().join(" ");
        diff.push(format!(
            "graph: {} edges not in rebuild [{}], {} missing [{}]",
            extra.len(),
            show(&extra),
            missing.len(),
            show(&missing)
        ));
    }
    diff
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

#[derive(serde::Serialize)]
struct VerifyRow {
    file: String,
    status: &'static str,
    family: Option<String>,
    predicted: Option<String>,
    optimum: Option<usize>,
    detail: String,
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode> {
    let mut rows = Vec::new();
    for f in &a.files {
        let file = f.display().to_string();
        let row = match read_instance(f) {
            Err(e) => {
                VerifyRow { file, status: "fail", family: None, predicted: None, optimum: None, detail: e.to_string() }
            }
            Ok(inst) => {
                let diff = regeneration_diff(&inst);
                match verify_instance(&inst, a.guard.guard()) {
                    Ok(r) => {
                        let pass = r.verdict == Verdict::Pass && diff.is_empty();
                        VerifyRow {
                            file,
                            status: if pass { "pass" } else { "fail" },
                            family: Some(r.family),
                            predicted: Some(r.predicted.to_string()),
                            optimum: Some(r.optimum),
                            detail: diff.join("; "),
                        }
                    }
                    Err(e @ OracleError::SizeGuard { .. }) => VerifyRow {
                        file,
                        status: if diff.is_empty() { "refused" } else { "fail" },
                        family: Some(inst.family.to_string()),
                        predicted: Some(inst.predicted.to_string()),
                        optimum: None,
                        detail: [vec![e.to_string()], diff].concat().join("; "),
                    },
                    Err(e) => return Err(e.into()),
                }
            }
        };
        rows.push(row);
    }
    if a.json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        for r in &rows {
            let opt = r.optimum.map_or("-".to_string(), |o| o.to_string());
            println!(
                "{:<7} {}  {}  predicted {}  optimum {}{}",
                r.status,
                r.file,
                r.family.as_deref().unwrap_or("?"),
                r.predicted.as_deref().unwrap_or("?"),
                opt,
                if r.detail.is_empty() { String::new() } else { format!("  [{}]", r.detail) }
            );
        }
    }
    let count = |s: &str| rows.iter().filter(|r| r.status == s).count();
    let (fails, refused) = (count("fail"), count("refused"));
    eprintln!("{} pass, {fails} fail, {refused} refused", count("pass"));
    let bad = fails > 0 || (a.strict && refused > 0);
    Ok(if bad { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn spec_from_flags(a: &RunArgs) -> Result<(ExperimentSpec, PathBuf)> {
    let (mut spec, base) = match &a.spec {
        Some(p) => {
            let spec = ExperimentSpec::load(p)?;
            (spec, p.parent().map(Path::to_path_buf).unwrap_or_default())
        }
        None => {
            let generator = match (&a.graph, a.generator.as_deref()) {
                (Some(path), _) => Generator::File { path: path.clone() },
                (None, Some(kind)) => {
                    let n = a.n.clone();
                    match kind {
                        "gnp" => Generator::Gnp { n, p: a.p, p_log_factor: a.p_log_factor },
                        "mobius" => Generator::Mobius { n },
                        "cycle" => Generator::Cycle { n },
                        "path" => Generator::Path { n },
                        "complete" => Generator::Complete { n },
                        "star" => Generator::Star { n },
                        other => bail!("unknown generator {other:?} (gnp, mobius, cycle, path, complete, star)"),
                    }
                }
                (None, None) => bail!("run needs --spec, --graph or --generator"),
            };
            let algorithm = a.algorithm.clone().ok_or_else(|| anyhow!("run needs --algorithm"))?;
            let spec = ExperimentSpec {
                name: a.name.clone().unwrap_or_else(|| algorithm.clone()),
                algorithm,
                params: BTreeMap::new(),
                generator,
                seeds: Vec::new(),
                round_cap: 1_000_000,
                knowledge: KnowledgeModel::Kt0,
                bandwidth: Bandwidth::Congest,
                congest_c: 8,
                oracle: false,
                output: None,
            };
            (spec, PathBuf::from("."))
        }
    };
    if let Some(name) = &a.name {
        spec.name = name.clone();
    }
    if let Some(alg) = &a.algorithm {
        spec.algorithm = alg.clone();
    }
    for kv in &a.params {
        let (k, v) = kv.split_once('=').ok_or_else(|| anyhow!("--param expects KEY=VALUE, got {kv:?}"))?;
        spec.params.insert(k.trim().to_string(), toml::Value::String(v.trim().to_string()));
    }
    if let Some(seeds) = &a.seeds {
        spec.seeds = seeds.clone();
    }
    if let Some(c) = a.round_cap {
        spec.round_cap = c;
    }
    spec.oracle |= a.oracle;
    if let Some(k) = &a.knowledge {
        spec.knowledge = match k.as_str() {
            "kt0" => KnowledgeModel::Kt0,
            "kt1" => KnowledgeModel::Kt1,
            other => bail!("unknown knowledge model {other:?} (kt0, kt1)"),
        };
    }
    if let Some(b) = &a.bandwidth {
        spec.bandwidth = match b.as_str() {
            "congest" => Bandwidth::Congest,
            "local" => Bandwidth::Local,
            other => bail!("unknown bandwidth model {other:?} (congest, local)"),
        };
    }
    if let Some(c) = a.congest_c {
        spec.congest_c = c;
    }
    if let Some(o) = &a.output {
        spec.output = Some(o.clone());
    }
    spec.validate()?;
    Ok((spec, base))
}

fn cmd_run(a: &RunArgs) -> Result<ExitCode> {
    let (spec, base) = spec_from_flags(a)?;
    let rows = run_experiment_with(&spec, &base, a.workers.filter(|&w| w > 0))?;
    match &spec.output {
        Some(p) => {
            let p = if p.is_absolute() || a.output.is_some() { p.clone() } else { base.join(p) };
            write_rows_file(&rows, &p)?;
            eprintln!("{} rows to {}", rows.len(), p.display());
        }
        None => write_rows(&rows, std::io::stdout().lock())?,
    }
    let flagged = rows.iter().filter(|r| r.failed || !r.valid).count();
    if flagged > 0 {
        eprintln!("{flagged} of {} rows flagged invalid or failed", rows.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_scaling(a: &ScalingArgs) -> Result<ExitCode> {
    let f = std::fs::File::open(&a.csv).with_context(|| format!("opening {}", a.csv.display()))?;
    let mut rows = read_rows(f)?;
    if let Some(name) = &a.name {
        rows.retain(|r| &r.name == name);
    }
    let fit = fit_rows(&rows, a.model)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&fit)?);
    } else {
        println!(
            "model {}: messages ~ {:.4} * {}; free log-log exponent {:.3}; log rmse {:.3}",
            fit.model, fit.coefficient, fit.model, fit.exponent, fit.log_rmse
        );
        println!("n,messages,fitted");
        for p in &fit.points {
            println!("{},{:.1},{:.1}", p.n, p.messages, p.fitted);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(a: &SolveArgs) -> Result<ExitCode> {
    let g = read_graph(&a.graph)?;
    let problems = match a.problem {
        Some(p) => vec![p],
        None => Problem::ALL.to_vec(),
    };
    for p in problems {
        let sol = exact_with(p, &g, a.guard.guard())?;
        let witness: Vec<String> = match p {
            Problem::MaxM => sol.edges().iter().map(|&(u, v)| format!("{}-{}", g.id(u), g.id(v))).collect(),
            _ => sol.ids(&g).iter().map(u64::to_string).collect(),
        };
        println!("{p} {} : {}", sol.size, witness.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let args = match expand_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    let res = match &cli.cmd {
        Cmd::Generate(a) => cmd_generate(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Run(a) => cmd_run(a),
        Cmd::ScalingReport(a) => cmd_scaling(a),
        Cmd::Solve(a) => cmd_solve(a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
