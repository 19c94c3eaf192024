//! Lower-bound graph families with their predicted optima.
//!
//! Bit vectors `x`, `y` of length `k²` are flattened row-major:
//! `x_ij` with `i, j ∈ 1..=k` lives at position `(i-1)·k + (j-1)`. Hex
//! encodings are MSB-first, so the first hex digit carries positions 0..4.

mod base;
mod crossing;
mod exact;
mod sidecar;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{assign_ids, assign_ports, GraphError, PortGraph};
use crate::oracle::Problem;
use crate::ratio::Ratio;

pub use base::{base_crossings, maxis_base_graph, maxm_lb_graph, mvc_base_graph};
pub use crossing::{eligible_count_formula, eligible_crossings, mds_crossing_graph, mds_fixed_member};
pub use exact::{check_separation, mds_exact_family, mvc_exact_family, SeparationReport};
pub use sidecar::{read_instance, write_instance, Sidecar};

#[derive(Debug, Error)]
pub enum LbError {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("bit vector {name} has {got} bits, expected {expected}")]
    Length { name: &'static str, expected: usize, got: usize },
    #[error("{0} is not a valid hex bit vector")]
    Hex(String),
    #[error("operation needs family {expected}, got {got}")]
    Family { expected: String, got: Family },
    #[error("malformed sidecar: {0}")]
    Sidecar(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    MvcExact,
    MdsExact,
    MdsCrossing,
    MdsFixed,
    MvcBase,
    MaxisBase,
    MaxmLb,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::MvcExact,
        Family::MdsExact,
        Family::MdsCrossing,
        Family::MdsFixed,
        Family::MvcBase,
        Family::MaxisBase,
        Family::MaxmLb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::MvcExact => "mvc-exact",
            Family::MdsExact => "mds-exact",
            Family::MdsCrossing => "mds-crossing",
            Family::MdsFixed => "mds-fixed",
            Family::MvcBase => "mvc-base",
            Family::MaxisBase => "maxis-base",
            Family::MaxmLb => "maxm-lb",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = LbError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| LbError::Param(format!("unknown family '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cmp {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl Cmp {
    pub fn holds(self, actual: usize, value: usize) -> bool {
        match self {
            Cmp::Eq => actual == value,
            Cmp::Le => actual <= value,
            Cmp::Ge => actual >= value,
        }
    }
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cmp::Eq => "=",
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
        })
    }
}

/// Predicted optimum: `opt(problem) cmp value`, tagged with the statement
/// that predicts it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicted {
    pub problem: Problem,
    pub cmp: Cmp,
    pub value: usize,
    pub lemma: String,
}

impl fmt::Display for Predicted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} ({})", self.problem, self.cmp, self.value, self.lemma)
    }
}

/// A fixed-length bit string.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn zeros(len: usize) -> Bits {
        Bits(vec![false; len])
    }

    pub fn ones(len: usize) -> Bits {
        Bits(vec![true; len])
    }

    pub fn from_bools(b: Vec<bool>) -> Bits {
        Bits(b)
    }

    /// First `len` bits of an MSB-first hex string; further bits are ignored.
    pub fn from_hex(hex: &str, len: usize) -> Result<Bits, LbError> {
        let digits: Vec<u8> = hex
            .trim()
            .trim_start_matches("0x")
            .chars()
            .map(|c| c.to_digit(16).map(|d| d as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| LbError::Hex(hex.to_string()))?;
        if digits.len() * 4 < len {
            return Err(LbError::Length { name: "hex", expected: len, got: digits.len() * 4 });
        }
        Ok(Bits((0..len).map(|p| digits[p / 4] >> (3 - p % 4) & 1 == 1).collect()))
    }

    /// Shortest MSB-first hex encoding, zero padded in the last digit.
    pub fn to_hex(&self) -> String {
        self.0
            .chunks(4)
            .map(|c| {
                let d = c.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | (b as u32) << (3 - i));
                char::from_digit(d, 16).expect("nibble")
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, pos: usize) -> bool {
        self.0[pos]
    }

    /// `x_ij` with 1-based `i, j` in a `k × k` matrix.
    pub fn at(&self, k: usize, i: usize, j: usize) -> bool {
        self.0[(i - 1) * k + (j - 1)]
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        self.0[pos] = value;
    }

    pub fn flipped(&self, pos: usize) -> Bits {
        let mut b = self.clone();
        b.0[pos] = !b.0[pos];
        b
    }

    pub fn complement(&self) -> Bits {
        Bits(self.0.iter().map(|b| !b).collect())
    }

    /// Some position set in both strings.
    pub fn intersects(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| *a && *b)
    }

    pub fn from_seed(len: usize, seed: u64) -> Bits {
        use rand::Rng;
        let mut r = crate::rng::rng(seed);
        Bits((0..len).map(|_| r.random::<bool>()).collect())
    }
}

/// Family parameters; absent entries do not apply to the family.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<Ratio>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LbInstance {
    pub graph: PortGraph,
    pub family: Family,
    pub params: Params,
    pub x: Option<Bits>,
    pub y: Option<Bits>,
    /// Part label per node index (`A1`, `C3`, `X'`, ...).
    pub parts: Vec<String>,
    /// Vertex name per node index (`a1^2`, `t3^4`, ...).
    pub names: Vec<String>,
    /// Separation layer `1..=ℓ` per node, for the two exact families.
    pub layers: Option<Vec<usize>>,
    pub predicted: Predicted,
}

impl LbInstance {
    pub fn node(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn part(&self, label: &str) -> Vec<usize> {
        (0..self.parts.len()).filter(|&v| self.parts[v] == label).collect()
    }

    /// Same instance with IDs and ports drawn from `seed`.
    pub fn randomized(&self, seed: u64) -> LbInstance {
        let g = assign_ids(&self.graph, crate::rng::derive(seed, crate::rng::tags::GNP_IDS));
        let g = assign_ports(&g, crate::rng::derive(seed, crate::rng::tags::GNP_PORTS));
        let mut out = self.clone();
        out.graph = g;
        out.params.seed = Some(seed);
        out
    }
}

/// `log₂ k` for a power of two `k ≥ 2`.
pub(crate) fn log2_exact(k: usize, what: &str) -> Result<usize, LbError> {
    if k < 2 || !k.is_power_of_two() {
        return Err(LbError::Param(format!("{what} must be a power of 2 (at least 2), got {k}")));
    }
    Ok(k.trailing_zeros() as usize)
}

pub(crate) fn check_len(name: &'static str, b: &Bits, expected: usize) -> Result<(), LbError> {
    if b.len() != expected {
        return Err(LbError::Length { name, expected, got: b.len() });
    }
    Ok(())
}

/// Incremental vertex/edge list builder with names and part labels.
#[derive(Default)]
pub(crate) struct Builder {
    names: Vec<String>,
    parts: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    pub fn add(&mut self, name: String, part: &str) -> usize {
        self.names.push(name);
        self.parts.push(part.to_string());
        self.names.len() - 1
    }

    pub fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    pub fn clique(&mut self, vs: &[usize]) {
        for (a, &u) in vs.iter().enumerate() {
            for &v in &vs[a + 1..] {
                self.edge(u, v);
            }
        }
    }

    pub fn finish(self) -> Result<(PortGraph, Vec<String>, Vec<String>), LbError> {
        let g = PortGraph::from_edges(self.names.len(), &self.edges)?;
        Ok((g, self.parts, self.names))
    }
}

/// Builds a member of `family`. Families indexed by bit vectors take `x`
/// and `y`; when both are absent and `params.seed` is set they are drawn
/// from the seed.
pub fn build(family: Family, params: &Params, x: Option<Bits>, y: Option<Bits>) -> Result<LbInstance, LbError> {
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| LbError::Param(format!("{family} needs --{name}")));
    let bits = |len: usize| -> Result<(Bits, Bits), LbError> {
        match (x.clone(), y.clone(), params.seed) {
            (Some(x), Some(y), _) => Ok((x, y)),
            (None, None, Some(s)) => Ok((Bits::from_seed(len, s), Bits::from_seed(len, crate::rng::derive(s, 1)))),
            _ => Err(LbError::Param(format!("{family} needs both --x and --y, or --seed"))),
        }
    };
    let eps = || params.eps.ok_or_else(|| LbError::Param(format!("{family} needs --eps")));
    let mut inst = match family {
        Family::MvcExact | Family::MdsExact => {
            let (k, l) = (need(params.k, "k")?, need(params.l, "l")?);
            log2_exact(k, "k")?;
            let (x, y) = bits(k * k)?;
            if family == Family::MvcExact {
                mvc_exact_family(k, l, &x, &y)?
            } else {
                mds_exact_family(k, l, &x, &y)?
            }
        }
        Family::MdsCrossing => {
            let n = need(params.n, "n")?;
            let (x, y) = bits(n * n)?;
            mds_crossing_graph(n, &x, &y)?
        }
        Family::MdsFixed => mds_fixed_member(need(params.n, "n")?)?,
        Family::MvcBase => mvc_base_graph(need(params.t, "t")?, need(params.c, "c")?)?,
        Family::MaxisBase => maxis_base_graph(need(params.t, "t")?, eps()?)?,
        Family::MaxmLb => maxm_lb_graph(need(params.n, "n")?, eps()?, params.seed.unwrap_or(0))?,
    };
    if inst.params.seed.is_none() {
        inst.params.seed = params.seed;
    }
    Ok(inst)
}
